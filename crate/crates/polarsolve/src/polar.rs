//! Jacobian minors, chart selections and critical-point systems.
//!
//! For a system `f1 … fp` in `n` variables, a chart is a choice of `p`
//! Jacobian columns plus a deleted row and deleted column. Each chart
//! contributes a localized equation system whose solutions are critical
//! points of the last coordinate on the input variety; the union over all
//! charts covers every nonsingular critical point while singular points are
//! excluded by the localization. Before chart enumeration the whole system is
//! pulled back through a unit lower-triangular coordinate change with random
//! rational parameters, which realizes the genericity the construction needs
//! (verified downstream, retried on failure).

use rand::Rng;
use rand::SeedableRng;

use crate::ratpoly::{poly_det, Matrix, MultiPoly};
use crate::scalar::Scalar;

/// All strictly increasing `k`-subsets of `0..n`, in lexicographic order.
pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        for i in start..n {
            current.push(i);
            rec(i + 1, n, k, current, out);
            current.pop();
        }
    }
    rec(0, n, k, &mut current, &mut out);
    out
}

/// Input system: `p` polynomials in `n` variables with `1 <= p <= n`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SystemInput<T: Scalar> {
    n: usize,
    p: usize,
    polys: Vec<MultiPoly<T>>,
    degree_bound: usize,
}

impl<T: Scalar> SystemInput<T> {
    pub fn new(n: usize, polys: Vec<MultiPoly<T>>) -> Self {
        let p = polys.len();
        assert!(p >= 1 && p <= n, "need 1 <= p <= n, got p={p}, n={n}");
        let mut degree_bound = 0;
        for (k, f) in polys.iter().enumerate() {
            assert_eq!(f.nvars(), n, "f{} lives in {} variables, expected {n}", k + 1, f.nvars());
            let d = f.total_degree().unwrap_or_else(|| panic!("f{} is the zero polynomial", k + 1));
            degree_bound = degree_bound.max(d);
        }
        SystemInput { n, p, polys, degree_bound }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn polys(&self) -> &[MultiPoly<T>] {
        &self.polys
    }

    pub fn degree_bound(&self) -> usize {
        self.degree_bound
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.polys.iter().map(|f| f.total_degree().unwrap_or(0)).collect()
    }

    /// The `p x n` matrix of partial derivatives.
    pub fn jacobian(&self) -> Vec<Vec<MultiPoly<T>>> {
        self.polys
            .iter()
            .map(|f| (0..self.n).map(|j| f.partial_derivative(j)).collect())
            .collect()
    }

    /// Determinant of the `p` Jacobian columns `columns` (0-based, strictly
    /// increasing).
    pub fn minor(&self, columns: &[usize]) -> MultiPoly<T> {
        assert_eq!(columns.len(), self.p, "need exactly p columns");
        assert!(
            columns.windows(2).all(|w| w[0] < w[1]) && columns.iter().all(|&c| c < self.n),
            "columns must be strictly increasing within 0..n"
        );
        let jac = self.jacobian();
        minor_of(&jac, columns)
    }
}

fn minor_of<T: Scalar>(jac: &[Vec<MultiPoly<T>>], columns: &[usize]) -> MultiPoly<T> {
    let m: Vec<Vec<MultiPoly<T>>> = jac
        .iter()
        .map(|row| columns.iter().map(|&c| row[c].clone()).collect())
        .collect();
    poly_det(&m)
}

/// One chart: `p` Jacobian columns plus a deleted row and a deleted column
/// position. There are exactly `p^2 * C(n, p)` distinct selections.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MinorSelection {
    /// Strictly increasing column indices, 0-based, length `p`.
    pub columns: Vec<usize>,
    /// Deleted row, `0..p`.
    pub deleted_row: usize,
    /// Deleted position within `columns`, `0..p`.
    pub deleted_col_pos: usize,
}

impl MinorSelection {
    pub fn new(columns: Vec<usize>, deleted_row: usize, deleted_col_pos: usize) -> Self {
        let p = columns.len();
        assert!(p >= 1, "empty column selection");
        assert!(columns.windows(2).all(|w| w[0] < w[1]), "columns must be strictly increasing");
        assert!(deleted_row < p && deleted_col_pos < p, "deleted row/column out of range");
        MinorSelection { columns, deleted_row, deleted_col_pos }
    }

    /// The canonical selection: columns `0..p`, last row and last column
    /// deleted.
    pub fn canonical(p: usize) -> Self {
        Self::new((0..p).collect(), p - 1, p - 1)
    }

    pub fn deleted_column(&self) -> usize {
        self.columns[self.deleted_col_pos]
    }

    /// The retained columns (all but the deleted one), ascending.
    pub fn kept_columns(&self) -> Vec<usize> {
        let mut kept = self.columns.clone();
        kept.remove(self.deleted_col_pos);
        kept
    }

    /// All `p^2 * C(n, p)` selections, in a fixed deterministic order.
    pub fn enumerate(n: usize, p: usize) -> Vec<MinorSelection> {
        let mut out = Vec::new();
        for columns in combinations(n, p) {
            for deleted_row in 0..p {
                for deleted_col_pos in 0..p {
                    out.push(MinorSelection::new(columns.clone(), deleted_row, deleted_col_pos));
                }
            }
        }
        out
    }

    /// Column order realizing this chart: the kept columns first, then the
    /// rest ascending (so the last variable's column sits in the final,
    /// excluded slot). When the last column is itself among the kept ones no
    /// order can exclude it; the deleted column is then promoted to the first
    /// minor slot, which puts the chart's own minor into its equations and
    /// makes the chart empty under its localization. Such charts cannot
    /// describe critical points of the last coordinate and must not
    /// contribute points.
    fn column_order(&self, n: usize) -> Vec<usize> {
        let kept = self.kept_columns();
        let mut order = kept.clone();
        let in_kept = |c: usize| kept.binary_search(&c).is_ok();
        if in_kept(n - 1) {
            order.push(self.deleted_column());
            for c in 0..n {
                if !in_kept(c) && c != self.deleted_column() {
                    order.push(c);
                }
            }
        } else {
            for c in 0..n {
                if !in_kept(c) {
                    order.push(c);
                }
            }
        }
        order
    }
}

impl std::fmt::Display for MinorSelection {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let cols: Vec<String> = self.columns.iter().map(|c| (c + 1).to_string()).collect();
        write!(f, "{}:{},{}", cols.join(","), self.deleted_row + 1, self.deleted_col_pos + 1)
    }
}

/// Unit lower-triangular coordinate change `X = A * Y`.
///
/// `A` is the identity on the first `p - 1` coordinates and a unit
/// lower-triangular block with `(n-p+1)(n-p)/2` rational parameters on the
/// rest, so `det A = 1` always.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CoordinateChange<T: Scalar> {
    params: Vec<T>,
    matrix: Matrix<T>,
}

impl<T: Scalar> CoordinateChange<T> {
    pub fn identity(n: usize, p: usize) -> Self {
        let s = Self::param_count(n, p);
        Self::from_params(n, p, vec![T::zero(); s])
    }

    pub fn param_count(n: usize, p: usize) -> usize {
        let b = n - p + 1;
        b * (b - 1) / 2
    }

    pub fn from_params(n: usize, p: usize, params: Vec<T>) -> Self {
        assert!(p >= 1 && p <= n);
        assert_eq!(params.len(), Self::param_count(n, p), "wrong parameter count");
        let mut matrix = Matrix::identity(n);
        let base = p - 1;
        let mut it = params.iter();
        for r in 1..n - base {
            for t in 0..r {
                matrix[(base + r, base + t)] = it.next().unwrap().clone();
            }
        }
        CoordinateChange { params, matrix }
    }

    /// Parameters drawn from a seeded stream: integers uniform in
    /// `[-bound, bound]`.
    pub fn random(n: usize, p: usize, seed: u64, bound: i64) -> Self {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let params = (0..Self::param_count(n, p))
            .map(|_| T::from_i64(rng.random_range(-bound..=bound)))
            .collect();
        Self::from_params(n, p, params)
    }

    pub fn params(&self) -> &[T] {
        &self.params
    }

    pub fn matrix(&self) -> &Matrix<T> {
        &self.matrix
    }

    pub fn is_identity(&self) -> bool {
        self.params.iter().all(|z| z.is_zero())
    }
}

/// Pull the system back through the coordinate change: `G_k(Y) = f_k(A Y)`.
pub fn transform_system<T: Scalar>(
    s: &SystemInput<T>,
    change: &CoordinateChange<T>,
) -> SystemInput<T> {
    let n = s.n();
    assert_eq!(change.matrix().rows(), n);
    if change.is_identity() {
        return s.clone();
    }
    let images: Vec<MultiPoly<T>> = (0..n)
        .map(|i| {
            let mut form = MultiPoly::zero(n);
            for j in 0..n {
                let a = &change.matrix()[(i, j)];
                if !a.is_zero() {
                    form = &form + &MultiPoly::variable(n, j).scaled(a);
                }
            }
            form
        })
        .collect();
    let polys = s.polys().iter().map(|f| f.substitute(&images)).collect();
    SystemInput::new(n, polys)
}

/// One chart's equation system.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PolarSystem<T: Scalar> {
    pub chart: MinorSelection,
    /// Number of minor equations, `1..=n-p` (0 only when `p = n`).
    pub polar_index: usize,
    /// `f1 … fp` followed by `polar_index` minors.
    pub equations: Vec<MultiPoly<T>>,
    /// Localization polynomial: pivot minor times the chart's own minor.
    pub localization: MultiPoly<T>,
}

/// Build the chart system for polar index `i`: the input equations, the `i`
/// minors determined by the chart's column order, and the localization.
pub fn polar_system<T: Scalar>(
    s: &SystemInput<T>,
    chart: &MinorSelection,
    polar_index: usize,
) -> PolarSystem<T> {
    let (n, p) = (s.n(), s.p());
    assert_eq!(chart.columns.len(), p, "chart has wrong column count");
    assert!(chart.columns.iter().all(|&c| c < n), "chart column out of range");
    assert!(
        (1..=n - p).contains(&polar_index) || (polar_index == 0 && p == n),
        "polar index {polar_index} out of range for n={n}, p={p}"
    );

    let jac = s.jacobian();
    let kept = chart.kept_columns();
    let order = chart.column_order(n);

    let mut equations = s.polys().to_vec();
    for slot in 0..polar_index {
        let mut cols = kept.clone();
        cols.push(order[p - 1 + slot]);
        cols.sort_unstable();
        equations.push(minor_of(&jac, &cols));
    }

    // Pivot minor: delete the chart's row and column from the selected block.
    let rows: Vec<usize> = (0..p).filter(|&r| r != chart.deleted_row).collect();
    let pivot_matrix: Vec<Vec<MultiPoly<T>>> = rows
        .iter()
        .map(|&r| kept.iter().map(|&c| jac[r][c].clone()).collect())
        .collect();
    let pivot = if p == 1 { MultiPoly::one(n) } else { poly_det(&pivot_matrix) };
    let selection_minor = minor_of(&jac, &chart.columns);
    let localization = &pivot * &selection_minor;

    PolarSystem { chart: chart.clone(), polar_index, equations, localization }
}

/// Exchange identity between a `(k-1)`-minor and a `k`-minor of `a` (both
/// over the first rows):
///
/// `M(small) * M(big) = sum over j in big \ small of
///     sign_j * M(big \ {j}) * M(small U {j})`
///
/// with `sign_j = (-1)^(pos(j) + ins(j) + 1)`, `pos` the 1-based position of
/// `j` in `big` and `ins` the number of elements of `small` below `j`. The
/// signs come from Laplace-expanding the block matrix built from the two
/// index sets in both directions. Returns whether the identity holds exactly.
pub fn exchange_identity_check<T: Scalar>(a: &Matrix<T>, big: &[usize], small: &[usize]) -> bool {
    let k = big.len();
    assert!(k >= 1, "empty index set");
    assert_eq!(small.len(), k - 1, "index sets must have sizes k and k-1");
    assert!(k <= a.rows(), "matrix has too few rows");
    for set in [big, small] {
        assert!(
            set.windows(2).all(|w| w[0] < w[1]) && set.iter().all(|&c| c < a.cols()),
            "malformed index tuple"
        );
    }

    let first_rows: Vec<usize> = (0..k).collect();
    let m = |rows: &[usize], cols: &[usize]| a.submatrix(rows, cols).det();

    let lhs = m(&first_rows[..k - 1], small) * &m(&first_rows, big);

    let mut rhs = T::zero();
    for (pos0, &j) in big.iter().enumerate() {
        if small.contains(&j) {
            continue;
        }
        let without_j: Vec<usize> = big.iter().copied().filter(|&c| c != j).collect();
        let mut with_j: Vec<usize> = small.to_vec();
        let ins = with_j.iter().filter(|&&c| c < j).count();
        with_j.insert(ins, j);
        let term = m(&first_rows[..k - 1], &without_j) * &m(&first_rows, &with_j);
        // pos is 1-based, so pos + ins + 1 is even exactly when pos0 + ins is.
        if (pos0 + ins) % 2 == 0 {
            rhs = rhs + &term;
        } else {
            rhs = rhs - &term;
        }
    }
    lhs == rhs
}

/// `det(J * J^T)`, asserted exactly equal to the sum of squared `p`-minors
/// before returning.
pub fn cauchy_binet_d<T: Scalar>(s: &SystemInput<T>) -> MultiPoly<T> {
    let jac = s.jacobian();
    let d = gram_det(&jac);
    let sum = minor_square_sum(&jac);
    assert_eq!(d, sum, "Cauchy-Binet identity failed: det(J J^T) != sum of squared minors");
    d
}

pub(crate) fn gram_det<T: Scalar>(jac: &[Vec<MultiPoly<T>>]) -> MultiPoly<T> {
    let p = jac.len();
    let n = jac[0].len();
    let nvars = jac[0][0].nvars();
    let mut gram = vec![vec![MultiPoly::zero(nvars); p]; p];
    for i in 0..p {
        for j in 0..p {
            let mut acc = MultiPoly::zero(nvars);
            for c in 0..n {
                acc = &acc + &(&jac[i][c] * &jac[j][c]);
            }
            gram[i][j] = acc;
        }
    }
    poly_det(&gram)
}

pub(crate) fn minor_square_sum<T: Scalar>(jac: &[Vec<MultiPoly<T>>]) -> MultiPoly<T> {
    let p = jac.len();
    let n = jac[0].len();
    let nvars = jac[0][0].nvars();
    let mut acc = MultiPoly::zero(nvars);
    for cols in combinations(n, p) {
        let m = minor_of(jac, &cols);
        acc = &acc + &(&m * &m);
    }
    acc
}

/// Degree data: the input Bezout number, the actual degrees of the canonical
/// chart's minors, and the closed-form bounds they imply.
#[derive(Clone, PartialEq, Eq, Debug, serde::Serialize)]
pub struct DegreeReport {
    /// Product of the input degrees.
    pub bezout: u128,
    /// Actual total degree of each canonical minor equation.
    pub minor_degrees: Vec<usize>,
    /// Running caps `c_i = max(minor_degrees[..=i])`.
    pub minor_caps: Vec<usize>,
    /// `bezout * c_1 * ... * c_{n-p}`.
    pub polar_bezout: u128,
    /// `bezout * (d_1 + ... + d_p - p)^(n-p)`.
    pub bound_degree_sum: u128,
    /// `d^p * (p*d - p)^(n-p)`.
    pub bound_closed_form: u128,
}

pub fn bezout_report<T: Scalar>(s: &SystemInput<T>) -> DegreeReport {
    let (n, p) = (s.n(), s.p());
    let degrees = s.degrees();
    let bezout: u128 = degrees.iter().map(|&d| d as u128).product();
    let chart = MinorSelection::canonical(p);
    let minor_degrees: Vec<usize> = if n > p {
        let ps = polar_system(s, &chart, n - p);
        ps.equations[p..].iter().map(|e| e.total_degree().unwrap_or(0)).collect()
    } else {
        Vec::new()
    };
    let mut minor_caps = Vec::with_capacity(minor_degrees.len());
    let mut cap = 0usize;
    for &d in &minor_degrees {
        cap = cap.max(d);
        minor_caps.push(cap);
    }
    let polar_bezout = minor_caps.iter().fold(bezout, |acc, &c| acc * c as u128);
    let sum_minus_p = degrees.iter().sum::<usize>().saturating_sub(p);
    let bound_degree_sum = bezout * (sum_minus_p as u128).pow((n - p) as u32);
    let d = s.degree_bound() as u128;
    let bound_closed_form = d.pow(p as u32) * (d * p as u128 - p as u128).pow((n - p) as u32);
    DegreeReport {
        bezout,
        minor_degrees,
        minor_caps,
        polar_bezout,
        bound_degree_sum,
        bound_closed_form,
    }
}
