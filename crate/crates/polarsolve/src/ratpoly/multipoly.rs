//! Multivariate polynomials with exact coefficients.
//!
//! Terms live in a `BTreeMap` keyed by graded-lexicographic monomials, so a
//! polynomial is always in canonical form: no zero coefficients, and the last
//! map entry is the leading term. All variable indices are 0-based in code;
//! display and the text grammar use the 1-based names `X1…Xn`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};


use smallvec::{smallvec, SmallVec};

use super::unipoly::UniPoly;
use crate::scalar::Scalar;

/// Exponent vector under graded-lexicographic order: total degree first,
/// ties broken lexicographically with `X1` dominant.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(SmallVec<[u32; 8]>);

impl Monomial {
    pub fn unit(nvars: usize) -> Self {
        Monomial(smallvec![0; nvars])
    }

    pub fn var(nvars: usize, index: usize) -> Self {
        assert!(index < nvars, "variable index {index} out of range for {nvars} variables");
        let mut exps: SmallVec<[u32; 8]> = smallvec![0; nvars];
        exps[index] = 1;
        Monomial(exps)
    }

    pub fn from_exponents(exps: &[u32]) -> Self {
        Monomial(SmallVec::from_slice(exps))
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn exponent(&self, var: usize) -> u32 {
        self.0[var]
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_unit(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Self) -> Self {
        debug_assert_eq!(self.0.len(), other.0.len());
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Self) -> bool {
        self.0.len() == other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// Quotient `other / self`; caller must ensure divisibility.
    pub fn quotient_into(&self, other: &Self) -> Self {
        debug_assert!(self.divides(other));
        Monomial(other.0.iter().zip(&self.0).map(|(b, a)| b - a).collect())
    }

    pub fn lcm(&self, other: &Self) -> Self {
        debug_assert_eq!(self.0.len(), other.0.len());
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn is_coprime_with(&self, other: &Self) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }

    /// Append zero exponents for `extra` trailing variables.
    pub fn extended(&self, extra: usize) -> Self {
        let mut exps = self.0.clone();
        exps.extend(std::iter::repeat(0).take(extra));
        Monomial(exps)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Multivariate polynomial in canonical graded-lexicographic form.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct MultiPoly<T: Scalar> {
    nvars: usize,
    terms: BTreeMap<Monomial, T>,
}

impl<T: Scalar> MultiPoly<T> {
    pub fn zero(nvars: usize) -> Self {
        MultiPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, value: T) -> Self {
        let mut terms = BTreeMap::new();
        if !value.is_zero() {
            terms.insert(Monomial::unit(nvars), value);
        }
        MultiPoly { nvars, terms }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, T::one())
    }

    pub fn variable(nvars: usize, index: usize) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Monomial::var(nvars, index), T::one());
        MultiPoly { nvars, terms }
    }

    pub fn from_terms(nvars: usize, iter: impl IntoIterator<Item = (Monomial, T)>) -> Self {
        let mut poly = Self::zero(nvars);
        for (mono, coeff) in iter {
            poly.add_term(mono, coeff);
        }
        poly
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &T)> {
        self.terms.iter()
    }

    /// Leading term under the graded-lexicographic order.
    pub fn leading(&self) -> Option<(&Monomial, &T)> {
        self.terms.last_key_value()
    }

    pub fn coefficient(&self, mono: &Monomial) -> Option<&T> {
        self.terms.get(mono)
    }

    pub fn constant_value(&self) -> Option<&T> {
        if self.terms.len() == 1 {
            let (mono, coeff) = self.terms.iter().next().unwrap();
            if mono.is_unit() {
                return Some(coeff);
            }
        }
        None
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<usize> {
        self.terms.keys().map(|m| m.degree() as usize).max()
    }

    pub fn add_term(&mut self, mono: Monomial, coeff: T) {
        debug_assert_eq!(mono.nvars(), self.nvars);
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(mono) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().clone() + &coeff;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    fn require_same_vars(&self, other: &Self, op: &str) {
        assert_eq!(
            self.nvars, other.nvars,
            "variable-count mismatch in {op}: {} vs {}",
            self.nvars, other.nvars
        );
    }

    pub fn scaled(&self, factor: &T) -> Self {
        if factor.is_zero() {
            return Self::zero(self.nvars);
        }
        MultiPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c.clone() * factor))
                .collect(),
        }
    }

    /// Multiply by a single term.
    pub fn term_mul(&self, mono: &Monomial, coeff: &T) -> Self {
        if coeff.is_zero() {
            return Self::zero(self.nvars);
        }
        MultiPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.mul(mono), c.clone() * coeff))
                .collect(),
        }
    }

    pub fn make_monic(&mut self) {
        if let Some((_, lead)) = self.leading() {
            let lead = lead.clone();
            if !lead.is_one() {
                for coeff in self.terms.values_mut() {
                    *coeff = coeff.clone() / &lead;
                }
            }
        }
    }

    /// Formal partial derivative with respect to variable `var` (0-based).
    pub fn partial_derivative(&self, var: usize) -> Self {
        assert!(var < self.nvars, "variable index {var} out of range for {} variables", self.nvars);
        let mut out = Self::zero(self.nvars);
        for (mono, coeff) in &self.terms {
            let e = mono.exponent(var);
            if e == 0 {
                continue;
            }
            let mut exps = SmallVec::from_slice(mono.exponents());
            exps[var] = e - 1;
            out.add_term(Monomial(exps), coeff.clone() * &T::from_i64(e as i64));
        }
        out
    }

    /// Exact value at a rational point, with per-variable power caching.
    pub fn eval(&self, point: &[T]) -> T {
        assert_eq!(
            point.len(),
            self.nvars,
            "evaluation point length {} does not match {} variables",
            point.len(),
            self.nvars
        );
        let mut powers: Vec<Vec<T>> = point.iter().map(|x| vec![T::one(), x.clone()]).collect();
        let mut acc = T::zero();
        for (mono, coeff) in &self.terms {
            let mut term = coeff.clone();
            for (var, &e) in mono.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let cache = &mut powers[var];
                while cache.len() <= e as usize {
                    let next = cache.last().unwrap().clone() * &point[var];
                    cache.push(next);
                }
                term = term * &cache[e as usize];
            }
            acc = acc + &term;
        }
        acc
    }

    pub fn pow(&self, exponent: u32) -> Self {
        let mut result = Self::one(self.nvars);
        for _ in 0..exponent {
            result = &result * self;
        }
        result
    }

    /// Substitute each variable by the corresponding polynomial image.
    /// Power caching keeps repeated exponents cheap.
    pub fn substitute(&self, images: &[MultiPoly<T>]) -> Self {
        assert_eq!(images.len(), self.nvars, "substitution needs one image per variable");
        let out_vars = images.first().map_or(0, |p| p.nvars());
        let mut powers: Vec<Vec<MultiPoly<T>>> =
            images.iter().map(|_p| vec![MultiPoly::one(out_vars)]).collect();
        let mut acc = MultiPoly::zero(out_vars);
        for (mono, coeff) in &self.terms {
            let mut term = MultiPoly::constant(out_vars, coeff.clone());
            for (var, &e) in mono.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let cache = &mut powers[var];
                while cache.len() <= e as usize {
                    let next = cache.last().unwrap() * &images[var];
                    cache.push(next);
                }
                term = &term * &cache[e as usize];
            }
            acc = &acc + &term;
        }
        acc
    }

    /// Substitute univariate polynomials for the variables and reduce the
    /// result modulo `modulus`. Used for exact membership certificates.
    pub fn eval_unipoly_mod(&self, params: &[UniPoly<T>], modulus: &UniPoly<T>) -> UniPoly<T> {
        assert_eq!(params.len(), self.nvars, "need one parameter polynomial per variable");
        assert!(!modulus.is_zero(), "modulus must be nonzero");
        let mut powers: Vec<Vec<UniPoly<T>>> =
            params.iter().map(|_| vec![UniPoly::one()]).collect();
        let mut acc = UniPoly::zero();
        for (mono, coeff) in &self.terms {
            let mut term = UniPoly::constant(coeff.clone());
            for (var, &e) in mono.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let cache = &mut powers[var];
                while cache.len() <= e as usize {
                    let next = (cache.last().unwrap() * &params[var]).rem(modulus);
                    cache.push(next);
                }
                term = (&term * &cache[e as usize]).rem(modulus);
            }
            acc = &acc + &term;
        }
        acc.rem(modulus)
    }

    /// Exact quotient `self / divisor`, or `None` when the division leaves a
    /// remainder. Single-divisor leading-term elimination; exactness follows
    /// because the monomial order is multiplicative.
    pub fn exact_div(&self, divisor: &Self) -> Option<Self> {
        self.require_same_vars(divisor, "exact_div");
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        let (dm, dc) = divisor.leading().map(|(m, c)| (m.clone(), c.clone())).unwrap();
        let mut rem = self.clone();
        let mut quot = Self::zero(self.nvars);
        while let Some((lm, lc)) = rem.leading() {
            if !dm.divides(lm) {
                return None;
            }
            let qm = dm.quotient_into(lm);
            let qc = lc.clone() / &dc;
            quot.add_term(qm.clone(), qc.clone());
            rem = &rem - &divisor.term_mul(&qm, &qc);
        }
        Some(quot)
    }

    /// View as univariate in `var`; `None` if any other variable occurs.
    pub fn to_unipoly(&self, var: usize) -> Option<UniPoly<T>> {
        assert!(var < self.nvars);
        let mut coeffs = vec![T::zero(); self.total_degree().map_or(0, |d| d + 1)];
        for (mono, coeff) in &self.terms {
            for (v, &e) in mono.exponents().iter().enumerate() {
                if v != var && e != 0 {
                    return None;
                }
            }
            coeffs[mono.exponent(var) as usize] = coeff.clone();
        }
        Some(UniPoly::from_coeffs(coeffs))
    }

    pub fn from_unipoly(poly: &UniPoly<T>, nvars: usize, var: usize) -> Self {
        let mut out = Self::zero(nvars);
        for (deg, coeff) in poly.coeffs().iter().enumerate() {
            if coeff.is_zero() {
                continue;
            }
            let mut exps: SmallVec<[u32; 8]> = smallvec![0; nvars];
            exps[var] = deg as u32;
            out.add_term(Monomial(exps), coeff.clone());
        }
        out
    }

    /// Same polynomial viewed in `self.nvars() + extra` variables.
    pub fn extended(&self, extra: usize) -> Self {
        MultiPoly {
            nvars: self.nvars + extra,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.extended(extra), c.clone()))
                .collect(),
        }
    }
}

impl<T: Scalar> Add for &MultiPoly<T> {
    type Output = MultiPoly<T>;
    fn add(self, rhs: &MultiPoly<T>) -> MultiPoly<T> {
        self.require_same_vars(rhs, "add");
        let mut out = self.clone();
        for (mono, coeff) in &rhs.terms {
            out.add_term(mono.clone(), coeff.clone());
        }
        out
    }
}

impl<T: Scalar> Sub for &MultiPoly<T> {
    type Output = MultiPoly<T>;
    fn sub(self, rhs: &MultiPoly<T>) -> MultiPoly<T> {
        self.require_same_vars(rhs, "sub");
        let mut out = self.clone();
        for (mono, coeff) in &rhs.terms {
            out.add_term(mono.clone(), -coeff.clone());
        }
        out
    }
}

impl<T: Scalar> Mul for &MultiPoly<T> {
    type Output = MultiPoly<T>;
    fn mul(self, rhs: &MultiPoly<T>) -> MultiPoly<T> {
        self.require_same_vars(rhs, "mul");
        let mut out = MultiPoly::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca.clone() * cb);
            }
        }
        out
    }
}

impl<T: Scalar> Neg for &MultiPoly<T> {
    type Output = MultiPoly<T>;
    fn neg(self) -> MultiPoly<T> {
        MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }
}

macro_rules! forward_owned_binop {
    ($trait:ident, $method:ident) => {
        impl<T: Scalar> $trait for MultiPoly<T> {
            type Output = MultiPoly<T>;
            fn $method(self, rhs: MultiPoly<T>) -> MultiPoly<T> {
                (&self).$method(&rhs)
            }
        }
        impl<T: Scalar> $trait<&MultiPoly<T>> for MultiPoly<T> {
            type Output = MultiPoly<T>;
            fn $method(self, rhs: &MultiPoly<T>) -> MultiPoly<T> {
                (&self).$method(rhs)
            }
        }
    };
}

forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);

impl<T: Scalar> Neg for MultiPoly<T> {
    type Output = MultiPoly<T>;
    fn neg(self) -> MultiPoly<T> {
        -&self
    }
}

fn write_coeff<T: Scalar>(f: &mut fmt::Formatter<'_>, coeff: &T, with_vars: bool) -> fmt::Result {
    let abs = coeff.abs();
    if abs.is_one() && with_vars {
        Ok(())
    } else if with_vars {
        write!(f, "{abs}*")
    } else {
        write!(f, "{abs}")
    }
}

impl<T: Scalar> fmt::Display for MultiPoly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        // Leading term first.
        for (i, (mono, coeff)) in self.terms.iter().rev().enumerate() {
            if i == 0 {
                if coeff.is_negative() {
                    write!(f, "-")?;
                }
            } else if coeff.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let with_vars = !mono.is_unit();
            write_coeff(f, coeff, with_vars)?;
            let mut first = true;
            for (var, &e) in mono.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if !first {
                    write!(f, "*")?;
                }
                first = false;
                write!(f, "X{}", var + 1)?;
                if e > 1 {
                    write!(f, "^{e}")?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use num_traits::Zero;

    use super::*;
    use crate::scalar::rat;
    use crate::{Poly, Rat};

    fn var(n: usize, i: usize) -> Poly {
        Poly::variable(n, i)
    }

    #[test]
    fn grlex_order() {
        // X1^2 > X1*X2 > X2^2 > X1 > X2 > 1 in two variables.
        let m = |a: u32, b: u32| Monomial::from_exponents(&[a, b]);
        let mut monos = vec![m(0, 0), m(0, 1), m(1, 0), m(0, 2), m(1, 1), m(2, 0)];
        monos.sort();
        assert_eq!(monos, vec![m(0, 0), m(0, 1), m(1, 0), m(0, 2), m(1, 1), m(2, 0)]);
    }

    #[test]
    fn difference_of_squares() {
        let x1 = var(1, 0);
        let one = Poly::one(1);
        let lhs = &(&x1 + &one) * &(&x1 - &one);
        let expected = &(&x1 * &x1) - &one;
        assert_eq!(lhs, expected);
    }

    #[test]
    fn additive_and_multiplicative_identities() {
        let circle = circle_poly();
        assert_eq!(&circle + &Poly::zero(2), circle);
        assert_eq!(&circle * &Poly::one(2), circle);
    }

    fn circle_poly() -> Poly {
        // X1^2 + X2^2 - 1
        let x1 = var(2, 0);
        let x2 = var(2, 1);
        &(&(&x1 * &x1) + &(&x2 * &x2)) - &Poly::one(2)
    }

    #[test]
    fn partial_derivatives() {
        let circle = circle_poly();
        let dx1 = circle.partial_derivative(0);
        assert_eq!(dx1, var(2, 0).scaled(&rat(2, 1)));

        let c = Poly::constant(3, rat(5, 1));
        assert!(c.partial_derivative(1).is_zero());

        let x1x2x3 = &(&var(3, 0) * &var(3, 1)) * &var(3, 2);
        assert_eq!(x1x2x3.partial_derivative(1), &var(3, 0) * &var(3, 2));
    }

    #[test]
    #[should_panic(expected = "out of range")]
    fn derivative_index_out_of_range() {
        circle_poly().partial_derivative(2);
    }

    #[test]
    #[should_panic(expected = "variable-count mismatch")]
    fn mismatched_variable_counts() {
        let _ = &var(1, 0) + &var(2, 0);
    }

    #[test]
    fn eval_on_circle() {
        let circle = circle_poly();
        assert!(circle.eval(&[rat(1, 1), rat(0, 1)]).is_zero());
        assert!(circle.eval(&[rat(3, 5), rat(4, 5)]).is_zero());
        let c = Poly::constant(2, rat(7, 3));
        assert_eq!(c.eval(&[rat(10, 1), rat(-4, 7)]), rat(7, 3));
    }

    /// Independent oracle: plain term-by-term sum with repeated
    /// multiplication, no caching.
    fn eval_naive(p: &Poly, x: &[Rat]) -> Rat {
        let mut acc = rat(0, 1);
        for (mono, coeff) in p.terms() {
            let mut term = coeff.clone();
            for (var, &e) in mono.exponents().iter().enumerate() {
                for _ in 0..e {
                    term = term * &x[var];
                }
            }
            acc = acc + term;
        }
        acc
    }

    fn pseudo_random_poly(seed: &mut u64, nvars: usize, max_deg: u32, terms: usize) -> Poly {
        let mut next = || {
            *seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (*seed >> 33) as i64
        };
        let mut p = Poly::zero(nvars);
        for _ in 0..terms {
            let exps: Vec<u32> = (0..nvars).map(|_| (next() % (max_deg as i64 + 1)) as u32).collect();
            let num = next() % 19 - 9;
            let den = next() % 7 + 1;
            p.add_term(Monomial::from_exponents(&exps), rat(num, den));
        }
        p
    }

    #[test]
    fn eval_matches_naive_oracle() {
        let mut seed = 42;
        for _ in 0..50 {
            let p = pseudo_random_poly(&mut seed, 3, 4, 6);
            let x = vec![rat(3, 2), rat(-1, 3), rat(5, 7)];
            assert_eq!(p.eval(&x), eval_naive(&p, &x));
        }
    }

    #[test]
    fn eval_is_multiplicative() {
        let mut seed = 7;
        for _ in 0..30 {
            let f = pseudo_random_poly(&mut seed, 2, 3, 5);
            let g = pseudo_random_poly(&mut seed, 2, 3, 5);
            let x = vec![rat(2, 5), rat(-7, 4)];
            assert_eq!((&f * &g).eval(&x), f.eval(&x) * g.eval(&x));
        }
    }

    #[test]
    fn ring_axioms_on_pseudo_random_triples() {
        let mut seed = 99;
        for _ in 0..20 {
            let a = pseudo_random_poly(&mut seed, 2, 3, 4);
            let b = pseudo_random_poly(&mut seed, 2, 3, 4);
            let c = pseudo_random_poly(&mut seed, 2, 3, 4);
            assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            assert_eq!(&a * &b, &b * &a);
            assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        }
    }

    #[test]
    fn leibniz_rule() {
        let mut seed = 5;
        for _ in 0..20 {
            let f = pseudo_random_poly(&mut seed, 3, 3, 4);
            let g = pseudo_random_poly(&mut seed, 3, 3, 4);
            for var in 0..3 {
                let lhs = (&f * &g).partial_derivative(var);
                let rhs = &(&f.partial_derivative(var) * &g) + &(&f * &g.partial_derivative(var));
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn exact_division() {
        let mut seed = 11;
        for _ in 0..20 {
            let f = pseudo_random_poly(&mut seed, 2, 3, 4);
            let g = pseudo_random_poly(&mut seed, 2, 3, 4);
            if g.is_zero() {
                continue;
            }
            let prod = &f * &g;
            assert_eq!(prod.exact_div(&g), Some(f));
        }
        let x1 = var(2, 0);
        let x2 = var(2, 1);
        assert_eq!((&x1 * &x1).exact_div(&x2), None);
    }

    #[test]
    fn display_round_trips_through_parser() {
        let p = Poly::from_terms(
            3,
            vec![
                (Monomial::from_exponents(&[2, 0, 1]), rat(3, 2)),
                (Monomial::from_exponents(&[0, 1, 0]), rat(-1, 1)),
                (Monomial::from_exponents(&[0, 0, 0]), rat(1, 1)),
            ],
        );
        assert_eq!(p.to_string(), "3/2*X1^2*X3 - X2 + 1");
        let back: Poly = super::super::parse::parse_poly(&p.to_string(), 3).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn substitution_composes_with_eval() {
        let f = circle_poly();
        let images = vec![&var(2, 0) + &var(2, 1), var(2, 1)];
        let composed = f.substitute(&images);
        let x = vec![rat(1, 3), rat(2, 3)];
        let images_at_x: Vec<Rat> = images.iter().map(|p| p.eval(&x)).collect();
        assert_eq!(composed.eval(&x), f.eval(&images_at_x));
    }
}
