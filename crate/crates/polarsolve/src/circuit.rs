//! Division-free arithmetic circuits over an exact field.
//!
//! A circuit is a labelled dag: nodes are inputs, constants or binary
//! `add`/`sub`/`mul` gates, in topological order, with a list of output
//! nodes. Circuits are one of the two input forms for polynomial systems;
//! they can be evaluated exactly, expanded into polynomials (with a degree
//! cap), and differentiated in reverse mode to get every partial derivative
//! of every output with size linear in the original circuit per output row.
//!
//! The text format is one statement per line: `%k = add|sub|mul <ref> <ref>`
//! where a ref is `Xj`, `%i`, or a rational literal `a/b`; final `out %i`
//! lines declare the outputs in order; `#` begins a comment.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::ratpoly::MultiPoly;
use crate::scalar::Scalar;

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Node<T: Scalar> {
    /// Variable input, 0-based index.
    Input(usize),
    Constant(T),
    Add(usize, usize),
    Sub(usize, usize),
    Mul(usize, usize),
}

impl<T: Scalar> Node<T> {
    fn children(&self) -> Option<(usize, usize)> {
        match *self {
            Node::Add(l, r) | Node::Sub(l, r) | Node::Mul(l, r) => Some((l, r)),
            _ => None,
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Circuit<T: Scalar> {
    nvars: usize,
    nodes: Vec<Node<T>>,
    outputs: Vec<usize>,
}

/// Size and nonscalar depth of a circuit.
///
/// `size` counts every non-input node. `nonscalar_depth` counts, along the
/// deepest output path, only multiplications whose operands are both
/// non-constant subcircuits; scalar multiplications are free.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct CircuitMetrics {
    pub size: usize,
    pub nonscalar_depth: usize,
}

#[derive(Clone, PartialEq, Eq, Debug, thiserror::Error)]
pub enum CircuitError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("expansion exceeds degree cap: node %{node} has total degree {degree} > {cap}")]
    DegreeCapExceeded { node: usize, degree: usize, cap: usize },
}

impl<T: Scalar> Circuit<T> {
    pub fn new(nvars: usize, nodes: Vec<Node<T>>, outputs: Vec<usize>) -> Self {
        for (i, node) in nodes.iter().enumerate() {
            if let Some((l, r)) = node.children() {
                assert!(l < i && r < i, "node %{} references a later node", i + 1);
            }
            if let Node::Input(v) = node {
                assert!(*v < nvars, "input variable out of range");
            }
        }
        assert!(outputs.iter().all(|&o| o < nodes.len()), "output index out of range");
        Circuit { nvars, nodes, outputs }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn nodes(&self) -> &[Node<T>] {
        &self.nodes
    }

    pub fn outputs(&self) -> &[usize] {
        &self.outputs
    }

    pub fn num_outputs(&self) -> usize {
        self.outputs.len()
    }

    /// Same circuit read as a system in `nvars` variables (adds unused
    /// trailing inputs).
    pub fn with_nvars(mut self, nvars: usize) -> Self {
        assert!(nvars >= self.nvars, "cannot shrink the variable count");
        self.nvars = nvars;
        self
    }

    /// Exact forward evaluation; one value per output.
    pub fn eval(&self, point: &[T]) -> Vec<T> {
        assert_eq!(
            point.len(),
            self.nvars,
            "evaluation point length {} does not match {} variables",
            point.len(),
            self.nvars
        );
        let mut values: Vec<T> = Vec::with_capacity(self.nodes.len());
        for node in &self.nodes {
            let v = match node {
                Node::Input(i) => point[*i].clone(),
                Node::Constant(c) => c.clone(),
                Node::Add(l, r) => values[*l].clone() + &values[*r],
                Node::Sub(l, r) => values[*l].clone() - &values[*r],
                Node::Mul(l, r) => values[*l].clone() * &values[*r],
            };
            values.push(v);
        }
        self.outputs.iter().map(|&o| values[o].clone()).collect()
    }

    /// Expand every output into an explicit polynomial, aborting as soon as
    /// an intermediate result exceeds `degree_cap`.
    pub fn expand(&self, degree_cap: usize) -> Result<Vec<MultiPoly<T>>, CircuitError> {
        let mut values: Vec<MultiPoly<T>> = Vec::with_capacity(self.nodes.len());
        for (idx, node) in self.nodes.iter().enumerate() {
            let v = match node {
                Node::Input(i) => MultiPoly::variable(self.nvars, *i),
                Node::Constant(c) => MultiPoly::constant(self.nvars, c.clone()),
                Node::Add(l, r) => &values[*l] + &values[*r],
                Node::Sub(l, r) => &values[*l] - &values[*r],
                Node::Mul(l, r) => &values[*l] * &values[*r],
            };
            let degree = v.total_degree().unwrap_or(0);
            if degree > degree_cap {
                return Err(CircuitError::DegreeCapExceeded { node: idx + 1, degree, cap: degree_cap });
            }
            values.push(v);
        }
        Ok(self.outputs.iter().map(|&o| values[o].clone()).collect())
    }

    /// Which nodes compute a constant (no input in their support).
    fn constant_mask(&self) -> Vec<bool> {
        let mut mask = Vec::with_capacity(self.nodes.len());
        for node in &self.nodes {
            let c = match node {
                Node::Input(_) => false,
                Node::Constant(_) => true,
                Node::Add(l, r) | Node::Sub(l, r) | Node::Mul(l, r) => mask[*l] && mask[*r],
            };
            mask.push(c);
        }
        mask
    }

    pub fn metrics(&self) -> CircuitMetrics {
        let constant = self.constant_mask();
        let size = self.nodes.iter().filter(|n| !matches!(n, Node::Input(_))).count();
        let mut depth = vec![0usize; self.nodes.len()];
        for (i, node) in self.nodes.iter().enumerate() {
            if let Some((l, r)) = node.children() {
                let essential =
                    matches!(node, Node::Mul(_, _)) && !constant[l] && !constant[r];
                depth[i] = depth[l].max(depth[r]) + usize::from(essential);
            }
        }
        let nonscalar_depth = self.outputs.iter().map(|&o| depth[o]).max().unwrap_or(0);
        CircuitMetrics { size, nonscalar_depth }
    }

    /// Reverse-mode differentiation. The result computes all partials
    /// `d out_k / d X_j` as `num_outputs * nvars` outputs in row-major order.
    pub fn differentiate(&self) -> Circuit<T> {
        let mut nodes = self.nodes.clone();
        let mut const_cache: BTreeMap<T, usize> = BTreeMap::new();
        for (i, node) in self.nodes.iter().enumerate() {
            if let Node::Constant(c) = node {
                const_cache.entry(c.clone()).or_insert(i);
            }
        }

        let mut input_nodes: Vec<Vec<usize>> = vec![Vec::new(); self.nvars];
        for (i, node) in self.nodes.iter().enumerate() {
            if let Node::Input(v) = node {
                input_nodes[*v].push(i);
            }
        }

        fn fresh_const<T: Scalar>(
            nodes: &mut Vec<Node<T>>,
            cache: &mut BTreeMap<T, usize>,
            value: T,
        ) -> usize {
            *cache.entry(value.clone()).or_insert_with(|| {
                nodes.push(Node::Constant(value));
                nodes.len() - 1
            })
        }

        fn accumulate<T: Scalar>(
            nodes: &mut Vec<Node<T>>,
            adjoint: &mut BTreeMap<usize, usize>,
            target: usize,
            delta: usize,
        ) {
            match adjoint.get(&target) {
                None => {
                    adjoint.insert(target, delta);
                }
                Some(&existing) => {
                    nodes.push(Node::Add(existing, delta));
                    adjoint.insert(target, nodes.len() - 1);
                }
            }
        }

        let mut outputs = Vec::with_capacity(self.outputs.len() * self.nvars);
        for &out in &self.outputs {
            // Adjoint of each original node with respect to this output.
            let mut adjoint: BTreeMap<usize, usize> = BTreeMap::new();
            let one = fresh_const(&mut nodes, &mut const_cache, T::one());
            adjoint.insert(out, one);
            for v in (0..=out).rev() {
                let Some(&a) = adjoint.get(&v) else { continue };
                match self.nodes[v] {
                    Node::Add(l, r) => {
                        accumulate(&mut nodes, &mut adjoint, l, a);
                        accumulate(&mut nodes, &mut adjoint, r, a);
                    }
                    Node::Sub(l, r) => {
                        accumulate(&mut nodes, &mut adjoint, l, a);
                        let zero = fresh_const(&mut nodes, &mut const_cache, T::zero());
                        nodes.push(Node::Sub(zero, a));
                        let neg = nodes.len() - 1;
                        accumulate(&mut nodes, &mut adjoint, r, neg);
                    }
                    Node::Mul(l, r) => {
                        nodes.push(Node::Mul(a, r));
                        let dl = nodes.len() - 1;
                        accumulate(&mut nodes, &mut adjoint, l, dl);
                        nodes.push(Node::Mul(a, l));
                        let dr = nodes.len() - 1;
                        accumulate(&mut nodes, &mut adjoint, r, dr);
                    }
                    _ => {}
                }
            }
            for var in 0..self.nvars {
                let mut partial: Option<usize> = None;
                for &inp in &input_nodes[var] {
                    if let Some(&a) = adjoint.get(&inp) {
                        partial = Some(match partial {
                            None => a,
                            Some(existing) => {
                                nodes.push(Node::Add(existing, a));
                                nodes.len() - 1
                            }
                        });
                    }
                }
                let node = match partial {
                    Some(p) => p,
                    None => fresh_const(&mut nodes, &mut const_cache, T::zero()),
                };
                outputs.push(node);
            }
        }
        Circuit { nvars: self.nvars, nodes, outputs }
    }

    /// Canonical text form; `parse` on the result reproduces the circuit
    /// exactly for circuits that came from `parse`.
    pub fn print(&self) -> String {
        let mut ids: Vec<Option<usize>> = vec![None; self.nodes.len()];
        let mut next_id = 1usize;
        let mut text = String::new();
        let ref_of = |node: usize, ids: &[Option<usize>], nodes: &[Node<T>]| -> String {
            match &nodes[node] {
                Node::Input(v) => format!("X{}", v + 1),
                Node::Constant(c) => format!("{c}"),
                _ => format!("%{}", ids[node].expect("child printed before parent")),
            }
        };
        for (i, node) in self.nodes.iter().enumerate() {
            let op = match node {
                Node::Add(_, _) => "add",
                Node::Sub(_, _) => "sub",
                Node::Mul(_, _) => "mul",
                _ => continue,
            };
            let (l, r) = node.children().unwrap();
            let lhs = ref_of(l, &ids, &self.nodes);
            let rhs = ref_of(r, &ids, &self.nodes);
            ids[i] = Some(next_id);
            let _ = writeln!(text, "%{next_id} = {op} {lhs} {rhs}");
            next_id += 1;
        }
        for &o in &self.outputs {
            match ids[o] {
                Some(id) => {
                    let _ = writeln!(text, "out %{id}");
                }
                None => {
                    // Output is a bare input or constant; wrap it in an
                    // explicit no-op statement so it can be named.
                    let r = ref_of(o, &ids, &self.nodes);
                    let _ = writeln!(text, "%{next_id} = add {r} 0");
                    let _ = writeln!(text, "out %{next_id}");
                    next_id += 1;
                }
            }
        }
        text
    }
}

/// Parse the line-oriented circuit format. The variable count is the largest
/// `Xj` index mentioned.
pub fn parse_circuit<T: Scalar>(text: &str) -> Result<Circuit<T>, CircuitError> {
    fn err(line: usize, message: String) -> CircuitError {
        CircuitError::Parse { line, message }
    }

    // First pass: where is every %id defined?
    let mut def_line: BTreeMap<usize, usize> = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if let Some(rest) = line.strip_prefix('%') {
            if let Some((id_text, _)) = rest.split_once('=') {
                if let Ok(id) = id_text.trim().parse::<usize>() {
                    if def_line.contains_key(&id) {
                        return Err(err(lineno + 1, format!("node %{id} defined twice")));
                    }
                    def_line.insert(id, lineno + 1);
                }
            }
        }
    }

    struct Builder<T: Scalar> {
        nodes: Vec<Node<T>>,
        by_id: BTreeMap<usize, usize>,
        input_cache: BTreeMap<usize, usize>,
        const_cache: BTreeMap<T, usize>,
        nvars: usize,
    }

    impl<T: Scalar> Builder<T> {
        fn resolve(
            &mut self,
            token: &str,
            lineno: usize,
            def_line: &BTreeMap<usize, usize>,
        ) -> Result<usize, CircuitError> {
            if let Some(id_text) = token.strip_prefix('%') {
                let id: usize = id_text
                    .parse()
                    .map_err(|_| err(lineno, format!("malformed node reference `{token}`")))?;
                return match self.by_id.get(&id) {
                    Some(&idx) => Ok(idx),
                    None if def_line.contains_key(&id) => Err(err(
                        lineno,
                        format!("forward reference to %{id} (defined on line {})", def_line[&id]),
                    )),
                    None => Err(err(lineno, format!("unknown identifier `%{id}`"))),
                };
            }
            if let Some(var_text) = token.strip_prefix(['X', 'x']) {
                if let Ok(index) = var_text.parse::<usize>() {
                    if index == 0 {
                        return Err(err(lineno, "variable indices start at X1".to_string()));
                    }
                    self.nvars = self.nvars.max(index);
                    let nodes = &mut self.nodes;
                    return Ok(*self.input_cache.entry(index - 1).or_insert_with(|| {
                        nodes.push(Node::Input(index - 1));
                        nodes.len() - 1
                    }));
                }
            }
            if token.starts_with(['-', '+']) || token.starts_with(|c: char| c.is_ascii_digit()) {
                let value = T::parse_literal(token)
                    .ok_or_else(|| err(lineno, format!("malformed constant `{token}`")))?;
                let nodes = &mut self.nodes;
                return Ok(*self.const_cache.entry(value.clone()).or_insert_with(|| {
                    nodes.push(Node::Constant(value));
                    nodes.len() - 1
                }));
            }
            Err(err(lineno, format!("unknown identifier `{token}`")))
        }
    }

    let mut b = Builder::<T> {
        nodes: Vec::new(),
        by_id: BTreeMap::new(),
        input_cache: BTreeMap::new(),
        const_cache: BTreeMap::new(),
        nvars: 0,
    };
    let mut outputs: Vec<usize> = Vec::new();
    let mut saw_statement = false;

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        saw_statement = true;
        let words: Vec<&str> = line.split_whitespace().collect();
        if words[0] == "out" {
            if words.len() != 2 || !words[1].starts_with('%') {
                return Err(err(lineno, "expected `out %i`".to_string()));
            }
            let id: usize = words[1][1..]
                .parse()
                .map_err(|_| err(lineno, format!("malformed node reference `{}`", words[1])))?;
            let node = *b
                .by_id
                .get(&id)
                .ok_or_else(|| err(lineno, format!("unknown identifier `%{id}`")))?;
            outputs.push(node);
            continue;
        }
        // `%k = op a b`
        if words.len() != 5 || words[1] != "=" || !words[0].starts_with('%') {
            return Err(err(lineno, format!("malformed statement `{line}`")));
        }
        let id: usize = words[0][1..]
            .parse()
            .map_err(|_| err(lineno, format!("malformed node id `{}`", words[0])))?;
        let op = words[2];
        if op == "div" {
            return Err(err(
                lineno,
                "division operator present; circuits must be division-free".to_string(),
            ));
        }
        if !matches!(op, "add" | "sub" | "mul") {
            return Err(err(lineno, format!("unknown operation `{op}`")));
        }
        let l = b.resolve(words[3], lineno, &def_line)?;
        let r = b.resolve(words[4], lineno, &def_line)?;
        let node = match op {
            "add" => Node::Add(l, r),
            "sub" => Node::Sub(l, r),
            _ => Node::Mul(l, r),
        };
        b.nodes.push(node);
        b.by_id.insert(id, b.nodes.len() - 1);
    }
    if !saw_statement {
        return Err(err(1, "empty circuit".to_string()));
    }
    if outputs.is_empty() {
        return Err(err(text.lines().count().max(1), "circuit declares no outputs".to_string()));
    }
    Ok(Circuit { nvars: b.nvars, nodes: b.nodes, outputs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;
    use crate::{Poly, Rat};

    fn parse(text: &str) -> Circuit<Rat> {
        parse_circuit(text).unwrap()
    }

    #[test]
    fn square_circuit() {
        let c = parse("%1 = mul X1 X1\nout %1");
        assert_eq!(c.eval(&[rat(2, 1)]), vec![rat(4, 1)]);
        assert_eq!(c.metrics(), CircuitMetrics { size: 1, nonscalar_depth: 1 });
        let expanded = c.expand(16).unwrap();
        assert_eq!(expanded, vec![&Poly::variable(1, 0) * &Poly::variable(1, 0)]);
    }

    #[test]
    fn forward_reference_is_reported() {
        let e = parse_circuit::<Rat>("%1 = add %5 X1\n%5 = mul X1 X1\nout %1").unwrap_err();
        let CircuitError::Parse { line, message } = e else { panic!("wrong error") };
        assert_eq!(line, 1);
        assert!(message.contains("forward reference"));
    }

    #[test]
    fn unknown_and_malformed_tokens() {
        let e = parse_circuit::<Rat>("%1 = add %9 X1\nout %1").unwrap_err();
        assert!(matches!(e, CircuitError::Parse { message, .. } if message.contains("unknown identifier")));

        let e = parse_circuit::<Rat>("%1 = add X1 3/\nout %1").unwrap_err();
        assert!(matches!(e, CircuitError::Parse { message, .. } if message.contains("malformed constant")));

        let e = parse_circuit::<Rat>("%1 = div X1 X1\nout %1").unwrap_err();
        assert!(matches!(e, CircuitError::Parse { message, .. } if message.contains("division operator")));
    }

    fn circle_circuit() -> Circuit<Rat> {
        parse(
            "# unit circle\n\
             %1 = mul X1 X1\n\
             %2 = mul X2 X2\n\
             %3 = add %1 %2\n\
             %4 = sub %3 1\n\
             out %4",
        )
    }

    #[test]
    fn circle_vanishes_on_pythagorean_point() {
        let c = circle_circuit();
        assert_eq!(c.eval(&[rat(3, 5), rat(4, 5)]), vec![rat(0, 1)]);
        let p = c.expand(8).unwrap();
        let expected: Poly = crate::ratpoly::parse_poly("X1^2 + X2^2 - 1", 2).unwrap();
        assert_eq!(p, vec![expected]);
    }

    #[test]
    fn constant_only_circuit() {
        let c = parse("%1 = add 2/3 1/3\nout %1").with_nvars(2);
        assert_eq!(c.eval(&[rat(10, 1), rat(-3, 1)]), vec![rat(1, 1)]);
        assert_eq!(c.metrics().nonscalar_depth, 0);
    }

    #[test]
    fn repeated_squaring_hits_degree_cap() {
        let src = "%1 = mul X1 X1\n%2 = mul %1 %1\n%3 = mul %2 %2\n%4 = mul %3 %3\n%5 = mul %4 %4\nout %5";
        let c = parse(src);
        let e = c.expand(16).unwrap_err();
        assert_eq!(e, CircuitError::DegreeCapExceeded { node: 6, degree: 32, cap: 16 });
        assert!(c.expand(32).is_ok());
    }

    #[test]
    fn metrics_examples() {
        // Chain of k additions: size k, nonscalar depth 0.
        let k = 5;
        let mut src = String::from("%1 = add X1 X2\n");
        for i in 2..=k {
            src.push_str(&format!("%{i} = add %{} X1\n", i - 1));
        }
        src.push_str(&format!("out %{k}\n"));
        let c = parse(&src);
        assert_eq!(c.metrics(), CircuitMetrics { size: k, nonscalar_depth: 0 });

        // Balanced product of four variables: 3 multiplications, depth 2.
        let c = parse("%1 = mul X1 X2\n%2 = mul X3 X4\n%3 = mul %1 %2\nout %3");
        assert_eq!(c.metrics(), CircuitMetrics { size: 3, nonscalar_depth: 2 });

        // Multiplication by a constant subcircuit is scalar. Size counts the
        // two constants, the add and the mul.
        let c = parse("%1 = add 1 2\n%2 = mul %1 X1\nout %2");
        assert_eq!(c.metrics(), CircuitMetrics { size: 4, nonscalar_depth: 0 });
    }

    #[test]
    fn metrics_invariant_under_output_reordering() {
        let c = parse("%1 = mul X1 X1\n%2 = add X1 X2\n%3 = mul %1 %2\nout %1\nout %3");
        let swapped = Circuit::new(
            c.nvars(),
            c.nodes().to_vec(),
            c.outputs().iter().rev().copied().collect(),
        );
        assert_eq!(c.metrics(), swapped.metrics());
    }

    #[test]
    fn derivative_of_square() {
        let c = parse("%1 = mul X1 X1\nout %1");
        let d = c.differentiate();
        for v in [-3i64, 0, 1, 7] {
            assert_eq!(d.eval(&[rat(v, 1)]), vec![rat(2 * v, 1)]);
        }
    }

    #[test]
    fn gradient_of_constant_is_zero() {
        let c = parse("%1 = add 1 2\nout %1").with_nvars(2);
        let d = c.differentiate();
        assert_eq!(d.eval(&[rat(5, 1), rat(6, 1)]), vec![rat(0, 1), rat(0, 1)]);
    }

    fn random_circuit(seed: u64, nvars: usize, ops: usize, n_outputs: usize) -> Circuit<Rat> {
        let mut state = seed.wrapping_add(0x9e3779b97f4a7c15);
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        let mut nodes: Vec<Node<Rat>> = (0..nvars).map(Node::Input).collect();
        nodes.push(Node::Constant(rat(3, 2)));
        nodes.push(Node::Constant(rat(-2, 1)));
        for _ in 0..ops {
            let l = (next() as usize) % nodes.len();
            let r = (next() as usize) % nodes.len();
            let node = match next() % 3 {
                0 => Node::Add(l, r),
                1 => Node::Sub(l, r),
                _ => Node::Mul(l, r),
            };
            nodes.push(node);
        }
        let len = nodes.len();
        let outputs = (0..n_outputs).map(|_| (next() as usize) % len).collect();
        Circuit::new(nvars, nodes, outputs)
    }

    #[test]
    fn derivative_circuits_match_symbolic_partials() {
        for seed in 0..25 {
            let c = random_circuit(seed, 3, 12, 2);
            let Ok(polys) = c.expand(64) else { continue };
            let d = c.differentiate();
            let dpolys = d.expand(64).unwrap();
            assert_eq!(dpolys.len(), c.num_outputs() * c.nvars());
            for (k, f) in polys.iter().enumerate() {
                for j in 0..c.nvars() {
                    assert_eq!(dpolys[k * c.nvars() + j], f.partial_derivative(j));
                }
            }
        }
    }

    #[test]
    fn eval_agrees_with_expand() {
        for seed in 100..120 {
            let c = random_circuit(seed, 2, 10, 3);
            let Ok(polys) = c.expand(64) else { continue };
            let x = vec![rat(5, 3), rat(-2, 7)];
            let direct = c.eval(&x);
            let via_poly: Vec<Rat> = polys.iter().map(|p| p.eval(&x)).collect();
            assert_eq!(direct, via_poly);
        }
    }

    #[test]
    fn print_parse_round_trip() {
        let sources = [
            "%1 = mul X1 X1\n%2 = add %1 3/2\nout %2\n",
            "%1 = mul X1 X2\n%2 = sub %1 -1/3\n%3 = mul %2 %2\nout %3\nout %1\n",
        ];
        for src in sources {
            let c = parse(src);
            let printed = c.print();
            let reparsed = parse(&printed);
            assert_eq!(reparsed, c);
            assert_eq!(reparsed.print(), printed);
        }
    }
}
