//! Commutative Frobenius algebras, their 2d TQFT amplitudes and the associated
//! Airy structure on the abelian Lie algebra `𝒜`.
//!
//! With dual bases `b(e_i, e_j^*) = δ_{ij}`, `ψ(x) = b(𝟏, x)` and the handle
//! element `H = Σ e_a e_a^*`,
//!
//! ```text
//! A^i_{jk} = ψ(e_i^* e_j^* e_k^*)   B^i_{jk} = ψ(e_i^* e_j^* e_k)
//! C^i_{jk} = ψ(e_i^* e_j e_k)       D^i      = ψ(e_i^* H)
//! ```
//!
//! Every graph of `𝔾_{g,n}` then contributes the TQFT amplitude evaluated on
//! the dual basis, so `F_{g,n}[i⃗] = |𝔾_{g,n}| · 𝓕(Σ_{g,n})(e_{i₁}^*, …, e_{iₙ}^*)`.

use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::airy::{AiryStructure, IndexSet};
use crate::coeff::{parse_rational, rational_to_string, Rational};
use crate::graphs::{self, EdgeKind, TRGraph};
use crate::linalg::Matrix;
use crate::tr::{self, is_stable};
use crate::Error;

#[derive(Clone, Debug, PartialEq)]
pub struct FrobeniusAlgebra {
    dim: usize,
    /// `mu[i][j][k]`: coefficient of `e_k` in `e_i e_j`.
    mu: Vec<Vec<Vec<Rational>>>,
    b: Matrix<Rational>,
    unit: Vec<Rational>,
    b_inv: Matrix<Rational>,
}

pub type Vector = Vec<Rational>;

fn basis(dim: usize, i: usize) -> Vector {
    let mut v = vec![Rational::zero(); dim];
    v[i] = Rational::one();
    v
}

impl FrobeniusAlgebra {
    /// Validates commutativity, associativity, the unit, and a symmetric,
    /// invertible, invariant pairing.
    pub fn new(mu: Vec<Vec<Vec<Rational>>>, b: Matrix<Rational>, unit: Vector) -> Result<Self, Error> {
        let dim = unit.len();
        if dim == 0 {
            return Err(Error::invalid("Frobenius algebra must be non-zero"));
        }
        if mu.len() != dim || mu.iter().any(|r| r.len() != dim || r.iter().any(|c| c.len() != dim)) {
            return Err(Error::invalid("product tensor has the wrong shape"));
        }
        if b.rows() != dim || b.cols() != dim || !b.is_symmetric() {
            return Err(Error::invalid("pairing must be a symmetric dim × dim matrix"));
        }
        let b_inv = b.inverse().map_err(|_| Error::invalid("pairing is degenerate"))?;
        let alg = FrobeniusAlgebra { dim, mu, b, unit, b_inv };
        alg.validate()?;
        Ok(alg)
    }

    fn validate(&self) -> Result<(), Error> {
        let n = self.dim;
        for i in 0..n {
            for j in 0..n {
                if self.mu[i][j] != self.mu[j][i] {
                    return Err(Error::invalid(format!("product is not commutative at ({i},{j})")));
                }
                let (ei, ej) = (basis(n, i), basis(n, j));
                for k in 0..n {
                    let ek = basis(n, k);
                    if self.mul(&self.mul(&ei, &ej), &ek) != self.mul(&ei, &self.mul(&ej, &ek)) {
                        return Err(Error::invalid(format!("product is not associative at ({i},{j},{k})")));
                    }
                    if self.pair(&self.mul(&ei, &ej), &ek) != self.pair(&ei, &self.mul(&ej, &ek)) {
                        return Err(Error::invalid(format!("pairing is not invariant at ({i},{j},{k})")));
                    }
                }
            }
            if self.mul(&self.unit, &basis(n, i)) != basis(n, i) {
                return Err(Error::invalid("unit is not a unit"));
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn unit(&self) -> &Vector {
        &self.unit
    }

    pub fn pairing(&self) -> &Matrix<Rational> {
        &self.b
    }

    pub fn mul(&self, x: &[Rational], y: &[Rational]) -> Vector {
        let mut out = vec![Rational::zero(); self.dim];
        for (i, xi) in x.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
            for (j, yj) in y.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
                let c = xi * yj;
                for (k, m) in self.mu[i][j].iter().enumerate() {
                    if !m.is_zero() {
                        out[k] += &c * m;
                    }
                }
            }
        }
        out
    }

    pub fn pair(&self, x: &[Rational], y: &[Rational]) -> Rational {
        let mut t = Rational::zero();
        for i in 0..self.dim {
            for j in 0..self.dim {
                t += &x[i] * &self.b[(i, j)] * &y[j];
            }
        }
        t
    }

    /// `ψ(x) = b(𝟏, x)`.
    pub fn psi(&self, x: &[Rational]) -> Rational {
        self.pair(&self.unit, x)
    }

    pub fn basis_vector(&self, i: usize) -> Vector {
        basis(self.dim, i)
    }

    /// `e_i^*` with `b(e_j, e_i^*) = δ_{ij}`.
    pub fn dual_basis_vector(&self, i: usize) -> Vector {
        (0..self.dim).map(|c| self.b_inv[(c, i)].clone()).collect()
    }

    /// `H = Σ_a e_a e_a^*`.
    pub fn handle_element(&self) -> Vector {
        let mut h = vec![Rational::zero(); self.dim];
        for a in 0..self.dim {
            for (k, v) in self.mul(&self.basis_vector(a), &self.dual_basis_vector(a)).into_iter().enumerate() {
                h[k] += v;
            }
        }
        h
    }

    /// Re-expresses the algebra in the basis `f_i = Σ_j P_{ji} e_j`.
    pub fn change_basis(&self, p: &Matrix<Rational>) -> Result<Self, Error> {
        let p_inv = p.inverse()?;
        let n = self.dim;
        let col = |i: usize| -> Vector { (0..n).map(|j| p[(j, i)].clone()).collect() };
        let to_new = |v: &Vector| -> Vector {
            (0..n).map(|i| (0..n).map(|j| &p_inv[(i, j)] * &v[j]).sum()).collect()
        };
        let mu = (0..n)
            .map(|i| (0..n).map(|j| to_new(&self.mul(&col(i), &col(j)))).collect())
            .collect();
        let b = Matrix::from_fn(n, n, |i, j| self.pair(&col(i), &col(j)));
        FrobeniusAlgebra::new(mu, b, to_new(&self.unit))
    }

    /// `A_Δ`: one basis vector `e` with `e·e = Δe`, `b(e,e) = 1`, so `𝟏 = e/Δ`.
    pub fn a_delta(delta: Rational) -> Result<Self, Error> {
        Self::diagonal(vec![delta])
    }

    /// `e_α e_β = Δ_α δ_{αβ} e_α` with orthonormal basis.
    pub fn diagonal(deltas: Vec<Rational>) -> Result<Self, Error> {
        if deltas.iter().any(Zero::is_zero) {
            return Err(Error::invalid("Δ must be non-zero"));
        }
        let n = deltas.len();
        let mut mu = vec![vec![vec![Rational::zero(); n]; n]; n];
        for (a, d) in deltas.iter().enumerate() {
            mu[a][a][a] = d.clone();
        }
        let unit = deltas.iter().map(|d| d.recip()).collect();
        Self::new(mu, Matrix::identity(n), unit)
    }

    /// `ℚ[x]/(x^d)` with the form `ψ(x^k) = psi[k]`; needs `psi[d−1] ≠ 0`.
    pub fn truncated_polynomial(psi: Vec<Rational>) -> Result<Self, Error> {
        let d = psi.len();
        let mut mu = vec![vec![vec![Rational::zero(); d]; d]; d];
        for i in 0..d {
            for j in 0..d {
                if i + j < d {
                    mu[i][j][i + j] = Rational::one();
                }
            }
        }
        let b = Matrix::from_fn(d, d, |i, j| psi.get(i + j).cloned().unwrap_or_else(Rational::zero));
        Self::new(mu, b, basis(d, 0))
    }

    pub fn direct_sum(&self, other: &Self) -> Result<Self, Error> {
        let (n1, n) = (self.dim, self.dim + other.dim);
        let mut mu = vec![vec![vec![Rational::zero(); n]; n]; n];
        let b = Matrix::from_fn(n, n, |i, j| match (i < n1, j < n1) {
            (true, true) => self.b[(i, j)].clone(),
            (false, false) => other.b[(i - n1, j - n1)].clone(),
            _ => Rational::zero(),
        });
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    mu[i][j][k] = match (i < n1, j < n1, k < n1) {
                        (true, true, true) => self.mu[i][j][k].clone(),
                        (false, false, false) => other.mu[i - n1][j - n1][k - n1].clone(),
                        _ => Rational::zero(),
                    };
                }
            }
        }
        let unit = self.unit.iter().chain(other.unit.iter()).cloned().collect();
        Self::new(mu, b, unit)
    }

    /// `{"dim": d, "mu": [[i,j,k,"p/q"],…], "b": [[i,j,"p/q"],…], "unit": ["p/q",…]}`;
    /// products and pairings listed for one order are mirrored.
    pub fn from_json(v: &Value) -> Result<Self, Error> {
        let dim = v.get("dim").and_then(Value::as_u64).ok_or_else(|| Error::parse("missing dim"))? as usize;
        let scalar = |x: &Value| -> Result<Rational, Error> {
            match x {
                Value::String(s) => parse_rational(s),
                Value::Number(n) => n.as_i64().map(|i| Rational::from_integer(i.into())).ok_or_else(|| Error::parse("bad number")),
                _ => Err(Error::parse("scalars must be strings \"p/q\" or integers")),
            }
        };
        let index = |x: &Value| -> Result<usize, Error> {
            let i = x.as_u64().ok_or_else(|| Error::parse("indices must be non-negative integers"))? as usize;
            if i >= dim {
                return Err(Error::parse(format!("index {i} out of range")));
            }
            Ok(i)
        };
        let array = |key: &str| -> Result<&Vec<Value>, Error> {
            v.get(key).and_then(Value::as_array).ok_or_else(|| Error::parse(format!("missing array {key}")))
        };
        let mut mu = vec![vec![vec![Rational::zero(); dim]; dim]; dim];
        let mut seen = std::collections::BTreeSet::new();
        let mut entries = Vec::new();
        for e in array("mu")? {
            let e = e.as_array().filter(|a| a.len() == 4).ok_or_else(|| Error::parse("mu entries are [i,j,k,v]"))?;
            let (i, j, k) = (index(&e[0])?, index(&e[1])?, index(&e[2])?);
            seen.insert((i, j, k));
            entries.push((i, j, k, scalar(&e[3])?));
        }
        for (i, j, k, val) in entries {
            if !seen.contains(&(j, i, k)) {
                mu[j][i][k] = val.clone();
            }
            mu[i][j][k] = val;
        }
        let mut b = Matrix::zeros(dim, dim);
        for e in array("b")? {
            let e = e.as_array().filter(|a| a.len() == 3).ok_or_else(|| Error::parse("b entries are [i,j,v]"))?;
            let (i, j, val) = (index(&e[0])?, index(&e[1])?, scalar(&e[2])?);
            b[(i, j)] = val.clone();
            b[(j, i)] = val;
        }
        let unit: Vector = array("unit")?.iter().map(scalar).collect::<Result<_, _>>()?;
        if unit.len() != dim {
            return Err(Error::parse("unit must have dim coordinates"));
        }
        Self::new(mu, b, unit)
    }

    pub fn to_json(&self) -> Value {
        let n = self.dim;
        let mut mu = Vec::new();
        for i in 0..n {
            for j in i..n {
                for k in 0..n {
                    if !self.mu[i][j][k].is_zero() {
                        mu.push(json!([i, j, k, rational_to_string(&self.mu[i][j][k])]));
                    }
                }
            }
        }
        let mut b = Vec::new();
        for i in 0..n {
            for j in i..n {
                if !self.b[(i, j)].is_zero() {
                    b.push(json!([i, j, rational_to_string(&self.b[(i, j)])]));
                }
            }
        }
        let unit: Vec<String> = self.unit.iter().map(rational_to_string).collect();
        json!({ "dim": n, "mu": mu, "b": b, "unit": unit })
    }
}

/// An `n`-linear form on `𝒜`, stored by its values on basis vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct Multilinear {
    pub dim: usize,
    pub n: usize,
    values: Vec<Rational>,
}

impl Multilinear {
    fn offset(&self, idx: &[usize]) -> usize {
        idx.iter().fold(0, |acc, &i| acc * self.dim + i)
    }

    pub fn get(&self, idx: &[usize]) -> &Rational {
        &self.values[self.offset(idx)]
    }

    /// Value on arbitrary vectors by multilinearity.
    pub fn evaluate(&self, vectors: &[Vector]) -> Rational {
        let mut total = Rational::zero();
        for (pos, v) in self.values.iter().enumerate() {
            if v.is_zero() {
                continue;
            }
            let mut rem = pos;
            let mut coeff = v.clone();
            for slot in (0..self.n).rev() {
                coeff *= &vectors[slot][rem % self.dim];
                rem /= self.dim;
            }
            total += coeff;
        }
        total
    }

    fn tabulate(dim: usize, n: usize, mut f: impl FnMut(&[usize]) -> Rational) -> Self {
        let total = dim.pow(n as u32);
        let mut values = Vec::with_capacity(total);
        let mut idx = vec![0; n];
        for pos in 0..total {
            let mut rem = pos;
            for slot in (0..n).rev() {
                idx[slot] = rem % dim;
                rem /= dim;
            }
            values.push(f(&idx));
        }
        Multilinear { dim, n, values }
    }
}

/// `𝓕(Σ_{g,n})(v₁,…,vₙ) = ψ(v₁⋯vₙ H^g)`.
pub fn tqft_amplitude(f: &FrobeniusAlgebra, g: usize, n: usize) -> Result<Multilinear, Error> {
    if !is_stable(g, n) {
        return Err(Error::Unsupported(format!("no TQFT amplitude for (g, n) = ({g}, {n})")));
    }
    let h = f.handle_element();
    let mut hg = f.unit.clone();
    for _ in 0..g {
        hg = f.mul(&hg, &h);
    }
    Ok(Multilinear::tabulate(f.dim, n, |idx| {
        let prod = idx.iter().fold(hg.clone(), |acc, &i| f.mul(&acc, &f.basis_vector(i)));
        f.psi(&prod)
    }))
}

/// One leg of a pair of pants: an external boundary or one side of a gluing.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Leg {
    Boundary(usize),
    Glued(usize),
}

/// A pair-of-pants decomposition: every glued curve appears on exactly two legs.
#[derive(Clone, Debug, PartialEq)]
pub struct Decomposition {
    pub g: usize,
    pub n: usize,
    pub pants: Vec<[Leg; 3]>,
}

impl Decomposition {
    /// The decomposition dual to a trivalent graph.
    pub fn from_graph(graph: &TRGraph) -> Self {
        let mut legs: Vec<Vec<Leg>> = vec![Vec::new(); graph.vertices];
        let mut curve = 0;
        for e in &graph.edges {
            match e.kind {
                EdgeKind::Leaf(l) => legs[e.u].push(Leg::Boundary(l)),
                _ => {
                    legs[e.u].push(Leg::Glued(curve));
                    legs[e.v].push(Leg::Glued(curve));
                    curve += 1;
                }
            }
        }
        let pants = legs.into_iter().map(|l| [l[0], l[1], l[2]]).collect();
        Decomposition { g: graph.g, n: graph.n, pants }
    }

    pub fn curves(&self) -> usize {
        self.pants
            .iter()
            .flatten()
            .filter_map(|l| if let Leg::Glued(c) = l { Some(c + 1) } else { None })
            .max()
            .unwrap_or(0)
    }

    /// The same pants with each triple of legs listed in reverse order.
    pub fn reversed(&self) -> Self {
        Decomposition {
            g: self.g,
            n: self.n,
            pants: self.pants.iter().map(|p| [p[2], p[1], p[0]]).collect(),
        }
    }

    /// Contracts `ψ(xyz)` at every pants along the copairing `b^{-1}`.
    pub fn contract(&self, f: &FrobeniusAlgebra) -> Multilinear {
        let dim = f.dim;
        let curves = self.curves();
        let trilinear = Multilinear::tabulate(dim, 3, |idx| {
            f.psi(&f.mul(&f.mul(&f.basis_vector(idx[0]), &f.basis_vector(idx[1])), &f.basis_vector(idx[2])))
        });
        // Each curve has two sides, colored independently and weighted by b^{-1}.
        let sides = 2 * curves;
        Multilinear::tabulate(dim, self.n, |ext| {
            let mut total = Rational::zero();
            let mut colors = vec![0usize; sides];
            loop {
                let mut w = Rational::one();
                for c in 0..curves {
                    w *= &f.b_inv[(colors[2 * c], colors[2 * c + 1])];
                    if w.is_zero() {
                        break;
                    }
                }
                if !w.is_zero() {
                    let mut used = vec![0usize; curves];
                    for p in &self.pants {
                        let mut idx = [0usize; 3];
                        for (s, leg) in p.iter().enumerate() {
                            idx[s] = match leg {
                                Leg::Boundary(l) => ext[*l],
                                Leg::Glued(c) => {
                                    let side = used[*c];
                                    used[*c] += 1;
                                    colors[2 * c + side]
                                }
                            };
                        }
                        w *= trilinear.get(&idx);
                        if w.is_zero() {
                            break;
                        }
                    }
                    total += w;
                }
                let mut k = 0;
                while k < sides {
                    colors[k] += 1;
                    if colors[k] < dim {
                        break;
                    }
                    colors[k] = 0;
                    k += 1;
                }
                if k == sides {
                    break;
                }
            }
            total
        })
    }
}

/// Decompositions used to test independence: one per graph of `𝔾_{g,n}` and
/// each with its legs listed in reverse.
pub fn decomposition_catalog(g: usize, n: usize) -> Vec<Decomposition> {
    graphs::enumerate(g, n)
        .iter()
        .map(Decomposition::from_graph)
        .flat_map(|d| {
            let r = d.reversed();
            [d, r]
        })
        .collect()
}

/// The Airy structure of the algebra in the basis `(e_i)` with duals `(e_i^*)`.
pub fn airy_from_frobenius(f: &FrobeniusAlgebra) -> AiryStructure<Rational> {
    let n = f.dim;
    let e: Vec<Vector> = (0..n).map(|i| f.basis_vector(i)).collect();
    let es: Vec<Vector> = (0..n).map(|i| f.dual_basis_vector(i)).collect();
    let h = f.handle_element();
    let triple = |x: &Vector, y: &Vector, z: &Vector| f.psi(&f.mul(&f.mul(x, y), z));
    let mut s = AiryStructure::zero(IndexSet::Finite { dim: n });
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                s.set_a_raw(i, j, k, triple(&es[i], &es[j], &es[k]));
                s.set_b(i, j, k, triple(&es[i], &es[j], &e[k]));
                s.set_c_raw(i, j, k, triple(&es[i], &e[j], &e[k]));
            }
        }
        s.set_d(i, f.psi(&f.mul(&es[i], &h)));
    }
    s
}

#[derive(Clone, Debug, PartialEq)]
pub struct CcReport {
    pub g: usize,
    pub n: usize,
    pub graph_count: Rational,
    /// Multi-indices where `F_{g,n} ≠ |𝔾_{g,n}| 𝓕(Σ_{g,n})` on dual basis vectors.
    pub failures: Vec<Vec<usize>>,
}

impl CcReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Compares `F_{g,n}[i⃗]` from the recursion with `|𝔾_{g,n}|·𝓕(Σ_{g,n})(e_{i₁}^*, …)`.
pub fn verify_cc(f: &FrobeniusAlgebra, g: usize, n: usize) -> Result<CcReport, Error> {
    let tqft = tqft_amplitude(f, g, n)?;
    let table = tr::compute(&airy_from_frobenius(f), 2 * g + n - 2)?;
    let count = graphs::count(g, n);
    let duals: Vec<Vector> = (0..f.dim).map(|i| f.dual_basis_vector(i)).collect();
    let mut failures = Vec::new();
    for idx in table.domain(g, n) {
        let vectors: Vec<Vector> = idx.iter().map(|&i| duals[i].clone()).collect();
        if table.value(g, &idx) != &count * tqft.evaluate(&vectors) {
            failures.push(idx);
        }
    }
    Ok(CcReport { g, n, graph_count: count, failures })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::{int, rat};
    use crate::tr::cells_at;

    fn sample_algebras() -> Vec<FrobeniusAlgebra> {
        let p = Matrix::from_rows(vec![vec![int(1), int(2)], vec![rat(1, 3), int(-1)]]).unwrap();
        vec![
            FrobeniusAlgebra::a_delta(rat(3, 2)).unwrap(),
            FrobeniusAlgebra::diagonal(vec![int(2), rat(-1, 3)]).unwrap(),
            FrobeniusAlgebra::diagonal(vec![int(2), rat(-1, 3)]).unwrap().change_basis(&p).unwrap(),
            FrobeniusAlgebra::truncated_polynomial(vec![int(1), int(3)]).unwrap(),
            FrobeniusAlgebra::truncated_polynomial(vec![int(0), int(2), rat(1, 2)]).unwrap(),
        ]
    }

    #[test]
    fn a_delta_tensors() {
        let d = rat(5, 3);
        let f = FrobeniusAlgebra::a_delta(d.clone()).unwrap();
        assert_eq!(f.handle_element(), vec![d.clone()]);
        let s = airy_from_frobenius(&f);
        for x in [s.a(0, 0, 0), s.b(0, 0, 0), s.c(0, 0, 0), s.d(0)] {
            assert_eq!(x, Some(&d));
        }
    }

    #[test]
    fn a_delta_amplitudes() {
        let d = rat(-2, 7);
        let f = FrobeniusAlgebra::a_delta(d.clone()).unwrap();
        for chi in 1..=5usize {
            for (g, n) in cells_at(chi) {
                let t = tqft_amplitude(&f, g, n).unwrap();
                assert_eq!(t.get(&vec![0; n]), &num_traits::pow(d.clone(), chi));
            }
        }
        assert!(tqft_amplitude(&f, 0, 2).is_err());
    }

    #[test]
    fn diagonal_amplitudes() {
        let f = FrobeniusAlgebra::diagonal(vec![int(2), int(3)]).unwrap();
        assert_eq!(f.handle_element(), vec![int(2), int(3)]);
        let t = tqft_amplitude(&f, 1, 2).unwrap();
        assert_eq!(t.get(&[0, 0]), &int(4));
        assert_eq!(t.get(&[1, 1]), &int(9));
        assert_eq!(t.get(&[0, 1]), &int(0));
    }

    #[test]
    fn handle_element_is_basis_free() {
        let f = FrobeniusAlgebra::truncated_polynomial(vec![int(1), int(2), int(5)]).unwrap();
        let p = Matrix::from_rows(vec![
            vec![int(1), int(1), int(0)],
            vec![int(0), int(2), rat(1, 2)],
            vec![int(-1), int(0), int(3)],
        ])
        .unwrap();
        let g = f.change_basis(&p).unwrap();
        let h_new = g.handle_element();
        // Express H from the new basis back in the old one.
        let back: Vector = (0..3).map(|j| (0..3).map(|i| &p[(j, i)] * &h_new[i]).sum()).collect();
        assert_eq!(back, f.handle_element());
        // ψ(xH) is the trace of multiplication by x.
        for i in 0..3 {
            let trace: Rational = (0..3).map(|a| f.mul(&f.basis_vector(i), &f.basis_vector(a))[a].clone()).sum();
            assert_eq!(f.psi(&f.mul(&f.basis_vector(i), &f.handle_element())), trace);
        }
    }

    #[test]
    fn decompositions_agree() {
        for f in sample_algebras() {
            for chi in 1..=3 {
                for (g, n) in cells_at(chi) {
                    let closed = tqft_amplitude(&f, g, n).unwrap();
                    let catalog = decomposition_catalog(g, n);
                    assert!(catalog.len() >= 2);
                    for d in catalog {
                        assert_eq!(d.contract(&f), closed, "({g},{n}) {:?}", d.pants);
                    }
                }
            }
        }
    }

    #[test]
    fn airy_structures_are_valid() {
        for f in sample_algebras() {
            let s = airy_from_frobenius(&f);
            assert!(s.check_relations().unwrap().passed());
            assert!(s.structure_constants().values().all(Zero::is_zero));
            let t = tr::compute(&s, 4).unwrap();
            assert!(t.verify_symmetry().passed());
        }
    }

    #[test]
    fn cc_identity() {
        for f in sample_algebras() {
            for chi in 1..=4 {
                for (g, n) in cells_at(chi) {
                    let rep = verify_cc(&f, g, n).unwrap();
                    assert!(rep.passed(), "({g},{n}) {:?}", rep.failures);
                }
            }
        }
    }

    #[test]
    fn invalid_algebras() {
        let b = Matrix::identity(1);
        assert!(FrobeniusAlgebra::new(vec![vec![vec![int(1)]]], b.clone(), vec![int(2)]).is_err());
        assert!(FrobeniusAlgebra::new(vec![vec![vec![int(1)]]], Matrix::zeros(1, 1), vec![int(1)]).is_err());
        assert!(FrobeniusAlgebra::diagonal(vec![int(0)]).is_err());
        // ℚ[x]/(x²) with ψ(x) = 0 is degenerate.
        assert!(FrobeniusAlgebra::truncated_polynomial(vec![int(1), int(0)]).is_err());
    }

    #[test]
    fn json_round_trip() {
        for f in sample_algebras() {
            assert_eq!(FrobeniusAlgebra::from_json(&f.to_json()).unwrap(), f);
        }
        let v: Value = serde_json::from_str(r#"{"dim":1,"mu":[[0,0,0,"2"]],"b":[[0,0,1]],"unit":["1/2"]}"#).unwrap();
        assert_eq!(FrobeniusAlgebra::from_json(&v).unwrap(), FrobeniusAlgebra::a_delta(int(2)).unwrap());
        let bad: Value = serde_json::from_str(r#"{"dim":1,"mu":[[0,0,1,"2"]],"b":[],"unit":["1"]}"#).unwrap();
        assert!(FrobeniusAlgebra::from_json(&bad).is_err());
    }
}
