//! Quantum Airy structures.
//!
//! A structure is the data `(A, B, C, D)` defining the operators
//! `L_i = ħ∂_i − ½A^i_{ab}x_a x_b − ħB^i_{ab}x_a∂_b − ½ħ²C^i_{ab}∂_a∂_b − ħD^i`.
//! In `B^i_{ab}` the first lower slot pairs with `x`, the second with `∂`.
//!
//! Index sets are either finite or a graded truncation `I₀ × {0..=N}`. Graded
//! structures carry a [`Sparsity`] describing where each tensor may be non-zero
//! beyond the truncation, which is what makes dummy sums provably finite.

mod json;
mod ops;
mod relations;

use std::collections::BTreeMap;


use crate::coeff::{rat, Rational, Scalar};
use crate::linalg::Matrix;
use crate::Error;

pub use json::{structure_from_json, structure_to_json};
pub use ops::{change_basis, direct_sum, quadratic_shift, translate};
pub use relations::{check_relations, Relation, RelationReport, Violation};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IndexSet {
    Finite { dim: usize },
    /// Indices `grade * block + label` for `grade ∈ 0..=max_grade`, `label ∈ 0..block`.
    Graded { max_grade: usize, block: usize },
}

impl IndexSet {
    pub fn len(&self) -> usize {
        match *self {
            IndexSet::Finite { dim } => dim,
            IndexSet::Graded { max_grade, block } => (max_grade + 1) * block,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_graded(&self) -> bool {
        matches!(self, IndexSet::Graded { .. })
    }

    /// Grade of an index; finite sets put everything in grade 0.
    pub fn grade(&self, i: usize) -> usize {
        match *self {
            IndexSet::Finite { .. } => 0,
            IndexSet::Graded { block, .. } => i / block,
        }
    }

    pub fn label(&self, i: usize) -> usize {
        match *self {
            IndexSet::Finite { .. } => i,
            IndexSet::Graded { block, .. } => i % block,
        }
    }

    pub fn index(&self, grade: usize, label: usize) -> usize {
        match *self {
            IndexSet::Finite { .. } => label,
            IndexSet::Graded { block, .. } => grade * block + label,
        }
    }

    pub fn max_grade(&self) -> Option<usize> {
        match *self {
            IndexSet::Finite { .. } => None,
            IndexSet::Graded { max_grade, .. } => Some(max_grade),
        }
    }

    pub fn block(&self) -> usize {
        match *self {
            IndexSet::Finite { dim } => dim,
            IndexSet::Graded { block, .. } => block,
        }
    }

    /// The same labels truncated at a different maximal grade.
    pub fn with_max_grade(&self, max_grade: usize) -> IndexSet {
        match *self {
            IndexSet::Finite { .. } => *self,
            IndexSet::Graded { block, .. } => IndexSet::Graded { max_grade, block },
        }
    }
}

/// Closed interval of integers, either end possibly unbounded.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Window {
    pub lo: Option<i64>,
    pub hi: Option<i64>,
}

impl Window {
    pub const UNBOUNDED: Window = Window { lo: None, hi: None };

    pub fn new(lo: Option<i64>, hi: Option<i64>) -> Self {
        Window { lo, hi }
    }

    pub fn at_least(lo: i64) -> Self {
        Window { lo: Some(lo), hi: None }
    }

    pub fn at_most(hi: i64) -> Self {
        Window { lo: None, hi: Some(hi) }
    }

    pub fn contains(&self, v: i64) -> bool {
        self.lo.is_none_or(|lo| v >= lo) && self.hi.is_none_or(|hi| v <= hi)
    }

    /// Smallest window containing both.
    pub fn hull(&self, other: &Window) -> Window {
        Window {
            lo: self.lo.zip(other.lo).map(|(a, b)| a.min(b)),
            hi: self.hi.zip(other.hi).map(|(a, b)| a.max(b)),
        }
    }
}

/// Grade selection rules for a graded structure:
/// `A^i_{jk}` vanishes unless `g_i+g_j+g_k ∈ a`, `B^i_{jk}` unless
/// `g_k−g_i−g_j ∈ b`, `C^i_{jk}` unless `g_j+g_k−g_i ∈ c` and `D^i` unless
/// `g_i ∈ d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Sparsity {
    pub a: Window,
    pub b: Window,
    pub c: Window,
    pub d: Window,
}

impl Sparsity {
    /// Selection rules of the Witten–Kontsevich and Weil–Petersson structures.
    pub fn witten_kontsevich() -> Self {
        Sparsity {
            a: Window::new(Some(0), Some(0)),
            b: Window::at_least(-1),
            c: Window::at_least(-2),
            d: Window::new(Some(0), Some(1)),
        }
    }

    pub fn admits_a(&self, gi: usize, gj: usize, gk: usize) -> bool {
        self.a.contains((gi + gj + gk) as i64)
    }

    pub fn admits_b(&self, gi: usize, gj: usize, gk: usize) -> bool {
        self.b.contains(gk as i64 - gi as i64 - gj as i64)
    }

    pub fn admits_c(&self, gi: usize, gj: usize, gk: usize) -> bool {
        self.c.contains(gj as i64 + gk as i64 - gi as i64)
    }

    pub fn admits_d(&self, gi: usize) -> bool {
        self.d.contains(gi as i64)
    }

    /// Upper bound on the total grade of a non-zero `F_{g,n}` entry, derived
    /// from the windows by induction along the recursion. `None` if some
    /// window needed for the bound is open.
    pub fn degree_bound(&self, g: usize, n: usize) -> Option<i64> {
        let mut memo = BTreeMap::new();
        self.degree_bound_memo(g, n, &mut memo)
    }

    fn degree_bound_memo(
        &self,
        g: usize,
        n: usize,
        memo: &mut BTreeMap<(usize, usize), Option<i64>>,
    ) -> Option<i64> {
        if 2 * g + n < 3 || n == 0 {
            return None;
        }
        if let Some(v) = memo.get(&(g, n)) {
            return *v;
        }
        let value = match (g, n) {
            (0, 3) => self.a.hi,
            (1, 1) => self.d.hi,
            _ => {
                let beta = self.b.lo;
                let gamma = self.c.lo;
                let mut best: Option<i64> = None;
                let mut ok = true;
                let mut push = |v: Option<i64>| match v {
                    Some(v) => best = Some(best.map_or(v, |b: i64| b.max(v))),
                    None => ok = false,
                };
                if n >= 2 && 2 * g + n > 3 {
                    let prev = self.degree_bound_memo(g, n - 1, memo);
                    push(prev.zip(beta).map(|(d, b)| d - b));
                }
                if g >= 1 {
                    let prev = self.degree_bound_memo(g - 1, n + 1, memo);
                    push(prev.zip(gamma).map(|(d, c)| d - c));
                }
                let rest = n - 1;
                for g1 in 0..=g {
                    let g2 = g - g1;
                    for n1 in 0..=rest {
                        let n2 = rest - n1;
                        if 2 * g1 + n1 + 1 < 3 || 2 * g2 + n2 + 1 < 3 {
                            continue;
                        }
                        let d1 = self.degree_bound_memo(g1, n1 + 1, memo);
                        let d2 = self.degree_bound_memo(g2, n2 + 1, memo);
                        push(d1.zip(d2).zip(gamma).map(|((a, b), c)| a + b - c));
                    }
                }
                if ok {
                    best
                } else {
                    None
                }
            }
        };
        memo.insert((g, n), value);
        value
    }
}

pub type Tensor3<S> = BTreeMap<(usize, usize, usize), S>;

#[derive(Clone, Debug, PartialEq)]
pub struct AiryStructure<S> {
    index_set: IndexSet,
    a: Tensor3<S>,
    b: Tensor3<S>,
    c: Tensor3<S>,
    d: BTreeMap<usize, S>,
    sparsity: Option<Sparsity>,
}

fn put<K: Ord, S: Scalar>(map: &mut BTreeMap<K, S>, key: K, v: S) {
    if v.is_zero() {
        map.remove(&key);
    } else {
        map.insert(key, v);
    }
}

impl<S: Scalar> AiryStructure<S> {
    pub fn zero(index_set: IndexSet) -> Self {
        AiryStructure {
            index_set,
            a: BTreeMap::new(),
            b: BTreeMap::new(),
            c: BTreeMap::new(),
            d: BTreeMap::new(),
            sparsity: None,
        }
    }

    /// The one-dimensional structure with `A = B = C = D = 1`.
    pub fn unit() -> Self {
        let mut s = Self::zero(IndexSet::Finite { dim: 1 });
        s.set_a(0, 0, 0, S::one());
        s.set_b(0, 0, 0, S::one());
        s.set_c(0, 0, 0, S::one());
        s.set_d(0, S::one());
        s
    }

    pub fn index_set(&self) -> IndexSet {
        self.index_set
    }

    pub fn dim(&self) -> usize {
        self.index_set.len()
    }

    pub fn sparsity(&self) -> Option<&Sparsity> {
        self.sparsity.as_ref()
    }

    pub fn set_sparsity(&mut self, sparsity: Option<Sparsity>) {
        self.sparsity = sparsity;
    }

    pub fn grade(&self, i: usize) -> usize {
        self.index_set.grade(i)
    }

    fn check_index(&self, idx: &[usize]) {
        let n = self.dim();
        assert!(idx.iter().all(|&i| i < n), "index {idx:?} outside an index set of size {n}");
    }

    /// Sets `A^i_{jk}` and `A^i_{kj}` together.
    pub fn set_a(&mut self, i: usize, j: usize, k: usize, v: S) {
        self.check_index(&[i, j, k]);
        put(&mut self.a, (i, k, j), v.clone());
        put(&mut self.a, (i, j, k), v);
    }

    /// Sets all six permutations of `A^i_{jk}`.
    pub fn set_a_symmetric(&mut self, i: usize, j: usize, k: usize, v: S) {
        for (p, q, r) in [(i, j, k), (j, i, k), (k, i, j)] {
            self.set_a(p, q, r, v.clone());
        }
    }

    pub fn set_b(&mut self, i: usize, j: usize, k: usize, v: S) {
        self.check_index(&[i, j, k]);
        put(&mut self.b, (i, j, k), v);
    }

    /// Sets `C^i_{jk}` and `C^i_{kj}` together.
    pub fn set_c(&mut self, i: usize, j: usize, k: usize, v: S) {
        self.check_index(&[i, j, k]);
        put(&mut self.c, (i, k, j), v.clone());
        put(&mut self.c, (i, j, k), v);
    }

    pub fn set_d(&mut self, i: usize, v: S) {
        self.check_index(&[i]);
        put(&mut self.d, i, v);
    }

    /// Writes one raw entry of `A` without restoring `(j,k)` symmetry, so that
    /// malformed input can be represented and diagnosed.
    pub fn set_a_raw(&mut self, i: usize, j: usize, k: usize, v: S) {
        self.check_index(&[i, j, k]);
        put(&mut self.a, (i, j, k), v);
    }

    /// Raw counterpart of [`AiryStructure::set_c`].
    pub fn set_c_raw(&mut self, i: usize, j: usize, k: usize, v: S) {
        self.check_index(&[i, j, k]);
        put(&mut self.c, (i, j, k), v);
    }

    pub fn a(&self, i: usize, j: usize, k: usize) -> Option<&S> {
        self.a.get(&(i, j, k))
    }

    pub fn b(&self, i: usize, j: usize, k: usize) -> Option<&S> {
        self.b.get(&(i, j, k))
    }

    pub fn c(&self, i: usize, j: usize, k: usize) -> Option<&S> {
        self.c.get(&(i, j, k))
    }

    pub fn d(&self, i: usize) -> Option<&S> {
        self.d.get(&i)
    }

    pub fn a_entries(&self) -> &Tensor3<S> {
        &self.a
    }

    pub fn b_entries(&self) -> &Tensor3<S> {
        &self.b
    }

    pub fn c_entries(&self) -> &Tensor3<S> {
        &self.c
    }

    pub fn d_entries(&self) -> &BTreeMap<usize, S> {
        &self.d
    }

    /// Applies `f` to every stored entry, for instance to rescale a structure.
    pub fn map_entries(&self, f: impl Fn(&S) -> S) -> Self {
        let mut out = Self::zero(self.index_set);
        out.sparsity = self.sparsity;
        for (&(i, j, k), v) in &self.a {
            put(&mut out.a, (i, j, k), f(v));
        }
        for (&(i, j, k), v) in &self.b {
            put(&mut out.b, (i, j, k), f(v));
        }
        for (&(i, j, k), v) in &self.c {
            put(&mut out.c, (i, j, k), f(v));
        }
        for (&i, v) in &self.d {
            put(&mut out.d, i, f(v));
        }
        out
    }

    /// Every stored entry lies inside the sparsity windows.
    pub fn check_sparsity(&self) -> Result<(), Error> {
        let Some(sp) = self.sparsity else { return Ok(()) };
        let g = |i| self.grade(i);
        if let Some((k, _)) = self.a.iter().find(|((i, j, k), _)| !sp.admits_a(g(*i), g(*j), g(*k))) {
            return Err(Error::invalid(format!("A entry {k:?} violates the sparsity rule")));
        }
        if let Some((k, _)) = self.b.iter().find(|((i, j, k), _)| !sp.admits_b(g(*i), g(*j), g(*k))) {
            return Err(Error::invalid(format!("B entry {k:?} violates the sparsity rule")));
        }
        if let Some((k, _)) = self.c.iter().find(|((i, j, k), _)| !sp.admits_c(g(*i), g(*j), g(*k))) {
            return Err(Error::invalid(format!("C entry {k:?} violates the sparsity rule")));
        }
        if let Some((k, _)) = self.d.iter().find(|(i, _)| !sp.admits_d(g(**i))) {
            return Err(Error::invalid(format!("D entry {k} violates the sparsity rule")));
        }
        Ok(())
    }

    /// `f^k_{ij} = B^i_{jk} − B^j_{ik}`, keyed by `(i, j, k)`.
    pub fn structure_constants(&self) -> Tensor3<S> {
        let mut f = BTreeMap::new();
        for (&(i, j, k), v) in &self.b {
            if i == j {
                continue;
            }
            let entry = f.entry((i, j, k)).or_insert_with(S::zero);
            entry.add_ref(v);
            let entry = f.entry((j, i, k)).or_insert_with(S::zero);
            *entry = entry.clone() - v.clone();
        }
        f.retain(|_, v: &mut S| !v.is_zero());
        f
    }

    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> S {
        let get = |x: Option<&S>| x.cloned().unwrap_or_else(S::zero);
        get(self.b(i, j, k)) - get(self.b(j, i, k))
    }

    fn require_finite(&self, what: &str) -> Result<usize, Error> {
        match self.index_set {
            IndexSet::Finite { dim } => Ok(dim),
            IndexSet::Graded { .. } => Err(Error::Unsupported(format!("{what} needs a finite index set"))),
        }
    }

    /// The matrix `ρ_i = [[−B^i, A^i], [C^i, (B^i)ᵀ]]` acting on `V* ⊕ V`.
    pub fn rho(&self, i: usize) -> Result<Matrix<S>, Error> {
        let n = self.require_finite("the symplectic representation")?;
        let get = |x: Option<&S>| x.cloned().unwrap_or_else(S::zero);
        Ok(Matrix::from_fn(2 * n, 2 * n, |r, c| match (r < n, c < n) {
            (true, true) => -get(self.b(i, r, c)),
            (true, false) => get(self.a(i, r, c - n)),
            (false, true) => get(self.c(i, r - n, c)),
            (false, false) => get(self.b(i, c - n, r - n)),
        }))
    }

    /// Whether `ρ_iᵀΩ + Ωρ_i = 0` for `Ω = [[0, 1], [−1, 0]]`.
    pub fn check_symplectic(&self, i: usize) -> Result<bool, Error> {
        let rho = self.rho(i)?;
        let n = self.dim();
        let mut omega = Matrix::<S>::zeros(2 * n, 2 * n);
        for k in 0..n {
            omega[(k, n + k)] = S::one();
            omega[(n + k, k)] = -S::one();
        }
        let lhs = rho.transpose().mul(&omega)?.add(&omega.mul(&rho)?)?;
        Ok(lhs.is_zero())
    }

    /// `D₀^i = ½ Σ_k B^i_{kk}`.
    pub fn canonical_d(&self) -> Result<BTreeMap<usize, S>, Error> {
        let n = self.require_finite("the canonical D")?;
        let half = rat(1, 2);
        let mut out = BTreeMap::new();
        for i in 0..n {
            let mut acc = S::zero();
            for k in 0..n {
                if let Some(v) = self.b(i, k, k) {
                    acc.add_ref(v);
                }
            }
            put(&mut out, i, acc.scale(&half));
        }
        Ok(out)
    }

    /// The same structure with `D` replaced.
    pub fn with_d(&self, d: BTreeMap<usize, S>) -> Self {
        let mut out = self.clone();
        out.d = d.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        out
    }

    /// Restriction to indices of grade at most `max_grade`.
    pub fn truncate(&self, max_grade: usize) -> Self {
        let index_set = self.index_set.with_max_grade(max_grade);
        let n = index_set.len();
        let keep3 = |&(i, j, k): &(usize, usize, usize)| i < n && j < n && k < n;
        AiryStructure {
            index_set,
            a: self.a.iter().filter(|(k, _)| keep3(k)).map(|(k, v)| (*k, v.clone())).collect(),
            b: self.b.iter().filter(|(k, _)| keep3(k)).map(|(k, v)| (*k, v.clone())).collect(),
            c: self.c.iter().filter(|(k, _)| keep3(k)).map(|(k, v)| (*k, v.clone())).collect(),
            d: self.d.iter().filter(|(k, _)| **k < n).map(|(k, v)| (*k, v.clone())).collect(),
            sparsity: self.sparsity,
        }
    }

    /// Converts every entry to another ring, failing if some entry does not fit.
    pub fn convert<T: Scalar>(&self) -> Result<AiryStructure<T>, Error> {
        let conv = |v: &S| {
            T::from_pipoly(&v.to_pipoly())
                .ok_or_else(|| Error::invalid(format!("value {v} does not lie in the {} ring", T::RING.name())))
        };
        let mut out = AiryStructure::zero(self.index_set);
        out.sparsity = self.sparsity;
        for (&k, v) in &self.a {
            out.a.insert(k, conv(v)?);
        }
        for (&k, v) in &self.b {
            out.b.insert(k, conv(v)?);
        }
        for (&k, v) in &self.c {
            out.c.insert(k, conv(v)?);
        }
        for (&k, v) in &self.d {
            out.d.insert(k, conv(v)?);
        }
        Ok(out)
    }
}

impl AiryStructure<Rational> {
    /// Scales every tensor by `λ`; used for the one-dimensional examples.
    pub fn scaled(&self, lambda: &Rational) -> Self {
        self.map_entries(|v| v * lambda)
    }
}

/// Zero if absent.
#[cfg(test)]
pub(crate) fn val<S: Scalar>(x: Option<&S>) -> S {
    x.cloned().unwrap_or_else(S::zero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::int;

    type Q = Rational;

    #[test]
    fn unit_structure_constants_vanish() {
        let s = AiryStructure::<Q>::unit();
        assert!(s.structure_constants().is_empty());
        assert!(s.check_symplectic(0).unwrap());
        assert_eq!(s.canonical_d().unwrap()[&0], rat(1, 2));
    }

    #[test]
    fn rho_of_unit_structure() {
        let s = AiryStructure::<Q>::unit();
        let rho = s.rho(0).unwrap();
        assert_eq!(
            rho,
            Matrix::from_rows(vec![vec![int(-1), int(1)], vec![int(1), int(1)]]).unwrap()
        );
    }

    #[test]
    fn asymmetric_c_is_not_symplectic() {
        let mut s = AiryStructure::<Q>::zero(IndexSet::Finite { dim: 2 });
        s.set_c_raw(0, 0, 1, int(1));
        assert!(!s.check_symplectic(0).unwrap());
        s.set_c(0, 0, 1, int(1));
        assert!(s.check_symplectic(0).unwrap());
    }

    #[test]
    fn symplectic_needs_finite_set() {
        let s = AiryStructure::<Q>::zero(IndexSet::Graded { max_grade: 2, block: 1 });
        assert!(matches!(s.check_symplectic(0), Err(Error::Unsupported(_))));
        assert!(s.canonical_d().is_err());
    }

    #[test]
    fn wk_degree_bound() {
        let sp = Sparsity::witten_kontsevich();
        for g in 0..5usize {
            for n in 1..7usize {
                if 2 * g + n >= 3 {
                    assert_eq!(sp.degree_bound(g, n), Some(3 * g as i64 - 3 + n as i64), "(g,n)=({g},{n})");
                }
            }
        }
        let open = Sparsity { b: Window::UNBOUNDED, ..sp };
        assert_eq!(open.degree_bound(0, 4), None);
        assert_eq!(open.degree_bound(0, 3), Some(0));
    }

    #[test]
    fn graded_indices() {
        let set = IndexSet::Graded { max_grade: 3, block: 2 };
        assert_eq!(set.len(), 8);
        assert_eq!(set.grade(5), 2);
        assert_eq!(set.label(5), 1);
        assert_eq!(set.index(2, 1), 5);
    }

    #[test]
    fn structure_constants_are_antisymmetric() {
        let mut s = AiryStructure::<Q>::zero(IndexSet::Finite { dim: 2 });
        s.set_b(0, 1, 1, int(3));
        s.set_b(1, 0, 1, int(1));
        let f = s.structure_constants();
        assert_eq!(f[&(0, 1, 1)], int(2));
        assert_eq!(f[&(1, 0, 1)], int(-2));
        assert_eq!(s.structure_constant(0, 1, 1), int(2));
    }
}
