//! Topological recursion.
//!
//! For `2g−2+n ≥ 2` the amplitudes are determined by
//!
//! ```text
//! F_{g,n}[i, K] = Σ_m B^i_{k_m a} F_{g,n−1}[a, K∖k_m]
//!               + ½ C^i_{ab} ( F_{g−1,n+1}[a, b, K] + Σ' F_{g₁}[a, J₁] F_{g₂}[b, J₂] )
//! ```
//!
//! from `F_{0,3}[i,j,k] = A^i_{jk}` and `F_{1,1}[i] = D^i`, where `Σ'` runs over
//! ordered splittings `g₁+g₂ = g`, `J₁ ⊔ J₂ = K` avoiding `F_{0,1}` and `F_{0,2}`.
//! Entries are computed level by level in `χ = 2g−2+n`, each level in
//! parallel against the completed lower levels.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::airy::{AiryStructure, IndexSet};
use crate::coeff::{rat, Scalar};
use crate::poly::Poly;
use crate::Error;

pub type Key = (usize, Vec<usize>);

pub fn is_stable(g: usize, n: usize) -> bool {
    n >= 1 && 2 * g + n >= 3
}

pub fn euler_degree(g: usize, n: usize) -> usize {
    2 * g + n - 2
}

/// The `(g, n)` cells with `n ≥ 1` at a given `χ`.
pub fn cells_at(chi: usize) -> Vec<(usize, usize)> {
    (0..=chi / 2 + 1)
        .filter_map(|g| {
            let n = chi as i64 + 2 - 2 * g as i64;
            (n >= 1).then_some((g, n as usize))
        })
        .filter(|&(g, n)| is_stable(g, n))
        .collect()
}

/// Nonzero tensor entries arranged for the recursion.
struct Tensors<S> {
    /// `b[i][j]` lists `(a, B^i_{ja})`.
    b: Vec<Vec<Vec<(usize, S)>>>,
    /// `c[i]` lists `(a, b, C^i_{ab})`.
    c: Vec<Vec<(usize, usize, S)>>,
}

impl<S: Scalar> Tensors<S> {
    fn new(s: &AiryStructure<S>) -> Self {
        let n = s.dim();
        let mut b = vec![vec![Vec::new(); n]; n];
        for (&(i, j, a), v) in s.b_entries() {
            b[i][j].push((a, v.clone()));
        }
        let mut c = vec![Vec::new(); n];
        for (&(i, a, bb), v) in s.c_entries() {
            c[i].push((a, bb, v.clone()));
        }
        Tensors { b, c }
    }
}

/// Value of the right-hand side with `first` distinguished.
fn evaluate<'a, S: Scalar>(
    s: &AiryStructure<S>,
    t: &Tensors<S>,
    lookup: &impl Fn(usize, &[usize]) -> Option<&'a S>,
    g: usize,
    first: usize,
    rest: &[usize],
) -> S {
    let n = rest.len() + 1;
    if (g, n) == (0, 3) {
        return s.a(first, rest[0], rest[1]).cloned().unwrap_or_else(S::zero);
    }
    if (g, n) == (1, 1) {
        return s.d(first).cloned().unwrap_or_else(S::zero);
    }
    let mut total = S::zero();
    let mut buf = Vec::with_capacity(n + 1);

    if is_stable(g, n - 1) {
        for m in 0..rest.len() {
            for (a, bv) in &t.b[first][rest[m]] {
                buf.clear();
                buf.push(*a);
                buf.extend(rest.iter().enumerate().filter(|(p, _)| *p != m).map(|(_, x)| *x));
                if let Some(f) = lookup(g, &buf) {
                    total.add_mul(bv, f);
                }
            }
        }
    }

    let mut quad = S::zero();
    if g >= 1 && is_stable(g - 1, n + 1) {
        for (a, b, cv) in &t.c[first] {
            buf.clear();
            buf.push(*a);
            buf.push(*b);
            buf.extend_from_slice(rest);
            if let Some(f) = lookup(g - 1, &buf) {
                quad.add_mul(cv, f);
            }
        }
    }
    let r = rest.len();
    let mut left = Vec::with_capacity(n);
    let mut right = Vec::with_capacity(n);
    for mask in 0u64..(1u64 << r) {
        let size1 = mask.count_ones() as usize;
        let size2 = r - size1;
        for g1 in 0..=g {
            let g2 = g - g1;
            if !is_stable(g1, size1 + 1) || !is_stable(g2, size2 + 1) {
                continue;
            }
            for (a, b, cv) in &t.c[first] {
                left.clear();
                right.clear();
                left.push(*a);
                right.push(*b);
                for (p, x) in rest.iter().enumerate() {
                    if mask >> p & 1 == 1 {
                        left.push(*x);
                    } else {
                        right.push(*x);
                    }
                }
                let (Some(f1), Some(f2)) = (lookup(g1, &left), lookup(g2, &right)) else { continue };
                let prod = cv.clone() * f1.clone();
                quad.add_mul(&prod, f2);
            }
        }
    }
    total + quad.scale(&rat(1, 2))
}

/// Sorted multi-indices of length `n` over `0..dim`, with total grade at most `bound`.
fn multi_indices(set: IndexSet, n: usize, bound: Option<i64>) -> Vec<Vec<usize>> {
    fn rec(set: IndexSet, n: usize, start: usize, budget: Option<i64>, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for i in start..set.len() {
            let g = set.grade(i) as i64;
            let left = budget.map(|b| b - g);
            if matches!(left, Some(l) if l < 0) {
                // Indices are ordered by grade, so nothing later fits either.
                break;
            }
            cur.push(i);
            rec(set, n, i, left, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if matches!(bound, Some(b) if b < 0) {
        return out;
    }
    rec(set, n, 0, bound, &mut Vec::with_capacity(n), &mut out);
    out
}

/// Memoized amplitudes `F_{g,n}` for `2g−2+n ≤ chi_max`.
#[derive(Clone, Debug)]
pub struct AmplitudeTable<S> {
    structure: AiryStructure<S>,
    entries: BTreeMap<Key, S>,
    chi_max: usize,
    bounds: BTreeMap<(usize, usize), Option<i64>>,
}

/// How far grades reach in a table; `None` means no grade restriction.
fn degree_bounds<S: Scalar>(
    s: &AiryStructure<S>,
    chi_max: usize,
    custom: Option<&dyn Fn(usize, usize) -> i64>,
) -> Result<BTreeMap<(usize, usize), Option<i64>>, Error> {
    let mut bounds = BTreeMap::new();
    for chi in 1..=chi_max {
        for (g, n) in cells_at(chi) {
            let b = match (s.index_set(), custom) {
                (IndexSet::Finite { .. }, _) => None,
                (IndexSet::Graded { .. }, Some(f)) => Some(f(g, n)),
                (IndexSet::Graded { .. }, None) => {
                    let sp = s.sparsity().ok_or_else(|| {
                        Error::UnboundedSum("graded structure without a sparsity rule or degree bound".into())
                    })?;
                    Some(sp.degree_bound(g, n).ok_or_else(|| {
                        Error::UnboundedSum(format!("the sparsity rule does not bound the grades of F_({g},{n})"))
                    })?)
                }
            };
            bounds.insert((g, n), b);
        }
    }
    Ok(bounds)
}

/// Runs the recursion up to `chi_max`, deriving degree bounds from the
/// sparsity rule on graded structures.
pub fn compute<S: Scalar>(s: &AiryStructure<S>, chi_max: usize) -> Result<AmplitudeTable<S>, Error> {
    compute_with_bound(s, chi_max, None)
}

/// As [`compute`], with an explicit bound `(g, n) ↦` maximal total grade of a
/// non-zero `F_{g,n}` entry.
pub fn compute_with_bound<S: Scalar>(
    s: &AiryStructure<S>,
    chi_max: usize,
    degree_bound: Option<&dyn Fn(usize, usize) -> i64>,
) -> Result<AmplitudeTable<S>, Error> {
    if chi_max == 0 {
        return Err(Error::invalid("chi_max must be at least 1"));
    }
    let bounds = degree_bounds(s, chi_max, degree_bound)?;
    if let IndexSet::Graded { max_grade, .. } = s.index_set() {
        for (&(g, n), b) in &bounds {
            let b = b.expect("graded bounds are set");
            if euler_degree(g, n) < chi_max && b > max_grade as i64 {
                return Err(Error::Truncation(format!(
                    "F_({g},{n}) reaches grade {b} but the structure is truncated at {max_grade}; \
                     dummy sums at chi = {chi_max} would be cut off"
                )));
            }
        }
    }
    let tensors = Tensors::new(s);
    let mut entries: BTreeMap<Key, S> = BTreeMap::new();
    for chi in 1..=chi_max {
        let tasks: Vec<Key> = cells_at(chi)
            .into_iter()
            .flat_map(|(g, n)| {
                multi_indices(s.index_set(), n, bounds[&(g, n)]).into_iter().map(move |idx| (g, idx))
            })
            .collect();
        let done = &entries;
        let lookup = |g: usize, idx: &[usize]| -> Option<&S> {
            let mut key = idx.to_vec();
            key.sort_unstable();
            done.get(&(g, key))
        };
        let level: Vec<(Key, S)> = tasks
            .into_par_iter()
            .map(|(g, idx)| {
                let v = evaluate(s, &tensors, &lookup, g, idx[0], &idx[1..]);
                ((g, idx), v)
            })
            .filter(|(_, v)| !v.is_zero())
            .collect();
        entries.extend(level);
    }
    Ok(AmplitudeTable { structure: s.clone(), entries, chi_max, bounds })
}

#[derive(Clone, Debug, PartialEq)]
pub struct Mismatch<S> {
    pub g: usize,
    pub indices: Vec<usize>,
    pub first: usize,
    pub expected: S,
    pub found: S,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SymmetryReport<S> {
    pub mismatches: Vec<Mismatch<S>>,
    pub orderings_checked: usize,
}

impl<S> SymmetryReport<S> {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Residual<S> {
    pub i: usize,
    pub hbar_power: usize,
    /// Multi-index of the monomial (sorted).
    pub monomial: Vec<usize>,
    pub value: S,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AnnihilationReport<S> {
    pub residuals: Vec<Residual<S>>,
    pub coefficients_checked: usize,
}

impl<S> AnnihilationReport<S> {
    pub fn passed(&self) -> bool {
        self.residuals.is_empty()
    }
}

impl<S: Scalar> AmplitudeTable<S> {
    pub fn structure(&self) -> &AiryStructure<S> {
        &self.structure
    }

    pub fn chi_max(&self) -> usize {
        self.chi_max
    }

    /// `F_{g,n}[idx]` in any order; `None` outside the computed range.
    pub fn get(&self, g: usize, idx: &[usize]) -> Option<S> {
        let n = idx.len();
        if !is_stable(g, n) {
            // F_{0,1} and F_{0,2} vanish by convention.
            return (n >= 1).then(S::zero);
        }
        if euler_degree(g, n) > self.chi_max || idx.iter().any(|&i| i >= self.structure.dim()) {
            return None;
        }
        let mut key = idx.to_vec();
        key.sort_unstable();
        Some(self.entries.get(&(g, key)).cloned().unwrap_or_else(S::zero))
    }

    /// Like [`AmplitudeTable::get`] but panics outside the computed range.
    pub fn value(&self, g: usize, idx: &[usize]) -> S {
        self.get(g, idx).unwrap_or_else(|| panic!("F_({g},{}) at {idx:?} was not computed", idx.len()))
    }

    /// Non-zero entries, keyed by genus and sorted multi-index.
    pub fn entries(&self) -> &BTreeMap<Key, S> {
        &self.entries
    }

    pub fn nonzero(&self, g: usize, n: usize) -> impl Iterator<Item = (&Vec<usize>, &S)> {
        self.entries.iter().filter(move |((gg, idx), _)| *gg == g && idx.len() == n).map(|((_, i), v)| (i, v))
    }

    /// All sorted multi-indices of the computed domain of `F_{g,n}`.
    pub fn domain(&self, g: usize, n: usize) -> Vec<Vec<usize>> {
        match self.bounds.get(&(g, n)) {
            Some(b) => multi_indices(self.structure.index_set(), n, *b),
            None => Vec::new(),
        }
    }

    pub fn cells(&self) -> Vec<(usize, usize)> {
        (1..=self.chi_max).flat_map(cells_at).collect()
    }

    /// Re-evaluates the recursion for every distinct choice of the
    /// distinguished index and compares with the stored value.
    pub fn verify_symmetry(&self) -> SymmetryReport<S> {
        let tensors = Tensors::new(&self.structure);
        let lookup = |g: usize, idx: &[usize]| -> Option<&S> {
            let mut key = idx.to_vec();
            key.sort_unstable();
            self.entries.get(&(g, key))
        };
        let tasks: Vec<Key> = self
            .cells()
            .into_iter()
            .filter(|&(_, n)| n >= 2)
            .flat_map(|(g, n)| self.domain(g, n).into_iter().map(move |idx| (g, idx)))
            .collect();
        let results: Vec<(usize, Vec<Mismatch<S>>)> = tasks
            .into_par_iter()
            .map(|(g, idx)| {
                let expected = self.value(g, &idx);
                let mut found_mismatches = Vec::new();
                let mut checked = 0;
                for p in 0..idx.len() {
                    if p > 0 && idx[p] == idx[p - 1] {
                        continue;
                    }
                    let rest: Vec<usize> =
                        idx.iter().enumerate().filter(|(q, _)| *q != p).map(|(_, x)| *x).collect();
                    let found = evaluate(&self.structure, &tensors, &lookup, g, idx[p], &rest);
                    checked += 1;
                    if found != expected {
                        found_mismatches.push(Mismatch {
                            g,
                            indices: idx.clone(),
                            first: idx[p],
                            expected: expected.clone(),
                            found,
                        });
                    }
                }
                (checked, found_mismatches)
            })
            .collect();
        let orderings_checked = results.iter().map(|(c, _)| c).sum();
        let mismatches = results.into_iter().flat_map(|(_, m)| m).collect();
        SymmetryReport { mismatches, orderings_checked }
    }

    /// The free energy `F_g(x) = Σ_n (1/n!) F_{g,n}[i⃗] x_{i₁}⋯x_{iₙ}` as a polynomial.
    pub fn free_energy(&self, g: usize) -> Poly<S> {
        let dim = self.structure.dim();
        let mut p = Poly::zero(dim);
        for ((gg, idx), v) in &self.entries {
            if *gg != g {
                continue;
            }
            let mut exps = vec![0u32; dim];
            for &i in idx {
                exps[i] += 1;
            }
            let denom = exps.iter().fold(num_bigint::BigInt::from(1), |acc, &e| {
                acc * crate::coeff::factorial(u64::from(e))
            });
            p.add_term(exps, v.scale(&crate::coeff::Rational::new(1.into(), denom)));
        }
        p
    }
}

/// Checks that `exp(−F) L_i exp(F)` vanishes coefficient by coefficient, that is
///
/// `ħ∂_iF − ½A^i_{ab}x_a x_b − ħB^i_{ab}x_a∂_bF − ½ħ²C^i_{ab}(∂_a∂_bF + ∂_aF∂_bF) − ħD^i = 0`
///
/// with `F = Σ_g ħ^{g−1}F_g`, for every `i` and every `(ħ-power, monomial)`
/// whose coefficient only involves amplitudes within the table.
pub fn verify_annihilation<S: Scalar>(s: &AiryStructure<S>, table: &AmplitudeTable<S>) -> AnnihilationReport<S> {
    let dim = s.dim();
    let chi_max = table.chi_max();
    let gmax = chi_max / 2 + 1;
    let free: Vec<Poly<S>> = (0..=gmax).map(|g| table.free_energy(g)).collect();
    let derivs: Vec<Vec<Poly<S>>> = free.iter().map(|f| (0..dim).map(|a| f.derivative(a)).collect()).collect();
    let max_grade = s.index_set().max_grade().map(|m| m as i64);
    // A coefficient at level χ is checkable when every amplitude it involves
    // has its dummy indices inside the truncation.
    let checkable = |g: usize, n: usize| -> bool {
        let chi = euler_degree(g, n);
        chi <= chi_max
            && match max_grade {
                None => true,
                Some(mg) => table
                    .bounds
                    .iter()
                    .filter(|(&(gg, nn), _)| euler_degree(gg, nn) <= chi)
                    .all(|(_, b)| b.is_none_or(|b| b <= mg)),
            }
    };

    let half = rat(1, 2);
    let results: Vec<(usize, Vec<Residual<S>>)> = (0..dim)
        .into_par_iter()
        .map(|i| {
            let mut residuals = Vec::new();
            let mut checked = 0usize;
            for hp in 0..=gmax {
                // Each coefficient x^K at ħ^{hp} pairs with an entry F_{hp,n}[i, K].
                for (g, n) in table.cells() {
                    if g == hp && checkable(g, n) {
                        checked += table.domain(g, n).iter().filter(|idx| idx.contains(&i)).count();
                    }
                }
                // Coefficient of ħ^{hp}.
                let mut r = Poly::zero(dim);
                if hp < free.len() {
                    r.add_assign(&derivs[hp][i]);
                }
                if hp == 0 {
                    for (&(ii, a, b), v) in s.a_entries() {
                        if ii == i {
                            let mut e = vec![0u32; dim];
                            e[a] += 1;
                            e[b] += 1;
                            r.add_term(e, -v.scale(&half));
                        }
                    }
                }
                if hp == 1 {
                    if let Some(d) = s.d(i) {
                        r.add_term(vec![0; dim], -d.clone());
                    }
                }
                for (&(ii, a, b), v) in s.b_entries() {
                    if ii == i && hp < free.len() {
                        r.add_assign(&derivs[hp][b].mul_var(a).scale_by(&-v.clone()));
                    }
                }
                for (&(ii, a, b), v) in s.c_entries() {
                    if ii != i {
                        continue;
                    }
                    let coeff = -v.scale(&half);
                    if hp >= 1 && hp - 1 < free.len() {
                        r.add_assign(&derivs[hp - 1][a].derivative(b).scale_by(&coeff));
                    }
                    for g1 in 0..=hp {
                        let g2 = hp - g1;
                        if g1 < free.len() && g2 < free.len() {
                            r.add_assign(&derivs[g1][a].mul(&derivs[g2][b]).scale_by(&coeff));
                        }
                    }
                }
                for (exps, v) in r.terms() {
                    let deg: usize = exps.iter().map(|&e| e as usize).sum();
                    let n = deg + 1;
                    if !checkable(hp, n) {
                        continue;
                    }
                    if !v.is_zero() {
                        let monomial =
                            exps.iter().enumerate().flat_map(|(a, &e)| std::iter::repeat_n(a, e as usize)).collect();
                        residuals.push(Residual { i, hbar_power: hp, monomial, value: v.clone() });
                    }
                }
            }
            (checked, residuals)
        })
        .collect();
    AnnihilationReport {
        coefficients_checked: results.iter().map(|(c, _)| c).sum(),
        residuals: results.into_iter().flat_map(|(_, r)| r).collect(),
    }
}

impl<S: Scalar> AmplitudeTable<S> {
    /// `[{"g": g, "indices": [...], "value": v}, ...]` over non-zero entries.
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.entries
                .iter()
                .map(|((g, idx), v)| json!({ "g": g, "indices": idx, "value": v.to_json() }))
                .collect(),
        )
    }

    /// CSV with one column per π²-power present in the table.
    pub fn to_csv(&self) -> String {
        let max_deg = self
            .entries
            .values()
            .filter_map(|v| v.to_pipoly().degree())
            .max()
            .unwrap_or(0);
        let mut out = String::from("g,n,indices,value_rational");
        for d in 1..=max_deg {
            let _ = write!(out, ",value_pi2_degree_{d}");
        }
        out.push('\n');
        for ((g, idx), v) in &self.entries {
            let p = v.to_pipoly();
            let idx_str: Vec<String> = idx.iter().map(|i| i.to_string()).collect();
            let _ = write!(out, "{g},{},{},{}", idx.len(), idx_str.join(" "), p.coeff(0));
            for d in 1..=max_deg {
                let _ = write!(out, ",{}", p.coeff(d));
            }
            out.push('\n');
        }
        out
    }
}
