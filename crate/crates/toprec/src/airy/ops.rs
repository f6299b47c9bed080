//! Operations that map quantum Airy structures to quantum Airy structures.
//!
//! On graded truncations each operation can only produce exact entries up to
//! a smaller maximal grade, because its dummy sums reach past the output
//! indices. The output is truncated accordingly; an operation that would leave
//! nothing exact fails with [`Error::Truncation`].

use std::collections::BTreeMap;

use num_traits::Zero;

use super::{put, AiryStructure, IndexSet, Sparsity, Tensor3, Window};
use crate::coeff::{rat, Rational, Scalar};
use crate::linalg::Matrix;
use crate::Error;

/// `map[old]` lists `(new, coefficient)` pairs.
type SlotMap<S> = Vec<Vec<(usize, S)>>;

fn contract<S: Scalar>(t: &Tensor3<S>, slot: usize, map: &SlotMap<S>) -> Tensor3<S> {
    let mut out: Tensor3<S> = BTreeMap::new();
    for (&(i, j, k), v) in t {
        let old = [i, j, k][slot];
        for (new, c) in &map[old] {
            let mut key = [i, j, k];
            key[slot] = *new;
            let e = out.entry((key[0], key[1], key[2])).or_insert_with(S::zero);
            e.add_mul(v, c);
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

fn require<T>(x: Option<T>, what: &str) -> Result<T, Error> {
    x.ok_or_else(|| Error::UnboundedSum(format!("the sparsity rule leaves {what} open")))
}

fn graded_parts(s: &AiryStructure<impl Scalar>) -> Result<Option<(usize, Sparsity)>, Error> {
    match s.index_set() {
        IndexSet::Finite { .. } => Ok(None),
        IndexSet::Graded { max_grade, .. } => {
            let sp = *s
                .sparsity()
                .ok_or_else(|| Error::UnboundedSum("graded structure without a sparsity rule".into()))?;
            Ok(Some((max_grade, sp)))
        }
    }
}

fn output_grade(n_out: i64, what: &str) -> Result<usize, Error> {
    if n_out < 0 {
        Err(Error::Truncation(format!("{what} leaves no exact grade; raise the input truncation")))
    } else {
        Ok(n_out as usize)
    }
}

/// `Z ↦ Z(xΦ)`, i.e. `F_{g,n} ↦ Φ^{⊗n}F_{g,n}`:
/// `Ã^i_{jk} = Φ_{ia}Φ_{jb}Φ_{kc}A^a_{bc}`, `B̃^i_{jk} = Φ_{ia}Φ_{jb}Φ⁻¹_{ck}B^a_{bc}`,
/// `C̃^i_{jk} = Φ_{ia}Φ⁻¹_{bj}Φ⁻¹_{ck}C^a_{bc}`, `D̃^i = Φ_{ia}D^a`.
///
/// On graded structures `Φ_{ia}` must vanish unless `grade(a) ≥ grade(i)`.
pub fn change_basis<S: Scalar>(s: &AiryStructure<S>, phi: &Matrix<Rational>) -> Result<AiryStructure<S>, Error> {
    let n = s.dim();
    if phi.rows() != n || phi.cols() != n {
        return Err(Error::invalid(format!("Φ must be {n}x{n}")));
    }
    let phi_inv = phi.inverse().map_err(|_| Error::invalid("Φ is singular"))?;
    let set = s.index_set();

    let (out_set, sparsity) = match graded_parts(s)? {
        None => (set, None),
        Some((max_grade, sp)) => {
            for i in 0..n {
                for a in 0..n {
                    if !phi[(i, a)].is_zero() && set.grade(a) < set.grade(i) {
                        return Err(Error::invalid("Φ lowers the grade"));
                    }
                }
            }
            let beta = require(sp.b.lo, "the lower B window")?;
            let gamma = require(sp.c.lo, "the lower C window")?;
            let a_hi = require(sp.a.hi, "the upper A window")?;
            let d_hi = require(sp.d.hi, "the upper D window")?;
            let big_n = max_grade as i64;
            if a_hi > big_n || d_hi > big_n {
                return Err(Error::Truncation("A or D extends past the truncation".into()));
            }
            let n_out = output_grade((big_n + beta).min((big_n + gamma).div_euclid(2)).min(big_n), "change of basis")?;
            let out_sp = Sparsity {
                a: Window::at_most(a_hi),
                b: Window::at_least(beta),
                c: Window::at_least(gamma),
                d: Window::at_most(d_hi),
            };
            (set.with_max_grade(n_out), Some(out_sp))
        }
    };
    let m = out_set.len();

    // fwd[a] = [(i, Φ_{ia})], inv[b] = [(j, Φ⁻¹_{bj})], outputs restricted to the new truncation.
    let mut fwd: SlotMap<S> = vec![Vec::new(); n];
    let mut inv: SlotMap<S> = vec![Vec::new(); n];
    for i in 0..m {
        for a in 0..n {
            if !phi[(i, a)].is_zero() {
                fwd[a].push((i, S::from_rational(phi[(i, a)].clone())));
            }
            if !phi_inv[(a, i)].is_zero() {
                inv[a].push((i, S::from_rational(phi_inv[(a, i)].clone())));
            }
        }
    }

    let a = contract(&contract(&contract(s.a_entries(), 0, &fwd), 1, &fwd), 2, &fwd);
    let b = contract(&contract(&contract(s.b_entries(), 0, &fwd), 1, &fwd), 2, &inv);
    let c = contract(&contract(&contract(s.c_entries(), 0, &fwd), 1, &inv), 2, &inv);
    let mut d = BTreeMap::new();
    for (&a_idx, v) in s.d_entries() {
        for (i, c) in &fwd[a_idx] {
            let e: &mut S = d.entry(*i).or_insert_with(S::zero);
            e.add_mul(v, c);
        }
    }
    d.retain(|_, v: &mut S| !v.is_zero());

    Ok(AiryStructure { index_set: out_set, a, b, c, d, sparsity })
}

/// Conjugation by `exp(ħ/2 u_{ab}∂_a∂_b)`:
/// `B̃^i_{jk} = B^i_{jk} + A^i_{ja}u_{ak}`,
/// `C̃^i_{jk} = C^i_{jk} + B^i_{aj}u_{ak} + B^i_{ak}u_{aj} + A^i_{ab}u_{aj}u_{bk}`,
/// `D̃^i = D^i + ½A^i_{ab}u_{ab}`.
pub fn quadratic_shift<S: Scalar>(s: &AiryStructure<S>, u: &Matrix<S>) -> Result<AiryStructure<S>, Error> {
    let n = s.dim();
    if u.rows() != n || u.cols() != n {
        return Err(Error::invalid(format!("u must be {n}x{n}")));
    }
    if !u.is_symmetric() {
        return Err(Error::invalid("u must be symmetric"));
    }
    let set = s.index_set();
    let (out_set, sparsity) = match graded_parts(s)? {
        None => (set, None),
        Some((max_grade, sp)) => {
            let beta = require(sp.b.lo, "the lower B window")?;
            let gamma = require(sp.c.lo, "the lower C window")?;
            let a_hi = require(sp.a.hi, "the upper A window")?;
            let d_hi = require(sp.d.hi, "the upper D window")?;
            let big_n = max_grade as i64;
            if a_hi > big_n {
                return Err(Error::Truncation("A extends past the truncation".into()));
            }
            let n_out = output_grade((big_n + beta).min(big_n), "quadratic shift")?;
            let out_sp = Sparsity {
                a: sp.a,
                b: Window::at_least(beta.min(-a_hi)),
                c: Window::at_least(gamma.min(beta).min(-a_hi)),
                d: Window::at_most(d_hi.max(a_hi)),
            };
            (set.with_max_grade(n_out), Some(out_sp))
        }
    };
    let m = out_set.len();
    let rows: Vec<Vec<(usize, S)>> = (0..n)
        .map(|a| (0..m).filter(|&k| !u[(a, k)].is_zero()).map(|k| (k, u[(a, k)].clone())).collect())
        .collect();
    let inside = |i: usize, j: usize| i < m && j < m;

    let mut out = s.truncate(out_set.max_grade().unwrap_or(0));
    out.index_set = out_set;
    out.sparsity = sparsity;

    let mut b: Tensor3<S> = out.b.clone();
    let mut c: Tensor3<S> = out.c.clone();
    let mut d: BTreeMap<usize, S> = out.d.clone();
    let half = rat(1, 2);
    for (&(i, j, a), v) in s.a_entries() {
        if i >= m {
            continue;
        }
        if j < m {
            for (k, uv) in &rows[a] {
                b.entry((i, j, *k)).or_insert_with(S::zero).add_mul(v, uv);
            }
        }
        // A^i_{ja} u_{ab}: j, a play the roles of the two contracted slots.
        if !u[(j, a)].is_zero() {
            d.entry(i).or_insert_with(S::zero).add_mul(v, &u[(j, a)].scale(&half));
        }
        for (jj, u1) in &rows[j] {
            for (kk, u2) in &rows[a] {
                let w = v.clone() * u1.clone();
                c.entry((i, *jj, *kk)).or_insert_with(S::zero).add_mul(&w, u2);
            }
        }
    }
    for (&(i, a, j), v) in s.b_entries() {
        if !inside(i, j) {
            continue;
        }
        for (k, uv) in &rows[a] {
            c.entry((i, j, *k)).or_insert_with(S::zero).add_mul(v, uv);
            c.entry((i, *k, j)).or_insert_with(S::zero).add_mul(v, uv);
        }
    }
    b.retain(|_, v| !v.is_zero());
    c.retain(|_, v| !v.is_zero());
    d.retain(|_, v| !v.is_zero());
    out.b = b;
    out.c = c;
    out.d = d;
    Ok(out)
}

/// The structure whose partition function is
/// `exp(−∂F₀(t)·x/ħ − ½x·∂²F₀(t)·x/ħ) Z(x + t)`.
///
/// In general `M_{ij} = δ_{ij} − B^i_{aj}t_a − C^i_{ja}∂_aF₀(t)` and the new
/// tensors are `M⁻¹` applied to the upper index of the shifted operators.
/// Only graded structures are supported, with `t` vanishing in grades 0 and 1
/// and selection rules strong enough that `∂F₀(t)` and `∂²F₀(t)` vanish (this
/// is verified from the degree bound), and `A(t, ·) = 0`. Then `M_{ij} = δ_{ij} − B^i_{aj}t_a`,
/// and `Ã = M⁻¹A`, `B̃ = M⁻¹B`, `C̃ = M⁻¹C`, `D̃ = M⁻¹D`.
pub fn translate<S: Scalar>(s: &AiryStructure<S>, t: &[S]) -> Result<AiryStructure<S>, Error> {
    let n = s.dim();
    if t.len() != n {
        return Err(Error::invalid(format!("t must have {n} components")));
    }
    let set = s.index_set();
    let Some((max_grade, sp)) = graded_parts(s)? else {
        return Err(Error::Unsupported("translation needs a graded structure".into()));
    };
    if t.iter().enumerate().any(|(i, v)| set.grade(i) < 2 && !v.is_zero()) {
        return Err(Error::invalid("t must vanish in grades 0 and 1"));
    }
    if s.a_entries().keys().any(|&(_, j, k)| !t[j].is_zero() || !t[k].is_zero()) {
        return Err(Error::Unsupported("A(t, ·) is non-zero".into()));
    }
    let beta = require(sp.b.lo, "the lower B window")?;
    let gamma = require(sp.c.lo, "the lower C window")?;
    let a_hi = require(sp.a.hi, "the upper A window")?;
    let d_hi = require(sp.d.hi, "the upper D window")?;
    if beta < -1 {
        return Err(Error::Unsupported(
            "genus-0 derivatives at t may not vanish when B lowers grades by more than one".into(),
        ));
    }
    for m in 3..=48usize {
        let bound = sp.degree_bound(0, m).ok_or_else(|| Error::UnboundedSum("genus-0 degree bound".into()))?;
        // ∂²F₀(t) pairs two free slots with m−2 copies of t, each of grade ≥ 2.
        if 2 * (m as i64 - 2) <= bound {
            return Err(Error::Unsupported(format!(
                "∂²F₀(t) may be non-zero (F_(0,{m}) reaches grade {bound})"
            )));
        }
    }
    let big_n = max_grade as i64;
    let n_out = output_grade(
        (big_n + 2 * beta).min((big_n + beta + gamma).div_euclid(2)).min(big_n),
        "translation",
    )?;
    if a_hi > big_n + beta || d_hi > big_n + beta {
        return Err(Error::Truncation("A or D too close to the truncation for translation".into()));
    }
    let out_set = set.with_max_grade(n_out);
    let m_out = out_set.len();

    // M_{ij} = δ_{ij} − B^i_{aj} t_a
    let mut mat = Matrix::<S>::identity(n);
    for (&(i, a, j), v) in s.b_entries() {
        if !t[a].is_zero() {
            let cur = mat[(i, j)].clone();
            mat[(i, j)] = cur - v.clone() * t[a].clone();
        }
    }
    let minv = mat
        .unipotent_inverse()
        .map_err(|_| Error::SingularTranslation("M is not unipotent at this truncation".into()))?;

    let mut rows: SlotMap<S> = vec![Vec::new(); n];
    for (i, row) in rows.iter_mut().enumerate() {
        for j in 0..m_out {
            if !minv[(j, i)].is_zero() {
                row.push((j, minv[(j, i)].clone()));
            }
        }
    }
    let keep = |(_, j, k): &(usize, usize, usize)| *j < m_out && *k < m_out;
    let restrict = |t: &Tensor3<S>| -> Tensor3<S> { t.iter().filter(|(k, _)| keep(k)).map(|(k, v)| (*k, v.clone())).collect() };
    let a = contract(&restrict(s.a_entries()), 0, &rows);
    let b = contract(&restrict(s.b_entries()), 0, &rows);
    let c = contract(&restrict(s.c_entries()), 0, &rows);
    let mut d = BTreeMap::new();
    for (&i, v) in s.d_entries() {
        for (j, w) in &rows[i] {
            let e: &mut S = d.entry(*j).or_insert_with(S::zero);
            e.add_mul(v, w);
        }
    }
    d.retain(|_, v: &mut S| !v.is_zero());
    Ok(AiryStructure { index_set: out_set, a, b, c, d, sparsity: Some(sp) })
}

/// Block-diagonal sum; the partition function is the product of the summands'.
pub fn direct_sum<S: Scalar>(parts: &[AiryStructure<S>]) -> Result<AiryStructure<S>, Error> {
    let first = parts.first().ok_or_else(|| Error::invalid("empty direct sum"))?;
    let graded = first.index_set().is_graded();
    if parts.iter().any(|p| p.index_set().is_graded() != graded) {
        return Err(Error::invalid("cannot mix finite and graded summands"));
    }
    let (index_set, offsets): (IndexSet, Vec<usize>) = match first.index_set() {
        IndexSet::Finite { .. } => {
            let mut offs = Vec::new();
            let mut total = 0;
            for p in parts {
                offs.push(total);
                total += p.dim();
            }
            (IndexSet::Finite { dim: total }, offs)
        }
        IndexSet::Graded { max_grade, .. } => {
            if parts.iter().any(|p| p.index_set().max_grade() != Some(max_grade)) {
                return Err(Error::invalid("graded summands must share the truncation"));
            }
            let mut offs = Vec::new();
            let mut total = 0;
            for p in parts {
                offs.push(total);
                total += p.index_set().block();
            }
            (IndexSet::Graded { max_grade, block: total }, offs)
        }
    };
    let mut out = AiryStructure::zero(index_set);
    let mut sparsity = first.sparsity().copied();
    for (p, off) in parts.iter().zip(&offsets) {
        let ps = p.index_set();
        let map = |i: usize| index_set.index(ps.grade(i), ps.label(i) + off);
        for (&(i, j, k), v) in p.a_entries() {
            put(&mut out.a, (map(i), map(j), map(k)), v.clone());
        }
        for (&(i, j, k), v) in p.b_entries() {
            put(&mut out.b, (map(i), map(j), map(k)), v.clone());
        }
        for (&(i, j, k), v) in p.c_entries() {
            put(&mut out.c, (map(i), map(j), map(k)), v.clone());
        }
        for (&i, v) in p.d_entries() {
            put(&mut out.d, map(i), v.clone());
        }
        sparsity = match (sparsity, p.sparsity()) {
            (Some(x), Some(y)) => Some(Sparsity {
                a: x.a.hull(&y.a),
                b: x.b.hull(&y.b),
                c: x.c.hull(&y.c),
                d: x.d.hull(&y.d),
            }),
            _ => None,
        };
    }
    out.sparsity = sparsity;
    Ok(out)
}
