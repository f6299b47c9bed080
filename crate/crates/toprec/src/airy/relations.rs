//! Exact verification of the defining relations.
//!
//! With `f^k_{ij} = B^i_{jk} − B^j_{ik}`, the closure `[L_i, L_j] = ħ f^k_{ij} L_k`
//! is equivalent to the symmetry of `A` and `C` together with four relations
//! of the form `X(i,j,k,l) = X(j,i,k,l)`:
//!
//! * D:  `B^i_{ja}D^a + ½C^i_{ab}A^j_{ab}`
//! * BA: `B^i_{ja}A^a_{kl} + B^i_{ka}A^j_{al} + B^i_{la}A^j_{ak}`
//! * BB: `B^i_{ja}B^a_{kl} + B^i_{ka}B^j_{al} + C^i_{la}A^j_{ak}`
//! * BC: `B^i_{ja}C^a_{kl} + C^i_{ka}B^j_{al} + C^i_{la}B^j_{ak}`
//!
//! On graded truncations every dummy index is bounded using the sparsity
//! windows. Tuples whose dummy range would leave the truncation are skipped
//! and flagged with a caveat.

use std::fmt;


use super::{AiryStructure, IndexSet, Sparsity};
use crate::coeff::{rat, Scalar};
use crate::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Relation {
    ASymmetry,
    CSymmetry,
    D,
    BA,
    BB,
    BC,
}

impl Relation {
    pub const ALL: [Relation; 6] =
        [Relation::ASymmetry, Relation::CSymmetry, Relation::D, Relation::BA, Relation::BB, Relation::BC];
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Relation::ASymmetry => "A-symmetry",
            Relation::CSymmetry => "C-symmetry",
            Relation::D => "D",
            Relation::BA => "BA",
            Relation::BB => "BB",
            Relation::BC => "BC",
        };
        f.write_str(name)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Violation<S> {
    pub relation: Relation,
    pub indices: Vec<usize>,
    pub lhs: S,
    pub rhs: S,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RelationReport<S> {
    pub results: Vec<(Relation, bool)>,
    pub violations: Vec<Violation<S>>,
    /// Some tuples could not be checked because their dummy sums leave the truncation.
    pub truncation_caveat: bool,
    pub tuples_checked: usize,
    pub tuples_skipped: usize,
}

impl<S: Scalar> RelationReport<S> {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn relation_passed(&self, r: Relation) -> bool {
        self.results.iter().any(|(rel, ok)| *rel == r && *ok)
    }

    pub fn summary(&self) -> String {
        let mut out = String::new();
        for (rel, ok) in &self.results {
            out.push_str(&format!("{rel}: {}\n", if *ok { "pass" } else { "FAIL" }));
        }
        out.push_str(&format!(
            "tuples checked: {}, skipped at truncation: {}{}\n",
            self.tuples_checked,
            self.tuples_skipped,
            if self.truncation_caveat { " (caveat)" } else { "" }
        ));
        for v in self.violations.iter().take(20) {
            out.push_str(&format!("  {} at {:?}: {} != {}\n", v.relation, v.indices, v.lhs, v.rhs));
        }
        if self.violations.len() > 20 {
            out.push_str(&format!("  ... {} more\n", self.violations.len() - 20));
        }
        out
    }
}

/// Grade bounds for the dummy index of each factor type.
struct Bounds<'a> {
    set: IndexSet,
    sp: Option<&'a Sparsity>,
}

type Bound = Option<i64>;

fn min_bound(x: Bound, y: Bound) -> Bound {
    match (x, y) {
        (Some(a), Some(b)) => Some(a.min(b)),
        (a, None) => a,
        (None, b) => b,
    }
}

impl Bounds<'_> {
    fn g(&self, i: usize) -> i64 {
        self.set.grade(i) as i64
    }

    /// `A^x_{ya}` or `A^a_{xy}`.
    fn a(&self, x: usize, y: usize) -> Bound {
        self.sp?.a.hi.map(|h| h - self.g(x) - self.g(y))
    }

    /// `B^x_{ya}`, dummy in the derivative slot.
    fn b_last(&self, x: usize, y: usize) -> Bound {
        self.sp?.b.hi.map(|h| h + self.g(x) + self.g(y))
    }

    /// `B^a_{xy}` (dummy upper) or `B^x_{ay}` (dummy in the x slot); both read
    /// `g_y − g_a − g_x ≥ lo`.
    fn b_other(&self, x: usize, y: usize) -> Bound {
        self.sp?.b.lo.map(|l| self.g(y) - self.g(x) - l)
    }

    /// `C^a_{xy}`.
    fn c_upper(&self, x: usize, y: usize) -> Bound {
        self.sp?.c.lo.map(|l| self.g(x) + self.g(y) - l)
    }

    /// `C^x_{ya}`.
    fn c_lower(&self, x: usize, y: usize) -> Bound {
        self.sp?.c.hi.map(|h| h + self.g(x) - self.g(y))
    }

    fn d(&self) -> Bound {
        self.sp?.d.hi
    }
}

enum Range {
    /// Dummy indices `0..end`.
    Upto(usize),
    Skip,
}

struct Checker<'a, S> {
    s: &'a AiryStructure<S>,
    bounds: Bounds<'a>,
}

impl<'a, S: Scalar> Checker<'a, S> {
    fn range(&self, term_bounds: &[Bound]) -> Result<Range, Error> {
        match self.s.index_set() {
            IndexSet::Finite { dim } => Ok(Range::Upto(dim)),
            IndexSet::Graded { max_grade, block } => {
                let mut worst = i64::MIN;
                for b in term_bounds {
                    match b {
                        Some(v) => worst = worst.max(*v),
                        None => {
                            return Err(Error::UnboundedSum(
                                "a dummy sum in the relations is not bounded by the sparsity windows".into(),
                            ))
                        }
                    }
                }
                if worst > max_grade as i64 {
                    Ok(Range::Skip)
                } else if worst < 0 {
                    Ok(Range::Upto(0))
                } else {
                    Ok(Range::Upto((worst as usize + 1) * block))
                }
            }
        }
    }

    fn ba(&self, i: usize, j: usize, k: usize, l: usize, end: usize) -> S {
        let s = self.s;
        let mut acc = S::zero();
        for a in 0..end {
            if let (Some(x), Some(y)) = (s.b(i, j, a), s.a(a, k, l)) {
                acc.add_mul(x, y);
            }
            if let (Some(x), Some(y)) = (s.b(i, k, a), s.a(j, a, l)) {
                acc.add_mul(x, y);
            }
            if let (Some(x), Some(y)) = (s.b(i, l, a), s.a(j, a, k)) {
                acc.add_mul(x, y);
            }
        }
        acc
    }

    fn ba_bounds(&self, i: usize, j: usize, k: usize, l: usize) -> [Bound; 3] {
        let b = &self.bounds;
        [
            min_bound(b.b_last(i, j), b.a(k, l)),
            min_bound(b.b_last(i, k), b.a(j, l)),
            min_bound(b.b_last(i, l), b.a(j, k)),
        ]
    }

    fn bb(&self, i: usize, j: usize, k: usize, l: usize, end: usize) -> S {
        let s = self.s;
        let mut acc = S::zero();
        for a in 0..end {
            if let (Some(x), Some(y)) = (s.b(i, j, a), s.b(a, k, l)) {
                acc.add_mul(x, y);
            }
            if let (Some(x), Some(y)) = (s.b(i, k, a), s.b(j, a, l)) {
                acc.add_mul(x, y);
            }
            if let (Some(x), Some(y)) = (s.c(i, l, a), s.a(j, a, k)) {
                acc.add_mul(x, y);
            }
        }
        acc
    }

    fn bb_bounds(&self, i: usize, j: usize, k: usize, l: usize) -> [Bound; 3] {
        let b = &self.bounds;
        [
            min_bound(b.b_last(i, j), b.b_other(k, l)),
            min_bound(b.b_last(i, k), b.b_other(j, l)),
            min_bound(b.c_lower(i, l), b.a(j, k)),
        ]
    }

    fn bc(&self, i: usize, j: usize, k: usize, l: usize, end: usize) -> S {
        let s = self.s;
        let mut acc = S::zero();
        for a in 0..end {
            if let (Some(x), Some(y)) = (s.b(i, j, a), s.c(a, k, l)) {
                acc.add_mul(x, y);
            }
            if let (Some(x), Some(y)) = (s.c(i, k, a), s.b(j, a, l)) {
                acc.add_mul(x, y);
            }
            if let (Some(x), Some(y)) = (s.c(i, l, a), s.b(j, a, k)) {
                acc.add_mul(x, y);
            }
        }
        acc
    }

    fn bc_bounds(&self, i: usize, j: usize, k: usize, l: usize) -> [Bound; 3] {
        let b = &self.bounds;
        [
            min_bound(b.b_last(i, j), b.c_upper(k, l)),
            min_bound(b.c_lower(i, k), b.b_other(j, l)),
            min_bound(b.c_lower(i, l), b.b_other(j, k)),
        ]
    }

    fn d_side(&self, i: usize, j: usize, end: usize) -> S {
        let s = self.s;
        let mut acc = S::zero();
        let mut quad = S::zero();
        for a in 0..end {
            if let (Some(x), Some(y)) = (s.b(i, j, a), s.d(a)) {
                acc.add_mul(x, y);
            }
            for b in 0..end {
                if let (Some(x), Some(y)) = (s.c(i, a, b), s.a(j, a, b)) {
                    quad.add_mul(x, y);
                }
            }
        }
        acc + quad.scale(&rat(1, 2))
    }

    fn d_bounds(&self, i: usize, j: usize) -> [Bound; 2] {
        let b = &self.bounds;
        let quad = match b.sp {
            None => None,
            Some(sp) => min_bound(
                sp.a.hi.map(|h| h - b.g(j)),
                sp.c.hi.map(|h| h + b.g(i)),
            ),
        };
        [min_bound(b.b_last(i, j), b.d()), quad]
    }
}

/// Checks all relations exactly, within the truncation for graded structures.
pub fn check_relations<S: Scalar>(s: &AiryStructure<S>) -> Result<RelationReport<S>, Error> {
    if s.index_set().is_graded() && s.sparsity().is_none() {
        return Err(Error::UnboundedSum(
            "graded structure without a sparsity rule: dummy sums cannot be bounded".into(),
        ));
    }
    s.check_sparsity()?;
    let n = s.dim();
    let ck = Checker { s, bounds: Bounds { set: s.index_set(), sp: s.sparsity() } };
    let mut violations = Vec::new();
    let mut checked = 0usize;
    let mut skipped = 0usize;

    let sym_violation = |rel: Relation, idx: Vec<usize>, x: &S, y: &S, out: &mut Vec<Violation<S>>| {
        if x != y {
            out.push(Violation { relation: rel, indices: idx, lhs: x.clone(), rhs: y.clone() });
        }
    };
    let zero = S::zero();
    for (&(i, j, k), v) in s.a_entries() {
        for (p, q, r) in [(i, k, j), (j, i, k), (j, k, i), (k, i, j), (k, j, i)] {
            let w = s.a(p, q, r).unwrap_or(&zero);
            sym_violation(Relation::ASymmetry, vec![i, j, k, p, q, r], v, w, &mut violations);
        }
    }
    for (&(i, j, k), v) in s.c_entries() {
        let w = s.c(i, k, j).unwrap_or(&zero);
        sym_violation(Relation::CSymmetry, vec![i, j, k], v, w, &mut violations);
    }
    // Each asymmetric pair is reported from both sides; keep one.
    dedup_symmetry(&mut violations);

    for i in 0..n {
        for j in (i + 1)..n {
            let bounds = [ck.d_bounds(i, j), ck.d_bounds(j, i)].concat();
            match ck.range(&bounds)? {
                Range::Skip => skipped += 1,
                Range::Upto(end) => {
                    checked += 1;
                    let lhs = ck.d_side(i, j, end);
                    let rhs = ck.d_side(j, i, end);
                    if lhs != rhs {
                        violations.push(Violation { relation: Relation::D, indices: vec![i, j], lhs, rhs });
                    }
                }
            }
            for k in 0..n {
                for l in 0..n {
                    type Side<'b, S> = fn(&Checker<'b, S>, usize, usize, usize, usize, usize) -> S;
                    type SideBounds<'b, S> = fn(&Checker<'b, S>, usize, usize, usize, usize) -> [Bound; 3];
                    let rels: [(Relation, Side<S>, SideBounds<S>, bool); 3] = [
                        (Relation::BA, Checker::ba, Checker::ba_bounds, true),
                        (Relation::BB, Checker::bb, Checker::bb_bounds, false),
                        (Relation::BC, Checker::bc, Checker::bc_bounds, true),
                    ];
                    for (rel, side, side_bounds, symmetric_kl) in rels {
                        if symmetric_kl && l < k {
                            continue;
                        }
                        let bounds = [side_bounds(&ck, i, j, k, l), side_bounds(&ck, j, i, k, l)].concat();
                        match ck.range(&bounds)? {
                            Range::Skip => skipped += 1,
                            Range::Upto(end) => {
                                checked += 1;
                                let lhs = side(&ck, i, j, k, l, end);
                                let rhs = side(&ck, j, i, k, l, end);
                                if lhs != rhs {
                                    violations.push(Violation { relation: rel, indices: vec![i, j, k, l], lhs, rhs });
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    let results = Relation::ALL
        .iter()
        .map(|r| (*r, !violations.iter().any(|v| v.relation == *r)))
        .collect();
    Ok(RelationReport {
        results,
        violations,
        truncation_caveat: skipped > 0,
        tuples_checked: checked,
        tuples_skipped: skipped,
    })
}

fn dedup_symmetry<S: Scalar>(violations: &mut Vec<Violation<S>>) {
    let mut seen = std::collections::BTreeSet::new();
    violations.retain(|v| {
        let mut key = v.indices.clone();
        if v.relation == Relation::ASymmetry {
            let (a, b) = key.split_at_mut(3);
            let (x, y) = (a.to_vec(), b.to_vec());
            key = if x <= y { [x, y].concat() } else { [y, x].concat() };
        } else {
            key[1..].sort_unstable();
        }
        seen.insert((v.relation, key))
    });
}

impl<S: Scalar> AiryStructure<S> {
    pub fn check_relations(&self) -> Result<RelationReport<S>, Error> {
        check_relations(self)
    }
}
