//! Airy structures on the loop space `ℂ[[z]]`, indexed by odd powers.
//!
//! A series `θ(z) = Σ_{r≥−1} θ_r z^{2r+1}` determines
//!
//! ```text
//! A^i_{jk} = θ_{−1} δ_{i,j,k=0}
//! B^i_{jk} = (2k+1)!! / ((2i+1)!! (2j+1)!!) · (2j+1) · θ_{k−i−j}
//! C^i_{jk} = (2j+1)!! (2k+1)!! / (2i+1)!! · θ_{j+k+1−i}
//! D^i      = θ₀/8 · δ_{i,0} + θ_{−1}/24 · δ_{i,1}
//! ```
//!
//! The Witten–Kontsevich structure is `θ = z^{−1}`; its amplitudes are the
//! ψ-class intersection numbers `⟨τ_{k₁}⋯τ_{kₙ}⟩_g`.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::airy::{AiryStructure, IndexSet, Sparsity, Window};
use crate::coeff::{factorial, int, odd_double_factorial, rat, theta_coefficient, PiPoly, Rational, Scalar};
use crate::tr::{self, cells_at, is_stable, AmplitudeTable};
use crate::Error;

/// Coefficients `θ_r`, `r ≥ −1`, of an odd Laurent series.
#[derive(Clone)]
pub struct ThetaSeries<S> {
    rule: Arc<dyn Fn(i64) -> S + Send + Sync>,
    lowest: i64,
}

impl<S: Scalar> std::fmt::Debug for ThetaSeries<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let shown: Vec<String> = (-1..4).map(|r| self.coeff(r).to_string()).collect();
        write!(f, "ThetaSeries[{}, ...]", shown.join(", "))
    }
}

impl<S: Scalar> ThetaSeries<S> {
    /// `coeffs[r + 1] = θ_r`; higher coefficients vanish.
    pub fn from_coefficients(coeffs: Vec<S>) -> Self {
        let lowest = coeffs.iter().position(|c| !c.is_zero()).map_or(i64::MAX, |p| p as i64 - 1);
        let coeffs = Arc::new(coeffs);
        ThetaSeries {
            rule: Arc::new(move |r| {
                usize::try_from(r + 1).ok().and_then(|p| coeffs.get(p).cloned()).unwrap_or_else(S::zero)
            }),
            lowest,
        }
    }

    /// An arbitrary rule `r ↦ θ_r`; `lowest` is the first possibly non-zero index.
    pub fn from_rule(lowest: i64, rule: impl Fn(i64) -> S + Send + Sync + 'static) -> Self {
        ThetaSeries { rule: Arc::new(move |r| if r < lowest { S::zero() } else { rule(r) }), lowest }
    }

    pub fn witten_kontsevich() -> Self {
        Self::from_coefficients(vec![S::one()])
    }

    pub fn coeff(&self, r: i64) -> S {
        if r < -1 {
            S::zero()
        } else {
            (self.rule)(r)
        }
    }

    pub fn lowest(&self) -> i64 {
        self.lowest
    }
}

impl ThetaSeries<PiPoly> {
    /// The series whose amplitudes, in the loop basis, are Weil–Petersson volumes.
    pub fn mirzakhani() -> Self {
        Self::from_rule(-1, theta_coefficient)
    }
}

fn dfac(k: usize) -> Rational {
    Rational::from_integer(odd_double_factorial(k as i64))
}

/// The structure of a θ-series, truncated at grade `max_grade`.
pub fn build_theta_airy<S: Scalar>(theta: &ThetaSeries<S>, max_grade: usize) -> Result<AiryStructure<S>, Error> {
    if theta.lowest() < -1 {
        return Err(Error::invalid("θ must start at z^{-1}"));
    }
    let n = max_grade;
    let mut s = AiryStructure::zero(IndexSet::Graded { max_grade: n, block: 1 });
    s.set_a(0, 0, 0, theta.coeff(-1));
    for i in 0..=n {
        for j in 0..=n {
            for k in 0..=n {
                let r = k as i64 - i as i64 - j as i64;
                if r >= theta.lowest() {
                    let w = dfac(k) / (dfac(i) * dfac(j)) * int(2 * j as i64 + 1);
                    s.set_b(i, j, k, theta.coeff(r).scale(&w));
                }
                let r = (j + k + 1) as i64 - i as i64;
                if j <= k && r >= theta.lowest() {
                    let w = dfac(j) * dfac(k) / dfac(i);
                    s.set_c(i, j, k, theta.coeff(r).scale(&w));
                }
            }
        }
    }
    s.set_d(0, theta.coeff(0).scale(&rat(1, 8)));
    if n >= 1 {
        s.set_d(1, theta.coeff(-1).scale(&rat(1, 24)));
    }
    let lo = theta.lowest().min(i64::MAX / 2);
    s.set_sparsity(Some(Sparsity {
        a: Window::new(Some(0), Some(0)),
        b: Window::at_least(lo),
        c: Window::at_least(lo - 1),
        d: Window::new(Some(0), Some(1)),
    }));
    Ok(s)
}

pub fn witten_kontsevich<S: Scalar>(max_grade: usize) -> AiryStructure<S> {
    let mut s = build_theta_airy(&ThetaSeries::witten_kontsevich(), max_grade)
        .expect("θ = 1/z is admissible");
    s.set_sparsity(Some(Sparsity::witten_kontsevich()));
    s
}

/// Witten–Kontsevich with `D` placed on the wrong index (`1/24` at `i = 0`).
pub fn witten_kontsevich_misindexed_d<S: Scalar>(max_grade: usize) -> AiryStructure<S> {
    let s = witten_kontsevich::<S>(max_grade);
    let mut d = std::collections::BTreeMap::new();
    d.insert(0, S::from_rational(rat(1, 24)));
    s.with_d(d)
}

/// Closed form of `f^k_{ij} = B^i_{jk} − B^j_{ik}` for a θ-structure.
pub fn witt_structure_constant<S: Scalar>(theta: &ThetaSeries<S>, i: usize, j: usize, k: usize) -> S {
    let w = dfac(k) / (dfac(i) * dfac(j)) * int(2 * (j as i64 - i as i64));
    theta.coeff(k as i64 - i as i64 - j as i64).scale(&w)
}

/// `c_i = −(2i+1)!!/2`, so that `𝓛_{i−1} = c_i L_i / ħ` obey `[𝓛_k, 𝓛_l] = (k−l) 𝓛_{k+l}`.
pub fn witt_rescaling(i: usize) -> Rational {
    -dfac(i) / int(2)
}

/// Checks `c_{k+1} c_{l+1} f^a_{k+1,l+1} / c_a = (k−l) δ_{a−1,k+l}` for all
/// `−1 ≤ k, l` and `a` within the truncation.
pub fn check_witt_algebra(s: &AiryStructure<Rational>) -> bool {
    let n = s.dim();
    for i in 0..n {
        for j in 0..n {
            for a in 0..n {
                let lhs = witt_rescaling(i) * witt_rescaling(j) * s.structure_constant(i, j, a) / witt_rescaling(a);
                let (k, l) = (i as i64 - 1, j as i64 - 1);
                let rhs = if a as i64 - 1 == k + l { int(k - l) } else { Rational::zero() };
                if lhs != rhs {
                    return false;
                }
            }
        }
    }
    true
}

/// Grade needed to compute ψ-intersections up to `chi_max` exactly.
pub fn wk_truncation(chi_max: usize) -> usize {
    (1..=chi_max)
        .flat_map(cells_at)
        .map(|(g, n)| (3 * g + n).saturating_sub(3))
        .max()
        .unwrap_or(0)
}

/// Table of `⟨τ_{k₁}⋯τ_{kₙ}⟩_g` for `2g−2+n ≤ chi_max`.
pub fn psi_table(chi_max: usize) -> Result<AmplitudeTable<Rational>, Error> {
    tr::compute(&witten_kontsevich(wk_truncation(chi_max)), chi_max)
}

/// `⟨τ_{k₁}⋯τ_{kₙ}⟩_g` computed by recursion.
pub fn psi_intersection(g: usize, ks: &[usize]) -> Result<Rational, Error> {
    let n = ks.len();
    if !is_stable(g, n) {
        return Err(Error::invalid(format!("(g, n) = ({g}, {n}) is unstable")));
    }
    if ks.iter().sum::<usize>() != 3 * g + n - 3 {
        return Ok(Rational::zero());
    }
    let table = psi_table(2 * g + n - 2)?;
    Ok(table.value(g, ks))
}

/// `⟨τ_{k₁}⋯τ_{kₙ}⟩₀ = (n−3)! / ∏ k_i!` when `Σk = n−3`.
pub fn genus0_closed(ks: &[usize]) -> Rational {
    let n = ks.len();
    if n < 3 || ks.iter().sum::<usize>() != n - 3 {
        return Rational::zero();
    }
    let den = ks.iter().fold(BigInt::one(), |acc, &k| acc * factorial(k as u64));
    Rational::new(factorial(n as u64 - 3), den)
}

#[derive(Clone, Debug, PartialEq)]
pub struct EquationFailure {
    pub equation: &'static str,
    pub g: usize,
    pub indices: Vec<usize>,
    pub lhs: Rational,
    pub rhs: Rational,
}

/// String and dilaton equations on every applicable entry of a ψ-table:
///
/// `⟨τ₀ τ_K⟩_g = Σ_m ⟨τ_{K−e_m}⟩_g`, `⟨τ₁ τ_K⟩_g = Σ_m (2k_m+1)/3 ⟨τ_K⟩_g + δ_{g,1}δ_{K=∅}/24`,
/// with the unstable `⟨τ₀τ₀τ₀⟩₀ = 1`.
pub fn verify_string_dilaton(table: &AmplitudeTable<Rational>) -> Vec<EquationFailure> {
    let mut failures = Vec::new();
    for (g, n) in table.cells() {
        for idx in table.domain(g, n) {
            let lhs = table.value(g, &idx);
            for (first, name) in [(0usize, "string"), (1, "dilaton")] {
                let Some(pos) = idx.iter().position(|&k| k == first) else { continue };
                let mut rest = idx.clone();
                rest.remove(pos);
                let rhs = if first == 0 {
                    if (g, n) == (0, 3) {
                        if rest == [0, 0] { int(1) } else { Rational::zero() }
                    } else {
                        let mut total = Rational::zero();
                        for m in 0..rest.len() {
                            if rest[m] >= 1 {
                                let mut lowered = rest.clone();
                                lowered[m] -= 1;
                                total += table.value(g, &lowered);
                            }
                        }
                        total
                    }
                } else if (g, n) == (1, 1) {
                    rat(1, 24)
                } else if is_stable(g, n - 1) {
                    let weight: i64 = rest.iter().map(|&k| 2 * k as i64 + 1).sum();
                    rat(weight, 3) * table.value(g, &rest)
                } else {
                    Rational::zero()
                };
                if lhs != rhs {
                    failures.push(EquationFailure { equation: name, g, indices: idx.clone(), lhs: lhs.clone(), rhs });
                }
            }
        }
    }
    failures
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Matrix;
    use proptest::prelude::*;

    type Q = Rational;

    /// Solves the affine `D` relation for `D^0, D^1`, returning `None` if it is
    /// inconsistent or leaves freedom.
    fn solve_d(s: &AiryStructure<Q>) -> Option<(Q, Q)> {
        let n = s.dim();
        let contract = |i: usize, j: usize| -> Q {
            let mut t = Q::zero();
            for (&(ii, a, b), c) in s.c_entries() {
                if ii == i {
                    if let Some(av) = s.a(j, a, b) {
                        t += c * av;
                    }
                }
            }
            t
        };
        let mut rows = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let rhs = (contract(j, i) - contract(i, j)) / int(2);
                rows.push(vec![s.structure_constant(i, j, 0), s.structure_constant(i, j, 1), rhs]);
            }
        }
        // Normal equations are enough here: the system is consistent by construction.
        let m = Matrix::from_fn(2, 2, |p, q| rows.iter().map(|r| &r[p] * &r[q]).sum::<Q>());
        let v: Vec<Q> = (0..2).map(|p| rows.iter().map(|r| &r[p] * &r[2]).sum::<Q>()).collect();
        let inv = m.inverse().ok()?;
        let d0 = &inv[(0, 0)] * &v[0] + &inv[(0, 1)] * &v[1];
        let d1 = &inv[(1, 0)] * &v[0] + &inv[(1, 1)] * &v[1];
        rows.iter().all(|r| &r[0] * &d0 + &r[1] * &d1 == r[2]).then_some((d0, d1))
    }

    #[test]
    fn wk_entries() {
        let s = witten_kontsevich::<Q>(4);
        assert_eq!(s.a(0, 0, 0), Some(&int(1)));
        assert_eq!(s.b(0, 2, 1), Some(&int(1)));
        assert_eq!(s.b(1, 0, 0), Some(&rat(1, 3)));
        assert_eq!(s.c(2, 0, 0), Some(&rat(1, 15)));
        assert_eq!(s.d(1), Some(&rat(1, 24)));
        assert_eq!(s.d(0), None);
        assert!(s.check_relations().unwrap().passed());
    }

    #[test]
    fn witt_constants_match_b() {
        let theta = ThetaSeries::<Q>::witten_kontsevich();
        let s = witten_kontsevich::<Q>(6);
        for i in 0..=6 {
            for j in 0..=6 {
                for k in 0..=6 {
                    assert_eq!(witt_structure_constant(&theta, i, j, k), s.structure_constant(i, j, k));
                }
            }
        }
        // B^0_{10} − B^1_{00} = 1 − 1/3.
        assert_eq!(s.structure_constant(0, 1, 0), rat(2, 3));
        assert!(check_witt_algebra(&s));
    }

    #[test]
    fn d_is_forced_by_the_relations() {
        for coeffs in [vec![int(1)], vec![int(1), rat(2, 3)], vec![int(2), int(-1), rat(5, 7)]] {
            let theta = ThetaSeries::from_coefficients(coeffs.clone());
            let s = build_theta_airy(&theta, 6).unwrap();
            let (d0, d1) = solve_d(&s).expect("unique solution");
            assert_eq!(d0, coeffs.get(1).cloned().unwrap_or_default() / int(8));
            assert_eq!(d1, coeffs[0].clone() / int(24));
            assert!(s.check_relations().unwrap().passed());
        }
    }

    #[test]
    fn mirzakhani_theta_passes_relations() {
        let s = build_theta_airy(&ThetaSeries::mirzakhani(), 5).unwrap();
        let rep = s.check_relations().unwrap();
        assert!(rep.passed(), "{}", rep.summary());
        assert_eq!(s.d(0), Some(&PiPoly::monomial(1, rat(1, 12))));
    }

    #[test]
    fn misplaced_d_breaks_relations() {
        let s = witten_kontsevich_misindexed_d::<Q>(4);
        assert!(!s.check_relations().unwrap().passed());
        let t = tr::compute(&s, 2).unwrap();
        let rep = t.verify_symmetry();
        assert!(rep.mismatches.iter().any(|m| m.g == 1 && m.indices == [0, 2]));
    }

    #[test]
    fn known_intersections() {
        assert_eq!(psi_intersection(1, &[1]).unwrap(), rat(1, 24));
        assert_eq!(psi_intersection(2, &[4]).unwrap(), rat(1, 1152));
        assert_eq!(psi_intersection(2, &[2, 3]).unwrap(), rat(29, 5760));
        assert_eq!(psi_intersection(3, &[7]).unwrap(), rat(1, 82944));
        assert_eq!(psi_intersection(1, &[0, 0]).unwrap(), Q::zero());
        assert!(psi_intersection(0, &[0, 0]).is_err());
    }

    #[test]
    fn string_and_dilaton() {
        let t = psi_table(5).unwrap();
        assert!(verify_string_dilaton(&t).is_empty());
    }

    #[test]
    fn truncation_levels() {
        assert_eq!(wk_truncation(1), 1);
        assert_eq!(wk_truncation(6), 8);
    }

    proptest! {
        #[test]
        fn genus_zero_matches_closed_form(ks in proptest::collection::vec(0usize..4, 3..8)) {
            let n = ks.len();
            let table = tr::compute(&witten_kontsevich::<Q>(wk_truncation(n - 2).max(3)), n - 2).unwrap();
            prop_assert_eq!(table.value(0, &ks), genus0_closed(&ks));
        }
    }
}
