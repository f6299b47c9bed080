//! Weil–Petersson volumes `V_{g,n}(L₁,…,Lₙ)` by Mirzakhani's recursion and by
//! topological recursion on the corresponding Airy structure.
//!
//! The kernel integrals act on monomials through the odd polynomials
//!
//! `H_k(x) = ∫₀^∞ ℓ^{2k+1} (f(ℓ+x) − f(ℓ−x)) dℓ = (2k+1)! Σ_{i=0}^{k+1} θ_{i−1} x^{2k+3−2i}/(2k+3−2i)!`
//!
//! with `f(z) = −2 ln(1 + e^{−z/2})`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::airy::{AiryStructure, IndexSet, Sparsity};
use crate::coeff::{binomial, factorial, rat, theta_coefficient, PiPoly, Rational, Scalar};
use crate::tr::{self, cells_at, is_stable, AmplitudeTable};
use crate::Error;

fn fact(n: usize) -> Rational {
    Rational::from_integer(factorial(n as u64))
}

/// `H_k` as a map from odd powers of `x` to their coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct HPolynomial {
    pub k: usize,
    pub coeffs: BTreeMap<u32, PiPoly>,
}

impl HPolynomial {
    pub fn coeff(&self, p: u32) -> PiPoly {
        self.coeffs.get(&p).cloned().unwrap_or_default()
    }

    pub fn degree(&self) -> u32 {
        self.coeffs.keys().next_back().copied().unwrap_or(0)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs.iter().map(|(p, c)| c.eval_f64() * x.powi(*p as i32)).sum()
    }
}

pub fn h_polynomial(k: usize) -> HPolynomial {
    let mut coeffs = BTreeMap::new();
    for i in 0..=k + 1 {
        let p = 2 * k + 3 - 2 * i;
        let c = theta_coefficient(i as i64 - 1).scale(&(fact(2 * k + 1) / fact(p)));
        if !c.is_zero() {
            coeffs.insert(p as u32, c);
        }
    }
    HPolynomial { k, coeffs }
}

/// `(H_k(L₁+L₂) + H_k(L₁−L₂)) / (2L₁)`, keyed by the exponents of `(L₁², L₂²)`.
pub fn b_transform(k: usize) -> BTreeMap<(u32, u32), PiPoly> {
    let h = h_polynomial(k);
    let mut out = BTreeMap::new();
    for (&p, c) in &h.coeffs {
        // (L₁+L₂)^p + (L₁−L₂)^p = 2 Σ_{q even} C(p,q) L₁^{p−q} L₂^q, and p is odd.
        for q in (0..p).step_by(2) {
            let w = Rational::from_integer(binomial(p as u64, q as u64));
            out.insert(((p - q - 1) / 2, q / 2), c.scale(&w));
        }
    }
    out
}

/// `(2j+1)!(2k+1)!/(2j+2k+3)! · H_{j+k+1}(L)/L`, keyed by the exponent of `L²`.
pub fn c_transform(j: usize, k: usize) -> BTreeMap<u32, PiPoly> {
    let w = fact(2 * j + 1) * fact(2 * k + 1) / fact(2 * j + 2 * k + 3);
    h_polynomial(j + k + 1).coeffs.iter().map(|(&p, c)| ((p - 1) / 2, c.scale(&w))).collect()
}

/// `Σ_{k⃗} c_{k⃗} L₁^{2k₁}⋯Lₙ^{2kₙ}` with π²-polynomial coefficients.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct VolumePolynomial {
    pub g: usize,
    pub n: usize,
    pub terms: BTreeMap<Vec<u32>, PiPoly>,
}

impl VolumePolynomial {
    fn new(g: usize, n: usize) -> Self {
        VolumePolynomial { g, n, terms: BTreeMap::new() }
    }

    fn add(&mut self, exps: Vec<u32>, c: PiPoly) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(exps.clone()).or_default();
        *slot = slot.clone() + c;
        if slot.is_zero() {
            self.terms.remove(&exps);
        }
    }

    pub fn coeff(&self, exps: &[u32]) -> PiPoly {
        self.terms.get(exps).cloned().unwrap_or_default()
    }

    pub fn is_symmetric(&self) -> bool {
        self.terms.iter().all(|(e, c)| {
            let mut s = e.clone();
            s.sort_unstable();
            self.coeff(&s) == *c
        })
    }

    /// Every coefficient is `r·π^{2d}` with `d + Σk = 3g−3+n`.
    pub fn has_expected_grading(&self) -> bool {
        let top = (3 * self.g + self.n) as i64 - 3;
        self.terms.iter().all(|(e, c)| {
            let s: i64 = e.iter().map(|&x| x as i64).sum();
            s <= top && c.is_homogeneous() && c.degree() == Some((top - s) as u32)
        })
    }

    pub fn eval_f64(&self, lengths: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| c.eval_f64() * e.iter().zip(lengths).map(|(&k, l)| l.powi(2 * k as i32)).product::<f64>())
            .sum()
    }

    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> =
            self.terms.iter().map(|(e, c)| json!({ "exponents": e, "coefficient": c.to_json_value() })).collect();
        json!({ "g": self.g, "n": self.n, "terms": terms })
    }

    pub fn to_csv(&self) -> String {
        let max_deg = self.terms.values().filter_map(PiPoly::degree).max().unwrap_or(0);
        let mut out = String::from("exponents,value_rational");
        for d in 1..=max_deg {
            let _ = write!(out, ",value_pi2_degree_{d}");
        }
        out.push('\n');
        for (e, c) in &self.terms {
            let es: Vec<String> = e.iter().map(|x| (2 * x).to_string()).collect();
            let _ = write!(out, "{},{}", es.join(" "), c.coeff(0));
            for d in 1..=max_deg {
                let _ = write!(out, ",{}", c.coeff(d));
            }
            out.push('\n');
        }
        out
    }

    /// Rendered with the highest powers of `L` first.
    pub fn to_latex(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (e, c) in self.terms.iter().rev() {
            let mono: String = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| if k == 1 { format!("L_{{{}}}^{{2}}", i + 1) } else { format!("L_{{{}}}^{{{}}}", i + 1, 2 * k) })
                .collect::<Vec<_>>()
                .join(" ");
            let coeff = c.to_latex();
            parts.push(match (mono.is_empty(), c.terms().count() > 1) {
                (true, _) => coeff,
                (false, true) => format!("\\left({coeff}\\right) {mono}"),
                (false, false) if coeff == "1" => mono,
                (false, false) => format!("{coeff} {mono}"),
            });
        }
        parts.join(" + ").replace("+ -", "- ")
    }
}

impl std::fmt::Display for VolumePolynomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(e, c)| {
                let mono: Vec<String> = e
                    .iter()
                    .enumerate()
                    .filter(|(_, &k)| k > 0)
                    .map(|(i, &k)| format!("L{}^{}", i + 1, 2 * k))
                    .collect();
                if mono.is_empty() {
                    format!("{c}")
                } else {
                    format!("({c})*{}", mono.join("*"))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// `V_{1,1}(L) = π²/12 + L²/48`.
pub fn v11() -> VolumePolynomial {
    let mut v = VolumePolynomial::new(1, 1);
    v.add(vec![0], PiPoly::monomial(1, rat(1, 12)));
    v.add(vec![1], PiPoly::constant(rat(1, 48)));
    v
}

/// Memoized Mirzakhani recursion.
#[derive(Default)]
pub struct VolumeRecursion {
    volumes: BTreeMap<(usize, usize), VolumePolynomial>,
    b_cache: BTreeMap<u32, BTreeMap<(u32, u32), PiPoly>>,
    c_cache: BTreeMap<(u32, u32), BTreeMap<u32, PiPoly>>,
}

impl VolumeRecursion {
    pub fn new() -> Self {
        Self::default()
    }

    fn b(&mut self, k: u32) -> BTreeMap<(u32, u32), PiPoly> {
        self.b_cache.entry(k).or_insert_with(|| b_transform(k as usize)).clone()
    }

    fn c(&mut self, j: u32, k: u32) -> BTreeMap<u32, PiPoly> {
        self.c_cache.entry((j, k)).or_insert_with(|| c_transform(j as usize, k as usize)).clone()
    }

    /// `V_{g,n}`; zero for the unstable `(0,1)` and `(0,2)`.
    pub fn volume(&mut self, g: usize, n: usize) -> VolumePolynomial {
        if !is_stable(g, n) {
            return VolumePolynomial::new(g, n);
        }
        if let Some(v) = self.volumes.get(&(g, n)) {
            return v.clone();
        }
        let v = match (g, n) {
            (0, 3) => {
                let mut v = VolumePolynomial::new(0, 3);
                v.add(vec![0, 0, 0], PiPoly::one());
                v
            }
            (1, 1) => v11(),
            _ => self.recurse(g, n),
        };
        self.volumes.insert((g, n), v.clone());
        v
    }

    fn recurse(&mut self, g: usize, n: usize) -> VolumePolynomial {
        let mut out = VolumePolynomial::new(g, n);
        let others: Vec<usize> = (1..n).collect();

        // Pants bounded by L₁, L_m and an interior curve.
        if is_stable(g, n - 1) {
            let sub = self.volume(g, n - 1);
            for &m in &others {
                let rest: Vec<usize> = others.iter().copied().filter(|&x| x != m).collect();
                for (e, c) in &sub.terms {
                    for ((a, b), w) in self.b(e[0]) {
                        let mut exps = vec![0u32; n];
                        exps[0] = a;
                        exps[m] = b;
                        for (slot, &r) in rest.iter().enumerate() {
                            exps[r] = e[slot + 1];
                        }
                        out.add(exps, c.clone() * w);
                    }
                }
            }
        }

        // Pants bounded by L₁ and two interior curves.
        let mut half = VolumePolynomial::new(g, n);
        if g >= 1 && is_stable(g - 1, n + 1) {
            let sub = self.volume(g - 1, n + 1);
            for (e, c) in &sub.terms {
                for (p, w) in self.c(e[0], e[1]) {
                    let mut exps = vec![p];
                    exps.extend_from_slice(&e[2..]);
                    half.add(exps, c.clone() * w);
                }
            }
        }
        for mask in 0u64..(1 << others.len()) {
            let j1: Vec<usize> = others.iter().enumerate().filter(|(p, _)| mask >> p & 1 == 1).map(|(_, &x)| x).collect();
            let j2: Vec<usize> = others.iter().enumerate().filter(|(p, _)| mask >> p & 1 == 0).map(|(_, &x)| x).collect();
            for g1 in 0..=g {
                let g2 = g - g1;
                if !is_stable(g1, j1.len() + 1) || !is_stable(g2, j2.len() + 1) {
                    continue;
                }
                let v1 = self.volume(g1, j1.len() + 1);
                let v2 = self.volume(g2, j2.len() + 1);
                for (e1, c1) in &v1.terms {
                    for (e2, c2) in &v2.terms {
                        let prod = c1.clone() * c2.clone();
                        for (p, w) in self.c(e1[0], e2[0]) {
                            let mut exps = vec![0u32; n];
                            exps[0] = p;
                            for (slot, &x) in j1.iter().enumerate() {
                                exps[x] = e1[slot + 1];
                            }
                            for (slot, &x) in j2.iter().enumerate() {
                                exps[x] = e2[slot + 1];
                            }
                            half.add(exps, prod.clone() * w);
                        }
                    }
                }
            }
        }
        for (e, c) in half.terms {
            out.add(e, c.scale(&rat(1, 2)));
        }
        out
    }
}

/// `V_{g,n}` by Mirzakhani's recursion.
pub fn volume(g: usize, n: usize) -> VolumePolynomial {
    VolumeRecursion::new().volume(g, n)
}

/// The Airy structure whose amplitudes are the coefficients of `V_{g,n}` in `L^{2k⃗}`:
///
/// ```text
/// A^i_{jk} = δ_{i,j,k,0}
/// B^i_{jk} = (2k+1)! / ((2i+1)!(2j+1)!) · (2j+1) · θ_{k−i−j}
/// C^i_{jk} = (2j+1)!(2k+1)! / (2i+1)! · θ_{j+k+1−i}
/// D^i      = π²/12 · δ_{i,0} + 1/48 · δ_{i,1}
/// ```
pub fn mirzakhani_airy(max_grade: usize) -> AiryStructure<PiPoly> {
    let n = max_grade;
    let mut s = AiryStructure::zero(IndexSet::Graded { max_grade: n, block: 1 });
    s.set_a(0, 0, 0, PiPoly::one());
    for i in 0..=n {
        for j in 0..=n {
            for k in 0..=n {
                let r = k as i64 - i as i64 - j as i64;
                if r >= -1 {
                    let w = fact(2 * k + 1) / (fact(2 * i + 1) * fact(2 * j + 1)) * rat(2 * j as i64 + 1, 1);
                    s.set_b(i, j, k, theta_coefficient(r).scale(&w));
                }
                let r = (j + k + 1) as i64 - i as i64;
                if j <= k && r >= -1 {
                    let w = fact(2 * j + 1) * fact(2 * k + 1) / fact(2 * i + 1);
                    s.set_c(i, j, k, theta_coefficient(r).scale(&w));
                }
            }
        }
    }
    s.set_d(0, PiPoly::monomial(1, rat(1, 12)));
    if n >= 1 {
        s.set_d(1, PiPoly::constant(rat(1, 48)));
    }
    s.set_sparsity(Some(Sparsity::witten_kontsevich()));
    s
}

/// Truncation needed for exact amplitudes up to `chi_max`.
pub fn airy_truncation(chi_max: usize) -> usize {
    crate::loopspace::wk_truncation(chi_max).max(1)
}

/// `V_{g,n}(L) = Σ_{k⃗} F_{g,n}[k⃗] L^{2k⃗}` from an amplitude table.
pub fn volume_from_table(table: &AmplitudeTable<PiPoly>, g: usize, n: usize) -> VolumePolynomial {
    let mut v = VolumePolynomial::new(g, n);
    for (idx, c) in table.nonzero(g, n) {
        for perm in distinct_permutations(idx) {
            v.add(perm.iter().map(|&k| k as u32).collect(), c.clone());
        }
    }
    v
}

fn distinct_permutations(sorted: &[usize]) -> Vec<Vec<usize>> {
    fn rec(counts: &mut BTreeMap<usize, usize>, len: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        let keys: Vec<usize> = counts.iter().filter(|(_, &c)| c > 0).map(|(&k, _)| k).collect();
        for k in keys {
            *counts.get_mut(&k).expect("present") -= 1;
            cur.push(k);
            rec(counts, len, cur, out);
            cur.pop();
            *counts.get_mut(&k).expect("present") += 1;
        }
    }
    let mut counts = BTreeMap::new();
    for &k in sorted {
        *counts.entry(k).or_insert(0) += 1;
    }
    let mut out = Vec::new();
    rec(&mut counts, sorted.len(), &mut Vec::new(), &mut out);
    out
}

/// Volumes for all cells up to `chi_max` through the Airy structure.
pub fn volumes_via_airy(chi_max: usize) -> Result<Vec<VolumePolynomial>, Error> {
    let table = tr::compute(&mirzakhani_airy(airy_truncation(chi_max)), chi_max)?;
    Ok((1..=chi_max).flat_map(cells_at).map(|(g, n)| volume_from_table(&table, g, n)).collect())
}

/// `f(z) = −2 ln(1 + e^{−z/2})`, evaluated without overflow for negative `z`.
pub fn kernel_f(z: f64) -> f64 {
    if z >= 0.0 {
        -2.0 * (-z / 2.0).exp().ln_1p()
    } else {
        z - 2.0 * (z / 2.0).exp().ln_1p()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureResult {
    pub numeric: f64,
    pub exact: f64,
    pub relative_error: f64,
    pub estimated_error: f64,
    pub cutoff: f64,
}

/// Integrates `ℓ^{2k+1}(f(ℓ+x) − f(ℓ−x))` over `(0, ℓ_max)` and compares with `H_k(x)`.
///
/// Beyond `ℓ_max` the integrand is bounded by `2e^{x/2} ℓ^{2k+1} e^{−ℓ/2}`,
/// whose tail integral is kept below `10⁻¹²` of the running total.
pub fn quadrature_check(k: usize, x: f64) -> Result<QuadratureResult, Error> {
    if k > 6 {
        return Err(Error::invalid("quadrature_check supports k ≤ 6"));
    }
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::invalid("x must be positive"));
    }
    let p = (2 * k + 1) as i32;
    let integrand = |l: f64| l.powi(p) * (kernel_f(l + x) - kernel_f(l - x));
    let step = 8.0;
    let mut total: f64 = 0.0;
    let mut error: f64 = 0.0;
    let mut upper: f64 = 0.0;
    let tail_bound = |l: f64| {
        let pf = f64::from(p);
        2.0 * (x / 2.0).exp() * 2.0 * l.powf(pf) * (-l / 2.0).exp() / (1.0 - 2.0 * pf / l)
    };
    loop {
        let out = quadrature::integrate(integrand, upper, upper + step, 1e-15 * total.abs().max(1.0));
        total += out.integral;
        error += out.error_estimate;
        upper += step;
        if upper > 4.0 * f64::from(p) + 2.0 && tail_bound(upper) < 1e-12 * total.abs() {
            break;
        }
        if upper > 2000.0 {
            return Err(Error::Internal(format!("quadrature did not converge, estimated error {error:e}")));
        }
    }
    let exact = h_polynomial(k).eval_f64(x);
    Ok(QuadratureResult {
        numeric: total,
        exact,
        relative_error: ((total - exact) / exact).abs(),
        estimated_error: error,
        cutoff: upper,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::int;

    fn pp(terms: &[(u32, Rational)]) -> PiPoly {
        terms.iter().fold(PiPoly::zero(), |acc, (d, r)| acc + PiPoly::monomial(*d, r.clone()))
    }

    #[test]
    fn h_polynomials() {
        let h0 = h_polynomial(0);
        assert_eq!(h0.coeff(3), PiPoly::constant(rat(1, 6)));
        assert_eq!(h0.coeff(1), PiPoly::monomial(1, rat(2, 3)));
        let h1 = h_polynomial(1);
        assert_eq!(h1.coeff(5), PiPoly::constant(rat(6, 120)));
        assert_eq!(h1.coeff(3), PiPoly::monomial(1, rat(6 * 2, 3 * 6)));
        assert_eq!(h1.coeff(1), PiPoly::monomial(2, rat(6 * 14, 45)));
        for k in 0..6 {
            let h = h_polynomial(k);
            assert_eq!(h.degree() as usize, 2 * k + 3);
            assert_eq!(h.coeff(h.degree()), PiPoly::constant(fact(2 * k + 1) / fact(2 * k + 3)));
            assert!(h.coeffs.keys().all(|p| p % 2 == 1));
        }
    }

    #[test]
    fn transforms() {
        let b0 = b_transform(0);
        assert_eq!(b0[&(1, 0)], PiPoly::constant(rat(1, 6)));
        assert_eq!(b0[&(0, 1)], PiPoly::constant(rat(1, 2)));
        assert_eq!(b0[&(0, 0)], PiPoly::monomial(1, rat(2, 3)));
        let c00 = c_transform(0, 0);
        let h1 = h_polynomial(1);
        for (p, c) in &c00 {
            assert_eq!(*c, h1.coeff(2 * p + 1).scale(&rat(1, 6)));
        }
        assert_eq!(c_transform(1, 2).keys().max(), Some(&5));
    }

    #[test]
    fn small_volumes() {
        let mut rec = VolumeRecursion::new();
        assert_eq!(rec.volume(0, 3).terms.len(), 1);
        let v04 = rec.volume(0, 4);
        assert_eq!(v04.coeff(&[0, 0, 0, 0]), PiPoly::monomial(1, int(2)));
        assert_eq!(v04.coeff(&[1, 0, 0, 0]), PiPoly::constant(rat(1, 2)));
        assert_eq!(v04.coeff(&[0, 0, 1, 0]), PiPoly::constant(rat(1, 2)));
        assert_eq!(v04.terms.len(), 5);
        // (L₁² + L₂² + 4π²)(L₁² + L₂² + 12π²)/192
        let v12 = rec.volume(1, 2);
        assert_eq!(v12.coeff(&[0, 0]), pp(&[(2, rat(48, 192))]));
        assert_eq!(v12.coeff(&[1, 0]), pp(&[(1, rat(16, 192))]));
        assert_eq!(v12.coeff(&[1, 1]), pp(&[(0, rat(2, 192))]));
        assert_eq!(v12.coeff(&[2, 0]), pp(&[(0, rat(1, 192))]));
        let v21 = rec.volume(2, 1);
        assert_eq!(v21.coeff(&[0]), pp(&[(4, rat(29, 192))]));
        assert_eq!(v21.coeff(&[4]), pp(&[(0, rat(1, 442368))]));
        for (g, n) in [(0, 4), (1, 2), (0, 5), (1, 3), (2, 1)] {
            let v = rec.volume(g, n);
            assert!(v.is_symmetric(), "({g},{n})");
            assert!(v.has_expected_grading(), "({g},{n})");
        }
    }

    #[test]
    fn two_pipelines() {
        let mut rec = VolumeRecursion::new();
        for v in volumes_via_airy(3).unwrap() {
            assert_eq!(v, rec.volume(v.g, v.n), "({},{})", v.g, v.n);
        }
    }

    #[test]
    fn structure_is_consistent() {
        let s = mirzakhani_airy(4);
        let rep = s.check_relations().unwrap();
        assert!(rep.passed(), "{}", rep.summary());
        let mut printed = s.clone();
        printed.set_d(0, PiPoly::monomial(1, rat(1, 6)));
        printed.set_d(1, PiPoly::constant(rat(1, 24)));
        assert!(!printed.check_relations().unwrap().passed());
    }

    #[test]
    fn loop_basis_conjugation() {
        // Rescaling e_i by 2^i i! turns factorials into double factorials.
        let n = 6;
        let phi = crate::linalg::Matrix::from_fn(n + 1, n + 1, |i, j| {
            if i == j {
                Rational::from_integer(num_bigint::BigInt::from(2).pow(i as u32) * factorial(i as u64))
            } else {
                Rational::zero()
            }
        });
        let conj = crate::airy::change_basis(&mirzakhani_airy(n), &phi).unwrap();
        let m = conj.index_set().max_grade().unwrap();
        assert!(m >= 2);
        let theta = crate::loopspace::build_theta_airy(&crate::loopspace::ThetaSeries::mirzakhani(), m).unwrap();
        assert_eq!(conj.a_entries(), theta.a_entries());
        assert_eq!(conj.b_entries(), theta.b_entries());
        assert_eq!(conj.c_entries(), theta.c_entries());
        assert_eq!(conj.d_entries(), theta.d_entries());
    }

    #[test]
    fn kernel_identities() {
        let z = 1.7;
        assert!((kernel_f(z) - kernel_f(-z) - z).abs() < 1e-15);
        assert!((kernel_f(-800.0) + 800.0).abs() < 1e-12);
    }

    #[test]
    fn quadrature() {
        for (k, x) in [(0, 1.0), (2, 0.5), (4, 2.0)] {
            let r = quadrature_check(k, x).unwrap();
            assert!(r.relative_error < 1e-8, "{k} {x} {r:?}");
        }
        assert!(quadrature_check(7, 1.0).is_err());
        assert!(quadrature_check(0, -1.0).is_err());
    }

    #[test]
    fn renderings() {
        let v = volume(1, 1);
        assert_eq!(v.to_latex(), "\\frac{1}{48} L_{1}^{2} + \\frac{1}{12}\\pi^{2}");
        assert!(v.to_csv().starts_with("exponents,value_rational,value_pi2_degree_1\n"));
        assert_eq!(distinct_permutations(&[0, 0, 1]).len(), 3);
    }
}
