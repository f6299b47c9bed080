//! Givental's R̂ and T̂ actions on partition functions, realized as operations
//! on quantum Airy structures, and the reconstruction of semisimple CohFTs.
//!
//! Coordinates are indexed by `(k, α)` with `k` the power of `z` (equivalently
//! the ψ-class degree) and `α` an idempotent, stored at `k·dim + α`.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde_json::Value;

use crate::airy::{change_basis, direct_sum, quadratic_shift, translate, AiryStructure};
use crate::coeff::{bernoulli_numbers, binomial, factorial, parse_rational, rat, Rational};
use crate::frobenius::FrobeniusAlgebra;
use crate::linalg::Matrix;
use crate::loopspace::{psi_intersection, witten_kontsevich};
use crate::poly::Poly;
use crate::tr::{cells_at, Key};
use crate::Error;

/// `R(z) = Σ R_m z^m`, known through `z^order`. Coefficients past the stored
/// ones and up to the order are zero.
#[derive(Clone, Debug, PartialEq)]
pub struct RSeries {
    algebra: FrobeniusAlgebra,
    coeffs: Vec<Matrix<Rational>>,
    order: usize,
}

impl RSeries {
    /// Validates `R₀ = Id` and `R(z)R†(−z) = Id` through the order.
    pub fn new(algebra: FrobeniusAlgebra, coeffs: Vec<Matrix<Rational>>, order: usize) -> Result<Self, Error> {
        let r = Self::unchecked(algebra, coeffs, order)?;
        if let Some((k, detail)) = r.symplectic_defect() {
            return Err(Error::Symplectic { order: k, detail });
        }
        Ok(r)
    }

    /// An exact matrix polynomial.
    pub fn polynomial(algebra: FrobeniusAlgebra, coeffs: Vec<Matrix<Rational>>) -> Result<Self, Error> {
        Self::new(algebra, coeffs, usize::MAX)
    }

    /// Checks shapes and `R₀ = Id` only.
    pub fn unchecked(algebra: FrobeniusAlgebra, coeffs: Vec<Matrix<Rational>>, order: usize) -> Result<Self, Error> {
        let d = algebra.dim();
        if coeffs.iter().any(|m| m.rows() != d || m.cols() != d) {
            return Err(Error::invalid(format!("R coefficients must be {d}x{d}")));
        }
        match coeffs.first() {
            Some(r0) if *r0 == Matrix::identity(d) => {}
            _ => return Err(Error::invalid("R₀ must be the identity")),
        }
        if coeffs.len() > order.saturating_add(1) {
            return Err(Error::invalid("more coefficients than the stated order"));
        }
        Ok(RSeries { algebra, coeffs, order })
    }

    pub fn identity(algebra: FrobeniusAlgebra) -> Self {
        let d = algebra.dim();
        RSeries { algebra, coeffs: vec![Matrix::identity(d)], order: usize::MAX }
    }

    /// `exp(Σ_{m≥1} r_m z^m)` through `z^order`, with `generators[m−1] = r_m`.
    pub fn exp_of(algebra: FrobeniusAlgebra, generators: &[Matrix<Rational>], order: usize) -> Result<Self, Error> {
        let d = algebra.dim();
        let mut x = vec![Matrix::zeros(d, d)];
        x.extend(generators.iter().take(order).cloned());
        if x.iter().any(|m| m.rows() != d || m.cols() != d) {
            return Err(Error::invalid(format!("generators must be {d}x{d}")));
        }
        let mut result = vec![Matrix::identity(d)];
        let mut power = vec![Matrix::identity(d)];
        for k in 1..=order {
            let inv_k = rat(1, k as i64);
            power = series_mul(&power, &x, order)?.iter().map(|c| c.scale(&inv_k)).collect();
            if power.iter().all(Matrix::is_zero) {
                break;
            }
            for (m, c) in power.iter().enumerate() {
                if result.len() <= m {
                    result.push(Matrix::zeros(d, d));
                }
                result[m] = result[m].add(c)?;
            }
        }
        while result.len() > 1 && result.last().is_some_and(Matrix::is_zero) {
            result.pop();
        }
        Self::new(algebra, result, order)
    }

    /// The one-dimensional series `exp(−Σ_{k≥1} B_{2k}/(2k(2k−1)) z^{2k−1})`
    /// whose action on Witten–Kontsevich inserts the Hodge class `c(E)`.
    pub fn hodge(order: usize) -> Self {
        let b = bernoulli_numbers(order + 1);
        let gens: Vec<Matrix<Rational>> = (1..=order)
            .map(|m| {
                let v = if m % 2 == 1 {
                    let k = m.div_ceil(2);
                    -&b[2 * k] / Rational::from_integer(((2 * k) * (2 * k - 1)).into())
                } else {
                    Rational::zero()
                };
                Matrix::from_fn(1, 1, |_, _| v.clone())
            })
            .collect();
        let algebra = FrobeniusAlgebra::a_delta(Rational::one()).expect("Δ = 1");
        Self::exp_of(algebra, &gens, order).expect("odd exponents are symplectic")
    }

    pub fn algebra(&self) -> &FrobeniusAlgebra {
        &self.algebra
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn is_identity(&self) -> bool {
        self.coeffs.iter().skip(1).all(Matrix::is_zero)
    }

    pub fn coeff(&self, m: usize) -> Result<Matrix<Rational>, Error> {
        if m > self.order {
            return Err(Error::Truncation(format!("R is known through z^{}, z^{m} requested", self.order)));
        }
        Ok(self.coeffs.get(m).cloned().unwrap_or_else(|| Matrix::zeros(self.dim(), self.dim())))
    }

    /// `R†_m = b⁻¹ R_mᵀ b`.
    pub fn adjoint(&self, m: usize) -> Result<Matrix<Rational>, Error> {
        let b = self.algebra.pairing();
        b.inverse()?.mul(&self.coeff(m)?.transpose())?.mul(b)
    }

    /// First order at which `Σ_{a+c=k} (−1)^c R_a R†_c` differs from `δ_{k,0}`.
    pub fn symplectic_defect(&self) -> Option<(usize, String)> {
        let top = self.order.min(2 * (self.coeffs.len() - 1));
        for k in 1..=top {
            let mut acc = Matrix::zeros(self.dim(), self.dim());
            for a in 0..=k {
                let term = self.coeff(a).ok()?.mul(&self.adjoint(k - a).ok()?).ok()?;
                let term = if (k - a) % 2 == 1 { term.neg() } else { term };
                acc = acc.add(&term).ok()?;
            }
            if !acc.is_zero() {
                return Some((k, format!("coefficient of z^{k} in R(z)R†(−z) is non-zero")));
            }
        }
        None
    }
}

fn series_mul(a: &[Matrix<Rational>], b: &[Matrix<Rational>], order: usize) -> Result<Vec<Matrix<Rational>>, Error> {
    let d = a[0].rows();
    let len = (a.len() + b.len() - 1).min(order + 1);
    let mut out = vec![Matrix::zeros(d, d); len];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            if i + j < len && !x.is_zero() && !y.is_zero() {
                out[i + j] = out[i + j].add(&x.mul(y)?)?;
            }
        }
    }
    Ok(out)
}

/// `T(z) = z(Id − R(z))𝟏`, with components `T_m` for `m ≥ 2`.
#[derive(Clone, Debug, PartialEq)]
pub struct TVector {
    pub dim: usize,
    pub coeffs: BTreeMap<usize, Vec<Rational>>,
}

impl TVector {
    pub fn component(&self, m: usize) -> Vec<Rational> {
        self.coeffs.get(&m).cloned().unwrap_or_else(|| vec![Rational::zero(); self.dim])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.values().all(|v| v.iter().all(Zero::is_zero))
    }

    /// Flattened onto the graded index set with the given maximal grade.
    pub fn to_coordinates(&self, max_grade: usize) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); (max_grade + 1) * self.dim];
        for (&m, v) in self.coeffs.range(..=max_grade) {
            for (a, x) in v.iter().enumerate() {
                out[m * self.dim + a] = x.clone();
            }
        }
        out
    }
}

/// `T_m = −R_{m−1}𝟏` for `2 ≤ m ≤ max_grade`.
pub fn t_from_r(r: &RSeries, max_grade: usize) -> Result<TVector, Error> {
    let unit = r.algebra().unit();
    let mut coeffs = BTreeMap::new();
    for m in 2..=max_grade {
        let rm = r.coeff(m - 1)?;
        let v: Vec<Rational> =
            (0..r.dim()).map(|i| -(0..r.dim()).fold(Rational::zero(), |acc, j| acc + &rm[(i, j)] * &unit[j])).collect();
        if v.iter().any(|x| !x.is_zero()) {
            coeffs.insert(m, v);
        }
    }
    Ok(TVector { dim: r.dim(), coeffs })
}

/// `u_{(i,k),(j,l)}`: the coefficient of `z₁^k z₂^l` in
/// `B(z₁,z₂) = (b⁻¹ − R(z₁)b⁻¹R(z₂)ᵀ)/(z₁+z₂)`, for `k, l ≤ max_grade`.
pub fn b_bivector(r: &RSeries, max_grade: usize) -> Result<Matrix<Rational>, Error> {
    let d = r.dim();
    let top = 2 * max_grade + 1;
    if r.order() < top {
        return Err(Error::Truncation(format!("the bivector through grade {max_grade} needs R through z^{top}")));
    }
    let binv = r.algebra().pairing().inverse()?;
    let coeffs: Vec<Matrix<Rational>> = (0..=top).map(|m| r.coeff(m)).collect::<Result<_, _>>()?;
    let left: Vec<Matrix<Rational>> = coeffs.iter().map(|c| c.mul(&binv)).collect::<Result<_, _>>()?;
    let numerator = |k: usize, l: usize| -> Result<Matrix<Rational>, Error> {
        let prod = left[k].mul(&coeffs[l].transpose())?;
        if k == 0 && l == 0 {
            binv.add(&prod.neg())
        } else {
            Ok(prod.neg())
        }
    };
    // Division by z₁+z₂ along each anti-diagonal k+l = s.
    let mut quotient: BTreeMap<(usize, usize), Matrix<Rational>> = BTreeMap::new();
    for s in 0..=top {
        let mut prev = Matrix::zeros(d, d);
        for k in 0..s {
            let q = numerator(k, s - k)?.add(&prev.neg())?;
            quotient.insert((k, s - 1 - k), q.clone());
            prev = q;
        }
        if numerator(s, 0)? != prev {
            return Err(Error::Symplectic {
                order: s,
                detail: format!("division by z₁+z₂ leaves a remainder in total degree {s}"),
            });
        }
    }
    let n = (max_grade + 1) * d;
    let mut u = Matrix::zeros(n, n);
    for k in 0..=max_grade {
        for l in 0..=max_grade {
            let q = &quotient[&(k, l)];
            for i in 0..d {
                for j in 0..d {
                    u[(k * d + i, l * d + j)] = q[(i, j)].clone();
                }
            }
        }
    }
    Ok(u)
}

/// `Φ_{(i,k),(j,l)} = (R_{l−k})_{ji}`, so that a leg carrying `e_i ψ^k`
/// becomes `Σ_m R_m e_i ψ^{k+m}`.
pub fn r_matrix(r: &RSeries, max_grade: usize) -> Result<Matrix<Rational>, Error> {
    let d = r.dim();
    let coeffs: Vec<Matrix<Rational>> = (0..=max_grade).map(|m| r.coeff(m)).collect::<Result<_, _>>()?;
    Ok(Matrix::from_fn((max_grade + 1) * d, (max_grade + 1) * d, |a, b| {
        let (k, i) = (a / d, a % d);
        let (l, j) = (b / d, b % d);
        if l >= k {
            coeffs[l - k][(j, i)].clone()
        } else {
            Rational::zero()
        }
    }))
}

/// Witten–Kontsevich with `ħ → ħΔ²` and `x → Δx`, i.e. `F_{g,n} ↦ Δ^{2g−2+n}F_{g,n}`.
pub fn scale_wk(delta: &Rational, max_grade: usize) -> Result<AiryStructure<Rational>, Error> {
    if delta.is_zero() {
        return Err(Error::invalid("Δ must be non-zero"));
    }
    Ok(witten_kontsevich::<Rational>(max_grade).scaled(delta))
}

/// Input truncation for which the composite still has exact grades up to `max_grade`.
pub fn internal_truncation(max_grade: usize) -> usize {
    let before_rotation = 2 * max_grade + 2;
    let before_shift = before_rotation + 1;
    2 * before_shift + 3
}

/// Order of `R` needed by [`semisimple_airy`].
pub fn required_order(max_grade: usize) -> usize {
    2 * internal_truncation(max_grade) + 1
}

/// The structure whose amplitudes are the correlators of the CohFT obtained
/// from `⊕_α Δ_α^{2g−2+n} WK` by translating with `T`, then applying the
/// edge bivector and finally the leg action of `R`.
pub fn semisimple_airy(deltas: &[Rational], r: &RSeries, max_grade: usize) -> Result<AiryStructure<Rational>, Error> {
    let algebra = FrobeniusAlgebra::diagonal(deltas.to_vec())?;
    if *r.algebra() != algebra {
        return Err(Error::invalid("R must be given on the algebra of the Δ-list, in its idempotent basis"));
    }
    let n0 = internal_truncation(max_grade);
    let parts: Vec<_> = deltas.iter().map(|d| scale_wk(d, n0)).collect::<Result<_, _>>()?;
    let base = direct_sum(&parts)?;
    if r.is_identity() {
        return Ok(base.truncate(max_grade));
    }
    let moved = translate(&base, &t_from_r(r, n0)?.to_coordinates(n0))?;
    let m1 = moved.index_set().max_grade().unwrap_or(0);
    let shifted = quadratic_shift(&moved, &b_bivector(r, m1)?)?;
    let m2 = shifted.index_set().max_grade().unwrap_or(0);
    let out = change_basis(&shifted, &r_matrix(r, m2)?)?;
    if out.index_set().max_grade().unwrap_or(0) < max_grade {
        return Err(Error::Internal("internal truncation too small".into()));
    }
    Ok(out.truncate(max_grade))
}

/// A CohFT description read from JSON: idempotent weights and either the
/// coefficients `R₁, R₂, …` of a matrix polynomial (`"r"`) or generators
/// `r₁, r₂, …` of `R = exp(Σ r_m z^m)` (`"log_r"`). Scalars are integers or
/// rational strings.
#[derive(Clone, Debug, PartialEq)]
pub struct CohftSpec {
    pub deltas: Vec<Rational>,
    pub r: RInput,
}

#[derive(Clone, Debug, PartialEq)]
pub enum RInput {
    Polynomial(Vec<Matrix<Rational>>),
    Exponential(Vec<Matrix<Rational>>),
}

fn scalar(v: &Value) -> Result<Rational, Error> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) => n
            .as_i64()
            .map(|i| Rational::from_integer(i.into()))
            .ok_or_else(|| Error::parse(format!("expected an integer or rational string, got {n}"))),
        other => Err(Error::parse(format!("expected a scalar, got {other}"))),
    }
}

fn matrix(v: &Value, d: usize) -> Result<Matrix<Rational>, Error> {
    let rows = v.as_array().ok_or_else(|| Error::parse("expected a matrix"))?;
    let rows: Vec<Vec<Rational>> = rows
        .iter()
        .map(|r| r.as_array().ok_or_else(|| Error::parse("expected a matrix row"))?.iter().map(scalar).collect())
        .collect::<Result<_, _>>()?;
    let m = Matrix::from_rows(rows).map_err(|e| Error::parse(e.to_string()))?;
    if m.rows() != d || m.cols() != d {
        return Err(Error::parse(format!("R matrices must be {d}x{d}")));
    }
    Ok(m)
}

impl CohftSpec {
    pub fn from_json(v: &Value) -> Result<Self, Error> {
        let deltas: Vec<Rational> = v
            .get("deltas")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::parse("missing \"deltas\""))?
            .iter()
            .map(scalar)
            .collect::<Result<_, _>>()?;
        if deltas.is_empty() {
            return Err(Error::parse("\"deltas\" is empty"));
        }
        let d = deltas.len();
        let list = |key: &str| -> Result<Option<Vec<Matrix<Rational>>>, Error> {
            match v.get(key) {
                None => Ok(None),
                Some(x) => x
                    .as_array()
                    .ok_or_else(|| Error::parse(format!("\"{key}\" must be a list of matrices")))?
                    .iter()
                    .map(|m| matrix(m, d))
                    .collect::<Result<Vec<_>, _>>()
                    .map(Some),
            }
        };
        let r = match (list("r")?, list("log_r")?) {
            (Some(_), Some(_)) => return Err(Error::parse("give either \"r\" or \"log_r\", not both")),
            (Some(p), None) => RInput::Polynomial(p),
            (None, Some(e)) => RInput::Exponential(e),
            (None, None) => RInput::Polynomial(Vec::new()),
        };
        Ok(CohftSpec { deltas, r })
    }

    pub fn r_series(&self, order: usize) -> Result<RSeries, Error> {
        let algebra = FrobeniusAlgebra::diagonal(self.deltas.clone())?;
        let d = self.deltas.len();
        match &self.r {
            RInput::Polynomial(ms) => {
                let mut coeffs = vec![Matrix::identity(d)];
                coeffs.extend(ms.iter().cloned());
                RSeries::polynomial(algebra, coeffs)
            }
            RInput::Exponential(gens) => RSeries::exp_of(algebra, gens, order),
        }
    }

    pub fn airy(&self, max_grade: usize) -> Result<AiryStructure<Rational>, Error> {
        let r = self.r_series(required_order(max_grade))?;
        semisimple_airy(&self.deltas, &r, max_grade)
    }
}

/// Amplitudes of `exp(r x∂) exp(ħ/2 u∂∂) T̂ Z` computed directly on truncated
/// formal series, for cells with `χ ≤ chi_max` and indices of grade `≤ max_grade`.
///
/// The series carry one extra variable `ε` recording `2g−2+n` of each
/// connected term; all three operations are homogeneous for it except the
/// translation, which lowers it by one per substituted `T`. Terms pushed to
/// `ε⁰` or below are the normalization constants `F₀(T)`, `F₁(T)` and the
/// genus-zero `∂F₀(T)x`, `½x∂²F₀(T)x` pieces, and are subtracted.
pub fn oracle_amplitudes(
    deltas: &[Rational],
    r: &RSeries,
    chi_max: usize,
    max_grade: usize,
) -> Result<BTreeMap<Key, Rational>, Error> {
    let d = deltas.len();
    let cells = |chi: usize| (1..=chi).flat_map(cells_at).collect::<Vec<_>>();
    let top_degree = |chi: usize| cells(chi).iter().map(|&(g, n)| 3 * g + n - 3).max().unwrap_or(0);
    let chi_old = chi_max + top_degree(chi_max);
    let k_max = top_degree(chi_old);
    let nx = (k_max + 1) * d;
    let eps = nx;
    let nvars = nx + 1;
    let keep_low = move |e: &[u32]| e[eps] as usize <= chi_max;

    let mut f = Poly::<Rational>::zero(nvars);
    for (g, n) in cells(chi_old) {
        let chi = 2 * g + n - 2;
        for ks in partitions(3 * g + n - 3, n) {
            let value = psi_intersection(g, &ks)?;
            if value.is_zero() {
                continue;
            }
            let sym: Rational = multiplicities(&ks).iter().map(|&m| Rational::from_integer(factorial(m as u64))).product();
            for (a, delta) in deltas.iter().enumerate() {
                let mut e = vec![0u32; nvars];
                for &k in &ks {
                    e[k * d + a] += 1;
                }
                e[eps] = chi as u32;
                let weight: Rational = (0..chi).map(|_| delta.clone()).product();
                f.add_term(e, &value * weight / &sym);
            }
        }
    }

    let t = t_from_r(r, k_max)?.to_coordinates(k_max);
    let mut f1 = Poly::zero(nvars);
    for (e, c) in f.terms() {
        expand_translation(e, c, &t, nx, &mut f1);
    }
    let f1 = f1.truncate(keep_low);

    let z = f1.exp_truncated(keep_low, chi_max);
    let u = b_bivector(r, k_max)?;
    let mut shifted = z.clone();
    let mut term = z;
    for j in 1.. {
        term = apply_laplacian(&term, &u, nx).scale(&rat(1, j));
        if term.is_zero() {
            break;
        }
        shifted.add_assign(&term);
    }
    let f2 = shifted.log_truncated(keep_low, chi_max);

    let phi = r_matrix(r, k_max)?;
    let images: Vec<Poly<Rational>> = (0..nx)
        .map(|b| {
            let mut p = Poly::zero(nvars);
            for a in 0..nx {
                if !phi[(a, b)].is_zero() {
                    p.add_assign(&Poly::var(nvars, a).scale(&phi[(a, b)]));
                }
            }
            p
        })
        .collect();
    let mut f3 = Poly::zero(nvars);
    for (e, c) in f2.terms() {
        let mut eps_part = vec![0u32; nvars];
        eps_part[eps] = e[eps];
        let mut prod = monomial(nvars, eps_part).scale(c);
        for (b, &p) in e[..nx].iter().enumerate() {
            for _ in 0..p {
                prod = prod.mul(&images[b]);
            }
        }
        f3.add_assign(&prod);
    }

    let mut out = BTreeMap::new();
    for (e, c) in f3.terms() {
        let chi = e[eps] as usize;
        let n: usize = e[..nx].iter().map(|&x| x as usize).sum();
        if n == 0 || chi > chi_max || (chi + 2) < n || (chi + 2 - n) % 2 == 1 {
            continue;
        }
        let g = (chi + 2 - n) / 2;
        let mut idx = Vec::new();
        let mut value = c.clone();
        for (a, &p) in e[..nx].iter().enumerate() {
            idx.extend(std::iter::repeat_n(a, p as usize));
            value *= Rational::from_integer(factorial(p as u64));
        }
        if idx.iter().all(|&a| a / d <= max_grade) {
            out.insert((g, idx), value);
        }
    }
    Ok(out)
}

fn monomial(nvars: usize, e: Vec<u32>) -> Poly<Rational> {
    let mut p = Poly::zero(nvars);
    p.add_term(e, Rational::one());
    p
}

/// `½ Σ u_{ab} ∂_a∂_b P`.
fn apply_laplacian(p: &Poly<Rational>, u: &Matrix<Rational>, nx: usize) -> Poly<Rational> {
    let mut out = Poly::zero(p.nvars());
    let half = rat(1, 2);
    for (e, c) in p.terms() {
        let support: Vec<usize> = (0..nx).filter(|&a| e[a] > 0).collect();
        for &a in &support {
            for &b in &support {
                let uv = &u[(a, b)];
                if uv.is_zero() || (a == b && e[a] < 2) {
                    continue;
                }
                let mut e2 = e.clone();
                let mut w = Rational::from_integer(e2[a].into());
                e2[a] -= 1;
                w *= Rational::from_integer(e2[b].into());
                e2[b] -= 1;
                out.add_term(e2, c * uv * &w * &half);
            }
        }
    }
    out
}

/// Adds the terms of `c·x^e` after `x_a → x_a + T_a ε⁻¹` that keep `ε ≥ 1`.
fn expand_translation(e: &[u32], c: &Rational, t: &[Rational], nx: usize, out: &mut Poly<Rational>) {
    let eps = nx;
    let slots: Vec<usize> = (0..nx).filter(|&a| e[a] > 0).collect();
    fn rec(
        pos: usize,
        slots: &[usize],
        e: &mut Vec<u32>,
        coeff: Rational,
        t: &[Rational],
        eps: usize,
        out: &mut Poly<Rational>,
    ) {
        if pos == slots.len() {
            if e[eps] >= 1 {
                out.add_term(e.clone(), coeff);
            }
            return;
        }
        let a = slots[pos];
        let total = e[a];
        let max_sub = if t[a].is_zero() { 0 } else { total };
        let mut tpow = Rational::one();
        for j in 0..=max_sub {
            if j > e[eps] {
                break;
            }
            let w = Rational::from_integer(binomial(total as u64, j as u64)) * &tpow;
            e[a] = total - j;
            e[eps] -= j;
            rec(pos + 1, slots, e, &coeff * w, t, eps, out);
            e[eps] += j;
            e[a] = total;
            tpow *= &t[a];
        }
    }
    let mut e = e.to_vec();
    rec(0, &slots, &mut e, c.clone(), t, eps, out);
}

/// Non-decreasing sequences of length `n` with the given sum.
fn partitions(sum: usize, n: usize) -> Vec<Vec<usize>> {
    fn rec(sum: usize, n: usize, min: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if n == 0 {
            if sum == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for k in min..=sum / n.max(1) {
            cur.push(k);
            rec(sum - k, n - 1, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(sum, n, 0, &mut Vec::new(), &mut out);
    out
}

fn multiplicities(ks: &[usize]) -> Vec<usize> {
    let mut m: BTreeMap<usize, usize> = BTreeMap::new();
    for &k in ks {
        *m.entry(k).or_default() += 1;
    }
    m.into_values().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::int;
    use crate::tr;

    fn m1(x: Rational) -> Matrix<Rational> {
        Matrix::from_fn(1, 1, |_, _| x.clone())
    }

    fn odd_r(order: usize) -> RSeries {
        let gens = vec![m1(rat(1, 3)), m1(int(0)), m1(rat(-1, 2))];
        RSeries::exp_of(FrobeniusAlgebra::a_delta(int(1)).unwrap(), &gens, order).unwrap()
    }

    #[test]
    fn partitions_and_multiplicities() {
        assert_eq!(partitions(2, 3), vec![vec![0, 0, 2], vec![0, 1, 1]]);
        assert_eq!(partitions(0, 2), vec![vec![0, 0]]);
        assert_eq!(multiplicities(&[0, 0, 3]), vec![2, 1]);
    }

    #[test]
    fn t_vector() {
        let alg = FrobeniusAlgebra::a_delta(int(1)).unwrap();
        assert!(t_from_r(&RSeries::identity(alg.clone()), 6).unwrap().is_zero());
        let r = RSeries::unchecked(alg, vec![m1(int(1)), m1(rat(2, 5))], 5).unwrap();
        let t = t_from_r(&r, 5).unwrap();
        assert_eq!(t.component(2), vec![rat(-2, 5)]);
        assert_eq!(t.component(3), vec![int(0)]);
        assert_eq!(t.component(1), vec![int(0)]);
        assert_eq!(t.to_coordinates(3), vec![int(0), int(0), rat(-2, 5), int(0)]);
    }

    #[test]
    fn symplectic_condition() {
        let alg = FrobeniusAlgebra::a_delta(int(1)).unwrap();
        let r = odd_r(9);
        assert!(r.symplectic_defect().is_none());
        // 1 + z is not symplectic in dimension one: (1+z)(1−z) = 1 − z².
        let bad = RSeries::polynomial(alg.clone(), vec![m1(int(1)), m1(int(1))]);
        assert!(matches!(bad, Err(Error::Symplectic { order: 2, .. })));
        assert!(RSeries::unchecked(alg, vec![m1(int(2))], 3).is_err());
    }

    #[test]
    fn bivector() {
        let alg = FrobeniusAlgebra::a_delta(int(1)).unwrap();
        assert!(b_bivector(&RSeries::identity(alg.clone()), 4).unwrap().is_zero());
        let r = odd_r(9);
        let u = b_bivector(&r, 4).unwrap();
        assert!(u.is_symmetric());
        // (1 − R(z₁)R(z₂))/(z₁+z₂) with R = exp(z/3 + …) starts with −1/3.
        assert_eq!(u[(0, 0)], rat(-1, 3));
        assert!(matches!(b_bivector(&r, 5), Err(Error::Truncation(_))));

        let mut coeffs: Vec<_> = (0..=9).map(|m| r.coeff(m).unwrap()).collect();
        coeffs[1] = m1(rat(1, 2));
        let broken = RSeries::unchecked(alg, coeffs, 9).unwrap();
        assert!(broken.symplectic_defect().is_some());
        assert!(matches!(b_bivector(&broken, 4), Err(Error::Symplectic { .. })));
    }

    #[test]
    fn scaled_wk() {
        assert!(scale_wk(&int(0), 3).is_err());
        let s = scale_wk(&int(3), 4).unwrap();
        let t = tr::compute(&s, 3).unwrap();
        assert_eq!(t.value(0, &[0, 0, 0]), int(3));
        assert_eq!(t.value(1, &[1]), rat(3, 24));
        assert_eq!(t.value(0, &[0, 0, 0, 1]), int(9));
        assert_eq!(t.value(2, &[4]), rat(27, 1152));
    }

    #[test]
    fn identity_reproduces_direct_sum() {
        let deltas = vec![int(2), rat(-1, 3)];
        let alg = FrobeniusAlgebra::diagonal(deltas.clone()).unwrap();
        let s = semisimple_airy(&deltas, &RSeries::identity(alg.clone()), 4).unwrap();
        let direct = direct_sum(&[scale_wk(&deltas[0], 4).unwrap(), scale_wk(&deltas[1], 4).unwrap()]).unwrap();
        let a = tr::compute(&s, 3).unwrap();
        let b = tr::compute(&direct, 3).unwrap();
        assert_eq!(a.entries(), b.entries());
        // The grade-zero sector is the TQFT of the algebra.
        let tqft = crate::frobenius::tqft_amplitude(&alg, 0, 3).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    let mut idx = vec![i, j, k];
                    idx.sort_unstable();
                    assert_eq!(&a.value(0, &idx), tqft.get(&[i, j, k]));
                }
            }
        }
    }

    #[test]
    fn hodge_class() {
        let r = RSeries::hodge(required_order(3));
        let s = semisimple_airy(&[int(1)], &r, 3).unwrap();
        let t = tr::compute(&s, 3).unwrap();
        // λ-classes vanish in genus zero.
        let wk = tr::compute(&witten_kontsevich::<Rational>(8), 3).unwrap();
        for n in 3..=5 {
            for idx in t.domain(0, n) {
                assert_eq!(t.value(0, &idx), wk.value(0, &idx), "{idx:?}");
            }
        }
        assert_eq!(t.value(1, &[0]), rat(1, 24));
        assert_eq!(t.value(1, &[0, 1]), rat(1, 24));
        assert_eq!(t.value(2, &[2]), rat(7, 5760));
        assert_eq!(t.value(2, &[3]), rat(1, 480));
    }

    #[test]
    fn flat_unit_dim2() {
        let deltas = vec![int(1), int(2)];
        let gens = vec![
            Matrix::from_rows(vec![vec![rat(1, 2), rat(1, 3)], vec![rat(1, 3), int(-1)]]).unwrap(),
            Matrix::from_rows(vec![vec![int(0), rat(1, 5)], vec![rat(-1, 5), int(0)]]).unwrap(),
        ];
        let alg = FrobeniusAlgebra::diagonal(deltas.clone()).unwrap();
        let unit = alg.unit().clone();
        let r = RSeries::exp_of(alg, &gens, required_order(3)).unwrap();
        let s = semisimple_airy(&deltas, &r, 3).unwrap();
        assert!(s.check_relations().unwrap().passed());
        let t = tr::compute(&s, 3).unwrap();
        let d = 2;
        // Σ_α 𝟏^α F[(k, α), i⃗]
        let with_unit = |g: usize, k: usize, rest: &[usize]| -> Rational {
            (0..d)
                .map(|a| {
                    let mut idx = rest.to_vec();
                    idx.push(k * d + a);
                    idx.sort_unstable();
                    &unit[a] * t.value(g, &idx)
                })
                .sum()
        };
        for a in 0..d {
            for b in 0..d {
                let expected = if a == b { int(1) } else { int(0) };
                assert_eq!(with_unit(0, 0, &[a, b]), expected);
            }
        }
        let mut checked = 0;
        for (g, n) in [(0, 3), (0, 4), (1, 1), (1, 2)] {
            for idx in t.domain(g, n) {
                let string: Rational = (0..n)
                    .filter(|&j| idx[j] >= d)
                    .map(|j| {
                        let mut lower = idx.clone();
                        lower[j] -= d;
                        lower.sort_unstable();
                        t.value(g, &lower)
                    })
                    .sum();
                assert_eq!(with_unit(g, 0, &idx), string, "string {g} {idx:?}");
                let chi = Rational::from_integer((2 * g + n - 2).into());
                assert_eq!(with_unit(g, 1, &idx), chi * t.value(g, &idx), "dilaton {g} {idx:?}");
                checked += 1;
            }
        }
        assert_eq!(checked, 35);
    }

    #[test]
    fn oracle_agrees() {
        let r = odd_r(required_order(3));
        let s = semisimple_airy(&[int(1)], &r, 3).unwrap();
        assert!(s.check_relations().unwrap().passed());
        let table = tr::compute(&s, 3).unwrap();
        let oracle = oracle_amplitudes(&[int(1)], &r, 3, 3).unwrap();
        let mine: BTreeMap<Key, Rational> = table.entries().iter().map(|(k, v)| (k.clone(), v.clone())).collect();
        assert_eq!(mine, oracle);
    }

    #[test]
    fn json_spec() {
        let v = serde_json::json!({"deltas": [1, "1/2"], "log_r": [[["1/3", 0], [0, "-1"]]]});
        let spec = CohftSpec::from_json(&v).unwrap();
        assert_eq!(spec.deltas, vec![int(1), rat(1, 2)]);
        assert!(spec.r_series(5).unwrap().symplectic_defect().is_none());
        assert!(CohftSpec::from_json(&serde_json::json!({"deltas": []})).is_err());
        let bad = serde_json::json!({"deltas": [1], "r": [[[1]]]});
        assert!(matches!(CohftSpec::from_json(&bad).unwrap().r_series(3), Err(Error::Symplectic { .. })));
    }
}
