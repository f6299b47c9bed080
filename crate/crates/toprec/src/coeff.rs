//! Exact coefficient rings.
//!
//! [`Rational`] is an arbitrary-precision fraction. [`PiPoly`] is a polynomial
//! in a formal variable standing for π², with rational coefficients; it is the
//! ring in which Weil–Petersson volumes live. Both implement [`Scalar`], which
//! is the only interface the recursion engines rely on.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::Value;

use crate::Error;

pub type Rational = BigRational;

/// Shorthand for the fraction `n/d`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// `(2n+1)!! = 1·3·5···(2n+1)`, with `(−1)!! = 1`.
pub fn odd_double_factorial(n: i64) -> BigInt {
    (0..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(2 * k + 1))
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

pub fn rational_to_string(r: &Rational) -> String {
    r.to_string()
}

pub fn parse_rational(s: &str) -> Result<Rational, Error> {
    let t = s.trim();
    let parsed = match t.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| Error::parse(format!("bad rational {s:?}")))?;
            let d: BigInt = d.trim().parse().map_err(|_| Error::parse(format!("bad rational {s:?}")))?;
            if d.is_zero() {
                return Err(Error::parse(format!("zero denominator in {s:?}")));
            }
            Rational::new(n, d)
        }
        None => Rational::from_integer(
            t.parse().map_err(|_| Error::parse(format!("bad rational {s:?}")))?,
        ),
    };
    Ok(parsed)
}

fn rational_from_json(v: &Value) -> Result<Rational, Error> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) => n
            .as_i64()
            .map(int)
            .ok_or_else(|| Error::parse(format!("non-integer number {n}; use a \"p/q\" string"))),
        other => Err(Error::parse(format!("expected rational, found {other}"))),
    }
}

fn rational_to_f64(r: &Rational) -> f64 {
    match (r.numer().to_f64(), r.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ => {
            // Scale both parts down until they fit in a double.
            let shift = r.numer().bits().max(r.denom().bits()).saturating_sub(1000);
            let n = (r.numer() >> shift).to_f64().unwrap_or(f64::NAN);
            let d = (r.denom() >> shift).to_f64().unwrap_or(f64::NAN);
            n / d
        }
    }
}

/// Coefficient ring tag carried by structures and serialized files.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Ring {
    Rational,
    Pi2,
}

impl Ring {
    pub fn name(self) -> &'static str {
        match self {
            Ring::Rational => "rational",
            Ring::Pi2 => "pi2",
        }
    }

    pub fn parse(s: &str) -> Result<Ring, Error> {
        match s {
            "rational" => Ok(Ring::Rational),
            "pi2" => Ok(Ring::Pi2),
            other => Err(Error::parse(format!("unknown ring {other:?}"))),
        }
    }
}

/// Exact commutative ring with rational scalars.
pub trait Scalar:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + 'static
{
    const RING: Ring;

    fn from_rational(r: Rational) -> Self;

    fn scale(&self, r: &Rational) -> Self;

    /// `self += a * b` without consuming the operands.
    fn add_mul(&mut self, a: &Self, b: &Self);

    fn add_ref(&mut self, a: &Self);

    fn to_pipoly(&self) -> PiPoly;

    /// Exact conversion back from a π²-polynomial, if it lies in this ring.
    fn from_pipoly(p: &PiPoly) -> Option<Self>;

    fn to_f64(&self) -> f64;

    fn to_json(&self) -> Value;

    fn from_json(v: &Value) -> Result<Self, Error>;

    fn from_int(n: i64) -> Self {
        Self::from_rational(int(n))
    }
}

impl Scalar for Rational {
    const RING: Ring = Ring::Rational;

    fn from_rational(r: Rational) -> Self {
        r
    }

    fn scale(&self, r: &Rational) -> Self {
        self * r
    }

    fn add_mul(&mut self, a: &Self, b: &Self) {
        if !a.is_zero() && !b.is_zero() {
            *self += a * b;
        }
    }

    fn add_ref(&mut self, a: &Self) {
        *self += a;
    }

    fn to_pipoly(&self) -> PiPoly {
        PiPoly::constant(self.clone())
    }

    fn from_pipoly(p: &PiPoly) -> Option<Self> {
        match p.degree() {
            None => Some(Rational::zero()),
            Some(0) => Some(p.coeff(0)),
            Some(_) => None,
        }
    }

    fn to_f64(&self) -> f64 {
        rational_to_f64(self)
    }

    fn to_json(&self) -> Value {
        Value::String(rational_to_string(self))
    }

    fn from_json(v: &Value) -> Result<Self, Error> {
        rational_from_json(v)
    }
}

/// A polynomial in π² with rational coefficients; `coeffs[d]` multiplies π^{2d}.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct PiPoly {
    coeffs: BTreeMap<u32, Rational>,
}

impl PiPoly {
    pub fn constant(r: Rational) -> Self {
        Self::monomial(0, r)
    }

    /// `r·π^{2d}`.
    pub fn monomial(d: u32, r: Rational) -> Self {
        let mut coeffs = BTreeMap::new();
        if !r.is_zero() {
            coeffs.insert(d, r);
        }
        PiPoly { coeffs }
    }

    pub fn pi2() -> Self {
        Self::monomial(1, Rational::one())
    }

    pub fn coeff(&self, d: u32) -> Rational {
        self.coeffs.get(&d).cloned().unwrap_or_else(Rational::zero)
    }

    /// Highest π²-power present, `None` for zero.
    pub fn degree(&self) -> Option<u32> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, &Rational)> {
        self.coeffs.iter().map(|(d, r)| (*d, r))
    }

    pub fn is_homogeneous(&self) -> bool {
        self.coeffs.len() <= 1
    }

    fn add_term(&mut self, d: u32, r: Rational) {
        if r.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(d).or_insert_with(Rational::zero);
        *entry += r;
        if entry.is_zero() {
            self.coeffs.remove(&d);
        }
    }

    pub fn eval_f64(&self) -> f64 {
        let pi2 = std::f64::consts::PI * std::f64::consts::PI;
        self.coeffs
            .iter()
            .map(|(d, r)| rational_to_f64(r) * pi2.powi(*d as i32))
            .sum()
    }

    pub fn to_json_value(&self) -> Value {
        Value::Array(
            self.coeffs
                .iter()
                .map(|(d, r)| Value::Array(vec![Value::from(*d), Value::String(r.to_string())]))
                .collect(),
        )
    }

    pub fn from_json_value(v: &Value) -> Result<Self, Error> {
        match v {
            Value::Array(items) => {
                let mut p = PiPoly::zero();
                for item in items {
                    let pair = item
                        .as_array()
                        .filter(|a| a.len() == 2)
                        .ok_or_else(|| Error::parse("π² term must be a [degree, \"p/q\"] pair"))?;
                    let d = pair[0]
                        .as_u64()
                        .ok_or_else(|| Error::parse("π² degree must be a non-negative integer"))?;
                    p.add_term(d as u32, rational_from_json(&pair[1])?);
                }
                Ok(p)
            }
            other => Ok(PiPoly::constant(rational_from_json(other)?)),
        }
    }

    /// Renders as `p/q·π^{2d}` terms for LaTeX output.
    pub fn to_latex(&self) -> String {
        if self.coeffs.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (idx, (d, r)) in self.coeffs.iter().rev().enumerate() {
            let neg = r.is_negative();
            let a = r.abs();
            if idx > 0 {
                out.push_str(if neg { " - " } else { " + " });
            } else if neg {
                out.push('-');
            }
            let body = if a.is_integer() {
                a.numer().to_string()
            } else {
                format!("\\frac{{{}}}{{{}}}", a.numer(), a.denom())
            };
            match d {
                0 => out.push_str(&body),
                _ => {
                    if !a.is_one() {
                        out.push_str(&body);
                    }
                    if *d == 1 {
                        out.push_str("\\pi^{2}");
                    } else {
                        out.push_str(&format!("\\pi^{{{}}}", 2 * d));
                    }
                }
            }
        }
        out
    }
}

impl fmt::Display for PiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        for (idx, (d, r)) in self.coeffs.iter().rev().enumerate() {
            if idx > 0 {
                write!(f, " + ")?;
            }
            match d {
                0 => write!(f, "{r}")?,
                1 => write!(f, "{r}*pi^2")?,
                _ => write!(f, "{r}*pi^{}", 2 * d)?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for PiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PiPoly({self})")
    }
}

impl Zero for PiPoly {
    fn zero() -> Self {
        PiPoly::default()
    }

    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl One for PiPoly {
    fn one() -> Self {
        PiPoly::constant(Rational::one())
    }
}

impl Add for PiPoly {
    type Output = PiPoly;

    fn add(mut self, rhs: PiPoly) -> PiPoly {
        self.add_ref(&rhs);
        self
    }
}

impl Sub for PiPoly {
    type Output = PiPoly;

    fn sub(self, rhs: PiPoly) -> PiPoly {
        self + (-rhs)
    }
}

impl Neg for PiPoly {
    type Output = PiPoly;

    fn neg(self) -> PiPoly {
        PiPoly {
            coeffs: self.coeffs.into_iter().map(|(d, r)| (d, -r)).collect(),
        }
    }
}

impl Mul for PiPoly {
    type Output = PiPoly;

    fn mul(self, rhs: PiPoly) -> PiPoly {
        let mut out = PiPoly::zero();
        out.add_mul(&self, &rhs);
        out
    }
}

impl Scalar for PiPoly {
    const RING: Ring = Ring::Pi2;

    fn from_rational(r: Rational) -> Self {
        PiPoly::constant(r)
    }

    fn scale(&self, r: &Rational) -> Self {
        if r.is_zero() {
            return PiPoly::zero();
        }
        PiPoly {
            coeffs: self.coeffs.iter().map(|(d, c)| (*d, c * r)).collect(),
        }
    }

    fn add_mul(&mut self, a: &Self, b: &Self) {
        for (da, ca) in &a.coeffs {
            for (db, cb) in &b.coeffs {
                self.add_term(da + db, ca * cb);
            }
        }
    }

    fn add_ref(&mut self, a: &Self) {
        for (d, r) in &a.coeffs {
            self.add_term(*d, r.clone());
        }
    }

    fn to_pipoly(&self) -> PiPoly {
        self.clone()
    }

    fn from_pipoly(p: &PiPoly) -> Option<Self> {
        Some(p.clone())
    }

    fn to_f64(&self) -> f64 {
        self.eval_f64()
    }

    fn to_json(&self) -> Value {
        self.to_json_value()
    }

    fn from_json(v: &Value) -> Result<Self, Error> {
        PiPoly::from_json_value(v)
    }
}

/// Bernoulli numbers `B_0..=B_n` with the convention `B_1 = −1/2`.
pub fn bernoulli_numbers(n: usize) -> Vec<Rational> {
    let mut b = vec![Rational::one()];
    for m in 1..=n {
        let mut acc = Rational::zero();
        for (k, bk) in b.iter().enumerate() {
            acc += Rational::from_integer(binomial(m as u64 + 1, k as u64)) * bk;
        }
        b.push(-acc / Rational::from_integer(BigInt::from(m + 1)));
    }
    b
}

/// ζ(2k) as an exact rational multiple of π^{2k}:
/// `ζ(2k) = (−1)^{k+1} B_{2k} 2^{2k−1} π^{2k} / (2k)!`.
pub fn zeta_even(k: i64) -> Result<PiPoly, Error> {
    if k < 1 {
        return Err(Error::InvalidArgument(format!("zeta_even needs k ≥ 1, got {k}")));
    }
    let k = k as usize;
    let b = bernoulli_numbers(2 * k);
    let sign = if k % 2 == 1 { int(1) } else { int(-1) };
    let pow2 = Rational::from_integer(BigInt::one() << (2 * k - 1));
    let value = sign * &b[2 * k] * pow2 / Rational::from_integer(factorial(2 * k as u64));
    Ok(PiPoly::monomial(k as u32, value))
}

/// `θ_k = ζ(2k+2)(2^{2k+3} − 4)` for `k ≥ 0`, `θ_{−1} = 1`, and zero below.
pub fn theta_coefficient(k: i64) -> PiPoly {
    match k {
        k if k <= -2 => PiPoly::zero(),
        -1 => PiPoly::one(),
        k => {
            let factor = (BigInt::one() << (2 * k as usize + 3)) - BigInt::from(4);
            zeta_even(k + 1)
                .expect("k + 1 ≥ 1")
                .scale(&Rational::from_integer(factor))
        }
    }
}

/// Least common multiple of all denominators, useful when printing tables.
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn numeric_zeta(s: u32) -> f64 {
        // Partial sum plus an Euler–Maclaurin tail estimate.
        let n_terms = 20_000u32;
        let mut sum = 0.0;
        for n in (1..=n_terms).rev() {
            sum += (n as f64).powi(-(s as i32));
        }
        let n = n_terms as f64;
        sum + n.powf(1.0 - s as f64) / (s as f64 - 1.0) - 0.5 * n.powi(-(s as i32))
    }

    #[test]
    fn zeta_values() {
        assert_eq!(zeta_even(1).unwrap(), PiPoly::monomial(1, rat(1, 6)));
        assert_eq!(zeta_even(2).unwrap(), PiPoly::monomial(2, rat(1, 90)));
        assert_eq!(zeta_even(3).unwrap(), PiPoly::monomial(3, rat(1, 945)));
        assert!(zeta_even(0).is_err());
        assert!(zeta_even(-3).is_err());
    }

    #[test]
    fn zeta_matches_numeric_sum() {
        for k in 1..=6u32 {
            let exact = zeta_even(k as i64).unwrap().eval_f64();
            let numeric = numeric_zeta(2 * k);
            assert!(((exact - numeric) / numeric).abs() < 1e-8, "k={k}: {exact} vs {numeric}");
        }
    }

    #[test]
    fn theta_values() {
        assert_eq!(theta_coefficient(-1), PiPoly::one());
        assert_eq!(theta_coefficient(0), PiPoly::monomial(1, rat(2, 3)));
        assert_eq!(theta_coefficient(1), PiPoly::monomial(2, rat(14, 45)));
        assert!(theta_coefficient(-2).is_zero());
        for k in 0..6 {
            let t = theta_coefficient(k);
            assert_eq!(t.degree(), Some(k as u32 + 1));
            assert!(t.is_homogeneous());
        }
    }

    #[test]
    fn rational_round_trip() {
        for s in ["1/24", "-7/3", "5", "0"] {
            let r = parse_rational(s).unwrap();
            assert_eq!(rational_to_string(&r), s);
        }
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn pipoly_json_round_trip() {
        let p = PiPoly::monomial(2, rat(1, 90)) + PiPoly::constant(rat(-3, 7));
        let v = p.to_json_value();
        assert_eq!(v.to_string(), r#"[[0,"-3/7"],[2,"1/90"]]"#);
        assert_eq!(PiPoly::from_json_value(&v).unwrap(), p);
    }

    #[test]
    fn float_evaluation() {
        let p = zeta_even(4).unwrap();
        let expected: f64 = std::f64::consts::PI.powi(8) / 9450.0;
        assert!((p.eval_f64() - expected).abs() < 1e-12 * expected);
    }

    fn arb_pipoly() -> impl Strategy<Value = PiPoly> {
        proptest::collection::vec((0u32..4, -20i64..20, 1i64..9), 0..4).prop_map(|terms| {
            terms
                .into_iter()
                .fold(PiPoly::zero(), |acc, (d, n, q)| acc + PiPoly::monomial(d, rat(n, q)))
        })
    }

    proptest! {
        #[test]
        fn ring_axioms(a in arb_pipoly(), b in arb_pipoly(), c in arb_pipoly()) {
            prop_assert_eq!((a.clone() * b.clone()) * c.clone(), a.clone() * (b.clone() * c.clone()));
            prop_assert_eq!(a.clone() * (b.clone() + c.clone()), a.clone() * b.clone() + a.clone() * c.clone());
            prop_assert!((a.clone() + (-a.clone())).is_zero());
            prop_assert_eq!(a.clone() * b.clone(), b * a);
        }

        #[test]
        fn no_zero_coefficients_stored(a in arb_pipoly(), b in arb_pipoly()) {
            let p = a.clone() * b - a;
            prop_assert!(p.terms().all(|(_, r)| !r.is_zero()));
        }
    }
}
