//! Sparse multivariate polynomials with exact coefficients.

use std::collections::BTreeMap;

use crate::coeff::{Rational, Scalar};

pub type Exponents = Vec<u32>;

#[derive(Clone, Debug, PartialEq)]
pub struct Poly<S> {
    nvars: usize,
    terms: BTreeMap<Exponents, S>,
}

impl<S: Scalar> Poly<S> {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: S) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn var(nvars: usize, v: usize) -> Self {
        let mut e = vec![0; nvars];
        e[v] = 1;
        let mut p = Self::zero(nvars);
        p.add_term(e, S::one());
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &S)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exps: &[u32]) -> S {
        self.terms.get(exps).cloned().unwrap_or_else(S::zero)
    }

    pub fn add_term(&mut self, exps: Exponents, c: S) {
        debug_assert_eq!(exps.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&exps) {
            Some(v) => {
                v.add_ref(&c);
                if v.is_zero() {
                    self.terms.remove(&exps);
                }
            }
            None => {
                self.terms.insert(exps, c);
            }
        }
    }

    pub fn add_assign(&mut self, other: &Self) {
        for (e, c) in &other.terms {
            self.add_term(e.clone(), c.clone());
        }
    }

    pub fn scale_by(&self, c: &S) -> Self {
        let mut p = Self::zero(self.nvars);
        for (e, v) in &self.terms {
            p.add_term(e.clone(), v.clone() * c.clone());
        }
        p
    }

    pub fn scale(&self, r: &Rational) -> Self {
        let mut p = Self::zero(self.nvars);
        for (e, v) in &self.terms {
            p.add_term(e.clone(), v.scale(r));
        }
        p
    }

    pub fn derivative(&self, v: usize) -> Self {
        let mut p = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[v] > 0 {
                let mut e2 = e.clone();
                e2[v] -= 1;
                p.add_term(e2, c.scale(&Rational::from_integer(e[v].into())));
            }
        }
        p
    }

    pub fn mul_var(&self, v: usize) -> Self {
        let mut p = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            e2[v] += 1;
            p.terms.insert(e2, c.clone());
        }
        p
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.mul_truncated(other, |_| true)
    }

    /// Product keeping only monomials accepted by `keep`.
    pub fn mul_truncated(&self, other: &Self, keep: impl Fn(&[u32]) -> bool) -> Self {
        let mut p = Self::zero(self.nvars);
        let mut e = vec![0u32; self.nvars];
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                for (k, slot) in e.iter_mut().enumerate() {
                    *slot = e1[k] + e2[k];
                }
                if keep(&e) {
                    p.add_term(e.clone(), c1.clone() * c2.clone());
                }
            }
        }
        p
    }

    pub fn truncate(&self, keep: impl Fn(&[u32]) -> bool) -> Self {
        Poly { nvars: self.nvars, terms: self.terms.iter().filter(|(e, _)| keep(e)).map(|(e, c)| (e.clone(), c.clone())).collect() }
    }

    /// `exp(self)` truncated by `keep`; `self` must have no constant term and
    /// `keep` must be closed under taking smaller exponents.
    pub fn exp_truncated(&self, keep: impl Fn(&[u32]) -> bool + Copy, max_order: usize) -> Self {
        let mut result = Self::constant(self.nvars, S::one());
        let mut power = result.clone();
        for k in 1..=max_order {
            power = power.mul_truncated(self, keep).scale(&Rational::new(1.into(), (k as i64).into()));
            if power.is_zero() {
                break;
            }
            result.add_assign(&power);
        }
        result.truncate(keep)
    }

    /// `log(self)` truncated by `keep`; the constant term must be one.
    pub fn log_truncated(&self, keep: impl Fn(&[u32]) -> bool + Copy, max_order: usize) -> Self {
        let mut u = self.clone();
        u.add_term(vec![0; self.nvars], -S::one());
        let mut result = Self::zero(self.nvars);
        let mut power = Self::constant(self.nvars, S::one());
        for k in 1..=max_order {
            power = power.mul_truncated(&u, keep);
            if power.is_zero() {
                break;
            }
            let sign = if k % 2 == 1 { 1 } else { -1 };
            result.add_assign(&power.scale(&Rational::new(sign.into(), (k as i64).into())));
        }
        result
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::{int, rat};

    type P = Poly<Rational>;

    #[test]
    fn derivative_and_product() {
        let x = P::var(2, 0);
        let y = P::var(2, 1);
        let p = x.mul(&x).mul(&y);
        assert_eq!(p.derivative(0).coeff(&[1, 1]), int(2));
        assert_eq!(p.derivative(1).coeff(&[2, 0]), int(1));
        assert!(p.derivative(1).derivative(1).is_zero());
        assert_eq!(x.mul_var(1), x.mul(&y));
    }

    #[test]
    fn exp_log_round_trip() {
        let keep = |e: &[u32]| e.iter().sum::<u32>() <= 5;
        let mut f = P::var(2, 0).scale(&rat(1, 3));
        f.add_assign(&P::var(2, 0).mul(&P::var(2, 1)).scale(&rat(-2, 5)));
        let e = f.exp_truncated(keep, 10);
        assert_eq!(e.coeff(&[2, 0]), rat(1, 18));
        assert_eq!(e.log_truncated(keep, 10), f);
    }
}
