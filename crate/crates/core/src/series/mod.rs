//! Truncated formal power series with exact rational coefficients.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::Rational;

pub mod identities;
pub mod qseries;

pub use identities::{b1_b2, check_g_identity, gyz_check, GyzSample};
pub use qseries::{d2g2, dg2, disc, g2, log_partition_series, partition_series, sigma};

/// A power series `c_0 + c_1 t + ... + c_T t^T + O(t^{T+1})`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatSeries {
    coeffs: Vec<Rational>,
}

impl RatSeries {
    /// Builds a series of the given order, padding with zeros or truncating.
    pub fn new(mut coeffs: Vec<Rational>, order: usize) -> Self {
        coeffs.resize(order + 1, Rational::zero());
        RatSeries { coeffs }
    }

    pub fn from_integers(values: &[i64], order: usize) -> Self {
        Self::new(values.iter().map(|&v| crate::rat(v)).collect(), order)
    }

    pub fn zero(order: usize) -> Self {
        Self::new(Vec::new(), order)
    }

    pub fn one(order: usize) -> Self {
        Self::constant(Rational::one(), order)
    }

    pub fn constant(c: Rational, order: usize) -> Self {
        Self::new(vec![c], order)
    }

    /// `c t^k`, or zero when `k` exceeds the order.
    pub fn monomial(k: usize, c: Rational, order: usize) -> Self {
        let mut s = Self::zero(order);
        if k <= order {
            s.coeffs[k] = c;
        }
        s
    }

    /// The series `t`.
    pub fn var(order: usize) -> Self {
        Self::monomial(1, Rational::one(), order)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// `[t^n]`, zero beyond the stored range.
    pub fn coeff(&self, n: usize) -> Rational {
        self.coeffs.get(n).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self::new(self.coeffs[..=order.min(self.order())].to_vec(), order.min(self.order()))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        RatSeries { coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    /// Divides by `t^k`; the first `k` coefficients must vanish.
    pub fn shift_down(&self, k: usize) -> Result<Self> {
        if k > self.order() {
            return Err(Error::Series(format!("cannot divide an order-{} series by t^{k}", self.order())));
        }
        if let Some(i) = (0..k).find(|&i| !self.coeffs[i].is_zero()) {
            return Err(Error::Series(format!("coefficient of t^{i} is nonzero, cannot divide by t^{k}")));
        }
        Ok(RatSeries { coeffs: self.coeffs[k..].to_vec() })
    }

    /// Substitutes `t -> t^k`.
    pub fn dilate(&self, k: usize) -> Self {
        let mut out = Self::zero(self.order());
        for (n, c) in self.coeffs.iter().enumerate() {
            if n * k <= self.order() {
                out.coeffs[n * k] = c.clone();
            }
        }
        out
    }

    pub fn reciprocal(&self) -> Result<Self> {
        let c0 = &self.coeffs[0];
        if c0.is_zero() {
            return Err(Error::Series("reciprocal needs a nonzero constant term".into()));
        }
        let inv0 = c0.recip();
        let mut out = vec![Rational::zero(); self.coeffs.len()];
        out[0] = inv0.clone();
        for n in 1..out.len() {
            let mut acc = Rational::zero();
            for k in 1..=n {
                acc += &self.coeffs[k] * &out[n - k];
            }
            out[n] = -acc * &inv0;
        }
        Ok(RatSeries { coeffs: out })
    }

    pub fn exp(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::Series("exp needs a zero constant term".into()));
        }
        let mut out = vec![Rational::zero(); self.coeffs.len()];
        out[0] = Rational::one();
        for n in 1..out.len() {
            let mut acc = Rational::zero();
            for k in 1..=n {
                acc += Rational::from_integer(k.into()) * &self.coeffs[k] * &out[n - k];
            }
            out[n] = acc / Rational::from_integer(n.into());
        }
        Ok(RatSeries { coeffs: out })
    }

    #[allow(clippy::needless_range_loop)]
    pub fn log(&self) -> Result<Self> {
        if !self.coeffs[0].is_one() {
            return Err(Error::Series("log needs constant term 1".into()));
        }
        let mut out = vec![Rational::zero(); self.coeffs.len()];
        for n in 1..out.len() {
            let mut acc = Rational::from_integer(n.into()) * &self.coeffs[n];
            for k in 1..n {
                acc -= Rational::from_integer(k.into()) * &out[k] * &self.coeffs[n - k];
            }
            out[n] = acc / Rational::from_integer(n.into());
        }
        Ok(RatSeries { coeffs: out })
    }

    /// `self^a` for rational `a`; the constant term must be 1.
    pub fn pow(&self, a: &Rational) -> Result<Self> {
        if !self.coeffs[0].is_one() {
            return Err(Error::Series("pow needs constant term 1".into()));
        }
        self.log()?.scale(a).exp()
    }

    /// Nonnegative integer power, valid for any constant term.
    pub fn powi(&self, n: usize) -> Self {
        let mut out = Self::one(self.order());
        for _ in 0..n {
            out = &out * self;
        }
        out
    }

    /// `self(inner(t))`; `inner` must have zero constant term.
    pub fn compose(&self, inner: &RatSeries) -> Result<Self> {
        if !inner.coeffs[0].is_zero() {
            return Err(Error::Series("compose needs an inner series with zero constant term".into()));
        }
        let order = self.order().min(inner.order());
        let inner = inner.truncate(order);
        let mut out = Self::zero(order);
        for c in self.coeffs[..=order].iter().rev() {
            out = &out * &inner;
            out.coeffs[0] += c;
        }
        Ok(out)
    }

    /// Compositional inverse by Lagrange inversion.
    pub fn revert(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() || self.order() == 0 || self.coeffs[1].is_zero() {
            return Err(Error::Series("revert needs c0 = 0 and c1 != 0".into()));
        }
        let order = self.order();
        let ratio = self.shift_down(1)?.reciprocal()?;
        let mut out = Self::zero(order);
        let mut power = Self::one(order - 1);
        for n in 1..=order {
            power = &power * &ratio;
            out.coeffs[n] = power.coeff(n - 1) / Rational::from_integer(n.into());
        }
        Ok(out)
    }
}

impl Add for &RatSeries {
    type Output = RatSeries;

    fn add(self, rhs: &RatSeries) -> RatSeries {
        let order = self.order().min(rhs.order());
        RatSeries { coeffs: (0..=order).map(|i| &self.coeffs[i] + &rhs.coeffs[i]).collect() }
    }
}

impl Sub for &RatSeries {
    type Output = RatSeries;

    fn sub(self, rhs: &RatSeries) -> RatSeries {
        let order = self.order().min(rhs.order());
        RatSeries { coeffs: (0..=order).map(|i| &self.coeffs[i] - &rhs.coeffs[i]).collect() }
    }
}

impl Mul for &RatSeries {
    type Output = RatSeries;

    fn mul(self, rhs: &RatSeries) -> RatSeries {
        let order = self.order().min(rhs.order());
        let mut out = vec![Rational::zero(); order + 1];
        for (i, a) in self.coeffs[..=order].iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs[..=order - i].iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        RatSeries { coeffs: out }
    }
}

impl Neg for &RatSeries {
    type Output = RatSeries;

    fn neg(self) -> RatSeries {
        RatSeries { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl fmt::Display for RatSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (n, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match n {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})t")?,
                _ => write!(f, "({c})t^{n}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(t^{})", self.order() + 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{rat, ratio};

    #[test]
    fn reversion_of_dg2_prefix() {
        let f = RatSeries::from_integers(&[0, 1, 6, 12, 28], 3);
        let g = f.revert().unwrap();
        assert_eq!(g, RatSeries::from_integers(&[0, 1, -6, 60], 3));
        assert_eq!(g.compose(&f).unwrap(), RatSeries::var(3));
        assert_eq!(f.compose(&g).unwrap(), RatSeries::var(3));
    }

    #[test]
    fn exp_log_pow() {
        let one_plus_t = RatSeries::from_integers(&[1, 1], 6);
        assert_eq!(one_plus_t.log().unwrap().exp().unwrap(), one_plus_t);
        let root = one_plus_t.pow(&ratio(1, 2)).unwrap();
        assert_eq!(&root * &root, one_plus_t);
        assert_eq!(root.coeff(2), ratio(-1, 8));
        let log = one_plus_t.log().unwrap();
        assert_eq!(log.coeff(3), ratio(1, 3));
        assert_eq!(log.coeff(4), ratio(-1, 4));
    }

    #[test]
    fn preconditions() {
        let s = RatSeries::from_integers(&[2, 1], 3);
        assert!(s.exp().is_err());
        assert!(s.log().is_err());
        assert!(s.pow(&rat(2)).is_err());
        assert!(s.revert().is_err());
        assert!(s.compose(&s).is_err());
        assert!(s.shift_down(1).is_err());
        assert!(RatSeries::zero(3).reciprocal().is_err());
    }

    #[test]
    fn truncation_follows_smaller_order() {
        let a = RatSeries::from_integers(&[1, 1, 1, 1], 3);
        let b = RatSeries::from_integers(&[1, 1], 1);
        assert_eq!((&a * &b).order(), 1);
        assert_eq!((&a + &b).order(), 1);
        assert_eq!(a.dilate(2), RatSeries::from_integers(&[1, 0, 1, 0], 3));
        assert_eq!(a.powi(0), RatSeries::one(3));
    }

    #[test]
    fn display() {
        let s = RatSeries::new(vec![rat(0), rat(1), ratio(-1, 2)], 2);
        assert_eq!(s.to_string(), "(1)t + (-1/2)t^2 + O(t^3)");
        assert_eq!(RatSeries::zero(1).to_string(), "0 + O(t^2)");
    }
}
