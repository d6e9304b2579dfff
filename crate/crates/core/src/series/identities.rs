//! Identities tying the template constants to quasimodular forms.

use num_traits::Zero;
use serde::Serialize;

use super::{d2g2, dg2, disc, log_partition_series, partition_series, RatSeries};
use crate::coeffs::CoeffContext;
use crate::error::Result;
use crate::severi::t_delta;
use crate::{rat, Rational};

/// Checks `revert(DG2) = t A(t)` and `sum_delta b(delta, i) t^delta =
/// log P(g(t)^i)` for `i = 1..=order`, through the given order.
pub fn check_g_identity(ctx: &CoeffContext, order: usize) -> Result<bool> {
    let g = dg2(order).revert()?;
    if g != ctx.g_series(order)? {
        return Ok(false);
    }
    let log_p = log_partition_series(order);
    for i in 1..=order {
        let expected = log_p.compose(&g.powi(i))?;
        for delta in 1..=order {
            if ctx.b_coeff(delta, i)? != expected.coeff(delta) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `sum_delta c(delta) DG2^delta` for `delta = 1..=order`.
fn dg2_sum(order: usize, c: impl Fn(usize) -> Result<Rational>) -> Result<RatSeries> {
    let base = dg2(order);
    let mut acc = RatSeries::zero(order);
    let mut power = RatSeries::one(order);
    for delta in 1..=order {
        power = &power * &base;
        acc = &acc + &power.scale(&c(delta)?);
    }
    Ok(acc)
}

/// The q-series `B_1` and `B_2`.
pub fn b1_b2(ctx: &CoeffContext, order: usize) -> Result<(RatSeries, RatSeries)> {
    let p_inv = partition_series(order).reciprocal()?;
    let b1 = &p_inv * &dg2_sum(order, |d| Ok(-ctx.table(d)?.d))?.exp()?;
    let b2 = dg2_sum(order, |d| {
        let t = ctx.table(d)?;
        Ok(t.a - t.l)
    })?
    .exp()?;
    Ok((b1, b2))
}

/// A rational point `(x, y, z, w; s, s_1, s_2, ...)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GyzSample {
    pub x: Rational,
    pub y: Rational,
    pub z: Rational,
    pub w: Rational,
    pub s: Rational,
    /// `s_i[k]` is `s_{k+1}`.
    pub s_i: Vec<Rational>,
}

impl GyzSample {
    pub fn from_integers(x: i64, y: i64, z: i64, w: i64, s: i64, s_i: &[i64]) -> Self {
        GyzSample {
            x: rat(x),
            y: rat(y),
            z: rat(z),
            w: rat(w),
            s: rat(s),
            s_i: s_i.iter().map(|&v| rat(v)).collect(),
        }
    }

    /// Coordinates in the variable order `x, y, z, w, s, s_1, ...`, padded to
    /// `len` with zeros.
    pub fn coords(&self, len: usize) -> Vec<Rational> {
        let mut v = vec![self.x.clone(), self.y.clone(), self.z.clone(), self.w.clone(), self.s.clone()];
        v.extend(self.s_i.iter().cloned());
        v.resize(len.max(v.len()), Rational::zero());
        v
    }
}

/// Both sides of the corrected Goettsche formula at one sample point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GyzOutcome {
    #[serde(with = "crate::rational_serde::vec")]
    pub lhs: Vec<Rational>,
    #[serde(with = "crate::rational_serde::vec")]
    pub rhs: Vec<Rational>,
    /// First q-exponent where the sides differ.
    pub first_mismatch: Option<usize>,
}

impl GyzOutcome {
    pub fn holds(&self) -> bool {
        self.first_mismatch.is_none()
    }
}

pub fn gyz_check(ctx: &CoeffContext, order: usize, sample: &GyzSample) -> Result<GyzOutcome> {
    let base = dg2(order);
    let mut lhs = RatSeries::one(order);
    let mut power = RatSeries::one(order);
    for delta in 1..=order {
        power = &power * &base;
        let value = t_delta(ctx, delta)?.eval(&sample.coords(4 + delta));
        lhs = &lhs + &power.scale(&value);
    }

    // q-orders shrink by the monomial divisions; rebuild at a higher order first.
    let wide = order + 2;
    let dg2_q = dg2(wide).shift_down(1)?.truncate(order);
    let disc_d2 = (&disc(wide) * &d2g2(wide)).shift_down(2)?.truncate(order);
    let (b1, b2) = b1_b2(ctx, order)?;
    let zw = &sample.z + &sample.w;
    let e1 = &zw / rat(12) + (&sample.x - &sample.y) / rat(2);
    let e2 = -(&zw / rat(24));
    let p = partition_series(order);
    let mut rhs = &dg2_q.pow(&e1)? * &disc_d2.pow(&e2)?;
    rhs = &rhs * &b1.pow(&sample.z)?;
    rhs = &rhs * &b2.pow(&sample.y)?;
    rhs = &rhs * &p.pow(&-&sample.s)?;
    for (k, si) in sample.s_i.iter().enumerate() {
        rhs = &rhs * &p.dilate(k + 2).pow(si)?;
    }

    let first_mismatch = (0..=order).find(|&n| lhs.coeff(n) != rhs.coeff(n));
    Ok(GyzOutcome { lhs: lhs.coeffs().to_vec(), rhs: rhs.coeffs().to_vec(), first_mismatch })
}
