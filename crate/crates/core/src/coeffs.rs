//! The universal constants attached to templates of a fixed cogenus.
//!
//! For each cogenus `delta`, the templates and their fitted linear forms
//! determine `A, L, H, D, C`. The reordering coefficients `b(delta, i)` come
//! from the series `A(t)`, and `DiffQ` / `COR` correct for the top and bottom
//! vertices of a polygon.

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphs::{enumerate_graphs, enumerate_templates, Template};
use crate::orderings::{beta_from_divergence, fit_linear_phi, phi_beta, phi_beta_strict, BetaSeq, LinearForm};
use crate::series::{log_partition_series, RatSeries};
use crate::{rat, Rational};

/// A template with its fitted linear form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TemplateData {
    pub template: Template,
    pub form: LinearForm,
}

impl TemplateData {
    fn mu(&self) -> Rational {
        rat(self.template.multiplicity() as i64)
    }

    fn eps_sum(&self) -> i64 {
        self.template.epsilon0() as i64 + self.template.epsilon1() as i64
    }

    /// Offsets `k` at which the template is placed inside a height-`m` sequence.
    fn offsets(&self, m: usize) -> std::ops::Range<usize> {
        let start = if self.template.epsilon0() { 0 } else { 1 };
        let end = (m + self.template.epsilon1() as usize + 1).saturating_sub(self.template.length());
        start..end.max(start)
    }
}

/// Per-cogenus constants.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoeffTable {
    pub delta: usize,
    #[serde(rename = "A", with = "crate::rational_serde")]
    pub a: Rational,
    #[serde(rename = "L", with = "crate::rational_serde")]
    pub l: Rational,
    #[serde(rename = "H", with = "crate::rational_serde")]
    pub h: Rational,
    #[serde(rename = "D", with = "crate::rational_serde")]
    pub d: Rational,
    #[serde(rename = "C", with = "crate::rational_serde")]
    pub c: Rational,
    #[serde(rename = "Ctilde", with = "crate::rational_serde")]
    pub ctilde: Rational,
    /// `b[i - 1] = b(delta, i)` for `1 <= i <= delta`.
    #[serde(with = "crate::rational_serde::vec")]
    pub b: Vec<Rational>,
}

impl CoeffTable {
    /// `b(delta, i)`, zero outside `1..=delta`.
    pub fn b(&self, i: usize) -> Rational {
        if i == 0 {
            return Rational::zero();
        }
        self.b.get(i - 1).cloned().unwrap_or_else(Rational::zero)
    }
}

/// The template sums before the `b` coefficients are known.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TemplateSums {
    pub a: Rational,
    pub l: Rational,
    pub h: Rational,
    pub d: Rational,
    pub c: Rational,
    /// `L` computed as half the weighted sum of `eta_0`.
    pub l_alt: Rational,
}

type Slot = Arc<OnceLock<Arc<Vec<TemplateData>>>>;

/// Computes templates and constants once per cogenus.
#[derive(Default)]
pub struct CoeffContext {
    templates: Mutex<BTreeMap<usize, Slot>>,
    tables: Mutex<BTreeMap<usize, CoeffTable>>,
}

impl CoeffContext {
    pub fn new() -> Self {
        Self::default()
    }

    /// Process-wide shared context.
    pub fn global() -> &'static CoeffContext {
        static CTX: OnceLock<CoeffContext> = OnceLock::new();
        CTX.get_or_init(CoeffContext::new)
    }

    fn slot(&self, delta: usize) -> Slot {
        let mut map = self.templates.lock().expect("template cache poisoned");
        map.entry(delta).or_default().clone()
    }

    /// Seeds the template data for `delta`, e.g. from a persistent cache.
    /// Ignored when the data was already computed.
    pub fn preload(&self, delta: usize, data: Vec<TemplateData>) {
        let _ = self.slot(delta).set(Arc::new(data));
    }

    /// Templates of cogenus `delta` with fitted forms, in canonical order.
    pub fn templates(&self, delta: usize) -> Result<Arc<Vec<TemplateData>>> {
        let slot = self.slot(delta);
        if let Some(data) = slot.get() {
            return Ok(data.clone());
        }
        let data: Vec<TemplateData> = enumerate_templates(delta)
            .into_par_iter()
            .map(|template| {
                let form = fit_linear_phi(template.graph())?;
                Ok(TemplateData { template, form })
            })
            .collect::<Result<_>>()?;
        Ok(slot.get_or_init(|| Arc::new(data)).clone())
    }

    pub fn template_sums(&self, delta: usize) -> Result<TemplateSums> {
        let data = self.templates(delta)?;
        let half = Rational::new(1.into(), 2.into());
        let mut s = TemplateSums {
            a: Rational::zero(),
            l: Rational::zero(),
            h: Rational::zero(),
            d: Rational::zero(),
            c: Rational::zero(),
            l_alt: Rational::zero(),
        };
        for t in data.iter() {
            let mu = t.mu();
            let f = &t.form;
            let span = rat(t.template.length() as i64 - t.eps_sum());
            let not_eps0 = rat(!t.template.epsilon0() as i64);
            s.a += &mu * &f.zeta0;
            s.l -= &mu * &f.zeta0 * &span;
            s.h += &mu * (f.eta0() + &f.zeta0 * &span);
            s.d -= &mu * (&f.zeta2 + &f.zeta1 * &not_eps0);
            s.c -= &mu * f.eta0() * &span;
            s.l_alt += &mu * f.eta0();
        }
        s.a *= &half;
        s.l *= &half;
        s.l_alt *= &half;
        Ok(s)
    }

    /// `A(t) = exp(-sum 2 A(delta) t^delta)` to the given order.
    pub fn a_series(&self, order: usize) -> Result<RatSeries> {
        let mut coeffs = vec![Rational::zero(); order + 1];
        for (delta, c) in coeffs.iter_mut().enumerate().skip(1) {
            *c = -rat(2) * self.template_sums(delta)?.a;
        }
        RatSeries::new(coeffs, order).exp()
    }

    /// `b(delta, i) = [t^delta] log P((t A(t))^i)`.
    pub fn b_coeff(&self, delta: usize, i: usize) -> Result<Rational> {
        if delta == 0 || i == 0 || i > delta {
            return Ok(Rational::zero());
        }
        let g = self.g_series(delta)?;
        Ok(log_partition_series(delta).compose(&g.powi(i))?.coeff(delta))
    }

    /// `t A(t)` to the given order.
    pub fn g_series(&self, order: usize) -> Result<RatSeries> {
        let a = self.a_series(order.saturating_sub(1))?;
        let mut coeffs = vec![Rational::zero()];
        coeffs.extend_from_slice(a.coeffs());
        Ok(RatSeries::new(coeffs, order))
    }

    pub fn table(&self, delta: usize) -> Result<CoeffTable> {
        if delta == 0 {
            return Err(Error::Precondition("coefficient tables start at delta = 1".into()));
        }
        if let Some(t) = self.tables.lock().expect("table cache poisoned").get(&delta) {
            return Ok(t.clone());
        }
        let s = self.template_sums(delta)?;
        let b = (1..=delta).map(|i| self.b_coeff(delta, i)).collect::<Result<Vec<_>>>()?;
        let ctilde = &s.c - rat(4) * &s.d - rat(4) * &b[0];
        let table = CoeffTable { delta, a: s.a, l: s.l, h: s.h, d: s.d, c: s.c, ctilde, b };
        self.tables.lock().expect("table cache poisoned").insert(delta, table.clone());
        Ok(table)
    }

    /// `Q^delta_beta`, summing `phi_beta` over placed templates.
    pub fn q_beta_delta(&self, beta: &BetaSeq, delta: usize) -> Result<Rational> {
        let data = self.templates(delta)?;
        let m = beta.height();
        Ok(data
            .par_iter()
            .map(|t| {
                let inner: Rational =
                    t.offsets(m).map(|k| phi_beta(&t.template.graph().shift(k), beta)).sum();
                t.mu() * inner
            })
            .reduce(Rational::zero, |a, b| a + b))
    }

    /// Same sum with each `phi_beta` replaced by its fitted linear form.
    pub fn q_delta_linearized(&self, beta: &BetaSeq, delta: usize) -> Result<Rational> {
        let data = self.templates(delta)?;
        let m = beta.height();
        Ok(data
            .iter()
            .map(|t| t.mu() * t.offsets(m).map(|k| t.form.eval_at(beta, k)).sum::<Rational>())
            .sum())
    }

    /// `DiffQ(p, delta)` at `p * (0, 1, ..., delta)`.
    pub fn diffq(&self, p: u64, delta: usize) -> Result<Rational> {
        if p == 0 {
            return Ok(Rational::zero());
        }
        let beta = BetaSeq::scaled_staircase(p, delta);
        Ok(self.q_beta_delta(&beta, delta)? - self.q_delta_linearized(&beta, delta)?)
    }

    /// The closed form of `DiffQ(p, delta)` valid for `p >= delta`.
    pub fn diffq_closed(&self, p: u64, delta: usize) -> Result<Rational> {
        let data = self.templates(delta)?;
        let p = rat(p as i64);
        Ok(-data
            .iter()
            .filter(|t| t.template.epsilon0())
            .map(|t| t.mu() * (&p * &t.form.zeta1 + t.form.eta0()))
            .sum::<Rational>())
    }

    /// Correction for a top or bottom vertex of determinant `p`.
    pub fn cor(&self, p: u64, delta: usize) -> Result<Rational> {
        if p == 0 {
            return Ok(Rational::zero());
        }
        let t = self.table(delta)?;
        let pr = rat(p as i64);
        let quad = Rational::new(((p as i64 - 1) * (p as i64 - 2)).into(), (p as i64).into());
        Ok((rat(2) - &pr) * &t.d + self.diffq(p, delta)? + rat(2) * t.b(1)
            - t.b(p as usize)
            - &t.ctilde / rat(6) * quad)
    }
}

/// `COR''(p) = 2 (p - 1)(p - 2) / p`, zero at `p = 0`.
pub fn cor_doubleprime(p: u64) -> Rational {
    if p == 0 {
        return Rational::zero();
    }
    let p = p as i64;
    Rational::new((2 * (p - 1) * (p - 2)).into(), p.into())
}

/// `Q^delta_beta` summed directly over all graphs with the strict transform.
pub fn q_beta_oracle(beta: &BetaSeq, delta: usize) -> Rational {
    enumerate_graphs(delta, beta.height() + 1)
        .par_iter()
        .map(|g| rat(g.multiplicity() as i64) * phi_beta_strict(g, beta))
        .reduce(Rational::zero, |a, b| a + b)
}

/// Shape statistics of a width sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BetaStats {
    pub area: i64,
    pub ll: i64,
    pub height: usize,
    pub idet: i64,
}

/// Statistics of `beta_from_divergence(d)`.
pub fn beta_stats(d: &[i64]) -> Result<BetaStats> {
    let beta = beta_from_divergence(d)?;
    let m = beta.height();
    if m == 0 {
        return Err(Error::InvalidBeta("idet is undefined at height 0".into()));
    }
    let e = beta.entries();
    let inner: u64 = e[1..m].iter().sum();
    Ok(BetaStats {
        area: (e[0] + 2 * inner + e[m]) as i64,
        ll: (e[0] + e[m]) as i64 + 2 * m as i64,
        height: m,
        idet: d[1] - d[m],
    })
}

impl BetaStats {
    /// `A area + L LL + H height + D idet + C`.
    pub fn evaluate(&self, t: &CoeffTable) -> Rational {
        &t.a * rat(self.area) + &t.l * rat(self.ll) + &t.h * rat(self.height as i64)
            + &t.d * rat(self.idet)
            + &t.c
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratio;

    fn ctx() -> &'static CoeffContext {
        CoeffContext::global()
    }

    fn b(v: &[u64]) -> BetaSeq {
        BetaSeq::new(v.to_vec()).unwrap()
    }

    #[test]
    fn tables_one_and_two() {
        let t1 = ctx().table(1).unwrap();
        assert_eq!((t1.a, t1.l, t1.h, t1.d, t1.c), (rat(3), rat(-2), rat(0), rat(0), rat(4)));
        assert_eq!((t1.ctilde, t1.b), (rat(0), vec![rat(1)]));
        let t2 = ctx().table(2).unwrap();
        assert_eq!((t2.a, t2.l, t2.h, t2.d, t2.c), (rat(-21), ratio(39, 2), rat(0), rat(4), rat(-38)));
        assert_eq!((t2.ctilde, t2.b), (rat(-36), vec![ratio(-9, 2), rat(1)]));
        assert!(ctx().table(0).is_err());
    }

    #[test]
    fn alternative_l() {
        for delta in 1..=2 {
            let s = ctx().template_sums(delta).unwrap();
            assert_eq!(s.l, s.l_alt);
        }
    }

    #[test]
    fn a_series_start() {
        assert_eq!(ctx().a_series(2).unwrap(), RatSeries::from_integers(&[1, -6, 60], 2));
        assert_eq!(ctx().b_coeff(1, 2).unwrap(), rat(0));
    }

    #[test]
    fn diffq_small() {
        for p in 1..=4 {
            assert_eq!(ctx().diffq(p, 1).unwrap(), -rat(p as i64));
        }
        for p in 2..=4 {
            let expected = ratio(19 * p as i64, 2) - rat(9);
            assert_eq!(ctx().diffq(p, 2).unwrap(), expected);
            assert_eq!(ctx().diffq_closed(p, 2).unwrap(), expected);
        }
        assert_eq!(ctx().diffq(0, 2).unwrap(), rat(0));
    }

    #[test]
    fn cor_values() {
        assert_eq!(ctx().cor(3, 1).unwrap(), rat(-1));
        assert_eq!(ctx().cor(3, 2).unwrap(), ratio(21, 2));
        for delta in 1..=2 {
            assert_eq!(ctx().cor(1, delta).unwrap(), rat(0));
            assert_eq!(ctx().cor(2, delta).unwrap(), rat(0));
            assert_eq!(ctx().cor(0, delta).unwrap(), rat(0));
        }
        assert_eq!(cor_doubleprime(0), rat(0));
        assert_eq!(cor_doubleprime(1), rat(0));
        assert_eq!(cor_doubleprime(2), rat(0));
        assert_eq!(cor_doubleprime(3), ratio(4, 3));
    }

    #[test]
    fn q_values() {
        assert_eq!(ctx().q_beta_delta(&b(&[0, 1, 2, 3]), 1).unwrap(), rat(12));
        assert_eq!(ctx().q_beta_delta(&b(&[5]), 1).unwrap(), rat(0));
        assert_eq!(ctx().q_delta_linearized(&b(&[5]), 2).unwrap(), rat(0));
        assert_eq!(q_beta_oracle(&b(&[0, 1, 2, 3]), 1), rat(12));
    }

    #[test]
    fn stats() {
        let rect = beta_stats(&[3, 0, 0, 0, 0]).unwrap();
        assert_eq!(rect, BetaStats { area: 24, ll: 14, height: 4, idet: 0 });
        let tri = beta_stats(&[0, 1, 1, 1, 1]).unwrap();
        assert_eq!((tri.area, tri.ll), (16, 12));
        assert!(beta_stats(&[4]).is_err());
    }

    #[test]
    fn table_json() {
        let json = serde_json::to_value(ctx().table(2).unwrap()).unwrap();
        assert_eq!(json["A"], "-21");
        assert_eq!(json["L"], "39/2");
        assert_eq!(json["b"][0], "-9/2");
        let back: CoeffTable = serde_json::from_value(json).unwrap();
        assert_eq!(back, ctx().table(2).unwrap());
    }
}
