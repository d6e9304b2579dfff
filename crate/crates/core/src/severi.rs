//! Severi degrees `N^{Delta, delta}` and their logarithms `Q^{Delta, delta}`.
//!
//! Three routes are provided: a brute-force sum over reorderings and
//! long-edge graphs, the combinatorial closed form in terms of polygon
//! statistics, and the geometric universal polynomial in the toric
//! invariants.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::coeffs::CoeffContext;
use crate::error::{Error, Result};
use crate::graphs::enumerate_graphs;
use crate::orderings::p_beta_strict;
use crate::polygon::{HTPolygon, PolygonJson};
use crate::series::RatSeries;
use crate::{rat, Rational};

fn require_sides(p: &HTPolygon, bound: usize, what: &str) -> Result<()> {
    let shortest = p.min_edge_length();
    if (shortest as usize) < bound {
        return Err(Error::Precondition(format!(
            "{what} needs every edge of length at least {bound}, shortest is {shortest}"
        )));
    }
    Ok(())
}

/// `N^{Delta, delta}` by summing over reorderings and long-edge graphs.
pub fn n_bruteforce(p: &HTPolygon, delta: usize) -> Result<BigInt> {
    require_sides(p, delta.saturating_sub(1), "brute force")?;
    if delta == 0 {
        return Ok(BigInt::one());
    }
    let total = p
        .reorderings(delta)
        .par_iter()
        .map(|r| {
            let rest = delta - r.cogenus;
            if rest == 0 {
                return BigInt::one();
            }
            enumerate_graphs(rest, r.beta.height() + 1)
                .iter()
                .map(|g| BigInt::from(g.multiplicity()) * BigInt::from(p_beta_strict(g, &r.beta)))
                .sum::<BigInt>()
        })
        .sum();
    Ok(total)
}

/// `Q^{Delta, delta}` from the polygon statistics.
pub fn q_polygon(ctx: &CoeffContext, p: &HTPolygon, delta: usize) -> Result<Rational> {
    require_sides(p, delta, "the closed form")?;
    let t = ctx.table(delta)?;
    let s = p.stats();
    let mut q = &t.a * rat(s.area) + &t.l * rat(s.ll) + &t.d * rat(s.idet) + &t.c;
    q += ctx.diffq(s.tdet, delta)? + ctx.diffq(s.bdet, delta)?;
    for (&det, &count) in &s.v_internal {
        q += t.b(det as usize) * rat(count as i64);
    }
    Ok(q)
}

/// `Q^{Delta, delta}` from the toric invariants.
pub fn q_geometric(ctx: &CoeffContext, p: &HTPolygon, delta: usize) -> Result<Rational> {
    require_sides(p, delta, "the geometric form")?;
    let inv = p.toric_invariants();
    let that = that_delta(ctx, delta)?;
    let mut point = vec![
        rat(inv.lsq),
        rat(inv.lk),
        inv.ksq.clone(),
        rat(inv.c2tilde),
        rat(inv.s),
    ];
    point.extend((1..delta as u64).map(|i| rat(inv.s_at(i) as i64)));
    Ok(that.eval_hat(&point) + ctx.cor(p.tdet(), delta)? + ctx.cor(p.bdet(), delta)?)
}

/// Variable names in the order used by [`Poly`].
pub fn variable_name(i: usize) -> String {
    match i {
        0 => "x".into(),
        1 => "y".into(),
        2 => "z".into(),
        3 => "w".into(),
        4 => "s".into(),
        k => format!("s{}", k - 4),
    }
}

/// A sparse polynomial with rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Poly {
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl Poly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Rational) -> Self {
        let mut p = Self::zero();
        p.add_term(Vec::new(), c);
        p
    }

    /// `c * var_i`.
    pub fn linear(i: usize, c: Rational) -> Self {
        let mut e = vec![0; i + 1];
        e[i] = 1;
        let mut p = Self::zero();
        p.add_term(e, c);
        p
    }

    fn add_term(&mut self, mut exps: Vec<u32>, c: Rational) {
        while exps.last() == Some(&0) {
            exps.pop();
        }
        let entry = self.terms.entry(exps.clone()).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&exps);
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let n = ea.len().max(eb.len());
                let e = (0..n)
                    .map(|i| ea.get(i).copied().unwrap_or(0) + eb.get(i).copied().unwrap_or(0))
                    .collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        let mut out = Poly::zero();
        for (e, x) in &self.terms {
            out.add_term(e.clone(), x * c);
        }
        out
    }

    /// Evaluates at `point`; missing coordinates count as zero.
    pub fn eval(&self, point: &[Rational]) -> Rational {
        self.terms
            .iter()
            .map(|(e, c)| {
                let mut v = c.clone();
                for (i, &k) in e.iter().enumerate() {
                    let x = point.get(i).cloned().unwrap_or_else(Rational::zero);
                    for _ in 0..k {
                        v *= &x;
                    }
                }
                v
            })
            .sum()
    }

    /// Coefficient of a monomial given by its exponent vector.
    pub fn coeff(&self, exps: &[u32]) -> Rational {
        let mut e = exps.to_vec();
        while e.last() == Some(&0) {
            e.pop();
        }
        self.terms.get(&e).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (e, c)) in self.terms.iter().enumerate() {
            if n > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})")?;
            for (i, &k) in e.iter().enumerate() {
                match k {
                    0 => {}
                    1 => write!(f, "*{}", variable_name(i))?,
                    _ => write!(f, "*{}^{k}", variable_name(i))?,
                }
            }
        }
        Ok(())
    }
}

/// The linear polynomial `T^_delta` together with `T_delta`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniversalPolynomial {
    pub delta: usize,
    /// Coefficients of `x, y, z, w, s, s_1, ..., s_{delta-1}` in `T^_delta`.
    pub hat: Vec<Rational>,
}

impl UniversalPolynomial {
    pub fn eval_hat(&self, point: &[Rational]) -> Rational {
        self.hat
            .iter()
            .enumerate()
            .map(|(i, c)| c * point.get(i).cloned().unwrap_or_else(Rational::zero))
            .sum()
    }

    pub fn hat_poly(&self) -> Poly {
        self.hat
            .iter()
            .enumerate()
            .fold(Poly::zero(), |acc, (i, c)| acc.add(&Poly::linear(i, c.clone())))
    }
}

impl fmt::Display for UniversalPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.hat.iter().enumerate() {
            if i == 0 {
                write!(f, "{c}{}", variable_name(i))?;
            } else if c < &Rational::zero() {
                write!(f, " - {}{}", -c, variable_name(i))?;
            } else {
                write!(f, " + {c}{}", variable_name(i))?;
            }
        }
        Ok(())
    }
}

/// `T^_delta = A x - L y + (C~/12) z + (C~/12 + D + b_1) w - b_1 s +
/// sum_{i >= 2} b_i s_{i-1}`.
pub fn that_delta(ctx: &CoeffContext, delta: usize) -> Result<UniversalPolynomial> {
    let t = ctx.table(delta)?;
    let twelfth = &t.ctilde / rat(12);
    let mut hat = vec![
        t.a.clone(),
        -t.l.clone(),
        twelfth.clone(),
        &twelfth + &t.d + t.b(1),
        -t.b(1),
    ];
    hat.extend((2..=delta).map(|i| t.b(i)));
    Ok(UniversalPolynomial { delta, hat })
}

/// `T_delta = [t^delta] exp(sum_i T^_i t^i)`.
pub fn t_delta(ctx: &CoeffContext, delta: usize) -> Result<Poly> {
    let hats = (1..=delta)
        .map(|i| that_delta(ctx, i).map(|u| u.hat_poly()))
        .collect::<Result<Vec<_>>>()?;
    let mut e = vec![Poly::constant(Rational::one())];
    for n in 1..=delta {
        let mut acc = Poly::zero();
        for k in 1..=n {
            acc = acc.add(&hats[k - 1].mul(&e[n - k]).scale(&rat(k as i64)));
        }
        e.push(acc.scale(&Rational::new(1.into(), (n as i64).into())));
    }
    Ok(e.swap_remove(delta))
}

/// `N^0, ..., N^d` from `Q^1, ..., Q^d`.
pub fn n_from_q(q: &[Rational]) -> Vec<Rational> {
    let mut coeffs = vec![Rational::zero()];
    coeffs.extend_from_slice(q);
    let order = q.len();
    RatSeries::new(coeffs, order).exp().expect("zero constant term").coeffs().to_vec()
}

/// `Q^1, ..., Q^d` from `N^0 = 1, N^1, ..., N^d`.
pub fn q_from_n(n: &[Rational]) -> Result<Vec<Rational>> {
    if n.first() != Some(&Rational::one()) {
        return Err(Error::Precondition("N^0 must be 1".into()));
    }
    let order = n.len() - 1;
    Ok(RatSeries::new(n.to_vec(), order).log()?.coeffs()[1..].to_vec())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Bruteforce,
    Closed,
    Geometric,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Bruteforce, Method::Closed, Method::Geometric];

    pub fn name(self) -> &'static str {
        match self {
            Method::Bruteforce => "bruteforce",
            Method::Closed => "closed",
            Method::Geometric => "geometric",
        }
    }
}

/// Values of one method at one cogenus.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum MethodValue {
    Ok {
        #[serde(rename = "N", with = "crate::rational_serde")]
        n: Rational,
        #[serde(rename = "Q", with = "crate::rational_serde")]
        q: Rational,
    },
    PreconditionUnmet { reason: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DeltaRow {
    pub delta: usize,
    pub values: BTreeMap<Method, MethodValue>,
    pub agree: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NodeCountReport {
    pub polygon: PolygonJson,
    pub delta_max: usize,
    pub rows: Vec<DeltaRow>,
    pub agree: bool,
}

impl NodeCountReport {
    /// `N^delta` from the first method that produced a value.
    pub fn n(&self, delta: usize) -> Option<&Rational> {
        self.rows.get(delta)?.values.values().find_map(|v| match v {
            MethodValue::Ok { n, .. } => Some(n),
            MethodValue::PreconditionUnmet { .. } => None,
        })
    }
}

/// Runs the requested methods for `delta = 0..=delta_max` and cross-checks them.
pub fn report(
    ctx: &CoeffContext,
    p: &HTPolygon,
    delta_max: usize,
    methods: &[Method],
) -> Result<NodeCountReport> {
    let mut columns: BTreeMap<Method, Vec<MethodValue>> = BTreeMap::new();
    for &m in methods {
        let mut values = vec![MethodValue::Ok { n: Rational::one(), q: Rational::zero() }];
        let mut ns = vec![Rational::one()];
        let mut qs = Vec::new();
        for delta in 1..=delta_max {
            let computed = match m {
                Method::Bruteforce => n_bruteforce(p, delta).map(|n| {
                    ns.push(Rational::from_integer(n));
                    q_from_n(&ns).expect("N^0 = 1")[delta - 1].clone()
                }),
                Method::Closed => q_polygon(ctx, p, delta),
                Method::Geometric => q_geometric(ctx, p, delta),
            };
            match computed {
                Ok(q) => {
                    let n = if m == Method::Bruteforce {
                        ns[delta].clone()
                    } else {
                        qs.push(q.clone());
                        n_from_q(&qs)[delta].clone()
                    };
                    values.push(MethodValue::Ok { n, q });
                }
                Err(Error::Precondition(reason)) => {
                    values.push(MethodValue::PreconditionUnmet { reason });
                    // Preconditions only tighten with delta.
                    for _ in delta + 1..=delta_max {
                        values.push(MethodValue::PreconditionUnmet {
                            reason: format!("precondition unmet below delta = {}", delta + 1),
                        });
                    }
                    break;
                }
                Err(e) => return Err(e),
            }
        }
        columns.insert(m, values);
    }
    let mut rows = Vec::new();
    for delta in 0..=delta_max {
        let values: BTreeMap<Method, MethodValue> =
            columns.iter().map(|(m, v)| (*m, v[delta].clone())).collect();
        let ns: Vec<&Rational> = values
            .values()
            .filter_map(|v| match v {
                MethodValue::Ok { n, .. } => Some(n),
                MethodValue::PreconditionUnmet { .. } => None,
            })
            .collect();
        let agree = ns.windows(2).all(|w| w[0] == w[1]);
        rows.push(DeltaRow { delta, values, agree });
    }
    let agree = rows.iter().all(|r| r.agree);
    Ok(NodeCountReport { polygon: PolygonJson::from(p), delta_max, rows, agree })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polygon::{rectangle, triangle};
    use crate::ratio;

    fn ctx() -> &'static CoeffContext {
        CoeffContext::global()
    }

    #[test]
    fn triangle_one_node() {
        for d in 3..=4 {
            let expected = 3 * (d as i64 - 1) * (d as i64 - 1);
            assert_eq!(n_bruteforce(&triangle(d), 1).unwrap(), BigInt::from(expected));
            assert_eq!(q_polygon(ctx(), &triangle(d), 1).unwrap(), rat(expected));
            assert_eq!(q_geometric(ctx(), &triangle(d), 1).unwrap(), rat(expected));
        }
        assert_eq!(n_bruteforce(&triangle(2), 0).unwrap(), BigInt::one());
    }

    #[test]
    fn preconditions() {
        assert!(matches!(n_bruteforce(&triangle(1), 3), Err(Error::Precondition(_))));
        assert!(matches!(q_polygon(ctx(), &triangle(1), 2), Err(Error::Precondition(_))));
        assert!(matches!(q_geometric(ctx(), &rectangle(1, 3), 2), Err(Error::Precondition(_))));
    }

    #[test]
    fn universal_polynomials() {
        let t1 = that_delta(ctx(), 1).unwrap();
        assert_eq!(t1.hat, vec![rat(3), rat(2), rat(0), rat(1), rat(-1)]);
        assert_eq!(t1.to_string(), "3x + 2y + 0z + 1w - 1s");
        let t2 = that_delta(ctx(), 2).unwrap();
        assert_eq!(t2.hat, vec![rat(-21), ratio(-39, 2), rat(-3), ratio(-7, 2), ratio(9, 2), rat(1)]);
        let full = t_delta(ctx(), 2).unwrap();
        assert_eq!(full.coeff(&[2]), ratio(9, 2));
        assert_eq!(full.coeff(&[1, 1]), rat(6));
        assert_eq!(full.coeff(&[0, 0, 0, 0, 0, 1]), rat(1));
        assert_eq!(t_delta(ctx(), 0).unwrap(), Poly::constant(rat(1)));
    }

    #[test]
    fn transforms() {
        let q = vec![rat(27), ratio(3, 2), rat(-4)];
        let n = n_from_q(&q);
        assert_eq!(n[1], q[0]);
        assert_eq!(n[2], &q[1] + &q[0] * &q[0] / rat(2));
        assert_eq!(q_from_n(&n).unwrap(), q);
        assert!(q_from_n(&[rat(2)]).is_err());
    }

    #[test]
    fn small_report() {
        let r = report(ctx(), &triangle(3), 1, &Method::ALL).unwrap();
        assert!(r.agree);
        assert_eq!(r.n(1), Some(&rat(12)));
        let short = report(ctx(), &rectangle(1, 1), 2, &Method::ALL).unwrap();
        let row = &short.rows[2];
        assert!(matches!(row.values[&Method::Closed], MethodValue::PreconditionUnmet { .. }));
        assert!(matches!(row.values[&Method::Bruteforce], MethodValue::Ok { .. }));
    }
}
