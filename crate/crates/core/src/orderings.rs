//! Counting beta-extended orderings of long-edge graphs.
//!
//! For a width sequence `beta = (b_0, ..., b_M)` and a graph `G`, the extended
//! graph adds `b_{j-1} - lambda_j(G)` unweighted short edges between `j - 1`
//! and `j`. An extended ordering is a total order of the vertices `0..=M+1`
//! and all edges in which each edge lies strictly between its endpoints, up to
//! permuting interchangeable edges.

use std::collections::HashMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::binomial;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphs::{Edge, LongEdgeGraph};
use crate::Rational;

/// A width sequence `(b_0, ..., b_M)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u64>", into = "Vec<u64>")]
pub struct BetaSeq(Vec<u64>);

impl TryFrom<Vec<u64>> for BetaSeq {
    type Error = Error;

    fn try_from(v: Vec<u64>) -> Result<Self> {
        BetaSeq::new(v)
    }
}

impl From<BetaSeq> for Vec<u64> {
    fn from(b: BetaSeq) -> Self {
        b.0
    }
}

impl BetaSeq {
    pub fn new(entries: Vec<u64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidBeta("beta must have at least one entry".into()));
        }
        Ok(BetaSeq(entries))
    }

    pub fn entries(&self) -> &[u64] {
        &self.0
    }

    /// `M`, one less than the number of entries.
    pub fn height(&self) -> usize {
        self.0.len() - 1
    }

    pub fn get(&self, i: usize) -> u64 {
        self.0[i]
    }

    /// `p * (0, 1, ..., m)`.
    pub fn scaled_staircase(p: u64, m: usize) -> Self {
        BetaSeq((0..=m as u64).map(|i| p * i).collect())
    }
}

impl fmt::Display for BetaSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u64::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Prefix sums of `d`, failing on a negative partial sum.
pub fn beta_from_divergence(d: &[i64]) -> Result<BetaSeq> {
    let mut acc = 0i64;
    let mut out = Vec::with_capacity(d.len());
    for (index, x) in d.iter().enumerate() {
        acc += x;
        if acc < 0 {
            return Err(Error::NegativeWidth { index });
        }
        out.push(acc as u64);
    }
    BetaSeq::new(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Allowability {
    NotAllowable,
    Allowable,
    StrictlyAllowable,
}

fn fits(g: &LongEdgeGraph, beta: &BetaSeq) -> bool {
    g.maxv().map_or(true, |m| m <= beta.height() + 1)
}

pub fn allowability(g: &LongEdgeGraph, beta: &BetaSeq) -> Allowability {
    let m = beta.height();
    if !fits(g, beta) || (1..=m + 1).any(|j| beta.get(j - 1) < g.lambda(j)) {
        return Allowability::NotAllowable;
    }
    let strict = g
        .edges()
        .iter()
        .filter(|e| e.lo() == 0 || e.hi() == m + 1)
        .all(|e| e.weight() == 1);
    if strict {
        Allowability::StrictlyAllowable
    } else {
        Allowability::Allowable
    }
}

pub fn is_semiallowable(g: &LongEdgeGraph, beta: &BetaSeq) -> bool {
    fits(g, beta) && (1..=beta.height() + 1).all(|j| beta.get(j - 1) >= g.olambda(j))
}

/// Counts extended orderings of the graph with the given edge classes.
fn count_classes(classes: &[(Edge, usize)], beta: &[u64]) -> BigUint {
    let gaps = beta.len();
    if classes.iter().any(|(e, _)| e.hi() > gaps) {
        return BigUint::zero();
    }
    // totals[j - 1] is the number of edges already placed in gap j.
    let mut totals = Vec::with_capacity(gaps);
    for j in 1..=gaps {
        let lambda: u64 = classes
            .iter()
            .filter(|(e, _)| e.lo() < j && j <= e.hi())
            .map(|(e, m)| e.weight() * *m as u64)
            .sum();
        match beta[j - 1].checked_sub(lambda) {
            Some(s) => totals.push(s),
            None => return BigUint::zero(),
        }
    }
    distribute(classes, 0, &mut totals)
}

fn distribute(classes: &[(Edge, usize)], ci: usize, totals: &mut [u64]) -> BigUint {
    let Some(&(edge, m)) = classes.get(ci) else {
        return BigUint::one();
    };
    spread(classes, ci, edge.lo(), edge.hi() - 1, m as u64, totals)
}

/// Places `left` copies of class `ci` into gaps `gap..=last` (0-based).
fn spread(
    classes: &[(Edge, usize)],
    ci: usize,
    gap: usize,
    last: usize,
    left: u64,
    totals: &mut [u64],
) -> BigUint {
    let before = totals[gap];
    let range = if gap == last { left..=left } else { 0..=left };
    let mut sum = BigUint::zero();
    for c in range {
        let factor = binomial(BigUint::from(before + c), BigUint::from(c));
        totals[gap] = before + c;
        let rest = if gap == last {
            distribute(classes, ci + 1, totals)
        } else {
            spread(classes, ci, gap + 1, last, left - c, totals)
        };
        sum += factor * rest;
    }
    totals[gap] = before;
    sum
}

/// The number of beta-extended orderings of `g`.
pub fn p_beta(g: &LongEdgeGraph, beta: &BetaSeq) -> BigUint {
    count_classes(&g.classes(), beta.entries())
}

/// `p_beta` restricted to strictly allowable graphs.
pub fn p_beta_strict(g: &LongEdgeGraph, beta: &BetaSeq) -> BigUint {
    if allowability(g, beta) == Allowability::StrictlyAllowable {
        p_beta(g, beta)
    } else {
        BigUint::zero()
    }
}

fn is_strict(classes: &[(Edge, usize)], counts: &[usize], m: usize) -> bool {
    classes
        .iter()
        .zip(counts)
        .filter(|((e, _), &c)| c > 0 && (e.lo() == 0 || e.hi() == m + 1))
        .all(|((e, _), _)| e.weight() == 1)
}

/// Logarithmic transform over ordered tuples of sub-multisets.
fn phi_impl(g: &LongEdgeGraph, beta: &BetaSeq, strict: bool) -> Rational {
    let classes = g.classes();
    if classes.is_empty() {
        return Rational::zero();
    }
    let dims: Vec<usize> = classes.iter().map(|(_, m)| m + 1).collect();
    let size: usize = dims.iter().product();
    let decode = |mut idx: usize| -> Vec<usize> {
        dims.iter()
            .map(|d| {
                let c = idx % d;
                idx /= d;
                c
            })
            .collect()
    };
    let vectors: Vec<Vec<usize>> = (0..size).map(decode).collect();
    let m = beta.height();
    let p: Vec<BigInt> = vectors
        .iter()
        .map(|counts| {
            if counts.iter().all(|&c| c == 0) {
                return BigInt::zero();
            }
            if strict && !is_strict(&classes, counts, m) {
                return BigInt::zero();
            }
            let sub: Vec<(Edge, usize)> = classes
                .iter()
                .zip(counts)
                .filter(|(_, &c)| c > 0)
                .map(|((e, _), &c)| (*e, c))
                .collect();
            BigInt::from(count_classes(&sub, beta.entries()))
        })
        .collect();
    // Mixed-radix digits make componentwise subtraction plain index subtraction.
    let le = |a: &[usize], b: &[usize]| a.iter().zip(b).all(|(x, y)| x <= y);
    let top = size - 1;
    let parts: usize = classes.iter().map(|(_, m)| m).sum();
    let mut w = p.clone();
    let mut phi = Rational::from_integer(w[top].clone());
    for i in 2..=parts {
        let mut next = vec![BigInt::zero(); size];
        for v in 1..size {
            let mut acc = BigInt::zero();
            for s in 1..v {
                if !p[s].is_zero() && le(&vectors[s], &vectors[v]) && !w[v - s].is_zero() {
                    acc += &p[s] * &w[v - s];
                }
            }
            next[v] = acc;
        }
        w = next;
        let term = Rational::new(w[top].clone(), BigInt::from(i));
        if i % 2 == 0 {
            phi -= term;
        } else {
            phi += term;
        }
    }
    phi
}

pub fn phi_beta(g: &LongEdgeGraph, beta: &BetaSeq) -> Rational {
    phi_impl(g, beta, false)
}

pub fn phi_beta_strict(g: &LongEdgeGraph, beta: &BetaSeq) -> Rational {
    phi_impl(g, beta, true)
}

/// A linear function `eta_0 + eta_1 b_k + ... + eta_l b_{k+l-1}` of a width
/// sequence, where `k` is the offset at which the graph sits.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearForm {
    #[serde(with = "crate::rational_serde::vec")]
    pub eta: Vec<Rational>,
    #[serde(with = "crate::rational_serde")]
    pub zeta0: Rational,
    #[serde(with = "crate::rational_serde")]
    pub zeta1: Rational,
    #[serde(with = "crate::rational_serde")]
    pub zeta2: Rational,
}

impl LinearForm {
    pub fn from_eta(eta: Vec<Rational>) -> Self {
        let zeta = |i: u64| -> Rational {
            eta.iter()
                .enumerate()
                .skip(1)
                .map(|(j, e)| e * Rational::from_integer(binomial(BigInt::from(j - 1), BigInt::from(i))))
                .sum()
        };
        let (zeta0, zeta1, zeta2) = (zeta(0), zeta(1), zeta(2));
        LinearForm { eta, zeta0, zeta1, zeta2 }
    }

    pub fn eta0(&self) -> &Rational {
        &self.eta[0]
    }

    /// Number of linear coefficients.
    pub fn length(&self) -> usize {
        self.eta.len() - 1
    }

    /// Evaluates at `beta` with the graph's first vertex at `offset`.
    pub fn eval_at(&self, beta: &BetaSeq, offset: usize) -> Rational {
        let mut acc = self.eta[0].clone();
        for (j, e) in self.eta.iter().enumerate().skip(1) {
            acc += e * Rational::from_integer(beta.get(offset + j - 1).into());
        }
        acc
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.eta[0])?;
        for (j, e) in self.eta.iter().enumerate().skip(1) {
            write!(f, " + ({e})b{}", j - 1)?;
        }
        Ok(())
    }
}

/// Fits the linear form that `phi_beta(g, -)` agrees with on the
/// semiallowable region. Coefficients refer to `g` translated to `minv = 0`.
pub fn fit_linear_phi(g: &LongEdgeGraph) -> Result<LinearForm> {
    let g = g.normalized();
    let len = g.length()?;
    let base = g.cogenus() as u64 + 2;
    let point = |bumps: &[u64]| {
        BetaSeq((0..len).map(|i| base + bumps.get(i).copied().unwrap_or(0)).collect())
    };
    let v0 = phi_beta(&g, &point(&[]));
    let mut eta = vec![Rational::zero(); len + 1];
    let mut constant = v0.clone();
    for j in 1..=len {
        let mut bump = vec![0; len];
        bump[j - 1] = 1;
        eta[j] = phi_beta(&g, &point(&bump)) - &v0;
        constant -= &eta[j] * Rational::from_integer(base.into());
    }
    eta[0] = constant;
    let form = LinearForm::from_eta(eta);
    let checks: [Vec<u64>; 2] = [
        (0..len as u64).map(|i| 1 + i % 3).collect(),
        (0..len as u64).map(|i| 2 * (len as u64 - i) + 1).collect(),
    ];
    for bumps in &checks {
        let beta = point(bumps);
        let actual = phi_beta(&g, &beta);
        let fitted = form.eval_at(&beta, 0);
        if actual != fitted {
            return Err(Error::LinearityViolation {
                graph: g.to_string(),
                fitted: fitted.to_string(),
                actual: actual.to_string(),
            });
        }
    }
    Ok(form)
}

/// Memoizes fitted forms by normalized graph.
#[derive(Default)]
pub struct FitCache {
    forms: HashMap<LongEdgeGraph, LinearForm>,
}

impl FitCache {
    pub fn get(&mut self, g: &LongEdgeGraph) -> Result<&LinearForm> {
        let key = g.normalized();
        if !self.forms.contains_key(&key) {
            let form = fit_linear_phi(&key)?;
            self.forms.insert(key.clone(), form);
        }
        Ok(&self.forms[&key])
    }
}
