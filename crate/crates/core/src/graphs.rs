//! Long-edge graphs and templates.
//!
//! A long-edge graph is a finite multiset of weighted edges on the vertex set
//! `{0, 1, 2, ...}` with no loops and no weight-1 edge between consecutive
//! vertices. Graphs are kept in canonical form (edges sorted by
//! `(lo, hi, weight)`), so structural equality is multiset equality.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A weighted edge from `lo` to `hi`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    lo: usize,
    hi: usize,
    weight: u64,
}

impl Edge {
    pub fn new(lo: usize, hi: usize, weight: u64) -> Result<Self> {
        let bad = |reason| Err(Error::InvalidEdge { lo, hi, weight, reason });
        if lo >= hi {
            return bad("endpoints must satisfy lo < hi");
        }
        if weight == 0 {
            return bad("weight must be positive");
        }
        if hi == lo + 1 && weight == 1 {
            return bad("short edges are not allowed");
        }
        Ok(Edge { lo, hi, weight })
    }

    pub fn lo(&self) -> usize {
        self.lo
    }

    pub fn hi(&self) -> usize {
        self.hi
    }

    pub fn weight(&self) -> u64 {
        self.weight
    }

    /// `hi - lo`.
    pub fn length(&self) -> usize {
        self.hi - self.lo
    }

    /// Contribution `length * weight - 1` of this edge to the cogenus.
    pub fn cogenus(&self) -> usize {
        self.length() * self.weight as usize - 1
    }

    fn shifted(&self, k: usize) -> Edge {
        Edge { lo: self.lo + k, hi: self.hi + k, weight: self.weight }
    }
}

/// A long-edge graph in canonical form.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LongEdgeGraph {
    edges: Vec<Edge>,
}

impl LongEdgeGraph {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn new(mut edges: Vec<Edge>) -> Self {
        edges.sort_unstable();
        LongEdgeGraph { edges }
    }

    /// Builds a graph from `(lo, hi, weight)` triples, validating each edge.
    pub fn from_triples(triples: &[(usize, usize, u64)]) -> Result<Self> {
        let edges = triples
            .iter()
            .map(|&(lo, hi, w)| Edge::new(lo, hi, w))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::new(edges))
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn triples(&self) -> Vec<[u64; 3]> {
        self.edges.iter().map(|e| [e.lo as u64, e.hi as u64, e.weight]).collect()
    }

    /// Product of squared weights.
    pub fn multiplicity(&self) -> u64 {
        self.edges.iter().map(|e| e.weight * e.weight).product()
    }

    pub fn cogenus(&self) -> usize {
        self.edges.iter().map(Edge::cogenus).sum()
    }

    /// Total weight of the edges from `i` to `k` with `i < j <= k`.
    pub fn lambda(&self, j: usize) -> u64 {
        self.edges
            .iter()
            .filter(|e| e.lo < j && j <= e.hi)
            .map(|e| e.weight)
            .sum()
    }

    /// `lambda(j)` minus the number of edges from `j - 1` to `j`.
    pub fn olambda(&self, j: usize) -> u64 {
        let short = self.edges.iter().filter(|e| e.lo + 1 == j && e.hi == j).count() as u64;
        self.lambda(j) - short
    }

    pub fn minv(&self) -> Result<usize> {
        self.edges.first().map(|e| e.lo).ok_or(Error::EmptyGraph("minv"))
    }

    pub fn maxv(&self) -> Result<usize> {
        self.edges.iter().map(|e| e.hi).max().ok_or(Error::EmptyGraph("maxv"))
    }

    pub fn length(&self) -> Result<usize> {
        Ok(self.maxv()? - self.minv()?)
    }

    /// Shifts every edge `k` units to the right.
    pub fn shift(&self, k: usize) -> Self {
        LongEdgeGraph { edges: self.edges.iter().map(|e| e.shifted(k)).collect() }
    }

    /// Translates the graph so that `minv` becomes 0. The empty graph is
    /// returned unchanged.
    pub fn normalized(&self) -> Self {
        match self.minv() {
            Ok(m) => LongEdgeGraph {
                edges: self
                    .edges
                    .iter()
                    .map(|e| Edge { lo: e.lo - m, hi: e.hi - m, weight: e.weight })
                    .collect(),
            },
            Err(_) => self.clone(),
        }
    }

    /// Whether every edge at `minv` has weight 1.
    pub fn epsilon0(&self) -> Result<bool> {
        let m = self.minv()?;
        Ok(self.edges.iter().filter(|e| e.lo == m).all(|e| e.weight == 1))
    }

    /// Whether every edge at `maxv` has weight 1.
    pub fn epsilon1(&self) -> Result<bool> {
        let m = self.maxv()?;
        Ok(self.edges.iter().filter(|e| e.hi == m).all(|e| e.weight == 1))
    }

    /// Every interior vertex strictly between `minv` and `maxv` lies strictly
    /// inside some edge.
    fn interior_covered(&self) -> bool {
        let (Ok(lo), Ok(hi)) = (self.minv(), self.maxv()) else {
            return false;
        };
        (lo + 1..hi).all(|i| self.edges.iter().any(|e| e.lo < i && i < e.hi))
    }

    pub fn is_template(&self) -> bool {
        self.minv() == Ok(0) && self.interior_covered()
    }

    pub fn is_shifted_template(&self) -> bool {
        !self.is_empty() && self.interior_covered()
    }

    /// Distinct edges with their multiplicities, in canonical order.
    pub fn classes(&self) -> Vec<(Edge, usize)> {
        let mut out: Vec<(Edge, usize)> = Vec::new();
        for e in &self.edges {
            match out.last_mut() {
                Some((last, count)) if last == e => *count += 1,
                _ => out.push((*e, 1)),
            }
        }
        out
    }

    /// Canonical JSON form `{"edges":[[lo,hi,weight],...]}`.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(GraphJson { edges: self.triples() }).expect("graph serializes")
    }
}

impl fmt::Display for LongEdgeGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, e) in self.edges.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}->{}:{}", e.lo, e.hi, e.weight)?;
        }
        write!(f, "}}")
    }
}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    edges: Vec<[u64; 3]>,
}

impl Serialize for LongEdgeGraph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GraphJson { edges: self.triples() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for LongEdgeGraph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = GraphJson::deserialize(d)?;
        let triples: Vec<_> =
            raw.edges.iter().map(|t| (t[0] as usize, t[1] as usize, t[2])).collect();
        LongEdgeGraph::from_triples(&triples).map_err(serde::de::Error::custom)
    }
}

/// A non-empty long-edge graph with `minv = 0` whose edges cover every
/// interior vertex.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Template(LongEdgeGraph);

impl TryFrom<LongEdgeGraph> for Template {
    type Error = Error;

    fn try_from(g: LongEdgeGraph) -> Result<Self> {
        if g.is_template() {
            Ok(Template(g))
        } else {
            Err(Error::NotTemplate(g.to_string()))
        }
    }
}

impl<'de> Deserialize<'de> for Template {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let g = LongEdgeGraph::deserialize(d)?;
        Template::try_from(g).map_err(serde::de::Error::custom)
    }
}

impl Template {
    pub fn graph(&self) -> &LongEdgeGraph {
        &self.0
    }

    pub fn into_graph(self) -> LongEdgeGraph {
        self.0
    }

    pub fn length(&self) -> usize {
        self.0.maxv().expect("templates are non-empty")
    }

    pub fn cogenus(&self) -> usize {
        self.0.cogenus()
    }

    pub fn multiplicity(&self) -> u64 {
        self.0.multiplicity()
    }

    pub fn epsilon0(&self) -> bool {
        self.0.epsilon0().expect("templates are non-empty")
    }

    pub fn epsilon1(&self) -> bool {
        self.0.epsilon1().expect("templates are non-empty")
    }

    /// The image under `n -> length - n`.
    pub fn conjugate(&self) -> Template {
        let l = self.length();
        let edges = self
            .0
            .edges
            .iter()
            .map(|e| Edge { lo: l - e.hi, hi: l - e.lo, weight: e.weight })
            .collect();
        Template(LongEdgeGraph::new(edges))
    }
}

impl fmt::Display for Template {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Every edge `(lo, hi, w)` with `hi <= max_vertex` whose cogenus
/// contribution is at most `budget`, in canonical order.
fn edge_kinds(max_vertex: usize, budget: usize) -> Vec<Edge> {
    let mut kinds = Vec::new();
    for lo in 0..max_vertex {
        for hi in lo + 1..=max_vertex {
            let len = hi - lo;
            if len > budget + 1 {
                break;
            }
            for w in 1..=(budget as u64 + 1) {
                if len == 1 && w == 1 {
                    continue;
                }
                if len * w as usize - 1 > budget {
                    break;
                }
                kinds.push(Edge { lo, hi, weight: w });
            }
        }
    }
    kinds
}

/// Collects every multiset of `kinds[from..]` whose cogenus is exactly
/// `remaining`, appended to `current`.
fn collect_multisets(
    kinds: &[Edge],
    from: usize,
    remaining: usize,
    current: &mut Vec<Edge>,
    out: &mut Vec<LongEdgeGraph>,
) {
    if remaining == 0 {
        out.push(LongEdgeGraph::new(current.clone()));
        return;
    }
    for (i, e) in kinds.iter().enumerate().skip(from) {
        let c = e.cogenus();
        if c <= remaining {
            current.push(*e);
            collect_multisets(kinds, i, remaining - c, current, out);
            current.pop();
        }
    }
}

/// All long-edge graphs of cogenus `delta` with `maxv <= max_vertex`,
/// duplicate-free and sorted canonically.
pub fn enumerate_graphs(delta: usize, max_vertex: usize) -> Vec<LongEdgeGraph> {
    if delta == 0 {
        return Vec::new();
    }
    let kinds = edge_kinds(max_vertex, delta);
    // Partition the search by first edge; each branch only uses kinds at or
    // after its first edge, so branches are disjoint.
    let mut out: Vec<LongEdgeGraph> = (0..kinds.len())
        .into_par_iter()
        .flat_map_iter(|first| {
            let mut branch = Vec::new();
            let c = kinds[first].cogenus();
            if c <= delta {
                let mut current = vec![kinds[first]];
                collect_multisets(&kinds, first, delta - c, &mut current, &mut branch);
            }
            branch
        })
        .collect();
    out.sort_unstable();
    for g in &out {
        debug_assert!(g.edges.len() <= delta);
        debug_assert_eq!(g.cogenus(), delta);
    }
    out
}

/// All templates of cogenus `delta`, in canonical order.
///
/// A template of cogenus `delta` has length at most `delta + 1`, so the
/// search is bounded by `max_vertex = delta + 1`.
pub fn enumerate_templates(delta: usize) -> Vec<Template> {
    enumerate_graphs(delta, delta + 1)
        .into_iter()
        .filter(LongEdgeGraph::is_template)
        .map(Template)
        .collect()
}
