//! h-transverse lattice polygons.
//!
//! A polygon of height `M` is described from the top down: `dt` is the width
//! of the top edge (0 for a top vertex), and `left[i]`, `right[i]` are the
//! horizontal displacements of the left and right boundaries over the unit
//! step from level `i` to level `i + 1`. Convexity makes `left`
//! nondecreasing and `right` nonincreasing.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::coeffs::cor_doubleprime;
use crate::error::{Error, Result};
use crate::orderings::{beta_from_divergence, BetaSeq};
use crate::{rat, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HTPolygon {
    dt: u64,
    db: u64,
    left: Vec<i64>,
    right: Vec<i64>,
}

/// Which boundary a vertex or edge lies on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
    Top,
    Bottom,
}

/// A maximal run of equal directions on one side.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Run {
    pub dir: i64,
    pub start: usize,
    pub len: usize,
}

fn runs(seq: &[i64]) -> Vec<Run> {
    let mut out: Vec<Run> = Vec::new();
    for (i, &d) in seq.iter().enumerate() {
        match out.last_mut() {
            Some(r) if r.dir == d => r.len += 1,
            _ => out.push(Run { dir: d, start: i, len: 1 }),
        }
    }
    out
}

fn expand(runs: &[[i64; 2]], what: &str) -> Result<Vec<i64>> {
    let mut out = Vec::new();
    for &[dir, len] in runs {
        if len < 1 {
            return Err(Error::InvalidPolygon(format!("{what} run with direction {dir} has length {len}")));
        }
        out.extend(std::iter::repeat_n(dir, len as usize));
    }
    Ok(out)
}

fn encode(seq: &[i64]) -> Vec<[i64; 2]> {
    runs(seq).iter().map(|r| [r.dir, r.len as i64]).collect()
}

fn det(a: (i64, i64), b: (i64, i64)) -> i64 {
    a.0 * b.1 - a.1 * b.0
}

/// A polygon vertex between two consecutive edges in counterclockwise order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VertexInfo {
    pub det: u64,
    pub internal: bool,
    /// Side of the vertex for internal vertices, `Top` / `Bottom` otherwise.
    pub side: Side,
}

/// A primitive outward normal with the lattice length of its edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Ray {
    normal: (i64, i64),
    side: Side,
    length: u64,
}

impl HTPolygon {
    pub fn new(dt: u64, left: Vec<i64>, right: Vec<i64>) -> Result<Self> {
        if left.is_empty() || left.len() != right.len() {
            return Err(Error::InvalidPolygon(format!(
                "left and right must have the same positive length, got {} and {}",
                left.len(),
                right.len()
            )));
        }
        if let Some(i) = (1..left.len()).find(|&i| left[i] < left[i - 1]) {
            return Err(Error::InvalidPolygon(format!("left directions decrease at step {}", i + 1)));
        }
        if let Some(i) = (1..right.len()).find(|&i| right[i] > right[i - 1]) {
            return Err(Error::InvalidPolygon(format!("right directions increase at step {}", i + 1)));
        }
        let mut d = vec![dt as i64];
        d.extend(left.iter().zip(&right).map(|(l, r)| r - l));
        let beta = beta_from_divergence(&d)
            .map_err(|_| Error::InvalidPolygon("widths become negative".into()))?;
        if beta.entries().iter().all(|&b| b == 0) {
            return Err(Error::InvalidPolygon("polygon has no interior".into()));
        }
        let db = beta.get(beta.height());
        Ok(HTPolygon { dt, db, left, right })
    }

    /// Builds a polygon from run-length encoded directions `[dir, len]`.
    pub fn from_directions(dt: u64, left: &[[i64; 2]], right: &[[i64; 2]]) -> Result<Self> {
        Self::new(dt, expand(left, "left")?, expand(right, "right")?)
    }

    /// Builds a polygon from counterclockwise lattice vertices.
    pub fn from_vertices(vertices: &[[i64; 2]]) -> Result<Self> {
        let n = vertices.len();
        if n < 3 {
            return Err(Error::InvalidPolygon("need at least three vertices".into()));
        }
        let p = |i: usize| (vertices[i % n][0], vertices[i % n][1]);
        let mut twice_area = 0;
        for i in 0..n {
            let (a, b, c) = (p(i), p(i + 1), p(i + 2));
            if a == b {
                return Err(Error::InvalidPolygon(format!("repeated vertex {a:?}")));
            }
            let turn = det((b.0 - a.0, b.1 - a.1), (c.0 - b.0, c.1 - b.1));
            if turn < 0 {
                return Err(Error::InvalidPolygon(format!(
                    "not convex and counterclockwise at vertex {b:?}"
                )));
            }
            twice_area += det(a, b);
        }
        if twice_area <= 0 {
            return Err(Error::InvalidPolygon("vertices are not counterclockwise".into()));
        }
        for i in 0..n {
            let (a, b) = (p(i), p(i + 1));
            let (dx, dy) = (b.0 - a.0, b.1 - a.1);
            if dy != 0 && dx % dy != 0 {
                return Err(Error::InvalidPolygon(format!(
                    "edge {a:?} -> {b:?} is not h-transverse: normal slope {}/{} is not integral",
                    -dx,
                    dy
                )));
            }
        }
        let ymax = vertices.iter().map(|v| v[1]).max().expect("nonempty");
        let ymin = vertices.iter().map(|v| v[1]).min().expect("nonempty");
        if ymax == ymin {
            return Err(Error::InvalidPolygon("polygon has zero height".into()));
        }
        let rows = (ymax - ymin) as usize + 1;
        let mut lo = vec![i64::MAX; rows];
        let mut hi = vec![i64::MIN; rows];
        for i in 0..n {
            let (a, b) = (p(i), p(i + 1));
            let (dx, dy) = (b.0 - a.0, b.1 - a.1);
            let mut mark = |x: i64, y: i64| {
                let row = (ymax - y) as usize;
                lo[row] = lo[row].min(x);
                hi[row] = hi[row].max(x);
            };
            if dy == 0 {
                mark(a.0, a.1);
                mark(b.0, b.1);
                continue;
            }
            let step = dx / dy;
            let (y0, y1) = (a.1.min(b.1), a.1.max(b.1));
            for y in y0..=y1 {
                mark(a.0 + (y - a.1) * step, y);
            }
        }
        let left = (1..rows).map(|i| lo[i] - lo[i - 1]).collect();
        let right = (1..rows).map(|i| hi[i] - hi[i - 1]).collect();
        Self::new((hi[0] - lo[0]) as u64, left, right)
    }

    pub fn dt(&self) -> u64 {
        self.dt
    }

    pub fn db(&self) -> u64 {
        self.db
    }

    pub fn left(&self) -> &[i64] {
        &self.left
    }

    pub fn right(&self) -> &[i64] {
        &self.right
    }

    pub fn height(&self) -> usize {
        self.left.len()
    }

    /// Widths at integer heights from top to bottom.
    pub fn beta(&self) -> BetaSeq {
        beta_with(self.dt, &self.left, &self.right).expect("validated on construction")
    }

    /// Primitive outward normals in counterclockwise order, starting at the
    /// bottom edge (or the lowest right edge when there is none).
    fn rays(&self) -> Vec<Ray> {
        let mut out = Vec::new();
        if self.db > 0 {
            out.push(Ray { normal: (0, -1), side: Side::Bottom, length: self.db });
        }
        let right = runs(&self.right);
        for r in right.iter().rev() {
            out.push(Ray { normal: (1, r.dir), side: Side::Right, length: r.len as u64 });
        }
        if self.dt > 0 {
            out.push(Ray { normal: (0, 1), side: Side::Top, length: self.dt });
        }
        for r in runs(&self.left).iter() {
            out.push(Ray { normal: (-1, -r.dir), side: Side::Left, length: r.len as u64 });
        }
        out
    }

    /// Vertices in counterclockwise order; vertex `i` joins ray `i` and ray `i + 1`.
    pub fn vertices(&self) -> Vec<VertexInfo> {
        let rays = self.rays();
        let n = rays.len();
        (0..n)
            .map(|i| {
                let (a, b) = (rays[i], rays[(i + 1) % n]);
                let d = det(a.normal, b.normal);
                debug_assert!(d > 0, "normals must turn counterclockwise");
                let internal = a.side == b.side && matches!(a.side, Side::Left | Side::Right);
                let side = if internal {
                    a.side
                } else if a.side == Side::Bottom || b.side == Side::Bottom || (a.side == Side::Left && b.side == Side::Right) {
                    Side::Bottom
                } else {
                    Side::Top
                };
                VertexInfo { det: d as u64, internal, side }
            })
            .collect()
    }

    /// Lattice lengths of all edges.
    pub fn edge_lengths(&self) -> Vec<u64> {
        self.rays().iter().map(|r| r.length).collect()
    }

    pub fn min_edge_length(&self) -> u64 {
        self.edge_lengths().into_iter().min().expect("polygons have edges")
    }

    /// Determinant of the top vertex, 0 when there is a top edge.
    pub fn tdet(&self) -> u64 {
        if self.dt > 0 {
            0
        } else {
            (self.right[0] - self.left[0]) as u64
        }
    }

    /// Determinant of the bottom vertex, 0 when there is a bottom edge.
    pub fn bdet(&self) -> u64 {
        let m = self.height() - 1;
        if self.db > 0 {
            0
        } else {
            (self.left[m] - self.right[m]) as u64
        }
    }

    /// Minimum length over internal and extremal edges, `None` when there
    /// are no internal vertices.
    pub fn ell(&self) -> Option<u64> {
        [&self.left, &self.right]
            .iter()
            .map(|s| runs(s))
            .filter(|r| r.len() >= 2)
            .flat_map(|r| r.into_iter().map(|run| run.len as u64))
            .min()
    }

    pub fn stats(&self) -> PolygonStats {
        let beta = self.beta();
        let e = beta.entries();
        let m = self.height();
        let vertices = self.vertices();
        let mut v = BTreeMap::new();
        let mut v_internal = BTreeMap::new();
        for x in &vertices {
            *v.entry(x.det).or_insert(0) += 1;
            if x.internal {
                *v_internal.entry(x.det).or_insert(0) += 1;
            }
        }
        PolygonStats {
            area: (e[0] + 2 * e[1..m].iter().sum::<u64>() + e[m]) as i64,
            ll: (e[0] + e[m]) as i64 + 2 * m as i64,
            height: m,
            idet: vertices.iter().filter(|x| x.internal).map(|x| x.det as i64).sum(),
            det: vertices.iter().map(|x| x.det as i64).sum(),
            tdet: self.tdet(),
            bdet: self.bdet(),
            v,
            v_internal,
            min_edge_length: self.min_edge_length(),
            ell: self.ell(),
        }
    }

    /// Self-intersection of the canonical class, from the normal fan.
    pub fn ksq(&self) -> Rational {
        let rays = self.rays();
        let n = rays.len();
        let mut total = Rational::zero();
        for i in 0..n {
            let prev = rays[(i + n - 1) % n].normal;
            let cur = rays[i].normal;
            let next = rays[(i + 1) % n].normal;
            let d_prev = det(prev, cur);
            let d_next = det(cur, next);
            let d_i = det(prev, next);
            total += Rational::new(1.into(), d_prev.into()) + Rational::new(1.into(), d_next.into())
                - Rational::new(d_i.into(), (d_prev * d_next).into());
        }
        total
    }

    pub fn toric_invariants(&self) -> ToricInvariants {
        let stats = self.stats();
        let mut s_i = BTreeMap::new();
        for (&d, &count) in &stats.v {
            if d > 1 {
                s_i.insert(d - 1, count);
            }
        }
        let gorenstein = stats.tdet <= 2 && stats.bdet <= 2;
        ToricInvariants {
            lsq: stats.area,
            lk: -stats.ll,
            ksq: self.ksq(),
            c2: self.vertices().len(),
            c2tilde: stats.det,
            s: s_i.iter().map(|(&i, &c)| (i + 1) as i64 * c as i64).sum(),
            s_i,
            gorenstein,
        }
    }

    /// All reorderings with cogenus at most `delta` and nonnegative widths.
    pub fn reorderings(&self, delta: usize) -> Vec<Reordering> {
        let mut rights = Vec::new();
        permutations(&self.right, delta, Side::Right, &mut rights);
        let mut out = Vec::new();
        for (r, cr) in rights {
            let mut lefts = Vec::new();
            permutations(&self.left, delta - cr, Side::Left, &mut lefts);
            for (l, cl) in lefts {
                if let Ok(beta) = beta_with(self.dt, &l, &r) {
                    out.push(Reordering { left: l, right: r.clone(), cogenus: cr + cl, beta });
                }
            }
        }
        out
    }

    /// Splits a reordering into one piece per internal vertex.
    pub fn vlocal_decompose(&self, left: &[i64], right: &[i64]) -> Result<Vec<VLocalPiece>> {
        let total = reordering_cogenus(left, right);
        for (side, default, seq) in [(Side::Left, &self.left, left), (Side::Right, &self.right, right)] {
            let rs = runs(default);
            if rs.len() >= 3 && rs[1..rs.len() - 1].iter().any(|r| r.len < total) {
                return Err(Error::Decomposition(format!(
                    "an internal {side:?} edge is shorter than the reordering cogenus {total}"
                )));
            }
            let mut a = default.to_vec();
            let mut b = seq.to_vec();
            a.sort_unstable();
            b.sort_unstable();
            if a != b {
                return Err(Error::Decomposition(format!("{side:?} directions are not a permutation")));
            }
        }
        let mut pieces = Vec::new();
        for (side, default, seq) in [(Side::Left, &self.left, left), (Side::Right, &self.right, right)] {
            let rs = runs(default);
            for j in 0..rs.len().saturating_sub(1) {
                let (a, b) = (rs[j], rs[j + 1]);
                let mut piece = default.clone();
                let window: Vec<i64> = seq.iter().copied().filter(|&x| x == a.dir || x == b.dir).collect();
                piece[a.start..b.start + b.len].copy_from_slice(&window);
                let (pl, pr) = match side {
                    Side::Left => (piece, self.right.clone()),
                    _ => (self.left.clone(), piece),
                };
                let cogenus = reordering_cogenus(&pl, &pr);
                pieces.push(VLocalPiece {
                    side,
                    vertex: j,
                    det: (b.dir - a.dir).unsigned_abs(),
                    left: pl,
                    right: pr,
                    cogenus,
                });
            }
        }
        if pieces.iter().map(|p| p.cogenus).sum::<usize>() != total {
            return Err(Error::Decomposition("piece cogenera do not add up".into()));
        }
        Ok(pieces)
    }

    /// Inverse of [`HTPolygon::vlocal_decompose`].
    pub fn vlocal_recombine(&self, pieces: &[VLocalPiece]) -> Result<(Vec<i64>, Vec<i64>)> {
        let mut sides = Vec::new();
        for (side, default) in [(Side::Left, &self.left), (Side::Right, &self.right)] {
            let rs = runs(default);
            let mut words = Vec::new();
            for j in 0..rs.len().saturating_sub(1) {
                let piece = pieces
                    .iter()
                    .find(|p| p.side == side && p.vertex == j)
                    .ok_or_else(|| Error::Decomposition(format!("missing {side:?} piece {j}")))?;
                let seq = if side == Side::Left { &piece.left } else { &piece.right };
                let (a, b) = (rs[j], rs[j + 1]);
                // Class index of each letter in the window.
                let word: Vec<usize> =
                    seq[a.start..b.start + b.len].iter().map(|&x| if x == a.dir { j } else { j + 1 }).collect();
                words.push(word);
            }
            sides.push(merge_classes(&rs, &words)?);
        }
        let right = sides.pop().expect("two sides");
        let left = sides.pop().expect("two sides");
        Ok((left, right))
    }
}

/// Greedy merge of pairwise orders between adjacent classes.
fn merge_classes(rs: &[Run], words: &[Vec<usize>]) -> Result<Vec<i64>> {
    let k = rs.len();
    let mut emitted = vec![0usize; k];
    let mut out = Vec::new();
    let total: usize = rs.iter().map(|r| r.len).sum();
    let next_in = |w: usize, emitted: &[usize]| -> Option<usize> {
        words[w].get(emitted[w] + emitted[w + 1]).copied()
    };
    while out.len() < total {
        let ready = (0..k).find(|&c| {
            emitted[c] < rs[c].len
                && (c < 2 || (0..c - 1).all(|e| emitted[e] == rs[e].len))
                && (c == 0 || next_in(c - 1, &emitted) == Some(c))
                && (c + 1 == k || next_in(c, &emitted) == Some(c))
        });
        let Some(c) = ready else {
            return Err(Error::Decomposition("pieces cannot be merged".into()));
        };
        emitted[c] += 1;
        out.push(rs[c].dir);
    }
    Ok(out)
}

fn beta_with(dt: u64, left: &[i64], right: &[i64]) -> Result<BetaSeq> {
    let mut d = vec![dt as i64];
    d.extend(left.iter().zip(right).map(|(l, r)| r - l));
    beta_from_divergence(&d)
}

fn cost(side: Side, earlier: i64, later: i64) -> usize {
    match side {
        Side::Left if earlier > later => (earlier - later) as usize,
        Side::Right if earlier < later => (later - earlier) as usize,
        _ => 0,
    }
}

/// The cogenus of a reordering: weighted reversals of `r` and of `-l`.
pub fn reordering_cogenus(left: &[i64], right: &[i64]) -> usize {
    let mut total = 0;
    for (side, s) in [(Side::Left, left), (Side::Right, right)] {
        for i in 0..s.len() {
            for j in i + 1..s.len() {
                total += cost(side, s[i], s[j]);
            }
        }
    }
    total
}

/// Distinct permutations of `values` with cost at most `budget`.
fn permutations(values: &[i64], budget: usize, side: Side, out: &mut Vec<(Vec<i64>, usize)>) {
    let mut counts: BTreeMap<i64, usize> = BTreeMap::new();
    for &v in values {
        *counts.entry(v).or_insert(0) += 1;
    }
    let mut classes: Vec<(i64, usize)> = counts.into_iter().collect();
    if side == Side::Right {
        classes.reverse();
    }
    let mut prefix = Vec::with_capacity(values.len());
    permute_rec(&mut classes, values.len(), budget, 0, side, &mut prefix, out);
}

fn permute_rec(
    classes: &mut [(i64, usize)],
    len: usize,
    budget: usize,
    spent: usize,
    side: Side,
    prefix: &mut Vec<i64>,
    out: &mut Vec<(Vec<i64>, usize)>,
) {
    if prefix.len() == len {
        out.push((prefix.clone(), spent));
        return;
    }
    for i in 0..classes.len() {
        if classes[i].1 == 0 {
            continue;
        }
        let x = classes[i].0;
        let add: usize = prefix.iter().map(|&y| cost(side, y, x)).sum();
        if spent + add > budget {
            continue;
        }
        classes[i].1 -= 1;
        prefix.push(x);
        permute_rec(classes, len, budget, spent + add, side, prefix, out);
        prefix.pop();
        classes[i].1 += 1;
    }
}

/// A reordering of the side directions together with its width sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reordering {
    pub left: Vec<i64>,
    pub right: Vec<i64>,
    pub cogenus: usize,
    pub beta: BetaSeq,
}

/// The part of a reordering local to one internal vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VLocalPiece {
    pub side: Side,
    /// Index of the internal vertex along its side, from the top.
    pub vertex: usize,
    pub det: u64,
    pub left: Vec<i64>,
    pub right: Vec<i64>,
    pub cogenus: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PolygonStats {
    pub area: i64,
    pub ll: i64,
    pub height: usize,
    pub idet: i64,
    pub det: i64,
    pub tdet: u64,
    pub bdet: u64,
    /// Number of vertices by determinant.
    pub v: BTreeMap<u64, usize>,
    /// Number of internal vertices by determinant.
    pub v_internal: BTreeMap<u64, usize>,
    pub min_edge_length: u64,
    /// `None` stands for an unbounded value.
    pub ell: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ToricInvariants {
    pub lsq: i64,
    pub lk: i64,
    #[serde(with = "crate::rational_serde")]
    pub ksq: Rational,
    pub c2: usize,
    pub c2tilde: i64,
    /// `s_i[i]` counts vertices of determinant `i + 1`.
    pub s_i: BTreeMap<u64, usize>,
    pub s: i64,
    pub gorenstein: bool,
}

impl ToricInvariants {
    pub fn s_at(&self, i: u64) -> usize {
        self.s_i.get(&i).copied().unwrap_or(0)
    }
}

/// `12 - K^2 + COR''(tdet) + COR''(bdet)`.
pub fn noether_defect(p: &HTPolygon) -> Rational {
    rat(12) - p.ksq() + cor_doubleprime(p.tdet()) + cor_doubleprime(p.bdet())
}

/// JSON input: either vertices or run-length encoded directions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PolygonInput {
    Vertices { vertices: Vec<[i64; 2]> },
    Directions { dt: u64, left: Vec<[i64; 2]>, right: Vec<[i64; 2]> },
}

impl PolygonInput {
    pub fn build(&self) -> Result<HTPolygon> {
        match self {
            PolygonInput::Vertices { vertices } => HTPolygon::from_vertices(vertices),
            PolygonInput::Directions { dt, left, right } => HTPolygon::from_directions(*dt, left, right),
        }
    }
}

/// Normalized JSON form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolygonJson {
    pub dt: u64,
    pub db: u64,
    pub left: Vec<[i64; 2]>,
    pub right: Vec<[i64; 2]>,
}

impl From<&HTPolygon> for PolygonJson {
    fn from(p: &HTPolygon) -> Self {
        PolygonJson { dt: p.dt, db: p.db, left: encode(&p.left), right: encode(&p.right) }
    }
}

impl fmt::Display for HTPolygon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let j = PolygonJson::from(self);
        write!(f, "dt={} db={} left={:?} right={:?}", j.dt, j.db, j.left, j.right)
    }
}

/// The triangle `conv{(0,0), (d,0), (0,d)}`.
pub fn triangle(d: usize) -> HTPolygon {
    HTPolygon::new(0, vec![0; d], vec![1; d]).expect("valid triangle")
}

/// The `a` by `b` rectangle (width `a`, height `b`).
pub fn rectangle(a: u64, b: usize) -> HTPolygon {
    HTPolygon::new(a, vec![0; b], vec![0; b]).expect("valid rectangle")
}
