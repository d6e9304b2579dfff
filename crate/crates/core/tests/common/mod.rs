#![allow(dead_code)]

use std::collections::HashMap;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;
use toric_severi::graphs::LongEdgeGraph;
use toric_severi::orderings::BetaSeq;
use toric_severi::polygon::{HTPolygon, PolygonInput};

/// Counts extended orderings by walking all words over edge classes.
///
/// Vertices are written in increasing order; an edge from `a` to `b` may be
/// written once `a` is written and before `b` is.
pub fn orderings_by_walk(g: &LongEdgeGraph, beta: &BetaSeq) -> u128 {
    let m = beta.height();
    if g.maxv().is_ok_and(|v| v > m + 1) {
        return 0;
    }
    let mut classes: Vec<(usize, usize, usize)> = g.classes().iter().map(|(e, c)| (e.lo(), e.hi(), *c)).collect();
    for j in 1..=m + 1 {
        let lambda = g.lambda(j);
        if beta.get(j - 1) < lambda {
            return 0;
        }
        let shorts = (beta.get(j - 1) - lambda) as usize;
        if shorts > 0 {
            classes.push((j - 1, j, shorts));
        }
    }
    let remaining: Vec<usize> = classes.iter().map(|c| c.2).collect();
    let mut memo = HashMap::new();
    walk(&classes, 0, m + 1, remaining, &mut memo)
}

fn walk(
    classes: &[(usize, usize, usize)],
    next_vertex: usize,
    last_vertex: usize,
    remaining: Vec<usize>,
    memo: &mut HashMap<(usize, Vec<usize>), u128>,
) -> u128 {
    if next_vertex > last_vertex {
        return remaining.iter().all(|&r| r == 0) as u128;
    }
    let key = (next_vertex, remaining.clone());
    if let Some(&v) = memo.get(&key) {
        return v;
    }
    let mut total = 0;
    let blocked = classes.iter().zip(&remaining).any(|(c, &r)| r > 0 && c.1 == next_vertex);
    if !blocked {
        total += walk(classes, next_vertex + 1, last_vertex, remaining.clone(), memo);
    }
    for (i, c) in classes.iter().enumerate() {
        if remaining[i] > 0 && c.0 < next_vertex && next_vertex <= c.1 {
            let mut rest = remaining.clone();
            rest[i] -= 1;
            total += walk(classes, next_vertex, last_vertex, rest, memo);
        }
    }
    memo.insert(key, total);
    total
}

/// A random valid h-transverse polygon.
pub fn random_polygon(rng: &mut ChaCha8Rng) -> HTPolygon {
    loop {
        let m = rng.gen_range(1..=6);
        let mut left: Vec<i64> = (0..m).map(|_| rng.gen_range(-3..=3)).collect();
        let mut right: Vec<i64> = (0..m).map(|_| rng.gen_range(-3..=3)).collect();
        left.sort_unstable();
        right.sort_unstable_by(|a, b| b.cmp(a));
        let dt = rng.gen_range(0..=4);
        if let Ok(p) = HTPolygon::new(dt, left, right) {
            return p;
        }
    }
}

#[derive(Deserialize)]
pub struct CorpusEntry {
    pub name: String,
    pub polygon: PolygonInput,
    pub delta_max: usize,
    /// `N^0, N^1, ...` as integers.
    pub n: Vec<i64>,
}

pub fn corpus() -> Vec<CorpusEntry> {
    let raw = include_str!("../fixtures/corpus.json");
    serde_json::from_str(raw).expect("corpus fixture parses")
}
