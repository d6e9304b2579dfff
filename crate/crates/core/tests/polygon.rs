mod common;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use toric_severi::polygon::{HTPolygon, PolygonInput};

/// Boundary lattice points, counterclockwise with collinear points dropped.
fn corners(p: &HTPolygon) -> Vec<[i64; 2]> {
    let m = p.height() as i64;
    let mut xl = 0;
    let mut xr = p.dt() as i64;
    let mut left = vec![[xl, m]];
    let mut right = vec![[xr, m]];
    for (k, (l, r)) in p.left().iter().zip(p.right()).enumerate() {
        xl += l;
        xr += r;
        left.push([xl, m - 1 - k as i64]);
        right.push([xr, m - 1 - k as i64]);
    }
    right.reverse();
    let mut ring: Vec<[i64; 2]> = left.into_iter().chain(right).collect();
    ring.dedup();
    if ring.len() > 1 && ring[0] == ring[ring.len() - 1] {
        ring.pop();
    }
    let n = ring.len();
    (0..n)
        .filter(|&i| {
            let (a, b, c) = (ring[(i + n - 1) % n], ring[i], ring[(i + 1) % n]);
            (b[0] - a[0]) * (c[1] - b[1]) - (b[1] - a[1]) * (c[0] - b[0]) != 0
        })
        .map(|i| ring[i])
        .collect()
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

#[test]
fn area_and_boundary_match_lattice_geometry() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..200 {
        let p = common::random_polygon(&mut rng);
        let c = corners(&p);
        if c.len() < 3 {
            continue;
        }
        let n = c.len();
        let twice_area: i64 = (0..n).map(|i| c[i][0] * c[(i + 1) % n][1] - c[(i + 1) % n][0] * c[i][1]).sum();
        let boundary: i64 = (0..n).map(|i| gcd(c[(i + 1) % n][0] - c[i][0], c[(i + 1) % n][1] - c[i][1])).sum();
        let s = p.stats();
        let inv = p.toric_invariants();
        assert_eq!(s.area, twice_area.abs(), "{p:?}");
        assert_eq!(s.ll, boundary, "{p:?}");
        assert_eq!((inv.lsq, inv.lk), (s.area, -s.ll), "{p:?}");
        assert_eq!(s.v.values().sum::<usize>(), n, "{p:?}");
    }
}

#[test]
fn vertices_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..200 {
        let p = common::random_polygon(&mut rng);
        let c = corners(&p);
        if c.len() < 3 {
            continue;
        }
        assert_eq!(HTPolygon::from_vertices(&c).unwrap(), p);
    }
}

#[test]
fn json_inputs_agree() {
    let by_vertices: PolygonInput = serde_json::from_str(r#"{"vertices": [[0,0],[4,0],[0,4]]}"#).unwrap();
    let by_runs: PolygonInput =
        serde_json::from_str(r#"{"dt": 0, "left": [[0, 4]], "right": [[1, 4]]}"#).unwrap();
    assert_eq!(by_vertices.build().unwrap(), by_runs.build().unwrap());
}

#[test]
fn rejects_non_transverse_edges() {
    let err = HTPolygon::from_vertices(&[[0, 0], [2, 0], [3, 2], [1, 3], [0, 2]]).unwrap_err();
    assert!(err.to_string().contains("h-transverse"), "{err}");
}
