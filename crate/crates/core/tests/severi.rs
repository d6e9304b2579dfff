use toric_severi::coeffs::CoeffContext;
use toric_severi::polygon::{rectangle, triangle, HTPolygon};
use toric_severi::severi::{
    n_bruteforce, n_from_q, q_from_n, q_geometric, q_polygon, report, t_delta, that_delta, Method, MethodValue,
};
use toric_severi::{rat, ratio, Rational};

/// Classical node polynomials of the projective plane, valid for `d >= delta`.
fn plane_nodes(d: i64, delta: usize) -> Rational {
    let d = rat(d);
    let horner = |cs: &[Rational]| cs.iter().fold(rat(0), |acc, c| acc * &d + c);
    match delta {
        1 => rat(3) * (&d - rat(1)).pow(2),
        2 => ratio(3, 2) * (&d - rat(1)) * (&d - rat(2)) * horner(&[rat(3), rat(-3), rat(-11)]),
        3 => horner(&[ratio(9, 2), rat(-27), ratio(9, 2), ratio(423, 2), rat(-229), ratio(-829, 2), rat(525)]),
        _ => unreachable!(),
    }
}

#[test]
fn closed_forms_reproduce_plane_node_polynomials() {
    let ctx = CoeffContext::global();
    for d in 3..=9 {
        let p = triangle(d);
        let q: Vec<Rational> = (1..=3).map(|delta| q_geometric(ctx, &p, delta).unwrap()).collect();
        let n = n_from_q(&q);
        for delta in 1..=3 {
            assert_eq!(n[delta], plane_nodes(d as i64, delta), "d = {d}, delta = {delta}");
            assert_eq!(q_polygon(ctx, &p, delta).unwrap(), q[delta - 1]);
        }
    }
}

#[test]
fn bruteforce_matches_plane_polynomials() {
    for d in 3..=5 {
        for delta in 1..=2 {
            let n = n_bruteforce(&triangle(d), delta).unwrap();
            assert_eq!(Rational::from_integer(n), plane_nodes(d as i64, delta));
        }
    }
}

#[test]
fn q_and_n_round_trip() {
    let n = vec![rat(1), rat(27), rat(225), rat(675)];
    let q = q_from_n(&n).unwrap();
    let mut back = n_from_q(&q);
    back.truncate(n.len());
    assert_eq!(back, n);
}

#[test]
fn rectangles_are_symmetric() {
    let ctx = CoeffContext::global();
    for (a, b) in [(3, 4), (3, 5), (4, 6)] {
        for delta in 1..=3 {
            assert_eq!(
                q_geometric(ctx, &rectangle(a as u64, b), delta).unwrap(),
                q_geometric(ctx, &rectangle(b as u64, a), delta).unwrap()
            );
        }
    }
}

#[test]
fn universal_polynomial_linear_term() {
    let ctx = CoeffContext::global();
    let t1 = t_delta(ctx, 1).unwrap();
    let hat = that_delta(ctx, 1).unwrap();
    assert_eq!(t1, hat.hat_poly());
    // N^1 of the plane is 3 L^2 + 2 LK + c2 at L^2 = d^2, LK = -3d, c2 = 3.
    for d in 1..6i64 {
        let point = [rat(d * d), rat(-3 * d), rat(9), rat(3), rat(0)];
        assert_eq!(t1.eval(&point), rat(3 * d * d - 6 * d + 3));
    }
}

#[test]
fn report_marks_unmet_preconditions() {
    let ctx = CoeffContext::global();
    let p = HTPolygon::from_directions(1, &[[0, 2]], &[[0, 1], [-1, 1]]).unwrap();
    let r = report(ctx, &p, 3, &Method::ALL).unwrap();
    assert!(r.agree);
    let row = &r.rows[3];
    assert!(matches!(row.values[&Method::Closed], MethodValue::PreconditionUnmet { .. }));
}
