use proptest::prelude::*;
use toric_severi::series::{dg2, log_partition_series, partition_series, sigma, RatSeries};
use toric_severi::{rat, ratio, Rational};

const ORDER: usize = 6;

fn series(constant: i64) -> impl Strategy<Value = RatSeries> {
    proptest::collection::vec((-9i64..=9, 1i64..=4), ORDER).prop_map(move |terms| {
        let mut c: Vec<Rational> = terms.into_iter().map(|(n, d)| ratio(n, d)).collect();
        c[0] = rat(constant);
        RatSeries::new(c, ORDER)
    })
}

fn invertible_tangent() -> impl Strategy<Value = RatSeries> {
    series(0).prop_map(|s| {
        let mut c = s.coeffs().to_vec();
        c.resize(ORDER + 1, rat(0));
        if c[1] == rat(0) {
            c[1] = rat(1);
        }
        RatSeries::new(c, ORDER)
    })
}

proptest! {
    #[test]
    fn revert_is_a_compositional_inverse(f in invertible_tangent()) {
        let g = f.revert().unwrap();
        prop_assert_eq!(f.compose(&g).unwrap(), RatSeries::var(ORDER));
        prop_assert_eq!(g.compose(&f).unwrap(), RatSeries::var(ORDER));
    }

    #[test]
    fn exp_and_log_are_inverse(f in series(0)) {
        prop_assert_eq!(f.exp().unwrap().log().unwrap(), f);
    }

    #[test]
    fn powers_add(f in series(1), a in (-6i64..=6, 1i64..=3), b in (-6i64..=6, 1i64..=3)) {
        let (a, b) = (ratio(a.0, a.1), ratio(b.0, b.1));
        let lhs = &f.pow(&a).unwrap() * &f.pow(&b).unwrap();
        prop_assert_eq!(lhs, f.pow(&(&a + &b)).unwrap());
    }

    #[test]
    fn reciprocal_inverts(f in series(1)) {
        prop_assert_eq!(&f * &f.reciprocal().unwrap(), RatSeries::one(ORDER));
    }

    #[test]
    fn compose_is_associative(f in series(2), g in invertible_tangent(), h in invertible_tangent()) {
        let left = f.compose(&g).unwrap().compose(&h).unwrap();
        let right = f.compose(&g.compose(&h).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }
}

fn partitions(n: usize) -> i64 {
    // p(n) via pentagonal numbers
    let mut p = vec![1i64; n + 1];
    for m in 1..=n {
        let mut acc = 0;
        for k in 1.. {
            let k = k as i64;
            let sign = if k % 2 == 1 { 1 } else { -1 };
            let g1 = (k * (3 * k - 1) / 2) as usize;
            if g1 > m {
                break;
            }
            acc += sign * p[m - g1];
            let g2 = (k * (3 * k + 1) / 2) as usize;
            if g2 <= m {
                acc += sign * p[m - g2];
            }
        }
        p[m] = acc;
    }
    p[n]
}

#[test]
fn partition_numbers() {
    let p = partition_series(20);
    for n in 0..=20 {
        assert_eq!(p.coeff(n), rat(partitions(n)), "p({n})");
    }
    assert_eq!(log_partition_series(20), p.log().unwrap());
}

#[test]
fn dg2_coefficients_are_n_sigma_n() {
    let s = dg2(12);
    assert_eq!(s.coeff(0), rat(0));
    for n in 1..=12u64 {
        let divisors: u64 = (1..=n).filter(|d| n % d == 0).sum();
        assert_eq!(sigma(n), divisors);
        assert_eq!(s.coeff(n as usize), rat((n * divisors) as i64));
    }
}
