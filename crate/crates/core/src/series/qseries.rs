//! q-expansions of the quasimodular forms and the partition function.

use num_traits::Zero;

use super::RatSeries;
use crate::{rat, ratio, Rational};

/// Sum of the divisors of `n`.
pub fn sigma(n: u64) -> u64 {
    (1..=n).filter(|&d| n.is_multiple_of(d)).sum()
}

fn divisor_series(order: usize, weight: impl Fn(u64) -> Rational) -> RatSeries {
    let coeffs = (0..=order as u64)
        .map(|n| if n == 0 { Rational::zero() } else { weight(n) * rat(sigma(n) as i64) })
        .collect();
    RatSeries::new(coeffs, order)
}

/// `G_2 = -1/24 + sum sigma(n) q^n`.
pub fn g2(order: usize) -> RatSeries {
    let mut s = divisor_series(order, |_| rat(1));
    s = &s + &RatSeries::constant(ratio(-1, 24), order);
    s
}

/// `D G_2 = sum n sigma(n) q^n` with `D = q d/dq`.
pub fn dg2(order: usize) -> RatSeries {
    divisor_series(order, |n| rat(n as i64))
}

/// `D^2 G_2 = sum n^2 sigma(n) q^n`.
pub fn d2g2(order: usize) -> RatSeries {
    divisor_series(order, |n| rat((n * n) as i64))
}

/// `Delta(q) = q prod (1 - q^k)^24`.
pub fn disc(order: usize) -> RatSeries {
    let mut prod = RatSeries::one(order);
    for k in 1..=order {
        let mut factor = RatSeries::one(order);
        factor = &factor - &RatSeries::monomial(k, rat(1), order);
        prod = &prod * &factor.powi(24);
    }
    let mut coeffs = vec![Rational::zero()];
    coeffs.extend_from_slice(prod.coeffs());
    RatSeries::new(coeffs, order)
}

/// `P(x) = sum p(n) x^n`.
pub fn partition_series(order: usize) -> RatSeries {
    let mut p = vec![0i64; order + 1];
    p[0] = 1;
    for part in 1..=order {
        for n in part..=order {
            p[n] += p[n - part];
        }
    }
    RatSeries::from_integers(&p, order)
}

/// `log P(x) = sum (sigma(n) / n) x^n`.
pub fn log_partition_series(order: usize) -> RatSeries {
    divisor_series(order, |n| ratio(1, n as i64))
}
