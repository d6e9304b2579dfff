//! Exact computation of Severi degrees and node polynomials for the polarized
//! toric surfaces of h-transverse lattice polygons.
//!
//! The crate is organized bottom-up:
//!
//! - [`graphs`]: long-edge graphs, templates and their enumeration.
//! - [`orderings`]: counts of beta-extended orderings, their logarithmic
//!   transform and the linear forms it agrees with on the semiallowable region.
//! - [`coeffs`]: the universal constants `A, L, H, D, C`, the reordering
//!   coefficients `b(delta, i)`, and the top/bottom corrections `DiffQ`, `COR`.
//! - [`series`]: truncated power series over the rationals and the
//!   quasimodular identities relating the constants to `G2`, `Delta(q)` and
//!   the partition function.
//! - [`polygon`]: h-transverse polygons, their width sequences, reorderings
//!   and toric invariants.
//! - [`severi`]: node counts by brute force, by the combinatorial closed form
//!   and by the geometric universal polynomial.
//!
//! All arithmetic is exact.

pub mod coeffs;
pub mod error;
pub mod graphs;
pub mod orderings;
pub mod polygon;
pub mod series;
pub mod severi;

pub use error::{Error, Result};

/// Exact rational numbers used throughout.
pub type Rational = num_rational::BigRational;

/// Builds a rational from an integer.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// Builds the rational `num / den`. Panics when `den == 0`.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(num.into(), den.into())
}

/// Parses `"p"` or `"p/q"` into a rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: num_bigint::BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: num_bigint::BigInt = q.trim().parse().map_err(|_| bad())?;
            if q == num_bigint::BigInt::from(0) {
                return Err(bad());
            }
            Ok(Rational::new(p, q))
        }
        None => {
            let p: num_bigint::BigInt = s.parse().map_err(|_| bad())?;
            Ok(Rational::from_integer(p))
        }
    }
}

/// Serde adapters writing rationals as `"p/q"` strings.
pub mod rational_serde {
    use super::Rational;
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(value: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&value.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        super::parse_rational(&s).map_err(D::Error::custom)
    }

    pub mod vec {
        use super::super::Rational;
        use serde::{de::Error as _, ser::SerializeSeq, Deserialize, Deserializer, Serializer};

        pub fn serialize<S: Serializer>(values: &[Rational], s: S) -> Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(values.len()))?;
            for v in values {
                seq.serialize_element(&v.to_string())?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
            let raw = Vec::<String>::deserialize(d)?;
            raw.iter()
                .map(|s| super::super::parse_rational(s).map_err(D::Error::custom))
                .collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_strings() {
        assert_eq!(ratio(39, 2).to_string(), "39/2");
        assert_eq!(rat(-21).to_string(), "-21");
        assert_eq!(parse_rational("-9/2").unwrap(), ratio(-9, 2));
        assert_eq!(parse_rational("0").unwrap(), rat(0));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("0.5").is_err());
    }
}
