//! Exact spectral toolkit for the perfect matching association scheme of `K_2k`.
//!
//! The scheme's classes and common eigenspaces ("modules") are both indexed by
//! even integer partitions of `2k`. This crate builds the scheme from scratch,
//! assembles its character table in exact integer arithmetic, extracts
//! eigenvalues through Young-subgroup quotient graphs, and runs the
//! Delsarte–Hoffman ratio-bound certificates that identify the maximum
//! set-wise t-intersecting families of perfect matchings.
//!
//! Entry points, roughly bottom-up:
//!
//! * [`partition`] — even partitions, dominance, hook-length dimensions.
//! * [`matching`] — enumeration of perfect matchings, union shapes,
//!   set-wise intersection tests, canonical families.
//! * [`scheme`] — class matrices, degrees, scheme axioms, the graph `N_t(2k)`.
//! * [`quotient`] — Young-subgroup orbit partitions, quotient matrices,
//!   exact eigenvalue extraction and module assignment.
//! * [`chartable`] — the character table: closed forms, exact assembly,
//!   verification, persistence.
//! * [`ekr`] — weight systems, ratio-bound certificates, the inequality
//!   machinery, and the conjecture checks.
//! * [`mis`] — exact maximum coclique via branch and bound.
//!
//! Every number that decides a verdict is exact (`BigInt` / `BigRational`);
//! floating point appears only in clearly-marked numeric cross-checks.

pub mod chartable;
pub mod cli;
pub mod ekr;
pub mod error;
pub mod exact;
pub mod matching;
pub mod mis;
pub mod partition;
pub mod quotient;
pub mod scheme;
pub mod spectral;

pub use error::{Error, Result};

/// Exact integer used throughout.
pub type Int = num_bigint::BigInt;
/// Exact rational used throughout.
pub type Rat = num_rational::BigRational;

/// Render a rational in the canonical `p/q` form used by all JSON output
/// (`q` omitted when 1).
pub fn rat_to_string(r: &Rat) -> String {
    if num_traits::One::is_one(r.denom()) {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parse the `p/q` form produced by [`rat_to_string`].
pub fn rat_from_str(s: &str) -> Result<Rat> {
    let parse_int = |t: &str| {
        t.parse::<Int>()
            .map_err(|_| Error::Parse(format!("bad rational `{s}`")))
    };
    match s.split_once('/') {
        None => Ok(Rat::from_integer(parse_int(s)?)),
        Some((p, q)) => {
            let den = parse_int(q)?;
            if num_traits::Zero::is_zero(&den) {
                return Err(Error::Parse(format!("zero denominator in `{s}`")));
            }
            Ok(Rat::new(parse_int(p)?, den))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_string_round_trip() {
        for s in ["5", "-8", "32/3", "-13/10", "0"] {
            let r = rat_from_str(s).unwrap();
            assert_eq!(rat_to_string(&r), s);
        }
        assert!(rat_from_str("x/y").is_err());
        assert!(rat_from_str("1/0").is_err());
    }
}
