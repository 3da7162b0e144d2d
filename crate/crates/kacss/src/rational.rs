//! Exact rational arithmetic helpers.
//!
//! Every quantity in this crate (costs, capacities, LP data, report values)
//! is a [`Rat`]; there is no floating-point code path. Rationals are
//! serialized as `"num/den"` with a positive denominator.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

pub type Rat = num_rational::BigRational;

/// `num/den` as an exact rational. Panics if `den == 0`.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rat_usize(n: usize) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Canonical `"num/den"` form, denominator always present and positive.
pub fn format_rat(x: &Rat) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Parses `"num/den"` (den > 0) or a bare integer.
pub fn parse_rat(s: &str) -> Result<Rat, String> {
    let s = s.trim();
    if let Some((num, den)) = s.split_once('/') {
        let num: BigInt = num
            .trim()
            .parse()
            .map_err(|_| format!("bad numerator in rational '{s}'"))?;
        let den: BigInt = den
            .trim()
            .parse()
            .map_err(|_| format!("bad denominator in rational '{s}'"))?;
        if den.is_zero() || den.is_negative() {
            return Err(format!("denominator must be positive in rational '{s}'"));
        }
        Ok(Rat::new(num, den))
    } else {
        let num: BigInt = s.parse().map_err(|_| format!("bad rational '{s}'"))?;
        Ok(Rat::from_integer(num))
    }
}

/// Convenience float view for report output; never used in computations.
pub fn rat_to_f64(x: &Rat) -> f64 {
    let num = x.numer();
    let den = x.denom();
    // Good enough for display: go through strings only when the parts are huge.
    num_to_f64(num) / num_to_f64(den)
}

fn num_to_f64(n: &BigInt) -> f64 {
    use num_traits::ToPrimitive;
    n.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_round_trip() {
        let x = parse_rat("3/6").unwrap();
        assert_eq!(x, rat(1, 2));
        assert_eq!(format_rat(&x), "1/2");
        assert_eq!(format_rat(&rat_int(4)), "4/1");
        assert_eq!(parse_rat("-2/4").unwrap(), rat(-1, 2));
        assert_eq!(parse_rat("7").unwrap(), rat_int(7));
    }

    #[test]
    fn rejects_bad_denominators() {
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("1/-2").is_err());
        assert!(parse_rat("x/2").is_err());
    }
}
