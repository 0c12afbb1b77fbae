//! Small helpers around `BigRational`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exact rational number.
pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: BigInt) -> Q {
    Q::from_integer(n)
}

/// Canonical text form: `n` for integers, `n/d` otherwise.
pub fn render_q(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses `n` or `n/d` with an optional leading sign.
pub fn parse_q(s: &str) -> Option<Q> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().ok()?;
    let d: BigInt = d.parse().ok()?;
    if d.is_zero() {
        return None;
    }
    Some(Q::new(n, d))
}

pub fn lcm_denoms<'a>(xs: impl IntoIterator<Item = &'a Q>) -> BigInt {
    xs.into_iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

pub fn gcd_numers<'a>(xs: impl IntoIterator<Item = &'a Q>) -> BigInt {
    xs.into_iter().fold(BigInt::zero(), |acc, x| acc.gcd(x.numer()))
}

pub fn pow_q(x: &Q, e: u32) -> Q {
    num_traits::pow::pow(x.clone(), e as usize)
}

pub fn abs_q(x: &Q) -> Q {
    x.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_render_round_trip() {
        for s in ["0", "7", "-3", "5/7", "-12/5"] {
            assert_eq!(render_q(&parse_q(s).unwrap()), s);
        }
        assert_eq!(render_q(&parse_q("4/6").unwrap()), "2/3");
        assert!(parse_q("1/0").is_none());
        assert!(parse_q("x").is_none());
    }

    #[test]
    fn denominators_and_contents() {
        let xs = [qf(1, 4), qf(5, 6), q(2)];
        assert_eq!(lcm_denoms(&xs), BigInt::from(12));
        let ys = [q(6), q(-9), q(15)];
        assert_eq!(gcd_numers(&ys), BigInt::from(3));
    }
}
