//! Small integer helpers and the exact rational type shared by all modules.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational number with arbitrary-precision numerator and denominator.
pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn rat_frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// `base^exp` as an exact rational.
pub fn rat_pow(base: u64, exp: u32) -> Rational {
    Rational::from_integer(BigInt::from(base).pow(exp))
}

/// Sign of a rational: -1, 0 or 1.
pub fn sign(x: &Rational) -> i8 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

/// Formats as `num/den`, omitting the denominator when it is 1.
pub fn format_rational(x: &Rational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses `n` or `p/q` with optional leading sign. Whitespace is not allowed.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::ParseError(format!("malformed rational {s:?}"));
    let parse_int = |part: &str| -> Result<BigInt> {
        let digits = part.strip_prefix(['-', '+']).unwrap_or(part);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        part.parse::<BigInt>().map_err(|_| bad())
    };
    match s.split_once('/') {
        None => Ok(Rational::from_integer(parse_int(s)?)),
        Some((n, d)) => {
            let num = parse_int(n)?;
            if d.starts_with(['-', '+']) {
                return Err(bad());
            }
            let den = parse_int(d)?;
            if den.is_zero() {
                return Err(Error::ParseError(format!("zero denominator in {s:?}")));
            }
            Ok(Rational::new(num, den))
        }
    }
}

/// Converts to `f64`, saturating to ±inf for magnitudes beyond the double range.
pub fn to_f64(x: &Rational) -> f64 {
    x.to_f64().unwrap_or_else(|| match sign(x) {
        1 => f64::INFINITY,
        -1 => f64::NEG_INFINITY,
        _ => 0.0,
    })
}

pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Primes `<= bound` by the sieve of Eratosthenes.
pub fn primes_up_to(bound: u64) -> Vec<u64> {
    if bound < 2 {
        return Vec::new();
    }
    let n = bound as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

/// Distinct prime factors with multiplicity, ascending.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            let mut e = 0;
            while n.is_multiple_of(d) {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn is_squarefree(n: u64) -> bool {
    n >= 1 && factorize(n).iter().all(|&(_, e)| e == 1)
}

/// Writes `n = t * m^2` with `t` squarefree.
pub fn squarefree_decompose(n: u64) -> (u64, u64) {
    assert!(n >= 1, "squarefree_decompose requires n >= 1");
    let (mut t, mut m) = (1, 1);
    for (p, e) in factorize(n) {
        m *= p.pow(e / 2);
        if e % 2 == 1 {
            t *= p;
        }
    }
    (t, m)
}

pub fn pow_mod(mut base: u64, mut exp: u64, modulus: u64) -> u64 {
    let mut acc = 1 % modulus;
    base %= modulus;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = (acc as u128 * base as u128 % modulus as u128) as u64;
        }
        base = (base as u128 * base as u128 % modulus as u128) as u64;
        exp >>= 1;
    }
    acc
}

/// Divisors of `n`, ascending.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Euler totient.
pub fn totient(n: u64) -> u64 {
    factorize(n)
        .into_iter()
        .fold(n, |acc, (p, _)| acc / p * (p - 1))
}

pub fn require_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::NotPrime(p))
    }
}

pub fn require_squarefree(t: u64) -> Result<()> {
    if is_squarefree(t) {
        Ok(())
    } else {
        Err(Error::NotSquarefree(t))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_format_round_trip() {
        for s in ["0", "7", "-12", "3/4", "-5/9"] {
            assert_eq!(format_rational(&parse_rational(s).unwrap()), s);
        }
        assert_eq!(format_rational(&parse_rational("6/4").unwrap()), "3/2");
    }

    #[test]
    fn malformed_rationals_rejected() {
        for s in ["3/", "/4", "", "1.5", " 3", "3/-4", "--1", "1/0", "x"] {
            assert!(parse_rational(s).is_err(), "{s:?} accepted");
        }
    }

    #[test]
    fn squarefree_examples() {
        assert_eq!(squarefree_decompose(1), (1, 1));
        assert_eq!(squarefree_decompose(72), (2, 6));
        assert_eq!(squarefree_decompose(45), (5, 3));
        assert!(!is_squarefree(12));
        assert!(is_squarefree(30));
    }

    #[test]
    fn squarefree_round_trip() {
        for t in (1..=100).filter(|&t| is_squarefree(t)) {
            for m in 1..=30 {
                assert_eq!(squarefree_decompose(t * m * m), (t, m));
            }
        }
    }

    #[test]
    fn primes_and_divisors() {
        assert_eq!(primes_up_to(20), vec![2, 3, 5, 7, 11, 13, 17, 19]);
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(totient(4), 2);
        assert_eq!(totient(7), 6);
        assert_eq!(pow_mod(3, 6, 7), 1);
    }
}
