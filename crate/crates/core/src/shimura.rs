//! Kronecker-symbol twists and Shimura-lift coefficients.
//!
//! For squarefree `t` the lift `Sh_t(f)` has coefficients
//! `A_t(n) = sum_{d | n} chi_{t,N}(d) d^{k-1} a(t (n/d)^2)` where
//! `chi_{t,N} = chi * chi_1` and `chi_1 = ((-1)^k N^2 t / .)`. At a prime this
//! reads `A_t(p) = a(t p^2) + chi_{t,N}(p) p^{k-1} a(t)`.

use num_traits::Zero;
use serde::Serialize;

use crate::arith::{self, format_rational, rat_pow, Rational};
use crate::error::{Error, Result};
use crate::forms::{Character, HalfIntegralForm};
use crate::hecke;
use crate::qseries::TruncatedSeries;

/// Kronecker symbol `(a | n)` for arbitrary integers, extending the Jacobi
/// symbol with `(a | 2)` from `a mod 8` and `(a | -1) = sign(a)`.
pub fn kronecker(a: i64, n: i64) -> i8 {
    if n == 0 {
        return if a == 1 || a == -1 { 1 } else { 0 };
    }
    let mut result: i8 = 1;
    let mut n = n;
    if n < 0 {
        n = -n;
        if a < 0 {
            result = -result;
        }
    }
    let twos = n.trailing_zeros();
    if twos > 0 {
        if a % 2 == 0 {
            return 0;
        }
        if twos % 2 == 1 {
            result *= kronecker_two(a);
        }
        n >>= twos;
    }
    result * jacobi(a.rem_euclid(n), n)
}

fn kronecker_two(a: i64) -> i8 {
    match a.rem_euclid(8) {
        1 | 7 => 1,
        3 | 5 => -1,
        _ => 0,
    }
}

/// Jacobi symbol `(a | n)` for odd positive `n` and `0 <= a < n`.
fn jacobi(mut a: i64, mut n: i64) -> i8 {
    debug_assert!(n > 0 && n % 2 == 1);
    let mut result: i8 = 1;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if matches!(n % 8, 3 | 5) {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            result = -result;
        }
        a %= n;
    }
    if n == 1 {
        result
    } else {
        0
    }
}

/// `chi_1(m) = ((-1)^k N^2 t | m)`.
pub fn chi1(m: u64, t: u64, k: u32, level: u64) -> i8 {
    kronecker(twist_discriminant(t, k, level), m as i64)
}

fn twist_discriminant(t: u64, k: u32, level: u64) -> i64 {
    let magnitude = (level as i64)
        .checked_mul(level as i64)
        .and_then(|x| x.checked_mul(t as i64))
        .expect("N^2 t overflows i64");
    if k.is_multiple_of(2) {
        magnitude
    } else {
        -magnitude
    }
}

/// The pair `chi_1`, `chi_{t,N}` attached to a form and a squarefree `t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwistCharacters {
    t: u64,
    k: u32,
    level: u64,
    base: Character,
}

impl TwistCharacters {
    pub fn new(t: u64, k: u32, level: u64, base: Character) -> Result<Self> {
        arith::require_squarefree(t)?;
        Ok(TwistCharacters { t, k, level, base })
    }

    pub fn for_form(form: &HalfIntegralForm, t: u64) -> Result<Self> {
        Self::new(t, form.k(), form.level(), form.descriptor().character().clone())
    }

    pub fn chi(&self, m: u64) -> i8 {
        if arith::gcd(m, self.level) != 1 {
            return 0;
        }
        match &self.base {
            Character::Trivial => 1,
            Character::Quadratic(table) => table[&(m % self.level)],
        }
    }

    pub fn chi1(&self, m: u64) -> i8 {
        chi1(m, self.t, self.k, self.level)
    }

    pub fn chi_tn(&self, m: u64) -> i8 {
        self.chi(m) * self.chi1(m)
    }
}

/// `A_t(1..=n_max)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftSeries {
    pub t: u64,
    values: Vec<Rational>,
}

impl LiftSeries {
    /// `A_t(n)` for `1 <= n <= n_max`.
    pub fn value(&self, n: u64) -> Option<&Rational> {
        n.checked_sub(1).and_then(|i| self.values.get(i as usize))
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn n_max(&self) -> u64 {
        self.values.len() as u64
    }
}

pub fn lift_coefficients(form: &HalfIntegralForm, t: u64, n_max: u64) -> Result<LiftSeries> {
    let chars = TwistCharacters::for_form(form, t)?;
    let needed = t.saturating_mul(n_max).saturating_mul(n_max);
    if needed > form.prec() {
        return Err(Error::PrecisionExceeded { index: needed, prec: form.prec() });
    }
    let km1 = form.k() - 1;
    let values = (1..=n_max)
        .map(|n| {
            let mut acc = Rational::zero();
            for d in arith::divisors(n) {
                let c = chars.chi_tn(d);
                if c == 0 {
                    continue;
                }
                let e = n / d;
                let term = rat_pow(d, km1) * form.a(t * e * e)?;
                if c > 0 {
                    acc += term;
                } else {
                    acc -= term;
                }
            }
            Ok(acc)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(LiftSeries { t, values })
}

/// One prime of a lift cross-check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LiftCheckRow {
    pub p: u64,
    /// `A_t(p) / a(t)`.
    #[serde(serialize_with = "ser_rational")]
    pub lift_ratio: Rational,
    /// `B(p)` from the integral-weight form.
    #[serde(serialize_with = "ser_rational")]
    pub integral: Rational,
    /// `extract_trace(t, p) * chi(p)`, i.e. `lambda_p`.
    #[serde(serialize_with = "ser_rational")]
    pub eigenvalue: Rational,
    /// `A_t(p) - a(t p^2) - chi_{t,N}(p) p^{k-1} a(t)`, the prime-index lift relation.
    #[serde(serialize_with = "ser_rational")]
    pub relation_residual: Rational,
    pub matches: bool,
}

pub(crate) fn ser_rational<S: serde::Serializer>(x: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(x))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LiftCheckReport {
    pub t: u64,
    pub rows: Vec<LiftCheckRow>,
}

impl LiftCheckReport {
    pub fn mismatches(&self) -> Vec<u64> {
        self.rows.iter().filter(|r| !r.matches).map(|r| r.p).collect()
    }

    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.matches)
    }
}

/// Compares `A_t(p) / a(t)` with the `p`-th coefficient of a normalized
/// integral-weight eigenform and with the eigenvalue recovered from the
/// half-integral recurrence, for every prime `p <= p_max` coprime to the level.
pub fn crosscheck_lift(
    form: &HalfIntegralForm,
    t: u64,
    integral: &TruncatedSeries,
    p_max: u64,
) -> Result<LiftCheckReport> {
    let chars = TwistCharacters::for_form(form, t)?;
    let a_t = form.coefficient(t, 1)?.clone();
    if a_t.is_zero() {
        return Err(Error::ZeroBase(t));
    }
    let km1 = form.k() - 1;
    let mut rows = Vec::new();
    for p in arith::primes_up_to(p_max) {
        if form.level().is_multiple_of(p) {
            continue;
        }
        let integral_coeff = integral
            .coeff(p)
            .map_err(|_| Error::MissingCoefficient(p))?
            .clone();
        let lift = lift_coefficients(form, t, p)?;
        let a_tp = lift.value(p).expect("lift computed up to p").clone();
        let ratio = &a_tp / &a_t;
        let trace = hecke::extract_trace(form, t, p)?;
        let eigenvalue = trace * Rational::from_integer(chars.chi(p).into());
        let direct = form.coefficient(t, p)?
            + rat_pow(p, km1) * &a_t * Rational::from_integer(chars.chi_tn(p).into());
        let relation_residual = &a_tp - direct;
        let matches =
            ratio == integral_coeff && ratio == eigenvalue && relation_residual.is_zero();
        rows.push(LiftCheckRow {
            p,
            lift_ratio: ratio,
            integral: integral_coeff,
            eigenvalue,
            relation_residual,
            matches,
        });
    }
    Ok(LiftCheckReport { t, rows })
}
