//! Hecke data recovered from coefficients.
//!
//! For a `T(p^2)` eigenform with eigenvalue `lambda_p` and squarefree `t`,
//! the twisted values `b_m = a(t p^{2m}) / chi(p^m)` satisfy
//!
//! ```text
//! tau b_0 = b_1 + chi_1(p) p^{k-1} b_0
//! tau b_m = b_{m+1} + p^{2k-1} b_{m-1}      (m >= 1)
//! ```
//!
//! with `tau = lambda_p / chi(p)`. Everything here is exact; the Satake roots
//! `alpha_p, beta_p` are only ever described through `tau` and the norm
//! `p^{2k-1}`.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{self, rat, rat_pow, Rational};
use crate::error::{Error, Result};
use crate::forms::HalfIntegralForm;
use crate::shimura::{ser_rational, TwistCharacters};

fn check_prime_coprime(form: &HalfIntegralForm, p: u64) -> Result<()> {
    arith::require_prime(p)?;
    if form.level().is_multiple_of(p) {
        return Err(Error::NotCoprime(p, form.level()));
    }
    Ok(())
}

fn index(t: u64, p: u64, e: u32, prec: u64) -> Result<u64> {
    p.checked_pow(e)
        .and_then(|x| x.checked_mul(t))
        .filter(|&i| i <= prec)
        .ok_or(Error::PrecisionExceeded {
            index: p.saturating_pow(e).saturating_mul(t),
            prec,
        })
}

/// `b_m = a(t p^{2m}) / chi(p^m)`, using that `chi(p) = ±1`.
fn twisted(form: &HalfIntegralForm, t: u64, p: u64, m: u32) -> Result<Rational> {
    let a = form.a(index(t, p, 2 * m, form.prec())?)?;
    Ok(if form.descriptor().chi_pow(p, m as u64) < 0 { -a } else { a.clone() })
}

/// `tau_p = lambda_p / chi(p) = a(p^2 t0) / (chi(p) a(t0)) + chi_1(p) p^{k-1}`.
pub fn extract_trace(form: &HalfIntegralForm, t0: u64, p: u64) -> Result<Rational> {
    check_prime_coprime(form, p)?;
    let chars = TwistCharacters::for_form(form, t0)?;
    let base = form.coefficient(t0, 1)?;
    if base.is_zero() {
        return Err(Error::ZeroBase(t0));
    }
    let b1 = twisted(form, t0, p, 1)?;
    Ok(b1 / base + rat(chars.chi1(p) as i64) * rat_pow(p, form.k() - 1))
}

/// One recurrence residual. `m = 0` is the first-step relation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Residual {
    pub t: u64,
    pub m: u32,
    /// Coefficient indices entering the relation.
    pub indices: Vec<u64>,
    #[serde(serialize_with = "ser_rational")]
    pub value: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConsistencyReport {
    pub p: u64,
    #[serde(serialize_with = "ser_rational")]
    pub trace: Rational,
    pub residuals: Vec<Residual>,
}

impl ConsistencyReport {
    pub fn is_consistent(&self) -> bool {
        self.residuals.iter().all(|r| r.value.is_zero())
    }

    pub fn failures(&self) -> impl Iterator<Item = &Residual> {
        self.residuals.iter().filter(|r| !r.value.is_zero())
    }
}

/// Largest `m <= cap` such that the depth-`m` relation for `(t, p)` stays
/// inside the form's precision, or `None` if not even `m = 1` fits.
pub fn max_depth(form: &HalfIntegralForm, t: u64, p: u64, cap: u32) -> Option<u32> {
    (1..=cap)
        .take_while(|&m| index(t, p, 2 * m + 2, form.prec()).is_ok())
        .last()
}

/// Evaluates every recurrence relation for `t in t_set`, `1 <= m <= m_max`,
/// plus the first-step relation whenever `a(t) != 0`.
pub fn eigen_consistency(
    form: &HalfIntegralForm,
    p: u64,
    trace: &Rational,
    t_set: &[u64],
    m_max: u32,
) -> Result<ConsistencyReport> {
    check_prime_coprime(form, p)?;
    let norm = rat_pow(p, 2 * form.k() - 1);
    let prec = form.prec();
    let mut residuals = Vec::new();
    for &t in t_set {
        let chars = TwistCharacters::for_form(form, t)?;
        let b: Vec<Rational> = (0..=m_max + 1)
            .map(|j| twisted(form, t, p, j))
            .collect::<Result<_>>()?;
        if !b[0].is_zero() {
            let value = trace * &b[0]
                - &b[1]
                - rat(chars.chi1(p) as i64) * rat_pow(p, form.k() - 1) * &b[0];
            residuals.push(Residual {
                t,
                m: 0,
                indices: vec![t, index(t, p, 2, prec)?],
                value,
            });
        }
        for m in 1..=m_max as usize {
            let value = trace * &b[m] - &b[m + 1] - &norm * &b[m - 1];
            let indices = [m - 1, m, m + 1]
                .iter()
                .map(|&j| index(t, p, 2 * j as u32, prec))
                .collect::<Result<_>>()?;
            residuals.push(Residual { t, m: m as u32, indices, value });
        }
    }
    Ok(ConsistencyReport { p, trace: trace.clone(), residuals })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RootKind {
    RealDistinct,
    RealDouble,
    ComplexPair,
}

/// Local data at `p`: `alpha + beta = trace`, `alpha beta = norm`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HeckeLocalData {
    pub p: u64,
    pub k: u32,
    #[serde(serialize_with = "ser_rational")]
    pub trace: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub norm: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub disc: Rational,
    pub root_kind: RootKind,
}

impl HeckeLocalData {
    /// `alpha beta` recomputed as `(trace^2 - disc) / 4`.
    pub fn root_product(&self) -> Rational {
        (&self.trace * &self.trace - &self.disc) / rat(4)
    }

    pub fn root_sum(&self) -> &Rational {
        &self.trace
    }

    /// Denominator `1 - trace X + norm X^2` of the local generating function.
    pub fn euler_factor(&self) -> crate::genfun::Polynomial {
        crate::genfun::Polynomial::new(vec![rat(1), -self.trace.clone(), self.norm.clone()])
    }
}

pub fn satake_data(trace: &Rational, p: u64, k: u32) -> HeckeLocalData {
    let norm = rat_pow(p, 2 * k - 1);
    let disc = trace * trace - rat(4) * &norm;
    let root_kind = if disc.is_zero() {
        RootKind::RealDouble
    } else if disc.is_positive() {
        RootKind::RealDistinct
    } else {
        RootKind::ComplexPair
    };
    HeckeLocalData { p, k, trace: trace.clone(), norm, disc, root_kind }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DeligneStatus {
    Strict,
    Extremal,
    Violated,
}

impl DeligneStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            DeligneStatus::Strict => "strict",
            DeligneStatus::Extremal => "extremal",
            DeligneStatus::Violated => "violated",
        }
    }
}

/// Compares `trace^2` with `4 p^{2k-1}`.
pub fn deligne_check(trace: &Rational, p: u64, k: u32) -> DeligneStatus {
    let lhs = trace * trace;
    let rhs = Rational::from_integer(BigInt::from(4) * BigInt::from(p).pow(2 * k - 1));
    match lhs.cmp(&rhs) {
        std::cmp::Ordering::Less => DeligneStatus::Strict,
        std::cmp::Ordering::Equal => DeligneStatus::Extremal,
        std::cmp::Ordering::Greater => DeligneStatus::Violated,
    }
}

/// `a(t m^2) a(t n^2) - a(t) a(t m^2 n^2)`.
pub fn multiplicativity_check(form: &HalfIntegralForm, t: u64, m: u64, n: u64) -> Result<Rational> {
    if arith::gcd(m, n) != 1 {
        return Err(Error::NotCoprime(m, n));
    }
    let mn = m.checked_mul(n).ok_or(Error::PrecisionExceeded { index: u64::MAX, prec: form.prec() })?;
    let lhs = form.coefficient(t, m)? * form.coefficient(t, n)?;
    let rhs = form.coefficient(t, 1)? * form.coefficient(t, mn)?;
    Ok(lhs - rhs)
}

/// Traces and Satake data for each prime in `primes`, in input order.
pub fn local_data(form: &HalfIntegralForm, t0: u64, primes: &[u64]) -> Result<Vec<HeckeLocalData>> {
    primes
        .par_iter()
        .map(|&p| extract_trace(form, t0, p).map(|tr| satake_data(&tr, p, form.k())))
        .collect()
}
