//! Verification suites shared by the CLI, the acceptance tests and the
//! Python bindings.

use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use num_traits::Zero;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::arith::{self, rat_pow, Rational};
use crate::error::Result;
use crate::forms::{load_form, FlagshipConfig, HalfIntegralForm};
use crate::genfun::{expand, h_n_closed, s_split_closed, split_identity_residual};
use crate::hecke::{self, ConsistencyReport};
use crate::qseries::eta_power;
use crate::shimura::{self, ser_rational, LiftCheckReport, TwistCharacters};
use crate::signscan::twisted_sequence;

/// One random parameter set for the generating-function identities.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GenfunInstance {
    pub k: u32,
    pub p: u64,
    #[serde(serialize_with = "ser_rational")]
    pub trace: Rational,
    pub chi1_p: i8,
    #[serde(serialize_with = "ser_rational")]
    pub a_t: Rational,
}

fn isqrt(n: u128) -> u128 {
    let mut x = (n as f64).sqrt() as u128;
    while x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

impl GenfunInstance {
    /// `k in [2, 8]`, prime `p <= 50`, rational trace with
    /// `trace^2 <= 4 p^{2k-1}`, `chi1_p in {-1, 0, 1}`, nonzero rational `a_t`.
    pub fn random<R: Rng>(rng: &mut R) -> Self {
        let primes = arith::primes_up_to(50);
        let k = rng.gen_range(2..=8u32);
        let p = primes[rng.gen_range(0..primes.len())];
        let den: u128 = rng.gen_range(1..=9);
        let bound = isqrt(4 * (p as u128).pow(2 * k - 1) * den * den) as i128;
        let num = rng.gen_range(-bound..=bound);
        let trace = Rational::new(BigInt::from(num), BigInt::from(den));
        let chi1_p = rng.gen_range(-1..=1i8);
        let mut a_num = 0;
        while a_num == 0 {
            a_num = rng.gen_range(-1000..=1000i64);
        }
        let a_t = Rational::new(BigInt::from(a_num), BigInt::from(rng.gen_range(1..=50i64)));
        GenfunInstance { k, p, trace, chi1_p, a_t }
    }

    pub fn seeded(seed: u64, count: usize) -> Vec<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..count).map(|_| Self::random(&mut rng)).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GenfunOutcome {
    pub instance: GenfunInstance,
    /// `expand(H_1)` equals the recurrence on `0..=terms`.
    pub closed_matches_recurrence: bool,
    /// `S_0 + S_1 = H_1` as a cross-multiplied polynomial identity.
    pub split_identity: bool,
    /// `S_0` / `S_1` expansions are the even / odd parts of the recurrence.
    pub parity_support: bool,
}

impl GenfunOutcome {
    pub fn passed(&self) -> bool {
        self.closed_matches_recurrence && self.split_identity && self.parity_support
    }
}

pub fn check_genfun_instance(inst: &GenfunInstance, terms: usize) -> GenfunOutcome {
    let (k, p) = (inst.k, inst.p);
    let seq = twisted_sequence(&inst.a_t, &inst.trace, inst.chi1_p, p, k, terms);
    let h = h_n_closed(&inst.a_t, &inst.trace, inst.chi1_p, p, k);
    let closed_matches_recurrence = expand(&h, terms) == seq;
    let b1 = seq.get(1).cloned().unwrap_or_else(|| {
        (&inst.trace - Rational::from_integer(inst.chi1_p.into()) * rat_pow(p, k - 1)) * &inst.a_t
    });
    let (s0, s1) = s_split_closed(&inst.a_t, &b1, &inst.trace, inst.chi1_p, p, k);
    let split_identity = split_identity_residual(&s0, &s1, &h).is_zero();
    let (e0, e1) = (expand(&s0, terms), expand(&s1, terms));
    let parity_support = (0..=terms).all(|m| {
        let (on, off) = if m % 2 == 0 { (&e0[m], &e1[m]) } else { (&e1[m], &e0[m]) };
        on == &seq[m] && off.is_zero()
    });
    GenfunOutcome { instance: inst.clone(), closed_matches_recurrence, split_identity, parity_support }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GenfunReport {
    pub seed: u64,
    pub terms: usize,
    pub outcomes: Vec<GenfunOutcome>,
    pub passed: bool,
}

pub fn genfun_check(seed: u64, instances: usize, terms: usize) -> GenfunReport {
    let outcomes: Vec<GenfunOutcome> = GenfunInstance::seeded(seed, instances)
        .iter()
        .map(|inst| check_genfun_instance(inst, terms))
        .collect();
    let passed = outcomes.iter().all(GenfunOutcome::passed);
    GenfunReport { seed, terms, outcomes, passed }
}

/// Eigen-consistency at `p` over every `t` in `t_set` whose first relation
/// fits in the precision, with depth capped at `m_cap` and by the precision.
pub fn consistency_within_precision(
    form: &HalfIntegralForm,
    p: u64,
    trace: &Rational,
    t_set: &[u64],
    m_cap: u32,
) -> Result<ConsistencyReport> {
    let mut merged = ConsistencyReport { p, trace: trace.clone(), residuals: Vec::new() };
    for &t in t_set {
        if t.saturating_mul(p * p) > form.prec() {
            continue;
        }
        let depth = hecke::max_depth(form, t, p, m_cap).unwrap_or(0);
        let report = hecke::eigen_consistency(form, p, trace, &[t], depth)?;
        merged.residuals.extend(report.residuals);
    }
    Ok(merged)
}

/// Smallest squarefree `t` with `a(t) != 0`.
pub fn base_index(form: &HalfIntegralForm) -> Option<u64> {
    form.nonvanishing_squarefree(form.prec()).first().copied()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LocalIdentityCheck {
    pub p: u64,
    pub t: u64,
    /// `H_1` expansion equals `a(t p^{2 nu}) / chi(p^nu)` wherever the form reaches.
    pub closed_matches_coefficients: bool,
    pub split_identity: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MultiplicativityFailure {
    pub t: u64,
    pub m: u64,
    pub n: u64,
    #[serde(serialize_with = "ser_rational")]
    pub residual: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub level: u64,
    pub k: u32,
    pub prec: u64,
    pub base_t: u64,
    pub consistency: Vec<ConsistencyReport>,
    pub multiplicativity_checked: usize,
    pub multiplicativity_failures: Vec<MultiplicativityFailure>,
    pub identities: Vec<LocalIdentityCheck>,
    pub passed: bool,
}

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub primes: Vec<u64>,
    pub t_max: u64,
    pub m_max: u32,
    /// Largest `m`, `n` in the multiplicativity sweep.
    pub mult_max: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { primes: vec![3, 5, 7], t_max: 30, m_max: 4, mult_max: 15 }
    }
}

/// Eigen-consistency, multiplicativity and the closed-form identities on a form.
pub fn verify_form(form: &HalfIntegralForm, opts: &VerifyOptions) -> Result<VerifyReport> {
    let base_t = base_index(form).ok_or(crate::error::Error::ZeroBase(1))?;
    let t_set = form.nonvanishing_squarefree(opts.t_max);
    let mut consistency = Vec::new();
    let mut identities = Vec::new();
    for &p in &opts.primes {
        let trace = hecke::extract_trace(form, base_t, p)?;
        consistency.push(consistency_within_precision(form, p, &trace, &t_set, opts.m_max)?);

        let chars = TwistCharacters::for_form(form, base_t)?;
        let a_t = form.coefficient(base_t, 1)?;
        let h = h_n_closed(a_t, &trace, chars.chi1(p), p, form.k());
        let mut reach = 0usize;
        while base_t.saturating_mul(p.saturating_pow(2 * (reach as u32 + 1))) <= form.prec() {
            reach += 1;
        }
        let expansion = expand(&h, reach);
        let closed_matches_coefficients = (0..=reach).all(|nu| {
            let idx = base_t * p.pow(2 * nu as u32);
            let chi = form.descriptor().chi_pow(p, nu as u64);
            let raw = form.a(idx).expect("index within precision") * Rational::from_integer(chi.into());
            raw == expansion[nu]
        });
        let b1 = form.coefficient(base_t, p)? * Rational::from_integer(form.chi(p).into());
        let (s0, s1) = s_split_closed(a_t, &b1, &trace, chars.chi1(p), p, form.k());
        let split_identity = split_identity_residual(&s0, &s1, &h).is_zero();
        identities.push(LocalIdentityCheck { p, t: base_t, closed_matches_coefficients, split_identity });
    }

    let mut checked = 0;
    let mut failures = Vec::new();
    for t in (1..=opts.t_max).filter(|&t| arith::is_squarefree(t)) {
        for m in 1..=opts.mult_max {
            for n in m..=opts.mult_max {
                if arith::gcd(m, n) != 1 || arith::gcd(m * n, form.level()) != 1 {
                    continue;
                }
                if t.saturating_mul(m * m * n * n) > form.prec() {
                    continue;
                }
                checked += 1;
                let residual = hecke::multiplicativity_check(form, t, m, n)?;
                if !residual.is_zero() {
                    failures.push(MultiplicativityFailure { t, m, n, residual });
                }
            }
        }
    }

    let passed = consistency.iter().all(ConsistencyReport::is_consistent)
        && failures.is_empty()
        && identities.iter().all(|c| c.closed_matches_coefficients && c.split_identity);
    Ok(VerifyReport {
        level: form.level(),
        k: form.k(),
        prec: form.prec(),
        base_t,
        consistency,
        multiplicativity_checked: checked,
        multiplicativity_failures: failures,
        identities,
        passed,
    })
}

/// The flagship acceptance suite: eigen-consistency at `primes` over
/// squarefree `t <= t_max` with `a(t) != 0`, depth `<= m_max` within
/// precision, plus the lift cross-check against `eta(z)^24` up to `lift_p_max`.
#[derive(Debug, Clone)]
pub struct FlagshipSuite {
    pub primes: Vec<u64>,
    pub t_max: u64,
    pub m_max: u32,
    pub lift_p_max: u64,
}

impl Default for FlagshipSuite {
    fn default() -> Self {
        FlagshipSuite { primes: vec![3, 5, 7], t_max: 30, m_max: 4, lift_p_max: 50 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FlagshipCheck {
    pub consistency: Vec<ConsistencyReport>,
    pub lift: LiftCheckReport,
    pub passed: bool,
}

pub fn run_flagship_suite(form: &HalfIntegralForm, suite: &FlagshipSuite) -> Result<FlagshipCheck> {
    let base_t = base_index(form).ok_or(crate::error::Error::ZeroBase(1))?;
    let t_set = form.nonvanishing_squarefree(suite.t_max);
    let consistency = suite
        .primes
        .iter()
        .map(|&p| {
            let trace = hecke::extract_trace(form, base_t, p)?;
            consistency_within_precision(form, p, &trace, &t_set, suite.m_max)
        })
        .collect::<Result<Vec<_>>>()?;
    let delta = eta_power(1, 24, suite.lift_p_max)?;
    let lift = shimura::crosscheck_lift(form, base_t, &delta, suite.lift_p_max)?;
    let passed = consistency.iter().all(ConsistencyReport::is_consistent) && lift.passed();
    Ok(FlagshipCheck { consistency, lift, passed })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FlagshipSource {
    Recipe,
    Fixture(PathBuf),
}

/// Builds the configured flagship and runs the suite; on failure (or a build
/// error) falls back to the fixture file, which must pass the same suite.
pub fn resolve_flagship(
    config: &FlagshipConfig,
    suite: &FlagshipSuite,
    fixture: Option<&Path>,
) -> Result<(HalfIntegralForm, FlagshipSource, FlagshipCheck)> {
    let primary = config
        .build()
        .and_then(|form| run_flagship_suite(&form, suite).map(|check| (form, check)));
    match (primary, fixture) {
        (Ok((form, check)), _) if check.passed => Ok((form, FlagshipSource::Recipe, check)),
        (Ok((form, check)), None) => Ok((form, FlagshipSource::Recipe, check)),
        (Err(e), None) => Err(e),
        (_, Some(path)) => {
            let form = load_form(path)?;
            let check = run_flagship_suite(&form, suite)?;
            Ok((form, FlagshipSource::Fixture(path.to_path_buf()), check))
        }
    }
}
