//! Twisted coefficient sequences and sign-change counting.
//!
//! A sign change is a pair `i < j` with `b_i b_j < 0` and every entry strictly
//! between them zero, so zeros never create or destroy a change.

use std::fmt;

use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{self, rat, rat_pow, sign, Rational};
use crate::characters::{progression_extract, Extraction, ProgressionSpec, Route};
use crate::error::{Error, Result};
use crate::forms::HalfIntegralForm;
use crate::hecke::{self, deligne_check, DeligneStatus};
use crate::shimura::TwistCharacters;

/// `b_0..=b_M` with `b_0 = a_t`, `b_1 = (trace - chi1_p p^{k-1}) a_t` and
/// `b_{m+1} = trace b_m - p^{2k-1} b_{m-1}`.
pub fn twisted_sequence(a_t: &Rational, trace: &Rational, chi1_p: i8, p: u64, k: u32, terms: usize) -> Vec<Rational> {
    let norm = rat_pow(p, 2 * k - 1);
    let mut b = Vec::with_capacity(terms + 1);
    b.push(a_t.clone());
    if terms == 0 {
        return b;
    }
    b.push((trace - rat(chi1_p as i64) * rat_pow(p, k - 1)) * a_t);
    for m in 1..terms {
        let next = trace * &b[m] - &norm * &b[m - 1];
        b.push(next);
    }
    b
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsequence {
    Full,
    Odd,
    Even,
    Progression(ProgressionSpec),
}

/// Positions kept by `mode` out of `0..len`.
pub fn subsequence_indices(len: usize, mode: &Subsequence) -> Vec<usize> {
    match mode {
        Subsequence::Full => (0..len).collect(),
        Subsequence::Odd => (1..len).step_by(2).collect(),
        Subsequence::Even => (0..len).step_by(2).collect(),
        Subsequence::Progression(spec) => spec.indices(len).collect(),
    }
}

pub fn subsequence(seq: &[Rational], mode: &Subsequence) -> Result<Vec<Rational>> {
    match mode {
        Subsequence::Progression(spec) => match progression_extract(seq, spec, Route::Direct)? {
            Extraction::Exact(v) => Ok(v),
            Extraction::Approx(_) => unreachable!("direct extraction is exact"),
        },
        other => Ok(subsequence_indices(seq.len(), other)
            .into_iter()
            .map(|i| seq[i].clone())
            .collect()),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SignChanges {
    pub length: usize,
    pub change_count: usize,
    /// Right end `j` of the first change.
    pub first_change_index: Option<usize>,
    pub change_positions: Vec<(usize, usize)>,
    pub zero_count: usize,
}

pub fn count_sign_changes(seq: &[Rational]) -> SignChanges {
    let mut positions = Vec::new();
    let mut last: Option<(usize, i8)> = None;
    let mut zero_count = 0;
    for (j, x) in seq.iter().enumerate() {
        let s = sign(x);
        if s == 0 {
            zero_count += 1;
            continue;
        }
        if let Some((i, prev)) = last {
            if prev != s {
                positions.push((i, j));
            }
        }
        last = Some((j, s));
    }
    SignChanges {
        length: seq.len(),
        change_count: positions.len(),
        first_change_index: positions.first().map(|&(_, j)| j),
        change_positions: positions,
        zero_count,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ScanMode {
    Full,
    Odd,
    Even,
    /// Residue `h` modulo the prime `q`; the order and offset depend on `p`.
    Progression { q: u64, h: u64 },
}

impl fmt::Display for ScanMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScanMode::Full => write!(f, "full"),
            ScanMode::Odd => write!(f, "odd"),
            ScanMode::Even => write!(f, "even"),
            ScanMode::Progression { q, h } => write!(f, "progression({q},{h})"),
        }
    }
}

impl ScanMode {
    /// Subsequence for prime `p`, or `None` when `p` is not admissible for a
    /// progression (`p = q` or `h` outside `<p> mod q`).
    pub fn for_prime(&self, p: u64) -> Result<Option<Subsequence>> {
        Ok(Some(match *self {
            ScanMode::Full => Subsequence::Full,
            ScanMode::Odd => Subsequence::Odd,
            ScanMode::Even => Subsequence::Even,
            ScanMode::Progression { q, h } => match ProgressionSpec::new(q, h, p) {
                Ok(spec) => Subsequence::Progression(spec),
                Err(Error::NotInSubgroup { .. } | Error::SamePrime(_)) => return Ok(None),
                Err(e) => return Err(e),
            },
        }))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SignChangeReport {
    pub p: u64,
    pub t: u64,
    pub mode: String,
    pub length: usize,
    pub change_count: usize,
    pub first_change_index: Option<usize>,
    pub change_positions: Vec<(usize, usize)>,
    pub zero_count: usize,
    pub deligne_status: DeligneStatus,
}

fn scan_prime(
    form: &HalfIntegralForm,
    t: u64,
    a_t: &Rational,
    mode: &ScanMode,
    p: u64,
    terms: usize,
) -> Result<Option<SignChangeReport>> {
    let Some(sub) = mode.for_prime(p)? else {
        return Ok(None);
    };
    let chars = TwistCharacters::for_form(form, t)?;
    let trace = hecke::extract_trace(form, t, p)?;
    let seq = twisted_sequence(a_t, &trace, chars.chi1(p), p, form.k(), terms);
    let picked = subsequence(&seq, &sub)?;
    let changes = count_sign_changes(&picked);
    Ok(Some(SignChangeReport {
        p,
        t,
        mode: mode.to_string(),
        length: changes.length,
        change_count: changes.change_count,
        first_change_index: changes.first_change_index,
        change_positions: changes.change_positions,
        zero_count: changes.zero_count,
        deligne_status: deligne_check(&trace, p, form.k()),
    }))
}

/// Sign-change reports for every prime `p <= p_max` coprime to the level,
/// sorted by `p`. The sequence `b_0..=b_M` is generated by the recurrence
/// from `a(t)` and `a(t p^2)`, so `M` is not limited by the form's precision.
pub fn scan(form: &HalfIntegralForm, t: u64, mode: ScanMode, p_max: u64, terms: usize) -> Result<Vec<SignChangeReport>> {
    arith::require_squarefree(t)?;
    let a_t = form.coefficient(t, 1)?.clone();
    if a_t.is_zero() {
        return Err(Error::ZeroBase(t));
    }
    let primes: Vec<u64> = arith::primes_up_to(p_max)
        .into_iter()
        .filter(|p| !form.level().is_multiple_of(*p))
        .collect();
    let reports: Vec<Option<SignChangeReport>> = primes
        .par_iter()
        .map(|&p| scan_prime(form, t, &a_t, &mode, p, terms))
        .collect::<Result<_>>()?;
    Ok(reports.into_iter().flatten().collect())
}
