//! Exact truncated q-expansions and the eta/theta building blocks.
//!
//! A [`TruncatedSeries`] knows its coefficients for exponents `0..=prec`.
//! Products truncate to the smaller precision, and reading beyond `prec` is an
//! error rather than an implicit zero.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::arith::Rational;
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    coeffs: Vec<Rational>,
}

impl fmt::Debug for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let shown: Vec<String> = self
            .coeffs
            .iter()
            .take(12)
            .map(crate::arith::format_rational)
            .collect();
        write!(f, "TruncatedSeries(prec={}, [{}", self.prec(), shown.join(", "))?;
        if self.coeffs.len() > 12 {
            write!(f, ", ...")?;
        }
        write!(f, "])")
    }
}

impl TruncatedSeries {
    /// Builds a series from `coeffs[0..=prec]`. Panics on an empty vector.
    pub fn new(coeffs: Vec<Rational>) -> Self {
        assert!(!coeffs.is_empty(), "a truncated series needs at least one coefficient");
        TruncatedSeries { coeffs }
    }

    pub fn from_integers<I: IntoIterator<Item = i64>>(coeffs: I) -> Self {
        Self::new(coeffs.into_iter().map(crate::arith::rat).collect())
    }

    pub fn zero(prec: u64) -> Self {
        Self::new(vec![Rational::zero(); prec as usize + 1])
    }

    pub fn one(prec: u64) -> Self {
        let mut s = Self::zero(prec);
        s.coeffs[0] = Rational::one();
        s
    }

    pub fn prec(&self) -> u64 {
        (self.coeffs.len() - 1) as u64
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Rational> {
        self.coeffs
    }

    pub fn coeff(&self, n: u64) -> Result<&Rational> {
        self.coeffs.get(n as usize).ok_or(Error::PrecisionExceeded {
            index: n,
            prec: self.prec(),
        })
    }

    pub fn truncate(&self, prec: u64) -> Self {
        let keep = (prec.min(self.prec()) + 1) as usize;
        Self::new(self.coeffs[..keep].to_vec())
    }

    /// Multiplies by `q^shift`; the precision is unchanged.
    pub fn shift(&self, shift: u64) -> Self {
        let len = self.coeffs.len();
        let mut out = vec![Rational::zero(); len];
        for (i, c) in self.coeffs.iter().enumerate() {
            let j = i + shift as usize;
            if j >= len {
                break;
            }
            out[j] = c.clone();
        }
        Self::new(out)
    }

    /// Substitutes `q -> q^d`, keeping the precision.
    pub fn dilate(&self, d: u64) -> Self {
        assert!(d >= 1);
        let len = self.coeffs.len();
        let mut out = vec![Rational::zero(); len];
        for (i, c) in self.coeffs.iter().enumerate() {
            let j = i * d as usize;
            if j >= len {
                break;
            }
            out[j] = c.clone();
        }
        Self::new(out)
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    pub fn mul(&self, other: &Self) -> Self {
        series_mul(self, other)
    }

    /// `self^exp` by binary powering.
    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = Self::one(self.prec());
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                acc = series_mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = series_mul(&base, &base);
            }
        }
        acc
    }
}

/// Cauchy product truncated at the smaller precision.
pub fn series_mul(a: &TruncatedSeries, b: &TruncatedSeries) -> TruncatedSeries {
    let prec = a.prec().min(b.prec()) as usize;
    if a.is_integral() && b.is_integral() {
        let ai: Vec<BigInt> = a.coeffs[..=prec].iter().map(|c| c.to_integer()).collect();
        let bi: Vec<BigInt> = b.coeffs[..=prec].iter().map(|c| c.to_integer()).collect();
        let mut out = vec![BigInt::zero(); prec + 1];
        for (i, x) in ai.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in bi[..=prec - i].iter().enumerate() {
                if !y.is_zero() {
                    out[i + j] += x * y;
                }
            }
        }
        return TruncatedSeries::new(out.into_iter().map(Rational::from_integer).collect());
    }
    let mut out = vec![Rational::zero(); prec + 1];
    for (i, x) in a.coeffs[..=prec].iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.coeffs[..=prec - i].iter().enumerate() {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    TruncatedSeries::new(out)
}

/// Nonzero terms `(exponent, ±1)` of `prod_{n>=1} (1 - q^n)` up to `bound`,
/// from Euler's pentagonal number theorem.
pub fn pentagonal_terms(bound: u64) -> Vec<(u64, i64)> {
    let mut terms = vec![(0, 1)];
    let mut j: u64 = 1;
    loop {
        let sign = if j % 2 == 1 { -1 } else { 1 };
        let low = j * (3 * j - 1) / 2;
        let high = j * (3 * j + 1) / 2;
        if low > bound {
            break;
        }
        terms.push((low, sign));
        if high <= bound {
            terms.push((high, sign));
        }
        j += 1;
    }
    terms
}

/// `prod_{n>=1} (1 - q^{d n})^r` to precision `prec`, for any integer `r`.
///
/// The base product is sparse (pentagonal), so the power is taken with the
/// recurrence `n F_n = sum_i ((r+1) i - n) P_i F_{n-i}` from `F' P = r P' F`,
/// which costs O(prec^{3/2}) integer operations.
pub fn euler_product_power(d: u64, r: i64, prec: u64) -> TruncatedSeries {
    assert!(d >= 1);
    let n_max = prec as usize;
    let base: Vec<(usize, i64)> = pentagonal_terms(prec / d)
        .into_iter()
        .skip(1)
        .map(|(e, s)| ((e * d) as usize, s))
        .collect();
    let mut f: Vec<BigInt> = Vec::with_capacity(n_max + 1);
    f.push(BigInt::one());
    for n in 1..=n_max {
        let mut acc = BigInt::zero();
        for &(i, s) in &base {
            if i > n {
                break;
            }
            let w = ((r + 1) * i as i64 - n as i64) * s;
            if w != 0 && !f[n - i].is_zero() {
                acc += &f[n - i] * w;
            }
        }
        let (quot, rem) = acc.div_rem(&BigInt::from(n));
        debug_assert!(rem.is_zero(), "power recurrence must stay integral");
        f.push(quot);
    }
    TruncatedSeries::new(f.into_iter().map(Rational::from_integer).collect())
}

/// `eta(d z)^r = q^{d r / 24} prod_{n>=1} (1 - q^{d n})^r` up to `q^prec`.
pub fn eta_power(d: u64, r: u64, prec: u64) -> Result<TruncatedSeries> {
    let weight = (d * r) as i64;
    if weight % 24 != 0 {
        return Err(Error::NonIntegralOffset(weight));
    }
    let offset = (weight / 24) as u64;
    Ok(euler_product_power(d, r as i64, prec).shift(offset))
}

/// `1 + 2 sum_{n>=1} q^{n^2}` up to `q^prec`.
pub fn theta_series(prec: u64) -> TruncatedSeries {
    let mut s = TruncatedSeries::one(prec);
    let mut n: u64 = 1;
    while n * n <= prec {
        s.coeffs[(n * n) as usize] = crate::arith::rat(2);
        n += 1;
    }
    s
}

/// `prod eta(d z)^r * theta(z)^theta_power`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EtaRecipe {
    pub factors: Vec<(u64, i64)>,
    pub theta_power: u32,
}

impl EtaRecipe {
    pub fn new(factors: Vec<(u64, i64)>, theta_power: u32) -> Result<Self> {
        let recipe = EtaRecipe { factors, theta_power };
        recipe.leading_exponent()?;
        Ok(recipe)
    }

    /// `sum d r / 24`, which must be a nonnegative integer.
    pub fn leading_exponent(&self) -> Result<u64> {
        if let Some(&(d, _)) = self.factors.iter().find(|(d, _)| *d == 0) {
            return Err(Error::InvalidArgument(format!("eta scale must be positive, got {d}")));
        }
        let total: i64 = self.factors.iter().map(|&(d, r)| d as i64 * r).sum();
        if total % 24 != 0 {
            return Err(Error::NonIntegralOffset(total));
        }
        if total < 0 {
            return Err(Error::NegativeOffset(total / 24));
        }
        Ok((total / 24) as u64)
    }

    /// Weight of the product: `sum r / 2 + theta_power / 2`, returned doubled.
    pub fn doubled_weight(&self) -> i64 {
        self.factors.iter().map(|&(_, r)| r).sum::<i64>() + self.theta_power as i64
    }

    /// Parses `d:r,d:r,...`; the empty string gives no factors.
    pub fn parse_factors(s: &str) -> Result<Vec<(u64, i64)>> {
        if s.trim().is_empty() {
            return Ok(Vec::new());
        }
        s.split(',')
            .map(|part| {
                let (d, r) = part
                    .trim()
                    .split_once(':')
                    .ok_or_else(|| Error::ParseError(format!("eta factor {part:?} is not d:r")))?;
                let d: u64 = d
                    .parse()
                    .map_err(|_| Error::ParseError(format!("bad eta scale {d:?}")))?;
                let r: i64 = r
                    .parse()
                    .map_err(|_| Error::ParseError(format!("bad eta exponent {r:?}")))?;
                Ok((d, r))
            })
            .collect()
    }
}

pub fn expand_recipe(recipe: &EtaRecipe, prec: u64) -> Result<TruncatedSeries> {
    let offset = recipe.leading_exponent()?;
    let mut acc = TruncatedSeries::one(prec);
    for &(d, r) in &recipe.factors {
        acc = series_mul(&acc, &euler_product_power(d, r, prec));
    }
    if recipe.theta_power > 0 {
        acc = series_mul(&acc, &theta_series(prec).pow(recipe.theta_power));
    }
    Ok(acc.shift(offset))
}
