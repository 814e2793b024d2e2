//! Characters modulo a prime and extraction of progression subsequences.
//!
//! For primes `p != q` let `n` be the order of `p` modulo `q` and `d` the least
//! exponent with `p^d = h (mod q)`. Then `p^m = h (mod q)` exactly when
//! `m = d (mod n)`, so the subsequence `b_{d + n nu}` can be cut out of
//! `(b_m)` three ways:
//!
//! * `Direct`: index filtering.
//! * `RootsOfUnity`: weights `(1/n) sum_j zeta_n^{j (m - d)}` evaluated exactly
//!   in `Q(zeta_n)`.
//! * `CharacterSum`: `(1/n) sum_eps conj(eps(h)) eps(p)^m b_m` over the
//!   characters of `<p>` obtained by restricting the table modulo `q`,
//!   in double precision.

use std::collections::BTreeSet;
use std::f64::consts::TAU;

use num_complex::Complex64;
use num_traits::Zero;
use serde::Serialize;

use crate::arith::{self, pow_mod, rat, rat_frac, Rational};
use crate::cyclotomic::CyclotomicField;
use crate::error::{Error, Result};

/// Absolute per-term tolerance for the floating-point character route.
pub const CHARACTER_ROUTE_TOLERANCE: f64 = 1e-9;

fn check_primes(p: u64, q: u64) -> Result<()> {
    arith::require_prime(p)?;
    arith::require_prime(q)?;
    if p == q {
        return Err(Error::SamePrime(p));
    }
    Ok(())
}

/// Multiplicative order of `p` modulo `q`.
pub fn order_of(p: u64, q: u64) -> Result<u64> {
    check_primes(p, q)?;
    let mut x = p % q;
    let mut n = 1;
    while x != 1 {
        x = x * (p % q) % q;
        n += 1;
    }
    Ok(n)
}

/// Least `d >= 0` with `p^d = h (mod q)`, for `1 < h < q`.
pub fn index_of(p: u64, h: u64, q: u64) -> Result<u64> {
    check_primes(p, q)?;
    if h <= 1 || h >= q {
        return Err(Error::OutOfRange { h, q });
    }
    let n = order_of(p, q)?;
    (0..n)
        .find(|&d| pow_mod(p, d, q) == h)
        .ok_or(Error::NotInSubgroup { p, h, q })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ProgressionSpec {
    pub q: u64,
    pub h: u64,
    pub p: u64,
    pub n: u64,
    pub d: u64,
}

impl ProgressionSpec {
    pub fn new(q: u64, h: u64, p: u64) -> Result<Self> {
        let d = index_of(p, h, q)?;
        let n = order_of(p, q)?;
        Ok(ProgressionSpec { q, h, p, n, d })
    }

    /// Smallest prime `p` with `p` not dividing `excluded` (and `p != q`)
    /// for which `h` lies in `<p> mod q`.
    pub fn smallest_admissible(q: u64, h: u64, excluded: u64) -> Result<Self> {
        arith::require_prime(q)?;
        if h <= 1 || h >= q {
            return Err(Error::OutOfRange { h, q });
        }
        let mut p = 2;
        loop {
            if arith::is_prime(p) && p != q && !excluded.is_multiple_of(p) {
                if let Ok(spec) = Self::new(q, h, p) {
                    return Ok(spec);
                }
            }
            p += 1;
        }
    }

    /// Indices `d, d + n, d + 2n, ...` below `len`.
    pub fn indices(&self, len: usize) -> impl Iterator<Item = usize> {
        (self.d as usize..len).step_by(self.n as usize)
    }
}

/// Dirichlet characters modulo a prime `q`: `eps_j(g^i) = zeta^{j i}` with
/// `zeta = exp(2 pi i / (q - 1))`, stored as exponents modulo `q - 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharacterTable {
    q: u64,
    generator: u64,
    log: Vec<u64>,
}

/// Smallest primitive root modulo the prime `q`.
pub fn primitive_root(q: u64) -> Result<u64> {
    arith::require_prime(q)?;
    if q == 2 {
        return Ok(1);
    }
    let phi = q - 1;
    let factors = arith::factorize(phi);
    Ok((2..q)
        .find(|&g| factors.iter().all(|&(r, _)| pow_mod(g, phi / r, q) != 1))
        .expect("a prime modulus has a primitive root"))
}

impl CharacterTable {
    pub fn new(q: u64) -> Result<Self> {
        let generator = primitive_root(q)?;
        let mut log = vec![0; q as usize];
        let mut x = 1;
        for i in 0..q - 1 {
            log[x as usize] = i;
            x = x * generator % q;
        }
        Ok(CharacterTable { q, generator, log })
    }

    pub fn modulus(&self) -> u64 {
        self.q
    }

    pub fn generator(&self) -> u64 {
        self.generator
    }

    /// Number of characters, `q - 1`.
    pub fn len(&self) -> u64 {
        self.q - 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Discrete logarithm base the generator; `None` for `a = 0 mod q`.
    pub fn log(&self, a: u64) -> Option<u64> {
        let r = a % self.q;
        (r != 0).then(|| self.log[r as usize])
    }

    /// Exponent `e` with `eps_j(a) = zeta^e`, or `None` when `eps_j(a) = 0`.
    pub fn exponent(&self, j: u64, a: u64) -> Option<u64> {
        self.log(a).map(|l| j * l % self.len())
    }

    pub fn value(&self, j: u64, a: u64) -> Complex64 {
        match self.exponent(j, a) {
            None => Complex64::zero(),
            Some(e) => Complex64::from_polar(1.0, TAU * e as f64 / self.len() as f64),
        }
    }

    /// `sum_a eps_i(a) conj(eps_j(a))` evaluated exactly.
    pub fn column_sum(&self, i: u64, j: u64) -> Rational {
        let n = self.len();
        let field = CyclotomicField::new(n);
        let terms = (1..self.q).map(|a| {
            let e = (self.exponent(i, a).unwrap() + n - self.exponent(j, a).unwrap()) % n;
            (e, rat(1))
        });
        field
            .as_rational(&field.sum_of_powers(terms))
            .expect("character sums are rational")
    }

    /// `sum_j eps_j(a) conj(eps_j(b))` evaluated exactly.
    pub fn row_sum(&self, a: u64, b: u64) -> Rational {
        let n = self.len();
        let field = CyclotomicField::new(n);
        let terms = (0..n).map(|j| {
            let e = (self.exponent(j, a).unwrap() + n - self.exponent(j, b).unwrap()) % n;
            (e, rat(1))
        });
        field
            .as_rational(&field.sum_of_powers(terms))
            .expect("character sums are rational")
    }

    /// Both orthogonality relations over the whole table.
    pub fn orthogonality_holds(&self) -> bool {
        let n = self.len();
        let full = rat(n as i64);
        let cols = (0..n).all(|i| {
            (0..n).all(|j| self.column_sum(i, j) == if i == j { full.clone() } else { rat(0) })
        });
        let rows = (1..self.q).all(|a| {
            (1..self.q).all(|b| self.row_sum(a, b) == if a == b { full.clone() } else { rat(0) })
        });
        cols && rows
    }

    /// Distinct exponents `e` with `eps(p) = zeta^e` as `eps` runs over the
    /// table, one per character of the cyclic group `<p>`, together with a
    /// representative index `j`.
    fn restrictions(&self, p: u64) -> Vec<(u64, u64)> {
        let mut seen = BTreeSet::new();
        (0..self.len())
            .filter_map(|j| {
                let e = self.exponent(j, p).unwrap();
                seen.insert(e).then_some((j, e))
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    Direct,
    RootsOfUnity,
    CharacterSum,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Extraction {
    Exact(Vec<Rational>),
    Approx(Vec<f64>),
}

impl Extraction {
    pub fn len(&self) -> usize {
        match self {
            Extraction::Exact(v) => v.len(),
            Extraction::Approx(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn to_f64(&self) -> Vec<f64> {
        match self {
            Extraction::Exact(v) => v.iter().map(arith::to_f64).collect(),
            Extraction::Approx(v) => v.clone(),
        }
    }
}

fn check_length(len: usize, spec: &ProgressionSpec) -> Result<()> {
    let needed = spec.d as usize + 1;
    if len < needed {
        return Err(Error::LengthMismatch { len, needed });
    }
    Ok(())
}

/// Weights `w_r = (1/n) sum_{j<n} zeta_n^{j r}` for `r = 0..n`, exact.
pub fn root_of_unity_weights(n: u64) -> Vec<Rational> {
    let field = CyclotomicField::new(n);
    (0..n)
        .map(|r| {
            let s = field.sum_of_powers((0..n).map(|j| (j * r % n, rat(1))));
            field.as_rational(&s).expect("full root-of-unity sums are rational") * rat_frac(1, n as i64)
        })
        .collect()
}

/// `w_{(m - d) mod n} b_m` for every `m`, exact.
pub fn roots_of_unity_filter(seq: &[Rational], spec: &ProgressionSpec) -> Vec<Rational> {
    let weights = root_of_unity_weights(spec.n);
    let n = spec.n as usize;
    let d = spec.d as usize % n;
    seq.iter()
        .enumerate()
        .map(|(m, b)| &weights[(m + n - d) % n] * b)
        .collect()
}

/// `(1/n) sum_eps conj(eps(h)) eps(p)^m x_m` for every `m`, in floating point.
pub fn character_sum_filter(values: &[f64], spec: &ProgressionSpec, table: &CharacterTable) -> Vec<Complex64> {
    assert_eq!(table.modulus(), spec.q);
    let order = table.len();
    let restrictions = table.restrictions(spec.p);
    debug_assert_eq!(restrictions.len() as u64, spec.n);
    let scale = 1.0 / spec.n as f64;
    values
        .iter()
        .enumerate()
        .map(|(m, &x)| {
            let mut acc = Complex64::zero();
            for &(j, e_p) in &restrictions {
                let e_h = table.exponent(j, spec.h).unwrap();
                let e = (e_p * (m as u64 % order) % order + order - e_h) % order;
                acc += Complex64::from_polar(1.0, TAU * e as f64 / order as f64);
            }
            acc * scale * x
        })
        .collect()
}

pub fn progression_extract(seq: &[Rational], spec: &ProgressionSpec, route: Route) -> Result<Extraction> {
    check_length(seq.len(), spec)?;
    Ok(match route {
        Route::Direct => Extraction::Exact(spec.indices(seq.len()).map(|i| seq[i].clone()).collect()),
        Route::RootsOfUnity => {
            let filtered = roots_of_unity_filter(seq, spec);
            Extraction::Exact(spec.indices(seq.len()).map(|i| filtered[i].clone()).collect())
        }
        Route::CharacterSum => {
            let values: Vec<f64> = seq.iter().map(arith::to_f64).collect();
            Extraction::Approx(character_route(&values, spec)?)
        }
    })
}

fn character_route(values: &[f64], spec: &ProgressionSpec) -> Result<Vec<f64>> {
    let table = CharacterTable::new(spec.q)?;
    let filtered = character_sum_filter(values, spec, &table);
    Ok(spec.indices(values.len()).map(|i| filtered[i].re).collect())
}

/// `b_m / norm^{m/2}` in double precision; keeps oscillating sequences with
/// Satake roots on the circle `|alpha| = sqrt(norm)` at unit scale.
pub fn deligne_normalized(seq: &[Rational], norm: &Rational) -> Vec<f64> {
    let root = arith::to_f64(norm).sqrt();
    let mut power = rat(1);
    seq.iter()
        .enumerate()
        .map(|(m, b)| {
            if m > 0 && m % 2 == 0 {
                power *= norm;
            }
            let v = arith::to_f64(&(b / &power));
            if m % 2 == 1 {
                v / root
            } else {
                v
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RouteComparison {
    pub spec: ProgressionSpec,
    pub terms: usize,
    pub direct_vs_roots_exact: bool,
    /// Largest `|character - direct|` over the compared terms, after scaling.
    pub max_character_deviation: f64,
}

impl RouteComparison {
    pub fn agree(&self) -> bool {
        self.direct_vs_roots_exact && self.max_character_deviation <= CHARACTER_ROUTE_TOLERANCE
    }
}

/// Runs all three routes on `seq`. With `norm` given, both the direct result
/// and the character route input are scaled by `norm^{-m/2}` before the
/// floating-point comparison.
pub fn compare_routes(seq: &[Rational], spec: &ProgressionSpec, norm: Option<&Rational>) -> Result<RouteComparison> {
    check_length(seq.len(), spec)?;
    let Extraction::Exact(direct) = progression_extract(seq, spec, Route::Direct)? else {
        unreachable!("direct route is exact")
    };
    let Extraction::Exact(roots) = progression_extract(seq, spec, Route::RootsOfUnity)? else {
        unreachable!("roots-of-unity route is exact")
    };
    let values = match norm {
        Some(norm) => deligne_normalized(seq, norm),
        None => seq.iter().map(arith::to_f64).collect(),
    };
    let character = character_route(&values, spec)?;
    let direct_f: Vec<f64> = spec.indices(values.len()).map(|i| values[i]).collect();
    let max_character_deviation = direct_f
        .iter()
        .zip(&character)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    Ok(RouteComparison {
        spec: *spec,
        terms: direct.len(),
        direct_vs_roots_exact: direct == roots,
        max_character_deviation,
    })
}
