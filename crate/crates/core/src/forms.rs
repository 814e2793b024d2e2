//! Half-integral weight forms, squarefree indexing and the JSON form file.
//!
//! A form file is a UTF-8 JSON object:
//!
//! ```json
//! { "level": 4, "k": 6, "character": "trivial", "prec": 3,
//!   "coeffs": ["0", "1", "2", "-12"] }
//! ```
//!
//! `character` is either `"trivial"` or an object mapping every residue
//! coprime to the level (as a decimal string) to `1` or `-1`.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::arith::{self, format_rational, parse_rational, Rational};
use crate::error::{Error, Result};
use crate::qseries::{expand_recipe, EtaRecipe, TruncatedSeries};

/// Real Dirichlet character modulo the level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Character {
    Trivial,
    /// Values on the units modulo the level, each `1` or `-1`.
    Quadratic(BTreeMap<u64, i8>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormDescriptor {
    level: u64,
    k: u32,
    character: Character,
}

impl FormDescriptor {
    pub fn new(level: u64, k: u32, character: Character) -> Result<Self> {
        if level == 0 || !level.is_multiple_of(4) {
            return Err(Error::InvalidLevel(level));
        }
        if k < 2 {
            return Err(Error::InvalidWeight(k));
        }
        if let Character::Quadratic(table) = &character {
            validate_character(level, table)?;
        }
        Ok(FormDescriptor { level, k, character })
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn character(&self) -> &Character {
        &self.character
    }

    /// `chi(m)`, zero when `m` shares a factor with the level.
    pub fn chi(&self, m: u64) -> i8 {
        if arith::gcd(m, self.level) != 1 {
            return 0;
        }
        match &self.character {
            Character::Trivial => 1,
            Character::Quadratic(table) => table[&(m % self.level)],
        }
    }

    /// `chi(p)^e` for a unit `p`.
    pub fn chi_pow(&self, p: u64, e: u64) -> i8 {
        let c = self.chi(p);
        if c == 0 {
            0
        } else if e.is_multiple_of(2) {
            1
        } else {
            c
        }
    }
}

fn validate_character(level: u64, table: &BTreeMap<u64, i8>) -> Result<()> {
    let units: Vec<u64> = (1..level).filter(|&a| arith::gcd(a, level) == 1).collect();
    for (&a, &v) in table {
        if a >= level || arith::gcd(a, level) != 1 {
            return Err(Error::BadCharacter(format!("residue {a} is not a unit modulo {level}")));
        }
        if v != 1 && v != -1 {
            return Err(Error::BadCharacter(format!("value {v} at {a} is not ±1")));
        }
    }
    if let Some(missing) = units.iter().find(|a| !table.contains_key(a)) {
        return Err(Error::BadCharacter(format!("missing value at residue {missing}")));
    }
    for &a in &units {
        for &b in &units {
            let ab = a * b % level;
            if table[&a] * table[&b] != table[&ab] {
                return Err(Error::BadCharacter(format!(
                    "not multiplicative: chi({a}) chi({b}) != chi({ab})"
                )));
            }
        }
    }
    Ok(())
}

/// A form in `S_{k+1/2}(N, chi)` known through a truncated q-expansion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HalfIntegralForm {
    descriptor: FormDescriptor,
    series: TruncatedSeries,
}

impl HalfIntegralForm {
    pub fn new(descriptor: FormDescriptor, series: TruncatedSeries) -> Result<Self> {
        let a0 = &series.coeffs()[0];
        if !a0.is_zero() {
            return Err(Error::NonCuspidal(format_rational(a0)));
        }
        Ok(HalfIntegralForm { descriptor, series })
    }

    pub fn descriptor(&self) -> &FormDescriptor {
        &self.descriptor
    }

    pub fn series(&self) -> &TruncatedSeries {
        &self.series
    }

    pub fn level(&self) -> u64 {
        self.descriptor.level
    }

    pub fn k(&self) -> u32 {
        self.descriptor.k
    }

    pub fn prec(&self) -> u64 {
        self.series.prec()
    }

    pub fn chi(&self, m: u64) -> i8 {
        self.descriptor.chi(m)
    }

    /// Raw coefficient `a(n)`.
    pub fn a(&self, n: u64) -> Result<&Rational> {
        self.series.coeff(n)
    }

    /// `a(t m^2)` for squarefree `t`.
    pub fn coefficient(&self, t: u64, m: u64) -> Result<&Rational> {
        arith::require_squarefree(t)?;
        let index = t
            .checked_mul(m)
            .and_then(|x| x.checked_mul(m))
            .ok_or(Error::PrecisionExceeded { index: u64::MAX, prec: self.prec() })?;
        self.a(index)
    }

    /// Squarefree `t <= bound` with `a(t) != 0` inside the precision.
    pub fn nonvanishing_squarefree(&self, bound: u64) -> Vec<u64> {
        (1..=bound.min(self.prec()))
            .filter(|&t| arith::is_squarefree(t))
            .filter(|&t| !self.series.coeffs()[t as usize].is_zero())
            .collect()
    }
}

pub use crate::arith::squarefree_decompose;

#[derive(Debug, Serialize, Deserialize)]
struct FormFile {
    level: u64,
    k: u32,
    character: Value,
    prec: u64,
    coeffs: Vec<String>,
}

fn parse_series(prec: u64, coeffs: &[String]) -> Result<TruncatedSeries> {
    if coeffs.len() as u64 != prec + 1 {
        return Err(Error::ParseError(format!(
            "prec {prec} requires {} coefficients, found {}",
            prec + 1,
            coeffs.len()
        )));
    }
    let values = coeffs
        .iter()
        .map(|s| parse_rational(s))
        .collect::<Result<Vec<_>>>()?;
    Ok(TruncatedSeries::new(values))
}

fn parse_character(value: &Value) -> Result<Character> {
    match value {
        Value::String(s) if s == "trivial" => Ok(Character::Trivial),
        Value::Object(map) => {
            let mut table = BTreeMap::new();
            for (key, v) in map {
                let residue: u64 = key
                    .parse()
                    .map_err(|_| Error::BadCharacter(format!("residue key {key:?}")))?;
                let value = v
                    .as_i64()
                    .filter(|x| *x == 1 || *x == -1)
                    .ok_or_else(|| Error::BadCharacter(format!("value at {key} is not ±1")))?;
                table.insert(residue, value as i8);
            }
            Ok(Character::Quadratic(table))
        }
        other => Err(Error::BadCharacter(format!("unsupported character {other}"))),
    }
}

fn character_to_json(character: &Character) -> Value {
    match character {
        Character::Trivial => Value::String("trivial".into()),
        Character::Quadratic(table) => Value::Object(
            table
                .iter()
                .map(|(a, v)| (a.to_string(), Value::from(*v as i64)))
                .collect(),
        ),
    }
}

fn read_file(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

pub fn parse_form(text: &str) -> Result<HalfIntegralForm> {
    let file: FormFile =
        serde_json::from_str(text).map_err(|e| Error::ParseError(e.to_string()))?;
    if file.level == 0 || !file.level.is_multiple_of(4) {
        return Err(Error::InvalidLevel(file.level));
    }
    let character = parse_character(&file.character)?;
    let descriptor = FormDescriptor::new(file.level, file.k, character)?;
    HalfIntegralForm::new(descriptor, parse_series(file.prec, &file.coeffs)?)
}

pub fn load_form(path: impl AsRef<Path>) -> Result<HalfIntegralForm> {
    parse_form(&read_file(path.as_ref())?)
}

fn series_json(level: u64, k: u32, character: Value, series: &TruncatedSeries) -> String {
    let file = FormFile {
        level,
        k,
        character,
        prec: series.prec(),
        coeffs: series.coeffs().iter().map(format_rational).collect(),
    };
    let mut out = serde_json::to_string(&file).expect("form file serializes");
    out.push('\n');
    out
}

pub fn form_to_json(form: &HalfIntegralForm) -> String {
    series_json(
        form.level(),
        form.k(),
        character_to_json(form.descriptor.character()),
        &form.series,
    )
}

pub fn save_form(form: &HalfIntegralForm, path: impl AsRef<Path>) -> Result<()> {
    write_file(path.as_ref(), &form_to_json(form))
}

/// Integral-weight coefficients in the form-file layout; `level` and `k` are
/// carried for documentation and not validated.
pub fn parse_series_file(text: &str) -> Result<TruncatedSeries> {
    let file: FormFile =
        serde_json::from_str(text).map_err(|e| Error::ParseError(e.to_string()))?;
    parse_series(file.prec, &file.coeffs)
}

pub fn load_series_file(path: impl AsRef<Path>) -> Result<TruncatedSeries> {
    parse_series_file(&read_file(path.as_ref())?)
}

pub fn series_file_json(level: u64, k: u32, series: &TruncatedSeries) -> String {
    series_json(level, k, Value::String("trivial".into()), series)
}

pub(crate) fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|e| Error::Io {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

/// Recipe and descriptor of the concrete form the harness verifies and scans.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlagshipConfig {
    pub recipe: EtaRecipe,
    pub level: u64,
    pub k: u32,
    pub character: Character,
    pub prec: u64,
}

impl Default for FlagshipConfig {
    /// `eta(2z)^12 theta(z)` in `S_{13/2}(4)`, to `q^10000`.
    fn default() -> Self {
        FlagshipConfig {
            recipe: EtaRecipe { factors: vec![(2, 12)], theta_power: 1 },
            level: 4,
            k: 6,
            character: Character::Trivial,
            prec: 10_000,
        }
    }
}

impl FlagshipConfig {
    pub fn build(&self) -> Result<HalfIntegralForm> {
        let descriptor = FormDescriptor::new(self.level, self.k, self.character.clone())?;
        if self.recipe.doubled_weight() != 2 * self.k as i64 + 1 {
            return Err(Error::InvalidArgument(format!(
                "recipe weight {}/2 does not match k + 1/2 = {}/2",
                self.recipe.doubled_weight(),
                2 * self.k + 1
            )));
        }
        let series = expand_recipe(&self.recipe, self.prec)?;
        HalfIntegralForm::new(descriptor, series)
    }
}
