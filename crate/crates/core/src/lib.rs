//! Exact arithmetic and sign-change analysis for Fourier coefficients of
//! half-integral weight Hecke eigenforms.

pub mod arith;
pub mod characters;
pub mod cli;
pub mod cyclotomic;
pub mod error;
pub mod forms;
pub mod genfun;
pub mod hecke;
pub mod qseries;
pub mod shimura;
pub mod signscan;
pub mod suite;

pub use arith::{format_rational, parse_rational, Rational};
pub use error::{Error, Result};
pub use forms::{Character, FlagshipConfig, FormDescriptor, HalfIntegralForm};
pub use genfun::{Polynomial, RationalGF};
pub use hecke::{DeligneStatus, HeckeLocalData, RootKind};
pub use qseries::{EtaRecipe, TruncatedSeries};
pub use signscan::{ScanMode, SignChangeReport};
