//! Truncated p-adic arithmetic and fixed-point-free criteria for the
//! conjugation action of a torsion element on a uniform lattice.
//!
//! Values built from integers keep their exact lift alongside the residue,
//! so determinants of integer matrices are exact and the verdicts derived
//! from them are unconditional. Truncated inputs only ever give a
//! valuation up to the working precision.

use std::fmt;

use serde::{Serialize, Serializer};
use thiserror::Error;

mod criterion;
mod cyclotomic;
mod int;
mod matrix;

pub use criterion::{
    coset_order_check, fixed_point_free, torsion_coset_criterion, ActionSpec, Candidate, CosetCounterexample,
    CosetOrderMethod, CosetOrderReport, FixedPointVerdict, LatticeKind, TorsionVerdict, Verdict,
    DEFAULT_COSET_BUDGET,
};
pub use cyclotomic::CyclotomicElement;
pub use int::PadicInt;
pub use matrix::{det_valuation, DetReport, PadicMatrix};

/// Working precision (in p-adic digits) when none is requested.
pub const DEFAULT_PRECISION: u32 = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PadicError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("precision must be positive")]
    ZeroPrecision,
    #[error("matrix is not square: {rows} rows, row {row} has {len} entries")]
    NotSquare { rows: usize, row: usize, len: usize },
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("t^{order} is not the identity at precision {precision}")]
    NotTorsion { order: u64, precision: u32 },
    #[error("invalid candidate: {0}")]
    Candidate(String),
    #[error("coset_order_check needs an abelian lattice candidate with integer action")]
    NotConstructible,
    #[error(transparent)]
    Group(#[from] crate::groups::GroupError),
}

/// p-adic valuation of a value known either exactly or modulo `p^N`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(u32),
    /// The value is exactly zero.
    Infinite,
    /// Zero modulo `p^N`; nothing more is known.
    AtLeast(u32),
}

impl Valuation {
    pub fn is_finite(self) -> bool {
        matches!(self, Valuation::Finite(_))
    }

    pub fn finite(self) -> Option<u32> {
        match self {
            Valuation::Finite(v) => Some(v),
            _ => None,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => f.write_str("infinite"),
            Valuation::AtLeast(n) => write!(f, ">={n}"),
        }
    }
}

impl Serialize for Valuation {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Valuation::Finite(v) => s.serialize_u32(*v),
            other => s.collect_str(other),
        }
    }
}

fn check_prime(p: u64, precision: u32) -> Result<(), PadicError> {
    if !crate::is_prime(p) {
        return Err(PadicError::NotPrime(p));
    }
    if precision == 0 {
        return Err(PadicError::ZeroPrecision);
    }
    Ok(())
}
