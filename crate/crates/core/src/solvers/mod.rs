//! Equation-level scan drivers.
//!
//! Each driver walks a finite search range, decides every point it can,
//! and emits a [`SolutionCertificate`](crate::cert::SolutionCertificate)
//! whose solutions replay by direct substitution. Points that a factoring
//! budget leaves undecided are listed as uncovered instead of aborting
//! the scan.

pub mod lehmer;
pub mod powers;
pub mod repdigit;
pub mod totient;

pub use lehmer::{lehmer_scan, pell_exponent_exception_scan, wieferich_scan};
pub use powers::{ljunggren_check, perfect_power_scan, square_product_scan};
pub use repdigit::{
    modular_elimination_trace, phi_repdigit_scan, repdigit_scan, structure_check, EliminationTrace,
    EliminationVerdict, ModulusTrace, RepdigitForm, StructureCheck,
};
pub use totient::{phi_fixed_point_scan, phi_power_form_scan, PowerForm};

use crate::appearance::AppearanceError;
use crate::arith::ArithError;
use crate::cert::SolutionCertificate;
use crate::lucas::{LucasError, LucasPair, Side};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde_json::{json, Value};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SolverError {
    #[error("modulus {0} is outside the supported elimination set {{3, 5, 7, 8, 16}}")]
    UnsupportedModulus(u64),
    #[error("digit {0} is not a valid repeated digit for the base")]
    InvalidDigit(u64),
    #[error("base {0} must be at least 2")]
    InvalidBase(u64),
    #[error("repdigit length must be at least 1")]
    InvalidLength,
    #[error(transparent)]
    Lucas(#[from] LucasError),
    #[error(transparent)]
    Appearance(#[from] AppearanceError),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// Attach the sequence coordinates every per-pair certificate carries.
pub(crate) fn with_sequence_params(
    cert: SolutionCertificate,
    pair: &LucasPair,
    side: Side,
) -> SolutionCertificate {
    let mut cert = cert
        .with_parameter("r", json!(pair.r()))
        .with_parameter("s", json!(pair.s()))
        .with_parameter("side", Value::String(side.label().into()));
    if let Some(name) = pair.name() {
        cert = cert.with_parameter("pair", Value::String(name.into()));
    }
    cert
}

/// Exact side terms from index 0 upward, one multiply-add per step.
pub(crate) struct TermStream {
    r: BigInt,
    s: BigInt,
    cur: BigInt,
    next: BigInt,
}

impl TermStream {
    pub(crate) fn new(pair: &LucasPair, side: Side) -> Self {
        let (cur, next) = match side {
            Side::Fundamental => (BigInt::zero(), BigInt::one()),
            Side::Companion => (BigInt::from(2), BigInt::from(pair.r())),
        };
        TermStream {
            r: BigInt::from(pair.r()),
            s: BigInt::from(pair.s()),
            cur,
            next,
        }
    }
}

impl Iterator for TermStream {
    type Item = BigInt;

    fn next(&mut self) -> Option<BigInt> {
        let out = self.cur.clone();
        let follow = &self.r * &self.next + &self.s * &self.cur;
        self.cur = std::mem::replace(&mut self.next, follow);
        Some(out)
    }
}
