//! Exact coefficient arithmetic: big integers and rationals, residue rings,
//! sparse multivariate (optionally Laurent) polynomials, quotient rings, and a
//! small Gröbner basis engine over prime fields.

mod groebner;
mod hom;
mod mono;
mod parse;
mod poly;
mod ring;
mod scalar;

pub use groebner::{buchberger, is_unit_ideal, is_zero_divisor, Ideal, MAX_GB_VARS};
pub use hom::RingHom;
pub use mono::{Mono, MAX_VARS};
pub use parse::{parse_poly, ParseError};
pub use poly::{poly_arith, ArithOp, MultiPoly};
pub(crate) use poly::Accumulator;
pub use ring::{Ring, RingKind};
pub use scalar::{inv_mod, is_prime, Scalar, ScalarRing};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("operands live in different rings")]
    RingMismatch,
    #[error("invalid ring: {0}")]
    InvalidRing(String),
    #[error("unknown variable {0}")]
    UnknownVariable(String),
    #[error("expected {expected} exponents, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("not invertible: {0}")]
    NotInvertible(String),
    #[error("cannot map {0}")]
    Unmappable(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("internal error: {0}")]
    Internal(String),
}
