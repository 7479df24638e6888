//! Error types shared across the engine.

use thiserror::Error;

/// Errors produced by the specialization engine, series generators,
/// and the identity catalog.
///
/// Contract violations that indicate caller bugs (mismatched field
/// orders, inverting a zero value) panic instead; everything that can
/// be triggered by input data is reported through this type.
#[derive(Debug, Error)]
pub enum Error {
    /// A denominator binomial specialized to `1 - q^0 = 0`.
    #[error("pole: denominator factor ({context}) specializes to zero")]
    Pole { context: String },

    /// A symbol of the model has no entry in the specialization.
    #[error("unmapped symbol: {0}")]
    UnmappedSymbol(String),

    /// A specialization maps a symbol to the zero constant.
    #[error("symbol {0} is mapped to zero; specialization values must be invertible monomials")]
    ZeroSpecValue(String),

    /// Degree summation hit the cap before the minimal q-order left the
    /// requested truncation window.
    #[error("series did not converge q-adically within {cap} degrees at truncation {trunc}")]
    NonConvergence { cap: usize, trunc: i64 },

    /// A degree tuple outside the model's enumeration was requested.
    #[error("degree {0:?} is outside the model's degree enumeration")]
    DegreeOutOfRange(Vec<i64>),

    /// The term vanishes under the given specialization, so it has no
    /// minimal q-order.
    #[error("term vanishes under the specialization; it has no minimal q-order")]
    TermVanishes,

    /// Oracle id not present in the catalog.
    #[error("unknown oracle: {0}")]
    UnknownOracle(String),

    /// Identity name not present in the catalog.
    #[error("unknown identity: {0}")]
    UnknownIdentity(String),

    /// Structural validation of a model, specialization, or series failed.
    #[error("validation error: {0}")]
    Validation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
