//! qlevel-core: an exact computer-algebra engine for truncated q-series.
//!
//! The crate expands level-l toric I-functions from charge-matrix data,
//! applies determinantal level modifications, evaluates general
//! q-hypergeometric series, and verifies — coefficient by coefficient over
//! exact cyclotomic fields — a catalog of specialization identities whose
//! right-hand sides are the classical mock theta functions of orders 3, 5,
//! and 7.
//!
//! Module layout:
//!
//! - [`exactnum`]: arbitrary-precision rationals and the cyclotomic fields
//!   Q(zeta_N) used as coefficient domains.
//! - [`qlaurent`]: the truncated Laurent-series ring in `q` over those
//!   coefficients, with per-series exactness tracking.
//! - [`symfactor`]: symbolic per-degree terms (parameter monomials times
//!   binomial factors) and the specialization semantics that turn them into
//!   numeric series.
//! - [`iseries`]: generators — toric I-function terms from charge data, the
//!   determinantal modification operator, and q-hypergeometric series.
//! - [`catalog`]: independent right-hand-side series oracles and the
//!   registry of verifiable identities.
//! - [`selfcheck`]: seeded randomized property suites used by tests and the
//!   CLI self-check.

pub mod catalog;
pub mod error;
pub mod exactnum;
pub mod iseries;
pub mod qlaurent;
pub mod rng;
pub mod selfcheck;
pub mod symfactor;

pub use error::{Error, Result};
pub use exactnum::{CycloNum, Rational};
pub use qlaurent::QSeries;

/// The coefficient field used by the identity catalog: Q(zeta_6) contains
/// every constant the cataloged specializations need.
pub const DEFAULT_FIELD_ORDER: u32 = 6;
