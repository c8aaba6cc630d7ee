//! reclab: exact-arithmetic Poincaré recurrence times for completely
//! integrable systems.
//!
//! The pipeline reduces "when does the system return near its initial
//! state?" to simultaneous Diophantine approximation of the frequency
//! ratios, solves that with exact-integer LLL lattice reduction, and
//! verifies every answer by independent high-precision evaluation. A
//! one-dimensional harmonic chain serves as the end-to-end case study.
//!
//! - [`precision`]: decimal bignum reals with explicit error accounting
//! - [`lattice`]: exact-integer lattices and LLL reduction
//! - [`diophantine`]: the simultaneous-approximation solver, the
//!   brute-force oracle, and integer-relation detection
//! - [`chain`]: the harmonic chain and its exact long-time evolution
//! - [`experiments`]: scaling sweeps, the cosine-sum challenge, quantum
//!   recurrences
//! - [`cli`]: the `reclab` command-line surface

pub mod chain;
pub mod cli;
pub mod diophantine;
pub mod error;
pub mod experiments;
pub mod lattice;
pub mod precision;

pub use error::{Error, Result};
pub use num_bigint::BigInt;
pub use precision::HPReal;
