//! Exact q-series engine for the topological vertex with two-leg Hodge
//! integrals: partitions and ribbons, truncated Laurent series in fractional
//! powers of q, specialized (skew) Schur functions, the charge-zero fermionic
//! Fock space, vertex coefficients, Hodge generating series and the KP
//! reduction check.

pub mod context;
pub mod error;
pub mod fock;
pub mod hodge;
pub mod kp;
pub mod oracle;
pub mod partition;
pub mod qscalar;
pub mod report;
pub mod suites;
pub mod symfun;
pub mod vertex;

pub use error::{Error, Result};
