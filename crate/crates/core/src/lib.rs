//! Generalized taxicab numbers and their seeds.
//!
//! T(n, m, t) is the least value that is the sum of n positive m-th powers in
//! at least t ways. Past a seed number S(m, t) the sequence turns arithmetic:
//! T(S + k, m, t) = T(S, m, t) + k for all k >= 0, with seed value
//! V(m, t) = S(m, t) * 2^m.
//!
//! * [`arith`] — exact closed-form seed computation (two ways, three ways,
//!   and the general-t pair-value candidate).
//! * [`oracle`] — brute-force dynamic-programming ground truth, independent
//!   of every closed form.
//! * [`witness`] — constructive equal-sum certificates with run-length
//!   encoded sums.
//! * [`scan`] — parallel, checkpointed range scans over exponents.

pub mod arith;
pub mod error;
pub mod oracle;
pub mod scan;
pub mod witness;

pub use arith::{CaseLabel, SeedQuantities, SeedReport, SeedStatus};
pub use error::{Error, Result};
pub use oracle::{DropReport, Representation, RepsPolicy, TaxicabResult};
pub use scan::{ScanConfig, ScanFormat, ScanRecord, ScanSummary, SeedSource};
pub use witness::{EquationId, RleSum, VerificationReport, WitnessKind, WitnessSet};
