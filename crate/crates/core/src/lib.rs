//! Truncated variation of sampled paths.
//!
//! The crate computes the truncated variation `TV^c`, upward truncated
//! variation `UTV^c` and downward truncated variation `DTV^c` of a sampled path
//! with an exact single-pass crossing algorithm ([`truncvar`]), cross-checked
//! against quadratic-time dynamic programs ([`oracle`]). It also builds the
//! optimal tube approximants, simulates Brownian motion with drift and
//! one-dimensional diffusions ([`simulate`]), evaluates the closed-form
//! large-time and renewal constants for Brownian motion with drift
//! ([`asymptotics`]), and runs Monte Carlo validations of the small-`c` and
//! large-time limit laws ([`experiments`]).

pub mod asymptotics;
pub mod error;
pub mod experiments;
pub mod oracle;
pub mod path;
pub mod simulate;
pub mod truncvar;

pub use error::{Error, Result};
pub use oracle::{brute_force_curves, brute_force_dtv, brute_force_tv, brute_force_utv};
pub use path::{total_variation, validate_path, SamplePath, Threshold};
pub use truncvar::{
    decompose, truncvar_curve, truncvar_total, tube_functions, CrossingDecomposition, LazyTube,
    Orientation, TruncVarCurve, TruncVarStream, TruncVarTotals,
};
