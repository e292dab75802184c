//! Symmetric-rate bounds for the two-user Gaussian interference channel with
//! conferencing receivers, plus a bit-level simulator for its linear
//! deterministic counterpart.
//!
//! Module map:
//!
//! - [`channel`]: channel gains and the symmetric parameterization.
//! - [`covariance`]: jointly Gaussian covariance models and conditional
//!   mutual information via log-determinants.
//! - [`rates`]: the coding-theorem constraint system, the closed-form
//!   achievable symmetric rate, the outer bound and their gap.
//! - [`gdof`]: generalized degrees of freedom, exact and numeric.
//! - [`ldc`]: linear deterministic channel, cooperation schemes and the
//!   exhaustive scheme search.
//! - [`sweep`]: grid sweeps and run records shared by the CLI and tests.
//! - [`cli`]: the `icrc` command-line front end.

pub mod channel;
pub mod cli;
pub mod covariance;
mod error;
pub mod gdof;
pub mod ldc;
pub mod rates;
pub mod sweep;

pub use channel::{ChannelGains, ComplexGain, SymmetricParams};
pub use covariance::{build_covariance, gaussian_mi, CovarianceModel};
pub use error::{Error, Result};
pub use rates::{achievable_sym_rate, gap, outer_bound_sym, RateBreakdown};
