//! Bell-test feasibility analysis for single-photon W-states.
//!
//! The crate builds W-states (optionally entangled with an atomic qubit),
//! models imperfect detectors as per-party POVMs, evaluates Bell functionals
//! on the resulting outcome statistics, decides membership in the local
//! polytope by linear programming, and searches for the critical detection
//! efficiencies at which nonlocality disappears.
//!
//! Module map:
//!
//! - [`qmat`]: small dense complex linear algebra (Kronecker products,
//!   Hermitian eigenvalues, partial transpose, negativity).
//! - [`states`]: W-state, atom-photon state and amplitude-damped W-state.
//! - [`measure`]: POVM models for single-photon detection, homodyne
//!   sign-binning, displacement plus detection and lossy three-outcome
//!   measurements.
//! - [`dist`]: joint outcome distributions and full correlators.
//! - [`bell`]: Cabello, WWWZB, Mermin and CHSH functionals.
//! - [`polytope`]: deterministic strategies, the simplex LP and nonlocal
//!   content.
//! - [`search`]: scenario description, multi-start Nelder-Mead, bisection
//!   thresholds and region scans.

pub mod bell;
pub mod dist;
mod error;
pub mod measure;
pub mod parallel;
pub mod polytope;
pub mod qmat;
pub mod search;
pub mod states;

pub use error::{Error, Result};
