//! Harman-sieve budget for the largest prime factor of `n² + 1`: exact
//! exponents, deficiency integrals and the exponent `ϖ` they support, for
//! Kim–Sarnak `θ = 7/64` or Selberg `θ = 0`, plus desk-scale checks of the
//! arithmetic inputs.
//!
//! The crate is layered bottom-up:
//!
//! * [`params`]: exact rational exponents (`D`, `σ`, `ξ`, `γ`) and the case
//!   breakpoints for a spectral exponent `θ`.
//! * [`buchstab`]: the Buchstab function and its certified envelopes.
//! * [`linear_sieve`]: the upper/lower linear sieve functions `F`, `f`.
//! * [`quadrature`]: deterministic composite Gauss–Legendre quadrature,
//!   adaptive in one and two dimensions, fixed product grids beyond.
//! * [`deficiency`]: the deficiency integrals, the budget ledger and the
//!   solved exponent `ϖ`.
//! * [`arithmetic`]: roots of `ν² + 1 ≡ 0 (mod m)`, Kloosterman sums, the
//!   two-square correspondence, Poisson evaluation of `|A_d|` and scans.

// Negated comparisons are used on purpose so that NaN fails range checks.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod arithmetic;
pub mod buchstab;
pub mod deficiency;
mod error;
pub mod linear_sieve;
pub mod params;
pub mod quadrature;

pub use buchstab::{omega, OmegaMode};
pub use deficiency::{BudgetLedger, DeficiencyTerm, TermId};
pub use error::{Error, Result};
pub use params::{CaseBreakpoints, SieveExponents, ThetaExponent, Q};
pub use quadrature::{GridSpec, IntegralResult};
