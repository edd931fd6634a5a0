//! Compute-anchored wage (CAW) model.
//!
//! AI agents are treated as a technology that converts compute capital into
//! effective cognitive labor (`L_A = K_c / k`). Under perfect substitution the
//! human wage on substitutable tasks is capped at `λ·k·r_c`; under imperfect
//! substitution the CES aggregator governs how closely the wage tracks the
//! effective agent wage `k·r_c`.
//!
//! Module map:
//!
//! * [`model`] domain types and scenario validation
//! * [`ces`] CES aggregator, dual unit cost, conditional demands and limits
//! * [`bound`] effective agent wage, the CAW ceiling, corner cost minimization
//! * [`market`] iso-elastic market clearing, the capped labor market and the
//!   coupled compute/labor fixed point
//! * [`statics`] semi-elasticity identity, ceiling trajectory, wage-bill
//!   response, parameter sweeps
//! * [`calibration`] the illustrative ceiling grid, occupational wage blends,
//!   factor shares
//! * [`scenario`], [`table`], [`cli`] file formats and the command surface

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bound;
pub mod calibration;
pub mod ces;
pub mod cli;
pub mod error;
pub mod market;
pub mod model;
pub mod roots;
pub mod scenario;
pub mod statics;
pub mod table;
pub mod tolerances;

pub use error::{CawError, Result};
pub use model::{
    CesParams, CurveKind, EquilibriumResult, FactorPrices, FactorShares, IsoElasticCurve,
    PolicyLevers, Regime, Scenario, TaskProfile, Technology, Violation,
};
