//! Shared numerical constants.
//!
//! These values are part of the public contract: tests and downstream solvers
//! read them from here rather than hard-coding their own.

/// Half-width of the band around `σ = 1` handled by the Cobb–Douglas limit.
pub const COBB_DOUGLAS_BAND: f64 = 1e-9;
/// At or above this `σ` the CES kernel uses the perfect-substitute branch.
pub const LINEAR_SIGMA: f64 = 1e6;
/// At or below this `σ` the CES kernel uses the fixed-proportions branch.
pub const LEONTIEF_SIGMA: f64 = 1e-4;
/// Above this `σ` dual-cost terms are evaluated in log space.
pub const LOG_SPACE_SIGMA: f64 = 50.0;
/// Above this price (or quantity) ratio terms are evaluated in log space.
pub const LOG_SPACE_RATIO: f64 = 1e6;

/// Relative tolerance on equilibrium prices.
pub const PRICE_RTOL: f64 = 1e-10;
/// Excess-demand tolerance, as a multiple of the relevant supply scale.
pub const EXCESS_ATOL_FACTOR: f64 = 1e-9;
/// Iteration cap for root searches.
pub const MAX_ITER: usize = 200;

/// Initial log-price bracket for root searches.
pub const BRACKET_LO: f64 = 1e-9;
pub const BRACKET_HI: f64 = 1e9;
/// Each expansion widens the bracket by this factor on both sides.
pub const BRACKET_GROWTH: f64 = 1e9;
pub const BRACKET_EXPANSIONS: usize = 3;

/// Relative gap under which two corner costs count as a tie.
pub const TIE_RTOL: f64 = 1e-12;

/// Relative step for Shephard's-lemma finite differences.
pub const SHEPHARD_STEP: f64 = 1e-6;
pub const SHEPHARD_RTOL: f64 = 1e-5;
pub const DUALITY_RTOL: f64 = 1e-10;
pub const HOMOGENEITY_RTOL: f64 = 1e-12;
pub const ORACLE_RTOL: f64 = 1e-6;
pub const LIMIT_RTOL: f64 = 1e-3;

/// Default log step for the semi-elasticity finite difference.
pub const SEMI_ELASTICITY_STEP: f64 = 1e-4;
/// Agreement required between the direct and finite-difference
/// semi-elasticities: `max(abs, rel·|fd|)`.
pub const SEMI_ELASTICITY_ATOL: f64 = 1e-4;
pub const SEMI_ELASTICITY_RTOL: f64 = 1e-3;
