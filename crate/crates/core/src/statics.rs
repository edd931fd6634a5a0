//! Comparative statics.
//!
//! [`semi_elasticity`] evaluates the wage pass-through
//! `d ln W_H / d ln W_A^eff = 1 − (1/σ)·d ln(L_H/L_A)/d ln W_A^eff`
//! two ways: through the formula (with the ratio derivative taken
//! numerically) and by differencing the solved wage directly. With a
//! perfectly inelastic human-labor supply both quantities are pinned by the
//! supply and demand constraints, the ratio term vanishes and the
//! pass-through is exactly 1. With an elastic supply the ratio moves and the
//! second term offsets part of the direct effect.
//!
//! Note on labeling: the polar case with pass-through 1 is the *fixed
//! quantity* (inelastic) supply under this setup. Some statements of the
//! result attach that case to a perfectly elastic supply instead; the code
//! follows the formula.

use crate::ces::{self, AgentRequirement};
use crate::error::{CawError, Result};
use crate::market::{self, solve_coupled};
use crate::model::{CesParams, EquilibriumResult, IsoElasticCurve, Scenario, Technology};
use crate::roots;
use crate::tolerances::{MAX_ITER, PRICE_RTOL};

/// Fixed effective-labor demand met by human labor from `labor_supply` and
/// agent labor at `w_a_eff`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StaticsSetup {
    pub ces: CesParams,
    pub l_eff_demand: f64,
    /// Elasticity 0 is the fixed-quantity polar case.
    pub labor_supply: IsoElasticCurve,
    pub w_a_eff: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StaticsPoint {
    pub w_h: f64,
    pub l_h: f64,
    pub l_a: f64,
}

/// Log-wage tolerance for the inner solve; tight because semi-elasticities
/// divide solver error by the difference step.
pub const STATICS_TOL: f64 = 1e-14;

fn validate(su: &StaticsSetup) -> Result<()> {
    if let Some(v) = su.ces.validate().into_iter().next() {
        return Err(CawError::InvalidInput(v.message));
    }
    let s = &su.labor_supply;
    if s.kind != crate::model::CurveKind::Supply || !(s.scale > 0.0) || !(s.elasticity >= 0.0) {
        return Err(CawError::invalid(format!("invalid labor supply {s:?}")));
    }
    if !(su.l_eff_demand > 0.0 && su.l_eff_demand.is_finite()) {
        return Err(CawError::invalid("l_eff_demand must be > 0"));
    }
    if !(su.w_a_eff > 0.0 && su.w_a_eff.is_finite()) {
        return Err(CawError::invalid("w_a_eff must be > 0"));
    }
    Ok(())
}

/// Solves for `(w_h, l_h, l_a)` with `l_h = supply(w_h)`,
/// `ces_output(l_h, l_a) = demand` and `w_h/w_a = relative_wage(l_h, l_a)`.
///
/// The residual in `ln w_h` is increasing (a higher wage draws more human
/// labor, needs less agent labor, and lowers the relative marginal product),
/// so a bracketing search on the wage converges to the unique solution.
pub fn solve_statics_point(su: &StaticsSetup, tol: f64) -> Result<StaticsPoint> {
    validate(su)?;
    let supply = &su.labor_supply;
    if supply.elasticity == 0.0 {
        let l_h = supply.scale;
        let l_a = match ces::required_agent_labor(&su.ces, l_h, su.l_eff_demand)? {
            AgentRequirement::Interior(l_a) if l_a > 0.0 => l_a,
            other => {
                return Err(CawError::Infeasible(format!(
                    "fixed human labor {l_h} cannot meet demand {} with agents ({other:?})",
                    su.l_eff_demand
                )))
            }
        };
        let w_h = su.w_a_eff * ces::relative_wage(&su.ces, l_h, l_a)?;
        return Ok(StaticsPoint { w_h, l_h, l_a });
    }

    let residual = |w_h: f64| -> f64 {
        let l_h = supply.quantity(w_h);
        match ces::required_agent_labor(&su.ces, l_h, su.l_eff_demand) {
            Ok(AgentRequirement::Interior(l_a)) if l_a > 0.0 && l_h > 0.0 => {
                match ces::relative_wage(&su.ces, l_h, l_a) {
                    Ok(rw) => w_h.ln() - su.w_a_eff.ln() - rw.ln(),
                    Err(_) => f64::NAN,
                }
            }
            Ok(AgentRequirement::Saturated) | Ok(AgentRequirement::Interior(_)) => f64::INFINITY,
            Ok(AgentRequirement::Unreachable) => f64::NEG_INFINITY,
            Err(_) => f64::NAN,
        }
    };
    let root = match roots::solve_on_log_price(residual, tol, MAX_ITER) {
        Ok(r) => r,
        Err(CawError::NoEquilibrium(msg)) => return Err(CawError::Infeasible(msg)),
        Err(e) => return Err(e),
    };
    let w_h = root.x;
    let l_h = supply.quantity(w_h);
    match ces::required_agent_labor(&su.ces, l_h, su.l_eff_demand)? {
        AgentRequirement::Interior(l_a) if root.fx.is_finite() => {
            Ok(StaticsPoint { w_h, l_h, l_a })
        }
        _ => Err(CawError::Infeasible(
            "no interior point with positive human and agent labor".into(),
        )),
    }
}

/// Both routes to the wage pass-through, plus the one-sided differences.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SemiElasticity {
    /// `1 − (1/σ)·d ln(l_h/l_a)/d ln w_a`.
    pub direct: f64,
    /// Centered difference of `ln w_h` in `ln w_a`.
    pub fd: f64,
    pub fd_forward: f64,
    pub fd_backward: f64,
    /// Centered difference of `ln(l_h/l_a)` in `ln w_a`.
    pub ratio_derivative: f64,
}

impl SemiElasticity {
    /// Agreement within `max(atol, rtol·|fd|)`.
    pub fn agrees(&self, atol: f64, rtol: f64) -> bool {
        (self.direct - self.fd).abs() <= atol.max(rtol * self.fd.abs())
    }
}

/// Pass-through of the effective agent wage into the human wage, using a
/// log step of `rel_step` in `w_a_eff`.
pub fn semi_elasticity(su: &StaticsSetup, rel_step: f64) -> Result<SemiElasticity> {
    if !(rel_step > 0.0 && rel_step <= 0.1) {
        return Err(CawError::invalid(format!(
            "rel_step must be in (0, 0.1], got {rel_step}"
        )));
    }
    let at = |shift: f64| {
        let setup = StaticsSetup {
            w_a_eff: su.w_a_eff * shift.exp(),
            ..*su
        };
        solve_statics_point(&setup, STATICS_TOL)
    };
    let mid = at(0.0)?;
    let up = at(rel_step)?;
    let down = at(-rel_step)?;
    let ln_ratio = |p: &StaticsPoint| (p.l_h / p.l_a).ln();
    let ratio_derivative = (ln_ratio(&up) - ln_ratio(&down)) / (2.0 * rel_step);
    Ok(SemiElasticity {
        direct: 1.0 - ratio_derivative / su.ces.sigma,
        fd: (up.w_h.ln() - down.w_h.ln()) / (2.0 * rel_step),
        fd_forward: (up.w_h.ln() - mid.w_h.ln()) / rel_step,
        fd_backward: (mid.w_h.ln() - down.w_h.ln()) / rel_step,
        ratio_derivative,
    })
}

/// Ceiling path `λ·k·e^{−g t}·r_c` over an ascending time grid.
pub fn caw_trajectory(tech: &Technology, r_c: f64, t_grid: &[f64]) -> Result<Vec<(f64, f64)>> {
    if !(r_c >= 0.0 && r_c.is_finite()) {
        return Err(CawError::invalid(format!("r_c must be ≥ 0, got {r_c}")));
    }
    if t_grid.iter().any(|t| !(*t >= 0.0 && t.is_finite())) {
        return Err(CawError::invalid("times must be finite and ≥ 0"));
    }
    if t_grid.windows(2).any(|w| w[1] < w[0]) {
        return Err(CawError::invalid("time grid must be ascending"));
    }
    let base = tech.lambda * tech.k * r_c;
    Ok(t_grid
        .iter()
        .map(|&t| (t, base * (-tech.g * t).exp()))
        .collect())
}

/// Wage, employment and wage bill with the wage held at a given ceiling.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WageBillState {
    pub wage: f64,
    /// Effective-labor demand at the wage.
    pub demand: f64,
    /// Human labor supplied at the wage.
    pub supply: f64,
    /// `min(supply, demand)`.
    pub employment: f64,
    /// `wage · employment`.
    pub bill: f64,
    /// The uncapped clearing wage is at or above this ceiling.
    pub binding: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WageBillResponse {
    pub before: WageBillState,
    pub after: WageBillState,
}

/// How the wage bill responds when the ceiling moves from `ceiling_before`
/// to `ceiling_after`. The ceiling bounds the wage; whether the bill falls
/// depends on how elastic demand for the output is.
///
/// Fails with [`CawError::CeilingNotBinding`] when the new ceiling sits
/// above the uncapped clearing wage. The starting state is evaluated at its
/// ceiling either way and flagged through [`WageBillState::binding`].
pub fn wage_bill_response(
    output_demand: &IsoElasticCurve,
    labor_supply: &IsoElasticCurve,
    ceiling_before: f64,
    ceiling_after: f64,
) -> Result<WageBillResponse> {
    for c in [ceiling_before, ceiling_after] {
        if !(c > 0.0 && c.is_finite()) {
            return Err(CawError::invalid(format!("ceilings must be > 0, got {c}")));
        }
    }
    let w_clear = match market::clear_market_closed_form(labor_supply, output_demand) {
        Ok(p) => p.price,
        Err(CawError::NoEquilibrium(_)) if labor_supply.scale < output_demand.scale => {
            f64::INFINITY
        }
        Err(CawError::NoEquilibrium(_)) => 0.0,
        Err(e) => return Err(e),
    };
    let state = |w: f64| {
        let demand = output_demand.quantity(w);
        let supply = labor_supply.quantity(w);
        let employment = supply.min(demand);
        WageBillState {
            wage: w,
            demand,
            supply,
            employment,
            bill: w * employment,
            binding: w_clear >= w * (1.0 - PRICE_RTOL),
        }
    };
    let after = state(ceiling_after);
    if !after.binding {
        return Err(CawError::CeilingNotBinding {
            ceiling: ceiling_after,
            clearing_wage: w_clear,
        });
    }
    Ok(WageBillResponse {
        before: state(ceiling_before),
        after,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SolverMode {
    /// Compute market cleared against exogenous demand, then the capped
    /// labor market.
    #[default]
    Capped,
    /// Fixed point between compute and labor markets.
    Coupled,
}

impl SolverMode {
    pub fn solve(self, s: &Scenario) -> Result<EquilibriumResult> {
        match self {
            SolverMode::Capped => market::solve_capped(s),
            SolverMode::Coupled => solve_coupled(s, PRICE_RTOL, MAX_ITER),
        }
    }
}

/// Addressable scenario fields for sweeps.
pub const SWEEP_PARAMS: &[&str] = &[
    "technology.lambda",
    "technology.k",
    "technology.g",
    "ces.A",
    "ces.alpha",
    "ces.beta",
    "ces.sigma",
    "compute_supply.scale",
    "compute_supply.elasticity",
    "compute_demand.scale",
    "compute_demand.elasticity",
    "labor_demand_ts.scale",
    "labor_demand_ts.elasticity",
    "labor_supply_ts.scale",
    "labor_supply_ts.elasticity",
    "policy.tau_c",
    "policy.mu",
    "output_price",
];

fn field<'a>(s: &'a mut Scenario, path: &str) -> Result<&'a mut f64> {
    Ok(match path {
        "technology.lambda" => &mut s.technology.lambda,
        "technology.k" => &mut s.technology.k,
        "technology.g" => &mut s.technology.g,
        "ces.A" => &mut s.ces.a,
        "ces.alpha" => &mut s.ces.alpha,
        "ces.beta" => &mut s.ces.beta,
        "ces.sigma" => &mut s.ces.sigma,
        "compute_supply.scale" => &mut s.compute_supply.scale,
        "compute_supply.elasticity" => &mut s.compute_supply.elasticity,
        "compute_demand.scale" => &mut s.compute_demand_exogenous.scale,
        "compute_demand.elasticity" => &mut s.compute_demand_exogenous.elasticity,
        "labor_demand_ts.scale" => &mut s.labor_demand_ts.scale,
        "labor_demand_ts.elasticity" => &mut s.labor_demand_ts.elasticity,
        "labor_supply_ts.scale" => &mut s.labor_supply_ts.scale,
        "labor_supply_ts.elasticity" => &mut s.labor_supply_ts.elasticity,
        "policy.tau_c" => &mut s.policy.tau_c,
        "policy.mu" => &mut s.policy.mu,
        "output_price" => &mut s.output_price,
        other => {
            return Err(CawError::invalid(format!(
                "unknown parameter `{other}`; expected one of: {}",
                SWEEP_PARAMS.join(", ")
            )))
        }
    })
}

pub fn get_param(s: &Scenario, path: &str) -> Result<f64> {
    let mut copy = *s;
    field(&mut copy, path).map(|v| *v)
}

pub fn set_param(s: &mut Scenario, path: &str, value: f64) -> Result<()> {
    *field(s, path)? = value;
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub value: f64,
    pub result: Result<EquilibriumResult>,
}

/// Solves `s` once per grid value of `param_path`. Rows follow the grid
/// order; a failing row records its error and the sweep continues.
pub fn sweep(
    s: &Scenario,
    param_path: &str,
    grid: &[f64],
    mode: SolverMode,
) -> Result<Vec<SweepRow>> {
    get_param(s, param_path)?;
    if grid.is_empty() {
        return Err(CawError::invalid("sweep grid is empty"));
    }
    Ok(grid
        .iter()
        .map(|&value| {
            let mut point = *s;
            let result = set_param(&mut point, param_path, value).and_then(|_| mode.solve(&point));
            SweepRow { value, result }
        })
        .collect())
}
