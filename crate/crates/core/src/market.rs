//! Market clearing for the three panels of the model: the classic labor
//! market, the compute capital market, and the cognitive-labor market on
//! substitutable tasks where the CAW line caps the wage. [`solve_coupled`]
//! closes the loop by letting agent labor demand feed back into compute
//! demand.

use crate::bound::caw_ceiling;
use crate::error::{CawError, Result};
use crate::model::{CurveKind, EquilibriumResult, IsoElasticCurve, Regime, Scenario};
use crate::roots::{self, Root};
use crate::tolerances::{EXCESS_ATOL_FACTOR, MAX_ITER, PRICE_RTOL};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClearingPoint {
    pub price: f64,
    pub quantity: f64,
    pub iterations: usize,
    /// `|demand(price) − supply(price)|`.
    pub residual: f64,
}

fn check_pair(supply: &IsoElasticCurve, demand: &IsoElasticCurve) -> Result<()> {
    if supply.kind != CurveKind::Supply || demand.kind != CurveKind::Demand {
        return Err(CawError::invalid(format!(
            "expected (Supply, Demand) curves, got ({:?}, {:?})",
            supply.kind, demand.kind
        )));
    }
    for c in [supply, demand] {
        if !(c.scale > 0.0 && c.scale.is_finite())
            || !(c.elasticity >= 0.0 && c.elasticity.is_finite())
        {
            return Err(CawError::invalid(format!(
                "curve needs scale > 0 and elasticity ≥ 0, got {c:?}"
            )));
        }
    }
    Ok(())
}

fn excess_tolerance(supply: &IsoElasticCurve, demand: &IsoElasticCurve) -> f64 {
    EXCESS_ATOL_FACTOR * supply.scale.max(demand.scale)
}

/// Both curves perfectly inelastic: equal quantities clear at any price and
/// the unit price is reported; unequal quantities never clear.
fn clear_inelastic(supply: &IsoElasticCurve, demand: &IsoElasticCurve) -> Result<ClearingPoint> {
    if supply.scale == demand.scale {
        Ok(ClearingPoint {
            price: 1.0,
            quantity: supply.scale,
            iterations: 0,
            residual: 0.0,
        })
    } else {
        Err(CawError::NoEquilibrium(format!(
            "fixed supply {} never meets fixed demand {}",
            supply.scale, demand.scale
        )))
    }
}

/// Closed-form clearing price `p* = (D0/S0)^{1/(εs+εd)}`.
pub fn clear_market_closed_form(
    supply: &IsoElasticCurve,
    demand: &IsoElasticCurve,
) -> Result<ClearingPoint> {
    check_pair(supply, demand)?;
    let total = supply.elasticity + demand.elasticity;
    if total == 0.0 {
        return clear_inelastic(supply, demand);
    }
    let price = ((demand.scale.ln() - supply.scale.ln()) / total).exp();
    Ok(point(supply, demand, price, 0))
}

/// Clearing price by Brent iteration on `ln p` over excess demand in levels.
pub fn clear_market_root_search(
    supply: &IsoElasticCurve,
    demand: &IsoElasticCurve,
    tol: f64,
) -> Result<ClearingPoint> {
    check_pair(supply, demand)?;
    if supply.elasticity + demand.elasticity == 0.0 {
        return clear_inelastic(supply, demand);
    }
    let Root { x, iterations, .. } =
        roots::solve_on_log_price(|p| demand.quantity(p) - supply.quantity(p), tol, MAX_ITER)?;
    Ok(point(supply, demand, x, iterations))
}

fn point(
    supply: &IsoElasticCurve,
    demand: &IsoElasticCurve,
    price: f64,
    iterations: usize,
) -> ClearingPoint {
    let s = supply.quantity(price);
    let d = demand.quantity(price);
    ClearingPoint {
        price,
        // the inelastic side is exact; otherwise take the supplied quantity
        quantity: if demand.elasticity == 0.0 { d } else { s },
        iterations,
        residual: (d - s).abs(),
    }
}

/// Clears `supply` against `demand`.
///
/// The price comes from the closed form; a root search on `ln p` runs as an
/// independent check and its iteration count is reported. Disagreement
/// beyond `tol` is a [`CawError::NoConvergence`].
pub fn clear_market(
    supply: &IsoElasticCurve,
    demand: &IsoElasticCurve,
    tol: f64,
) -> Result<ClearingPoint> {
    let closed = clear_market_closed_form(supply, demand)?;
    let searched = clear_market_root_search(supply, demand, tol)?;
    let gap = ((searched.price - closed.price) / closed.price).abs();
    // one order of slack: the search stops within tol of the root in ln p
    if gap > 10.0 * tol
        || closed.residual > excess_tolerance(supply, demand).max(1e-12 * closed.quantity)
    {
        return Err(CawError::NoConvergence {
            iterations: searched.iterations,
            residual: closed.residual.max(searched.residual),
        });
    }
    Ok(ClearingPoint {
        iterations: searched.iterations,
        ..closed
    })
}

/// Rental rate clearing compute supply against non-agent compute demand.
/// Policy levers act on the ceiling, not here.
pub fn solve_compute_market(s: &Scenario) -> Result<ClearingPoint> {
    ensure_valid(s)?;
    if s.compute_demand_exogenous.scale == 0.0 {
        return Err(CawError::NoEquilibrium(
            "exogenous compute demand is zero; use the coupled solver".into(),
        ));
    }
    clear_market(&s.compute_supply, &s.compute_demand_exogenous, PRICE_RTOL)
}

fn ensure_valid(s: &Scenario) -> Result<()> {
    let v = s.validate();
    if v.is_empty() {
        Ok(())
    } else {
        Err(CawError::Validation(v))
    }
}

/// Labor market on substitutable tasks given a compute rental rate.
///
/// The uncapped clearing wage is compared with the ceiling
/// `λ·k·(1+τ_c)·μ·r_c*`. Below it, humans fill all demand. Above it, the
/// wage sits at the ceiling, human employment is `min(supply, demand)` there
/// and agents fill the remaining effective demand at `λ` agent units per
/// effective unit. Both supply and demand at the wage are reported.
pub fn solve_capped_labor_market(s: &Scenario, r_c_star: f64) -> Result<EquilibriumResult> {
    ensure_valid(s)?;
    if !(r_c_star >= 0.0 && r_c_star.is_finite()) {
        return Err(CawError::invalid(format!(
            "rental rate must be finite and ≥ 0, got {r_c_star}"
        )));
    }
    let tech = &s.technology;
    let demand = &s.labor_demand_ts;
    let supply = &s.labor_supply_ts;
    let ceiling = caw_ceiling(tech, r_c_star, &s.policy)?;

    let clear = clear_market(supply, demand, PRICE_RTOL);
    let (w_clear, q_clear) = match clear {
        Ok(c) => (c.price, c.quantity),
        // fixed supply short of fixed demand: the uncapped wage is unbounded
        Err(CawError::NoEquilibrium(_)) if supply.scale < demand.scale => {
            (f64::INFINITY, supply.scale)
        }
        // fixed supply in excess of fixed demand: the wage is bid down to zero
        Err(CawError::NoEquilibrium(_)) => (0.0, demand.scale),
        Err(e) => return Err(e),
    };

    if ceiling == 0.0 {
        let Some(d0) = demand.quantity_at_zero() else {
            return Err(CawError::DegenerateCeiling);
        };
        let s0 = supply.quantity_at_zero().unwrap_or(0.0);
        return Ok(capped(
            tech.lambda,
            tech.k,
            r_c_star,
            ceiling,
            w_clear,
            s0,
            d0,
        ));
    }

    if w_clear <= ceiling {
        let binds = (w_clear - ceiling).abs() <= PRICE_RTOL * ceiling;
        return Ok(EquilibriumResult {
            regime: Regime::HumanOnly,
            w_h_star: w_clear,
            r_c_star,
            ceiling,
            l_h_star: q_clear,
            l_a_star: 0.0,
            k_c_star: 0.0,
            ceiling_binds: binds,
            w_clear,
            labor_supplied: q_clear,
            labor_demanded: q_clear,
        });
    }

    let supplied = supply.quantity(ceiling);
    let demanded = demand.quantity(ceiling);
    Ok(capped(
        tech.lambda,
        tech.k,
        r_c_star,
        ceiling,
        w_clear,
        supplied,
        demanded,
    ))
}

fn capped(
    lambda: f64,
    k: f64,
    r_c_star: f64,
    ceiling: f64,
    w_clear: f64,
    supplied: f64,
    demanded: f64,
) -> EquilibriumResult {
    let l_h = supplied.min(demanded);
    let l_a = lambda * (demanded - supplied).max(0.0);
    let regime = if l_h == 0.0 && l_a > 0.0 {
        Regime::AgentOnly
    } else if l_a > 0.0 {
        Regime::Mixed
    } else {
        Regime::HumanOnly
    };
    EquilibriumResult {
        regime,
        w_h_star: ceiling,
        r_c_star,
        ceiling,
        l_h_star: l_h,
        l_a_star: l_a,
        k_c_star: k * l_a,
        ceiling_binds: true,
        w_clear,
        labor_supplied: supplied,
        labor_demanded: demanded,
    }
}

/// Compute excess demand at rental rate `r`: agent compute plus non-agent
/// demand, minus supply.
pub fn compute_excess_demand(s: &Scenario, r: f64) -> Result<f64> {
    let labor = solve_capped_labor_market(s, r)?;
    let exo = if s.compute_demand_exogenous.scale == 0.0 {
        0.0
    } else {
        s.compute_demand_exogenous.quantity(r)
    };
    Ok(labor.k_c_star + exo - s.compute_supply.quantity(r))
}

/// Fixed point of the two markets: the rental rate at which compute supply
/// equals agent compute demand (from the capped labor market at that rate)
/// plus exogenous compute demand.
///
/// Excess demand falls monotonically in `r`, so a bracketing search on
/// `ln r` finds the unique root. When agents are idle at the exogenous-only
/// clearing rate that rate is already the fixed point and is returned as is.
pub fn solve_coupled(s: &Scenario, tol: f64, max_iter: usize) -> Result<EquilibriumResult> {
    ensure_valid(s)?;
    if !(tol > 0.0) {
        return Err(CawError::invalid("tolerance must be > 0"));
    }
    if s.compute_supply.elasticity == 0.0 && s.compute_supply.scale == 0.0 {
        return Err(CawError::invalid("compute supply is fixed at zero"));
    }

    if s.compute_demand_exogenous.scale > 0.0 {
        let exo = solve_compute_market(s)?;
        let at = solve_capped_labor_market(s, exo.price)?;
        if at.l_a_star == 0.0 {
            return Ok(at);
        }
    }

    let mut failure = None;
    let mut excess = |r: f64| match compute_excess_demand(s, r) {
        Ok(e) => e,
        Err(CawError::DegenerateCeiling) => f64::INFINITY,
        Err(e) => {
            failure.get_or_insert(e);
            0.0
        }
    };
    let root = roots::solve_on_log_price(&mut excess, tol, max_iter);
    if let Some(e) = failure {
        return Err(e);
    }
    let mut root = root?;
    let atol = EXCESS_ATOL_FACTOR
        * s.compute_supply
            .scale
            .max(s.compute_supply.quantity(root.x))
            .max(1.0);
    if compute_excess_demand(s, root.x)?.abs() > atol {
        // polish at machine precision before giving up
        let mut excess = |r: f64| compute_excess_demand(s, r).unwrap_or(f64::NAN);
        root = roots::solve_on_log_price(&mut excess, 4.0 * f64::EPSILON, max_iter)?;
    }
    let result = solve_capped_labor_market(s, root.x)?;
    let residual = compute_excess_demand(s, root.x)?.abs();
    if residual > atol {
        return Err(CawError::NoConvergence {
            iterations: root.iterations,
            residual,
        });
    }
    Ok(result)
}

/// Compute market first, then the capped labor market at that rental rate.
pub fn solve_capped(s: &Scenario) -> Result<EquilibriumResult> {
    let r = solve_compute_market(s)?;
    solve_capped_labor_market(s, r.price)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{CesParams, PolicyLevers, Technology};

    fn scenario() -> Scenario {
        Scenario {
            technology: Technology::new(1.0, 1.0),
            ces: CesParams::new(1.0, 0.5, 0.5, 2.0),
            compute_supply: IsoElasticCurve::supply(1.0, 1.0),
            compute_demand_exogenous: IsoElasticCurve::demand(4.0, 1.0),
            labor_demand_ts: IsoElasticCurve::demand(10.0, 1.0),
            labor_supply_ts: IsoElasticCurve::supply(1.0, 1.0),
            policy: PolicyLevers::default(),
            output_price: 1.0,
        }
    }

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn clear_market_examples() {
        let p = clear_market(
            &IsoElasticCurve::supply(1.0, 1.0),
            &IsoElasticCurve::demand(4.0, 1.0),
            1e-10,
        )
        .unwrap();
        assert!(rel(p.price, 2.0) < 1e-15 && rel(p.quantity, 2.0) < 1e-15);
        assert!(p.residual <= 1e-9);

        let p = clear_market(
            &IsoElasticCurve::supply(3.0, 0.7),
            &IsoElasticCurve::demand(3.0, 1.4),
            1e-10,
        )
        .unwrap();
        assert_eq!((p.price, p.quantity), (1.0, 3.0));

        let p = clear_market(
            &IsoElasticCurve::supply(2.0, 0.0),
            &IsoElasticCurve::demand(8.0, 1.0),
            1e-10,
        )
        .unwrap();
        assert!(rel(p.price, 4.0) < 1e-15 && p.quantity == 2.0);
    }

    #[test]
    fn clear_market_errors() {
        let err = clear_market(
            &IsoElasticCurve::supply(2.0, 0.0),
            &IsoElasticCurve::demand(3.0, 0.0),
            1e-10,
        )
        .unwrap_err();
        assert!(matches!(err, CawError::NoEquilibrium(_)));
        let err = clear_market(
            &IsoElasticCurve::demand(2.0, 1.0),
            &IsoElasticCurve::demand(3.0, 1.0),
            1e-10,
        )
        .unwrap_err();
        assert!(matches!(err, CawError::InvalidInput(_)));
        let flat = clear_market(
            &IsoElasticCurve::supply(3.0, 0.0),
            &IsoElasticCurve::demand(3.0, 0.0),
            1e-10,
        )
        .unwrap();
        assert_eq!((flat.price, flat.quantity), (1.0, 3.0));
    }

    #[test]
    fn compute_market_examples() {
        let mut s = scenario();
        assert!(rel(solve_compute_market(&s).unwrap().price, 2.0) < 1e-15);
        s.compute_demand_exogenous = IsoElasticCurve::demand(1.0, 1.0);
        assert_eq!(solve_compute_market(&s).unwrap().price, 1.0);
        s.compute_supply = IsoElasticCurve::supply(3.0, 0.0);
        s.compute_demand_exogenous = IsoElasticCurve::demand(3.0, 2.0);
        let p = solve_compute_market(&s).unwrap();
        assert_eq!((p.price, p.quantity), (1.0, 3.0));
    }

    #[test]
    fn capped_market_binding() {
        let r = solve_capped_labor_market(&scenario(), 2.0).unwrap();
        assert_eq!(r.regime, Regime::Mixed);
        assert!(r.ceiling_binds);
        assert_eq!(r.w_h_star, 2.0);
        assert!(rel(r.w_clear, 10f64.sqrt()) < 1e-15);
        assert!(rel(r.labor_demanded, 5.0) < 1e-15);
        assert!(rel(r.l_h_star, 2.0) < 1e-15);
        assert!(rel(r.l_a_star, 3.0) < 1e-15);
        assert!(rel(r.k_c_star, 3.0) < 1e-15);
        assert!(rel(r.labor_gap(), 3.0) < 1e-15);
    }

    #[test]
    fn capped_market_slack() {
        let r = solve_capped_labor_market(&scenario(), 10.0).unwrap();
        assert_eq!(r.regime, Regime::HumanOnly);
        assert!(!r.ceiling_binds);
        assert!(rel(r.w_h_star, 10f64.sqrt()) < 1e-15);
        assert!(rel(r.l_h_star, 10f64.sqrt()) < 1e-12);
        assert_eq!(r.l_a_star, 0.0);
        assert_eq!(r.ceiling, 10.0);
    }

    #[test]
    fn zero_ceiling() {
        let err = solve_capped_labor_market(&scenario(), 0.0).unwrap_err();
        assert_eq!(err, CawError::DegenerateCeiling);
        let mut s = scenario();
        s.labor_demand_ts = IsoElasticCurve::demand(5.0, 0.0);
        let r = solve_capped_labor_market(&s, 0.0).unwrap();
        assert_eq!((r.w_h_star, r.l_h_star, r.l_a_star), (0.0, 0.0, 5.0));
        assert_eq!(r.regime, Regime::AgentOnly);
    }

    #[test]
    fn policy_raises_ceiling() {
        let mut s = scenario();
        s.policy = PolicyLevers {
            tau_c: 0.25,
            mu: 1.2,
        };
        let r = solve_capped_labor_market(&s, 2.0).unwrap();
        assert!(rel(r.ceiling, 3.0) < 1e-15);
        assert!(r.ceiling_binds);
    }

    #[test]
    fn coupled_decouples_when_agents_idle() {
        let mut s = scenario();
        s.technology.lambda = 1e6;
        let r = solve_coupled(&s, 1e-10, 200).unwrap();
        assert_eq!(r.l_a_star, 0.0);
        assert_eq!(r.r_c_star, solve_compute_market(&s).unwrap().price);

        let mut s = scenario();
        s.labor_demand_ts = IsoElasticCurve::demand(1e-6, 1.0);
        let r = solve_coupled(&s, 1e-10, 200).unwrap();
        assert_eq!(r.r_c_star, solve_compute_market(&s).unwrap().price);
    }

    #[test]
    fn coupled_with_unit_elastic_compute_supply() {
        // r = 10/r − r  ⇒  r = √5
        let mut s = scenario();
        s.compute_demand_exogenous = IsoElasticCurve::demand(0.0, 1.0);
        let r = solve_coupled(&s, 1e-12, 200).unwrap();
        assert!(rel(r.r_c_star, 5f64.sqrt()) < 1e-10, "{}", r.r_c_star);
        assert!(rel(r.k_c_star, 5f64.sqrt()) < 1e-9);
        assert!(r.ceiling_binds);
    }

    #[test]
    fn coupled_reports_nonconvergence() {
        let mut s = scenario();
        s.compute_demand_exogenous = IsoElasticCurve::demand(0.0, 1.0);
        let err = solve_coupled(&s, 1e-14, 3).unwrap_err();
        assert!(matches!(err, CawError::NoConvergence { .. }));
    }
}
