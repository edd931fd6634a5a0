#![allow(dead_code)]

use caw_core::{CesParams, IsoElasticCurve, PolicyLevers, Scenario, Technology};
use rand::Rng;

pub fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
    }
}

pub fn log_uniform<R: Rng>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    rng.gen_range(lo.ln()..hi.ln()).exp()
}

/// Compute clears at `r = 2`; ceiling `2λ`. Labor clears at `√(demand)`.
pub fn scenario(lambda: f64, labor_demand_scale: f64) -> Scenario {
    Scenario {
        technology: Technology::new(lambda, 1.0),
        ces: CesParams::new(1.0, 0.5, 0.5, 2.0),
        compute_supply: IsoElasticCurve::supply(1.0, 1.0),
        compute_demand_exogenous: IsoElasticCurve::demand(4.0, 1.0),
        labor_demand_ts: IsoElasticCurve::demand(labor_demand_scale, 1.0),
        labor_supply_ts: IsoElasticCurve::supply(1.0, 1.0),
        policy: PolicyLevers::default(),
        output_price: 1.0,
    }
}

pub fn random_scenario<R: Rng>(rng: &mut R) -> Scenario {
    let mut curve = |supply: bool, zero_ok: bool| {
        let scale = if zero_ok && rng.gen_bool(0.1) {
            0.0
        } else {
            log_uniform(rng, 1e-3, 1e3)
        };
        let elasticity = if rng.gen_bool(0.1) {
            0.0
        } else {
            rng.gen_range(0.0..4.0)
        };
        if supply {
            IsoElasticCurve::supply(scale, elasticity)
        } else {
            IsoElasticCurve::demand(scale, elasticity)
        }
    };
    let compute_supply = curve(true, false);
    let compute_demand_exogenous = curve(false, true);
    let labor_demand_ts = curve(false, false);
    let labor_supply_ts = curve(true, false);
    Scenario {
        technology: Technology::new(log_uniform(rng, 1e-2, 1e2), log_uniform(rng, 1e-3, 1e2))
            .with_improvement_rate(rng.gen_range(0.0..1.0)),
        ces: CesParams::new(
            log_uniform(rng, 0.1, 10.0),
            rng.gen_range(0.01..2.0),
            rng.gen_range(0.01..2.0),
            log_uniform(rng, 1e-3, 1e3),
        ),
        compute_supply,
        compute_demand_exogenous,
        labor_demand_ts,
        labor_supply_ts,
        policy: PolicyLevers {
            tau_c: rng.gen_range(0.0..1.0),
            mu: rng.gen_range(1.0..3.0),
        },
        output_price: log_uniform(rng, 0.1, 10.0),
    }
}
