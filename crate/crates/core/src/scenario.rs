//! Scenario documents (JSON, schema version 1).
//!
//! ```json
//! {
//!   "caw_schema": 1,
//!   "technology": { "lambda": 1.0, "k": 1.0, "g": 0.0 },
//!   "ces": { "A": 1.0, "alpha": 0.5, "beta": 0.5, "sigma": 2.0 },
//!   "compute_supply": { "scale": 1.0, "elasticity": 1.0 },
//!   "compute_demand": { "scale": 4.0, "elasticity": 1.0 },
//!   "labor_demand_ts": { "scale": 10.0, "elasticity": 1.0 },
//!   "labor_supply_ts": { "scale": 1.0, "elasticity": 1.0 },
//!   "policy": { "tau_c": 0.0, "mu": 1.0 },
//!   "output_price": 1.0
//! }
//! ```
//!
//! `technology.g`, `policy` (and each of its keys) and `output_price` are
//! optional. Unknown keys are rejected.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{CawError, Result};
use crate::model::{CesParams, IsoElasticCurve, PolicyLevers, Scenario, Technology};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioDoc {
    caw_schema: u32,
    technology: TechnologyDoc,
    ces: CesDoc,
    compute_supply: CurveDoc,
    compute_demand: CurveDoc,
    labor_demand_ts: CurveDoc,
    labor_supply_ts: CurveDoc,
    #[serde(default)]
    policy: PolicyDoc,
    #[serde(default = "one")]
    output_price: f64,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TechnologyDoc {
    lambda: f64,
    k: f64,
    #[serde(default)]
    g: f64,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CesDoc {
    #[serde(rename = "A")]
    a: f64,
    alpha: f64,
    beta: f64,
    sigma: f64,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CurveDoc {
    scale: f64,
    elasticity: f64,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PolicyDoc {
    #[serde(default)]
    tau_c: f64,
    #[serde(default = "one")]
    mu: f64,
}

impl Default for PolicyDoc {
    fn default() -> Self {
        PolicyDoc {
            tau_c: 0.0,
            mu: 1.0,
        }
    }
}

fn one() -> f64 {
    1.0
}

impl From<&Scenario> for ScenarioDoc {
    fn from(s: &Scenario) -> Self {
        let curve = |c: &IsoElasticCurve| CurveDoc {
            scale: c.scale,
            elasticity: c.elasticity,
        };
        ScenarioDoc {
            caw_schema: SCHEMA_VERSION,
            technology: TechnologyDoc {
                lambda: s.technology.lambda,
                k: s.technology.k,
                g: s.technology.g,
            },
            ces: CesDoc {
                a: s.ces.a,
                alpha: s.ces.alpha,
                beta: s.ces.beta,
                sigma: s.ces.sigma,
            },
            compute_supply: curve(&s.compute_supply),
            compute_demand: curve(&s.compute_demand_exogenous),
            labor_demand_ts: curve(&s.labor_demand_ts),
            labor_supply_ts: curve(&s.labor_supply_ts),
            policy: PolicyDoc {
                tau_c: s.policy.tau_c,
                mu: s.policy.mu,
            },
            output_price: s.output_price,
        }
    }
}

impl From<ScenarioDoc> for Scenario {
    fn from(d: ScenarioDoc) -> Self {
        Scenario {
            technology: Technology {
                lambda: d.technology.lambda,
                k: d.technology.k,
                g: d.technology.g,
            },
            ces: CesParams::new(d.ces.a, d.ces.alpha, d.ces.beta, d.ces.sigma),
            compute_supply: IsoElasticCurve::supply(
                d.compute_supply.scale,
                d.compute_supply.elasticity,
            ),
            compute_demand_exogenous: IsoElasticCurve::demand(
                d.compute_demand.scale,
                d.compute_demand.elasticity,
            ),
            labor_demand_ts: IsoElasticCurve::demand(
                d.labor_demand_ts.scale,
                d.labor_demand_ts.elasticity,
            ),
            labor_supply_ts: IsoElasticCurve::supply(
                d.labor_supply_ts.scale,
                d.labor_supply_ts.elasticity,
            ),
            policy: PolicyLevers {
                tau_c: d.policy.tau_c,
                mu: d.policy.mu,
            },
            output_price: d.output_price,
        }
    }
}

/// Parses and validates a scenario document.
pub fn parse_scenario(text: &str) -> Result<Scenario> {
    let doc: ScenarioDoc = serde_json::from_str(text).map_err(|e| {
        let full = e.to_string();
        let suffix = format!(" at line {} column {}", e.line(), e.column());
        CawError::Parse {
            line: e.line(),
            column: e.column(),
            message: full.strip_suffix(&suffix).unwrap_or(&full).to_owned(),
        }
    })?;
    if doc.caw_schema != SCHEMA_VERSION {
        return Err(CawError::Parse {
            line: 0,
            column: 0,
            message: format!(
                "key `caw_schema`: unsupported version {}, expected {SCHEMA_VERSION}",
                doc.caw_schema
            ),
        });
    }
    let s = Scenario::from(doc);
    let violations = s.validate();
    if !violations.is_empty() {
        return Err(CawError::Validation(violations));
    }
    Ok(s)
}

/// Canonical JSON text for `s`, newline-terminated.
pub fn emit_scenario(s: &Scenario) -> String {
    let mut text =
        serde_json::to_string_pretty(&ScenarioDoc::from(s)).expect("scenario serializes");
    text.push('\n');
    text
}

pub fn read_scenario(path: &std::path::Path) -> Result<Scenario> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CawError::Io(format!("{}: {e}", path.display())))?;
    parse_scenario(&text)
}

/// SHA-256 of the canonical document, hex encoded.
pub fn scenario_hash(s: &Scenario) -> String {
    Sha256::digest(emit_scenario(s).as_bytes())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}
