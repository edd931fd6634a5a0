//! The perfect-substitute core.
//!
//! With `L_eff = L_H + L_A/λ`, one effective unit costs `W_H` through human
//! labor and `λ·k·r_c` through agents. Cost minimization is a corner
//! whenever the two differ, so a human wage above `λ·k·r_c` cannot coexist
//! with positive human employment. That is the ceiling computed here.

use crate::error::{CawError, Result};
use crate::model::{PolicyLevers, Regime, Technology};
use crate::tolerances::TIE_RTOL;

/// Which corner to pick when both cost the same.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TieBreak {
    #[default]
    Human,
    Agent,
}

/// Cost-minimizing bundle for a given number of effective units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Allocation {
    pub l_h: f64,
    pub l_a: f64,
    pub cost: f64,
    /// Both corners cost the same (within [`TIE_RTOL`]).
    pub tie: bool,
}

/// Effective agent wage `k·r_c`, currency per agent-labor-hour.
pub fn agent_wage(tech: &Technology, r_c: f64) -> Result<f64> {
    check_rental(r_c)?;
    Ok(tech.k * r_c)
}

/// The compute-anchored ceiling `λ·k·(1+τ_c)·μ·r_c` on the human wage.
pub fn caw_ceiling(tech: &Technology, r_c: f64, policy: &PolicyLevers) -> Result<f64> {
    check_rental(r_c)?;
    Ok(tech.lambda * tech.k * r_c * policy.factor())
}

fn check_rental(r_c: f64) -> Result<()> {
    if !(r_c >= 0.0 && r_c.is_finite()) {
        return Err(CawError::invalid(format!(
            "rental rate must be finite and ≥ 0, got {r_c}"
        )));
    }
    Ok(())
}

/// Minimizes `w_h·l_h + k·r_c·l_a` subject to `l_h + l_a/λ ≥ units`,
/// breaking ties toward the human corner.
pub fn linear_costmin(w_h: f64, tech: &Technology, r_c: f64, units: f64) -> Result<Allocation> {
    linear_costmin_with(w_h, tech, r_c, units, TieBreak::default())
}

pub fn linear_costmin_with(
    w_h: f64,
    tech: &Technology,
    r_c: f64,
    units: f64,
    tie_break: TieBreak,
) -> Result<Allocation> {
    if !(units > 0.0 && units.is_finite()) {
        return Err(CawError::invalid(format!(
            "effective units must be finite and > 0, got {units}"
        )));
    }
    if !(w_h >= 0.0 && w_h.is_finite()) {
        return Err(CawError::invalid(format!(
            "human wage must be finite and ≥ 0, got {w_h}"
        )));
    }
    let w_a = agent_wage(tech, r_c)?;
    Ok(corner_allocation(w_h, w_a, tech.lambda, units, tie_break))
}

/// Corner solution shared with the perfect-substitute branch of the CES
/// kernel. `w_a` is the price of one agent-labor unit; `λ` agent units make
/// one effective unit.
pub(crate) fn corner_allocation(
    w_h: f64,
    w_a: f64,
    lambda: f64,
    units: f64,
    tie_break: TieBreak,
) -> Allocation {
    let agent_unit_cost = lambda * w_a;
    let scale = w_h.max(agent_unit_cost);
    let tie = (w_h - agent_unit_cost).abs() <= TIE_RTOL * scale;
    let human = if tie {
        tie_break == TieBreak::Human
    } else {
        w_h < agent_unit_cost
    };
    if human {
        Allocation {
            l_h: units,
            l_a: 0.0,
            cost: w_h * units,
            tie,
        }
    } else {
        let l_a = lambda * units;
        Allocation {
            l_h: 0.0,
            l_a,
            cost: w_a * l_a,
            tie,
        }
    }
}

/// Regime implied by a candidate wage against the ceiling, with an explicit
/// equality band `tolerance`.
pub fn classify_regime(w_h_candidate: f64, ceiling: f64, tolerance: f64) -> Regime {
    if w_h_candidate < ceiling - tolerance {
        Regime::HumanOnly
    } else if w_h_candidate > ceiling + tolerance {
        Regime::AgentOnly
    } else {
        Regime::Mixed
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn agent_wage_examples() {
        assert_eq!(agent_wage(&Technology::new(1.0, 1.0), 2.0).unwrap(), 2.0);
        assert_eq!(agent_wage(&Technology::new(1.0, 0.05), 2.0).unwrap(), 0.10);
        assert_eq!(agent_wage(&Technology::new(1.0, 1.0), 0.0).unwrap(), 0.0);
        assert!(agent_wage(&Technology::new(1.0, 1.0), -1.0).is_err());
    }

    #[test]
    fn ceiling_examples() {
        let none = PolicyLevers::default();
        assert_eq!(
            caw_ceiling(&Technology::new(2.0, 1.0), 5.0, &none).unwrap(),
            10.0
        );
        assert_eq!(
            caw_ceiling(&Technology::new(0.5, 0.05), 2.0, &none).unwrap(),
            0.05
        );
        let taxed = PolicyLevers {
            tau_c: 0.5,
            mu: 1.0,
        };
        assert_eq!(
            caw_ceiling(&Technology::new(1.0, 1.0), 2.0, &taxed).unwrap(),
            3.0
        );
        assert!(caw_ceiling(&Technology::new(1.0, 1.0), f64::NAN, &none).is_err());
    }

    #[test]
    fn policy_levers_commute() {
        let t = Technology::new(1.3, 0.7);
        let p = PolicyLevers {
            tau_c: 0.2,
            mu: 1.5,
        };
        let c = caw_ceiling(&t, 2.0, &p).unwrap();
        let manual = 1.3 * 0.7 * 2.0 * 1.5 * 1.2;
        assert!((c - manual).abs() < 1e-14);
    }

    #[test]
    fn costmin_corners() {
        let t = Technology::new(1.0, 1.0);
        let a = linear_costmin(1.0, &t, 2.0, 1.0).unwrap();
        assert_eq!(
            a,
            Allocation {
                l_h: 1.0,
                l_a: 0.0,
                cost: 1.0,
                tie: false
            }
        );
        let a = linear_costmin(3.0, &t, 2.0, 1.0).unwrap();
        assert_eq!(
            a,
            Allocation {
                l_h: 0.0,
                l_a: 1.0,
                cost: 2.0,
                tie: false
            }
        );
    }

    #[test]
    fn costmin_tie_defaults_to_human_and_flag_flips_it() {
        let t = Technology::new(1.0, 1.0);
        let a = linear_costmin(2.0, &t, 2.0, 1.0).unwrap();
        assert_eq!(
            a,
            Allocation {
                l_h: 1.0,
                l_a: 0.0,
                cost: 2.0,
                tie: true
            }
        );
        let b = linear_costmin_with(2.0, &t, 2.0, 1.0, TieBreak::Agent).unwrap();
        assert!(b.tie);
        assert_eq!((b.l_h, b.l_a, b.cost), (0.0, 1.0, 2.0));
    }

    #[test]
    fn costmin_meets_effective_units() {
        let t = Technology::new(0.37, 2.1);
        for (w_h, units) in [(0.1, 3.3), (5.0, 0.7), (100.0, 1e-3)] {
            let a = linear_costmin(w_h, &t, 1.7, units).unwrap();
            let delivered = a.l_h + a.l_a / t.lambda;
            assert!(((delivered - units) / units).abs() <= 1e-12);
        }
    }

    #[test]
    fn costmin_rejects_bad_units() {
        let t = Technology::new(1.0, 1.0);
        assert!(linear_costmin(1.0, &t, 1.0, 0.0).is_err());
        assert!(linear_costmin(1.0, &t, 1.0, -2.0).is_err());
    }

    #[test]
    fn regime_classification() {
        assert_eq!(classify_regime(1.0, 2.0, 1e-9), Regime::HumanOnly);
        assert_eq!(classify_regime(3.0, 2.0, 1e-9), Regime::AgentOnly);
        assert_eq!(classify_regime(2.0, 2.0, 1e-9), Regime::Mixed);
        assert_eq!(classify_regime(2.0 + 1e-10, 2.0, 1e-9), Regime::Mixed);
    }
}
