//! CES aggregator of human and agent labor and its cost dual.
//!
//! `L_eff = A[α L_H^ρ + β L_A^ρ]^{1/ρ}` with `σ = 1/(1−ρ)`. The unit cost is
//!
//! ```text
//! c(w_h, w_a) = (1/A)·[α^σ w_h^{1−σ} + β^σ w_a^{1−σ}]^{1/(1−σ)}
//! ```
//!
//! and the conditional demands are `L_H = (1/A)(α/w_h)^σ Λ`,
//! `L_A = (1/A)(β/w_a)^σ Λ` with price index `Λ = (A·c)^σ`.
//!
//! The formula is evaluated through one of four branches:
//!
//! | `σ`                      | branch            | aggregate                 |
//! |--------------------------|-------------------|---------------------------|
//! | `≤ 1e-4`                 | fixed proportions | `A·min(L_H, L_A)`         |
//! | `|σ − 1| < 1e-9`         | Cobb–Douglas      | `A·L_H^a·L_A^b`, `a = α/(α+β)` |
//! | `≥ 1e6`                  | perfect substitutes | `A(α L_H + β L_A)`      |
//! | otherwise                | general           | the formula above         |
//!
//! In the fixed-proportions limit the weights drop out (`α^{1/ρ} → 1`), so
//! one unit of `L_eff` takes `1/A` of each input.

use crate::bound::{corner_allocation, TieBreak};
use crate::error::{CawError, Result};
use crate::model::CesParams;
use crate::tolerances::{
    COBB_DOUGLAS_BAND, LEONTIEF_SIGMA, LINEAR_SIGMA, LOG_SPACE_RATIO, LOG_SPACE_SIGMA,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Leontief,
    CobbDouglas,
    General,
    Linear,
}

pub fn branch(ces: &CesParams) -> Branch {
    let s = ces.sigma;
    if s <= LEONTIEF_SIGMA {
        Branch::Leontief
    } else if s >= LINEAR_SIGMA {
        Branch::Linear
    } else if (s - 1.0).abs() < COBB_DOUGLAS_BAND {
        Branch::CobbDouglas
    } else {
        Branch::General
    }
}

/// Input bundle per unit of effective labor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DemandPair {
    pub l_h: f64,
    pub l_a: f64,
}

/// Value of the aggregator. With `ρ < 0` a zero input drives output to its
/// limit of zero; that case is tagged rather than reported as an error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Aggregate {
    Value(f64),
    ZeroLimit,
}

impl Aggregate {
    pub fn value(self) -> f64 {
        match self {
            Aggregate::Value(v) => v,
            Aggregate::ZeroLimit => 0.0,
        }
    }
}

fn check_params(ces: &CesParams) -> Result<()> {
    if let Some(v) = ces.validate().into_iter().next() {
        return Err(CawError::InvalidInput(v.message));
    }
    Ok(())
}

fn check_nonneg(name: &str, x: f64) -> Result<()> {
    if !(x >= 0.0 && x.is_finite()) {
        return Err(CawError::invalid(format!(
            "{name} must be finite and ≥ 0, got {x}"
        )));
    }
    Ok(())
}

fn check_pos(name: &str, x: f64) -> Result<()> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(CawError::invalid(format!(
            "{name} must be finite and > 0, got {x}"
        )));
    }
    Ok(())
}

fn cd_exponents(ces: &CesParams) -> (f64, f64) {
    let total = ces.alpha + ces.beta;
    (ces.alpha / total, ces.beta / total)
}

fn wants_log_space(sigma: f64, x: f64, y: f64) -> bool {
    let ratio = if x > y { x / y } else { y / x };
    sigma > LOG_SPACE_SIGMA || ratio > LOG_SPACE_RATIO
}

/// `ln(e^a + e^b)` without overflow.
fn log_add_exp(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a > b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// Effective labor produced by `l_h` human hours and `l_a` agent hours.
pub fn ces_output(ces: &CesParams, l_h: f64, l_a: f64) -> Result<Aggregate> {
    check_params(ces)?;
    check_nonneg("l_h", l_h)?;
    check_nonneg("l_a", l_a)?;
    let a = ces.a;
    if ces.sigma < 1.0 && branch(ces) != Branch::CobbDouglas && (l_h == 0.0 || l_a == 0.0) {
        return Ok(Aggregate::ZeroLimit);
    }
    let v = match branch(ces) {
        Branch::Leontief => a * l_h.min(l_a),
        Branch::Linear => a * (ces.alpha * l_h + ces.beta * l_a),
        Branch::CobbDouglas => {
            let (ea, eb) = cd_exponents(ces);
            a * l_h.powf(ea) * l_a.powf(eb)
        }
        Branch::General => general_output(ces, l_h, l_a),
    };
    Ok(Aggregate::Value(v))
}

pub(crate) fn general_output(ces: &CesParams, l_h: f64, l_a: f64) -> f64 {
    let rho = ces.rho();
    if l_h == 0.0 || l_a == 0.0 {
        // only reached with ρ > 0: the zero term drops out
        let (w, x) = if l_h == 0.0 {
            (ces.beta, l_a)
        } else {
            (ces.alpha, l_h)
        };
        return ces.a * w.powf(1.0 / rho) * x;
    }
    if wants_log_space(ces.sigma, l_h, l_a) {
        let zh = ces.alpha.ln() + rho * l_h.ln();
        let za = ces.beta.ln() + rho * l_a.ln();
        ces.a * (log_add_exp(zh, za) / rho).exp()
    } else {
        ces.a * (ces.alpha * l_h.powf(rho) + ces.beta * l_a.powf(rho)).powf(1.0 / rho)
    }
}

/// Unit cost and both cost shares on the general branch. Each share is
/// formed from its own term so a tiny share keeps full relative precision.
fn general_cost_and_shares(ces: &CesParams, w_h: f64, w_a: f64) -> (f64, f64, f64) {
    let s = ces.sigma;
    let one_minus_s = 1.0 - s;
    if wants_log_space(s, w_h, w_a) {
        let zh = s * ces.alpha.ln() + one_minus_s * w_h.ln();
        let za = s * ces.beta.ln() + one_minus_s * w_a.ln();
        let lse = log_add_exp(zh, za);
        let cost = (lse / one_minus_s).exp() / ces.a;
        (cost, (zh - lse).exp(), (za - lse).exp())
    } else {
        let th = ces.alpha.powf(s) * w_h.powf(one_minus_s);
        let ta = ces.beta.powf(s) * w_a.powf(one_minus_s);
        let total = th + ta;
        (
            total.powf(1.0 / one_minus_s) / ces.a,
            th / total,
            ta / total,
        )
    }
}

/// Minimal cost of one unit of effective labor at prices `(w_h, w_a)`.
pub fn unit_cost(ces: &CesParams, w_h: f64, w_a: f64) -> Result<f64> {
    check_params(ces)?;
    check_pos("w_h", w_h)?;
    check_pos("w_a", w_a)?;
    Ok(match branch(ces) {
        Branch::Leontief => (w_h + w_a) / ces.a,
        Branch::Linear => linear_allocation(ces, w_h, w_a).cost,
        Branch::CobbDouglas => {
            let (ea, eb) = cd_exponents(ces);
            (w_h / ea).powf(ea) * (w_a / eb).powf(eb) / ces.a
        }
        Branch::General => general_cost_and_shares(ces, w_h, w_a).0,
    })
}

/// Dual price index `Λ = (A·c)^σ`.
pub fn price_index(ces: &CesParams, w_h: f64, w_a: f64) -> Result<f64> {
    let c = unit_cost(ces, w_h, w_a)?;
    Ok((ces.a * c).powf(ces.sigma))
}

fn linear_allocation(ces: &CesParams, w_h: f64, w_a: f64) -> crate::bound::Allocation {
    // A(α l_h + β l_a) = Aα(l_h + l_a/λ) with λ = α/β
    let lambda = ces.alpha / ces.beta;
    let units = 1.0 / (ces.a * ces.alpha);
    corner_allocation(w_h, w_a, lambda, units, TieBreak::default())
}

/// Cost-minimizing input bundle per unit of effective labor.
///
/// On the general branch this evaluates `(1/A)(α/w_h)^σ Λ` in the
/// equivalent cost-share form `share_h·c/w_h`, which keeps
/// `w_h·l_h + w_a·l_a = c` to rounding.
pub fn conditional_demands(ces: &CesParams, w_h: f64, w_a: f64) -> Result<DemandPair> {
    check_params(ces)?;
    check_pos("w_h", w_h)?;
    check_pos("w_a", w_a)?;
    Ok(match branch(ces) {
        Branch::Leontief => leontief_pair(ces, 1.0),
        Branch::Linear => {
            let alloc = linear_allocation(ces, w_h, w_a);
            DemandPair {
                l_h: alloc.l_h,
                l_a: alloc.l_a,
            }
        }
        Branch::CobbDouglas => {
            let (ea, eb) = cd_exponents(ces);
            let c = unit_cost(ces, w_h, w_a)?;
            DemandPair {
                l_h: ea * c / w_h,
                l_a: eb * c / w_a,
            }
        }
        Branch::General => {
            let (c, share_h, share_a) = general_cost_and_shares(ces, w_h, w_a);
            DemandPair {
                l_h: share_h * c / w_h,
                l_a: share_a * c / w_a,
            }
        }
    })
}

/// `W_H / W_A^eff = (α/β)(l_h/l_a)^{−1/σ}`.
pub fn relative_wage(ces: &CesParams, l_h: f64, l_a: f64) -> Result<f64> {
    check_params(ces)?;
    check_pos("l_h", l_h)?;
    check_pos("l_a", l_a)?;
    Ok(ces.alpha / ces.beta * (-(l_h / l_a).ln() / ces.sigma).exp())
}

/// Fixed-proportions bundle producing `l_eff_target`, independent of prices.
pub fn leontief_requirements(ces: &CesParams, l_eff_target: f64) -> Result<DemandPair> {
    check_params(ces)?;
    check_pos("l_eff_target", l_eff_target)?;
    Ok(leontief_pair(ces, l_eff_target))
}

fn leontief_pair(ces: &CesParams, target: f64) -> DemandPair {
    let each = target / ces.a;
    DemandPair {
        l_h: each,
        l_a: each,
    }
}

/// Agent labor needed, given `l_h` human hours, to reach `target` units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AgentRequirement {
    Interior(f64),
    /// Human labor alone already meets or exceeds the target.
    Saturated,
    /// No amount of agent labor reaches the target.
    Unreachable,
}

pub fn required_agent_labor(ces: &CesParams, l_h: f64, target: f64) -> Result<AgentRequirement> {
    check_params(ces)?;
    check_nonneg("l_h", l_h)?;
    check_pos("target", target)?;
    let t = target / ces.a;
    Ok(match branch(ces) {
        Branch::Leontief => {
            if l_h < t {
                AgentRequirement::Unreachable
            } else {
                AgentRequirement::Interior(t)
            }
        }
        Branch::Linear => {
            let rem = t - ces.alpha * l_h;
            if rem <= 0.0 {
                AgentRequirement::Saturated
            } else {
                AgentRequirement::Interior(rem / ces.beta)
            }
        }
        Branch::CobbDouglas => {
            if l_h == 0.0 {
                AgentRequirement::Unreachable
            } else {
                let (ea, eb) = cd_exponents(ces);
                AgentRequirement::Interior(((t.ln() - ea * l_h.ln()) / eb).exp())
            }
        }
        Branch::General => {
            let rho = ces.rho();
            if rho < 0.0 && l_h == 0.0 {
                return Ok(AgentRequirement::Unreachable);
            }
            let human_term = if l_h == 0.0 {
                0.0
            } else {
                ces.alpha * l_h.powf(rho)
            };
            let rem = t.powf(rho) - human_term;
            match (rho > 0.0, rem > 0.0) {
                (true, true) => AgentRequirement::Interior((rem / ces.beta).powf(1.0 / rho)),
                (true, false) => AgentRequirement::Saturated,
                (false, true) => AgentRequirement::Interior((rem / ces.beta).powf(1.0 / rho)),
                (false, false) => AgentRequirement::Unreachable,
            }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sym(sigma: f64) -> CesParams {
        CesParams::new(1.0, 0.5, 0.5, sigma)
    }

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn output_examples() {
        assert!(rel(ces_output(&sym(2.0), 1.0, 1.0).unwrap().value(), 1.0) < 1e-15);
        assert!(rel(ces_output(&sym(2.0), 4.0, 0.0).unwrap().value(), 1.0) < 1e-15);
        // σ = 0.5 ⇒ ρ = −1: [0.6/2 + 0.4/3]^{-1} = 30/13 exactly
        let v = ces_output(&CesParams::new(1.0, 0.6, 0.4, 0.5), 2.0, 3.0)
            .unwrap()
            .value();
        assert!(rel(v, 30.0 / 13.0) < 1e-15, "{v}");
    }

    #[test]
    fn zero_input_with_negative_rho_is_zero_limit() {
        let c = sym(0.5);
        assert_eq!(ces_output(&c, 0.0, 3.0).unwrap(), Aggregate::ZeroLimit);
        assert_eq!(ces_output(&c, 0.0, 3.0).unwrap().value(), 0.0);
        assert_eq!(
            ces_output(&sym(1e-5), 2.0, 0.0).unwrap(),
            Aggregate::ZeroLimit
        );
        assert!(ces_output(&c, -1.0, 3.0).is_err());
    }

    #[test]
    fn unit_cost_examples() {
        assert!(rel(unit_cost(&sym(2.0), 1.0, 1.0).unwrap(), 2.0) < 1e-15);
        assert!(rel(unit_cost(&sym(2.0), 2.0, 1.0).unwrap(), 8.0 / 3.0) < 1e-15);
        let scaled = CesParams::new(2.0, 0.5, 0.5, 2.0);
        assert!(rel(unit_cost(&scaled, 1.0, 1.0).unwrap(), 1.0) < 1e-15);
        assert!(unit_cost(&sym(2.0), 0.0, 1.0).is_err());
    }

    #[test]
    fn demand_examples() {
        let d = conditional_demands(&sym(2.0), 1.0, 1.0).unwrap();
        assert!(rel(d.l_h, 1.0) < 1e-15 && rel(d.l_a, 1.0) < 1e-15);
        let d = conditional_demands(&sym(2.0), 2.0, 1.0).unwrap();
        assert!(rel(d.l_h, 4.0 / 9.0) < 1e-14, "{d:?}");
        assert!(rel(d.l_a, 16.0 / 9.0) < 1e-14);
    }

    #[test]
    fn demands_match_price_index_form() {
        for sigma in [0.3, 0.8, 1.5, 4.0, 80.0] {
            let c = CesParams::new(1.7, 0.3, 0.9, sigma);
            let (w_h, w_a) = (2.3, 0.6);
            let lam = price_index(&c, w_h, w_a).unwrap();
            let d = conditional_demands(&c, w_h, w_a).unwrap();
            let l_h = (c.alpha / w_h).powf(sigma) * lam / c.a;
            let l_a = (c.beta / w_a).powf(sigma) * lam / c.a;
            assert!(rel(d.l_h, l_h) < 1e-12, "σ={sigma}");
            assert!(rel(d.l_a, l_a) < 1e-12, "σ={sigma}");
        }
    }

    #[test]
    fn linear_branch_matches_corner() {
        let c = sym(1e6);
        assert_eq!(branch(&c), Branch::Linear);
        let d = conditional_demands(&c, 2.0, 1.0).unwrap();
        // λ = 1, units = 1/(Aα) = 2, all-agent corner
        assert_eq!(d.l_h, 0.0);
        assert!(rel(d.l_a, 2.0) < 1e-3);
        let tech = crate::model::Technology::new(1.0, 1.0);
        let corner = crate::bound::linear_costmin(2.0, &tech, 1.0, 2.0).unwrap();
        assert!(rel(d.l_a, corner.l_a) < 1e-3);
    }

    #[test]
    fn general_formula_approaches_linear_branch() {
        // log-space evaluation keeps σ = 1e5 finite and close to the limit
        let c = CesParams::new(1.3, 1.5, 1.0, 1e5);
        let lin = CesParams { sigma: 1e6, ..c };
        for (w_h, w_a) in [(1.0, 1.0), (2.0, 0.3), (0.01, 50.0)] {
            let g = general_cost_and_shares(&c, w_h, w_a).0;
            let l = unit_cost(&lin, w_h, w_a).unwrap();
            assert!(rel(g, l) < 1e-3, "{g} vs {l}");
        }
    }

    #[test]
    fn relative_wage_examples() {
        assert!(rel(relative_wage(&sym(2.0), 1.0, 1.0).unwrap(), 1.0) < 1e-15);
        let w = relative_wage(&sym(2.0), 4.0 / 9.0, 16.0 / 9.0).unwrap();
        assert!(rel(w, 2.0) < 1e-14);
        let c = CesParams::new(1.0, 1.5, 1.0, 1e9);
        for ratio in [0.1, 0.5, 1.0, 3.0, 10.0] {
            let w = relative_wage(&c, ratio, 1.0).unwrap();
            assert!(rel(w, 1.5) < 1e-6);
        }
        assert!(relative_wage(&sym(2.0), 0.0, 1.0).is_err());
    }

    #[test]
    fn leontief_examples() {
        let d = leontief_requirements(&sym(2.0), 1.0).unwrap();
        assert_eq!((d.l_h, d.l_a), (1.0, 1.0));
        let d = leontief_requirements(&CesParams::new(2.0, 0.5, 0.5, 2.0), 1.0).unwrap();
        assert_eq!((d.l_h, d.l_a), (0.5, 0.5));
        assert!(leontief_requirements(&sym(2.0), 0.0).is_err());
    }

    #[test]
    fn leontief_limit_of_general_formula() {
        // frozen from a 50-digit evaluation of the general formula at σ = 1e-4,
        // α = 0.6, β = 0.4, equal prices: (1.0000182321, 0.9999776857)
        let asym = CesParams::new(1.0, 0.6, 0.4, 1e-4);
        let d = leontief_requirements(&asym, 1.0).unwrap();
        assert!(rel(d.l_h, 1.000_018_232_117_772_6) < 1e-3);
        assert!(rel(d.l_a, 0.999_977_685_689_726_7) < 1e-3);
        let d2 = conditional_demands(&asym, 1.0, 1.0).unwrap();
        assert_eq!(d, d2);
        // just above the cutoff the general branch is already there
        let near = CesParams {
            sigma: 2e-4,
            ..asym
        };
        let g = conditional_demands(&near, 1.0, 1.0).unwrap();
        assert!(rel(g.l_h, 1.0) < 1e-3 && rel(g.l_a, 1.0) < 1e-3);
    }

    #[test]
    fn cobb_douglas_branch_is_consistent() {
        let c = CesParams::new(1.4, 0.3, 0.6, 1.0);
        assert_eq!(branch(&c), Branch::CobbDouglas);
        let d = conditional_demands(&c, 1.2, 3.4).unwrap();
        let cost = unit_cost(&c, 1.2, 3.4).unwrap();
        assert!(rel(1.2 * d.l_h + 3.4 * d.l_a, cost) < 1e-14);
        assert!(rel(ces_output(&c, d.l_h, d.l_a).unwrap().value(), 1.0) < 1e-14);
        // normalized weights: the general formula converges to it from both sides
        let norm = CesParams::new(1.4, 1.0 / 3.0, 2.0 / 3.0, 1.0);
        let cd = unit_cost(&norm, 1.2, 3.4).unwrap();
        for s in [1.0 - 1e-6, 1.0 + 1e-6] {
            let g = unit_cost(&CesParams { sigma: s, ..norm }, 1.2, 3.4).unwrap();
            assert!(rel(g, cd) < 1e-5);
        }
    }

    #[test]
    fn required_agent_labor_inverts_output() {
        for sigma in [0.5, 1.0, 2.0, 5.0, 1e6] {
            let c = CesParams::new(1.2, 0.4, 0.7, sigma);
            match required_agent_labor(&c, 0.8, 1.0).unwrap() {
                AgentRequirement::Interior(l_a) => {
                    let out = ces_output(&c, 0.8, l_a).unwrap().value();
                    assert!(rel(out, 1.0) < 1e-12, "σ={sigma}");
                }
                other => panic!("σ={sigma}: {other:?}"),
            }
        }
        let c = CesParams::new(1.0, 0.5, 0.5, 0.5);
        // with ρ = −1 the ceiling on output is A·l_h/α = 2·l_h
        assert_eq!(
            required_agent_labor(&c, 0.4, 1.0).unwrap(),
            AgentRequirement::Unreachable
        );
        let c = CesParams::new(1.0, 0.5, 0.5, 2.0);
        assert_eq!(
            required_agent_labor(&c, 4.0, 1.0).unwrap(),
            AgentRequirement::Saturated
        );
    }

    #[test]
    fn negligible_share_keeps_relative_precision() {
        let c = CesParams::new(0.5, 1.9, 0.05, 27.0);
        let (w_h, w_a) = (0.1, 0.1);
        let d = conditional_demands(&c, w_h, w_a).unwrap();
        let cost = unit_cost(&c, w_h, w_a).unwrap();
        // (1/A)(β/w_a)^σ·(A·c)^σ in logs
        let ln_l_a = -c.a.ln() + c.sigma * (c.beta.ln() - w_a.ln() + (c.a * cost).ln());
        assert!(d.l_a > 0.0 && d.l_a < 1e-30);
        assert!((d.l_a.ln() - ln_l_a).abs() < 1e-12);
    }
}
