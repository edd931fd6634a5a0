//! Illustrative ceiling grid, occupational wage blends and factor shares.

use crate::bound::caw_ceiling;
use crate::error::{CawError, Result};
use crate::model::{FactorShares, PolicyLevers, TaskProfile, Technology};

/// Productivity ratios spanning agent-favored, parity and human-favored.
pub const TABLE_LAMBDAS: [f64; 3] = [0.5, 1.0, 2.0];
/// `(k, r_c)`: distilled small model at $2, frontier model at $2 and $5 per
/// GPU-hour.
pub const TABLE_COLUMNS: [(f64, f64); 3] = [(0.05, 2.0), (1.0, 2.0), (1.0, 5.0)];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CalibrationCell {
    pub lambda: f64,
    pub k: f64,
    pub r_c: f64,
    /// `λ·k·r_c`, currency per hour.
    pub ceiling: f64,
}

/// The 3×3 ceiling grid, rows by `λ`, columns by `(k, r_c)`.
pub fn table1() -> [[CalibrationCell; 3]; 3] {
    TABLE_LAMBDAS.map(|lambda| {
        TABLE_COLUMNS.map(|(k, r_c)| CalibrationCell {
            lambda,
            k,
            r_c,
            ceiling: caw_ceiling(&Technology::new(lambda, k), r_c, &PolicyLevers::default())
                .expect("table inputs are valid"),
        })
    })
}

/// Hour-weighted wage: substitutable hours earn `min(w_counterfactual,
/// ceiling)`, complementary hours earn `w_comp`.
pub fn occupation_wage(profile: &TaskProfile, ceiling: f64) -> Result<f64> {
    if let Some(v) = profile.validate().into_iter().next() {
        return Err(CawError::InvalidInput(v.message));
    }
    if !(ceiling >= 0.0) {
        return Err(CawError::invalid(format!(
            "ceiling must be ≥ 0, got {ceiling}"
        )));
    }
    Ok(profile.s_sub * profile.w_counterfactual.min(ceiling) + profile.s_comp() * profile.w_comp)
}

/// Labor and compute shares of output value `y`.
pub fn factor_shares(w_h: f64, l_h: f64, r_c: f64, k_c: f64, y: f64) -> Result<FactorShares> {
    if !(y > 0.0 && y.is_finite()) {
        return Err(CawError::invalid(format!(
            "output value must be > 0, got {y}"
        )));
    }
    for (name, x) in [("w_h", w_h), ("l_h", l_h), ("r_c", r_c), ("k_c", k_c)] {
        if !(x >= 0.0 && x.is_finite()) {
            return Err(CawError::invalid(format!("{name} must be ≥ 0, got {x}")));
        }
    }
    Ok(FactorShares {
        s_labor: w_h * l_h / y,
        s_compute: r_c * k_c / y,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_cells() {
        let t = table1();
        assert_eq!(t[0][0].ceiling, 0.05);
        assert_eq!(t[1][2].ceiling, 5.00);
        assert_eq!(t[2][1].ceiling, 4.00);
        for row in &t {
            for c in row {
                assert_eq!(c.ceiling, c.lambda * c.k * c.r_c);
            }
        }
    }

    #[test]
    fn occupational_blends() {
        let paralegal = TaskProfile::new(0.8, 25.0);
        let associate = TaskProfile::new(0.3, 25.0);
        assert!((occupation_wage(&paralegal, 2.0).unwrap() - 6.6).abs() < 1e-12);
        assert!((occupation_wage(&associate, 2.0).unwrap() - 18.1).abs() < 1e-12);
        assert!((occupation_wage(&paralegal, 30.0).unwrap() - 25.0).abs() < 1e-12);
        assert!(occupation_wage(&TaskProfile::new(-0.1, 1.0), 1.0).is_err());
    }

    #[test]
    fn divergence_widens_as_ceiling_falls() {
        let hi = TaskProfile::new(0.8, 25.0);
        let lo = TaskProfile::new(0.3, 25.0);
        let gap = |c| occupation_wage(&lo, c).unwrap() - occupation_wage(&hi, c).unwrap();
        let mut prev = gap(25.0);
        for c in [20.0, 10.0, 5.0, 2.0, 0.5, 0.0] {
            let g = gap(c);
            assert!(g > prev, "ceiling {c}");
            prev = g;
        }
    }

    #[test]
    fn shares() {
        let s = factor_shares(10.0, 5.0, 2.0, 10.0, 100.0).unwrap();
        assert_eq!((s.s_labor, s.s_compute), (0.5, 0.2));
        assert_eq!(
            factor_shares(0.0, 5.0, 2.0, 10.0, 100.0).unwrap().s_labor,
            0.0
        );
        assert!(factor_shares(1.0, 1.0, 1.0, 1.0, 0.0).is_err());
    }
}
