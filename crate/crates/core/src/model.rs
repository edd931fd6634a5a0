//! Domain types shared by every other module.
//!
//! Units: wages are currency per labor-hour, `r_c` is currency per
//! compute-unit-hour, `k` is compute-units per agent-labor-hour and `λ` is
//! agent-labor units per human-labor unit of equal effective output. The
//! output price is normalized to 1; all results are homogeneous in it.

/// Production technology linking compute to agent labor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Technology {
    /// Agent-labor units that match one human-labor unit of effective output.
    pub lambda: f64,
    /// Compute-units per agent-labor-hour.
    pub k: f64,
    /// Algorithmic improvement rate per unit time (`k` decays as `e^{-g t}`).
    pub g: f64,
}

impl Technology {
    pub fn new(lambda: f64, k: f64) -> Self {
        Technology { lambda, k, g: 0.0 }
    }

    pub fn with_improvement_rate(mut self, g: f64) -> Self {
        self.g = g;
        self
    }

    pub fn validate(&self) -> Vec<Violation> {
        let mut v = Vec::new();
        check(&mut v, "technology.lambda", self.lambda, Rule::Positive);
        check(&mut v, "technology.k", self.k, Rule::Positive);
        check(&mut v, "technology.g", self.g, Rule::NonNegative);
        v
    }
}

/// Parameters of the aggregator `L_eff = A[α L_H^ρ + β L_A^ρ]^{1/ρ}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CesParams {
    /// Total-factor scale on effective labor.
    pub a: f64,
    /// Weight on human labor.
    pub alpha: f64,
    /// Weight on agent labor.
    pub beta: f64,
    /// Elasticity of substitution.
    pub sigma: f64,
}

impl CesParams {
    pub fn new(a: f64, alpha: f64, beta: f64, sigma: f64) -> Self {
        CesParams {
            a,
            alpha,
            beta,
            sigma,
        }
    }

    /// `ρ = 1 − 1/σ`.
    pub fn rho(&self) -> f64 {
        1.0 - 1.0 / self.sigma
    }

    /// `1 − ρ`, computed without cancellation.
    pub fn one_minus_rho(&self) -> f64 {
        1.0 / self.sigma
    }

    pub fn validate(&self) -> Vec<Violation> {
        let mut v = Vec::new();
        check(&mut v, "ces.A", self.a, Rule::Positive);
        check(&mut v, "ces.alpha", self.alpha, Rule::Positive);
        check(&mut v, "ces.beta", self.beta, Rule::Positive);
        check(&mut v, "ces.sigma", self.sigma, Rule::Positive);
        v
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveKind {
    Supply,
    Demand,
}

/// Constant-elasticity schedule `q = scale · p^{±elasticity}`.
///
/// `elasticity` is a nonnegative magnitude; the sign comes from `kind`.
/// An elasticity of 0 is a perfectly inelastic curve fixed at `scale`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IsoElasticCurve {
    pub kind: CurveKind,
    /// Quantity at unit price.
    pub scale: f64,
    pub elasticity: f64,
}

impl IsoElasticCurve {
    pub fn supply(scale: f64, elasticity: f64) -> Self {
        IsoElasticCurve {
            kind: CurveKind::Supply,
            scale,
            elasticity,
        }
    }

    pub fn demand(scale: f64, elasticity: f64) -> Self {
        IsoElasticCurve {
            kind: CurveKind::Demand,
            scale,
            elasticity,
        }
    }

    /// Signed price exponent.
    pub fn exponent(&self) -> f64 {
        match self.kind {
            CurveKind::Supply => self.elasticity,
            CurveKind::Demand => -self.elasticity,
        }
    }

    /// Quantity at price `p > 0`.
    pub fn quantity(&self, p: f64) -> f64 {
        if self.elasticity == 0.0 {
            return self.scale;
        }
        self.scale * p.powf(self.exponent())
    }

    /// Quantity at a zero price, `None` when the curve diverges there.
    pub fn quantity_at_zero(&self) -> Option<f64> {
        match (self.kind, self.elasticity == 0.0) {
            (_, true) => Some(self.scale),
            (CurveKind::Supply, false) => Some(0.0),
            (CurveKind::Demand, false) => None,
        }
    }

    /// `ln q(p)` taking `ln p` directly.
    pub fn ln_quantity(&self, ln_p: f64) -> f64 {
        self.scale.ln() + self.exponent() * ln_p
    }

    fn validate_as(&self, role: &str, kind: CurveKind, allow_zero_scale: bool) -> Vec<Violation> {
        let mut v = Vec::new();
        if self.kind != kind {
            v.push(Violation::new(
                format!("{role}.kind"),
                format!("{role} must be a {kind:?} curve"),
            ));
        }
        let scale_rule = if allow_zero_scale {
            Rule::NonNegative
        } else {
            Rule::Positive
        };
        check(&mut v, &format!("{role}.scale"), self.scale, scale_rule);
        check(
            &mut v,
            &format!("{role}.elasticity"),
            self.elasticity,
            Rule::NonNegative,
        );
        v
    }
}

/// Factor prices from one technology; `w_a_eff = k·r_c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FactorPrices {
    pub w_h: f64,
    pub w_a_eff: f64,
    pub r_c: f64,
}

impl FactorPrices {
    pub fn new(tech: &Technology, w_h: f64, r_c: f64) -> Self {
        FactorPrices {
            w_h,
            w_a_eff: tech.k * r_c,
            r_c,
        }
    }
}

/// Compute-market policy levers, applied multiplicatively to `r_c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolicyLevers {
    /// Ad-valorem tax on the compute rental rate.
    pub tau_c: f64,
    /// Markup over competitive `r_c`.
    pub mu: f64,
}

impl Default for PolicyLevers {
    fn default() -> Self {
        PolicyLevers {
            tau_c: 0.0,
            mu: 1.0,
        }
    }
}

impl PolicyLevers {
    /// `(1 + τ_c)·μ`.
    pub fn factor(&self) -> f64 {
        (1.0 + self.tau_c) * self.mu
    }

    pub fn validate(&self) -> Vec<Violation> {
        let mut v = Vec::new();
        check(&mut v, "policy.tau_c", self.tau_c, Rule::NonNegative);
        check(&mut v, "policy.mu", self.mu, Rule::AtLeastOne);
        v
    }
}

/// Hour shares of an occupation across substitutable and complementary tasks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TaskProfile {
    /// Share of hours on substitutable tasks, in `[0, 1]`.
    pub s_sub: f64,
    /// Wage on complementary-task hours.
    pub w_comp: f64,
    /// Wage substitutable-task hours would command without agents.
    pub w_counterfactual: f64,
}

impl TaskProfile {
    /// Profile whose counterfactual wage equals `w_comp`.
    pub fn new(s_sub: f64, w_comp: f64) -> Self {
        TaskProfile {
            s_sub,
            w_comp,
            w_counterfactual: w_comp,
        }
    }

    pub fn with_counterfactual(mut self, w: f64) -> Self {
        self.w_counterfactual = w;
        self
    }

    pub fn s_comp(&self) -> f64 {
        1.0 - self.s_sub
    }

    pub fn validate(&self) -> Vec<Violation> {
        let mut v = Vec::new();
        check(&mut v, "profile.s_sub", self.s_sub, Rule::UnitInterval);
        check(&mut v, "profile.w_comp", self.w_comp, Rule::NonNegative);
        check(
            &mut v,
            "profile.w_counterfactual",
            self.w_counterfactual,
            Rule::NonNegative,
        );
        v
    }
}

/// A complete model instance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scenario {
    pub technology: Technology,
    pub ces: CesParams,
    pub compute_supply: IsoElasticCurve,
    /// Non-agent compute demand. A zero scale means there is none.
    pub compute_demand_exogenous: IsoElasticCurve,
    /// Effective-labor demand on substitutable tasks, as a function of the wage.
    pub labor_demand_ts: IsoElasticCurve,
    pub labor_supply_ts: IsoElasticCurve,
    pub policy: PolicyLevers,
    pub output_price: f64,
}

impl Scenario {
    pub fn validate(&self) -> Vec<Violation> {
        validate_scenario(self)
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }
}

/// Every invariant violation in `s`; empty when the scenario is valid.
pub fn validate_scenario(s: &Scenario) -> Vec<Violation> {
    let mut v = s.technology.validate();
    v.extend(s.ces.validate());
    v.extend(
        s.compute_supply
            .validate_as("compute_supply", CurveKind::Supply, false),
    );
    v.extend(
        s.compute_demand_exogenous
            .validate_as("compute_demand", CurveKind::Demand, true),
    );
    v.extend(
        s.labor_demand_ts
            .validate_as("labor_demand_ts", CurveKind::Demand, false),
    );
    v.extend(
        s.labor_supply_ts
            .validate_as("labor_supply_ts", CurveKind::Supply, false),
    );
    v.extend(s.policy.validate());
    check(&mut v, "output_price", s.output_price, Rule::Positive);
    v
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    HumanOnly,
    AgentOnly,
    Mixed,
}

impl Regime {
    pub fn as_str(&self) -> &'static str {
        match self {
            Regime::HumanOnly => "HumanOnly",
            Regime::AgentOnly => "AgentOnly",
            Regime::Mixed => "Mixed",
        }
    }
}

/// One solved scenario on the substitutable task set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquilibriumResult {
    pub regime: Regime,
    pub w_h_star: f64,
    pub r_c_star: f64,
    /// `λ·k·(1+τ_c)·μ·r_c*`.
    pub ceiling: f64,
    /// Human employment.
    pub l_h_star: f64,
    /// Agent-labor units.
    pub l_a_star: f64,
    /// Compute used by agents, `k·l_a*`.
    pub k_c_star: f64,
    pub ceiling_binds: bool,
    /// Uncapped clearing wage of the labor market.
    pub w_clear: f64,
    /// Human labor supplied at `w_h_star`.
    pub labor_supplied: f64,
    /// Effective labor demanded at `w_h_star`.
    pub labor_demanded: f64,
}

impl EquilibriumResult {
    /// Effective labor delivered, `l_h + l_a/λ`.
    pub fn effective_labor(&self, tech: &Technology) -> f64 {
        self.l_h_star + self.l_a_star / tech.lambda
    }

    /// Excess of demand over supply at the prevailing wage (zero unless the
    /// ceiling binds).
    pub fn labor_gap(&self) -> f64 {
        self.labor_demanded - self.labor_supplied
    }
}

/// Payments to each factor as a fraction of output value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FactorShares {
    pub s_labor: f64,
    pub s_compute: f64,
}

/// A single invariant violation with a stable machine-readable code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub code: String,
    pub message: String,
}

impl Violation {
    pub fn new(code: impl Into<String>, message: impl Into<String>) -> Self {
        Violation {
            code: code.into(),
            message: message.into(),
        }
    }
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{}] {}", self.code, self.message)
    }
}

#[derive(Clone, Copy)]
enum Rule {
    Positive,
    NonNegative,
    AtLeastOne,
    UnitInterval,
}

fn check(out: &mut Vec<Violation>, path: &str, value: f64, rule: Rule) {
    let name = path.rsplit('.').next().unwrap_or(path);
    if !value.is_finite() {
        out.push(Violation::new(
            format!("{path}.non_finite"),
            format!("{name} must be finite"),
        ));
        return;
    }
    let (ok, code, msg) = match rule {
        Rule::Positive => (value > 0.0, "nonpositive", "must be > 0"),
        Rule::NonNegative => (value >= 0.0, "negative", "must be ≥ 0"),
        Rule::AtLeastOne => (value >= 1.0, "below_one", "must be ≥ 1"),
        Rule::UnitInterval => (
            (0.0..=1.0).contains(&value),
            "out_of_range",
            "must be in [0, 1]",
        ),
    };
    if !ok {
        out.push(Violation::new(
            format!("{path}.{code}"),
            format!("{name} {msg}"),
        ));
    }
}
