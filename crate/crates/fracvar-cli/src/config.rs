//! Scenario configuration: TOML file plus flag overrides.

use std::path::PathBuf;

use serde::Deserialize;

use crate::RunError;

/// The built-in verification scenarios.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scenario {
    Convergence,
    IbpCheck,
    AdjointDuality,
    Noether1d,
    NoetherMd,
    EmGauge,
    EmIdentity,
    ClassicalLimit,
}

impl Scenario {
    pub fn all() -> [Scenario; 8] {
        [
            Scenario::Convergence,
            Scenario::IbpCheck,
            Scenario::AdjointDuality,
            Scenario::Noether1d,
            Scenario::NoetherMd,
            Scenario::EmGauge,
            Scenario::EmIdentity,
            Scenario::ClassicalLimit,
        ]
    }

    pub fn name(self) -> &'static str {
        match self {
            Scenario::Convergence => "convergence",
            Scenario::IbpCheck => "ibp-check",
            Scenario::AdjointDuality => "adjoint-duality",
            Scenario::Noether1d => "noether-1d",
            Scenario::NoetherMd => "noether-md",
            Scenario::EmGauge => "em-gauge",
            Scenario::EmIdentity => "em-identity",
            Scenario::ClassicalLimit => "classical-limit",
        }
    }

    pub fn parse(name: &str) -> Option<Scenario> {
        Scenario::all().into_iter().find(|s| s.name() == name)
    }

    /// One-line statement of the claim the scenario verifies; written as a
    /// comment line into the report.
    pub fn claim(self) -> &'static str {
        match self {
            Scenario::Convergence => {
                "L1-scheme Caputo derivative converges to the closed form on monomials"
            }
            Scenario::IbpCheck => {
                "fractional integration-by-parts identities for the RL integral and the Caputo derivative"
            }
            Scenario::AdjointDuality => {
                "formal-adjoint duality of fractional differential operators of all four kinds"
            }
            Scenario::Noether1d => {
                "second Noether identities for invariant 1D fractional Lagrangians under local shifts"
            }
            Scenario::NoetherMd => {
                "second Noether identities for invariant multi-dimensional fractional densities"
            }
            Scenario::EmGauge => {
                "gauge invariance of the fractional electromagnetic fields and action"
            }
            Scenario::EmIdentity => {
                "gauge-induced Noether identity of the fractional electromagnetic density"
            }
            Scenario::ClassicalLimit => {
                "order-one reduction to classical stencils and the classical Noether identities"
            }
        }
    }

    /// Smallest grid the scenario accepts (per axis).
    fn min_n(self) -> usize {
        match self {
            Scenario::EmGauge | Scenario::EmIdentity => 4,
            _ => 8,
        }
    }

    fn default_n(self) -> usize {
        match self {
            Scenario::NoetherMd => 32,
            Scenario::EmGauge => 8,
            Scenario::EmIdentity => 6,
            Scenario::ClassicalLimit => 128,
            _ => 64,
        }
    }

    fn default_levels(self) -> usize {
        match self {
            Scenario::Convergence | Scenario::AdjointDuality => 3,
            Scenario::IbpCheck => 4,
            Scenario::Noether1d => 2,
            Scenario::NoetherMd => 1,
            Scenario::EmGauge => 1,
            Scenario::EmIdentity => 2,
            Scenario::ClassicalLimit => 2,
        }
    }

    fn default_orders(self) -> Vec<f64> {
        match self {
            Scenario::Convergence => vec![0.5],
            Scenario::IbpCheck => vec![0.25, 0.5, 0.75],
            Scenario::AdjointDuality => vec![0.3],
            Scenario::Noether1d | Scenario::NoetherMd => vec![0.3, 0.5, 0.9],
            Scenario::EmGauge | Scenario::EmIdentity => vec![0.6, 0.45, 0.7, 0.55],
            Scenario::ClassicalLimit => vec![1.0],
        }
    }
}

/// Fully resolved scenario parameters.
#[derive(Debug, Clone)]
pub struct ScenarioConfig {
    pub scenario: Scenario,
    pub a: f64,
    pub b: f64,
    pub n: usize,
    pub orders: Vec<f64>,
    pub levels: usize,
    pub seed: u64,
    pub out: Option<PathBuf>,
}

impl ScenarioConfig {
    pub fn new(scenario: Scenario) -> Self {
        Self {
            scenario,
            a: 0.0,
            b: 1.0,
            n: scenario.default_n(),
            orders: scenario.default_orders(),
            levels: scenario.default_levels(),
            seed: 42,
            out: None,
        }
    }

    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    pub fn validate(&self) -> Result<(), RunError> {
        if !(self.a < self.b) || !self.a.is_finite() || !self.b.is_finite() {
            return Err(RunError::Config(format!(
                "invalid interval [{}, {}]",
                self.a, self.b
            )));
        }
        if self.n < self.scenario.min_n() {
            return Err(RunError::Config(format!(
                "scenario {} needs n >= {}, got {}",
                self.scenario.name(),
                self.scenario.min_n(),
                self.n
            )));
        }
        if self.levels < 1 {
            return Err(RunError::Config("levels must be >= 1".into()));
        }
        if self.levels > 12 {
            return Err(RunError::Config(format!(
                "levels must be <= 12 (grid doubles per level), got {}",
                self.levels
            )));
        }
        if self.orders.is_empty() {
            return Err(RunError::Config("at least one order is required".into()));
        }
        for &o in &self.orders {
            if !(o > 0.0 && o <= 1.0) {
                return Err(RunError::Config(format!(
                    "order {o} outside (0, 1]"
                )));
            }
        }
        if self.scenario == Scenario::ClassicalLimit && self.orders.iter().any(|&o| o != 1.0) {
            return Err(RunError::Config(
                "classical-limit runs with all orders equal to 1".into(),
            ));
        }
        if matches!(self.scenario, Scenario::EmGauge | Scenario::EmIdentity)
            && self.orders.len() != 4
        {
            return Err(RunError::Config(format!(
                "{} needs exactly 4 per-axis orders, got {}",
                self.scenario.name(),
                self.orders.len()
            )));
        }
        Ok(())
    }
}

/// On-disk TOML shape; every field optional so flags can fill the gaps.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub scenario: Option<String>,
    pub a: Option<f64>,
    pub b: Option<f64>,
    pub n: Option<usize>,
    pub orders: Option<Vec<f64>>,
    pub levels: Option<usize>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
}

impl ConfigFile {
    pub fn load(path: &std::path::Path) -> Result<Self, RunError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| RunError::Config(format!("cannot read {}: {e}", path.display())))?;
        toml::from_str(&text)
            .map_err(|e| RunError::Config(format!("invalid config {}: {e}", path.display())))
    }
}

/// Flag-style overrides applied on top of a config file (or of defaults).
#[derive(Debug, Default)]
pub struct Overrides {
    pub scenario: Option<String>,
    pub a: Option<f64>,
    pub b: Option<f64>,
    pub n: Option<usize>,
    pub orders: Vec<f64>,
    pub levels: Option<usize>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
}

/// Resolve file + overrides into a validated configuration.
pub fn resolve(file: ConfigFile, over: Overrides) -> Result<ScenarioConfig, RunError> {
    let name = over
        .scenario
        .or(file.scenario)
        .ok_or_else(|| RunError::Config("no scenario given (use --scenario or a config file)".into()))?;
    let scenario = Scenario::parse(&name)
        .ok_or_else(|| RunError::Config(format!("unknown scenario '{name}'")))?;
    let mut cfg = ScenarioConfig::new(scenario);
    if let Some(a) = file.a {
        cfg.a = a;
    }
    if let Some(b) = file.b {
        cfg.b = b;
    }
    if let Some(n) = file.n {
        cfg.n = n;
    }
    if let Some(orders) = file.orders {
        cfg.orders = orders;
    }
    if let Some(levels) = file.levels {
        cfg.levels = levels;
    }
    if let Some(seed) = file.seed {
        cfg.seed = seed;
    }
    if file.out.is_some() {
        cfg.out = file.out;
    }
    if let Some(a) = over.a {
        cfg.a = a;
    }
    if let Some(b) = over.b {
        cfg.b = b;
    }
    if let Some(n) = over.n {
        cfg.n = n;
    }
    if !over.orders.is_empty() {
        cfg.orders = over.orders;
    }
    if let Some(levels) = over.levels {
        cfg.levels = levels;
    }
    if let Some(seed) = over.seed {
        cfg.seed = seed;
    }
    if over.out.is_some() {
        cfg.out = over.out;
    }
    cfg.validate()?;
    Ok(cfg)
}
