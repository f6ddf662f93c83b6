use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fields::ModelParams;

/// Normalizing sequences admissible for the subcritical soft-edge runs.
///
/// Every family in the whitelist satisfies `d_n -> infinity` and `d_n = o(n)`
/// symbolically, which is exactly what the subcritical statement needs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum DnRule {
    /// `n^gamma` with `0 < gamma < 1`.
    Power { gamma: f64 },
    /// `(ln n)^kappa` with `kappa > 0`.
    LogPower { kappa: f64 },
    /// `n^gamma * ln n` with `0 < gamma < 1`.
    PowerLog { gamma: f64 },
}

impl DnRule {
    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            DnRule::Power { gamma } | DnRule::PowerLog { gamma } => {
                gamma.is_finite() && 0.0 < gamma && gamma < 1.0
            }
            DnRule::LogPower { kappa } => kappa.is_finite() && kappa > 0.0,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Config(format!("d_n rule {self:?} violates d_n -> inf, d_n = o(n)")))
        }
    }

    pub fn eval(&self, n: u32) -> f64 {
        let nf = n as f64;
        match *self {
            DnRule::Power { gamma } => nf.powf(gamma),
            DnRule::LogPower { kappa } => nf.ln().powf(kappa),
            DnRule::PowerLog { gamma } => nf.powf(gamma) * nf.ln(),
        }
    }

    /// Parse the compact CLI form: `n^0.25`, `log^2`, or `n^0.25*log`.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let rule = if let Some(rest) = s.strip_prefix("log^") {
            DnRule::LogPower {
                kappa: rest.parse().map_err(|_| Error::Config(format!("bad d_n rule `{s}`")))?,
            }
        } else if let Some(rest) = s.strip_prefix("n^") {
            if let Some(gamma) = rest.strip_suffix("*log") {
                DnRule::PowerLog {
                    gamma: gamma.parse().map_err(|_| Error::Config(format!("bad d_n rule `{s}`")))?,
                }
            } else {
                DnRule::Power {
                    gamma: rest.parse().map_err(|_| Error::Config(format!("bad d_n rule `{s}`")))?,
                }
            }
        } else {
            return Err(Error::Config(format!(
                "bad d_n rule `{s}` (expected n^G, log^K, or n^G*log)"
            )));
        };
        rule.validate()?;
        Ok(rule)
    }
}

impl std::fmt::Display for DnRule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match *self {
            DnRule::Power { gamma } => write!(f, "n^{gamma}"),
            DnRule::LogPower { kappa } => write!(f, "log^{kappa}"),
            DnRule::PowerLog { gamma } => write!(f, "n^{gamma}*log"),
        }
    }
}

/// Description of one Monte Carlo experiment.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub params: ModelParams,
    /// Soft-edge exponent `a` in `(0, 1]`.
    pub exponent_a: f64,
    /// Soft-edge amplitude `x >= 0`.
    pub amplitude_x: f64,
    /// Strictly increasing size ladder.
    pub sizes: Vec<u32>,
    /// Replicas per ladder point, at least 2.
    pub replicas: u32,
    pub dn_rule: DnRule,
    /// Exceedance threshold for in-probability statements.
    pub epsilon: f64,
    /// Strip constant `c` entering the initial thin-strip width.
    pub strip_c: f64,
    pub master_seed: u64,
    /// Hard cap on DP cells per single evaluation; larger requests fail loudly.
    pub cell_budget: u64,
    /// Evaluations at most this many cells use the direct DP; larger ones use
    /// the thin-strip sampler.
    pub direct_dp_cells: u64,
}

impl ExperimentConfig {
    pub fn new(params: ModelParams, master_seed: u64) -> Self {
        ExperimentConfig {
            params,
            exponent_a: 0.75,
            amplitude_x: 1.0,
            sizes: vec![500, 2000, 8000],
            replicas: 200,
            dn_rule: DnRule::Power { gamma: 0.25 },
            epsilon: 1.0,
            strip_c: 1.0,
            master_seed,
            cell_budget: 2_000_000_000,
            direct_dp_cells: 1_000_000,
        }
    }

    pub fn with_sizes(mut self, sizes: &[u32]) -> Self {
        self.sizes = sizes.to_vec();
        self
    }

    pub fn with_replicas(mut self, replicas: u32) -> Self {
        self.replicas = replicas;
        self
    }

    pub fn with_edge(mut self, a: f64, x: f64) -> Self {
        self.exponent_a = a;
        self.amplitude_x = x;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !self.exponent_a.is_finite() || !(0.0..=1.0).contains(&self.exponent_a) || self.exponent_a == 0.0 {
            return Err(Error::Config(format!("exponent a = {} not in (0, 1]", self.exponent_a)));
        }
        if !self.amplitude_x.is_finite() || self.amplitude_x < 0.0 {
            return Err(Error::Config(format!("amplitude x = {} must be >= 0", self.amplitude_x)));
        }
        if self.sizes.is_empty() || !self.sizes.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::Config("size ladder must be non-empty and strictly increasing".into()));
        }
        if self.replicas < 2 {
            return Err(Error::Config(format!("replicas = {} must be >= 2", self.replicas)));
        }
        if !self.epsilon.is_finite() || self.epsilon <= 0.0 {
            return Err(Error::Config(format!("epsilon = {} must be > 0", self.epsilon)));
        }
        if !self.strip_c.is_finite() || self.strip_c <= 0.0 {
            return Err(Error::Config(format!("strip constant c = {} must be > 0", self.strip_c)));
        }
        self.dn_rule.validate()
    }

    pub(crate) fn guard_cells(&self, cells: u64) -> Result<()> {
        if cells > self.cell_budget {
            return Err(Error::BudgetExceeded { requested: cells, budget: self.cell_budget });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dn_rule_whitelist() {
        assert!(DnRule::Power { gamma: 0.25 }.validate().is_ok());
        assert!(DnRule::Power { gamma: 1.0 }.validate().is_err()); // not o(n)
        assert!(DnRule::Power { gamma: 0.0 }.validate().is_err()); // bounded
        assert!(DnRule::LogPower { kappa: 2.0 }.validate().is_ok());
        assert!(DnRule::LogPower { kappa: 0.0 }.validate().is_err());
        assert!(DnRule::PowerLog { gamma: 0.5 }.validate().is_ok());
    }

    #[test]
    fn dn_rule_parsing_and_eval() {
        assert_eq!(DnRule::parse("n^0.25").unwrap(), DnRule::Power { gamma: 0.25 });
        assert_eq!(DnRule::parse("log^2").unwrap(), DnRule::LogPower { kappa: 2.0 });
        assert_eq!(DnRule::parse("n^0.5*log").unwrap(), DnRule::PowerLog { gamma: 0.5 });
        assert!(DnRule::parse("2^n").is_err());
        assert!(DnRule::parse("n^1.5").is_err());
        let d = DnRule::parse("n^0.25").unwrap();
        assert!((d.eval(8000) - 8000f64.powf(0.25)).abs() < 1e-12);
    }

    #[test]
    fn config_validation() {
        let p = ModelParams::new(0.5).unwrap();
        let ok = ExperimentConfig::new(p, 1);
        assert!(ok.validate().is_ok());
        let mut bad = ok.clone();
        bad.sizes = vec![100, 100];
        assert!(bad.validate().is_err());
        let mut bad = ok.clone();
        bad.replicas = 1;
        assert!(bad.validate().is_err());
        let mut bad = ok.clone();
        bad.exponent_a = 1.25;
        assert!(bad.validate().is_err());
        let mut bad = ok;
        bad.epsilon = 0.0;
        assert!(bad.validate().is_err());
    }
}
