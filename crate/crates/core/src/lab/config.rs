//! Experiment configuration, read from JSON.

use crate::error::{Error, Result};
use crate::spectral::LebesgueExponent;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    #[serde(rename = "equiv_2_2")]
    Equiv22,
    #[serde(rename = "equiv_2_3")]
    Equiv23,
    #[serde(rename = "equiv_2_4")]
    Equiv24,
    #[serde(rename = "equiv_3_4")]
    Equiv34,
    #[serde(rename = "equiv_3_5")]
    Equiv35,
    #[serde(rename = "equiv_3_6")]
    Equiv36,
    #[serde(rename = "equiv_3_8")]
    Equiv38,
    #[serde(rename = "equiv_3_9")]
    Equiv39,
    KfuncLemma,
    BanachSuite,
    WienerScan,
}

impl ExperimentKind {
    pub const ALL: [Self; 11] = [
        Self::Equiv22,
        Self::Equiv23,
        Self::Equiv24,
        Self::Equiv34,
        Self::Equiv35,
        Self::Equiv36,
        Self::Equiv38,
        Self::Equiv39,
        Self::KfuncLemma,
        Self::BanachSuite,
        Self::WienerScan,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::Equiv22 => "equiv_2_2",
            Self::Equiv23 => "equiv_2_3",
            Self::Equiv24 => "equiv_2_4",
            Self::Equiv34 => "equiv_3_4",
            Self::Equiv35 => "equiv_3_5",
            Self::Equiv36 => "equiv_3_6",
            Self::Equiv38 => "equiv_3_8",
            Self::Equiv39 => "equiv_3_9",
            Self::KfuncLemma => "kfunc_lemma",
            Self::BanachSuite => "banach_suite",
            Self::WienerScan => "wiener_scan",
        }
    }

    /// Dimension used when the config does not give one.
    pub fn default_dim(self) -> usize {
        match self {
            Self::Equiv34 | Self::Equiv35 | Self::Equiv36 => 2,
            _ => 1,
        }
    }

    pub fn default_corpus(self, dim: usize) -> Vec<String> {
        let names: &[&str] = match (self, dim) {
            (Self::BanachSuite, _) => &["cos", "sin", "exp_i_sin", "affine_r2", "quadratic", "rotation"],
            (Self::WienerScan, _) => &[],
            (_, 1) => &["abs_sin", "weierstrass:0.5", "weierstrass:1.5", "sawtooth", "random_trig:8:1"],
            _ => &["random_trig_2d:6:1", "radial_2d:1.5", "tensor_2d:0.5:1.5"],
        };
        names.iter().map(|s| s.to_string()).collect()
    }

    pub fn default_orders(self) -> Vec<u32> {
        match self {
            Self::Equiv22 | Self::BanachSuite => vec![1, 2, 3, 4],
            Self::Equiv24 | Self::Equiv38 | Self::Equiv39 => vec![2],
            Self::Equiv36 | Self::KfuncLemma => vec![1],
            _ => vec![1, 2, 3],
        }
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExperimentKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown experiment `{s}`")))
    }
}

/// An exponent written as a number or as "inf".
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ExponentValue {
    Number(f64),
    Text(String),
}

impl ExponentValue {
    pub fn exponent(&self) -> Result<LebesgueExponent> {
        let p = match self {
            Self::Number(p) => LebesgueExponent::new(*p),
            Self::Text(s) => s.parse(),
        };
        p.map_err(|e| Error::Config(format!("bad exponent {self:?}: {e}")))
    }
}

/// One experiment sweep. Fields other than `experiment` are optional.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    #[serde(default)]
    pub corpus: Vec<String>,
    pub dim: Option<usize>,
    /// Grid resolution N; 1024 for d = 1 and 256 otherwise.
    pub resolution: Option<usize>,
    #[serde(default)]
    pub p: Vec<ExponentValue>,
    /// Degrees n; ε = h = 1/n.
    #[serde(default)]
    pub grid: Vec<f64>,
    #[serde(default)]
    pub orders: Vec<u32>,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    /// Summation method descriptor for `kfunc_lemma`.
    pub method: Option<String>,
    /// Operator for `kfunc_lemma`: derivative:a, laplacian:r, axis:a, max_degree, radial:a.
    pub operator: Option<String>,
    /// K parameter t = ε^scale_power in `kfunc_lemma`.
    pub scale_power: Option<f64>,
    #[serde(default)]
    pub seed: u64,
    pub output: Option<String>,
}

pub const DEFAULT_GRID: [f64; 6] = [8.0, 16.0, 32.0, 64.0, 128.0, 256.0];

impl ExperimentConfig {
    pub fn new(experiment: ExperimentKind) -> Self {
        Self {
            experiment,
            corpus: Vec::new(),
            dim: None,
            resolution: None,
            p: Vec::new(),
            grid: Vec::new(),
            orders: Vec::new(),
            alpha: None,
            beta: None,
            method: None,
            operator: None,
            scale_power: None,
            seed: 0,
            output: None,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn dim(&self) -> usize {
        self.dim.unwrap_or_else(|| self.experiment.default_dim())
    }

    pub fn resolution(&self) -> usize {
        self.resolution.unwrap_or(if self.dim() == 1 { 1024 } else { 256 })
    }

    pub fn corpus(&self) -> Vec<String> {
        if self.corpus.is_empty() {
            self.experiment.default_corpus(self.dim())
        } else {
            self.corpus.clone()
        }
    }

    pub fn exponents(&self) -> Result<Vec<LebesgueExponent>> {
        if self.p.is_empty() {
            let default = match self.experiment {
                ExperimentKind::Equiv36 => vec![LebesgueExponent::INF],
                ExperimentKind::KfuncLemma => vec![LebesgueExponent::TWO],
                _ => vec![LebesgueExponent::ONE, LebesgueExponent::TWO, LebesgueExponent::INF],
            };
            return Ok(default);
        }
        self.p.iter().map(ExponentValue::exponent).collect()
    }

    pub fn grid(&self) -> Vec<f64> {
        if self.grid.is_empty() {
            DEFAULT_GRID.to_vec()
        } else {
            self.grid.clone()
        }
    }

    pub fn orders(&self) -> Vec<u32> {
        if self.orders.is_empty() {
            self.experiment.default_orders()
        } else {
            self.orders.clone()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        let d = self.dim();
        if !(1..=3).contains(&d) {
            return bad(format!("dim must be 1, 2 or 3 (got {d})"));
        }
        let n = self.resolution();
        if !n.is_power_of_two() || n < 8 {
            return bad(format!("resolution must be a power of two ≥ 8 (got {n})"));
        }
        if !self.grid.is_empty() && self.grid.iter().any(|g| !(*g > 0.0 && g.is_finite())) {
            return bad("grid values must be positive".into());
        }
        if self.orders.contains(&0) {
            return bad("orders must be positive".into());
        }
        self.exponents()?;
        for v in [self.alpha, self.beta, self.scale_power].into_iter().flatten() {
            if !(v > 0.0 && v.is_finite()) {
                return bad(format!("alpha, beta and scale_power must be positive (got {v})"));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_minimal_and_full() {
        let c = ExperimentConfig::from_json(r#"{"experiment": "equiv_2_3"}"#).unwrap();
        assert_eq!(c.resolution(), 1024);
        assert_eq!(c.grid(), DEFAULT_GRID.to_vec());
        assert_eq!(c.exponents().unwrap().len(), 3);
        let c = ExperimentConfig::from_json(
            r#"{"experiment": "equiv_3_4", "p": [2, "inf"], "grid": [4, 8], "orders": [1], "seed": 3, "beta": 1.5}"#,
        )
        .unwrap();
        assert_eq!(c.dim(), 2);
        assert_eq!(c.resolution(), 256);
        assert_eq!(c.exponents().unwrap(), vec![LebesgueExponent::TWO, LebesgueExponent::INF]);
    }

    #[test]
    fn rejects_bad_configs() {
        for text in [
            r#"{"experiment": "equiv_9_9"}"#,
            r#"{"experiment": "equiv_2_3", "resolution": 1000}"#,
            r#"{"experiment": "equiv_2_3", "p": [0.5]}"#,
            r#"{"experiment": "equiv_2_3", "grid": [-1]}"#,
            r#"{"experiment": "equiv_2_3", "typo": 1}"#,
            r#"{"experiment": "equiv_2_3", "orders": [0]}"#,
            "not json",
        ] {
            assert!(matches!(ExperimentConfig::from_json(text), Err(Error::Config(_))), "{text}");
        }
    }

    #[test]
    fn kind_names_round_trip() {
        for k in ExperimentKind::ALL {
            assert_eq!(k.name().parse::<ExperimentKind>().unwrap(), k);
            let json = serde_json::to_string(&k).unwrap();
            assert_eq!(json, format!("\"{}\"", k.name()));
        }
    }
}
