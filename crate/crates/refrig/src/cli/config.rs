//! JSON run configuration.
//!
//! Schema (all numerics are f64; keys absent where not applicable):
//!
//! ```json
//! {
//!   "model": "qri" | "qrc" | "qrcn",
//!   "beta_h": 1.0, "beta_c": 2.0, "gamma0": 0.01,
//!   "omega_h": 10.0, "omega_c": 0.9,
//!   "beta_w": 0.09,                       // qri, qrc
//!   "beta_w1": 0.09, "beta_w2": 1.0,      // qrcn
//!   "omega_prime": 2.0,                   // qrcn
//!   "sweep": [ {"param": "beta_c", "from": 1.05, "to": 10.15, "points": 100} ],
//!   "outputs": { "csv_path": "...", "json_path": "...", "svg_path": "..." },
//!   "tolerances": { "fcs_rel": 1e-8, "oracle_rel": 1e-4 }
//! }
//! ```

use serde::{Deserialize, Serialize};

use crate::metrics::{MetricsError, ParamSet, SweepAxis, SweepParam};
use crate::model::{RefrigeratorSpec, Variant};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AxisConfig {
    pub param: String,
    pub from: f64,
    pub to: f64,
    pub points: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Outputs {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub csv_path: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub json_path: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub svg_path: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    /// Relative tolerance for closed-form vs characteristic-polynomial means;
    /// variances are held to 100x this.
    #[serde(default = "default_fcs_rel")]
    pub fcs_rel: f64,
    /// Relative tolerance for char-poly vs time-propagation means; variances
    /// are held to 10x this.
    #[serde(default = "default_oracle_rel")]
    pub oracle_rel: f64,
}

fn default_fcs_rel() -> f64 {
    1e-8
}

fn default_oracle_rel() -> f64 {
    1e-4
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { fcs_rel: default_fcs_rel(), oracle_rel: default_oracle_rel() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub model: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta_h: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta_c: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta_w: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta_w1: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta_w2: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega_prime: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega_h: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega_c: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma0: Option<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub sweep: Vec<AxisConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outputs: Option<Outputs>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerances: Option<Tolerances>,
}

#[derive(Debug)]
pub enum ConfigError {
    /// JSON syntax or type error; serde_json messages carry line/column.
    Parse(serde_json::Error),
    Invalid(String),
    Metrics(MetricsError),
}

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ConfigError::Parse(e) => write!(f, "config parse error: {e}"),
            ConfigError::Invalid(msg) => write!(f, "invalid config: {msg}"),
            ConfigError::Metrics(e) => write!(f, "invalid config: {e}"),
        }
    }
}

impl std::error::Error for ConfigError {}

impl From<MetricsError> for ConfigError {
    fn from(e: MetricsError) -> Self {
        ConfigError::Metrics(e)
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<RunConfig, ConfigError> {
        let cfg: RunConfig = serde_json::from_str(text).map_err(ConfigError::Parse)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn variant(&self) -> Result<Variant, ConfigError> {
        self.model
            .parse::<Variant>()
            .map_err(|_| ConfigError::Invalid(format!("unknown model '{}'", self.model)))
    }

    pub fn params(&self) -> ParamSet {
        ParamSet {
            beta_h: self.beta_h,
            beta_c: self.beta_c,
            beta_w: self.beta_w,
            beta_w1: self.beta_w1,
            beta_w2: self.beta_w2,
            omega_prime: self.omega_prime,
            omega_h: self.omega_h,
            omega_c: self.omega_c,
            gamma0: self.gamma0,
        }
    }

    pub fn axes(&self) -> Result<Vec<SweepAxis>, ConfigError> {
        self.sweep
            .iter()
            .map(|a| {
                let param = a.param.parse::<SweepParam>()?;
                Ok(SweepAxis::new(param, a.from, a.to, a.points)?)
            })
            .collect()
    }

    pub fn tolerances(&self) -> Tolerances {
        self.tolerances.unwrap_or_default()
    }

    /// Build the spec at the base point (sweep axes must carry values in the
    /// base params too, or be listed as axes).
    pub fn build_spec(&self) -> Result<RefrigeratorSpec, ConfigError> {
        Ok(self.params().build(self.variant()?)?)
    }

    fn validate(&self) -> Result<(), ConfigError> {
        self.variant()?;
        for v in [
            self.beta_h,
            self.beta_c,
            self.beta_w,
            self.beta_w1,
            self.beta_w2,
            self.omega_prime,
            self.omega_h,
            self.omega_c,
            self.gamma0,
        ]
        .into_iter()
        .flatten()
        {
            if !v.is_finite() {
                return Err(ConfigError::Invalid(format!("non-finite parameter value {v}")));
            }
        }
        for axis in &self.sweep {
            axis.param.parse::<SweepParam>()?;
            if axis.points < 2 {
                return Err(ConfigError::Invalid(format!(
                    "sweep axis '{}' needs points >= 2, got {}",
                    axis.param, axis.points
                )));
            }
            if !(axis.from.is_finite() && axis.to.is_finite()) {
                return Err(ConfigError::Invalid(format!(
                    "sweep axis '{}' has a non-finite range",
                    axis.param
                )));
            }
        }
        if let Some(t) = self.tolerances {
            if !(t.fcs_rel > 0.0 && t.oracle_rel > 0.0) {
                return Err(ConfigError::Invalid(
                    "tolerances must be positive".to_string(),
                ));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIG2: &str = r#"{
        "model": "qrc",
        "beta_h": 1.0, "beta_c": 2.0, "beta_w": 0.09,
        "omega_h": 10.0, "omega_c": 0.9, "gamma0": 0.01
    }"#;

    #[test]
    fn parses_minimal_config() {
        let cfg = RunConfig::from_json(FIG2).unwrap();
        assert_eq!(cfg.variant().unwrap(), Variant::Qrc);
        assert!(cfg.build_spec().is_ok());
        assert_eq!(cfg.tolerances(), Tolerances::default());
    }

    #[test]
    fn missing_omega_h_fails_at_build() {
        let cfg = RunConfig::from_json(
            r#"{"model":"qrc","beta_h":1.0,"beta_c":2.0,"beta_w":0.09,"omega_c":0.9,"gamma0":0.01}"#,
        )
        .unwrap();
        let err = cfg.build_spec().unwrap_err();
        assert!(err.to_string().contains("omega_h"));
    }

    #[test]
    fn parse_error_reports_line() {
        let err = RunConfig::from_json("{\n  \"model\": qrc\n}").unwrap_err();
        assert!(err.to_string().contains("line 2"));
    }

    #[test]
    fn rejects_unknown_fields_and_bad_axes() {
        assert!(RunConfig::from_json(r#"{"model":"qrc","betah":1.0}"#).is_err());
        let bad_axis = r#"{
            "model": "qrc", "beta_h": 1.0, "beta_c": 2.0, "beta_w": 0.09,
            "omega_h": 10.0, "omega_c": 0.9, "gamma0": 0.01,
            "sweep": [{"param": "beta_s", "from": 1.0, "to": 2.0, "points": 5}]
        }"#;
        let err = RunConfig::from_json(bad_axis).unwrap_err();
        assert!(err.to_string().contains("unknown sweep parameter"));
        let one_point = r#"{
            "model": "qrc", "beta_h": 1.0, "beta_c": 2.0, "beta_w": 0.09,
            "omega_h": 10.0, "omega_c": 0.9, "gamma0": 0.01,
            "sweep": [{"param": "beta_c", "from": 1.0, "to": 2.0, "points": 1}]
        }"#;
        assert!(RunConfig::from_json(one_point).is_err());
    }

    #[test]
    fn round_trips_through_json() {
        let cfg = RunConfig::from_json(FIG2).unwrap();
        let text = serde_json::to_string(&cfg).unwrap();
        let back = RunConfig::from_json(&text).unwrap();
        assert_eq!(cfg, back);
    }
}
