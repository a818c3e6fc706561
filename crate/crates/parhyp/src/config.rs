//! Run configuration: a single JSON document with documented defaults.

use crate::error::Error;
use crate::source::{SourceField, SourceKind, Support};
use crate::Result;
use serde::{Deserialize, Serialize};
use std::path::PathBuf;

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct GridConfig {
    pub parabolic_nx: usize,
    pub parabolic_ny: usize,
    pub char_n: usize,
    pub volterra_n: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            parabolic_nx: 32,
            parabolic_ny: 32,
            char_n: 32,
            volterra_n: 512,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct ToleranceConfig {
    pub series_eps: f64,
    pub quad_refine_tol: f64,
    /// Exit-gate threshold on the wall residuals of a solve.
    pub boundary_residual: f64,
    /// Exit-gate threshold on the transmission residual of a solve.
    pub transmission_residual: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self {
            series_eps: 1e-14,
            quad_refine_tol: 1e-6,
            boundary_residual: 1e-8,
            transmission_residual: 1e-4,
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum SignMode {
    /// Resolve empirically which sign the resolvent series inverts.
    Auto,
    Plus,
    Minus,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SurrogateKind {
    Zero,
    Separable,
    ConstGamma { c: f64 },
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct SpectralConfig {
    pub quad_m: usize,
    pub node_cap: usize,
    pub sign_mode: SignMode,
    pub surrogate: Option<SurrogateKind>,
}

impl Default for SpectralConfig {
    fn default() -> Self {
        Self {
            quad_m: 12,
            node_cap: 2000,
            sign_mode: SignMode::Auto,
            surrogate: None,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    pub directory: PathBuf,
    pub formats: Vec<String>,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            directory: PathBuf::from("out"),
            formats: vec!["csv".into(), "json".into()],
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub alpha: f64,
    pub beta: f64,
    pub source: SourceField,
    pub grids: GridConfig,
    pub tolerances: ToleranceConfig,
    pub spectral: SpectralConfig,
    pub output: OutputConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            alpha: 1.0,
            beta: 1.0,
            source: SourceField {
                kind: SourceKind::GaussianBump {
                    amplitude: 1.0,
                    x0: 0.5,
                    y0: 0.25,
                    sigma: 0.2,
                },
                support: Support::Whole,
            },
            grids: GridConfig::default(),
            tolerances: ToleranceConfig::default(),
            spectral: SpectralConfig::default(),
            output: OutputConfig::default(),
        }
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: RunConfig = serde_json::from_str(text)
            .map_err(|e| Error::Config(format!("config parse error: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.alpha * self.alpha + self.beta * self.beta <= 0.0 {
            return Err(Error::Config("alpha^2 + beta^2 must be positive".into()));
        }
        let g = &self.grids;
        for (name, v) in [
            ("parabolic_nx", g.parabolic_nx),
            ("parabolic_ny", g.parabolic_ny),
            ("char_n", g.char_n),
            ("volterra_n", g.volterra_n),
        ] {
            if v < 8 {
                return Err(Error::Config(format!("grids.{name} must be >= 8, got {v}")));
            }
        }
        if !(self.tolerances.series_eps > 0.0) || !(self.tolerances.quad_refine_tol > 0.0) {
            return Err(Error::Config("tolerances must be positive".into()));
        }
        if self.spectral.quad_m < 4 {
            return Err(Error::Config("spectral.quad_m must be >= 4".into()));
        }
        if self.spectral.node_cap < 2 * self.spectral.quad_m * self.spectral.quad_m {
            return Err(Error::Config(
                "spectral.node_cap below the scheme's node count".into(),
            ));
        }
        self.source.validate()?;
        Ok(())
    }

    /// The alpha != 0 requirement of every solve path.
    pub fn require_solvable(&self) -> Result<()> {
        if self.alpha == 0.0 {
            return Err(Error::Config(
                "solve paths require alpha != 0 (the trace equation is divided by alpha)".into(),
            ));
        }
        Ok(())
    }

    /// Double every resolution (the --refine flag).
    pub fn refined(&self) -> Self {
        let mut c = self.clone();
        c.grids.parabolic_nx *= 2;
        c.grids.parabolic_ny *= 2;
        c.grids.char_n *= 2;
        c.grids.volterra_n *= 2;
        c.spectral.quad_m *= 2;
        c.spectral.node_cap *= 4;
        c
    }

    pub fn preset(name: &str) -> Result<Self> {
        let text = match name {
            "zero" => include_str!("../presets/zero.json"),
            "hyperbolic-constant" => include_str!("../presets/hyperbolic-constant.json"),
            "smooth-bump" => include_str!("../presets/smooth-bump.json"),
            other => {
                return Err(Error::Config(format!(
                    "unknown preset '{other}' (available: zero, hyperbolic-constant, smooth-bump)"
                )))
            }
        };
        Self::from_json(text)
    }
}
