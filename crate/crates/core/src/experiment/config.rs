use std::path::PathBuf;

use serde::Serialize;

use super::report::Format;
use super::tolerances::Tolerances;
use crate::error::{Error, Result};
use crate::lattice::model3::MODEL_III_MAX_SITES;
use crate::lattice::models::{MODEL_II_MAX_SITES, MODEL_I_MAX_SITES};
use crate::lattice::ModelKind;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Verify,
    Sweep,
    Spectrum,
    Tables,
}

/// Lattice models plus the symmetric sector of Model III at large `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelChoice {
    Lattice(ModelKind),
    Dicke,
}

impl ModelChoice {
    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "baby" => Self::Lattice(ModelKind::Baby),
            "i" | "1" | "model-i" => Self::Lattice(ModelKind::ModelI),
            "ii" | "2" | "model-ii" => Self::Lattice(ModelKind::ModelII),
            "iii" | "3" | "model-iii" => Self::Lattice(ModelKind::ModelIII),
            "bcs" => Self::Lattice(ModelKind::Bcs),
            "dicke" => Self::Dicke,
            other => {
                return Err(Error::Config {
                    field: "model",
                    message: format!("unknown model `{other}` (baby, I, II, III, bcs, dicke)"),
                })
            }
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Lattice(k) => k.name(),
            Self::Dicke => "dicke",
        }
    }

    /// Largest `n` the representation supports.
    pub fn max_n(&self) -> usize {
        match self {
            Self::Lattice(ModelKind::Baby) => 1,
            Self::Lattice(ModelKind::ModelI) => MODEL_I_MAX_SITES,
            Self::Lattice(ModelKind::ModelII) => MODEL_II_MAX_SITES,
            Self::Lattice(ModelKind::ModelIII) | Self::Lattice(ModelKind::Bcs) => MODEL_III_MAX_SITES,
            Self::Dicke => crate::dicke::ops::DICKE_MAX_N,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ExperimentConfig {
    pub command: Command,
    pub model: Option<ModelChoice>,
    pub n_values: Vec<usize>,
    pub metric: Option<String>,
    pub state: Option<String>,
    pub alpha: f64,
    pub beta: f64,
    /// extra flow parameter checked alongside the fixed grid
    pub s: Option<f64>,
    pub t: f64,
    pub r: f64,
    pub levels: usize,
    pub seed: u64,
    pub output_path: Option<PathBuf>,
    pub format: Format,
    pub jobs: usize,
    pub tolerances: Tolerances,
}

impl ExperimentConfig {
    pub fn new(command: Command) -> Self {
        Self {
            command,
            model: None,
            n_values: Vec::new(),
            metric: None,
            state: None,
            alpha: 1.0,
            beta: 1.0,
            s: None,
            t: 1.0,
            r: 1.0,
            levels: 7,
            seed: 7,
            output_path: None,
            format: Format::Csv,
            jobs: std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1),
            tolerances: Tolerances::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.jobs == 0 {
            return Err(Error::Config {
                field: "jobs",
                message: "must be at least 1".into(),
            });
        }
        for (field, v) in [("alpha", self.alpha), ("beta", self.beta), ("t", self.t), ("r", self.r)] {
            if !v.is_finite() {
                return Err(Error::Config {
                    field,
                    message: format!("must be finite, got {v}"),
                });
            }
        }
        if let Some(s) = self.s {
            if !s.is_finite() {
                return Err(Error::Config {
                    field: "s",
                    message: format!("must be finite, got {s}"),
                });
            }
        }
        if self.n_values.contains(&0) {
            return Err(Error::Config {
                field: "n",
                message: "particle numbers must be positive".into(),
            });
        }
        match self.command {
            Command::Verify => {
                if self.n_values.len() > 1 {
                    return Err(Error::Config {
                        field: "n",
                        message: "verify takes a single n".into(),
                    });
                }
                if let (Some(&n), None) = (self.n_values.first(), self.model) {
                    return Err(Error::Config {
                        field: "n",
                        message: format!("n = {n} needs --model"),
                    });
                }
                if let (Some(&n), Some(m)) = (self.n_values.first(), self.model) {
                    check_bound(m, n)?;
                }
            }
            Command::Spectrum => {
                let model = self.model.ok_or_else(|| Error::Config {
                    field: "model",
                    message: "spectrum needs --model".into(),
                })?;
                let n = match self.n_values.as_slice() {
                    [n] => *n,
                    _ => {
                        return Err(Error::Config {
                            field: "n",
                            message: "spectrum needs exactly one n".into(),
                        })
                    }
                };
                check_bound(model, n)?;
                if self.levels == 0 {
                    return Err(Error::Config {
                        field: "levels",
                        message: "must be at least 1".into(),
                    });
                }
            }
            Command::Sweep | Command::Tables => {
                if self.command == Command::Sweep && self.metric.is_none() {
                    return Err(Error::Config {
                        field: "metric",
                        message: "sweep needs --metric".into(),
                    });
                }
                if !self.n_values.is_empty() || self.command == Command::Sweep {
                    check_sweep_list(&self.n_values)?;
                }
            }
        }
        Ok(())
    }
}

fn check_bound(model: ModelChoice, n: usize) -> Result<()> {
    let limit = model.max_n();
    if n > limit {
        return Err(Error::Config {
            field: "n",
            message: format!("{n} exceeds the bound {limit} for model {}", model.name()),
        });
    }
    Ok(())
}

pub(crate) fn check_sweep_list(n_values: &[usize]) -> Result<()> {
    if n_values.len() < 3 {
        return Err(Error::Config {
            field: "n-list",
            message: format!("need at least 3 values for a fit, got {}", n_values.len()),
        });
    }
    if n_values.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Config {
            field: "n-list",
            message: "values must be strictly ascending".into(),
        });
    }
    Ok(())
}
