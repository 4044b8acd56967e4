//! Run configuration. One JSON document holds a block per subcommand; a run
//! reads only its own block. Unknown keys are rejected everywhere.

use std::f64::consts::PI;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Dimension, LatticeSpec};
use crate::potentials::PairPotential;

pub const SCHEMA: &str = include_str!("../schema/run_config.schema.json");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Optional; when present it must name the subcommand being run.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub command: Option<String>,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub simulate: Option<SimulateConfig>,
    #[serde(
        default,
        skip_serializing_if = "Option::is_none",
        rename = "verify-quantum"
    )]
    pub verify_quantum: Option<QuantumConfig>,
    #[serde(
        default,
        skip_serializing_if = "Option::is_none",
        rename = "verify-bounds"
    )]
    pub verify_bounds: Option<BoundsConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scaling: Option<ScalingConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schrodinger: Option<SchrodingerConfig>,
    #[serde(
        default,
        skip_serializing_if = "Option::is_none",
        rename = "probe-divergence"
    )]
    pub probe_divergence: Option<DivergenceConfig>,
}

fn default_seed() -> u64 {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainConfig {
    pub beta: f64,
    #[serde(default = "d_total")]
    pub total_sweeps: usize,
    #[serde(default = "d_equil")]
    pub equilibration_sweeps: usize,
    #[serde(default = "d_thin")]
    pub thinning: usize,
    #[serde(default = "d_step")]
    pub initial_step: f64,
    #[serde(default = "d_target")]
    pub target_acceptance: f64,
    #[serde(default = "d_true")]
    pub com_frame: bool,
    /// Independent chains with seeds `seed, seed + 1, …`.
    #[serde(default = "d_one")]
    pub chains: usize,
}

fn d_total() -> usize {
    2000
}
fn d_equil() -> usize {
    500
}
fn d_thin() -> usize {
    10
}
fn d_step() -> f64 {
    0.1
}
fn d_target() -> f64 {
    0.4
}
fn d_true() -> bool {
    true
}
fn d_one() -> usize {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulateConfig {
    pub lattice: LatticeSpec,
    pub potential: PairPotential,
    pub chain: ChainConfig,
    #[serde(default = "d_one")]
    pub per_cell: usize,
    #[serde(default)]
    pub jitter: f64,
    /// Reciprocal vector `K = m₁b₁ + m₂b₂` used in the inequality check.
    #[serde(default = "d_recip")]
    pub reciprocal: [i64; 2],
    /// Write every stored configuration to `samples.jsonl`.
    #[serde(default = "d_true")]
    pub write_samples: bool,
}

fn d_recip() -> [i64; 2] {
    [1, 0]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WavePair {
    pub k: [i64; 2],
    pub reciprocal: [i64; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuantumConfig {
    #[serde(default = "d_dim")]
    pub dimension: Dimension,
    #[serde(default = "d_grid")]
    pub grid: usize,
    #[serde(default = "d_len")]
    pub length: f64,
    #[serde(default = "d_particles")]
    pub particles: usize,
    pub beta: f64,
    /// Potentials audited at every wave pair.
    pub potentials: Vec<PairPotential>,
    pub pairs: Vec<WavePair>,
    /// Extra randomized draws of the inequality.
    #[serde(default)]
    pub draws: usize,
    #[serde(default = "d_max_states")]
    pub max_states: usize,
}

fn d_dim() -> Dimension {
    Dimension::One
}
fn d_grid() -> usize {
    16
}
fn d_len() -> f64 {
    2.0 * PI
}
fn d_particles() -> usize {
    2
}
fn d_max_states() -> usize {
    1024
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundsConfig {
    #[serde(default = "d_draws")]
    pub draws: usize,
    #[serde(default = "d_grid")]
    pub grid: usize,
    #[serde(default = "d_sin")]
    pub sin_samples: usize,
}

fn d_draws() -> usize {
    20
}
fn d_sin() -> usize {
    100_000
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveConfig {
    pub grid: usize,
    pub length: f64,
    pub beta: f64,
    pub potential: PairPotential,
    /// Wave indices `q`, `k = 2πq/L`.
    pub q: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScalingConfig {
    /// Local potential; solved by total-momentum sectors.
    pub local: CurveConfig,
    /// Any potential; solved densely.
    pub nonlocal: CurveConfig,
    #[serde(default = "d_alpha_window")]
    pub local_alpha_window: [f64; 2],
}

fn d_alpha_window() -> [f64; 2] {
    [1.8, 2.2]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum KernelConfig {
    Separable { lambda: f64, sigma: f64 },
    DeltaLocal { potential: PairPotential },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchrodingerConfig {
    pub points: usize,
    pub length: f64,
    pub kernel: KernelConfig,
    #[serde(default = "d_states")]
    pub states: usize,
    /// Local potential for the reduction check.
    pub reduction: PairPotential,
}

fn d_states() -> usize {
    10
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DivergenceConfig {
    pub dimension: u8,
    pub k0: Vec<f64>,
    #[serde(default = "d_eps")]
    pub epsilon: f64,
    #[serde(default = "d_halvings")]
    pub halvings: usize,
}

fn d_eps() -> f64 {
    1.0
}
fn d_halvings() -> usize {
    8
}

pub const COMMANDS: [&str; 6] = [
    "simulate",
    "verify-quantum",
    "verify-bounds",
    "scaling",
    "schrodinger",
    "probe-divergence",
];

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let cfg: RunConfig = serde_path_to_error::deserialize(de).map_err(|e| {
            let field = e.path().to_string();
            let inner = e.into_inner().to_string();
            // missing fields are reported by the parent path; name the field itself
            let field = match inner.split('`').nth(1) {
                Some(name) if inner.starts_with("missing field") => {
                    if field == "." {
                        name.to_string()
                    } else {
                        format!("{field}.{name}")
                    }
                }
                _ => field,
            };
            Error::ConfigInvalid {
                field,
                reason: inner,
            }
        })?;
        if let Some(c) = &cfg.command {
            if !COMMANDS.contains(&c.as_str()) {
                return Err(Error::ConfigInvalid {
                    field: "command".into(),
                    reason: format!("unknown command `{c}`"),
                });
            }
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    /// Canonical JSON used for hashing.
    pub fn canonical(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }

    /// Built-in configuration for `command`, sized to run in seconds.
    pub fn default_for(command: &str) -> Result<Self> {
        let mut cfg = RunConfig {
            command: Some(command.to_string()),
            seed: default_seed(),
            out: None,
            simulate: None,
            verify_quantum: None,
            verify_bounds: None,
            scaling: None,
            schrodinger: None,
            probe_divergence: None,
        };
        match command {
            "simulate" => {
                cfg.seed = 7;
                cfg.simulate = Some(SimulateConfig {
                    lattice: LatticeSpec::triangular(1.6, 8),
                    potential: PairPotential::GaussianCore {
                        epsilon: 1.0,
                        sigma: 1.0,
                    },
                    chain: ChainConfig {
                        beta: 200.0,
                        total_sweeps: 11_000,
                        equilibration_sweeps: 1000,
                        thinning: d_thin(),
                        initial_step: d_step(),
                        target_acceptance: d_target(),
                        com_frame: true,
                        chains: 1,
                    },
                    per_cell: 1,
                    jitter: 0.0,
                    reciprocal: d_recip(),
                    write_samples: true,
                });
            }
            "verify-quantum" => {
                cfg.verify_quantum = Some(QuantumConfig {
                    dimension: d_dim(),
                    grid: d_grid(),
                    length: d_len(),
                    particles: d_particles(),
                    beta: 1.0,
                    potentials: vec![
                        PairPotential::GaussianCore {
                            epsilon: 1.0,
                            sigma: 3.0,
                        },
                        PairPotential::SubstrateCoupled {
                            epsilon: 1.0,
                            sigma: 3.0,
                            coupling: 0.5,
                            wavevector: [1.0, 0.0],
                            coupling_sigma: 4.0,
                        },
                    ],
                    pairs: vec![
                        WavePair {
                            k: [1, 0],
                            reciprocal: [0, 0],
                        },
                        WavePair {
                            k: [1, 0],
                            reciprocal: [1, 0],
                        },
                        WavePair {
                            k: [2, 0],
                            reciprocal: [-1, 0],
                        },
                    ],
                    draws: 10,
                    max_states: d_max_states(),
                });
            }
            "verify-bounds" => {
                cfg.verify_bounds = Some(BoundsConfig {
                    draws: d_draws(),
                    grid: d_grid(),
                    sin_samples: d_sin(),
                });
            }
            "scaling" => {
                cfg.scaling = Some(ScalingConfig {
                    local: CurveConfig {
                        grid: 128,
                        length: 20.0 * PI,
                        beta: 0.25,
                        potential: PairPotential::GaussianCore {
                            epsilon: 1.0,
                            sigma: 1.0,
                        },
                        q: (1..=10).collect(),
                    },
                    nonlocal: CurveConfig {
                        grid: 32,
                        length: 10.0 * PI,
                        beta: 10.0,
                        potential: PairPotential::SubstrateCoupled {
                            epsilon: 1.0,
                            sigma: 2.0,
                            coupling: 5.0,
                            wavevector: [1.0, 0.0],
                            coupling_sigma: 2.0,
                        },
                        q: (1..=10).collect(),
                    },
                    local_alpha_window: d_alpha_window(),
                });
            }
            "schrodinger" => {
                cfg.schrodinger = Some(SchrodingerConfig {
                    points: 128,
                    length: 30.0,
                    kernel: KernelConfig::Separable {
                        lambda: -0.5,
                        sigma: 1.0,
                    },
                    states: d_states(),
                    reduction: PairPotential::HarmonicPair { kappa: 1.0 },
                });
            }
            "probe-divergence" => {
                cfg.probe_divergence = Some(DivergenceConfig {
                    dimension: 2,
                    k0: vec![1e-2, 1e-3, 1e-4],
                    epsilon: d_eps(),
                    halvings: d_halvings(),
                });
            }
            other => {
                return Err(Error::ConfigInvalid {
                    field: "command".into(),
                    reason: format!("unknown command `{other}`"),
                })
            }
        }
        Ok(cfg)
    }

    /// The block for `command`, or a ConfigInvalid naming it.
    pub fn require_block(&self, command: &str) -> Result<()> {
        if let Some(c) = &self.command {
            if c != command {
                return Err(Error::ConfigInvalid {
                    field: "command".into(),
                    reason: format!("config is for `{c}`, running `{command}`"),
                });
            }
        }
        let present = match command {
            "simulate" => self.simulate.is_some(),
            "verify-quantum" => self.verify_quantum.is_some(),
            "verify-bounds" => self.verify_bounds.is_some(),
            "scaling" => self.scaling.is_some(),
            "schrodinger" => self.schrodinger.is_some(),
            "probe-divergence" => self.probe_divergence.is_some(),
            _ => false,
        };
        if present {
            Ok(())
        } else {
            Err(Error::ConfigInvalid {
                field: command.to_string(),
                reason: format!("missing `{command}` block"),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_round_trip() {
        for c in COMMANDS {
            let cfg = RunConfig::default_for(c).unwrap();
            let back = RunConfig::parse(&cfg.canonical()).unwrap();
            assert_eq!(back, cfg);
            back.require_block(c).unwrap();
        }
    }

    #[test]
    fn unknown_key_names_the_field() {
        let err = RunConfig::parse(r#"{"seed": 1, "colour": 2}"#).unwrap_err();
        assert!(err.to_string().contains("colour"), "{err}");
        let err =
            RunConfig::parse(r#"{"probe-divergence": {"dimension": 2, "k0": [0.1], "eps": 1}}"#)
                .unwrap_err();
        assert!(matches!(err, Error::ConfigInvalid { .. }));
    }

    #[test]
    fn missing_beta_is_named() {
        let text = r#"{"verify-quantum": {"potentials": [], "pairs": []}}"#;
        match RunConfig::parse(text).unwrap_err() {
            Error::ConfigInvalid { field, .. } => assert_eq!(field, "verify-quantum.beta"),
            e => panic!("{e}"),
        }
    }
}
