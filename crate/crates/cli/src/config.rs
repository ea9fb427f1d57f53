//! Experiment configuration.
//!
//! A config file is TOML. Only `schema_version` and `experiment` are required;
//! every other key overrides the preset of the named experiment.
//!
//! ```toml
//! schema_version = 1
//! experiment = "fig6"
//! schemes = ["conventional", "proposed", "baseline1", "baseline2", "baseline3"]
//! seeds = [1, 2, 3]
//!
//! [array]
//! num_antennas = 16
//! carrier_ghz = 100.0
//!
//! [power]
//! total_dbm = 30.0
//! noise_dbm = -80.0
//!
//! [channel]
//! nlos_paths = 2
//! kappa_db = -15.0
//!
//! [beam]
//! phi_db = 3.0
//!
//! [positions]
//! unit = "rayleigh"            # or "meters"
//! eve = [0.0, 0.05]            # (spatial angle, range)
//! users = [[0.0, 0.06], [0.0, 0.1], [0.0, 0.3]]
//!
//! [sweep]
//! axis = "power_dbm"
//! values = [20.0, 25.0, 30.0, 35.0, 40.0]
//! ```

use std::path::Path;

use nfsec_core::beamformer::SCAConfig;
use nfsec_core::units::dbm_to_watts;
use serde::{Deserialize, Serialize};

use crate::error::{HarnessError, Result};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExperimentId {
    Fig2,
    Fig4,
    Fig6,
    Fig7,
    Fig8,
    Fig9,
    Table1,
    Custom,
}

impl ExperimentId {
    pub fn name(self) -> &'static str {
        match self {
            Self::Fig2 => "fig2",
            Self::Fig4 => "fig4",
            Self::Fig6 => "fig6",
            Self::Fig7 => "fig7",
            Self::Fig8 => "fig8",
            Self::Fig9 => "fig9",
            Self::Table1 => "table1",
            Self::Custom => "custom",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    /// Full SDR+SCA.
    Conventional,
    /// Interference-set pipeline.
    Proposed,
    /// MRT beams and eavesdropper-aligned AN, powers only.
    Baseline1,
    /// Optimized beams, eavesdropper-aligned AN.
    Baseline2,
    /// MRT beams, optimized AN.
    Baseline3,
    /// Single user: MRT with the closed-form optimal AN split.
    OptimalAn,
    /// Single user: MRT at full power, no AN.
    NoAn,
}

impl Scheme {
    pub fn name(self) -> &'static str {
        match self {
            Self::Conventional => "conventional",
            Self::Proposed => "proposed",
            Self::Baseline1 => "baseline1",
            Self::Baseline2 => "baseline2",
            Self::Baseline3 => "baseline3",
            Self::OptimalAn => "optimal_an",
            Self::NoAn => "no_an",
        }
    }

    /// Whether the scheme runs the SCA optimizer.
    pub fn uses_sca(self) -> bool {
        matches!(self, Self::Conventional | Self::Proposed | Self::Baseline2 | Self::Baseline3)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PositionUnit {
    /// Range as a fraction of the Rayleigh distance.
    Rayleigh,
    Meters,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepAxis {
    /// Single point at the configured parameters.
    None,
    /// Total transmit power in dBm.
    PowerDbm,
    /// Number of users; ranges follow the equally spaced descending rule.
    NumUsers,
    /// Spatial angle of user `sweep.user`.
    UserAngle,
    /// Range of user `sweep.user`, in the position unit.
    UserRange,
    /// AN power as a fraction of the total (single-user curves).
    AnFraction,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArrayParams {
    pub num_antennas: usize,
    pub carrier_ghz: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerParams {
    pub total_dbm: f64,
    pub noise_dbm: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelParams {
    pub nlos_paths: usize,
    pub kappa_db: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BeamParams {
    pub phi_db: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Positions {
    pub unit: PositionUnit,
    pub eve: [f64; 2],
    pub users: Vec<[f64; 2]>,
    /// Alternative eavesdropper positions, one curve each (fig2).
    #[serde(default)]
    pub panels: Vec<[f64; 2]>,
    /// Range interval `[near, far]` for the user-count sweep.
    #[serde(default = "default_user_interval")]
    pub user_interval: [f64; 2],
}

fn default_user_interval() -> [f64; 2] {
    [0.25, 0.35]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sweep {
    pub axis: SweepAxis,
    #[serde(default)]
    pub values: Vec<f64>,
    /// `[start, stop, points]`, used when `values` is empty.
    #[serde(default)]
    pub linspace: Option<(f64, f64, usize)>,
    /// User index for angle and range sweeps.
    #[serde(default)]
    pub user: usize,
}

impl Sweep {
    pub fn points(&self) -> Vec<f64> {
        if !self.values.is_empty() {
            return self.values.clone();
        }
        match self.linspace {
            Some((a, b, 1)) if a == b => vec![a],
            Some((a, b, n)) if n >= 2 => (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect(),
            Some((a, _, 1)) => vec![a],
            _ => Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub schema_version: u32,
    pub experiment: ExperimentId,
    pub schemes: Vec<Scheme>,
    pub seeds: Vec<u64>,
    pub array: ArrayParams,
    pub power: PowerParams,
    pub channel: ChannelParams,
    pub beam: BeamParams,
    pub positions: Positions,
    pub sweep: Sweep,
    pub sca: SCAConfig,
    /// Repetitions per timing in `bench`.
    pub bench_reps: usize,
    /// User counts timed by `bench`.
    pub bench_users: Vec<usize>,
}

impl ExperimentConfig {
    /// Defaults of the named experiment.
    pub fn preset(id: ExperimentId) -> Self {
        let sca_schemes =
            vec![Scheme::Conventional, Scheme::Proposed, Scheme::Baseline1, Scheme::Baseline2, Scheme::Baseline3];
        let mut c = Self {
            schema_version: SCHEMA_VERSION,
            experiment: id,
            schemes: sca_schemes.clone(),
            seeds: vec![1, 2, 3],
            array: ArrayParams { num_antennas: 16, carrier_ghz: 100.0 },
            power: PowerParams { total_dbm: 30.0, noise_dbm: -80.0 },
            channel: ChannelParams { nlos_paths: 2, kappa_db: -15.0 },
            beam: BeamParams { phi_db: 3.0 },
            positions: Positions {
                unit: PositionUnit::Rayleigh,
                eve: [0.0, 0.05],
                users: vec![[0.0, 0.06], [0.0, 0.1], [0.0, 0.3]],
                panels: Vec::new(),
                user_interval: default_user_interval(),
            },
            sweep: Sweep { axis: SweepAxis::None, values: vec![0.0], linspace: None, user: 0 },
            sca: SCAConfig::default(),
            bench_reps: 5,
            bench_users: vec![2, 3, 4],
        };
        if matches!(id, ExperimentId::Fig6 | ExperimentId::Fig7 | ExperimentId::Fig8 | ExperimentId::Fig9) {
            c.array.num_antennas = 256;
            c.sca.max_iters = 200;
            c.sca.objective_tolerance = 1e-7;
        }
        match id {
            ExperimentId::Fig2 => {
                c.schemes = vec![Scheme::OptimalAn];
                c.seeds = vec![0];
                c.array.num_antennas = 256;
                c.channel.nlos_paths = 0;
                c.positions.users = vec![[0.0, 0.3]];
                c.positions.panels = vec![[0.0, 0.05], [0.05, 0.05], [0.0, 0.5]];
                c.sweep = Sweep { axis: SweepAxis::AnFraction, values: Vec::new(), linspace: Some((0.0, 0.999, 1000)), user: 0 };
            }
            ExperimentId::Fig4 => {
                c.schemes = vec![Scheme::OptimalAn, Scheme::NoAn];
                c.seeds = vec![0];
                c.array.num_antennas = 256;
                c.channel.nlos_paths = 0;
                c.positions.eve = [0.0, 0.1];
                c.positions.users = vec![[0.0, 0.2]];
                c.sweep = Sweep { axis: SweepAxis::UserAngle, values: Vec::new(), linspace: Some((-0.1, 0.1, 201)), user: 0 };
            }
            ExperimentId::Fig6 => {
                c.sweep = Sweep {
                    axis: SweepAxis::PowerDbm,
                    values: vec![20.0, 25.0, 30.0, 35.0, 40.0],
                    linspace: None,
                    user: 0,
                };
            }
            ExperimentId::Fig7 => {
                c.sweep = Sweep { axis: SweepAxis::NumUsers, values: vec![1.0, 2.0, 3.0, 4.0, 5.0], linspace: None, user: 0 };
            }
            ExperimentId::Fig8 => {
                c.seeds = (1..=10).collect();
                c.positions.users = vec![[0.0, 0.3], [0.0, 0.3]];
                c.sweep = Sweep { axis: SweepAxis::UserAngle, values: Vec::new(), linspace: Some((-0.2, 0.2, 21)), user: 1 };
            }
            ExperimentId::Fig9 => {
                c.positions.eve = [0.0, 0.1];
                c.positions.users = vec![[0.0, 0.3], [0.0, 0.3]];
                c.sweep = Sweep { axis: SweepAxis::UserRange, values: Vec::new(), linspace: Some((0.15, 1.0, 35)), user: 1 };
            }
            ExperimentId::Table1 => {
                c.schemes = vec![Scheme::Conventional, Scheme::Proposed];
                c.seeds = vec![1];
            }
            ExperimentId::Custom => {}
        }
        c
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let head: Header = toml::from_str(text).map_err(|e| HarnessError::Config(e.to_string()))?;
        if head.schema_version != SCHEMA_VERSION {
            return Err(HarnessError::Config(format!(
                "schema_version {} is not supported (expected {SCHEMA_VERSION})",
                head.schema_version
            )));
        }
        let mut base = toml::Value::try_from(Self::preset(head.experiment)).map_err(|e| HarnessError::Config(e.to_string()))?;
        let overrides: toml::Value = toml::from_str(text).map_err(|e| HarnessError::Config(e.to_string()))?;
        merge(&mut base, overrides);
        let cfg: Self = base.try_into().map_err(|e: toml::de::Error| HarnessError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| HarnessError::Io { path: path.to_path_buf(), source })?;
        Self::from_toml_str(&text)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(HarnessError::Config(msg));
        if self.sweep.points().is_empty() {
            return bad("sweep grid is empty".into());
        }
        if self.seeds.is_empty() {
            return bad("at least one seed is required".into());
        }
        if self.schemes.is_empty() {
            return bad("at least one scheme is required".into());
        }
        if self.positions.users.is_empty() && self.sweep.axis != SweepAxis::NumUsers {
            return bad("at least one user position is required".into());
        }
        if matches!(self.sweep.axis, SweepAxis::UserAngle | SweepAxis::UserRange)
            && self.sweep.user >= self.positions.users.len()
        {
            return bad(format!("sweep.user {} has no position", self.sweep.user));
        }
        if self.sweep.axis == SweepAxis::NumUsers && self.sweep.points().iter().any(|&k| k < 1.0 || k.fract() != 0.0) {
            return bad("user counts must be positive integers".into());
        }
        if self.sweep.axis == SweepAxis::AnFraction && self.sweep.points().iter().any(|&f| !(0.0..=1.0).contains(&f)) {
            return bad("AN fractions must lie in [0, 1]".into());
        }
        if self.bench_reps == 0 {
            return bad("bench_reps must be at least 1".into());
        }
        self.sca.validate().map_err(HarnessError::from)
    }

    pub fn total_power_w(&self) -> f64 {
        dbm_to_watts(self.power.total_dbm)
    }

    pub fn noise_w(&self) -> f64 {
        dbm_to_watts(self.power.noise_dbm)
    }
}

#[derive(Deserialize)]
struct Header {
    schema_version: u32,
    experiment: ExperimentId,
}

/// Recursive table merge; arrays and scalars in `over` replace those in `base`.
fn merge(base: &mut toml::Value, over: toml::Value) {
    match (base, over) {
        (toml::Value::Table(b), toml::Value::Table(o)) => {
            for (k, v) in o {
                match b.get_mut(&k) {
                    Some(slot) => merge(slot, v),
                    None => {
                        b.insert(k, v);
                    }
                }
            }
        }
        (slot, v) => *slot = v,
    }
}
