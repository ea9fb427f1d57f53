//! Multi-user secure beamforming with artificial noise.
//!
//! User `k` decodes with SINR
//!
//! ```text
//! γ_B,k = |h_kᴴw_k|² / (Σ_{i≠k} |h_kᴴw_i|² + |h_kᴴz|² + σ²_B,k)
//! ```
//!
//! while the eavesdropper, which cancels multi-user interference but not the
//! AN, wiretaps it at `C_E,k = log₂(1 + |h_Eᴴw_k|²/(|h_Eᴴz|² + σ²_E))`.
//! The per-user secrecy rate is `[log₂(1+γ_B,k) − C_E,k]⁺`.

mod plan;
mod psd;
mod sca;
mod schemes;

pub use plan::{clusters, determine_plan, plan_from_requirements};
pub use sca::{sca_optimize, sca_optimize_restricted, AnMode, ScaRestriction};
pub use schemes::{baseline1, baseline2, baseline3, low_complexity_solve, pairwise_link};

use serde::{Deserialize, Serialize};

use crate::channel::{ArrayGeometry, NearFieldChannel, PolarPosition};
use crate::geometry::UserDistribution;
use crate::{CVector, Complex64, Error, Result};

/// Relative slack on the power budget.
pub const POWER_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub geom: ArrayGeometry,
    pub users: Vec<NearFieldChannel>,
    pub eve: NearFieldChannel,
    pub total_power: f64,
    pub noise_b: Vec<f64>,
    pub noise_e: f64,
    pub phi_db: f64,
}

impl Scenario {
    pub fn new(
        geom: ArrayGeometry,
        users: Vec<NearFieldChannel>,
        eve: NearFieldChannel,
        total_power: f64,
        noise_b: Vec<f64>,
        noise_e: f64,
        phi_db: f64,
    ) -> Result<Self> {
        if users.is_empty() {
            return Err(Error::NoUsers);
        }
        if noise_b.len() != users.len() {
            return Err(Error::Dimension { expected: users.len(), got: noise_b.len() });
        }
        let n = geom.num_antennas();
        for ch in users.iter().chain(std::iter::once(&eve)) {
            if ch.vector.len() != n {
                return Err(Error::Dimension { expected: n, got: ch.vector.len() });
            }
        }
        let positive = |v: f64| v > 0.0 && v.is_finite();
        if !positive(total_power) || !positive(noise_e) || !noise_b.iter().all(|&v| positive(v)) {
            return Err(Error::InvalidParameter("powers and noise levels must be positive".into()));
        }
        Ok(Self { geom, users, eve, total_power, noise_b, noise_e, phi_db })
    }

    pub fn num_users(&self) -> usize {
        self.users.len()
    }

    pub fn positions(&self) -> Vec<PolarPosition> {
        self.users.iter().map(|u| u.position).collect()
    }

    /// `Linear` when every user shares one spatial angle.
    pub fn distribution(&self) -> UserDistribution {
        let th = self.users[0].position.spatial_angle();
        if self.users.iter().all(|u| u.position.spatial_angle() == th) {
            UserDistribution::Linear
        } else {
            UserDistribution::Uniform
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum BeamTag {
    Mrt,
    Optimized,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum AnTag {
    EveAligned,
    Optimized,
    Zero,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BeamPlan {
    pub users: Vec<BeamTag>,
    pub an: AnTag,
}

impl BeamPlan {
    pub fn optimized_count(&self) -> usize {
        self.users.iter().filter(|&&t| t == BeamTag::Optimized).count()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BeamformingSolution {
    pub w: Vec<CVector>,
    pub z: CVector,
    pub sinr_b: Vec<f64>,
    pub eve_capacity: Vec<f64>,
    /// `[R_B,k − C_E,k]⁺`.
    pub per_user_secrecy: Vec<f64>,
    pub sum_secrecy: f64,
    pub plan: Option<BeamPlan>,
    /// Outer SCA iterations, 0 for closed forms.
    pub iterations: usize,
    /// SCA objective `f_obj` (bits/s/Hz) at the start and after every outer iteration.
    pub objective_history: Vec<f64>,
    /// Largest `λ₂/λ₁` seen during rank-one extraction.
    pub max_rank_ratio: f64,
}

impl BeamformingSolution {
    pub fn total_power(&self) -> f64 {
        self.w.iter().map(|w| w.norm_squared()).sum::<f64>() + self.z.norm_squared()
    }

    fn with_plan(mut self, plan: BeamPlan) -> Self {
        self.plan = Some(plan);
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SCAConfig {
    pub max_iters: usize,
    /// Relative change of `f_obj` that ends the outer loop.
    pub objective_tolerance: f64,
    /// Duality-gap bound on each convex subproblem (bits/s/Hz).
    pub subproblem_tolerance: f64,
    /// Newton steps allowed per subproblem.
    pub subproblem_max_iters: usize,
    /// `λ₂/λ₁` above which rank-one extraction logs a warning.
    pub rank_tolerance: f64,
}

impl Default for SCAConfig {
    fn default() -> Self {
        Self {
            max_iters: 50,
            objective_tolerance: 1e-4,
            subproblem_tolerance: 1e-6,
            subproblem_max_iters: 500,
            rank_tolerance: 1e-3,
        }
    }
}

impl SCAConfig {
    pub fn validate(&self) -> Result<()> {
        let ok = self.max_iters >= 1
            && self.subproblem_max_iters >= 1
            && self.objective_tolerance > 0.0
            && self.subproblem_tolerance > 0.0
            && self.rank_tolerance > 0.0;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameter("SCA tolerances must be positive and iteration caps at least 1".into()))
        }
    }
}

/// `√power·h/‖h‖`.
pub fn mrt_beamformer(channel: &CVector, power: f64) -> Result<CVector> {
    if !(power >= 0.0) {
        return Err(Error::InvalidParameter(format!("power {power} must be non-negative")));
    }
    let norm = channel.norm();
    if norm == 0.0 {
        return Err(Error::ZeroChannel);
    }
    Ok(channel * Complex64::from(power.sqrt() / norm))
}

/// AN focused on the eavesdropper, `√P_E·h_E/‖h_E‖`.
pub fn an_aligned_beamformer(scenario: &Scenario, power_e: f64) -> Result<CVector> {
    if power_e > scenario.total_power * (1.0 + POWER_SLACK) {
        return Err(Error::PowerBudget { used: power_e, budget: scenario.total_power });
    }
    mrt_beamformer(&scenario.eve.vector, power_e)
}

fn quad(h: &CVector, w: &CVector) -> f64 {
    h.dotc(w).norm_sqr()
}

/// Rates of a given set of beamformers.
pub fn evaluate(scenario: &Scenario, w: &[CVector], z: &CVector) -> Result<BeamformingSolution> {
    let k = scenario.num_users();
    let n = scenario.geom.num_antennas();
    if w.len() != k {
        return Err(Error::Dimension { expected: k, got: w.len() });
    }
    if let Some(bad) = w.iter().chain(std::iter::once(z)).find(|v| v.len() != n) {
        return Err(Error::Dimension { expected: n, got: bad.len() });
    }
    let used: f64 = w.iter().map(|v| v.norm_squared()).sum::<f64>() + z.norm_squared();
    if used > scenario.total_power * (1.0 + POWER_SLACK) {
        return Err(Error::PowerBudget { used, budget: scenario.total_power });
    }
    let he = &scenario.eve.vector;
    let an_e = quad(he, z) + scenario.noise_e;
    let mut sinr_b = Vec::with_capacity(k);
    let mut eve_capacity = Vec::with_capacity(k);
    let mut per_user_secrecy = Vec::with_capacity(k);
    for (idx, user) in scenario.users.iter().enumerate() {
        let h = &user.vector;
        let interference: f64 = w
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != idx)
            .map(|(_, wi)| quad(h, wi))
            .sum::<f64>()
            + quad(h, z);
        let sinr = quad(h, &w[idx]) / (interference + scenario.noise_b[idx]);
        let c_e = (quad(he, &w[idx]) / an_e).ln_1p() / std::f64::consts::LN_2;
        let r_b = sinr.ln_1p() / std::f64::consts::LN_2;
        sinr_b.push(sinr);
        eve_capacity.push(c_e);
        per_user_secrecy.push((r_b - c_e).max(0.0));
    }
    let sum_secrecy = per_user_secrecy.iter().sum();
    Ok(BeamformingSolution {
        w: w.to_vec(),
        z: z.clone(),
        sinr_b,
        eve_capacity,
        per_user_secrecy,
        sum_secrecy,
        plan: None,
        iterations: 0,
        objective_history: Vec::new(),
        max_rank_ratio: 0.0,
    })
}
