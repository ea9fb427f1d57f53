//! How many users need a numerically optimized beamformer.
//!
//! Each user independently falls in the separable region `[r_Fre, r_DT^max)`
//! with probability `p_sr`. Every separable user costs one optimization and all
//! remaining users together cost one, so the count is `1 + Binomial(K, p_sr)`
//! capped at `K`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::channel::ArrayGeometry;
use crate::geometry::{max_distance_threshold, BeamSpec};
use crate::rng::seeded;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplexityModel {
    pub num_users: usize,
    pub p_sr: f64,
    /// `pmf[m - 1] = P(count = m)`.
    pub pmf: Vec<f64>,
    pub k_req: f64,
}

impl ComplexityModel {
    pub fn new(num_users: usize, p_sr: f64) -> Self {
        let p_sr = p_sr.clamp(0.0, 1.0);
        Self {
            num_users,
            p_sr,
            pmf: optimization_count_pmf(num_users, p_sr),
            k_req: expected_optimizations(num_users, p_sr),
        }
    }

    pub fn from_geometry(geom: &ArrayGeometry, spec: &BeamSpec, num_users: usize) -> Self {
        Self::new(num_users, separable_probability(geom, spec))
    }
}

/// `(r_DT^max − r_Fre)/(r_Ray − r_Fre)`, clamped to `[0, 1]`.
pub fn separable_probability(geom: &ArrayGeometry, spec: &BeamSpec) -> f64 {
    let r_fre = geom.fresnel_distance();
    let r_ray = geom.rayleigh_distance();
    ((max_distance_threshold(geom, spec) - r_fre) / (r_ray - r_fre)).clamp(0.0, 1.0)
}

fn binomial(n: usize, k: usize) -> f64 {
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// `P(count = m)` for `m = 1..=K`, returned at index `m − 1`.
pub fn optimization_count_pmf(num_users: usize, p_sr: f64) -> Vec<f64> {
    assert!(num_users >= 1, "at least one user");
    let k = num_users;
    let q = 1.0 - p_sr;
    let mut pmf: Vec<f64> = (1..=k)
        .map(|m| binomial(k, m - 1) * p_sr.powi(m as i32 - 1) * q.powi((k - m + 1) as i32))
        .collect();
    pmf[k - 1] += p_sr.powi(k as i32);
    pmf
}

/// `K_req = 1 + K·p_sr − p_sr^K`.
pub fn expected_optimizations(num_users: usize, p_sr: f64) -> f64 {
    let k = num_users as f64;
    (1.0 + k * p_sr - p_sr.powi(num_users as i32)).clamp(1.0, k.max(1.0))
}

/// Mean optimization count over `trials` layouts of `K` users drawn uniformly
/// in range on `[r_Fre, r_Ray]` at broadside.
pub fn monte_carlo_optimizations(
    geom: &ArrayGeometry,
    spec: &BeamSpec,
    num_users: usize,
    trials: usize,
    seed: u64,
) -> f64 {
    assert!(trials >= 1, "at least one trial");
    let r_fre = geom.fresnel_distance();
    let r_ray = geom.rayleigh_distance();
    let r_dt = max_distance_threshold(geom, spec);
    let mut rng = seeded(seed);
    let mut total = 0usize;
    for _ in 0..trials {
        let small = (0..num_users).filter(|_| rng.random_range(r_fre..r_ray) < r_dt).count();
        total += small + usize::from(small < num_users);
    }
    total as f64 / trials as f64
}
