//! Beam width, beam depth, interference domains and interference sets.
//!
//! A φ-dB beam focused at `(θ, r)` keeps a normalised gain of at least
//! `10^(−φ/20)` across a cross-range width `BW = 2β̄λr/(Nd)` on its distance
//! ring and along a range interval `[r_L, r_R]` on its own spatial angle. The
//! rectangle spanned by the two is the user's interference domain.

use std::collections::BTreeSet;
use std::f64::consts::PI;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::channel::{fresnel_gain, ArrayGeometry, PolarPosition};
use crate::{Error, Result};

/// Solved beam thresholds for one φ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BeamSpec {
    pub phi_db: f64,
    /// Root of `sinc(β̄) = 10^(−φ/20)` (width).
    pub beta_bar: f64,
    /// Root of `G(β) = |C(β) + jS(β)|/β = 10^(−φ/20)` (depth).
    pub beta_phi: f64,
}

impl BeamSpec {
    pub fn new(phi_db: f64) -> Result<Self> {
        Ok(Self { phi_db, beta_bar: solve_beta_bar(phi_db)?, beta_phi: solve_beta_phi(phi_db)? })
    }

    pub fn gain_threshold(&self) -> f64 {
        10f64.powf(-self.phi_db / 20.0)
    }
}

/// `sin(πx)/(πx)`.
pub fn sinc(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        (PI * x).sin() / (PI * x)
    }
}

/// On-axis depth gain `G(β) = |C(β) + jS(β)|/β`, with `G(0) = 1`.
pub fn depth_gain(beta: f64) -> f64 {
    fresnel_gain(0.0, beta)
}

fn check_phi(phi_db: f64) -> Result<f64> {
    if !(phi_db > 0.0 && phi_db.is_finite()) {
        return Err(Error::InvalidParameter(format!("phi must be a positive dB value, got {phi_db}")));
    }
    Ok(10f64.powf(-phi_db / 20.0))
}

fn bisect_decreasing(f: impl Fn(f64) -> f64, target: f64, mut lo: f64, mut hi: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-15 {
            break;
        }
    }
    0.5 * (lo + hi)
}

pub fn solve_beta_bar(phi_db: f64) -> Result<f64> {
    let target = check_phi(phi_db)?;
    // sinc falls from 1 to its first zero at 1
    Ok(bisect_decreasing(sinc, target, 0.0, 1.0))
}

/// First local minimum of `G`, which bounds its first decreasing branch.
fn depth_gain_first_minimum() -> (f64, f64) {
    static MIN: OnceLock<(f64, f64)> = OnceLock::new();
    *MIN.get_or_init(|| {
        let step = 1e-3;
        let mut x = step;
        let mut prev = depth_gain(x);
        loop {
            let next = depth_gain(x + step);
            if next > prev {
                break;
            }
            prev = next;
            x += step;
        }
        // golden-section on [x − step, x + step]
        let (mut a, mut b) = (x - step, x + step);
        let g = (5f64.sqrt() - 1.0) / 2.0;
        for _ in 0..80 {
            let x1 = b - g * (b - a);
            let x2 = a + g * (b - a);
            if depth_gain(x1) < depth_gain(x2) {
                b = x2;
            } else {
                a = x1;
            }
        }
        let m = 0.5 * (a + b);
        (m, depth_gain(m))
    })
}

pub fn solve_beta_phi(phi_db: f64) -> Result<f64> {
    let target = check_phi(phi_db)?;
    let (beta_min, g_min) = depth_gain_first_minimum();
    if target <= g_min {
        return Err(Error::ThresholdOutOfLobe { phi_db });
    }
    Ok(bisect_decreasing(depth_gain, target, 0.0, beta_min))
}

/// `BW = 2β̄λr/(Nd)`, a cross-range width in metres.
pub fn beam_width(geom: &ArrayGeometry, spec: &BeamSpec, user: &PolarPosition) -> f64 {
    2.0 * spec.beta_bar * geom.wavelength() * user.range() / (geom.num_antennas() as f64 * geom.spacing())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BeamDepth {
    /// `r_R − r_L`, `+∞` once `r ≥ r_BD`.
    pub depth: f64,
    pub r_left: f64,
    pub r_right: f64,
    pub r_bd: f64,
}

impl BeamDepth {
    /// `r_L ≤ range ≤ r_R`, evaluated as `|1/range − 1/r| ≤ 1/r_BD`, which is
    /// the same interval written in inverse range and is exactly symmetric in
    /// the two ranges.
    pub fn contains_range(&self, center_range: f64, range: f64) -> bool {
        (1.0 / range - 1.0 / center_range).abs() <= 1.0 / self.r_bd
    }
}

/// `r_BD = N²d²(1−θ²)/(2λβ_φ²)`.
pub fn depth_boundary(geom: &ArrayGeometry, spec: &BeamSpec, theta: f64) -> f64 {
    let nd = geom.num_antennas() as f64 * geom.spacing();
    nd * nd * (1.0 - theta * theta) / (2.0 * geom.wavelength() * spec.beta_phi * spec.beta_phi)
}

pub fn beam_depth(geom: &ArrayGeometry, spec: &BeamSpec, user: &PolarPosition) -> BeamDepth {
    let r = user.range();
    let r_bd = depth_boundary(geom, spec, user.spatial_angle());
    let r_left = r * r_bd / (r_bd + r);
    if r < r_bd {
        BeamDepth {
            depth: 2.0 * r * r * r_bd / (r_bd * r_bd - r * r),
            r_left,
            r_right: r * r_bd / (r_bd - r),
            r_bd,
        }
    } else {
        if r_bd == 0.0 {
            log::warn!("endfire user (|θ| = 1): beam depth is unbounded");
        }
        BeamDepth { depth: f64::INFINITY, r_left, r_right: f64::INFINITY, r_bd }
    }
}

/// Rectangle `|x − x_k| ≤ BD/2`, `|y − y_k| ≤ BW/2` around user `owner`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InterferenceDomain {
    pub center_xy: (f64, f64),
    pub half_width: f64,
    pub half_depth: f64,
    pub owner: usize,
    /// x-range actually tested; `[0, r_Ray]` when the beam depth is unbounded.
    pub x_extent: (f64, f64),
}

impl InterferenceDomain {
    pub fn contains(&self, x: f64, y: f64) -> bool {
        x >= self.x_extent.0 && x <= self.x_extent.1 && (y - self.center_xy.1).abs() <= self.half_width
    }

    pub fn contains_position(&self, pos: &PolarPosition) -> bool {
        let (x, y) = pos.cartesian();
        self.contains(x, y)
    }
}

pub fn interference_domain(
    geom: &ArrayGeometry,
    spec: &BeamSpec,
    owner: usize,
    user: &PolarPosition,
) -> InterferenceDomain {
    let center_xy = user.cartesian();
    let half_width = beam_width(geom, spec, user) / 2.0;
    let half_depth = beam_depth(geom, spec, user).depth / 2.0;
    let x_extent = if half_depth.is_finite() {
        (center_xy.0 - half_depth, center_xy.0 + half_depth)
    } else {
        (0.0, geom.rayleigh_distance())
    };
    InterferenceDomain { center_xy, half_width, half_depth, owner, x_extent }
}

/// Range beyond which the right beam-depth boundary passes the Rayleigh
/// distance: the solution of `r·r_BD/(r_BD − r) = r_Ray`, i.e.
/// `r_BD·r_Ray/(r_BD + r_Ray)`. At half-wavelength spacing this is
/// `N²λ(1−θ²)/(8β_φ² + 2(1−θ²))`.
pub fn distance_threshold(geom: &ArrayGeometry, spec: &BeamSpec, theta: f64) -> f64 {
    let r_bd = depth_boundary(geom, spec, theta);
    let r_ray = geom.rayleigh_distance();
    r_bd * r_ray / (r_bd + r_ray)
}

/// Largest distance threshold, attained at `θ = 0`.
pub fn max_distance_threshold(geom: &ArrayGeometry, spec: &BeamSpec) -> f64 {
    distance_threshold(geom, spec, 0.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum UserDistribution {
    /// All users on one spatial angle.
    Linear,
    /// Users anywhere in the near field; adds a beam-width pre-filter.
    Uniform,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InterferenceSets {
    /// One-sided sets: users of the small group within `k`'s beam depth with `r_i ≥ r_k`.
    pub raw: Vec<BTreeSet<usize>>,
    /// Union closure of `raw`; consumers should use this view.
    pub per_user: Vec<BTreeSet<usize>>,
    /// Users at or beyond their distance threshold, all mutually interfering.
    pub merged_far_set: BTreeSet<usize>,
    /// Distance threshold at each user's spatial angle.
    pub thresholds: Vec<f64>,
}

impl InterferenceSets {
    pub fn num_users(&self) -> usize {
        self.per_user.len()
    }

    pub fn is_small(&self, k: usize) -> bool {
        !self.merged_far_set.contains(&k)
    }

    /// Largest threshold among the users (the common one for a linear layout).
    pub fn threshold(&self) -> f64 {
        self.thresholds.iter().copied().fold(0.0, f64::max)
    }

    /// Whether user `j` interferes with user `i`, including the far group.
    pub fn interferes(&self, i: usize, j: usize) -> bool {
        if i == j {
            return false;
        }
        self.per_user[i].contains(&j) || (self.merged_far_set.contains(&i) && self.merged_far_set.contains(&j))
    }
}

pub fn build_interference_sets(
    geom: &ArrayGeometry,
    spec: &BeamSpec,
    users: &[PolarPosition],
    distribution: UserDistribution,
) -> Result<InterferenceSets> {
    let first = users.first().ok_or(Error::NoUsers)?;
    if distribution == UserDistribution::Linear
        && users.iter().any(|u| u.spatial_angle() != first.spatial_angle())
    {
        return Err(Error::InvalidParameter("linear distribution requires a shared spatial angle".into()));
    }
    let k = users.len();
    let thresholds: Vec<f64> = users.iter().map(|u| distance_threshold(geom, spec, u.spatial_angle())).collect();
    let merged_far_set: BTreeSet<usize> = (0..k).filter(|&i| users[i].range() >= thresholds[i]).collect();
    let small: Vec<usize> = (0..k).filter(|i| !merged_far_set.contains(i)).collect();

    let mut raw = vec![BTreeSet::new(); k];
    for &owner in &small {
        let u = &users[owner];
        let depth = beam_depth(geom, spec, u);
        let half_bw = beam_width(geom, spec, u) / 2.0;
        let (_, y_k) = u.cartesian();
        for &i in &small {
            if i == owner || users[i].range() < u.range() {
                continue;
            }
            if distribution == UserDistribution::Uniform && (users[i].cartesian().1 - y_k).abs() > half_bw {
                continue;
            }
            if depth.contains_range(u.range(), users[i].range()) {
                raw[owner].insert(i);
            }
        }
    }
    let mut per_user = raw.clone();
    for (owner, set) in raw.iter().enumerate() {
        for &j in set {
            per_user[j].insert(owner);
        }
    }
    Ok(InterferenceSets { raw, per_user, merged_far_set, thresholds })
}
