//! Turning configured positions into channel realizations.

use nfsec_core::beamformer::Scenario;
use nfsec_core::channel::{multipath_channel, ArrayGeometry, PolarPosition};
use nfsec_core::rng::{derive_seed, seeded};
use rand::Rng;

use crate::config::{ExperimentConfig, PositionUnit, SweepAxis};
use crate::error::Result;

/// Stream index of the eavesdropper's scattering draw.
const EVE_STREAM: u64 = u64::MAX;

pub fn geometry(cfg: &ExperimentConfig) -> Result<ArrayGeometry> {
    Ok(ArrayGeometry::new(cfg.array.num_antennas, cfg.array.carrier_ghz * 1e9)?)
}

pub fn resolve_position(geom: &ArrayGeometry, unit: PositionUnit, [theta, r]: [f64; 2]) -> Result<PolarPosition> {
    let range = match unit {
        PositionUnit::Rayleigh => r * geom.rayleigh_distance(),
        PositionUnit::Meters => r,
    };
    if range < geom.fresnel_distance() || range > geom.rayleigh_distance() {
        log::warn!(
            "position ({theta}, {range:.4} m) lies outside the near field [{:.4}, {:.4}] m",
            geom.fresnel_distance(),
            geom.rayleigh_distance()
        );
    }
    Ok(PolarPosition::new(theta, range)?)
}

/// `k` ranges equally spaced over `[near, far]`, farthest first.
pub fn descending_ranges(k: usize, [near, far]: [f64; 2]) -> Vec<f64> {
    match k {
        0 => Vec::new(),
        1 => vec![far],
        _ => (0..k).map(|i| far - (far - near) * i as f64 / (k - 1) as f64).collect(),
    }
}

/// Copy of `cfg` with the sweep axis set to `value`.
pub fn at_sweep_value(cfg: &ExperimentConfig, value: f64) -> ExperimentConfig {
    let mut c = cfg.clone();
    match cfg.sweep.axis {
        SweepAxis::None | SweepAxis::AnFraction => {}
        SweepAxis::PowerDbm => c.power.total_dbm = value,
        SweepAxis::NumUsers => {
            c.positions.users =
                descending_ranges(value as usize, cfg.positions.user_interval).into_iter().map(|r| [0.0, r]).collect();
        }
        SweepAxis::UserAngle => c.positions.users[cfg.sweep.user][0] = value,
        SweepAxis::UserRange => c.positions.users[cfg.sweep.user][1] = value,
    }
    c
}

/// Scenario of `cfg` with the scattering drawn from `seed`.
pub fn build_scenario(cfg: &ExperimentConfig, seed: u64) -> Result<Scenario> {
    let geom = geometry(cfg)?;
    let channel = |pos: [f64; 2], stream: u64| -> Result<_> {
        let p = resolve_position(&geom, cfg.positions.unit, pos)?;
        Ok(multipath_channel(&geom, &p, cfg.channel.nlos_paths, cfg.channel.kappa_db, derive_seed(seed, stream))?)
    };
    let users =
        cfg.positions.users.iter().enumerate().map(|(i, &p)| channel(p, i as u64)).collect::<Result<Vec<_>>>()?;
    let eve = channel(cfg.positions.eve, EVE_STREAM)?;
    let k = users.len();
    Ok(Scenario::new(geom, users, eve, cfg.total_power_w(), vec![cfg.noise_w(); k], cfg.noise_w(), cfg.beam.phi_db)?)
}

/// `K` users and one eavesdropper placed uniformly in spatial angle on
/// `(−1, 1)` and in range on `[r_Fre, r_Ray)`, with `cfg`'s array, powers and
/// scattering.
pub fn random_scenario(cfg: &ExperimentConfig, num_users: usize, seed: u64) -> Result<Scenario> {
    let geom = geometry(cfg)?;
    let mut rng = seeded(seed);
    let mut draw = || [rng.random_range(-0.999..0.999), rng.random_range(geom.fresnel_distance()..geom.rayleigh_distance())];
    let mut c = cfg.clone();
    c.positions.unit = PositionUnit::Meters;
    c.positions.users = (0..num_users).map(|_| draw()).collect();
    c.positions.eve = draw();
    build_scenario(&c, derive_seed(seed, 1))
}
