//! Wall-clock comparison of the proposed pipeline with the full optimizer.

use std::time::Instant;

use nfsec_core::beamformer::{low_complexity_solve, sca_optimize};
use serde::{Deserialize, Serialize};

use crate::config::{ExperimentConfig, SweepAxis};
use crate::error::Result;
use crate::scenario::{at_sweep_value, build_scenario};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub num_users: usize,
    pub num_antennas: usize,
    pub reps: usize,
    /// Median wall-clock seconds.
    pub conventional_s: f64,
    pub proposed_s: f64,
    /// `proposed_s / conventional_s`.
    pub ratio: f64,
    pub conventional_rate: f64,
    pub proposed_rate: f64,
    pub proposed_opt_count: usize,
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Times both schemes `cfg.bench_reps` times for every user count in
/// `cfg.bench_users`, placing the users by the equally spaced descending rule.
/// Runs sequentially on the calling thread.
pub fn bench_runtime(cfg: &ExperimentConfig) -> Result<Vec<BenchRow>> {
    cfg.validate()?;
    let mut base = cfg.clone();
    base.sweep.axis = SweepAxis::NumUsers;
    let seed = cfg.seeds[0];
    let mut rows = Vec::new();
    for &k in &cfg.bench_users {
        let point = at_sweep_value(&base, k as f64);
        let scenario = build_scenario(&point, seed)?;
        let (mut conv_t, mut prop_t) = (Vec::new(), Vec::new());
        let (mut conv_rate, mut prop_rate, mut count) = (0.0, 0.0, 0);
        for _ in 0..cfg.bench_reps {
            let t = Instant::now();
            conv_rate = sca_optimize(&scenario, &cfg.sca, None)?.sum_secrecy;
            conv_t.push(t.elapsed().as_secs_f64());
            let t = Instant::now();
            let sol = low_complexity_solve(&scenario, &cfg.sca)?;
            prop_t.push(t.elapsed().as_secs_f64());
            prop_rate = sol.sum_secrecy;
            count = sol.plan.as_ref().map_or(0, |p| p.optimized_count());
        }
        let (c, p) = (median(conv_t), median(prop_t));
        rows.push(BenchRow {
            num_users: k,
            num_antennas: cfg.array.num_antennas,
            reps: cfg.bench_reps,
            conventional_s: c,
            proposed_s: p,
            ratio: p / c,
            conventional_rate: conv_rate,
            proposed_rate: prop_rate,
            proposed_opt_count: count,
        });
    }
    Ok(rows)
}
