//! Sweeps over configured scenarios.

use std::collections::BTreeMap;
use std::time::Instant;

use nfsec_core::beamformer::{
    baseline1, baseline2, baseline3, low_complexity_solve, pairwise_link, sca_optimize, BeamformingSolution, Scenario,
};
use nfsec_core::secrecy::{diagnose, optimal_power_split, secrecy_rate_mrt, secrecy_rate_no_an, PowerSplit, SecrecyCase};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{ExperimentConfig, Scheme, SweepAxis};
use crate::error::{HarnessError, Result};
use crate::output::round9;
use crate::scenario::{at_sweep_value, build_scenario};

/// One scheme on one sweep point and seed. Floats are held at nine
/// significant digits so emitted files parse back to identical rows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub sweep: f64,
    pub scheme: String,
    pub rate_bps_hz: f64,
    pub runtime_s: f64,
    pub opt_count: usize,
    pub seed: u64,
    pub num_antennas: usize,
    pub power_w: f64,
    pub budget_w: f64,
    pub iterations: usize,
    /// SCA objective per outer iteration (minimized).
    pub objective_history: Vec<f64>,
    /// `class: message` when the scheme failed; the numeric fields are then zero.
    pub error: Option<String>,
}

impl ResultRow {
    /// Copy with every float at nine significant digits.
    pub fn rounded(mut self) -> Self {
        self.sweep = round9(self.sweep);
        self.rate_bps_hz = round9(self.rate_bps_hz);
        self.runtime_s = round9(self.runtime_s);
        self.power_w = round9(self.power_w);
        self.budget_w = round9(self.budget_w);
        self.objective_history.iter_mut().for_each(|v| *v = round9(*v));
        self
    }

    pub fn is_ok(&self) -> bool {
        self.error.is_none()
    }
}

/// Mean over seeds of one `(sweep, scheme)` cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub sweep: f64,
    pub scheme: String,
    pub mean_rate_bps_hz: f64,
    pub mean_runtime_s: f64,
    pub mean_opt_count: f64,
    pub failures: usize,
}

/// Eavesdropper panel of a single-user curve and the case the closed forms predict for it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PanelInfo {
    pub label: String,
    pub eve: [f64; 2],
    pub case_label: SecrecyCase,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentOutput {
    pub experiment: String,
    pub rows: Vec<ResultRow>,
    pub summary: Vec<SummaryRow>,
    pub panels: Vec<PanelInfo>,
}

struct Outcome {
    rate: f64,
    opt_count: usize,
    iterations: usize,
    history: Vec<f64>,
    power: f64,
}

impl Outcome {
    fn from_solution(sol: BeamformingSolution, opt_count: usize) -> Self {
        Self {
            rate: sol.sum_secrecy,
            opt_count,
            iterations: sol.iterations,
            history: sol.objective_history.clone(),
            power: sol.total_power(),
        }
    }

    fn closed_form(rate: f64, power: f64) -> Self {
        Self { rate: rate.max(0.0), opt_count: 0, iterations: 0, history: Vec::new(), power }
    }
}

fn single_user(s: &Scenario, scheme: Scheme) -> Result<()> {
    if s.num_users() != 1 {
        return Err(HarnessError::Config(format!("{} needs exactly one user, got {}", scheme.name(), s.num_users())));
    }
    Ok(())
}

/// `an_fraction` fixes the AN share for the single-user curves.
fn run_scheme(scheme: Scheme, s: &Scenario, cfg: &ExperimentConfig, an_fraction: Option<f64>) -> Result<Outcome> {
    let k = s.num_users();
    let p = s.total_power;
    Ok(match scheme {
        Scheme::Conventional => Outcome::from_solution(sca_optimize(s, &cfg.sca, None)?, k),
        Scheme::Proposed => {
            let sol = low_complexity_solve(s, &cfg.sca)?;
            let count = sol.plan.as_ref().map_or(0, |plan| plan.optimized_count());
            Outcome::from_solution(sol, count)
        }
        Scheme::Baseline1 => Outcome::from_solution(baseline1(s)?, 0),
        Scheme::Baseline2 => Outcome::from_solution(baseline2(s, &cfg.sca)?, k),
        Scheme::Baseline3 => Outcome::from_solution(baseline3(s, &cfg.sca)?, 0),
        Scheme::OptimalAn => {
            single_user(s, scheme)?;
            let link = pairwise_link(s, 0, p)?;
            let split = match an_fraction {
                Some(f) => PowerSplit::full(&link, f * p),
                None => optimal_power_split(&link),
            };
            Outcome::closed_form(secrecy_rate_mrt(&link, split), p)
        }
        Scheme::NoAn => {
            single_user(s, scheme)?;
            Outcome::closed_form(secrecy_rate_no_an(&pairwise_link(s, 0, p)?, p), p)
        }
    })
}

fn panel_label(i: usize) -> String {
    format!("panel_{}", (b'a' + (i % 26) as u8) as char)
}

struct Job {
    sweep: f64,
    seed: u64,
    /// `(label, config)` per curve; several only when panels are configured.
    variants: Vec<(Option<String>, ExperimentConfig)>,
}

fn run_job(job: &Job, cfg: &ExperimentConfig) -> Vec<ResultRow> {
    let an_fraction = (cfg.sweep.axis == SweepAxis::AnFraction).then_some(job.sweep);
    let mut rows = Vec::new();
    for (label, point) in &job.variants {
        let scenario = build_scenario(point, job.seed);
        for &scheme in &cfg.schemes {
            let name = label.clone().unwrap_or_else(|| scheme.name().to_string());
            let start = Instant::now();
            let result = match &scenario {
                Ok(s) => run_scheme(scheme, s, point, an_fraction),
                Err(e) => Err(HarnessError::Config(e.to_string())),
            };
            let runtime = start.elapsed().as_secs_f64().max(1e-9);
            let budget = point.total_power_w();
            let row = match result {
                Ok(o) => ResultRow {
                    sweep: job.sweep,
                    scheme: name,
                    rate_bps_hz: o.rate,
                    runtime_s: runtime,
                    opt_count: o.opt_count,
                    seed: job.seed,
                    num_antennas: point.array.num_antennas,
                    power_w: o.power,
                    budget_w: budget,
                    iterations: o.iterations,
                    objective_history: o.history,
                    error: None,
                },
                Err(e) => {
                    log::warn!("{} at sweep {} seed {}: {e}", scheme.name(), job.sweep, job.seed);
                    ResultRow {
                        sweep: job.sweep,
                        scheme: name,
                        rate_bps_hz: 0.0,
                        runtime_s: runtime,
                        opt_count: 0,
                        seed: job.seed,
                        num_antennas: point.array.num_antennas,
                        power_w: 0.0,
                        budget_w: budget,
                        iterations: 0,
                        objective_history: Vec::new(),
                        error: Some(format!("{}: {e}", e.class())),
                    }
                }
            };
            rows.push(row.rounded());
        }
    }
    rows
}

/// Runs every sweep point and seed, in parallel on the current rayon pool.
/// Rows are ordered by sweep index, then seed, then curve and scheme.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
    cfg.validate()?;
    let mut jobs = Vec::new();
    for value in cfg.sweep.points() {
        let point = at_sweep_value(cfg, value);
        let variants = if cfg.positions.panels.is_empty() {
            vec![(None, point)]
        } else {
            cfg.positions
                .panels
                .iter()
                .enumerate()
                .map(|(i, &eve)| {
                    let mut c = point.clone();
                    c.positions.eve = eve;
                    (Some(panel_label(i)), c)
                })
                .collect()
        };
        for &seed in &cfg.seeds {
            jobs.push(Job { sweep: value, seed, variants: variants.clone() });
        }
    }
    let rows: Vec<ResultRow> = jobs.par_iter().map(|job| run_job(job, cfg)).collect::<Vec<_>>().concat();

    let mut panels = Vec::new();
    for (i, &eve) in cfg.positions.panels.iter().enumerate() {
        let mut c = cfg.clone();
        c.positions.eve = eve;
        let s = build_scenario(&c, cfg.seeds[0])?;
        let case_label = diagnose(&pairwise_link(&s, 0, s.total_power)?).case_label;
        panels.push(PanelInfo { label: panel_label(i), eve, case_label });
    }

    Ok(ExperimentOutput { experiment: cfg.experiment.name().to_string(), summary: summarize(&rows), rows, panels })
}

/// Seed averages per `(sweep, scheme)`, in first-appearance order. Failed
/// rows are counted but left out of the means.
pub fn summarize(rows: &[ResultRow]) -> Vec<SummaryRow> {
    let mut order: Vec<(u64, String)> = Vec::new();
    let mut acc: BTreeMap<(u64, String), (f64, f64, f64, usize, usize)> = BTreeMap::new();
    for r in rows {
        let key = (r.sweep.to_bits(), r.scheme.clone());
        let e = acc.entry(key.clone()).or_insert_with(|| {
            order.push(key);
            (0.0, 0.0, 0.0, 0, 0)
        });
        if r.is_ok() {
            e.0 += r.rate_bps_hz;
            e.1 += r.runtime_s;
            e.2 += r.opt_count as f64;
            e.3 += 1;
        } else {
            e.4 += 1;
        }
    }
    order
        .into_iter()
        .map(|key| {
            let (rate, time, count, n, failures) = acc[&key];
            let m = n.max(1) as f64;
            SummaryRow {
                sweep: f64::from_bits(key.0),
                scheme: key.1,
                mean_rate_bps_hz: rate / m,
                mean_runtime_s: time / m,
                mean_opt_count: count / m,
                failures,
            }
        })
        .collect()
}

/// Mean-rate curve of one scheme, in sweep order.
pub fn curve(summary: &[SummaryRow], scheme: &str) -> Vec<(f64, f64)> {
    summary.iter().filter(|s| s.scheme == scheme).map(|s| (s.sweep, s.mean_rate_bps_hz)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::ExperimentId;

    #[test]
    fn closed_form_curves_on_one_seed() {
        let mut cfg = ExperimentConfig::preset(ExperimentId::Fig4);
        cfg.sweep.linspace = Some((-0.05, 0.05, 5));
        let out = run_experiment(&cfg).unwrap();
        assert_eq!(out.rows.len(), 10);
        assert!(out.rows.iter().all(|r| r.is_ok() && r.rate_bps_hz >= 0.0 && r.runtime_s > 0.0));
        for (a, b) in curve(&out.summary, "optimal_an").iter().zip(curve(&out.summary, "no_an")) {
            assert!(a.1 >= b.1);
        }
    }

    #[test]
    fn wrong_user_count_becomes_row_error() {
        let mut cfg = ExperimentConfig::preset(ExperimentId::Custom);
        cfg.schemes = vec![Scheme::NoAn];
        let out = run_experiment(&cfg).unwrap();
        assert!(out.rows.iter().all(|r| r.error.as_deref().is_some_and(|e| e.starts_with("config"))));
    }
}
