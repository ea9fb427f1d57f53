//! The low-complexity pipeline and the reference schemes it is compared with.

use crate::channel::vector_correlation;
use crate::channel::CorrelationValue;
use crate::geometry::{build_interference_sets, BeamSpec};
use crate::secrecy::{optimal_power_split, LinkPair};
use crate::{CVector, Result};

use super::plan::determine_plan;
use super::sca::{sca_optimize_restricted, AnMode, ScaRestriction};
use super::{
    an_aligned_beamformer, evaluate, mrt_beamformer, AnTag, BeamPlan, BeamTag, BeamformingSolution, SCAConfig,
    Scenario,
};

/// Single-user view of user `k` against the eavesdropper with power `budget`,
/// gains divided by the respective noise powers.
pub fn pairwise_link(scenario: &Scenario, k: usize, budget: f64) -> Result<LinkPair> {
    let h = &scenario.users[k].vector;
    let he = &scenario.eve.vector;
    let rho = vector_correlation(h, he)?.value().max(f64::MIN_POSITIVE);
    LinkPair::new(
        h.norm_squared() / scenario.noise_b[k],
        he.norm_squared() / scenario.noise_e,
        CorrelationValue::new(rho)?,
        1.0,
        budget,
    )
}

/// Interference sets, plan, closed-form MRT/AN splits, then SCA over the
/// users the plan marks for optimization only.
///
/// Each user gets the pairwise optimal split of `P/K`; the AN carries the sum
/// of the per-user AN powers. MRT users keep their powers while the SCA
/// reallocates the rest of the budget between the optimized users and the
/// (eavesdropper-aligned) AN.
pub fn low_complexity_solve(scenario: &Scenario, config: &SCAConfig) -> Result<BeamformingSolution> {
    let k = scenario.num_users();
    let spec = BeamSpec::new(scenario.phi_db)?;
    let sets = build_interference_sets(&scenario.geom, &spec, &scenario.positions(), scenario.distribution())?;
    let plan = determine_plan(scenario, &sets)?;

    let share = scenario.total_power / k as f64;
    let splits = (0..k)
        .map(|i| pairwise_link(scenario, i, share).map(|l| optimal_power_split(&l)))
        .collect::<Result<Vec<_>>>()?;
    let used: f64 = splits.iter().map(|s| s.p_b + s.p_e).sum();
    let fit = if used > scenario.total_power { scenario.total_power / used } else { 1.0 };
    let w = scenario
        .users
        .iter()
        .zip(&splits)
        .map(|(u, s)| mrt_beamformer(&u.vector, s.p_b * fit))
        .collect::<Result<Vec<_>>>()?;
    let z = an_aligned_beamformer(scenario, splits.iter().map(|s| s.p_e).sum::<f64>() * fit)?;
    let closed = evaluate(scenario, &w, &z)?;
    if plan.optimized_count() == 0 {
        return Ok(closed.with_plan(plan));
    }
    let restriction = ScaRestriction {
        free_users: plan.users.iter().map(|&t| t == BeamTag::Optimized).collect(),
        an: AnMode::Aligned,
    };
    Ok(sca_optimize_restricted(scenario, config, &restriction, Some(&closed))?.with_plan(plan))
}

/// Grid quantum of baseline 1 as a fraction of `P`.
pub const BASELINE1_STEPS: usize = 200;

/// MRT beamformers and eavesdropper-aligned AN with only the powers
/// optimised: coordinate descent over `(P_1, …, P_K, P_E, slack)` on a grid of
/// `P/200`, moving one quantum at a time while the sum secrecy improves.
pub fn baseline1(scenario: &Scenario) -> Result<BeamformingSolution> {
    let k = scenario.num_users();
    let q = scenario.total_power / BASELINE1_STEPS as f64;
    let dirs: Vec<CVector> = scenario
        .users
        .iter()
        .map(|u| &u.vector)
        .chain(std::iter::once(&scenario.eve.vector))
        .map(|h| mrt_beamformer(h, 1.0))
        .collect::<Result<_>>()?;
    // |h_kᴴd_i|² per unit power, and the eavesdropper's row
    let gram: Vec<Vec<f64>> =
        scenario.users.iter().map(|u| dirs.iter().map(|d| u.vector.dotc(d).norm_sqr()).collect()).collect();
    let gram_e: Vec<f64> = dirs.iter().map(|d| scenario.eve.vector.dotc(d).norm_sqr()).collect();
    let rate = |units: &[usize]| -> f64 {
        let p: Vec<f64> = units.iter().map(|&u| u as f64 * q).collect();
        let an_e = gram_e[k] * p[k] + scenario.noise_e;
        (0..k)
            .map(|i| {
                let interf: f64 = (0..=k).filter(|&j| j != i).map(|j| gram[i][j] * p[j]).sum::<f64>();
                let r_b = (gram[i][i] * p[i] / (interf + scenario.noise_b[i])).ln_1p();
                let c_e = (gram_e[i] * p[i] / an_e).ln_1p();
                ((r_b - c_e) / std::f64::consts::LN_2).max(0.0)
            })
            .sum()
    };
    let mut units = vec![BASELINE1_STEPS / (k + 1); k + 2];
    units[k + 1] = BASELINE1_STEPS - (k + 1) * (BASELINE1_STEPS / (k + 1));
    let mut best = rate(&units);
    for _ in 0..100 * BASELINE1_STEPS {
        let mut step: Option<(usize, usize, f64)> = None;
        for from in 0..k + 2 {
            if units[from] == 0 {
                continue;
            }
            for to in (0..k + 2).filter(|&b| b != from) {
                units[from] -= 1;
                units[to] += 1;
                let r = rate(&units);
                units[from] += 1;
                units[to] -= 1;
                if r > step.map_or(best, |s| s.2) + 1e-12 {
                    step = Some((from, to, r));
                }
            }
        }
        match step {
            Some((from, to, r)) => {
                units[from] -= 1;
                units[to] += 1;
                best = r;
            }
            None => break,
        }
    }
    let w: Vec<CVector> = (0..k).map(|i| &dirs[i] * crate::Complex64::from((units[i] as f64 * q).sqrt())).collect();
    let z = &dirs[k] * crate::Complex64::from((units[k] as f64 * q).sqrt());
    let plan = BeamPlan { users: vec![BeamTag::Mrt; k], an: AnTag::EveAligned };
    Ok(evaluate(scenario, &w, &z)?.with_plan(plan))
}

/// SCA over every transmit beamformer with the AN pointed at the eavesdropper.
pub fn baseline2(scenario: &Scenario, config: &SCAConfig) -> Result<BeamformingSolution> {
    let k = scenario.num_users();
    let restriction = ScaRestriction { free_users: vec![true; k], an: AnMode::Aligned };
    let plan = BeamPlan { users: vec![BeamTag::Optimized; k], an: AnTag::EveAligned };
    Ok(sca_optimize_restricted(scenario, config, &restriction, None)?.with_plan(plan))
}

/// MRT beamformers at `P/(K+1)` each; only the AN covariance is optimised
/// within the remaining `P/(K+1)`.
pub fn baseline3(scenario: &Scenario, config: &SCAConfig) -> Result<BeamformingSolution> {
    let k = scenario.num_users();
    let restriction = ScaRestriction { free_users: vec![false; k], an: AnMode::Free };
    let plan = BeamPlan { users: vec![BeamTag::Mrt; k], an: AnTag::Optimized };
    Ok(sca_optimize_restricted(scenario, config, &restriction, None)?.with_plan(plan))
}
