//! Deciding which beamformers can stay MRT and which need optimization.

use crate::geometry::InterferenceSets;
use crate::secrecy::min_an_power;
use crate::Result;

use super::schemes::pairwise_link;
use super::{AnTag, BeamPlan, BeamTag, Scenario};

/// Connected components of the interference graph (symmetrised sets plus the
/// far group), each sorted by index, ordered by their smallest index.
pub fn clusters(sets: &InterferenceSets) -> Vec<Vec<usize>> {
    let k = sets.num_users();
    let mut label = vec![usize::MAX; k];
    let mut out = Vec::new();
    for root in 0..k {
        if label[root] != usize::MAX {
            continue;
        }
        let id = out.len();
        let mut stack = vec![root];
        let mut members = Vec::new();
        label[root] = id;
        while let Some(i) = stack.pop() {
            members.push(i);
            for j in (0..k).filter(|&j| sets.interferes(i, j)) {
                if label[j] == usize::MAX {
                    label[j] = id;
                    stack.push(j);
                }
            }
        }
        members.sort_unstable();
        out.push(members);
    }
    out
}

/// Plan from the interference sets, user ranges and each user's minimum AN
/// power against the eavesdropper (`Some(0)` secure, `None` unrecoverable).
///
/// * every cluster a single user: optimize exactly the insecure users;
/// * one interference set holding everyone: optimize the user with the
///   smallest `P_E,min`;
/// * otherwise, per cluster: a lone user follows the first rule and the far
///   group the second. A near cluster is walked in ascending range: its
///   nearest user is optimized only if insecure, later users with a non-empty
///   set are MRT, and among the remaining (terminal) users the one with the
///   smallest `P_E,min` is optimized.
///
/// Ties go to the lower index.
pub fn plan_from_requirements(sets: &InterferenceSets, ranges: &[f64], p_e_min: &[Option<f64>]) -> BeamPlan {
    let k = sets.num_users();
    let insecure = |i: usize| p_e_min[i] != Some(0.0);
    let cost = |i: usize| p_e_min[i].unwrap_or(f64::INFINITY);
    let pick = |members: &[usize]| {
        members.iter().copied().fold(None, |best: Option<usize>, i| match best {
            Some(b) if cost(b) < cost(i) || (cost(b) == cost(i) && b < i) => Some(b),
            _ => Some(i),
        })
    };
    let comps = clusters(sets);
    let mut users = vec![BeamTag::Mrt; k];
    let mut mark = |i: Option<usize>| {
        if let Some(i) = i {
            users[i] = BeamTag::Optimized;
        }
    };
    let one_set_holds_all = sets.merged_far_set.len() == k || (0..k).any(|i| sets.raw[i].len() + 1 == k);
    if one_set_holds_all && k > 1 {
        mark(pick(&comps[0]));
    } else {
        for comp in &comps {
            if comp.len() == 1 {
                if insecure(comp[0]) {
                    mark(Some(comp[0]));
                }
            } else if comp.iter().all(|i| sets.merged_far_set.contains(i)) {
                mark(pick(comp));
            } else {
                let mut order = comp.clone();
                order.sort_by(|&a, &b| ranges[a].total_cmp(&ranges[b]).then(a.cmp(&b)));
                if insecure(order[0]) {
                    mark(Some(order[0]));
                }
                let rest = &order[1..];
                let terminal: Vec<usize> = rest.iter().copied().filter(|&i| sets.raw[i].is_empty()).collect();
                mark(pick(if terminal.is_empty() { rest } else { &terminal }));
            }
        }
    }
    BeamPlan { users, an: AnTag::EveAligned }
}

pub fn determine_plan(scenario: &Scenario, sets: &InterferenceSets) -> Result<BeamPlan> {
    let ranges: Vec<f64> = scenario.users.iter().map(|u| u.position.range()).collect();
    let p_e_min = (0..scenario.num_users())
        .map(|k| pairwise_link(scenario, k, scenario.total_power).map(|l| min_an_power(&l)))
        .collect::<Result<Vec<_>>>()?;
    Ok(plan_from_requirements(sets, &ranges, &p_e_min))
}
