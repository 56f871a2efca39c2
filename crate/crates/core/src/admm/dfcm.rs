//! Distributed fuzzy c-means: consensus ADMM on the rule centers.

use std::time::Instant;

use ndarray::{Array2, ArrayView2};
use rayon::prelude::*;

use super::agent::{order_agents, AgentState, CenterReport, GlobalState, SpreadReport};
use super::config::AdmmConfig;
use super::topology::Topology;
use super::trace::{Phase, Trace};
use crate::error::{Error, Result};
use crate::fuzzy::{initial_centers, sigmas_from, update_memberships, weighted_sums, SIGMA_MIN};
use crate::scalar::Real;

#[derive(Debug, Clone)]
pub struct DfcmOutcome<T> {
    /// Global centers and global sigmas.
    pub global: GlobalState<T>,
    pub trace: Trace,
}

/// Membership update against the agent's own centers, then the closed-form
/// local center update
/// `m_k = (sum_i u_ik^a X_i - lambda_k + rho_s r_k) / (sum_i u_ik^a + rho_s)`.
pub fn dfcm_local_step<T: Real>(agent: &mut AgentState<T>, global: &GlobalState<T>, cfg: &AdmmConfig<T>) {
    let x = agent.structure_rows();
    let u = update_memberships(x, agent.local_centers.view(), cfg.fuzziness);
    let (sums, mass) = weighted_sums(x, u.view(), cfg.fuzziness);
    let mut centers = Array2::zeros(agent.local_centers.dim());
    for (k, mut row) in centers.outer_iter_mut().enumerate() {
        let den = mass[k] + cfg.rho_s;
        for j in 0..row.len() {
            let num = sums[[k, j]] - agent.dual_centers[[k, j]] + cfg.rho_s * global.centers[[k, j]];
            row[j] = num / den;
        }
    }
    agent.local_memberships = u;
    agent.local_centers = centers;
}

/// `r_k = mean_l(lambda_kl) / rho_s + mean_l(m_k^l)`, summed in report order.
pub fn dfcm_global_step<T: Real>(reports: &[CenterReport<'_, T>], cfg: &AdmmConfig<T>) -> Array2<T> {
    assert!(!reports.is_empty(), "aggregator needs at least one report");
    let l = T::from_usize_lossy(reports.len());
    let mut center_sum = Array2::zeros(reports[0].centers.dim());
    let mut dual_sum = Array2::zeros(reports[0].duals.dim());
    for r in reports {
        center_sum.scaled_add(T::one(), &r.centers);
        dual_sum.scaled_add(T::one(), &r.duals);
    }
    let mut out = Array2::zeros(center_sum.dim());
    ndarray::Zip::from(&mut out)
        .and(&center_sum)
        .and(&dual_sum)
        .for_each(|o, &m, &lam| *o = (lam / l) / cfg.rho_s + m / l);
    out
}

/// Dual ascent `lambda += rho_s (m^l - r)`. Returns the largest per-center
/// change norm.
pub fn dfcm_dual_step<T: Real>(
    agent: &mut AgentState<T>,
    global: &GlobalState<T>,
    cfg: &AdmmConfig<T>,
) -> T {
    let mut worst = T::zero();
    for k in 0..agent.dual_centers.nrows() {
        let mut sq = T::zero();
        for j in 0..agent.dual_centers.ncols() {
            let step = cfg.rho_s * (agent.local_centers[[k, j]] - global.centers[[k, j]]);
            agent.dual_centers[[k, j]] = agent.dual_centers[[k, j]] + step;
            sq = sq + step * step;
        }
        worst = worst.max(sq.sqrt());
    }
    worst
}

/// `sigma_kj = sqrt(sum_l |C^l| (sigma^l_kj)^2 / N)` with `N = sum_l |C^l|`.
pub fn global_sigmas<T: Real>(reports: &[SpreadReport<'_, T>]) -> Array2<T> {
    assert!(!reports.is_empty(), "aggregator needs at least one report");
    let total = T::from_usize_lossy(reports.iter().map(|r| r.cardinality).sum());
    let mut acc = Array2::<T>::zeros(reports[0].sigmas.dim());
    for r in reports {
        let n = T::from_usize_lossy(r.cardinality);
        acc.zip_mut_with(&r.sigmas, |a, &s| *a = *a + n * s * s);
    }
    let floor = T::of(SIGMA_MIN);
    acc.mapv(|v| (v / total).sqrt().max(floor))
}

pub(crate) fn max_pairwise_disagreement<T: Real>(centers: &[ArrayView2<'_, T>]) -> T {
    let mut worst = T::zero();
    for (a, ca) in centers.iter().enumerate() {
        for cb in &centers[a + 1..] {
            for (ra, rb) in ca.outer_iter().zip(cb.outer_iter()) {
                let d: T = ra
                    .iter()
                    .zip(rb.iter())
                    .map(|(&p, &q)| (p - q) * (p - q))
                    .sum();
                worst = worst.max(d.sqrt());
            }
        }
    }
    worst
}

fn max_row_distance<T: Real>(a: ArrayView2<'_, T>, b: ArrayView2<'_, T>) -> T {
    max_pairwise_disagreement(&[a, b])
}

struct Snapshot<T> {
    score: T,
    global: Array2<T>,
    local: Vec<(Array2<T>, Array2<T>)>,
}

/// Runs the structure-learning consensus loop to convergence or the cap,
/// then computes local and global membership widths.
///
/// The agent with the smallest id draws `K` distinct initial centers from
/// its own rows with `cfg.seed`; every agent and the aggregator start from
/// those. The loop stops once center disagreement is within `eps1`, the
/// dual change within `eps2` and the global centers move by at most `eps1`.
/// If the cap is reached the iterate with the smallest scaled residual is
/// restored and the trace carries a warning.
pub fn dfcm_run<T: Real>(
    agents: &mut [AgentState<T>],
    topology: &Topology,
    cfg: &AdmmConfig<T>,
) -> Result<DfcmOutcome<T>> {
    cfg.validate()?;
    order_agents(agents, topology)?;
    let leader = agents
        .iter()
        .min_by_key(|a| a.id())
        .ok_or_else(|| Error::InvalidConfig("no agents".into()))?;
    if leader.structure_rows().nrows() < cfg.rules {
        return Err(Error::param(
            "rules",
            format!(
                "agent {} holds {} rows, cannot seed {} centers",
                leader.id(),
                leader.structure_rows().nrows(),
                cfg.rules
            ),
        ));
    }
    let init = initial_centers(leader.structure_rows(), cfg.rules, cfg.seed);
    for a in agents.iter_mut() {
        if a.local_centers.dim() != init.dim() {
            return Err(Error::DimensionMismatch(format!(
                "agent {} has centers {:?}, expected {:?}",
                a.id(),
                a.local_centers.dim(),
                init.dim()
            )));
        }
        a.local_centers = init.clone();
        a.dual_centers = Array2::zeros(init.dim());
    }
    let mut global = GlobalState::with_centers(init);
    let mut trace = Trace::new(Phase::Structure);
    let mut best: Option<Snapshot<T>> = None;
    let start = Instant::now();

    for t in 1..=cfg.max_iter_structure {
        agents
            .par_iter_mut()
            .for_each(|a| dfcm_local_step(a, &global, cfg));
        let reports: Vec<_> = agents.iter().map(|a| a.center_report()).collect();
        let next = dfcm_global_step(&reports, cfg);
        let shift = max_row_distance(global.centers.view(), next.view());
        global.centers = next;
        let dual_change = agents
            .par_iter_mut()
            .map(|a| dfcm_dual_step(a, &global, cfg))
            .collect::<Vec<_>>()
            .into_iter()
            .fold(T::zero(), T::max);
        let locals: Vec<_> = agents.iter().map(|a| a.local_centers.view()).collect();
        let primal = max_pairwise_disagreement(&locals);
        trace.push(
            t,
            primal.to_f64_lossy(),
            dual_change.to_f64_lossy(),
            start.elapsed().as_nanos() as u64,
        );
        if primal <= cfg.eps1 && dual_change <= cfg.eps2 && shift <= cfg.eps1 {
            trace.converged = true;
            break;
        }
        let score = (primal / cfg.eps1).max(dual_change / cfg.eps2);
        if best.as_ref().is_none_or(|b| score < b.score) {
            best = Some(Snapshot {
                score,
                global: global.centers.clone(),
                local: agents
                    .iter()
                    .map(|a| (a.local_centers.clone(), a.local_memberships.clone()))
                    .collect(),
            });
        }
    }

    if !trace.converged {
        if let Some(snap) = best {
            global.centers = snap.global;
            for (a, (c, u)) in agents.iter_mut().zip(snap.local) {
                a.local_centers = c;
                a.local_memberships = u;
            }
        }
        trace.warning = Some(format!(
            "structure consensus did not reach eps1={} / eps2={} within {} iterations",
            cfg.eps1, cfg.eps2, cfg.max_iter_structure
        ));
    }

    agents.par_iter_mut().for_each(|a| {
        a.local_sigmas = sigmas_from(
            a.structure_rows(),
            a.local_memberships.view(),
            a.local_centers.view(),
            cfg.fuzziness,
        );
    });
    let spreads: Vec<_> = agents.iter().map(|a| a.spread_report()).collect();
    global.sigmas = Some(global_sigmas(&spreads));
    Ok(DfcmOutcome { global, trace })
}
