//! Distributed interpolation-consistency regression: consensus ADMM on the
//! consequent weights with an antecedent fixed by the structure loop.

use std::time::Instant;

use ndarray::{Array1, ArrayView1};
use rayon::prelude::*;

use super::agent::{order_agents, AgentState, ParamCache, WeightReport};
use super::config::AdmmConfig;
use super::topology::Topology;
use super::trace::{Phase, Trace};
use crate::error::{Error, Result};
use crate::fuzzy::{add_diagonal, gram, icr_augment, icr_matrix_with_pool, Antecedent, Cholesky, IcrBatch};
use crate::rng::{self, stream};
use crate::scalar::Real;

#[derive(Debug, Clone)]
pub struct DicrOutcome<T> {
    pub z: Array1<T>,
    pub trace: Trace,
}

/// The interpolation batch agent `agent_id` uses at `iteration`.
///
/// Streams are keyed by `(seed, agent id, iteration)`; with frozen
/// augmentation every iteration reuses iteration zero's batch.
pub fn draw_agent_batch<T: Real>(
    agent: &AgentState<T>,
    cfg: &AdmmConfig<T>,
    iteration: usize,
) -> Result<IcrBatch<T>> {
    let t = if cfg.freeze_augmentation { 0 } else { iteration };
    let seed = rng::derive_seed(cfg.seed, &[stream::ICR, agent.id() as u64, t as u64]);
    icr_augment(agent.unlabeled_rows(), cfg.m_interp, cfg.beta_a, cfg.beta_b, seed)
}

fn local_system<T: Real>(
    cache: &ParamCache<T>,
    cfg: &AdmmConfig<T>,
    ant: &Antecedent<T>,
    batch: Option<&IcrBatch<T>>,
) -> Result<Cholesky<T>> {
    let mut a = cache.hth.clone();
    add_diagonal(&mut a, cfg.mu);
    if let Some(batch) = batch.filter(|_| cfg.gamma > T::zero()) {
        let b = icr_matrix_with_pool(ant, batch, cache.pool_hidden.view())?;
        a.scaled_add(cfg.gamma, &gram(b.view()));
    }
    Cholesky::factor(a.view())
}

fn local_rhs<T: Real>(cache: &ParamCache<T>, z: ArrayView1<'_, T>, dual: ArrayView1<'_, T>, rho: T) -> Array1<T> {
    let mut rhs = cache.hty.clone();
    rhs.scaled_add(rho, &z);
    rhs.scaled_add(-T::one(), &dual);
    rhs
}

/// `w^l = Q (H^T Y + rho_p z - beta_l)` with
/// `Q = (H^T H + gamma B^T B + mu I)^{-1}`, `H` built from the agent's
/// labeled rows and `B` from `batch`.
///
/// [`AgentState::prepare_parameters`] must have been called for `ant`.
pub fn dicr_local_step<T: Real>(
    agent: &mut AgentState<T>,
    z: ArrayView1<'_, T>,
    cfg: &AdmmConfig<T>,
    ant: &Antecedent<T>,
    batch: Option<&IcrBatch<T>>,
) -> Result<()> {
    let cache = agent
        .params
        .as_ref()
        .ok_or_else(|| Error::InvalidInput("agent parameters not prepared".into()))?;
    let q = local_system(cache, cfg, ant, batch)?;
    let w = q.solve(local_rhs(cache, z, agent.dual_w.view(), cfg.rho_p).view())?;
    agent.local_w = w;
    Ok(())
}

/// `z = sum_l (beta_l + rho_p w^l) / (mu + rho_p L)`, summed in report order.
pub fn dicr_global_step<T: Real>(reports: &[WeightReport<'_, T>], cfg: &AdmmConfig<T>) -> Array1<T> {
    assert!(!reports.is_empty(), "aggregator needs at least one report");
    let mut acc = Array1::zeros(reports[0].weights.len());
    for r in reports {
        acc.scaled_add(T::one(), &r.duals);
        acc.scaled_add(cfg.rho_p, &r.weights);
    }
    let den = cfg.mu + cfg.rho_p * T::from_usize_lossy(reports.len());
    acc.mapv(|v| v / den)
}

/// `beta_l += rho_p (w^l - z)`. Returns the norm of the change.
pub fn dicr_dual_step<T: Real>(agent: &mut AgentState<T>, z: ArrayView1<'_, T>, cfg: &AdmmConfig<T>) -> T {
    let mut sq = T::zero();
    for i in 0..agent.dual_w.len() {
        let step = cfg.rho_p * (agent.local_w[i] - z[i]);
        agent.dual_w[i] = agent.dual_w[i] + step;
        sq = sq + step * step;
    }
    sq.sqrt()
}

fn distance<T: Real>(a: ArrayView1<'_, T>, b: ArrayView1<'_, T>) -> T {
    a.iter()
        .zip(b.iter())
        .map(|(&p, &q)| (p - q) * (p - q))
        .sum::<T>()
        .sqrt()
}

/// Runs the parameter consensus loop for a frozen antecedent.
///
/// Each iteration every agent draws its interpolation batch (unless frozen),
/// solves its local system, the aggregator forms `z`, and agents take a dual
/// step. The loop stops once both `max_l ||w^l - z||` and
/// `max_l ||w^l(t) - w^l(t-1)||` are at most `param_tol`. On hitting the cap
/// the `z` with the smallest residual is returned and the trace carries a
/// warning.
pub fn dicr_run<T: Real>(
    agents: &mut [AgentState<T>],
    topology: &Topology,
    cfg: &AdmmConfig<T>,
    ant: &Antecedent<T>,
) -> Result<DicrOutcome<T>> {
    cfg.validate()?;
    order_agents(agents, topology)?;
    let use_icr = cfg.gamma > T::zero();
    agents
        .par_iter_mut()
        .try_for_each(|a| -> Result<()> {
            a.prepare_parameters(ant, use_icr)?;
            if use_icr && a.unlabeled_rows().nrows() == 0 {
                return Err(Error::InvalidInput(format!(
                    "agent {} has no unlabeled rows for interpolation",
                    a.id()
                )));
            }
            Ok(())
        })?;

    // Without fresh batches the local system never changes: factor it once.
    let reuse = cfg.freeze_augmentation || !use_icr;
    if reuse {
        agents.par_iter_mut().try_for_each(|a| -> Result<()> {
            let batch = if use_icr { Some(draw_agent_batch(a, cfg, 0)?) } else { None };
            let cache = a.params.as_mut().expect("prepared above");
            cache.frozen = Some(local_system(cache, cfg, ant, batch.as_ref())?);
            Ok(())
        })?;
    }

    let p = ant.param_count();
    let mut z = Array1::<T>::zeros(p);
    let mut trace = Trace::new(Phase::Parameter);
    let mut best: Option<(T, Array1<T>)> = None;
    let start = Instant::now();

    for t in 1..=cfg.max_iter_parameter {
        let changes: Vec<T> = agents
            .par_iter_mut()
            .map(|a| -> Result<T> {
                let cache = a.params.as_ref().expect("prepared above");
                let rhs = local_rhs(cache, z.view(), a.dual_w.view(), cfg.rho_p);
                let w = match &cache.frozen {
                    Some(q) if reuse => q.solve(rhs.view())?,
                    _ => {
                        let batch = draw_agent_batch(a, cfg, t)?;
                        local_system(cache, cfg, ant, Some(&batch))?.solve(rhs.view())?
                    }
                };
                let change = distance(w.view(), a.local_w.view());
                a.local_w = w;
                Ok(change)
            })
            .collect::<Result<_>>()?;
        let reports: Vec<_> = agents.iter().map(|a| a.weight_report()).collect();
        z = dicr_global_step(&reports, cfg);
        agents
            .par_iter_mut()
            .for_each(|a| {
                dicr_dual_step(a, z.view(), cfg);
            });
        let primal = agents
            .iter()
            .map(|a| distance(a.local_w.view(), z.view()))
            .fold(T::zero(), T::max);
        let change = changes.into_iter().fold(T::zero(), T::max);
        trace.push(
            t,
            primal.to_f64_lossy(),
            change.to_f64_lossy(),
            start.elapsed().as_nanos() as u64,
        );
        if primal <= cfg.param_tol && change <= cfg.param_tol {
            trace.converged = true;
            break;
        }
        let score = primal.max(change);
        if best.as_ref().is_none_or(|(s, _)| score < *s) {
            best = Some((score, z.clone()));
        }
    }
    if !trace.converged {
        if let Some((_, bz)) = best {
            z = bz;
        }
        trace.warning = Some(format!(
            "parameter consensus did not reach tol={} within {} iterations",
            cfg.param_tol, cfg.max_iter_parameter
        ));
    }
    Ok(DicrOutcome { z, trace })
}
