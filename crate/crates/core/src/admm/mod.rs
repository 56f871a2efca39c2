//! In-process simulation of consensus ADMM over agents with private shards.
//!
//! Each iteration is bulk-synchronous: every agent runs its local update
//! (in parallel), a single aggregator combines the agents' reports in agent
//! order, and the agents then update their dual variables. Aggregators only
//! ever see the report types in [`agent`], which carry parameters, duals
//! and shard cardinalities but no samples.

pub mod agent;
mod config;
mod dfcm;
mod dicr;
mod shard;
mod topology;
mod trace;

pub use agent::{AgentState, CenterReport, GlobalState, SpreadReport, StructureRows, WeightReport};
pub use config::AdmmConfig;
pub use dfcm::{
    dfcm_dual_step, dfcm_global_step, dfcm_local_step, dfcm_run, global_sigmas, DfcmOutcome,
};
pub use dicr::{
    dicr_dual_step, dicr_global_step, dicr_local_step, dicr_run, draw_agent_batch, DicrOutcome,
};
pub use shard::{shard_dataset, shard_indices};
pub use topology::Topology;
pub use trace::{Phase, Trace, TraceRecord};
