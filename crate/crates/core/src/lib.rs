//! Distributed semi-supervised Takagi–Sugeno fuzzy regression.
//!
//! The crate is organised in three layers:
//!
//! * [`fuzzy`]: centralized building blocks. Gaussian antecedents, firing
//!   strengths, fuzzy c-means, the hidden (design) matrix, interpolation
//!   consistency batches and the closed-form least-squares solvers.
//! * [`admm`]: an in-process simulation of agents holding private data
//!   shards, running consensus ADMM for both the rule structure (distributed
//!   fuzzy c-means) and the consequent weights (distributed
//!   interpolation-consistency regression).
//! * [`bench`]: dataset ingestion, normalization, cross-validation, the
//!   artificial benchmark generator, metrics and experiment orchestration.
//!
//! All numerical code is generic over [`Real`] (`f32` or `f64`). The
//! `*64` aliases below pin the common double-precision instantiations.

// `!(x > 0)` guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod admm;
pub mod bench;
pub mod error;
pub mod fuzzy;
pub mod model;
pub mod rng;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::Real;

pub use admm::{AdmmConfig, AgentState, GlobalState, Topology};
pub use bench::{Dataset, ExperimentConfig, RunReport};
pub use fuzzy::{Antecedent, ConsequentWeights, IcrBatch, MembershipMatrix};
pub use model::FuzzyModel;

pub type Dataset64 = Dataset<f64>;
pub type Dataset32 = Dataset<f32>;
pub type Antecedent64 = Antecedent<f64>;
pub type Antecedent32 = Antecedent<f32>;
pub type ConsequentWeights64 = ConsequentWeights<f64>;
pub type ConsequentWeights32 = ConsequentWeights<f32>;
pub type MembershipMatrix64 = MembershipMatrix<f64>;
pub type IcrBatch64 = IcrBatch<f64>;
pub type AdmmConfig64 = AdmmConfig<f64>;
pub type AgentState64 = AgentState<f64>;
pub type FuzzyModel64 = FuzzyModel<f64>;
pub type FuzzyModel32 = FuzzyModel<f32>;
