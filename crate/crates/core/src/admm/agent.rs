//! Agent-local state and the reports agents hand to the aggregator.

use ndarray::{Array1, Array2, ArrayView1, ArrayView2};

use super::topology::Topology;
use crate::bench::Dataset;
use crate::error::{Error, Result};
use crate::fuzzy::{gram, hidden_matrix, Antecedent, Cholesky};
use crate::scalar::Real;

/// Which local rows take part in structure learning.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StructureRows {
    /// Labeled and unlabeled features.
    All,
    /// Labeled features only (fully supervised pipeline).
    LabeledOnly,
}

/// One agent: a private shard plus its local primal and dual variables.
#[derive(Debug, Clone)]
pub struct AgentState<T> {
    id: usize,
    shard: Dataset<T>,
    structure_x: Array2<T>,
    labeled_x: Array2<T>,
    labeled_y: Array1<T>,
    unlabeled_x: Array2<T>,

    pub(crate) local_centers: Array2<T>,
    pub(crate) local_memberships: Array2<T>,
    pub(crate) local_sigmas: Array2<T>,
    pub(crate) dual_centers: Array2<T>,
    pub(crate) local_w: Array1<T>,
    pub(crate) dual_w: Array1<T>,

    pub(crate) params: Option<ParamCache<T>>,
}

/// Per-agent quantities that stay fixed while the antecedent is frozen.
#[derive(Debug, Clone)]
pub(crate) struct ParamCache<T> {
    pub hth: Array2<T>,
    pub hty: Array1<T>,
    /// `H(U^l)`, used to assemble interpolation rows without recomputing
    /// the endpoints.
    pub pool_hidden: Array2<T>,
    pub frozen: Option<Cholesky<T>>,
}

impl<T: Real> AgentState<T> {
    /// `id` keys the agent's random streams; it must be unique per run.
    pub fn new(id: usize, shard: Dataset<T>, rules: usize, rows: StructureRows) -> Result<Self> {
        let structure_x = match rows {
            StructureRows::All => shard.features().to_owned(),
            StructureRows::LabeledOnly => shard.labeled_features(),
        };
        if structure_x.nrows() == 0 {
            return Err(Error::InvalidInput(format!(
                "agent {id} has no rows for structure learning"
            )));
        }
        let d = shard.dim();
        let n = structure_x.nrows();
        Ok(Self {
            id,
            labeled_x: shard.labeled_features(),
            labeled_y: shard.labeled_targets(),
            unlabeled_x: shard.unlabeled_features(),
            structure_x,
            shard,
            local_centers: Array2::zeros((rules, d)),
            local_memberships: Array2::zeros((n, rules)),
            local_sigmas: Array2::ones((rules, d)),
            dual_centers: Array2::zeros((rules, d)),
            local_w: Array1::zeros(rules * (d + 1)),
            dual_w: Array1::zeros(rules * (d + 1)),
            params: None,
        })
    }

    pub fn id(&self) -> usize {
        self.id
    }

    pub fn shard(&self) -> &Dataset<T> {
        &self.shard
    }

    pub fn structure_rows(&self) -> ArrayView2<'_, T> {
        self.structure_x.view()
    }

    pub fn labeled_rows(&self) -> (ArrayView2<'_, T>, ArrayView1<'_, T>) {
        (self.labeled_x.view(), self.labeled_y.view())
    }

    pub fn unlabeled_rows(&self) -> ArrayView2<'_, T> {
        self.unlabeled_x.view()
    }

    pub fn local_centers(&self) -> ArrayView2<'_, T> {
        self.local_centers.view()
    }

    pub fn local_memberships(&self) -> ArrayView2<'_, T> {
        self.local_memberships.view()
    }

    pub fn local_sigmas(&self) -> ArrayView2<'_, T> {
        self.local_sigmas.view()
    }

    pub fn dual_centers(&self) -> ArrayView2<'_, T> {
        self.dual_centers.view()
    }

    pub fn local_w(&self) -> ArrayView1<'_, T> {
        self.local_w.view()
    }

    pub fn dual_w(&self) -> ArrayView1<'_, T> {
        self.dual_w.view()
    }

    pub fn set_local_centers(&mut self, centers: Array2<T>) {
        assert_eq!(centers.dim(), self.local_centers.dim());
        self.local_centers = centers;
    }

    pub fn set_dual_centers(&mut self, duals: Array2<T>) {
        assert_eq!(duals.dim(), self.dual_centers.dim());
        self.dual_centers = duals;
    }

    pub fn set_dual_w(&mut self, duals: Array1<T>) {
        assert_eq!(duals.len(), self.dual_w.len());
        self.dual_w = duals;
    }

    pub fn set_local_w(&mut self, w: Array1<T>) {
        assert_eq!(w.len(), self.local_w.len());
        self.local_w = w;
    }

    pub fn center_report(&self) -> CenterReport<'_, T> {
        CenterReport {
            centers: self.local_centers.view(),
            duals: self.dual_centers.view(),
        }
    }

    pub fn spread_report(&self) -> SpreadReport<'_, T> {
        SpreadReport {
            sigmas: self.local_sigmas.view(),
            cardinality: self.structure_x.nrows(),
        }
    }

    pub fn weight_report(&self) -> WeightReport<'_, T> {
        WeightReport {
            weights: self.local_w.view(),
            duals: self.dual_w.view(),
        }
    }

    /// Builds the local Gram quantities for a frozen antecedent and resets
    /// the weight primal and dual variables to zero.
    pub fn prepare_parameters(&mut self, ant: &Antecedent<T>, with_pool: bool) -> Result<()> {
        if self.labeled_x.nrows() == 0 {
            return Err(Error::InvalidInput(format!("agent {} has no labeled rows", self.id)));
        }
        let h = hidden_matrix(self.labeled_x.view(), ant)?;
        let pool_hidden = if with_pool && self.unlabeled_x.nrows() > 0 {
            hidden_matrix(self.unlabeled_x.view(), ant)?
        } else {
            Array2::zeros((0, ant.param_count()))
        };
        self.params = Some(ParamCache {
            hth: gram(h.view()),
            hty: h.t().dot(&self.labeled_y),
            pool_hidden,
            frozen: None,
        });
        self.local_w = Array1::zeros(ant.param_count());
        self.dual_w = Array1::zeros(ant.param_count());
        Ok(())
    }
}

/// Sorts agents by id and checks the ids are exactly `0..L` for the
/// topology. Aggregation then always runs in id order.
pub(crate) fn order_agents<T>(agents: &mut [AgentState<T>], topology: &Topology) -> Result<()> {
    if agents.len() != topology.agent_count() {
        return Err(Error::InvalidConfig(format!(
            "{} agents for a topology of {}",
            agents.len(),
            topology.agent_count()
        )));
    }
    agents.sort_by_key(|a| a.id);
    if agents.iter().enumerate().any(|(i, a)| a.id != i) {
        return Err(Error::InvalidConfig("agent ids must be 0..L without gaps".into()));
    }
    Ok(())
}

/// What an agent sends to the center aggregator: `K x D` local centers and
/// their duals.
#[derive(Debug, Clone, Copy)]
pub struct CenterReport<'a, T> {
    pub centers: ArrayView2<'a, T>,
    pub duals: ArrayView2<'a, T>,
}

/// Local membership widths and the number of local rows behind them.
#[derive(Debug, Clone, Copy)]
pub struct SpreadReport<'a, T> {
    pub sigmas: ArrayView2<'a, T>,
    pub cardinality: usize,
}

/// Local consequent weights and their duals.
#[derive(Debug, Clone, Copy)]
pub struct WeightReport<'a, T> {
    pub weights: ArrayView1<'a, T>,
    pub duals: ArrayView1<'a, T>,
}

/// Aggregator-side variables.
#[derive(Debug, Clone, PartialEq)]
pub struct GlobalState<T> {
    pub centers: Array2<T>,
    pub sigmas: Option<Array2<T>>,
    pub weights: Array1<T>,
}

impl<T: Real> GlobalState<T> {
    pub fn with_centers(centers: Array2<T>) -> Self {
        let p = centers.nrows() * (centers.ncols() + 1);
        Self {
            centers,
            sigmas: None,
            weights: Array1::zeros(p),
        }
    }

    /// Global antecedent once sigmas are available.
    pub fn antecedent(&self) -> Result<Antecedent<T>> {
        let sigmas = self
            .sigmas
            .clone()
            .ok_or_else(|| Error::InvalidInput("global sigmas not computed yet".into()))?;
        Antecedent::new(self.centers.clone(), sigmas)
    }
}
