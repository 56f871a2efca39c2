use std::collections::{BTreeSet, VecDeque};

use crate::error::{Error, Result};

/// Undirected, connected communication graph over `L` agents.
///
/// The consensus updates average over every agent through the aggregator,
/// so neighbor lists are informational only.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Topology {
    agent_count: usize,
    edges: BTreeSet<(usize, usize)>,
    neighbors: Vec<Vec<usize>>,
}

impl Topology {
    pub fn new(agent_count: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if agent_count == 0 {
            return Err(Error::InvalidConfig("topology needs at least one agent".into()));
        }
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            if a == b {
                return Err(Error::InvalidConfig(format!("self-loop on agent {a}")));
            }
            if a >= agent_count || b >= agent_count {
                return Err(Error::InvalidConfig(format!(
                    "edge ({a}, {b}) references an agent outside 0..{agent_count}"
                )));
            }
            set.insert((a.min(b), a.max(b)));
        }
        let mut neighbors = vec![Vec::new(); agent_count];
        for &(a, b) in &set {
            neighbors[a].push(b);
            neighbors[b].push(a);
        }
        let topo = Self {
            agent_count,
            edges: set,
            neighbors,
        };
        if !topo.is_connected() {
            return Err(Error::InvalidConfig("topology is not connected".into()));
        }
        Ok(topo)
    }

    pub fn fully_connected(agent_count: usize) -> Result<Self> {
        let edges = (0..agent_count).flat_map(|a| ((a + 1)..agent_count).map(move |b| (a, b)));
        Self::new(agent_count, edges)
    }

    pub fn ring(agent_count: usize) -> Result<Self> {
        let edges = (0..agent_count)
            .map(|a| (a, (a + 1) % agent_count))
            .filter(|(a, b)| a != b);
        Self::new(agent_count, edges)
    }

    pub fn agent_count(&self) -> usize {
        self.agent_count
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn neighbors(&self, agent: usize) -> &[usize] {
        &self.neighbors[agent]
    }

    fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.agent_count];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        while let Some(a) = queue.pop_front() {
            for &b in &self.neighbors[a] {
                if !seen[b] {
                    seen[b] = true;
                    queue.push_back(b);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }
}
