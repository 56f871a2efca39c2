use std::fmt;
use std::io::{self, Write};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    Structure,
    Parameter,
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Phase::Structure => "structure",
            Phase::Parameter => "parameter",
        })
    }
}

/// One row of the per-iteration residual stream.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRecord {
    pub iteration: usize,
    pub phase: Phase,
    pub residual_primal: f64,
    pub residual_dual: f64,
    /// Time since the loop started.
    pub wall_time_ns: u64,
}

/// Append-only residual history of one consensus loop.
#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    pub phase: Phase,
    pub records: Vec<TraceRecord>,
    pub converged: bool,
    /// Set when the loop hit its cap and returned the best iterate instead.
    pub warning: Option<String>,
}

impl Trace {
    pub fn new(phase: Phase) -> Self {
        Self {
            phase,
            records: Vec::new(),
            converged: false,
            warning: None,
        }
    }

    pub fn push(&mut self, iteration: usize, primal: f64, dual: f64, wall_time_ns: u64) {
        self.records.push(TraceRecord {
            iteration,
            phase: self.phase,
            residual_primal: primal,
            residual_dual: dual,
            wall_time_ns,
        });
    }

    pub fn iterations(&self) -> usize {
        self.records.len()
    }

    pub fn last(&self) -> Option<&TraceRecord> {
        self.records.last()
    }

    /// Delimited rows `iteration,residual_primal,residual_dual,time_ns`
    /// preceded by `#` comment lines.
    pub fn write_csv<W: Write>(&self, mut out: W, comments: &[String]) -> io::Result<()> {
        for c in comments {
            writeln!(out, "# {c}")?;
        }
        writeln!(out, "# phase={} converged={}", self.phase, self.converged)?;
        writeln!(out, "iteration,residual_primal,residual_dual,time_ns")?;
        for r in &self.records {
            writeln!(
                out,
                "{},{:e},{:e},{}",
                r.iteration, r.residual_primal, r.residual_dual, r.wall_time_ns
            )?;
        }
        Ok(())
    }
}
