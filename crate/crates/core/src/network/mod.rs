//! Qualitative constraint networks and their solvers.

mod pc;
mod qcn;
mod random;
mod realize;
mod scenario;

use std::time::Duration;

pub use pc::{enforce_pc, is_path_consistent};
pub(crate) use pc::Propagator;
pub use qcn::{Qcn, Scenario};
pub use random::random_qcn;
pub use realize::{realize_solution, Realization};
pub use scenario::{
    check_minimal, enumerate_scenarios, enumerate_scenarios_with, extract_scenario_distributive, solve_backtrack,
    EnumerateOptions, Minimality, Traversal, DEFAULT_ENUMERATION_GUARD,
};
pub(crate) use scenario::extend_variable;

/// Whether a network admits a solution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Consistent,
    Inconsistent,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Consistent => "consistent",
            Verdict::Inconsistent => "inconsistent",
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Counters collected while solving.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SolveStats {
    /// Number of times an entry strictly shrank.
    pub refinements: u64,
    /// Worklist pops.
    pub queue_ops: u64,
    /// Search branches abandoned (backtracking only).
    pub backtracks: u64,
    pub wall: Duration,
}

impl SolveStats {
    pub(crate) fn absorb(&mut self, other: &SolveStats) {
        self.refinements += other.refinements;
        self.queue_ops += other.queue_ops;
        self.backtracks += other.backtracks;
    }
}

/// Result of a solver run.
#[derive(Debug, Clone)]
pub struct SolveOutcome {
    pub verdict: Verdict,
    /// The propagated network, when the solver produces one.
    pub refined: Option<Qcn>,
    pub scenario: Option<Scenario>,
    pub stats: SolveStats,
}

impl SolveOutcome {
    pub fn is_consistent(&self) -> bool {
        self.verdict == Verdict::Consistent
    }
}
