//! Exhaustive completion oracles.
//!
//! Each enumerator is a plain backtracking search with simple counting
//! cuts. The first decision level is split into independent branches,
//! each with its own node cap; branch results are merged in branch order,
//! so answers never depend on the worker count.

mod design;
mod latin;
mod rect;

use std::time::{Duration, Instant};

use crate::par;

pub use design::{enumerate_design_candidates, is_defining_design, DESIGN_BLOCK_GUARD};
pub use latin::{latin_completions, latin_squares, PartialLatinSquare};
pub use rect::{enumerate_rect_completions, is_defining_rect, rect_census, RECT_UNIT_GUARD};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerationBudget {
    /// Stop after this many solutions.
    pub max_solutions: Option<u64>,
    /// Search nodes allowed in each first-level branch.
    pub max_nodes: Option<u64>,
    pub time_cap: Option<Duration>,
}

impl EnumerationBudget {
    pub const DEFAULT_NODES: u64 = 10_000_000;
    pub const DEFAULT_TIME: Duration = Duration::from_secs(60);

    /// Two solutions, enough to decide uniqueness.
    pub fn verdict() -> Self {
        Self { max_solutions: Some(2), max_nodes: Some(Self::DEFAULT_NODES), time_cap: Some(Self::DEFAULT_TIME) }
    }

    /// Default node and time caps, no cap on solutions.
    pub fn enumerate_all() -> Self {
        Self { max_solutions: None, ..Self::verdict() }
    }

    pub fn with_max_solutions(self, max_solutions: Option<u64>) -> Self {
        Self { max_solutions, ..self }
    }

    pub fn is_bounded(&self) -> bool {
        self.max_solutions.is_some() || self.max_nodes.is_some() || self.time_cap.is_some()
    }
}

impl Default for EnumerationBudget {
    fn default() -> Self {
        Self::verdict()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Exhaustion {
    Nodes,
    Time,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EnumStatus {
    /// Every solution is listed.
    Complete,
    /// Stopped at `max_solutions`; there may be more.
    SolutionCap,
    /// A node or time cap cut the search short before `max_solutions`.
    Exhausted(Exhaustion),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Enumeration<T> {
    pub solutions: Vec<T>,
    pub status: EnumStatus,
    /// Nodes visited in the branches that contributed to the answer.
    pub nodes: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VerdictStatus {
    Defining,
    NotDefining,
    BudgetExhausted,
}

impl VerdictStatus {
    pub fn name(self) -> &'static str {
        match self {
            Self::Defining => "defining",
            Self::NotDefining => "not-defining",
            Self::BudgetExhausted => "budget-exhausted",
        }
    }
}

/// Outcome of a uniqueness check. For a non-defining set the witnesses are
/// the full object followed by the first other completion in enumeration
/// order; for a defining set, the full object alone.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleVerdict<T> {
    pub status: VerdictStatus,
    pub completions_found: u64,
    pub witnesses: Vec<T>,
}

impl<T: PartialEq + Clone> OracleVerdict<T> {
    pub(crate) fn from_enumeration(e: Enumeration<T>, full: T) -> Self {
        let found = e.solutions.len() as u64;
        let other = e.solutions.iter().find(|s| **s != full).cloned();
        let status = match (&other, e.status) {
            (Some(_), _) => VerdictStatus::NotDefining,
            (None, EnumStatus::Exhausted(_)) => VerdictStatus::BudgetExhausted,
            (None, _) => {
                assert_eq!(found, 1, "the full object always completes a subset of itself");
                VerdictStatus::Defining
            }
        };
        let witnesses = match other {
            Some(o) => vec![full, o],
            None if status == VerdictStatus::Defining => vec![full],
            None => Vec::new(),
        };
        Self { status, completions_found: found, witnesses }
    }
}

/// Node and time accounting for one branch.
pub(crate) struct Meter {
    nodes: u64,
    max_nodes: Option<u64>,
    deadline: Option<Instant>,
    stop: Option<Exhaustion>,
}

impl Meter {
    fn new(budget: &EnumerationBudget, deadline: Option<Instant>) -> Self {
        Self { nodes: 0, max_nodes: budget.max_nodes, deadline, stop: None }
    }

    /// Counts one node; false once a cap is hit.
    pub(crate) fn tick(&mut self) -> bool {
        if self.stop.is_some() {
            return false;
        }
        self.nodes += 1;
        if self.max_nodes.is_some_and(|m| self.nodes > m) {
            self.stop = Some(Exhaustion::Nodes);
        } else if self.nodes.is_multiple_of(1024) && self.deadline.is_some_and(|d| Instant::now() >= d) {
            self.stop = Some(Exhaustion::Time);
        }
        self.stop.is_none()
    }

    pub(crate) fn stopped(&self) -> bool {
        self.stop.is_some()
    }
}

struct BranchOutcome<T> {
    solutions: Vec<T>,
    stop: Option<Exhaustion>,
    nodes: u64,
}

/// Runs `explore` on every branch and merges the results in branch order.
///
/// `explore(branch, meter, cap, out)` pushes at most `cap` solutions.
/// Sequential runs skip branches once the cap is met; parallel runs explore
/// all of them but the merge ignores the extra work.
pub(crate) fn run_branches<B, T, F>(
    branches: &[B],
    budget: &EnumerationBudget,
    workers: usize,
    explore: F,
) -> Enumeration<T>
where
    B: Sync,
    T: Send,
    F: Fn(&B, &mut Meter, u64, &mut Vec<T>) + Sync + Send,
{
    assert!(budget.is_bounded(), "enumeration budget needs at least one finite cap");
    let deadline = budget.time_cap.map(|d| Instant::now() + d);
    let cap = budget.max_solutions.unwrap_or(u64::MAX);
    let run = |b: &B| {
        let mut meter = Meter::new(budget, deadline);
        let mut out = Vec::new();
        if cap > 0 {
            explore(b, &mut meter, cap, &mut out);
        }
        BranchOutcome { solutions: out, stop: meter.stop, nodes: meter.nodes }
    };

    let mut merged = Enumeration { solutions: Vec::new(), status: EnumStatus::Complete, nodes: 0 };
    let absorb = |o: BranchOutcome<T>, merged: &mut Enumeration<T>| -> bool {
        merged.nodes += o.nodes;
        for s in o.solutions {
            if merged.solutions.len() as u64 >= cap {
                break;
            }
            merged.solutions.push(s);
        }
        if merged.solutions.len() as u64 >= cap {
            merged.status = EnumStatus::SolutionCap;
            return false;
        }
        if let Some(x) = o.stop {
            merged.status = EnumStatus::Exhausted(x);
            return false;
        }
        true
    };

    if cap == 0 {
        merged.status = EnumStatus::SolutionCap;
        return merged;
    }
    if workers <= 1 || !par::parallel_enabled() {
        for b in branches {
            if !absorb(run(b), &mut merged) {
                break;
            }
        }
    } else {
        for o in par::map_slice(branches, workers, run) {
            if !absorb(o, &mut merged) {
                break;
            }
        }
    }
    merged
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn merge_is_order_stable_and_capped() {
        let branches: Vec<u64> = (0..10).collect();
        let budget = EnumerationBudget::verdict().with_max_solutions(Some(5));
        for workers in [1, 3] {
            let e = run_branches(&branches, &budget, workers, |&b, m, cap, out| {
                for i in 0..b {
                    if out.len() as u64 >= cap || !m.tick() {
                        return;
                    }
                    out.push((b, i));
                }
            });
            assert_eq!(e.solutions, vec![(1, 0), (2, 0), (2, 1), (3, 0), (3, 1)]);
            assert_eq!(e.status, EnumStatus::SolutionCap);
        }
    }

    #[test]
    fn node_cap_is_reported() {
        let budget = EnumerationBudget { max_solutions: None, max_nodes: Some(3), time_cap: None };
        let e = run_branches(&[10u64], &budget, 1, |&b, m, _, out: &mut Vec<u64>| {
            for i in 0..b {
                if !m.tick() {
                    return;
                }
                out.push(i);
            }
        });
        assert_eq!(e.status, EnumStatus::Exhausted(Exhaustion::Nodes));
        assert_eq!(e.solutions, vec![0, 1, 2]);
    }
}
