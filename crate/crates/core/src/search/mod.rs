//! Greedy minimisation of defining sets, comparison tables, the
//! intersection check and the bound falsification monitor.

mod intersection;
mod monitor;
mod table;

use std::collections::HashSet;
use std::fmt::{self, Write};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::AnalysisError;
use crate::model::io::{serialize_partial_design, serialize_rectangle};
use crate::model::{Block, PartialDesign, PartialRectangle};
use crate::oracle::{self, EnumerationBudget, VerdictStatus};
use crate::par;

pub use intersection::{intersect, intersection_check, IntersectionReport};
pub use monitor::{BoundClass, FalsificationEvent, FalsificationMonitor};
pub use table::{design_table, rect_table, DesignRow, RectRow, NA};

/// Name of the generator behind [`SearchConfig::seed`]: ChaCha with 8
/// rounds, seeded by `seed_from_u64(seed)`, restart `r` on stream `r`.
pub const RNG_NAME: &str = "chacha8";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DeletionOrder {
    /// A seeded shuffle of all units.
    Random,
    /// Next unit from the fullest cell (rectangles) or the block whose
    /// pairs are currently most covered (designs); shuffle order breaks
    /// ties.
    SizeGreedy,
}

impl DeletionOrder {
    pub fn name(self) -> &'static str {
        match self {
            Self::Random => "random",
            Self::SizeGreedy => "size-greedy",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchConfig {
    pub seed: u64,
    pub restarts: usize,
    pub deletion_order: DeletionOrder,
    pub budget: EnumerationBudget,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self { seed: 0, restarts: 1, deletion_order: DeletionOrder::Random, budget: EnumerationBudget::verdict() }
    }
}

/// A full object whose defining sets are searched.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Target {
    Rect { m: usize, n: usize, t: usize },
    Design { v: usize, k: usize },
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Rect { m, n, t } => write!(f, "rect {m} {n} {t}"),
            Self::Design { v, k } => write!(f, "design {v} {k}"),
        }
    }
}

/// A subset of the full object: a partial rectangle or a set of blocks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Subject {
    Rect(PartialRectangle),
    Design(PartialDesign),
}

/// One removable unit: a symbol occurrence in a cell, or a block.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Unit {
    Symbol { row: usize, col: usize, symbol: usize },
    Block(Block),
}

impl fmt::Display for Unit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Symbol { row, col, symbol } => write!(f, "({row},{col}):{symbol}"),
            Self::Block(b) => {
                let e: Vec<String> = b.elements().map(|x| x.to_string()).collect();
                write!(f, "{{{}}}", e.join(","))
            }
        }
    }
}

impl Subject {
    pub fn full(target: Target) -> Result<Self, AnalysisError> {
        Ok(match target {
            Target::Rect { m, n, t } => Self::Rect(PartialRectangle::full(m, n, t)?),
            Target::Design { v, k } => Self::Design(PartialDesign::full(v, k)?),
        })
    }

    pub fn size(&self) -> u64 {
        match self {
            Self::Rect(r) => r.size(),
            Self::Design(d) => d.len() as u64,
        }
    }

    pub fn units(&self) -> Vec<Unit> {
        match self {
            Self::Rect(r) => r
                .iter_cells()
                .flat_map(|(row, col, c)| {
                    c.symbols().flat_map(move |s| {
                        std::iter::repeat_n(s, c.count(s) as usize).map(move |symbol| Unit::Symbol { row, col, symbol })
                    })
                })
                .collect(),
            Self::Design(d) => d.blocks().iter().cloned().map(Unit::Block).collect(),
        }
    }

    pub fn without(&self, u: &Unit) -> Self {
        let mut s = self.clone();
        match (&mut s, u) {
            (Self::Rect(r), Unit::Symbol { row, col, symbol }) => {
                assert!(r.cell_mut(*row, *col).remove(*symbol, 1), "unit not present");
            }
            (Self::Design(d), Unit::Block(b)) => {
                assert!(d.remove(b), "unit not present");
            }
            _ => panic!("unit does not match the subject"),
        }
        s
    }

    /// Exact oracle verdict on a single thread.
    pub fn verdict(&self, budget: &EnumerationBudget) -> Result<VerdictStatus, AnalysisError> {
        Ok(match self {
            Self::Rect(r) => oracle::is_defining_rect(r, budget, 1, None)?.status,
            Self::Design(d) => oracle::is_defining_design(d, budget, 1, None)?.status,
        })
    }

    pub fn to_text(&self) -> String {
        match self {
            Self::Rect(r) => serialize_rectangle(r),
            Self::Design(d) => serialize_partial_design(d),
        }
    }

    /// Larger is deleted first under [`DeletionOrder::SizeGreedy`].
    fn greedy_weight(&self, u: &Unit) -> u64 {
        match (self, u) {
            (Self::Rect(r), Unit::Symbol { row, col, .. }) => u64::from(r.cell(*row, *col).total()),
            (Self::Design(d), Unit::Block(b)) => {
                let cover = d.to_candidate(d.full_lambda()).pair_coverage();
                b.pairs().map(|(x, y)| cover[crate::model::pair_index(d.v(), x, y)]).sum()
            }
            _ => 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceStep {
    pub unit: Unit,
    /// The unit was deleted (the smaller set stayed defining).
    pub deleted: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RestartOutcome {
    pub restart: usize,
    pub defining_set: Subject,
    pub size: u64,
    pub trace: Vec<TraceStep>,
    /// Every single-unit deletion from the final set was re-checked and is
    /// not defining.
    pub minimal: bool,
    /// Set when the oracle ran out of budget; the partial result is kept.
    pub aborted: Option<String>,
}

impl RestartOutcome {
    /// Completed, oracle-verified and minimal.
    pub fn is_verified(&self) -> bool {
        self.aborted.is_none() && self.minimal
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchReport {
    pub target: Target,
    pub config: SearchConfig,
    pub restarts: Vec<RestartOutcome>,
    /// Index of the smallest verified set, ties to the lowest restart.
    pub best: Option<usize>,
}

impl SearchReport {
    pub fn best(&self) -> Option<&RestartOutcome> {
        self.best.map(|i| &self.restarts[i])
    }

    pub fn to_text(&self, with_trace: bool) -> String {
        let c = &self.config;
        let mut out = format!(
            "search {} rng {} seed {} restarts {} order {}\n",
            self.target,
            RNG_NAME,
            c.seed,
            c.restarts,
            c.deletion_order.name()
        );
        for r in &self.restarts {
            let _ =
                write!(out, "restart {} size {} minimal {}", r.restart, r.size, if r.minimal { "yes" } else { "no" });
            if let Some(why) = &r.aborted {
                let _ = write!(out, " aborted {why}");
            }
            out.push('\n');
            if with_trace {
                for s in &r.trace {
                    let _ = writeln!(out, "  {} {}", if s.deleted { "-" } else { "=" }, s.unit);
                }
            }
        }
        match self.best() {
            Some(b) => {
                let _ = writeln!(out, "best restart {} size {}", b.restart, b.size);
                out.push_str(&b.defining_set.to_text());
            }
            None => out.push_str("best none\n"),
        }
        out
    }
}

fn restart_rng(seed: u64, restart: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(restart as u64);
    rng
}

fn run_restart(target: Target, config: &SearchConfig, restart: usize) -> Result<RestartOutcome, AnalysisError> {
    let mut current = Subject::full(target)?;
    let mut order = current.units();
    order.shuffle(&mut restart_rng(config.seed, restart));
    let mut trace = Vec::with_capacity(order.len());
    let mut tried: HashSet<usize> = HashSet::new();
    let abort = |current: Subject, trace, why: String| RestartOutcome {
        restart,
        size: current.size(),
        defining_set: current,
        trace,
        minimal: false,
        aborted: Some(why),
    };

    while tried.len() < order.len() {
        let pick = match config.deletion_order {
            DeletionOrder::Random => (0..order.len()).find(|i| !tried.contains(i)).expect("untried unit"),
            DeletionOrder::SizeGreedy => {
                let mut best: Option<(u64, usize)> = None;
                for i in (0..order.len()).filter(|i| !tried.contains(i)) {
                    let w = current.greedy_weight(&order[i]);
                    if best.is_none_or(|(bw, _)| w > bw) {
                        best = Some((w, i));
                    }
                }
                best.expect("untried unit").1
            }
        };
        tried.insert(pick);
        let unit = order[pick].clone();
        let smaller = current.without(&unit);
        match smaller.verdict(&config.budget)? {
            VerdictStatus::Defining => {
                current = smaller;
                trace.push(TraceStep { unit, deleted: true });
            }
            VerdictStatus::NotDefining => trace.push(TraceStep { unit, deleted: false }),
            VerdictStatus::BudgetExhausted => {
                return Ok(abort(current, trace, format!("budget exhausted testing {unit}")));
            }
        }
    }

    let mut minimal = true;
    for u in current.units() {
        match current.without(&u).verdict(&config.budget)? {
            VerdictStatus::NotDefining => {}
            VerdictStatus::Defining => minimal = false,
            VerdictStatus::BudgetExhausted => {
                return Ok(abort(current, trace, format!("budget exhausted re-checking {u}")));
            }
        }
    }
    Ok(RestartOutcome { restart, size: current.size(), defining_set: current, trace, minimal, aborted: None })
}

/// Greedy deletion from the full object with seeded restarts.
///
/// Each restart shuffles the units with its own stream and makes one pass,
/// deleting a unit whenever the oracle says the smaller set is still
/// defining. Being defining is preserved under supersets, so one pass
/// already ends at a minimal set; minimality is re-checked anyway.
/// Restarts run on `workers` threads and the best is chosen by
/// `(size, restart)`.
pub fn minimize_defining_set(
    target: Target,
    config: &SearchConfig,
    workers: usize,
) -> Result<SearchReport, AnalysisError> {
    if config.restarts == 0 {
        return Err(AnalysisError::Unsupported("restarts must be at least 1".into()));
    }
    let outcomes = par::map_indexed(config.restarts, workers, |r| run_restart(target, config, r));
    let restarts = outcomes.into_iter().collect::<Result<Vec<_>, _>>()?;
    let best =
        restarts.iter().enumerate().filter(|(_, r)| r.is_verified()).min_by_key(|(i, r)| (r.size, *i)).map(|(i, _)| i);
    Ok(SearchReport { target, config: *config, restarts, best })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(seed: u64, restarts: usize) -> SearchConfig {
        SearchConfig { seed, restarts, ..SearchConfig::default() }
    }

    #[test]
    fn f222_reaches_size_two() {
        let r = minimize_defining_set(Target::Rect { m: 2, n: 2, t: 2 }, &config(7, 4), 1).unwrap();
        let best = r.best().unwrap();
        assert_eq!(best.size, 2);
        assert!(best.minimal);
        for o in &r.restarts {
            assert_eq!(o.trace.len(), 8);
        }
    }

    #[test]
    fn f43_reaches_the_empty_set() {
        let r = minimize_defining_set(Target::Design { v: 4, k: 3 }, &config(0, 2), 1).unwrap();
        assert_eq!(r.best().unwrap().size, 0);
    }

    #[test]
    fn replay_and_worker_independence() {
        let t = Target::Rect { m: 2, n: 3, t: 3 };
        let a = minimize_defining_set(t, &config(11, 6), 1).unwrap();
        let b = minimize_defining_set(t, &config(11, 6), 4).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_text(true), b.to_text(true));
        let c = minimize_defining_set(t, &config(12, 6), 1).unwrap();
        assert_ne!(a.to_text(true), c.to_text(true));
    }

    #[test]
    fn size_greedy_also_ends_minimal() {
        let c = SearchConfig { deletion_order: DeletionOrder::SizeGreedy, ..config(3, 2) };
        let r = minimize_defining_set(Target::Design { v: 5, k: 3 }, &c, 1).unwrap();
        assert!(r.restarts.iter().all(|o| o.is_verified()));
    }

    #[test]
    fn more_restarts_never_worsen_the_best() {
        let t = Target::Rect { m: 2, n: 3, t: 3 };
        let mut last = u64::MAX;
        for restarts in [1, 2, 4, 8] {
            let s = minimize_defining_set(t, &config(5, restarts), 1).unwrap().best().unwrap().size;
            assert!(s <= last);
            last = s;
        }
    }

    #[test]
    fn units_cover_the_size() {
        let f = Subject::full(Target::Rect { m: 2, n: 3, t: 3 }).unwrap();
        assert_eq!(f.units().len() as u64, f.size());
        let d = Subject::full(Target::Design { v: 6, k: 3 }).unwrap();
        assert_eq!(d.units().len(), 20);
    }
}
