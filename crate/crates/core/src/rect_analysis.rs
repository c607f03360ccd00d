//! Non-uniqueness certificates and lower bounds for defining sets of
//! `F_{m,n,t}`.
//!
//! For a symbol pair `{a,b}`, the cells of `D` holding neither symbol form
//! the edges of a bipartite row/column graph. A cycle in that graph lets
//! `a` and `b` trade places alternately around the cycle, producing a
//! balanced rectangle other than `F` that still contains `D`.

use std::fmt::Write;

use num_rational::BigRational;

use crate::error::AnalysisError;
use crate::graph::{self, ClosedTrail, SimpleGraph};
use crate::model::io::serialize_rectangle;
use crate::model::{BalancedRectangle, PartialRectangle};
use crate::numeric::{guarded_ceil, int, ratio, Surd};
use crate::par;

/// 1-based `(row, col)`.
pub type Cell = (usize, usize);

/// Cells of `D` containing neither symbol of `pair`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellSet {
    pub pair: (usize, usize),
    pub cells: Vec<Cell>,
}

impl CellSet {
    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }
}

fn check_pair(a: usize, b: usize, t: usize) -> Result<(), AnalysisError> {
    if a == b || a < 1 || b < 1 || a > t || b > t {
        return Err(AnalysisError::Pair { a, b, t });
    }
    Ok(())
}

/// `S_{a,b}(D)` in row-major order. Empty cells qualify.
pub fn s_cells(d: &PartialRectangle, a: usize, b: usize) -> Result<CellSet, AnalysisError> {
    check_pair(a, b, d.t())?;
    let cells = d.iter_cells().filter(|(_, _, c)| c.count(a) == 0 && c.count(b) == 0).map(|(r, c, _)| (r, c)).collect();
    Ok(CellSet { pair: (a.min(b), a.max(b)), cells })
}

/// Rejects partial rectangles the analysis does not cover: invalid ones and
/// ones with a repeated symbol in a cell (those are not inside `F`).
fn check_simple(d: &PartialRectangle) -> Result<(), AnalysisError> {
    if let Err(v) = d.validate() {
        return Err(AnalysisError::NotSubset(v.to_string()));
    }
    for (row, col, c) in d.iter_cells() {
        if !c.is_set() {
            return Err(AnalysisError::MultisetCell { row, col });
        }
    }
    Ok(())
}

/// Witness that a partial rectangle is not a defining set: swap `a → b` in
/// the `m1` cells and `b → a` in the `m2` cells of `F_{m,n,t}`.
///
/// `cycle` lives in the bipartite graph with rows as vertices `0..m` and
/// columns as vertices `m..m+n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RectSwapCertificate {
    pub m: usize,
    pub n: usize,
    pub t: usize,
    pub pair: (usize, usize),
    pub cycle: ClosedTrail,
    pub m1: Vec<Cell>,
    pub m2: Vec<Cell>,
}

impl RectSwapCertificate {
    /// Builds the certificate text: header, `M1:`/`M2:` cell lists, and the
    /// alternative rectangle.
    pub fn to_text(&self) -> Result<String, AnalysisError> {
        let alt = apply_rect_swap(self, self.m, self.n, self.t)?;
        let mut out = format!("cert rect {} {} {} pair {} {}\n", self.m, self.n, self.t, self.pair.0, self.pair.1);
        for (label, cells) in [("M1:", &self.m1), ("M2:", &self.m2)] {
            out.push_str(label);
            for (r, c) in cells {
                let _ = write!(out, " ({r},{c})");
            }
            out.push('\n');
        }
        out.push_str(&serialize_rectangle(&alt));
        Ok(out)
    }
}

/// Row/column graph of a cell set; rows are `0..m`, columns `m..m+n`.
pub fn cell_graph(m: usize, n: usize, cells: &[Cell]) -> (SimpleGraph, Vec<bool>) {
    let g = SimpleGraph::from_edges(m + n, cells.iter().map(|&(r, c)| (r - 1, m + c - 1)));
    let side = (0..m + n).map(|w| w >= m).collect();
    (g, side)
}

fn edge_to_cell(m: usize, (x, y): graph::Edge) -> Cell {
    // rows sort before columns
    debug_assert!(x < m && y >= m);
    (x + 1, y - m + 1)
}

fn certificate_for_pair(d: &PartialRectangle, a: usize, b: usize) -> Option<RectSwapCertificate> {
    let (m, n, t) = d.dims();
    let s = s_cells(d, a, b).expect("pair already checked");
    let (g, side) = cell_graph(m, n, &s.cells);
    let cycle = graph::find_cycle_bipartite(&g, &side).expect("cell graph is bipartite")?;
    let (f1, f2) = graph::alternate_partition(&cycle).expect("bipartite cycles are even");
    Some(RectSwapCertificate {
        m,
        n,
        t,
        pair: (a, b),
        cycle,
        m1: f1.into_iter().map(|e| edge_to_cell(m, e)).collect(),
        m2: f2.into_iter().map(|e| edge_to_cell(m, e)).collect(),
    })
}

/// Scans symbol pairs in lexicographic order and returns a certificate from
/// the first pair whose cell graph has a cycle, or `None` if every cell
/// graph is a forest. A certificate proves `D` is not a defining set.
pub fn lemma1_certificate(d: &PartialRectangle) -> Result<Option<RectSwapCertificate>, AnalysisError> {
    lemma1_certificate_with(d, 1)
}

/// [`lemma1_certificate`] with the pair scan spread over `workers` threads.
/// The lexicographically first hit is returned regardless of `workers`.
pub fn lemma1_certificate_with(
    d: &PartialRectangle,
    workers: usize,
) -> Result<Option<RectSwapCertificate>, AnalysisError> {
    if d.t() < 2 {
        return Err(AnalysisError::Unsupported(format!("t = {} (need t >= 2)", d.t())));
    }
    check_simple(d)?;
    let t = d.t();
    let pairs: Vec<(usize, usize)> = (1..=t).flat_map(|a| ((a + 1)..=t).map(move |b| (a, b))).collect();
    Ok(par::find_map_first(pairs.len(), workers, |i| certificate_for_pair(d, pairs[i].0, pairs[i].1)))
}

/// Applies a certificate to `F_{m,n,t}`.
pub fn apply_rect_swap(
    cert: &RectSwapCertificate,
    m: usize,
    n: usize,
    t: usize,
) -> Result<BalancedRectangle, AnalysisError> {
    if (cert.m, cert.n, cert.t) != (m, n, t) {
        return Err(AnalysisError::Mismatch(format!(
            "certificate is for ({},{},{}), asked for ({m},{n},{t})",
            cert.m, cert.n, cert.t
        )));
    }
    let (a, b) = cert.pair;
    check_pair(a, b, t)?;
    let in_range = |&(r, c): &Cell| r >= 1 && r <= m && c >= 1 && c <= n;
    if !cert.m1.iter().chain(&cert.m2).all(in_range) {
        return Err(AnalysisError::Mismatch("cell outside the grid".into()));
    }
    let as_edges = |cells: &[Cell]| -> Vec<graph::Edge> { cells.iter().map(|&(r, c)| (r - 1, m + c - 1)).collect() };
    let (e1, e2) = (as_edges(&cert.m1), as_edges(&cert.m2));
    if cert.m1.is_empty() || !graph::degree_balanced(&e1, &e2) {
        return Err(AnalysisError::Mismatch("M1/M2 are not a balanced alternation".into()));
    }
    let mut all: Vec<Cell> = cert.m1.iter().chain(&cert.m2).copied().collect();
    all.sort_unstable();
    if all.windows(2).any(|w| w[0] == w[1]) {
        return Err(AnalysisError::Mismatch("M1 and M2 overlap".into()));
    }
    let mut f = PartialRectangle::full(m, n, t)?;
    for &(r, c) in &cert.m1 {
        let cell = f.cell_mut(r, c);
        assert!(cell.remove(a, 1));
        cell.add(b, 1);
    }
    for &(r, c) in &cert.m2 {
        let cell = f.cell_mut(r, c);
        assert!(cell.remove(b, 1));
        cell.add(a, 1);
    }
    BalancedRectangle::try_from(f).map_err(|v| AnalysisError::Mismatch(format!("swap is unbalanced: {v}")))
}

/// Cell-size statistics behind the counting bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DeficiencyStats {
    /// `Σ e_{i,j}`, the size of `D`.
    pub size: u64,
    /// `Σ (t − e)(t − e − 1)/2`: symbol pairs absent, summed over cells.
    pub missing_pairs: u64,
    /// `t(t − 1)(m + n − 1)/2`.
    pub pair_cap: u64,
    pub within_pair_cap: bool,
}

/// Every defining set satisfies `missing_pairs ≤ pair_cap`.
pub fn deficiency_stats(d: &PartialRectangle) -> Result<DeficiencyStats, AnalysisError> {
    check_simple(d)?;
    let (m, n, t) = d.dims();
    let t = t as u64;
    let missing_pairs = d
        .cells()
        .iter()
        .map(|c| {
            let free = t - c.total() as u64;
            free * free.saturating_sub(1) / 2
        })
        .sum();
    let pair_cap = t * (t - 1) * (m + n - 1) as u64 / 2;
    Ok(DeficiencyStats { size: d.size(), missing_pairs, pair_cap, within_pair_cap: missing_pairs <= pair_cap })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundVariant {
    /// The displayed closed form, `mn(t − 1/2 − √(t(t−1)(m+n−1)/(2mn) + 1/4))`.
    Verbatim,
    /// Re-derived from the per-cell pair count: the smallest uniform cell
    /// size `e*` with `mn(t−e)(t−e−1)/2 ≤ t(t−1)(m+n−1)/2`, bound `mn·e*`.
    Corrected,
}

impl BoundVariant {
    pub fn name(self) -> &'static str {
        match self {
            Self::Verbatim => "verbatim",
            Self::Corrected => "corrected",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RectBoundReport {
    pub m: usize,
    pub n: usize,
    pub t: usize,
    pub variant: BoundVariant,
    /// The reciprocal multiplier: `t − 1/2 − e*`.
    pub lambda_prime: f64,
    /// Uniform cell size at the relaxation optimum.
    pub e_star: f64,
    pub lower_bound: f64,
    pub lower_bound_ceil: u64,
    /// `lower_bound` as an exact surd, for sign-exact comparisons.
    pub exact: Surd,
}

impl RectBoundReport {
    /// Exact test `size < lower_bound`.
    pub fn is_violated_by(&self, size: u64) -> bool {
        let diff = Surd::new(&self.exact.p - int(size), self.exact.q.clone(), self.exact.r.clone());
        diff.signum() > 0
    }
}

/// Lower bound on the size of any defining set of `F_{m,n,t}`, `t ≥ 2`.
///
/// The radicand of `λ'` is exact; the square root is evaluated to 160 bits
/// before rounding to `f64`.
pub fn theorem2_bound(m: usize, n: usize, t: usize, variant: BoundVariant) -> Result<RectBoundReport, AnalysisError> {
    if t < 2 || m < 1 || n < 1 {
        return Err(AnalysisError::Unsupported(format!("({m},{n},{t}): need m,n >= 1 and t >= 2")));
    }
    let (mi, ni, ti) = (m as i64, n as i64, t as i64);
    let mn = mi * ni;
    let pairs_times_lines = ti * (ti - 1) * (mi + ni - 1);
    // λ'² = c + 1/4
    let c: BigRational = match variant {
        BoundVariant::Verbatim => ratio(pairs_times_lines, 2 * mn),
        BoundVariant::Corrected => ratio(pairs_times_lines, mn),
    };
    let radicand = c + ratio(1, 4);
    // e* = t − 1/2 − λ'
    let e_star = Surd::new(ratio(2 * ti - 1, 2), int(-1), radicand.clone());
    let lambda_prime = Surd::new(int(0), int(1), radicand);
    // both variants have λ' ≤ t − 1/2, so e* ≥ 0; assert rather than clamp
    assert!(e_star.signum() >= 0, "negative uniform cell size");
    let exact = e_star.scale(&int(mn));
    let lower_bound = exact.to_f64();
    Ok(RectBoundReport {
        m,
        n,
        t,
        variant,
        lambda_prime: lambda_prime.to_f64(),
        e_star: e_star.to_f64(),
        lower_bound,
        lower_bound_ceil: guarded_ceil(lower_bound),
        exact,
    })
}

/// Square case `m = n = t`, with the ratio `lower_bound / n³`.
pub fn corollary3_bound(n: usize, variant: BoundVariant) -> Result<(RectBoundReport, f64), AnalysisError> {
    if n < 2 {
        return Err(AnalysisError::Unsupported(format!("n = {n} (need n >= 2)")));
    }
    let r = theorem2_bound(n, n, n, variant)?;
    let ratio = r.lower_bound / (n * n * n) as f64;
    Ok((r, ratio))
}
