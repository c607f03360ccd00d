use std::collections::BTreeSet;

use super::{run_branches, EnumStatus, Enumeration, EnumerationBudget, Meter, OracleVerdict};
use crate::error::AnalysisError;
use crate::model::{BalancedRectangle, PartialRectangle, SymbolMultiset};

/// Default cap on `m·n·t` for the rectangle oracle.
pub const RECT_UNIT_GUARD: usize = 64;

struct Problem {
    m: usize,
    n: usize,
    t: usize,
    base: Vec<Vec<u32>>,
    /// Cells still missing symbols, row-major: (row, col, missing count).
    vars: Vec<(usize, usize, u32)>,
    last_in_row: Vec<bool>,
    last_in_col: Vec<bool>,
}

#[derive(Clone)]
struct State {
    row_need: Vec<u32>,
    col_need: Vec<u32>,
    chosen: Vec<Vec<u32>>,
}

impl Problem {
    fn new(d: &PartialRectangle) -> (Self, State) {
        let (m, n, t) = d.dims();
        let base: Vec<Vec<u32>> = d.cells().iter().map(|c| c.counts().to_vec()).collect();
        let mut vars = Vec::new();
        for r in 0..m {
            for c in 0..n {
                let missing = t as u32 - d.cell(r + 1, c + 1).total();
                if missing > 0 {
                    vars.push((r, c, missing));
                }
            }
        }
        let last_in_row = (0..vars.len()).map(|i| vars[i + 1..].iter().all(|v| v.0 != vars[i].0)).collect();
        let last_in_col = (0..vars.len()).map(|i| vars[i + 1..].iter().all(|v| v.1 != vars[i].1)).collect();
        let mut row_need = vec![0u32; m * t];
        let mut col_need = vec![0u32; n * t];
        for s in 1..=t {
            for r in 0..m {
                row_need[r * t + s - 1] = n as u32 - d.row_count(r + 1, s);
            }
            for c in 0..n {
                col_need[c * t + s - 1] = m as u32 - d.col_count(c + 1, s);
            }
        }
        let state = State { row_need, col_need, chosen: Vec::new() };
        (Self { m, n, t, base, vars, last_in_row, last_in_col }, state)
    }

    /// Contents for variable `i`, lexicographically increasing.
    fn choices(&self, i: usize, st: &State) -> Vec<Vec<u32>> {
        let (r, c, e) = self.vars[i];
        let t = self.t;
        let rn = &st.row_need[r * t..(r + 1) * t];
        let cn = &st.col_need[c * t..(c + 1) * t];
        let forced = match (self.last_in_row[i], self.last_in_col[i]) {
            (true, true) if rn != cn => return Vec::new(),
            (true, _) => Some(rn),
            (_, true) => Some(cn),
            _ => None,
        };
        if let Some(x) = forced {
            let ok = x.iter().sum::<u32>() == e && (0..t).all(|s| x[s] <= rn[s] && x[s] <= cn[s]);
            return if ok { vec![x.to_vec()] } else { Vec::new() };
        }
        let ub: Vec<u32> = (0..t).map(|s| rn[s].min(cn[s])).collect();
        let mut out = Vec::new();
        let mut cur = vec![0u32; t];
        compositions(&ub, e, 0, &mut cur, &mut out);
        out
    }

    fn apply(&self, i: usize, x: &[u32], st: &mut State) {
        let (r, c, _) = self.vars[i];
        for (s, &k) in x.iter().enumerate() {
            st.row_need[r * self.t + s] -= k;
            st.col_need[c * self.t + s] -= k;
        }
        st.chosen.push(x.to_vec());
    }

    fn undo(&self, i: usize, st: &mut State) {
        let (r, c, _) = self.vars[i];
        let x = st.chosen.pop().expect("undo without apply");
        for (s, &k) in x.iter().enumerate() {
            st.row_need[r * self.t + s] += k;
            st.col_need[c * self.t + s] += k;
        }
    }

    /// Every remaining row and column need must be coverable by the
    /// remaining cells in it, symbol by symbol and in total.
    fn feasible(&self, from: usize, st: &State) -> bool {
        let t = self.t;
        let mut row_supply = vec![0u32; self.m * t];
        let mut col_supply = vec![0u32; self.n * t];
        for &(r, c, e) in &self.vars[from..] {
            let mut cell_supply = 0;
            for s in 0..t {
                let rn = st.row_need[r * t + s];
                let cn = st.col_need[c * t + s];
                row_supply[r * t + s] += e.min(cn);
                col_supply[c * t + s] += e.min(rn);
                cell_supply += rn.min(cn);
            }
            if cell_supply < e {
                return false;
            }
        }
        row_supply.iter().zip(&st.row_need).all(|(s, n)| s >= n)
            && col_supply.iter().zip(&st.col_need).all(|(s, n)| s >= n)
    }

    fn solution(&self, st: &State) -> BalancedRectangle {
        let mut cells = self.base.clone();
        for (&(r, c, _), x) in self.vars.iter().zip(&st.chosen) {
            for (s, &k) in x.iter().enumerate() {
                cells[r * self.n + c][s] += k;
            }
        }
        let cells = cells.into_iter().map(SymbolMultiset::from_counts).collect();
        let p = PartialRectangle::from_cells(self.m, self.n, self.t, cells).expect("shape preserved");
        BalancedRectangle::try_from(p).expect("enumerated completion is balanced")
    }

    fn dfs(&self, i: usize, st: &mut State, meter: &mut Meter, cap: u64, out: &mut Vec<BalancedRectangle>) {
        if i == self.vars.len() {
            out.push(self.solution(st));
            return;
        }
        for x in self.choices(i, st) {
            if !meter.tick() {
                return;
            }
            self.apply(i, &x, st);
            if self.feasible(i + 1, st) {
                self.dfs(i + 1, st, meter, cap, out);
            }
            self.undo(i, st);
            if out.len() as u64 >= cap || meter.stopped() {
                return;
            }
        }
    }
}

fn compositions(ub: &[u32], left: u32, s: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if s + 1 == ub.len() {
        if left <= ub[s] {
            cur[s] = left;
            out.push(cur.clone());
        }
        return;
    }
    let rest: u32 = ub[s + 1..].iter().sum();
    let lo = left.saturating_sub(rest);
    for k in lo..=ub[s].min(left) {
        cur[s] = k;
        compositions(ub, left - k, s + 1, cur, out);
    }
}

fn check_input(d: &PartialRectangle, guard: Option<usize>) -> Result<(), AnalysisError> {
    d.validate().map_err(|v| AnalysisError::Unsupported(format!("not a partial balanced rectangle: {v}")))?;
    let units = d.m() * d.n() * d.t();
    if let Some(g) = guard {
        if units > g {
            return Err(AnalysisError::TooLarge { vertices: units, limit: g });
        }
    }
    Ok(())
}

/// Every balanced rectangle containing `d`, cells scanned row-major and
/// each cell's contents in increasing lexicographic order of multiplicity
/// vectors. `guard` caps `m·n·t` (`None` lifts it).
pub fn enumerate_rect_completions(
    d: &PartialRectangle,
    budget: &EnumerationBudget,
    workers: usize,
    guard: Option<usize>,
) -> Result<Enumeration<BalancedRectangle>, AnalysisError> {
    check_input(d, guard)?;
    let (p, root) = Problem::new(d);
    if !p.feasible(0, &root) {
        return Ok(Enumeration { solutions: Vec::new(), status: EnumStatus::Complete, nodes: 0 });
    }
    if p.vars.is_empty() {
        let solution = p.solution(&root);
        return Ok(run_branches(&[()], budget, workers, |_, _, _, out| out.push(solution.clone())));
    }
    let first = p.choices(0, &root);
    Ok(run_branches(&first, budget, workers, |x, meter, cap, out| {
        let mut st = root.clone();
        if !meter.tick() {
            return;
        }
        p.apply(0, x, &mut st);
        if p.feasible(1, &st) {
            p.dfs(1, &mut st, meter, cap, out);
        }
    }))
}

/// Decides whether `d` is a defining set of `F_{m,n,t}`: whether the full
/// rectangle is the only balanced rectangle containing it.
pub fn is_defining_rect(
    d: &PartialRectangle,
    budget: &EnumerationBudget,
    workers: usize,
    guard: Option<usize>,
) -> Result<OracleVerdict<BalancedRectangle>, AnalysisError> {
    let (m, n, t) = d.dims();
    let full = BalancedRectangle::full(m, n, t)?;
    if !d.is_subset_of(&full) {
        return Err(AnalysisError::NotSubset(format!("partial rectangle is not contained in F_{{{m},{n},{t}}}")));
    }
    let budget = budget.with_max_solutions(Some(budget.max_solutions.map_or(2, |c| c.max(2))));
    let e = enumerate_rect_completions(d, &budget, workers, guard)?;
    Ok(OracleVerdict::from_enumeration(e, full))
}

/// Number of `(m,n,t)`-balanced rectangles. With `up_to_isomorphism`, counts
/// classes under row, column and symbol permutations instead (a different
/// number, meant only as a census).
pub fn rect_census(
    m: usize,
    n: usize,
    t: usize,
    up_to_isomorphism: bool,
    budget: &EnumerationBudget,
    workers: usize,
) -> Result<(u64, EnumStatus), AnalysisError> {
    let e = enumerate_rect_completions(&PartialRectangle::empty(m, n, t)?, budget, workers, Some(RECT_UNIT_GUARD))?;
    if !up_to_isomorphism {
        return Ok((e.solutions.len() as u64, e.status));
    }
    let (rp, cp, sp) = (permutations(m), permutations(n), permutations(t));
    let classes: BTreeSet<Vec<Vec<u32>>> = e
        .solutions
        .iter()
        .map(|r| {
            let mut best: Option<Vec<Vec<u32>>> = None;
            for pr in &rp {
                for pc in &cp {
                    for ps in &sp {
                        let mut img = vec![vec![0u32; t]; m * n];
                        for (i, j, cell) in r.iter_cells() {
                            let slot = &mut img[pr[i - 1] * n + pc[j - 1]];
                            for s in 1..=t {
                                slot[ps[s - 1]] = cell.count(s);
                            }
                        }
                        if best.as_ref().is_none_or(|b| img < *b) {
                            best = Some(img);
                        }
                    }
                }
            }
            best.expect("at least the identity")
        })
        .collect();
    Ok((classes.len() as u64, e.status))
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..k).collect();
    heap(k, &mut p, &mut out);
    out.sort();
    out
}

fn heap(k: usize, p: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if k <= 1 {
        out.push(p.clone());
        return;
    }
    for i in 0..k {
        heap(k - 1, p, out);
        if k.is_multiple_of(2) {
            p.swap(i, k - 1);
        } else {
            p.swap(0, k - 1);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::io::parse_rectangle;
    use crate::oracle::VerdictStatus;

    fn all() -> EnumerationBudget {
        EnumerationBudget::enumerate_all()
    }

    #[test]
    fn compositions_are_lexicographic() {
        let mut out = Vec::new();
        compositions(&[2, 2, 2], 2, 0, &mut vec![0; 3], &mut out);
        assert_eq!(out, vec![vec![0, 0, 2], vec![0, 1, 1], vec![0, 2, 0], vec![1, 0, 1], vec![1, 1, 0], vec![2, 0, 0]]);
    }

    #[test]
    fn full_rectangle_is_its_only_completion() {
        let f = PartialRectangle::full(2, 3, 3).unwrap();
        let e = enumerate_rect_completions(&f, &all(), 1, None).unwrap();
        assert_eq!(e.status, EnumStatus::Complete);
        assert_eq!(e.solutions.len(), 1);
        assert!(e.solutions[0].is_full());
    }

    #[test]
    fn one_full_cell_defines_f222() {
        let d = parse_rectangle("rect 2 2 2\n1,2 | .\n. | .\n").unwrap();
        let e = enumerate_rect_completions(&d, &all(), 1, None).unwrap();
        assert_eq!(e.solutions.len(), 1);
        let v = is_defining_rect(&d, &EnumerationBudget::verdict(), 1, None).unwrap();
        assert_eq!(v.status, VerdictStatus::Defining);
        assert_eq!(v.completions_found, 1);
    }

    #[test]
    fn empty_f222_has_three_completions() {
        // {1,1}{2,2}/{2,2}{1,1}, the full square and its mirror
        let d = PartialRectangle::empty(2, 2, 2).unwrap();
        let e = enumerate_rect_completions(&d, &all(), 1, None).unwrap();
        assert_eq!(e.solutions.len(), 3);
        let v = is_defining_rect(&d, &EnumerationBudget::verdict(), 1, None).unwrap();
        assert_eq!(v.status, VerdictStatus::NotDefining);
        assert_eq!(v.witnesses.len(), 2);
        assert!(v.witnesses[0].is_full());
    }

    #[test]
    fn full_minus_a_cell_is_defining() {
        let mut d = PartialRectangle::full(2, 3, 3).unwrap();
        d.set_cell(2, 2, SymbolMultiset::empty(3));
        let v = is_defining_rect(&d, &EnumerationBudget::verdict(), 1, None).unwrap();
        assert_eq!(v.status, VerdictStatus::Defining);
    }

    #[test]
    fn worked_partial_completes_to_the_corrected_alternative() {
        let d = parse_rectangle("rect 2 3 3\n1 | . | .\n. | 2 | 2,3\n").unwrap();
        let e = enumerate_rect_completions(&d, &all(), 1, None).unwrap();
        assert_eq!(e.status, EnumStatus::Complete);
        let alt = parse_rectangle("rect 2 3 3\n1,1,2 | 2,3,3 | 1,2,3\n2,3,3 | 1,1,2 | 1,2,3\n").unwrap();
        assert!(e.solutions.iter().any(|s| *s.as_partial() == alt));
        assert!(e.solutions.iter().any(|s| s.is_full()));
        for s in &e.solutions {
            assert!(d.is_subset_of(s.as_partial()));
        }
    }

    #[test]
    fn non_subset_and_guard_are_errors() {
        let d = parse_rectangle("rect 2 2 2\n1,1 | .\n. | .\n").unwrap();
        assert!(matches!(is_defining_rect(&d, &all(), 1, None), Err(AnalysisError::NotSubset(_))));
        let big = PartialRectangle::empty(4, 4, 5).unwrap();
        assert!(matches!(
            enumerate_rect_completions(&big, &all(), 1, Some(RECT_UNIT_GUARD)),
            Err(AnalysisError::TooLarge { .. })
        ));
    }

    #[test]
    fn enumeration_matches_brute_force_on_f222_and_f233() {
        // brute force: all ways to fill each cell with a t-multiset
        for (m, n, t) in [(2, 2, 2), (2, 3, 3), (1, 3, 2)] {
            let d = PartialRectangle::empty(m, n, t).unwrap();
            let e = enumerate_rect_completions(&d, &all(), 1, None).unwrap();
            let mut pool = Vec::new();
            compositions(&vec![t as u32; t], t as u32, 0, &mut vec![0; t], &mut pool);
            let mut count = 0u64;
            let mut idx = vec![0usize; m * n];
            'outer: loop {
                let cells = idx.iter().map(|&i| SymbolMultiset::from_counts(pool[i].clone())).collect();
                if PartialRectangle::from_cells(m, n, t, cells).unwrap().validate_balanced().is_ok() {
                    count += 1;
                }
                for slot in idx.iter_mut() {
                    *slot += 1;
                    if *slot < pool.len() {
                        continue 'outer;
                    }
                    *slot = 0;
                }
                break;
            }
            assert_eq!(e.solutions.len() as u64, count, "({m},{n},{t})");
            let mut sorted = e
                .solutions
                .iter()
                .map(|s| s.cells().iter().map(|c| c.counts().to_vec()).collect::<Vec<_>>())
                .collect::<Vec<_>>();
            let before = sorted.clone();
            sorted.sort();
            assert_eq!(before, sorted, "row-major lexicographic order");
        }
    }

    #[test]
    fn f333_has_847_completions_of_the_empty_grid() {
        // independent row-by-row count
        let d = PartialRectangle::empty(3, 3, 3).unwrap();
        let e = enumerate_rect_completions(&d, &all(), 1, None).unwrap();
        assert_eq!((e.solutions.len(), e.status), (847, EnumStatus::Complete));
    }

    #[test]
    fn workers_do_not_change_the_enumeration() {
        let d = PartialRectangle::empty(3, 3, 3).unwrap();
        let b = EnumerationBudget::enumerate_all().with_max_solutions(Some(500));
        let one = enumerate_rect_completions(&d, &b, 1, None).unwrap();
        let four = enumerate_rect_completions(&d, &b, 4, None).unwrap();
        assert_eq!(one, four);
    }

    #[test]
    fn census_up_to_isomorphism_is_smaller() {
        let (all_count, st) = rect_census(2, 2, 2, false, &all(), 1).unwrap();
        assert_eq!((all_count, st), (3, EnumStatus::Complete));
        let (iso, _) = rect_census(2, 2, 2, true, &all(), 1).unwrap();
        assert_eq!(iso, 2);
    }
}
