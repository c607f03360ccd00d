use super::{run_branches, Enumeration, EnumerationBudget, Meter};
use crate::error::AnalysisError;

/// An `n×n` array with some cells filled by symbols `1..=n`. Rows and
/// columns are 1-based in the API.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PartialLatinSquare {
    n: usize,
    cells: Vec<Option<u8>>,
}

impl PartialLatinSquare {
    pub const MAX_ORDER: usize = 5;

    pub fn empty(n: usize) -> Result<Self, AnalysisError> {
        if n == 0 || n > Self::MAX_ORDER {
            return Err(AnalysisError::Unsupported(format!("Latin square order {n} (need 1..={})", Self::MAX_ORDER)));
        }
        Ok(Self { n, cells: vec![None; n * n] })
    }

    /// Rows of symbols, `0` for an empty cell.
    pub fn from_rows(rows: &[Vec<usize>]) -> Result<Self, AnalysisError> {
        let mut p = Self::empty(rows.len())?;
        for (r, row) in rows.iter().enumerate() {
            if row.len() != p.n {
                return Err(AnalysisError::Unsupported(format!("row {} has {} entries", r + 1, row.len())));
            }
            for (c, &s) in row.iter().enumerate() {
                if s != 0 {
                    p.set(r + 1, c + 1, s)?;
                }
            }
        }
        Ok(p)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, row: usize, col: usize) -> Option<usize> {
        self.cells[(row - 1) * self.n + col - 1].map(usize::from)
    }

    /// Fills a cell; fails on an out-of-range symbol or a clash in the row
    /// or column.
    pub fn set(&mut self, row: usize, col: usize, s: usize) -> Result<(), AnalysisError> {
        if s == 0 || s > self.n {
            return Err(AnalysisError::Unsupported(format!("symbol {s} outside 1..={}", self.n)));
        }
        for i in 1..=self.n {
            if (i != col && self.get(row, i) == Some(s)) || (i != row && self.get(i, col) == Some(s)) {
                return Err(AnalysisError::Unsupported(format!("symbol {s} repeats in row {row} or column {col}")));
            }
        }
        self.cells[(row - 1) * self.n + col - 1] = Some(s as u8);
        Ok(())
    }

    pub fn filled(&self) -> usize {
        self.cells.iter().filter(|c| c.is_some()).count()
    }

    pub fn is_complete(&self) -> bool {
        self.cells.iter().all(Option::is_some)
    }
}

struct Solver {
    n: usize,
    empty: Vec<usize>,
}

impl Solver {
    fn allowed(&self, sq: &PartialLatinSquare, idx: usize) -> Vec<u8> {
        let (r, c) = (idx / self.n, idx % self.n);
        (1..=self.n as u8)
            .filter(|&s| {
                (0..self.n).all(|i| sq.cells[r * self.n + i] != Some(s) && sq.cells[i * self.n + c] != Some(s))
            })
            .collect()
    }

    fn dfs(
        &self,
        i: usize,
        sq: &mut PartialLatinSquare,
        meter: &mut Meter,
        cap: u64,
        out: &mut Vec<PartialLatinSquare>,
    ) {
        if i == self.empty.len() {
            out.push(sq.clone());
            return;
        }
        let idx = self.empty[i];
        for s in self.allowed(sq, idx) {
            if !meter.tick() {
                return;
            }
            sq.cells[idx] = Some(s);
            self.dfs(i + 1, sq, meter, cap, out);
            sq.cells[idx] = None;
            if out.len() as u64 >= cap || meter.stopped() {
                return;
            }
        }
    }
}

/// Latin squares extending `p`, cells filled row-major with symbols in
/// increasing order.
pub fn latin_squares(
    p: &PartialLatinSquare,
    budget: &EnumerationBudget,
    workers: usize,
) -> Enumeration<PartialLatinSquare> {
    let n = p.n;
    let empty: Vec<usize> = (0..n * n).filter(|&i| p.cells[i].is_none()).collect();
    let solver = Solver { n, empty };
    if solver.empty.is_empty() {
        return run_branches(&[()], budget, workers, |_, _, _, out| out.push(p.clone()));
    }
    let first = solver.allowed(p, solver.empty[0]);
    run_branches(&first, budget, workers, |&s, meter, cap, out| {
        if !meter.tick() {
            return;
        }
        let mut sq = p.clone();
        sq.cells[solver.empty[0]] = Some(s);
        solver.dfs(1, &mut sq, meter, cap, out);
    })
}

/// Number of Latin squares extending `p`, and the enumeration status.
pub fn latin_completions(
    p: &PartialLatinSquare,
    budget: &EnumerationBudget,
    workers: usize,
) -> (u64, super::EnumStatus) {
    let e = latin_squares(p, budget, workers);
    (e.solutions.len() as u64, e.status)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::EnumStatus;

    fn all() -> EnumerationBudget {
        EnumerationBudget::enumerate_all()
    }

    #[test]
    fn classical_counts() {
        for (n, count) in [(1, 1), (2, 2), (3, 12), (4, 576)] {
            assert_eq!(
                latin_completions(&PartialLatinSquare::empty(n).unwrap(), &all(), 1),
                (count, EnumStatus::Complete)
            );
        }
    }

    #[test]
    fn one_entry_fixes_an_order_two_square() {
        let mut p = PartialLatinSquare::empty(2).unwrap();
        p.set(1, 1, 1).unwrap();
        assert_eq!(latin_completions(&p, &all(), 1).0, 1);
    }

    #[test]
    fn complete_square_counts_once() {
        let p = PartialLatinSquare::from_rows(&[vec![1, 2, 3], vec![2, 3, 1], vec![3, 1, 2]]).unwrap();
        assert!(p.is_complete());
        assert_eq!(latin_completions(&p, &all(), 1).0, 1);
    }

    #[test]
    fn clashes_are_rejected() {
        assert!(PartialLatinSquare::from_rows(&[vec![1, 1], vec![0, 0]]).is_err());
        assert!(PartialLatinSquare::empty(6).is_err());
    }

    #[test]
    fn workers_do_not_change_the_order() {
        let p = PartialLatinSquare::empty(4).unwrap();
        assert_eq!(latin_squares(&p, &all(), 1), latin_squares(&p, &all(), 4));
    }
}
