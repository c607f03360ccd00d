use std::fmt;

use crate::error::ModelError;

/// Multiplicity vector over the symbols `1..=t`.
///
/// Symbols are 1-based at the API surface; `counts[s - 1]` holds the
/// multiplicity of symbol `s`. The all-zero vector is the empty cell.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SymbolMultiset {
    counts: Vec<u32>,
}

impl SymbolMultiset {
    pub fn empty(t: usize) -> Self {
        Self { counts: vec![0; t] }
    }

    /// The set `N(t)`: every symbol exactly once.
    pub fn full(t: usize) -> Self {
        Self { counts: vec![1; t] }
    }

    pub fn from_counts(counts: Vec<u32>) -> Self {
        Self { counts }
    }

    /// Builds a multiset from 1-based symbols, repetition allowed.
    /// Returns `None` if a symbol is outside `1..=t`.
    pub fn from_symbols(t: usize, symbols: &[usize]) -> Option<Self> {
        let mut counts = vec![0; t];
        for &s in symbols {
            if s == 0 || s > t {
                return None;
            }
            counts[s - 1] += 1;
        }
        Some(Self { counts })
    }

    pub fn t(&self) -> usize {
        self.counts.len()
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    /// Multiplicity of the 1-based symbol `s`.
    pub fn count(&self, s: usize) -> u32 {
        self.counts[s - 1]
    }

    pub fn total(&self) -> u32 {
        self.counts.iter().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.iter().all(|&c| c == 0)
    }

    pub fn is_full(&self) -> bool {
        self.counts.iter().all(|&c| c == 1)
    }

    /// True when no symbol is repeated.
    pub fn is_set(&self) -> bool {
        self.counts.iter().all(|&c| c <= 1)
    }

    /// Number of distinct symbols present.
    pub fn distinct(&self) -> usize {
        self.counts.iter().filter(|&&c| c > 0).count()
    }

    /// Cellwise multiset containment `self ⊆ other`.
    pub fn is_subset_of(&self, other: &Self) -> bool {
        self.counts.len() == other.counts.len() && self.counts.iter().zip(&other.counts).all(|(a, b)| a <= b)
    }

    pub fn add(&mut self, s: usize, by: u32) {
        self.counts[s - 1] += by;
    }

    /// Removes `by` copies of `s`; returns false (and leaves the cell
    /// untouched) if fewer are present.
    pub fn remove(&mut self, s: usize, by: u32) -> bool {
        let c = &mut self.counts[s - 1];
        if *c < by {
            return false;
        }
        *c -= by;
        true
    }

    /// Symbols in ascending order, each repeated by its multiplicity.
    pub fn symbols(&self) -> impl Iterator<Item = usize> + '_ {
        self.counts.iter().enumerate().flat_map(|(i, &c)| std::iter::repeat_n(i + 1, c as usize))
    }
}

impl fmt::Debug for SymbolMultiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.symbols()).finish()
    }
}

/// First constraint found violated by [`PartialRectangle::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RectViolation {
    CellOverfull { row: usize, col: usize, size: u32, cap: usize },
    RowExcess { row: usize, symbol: usize, count: u32, cap: usize },
    ColumnExcess { col: usize, symbol: usize, count: u32, cap: usize },
    CellNotFull { row: usize, col: usize, size: u32, t: usize },
    RowShort { row: usize, symbol: usize, count: u32, need: usize },
    ColumnShort { col: usize, symbol: usize, count: u32, need: usize },
}

impl fmt::Display for RectViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Self::CellOverfull { row, col, size, cap } => {
                write!(f, "cell ({row},{col}) holds {size} symbols, cap is {cap}")
            }
            Self::RowExcess { row, symbol, count, cap } => {
                write!(f, "row {row} holds symbol {symbol} {count} times, cap is {cap}")
            }
            Self::ColumnExcess { col, symbol, count, cap } => {
                write!(f, "column {col} holds symbol {symbol} {count} times, cap is {cap}")
            }
            Self::CellNotFull { row, col, size, t } => {
                write!(f, "cell ({row},{col}) holds {size} symbols, balanced needs {t}")
            }
            Self::RowShort { row, symbol, count, need } => {
                write!(f, "row {row} holds symbol {symbol} {count} times, balanced needs {need}")
            }
            Self::ColumnShort { col, symbol, count, need } => {
                write!(f, "column {col} holds symbol {symbol} {count} times, balanced needs {need}")
            }
        }
    }
}

/// An `m × n` grid of multisets over `N(t)`.
///
/// Construction checks only the shape; the row/column/cell caps are checked
/// by [`validate`](Self::validate). Rows and columns are 1-based in the
/// accessors and in every diagnostic.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PartialRectangle {
    m: usize,
    n: usize,
    t: usize,
    cells: Vec<SymbolMultiset>,
}

impl PartialRectangle {
    pub fn empty(m: usize, n: usize, t: usize) -> Result<Self, ModelError> {
        check_dims(m, n, t)?;
        Ok(Self { m, n, t, cells: vec![SymbolMultiset::empty(t); m * n] })
    }

    /// `F_{m,n,t}`: every cell holds `N(t)`.
    pub fn full(m: usize, n: usize, t: usize) -> Result<Self, ModelError> {
        check_dims(m, n, t)?;
        Ok(Self { m, n, t, cells: vec![SymbolMultiset::full(t); m * n] })
    }

    /// Row-major cells.
    pub fn from_cells(m: usize, n: usize, t: usize, cells: Vec<SymbolMultiset>) -> Result<Self, ModelError> {
        check_dims(m, n, t)?;
        if cells.len() != m * n {
            return Err(ModelError::CellCount { expected: m * n, actual: cells.len() });
        }
        for (idx, c) in cells.iter().enumerate() {
            if c.t() != t {
                return Err(ModelError::CellWidth { row: idx / n + 1, col: idx % n + 1, expected: t, actual: c.t() });
            }
        }
        Ok(Self { m, n, t, cells })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn dims(&self) -> (usize, usize, usize) {
        (self.m, self.n, self.t)
    }

    pub fn cells(&self) -> &[SymbolMultiset] {
        &self.cells
    }

    /// Cell at 1-based `(row, col)`.
    pub fn cell(&self, row: usize, col: usize) -> &SymbolMultiset {
        &self.cells[(row - 1) * self.n + (col - 1)]
    }

    pub fn cell_mut(&mut self, row: usize, col: usize) -> &mut SymbolMultiset {
        &mut self.cells[(row - 1) * self.n + (col - 1)]
    }

    pub fn set_cell(&mut self, row: usize, col: usize, cell: SymbolMultiset) {
        assert_eq!(cell.t(), self.t, "cell width must equal t");
        *self.cell_mut(row, col) = cell;
    }

    /// `(row, col, cell)` in row-major order, 1-based.
    pub fn iter_cells(&self) -> impl Iterator<Item = (usize, usize, &SymbolMultiset)> {
        let n = self.n;
        self.cells.iter().enumerate().map(move |(i, c)| (i / n + 1, i % n + 1, c))
    }

    /// `|L|`: the sum of all multiplicities.
    pub fn size(&self) -> u64 {
        self.cells.iter().map(|c| c.total() as u64).sum()
    }

    /// Every cell is empty or exactly `N(t)`.
    pub fn is_saturated(&self) -> bool {
        self.cells.iter().all(|c| c.is_empty() || c.is_full())
    }

    /// Every cell is a set (no repeated symbol).
    pub fn is_simple(&self) -> bool {
        self.cells.iter().all(SymbolMultiset::is_set)
    }

    pub fn is_subset_of(&self, other: &Self) -> bool {
        self.dims() == other.dims() && self.cells.iter().zip(&other.cells).all(|(a, b)| a.is_subset_of(b))
    }

    pub fn row_count(&self, row: usize, s: usize) -> u32 {
        (1..=self.n).map(|c| self.cell(row, c).count(s)).sum()
    }

    pub fn col_count(&self, col: usize, s: usize) -> u32 {
        (1..=self.m).map(|r| self.cell(r, col).count(s)).sum()
    }

    /// Checks the partial caps: cell size ≤ t, each symbol at most `n` times
    /// per row and at most `m` times per column.
    pub fn validate(&self) -> Result<(), RectViolation> {
        for (row, col, c) in self.iter_cells() {
            let size = c.total();
            if size as usize > self.t {
                return Err(RectViolation::CellOverfull { row, col, size, cap: self.t });
            }
        }
        for row in 1..=self.m {
            for s in 1..=self.t {
                let count = self.row_count(row, s);
                if count as usize > self.n {
                    return Err(RectViolation::RowExcess { row, symbol: s, count, cap: self.n });
                }
            }
        }
        for col in 1..=self.n {
            for s in 1..=self.t {
                let count = self.col_count(col, s);
                if count as usize > self.m {
                    return Err(RectViolation::ColumnExcess { col, symbol: s, count, cap: self.m });
                }
            }
        }
        Ok(())
    }

    /// Checks the equalities of a complete balanced rectangle.
    pub fn validate_balanced(&self) -> Result<(), RectViolation> {
        self.validate()?;
        for (row, col, c) in self.iter_cells() {
            let size = c.total();
            if size as usize != self.t {
                return Err(RectViolation::CellNotFull { row, col, size, t: self.t });
            }
        }
        for row in 1..=self.m {
            for s in 1..=self.t {
                let count = self.row_count(row, s);
                if count as usize != self.n {
                    return Err(RectViolation::RowShort { row, symbol: s, count, need: self.n });
                }
            }
        }
        for col in 1..=self.n {
            for s in 1..=self.t {
                let count = self.col_count(col, s);
                if count as usize != self.m {
                    return Err(RectViolation::ColumnShort { col, symbol: s, count, need: self.m });
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for PartialRectangle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::model::io::serialize_rectangle(self))
    }
}

fn check_dims(m: usize, n: usize, t: usize) -> Result<(), ModelError> {
    for (name, value) in [("m", m), ("n", n), ("t", t)] {
        if value < 1 {
            return Err(ModelError::Parameter { name, value, min: 1 });
        }
    }
    Ok(())
}

/// A complete `(m,n,t)`-balanced rectangle.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BalancedRectangle(PartialRectangle);

impl BalancedRectangle {
    pub fn full(m: usize, n: usize, t: usize) -> Result<Self, ModelError> {
        PartialRectangle::full(m, n, t).map(Self)
    }

    pub fn as_partial(&self) -> &PartialRectangle {
        &self.0
    }

    pub fn into_partial(self) -> PartialRectangle {
        self.0
    }

    pub fn is_full(&self) -> bool {
        self.0.cells.iter().all(SymbolMultiset::is_full)
    }
}

impl TryFrom<PartialRectangle> for BalancedRectangle {
    type Error = RectViolation;

    fn try_from(r: PartialRectangle) -> Result<Self, Self::Error> {
        r.validate_balanced()?;
        Ok(Self(r))
    }
}

impl std::ops::Deref for BalancedRectangle {
    type Target = PartialRectangle;

    fn deref(&self) -> &PartialRectangle {
        &self.0
    }
}

impl fmt::Debug for BalancedRectangle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ms(t: usize, s: &[usize]) -> SymbolMultiset {
        SymbolMultiset::from_symbols(t, s).unwrap()
    }

    /// The 2×3, t=3 partial rectangle used as the standard non-defining example.
    pub(crate) fn worked_partial() -> PartialRectangle {
        PartialRectangle::from_cells(
            2,
            3,
            3,
            vec![ms(3, &[1]), ms(3, &[]), ms(3, &[]), ms(3, &[]), ms(3, &[2]), ms(3, &[2, 3])],
        )
        .unwrap()
    }

    #[test]
    fn worked_example_is_valid_with_size_four() {
        let d = worked_partial();
        assert_eq!(d.validate(), Ok(()));
        assert_eq!(d.size(), 4);
        assert!(!d.is_saturated());
    }

    #[test]
    fn full_rectangle_sizes() {
        // six cells of three symbols each
        assert_eq!(PartialRectangle::full(2, 3, 3).unwrap().size(), 18);
        for m in 1..=5 {
            for n in 1..=5 {
                for t in 1..=5 {
                    let f = BalancedRectangle::full(m, n, t).unwrap();
                    assert_eq!(f.size(), (m * n * t) as u64);
                    assert_eq!(f.validate_balanced(), Ok(()));
                }
            }
        }
    }

    #[test]
    fn empty_grid() {
        let e = PartialRectangle::empty(3, 2, 4).unwrap();
        assert_eq!(e.size(), 0);
        assert_eq!(e.validate(), Ok(()));
        assert!(e.is_saturated());
    }

    #[test]
    fn overfull_cell_is_a_violation() {
        let r = PartialRectangle::from_cells(1, 1, 1, vec![ms(1, &[1, 1])]).unwrap();
        assert!(matches!(r.validate(), Err(RectViolation::CellOverfull { size: 2, cap: 1, .. })));
    }

    #[test]
    fn dimension_mismatch_is_structural() {
        let err = PartialRectangle::from_cells(2, 2, 2, vec![SymbolMultiset::empty(2); 3]);
        assert_eq!(err, Err(ModelError::CellCount { expected: 4, actual: 3 }));
        let err = PartialRectangle::from_cells(1, 1, 2, vec![SymbolMultiset::empty(3)]);
        assert!(matches!(err, Err(ModelError::CellWidth { .. })));
        assert!(PartialRectangle::empty(1, 1, 0).is_err());
    }

    #[test]
    fn saturated_after_emptying_one_cell() {
        let mut f = PartialRectangle::full(3, 3, 3).unwrap();
        f.set_cell(2, 2, SymbolMultiset::empty(3));
        assert!(f.is_saturated());
    }

    #[test]
    fn row_excess_detected() {
        let r = PartialRectangle::from_cells(1, 2, 2, vec![ms(2, &[1, 1]), ms(2, &[1])]).unwrap();
        assert!(matches!(r.validate(), Err(RectViolation::RowExcess { symbol: 1, count: 3, .. })));
    }
}
