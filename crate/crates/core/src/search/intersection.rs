use crate::error::AnalysisError;
use crate::model::PartialRectangle;
use crate::oracle::{
    self, latin_completions, latin_squares, EnumStatus, EnumerationBudget, PartialLatinSquare, VerdictStatus,
};

/// `D∩L`: the cells of `L` whose symbol also appears in that cell of `D`.
pub fn intersect(d: &PartialRectangle, l: &PartialLatinSquare) -> Result<PartialLatinSquare, AnalysisError> {
    let n = l.n();
    if d.dims() != (n, n, n) {
        return Err(AnalysisError::Mismatch(format!("{:?} against a Latin square of order {n}", d.dims())));
    }
    let mut p = PartialLatinSquare::empty(n)?;
    for r in 1..=n {
        for c in 1..=n {
            let s = l.get(r, c).ok_or_else(|| AnalysisError::Mismatch("Latin square has an empty cell".into()))?;
            if d.cell(r, c).count(s) > 0 {
                p.set(r, c, s)?;
            }
        }
    }
    Ok(p)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntersectionReport {
    pub n: usize,
    pub squares_checked: usize,
    /// `(L, D∩L, completions of D∩L)` for every `L` that is not the unique
    /// completion of `D∩L`.
    pub violations: Vec<(PartialLatinSquare, PartialLatinSquare, u64)>,
    /// Some count hit the budget; such squares are not counted as checked.
    pub exhausted: usize,
}

impl IntersectionReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty() && self.exhausted == 0
    }
}

/// Checks that `D∩L` is a defining set of `L` for every Latin square `L` of
/// order `n`, after confirming with the oracle that `D` defines `F_{n,n,n}`.
pub fn intersection_check(
    d: &PartialRectangle,
    budget: &EnumerationBudget,
) -> Result<IntersectionReport, AnalysisError> {
    let (m, n, t) = d.dims();
    if m != n || n != t || n > 3 {
        return Err(AnalysisError::Unsupported(format!(
            "intersection check needs F_{{n,n,n}} with n <= 3, got ({m},{n},{t})"
        )));
    }
    let verdict = oracle::is_defining_rect(d, budget, 1, None)?;
    if verdict.status != VerdictStatus::Defining {
        return Err(AnalysisError::Mismatch(format!("D is {} for F_{{{n},{n},{n}}}", verdict.status.name())));
    }
    let all = latin_squares(&PartialLatinSquare::empty(n)?, &EnumerationBudget::enumerate_all(), 1);
    if all.status != EnumStatus::Complete {
        return Err(AnalysisError::Mismatch("could not enumerate the Latin squares".into()));
    }
    let mut report = IntersectionReport { n, squares_checked: 0, violations: Vec::new(), exhausted: 0 };
    let count_budget = budget.with_max_solutions(Some(2));
    for l in &all.solutions {
        let p = intersect(d, l)?;
        let (count, status) = latin_completions(&p, &count_budget, 1);
        if matches!(status, EnumStatus::Exhausted(_)) && count < 2 {
            report.exhausted += 1;
            continue;
        }
        report.squares_checked += 1;
        if count != 1 {
            report.violations.push((l.clone(), p, count));
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::io::parse_rectangle;

    #[test]
    fn one_full_cell_at_n2() {
        let d = parse_rectangle("rect 2 2 2\n1,2 | .\n. | .\n").unwrap();
        let r = intersection_check(&d, &EnumerationBudget::verdict()).unwrap();
        assert_eq!(r.squares_checked, 2);
        assert!(r.holds());
        let l = PartialLatinSquare::from_rows(&[vec![2, 1], vec![1, 2]]).unwrap();
        assert_eq!(intersect(&d, &l).unwrap().filled(), 1);
    }

    #[test]
    fn full_square_intersects_to_l() {
        let f = PartialRectangle::full(3, 3, 3).unwrap();
        let r = intersection_check(&f, &EnumerationBudget::verdict()).unwrap();
        assert_eq!(r.squares_checked, 12);
        assert!(r.holds());
    }

    #[test]
    fn non_defining_input_is_rejected() {
        let d = PartialRectangle::empty(2, 2, 2).unwrap();
        assert!(intersection_check(&d, &EnumerationBudget::verdict()).is_err());
    }
}
