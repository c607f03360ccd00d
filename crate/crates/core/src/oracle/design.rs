use std::collections::BTreeMap;

use super::{run_branches, EnumStatus, Enumeration, EnumerationBudget, Meter, OracleVerdict};
use crate::error::AnalysisError;
use crate::model::{all_blocks, full_lambda, pair_index, Block, DesignCandidate, PartialDesign};
use crate::numeric::binomial;

/// Default cap on `C(v,k)` for the design oracle.
pub const DESIGN_BLOCK_GUARD: u64 = 40;

struct Problem {
    v: usize,
    k: usize,
    lambda: u64,
    blocks: Vec<Block>,
    lower: Vec<u64>,
    pairs_of: Vec<Vec<usize>>,
    blocks_of: Vec<Vec<usize>>,
}

impl Problem {
    fn new(d: &PartialDesign, lambda: u64) -> Self {
        let (v, k) = (d.v(), d.k());
        let blocks = all_blocks(v, k);
        let lower = blocks.iter().map(|b| u64::from(d.contains(b))).collect();
        let pairs_of: Vec<Vec<usize>> =
            blocks.iter().map(|b| b.pairs().map(|(x, y)| pair_index(v, x, y)).collect()).collect();
        let mut blocks_of = vec![Vec::new(); v * (v - 1) / 2];
        for (i, ps) in pairs_of.iter().enumerate() {
            for &p in ps {
                blocks_of[p].push(i);
            }
        }
        Self { v, k, lambda, blocks, lower, pairs_of, blocks_of }
    }

    fn choices(&self, i: usize, need: &[u64]) -> std::ops::RangeInclusive<u64> {
        let hi = self.pairs_of[i].iter().map(|&p| need[p]).min().unwrap_or(0);
        self.lower[i]..=hi
    }

    fn apply(&self, i: usize, mult: u64, need: &mut [u64]) {
        for &p in &self.pairs_of[i] {
            need[p] -= mult;
        }
    }

    fn undo(&self, i: usize, mult: u64, need: &mut [u64]) {
        for &p in &self.pairs_of[i] {
            need[p] += mult;
        }
    }

    /// Blocks `from..` must be able to meet every residual pair need, and
    /// the blocks of `D` among them must fit inside it.
    fn feasible(&self, from: usize, need: &[u64]) -> bool {
        let cap: Vec<u64> =
            (from..self.blocks.len()).map(|b| self.pairs_of[b].iter().map(|&p| need[p]).min().unwrap_or(0)).collect();
        for (p, bs) in self.blocks_of.iter().enumerate() {
            let (mut supply, mut forced) = (0u64, 0u64);
            for &b in bs.iter().filter(|&&b| b >= from) {
                supply += cap[b - from];
                forced += self.lower[b];
            }
            if supply < need[p] || forced > need[p] {
                return false;
            }
        }
        true
    }

    fn solution(&self, mult: &[u64]) -> DesignCandidate {
        let blocks: BTreeMap<Block, u32> = self
            .blocks
            .iter()
            .zip(mult)
            .filter(|(_, &c)| c > 0)
            .map(|(b, &c)| (b.clone(), u32::try_from(c).expect("multiplicity fits u32")))
            .collect();
        let c = DesignCandidate::from_parts(self.v, self.k, self.lambda, blocks);
        c.validate().expect("enumerated candidate covers every pair lambda times");
        c
    }

    fn dfs(
        &self,
        i: usize,
        need: &mut [u64],
        mult: &mut Vec<u64>,
        meter: &mut Meter,
        cap: u64,
        out: &mut Vec<DesignCandidate>,
    ) {
        if i == self.blocks.len() {
            out.push(self.solution(mult));
            return;
        }
        for x in self.choices(i, need) {
            if !meter.tick() {
                return;
            }
            self.apply(i, x, need);
            mult.push(x);
            if self.feasible(i + 1, need) {
                self.dfs(i + 1, need, mult, meter, cap, out);
            }
            mult.pop();
            self.undo(i, x, need);
            if out.len() as u64 >= cap || meter.stopped() {
                return;
            }
        }
    }
}

/// Every block multiset containing `d` in which each pair is covered
/// exactly `lambda` times, multiplicities chosen block by block in
/// lexicographic block order, smallest first. `guard` caps `C(v,k)`.
pub fn enumerate_design_candidates(
    d: &PartialDesign,
    lambda: u64,
    budget: &EnumerationBudget,
    workers: usize,
    guard: Option<u64>,
) -> Result<Enumeration<DesignCandidate>, AnalysisError> {
    let (v, k) = (d.v(), d.k());
    if k < 2 {
        return Err(AnalysisError::Unsupported(format!("k = {k} (need k >= 2)")));
    }
    let total = binomial(v as u64, k as u64);
    if let Some(g) = guard {
        if total > g {
            return Err(AnalysisError::TooLarge { vertices: total as usize, limit: g as usize });
        }
    }
    let p = Problem::new(d, lambda);
    let root = vec![lambda; v * (v - 1) / 2];
    if !p.feasible(0, &root) {
        return Ok(Enumeration { solutions: Vec::new(), status: EnumStatus::Complete, nodes: 0 });
    }
    let first: Vec<u64> = p.choices(0, &root).collect();
    Ok(run_branches(&first, budget, workers, |&x, meter, cap, out| {
        if !meter.tick() {
            return;
        }
        let mut need = root.clone();
        p.apply(0, x, &mut need);
        let mut mult = vec![x];
        if p.feasible(1, &need) {
            p.dfs(1, &mut need, &mut mult, meter, cap, out);
        }
    }))
}

/// Decides whether `d` is a defining set of `F(v,k)`: no other design with
/// the same parameters (repeated blocks allowed) contains it.
pub fn is_defining_design(
    d: &PartialDesign,
    budget: &EnumerationBudget,
    workers: usize,
    guard: Option<u64>,
) -> Result<OracleVerdict<DesignCandidate>, AnalysisError> {
    let full = DesignCandidate::full(d.v(), d.k())?;
    let budget = budget.with_max_solutions(Some(budget.max_solutions.map_or(2, |c| c.max(2))));
    let e = enumerate_design_candidates(d, full_lambda(d.v(), d.k()), &budget, workers, guard)?;
    Ok(OracleVerdict::from_enumeration(e, full))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::VerdictStatus;

    fn all() -> EnumerationBudget {
        EnumerationBudget::enumerate_all()
    }

    fn verdict(d: &PartialDesign) -> VerdictStatus {
        is_defining_design(d, &EnumerationBudget::verdict(), 1, Some(DESIGN_BLOCK_GUARD)).unwrap().status
    }

    #[test]
    fn f43_is_the_only_4_3_2_design() {
        let e = enumerate_design_candidates(&PartialDesign::empty(4, 3).unwrap(), 2, &all(), 1, None).unwrap();
        assert_eq!(e.status, EnumStatus::Complete);
        assert_eq!(e.solutions, vec![DesignCandidate::full(4, 3).unwrap()]);
        assert_eq!(verdict(&PartialDesign::empty(4, 3).unwrap()), VerdictStatus::Defining);
    }

    #[test]
    fn brute_force_agrees_on_small_parameters() {
        // multiplicities are at most lambda, so (lambda+1)^C(v,k) vectors
        for (v, k, lambda) in [(4, 3, 2), (4, 3, 4), (5, 3, 3), (4, 2, 2), (5, 4, 3)] {
            let blocks = all_blocks(v, k);
            let mut count = 0u64;
            let mut m = vec![0u32; blocks.len()];
            'outer: loop {
                let mut c = DesignCandidate::new(v, k, lambda).unwrap();
                for (b, &x) in blocks.iter().zip(&m) {
                    c.add(b.clone(), x);
                }
                if c.validate().is_ok() {
                    count += 1;
                }
                for slot in m.iter_mut() {
                    *slot += 1;
                    if u64::from(*slot) <= lambda {
                        continue 'outer;
                    }
                    *slot = 0;
                }
                break;
            }
            let e = enumerate_design_candidates(&PartialDesign::empty(v, k).unwrap(), lambda, &all(), 1, None).unwrap();
            assert_eq!(e.solutions.len() as u64, count, "({v},{k},{lambda})");
        }
    }

    #[test]
    fn empty_f63_is_not_defining() {
        assert_eq!(verdict(&PartialDesign::empty(6, 3).unwrap()), VerdictStatus::NotDefining);
    }

    #[test]
    fn full_design_is_defining() {
        for (v, k) in [(5, 3), (6, 3), (6, 4)] {
            let e =
                enumerate_design_candidates(&PartialDesign::full(v, k).unwrap(), full_lambda(v, k), &all(), 1, None)
                    .unwrap();
            assert_eq!(e.solutions.len(), 1);
        }
    }

    #[test]
    fn f73_example_has_the_swapped_candidate() {
        let mut d = PartialDesign::full(7, 3).unwrap();
        let blk = |e: &[usize]| Block::new(e, 7, 3).unwrap();
        for (i, j) in [(1, 2), (2, 3), (3, 1), (1, 4), (4, 5), (5, 1)] {
            for x in [6, 7] {
                d.remove(&blk(&[i, j, x]));
            }
        }
        let mut swapped = DesignCandidate::full(7, 3).unwrap();
        for b in [[1, 2, 6], [2, 3, 7], [3, 1, 6], [1, 4, 7], [4, 5, 6], [5, 1, 7]] {
            swapped.remove_one(&blk(&b));
        }
        for b in [[1, 2, 7], [2, 3, 6], [3, 1, 7], [1, 4, 6], [4, 5, 7], [5, 1, 6]] {
            swapped.add(blk(&b), 1);
        }
        let e = enumerate_design_candidates(&d, 5, &all(), 1, Some(DESIGN_BLOCK_GUARD)).unwrap();
        assert_eq!(e.status, EnumStatus::Complete);
        assert!(e.solutions.contains(&DesignCandidate::full(7, 3).unwrap()));
        assert!(e.solutions.contains(&swapped));
        assert_eq!(verdict(&d), VerdictStatus::NotDefining);
    }

    #[test]
    fn f53_minus_one_block_regression() {
        let mut d = PartialDesign::full(5, 3).unwrap();
        d.remove(&Block::new(&[1, 2, 3], 5, 3).unwrap());
        assert_eq!(verdict(&d), VerdictStatus::Defining);
    }

    #[test]
    fn guard_rejects_large_parameters() {
        let d = PartialDesign::empty(8, 4).unwrap();
        assert!(matches!(
            enumerate_design_candidates(&d, 15, &all(), 1, Some(DESIGN_BLOCK_GUARD)),
            Err(AnalysisError::TooLarge { .. })
        ));
    }

    #[test]
    fn workers_do_not_change_the_enumeration() {
        let d = PartialDesign::empty(6, 3).unwrap();
        let b = EnumerationBudget::enumerate_all().with_max_solutions(Some(50));
        assert_eq!(
            enumerate_design_candidates(&d, 4, &b, 1, None).unwrap(),
            enumerate_design_candidates(&d, 4, &b, 4, None).unwrap()
        );
    }
}
