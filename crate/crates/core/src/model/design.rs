use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::ModelError;
use crate::numeric::binomial;

/// A `k`-subset of `N(v)`, stored sorted.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Block(Vec<u16>);

impl Block {
    /// Sorts `elements`; fails if they are not `k` distinct points of `1..=v`.
    pub fn new(elements: &[usize], v: usize, k: usize) -> Result<Self, ModelError> {
        let mut e: Vec<usize> = elements.to_vec();
        e.sort_unstable();
        let ok = e.len() == k
            && e.windows(2).all(|w| w[0] < w[1])
            && e.first().is_none_or(|&x| x >= 1)
            && e.last().is_none_or(|&x| x <= v);
        if !ok {
            return Err(ModelError::Block { block: elements.to_vec(), v, k });
        }
        Ok(Self(e.into_iter().map(|x| x as u16).collect()))
    }

    pub(crate) fn from_sorted_unchecked(elements: Vec<u16>) -> Self {
        debug_assert!(elements.windows(2).all(|w| w[0] < w[1]));
        Self(elements)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn elements(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().map(|&x| x as usize)
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.elements().collect()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.0.binary_search(&(x as u16)).is_ok()
    }

    pub fn contains_all(&self, xs: &[usize]) -> bool {
        xs.iter().all(|&x| self.contains(x))
    }

    /// All unordered pairs inside the block, as `(lo, hi)`.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let e = &self.0;
        (0..e.len()).flat_map(move |i| ((i + 1)..e.len()).map(move |j| (e[i] as usize, e[j] as usize)))
    }
}

impl fmt::Debug for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.elements()).finish()
    }
}

/// All `k`-subsets of `N(v)` in lexicographic order.
pub fn all_blocks(v: usize, k: usize) -> Vec<Block> {
    let mut out = Vec::with_capacity(binomial(v as u64, k as u64) as usize);
    if k > v {
        return out;
    }
    let mut idx: Vec<u16> = (1..=k as u16).collect();
    loop {
        out.push(Block::from_sorted_unchecked(idx.clone()));
        // advance to the next combination
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if (idx[i] as usize) < v - (k - 1 - i) {
                idx[i] += 1;
                for j in (i + 1)..k {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

fn check_params(v: usize, k: usize) -> Result<(), ModelError> {
    if k < 1 {
        return Err(ModelError::Parameter { name: "k", value: k, min: 1 });
    }
    if k > v {
        return Err(ModelError::BlockSize { v, k });
    }
    Ok(())
}

/// A simple collection of blocks: a subset of `F(v,k)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PartialDesign {
    v: usize,
    k: usize,
    blocks: BTreeSet<Block>,
}

impl PartialDesign {
    pub fn empty(v: usize, k: usize) -> Result<Self, ModelError> {
        check_params(v, k)?;
        Ok(Self { v, k, blocks: BTreeSet::new() })
    }

    /// `F(v,k)`.
    pub fn full(v: usize, k: usize) -> Result<Self, ModelError> {
        check_params(v, k)?;
        Ok(Self { v, k, blocks: all_blocks(v, k).into_iter().collect() })
    }

    pub fn from_blocks<I>(v: usize, k: usize, blocks: I) -> Result<Self, ModelError>
    where
        I: IntoIterator<Item = Block>,
    {
        check_params(v, k)?;
        let mut set = BTreeSet::new();
        for b in blocks {
            if b.len() != k || b.elements().any(|x| x > v) {
                return Err(ModelError::Block { block: b.to_vec(), v, k });
            }
            if !set.insert(b.clone()) {
                return Err(ModelError::RepeatedBlock(b.to_vec()));
            }
        }
        Ok(Self { v, k, blocks: set })
    }

    pub fn v(&self) -> usize {
        self.v
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// `C(v-2, k-2)`, the pair multiplicity of the full design.
    pub fn full_lambda(&self) -> u64 {
        full_lambda(self.v, self.k)
    }

    pub fn blocks(&self) -> &BTreeSet<Block> {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn contains(&self, b: &Block) -> bool {
        self.blocks.contains(b)
    }

    pub fn insert(&mut self, b: Block) -> bool {
        assert!(b.len() == self.k && b.elements().all(|x| x <= self.v));
        self.blocks.insert(b)
    }

    pub fn remove(&mut self, b: &Block) -> bool {
        self.blocks.remove(b)
    }

    /// Blocks of `F(v,k)` missing from this set.
    pub fn complement(&self) -> PartialDesign {
        let blocks = all_blocks(self.v, self.k).into_iter().filter(|b| !self.blocks.contains(b)).collect();
        Self { v: self.v, k: self.k, blocks }
    }

    /// The same blocks viewed as a candidate with multiplicity one each.
    pub fn to_candidate(&self, lambda: u64) -> DesignCandidate {
        DesignCandidate { v: self.v, k: self.k, lambda, blocks: self.blocks.iter().map(|b| (b.clone(), 1)).collect() }
    }
}

impl fmt::Debug for PartialDesign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::model::io::serialize_partial_design(self))
    }
}

pub fn full_lambda(v: usize, k: usize) -> u64 {
    if k < 2 || v < 2 {
        return 0;
    }
    binomial((v - 2) as u64, (k - 2) as u64)
}

/// First pair-coverage failure found by [`DesignCandidate::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairViolation {
    pub pair: (usize, usize),
    pub covered: u64,
    pub lambda: u64,
}

impl fmt::Display for PairViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "pair {{{},{}}} covered {} times, expected {}", self.pair.0, self.pair.1, self.covered, self.lambda)
    }
}

/// A multiset of `k`-blocks with a target pair multiplicity `lambda`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DesignCandidate {
    v: usize,
    k: usize,
    lambda: u64,
    blocks: BTreeMap<Block, u32>,
}

impl DesignCandidate {
    pub fn new(v: usize, k: usize, lambda: u64) -> Result<Self, ModelError> {
        check_params(v, k)?;
        Ok(Self { v, k, lambda, blocks: BTreeMap::new() })
    }

    /// `F(v,k)` with `lambda = C(v-2,k-2)`.
    pub fn full(v: usize, k: usize) -> Result<Self, ModelError> {
        Ok(PartialDesign::full(v, k)?.to_candidate(full_lambda(v, k)))
    }

    pub fn v(&self) -> usize {
        self.v
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn lambda(&self) -> u64 {
        self.lambda
    }

    pub fn blocks(&self) -> &BTreeMap<Block, u32> {
        &self.blocks
    }

    pub fn multiplicity(&self, b: &Block) -> u32 {
        self.blocks.get(b).copied().unwrap_or(0)
    }

    /// Total number of blocks counted with multiplicity.
    pub fn size(&self) -> u64 {
        self.blocks.values().map(|&c| c as u64).sum()
    }

    pub fn add(&mut self, b: Block, by: u32) {
        assert!(b.len() == self.k && b.elements().all(|x| x <= self.v));
        if by > 0 {
            *self.blocks.entry(b).or_insert(0) += by;
        }
    }

    /// Removes one copy; false if the block is absent.
    pub fn remove_one(&mut self, b: &Block) -> bool {
        match self.blocks.get_mut(b) {
            Some(c) if *c > 1 => {
                *c -= 1;
                true
            }
            Some(_) => {
                self.blocks.remove(b);
                true
            }
            None => false,
        }
    }

    pub fn is_simple(&self) -> bool {
        self.blocks.values().all(|&c| c == 1)
    }

    /// True if every block of `d` occurs here at least once.
    pub fn contains_design(&self, d: &PartialDesign) -> bool {
        self.v == d.v() && self.k == d.k() && d.blocks().iter().all(|b| self.blocks.contains_key(b))
    }

    /// Number of blocks (with multiplicity) containing each pair, indexed
    /// by [`pair_index`].
    pub fn pair_coverage(&self) -> Vec<u64> {
        let mut cov = vec![0u64; self.v * (self.v.saturating_sub(1)) / 2];
        for (b, &c) in &self.blocks {
            for (x, y) in b.pairs() {
                cov[pair_index(self.v, x, y)] += c as u64;
            }
        }
        cov
    }

    /// Exact pair-coverage check against `lambda`.
    pub fn validate(&self) -> Result<(), PairViolation> {
        let cov = self.pair_coverage();
        for x in 1..=self.v {
            for y in (x + 1)..=self.v {
                let covered = cov[pair_index(self.v, x, y)];
                if covered != self.lambda {
                    return Err(PairViolation { pair: (x, y), covered, lambda: self.lambda });
                }
            }
        }
        Ok(())
    }

    /// Converts to a simple design; `None` if some block is repeated.
    pub fn to_partial(&self) -> Option<PartialDesign> {
        if !self.is_simple() {
            return None;
        }
        Some(PartialDesign { v: self.v, k: self.k, blocks: self.blocks.keys().cloned().collect() })
    }

    pub(crate) fn from_parts(v: usize, k: usize, lambda: u64, blocks: BTreeMap<Block, u32>) -> Self {
        Self { v, k, lambda, blocks }
    }
}

impl fmt::Debug for DesignCandidate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::model::io::serialize_candidate(self))
    }
}

/// Dense index of the pair `{x,y}` (1-based, `x != y`) among the
/// `C(v,2)` pairs of `N(v)`, in lexicographic order.
pub fn pair_index(v: usize, x: usize, y: usize) -> usize {
    let (a, b) = if x < y { (x - 1, y - 1) } else { (y - 1, x - 1) };
    a * (2 * v - a - 1) / 2 + (b - a - 1)
}
