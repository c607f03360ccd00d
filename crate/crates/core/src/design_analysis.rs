//! Non-uniqueness certificates and lower bounds for defining sets of the
//! full design `F(v,k)`.
//!
//! For `k = 3` and a pair `{a,b}`, join `i` and `j` whenever neither
//! `{i,j,a}` nor `{i,j,b}` is in `D`. Along an even closed trail in that
//! graph, alternately trading `{i,j,a}` for a second `{i,j,b}` and vice
//! versa keeps every pair count fixed. For `k > 3`, fixing a `(k−3)`-set
//! `K` and deleting it from the blocks through `K` reduces to `k = 3`.

use std::fmt::Write;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::error::AnalysisError;
use crate::graph::{self, ClosedTrail, Edge, SimpleGraph};
use crate::model::io::serialize_candidate;
use crate::model::{all_blocks, Block, DesignCandidate, PartialDesign};
use crate::numeric::{big_binomial, guarded_ceil, int, ratio, Surd};
use crate::par;

fn check_pair(a: usize, b: usize, v: usize) -> Result<(), AnalysisError> {
    if a == b || a < 1 || b < 1 || a > v || b > v {
        return Err(AnalysisError::Pair { a, b, t: v });
    }
    Ok(())
}

fn triple(i: usize, j: usize, x: usize) -> Block {
    let mut e = [i as u16, j as u16, x as u16];
    e.sort_unstable();
    Block::from_sorted_unchecked(e.to_vec())
}

/// Pairs `{i,j} ⊂ N(v)∖{a,b}` with neither `{i,j,a}` nor `{i,j,b}` in `D`,
/// in lexicographic order, and their number `s_{a,b}(D)`.
pub fn s_ab(d: &PartialDesign, a: usize, b: usize) -> Result<(Vec<Edge>, usize), AnalysisError> {
    if d.k() != 3 {
        return Err(AnalysisError::Unsupported(format!("k = {} (project to k = 3 first)", d.k())));
    }
    check_pair(a, b, d.v())?;
    let v = d.v();
    let mut pairs = Vec::new();
    for i in 1..=v {
        for j in (i + 1)..=v {
            if [a, b].contains(&i) || [a, b].contains(&j) {
                continue;
            }
            if !d.contains(&triple(i, j, a)) && !d.contains(&triple(i, j, b)) {
                pairs.push((i, j));
            }
        }
    }
    let count = pairs.len();
    Ok((pairs, count))
}

/// `⌊(4v−11)/3⌋`, the extremal threshold applied to the `v−2` vertices of
/// the swap graph.
pub fn lemma4_threshold(v: usize) -> Result<usize, AnalysisError> {
    if v < 4 {
        return Err(AnalysisError::Unsupported(format!("v = {v} (need v >= 4)")));
    }
    Ok((4 * v - 11) / 3)
}

/// Swap graph for the pair `{a,b}`: vertex `x − 1` stands for point `x`;
/// `a` and `b` stay isolated.
pub fn swap_graph(d: &PartialDesign, a: usize, b: usize) -> Result<SimpleGraph, AnalysisError> {
    let (pairs, _) = s_ab(d, a, b)?;
    Ok(SimpleGraph::from_edges(d.v(), pairs.into_iter().map(|(i, j)| (i - 1, j - 1))))
}

/// Order-preserving relabelling `N(v)∖K → N(v−|K|)` used by [`project`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relabel {
    pub v: usize,
    pub k: usize,
    pub removed: Vec<usize>,
    /// `to_original[x − 1]` is the original label of projected point `x`.
    pub to_original: Vec<usize>,
}

impl Relabel {
    pub fn original(&self, x: usize) -> usize {
        self.to_original[x - 1]
    }

    /// Re-attaches `K` to a projected block.
    pub fn lift_block(&self, b: &Block) -> Block {
        let mut e: Vec<usize> = b.elements().map(|x| self.original(x)).collect();
        e.extend(&self.removed);
        Block::new(&e, self.v, self.k).expect("lifted block is a k-subset")
    }

    /// Lifts every block of a projected design.
    pub fn lift(&self, d: &PartialDesign) -> Vec<Block> {
        d.blocks().iter().map(|b| self.lift_block(b)).collect()
    }
}

/// `B_K`: the blocks of `D` through `K` with `K` deleted, relabelled onto
/// `N(v−k+3)` as a subset of `F(v−k+3, 3)`.
pub fn project(d: &PartialDesign, k_set: &[usize]) -> Result<(PartialDesign, Relabel), AnalysisError> {
    let (v, k) = (d.v(), d.k());
    let mut removed = k_set.to_vec();
    removed.sort_unstable();
    removed.dedup();
    if k < 3 || removed.len() != k - 3 || removed.len() != k_set.len() || removed.iter().any(|&x| x < 1 || x > v) {
        return Err(AnalysisError::Unsupported(format!(
            "K = {k_set:?} must be {} distinct points of 1..={v}",
            k.saturating_sub(3)
        )));
    }
    let to_original: Vec<usize> = (1..=v).filter(|x| !removed.contains(x)).collect();
    let mut to_new = vec![0usize; v + 1];
    for (i, &x) in to_original.iter().enumerate() {
        to_new[x] = i + 1;
    }
    let vp = v - removed.len();
    let blocks = d.blocks().iter().filter(|b| b.contains_all(&removed)).map(|b| {
        let e: Vec<usize> = b.elements().filter(|x| !removed.contains(x)).map(|x| to_new[x]).collect();
        Block::new(&e, vp, 3).expect("projected block is a triple")
    });
    let projected = PartialDesign::from_blocks(vp, 3, blocks)?;
    Ok((projected, Relabel { v, k, removed, to_original }))
}

/// Number of blocks of `D` containing every point of `K`.
pub fn d_k_count(d: &PartialDesign, k_set: &[usize]) -> usize {
    d.blocks().iter().filter(|b| b.contains_all(k_set)).count()
}

/// Checks `C(k,3)·|D| = Σ_{|K|=k−3} d_K` in exact integer arithmetic.
pub fn block_count_identity(d: &PartialDesign) -> bool {
    let k = d.k();
    if k < 3 {
        return false;
    }
    let lhs = big_binomial(k as u64, 3) * BigInt::from(d.len());
    let rhs: BigInt = if k == 3 {
        BigInt::from(d.len())
    } else {
        all_blocks(d.v(), k - 3).iter().map(|kb| BigInt::from(d_k_count(d, &kb.to_vec()))).sum()
    };
    lhs == rhs
}

/// Witness that `D` is not a defining set of `F(v,k)`.
///
/// Labels are original points. For `k > 3`, `k_set` is the fixed `K` and
/// every block touched by the swap contains it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DesignSwapCertificate {
    pub v: usize,
    pub k: usize,
    pub pair: (usize, usize),
    pub trail: ClosedTrail,
    pub f1: Vec<Edge>,
    pub f2: Vec<Edge>,
    pub k_set: Option<Vec<usize>>,
}

impl DesignSwapCertificate {
    fn block(&self, i: usize, j: usize, x: usize) -> Block {
        let mut e = vec![i, j, x];
        if let Some(ks) = &self.k_set {
            e.extend(ks);
        }
        Block::new(&e, self.v, self.k).expect("certificate block is a k-subset")
    }

    pub fn to_text(&self) -> Result<String, AnalysisError> {
        let alt = apply_design_swap(self, self.v, self.k)?;
        let mut out = format!("cert design {} {} pair {} {}", self.v, self.k, self.pair.0, self.pair.1);
        if let Some(ks) = &self.k_set {
            out.push_str(" K:");
            for x in ks {
                let _ = write!(out, " {x}");
            }
        }
        out.push('\n');
        for (label, edges) in [("F1:", &self.f1), ("F2:", &self.f2)] {
            out.push_str(label);
            for (i, j) in edges {
                let _ = write!(out, " {{{i},{j}}}");
            }
            out.push('\n');
        }
        out.push_str(&serialize_candidate(&alt));
        Ok(out)
    }
}

fn k3_certificate_for_pair(d: &PartialDesign, a: usize, b: usize) -> Option<DesignSwapCertificate> {
    let g = swap_graph(d, a, b).expect("pair already checked");
    let trail = graph::find_even_circuit(&g)?;
    let (f1, f2) = graph::alternate_partition(&trail).expect("even trail");
    let up = |e: Vec<Edge>| e.into_iter().map(|(i, j)| (i + 1, j + 1)).collect();
    let walk = trail.walk().iter().map(|&x| x + 1).collect();
    Some(DesignSwapCertificate {
        v: d.v(),
        k: 3,
        pair: (a, b),
        trail: ClosedTrail::from_walk(walk).expect("relabelled trail"),
        f1: up(f1),
        f2: up(f2),
        k_set: None,
    })
}

fn k3_certificate(d: &PartialDesign, workers: usize) -> Option<DesignSwapCertificate> {
    let v = d.v();
    let pairs: Vec<(usize, usize)> = (1..=v).flat_map(|a| ((a + 1)..=v).map(move |b| (a, b))).collect();
    par::find_map_first(pairs.len(), workers, |i| k3_certificate_for_pair(d, pairs[i].0, pairs[i].1))
}

fn lift_certificate(c: DesignSwapCertificate, map: &Relabel) -> DesignSwapCertificate {
    let o = |x: usize| map.original(x);
    let edge = |(i, j): Edge| {
        let (x, y) = (o(i), o(j));
        (x.min(y), x.max(y))
    };
    DesignSwapCertificate {
        v: map.v,
        k: map.k,
        pair: (o(c.pair.0), o(c.pair.1)),
        trail: ClosedTrail::from_walk(c.trail.walk().iter().map(|&x| o(x)).collect()).expect("relabelled trail"),
        f1: c.f1.into_iter().map(edge).collect(),
        f2: c.f2.into_iter().map(edge).collect(),
        k_set: Some(map.removed.clone()),
    }
}

/// First certificate in lexicographic order of `(K, {a,b})`, or `None`.
/// A certificate proves `D` is not a defining set of `F(v,k)`.
pub fn design_certificate(d: &PartialDesign) -> Result<Option<DesignSwapCertificate>, AnalysisError> {
    design_certificate_with(d, 1)
}

pub fn design_certificate_with(
    d: &PartialDesign,
    workers: usize,
) -> Result<Option<DesignSwapCertificate>, AnalysisError> {
    let (v, k) = (d.v(), d.k());
    if k < 3 || v < k {
        return Err(AnalysisError::Unsupported(format!("F({v},{k}) needs v >= k >= 3")));
    }
    if k == 3 {
        return Ok(k3_certificate(d, workers));
    }
    for kb in all_blocks(v, k - 3) {
        let (projected, map) = project(d, &kb.to_vec())?;
        if let Some(c) = k3_certificate(&projected, workers) {
            return Ok(Some(lift_certificate(c, &map)));
        }
    }
    Ok(None)
}

/// Applies a certificate to `F(v,k)`: for each `F1` edge `{i,j}`, one copy
/// of `{i,j,a}∪K` becomes a second `{i,j,b}∪K`, and `F2` edges go the other
/// way.
pub fn apply_design_swap(cert: &DesignSwapCertificate, v: usize, k: usize) -> Result<DesignCandidate, AnalysisError> {
    if (cert.v, cert.k) != (v, k) {
        return Err(AnalysisError::Mismatch(format!(
            "certificate is for F({},{}), asked for F({v},{k})",
            cert.v, cert.k
        )));
    }
    if cert.k_set.as_ref().map_or(0, Vec::len) + 3 != k {
        return Err(AnalysisError::Mismatch("K must have k − 3 points".into()));
    }
    let (a, b) = cert.pair;
    check_pair(a, b, v)?;
    if cert.f1.is_empty() || !graph::degree_balanced(&cert.f1, &cert.f2) {
        return Err(AnalysisError::Mismatch("F1/F2 are not a balanced alternation".into()));
    }
    let mut f = DesignCandidate::full(v, k)?;
    for (edges, from, to) in [(&cert.f1, a, b), (&cert.f2, b, a)] {
        for &(i, j) in edges {
            let gone = cert.block(i, j, from);
            if !f.remove_one(&gone) {
                return Err(AnalysisError::NegativeMultiplicity { block: gone.to_vec() });
            }
            f.add(cert.block(i, j, to), 1);
        }
    }
    if let Err(e) = f.validate() {
        return Err(AnalysisError::Mismatch(format!("swap breaks pair balance: {e}")));
    }
    Ok(f)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DesignBoundKind {
    /// `|D| ≥ v(v−1)(v−5/2−√((32v−85)/12))/6` for `k = 3`.
    Theorem5,
    /// `d_K ≥ (v−k+3)(v−k+2)(v−k+1/2−√((32(v−k)+11)/12))/6`.
    Lemma6,
    /// `|D| ≥ C(v,k)[1 − (1+√((32(v−k)+11)/3))/(2(v−k+1))]`.
    Theorem7,
}

impl DesignBoundKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::Theorem5 => "theorem5",
            Self::Lemma6 => "lemma6",
            Self::Theorem7 => "theorem7",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DesignBoundReport {
    pub v: usize,
    pub k: usize,
    pub kind: DesignBoundKind,
    /// Clamped to `[0, block_total]`.
    pub value: f64,
    pub value_ceil: u64,
    /// Population the bound counts within: `C(v,k)`, or `C(v−k+3,3)` for
    /// the per-`K` bound.
    pub block_total: BigInt,
    pub complement_fraction: f64,
    /// The formula evaluated below zero and was clamped.
    pub vacuous: bool,
    /// Unclamped value, exact.
    pub exact: Surd,
}

impl DesignBoundReport {
    fn build(v: usize, k: usize, kind: DesignBoundKind, exact: Surd, block_total: BigInt) -> Self {
        let vacuous = exact.signum() <= 0;
        let total = block_total.to_f64().expect("finite");
        let raw = exact.to_f64();
        let value = if vacuous { 0.0 } else { raw.min(total) };
        Self {
            v,
            k,
            kind,
            value,
            value_ceil: guarded_ceil(value),
            complement_fraction: 1.0 - value / total,
            block_total,
            vacuous,
            exact,
        }
    }

    /// Exact test `size < value` (never true for a vacuous bound).
    pub fn is_violated_by(&self, size: u64) -> bool {
        if self.vacuous {
            return false;
        }
        Surd::new(&self.exact.p - int(size), self.exact.q.clone(), self.exact.r.clone()).signum() > 0
    }
}

fn k3_form(vp: i64, radicand: BigRational) -> Surd {
    // vp(vp−1)/6 · (vp − 5/2 − √radicand)
    let scale = ratio(vp * (vp - 1), 6);
    Surd::new(ratio(2 * vp - 5, 2), int(-1), radicand).scale(&scale)
}

pub fn theorem5_bound(v: usize) -> Result<DesignBoundReport, AnalysisError> {
    if v < 4 {
        return Err(AnalysisError::Unsupported(format!("v = {v} (need v >= 4)")));
    }
    let vi = v as i64;
    let exact = k3_form(vi, ratio(32 * vi - 85, 12));
    Ok(DesignBoundReport::build(v, 3, DesignBoundKind::Theorem5, exact, big_binomial(v as u64, 3)))
}

fn check_vk(v: usize, k: usize) -> Result<(), AnalysisError> {
    if k < 3 || v < k {
        return Err(AnalysisError::Unsupported(format!("(v,k) = ({v},{k}) needs v >= k >= 3")));
    }
    Ok(())
}

pub fn lemma6_bound(v: usize, k: usize) -> Result<DesignBoundReport, AnalysisError> {
    check_vk(v, k)?;
    let d = (v - k) as i64;
    // (d+3)(d+2)/6 · (d + 1/2 − √((32d+11)/12))
    let scale = ratio((d + 3) * (d + 2), 6);
    let exact = Surd::new(ratio(2 * d + 1, 2), int(-1), ratio(32 * d + 11, 12)).scale(&scale);
    let vp = (v - k + 3) as u64;
    Ok(DesignBoundReport::build(v, k, DesignBoundKind::Lemma6, exact, big_binomial(vp, 3)))
}

pub fn theorem7_bound(v: usize, k: usize) -> Result<DesignBoundReport, AnalysisError> {
    check_vk(v, k)?;
    let d = (v - k) as i64;
    let total = big_binomial(v as u64, k as u64);
    let c = BigRational::from_integer(total.clone());
    // C(v,k) · [1 − 1/(2(d+1)) − √((32d+11)/3)/(2(d+1))]
    let inner = Surd::new(int(1) - ratio(1, 2 * (d + 1)), ratio(-1, 2 * (d + 1)), ratio(32 * d + 11, 3));
    Ok(DesignBoundReport::build(v, k, DesignBoundKind::Theorem7, inner.scale(&c), total))
}

/// The averaging step before simplification:
/// `C(v,k−3)·C(v−k+3,2)·X / (3·C(k,3))` with
/// `X = v−k+1/2−√((32(v−k)+11)/12)`.
pub fn theorem7_unsimplified(v: usize, k: usize) -> Result<Surd, AnalysisError> {
    check_vk(v, k)?;
    let d = (v - k) as i64;
    let num = big_binomial(v as u64, (k - 3) as u64) * big_binomial((v - k + 3) as u64, 2);
    let den = BigInt::from(3) * big_binomial(k as u64, 3);
    let factor = BigRational::new(num, den);
    Ok(Surd::new(ratio(2 * d + 1, 2), int(-1), ratio(32 * d + 11, 12)).scale(&factor))
}

/// `C(v,k) · X / (v−k+1)`, the simplified right-hand side of the
/// averaging identity.
pub fn theorem7_simplified_rhs(v: usize, k: usize) -> Result<Surd, AnalysisError> {
    check_vk(v, k)?;
    let d = (v - k) as i64;
    let factor = BigRational::new(big_binomial(v as u64, k as u64), BigInt::from(d + 1));
    Ok(Surd::new(ratio(2 * d + 1, 2), int(-1), ratio(32 * d + 11, 12)).scale(&factor))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn blk(e: &[usize], v: usize) -> Block {
        Block::new(e, v, e.len()).unwrap()
    }

    /// `F(7,3)` without the twelve blocks `{1,2,x},{2,3,x},{3,1,x},{1,4,x},
    /// {4,5,x},{5,1,x}` for `x ∈ {6,7}`.
    pub(crate) fn f73_example() -> PartialDesign {
        let mut d = PartialDesign::full(7, 3).unwrap();
        for (i, j) in [(1, 2), (2, 3), (3, 1), (1, 4), (4, 5), (5, 1)] {
            for x in [6, 7] {
                assert!(d.remove(&blk(&[i, j, x], 7)));
            }
        }
        d
    }

    #[test]
    fn s_ab_examples() {
        let f = PartialDesign::full(6, 3).unwrap();
        for a in 1..=6 {
            for b in (a + 1)..=6 {
                assert_eq!(s_ab(&f, a, b).unwrap().1, 0);
            }
        }
        let (pairs, count) = s_ab(&f73_example(), 6, 7).unwrap();
        assert_eq!(count, 6);
        assert_eq!(pairs, vec![(1, 2), (1, 3), (1, 4), (1, 5), (2, 3), (4, 5)]);
        let e = PartialDesign::empty(5, 3).unwrap();
        assert_eq!(s_ab(&e, 2, 4).unwrap().1, 3);
        assert!(s_ab(&PartialDesign::empty(5, 4).unwrap(), 1, 2).is_err());
    }

    #[test]
    fn thresholds() {
        assert_eq!(lemma4_threshold(7).unwrap(), 5);
        assert_eq!(lemma4_threshold(4).unwrap(), 1);
        assert_eq!(lemma4_threshold(24).unwrap(), 28);
        assert!(lemma4_threshold(3).is_err());
        for v in 4..40 {
            assert_eq!(lemma4_threshold(v).unwrap(), graph::even_circuit_threshold(v - 2));
        }
    }

    #[test]
    fn f73_certificate_and_swap() {
        let d = f73_example();
        let cert = design_certificate(&d).unwrap().unwrap();
        assert_eq!(cert.pair, (6, 7));
        assert_eq!(cert.f1, vec![(1, 2), (1, 3), (4, 5)]);
        assert_eq!(cert.f2, vec![(2, 3), (1, 4), (1, 5)]);
        let alt = apply_design_swap(&cert, 7, 3).unwrap();
        let mut expected = DesignCandidate::full(7, 3).unwrap();
        for b in [[1, 2, 6], [2, 3, 7], [3, 1, 6], [1, 4, 7], [4, 5, 6], [5, 1, 7]] {
            assert!(expected.remove_one(&blk(&b, 7)));
        }
        for b in [[1, 2, 7], [2, 3, 6], [3, 1, 7], [1, 4, 6], [4, 5, 7], [5, 1, 6]] {
            expected.add(blk(&b, 7), 1);
        }
        assert_eq!(alt, expected);
        assert_eq!(alt.lambda(), 5);
        assert!(alt.contains_design(&d));
        let text = cert.to_text().unwrap();
        assert!(
            text.starts_with("cert design 7 3 pair 6 7\nF1: {1,2} {1,3} {4,5}\nF2: {2,3} {1,4} {1,5}\ndesign 7 3 5\n")
        );
    }

    #[test]
    fn full_design_has_no_certificate() {
        for (v, k) in [(6, 3), (7, 4), (6, 5)] {
            assert_eq!(design_certificate(&PartialDesign::full(v, k).unwrap()).unwrap(), None);
        }
    }

    #[test]
    fn empty_f63_has_a_four_cycle_certificate() {
        let e = PartialDesign::empty(6, 3).unwrap();
        assert!(s_ab(&e, 1, 2).unwrap().1 > lemma4_threshold(6).unwrap());
        let cert = design_certificate(&e).unwrap().unwrap();
        assert_eq!(cert.pair, (1, 2));
        assert_eq!(cert.trail.len(), 4);
        let alt = apply_design_swap(&cert, 6, 3).unwrap();
        assert_eq!(alt.validate(), Ok(()));
        assert_ne!(alt, DesignCandidate::full(6, 3).unwrap());
        let doubled = alt.blocks().values().filter(|&&c| c == 2).count();
        assert_eq!(doubled, 4);
    }

    #[test]
    fn lifted_certificate_touches_only_blocks_through_k() {
        // F(7,4) without the blocks through 7 that project onto a 4-cycle
        let mut d = PartialDesign::full(7, 4).unwrap();
        for (i, j) in [(1, 2), (2, 3), (3, 4), (4, 1)] {
            for x in [5, 6] {
                d.remove(&blk(&[i, j, x, 7], 7));
            }
        }
        let cert = design_certificate(&d).unwrap().unwrap();
        assert_eq!(cert.k_set, Some(vec![7]));
        let alt = apply_design_swap(&cert, 7, 4).unwrap();
        assert_eq!(alt.lambda(), 10);
        assert_eq!(alt.validate(), Ok(()));
        assert!(alt.contains_design(&d));
        let full = DesignCandidate::full(7, 4).unwrap();
        for (b, &c) in alt.blocks() {
            if c != 1 {
                assert!(b.contains(7));
            }
        }
        for b in full.blocks().keys() {
            if alt.multiplicity(b) == 0 {
                assert!(b.contains(7));
            }
        }
    }

    #[test]
    fn projection_round_trip() {
        let f = PartialDesign::full(7, 5).unwrap();
        let (p, map) = project(&f, &[2, 6]).unwrap();
        assert_eq!(p, PartialDesign::full(5, 3).unwrap());
        assert_eq!(map.to_original, vec![1, 3, 4, 5, 7]);

        let through6: Vec<Block> =
            PartialDesign::full(6, 4).unwrap().blocks().iter().filter(|b| b.contains(6)).cloned().collect();
        let d = PartialDesign::from_blocks(6, 4, through6.clone()).unwrap();
        let (p, map) = project(&d, &[6]).unwrap();
        assert_eq!(p, PartialDesign::full(5, 3).unwrap());
        let mut lifted = map.lift(&p);
        lifted.sort();
        assert_eq!(lifted, through6);
        assert!(project(&d, &[1, 2]).is_err());
    }

    #[test]
    fn block_count_identity_examples() {
        let f = PartialDesign::full(5, 4).unwrap();
        assert!(block_count_identity(&f));
        for x in 1..=5 {
            assert_eq!(d_k_count(&f, &[x]), 4);
        }
        assert!(block_count_identity(&PartialDesign::empty(7, 4).unwrap()));
    }

    // Reference values from the closed forms in f64 (the radicands are
    // small, so plain f64 sqrt is accurate to ~1e-13 here).
    #[test]
    fn design_bound_values() {
        let t5 = theorem5_bound(9).unwrap();
        let expect = 9.0 * 8.0 * (6.5 - (203.0f64 / 12.0).sqrt()) / 6.0;
        assert!((t5.value - expect).abs() < 1e-12);
        assert!((t5.value - 28.644).abs() < 1e-3);
        assert_eq!(t5.block_total, BigInt::from(84));
        assert!((t5.complement_fraction - 0.659).abs() < 1e-3);
        assert_eq!(t5.value_ceil, 29);

        let t7 = theorem7_bound(9, 3).unwrap();
        assert!((t7.value - t5.value).abs() < 1e-12);

        // v = 5: 32·5 − 85 = 75, √(75/12) = 5/2, so the bound is exactly 0
        let t5 = theorem5_bound(5).unwrap();
        assert!(t5.vacuous);
        assert_eq!(t5.value, 0.0);
        assert!(theorem5_bound(4).unwrap().vacuous);

        let t = theorem7_bound(5, 5).unwrap();
        assert!(t.vacuous);
        assert_eq!((t.value, t.value_ceil), (0.0, 0));
        assert!(theorem7_bound(4, 5).is_err());
        assert!(lemma6_bound(6, 2).is_err());
    }

    #[test]
    fn averaging_identity_is_exact() {
        for v in 4..=20 {
            for k in 3..=v {
                let a = theorem7_unsimplified(v, k).unwrap();
                let b = theorem7_simplified_rhs(v, k).unwrap();
                assert_eq!(a, b, "({v},{k})");
            }
        }
    }

    #[test]
    fn workers_do_not_change_the_design_certificate() {
        let d = f73_example();
        assert_eq!(design_certificate_with(&d, 1).unwrap(), design_certificate_with(&d, 4).unwrap());
    }
}
