use std::collections::BTreeMap;
use std::fmt::Write;

use crate::design_analysis::{lemma6_bound, theorem5_bound, theorem7_bound, DesignBoundReport};
use crate::error::AnalysisError;
use crate::numeric::binomial;
use crate::rect_analysis::{theorem2_bound, BoundVariant, RectBoundReport};

/// Placeholder for a column that does not apply to a row.
pub const NA: &str = "NA";

fn float(x: Option<f64>) -> String {
    x.map_or_else(|| NA.to_string(), |v| format!("{v:.6}"))
}

fn integer(x: Option<i64>) -> String {
    x.map_or_else(|| NA.to_string(), |v| v.to_string())
}

fn flag(b: bool) -> &'static str {
    if b {
        "1"
    } else {
        "0"
    }
}

/// Smallest cited construction size that applies and is non-negative.
fn smallest_construction(sizes: &[Option<i64>]) -> Option<i64> {
    sizes.iter().flatten().copied().filter(|&s| s >= 0).min()
}

/// One row per `n` for the square case `F_{n,n,n}`.
#[derive(Debug, Clone, PartialEq)]
pub struct RectRow {
    pub n: usize,
    pub verbatim: RectBoundReport,
    pub corrected: RectBoundReport,
    /// `(n³−2n²+2n)/2`, the earlier lower bound.
    pub prior_bound: f64,
    /// `(n−1)³+1`, smallest known defining set.
    pub construction: i64,
    /// `n³−2n²−n`, the cited saturated critical set size, as stated.
    pub saturated_critical: i64,
    pub best_search: Option<u64>,
    pub exceeds_verbatim: bool,
    pub exceeds_corrected: bool,
    pub below_verbatim: bool,
    pub below_corrected: bool,
}

impl RectRow {
    pub const HEADER: &'static str = "n\tverbatim_bound\tcorrected_bound\tprior_bound\tconstruction_size\tsaturated_critical_size\tbest_search\tbound_exceeds_known_construction_verbatim\tbound_exceeds_known_construction_corrected\tsearch_below_bound_verbatim\tsearch_below_bound_corrected";

    pub fn new(n: usize, best_search: Option<u64>) -> Result<Self, AnalysisError> {
        let verbatim = theorem2_bound(n, n, n, BoundVariant::Verbatim)?;
        let corrected = theorem2_bound(n, n, n, BoundVariant::Corrected)?;
        let ni = n as i64;
        let construction = (ni - 1).pow(3) + 1;
        let saturated_critical = ni.pow(3) - 2 * ni * ni - ni;
        let known = smallest_construction(&[Some(construction), Some(saturated_critical)]);
        let exceeds = |b: &RectBoundReport| known.is_some_and(|k| b.is_violated_by(k as u64));
        let below = |b: &RectBoundReport| best_search.is_some_and(|s| b.is_violated_by(s));
        Ok(Self {
            n,
            prior_bound: (ni.pow(3) - 2 * ni * ni + 2 * ni) as f64 / 2.0,
            construction,
            saturated_critical,
            best_search,
            exceeds_verbatim: exceeds(&verbatim),
            exceeds_corrected: exceeds(&corrected),
            below_verbatim: below(&verbatim),
            below_corrected: below(&corrected),
            verbatim,
            corrected,
        })
    }

    pub fn to_tsv(&self) -> String {
        [
            self.n.to_string(),
            float(Some(self.verbatim.lower_bound)),
            float(Some(self.corrected.lower_bound)),
            float(Some(self.prior_bound)),
            self.construction.to_string(),
            self.saturated_critical.to_string(),
            integer(self.best_search.map(|s| s as i64)),
            flag(self.exceeds_verbatim).into(),
            flag(self.exceeds_corrected).into(),
            flag(self.below_verbatim).into(),
            flag(self.below_corrected).into(),
        ]
        .join("\t")
    }
}

/// Rows for `2 ≤ n ≤ max_n`, with search results where given.
pub fn rect_table(max_n: usize, best: &BTreeMap<usize, u64>) -> Result<(Vec<RectRow>, String), AnalysisError> {
    let rows = (2..=max_n).map(|n| RectRow::new(n, best.get(&n).copied())).collect::<Result<Vec<_>, _>>()?;
    let mut tsv = String::from(RectRow::HEADER);
    tsv.push('\n');
    for r in &rows {
        let _ = writeln!(tsv, "{}", r.to_tsv());
    }
    Ok((rows, tsv))
}

#[derive(Debug, Clone, PartialEq)]
pub struct DesignRow {
    pub v: usize,
    pub k: usize,
    pub theorem5: Option<DesignBoundReport>,
    pub theorem7: DesignBoundReport,
    /// Per-`K` bound on `d_K`, not on `|D|`.
    pub lemma6: DesignBoundReport,
    /// `3·C(v,3)/7` for `k = 3`.
    pub prior_bound: Option<f64>,
    /// `(v³−6v²+5v+6)/6` for `k = 3`.
    pub construction_k3: Option<i64>,
    /// `C(v,k)−(v²+3v−2vk+2k²−8)/2` for `v ≥ k+2 ≥ 5`.
    pub construction_a: Option<i64>,
    /// `C(v,k)−(v²−v−k²+k+2)/2` for `v ≥ k+3`.
    pub construction_b: Option<i64>,
    /// `C(v,k)+(k−1)(k+2)/2−kv` for `v ≥ k+2`.
    pub construction_c: Option<i64>,
    pub best_search: Option<u64>,
    pub exceeds: bool,
    pub below: bool,
}

impl DesignRow {
    pub const HEADER: &'static str = "v\tk\ttheorem5_bound\ttheorem7_bound\tlemma6_bound\tprior_bound\tconstruction_k3_size\tconstruction_a_size\tconstruction_b_size\tconstruction_c_size\tbest_search\tbound_exceeds_known_construction\tsearch_below_bound";

    pub fn new(v: usize, k: usize, best_search: Option<u64>) -> Result<Self, AnalysisError> {
        let theorem5 = if k == 3 { Some(theorem5_bound(v)?) } else { None };
        let theorem7 = theorem7_bound(v, k)?;
        let lemma6 = lemma6_bound(v, k)?;
        let (vi, ki) = (v as i64, k as i64);
        let c = binomial(v as u64, k as u64) as i64;
        let construction_k3 = (k == 3).then(|| (vi.pow(3) - 6 * vi * vi + 5 * vi + 6) / 6);
        let construction_a =
            (v >= k + 2 && k + 2 >= 5).then(|| c - (vi * vi + 3 * vi - 2 * vi * ki + 2 * ki * ki - 8) / 2);
        let construction_b = (v >= k + 3).then(|| c - (vi * vi - vi - ki * ki + ki + 2) / 2);
        let construction_c = (v >= k + 2).then(|| c + (ki - 1) * (ki + 2) / 2 - ki * vi);
        let known = smallest_construction(&[construction_k3, construction_a, construction_b, construction_c]);
        let bounds: Vec<&DesignBoundReport> = theorem5.iter().chain(std::iter::once(&theorem7)).collect();
        let exceeds = known.is_some_and(|s| bounds.iter().any(|b| b.is_violated_by(s as u64)));
        let below = best_search.is_some_and(|s| bounds.iter().any(|b| b.is_violated_by(s)));
        Ok(Self {
            v,
            k,
            prior_bound: (k == 3).then(|| 3.0 * binomial(v as u64, 3) as f64 / 7.0),
            theorem5,
            theorem7,
            lemma6,
            construction_k3,
            construction_a,
            construction_b,
            construction_c,
            best_search,
            exceeds,
            below,
        })
    }

    pub fn to_tsv(&self) -> String {
        [
            self.v.to_string(),
            self.k.to_string(),
            float(self.theorem5.as_ref().map(|b| b.value)),
            float(Some(self.theorem7.value)),
            float(Some(self.lemma6.value)),
            float(self.prior_bound),
            integer(self.construction_k3),
            integer(self.construction_a),
            integer(self.construction_b),
            integer(self.construction_c),
            integer(self.best_search.map(|s| s as i64)),
            flag(self.exceeds).into(),
            flag(self.below).into(),
        ]
        .join("\t")
    }
}

/// Rows for every `k` in `ks` and `k+1 ≤ v ≤ max_v` (and `v ≥ 4`).
pub fn design_table(
    ks: &[usize],
    max_v: usize,
    best: &BTreeMap<(usize, usize), u64>,
) -> Result<(Vec<DesignRow>, String), AnalysisError> {
    let mut rows = Vec::new();
    for &k in ks {
        for v in (k + 1).max(4)..=max_v {
            rows.push(DesignRow::new(v, k, best.get(&(v, k)).copied())?);
        }
    }
    let mut tsv = String::from(DesignRow::HEADER);
    tsv.push('\n');
    for r in &rows {
        let _ = writeln!(tsv, "{}", r.to_tsv());
    }
    Ok((rows, tsv))
}
