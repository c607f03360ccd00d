use std::fmt::Write;

use crate::design_analysis::{d_k_count, lemma6_bound, theorem5_bound, theorem7_bound, DesignBoundReport};
use crate::error::AnalysisError;
use crate::model::{all_blocks, PartialDesign, PartialRectangle};
use crate::rect_analysis::{theorem2_bound, BoundVariant};

/// Verbatim bounds are the formulas as stated; corrected ones are
/// re-derived. Only verbatim violations make a run fail.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundClass {
    Verbatim,
    Corrected,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FalsificationEvent {
    /// `rect m n t` or `design v k`.
    pub object: String,
    /// `theorem2`, `theorem5`, `theorem7` or `lemma6 K=...`.
    pub bound: String,
    pub class: BoundClass,
    pub bound_value: f64,
    pub size: u64,
    /// Enough to reproduce the set: seed, restart and its serialization.
    pub replay: String,
}

/// Compares every oracle-verified defining set it is shown with every
/// lower bound that applies to it.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FalsificationMonitor {
    pub observed: u64,
    pub events: Vec<FalsificationEvent>,
}

impl FalsificationMonitor {
    pub fn new() -> Self {
        Self::default()
    }

    /// `d` must already be known to define `F_{m,n,t}`.
    pub fn observe_rect(&mut self, d: &PartialRectangle, replay: &str) -> Result<(), AnalysisError> {
        self.observed += 1;
        let (m, n, t) = d.dims();
        if t < 2 {
            return Ok(());
        }
        let size = d.size();
        for (variant, class) in
            [(BoundVariant::Verbatim, BoundClass::Verbatim), (BoundVariant::Corrected, BoundClass::Corrected)]
        {
            let b = theorem2_bound(m, n, t, variant)?;
            if b.is_violated_by(size) {
                self.events.push(FalsificationEvent {
                    object: format!("rect {m} {n} {t}"),
                    bound: format!("theorem2 {}", variant.name()),
                    class,
                    bound_value: b.lower_bound,
                    size,
                    replay: replay.to_string(),
                });
            }
        }
        Ok(())
    }

    /// `d` must already be known to define `F(v,k)`.
    pub fn observe_design(&mut self, d: &PartialDesign, replay: &str) -> Result<(), AnalysisError> {
        self.observed += 1;
        let (v, k) = (d.v(), d.k());
        if k < 3 {
            return Ok(());
        }
        let size = d.len() as u64;
        let mut check = |b: DesignBoundReport, label: String, observed: u64| {
            if b.is_violated_by(observed) {
                self.events.push(FalsificationEvent {
                    object: format!("design {v} {k}"),
                    bound: label,
                    class: BoundClass::Verbatim,
                    bound_value: b.value,
                    size: observed,
                    replay: replay.to_string(),
                });
            }
        };
        if k == 3 && v >= 4 {
            check(theorem5_bound(v)?, "theorem5".into(), size);
        }
        check(theorem7_bound(v, k)?, "theorem7".into(), size);
        if k > 3 {
            let l6 = lemma6_bound(v, k)?;
            for kb in all_blocks(v, k - 3) {
                let ks = kb.to_vec();
                let label = format!("lemma6 K={}", ks.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","));
                check(l6.clone(), label, d_k_count(d, &ks) as u64);
            }
        }
        Ok(())
    }

    pub fn verbatim_violations(&self) -> usize {
        self.events.iter().filter(|e| e.class == BoundClass::Verbatim).count()
    }

    pub fn corrected_violations(&self) -> usize {
        self.events.iter().filter(|e| e.class == BoundClass::Corrected).count()
    }

    pub fn report(&self) -> String {
        let mut out = format!(
            "monitor observed {} events {} verbatim {} corrected {}\n",
            self.observed,
            self.events.len(),
            self.verbatim_violations(),
            self.corrected_violations()
        );
        for e in &self.events {
            let class = match e.class {
                BoundClass::Verbatim => "FALSIFIED",
                BoundClass::Corrected => "warning",
            };
            let _ = writeln!(out, "{class} {} {} bound {:.6} size {}", e.object, e.bound, e.bound_value, e.size);
            for line in e.replay.lines() {
                let _ = writeln!(out, "  {line}");
            }
        }
        out
    }
}
