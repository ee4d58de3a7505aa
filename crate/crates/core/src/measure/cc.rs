use num_rational::Ratio;
use serde::Serialize;

use super::MeasureError;
use crate::exec::ExecMode;
use crate::groups::{centralizer_order, QuotientTower, TowerLevel};

/// A centralizer sup above `|G_first| · DIVERGENCE_FACTOR` is reported as a
/// divergent sequence with measure 0.
pub const DIVERGENCE_FACTOR: u64 = 10_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CcLevel {
    pub level: u32,
    pub group_order: u64,
    pub centralizer_order: u64,
    /// `|x^G_k| / |G_k| = 1 / |C_{G_k}(x_k)|`.
    pub class_measure_num: u64,
    pub class_measure_den: u64,
    pub running_sup: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum ClassMeasure {
    /// `1 / sup` over the computed levels.
    Value { num: u64, den: u64 },
    /// The sup passed the divergence threshold; measure reported as 0.
    Divergent { sup: u64, threshold: u64 },
}

impl ClassMeasure {
    pub fn value(&self) -> Ratio<u64> {
        match *self {
            ClassMeasure::Value { num, den } => Ratio::new(num, den),
            ClassMeasure::Divergent { .. } => Ratio::new(0, 1),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CcReport {
    pub levels: Vec<CcLevel>,
    pub measure: ClassMeasure,
    /// Whether the last two computed sups agree. Not a proof of stabilisation.
    pub last_levels_agree: bool,
}

impl CcReport {
    pub fn centralizer_orders(&self) -> Vec<u64> {
        self.levels.iter().map(|l| l.centralizer_order).collect()
    }
}

/// Conjugacy-class measure of an element given as a compatible lift path
/// `x_k ∈ G_k` through the tower.
pub fn cc_measure<G: TowerLevel>(
    tower: &QuotientTower<G>,
    path: &[G::Element],
    mode: ExecMode,
) -> Result<CcReport, MeasureError> {
    tower.check_path(path)?;
    let threshold = tower.level(0).order().saturating_mul(DIVERGENCE_FACTOR);
    let mut sup = 0u64;
    let mut levels = Vec::with_capacity(tower.len());
    for (g, x) in tower.levels().iter().zip(path) {
        let c = centralizer_order(g, x, mode);
        sup = sup.max(c);
        levels.push(CcLevel {
            level: g.level(),
            group_order: g.order(),
            centralizer_order: c,
            class_measure_num: 1,
            class_measure_den: c,
            running_sup: sup,
        });
    }
    let measure = if sup > threshold {
        ClassMeasure::Divergent { sup, threshold }
    } else {
        ClassMeasure::Value { num: 1, den: sup }
    };
    let last_levels_agree = match levels.as_slice() {
        [.., a, b] => a.running_sup == b.running_sup,
        _ => false,
    };
    Ok(CcReport { levels, measure, last_levels_agree })
}
