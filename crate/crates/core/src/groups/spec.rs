use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};

use super::{GroupError, MatrixGroup, QuotientTower, SemidirectGroup};

/// JSON group description.
///
/// ```json
/// {"backend": "semidirect", "p": 3, "n": 2, "T": [[0,-1],[1,-1]], "t_order": 3, "levels": [1,3]}
/// {"backend": "matrix", "modulus": 3, "generators": [[[1,1,0],[0,1,0],[0,0,1]], …], "levels": [1,2]}
/// ```
///
/// For the matrix backend level `k` reduces the generators mod `modulus^k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "backend", rename_all = "lowercase", deny_unknown_fields)]
pub enum GroupSpec {
    Semidirect {
        p: u64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        n: Option<usize>,
        #[serde(rename = "T")]
        action: Vec<Vec<i64>>,
        t_order: u64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        levels: Option<[u32; 2]>,
    },
    Matrix {
        modulus: u64,
        generators: Vec<Vec<Vec<i64>>>,
        /// Matrix dimension; only needed when `generators` is empty.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        n: Option<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        levels: Option<[u32; 2]>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        cap: Option<usize>,
    },
}

impl GroupSpec {
    pub fn from_json(text: &str) -> Result<Self, GroupError> {
        serde_json::from_str(text).map_err(|e| GroupError::Spec(e.to_string()))
    }

    pub fn levels(&self) -> Option<RangeInclusive<u32>> {
        match self {
            GroupSpec::Semidirect { levels, .. } | GroupSpec::Matrix { levels, .. } => levels.map(|[lo, hi]| lo..=hi),
        }
    }
}

/// A tower of either backend.
#[derive(Clone, Debug)]
pub enum AnyTower {
    Semidirect(QuotientTower<SemidirectGroup>),
    Matrix(QuotientTower<MatrixGroup>),
}

/// Builds the levels in `levels` and verifies the projections between them.
pub fn build_tower(spec: &GroupSpec, levels: RangeInclusive<u32>) -> Result<AnyTower, GroupError> {
    let (lo, hi) = (*levels.start(), *levels.end());
    if lo == 0 || hi < lo {
        return Err(GroupError::BadLevels { lo, hi });
    }
    match spec {
        GroupSpec::Semidirect { p, n, action, t_order, .. } => {
            if let Some(n) = n {
                if *n != action.len() {
                    return Err(GroupError::Spec(format!("n = {n} but T has {} rows", action.len())));
                }
            }
            let groups = levels
                .map(|k| SemidirectGroup::new(action, *p, k, *t_order))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(AnyTower::Semidirect(QuotientTower::new(groups)?))
        }
        GroupSpec::Matrix { modulus, generators, n, cap, .. } => {
            let dim = match (generators.first(), n) {
                (Some(g), _) => g.len(),
                (None, Some(n)) => *n,
                (None, None) => 1,
            };
            let cap = cap.unwrap_or(MatrixGroup::DEFAULT_CAP);
            let groups = levels
                .map(|k| MatrixGroup::tower_level(*modulus, k, dim, generators, cap))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(AnyTower::Matrix(QuotientTower::new(groups)?))
        }
    }
}
