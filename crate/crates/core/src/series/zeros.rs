use num_rational::Ratio;
use serde::Serialize;

use super::{SeriesError, TruncatedSeries};
use crate::exec::{self, ExecMode};

/// Default cap on the number of points `(Z/p^k)^m` enumerated.
pub const DEFAULT_ZERO_BUDGET: u64 = 50_000_000;

/// Zeros of `f` mod `p^k`; the density is `count / p^{km}`, kept
/// unreduced so the denominator shows the number of points.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ZeroCount {
    pub k: u32,
    pub count: u64,
    pub density_num: u64,
    pub density_den: u64,
}

impl ZeroCount {
    pub fn density(&self) -> Ratio<u64> {
        Ratio::new(self.density_num, self.density_den)
    }
}

/// Counts `x ∈ (Z/p^k)^m` with `f(x) ≡ 0 mod p^k`.
pub fn zero_count(f: &TruncatedSeries, k: u32, budget: u64, mode: ExecMode) -> Result<ZeroCount, SeriesError> {
    let g = f.reduce_precision(k)?;
    let m = f.vars();
    let too_big = |needed: u128| SeriesError::BudgetExceeded { needed, budget };
    let q = crate::checked_pow(f.prime(), k).ok_or(too_big(u128::MAX))?;
    let points = (q as u128).checked_pow(m as u32).unwrap_or(u128::MAX);
    if points > budget as u128 {
        return Err(too_big(points));
    }
    let rest = q.pow(m as u32 - 1);
    let count = exec::sum_range(mode, q, |lead| {
        let mut x = vec![0u64; m];
        x[0] = lead;
        let mut zeros = 0;
        for idx in 0..rest {
            let mut r = idx;
            for slot in x[1..].iter_mut().rev() {
                *slot = r % q;
                r /= q;
            }
            if g.evaluate_mod(&x, q) == 0 {
                zeros += 1;
            }
        }
        zeros
    });
    Ok(ZeroCount { k, count, density_num: count, density_den: points as u64 })
}

/// `zero_count` at each `k` in `levels`.
pub fn zero_counts(
    f: &TruncatedSeries,
    levels: impl IntoIterator<Item = u32>,
    budget: u64,
    mode: ExecMode,
) -> Result<Vec<ZeroCount>, SeriesError> {
    levels.into_iter().map(|k| zero_count(f, k, budget, mode)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn series(p: u64, vars: usize, terms: &[(&[u32], i64)]) -> TruncatedSeries {
        TruncatedSeries::from_terms(p, 6, vars, 6, terms.iter().map(|(e, c)| (e.to_vec(), *c))).unwrap()
    }

    #[test]
    fn examples() {
        let x = series(3, 1, &[(&[1], 1)]);
        for k in 1..=4 {
            let z = zero_count(&x, k, DEFAULT_ZERO_BUDGET, ExecMode::default()).unwrap();
            assert_eq!(z.count, 1);
            assert_eq!(z.density(), Ratio::new(1, 3u64.pow(k)));
        }
        let xy = series(3, 2, &[(&[1, 1], 1)]);
        let z = zero_counts(&xy, 1..=2, DEFAULT_ZERO_BUDGET, ExecMode::Sequential).unwrap();
        assert_eq!((z[0].count, z[0].density_den), (5, 9));
        assert_eq!((z[1].count, z[1].density_den), (21, 81));
        let one = series(3, 2, &[(&[0, 0], 1)]);
        assert_eq!(zero_count(&one, 2, DEFAULT_ZERO_BUDGET, ExecMode::default()).unwrap().count, 0);
    }

    #[test]
    fn xy_matches_fibre_sum() {
        // Σ_x #{y : xy ≡ 0 mod 9} = Σ_x gcd(x, 9)
        let oracle: u64 = (0..9u64).map(|x| num_integer::gcd(x, 9)).sum();
        let xy = series(3, 2, &[(&[1, 1], 1)]);
        assert_eq!(zero_count(&xy, 2, DEFAULT_ZERO_BUDGET, ExecMode::default()).unwrap().count, oracle);
    }

    #[test]
    fn modes_agree_and_budget_applies() {
        let f = series(5, 2, &[(&[2, 0], 1), (&[0, 2], 1), (&[0, 0], -1)]);
        let a = zero_count(&f, 2, DEFAULT_ZERO_BUDGET, ExecMode::Sequential).unwrap();
        let b = zero_count(&f, 2, DEFAULT_ZERO_BUDGET, ExecMode::default()).unwrap();
        assert_eq!(a, b);
        assert_eq!(
            zero_count(&f, 3, 1000, ExecMode::default()).unwrap_err(),
            SeriesError::BudgetExceeded { needed: 15625, budget: 1000 }
        );
        assert!(matches!(zero_count(&f, 7, 1000, ExecMode::default()), Err(SeriesError::LevelTooHigh { .. })));
    }
}
