//! Free Lie rings over `Z` in a Lyndon–Hall basis, and the graded action of
//! a free-group endomorphism on them.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exec::{self, ExecMode};
use crate::linalg::IntMatrix;

mod hall;

pub use hall::{witt_dimension, HallBasis, LieElement, MAX_BASIS_SIZE};

/// Finite-order check gives up past this many powers of the degree-1 map.
pub const ORDER_BOUND: u64 = 1000;

/// Default search depth for fixed points.
pub const DEFAULT_MAX_DEGREE: u32 = 8;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LieError {
    #[error("rank and degree must be positive")]
    EmptyBasis,
    #[error("basis would have {needed} elements, budget is {budget}")]
    BudgetExceeded { needed: u64, budget: usize },
    #[error("bracket has degree {degree}, basis stops at {max}")]
    DegreeOverflow { degree: u32, max: u32 },
    #[error("integer overflow in Lie coordinates")]
    Overflow,
    #[error("endomorphism needs {rank} images of length {rank}")]
    Shape { rank: usize },
    #[error("degree-1 map is not invertible over Z (determinant {0})")]
    NotInvertible(String),
    #[error("degree-1 map has no finite order up to {0}")]
    InfiniteOrder(u64),
    #[error("invalid endomorphism: {0}")]
    Json(String),
}

/// Endomorphism of the free group given by the degree-1 parts of the images
/// of the generators: `images[i]` is the coefficient vector of `α(x_i)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Endomorphism {
    pub rank: usize,
    pub images: Vec<Vec<i64>>,
}

impl Endomorphism {
    pub fn new(rank: usize, images: Vec<Vec<i64>>) -> Result<Self, LieError> {
        let e = Endomorphism { rank, images };
        e.validate()?;
        Ok(e)
    }

    pub fn identity(rank: usize) -> Self {
        let images = (0..rank).map(|i| (0..rank).map(|j| i64::from(i == j)).collect()).collect();
        Endomorphism { rank, images }
    }

    pub fn from_json(text: &str) -> Result<Self, LieError> {
        let e: Endomorphism = serde_json::from_str(text).map_err(|e| LieError::Json(e.to_string()))?;
        e.validate()?;
        Ok(e)
    }

    fn validate(&self) -> Result<(), LieError> {
        if self.rank == 0 || self.images.len() != self.rank || self.images.iter().any(|v| v.len() != self.rank) {
            return Err(LieError::Shape { rank: self.rank });
        }
        Ok(())
    }

    /// Matrix on degree 1; column `i` is `α(x_i)`.
    pub fn linear_part(&self) -> IntMatrix {
        let rows: Vec<Vec<i64>> = (0..self.rank).map(|r| self.images.iter().map(|img| img[r]).collect()).collect();
        IntMatrix::from_rows(&rows)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Self) -> Result<Self, LieError> {
        if self.rank != other.rank {
            return Err(LieError::Shape { rank: self.rank });
        }
        let images = other
            .images
            .iter()
            .map(|v| (0..self.rank).map(|r| (0..self.rank).map(|c| self.images[c][r] * v[c]).sum()).collect())
            .collect();
        Endomorphism::new(self.rank, images)
    }

    /// Order of the degree-1 map, if at most `bound`.
    pub fn linear_order(&self, bound: u64) -> Option<u64> {
        let a = self.linear_part();
        let id = IntMatrix::identity(self.rank);
        let mut power = a.clone();
        for k in 1..=bound {
            if power == id {
                return Some(k);
            }
            power = power.mul(&a);
        }
        None
    }
}

/// Matrix of the action of `alpha` on the degree-`n` component, in the
/// basis order of `basis`; column `j` holds the coordinates of `α(b_j)`.
pub fn graded_action(basis: &HallBasis, alpha: &Endomorphism, n: u32, mode: ExecMode) -> Result<IntMatrix, LieError> {
    let images = graded_images(basis, alpha, n, mode)?;
    Ok(to_matrix(basis.dim(n), n, &images[n as usize - 1]))
}

/// `α(b)` for every basis element of degree `≤ n`, per degree.
fn graded_images(basis: &HallBasis, alpha: &Endomorphism, n: u32, mode: ExecMode) -> Result<Vec<Vec<LieElement>>, LieError> {
    if alpha.rank != basis.rank() {
        return Err(LieError::Shape { rank: basis.rank() });
    }
    if n > basis.max_degree() {
        return Err(LieError::DegreeOverflow { degree: n, max: basis.max_degree() });
    }
    let mut images = vec![alpha
        .images
        .iter()
        .map(|v| LieElement::homogeneous(1, v.iter().map(|&c| c as i128).collect()))
        .collect()];
    for _ in 2..=n {
        push_degree(basis, &mut images, mode)?;
    }
    Ok(images)
}

/// Extends `images` by one degree: `α([u, v]) = [α(u), α(v)]`.
fn push_degree(basis: &HallBasis, images: &mut Vec<Vec<LieElement>>, mode: ExecMode) -> Result<(), LieError> {
    let d = images.len() as u32 + 1;
    let prev = &*images;
    let column = |i: u64| {
        let ((du, iu), (dv, iv)) = basis.factors(d, i as usize).expect("degree >= 2 elements are brackets");
        basis.bracket(&prev[du as usize - 1][iu], &prev[dv as usize - 1][iv])
    };
    let level = exec::map_range(mode, basis.dim(d) as u64, column).into_iter().collect::<Result<Vec<_>, _>>()?;
    images.push(level);
    Ok(())
}

fn to_matrix(dim: usize, n: u32, cols: &[LieElement]) -> IntMatrix {
    let mut rows = vec![vec![BigInt::from(0); dim]; dim];
    for (j, col) in cols.iter().enumerate() {
        if let Some(c) = col.component(n) {
            for (i, &v) in c.iter().enumerate() {
                rows[i][j] = BigInt::from(v);
            }
        }
    }
    IntMatrix::from_rows(&rows)
}

/// Result of `find_fixed_point`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum FixedPoint {
    Found {
        degree: u32,
        #[serde(serialize_with = "ser_vec_bigint")]
        vector: Vec<BigInt>,
    },
    /// No fixed vector in degrees `1..=none_up_to`; not a proof of absence.
    NoneUpTo { none_up_to: u32 },
}

fn ser_vec_bigint<S: serde::Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for x in v {
        match x.to_i64() {
            Some(i) => seq.serialize_element(&i)?,
            None => seq.serialize_element(&x.to_string())?,
        }
    }
    seq.end()
}

/// Smallest degree `n ≤ max_degree` where `α` fixes a nonzero vector of the
/// degree-`n` component, with the first Hermite-normal-form generator of
/// the fixed lattice.
pub fn find_fixed_point(alpha: &Endomorphism, max_degree: u32, mode: ExecMode) -> Result<FixedPoint, LieError> {
    alpha.validate()?;
    let det = alpha.linear_part().det();
    if !det.abs().is_one() {
        return Err(LieError::NotInvertible(det.to_string()));
    }
    alpha.linear_order(ORDER_BOUND).ok_or(LieError::InfiniteOrder(ORDER_BOUND))?;
    let basis = HallBasis::new(alpha.rank, max_degree)?;
    let mut images = graded_images(&basis, alpha, 1, mode)?;
    for n in 1..=max_degree {
        if n > 1 {
            push_degree(&basis, &mut images, mode)?;
        }
        let dim = basis.dim(n);
        if dim == 0 {
            continue;
        }
        let a = to_matrix(dim, n, &images[n as usize - 1]);
        let kernel = a.sub(&IntMatrix::identity(dim)).kernel();
        if let Some(vector) = kernel.into_iter().next() {
            return Ok(FixedPoint::Found { degree: n, vector });
        }
    }
    Ok(FixedPoint::NoneUpTo { none_up_to: max_degree })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn random_homogeneous(b: &HallBasis, n: u32, rng: &mut ChaCha8Rng) -> LieElement {
        LieElement::homogeneous(n, (0..b.dim(n)).map(|_| rng.gen_range(-3..=3)).collect())
    }

    #[test]
    fn action_examples() {
        let b = HallBasis::new(2, 4).unwrap();
        let id = Endomorphism::identity(2);
        for n in 1..=4 {
            assert_eq!(graded_action(&b, &id, n, ExecMode::default()).unwrap(), IntMatrix::identity(b.dim(n)));
        }
        let swap = Endomorphism::new(2, vec![vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(graded_action(&b, &swap, 2, ExecMode::default()).unwrap(), IntMatrix::from_rows(&[vec![-1]]));
        let rot = Endomorphism::new(2, vec![vec![0, 1], vec![-1, 0]]).unwrap();
        assert_eq!(graded_action(&b, &rot, 2, ExecMode::default()).unwrap(), IntMatrix::from_rows(&[vec![1]]));
    }

    #[test]
    fn fixed_point_examples() {
        let id = Endomorphism::identity(2);
        assert_eq!(find_fixed_point(&id, 4, ExecMode::default()).unwrap(), FixedPoint::Found { degree: 1, vector: ints(&[1, 0]) });
        let swap = Endomorphism::new(2, vec![vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(find_fixed_point(&swap, 4, ExecMode::default()).unwrap(), FixedPoint::Found { degree: 1, vector: ints(&[1, 1]) });
        let rot = Endomorphism::new(2, vec![vec![0, 1], vec![-1, 0]]).unwrap();
        let found = find_fixed_point(&rot, 4, ExecMode::default()).unwrap();
        assert_eq!(found, FixedPoint::Found { degree: 2, vector: ints(&[1]) });
        assert_eq!(serde_json::to_value(&found).unwrap(), serde_json::json!({"degree": 2, "vector": [1]}));
    }

    #[test]
    fn fixed_point_errors() {
        let double = Endomorphism::new(1, vec![vec![2]]).unwrap();
        assert_eq!(find_fixed_point(&double, 3, ExecMode::default()).unwrap_err(), LieError::NotInvertible("2".into()));
        let shear = Endomorphism::new(2, vec![vec![1, 0], vec![1, 1]]).unwrap();
        assert_eq!(find_fixed_point(&shear, 3, ExecMode::default()).unwrap_err(), LieError::InfiniteOrder(ORDER_BOUND));
        // -1 on one generator: degree 1 only, no fixed vector
        let neg = Endomorphism::new(1, vec![vec![-1]]).unwrap();
        let none = find_fixed_point(&neg, 3, ExecMode::default()).unwrap();
        assert_eq!(none, FixedPoint::NoneUpTo { none_up_to: 3 });
        assert_eq!(serde_json::to_value(&none).unwrap(), serde_json::json!({"none_up_to": 3}));
    }

    #[test]
    fn finite_order_corpus_has_small_witness() {
        let corpus = [
            (2, vec![vec![0, 1], vec![1, 0]]),
            (2, vec![vec![0, 1], vec![-1, 0]]),
            (2, vec![vec![0, 1], vec![-1, -1]]),
            (2, vec![vec![-1, 0], vec![0, -1]]),
            (2, vec![vec![0, -1], vec![1, 1]]),
            (3, vec![vec![0, 1, 0], vec![0, 0, 1], vec![1, 0, 0]]),
            (3, vec![vec![-1, 0, 0], vec![0, -1, 0], vec![0, 0, -1]]),
            (3, vec![vec![0, -1, 0], vec![1, 0, 0], vec![0, 0, -1]]),
        ];
        for (r, images) in corpus {
            let e = Endomorphism::new(r, images.clone()).unwrap();
            match find_fixed_point(&e, 3, ExecMode::default()).unwrap() {
                FixedPoint::Found { degree, .. } => assert!(degree <= 3, "{images:?}"),
                other => panic!("{images:?}: {other:?}"),
            }
        }
    }

    #[test]
    fn jacobi_and_antisymmetry_on_random_triples() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for r in 1..=3 {
            let b = HallBasis::new(r, 5).unwrap();
            for _ in 0..100 {
                let d: Vec<u32> = loop {
                    let d: Vec<u32> = (0..3).map(|_| rng.gen_range(1..=3)).collect();
                    if d.iter().sum::<u32>() <= 5 {
                        break d;
                    }
                };
                let (x, y, z) = (
                    random_homogeneous(&b, d[0], &mut rng),
                    random_homogeneous(&b, d[1], &mut rng),
                    random_homogeneous(&b, d[2], &mut rng),
                );
                let br = |a: &LieElement, c: &LieElement| b.bracket(a, c).unwrap();
                let jacobi = br(&x, &br(&y, &z)).add(&br(&y, &br(&z, &x))).unwrap().add(&br(&z, &br(&x, &y))).unwrap();
                assert!(jacobi.is_zero());
                if 2 * d[0] <= 5 {
                    assert!(br(&x, &x).is_zero());
                }
                assert_eq!(br(&x, &y), br(&y, &x).scale(-1).unwrap());
            }
        }
    }

    fn random_endo(r: usize, rng: &mut ChaCha8Rng) -> Endomorphism {
        Endomorphism::new(r, (0..r).map(|_| (0..r).map(|_| rng.gen_range(-2..=2)).collect()).collect()).unwrap()
    }

    #[test]
    fn action_is_multiplicative() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for r in 2..=3 {
            let b = HallBasis::new(r, 4).unwrap();
            for _ in 0..5 {
                let (s, t) = (random_endo(r, &mut rng), random_endo(r, &mut rng));
                let st = s.compose(&t).unwrap();
                for n in 1..=4 {
                    let lhs = graded_action(&b, &st, n, ExecMode::default()).unwrap();
                    let rhs = graded_action(&b, &s, n, ExecMode::Sequential)
                        .unwrap()
                        .mul(&graded_action(&b, &t, n, ExecMode::Sequential).unwrap());
                    assert_eq!(lhs, rhs, "r={r} n={n}");
                }
            }
        }
    }

    #[test]
    fn action_commutes_with_bracket() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let b = HallBasis::new(3, 5).unwrap();
        let apply = |m: &IntMatrix, x: &LieElement, n: u32| {
            let v: Vec<BigInt> = x.component(n).map_or(vec![BigInt::from(0); b.dim(n)], |c| c.iter().map(|&c| BigInt::from(c)).collect());
            LieElement::homogeneous(n, m.mul_vec(&v).iter().map(|c| c.to_i128().unwrap()).collect())
        };
        for _ in 0..20 {
            let e = random_endo(3, &mut rng);
            let (n, m) = (rng.gen_range(1..=2), rng.gen_range(1..=3));
            let (x, y) = (random_homogeneous(&b, n, &mut rng), random_homogeneous(&b, m, &mut rng));
            let an = graded_action(&b, &e, n, ExecMode::default()).unwrap();
            let am = graded_action(&b, &e, m, ExecMode::default()).unwrap();
            let anm = graded_action(&b, &e, n + m, ExecMode::default()).unwrap();
            let lhs = apply(&anm, &b.bracket(&x, &y).unwrap(), n + m);
            let rhs = b.bracket(&apply(&an, &x, n), &apply(&am, &y, m)).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn json_round_trip() {
        let e = Endomorphism::from_json(r#"{"rank": 2, "images": [[0, 1], [1, 0]]}"#).unwrap();
        assert_eq!(e.linear_order(10), Some(2));
        assert!(matches!(Endomorphism::from_json(r#"{"rank": 2, "images": [[0, 1]]}"#), Err(LieError::Shape { .. })));
    }
}
