use std::collections::{HashMap, VecDeque};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use smallvec::SmallVec;

use super::{FiniteGroup, GroupError};
use crate::checked_pow;
use crate::linalg::IntMatrix;

/// Row-major `n×n` matrix with entries reduced to `[0, m)`.
pub type MatrixElement = SmallVec<[u64; 9]>;

/// A finite subgroup of `GL_n(Z/m)` given by generators and enumerated by
/// breadth-first closure. When built as a tower level, `m = base^level`.
#[derive(Clone, Debug)]
pub struct MatrixGroup {
    base: u64,
    level: u32,
    modulus: u64,
    dim: usize,
    generators: Vec<MatrixElement>,
    elements: Vec<MatrixElement>,
    index: HashMap<MatrixElement, u32>,
    inverses: Vec<u32>,
    /// `kernels[j]`: indices of elements `≡ I mod base^j`, for `j ≤ level`.
    kernels: Vec<Vec<u32>>,
}

fn mat_mul(a: &[u64], b: &[u64], n: usize, m: u64) -> MatrixElement {
    let mut out = SmallVec::from_elem(0, n * n);
    for i in 0..n {
        for j in 0..n {
            let s: u128 = (0..n).map(|k| a[i * n + k] as u128 * b[k * n + j] as u128).sum();
            out[i * n + j] = (s % m as u128) as u64;
        }
    }
    out
}

fn identity_matrix(n: usize, m: u64) -> MatrixElement {
    let mut id = SmallVec::from_elem(0, n * n);
    for i in 0..n {
        id[i * n + i] = 1 % m;
    }
    id
}

impl MatrixGroup {
    pub const DEFAULT_CAP: usize = 1 << 20;

    /// Closure of `generators` in `GL_dim(Z/modulus)`.
    pub fn closure(modulus: u64, dim: usize, generators: &[Vec<Vec<i64>>], cap: usize) -> Result<Self, GroupError> {
        Self::tower_level(modulus, 1, dim, generators, cap)
    }

    /// Closure of `generators` reduced mod `base^level`.
    pub fn tower_level(
        base: u64,
        level: u32,
        dim: usize,
        generators: &[Vec<Vec<i64>>],
        cap: usize,
    ) -> Result<Self, GroupError> {
        if base < 2 {
            return Err(GroupError::BadModulus(base));
        }
        let modulus = checked_pow(base, level).ok_or(GroupError::TooLarge)?;
        let mut gens = Vec::with_capacity(generators.len());
        for (index, g) in generators.iter().enumerate() {
            if g.len() != dim || g.iter().any(|row| row.len() != dim) {
                return Err(GroupError::NotSquare { expected: dim });
            }
            let det = IntMatrix::from_rows(g).det();
            if !det.mod_floor(&BigInt::from(modulus)).gcd(&BigInt::from(modulus)).eq(&BigInt::from(1)) {
                return Err(GroupError::NonInvertibleGenerator { index, modulus });
            }
            gens.push(g.iter().flatten().map(|&v| v.rem_euclid(modulus as i64) as u64).collect::<MatrixElement>());
        }

        let id = identity_matrix(dim, modulus);
        let mut seen: HashMap<MatrixElement, ()> = HashMap::from([(id.clone(), ())]);
        let mut queue = VecDeque::from([id]);
        while let Some(x) = queue.pop_front() {
            for g in &gens {
                let y = mat_mul(&x, g, dim, modulus);
                if seen.contains_key(&y) {
                    continue;
                }
                if seen.len() >= cap {
                    return Err(GroupError::CapExceeded { cap });
                }
                seen.insert(y.clone(), ());
                queue.push_back(y);
            }
        }
        let mut elements: Vec<MatrixElement> = seen.into_keys().collect();
        elements.sort();
        let index: HashMap<MatrixElement, u32> =
            elements.iter().enumerate().map(|(i, e)| (e.clone(), i as u32)).collect();

        // Walk each cyclic subgroup once to fill the inverse table.
        let id_idx = index[&identity_matrix(dim, modulus)];
        let mut inverses = vec![u32::MAX; elements.len()];
        for start in 0..elements.len() {
            if inverses[start] != u32::MAX {
                continue;
            }
            let mut cycle = vec![id_idx, start as u32];
            let mut acc = elements[start].clone();
            loop {
                acc = mat_mul(&acc, &elements[start], dim, modulus);
                let i = index[&acc];
                if i == id_idx {
                    break;
                }
                cycle.push(i);
            }
            let k = cycle.len();
            for (pos, &i) in cycle.iter().enumerate() {
                inverses[i as usize] = cycle[(k - pos) % k];
            }
        }

        let kernels = (0..=level)
            .map(|j| {
                let m = base.pow(j);
                elements
                    .iter()
                    .enumerate()
                    .filter(|(_, e)| {
                        e.iter().enumerate().all(|(pos, &v)| {
                            let target = u64::from(pos / dim == pos % dim);
                            (v % m) == (target % m)
                        })
                    })
                    .map(|(i, _)| i as u32)
                    .collect()
            })
            .collect();

        Ok(MatrixGroup { base, level, modulus, dim, generators: gens, elements, index, inverses, kernels })
    }

    /// The symmetric group on three points as 3×3 permutation matrices mod 2.
    pub fn symmetric3() -> Self {
        let a = vec![vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, 1]];
        let b = vec![vec![0, 0, 1], vec![1, 0, 0], vec![0, 1, 0]];
        Self::closure(2, 3, &[a, b], 16).expect("S3 generators are permutation matrices")
    }

    /// Dihedral group of order 8 in `GL_2(Z/3)`.
    pub fn dihedral8() -> Self {
        let r = vec![vec![0, -1], vec![1, 0]];
        let s = vec![vec![1, 0], vec![0, -1]];
        Self::closure(3, 2, &[r, s], 16).expect("valid generators")
    }

    /// Quaternion group of order 8 in `SL_2(Z/3)`.
    pub fn quaternion8() -> Self {
        let i = vec![vec![0, -1], vec![1, 0]];
        let j = vec![vec![1, 1], vec![1, -1]];
        Self::closure(3, 2, &[i, j], 16).expect("valid generators")
    }

    /// Upper unitriangular 3×3 matrices over `Z/m`.
    pub fn heisenberg(m: u64) -> Self {
        Self::closure(m, 3, &heisenberg_generators(), 1 << 20).expect("valid generators")
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn base(&self) -> u64 {
        self.base
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[MatrixElement] {
        &self.generators
    }

    pub fn index_of(&self, x: &MatrixElement) -> Option<u64> {
        self.index.get(x).map(|&i| i as u64)
    }

    pub(crate) fn kernel_indices(&self, depth: u32) -> &[u32] {
        &self.kernels[depth.min(self.level) as usize]
    }

    /// Reduces integer rows mod `m` and checks membership.
    pub fn element_from_rows(&self, rows: &[Vec<i64>]) -> Result<MatrixElement, GroupError> {
        let flat: Vec<i64> = rows.iter().flatten().copied().collect();
        if rows.len() != self.dim || flat.len() != self.dim * self.dim {
            return Err(GroupError::NotSquare { expected: self.dim });
        }
        self.element_from_flat(&flat)
    }

    pub fn element_from_flat(&self, flat: &[i64]) -> Result<MatrixElement, GroupError> {
        if flat.len() != self.dim * self.dim {
            return Err(GroupError::NotInGroup(format!("expected {} entries", self.dim * self.dim)));
        }
        let e: MatrixElement = flat.iter().map(|&v| v.rem_euclid(self.modulus as i64) as u64).collect();
        if !self.index.contains_key(&e) {
            return Err(GroupError::NotInGroup(format!("{flat:?}")));
        }
        Ok(e)
    }

    pub(crate) fn reduce_into(&self, x: &MatrixElement, coarser_modulus: u64) -> MatrixElement {
        x.iter().map(|&v| v % coarser_modulus).collect()
    }
}

pub(crate) fn heisenberg_generators() -> Vec<Vec<Vec<i64>>> {
    vec![
        vec![vec![1, 1, 0], vec![0, 1, 0], vec![0, 0, 1]],
        vec![vec![1, 0, 0], vec![0, 1, 1], vec![0, 0, 1]],
    ]
}

impl FiniteGroup for MatrixGroup {
    type Element = MatrixElement;

    fn order(&self) -> u64 {
        self.elements.len() as u64
    }

    fn identity(&self) -> MatrixElement {
        identity_matrix(self.dim, self.modulus)
    }

    fn mul(&self, a: &MatrixElement, b: &MatrixElement) -> MatrixElement {
        mat_mul(a, b, self.dim, self.modulus)
    }

    fn inv(&self, a: &MatrixElement) -> MatrixElement {
        let i = self.index.get(a).expect("inverse of an element outside the group");
        self.elements[self.inverses[*i as usize] as usize].clone()
    }

    fn element_at(&self, index: u64) -> MatrixElement {
        self.elements[index as usize].clone()
    }

    fn contains(&self, a: &MatrixElement) -> bool {
        self.index.contains_key(a)
    }
}

/// Entries as signed integers, for reports.
pub(crate) fn to_integers(x: &MatrixElement) -> Vec<i64> {
    x.iter().map(|&v| v.to_i64().unwrap_or(i64::MAX)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::element_order;

    #[test]
    fn closure_examples() {
        let g = MatrixGroup::closure(3, 2, &[vec![vec![1, 1], vec![0, 1]]], 100).unwrap();
        assert_eq!(g.order(), 3);
        let trivial = MatrixGroup::closure(5, 2, &[], 100).unwrap();
        assert_eq!(trivial.order(), 1);
        assert_eq!(MatrixGroup::heisenberg(3).order(), 27);
        assert_eq!(MatrixGroup::symmetric3().order(), 6);
        assert_eq!(MatrixGroup::dihedral8().order(), 8);
        assert_eq!(MatrixGroup::quaternion8().order(), 8);
    }

    #[test]
    fn bfs_oracle_for_single_generator() {
        // {I, g, g^2} written out by hand
        let g = MatrixGroup::closure(3, 2, &[vec![vec![1, 1], vec![0, 1]]], 100).unwrap();
        let expect: Vec<MatrixElement> = vec![
            SmallVec::from_slice(&[1, 0, 0, 1]),
            SmallVec::from_slice(&[1, 1, 0, 1]),
            SmallVec::from_slice(&[1, 2, 0, 1]),
        ];
        let got: Vec<_> = g.elements().collect();
        assert_eq!(got, expect);
    }

    #[test]
    fn closure_errors() {
        let err = MatrixGroup::closure(4, 2, &[vec![vec![2, 0], vec![0, 1]]], 100).unwrap_err();
        assert_eq!(err, GroupError::NonInvertibleGenerator { index: 0, modulus: 4 });
        let err = MatrixGroup::closure(3, 3, &heisenberg_generators(), 10).unwrap_err();
        assert_eq!(err, GroupError::CapExceeded { cap: 10 });
        assert!(matches!(
            MatrixGroup::closure(3, 2, &[vec![vec![1, 0, 0]]], 10).unwrap_err(),
            GroupError::NotSquare { .. }
        ));
    }

    #[test]
    fn inverses_and_quaternion_structure() {
        let q = MatrixGroup::quaternion8();
        for x in q.elements() {
            assert_eq!(q.mul(&x, &q.inv(&x)), q.identity());
        }
        let orders: Vec<u64> = q.elements().map(|x| element_order(&q, &x)).collect();
        assert_eq!(orders.iter().filter(|&&o| o == 4).count(), 6);
        assert_eq!(orders.iter().filter(|&&o| o == 2).count(), 1);
    }

    #[test]
    fn heisenberg_kernels() {
        let h = MatrixGroup::tower_level(3, 2, 3, &heisenberg_generators(), 1 << 12).unwrap();
        assert_eq!(h.order(), 729);
        assert_eq!(h.kernel_indices(0).len(), 729);
        assert_eq!(h.kernel_indices(1).len(), 27);
        assert_eq!(h.kernel_indices(2).len(), 1);
    }
}
