use smallvec::SmallVec;

use super::{FiniteGroup, GroupError};
use crate::linalg::IntMatrix;
use crate::{checked_pow, is_prime};

/// `(u, t^j)` with `u ∈ (Z/p^k)^n` and `j ∈ Z/m_t`. Ordered by `u`, then `j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SemidirectElement {
    pub u: SmallVec<[u64; 6]>,
    pub j: u64,
}

impl SemidirectElement {
    pub fn new(u: &[u64], j: u64) -> Self {
        SemidirectElement { u: SmallVec::from_slice(u), j }
    }
}

/// `U ⋊ <t>` with `U = (Z/p^k)^n` and `t` acting through the integer matrix
/// `T`, multiplication `(u, t^i)(v, t^j) = (u + T^i v, t^{i+j})`.
#[derive(Clone, Debug)]
pub struct SemidirectGroup {
    prime: u64,
    level: u32,
    dim: usize,
    modulus: u64,
    t_order: u64,
    action: IntMatrix,
    /// `T^i mod p^k` for `i < t_order`, row-major.
    powers: Vec<Vec<u64>>,
    lattice_order: u64,
    order: u64,
}

fn reduce(v: i64, m: u64) -> u64 {
    v.rem_euclid(m as i64) as u64
}

fn mat_mul_mod(a: &[u64], b: &[u64], n: usize, m: u64) -> Vec<u64> {
    let mut out = vec![0u64; n * n];
    for i in 0..n {
        for j in 0..n {
            let s: u128 = (0..n).map(|k| a[i * n + k] as u128 * b[k * n + j] as u128).sum();
            out[i * n + j] = (s % m as u128) as u64;
        }
    }
    out
}

impl SemidirectGroup {
    /// Level-`level` quotient `(Z/p^level)^n ⋊ C_{t_order}`.
    pub fn new(action: &[Vec<i64>], prime: u64, level: u32, t_order: u64) -> Result<Self, GroupError> {
        if !is_prime(prime) {
            return Err(GroupError::NotPrime(prime));
        }
        if t_order == 0 {
            return Err(GroupError::ZeroOrder);
        }
        let dim = action.len();
        if action.iter().any(|row| row.len() != dim) {
            return Err(GroupError::NotSquare { expected: dim });
        }
        let modulus = checked_pow(prime, level).ok_or(GroupError::TooLarge)?;
        let lattice_order = checked_pow(modulus, dim as u32).ok_or(GroupError::TooLarge)?;
        let order = lattice_order.checked_mul(t_order).ok_or(GroupError::TooLarge)?;
        let t: Vec<u64> = action.iter().flatten().map(|&v| reduce(v, modulus)).collect();
        let mut identity = vec![0u64; dim * dim];
        for i in 0..dim {
            identity[i * dim + i] = 1 % modulus;
        }
        let mut powers = Vec::with_capacity(t_order as usize);
        let mut acc = identity.clone();
        for _ in 0..t_order {
            powers.push(acc.clone());
            acc = mat_mul_mod(&acc, &t, dim, modulus);
        }
        if acc != identity {
            return Err(GroupError::OrderCondition { t_order, prime, level });
        }
        Ok(SemidirectGroup {
            prime,
            level,
            dim,
            modulus,
            t_order,
            action: IntMatrix::from_rows(action),
            powers,
            lattice_order,
            order,
        })
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn t_order(&self) -> u64 {
        self.t_order
    }

    /// The integer action matrix `T` this level was built from.
    pub fn action(&self) -> &IntMatrix {
        &self.action
    }

    pub fn lattice_order(&self) -> u64 {
        self.lattice_order
    }

    /// The distinguished element `t = (0, t^1)`.
    pub fn t(&self) -> SemidirectElement {
        SemidirectElement { u: SmallVec::from_elem(0, self.dim), j: 1 % self.t_order }
    }

    /// `(u, 1)` with `u` given by integer representatives.
    pub fn lattice_element(&self, u: &[i64]) -> Result<SemidirectElement, GroupError> {
        self.element(u, 0)
    }

    pub fn element(&self, u: &[i64], j: i64) -> Result<SemidirectElement, GroupError> {
        if u.len() != self.dim {
            return Err(GroupError::NotInGroup(format!("expected {} lattice coordinates", self.dim)));
        }
        Ok(SemidirectElement {
            u: u.iter().map(|&v| reduce(v, self.modulus)).collect(),
            j: reduce(j, self.t_order),
        })
    }

    fn apply_power(&self, i: u64, v: &[u64]) -> SmallVec<[u64; 6]> {
        let m = &self.powers[i as usize];
        let n = self.dim;
        (0..n)
            .map(|r| {
                let s: u128 = (0..n).map(|c| m[r * n + c] as u128 * v[c] as u128).sum();
                (s % self.modulus as u128) as u64
            })
            .collect()
    }

    /// `Σ_{s<count} T^{i·s} mod p^k` (row-major): `(u, t^i)^count` has lattice
    /// part `power_operator(i, count)·u`.
    pub fn power_operator(&self, i: u64, count: u64) -> Vec<u64> {
        let n = self.dim;
        let mut acc = vec![0u64; n * n];
        let mut e = 0u64;
        for _ in 0..count {
            let m = &self.powers[e as usize];
            for (a, b) in acc.iter_mut().zip(m) {
                *a = (*a + b) % self.modulus;
            }
            e = (e + i) % self.t_order;
        }
        acc
    }

    /// Additive order of a lattice vector mod `p^k`.
    pub fn additive_order(&self, v: &[u64]) -> u64 {
        let mut ord = 1u64;
        let mut scaled: Vec<u64> = v.to_vec();
        while scaled.iter().any(|&x| x != 0) {
            scaled = scaled.iter().map(|&x| ((x as u128 * self.prime as u128) % self.modulus as u128) as u64).collect();
            ord *= self.prime;
        }
        ord
    }

    pub(crate) fn matvec(&self, m: &[u64], v: &[u64]) -> Vec<u64> {
        let n = self.dim;
        (0..n)
            .map(|r| {
                let s: u128 = (0..n).map(|c| m[r * n + c] as u128 * v[c] as u128).sum();
                (s % self.modulus as u128) as u64
            })
            .collect()
    }
}

impl FiniteGroup for SemidirectGroup {
    type Element = SemidirectElement;

    fn order(&self) -> u64 {
        self.order
    }

    fn identity(&self) -> SemidirectElement {
        SemidirectElement { u: SmallVec::from_elem(0, self.dim), j: 0 }
    }

    fn mul(&self, a: &SemidirectElement, b: &SemidirectElement) -> SemidirectElement {
        let tv = self.apply_power(a.j, &b.u);
        let u = a.u.iter().zip(&tv).map(|(x, y)| (x + y) % self.modulus).collect();
        SemidirectElement { u, j: (a.j + b.j) % self.t_order }
    }

    fn inv(&self, a: &SemidirectElement) -> SemidirectElement {
        let back = (self.t_order - a.j) % self.t_order;
        let tu = self.apply_power(back, &a.u);
        let u = tu.iter().map(|&x| (self.modulus - x) % self.modulus).collect();
        SemidirectElement { u, j: back }
    }

    fn element_at(&self, index: u64) -> SemidirectElement {
        let j = index % self.t_order;
        let mut rest = index / self.t_order;
        let mut u: SmallVec<[u64; 6]> = SmallVec::from_elem(0, self.dim);
        for slot in u.iter_mut().rev() {
            *slot = rest % self.modulus;
            rest /= self.modulus;
        }
        SemidirectElement { u, j }
    }

    fn contains(&self, a: &SemidirectElement) -> bool {
        a.u.len() == self.dim && a.u.iter().all(|&x| x < self.modulus) && a.j < self.t_order
    }
}
