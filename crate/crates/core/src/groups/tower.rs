use super::matrix::to_integers;
use super::{FiniteGroup, GroupError, MatrixElement, MatrixGroup, SemidirectElement, SemidirectGroup};
use super::{Subgroup, SubgroupKind};

/// One level `G_k` of a congruence tower `G_1 ↞ G_2 ↞ …`.
///
/// The congruence kernel of depth `j` at level `k` is the set of elements
/// congruent to the identity mod `p^j`, i.e. the kernel of `G_k → G_j`
/// (with `G_0` the part invisible to the congruence filtration).
pub trait TowerLevel: FiniteGroup + Sized {
    fn level(&self) -> u32;

    /// Reduction `G_self → G_coarser`.
    fn project(&self, x: &Self::Element, coarser: &Self) -> Self::Element;

    /// An element of `self` projecting onto `x ∈ coarser`, smallest such when
    /// the canonical integer lift is not itself in the group.
    fn lift_from(&self, x: &Self::Element, coarser: &Self) -> Option<Self::Element>;

    fn kernel_order(&self, depth: u32) -> u64;

    /// Enumerates the depth-`depth` congruence kernel in ascending order.
    fn kernel_element_at(&self, depth: u32, index: u64) -> Self::Element;

    fn in_kernel(&self, x: &Self::Element, depth: u32) -> bool;

    fn generators(&self) -> Vec<Self::Element>;

    fn element_from_integers(&self, ints: &[i64]) -> Result<Self::Element, GroupError>;

    fn element_to_integers(&self, x: &Self::Element) -> Vec<i64>;

    /// For backends with a closed form for `x ↦ x^m` on a congruence coset
    /// `rep · ker(depth)`: `Some(Ok(()))` when the whole coset satisfies
    /// `x^m = 1`, `Some(Err(y))` with a coset element `y` violating it.
    fn power_law_on_kernel_coset(&self, _rep: &Self::Element, _depth: u32, _m: i64) -> Option<Result<(), Self::Element>> {
        None
    }

    fn kernel(&self, depth: u32) -> Subgroup<Self::Element> {
        let elements = (0..self.kernel_order(depth)).map(|i| self.kernel_element_at(depth, i)).collect();
        Subgroup::new(SubgroupKind::Kernel { depth }, format!("ker(G_{} -> G_{depth})", self.level()), elements)
    }
}

impl TowerLevel for SemidirectGroup {
    fn level(&self) -> u32 {
        SemidirectGroup::level(self)
    }

    fn project(&self, x: &SemidirectElement, coarser: &Self) -> SemidirectElement {
        SemidirectElement { u: x.u.iter().map(|&v| v % coarser.modulus()).collect(), j: x.j }
    }

    fn lift_from(&self, x: &SemidirectElement, _coarser: &Self) -> Option<SemidirectElement> {
        Some(x.clone())
    }

    fn kernel_order(&self, depth: u32) -> u64 {
        let d = depth.min(SemidirectGroup::level(self));
        let width = self.prime().pow(SemidirectGroup::level(self) - d);
        width.pow(self.dim() as u32)
    }

    fn kernel_element_at(&self, depth: u32, mut index: u64) -> SemidirectElement {
        let d = depth.min(SemidirectGroup::level(self));
        let step = self.prime().pow(d);
        let width = self.modulus() / step;
        let mut u = smallvec::SmallVec::from_elem(0, self.dim());
        for slot in u.iter_mut().rev() {
            *slot = (index % width) * step;
            index /= width;
        }
        SemidirectElement { u, j: 0 }
    }

    fn in_kernel(&self, x: &SemidirectElement, depth: u32) -> bool {
        let step = self.prime().pow(depth.min(SemidirectGroup::level(self)));
        x.j == 0 && x.u.iter().all(|&v| v % step == 0)
    }

    fn generators(&self) -> Vec<SemidirectElement> {
        let mut gens = vec![self.t()];
        for i in 0..self.dim() {
            let mut u = vec![0i64; self.dim()];
            u[i] = 1;
            gens.push(self.lattice_element(&u).expect("unit vector"));
        }
        gens
    }

    /// `ints = [u_1, …, u_n, j]`.
    fn element_from_integers(&self, ints: &[i64]) -> Result<SemidirectElement, GroupError> {
        match ints.split_last() {
            Some((&j, u)) if u.len() == self.dim() => self.element(u, j),
            _ => Err(GroupError::NotInGroup(format!(
                "expected {} lattice coordinates followed by the t-exponent",
                self.dim()
            ))),
        }
    }

    fn element_to_integers(&self, x: &SemidirectElement) -> Vec<i64> {
        x.u.iter().map(|&v| v as i64).chain([x.j as i64]).collect()
    }

    /// The coset is `{(u_0 + p^d v, t^i)}` and `(u, t^i)^m = (N u, t^{mi})`
    /// with `N = Σ_{s<m} T^{is}`, an affine map in `v`.
    fn power_law_on_kernel_coset(&self, rep: &SemidirectElement, depth: u32, m: i64) -> Option<Result<(), SemidirectElement>> {
        if m <= 0 {
            return None;
        }
        let m = m as u64;
        if !(rep.j as u128 * m as u128).is_multiple_of(self.t_order() as u128) {
            return Some(Err(rep.clone()));
        }
        let n_op = self.power_operator(rep.j, m);
        if self.matvec(&n_op, &rep.u).iter().any(|&v| v != 0) {
            return Some(Err(rep.clone()));
        }
        let step = self.prime().pow(depth.min(SemidirectGroup::level(self)));
        let dim = self.dim();
        for c in 0..dim {
            let column_dead = (0..dim).all(|r| (n_op[r * dim + c] as u128 * step as u128).is_multiple_of(self.modulus() as u128));
            if !column_dead {
                let mut u = rep.u.clone();
                u[c] = (u[c] + step) % self.modulus();
                return Some(Err(SemidirectElement { u, j: rep.j }));
            }
        }
        Some(Ok(()))
    }
}

impl TowerLevel for MatrixGroup {
    fn level(&self) -> u32 {
        MatrixGroup::level(self)
    }

    fn project(&self, x: &MatrixElement, coarser: &Self) -> MatrixElement {
        self.reduce_into(x, coarser.modulus())
    }

    fn lift_from(&self, x: &MatrixElement, coarser: &Self) -> Option<MatrixElement> {
        if self.contains(x) {
            return Some(x.clone());
        }
        self.elements().find(|y| &self.project(y, coarser) == x)
    }

    fn kernel_order(&self, depth: u32) -> u64 {
        self.kernel_indices(depth).len() as u64
    }

    fn kernel_element_at(&self, depth: u32, index: u64) -> MatrixElement {
        self.element_at(self.kernel_indices(depth)[index as usize] as u64)
    }

    fn in_kernel(&self, x: &MatrixElement, depth: u32) -> bool {
        let m = self.base().pow(depth.min(MatrixGroup::level(self)));
        let n = self.dim();
        x.iter().enumerate().all(|(pos, &v)| v % m == u64::from(pos / n == pos % n) % m)
    }

    fn generators(&self) -> Vec<MatrixElement> {
        MatrixGroup::generators(self).to_vec()
    }

    /// `ints` are the matrix entries in row-major order.
    fn element_from_integers(&self, ints: &[i64]) -> Result<MatrixElement, GroupError> {
        self.element_from_flat(ints)
    }

    fn element_to_integers(&self, x: &MatrixElement) -> Vec<i64> {
        to_integers(x)
    }
}

/// Compatible finite quotients `G_lo ↞ … ↞ G_hi`; level `i` of the vector is
/// the `i`-th coarsest.
#[derive(Clone, Debug)]
pub struct QuotientTower<G> {
    levels: Vec<G>,
}

impl<G: TowerLevel> QuotientTower<G> {
    /// Checks that every projection maps generators into the coarser level
    /// and respects products of generator pairs.
    pub fn new(levels: Vec<G>) -> Result<Self, GroupError> {
        if levels.is_empty() {
            return Err(GroupError::BadLevels { lo: 0, hi: 0 });
        }
        for pair in levels.windows(2) {
            let (coarse, fine) = (&pair[0], &pair[1]);
            if fine.level() <= coarse.level() {
                return Err(GroupError::BadLevels { lo: coarse.level(), hi: fine.level() });
            }
            let bad = GroupError::BadProjection { from: fine.level(), to: coarse.level() };
            let gens = fine.generators();
            for g in &gens {
                if !coarse.contains(&fine.project(g, coarse)) {
                    return Err(bad);
                }
                for h in &gens {
                    let lhs = fine.project(&fine.mul(g, h), coarse);
                    let rhs = coarse.mul(&fine.project(g, coarse), &fine.project(h, coarse));
                    if lhs != rhs {
                        return Err(bad);
                    }
                }
            }
            if fine.order() % coarse.order() != 0 {
                return Err(bad);
            }
        }
        Ok(QuotientTower { levels })
    }

    pub fn levels(&self) -> &[G] {
        &self.levels
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn level(&self, i: usize) -> &G {
        &self.levels[i]
    }

    pub fn level_numbers(&self) -> Vec<u32> {
        self.levels.iter().map(TowerLevel::level).collect()
    }

    /// The same integer representatives read at every level.
    pub fn path_from_integers(&self, ints: &[i64]) -> Result<Vec<G::Element>, GroupError> {
        self.levels.iter().map(|g| g.element_from_integers(ints)).collect()
    }

    /// Verifies that `path[i+1]` projects to `path[i]`.
    pub fn check_path(&self, path: &[G::Element]) -> Result<(), GroupError> {
        if path.len() != self.levels.len() {
            return Err(GroupError::IncompatiblePath { from: 0, to: 0 });
        }
        for (i, (g, x)) in self.levels.iter().zip(path).enumerate() {
            if !g.contains(x) {
                return Err(GroupError::NotInGroup(format!("{x:?} at level {}", g.level())));
            }
            if i > 0 {
                let coarse = &self.levels[i - 1];
                if g.project(x, coarse) != path[i - 1] {
                    return Err(GroupError::IncompatiblePath { from: g.level(), to: coarse.level() });
                }
            }
        }
        Ok(())
    }
}
