//! Concrete finite groups and towers of finite quotients.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::hash::Hash;

use rand::Rng;
use thiserror::Error;

use crate::exec::{self, ExecMode};

mod matrix;
mod semidirect;
mod spec;
mod tower;

pub use matrix::{MatrixElement, MatrixGroup};
pub use semidirect::{SemidirectElement, SemidirectGroup};
pub use spec::{build_tower, AnyTower, GroupSpec};
pub use tower::{QuotientTower, TowerLevel};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("modulus must be at least 2, got {0}")]
    BadModulus(u64),
    #[error("matrix must be square with dimension {expected}")]
    NotSquare { expected: usize },
    #[error("generator {index} is not invertible modulo {modulus}")]
    NonInvertibleGenerator { index: usize, modulus: u64 },
    #[error("closure exceeded the cap of {cap} elements")]
    CapExceeded { cap: usize },
    #[error("T^{t_order} is not the identity modulo {prime}^{level}")]
    OrderCondition { t_order: u64, prime: u64, level: u32 },
    #[error("t_order must be positive")]
    ZeroOrder,
    #[error("group order does not fit in 64 bits")]
    TooLarge,
    #[error("element is not in the group: {0}")]
    NotInGroup(String),
    #[error("invalid level range {lo}..{hi}")]
    BadLevels { lo: u32, hi: u32 },
    #[error("projection from level {from} is not a homomorphism onto level {to}")]
    BadProjection { from: u32, to: u32 },
    #[error("lift path does not project compatibly between levels {from} and {to}")]
    IncompatiblePath { from: u32, to: u32 },
    #[error("subgroup '{0}' is not a subgroup of the group")]
    NotSubgroup(String),
    #[error("malformed group spec: {0}")]
    Spec(String),
}

/// A finite group whose elements can be enumerated by index.
///
/// `element_at` must list the group in ascending `Ord` order, which makes
/// "smallest element" and lexicographic tie-breaking cheap for callers.
pub trait FiniteGroup: Sync + Send {
    type Element: Clone + Eq + Ord + Hash + fmt::Debug + Send + Sync;

    fn order(&self) -> u64;
    fn identity(&self) -> Self::Element;
    fn mul(&self, a: &Self::Element, b: &Self::Element) -> Self::Element;
    fn inv(&self, a: &Self::Element) -> Self::Element;
    fn element_at(&self, index: u64) -> Self::Element;
    fn contains(&self, a: &Self::Element) -> bool;

    fn pow(&self, a: &Self::Element, e: i64) -> Self::Element {
        let mut base = if e < 0 { self.inv(a) } else { a.clone() };
        let mut n = e.unsigned_abs();
        let mut acc = self.identity();
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            n >>= 1;
            if n > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// `g^-1 x g`
    fn conjugate(&self, x: &Self::Element, g: &Self::Element) -> Self::Element {
        self.mul(&self.mul(&self.inv(g), x), g)
    }

    /// Uniform element; both backends sample uniform coordinates.
    fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Element {
        self.element_at(rng.gen_range(0..self.order()))
    }

    fn elements(&self) -> impl Iterator<Item = Self::Element> + '_ {
        (0..self.order()).map(|i| self.element_at(i))
    }
}

/// Least `n ≥ 1` with `x^n = 1`.
pub fn element_order<G: FiniteGroup>(g: &G, x: &G::Element) -> u64 {
    let id = g.identity();
    let mut acc = x.clone();
    let mut n = 1u64;
    while acc != id {
        acc = g.mul(&acc, x);
        n += 1;
        assert!(n <= g.order(), "element of infinite order in a finite group");
    }
    n
}

/// `C_G(x)` in ascending order.
pub fn centralizer<G: FiniteGroup>(g: &G, x: &G::Element) -> Vec<G::Element> {
    exec::filter_map_range(ExecMode::default(), g.order(), |i| {
        let y = g.element_at(i);
        (g.mul(&y, x) == g.mul(x, &y)).then_some(y)
    })
}

pub fn centralizer_order<G: FiniteGroup>(g: &G, x: &G::Element, mode: ExecMode) -> u64 {
    exec::sum_range(mode, g.order(), |i| {
        let y = g.element_at(i);
        u64::from(g.mul(&y, x) == g.mul(x, &y))
    })
}

/// `x^G`, ascending.
pub fn conjugacy_class<G: FiniteGroup>(g: &G, x: &G::Element) -> Vec<G::Element> {
    let conj = exec::map_range(ExecMode::default(), g.order(), |i| g.conjugate(x, &g.element_at(i)));
    conj.into_iter().collect::<BTreeSet<_>>().into_iter().collect()
}

/// Where a subgroup in a scanning family came from.
#[derive(Clone, Debug, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SubgroupKind {
    /// Congruence kernel: elements congruent to the identity mod `p^depth`.
    Kernel { depth: u32 },
    Cyclic,
    Supplied,
}

/// A subgroup given by its element list (sorted, duplicate-free).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgroup<E> {
    pub kind: SubgroupKind,
    pub label: String,
    elements: Vec<E>,
}

impl<E: Clone + Ord + Hash> Subgroup<E> {
    pub fn new(kind: SubgroupKind, label: impl Into<String>, mut elements: Vec<E>) -> Self {
        elements.sort();
        elements.dedup();
        Subgroup { kind, label: label.into(), elements }
    }

    pub fn order(&self) -> u64 {
        self.elements.len() as u64
    }

    pub fn elements(&self) -> &[E] {
        &self.elements
    }

    pub fn contains(&self, x: &E) -> bool {
        self.elements.binary_search(x).is_ok()
    }

    /// Extensional check that the element set is a subgroup of `g`.
    ///
    /// Generators are picked greedily and the generated subgroup is rebuilt
    /// by BFS; the set is a subgroup iff that span equals the set.
    pub fn is_subgroup_of<G: FiniteGroup<Element = E>>(&self, g: &G) -> bool {
        if !self.contains(&g.identity()) || !self.elements.iter().all(|x| g.contains(x)) {
            return false;
        }
        if !g.order().is_multiple_of(self.order()) {
            return false;
        }
        let mut gens: Vec<E> = Vec::new();
        let mut span: HashSet<E> = HashSet::from([g.identity()]);
        for h in &self.elements {
            if span.contains(h) {
                continue;
            }
            gens.push(h.clone());
            span = match bounded_closure(g, &gens, |x| self.contains(x), self.elements.len()) {
                Some(s) => s,
                None => return false,
            };
        }
        span.len() == self.elements.len()
    }
}

/// BFS closure of `gens` from the identity; `None` as soon as an element
/// fails `allowed` or the size passes `limit`.
fn bounded_closure<G: FiniteGroup>(
    g: &G,
    gens: &[G::Element],
    allowed: impl Fn(&G::Element) -> bool,
    limit: usize,
) -> Option<HashSet<G::Element>> {
    let id = g.identity();
    let mut seen = HashSet::from([id.clone()]);
    let mut queue = vec![id];
    while let Some(x) = queue.pop() {
        for s in gens {
            let y = g.mul(&x, s);
            if seen.contains(&y) {
                continue;
            }
            if !allowed(&y) || seen.len() >= limit {
                return None;
            }
            seen.insert(y.clone());
            queue.push(y);
        }
    }
    Some(seen)
}

/// All distinct cyclic subgroups `<x>` of `g`, ordered by their smallest
/// generator in enumeration order.
pub fn cyclic_subgroups<G: FiniteGroup>(g: &G) -> Vec<Subgroup<G::Element>> {
    cyclic_subgroups_labelled(g, |x| format!("{x:?}"))
}

/// As [`cyclic_subgroups`], naming each `<x>` via `name(x)`.
pub fn cyclic_subgroups_labelled<G: FiniteGroup>(g: &G, name: impl Fn(&G::Element) -> String) -> Vec<Subgroup<G::Element>> {
    let mut seen: HashSet<Vec<G::Element>> = HashSet::new();
    let mut out = Vec::new();
    for x in g.elements() {
        let mut elems = vec![g.identity()];
        let mut acc = x.clone();
        while acc != g.identity() {
            elems.push(acc.clone());
            acc = g.mul(&acc, &x);
        }
        let sg = Subgroup::new(SubgroupKind::Cyclic, format!("<{}>", name(&x)), elems);
        if seen.insert(sg.elements.clone()) {
            out.push(sg);
        }
    }
    out
}
