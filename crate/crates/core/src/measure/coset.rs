use std::collections::HashMap;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{Budget, MeasureError};
use crate::exec;
use crate::groups::{cyclic_subgroups_labelled, FiniteGroup, QuotientTower, Subgroup, SubgroupKind, TowerLevel};
use crate::words::Word;

/// Random tuples tried when a lifted coset is too large to enumerate.
pub const REFUTATION_SAMPLES: u64 = 100_000;

/// Cyclic subgroups join the default scanning family up to this group order.
const CYCLIC_FAMILY_MAX_ORDER: u64 = 512;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LiftMethod {
    Exhaustive,
    /// Closed form for `x^m` on a congruence coset.
    PowerShortcut,
    Sampled,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LiftOutcome<E> {
    Verified,
    /// A tuple of the lifted coset product on which the word is not 1.
    Refuted { counterexample: Vec<E> },
    /// Too large to enumerate and no counterexample was sampled.
    Undecided,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftStatus<E> {
    pub level: u32,
    pub method: LiftMethod,
    pub outcome: LiftOutcome<E>,
}

/// `w` is identically 1 on `g_1H × … × g_rH` at `level`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetWitness<E> {
    pub level: u32,
    pub subgroup_kind: SubgroupKind,
    pub subgroup_label: String,
    pub subgroup_order: u64,
    /// Smallest element of each coset.
    pub reps: Vec<E>,
    pub index: u64,
    pub lift: Vec<LiftStatus<E>>,
}

impl<E> CosetWitness<E> {
    /// Lower bound `1/[G:H]^r` that the witness forces on `P(G_k, w)`.
    pub fn probability_lower_bound(&self) -> num_rational::Ratio<u64> {
        num_rational::Ratio::new(1, self.index.pow(self.reps.len() as u32))
    }
}

/// Congruence kernels of depth `0..level`, plus every cyclic subgroup when
/// the group is small.
pub fn default_family<G: TowerLevel>(g: &G) -> Vec<Subgroup<G::Element>> {
    let mut family: Vec<_> = (0..g.level()).map(|j| g.kernel(j)).collect();
    if g.order() <= CYCLIC_FAMILY_MAX_ORDER {
        // cosets of the trivial subgroup are single elements and say nothing
        let cyclic = cyclic_subgroups_labelled(g, |x| serde_json::to_string(&g.element_to_integers(x)).expect("integers serialize"));
        family.extend(cyclic.into_iter().filter(|h| h.order() > 1));
    }
    family
}

/// Left cosets of `h`, each as (smallest element, members).
fn left_cosets<G: FiniteGroup>(g: &G, h: &Subgroup<G::Element>) -> Vec<G::Element> {
    let mut assigned: HashMap<G::Element, ()> = HashMap::with_capacity(g.order() as usize);
    let mut reps = Vec::new();
    for x in g.elements() {
        if assigned.contains_key(&x) {
            continue;
        }
        for y in h.elements() {
            assigned.insert(g.mul(&x, y), ());
        }
        reps.push(x);
    }
    reps
}

/// Mixed-radix decode of `idx` into `r` digits base `base`, most
/// significant first.
fn digits(mut idx: u64, base: u64, r: usize) -> Vec<u64> {
    let mut out = vec![0; r];
    for slot in out.iter_mut().rev() {
        *slot = idx % base;
        idx /= base;
    }
    out
}

/// All coset tuples from `family` on which `w` holds identically.
///
/// Witnesses come out grouped by family member, then in lexicographic
/// order of their representatives.
pub fn coset_scan<G: TowerLevel>(
    g: &G,
    w: &Word,
    family: &[Subgroup<G::Element>],
    budget: &Budget,
) -> Result<Vec<CosetWitness<G::Element>>, MeasureError> {
    let r = w.rank();
    for h in family {
        if !h.is_subgroup_of(g) {
            return Err(MeasureError::NotSubgroup(h.label.clone()));
        }
    }
    let mut out = Vec::new();
    for h in family {
        budget.tuples(g.order(), r)?;
        let reps = left_cosets(g, h);
        let index = reps.len() as u64;
        let hs = h.elements();
        let n_h = hs.len() as u64;
        let inner = n_h.pow(r as u32);
        let hits = exec::filter_map_range(budget.mode, index.pow(r as u32), |tuple| {
            let chosen: Vec<&G::Element> = digits(tuple, index, r).into_iter().map(|i| &reps[i as usize]).collect();
            let mut images: Vec<G::Element> = chosen.iter().map(|&x| x.clone()).collect();
            for k in 0..inner {
                for (slot, (rep, hi)) in images.iter_mut().zip(chosen.iter().zip(digits(k, n_h, r))) {
                    *slot = g.mul(rep, &hs[hi as usize]);
                }
                if !w.is_satisfied_by(&images, g) {
                    return None;
                }
            }
            Some(chosen.into_iter().cloned().collect::<Vec<_>>())
        });
        out.extend(hits.into_iter().map(|reps| CosetWitness {
            level: g.level(),
            subgroup_kind: h.kind.clone(),
            subgroup_label: h.label.clone(),
            subgroup_order: h.order(),
            reps,
            index,
            lift: Vec::new(),
        }));
    }
    Ok(out)
}

/// Re-checks a witness on its full preimage at each deeper level of
/// `tower`, stopping at the first refutation.
///
/// A kernel coset `gH` with `H = ker(G_k → G_j)` lifts to
/// `lift(g)·ker(G_k' → G_j)`; any other subgroup lifts to
/// `lift(g)·lift(H)·ker(G_k' → G_k)`.
pub fn witness_lift<G: TowerLevel>(
    tower: &QuotientTower<G>,
    witness: &CosetWitness<G::Element>,
    subgroup: &Subgroup<G::Element>,
    w: &Word,
    budget: &Budget,
    seed: u64,
) -> Result<Vec<LiftStatus<G::Element>>, MeasureError> {
    let base_pos = tower
        .levels()
        .iter()
        .position(|g| g.level() == witness.level)
        .ok_or(MeasureError::LevelNotInTower(witness.level))?;
    let base = tower.level(base_pos);
    let r = w.rank();
    let mut statuses = Vec::new();
    for fine in &tower.levels()[base_pos + 1..] {
        let lifted_reps: Vec<G::Element> = witness
            .reps
            .iter()
            .map(|x| fine.lift_from(x, base).expect("tower projections are surjective"))
            .collect();
        let status = match witness.subgroup_kind {
            SubgroupKind::Kernel { depth } => {
                lift_kernel_coset(fine, &lifted_reps, depth, w, r, budget, seed)
            }
            _ => {
                let lifted_h: Vec<G::Element> = subgroup
                    .elements()
                    .iter()
                    .map(|h| fine.lift_from(h, base).expect("tower projections are surjective"))
                    .collect();
                lift_generic_coset(fine, &lifted_reps, &lifted_h, witness.level, w, r, budget, seed)
            }
        };
        let refuted = matches!(status.outcome, LiftOutcome::Refuted { .. });
        statuses.push(status);
        if refuted {
            break;
        }
    }
    Ok(statuses)
}

fn lift_kernel_coset<G: TowerLevel>(
    fine: &G,
    reps: &[G::Element],
    depth: u32,
    w: &Word,
    r: usize,
    budget: &Budget,
    seed: u64,
) -> LiftStatus<G::Element> {
    if let (1, Some((0, m))) = (r, w.as_power()) {
        if let Some(res) = fine.power_law_on_kernel_coset(&reps[0], depth, m) {
            let outcome = match res {
                Ok(()) => LiftOutcome::Verified,
                Err(y) => LiftOutcome::Refuted { counterexample: vec![y] },
            };
            return LiftStatus { level: fine.level(), method: LiftMethod::PowerShortcut, outcome };
        }
    }
    let size = fine.kernel_order(depth);
    let member = |coord: usize, idx: u64| fine.mul(&reps[coord], &fine.kernel_element_at(depth, idx));
    search_coset_product(fine, size, member, w, r, budget, seed)
}

#[allow(clippy::too_many_arguments)]
fn lift_generic_coset<G: TowerLevel>(
    fine: &G,
    reps: &[G::Element],
    lifted_h: &[G::Element],
    base_level: u32,
    w: &Word,
    r: usize,
    budget: &Budget,
    seed: u64,
) -> LiftStatus<G::Element> {
    let ker = fine.kernel_order(base_level);
    let size = lifted_h.len() as u64 * ker;
    let member = |coord: usize, idx: u64| {
        let h = &lifted_h[(idx / ker) as usize];
        let k = fine.kernel_element_at(base_level, idx % ker);
        fine.mul(&fine.mul(&reps[coord], h), &k)
    };
    search_coset_product(fine, size, member, w, r, budget, seed)
}

/// Looks for a tuple in `S_1 × … × S_r` (`member(i, idx)` enumerating `S_i`,
/// each of size `size`) on which `w ≠ 1`.
fn search_coset_product<G, F>(
    fine: &G,
    size: u64,
    member: F,
    w: &Word,
    r: usize,
    budget: &Budget,
    seed: u64,
) -> LiftStatus<G::Element>
where
    G: TowerLevel,
    F: Fn(usize, u64) -> G::Element + Sync + Send,
{
    let level = fine.level();
    if budget.tuples(size, r).is_ok() {
        let rest = size.pow(r as u32 - 1);
        let bad = exec::find_first(budget.mode, size, |first| {
            let mut images: Vec<G::Element> = (0..r).map(|i| member(i, if i == 0 { first } else { 0 })).collect();
            for idx in 0..rest {
                for (offset, d) in digits(idx, size, r - 1).into_iter().enumerate() {
                    images[offset + 1] = member(offset + 1, d);
                }
                if !w.is_satisfied_by(&images, fine) {
                    return Some(images);
                }
            }
            None
        });
        let outcome = match bad {
            Some(counterexample) => LiftOutcome::Refuted { counterexample },
            None => LiftOutcome::Verified,
        };
        return LiftStatus { level, method: LiftMethod::Exhaustive, outcome };
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..REFUTATION_SAMPLES {
        let images: Vec<G::Element> = (0..r).map(|i| member(i, rng.gen_range(0..size))).collect();
        if !w.is_satisfied_by(&images, fine) {
            return LiftStatus { level, method: LiftMethod::Sampled, outcome: LiftOutcome::Refuted { counterexample: images } };
        }
    }
    LiftStatus { level, method: LiftMethod::Sampled, outcome: LiftOutcome::Undecided }
}
