//! Probabilistic identities in profinite groups, approached through finite
//! quotient towers.
//!
//! The crate is organised by subsystem:
//!
//! * [`words`]: free-group words, their grammar, composition and evaluation.
//! * [`groups`]: concrete finite groups (matrices mod `m`, semidirect
//!   products `(Z/p^k)^n ⋊ <t>`) and towers of compatible quotients.
//! * [`measure`]: exact and Monte-Carlo word probabilities, conjugacy-class
//!   measures and coset-identity scanning with lifting through a tower.
//! * [`padic`]: truncated p-adic and cyclotomic arithmetic, fixed-point-free
//!   criteria for linear actions and the torsion-coset criterion.
//! * [`series`]: truncated multivariate power series, Weierstraß preparation
//!   and zero-density counting.
//! * [`lie`]: free Lie rings in a Hall basis, graded actions of linear
//!   substitutions and fixed-point search.
//!
//! Heavy enumerations take an [`ExecMode`]. With the `parallel` feature
//! (default) they fan out over rayon; without it, or with
//! [`ExecMode::Sequential`], they run on the calling thread. Results never
//! depend on the mode.

pub mod exec;
pub mod groups;
pub mod lie;
pub mod linalg;
pub mod measure;
pub mod padic;
pub mod series;
pub mod words;

pub use exec::ExecMode;
pub use groups::{FiniteGroup, MatrixGroup, QuotientTower, SemidirectGroup, TowerLevel};
pub use words::Word;



/// Trial-division primality test; only used to validate user-supplied primes.
pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p < 4 {
        return true;
    }
    if p.is_multiple_of(2) {
        return false;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// `base^exp` if it fits in a `u64`.
pub fn checked_pow(base: u64, exp: u32) -> Option<u64> {
    let mut acc: u64 = 1;
    for _ in 0..exp {
        acc = acc.checked_mul(base)?;
    }
    Some(acc)
}
