use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize, Serializer};

use super::{check_prime, CyclotomicElement, PadicError, PadicMatrix, Valuation, DEFAULT_PRECISION};
use crate::exec::{self, ExecMode};
use crate::groups::{element_order, SemidirectGroup};

/// Largest coset `U_k·t` that `coset_order_check` enumerates element by
/// element before switching to the norm operator.
pub const DEFAULT_COSET_BUDGET: u64 = 1 << 20;

fn bigint_json<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    match v.to_i64() {
        Some(i) => s.serialize_i64(i),
        None => s.collect_str(v),
    }
}

pub(crate) fn ser_opt_bigint<S: Serializer>(v: &Option<BigInt>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(v) => bigint_json(v, s),
        None => s.serialize_none(),
    }
}

fn ser_opt_vec_bigint<S: Serializer>(v: &Option<Vec<BigInt>>, s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    match v {
        None => s.serialize_none(),
        Some(v) => {
            struct Entry<'a>(&'a BigInt);
            impl Serialize for Entry<'_> {
                fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                    bigint_json(self.0, s)
                }
            }
            let mut seq = s.serialize_seq(Some(v.len()))?;
            for x in v {
                seq.serialize_element(&Entry(x))?;
            }
            seq.end()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FixedPointVerdict {
    Yes,
    No,
    Undecided,
}

/// Whether `T` fixes no nonzero vector of `Q_p^n`, i.e. `det(T − I) ≠ 0`.
pub fn fixed_point_free(t: &PadicMatrix) -> (FixedPointVerdict, Valuation) {
    let id = PadicMatrix::identity(t.prime(), t.precision(), t.dim()).expect("validated at construction");
    let v = t.sub(&id).det().valuation;
    let verdict = match v {
        Valuation::Finite(_) => FixedPointVerdict::Yes,
        Valuation::Infinite => FixedPointVerdict::No,
        Valuation::AtLeast(_) => FixedPointVerdict::Undecided,
    };
    (verdict, v)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LatticeKind {
    /// `U = Z_p^n` with `t` acting through an integer matrix.
    #[serde(rename = "lattice")]
    Lattice,
    /// `U` the Heisenberg group over `Z_p[ζ]`, `t` acting diagonally by
    /// powers of `ζ` on the coordinates `(x, y, z)`.
    #[serde(rename = "heisenberg-cyclotomic")]
    HeisenbergCyclotomic,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ActionSpec {
    Matrix(Vec<Vec<i64>>),
    Zeta { zeta_powers: [i64; 3] },
}

/// A torsion element `t` of declared order acting on a uniform lattice `U`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Candidate {
    pub p: u64,
    #[serde(default)]
    pub precision: Option<u32>,
    #[serde(rename = "U")]
    pub lattice: LatticeKind,
    #[serde(default)]
    pub n: Option<usize>,
    #[serde(rename = "T")]
    pub action: ActionSpec,
    pub t_order: u64,
    /// `false` treats matrix entries as residues mod `p^N` only.
    #[serde(default)]
    pub exact: Option<bool>,
}

impl Candidate {
    pub fn from_json(text: &str) -> Result<Self, PadicError> {
        let c: Candidate = serde_json::from_str(text).map_err(|e| PadicError::Candidate(e.to_string()))?;
        c.validate()?;
        Ok(c)
    }

    pub fn precision(&self) -> u32 {
        self.precision.unwrap_or(DEFAULT_PRECISION)
    }

    pub fn validate(&self) -> Result<(), PadicError> {
        check_prime(self.p, self.precision())?;
        if self.t_order == 0 {
            return Err(PadicError::Candidate("t_order must be positive".into()));
        }
        match (&self.lattice, &self.action) {
            (LatticeKind::Lattice, ActionSpec::Matrix(rows)) => {
                if let Some(n) = self.n {
                    if n != rows.len() {
                        return Err(PadicError::DimensionMismatch(n, rows.len()));
                    }
                }
                if let Some((row, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != rows.len()) {
                    return Err(PadicError::NotSquare { rows: rows.len(), row, len: r.len() });
                }
            }
            (LatticeKind::HeisenbergCyclotomic, ActionSpec::Zeta { zeta_powers: [a, b, c] }) => {
                if self.n.is_some_and(|n| n != 3) {
                    return Err(PadicError::Candidate("Heisenberg lattice has n = 3".into()));
                }
                if self.p == 2 {
                    return Err(PadicError::Candidate("Heisenberg-cyclotomic needs an odd prime".into()));
                }
                // conjugation must respect [x, y] = z
                if (a + b - c).rem_euclid(self.p as i64) != 0 {
                    return Err(PadicError::Candidate(format!(
                        "zeta powers ({a}, {b}, {c}) are not an automorphism: need c = a + b mod {}",
                        self.p
                    )));
                }
                if self.exact == Some(false) {
                    return Err(PadicError::Candidate("zeta actions are always exact".into()));
                }
            }
            _ => return Err(PadicError::Candidate("U and T do not match".into())),
        }
        Ok(())
    }

    /// `dc_t` as a matrix over `Z_p`; the Heisenberg case uses the basis
    /// `ζ^i·x, ζ^i·y, ζ^i·z` for `0 ≤ i < p − 1`.
    pub fn linearized_action(&self) -> Result<PadicMatrix, PadicError> {
        self.validate()?;
        let (p, n) = (self.p, self.precision());
        match &self.action {
            ActionSpec::Matrix(rows) => {
                let m = PadicMatrix::from_integers(p, n, rows)?;
                Ok(if self.exact == Some(false) { m.truncated() } else { m })
            }
            ActionSpec::Zeta { zeta_powers } => {
                let blocks = zeta_powers
                    .iter()
                    .map(|&k| Ok(CyclotomicElement::zeta_power(p, n, k)?.multiplication_matrix()))
                    .collect::<Result<Vec<_>, PadicError>>()?;
                PadicMatrix::block_diagonal(p, n, &blocks)
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Positive,
    Negative,
    Undecided,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TorsionVerdict {
    pub verdict: Verdict,
    pub det_valuation: Valuation,
    /// Primitive integer vector fixed by `dc_t`, for negative verdicts.
    #[serde(serialize_with = "ser_opt_vec_bigint")]
    pub fixed_vector: Option<Vec<BigInt>>,
    /// `I + A + … + A^{m−1} = 0` for the linearized action `A`.
    pub norm_operator_zero: bool,
    pub precision: u32,
}

/// Positive iff `dc_t − id` is invertible over `Q_p`.
pub fn torsion_coset_criterion(c: &Candidate) -> Result<TorsionVerdict, PadicError> {
    let a = c.linearized_action()?;
    if !a.pow(c.t_order).is_identity() {
        return Err(PadicError::NotTorsion { order: c.t_order, precision: a.precision() });
    }
    let (fpf, det_valuation) = fixed_point_free(&a);
    let verdict = match fpf {
        FixedPointVerdict::Yes => Verdict::Positive,
        FixedPointVerdict::No => Verdict::Negative,
        FixedPointVerdict::Undecided => Verdict::Undecided,
    };
    let fixed_vector = if verdict == Verdict::Negative {
        let id = PadicMatrix::identity(a.prime(), a.precision(), a.dim())?;
        a.sub(&id).to_int_matrix().kernel().into_iter().next()
    } else {
        None
    };
    Ok(TorsionVerdict {
        verdict,
        det_valuation,
        fixed_vector,
        norm_operator_zero: a.norm_operator(c.t_order).is_zero(),
        precision: a.precision(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CosetOrderMethod {
    Exhaustive,
    /// `(u, t)^m = (N u, t^m)` with `N` the norm operator.
    NormOperator,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CosetCounterexample {
    /// Lattice part of the element `u·t`.
    pub u: Vec<u64>,
    pub order: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CosetOrderReport {
    pub level: u32,
    pub m: u64,
    pub coset_size: u64,
    pub holds: bool,
    pub method: CosetOrderMethod,
    pub counterexample: Option<CosetCounterexample>,
}

/// Whether every element of `U_k·t` has order exactly `m` in the level-`k`
/// quotient `(Z/p^k)^n ⋊ C_{t_order}`.
pub fn coset_order_check(
    c: &Candidate,
    m: u64,
    level: u32,
    budget: u64,
    mode: ExecMode,
) -> Result<CosetOrderReport, PadicError> {
    c.validate()?;
    let rows = match (&c.lattice, &c.action, c.exact) {
        (LatticeKind::Lattice, ActionSpec::Matrix(rows), None | Some(true)) => rows,
        _ => return Err(PadicError::NotConstructible),
    };
    let g = SemidirectGroup::new(rows, c.p, level, c.t_order)?;
    let n = g.dim();
    let q = g.modulus();
    let coset_size = g.lattice_order();
    let decode = |mut idx: u64| {
        let mut u = vec![0u64; n];
        for slot in u.iter_mut().rev() {
            *slot = idx % q;
            idx /= q;
        }
        u
    };
    if coset_size <= budget {
        let bad = exec::find_first(mode, coset_size, |idx| {
            let u = decode(idx);
            let x = g.element(&u.iter().map(|&v| v as i64).collect::<Vec<_>>(), 1).expect("in range");
            let order = element_order(&g, &x);
            (order != m).then_some(CosetCounterexample { u, order })
        });
        return Ok(CosetOrderReport {
            level,
            m,
            coset_size,
            holds: bad.is_none(),
            method: CosetOrderMethod::Exhaustive,
            counterexample: bad,
        });
    }
    // (u, t)^j has t-part t^j, so orders are multiples of t_order and equal
    // t_order · (additive order of N u).
    let norm = g.power_operator(1, g.t_order());
    let counterexample = if m != g.t_order() {
        Some(CosetCounterexample { u: vec![0; n], order: g.t_order() })
    } else {
        (0..n).find(|&col| (0..n).any(|r| norm[r * n + col] != 0)).map(|col| {
            let mut u = vec![0u64; n];
            u[col] = 1;
            let image = g.matvec(&norm, &u);
            CosetCounterexample { order: g.t_order() * g.additive_order(&image), u }
        })
    };
    Ok(CosetOrderReport {
        level,
        m,
        coset_size,
        holds: counterexample.is_none(),
        method: CosetOrderMethod::NormOperator,
        counterexample,
    })
}
