use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use super::int::{modulus, valuation_of};
use super::{check_prime, PadicError, PadicInt, Valuation};
use crate::linalg::IntMatrix;

/// Square matrix over `Z_p` at a common absolute precision.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PadicMatrix {
    p: u64,
    precision: u32,
    dim: usize,
    entries: Vec<PadicInt>,
}

impl PadicMatrix {
    fn check_rows<T>(rows: &[Vec<T>]) -> Result<(), PadicError> {
        for (row, r) in rows.iter().enumerate() {
            if r.len() != rows.len() {
                return Err(PadicError::NotSquare { rows: rows.len(), row, len: r.len() });
            }
        }
        Ok(())
    }

    /// Exact integer matrix.
    pub fn from_integers<T: Clone + Into<BigInt>>(p: u64, precision: u32, rows: &[Vec<T>]) -> Result<Self, PadicError> {
        check_prime(p, precision)?;
        Self::check_rows(rows)?;
        let entries =
            rows.iter().flatten().map(|v| PadicInt::exact_unchecked(p, precision, v.clone().into())).collect();
        Ok(PadicMatrix { p, precision, dim: rows.len(), entries })
    }

    /// Matrix whose entries are known only modulo `p^N`.
    pub fn from_residues<T: Clone + Into<BigInt>>(p: u64, precision: u32, rows: &[Vec<T>]) -> Result<Self, PadicError> {
        Ok(Self::from_integers(p, precision, rows)?.truncated())
    }

    /// Row-major entries; all must share `p`.
    pub fn from_entries(dim: usize, entries: Vec<PadicInt>) -> Result<Self, PadicError> {
        if entries.len() != dim * dim {
            return Err(PadicError::DimensionMismatch(entries.len(), dim * dim));
        }
        let Some(first) = entries.first() else {
            return Err(PadicError::Candidate("empty matrix needs a prime; use identity(p, N, 0)".into()));
        };
        let p = first.prime();
        if entries.iter().any(|e| e.prime() != p) {
            return Err(PadicError::Candidate("entries over different primes".into()));
        }
        let precision = entries.iter().map(PadicInt::precision).min().unwrap_or(0);
        Ok(PadicMatrix { p, precision, dim, entries })
    }

    pub fn identity(p: u64, precision: u32, dim: usize) -> Result<Self, PadicError> {
        let rows: Vec<Vec<i64>> = (0..dim).map(|r| (0..dim).map(|c| i64::from(r == c)).collect()).collect();
        Self::from_integers(p, precision, &rows)
    }

    /// Block-diagonal matrix; blocks must share `p`.
    pub fn block_diagonal(p: u64, precision: u32, blocks: &[PadicMatrix]) -> Result<Self, PadicError> {
        let dim = blocks.iter().map(|b| b.dim).sum();
        let mut out = Self::from_integers(p, precision, &vec![vec![0i64; dim]; dim])?;
        let mut offset = 0;
        for b in blocks {
            if b.p != p {
                return Err(PadicError::Candidate("blocks over different primes".into()));
            }
            for r in 0..b.dim {
                for c in 0..b.dim {
                    out.entries[(offset + r) * dim + offset + c] = b.entry(r, c).clone();
                }
            }
            offset += b.dim;
        }
        out.precision = out.entries.iter().map(PadicInt::precision).min().unwrap_or(precision);
        Ok(out)
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, r: usize, c: usize) -> &PadicInt {
        &self.entries[r * self.dim + c]
    }

    pub fn is_exact(&self) -> bool {
        self.entries.iter().all(PadicInt::is_exact)
    }

    pub fn truncated(&self) -> Self {
        PadicMatrix { entries: self.entries.iter().map(PadicInt::truncated).collect(), ..self.clone() }
    }

    /// Exact values, or residues for truncated entries.
    pub fn to_int_matrix(&self) -> IntMatrix {
        let rows: Vec<Vec<BigInt>> =
            (0..self.dim).map(|r| (0..self.dim).map(|c| self.entry(r, c).lift()).collect()).collect();
        IntMatrix::from_rows(&rows)
    }

    fn zip(&self, other: &Self, f: impl Fn(&PadicInt, &PadicInt) -> PadicInt) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let entries: Vec<PadicInt> = self.entries.iter().zip(&other.entries).map(|(a, b)| f(a, b)).collect();
        PadicMatrix { precision: self.precision.min(other.precision), entries, ..self.clone() }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip(other, PadicInt::add)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip(other, PadicInt::sub)
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let n = self.dim;
        let precision = self.precision.min(other.precision);
        let mut entries = Vec::with_capacity(n * n);
        for r in 0..n {
            for c in 0..n {
                let mut acc = PadicInt::exact_unchecked(self.p, precision, BigInt::zero());
                for k in 0..n {
                    acc = acc.add(&self.entry(r, k).mul(other.entry(k, c)));
                }
                entries.push(acc);
            }
        }
        PadicMatrix { p: self.p, precision, dim: n, entries }
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::identity(self.p, self.precision, self.dim).expect("validated at construction");
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// `I + A + … + A^{m-1}`.
    pub fn norm_operator(&self, m: u64) -> Self {
        let mut acc = Self::from_integers(self.p, self.precision, &vec![vec![0i64; self.dim]; self.dim])
            .expect("validated at construction");
        let mut power = Self::identity(self.p, self.precision, self.dim).expect("validated at construction");
        for _ in 0..m {
            acc = acc.add(&power);
            power = power.mul(self);
        }
        acc
    }

    /// Zero at this precision (exactly zero for exact entries).
    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(PadicInt::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        let id = Self::identity(self.p, self.precision, self.dim).expect("validated at construction");
        self.sub(&id).is_zero()
    }

    pub fn det(&self) -> DetReport {
        det_valuation(self)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DetReport {
    pub valuation: Valuation,
    /// Exact determinant, available when every entry is an exact lift.
    #[serde(serialize_with = "crate::padic::criterion::ser_opt_bigint")]
    pub exact: Option<BigInt>,
    pub precision: u32,
}

/// Determinant valuation of `m`.
///
/// Exact matrices get a Bareiss determinant over `Z`. Otherwise the
/// fraction-free determinant of the residue lifts is reduced mod `p^N`,
/// which fixes the valuation when it is below `N`.
pub fn det_valuation(m: &PadicMatrix) -> DetReport {
    let det = m.to_int_matrix().det();
    if m.is_exact() {
        let valuation = if det.is_zero() { Valuation::Infinite } else { Valuation::Finite(valuation_of(m.p, &det)) };
        return DetReport { valuation, exact: Some(det), precision: m.precision };
    }
    let reduced = PadicInt::from_residue(m.p, m.precision, det).expect("validated at construction");
    debug_assert!(reduced.residue() < &modulus(m.p, m.precision));
    DetReport { valuation: reduced.valuation(), exact: None, precision: m.precision }
}
