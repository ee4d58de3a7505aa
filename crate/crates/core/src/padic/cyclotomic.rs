use num_bigint::BigInt;
use num_traits::Zero;

use super::{check_prime, PadicError, PadicInt, PadicMatrix};

/// Element of `Z_p[ζ] = Z_p[x]/(1 + x + … + x^{p-1})` in the basis
/// `1, ζ, …, ζ^{p-2}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclotomicElement {
    p: u64,
    precision: u32,
    coeffs: Vec<PadicInt>,
}

impl CyclotomicElement {
    /// `Σ coeffs[i]·ζ^i` for any number of integer coefficients.
    pub fn from_coeffs(p: u64, precision: u32, coeffs: &[i64]) -> Result<Self, PadicError> {
        check_prime(p, precision)?;
        let coeffs = coeffs.iter().map(|&c| PadicInt::exact_unchecked(p, precision, BigInt::from(c))).collect();
        Ok(Self::reduced(p, precision, coeffs))
    }

    pub fn from_integer(p: u64, precision: u32, v: i64) -> Result<Self, PadicError> {
        Self::from_coeffs(p, precision, &[v])
    }

    /// `ζ^k` for any integer `k`.
    pub fn zeta_power(p: u64, precision: u32, k: i64) -> Result<Self, PadicError> {
        check_prime(p, precision)?;
        let mut coeffs = vec![0i64; p as usize];
        coeffs[k.rem_euclid(p as i64) as usize] = 1;
        Self::from_coeffs(p, precision, &coeffs)
    }

    /// Folds `x^p = 1`, then `x^{p-1} = -(1 + … + x^{p-2})`.
    fn reduced(p: u64, precision: u32, raw: Vec<PadicInt>) -> Self {
        let pu = p as usize;
        let zero = PadicInt::exact_unchecked(p, precision, BigInt::zero());
        let mut folded = vec![zero; pu];
        for (i, c) in raw.into_iter().enumerate() {
            folded[i % pu] = folded[i % pu].add(&c);
        }
        let top = folded.pop().expect("p >= 2");
        let coeffs = folded.iter().map(|c| c.sub(&top)).collect();
        CyclotomicElement { p, precision: precision.min(top.precision()), coeffs }
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn coeffs(&self) -> &[PadicInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(PadicInt::is_zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.add(b)).collect();
        Self::reduced(self.p, self.precision.min(other.precision), coeffs)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.sub(b)).collect();
        Self::reduced(self.p, self.precision.min(other.precision), coeffs)
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.p, other.p, "mixing cyclotomic rings");
        let precision = self.precision.min(other.precision);
        let zero = PadicInt::exact_unchecked(self.p, precision, BigInt::zero());
        let mut raw = vec![zero; self.coeffs.len() + other.coeffs.len()];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                raw[i + j] = raw[i + j].add(&a.mul(b));
            }
        }
        Self::reduced(self.p, precision, raw)
    }

    /// Matrix of `y ↦ self·y` on `Z_p^{p-1}`; column `j` is `self·ζ^j`.
    pub fn multiplication_matrix(&self) -> PadicMatrix {
        let d = self.coeffs.len();
        let mut entries = vec![self.coeffs[0].clone(); d * d];
        for j in 0..d {
            let zj = Self::zeta_power(self.p, self.precision, j as i64).expect("validated at construction");
            let col = self.mul(&zj);
            for (r, c) in col.coeffs.into_iter().enumerate() {
                entries[r * d + j] = c;
            }
        }
        PadicMatrix::from_entries(d, entries).expect("square by construction")
    }

    /// Field norm to `Z_p`: the determinant of multiplication.
    pub fn norm(&self) -> PadicInt {
        let m = self.multiplication_matrix();
        let report = m.det();
        match report.exact {
            Some(v) => PadicInt::exact_unchecked(self.p, self.precision, v),
            None => PadicInt::from_residue(self.p, self.precision, m.to_int_matrix().det())
                .expect("validated at construction"),
        }
    }
}
