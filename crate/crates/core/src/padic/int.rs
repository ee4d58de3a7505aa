use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{check_prime, PadicError, Valuation};

/// Element of `Z_p` known modulo `p^N`, optionally together with an exact
/// integer lift.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PadicInt {
    p: u64,
    precision: u32,
    residue: BigUint,
    exact: Option<BigInt>,
}

pub(crate) fn modulus(p: u64, precision: u32) -> BigUint {
    BigUint::from(p).pow(precision)
}

fn reduce(v: &BigInt, m: &BigUint) -> BigUint {
    let m = BigInt::from(m.clone());
    v.mod_floor(&m).to_biguint().expect("mod_floor is non-negative")
}

/// `v_p(v)` for nonzero `v`.
pub(crate) fn valuation_of(p: u64, v: &BigInt) -> u32 {
    debug_assert!(!v.is_zero());
    let p = BigInt::from(p);
    let mut v = v.abs();
    let mut k = 0;
    loop {
        let (q, r) = v.div_rem(&p);
        if !r.is_zero() {
            return k;
        }
        v = q;
        k += 1;
    }
}

impl PadicInt {
    /// The integer `value` seen in `Z_p`, tracked exactly.
    pub fn from_integer(p: u64, precision: u32, value: impl Into<BigInt>) -> Result<Self, PadicError> {
        check_prime(p, precision)?;
        Ok(Self::exact_unchecked(p, precision, value.into()))
    }

    /// A value known only modulo `p^N`.
    pub fn from_residue(p: u64, precision: u32, value: impl Into<BigInt>) -> Result<Self, PadicError> {
        check_prime(p, precision)?;
        let residue = reduce(&value.into(), &modulus(p, precision));
        Ok(PadicInt { p, precision, residue, exact: None })
    }

    pub(crate) fn exact_unchecked(p: u64, precision: u32, value: BigInt) -> Self {
        let residue = reduce(&value, &modulus(p, precision));
        PadicInt { p, precision, residue, exact: Some(value) }
    }

    pub fn zero(p: u64, precision: u32) -> Result<Self, PadicError> {
        Self::from_integer(p, precision, 0)
    }

    pub fn one(p: u64, precision: u32) -> Result<Self, PadicError> {
        Self::from_integer(p, precision, 1)
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    /// Representative in `[0, p^N)`.
    pub fn residue(&self) -> &BigUint {
        &self.residue
    }

    pub fn is_exact(&self) -> bool {
        self.exact.is_some()
    }

    pub fn exact_value(&self) -> Option<&BigInt> {
        self.exact.as_ref()
    }

    /// The exact value when known, otherwise the residue.
    pub fn lift(&self) -> BigInt {
        self.exact.clone().unwrap_or_else(|| BigInt::from(self.residue.clone()))
    }

    /// Zero at this precision (or exactly zero, for exact values).
    pub fn is_zero(&self) -> bool {
        match &self.exact {
            Some(v) => v.is_zero(),
            None => self.residue.is_zero(),
        }
    }

    pub fn valuation(&self) -> Valuation {
        match &self.exact {
            Some(v) if v.is_zero() => Valuation::Infinite,
            Some(v) => Valuation::Finite(valuation_of(self.p, v)),
            None if self.residue.is_zero() => Valuation::AtLeast(self.precision),
            None => Valuation::Finite(valuation_of(self.p, &BigInt::from(self.residue.clone()))),
        }
    }

    fn combine(&self, other: &Self, exact: impl Fn(&BigInt, &BigInt) -> BigInt) -> Self {
        assert_eq!(self.p, other.p, "mixing p-adic integers over different primes");
        let precision = self.precision.min(other.precision);
        match (&self.exact, &other.exact) {
            (Some(a), Some(b)) => Self::exact_unchecked(self.p, precision, exact(a, b)),
            _ => {
                let v = exact(&self.lift(), &other.lift());
                let residue = reduce(&v, &modulus(self.p, precision));
                PadicInt { p: self.p, precision, residue, exact: None }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a - b)
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a * b)
    }

    pub fn neg(&self) -> Self {
        match &self.exact {
            Some(v) => Self::exact_unchecked(self.p, self.precision, -v),
            None => {
                let residue = reduce(&-BigInt::from(self.residue.clone()), &modulus(self.p, self.precision));
                PadicInt { residue, exact: None, ..self.clone() }
            }
        }
    }

    /// Multiplicative inverse, defined iff the valuation is 0. The result is
    /// exact only for `±1`.
    pub fn inverse(&self) -> Option<Self> {
        if self.valuation() != Valuation::Finite(0) {
            return None;
        }
        if let Some(v) = &self.exact {
            if v.abs().is_one() {
                return Some(self.clone());
            }
        }
        let m = BigInt::from(modulus(self.p, self.precision));
        let a = BigInt::from(self.residue.clone());
        let g = a.extended_gcd(&m);
        debug_assert!(g.gcd.is_one());
        let residue = reduce(&g.x, &modulus(self.p, self.precision));
        Some(PadicInt { p: self.p, precision: self.precision, residue, exact: None })
    }

    /// Same residue class, exactness dropped.
    pub fn truncated(&self) -> Self {
        PadicInt { exact: None, ..self.clone() }
    }
}

impl fmt::Display for PadicInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.exact {
            Some(v) => write!(f, "{v}"),
            None => {
                let sign = if self.residue.is_zero() { Sign::NoSign } else { Sign::Plus };
                write!(f, "{} + O({}^{})", BigInt::from_biguint(sign, self.residue.clone()), self.p, self.precision)
            }
        }
    }
}
