//! Truncated power series over `Z/p^N` in several variables.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

mod weierstrass;
mod zeros;

pub use weierstrass::{weierstrass_prepare, Preparation};
pub use zeros::{zero_count, zero_counts, ZeroCount, DEFAULT_ZERO_BUDGET};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeriesError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("precision and variable count must be positive")]
    Degenerate,
    #[error("series parameters differ: (p, N, vars, degree) {0:?} vs {1:?}")]
    Mismatch((u64, u32, usize, u32), (u64, u32, usize, u32)),
    #[error("exponent has {got} entries, expected {expected}")]
    ExponentLength { expected: usize, got: usize },
    #[error("term of total degree {got} exceeds truncation degree {degree}")]
    DegreeExceeded { got: u32, degree: u32 },
    #[error("constant term is not a unit")]
    NotUnit,
    #[error("series is zero at this precision")]
    Zero,
    #[error("not Weierstrass-ready at this truncation: no unit coefficient up to degree {0}")]
    NotReady(u32),
    #[error("Weierstrass preparation needs a one-variable series, got {0} variables")]
    NotUnivariate(usize),
    #[error("level {k} exceeds coefficient precision {precision}")]
    LevelTooHigh { k: u32, precision: u32 },
    #[error("enumeration needs {needed} points, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u64 },
    #[error("substitution is degenerate: the restriction to the X_{0} axis vanishes")]
    DegenerateSubstitution(usize),
    #[error("invalid series literal: {0}")]
    Literal(String),
}

pub type Exponent = Vec<u32>;

/// `Σ c_α X^α` with `|α| ≤ degree` and `c_α ∈ Z/p^N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    p: u64,
    precision: u32,
    vars: usize,
    degree: u32,
    modulus: BigUint,
    terms: BTreeMap<Exponent, BigUint>,
}

fn total(e: &[u32]) -> u32 {
    e.iter().sum()
}

impl TruncatedSeries {
    pub fn zero(p: u64, precision: u32, vars: usize, degree: u32) -> Result<Self, SeriesError> {
        if !crate::is_prime(p) {
            return Err(SeriesError::NotPrime(p));
        }
        if precision == 0 || vars == 0 {
            return Err(SeriesError::Degenerate);
        }
        let modulus = BigUint::from(p).pow(precision);
        Ok(TruncatedSeries { p, precision, vars, degree, modulus, terms: BTreeMap::new() })
    }

    /// Terms past the truncation degree are rejected.
    pub fn from_terms<I, C>(p: u64, precision: u32, vars: usize, degree: u32, terms: I) -> Result<Self, SeriesError>
    where
        I: IntoIterator<Item = (Exponent, C)>,
        C: Into<BigInt>,
    {
        let mut s = Self::zero(p, precision, vars, degree)?;
        for (e, c) in terms {
            if e.len() != vars {
                return Err(SeriesError::ExponentLength { expected: vars, got: e.len() });
            }
            if total(&e) > degree {
                return Err(SeriesError::DegreeExceeded { got: total(&e), degree });
            }
            s.add_term(e, &c.into());
        }
        Ok(s)
    }

    pub fn constant(p: u64, precision: u32, vars: usize, degree: u32, c: impl Into<BigInt>) -> Result<Self, SeriesError> {
        Self::from_terms(p, precision, vars, degree, [(vec![0; vars], c)])
    }

    /// `X_i` (0-based).
    pub fn variable(p: u64, precision: u32, vars: usize, degree: u32, i: usize) -> Result<Self, SeriesError> {
        let mut e = vec![0; vars];
        e[i] = 1;
        if degree == 0 {
            return Self::zero(p, precision, vars, degree);
        }
        Self::from_terms(p, precision, vars, degree, [(e, 1)])
    }

    fn empty_like(&self) -> Self {
        TruncatedSeries { terms: BTreeMap::new(), ..self.clone() }
    }

    fn reduce(&self, c: &BigInt) -> BigUint {
        c.mod_floor(&BigInt::from(self.modulus.clone())).to_biguint().expect("non-negative")
    }

    fn add_term(&mut self, e: Exponent, c: &BigInt) {
        let c = self.reduce(c);
        self.add_residue(e, c);
    }

    fn add_residue(&mut self, e: Exponent, c: BigUint) {
        if c.is_zero() || total(&e) > self.degree {
            return;
        }
        let slot = self.terms.entry(e).or_default();
        *slot = (&*slot + c) % &self.modulus;
        if slot.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn modulus(&self) -> &BigUint {
        &self.modulus
    }

    pub fn params(&self) -> (u64, u32, usize, u32) {
        (self.p, self.precision, self.vars, self.degree)
    }

    /// Nonzero terms in exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &BigUint)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &[u32]) -> BigUint {
        self.terms.get(e).cloned().unwrap_or_default()
    }

    pub fn constant_term(&self) -> BigUint {
        self.coeff(&vec![0; self.vars])
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn check(&self, other: &Self) -> Result<(), SeriesError> {
        if self.params() != other.params() {
            return Err(SeriesError::Mismatch(self.params(), other.params()));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_residue(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        let mut out = self.empty_like();
        for (e, c) in &self.terms {
            out.add_residue(e.clone(), &self.modulus - c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Result<Self, SeriesError> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check(other)?;
        let mut acc: BTreeMap<Exponent, BigUint> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            let da = total(ea);
            for (eb, cb) in &other.terms {
                if da + total(eb) > self.degree {
                    continue;
                }
                let e: Exponent = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                *acc.entry(e).or_default() += ca * cb;
            }
        }
        let mut out = self.empty_like();
        out.terms = acc.into_iter().map(|(e, c)| (e, c % &self.modulus)).filter(|(_, c)| !c.is_zero()).collect();
        Ok(out)
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        let k = self.reduce(k);
        let mut out = self.empty_like();
        out.terms =
            self.terms.iter().map(|(e, c)| (e.clone(), c * &k % &self.modulus)).filter(|(_, c)| !c.is_zero()).collect();
        out
    }

    /// Inverse of a series whose constant term is a unit mod `p`.
    pub fn unit_invert(&self) -> Result<Self, SeriesError> {
        let c0 = BigInt::from(self.constant_term());
        let m = BigInt::from(self.modulus.clone());
        let g = c0.extended_gcd(&m);
        if !g.gcd.is_one() {
            return Err(SeriesError::NotUnit);
        }
        let c0_inv = g.x;
        // self = c0·(1 − h) with h of positive order, so self^{-1} = c0^{-1}·Σ h^i
        let one = Self::constant(self.p, self.precision, self.vars, self.degree, 1)?;
        let h = one.sub(&self.scale(&c0_inv))?;
        let mut acc = one.clone();
        let mut power = one;
        for _ in 0..self.degree {
            power = power.mul(&h)?;
            if power.is_zero() {
                break;
            }
            acc = acc.add(&power)?;
        }
        Ok(acc.scale(&c0_inv))
    }

    /// Same series viewed at a higher truncation degree (missing
    /// coefficients are zero).
    pub fn with_degree(&self, degree: u32) -> Self {
        let terms = self.terms.iter().filter(|(e, _)| total(e) <= degree).map(|(e, c)| (e.clone(), c.clone())).collect();
        TruncatedSeries { degree, terms, ..self.clone() }
    }

    /// Coefficients reduced mod `p^k` for `k ≤ N`.
    pub fn reduce_precision(&self, k: u32) -> Result<Self, SeriesError> {
        if k > self.precision || k == 0 {
            return Err(SeriesError::LevelTooHigh { k, precision: self.precision });
        }
        let modulus = BigUint::from(self.p).pow(k);
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| (e.clone(), c % &modulus))
            .filter(|(_, c)| !c.is_zero())
            .collect();
        Ok(TruncatedSeries { precision: k, modulus, terms, ..self.clone() })
    }

    /// `f(X_0 + λ_0 X_m, …, X_m, …)` with `m` the last variable and `λ` one
    /// value per other variable.
    ///
    /// Fails when the result restricted to the `X_m` axis vanishes, since
    /// the choice of `λ` is then useless for isolating `X_m`.
    pub fn substitute_linear(&self, lambdas: &[i64]) -> Result<Self, SeriesError> {
        let last = self.vars - 1;
        if lambdas.len() != last {
            return Err(SeriesError::ExponentLength { expected: last, got: lambdas.len() });
        }
        let xm = Self::variable(self.p, self.precision, self.vars, self.degree, last)?;
        let mut images = Vec::with_capacity(self.vars);
        for (i, &l) in lambdas.iter().enumerate() {
            let xi = Self::variable(self.p, self.precision, self.vars, self.degree, i)?;
            images.push(xi.add(&xm.scale(&BigInt::from(l)))?);
        }
        images.push(xm);
        let out = self.compose(&images)?;
        let axis = out.terms.keys().any(|e| e[..last].iter().all(|&a| a == 0));
        if !axis {
            return Err(SeriesError::DegenerateSubstitution(last + 1));
        }
        Ok(out)
    }

    /// `f(p^{k_0} X_0, …, p^{k_{m-1}} X_{m-1})`.
    pub fn scale_variables(&self, ks: &[u32]) -> Result<Self, SeriesError> {
        if ks.len() != self.vars {
            return Err(SeriesError::ExponentLength { expected: self.vars, got: ks.len() });
        }
        let mut out = self.empty_like();
        for (e, c) in &self.terms {
            let shift: u32 = e.iter().zip(ks).map(|(a, k)| a * k).sum();
            out.add_residue(e.clone(), c * BigUint::from(self.p).pow(shift) % &self.modulus);
        }
        Ok(out)
    }

    /// `f(g_0, …, g_{m-1})` for series `g_i` without constant term, or
    /// polynomial `f`.
    pub fn compose(&self, images: &[Self]) -> Result<Self, SeriesError> {
        if images.len() != self.vars {
            return Err(SeriesError::ExponentLength { expected: self.vars, got: images.len() });
        }
        let target = &images[0];
        for g in images {
            target.check(g)?;
        }
        let one = Self::constant(target.p, target.precision, target.vars, target.degree, 1)?;
        let mut powers = vec![vec![one]; images.len()];
        let mut out = target.empty_like();
        for (e, c) in &self.terms {
            let mut term = Self::constant(target.p, target.precision, target.vars, target.degree, BigInt::from(c.clone()))?;
            for (i, &a) in e.iter().enumerate() {
                while powers[i].len() <= a as usize {
                    let next = powers[i].last().expect("seeded with 1").mul(&images[i])?;
                    powers[i].push(next);
                }
                term = term.mul(&powers[i][a as usize])?;
            }
            out = out.add(&term)?;
        }
        Ok(out)
    }

    /// Value at a point of `(Z/p^k)^m`, reduced mod `q = p^k`.
    pub fn evaluate_mod(&self, x: &[u64], q: u64) -> u64 {
        let q128 = q as u128;
        let mut acc = 0u128;
        for (e, c) in &self.terms {
            let mut t = (c % q).to_u128().expect("below q");
            for (xi, &a) in x.iter().zip(e) {
                for _ in 0..a {
                    t = t * *xi as u128 % q128;
                }
            }
            acc = (acc + t) % q128;
        }
        acc as u64
    }

    pub fn to_literal(&self) -> SeriesLiteral {
        SeriesLiteral {
            p: self.p,
            precision: self.precision,
            vars: self.vars,
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| SeriesTerm { exp: e.clone(), coeff: Coefficient::from_big(&BigInt::from(c.clone())) })
                .collect(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self, SeriesError> {
        let lit: SeriesLiteral = serde_json::from_str(text).map_err(|e| SeriesError::Literal(e.to_string()))?;
        lit.to_series()
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            f.write_str("0")?;
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{c}")?;
            for (v, &a) in e.iter().enumerate() {
                match a {
                    0 => {}
                    1 => write!(f, "*X{}", v + 1)?,
                    _ => write!(f, "*X{}^{a}", v + 1)?,
                }
            }
        }
        write!(f, " + O({}^{}, deg > {})", self.p, self.precision, self.degree)
    }
}

/// Integer coefficient in JSON: a number, or a decimal string when large.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Coefficient {
    Int(i64),
    Text(String),
}

impl Coefficient {
    fn from_big(v: &BigInt) -> Self {
        match v.to_i64() {
            Some(i) => Coefficient::Int(i),
            None => Coefficient::Text(v.to_string()),
        }
    }

    fn to_big(&self) -> Result<BigInt, SeriesError> {
        match self {
            Coefficient::Int(i) => Ok(BigInt::from(*i)),
            Coefficient::Text(s) => s.parse().map_err(|_| SeriesError::Literal(format!("bad coefficient '{s}'"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeriesTerm {
    pub exp: Vec<u32>,
    pub coeff: Coefficient,
}

/// JSON form `{"p", "N", "vars", "degree", "terms": [{"exp", "coeff"}]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeriesLiteral {
    pub p: u64,
    #[serde(rename = "N")]
    pub precision: u32,
    pub vars: usize,
    pub degree: u32,
    pub terms: Vec<SeriesTerm>,
}

impl SeriesLiteral {
    pub fn to_series(&self) -> Result<TruncatedSeries, SeriesError> {
        let terms = self.terms.iter().map(|t| Ok((t.exp.clone(), t.coeff.to_big()?))).collect::<Result<Vec<_>, _>>()?;
        TruncatedSeries::from_terms(self.p, self.precision, self.vars, self.degree, terms)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn uni(p: u64, n: u32, d: u32, coeffs: &[i64]) -> TruncatedSeries {
        TruncatedSeries::from_terms(p, n, 1, d, coeffs.iter().enumerate().map(|(i, &c)| (vec![i as u32], c))).unwrap()
    }

    #[test]
    fn arithmetic_examples() {
        let x = uni(3, 5, 4, &[0, 1]);
        assert_eq!(x.mul(&x).unwrap(), uni(3, 5, 4, &[0, 0, 1]));
        let f = uni(3, 5, 4, &[2, 0, 7, 1]);
        assert_eq!(uni(3, 5, 4, &[1]).mul(&f).unwrap(), f);
        assert_eq!(uni(3, 5, 2, &[1, 1]).mul(&uni(3, 5, 2, &[1, -1])).unwrap(), uni(3, 5, 2, &[1, 0, -1]));
        assert!(matches!(x.add(&uni(3, 4, 4, &[1])), Err(SeriesError::Mismatch(..))));
    }

    #[test]
    fn truncation_drops_high_degree() {
        let x = uni(5, 3, 3, &[0, 1]);
        assert!(x.mul(&x).unwrap().mul(&x).unwrap().mul(&x).unwrap().is_zero());
        let err = TruncatedSeries::from_terms(5, 3, 1, 3, [(vec![4], 1)]).unwrap_err();
        assert_eq!(err, SeriesError::DegreeExceeded { got: 4, degree: 3 });
    }

    #[test]
    fn unit_inverse_examples() {
        assert_eq!(uni(3, 6, 2, &[1]).unit_invert().unwrap(), uni(3, 6, 2, &[1]));
        assert_eq!(uni(3, 6, 2, &[1, 3]).unit_invert().unwrap(), uni(3, 6, 2, &[1, -3, 9]));
        assert_eq!(uni(7, 4, 5, &[1, 1]).unit_invert().unwrap(), uni(7, 4, 5, &[1, -1, 1, -1, 1, -1]));
        assert_eq!(uni(3, 6, 2, &[3, 1]).unit_invert().unwrap_err(), SeriesError::NotUnit);
    }

    #[test]
    fn multivariate_inverse() {
        let u = TruncatedSeries::from_terms(5, 8, 2, 6, [(vec![0, 0], 2), (vec![1, 0], 1), (vec![1, 1], 5)]).unwrap();
        let v = u.unit_invert().unwrap();
        assert_eq!(u.mul(&v).unwrap(), TruncatedSeries::constant(5, 8, 2, 6, 1).unwrap());
    }

    #[test]
    fn linear_substitution() {
        // f = X*Y vanishes on the Y axis; X -> X + 2Y gives X*Y + 2Y^2
        let f = TruncatedSeries::from_terms(3, 4, 2, 4, [(vec![1, 1], 1)]).unwrap();
        let g = f.substitute_linear(&[2]).unwrap();
        let want = TruncatedSeries::from_terms(3, 4, 2, 4, [(vec![1, 1], 1), (vec![0, 2], 2)]).unwrap();
        assert_eq!(g, want);
        assert_eq!(f.substitute_linear(&[0]).unwrap_err(), SeriesError::DegenerateSubstitution(2));
        // λ ≡ 0 mod p^N is also degenerate
        assert_eq!(f.substitute_linear(&[81]).unwrap_err(), SeriesError::DegenerateSubstitution(2));
    }

    #[test]
    fn variable_scaling() {
        let f = TruncatedSeries::from_terms(3, 4, 2, 4, [(vec![1, 1], 1), (vec![2, 0], 1)]).unwrap();
        let g = f.scale_variables(&[1, 2]).unwrap();
        assert_eq!(g.coeff(&[1, 1]), BigUint::from(27u32));
        assert_eq!(g.coeff(&[2, 0]), BigUint::from(9u32));
        assert_eq!(f.scale_variables(&[2, 2]).unwrap().coeff(&[1, 1]), BigUint::zero());
    }

    #[test]
    fn literal_round_trip() {
        let text = r#"{"p": 3, "N": 4, "vars": 2, "degree": 3,
            "terms": [{"exp": [1, 1], "coeff": 1}, {"exp": [0, 0], "coeff": -1}]}"#;
        let f = TruncatedSeries::from_json(text).unwrap();
        assert_eq!(f.constant_term(), BigUint::from(80u32));
        let back = serde_json::to_string(&f.to_literal()).unwrap();
        assert_eq!(TruncatedSeries::from_json(&back).unwrap(), f);
        assert!(matches!(TruncatedSeries::from_json(r#"{"p": 4, "N": 1, "vars": 1, "degree": 1, "terms": []}"#), Err(SeriesError::NotPrime(4))));
    }
}
