use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::Zero;

use super::{SeriesError, TruncatedSeries};

/// `f = q·u` with `q` distinguished of degree `degree` and `u` a unit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Preparation {
    pub q: TruncatedSeries,
    pub u: TruncatedSeries,
    pub degree: u32,
    /// `f` was already a unit, so `q = 1`.
    pub degenerate: bool,
}

/// Dense product truncated to `len` coefficients.
fn mul_trunc(a: &[BigUint], b: &[BigUint], len: usize, m: &BigUint) -> Vec<BigUint> {
    let mut out = vec![BigUint::zero(); len];
    for (i, x) in a.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
        for (j, y) in b.iter().enumerate().take(len.saturating_sub(i)) {
            out[i + j] += x * y;
        }
    }
    out.iter_mut().for_each(|c| *c %= m);
    out
}

fn inverse_mod(a: &BigUint, m: &BigUint) -> BigUint {
    let g = BigInt::from(a.clone()).extended_gcd(&BigInt::from(m.clone()));
    g.x.mod_floor(&BigInt::from(m.clone())).to_biguint().expect("non-negative")
}

/// Inverse of a dense series with unit constant term, to `len` coefficients.
fn invert_dense(h: &[BigUint], len: usize, m: &BigUint) -> Vec<BigUint> {
    let h0_inv = inverse_mod(&h[0], m);
    let mut out: Vec<BigUint> = Vec::with_capacity(len);
    out.push(h0_inv.clone());
    for k in 1..len {
        let s: BigUint = (1..=k.min(h.len() - 1)).map(|j| &h[j] * &out[k - j]).sum();
        let s = s % m;
        out.push((m - s) * &h0_inv % m);
    }
    out
}

/// Weierstrass preparation of a one-variable series `f`.
///
/// The degree `n` is the index of the first unit coefficient. The series
/// is treated as the polynomial given by its stored coefficients, and
/// `X^n = f·w + r` is solved by repeated division; then `q = X^n − r` and
/// `u = w^{-1}`. Each division round gains one factor of `p` and loses `n`
/// degrees of accuracy, so the work is done at degree `D + n(N + 1)`.
pub fn weierstrass_prepare(f: &TruncatedSeries) -> Result<Preparation, SeriesError> {
    if f.vars() != 1 {
        return Err(SeriesError::NotUnivariate(f.vars()));
    }
    if f.is_zero() {
        return Err(SeriesError::Zero);
    }
    let (p, big_n, d) = (f.prime(), f.precision(), f.degree());
    let m = f.modulus().clone();
    let pb = BigUint::from(p);
    let a: Vec<BigUint> = (0..=d).map(|i| f.coeff(&[i])).collect();
    let n = a.iter().position(|c| !(c % &pb).is_zero()).ok_or(SeriesError::NotReady(d))?;
    if n == 0 {
        let q = TruncatedSeries::constant(p, big_n, 1, d, 1)?;
        return Ok(Preparation { q, u: f.clone(), degree: 0, degenerate: true });
    }
    let work = d as usize + n * (big_n as usize + 1) + 1;
    let low: Vec<BigUint> = a[..n].to_vec();
    let h: Vec<BigUint> = a[n..].to_vec();
    let h_inv = invert_dense(&h, work, &m);

    let mut g = vec![BigUint::zero(); work];
    g[n] = BigUint::from(1u32);
    let mut w = vec![BigUint::zero(); work];
    let mut r = vec![BigUint::zero(); n];
    for _ in 0..=big_n {
        if g.iter().all(Zero::is_zero) {
            break;
        }
        for (ri, gi) in r.iter_mut().zip(&g[..n]) {
            *ri = (&*ri + gi) % &m;
        }
        let t = mul_trunc(&g[n..], &h_inv, work - n, &m);
        for (wi, ti) in w.iter_mut().zip(&t) {
            *wi = (&*wi + ti) % &m;
        }
        g = mul_trunc(&t, &low, work, &m).into_iter().map(|c| if c.is_zero() { c } else { &m - c }).collect();
    }

    let mut q_terms: Vec<(Vec<u32>, BigInt)> = r.iter().enumerate().map(|(i, c)| (vec![i as u32], -BigInt::from(c.clone()))).collect();
    q_terms.push((vec![n as u32], BigInt::from(1)));
    let q = TruncatedSeries::from_terms(p, big_n, 1, d, q_terms)?;
    let w = TruncatedSeries::from_terms(
        p,
        big_n,
        1,
        d,
        w.into_iter().take(d as usize + 1).enumerate().map(|(i, c)| (vec![i as u32], BigInt::from(c))),
    )?;
    let u = w.unit_invert()?;
    Ok(Preparation { q, u, degree: n as u32, degenerate: false })
}
