use std::collections::{BTreeMap, HashMap};
use std::fmt;

use super::LieError;

/// Upper bound on the total number of basis elements built.
pub const MAX_BASIS_SIZE: usize = 50_000;

pub type Word = Vec<u8>;

/// Sparse associative polynomial in the generators.
type Poly = HashMap<Word, i128>;

fn checked(v: Option<i128>) -> Result<i128, LieError> {
    v.ok_or(LieError::Overflow)
}

/// Lyndon words up to length `max_len` over `r` letters, lexicographic.
fn lyndon_words(r: u8, max_len: usize) -> Vec<Word> {
    let mut out = Vec::new();
    if r == 0 || max_len == 0 {
        return out;
    }
    // Duval's generation
    let mut w: Vec<u8> = vec![0];
    loop {
        out.push(w.clone());
        let m = w.len();
        while w.len() < max_len {
            let c = w[w.len() - m];
            w.push(c);
        }
        while w.last() == Some(&(r - 1)) {
            w.pop();
        }
        match w.last_mut() {
            None => break,
            Some(c) => *c += 1,
        }
    }
    out
}

/// Dimension of the degree-`n` component of the free Lie ring of rank `r`.
pub fn witt_dimension(r: u64, n: u32) -> u64 {
    let mut sum: i128 = 0;
    for d in 1..=n {
        if n.is_multiple_of(d) {
            sum += mobius(d) as i128 * (r as i128).pow(n / d);
        }
    }
    (sum / n as i128) as u64
}

fn mobius(mut n: u32) -> i32 {
    let mut result = 1;
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            n /= d;
            if n.is_multiple_of(d) {
                return 0;
            }
            result = -result;
        }
        d += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

/// `(degree, index)` of a basis element.
type BasisRef = (u32, usize);

#[derive(Clone, Debug)]
struct Degree {
    words: Vec<Word>,
    index: HashMap<Word, usize>,
    /// Standard factorization `w = u·v` as ((deg u, idx u), (deg v, idx v)).
    factors: Vec<Option<(BasisRef, BasisRef)>>,
    /// Associative expansion of the standard bracketing.
    expansions: Vec<Vec<(Word, i128)>>,
    /// Coefficients of the expansion at Lyndon words past the leading one.
    tails: Vec<Vec<(usize, i128)>>,
}

/// Lyndon basis of the free Lie ring on `x1..xr` in degrees `1..=D`, each
/// word bracketed by its standard factorization.
///
/// Elements are ordered by degree, then lexicographically. The expansion
/// of a basis element `b_w` is `w` plus lexicographically larger words, so
/// coordinates are read off by a triangular solve over Lyndon words.
#[derive(Clone, Debug)]
pub struct HallBasis {
    rank: usize,
    max_degree: u32,
    degrees: Vec<Degree>,
}

impl HallBasis {
    pub fn new(rank: usize, max_degree: u32) -> Result<Self, LieError> {
        if rank == 0 || max_degree == 0 {
            return Err(LieError::EmptyBasis);
        }
        if rank > u8::MAX as usize {
            return Err(LieError::BudgetExceeded { needed: u64::MAX, budget: MAX_BASIS_SIZE });
        }
        let needed: u64 = (1..=max_degree).map(|n| witt_dimension(rank as u64, n)).sum();
        if needed > MAX_BASIS_SIZE as u64 {
            return Err(LieError::BudgetExceeded { needed, budget: MAX_BASIS_SIZE });
        }
        let all = lyndon_words(rank as u8, max_degree as usize);
        let mut degrees: Vec<Degree> = Vec::with_capacity(max_degree as usize);
        for n in 1..=max_degree as usize {
            let words: Vec<Word> = all.iter().filter(|w| w.len() == n).cloned().collect();
            let index = words.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect();
            degrees.push(Degree { words, index, factors: vec![], expansions: vec![], tails: vec![] });
        }
        let mut basis = HallBasis { rank, max_degree, degrees };
        for n in 1..=max_degree {
            basis.fill_degree(n);
        }
        for n in 1..=max_degree {
            let dim = basis.dim(n) as u64;
            let witt = witt_dimension(rank as u64, n);
            assert_eq!(dim, witt, "Lyndon count disagrees with Witt formula at degree {n}");
        }
        Ok(basis)
    }

    fn lookup(&self, w: &[u8]) -> Option<(u32, usize)> {
        let n = w.len() as u32;
        if n == 0 || n > self.max_degree {
            return None;
        }
        self.degrees[n as usize - 1].index.get(w).map(|&i| (n, i))
    }

    fn fill_degree(&mut self, n: u32) {
        let words = self.degrees[n as usize - 1].words.clone();
        let mut factors = Vec::with_capacity(words.len());
        let mut expansions = Vec::with_capacity(words.len());
        for w in &words {
            if w.len() == 1 {
                factors.push(None);
                expansions.push(vec![(w.clone(), 1)]);
                continue;
            }
            // longest proper Lyndon suffix
            let split = (1..w.len()).find(|&i| self.lookup(&w[i..]).is_some()).expect("single letters are Lyndon");
            let u = self.lookup(&w[..split]).expect("standard factorization of a Lyndon word");
            let v = self.lookup(&w[split..]).expect("suffix is Lyndon");
            factors.push(Some((u, v)));
            let eu = &self.degrees[u.0 as usize - 1].expansions[u.1];
            let ev = &self.degrees[v.0 as usize - 1].expansions[v.1];
            let mut poly: BTreeMap<Word, i128> = BTreeMap::new();
            for (a, ca) in eu {
                for (b, cb) in ev {
                    *poly.entry([a.as_slice(), b].concat()).or_default() += ca * cb;
                    *poly.entry([b.as_slice(), a].concat()).or_default() -= ca * cb;
                }
            }
            expansions.push(poly.into_iter().filter(|(_, c)| *c != 0).collect());
        }
        let deg = &mut self.degrees[n as usize - 1];
        let tails = expansions
            .iter()
            .enumerate()
            .map(|(i, e): (usize, &Vec<(Word, i128)>)| {
                let mut t: Vec<(usize, i128)> =
                    e.iter().filter_map(|(w, c)| deg.index.get(w).map(|&j| (j, *c))).filter(|&(j, _)| j != i).collect();
                t.sort_unstable();
                debug_assert!(t.iter().all(|&(j, _)| j > i));
                t
            })
            .collect();
        deg.factors = factors;
        deg.expansions = expansions;
        deg.tails = tails;
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    pub fn dim(&self, n: u32) -> usize {
        self.degrees.get(n as usize - 1).map_or(0, |d| d.words.len())
    }

    pub fn dims(&self) -> Vec<usize> {
        (1..=self.max_degree).map(|n| self.dim(n)).collect()
    }

    /// Lyndon words of degree `n`, letters 0-based.
    pub fn words(&self, n: u32) -> &[Word] {
        &self.degrees[n as usize - 1].words
    }

    pub(crate) fn factors(&self, n: u32, i: usize) -> Option<(BasisRef, BasisRef)> {
        self.degrees[n as usize - 1].factors[i]
    }

    /// Bracketed form of basis element `i` of degree `n`, e.g. `[x1,[x1,x2]]`.
    pub fn label(&self, n: u32, i: usize) -> String {
        match self.factors(n, i) {
            None => format!("x{}", self.words(n)[i][0] + 1),
            Some((u, v)) => format!("[{},{}]", self.label(u.0, u.1), self.label(v.0, v.1)),
        }
    }

    pub fn generator(&self, i: usize) -> LieElement {
        let mut coords = vec![0; self.rank];
        coords[i] = 1;
        LieElement::homogeneous(1, coords)
    }

    pub fn basis_element(&self, n: u32, i: usize) -> LieElement {
        let mut coords = vec![0; self.dim(n)];
        coords[i] = 1;
        LieElement::homogeneous(n, coords)
    }

    fn expand(&self, n: u32, coords: &[i128]) -> Result<Poly, LieError> {
        let mut poly = Poly::new();
        let deg = &self.degrees[n as usize - 1];
        for (i, &c) in coords.iter().enumerate().filter(|(_, c)| **c != 0) {
            for (w, e) in &deg.expansions[i] {
                let slot = poly.entry(w.clone()).or_default();
                *slot = checked(slot.checked_add(checked(c.checked_mul(*e))?))?;
            }
        }
        Ok(poly)
    }

    /// Coordinates of the Lie polynomial whose values at the Lyndon words of
    /// degree `n` are `q`.
    fn solve(&self, n: u32, mut q: Vec<i128>) -> Result<Vec<i128>, LieError> {
        let tails = &self.degrees[n as usize - 1].tails;
        for i in 0..q.len() {
            let c = q[i];
            if c == 0 {
                continue;
            }
            for &(j, m) in &tails[i] {
                q[j] = checked(q[j].checked_sub(checked(c.checked_mul(m))?))?;
            }
        }
        Ok(q)
    }

    fn bracket_homogeneous(&self, d1: u32, a: &[i128], d2: u32, b: &[i128]) -> Result<Vec<i128>, LieError> {
        let n = d1 + d2;
        let pa = self.expand(d1, a)?;
        let pb = self.expand(d2, b)?;
        let get = |p: &Poly, w: &[u8]| p.get(w).copied().unwrap_or(0);
        let (s1, s2) = (d1 as usize, d2 as usize);
        let q = self
            .words(n)
            .iter()
            .map(|u| {
                let ab = checked(get(&pa, &u[..s1]).checked_mul(get(&pb, &u[s1..])))?;
                let ba = checked(get(&pb, &u[..s2]).checked_mul(get(&pa, &u[s2..])))?;
                checked(ab.checked_sub(ba))
            })
            .collect::<Result<Vec<_>, _>>()?;
        self.solve(n, q)
    }

    /// Lie bracket, extended bilinearly over homogeneous components.
    pub fn bracket(&self, a: &LieElement, b: &LieElement) -> Result<LieElement, LieError> {
        let mut out = LieElement::zero();
        for (&d1, ca) in &a.components {
            for (&d2, cb) in &b.components {
                if d1 + d2 > self.max_degree {
                    return Err(LieError::DegreeOverflow { degree: d1 + d2, max: self.max_degree });
                }
                let c = self.bracket_homogeneous(d1, ca, d2, cb)?;
                out = out.add(&LieElement::homogeneous(d1 + d2, c))?;
            }
        }
        Ok(out)
    }

    /// Formats an element as an integer combination of bracketed basis words.
    pub fn display(&self, x: &LieElement) -> String {
        let mut parts = Vec::new();
        for (&n, coords) in &x.components {
            for (i, &c) in coords.iter().enumerate().filter(|(_, c)| **c != 0) {
                let label = self.label(n, i);
                parts.push(match c {
                    1 => label,
                    -1 => format!("-{label}"),
                    _ => format!("{c}*{label}"),
                });
            }
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ").replace("+ -", "- ")
        }
    }
}

/// Integer combination of Hall basis elements, stored per degree.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LieElement {
    components: BTreeMap<u32, Vec<i128>>,
}

impl LieElement {
    pub fn zero() -> Self {
        LieElement::default()
    }

    pub fn homogeneous(degree: u32, coords: Vec<i128>) -> Self {
        let mut components = BTreeMap::new();
        if coords.iter().any(|&c| c != 0) {
            components.insert(degree, coords);
        }
        LieElement { components }
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    pub fn component(&self, degree: u32) -> Option<&[i128]> {
        self.components.get(&degree).map(Vec::as_slice)
    }

    pub fn degrees(&self) -> impl Iterator<Item = u32> + '_ {
        self.components.keys().copied()
    }

    pub fn add(&self, other: &Self) -> Result<Self, LieError> {
        let mut out = self.clone();
        for (&d, coords) in &other.components {
            let slot = out.components.entry(d).or_insert_with(|| vec![0; coords.len()]);
            for (s, &c) in slot.iter_mut().zip(coords) {
                *s = checked(s.checked_add(c))?;
            }
        }
        out.components.retain(|_, v| v.iter().any(|&c| c != 0));
        Ok(out)
    }

    pub fn scale(&self, k: i128) -> Result<Self, LieError> {
        let mut out = LieElement::zero();
        for (&d, coords) in &self.components {
            let scaled = coords.iter().map(|&c| checked(c.checked_mul(k))).collect::<Result<Vec<_>, _>>()?;
            out = out.add(&LieElement::homogeneous(d, scaled))?;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, LieError> {
        self.add(&other.scale(-1)?)
    }
}

impl fmt::Display for LieElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.components)
    }
}
