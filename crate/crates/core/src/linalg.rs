//! Exact integer matrices: Bareiss determinants, Smith normal form and
//! canonical integer kernels.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.to_rows()).finish()
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (r, c): (usize, usize)) -> &BigInt {
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut BigInt {
        &mut self.data[r * self.cols + c]
    }
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// Panics on ragged input.
    pub fn from_rows<T: Clone + Into<BigInt>>(rows: &[Vec<T>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        let data = rows.iter().flat_map(|row| row.iter().cloned().map(Into::into)).collect();
        IntMatrix { rows: r, cols: c, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        self.data.chunks(self.cols.max(1)).take(self.rows).map(<[BigInt]>::to_vec).collect()
    }

    pub fn column(&self, c: usize) -> Vec<BigInt> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let prod = a * &other[(k, j)];
                    out[(i, j)] += prod;
                }
            }
        }
        out
    }

    pub fn add(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        IntMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        IntMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, k: &BigInt) -> IntMatrix {
        IntMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a * k).collect() }
    }

    pub fn pow(&self, mut e: u64) -> IntMatrix {
        assert!(self.is_square());
        let mut base = self.clone();
        let mut acc = IntMatrix::identity(self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|r| (0..self.cols).map(|c| &self[(r, c)] * &v[c]).sum())
            .collect()
    }

    /// `I + A + … + A^{m-1}`.
    pub fn geometric_sum(&self, m: u64) -> IntMatrix {
        assert!(self.is_square());
        let mut acc = IntMatrix::zeros(self.rows, self.cols);
        let mut term = IntMatrix::identity(self.rows);
        for _ in 0..m {
            acc = acc.add(&term);
            term = term.mul(self);
        }
        acc
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> BigInt {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[(k, k)].is_zero() {
                let Some(swap) = (k + 1..n).find(|&r| !a[(r, k)].is_zero()) else {
                    return BigInt::zero();
                };
                a.swap_rows(k, swap);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)];
                    a[(i, j)] = num / &prev;
                }
            }
            prev = a[(k, k)].clone();
        }
        sign * &a[(n - 1, n - 1)]
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + a, r * self.cols + b);
        }
    }

    /// row[dst] += k * row[src]
    fn add_row_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        for c in 0..self.cols {
            let v = &self[(src, c)] * k;
            self[(dst, c)] += v;
        }
    }

    /// col[dst] += k * col[src]
    fn add_col_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        for r in 0..self.rows {
            let v = &self[(r, src)] * k;
            self[(r, dst)] += v;
        }
    }

    fn negate_col(&mut self, c: usize) {
        for r in 0..self.rows {
            let v = -&self[(r, c)];
            self[(r, c)] = v;
        }
    }

    /// Smith normal form `D = U·A·V`. Returns the diagonal of `D` (non-negative,
    /// each dividing the next, length `min(rows, cols)`) and the unimodular
    /// column transform `V`.
    pub fn smith(&self) -> Smith {
        let mut a = self.clone();
        let mut v = IntMatrix::identity(self.cols);
        let n = self.rows.min(self.cols);
        for t in 0..n {
            // Smallest nonzero entry of the trailing block becomes the pivot.
            let Some((pr, pc)) = a.min_abs_position(t, t) else { break };
            a.swap_rows(t, pr);
            a.swap_cols(t, pc);
            v.swap_cols(t, pc);
            loop {
                let mut dirty = false;
                for i in t + 1..a.rows {
                    if a[(i, t)].is_zero() {
                        continue;
                    }
                    let q = a[(i, t)].div_floor(&a[(t, t)]);
                    a.add_row_multiple(i, t, &-q);
                    if !a[(i, t)].is_zero() {
                        dirty = true;
                    }
                }
                for j in t + 1..a.cols {
                    if a[(t, j)].is_zero() {
                        continue;
                    }
                    let q = a[(t, j)].div_floor(&a[(t, t)]);
                    let neg = -q;
                    a.add_col_multiple(j, t, &neg);
                    v.add_col_multiple(j, t, &neg);
                    if !a[(t, j)].is_zero() {
                        dirty = true;
                    }
                }
                if dirty {
                    // A remainder is now smaller than the pivot; bring it in.
                    let cross = (t..a.rows).map(|i| (i, t)).chain((t + 1..a.cols).map(|j| (t, j)));
                    let (br, bc) = cross
                        .filter(|&(r, c)| !a[(r, c)].is_zero())
                        .min_by_key(|&(r, c)| a[(r, c)].abs())
                        .expect("pivot row or column is nonzero");
                    a.swap_rows(t, br);
                    a.swap_cols(t, bc);
                    v.swap_cols(t, bc);
                    continue;
                }
                // Divisibility: the pivot must divide the trailing block.
                let offender = (t + 1..a.rows)
                    .flat_map(|i| (t + 1..a.cols).map(move |j| (i, j)))
                    .find(|&(i, j)| !(&a[(i, j)] % &a[(t, t)]).is_zero());
                match offender {
                    Some((i, _)) => {
                        a.add_row_multiple(t, i, &BigInt::one());
                    }
                    None => break,
                }
            }
            if a[(t, t)].is_negative() {
                a.negate_col(t);
                v.negate_col(t);
            }
        }
        let diagonal = (0..n).map(|i| a[(i, i)].clone()).collect();
        Smith { diagonal, column_transform: v }
    }

    fn min_abs_position(&self, r0: usize, c0: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for r in r0..self.rows {
            for c in c0..self.cols {
                if self[(r, c)].is_zero() {
                    continue;
                }
                if best.is_none_or(|(br, bc)| self[(r, c)].abs() < self[(br, bc)].abs()) {
                    best = Some((r, c));
                }
            }
        }
        best
    }

    /// Basis of `{x ∈ Z^cols : A x = 0}` in row Hermite normal form: rows are
    /// echelon with positive leading entries and reduced entries above each
    /// pivot. The basis is canonical for the kernel lattice.
    pub fn kernel(&self) -> Vec<Vec<BigInt>> {
        let smith = self.smith();
        let rank = smith.diagonal.iter().filter(|d| !d.is_zero()).count();
        let v = &smith.column_transform;
        let basis: Vec<Vec<BigInt>> = (rank..self.cols).map(|c| v.column(c)).collect();
        hermite_rows(basis)
    }
}

#[derive(Clone, Debug)]
pub struct Smith {
    pub diagonal: Vec<BigInt>,
    pub column_transform: IntMatrix,
}

/// Row Hermite normal form of the lattice spanned by `rows`; zero rows are
/// dropped.
pub fn hermite_rows(rows: Vec<Vec<BigInt>>) -> Vec<Vec<BigInt>> {
    if rows.is_empty() {
        return rows;
    }
    let cols = rows[0].len();
    let mut m = IntMatrix::from_rows(&rows);
    let mut pivot_row = 0usize;
    let mut pivots = Vec::new();
    for c in 0..cols {
        if pivot_row == m.rows {
            break;
        }
        // Euclid down the column until a single nonzero entry remains.
        loop {
            let nonzero: Vec<usize> = (pivot_row..m.rows).filter(|&r| !m[(r, c)].is_zero()).collect();
            if nonzero.is_empty() {
                break;
            }
            let best = *nonzero.iter().min_by_key(|&&r| m[(r, c)].abs()).unwrap();
            m.swap_rows(pivot_row, best);
            let mut done = true;
            for r in pivot_row + 1..m.rows {
                if m[(r, c)].is_zero() {
                    continue;
                }
                let q = m[(r, c)].div_floor(&m[(pivot_row, c)]);
                m.add_row_multiple(r, pivot_row, &-q);
                if !m[(r, c)].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if m[(pivot_row, c)].is_zero() {
            continue;
        }
        if m[(pivot_row, c)].is_negative() {
            m.add_row_multiple(pivot_row, pivot_row, &BigInt::from(-2));
        }
        for r in 0..pivot_row {
            let q = m[(r, c)].div_floor(&m[(pivot_row, c)]);
            if !q.is_zero() {
                m.add_row_multiple(r, pivot_row, &-q);
            }
        }
        pivots.push(c);
        pivot_row += 1;
    }
    m.to_rows().into_iter().take(pivot_row).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_rows(rows)
    }

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn det_small() {
        assert_eq!(m(&[vec![-1, -1], vec![1, -2]]).det(), BigInt::from(3));
        assert_eq!(m(&[vec![0, 1], vec![1, 0]]).det(), BigInt::from(-1));
        assert_eq!(IntMatrix::identity(0).det(), BigInt::one());
        assert_eq!(m(&[vec![2, 4], vec![1, 2]]).det(), BigInt::zero());
        // needs a row swap
        assert_eq!(m(&[vec![0, 2, 1], vec![1, 0, 0], vec![0, 1, 3]]).det(), BigInt::from(-5));
    }

    #[test]
    fn smith_diagonal() {
        let s = m(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]).smith();
        assert_eq!(s.diagonal, big(&[2, 6, 12]));
        let s = m(&[vec![-1, -1], vec![1, -2]]).smith();
        assert_eq!(s.diagonal, big(&[1, 3]));
    }

    #[test]
    fn smith_transform_is_consistent() {
        let a = m(&[vec![4, 6, 2], vec![2, 3, 1]]);
        let s = a.smith();
        assert_eq!(s.column_transform.det().abs(), BigInt::one());
        assert_eq!(s.diagonal, big(&[1, 0]));
        let av = a.mul(&s.column_transform);
        // columns past the rank are killed by A
        for c in 1..3 {
            assert!(av.column(c).iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn kernels() {
        assert_eq!(m(&[vec![-1, 1], vec![1, -1]]).kernel(), vec![big(&[1, 1])]);
        assert_eq!(IntMatrix::zeros(2, 2).kernel(), vec![big(&[1, 0]), big(&[0, 1])]);
        assert!(m(&[vec![1, 2], vec![3, 4]]).kernel().is_empty());
        assert_eq!(m(&[vec![2, 4]]).kernel(), vec![big(&[2, -1])]);
    }

    #[test]
    fn geometric_sum_vanishes_for_cube_root_of_identity() {
        let t = m(&[vec![0, -1], vec![1, -1]]);
        assert_eq!(t.pow(3), IntMatrix::identity(2));
        assert!(t.geometric_sum(3).is_zero());
    }
}
