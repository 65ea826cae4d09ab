use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::xgcd;

/// Dense integer matrix, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn from_rows<T: Clone + Into<BigInt>>(rows: &[Vec<T>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged matrix");
            data.extend(row.iter().cloned().map(Into::into));
        }
        IntMatrix {
            rows: r,
            cols: c,
            data,
        }
    }

    pub fn diagonal<T: Clone + Into<BigInt>>(d: &[T]) -> Self {
        let mut m = Self::zeros(d.len(), d.len());
        for (i, x) in d.iter().enumerate() {
            m[(i, i)] = x.clone().into();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn push_row(&mut self, row: Vec<BigInt>) {
        if self.rows == 0 && self.cols == 0 {
            self.cols = row.len();
        }
        assert_eq!(row.len(), self.cols, "row length mismatch");
        self.data.extend(row);
        self.rows += 1;
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.rows);
        let mut out = vec![BigInt::zero(); self.cols];
        for (i, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                *o += x * &self[(i, j)];
            }
        }
        out
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[(k, k)].is_zero() {
                let Some(swap) = (k + 1..n).find(|&i| !a[(i, k)].is_zero()) else {
                    return BigInt::zero();
                };
                a.swap_rows(k, swap);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)]) / &prev;
                    a[(i, j)] = v;
                }
            }
            prev = a[(k, k)].clone();
        }
        sign * &a[(n - 1, n - 1)]
    }

    pub fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(i * self.cols + c, j * self.cols + c);
        }
    }

    pub fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + i, r * self.cols + j);
        }
    }

    /// row_i += q * row_j
    fn add_row_multiple(&mut self, i: usize, j: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for c in 0..self.cols {
            let v = &self.data[j * self.cols + c] * q;
            self.data[i * self.cols + c] += v;
        }
    }

    /// col_i += q * col_j
    fn add_col_multiple(&mut self, i: usize, j: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for r in 0..self.rows {
            let v = &self.data[r * self.cols + j] * q;
            self.data[r * self.cols + i] += v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for c in 0..self.cols {
            let v = -std::mem::take(&mut self.data[i * self.cols + c]);
            self.data[i * self.cols + c] = v;
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Smith normal form `left * m * right = diag(invariants)`.
#[derive(Clone, Debug)]
pub struct Snf {
    /// d_1 | d_2 | ... ; length min(rows, cols), zeros last.
    pub invariants: Vec<BigInt>,
    pub left: IntMatrix,
    pub right: IntMatrix,
    pub right_inverse: IntMatrix,
}

fn min_abs_entry(a: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..a.rows() {
        for j in t..a.cols() {
            let v = &a[(i, j)];
            if v.is_zero() {
                continue;
            }
            if best.map_or(true, |(bi, bj)| v.abs() < a[(bi, bj)].abs()) {
                best = Some((i, j));
            }
        }
    }
    best
}

pub fn smith_normal_form(m: &IntMatrix) -> Snf {
    let (r, c) = (m.rows(), m.cols());
    let mut a = m.clone();
    let mut u = IntMatrix::identity(r);
    let mut v = IntMatrix::identity(c);
    let mut vinv = IntMatrix::identity(c);
    let n = r.min(c);
    let mut t = 0;
    while t < n {
        let Some((pi, pj)) = min_abs_entry(&a, t) else {
            break;
        };
        a.swap_rows(t, pi);
        u.swap_rows(t, pi);
        a.swap_cols(t, pj);
        v.swap_cols(t, pj);
        vinv.swap_rows(t, pj);
        loop {
            let mut clean = true;
            for i in t + 1..r {
                if a[(i, t)].is_zero() {
                    continue;
                }
                let q = -a[(i, t)].div_floor(&a[(t, t)]);
                a.add_row_multiple(i, t, &q);
                u.add_row_multiple(i, t, &q);
                if !a[(i, t)].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..c {
                if a[(t, j)].is_zero() {
                    continue;
                }
                let q = -a[(t, j)].div_floor(&a[(t, t)]);
                a.add_col_multiple(j, t, &q);
                v.add_col_multiple(j, t, &q);
                vinv.add_row_multiple(t, j, &-&q);
                if !a[(t, j)].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                // move the smallest remainder in row/column t to the pivot
                let mut best = (t, t);
                for i in t + 1..r {
                    if !a[(i, t)].is_zero() && a[(i, t)].abs() < a[best].abs() {
                        best = (i, t);
                    }
                }
                for j in t + 1..c {
                    if !a[(t, j)].is_zero() && a[(t, j)].abs() < a[best].abs() {
                        best = (t, j);
                    }
                }
                if best.0 != t {
                    a.swap_rows(t, best.0);
                    u.swap_rows(t, best.0);
                } else if best.1 != t {
                    a.swap_cols(t, best.1);
                    v.swap_cols(t, best.1);
                    vinv.swap_rows(t, best.1);
                }
                continue;
            }
            let piv = a[(t, t)].clone();
            let bad = (t + 1..r).find(|&i| (t + 1..c).any(|j| !a[(i, j)].is_multiple_of(&piv)));
            match bad {
                Some(i) => {
                    a.add_row_multiple(t, i, &BigInt::one());
                    u.add_row_multiple(t, i, &BigInt::one());
                }
                None => break,
            }
        }
        if a[(t, t)].is_negative() {
            a.negate_row(t);
            u.negate_row(t);
        }
        t += 1;
    }
    let invariants = (0..n).map(|i| a[(i, i)].clone()).collect();
    Snf {
        invariants,
        left: u,
        right: v,
        right_inverse: vinv,
    }
}

/// Row-style Hermite normal form: returns (H, U) with U unimodular,
/// U * m = H, H in row echelon form with positive pivots and entries above
/// each pivot reduced into [0, pivot).
pub fn hnf_with_transform(m: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let (r, c) = (m.rows(), m.cols());
    let mut a = m.clone();
    let mut u = IntMatrix::identity(r);
    let mut row = 0;
    for col in 0..c {
        if row == r {
            break;
        }
        loop {
            let pivot = (row..r)
                .filter(|&i| !a[(i, col)].is_zero())
                .min_by(|&i, &j| a[(i, col)].abs().cmp(&a[(j, col)].abs()));
            let Some(p) = pivot else { break };
            a.swap_rows(row, p);
            u.swap_rows(row, p);
            let mut reduced = true;
            for k in row + 1..r {
                if a[(k, col)].is_zero() {
                    continue;
                }
                let q = -a[(k, col)].div_floor(&a[(row, col)]);
                a.add_row_multiple(k, row, &q);
                u.add_row_multiple(k, row, &q);
                if !a[(k, col)].is_zero() {
                    reduced = false;
                }
            }
            if reduced {
                break;
            }
        }
        if a[(row, col)].is_zero() {
            continue;
        }
        if a[(row, col)].is_negative() {
            a.negate_row(row);
            u.negate_row(row);
        }
        for k in 0..row {
            let q = -a[(k, col)].div_floor(&a[(row, col)]);
            a.add_row_multiple(k, row, &q);
            u.add_row_multiple(k, row, &q);
        }
        row += 1;
    }
    (a, u)
}

/// Hermite basis of the lattice spanned by `rows` together with d * Z^n.
/// Returns an upper triangular n x n matrix whose diagonal entries divide d;
/// its determinant is the index of the lattice in Z^n.
pub fn hnf_mod_d(rows: &[Vec<BigInt>], n: usize, d: &BigInt) -> IntMatrix {
    let mut h = IntMatrix::diagonal(&vec![d.clone(); n]);
    for row in rows {
        add_row_mod_d(&mut h, row, d);
    }
    h
}

/// Fold one more lattice vector into an upper triangular basis kept modulo d.
/// Whenever a pivot shrinks to g, (d/g) times its row is folded in as well,
/// so that the rows keep spanning d * Z^n.
pub fn add_row_mod_d(h: &mut IntMatrix, row: &[BigInt], d: &BigInt) {
    let n = h.rows();
    let mut stack: Vec<Vec<BigInt>> = vec![row.iter().map(|x| x.mod_floor(d)).collect()];
    while let Some(mut v) = stack.pop() {
        for i in 0..n {
            if v[i].is_zero() {
                continue;
            }
            let (q, r) = v[i].div_mod_floor(&h[(i, i)]);
            if r.is_zero() {
                for j in i..n {
                    v[j] = (&v[j] - &q * &h[(i, j)]).mod_floor(d);
                }
                continue;
            }
            let (g, s, t) = xgcd(&h[(i, i)], &v[i]);
            let a = &h[(i, i)] / &g;
            let b = &v[i] / &g;
            let mut new_pivot = Vec::with_capacity(n);
            let mut new_v = Vec::with_capacity(n);
            for j in 0..n {
                let hj = &h[(i, j)];
                new_pivot.push((&s * hj + &t * &v[j]).mod_floor(d));
                new_v.push((&a * &v[j] - &b * hj).mod_floor(d));
            }
            new_pivot[i] = g.clone();
            let cofactor = d / &g;
            let mut extra: Vec<BigInt> = new_pivot
                .iter()
                .map(|x| (x * &cofactor).mod_floor(d))
                .collect();
            extra[i] = BigInt::zero();
            for j in 0..n {
                h[(i, j)] = new_pivot[j].clone();
            }
            stack.push(extra);
            v = new_v;
        }
    }
}
