//! Dense matrices over an exact scalar, row-major.
//!
//! Everything here is exact: integer matrices use arbitrary precision and
//! rational matrices reduced big-integer fractions. The concrete aliases
//! [`crate::IntMatrix`] and [`crate::RatMatrix`] are what the rest of the
//! crate uses.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Scalar usable for Gaussian elimination.
pub trait FieldScalar:
    Clone
    + PartialEq
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
{
}

impl<T> FieldScalar for T where
    T: Clone
        + PartialEq
        + Zero
        + One
        + Neg<Output = Self>
        + Add<Output = Self>
        + Sub<Output = Self>
        + Mul<Output = Self>
        + Div<Output = Self>
{
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Clone> Matrix<T> {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |v| v.len());
        assert!(rows.iter().all(|v| v.len() == c), "ragged rows");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut T {
        &mut self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> Vec<T> {
        (0..self.cols).map(|j| self.at(i, j).clone()).collect()
    }

    pub fn col(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self.at(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.at(j, i).clone())
    }
}

impl<T: Clone + Zero> Matrix<T> {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Matrix::from_fn(rows, cols, |_, _| T::zero())
    }
}

impl<T: Clone + Zero + One> Matrix<T> {
    pub fn identity(n: usize) -> Self {
        Matrix::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() })
    }
}

impl<T> Matrix<T>
where
    T: Clone + Zero + Mul<Output = T> + Add<Output = T>,
{
    pub fn mul(&self, other: &Matrix<T>) -> Matrix<T> {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        Matrix::from_fn(self.rows, other.cols, |i, j| {
            let mut acc = T::zero();
            for k in 0..self.cols {
                acc = acc + self.at(i, k).clone() * other.at(k, j).clone();
            }
            acc
        })
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len(), "dimension mismatch");
        (0..self.rows)
            .map(|i| {
                let mut acc = T::zero();
                for (k, x) in v.iter().enumerate() {
                    acc = acc + self.at(i, k).clone() * x.clone();
                }
                acc
            })
            .collect()
    }
}

impl<T: FieldScalar> Matrix<T> {
    /// Reduced row echelon form; returns the pivot columns.
    pub fn rref(&self) -> (Matrix<T>, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.at(i, c).is_zero()) else {
                continue;
            };
            for j in 0..m.cols {
                m.data.swap(r * m.cols + j, p * m.cols + j);
            }
            let inv = T::one() / m.at(r, c).clone();
            for j in 0..m.cols {
                let v = m.at(r, j).clone() * inv.clone();
                *m.at_mut(r, j) = v;
            }
            for i in 0..m.rows {
                if i != r && !m.at(i, c).is_zero() {
                    let factor = m.at(i, c).clone();
                    for j in 0..m.cols {
                        let v = m.at(i, j).clone() - factor.clone() * m.at(r, j).clone();
                        *m.at_mut(i, j) = v;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right kernel, deterministic: one vector per free column,
    /// with a 1 in the free position.
    pub fn kernel_basis(&self) -> Vec<Vec<T>> {
        let (rr, pivots) = self.rref();
        let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_set.contains(&free) {
                continue;
            }
            let mut v = vec![T::zero(); self.cols];
            v[free] = T::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = T::zero() - rr.at(r, free).clone();
            }
            basis.push(v);
        }
        basis
    }

    /// Solves self * x = b; None if inconsistent. Free variables set to zero.
    pub fn solve(&self, b: &[T]) -> Option<Vec<T>> {
        assert_eq!(self.rows, b.len());
        let aug = Matrix::from_fn(self.rows, self.cols + 1, |i, j| {
            if j < self.cols {
                self.at(i, j).clone()
            } else {
                b[i].clone()
            }
        });
        let (rr, pivots) = aug.rref();
        if pivots.contains(&self.cols) {
            return None;
        }
        let mut x = vec![T::zero(); self.cols];
        for (r, &pc) in pivots.iter().enumerate() {
            x[pc] = rr.at(r, self.cols).clone();
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Matrix<T>> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let aug = Matrix::from_fn(n, 2 * n, |i, j| {
            if j < n {
                self.at(i, j).clone()
            } else if j - n == i {
                T::one()
            } else {
                T::zero()
            }
        });
        let (rr, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        Some(Matrix::from_fn(n, n, |i, j| rr.at(i, j + n).clone()))
    }

    pub fn det(&self) -> T {
        assert_eq!(self.rows, self.cols);
        let mut m = self.clone();
        let n = m.rows;
        let mut det = T::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m.at(i, c).is_zero()) else {
                return T::zero();
            };
            if p != c {
                for j in 0..n {
                    m.data.swap(c * n + j, p * n + j);
                }
                det = T::zero() - det;
            }
            let pivot = m.at(c, c).clone();
            det = det * pivot.clone();
            for i in c + 1..n {
                if !m.at(i, c).is_zero() {
                    let factor = m.at(i, c).clone() / pivot.clone();
                    for j in c..n {
                        let v = m.at(i, j).clone() - factor.clone() * m.at(c, j).clone();
                        *m.at_mut(i, j) = v;
                    }
                }
            }
        }
        det
    }
}

impl Matrix<BigInt> {
    pub fn to_rational(&self) -> Matrix<BigRational> {
        Matrix::from_fn(self.rows, self.cols, |i, j| {
            BigRational::from_integer(self.at(i, j).clone())
        })
    }
}

impl Matrix<BigRational> {
    /// Exact integer conversion; None if any entry has a denominator.
    pub fn to_integer(&self) -> Option<Matrix<BigInt>> {
        let mut data = Vec::with_capacity(self.rows * self.cols);
        for x in &self.data {
            if !x.is_integer() {
                return None;
            }
            data.push(x.to_integer());
        }
        Some(Matrix {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }
}

/// U * A * V = D with U, V unimodular, D diagonal with a divisibility chain.
/// `u_inv` and `v_inv` are the exact inverses, tracked during elimination.
#[derive(Clone, Debug)]
pub struct Smith {
    pub u: Matrix<BigInt>,
    pub d: Matrix<BigInt>,
    pub v: Matrix<BigInt>,
    pub u_inv: Matrix<BigInt>,
    pub v_inv: Matrix<BigInt>,
}

impl Smith {
    pub fn diagonal(&self) -> Vec<BigInt> {
        let n = self.d.rows().min(self.d.cols());
        (0..n).map(|i| self.d.at(i, i).clone()).collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|x| !x.is_zero()).count()
    }
}

/// Smith normal form by elimination with minimal-|entry| pivoting.
pub fn smith_normal_form(a: &Matrix<BigInt>) -> Smith {
    let rows = a.rows();
    let cols = a.cols();
    let mut m = a.clone();
    let mut u = Matrix::<BigInt>::identity(rows);
    let mut u_inv = Matrix::<BigInt>::identity(rows);
    let mut v = Matrix::<BigInt>::identity(cols);
    let mut v_inv = Matrix::<BigInt>::identity(cols);

    // row i += k * row j on m and u; u_inv gets the inverse column op
    fn row_add(
        m: &mut Matrix<BigInt>,
        u: &mut Matrix<BigInt>,
        u_inv: &mut Matrix<BigInt>,
        i: usize,
        j: usize,
        k: &BigInt,
    ) {
        for c in 0..m.cols() {
            let v = m.at(i, c) + k * m.at(j, c);
            *m.at_mut(i, c) = v;
        }
        for c in 0..u.cols() {
            let val = u.at(i, c) + k * u.at(j, c);
            *u.at_mut(i, c) = val;
        }
        for r in 0..u_inv.rows() {
            let val = u_inv.at(r, j) - k * u_inv.at(r, i);
            *u_inv.at_mut(r, j) = val;
        }
    }

    fn col_add(
        m: &mut Matrix<BigInt>,
        v: &mut Matrix<BigInt>,
        v_inv: &mut Matrix<BigInt>,
        i: usize,
        j: usize,
        k: &BigInt,
    ) {
        // col i += k * col j
        for r in 0..m.rows() {
            let val = m.at(r, i) + k * m.at(r, j);
            *m.at_mut(r, i) = val;
        }
        for r in 0..v.rows() {
            let val = v.at(r, i) + k * v.at(r, j);
            *v.at_mut(r, i) = val;
        }
        for c in 0..v_inv.cols() {
            let val = v_inv.at(j, c) - k * v_inv.at(i, c);
            *v_inv.at_mut(j, c) = val;
        }
    }

    fn row_swap(
        m: &mut Matrix<BigInt>,
        u: &mut Matrix<BigInt>,
        u_inv: &mut Matrix<BigInt>,
        i: usize,
        j: usize,
    ) {
        for c in 0..m.cols() {
            let tmp = m.at(i, c).clone();
            *m.at_mut(i, c) = m.at(j, c).clone();
            *m.at_mut(j, c) = tmp;
        }
        for c in 0..u.cols() {
            let tmp = u.at(i, c).clone();
            *u.at_mut(i, c) = u.at(j, c).clone();
            *u.at_mut(j, c) = tmp;
        }
        for r in 0..u_inv.rows() {
            let tmp = u_inv.at(r, i).clone();
            *u_inv.at_mut(r, i) = u_inv.at(r, j).clone();
            *u_inv.at_mut(r, j) = tmp;
        }
    }

    fn col_swap(
        m: &mut Matrix<BigInt>,
        v: &mut Matrix<BigInt>,
        v_inv: &mut Matrix<BigInt>,
        i: usize,
        j: usize,
    ) {
        for r in 0..m.rows() {
            let tmp = m.at(r, i).clone();
            *m.at_mut(r, i) = m.at(r, j).clone();
            *m.at_mut(r, j) = tmp;
        }
        for r in 0..v.rows() {
            let tmp = v.at(r, i).clone();
            *v.at_mut(r, i) = v.at(r, j).clone();
            *v.at_mut(r, j) = tmp;
        }
        for c in 0..v_inv.cols() {
            let tmp = v_inv.at(i, c).clone();
            *v_inv.at_mut(i, c) = v_inv.at(j, c).clone();
            *v_inv.at_mut(j, c) = tmp;
        }
    }

    fn row_negate(
        m: &mut Matrix<BigInt>,
        u: &mut Matrix<BigInt>,
        u_inv: &mut Matrix<BigInt>,
        i: usize,
    ) {
        for c in 0..m.cols() {
            let val = -m.at(i, c);
            *m.at_mut(i, c) = val;
        }
        for c in 0..u.cols() {
            let val = -u.at(i, c);
            *u.at_mut(i, c) = val;
        }
        for r in 0..u_inv.rows() {
            let val = -u_inv.at(r, i);
            *u_inv.at_mut(r, i) = val;
        }
    }

    let mut t = 0;
    while t < rows && t < cols {
        // locate a minimal-|entry| nonzero pivot in the trailing block
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !m.at(i, j).is_zero() {
                    match &pivot {
                        Some((pi, pj)) if m.at(*pi, *pj).abs() <= m.at(i, j).abs() => {}
                        _ => pivot = Some((i, j)),
                    }
                }
            }
        }
        let Some((pi, pj)) = pivot else {
            break;
        };
        if pi != t {
            row_swap(&mut m, &mut u, &mut u_inv, t, pi);
        }
        if pj != t {
            col_swap(&mut m, &mut v, &mut v_inv, t, pj);
        }

        loop {
            let mut clean = true;
            for i in t + 1..rows {
                if !m.at(i, t).is_zero() {
                    let q = -(m.at(i, t) / m.at(t, t));
                    row_add(&mut m, &mut u, &mut u_inv, i, t, &q);
                    if !m.at(i, t).is_zero() {
                        // remainder smaller than pivot; promote it
                        row_swap(&mut m, &mut u, &mut u_inv, t, i);
                        clean = false;
                    }
                }
            }
            for j in t + 1..cols {
                if !m.at(t, j).is_zero() {
                    let q = -(m.at(t, j) / m.at(t, t));
                    col_add(&mut m, &mut v, &mut v_inv, j, t, &q);
                    if !m.at(t, j).is_zero() {
                        col_swap(&mut m, &mut v, &mut v_inv, t, j);
                        clean = false;
                    }
                }
            }
            if clean
                && (t + 1..rows).all(|i| m.at(i, t).is_zero())
                && (t + 1..cols).all(|j| m.at(t, j).is_zero())
            {
                break;
            }
        }

        // enforce divisibility into the trailing block
        let mut fixed = false;
        'outer: for i in t + 1..rows {
            for j in t + 1..cols {
                if !(m.at(i, j) % m.at(t, t)).is_zero() {
                    let one = BigInt::one();
                    row_add(&mut m, &mut u, &mut u_inv, t, i, &one);
                    fixed = true;
                    break 'outer;
                }
            }
        }
        if fixed {
            continue; // re-run elimination at the same pivot
        }
        if m.at(t, t).is_negative() {
            row_negate(&mut m, &mut u, &mut u_inv, t);
        }
        t += 1;
    }

    Smith {
        u,
        d: m,
        v,
        u_inv,
        v_inv,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn bi(x: i64) -> BigInt {
        BigInt::from(x)
    }

    fn int_matrix(rows: &[&[i64]]) -> Matrix<BigInt> {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| bi(x)).collect()).collect())
    }

    fn check_snf(a: &Matrix<BigInt>) -> Smith {
        let s = smith_normal_form(a);
        assert_eq!(s.u.mul(a).mul(&s.v), s.d, "U*A*V != D");
        assert_eq!(s.u.mul(&s.u_inv), Matrix::identity(a.rows()));
        assert_eq!(s.v.mul(&s.v_inv), Matrix::identity(a.cols()));
        let det_u = s.u.to_rational().det();
        let det_v = s.v.to_rational().det();
        assert!(det_u.abs() == num_rational::BigRational::one());
        assert!(det_v.abs() == num_rational::BigRational::one());
        // divisibility chain, nonnegative, zeros trail
        let diag = s.diagonal();
        for w in diag.windows(2) {
            assert!(!w[0].is_negative() && !w[1].is_negative());
            if w[0].is_zero() {
                assert!(w[1].is_zero());
            } else {
                assert!((&w[1] % &w[0]).is_zero(), "chain broken: {:?}", diag);
            }
        }
        for i in 0..a.rows() {
            for j in 0..a.cols() {
                if i != j {
                    assert!(s.d.at(i, j).is_zero());
                }
            }
        }
        s
    }

    #[test]
    fn snf_identity() {
        let s = check_snf(&Matrix::identity(2));
        assert_eq!(s.diagonal(), vec![bi(1), bi(1)]);
    }

    #[test]
    fn snf_diag_2_3() {
        let s = check_snf(&int_matrix(&[&[2, 0], &[0, 3]]));
        assert_eq!(s.diagonal(), vec![bi(1), bi(6)]);
    }

    #[test]
    fn snf_p2_alpha() {
        // alpha matrix of P^2: rows (1,0),(0,1),(-1,-1)
        let s = check_snf(&int_matrix(&[&[1, 0], &[0, 1], &[-1, -1]]));
        assert_eq!(s.diagonal(), vec![bi(1), bi(1)]);
        assert_eq!(s.rank(), 2);
    }

    #[test]
    fn rref_rank_kernel() {
        let a = int_matrix(&[&[1, 0, -1], &[0, 1, -1]]).to_rational();
        assert_eq!(a.rank(), 2);
        let k = a.kernel_basis();
        assert_eq!(k.len(), 1);
        let v = &k[0];
        assert_eq!(v[0], v[2]);
        assert_eq!(v[1], v[2]);
    }

    #[test]
    fn solve_and_inverse() {
        let a = int_matrix(&[&[2, 1], &[1, 1]]).to_rational();
        let b = vec![
            num_rational::BigRational::from_integer(bi(3)),
            num_rational::BigRational::from_integer(bi(2)),
        ];
        let x = a.solve(&b).unwrap();
        assert_eq!(a.mul_vec(&x), b);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), Matrix::identity(2));
        assert_eq!(a.det(), num_rational::BigRational::one());
    }
}
