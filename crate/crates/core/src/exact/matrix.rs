//! Dense matrices over ℚ(i) with exact Gaussian elimination.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::Scalar;
use crate::{Error, Result};

pub type Vector = Vec<Scalar>;

pub fn zero_vector(n: usize) -> Vector {
    vec![Scalar::zero(); n]
}

pub fn unit_vector(n: usize, k: usize) -> Vector {
    let mut v = zero_vector(n);
    v[k] = Scalar::one();
    v
}

pub fn int_vector(entries: &[i64]) -> Vector {
    entries.iter().map(|&x| Scalar::int(x)).collect()
}

pub fn is_zero_vector(v: &[Scalar]) -> bool {
    v.iter().all(Zero::is_zero)
}

pub fn add_vectors(a: &[Scalar], b: &[Scalar]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub_vectors(a: &[Scalar], b: &[Scalar]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale_vector(c: &Scalar, v: &[Scalar]) -> Vector {
    v.iter().map(|x| c * x).collect()
}

pub fn conj_vector(v: &[Scalar]) -> Vector {
    v.iter().map(Scalar::conj).collect()
}

/// Plain bilinear dot product (no conjugation).
pub fn dot(a: &[Scalar], b: &[Scalar]) -> Scalar {
    let mut acc = Scalar::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc += &(x * y);
        }
    }
    acc
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Scalar::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for k in 0..n {
            m.data[k * n + k] = Scalar::one();
        }
        m
    }

    pub fn scalar(n: usize, c: &Scalar) -> Self {
        let mut m = Self::zeros(n, n);
        for k in 0..n {
            m.data[k * n + k] = c.clone();
        }
        m
    }

    pub fn diagonal(d: &[Scalar]) -> Self {
        let n = d.len();
        let mut m = Self::zeros(n, n);
        for (k, x) in d.iter().enumerate() {
            m.data[k * n + k] = x.clone();
        }
        m
    }

    /// Builds a matrix from rows; `cols` is needed when there are no rows.
    pub fn from_rows_with_cols(rows: Vec<Vector>, cols: usize) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        let n = rows.len();
        for r in rows {
            if r.len() != cols {
                return Err(Error::DimensionMismatch(format!(
                    "row of length {} in matrix with {} columns",
                    r.len(),
                    cols
                )));
            }
            data.extend(r);
        }
        Ok(Matrix {
            rows: n,
            cols,
            data,
        })
    }

    /// Builds a matrix from a nonempty list of equal-length rows.
    pub fn from_rows(rows: Vec<Vector>) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        Self::from_rows_with_cols(rows, cols).expect("ragged rows")
    }

    pub fn from_cols(cols: &[Vector], rows: usize) -> Self {
        let mut m = Self::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows, "column length");
            for (i, x) in c.iter().enumerate() {
                m.data[i * m.cols + j] = x.clone();
            }
        }
        m
    }

    pub fn from_ints(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| int_vector(r)).collect())
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
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

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: Scalar) {
        self.data[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> Vector {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col(&self, j: usize) -> Vector {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn row_vectors(&self) -> Vec<Vector> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn col_vectors(&self) -> Vec<Vector> {
        (0..self.cols).map(|j| self.col(j)).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn conj(&self) -> Self {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(Scalar::conj).collect(),
        }
    }

    pub fn adjoint(&self) -> Self {
        self.transpose().conj()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_real(&self) -> bool {
        self.data.iter().all(Scalar::is_real)
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| c * x).collect(),
        }
    }

    pub fn apply(&self, v: &[Scalar]) -> Vector {
        assert_eq!(v.len(), self.cols, "vector length");
        (0..self.rows)
            .map(|i| dot(&self.data[i * self.cols..(i + 1) * self.cols], v))
            .collect()
    }

    /// `xᵀ·A·y` without conjugation.
    pub fn bilinear(&self, x: &[Scalar], y: &[Scalar]) -> Scalar {
        dot(x, &self.apply(y))
    }

    pub fn checked_mul(&self, o: &Matrix) -> Result<Matrix> {
        if self.cols != o.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, o.rows, o.cols
            )));
        }
        let mut out = Matrix::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if !b.is_zero() {
                        out.data[i * o.cols + j] += &(a * b);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: usize) -> Matrix {
        assert!(self.is_square(), "power of a non-square matrix");
        let mut acc = Matrix::identity(self.rows);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    pub fn commutes_with(&self, o: &Matrix) -> bool {
        (self * o) == (o * self)
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        Self::from_fn(rows.len(), cols.len(), |i, j| {
            self.get(rows[i], cols[j]).clone()
        })
    }

    pub fn hstack(&self, o: &Matrix) -> Matrix {
        assert_eq!(self.rows, o.rows, "hstack row count");
        Self::from_fn(self.rows, self.cols + o.cols, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                o.get(i, j - self.cols).clone()
            }
        })
    }

    pub fn vstack(&self, o: &Matrix) -> Matrix {
        assert_eq!(self.cols, o.cols, "vstack column count");
        let mut data = self.data.clone();
        data.extend(o.data.iter().cloned());
        Matrix {
            rows: self.rows + o.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn block_diag(blocks: &[Matrix]) -> Matrix {
        let r: usize = blocks.iter().map(|b| b.rows).sum();
        let c: usize = blocks.iter().map(|b| b.cols).sum();
        let mut m = Matrix::zeros(r, c);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    m.set(r0 + i, c0 + j, b.get(i, j).clone());
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        m
    }

    /// Kronecker product `self ⊗ o`.
    pub fn kron(&self, o: &Matrix) -> Matrix {
        Self::from_fn(self.rows * o.rows, self.cols * o.cols, |i, j| {
            self.get(i / o.rows, j / o.cols) * o.get(i % o.rows, j % o.cols)
        })
    }

    /// Reduced row echelon form with leftmost pivots, and the pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m.get(r, c).inv().expect("nonzero pivot");
            for j in c..m.cols {
                let x = m.get(r, j) * &inv;
                m.set(r, j, x);
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let f = m.get(i, c).clone();
                if f.is_zero() {
                    continue;
                }
                for j in c..m.cols {
                    let t = m.get(r, j);
                    if t.is_zero() {
                        continue;
                    }
                    let x = m.get(i, j) - &(&f * t);
                    m.set(i, j, x);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// A basis of `{x : A·x = 0}`, one vector per free column.
    pub fn kernel_vectors(&self) -> Vec<Vector> {
        let (r, pivots) = self.rref();
        let mut out = Vec::new();
        for free in (0..self.cols).filter(|c| !pivots.contains(c)) {
            let mut v = zero_vector(self.cols);
            v[free] = Scalar::one();
            for (k, &pc) in pivots.iter().enumerate() {
                v[pc] = -r.get(k, free);
            }
            out.push(v);
        }
        out
    }

    /// Some solution of `A·x = b`, or `Inconsistent`.
    pub fn solve(&self, b: &[Scalar]) -> Result<Vector> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "right-hand side of length {} for {} rows",
                b.len(),
                self.rows
            )));
        }
        let aug = self.hstack(&Matrix::from_cols(&[b.to_vec()], self.rows));
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return Err(Error::Inconsistent);
        }
        let mut x = zero_vector(self.cols);
        for (k, &pc) in pivots.iter().enumerate() {
            x[pc] = r.get(k, self.cols).clone();
        }
        Ok(x)
    }

    /// Some `X` with `A·X = B`.
    pub fn solve_matrix(&self, b: &Matrix) -> Result<Matrix> {
        let cols: Result<Vec<Vector>> = b.col_vectors().iter().map(|c| self.solve(c)).collect();
        Ok(Matrix::from_cols(&cols?, self.cols))
    }

    pub fn det(&self) -> Result<Scalar> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let mut m = self.clone();
        let n = m.rows;
        let mut det = Scalar::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m.get(i, c).is_zero()) else {
                return Ok(Scalar::zero());
            };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let piv = m.get(c, c).clone();
            det = &det * &piv;
            let inv = piv.inv().expect("nonzero pivot");
            for i in c + 1..n {
                let f = m.get(i, c) * &inv;
                if f.is_zero() {
                    continue;
                }
                for j in c..n {
                    let x = m.get(i, j) - &(&f * m.get(c, j));
                    m.set(i, j, x);
                }
            }
        }
        Ok(det)
    }

    pub fn inverse(&self) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let (r, pivots) = self.hstack(&Matrix::identity(n)).rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return Err(Error::Singular);
        }
        Ok(r.submatrix(&(0..n).collect::<Vec<_>>(), &(n..2 * n).collect::<Vec<_>>()))
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    /// Coefficients `c_0..c_n` of `det(x·I − A)` (monic, `c_n = 1`), by Faddeev–LeVerrier.
    pub fn charpoly(&self) -> Result<Vec<Scalar>> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let mut coeffs = vec![Scalar::zero(); n + 1];
        coeffs[n] = Scalar::one();
        let mut m = Matrix::zeros(n, n);
        for k in 1..=n {
            let prev = &coeffs[n - k + 1];
            m = &(self * &m) + &Matrix::scalar(n, prev);
            let am = self * &m;
            coeffs[n - k] = -(am.trace() / Scalar::int(k as i64));
        }
        Ok(coeffs)
    }

    pub fn trace(&self) -> Scalar {
        let mut t = Scalar::zero();
        for k in 0..self.rows.min(self.cols) {
            t += self.get(k, k);
        }
        t
    }

    /// Smallest `k` with `A^k = 0`, or `None` when `A` is not nilpotent.
    pub fn nilpotency_index(&self) -> Option<usize> {
        if !self.is_square() {
            return None;
        }
        let mut p = Matrix::identity(self.rows);
        for k in 0..=self.rows {
            if p.is_zero() {
                return Some(k);
            }
            p = &p * self;
        }
        None
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && self == &self.transpose()
    }

    pub fn is_antisymmetric(&self) -> bool {
        self.is_square() && (self + &self.transpose()).is_zero()
    }

    pub fn is_hermitian(&self) -> bool {
        self.is_square() && self == &self.adjoint()
    }

    /// Leading principal minors `Δ_1..Δ_n`.
    pub fn leading_minors(&self) -> Result<Vec<Scalar>> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        (1..=self.rows)
            .map(|k| {
                let idx: Vec<usize> = (0..k).collect();
                self.submatrix(&idx, &idx).det()
            })
            .collect()
    }

    /// Sylvester's criterion on exact leading minors.
    pub fn is_positive_definite(&self, hermitian: bool) -> Result<bool> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        if hermitian && !self.is_hermitian() {
            return Err(Error::NotSymmetric("hermitian"));
        }
        if !hermitian && !(self.is_real() && self.is_symmetric()) {
            return Err(Error::NotSymmetric("real symmetric"));
        }
        for m in self.leading_minors()? {
            if m.real_sign() != Some(1) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

impl<'a> Mul<&'a Matrix> for &'a Matrix {
    type Output = Matrix;
    fn mul(self, o: &Matrix) -> Matrix {
        self.checked_mul(o).expect("matrix product shape")
    }
}

impl Mul for Matrix {
    type Output = Matrix;
    fn mul(self, o: Matrix) -> Matrix {
        &self * &o
    }
}

impl<'a> Add<&'a Matrix> for &'a Matrix {
    type Output = Matrix;
    fn add(self, o: &Matrix) -> Matrix {
        assert!(self.rows == o.rows && self.cols == o.cols, "matrix sum shape");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Add for Matrix {
    type Output = Matrix;
    fn add(self, o: Matrix) -> Matrix {
        &self + &o
    }
}

impl<'a> Sub<&'a Matrix> for &'a Matrix {
    type Output = Matrix;
    fn sub(self, o: &Matrix) -> Matrix {
        assert!(self.rows == o.rows && self.cols == o.cols, "matrix difference shape");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Sub for Matrix {
    type Output = Matrix;
    fn sub(self, o: Matrix) -> Matrix {
        &self - &o
    }
}

impl Neg for &Matrix {
    type Output = Matrix;
    fn neg(self) -> Matrix {
        self.scale(&-Scalar::one())
    }
}

impl Neg for Matrix {
    type Output = Matrix;
    fn neg(self) -> Matrix {
        -&self
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[")?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Serialized as an array of rows of exact entry strings. An `r x 0` matrix
/// loses its row count, so empty matrices should carry dimensions elsewhere.
impl Serialize for Matrix {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        self.row_vectors().serialize(ser)
    }
}

impl<'de> Deserialize<'de> for Matrix {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vector>::deserialize(de)?;
        let cols = rows.first().map_or(0, Vec::len);
        Matrix::from_rows_with_cols(rows, cols).map_err(serde::de::Error::custom)
    }
}

/// Reads a matrix whose shape is known from context, accepting `[]` for
/// matrices with a zero dimension.
pub fn matrix_with_shape(m: &Matrix, rows: usize, cols: usize) -> Result<Matrix> {
    if m.rows == rows && m.cols == cols {
        return Ok(m.clone());
    }
    if m.rows == 0 && (rows == 0 || cols == 0) {
        return Ok(Matrix::zeros(rows, cols));
    }
    if m.cols == 0 && m.rows == rows && cols == 0 {
        return Ok(Matrix::zeros(rows, cols));
    }
    Err(Error::DimensionMismatch(format!(
        "expected {rows}x{cols}, got {}x{}",
        m.rows, m.cols
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_nullity_small() {
        let a = Matrix::from_ints(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(a.rank(), 2);
        assert_eq!(a.kernel_vectors().len(), 1);
        let k = &a.kernel_vectors()[0];
        assert!(is_zero_vector(&a.apply(k)));
    }

    #[test]
    fn determinant_and_inverse() {
        let a = Matrix::from_ints(&[&[2, 1], &[1, 2]]);
        assert_eq!(a.det().unwrap(), Scalar::int(3));
        let inv = a.inverse().unwrap();
        assert_eq!(&a * &inv, Matrix::identity(2));
        assert_eq!(
            Matrix::from_ints(&[&[1, 2], &[2, 4]]).inverse(),
            Err(Error::Singular)
        );
    }

    #[test]
    fn solve_reports_inconsistency() {
        let a = Matrix::from_ints(&[&[1, 0], &[0, 0]]);
        assert_eq!(a.solve(&int_vector(&[1, 1])), Err(Error::Inconsistent));
        assert_eq!(a.solve(&int_vector(&[3, 0])).unwrap(), int_vector(&[3, 0]));
    }

    #[test]
    fn charpoly_of_rotation() {
        let t = Matrix::from_ints(&[&[0, 1], &[-1, 1]]);
        assert_eq!(t.charpoly().unwrap(), int_vector(&[1, -1, 1]));
        let j = Matrix::from_ints(&[&[1, 1, 0], &[0, 1, 1], &[0, 0, 1]]);
        assert_eq!(j.charpoly().unwrap(), int_vector(&[-1, 3, -3, 1]));
    }

    #[test]
    fn positive_definite_examples() {
        assert!(Matrix::from_ints(&[&[2, 1], &[1, 2]])
            .is_positive_definite(false)
            .unwrap());
        assert!(!Matrix::from_ints(&[&[1, 0], &[0, -1]])
            .is_positive_definite(false)
            .unwrap());
        let i = Scalar::i();
        let h = Matrix::from_rows(vec![
            vec![Scalar::int(2), i.clone()],
            vec![-i, Scalar::int(2)],
        ]);
        assert!(h.is_positive_definite(true).unwrap());
        assert!(Matrix::from_ints(&[&[1, 2], &[0, 1]])
            .is_positive_definite(false)
            .is_err());
        assert!(Matrix::zeros(2, 3).is_positive_definite(false).is_err());
    }

    #[test]
    fn nilpotency() {
        let n = Matrix::from_ints(&[&[0, 1, 0], &[0, 0, 1], &[0, 0, 0]]);
        assert_eq!(n.nilpotency_index(), Some(3));
        assert_eq!(Matrix::zeros(2, 2).nilpotency_index(), Some(1));
        assert_eq!(Matrix::identity(2).nilpotency_index(), None);
        assert_eq!(Matrix::zeros(0, 0).nilpotency_index(), Some(0));
    }

    #[test]
    fn json_round_trip() {
        let a = Matrix::from_rows(vec![vec![Scalar::frac(1, 2), Scalar::i()]]);
        let s = serde_json::to_string(&a).unwrap();
        assert_eq!(s, r#"[["1/2","i"]]"#);
        assert_eq!(serde_json::from_str::<Matrix>(&s).unwrap(), a);
    }
}
