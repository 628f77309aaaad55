//! Subspaces of `ℚ(i)^n` stored in reduced row echelon form.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::matrix::{dot, is_zero_vector, unit_vector, zero_vector, Matrix, Vector};
use super::Scalar;
use crate::{Error, Result};

/// A subspace with a canonical basis: the nonzero rows of its RREF.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Subspace {
    ambient: usize,
    basis: Matrix,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Matrix::zeros(0, ambient),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Matrix::identity(ambient),
        }
    }

    pub fn span(ambient: usize, vectors: &[Vector]) -> Self {
        if vectors.is_empty() {
            return Self::zero(ambient);
        }
        for v in vectors {
            assert_eq!(v.len(), ambient, "vector length in span");
        }
        let (r, pivots) = Matrix::from_rows(vectors.to_vec()).rref();
        let idx: Vec<usize> = (0..pivots.len()).collect();
        let all: Vec<usize> = (0..ambient).collect();
        Subspace {
            ambient,
            basis: r.submatrix(&idx, &all),
        }
    }

    pub fn coordinate(ambient: usize, indices: &[usize]) -> Self {
        let vs: Vec<Vector> = indices.iter().map(|&k| unit_vector(ambient, k)).collect();
        Self::span(ambient, &vs)
    }

    pub fn kernel(a: &Matrix) -> Self {
        Self::span(a.cols(), &a.kernel_vectors())
    }

    pub fn image(a: &Matrix) -> Self {
        Self::span(a.rows(), &a.col_vectors())
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient
    }

    /// Echelon basis as a `dim x ambient` matrix.
    pub fn basis_matrix(&self) -> &Matrix {
        &self.basis
    }

    pub fn basis(&self) -> Vec<Vector> {
        self.basis.row_vectors()
    }

    /// Columns are the basis vectors; maps coordinates into the ambient space.
    pub fn inclusion(&self) -> Matrix {
        self.basis.transpose()
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        if is_zero_vector(v) {
            return true;
        }
        let mut rows = self.basis();
        rows.push(v.to_vec());
        Matrix::from_rows(rows).rank() == self.dim()
    }

    pub fn contains_subspace(&self, o: &Subspace) -> bool {
        o.basis().iter().all(|v| self.contains(v))
    }

    pub fn sum(&self, o: &Subspace) -> Subspace {
        assert_eq!(self.ambient, o.ambient, "ambient dimension in sum");
        let mut rows = self.basis();
        rows.extend(o.basis());
        Self::span(self.ambient, &rows)
    }

    pub fn sum_all(ambient: usize, parts: &[Subspace]) -> Subspace {
        parts
            .iter()
            .fold(Self::zero(ambient), |acc, p| acc.sum(p))
    }

    pub fn intersect(&self, o: &Subspace) -> Subspace {
        assert_eq!(self.ambient, o.ambient, "ambient dimension in intersect");
        if self.is_zero() || o.is_zero() {
            return Self::zero(self.ambient);
        }
        // x = Aᵀa = Bᵀb  <=>  [Aᵀ | -Bᵀ](a, b) = 0
        let m = self.inclusion().hstack(&-&o.inclusion());
        let k = self.dim();
        let vs: Vec<Vector> = m
            .kernel_vectors()
            .into_iter()
            .map(|c| self.inclusion().apply(&c[..k]))
            .collect();
        Self::span(self.ambient, &vs)
    }

    /// Image `A(U)`.
    pub fn map(&self, a: &Matrix) -> Subspace {
        assert_eq!(a.cols(), self.ambient, "map source dimension");
        let vs: Vec<Vector> = self.basis().iter().map(|v| a.apply(v)).collect();
        Self::span(a.rows(), &vs)
    }

    /// Preimage `A⁻¹(U)`.
    pub fn preimage(&self, a: &Matrix) -> Subspace {
        assert_eq!(a.rows(), self.ambient, "preimage target dimension");
        // x with A x ∈ U  <=>  annihilator rows of U kill A x
        let ann = self.annihilator_rows();
        if ann.rows() == 0 {
            return Self::full(a.cols());
        }
        Self::kernel(&(&ann * a))
    }

    /// Rows spanning the linear functionals vanishing on `U`.
    pub fn annihilator_rows(&self) -> Matrix {
        let k = self.basis.kernel_vectors();
        Matrix::from_rows_with_cols(k, self.ambient).expect("annihilator shape")
    }

    /// Coordinates of `v` in the echelon basis.
    pub fn coordinates(&self, v: &[Scalar]) -> Result<Vector> {
        self.inclusion().solve(v)
    }

    /// Vectors completing this subspace's basis to a basis of `o ⊇ self`,
    /// chosen from `o`'s echelon basis.
    pub fn complement_in(&self, o: &Subspace) -> Vec<Vector> {
        let mut cur = self.clone();
        let mut out = Vec::new();
        for v in o.basis() {
            if !cur.contains(&v) {
                cur = cur.sum(&Subspace::span(self.ambient, std::slice::from_ref(&v)));
                out.push(v);
            }
        }
        out
    }

    /// Standard unit vectors completing this subspace to the whole space.
    pub fn coordinate_complement(&self) -> Vec<Vector> {
        self.complement_in(&Subspace::full(self.ambient))
    }

    /// Matrix of the restriction `A|_U : U → U` in the echelon basis of `U`.
    pub fn restrict(&self, a: &Matrix) -> Result<Matrix> {
        self.restrict_to(a, self)
    }

    /// Matrix of `A|_U : U → V` in the echelon bases, requiring `A(U) ⊆ V`.
    pub fn restrict_to(&self, a: &Matrix, target: &Subspace) -> Result<Matrix> {
        if a.cols() != self.ambient || a.rows() != target.ambient {
            return Err(Error::DimensionMismatch("restrict".into()));
        }
        let mut cols = Vec::new();
        for v in self.basis() {
            let w = a.apply(&v);
            let c = target
                .coordinates(&w)
                .map_err(|_| Error::Invalid("map does not land in target subspace".into()))?;
            cols.push(c);
        }
        Ok(Matrix::from_cols(&cols, target.dim()))
    }

    pub fn orthogonal_under(&self, form: &Matrix, o: &Subspace) -> bool {
        self.basis()
            .iter()
            .all(|x| o.basis().iter().all(|y| form.bilinear(x, y).is_zero()))
    }
}

/// The quotient `V/U` for `U ⊆ V`, with lifts and a projection.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub sub: Subspace,
    pub total: Subspace,
    /// Representatives in the ambient space of a basis of `V/U`.
    pub lifts: Vec<Vector>,
    /// `dim(V/U) x ambient`: on `V` gives coordinates modulo `U`; kills `U`.
    pub projection: Matrix,
}

impl Quotient {
    pub fn dim(&self) -> usize {
        self.lifts.len()
    }

    pub fn project(&self, v: &[Scalar]) -> Vector {
        self.projection.apply(v)
    }

    /// Ambient vector represented by quotient coordinates.
    pub fn lift(&self, c: &[Scalar]) -> Vector {
        let mut out = zero_vector(self.sub.ambient());
        for (x, l) in c.iter().zip(&self.lifts) {
            if x.is_zero() {
                continue;
            }
            for (o, y) in out.iter_mut().zip(l) {
                *o += &(x * y);
            }
        }
        out
    }

    /// Induced map `V/U → V'/U'` of `A` with `A(V) ⊆ V'`, `A(U) ⊆ U'`.
    pub fn induced(&self, a: &Matrix, target: &Quotient) -> Result<Matrix> {
        if !target.total.contains_subspace(&self.total.map(a))
            || !target.sub.contains_subspace(&self.sub.map(a))
        {
            return Err(Error::Invalid("map is not compatible with quotients".into()));
        }
        let cols: Vec<Vector> = self
            .lifts
            .iter()
            .map(|l| target.project(&a.apply(l)))
            .collect();
        Ok(Matrix::from_cols(&cols, target.dim()))
    }
}

/// Projection and lifted basis of `V/U`.
pub fn quotient_map(total: &Subspace, sub: &Subspace) -> Result<Quotient> {
    if total.ambient() != sub.ambient() {
        return Err(Error::DimensionMismatch("quotient ambient".into()));
    }
    if !total.contains_subspace(sub) {
        return Err(Error::Invalid("quotient by a non-subspace".into()));
    }
    let n = total.ambient();
    let lifts = sub.complement_in(total);
    let rest = total.coordinate_complement();
    // basis adapted to U ⊆ V ⊆ ambient; projection reads off the lift coordinates
    let mut cols = sub.basis();
    cols.extend(lifts.iter().cloned());
    cols.extend(rest);
    let change = Matrix::from_cols(&cols, n);
    let inv = change.inverse()?;
    let rows: Vec<usize> = (sub.dim()..sub.dim() + lifts.len()).collect();
    let all: Vec<usize> = (0..n).collect();
    Ok(Quotient {
        sub: sub.clone(),
        total: total.clone(),
        lifts,
        projection: inv.submatrix(&rows, &all),
    })
}

/// `true` when the subspaces are independent and their dimensions add up.
pub fn is_direct_sum(parts: &[Subspace]) -> bool {
    let Some(first) = parts.first() else {
        return true;
    };
    let total = Subspace::sum_all(first.ambient(), parts);
    total.dim() == parts.iter().map(Subspace::dim).sum::<usize>()
}

/// Gram matrix `(B(x_i, y_j))` for the bilinear form given by `form`.
pub fn gram(form: &Matrix, xs: &[Vector], ys: &[Vector]) -> Matrix {
    Matrix::from_fn(xs.len(), ys.len(), |i, j| form.bilinear(&xs[i], &ys[j]))
}

/// Standard bilinear dot product matrix of two vector lists.
pub fn pairing_matrix(xs: &[Vector], ys: &[Vector]) -> Matrix {
    Matrix::from_fn(xs.len(), ys.len(), |i, j| dot(&xs[i], &ys[j]))
}

#[derive(Serialize, Deserialize)]
struct SubspaceJson {
    ambient: usize,
    basis: Vec<Vector>,
}

impl Serialize for Subspace {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        SubspaceJson {
            ambient: self.ambient,
            basis: self.basis(),
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for Subspace {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let j = SubspaceJson::deserialize(de)?;
        if j.basis.iter().any(|v| v.len() != j.ambient) {
            return Err(serde::de::Error::custom("basis vector length"));
        }
        Ok(Subspace::span(j.ambient, &j.basis))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::matrix::int_vector;

    fn n1() -> Matrix {
        Matrix::from_ints(&[&[0, 0, 1, 0], &[0, 0, 0, 1], &[0, 0, 0, 0], &[0, 0, 0, 0]])
    }

    #[test]
    fn kernel_examples() {
        assert!(Subspace::kernel(&Matrix::identity(2)).is_zero());
        assert_eq!(
            Subspace::kernel(&Matrix::from_ints(&[&[1, 0], &[0, 0]])),
            Subspace::coordinate(2, &[1])
        );
        assert_eq!(Subspace::kernel(&n1()), Subspace::coordinate(4, &[0, 1]));
    }

    #[test]
    fn sum_and_intersection() {
        let e1 = Subspace::coordinate(2, &[0]);
        let e2 = Subspace::coordinate(2, &[1]);
        assert_eq!(e1.sum(&e2), Subspace::full(2));
        assert!(e1.intersect(&e2).is_zero());
        let k = Subspace::kernel(&n1());
        let i = Subspace::image(&n1());
        assert_eq!(k.intersect(&i), Subspace::coordinate(4, &[0, 1]));
    }

    #[test]
    fn canonical_equality() {
        let a = Subspace::span(3, &[int_vector(&[1, 1, 0]), int_vector(&[0, 1, 1])]);
        let b = Subspace::span(3, &[int_vector(&[1, 2, 1]), int_vector(&[2, 1, -1])]);
        assert_eq!(a, b);
    }

    #[test]
    fn quotient_kills_subspace() {
        let q = quotient_map(&Subspace::full(2), &Subspace::coordinate(2, &[0])).unwrap();
        assert_eq!(q.dim(), 1);
        assert!(is_zero_vector(&q.project(&int_vector(&[5, 0]))));
        assert_eq!(q.project(&q.lifts[0]), int_vector(&[1]));
    }

    #[test]
    fn preimage_and_restrict() {
        let n = n1();
        let pre = Subspace::zero(4).preimage(&n);
        assert_eq!(pre, Subspace::kernel(&n));
        let k = Subspace::kernel(&n);
        assert!(k.restrict(&n).unwrap().is_zero());
        assert!(Subspace::coordinate(4, &[2]).restrict(&n).is_err());
    }

    #[test]
    fn serde_round_trip() {
        let a = Subspace::span(3, &[int_vector(&[2, 4, 0])]);
        let s = serde_json::to_string(&a).unwrap();
        assert_eq!(serde_json::from_str::<Subspace>(&s).unwrap(), a);
    }
}
