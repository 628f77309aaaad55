//! Perverse sheaves on the disk as quivers `ψ ⇄ φ`, the gluing-diagram
//! equivalence, and the three extensions of a local system across the origin.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::exact::{cyclotomic_exponents, Matrix, Scalar, Subspace, DEFAULT_CYCLOTOMIC_BOUND};
use crate::{Error, Result};

/// `ψ ⇄ φ` with `c: ψ → φ` (can) and `v: φ → ψ` (var).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiskQuiver {
    psi: usize,
    phi: usize,
    c: Matrix,
    v: Matrix,
}

impl DiskQuiver {
    pub fn new(psi: usize, phi: usize, c: Matrix, v: Matrix) -> Result<Self> {
        let c = crate::exact::matrix::matrix_with_shape(&c, phi, psi)?;
        let v = crate::exact::matrix::matrix_with_shape(&v, psi, phi)?;
        Ok(DiskQuiver { psi, phi, c, v })
    }

    pub fn zero() -> Self {
        DiskQuiver {
            psi: 0,
            phi: 0,
            c: Matrix::zeros(0, 0),
            v: Matrix::zeros(0, 0),
        }
    }

    pub fn psi_dim(&self) -> usize {
        self.psi
    }

    pub fn phi_dim(&self) -> usize {
        self.phi
    }

    pub fn can(&self) -> &Matrix {
        &self.c
    }

    pub fn var(&self) -> &Matrix {
        &self.v
    }

    /// `T = id_ψ + v∘c`.
    pub fn monodromy(&self) -> Matrix {
        &Matrix::identity(self.psi) + &(&self.v * &self.c)
    }

    /// `(ψ*, φ*, vᵀ, cᵀ)`.
    pub fn dual(&self) -> DiskQuiver {
        DiskQuiver {
            psi: self.psi,
            phi: self.phi,
            c: self.v.transpose(),
            v: self.c.transpose(),
        }
    }

    /// `im c` and `ker v` in `φ`, and whether `φ = im c ⊕ ker v`.
    pub fn vanishing_decomposition(&self) -> VanishingDecomposition {
        let image_c = Subspace::image(&self.c);
        let kernel_v = Subspace::kernel(&self.v);
        let direct_sum = image_c.intersect(&kernel_v).is_zero()
            && image_c.dim() + kernel_v.dim() == self.phi;
        VanishingDecomposition {
            image_c,
            kernel_v,
            direct_sum,
        }
    }

    /// Largest sub-quiver and quotient quiver with `ψ = 0`.
    pub fn minimality(&self) -> Minimality {
        let sub = Subspace::kernel(&self.v).dim();
        let quotient = self.phi - self.c.rank();
        Minimality {
            c_surjective: quotient == 0,
            v_injective: sub == 0,
            origin_subobject_dim: sub,
            origin_quotient_dim: quotient,
            minimal: sub == 0 && quotient == 0,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VanishingDecomposition {
    pub image_c: Subspace,
    pub kernel_v: Subspace,
    pub direct_sum: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Minimality {
    pub c_surjective: bool,
    pub v_injective: bool,
    pub origin_subobject_dim: usize,
    pub origin_quotient_dim: usize,
    pub minimal: bool,
}

/// A pair of linear maps `a: ψ → ψ'`, `b: φ → φ'`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuiverMorphism {
    pub a: Matrix,
    pub b: Matrix,
}

impl QuiverMorphism {
    pub fn identity(q: &DiskQuiver) -> Self {
        QuiverMorphism {
            a: Matrix::identity(q.psi),
            b: Matrix::identity(q.phi),
        }
    }

    /// `b∘c = c'∘a` and `a∘v = v'∘b`.
    pub fn is_morphism(&self, src: &DiskQuiver, dst: &DiskQuiver) -> bool {
        self.a.rows() == dst.psi
            && self.a.cols() == src.psi
            && self.b.rows() == dst.phi
            && self.b.cols() == src.phi
            && &self.b * &src.c == &dst.c * &self.a
            && &self.a * &src.v == &dst.v * &self.b
    }

    pub fn is_isomorphism(&self, src: &DiskQuiver, dst: &DiskQuiver) -> bool {
        self.is_morphism(src, dst) && self.a.is_invertible() && self.b.is_invertible()
    }
}

#[derive(Serialize, Deserialize)]
struct DiskQuiverJson {
    psi_dim: usize,
    phi_dim: usize,
    c: Matrix,
    v: Matrix,
}

impl Serialize for DiskQuiver {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        DiskQuiverJson {
            psi_dim: self.psi,
            phi_dim: self.phi,
            c: self.c.clone(),
            v: self.v.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for DiskQuiver {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = DiskQuiverJson::deserialize(d)?;
        DiskQuiver::new(j.psi_dim, j.phi_dim, j.c, j.v).map_err(serde::de::Error::custom)
    }
}

/// Gluing data `V0 ⇄ V1` with `u: V1 → V0` and `v: V0 → V1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawGluing")]
pub struct GluingDiagram {
    pub v0: usize,
    pub v1: usize,
    pub u: Matrix,
    pub v: Matrix,
}

#[derive(Deserialize)]
struct RawGluing {
    v0: usize,
    v1: usize,
    u: Matrix,
    v: Matrix,
}

impl TryFrom<RawGluing> for GluingDiagram {
    type Error = Error;

    fn try_from(r: RawGluing) -> Result<Self> {
        GluingDiagram::new(r.v0, r.v1, r.u, r.v)
    }
}

impl GluingDiagram {
    pub fn new(v0: usize, v1: usize, u: Matrix, v: Matrix) -> Result<Self> {
        let u = crate::exact::matrix::matrix_with_shape(&u, v0, v1)?;
        let v = crate::exact::matrix::matrix_with_shape(&v, v1, v0)?;
        Ok(GluingDiagram { v0, v1, u, v })
    }

    pub fn uv(&self) -> Matrix {
        &self.u * &self.v
    }

    pub fn vu(&self) -> Matrix {
        &self.v * &self.u
    }
}

/// Both `1 − uv` on `V0` and `1 − vu` on `V1` are invertible.
pub fn check_invertibility(d: &GluingDiagram) -> bool {
    (&Matrix::identity(d.v0) - &d.uv()).is_invertible()
        && (&Matrix::identity(d.v1) - &d.vu()).is_invertible()
}

/// `(ker A^n, im A^n)` for `A` on an `n`-dimensional space.
pub fn fitting_decomposition(a: &Matrix) -> (Subspace, Subspace) {
    let p = a.pow(a.rows());
    (Subspace::kernel(&p), Subspace::image(&p))
}

fn projectors(a: &Matrix) -> (Subspace, Subspace, Matrix, Matrix) {
    let n = a.rows();
    let (nil, inv) = fitting_decomposition(a);
    if n == 0 {
        return (nil, inv, Matrix::zeros(0, 0), Matrix::zeros(0, 0));
    }
    let mut cols = nil.basis();
    cols.extend(inv.basis());
    let b = Matrix::from_cols(&cols, n);
    let binv = b.inverse().expect("Fitting decomposition is direct");
    let k = nil.dim();
    let d_nil = Matrix::diagonal(
        &(0..n)
            .map(|i| if i < k { Scalar::one() } else { Scalar::zero() })
            .collect::<Vec<_>>(),
    );
    let p_nil = &(&b * &d_nil) * &binv;
    let p_inv = &Matrix::identity(n) - &p_nil;
    (nil, inv, p_nil, p_inv)
}

/// Image of a gluing diagram: `((V0, uv)^0, V1, φ = 1 − vu, u, v)` with
/// `u, v` restricted to `(V1, 1 − φ)^0 ⇄ (V0, uv)^0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VanishingDiagram {
    pub v0_prime: Subspace,
    pub v1: usize,
    pub phi: Matrix,
    pub nilpotent_v1: Subspace,
    /// `u` in echelon coordinates, `(V1, 1 − φ)^0 → V0'`.
    pub u: Matrix,
    /// `v` in echelon coordinates, `V0' → (V1, 1 − φ)^0`.
    pub v: Matrix,
}

pub fn gluing_functor(d: &GluingDiagram) -> Result<VanishingDiagram> {
    if !check_invertibility(d) {
        return Err(Error::InvertibilityFailed);
    }
    let (v0_prime, _) = fitting_decomposition(&d.uv());
    let phi = &Matrix::identity(d.v1) - &d.vu();
    let (nilpotent_v1, _) = fitting_decomposition(&d.vu());
    let u = nilpotent_v1.restrict_to(&d.u, &v0_prime)?;
    let v = v0_prime.restrict_to(&d.v, &nilpotent_v1)?;
    Ok(VanishingDiagram {
        v0_prime,
        v1: d.v1,
        phi,
        nilpotent_v1,
        u,
        v,
    })
}

impl VanishingDiagram {
    /// `v∘u = 1 − φ` on `(V1, 1 − φ)^0`.
    pub fn is_valid(&self) -> bool {
        let one_minus = &Matrix::identity(self.v1) - &self.phi;
        match self.nilpotent_v1.restrict(&one_minus) {
            Ok(m) => &self.v * &self.u == m && self.phi.is_invertible(),
            Err(_) => false,
        }
    }

    /// Rebuilds gluing data: `V0 = V0' ⊕ (V1, 1 − φ)^{inv}`, with `v = id` and
    /// `u = 1 − φ` on the invertible part.
    pub fn inverse(&self) -> GluingDiagram {
        let one_minus = &Matrix::identity(self.v1) - &self.phi;
        let (nil, inv, _, _) = projectors(&one_minus);
        let a = self.v0_prime.dim();
        let k = inv.dim();
        let n1 = self.v1;
        let mut cols = nil.basis();
        cols.extend(inv.basis());
        let split = if n1 == 0 {
            Matrix::zeros(0, 0)
        } else {
            Matrix::from_cols(&cols, n1).inverse().expect("direct")
        };
        let inv_block = inv.restrict(&one_minus).expect("invariant");
        // coordinates of V1 split as (nil coords, inv coords)
        let nd = nil.dim();
        let mut u = Matrix::zeros(a + k, n1);
        let u_nil = &self.u * &split.submatrix(&(0..nd).collect::<Vec<_>>(), &(0..n1).collect::<Vec<_>>());
        let u_inv = &inv_block
            * &split.submatrix(&(nd..n1).collect::<Vec<_>>(), &(0..n1).collect::<Vec<_>>());
        for j in 0..n1 {
            for i in 0..a {
                u.set(i, j, u_nil.get(i, j).clone());
            }
            for i in 0..k {
                u.set(a + i, j, u_inv.get(i, j).clone());
            }
        }
        let mut v = Matrix::zeros(n1, a + k);
        let v_nil = &nil.inclusion() * &self.v;
        let v_inv = inv.inclusion();
        for i in 0..n1 {
            for j in 0..a {
                v.set(i, j, v_nil.get(i, j).clone());
            }
            for j in 0..k {
                v.set(i, a + j, v_inv.get(i, j).clone());
            }
        }
        GluingDiagram {
            v0: a + k,
            v1: n1,
            u,
            v,
        }
    }
}

/// Isomorphism `(f0, f1)` from `d` to the reconstruction of its image,
/// with `f1 = id`; `None` if the maps fail to intertwine.
pub fn gluing_round_trip(d: &GluingDiagram) -> Result<Option<(Matrix, Matrix)>> {
    let b = gluing_functor(d)?;
    let back = b.inverse();
    if back.v0 != d.v0 || back.v1 != d.v1 {
        return Ok(None);
    }
    let (nil0, inv0, p_nil, p_inv) = projectors(&d.uv());
    let one_minus = &Matrix::identity(d.v1) - &b.phi;
    let (_, inv1) = fitting_decomposition(&one_minus);
    let a = nil0.dim();
    let mut f0 = Matrix::zeros(d.v0, d.v0);
    for j in 0..d.v0 {
        let e = crate::exact::matrix::unit_vector(d.v0, j);
        let x_nil = p_nil.apply(&e);
        let x_inv = p_inv.apply(&e);
        let c_nil = b.v0_prime.coordinates(&x_nil)?;
        let c_inv = inv1.coordinates(&d.v.apply(&x_inv))?;
        for (i, x) in c_nil.into_iter().chain(c_inv).enumerate() {
            f0.set(i, j, x);
        }
    }
    debug_assert_eq!(inv0.dim() + a, d.v0);
    let f1 = Matrix::identity(d.v1);
    let ok = f0.is_invertible()
        && &f0 * &d.u == &back.u * &f1
        && &f1 * &d.v == &back.v * &f0;
    Ok(ok.then_some((f0, f1)))
}

/// `Σ_{k≥1} (−1)^{k+1} (T − 1)^k / k` for unipotent `T`.
pub fn unipotent_log(t: &Matrix) -> Result<Matrix> {
    let m = t - &Matrix::identity(t.rows());
    let nu = m.nilpotency_index().ok_or(Error::NotUnipotent)?;
    let mut acc = Matrix::zeros(t.rows(), t.rows());
    for k in 1..nu.max(1) {
        let c = Scalar::frac(if k % 2 == 1 { 1 } else { -1 }, k as i64);
        acc = &acc + &m.pow(k).scale(&c);
    }
    Ok(acc)
}

/// `Σ N^k / k!` for nilpotent `N`.
pub fn nilpotent_exp(n: &Matrix) -> Result<Matrix> {
    let nu = n.nilpotency_index().ok_or(Error::NotNilpotent)?;
    let mut acc = Matrix::identity(n.rows());
    let mut fact: i64 = 1;
    for k in 1..nu.max(1) {
        fact *= k as i64;
        acc = &acc + &n.pow(k).scale(&Scalar::frac(1, fact));
    }
    Ok(acc)
}

/// How the nilpotent endomorphism of the unipotent part is read off `T`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    /// `N = T − 1`, so that `T = 1 + v∘c`.
    #[default]
    Unipotent,
    /// `N = log T_u`, so that `T_u = exp(v∘c)`.
    Logarithmic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExtensionKind {
    Shriek,
    Star,
    Intermediate,
}

/// The unipotent/non-unipotent splitting of a quasi-unipotent `T` on `L`.
#[derive(Clone, Debug)]
pub struct UnipotentSplitting {
    pub unipotent: Subspace,
    pub rest: Subspace,
    pub p_unipotent: Matrix,
    pub p_rest: Matrix,
    /// Nilpotent endomorphism on the unipotent part, zero on the rest.
    pub n: Matrix,
    /// `(T − 1)` on the rest, zero on the unipotent part.
    pub m_rest: Matrix,
}

pub fn unipotent_splitting(t: &Matrix, norm: Normalization, bound: u32) -> Result<UnipotentSplitting> {
    if !t.is_square() {
        return Err(Error::NotSquare {
            rows: t.rows(),
            cols: t.cols(),
        });
    }
    cyclotomic_exponents(t, bound).map_err(|_| Error::NotUnipotent)?;
    let d = t.rows();
    let tm1 = t - &Matrix::identity(d);
    let (unipotent, rest, p_unipotent, p_rest) = projectors(&tm1);
    let nu = &tm1 * &p_unipotent;
    let n = match norm {
        Normalization::Unipotent => nu,
        Normalization::Logarithmic => unipotent_log(&(&nu + &Matrix::identity(d)))?,
    };
    let m_rest = &tm1 * &p_rest;
    Ok(UnipotentSplitting {
        unipotent,
        rest,
        p_unipotent,
        p_rest,
        n,
        m_rest,
    })
}

/// `j_! ↦ (L, L, id, N)`, `j_* ↦ (L, L, N, id)`, `j_!* ↦ (L, im N, N, incl)`
/// on the unipotent part; on the rest `c = id` and `v = T − 1`.
pub fn extension(kind: ExtensionKind, t: &Matrix, norm: Normalization, bound: u32) -> Result<DiskQuiver> {
    let s = unipotent_splitting(t, norm, bound)?;
    let d = t.rows();
    let star_c = &s.n + &s.p_rest;
    let star_v = &s.p_unipotent + &s.m_rest;
    match kind {
        ExtensionKind::Shriek => {
            DiskQuiver::new(d, d, Matrix::identity(d), &s.n + &s.m_rest)
        }
        ExtensionKind::Star => DiskQuiver::new(d, d, star_c, star_v),
        ExtensionKind::Intermediate => {
            let phi = Subspace::image(&star_c);
            let c = Subspace::full(d).restrict_to(&star_c, &phi)?;
            let v = &star_v * &phi.inclusion();
            DiskQuiver::new(d, phi.dim(), c, v)
        }
    }
}

pub fn extend_shriek(t: &Matrix) -> Result<DiskQuiver> {
    extension(ExtensionKind::Shriek, t, Normalization::Unipotent, DEFAULT_CYCLOTOMIC_BOUND)
}

pub fn extend_star(t: &Matrix) -> Result<DiskQuiver> {
    extension(ExtensionKind::Star, t, Normalization::Unipotent, DEFAULT_CYCLOTOMIC_BOUND)
}

pub fn intermediate_extension(t: &Matrix) -> Result<DiskQuiver> {
    extension(ExtensionKind::Intermediate, t, Normalization::Unipotent, DEFAULT_CYCLOTOMIC_BOUND)
}

/// The natural map `j_! → j_*`: identity on `ψ`, `c_*` on `φ`.
pub fn shriek_to_star(t: &Matrix) -> Result<QuiverMorphism> {
    let star = extend_star(t)?;
    Ok(QuiverMorphism {
        a: Matrix::identity(t.rows()),
        b: star.can().clone(),
    })
}

/// Whether `j_!*` is the image of `j_! → j_*` (same `φ` inside `L`, same maps).
pub fn intermediate_is_image(t: &Matrix) -> Result<bool> {
    let m = shriek_to_star(t)?;
    let shriek = extend_shriek(t)?;
    let star = extend_star(t)?;
    let mid = intermediate_extension(t)?;
    if !m.is_morphism(&shriek, &star) {
        return Ok(false);
    }
    let image = Subspace::image(&m.b);
    Ok(image.dim() == mid.phi_dim()
        && &image.inclusion() * mid.can() == *star.can()
        && star.var() * &image.inclusion() == *mid.var())
}

fn jordan_shift(len: usize) -> Matrix {
    Matrix::from_fn(len, len, |i, j| {
        if i == j + 1 {
            Scalar::one()
        } else {
            Scalar::zero()
        }
    })
}

/// `T ⊗ (1 + s)` on `L ⊗ J^{a,b}`, where `s` raises the degree of `s^k`.
pub fn twisted_monodromy(t: &Matrix, a: i64, b: i64) -> Matrix {
    let len = (b - a).max(0) as usize;
    let tj = &Matrix::identity(len) + &jordan_shift(len);
    t.kron(&tj)
}

fn window_restriction(dim: usize, from: (i64, i64), to: (i64, i64)) -> Matrix {
    // sends s^k in window `from` to s^k in window `to` when present, else 0
    let lf = (from.1 - from.0) as usize;
    let lt = (to.1 - to.0) as usize;
    let block = Matrix::from_fn(lt, lf, |i, j| {
        if to.0 + i as i64 == from.0 + j as i64 {
            Scalar::one()
        } else {
            Scalar::zero()
        }
    });
    Matrix::identity(dim).kron(&block)
}

#[derive(Clone, Debug, Serialize)]
pub struct LimitIsoReport {
    pub n: usize,
    /// `dim ker(j_! → j_*)` on `L ⊗ J^{0,n}`.
    pub kernel_dim: usize,
    pub unipotent_dim: usize,
    /// Whether the map is already an isomorphism at this finite level.
    pub finite_isomorphism: bool,
    /// The kernel on `L ⊗ J^{0,n+ν}` dies in `L ⊗ J^{0,n}`.
    pub pro_kernel_vanishes: bool,
    /// The cokernel on `L ⊗ J^{0,n}` dies in `L ⊗ J^{−ν,n}`.
    pub ind_cokernel_vanishes: bool,
    /// Kernel equals the unipotent nearby part and both limits kill the defect.
    pub holds: bool,
}

/// Finite shadow of `j_* M^{−∞,∞} = j_! M^{−∞,∞}` for `M = L ⊗ J^{0,n}`.
pub fn limit_isomorphism(t: &Matrix, n: usize) -> Result<LimitIsoReport> {
    let s = unipotent_splitting(t, Normalization::Unipotent, DEFAULT_CYCLOTOMIC_BOUND)?;
    let d = t.rows();
    let nu = s.n.nilpotency_index().unwrap_or(0).max(1) as i64;
    let n_i = n as i64;
    let defect = |a: i64, b: i64| -> Matrix {
        &twisted_monodromy(t, a, b) - &Matrix::identity(d * (b - a).max(0) as usize)
    };
    let base = defect(0, n_i);
    let ker = Subspace::kernel(&base);
    let kernel_dim = ker.dim();
    let finite_isomorphism = base.is_invertible();

    let big = defect(0, n_i + nu);
    let restrict = window_restriction(d, (0, n_i + nu), (0, n_i));
    let pro_kernel_vanishes = Subspace::kernel(&big).map(&restrict).is_zero();

    let wide = defect(-nu, n_i);
    let include = window_restriction(d, (0, n_i), (-nu, n_i));
    let ind_cokernel_vanishes = Subspace::image(&wide)
        .contains_subspace(&Subspace::image(&include));

    let unipotent_dim = s.unipotent.dim();
    Ok(LimitIsoReport {
        n,
        kernel_dim,
        unipotent_dim,
        finite_isomorphism,
        pro_kernel_vanishes,
        ind_cokernel_vanishes,
        holds: kernel_dim == unipotent_dim && pro_kernel_vanishes && ind_cokernel_vanishes,
    })
}

/// Gluing data `(M_U, M_D, u, v)` with nilpotent `N` on `M_U`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GluingData {
    pub n: Matrix,
    pub u: Matrix,
    pub v: Matrix,
}

impl GluingData {
    /// `v∘u = N`.
    pub fn is_consistent(&self) -> bool {
        self.v.cols() == self.u.rows() && &self.v * &self.u == self.n
    }

    pub fn as_quiver(&self) -> Result<DiskQuiver> {
        DiskQuiver::new(self.n.rows(), self.u.rows(), self.u.clone(), self.v.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn jordan2() -> Matrix {
        Matrix::from_ints(&[&[1, 1], &[0, 1]])
    }

    #[test]
    fn monodromy_of_extensions() {
        let t = jordan2();
        assert_eq!(extend_shriek(&t).unwrap().monodromy(), t);
        assert_eq!(extend_star(&t).unwrap().monodromy(), t);
        assert_eq!(intermediate_extension(&t).unwrap().monodromy(), t);
        let mid = intermediate_extension(&t).unwrap();
        assert_eq!(mid.phi_dim(), 1);
        assert!(mid.minimality().minimal);
        assert!(intermediate_is_image(&t).unwrap());
    }

    #[test]
    fn trivial_and_non_unipotent() {
        let mid = intermediate_extension(&Matrix::identity(2)).unwrap();
        assert_eq!(mid.phi_dim(), 0);
        let t = Matrix::scalar(2, &Scalar::int(-1));
        let a = extend_shriek(&t).unwrap();
        let b = extend_star(&t).unwrap();
        let c = intermediate_extension(&t).unwrap();
        assert_eq!(a, b);
        assert_eq!(b, c);
        assert_eq!(a.phi_dim(), 2);
        assert!(matches!(
            extend_star(&Matrix::from_ints(&[&[2, 1], &[1, 1]])),
            Err(Error::NotUnipotent)
        ));
    }

    #[test]
    fn invertibility_examples() {
        let z = GluingDiagram::new(1, 1, Matrix::zeros(1, 1), Matrix::zeros(1, 1)).unwrap();
        assert!(check_invertibility(&z));
        let id = GluingDiagram::new(1, 1, Matrix::identity(1), Matrix::identity(1)).unwrap();
        assert!(!check_invertibility(&id));
        assert!(matches!(gluing_functor(&id), Err(Error::InvertibilityFailed)));
        let half = GluingDiagram::new(
            1,
            1,
            Matrix::identity(1),
            Matrix::scalar(1, &Scalar::frac(1, 2)),
        )
        .unwrap();
        assert!(check_invertibility(&half));
    }

    #[test]
    fn gluing_examples() {
        let d = GluingDiagram::new(1, 1, Matrix::identity(1), Matrix::zeros(1, 1)).unwrap();
        let b = gluing_functor(&d).unwrap();
        assert_eq!(b.v0_prime.dim(), 1);
        assert_eq!(b.phi, Matrix::identity(1));
        assert!(b.is_valid());
        assert!(gluing_round_trip(&d).unwrap().is_some());

        let d = GluingDiagram::new(0, 3, Matrix::zeros(0, 3), Matrix::zeros(3, 0)).unwrap();
        let b = gluing_functor(&d).unwrap();
        assert_eq!(b.phi, Matrix::identity(3));
        assert!(gluing_round_trip(&d).unwrap().is_some());

        let d = GluingDiagram::new(
            2,
            2,
            Matrix::identity(2),
            Matrix::from_ints(&[&[0, 1], &[0, 0]]),
        )
        .unwrap();
        assert!(gluing_round_trip(&d).unwrap().is_some());

        // invertible part of uv is carried by V1
        let d = GluingDiagram::new(
            2,
            1,
            Matrix::from_ints(&[&[2], &[0]]),
            Matrix::from_ints(&[&[1, 0]]),
        )
        .unwrap();
        let b = gluing_functor(&d).unwrap();
        assert_eq!(b.v0_prime.dim(), 1);
        assert!(gluing_round_trip(&d).unwrap().is_some());
    }

    #[test]
    fn duality() {
        let t = jordan2();
        let shriek = extend_shriek(&t).unwrap();
        let star_dual = extend_star(&t.transpose()).unwrap();
        assert!(QuiverMorphism::identity(&shriek).is_isomorphism(&shriek.dual(), &star_dual));
        assert_eq!(shriek.dual().dual(), shriek);
        assert_eq!(DiskQuiver::zero().dual(), DiskQuiver::zero());
    }

    #[test]
    fn vanishing_decompositions() {
        let q = DiskQuiver::new(1, 1, Matrix::identity(1), Matrix::identity(1)).unwrap();
        assert!(q.vanishing_decomposition().direct_sum);
        let mid = intermediate_extension(&jordan2()).unwrap();
        let vd = mid.vanishing_decomposition();
        assert!(vd.kernel_v.is_zero() && vd.direct_sum);
        // for N ≠ 0 the j_* quiver has im c = im N ≠ φ and ker v = 0
        let star = extend_star(&jordan2()).unwrap();
        assert!(!star.vanishing_decomposition().direct_sum);
    }

    #[test]
    fn log_and_exp_are_inverse() {
        let n = Matrix::from_ints(&[&[0, 1, 2], &[0, 0, 3], &[0, 0, 0]]);
        let t = nilpotent_exp(&n).unwrap();
        assert_eq!(unipotent_log(&t).unwrap(), n);
        let q = extension(
            ExtensionKind::Star,
            &t,
            Normalization::Logarithmic,
            DEFAULT_CYCLOTOMIC_BOUND,
        )
        .unwrap();
        assert_eq!(nilpotent_exp(&(q.var() * q.can())).unwrap(), t);
    }

    #[test]
    fn limit_isomorphism_stabilizes() {
        let t = Matrix::from_ints(&[&[1, 1, 0], &[0, 1, 1], &[0, 0, 1]]);
        let r = limit_isomorphism(&t, 3).unwrap();
        assert!(!r.finite_isomorphism);
        assert!(r.holds, "{r:?}");
        let short = limit_isomorphism(&t, 2).unwrap();
        assert!(short.kernel_dim < 3 && !short.holds);
        let mixed = Matrix::block_diag(&[jordan2(), Matrix::scalar(1, &Scalar::int(-1))]);
        let r = limit_isomorphism(&mixed, 3).unwrap();
        assert_eq!(r.unipotent_dim, 2);
        assert!(r.holds);
    }

    #[test]
    fn json_shape() {
        let q = extend_star(&jordan2()).unwrap();
        let s = serde_json::to_string(&q).unwrap();
        assert!(s.contains("psi_dim"));
        assert_eq!(serde_json::from_str::<DiskQuiver>(&s).unwrap(), q);
        let z = serde_json::to_string(&intermediate_extension(&Matrix::identity(2)).unwrap()).unwrap();
        assert!(serde_json::from_str::<DiskQuiver>(&z).is_ok());
    }
}
