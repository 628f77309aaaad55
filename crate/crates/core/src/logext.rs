//! Truncated logarithm modules `J^{a,b}`, elementary sections
//! `t^α (log t)^k / k!`, the `O[t⁻¹]t^r` toy model, and residue extension of
//! pairings to nearby cycles.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::exact::matrix::{unit_vector, zero_vector, Vector};
use crate::exact::{Matrix, Scalar, Subspace};
use crate::filtration::NilpotentOp;
use crate::{Error, Result};

/// An element `Σ c_k s^k` of `J^{a,b}`, `a ≤ k < b`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LogBlock {
    pub a: i64,
    pub b: i64,
    pub coeffs: BTreeMap<i64, Scalar>,
}

impl LogBlock {
    pub fn new(a: i64, b: i64, coeffs: BTreeMap<i64, Scalar>) -> Result<Self> {
        if a >= b {
            return Err(Error::Invalid(format!("empty log block [{a}, {b})")));
        }
        if let Some(k) = coeffs.keys().find(|&&k| k < a || k >= b) {
            return Err(Error::Invalid(format!("degree {k} outside [{a}, {b})")));
        }
        let coeffs = coeffs.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Ok(LogBlock { a, b, coeffs })
    }

    pub fn monomial(a: i64, b: i64, k: i64) -> Result<Self> {
        LogBlock::new(a, b, BTreeMap::from([(k, Scalar::one())]))
    }

    pub fn basis(a: i64, b: i64) -> Vec<LogBlock> {
        (a..b)
            .map(|k| LogBlock::monomial(a, b, k).expect("in range"))
            .collect()
    }

    pub fn coeff(&self, k: i64) -> Scalar {
        self.coeffs.get(&k).cloned().unwrap_or_else(Scalar::zero)
    }
}

/// `⟨f, g⟩ = Res_{s=0} f(s) g(−s) ds`, i.e. `⟨s^i, s^j⟩ = (−1)^j δ_{i+j,−1}`.
pub fn jab_pairing(f: &LogBlock, g: &LogBlock) -> Scalar {
    let mut acc = Scalar::zero();
    for (&i, x) in &f.coeffs {
        let y = g.coeff(-1 - i);
        if !y.is_zero() {
            acc += &(&(x * &y) * &Scalar::sign_pow(-1 - i));
        }
    }
    acc
}

/// Gram matrix of `J^{a,b}` against `J^{−b,−a}` in the monomial bases.
pub fn jab_gram(a: i64, b: i64) -> Matrix {
    let left = LogBlock::basis(a, b);
    let right = LogBlock::basis(-b, -a);
    Matrix::from_fn(left.len(), right.len(), |i, j| jab_pairing(&left[i], &right[j]))
}

/// An element `Σ_{k=0}^p m_k ⊗ e_{α,k}` of `M_{α,p}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementarySection {
    #[serde(with = "crate::exact::ratstr")]
    pub alpha: BigRational,
    pub p: usize,
    pub components: Vec<Vector>,
}

impl ElementarySection {
    pub fn new(alpha: BigRational, components: Vec<Vector>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::Invalid("elementary section needs p + 1 components".into()));
        }
        let d = components[0].len();
        if components.iter().any(|c| c.len() != d) {
            return Err(Error::DimensionMismatch("elementary section components".into()));
        }
        Ok(ElementarySection {
            alpha,
            p: components.len() - 1,
            components,
        })
    }

    pub fn fiber_dim(&self) -> usize {
        self.components[0].len()
    }

    /// `m ⊗ e_{α,k}`.
    pub fn pure(alpha: BigRational, p: usize, k: usize, m: Vector) -> Self {
        let d = m.len();
        let mut components = vec![zero_vector(d); p + 1];
        components[k] = m;
        ElementarySection {
            alpha,
            p,
            components,
        }
    }

    /// Coordinates in `M^{p+1}`, component-major.
    pub fn flatten(&self) -> Vector {
        self.components.iter().flatten().cloned().collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtendedPairing {
    /// Coefficient of `e_{α,k} ē_{α,l}` summed over `k + l = j`, for `j = 0..=2p`.
    pub product: Vec<Scalar>,
    /// The `k + l = p` coefficient, which the residue at `s = α` picks out.
    pub residue: Scalar,
}

/// `S(Σ μ_k e_k, Σ m_l e_l) = Σ_{k,l} K(μ_k, m_l) e_k ē_l`, with the
/// `k + l = p` part as residue.
pub fn extend_pairing(
    k: &Matrix,
    x: &ElementarySection,
    y: &ElementarySection,
) -> Result<ExtendedPairing> {
    if x.alpha != y.alpha || x.p != y.p {
        return Err(Error::IndexMismatch(format!(
            "({}, {}) vs ({}, {})",
            x.alpha, x.p, y.alpha, y.p
        )));
    }
    if k.rows() != x.fiber_dim() || k.cols() != y.fiber_dim() {
        return Err(Error::DimensionMismatch("base pairing".into()));
    }
    let p = x.p;
    let mut product = vec![Scalar::zero(); 2 * p + 1];
    for (i, mu) in x.components.iter().enumerate() {
        for (j, m) in y.components.iter().enumerate() {
            product[i + j] += &k.bilinear(mu, m);
        }
    }
    let residue = product[p].clone();
    Ok(ExtendedPairing { product, residue })
}

/// `D = N ⊗ 1 + 1 ⊗ L` on `M_{α,p}`, where `L e_k = e_{k−1}` and `N` is
/// the nilpotent part of `t∂_t` on `Gr_α`.
pub fn log_operator(n: &Matrix, p: usize) -> Matrix {
    let shift = Matrix::from_fn(p + 1, p + 1, |i, j| {
        if j == i + 1 {
            Scalar::one()
        } else {
            Scalar::zero()
        }
    });
    // component-major coordinates: block (k, l) of size d
    let d = n.rows();
    Matrix::identity(p + 1).kron(n) + shift.kron(&Matrix::identity(d))
}

#[derive(Clone, Debug, Serialize)]
pub struct NearbyIso {
    pub p: usize,
    /// `m₀ ↦ Σ_k (−N)^k m₀ ⊗ e_{α,k}`, into `M_{α,p}`.
    pub into_kernel: Matrix,
    /// `Σ m_k ⊗ e_{α,k} ↦ Σ_k (−N)^k m_{p−k}`, out of `M_{α,p}`.
    pub from_cokernel: Matrix,
    pub kernel_iso: bool,
    pub cokernel_iso: bool,
    /// `from_cokernel ∘ into_kernel = (p+1)(−N)^p`.
    pub composite: Matrix,
}

/// The maps relating `Gr_α` with `ker` and `coker` of `t∂_t − α` on `M_{α,p}`.
/// `t_dt` is the action of `t∂_t` on `Gr_α`; it must be `−α` plus nilpotent.
pub fn nearby_iso(t_dt: &Matrix, alpha: &BigRational, p: usize) -> Result<NearbyIso> {
    let d = t_dt.rows();
    let a = Scalar::from_rational(alpha.clone());
    let n = NilpotentOp::new(t_dt + &Matrix::scalar(d, &a))?;
    let index = n.nilpotency_index();
    if p + 1 < index {
        return Err(Error::TruncationTooShort { p, index });
    }
    let neg = n.matrix().scale(&Scalar::int(-1));
    let mut into = Matrix::zeros(d * (p + 1), d);
    let mut from = Matrix::zeros(d, d * (p + 1));
    for k in 0..=p {
        let block = neg.pow(k);
        for i in 0..d {
            for j in 0..d {
                into.set(k * d + i, j, block.get(i, j).clone());
                from.set(i, (p - k) * d + j, block.get(i, j).clone());
            }
        }
    }
    let dmat = log_operator(n.matrix(), p);
    let ker = Subspace::kernel(&dmat);
    let img = Subspace::image(&dmat);
    let into_img = Subspace::image(&into);
    let kernel_iso = into.rank() == d && into_img == ker;
    let from_kills = (&from * &dmat).is_zero();
    let cokernel_iso = from_kills && from.rank() == d && d * (p + 1) - img.dim() == d;
    let composite = &from * &into;
    Ok(NearbyIso {
        p,
        into_kernel: into,
        from_cokernel: from,
        kernel_iso,
        cokernel_iso,
        composite,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct DescendedPairing {
    /// `ψS(x, y)` for basis vectors: the residue of `S(ι(x), y ⊗ e_{α,p})`.
    pub gram: Matrix,
    /// The residue vanishes on `ι(x) × im(D)`, so the form is defined on the cokernel.
    pub well_defined: bool,
    pub n_symmetric: bool,
    pub nondegenerate: bool,
}

/// Pairing induced on `Gr_α` by pairing `ker D` (via `ι`) against `coker D`.
pub fn descended_pairing(k: &Matrix, n: &NilpotentOp, alpha: &BigRational, p: usize) -> Result<DescendedPairing> {
    let d = n.dim();
    if k.rows() != d || k.cols() != d {
        return Err(Error::DimensionMismatch("base pairing".into()));
    }
    let a = Scalar::from_rational(alpha.clone());
    let t_dt = n.matrix() - &Matrix::scalar(d, &a);
    let iso = nearby_iso(&t_dt, alpha, p)?;
    let iota = |x: &Vector| -> ElementarySection {
        let flat = iso.into_kernel.apply(x);
        let comps = flat.chunks(d.max(1)).map(<[Scalar]>::to_vec).collect::<Vec<_>>();
        let comps = if d == 0 { vec![vec![]; p + 1] } else { comps };
        ElementarySection {
            alpha: alpha.clone(),
            p,
            components: comps,
        }
    };
    let unflatten = |v: &Vector| -> ElementarySection {
        let comps = if d == 0 {
            vec![vec![]; p + 1]
        } else {
            v.chunks(d).map(<[Scalar]>::to_vec).collect()
        };
        ElementarySection {
            alpha: alpha.clone(),
            p,
            components: comps,
        }
    };
    let basis: Vec<Vector> = (0..d).map(|i| unit_vector(d, i)).collect();
    let mut gram = Matrix::zeros(d, d);
    for (i, x) in basis.iter().enumerate() {
        for (j, y) in basis.iter().enumerate() {
            let r = extend_pairing(
                k,
                &iota(x),
                &ElementarySection::pure(alpha.clone(), p, p, y.clone()),
            )?;
            gram.set(i, j, r.residue);
        }
    }
    let dmat = log_operator(n.matrix(), p);
    let mut well_defined = true;
    'outer: for x in &basis {
        for z in 0..d * (p + 1) {
            let dz = dmat.apply(&unit_vector(d * (p + 1), z));
            if !extend_pairing(k, &iota(x), &unflatten(&dz))?.residue.is_zero() {
                well_defined = false;
                break 'outer;
            }
        }
    }
    let nm = n.matrix();
    let n_symmetric = &nm.transpose() * &gram == &gram * nm;
    let nondegenerate = gram.is_invertible();
    Ok(DescendedPairing {
        gram,
        well_defined,
        n_symmetric,
        nondegenerate,
    })
}

/// Pairing of `M ⊗ J^{a,b}` with `M ⊗ J^{−b,−a}`: `K ⊗ ⟨ , ⟩`.
pub fn tensor_pairing(k: &Matrix, a: i64, b: i64) -> Matrix {
    k.kron(&jab_gram(a, b))
}

fn in_open_unit_interval(r: &BigRational) -> bool {
    r.is_negative() && r > &-BigRational::one()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ToyGr {
    pub dim: usize,
    /// `t∂_t` on `Gr_α`, when nonzero.
    #[serde(with = "crate::exact::ratstr::opt")]
    pub eigenvalue: Option<BigRational>,
}

/// The graded table of the `O[t⁻¹]t^r` model: `Gr_α` is one-dimensional with
/// `t∂_t = −α` when `α ∈ r + ℤ`, and zero otherwise.
pub fn toy_gr(r: &BigRational, alpha: &BigRational) -> Result<ToyGr> {
    if !in_open_unit_interval(r) {
        return Err(Error::ROutOfRange(r.to_string()));
    }
    Ok(if (alpha - r).is_integer() {
        ToyGr {
            dim: 1,
            eigenvalue: Some(-alpha.clone()),
        }
    } else {
        ToyGr {
            dim: 0,
            eigenvalue: None,
        }
    })
}

/// Indices in `[lo, hi]` where the toy table jumps.
pub fn toy_jumps(r: &BigRational, lo: i64, hi: i64) -> Result<Vec<BigRational>> {
    if !in_open_unit_interval(r) {
        return Err(Error::ROutOfRange(r.to_string()));
    }
    let lo_r = BigRational::from_integer(lo.into());
    let hi_r = BigRational::from_integer(hi.into());
    let start = (&lo_r - r).ceil().to_integer();
    let mut out = Vec::new();
    let mut n = start;
    loop {
        let a = r + BigRational::from_integer(n.clone());
        if a > hi_r {
            break;
        }
        out.push(a);
        n += 1;
    }
    Ok(out)
}

/// Finite window of `O[t⁻¹]t^r` with basis `t^{n+r}`, `lo ≤ n ≤ hi`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ToyVModule {
    #[serde(with = "crate::exact::ratstr")]
    pub r: BigRational,
    pub lo: i64,
    pub hi: i64,
}

impl ToyVModule {
    pub fn new(r: BigRational, lo: i64, hi: i64) -> Result<Self> {
        if !in_open_unit_interval(&r) {
            return Err(Error::ROutOfRange(r.to_string()));
        }
        if lo > hi {
            return Err(Error::Invalid("empty window".into()));
        }
        Ok(ToyVModule { r, lo, hi })
    }

    pub fn dim(&self) -> usize {
        (self.hi - self.lo + 1) as usize
    }

    pub fn exponent(&self, i: usize) -> BigRational {
        BigRational::from_integer((self.lo + i as i64).into()) + &self.r
    }

    /// `t·t^{n+r} = t^{n+1+r}`, truncated at the top of the window.
    pub fn t(&self) -> Matrix {
        let d = self.dim();
        Matrix::from_fn(d, d, |i, j| {
            if i == j + 1 {
                Scalar::one()
            } else {
                Scalar::zero()
            }
        })
    }

    /// `∂_t·t^{n+r} = (n+r) t^{n−1+r}`, truncated at the bottom of the window.
    pub fn dt(&self) -> Matrix {
        let d = self.dim();
        Matrix::from_fn(d, d, |i, j| {
            if j == i + 1 {
                Scalar::from_rational(self.exponent(j))
            } else {
                Scalar::zero()
            }
        })
    }

    /// `t∂_t`, diagonal with entries `n + r`.
    pub fn t_dt(&self) -> Matrix {
        Matrix::diagonal(
            &(0..self.dim())
                .map(|i| Scalar::from_rational(self.exponent(i)))
                .collect::<Vec<_>>(),
        )
    }

    /// `V_α = span{t^{n+r} : n + r > −α}` inside the window.
    pub fn v_alpha(&self, alpha: &BigRational) -> Subspace {
        let idx: Vec<usize> = (0..self.dim())
            .filter(|&i| self.exponent(i) > -alpha.clone())
            .collect();
        Subspace::coordinate(self.dim(), &idx)
    }

    /// Exponents `n + r` whose basis vector spans a jump of `V`.
    pub fn eigenvalues(&self) -> Vec<BigRational> {
        (0..self.dim()).map(|i| self.exponent(i)).collect()
    }
}

/// `O[t, t⁻¹] ⊗ span{e_0, …, e_{depth−1}}` with `e_k = t^r (log t)^k / k!`,
/// restricted to the exponents `n + r`, `lo ≤ n ≤ hi`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LogLaurentModel {
    #[serde(with = "crate::exact::ratstr")]
    pub r: BigRational,
    pub depth: usize,
}

impl LogLaurentModel {
    /// Basis of `Gr_α`: the `t^{−α} e_k`, present when `−α − r ∈ ℤ`.
    pub fn gr_dim(&self, alpha: &BigRational) -> usize {
        if (-alpha - &self.r).is_integer() {
            self.depth
        } else {
            0
        }
    }

    /// `t∂_t (t^λ e_k) = λ t^λ e_k + t^λ e_{k−1}` on `Gr_α`, `λ = −α`.
    pub fn t_dt_on(&self, alpha: &BigRational) -> Matrix {
        let d = self.gr_dim(alpha);
        let lam = Scalar::from_rational(-alpha.clone());
        Matrix::from_fn(d, d, |i, j| {
            if i == j {
                lam.clone()
            } else if j == i + 1 {
                Scalar::one()
            } else {
                Scalar::zero()
            }
        })
    }

    /// `∂_t: Gr_α → Gr_{α+1}`, i.e. `t^λ e_k ↦ λ t^{λ−1} e_k + t^{λ−1} e_{k−1}`.
    pub fn dt_between(&self, alpha: &BigRational) -> Matrix {
        let src = self.gr_dim(alpha);
        let dst = self.gr_dim(&(alpha + BigRational::one()));
        let lam = Scalar::from_rational(-alpha.clone());
        Matrix::from_fn(dst, src, |i, j| {
            if i == j {
                lam.clone()
            } else if j == i + 1 {
                Scalar::one()
            } else {
                Scalar::zero()
            }
        })
    }

    /// `t: Gr_α → Gr_{α−1}`, the identity on the `e_k`.
    pub fn t_between(&self, alpha: &BigRational) -> Matrix {
        let src = self.gr_dim(alpha);
        let dst = self.gr_dim(&(alpha - BigRational::one()));
        Matrix::from_fn(dst, src, |i, j| {
            if i == j {
                Scalar::one()
            } else {
                Scalar::zero()
            }
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CanVar {
    /// `Can = −∂_t: Gr_{−1} → Gr_0`.
    pub can: Matrix,
    /// `Var = t: Gr_0 → Gr_{−1}`.
    pub var: Matrix,
    /// `Var∘Can` on `Gr_{−1}`.
    pub var_can: Matrix,
    /// `Can∘Var` on `Gr_0`.
    pub can_var: Matrix,
    /// `Can∘Var = −∂_t t` on `Gr_0`.
    pub matches_vanishing_n: bool,
    /// `Var∘Can = −t∂_t` on `Gr_{−1}`.
    pub matches_nearby_n: bool,
}

pub fn can_var(model: &LogLaurentModel) -> CanVar {
    let m1 = -BigRational::one();
    let z = BigRational::zero();
    let can = model.dt_between(&m1).scale(&Scalar::int(-1));
    let var = model.t_between(&z);
    let var_can = &var * &can;
    let can_var = &can * &var;
    // ∂_t t on Gr_0 = t∂_t + 1
    let d0 = model.gr_dim(&z);
    let dt_t = &model.t_dt_on(&z) + &Matrix::identity(d0);
    let matches_vanishing_n = can_var == dt_t.scale(&Scalar::int(-1));
    let matches_nearby_n = var_can == model.t_dt_on(&m1).scale(&Scalar::int(-1));
    CanVar {
        can,
        var,
        var_can,
        can_var,
        matches_vanishing_n,
        matches_nearby_n,
    }
}

/// Which graded piece serves as the vanishing-cycle summand at `λ = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VanishingIndex {
    /// `φ = ⊕_{−1<α<0} Gr^α ⊕ Gr^{−1}`.
    MinusOne,
    /// `φ = ⊕_{−1<α<0} Gr^α ⊕ Gr^0`.
    Zero,
}

/// Dimensions of `ψ = ⊕_{−1<α≤0} Gr^α` and `φ` in the toy table.
pub fn toy_nearby_vanishing(r: &BigRational, index: VanishingIndex) -> Result<(usize, usize)> {
    let jumps = toy_jumps(r, -1, 0)?;
    let open: usize = jumps
        .iter()
        .filter(|a| a.is_negative() && **a > -BigRational::one())
        .count();
    let at = |x: i64| -> Result<usize> { Ok(toy_gr(r, &BigRational::from_integer(x.into()))?.dim) };
    let psi = open + at(0)?;
    let phi = open
        + match index {
            VanishingIndex::MinusOne => at(-1)?,
            VanishingIndex::Zero => at(0)?,
        };
    Ok((psi, phi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::flag::{rat, ratio};

    #[test]
    fn residue_rule() {
        let one = LogBlock::monomial(-1, 1, 0).unwrap();
        let inv = LogBlock::monomial(-1, 1, -1).unwrap();
        assert_eq!(jab_pairing(&one, &one), Scalar::zero());
        assert_eq!(jab_pairing(&inv, &one), Scalar::int(1));
        assert_eq!(jab_pairing(&one, &inv), Scalar::int(-1));
        for a in -3..3 {
            for b in a + 1..=3 {
                assert!(jab_gram(a, b).is_invertible(), "J^{{{a},{b}}}");
            }
        }
    }

    #[test]
    fn extend_pairing_examples() {
        let k = Matrix::identity(1);
        let s = |a: i64, b: i64| {
            ElementarySection::new(rat(0), vec![vec![Scalar::int(a)], vec![Scalar::int(b)]]).unwrap()
        };
        assert_eq!(extend_pairing(&k, &s(1, 0), &s(1, 0)).unwrap().residue, Scalar::zero());
        assert_eq!(extend_pairing(&k, &s(0, 1), &s(1, 0)).unwrap().residue, Scalar::int(1));
        let z = Matrix::zeros(1, 1);
        assert_eq!(extend_pairing(&z, &s(0, 1), &s(1, 0)).unwrap().residue, Scalar::zero());
        let other = ElementarySection::new(ratio(1, 2), vec![vec![Scalar::int(1)]]).unwrap();
        assert!(matches!(
            extend_pairing(&k, &s(1, 0), &other),
            Err(Error::IndexMismatch(_))
        ));
    }

    #[test]
    fn nearby_iso_examples() {
        let alpha = ratio(-1, 2);
        // t∂_t acts by −α on a one-dimensional Gr
        let r = nearby_iso(&Matrix::scalar(1, &Scalar::frac(1, 2)), &alpha, 0).unwrap();
        assert!(r.kernel_iso && r.cokernel_iso);
        let jordan = &Matrix::scalar(2, &Scalar::frac(1, 2)) + &Matrix::from_ints(&[&[0, 1], &[0, 0]]);
        let r = nearby_iso(&jordan, &alpha, 1).unwrap();
        assert!(r.kernel_iso && r.cokernel_iso);
        assert!(matches!(
            nearby_iso(&jordan, &alpha, 0),
            Err(Error::TruncationTooShort { p: 0, index: 2 })
        ));
    }

    #[test]
    fn toy_table() {
        let h = ratio(-1, 2);
        assert_eq!(
            toy_gr(&h, &ratio(1, 2)).unwrap(),
            ToyGr {
                dim: 1,
                eigenvalue: Some(ratio(-1, 2))
            }
        );
        assert_eq!(toy_gr(&h, &ratio(1, 3)).unwrap().dim, 0);
        assert_eq!(toy_gr(&ratio(-1, 3), &ratio(-1, 3)).unwrap().dim, 1);
        assert!(matches!(toy_gr(&rat(0), &rat(0)), Err(Error::ROutOfRange(_))));
        assert_eq!(toy_jumps(&h, -2, 2).unwrap().len(), 4);
        assert_eq!(toy_nearby_vanishing(&h, VanishingIndex::Zero).unwrap(), (1, 1));
    }

    #[test]
    fn toy_module_actions() {
        let m = ToyVModule::new(ratio(-1, 2), -2, 2).unwrap();
        assert_eq!(&m.t() * &m.dt(), {
            // t∂_t except at the window's lowest vector, where ∂_t truncates
            let mut d = m.t_dt();
            d.set(0, 0, Scalar::zero());
            d
        });
        assert!(m.v_alpha(&ratio(1, 2)).dim() < m.v_alpha(&ratio(3, 2)).dim());
    }

    #[test]
    fn can_var_models() {
        let toy = LogLaurentModel {
            r: ratio(-1, 2),
            depth: 1,
        };
        let cv = can_var(&toy);
        assert_eq!((cv.can.rows(), cv.can.cols()), (0, 0));
        let unipotent = LogLaurentModel {
            r: rat(0),
            depth: 2,
        };
        let cv = can_var(&unipotent);
        assert!(cv.matches_vanishing_n && cv.matches_nearby_n);
        assert_eq!(cv.can.rows(), 2);
        let zero = LogLaurentModel { r: rat(0), depth: 0 };
        assert!(can_var(&zero).can_var.is_zero());
    }

    #[test]
    fn descended_pairing_on_jordan_block() {
        // N = shift, K = exchange matrix: NᵀK = KN
        let n = NilpotentOp::new(Matrix::from_ints(&[&[0, 1, 0], &[0, 0, 1], &[0, 0, 0]])).unwrap();
        let k = Matrix::from_ints(&[&[0, 0, 1], &[0, 1, 0], &[1, 0, 0]]);
        let d = descended_pairing(&k, &n, &ratio(-1, 2), 2).unwrap();
        assert!(d.well_defined && d.n_symmetric && d.nondegenerate);
        // a base pairing that is not N-symmetric does not descend
        let d = descended_pairing(&Matrix::identity(3), &n, &ratio(-1, 2), 2).unwrap();
        assert!(!d.well_defined);
    }
}
