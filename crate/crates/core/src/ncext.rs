//! Extension of a polarized structure with commuting nilpotents across a
//! normal-crossing stratum: `H̃ = H[s] / ∏(m_i s − N_i)` with the residue
//! pairing, shifted filtrations, and the Jordan-ring tensor formula.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::exact::congruence::congruent;
use crate::exact::{FlagFiltration, Matrix, Scalar, Subspace};
use crate::filtration::{monodromy_weight_filtration, NilpotentOp};
use crate::{Error, Result};

/// `a_{−1}` of a scalar Laurent polynomial `Σ a_i s^i`.
pub fn laurent_residue(series: &BTreeMap<i64, Scalar>) -> Scalar {
    series.get(&-1).cloned().unwrap_or_else(Scalar::zero)
}

/// Laurent polynomial in `s` with commuting matrix coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentMatrix {
    dim: usize,
    terms: BTreeMap<i64, Matrix>,
}

impl LaurentMatrix {
    pub fn constant(m: Matrix) -> Self {
        LaurentMatrix {
            dim: m.rows(),
            terms: BTreeMap::from([(0, m)]),
        }
    }

    pub fn monomial(dim: usize, k: i64) -> Self {
        LaurentMatrix {
            dim,
            terms: BTreeMap::from([(k, Matrix::identity(dim))]),
        }
    }

    /// `(m s − N)^{−1} = Σ_{a≥0} N^a m^{−a−1} s^{−1−a}`, exact for nilpotent `N`.
    pub fn inverse_linear(n: &NilpotentOp, m: &Scalar) -> Self {
        let minv = m.inv().expect("nonzero multiplicity");
        let mut terms = BTreeMap::new();
        let mut coef = minv.clone();
        for a in 0..n.nilpotency_index().max(1) {
            let t = n.pow(a).scale(&coef);
            if !t.is_zero() {
                terms.insert(-1 - a as i64, t);
            }
            coef = &coef * &minv;
        }
        LaurentMatrix {
            dim: n.dim(),
            terms,
        }
    }

    pub fn mul(&self, o: &LaurentMatrix) -> LaurentMatrix {
        let mut terms: BTreeMap<i64, Matrix> = BTreeMap::new();
        for (i, a) in &self.terms {
            for (j, b) in &o.terms {
                let p = a * b;
                let e = terms
                    .entry(i + j)
                    .or_insert_with(|| Matrix::zeros(self.dim, self.dim));
                *e = &*e + &p;
            }
        }
        terms.retain(|_, m| !m.is_zero());
        LaurentMatrix {
            dim: self.dim,
            terms,
        }
    }

    pub fn coeff(&self, k: i64) -> Matrix {
        self.terms
            .get(&k)
            .cloned()
            .unwrap_or_else(|| Matrix::zeros(self.dim, self.dim))
    }

    /// Coefficient of `s^{−1}`.
    pub fn residue(&self) -> Matrix {
        self.coeff(-1)
    }
}

/// `ℚ[N']/(N'^l)` with basis `N'^0, …, N'^{l−1}` and
/// `S'(N'^i, N'^j) = (−1)^i` when `i + j = l − 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct JordanRing {
    pub l: usize,
    pub n: Matrix,
    pub s: Matrix,
}

pub fn jordan_ring(l: usize) -> Result<JordanRing> {
    if l == 0 {
        return Err(Error::Invalid("Jordan ring needs l ≥ 1".into()));
    }
    let n = Matrix::from_fn(l, l, |i, j| {
        if i == j + 1 {
            Scalar::one()
        } else {
            Scalar::zero()
        }
    });
    let s = Matrix::from_fn(l, l, |i, j| {
        if i + j == l - 1 {
            Scalar::sign_pow(i as i64)
        } else {
            Scalar::zero()
        }
    });
    Ok(JordanRing { l, n, s })
}

/// A polarized structure with commuting nilpotents `N_i` and multiplicities `m_i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolarizedInput {
    pub dim: usize,
    #[serde(rename = "F")]
    pub f: FlagFiltration,
    #[serde(rename = "W")]
    pub w_filt: FlagFiltration,
    #[serde(rename = "N")]
    pub n_list: Vec<Matrix>,
    #[serde(rename = "m", default)]
    pub m_list: Vec<u32>,
    #[serde(rename = "S")]
    pub s: Matrix,
    pub weight: i64,
}

impl PolarizedInput {
    pub fn multiplicity(&self, i: usize) -> u32 {
        self.m_list.get(i).copied().unwrap_or(1)
    }

    pub fn total_n(&self) -> Matrix {
        self.n_list
            .iter()
            .fold(Matrix::zeros(self.dim, self.dim), |acc, n| &acc + n)
    }

    /// Shapes, nilpotency, commutation and `W = W(ΣN_i)[w]`.
    pub fn validate(&self) -> Result<Vec<NilpotentOp>> {
        if self.s.rows() != self.dim || self.s.cols() != self.dim {
            return Err(Error::DimensionMismatch("S".into()));
        }
        if self.f.ambient() != self.dim || self.w_filt.ambient() != self.dim {
            return Err(Error::DimensionMismatch("filtrations".into()));
        }
        if self.m_list.contains(&0) {
            return Err(Error::Invalid("multiplicities must be positive".into()));
        }
        let ops = self
            .n_list
            .iter()
            .map(|n| {
                if n.rows() != self.dim || n.cols() != self.dim {
                    return Err(Error::DimensionMismatch("N_i".into()));
                }
                NilpotentOp::new(n.clone())
            })
            .collect::<Result<Vec<_>>>()?;
        for (i, a) in self.n_list.iter().enumerate() {
            for (j, b) in self.n_list.iter().enumerate().skip(i + 1) {
                if !a.commutes_with(b) {
                    return Err(Error::NonCommutingNilpotents(format!("N_{i} and N_{j}")));
                }
            }
        }
        let total = NilpotentOp::new(self.total_n())?;
        let expected = monodromy_weight_filtration(&total, self.weight).filtration;
        if expected != self.w_filt {
            return Err(Error::HypothesisWViolated(format!(
                "W is not the monodromy filtration of the sum of the N_i centered at {}",
                self.weight
            )));
        }
        Ok(ops)
    }
}

/// The extended structure on `H̃ = ⊕_{0≤j<l} H ⊗ s^j` (block `j` holds `H ⊗ s^j`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtendedStructure {
    pub base_dim: usize,
    pub l: usize,
    pub index_set: Vec<usize>,
    pub s_action: Matrix,
    /// `N_i + m_i s` for `i ∈ I`, `N_i` otherwise.
    pub n_tilde: Vec<Matrix>,
    #[serde(rename = "F")]
    pub f: FlagFiltration,
    #[serde(rename = "W")]
    pub w_filt: FlagFiltration,
    #[serde(rename = "S_tilde")]
    pub s_tilde: Matrix,
    pub weight: i64,
}

impl ExtendedStructure {
    pub fn dim(&self) -> usize {
        self.base_dim * self.l
    }

    /// `s + Σ_{i∈I}(N_i + m_i s) + Σ_{i∉I} N_i`.
    pub fn total_nilpotent(&self) -> Matrix {
        self.n_tilde
            .iter()
            .fold(self.s_action.clone(), |acc, n| &acc + n)
    }
}

fn block_embed(op: &Matrix, l: usize) -> Matrix {
    Matrix::identity(l).kron(op)
}

/// Multiplication by `s` on `H[s]/(∏_{i∈I}(m_i s − N_i))`.
fn companion(ops: &[NilpotentOp], ms: &[Scalar], d: usize) -> Matrix {
    let l = ops.len();
    // monic P(s) = ∏ (s − N_i/m_i), coefficients lowest degree first
    let mut p: Vec<Matrix> = vec![Matrix::identity(d)];
    for (op, m) in ops.iter().zip(ms) {
        let a = op.matrix().scale(&m.inv().expect("nonzero")).scale(&Scalar::int(-1));
        let mut next = vec![Matrix::zeros(d, d); p.len() + 1];
        for (k, c) in p.iter().enumerate() {
            next[k + 1] = &next[k + 1] + c;
            next[k] = &next[k] + &(c * &a);
        }
        p = next;
    }
    let mut s = Matrix::zeros(d * l, d * l);
    for j in 0..l {
        for r in 0..d {
            for c in 0..d {
                if j + 1 < l && r == c {
                    s.set((j + 1) * d + r, j * d + c, Scalar::one());
                }
                // s · s^{l−1}u = −Σ_k p_k u s^k
                let v = -p[j].get(r, c).clone();
                if !num_traits::Zero::is_zero(&v) {
                    s.set(j * d + r, (l - 1) * d + c, v);
                }
            }
        }
    }
    s
}

/// Image of `Σ_j G^{k+σj} H ⊗ s^j` in `H̃`, for `σ = ±1` or `±2`.
fn induced_filtration(
    base: &FlagFiltration,
    s_action: &Matrix,
    l: usize,
    stride: i64,
    twist: i64,
) -> Result<FlagFiltration> {
    let d = base.ambient();
    let dim = d * l;
    let jumps: Vec<i64> = base
        .jumps()
        .iter()
        .map(crate::exact::flag::floor_i64)
        .collect();
    let (lo, hi) = match (jumps.iter().min(), jumps.iter().max()) {
        (Some(&a), Some(&b)) => (a, b),
        _ => return Ok(FlagFiltration::trivial(dim, twist, base.is_decreasing())),
    };
    // s^j u for j beyond the top of the base range vanishes from every step
    let reach = (hi - lo).abs() / stride.abs().max(1) + l as i64 + 2;
    let span = |k: i64| -> Subspace {
        let mut parts = Vec::new();
        let mut sj = Matrix::identity(dim);
        for j in 0..reach {
            let piece = base.at_int(k + stride * j);
            let lifted: Vec<Vec<Scalar>> = piece
                .basis()
                .into_iter()
                .map(|u| {
                    let mut v = vec![Scalar::zero(); dim];
                    v[..d].clone_from_slice(&u);
                    sj.apply(&v)
                })
                .collect();
            parts.push(Subspace::span(dim, &lifted));
            sj = s_action * &sj;
        }
        Subspace::sum_all(dim, &parts)
    };
    let margin = stride.abs() * (l as i64 + 1);
    let steps: Vec<(i64, Subspace)> = (lo - margin..=hi + margin)
        .map(|k| (k + twist, span(k)))
        .collect();
    if base.is_decreasing() {
        FlagFiltration::decreasing_int(dim, steps)
    } else {
        FlagFiltration::increasing_int(dim, steps)
    }
}

/// Extends `input` across the stratum indexed by `index_set`.
pub fn extend(input: &PolarizedInput, index_set: &[usize]) -> Result<ExtendedStructure> {
    let ops = input.validate()?;
    let mut index_set = index_set.to_vec();
    index_set.sort();
    index_set.dedup();
    if index_set.is_empty() || index_set.iter().any(|&i| i >= ops.len()) {
        return Err(Error::Invalid("index set must be a nonempty subset of the N_i".into()));
    }
    let d = input.dim;
    let l = index_set.len();
    let chosen: Vec<NilpotentOp> = index_set.iter().map(|&i| ops[i].clone()).collect();
    let ms: Vec<Scalar> = index_set
        .iter()
        .map(|&i| Scalar::int(input.multiplicity(i) as i64))
        .collect();
    let s_action = companion(&chosen, &ms, d);

    let n_tilde: Vec<Matrix> = (0..ops.len())
        .map(|i| {
            let base = block_embed(ops[i].matrix(), l);
            if index_set.contains(&i) {
                let m = Scalar::int(input.multiplicity(i) as i64);
                &base + &s_action.scale(&m)
            } else {
                base
            }
        })
        .collect();

    // C_t = coefficient of s^{−t} in ∏ (m_i s − N_i)^{−1}
    let mut inv = LaurentMatrix::constant(Matrix::identity(d));
    for (op, m) in chosen.iter().zip(&ms) {
        inv = inv.mul(&LaurentMatrix::inverse_linear(op, m));
    }
    let mut s_tilde = Matrix::zeros(d * l, d * l);
    for j in 0..l {
        for k in 0..l {
            let block = (&input.s * &inv.coeff(-((j + k + 1) as i64))).scale(&Scalar::sign_pow(j as i64));
            for r in 0..d {
                for c in 0..d {
                    s_tilde.set(j * d + r, k * d + c, block.get(r, c).clone());
                }
            }
        }
    }

    let shift = l as i64 - 1;
    let f = induced_filtration(&input.f, &s_action, l, 1, shift)?;
    let w_filt = induced_filtration(&input.w_filt, &s_action, l, 2, 2 * shift)?;
    Ok(ExtendedStructure {
        base_dim: d,
        l,
        index_set,
        s_action,
        n_tilde,
        f,
        w_filt,
        s_tilde,
        weight: input.weight + shift,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct WeightCheck {
    pub weight: i64,
    pub expected: FlagFiltration,
    pub passes: bool,
}

/// Whether `W` of the extension is the monodromy filtration of
/// `s + Σ(Ñ_i + m_i s)` centered at `w + l − 1`.
pub fn weight_check(ext: &ExtendedStructure, w: i64, l: usize) -> Result<WeightCheck> {
    let total = NilpotentOp::new(ext.total_nilpotent())?;
    let weight = w + l as i64 - 1;
    let expected = monodromy_weight_filtration(&total, weight).filtration;
    let passes = expected == ext.w_filt;
    Ok(WeightCheck {
        weight,
        expected,
        passes,
    })
}

/// Whether `s` and all `Ñ_i` commute pairwise.
pub fn extended_operators_commute(ext: &ExtendedStructure) -> bool {
    let mut all = vec![ext.s_action.clone()];
    all.extend(ext.n_tilde.iter().cloned());
    all.iter()
        .enumerate()
        .all(|(i, a)| all.iter().skip(i + 1).all(|b| a.commutes_with(b)))
}

/// `dim Gr_F^p H̃ = Σ_{0≤j<l} dim Gr_F^{p−l+1+j} H` for all `p`.
pub fn f_shift_consistent(ext: &ExtendedStructure, input: &PolarizedInput) -> bool {
    let shift = ext.l as i64 - 1;
    let (lo, hi) = ext.f.integer_range().unwrap_or((0, 0));
    (lo - 1..=hi + 1).all(|p| {
        let lhs = ext.f.graded_dim_int(p);
        let rhs: usize = (0..ext.l as i64)
            .map(|j| input.f.graded_dim_int(p - shift + j))
            .sum();
        lhs == rhs
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct TensorCheck {
    /// `S̃ = (∏ m_i)^{−1} S' ⊗ S` and `s = N' ⊗ 1` exactly (all `N_i = 0`).
    pub exact: Option<bool>,
    /// `S̃` congruent to `(∏ m_i)^{−1} S' ⊗ S` over ℚ.
    pub congruent: bool,
}

/// `(H̃, S̃) ≅ (H, S) ⊗ (ℚ[N']/(N'^l), S')`.
pub fn tensor_check(input: &PolarizedInput, ext: &ExtendedStructure) -> Result<TensorCheck> {
    let ring = jordan_ring(ext.l)?;
    let mut scale = Scalar::one();
    for &i in &ext.index_set {
        scale = &scale * &Scalar::frac(1, input.multiplicity(i) as i64);
    }
    let product = ring.s.kron(&input.s).scale(&scale);
    let all_zero = ext
        .index_set
        .iter()
        .all(|&i| input.n_list[i].is_zero());
    let exact = if all_zero {
        Some(ext.s_tilde == product && ext.s_action == ring.n.kron(&Matrix::identity(input.dim)))
    } else {
        None
    };
    let congruent = congruent(&ext.s_tilde, &product)?;
    Ok(TensorCheck { exact, congruent })
}

#[derive(Clone, Debug, Serialize)]
pub struct CanVarCheck {
    pub dropped: usize,
    /// `Can = N_i − m_i s: H̃_{I∖i} → H̃_I`.
    pub can: Matrix,
    /// `Var`: the projection `H̃_I → H̃_{I∖i}`.
    pub var: Matrix,
    /// `S̃_I(Can x, y) = S̃_{I∖i}(x, Var y)`.
    pub compatible: bool,
}

/// Compares the extension over `I` with the one over `I ∖ {i}` through
/// `Can` (multiplication by `N_i − m_i s`) and `Var` (projection).
pub fn can_var_compatibility(input: &PolarizedInput, index_set: &[usize], dropped: usize) -> Result<CanVarCheck> {
    let big = extend(input, index_set)?;
    let rest: Vec<usize> = big.index_set.iter().copied().filter(|&i| i != dropped).collect();
    if rest.len() + 1 != big.index_set.len() || rest.is_empty() {
        return Err(Error::Invalid("dropped index must be in I and |I| ≥ 2".into()));
    }
    let small = extend(input, &rest)?;
    let d = input.dim;
    let (lb, ls) = (big.l, small.l);
    // H[s] polynomials of degree < ls embed in H̃_I directly
    let embed = Matrix::from_fn(d * lb, d * ls, |i, j| {
        if i == j {
            Scalar::one()
        } else {
            Scalar::zero()
        }
    });
    let m = Scalar::int(input.multiplicity(dropped) as i64);
    let mult = &block_embed(&input.n_list[dropped], lb) - &big.s_action.scale(&m);
    let can = &mult * &embed;
    // reduce H̃_I representatives modulo the smaller product
    let mut var = Matrix::zeros(d * ls, d * lb);
    let mut sj = Matrix::identity(d * ls);
    for j in 0..lb {
        for r in 0..d {
            let mut e = vec![Scalar::zero(); d * ls];
            e[r] = Scalar::one();
            let col = sj.apply(&e);
            for (i, x) in col.into_iter().enumerate() {
                var.set(i, j * d + r, x);
            }
        }
        sj = &small.s_action * &sj;
    }
    let lhs = &can.transpose() * &big.s_tilde;
    let rhs = &small.s_tilde * &var;
    Ok(CanVarCheck {
        dropped,
        compatible: lhs == rhs,
        can,
        var,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn point_input(l: usize) -> PolarizedInput {
        PolarizedInput {
            dim: 1,
            f: FlagFiltration::trivial(1, 0, true),
            w_filt: FlagFiltration::trivial(1, 0, false),
            n_list: vec![Matrix::zeros(1, 1); l],
            m_list: vec![],
            s: Matrix::identity(1),
            weight: 0,
        }
    }

    #[test]
    fn residues() {
        assert_eq!(laurent_residue(&BTreeMap::from([(0, Scalar::int(1))])), Scalar::zero());
        let s = BTreeMap::from([(-1, Scalar::int(3)), (2, Scalar::int(1))]);
        assert_eq!(laurent_residue(&s), Scalar::int(3));
        let n = NilpotentOp::new(Matrix::from_ints(&[&[0, 1], &[0, 0]])).unwrap();
        let inv = LaurentMatrix::inverse_linear(&n, &Scalar::one());
        assert_eq!(inv.residue(), Matrix::identity(2));
        assert_eq!(inv.mul(&LaurentMatrix::monomial(2, 1)).residue(), n.matrix().clone());
    }

    #[test]
    fn jordan_rings() {
        assert_eq!(jordan_ring(1).unwrap().s, Matrix::identity(1));
        let r = jordan_ring(2).unwrap();
        assert_eq!(r.s, Matrix::from_ints(&[&[0, 1], &[-1, 0]]));
        let r = jordan_ring(3).unwrap();
        assert_eq!(r.s, Matrix::from_ints(&[&[0, 0, 1], &[0, -1, 0], &[1, 0, 0]]));
    }

    #[test]
    fn single_index_is_identity() {
        let input = point_input(1);
        let ext = extend(&input, &[0]).unwrap();
        assert_eq!(ext.s_tilde, input.s);
        assert_eq!(ext.w_filt, input.w_filt);
        assert!(weight_check(&ext, 0, 1).unwrap().passes);
    }

    #[test]
    fn two_trivial_nilpotents() {
        let input = point_input(2);
        let ext = extend(&input, &[0, 1]).unwrap();
        assert_eq!(ext.s_tilde, jordan_ring(2).unwrap().s);
        // S̃(u, s v) = 1 and S̃(s u, v) = −1
        assert_eq!(ext.s_tilde.get(0, 1), &Scalar::int(1));
        assert_eq!(ext.s_tilde.get(1, 0), &Scalar::int(-1));
        let wc = weight_check(&ext, 0, 2).unwrap();
        assert!(wc.passes, "{:?} vs {:?}", wc.expected, ext.w_filt);
        assert_eq!(ext.w_filt.graded_dim_int(0), 1);
        assert_eq!(ext.w_filt.graded_dim_int(2), 1);
        let t = tensor_check(&input, &ext).unwrap();
        assert_eq!(t.exact, Some(true));
        assert!(t.congruent);
        assert!(f_shift_consistent(&ext, &input));
        assert!(extended_operators_commute(&ext));
        assert!(can_var_compatibility(&input, &[0, 1], 1).unwrap().compatible);
    }

    #[test]
    fn mis_shifted_weight_fails() {
        let ext = extend(&point_input(2), &[0, 1]).unwrap();
        assert!(!weight_check(&ext, 1, 2).unwrap().passes);
    }

    #[test]
    fn hypothesis_violations() {
        let mut input = point_input(1);
        input.w_filt = FlagFiltration::trivial(1, 3, false);
        assert!(matches!(extend(&input, &[0]), Err(Error::HypothesisWViolated(_))));
        let mut input = PolarizedInput {
            dim: 2,
            f: FlagFiltration::trivial(2, 0, true),
            w_filt: FlagFiltration::trivial(2, 0, false),
            n_list: vec![
                Matrix::from_ints(&[&[0, 1], &[0, 0]]),
                Matrix::from_ints(&[&[0, 0], &[1, 0]]),
            ],
            m_list: vec![],
            s: Matrix::identity(2),
            weight: 0,
        };
        assert!(matches!(
            extend(&input, &[0, 1]),
            Err(Error::NonCommutingNilpotents(_))
        ));
        input.n_list.pop();
        assert!(matches!(extend(&input, &[0]), Err(Error::HypothesisWViolated(_))));
    }

    #[test]
    fn jordan_block_extension() {
        // weight 1, N = shift on a 2-dim block, S' of the 2-dim Jordan ring
        let ring = jordan_ring(2).unwrap();
        let n = NilpotentOp::new(ring.n.clone()).unwrap();
        let w = monodromy_weight_filtration(&n, 1).filtration;
        let input = PolarizedInput {
            dim: 2,
            f: FlagFiltration::trivial(2, 0, true),
            w_filt: w,
            n_list: vec![ring.n.clone(), ring.n.clone()],
            m_list: vec![1, 2],
            s: ring.s.clone(),
            weight: 1,
        };
        let ext = extend(&input, &[0, 1]).unwrap();
        assert!(extended_operators_commute(&ext));
        assert!(ext.s_tilde.is_invertible());
        let wc = weight_check(&ext, 1, 2).unwrap();
        assert!(wc.passes, "{:?} vs {:?}", wc.expected, ext.w_filt);
        assert!(tensor_check(&input, &ext).unwrap().congruent);
        assert!(can_var_compatibility(&input, &[0, 1], 0).unwrap().compatible);
    }
}
