//! Split mixed Hodge structures, polarizations and the bilinear-relation,
//! positivity and admissibility checks.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::exact::matrix::{conj_vector, Vector};
use crate::exact::{FlagFiltration, Matrix, Scalar, Subspace};
use crate::filtration::{relative_monodromy_filtration, Centering, NilpotentOp, RelativeFiltration};
use crate::{Error, Result};

pub type HodgeType = (i64, i64);

/// A mixed Hodge structure given by its splitting `I^{p,q}`.
///
/// `conj` is the matrix `C` with `conj(x) = C·x̄`; it must satisfy `C·C̄ = 1`
/// and carry `I^{p,q}` onto `I^{q,p}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitMHS {
    dim: usize,
    pieces: BTreeMap<HodgeType, Subspace>,
    conj: Matrix,
}

impl SplitMHS {
    pub fn new(dim: usize, pieces: BTreeMap<HodgeType, Subspace>, conj: Matrix) -> Result<Self> {
        if conj.rows() != dim || conj.cols() != dim {
            return Err(Error::DimensionMismatch("conjugation matrix".into()));
        }
        let pieces: BTreeMap<HodgeType, Subspace> =
            pieces.into_iter().filter(|(_, s)| !s.is_zero()).collect();
        for s in pieces.values() {
            if s.ambient() != dim {
                return Err(Error::DimensionMismatch("bigrading piece ambient".into()));
            }
        }
        let total: usize = pieces.values().map(Subspace::dim).sum();
        let span = Subspace::sum_all(dim, &pieces.values().cloned().collect::<Vec<_>>());
        if total != dim || span.dim() != dim {
            return Err(Error::InvalidStructure(
                "bigrading pieces must form a direct sum decomposition".into(),
            ));
        }
        if &conj * &conj.conj() != Matrix::identity(dim) {
            return Err(Error::InvalidStructure("conjugation is not an involution".into()));
        }
        let h = SplitMHS { dim, pieces, conj };
        for (&(p, q), s) in &h.pieces {
            let target = h.piece(q, p);
            for v in s.basis() {
                if !target.contains(&h.conj_of(&v)) {
                    return Err(Error::InvalidStructure(format!(
                        "conjugation does not map I^{{{p},{q}}} onto I^{{{q},{p}}}"
                    )));
                }
            }
        }
        Ok(h)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn pieces(&self) -> &BTreeMap<HodgeType, Subspace> {
        &self.pieces
    }

    pub fn piece(&self, p: i64, q: i64) -> Subspace {
        self.pieces
            .get(&(p, q))
            .cloned()
            .unwrap_or_else(|| Subspace::zero(self.dim))
    }

    pub fn conj_matrix(&self) -> &Matrix {
        &self.conj
    }

    pub fn conj_of(&self, x: &[Scalar]) -> Vector {
        self.conj.apply(&conj_vector(x))
    }

    pub fn hodge_numbers(&self) -> BTreeMap<HodgeType, usize> {
        self.pieces.iter().map(|(&t, s)| (t, s.dim())).collect()
    }

    /// Basis adapted to the bigrading: columns of the returned matrix with
    /// their types, ordered by `(p, q)`.
    pub fn adapted_basis(&self) -> (Vec<Vector>, Vec<HodgeType>) {
        let mut vs = Vec::new();
        let mut ts = Vec::new();
        for (&t, s) in &self.pieces {
            for v in s.basis() {
                vs.push(v);
                ts.push(t);
            }
        }
        (vs, ts)
    }

    /// Operator acting by `f(p, q)` on `I^{p,q}`.
    pub fn graded_operator(&self, f: impl Fn(i64, i64) -> Scalar) -> Matrix {
        if self.dim == 0 {
            return Matrix::zeros(0, 0);
        }
        let (vs, ts) = self.adapted_basis();
        let b = Matrix::from_cols(&vs, self.dim);
        let d = Matrix::diagonal(&ts.iter().map(|&(p, q)| f(p, q)).collect::<Vec<_>>());
        &(&b * &d) * &b.inverse().expect("adapted basis")
    }

    /// Weil operator `i^{p−q}` on `I^{p,q}`.
    pub fn weil_operator(&self) -> Matrix {
        self.graded_operator(|p, q| Scalar::i_pow(p - q))
    }

    pub fn weights(&self) -> Vec<i64> {
        let mut w: Vec<i64> = self.pieces.keys().map(|&(p, q)| p + q).collect();
        w.dedup();
        w.sort();
        w.dedup();
        w
    }

    /// Single weight when every piece lies on one anti-diagonal.
    pub fn pure_weight(&self) -> Option<i64> {
        match self.weights().as_slice() {
            [w] => Some(*w),
            _ => None,
        }
    }

    /// `W_k = ⊕_{p+q ≤ k} I^{p,q}`.
    pub fn weight_at(&self, k: i64) -> Subspace {
        self.sum_where(|p, q| p + q <= k)
    }

    /// `F^p = ⊕_{p' ≥ p} I^{p',q}`.
    pub fn hodge_at(&self, p: i64) -> Subspace {
        self.sum_where(|a, _| a >= p)
    }

    pub fn sum_where(&self, keep: impl Fn(i64, i64) -> bool) -> Subspace {
        let parts: Vec<Subspace> = self
            .pieces
            .iter()
            .filter(|(&(p, q), _)| keep(p, q))
            .map(|(_, s)| s.clone())
            .collect();
        Subspace::sum_all(self.dim, &parts)
    }

    pub fn weight_filtration(&self) -> FlagFiltration {
        let steps: Vec<(i64, Subspace)> = self
            .weights()
            .into_iter()
            .map(|k| (k, self.weight_at(k)))
            .collect();
        FlagFiltration::increasing_int(self.dim, steps).expect("nested")
    }

    pub fn hodge_filtration(&self) -> FlagFiltration {
        let mut ps: Vec<i64> = self.pieces.keys().map(|&(p, _)| p).collect();
        ps.sort();
        ps.dedup();
        let steps: Vec<(i64, Subspace)> = ps.into_iter().map(|p| (p, self.hodge_at(p))).collect();
        FlagFiltration::decreasing_int(self.dim, steps).expect("nested")
    }

    /// `F^p ∩ W_k = ⊕_{p' ≥ p, p'+q ≤ k} I^{p',q}` for all relevant `p, k`.
    pub fn filtrations_compatible(&self) -> bool {
        let ps: Vec<i64> = self.pieces.keys().map(|&(p, _)| p).collect();
        let ws = self.weights();
        ps.iter().all(|&p| {
            ws.iter().all(|&k| {
                self.hodge_at(p).intersect(&self.weight_at(k))
                    == self.sum_where(|a, b| a >= p && a + b <= k)
            })
        })
    }

    /// `(p, q) ↦ (p − k, q − k)`.
    pub fn tate_twist(&self, k: i64) -> SplitMHS {
        SplitMHS {
            dim: self.dim,
            pieces: self
                .pieces
                .iter()
                .map(|(&(p, q), s)| ((p - k, q - k), s.clone()))
                .collect(),
            conj: self.conj.clone(),
        }
    }

    /// Whether `A` maps every `I^{p,q}` into `I^{p+a, q+b}`.
    pub fn has_type(&self, m: &Matrix, a: i64, b: i64) -> bool {
        self.pieces.iter().all(|(&(p, q), s)| {
            self.piece(p + a, q + b).contains_subspace(&s.map(m))
        })
    }

    /// The structure transported by an invertible change of coordinates `x ↦ A x`.
    pub fn transform(&self, a: &Matrix) -> Result<SplitMHS> {
        let inv = a.inverse()?;
        let conj = &(a * &self.conj) * &inv.conj();
        SplitMHS::new(
            self.dim,
            self.pieces.iter().map(|(&t, s)| (t, s.map(a))).collect(),
            conj,
        )
    }

    /// `Gr^W_k` realized on `⊕_{p+q=k} I^{p,q}`: the graded structure, and the
    /// ambient vectors its coordinates refer to.
    pub fn graded_piece(&self, k: i64) -> (SplitMHS, Vec<Vector>) {
        let mut lifts = Vec::new();
        let mut ranges = Vec::new();
        for (&(p, q), s) in &self.pieces {
            if p + q != k {
                continue;
            }
            let start = lifts.len();
            lifts.extend(s.basis());
            ranges.push(((p, q), start, lifts.len()));
        }
        let d = lifts.len();
        let b = Matrix::from_cols(&lifts, self.dim);
        let coords = |v: &[Scalar]| -> Vector { b.solve(v).expect("inside the graded piece") };
        let conj_cols: Vec<Vector> = lifts.iter().map(|v| coords(&self.conj_of(v))).collect();
        // conj in coordinates: C' x̄ where columns are images of basis vectors
        let conj = Matrix::from_cols(&conj_cols, d);
        let pieces = ranges
            .into_iter()
            .map(|(t, a, e)| {
                let vs: Vec<Vector> = (a..e)
                    .map(|i| crate::exact::matrix::unit_vector(d, i))
                    .collect();
                (t, Subspace::span(d, &vs))
            })
            .collect();
        let h = SplitMHS::new(d, pieces, conj).expect("graded piece of a valid structure");
        (h, lifts)
    }
}

/// A `(−1)^n`-symmetric bilinear form of weight `n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Polarization {
    pub weight: i64,
    #[serde(rename = "S")]
    pub s: Matrix,
}

impl Polarization {
    pub fn new(weight: i64, s: Matrix) -> Result<Self> {
        if !s.is_square() {
            return Err(Error::NotSquare {
                rows: s.rows(),
                cols: s.cols(),
            });
        }
        let sym = if weight.rem_euclid(2) == 0 {
            s.is_symmetric()
        } else {
            s.is_antisymmetric()
        };
        if !sym {
            return Err(Error::NotSymmetric(if weight.rem_euclid(2) == 0 {
                "symmetric"
            } else {
                "antisymmetric"
            }));
        }
        Ok(Polarization { weight, s })
    }

    /// `S(x, y) = xᵀ S y`.
    pub fn pair(&self, x: &[Scalar], y: &[Scalar]) -> Scalar {
        self.s.bilinear(x, y)
    }

    pub fn scaled(&self, c: &Scalar) -> Polarization {
        Polarization {
            weight: self.weight,
            s: self.s.scale(c),
        }
    }

    /// The form `S(x, y)` restricted to vectors `xs`.
    pub fn restricted(&self, xs: &[Vector]) -> Matrix {
        crate::exact::subspace::gram(&self.s, xs, xs)
    }
}

/// `S(Nx, y) = S(x, Ny)`, i.e. `NᵀS = SN`.
pub fn n_self_adjoint(s: &Matrix, n: &Matrix) -> bool {
    &n.transpose() * s == s * n
}

/// `S(Nx, y) + S(x, Ny) = 0`, i.e. `NᵀS + SN = 0`.
pub fn n_skew_adjoint(s: &Matrix, n: &Matrix) -> bool {
    (&(&n.transpose() * s) + &(s * n)).is_zero()
}

#[derive(Clone, Debug, Serialize)]
pub struct BilinearReport {
    pub holds: bool,
    /// Basis vectors `x ∈ F^p`, `y ∈ F^q` with `p + q > n` and `S(x,y) ≠ 0`.
    pub witness: Option<(Vector, Vector, Scalar)>,
}

/// `S(F^p, F^q) = 0` whenever `p + q > n`, on a pure structure of weight `n`.
pub fn check_first_bilinear_relation(h: &SplitMHS, s: &Polarization) -> Result<BilinearReport> {
    if s.s.rows() != h.dim() {
        return Err(Error::DimensionMismatch("polarization size".into()));
    }
    let n = s.weight;
    if let Some(w) = h.pure_weight() {
        if w != n {
            return Err(Error::WeightMismatch {
                polarization: n,
                structure: w,
            });
        }
    } else if h.dim() > 0 {
        return Err(Error::WeightMismatch {
            polarization: n,
            structure: *h.weights().last().unwrap(),
        });
    }
    let ps: Vec<i64> = h.pieces().keys().map(|&(p, _)| p).collect();
    for &p in &ps {
        let fp = h.hodge_at(p).basis();
        let fq = h.hodge_at(n + 1 - p).basis();
        for x in &fp {
            for y in &fq {
                let v = s.pair(x, y);
                if !v.is_zero() {
                    return Ok(BilinearReport {
                        holds: false,
                        witness: Some((x.clone(), y.clone(), v)),
                    });
                }
            }
        }
    }
    Ok(BilinearReport {
        holds: true,
        witness: None,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct PrimitiveReport {
    /// Weight level `k = n + l` of the primitive piece.
    pub level: i64,
    pub lefschetz: usize,
    pub dim: usize,
    /// `h(x_a, x_b)` in a basis adapted to the bigrading.
    pub gram: Matrix,
    /// Normalizing constant `c̄` with `c̄·gram` hermitian, `c` the first nonzero diagonal entry.
    pub normalizer: Option<Scalar>,
    pub minors: Vec<Scalar>,
    pub definite: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct PositivityReport {
    pub pieces: Vec<PrimitiveReport>,
    pub all_definite: bool,
}

/// Gram matrix of `h(x, y) = i^{p−q} S(x, N^l conj y)` on each primitive
/// piece `P_{n+l} = ⊕_{p+q=n+l} ker N^{l+1} ∩ I^{p,q}`, tested for
/// definiteness up to one complex constant per piece.
pub fn check_positivity(h: &SplitMHS, s: &Polarization, n: &NilpotentOp) -> Result<PositivityReport> {
    if s.s.rows() != h.dim() || n.dim() != h.dim() {
        return Err(Error::DimensionMismatch("positivity input".into()));
    }
    if !h.has_type(n.matrix(), -1, -1) {
        return Err(Error::InvalidStructure(
            "N must map I^{p,q} into I^{p-1,q-1}".into(),
        ));
    }
    let center = s.weight;
    let mut pieces = Vec::new();
    let mut levels: Vec<i64> = h.weights().into_iter().filter(|&k| k >= center).collect();
    levels.sort();
    for k in levels {
        let l = (k - center) as usize;
        let nl = n.pow(l);
        let ker = Subspace::kernel(&n.pow(l + 1));
        let mut basis = Vec::new();
        let mut types = Vec::new();
        for (&(p, q), piece) in h.pieces() {
            if p + q != k {
                continue;
            }
            for v in piece.intersect(&ker).basis() {
                basis.push(v);
                types.push((p, q));
            }
        }
        if basis.is_empty() {
            continue;
        }
        let gram = Matrix::from_fn(basis.len(), basis.len(), |a, b| {
            let (p, q) = types[a];
            let y = nl.apply(&h.conj_of(&basis[b]));
            &Scalar::i_pow(p - q) * &s.pair(&basis[a], &y)
        });
        pieces.push(hermitian_definiteness(k, l, gram)?);
    }
    let all_definite = pieces.iter().all(|p| p.definite);
    Ok(PositivityReport {
        pieces,
        all_definite,
    })
}

fn hermitian_definiteness(level: i64, l: usize, gram: Matrix) -> Result<PrimitiveReport> {
    let dim = gram.rows();
    let first = (0..dim).map(|k| gram.get(k, k).clone()).find(|x| !x.is_zero());
    let Some(c) = first else {
        return Ok(PrimitiveReport {
            level,
            lefschetz: l,
            dim,
            gram,
            normalizer: None,
            minors: vec![],
            definite: false,
        });
    };
    let normalizer = c.conj();
    let g = gram.scale(&normalizer);
    if !g.is_hermitian() {
        return Err(Error::NonHermitianGram(format!(
            "primitive piece at level {level} is not a multiple of a hermitian form"
        )));
    }
    let minors = g.leading_minors()?;
    let definite = g.is_positive_definite(true)?;
    Ok(PrimitiveReport {
        level,
        lefschetz: l,
        dim,
        gram,
        normalizer: Some(normalizer),
        minors,
        definite,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct GradedReport {
    pub level: i64,
    pub dim: usize,
    pub first_relation: bool,
    pub positivity: bool,
    pub reason: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct AdmissibilityReport {
    pub relative_filtration_exists: bool,
    pub relative_filtration: Option<FlagFiltration>,
    pub graded: Vec<GradedReport>,
    pub admissible: bool,
    pub reason: Option<String>,
}

/// Admissibility at a point: `N` preserves `W`, the relative monodromy
/// filtration of `N` with respect to `W` exists, and each `Gr^W_l` is a
/// polarized pure structure for the supplied graded polarization.
/// `W` and `F` are those induced by the bigrading of `h`.
pub fn check_admissibility(
    h: &SplitMHS,
    n: &NilpotentOp,
    graded_polarizations: &BTreeMap<i64, Polarization>,
) -> Result<AdmissibilityReport> {
    if n.dim() != h.dim() {
        return Err(Error::DimensionMismatch("admissibility input".into()));
    }
    let w = h.weight_filtration();
    let (exists, relative, mut reason) =
        match relative_monodromy_filtration(n, &w, &Centering::Standard) {
            Ok(RelativeFiltration::Exists(m)) => (true, Some(m), None),
            Ok(RelativeFiltration::NonExistence { level, .. }) => (
                false,
                None,
                Some(format!("NonExistence: relative monodromy filtration fails at W-level {level}")),
            ),
            Err(Error::NPreservesWViolated(msg)) => {
                (false, None, Some(format!("NPreservesWViolated: {msg}")))
            }
            Err(e) => return Err(e),
        };
    let mut graded = Vec::new();
    for k in h.weights() {
        let (gr, lifts) = h.graded_piece(k);
        let Some(pol) = graded_polarizations.get(&k) else {
            graded.push(GradedReport {
                level: k,
                dim: gr.dim(),
                first_relation: false,
                positivity: false,
                reason: Some(format!("no polarization supplied for Gr_{k}")),
            });
            continue;
        };
        let pol = if pol.s.rows() == h.dim() {
            Polarization {
                weight: pol.weight,
                s: crate::exact::subspace::gram(&pol.s, &lifts, &lifts),
            }
        } else {
            pol.clone()
        };
        let (first, pos, why) = match (
            check_first_bilinear_relation(&gr, &pol),
            check_positivity(&gr, &pol, &NilpotentOp::zero(gr.dim())),
        ) {
            (Ok(a), Ok(b)) => (a.holds, b.all_definite, None),
            (Err(e), _) | (_, Err(e)) => (false, false, Some(e.to_string())),
        };
        graded.push(GradedReport {
            level: k,
            dim: gr.dim(),
            first_relation: first,
            positivity: pos,
            reason: why,
        });
    }
    let graded_ok = graded.iter().all(|g| g.first_relation && g.positivity);
    if reason.is_none() && !graded_ok {
        reason = Some("a graded piece is not polarized".into());
    }
    Ok(AdmissibilityReport {
        relative_filtration_exists: exists,
        relative_filtration: relative,
        admissible: exists && graded_ok,
        graded,
        reason,
    })
}

#[derive(Serialize, Deserialize)]
struct SplitMHSJson {
    dim: usize,
    bigrading: BTreeMap<String, Vec<Vector>>,
    conj: Matrix,
}

fn parse_type(key: &str) -> Option<HodgeType> {
    let (p, q) = key.split_once(',')?;
    Some((p.trim().parse().ok()?, q.trim().parse().ok()?))
}

impl Serialize for SplitMHS {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        let mut bigrading = BTreeMap::new();
        for (&(p, q), s) in &self.pieces {
            bigrading.insert(format!("{p},{q}"), s.basis());
        }
        SplitMHSJson {
            dim: self.dim,
            bigrading,
            conj: self.conj.clone(),
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for SplitMHS {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let j = SplitMHSJson::deserialize(de)?;
        let mut pieces = BTreeMap::new();
        for (k, vs) in j.bigrading {
            let t = parse_type(&k).ok_or_else(|| D::Error::custom(format!("bad type key {k:?}")))?;
            if vs.iter().any(|v| v.len() != j.dim) {
                return Err(D::Error::custom("bigrading vector length"));
            }
            pieces.insert(t, Subspace::span(j.dim, &vs));
        }
        let conj = crate::exact::matrix::matrix_with_shape(&j.conj, j.dim, j.dim)
            .map_err(D::Error::custom)?;
        SplitMHS::new(j.dim, pieces, conj).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::matrix::unit_vector;

    fn point() -> SplitMHS {
        SplitMHS::new(
            1,
            BTreeMap::from([((0, 0), Subspace::full(1))]),
            Matrix::identity(1),
        )
        .unwrap()
    }

    /// Weight one, `H = ℚ(i)²` with `I^{1,0} = (1, i)`, `I^{0,1} = (1, −i)` and
    /// real structure given by plain conjugation.
    fn elliptic() -> (SplitMHS, Polarization) {
        let i = Scalar::i();
        let a = vec![Scalar::int(1), i.clone()];
        let b = vec![Scalar::int(1), -i];
        let h = SplitMHS::new(
            2,
            BTreeMap::from([
                ((1, 0), Subspace::span(2, &[a])),
                ((0, 1), Subspace::span(2, &[b])),
            ]),
            Matrix::identity(2),
        )
        .unwrap();
        let s = Polarization::new(1, Matrix::from_ints(&[&[0, 1], &[-1, 0]])).unwrap();
        (h, s)
    }

    #[test]
    fn trivial_point_is_polarized() {
        let s = Polarization::new(0, Matrix::identity(1)).unwrap();
        assert!(check_first_bilinear_relation(&point(), &s).unwrap().holds);
        let r = check_positivity(&point(), &s, &NilpotentOp::zero(1)).unwrap();
        assert!(r.all_definite);
        let adm = check_admissibility(
            &point(),
            &NilpotentOp::zero(1),
            &BTreeMap::from([(0, s)]),
        )
        .unwrap();
        assert!(adm.admissible);
    }

    #[test]
    fn elliptic_curve_relations() {
        let (h, s) = elliptic();
        assert!(check_first_bilinear_relation(&h, &s).unwrap().holds);
        let r = check_positivity(&h, &s, &NilpotentOp::zero(2)).unwrap();
        assert!(r.all_definite);
        // scaling by a negative rational keeps "definite up to sign"
        let r = check_positivity(&h, &s.scaled(&Scalar::int(-3)), &NilpotentOp::zero(2)).unwrap();
        assert!(r.all_definite);
    }

    #[test]
    fn weight_mismatch() {
        let (h, _) = elliptic();
        let s = Polarization::new(2, Matrix::identity(2)).unwrap();
        assert!(matches!(
            check_first_bilinear_relation(&h, &s),
            Err(Error::WeightMismatch { .. })
        ));
    }

    #[test]
    fn filtrations_from_bigrading() {
        let (h, _) = elliptic();
        assert_eq!(h.pure_weight(), Some(1));
        assert!(h.filtrations_compatible());
        assert_eq!(h.hodge_at(1).dim(), 1);
        assert!(h.hodge_at(2).is_zero());
        assert!(h.weight_at(0).is_zero());
        let t = h.tate_twist(1);
        assert_eq!(t.pure_weight(), Some(-1));
        assert_eq!(t.tate_twist(-1), h);
        assert_eq!(h.tate_twist(0), h);
    }

    #[test]
    fn rejects_bad_conjugation() {
        let r = SplitMHS::new(
            2,
            BTreeMap::from([
                ((1, 0), Subspace::span(2, &[unit_vector(2, 0)])),
                ((0, 1), Subspace::span(2, &[unit_vector(2, 1)])),
            ]),
            Matrix::identity(2),
        );
        assert!(matches!(r, Err(Error::InvalidStructure(_))));
    }

    #[test]
    fn unpreserved_weight_filtration_is_inadmissible() {
        // I^{0,0} = e1, I^{1,1} = e2, N e1 = e2 moves weight up
        let h = SplitMHS::new(
            2,
            BTreeMap::from([
                ((0, 0), Subspace::coordinate(2, &[0])),
                ((1, 1), Subspace::coordinate(2, &[1])),
            ]),
            Matrix::identity(2),
        )
        .unwrap();
        let n = NilpotentOp::new(Matrix::from_ints(&[&[0, 0], &[1, 0]])).unwrap();
        let pols = BTreeMap::from([
            (0, Polarization::new(0, Matrix::identity(2)).unwrap()),
            (2, Polarization::new(2, Matrix::identity(2)).unwrap()),
        ]);
        let r = check_admissibility(&h, &n, &pols).unwrap();
        assert!(!r.admissible);
        assert!(r.reason.unwrap().starts_with("NPreservesWViolated"));
    }

    #[test]
    fn json_round_trip() {
        let (h, _) = elliptic();
        let s = serde_json::to_string(&h).unwrap();
        assert!(s.contains(r#""1,0""#));
        assert_eq!(serde_json::from_str::<SplitMHS>(&s).unwrap(), h);
    }

    #[test]
    fn n_conventions() {
        let s = Matrix::from_ints(&[&[0, 1], &[-1, 0]]);
        let n = Matrix::from_ints(&[&[0, 1], &[0, 0]]);
        assert!(n_skew_adjoint(&s, &n));
        assert!(!n_self_adjoint(&s, &n));
        let z = Matrix::zeros(2, 2);
        assert!(n_skew_adjoint(&s, &z) && n_self_adjoint(&s, &z));
    }
}
