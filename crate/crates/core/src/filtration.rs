//! Monodromy weight filtrations, relative monodromy filtrations and
//! primitive decompositions of nilpotent operators.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::exact::flag::FlagJson;
use crate::exact::matrix::{add_vectors, Vector};
use crate::exact::{FlagFiltration, Matrix, Quotient, Subspace};
use crate::{Error, Result};

/// A nilpotent endomorphism together with its nilpotency index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NilpotentOp {
    n: Matrix,
    index: usize,
}

impl NilpotentOp {
    pub fn new(n: Matrix) -> Result<Self> {
        if !n.is_square() {
            return Err(Error::NotSquare {
                rows: n.rows(),
                cols: n.cols(),
            });
        }
        let index = n.nilpotency_index().ok_or(Error::NotNilpotent)?;
        Ok(NilpotentOp { n, index })
    }

    pub fn zero(dim: usize) -> Self {
        NilpotentOp {
            n: Matrix::zeros(dim, dim),
            index: usize::from(dim > 0),
        }
    }

    pub fn matrix(&self) -> &Matrix {
        &self.n
    }

    pub fn dim(&self) -> usize {
        self.n.rows()
    }

    /// Smallest `k` with `N^k = 0`.
    pub fn nilpotency_index(&self) -> usize {
        self.index
    }

    pub fn pow(&self, k: usize) -> Matrix {
        self.n.pow(k)
    }
}

/// An increasing filtration with a declared center of symmetry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightFiltration {
    pub center: i64,
    pub filtration: FlagFiltration,
}

impl WeightFiltration {
    pub fn at(&self, k: i64) -> Subspace {
        self.filtration.at_int(k)
    }

    pub fn graded(&self, k: i64) -> Quotient {
        self.filtration.graded_int(k)
    }

    pub fn graded_dim(&self, k: i64) -> usize {
        self.filtration.graded_dim_int(k)
    }

    pub fn ambient(&self) -> usize {
        self.filtration.ambient()
    }

    /// Integer range `[lo, hi]` containing every jump.
    pub fn range(&self) -> (i64, i64) {
        self.filtration
            .integer_range()
            .unwrap_or((self.center, self.center))
    }

    /// Dimensions of the nonzero graded pieces.
    pub fn graded_dims(&self) -> BTreeMap<i64, usize> {
        let (lo, hi) = self.range();
        (lo..=hi)
            .map(|k| (k, self.graded_dim(k)))
            .filter(|&(_, d)| d > 0)
            .collect()
    }
}

#[derive(Serialize, Deserialize)]
pub struct WeightFiltrationJson {
    pub center: i64,
    #[serde(flatten)]
    pub flag: FlagJson,
}

impl Serialize for WeightFiltration {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        WeightFiltrationJson {
            center: self.center,
            flag: self.filtration.to_json(),
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for WeightFiltration {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let j = WeightFiltrationJson::deserialize(de)?;
        Ok(WeightFiltration {
            center: j.center,
            filtration: FlagFiltration::from_json(j.flag).map_err(serde::de::Error::custom)?,
        })
    }
}

/// `W_{w+k} = Σ_{j ≥ max(0,−k)} N^j(ker N^{k+2j+1})`.
pub fn monodromy_weight_filtration(n: &NilpotentOp, w: i64) -> WeightFiltration {
    let dim = n.dim();
    let nu = n.nilpotency_index();
    if nu <= 1 {
        return WeightFiltration {
            center: w,
            filtration: FlagFiltration::trivial(dim, w, false),
        };
    }
    let powers: Vec<Matrix> = (0..=2 * nu).map(|k| n.pow(k)).collect();
    let kernels: Vec<Subspace> = powers.iter().map(Subspace::kernel).collect();
    let top = nu as i64 - 1;
    let mut steps = Vec::new();
    for k in -top..=top {
        let mut acc = Subspace::zero(dim);
        let j0 = (-k).max(0) as usize;
        for j in j0..nu {
            let a = (k + 2 * j as i64 + 1) as usize;
            let ker = &kernels[a.min(2 * nu)];
            acc = acc.sum(&ker.map(&powers[j]));
        }
        steps.push((w + k, acc));
    }
    WeightFiltration {
        center: w,
        filtration: FlagFiltration::increasing_int(dim, steps).expect("nested by construction"),
    }
}

/// The defining properties: `N·W_k ⊆ W_{k−2}`, exhaustive, and
/// `N^k : Gr_{w+k} → Gr_{w−k}` bijective for every `k ≥ 1`.
pub fn is_monodromy_filtration(n: &NilpotentOp, f: &FlagFiltration, w: i64) -> bool {
    let dim = n.dim();
    if f.ambient() != dim || f.is_decreasing() || !f.is_exhaustive() {
        return false;
    }
    let Some((lo, hi)) = f.integer_range() else {
        return dim == 0;
    };
    for k in lo..=hi + 2 {
        if !f.at_int(k - 2).contains_subspace(&f.at_int(k).map(n.matrix())) {
            return false;
        }
    }
    let reach = (hi - w).max(w - lo).max(0);
    for k in 1..=reach {
        let src = f.graded_int(w + k);
        let dst = f.graded_int(w - k);
        if src.dim() != dst.dim() {
            return false;
        }
        if src.dim() == 0 {
            continue;
        }
        let Ok(m) = src.induced(&n.pow(k as usize), &dst) else {
            return false;
        };
        if !m.is_invertible() {
            return false;
        }
    }
    true
}

/// Centering rule for the graded pieces in the relative construction.
#[derive(Clone, Debug, Default)]
pub enum Centering {
    /// `Gr^W_l` is centered at `l`.
    #[default]
    Standard,
    /// `Gr^W_l` is centered at `l + shift`.
    Shifted(i64),
    /// Explicit centers; levels not listed use `l`.
    Explicit(BTreeMap<i64, i64>),
}

impl Centering {
    pub fn center(&self, l: i64) -> i64 {
        match self {
            Centering::Standard => l,
            Centering::Shifted(s) => l + s,
            Centering::Explicit(m) => *m.get(&l).unwrap_or(&l),
        }
    }
}

/// Outcome of the relative monodromy filtration construction.
#[derive(Clone, Debug)]
pub enum RelativeFiltration {
    Exists(FlagFiltration),
    /// No filtration exists; `level` is the `W`-step where lifting failed
    /// and `witness` a vector whose lifts all violate the condition.
    NonExistence { level: i64, witness: Vector },
}

/// Induced operator and quotient data on `Gr^W_l`.
fn graded_operator(n: &Matrix, w: &FlagFiltration, l: i64) -> Result<(Quotient, Matrix)> {
    let q = w.graded_int(l);
    let m = q.induced(n, &q)?;
    Ok((q, m))
}

/// Relative monodromy filtration of `N` with respect to an integer-indexed `W`,
/// by lifting Jordan strings of each `Gr^W_l N` one `W`-step at a time.
/// A returned filtration has been checked against the defining conditions.
pub fn relative_monodromy_filtration(
    n: &NilpotentOp,
    w: &FlagFiltration,
    centering: &Centering,
) -> Result<RelativeFiltration> {
    let dim = n.dim();
    if w.ambient() != dim || w.is_decreasing() {
        return Err(Error::DimensionMismatch("relative filtration input".into()));
    }
    if !w.preserved_by(n.matrix()) {
        return Err(Error::NPreservesWViolated(
            "N maps some W-step outside itself".into(),
        ));
    }
    let Some((lo, hi)) = w.integer_range() else {
        if dim == 0 {
            return Ok(RelativeFiltration::Exists(FlagFiltration::trivial(0, 0, false)));
        }
        return Err(Error::Invalid("W must have integer jumps".into()));
    };
    if !w.is_exhaustive() {
        return Err(Error::Invalid("W must be exhaustive".into()));
    }
    let nmat = n.matrix();
    // strings[k] collects vectors of M-weight exactly k
    let mut by_weight: BTreeMap<i64, Vec<Vector>> = BTreeMap::new();
    let m_prime = |by_weight: &BTreeMap<i64, Vec<Vector>>, k: i64| -> Subspace {
        let vs: Vec<Vector> = by_weight
            .range(..=k)
            .flat_map(|(_, v)| v.iter().cloned())
            .collect();
        Subspace::span(dim, &vs)
    };
    for l in lo..=hi {
        let sub = w.at_int(l - 1);
        let (q, nq) = graded_operator(nmat, w, l)?;
        if q.dim() == 0 {
            continue;
        }
        let c = centering.center(l);
        let nq_op = NilpotentOp::new(nq.clone())?;
        let wq = monodromy_weight_filtration(&nq_op, c);
        let sub_basis = sub.inclusion();
        for j in (0..nq_op.nilpotency_index().max(1) as i64).rev() {
            // primitive vectors of weight c + j in Gr_l coordinates
            let ker = Subspace::kernel(&nq.pow(j as usize + 1));
            let cand = ker.intersect(&wq.at(c + j));
            let lower = wq.at(c + j - 1);
            let reps = lower.intersect(&cand).complement_in(&cand);
            for qv in reps {
                let x0 = q.lift(&qv);
                let pj = n.pow(j as usize + 1);
                let target = m_prime(&by_weight, c - j - 2);
                let ann = target.annihilator_rows();
                let lifted = if ann.rows() == 0 || sub.is_zero() {
                    let y = pj.apply(&x0);
                    if target.contains(&y) {
                        Some(x0.clone())
                    } else {
                        None
                    }
                } else {
                    let a = &(&ann * &pj) * &sub_basis;
                    let b: Vector = ann.apply(&pj.apply(&x0)).iter().map(|x| -x).collect();
                    a.solve(&b)
                        .ok()
                        .map(|h| add_vectors(&x0, &sub_basis.apply(&h)))
                };
                let Some(x) = lifted else {
                    return Ok(RelativeFiltration::NonExistence {
                        level: l,
                        witness: x0,
                    });
                };
                let mut v = x;
                for i in 0..=j {
                    by_weight.entry(c + j - 2 * i).or_default().push(v.clone());
                    v = nmat.apply(&v);
                }
            }
        }
    }
    let (mlo, mhi) = match (by_weight.keys().next(), by_weight.keys().last()) {
        (Some(&a), Some(&b)) => (a, b),
        _ => (0, 0),
    };
    let steps: Vec<(i64, Subspace)> = (mlo..=mhi).map(|k| (k, m_prime(&by_weight, k))).collect();
    let m = FlagFiltration::increasing_int(dim, steps)?;
    if !is_relative_monodromy_filtration(n, w, &m, centering) {
        return Err(Error::Invalid(
            "constructed relative filtration failed verification".into(),
        ));
    }
    Ok(RelativeFiltration::Exists(m))
}

/// `N·M_k ⊆ M_{k−2}` and `M` induces on each `Gr^W_l` the monodromy
/// filtration of `Gr^W_l N` with the requested center.
pub fn is_relative_monodromy_filtration(
    n: &NilpotentOp,
    w: &FlagFiltration,
    m: &FlagFiltration,
    centering: &Centering,
) -> bool {
    let dim = n.dim();
    if m.ambient() != dim || !m.is_exhaustive() {
        return false;
    }
    let (Some((mlo, mhi)), Some((lo, hi))) = (m.integer_range(), w.integer_range()) else {
        return dim == 0;
    };
    for k in mlo..=mhi + 2 {
        if !m.at_int(k - 2).contains_subspace(&m.at_int(k).map(n.matrix())) {
            return false;
        }
    }
    for l in lo..=hi {
        let Ok((q, nq)) = graded_operator(n.matrix(), w, l) else {
            return false;
        };
        if q.dim() == 0 {
            continue;
        }
        let steps: Vec<(i64, Subspace)> = (mlo..=mhi)
            .map(|k| {
                let inside = m.at_int(k).intersect(&w.at_int(l));
                let vs: Vec<Vector> = inside.basis().iter().map(|v| q.project(v)).collect();
                (k, Subspace::span(q.dim(), &vs))
            })
            .collect();
        let Ok(induced) = FlagFiltration::increasing_int(q.dim(), steps) else {
            return false;
        };
        let Ok(nq_op) = NilpotentOp::new(nq) else {
            return false;
        };
        if !is_monodromy_filtration(&nq_op, &induced, centering.center(l)) {
            return false;
        }
    }
    true
}

/// Primitive subspace `P_l = ker(N^{l−w+1}) ⊆ Gr_l` for `l ≥ w`.
#[derive(Clone, Debug)]
pub struct PrimitivePart {
    pub level: i64,
    pub graded: Quotient,
    /// In the coordinates of `graded`.
    pub primitive: Subspace,
    /// Ambient vectors in `W_l ∩ ker N^{l−w+1}` projecting onto a basis of `P_l`.
    pub lifts: Vec<Vector>,
}

pub fn primitive_parts(n: &NilpotentOp, w: &WeightFiltration) -> Result<Vec<PrimitivePart>> {
    if !is_monodromy_filtration(n, &w.filtration, w.center) {
        return Err(Error::FiltrationNotAdapted(
            "W is not the monodromy filtration of N with this center".into(),
        ));
    }
    let (_, hi) = w.range();
    let mut out = Vec::new();
    for l in w.center..=hi {
        let q = w.graded(l);
        if q.dim() == 0 {
            continue;
        }
        let e = (l - w.center + 1) as usize;
        let ne = n.pow(e);
        let graded_kernel = w
            .at(l)
            .intersect(&w.at(l - 2 * e as i64 - 1).preimage(&ne));
        let pv: Vec<Vector> = graded_kernel.basis().iter().map(|v| q.project(v)).collect();
        let primitive = Subspace::span(q.dim(), &pv);
        let space = w.at(l).intersect(&Subspace::kernel(&ne));
        let mut lifts = Vec::new();
        let mut got = Subspace::zero(q.dim());
        for v in space.basis() {
            let p = q.project(&v);
            if !got.contains(&p) {
                got = got.sum(&Subspace::span(q.dim(), &[p]));
                lifts.push(v);
            }
        }
        if got != primitive {
            return Err(Error::FiltrationNotAdapted(format!(
                "primitive part at level {l} does not lift"
            )));
        }
        out.push(PrimitivePart {
            level: l,
            graded: q,
            primitive,
            lifts,
        });
    }
    Ok(out)
}

/// `Gr_l = ⊕_{r ≥ 0} N^r P_{l+2r}` for every `l`, checked by dimensions and
/// independence inside each graded piece.
pub fn lefschetz_decomposition_holds(n: &NilpotentOp, w: &WeightFiltration) -> Result<bool> {
    let parts = primitive_parts(n, w)?;
    let (lo, hi) = w.range();
    for l in lo..=hi {
        let q = w.graded(l);
        let mut pieces = Vec::new();
        for p in &parts {
            let r2 = p.level - l;
            if r2 < 0 || r2 % 2 != 0 || p.level - w.center < r2 / 2 {
                continue;
            }
            let r = (r2 / 2) as usize;
            let nr = n.pow(r);
            let vs: Vec<Vector> = p.lifts.iter().map(|x| q.project(&nr.apply(x))).collect();
            pieces.push((vs.len(), Subspace::span(q.dim(), &vs)));
        }
        let total: usize = pieces.iter().map(|(k, _)| k).sum();
        let span = pieces
            .iter()
            .fold(Subspace::zero(q.dim()), |acc, (_, s)| acc.sum(s));
        if total != q.dim() || span.dim() != q.dim() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `dim Gr_{w+k} = dim Gr_{w−k}` for all `k`.
pub fn graded_dims_symmetric(w: &WeightFiltration) -> bool {
    let (lo, hi) = w.range();
    let reach = (hi - w.center).max(w.center - lo).max(0);
    (0..=reach).all(|k| w.graded_dim(w.center + k) == w.graded_dim(w.center - k))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn jordan(sizes: &[usize]) -> NilpotentOp {
        let d: usize = sizes.iter().sum();
        let mut m = Matrix::zeros(d, d);
        let mut off = 0;
        for &s in sizes {
            for k in 1..s {
                m.set(off + k - 1, off + k, crate::exact::Scalar::int(1));
            }
            off += s;
        }
        NilpotentOp::new(m).unwrap()
    }

    fn ex_n1() -> NilpotentOp {
        NilpotentOp::new(Matrix::from_ints(&[
            &[0, 0, 1, 0],
            &[0, 0, 0, 1],
            &[0, 0, 0, 0],
            &[0, 0, 0, 0],
        ]))
        .unwrap()
    }

    #[test]
    fn rejects_non_nilpotent() {
        assert_eq!(NilpotentOp::new(Matrix::identity(2)), Err(Error::NotNilpotent));
    }

    #[test]
    fn zero_operator_single_jump() {
        let w = monodromy_weight_filtration(&NilpotentOp::zero(3), 0);
        assert_eq!(w.graded_dims(), BTreeMap::from([(0, 3)]));
    }

    #[test]
    fn jordan_block_two() {
        let w = monodromy_weight_filtration(&jordan(&[2]), 0);
        assert_eq!(w.graded_dims(), BTreeMap::from([(-1, 1), (1, 1)]));
        assert!(is_monodromy_filtration(&jordan(&[2]), &w.filtration, 0));
    }

    #[test]
    fn two_blocks_of_size_two() {
        let w = monodromy_weight_filtration(&ex_n1(), 0);
        assert_eq!(w.graded_dims(), BTreeMap::from([(-1, 2), (1, 2)]));
        assert_eq!(w.graded_dim(0), 0);
        let p = primitive_parts(&ex_n1(), &w).unwrap();
        assert_eq!(p.len(), 1);
        assert_eq!((p[0].level, p[0].primitive.dim()), (1, 2));
    }

    #[test]
    fn mixed_blocks_and_lefschetz() {
        let n = jordan(&[3, 2, 1]);
        let w = monodromy_weight_filtration(&n, 5);
        assert_eq!(
            w.graded_dims(),
            BTreeMap::from([(3, 1), (4, 1), (5, 2), (6, 1), (7, 1)])
        );
        assert!(graded_dims_symmetric(&w));
        assert!(lefschetz_decomposition_holds(&n, &w).unwrap());
    }

    #[test]
    fn primitive_parts_examples() {
        let p = primitive_parts(&NilpotentOp::zero(2), &monodromy_weight_filtration(&NilpotentOp::zero(2), 0)).unwrap();
        assert_eq!(p.len(), 1);
        assert_eq!(p[0].primitive.dim(), 2);
        let n = jordan(&[2]);
        let p = primitive_parts(&n, &monodromy_weight_filtration(&n, 0)).unwrap();
        assert_eq!((p[0].level, p[0].primitive.dim()), (1, 1));
        let wrong = WeightFiltration {
            center: 0,
            filtration: FlagFiltration::trivial(2, 0, false),
        };
        assert!(matches!(
            primitive_parts(&n, &wrong),
            Err(Error::FiltrationNotAdapted(_))
        ));
    }

    #[test]
    fn relative_reduces_to_absolute() {
        let n = jordan(&[3, 1]);
        let w = FlagFiltration::trivial(4, 2, false);
        let RelativeFiltration::Exists(m) =
            relative_monodromy_filtration(&n, &w, &Centering::Standard).unwrap()
        else {
            panic!("exists");
        };
        assert_eq!(m, monodromy_weight_filtration(&n, 2).filtration);
    }

    #[test]
    fn relative_with_zero_operator_is_w() {
        let w = FlagFiltration::increasing_int(
            3,
            vec![(0, Subspace::coordinate(3, &[0])), (2, Subspace::full(3))],
        )
        .unwrap();
        let RelativeFiltration::Exists(m) =
            relative_monodromy_filtration(&NilpotentOp::zero(3), &w, &Centering::Standard)
                .unwrap()
        else {
            panic!("exists");
        };
        assert_eq!(m, w);
    }

    #[test]
    fn relative_detects_nonexistence() {
        // N e2 = e1, W_0 = span(e1), W_1 = everything: Gr_0 and Gr_1 carry N = 0,
        // so M would need N·M_1 ⊆ M_{-1} = 0 with e2 ∈ M_1.
        let n = jordan(&[2]);
        let w = FlagFiltration::increasing_int(
            2,
            vec![(0, Subspace::coordinate(2, &[0])), (1, Subspace::full(2))],
        )
        .unwrap();
        assert!(matches!(
            relative_monodromy_filtration(&n, &w, &Centering::Standard).unwrap(),
            RelativeFiltration::NonExistence { level: 1, .. }
        ));
        // with W_0 = span(e1), W_2 = everything the lift exists
        let w = FlagFiltration::increasing_int(
            2,
            vec![(0, Subspace::coordinate(2, &[0])), (2, Subspace::full(2))],
        )
        .unwrap();
        assert!(matches!(
            relative_monodromy_filtration(&n, &w, &Centering::Standard).unwrap(),
            RelativeFiltration::Exists(_)
        ));
    }

    #[test]
    fn relative_rejects_unpreserved_w() {
        let n = jordan(&[2]);
        let w = FlagFiltration::increasing_int(
            2,
            vec![(0, Subspace::coordinate(2, &[1])), (1, Subspace::full(2))],
        )
        .unwrap();
        assert!(matches!(
            relative_monodromy_filtration(&n, &w, &Centering::Standard),
            Err(Error::NPreservesWViolated(_))
        ));
    }

    #[test]
    fn json_round_trip() {
        let w = monodromy_weight_filtration(&jordan(&[2]), 1);
        let s = serde_json::to_string(&w).unwrap();
        assert!(s.starts_with(r#"{"center":1"#));
        assert_eq!(serde_json::from_str::<WeightFiltration>(&s).unwrap(), w);
    }
}
