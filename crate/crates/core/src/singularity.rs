//! Brieskorn–Pham singularities `f = Σ x_i^{a_i}`: Milnor algebra, spectrum,
//! bigrading on `Ω_f`, residue pairings and the Hodge–Riemann checks.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::exact::matrix::{unit_vector, Vector};
use crate::exact::{FlagFiltration, Matrix, Scalar, Subspace};
use crate::filtration::NilpotentOp;
use crate::mhs::{
    check_first_bilinear_relation, check_positivity, BilinearReport, HodgeType, Polarization,
    PositivityReport, SplitMHS,
};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BPSingularity {
    pub exponents: Vec<u32>,
}

impl BPSingularity {
    pub fn new(exponents: Vec<u32>) -> Result<Self> {
        if exponents.is_empty() {
            return Err(Error::Invalid("need at least one variable".into()));
        }
        if let Some(a) = exponents.iter().find(|&&a| a < 2) {
            return Err(Error::Invalid(format!(
                "exponent {a} < 2 does not give an isolated singularity"
            )));
        }
        Ok(BPSingularity { exponents })
    }

    /// `n`, where `f` lives on `ℂ^{n+1}`.
    pub fn n(&self) -> i64 {
        self.exponents.len() as i64 - 1
    }

    /// Exponent vector of the Hessian monomial `∏ x_i^{a_i − 2}`.
    pub fn hessian(&self) -> Vec<u32> {
        self.exponents.iter().map(|a| a - 2).collect()
    }
}

pub fn milnor_number(sing: &BPSingularity) -> u64 {
    sing.exponents.iter().map(|&a| (a - 1) as u64).product()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectralMonomial {
    pub exponents: Vec<u32>,
    /// `Σ (k_i + 1)/a_i`.
    #[serde(with = "crate::exact::ratstr")]
    pub l: BigRational,
    /// `l − 1`.
    #[serde(with = "crate::exact::ratstr")]
    pub alpha: BigRational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectrumDatum {
    pub monomials: Vec<SpectralMonomial>,
}

impl SpectrumDatum {
    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn degrees(&self) -> Vec<BigRational> {
        self.monomials.iter().map(|m| m.l.clone()).collect()
    }

    pub fn index_of(&self, k: &[u32]) -> Option<usize> {
        self.monomials.iter().position(|m| m.exponents == k)
    }

    /// `l_i + l_{μ+1−i} = n + 1` for all `i`.
    pub fn is_symmetric(&self, n: i64) -> bool {
        let mu = self.len();
        let target = BigRational::from_integer(BigInt::from(n + 1));
        (0..mu).all(|i| &self.monomials[i].l + &self.monomials[mu - 1 - i].l == target)
    }
}

/// Monomial basis `0 ≤ k_i ≤ a_i − 2` of the Milnor algebra, sorted by
/// `l` and then lexicographically.
pub fn spectrum(sing: &BPSingularity) -> SpectrumDatum {
    let mut all: Vec<Vec<u32>> = vec![vec![]];
    for &a in &sing.exponents {
        all = all
            .into_iter()
            .flat_map(|k| {
                (0..a - 1).map(move |e| {
                    let mut k = k.clone();
                    k.push(e);
                    k
                })
            })
            .collect();
    }
    let mut monomials: Vec<SpectralMonomial> = all
        .into_iter()
        .map(|k| {
            let l = k
                .iter()
                .zip(&sing.exponents)
                .map(|(&ki, &ai)| BigRational::new(BigInt::from(ki + 1), BigInt::from(ai)))
                .fold(BigRational::zero(), |acc, x| acc + x);
            let alpha = &l - BigRational::one();
            SpectralMonomial {
                exponents: k,
                l,
                alpha,
            }
        })
        .collect();
    monomials.sort_by(|a, b| a.l.cmp(&b.l).then_with(|| a.exponents.cmp(&b.exponents)));
    SpectrumDatum { monomials }
}

/// Hodge type of a monomial of degree `l`: `(⌈l⌉ − 1, n − ⌈l⌉ + 1)` for
/// non-integer `l`, `(l, n + 1 − l)` otherwise.
pub fn hodge_type(l: &BigRational, n: i64) -> HodgeType {
    if l.is_integer() {
        let p = i64::try_from(l.to_integer()).expect("small degree");
        (p, n + 1 - p)
    } else {
        let p = i64::try_from(l.ceil().to_integer()).expect("small degree") - 1;
        (p, n - p)
    }
}

/// `Ω_f` with its monomial basis, bigrading, conjugation and pairings.
#[derive(Clone, Debug, Serialize)]
pub struct OmegaF {
    pub n: i64,
    pub spectrum: SpectrumDatum,
    pub types: Vec<HodgeType>,
    pub mhs: SplitMHS,
    /// Zero: the monodromy of a Brieskorn–Pham germ is semisimple.
    pub nilpotent: Matrix,
    pub residue: Matrix,
    pub modified_residue: Matrix,
}

impl OmegaF {
    pub fn dim(&self) -> usize {
        self.types.len()
    }

    /// The modified residue restricted to each pure weight, in graded coordinates.
    pub fn polarizations(&self) -> Result<BTreeMap<i64, (SplitMHS, Polarization)>> {
        let mut out = BTreeMap::new();
        for k in self.mhs.weights() {
            let (h, lifts) = self.mhs.graded_piece(k);
            let s = crate::exact::subspace::gram(&self.modified_residue, &lifts, &lifts);
            out.insert(k, (h, Polarization::new(k, s)?));
        }
        Ok(out)
    }
}

fn complement(k: &[u32], hess: &[u32]) -> Vec<u32> {
    hess.iter().zip(k).map(|(h, x)| h - x).collect()
}

/// Conjugation sends each monomial to its complement with respect to the
/// Hessian monomial.
pub fn bigrading(sing: &BPSingularity) -> Result<OmegaF> {
    let n = sing.n();
    let spec = spectrum(sing);
    let mu = spec.len();
    let hess = sing.hessian();
    let types: Vec<HodgeType> = spec.monomials.iter().map(|m| hodge_type(&m.l, n)).collect();
    let mut grouped: BTreeMap<HodgeType, Vec<Vector>> = BTreeMap::new();
    for (i, t) in types.iter().enumerate() {
        grouped.entry(*t).or_default().push(unit_vector(mu, i));
    }
    let pieces = grouped
        .into_iter()
        .map(|(t, vs)| (t, Subspace::span(mu, &vs)))
        .collect();
    let partner: Vec<usize> = spec
        .monomials
        .iter()
        .map(|m| {
            spec.index_of(&complement(&m.exponents, &hess))
                .expect("complement is a basis monomial")
        })
        .collect();
    let conj = Matrix::from_fn(mu, mu, |i, j| {
        if partner[j] == i {
            Scalar::one()
        } else {
            Scalar::zero()
        }
    });
    let mhs = SplitMHS::new(mu, pieces, conj.clone())?;
    let residue = conj;
    let signs: Vec<Scalar> = types.iter().map(|(p, _)| Scalar::sign_pow(*p)).collect();
    let modified_residue = &residue * &Matrix::diagonal(&signs);
    Ok(OmegaF {
        n,
        spectrum: spec,
        types,
        mhs,
        nilpotent: Matrix::zeros(mu, mu),
        residue,
        modified_residue,
    })
}

/// `res(x^a, x^b) = 1` when `a + b` is the Hessian monomial, `0` otherwise.
pub fn residue_pairing(sing: &BPSingularity) -> Matrix {
    let spec = spectrum(sing);
    let hess = sing.hessian();
    let mu = spec.len();
    Matrix::from_fn(mu, mu, |i, j| {
        let a = &spec.monomials[i].exponents;
        let b = &spec.monomials[j].exponents;
        if a.iter().zip(b).zip(&hess).all(|((x, y), h)| x + y == *h) {
            Scalar::one()
        } else {
            Scalar::zero()
        }
    })
}

/// `res(x, C̃ y)` with `C̃ = (−1)^p` on the `(p, q)` piece.
pub fn modified_residue(sing: &BPSingularity) -> Result<Matrix> {
    Ok(bigrading(sing)?.modified_residue)
}

#[derive(Clone, Debug, Serialize)]
pub struct GoodBasisReport {
    pub antidiagonal: bool,
    /// Nonzero entry of row `i` (0-based).
    pub entries: Vec<Scalar>,
    /// 1-based partner of `i` under the pairing, `0` if there is none.
    pub kappa: Vec<usize>,
    /// 1-based indices with `α_i = (n − 1)/2`.
    pub middle: Vec<usize>,
    /// `κ` is an involution, `κ(i) = μ + 1 − i` away from the middle and
    /// `κ(i) ∈ {i, μ + 1 − i}` on it.
    pub involution: bool,
}

pub fn good_basis_check(sing: &BPSingularity) -> GoodBasisReport {
    let res = residue_pairing(sing);
    let spec = spectrum(sing);
    let mu = spec.len();
    let antidiagonal = (0..mu).all(|i| {
        (0..mu).all(|j| Zero::is_zero(res.get(i, j)) != (j == mu - 1 - i))
    });
    let entries = (0..mu).map(|i| res.get(i, mu - 1 - i).clone()).collect();
    let kappa: Vec<usize> = (0..mu)
        .map(|i| {
            let partners: Vec<usize> = (0..mu).filter(|&j| !Zero::is_zero(res.get(i, j))).collect();
            if partners.len() == 1 {
                partners[0] + 1
            } else {
                0
            }
        })
        .collect();
    let mid = BigRational::new(BigInt::from(sing.n() - 1), BigInt::from(2));
    let middle: Vec<usize> = spec
        .monomials
        .iter()
        .enumerate()
        .filter(|(_, m)| m.alpha == mid)
        .map(|(i, _)| i + 1)
        .collect();
    let involution = (1..=mu).all(|i| {
        let k = kappa[i - 1];
        let allowed = if middle.contains(&i) {
            k == i || k == mu + 1 - i
        } else {
            k == mu + 1 - i
        };
        allowed && kappa[k - 1] == i
    });
    GoodBasisReport {
        antidiagonal,
        entries,
        kappa,
        middle,
        involution,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct OppositeReport {
    pub opposite: bool,
    /// `(p, q, dim Gr_F^p Gr^U_q)` with `p ≠ q` and nonzero dimension.
    pub witnesses: Vec<(i64, i64, usize)>,
}

/// `Gr_F^p Gr^U_q = 0` for `p ≠ q`, with `F` decreasing and `U` increasing.
pub fn opposite_filtrations(f: &FlagFiltration, u: &FlagFiltration) -> OppositeReport {
    let dim = |p: i64, q: i64| f.at_int(p).intersect(&u.at_int(q)).dim();
    let (flo, fhi) = f.integer_range().unwrap_or((0, 0));
    let (ulo, uhi) = u.integer_range().unwrap_or((0, 0));
    let mut witnesses = Vec::new();
    for p in flo - 1..=fhi + 1 {
        for q in ulo - 1..=uhi + 1 {
            if p == q {
                continue;
            }
            let g = dim(p, q) + dim(p + 1, q - 1) - dim(p + 1, q) - dim(p, q - 1);
            if g != 0 {
                witnesses.push((p, q, g));
            }
        }
    }
    OppositeReport {
        opposite: witnesses.is_empty(),
        witnesses,
    }
}

/// The spectral filtration: `U_q` is spanned by monomials with `⌊α⌋ + 1 ≤ q`.
pub fn spectral_filtration(omega: &OmegaF) -> Result<FlagFiltration> {
    let mu = omega.dim();
    let degs: Vec<i64> = omega
        .spectrum
        .monomials
        .iter()
        .map(|m| i64::try_from(m.alpha.floor().to_integer()).expect("small degree") + 1)
        .collect();
    let (lo, hi) = match (degs.iter().min(), degs.iter().max()) {
        (Some(&a), Some(&b)) => (a, b),
        _ => return Ok(FlagFiltration::trivial(mu, 0, false)),
    };
    let steps = (lo..=hi)
        .map(|q| {
            let vs: Vec<Vector> = (0..mu)
                .filter(|&i| degs[i] <= q)
                .map(|i| unit_vector(mu, i))
                .collect();
            (q, Subspace::span(mu, &vs))
        })
        .collect();
    FlagFiltration::increasing_int(mu, steps)
}

pub fn opposite_filtration_check(sing: &BPSingularity) -> Result<OppositeReport> {
    let omega = bigrading(sing)?;
    let u = spectral_filtration(&omega)?;
    Ok(opposite_filtrations(&omega.mhs.hodge_filtration(), &u))
}

#[derive(Clone, Debug, Serialize)]
pub struct RiemannHodgeReport {
    /// `Ŕes(P_r, P_s) = 0` for distinct pure pieces.
    pub orthogonal: bool,
    pub first_relation: BTreeMap<i64, BilinearReport>,
    pub positivity: BTreeMap<i64, PositivityReport>,
    pub passes: bool,
}

pub fn riemann_hodge_check(sing: &BPSingularity) -> Result<RiemannHodgeReport> {
    let omega = bigrading(sing)?;
    let weights = omega.mhs.weights();
    let lifts: BTreeMap<i64, Vec<Vector>> = weights
        .iter()
        .map(|&k| (k, omega.mhs.graded_piece(k).1))
        .collect();
    let orthogonal = weights.iter().all(|r| {
        weights.iter().filter(|s| *s != r).all(|s| {
            crate::exact::subspace::gram(&omega.modified_residue, &lifts[r], &lifts[s]).is_zero()
        })
    });
    let mut first_relation = BTreeMap::new();
    let mut positivity = BTreeMap::new();
    for (k, (h, pol)) in omega.polarizations()? {
        let zero = NilpotentOp::zero(h.dim());
        first_relation.insert(k, check_first_bilinear_relation(&h, &pol)?);
        positivity.insert(k, check_positivity(&h, &pol, &zero)?);
    }
    let passes = orthogonal
        && first_relation.values().all(|r| r.holds)
        && positivity.values().all(|r| r.all_definite);
    Ok(RiemannHodgeReport {
        orthogonal,
        first_relation,
        positivity,
        passes,
    })
}

/// `Ω_f` as a split mixed Hodge structure with the modified residue.
pub fn to_mhs(sing: &BPSingularity) -> Result<(SplitMHS, Matrix)> {
    let omega = bigrading(sing)?;
    Ok((omega.mhs, omega.modified_residue))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ratio;

    fn bp(e: &[u32]) -> BPSingularity {
        BPSingularity::new(e.to_vec()).unwrap()
    }

    #[test]
    fn milnor_numbers() {
        assert_eq!(milnor_number(&bp(&[3, 4])), 6);
        assert_eq!(milnor_number(&bp(&[2, 2])), 1);
        assert_eq!(milnor_number(&bp(&[2])), 1);
        assert!(BPSingularity::new(vec![1, 3]).is_err());
        assert!(BPSingularity::new(vec![]).is_err());
    }

    #[test]
    fn spectra() {
        let s = spectrum(&bp(&[3, 4]));
        let want: Vec<BigRational> = [7, 10, 11, 13, 14, 17].iter().map(|&k| ratio(k, 12)).collect();
        assert_eq!(s.degrees(), want);
        assert!(s.is_symmetric(1));
        assert_eq!(spectrum(&bp(&[2, 3])).degrees(), vec![ratio(5, 6), ratio(7, 6)]);
        assert_eq!(spectrum(&bp(&[2, 2])).degrees(), vec![ratio(1, 1)]);
    }

    #[test]
    fn bigradings() {
        let o = bigrading(&bp(&[3, 4])).unwrap();
        let idx = |k: &[u32]| o.spectrum.index_of(k).unwrap();
        for k in [[0, 0], [0, 1], [1, 0]] {
            assert_eq!(o.types[idx(&k)], (0, 1));
        }
        for k in [[0, 2], [1, 1], [1, 2]] {
            assert_eq!(o.types[idx(&k)], (1, 0));
        }
        assert_eq!(o.mhs.pure_weight(), Some(1));
        let o = bigrading(&bp(&[2, 2])).unwrap();
        assert_eq!(o.types, vec![(1, 1)]);
        let o = bigrading(&bp(&[2, 3])).unwrap();
        assert_eq!(o.types, vec![(0, 1), (1, 0)]);
    }

    #[test]
    fn residues() {
        let s = bp(&[3, 4]);
        let o = bigrading(&s).unwrap();
        let idx = |k: &[u32]| o.spectrum.index_of(k).unwrap();
        let r = residue_pairing(&s);
        assert_eq!(r.get(idx(&[0, 0]), idx(&[1, 2])), &Scalar::one());
        assert_eq!(r.get(idx(&[0, 0]), idx(&[0, 0])), &Scalar::zero());
        let m = modified_residue(&s).unwrap();
        assert_eq!(m.get(idx(&[0, 0]), idx(&[1, 2])), &Scalar::int(-1));
        assert_eq!(m.get(idx(&[0, 1]), idx(&[1, 1])), &Scalar::int(-1));
        assert_eq!(modified_residue(&bp(&[2, 2])).unwrap(), Matrix::from_ints(&[&[-1]]));
    }

    #[test]
    fn good_bases() {
        let g = good_basis_check(&bp(&[3, 4]));
        assert!(g.antidiagonal);
        assert_eq!(g.kappa, vec![6, 5, 4, 3, 2, 1]);
        assert!(g.middle.is_empty());
        let g = good_basis_check(&bp(&[2, 2]));
        assert_eq!(g.kappa, vec![1]);
        assert_eq!(g.middle, vec![1]);
        assert!(g.involution);
        assert!(good_basis_check(&bp(&[2, 3])).antidiagonal);
    }

    #[test]
    fn opposite() {
        assert!(opposite_filtration_check(&bp(&[3, 4])).unwrap().opposite);
        assert!(opposite_filtration_check(&bp(&[2, 3])).unwrap().opposite);
        let o = bigrading(&bp(&[3, 4])).unwrap();
        let u = spectral_filtration(&o).unwrap();
        let merged = u.shifted(&ratio(1, 1));
        assert!(!opposite_filtrations(&o.mhs.hodge_filtration(), &merged).opposite);
    }

    #[test]
    fn riemann_hodge() {
        for e in [&[3, 4][..], &[2, 2], &[2, 3], &[2, 3, 7]] {
            let r = riemann_hodge_check(&bp(e)).unwrap();
            assert!(r.passes, "{e:?}");
        }
        let (h, _) = to_mhs(&bp(&[3, 4])).unwrap();
        assert_eq!(h.hodge_numbers().get(&(1, 0)), Some(&3));
        assert_eq!(h.hodge_numbers().get(&(0, 1)), Some(&3));
        let (h, _) = to_mhs(&bp(&[2, 3, 7])).unwrap();
        assert_eq!(h.dim(), 12);
    }
}
