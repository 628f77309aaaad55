//! Nilpotent orbits over a product of punctured disks: frames of the
//! canonical extension, their presentations, the closure of the integral
//! lattice and the resulting fiber types over each boundary stratum.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::exact::matrix::Vector;
use crate::exact::{cyclotomic_exponents, Matrix, Scalar, Subspace};
use crate::mhs::SplitMHS;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NilpotentOrbit {
    pub lattice_dim: usize,
    #[serde(rename = "Q")]
    pub q: Matrix,
    #[serde(rename = "N")]
    pub n_list: Vec<Matrix>,
    pub bigrading: SplitMHS,
    #[serde(default = "Scalar::i")]
    pub omega: Scalar,
}

impl NilpotentOrbit {
    pub fn new(q: Matrix, n_list: Vec<Matrix>, bigrading: SplitMHS, omega: Scalar) -> Result<Self> {
        let orbit = NilpotentOrbit {
            lattice_dim: q.rows(),
            q,
            n_list,
            bigrading,
            omega,
        };
        orbit.validate()?;
        Ok(orbit)
    }

    pub fn validate(&self) -> Result<()> {
        let d = self.lattice_dim;
        if self.q.rows() != d || self.q.cols() != d || self.bigrading.dim() != d {
            return Err(Error::DimensionMismatch("orbit data".into()));
        }
        if self.n_list.iter().any(|n| n.rows() != d || n.cols() != d) {
            return Err(Error::DimensionMismatch("N_i".into()));
        }
        if self.omega.im().is_zero() {
            return Err(Error::Invalid("omega must have nonzero imaginary part".into()));
        }
        Ok(())
    }

    pub fn parameters(&self) -> usize {
        self.n_list.len()
    }
}

/// Rank-four orbit with `N_1 = N_2` and the symmetric form pairing the two
/// halves, with `I^{2,0} = ℂ(0,0,1,ω)` and `I^{1,−1} = ℂ(1,ω,0,0)`.
pub fn rank_four_orbit(omega: Scalar) -> Result<NilpotentOrbit> {
    let q = Matrix::from_ints(&[&[0, 0, 1, 0], &[0, 0, 0, 1], &[1, 0, 0, 0], &[0, 1, 0, 0]]);
    let n = Matrix::from_ints(&[&[0, 0, 1, 0], &[0, 0, 0, 1], &[0, 0, 0, 0], &[0, 0, 0, 0]]);
    let z = Scalar::zero;
    let o = Scalar::one;
    let w = omega.clone();
    let wb = omega.conj();
    let line = |v: Vector| Subspace::span(4, &[v]);
    let pieces = BTreeMap::from([
        ((2, 0), line(vec![z(), z(), o(), w.clone()])),
        ((0, 2), line(vec![z(), z(), o(), wb.clone()])),
        ((1, -1), line(vec![o(), w, z(), z()])),
        ((-1, 1), line(vec![o(), wb, z(), z()])),
    ]);
    let mhs = SplitMHS::new(4, pieces, Matrix::identity(4))?;
    NilpotentOrbit::new(q, vec![n.clone(), n], mhs, omega)
}

/// Frame `e_0 = (0,0,1,ω)`, `e_j = s_j^{−1}(1,ω,0,0)` of the top Hodge piece
/// on the canonical extension of [`rank_four_orbit`].
pub fn rank_four_frame(omega: &Scalar) -> SectionFamily {
    let z = Scalar::zero;
    let o = Scalar::one;
    let low = vec![o(), omega.clone(), z(), z()];
    SectionFamily {
        vars: 2,
        generators: vec![
            LaurentSection::monomial(vec![0, 0], vec![z(), z(), o(), omega.clone()]),
            LaurentSection::monomial(vec![-1, 0], low.clone()),
            LaurentSection::monomial(vec![0, -1], low),
        ],
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct NReport {
    pub index: usize,
    pub nilpotent: bool,
    /// `Q(Nx, y) + Q(x, Ny) = 0`.
    pub antisymmetric: bool,
    /// `Q(Nx, y) = Q(x, Ny)`.
    pub symmetric: bool,
    /// `N I^{p,q} ⊆ I^{p−1,q−1}`.
    pub type_minus_one: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct OrbitReport {
    pub commuting: bool,
    pub operators: Vec<NReport>,
}

pub fn orbit_check(orbit: &NilpotentOrbit) -> OrbitReport {
    let q = &orbit.q;
    let operators = orbit
        .n_list
        .iter()
        .enumerate()
        .map(|(index, n)| {
            let nt = &n.transpose() * q;
            let qn = q * n;
            NReport {
                index,
                nilpotent: n.nilpotency_index().is_some(),
                antisymmetric: (&nt + &qn).is_zero(),
                symmetric: nt == qn,
                type_minus_one: orbit.bigrading.has_type(n, -1, -1),
            }
        })
        .collect();
    let commuting = orbit
        .n_list
        .iter()
        .enumerate()
        .all(|(i, a)| orbit.n_list.iter().skip(i + 1).all(|b| a.commutes_with(b)));
    OrbitReport {
        commuting,
        operators,
    }
}

/// Polynomial in `s_1, …, s_k` with exponent vectors as keys.
pub type Poly = BTreeMap<Vec<u32>, Scalar>;

pub fn eval_poly(p: &Poly, point: &[Scalar]) -> Scalar {
    let mut acc = Scalar::zero();
    for (e, c) in p {
        let mut t = c.clone();
        for (x, &k) in point.iter().zip(e) {
            t = &t * &x.pow(k);
        }
        acc += &t;
    }
    acc
}

pub fn render_poly(p: &Poly) -> String {
    if p.is_empty() {
        return "0".into();
    }
    let terms: Vec<String> = p
        .iter()
        .map(|(e, c)| {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| {
                    if k == 1 {
                        format!("s{}", i + 1)
                    } else {
                        format!("s{}^{}", i + 1, k)
                    }
                })
                .collect();
            match (mono.is_empty(), c.is_one()) {
                (true, _) => format!("{c}"),
                (false, true) => mono.join("*"),
                (false, false) if *c == -Scalar::one() => format!("-{}", mono.join("*")),
                (false, false) => format!("({c})*{}", mono.join("*")),
            }
        })
        .collect();
    terms.join(" + ").replace("+ -", "- ")
}

/// Vector-valued Laurent polynomial `Σ s^γ v_γ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LaurentSection {
    pub terms: Vec<(Vec<i64>, Vector)>,
}

impl LaurentSection {
    pub fn monomial(exponent: Vec<i64>, v: Vector) -> Self {
        LaurentSection {
            terms: vec![(exponent, v)],
        }
    }

    pub fn eval(&self, point: &[Scalar]) -> Result<Vector> {
        let d = self.terms.first().map_or(0, |t| t.1.len());
        let mut out = vec![Scalar::zero(); d];
        for (e, v) in &self.terms {
            let mut c = Scalar::one();
            for (x, &k) in point.iter().zip(e) {
                let base = if k < 0 {
                    x.inv().ok_or_else(|| Error::Invalid("pole at the evaluation point".into()))?
                } else {
                    x.clone()
                };
                c = &c * &base.pow(k.unsigned_abs() as u32);
            }
            for (o, x) in out.iter_mut().zip(v) {
                *o += &(&c * x);
            }
        }
        Ok(out)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SectionFamily {
    pub vars: usize,
    pub generators: Vec<LaurentSection>,
}

impl SectionFamily {
    fn ambient(&self) -> usize {
        self.generators
            .iter()
            .flat_map(|g| g.terms.first())
            .map(|t| t.1.len())
            .next()
            .unwrap_or(0)
    }

    fn validate(&self) -> Result<()> {
        let d = self.ambient();
        let ok = self
            .generators
            .iter()
            .flat_map(|g| &g.terms)
            .all(|(e, v)| e.len() == self.vars && v.len() == d);
        if ok {
            Ok(())
        } else {
            Err(Error::DimensionMismatch("section family".into()))
        }
    }
}

fn monomials_up_to(vars: usize, bound: usize) -> Vec<Vec<u32>> {
    let mut out: Vec<Vec<u32>> = vec![vec![]];
    for _ in 0..vars {
        out = out
            .into_iter()
            .flat_map(|m| {
                let used: u32 = m.iter().sum();
                (0..=(bound as u32 - used)).map(move |k| {
                    let mut m = m.clone();
                    m.push(k);
                    m
                })
            })
            .collect();
    }
    out.sort_by_key(|m| (m.iter().sum::<u32>(), m.clone()));
    out
}

fn generic_points(vars: usize) -> Vec<Vec<Scalar>> {
    const PRIMES: [i64; 8] = [2, 3, 5, 7, 11, 13, 17, 19];
    (0..3)
        .map(|t| {
            (0..vars)
                .map(|j| Scalar::frac(PRIMES[(j + 3 * t) % 8] + j as i64, 7 + t as i64))
                .collect()
        })
        .collect()
}

/// Relations among the generators, each a column of polynomials.
#[derive(Clone, Debug, Serialize)]
pub struct Presentation {
    pub vars: usize,
    pub generators: usize,
    pub bound: usize,
    pub relations: Vec<Vec<Poly>>,
}

impl Presentation {
    pub fn fiber_dim(&self, point: &[Scalar]) -> usize {
        let cols: Vec<Vector> = self
            .relations
            .iter()
            .map(|r| r.iter().map(|p| eval_poly(p, point)).collect())
            .collect();
        self.generators - Matrix::from_cols(&cols, self.generators).rank()
    }

    /// Fiber dimension at a general point of `{s_j = 0 for j ∈ vanishing}`.
    pub fn stratum_fiber_dim(&self, vanishing: &[usize]) -> usize {
        generic_points(self.vars)
            .into_iter()
            .map(|mut p| {
                for &j in vanishing {
                    p[j] = Scalar::zero();
                }
                self.fiber_dim(&p)
            })
            .min()
            .unwrap_or(self.generators)
    }

    /// Span of all `s^δ r` of total degree `≤ bound`, with generators
    /// relabelled by `order` (`order[i]` is the new index of generator `i`).
    pub fn truncated_span(&self, order: &[usize]) -> Subspace {
        let monos = monomials_up_to(self.vars, self.bound);
        let index: BTreeMap<(usize, Vec<u32>), usize> = (0..self.generators)
            .flat_map(|j| monos.iter().map(move |m| (j, m.clone())))
            .enumerate()
            .map(|(i, k)| (k, i))
            .collect();
        let dim = index.len();
        let mut vs = Vec::new();
        for r in &self.relations {
            let deg = r
                .iter()
                .flat_map(|p| p.keys())
                .map(|e| e.iter().sum::<u32>())
                .max()
                .unwrap_or(0) as usize;
            for shift in monos.iter().filter(|m| m.iter().sum::<u32>() as usize + deg <= self.bound) {
                let mut v = vec![Scalar::zero(); dim];
                for (j, p) in r.iter().enumerate() {
                    for (e, c) in p {
                        let m: Vec<u32> = e.iter().zip(shift).map(|(a, b)| a + b).collect();
                        v[index[&(order[j], m)]] = c.clone();
                    }
                }
                vs.push(v);
            }
        }
        Subspace::span(dim, &vs)
    }

    pub fn render(&self) -> Vec<Vec<String>> {
        self.relations
            .iter()
            .map(|r| r.iter().map(render_poly).collect())
            .collect()
    }
}

/// Minimal polynomial relations of total degree `≤ bound`.
pub fn presentation(fam: &SectionFamily, bound: usize) -> Result<Presentation> {
    fam.validate()?;
    let g = fam.generators.len();
    let d = fam.ambient();
    let monos = monomials_up_to(fam.vars, bound);
    let unknowns: Vec<(usize, Vec<u32>)> = (0..g)
        .flat_map(|j| monos.iter().map(move |m| (j, m.clone())))
        .collect();
    let mut rows: BTreeMap<(Vec<i64>, usize), Vec<Scalar>> = BTreeMap::new();
    for (col, (j, m)) in unknowns.iter().enumerate() {
        for (e, v) in &fam.generators[*j].terms {
            let key: Vec<i64> = e.iter().zip(m).map(|(a, &b)| a + b as i64).collect();
            for (c, x) in v.iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                let row = rows
                    .entry((key.clone(), c))
                    .or_insert_with(|| vec![Scalar::zero(); unknowns.len()]);
                row[col] += x;
            }
        }
    }
    let system = Matrix::from_rows_with_cols(rows.into_values().collect(), unknowns.len())?;
    let n = unknowns.len();
    let degree_of = |col: usize| unknowns[col].1.iter().sum::<u32>() as usize;
    let kernel = Subspace::kernel(&system);

    let to_relation = |v: &Vector| -> Vec<Poly> {
        let mut r = vec![Poly::new(); g];
        for (col, x) in v.iter().enumerate() {
            if !x.is_zero() {
                r[unknowns[col].0].insert(unknowns[col].1.clone(), x.clone());
            }
        }
        r
    };
    let mut chosen: Vec<Vector> = Vec::new();
    for deg in 0..=bound {
        let low = Subspace::coordinate(n, &(0..n).filter(|&c| degree_of(c) <= deg).collect::<Vec<_>>());
        let k_deg = kernel.intersect(&low);
        let mut multiples = Vec::new();
        for r in &chosen {
            let rdeg = (0..n).filter(|&c| !r[c].is_zero()).map(degree_of).max().unwrap_or(0);
            for shift in monos.iter().filter(|m| m.iter().sum::<u32>() as usize + rdeg <= deg) {
                let mut v = vec![Scalar::zero(); n];
                for (c, x) in r.iter().enumerate() {
                    if x.is_zero() {
                        continue;
                    }
                    let (j, m) = &unknowns[c];
                    let target: Vec<u32> = m.iter().zip(shift).map(|(a, b)| a + b).collect();
                    let col = unknowns
                        .iter()
                        .position(|u| u.0 == *j && u.1 == target)
                        .expect("within bound");
                    v[col] = x.clone();
                }
                multiples.push(v);
            }
        }
        let covered = Subspace::span(n, &multiples);
        for mut v in covered.complement_in(&k_deg) {
            let last = v.iter().rev().find(|x| !x.is_zero()).cloned().expect("nonzero");
            let inv = last.inv().expect("nonzero");
            for x in v.iter_mut() {
                *x = &*x * &inv;
            }
            chosen.push(v);
        }
    }
    let pres = Presentation {
        vars: fam.vars,
        generators: g,
        bound,
        relations: chosen.iter().map(to_relation).collect(),
    };
    // relation rank over the fraction field must be g − generic rank
    let generic_rank = generic_points(fam.vars)
        .iter()
        .map(|p| {
            let cols = fam
                .generators
                .iter()
                .map(|s| s.eval(p))
                .collect::<Result<Vec<_>>>()?;
            Ok(Matrix::from_cols(&cols, d).rank())
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .max()
        .unwrap_or(0);
    let found = g - pres.stratum_fiber_dim(&[]);
    if found < g - generic_rank {
        return Err(Error::DegreeBoundTooSmall { bound });
    }
    Ok(pres)
}

/// Sign conventions for `σ Q(e, e^{ε Σ z_i N_i} h)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosureConvention {
    pub pairing_sign: i64,
    pub exponent_sign: i64,
}

impl Default for ClosureConvention {
    fn default() -> Self {
        ClosureConvention {
            pairing_sign: -1,
            exponent_sign: -1,
        }
    }
}

/// `Σ z^a s^b ⟨form, h⟩`: each key pairs a `z`-exponent with an `s`-exponent.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClosureExpr {
    pub terms: BTreeMap<(Vec<u32>, Vec<i64>), Vector>,
}

impl ClosureExpr {
    pub fn evaluate(&self, h: &[Scalar]) -> BTreeMap<(Vec<u32>, Vec<i64>), Scalar> {
        self.terms
            .iter()
            .map(|(k, f)| (k.clone(), crate::exact::matrix::dot(f, h)))
            .filter(|(_, c)| !c.is_zero())
            .collect()
    }

    /// Substitutes `z_i ↦ z_i + c`.
    pub fn shift_z(&self, i: usize, c: &Scalar) -> ClosureExpr {
        let mut terms: BTreeMap<(Vec<u32>, Vec<i64>), Vector> = BTreeMap::new();
        for ((z, s), f) in &self.terms {
            let k = z[i];
            for j in 0..=k {
                let coef = &Scalar::int(binomial(k, j) as i64) * &c.pow(k - j);
                let mut z2 = z.clone();
                z2[i] = j;
                let e = terms
                    .entry((z2, s.clone()))
                    .or_insert_with(|| vec![Scalar::zero(); f.len()]);
                for (a, b) in e.iter_mut().zip(f) {
                    *a += &(&coef * b);
                }
            }
        }
        terms.retain(|_, f| f.iter().any(|x| !x.is_zero()));
        ClosureExpr { terms }
    }

    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|((z, s), f)| {
                let mut factors = Vec::new();
                for (i, &k) in z.iter().enumerate() {
                    match k {
                        0 => {}
                        1 => factors.push(format!("z{}", i + 1)),
                        _ => factors.push(format!("z{}^{}", i + 1, k)),
                    }
                }
                for (i, &k) in s.iter().enumerate() {
                    if k != 0 {
                        factors.push(format!("s{}^{}", i + 1, k));
                    }
                }
                let form: Vec<String> = f
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(i, c)| {
                        if c.is_one() {
                            format!("h{}", i + 1)
                        } else if (-c.clone()).is_one() {
                            format!("-h{}", i + 1)
                        } else {
                            format!("({c})h{}", i + 1)
                        }
                    })
                    .collect();
                factors.push(format!("({})", form.join(" + ")));
                factors.join("*")
            })
            .collect();
        parts.join(" + ")
    }
}

fn binomial(n: u32, k: u32) -> u64 {
    (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i + 1) as u64)
}

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// `σ Q(e, e^{ε Σ z_i N_i} h)` for each frame vector `e`, as a polynomial in
/// `z_i` and `s_j^{±1}` whose coefficients are linear forms in `h`. The
/// relation `s_j = e^{2πi z_j}` is not substituted.
pub fn integral_closure(
    orbit: &NilpotentOrbit,
    frame: &SectionFamily,
    conv: ClosureConvention,
) -> Result<Vec<ClosureExpr>> {
    orbit.validate()?;
    frame.validate()?;
    let k = orbit.parameters();
    if frame.vars != k {
        return Err(Error::DimensionMismatch("frame variables vs orbit parameters".into()));
    }
    let d = orbit.lattice_dim;
    let mut powers: Vec<(Vec<u32>, Matrix, Scalar)> = vec![(vec![], Matrix::identity(d), Scalar::one())];
    for n in &orbit.n_list {
        let index = n
            .nilpotency_index()
            .ok_or(Error::NotNilpotent)? as u32;
        let mut next = Vec::new();
        for (e, m, c) in &powers {
            for a in 0..index {
                let coef = &(c * &Scalar::sign_pow(if conv.exponent_sign < 0 { a as i64 } else { 0 }))
                    * &Scalar::from_rational(BigRational::new(BigInt::one(), factorial(a)));
                let mut e2 = e.clone();
                e2.push(a);
                next.push((e2, m * &n.pow(a as usize), coef));
            }
        }
        powers = next;
    }
    let sigma = Scalar::int(conv.pairing_sign.signum());
    let mut out = Vec::new();
    for g in &frame.generators {
        let mut terms: BTreeMap<(Vec<u32>, Vec<i64>), Vector> = BTreeMap::new();
        for (s, v) in &g.terms {
            let row = orbit.q.transpose().apply(v);
            for (z, m, c) in &powers {
                let f: Vector = m
                    .transpose()
                    .apply(&row)
                    .into_iter()
                    .map(|x| &(&x * c) * &sigma)
                    .collect();
                if f.iter().all(Zero::is_zero) {
                    continue;
                }
                let e = terms
                    .entry((z.clone(), s.clone()))
                    .or_insert_with(|| vec![Scalar::zero(); d]);
                for (a, b) in e.iter_mut().zip(&f) {
                    *a += b;
                }
            }
        }
        terms.retain(|_, f| f.iter().any(|x| !x.is_zero()));
        out.push(ClosureExpr { terms });
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct StratumReport {
    /// Indices `j` with `s_j = 0`.
    pub vanishing: Vec<usize>,
    pub fiber_dim: usize,
    pub bounded_rank: usize,
    pub torus_rank: usize,
    pub vector_dim: usize,
}

/// Rank of `{h ∈ ℤ^d : every form vanishes on h}`.
fn integral_kernel_rank(forms: &[Vector], d: usize) -> usize {
    let rows: Vec<Vector> = forms
        .iter()
        .flat_map(|f| {
            let re: Vector = f.iter().map(Scalar::real_part).collect();
            let im: Vector = f.iter().map(|x| Scalar::from_rational(x.im().clone())).collect();
            [re, im]
        })
        .collect();
    if rows.is_empty() {
        return d;
    }
    d - Matrix::from_rows_with_cols(rows, d).expect("shape").rank()
}

/// Torus rank and vector-space dimension of the fiber over every boundary
/// stratum. Terms with a pole in `s_j` or a positive power of `z_j` must
/// vanish for `h` to stay bounded where `s_j = 0`.
pub fn fiber_classification(
    orbit: &NilpotentOrbit,
    frame: &SectionFamily,
    bound: usize,
    conv: ClosureConvention,
) -> Result<Vec<StratumReport>> {
    let pres = presentation(frame, bound)?;
    let exprs = integral_closure(orbit, frame, conv)?;
    let k = orbit.parameters();
    let mut out = Vec::new();
    for mask in 0u32..(1 << k) {
        let vanishing: Vec<usize> = (0..k).filter(|j| mask & (1 << j) != 0).collect();
        let forms: Vec<Vector> = exprs
            .iter()
            .flat_map(|e| &e.terms)
            .filter(|((z, s), _)| vanishing.iter().any(|&j| s[j] < 0 || z[j] > 0))
            .map(|(_, f)| f.clone())
            .collect();
        let bounded_rank = integral_kernel_rank(&forms, orbit.lattice_dim);
        if bounded_rank % 2 == 1 {
            return Err(Error::OddBoundedRank(bounded_rank));
        }
        let torus_rank = bounded_rank / 2;
        let fiber_dim = pres.stratum_fiber_dim(&vanishing);
        out.push(StratumReport {
            vanishing,
            fiber_dim,
            bounded_rank,
            torus_rank,
            vector_dim: fiber_dim.saturating_sub(torus_rank),
        });
    }
    out.sort_by_key(|r| (r.vanishing.len(), r.vanishing.clone()));
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct ResidueFrame {
    /// `α ∈ [0, 1)` with `e^{2πiα}` an eigenvalue, with multiplicity.
    #[serde(with = "crate::exact::ratstr::vec")]
    pub exponents: Vec<BigRational>,
    /// `∇e = −α e ⊗ ds/s` on the canonical extension.
    #[serde(with = "crate::exact::ratstr::vec")]
    pub connection_residues: Vec<BigRational>,
    /// `T` is diagonalizable: the frame consists of eigenlines.
    pub semisimple: bool,
}

pub fn canonical_extension_frame(t: &Matrix, bound: u32) -> Result<ResidueFrame> {
    let exponents = cyclotomic_exponents(t, bound)?;
    let connection_residues = exponents.iter().map(|a| -a).collect();
    let semisimple = (0..=bound).filter(|&m| m > 0).any(|m| {
        let tm = t.pow(m as usize);
        tm == Matrix::identity(t.rows())
    });
    Ok(ResidueFrame {
        exponents,
        connection_residues,
        semisimple,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::matrix::unit_vector;
    use crate::exact::ratio;

    fn sample() -> (NilpotentOrbit, SectionFamily) {
        let orbit = rank_four_orbit(Scalar::i()).unwrap();
        let frame = rank_four_frame(&orbit.omega);
        (orbit, frame)
    }

    #[test]
    fn orbit_conventions() {
        let (orbit, _) = sample();
        let r = orbit_check(&orbit);
        assert!(r.commuting);
        for op in &r.operators {
            assert!(op.symmetric && !op.antisymmetric && op.type_minus_one && op.nilpotent);
        }
        let z = NilpotentOrbit {
            n_list: vec![Matrix::zeros(4, 4)],
            ..orbit
        };
        let r = orbit_check(&z);
        assert!(r.operators[0].symmetric && r.operators[0].antisymmetric);
        let q = Matrix::from_ints(&[&[0, 1], &[-1, 0]]);
        let n = Matrix::from_ints(&[&[0, 1], &[0, 0]]);
        assert!((&(&n.transpose() * &q) + &(&q * &n)).is_zero());
    }

    #[test]
    fn presentation_of_frame() {
        let (_, frame) = sample();
        let p = presentation(&frame, 2).unwrap();
        assert_eq!(p.relations.len(), 1);
        assert_eq!(p.render()[0], vec!["0", "-s1", "s2"]);
        assert_eq!(p.fiber_dim(&[Scalar::zero(), Scalar::zero()]), 3);
        assert_eq!(p.fiber_dim(&[Scalar::int(2), Scalar::int(3)]), 2);
        assert!(matches!(presentation(&frame, 0), Err(Error::DegreeBoundTooSmall { .. })));
    }

    #[test]
    fn presentation_ignores_order() {
        let (_, frame) = sample();
        let base = presentation(&frame, 2).unwrap().truncated_span(&[0, 1, 2]);
        let perm = [2, 0, 1];
        let mut gens = vec![frame.generators[0].clone(); 3];
        for (i, &p) in perm.iter().enumerate() {
            gens[i] = frame.generators[p].clone();
        }
        let permuted = SectionFamily { vars: 2, generators: gens };
        let back = presentation(&permuted, 2).unwrap().truncated_span(&perm);
        assert_eq!(base, back);
    }

    #[test]
    fn closure_formulas() {
        let (orbit, frame) = sample();
        let exprs = integral_closure(&orbit, &frame, ClosureConvention::default()).unwrap();
        let h: Vector = [5, 7, 11, 13].iter().map(|&x| Scalar::int(x)).collect();
        let w = Scalar::i();
        let a = &h[2] + &(&h[3] * &w);
        let b = &h[0] + &(&h[1] * &w);
        let e0 = exprs[0].evaluate(&h);
        assert_eq!(e0[&(vec![1, 0], vec![0, 0])], a);
        assert_eq!(e0[&(vec![0, 1], vec![0, 0])], a);
        assert_eq!(e0[&(vec![0, 0], vec![0, 0])], -b);
        assert_eq!(e0.len(), 3);
        let e1 = exprs[1].evaluate(&h);
        assert_eq!(e1.len(), 1);
        assert_eq!(e1[&(vec![0, 0], vec![-1, 0])], -a.clone());
        let e2 = exprs[2].evaluate(&h);
        assert_eq!(e2[&(vec![0, 0], vec![0, -1])], -a);
        let zero = vec![Scalar::zero(); 4];
        assert!(exprs.iter().all(|e| e.evaluate(&zero).is_empty()));
        let e = exprs[0].evaluate(&unit_vector(4, 0));
        assert_eq!(e.into_values().collect::<Vec<_>>(), vec![Scalar::int(-1)]);
        assert!(exprs[1].evaluate(&unit_vector(4, 0)).is_empty());
    }

    #[test]
    fn closure_translation() {
        let (orbit, frame) = sample();
        let exprs = integral_closure(&orbit, &frame, ClosureConvention::default()).unwrap();
        let h: Vector = [1, -2, 3, 4].iter().map(|&x| Scalar::int(x)).collect();
        // z_1 ↦ z_1 + 1 corresponds to h ↦ e^{−N_1} h
        let moved = (&Matrix::identity(4) - &orbit.n_list[0]).apply(&h);
        for e in &exprs {
            assert_eq!(e.shift_z(0, &Scalar::one()).evaluate(&h), e.evaluate(&moved));
        }
    }

    #[test]
    fn strata() {
        let (orbit, frame) = sample();
        let table = fiber_classification(&orbit, &frame, 2, ClosureConvention::default()).unwrap();
        let get = |v: &[usize]| table.iter().find(|r| r.vanishing == v).unwrap();
        assert_eq!((get(&[]).torus_rank, get(&[]).vector_dim), (2, 0));
        assert_eq!((get(&[0]).torus_rank, get(&[0]).vector_dim), (1, 1));
        assert_eq!((get(&[1]).torus_rank, get(&[1]).vector_dim), (1, 1));
        assert_eq!((get(&[0, 1]).torus_rank, get(&[0, 1]).vector_dim), (1, 2));
        assert_eq!(get(&[0, 1]).fiber_dim, 3);
    }

    #[test]
    fn undegenerate_family() {
        let q = Matrix::from_ints(&[&[0, 1], &[-1, 0]]);
        let w = Scalar::i();
        let pieces = BTreeMap::from([
            ((1, 0), Subspace::span(2, &[vec![Scalar::one(), w.clone()]])),
            ((0, 1), Subspace::span(2, &[vec![Scalar::one(), w.conj()]])),
        ]);
        let mhs = SplitMHS::new(2, pieces, Matrix::identity(2)).unwrap();
        let orbit = NilpotentOrbit::new(q, vec![Matrix::zeros(2, 2)], mhs, w.clone()).unwrap();
        let frame = SectionFamily {
            vars: 1,
            generators: vec![LaurentSection::monomial(vec![0], vec![Scalar::one(), w])],
        };
        let table = fiber_classification(&orbit, &frame, 1, ClosureConvention::default()).unwrap();
        assert!(table.iter().all(|r| r.torus_rank == 1 && r.fiber_dim == 1));
    }

    #[test]
    fn residue_frames() {
        let t = Matrix::from_ints(&[&[0, 1], &[-1, 1]]);
        let r = canonical_extension_frame(&t, 120).unwrap();
        assert_eq!(r.exponents, vec![ratio(1, 6), ratio(5, 6)]);
        assert_eq!(r.connection_residues, vec![ratio(-1, 6), ratio(-5, 6)]);
        let u = Matrix::from_ints(&[&[1, 1], &[0, 1]]);
        let r = canonical_extension_frame(&u, 120).unwrap();
        assert_eq!(r.exponents, vec![ratio(0, 1), ratio(0, 1)]);
        assert!(!r.semisimple);
        let p = Matrix::from_ints(&[&[1, 2], &[1, 3]]);
        let rot = Matrix::from_ints(&[&[0, -1], &[1, 0]]);
        let conj = &(&p.inverse().unwrap() * &rot) * &p;
        assert_eq!(
            canonical_extension_frame(&conj, 120).unwrap().exponents,
            vec![ratio(1, 4), ratio(3, 4)]
        );
        assert!(canonical_extension_frame(&Matrix::from_ints(&[&[2]]), 120).is_err());
    }
}
