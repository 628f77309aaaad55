//! Rational univariate polynomials and cyclotomic factorization of
//! characteristic polynomials.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::flag::ratio;
use super::Matrix;
use crate::{Error, Result};

pub const DEFAULT_CYCLOTOMIC_BOUND: u32 = 120;

/// Dense coefficients, lowest degree first, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatPoly(Vec<BigRational>);

impl RatPoly {
    pub fn new(mut c: Vec<BigRational>) -> Self {
        while c.last().is_some_and(Zero::is_zero) {
            c.pop();
        }
        RatPoly(c)
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&x| BigRational::from_integer(x.into())).collect())
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.0
    }

    /// Degree; the zero polynomial has degree `None`.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, o: &RatPoly) -> RatPoly {
        if self.is_zero() || o.is_zero() {
            return RatPoly(vec![]);
        }
        let mut c = vec![BigRational::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        RatPoly::new(c)
    }

    /// Quotient and remainder by a nonzero divisor.
    pub fn div_rem(&self, d: &RatPoly) -> (RatPoly, RatPoly) {
        let dd = d.degree().expect("division by zero polynomial");
        let lead = d.0[dd].clone();
        let mut r = self.0.clone();
        let n = self.0.len();
        if n <= dd {
            return (RatPoly(vec![]), self.clone());
        }
        let mut q = vec![BigRational::zero(); n - dd];
        for k in (0..n - dd).rev() {
            let c = &r[k + dd] / &lead;
            if c.is_zero() {
                continue;
            }
            for (j, dj) in d.0.iter().enumerate() {
                r[k + j] -= &c * dj;
            }
            q[k] = c;
        }
        r.truncate(dd);
        (RatPoly::new(q), RatPoly::new(r))
    }
}

pub fn euler_phi(m: u32) -> u32 {
    (1..=m).filter(|k| k.gcd(&m) == 1).count() as u32
}

/// `Φ_m` by dividing `x^m − 1` by `Φ_d` for the proper divisors `d` of `m`.
pub fn cyclotomic_polynomial(m: u32) -> RatPoly {
    assert!(m >= 1, "cyclotomic order must be positive");
    let mut c = vec![BigRational::zero(); m as usize + 1];
    c[0] = -BigRational::one();
    c[m as usize] = BigRational::one();
    let mut p = RatPoly::new(c);
    for d in (1..m).filter(|d| m.is_multiple_of(*d)) {
        p = p.div_rem(&cyclotomic_polynomial(d)).0;
    }
    p
}

/// One irreducible cyclotomic factor with its multiplicity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclotomicFactor {
    pub order: u32,
    pub multiplicity: usize,
}

/// Characteristic polynomial of a matrix with rational entries.
pub fn rational_charpoly(t: &Matrix) -> Result<RatPoly> {
    if !t.is_real() {
        return Err(Error::Invalid("matrix must have rational entries".into()));
    }
    Ok(RatPoly::new(
        t.charpoly()?.iter().map(|c| c.re().clone()).collect(),
    ))
}

/// Factors `p` into cyclotomic polynomials of order `≤ bound`.
pub fn cyclotomic_factors(p: &RatPoly, bound: u32) -> Result<Vec<CyclotomicFactor>> {
    let mut rest = p.clone();
    let mut out = Vec::new();
    for m in 1..=bound {
        let Some(deg) = rest.degree() else { break };
        if deg == 0 {
            break;
        }
        if euler_phi(m) as usize > deg {
            continue;
        }
        let phi = cyclotomic_polynomial(m);
        let mut mult = 0;
        loop {
            let (q, r) = rest.div_rem(&phi);
            if !r.is_zero() {
                break;
            }
            rest = q;
            mult += 1;
        }
        if mult > 0 {
            out.push(CyclotomicFactor {
                order: m,
                multiplicity: mult,
            });
        }
    }
    match rest.degree() {
        Some(0) => Ok(out),
        d => Err(Error::NotQuasiUnipotent {
            degree: d.unwrap_or(0),
            bound,
        }),
    }
}

/// Exponents `k/m ∈ [0,1)` of the eigenvalues `e^{2πik/m}` of `T`, with
/// multiplicity, sorted ascending.
pub fn cyclotomic_exponents(t: &Matrix, bound: u32) -> Result<Vec<BigRational>> {
    if !t.is_square() {
        return Err(Error::NotSquare {
            rows: t.rows(),
            cols: t.cols(),
        });
    }
    if !t.is_invertible() {
        return Err(Error::Singular);
    }
    let factors = cyclotomic_factors(&rational_charpoly(t)?, bound)?;
    let mut out = Vec::new();
    for f in factors {
        for k in (0..f.order).filter(|k| k.gcd(&f.order) == 1) {
            for _ in 0..f.multiplicity {
                out.push(ratio(k as i64, f.order as i64));
            }
        }
    }
    out.sort();
    Ok(out)
}

/// Product of `Φ_m` over the orders a list of exponents came from.
pub fn reconstruct_from_exponents(exponents: &[BigRational]) -> RatPoly {
    use std::collections::BTreeMap;
    let mut counts: BTreeMap<BigInt, usize> = BTreeMap::new();
    for e in exponents {
        *counts.entry(e.denom().clone()).or_default() += 1;
    }
    let mut p = RatPoly::from_ints(&[1]);
    for (m, c) in counts {
        let m: u32 = m.try_into().expect("small order");
        let phi = cyclotomic_polynomial(m);
        let deg = euler_phi(m) as usize;
        for _ in 0..c / deg {
            p = p.mul(&phi);
        }
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::flag::rat;

    #[test]
    fn small_cyclotomics() {
        assert_eq!(cyclotomic_polynomial(1), RatPoly::from_ints(&[-1, 1]));
        assert_eq!(cyclotomic_polynomial(4), RatPoly::from_ints(&[1, 0, 1]));
        assert_eq!(cyclotomic_polynomial(6), RatPoly::from_ints(&[1, -1, 1]));
        assert_eq!(
            cyclotomic_polynomial(12),
            RatPoly::from_ints(&[1, 0, -1, 0, 1])
        );
    }

    #[test]
    fn order_six_monodromy() {
        let t = Matrix::from_ints(&[&[0, 1], &[-1, 1]]);
        let e = cyclotomic_exponents(&t, DEFAULT_CYCLOTOMIC_BOUND).unwrap();
        assert_eq!(e, vec![ratio(1, 6), ratio(5, 6)]);
    }

    #[test]
    fn identity_and_rotation() {
        let e = cyclotomic_exponents(&Matrix::identity(2), 120).unwrap();
        assert_eq!(e, vec![rat(0), rat(0)]);
        let r = Matrix::from_ints(&[&[0, -1], &[1, 0]]);
        assert_eq!(
            cyclotomic_exponents(&r, 120).unwrap(),
            vec![ratio(1, 4), ratio(3, 4)]
        );
    }

    #[test]
    fn non_cyclotomic_fails() {
        let t = Matrix::from_ints(&[&[2, 1], &[1, 1]]);
        assert!(matches!(
            cyclotomic_exponents(&t, 120),
            Err(Error::NotQuasiUnipotent { .. })
        ));
        // Φ_7 is out of reach when the bound is too small
        let mut c = Matrix::zeros(6, 6);
        for k in 0..5 {
            c.set(k + 1, k, crate::exact::Scalar::int(1));
        }
        for k in 0..6 {
            c.set(k, 5, crate::exact::Scalar::int(-1));
        }
        assert!(cyclotomic_exponents(&c, 6).is_err());
        assert_eq!(cyclotomic_exponents(&c, 120).unwrap().len(), 6);
    }

    #[test]
    fn reconstructs_charpoly() {
        let t = Matrix::from_ints(&[&[0, 1, 0], &[-1, 1, 0], &[0, 0, -1]]);
        let e = cyclotomic_exponents(&t, 120).unwrap();
        assert_eq!(reconstruct_from_exponents(&e), rational_charpoly(&t).unwrap());
    }
}
