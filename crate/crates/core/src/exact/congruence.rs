//! Congruence classification of rational bilinear forms.
//!
//! Symmetric forms are compared by rank, signature, discriminant modulo
//! squares and local Hasse invariants; alternating forms by rank.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::Matrix;
use crate::{Error, Result};

/// Diagonal entries of a congruent diagonal form `PᵀGP` (nonzero ones only).
pub fn diagonalize_symmetric(g: &Matrix) -> Result<Vec<BigRational>> {
    if !g.is_real() || !g.is_symmetric() {
        return Err(Error::NotSymmetric("rational symmetric"));
    }
    let n = g.rows();
    let mut a: Vec<Vec<BigRational>> = (0..n)
        .map(|i| (0..n).map(|j| g.get(i, j).re().clone()).collect())
        .collect();
    let mut out = Vec::new();
    let mut alive: Vec<usize> = (0..n).collect();
    while !alive.is_empty() {
        let pivot = alive.iter().copied().find(|&i| !a[i][i].is_zero());
        let p = match pivot {
            Some(p) => p,
            None => {
                // a zero diagonal with a nonzero off-diagonal entry: e_i += e_j
                let pair = alive.iter().copied().find_map(|i| {
                    alive
                        .iter()
                        .copied()
                        .find(|&j| j != i && !a[i][j].is_zero())
                        .map(|j| (i, j))
                });
                let Some((i, j)) = pair else { break };
                for k in 0..n {
                    let x = a[j][k].clone();
                    a[i][k] += x;
                }
                for k in 0..n {
                    let x = a[k][j].clone();
                    a[k][i] += x;
                }
                i
            }
        };
        let d = a[p][p].clone();
        alive.retain(|&i| i != p);
        for &i in &alive {
            let f = &a[i][p] / &d;
            if f.is_zero() {
                continue;
            }
            for k in 0..n {
                let x = &f * &a[p][k];
                a[i][k] -= x;
            }
            for k in 0..n {
                let x = &f * &a[k][p];
                a[k][i] -= x;
            }
        }
        out.push(d);
    }
    Ok(out)
}

/// Squarefree integer in the square class of a nonzero rational.
fn squarefree_class(q: &BigRational) -> Result<(i8, Vec<(u128, u32)>)> {
    let sign = if q.is_negative() { -1 } else { 1 };
    let n = (q.numer() * q.denom()).abs();
    let n = n
        .to_u128()
        .ok_or_else(|| Error::Invalid("form coefficients too large to factor".into()))?;
    let mut f: Vec<(u128, u32)> = num_prime::nt_funcs::factorize128(n)
        .into_iter()
        .map(|(p, e)| (p, e as u32 % 2))
        .filter(|&(_, e)| e == 1)
        .collect();
    f.sort();
    Ok((sign, f))
}

fn class_value(c: &(i8, Vec<(u128, u32)>)) -> BigInt {
    let mut v = BigInt::from(c.0);
    for (p, _) in &c.1 {
        v *= BigInt::from(*p);
    }
    v
}

fn legendre(a: &BigInt, p: u128) -> i8 {
    let pb = BigInt::from(p);
    let r = a.mod_floor(&pb);
    if r.is_zero() {
        return 0;
    }
    let e = (&pb - 1u32) / 2u32;
    if r.modpow(&e, &pb).is_one() {
        1
    } else {
        -1
    }
}

/// Hilbert symbol `(a, b)_p` for squarefree nonzero integers.
fn hilbert(a: &BigInt, b: &BigInt, p: u128) -> i8 {
    let pb = BigInt::from(p);
    let split = |x: &BigInt| -> (u32, BigInt) {
        let mut x = x.clone();
        let mut k = 0;
        while (&x % &pb).is_zero() {
            x /= &pb;
            k += 1;
        }
        (k, x)
    };
    let (al, u) = split(a);
    let (be, v) = split(b);
    if p == 2 {
        let m8 = |x: &BigInt| x.mod_floor(&BigInt::from(8)).to_u32().unwrap();
        let eps = |x: u32| ((x - 1) / 2) % 2;
        let omega = |x: u32| ((x * x - 1) / 8) % 2;
        let (u8_, v8) = (m8(&u), m8(&v));
        let e = eps(u8_) * eps(v8) + al * omega(v8) + be * omega(u8_);
        return if e % 2 == 0 { 1 } else { -1 };
    }
    let mut s: i8 = 1;
    if (al * be) % 2 == 1 && p % 4 == 3 {
        s = -s;
    }
    if be % 2 == 1 {
        s *= legendre(&u, p);
    }
    if al % 2 == 1 {
        s *= legendre(&v, p);
    }
    s
}

/// Invariants that decide congruence of nondegenerate rational quadratic forms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticInvariants {
    pub rank: usize,
    pub positive: usize,
    pub discriminant_class: BigInt,
    /// Primes where the Hasse invariant is −1.
    pub hasse_negative_at: BTreeSet<u128>,
}

fn invariants_with_primes(d: &[BigRational], primes: &BTreeSet<u128>) -> Result<QuadraticInvariants> {
    let classes: Vec<_> = d.iter().map(squarefree_class).collect::<Result<_>>()?;
    let vals: Vec<BigInt> = classes.iter().map(class_value).collect();
    let mut disc = BigRational::one();
    for x in d {
        disc *= x;
    }
    let disc_class = if d.is_empty() {
        BigInt::one()
    } else {
        class_value(&squarefree_class(&disc)?)
    };
    let mut neg = BTreeSet::new();
    for &p in primes {
        let mut c = 1i8;
        for i in 0..vals.len() {
            for j in i + 1..vals.len() {
                c *= hilbert(&vals[i], &vals[j], p);
            }
        }
        if c == -1 {
            neg.insert(p);
        }
    }
    Ok(QuadraticInvariants {
        rank: d.len(),
        positive: d.iter().filter(|x| x.is_positive()).count(),
        discriminant_class: disc_class,
        hasse_negative_at: neg,
    })
}

fn relevant_primes(d: &[BigRational]) -> Result<BTreeSet<u128>> {
    let mut primes = BTreeSet::from([2u128]);
    for x in d {
        for (p, _) in squarefree_class(x)?.1 {
            primes.insert(p);
        }
    }
    Ok(primes)
}

/// Whether two Gram matrices over ℚ are congruent (`PᵀAP = B` for invertible
/// rational `P`). Both must be symmetric or both alternating.
pub fn congruent(a: &Matrix, b: &Matrix) -> Result<bool> {
    if a.rows() != b.rows() || !a.is_square() || !b.is_square() {
        return Ok(false);
    }
    if !a.is_real() || !b.is_real() {
        return Err(Error::Invalid("congruence test needs rational Gram matrices".into()));
    }
    if a.is_antisymmetric() && b.is_antisymmetric() {
        return Ok(a.rank() == b.rank());
    }
    let da = diagonalize_symmetric(a)?;
    let db = diagonalize_symmetric(b)?;
    if da.len() != db.len() {
        return Ok(false);
    }
    let mut primes = relevant_primes(&da)?;
    primes.extend(relevant_primes(&db)?);
    Ok(invariants_with_primes(&da, &primes)? == invariants_with_primes(&db, &primes)?)
}

/// Signature helper used for diagnostics.
pub fn signature(g: &Matrix) -> Result<(usize, usize)> {
    let d = diagonalize_symmetric(g)?;
    let pos = d.iter().filter(|x| x.is_positive()).count();
    Ok((pos, d.len() - pos))
}

/// Checks `Pᵀ A P = B` exactly.
pub fn is_congruence(p: &Matrix, a: &Matrix, b: &Matrix) -> bool {
    p.is_invertible() && &(&p.transpose() * a) * p == *b
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::Scalar;

    fn diag(entries: &[i64]) -> Matrix {
        Matrix::diagonal(&entries.iter().map(|&x| Scalar::int(x)).collect::<Vec<_>>())
    }

    #[test]
    fn sums_of_squares() {
        // x² + y² ≅ 2x² + 2y² but not ≅ x² + 3y²
        assert!(congruent(&diag(&[1, 1]), &diag(&[2, 2])).unwrap());
        assert!(!congruent(&diag(&[1, 1]), &diag(&[1, 3])).unwrap());
        assert!(!congruent(&diag(&[1, 1]), &diag(&[1, -1])).unwrap());
        // hyperbolic plane ≅ ⟨1, −1⟩
        let h = Matrix::from_ints(&[&[0, 1], &[1, 0]]);
        assert!(congruent(&h, &diag(&[1, -1])).unwrap());
    }

    #[test]
    fn same_discriminant_different_hasse() {
        // ⟨1,1,1⟩ vs ⟨−1,−1,1⟩ differ by signature; ⟨3,3⟩ vs ⟨1,1⟩ differ at 3
        assert!(!congruent(&diag(&[3, 3]), &diag(&[1, 1])).unwrap());
        assert!(congruent(&diag(&[5, 5]), &diag(&[1, 1])).unwrap());
    }

    #[test]
    fn alternating_by_rank() {
        let a = Matrix::from_ints(&[&[0, 1], &[-1, 0]]);
        let b = Matrix::from_ints(&[&[0, 7], &[-7, 0]]);
        assert!(congruent(&a, &b).unwrap());
    }

    #[test]
    fn random_congruences_are_detected() {
        let g = Matrix::from_ints(&[&[2, 1, 0], &[1, -3, 4], &[0, 4, 1]]);
        let p = Matrix::from_ints(&[&[1, 2, 0], &[0, 1, 5], &[3, 0, 1]]);
        let h = &(&p.transpose() * &g) * &p;
        assert!(is_congruence(&p, &g, &h));
        assert!(congruent(&g, &h).unwrap());
        assert!(!congruent(&g, &g.scale(&Scalar::int(-1))).unwrap());
    }
}
