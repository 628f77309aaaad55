//! Finite filtrations by nested subspaces.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::matrix::{Matrix, Vector};
use super::subspace::{quotient_map, Quotient, Subspace};
use crate::{Error, Result};

pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Filtration indexed by rationals. Only the jumps are stored, so two
/// filtrations are equal exactly when they agree at every index.
///
/// Increasing: `at(k)` is the step with the largest index `≤ k` (zero below).
/// Decreasing: `at(p)` is the step with the smallest index `≥ p` (zero above).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FlagFiltration {
    ambient: usize,
    decreasing: bool,
    steps: Vec<(BigRational, Subspace)>,
}

impl FlagFiltration {
    pub fn increasing(ambient: usize, steps: Vec<(BigRational, Subspace)>) -> Result<Self> {
        Self::build(ambient, false, steps)
    }

    pub fn decreasing(ambient: usize, steps: Vec<(BigRational, Subspace)>) -> Result<Self> {
        Self::build(ambient, true, steps)
    }

    pub fn increasing_int(ambient: usize, steps: Vec<(i64, Subspace)>) -> Result<Self> {
        Self::increasing(ambient, steps.into_iter().map(|(k, s)| (rat(k), s)).collect())
    }

    pub fn decreasing_int(ambient: usize, steps: Vec<(i64, Subspace)>) -> Result<Self> {
        Self::decreasing(ambient, steps.into_iter().map(|(k, s)| (rat(k), s)).collect())
    }

    /// One jump at `index`: everything lives in a single graded piece.
    pub fn trivial(ambient: usize, index: i64, decreasing: bool) -> Self {
        Self::build(ambient, decreasing, vec![(rat(index), Subspace::full(ambient))])
            .expect("single step")
    }

    fn build(
        ambient: usize,
        decreasing: bool,
        mut steps: Vec<(BigRational, Subspace)>,
    ) -> Result<Self> {
        for w in steps.windows(2) {
            if w[0].0 >= w[1].0 {
                return Err(Error::Invalid("filtration indices must increase".into()));
            }
        }
        for (_, s) in &steps {
            if s.ambient() != ambient {
                return Err(Error::DimensionMismatch("filtration step ambient".into()));
            }
        }
        for w in steps.windows(2) {
            let nested = if decreasing {
                w[0].1.contains_subspace(&w[1].1)
            } else {
                w[1].1.contains_subspace(&w[0].1)
            };
            if !nested {
                return Err(Error::Invalid(format!(
                    "filtration steps at {} and {} are not nested",
                    w[0].0, w[1].0
                )));
            }
        }
        if decreasing {
            steps.reverse();
        }
        let mut kept: Vec<(BigRational, Subspace)> = Vec::new();
        let mut prev = Subspace::zero(ambient);
        for (k, s) in steps {
            if s != prev {
                prev = s.clone();
                kept.push((k, s));
            }
        }
        if decreasing {
            kept.reverse();
        }
        Ok(FlagFiltration {
            ambient,
            decreasing,
            steps: kept,
        })
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn is_decreasing(&self) -> bool {
        self.decreasing
    }

    /// Jump indices with their subspaces, ascending by index.
    pub fn steps(&self) -> &[(BigRational, Subspace)] {
        &self.steps
    }

    pub fn jumps(&self) -> Vec<BigRational> {
        self.steps.iter().map(|(k, _)| k.clone()).collect()
    }

    pub fn is_exhaustive(&self) -> bool {
        let top = if self.decreasing {
            self.steps.first()
        } else {
            self.steps.last()
        };
        self.ambient == 0 || top.is_some_and(|(_, s)| s.is_full())
    }

    pub fn at(&self, k: &BigRational) -> Subspace {
        let found = if self.decreasing {
            self.steps.iter().find(|(i, _)| i >= k)
        } else {
            self.steps.iter().rev().find(|(i, _)| i <= k)
        };
        found.map_or_else(|| Subspace::zero(self.ambient), |(_, s)| s.clone())
    }

    pub fn at_int(&self, k: i64) -> Subspace {
        self.at(&rat(k))
    }

    /// The part strictly beyond `k`: `W_{<k}` for increasing, `F^{>p}` for decreasing.
    pub fn beyond(&self, k: &BigRational) -> Subspace {
        let found = if self.decreasing {
            self.steps.iter().find(|(i, _)| i > k)
        } else {
            self.steps.iter().rev().find(|(i, _)| i < k)
        };
        found.map_or_else(|| Subspace::zero(self.ambient), |(_, s)| s.clone())
    }

    pub fn graded(&self, k: &BigRational) -> Quotient {
        quotient_map(&self.at(k), &self.beyond(k)).expect("nested steps")
    }

    pub fn graded_int(&self, k: i64) -> Quotient {
        self.graded(&rat(k))
    }

    pub fn graded_dim(&self, k: &BigRational) -> usize {
        self.at(k).dim() - self.beyond(k).dim()
    }

    pub fn graded_dim_int(&self, k: i64) -> usize {
        self.graded_dim(&rat(k))
    }

    /// Integer range covering all jumps, if every jump is an integer.
    pub fn integer_range(&self) -> Option<(i64, i64)> {
        let ints: Option<Vec<i64>> = self
            .steps
            .iter()
            .map(|(k, _)| {
                if k.is_integer() {
                    k.to_integer().to_i64()
                } else {
                    None
                }
            })
            .collect();
        let ints = ints?;
        Some((*ints.iter().min()?, *ints.iter().max()?))
    }

    pub fn preserved_by(&self, a: &Matrix) -> bool {
        self.steps
            .iter()
            .all(|(_, s)| s.contains_subspace(&s.map(a)))
    }

    /// Reindex so that the new step at `k + offset` is the old step at `k`.
    pub fn shifted(&self, offset: &BigRational) -> Self {
        FlagFiltration {
            ambient: self.ambient,
            decreasing: self.decreasing,
            steps: self
                .steps
                .iter()
                .map(|(k, s)| (k + offset, s.clone()))
                .collect(),
        }
    }

    /// Image of every step under an invertible change of coordinates.
    pub fn transform(&self, a: &Matrix) -> Result<Self> {
        if !a.is_invertible() || a.rows() != self.ambient {
            return Err(Error::Invalid("coordinate change must be invertible".into()));
        }
        Self::build(
            self.ambient,
            self.decreasing,
            self.steps
                .iter()
                .map(|(k, s)| (k.clone(), s.map(a)))
                .collect(),
        )
    }
}

/// Indices serialize as JSON integers when integral and "a/b" strings otherwise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Index(pub BigRational);

impl Serialize for Index {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        match (self.0.is_integer(), self.0.to_integer().to_i64()) {
            (true, Some(k)) => ser.serialize_i64(k),
            _ => ser.serialize_str(&format!("{}/{}", self.0.numer(), self.0.denom())),
        }
    }
}

impl<'de> Deserialize<'de> for Index {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Str(String),
        }
        match Raw::deserialize(de)? {
            Raw::Int(k) => Ok(Index(rat(k))),
            Raw::Str(s) => {
                let x: super::Scalar = s.parse().map_err(serde::de::Error::custom)?;
                if !x.is_real() {
                    return Err(serde::de::Error::custom("filtration index must be real"));
                }
                Ok(Index(x.re().clone()))
            }
        }
    }
}

#[derive(Serialize, Deserialize)]
pub struct StepJson {
    pub index: Index,
    pub basis: Vec<Vector>,
}

#[derive(Serialize, Deserialize)]
pub struct FlagJson {
    pub ambient: usize,
    #[serde(default)]
    pub decreasing: bool,
    pub steps: Vec<StepJson>,
}

impl FlagFiltration {
    pub fn to_json(&self) -> FlagJson {
        FlagJson {
            ambient: self.ambient,
            decreasing: self.decreasing,
            steps: self
                .steps
                .iter()
                .map(|(k, s)| StepJson {
                    index: Index(k.clone()),
                    basis: s.basis(),
                })
                .collect(),
        }
    }

    pub fn from_json(j: FlagJson) -> Result<Self> {
        let mut steps = Vec::new();
        for st in j.steps {
            if st.basis.iter().any(|v| v.len() != j.ambient) {
                return Err(Error::DimensionMismatch("filtration basis vector".into()));
            }
            steps.push((st.index.0, Subspace::span(j.ambient, &st.basis)));
        }
        Self::build(j.ambient, j.decreasing, steps)
    }
}

impl Serialize for FlagFiltration {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(ser)
    }
}

impl<'de> Deserialize<'de> for FlagFiltration {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        Self::from_json(FlagJson::deserialize(de)?).map_err(serde::de::Error::custom)
    }
}

pub fn floor_i64(k: &BigRational) -> i64 {
    k.floor().to_integer().to_i64().expect("index fits in i64")
}

pub fn ceil_i64(k: &BigRational) -> i64 {
    k.ceil().to_integer().to_i64().expect("index fits in i64")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_jumps() {
        let e1 = Subspace::coordinate(2, &[0]);
        let f = FlagFiltration::increasing_int(
            2,
            vec![
                (-3, Subspace::zero(2)),
                (-1, e1.clone()),
                (0, e1.clone()),
                (1, Subspace::full(2)),
            ],
        )
        .unwrap();
        assert_eq!(f.jumps(), vec![rat(-1), rat(1)]);
        assert_eq!(f.at_int(0), e1);
        assert_eq!(f.graded_dim_int(-1), 1);
        assert_eq!(f.graded_dim_int(0), 0);
        assert_eq!(f.graded_dim_int(1), 1);
        assert!(f.is_exhaustive());
    }

    #[test]
    fn decreasing_lookup() {
        let e1 = Subspace::coordinate(2, &[0]);
        let f = FlagFiltration::decreasing_int(2, vec![(0, Subspace::full(2)), (1, e1.clone())])
            .unwrap();
        assert_eq!(f.at_int(-5), Subspace::full(2));
        assert_eq!(f.at_int(1), e1);
        assert!(f.at_int(2).is_zero());
        assert_eq!(f.graded_dim_int(0), 1);
        assert_eq!(f.graded_dim_int(1), 1);
    }

    #[test]
    fn rejects_non_nested() {
        let a = Subspace::coordinate(2, &[0]);
        let b = Subspace::coordinate(2, &[1]);
        assert!(FlagFiltration::increasing_int(2, vec![(0, a), (1, b)]).is_err());
    }

    #[test]
    fn json_round_trip() {
        let f = FlagFiltration::increasing(
            2,
            vec![
                (ratio(1, 2), Subspace::coordinate(2, &[1])),
                (rat(2), Subspace::full(2)),
            ],
        )
        .unwrap();
        let s = serde_json::to_string(&f).unwrap();
        assert!(s.contains(r#""index":"1/2""#));
        assert_eq!(serde_json::from_str::<FlagFiltration>(&s).unwrap(), f);
    }
}
