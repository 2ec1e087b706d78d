use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("matrix has determinant {0}, expected 1")]
pub struct DeterminantError(pub BigInt);

/// A 2×2 integer matrix of determinant one.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Sl2Matrix {
    entries: [[BigInt; 2]; 2],
}

/// Serialises as `[[a, b], [c, d]]`.
impl Serialize for Sl2Matrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<serde_json::Value>> =
            self.entries.iter().map(|r| r.iter().map(crate::laurent::bigint_json).collect()).collect();
        rows.serialize(serializer)
    }
}

impl Sl2Matrix {
    pub fn new(entries: [[BigInt; 2]; 2]) -> Result<Sl2Matrix, DeterminantError> {
        let det = &entries[0][0] * &entries[1][1] - &entries[0][1] * &entries[1][0];
        if !det.is_one() {
            return Err(DeterminantError(det));
        }
        Ok(Sl2Matrix { entries })
    }

    /// Panics if the determinant is not one; meant for literal constants.
    pub fn from_i64(m: [[i64; 2]; 2]) -> Sl2Matrix {
        Sl2Matrix::new([
            [BigInt::from(m[0][0]), BigInt::from(m[0][1])],
            [BigInt::from(m[1][0]), BigInt::from(m[1][1])],
        ])
        .expect("literal is not in SL(2,Z)")
    }

    pub fn identity() -> Sl2Matrix {
        Sl2Matrix {
            entries: [[BigInt::one(), BigInt::zero()], [BigInt::zero(), BigInt::one()]],
        }
    }

    pub fn entries(&self) -> &[[BigInt; 2]; 2] {
        &self.entries
    }

    pub fn is_identity(&self) -> bool {
        *self == Sl2Matrix::identity()
    }

    pub fn mul(&self, rhs: &Sl2Matrix) -> Sl2Matrix {
        let m = &self.entries;
        let n = &rhs.entries;
        let e = |i: usize, j: usize| &m[i][0] * &n[0][j] + &m[i][1] * &n[1][j];
        Sl2Matrix {
            entries: [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]],
        }
    }

    pub fn inverse(&self) -> Sl2Matrix {
        let [[a, b], [c, d]] = &self.entries;
        Sl2Matrix {
            entries: [[d.clone(), -b], [-c, a.clone()]],
        }
    }

    pub fn apply(&self, v: &[BigInt; 2]) -> [BigInt; 2] {
        let m = &self.entries;
        [
            &m[0][0] * &v[0] + &m[0][1] * &v[1],
            &m[1][0] * &v[0] + &m[1][1] * &v[1],
        ]
    }

    pub fn trace(&self) -> BigInt {
        &self.entries[0][0] + &self.entries[1][1]
    }
}

impl fmt::Display for Sl2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = &self.entries;
        write!(f, "[[{}, {}], [{}, {}]]", m[0][0], m[0][1], m[1][0], m[1][1])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_wrong_determinant() {
        let bad = [[BigInt::from(2), BigInt::zero()], [BigInt::zero(), BigInt::one()]];
        assert_eq!(Sl2Matrix::new(bad), Err(DeterminantError(BigInt::from(2))));
    }

    #[test]
    fn inverse_and_product() {
        let m = Sl2Matrix::from_i64([[2, 3], [1, 2]]);
        assert!(m.mul(&m.inverse()).is_identity());
        assert_eq!(m.to_string(), "[[2, 3], [1, 2]]");
        assert_eq!(m.trace(), BigInt::from(4));
    }
}
