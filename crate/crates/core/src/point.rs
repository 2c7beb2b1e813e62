use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

/// A point of the projective line over the rationals.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ProjPoint {
    Finite(BigRational),
    Infinity,
}

impl ProjPoint {
    pub fn integer(n: i64) -> Self {
        ProjPoint::Finite(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn ratio(p: i64, q: i64) -> Self {
        Self::from_homogeneous(BigInt::from(p), BigInt::from(q))
    }

    /// `(p : q)`, with `q = 0` meaning infinity. Both zero is not a point.
    pub fn from_homogeneous(p: BigInt, q: BigInt) -> Self {
        assert!(!(p.is_zero() && q.is_zero()), "(0 : 0) is not a point");
        if q.is_zero() {
            ProjPoint::Infinity
        } else {
            ProjPoint::Finite(BigRational::new(p, q))
        }
    }

    /// Reduced homogeneous coordinates with nonnegative second entry;
    /// infinity is `(1 : 0)`.
    pub fn homogeneous(&self) -> (BigInt, BigInt) {
        match self {
            ProjPoint::Finite(r) => (r.numer().clone(), r.denom().clone()),
            ProjPoint::Infinity => (BigInt::one(), BigInt::zero()),
        }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, ProjPoint::Infinity)
    }

    /// `max(|p|, |q|)` for reduced coordinates; infinity gives 1.
    pub fn naive_height(&self) -> BigInt {
        let (p, q) = self.homogeneous();
        p.abs().max(q)
    }
}

impl PartialOrd for ProjPoint {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Finite points by value, then infinity.
impl Ord for ProjPoint {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ProjPoint::Finite(a), ProjPoint::Finite(b)) => a.cmp(b),
            (ProjPoint::Finite(_), ProjPoint::Infinity) => Ordering::Less,
            (ProjPoint::Infinity, ProjPoint::Finite(_)) => Ordering::Greater,
            (ProjPoint::Infinity, ProjPoint::Infinity) => Ordering::Equal,
        }
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProjPoint::Finite(r) if r.is_integer() => write!(f, "{}", r.numer()),
            ProjPoint::Finite(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            ProjPoint::Infinity => write!(f, "inf"),
        }
    }
}

impl Serialize for ProjPoint {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl From<BigRational> for ProjPoint {
    fn from(r: BigRational) -> Self {
        ProjPoint::Finite(r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form_and_order() {
        assert_eq!(ProjPoint::ratio(4, -6), ProjPoint::ratio(-2, 3));
        assert_eq!(ProjPoint::ratio(5, 0), ProjPoint::Infinity);
        let mut v = vec![
            ProjPoint::Infinity,
            ProjPoint::integer(2),
            ProjPoint::ratio(-1, 2),
        ];
        v.sort();
        assert_eq!(
            v,
            vec![
                ProjPoint::ratio(-1, 2),
                ProjPoint::integer(2),
                ProjPoint::Infinity
            ]
        );
        assert_eq!(ProjPoint::ratio(-7, 3).naive_height(), BigInt::from(7));
        assert_eq!(ProjPoint::ratio(-7, 3).to_string(), "-7/3");
    }
}
