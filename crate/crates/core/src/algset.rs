//! Finite Galois-stable subsets of the projective line over the algebraic
//! closure of the rationals.
//!
//! A set is stored as the primitive squarefree integer polynomial whose roots
//! are its finite points, plus a flag for the point at infinity. The
//! representation is canonical: equal sets have equal fields.

use std::fmt;

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::point::ProjPoint;
use crate::poly::{gcd_poly, squarefree_part, IntPoly};
use crate::roots::rational_roots;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AlgSet {
    poly: IntPoly,
    has_infinity: bool,
}

/// Serialized as its `Display` form, which the set parser reads back.
impl Serialize for AlgSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl AlgSet {
    /// The set of roots of `poly` (with multiplicities dropped), plus
    /// infinity when asked. A nonzero constant has no roots.
    pub fn new(poly: &IntPoly, has_infinity: bool) -> Result<Self> {
        if poly.is_zero() {
            return Err(Error::ZeroPolynomial("set defining polynomial"));
        }
        Ok(AlgSet {
            poly: squarefree_part(poly)?,
            has_infinity,
        })
    }

    pub fn empty() -> Self {
        AlgSet {
            poly: IntPoly::one(),
            has_infinity: false,
        }
    }

    pub fn infinity() -> Self {
        AlgSet {
            poly: IntPoly::one(),
            has_infinity: true,
        }
    }

    pub fn from_points(points: &[ProjPoint]) -> Self {
        let mut poly = IntPoly::one();
        let mut inf = false;
        for pt in points {
            match pt {
                ProjPoint::Infinity => inf = true,
                ProjPoint::Finite(r) => poly = &poly * &IntPoly::linear_root(r.numer(), r.denom()),
            }
        }
        AlgSet::new(&poly, inf).expect("product of linear forms is nonzero")
    }

    pub fn poly(&self) -> &IntPoly {
        &self.poly
    }

    pub fn has_infinity(&self) -> bool {
        self.has_infinity
    }

    pub fn finite_count(&self) -> usize {
        self.poly.deg()
    }

    pub fn cardinality(&self) -> usize {
        self.poly.deg() + usize::from(self.has_infinity)
    }

    pub fn is_empty(&self) -> bool {
        self.cardinality() == 0
    }

    pub fn contains(&self, x: &ProjPoint) -> bool {
        match x {
            ProjPoint::Infinity => self.has_infinity,
            ProjPoint::Finite(r) => self
                .poly
                .eval_homogeneous(r.numer(), r.denom(), self.poly.deg())
                .is_zero(),
        }
    }

    pub fn union(&self, other: &AlgSet) -> AlgSet {
        let prod = &self.poly * &other.poly;
        AlgSet::new(&prod, self.has_infinity || other.has_infinity).expect("nonzero")
    }

    pub fn intersection(&self, other: &AlgSet) -> AlgSet {
        let g = gcd_poly(&self.poly, &other.poly).expect("nonzero");
        AlgSet::new(&g, self.has_infinity && other.has_infinity).expect("nonzero")
    }

    /// Points of `self` not in `other`.
    pub fn difference(&self, other: &AlgSet) -> AlgSet {
        let g = gcd_poly(&self.poly, &other.poly).expect("nonzero");
        let q = self.poly.div_exact(&g).expect("gcd divides");
        AlgSet::new(&q, self.has_infinity && !other.has_infinity).expect("nonzero")
    }

    /// Exact divisibility of canonical forms plus the infinity flags.
    pub fn is_subset(&self, other: &AlgSet) -> bool {
        (!self.has_infinity || other.has_infinity) && self.poly.divides(&other.poly)
    }

    pub fn without(&self, x: &ProjPoint) -> AlgSet {
        self.difference(&AlgSet::from_points(std::slice::from_ref(x)))
    }

    /// The rational points of the set, ascending, infinity last.
    pub fn rational_points(&self) -> Result<Vec<ProjPoint>> {
        let mut pts: Vec<ProjPoint> = rational_roots(&self.poly)?
            .into_iter()
            .map(ProjPoint::Finite)
            .collect();
        if self.has_infinity {
            pts.push(ProjPoint::Infinity);
        }
        Ok(pts)
    }
}

impl fmt::Display for AlgSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.poly.is_constant(), self.has_infinity) {
            (true, false) => write!(f, "{{}}"),
            (true, true) => write!(f, "{{inf}}"),
            (false, false) => write!(f, "roots({})", self.poly),
            (false, true) => write!(f, "roots({}) + {{inf}}", self.poly),
        }
    }
}
