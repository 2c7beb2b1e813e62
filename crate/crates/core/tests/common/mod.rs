#![allow(dead_code)]

use corrdyn::algset::AlgSet;
use corrdyn::maps::RationalMap;
use corrdyn::point::ProjPoint;
use corrdyn::poly::IntPoly;
use num_bigint::BigInt;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn p(c: &[i64]) -> IntPoly {
    IntPoly::from_i64s(c)
}

/// Degree exactly `d`, coefficients in `[-c, c]`.
pub fn poly_of_degree(r: &mut impl Rng, d: usize, c: i64) -> IntPoly {
    let mut v: Vec<i64> = (0..=d).map(|_| r.gen_range(-c..=c)).collect();
    while v[d] == 0 {
        v[d] = r.gen_range(-c..=c);
    }
    p(&v)
}

pub fn poly_up_to(r: &mut impl Rng, max_deg: usize, c: i64) -> IntPoly {
    let d = r.gen_range(0..=max_deg);
    poly_of_degree(r, d, c)
}

/// A non-constant map `f/g` with `deg ≤ max_deg`.
pub fn rational_map(r: &mut impl Rng, max_deg: usize, c: i64) -> RationalMap {
    loop {
        let f = poly_up_to(r, max_deg, c);
        let g = if r.gen_bool(0.5) {
            IntPoly::one()
        } else {
            poly_up_to(r, max_deg, c)
        };
        if let Ok(m) = RationalMap::new(&f, &g) {
            return m;
        }
    }
}

/// A polynomial map of degree exactly `d`.
pub fn polynomial_map(r: &mut impl Rng, d: usize, c: i64) -> RationalMap {
    RationalMap::polynomial(&poly_of_degree(r, d, c)).unwrap()
}

pub fn rational_point(r: &mut impl Rng, c: i64) -> ProjPoint {
    let q = r.gen_range(1..=c);
    ProjPoint::ratio(r.gen_range(-c..=c), q)
}

/// A set of exactly `size` points: some rational, some the roots of a
/// random polynomial, sometimes infinity.
pub fn random_set(r: &mut impl Rng, size: usize, c: i64) -> AlgSet {
    loop {
        let mut s = AlgSet::empty();
        if size > 0 && r.gen_bool(0.2) {
            s = AlgSet::infinity();
        }
        while s.cardinality() < size {
            let room = size - s.cardinality();
            let piece = if r.gen_bool(0.5) {
                AlgSet::from_points(&[rational_point(r, c)])
            } else {
                let d = r.gen_range(1..=room);
                AlgSet::new(&poly_of_degree(r, d, c), false).unwrap()
            };
            let u = s.union(&piece);
            if u.cardinality() <= size {
                s = u;
            }
        }
        if s.cardinality() == size {
            return s;
        }
    }
}

/// Finite rational points only.
pub fn rational_set(r: &mut impl Rng, size: usize, c: i64) -> AlgSet {
    let mut s = AlgSet::empty();
    while s.cardinality() < size {
        s = s.union(&AlgSet::from_points(&[rational_point(r, c)]));
    }
    s
}

pub fn big(x: i64) -> BigInt {
    BigInt::from(x)
}
