//! Rational maps of the projective line with rational coefficients, and the
//! two set-level functors they induce: preimage (pullback) and image
//! (pushforward).

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::algset::AlgSet;
use crate::error::{Error, Result};
use crate::point::ProjPoint;
use crate::poly::{compose_fraction, content_primitive, gcd_poly, resultant, IntPoly};

/// `f/g` in lowest terms, jointly primitive, with positive leading
/// coefficient on the denominator.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalMap {
    num: IntPoly,
    den: IntPoly,
    degree: usize,
}

impl RationalMap {
    pub fn new(f: &IntPoly, g: &IntPoly) -> Result<Self> {
        make_map(f, g)
    }

    pub fn polynomial(p: &IntPoly) -> Result<Self> {
        make_map(p, &IntPoly::one())
    }

    pub fn identity() -> Self {
        Self::polynomial(&IntPoly::from_i64s(&[0, 1])).unwrap()
    }

    /// `z^d`.
    pub fn power(d: usize) -> Self {
        Self::polynomial(&IntPoly::monomial(BigInt::one(), d)).expect("d ≥ 1")
    }

    pub fn num(&self) -> &IntPoly {
        &self.num
    }

    pub fn den(&self) -> &IntPoly {
        &self.den
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    pub fn eval(&self, x: &ProjPoint) -> ProjPoint {
        eval_map(self, x)
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &RationalMap) -> RationalMap {
        compose_maps(self, inner)
    }

    pub fn pullback(&self, s: &AlgSet) -> AlgSet {
        pullback_set(self, s)
    }

    pub fn pushforward(&self, t: &AlgSet) -> AlgSet {
        pushforward_set(self, t)
    }

    /// Multiplies the map by a rational constant `c = p/q`.
    pub fn scaled(&self, p: i64, q: i64) -> Result<RationalMap> {
        make_map(
            &self.num.scale(&BigInt::from(p)),
            &self.den.scale(&BigInt::from(q)),
        )
    }
}

impl fmt::Display for RationalMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

impl Serialize for RationalMap {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Reduces `f/g` to canonical coprime form.
pub fn make_map(f: &IntPoly, g: &IntPoly) -> Result<RationalMap> {
    if g.is_zero() {
        return Err(Error::ZeroDenominator);
    }
    if f.is_zero() {
        return Err(Error::ConstantMap);
    }
    let common = gcd_poly(f, g)?;
    let (_, common) = content_primitive(&common)?;
    let mut num = f.div_exact(&common).expect("gcd divides");
    let mut den = g.div_exact(&common).expect("gcd divides");
    let c = num
        .coeffs()
        .iter()
        .chain(den.coeffs())
        .fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if !c.is_one() {
        num = num.div_scalar_exact(&c);
        den = den.div_scalar_exact(&c);
    }
    if den.leading().unwrap().is_negative() {
        num = -num;
        den = -den;
    }
    let degree = num.deg().max(den.deg());
    if degree == 0 {
        return Err(Error::ConstantMap);
    }
    Ok(RationalMap { num, den, degree })
}

/// Projective evaluation; total on the rational projective line.
pub fn eval_map(map: &RationalMap, x: &ProjPoint) -> ProjPoint {
    let (p, q) = x.homogeneous();
    let d = map.degree;
    let u = map.num.eval_homogeneous(&p, &q, d);
    let v = map.den.eval_homogeneous(&p, &q, d);
    ProjPoint::from_homogeneous(u, v)
}

/// `outer ∘ inner`, of degree `deg outer · deg inner`.
pub fn compose_maps(outer: &RationalMap, inner: &RationalMap) -> RationalMap {
    let d = outer.degree;
    let num = compose_fraction(&outer.num, &inner.num, &inner.den, d).expect("valid bound");
    let den = compose_fraction(&outer.den, &inner.num, &inner.den, d).expect("valid bound");
    make_map(&num, &den).expect("composition of non-constant maps is non-constant")
}

/// Exact identity test: `f₁ g₂ = f₂ g₁`.
pub fn maps_equal(a: &RationalMap, b: &RationalMap) -> bool {
    &a.num * &b.den == &b.num * &a.den
}

/// The preimage polynomial before squarefree reduction, and whether
/// infinity lies in `F⁻¹(S)`.
pub fn pullback_raw(map: &RationalMap, s: &AlgSet) -> (IntPoly, bool) {
    let sp = s.poly();
    let mut q = compose_fraction(sp, &map.num, &map.den, sp.deg()).expect("valid bound");
    if s.has_infinity() {
        q = &q * &map.den;
    }
    (q, s.contains(&eval_map(map, &ProjPoint::Infinity)))
}

/// `F⁻¹(S)`.
pub fn pullback_set(map: &RationalMap, s: &AlgSet) -> AlgSet {
    if s.is_empty() {
        return AlgSet::empty();
    }
    let (q, inf) = pullback_raw(map, s);
    AlgSet::new(&q, inf).expect("pullback polynomial is nonzero")
}

/// Evaluation nodes 0, 1, −1, 2, −2, …
fn node(j: usize) -> BigInt {
    let k = j.div_ceil(2) as i64;
    BigInt::from(if j % 2 == 1 { k } else { -k })
}

/// `Res_{t,d}(p, f − w g)` with `f − w g` read at formal degree `d`, i.e.
/// `lc(p)^d · Π (f(α) − w g(α))` over the roots α of `p`.
fn image_resultant_at(p: &IntPoly, map: &RationalMap, w: &BigInt) -> BigInt {
    let q = &map.num - &map.den.scale(w);
    let e = q.deg();
    let lc = p.leading().unwrap();
    let r = resultant(p, &q).expect("nonzero inputs");
    r * lc.pow((map.degree - e) as u32)
}

/// Integer polynomial of degree ≤ n through `(x_j, y_j)`, by Newton divided
/// differences. Every division is exact because the interpolant has integer
/// coefficients and the nodes are integers.
fn interpolate_integer(xs: &[BigInt], ys: &[BigInt]) -> IntPoly {
    let n = xs.len();
    let mut c = ys.to_vec();
    for k in 1..n {
        for i in (k..n).rev() {
            let num = &c[i] - &c[i - 1];
            let den = &xs[i] - &xs[i - k];
            debug_assert!((&num % &den).is_zero(), "inexact divided difference");
            c[i] = num / den;
        }
    }
    let mut acc = IntPoly::constant(c[n - 1].clone());
    for k in (0..n - 1).rev() {
        acc = &(&acc * &IntPoly::new(vec![-xs[k].clone(), BigInt::one()]))
            + &IntPoly::constant(c[k].clone());
    }
    acc
}

/// `F(T)`.
pub fn pushforward_set(map: &RationalMap, t: &AlgSet) -> AlgSet {
    if t.is_empty() {
        return AlgSet::empty();
    }
    let p = t.poly();
    let n = p.deg();
    let mut image = AlgSet::empty();
    if n > 0 {
        let xs: Vec<BigInt> = (0..=n).map(node).collect();
        let ys: Vec<BigInt> = xs
            .par_iter()
            .map(|w| image_resultant_at(p, map, w))
            .collect();
        let r = interpolate_integer(&xs, &ys);
        // A finite point landing on a pole drops the degree in w.
        let hits_infinity = r.deg() < n;
        image = AlgSet::new(&r, hits_infinity).expect("image resultant is nonzero");
    }
    if t.has_infinity() {
        image = image.union(&AlgSet::from_points(&[eval_map(map, &ProjPoint::Infinity)]));
    }
    image
}

/// Cardinality check `d(|S|−2)+2 ≤ |F⁻¹(S)| ≤ d·|S|`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RhReport {
    pub actual: usize,
    pub lower: i64,
    pub upper: usize,
    pub holds: bool,
}

pub fn verify_rh_bound(map: &RationalMap, s: &AlgSet) -> RhReport {
    let d = map.degree;
    let k = s.cardinality();
    let actual = pullback_set(map, s).cardinality();
    let lower = d as i64 * (k as i64 - 2) + 2;
    let upper = d * k;
    RhReport {
        actual,
        lower,
        upper,
        holds: lower <= actual as i64 && actual <= upper,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64s(c)
    }

    fn poly_map(c: &[i64]) -> RationalMap {
        RationalMap::polynomial(&p(c)).unwrap()
    }

    fn pts(v: &[i64]) -> AlgSet {
        AlgSet::from_points(&v.iter().map(|&x| ProjPoint::integer(x)).collect::<Vec<_>>())
    }

    #[test]
    fn make_map_examples() {
        let m = make_map(&p(&[-1, 0, 1]), &p(&[-1, 1])).unwrap();
        assert_eq!((m.num(), m.den(), m.degree()), (&p(&[1, 1]), &p(&[1]), 1));
        let m = make_map(&p(&[0, 2]), &p(&[2])).unwrap();
        assert_eq!((m.num(), m.den(), m.degree()), (&p(&[0, 1]), &p(&[1]), 1));
        assert_eq!(make_map(&p(&[0, 0, 1]), &p(&[1])).unwrap().degree(), 2);
        assert_eq!(make_map(&p(&[3]), &p(&[5])), Err(Error::ConstantMap));
        assert_eq!(make_map(&p(&[0, 1]), &p(&[0, 1])), Err(Error::ConstantMap));
        assert_eq!(
            make_map(&p(&[0, 1]), &IntPoly::zero()),
            Err(Error::ZeroDenominator)
        );
        let m = make_map(&p(&[1]), &p(&[0, -2])).unwrap();
        assert_eq!((m.num(), m.den()), (&p(&[-1]), &p(&[0, 2])));
    }

    #[test]
    fn eval_examples() {
        let sq = RationalMap::power(2);
        assert_eq!(sq.eval(&ProjPoint::ratio(3, 2)), ProjPoint::ratio(9, 4));
        assert_eq!(sq.eval(&ProjPoint::Infinity), ProjPoint::Infinity);
        let inv = make_map(&p(&[1]), &p(&[0, 1])).unwrap();
        assert_eq!(inv.eval(&ProjPoint::integer(0)), ProjPoint::Infinity);
        assert_eq!(inv.eval(&ProjPoint::Infinity), ProjPoint::integer(0));
        let mobius = make_map(&p(&[1, 2]), &p(&[-1, 1])).unwrap();
        assert_eq!(mobius.eval(&ProjPoint::Infinity), ProjPoint::integer(2));
    }

    #[test]
    fn compose_examples() {
        let sq = RationalMap::power(2);
        assert_eq!(sq.compose(&poly_map(&[1, 1])), poly_map(&[1, 2, 1]));
        assert_eq!(sq.compose(&poly_map(&[0, -1])), sq);
        let g3 = poly_map(&[1, 0, 0, 1]);
        assert_eq!(sq.compose(&g3).degree(), 6);
    }

    #[test]
    fn equality_examples() {
        let a = make_map(&p(&[-1, 0, 1]), &p(&[-1, 1])).unwrap();
        assert!(maps_equal(&a, &poly_map(&[1, 1])));
        let sq = RationalMap::power(2);
        assert!(maps_equal(&sq, &sq.compose(&poly_map(&[0, -1]))));
        assert!(!maps_equal(&sq, &poly_map(&[1, 2, 1])));
    }

    #[test]
    fn pullback_examples() {
        let sq = RationalMap::power(2);
        assert_eq!(sq.pullback(&pts(&[4])).poly(), &p(&[-4, 0, 1]));
        let s = sq.pullback(&pts(&[0, 1, 4]));
        assert_eq!(s, pts(&[0, 1, -1, 2, -2]));
        assert_eq!(s.cardinality(), 5);
        assert_eq!(sq.pullback(&AlgSet::infinity()), AlgSet::infinity());
        assert!(sq.pullback(&AlgSet::empty()).is_empty());
    }

    #[test]
    fn pullback_through_poles() {
        // F = 1/(z^2 − 1): F⁻¹(∞) = {±1}, F⁻¹(0) = {∞}
        let f = make_map(&p(&[1]), &p(&[-1, 0, 1])).unwrap();
        assert_eq!(f.pullback(&AlgSet::infinity()), pts(&[1, -1]));
        assert_eq!(f.pullback(&pts(&[0])), AlgSet::infinity());
        assert_eq!(
            f.pullback(&pts(&[1])),
            AlgSet::new(&p(&[-2, 0, 1]), false).unwrap()
        );
        assert_eq!(f.pullback(&pts(&[-1])), pts(&[0]));
    }

    #[test]
    fn pushforward_examples() {
        let b = poly_map(&[1, 2, 1]);
        assert_eq!(b.pushforward(&pts(&[-1])), pts(&[0]));
        assert_eq!(b.pushforward(&pts(&[0, -2])), pts(&[1]));
        let t = AlgSet::new(&p(&[-2, 0, 1]), false).unwrap();
        assert_eq!(b.pushforward(&t).poly(), &p(&[1, -6, 1]));
        assert!(b.pushforward(&AlgSet::empty()).is_empty());
    }

    #[test]
    fn pushforward_reaches_infinity() {
        let f = make_map(&p(&[1]), &p(&[0, 1])).unwrap();
        assert_eq!(
            f.pushforward(&pts(&[0, 2])),
            AlgSet::from_points(&[ProjPoint::Infinity, ProjPoint::ratio(1, 2)])
        );
        assert_eq!(f.pushforward(&AlgSet::infinity()), pts(&[0]));
    }

    #[test]
    fn rh_examples() {
        let sq = RationalMap::power(2);
        let r = verify_rh_bound(&sq, &pts(&[0, 1, 4]));
        assert_eq!(
            r,
            RhReport {
                actual: 5,
                lower: 4,
                upper: 6,
                holds: true
            }
        );
        let cube = RationalMap::power(3);
        let zero_inf = pts(&[0]).union(&AlgSet::infinity());
        let r = verify_rh_bound(&cube, &zero_inf);
        assert_eq!((r.actual, r.lower), (2, 2));
        let r = verify_rh_bound(&poly_map(&[-2, 0, 1]), &pts(&[2, -2]));
        assert_eq!((r.actual, r.lower, r.holds), (3, 2, true));
    }

    #[test]
    fn integer_interpolation_recovers_polynomial() {
        let target = p(&[7, -3, 0, 5, 1]);
        let xs: Vec<BigInt> = (0..5).map(node).collect();
        let ys: Vec<BigInt> = xs.iter().map(|x| target.eval(x)).collect();
        assert_eq!(interpolate_integer(&xs, &ys), target);
    }
}
