//! Heights: Weil height of rational points, the log-max height on ℂ, and
//! set-level heights through the Mahler measure.
//!
//! All values are natural logarithms.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::algset::AlgSet;
use crate::bigfloat::{BigFloat, MpComplex};
use crate::error::{Error, Result};
use crate::maps::RationalMap;
use crate::point::ProjPoint;
use crate::poly::{squarefree_decomposition, IntPoly};
use crate::roots::{int_poly_roots, polish_roots, DEFAULT_PRECISION};

/// Target change between successive precision levels.
pub const MAHLER_TOLERANCE: f64 = 1e-12;
/// Largest precision tried before giving up.
pub const MAX_PRECISION: u32 = 8192;
/// Graeffe root-squaring steps.
pub const GRAEFFE_STEPS: u32 = 40;
/// Degree up to which `mahler_measure` also runs the Graeffe cross-check.
pub const GRAEFFE_CHECK_MAX_DEGREE: usize = 64;
/// Allowed disagreement between the two Mahler computations.
pub const GRAEFFE_AGREEMENT: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum HeightWarning {
    ConstantPolynomial,
    GraeffeDisagreement { delta: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HeightValue {
    pub value: f64,
    pub error_bound: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub warning: Option<HeightWarning>,
}

impl HeightValue {
    pub fn exact(value: f64) -> Self {
        HeightValue {
            value,
            error_bound: 0.0,
            warning: None,
        }
    }
}

/// `ln |x|` for a nonzero big integer.
pub fn ln_bigint(x: &BigInt) -> f64 {
    BigFloat::from_bigint(x, 64).ln_abs()
}

/// `log max(|p|, |q|)` for `x = p/q` in lowest terms; 0 at infinity.
pub fn weil_height(x: &ProjPoint) -> HeightValue {
    HeightValue::exact(ln_bigint(&x.naive_height()))
}

/// `log max(1, |z|)`.
pub fn logmax_height(z: Complex64) -> Result<HeightValue> {
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::NonFinite(format!("{z}")));
    }
    Ok(HeightValue::exact(z.norm().ln().max(0.0)))
}

/// `Σ log max(1, |r|)` over the roots.
fn log_plus_sum(roots: &[MpComplex]) -> f64 {
    roots.iter().map(|r| r.ln_abs().max(0.0)).sum()
}

fn as_mp(p: &IntPoly, prec: u32) -> Vec<MpComplex> {
    p.coeffs()
        .iter()
        .map(|c| MpComplex::real(BigFloat::from_bigint(c, prec)))
        .collect()
}

/// `log M(p)` for squarefree `p`, doubling precision until two levels agree.
fn log_mahler_squarefree(p: &IntPoly) -> Result<(f64, f64)> {
    let lc = ln_bigint(p.leading().expect("nonzero"));
    if p.deg() == 0 {
        return Ok((lc, 0.0));
    }
    let mut prec = DEFAULT_PRECISION;
    let mut roots = int_poly_roots(p, prec)?;
    let mut value = log_plus_sum(&roots);
    loop {
        let next = prec * 2;
        if next > MAX_PRECISION {
            return Err(Error::NoConvergence {
                context: format!("Mahler measure of degree {} polynomial", p.deg()),
                precision: prec,
            });
        }
        roots = polish_roots(&as_mp(p, next), roots, next)?;
        let refined = log_plus_sum(&roots);
        let delta = (refined - value).abs();
        prec = next;
        value = refined;
        if delta < MAHLER_TOLERANCE {
            return Ok((lc + value, delta));
        }
    }
}

/// `log M(p)` from the roots, with a precision-doubling error bound and a
/// Graeffe cross-check for moderate degrees.
pub fn mahler_measure(p: &IntPoly) -> Result<HeightValue> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial("Mahler measure"));
    }
    if p.is_constant() {
        return Ok(HeightValue {
            value: ln_bigint(&p.coeffs()[0]),
            error_bound: 0.0,
            warning: Some(HeightWarning::ConstantPolynomial),
        });
    }
    let (c, parts) = squarefree_decomposition(p)?;
    let mut value = ln_bigint(&c);
    let mut error_bound = 0.0;
    for (a, mult) in &parts {
        let (v, e) = log_mahler_squarefree(a)?;
        value += *mult as f64 * v;
        error_bound += *mult as f64 * e;
    }
    let mut warning = None;
    if p.deg() <= GRAEFFE_CHECK_MAX_DEGREE {
        let g = graeffe_log_mahler(p)?;
        let delta = (g.value - value).abs();
        if delta > GRAEFFE_AGREEMENT {
            warning = Some(HeightWarning::GraeffeDisagreement { delta });
        }
    }
    Ok(HeightValue {
        value,
        error_bound,
        warning,
    })
}

/// Working precision for root squaring. Cancellation can cost up to about
/// `2d` bits in a step while roots of equal modulus are still clustered.
fn graeffe_precision(d: usize) -> u64 {
    64 + GRAEFFE_STEPS as u64 * (2 * d as u64 + 8)
}

/// `log M(p)` by Graeffe root squaring.
///
/// After `k` steps the roots are the `2^k`-th powers of the originals, and
/// `M(p_k) ≤ ‖p_k‖₂ ≤ 2^d M(p_k)`, so `2^{-k} log ‖p_k‖₂` overestimates
/// `log M(p)` by at most `2^{-k} d log 2`, which is the reported bound.
/// Coefficients are kept as integers sharing one binary exponent and are
/// truncated back to a fixed width after every step.
pub fn graeffe_log_mahler(p: &IntPoly) -> Result<HeightValue> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial("Graeffe iteration"));
    }
    let d = p.deg();
    let width = graeffe_precision(d);
    let mut a: Vec<BigInt> = p.coeffs().to_vec();
    // true coefficients are a · 2^scale
    let mut scale: f64 = 0.0;
    let mut k = 0;
    let renormalize = |a: &mut Vec<BigInt>, scale: &mut f64| {
        let bits = a.iter().map(|c| c.bits()).max().unwrap_or(0);
        if bits > width {
            let shift = bits - width;
            for c in a.iter_mut() {
                *c = &*c >> shift;
            }
            *scale += shift as f64;
        }
    };
    renormalize(&mut a, &mut scale);
    while k < GRAEFFE_STEPS {
        let mut next = vec![BigInt::zero(); d + 1];
        for (j, slot) in next.iter_mut().enumerate() {
            let mut acc = BigInt::zero();
            for i in 0..=(2 * j).min(d) {
                let l = 2 * j - i;
                if l > d {
                    continue;
                }
                let t = &a[i] * &a[l];
                if l % 2 == 0 {
                    acc += t;
                } else {
                    acc -= t;
                }
            }
            *slot = acc;
        }
        a = next;
        scale *= 2.0;
        renormalize(&mut a, &mut scale);
        k += 1;
    }
    let norm2: BigInt = a.iter().map(|c| c * c).sum();
    let log2_norm = 0.5 * BigFloat::from_bigint(&norm2, 64).log2_abs() + scale;
    let steps = 2f64.powi(k as i32);
    Ok(HeightValue {
        value: log2_norm / steps * std::f64::consts::LN_2,
        error_bound: d as f64 * std::f64::consts::LN_2 / steps,
        warning: None,
    })
}

/// Total and average height of a set.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SetHeight {
    pub total: HeightValue,
    pub average: f64,
}

/// `log M` of the defining polynomial (infinity contributes 0), which for a
/// primitive squarefree polynomial is the sum of the Weil heights of the
/// roots.
pub fn total_height(s: &AlgSet) -> Result<SetHeight> {
    if s.is_empty() {
        return Err(Error::Empty("set"));
    }
    let total = if s.poly().is_constant() {
        HeightValue::exact(0.0)
    } else {
        mahler_measure(s.poly())?
    };
    let average = total.value / s.cardinality() as f64;
    Ok(SetHeight { total, average })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FunctorialityEstimate {
    pub map: RationalMap,
    pub sample_count: usize,
    pub c_hat: f64,
    pub worst_point: ProjPoint,
}

/// `|h(R(z)) − deg R · h(z)|`, exactly 0 when the naive heights match.
pub fn functorial_defect(r: &RationalMap, z: &ProjPoint) -> f64 {
    let hr = r.eval(z).naive_height();
    let hz = z.naive_height().pow(r.degree() as u32);
    if hr == hz {
        0.0
    } else {
        (ln_bigint(&hr) - ln_bigint(&hz)).abs()
    }
}

/// Largest defect over the samples; a lower bound for the true constant.
pub fn estimate_functorial_constant(
    r: &RationalMap,
    samples: &[ProjPoint],
) -> Result<FunctorialityEstimate> {
    let first = samples.first().ok_or(Error::Empty("sample list"))?;
    let mut c_hat = functorial_defect(r, first);
    let mut worst = first.clone();
    for z in &samples[1..] {
        let c = functorial_defect(r, z);
        if c > c_hat {
            c_hat = c;
            worst = z.clone();
        }
    }
    Ok(FunctorialityEstimate {
        map: r.clone(),
        sample_count: samples.len(),
        c_hat,
        worst_point: worst,
    })
}

/// Largest naive-height bound accepted by the enumerators.
pub const MAX_ENUMERATION_BOUND: u64 = 1 << 16;

/// Every `p/q` in lowest terms with `max(|p|, |q|) ≤ b`, plus infinity,
/// sorted.
pub fn enumerate_rational_points_up_to(b: u64) -> Result<Vec<ProjPoint>> {
    if b > MAX_ENUMERATION_BOUND {
        return Err(Error::InvalidArgument(format!(
            "naive height bound {b} exceeds {MAX_ENUMERATION_BOUND}"
        )));
    }
    let b = b as i64;
    let mut out = Vec::new();
    if b >= 1 {
        out.push(ProjPoint::integer(0));
    }
    for q in 1..=b {
        for p in 1..=b {
            if p.gcd(&q) == 1 {
                out.push(ProjPoint::ratio(p, q));
                out.push(ProjPoint::ratio(-p, q));
            }
        }
    }
    out.push(ProjPoint::Infinity);
    out.sort();
    Ok(out)
}

/// Every rational point of Weil height at most `bound`.
pub fn enumerate_rational_points(bound: f64) -> Result<Vec<ProjPoint>> {
    if bound.is_nan() || bound < 0.0 {
        return Err(Error::NegativeBound(bound));
    }
    // a hair of slack so that bound = log 2 still admits 2
    let b = (bound.exp() * (1.0 + 1e-12)).floor();
    let b = b.to_u64().filter(|_| b.is_finite()).ok_or_else(|| {
        Error::InvalidArgument(format!("height bound {bound} too large to enumerate"))
    })?;
    enumerate_rational_points_up_to(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64s(c)
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn weil_examples() {
        assert!(close(
            weil_height(&ProjPoint::ratio(3, 2)).value,
            3f64.ln(),
            1e-15
        ));
        assert_eq!(weil_height(&ProjPoint::integer(0)).value, 0.0);
        assert_eq!(weil_height(&ProjPoint::Infinity).value, 0.0);
        assert!(close(
            weil_height(&ProjPoint::ratio(-7, 3)).value,
            7f64.ln(),
            1e-15
        ));
    }

    #[test]
    fn logmax_examples() {
        assert_eq!(logmax_height(Complex64::new(0.5, 0.0)).unwrap().value, 0.0);
        assert!(close(
            logmax_height(Complex64::new(2.0, 0.0)).unwrap().value,
            2f64.ln(),
            1e-15
        ));
        assert!(close(
            logmax_height(Complex64::new(-3.0, 4.0)).unwrap().value,
            5f64.ln(),
            1e-15
        ));
        assert!(logmax_height(Complex64::new(f64::NAN, 0.0)).is_err());
    }

    #[test]
    fn mahler_examples() {
        let m = mahler_measure(&p(&[-1, 0, 1])).unwrap();
        assert!(close(m.value, 0.0, 1e-12), "{m:?}");
        assert!(m.warning.is_none());
        assert!(close(
            mahler_measure(&p(&[-2, 0, 1])).unwrap().value,
            2f64.ln(),
            1e-12
        ));
        assert!(close(
            mahler_measure(&p(&[-3, 2])).unwrap().value,
            3f64.ln(),
            1e-12
        ));
        let c = mahler_measure(&p(&[-5])).unwrap();
        assert!(close(c.value, 5f64.ln(), 1e-15));
        assert_eq!(c.warning, Some(HeightWarning::ConstantPolynomial));
        assert!(mahler_measure(&IntPoly::zero()).is_err());
    }

    #[test]
    fn mahler_with_repeated_factors() {
        // 4 (z − 3)^2 (z^2 + 1)
        let f = &(&p(&[-3, 1]) * &p(&[-3, 1])) * &p(&[1, 0, 1]);
        let f = f.scale(&BigInt::from(4));
        let m = mahler_measure(&f).unwrap();
        assert!(close(m.value, 36f64.ln(), 1e-12), "{m:?}");
    }

    #[test]
    fn graeffe_matches_known_values() {
        for (c, want) in [
            (vec![-2, 0, 1], 2f64.ln()),
            (vec![1, -6, 1], (3.0 + 2.0 * 2f64.sqrt()).ln()),
            (vec![-1, 0, 0, 0, 0, 1], 0.0),
            (vec![-3, 2], 3f64.ln()),
        ] {
            let g = graeffe_log_mahler(&p(&c)).unwrap();
            assert!(close(g.value, want, 1e-10), "{c:?}: {g:?}");
        }
    }

    #[test]
    fn total_height_examples() {
        let s = AlgSet::new(&p(&[-4, 0, 1]), false).unwrap();
        let h = total_height(&s).unwrap();
        assert!(close(h.total.value, 4f64.ln(), 1e-12));
        assert!(close(h.average, 2f64.ln(), 1e-12));
        assert_eq!(total_height(&AlgSet::infinity()).unwrap().total.value, 0.0);
        let s = AlgSet::new(&p(&[1, -6, 1]), false).unwrap();
        let h = total_height(&s).unwrap();
        assert!(close(h.total.value, (3.0 + 2.0 * 2f64.sqrt()).ln(), 1e-12));
        assert!(total_height(&AlgSet::empty()).is_err());
    }

    #[test]
    fn functorial_constant_examples() {
        let grid = enumerate_rational_points(50f64.ln()).unwrap();
        let sq = estimate_functorial_constant(&RationalMap::power(2), &grid).unwrap();
        assert_eq!(sq.c_hat, 0.0);
        let id = estimate_functorial_constant(&RationalMap::identity(), &grid).unwrap();
        assert_eq!(id.c_hat, 0.0);
        let shift = RationalMap::polynomial(&p(&[1, 1])).unwrap();
        let e = estimate_functorial_constant(&shift, &grid).unwrap();
        // independent scan of max(|p+q|, q) / max(|p|, q)
        let mut worst = 0.0f64;
        for q in 1..=50i64 {
            for pp in -50..=50i64 {
                if num_integer::gcd(pp, q) == 1 {
                    let r = ((pp + q).abs().max(q) as f64 / pp.abs().max(q) as f64).ln();
                    worst = worst.max(r.abs());
                }
            }
        }
        assert!(close(e.c_hat, worst, 1e-12));
        assert!(e.c_hat <= 2f64.ln() + 1e-15);
        assert!(estimate_functorial_constant(&shift, &[]).is_err());
    }

    #[test]
    fn enumeration_examples() {
        assert_eq!(
            enumerate_rational_points(0.0).unwrap(),
            vec![
                ProjPoint::integer(-1),
                ProjPoint::integer(0),
                ProjPoint::integer(1),
                ProjPoint::Infinity
            ]
        );
        let two = enumerate_rational_points(2f64.ln()).unwrap();
        assert_eq!(two.len(), 8);
        assert!(two.contains(&ProjPoint::ratio(-1, 2)));
        assert!(enumerate_rational_points(-0.1).is_err());
    }
}
