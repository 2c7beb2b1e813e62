//! Floating-point orbits of a correspondence on ℂ.
//!
//! Each point `s` is pulled back by solving `A_num(x) − s·A_den(x) = 0`
//! with the multiprecision root finder, pushed forward through `B`, and the
//! result deduplicated. Preimages at infinity and images at poles of `B`
//! leave ℂ and are dropped, with a count kept per step.

use num_complex::Complex64;
use serde::Serialize;

use crate::algset::AlgSet;
use crate::bigfloat::{BigFloat, MpComplex};
use crate::dynamics::Correspondence;
use crate::error::{Error, Result};
use crate::poly::IntPoly;
use crate::roots::{complex_roots, int_poly_roots, sort_canonical};

/// Default relative deduplication tolerance.
pub const DEDUP_TOLERANCE: f64 = 1e-12;

/// How many times the working precision is doubled before giving up.
const PRECISION_RETRIES: u32 = 3;

#[derive(Clone, Debug)]
pub struct NumericPointSet {
    pub points: Vec<MpComplex>,
    pub dedup_tolerance: f64,
    pub min_pairwise_distance: Option<f64>,
}

fn close(x: Complex64, y: Complex64, tol: f64) -> bool {
    (x - y).norm() <= tol * 1f64.max(x.norm()).max(y.norm())
}

impl NumericPointSet {
    /// Sorts canonically and merges points within the relative tolerance.
    pub fn new(mut points: Vec<MpComplex>, dedup_tolerance: f64) -> Result<Self> {
        if dedup_tolerance.is_nan() || dedup_tolerance <= 0.0 {
            return Err(Error::InvalidArgument(
                "dedup tolerance must be positive".into(),
            ));
        }
        sort_canonical(&mut points);
        let mut kept: Vec<MpComplex> = Vec::with_capacity(points.len());
        let mut kept64: Vec<Complex64> = Vec::with_capacity(points.len());
        for p in points {
            let z = p.to_c64();
            if !kept64.iter().any(|&w| close(z, w, dedup_tolerance)) {
                kept64.push(z);
                kept.push(p);
            }
        }
        let mut min_d: Option<f64> = None;
        for i in 0..kept64.len() {
            for j in i + 1..kept64.len() {
                let d = (kept64[i] - kept64[j]).norm();
                min_d = Some(min_d.map_or(d, |m| m.min(d)));
            }
        }
        Ok(NumericPointSet {
            points: kept,
            dedup_tolerance,
            min_pairwise_distance: min_d,
        })
    }

    pub fn from_c64(points: &[Complex64], dedup_tolerance: f64, prec: u32) -> Result<Self> {
        if points
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::NonFinite("starting point".into()));
        }
        Self::new(
            points
                .iter()
                .map(|&z| MpComplex::from_c64(z, prec))
                .collect(),
            dedup_tolerance,
        )
    }

    /// The finite points of an exact set.
    pub fn from_algset(s: &AlgSet, dedup_tolerance: f64, prec: u32) -> Result<Self> {
        let pts = if s.poly().is_constant() {
            Vec::new()
        } else {
            int_poly_roots(s.poly(), prec)?
        };
        Self::new(pts, dedup_tolerance)
    }

    pub fn to_c64(&self) -> Vec<Complex64> {
        self.points.iter().map(MpComplex::to_c64).collect()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// `Σ log max(1, |z|)`.
    pub fn logmax_total(&self) -> f64 {
        self.points.iter().map(|z| z.ln_abs().max(0.0)).sum()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct NumericStep {
    pub step: usize,
    #[serde(serialize_with = "ser_points")]
    pub points: Vec<Complex64>,
    pub cardinality: usize,
    pub logmax_total: f64,
    pub logmax_avg: Option<f64>,
    pub min_pairwise_distance: Option<f64>,
    /// Points that left ℂ (preimages at infinity, images at poles).
    pub dropped: usize,
}

fn ser_points<S: serde::Serializer>(
    pts: &[Complex64],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(pts.len()))?;
    for z in pts {
        seq.serialize_element(&[z.re, z.im])?;
    }
    seq.end()
}

fn mp_coeffs(p: &IntPoly, prec: u32) -> Vec<MpComplex> {
    p.coeffs()
        .iter()
        .map(|c| MpComplex::real(BigFloat::from_bigint(c, prec)))
        .collect()
}

fn horner(c: &[MpComplex], z: &MpComplex) -> MpComplex {
    let mut acc = MpComplex::zero(z.prec());
    for k in c.iter().rev() {
        acc = &(&acc * z) + k;
    }
    acc
}

/// Roots of `num − s·den`, dropping the missing ones at infinity.
fn preimages(
    num: &[MpComplex],
    den: &[MpComplex],
    s: &MpComplex,
    prec: u32,
) -> Result<(Vec<MpComplex>, usize)> {
    let len = num.len().max(den.len());
    let zero = MpComplex::zero(prec);
    let mut c: Vec<MpComplex> = (0..len)
        .map(|i| {
            let a = num.get(i).unwrap_or(&zero);
            let b = den.get(i).unwrap_or(&zero);
            a - &(s * b)
        })
        .collect();
    // a vanishing top coefficient means preimages at infinity
    let top_scale = c
        .iter()
        .map(|x| x.log2_abs())
        .fold(f64::NEG_INFINITY, f64::max);
    let cutoff = top_scale - 0.75 * prec as f64;
    let mut lost = 0;
    while c.len() > 1 && c.last().unwrap().log2_abs() < cutoff {
        c.pop();
        lost += 1;
    }
    if c.len() <= 1 {
        return Ok((Vec::new(), lost));
    }
    Ok((complex_roots(&c, prec)?, lost))
}

struct Working {
    a_num: Vec<MpComplex>,
    a_den: Vec<MpComplex>,
    b_num: Vec<MpComplex>,
    b_den: Vec<MpComplex>,
}

impl Working {
    fn new(c: &Correspondence, prec: u32) -> Self {
        Working {
            a_num: mp_coeffs(c.a.num(), prec),
            a_den: mp_coeffs(c.a.den(), prec),
            b_num: mp_coeffs(c.b.num(), prec),
            b_den: mp_coeffs(c.b.den(), prec),
        }
    }
}

fn step_point(c: &Correspondence, s: &MpComplex, prec: u32) -> Result<(Vec<MpComplex>, usize)> {
    let mut p = prec;
    let mut tries = 0;
    loop {
        let w = Working::new(c, p);
        match preimages(&w.a_num, &w.a_den, &s.with_prec(p), p) {
            Ok((xs, mut dropped)) => {
                let mut out = Vec::with_capacity(xs.len());
                for x in xs {
                    let d = horner(&w.b_den, &x);
                    let num = horner(&w.b_num, &x);
                    if d.is_zero() || d.log2_abs() < num.log2_abs() - 0.75 * p as f64 {
                        dropped += 1;
                    } else {
                        out.push((&num / &d).with_prec(prec));
                    }
                }
                return Ok((out, dropped));
            }
            Err(Error::NoConvergence { .. }) if tries < PRECISION_RETRIES => {
                tries += 1;
                p *= 2;
            }
            Err(Error::NoConvergence { precision, .. }) => {
                return Err(Error::NoConvergence {
                    context: format!("preimages of {}", s.to_c64()),
                    precision,
                })
            }
            Err(e) => return Err(e),
        }
    }
}

fn record(step: usize, set: &NumericPointSet, dropped: usize) -> NumericStep {
    let total = set.logmax_total();
    NumericStep {
        step,
        points: set.to_c64(),
        cardinality: set.len(),
        logmax_total: total,
        logmax_avg: (!set.is_empty()).then(|| total / set.len() as f64),
        min_pairwise_distance: set.min_pairwise_distance,
        dropped,
    }
}

/// Steps `0..=k_max` of the numeric orbit.
pub fn numeric_orbit(
    c: &Correspondence,
    start: &NumericPointSet,
    k_max: usize,
    prec: u32,
) -> Result<Vec<NumericStep>> {
    let mut out = vec![record(0, start, 0)];
    let mut current = start.clone();
    for step in 1..=k_max {
        let mut next = Vec::new();
        let mut dropped = 0;
        for s in &current.points {
            let (pts, d) = step_point(c, s, prec)?;
            next.extend(pts);
            dropped += d;
        }
        current = NumericPointSet::new(next, start.dedup_tolerance)?;
        out.push(record(step, &current, dropped));
    }
    Ok(out)
}

/// Largest distance from a point of `a` to its nearest point of `b`,
/// relative to `max(1, |z|)`, in both directions; `None` when the counts
/// differ.
pub fn match_distance(a: &[Complex64], b: &[Complex64]) -> Option<f64> {
    if a.len() != b.len() {
        return None;
    }
    let one_way = |x: &[Complex64], y: &[Complex64]| {
        x.iter()
            .map(|&z| {
                y.iter()
                    .map(|&w| (z - w).norm() / 1f64.max(z.norm()))
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0.0f64, f64::max)
    };
    Some(one_way(a, b).max(one_way(b, a)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{orbit, OrbitOptions};
    use crate::maps::RationalMap;
    use crate::point::ProjPoint;

    fn map(c: &[i64]) -> RationalMap {
        RationalMap::polynomial(&IntPoly::from_i64s(c)).unwrap()
    }

    fn start(v: &[f64]) -> NumericPointSet {
        let pts: Vec<Complex64> = v.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        NumericPointSet::from_c64(&pts, DEDUP_TOLERANCE, 128).unwrap()
    }

    #[test]
    fn matches_exact_orbit() {
        let c = Correspondence::new(map(&[0, 0, 1]), map(&[1, 2, 1]));
        let steps = numeric_orbit(&c, &start(&[4.0]), 2, 128).unwrap();
        let exact = orbit(
            &c,
            &AlgSet::from_points(&[ProjPoint::integer(4)]),
            2,
            &OrbitOptions {
                compute_heights: false,
                ..OrbitOptions::default()
            },
        )
        .unwrap();
        for (num, rec) in steps.iter().zip(&exact.records) {
            let ex = NumericPointSet::from_algset(&rec.set, DEDUP_TOLERANCE, 256).unwrap();
            let d = match_distance(&num.points, &ex.to_c64()).unwrap();
            assert!(d < 1e-10, "step {}: {d}", num.step);
        }
        assert_eq!(steps[2].cardinality, 3);
    }

    #[test]
    fn square_root_heights_halve() {
        let c = Correspondence::new(map(&[0, 0, 1]), map(&[0, 1]));
        let steps = numeric_orbit(&c, &start(&[4.0]), 4, 128).unwrap();
        for s in &steps {
            let want = 4f64.ln() / 2f64.powi(s.step as i32);
            assert!((s.logmax_avg.unwrap() - want).abs() < 1e-12);
        }
        let d: Vec<f64> = steps[1..]
            .iter()
            .map(|s| s.min_pairwise_distance.unwrap())
            .collect();
        assert!(d.windows(2).all(|w| w[1] < w[0]), "{d:?}");
    }

    #[test]
    fn dedup_merges_near_points() {
        let s = start(&[1.0, 1.0 + 1e-15]);
        assert_eq!(s.len(), 1);
        assert!(s.min_pairwise_distance.is_none());
        assert!(NumericPointSet::new(Vec::new(), 0.0).is_err());
    }

    #[test]
    fn poles_are_dropped() {
        // B = 1/z sends the preimage 0 to infinity
        let c = Correspondence::new(
            map(&[0, 1]),
            RationalMap::new(&IntPoly::one(), &IntPoly::from_i64s(&[0, 1])).unwrap(),
        );
        let steps = numeric_orbit(&c, &start(&[0.0, 2.0]), 1, 128).unwrap();
        assert_eq!(steps[1].cardinality, 1);
        assert_eq!(steps[1].dropped, 1);
        assert!((steps[1].points[0] - Complex64::new(0.5, 0.0)).norm() < 1e-15);
    }
}
