//! Simultaneous root finding (Aberth–Ehrlich) for polynomials with
//! multiprecision complex coefficients.
//!
//! Starting points come from the Newton polygon of the coefficient
//! magnitudes. When the coefficients fit the f64 exponent range a cheap f64
//! Aberth pass runs first and the multiprecision pass only polishes.

use std::f64::consts::TAU;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::bigfloat::{BigFloat, MpComplex};
use crate::error::{Error, Result};
use crate::poly::{squarefree_part, IntPoly};

/// Default working precision in bits.
pub const DEFAULT_PRECISION: u32 = 128;

const F64_MAX_ITER: usize = 800;

/// Ill-conditioned clusters escalate the working precision up to this.
pub const MAX_PRECISION: u32 = 8192;

const STALL_ITERATIONS: usize = 30;

/// All complex roots of `Σ cᵢ zⁱ` (lowest degree first, nonzero leading
/// coefficient), with multiplicity, at `prec` bits.
pub fn complex_roots(coeffs: &[MpComplex], prec: u32) -> Result<Vec<MpComplex>> {
    let coeffs: Vec<MpComplex> = coeffs.iter().map(|c| c.with_prec(prec)).collect();
    let zeros = coeffs.iter().take_while(|c| c.is_zero()).count();
    let core = &coeffs[zeros..];
    let d = core.len().saturating_sub(1);
    if core.is_empty() || core.last().unwrap().is_zero() {
        return Err(Error::InvalidArgument(
            "root finding needs a nonzero leading coefficient".into(),
        ));
    }
    let mut roots = vec![MpComplex::zero(prec); zeros];
    match d {
        0 => {}
        1 => roots.push(&(-&core[0]) / &core[1]),
        _ => {
            let start = initial_guesses(core, prec);
            roots.extend(aberth_mp(core, start, prec)?);
        }
    }
    Ok(roots)
}

/// Roots of an integer polynomial.
pub fn int_poly_roots(p: &IntPoly, prec: u32) -> Result<Vec<MpComplex>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial("root finding"));
    }
    let c: Vec<MpComplex> = p
        .coeffs()
        .iter()
        .map(|x| MpComplex::real(BigFloat::from_bigint(x, prec)))
        .collect();
    complex_roots(&c, prec)
}

/// Refines approximate roots at a (usually higher) precision.
pub fn polish_roots(
    coeffs: &[MpComplex],
    approx: Vec<MpComplex>,
    prec: u32,
) -> Result<Vec<MpComplex>> {
    let coeffs: Vec<MpComplex> = coeffs.iter().map(|c| c.with_prec(prec)).collect();
    let zeros = coeffs.iter().take_while(|c| c.is_zero()).count();
    let core = &coeffs[zeros..];
    let (zero_like, rest): (Vec<_>, Vec<_>) = approx.into_iter().partition(|z| z.is_zero());
    debug_assert_eq!(zero_like.len(), zeros);
    let mut out = vec![MpComplex::zero(prec); zeros];
    match core.len() - 1 {
        0 => {}
        1 => out.push(&(-&core[0]) / &core[1]),
        _ => {
            let start = rest.into_iter().map(|z| z.with_prec(prec)).collect();
            out.extend(aberth_mp(core, start, prec)?);
        }
    }
    Ok(out)
}

/// Sorts points lexicographically by (re, im) of their f64 projections.
pub fn sort_canonical(points: &mut [MpComplex]) {
    points.sort_by(|a, b| {
        let (x, y) = (a.to_c64(), b.to_c64());
        x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im))
    });
}

fn log2_magnitudes(core: &[MpComplex]) -> Vec<f64> {
    core.iter().map(MpComplex::log2_abs).collect()
}

/// Upper convex hull of `(i, l_i)` over finite `l_i`; returns vertex indices.
fn upper_hull(l: &[f64]) -> Vec<usize> {
    let mut hull: Vec<usize> = Vec::new();
    for i in (0..l.len()).filter(|&i| l[i].is_finite()) {
        while hull.len() >= 2 {
            let a = hull[hull.len() - 2];
            let b = hull[hull.len() - 1];
            // drop b if it lies on or below the segment a–i
            let cross =
                (b as f64 - a as f64) * (l[i] - l[a]) - (i as f64 - a as f64) * (l[b] - l[a]);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(i);
    }
    hull
}

/// Newton-polygon starting points as (log2 radius, angle) pairs.
fn polygon_points(l: &[f64]) -> Vec<(f64, f64)> {
    let d = l.len() - 1;
    let hull = upper_hull(l);
    let mut out = Vec::with_capacity(d);
    for (seg, w) in hull.windows(2).enumerate() {
        let (a, b) = (w[0], w[1]);
        let count = b - a;
        let log_r = (l[a] - l[b]) / count as f64;
        let offset = TAU * seg as f64 / d as f64 + 0.7;
        for t in 0..count {
            out.push((log_r, TAU * t as f64 / count as f64 + offset));
        }
    }
    out
}

fn initial_guesses(core: &[MpComplex], prec: u32) -> Vec<MpComplex> {
    let l = log2_magnitudes(core);
    let lmax = l.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let lmin = l
        .iter()
        .cloned()
        .filter(|x| x.is_finite())
        .fold(f64::INFINITY, f64::min);
    let polygon = polygon_points(&l);
    if lmax - lmin < 900.0 {
        let scaled: Vec<Complex64> = core
            .iter()
            .map(|c| {
                let s = c.with_prec(64);
                Complex64::new(
                    s.re.mul_pow2(-(lmax.ceil() as i64)).to_f64(),
                    s.im.mul_pow2(-(lmax.ceil() as i64)).to_f64(),
                )
            })
            .collect();
        let start: Vec<Complex64> = polygon
            .iter()
            .map(|&(lr, ang)| Complex64::from_polar(lr.exp2(), ang))
            .collect();
        if start.iter().all(|z| z.is_finite() && z.norm() > 0.0) {
            let roots = aberth_f64(&scaled, start);
            if roots.iter().all(|z| z.is_finite() && z.norm() > 0.0) {
                return roots
                    .into_iter()
                    .map(|z| MpComplex::from_c64(z, prec))
                    .collect();
            }
        }
    }
    polygon
        .into_iter()
        .map(|(lr, ang)| {
            let fl = lr.floor();
            let mag = (lr - fl).exp2();
            let re = BigFloat::from_f64(mag * ang.cos(), prec).mul_pow2(fl as i64);
            let im = BigFloat::from_f64(mag * ang.sin(), prec).mul_pow2(fl as i64);
            MpComplex::new(re, im)
        })
        .collect()
}

/// `p'(z)/p(z)` in f64, through the reversed polynomial outside the unit disk
/// so that high powers never overflow. `None` when `p(z) = 0`.
fn log_derivative_f64(c: &[Complex64], z: Complex64) -> Option<Complex64> {
    let d = c.len() - 1;
    if z.norm() <= 1.0 {
        let mut p = c[d];
        let mut dp = Complex64::zero();
        for k in (0..d).rev() {
            dp = dp * z + p;
            p = p * z + c[k];
        }
        if p == Complex64::zero() {
            return None;
        }
        Some(dp / p)
    } else {
        let y = z.inv();
        // rev(y) = Σ c_{d−i} y^i
        let mut r = c[0];
        let mut dr = Complex64::zero();
        for &ck in &c[1..=d] {
            dr = dr * y + r;
            r = r * y + ck;
        }
        if r == Complex64::zero() {
            return None;
        }
        Some(y * (Complex64::new(d as f64, 0.0) - y * dr / r))
    }
}

fn aberth_f64(c: &[Complex64], mut z: Vec<Complex64>) -> Vec<Complex64> {
    let n = z.len();
    for _ in 0..F64_MAX_ITER {
        let mut worst = 0.0f64;
        for i in 0..n {
            let Some(ld) = log_derivative_f64(c, z[i]) else {
                continue;
            };
            let mut s = Complex64::zero();
            for j in 0..n {
                if j != i {
                    s += (z[i] - z[j]).inv();
                }
            }
            let denom = ld - s;
            if denom == Complex64::zero() || !denom.is_finite() {
                continue;
            }
            let w = denom.inv();
            z[i] -= w;
            worst = worst.max(w.norm() / z[i].norm().max(f64::MIN_POSITIVE));
        }
        if worst < 1e-13 {
            break;
        }
    }
    z
}

fn horner_with_derivative(c: &[MpComplex], z: &MpComplex) -> (MpComplex, MpComplex) {
    let d = c.len() - 1;
    let mut p = c[d].clone();
    let mut dp = MpComplex::zero(z.prec());
    for k in (0..d).rev() {
        dp = &(&dp * z) + &p;
        p = &(&p * z) + &c[k];
    }
    (p, dp)
}

/// Aberth at `prec` bits, doubling the precision while the iteration stalls.
fn aberth_mp(c: &[MpComplex], mut z: Vec<MpComplex>, prec: u32) -> Result<Vec<MpComplex>> {
    let mut p = prec;
    loop {
        let coeffs: Vec<MpComplex> = c.iter().map(|x| x.with_prec(p)).collect();
        let start = z.into_iter().map(|x| x.with_prec(p)).collect();
        match aberth_pass(&coeffs, start, p) {
            Ok(r) => return Ok(r.into_iter().map(|x| x.with_prec(prec)).collect()),
            Err(r) if p < MAX_PRECISION => {
                z = r;
                p = (2 * p).min(MAX_PRECISION);
            }
            Err(_) => {
                return Err(Error::NoConvergence {
                    context: format!("degree {} polynomial", c.len() - 1),
                    precision: p,
                })
            }
        }
    }
}

/// Gauss–Seidel Aberth iteration at `prec` bits. Roots whose relative
/// correction falls below `2^{12−prec}` are frozen. On a stall the last iterate comes back as
/// the error so a higher precision can resume from it.
fn aberth_pass(
    c: &[MpComplex],
    mut z: Vec<MpComplex>,
    prec: u32,
) -> std::result::Result<Vec<MpComplex>, Vec<MpComplex>> {
    let n = z.len();
    let tight = -(prec as f64 - 12.0);
    let loose = -(prec as f64) / 4.0;
    let max_iter = 80 + 2 * prec as usize;
    let mut frozen = vec![false; n];
    let mut last = vec![f64::INFINITY; n];
    let (mut best, mut best_done, mut idle) = (f64::INFINITY, 0, 0);
    for _ in 0..max_iter {
        let mut active = false;
        for i in 0..n {
            if frozen[i] {
                continue;
            }
            let (p, dp) = horner_with_derivative(c, &z[i]);
            if p.is_zero() {
                frozen[i] = true;
                last[i] = f64::NEG_INFINITY;
                continue;
            }
            let mut s = MpComplex::zero(prec);
            for j in 0..n {
                if j != i {
                    let diff = &z[i] - &z[j];
                    if !diff.is_zero() {
                        s = &s + &diff.recip();
                    }
                }
            }
            let denom = &(&dp / &p) - &s;
            if denom.is_zero() {
                continue;
            }
            let w = denom.recip();
            z[i] = &z[i] - &w;
            let rel = w.log2_abs() - z[i].log2_abs();
            last[i] = rel;
            if rel <= tight {
                frozen[i] = true;
            } else {
                active = true;
            }
        }
        if !active {
            return Ok(z);
        }
        let worst = (0..n)
            .filter(|&i| !frozen[i])
            .map(|i| last[i])
            .fold(f64::NEG_INFINITY, f64::max);
        let done = frozen.iter().filter(|&&f| f).count();
        if worst < best - 1.0 || done > best_done {
            best = best.min(worst);
            best_done = done;
            idle = 0;
        } else {
            idle += 1;
            if idle >= STALL_ITERATIONS {
                break;
            }
        }
    }
    // Clusters of nearly equal roots converge only linearly.
    if last.iter().all(|&r| r <= loose) {
        return Ok(z);
    }
    Err(z)
}

/// The rational roots of an integer polynomial, sorted ascending.
///
/// Candidates are read off numerical real roots by continued fractions and
/// then confirmed by exact evaluation, so a listed root is always a root.
pub fn rational_roots(p: &IntPoly) -> Result<Vec<BigRational>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial("rational roots"));
    }
    let q = squarefree_part(p)?;
    let mut out = Vec::new();
    let Some(d) = q.degree() else {
        return Ok(out);
    };
    if d == 0 {
        return Ok(out);
    }
    let lc = q.leading().unwrap().abs();
    let a0_bits = q.coeffs().iter().find(|c| !c.is_zero()).unwrap().bits();
    let prec = (2 * lc.bits() + a0_bits + 96).max(DEFAULT_PRECISION as u64) as u32;
    let roots = int_poly_roots(&q, prec)?;
    let im_tol = -(prec as f64) / 3.0;
    for r in roots {
        if r.is_zero() {
            out.push(BigRational::zero());
            continue;
        }
        if r.im.log2_abs() - r.log2_abs().max(0.0) > im_tol {
            continue;
        }
        if let Some(x) = recover_rational(&r.re, &lc, &q) {
            if !out.contains(&x) {
                out.push(x);
            }
        }
    }
    out.sort();
    Ok(out)
}

fn recover_rational(x: &BigFloat, max_den: &BigInt, q: &IntPoly) -> Option<BigRational> {
    let exact = x.to_rational();
    let (mut a, mut b) = (exact.numer().clone(), exact.denom().clone());
    // convergents h/k
    let (mut h0, mut h1) = (BigInt::zero(), BigInt::one());
    let (mut k0, mut k1) = (BigInt::one(), BigInt::zero());
    while !b.is_zero() {
        let (t, r) = a.div_mod_floor(&b);
        let h2 = &t * &h1 + &h0;
        let k2 = &t * &k1 + &k0;
        if &k2 > max_den {
            break;
        }
        if q.eval_homogeneous(&h2, &k2, q.deg()).is_zero() {
            return Some(BigRational::new(h2, k2));
        }
        h0 = std::mem::replace(&mut h1, h2);
        k0 = std::mem::replace(&mut k1, k2);
        a = std::mem::replace(&mut b, r);
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn roots_f64(p: &IntPoly) -> Vec<Complex64> {
        let mut r = int_poly_roots(p, 128).unwrap();
        sort_canonical(&mut r);
        r.iter().map(MpComplex::to_c64).collect()
    }

    #[test]
    fn quadratic_roots() {
        let r = roots_f64(&IntPoly::from_i64s(&[-2, 0, 1]));
        assert!((r[0].re + 2f64.sqrt()).abs() < 1e-15);
        assert!((r[1].re - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn roots_of_unity_and_zero() {
        let r = roots_f64(&IntPoly::from_i64s(&[0, 0, -1, 0, 0, 0, 0, 1]));
        assert_eq!(r.len(), 7);
        assert_eq!(r.iter().filter(|z| z.norm() == 0.0).count(), 2);
        for z in r.iter().filter(|z| z.norm() > 0.0) {
            assert!((z.norm() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn huge_coefficient_spread() {
        // (z − 2^-700)(z − 2^700) has coefficients outside the f64 comfort zone
        let a = BigInt::one() << 700usize;
        let p = IntPoly::new(vec![a.clone(), -(&a * &a + BigInt::one()), a]);
        let r = int_poly_roots(&p, 128).unwrap();
        let mut logs: Vec<f64> = r.iter().map(MpComplex::log2_abs).collect();
        logs.sort_by(f64::total_cmp);
        assert!((logs[0] + 700.0).abs() < 1e-9);
        assert!((logs[1] - 700.0).abs() < 1e-9);
    }

    #[test]
    fn multiple_root_is_tolerated() {
        let p = IntPoly::from_i64s(&[1, 2, 1]);
        let r = roots_f64(&p);
        for z in r {
            assert!((z - Complex64::new(-1.0, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn rational_roots_found_exactly() {
        // (2z − 3)(z + 5)(z^2 − 2) z
        let p = IntPoly::from_i64s(&[-3, 2])
            * IntPoly::from_i64s(&[5, 1])
            * IntPoly::from_i64s(&[-2, 0, 1])
            * IntPoly::from_i64s(&[0, 1]);
        let r = rational_roots(&p).unwrap();
        let want: Vec<BigRational> = vec![
            BigRational::from_integer(BigInt::from(-5)),
            BigRational::zero(),
            BigRational::new(BigInt::from(3), BigInt::from(2)),
        ];
        assert_eq!(r, want);
        assert!(rational_roots(&IntPoly::from_i64s(&[1, 0, 1]))
            .unwrap()
            .is_empty());
    }
}
