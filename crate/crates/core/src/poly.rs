//! Dense univariate polynomials over the integers.
//!
//! Coefficients are stored lowest degree first. The zero polynomial is the
//! empty coefficient vector, so the last stored coefficient is always nonzero.
//! GCD and resultant use the fraction-free subresultant remainder sequence;
//! coprime inputs are recognised early by a gcd computed modulo a word-size
//! prime.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    /// Builds a polynomial from coefficients, lowest degree first.
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    /// `c · z^k`.
    pub fn monomial(c: BigInt, k: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    /// The linear form `q·z − p` vanishing at `p/q`.
    pub fn linear_root(p: &BigInt, q: &BigInt) -> Self {
        Self::new(vec![-p.clone(), q.clone()])
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigInt> {
        self.coeffs
    }

    /// Coefficient of `z^i`, zero beyond the degree.
    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial mapped to 0.
    pub fn deg(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn derivative(&self) -> IntPoly {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    pub fn scale(&self, c: &BigInt) -> IntPoly {
        if c.is_zero() {
            return IntPoly::zero();
        }
        IntPoly {
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    /// Divides every coefficient by `c`; the caller guarantees exactness.
    pub fn div_scalar_exact(&self, c: &BigInt) -> IntPoly {
        debug_assert!(self.coeffs.iter().all(|x| (x % c).is_zero()));
        IntPoly {
            coeffs: self.coeffs.iter().map(|x| x / c).collect(),
        }
    }

    pub fn pow(&self, mut e: usize) -> IntPoly {
        let mut base = self.clone();
        let mut acc = IntPoly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    /// `Σ cᵢ pⁱ q^{D−i}`: the degree-`D` homogenisation evaluated at `(p : q)`.
    pub fn eval_homogeneous(&self, p: &BigInt, q: &BigInt, bound: usize) -> BigInt {
        debug_assert!(self.is_zero() || self.deg() <= bound);
        let mut acc = BigInt::zero();
        let mut qpow = BigInt::one();
        // Horner in p with the q powers attached from the top coefficient down.
        let n = self.coeffs.len();
        for i in (0..n).rev() {
            acc = acc * p + &self.coeffs[i] * &qpow;
            qpow *= q;
        }
        if n > 0 {
            acc * q.pow((bound + 1 - n) as u32)
        } else {
            acc
        }
    }

    /// Content and primitive part; see [`content_primitive`].
    pub fn content_primitive(&self) -> Result<(BigInt, IntPoly)> {
        content_primitive(self)
    }

    /// Primitive part with positive leading coefficient; zero stays zero.
    pub fn normalized(&self) -> IntPoly {
        if self.is_zero() {
            return IntPoly::zero();
        }
        let (_, mut p) = content_primitive(self).expect("nonzero");
        if p.leading().is_some_and(Signed::is_negative) {
            p = -p;
        }
        p
    }

    /// Pseudo-remainder `lc(d)^{deg self − deg d + 1} · self mod d`.
    pub fn pseudo_rem(&self, d: &IntPoly) -> IntPoly {
        let dd = d.degree().expect("pseudo-division by zero polynomial");
        let Some(da) = self.degree() else {
            return IntPoly::zero();
        };
        if da < dd {
            return self.clone();
        }
        let lc = d.leading().unwrap();
        let mut r = self.coeffs.clone();
        let mut steps = da - dd + 1;
        while r.len() > dd && !r.is_empty() {
            let k = r.len() - 1;
            let top = r[k].clone();
            for c in r.iter_mut() {
                *c *= lc;
            }
            let shift = k - dd;
            for (j, dc) in d.coeffs.iter().enumerate() {
                r[shift + j] -= &top * dc;
            }
            r.pop();
            while r.last().is_some_and(Zero::is_zero) {
                r.pop();
            }
            steps -= 1;
        }
        let mut out = IntPoly::new(r);
        if steps > 0 {
            out = out.scale(&lc.pow(steps as u32));
        }
        out
    }

    /// Exact quotient `self / d` in `Z[z]`, or `None` if `d` does not divide.
    pub fn div_exact(&self, d: &IntPoly) -> Option<IntPoly> {
        let dd = d.degree()?;
        let Some(da) = self.degree() else {
            return Some(IntPoly::zero());
        };
        if da < dd {
            return None;
        }
        let lc = d.leading().unwrap();
        let mut r = self.coeffs.clone();
        let mut q = vec![BigInt::zero(); da - dd + 1];
        for k in (dd..=da).rev() {
            if r[k].is_zero() {
                continue;
            }
            let (quot, rem) = r[k].div_rem(lc);
            if !rem.is_zero() {
                return None;
            }
            let shift = k - dd;
            for (j, dc) in d.coeffs.iter().enumerate() {
                r[shift + j] -= &quot * dc;
            }
            q[shift] = quot;
        }
        if r[..dd].iter().all(Zero::is_zero) {
            Some(IntPoly::new(q))
        } else {
            None
        }
    }

    pub fn divides(&self, other: &IntPoly) -> bool {
        other.div_exact(self).is_some()
    }

    /// Reverse the coefficient order: `z^deg · p(1/z)`.
    pub fn reversed(&self) -> IntPoly {
        let mut c = self.coeffs.clone();
        c.reverse();
        IntPoly::new(c)
    }

    /// Multiplicity of the root `z = 0`.
    pub fn zero_root_multiplicity(&self) -> usize {
        self.coeffs.iter().take_while(|c| c.is_zero()).count()
    }

    /// Max bit length of the coefficients.
    pub fn max_bits(&self) -> u64 {
        self.coeffs.iter().map(|c| c.bits()).max().unwrap_or(0)
    }
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPoly({self})")
    }
}

/// Renders as `3*z^2 - 2*z + 1`; the output parses back to the same polynomial.
impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            match (i, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "z")?,
                (1, false) => write!(f, "{mag}*z")?,
                (_, true) => write!(f, "z^{i}")?,
                (_, false) => write!(f, "{mag}*z^{i}")?,
            }
        }
        Ok(())
    }
}

impl Neg for IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        IntPoly {
            coeffs: self.coeffs.into_iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for &IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        -(self.clone())
    }
}

impl Add for &IntPoly {
    type Output = IntPoly;
    fn add(self, rhs: &IntPoly) -> IntPoly {
        let (long, short) = if self.coeffs.len() >= rhs.coeffs.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut c = long.coeffs.clone();
        for (a, b) in c.iter_mut().zip(&short.coeffs) {
            *a += b;
        }
        IntPoly::new(c)
    }
}

impl Sub for &IntPoly {
    type Output = IntPoly;
    fn sub(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut c = self.coeffs.clone();
        c.resize(n, BigInt::zero());
        for (a, b) in c.iter_mut().zip(&rhs.coeffs) {
            *a -= b;
        }
        IntPoly::new(c)
    }
}

impl Mul for &IntPoly {
    type Output = IntPoly;
    fn mul(self, rhs: &IntPoly) -> IntPoly {
        if self.is_zero() || rhs.is_zero() {
            return IntPoly::zero();
        }
        let mut c = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        IntPoly::new(c)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for IntPoly {
            type Output = IntPoly;
            fn $m(self, rhs: IntPoly) -> IntPoly {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&IntPoly> for IntPoly {
            type Output = IntPoly;
            fn $m(self, rhs: &IntPoly) -> IntPoly {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

fn content(p: &IntPoly) -> BigInt {
    p.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
}

/// Splits `p` into a positive content and a primitive part carrying the sign
/// of the leading coefficient.
pub fn content_primitive(p: &IntPoly) -> Result<(BigInt, IntPoly)> {
    if p.is_zero() {
        return Err(Error::ZeroContent);
    }
    let c = content(p);
    let prim = if c.is_one() {
        p.clone()
    } else {
        p.div_scalar_exact(&c)
    };
    Ok((c, prim))
}

fn flip_positive(p: IntPoly) -> IntPoly {
    if p.leading().is_some_and(Signed::is_negative) {
        -p
    } else {
        p
    }
}

/// Greatest common divisor in `Z[z]`, content gcd included, with positive
/// leading coefficient.
pub fn gcd_poly(p: &IntPoly, q: &IntPoly) -> Result<IntPoly> {
    match (p.is_zero(), q.is_zero()) {
        (true, true) => return Err(Error::ZeroPolynomial("gcd of two zero polynomials")),
        (true, false) => return Ok(flip_positive(q.clone())),
        (false, true) => return Ok(flip_positive(p.clone())),
        _ => {}
    }
    let (cp, pp) = content_primitive(p)?;
    let (cq, pq) = content_primitive(q)?;
    let c = cp.gcd(&cq);
    let g = primitive_gcd(&pp, &pq);
    Ok(flip_positive(g.scale(&c)))
}

/// Gcd of two nonzero primitive polynomials, returned primitive.
fn primitive_gcd(a: &IntPoly, b: &IntPoly) -> IntPoly {
    if a.is_constant() || b.is_constant() {
        return IntPoly::one();
    }
    if certainly_coprime(a, b) {
        return IntPoly::one();
    }
    subresultant_gcd(a, b)
}

/// Fraction-free subresultant remainder sequence on primitive inputs.
pub(crate) fn subresultant_gcd(a: &IntPoly, b: &IntPoly) -> IntPoly {
    let (mut a, mut b) = if a.deg() >= b.deg() {
        (a.clone(), b.clone())
    } else {
        (b.clone(), a.clone())
    };
    let mut g = BigInt::one();
    let mut h = BigInt::one();
    loop {
        let delta = a.deg() - b.deg();
        let r = a.pseudo_rem(&b);
        if r.is_zero() {
            break;
        }
        if r.is_constant() {
            return IntPoly::one();
        }
        a = b;
        let divisor = &g * h.pow(delta as u32);
        b = r.div_scalar_exact(&divisor);
        g = a.leading().unwrap().clone();
        h = update_h(&h, &g, delta);
    }
    content_primitive(&b).expect("nonzero").1
}

/// `h^{1−δ} g^δ` with exact division.
fn update_h(h: &BigInt, g: &BigInt, delta: usize) -> BigInt {
    match delta {
        0 => h.clone(),
        1 => g.clone(),
        _ => g.pow(delta as u32) / h.pow((delta - 1) as u32),
    }
}

fn word_primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let is_prime = |n: u64| {
            let mut d = 3;
            while d * d <= n {
                if n.is_multiple_of(d) {
                    return false;
                }
                d += 2;
            }
            true
        };
        let mut out = Vec::new();
        let mut n = (1u64 << 31) - 1;
        while out.len() < 4 {
            if is_prime(n) {
                out.push(n);
            }
            n -= 2;
        }
        out
    })
}

fn reduce_mod(p: &IntPoly, m: u64) -> Vec<u64> {
    let mb = BigInt::from(m);
    let mut v: Vec<u64> = p
        .coeffs
        .iter()
        .map(|c| c.mod_floor(&mb).to_u64().unwrap())
        .collect();
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

/// Degree of gcd over `F_m` (both inputs nonzero mod m).
fn gcd_degree_mod(mut a: Vec<u64>, mut b: Vec<u64>, m: u64) -> usize {
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    while !b.is_empty() {
        let inv = pow_mod(*b.last().unwrap(), m - 2, m);
        while a.len() >= b.len() && !a.is_empty() {
            let f = a.last().unwrap() * inv % m;
            let shift = a.len() - b.len();
            for (j, bc) in b.iter().enumerate() {
                let t = f * bc % m;
                a[shift + j] = (a[shift + j] + m - t) % m;
            }
            while a.last() == Some(&0) {
                a.pop();
            }
        }
        std::mem::swap(&mut a, &mut b);
    }
    a.len().saturating_sub(1)
}

/// True only when a prime not dividing either leading coefficient sees a
/// constant gcd, which certifies coprimality over `Q`.
fn certainly_coprime(a: &IntPoly, b: &IntPoly) -> bool {
    for &m in word_primes().iter().take(2) {
        let am = reduce_mod(a, m);
        let bm = reduce_mod(b, m);
        if am.len() != a.coeffs.len() || bm.len() != b.coeffs.len() {
            continue;
        }
        if gcd_degree_mod(am, bm, m) == 0 {
            return true;
        }
    }
    false
}

/// Primitive squarefree polynomial with the same distinct roots as `p`,
/// positive leading coefficient.
pub fn squarefree_part(p: &IntPoly) -> Result<IntPoly> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial("squarefree part"));
    }
    let (_, pp) = content_primitive(p)?;
    if pp.is_constant() {
        return Ok(IntPoly::one());
    }
    let g = primitive_gcd(&pp, &content_primitive(&pp.derivative())?.1);
    let q = if g.is_constant() {
        pp
    } else {
        pp.div_exact(&g).expect("gcd divides its argument")
    };
    Ok(flip_positive(content_primitive(&q)?.1))
}

/// Yun's squarefree decomposition: returns `(content, [(aᵢ, i)])` with
/// `p = ±content · Π aᵢ^i`, every `aᵢ` primitive, squarefree, positive
/// leading coefficient and pairwise coprime.
pub fn squarefree_decomposition(p: &IntPoly) -> Result<(BigInt, Vec<(IntPoly, usize)>)> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial("squarefree decomposition"));
    }
    let (c, pp) = content_primitive(p)?;
    let pp = flip_positive(pp);
    if pp.is_constant() {
        return Ok((c, Vec::new()));
    }
    let dp = pp.derivative();
    let g = flip_positive(primitive_gcd(&pp, &content_primitive(&dp)?.1));
    let mut cur = pp.div_exact(&g).expect("exact");
    let mut d = &dp.div_exact(&g).expect("exact") - &cur.derivative();
    let mut out = Vec::new();
    let mut i = 1;
    while !cur.is_constant() {
        let a = if d.is_zero() {
            cur.clone()
        } else {
            flip_positive(primitive_gcd(&cur, &content_primitive(&d)?.1))
        };
        if !a.is_constant() {
            out.push((a.clone(), i));
        }
        cur = cur.div_exact(&a).expect("exact");
        if !d.is_zero() {
            d = &d.div_exact(&a).expect("exact") - &cur.derivative();
        }
        i += 1;
    }
    Ok((c, out))
}

/// Resultant with the Sylvester-matrix sign convention, computed through the
/// subresultant remainder sequence.
pub fn resultant(p: &IntPoly, q: &IntPoly) -> Result<BigInt> {
    if p.is_zero() || q.is_zero() {
        return Err(Error::ZeroPolynomial("resultant"));
    }
    let (mut a, mut b) = (p.clone(), q.clone());
    let mut s = BigInt::one();
    if a.deg() < b.deg() {
        if a.deg() % 2 == 1 && b.deg() % 2 == 1 {
            s = -s;
        }
        std::mem::swap(&mut a, &mut b);
    }
    if b.is_constant() {
        return Ok(s * b.coeffs[0].pow(a.deg() as u32));
    }
    let (ca, pa) = content_primitive(&a)?;
    let (cb, pb) = content_primitive(&b)?;
    let t = ca.pow(b.deg() as u32) * cb.pow(a.deg() as u32);
    let (mut a, mut b) = (pa, pb);
    let mut g = BigInt::one();
    let mut h = BigInt::one();
    loop {
        let delta = a.deg() - b.deg();
        if a.deg() % 2 == 1 && b.deg() % 2 == 1 {
            s = -s;
        }
        let r = a.pseudo_rem(&b);
        if r.is_zero() {
            return Ok(BigInt::zero());
        }
        a = b;
        b = r.div_scalar_exact(&(&g * h.pow(delta as u32)));
        g = a.leading().unwrap().clone();
        h = update_h(&h, &g, delta);
        if b.is_constant() {
            break;
        }
    }
    let da = a.deg() as u32;
    let lb = &b.coeffs[0];
    let h = if da == 0 {
        BigInt::one()
    } else {
        lb.pow(da) / h.pow(da - 1)
    };
    Ok(s * t * h)
}

/// `Σ pᵢ · f^i · g^{D−i}`: the homogenised substitution `g^D · p(f/g)`.
pub fn compose_fraction(p: &IntPoly, f: &IntPoly, g: &IntPoly, bound: usize) -> Result<IntPoly> {
    if f.is_zero() && g.is_zero() {
        return Err(Error::ZeroPolynomial("compose_fraction substitution"));
    }
    let Some(n) = p.degree() else {
        return Ok(IntPoly::zero());
    };
    if bound < n {
        return Err(Error::DegreeBound { bound, degree: n });
    }
    let mut gpow = Vec::with_capacity(bound + 1);
    gpow.push(IntPoly::one());
    for k in 1..=bound {
        let next = &gpow[k - 1] * g;
        gpow.push(next);
    }
    let mut acc = IntPoly::constant(p.coeffs[n].clone());
    for i in (0..n).rev() {
        acc = &(&acc * f) + &gpow[n - i].scale(&p.coeffs[i]);
    }
    Ok(&acc * &gpow[bound - n])
}
