//! The correspondence `H(z) = B(A⁻¹(z))` acting on finite Galois-stable
//! sets: exact orbits, cardinality growth, height trajectories, and the
//! inclusion checks `A⁻¹(K₁) ⊆ B⁻¹(K₂)`.

use serde::Serialize;

use crate::algset::AlgSet;
use crate::error::{Error, Result};
use crate::heights::{enumerate_rational_points_up_to, estimate_functorial_constant, total_height};
use crate::maps::{
    compose_maps, maps_equal, pullback_raw, pullback_set, pushforward_set, RationalMap,
};
use crate::point::ProjPoint;
use crate::poly::IntPoly;

/// Slack used when comparing computed heights against bounds.
pub const HEIGHT_TOLERANCE: f64 = 1e-9;

/// Degree beyond which rational points of orbit sets are not extracted for
/// the constant estimate.
const RATIONAL_SCAN_MAX_DEGREE: usize = 256;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Correspondence {
    pub a: RationalMap,
    pub b: RationalMap,
}

impl Correspondence {
    pub fn new(a: RationalMap, b: RationalMap) -> Self {
        Correspondence { a, b }
    }

    /// `deg A`.
    pub fn n(&self) -> usize {
        self.a.degree()
    }

    /// `deg B`.
    pub fn m(&self) -> usize {
        self.b.degree()
    }

    pub fn step(&self, s: &AlgSet) -> AlgSet {
        corr_step(self, s)
    }

    /// One step, also returning the degree of the unreduced preimage
    /// polynomial.
    pub fn step_raw(&self, s: &AlgSet) -> (AlgSet, usize) {
        if s.is_empty() {
            return (AlgSet::empty(), 0);
        }
        let (q, inf) = pullback_raw(&self.a, s);
        let raw = q.deg();
        let pre = AlgSet::new(&q, inf).expect("nonzero");
        (pushforward_set(&self.b, &pre), raw)
    }
}

/// `B(A⁻¹(S))`.
pub fn corr_step(c: &Correspondence, s: &AlgSet) -> AlgSet {
    pushforward_set(&c.b, &pullback_set(&c.a, s))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StepStatus {
    Ok,
    DegreeAbort,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OrbitRecord {
    pub step: usize,
    #[serde(skip)]
    pub set: AlgSet,
    pub cardinality: usize,
    pub raw_degree: usize,
    pub total_height: Option<f64>,
    pub avg_height: Option<f64>,
    /// `⌈(n(|prev|−2)+2)/m⌉`
    pub if_lower_bound: Option<i64>,
    /// `M₀ + Ĉ/(1 − m/n)`
    pub fu_upper_bound: Option<f64>,
    pub status: StepStatus,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OrbitOptions {
    pub degree_threshold: usize,
    pub compute_heights: bool,
    pub c_hat_slack: f64,
    /// Naive-height bound of the sample grid for the constant estimate.
    pub grid_bound: u64,
}

impl Default for OrbitOptions {
    fn default() -> Self {
        OrbitOptions {
            degree_threshold: 5000,
            compute_heights: true,
            c_hat_slack: 1.5,
            grid_bound: 50,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OrbitReport {
    pub records: Vec<OrbitRecord>,
    pub status: StepStatus,
    /// Slack-inflated `Ĉ`, when heights were computed and `n > m`.
    pub c_hat: Option<f64>,
}

impl OrbitReport {
    pub fn cardinalities(&self) -> Vec<usize> {
        self.records.iter().map(|r| r.cardinality).collect()
    }

    pub fn sets(&self) -> Vec<&AlgSet> {
        self.records.iter().map(|r| &r.set).collect()
    }
}

fn ceil_div(a: i64, b: i64) -> i64 {
    a.div_euclid(b) + i64::from(a.rem_euclid(b) != 0)
}

/// Lower bound `⌈(n(|S|−2)+2)/m⌉` for `|H(S)|`.
pub fn if_lower_bound(n: usize, m: usize, prev: usize) -> i64 {
    ceil_div(n as i64 * (prev as i64 - 2) + 2, m as i64)
}

/// `H^k(K)` for `k = 0..=k_max`, stopping early once the unreduced preimage
/// degree passes the threshold.
pub fn orbit(
    c: &Correspondence,
    k: &AlgSet,
    k_max: usize,
    opts: &OrbitOptions,
) -> Result<OrbitReport> {
    if k.is_empty() {
        return Err(Error::Empty("starting set"));
    }
    let (n, m) = (c.n(), c.m());
    let mut records = vec![OrbitRecord {
        step: 0,
        set: k.clone(),
        cardinality: k.cardinality(),
        raw_degree: k.poly().deg(),
        total_height: None,
        avg_height: None,
        if_lower_bound: None,
        fu_upper_bound: None,
        status: StepStatus::Ok,
    }];
    let mut status = StepStatus::Ok;
    for step in 1..=k_max {
        let prev = &records.last().unwrap().set;
        // upper bound for the unreduced preimage degree
        let projected = n * (prev.poly().deg() + usize::from(prev.has_infinity()));
        if projected > opts.degree_threshold {
            status = StepStatus::DegreeAbort;
            break;
        }
        let (next, raw) = c.step_raw(prev);
        let lower = if_lower_bound(n, m, prev.cardinality());
        records.push(OrbitRecord {
            step,
            cardinality: next.cardinality(),
            set: next,
            raw_degree: raw,
            total_height: None,
            avg_height: None,
            if_lower_bound: Some(lower),
            fu_upper_bound: None,
            status: StepStatus::Ok,
        });
    }
    let mut c_hat = None;
    if opts.compute_heights {
        for r in records.iter_mut() {
            let h = total_height(&r.set)?;
            r.total_height = Some(h.total.value);
            r.avg_height = Some(h.average);
        }
        if n > m {
            let sets: Vec<&AlgSet> = records.iter().map(|r| &r.set).collect();
            let est = correspondence_constant(c, &sets, opts.grid_bound)?;
            let ch = est.c_hat * opts.c_hat_slack;
            let m0 = records[0].avg_height.unwrap();
            let fu = m0 + ch / (1.0 - m as f64 / n as f64);
            for r in records.iter_mut() {
                r.fu_upper_bound = Some(fu);
            }
            c_hat = Some(ch);
        }
    }
    Ok(OrbitReport {
        records,
        status,
        c_hat,
    })
}

/// Empirical `Ĉ = (m/n)Ĉ₁ + Ĉ₂` before slack.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConstantEstimate {
    pub c_hat_a: f64,
    pub c_hat_b: f64,
    pub c_hat: f64,
    pub worst_a: ProjPoint,
    pub worst_b: ProjPoint,
    pub sample_count: usize,
}

/// Rational points of naive height at most `grid_bound`, plus the rational
/// points of the given sets.
pub fn sample_points(sets: &[&AlgSet], grid_bound: u64) -> Result<Vec<ProjPoint>> {
    let mut pts = enumerate_rational_points_up_to(grid_bound)?;
    for s in sets {
        if s.poly().deg() <= RATIONAL_SCAN_MAX_DEGREE {
            pts.extend(s.rational_points()?);
        }
    }
    pts.sort();
    pts.dedup();
    Ok(pts)
}

pub fn correspondence_constant(
    c: &Correspondence,
    sets: &[&AlgSet],
    grid_bound: u64,
) -> Result<ConstantEstimate> {
    let samples = sample_points(sets, grid_bound)?;
    let ea = estimate_functorial_constant(&c.a, &samples)?;
    let eb = estimate_functorial_constant(&c.b, &samples)?;
    let ratio = c.m() as f64 / c.n() as f64;
    Ok(ConstantEstimate {
        c_hat_a: ea.c_hat,
        c_hat_b: eb.c_hat,
        c_hat: ratio * ea.c_hat + eb.c_hat,
        worst_a: ea.worst_point,
        worst_b: eb.worst_point,
        sample_count: samples.len(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GrowthStep {
    pub step: usize,
    pub previous: usize,
    pub cardinality: usize,
    pub if_lower_bound: i64,
    pub if_holds: bool,
    pub increases: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GrowthReport {
    /// `(2n−2)/(n−m)`
    pub threshold: f64,
    pub exceeds_threshold: bool,
    pub steps: Vec<GrowthStep>,
    pub status: StepStatus,
    pub holds: bool,
}

/// Checks `|H(S)| ≥ (n(|S|−2)+2)/m` and `|H(S)| > |S|` along the orbit.
pub fn growth_check(
    c: &Correspondence,
    k: &AlgSet,
    steps: usize,
    degree_threshold: usize,
) -> Result<GrowthReport> {
    let (n, m) = (c.n(), c.m());
    if n <= m {
        return Err(Error::GrowthHypothesis { n, m });
    }
    let threshold = (2.0 * n as f64 - 2.0) / (n - m) as f64;
    let opts = OrbitOptions {
        degree_threshold,
        compute_heights: false,
        ..OrbitOptions::default()
    };
    let report = orbit(c, k, steps, &opts)?;
    let out: Vec<GrowthStep> = report
        .records
        .windows(2)
        .map(|w| {
            let lower = w[1].if_lower_bound.unwrap();
            GrowthStep {
                step: w[1].step,
                previous: w[0].cardinality,
                cardinality: w[1].cardinality,
                if_lower_bound: lower,
                if_holds: w[1].cardinality as i64 >= lower,
                increases: w[1].cardinality > w[0].cardinality,
            }
        })
        .collect();
    let exceeds = k.cardinality() as f64 > threshold;
    let holds = out.iter().all(|s| s.if_holds && (s.increases || !exceeds));
    Ok(GrowthReport {
        threshold,
        exceeds_threshold: exceeds,
        steps: out,
        status: report.status,
        holds,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InclusionReport {
    pub holds: bool,
    /// Points of the left side missing from the right side.
    pub witness: Option<AlgSet>,
    pub left: AlgSet,
    pub right: AlgSet,
}

/// `left ⊆ right`, with the missing points as witness.
pub fn subset_report(left: &AlgSet, right: &AlgSet) -> InclusionReport {
    let holds = left.is_subset(right);
    InclusionReport {
        holds,
        witness: (!holds).then(|| left.difference(right)),
        left: left.clone(),
        right: right.clone(),
    }
}

/// `A⁻¹(K₁) ⊆ B⁻¹(K₂)`.
pub fn inclusion_check(
    a: &RationalMap,
    b: &RationalMap,
    k1: &AlgSet,
    k2: &AlgSet,
) -> InclusionReport {
    subset_report(&pullback_set(a, k1), &pullback_set(b, k2))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EqualityReport {
    pub holds: bool,
    pub forward: InclusionReport,
    pub backward: InclusionReport,
}

/// `A⁻¹(K₁) = B⁻¹(K₂)`, as two inclusions.
pub fn equality_check(
    a: &RationalMap,
    b: &RationalMap,
    k1: &AlgSet,
    k2: &AlgSet,
) -> EqualityReport {
    let left = pullback_set(a, k1);
    let right = pullback_set(b, k2);
    let forward = subset_report(&left, &right);
    let backward = subset_report(&right, &left);
    EqualityReport {
        holds: forward.holds && backward.holds,
        forward,
        backward,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InvariantSet {
    pub k: AlgSet,
    pub verified: bool,
    pub check: EqualityReport,
}

/// Given `F∘A = F∘B`, the set `K = F⁻¹(K̂)` satisfies `A⁻¹(K) = B⁻¹(K)`.
pub fn invariant_from_identity(
    f: &RationalMap,
    a: &RationalMap,
    b: &RationalMap,
    k_hat: &AlgSet,
) -> Result<InvariantSet> {
    let fa = compose_maps(f, a);
    let fb = compose_maps(f, b);
    if !maps_equal(&fa, &fb) {
        return Err(Error::IdentityFails(format!("F∘A = {fa} but F∘B = {fb}")));
    }
    let k = pullback_set(f, k_hat);
    let check = equality_check(a, b, &k, &k);
    Ok(InvariantSet {
        verified: check.holds,
        k,
        check,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BandStep {
    pub step: usize,
    /// `avg_k / avg_{k−1}`, absent when the previous average is 0.
    pub ratio: Option<f64>,
    /// `avg_k − (m/n)·avg_{k−1}`
    pub deviation: f64,
    pub within_band: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HeightReport {
    pub orbit: OrbitReport,
    pub estimate: ConstantEstimate,
    pub slack: f64,
    /// Slack-inflated `Ĉ`.
    pub c_hat: f64,
    pub m0: f64,
    pub fu_bound: f64,
    pub fu_holds: bool,
    pub band: Vec<BandStep>,
    pub band_holds: bool,
}

/// Average heights along the orbit against `M₀ + Ĉ/(1 − m/n)`, and each
/// step's deviation from the contraction `avg_k ≈ (m/n)·avg_{k−1}` against
/// the band `±Ĉ`.
pub fn height_trajectory(
    c: &Correspondence,
    k: &AlgSet,
    k_max: usize,
    opts: &OrbitOptions,
) -> Result<HeightReport> {
    let (n, m) = (c.n(), c.m());
    if n <= m {
        return Err(Error::ContractionHypothesis { n, m });
    }
    let opts = OrbitOptions {
        compute_heights: true,
        ..opts.clone()
    };
    let orbit = orbit(c, k, k_max, &opts)?;
    let sets = orbit.sets();
    let estimate = correspondence_constant(c, &sets, opts.grid_bound)?;
    let c_hat = estimate.c_hat * opts.c_hat_slack;
    let ratio = m as f64 / n as f64;
    let m0 = orbit.records[0].avg_height.unwrap();
    let fu_bound = m0 + c_hat / (1.0 - ratio);
    let fu_holds = orbit
        .records
        .iter()
        .all(|r| r.avg_height.unwrap() <= fu_bound + HEIGHT_TOLERANCE);
    let band: Vec<BandStep> = orbit
        .records
        .windows(2)
        .map(|w| {
            let (p, q) = (w[0].avg_height.unwrap(), w[1].avg_height.unwrap());
            let deviation = q - ratio * p;
            BandStep {
                step: w[1].step,
                ratio: (p != 0.0).then(|| q / p),
                deviation,
                within_band: deviation.abs() <= c_hat + HEIGHT_TOLERANCE,
            }
        })
        .collect();
    let band_holds = band.iter().all(|b| b.within_band);
    Ok(HeightReport {
        orbit,
        estimate,
        slack: opts.c_hat_slack,
        c_hat,
        m0,
        fu_bound,
        fu_holds,
        band,
        band_holds,
    })
}

/// `A = z²`, `B = (z+1)²`, `K = {0, 1, 4, …, N²}`: the first `N+1` squares.
/// Every integer is in both preimages of the full set of squares; the
/// truncation leaves `A⁻¹(K) = {−N..N}` and `B⁻¹(K) = {−N−1..N−1}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SquaresExample {
    pub n: u32,
    pub a: RationalMap,
    pub b: RationalMap,
    pub k: AlgSet,
    pub inclusion: InclusionReport,
    /// Inclusion after dropping `N` from `A⁻¹(K)`.
    pub trimmed: InclusionReport,
    pub expected_witness: AlgSet,
    pub witness_as_expected: bool,
}

pub fn squares_example(n: u32) -> Result<SquaresExample> {
    if n == 0 {
        return Err(Error::InvalidArgument("N must be at least 1".into()));
    }
    let a = RationalMap::power(2);
    let b = compose_maps(
        &RationalMap::power(2),
        &RationalMap::polynomial(&IntPoly::from_i64s(&[1, 1]))?,
    );
    let squares: Vec<ProjPoint> = (0..=n as i64).map(|i| ProjPoint::integer(i * i)).collect();
    let k = AlgSet::from_points(&squares);
    let inclusion = inclusion_check(&a, &b, &k, &k);
    let edge = ProjPoint::integer(n as i64);
    let trimmed = subset_report(&inclusion.left.without(&edge), &inclusion.right);
    let expected_witness = AlgSet::from_points(&[edge]);
    let witness_as_expected = inclusion.witness.as_ref() == Some(&expected_witness);
    Ok(SquaresExample {
        n,
        a,
        b,
        k,
        inclusion,
        trimmed,
        expected_witness,
        witness_as_expected,
    })
}
