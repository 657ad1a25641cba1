//! Numerical certificates for the hypotheses of the polynomial-like and
//! baby-Mandelbrot criteria.
//!
//! Certificates are empirical: they sample boundaries and targets densely and
//! report the smallest slack seen. A failing check is a report with
//! `passed = false`, never an error; errors are reserved for violated call
//! preconditions such as too few samples.
//!
//! All sampling is deterministic. Parallel sections collect per-sample results
//! in input order and reduce them sequentially, so reports do not depend on the
//! worker count.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::dynamics::{
    critical_points, critical_values, eval_map, iterate_orbit, pow_u, EscapeSettings, MapParams,
};
use crate::error::{Error, Result};
use crate::regions::{
    image_half_ellipse, wrap_angle, DomainSpec, HalfEllipse, ParamWindow, SectorAnnulus,
};

pub const DEFAULT_BOUNDARY_SAMPLES: usize = 4096;
pub const DEFAULT_TARGETS: usize = 256;
pub const DEFAULT_DELTA: f64 = 1e-9;
/// Escape shells sit this factor outside the radius under test.
pub const ESCAPE_SHELL_FACTOR: f64 = 1.0005;
/// `v+` may touch the closed domain up to this fraction of its outer radius.
pub const TOUCH_TOLERANCE: f64 = 1e-7;
pub const MAX_FLAGGED_FRACTION: f64 = 1e-3;
pub const SYMMETRY_TOLERANCE: f64 = 1e-9;
pub const WINDING_TOLERANCE: f64 = 1e-6;
const WINDING_REFINE_CAP: usize = 1 << 20;
const SUBSET_REFINE_DOUBLINGS: u32 = 6;
const NEWTON_MAX_STEPS: usize = 80;
const SEED: u64 = 0x6d63_6d75_6c6c_656e;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Outcome {
    Pass,
    Fail,
    Inconclusive,
}

impl Outcome {
    pub fn from_passed(passed: bool) -> Self {
        if passed {
            Outcome::Pass
        } else {
            Outcome::Fail
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Outcome::Pass => "pass",
            Outcome::Fail => "fail",
            Outcome::Inconclusive => "inconclusive",
        }
    }
}

/// A sample point together with the slack observed there.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Witness {
    pub point: Complex64,
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CertificateReport {
    pub check_name: String,
    pub subject: String,
    pub passed: bool,
    pub outcome: Outcome,
    /// Smallest slack observed; positive means the check passed with room.
    pub margin: f64,
    pub samples_used: usize,
    /// The worst samples, smallest margin first.
    pub details: Vec<Witness>,
    pub regime: Option<String>,
    pub winding: Option<i64>,
    pub minor_axis_distance: Option<f64>,
    pub notes: Vec<String>,
    pub children: Vec<CertificateReport>,
}

impl CertificateReport {
    fn new(check_name: &str, subject: String) -> Self {
        Self {
            check_name: check_name.to_string(),
            subject,
            passed: false,
            outcome: Outcome::Fail,
            margin: f64::NEG_INFINITY,
            samples_used: 0,
            details: Vec::new(),
            regime: None,
            winding: None,
            minor_axis_distance: None,
            notes: Vec::new(),
            children: Vec::new(),
        }
    }

    fn settle(&mut self, passed: bool) {
        self.passed = passed;
        self.outcome = Outcome::from_passed(passed);
    }

    fn failed_with(check_name: &str, subject: String, note: String) -> Self {
        let mut r = Self::new(check_name, subject);
        r.notes.push(note);
        r
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports contain only serializable data")
    }

    /// One `CHECK` line per report, children indented below their parent.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        self.write_text(&mut out, 0);
        out
    }

    fn write_text(&self, out: &mut String, depth: usize) {
        out.push_str(&"  ".repeat(depth));
        out.push_str(&self.to_string());
        out.push('\n');
        for child in &self.children {
            child.write_text(out, depth + 1);
        }
    }
}

impl fmt::Display for CertificateReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "CHECK name={} passed={} margin={:e} samples={} outcome={} params=\"{}\"",
            self.check_name,
            self.passed,
            self.margin,
            self.samples_used,
            self.outcome.label(),
            self.subject
        )?;
        if let Some(regime) = &self.regime {
            write!(f, " regime={regime}")?;
        }
        if let Some(w) = self.winding {
            write!(f, " winding={w}")?;
        }
        if let Some(d) = self.minor_axis_distance {
            write!(f, " minor_axis_distance={d:e}")?;
        }
        for note in &self.notes {
            write!(f, " note=\"{note}\"")?;
        }
        Ok(())
    }
}

pub fn format_complex(z: Complex64) -> String {
    if z.im.is_sign_negative() {
        format!("{}-{}i", z.re, -z.im)
    } else {
        format!("{}+{}i", z.re, z.im)
    }
}

pub fn describe_params(params: &MapParams) -> String {
    format!(
        "n={} a={} c={}",
        params.n(),
        format_complex(params.a()),
        format_complex(params.c())
    )
}

/// Treat NaN as the worst possible slack.
fn sane(m: f64) -> f64 {
    if m.is_nan() {
        f64::NEG_INFINITY
    } else {
        m
    }
}

fn min_margin(witnesses: &[Witness]) -> f64 {
    witnesses
        .iter()
        .map(|w| sane(w.margin))
        .fold(f64::INFINITY, f64::min)
}

fn worst(witnesses: &[Witness], count: usize) -> Vec<Witness> {
    let mut sorted = witnesses.to_vec();
    sorted.sort_by(|x, y| sane(x.margin).total_cmp(&sane(y.margin)));
    sorted.truncate(count);
    sorted
}

/// Parameter regimes under which an escape radius is known.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum EscapeRegime {
    /// `n >= 3`, `|c| <= 1`, `|c|^2/4 <= |a| <= |1 - c/2|^2`; radius 2.
    APlane,
    /// `n >= 5`, real `1 <= a <= 4`, `|v+| <= 2`; radius 2.
    CPlane,
    /// `n >= 11`, real `0.1 <= a <= 1`, `|c| <= 3.25`; radius 5/4.
    SmallA,
}

impl EscapeRegime {
    pub fn radius(self) -> f64 {
        match self {
            EscapeRegime::APlane | EscapeRegime::CPlane => 2.0,
            EscapeRegime::SmallA => 1.25,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            EscapeRegime::APlane => "a-plane",
            EscapeRegime::CPlane => "c-plane",
            EscapeRegime::SmallA => "small-a",
        }
    }
}

/// All regimes whose hypotheses `params` satisfy.
pub fn escape_regimes(params: &MapParams) -> Vec<EscapeRegime> {
    const TOL: f64 = 1e-12;
    let n = params.n();
    let a = params.a();
    let c = params.c();
    let abs_a = a.norm();
    let abs_c = c.norm();
    let real_a = params.is_real_a() && a.re > 0.0;
    let (_, v_plus) = critical_values(params);
    let mut out = Vec::new();
    let outer = (Complex64::new(1.0, 0.0) - c / 2.0).norm_sqr();
    if n >= 3 && abs_c <= 1.0 + TOL && abs_a >= abs_c * abs_c / 4.0 - TOL && abs_a <= outer + TOL {
        out.push(EscapeRegime::APlane);
    }
    if n >= 5 && real_a && (1.0 - TOL..=4.0 + TOL).contains(&a.re) && v_plus.norm() <= 2.0 + TOL {
        out.push(EscapeRegime::CPlane);
    }
    if n >= 11 && real_a && (0.1 - TOL..=1.0 + TOL).contains(&a.re) && abs_c <= 3.25 + TOL {
        out.push(EscapeRegime::SmallA);
    }
    out
}

fn regime_label(regimes: &[EscapeRegime]) -> String {
    if regimes.is_empty() {
        "none".to_string()
    } else {
        regimes
            .iter()
            .map(|r| r.label())
            .collect::<Vec<_>>()
            .join("+")
    }
}

/// Every point just outside `rho = settings.escape_radius()` must grow, and
/// every point just inside the mirrored radius `|a|^(1/n) / rho` must be sent
/// beyond the outer shell; all of them must escape within `max_iter`.
pub fn certify_escape_bounds(
    params: &MapParams,
    settings: &EscapeSettings,
    m: usize,
) -> Result<CertificateReport> {
    if m < 100 {
        return Err(Error::Precondition(format!(
            "escape certificates need at least 100 shell samples (got {m})"
        )));
    }
    let mut report = CertificateReport::new("escape-bounds", describe_params(params));
    let regimes = escape_regimes(params);
    report.regime = Some(regime_label(&regimes));
    if regimes.is_empty() {
        report
            .notes
            .push("regime: none; run empirically".to_string());
    }
    let rho = settings.escape_radius();
    let outer = rho * ESCAPE_SHELL_FACTOR;
    let inner = params.a().norm().powf(1.0 / params.n() as f64) / outer;
    let results: Vec<(Witness, bool)> = (0..2 * m)
        .into_par_iter()
        .map(|j| {
            let on_outer = j < m;
            let t = 2.0 * PI * ((j % m) as f64 + 0.5) / m as f64;
            let z = Complex64::from_polar(if on_outer { outer } else { inner }, t);
            let margin = match eval_map(params, z) {
                Ok(w) if on_outer => w.norm() - z.norm(),
                Ok(w) => w.norm() - outer,
                Err(_) => f64::NEG_INFINITY,
            };
            let escaped = !iterate_orbit(params, z, settings).is_bounded();
            (Witness { point: z, margin }, escaped)
        })
        .collect();
    let witnesses: Vec<Witness> = results.iter().map(|(w, _)| *w).collect();
    let stuck = results.iter().filter(|(_, e)| !e).count();
    if stuck > 0 {
        report.notes.push(format!(
            "{stuck} shell samples did not escape within max_iter"
        ));
    }
    report.margin = min_margin(&witnesses);
    report.samples_used = 2 * m;
    report.details = worst(&witnesses, 3);
    report.notes.push(format!(
        "outer shell |z| = {outer}, inner shell |z| = {inner}"
    ));
    let passed = report.margin > 0.0 && stuck == 0;
    report.settle(passed);
    Ok(report)
}

fn describe_domain(params: &MapParams, domain: DomainSpec) -> String {
    format!(
        "{} k={} regime={:?}",
        describe_params(params),
        domain.k,
        domain.regime
    )
}

struct SubsetScan {
    margin: f64,
    minor_axis: f64,
    witnesses: Vec<Witness>,
}

fn scan_subset(sector: &SectorAnnulus, u: &HalfEllipse, m: usize) -> SubsetScan {
    let pts = sector.boundary(m);
    let witnesses: Vec<Witness> = pts
        .par_iter()
        .map(|&z| Witness {
            point: z,
            margin: u.contains(z).margin,
        })
        .collect();
    let minor_axis = pts
        .iter()
        .map(|&z| sane(u.minor_axis_distance(z)))
        .fold(f64::INFINITY, f64::min);
    SubsetScan {
        margin: min_margin(&witnesses),
        minor_axis,
        witnesses,
    }
}

/// Containment of the closed domain in its image half-ellipse.
///
/// The half-ellipse is convex, so the closed sector lies inside it as soon as
/// its boundary does. Sampling starts at `m` boundary points and doubles until
/// the margin changes by less than 1%.
pub fn certify_uprime_subset_u(
    params: &MapParams,
    domain: DomainSpec,
    m: usize,
    delta: f64,
) -> CertificateReport {
    const NAME: &str = "uprime-subset-u";
    let subject = describe_domain(params, domain);
    let sector = match domain.build(params) {
        Ok(s) => s,
        Err(e) => return CertificateReport::failed_with(NAME, subject, e.to_string()),
    };
    let u = match image_half_ellipse(params, sector.r_out()) {
        Ok(u) => u,
        Err(e) => return CertificateReport::failed_with(NAME, subject, e.to_string()),
    };
    let mut m = m.max(8);
    let mut scan = scan_subset(&sector, &u, m);
    let mut stable = false;
    for _ in 0..SUBSET_REFINE_DOUBLINGS {
        let finer = scan_subset(&sector, &u, 2 * m);
        m *= 2;
        stable = (finer.margin - scan.margin).abs() <= 0.01 * scan.margin.abs();
        scan = finer;
        if stable {
            break;
        }
    }
    let mut report = CertificateReport::new(NAME, subject);
    if !stable {
        report
            .notes
            .push("margin did not stabilize under refinement".to_string());
    }
    report.margin = scan.margin;
    report.samples_used = m;
    report.minor_axis_distance = Some(scan.minor_axis);
    report.details = worst(&scan.witnesses, 3);
    report.regime = Some(format!("{:?}", domain.regime));
    report.settle(scan.margin > 0.0 && scan.margin >= delta);
    report
}

/// Slack of the unique-critical-point condition: the centered critical point
/// must be inside, all others outside.
fn critical_point_slack(params: &MapParams, domain: DomainSpec, sector: &SectorAnnulus) -> f64 {
    let own = domain.critical_index();
    critical_points(params)
        .iter()
        .enumerate()
        .map(|(j, &p)| {
            let m = sector.contains(p).margin;
            if j == own {
                m
            } else {
                -m
            }
        })
        .map(sane)
        .fold(f64::INFINITY, f64::min)
}

pub fn certify_unique_critical_point(params: &MapParams, domain: DomainSpec) -> CertificateReport {
    const NAME: &str = "unique-critical-point";
    let subject = describe_domain(params, domain);
    let sector = match domain.build(params) {
        Ok(s) => s,
        Err(e) => return CertificateReport::failed_with(NAME, subject, e.to_string()),
    };
    let mut report = CertificateReport::new(NAME, subject);
    report.margin = critical_point_slack(params, domain, &sector);
    report.samples_used = 2 * params.n() as usize;
    report.settle(report.margin > 0.0);
    report
}

/// Damped Newton on `z^n + a z^-n + c - w`; steps are capped at half the
/// current modulus so iterates never jump across the pole.
fn newton_preimage(params: &MapParams, w: Complex64, z0: Complex64) -> Option<Complex64> {
    let n = params.n();
    let a = params.a();
    let c = params.c();
    let nf = n as f64;
    let mut z = z0;
    for _ in 0..NEWTON_MAX_STEPS {
        let zn = pow_u(z, n);
        if zn.norm_sqr() == 0.0 {
            return None;
        }
        let q = a / zn;
        let f = zn + q + c - w;
        let df = (zn - q) * nf / z;
        if df.norm_sqr() == 0.0 || !df.is_finite() {
            return None;
        }
        let mut step = f / df;
        let cap = 0.5 * z.norm();
        let len = step.norm();
        if len > cap {
            step *= cap / len;
        }
        z -= step;
        if !z.is_finite() {
            return None;
        }
        if step.norm() <= 1e-15 * z.norm() {
            break;
        }
    }
    let zn = pow_u(z, n);
    let q = a / zn;
    let scale = 1.0 + w.norm() + c.norm() + zn.norm() + q.norm();
    ((zn + q + c - w).norm() <= 1e-11 * scale).then_some(z)
}

/// Distinct preimages of `w` in the sector found by seeded Newton plus the
/// involution partner `p^2 / z` of each root, `p` the centered critical point.
pub fn sector_preimages(
    params: &MapParams,
    domain: DomainSpec,
    sector: &SectorAnnulus,
    w: Complex64,
) -> Vec<Complex64> {
    const GRID: usize = 5;
    let p = critical_points(params)[domain.critical_index()];
    let p2 = p * p;
    let mut roots: Vec<Complex64> = Vec::new();
    let push = |roots: &mut Vec<Complex64>, z: Complex64| {
        if sector.contains(z).inside && roots.iter().all(|r| (r - z).norm() > 1e-9 * z.norm()) {
            roots.push(z);
        }
    };
    let ratio = sector.r_out() / sector.r_in();
    'seeds: for i in 0..GRID {
        for j in 0..GRID {
            let r = sector.r_in() * ratio.powf((i as f64 + 0.5) / GRID as f64);
            let t = sector.theta_lo()
                + (sector.theta_hi() - sector.theta_lo()) * (j as f64 + 0.5) / GRID as f64;
            if let Some(z) = newton_preimage(params, w, Complex64::from_polar(r, t)) {
                push(&mut roots, z);
                push(&mut roots, p2 / z);
            }
            if roots.len() >= 2 {
                break 'seeds;
            }
        }
    }
    roots
}

/// Draw `count` targets in `U`, away from its boundary and from `v+`.
fn draw_targets(u: &HalfEllipse, count: usize, rng: &mut ChaCha8Rng) -> Vec<Complex64> {
    let e = u.ellipse;
    let rot = Complex64::from_polar(1.0, e.rotation);
    let edge = 1e-6 * e.semi_major;
    let exclusion = 1e-4 * e.semi_major;
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let x = rng.gen_range(0.0..e.semi_major);
        let y = rng.gen_range(-e.semi_minor..e.semi_minor);
        let w = e.center + rot * Complex64::new(x, y);
        if u.contains(w).margin > edge && (w - e.focus_plus).norm() > exclusion {
            out.push(w);
        }
    }
    out
}

/// Every target in `U` away from `v+` has exactly two distinct preimages in
/// the domain, and the domain holds exactly one critical point.
pub fn certify_two_to_one(params: &MapParams, domain: DomainSpec, m: usize) -> CertificateReport {
    const NAME: &str = "two-to-one";
    let subject = describe_domain(params, domain);
    let sector = match domain.build(params) {
        Ok(s) => s,
        Err(e) => return CertificateReport::failed_with(NAME, subject, e.to_string()),
    };
    let u = match image_half_ellipse(params, sector.r_out()) {
        Ok(u) => u,
        Err(e) => return CertificateReport::failed_with(NAME, subject, e.to_string()),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let targets = draw_targets(&u, m.max(1), &mut rng);
    // per target: Some(slack) when exactly two preimages were found
    let per_target: Vec<(Complex64, Option<f64>)> = targets
        .par_iter()
        .map(|&w| {
            let roots = sector_preimages(params, domain, &sector, w);
            if roots.len() != 2 {
                return (w, None);
            }
            let sep = (roots[0] - roots[1]).norm();
            let depth = roots
                .iter()
                .map(|&z| sector.contains(z).margin)
                .fold(f64::INFINITY, f64::min);
            (w, Some(depth.min(0.5 * sep)))
        })
        .collect();
    let flagged = per_target.iter().filter(|(_, s)| s.is_none()).count();
    let flagged_fraction = flagged as f64 / per_target.len() as f64;
    let witnesses: Vec<Witness> = per_target
        .iter()
        .map(|&(w, s)| Witness {
            point: w,
            margin: s.unwrap_or(f64::NEG_INFINITY),
        })
        .collect();
    let ok_margin = witnesses
        .iter()
        .filter(|w| w.margin.is_finite())
        .map(|w| w.margin)
        .fold(f64::INFINITY, f64::min);
    let cp_slack = critical_point_slack(params, domain, &sector);
    let mut report = CertificateReport::new(NAME, subject);
    report.margin = if flagged_fraction > MAX_FLAGGED_FRACTION {
        -flagged_fraction
    } else {
        ok_margin.min(cp_slack)
    };
    if flagged > 0 {
        report
            .notes
            .push(format!("{flagged} of {} targets flagged", per_target.len()));
    }
    report.samples_used = per_target.len();
    report.details = worst(&witnesses, 3);
    report.settle(report.margin > 0.0);
    report
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolyLikeOptions {
    pub boundary_samples: usize,
    pub targets: usize,
    pub delta: f64,
}

impl Default for PolyLikeOptions {
    fn default() -> Self {
        Self {
            boundary_samples: DEFAULT_BOUNDARY_SAMPLES,
            targets: DEFAULT_TARGETS,
            delta: DEFAULT_DELTA,
        }
    }
}

pub fn certify_polynomial_like(params: &MapParams, domain: DomainSpec) -> CertificateReport {
    certify_polynomial_like_with(params, domain, &PolyLikeOptions::default())
}

/// Aggregate of containment, the two-to-one property, the unique critical
/// point and analyticity (no pole in the closed domain).
pub fn certify_polynomial_like_with(
    params: &MapParams,
    domain: DomainSpec,
    opts: &PolyLikeOptions,
) -> CertificateReport {
    const NAME: &str = "polynomial-like";
    let subject = describe_domain(params, domain);
    let sector = match domain.build(params) {
        Ok(s) => s,
        Err(e) => return CertificateReport::failed_with(NAME, subject, e.to_string()),
    };
    let mut report = CertificateReport::new(NAME, subject);
    report.regime = Some(format!("{:?}", domain.regime));
    let subset = certify_uprime_subset_u(params, domain, opts.boundary_samples, opts.delta);
    let two = certify_two_to_one(params, domain, opts.targets);
    let cp = certify_unique_critical_point(params, domain);
    let analytic = sector.r_in();
    report.margin = subset.margin.min(two.margin).min(cp.margin).min(analytic);
    report.minor_axis_distance = subset.minor_axis_distance;
    report.samples_used = subset.samples_used + two.samples_used + cp.samples_used;
    let passed = subset.passed && two.passed && cp.passed && analytic > 0.0;
    report.children = vec![subset, two, cp];
    report.settle(passed);
    report
}

struct WindSample {
    lambda: Complex64,
    offset: Complex64,
    slack: f64,
}

fn wind_sample(window: &ParamWindow, domain: DomainSpec, lambda: Complex64) -> Result<WindSample> {
    let params = window.params_at(lambda)?;
    let sector = domain.build(&params)?;
    let u = image_half_ellipse(&params, sector.r_out())?;
    let (_, v_plus) = critical_values(&params);
    let z0 = critical_points(&params)[domain.critical_index()];
    let in_u = u.contains(v_plus).margin;
    let outside_uprime = TOUCH_TOLERANCE * sector.r_out() - sector.contains(v_plus).margin;
    Ok(WindSample {
        lambda,
        offset: v_plus - z0,
        slack: in_u.min(outside_uprime),
    })
}

/// Winding number of `v+ - z0` as the parameter traverses the window boundary
/// counterclockwise, where `z0` is the critical point centered in the domain.
///
/// Every sample must also have `v+` in `U` and outside the open domain.
/// Sampling doubles until every argument increment is below `pi/2`.
pub fn certify_winding(
    window: &ParamWindow,
    domain: DomainSpec,
    m: usize,
) -> Result<CertificateReport> {
    const NAME: &str = "winding";
    if m < 1024 {
        return Err(Error::Precondition(format!(
            "winding certificates need at least 1024 boundary samples (got {m})"
        )));
    }
    let subject = format!(
        "{} domain k={} {:?}",
        window.describe(),
        domain.k,
        domain.regime
    );
    let mut m = m;
    loop {
        let lambdas = window.sample_boundary(m)?;
        let samples: Vec<Result<WindSample>> = lambdas
            .par_iter()
            .map(|&l| wind_sample(window, domain, l))
            .collect();
        let samples: Vec<WindSample> = match samples.into_iter().collect() {
            Ok(s) => s,
            Err(e) => return Ok(CertificateReport::failed_with(NAME, subject, e.to_string())),
        };
        let args: Vec<f64> = samples.iter().map(|s| s.offset.arg()).collect();
        let increments: Vec<f64> = (0..args.len())
            .map(|i| wrap_angle(args[(i + 1) % args.len()] - args[i]))
            .collect();
        let max_step = increments.iter().fold(0.0f64, |acc, d| acc.max(d.abs()));
        if max_step >= PI / 2.0 || samples.iter().any(|s| s.offset.norm_sqr() == 0.0) {
            if 2 * m <= WINDING_REFINE_CAP {
                m *= 2;
                continue;
            }
            let mut report = CertificateReport::new(NAME, subject);
            report.outcome = Outcome::Inconclusive;
            report.margin = 0.0;
            report.samples_used = m;
            report.notes.push(format!(
                "argument step {max_step} still >= pi/2 at the refinement cap"
            ));
            return Ok(report);
        }
        let turns = increments.iter().sum::<f64>() / (2.0 * PI);
        let winding = turns.round();
        let integrality = (turns - winding).abs();
        let witnesses: Vec<Witness> = samples
            .iter()
            .map(|s| Witness {
                point: s.lambda,
                margin: s.slack,
            })
            .collect();
        let mut report = CertificateReport::new(NAME, subject);
        report.margin = min_margin(&witnesses);
        report.samples_used = m;
        report.details = worst(&witnesses, 3);
        report.winding = Some(winding as i64);
        report.regime = Some(format!("{:?}", domain.regime));
        report
            .notes
            .push(format!("turns={turns} max_step={max_step}"));
        if integrality >= WINDING_TOLERANCE {
            report.notes.push(format!(
                "accumulated argument is {integrality} from an integer"
            ));
        }
        let passed = winding == 1.0 && integrality < WINDING_TOLERANCE && report.margin > 0.0;
        report.settle(passed);
        return Ok(report);
    }
}

/// Largest relative deviation between two orbits that should agree after the
/// transform `expect`; orbits leaving modulus 10 stop early.
fn orbit_deviation<F>(
    lhs: (&MapParams, Complex64),
    rhs: (&MapParams, Complex64),
    steps: u32,
    expect: F,
) -> f64
where
    F: Fn(Complex64) -> Complex64,
{
    let (p, mut z) = lhs;
    let (q, mut w) = rhs;
    let mut worst = 0.0f64;
    for _ in 0..steps {
        match (eval_map(p, z), eval_map(q, w)) {
            (Ok(z1), Ok(w1)) => {
                z = z1;
                w = w1;
            }
            (Err(_), Err(_)) => break,
            _ => return f64::INFINITY,
        }
        let target = expect(z);
        let err = (w - target).norm() / target.norm().max(1e-300);
        worst = worst.max(if err.is_nan() { f64::INFINITY } else { err });
        if z.norm() > 10.0 {
            break;
        }
    }
    worst
}

/// Sign symmetry (odd `n`), conjugation symmetry (real `a`) and the critical
/// orbit swap (odd `n`), each checked to `SYMMETRY_TOLERANCE` relative.
pub fn certify_symmetries(params: &MapParams, m_iter: u32, samples: usize) -> CertificateReport {
    let mut report = CertificateReport::new("symmetries", describe_params(params));
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 0x5eed);
    let seeds: Vec<Complex64> = (0..samples.max(1))
        .map(|_| Complex64::from_polar(rng.gen_range(0.25..2.0), rng.gen_range(-PI..PI)))
        .collect();
    let odd = params.n() % 2 == 1;
    let mut worst = 0.0f64;
    let mut applicable = 0;

    if odd {
        let neg = params
            .with_c(-params.c())
            .expect("negating c keeps parameters valid");
        let e = seeds
            .iter()
            .map(|&z| orbit_deviation((params, z), (&neg, -z), m_iter, |v| -v))
            .fold(0.0, f64::max);
        report.notes.push(format!("sign: max relative error {e:e}"));
        worst = worst.max(e);
        applicable += 1;
    } else {
        report
            .notes
            .push("sign: not applicable (n even)".to_string());
    }

    if params.is_real_a() {
        let conj = params
            .with_c(params.c().conj())
            .expect("conjugating c keeps parameters valid");
        let e = seeds
            .iter()
            .map(|&z| orbit_deviation((params, z), (&conj, z.conj()), m_iter, |v| v.conj()))
            .fold(0.0, f64::max);
        report
            .notes
            .push(format!("conjugation: max relative error {e:e}"));
        worst = worst.max(e);
        applicable += 1;
    } else {
        report
            .notes
            .push("conjugation: not applicable (a not real)".to_string());
    }

    if odd {
        let mut e = 0.0f64;
        for j in 0..samples.max(1) {
            let c = if j == 0 {
                params.c()
            } else {
                params.c() + Complex64::from_polar(rng.gen_range(0.0..0.5), rng.gen_range(-PI..PI))
            };
            let here = params.with_c(c).expect("finite c");
            let there = params.with_c(-c).expect("finite c");
            let (_, v_plus) = critical_values(&here);
            let (v_minus, _) = critical_values(&there);
            e = e.max(orbit_deviation(
                (&here, v_plus),
                (&there, v_minus),
                m_iter,
                |v| -v,
            ));
        }
        report
            .notes
            .push(format!("critical-orbit swap: max relative error {e:e}"));
        worst = worst.max(e);
        applicable += 1;
    } else {
        report
            .notes
            .push("critical-orbit swap: not applicable (n even)".to_string());
    }

    report.samples_used = seeds.len();
    if applicable == 0 {
        report.margin = 0.0;
        report.outcome = Outcome::Inconclusive;
        return report;
    }
    report.margin = SYMMETRY_TOLERANCE - worst;
    report.settle(report.margin > 0.0);
    report
}
