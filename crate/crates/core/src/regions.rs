//! Sector-annuli, image ellipses and parameter windows.
//!
//! Sector-annuli are the polynomial-like domains `U'_k`; their image under the
//! map is half of an ellipse with foci at the critical values, cut by the
//! minor axis. Parameter windows are closed regions in the `a`- or `c`-plane
//! whose boundary is traversed counterclockwise by the winding certificate.
//!
//! Every membership query reports a signed margin: positive inside, negative
//! outside, and in both cases a lower bound on the Euclidean distance to the
//! region boundary.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::dynamics::{critical_values, MapParams};
use crate::error::{Error, Result};

/// Inner modulus used in place of zero when an `a`-plane window touches the
/// puncture `a = 0`.
pub const PUNCTURE_CLAMP: f64 = 1e-8;

/// Largest `a` accepted by the standard `c`-plane windows.
pub const C_PLANE_A_MAX: f64 = 4.0;

/// `(2^(n+1) - 8)^2 / 16`: the bound on `a` under which every `U'_k` lies in
/// `U`. Equals 4 at `n = 3` and exceeds `C_PLANE_A_MAX` from `n = 4` on.
pub fn sector_containment_a_max(n: u32) -> f64 {
    let t = 2f64.powi(n as i32 + 1) - 8.0;
    t * t / 16.0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Regime {
    /// `|a|^(1/n)/2 < r < 2`.
    Standard,
    /// `(4/5) a^(1/n) < r < 5/4`, real positive `a`, `k = 0` only.
    Tight,
}

impl Regime {
    pub fn outer_radius(self) -> f64 {
        match self {
            Regime::Standard => 2.0,
            Regime::Tight => 1.25,
        }
    }
}

/// Which polynomial-like domain to build for a given map: the sector index
/// together with the radius regime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DomainSpec {
    pub k: usize,
    pub regime: Regime,
}

impl DomainSpec {
    pub fn standard(k: usize) -> Self {
        Self {
            k,
            regime: Regime::Standard,
        }
    }

    pub fn tight() -> Self {
        Self {
            k: 0,
            regime: Regime::Tight,
        }
    }

    pub fn build(&self, params: &MapParams) -> Result<SectorAnnulus> {
        make_uprime(params, self.k, self.regime)
    }

    /// Index into `critical_points` of the critical point centered in the
    /// domain.
    pub fn critical_index(&self) -> usize {
        2 * self.k
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Membership {
    pub inside: bool,
    pub margin: f64,
}

impl Membership {
    fn from_margin(margin: f64) -> Self {
        Self {
            inside: margin > 0.0,
            margin,
        }
    }
}

/// Wrap an angle into `(-pi, pi]`.
pub fn wrap_angle(t: f64) -> f64 {
    let mut x = t % (2.0 * PI);
    if x <= -PI {
        x += 2.0 * PI;
    } else if x > PI {
        x -= 2.0 * PI;
    }
    x
}

/// `{ r e^(i theta) : r_in < r < r_out, theta_lo < theta < theta_hi }`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SectorAnnulus {
    r_in: f64,
    r_out: f64,
    theta_lo: f64,
    theta_hi: f64,
}

impl SectorAnnulus {
    pub fn new(r_in: f64, r_out: f64, theta_lo: f64, theta_hi: f64) -> Result<Self> {
        if !(r_in.is_finite() && r_out.is_finite() && theta_lo.is_finite() && theta_hi.is_finite())
        {
            return Err(Error::NonFinite("sector bounds"));
        }
        if !(r_in > 0.0 && r_in < r_out) {
            return Err(Error::InvalidSector(format!(
                "radii must satisfy 0 < r_in < r_out (got {r_in}, {r_out})"
            )));
        }
        let width = theta_hi - theta_lo;
        if !(width > 0.0 && width <= 2.0 * PI) {
            return Err(Error::InvalidSector(format!(
                "angular width {width} outside (0, 2pi]"
            )));
        }
        Ok(Self {
            r_in,
            r_out,
            theta_lo,
            theta_hi,
        })
    }

    pub fn r_in(&self) -> f64 {
        self.r_in
    }

    pub fn r_out(&self) -> f64 {
        self.r_out
    }

    pub fn theta_lo(&self) -> f64 {
        self.theta_lo
    }

    pub fn theta_hi(&self) -> f64 {
        self.theta_hi
    }

    pub fn mid_angle(&self) -> f64 {
        0.5 * (self.theta_lo + self.theta_hi)
    }

    pub fn half_width(&self) -> f64 {
        0.5 * (self.theta_hi - self.theta_lo)
    }

    /// Strict interior membership with a signed distance lower bound.
    pub fn contains(&self, z: Complex64) -> Membership {
        let r = z.norm();
        let delta = wrap_angle(z.im.atan2(z.re) - self.mid_angle());
        let slack = self.half_width() - delta.abs();
        // distance to the ray lines, capped at the distance to the origin
        let angular = if slack >= 0.0 {
            r * slack.min(PI / 2.0).sin()
        } else {
            -r * (-slack).min(PI / 2.0).sin()
        };
        let margin = (r - self.r_in).min(self.r_out - r).min(angular);
        Membership::from_margin(margin)
    }

    /// Closed membership up to an absolute tolerance on the margin.
    pub fn contains_closed(&self, z: Complex64, tol: f64) -> bool {
        self.contains(z).margin >= -tol
    }

    pub fn corners(&self) -> [Complex64; 4] {
        [
            Complex64::from_polar(self.r_out, self.theta_lo),
            Complex64::from_polar(self.r_out, self.theta_hi),
            Complex64::from_polar(self.r_in, self.theta_hi),
            Complex64::from_polar(self.r_in, self.theta_lo),
        ]
    }

    /// `m` points tracing the boundary once counterclockwise, starting at the
    /// outer-lower corner; all four corners are included.
    pub fn boundary(&self, m: usize) -> Vec<Complex64> {
        annular_sector_boundary(self.r_in, self.r_out, self.theta_lo, self.theta_hi, m)
    }

    pub fn rotated(&self, angle: f64) -> Self {
        Self {
            theta_lo: self.theta_lo + angle,
            theta_hi: self.theta_hi + angle,
            ..*self
        }
    }
}

/// Split `m` samples over four boundary pieces proportionally to length.
fn split_counts(lengths: [f64; 4], m: usize) -> [usize; 4] {
    let total: f64 = lengths.iter().sum();
    let mut counts = [0usize; 4];
    for (slot, len) in counts.iter_mut().zip(lengths) {
        *slot = ((m as f64) * len / total).floor().max(1.0) as usize;
    }
    let assigned: usize = counts.iter().sum();
    let longest = (0..4)
        .max_by(|&i, &j| lengths[i].total_cmp(&lengths[j]))
        .unwrap_or(0);
    if assigned < m {
        counts[longest] += m - assigned;
    } else if assigned > m {
        counts[longest] = counts[longest].saturating_sub(assigned - m).max(1);
    }
    counts
}

pub(crate) fn annular_sector_boundary(
    r_in: f64,
    r_out: f64,
    lo: f64,
    hi: f64,
    m: usize,
) -> Vec<Complex64> {
    let width = hi - lo;
    let lengths = [r_out * width, r_out - r_in, r_in * width, r_out - r_in];
    let counts = split_counts(lengths, m.max(4));
    let mut pts = Vec::with_capacity(m.max(4));
    for j in 0..counts[0] {
        let t = j as f64 / counts[0] as f64;
        pts.push(Complex64::from_polar(r_out, lo + t * width));
    }
    for j in 0..counts[1] {
        let t = j as f64 / counts[1] as f64;
        pts.push(Complex64::from_polar(r_out + t * (r_in - r_out), hi));
    }
    for j in 0..counts[2] {
        let t = j as f64 / counts[2] as f64;
        pts.push(Complex64::from_polar(r_in, hi - t * width));
    }
    for j in 0..counts[3] {
        let t = j as f64 / counts[3] as f64;
        pts.push(Complex64::from_polar(r_in + t * (r_out - r_in), lo));
    }
    pts
}

/// The domain `U'_k` (standard) or its tight-radius variant.
pub fn make_uprime(params: &MapParams, k: usize, regime: Regime) -> Result<SectorAnnulus> {
    let n = params.n();
    if k >= n as usize {
        return Err(Error::SectorIndex { k, n });
    }
    let nf = n as f64;
    let psi = params.psi();
    match regime {
        Regime::Standard => {
            let r_in = params.a().norm().powf(1.0 / nf) / 2.0;
            let shift = psi + 4.0 * PI * k as f64;
            SectorAnnulus::new(
                r_in,
                2.0,
                (shift - PI) / (2.0 * nf),
                (shift + PI) / (2.0 * nf),
            )
        }
        Regime::Tight => {
            if k != 0 || !params.is_real_a() || params.a().re <= 0.0 {
                return Err(Error::TightRegime);
            }
            let r_in = 0.8 * params.a().re.powf(1.0 / nf);
            SectorAnnulus::new(r_in, 1.25, (psi - PI) / (2.0 * nf), (psi + PI) / (2.0 * nf))
        }
    }
}

/// The ellipse traced by the images of the circles `|z| = r_out` and
/// `|z| = |a|^(1/n) / r_out`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EllipseRegion {
    pub center: Complex64,
    /// Angle of the major axis, `psi / 2`.
    pub rotation: f64,
    pub semi_major: f64,
    pub semi_minor: f64,
    pub focus_minus: Complex64,
    pub focus_plus: Complex64,
}

impl EllipseRegion {
    pub fn focal_distance(&self) -> f64 {
        (self.semi_major * self.semi_major - self.semi_minor * self.semi_minor).sqrt()
    }

    /// Coordinate along the major axis, measured from the center toward
    /// `focus_plus`.
    pub fn major_coordinate(&self, z: Complex64) -> f64 {
        ((z - self.center) * Complex64::from_polar(1.0, -self.rotation)).re
    }

    pub fn point_at(&self, phi: f64) -> Complex64 {
        let local = Complex64::new(self.semi_major * phi.cos(), self.semi_minor * phi.sin());
        self.center + Complex64::from_polar(1.0, self.rotation) * local
    }

    /// Focal-sum slack `2A - |z - f-| - |z - f+|`, halved; halving keeps it a
    /// lower bound on the distance to the curve since the focal sum is
    /// 2-Lipschitz.
    pub fn contains(&self, z: Complex64) -> Membership {
        let slack =
            2.0 * self.semi_major - ((z - self.focus_minus).norm() + (z - self.focus_plus).norm());
        Membership::from_margin(0.5 * slack)
    }
}

/// The half of an ellipse on the `focus_plus` side of the minor axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HalfEllipse {
    pub ellipse: EllipseRegion,
}

impl HalfEllipse {
    /// Signed distance from the minor axis, positive on the kept side.
    pub fn minor_axis_distance(&self, z: Complex64) -> f64 {
        self.ellipse.major_coordinate(z)
    }

    pub fn contains(&self, z: Complex64) -> Membership {
        let e = self.ellipse.contains(z).margin;
        Membership::from_margin(e.min(self.minor_axis_distance(z)))
    }
}

pub fn image_ellipse(params: &MapParams, r_out: f64) -> Result<EllipseRegion> {
    let abs_a = params.a().norm();
    let rn = r_out.powi(params.n() as i32);
    let limit = rn * rn;
    if abs_a.partial_cmp(&limit) != Some(std::cmp::Ordering::Less) {
        return Err(Error::DegenerateEllipse { abs_a, limit });
    }
    let (focus_minus, focus_plus) = critical_values(params);
    Ok(EllipseRegion {
        center: params.c(),
        rotation: params.psi() / 2.0,
        semi_major: rn + abs_a / rn,
        semi_minor: rn - abs_a / rn,
        focus_minus,
        focus_plus,
    })
}

/// The image `U = R(U')` of a sector-annulus with outer radius `r_out`.
pub fn image_half_ellipse(params: &MapParams, r_out: f64) -> Result<HalfEllipse> {
    Ok(HalfEllipse {
        ellipse: image_ellipse(params, r_out)?,
    })
}

/// Which parameter a window varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ParamPlane {
    A,
    C,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum WindowKind {
    /// `{ a : mod_lo <= |a| <= mod_hi, |Arg a| <= arg_bound }` with `c` fixed.
    APlaneDirect {
        n: u32,
        c: f64,
        mod_lo: f64,
        mod_hi: f64,
        arg_bound: f64,
        /// The inner bound was zero and has been replaced by `PUNCTURE_CLAMP`.
        puncture_clamped: bool,
    },
    /// `{ c : c + 2 sqrt(a) in closure(target) }` with real `a` fixed.
    CPlaneViaVPlus {
        n: u32,
        a: f64,
        /// Sector index the target reproduces, when it is one of the `U'_k`.
        k: Option<usize>,
        regime: Regime,
        target: SectorAnnulus,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ParamWindow {
    pub kind: WindowKind,
}

impl ParamWindow {
    /// `W_{n,c}`: `c^2/4 <= |a| <= (1 - c/2)^2`, `|psi| <= pi/(n-1)`.
    pub fn a_plane(n: u32, c: f64) -> Result<Self> {
        if n < 3 {
            return Err(Error::Precondition(format!(
                "the a-plane window requires n >= 3 (got {n})"
            )));
        }
        if !(-1.0..=0.0).contains(&c) {
            return Err(Error::Precondition(format!(
                "the a-plane window requires -1 <= c <= 0 (got {c})"
            )));
        }
        let lo = c * c / 4.0;
        let hi = (1.0 - c / 2.0).powi(2);
        if lo >= hi {
            return Err(Error::EmptyWindow(format!(
                "c^2/4 = {lo} is not below (1 - c/2)^2 = {hi}"
            )));
        }
        let puncture_clamped = lo < PUNCTURE_CLAMP;
        Ok(Self {
            kind: WindowKind::APlaneDirect {
                n,
                c,
                mod_lo: lo.max(PUNCTURE_CLAMP),
                mod_hi: hi,
                arg_bound: PI / (n as f64 - 1.0),
                puncture_clamped,
            },
        })
    }

    /// `W_{n,a,k}`: `v+` ranges over the closure of `U'_k`.
    pub fn c_plane(n: u32, a: f64, k: usize) -> Result<Self> {
        if !(1.0..=C_PLANE_A_MAX).contains(&a) {
            return Err(Error::Precondition(format!(
                "the c-plane window requires 1 <= a <= 4 (got {a})"
            )));
        }
        if a > sector_containment_a_max(n) {
            return Err(Error::Precondition(format!(
                "the c-plane window requires a <= (2^(n+1) - 8)^2/16 = {} (got {a})",
                sector_containment_a_max(n)
            )));
        }
        let params = MapParams::real(n, a, 0.0)?;
        let target = make_uprime(&params, k, Regime::Standard)?;
        Ok(Self {
            kind: WindowKind::CPlaneViaVPlus {
                n,
                a,
                k: Some(k),
                regime: Regime::Standard,
                target,
            },
        })
    }

    /// The small-`a` window: `v+` ranges over the closure of the tight sector.
    pub fn c_plane_tight(n: u32, a: f64) -> Result<Self> {
        if !(0.1..=1.0).contains(&a) {
            return Err(Error::Precondition(format!(
                "the tight c-plane window requires 0.1 <= a <= 1 (got {a})"
            )));
        }
        let params = MapParams::real(n, a, 0.0)?;
        let target = make_uprime(&params, 0, Regime::Tight)?;
        Ok(Self {
            kind: WindowKind::CPlaneViaVPlus {
                n,
                a,
                k: Some(0),
                regime: Regime::Tight,
                target,
            },
        })
    }

    /// A `c`-plane window for an arbitrary target sector of `v+`.
    pub fn c_plane_target(n: u32, a: f64, target: SectorAnnulus) -> Result<Self> {
        if !(a > 0.0 && a.is_finite()) {
            return Err(Error::Precondition(format!(
                "c-plane windows require real a > 0 (got {a})"
            )));
        }
        MapParams::real(n, a, 0.0)?;
        Ok(Self {
            kind: WindowKind::CPlaneViaVPlus {
                n,
                a,
                k: None,
                regime: Regime::Standard,
                target,
            },
        })
    }

    pub fn plane(&self) -> ParamPlane {
        match self.kind {
            WindowKind::APlaneDirect { .. } => ParamPlane::A,
            WindowKind::CPlaneViaVPlus { .. } => ParamPlane::C,
        }
    }

    pub fn n(&self) -> u32 {
        match self.kind {
            WindowKind::APlaneDirect { n, .. } | WindowKind::CPlaneViaVPlus { n, .. } => n,
        }
    }

    /// The sector index and regime of the polynomial-like domain tied to this
    /// window.
    pub fn domain(&self) -> DomainSpec {
        match self.kind {
            WindowKind::APlaneDirect { .. } => DomainSpec::standard(0),
            WindowKind::CPlaneViaVPlus { k, regime, .. } => DomainSpec {
                k: k.unwrap_or(0),
                regime,
            },
        }
    }

    /// The map whose parameter is `lambda` (`a` or `c` depending on the
    /// plane).
    pub fn params_at(&self, lambda: Complex64) -> Result<MapParams> {
        match self.kind {
            WindowKind::APlaneDirect { n, c, .. } => {
                MapParams::new(n, lambda, Complex64::new(c, 0.0))
            }
            WindowKind::CPlaneViaVPlus { n, a, .. } => {
                MapParams::new(n, Complex64::new(a, 0.0), lambda)
            }
        }
    }

    fn two_sqrt_a(a: f64) -> Complex64 {
        Complex64::new(2.0 * a.sqrt(), 0.0)
    }

    /// Closed membership.
    pub fn contains(&self, lambda: Complex64) -> bool {
        const TOL: f64 = 1e-12;
        match self.kind {
            WindowKind::APlaneDirect {
                mod_lo,
                mod_hi,
                arg_bound,
                ..
            } => {
                let r = lambda.norm();
                r >= mod_lo * (1.0 - TOL)
                    && r <= mod_hi * (1.0 + TOL)
                    && lambda.im.atan2(lambda.re).abs() <= arg_bound + TOL
            }
            WindowKind::CPlaneViaVPlus { a, target, .. } => {
                let w = lambda + Self::two_sqrt_a(a);
                target.contains_closed(w, TOL * target.r_out())
            }
        }
    }

    /// `(r_lo, r_hi, theta_lo, theta_hi)` of the window in its natural polar
    /// coordinates: `a` itself, or `v+` for `c`-plane windows.
    pub fn polar_bounds(&self) -> (f64, f64, f64, f64) {
        match self.kind {
            WindowKind::APlaneDirect {
                mod_lo,
                mod_hi,
                arg_bound,
                ..
            } => (mod_lo, mod_hi, -arg_bound, arg_bound),
            WindowKind::CPlaneViaVPlus { target, .. } => (
                target.r_in(),
                target.r_out(),
                target.theta_lo(),
                target.theta_hi(),
            ),
        }
    }

    /// Map a point of the natural polar coordinates back to the parameter.
    pub fn from_natural(&self, w: Complex64) -> Complex64 {
        match self.kind {
            WindowKind::APlaneDirect { .. } => w,
            WindowKind::CPlaneViaVPlus { a, .. } => w - Self::two_sqrt_a(a),
        }
    }

    /// `m` parameter values tracing the boundary once counterclockwise, in
    /// order, without repeating the first point.
    pub fn sample_boundary(&self, m: usize) -> Result<Vec<Complex64>> {
        if m < 8 {
            return Err(Error::Precondition(format!(
                "boundary sampling needs m >= 8 (got {m})"
            )));
        }
        let (r_lo, r_hi, t_lo, t_hi) = self.polar_bounds();
        Ok(annular_sector_boundary(r_lo, r_hi, t_lo, t_hi, m)
            .into_iter()
            .map(|w| self.from_natural(w))
            .collect())
    }

    pub fn describe(&self) -> String {
        match self.kind {
            WindowKind::APlaneDirect {
                n,
                c,
                mod_lo,
                mod_hi,
                arg_bound,
                puncture_clamped,
            } => format!(
                "W(a-plane n={n} c={c}): {mod_lo} <= |a| <= {mod_hi}, |Arg a| <= {arg_bound}{}",
                if puncture_clamped {
                    " [inner bound clamped at the puncture a = 0]"
                } else {
                    ""
                }
            ),
            WindowKind::CPlaneViaVPlus {
                n,
                a,
                k,
                regime,
                target,
            } => format!(
                "W(c-plane n={n} a={a} k={} {:?}): {} <= |v+| <= {}, {} <= Arg v+ <= {}",
                k.map_or_else(|| "custom".to_string(), |k| k.to_string()),
                regime,
                target.r_in(),
                target.r_out(),
                target.theta_lo(),
                target.theta_hi()
            ),
        }
    }
}
