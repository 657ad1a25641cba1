//! Evaluation and iteration of `R(z) = z^n + a/z^n + c`.
//!
//! Everything here is a pure function of its arguments. Roots of `a` always
//! use the principal branch, so `sqrt(a)` has non-negative real part and the
//! critical value `v+ = c + 2 sqrt(a)` is the image of the critical point
//! sitting at argument `psi / 2n`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Components beyond this magnitude are classified as escaped immediately.
pub const OVERFLOW_GUARD: f64 = 1e150;

pub const RENDER_MAX_ITER: u32 = 256;
pub const CERTIFY_MAX_ITER: u32 = 1024;

/// One member `(n, a, c)` of the family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MapParams {
    n: u32,
    a: Complex64,
    c: Complex64,
    psi: f64,
}

impl MapParams {
    pub fn new(n: u32, a: Complex64, c: Complex64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidDegree(n));
        }
        if !(a.re.is_finite() && a.im.is_finite()) {
            return Err(Error::NonFinite("a"));
        }
        if !(c.re.is_finite() && c.im.is_finite()) {
            return Err(Error::NonFinite("c"));
        }
        if a.norm() == 0.0 {
            return Err(Error::DegenerateCoefficient);
        }
        Ok(Self {
            n,
            a,
            c,
            psi: principal_arg(a),
        })
    }

    /// Convenience constructor for real `a` and `c`.
    pub fn real(n: u32, a: f64, c: f64) -> Result<Self> {
        Self::new(n, Complex64::new(a, 0.0), Complex64::new(c, 0.0))
    }

    pub fn with_a(&self, a: Complex64) -> Result<Self> {
        Self::new(self.n, a, self.c)
    }

    pub fn with_c(&self, c: Complex64) -> Result<Self> {
        Self::new(self.n, self.a, c)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn a(&self) -> Complex64 {
        self.a
    }

    pub fn c(&self) -> Complex64 {
        self.c
    }

    /// Principal argument of `a`, in `(-pi, pi]`.
    pub fn psi(&self) -> f64 {
        self.psi
    }

    pub fn is_real_a(&self) -> bool {
        self.a.im == 0.0
    }

    /// Principal square root of `a`.
    pub fn sqrt_a(&self) -> Complex64 {
        principal_root(self.a, 2)
    }

    /// Principal `n`-th root of `a`.
    pub fn root_a(&self) -> Complex64 {
        principal_root(self.a, self.n)
    }
}

/// Principal argument in `(-pi, pi]`; `atan2` returns `-pi` for a negative
/// real with a negative zero imaginary part.
pub fn principal_arg(z: Complex64) -> f64 {
    let t = z.im.atan2(z.re);
    if t <= -PI {
        PI
    } else {
        t
    }
}

/// Principal `k`-th root `|z|^(1/k) e^(i Arg(z)/k)`.
pub fn principal_root(z: Complex64, k: u32) -> Complex64 {
    let modulus = z.norm().powf(1.0 / k as f64);
    let angle = principal_arg(z) / k as f64;
    if angle == 0.0 {
        Complex64::new(modulus, 0.0)
    } else {
        Complex64::from_polar(modulus, angle)
    }
}

/// `z^n` by binary exponentiation on the Cartesian form.
#[inline]
pub fn pow_u(z: Complex64, n: u32) -> Complex64 {
    let mut result = Complex64::new(1.0, 0.0);
    let mut base = z;
    let mut e = n;
    while e > 0 {
        if e & 1 == 1 {
            result *= base;
        }
        e >>= 1;
        if e > 0 {
            base = base * base;
        }
    }
    result
}

#[inline]
fn is_finite(z: Complex64) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

/// `R(z) = z^n + a/z^n + c`.
///
/// `z = 0` (or a `z^n` that underflows to zero) is a pole.
#[inline]
pub fn eval_map(params: &MapParams, z: Complex64) -> Result<Complex64> {
    let zn = pow_u(z, params.n);
    if zn.re == 0.0 && zn.im == 0.0 {
        return Err(Error::Pole);
    }
    let w = zn + params.a / zn + params.c;
    if is_finite(w) {
        Ok(w)
    } else {
        Err(Error::NonFinite("map value"))
    }
}

/// Derivative `n z^(n-1) - n a z^(-n-1)`.
pub fn eval_derivative(params: &MapParams, z: Complex64) -> Result<Complex64> {
    if z.re == 0.0 && z.im == 0.0 {
        return Err(Error::Pole);
    }
    let n = params.n as f64;
    let zn = pow_u(z, params.n);
    let d = (zn - params.a / zn) * n / z;
    if is_finite(d) {
        Ok(d)
    } else {
        Err(Error::NonFinite("derivative"))
    }
}

/// The `2n` critical points `|a|^(1/2n) e^(i(psi + 2 pi j)/2n)`, `j = 0..2n`,
/// ordered by increasing angle starting at `psi/2n`.
///
/// Even `j` map to `v+`, odd `j` to `v-`; index `2k` is the critical point at
/// the angular midpoint of the sector `U'_k`.
pub fn critical_points(params: &MapParams) -> Vec<Complex64> {
    let count = 2 * params.n;
    let modulus = params.a.norm().powf(1.0 / count as f64);
    (0..count)
        .map(|j| {
            let angle = (params.psi + 2.0 * PI * j as f64) / count as f64;
            if angle == 0.0 {
                Complex64::new(modulus, 0.0)
            } else {
                Complex64::from_polar(modulus, angle)
            }
        })
        .collect()
}

/// Critical values `(v-, v+) = (c - 2 sqrt(a), c + 2 sqrt(a))`.
pub fn critical_values(params: &MapParams) -> (Complex64, Complex64) {
    let s = params.sqrt_a() * 2.0;
    (params.c - s, params.c + s)
}

/// The involution `h(z) = a^(1/n) / z`, satisfying `R(h(z)) = R(z)`.
pub fn involution(params: &MapParams, z: Complex64) -> Result<Complex64> {
    if z.re == 0.0 && z.im == 0.0 {
        return Err(Error::Pole);
    }
    Ok(params.root_a() / z)
}

/// Smallest of `{1.25, 2}` with `rho^n > 3 max(1, |a|, |c|)`, falling back
/// to `1.05 (3 max(1, |a|, |c|))^(1/n)`.
pub fn default_escape_radius(params: &MapParams) -> f64 {
    escape_radius_for(params.n, params.a.norm(), params.c.norm())
}

pub(crate) fn escape_radius_for(n: u32, abs_a: f64, abs_c: f64) -> f64 {
    let bound = 3.0 * 1f64.max(abs_a).max(abs_c);
    for rho in [1.25_f64, 2.0] {
        if rho.powi(n as i32) > bound {
            return rho;
        }
    }
    bound.powf(1.0 / n as f64) * 1.05
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EscapeSettings {
    escape_radius: f64,
    max_iter: u32,
}

impl EscapeSettings {
    pub fn new(escape_radius: f64, max_iter: u32) -> Result<Self> {
        if !escape_radius.is_finite() || escape_radius <= 1.0 {
            return Err(Error::InvalidEscapeRadius(escape_radius));
        }
        if max_iter < 1 {
            return Err(Error::InvalidMaxIter);
        }
        Ok(Self {
            escape_radius,
            max_iter,
        })
    }

    pub fn escape_radius(&self) -> f64 {
        self.escape_radius
    }

    pub fn max_iter(&self) -> u32 {
        self.max_iter
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum OrbitStatus {
    /// First iterate `z_step` with `|z_step| > escape_radius`.
    Escaped {
        step: u32,
        modulus: f64,
    },
    Bounded {
        steps_run: u32,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OrbitOutcome {
    pub status: OrbitStatus,
    pub final_point: Complex64,
}

impl OrbitOutcome {
    pub fn is_bounded(&self) -> bool {
        matches!(self.status, OrbitStatus::Bounded { .. })
    }

    pub fn escape_step(&self) -> Option<u32> {
        match self.status {
            OrbitStatus::Escaped { step, .. } => Some(step),
            OrbitStatus::Bounded { .. } => None,
        }
    }

    /// Outcome used for degenerate or singular starts.
    pub(crate) fn escaped_at_pole(step: u32, at: Complex64, settings: &EscapeSettings) -> Self {
        Self {
            status: OrbitStatus::Escaped {
                step,
                modulus: settings.escape_radius * 10.0,
            },
            final_point: at,
        }
    }
}

#[inline]
fn escape_time<F>(z0: Complex64, settings: &EscapeSettings, mut step_fn: F) -> OrbitOutcome
where
    F: FnMut(Complex64) -> Result<Complex64>,
{
    let r = settings.escape_radius;
    let mut z = z0;
    for k in 1..=settings.max_iter {
        let next = match step_fn(z) {
            Ok(w) => w,
            Err(Error::Pole) => return OrbitOutcome::escaped_at_pole(k, z, settings),
            Err(_) => {
                return OrbitOutcome {
                    status: OrbitStatus::Escaped {
                        step: k,
                        modulus: f64::MAX,
                    },
                    final_point: z,
                }
            }
        };
        if next.re.abs() > OVERFLOW_GUARD || next.im.abs() > OVERFLOW_GUARD {
            return OrbitOutcome {
                status: OrbitStatus::Escaped {
                    step: k,
                    modulus: next.re.hypot(next.im).min(f64::MAX),
                },
                final_point: next,
            };
        }
        let modulus = next.norm_sqr().sqrt();
        if modulus > r {
            return OrbitOutcome {
                status: OrbitStatus::Escaped { step: k, modulus },
                final_point: next,
            };
        }
        z = next;
    }
    OrbitOutcome {
        status: OrbitStatus::Bounded {
            steps_run: settings.max_iter,
        },
        final_point: z,
    }
}

/// Escape-time classification of the orbit of `z0` under `R`.
///
/// The seed itself is not tested; the first tested iterate is `z_1`.
pub fn iterate_orbit(params: &MapParams, z0: Complex64, settings: &EscapeSettings) -> OrbitOutcome {
    escape_time(z0, settings, |z| eval_map(params, z))
}

/// Escape-time classification of the critical orbit of `0` under `z^2 + c`.
pub fn mandelbrot_classify(c: Complex64, settings: &EscapeSettings) -> OrbitOutcome {
    escape_time(Complex64::new(0.0, 0.0), settings, |z| Ok(z * z + c))
}

/// `R^m(z)` for `m >= 0`, failing on a pole or overflow.
pub fn iterate_n(params: &MapParams, z0: Complex64, m: u32) -> Result<Complex64> {
    let mut z = z0;
    for _ in 0..m {
        z = eval_map(params, z)?;
    }
    Ok(z)
}
