//! Closed-form landmarks of the `c`-plane for real `a`, and boundedness scans
//! over parameter windows.

use std::collections::VecDeque;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::dynamics::{critical_values, eval_map, iterate_orbit, EscapeSettings, MapParams};
use crate::error::{Error, Result};
use crate::regions::{ParamWindow, WindowKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Which {
    Plus,
    Minus,
}

fn check_positive(a: f64) -> Result<()> {
    if a > 0.0 && a.is_finite() {
        Ok(())
    } else {
        Err(Error::Precondition(format!(
            "a must be a positive real (got {a})"
        )))
    }
}

/// Center of the baby Mandelbrot set tied to `v+` (or its mirror for `v-`):
/// the `c` at which the critical point `a^(1/2n)` is fixed.
///
/// The `v-` center is the mirror image `-c+`; it is a fixed-critical-point
/// parameter only for odd `n`, so even `n` is rejected for `Minus`.
pub fn baby_center(n: u32, a: f64, which: Which) -> Result<f64> {
    check_positive(a)?;
    if n < 2 {
        return Err(Error::InvalidDegree(n));
    }
    let p = a.powf(1.0 / (2.0 * n as f64));
    let c_plus = p - 2.0 * a.sqrt();
    let (c, fixed) = match which {
        Which::Plus => (c_plus, p),
        Which::Minus => {
            if n.is_multiple_of(2) {
                return Err(Error::Precondition(format!(
                    "the v- center is a fixed critical point only for odd n (got n = {n})"
                )));
            }
            (-c_plus, -p)
        }
    };
    let params = MapParams::real(n, a, c)?;
    let z = Complex64::new(fixed, 0.0);
    let residual = (eval_map(&params, z)? - z).norm();
    if residual > 1e-12 {
        return Err(Error::CenterCheck(residual));
    }
    Ok(c)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CenterPair {
    pub n: u32,
    pub a: f64,
    pub c_plus: f64,
    /// `None` for even `n`, where no real `v-` center exists.
    pub c_minus: Option<f64>,
}

pub fn center_pair(n: u32, a: f64) -> Result<CenterPair> {
    let c_plus = baby_center(n, a, Which::Plus)?;
    let c_minus = if n % 2 == 1 {
        Some(baby_center(n, a, Which::Minus)?)
    } else {
        None
    };
    Ok(CenterPair {
        n,
        a,
        c_plus,
        c_minus,
    })
}

/// The `a` at which the two centers coincide at the origin:
/// `(1/4)^(n/(n-1))`.
pub fn overlap_parameter(n: u32) -> Result<f64> {
    if n < 2 {
        return Err(Error::InvalidDegree(n));
    }
    let nf = n as f64;
    Ok(0.25f64.powf(nf / (nf - 1.0)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Ordering {
    I2LeftOfI1,
    Overlapping,
    I1LeftOfI2,
}

impl Ordering {
    pub fn label(self) -> &'static str {
        match self {
            Ordering::I2LeftOfI1 => "I2_left_of_I1",
            Ordering::Overlapping => "overlapping",
            Ordering::I1LeftOfI2 => "I1_left_of_I2",
        }
    }
}

/// Real slices of the two tight windows: `I1 = [w1, w2]` for `v+` and its
/// mirror `I2 = [-w2, -w1]` for `v-`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IntervalPair {
    pub omega1: f64,
    pub omega2: f64,
    pub ordering: Ordering,
}

impl IntervalPair {
    pub fn i1(&self) -> (f64, f64) {
        (self.omega1, self.omega2)
    }

    pub fn i2(&self) -> (f64, f64) {
        (-self.omega2, -self.omega1)
    }
}

pub fn interval_positions(n: u32, a: f64) -> Result<IntervalPair> {
    check_positive(a)?;
    if n < 2 {
        return Err(Error::InvalidDegree(n));
    }
    let limit = (25.0f64 / 16.0).powi(n as i32);
    if a >= limit {
        return Err(Error::Precondition(format!(
            "intervals need a < (25/16)^n = {limit} (got {a})"
        )));
    }
    let two_sqrt = 2.0 * a.sqrt();
    let omega1 = 0.8 * a.powf(1.0 / n as f64) - two_sqrt;
    let omega2 = 1.25 - two_sqrt;
    if omega1 >= omega2 {
        return Err(Error::DegenerateInterval { omega1, omega2 });
    }
    let ordering = if omega1 > 0.0 {
        Ordering::I2LeftOfI1
    } else if omega2 < 0.0 {
        Ordering::I1LeftOfI2
    } else {
        Ordering::Overlapping
    };
    Ok(IntervalPair {
        omega1,
        omega2,
        ordering,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanSample {
    pub param: Complex64,
    pub member_window: bool,
    pub bounded_global: bool,
    pub bounded_in_uprime: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanSummary {
    pub samples: usize,
    pub bounded: usize,
    pub bounded_in_uprime: usize,
    pub nonempty: bool,
    /// `None` when the window has no closed-form center (`a`-plane windows or
    /// sectors other than `k = 0`).
    pub contains_center: Option<bool>,
    pub center: Option<Complex64>,
    /// 4-connected components of the bounded samples on the scan grid.
    /// Advisory only.
    pub components: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanResult {
    pub density: usize,
    /// Row-major over (modulus index, argument index).
    pub samples: Vec<ScanSample>,
    pub summary: ScanSummary,
}

impl ScanResult {
    pub fn locus(&self) -> impl Iterator<Item = &ScanSample> {
        self.samples.iter().filter(|s| s.bounded_global)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("re,im,member_window,bounded_global,bounded_in_uprime\n");
        for s in &self.samples {
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                s.param.re, s.param.im, s.member_window, s.bounded_global, s.bounded_in_uprime
            );
        }
        out
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_csv()).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })
    }
}

fn classify_sample(
    window: &ParamWindow,
    lambda: Complex64,
    settings: &EscapeSettings,
) -> ScanSample {
    let member_window = window.contains(lambda);
    let mut sample = ScanSample {
        param: lambda,
        member_window,
        bounded_global: false,
        bounded_in_uprime: false,
    };
    let Ok(params) = window.params_at(lambda) else {
        return sample;
    };
    let (_, v_plus) = critical_values(&params);
    sample.bounded_global = member_window && iterate_orbit(&params, v_plus, settings).is_bounded();
    if let Ok(sector) = window.domain().build(&params) {
        let mut z = v_plus;
        let mut stays = member_window && sector.contains_closed(z, 1e-12);
        for _ in 0..settings.max_iter() {
            if !stays {
                break;
            }
            match eval_map(&params, z) {
                Ok(w) => z = w,
                Err(_) => {
                    stays = false;
                    break;
                }
            }
            stays = sector.contains_closed(z, 1e-12);
        }
        sample.bounded_in_uprime = stays;
    }
    sample
}

fn count_components(flags: &[bool], density: usize) -> usize {
    let mut seen = vec![false; flags.len()];
    let mut count = 0;
    let mut queue = VecDeque::new();
    for start in 0..flags.len() {
        if !flags[start] || seen[start] {
            continue;
        }
        count += 1;
        seen[start] = true;
        queue.push_back(start);
        while let Some(i) = queue.pop_front() {
            let (row, col) = (i / density, i % density);
            let mut neighbors = Vec::with_capacity(4);
            if row > 0 {
                neighbors.push(i - density);
            }
            if row + 1 < density {
                neighbors.push(i + density);
            }
            if col > 0 {
                neighbors.push(i - 1);
            }
            if col + 1 < density {
                neighbors.push(i + 1);
            }
            for j in neighbors {
                if flags[j] && !seen[j] {
                    seen[j] = true;
                    queue.push_back(j);
                }
            }
        }
    }
    count
}

/// Closed-form center of the window when it is a `k = 0` `c`-plane window.
fn window_center(window: &ParamWindow) -> Option<(Complex64, Complex64)> {
    match window.kind {
        WindowKind::CPlaneViaVPlus {
            n, a, k: Some(0), ..
        } => {
            let c = baby_center(n, a, Which::Plus).ok()?;
            // natural coordinate of the center is v+ = a^(1/2n)
            Some((
                Complex64::new(c, 0.0),
                Complex64::new(c + 2.0 * a.sqrt(), 0.0),
            ))
        }
        _ => None,
    }
}

/// Scan a `density x density` polar grid over the window (modulus by
/// argument of `a`, or of `v+` for `c`-plane windows), sampling cell centers.
pub fn scan_boundedness_locus(
    window: &ParamWindow,
    density: usize,
    settings: &EscapeSettings,
) -> Result<ScanResult> {
    if density < 16 {
        return Err(Error::Precondition(format!(
            "scan density must be at least 16 per axis (got {density})"
        )));
    }
    let (r_lo, r_hi, t_lo, t_hi) = window.polar_bounds();
    let cell = |i: usize, lo: f64, hi: f64| lo + (hi - lo) * (i as f64 + 0.5) / density as f64;
    let samples: Vec<ScanSample> = (0..density * density)
        .into_par_iter()
        .map(|idx| {
            let (i, j) = (idx / density, idx % density);
            let w = Complex64::from_polar(cell(i, r_lo, r_hi), cell(j, t_lo, t_hi));
            classify_sample(window, window.from_natural(w), settings)
        })
        .collect();
    let flags: Vec<bool> = samples.iter().map(|s| s.bounded_global).collect();
    let bounded = flags.iter().filter(|&&b| b).count();
    let center = window_center(window);
    let contains_center = center.map(|(c, natural)| {
        let direct = classify_sample(window, c, settings);
        // nearest grid cell to the center must also be in the locus
        let i = (((natural.norm() - r_lo) / (r_hi - r_lo)) * density as f64).floor();
        let j = (((natural.arg() - t_lo) / (t_hi - t_lo)) * density as f64).floor();
        let in_grid = i >= 0.0 && j >= 0.0 && (i as usize) < density && (j as usize) < density;
        direct.bounded_global && in_grid && flags[i as usize * density + j as usize]
    });
    let summary = ScanSummary {
        samples: samples.len(),
        bounded,
        bounded_in_uprime: samples.iter().filter(|s| s.bounded_in_uprime).count(),
        nonempty: bounded > 0,
        contains_center,
        center: center.map(|(c, _)| c),
        components: count_components(&flags, density),
    };
    Ok(ScanResult {
        density,
        samples,
        summary,
    })
}
