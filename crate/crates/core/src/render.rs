//! Escape-time rendering of dynamical and parameter planes.
//!
//! Parameter-plane pixels iterate both critical values and average two
//! colors: `v+` escaping shades green, `v-` escaping shades purple, bounded is
//! black. Dynamical-plane pixels iterate the pixel itself and use the `v+`
//! shade alone.
//!
//! Every pixel is a pure function of the spec and its coordinates, so output
//! bytes do not depend on threading or tiling.

use std::fs;
use std::ops::Range;
use std::path::Path;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dynamics::{
    critical_values, default_escape_radius, iterate_orbit, EscapeSettings, MapParams, OrbitOutcome,
    OrbitStatus,
};
use crate::error::{Error, Result};

pub const GREEN: Rgb = Rgb::new(0, 255, 0);
pub const PURPLE: Rgb = Rgb::new(160, 32, 240);
pub const BLACK: Rgb = Rgb::new(0, 0, 0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Rgb {
    pub r: u8,
    pub g: u8,
    pub b: u8,
}

impl Rgb {
    pub const fn new(r: u8, g: u8, b: u8) -> Self {
        Self { r, g, b }
    }

    fn scaled(self, s: f64) -> Self {
        let ch = |x: u8| (x as f64 * s + 0.5).floor().clamp(0.0, 255.0) as u8;
        Self::new(ch(self.r), ch(self.g), ch(self.b))
    }

    /// Per-channel mean, rounded half-up.
    fn mean(self, other: Self) -> Self {
        let m = |x: u8, y: u8| (x as u16 + y as u16).div_ceil(2) as u8;
        Self::new(m(self.r, other.r), m(self.g, other.g), m(self.b, other.b))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Palette {
    pub plus: Rgb,
    pub minus: Rgb,
}

impl Default for Palette {
    fn default() -> Self {
        Self {
            plus: GREEN,
            minus: PURPLE,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Plane {
    Dynamical(MapParams),
    /// `a` varies over the viewport, `c` fixed.
    APlane {
        n: u32,
        c: Complex64,
    },
    /// `c` varies over the viewport, `a` fixed.
    CPlane {
        n: u32,
        a: Complex64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Viewport {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

impl Viewport {
    pub fn new(re_min: f64, re_max: f64, im_min: f64, im_max: f64) -> Result<Self> {
        let all_finite = [re_min, re_max, im_min, im_max]
            .iter()
            .all(|x| x.is_finite());
        if !all_finite {
            return Err(Error::InvalidViewport("bounds must be finite".into()));
        }
        if !(re_min < re_max && im_min < im_max) {
            return Err(Error::InvalidViewport(format!(
                "need re_min < re_max and im_min < im_max (got [{re_min}, {re_max}] x [{im_min}, {im_max}])"
            )));
        }
        Ok(Self {
            re_min,
            re_max,
            im_min,
            im_max,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum RadiusChoice {
    /// `default_escape_radius` of each pixel's map.
    Auto,
    Fixed(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RenderSpec {
    pub plane: Plane,
    pub viewport: Viewport,
    pub width: usize,
    pub height: usize,
    pub max_iter: u32,
    pub radius: RadiusChoice,
    pub palette: Palette,
}

impl RenderSpec {
    pub fn new(plane: Plane, viewport: Viewport, width: usize, height: usize) -> Self {
        Self {
            plane,
            viewport,
            width,
            height,
            max_iter: crate::dynamics::RENDER_MAX_ITER,
            radius: RadiusChoice::Auto,
            palette: Palette::default(),
        }
    }

    fn validate(&self) -> Result<()> {
        if self.width == 0 || self.height == 0 {
            return Err(Error::InvalidViewport(
                "width and height must be positive".into(),
            ));
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidMaxIter);
        }
        if let RadiusChoice::Fixed(r) = self.radius {
            EscapeSettings::new(r, self.max_iter)?;
        }
        Viewport::new(
            self.viewport.re_min,
            self.viewport.re_max,
            self.viewport.im_min,
            self.viewport.im_max,
        )?;
        Ok(())
    }

    /// Center of pixel `(x, y)`; row 0 is the top edge.
    pub fn pixel_center(&self, x: usize, y: usize) -> Complex64 {
        let v = &self.viewport;
        let dx = (v.re_max - v.re_min) / self.width as f64;
        let dy = (v.im_max - v.im_min) / self.height as f64;
        Complex64::new(
            v.re_min + (x as f64 + 0.5) * dx,
            v.im_max - (y as f64 + 0.5) * dy,
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Classification {
    Single(OrbitOutcome),
    Pair {
        plus: OrbitOutcome,
        minus: OrbitOutcome,
    },
}

impl Classification {
    /// Boundedness flags, `v+` first; the dynamical plane repeats its flag.
    pub fn bounded_flags(&self) -> (bool, bool) {
        match self {
            Classification::Single(o) => (o.is_bounded(), o.is_bounded()),
            Classification::Pair { plus, minus } => (plus.is_bounded(), minus.is_bounded()),
        }
    }
}

fn settings_for(params: &MapParams, radius: RadiusChoice, max_iter: u32) -> EscapeSettings {
    let r = match radius {
        RadiusChoice::Auto => default_escape_radius(params),
        RadiusChoice::Fixed(r) => r,
    };
    EscapeSettings::new(r, max_iter).expect("render radii are validated or derived")
}

fn degenerate_escape() -> OrbitOutcome {
    OrbitOutcome {
        status: OrbitStatus::Escaped {
            step: 0,
            modulus: f64::INFINITY,
        },
        final_point: Complex64::new(0.0, 0.0),
    }
}

/// Classify one point of a plane.
///
/// Parameter planes iterate both critical values of the pixel's map; a pixel
/// whose parameters are degenerate (`a = 0`) counts as escaping at once.
pub fn classify_point(
    plane: &Plane,
    point: Complex64,
    max_iter: u32,
    radius: RadiusChoice,
) -> Classification {
    let params = match *plane {
        Plane::Dynamical(p) => {
            let s = settings_for(&p, radius, max_iter);
            return Classification::Single(iterate_orbit(&p, point, &s));
        }
        Plane::APlane { n, c } => MapParams::new(n, point, c),
        Plane::CPlane { n, a } => MapParams::new(n, a, point),
    };
    match params {
        Ok(p) => {
            let s = settings_for(&p, radius, max_iter);
            let (v_minus, v_plus) = critical_values(&p);
            Classification::Pair {
                plus: iterate_orbit(&p, v_plus, &s),
                minus: iterate_orbit(&p, v_minus, &s),
            }
        }
        Err(_) => Classification::Pair {
            plus: degenerate_escape(),
            minus: degenerate_escape(),
        },
    }
}

/// `s(k) = 0.25 + 0.75 (1 - k / max_iter)`.
pub fn shade(step: u32, max_iter: u32) -> f64 {
    let k = step.min(max_iter) as f64;
    0.25 + 0.75 * (1.0 - k / max_iter as f64)
}

fn orbit_color(outcome: &OrbitOutcome, base: Rgb, max_iter: u32) -> Rgb {
    match outcome.status {
        OrbitStatus::Bounded { .. } => BLACK,
        OrbitStatus::Escaped { step, .. } => base.scaled(shade(step, max_iter)),
    }
}

/// Average of the shaded `v+` and `v-` colors.
pub fn colorize(
    plus: &OrbitOutcome,
    minus: &OrbitOutcome,
    max_iter: u32,
    palette: &Palette,
) -> Rgb {
    orbit_color(plus, palette.plus, max_iter).mean(orbit_color(minus, palette.minus, max_iter))
}

pub fn color_of(class: &Classification, max_iter: u32, palette: &Palette) -> Rgb {
    match class {
        Classification::Single(o) => orbit_color(o, palette.plus, max_iter),
        Classification::Pair { plus, minus } => colorize(plus, minus, max_iter, palette),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImageBuffer {
    pub width: usize,
    pub height: usize,
    /// Row-major, top row first.
    pub pixels: Vec<Rgb>,
}

impl ImageBuffer {
    pub fn get(&self, x: usize, y: usize) -> Rgb {
        self.pixels[y * self.width + x]
    }
}

fn render_pixel(spec: &RenderSpec, x: usize, y: usize) -> Rgb {
    let class = classify_point(
        &spec.plane,
        spec.pixel_center(x, y),
        spec.max_iter,
        spec.radius,
    );
    color_of(&class, spec.max_iter, &spec.palette)
}

/// Pixels of the rectangle `xs x ys`, row-major.
pub fn render_tile(spec: &RenderSpec, xs: Range<usize>, ys: Range<usize>) -> Result<Vec<Rgb>> {
    spec.validate()?;
    if xs.end > spec.width || ys.end > spec.height {
        return Err(Error::InvalidViewport("tile exceeds the image".into()));
    }
    Ok(ys
        .flat_map(|y| xs.clone().map(move |x| (x, y)))
        .map(|(x, y)| render_pixel(spec, x, y))
        .collect())
}

/// Render the full image, rows in parallel.
pub fn render(spec: &RenderSpec) -> Result<ImageBuffer> {
    spec.validate()?;
    let rows: Vec<Vec<Rgb>> = (0..spec.height)
        .into_par_iter()
        .map(|y| (0..spec.width).map(|x| render_pixel(spec, x, y)).collect())
        .collect();
    Ok(ImageBuffer {
        width: spec.width,
        height: spec.height,
        pixels: rows.into_iter().flatten().collect(),
    })
}

/// Boundedness classification of every pixel center, `v+` first.
pub fn classify_grid(spec: &RenderSpec) -> Result<Vec<(bool, bool)>> {
    spec.validate()?;
    let rows: Vec<Vec<(bool, bool)>> = (0..spec.height)
        .into_par_iter()
        .map(|y| {
            (0..spec.width)
                .map(|x| {
                    classify_point(
                        &spec.plane,
                        spec.pixel_center(x, y),
                        spec.max_iter,
                        spec.radius,
                    )
                    .bounded_flags()
                })
                .collect()
        })
        .collect();
    Ok(rows.into_iter().flatten().collect())
}

pub fn encode_ppm(image: &ImageBuffer) -> Vec<u8> {
    let header = format!("P6\n{} {}\n255\n", image.width, image.height);
    let mut out = Vec::with_capacity(header.len() + 3 * image.pixels.len());
    out.extend_from_slice(header.as_bytes());
    for p in &image.pixels {
        out.extend_from_slice(&[p.r, p.g, p.b]);
    }
    out
}

pub fn write_ppm(image: &ImageBuffer, path: &Path) -> Result<()> {
    fs::write(path, encode_ppm(image)).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}
