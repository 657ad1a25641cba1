//! Dynamics of the family `R(z) = z^n + a/z^n + c`.
//!
//! The crate covers orbit iteration, the polynomial-like domains around each
//! critical point, computer-assisted certificates that those domains behave
//! like quadratic-like maps, escape-time rendering of dynamical and parameter
//! planes, and a few explicit formulas for features of the parameter space.

pub mod certify;
pub mod dynamics;
pub mod error;
pub mod features;
pub mod regions;
pub mod render;

pub use certify::CertificateReport;
pub use dynamics::{EscapeSettings, MapParams, OrbitOutcome, OrbitStatus};
pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use regions::{DomainSpec, HalfEllipse, ParamWindow, Regime, SectorAnnulus};
pub use render::{ImageBuffer, Plane, RenderSpec, Rgb, Viewport};
