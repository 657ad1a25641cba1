use std::io;
use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("degree n must be at least 2 (got {0})")]
    InvalidDegree(u32),

    #[error("coefficient a must be nonzero (a = 0 is the degenerate member of the family)")]
    DegenerateCoefficient,

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("pole: the map is evaluated at z = 0")]
    Pole,

    #[error("escape radius must be finite and exceed 1 (got {0})")]
    InvalidEscapeRadius(f64),

    #[error("max_iter must be at least 1")]
    InvalidMaxIter,

    #[error("sector index k = {k} out of range 0..{n}")]
    SectorIndex { k: usize, n: u32 },

    #[error("the tight regime requires real positive a and k = 0")]
    TightRegime,

    #[error("invalid sector annulus: {0}")]
    InvalidSector(String),

    #[error("degenerate ellipse: |a| = {abs_a} is not below r_out^(2n) = {limit}")]
    DegenerateEllipse { abs_a: f64, limit: f64 },

    #[error("empty window: {0}")]
    EmptyWindow(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("degenerate interval: omega1 = {omega1} is not below omega2 = {omega2}")]
    DegenerateInterval { omega1: f64, omega2: f64 },

    #[error("fixed-point check failed for the baby Mandelbrot center (residual {0:e})")]
    CenterCheck(f64),

    #[error("invalid viewport: {0}")]
    InvalidViewport(String),

    #[error("failed to write {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
}
