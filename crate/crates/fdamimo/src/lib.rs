//! Desk-scale FDA-MIMO radar workbench: synthesizes multi-target echoes
//! contaminated by barrage (Gaussian, low-rank) and burst (impulsive,
//! Gaussian-mixture) jamming, separates the components with a two-step
//! GoDec "low-rank + low-rank + sparse" decomposition driven by bilateral
//! random projections, and jointly estimates target range and angle from
//! the recovered signal matrix via a zero-padded 2-D Fourier transform.
//!
//! The crate is organized around the processing chain:
//!
//! - [`linalg`] — dense complex-matrix numerics (QR, truncated SVD,
//!   bilateral random projections, hard thresholding, 2-D FFT)
//! - [`radar`] — array geometry, steering vectors, snapshot synthesis
//! - [`interference`] — barrage/burst/noise generators, scene assembly,
//!   observation masks
//! - [`decomposition`] — baseline GoDec and the two-step GoDec solver
//! - [`estimation`] — target-vector extraction, 2-D spectra, peak-to-parameter
//!   mapping, trial metrics
//! - [`harness`] — configuration-driven Monte Carlo experiment runner
//!
//! See the `examples/` directory for one runnable example per capability and
//! the `fdamimo` binary for the config-driven experiment CLI.

pub mod decomposition;
pub mod estimation;
pub mod harness;
pub mod interference;
pub mod linalg;
pub mod radar;

use std::path::PathBuf;

use ndarray::Array2;
use num_complex::Complex64;
use thiserror::Error;

/// Dense complex matrix, the universal carrier for snapshot data and all
/// decomposition factors. Row-major (ndarray standard layout).
pub type CMat = Array2<Complex64>;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// An operation precondition was violated by the caller.
    #[error("rejected input: {0}")]
    RejectedInput(String),
    /// A spectral peak maps outside the visible angle region.
    #[error("no valid angle: receive spatial frequency {f_r} maps outside |sin| <= 1")]
    NoValidAngle { f_r: f64 },
    /// Configuration file errors (parse or semantic validation).
    #[error("config error: {0}")]
    Config(String),
    /// I/O failures, annotated with the offending path.
    #[error("i/o error at {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn reject<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::RejectedInput(msg.into()))
}
