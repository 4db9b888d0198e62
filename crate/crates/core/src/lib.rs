//! Single-image non-uniformity correction for infrared-style images.
//!
//! The correction chain ([`admire_pipeline`]) equalizes each column onto a
//! Gaussian-weighted midway of its neighbors' histograms, picks the
//! smoothing strength per patch by minimizing line total variation, and
//! finishes with an anisotropic DCT hard-threshold denoiser. A column-offset
//! total-variation method ([`tv_baseline`]), a seeded non-uniformity
//! simulator and contrast-invariant metrics are included for evaluation.

pub mod admire;
pub mod baseline;
pub mod dct_denoise;
pub mod error;
pub mod histogram;
pub mod image;
pub mod metrics;
pub mod mire;
pub mod pgm;
pub mod sim;

pub use admire::{
    adaptive_mire, admire_pipeline, AdaptiveMire, AdmireOutput, AdmireParams, PatchGrid,
};
pub use baseline::{tv_baseline, BaselineResult, OffsetVector};
pub use dct_denoise::{dct2, dct_denoise_aniso, idct2, threshold_aniso, DctPatch, DenoiseParams};
pub use error::{Error, Result};
pub use histogram::{
    column_cumhist, gaussian_weights, global_cumhist, midway_inverse, specify, CumulativeHistogram,
    MidwayInverse, PseudoInverse, WeightVector,
};
pub use image::{GrayImage, Orientation};
pub use metrics::{rmse, rmse_ci, MetricReport};
pub use mire::{auto_s, mire_fixed_s, tv_line, MireParams, TvScore};
pub use pgm::{read_pgm, write_pgm};
pub use sim::{apply_nu, make_nu_field, NuField};
