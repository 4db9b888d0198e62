//! Seeded simulator of nonlinear per-column non-uniformity.
//!
//! Observation model: `o(i, j) = phi_j(u(i, j) + eta(i, j))`, with `eta`
//! an additive Gaussian stand-in for photon noise and `phi_j` a monotone
//! transfer function per column:
//!
//! `phi_j(x) = a_j x + b_j + c_j x (255 - x) / 255`
//!
//! with gain `a_j`, offset `b_j` and curvature `c_j` drawn uniformly.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::histogram::LEVELS;
use crate::image::{quantize, GrayImage};

#[derive(Debug, Clone, PartialEq)]
pub struct NuField {
    transfer: Vec<[u8; LEVELS]>,
    pub seed: u64,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl NuField {
    pub fn columns(&self) -> usize {
        self.transfer.len()
    }

    pub fn transfer(&self, col: usize) -> &[u8; LEVELS] {
        &self.transfer[col]
    }

    pub fn is_monotone(&self) -> bool {
        self.transfer
            .iter()
            .all(|t| t.windows(2).all(|w| w[0] <= w[1]))
    }
}

fn symmetric(rng: &mut ChaCha8Rng, half_width: f64) -> f64 {
    half_width * (2.0 * rng.gen::<f64>() - 1.0)
}

/// Draws one transfer function per column. Gains lie in `(1 - alpha, 1 + alpha)`,
/// offsets in `(-beta, beta)`, curvatures in `(-gamma, gamma)`.
pub fn make_nu_field(
    columns: usize,
    seed: u64,
    alpha: f64,
    beta: f64,
    gamma: f64,
) -> Result<NuField> {
    for (name, v) in [("alpha", alpha), ("beta", beta), ("gamma", gamma)] {
        if !v.is_finite() || v < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "{name} must be finite and non-negative, got {v}"
            )));
        }
    }
    if alpha >= 1.0 {
        return Err(Error::InvalidParameter(format!(
            "alpha must be below 1 to keep gains positive, got {alpha}"
        )));
    }
    if columns == 0 {
        return Err(Error::InvalidParameter(
            "field needs at least one column".into(),
        ));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut transfer = Vec::with_capacity(columns);
    for col in 0..columns {
        let gain = 1.0 + symmetric(&mut rng, alpha);
        let offset = symmetric(&mut rng, beta);
        let curvature = symmetric(&mut rng, gamma);
        let mut table = [0u8; LEVELS];
        let mut running = 0u8;
        for (x, slot) in table.iter_mut().enumerate() {
            let xf = x as f64;
            let v = quantize(
                gain * xf + offset + curvature * 4.0 * xf * (255.0 - xf) / (255.0 * 255.0),
            );
            // cumulative max keeps the map non-decreasing
            running = if x == 0 { v } else { running.max(v) };
            *slot = running;
        }
        if table[0] == table[LEVELS - 1] {
            return Err(Error::DegenerateTransfer(col));
        }
        transfer.push(table);
    }
    Ok(NuField {
        transfer,
        seed,
        alpha,
        beta,
        gamma,
    })
}

/// Corrupts `img`: Gaussian noise of standard deviation `noise_sigma` is
/// added and clamped first, then each column goes through its transfer
/// function.
pub fn apply_nu(
    img: &GrayImage,
    field: &NuField,
    noise_sigma: f64,
    seed: u64,
) -> Result<GrayImage> {
    if field.columns() != img.width() {
        return Err(Error::FieldColumnMismatch {
            field: field.columns(),
            image: img.width(),
        });
    }
    if !noise_sigma.is_finite() || noise_sigma < 0.0 {
        return Err(Error::NegativeSigma(noise_sigma));
    }
    let w = img.width();
    let mut pixels = Vec::with_capacity(img.pixels().len());
    if noise_sigma == 0.0 {
        for (idx, &p) in img.pixels().iter().enumerate() {
            pixels.push(field.transfer[idx % w][p as usize]);
        }
    } else {
        let normal = Normal::new(0.0, noise_sigma).expect("sigma validated");
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for (idx, &p) in img.pixels().iter().enumerate() {
            let noisy = quantize(p as f64 + normal.sample(&mut rng));
            pixels.push(field.transfer[idx % w][noisy as usize]);
        }
    }
    GrayImage::new(w, img.height(), pixels)
}

/// Adds clamped Gaussian noise with no transfer function.
pub fn add_gaussian_noise(img: &GrayImage, sigma: f64, seed: u64) -> Result<GrayImage> {
    let identity = make_nu_field(img.width(), 0, 0.0, 0.0, 0.0)?;
    apply_nu(img, &identity, sigma, seed)
}
