//! Sliding midway equalization of columns (MIRE), the line total variation
//! used to score stripe severity, and the global search for the smoothing
//! parameter `s`.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::histogram::{all_column_cumhists, gaussian_weights, LEVELS};
use crate::image::{quantize, with_column_layout, GrayImage, Orientation};

/// Parameters of the `s` scan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MireParams {
    pub s_step: f64,
    pub s_max: f64,
    pub orientation: Orientation,
}

impl Default for MireParams {
    fn default() -> Self {
        Self {
            s_step: 0.5,
            s_max: 8.0,
            orientation: Orientation::Columns,
        }
    }
}

impl MireParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.s_step.is_finite() && self.s_step > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "s_step must be positive, got {}",
                self.s_step
            )));
        }
        if !(self.s_max.is_finite() && self.s_max >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "s_max must be non-negative, got {}",
                self.s_max
            )));
        }
        Ok(())
    }

    /// `0, s_step, 2 s_step, ...` up to and including `s_max`.
    pub fn scan_set(&self) -> Vec<f64> {
        let steps = (self.s_max / self.s_step + 1e-9).floor() as usize;
        (0..=steps).map(|k| k as f64 * self.s_step).collect()
    }
}

/// Discrete line total variation: sum of absolute differences between
/// neighbors taken across the stripe direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct TvScore(pub u64);

impl TvScore {
    pub fn value(self) -> u64 {
        self.0
    }
}

impl std::fmt::Display for TvScore {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Line total variation of the whole image.
///
/// For `Columns` the differences run between horizontally adjacent pixels
/// (neighboring columns); for `Rows` between vertically adjacent pixels.
pub fn tv_line(img: &GrayImage, orientation: Orientation) -> TvScore {
    match orientation {
        Orientation::Columns => tv_region_columns(img, 0, 0, img.height(), img.width()),
        Orientation::Rows => tv_region_rows(img, 0, 0, img.height(), img.width()),
    }
}

/// Line total variation restricted to differences strictly inside the
/// window `[row0, row0 + height) x [col0, col0 + width)`.
pub fn tv_line_region(
    img: &GrayImage,
    orientation: Orientation,
    row0: usize,
    col0: usize,
    height: usize,
    width: usize,
) -> TvScore {
    match orientation {
        Orientation::Columns => tv_region_columns(img, row0, col0, height, width),
        Orientation::Rows => tv_region_rows(img, row0, col0, height, width),
    }
}

fn tv_region_columns(
    img: &GrayImage,
    row0: usize,
    col0: usize,
    height: usize,
    width: usize,
) -> TvScore {
    let mut total = 0u64;
    for row in row0..row0 + height {
        let line = &img.row(row)[col0..col0 + width];
        total += line
            .windows(2)
            .map(|w| w[0].abs_diff(w[1]) as u64)
            .sum::<u64>();
    }
    TvScore(total)
}

fn tv_region_rows(
    img: &GrayImage,
    row0: usize,
    col0: usize,
    height: usize,
    width: usize,
) -> TvScore {
    let mut total = 0u64;
    for row in row0..(row0 + height).saturating_sub(1) {
        let a = &img.row(row)[col0..col0 + width];
        let b = &img.row(row + 1)[col0..col0 + width];
        total += a
            .iter()
            .zip(b)
            .map(|(x, y)| x.abs_diff(*y) as u64)
            .sum::<u64>();
    }
    TvScore(total)
}

/// Mirror index into `0..len` with the edge sample repeated:
/// `-1 -> 0`, `len -> len - 1`.
pub(crate) fn reflect(index: isize, len: usize) -> usize {
    let period = 2 * len as isize;
    let m = index.rem_euclid(period) as usize;
    if m < len {
        m
    } else {
        2 * len - 1 - m
    }
}

/// MIRE with a fixed Gaussian standard deviation `s`.
pub fn mire_fixed_s(img: &GrayImage, s: f64, orientation: Orientation) -> Result<GrayImage> {
    let weights = gaussian_weights(s)?;
    if weights.radius() == 0 {
        return Ok(img.clone());
    }
    Ok(with_column_layout(img, orientation, |img| {
        mire_columns(img, weights.as_slice())
    }))
}

fn mire_columns(img: &GrayImage, weights: &[f64]) -> GrayImage {
    let width = img.width();
    let radius = (weights.len() / 2) as isize;
    let hists = all_column_cumhists(img);
    // Every column has the same sample count, so pseudo-inverses can be
    // tabulated on the shared quantile grid c / height.
    let tables: Vec<Vec<u8>> = hists.iter().map(|h| h.quantile_table()).collect();

    let luts: Vec<[u8; LEVELS]> = (0..width)
        .into_par_iter()
        .map(|col| {
            let own = &hists[col];
            let neighbors: Vec<&[u8]> = (-radius..=radius)
                .map(|k| tables[reflect(col as isize + k, width)].as_slice())
                .collect();
            let mut lut = [0u8; LEVELS];
            for (level, slot) in lut.iter_mut().enumerate() {
                let c = own.cumulative_count(level as u8) as usize;
                let mut acc = 0.0;
                for (table, &w) in neighbors.iter().zip(weights) {
                    acc += w * table[c] as f64;
                }
                *slot = quantize(acc);
            }
            lut
        })
        .collect();

    let mut pixels = img.pixels().to_vec();
    for row in pixels.chunks_exact_mut(width) {
        for (p, lut) in row.iter_mut().zip(&luts) {
            *p = lut[*p as usize];
        }
    }
    GrayImage::new(width, img.height(), pixels).expect("dimensions unchanged")
}

/// MIRE outputs for every `s` in `scan`, in scan order.
pub fn mire_candidates(
    img: &GrayImage,
    scan: &[f64],
    orientation: Orientation,
) -> Result<Vec<GrayImage>> {
    scan.par_iter()
        .map(|&s| mire_fixed_s(img, s, orientation))
        .collect()
}

/// Result of the global `s` search.
#[derive(Debug, Clone)]
pub struct AutoS {
    pub s: f64,
    pub image: GrayImage,
    /// `(s, tv_line)` for every scanned candidate.
    pub scores: Vec<(f64, TvScore)>,
}

/// Scans `s` over [`MireParams::scan_set`] and keeps the candidate with the
/// smallest line total variation; ties go to the smaller `s`.
pub fn auto_s(img: &GrayImage, params: &MireParams) -> Result<AutoS> {
    params.validate()?;
    let scan = params.scan_set();
    let candidates = mire_candidates(img, &scan, params.orientation)?;
    let scores: Vec<(f64, TvScore)> = scan
        .iter()
        .zip(&candidates)
        .map(|(&s, c)| (s, tv_line(c, params.orientation)))
        .collect();

    let mut best = 0;
    for (i, (_, score)) in scores.iter().enumerate() {
        if *score < scores[best].1 {
            best = i;
        }
    }
    let image = candidates
        .into_iter()
        .nth(best)
        .expect("scan set always contains s = 0");
    Ok(AutoS {
        s: scan[best],
        image,
        scores,
    })
}
