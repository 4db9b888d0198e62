//! Total-variation column-offset baseline.
//!
//! Each column receives one additive integer constant. Walking left to
//! right, the offset between neighboring columns is the integer that
//! minimizes the L1 difference between them; offsets accumulate, and a
//! final global constant restores the input mean.

use crate::image::{with_column_layout, GrayImage, Orientation};

pub const DELTA_RANGE: i32 = 255;

/// Per-column additive corrections.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OffsetVector {
    /// `delta[j]` is the step between column `j` and column `j + 1`.
    pub deltas: Vec<i32>,
    /// Cumulative offsets before the mean shift, `k[0] = 0`.
    pub cumulative: Vec<i32>,
    pub mean_shift: i32,
}

impl OffsetVector {
    /// Total offset applied to column `j`.
    pub fn offset(&self, j: usize) -> i32 {
        self.cumulative[j] + self.mean_shift
    }
}

#[derive(Debug, Clone)]
pub struct BaselineResult {
    pub image: GrayImage,
    pub offsets: OffsetVector,
    /// Pixels that left `[0, 255]` and were clamped.
    pub clipped: usize,
}

/// Sum over rows of `|right + delta - left|`.
pub fn l1_cost(left: &[u8], right: &[u8], delta: i32) -> u64 {
    left.iter()
        .zip(right)
        .map(|(&l, &r)| (r as i32 + delta - l as i32).unsigned_abs() as u64)
        .sum()
}

/// Exhaustive scan of `delta` in `[-255, 255]`. Ties go to the smallest
/// `|delta|`, then to the negative value.
pub fn best_delta(left: &[u8], right: &[u8]) -> i32 {
    let mut best = 0;
    let mut best_cost = l1_cost(left, right, 0);
    for mag in 1..=DELTA_RANGE {
        for delta in [-mag, mag] {
            let cost = l1_cost(left, right, delta);
            if cost < best_cost {
                best = delta;
                best_cost = cost;
            }
        }
    }
    best
}

fn baseline_columns(img: &GrayImage) -> (GrayImage, OffsetVector, usize) {
    let (w, h) = (img.width(), img.height());
    let columns: Vec<Vec<u8>> = (0..w).map(|j| img.column(j).expect("in range")).collect();

    let deltas: Vec<i32> = columns
        .windows(2)
        .map(|pair| best_delta(&pair[0], &pair[1]))
        .collect();
    let mut cumulative = Vec::with_capacity(w);
    cumulative.push(0);
    for d in &deltas {
        let last = *cumulative.last().expect("non-empty");
        cumulative.push(last + d);
    }

    // mean(output) = mean(input) + mean(k) + shift
    let mean_k = cumulative.iter().map(|&k| k as f64).sum::<f64>() / w as f64;
    let mean_shift = (-mean_k).round() as i32;

    let mut clipped = 0usize;
    let mut pixels = Vec::with_capacity(w * h);
    for r in 0..h {
        for (j, k) in cumulative.iter().enumerate() {
            let v = img.get(r, j) as i32 + k + mean_shift;
            if !(0..=255).contains(&v) {
                clipped += 1;
            }
            pixels.push(v.clamp(0, 255) as u8);
        }
    }
    let image = GrayImage::new(w, h, pixels).expect("dimensions unchanged");
    (
        image,
        OffsetVector {
            deltas,
            cumulative,
            mean_shift,
        },
        clipped,
    )
}

/// Column-offset total-variation destriping. Images with fewer than two
/// columns (in the stripe layout) are returned unchanged.
pub fn tv_baseline(img: &GrayImage, orientation: Orientation) -> BaselineResult {
    let mut result = None;
    let image = with_column_layout(img, orientation, |img| {
        if img.width() < 2 {
            result = Some((
                OffsetVector {
                    deltas: Vec::new(),
                    cumulative: vec![0; img.width()],
                    mean_shift: 0,
                },
                0,
            ));
            return img.clone();
        }
        let (image, offsets, clipped) = baseline_columns(img);
        result = Some((offsets, clipped));
        image
    });
    let (offsets, clipped) = result.expect("closure always runs");
    BaselineResult {
        image,
        offsets,
        clipped,
    }
}
