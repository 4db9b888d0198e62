//! Locally adaptive MIRE and the full correction chain.
//!
//! Every candidate `s` produces a full MIRE image. The image is then cut
//! into overlapping square patches; at each patch location the candidate
//! with the smallest line total variation inside the patch wins, and the
//! winning patches are averaged back together.

use log::debug;

use crate::dct_denoise::{dct_denoise_aniso, DenoiseParams, DenoiseStatus, DEFAULT_PATCH_SIZE};
use crate::error::{Error, Result};
use crate::image::{GrayImage, Orientation};
use crate::mire::{auto_s, mire_candidates, tv_line_region, MireParams};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdmireParams {
    pub mire: MireParams,
    pub patch_size: usize,
    pub stride: usize,
    /// Denoising stage; `None` disables it.
    pub denoise: Option<DenoiseParams>,
}

impl Default for AdmireParams {
    fn default() -> Self {
        Self {
            mire: MireParams::default(),
            patch_size: DEFAULT_PATCH_SIZE,
            stride: DEFAULT_PATCH_SIZE / 2,
            denoise: None,
        }
    }
}

impl AdmireParams {
    pub fn validate(&self) -> Result<()> {
        self.mire.validate()?;
        if self.patch_size < 2 {
            return Err(Error::InvalidParameter(format!(
                "patch size must be >= 2, got {}",
                self.patch_size
            )));
        }
        if self.stride < 1 || self.stride > self.patch_size {
            return Err(Error::InvalidParameter(format!(
                "stride must be in 1..={}, got {}",
                self.patch_size, self.stride
            )));
        }
        if let Some(d) = &self.denoise {
            d.validate()?;
        }
        Ok(())
    }
}

/// Patch origins along one axis: multiples of `stride`, plus a final origin
/// flush with the far edge when the stride does not land there.
pub fn axis_origins(dim: usize, patch: usize, stride: usize) -> Vec<usize> {
    if dim < patch {
        return Vec::new();
    }
    let mut origins: Vec<usize> = (0..=dim - patch).step_by(stride).collect();
    if *origins.last().expect("dim >= patch") != dim - patch {
        origins.push(dim - patch);
    }
    origins
}

/// Overlapping square patch decomposition with integer accumulation
/// buffers. Sums of 8-bit values are exact, so aggregation is independent
/// of the order patches are added.
#[derive(Debug, Clone)]
pub struct PatchGrid {
    width: usize,
    height: usize,
    patch_size: usize,
    rows: Vec<usize>,
    cols: Vec<usize>,
    accum: Vec<u64>,
    weight: Vec<u32>,
}

impl PatchGrid {
    pub fn new(width: usize, height: usize, patch_size: usize, stride: usize) -> Result<Self> {
        if patch_size == 0 || stride == 0 || stride > patch_size {
            return Err(Error::InvalidParameter(format!(
                "invalid patch grid: size {patch_size}, stride {stride}"
            )));
        }
        if width < patch_size || height < patch_size {
            return Err(Error::InvalidParameter(format!(
                "{width}x{height} image is smaller than a {patch_size}x{patch_size} patch"
            )));
        }
        Ok(Self {
            width,
            height,
            patch_size,
            rows: axis_origins(height, patch_size, stride),
            cols: axis_origins(width, patch_size, stride),
            accum: vec![0; width * height],
            weight: vec![0; width * height],
        })
    }

    pub fn patch_size(&self) -> usize {
        self.patch_size
    }

    /// Top-left corners `(row, col)` in row-major order.
    pub fn origins(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.rows
            .iter()
            .flat_map(move |&r| self.cols.iter().map(move |&c| (r, c)))
    }

    pub fn origin_count(&self) -> usize {
        self.rows.len() * self.cols.len()
    }

    pub fn add_patch(&mut self, source: &GrayImage, row0: usize, col0: usize) {
        let p = self.patch_size;
        for r in row0..row0 + p {
            let src = &source.row(r)[col0..col0 + p];
            let base = r * self.width + col0;
            for (c, &v) in src.iter().enumerate() {
                self.accum[base + c] += v as u64;
                self.weight[base + c] += 1;
            }
        }
    }

    pub fn weights(&self) -> &[u32] {
        &self.weight
    }

    /// `accum / weight`, rounded half-up.
    pub fn finish(&self) -> GrayImage {
        let pixels = self
            .accum
            .iter()
            .zip(&self.weight)
            .map(|(&a, &w)| {
                assert!(w > 0, "pixel not covered by any patch");
                let w = w as u64;
                ((2 * a + w) / (2 * w)).min(255) as u8
            })
            .collect();
        GrayImage::new(self.width, self.height, pixels).expect("grid dimensions are valid")
    }
}

/// Winning candidate of one patch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PatchChoice {
    pub row: usize,
    pub col: usize,
    pub s: f64,
    /// Index into the scan set.
    pub candidate: usize,
}

#[derive(Debug, Clone)]
pub struct AdaptiveMire {
    pub image: GrayImage,
    pub scan: Vec<f64>,
    pub choices: Vec<PatchChoice>,
    /// Set when the image was too small for patches and the global search
    /// was used instead.
    pub global_s: Option<f64>,
}

impl AdaptiveMire {
    /// Number of patches that selected each scanned `s`.
    pub fn s_histogram(&self) -> Vec<(f64, usize)> {
        let mut counts = vec![0usize; self.scan.len()];
        for c in &self.choices {
            counts[c.candidate] += 1;
        }
        self.scan.iter().copied().zip(counts).collect()
    }

    pub fn all_patches_chose_zero(&self) -> bool {
        match self.global_s {
            Some(s) => s == 0.0,
            None => self.choices.iter().all(|c| c.s == 0.0),
        }
    }
}

/// Per-patch selection of the best MIRE candidate followed by averaging of
/// the overlapping winners.
pub fn adaptive_mire(img: &GrayImage, params: &AdmireParams) -> Result<AdaptiveMire> {
    params.validate()?;
    let p = params.patch_size;
    let scan = params.mire.scan_set();

    if img.width() < p || img.height() < p {
        debug!("image smaller than patch, using global s search");
        let global = auto_s(img, &params.mire)?;
        return Ok(AdaptiveMire {
            image: global.image,
            scan,
            choices: Vec::new(),
            global_s: Some(global.s),
        });
    }

    match params.mire.orientation {
        Orientation::Columns => adaptive_columns(img, params, scan),
        Orientation::Rows => {
            let mut res = adaptive_columns(&img.transpose(), params, scan)?;
            res.image = res.image.transpose();
            for c in &mut res.choices {
                std::mem::swap(&mut c.row, &mut c.col);
            }
            res.choices.sort_by_key(|a| (a.row, a.col));
            Ok(res)
        }
    }
}

fn adaptive_columns(
    img: &GrayImage,
    params: &AdmireParams,
    scan: Vec<f64>,
) -> Result<AdaptiveMire> {
    let p = params.patch_size;
    let candidates = mire_candidates(img, &scan, Orientation::Columns)?;
    let mut grid = PatchGrid::new(img.width(), img.height(), p, params.stride)?;
    let origins: Vec<(usize, usize)> = grid.origins().collect();
    let mut choices = Vec::with_capacity(origins.len());

    for (row, col) in origins {
        let mut best = 0;
        let mut best_score = tv_line_region(&candidates[0], Orientation::Columns, row, col, p, p);
        for (i, cand) in candidates.iter().enumerate().skip(1) {
            let score = tv_line_region(cand, Orientation::Columns, row, col, p, p);
            if score < best_score {
                best = i;
                best_score = score;
            }
        }
        grid.add_patch(&candidates[best], row, col);
        choices.push(PatchChoice {
            row,
            col,
            s: scan[best],
            candidate: best,
        });
    }

    Ok(AdaptiveMire {
        image: grid.finish(),
        scan,
        choices,
        global_s: None,
    })
}

#[derive(Debug, Clone)]
pub struct AdmireOutput {
    pub image: GrayImage,
    pub adaptive: AdaptiveMire,
    pub denoise_status: Option<DenoiseStatus>,
}

/// Adaptive MIRE followed, when enabled, by anisotropic DCT denoising. The
/// denoiser runs with the same stripe orientation as the equalization.
pub fn admire_pipeline(img: &GrayImage, params: &AdmireParams) -> Result<AdmireOutput> {
    let adaptive = adaptive_mire(img, params)?;
    let (image, denoise_status) = match &params.denoise {
        Some(d) => {
            let d = DenoiseParams {
                orientation: params.mire.orientation,
                ..*d
            };
            let out = dct_denoise_aniso(&adaptive.image, &d)?;
            (out.image, Some(out.status))
        }
        None => (adaptive.image.clone(), None),
    };
    Ok(AdmireOutput {
        image,
        adaptive,
        denoise_status,
    })
}
