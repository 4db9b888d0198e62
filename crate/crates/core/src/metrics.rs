//! Plain and contrast-invariant root-mean-squared error.
//!
//! The contrast-invariant variant first specifies both images onto their
//! common midway histogram, so two images related by a monotone contrast
//! change are at distance (close to) zero.

use crate::error::Result;
use crate::histogram::{global_cumhist, specification_lut, MidwayInverse};
use crate::image::{GrayImage, Orientation};
use crate::mire::{tv_line, TvScore};

pub fn rmse(u: &GrayImage, v: &GrayImage) -> Result<f64> {
    u.same_dimensions(v)?;
    let sum: f64 = u
        .pixels()
        .iter()
        .zip(v.pixels())
        .map(|(&a, &b)| {
            let d = a as f64 - b as f64;
            d * d
        })
        .sum();
    Ok((sum / u.pixels().len() as f64).sqrt())
}

/// Both images specified onto their equal-weight midway histogram.
pub fn midway_pair(u: &GrayImage, v: &GrayImage) -> Result<(GrayImage, GrayImage)> {
    u.same_dimensions(v)?;
    let hu = global_cumhist(u);
    let hv = global_cumhist(v);
    let mid = MidwayInverse::with_weights(vec![&hu, &hv], &[0.5, 0.5])?;
    let lut_u = specification_lut(&hu, &mid)?;
    let lut_v = specification_lut(&hv, &mid)?;
    Ok((u.map(|p| lut_u[p as usize]), v.map(|p| lut_v[p as usize])))
}

pub fn rmse_ci(u: &GrayImage, v: &GrayImage) -> Result<f64> {
    let (um, vm) = midway_pair(u, v)?;
    rmse(&um, &vm)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricReport {
    pub rmse: f64,
    pub rmse_ci: f64,
    pub tv_before: TvScore,
    pub tv_after: TvScore,
}

impl MetricReport {
    /// Errors of `output` against `truth`; line TV of `input` and `output`.
    pub fn compute(
        truth: &GrayImage,
        input: &GrayImage,
        output: &GrayImage,
        orientation: Orientation,
    ) -> Result<Self> {
        input.same_dimensions(output)?;
        Ok(Self {
            rmse: rmse(truth, output)?,
            rmse_ci: rmse_ci(truth, output)?,
            tv_before: tv_line(input, orientation),
            tv_after: tv_line(output, orientation),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    fn scene() -> GrayImage {
        GrayImage::from_fn(32, 24, |r, c| {
            (10 + (r * 7 + c * 5 + (r * c) % 11) % 230) as u8
        })
        .unwrap()
    }

    #[test]
    fn rmse_examples() {
        let u = scene();
        assert_eq!(rmse(&u, &u).unwrap(), 0.0);
        let shifted = u.map(|p| p + 10);
        assert_eq!(rmse(&u, &shifted).unwrap(), 10.0);
        let a = GrayImage::new(2, 1, vec![0, 0]).unwrap();
        let b = GrayImage::new(2, 1, vec![3, 4]).unwrap();
        assert!((rmse(&a, &b).unwrap() - 12.5f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn dimension_mismatch() {
        let a = GrayImage::filled(2, 3, 0).unwrap();
        let b = GrayImage::filled(3, 2, 0).unwrap();
        assert!(matches!(rmse(&a, &b), Err(Error::DimensionMismatch { .. })));
        assert!(rmse_ci(&a, &b).is_err());
    }

    #[test]
    fn contrast_invariance_under_shift() {
        let u = scene();
        for c in [1u8, 7, 10] {
            let v = u.map(|p| p + c);
            assert_eq!(rmse_ci(&u, &v).unwrap(), 0.0, "shift {c}");
        }
        assert_eq!(rmse_ci(&u, &u).unwrap(), 0.0);
    }

    #[test]
    fn contrast_invariance_under_gamma() {
        let u = scene();
        let v = u.map(|p| (255.0 * (p as f64 / 255.0).powf(0.6)).round() as u8);
        assert!(rmse_ci(&u, &v).unwrap() <= 0.5);
    }

    #[test]
    fn symmetric_bit_exact() {
        let u = scene();
        let v = GrayImage::from_fn(32, 24, |r, c| ((r * 13 + c * 3) % 256) as u8).unwrap();
        assert_eq!(rmse_ci(&u, &v).unwrap(), rmse_ci(&v, &u).unwrap());
    }

    #[test]
    fn report_fields() {
        let u = scene();
        let v = u.map(|p| p.saturating_add(3));
        let r = MetricReport::compute(&u, &u, &v, Orientation::Columns).unwrap();
        assert_eq!(r.rmse, 3.0);
        assert_eq!(r.rmse_ci, 0.0);
        assert_eq!(r.tv_before, tv_line(&u, Orientation::Columns));
    }
}
