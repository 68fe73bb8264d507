//! Hand-crafted features from image regions: replicated-boundary patch
//! sampling, gradient-orientation histograms, an optional grayscale
//! channel, and cosine windowing.
//!
//! Gradient and block-normalization indexing is circular, matching the
//! periodic extension the correlation model assumes; the cosine window
//! suppresses whatever wraps.

use std::f64::consts::PI;
use std::path::Path;

use crate::error::{Error, Result};
use crate::grid::{MultiChannel, RealGrid};

/// Luminance weights for RGB input.
const LUMA_R: f64 = 0.299;
const LUMA_G: f64 = 0.587;
const LUMA_B: f64 = 0.114;

/// Additive epsilon inside every normalization square root.
const NORM_EPS: f64 = 1e-6;

/// Truncation threshold applied after block normalization.
const HOG_TRUNCATE: f64 = 0.2;

/// 8-bit raster image, grayscale or RGB, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Image {
    width: usize,
    height: usize,
    channels: usize,
    data: Vec<u8>,
}

impl Image {
    /// Grayscale image from raw samples.
    pub fn gray(width: usize, height: usize, data: Vec<u8>) -> Self {
        assert_eq!(data.len(), width * height);
        Self {
            width,
            height,
            channels: 1,
            data,
        }
    }

    /// RGB image from interleaved samples.
    pub fn rgb(width: usize, height: usize, data: Vec<u8>) -> Self {
        assert_eq!(data.len(), width * height * 3);
        Self {
            width,
            height,
            channels: 3,
            data,
        }
    }

    /// Decode a PNG or JPEG file. Grayscale stays single-channel; anything
    /// else is converted to RGB.
    pub fn load(path: &Path) -> Result<Self> {
        let decoded = image::open(path).map_err(|source| Error::ImageDecode {
            path: path.to_path_buf(),
            source,
        })?;
        Ok(match decoded {
            image::DynamicImage::ImageLuma8(g) => {
                let (w, h) = g.dimensions();
                Image::gray(w as usize, h as usize, g.into_raw())
            }
            other => {
                let rgb = other.to_rgb8();
                let (w, h) = rgb.dimensions();
                Image::rgb(w as usize, h as usize, rgb.into_raw())
            }
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn data(&self) -> &[u8] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [u8] {
        &mut self.data
    }

    #[inline]
    fn sample(&self, r: usize, c: usize, ch: usize) -> u8 {
        self.data[(r * self.width + c) * self.channels + ch]
    }

    /// Luminance at integer coordinates.
    #[inline]
    pub fn luminance(&self, r: usize, c: usize) -> f64 {
        if self.channels == 1 {
            self.sample(r, c, 0) as f64
        } else {
            LUMA_R * self.sample(r, c, 0) as f64
                + LUMA_G * self.sample(r, c, 1) as f64
                + LUMA_B * self.sample(r, c, 2) as f64
        }
    }

    /// Bilinear sample of one channel at real coordinates, with
    /// coordinates clamped to the image (replication padding).
    fn bilinear(&self, x: f64, y: f64, ch: usize) -> f64 {
        let x = x.clamp(0.0, (self.width - 1) as f64);
        let y = y.clamp(0.0, (self.height - 1) as f64);
        let x0 = x.floor() as usize;
        let y0 = y.floor() as usize;
        let x1 = (x0 + 1).min(self.width - 1);
        let y1 = (y0 + 1).min(self.height - 1);
        let fx = x - x0 as f64;
        let fy = y - y0 as f64;
        let top = (1.0 - fx) * self.sample(y0, x0, ch) as f64 + fx * self.sample(y0, x1, ch) as f64;
        let bot = (1.0 - fx) * self.sample(y1, x0, ch) as f64 + fx * self.sample(y1, x1, ch) as f64;
        (1.0 - fy) * top + fy * bot
    }
}

/// Axis-aligned region in real pixel coordinates (pixel centers sit at
/// integers).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Region {
    pub cx: f64,
    pub cy: f64,
    pub width: f64,
    pub height: f64,
}

impl Region {
    pub fn new(cx: f64, cy: f64, width: f64, height: f64) -> Self {
        assert!(width > 0.0 && height > 0.0, "region must have positive size");
        Self {
            cx,
            cy,
            width,
            height,
        }
    }

    /// Uniformly scaled copy, same center.
    pub fn scaled(&self, factor: f64) -> Self {
        Self::new(self.cx, self.cy, self.width * factor, self.height * factor)
    }
}

/// Windowing applied to feature channels.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WindowKind {
    Cosine,
    None,
}

/// Feature extraction knobs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeatureConfig {
    /// Pixels per feature cell.
    pub cell_size: usize,
    /// Gradient orientation bins over [0, pi).
    pub orientation_bins: usize,
    /// Append a per-cell mean-luminance channel.
    pub include_gray: bool,
    /// Window applied after extraction.
    pub window: WindowKind,
}

impl Default for FeatureConfig {
    fn default() -> Self {
        Self {
            cell_size: 4,
            orientation_bins: 9,
            include_gray: true,
            window: WindowKind::Cosine,
        }
    }
}

impl FeatureConfig {
    pub fn validate(&self) -> Result<()> {
        if self.cell_size < 1 {
            return Err(Error::Config("cell_size must be >= 1".into()));
        }
        if self.orientation_bins < 2 {
            return Err(Error::Config("orientation_bins must be >= 2".into()));
        }
        Ok(())
    }

    /// Total feature channels produced.
    pub fn num_channels(&self) -> usize {
        self.orientation_bins + usize::from(self.include_gray)
    }
}

/// Square search region around a target: same center, side `sqrt(5 W H)`.
pub fn search_region(target: &Region) -> Region {
    let side = (5.0 * target.width * target.height).sqrt();
    Region::new(target.cx, target.cy, side, side)
}

/// Resample a region to `out_w x out_h` via bilinear interpolation with
/// replication padding outside the image.
pub fn sample_patch(img: &Image, region: &Region, out_w: usize, out_h: usize) -> Result<Image> {
    if region.width.round() == 0.0 || region.height.round() == 0.0 {
        return Err(Error::EmptyRegion(format!(
            "region {:.2}x{:.2} rounds to zero area",
            region.width, region.height
        )));
    }
    if out_w == 0 || out_h == 0 {
        return Err(Error::EmptyRegion("output size must be positive".into()));
    }

    let channels = img.channels;
    let mut data = vec![0u8; out_w * out_h * channels];
    let left = region.cx - region.width / 2.0;
    let top = region.cy - region.height / 2.0;
    let sx_step = region.width / out_w as f64;
    let sy_step = region.height / out_h as f64;
    for v in 0..out_h {
        let sy = top + (v as f64 + 0.5) * sy_step;
        for u in 0..out_w {
            let sx = left + (u as f64 + 0.5) * sx_step;
            for ch in 0..channels {
                let value = img.bilinear(sx, sy, ch).clamp(0.0, 255.0).round() as u8;
                data[(v * out_w + u) * channels + ch] = value;
            }
        }
    }
    Ok(Image {
        width: out_w,
        height: out_h,
        channels,
        data,
    })
}

/// Per-cell gradient-orientation histograms plus an optional grayscale
/// channel.
///
/// Gradients come from centered differences on the luminance plane with
/// circular indexing; orientations are binned over [0, pi) with linear
/// interpolation between adjacent bins; histograms are normalized by the
/// surrounding 2x2-cell block energy, truncated at 0.2, and renormalized
/// per cell. The grayscale channel is per-cell mean luminance scaled to
/// [-0.5, 0.5].
pub fn extract_hog(patch: &Image, cfg: &FeatureConfig) -> Result<MultiChannel<RealGrid>> {
    cfg.validate()?;
    let cell = cfg.cell_size;
    if patch.width % cell != 0 || patch.height % cell != 0 {
        return Err(Error::DimNotDivisible {
            width: patch.width,
            height: patch.height,
            cell,
        });
    }
    let (w, h) = (patch.width, patch.height);
    let (cells_r, cells_c) = (h / cell, w / cell);
    let bins = cfg.orientation_bins;

    let luma: Vec<f64> = (0..h)
        .flat_map(|r| (0..w).map(move |c| (r, c)))
        .map(|(r, c)| patch.luminance(r, c))
        .collect();

    // Raw magnitude-weighted orientation histograms per cell.
    let mut hist = vec![0.0_f64; cells_r * cells_c * bins];
    let mut luma_sum = vec![0.0_f64; cells_r * cells_c];
    for r in 0..h {
        for c in 0..w {
            let gx = (luma[r * w + (c + 1) % w] - luma[r * w + (c + w - 1) % w]) / 2.0;
            let gy = (luma[((r + 1) % h) * w + c] - luma[((r + h - 1) % h) * w + c]) / 2.0;
            let mag = gx.hypot(gy);
            let cell_idx = (r / cell) * cells_c + c / cell;
            luma_sum[cell_idx] += luma[r * w + c];
            if mag > 0.0 {
                let mut theta = gy.atan2(gx);
                if theta < 0.0 {
                    theta += PI;
                }
                if theta >= PI {
                    theta -= PI;
                }
                let pos = theta / PI * bins as f64;
                let k0 = (pos.floor() as usize).min(bins - 1);
                let frac = pos - k0 as f64;
                let base = cell_idx * bins;
                hist[base + k0] += mag * (1.0 - frac);
                hist[base + (k0 + 1) % bins] += mag * frac;
            }
        }
    }

    // Block energies over circular 2x2 cell neighborhoods. Block (i, j)
    // covers cells {i, i+1} x {j, j+1} with wrap-around.
    let cell_energy: Vec<f64> = (0..cells_r * cells_c)
        .map(|idx| hist[idx * bins..(idx + 1) * bins].iter().map(|v| v * v).sum())
        .collect();
    let block_energy = |i: usize, j: usize| -> f64 {
        let i1 = (i + 1) % cells_r;
        let j1 = (j + 1) % cells_c;
        cell_energy[i * cells_c + j]
            + cell_energy[i * cells_c + j1]
            + cell_energy[i1 * cells_c + j]
            + cell_energy[i1 * cells_c + j1]
    };

    let mut channels: Vec<RealGrid> = (0..cfg.num_channels())
        .map(|_| RealGrid::zeros(cells_r, cells_c))
        .collect();
    let mut truncated = vec![0.0_f64; bins];
    for i in 0..cells_r {
        for j in 0..cells_c {
            let im1 = (i + cells_r - 1) % cells_r;
            let jm1 = (j + cells_c - 1) % cells_c;
            let mean_energy = 0.25
                * (block_energy(im1, jm1)
                    + block_energy(im1, j)
                    + block_energy(i, jm1)
                    + block_energy(i, j));
            let norm = (mean_energy + NORM_EPS * NORM_EPS).sqrt();
            let base = (i * cells_c + j) * bins;
            let mut tsq = 0.0;
            for b in 0..bins {
                let t = (hist[base + b] / norm).min(HOG_TRUNCATE);
                truncated[b] = t;
                tsq += t * t;
            }
            let renorm = (tsq + NORM_EPS * NORM_EPS).sqrt();
            for b in 0..bins {
                channels[b].set(i, j, truncated[b] / renorm);
            }
            if cfg.include_gray {
                let mean_luma = luma_sum[i * cells_c + j] / (cell * cell) as f64;
                channels[bins].set(i, j, mean_luma / 255.0 - 0.5);
            }
        }
    }

    Ok(MultiChannel::new(channels))
}

/// Separable Hann taper: `w(i, j) = 0.25 (1 - cos(2 pi i / (M-1))) (1 - cos(2 pi j / (N-1)))`,
/// with a unit factor along any singleton dimension.
pub fn cosine_window(features: &MultiChannel<RealGrid>) -> MultiChannel<RealGrid> {
    let (m, n) = (features.rows(), features.cols());
    let axis = |len: usize| -> Vec<f64> {
        (0..len)
            .map(|i| {
                if len == 1 {
                    1.0
                } else {
                    0.5 * (1.0 - (2.0 * PI * i as f64 / (len - 1) as f64).cos())
                }
            })
            .collect()
    };
    let wr = axis(m);
    let wc = axis(n);
    features.map(|ch| RealGrid::from_fn(m, n, |r, c| ch.at(r, c) * wr[r] * wc[c]))
}

/// Apply the configured window.
pub fn apply_window(features: MultiChannel<RealGrid>, kind: WindowKind) -> MultiChannel<RealGrid> {
    match kind {
        WindowKind::Cosine => cosine_window(&features),
        WindowKind::None => features,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_gray(rng: &mut impl Rng, w: usize, h: usize) -> Image {
        Image::gray(w, h, (0..w * h).map(|_| rng.gen()).collect())
    }

    #[test]
    fn sample_patch_identity_copy() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let img = random_gray(&mut rng, 4, 4);
        let region = Region::new(1.5, 1.5, 4.0, 4.0);
        let out = sample_patch(&img, &region, 4, 4).unwrap();
        assert_eq!(out, img);
    }

    #[test]
    fn sample_patch_outside_clamps_to_corner() {
        let mut rng = ChaCha8Rng::seed_from_u64(32);
        let img = random_gray(&mut rng, 4, 4);
        let region = Region::new(100.0, 100.0, 2.0, 2.0);
        let out = sample_patch(&img, &region, 3, 3).unwrap();
        let corner = img.data()[15];
        assert!(out.data().iter().all(|&v| v == corner));
    }

    #[test]
    fn sample_patch_bilinear_upsample_hand_values() {
        // 2x2 checkerboard upsampled 2x: samples land at -0.25, 0.25,
        // 0.75, 1.25 in source coordinates (clamped at the borders).
        let img = Image::gray(2, 2, vec![0, 255, 255, 0]);
        let region = Region::new(0.5, 0.5, 2.0, 2.0);
        let out = sample_patch(&img, &region, 4, 4).unwrap();
        let value = |x: f64, y: f64| -> u8 {
            let x = x.clamp(0.0, 1.0);
            let y = y.clamp(0.0, 1.0);
            let p = |r: usize, c: usize| -> f64 { img.data()[r * 2 + c] as f64 };
            let top = (1.0 - x) * p(0, 0) + x * p(0, 1);
            let bot = (1.0 - x) * p(1, 0) + x * p(1, 1);
            ((1.0 - y) * top + y * bot).round() as u8
        };
        for v in 0..4 {
            for u in 0..4 {
                let expect = value(-0.25 + 0.5 * u as f64, -0.25 + 0.5 * v as f64);
                assert_eq!(out.data()[v * 4 + u], expect, "pixel ({u},{v})");
            }
        }
        // Spot check an interior bilinear value: 0.75*0.75*0 + ... = 95.625.
        assert_eq!(out.data()[1 * 4 + 1], 96);
    }

    #[test]
    fn sample_patch_rejects_vanishing_region() {
        let img = Image::gray(4, 4, vec![0; 16]);
        let region = Region::new(1.0, 1.0, 0.3, 2.0);
        assert!(matches!(
            sample_patch(&img, &region, 2, 2),
            Err(Error::EmptyRegion(_))
        ));
    }

    #[test]
    fn search_region_side_lengths() {
        let side = |w: f64, h: f64| search_region(&Region::new(0.0, 0.0, w, h)).width;
        assert!((side(20.0, 20.0) - 2000.0_f64.sqrt()).abs() < 1e-12);
        assert!((side(5.0, 80.0) - 2000.0_f64.sqrt()).abs() < 1e-12);
        assert!((side(1.0, 1.0) - 5.0_f64.sqrt()).abs() < 1e-12);
        let r = search_region(&Region::new(3.0, 7.0, 10.0, 20.0));
        assert_eq!((r.cx, r.cy), (3.0, 7.0));
        assert_eq!(r.width, r.height);
    }

    #[test]
    fn hog_constant_patch_has_zero_gradient_channels() {
        let cfg = FeatureConfig::default();
        let img = Image::gray(8, 8, vec![137; 64]);
        let feats = extract_hog(&img, &cfg).unwrap();
        for b in 0..cfg.orientation_bins {
            assert!(feats.channel(b).data().iter().all(|&v| v == 0.0));
        }
        let gray = feats.channel(cfg.orientation_bins);
        for &v in gray.data() {
            assert!((v - (137.0 / 255.0 - 0.5)).abs() < 1e-12);
        }
    }

    #[test]
    fn hog_vertical_edge_concentrates_in_first_bin() {
        let cfg = FeatureConfig {
            cell_size: 4,
            orientation_bins: 9,
            include_gray: false,
            window: WindowKind::None,
        };
        let img = Image::gray(
            16,
            16,
            (0..256)
                .map(|i| if i % 16 < 8 { 0 } else { 200 })
                .collect(),
        );
        let feats = extract_hog(&img, &cfg).unwrap();
        // All orientation mass in bin 0 (horizontal gradients).
        for b in 1..9 {
            assert!(feats.channel(b).data().iter().all(|&v| v == 0.0), "bin {b}");
        }
        let bin0 = feats.channel(0);
        assert!(bin0.data().iter().any(|&v| v > 0.0));
        // Uniform along the edge: every row of cells is identical.
        for r in 1..4 {
            for c in 0..4 {
                assert!((bin0.at(r, c) - bin0.at(0, c)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn hog_rotation_permutes_orientation_channels() {
        // 90-degree rotation shifts unsigned orientations by half the bin
        // count; use an even bin count so the shift is integral.
        let cfg = FeatureConfig {
            cell_size: 2,
            orientation_bins: 8,
            include_gray: true,
            window: WindowKind::None,
        };
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        let n = 8;
        let img = random_gray(&mut rng, n, n);
        let rotated = Image::gray(
            n,
            n,
            (0..n * n)
                .map(|idx| {
                    let (r, c) = (idx / n, idx % n);
                    img.data()[c * n + (n - 1 - r)]
                })
                .collect(),
        );

        let feats = extract_hog(&img, &cfg).unwrap();
        let feats_rot = extract_hog(&rotated, &cfg).unwrap();
        let cells = n / 2;
        let half = cfg.orientation_bins / 2;
        for b in 0..cfg.num_channels() {
            // Gray channel keeps its identity; orientation bins shift.
            let b_rot = if b < cfg.orientation_bins {
                (b + half) % cfg.orientation_bins
            } else {
                b
            };
            for r in 0..cells {
                for c in 0..cells {
                    let expect = feats.channel(b).at(c, cells - 1 - r);
                    let got = feats_rot.channel(b_rot).at(r, c);
                    assert!(
                        (got - expect).abs() < 1e-10,
                        "channel {b} cell ({r},{c}): {got} vs {expect}"
                    );
                }
            }
        }
    }

    #[test]
    fn hog_translation_covariant_on_wrapped_patches() {
        let cfg = FeatureConfig::default();
        let mut rng = ChaCha8Rng::seed_from_u64(34);
        let n = 16;
        let img = random_gray(&mut rng, n, n);
        let cell = cfg.cell_size;
        // Cyclic shift down by one cell.
        let shifted = Image::gray(
            n,
            n,
            (0..n * n)
                .map(|idx| {
                    let (r, c) = (idx / n, idx % n);
                    img.data()[((r + n - cell) % n) * n + c]
                })
                .collect(),
        );
        let feats = extract_hog(&img, &cfg).unwrap();
        let feats_shift = extract_hog(&shifted, &cfg).unwrap();
        let cells = n / cell;
        for b in 0..cfg.num_channels() {
            for r in 0..cells {
                for c in 0..cells {
                    let expect = feats.channel(b).at((r + cells - 1) % cells, c);
                    let got = feats_shift.channel(b).at(r, c);
                    assert!((got - expect).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn hog_values_stay_in_range() {
        let mut rng = ChaCha8Rng::seed_from_u64(35);
        let cfg = FeatureConfig::default();
        for _ in 0..10 {
            let img = random_gray(&mut rng, 16, 16);
            let feats = extract_hog(&img, &cfg).unwrap();
            for b in 0..cfg.orientation_bins {
                assert!(feats
                    .channel(b)
                    .data()
                    .iter()
                    .all(|&v| (0.0..=1.0).contains(&v)));
            }
            assert!(feats
                .channel(cfg.orientation_bins)
                .data()
                .iter()
                .all(|&v| (-0.5..=0.5).contains(&v)));
        }
    }

    #[test]
    fn hog_rejects_indivisible_dims() {
        let cfg = FeatureConfig::default();
        let img = Image::gray(10, 8, vec![0; 80]);
        assert!(matches!(
            extract_hog(&img, &cfg),
            Err(Error::DimNotDivisible { .. })
        ));
    }

    #[test]
    fn cosine_window_boundary_and_peak() {
        let ones = MultiChannel::new(vec![RealGrid::filled(5, 5, 1.0)]);
        let windowed = cosine_window(&ones);
        let g = windowed.channel(0);
        for i in 0..5 {
            assert_eq!(g.at(0, i), 0.0);
            assert_eq!(g.at(4, i), 0.0);
            assert_eq!(g.at(i, 0), 0.0);
            assert_eq!(g.at(i, 4), 0.0);
        }
        assert!((g.at(2, 2) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn cosine_window_twice_is_squared_mask() {
        let mut rng = ChaCha8Rng::seed_from_u64(36);
        let feats = MultiChannel::new(vec![RealGrid::from_fn(6, 7, |_, _| {
            rng.gen_range(-1.0..1.0)
        })]);
        let once = cosine_window(&feats);
        let twice = cosine_window(&once);
        let ones = MultiChannel::new(vec![RealGrid::filled(6, 7, 1.0)]);
        let mask = cosine_window(&ones);
        for r in 0..6 {
            for c in 0..7 {
                let expect = feats.channel(0).at(r, c) * mask.channel(0).at(r, c).powi(2);
                assert!((twice.channel(0).at(r, c) - expect).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn cosine_window_singleton_axis_is_unit() {
        let row = MultiChannel::new(vec![RealGrid::filled(1, 5, 2.0)]);
        let windowed = cosine_window(&row);
        assert_eq!(windowed.channel(0).at(0, 2), 2.0);
        assert_eq!(windowed.channel(0).at(0, 0), 0.0);
    }
}
