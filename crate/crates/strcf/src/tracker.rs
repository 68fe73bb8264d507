//! Per-frame tracking pipeline: initialize on the first frame, then for
//! each subsequent frame detect translation and scale, move the state, and
//! relearn the filter.
//!
//! Geometry conventions: the search region is a square of side
//! `sqrt(5 W H)` scaled by the cumulative scale factor, resampled to a
//! fixed patch size, so the target always occupies the same number of
//! feature cells regardless of its size in the image.

use std::io::{Read, Write};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::features::{
    apply_window, extract_hog, sample_patch, search_region, FeatureConfig, Image, Region,
    WindowKind,
};
use crate::grid::{cross_spectrum, dft2, idft2, MultiChannel, RealGrid};
use crate::solver::{learn, linear_interp_update, AdmmParams, FilterState, SpatialWeight};

/// Gaussian label bandwidth as a fraction of the target's cell-space side.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LabelConfig {
    pub sigma_factor: f64,
}

impl Default for LabelConfig {
    fn default() -> Self {
        Self {
            sigma_factor: 1.0 / 16.0,
        }
    }
}

/// Scale pyramid configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaleConfig {
    /// Candidate scale count; odd so the identity scale is included.
    pub num_scales: usize,
    /// Ratio between adjacent candidate scales.
    pub scale_step: f64,
    /// Damping of the applied scale change, in [0, 1]; 0 applies the full
    /// step, 1 freezes the scale.
    pub scale_lr: f64,
    /// Response penalty per scale-index step away from identity.
    pub penalty_eps: f64,
}

impl Default for ScaleConfig {
    fn default() -> Self {
        Self {
            num_scales: 5,
            scale_step: 1.01,
            scale_lr: 0.025,
            penalty_eps: 0.005,
        }
    }
}

/// Model update rule used by [`TrackerState::step`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UpdateMode {
    /// Relearn with the temporal proximity term anchored at the previous
    /// filter.
    TemporalRegularized,
    /// Learn an unanchored filter and blend it into the model by linear
    /// interpolation (ablation mode).
    LinearInterpolation,
}

/// All tracker tunables.
#[derive(Debug, Clone, PartialEq)]
pub struct TrackerParams {
    pub features: FeatureConfig,
    /// Side of the resampled search patch in pixels.
    pub patch_size: usize,
    pub label: LabelConfig,
    /// Spatial weight floor over the target region.
    pub weight_min: f64,
    /// Quadratic growth factor of the spatial weight outside the target.
    pub weight_alpha: f64,
    pub admm: AdmmParams,
    pub scale: ScaleConfig,
    /// Learning rate of the linear-interpolation ablation update.
    pub interp_eta: f64,
}

impl Default for TrackerParams {
    fn default() -> Self {
        Self {
            features: FeatureConfig::default(),
            patch_size: 200,
            label: LabelConfig::default(),
            weight_min: 0.1,
            weight_alpha: 3.0,
            admm: AdmmParams::default(),
            scale: ScaleConfig::default(),
            interp_eta: 0.025,
        }
    }
}

impl TrackerParams {
    pub fn validate(&self) -> Result<()> {
        self.features.validate()?;
        self.admm.validate()?;
        if self.patch_size == 0 || self.patch_size % self.features.cell_size != 0 {
            return Err(Error::Config(format!(
                "patch_size {} must be a positive multiple of cell_size {}",
                self.patch_size, self.features.cell_size
            )));
        }
        if !(self.label.sigma_factor > 0.0) {
            return Err(Error::Config("sigma_factor must be > 0".into()));
        }
        if !(self.weight_min >= 0.0) || !(self.weight_alpha >= 0.0) {
            return Err(Error::Config(
                "weight_min and weight_alpha must be >= 0".into(),
            ));
        }
        if self.scale.num_scales == 0 || self.scale.num_scales % 2 == 0 {
            return Err(Error::Config("num_scales must be odd".into()));
        }
        if !(self.scale.scale_step > 1.0) {
            return Err(Error::Config("scale_step must be > 1".into()));
        }
        if !(0.0..=1.0).contains(&self.scale.scale_lr) {
            return Err(Error::Config("scale_lr must lie in [0, 1]".into()));
        }
        if !(self.scale.penalty_eps >= 0.0) {
            return Err(Error::Config("scale_penalty must be >= 0".into()));
        }
        if !(0.0..=1.0).contains(&self.interp_eta) {
            return Err(Error::Config("interp_eta must lie in [0, 1]".into()));
        }
        Ok(())
    }
}

/// Response peaks below this are low-confidence: a featureless search
/// region (uniform image) scores well under it, a locked-on target well
/// above. Callers may use it to flag lost tracks; `detect` itself never
/// fails on weak responses.
pub const LOW_CONFIDENCE_PEAK: f64 = 0.05;

/// One detection result: displacement in feature cells at the selected
/// scale, the selected scale index, and the raw response peak.
#[derive(Debug, Clone, Copy)]
pub struct Detection {
    /// (dx, dy): column/row displacement of the target in cells.
    pub displacement: (f64, f64),
    pub scale_index: usize,
    pub response_peak: f64,
}

/// Gaussian-shaped label with peak 1 at index (0, 0) and circular
/// distances, so the label peak aligns with zero displacement.
pub fn gaussian_label(rows: usize, cols: usize, sigma: f64) -> RealGrid {
    assert!(sigma > 0.0, "sigma must be positive");
    RealGrid::from_fn(rows, cols, |i, j| {
        let di = i.min(rows - i) as f64;
        let dj = j.min(cols - j) as f64;
        (-(di * di + dj * dj) / (2.0 * sigma * sigma)).exp()
    })
}

/// Bowl-shaped spatial penalty: minimal (`w_min`) over the target extent
/// at the grid center, growing quadratically outside:
/// `w(i, j) = w_min + alpha ((di / (m/2))^2 + (dj / (n/2))^2)`.
pub fn build_spatial_weight(
    feat_dims: (usize, usize),
    target_cells: (f64, f64),
    w_min: f64,
    alpha: f64,
) -> SpatialWeight {
    let (rows, cols) = feat_dims;
    let (tr, tc) = target_cells;
    assert!(tr > 0.0 && tc > 0.0, "target extent must be positive");
    assert!(
        tr <= rows as f64 && tc <= cols as f64,
        "target extent exceeds feature grid"
    );
    let (cr, cc) = ((rows as f64 - 1.0) / 2.0, (cols as f64 - 1.0) / 2.0);
    SpatialWeight::new(RealGrid::from_fn(rows, cols, |i, j| {
        let di = (i as f64 - cr) / (tr / 2.0);
        let dj = (j as f64 - cc) / (tc / 2.0);
        w_min + alpha * (di * di + dj * dj)
    }))
}

/// Full tracker state for one target in one sequence.
#[derive(Debug, Clone)]
pub struct TrackerState {
    center: (f64, f64),
    base_size: (f64, f64),
    scale: f64,
    frame_index: usize,
    last_variation: f64,
    filter: FilterState,
    spatial_weight: SpatialWeight,
    label: RealGrid,
    params: TrackerParams,
}

impl TrackerState {
    /// Initialize on the first frame: build the search geometry, extract
    /// windowed features, and learn the first filter with the temporal
    /// term disabled (there is no previous filter to anchor to).
    pub fn init(img: &Image, target: &Region, params: TrackerParams) -> Result<Self> {
        params.validate()?;
        if target.width < 2.0 || target.height < 2.0 {
            return Err(Error::EmptyRegion(format!(
                "target {:.2}x{:.2} too small to track",
                target.width, target.height
            )));
        }

        let cells = params.patch_size / params.features.cell_size;
        let base_side = search_region(target).width;
        let px_per_cell = base_side * params.features.cell_size as f64 / params.patch_size as f64;
        let target_cells = (target.height / px_per_cell, target.width / px_per_cell);

        let sigma = params.label.sigma_factor * (target_cells.0 * target_cells.1).sqrt();
        let label = gaussian_label(cells, cells, sigma);
        let spatial_weight = build_spatial_weight(
            (cells, cells),
            target_cells,
            params.weight_min,
            params.weight_alpha,
        );

        let mut state = Self {
            center: (target.cx, target.cy),
            base_size: (target.width, target.height),
            scale: 1.0,
            frame_index: 1,
            last_variation: 1.0,
            filter: FilterState::new(
                MultiChannel::zeros(params.features.num_channels(), cells, cells),
                MultiChannel::zeros(params.features.num_channels(), cells, cells),
            ),
            spatial_weight,
            label,
            params,
        };

        let x = state.extract_features(img, state.center, state.search_side())?;
        let first_frame = AdmmParams {
            mu: 0.0,
            ..state.params.admm
        };
        let zeros = MultiChannel::zeros(x.num_channels(), cells, cells);
        let (f1, _) = learn(&x, &state.label, &state.spatial_weight, &zeros, &first_frame)?;
        state.filter = FilterState::new(f1.clone(), f1);
        Ok(state)
    }

    pub fn center(&self) -> (f64, f64) {
        self.center
    }

    /// Current target size in pixels.
    pub fn target_size(&self) -> (f64, f64) {
        (self.base_size.0 * self.scale, self.base_size.1 * self.scale)
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn frame_index(&self) -> usize {
        self.frame_index
    }

    /// Normalized filter change of the latest update,
    /// `||f_t - f_(t-1)||^2 / (||f_t||^2 + ||f_(t-1)||^2)`.
    pub fn last_variation(&self) -> f64 {
        self.last_variation
    }

    pub fn filter(&self) -> &FilterState {
        &self.filter
    }

    pub fn spatial_weight(&self) -> &SpatialWeight {
        &self.spatial_weight
    }

    pub fn label(&self) -> &RealGrid {
        &self.label
    }

    pub fn params(&self) -> &TrackerParams {
        &self.params
    }

    /// Current target region.
    pub fn region(&self) -> Region {
        let (w, h) = self.target_size();
        Region::new(self.center.0, self.center.1, w, h)
    }

    /// Search-region side at the current scale.
    fn search_side(&self) -> f64 {
        (5.0 * self.base_size.0 * self.base_size.1).sqrt() * self.scale
    }

    /// Image pixels per feature cell when sampling a region of `side`.
    fn px_per_cell(&self, side: f64) -> f64 {
        side * self.params.features.cell_size as f64 / self.params.patch_size as f64
    }

    fn extract_features(
        &self,
        img: &Image,
        center: (f64, f64),
        side: f64,
    ) -> Result<MultiChannel<RealGrid>> {
        let region = Region::new(center.0, center.1, side, side);
        let patch = sample_patch(img, &region, self.params.patch_size, self.params.patch_size)?;
        let feats = extract_hog(&patch, &self.params.features)?;
        Ok(apply_window(feats, self.params.features.window))
    }

    fn scale_factor(&self, index: usize) -> f64 {
        let mid = (self.params.scale.num_scales - 1) as f64 / 2.0;
        self.params.scale.scale_step.powf(index as f64 - mid)
    }

    /// Locate the target in a new frame using the current filter and
    /// geometry. Searches all candidate scales, picks the penalized global
    /// maximum, and refines the peak to sub-cell precision with a 3x3
    /// quadratic fit under circular indexing.
    pub fn detect(&self, img: &Image) -> Result<Detection> {
        let fhat = self.filter.f_cur.map(dft2);
        let num = self.params.scale.num_scales;
        let mid = (num - 1) / 2;

        let responses: Vec<RealGrid> = (0..num)
            .into_par_iter()
            .map(|k| -> Result<RealGrid> {
                let side = self.search_side() * self.scale_factor(k);
                let x = self.extract_features(img, self.center, side)?;
                let xhat = x.map(dft2);
                idft2(&cross_spectrum(&xhat, &fhat))
            })
            .collect::<Result<Vec<_>>>()?;

        let mut best = (0usize, 0usize, 0usize, f64::NEG_INFINITY, f64::NEG_INFINITY);
        for (k, resp) in responses.iter().enumerate() {
            let (mut pr, mut pc, mut peak) = (0, 0, f64::NEG_INFINITY);
            for r in 0..resp.rows() {
                for c in 0..resp.cols() {
                    if resp.at(r, c) > peak {
                        peak = resp.at(r, c);
                        pr = r;
                        pc = c;
                    }
                }
            }
            let penalized = peak * (1.0 - self.params.scale.penalty_eps * k.abs_diff(mid) as f64);
            if penalized > best.3 {
                best = (k, pr, pc, penalized, peak);
            }
        }
        let (k, pr, pc, _, peak) = best;
        let resp = &responses[k];
        let (rows, cols) = (resp.rows(), resp.cols());

        let (dr, dc) = quadratic_refine(resp, pr, pc);
        let signed = |p: usize, len: usize| -> f64 {
            if p <= len / 2 {
                p as f64
            } else {
                p as f64 - len as f64
            }
        };
        // The filter was trained with the label peak at zero displacement,
        // so the response peaks directly at the target displacement.
        let dy = signed(pr, rows) + dr;
        let dx = signed(pc, cols) + dc;

        Ok(Detection {
            displacement: (dx, dy),
            scale_index: k,
            response_peak: peak,
        })
    }

    /// Advance one frame: detect, move the state, update the scale, and
    /// relearn the filter at the new geometry with the requested update
    /// rule. Returns the predicted target region for this frame.
    pub fn step(&mut self, img: &Image, mode: UpdateMode) -> Result<Region> {
        let det = self.detect(img)?;

        let factor = self.scale_factor(det.scale_index);
        let px_per_cell = self.px_per_cell(self.search_side() * factor);
        self.center.0 += det.displacement.0 * px_per_cell;
        self.center.1 += det.displacement.1 * px_per_cell;
        self.scale *= factor.powf(1.0 - self.params.scale.scale_lr);

        self.relearn(img, mode)?;
        Ok(self.region())
    }

    /// Test and diagnostics hook: skip detection, force the state onto a
    /// known target region, and relearn with the temporal-regularized rule.
    pub fn step_forced(&mut self, img: &Image, truth: &Region) -> Result<Region> {
        self.center = (truth.cx, truth.cy);
        let base_area = self.base_size.0 * self.base_size.1;
        self.scale = (truth.width * truth.height / base_area).sqrt();
        self.relearn(img, UpdateMode::TemporalRegularized)?;
        Ok(self.region())
    }

    fn relearn(&mut self, img: &Image, mode: UpdateMode) -> Result<()> {
        let x = self.extract_features(img, self.center, self.search_side())?;
        let f_new = match mode {
            UpdateMode::TemporalRegularized => {
                let (f, _) = learn(
                    &x,
                    &self.label,
                    &self.spatial_weight,
                    &self.filter.f_cur,
                    &self.params.admm,
                )?;
                f
            }
            UpdateMode::LinearInterpolation => {
                let no_anchor = AdmmParams {
                    mu: 0.0,
                    ..self.params.admm
                };
                let zeros =
                    MultiChannel::zeros(x.num_channels(), self.label.rows(), self.label.cols());
                let (f_fit, _) = learn(&x, &self.label, &self.spatial_weight, &zeros, &no_anchor)?;
                linear_interp_update(&self.filter.f_cur, &f_fit, self.params.interp_eta)
            }
        };

        let diff = f_new.zip_map(&self.filter.f_cur, |a, b| a - b).norm_sq();
        let z = f_new.norm_sq() + self.filter.f_cur.norm_sq();
        self.last_variation = if z > 0.0 { diff / z } else { 0.0 };
        self.filter.advance(f_new);
        self.frame_index += 1;
        Ok(())
    }
}

/// Sub-cell peak refinement: least-squares quadratic over the circular 3x3
/// neighborhood, vertex clamped to one cell.
fn quadratic_refine(resp: &RealGrid, pr: usize, pc: usize) -> (f64, f64) {
    let (rows, cols) = (resp.rows(), resp.cols());
    if rows < 3 || cols < 3 {
        return (0.0, 0.0);
    }
    let value = |du: i64, dv: i64| -> f64 {
        let r = ((pr as i64 + du).rem_euclid(rows as i64)) as usize;
        let c = ((pc as i64 + dv).rem_euclid(cols as i64)) as usize;
        resp.at(r, c)
    };
    let (mut su, mut sv, mut suu, mut svv, mut suv, mut s) = (0.0, 0.0, 0.0, 0.0, 0.0, 0.0);
    for du in -1..=1 {
        for dv in -1..=1 {
            let f = value(du, dv);
            s += f;
            su += du as f64 * f;
            sv += dv as f64 * f;
            suu += (du * du) as f64 * f;
            svv += (dv * dv) as f64 * f;
            suv += (du * dv) as f64 * f;
        }
    }
    // Orthogonal-design least squares on the 9 samples.
    let bu = su / 6.0;
    let bv = sv / 6.0;
    let auu = (suu - 2.0 * s / 3.0) / 2.0;
    let avv = (svv - 2.0 * s / 3.0) / 2.0;
    let auv = suv / 4.0;
    let det = 4.0 * auu * avv - auv * auv;
    if auu >= 0.0 || det <= 0.0 {
        return (0.0, 0.0); // not a proper maximum, keep the integer peak
    }
    let du = (-2.0 * avv * bu + auv * bv) / det;
    let dv = (-2.0 * auu * bv + auv * bu) / det;
    (du.clamp(-1.0, 1.0), dv.clamp(-1.0, 1.0))
}

// --- state snapshot -------------------------------------------------------

const SNAPSHOT_MAGIC: &[u8; 7] = b"STRCF1\0";

fn wr_u32(w: &mut impl Write, v: u32) -> Result<()> {
    w.write_all(&v.to_le_bytes())
        .map_err(|e| Error::Snapshot(format!("write: {e}")))
}

fn wr_u64(w: &mut impl Write, v: u64) -> Result<()> {
    w.write_all(&v.to_le_bytes())
        .map_err(|e| Error::Snapshot(format!("write: {e}")))
}

fn wr_f64(w: &mut impl Write, v: f64) -> Result<()> {
    w.write_all(&v.to_le_bytes())
        .map_err(|e| Error::Snapshot(format!("write: {e}")))
}

fn rd_exact<const N: usize>(r: &mut impl Read) -> Result<[u8; N]> {
    let mut buf = [0u8; N];
    r.read_exact(&mut buf)
        .map_err(|e| Error::Snapshot(format!("read: {e}")))?;
    Ok(buf)
}

fn rd_u32(r: &mut impl Read) -> Result<u32> {
    Ok(u32::from_le_bytes(rd_exact::<4>(r)?))
}

fn rd_u64(r: &mut impl Read) -> Result<u64> {
    Ok(u64::from_le_bytes(rd_exact::<8>(r)?))
}

fn rd_f64(r: &mut impl Read) -> Result<f64> {
    Ok(f64::from_le_bytes(rd_exact::<8>(r)?))
}

fn wr_stack(w: &mut impl Write, stack: &MultiChannel<RealGrid>) -> Result<()> {
    for ch in stack.iter() {
        for &v in ch.data() {
            wr_f64(w, v)?;
        }
    }
    Ok(())
}

fn rd_stack(r: &mut impl Read, d: usize, rows: usize, cols: usize) -> Result<MultiChannel<RealGrid>> {
    let mut channels = Vec::with_capacity(d);
    for _ in 0..d {
        let mut data = Vec::with_capacity(rows * cols);
        for _ in 0..rows * cols {
            data.push(rd_f64(r)?);
        }
        channels.push(RealGrid::from_vec(rows, cols, data));
    }
    Ok(MultiChannel::new(channels))
}

impl TrackerState {
    /// Serialize the state into a self-describing binary snapshot:
    /// a magic header, every parameter, the geometry, and both filters as
    /// little-endian 64-bit floats. Label and spatial weight are
    /// deterministic functions of what is stored and are rebuilt on load.
    pub fn save(&self, w: &mut impl Write) -> Result<()> {
        w.write_all(SNAPSHOT_MAGIC)
            .map_err(|e| Error::Snapshot(format!("write: {e}")))?;
        let p = &self.params;
        wr_u32(w, p.features.cell_size as u32)?;
        wr_u32(w, p.features.orientation_bins as u32)?;
        wr_u32(w, u32::from(p.features.include_gray))?;
        wr_u32(w, matches!(p.features.window, WindowKind::Cosine) as u32)?;
        wr_u32(w, p.patch_size as u32)?;
        wr_f64(w, p.label.sigma_factor)?;
        wr_f64(w, p.weight_min)?;
        wr_f64(w, p.weight_alpha)?;
        wr_f64(w, p.admm.mu)?;
        wr_f64(w, p.admm.gamma0)?;
        wr_f64(w, p.admm.gamma_max)?;
        wr_f64(w, p.admm.rho)?;
        wr_u32(w, p.admm.iters as u32)?;
        wr_u32(w, p.scale.num_scales as u32)?;
        wr_f64(w, p.scale.scale_step)?;
        wr_f64(w, p.scale.scale_lr)?;
        wr_f64(w, p.scale.penalty_eps)?;
        wr_f64(w, p.interp_eta)?;

        wr_f64(w, self.center.0)?;
        wr_f64(w, self.center.1)?;
        wr_f64(w, self.base_size.0)?;
        wr_f64(w, self.base_size.1)?;
        wr_f64(w, self.scale)?;
        wr_u64(w, self.frame_index as u64)?;
        wr_f64(w, self.last_variation)?;

        let f = &self.filter;
        wr_u32(w, f.num_channels() as u32)?;
        wr_u32(w, f.rows() as u32)?;
        wr_u32(w, f.cols() as u32)?;
        wr_stack(w, &f.f_cur)?;
        wr_stack(w, &f.f_prev)?;
        Ok(())
    }

    /// Reconstruct a state saved with [`TrackerState::save`].
    pub fn load(r: &mut impl Read) -> Result<Self> {
        let magic = rd_exact::<7>(r)?;
        if &magic != SNAPSHOT_MAGIC {
            return Err(Error::Snapshot("bad magic header".into()));
        }
        let params = TrackerParams {
            features: FeatureConfig {
                cell_size: rd_u32(r)? as usize,
                orientation_bins: rd_u32(r)? as usize,
                include_gray: rd_u32(r)? != 0,
                window: if rd_u32(r)? != 0 {
                    WindowKind::Cosine
                } else {
                    WindowKind::None
                },
            },
            patch_size: rd_u32(r)? as usize,
            label: LabelConfig {
                sigma_factor: rd_f64(r)?,
            },
            weight_min: rd_f64(r)?,
            weight_alpha: rd_f64(r)?,
            admm: AdmmParams {
                mu: rd_f64(r)?,
                gamma0: rd_f64(r)?,
                gamma_max: rd_f64(r)?,
                rho: rd_f64(r)?,
                iters: rd_u32(r)? as usize,
            },
            scale: ScaleConfig {
                num_scales: rd_u32(r)? as usize,
                scale_step: rd_f64(r)?,
                scale_lr: rd_f64(r)?,
                penalty_eps: rd_f64(r)?,
            },
            interp_eta: rd_f64(r)?,
        };
        params.validate().map_err(|e| Error::Snapshot(e.to_string()))?;

        let center = (rd_f64(r)?, rd_f64(r)?);
        let base_size = (rd_f64(r)?, rd_f64(r)?);
        let scale = rd_f64(r)?;
        let frame_index = rd_u64(r)? as usize;
        let last_variation = rd_f64(r)?;
        if !(scale > 0.0) || !(base_size.0 > 0.0) || !(base_size.1 > 0.0) {
            return Err(Error::Snapshot("non-positive geometry".into()));
        }

        let d = rd_u32(r)? as usize;
        let rows = rd_u32(r)? as usize;
        let cols = rd_u32(r)? as usize;
        let cells = params.patch_size / params.features.cell_size;
        if d != params.features.num_channels() || rows != cells || cols != cells {
            return Err(Error::Snapshot(format!(
                "filter shape {d}x{rows}x{cols} inconsistent with parameters"
            )));
        }
        let f_cur = rd_stack(r, d, rows, cols)?;
        let f_prev = rd_stack(r, d, rows, cols)?;

        // Rebuild the derived grids exactly as init does.
        let base_side = (5.0 * base_size.0 * base_size.1).sqrt();
        let px_per_cell = base_side * params.features.cell_size as f64 / params.patch_size as f64;
        let target_cells = (base_size.1 / px_per_cell, base_size.0 / px_per_cell);
        let sigma = params.label.sigma_factor * (target_cells.0 * target_cells.1).sqrt();
        let label = gaussian_label(cells, cells, sigma);
        let spatial_weight = build_spatial_weight(
            (cells, cells),
            target_cells,
            params.weight_min,
            params.weight_alpha,
        );

        Ok(Self {
            center,
            base_size,
            scale,
            frame_index,
            last_variation,
            filter: FilterState::new(f_prev, f_cur),
            spatial_weight,
            label,
            params,
        })
    }
}
