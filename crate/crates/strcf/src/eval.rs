//! OTB-style sequence loading, the one-pass evaluation protocol, and
//! overlap metrics (OP, success curve, AUC).

use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{io_err, Error, Result};
use crate::features::{Image, Region};
use crate::tracker::{TrackerParams, TrackerState, UpdateMode};

/// Success-curve thresholds: 0.0 to 1.0 in steps of 0.05.
pub const CURVE_POINTS: usize = 21;

/// Axis-aligned box in the OTB file convention: `(x, y)` is the 1-indexed
/// top-left corner.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundingBox {
    pub x: f64,
    pub y: f64,
    pub w: f64,
    pub h: f64,
}

impl BoundingBox {
    pub fn new(x: f64, y: f64, w: f64, h: f64) -> Self {
        Self { x, y, w, h }
    }

    fn is_valid(&self) -> bool {
        self.x.is_finite()
            && self.y.is_finite()
            && self.w.is_finite()
            && self.h.is_finite()
            && self.w > 0.0
            && self.h > 0.0
    }
}

/// Convert a 1-indexed box to a tracker region (0-indexed pixel-center
/// coordinates).
pub fn box_to_region(b: &BoundingBox) -> Region {
    Region::new(
        b.x - 1.0 + (b.w - 1.0) / 2.0,
        b.y - 1.0 + (b.h - 1.0) / 2.0,
        b.w,
        b.h,
    )
}

/// Inverse of [`box_to_region`].
pub fn region_to_box(r: &Region) -> BoundingBox {
    BoundingBox::new(
        r.cx - (r.width - 1.0) / 2.0 + 1.0,
        r.cy - (r.height - 1.0) / 2.0 + 1.0,
        r.width,
        r.height,
    )
}

/// Intersection over union of two boxes.
pub fn iou(a: &BoundingBox, b: &BoundingBox) -> Result<f64> {
    if !a.is_valid() || !b.is_valid() {
        return Err(Error::DegenerateBox(format!("{a:?} vs {b:?}")));
    }
    let ix = (a.x + a.w).min(b.x + b.w) - a.x.max(b.x);
    let iy = (a.y + a.h).min(b.y + b.h) - a.y.max(b.y);
    if ix <= 0.0 || iy <= 0.0 {
        return Ok(0.0);
    }
    let inter = ix * iy;
    let union = a.w * a.h + b.w * b.h - inter;
    Ok(inter / union)
}

/// A loaded sequence: ordered frame paths plus per-frame ground truth.
/// Boxes are kept exactly as annotated (1-indexed); frames with
/// non-positive or NaN boxes are `None` and excluded from metrics.
#[derive(Debug, Clone)]
pub struct Sequence {
    pub name: String,
    pub frame_paths: Vec<PathBuf>,
    pub ground_truth: Vec<Option<BoundingBox>>,
}

/// Load an OTB-layout directory: `img/` with the frames and
/// `groundtruth_rect.txt` with one `x,y,w,h` line per frame (commas, tabs,
/// or spaces).
pub fn load_sequence(dir: &Path) -> Result<Sequence> {
    let img_dir = dir.join("img");
    let mut frame_paths: Vec<PathBuf> = std::fs::read_dir(&img_dir)
        .map_err(io_err(&img_dir))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| {
            p.extension()
                .and_then(|e| e.to_str())
                .map(|e| matches!(e.to_ascii_lowercase().as_str(), "jpg" | "jpeg" | "png"))
                .unwrap_or(false)
        })
        .collect();
    frame_paths.sort();

    let gt_path = dir.join("groundtruth_rect.txt");
    if !gt_path.exists() {
        return Err(Error::MissingGroundTruth(gt_path));
    }
    let text = std::fs::read_to_string(&gt_path).map_err(io_err(&gt_path))?;

    let mut ground_truth = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line
            .split(|c| c == ',' || c == '\t' || c == ' ')
            .filter(|t| !t.is_empty())
            .collect();
        if fields.len() != 4 {
            return Err(Error::Parse {
                path: gt_path.clone(),
                line: idx + 1,
                message: format!("expected 4 numbers, found {}", fields.len()),
            });
        }
        let mut nums = [0.0f64; 4];
        for (slot, field) in nums.iter_mut().zip(&fields) {
            *slot = field.parse().map_err(|_| Error::Parse {
                path: gt_path.clone(),
                line: idx + 1,
                message: format!("bad number {field:?}"),
            })?;
        }
        let b = BoundingBox::new(nums[0], nums[1], nums[2], nums[3]);
        ground_truth.push(b.is_valid().then_some(b));
    }

    if frame_paths.len() != ground_truth.len() {
        return Err(Error::FrameCountMismatch {
            dir: dir.to_path_buf(),
            frames: frame_paths.len(),
            truths: ground_truth.len(),
        });
    }

    let name = dir
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| "sequence".into());
    Ok(Sequence {
        name,
        frame_paths,
        ground_truth,
    })
}

/// Per-frame evaluation record.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EvalRecord {
    /// 1-based frame number.
    pub frame: usize,
    pub predicted: BoundingBox,
    pub truth: Option<BoundingBox>,
    /// Overlap with the truth; absent for frames with invalid annotation.
    pub iou: Option<f64>,
}

/// Sequence-level metrics.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EvalSummary {
    /// Fraction of valid frames with IoU strictly above 0.5.
    pub mean_op_at_half: f64,
    /// OP over thresholds 0.0, 0.05, ..., 1.0 (strict inequality).
    pub success_curve: Vec<f64>,
    /// Mean of the success curve.
    pub auc: f64,
    /// Tracked frames per second, measured over `step` calls only.
    pub fps: f64,
    /// Total frames in the sequence.
    pub frames: usize,
    /// Number of `step` calls behind the fps figure.
    pub step_count: usize,
    /// Wall-clock seconds spent in `step` calls.
    pub step_seconds: f64,
}

/// Compute the overlap metrics for a set of records.
pub fn summarize(records: &[EvalRecord], step_count: usize, step_seconds: f64) -> EvalSummary {
    let ious: Vec<f64> = records.iter().filter_map(|r| r.iou).collect();
    let frac_above = |threshold: f64| -> f64 {
        if ious.is_empty() {
            return 0.0;
        }
        ious.iter().filter(|&&v| v > threshold).count() as f64 / ious.len() as f64
    };
    let success_curve: Vec<f64> = (0..CURVE_POINTS)
        .map(|i| frac_above(i as f64 * 0.05))
        .collect();
    let auc = success_curve.iter().sum::<f64>() / CURVE_POINTS as f64;
    EvalSummary {
        mean_op_at_half: frac_above(0.5),
        success_curve,
        auc,
        fps: if step_seconds > 0.0 {
            step_count as f64 / step_seconds
        } else {
            0.0
        },
        frames: records.len(),
        step_count,
        step_seconds,
    }
}

/// One-pass evaluation: initialize on frame 1 with the ground-truth box,
/// track every subsequent frame with no re-initialization, record per-frame
/// overlaps.
pub fn run_ope(
    seq: &Sequence,
    params: TrackerParams,
    mode: UpdateMode,
) -> Result<(Vec<EvalRecord>, EvalSummary)> {
    let first = seq.ground_truth.first().copied().flatten().ok_or_else(|| {
        Error::DegenerateBox(format!("{}: frame 1 lacks a valid ground-truth box", seq.name))
    })?;

    let img = Image::load(&seq.frame_paths[0])?;
    let mut state = TrackerState::init(&img, &box_to_region(&first), params)?;

    let mut records = vec![EvalRecord {
        frame: 1,
        predicted: first,
        truth: Some(first),
        iou: Some(iou(&first, &first)?),
    }];

    let mut step_seconds = 0.0;
    let mut step_count = 0usize;
    for (t, path) in seq.frame_paths.iter().enumerate().skip(1) {
        let img = Image::load(path)?;
        let started = Instant::now();
        let predicted_region = state.step(&img, mode)?;
        step_seconds += started.elapsed().as_secs_f64();
        step_count += 1;

        let predicted = region_to_box(&predicted_region);
        let truth = seq.ground_truth[t];
        let overlap = match &truth {
            Some(b) => Some(iou(&predicted, b)?),
            None => None,
        };
        records.push(EvalRecord {
            frame: t + 1,
            predicted,
            truth,
            iou: overlap,
        });
    }

    let summary = summarize(&records, step_count, step_seconds);
    Ok((records, summary))
}

/// Unweighted per-sequence mean of every metric; fps from total stepped
/// frames over total step time.
pub fn aggregate(summaries: &[EvalSummary]) -> Result<EvalSummary> {
    if summaries.is_empty() {
        return Err(Error::EmptyInput("no summaries to aggregate"));
    }
    let n = summaries.len() as f64;
    let mut curve = vec![0.0; CURVE_POINTS];
    for s in summaries {
        for (acc, v) in curve.iter_mut().zip(&s.success_curve) {
            *acc += v / n;
        }
    }
    let step_count: usize = summaries.iter().map(|s| s.step_count).sum();
    let step_seconds: f64 = summaries.iter().map(|s| s.step_seconds).sum();
    Ok(EvalSummary {
        mean_op_at_half: summaries.iter().map(|s| s.mean_op_at_half).sum::<f64>() / n,
        success_curve: curve,
        auc: summaries.iter().map(|s| s.auc).sum::<f64>() / n,
        fps: if step_seconds > 0.0 {
            step_count as f64 / step_seconds
        } else {
            0.0
        },
        frames: summaries.iter().map(|s| s.frames).sum(),
        step_count,
        step_seconds,
    })
}

/// Per-sequence result document written by the CLI.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SequenceResult {
    pub sequence: String,
    pub mode: String,
    pub summary: EvalSummary,
    pub records: Vec<EvalRecord>,
}

/// Dataset-level result document.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AggregateResult {
    pub sequences: Vec<String>,
    pub summary: EvalSummary,
}

/// Render the success curve as CSV: `threshold,value` with 6 decimals.
pub fn curve_to_csv(curve: &[f64]) -> String {
    let mut out = String::new();
    for (i, v) in curve.iter().enumerate() {
        out.push_str(&format!("{:.6},{:.6}\n", i as f64 * 0.05, v));
    }
    out
}
