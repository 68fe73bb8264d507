//! Command drivers behind the `strcf` binary: tracking with result export,
//! dataset aggregation, synthetic-sequence generation, and the
//! temporal-variation diagnostic.

use std::path::Path;

use crate::config::load_config;
use crate::error::{io_err, Error, Result};
use crate::eval::{
    aggregate, box_to_region, load_sequence, run_ope, AggregateResult, BoundingBox, SequenceResult,
};
use crate::features::Image;
use crate::synth::{generate, write_otb_dir, SynthKind};
use crate::tracker::{TrackerParams, TrackerState, UpdateMode};

fn params_from(config: Option<&Path>) -> Result<TrackerParams> {
    match config {
        Some(path) => load_config(path),
        None => Ok(TrackerParams::default()),
    }
}

pub fn mode_name(mode: UpdateMode) -> &'static str {
    match mode {
        UpdateMode::TemporalRegularized => "strcf",
        UpdateMode::LinearInterpolation => "interp",
    }
}

fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value).expect("serializable result");
    std::fs::write(path, text).map_err(io_err(path))
}

/// Track one sequence through the one-pass protocol and write the JSON
/// record/summary document and the success-curve CSV; optionally burn
/// predicted (and truth) boxes into PNG overlay frames.
pub fn cmd_track(
    seq_dir: &Path,
    config: Option<&Path>,
    out_dir: &Path,
    mode: UpdateMode,
    overlay: bool,
) -> Result<()> {
    let params = params_from(config)?;
    let seq = load_sequence(seq_dir)?;
    let (records, summary) = run_ope(&seq, params, mode)?;

    std::fs::create_dir_all(out_dir).map_err(io_err(out_dir))?;
    let stem = format!("{}_{}", seq.name, mode_name(mode));
    let result = SequenceResult {
        sequence: seq.name.clone(),
        mode: mode_name(mode).into(),
        summary: summary.clone(),
        records: records.clone(),
    };
    write_json(&out_dir.join(format!("{stem}.json")), &result)?;
    let csv_path = out_dir.join(format!("{stem}_curve.csv"));
    std::fs::write(&csv_path, crate::eval::curve_to_csv(&summary.success_curve))
        .map_err(io_err(&csv_path))?;

    if overlay {
        let overlay_dir = out_dir.join(format!("{stem}_overlay"));
        std::fs::create_dir_all(&overlay_dir).map_err(io_err(&overlay_dir))?;
        for (record, path) in records.iter().zip(&seq.frame_paths) {
            let mut img = Image::load(path)?;
            if let Some(truth) = &record.truth {
                draw_box(&mut img, truth, [40, 220, 40]);
            }
            draw_box(&mut img, &record.predicted, [230, 40, 40]);
            save_png(&img, &overlay_dir.join(format!("{:04}.png", record.frame)))?;
        }
    }

    println!(
        "{}: mean OP {:.1}%  AUC {:.1}%  {:.1} FPS",
        stem,
        summary.mean_op_at_half * 100.0,
        summary.auc * 100.0,
        summary.fps
    );
    Ok(())
}

/// Aggregate every per-sequence JSON in a directory into dataset-level
/// numbers, print them, and write `aggregate.json`.
pub fn cmd_eval(results_dir: &Path) -> Result<AggregateResult> {
    let mut entries: Vec<std::path::PathBuf> = std::fs::read_dir(results_dir)
        .map_err(io_err(results_dir))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| {
            p.extension().map(|e| e == "json").unwrap_or(false)
                && p.file_name().map(|n| n != "aggregate.json").unwrap_or(false)
        })
        .collect();
    entries.sort();

    let mut sequences = Vec::new();
    let mut summaries = Vec::new();
    for path in &entries {
        let text = std::fs::read_to_string(path).map_err(io_err(path))?;
        let result: SequenceResult = serde_json::from_str(&text).map_err(|e| Error::Parse {
            path: path.clone(),
            line: e.line(),
            message: e.to_string(),
        })?;
        sequences.push(format!("{}_{}", result.sequence, result.mode));
        summaries.push(result.summary);
    }
    if summaries.is_empty() {
        return Err(Error::EmptyInput("no per-sequence result files found"));
    }

    let summary = aggregate(&summaries)?;
    let out = AggregateResult { sequences, summary };
    write_json(&results_dir.join("aggregate.json"), &out)?;
    println!(
        "{} sequences: mean OP {:.1}%  AUC {:.1}%  {:.1} FPS",
        out.sequences.len(),
        out.summary.mean_op_at_half * 100.0,
        out.summary.auc * 100.0,
        out.summary.fps
    );
    Ok(out)
}

/// Generate a synthetic OTB-format sequence.
pub fn cmd_synth(kind: SynthKind, frames: usize, out_dir: &Path, seed: u64) -> Result<()> {
    if frames < 2 {
        return Err(Error::Config("synth needs at least 2 frames".into()));
    }
    let seq = generate(kind, frames, seed);
    write_otb_dir(&seq, out_dir)?;
    println!(
        "wrote {} {} frames to {}",
        frames,
        kind.as_str(),
        out_dir.display()
    );
    Ok(())
}

/// One diagnostic row: normalized filter change for a frame under one mu.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiagRow {
    pub frame: usize,
    pub mu: f64,
    pub variation: f64,
}

/// Run ground-truth-forced tracking once per temporal weight and collect
/// the per-frame filter variation series.
pub fn diag_sweep(
    seq_dir: &Path,
    sweep_mu: &[f64],
    config: Option<&Path>,
) -> Result<Vec<DiagRow>> {
    if sweep_mu.is_empty() {
        return Err(Error::Config("empty mu sweep".into()));
    }
    let base = params_from(config)?;
    let seq = load_sequence(seq_dir)?;
    let first = seq.ground_truth.first().copied().flatten().ok_or_else(|| {
        Error::DegenerateBox(format!("{}: frame 1 lacks a valid ground-truth box", seq.name))
    })?;

    let frames: Vec<Image> = seq
        .frame_paths
        .iter()
        .map(|p| Image::load(p))
        .collect::<Result<_>>()?;

    let mut rows = Vec::new();
    for &mu in sweep_mu {
        let mut params = base.clone();
        params.admm.mu = mu;
        let mut state = TrackerState::init(&frames[0], &box_to_region(&first), params)?;
        rows.push(DiagRow {
            frame: 1,
            mu,
            variation: state.last_variation(),
        });
        for t in 1..frames.len() {
            let region = match &seq.ground_truth[t] {
                Some(b) => box_to_region(b),
                None => state.region(), // hold position through gaps
            };
            state.step_forced(&frames[t], &region)?;
            rows.push(DiagRow {
                frame: t + 1,
                mu,
                variation: state.last_variation(),
            });
        }
    }
    Ok(rows)
}

/// Diagnostic command: write the sweep as `frame,mu,variation` CSV.
pub fn cmd_diag(
    seq_dir: &Path,
    sweep_mu: &[f64],
    config: Option<&Path>,
    out_csv: &Path,
) -> Result<()> {
    let rows = diag_sweep(seq_dir, sweep_mu, config)?;
    let mut text = String::from("frame,mu,variation\n");
    for row in &rows {
        text.push_str(&format!("{},{},{:.12}\n", row.frame, row.mu, row.variation));
    }
    std::fs::write(out_csv, text).map_err(io_err(out_csv))?;
    println!(
        "wrote {} rows ({} frames x {} mu values) to {}",
        rows.len(),
        rows.len() / sweep_mu.len(),
        sweep_mu.len(),
        out_csv.display()
    );
    Ok(())
}

fn save_png(img: &Image, path: &Path) -> Result<()> {
    let buffer = match img.channels() {
        3 => image::DynamicImage::ImageRgb8(
            image::RgbImage::from_raw(img.width() as u32, img.height() as u32, img.data().to_vec())
                .expect("buffer size"),
        ),
        _ => image::DynamicImage::ImageLuma8(
            image::GrayImage::from_raw(img.width() as u32, img.height() as u32, img.data().to_vec())
                .expect("buffer size"),
        ),
    };
    buffer
        .save_with_format(path, image::ImageFormat::Png)
        .map_err(|e| Error::Io {
            path: path.to_path_buf(),
            source: std::io::Error::other(e),
        })
}

/// Burn a hollow rectangle into an image (1-indexed box coordinates).
fn draw_box(img: &mut Image, b: &BoundingBox, color: [u8; 3]) {
    let channels = img.channels();
    let (w, h) = (img.width() as i64, img.height() as i64);
    let x0 = (b.x - 1.0).round() as i64;
    let y0 = (b.y - 1.0).round() as i64;
    let x1 = x0 + b.w.round() as i64 - 1;
    let y1 = y0 + b.h.round() as i64 - 1;
    let mut put = |x: i64, y: i64| {
        if x >= 0 && x < w && y >= 0 && y < h {
            let idx = (y as usize * w as usize + x as usize) * channels;
            if channels == 3 {
                img.data_mut()[idx..idx + 3].copy_from_slice(&color);
            } else {
                img.data_mut()[idx] = color[0];
            }
        }
    };
    for x in x0..=x1 {
        put(x, y0);
        put(x, y1);
    }
    for y in y0..=y1 {
        put(x0, y);
        put(x1, y);
    }
}

/// Sum of the valid per-frame overlaps, a compact trajectory fingerprint
/// used by the determinism tests.
pub fn records_iou_sum(records: &[crate::eval::EvalRecord]) -> f64 {
    records.iter().filter_map(|r| r.iou).sum()
}
