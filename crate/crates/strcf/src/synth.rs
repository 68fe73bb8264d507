//! Seeded synthetic tracking sequences with exact ground truth: a textured
//! square target over a textured background, with static, translating,
//! scaling, and occluded variants, written in the OTB directory layout.

use std::path::Path;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{io_err, Error, Result};
use crate::eval::BoundingBox;
use crate::features::Image;

pub const FRAME_W: usize = 320;
pub const FRAME_H: usize = 240;
const TEX: usize = 80;
const TARGET_SIZE: f64 = 40.0;

/// Motion pattern of the synthetic target.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SynthKind {
    /// Fixed target, fixed background.
    Static,
    /// 2 px/frame horizontal translation.
    Translate,
    /// x1.005/frame growth around a fixed center.
    Scale,
    /// Slow translation with an occluding bar crossing mid-sequence.
    Occlude,
}

impl SynthKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            SynthKind::Static => "static",
            SynthKind::Translate => "translate",
            SynthKind::Scale => "scale",
            SynthKind::Occlude => "occlude",
        }
    }
}

impl FromStr for SynthKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "static" => Ok(SynthKind::Static),
            "translate" => Ok(SynthKind::Translate),
            "scale" => Ok(SynthKind::Scale),
            "occlude" => Ok(SynthKind::Occlude),
            other => Err(Error::Config(format!(
                "unknown synth kind {other:?} (expected static|translate|scale|occlude)"
            ))),
        }
    }
}

/// Generated frames plus their 1-indexed ground-truth boxes.
#[derive(Debug, Clone)]
pub struct SynthSequence {
    pub kind: SynthKind,
    pub frames: Vec<Image>,
    pub boxes: Vec<BoundingBox>,
}

struct Texture {
    size: usize,
    data: Vec<[f64; 3]>,
}

impl Texture {
    /// Bilinear sample with clamping, coordinates in texel units.
    fn sample(&self, u: f64, v: f64) -> [f64; 3] {
        let u = u.clamp(0.0, (self.size - 1) as f64);
        let v = v.clamp(0.0, (self.size - 1) as f64);
        let (u0, v0) = (u.floor() as usize, v.floor() as usize);
        let (u1, v1) = ((u0 + 1).min(self.size - 1), (v0 + 1).min(self.size - 1));
        let (fu, fv) = (u - u0 as f64, v - v0 as f64);
        let px = |r: usize, c: usize| self.data[r * self.size + c];
        let mut out = [0.0; 3];
        for ch in 0..3 {
            let top = (1.0 - fu) * px(v0, u0)[ch] + fu * px(v0, u1)[ch];
            let bot = (1.0 - fu) * px(v1, u0)[ch] + fu * px(v1, u1)[ch];
            out[ch] = (1.0 - fv) * top + fv * bot;
        }
        out
    }
}

/// Checkerboard plus sinusoids plus pixel noise; palettes keep every sample
/// in [25, 225] so mild brightness shifts cannot saturate.
fn make_texture(rng: &mut ChaCha8Rng, palette_a: [f64; 3], palette_b: [f64; 3]) -> Texture {
    let fx = rng.gen_range(0.05..0.15);
    let fy = rng.gen_range(0.05..0.15);
    let phase: [f64; 3] = [rng.gen_range(0.0..6.28), rng.gen_range(0.0..6.28), rng.gen_range(0.0..6.28)];
    let mut data = Vec::with_capacity(TEX * TEX);
    for r in 0..TEX {
        for c in 0..TEX {
            let checker = (r / 10 + c / 10) % 2 == 0;
            let base = if checker { palette_a } else { palette_b };
            let mut px = [0.0; 3];
            for ch in 0..3 {
                let wave = 25.0
                    * (2.0 * std::f64::consts::PI * (fx * c as f64 + fy * r as f64) + phase[ch])
                        .sin();
                let noise = rng.gen_range(-8.0..8.0);
                px[ch] = (base[ch] + wave + noise).clamp(25.0, 225.0);
            }
            data.push(px);
        }
    }
    Texture { size: TEX, data }
}

fn make_background(rng: &mut ChaCha8Rng) -> Vec<[f64; 3]> {
    let fx1 = rng.gen_range(0.004..0.012);
    let fy1 = rng.gen_range(0.004..0.012);
    let fx2 = rng.gen_range(0.02..0.05);
    let fy2 = rng.gen_range(0.02..0.05);
    let phase: [f64; 3] = [rng.gen_range(0.0..6.28), rng.gen_range(0.0..6.28), rng.gen_range(0.0..6.28)];
    let mut data = Vec::with_capacity(FRAME_W * FRAME_H);
    for r in 0..FRAME_H {
        for c in 0..FRAME_W {
            let mut px = [0.0; 3];
            for ch in 0..3 {
                let slow = 18.0
                    * (2.0 * std::f64::consts::PI * (fx1 * c as f64 + fy1 * r as f64) + phase[ch])
                        .sin();
                let fast = 7.0
                    * (2.0 * std::f64::consts::PI * (fx2 * c as f64 - fy2 * r as f64)
                        + 1.7 * phase[ch])
                        .cos();
                let noise = rng.gen_range(-3.0..3.0);
                px[ch] = (120.0 + slow + fast + noise).clamp(30.0, 220.0);
            }
            data.push(px);
        }
    }
    data
}

/// Paint a textured rectangle over the frame buffer. The box is given by
/// its top-left pixel coordinate (possibly fractional) and size; a frame
/// pixel is covered when its center falls inside the continuous rectangle.
fn paint_rect(frame: &mut [[f64; 3]], tex: &Texture, x0: f64, y0: f64, w: f64, h: f64) {
    let left = x0 - 0.5;
    let top = y0 - 0.5;
    let c_min = left.ceil().max(0.0) as usize;
    let r_min = top.ceil().max(0.0) as usize;
    let c_max = ((left + w).ceil() as i64).clamp(0, FRAME_W as i64) as usize;
    let r_max = ((top + h).ceil() as i64).clamp(0, FRAME_H as i64) as usize;
    for r in r_min..r_max {
        if (r as f64) >= top + h {
            continue;
        }
        for c in c_min..c_max {
            if (c as f64) >= left + w {
                continue;
            }
            let u = (c as f64 - left) / w * tex.size as f64 - 0.5;
            let v = (r as f64 - top) / h * tex.size as f64 - 0.5;
            frame[r * FRAME_W + c] = tex.sample(u, v);
        }
    }
}

/// Render a deterministic synthetic sequence.
pub fn generate(kind: SynthKind, num_frames: usize, seed: u64) -> SynthSequence {
    assert!(num_frames >= 1, "at least one frame required");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let background = make_background(&mut rng);
    let target_tex = make_texture(&mut rng, [200.0, 95.0, 60.0], [70.0, 150.0, 200.0]);
    let occluder_tex = make_texture(&mut rng, [50.0, 200.0, 120.0], [180.0, 60.0, 180.0]);

    let mut frames = Vec::with_capacity(num_frames);
    let mut boxes = Vec::with_capacity(num_frames);
    for t in 0..num_frames {
        let (x0, y0, w, h) = match kind {
            SynthKind::Static => (140.0, 100.0, TARGET_SIZE, TARGET_SIZE),
            SynthKind::Translate => (60.0 + 2.0 * t as f64, 100.0, TARGET_SIZE, TARGET_SIZE),
            SynthKind::Scale => {
                let size = TARGET_SIZE * 1.005_f64.powi(t as i32);
                let cx = 159.5;
                let cy = 119.5;
                (cx - (size - 1.0) / 2.0, cy - (size - 1.0) / 2.0, size, size)
            }
            SynthKind::Occlude => (100.0 + t as f64, 100.0, TARGET_SIZE, TARGET_SIZE),
        };

        let mut frame = background.clone();
        paint_rect(&mut frame, &target_tex, x0, y0, w, h);

        if kind == SynthKind::Occlude {
            // A wide bar sweeping right-to-left across the target's path,
            // fully covering it for several frames near mid-sequence.
            let occ_w = 80.0;
            let occ_h = 180.0;
            let occ_x = 300.0 - 7.0 * t as f64;
            let occ_y = 30.0;
            paint_rect(&mut frame, &occluder_tex, occ_x, occ_y, occ_w, occ_h);
        }

        let data: Vec<u8> = frame
            .iter()
            .flat_map(|px| px.iter().map(|&v| v.round() as u8))
            .collect();
        frames.push(Image::rgb(FRAME_W, FRAME_H, data));
        boxes.push(BoundingBox::new(x0 + 1.0, y0 + 1.0, w, h));
    }

    SynthSequence {
        kind,
        frames,
        boxes,
    }
}

fn format_number(v: f64) -> String {
    if v.fract() == 0.0 {
        format!("{}", v as i64)
    } else {
        format!("{v:.4}")
    }
}

/// Write a sequence as an OTB-layout directory: `img/0001.png ...` plus
/// `groundtruth_rect.txt`.
pub fn write_otb_dir(seq: &SynthSequence, out: &Path) -> Result<()> {
    let img_dir = out.join("img");
    std::fs::create_dir_all(&img_dir).map_err(io_err(&img_dir))?;

    for (i, frame) in seq.frames.iter().enumerate() {
        let path = img_dir.join(format!("{:04}.png", i + 1));
        let buffer = image::RgbImage::from_raw(
            frame.width() as u32,
            frame.height() as u32,
            frame.data().to_vec(),
        )
        .expect("frame buffer size");
        buffer
            .save_with_format(&path, image::ImageFormat::Png)
            .map_err(|e| Error::Io {
                path: path.clone(),
                source: std::io::Error::other(e),
            })?;
    }

    let gt_path = out.join("groundtruth_rect.txt");
    let mut text = String::new();
    for b in &seq.boxes {
        text.push_str(&format!(
            "{},{},{},{}\n",
            format_number(b.x),
            format_number(b.y),
            format_number(b.w),
            format_number(b.h)
        ));
    }
    std::fs::write(&gt_path, text).map_err(io_err(&gt_path))?;
    Ok(())
}
