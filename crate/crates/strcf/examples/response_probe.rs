//! Scratch probe: raw response map around the peak for a known shift.

use strcf::eval::box_to_region;
use strcf::features::{apply_window, extract_hog, sample_patch, search_region, Region};
use strcf::grid::correlate;
use strcf::synth::{generate, SynthKind};
use strcf::tracker::{TrackerParams, TrackerState};

fn main() {
    let frames_apart: usize = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(1);
    let params = TrackerParams::default();
    let seq = generate(SynthKind::Translate, 50, 42);
    let region = box_to_region(&seq.boxes[0]);
    let state = TrackerState::init(&seq.frames[0], &region, params.clone()).unwrap();

    let side = search_region(&region).width;
    let px_per_cell = side * params.features.cell_size as f64 / params.patch_size as f64;
    let true_cells = 2.0 * frames_apart as f64 / px_per_cell;
    println!("side {side:.2} px_per_cell {px_per_cell:.4} true shift {true_cells:.3} cells");

    let probe = Region::new(region.cx, region.cy, side, side);
    let patch = sample_patch(
        &seq.frames[frames_apart],
        &probe,
        params.patch_size,
        params.patch_size,
    )
    .unwrap();
    let x = apply_window(extract_hog(&patch, &params.features).unwrap(), params.features.window);

    // Optionally evaluate the spatially-masked filter g ~ gamma f / (w^2 + gamma).
    let filter = if std::env::args().nth(2).as_deref() == Some("masked") {
        let gamma = 12.0;
        let w = state.spatial_weight().grid().clone();
        state.filter().f_cur.map(|ch| {
            strcf::grid::RealGrid::from_fn(ch.rows(), ch.cols(), |r, c| {
                let wv = w.at(r, c);
                gamma * ch.at(r, c) / (wv * wv + gamma)
            })
        })
    } else {
        state.filter().f_cur.clone()
    };
    let resp = correlate(&x, &filter).unwrap();

    // Peak and the response row through it.
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
    println!("integer peak at (row {pr}, col {pc}) value {peak:.4}");
    print!("row {pr}, cols -3..=6: ");
    for dc in -3i64..=6 {
        let c = (pc as i64 + dc).rem_euclid(resp.cols() as i64) as usize;
        print!("{:+.3} ", resp.at(pr, c));
    }
    println!();
    let det = state.detect(&seq.frames[frames_apart]).unwrap();
    println!("detect: {:?}", det);
}
