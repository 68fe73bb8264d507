//! Scratch probe: per-frame tracking internals on a synthetic sequence.

use strcf::eval::{box_to_region, iou, region_to_box};
use strcf::synth::{generate, SynthKind};
use strcf::tracker::{TrackerParams, TrackerState, UpdateMode};

fn main() {
    let kind = match std::env::args().nth(1).as_deref() {
        Some("occlude") => SynthKind::Occlude,
        Some("scale") => SynthKind::Scale,
        Some("static") => SynthKind::Static,
        _ => SynthKind::Translate,
    };
    let params = match std::env::args().nth(2) {
        Some(overrides) => strcf::config::parse_config(&overrides.replace(';', "\n")).unwrap(),
        None => TrackerParams::default(),
    };
    println!("params: {params:?}");
    let seq = generate(kind, 50, 42);
    let region = box_to_region(&seq.boxes[0]);
    let mut state = TrackerState::init(&seq.frames[0], &region, params).unwrap();
    println!("init center {:?} size {:?}", state.center(), state.target_size());
    for t in 1..seq.frames.len() {
        let det = state.detect(&seq.frames[t]).unwrap();
        let predicted = state.step(&seq.frames[t], UpdateMode::TemporalRegularized).unwrap();
        let truth = box_to_region(&seq.boxes[t]);
        let overlap = iou(&region_to_box(&predicted), &seq.boxes[t]).unwrap();
        println!(
            "t={t:2} disp=({:+.3},{:+.3}) k={} peak={:.3} center=({:.1},{:.1}) truth=({:.1},{:.1}) scale={:.4} iou={:.3}",
            det.displacement.0,
            det.displacement.1,
            det.scale_index,
            det.response_peak,
            state.center().0,
            state.center().1,
            truth.cx,
            truth.cy,
            state.scale(),
            overlap
        );
    }
}
