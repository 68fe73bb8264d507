//! Acceptance suite: one test per criterion, each printing a PASS line
//! (visible with `cargo test --test acceptance -- --nocapture`).

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use strcf::eval::{box_to_region, iou, load_sequence, region_to_box, run_ope};
use strcf::grid::{dft2, ComplexGrid, MultiChannel, RealGrid};
use strcf::oracle::{dense_solve, DenseProblem};
use strcf::solver::{learn, objective, solve_f_subproblem, AdmmParams, SpatialWeight};
use strcf::synth::{generate, write_otb_dir, SynthKind};
use strcf::tracker::{build_spatial_weight, gaussian_label, TrackerParams, TrackerState, UpdateMode};

fn random_stack(rng: &mut impl Rng, d: usize, m: usize, n: usize) -> MultiChannel<RealGrid> {
    MultiChannel::new(
        (0..d)
            .map(|_| RealGrid::from_fn(m, n, |_, _| rng.gen_range(-1.0..1.0)))
            .collect(),
    )
}

struct Instance {
    x: MultiChannel<RealGrid>,
    y: RealGrid,
    w: SpatialWeight,
    f_prev: MultiChannel<RealGrid>,
}

/// Random learning instances over D in {1,2,4}, M=N in {4,8}, with the
/// label and spatial weight shaped as in tracking.
fn instances(count: usize, seed: u64) -> Vec<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let combos = [(1, 4), (1, 8), (2, 4), (2, 8), (4, 4), (4, 8)];
    (0..count)
        .map(|i| {
            let (d, m) = combos[i % combos.len()];
            let x = random_stack(&mut rng, d, m, m);
            let sigma = (m as f64 / 2.0) / 4.0;
            let y = gaussian_label(m, m, sigma);
            let w = build_spatial_weight((m, m), (m as f64 / 2.0, m as f64 / 2.0), 0.1, 3.0);
            let f_prev = random_stack(&mut rng, d, m, m);
            Instance { x, y, w, f_prev }
        })
        .collect()
}

const MU: f64 = 16.0;

#[test]
fn criterion_1_oracle_equivalence() {
    let started = Instant::now();
    let params = AdmmParams {
        mu: MU,
        iters: 50,
        ..AdmmParams::default()
    };
    let mut worst: f64 = 0.0;
    for (i, inst) in instances(50, 101).iter().enumerate() {
        let (f, _) = learn(&inst.x, &inst.y, &inst.w, &inst.f_prev, &params).unwrap();
        let j_admm = objective(&inst.x, &inst.y, &inst.w, &f, &inst.f_prev, MU).unwrap();

        let p = DenseProblem::from_spatial(
            &inst.x,
            &inst.y,
            inst.w.clone(),
            inst.f_prev.clone(),
            MU,
        );
        let f_star = dense_solve(&p, 100_000).unwrap();
        let j_star = objective(&inst.x, &inst.y, &inst.w, &f_star, &inst.f_prev, MU).unwrap();

        let gap = (j_admm - j_star) / j_star.abs();
        worst = worst.max(gap);
        assert!(
            gap <= 1e-6,
            "instance {i}: admm {j_admm} oracle {j_star} relative gap {gap:.3e}"
        );
    }
    let secs = started.elapsed().as_secs_f64();
    assert!(secs < 10.0, "took {secs:.1}s, budget 10s");
    println!(
        "criterion 1 (oracle equivalence, 50 instances, N_I=50): PASS, worst relative gap {worst:.3e}, {secs:.2}s"
    );
}

#[test]
fn criterion_2_two_iteration_regime() {
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    let solve_params = AdmmParams {
        mu: MU,
        iters: 50,
        ..AdmmParams::default()
    };
    let fast_params = AdmmParams {
        mu: MU,
        iters: 2,
        ..AdmmParams::default()
    };
    let mut failures = 0usize;
    let mut worst: f64 = 0.0;
    let all = instances(50, 102);
    for inst in &all {
        // Previous solution, perturbed, becomes the warm-start anchor.
        let (f_star, _) = learn(&inst.x, &inst.y, &inst.w, &inst.f_prev, &solve_params).unwrap();
        let rms = (f_star.norm_sq()
            / (f_star.num_channels() * f_star.rows() * f_star.cols()) as f64)
            .sqrt();
        let f_prev = MultiChannel::new(
            f_star
                .iter()
                .map(|ch| {
                    RealGrid::from_fn(ch.rows(), ch.cols(), |r, c| {
                        ch.at(r, c) + 0.01 * rms * rng.gen_range(-1.0..1.0)
                    })
                })
                .collect(),
        );

        let (f2, _) = learn(&inst.x, &inst.y, &inst.w, &f_prev, &fast_params).unwrap();
        let j2 = objective(&inst.x, &inst.y, &inst.w, &f2, &f_prev, MU).unwrap();

        let p = DenseProblem::from_spatial(&inst.x, &inst.y, inst.w.clone(), f_prev.clone(), MU);
        let f_opt = dense_solve(&p, 100_000).unwrap();
        let j_opt = objective(&inst.x, &inst.y, &inst.w, &f_opt, &f_prev, MU).unwrap();

        let gap = (j2 - j_opt) / j_opt.abs();
        worst = worst.max(gap);
        if gap > 0.05 {
            failures += 1;
        }
    }
    assert!(
        failures <= all.len() / 10,
        "{failures} of {} instances exceeded the 5% objective gap (worst {worst:.3e})",
        all.len()
    );
    println!(
        "criterion 2 (two-iteration regime): PASS, {failures}/50 over the 5% gap, worst {worst:.3e}"
    );
}

#[test]
fn criterion_3_per_pixel_exactness() {
    let mut rng = ChaCha8Rng::seed_from_u64(303);
    let (mu, gamma) = (MU, 10.0);
    let mut worst: f64 = 0.0;
    for _ in 0..10 {
        let d = rng.gen_range(1..=4);
        let (m, n) = (rng.gen_range(2..=8), rng.gen_range(2..=8));
        let spectrum = |rng: &mut ChaCha8Rng| {
            MultiChannel::new(
                (0..d)
                    .map(|_| {
                        ComplexGrid::from_fn(m, n, |_, _| {
                            strcf::grid::Complex64::new(
                                rng.gen_range(-1.0..1.0),
                                rng.gen_range(-1.0..1.0),
                            )
                        })
                    })
                    .collect(),
            )
        };
        let xhat = spectrum(&mut rng);
        let yhat = ComplexGrid::from_fn(m, n, |_, _| {
            strcf::grid::Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        });
        let ghat = spectrum(&mut rng);
        let hhat = spectrum(&mut rng);
        let fprev = spectrum(&mut rng);

        let fhat = solve_f_subproblem(&xhat, &yhat, &ghat, &hhat, &fprev, mu, gamma).unwrap();

        for j in 0..m * n {
            let xv: Vec<_> = (0..d).map(|ch| xhat.channel(ch).data()[j]).collect();
            let fv: Vec<_> = (0..d).map(|ch| fhat.channel(ch).data()[j]).collect();
            let xf: strcf::grid::Complex64 = xv.iter().zip(&fv).map(|(x, f)| x.conj() * f).sum();
            for ch in 0..d {
                let lhs = xv[ch] * xf + (mu + gamma) * fv[ch];
                let q = xv[ch] * yhat.data()[j].conj()
                    + gamma * (ghat.channel(ch).data()[j] - hhat.channel(ch).data()[j])
                    + mu * fprev.channel(ch).data()[j];
                let residual = (lhs - q).norm();
                worst = worst.max(residual);
                assert!(residual < 1e-10, "pixel {j} channel {ch}: residual {residual:.3e}");
            }
        }
    }
    println!("criterion 3 (per-pixel stationarity after one f-step): PASS, worst residual {worst:.3e}");
}

#[test]
fn criterion_4_scalar_ground_truth() {
    let x = MultiChannel::new(vec![RealGrid::filled(1, 1, 2.0)]);
    let y = RealGrid::filled(1, 1, 1.0);
    let w = SpatialWeight::new(RealGrid::filled(1, 1, 1.0));
    let f_prev = MultiChannel::zeros(1, 1, 1);
    let params = AdmmParams {
        mu: MU,
        iters: 200,
        ..AdmmParams::default()
    };
    let (f, _) = learn(&x, &y, &w, &f_prev, &params).unwrap();
    let err = (f.channel(0).data()[0] - 2.0 / 21.0).abs();
    assert!(err < 1e-8, "scalar case error {err:.3e}");
    println!("criterion 4 (scalar ground truth 2/21): PASS, error {err:.3e}");
}

#[test]
fn criterion_5_spectral_spatial_consistency() {
    let mut rng = ChaCha8Rng::seed_from_u64(505);
    let mut worst_corr: f64 = 0.0;
    let mut worst_parseval: f64 = 0.0;
    for m in 1..=8 {
        for n in 1..=8 {
            for d in 1..=4 {
                let x = random_stack(&mut rng, d, m, n);
                let f = random_stack(&mut rng, d, m, n);
                let fast = strcf::grid::correlate(&x, &f).unwrap();
                let slow = strcf::oracle::spatial_correlate(&x, &f);
                let scale = slow.data().iter().map(|v| v.abs()).fold(1e-12, f64::max);
                for (a, b) in fast.data().iter().zip(slow.data()) {
                    let rel = (a - b).abs() / scale;
                    worst_corr = worst_corr.max(rel);
                    assert!(rel < 1e-10, "correlate mismatch at {m}x{n} d={d}: {rel:.3e}");
                }

                let g = x.channel(0);
                let spatial = g.norm_sq() * (m * n) as f64;
                let spectral = dft2(g).norm_sq();
                let rel = (spatial - spectral).abs() / spatial.max(1e-12);
                worst_parseval = worst_parseval.max(rel);
                assert!(rel < 1e-10, "parseval violated at {m}x{n}: {rel:.3e}");
            }
        }
    }
    println!(
        "criterion 5 (spectral/spatial consistency): PASS, worst correlate {worst_corr:.3e}, worst parseval {worst_parseval:.3e}"
    );
}

#[test]
fn criterion_6_synthetic_tracking() {
    let started = Instant::now();

    // Translating target, defaults, through the full on-disk pipeline.
    let dir = tempfile::tempdir().unwrap();
    let seq = generate(SynthKind::Translate, 50, 42);
    write_otb_dir(&seq, dir.path()).unwrap();
    let loaded = load_sequence(dir.path()).unwrap();
    let (_, summary) = run_ope(
        &loaded,
        TrackerParams::default(),
        UpdateMode::TemporalRegularized,
    )
    .unwrap();
    assert_eq!(
        summary.mean_op_at_half, 1.0,
        "translate sequence mean OP {} (success curve {:?})",
        summary.mean_op_at_half, summary.success_curve
    );

    // Occlusion: the temporal-regularized update must beat linear
    // interpolation on mean IoU.
    let occ = generate(SynthKind::Occlude, 50, 42);
    let mean_iou = |mode: UpdateMode| -> f64 {
        let region = box_to_region(&occ.boxes[0]);
        let mut state =
            TrackerState::init(&occ.frames[0], &region, TrackerParams::default()).unwrap();
        let mut total = iou(&occ.boxes[0], &occ.boxes[0]).unwrap();
        for t in 1..occ.frames.len() {
            let predicted = state.step(&occ.frames[t], mode).unwrap();
            total += iou(&region_to_box(&predicted), &occ.boxes[t]).unwrap();
        }
        total / occ.frames.len() as f64
    };
    let strcf_iou = mean_iou(UpdateMode::TemporalRegularized);
    let interp_iou = mean_iou(UpdateMode::LinearInterpolation);
    assert!(
        strcf_iou > interp_iou,
        "occlusion: strcf {strcf_iou:.4} vs interp {interp_iou:.4}"
    );

    let secs = started.elapsed().as_secs_f64();
    assert!(secs < 60.0, "took {secs:.1}s, budget 60s");
    println!(
        "criterion 6 (synthetic tracking): PASS, translate OP 1.0, occlusion IoU strcf {strcf_iou:.3} > interp {interp_iou:.3}, {secs:.1}s"
    );
}

#[test]
fn criterion_7_temporal_variation_monotone_in_mu() {
    let dir = tempfile::tempdir().unwrap();
    let seq = generate(SynthKind::Occlude, 50, 42);
    write_otb_dir(&seq, dir.path()).unwrap();

    let sweep = [1.0, 4.0, 16.0, 64.0];
    let rows = strcf::cli::diag_sweep(dir.path(), &sweep, None).unwrap();
    let mut means = Vec::new();
    for &mu in &sweep {
        let values: Vec<f64> = rows
            .iter()
            .filter(|r| r.mu == mu && r.frame > 1)
            .map(|r| r.variation)
            .collect();
        means.push(values.iter().sum::<f64>() / values.len() as f64);
    }
    for pair in means.windows(2) {
        assert!(
            pair[1] <= pair[0] + 1e-12,
            "variation means not monotone: {means:?}"
        );
    }
    println!("criterion 7 (temporal variation non-increasing in mu): PASS, means {means:?}");
}

#[test]
fn criterion_8_cost_model() {
    let params = AdmmParams {
        mu: MU,
        iters: 2,
        ..AdmmParams::default()
    };
    let mut rng = ChaCha8Rng::seed_from_u64(808);
    let d = 2;

    let mut medians = Vec::new();
    for m in [32usize, 64, 128] {
        let x = random_stack(&mut rng, d, m, m);
        let y = gaussian_label(m, m, m as f64 / 16.0);
        let w = build_spatial_weight((m, m), (m as f64 / 2.0, m as f64 / 2.0), 0.1, 3.0);
        let f_prev = random_stack(&mut rng, d, m, m);

        learn(&x, &y, &w, &f_prev, &params).unwrap(); // warm-up (FFT plans)
        let mut times: Vec<f64> = (0..7)
            .map(|_| {
                let t0 = Instant::now();
                learn(&x, &y, &w, &f_prev, &params).unwrap();
                t0.elapsed().as_secs_f64()
            })
            .collect();
        times.sort_by(f64::total_cmp);
        medians.push(times[times.len() / 2]);
    }

    // 64 -> 128 quadruples MN, i.e. two doublings; the per-doubling growth
    // factor is the square root of the measured ratio. The smallest size
    // exists only to absorb warm-up effects.
    let per_doubling = (medians[2] / medians[1]).sqrt();
    assert!(
        per_doubling <= 2.6,
        "per-doubling growth {per_doubling:.2} (medians {medians:?})"
    );
    println!(
        "criterion 8 (cost model): PASS, per-doubling growth {per_doubling:.2} (medians {medians:?})"
    );
}

#[test]
fn criterion_9_harness_fidelity() {
    let dir = tempfile::tempdir().unwrap();
    let seq = generate(SynthKind::Static, 8, 9);
    write_otb_dir(&seq, dir.path()).unwrap();
    let loaded = load_sequence(dir.path()).unwrap();
    let (records, summary) = run_ope(
        &loaded,
        TrackerParams::default(),
        UpdateMode::TemporalRegularized,
    )
    .unwrap();

    assert_eq!(summary.mean_op_at_half, summary.success_curve[10]);
    let mean = summary.success_curve.iter().sum::<f64>() / summary.success_curve.len() as f64;
    assert_eq!(summary.auc, mean);
    for pair in summary.success_curve.windows(2) {
        assert!(pair[1] <= pair[0]);
    }

    // The JSON document round-trips through the schema types.
    let doc = strcf::eval::SequenceResult {
        sequence: loaded.name.clone(),
        mode: "strcf".into(),
        summary: summary.clone(),
        records: records.clone(),
    };
    let text = serde_json::to_string_pretty(&doc).unwrap();
    let parsed: strcf::eval::SequenceResult = serde_json::from_str(&text).unwrap();
    assert_eq!(parsed.records.len(), records.len());
    assert_eq!(parsed.summary.success_curve.len(), 21);
    assert!(parsed.summary.auc >= 0.0 && parsed.summary.auc <= 1.0);

    let csv = strcf::eval::curve_to_csv(&summary.success_curve);
    assert_eq!(csv.lines().count(), 21);
    for line in csv.lines() {
        let (a, b) = line.split_once(',').unwrap();
        assert_eq!(a.split('.').nth(1).unwrap().len(), 6);
        assert_eq!(b.split('.').nth(1).unwrap().len(), 6);
    }
    println!(
        "criterion 9 (harness fidelity): PASS, OP {:.3} AUC {:.3}",
        summary.mean_op_at_half, summary.auc
    );
}
