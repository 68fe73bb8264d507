//! Visual object tracking with spatial-temporal regularized correlation
//! filters.
//!
//! The filter for each frame minimizes a single-sample correlation loss
//! plus a spatial penalty on coefficient locations and a temporal penalty
//! toward the previous frame's filter, solved in the Fourier domain by
//! ADMM with closed-form subproblems (a per-pixel Sherman-Morrison solve,
//! an elementwise division, and a multiplier update). Around the solver
//! sit HOG-style features, a scale-searching detection step, an OTB-style
//! one-pass evaluation harness, and brute-force oracles used to verify the
//! solver in the test suite.
//!
//! Start with the `examples/` directory:
//!
//! * `learn_filter` — solve one filter-learning instance and watch the
//!   objective converge against the brute-force oracle.
//! * `hog_features` — extract and inspect windowed feature channels.
//! * `track_synthetic` — full pipeline on a generated sequence, both
//!   update modes.
//! * `temporal_variation` — the filter-change diagnostic across a sweep
//!   of temporal weights.
//! * `snapshot_resume` — serialize a mid-sequence tracker and resume it.
//! * `evaluate_otb` — run the one-pass evaluation on any OTB-layout
//!   directory.
//!
//! The `strcf` binary wraps the same drivers as subcommands (`track`,
//! `eval`, `synth`, `diag`).

pub mod cli;
pub mod config;
pub mod error;
pub mod eval;
pub mod features;
pub mod grid;
pub mod oracle;
pub mod solver;
pub mod synth;
pub mod tracker;

pub use error::{Error, Result};
