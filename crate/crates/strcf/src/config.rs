//! Flat key=value configuration covering every tracker tunable, so an
//! ablation run differs from the baseline by a one-line diff.

use std::path::Path;

use crate::error::{io_err, Error, Result};
use crate::features::WindowKind;
use crate::tracker::TrackerParams;

/// Canonical key order used by [`dump_config`].
const KEYS: [&str; 18] = [
    "cell_size",
    "orientation_bins",
    "include_gray",
    "window",
    "patch_size",
    "sigma_factor",
    "weight_min",
    "weight_alpha",
    "mu",
    "gamma0",
    "gamma_max",
    "rho",
    "admm_iters",
    "num_scales",
    "scale_step",
    "scale_lr",
    "scale_penalty",
    "interp_eta",
];

/// Serialize parameters in canonical order. `parse_config(dump_config(p))`
/// is the identity.
pub fn dump_config(p: &TrackerParams) -> String {
    let mut out = String::new();
    for key in KEYS {
        let value = match key {
            "cell_size" => p.features.cell_size.to_string(),
            "orientation_bins" => p.features.orientation_bins.to_string(),
            "include_gray" => p.features.include_gray.to_string(),
            "window" => match p.features.window {
                WindowKind::Cosine => "cosine".into(),
                WindowKind::None => "none".into(),
            },
            "patch_size" => p.patch_size.to_string(),
            "sigma_factor" => p.label.sigma_factor.to_string(),
            "weight_min" => p.weight_min.to_string(),
            "weight_alpha" => p.weight_alpha.to_string(),
            "mu" => p.admm.mu.to_string(),
            "gamma0" => p.admm.gamma0.to_string(),
            "gamma_max" => p.admm.gamma_max.to_string(),
            "rho" => p.admm.rho.to_string(),
            "admm_iters" => p.admm.iters.to_string(),
            "num_scales" => p.scale.num_scales.to_string(),
            "scale_step" => p.scale.scale_step.to_string(),
            "scale_lr" => p.scale.scale_lr.to_string(),
            "scale_penalty" => p.scale.penalty_eps.to_string(),
            "interp_eta" => p.interp_eta.to_string(),
            _ => unreachable!(),
        };
        out.push_str(&format!("{key} = {value}\n"));
    }
    out
}

fn parse_value<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::Config(format!("bad value {value:?} for key {key:?}")))
}

/// Parse a config document. Starts from the defaults; unknown or repeated
/// keys are rejected, values are validated against the module invariants.
pub fn parse_config(text: &str) -> Result<TrackerParams> {
    let mut params = TrackerParams::default();
    let mut seen = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            Error::Config(format!("line {}: expected key = value, got {raw:?}", idx + 1))
        })?;
        let key = key.trim();
        let value = value.trim();
        if !KEYS.contains(&key) {
            return Err(Error::Config(format!("unknown key {key:?}")));
        }
        if seen.contains(&key.to_string()) {
            return Err(Error::Config(format!("duplicate key {key:?}")));
        }
        seen.push(key.to_string());

        match key {
            "cell_size" => params.features.cell_size = parse_value(key, value)?,
            "orientation_bins" => params.features.orientation_bins = parse_value(key, value)?,
            "include_gray" => params.features.include_gray = parse_value(key, value)?,
            "window" => {
                params.features.window = match value {
                    "cosine" => WindowKind::Cosine,
                    "none" => WindowKind::None,
                    other => {
                        return Err(Error::Config(format!(
                            "bad value {other:?} for key \"window\" (expected cosine|none)"
                        )))
                    }
                }
            }
            "patch_size" => params.patch_size = parse_value(key, value)?,
            "sigma_factor" => params.label.sigma_factor = parse_value(key, value)?,
            "weight_min" => params.weight_min = parse_value(key, value)?,
            "weight_alpha" => params.weight_alpha = parse_value(key, value)?,
            "mu" => params.admm.mu = parse_value(key, value)?,
            "gamma0" => params.admm.gamma0 = parse_value(key, value)?,
            "gamma_max" => params.admm.gamma_max = parse_value(key, value)?,
            "rho" => params.admm.rho = parse_value(key, value)?,
            "admm_iters" => params.admm.iters = parse_value(key, value)?,
            "num_scales" => params.scale.num_scales = parse_value(key, value)?,
            "scale_step" => params.scale.scale_step = parse_value(key, value)?,
            "scale_lr" => params.scale.scale_lr = parse_value(key, value)?,
            "scale_penalty" => params.scale.penalty_eps = parse_value(key, value)?,
            "interp_eta" => params.interp_eta = parse_value(key, value)?,
            _ => unreachable!(),
        }
    }
    params.validate()?;
    Ok(params)
}

/// Load and validate a config file.
pub fn load_config(path: &Path) -> Result<TrackerParams> {
    let text = std::fs::read_to_string(path).map_err(io_err(path))?;
    parse_config(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_round_trip_as_fixed_point() {
        let params = TrackerParams::default();
        let dumped = dump_config(&params);
        let parsed = parse_config(&dumped).unwrap();
        assert_eq!(parsed, params);
        assert_eq!(dump_config(&parsed), dumped);
    }

    #[test]
    fn defaults_match_declared_values() {
        let dumped = dump_config(&TrackerParams::default());
        for expect in [
            "cell_size = 4",
            "orientation_bins = 9",
            "include_gray = true",
            "window = cosine",
            "patch_size = 200",
            "sigma_factor = 0.0625",
            "weight_min = 0.1",
            "weight_alpha = 3",
            "mu = 16",
            "gamma0 = 10",
            "gamma_max = 100",
            "rho = 1.2",
            "admm_iters = 2",
            "num_scales = 5",
            "scale_step = 1.01",
            "scale_lr = 0.025",
            "scale_penalty = 0.005",
            "interp_eta = 0.025",
        ] {
            assert!(dumped.contains(expect), "missing {expect:?} in\n{dumped}");
        }
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(matches!(
            parse_config("learning_rate = 0.1\n"),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn duplicate_keys_are_rejected() {
        assert!(matches!(
            parse_config("mu = 16\nmu = 8\n"),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn invalid_values_are_rejected() {
        for bad in [
            "mu = -1",
            "gamma0 = 0",
            "gamma_max = 5",
            "rho = 0.5",
            "admm_iters = 0",
            "num_scales = 4",
            "scale_step = 1",
            "scale_lr = 2",
            "interp_eta = 1.5",
            "cell_size = 0",
            "orientation_bins = 1",
            "patch_size = 201",
            "mu = sixteen",
        ] {
            assert!(
                matches!(parse_config(&format!("{bad}\n")), Err(Error::Config(_))),
                "{bad} should be rejected"
            );
        }
    }

    #[test]
    fn comments_and_blank_lines_are_ignored() {
        let params = parse_config("# ablation: no temporal term\n\nmu = 0\n").unwrap();
        assert_eq!(params.admm.mu, 0.0);
        assert_eq!(params.admm.gamma0, 10.0);
    }

    #[test]
    fn single_knob_ablation_is_one_line_diff() {
        let base = dump_config(&TrackerParams::default());
        let ablated = dump_config(&parse_config("mu = 0\n").unwrap());
        let differing: Vec<(&str, &str)> = base
            .lines()
            .zip(ablated.lines())
            .filter(|(a, b)| a != b)
            .collect();
        assert_eq!(differing, vec![("mu = 16", "mu = 0")]);
    }
}
