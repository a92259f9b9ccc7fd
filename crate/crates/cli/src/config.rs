//! Flat key-value run configuration.
//!
//! One `key = value` per line, `#` starts a comment. Unknown keys are
//! errors. All problems are collected and reported together, not just the
//! first.
//!
//! Keys: `M, Q, rho_min, rho_max, n_points, cfl, t_end, modes` (required)
//! and `snapshot_cadence, beta_list, p_list, chi_plateau, chi_support,
//! morawetz_b, morawetz_sigma, sphere_quad_order` (optional; see README
//! for defaults). `modes` is a comma-separated list of
//! `l:kind:center:width:amplitude` entries.

use rnwave_core::evolution::{EvolutionConfig, GridSpec, InitialDataKind, ModeSpec};
use rnwave_core::functionals::{ChiAlpha, FunctionalSet};
use rnwave_core::geometry::SpacetimeParams;

/// Fully validated run configuration.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub evolution: EvolutionConfig<f64>,
    pub functionals: FunctionalSet<f64>,
    /// Morawetz weight knobs (validated; consumed by the library API).
    pub morawetz_b: f64,
    pub morawetz_sigma: f64,
    /// The raw text, echoed verbatim into the output directory.
    pub echo: String,
}

const KNOWN_KEYS: &[&str] = &[
    "M",
    "Q",
    "rho_min",
    "rho_max",
    "n_points",
    "cfl",
    "t_end",
    "modes",
    "snapshot_cadence",
    "beta_list",
    "p_list",
    "chi_plateau",
    "chi_support",
    "morawetz_b",
    "morawetz_sigma",
    "sphere_quad_order",
];

/// Parses and validates; returns either the config or every error found.
pub fn parse_config(text: &str) -> Result<RunConfig, Vec<String>> {
    let mut errors = Vec::new();
    let mut pairs: Vec<(String, String, usize)> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = match raw.find('#') {
            Some(i) => &raw[..i],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        match line.split_once('=') {
            Some((k, v)) => pairs.push((k.trim().to_string(), v.trim().to_string(), lineno + 1)),
            None => errors.push(format!("line {}: expected `key = value`", lineno + 1)),
        }
    }

    let get = |key: &str| -> Option<String> {
        pairs
            .iter()
            .rev()
            .find(|(k, _, _)| k == key)
            .map(|(_, v, _)| v.clone())
    };
    for (k, _, lineno) in &pairs {
        if !KNOWN_KEYS.contains(&k.as_str()) {
            errors.push(format!("line {lineno}: unknown key `{k}`"));
        }
    }

    let num = |key: &str, default: Option<f64>, errors: &mut Vec<String>| -> f64 {
        match get(key) {
            Some(v) => v.parse::<f64>().unwrap_or_else(|_| {
                errors.push(format!("{key}: cannot parse `{v}` as a number"));
                f64::NAN
            }),
            None => match default {
                Some(d) => d,
                None => {
                    errors.push(format!("{key}: required key missing"));
                    f64::NAN
                }
            },
        }
    };

    let m = num("M", None, &mut errors);
    let q = num("Q", None, &mut errors);
    let rho_min = num("rho_min", None, &mut errors);
    let rho_max = num("rho_max", None, &mut errors);
    let n_points = num("n_points", None, &mut errors);
    let cfl = num("cfl", Some(0.5), &mut errors);
    let t_end = num("t_end", None, &mut errors);
    let cadence = num("snapshot_cadence", Some(1.0), &mut errors);
    let chi_plateau = num("chi_plateau", Some(1.0), &mut errors);
    let chi_support = num("chi_support", Some(2.0), &mut errors);
    let morawetz_b = num("morawetz_b", Some(0.1), &mut errors);
    let morawetz_sigma = num("morawetz_sigma", Some(2.0), &mut errors);
    let sphere_order = num("sphere_quad_order", Some(0.0), &mut errors);

    let params = match SpacetimeParams::new(m, q) {
        Ok(p) => Some(p),
        Err(e) => {
            if m.is_finite() && q.is_finite() {
                errors.push(format!("M/Q: {e}"));
            }
            None
        }
    };

    let list = |key: &str, default: &[f64], errors: &mut Vec<String>| -> Vec<f64> {
        match get(key) {
            Some(v) => v
                .split(',')
                .map(|s| {
                    s.trim().parse::<f64>().unwrap_or_else(|_| {
                        errors.push(format!("{key}: cannot parse `{s}`"));
                        f64::NAN
                    })
                })
                .collect(),
            None => default.to_vec(),
        }
    };
    let betas = list("beta_list", &[1.0, 2.0], &mut errors);
    let ps = list("p_list", &[0.75], &mut errors);
    for &b in &betas {
        if !(b > 0.0) {
            errors.push(format!("beta_list: beta must be positive, got {b}"));
        }
    }
    for &p in &ps {
        if !(0.0..=2.0).contains(&p) {
            errors.push(format!("p_list: p must lie in [0, 2], got {p}"));
        }
    }
    if !(morawetz_sigma > 1.0) {
        errors.push(format!("morawetz_sigma: must exceed 1, got {morawetz_sigma}"));
    }
    if !(morawetz_b > 0.0) {
        errors.push(format!("morawetz_b: must be positive, got {morawetz_b}"));
    }

    let chi = match ChiAlpha::new(chi_plateau, chi_support) {
        Ok(chi) => Some(chi),
        Err(e) => {
            if chi_plateau.is_finite() && chi_support.is_finite() {
                errors.push(format!("chi_alpha: {e}"));
            }
            None
        }
    };

    let mut modes = Vec::new();
    match get("modes") {
        Some(v) => {
            for entry in v.split(',') {
                match parse_mode(entry.trim()) {
                    Ok(mode) => modes.push(mode),
                    Err(e) => errors.push(format!("modes: `{}`: {e}", entry.trim())),
                }
            }
        }
        None => errors.push("modes: required key missing".into()),
    }

    if n_points.is_finite() && (n_points < 16.0 || n_points.fract() != 0.0) {
        errors.push(format!("n_points: need an integer >= 16, got {n_points}"));
    }
    if cfl.is_finite() && !(cfl > 0.0 && cfl <= 0.9) {
        errors.push(format!("cfl: must lie in (0, 0.9], got {cfl}"));
    }
    if t_end.is_finite() && t_end < 1.0 {
        errors.push(format!("t_end: must be at least t0 = 1, got {t_end}"));
    }
    if cadence.is_finite() && !(cadence > 0.0) {
        errors.push(format!("snapshot_cadence: must be positive, got {cadence}"));
    }
    if rho_min.is_finite() && rho_max.is_finite() && !(rho_min < 0.0 && rho_max > 0.0) {
        errors.push(format!(
            "grid: must straddle the photon sphere (rho_min < 0 < rho_max), got [{rho_min}, {rho_max}]"
        ));
    }
    if sphere_order.is_finite() && (sphere_order < 0.0 || sphere_order.fract() != 0.0) {
        errors.push(format!("sphere_quad_order: need a nonnegative integer, got {sphere_order}"));
    }

    let (Some(params), Some(chi)) = (params, chi) else {
        return Err(errors);
    };
    let evolution = EvolutionConfig {
        params,
        grid: GridSpec {
            rho_min,
            rho_max,
            n_points: n_points as usize,
        },
        modes,
        t0: 1.0,
        t_end,
        cfl,
        snapshot_cadence: cadence,
        threads: worker_cap(),
    };
    if let Err(e) = evolution.validate() {
        let msg = e.to_string();
        if !errors.iter().any(|prev| prev.contains(&msg) || msg.contains("cfl") || msg.contains("t_end")) {
            errors.push(msg);
        }
    }
    if !errors.is_empty() {
        return Err(errors);
    }
    let functionals = FunctionalSet {
        betas,
        ps,
        chi,
        sphere_order: sphere_order as usize,
        with_sobolev: true,
    };
    Ok(RunConfig {
        evolution,
        functionals,
        morawetz_b,
        morawetz_sigma,
        echo: text.to_string(),
    })
}

fn parse_mode(entry: &str) -> Result<ModeSpec<f64>, String> {
    let parts: Vec<&str> = entry.split(':').collect();
    if parts.len() != 5 {
        return Err("expected l:kind:center:width:amplitude".into());
    }
    let l: u32 = parts[0].parse().map_err(|_| format!("bad l `{}`", parts[0]))?;
    let kind = InitialDataKind::parse(parts[1]).ok_or_else(|| {
        format!(
            "unknown kind `{}` (time_symmetric_gaussian | ingoing_gaussian | static_moment)",
            parts[1]
        )
    })?;
    let center: f64 = parts[2].parse().map_err(|_| format!("bad center `{}`", parts[2]))?;
    let width: f64 = parts[3].parse().map_err(|_| format!("bad width `{}`", parts[3]))?;
    let amplitude: f64 = parts[4]
        .parse()
        .map_err(|_| format!("bad amplitude `{}`", parts[4]))?;
    Ok(ModeSpec {
        l,
        kind,
        center,
        width,
        amplitude,
        multiplicity: 1.0,
    })
}

/// Worker cap from `RNWAVE_THREADS` (0 or unset = auto).
pub fn worker_cap() -> usize {
    std::env::var("RNWAVE_THREADS")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(0)
}
