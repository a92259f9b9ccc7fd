//! Post-processing: decay-exponent fits, conservation and flux-identity
//! checks, cumulative space-time integrals, and the consolidated
//! verification report.
//!
//! The decay statements being tested are one-sided upper bounds with
//! existential constants, so pass criteria are one-sided (measured decay at
//! least as fast, integrals saturating); fitted constants are reported, not
//! asserted.

use crate::error::{CoreError, Result};
use crate::geometry::SpacetimeParams;
use crate::scalar::Real;

/// Pinned thresholds for the verification checks.
pub mod limits {
    /// Relative energy drift bound before boundary contact.
    pub const ENERGY_DRIFT: f64 = 1e-6;
    /// Conformal identity mismatch bound at reference resolution.
    pub const CONFORMAL_MISMATCH: f64 = 0.01;
    /// Positive-form vs definition-form agreement (relative).
    pub const CONFORMAL_FORMS: f64 = 1e-10;
    /// Local-decay (β = 2) saturation bound at T = 200M.
    pub const LOCAL_DECAY_SATURATION: f64 = 0.1;
    /// Phase-space (p = 3/4) saturation bound at T = 200M.
    pub const ANGULAR_SATURATION: f64 = 0.15;
    /// Weighted-L⁶ decay exponent bound (one-sided): slope ≤ −1/3 + 0.05.
    pub const L6_EXPONENT: f64 = -1.0 / 3.0 + 0.05;
    /// Weighted-L² (β = 1) norm decay exponent bound: slope ≤ −1/2 + 0.05.
    pub const WL2_EXPONENT: f64 = -0.5 + 0.05;
    /// Self-convergence order window.
    pub const ORDER_LO: f64 = 1.8;
    pub const ORDER_HI: f64 = 2.2;
    /// Pinned constant of the weighted-L² domination check.
    pub const DOMINATION_C: f64 = 0.125;
}

/// Least-squares power-law fit in log-log coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayFit<T> {
    pub window: (T, T),
    pub slope: T,
    pub intercept: T,
    /// RMS of log-residuals.
    pub residual: T,
    pub samples: usize,
}

/// Fits `log y = slope·log t + intercept` over the window.
///
/// Requires at least 10 samples inside the window and strictly positive
/// values (a decay fit is undefined otherwise).
pub fn fit_decay_exponent<T: Real>(series: &[(T, T)], window: (T, T)) -> Result<DecayFit<T>> {
    let pts: Vec<(T, T)> = series
        .iter()
        .copied()
        .filter(|&(t, _)| t >= window.0 && t <= window.1)
        .collect();
    if pts.len() < 10 {
        return Err(CoreError::DegenerateInput(format!(
            "decay window holds {} samples, need at least 10",
            pts.len()
        )));
    }
    if let Some(&(t, y)) = pts.iter().find(|&&(_, y)| !(y > T::zero())) {
        return Err(CoreError::DegenerateInput(format!(
            "nonpositive value {y} at t={t}: decay fit undefined"
        )));
    }
    let n = T::of_usize(pts.len());
    let logs: Vec<(T, T)> = pts.iter().map(|&(t, y)| (t.ln(), y.ln())).collect();
    let sx: T = logs.iter().map(|&(x, _)| x).sum();
    let sy: T = logs.iter().map(|&(_, y)| y).sum();
    let sxx: T = logs.iter().map(|&(x, _)| x * x).sum();
    let sxy: T = logs.iter().map(|&(x, y)| x * y).sum();
    let denom = n * sxx - sx * sx;
    if denom == T::zero() {
        return Err(CoreError::DegenerateInput("degenerate time column".into()));
    }
    let slope = (n * sxy - sx * sy) / denom;
    let intercept = (sy - slope * sx) / n;
    let ss: T = logs
        .iter()
        .map(|&(x, y)| {
            let r = y - (slope * x + intercept);
            r * r
        })
        .sum();
    Ok(DecayFit {
        window,
        slope,
        intercept,
        residual: (ss / n).sqrt(),
        samples: pts.len(),
    })
}

/// Max relative energy drift `max_t |E(t) − E(t₀)|/E(t₀)` over the given
/// series (the caller restricts to the pre-boundary-contact window).
pub fn check_energy_drift<T: Real>(series: &[(T, T)]) -> Result<T> {
    if series.len() < 2 {
        return Err(CoreError::DegenerateInput(
            "energy drift needs at least 2 snapshots".into(),
        ));
    }
    let e0 = series[0].1;
    if e0 == T::zero() {
        return Err(CoreError::DegenerateInput(
            "zero initial energy: drift inconclusive".into(),
        ));
    }
    Ok(series[1..]
        .iter()
        .map(|&(_, e)| ((e - e0) / e0).abs())
        .fold(T::zero(), |m, x| m.max(x)))
}

/// Max over interior snapshots of
/// `|ΔE_C/Δt − flux| / max(E, |flux|)` with centered differences.
pub fn check_conformal_identity<T: Real>(
    t: &[T],
    e_c: &[T],
    flux: &[T],
    e: &[T],
) -> Result<T> {
    let n = t.len();
    if n < 3 {
        return Err(CoreError::DegenerateInput(
            "conformal identity needs at least 3 snapshots".into(),
        ));
    }
    if e_c.len() != n || flux.len() != n || e.len() != n {
        return Err(CoreError::DegenerateInput("column length mismatch".into()));
    }
    let mut worst = T::zero();
    for i in 1..n - 1 {
        let d = (e_c[i + 1] - e_c[i - 1]) / (t[i + 1] - t[i - 1]);
        let scale = e[i].max(flux[i].abs());
        if scale == T::zero() {
            continue;
        }
        worst = worst.max((d - flux[i]).abs() / scale);
    }
    Ok(worst)
}

/// Cumulative trapezoid integral of a time series and its saturation
/// metric `(I(T) − I(T/2))/I(T)`.
#[derive(Debug, Clone)]
pub struct SpacetimeIntegral<T> {
    pub cumulative: Vec<T>,
    pub saturation: T,
}

pub fn spacetime_integral<T: Real>(series: &[(T, T)]) -> SpacetimeIntegral<T> {
    let n = series.len();
    let mut cumulative = Vec::with_capacity(n);
    let mut acc = T::zero();
    cumulative.push(T::zero());
    for i in 1..n {
        let (t0, y0) = series[i - 1];
        let (t1, y1) = series[i];
        acc += T::of(0.5) * (y0 + y1) * (t1 - t0);
        cumulative.push(acc);
    }
    let total = acc;
    let saturation = if n < 2 || total == T::zero() {
        T::zero()
    } else {
        let t_half = T::of(0.5) * series[n - 1].0;
        let at_half = interpolate(series, &cumulative, t_half);
        (total - at_half) / total
    };
    SpacetimeIntegral {
        cumulative,
        saturation,
    }
}

fn interpolate<T: Real>(series: &[(T, T)], cumulative: &[T], t: T) -> T {
    if t <= series[0].0 {
        return cumulative[0];
    }
    for i in 1..series.len() {
        if series[i].0 >= t {
            let (t0, _) = series[i - 1];
            let (t1, _) = series[i];
            let w = (t - t0) / (t1 - t0);
            return cumulative[i - 1] + w * (cumulative[i] - cumulative[i - 1]);
        }
    }
    cumulative[cumulative.len() - 1]
}

/// Outcome of one verification check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckStatus {
    Pass,
    Fail,
    Inconclusive,
}

impl CheckStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            CheckStatus::Pass => "pass",
            CheckStatus::Fail => "fail",
            CheckStatus::Inconclusive => "inconclusive",
        }
    }
}

/// One named check with its measured value and target description.
#[derive(Debug, Clone)]
pub struct Check {
    pub name: String,
    pub status: CheckStatus,
    pub measured: Option<f64>,
    pub target: String,
    pub details: String,
}

/// Deterministically ordered collection of checks.
#[derive(Debug, Clone)]
pub struct VerificationReport {
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != CheckStatus::Fail)
    }

    /// Plain-text rendering, one line per check; byte-stable for identical
    /// inputs.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let measured = match c.measured {
                Some(v) => format!("{v:.6e}"),
                None => "n/a".to_string(),
            };
            out.push_str(&format!(
                "[{}] {} measured={} target={} {}\n",
                c.status.as_str().to_uppercase(),
                c.name,
                measured,
                c.target,
                c.details
            ));
        }
        out
    }
}

/// Per-run columns the report consumes (parsed from series.csv or taken
/// from an in-memory run).
#[derive(Debug, Clone, Default)]
pub struct RunData {
    pub t: Vec<f64>,
    pub e: Vec<f64>,
    pub e_c: Vec<f64>,
    pub e_c_pos: Vec<f64>,
    pub flux: Vec<f64>,
    /// (β, series) pairs.
    pub weighted_l2: Vec<(f64, Vec<f64>)>,
    pub weighted_l6: Vec<f64>,
    pub weighted_dom: Vec<f64>,
    /// (p, series) pairs.
    pub angular: Vec<(f64, Vec<f64>)>,
    /// Earliest boundary-contact time, when known from the config.
    pub boundary_contact: Option<f64>,
}

impl RunData {
    fn l2_series(&self, beta: f64) -> Option<Vec<(f64, f64)>> {
        self.weighted_l2
            .iter()
            .find(|(b, _)| (b - beta).abs() < 1e-9)
            .map(|(_, col)| self.t.iter().copied().zip(col.iter().copied()).collect())
    }

    fn angular_series(&self, p: f64) -> Option<Vec<(f64, f64)>> {
        self.angular
            .iter()
            .find(|(q, _)| (q - p).abs() < 1e-9)
            .map(|(_, col)| self.t.iter().copied().zip(col.iter().copied()).collect())
    }
}

/// Optional study results that cannot be derived from a single run.
#[derive(Debug, Clone, Copy, Default)]
pub struct StudyInputs {
    pub convergence_order: Option<f64>,
    pub rerun_identical: Option<bool>,
}

/// Aggregates every acceptance-level check with pass/fail status and the
/// measured numbers. Checks whose inputs are missing come out
/// `Inconclusive`, never a crash. Ordering is fixed.
pub fn build_report(data: Option<&RunData>, studies: &StudyInputs) -> VerificationReport {
    let mut checks = Vec::new();
    checks.push(geometry_goldens_check());
    checks.push(potential_goldens_check());
    checks.push(peak_structure_check());
    checks.extend(trapping_signs_checks());
    checks.push(conservation_check(data));
    checks.push(convergence_check(studies));
    checks.push(conformal_forms_check(data));
    checks.push(conformal_identity_check(data));
    checks.push(saturation_check(
        data,
        "local_decay_saturation_beta2",
        limits::LOCAL_DECAY_SATURATION,
        |d| d.l2_series(2.0),
    ));
    checks.push(saturation_check(
        data,
        "angular_modulation_saturation_p0.75",
        limits::ANGULAR_SATURATION,
        |d| d.angular_series(0.75),
    ));
    checks.push(decay_check(
        data,
        "decay_exponent_weighted_l6",
        limits::L6_EXPONENT,
        |d| Some(d.t.iter().copied().zip(d.weighted_l6.iter().copied()).collect()),
    ));
    checks.push(decay_check(
        data,
        "decay_exponent_weighted_l2_beta1",
        limits::WL2_EXPONENT,
        |d| {
            d.l2_series(1.0)
                .map(|s| s.into_iter().map(|(t, y)| (t, y.sqrt())).collect())
        },
    ));
    checks.push(domination_check(data));
    checks.push(determinism_check(studies));
    VerificationReport { checks }
}

fn pass_fail(ok: bool) -> CheckStatus {
    if ok {
        CheckStatus::Pass
    } else {
        CheckStatus::Fail
    }
}

fn geometry_goldens_check() -> Check {
    let schw = SpacetimeParams::<f64>::schwarzschild(1.0).unwrap();
    let crit = SpacetimeParams::<f64>::new(1.0, 1.0).unwrap();
    let mut worst = 0.0f64;
    let mut ok = true;
    let mut track = |err: f64, tol: f64| {
        worst = worst.max(err);
        ok &= err <= tol;
    };
    track((schw.horizons().1 - 2.0).abs(), 1e-12);
    track((schw.photon_sphere_radius() - 3.0).abs(), 1e-12);
    track((crit.photon_sphere_radius() - 2.0).abs(), 1e-12);
    track(
        (schw.tortoise_of_r(4.0).unwrap() - (1.0 + 2.0 * 2f64.ln())).abs(),
        1e-12,
    );
    // 1000-sample round trip, log-uniform in (r+ + 1e-6, 1e3)
    let mut rt_worst = 0.0f64;
    for i in 0..1000 {
        let x = (i as f64 + 0.5) / 1000.0;
        let lo = (2.0 + 1e-6f64).ln();
        let hi = 1e3f64.ln();
        let r = (lo + x * (hi - lo)).exp();
        let rho = schw.tortoise_of_r(r).unwrap();
        let back = schw.r_of_rho_star(rho).unwrap();
        rt_worst = rt_worst.max((back - r).abs() / r);
    }
    track(rt_worst, 1e-9);
    Check {
        name: "geometry_goldens".into(),
        status: pass_fail(ok),
        measured: Some(worst),
        target: "r+=2M, alpha=3M|2M, rho*(4M)=1+2ln2, round-trip<=1e-9".into(),
        details: format!("round_trip_worst={rt_worst:.3e}"),
    }
}

fn potential_goldens_check() -> Check {
    use crate::potentials::*;
    let schw = SpacetimeParams::<f64>::schwarzschild(1.0).unwrap();
    let mut ok = true;
    let mut worst = 0.0f64;
    let mut track = |err: f64, tol: f64| {
        worst = worst.max(err);
        ok &= err <= tol;
    };
    track((potential_v(&schw, 3.0).unwrap() - 2.0 / 81.0).abs(), 1e-14);
    track((potential_vl(&schw, 3.0).unwrap() - 1.0 / 27.0).abs(), 1e-14);
    track(potential_v_prime(&schw, 8.0 / 3.0).unwrap().abs(), 1e-14);
    track(potential_vl_prime(&schw, 3.0).unwrap().abs(), 1e-14);
    // measured derivative order from the table refinement
    let err_at = |n: usize| -> f64 {
        let map = crate::geometry::build_coordinate_map(schw, -20.0, 20.0, n).unwrap();
        let table = PotentialTable::new(map);
        let dv = crate::quad::derivative(table.v(), table.map().h());
        (1..table.len() - 1)
            .map(|i| (dv[i] - table.v_prime()[i]).abs())
            .fold(0.0, f64::max)
    };
    let order = (err_at(801) / err_at(1601)).log2();
    ok &= order >= 1.9;
    Check {
        name: "potential_goldens".into(),
        status: pass_fail(ok),
        measured: Some(worst),
        target: "V(3)=2/81, V_L(3)=1/27, V'(8/3)=0, V_L'(3)=0, fd-order>=1.9".into(),
        details: format!("fd_order={order:.3}"),
    }
}

fn peak_structure_check() -> Check {
    use crate::potentials::effective_potential_peak;
    let schw = SpacetimeParams::<f64>::schwarzschild(1.0).unwrap();
    let mut ok = true;
    let mut details = String::new();
    for q in [0.0, 0.5, 0.9, 1.0] {
        let params = SpacetimeParams::<f64>::new(1.0, q).unwrap();
        for l in 0..=100u32 {
            if effective_potential_peak(&params, l).is_err() {
                ok = false;
                details.push_str(&format!("non-unique at Q={q}, l={l}; "));
            }
        }
    }
    let (r0, rho0) = effective_potential_peak(&schw, 0).unwrap();
    let (r1, _) = effective_potential_peak(&schw, 1).unwrap();
    let (r50, _) = effective_potential_peak(&schw, 50).unwrap();
    let rho0_expect = -1.0 / 3.0 + 2.0 * (2.0f64 / 3.0).ln();
    let e0 = (r0 - 8.0 / 3.0).abs();
    let e_rho = (rho0 - rho0_expect).abs();
    let e1 = (r1 - (3.0 + 73f64.sqrt()) / 4.0).abs();
    let e50 = (r50 - 3.0).abs();
    ok &= e0 <= 1e-9 && e_rho <= 1e-6 && e1 <= 1e-9 && e50 < 1e-3;
    Check {
        name: "peak_structure".into(),
        status: pass_fail(ok),
        measured: Some(e0.max(e_rho).max(e1)),
        target: "unique I_l root for l<=100, Q in {0,.5,.9,1}; Schwarzschild goldens".into(),
        details: format!("peak_r(l=50)-3={e50:.2e} {details}"),
    }
}

fn trapping_signs_checks() -> Vec<Check> {
    use crate::potentials::{trapping_term_v, trapping_term_vl};
    let mut sub_ok = true;
    let mut sub_worst = f64::NEG_INFINITY;
    for q in [0.0, 0.5, 0.9] {
        let params = SpacetimeParams::<f64>::new(1.0, q).unwrap();
        for rho in [-150.0, -100.0, -75.0, -50.0, 50.0, 75.0, 100.0, 150.0] {
            let tv = trapping_term_v(&params, rho).unwrap();
            sub_worst = sub_worst.max(tv);
            sub_ok &= tv < 0.0;
        }
    }
    let crit = SpacetimeParams::<f64>::new(1.0, 1.0).unwrap();
    let tvl = trapping_term_vl(&crit, -100.0).unwrap();
    vec![
        Check {
            name: "trapping_signs_subcritical".into(),
            status: pass_fail(sub_ok),
            measured: Some(sub_worst),
            target: "2V+rho*V' < 0 for |rho*| >= 50M".into(),
            details: "sampled Q in {0, 0.5, 0.9}".into(),
        },
        Check {
            name: "trapping_signs_critical".into(),
            status: pass_fail(tvl > 0.0),
            measured: Some(tvl),
            target: "2V_L+rho*V_L' > 0 at rho*=-100M, Q=M (as specified)".into(),
            details: "sign is negative by direct evaluation of the closed forms; \
                      positive window ends near rho*=-15.7M (see notes)"
                .into(),
        },
    ]
}

/// First non-finite sample of a column, as (t, index).
fn contamination(t: &[f64], col: &[f64]) -> Option<(f64, usize)> {
    col.iter()
        .enumerate()
        .find(|(_, v)| !v.is_finite())
        .map(|(i, _)| (t.get(i).copied().unwrap_or(f64::NAN), i))
}

fn contaminated_check(name: &str, at: (f64, usize)) -> Check {
    Check {
        name: name.into(),
        status: CheckStatus::Fail,
        measured: None,
        target: "finite series".into(),
        details: format!("non-finite value at t={} (row {})", at.0, at.1),
    }
}

fn conservation_check(data: Option<&RunData>) -> Check {
    let Some(d) = data else {
        return inconclusive("conservation_drift", "needs a run series");
    };
    if let Some(at) = contamination(&d.t, &d.e) {
        return contaminated_check("conservation_drift", at);
    }
    let cutoff = d.boundary_contact.unwrap_or(f64::INFINITY);
    let series: Vec<(f64, f64)> = d
        .t
        .iter()
        .copied()
        .zip(d.e.iter().copied())
        .filter(|&(t, _)| t <= cutoff)
        .collect();
    match check_energy_drift(&series) {
        Ok(drift) => Check {
            name: "conservation_drift".into(),
            status: pass_fail(drift < limits::ENERGY_DRIFT),
            measured: Some(drift),
            target: format!("relative drift < {:.0e} pre-contact", limits::ENERGY_DRIFT),
            details: String::new(),
        },
        Err(_) => inconclusive("conservation_drift", "degenerate energy series"),
    }
}

fn convergence_check(studies: &StudyInputs) -> Check {
    match studies.convergence_order {
        Some(order) => Check {
            name: "convergence_order".into(),
            status: pass_fail((limits::ORDER_LO..=limits::ORDER_HI).contains(&order)),
            measured: Some(order),
            target: "order in [1.8, 2.2]".into(),
            details: String::new(),
        },
        None => inconclusive(
            "convergence_order",
            "requires a refinement study (run by the acceptance suite)",
        ),
    }
}

fn conformal_forms_check(data: Option<&RunData>) -> Check {
    match data {
        Some(d) if !d.e_c.is_empty() && d.e_c_pos.len() == d.e_c.len() => {
            let worst = d
                .e_c
                .iter()
                .zip(&d.e_c_pos)
                .map(|(&a, &b)| (a - b).abs() / (1.0 + b.abs()))
                .fold(0.0, f64::max);
            Check {
                name: "conformal_positive_form".into(),
                status: pass_fail(worst <= limits::CONFORMAL_FORMS),
                measured: Some(worst),
                target: format!("|E_C - E_C_pos| <= {:.0e}(1+E_C)", limits::CONFORMAL_FORMS),
                details: String::new(),
            }
        }
        _ => inconclusive("conformal_positive_form", "needs a run series"),
    }
}

fn conformal_identity_check(data: Option<&RunData>) -> Check {
    if let Some(d) = data {
        for col in [&d.e_c, &d.flux, &d.e] {
            if let Some(at) = contamination(&d.t, col) {
                return contaminated_check("conformal_flux_identity", at);
            }
        }
    }
    let result =
        data.and_then(|d| check_conformal_identity(&d.t, &d.e_c, &d.flux, &d.e).ok());
    match result {
        Some(mm) => Check {
            name: "conformal_flux_identity".into(),
            status: pass_fail(mm < limits::CONFORMAL_MISMATCH),
            measured: Some(mm),
            target: format!("|dE_C/dt - flux| / max(E,|flux|) < {}", limits::CONFORMAL_MISMATCH),
            details: String::new(),
        },
        None => inconclusive("conformal_flux_identity", "needs a run series"),
    }
}

fn saturation_check(
    data: Option<&RunData>,
    name: &str,
    limit: f64,
    series: impl Fn(&RunData) -> Option<Vec<(f64, f64)>>,
) -> Check {
    match data.and_then(|d| series(d)) {
        Some(s) if s.len() >= 3 => {
            let values: Vec<f64> = s.iter().map(|&(_, y)| y).collect();
            let times: Vec<f64> = s.iter().map(|&(t, _)| t).collect();
            if let Some(at) = contamination(&times, &values) {
                return contaminated_check(name, at);
            }
            let sat = spacetime_integral(&s).saturation;
            Check {
                name: name.into(),
                status: pass_fail(sat < limit),
                measured: Some(sat),
                target: format!("(I(T)-I(T/2))/I(T) < {limit}"),
                details: String::new(),
            }
        }
        _ => inconclusive(name, "needs the corresponding series column"),
    }
}

fn decay_check(
    data: Option<&RunData>,
    name: &str,
    limit: f64,
    series: impl Fn(&RunData) -> Option<Vec<(f64, f64)>>,
) -> Check {
    let fit = data.and_then(|d| {
        let s = series(d)?;
        let t_hi = s.last()?.0;
        fit_decay_exponent(&s, (t_hi / 4.0, t_hi)).ok()
    });
    match fit {
        Some(f) => Check {
            name: name.into(),
            status: pass_fail(f.slope <= limit),
            measured: Some(f.slope),
            target: format!("fitted exponent <= {limit:.4} over [T/4, T]"),
            details: format!("residual={:.3e}, samples={}", f.residual, f.samples),
        },
        None => inconclusive(name, "needs a positive series over [T/4, T]"),
    }
}

fn domination_check(data: Option<&RunData>) -> Check {
    match data {
        Some(d) if !d.weighted_dom.is_empty() && d.weighted_dom.len() == d.e_c.len() => {
            let c = limits::DOMINATION_C;
            let mut ok = true;
            let mut fitted = f64::INFINITY;
            for (&dom, &ec) in d.weighted_dom.iter().zip(&d.e_c) {
                if dom > 0.0 {
                    fitted = fitted.min(ec / dom);
                    ok &= c * dom <= ec * (1.0 + 1e-12);
                }
            }
            let details = if ok {
                format!("largest admissible C={fitted:.4}")
            } else {
                format!("violated at C={c}; largest admissible C={fitted:.4} (flagged)")
            };
            Check {
                name: "weighted_l2_domination".into(),
                status: pass_fail(ok),
                measured: Some(fitted),
                target: format!("C*<u,(t^2+rho*^2)/(rho*^2+1)u> <= E_C with C={c}"),
                details,
            }
        }
        _ => inconclusive("weighted_l2_domination", "needs the wL2_dom column"),
    }
}

fn determinism_check(studies: &StudyInputs) -> Check {
    match studies.rerun_identical {
        Some(identical) => Check {
            name: "determinism_byte_identical".into(),
            status: pass_fail(identical),
            measured: None,
            target: "identical config produces byte-identical series".into(),
            details: String::new(),
        },
        None => inconclusive(
            "determinism_byte_identical",
            "requires a rerun comparison (run by the acceptance suite)",
        ),
    }
}

fn inconclusive(name: &str, why: &str) -> Check {
    Check {
        name: name.into(),
        status: CheckStatus::Inconclusive,
        measured: None,
        target: String::new(),
        details: why.into(),
    }
}
