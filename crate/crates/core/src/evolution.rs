//! Time-domain evolution of spherical-harmonic modes of
//! `ü = u″ − V_l u` on the uniform `ρ*` grid.
//!
//! The integrator is velocity-Verlet (equivalent to the classic three-level
//! leapfrog for this linear system): second order, time-reversible, no
//! artificial dissipation, so the conservation identities of the functional
//! layer are testable. Boundaries are outgoing (Sommerfeld): `∂t u = +∂ρ* u`
//! on the left edge and `∂t u = −∂ρ* u` on the right, advanced with
//! one-sided second-order Lax-Wendroff updates.
//!
//! The Sommerfeld condition is exact only where `V_l` vanishes; it decays
//! exponentially toward the left edge but only like `l(l+1)/ρ*²` on the
//! right, so the primary accuracy control for long diagnostics is grid
//! placement: keep `rho_max` large enough that edge reflections stay
//! causally disconnected from the diagnostic region for the whole run.

use crate::error::{CoreError, Result};
use crate::functionals::{FunctionalRecord, FunctionalSet};
use crate::geometry::{build_coordinate_map, SpacetimeParams};
use crate::potentials::PotentialTable;
use crate::scalar::Real;

/// One spherical-harmonic mode: amplitude, velocity, current time.
#[derive(Debug, Clone)]
pub struct ModeState<T> {
    pub l: u32,
    /// Mode amplitude u(ρ*) (unit-normalized spherical harmonics).
    pub u: Vec<T>,
    /// ∂u/∂t on the same grid.
    pub v: Vec<T>,
    pub t: T,
    /// m-degeneracy emulation weight applied to quadratic functionals.
    pub multiplicity: T,
}

impl<T: Real> ModeState<T> {
    pub fn new(l: u32, u: Vec<T>, v: Vec<T>, t: T) -> Self {
        assert_eq!(u.len(), v.len());
        Self {
            l,
            u,
            v,
            t,
            multiplicity: T::one(),
        }
    }

    pub fn len(&self) -> usize {
        self.u.len()
    }

    pub fn is_empty(&self) -> bool {
        self.u.is_empty()
    }
}

/// Families of initial data.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitialDataKind {
    /// u₀ = A·exp(−(ρ*−c)²/w²), u₁ = 0.
    TimeSymmetricGaussian,
    /// u₁ = +u₀′ : a pulse moving toward the horizon.
    IngoingGaussian,
    /// u₀ = 0, u₁ = gaussian.
    StaticMoment,
}

impl InitialDataKind {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "time_symmetric_gaussian" => Some(Self::TimeSymmetricGaussian),
            "ingoing_gaussian" => Some(Self::IngoingGaussian),
            "static_moment" => Some(Self::StaticMoment),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::TimeSymmetricGaussian => "time_symmetric_gaussian",
            Self::IngoingGaussian => "ingoing_gaussian",
            Self::StaticMoment => "static_moment",
        }
    }
}

/// Half-width multiple treated as the support radius of a gaussian; beyond
/// 6w the profile is below 2.4e−16 of its peak.
const SUPPORT_WIDTHS: f64 = 6.0;

/// Builds (u₀, u₁) for one mode on the given grid.
///
/// Rejects data whose support (|ρ*−c| ≤ 6w) comes within 10 cells of a
/// boundary, and centers outside the middle 80% of the grid.
pub fn make_initial_data<T: Real>(
    kind: InitialDataKind,
    center: T,
    width: T,
    amplitude: T,
    _l: u32,
    rho: &[T],
) -> Result<(Vec<T>, Vec<T>)> {
    let n = rho.len();
    if n < 16 {
        return Err(CoreError::InvalidData("grid too small".into()));
    }
    if !(width > T::zero()) {
        return Err(CoreError::InvalidData(format!("width must be positive, got {width}")));
    }
    let lo = rho[0];
    let hi = rho[n - 1];
    let span = hi - lo;
    let margin = T::of(0.1) * span;
    if center < lo + margin || center > hi - margin {
        return Err(CoreError::InvalidData(format!(
            "center {center} outside the middle 80% of [{lo}, {hi}]"
        )));
    }
    let h = (hi - lo) / T::of_usize(n - 1);
    let support = T::of(SUPPORT_WIDTHS) * width;
    let guard = T::of(10.0) * h;
    if center - support < lo + guard || center + support > hi - guard {
        return Err(CoreError::InvalidData(format!(
            "data support [{}, {}] within 10 cells of a boundary",
            center - support,
            center + support
        )));
    }

    let gauss = |x: T| amplitude * (-((x - center) / width).powi(2)).exp();
    let gauss_prime = |x: T| {
        let g = gauss(x);
        -T::of(2.0) * (x - center) / (width * width) * g
    };
    let zero = vec![T::zero(); n];
    let profile: Vec<T> = rho.iter().map(|&x| gauss(x)).collect();
    Ok(match kind {
        InitialDataKind::TimeSymmetricGaussian => (profile, zero),
        InitialDataKind::IngoingGaussian => {
            let du: Vec<T> = rho.iter().map(|&x| gauss_prime(x)).collect();
            (profile, du)
        }
        InitialDataKind::StaticMoment => (zero, profile),
    })
}

/// One mode's worth of evolution scratch: effective potential and the
/// acceleration buffer.
#[derive(Debug, Clone)]
pub struct Stepper<T> {
    v_eff: Vec<T>,
    h: T,
    acc: Vec<T>,
}

impl<T: Real> Stepper<T> {
    pub fn new(v_eff: Vec<T>, h: T) -> Self {
        let n = v_eff.len();
        assert!(n >= 6, "stepper needs at least 6 nodes");
        Self {
            v_eff,
            h,
            acc: vec![T::zero(); n],
        }
    }

    /// Advances (u, v) by one step of size `dt`; `dt` must satisfy the CFL
    /// bound for the grid (enforced by the driver).
    pub fn step(&mut self, state: &mut ModeState<T>, dt: T) -> Result<()> {
        let n = state.u.len();
        assert_eq!(n, self.v_eff.len());
        let h = self.h;
        let h2 = h * h;
        let two_h = T::of(2.0) * h;
        let half = T::of(0.5);
        let u = &mut state.u;
        let v = &mut state.v;

        // Outgoing boundary predictions from the pre-step field.
        let dxl = (-T::of(3.0) * u[0] + T::of(4.0) * u[1] - u[2]) / two_h;
        let dxxl = (T::of(2.0) * u[0] - T::of(5.0) * u[1] + T::of(4.0) * u[2] - u[3]) / h2;
        let ub_left = u[0] + dt * dxl + half * dt * dt * dxxl;
        let dxr = (T::of(3.0) * u[n - 1] - T::of(4.0) * u[n - 2] + u[n - 3]) / two_h;
        let dxxr =
            (T::of(2.0) * u[n - 1] - T::of(5.0) * u[n - 2] + T::of(4.0) * u[n - 3] - u[n - 4])
                / h2;
        let ub_right = u[n - 1] - dt * dxr + half * dt * dt * dxxr;

        for i in 1..n - 1 {
            self.acc[i] = (u[i - 1] - T::of(2.0) * u[i] + u[i + 1]) / h2 - self.v_eff[i] * u[i];
        }
        let mut probe = T::zero();
        for i in 1..n - 1 {
            u[i] = u[i] + dt * v[i] + half * dt * dt * self.acc[i];
            probe += u[i];
        }
        u[0] = ub_left;
        u[n - 1] = ub_right;

        for i in 1..n - 1 {
            let acc_new =
                (u[i - 1] - T::of(2.0) * u[i] + u[i + 1]) / h2 - self.v_eff[i] * u[i];
            v[i] = v[i] + half * dt * (self.acc[i] + acc_new);
            probe += v[i];
        }
        v[0] = (-T::of(3.0) * u[0] + T::of(4.0) * u[1] - u[2]) / two_h;
        v[n - 1] = -(T::of(3.0) * u[n - 1] - T::of(4.0) * u[n - 2] + u[n - 3]) / two_h;

        state.t += dt;
        probe += u[0] + u[n - 1] + v[0] + v[n - 1];
        if !probe.is_finite() {
            return Err(CoreError::NonFinite {
                l: state.l,
                t: state.t.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(())
    }
}

/// Grid specification in `ρ*`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec<T> {
    pub rho_min: T,
    pub rho_max: T,
    pub n_points: usize,
}

/// One mode's worth of run configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeSpec<T> {
    pub l: u32,
    pub kind: InitialDataKind,
    pub center: T,
    pub width: T,
    pub amplitude: T,
    pub multiplicity: T,
}

/// Full evolution configuration. The clock starts at t₀ = 1 by convention.
#[derive(Debug, Clone)]
pub struct EvolutionConfig<T> {
    pub params: SpacetimeParams<T>,
    pub grid: GridSpec<T>,
    pub modes: Vec<ModeSpec<T>>,
    pub t0: T,
    pub t_end: T,
    /// Courant factor; dt = cfl·h. Must be ≤ 0.9 (default 0.5).
    pub cfl: T,
    /// Observer cadence in time units.
    pub snapshot_cadence: T,
    /// Worker cap for mode-parallel stepping; 0 = auto.
    pub threads: usize,
}

impl<T: Real> EvolutionConfig<T> {
    pub fn validate(&self) -> Result<()> {
        if !(self.cfl > T::zero() && self.cfl <= T::of(0.9)) {
            return Err(CoreError::InvalidConfig(format!(
                "cfl must lie in (0, 0.9], got {}",
                self.cfl
            )));
        }
        if !(self.t_end >= self.t0) {
            return Err(CoreError::InvalidConfig(format!(
                "t_end={} earlier than t0={}",
                self.t_end, self.t0
            )));
        }
        if !(self.snapshot_cadence > T::zero()) {
            return Err(CoreError::InvalidConfig("snapshot cadence must be positive".into()));
        }
        if self.modes.is_empty() {
            return Err(CoreError::InvalidConfig("no modes configured".into()));
        }
        if self.grid.n_points < 16 {
            return Err(CoreError::InvalidConfig("need at least 16 grid points".into()));
        }
        if !(self.grid.rho_min < T::zero() && self.grid.rho_max > T::zero()) {
            return Err(CoreError::InvalidConfig(
                "grid must straddle the photon sphere (rho_min < 0 < rho_max)".into(),
            ));
        }
        Ok(())
    }

    pub fn h(&self) -> T {
        (self.grid.rho_max - self.grid.rho_min) / T::of_usize(self.grid.n_points - 1)
    }

    /// Earliest time at which any mode's data support can reach a grid
    /// edge; diagnostics that assume conservation should stop here.
    pub fn boundary_contact_time(&self) -> T {
        let mut dist = T::infinity();
        for m in &self.modes {
            let support = T::of(SUPPORT_WIDTHS) * m.width;
            let left = (m.center - support) - self.grid.rho_min;
            let right = self.grid.rho_max - (m.center + support);
            dist = dist.min(left).min(right);
        }
        self.t0 + dist.max(T::zero())
    }
}

/// Time series of functional records with cumulative space-time integrals
/// available through [`crate::analysis::spacetime_integral`].
#[derive(Debug, Clone)]
pub struct RunSeries<T> {
    pub records: Vec<FunctionalRecord<T>>,
}

impl<T: Real> RunSeries<T> {
    pub fn times(&self) -> Vec<T> {
        self.records.iter().map(|r| r.t).collect()
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// (t, f(record)) pairs for a scalar-valued selector.
    pub fn series(&self, f: impl Fn(&FunctionalRecord<T>) -> T) -> Vec<(T, T)> {
        self.records.iter().map(|r| (r.t, f(r))).collect()
    }
}

/// Low-level driver: builds the map/table from the config, runs all modes
/// from t₀ to t_end, and invokes `on_snapshot` with read-only access to the
/// states at every cadence point (including t₀ and t_end). Returns the
/// final states.
pub fn drive<T: Real>(
    config: &EvolutionConfig<T>,
    table: &PotentialTable<T>,
    mut on_snapshot: impl FnMut(T, &[ModeState<T>]),
) -> Result<Vec<ModeState<T>>> {
    config.validate()?;
    let map = table.map();
    if map.len() != config.grid.n_points {
        return Err(CoreError::InvalidConfig(format!(
            "table grid has {} points, config expects {}",
            map.len(),
            config.grid.n_points
        )));
    }
    let h = map.h();
    let dt_max = config.cfl * h;

    let mut states = Vec::with_capacity(config.modes.len());
    let mut steppers = Vec::with_capacity(config.modes.len());
    for spec in &config.modes {
        let (u0, u1) = make_initial_data(
            spec.kind,
            spec.center,
            spec.width,
            spec.amplitude,
            spec.l,
            map.rho_star(),
        )?;
        let mut state = ModeState::new(spec.l, u0, u1, config.t0);
        state.multiplicity = spec.multiplicity;
        states.push(state);
        steppers.push(Stepper::new(table.effective_values(spec.l), h));
    }

    on_snapshot(config.t0, &states);

    let mut t = config.t0;
    let tiny = T::of(1e-9) * config.snapshot_cadence;
    while t < config.t_end - tiny {
        let t_next = (t + config.snapshot_cadence).min(config.t_end);
        let interval = t_next - t;
        let n_sub = (interval / dt_max).ceil().to_usize().unwrap_or(1).max(1);
        let dt = interval / T::of_usize(n_sub);
        step_all(&mut states, &mut steppers, dt, n_sub, config.threads)?;
        // Snap to the exact cadence point to keep the time column clean.
        t = t_next;
        for s in &mut states {
            s.t = t;
        }
        on_snapshot(t, &states);
    }
    Ok(states)
}

fn step_all<T: Real>(
    states: &mut [ModeState<T>],
    steppers: &mut [Stepper<T>],
    dt: T,
    n_sub: usize,
    threads: usize,
) -> Result<()> {
    let workers = effective_threads(threads, states.len());
    if workers <= 1 || states.len() <= 1 {
        for (state, stepper) in states.iter_mut().zip(steppers.iter_mut()) {
            for _ in 0..n_sub {
                stepper.step(state, dt)?;
            }
        }
        return Ok(());
    }

    let chunk = states.len().div_ceil(workers);
    let mut results: Vec<Result<()>> = Vec::new();
    std::thread::scope(|scope| {
        let mut handles = Vec::new();
        for (s_chunk, p_chunk) in states.chunks_mut(chunk).zip(steppers.chunks_mut(chunk)) {
            handles.push(scope.spawn(move || -> Result<()> {
                for (state, stepper) in s_chunk.iter_mut().zip(p_chunk.iter_mut()) {
                    for _ in 0..n_sub {
                        stepper.step(state, dt)?;
                    }
                }
                Ok(())
            }));
        }
        for handle in handles {
            results.push(handle.join().expect("mode worker panicked"));
        }
    });
    for r in results {
        r?;
    }
    Ok(())
}

fn effective_threads(requested: usize, n_modes: usize) -> usize {
    let auto = std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1);
    let cap = if requested == 0 { auto } else { requested };
    cap.min(n_modes).max(1)
}

/// Runs the configured evolution and assembles the functional time series.
pub fn evolve<T: Real>(
    config: &EvolutionConfig<T>,
    table: &PotentialTable<T>,
    functionals: &FunctionalSet<T>,
) -> Result<RunSeries<T>> {
    let mut records = Vec::new();
    drive(config, table, |t, states| {
        records.push(functionals.record(t, states, table));
    })?;
    Ok(RunSeries { records })
}

/// Convenience: build the coordinate map and potential table demanded by a
/// config.
pub fn build_table<T: Real>(config: &EvolutionConfig<T>) -> Result<PotentialTable<T>> {
    let map = build_coordinate_map(
        config.params,
        config.grid.rho_min,
        config.grid.rho_max,
        config.grid.n_points,
    )?;
    Ok(PotentialTable::new(map))
}

/// Outcome of a self-convergence study.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ConvergenceOutcome<T> {
    /// Measured order from the Richardson triple.
    Order(T),
    /// Zero data: the study is undefined and reported as skipped.
    Degenerate,
}

/// Self-convergence order from runs at h, h/2, h/4 compared in discrete L²
/// on common nodes at the final time. Expected ≈ 2 for the scheme here.
pub fn convergence_order<T: Real>(
    config: &EvolutionConfig<T>,
    refinements: usize,
) -> Result<ConvergenceOutcome<T>> {
    config.validate()?;
    if refinements < 3 {
        return Err(CoreError::InvalidConfig(
            "need at least 3 resolutions for a convergence triple".into(),
        ));
    }
    if config
        .modes
        .iter()
        .all(|m| m.amplitude == T::zero())
    {
        return Ok(ConvergenceOutcome::Degenerate);
    }
    let h0 = config.h();
    for m in &config.modes {
        if m.width / h0 < T::of(16.0) {
            return Err(CoreError::InvalidConfig(format!(
                "base resolution under-resolves a width-{} mode (need ≥ 16 points per width)",
                m.width
            )));
        }
    }

    let mut finals: Vec<Vec<ModeState<T>>> = Vec::new();
    for k in 0..refinements {
        let factor = 1usize << k;
        let mut cfg = config.clone();
        cfg.grid.n_points = (config.grid.n_points - 1) * factor + 1;
        // One snapshot at the end is all we need.
        cfg.snapshot_cadence = cfg.t_end - cfg.t0 + T::one();
        let table = build_table(&cfg)?;
        finals.push(drive(&cfg, &table, |_, _| {})?);
    }

    // Discrete L² on the coarser grid's nodes, weighted by its spacing so
    // the two comparison norms are mutually consistent.
    let l2_diff = |coarse: &[ModeState<T>], fine: &[ModeState<T>], h: T| -> T {
        let mut acc = T::zero();
        for (c, f) in coarse.iter().zip(fine.iter()) {
            for (i, &uc) in c.u.iter().enumerate() {
                let d = uc - f.u[i * 2];
                acc += d * d * h;
            }
        }
        acc.sqrt()
    };
    let e01 = l2_diff(&finals[0], &finals[1], h0);
    let e12 = l2_diff(&finals[1], &finals[2], h0 / T::of(2.0));
    if e01 <= T::zero() || e12 <= T::zero() {
        return Ok(ConvergenceOutcome::Degenerate);
    }
    let order = (e01 / e12).log2();
    if order < T::one() {
        return Err(CoreError::NonConvergent {
            order: order.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(ConvergenceOutcome::Order(order))
}
