//! Static background geometry of the Reissner-Nordström exterior.
//!
//! Everything here is derived from the metric factor
//! `F = 1 − 2M/r + Q²/r²` on the exterior region `r > r₊`. The tortoise
//! coordinate `r*` solves `dr/dr* = F`; we work with the shifted coordinate
//! `ρ* = r* − α*` normalized so the photon sphere `r = α` sits at `ρ* = 0`.
//!
//! Near the horizon `r − r₊` decays exponentially in `ρ*` (subcritical), so
//! for deep grids the offset `δ = r − r₊` is kept explicitly: `δ` stays
//! exact down to ~1e−300 while `r₊ + δ` saturates at `r₊` in floating
//! point. `F` and everything downstream is evaluated from `δ`.

use crate::error::{CoreError, Result};
use crate::scalar::Real;

/// Horizon structure classification by charge-to-mass ratio.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// |Q| < M: two distinct horizons, logarithmic tortoise asymptote.
    Subcritical,
    /// |Q| = M: degenerate horizon, inverse-linear tortoise asymptote.
    Critical,
}

/// Relative tolerance deciding `|Q| = M` at construction.
const CRITICAL_REL_TOL: f64 = 1e-12;

/// The static background: mass, charge, and the derived regime.
#[derive(Debug, Clone, Copy)]
pub struct SpacetimeParams<T> {
    m: T,
    q: T,
    regime: Regime,
}

impl<T: Real> SpacetimeParams<T> {
    /// Validates `M > 0` and `|Q| ≤ M`; classifies the regime.
    ///
    /// Exactly-critical parameters (within 1e−12 relative) use the critical
    /// closed forms throughout, avoiding catastrophic cancellation in the
    /// subcritical formulas.
    pub fn new(m: T, q: T) -> Result<Self> {
        if !(m > T::zero()) || !m.is_finite() {
            return Err(CoreError::NonPositiveMass {
                m: m.to_f64().unwrap_or(f64::NAN),
            });
        }
        let ratio = (q / m).abs();
        let regime = if (ratio - T::one()).abs() <= T::of(CRITICAL_REL_TOL) {
            Regime::Critical
        } else if ratio < T::one() {
            Regime::Subcritical
        } else {
            return Err(CoreError::Supercritical {
                m: m.to_f64().unwrap_or(f64::NAN),
                q: q.to_f64().unwrap_or(f64::NAN),
            });
        };
        // Snap critical charge to ±M so r₊ == r₋ exactly.
        let q = match regime {
            Regime::Critical => m * q.signum(),
            Regime::Subcritical => q,
        };
        Ok(Self { m, q, regime })
    }

    /// Chargeless background.
    pub fn schwarzschild(m: T) -> Result<Self> {
        Self::new(m, T::zero())
    }

    pub fn mass(&self) -> T {
        self.m
    }

    pub fn charge(&self) -> T {
        self.q
    }

    pub fn regime(&self) -> Regime {
        self.regime
    }

    /// Inner and outer horizon radii `r∓ = M ∓ √(M²−Q²)`.
    pub fn horizons(&self) -> (T, T) {
        match self.regime {
            Regime::Critical => (self.m, self.m),
            Regime::Subcritical => {
                let root = (self.m * self.m - self.q * self.q).sqrt();
                (self.m - root, self.m + root)
            }
        }
    }

    pub fn r_plus(&self) -> T {
        self.horizons().1
    }

    /// Photon sphere radius `α = (3M + √(9M² − 8Q²))/2`, the unique
    /// exterior critical point of the angular potential.
    pub fn photon_sphere_radius(&self) -> T {
        let nine = T::of(9.0);
        let eight = T::of(8.0);
        let three = T::of(3.0);
        (three * self.m + (nine * self.m * self.m - eight * self.q * self.q).sqrt())
            / T::of(2.0)
    }

    /// Metric factor `F = 1 − 2M/r + Q²/r²`, defined for all r > 0.
    pub fn metric_factor(&self, r: T) -> T {
        T::one() - T::of(2.0) * self.m / r + self.q * self.q / (r * r)
    }

    /// Metric factor evaluated from `δ = r − r₊`:
    /// `F = δ(δ + (r₊ − r₋))/r²`, exact near the horizon where `r₊ + δ`
    /// saturates.
    pub fn metric_factor_from_delta(&self, delta: T) -> T {
        let (r_minus, r_plus) = self.horizons();
        let r = r_plus + delta;
        delta * (delta + (r_plus - r_minus)) / (r * r)
    }

    /// Closed-form tortoise coordinate with the photon-sphere normalization
    /// `ρ*(α) = 0`. Requires `r > r₊` strictly.
    pub fn tortoise_of_r(&self, r: T) -> Result<T> {
        let r_plus = self.r_plus();
        if !(r > r_plus) {
            return Err(CoreError::NotExterior {
                r: r.to_f64().unwrap_or(f64::NAN),
                r_plus: r_plus.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(self.rho_star_of_delta(r - r_plus))
    }

    /// Tortoise coordinate as a function of `δ = r − r₊ > 0`.
    pub fn rho_star_of_delta(&self, delta: T) -> T {
        let alpha = self.photon_sphere_radius();
        self.tortoise_raw(delta) - self.tortoise_raw(alpha - self.r_plus())
    }

    /// The closed form with integration constant zero; the normalization is
    /// imposed by subtraction, so C* itself is never stored.
    fn tortoise_raw(&self, delta: T) -> T {
        let (r_minus, r_plus) = self.horizons();
        let m = self.m;
        let r = r_plus + delta;
        match self.regime {
            Regime::Subcritical => {
                let gap = r_plus - r_minus;
                let a = r_plus * r_plus / gap;
                let b = r_minus * r_minus / gap;
                r + a * (delta / m).ln() - b * ((delta + gap) / m).ln()
            }
            Regime::Critical => r + T::of(2.0) * m * (delta / m).ln() - m * m / delta,
        }
    }

    /// Inverse of the tortoise coordinate, as the horizon offset
    /// `δ = r − r₊`.
    ///
    /// Bisection on `ln δ` (the tortoise form is strictly increasing in δ);
    /// the logarithmic variable keeps the search well conditioned in the
    /// horizon region where `dρ*/dδ ~ 1/δ`.
    pub fn delta_of_rho_star(&self, rho_star: T) -> Result<T> {
        if !rho_star.is_finite() {
            return Err(CoreError::BracketFailure {
                rho_star: rho_star.to_f64().unwrap_or(f64::NAN),
            });
        }
        let g = |ln_delta: T| self.rho_star_of_delta(ln_delta.exp()) - rho_star;

        let mut lo = T::of(-690.0);
        if g(lo) >= T::zero() {
            return Err(CoreError::BracketFailure {
                rho_star: rho_star.to_f64().unwrap_or(f64::NAN),
            });
        }
        // Seed the upper end from the far asymptote r ≈ ρ* + α and grow
        // until the bracket is established.
        let alpha_off = self.photon_sphere_radius() - self.r_plus();
        let mut hi = (alpha_off + rho_star.abs() + self.m).ln();
        let mut tries = 0;
        while g(hi) <= T::zero() {
            hi = hi + T::of(2.0);
            tries += 1;
            if tries > 700 {
                return Err(CoreError::BracketFailure {
                    rho_star: rho_star.to_f64().unwrap_or(f64::NAN),
                });
            }
        }
        let tol = T::of(1e-13);
        for _ in 0..400 {
            if hi - lo <= tol {
                break;
            }
            let mid = T::of(0.5) * (lo + hi);
            if g(mid) < T::zero() {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok((T::of(0.5) * (lo + hi)).exp())
    }

    /// Areal radius at a tortoise coordinate. For very negative `ρ*` the
    /// result saturates at `r₊` in floating point; use
    /// [`Self::delta_of_rho_star`] when the horizon offset itself matters.
    pub fn r_of_rho_star(&self, rho_star: T) -> Result<T> {
        Ok(self.r_plus() + self.delta_of_rho_star(rho_star)?)
    }
}

/// Tabulated bijection `ρ* ↔ r` on a uniform `ρ*` grid with cached
/// geometry values. Immutable after construction; shared freely across
/// concurrent evolutions.
#[derive(Debug, Clone)]
pub struct CoordinateMap<T> {
    params: SpacetimeParams<T>,
    rho_star: Vec<T>,
    delta: Vec<T>,
    r: Vec<T>,
    f: Vec<T>,
    h: T,
    alpha: T,
}

impl<T: Real> CoordinateMap<T> {
    pub fn params(&self) -> &SpacetimeParams<T> {
        &self.params
    }

    pub fn len(&self) -> usize {
        self.rho_star.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rho_star.is_empty()
    }

    /// Uniform grid spacing.
    pub fn h(&self) -> T {
        self.h
    }

    pub fn rho_star(&self) -> &[T] {
        &self.rho_star
    }

    /// Horizon offsets `δ = r − r₊`; exact where `r` saturates.
    pub fn delta(&self) -> &[T] {
        &self.delta
    }

    pub fn r(&self) -> &[T] {
        &self.r
    }

    pub fn f(&self) -> &[T] {
        &self.f
    }

    /// Photon sphere radius α; `α* = 0` by normalization.
    pub fn alpha(&self) -> T {
        self.alpha
    }

    pub fn alpha_star(&self) -> T {
        T::zero()
    }

    pub fn rho_min(&self) -> T {
        self.rho_star[0]
    }

    pub fn rho_max(&self) -> T {
        self.rho_star[self.rho_star.len() - 1]
    }

    /// Index of the grid node nearest to a coordinate value.
    pub fn nearest_index(&self, rho: T) -> usize {
        let idx = ((rho - self.rho_star[0]) / self.h).round();
        let idx = idx.max(T::zero());
        let i = idx.to_usize().unwrap_or(0);
        i.min(self.len() - 1)
    }
}

/// Builds the uniform-`ρ*` map by inverting the closed-form tortoise
/// coordinate at every node.
///
/// Requires `rho_min < 0 < rho_max` and at least 16 nodes. The cached
/// arrays satisfy: δ strictly increasing and positive (hence r strictly
/// increasing, r > r₊, F > 0, exactly where floating point can express
/// it), and `r(0) = α` to 1e−10.
pub fn build_coordinate_map<T: Real>(
    params: SpacetimeParams<T>,
    rho_min: T,
    rho_max: T,
    n_points: usize,
) -> Result<CoordinateMap<T>> {
    if !(rho_min < T::zero() && T::zero() < rho_max) {
        return Err(CoreError::InvalidGrid(format!(
            "grid must straddle the photon sphere: rho_min={rho_min}, rho_max={rho_max}"
        )));
    }
    if n_points < 16 {
        return Err(CoreError::InvalidGrid(format!(
            "need at least 16 points, got {n_points}"
        )));
    }
    let h = (rho_max - rho_min) / T::of_usize(n_points - 1);
    let r_plus = params.r_plus();
    let mut rho_star = Vec::with_capacity(n_points);
    let mut delta = Vec::with_capacity(n_points);
    let mut r = Vec::with_capacity(n_points);
    let mut f = Vec::with_capacity(n_points);
    for i in 0..n_points {
        let rho = rho_min + T::of_usize(i) * h;
        let d = params.delta_of_rho_star(rho)?;
        rho_star.push(rho);
        delta.push(d);
        r.push(r_plus + d);
        f.push(params.metric_factor_from_delta(d));
    }
    for i in 1..n_points {
        if !(delta[i] > delta[i - 1]) {
            return Err(CoreError::InvalidGrid(format!(
                "inverted map not strictly increasing at node {i}"
            )));
        }
    }
    let alpha = params.photon_sphere_radius();
    Ok(CoordinateMap {
        params,
        rho_star,
        delta,
        r,
        f,
        h,
        alpha,
    })
}

/// Eddington-Finkelstein null coordinates and their exponentiated forms.
///
/// `s∓ = t ∓ ρ*`, `S₋ = −e^{−s₋/4M}`, `S₊ = e^{s₊/4M}`. The 4M constant
/// is used for all Q, as in the source convention (surface gravity would
/// give a Q-dependent constant; see the crate docs). Exponents are clamped
/// at magnitude 700 and reported as saturated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EddingtonFinkelstein<T> {
    pub s_minus: T,
    pub s_plus: T,
    pub big_s_minus: T,
    pub big_s_plus: T,
    /// True when an exponent was clamped to avoid overflow.
    pub saturated: bool,
}

pub fn eddington_finkelstein<T: Real>(t: T, rho_star: T, m: T) -> EddingtonFinkelstein<T> {
    let s_minus = t - rho_star;
    let s_plus = t + rho_star;
    let four_m = T::of(4.0) * m;
    let cap = T::of(700.0);
    let mut saturated = false;
    let mut clamp = |x: T| {
        if x.abs() > cap {
            saturated = true;
            cap * x.signum()
        } else {
            x
        }
    };
    let em = clamp(-s_minus / four_m);
    let ep = clamp(s_plus / four_m);
    EddingtonFinkelstein {
        s_minus,
        s_plus,
        big_s_minus: -em.exp(),
        big_s_plus: ep.exp(),
        saturated,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::derivative;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use proptest::prelude::*;

    fn schw() -> SpacetimeParams<f64> {
        SpacetimeParams::schwarzschild(1.0).unwrap()
    }

    fn critical() -> SpacetimeParams<f64> {
        SpacetimeParams::new(1.0, 1.0).unwrap()
    }

    #[test]
    fn metric_factor_goldens() {
        assert_abs_diff_eq!(schw().metric_factor(2.0), 0.0);
        assert_relative_eq!(schw().metric_factor(3.0), 1.0 / 3.0);
        assert_abs_diff_eq!(critical().metric_factor(1.0), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn horizons_goldens() {
        assert_eq!(schw().horizons(), (0.0, 2.0));
        assert_eq!(critical().horizons(), (1.0, 1.0));
        let p = SpacetimeParams::new(1.0, 0.6).unwrap();
        let (rm, rp) = p.horizons();
        assert_relative_eq!(rm, 0.2, max_relative = 1e-14);
        assert_relative_eq!(rp, 1.8, max_relative = 1e-14);
    }

    #[test]
    fn supercritical_rejected() {
        assert!(matches!(
            SpacetimeParams::new(1.0, 2.0),
            Err(CoreError::Supercritical { .. })
        ));
        assert!(matches!(
            SpacetimeParams::new(0.0, 0.0),
            Err(CoreError::NonPositiveMass { .. })
        ));
    }

    #[test]
    fn regime_classification_tolerance() {
        assert_eq!(
            SpacetimeParams::new(1.0, 1.0 - 1e-14).unwrap().regime(),
            Regime::Critical
        );
        assert_eq!(
            SpacetimeParams::new(1.0, 1.0 - 1e-9).unwrap().regime(),
            Regime::Subcritical
        );
    }

    #[test]
    fn photon_sphere_goldens() {
        assert_relative_eq!(schw().photon_sphere_radius(), 3.0);
        assert_relative_eq!(critical().photon_sphere_radius(), 2.0);
        // (3 + sqrt(9 - 8*0.36))/2
        let p = SpacetimeParams::new(1.0, 0.6).unwrap();
        assert_relative_eq!(
            p.photon_sphere_radius(),
            2.7369316876852983,
            max_relative = 1e-14
        );
    }

    #[test]
    fn tortoise_goldens() {
        assert_abs_diff_eq!(schw().tortoise_of_r(3.0).unwrap(), 0.0, epsilon = 1e-13);
        assert_relative_eq!(
            schw().tortoise_of_r(4.0).unwrap(),
            1.0 + 2.0 * 2f64.ln(),
            max_relative = 1e-14
        );
        assert_relative_eq!(
            critical().tortoise_of_r(3.0).unwrap(),
            1.5 + 2.0 * 2f64.ln(),
            max_relative = 1e-14
        );
        assert!(matches!(
            schw().tortoise_of_r(2.0),
            Err(CoreError::NotExterior { .. })
        ));
        assert!(matches!(
            schw().tortoise_of_r(1.5),
            Err(CoreError::NotExterior { .. })
        ));
    }

    #[test]
    fn inversion_goldens() {
        assert_relative_eq!(schw().r_of_rho_star(0.0).unwrap(), 3.0, max_relative = 1e-12);
        let rho = 1.0 + 2.0 * 2f64.ln();
        assert_abs_diff_eq!(schw().r_of_rho_star(rho).unwrap(), 4.0, epsilon = 1e-9);
        // deep horizon: delta < 1e-5 and the closed form reproduces rho*
        let d = schw().delta_of_rho_star(-30.0).unwrap();
        assert!(d < 1e-5, "delta={d}");
        assert_abs_diff_eq!(schw().rho_star_of_delta(d), -30.0, epsilon = 1e-10);
    }

    #[test]
    fn round_trip_deep_and_far() {
        for params in [schw(), SpacetimeParams::new(1.0, 0.6).unwrap(), critical()] {
            for rho in [-200.0, -50.0, -1.0, 0.0, 1.0, 50.0, 1000.0] {
                let d = params.delta_of_rho_star(rho).unwrap();
                let back = params.rho_star_of_delta(d);
                assert_abs_diff_eq!(back, rho, epsilon = 1e-10 * (1.0 + rho.abs()));
            }
        }
    }

    #[test]
    fn far_asymptote() {
        for params in [schw(), critical()] {
            let rho = params.tortoise_of_r(1e6).unwrap();
            assert!((rho / 1e6 - 1.0).abs() < 1e-4, "rho/r = {}", rho / 1e6);
        }
    }

    #[test]
    fn near_horizon_asymptote_subcritical() {
        // ln(delta/M)/rho* -> (r+ - r-)/r+^2 within 1% at rho* = -200M
        for params in [schw(), SpacetimeParams::new(1.0, 0.6).unwrap()] {
            let (rm, rp) = params.horizons();
            let target = (rp - rm) / (rp * rp);
            let d = params.delta_of_rho_star(-200.0).unwrap();
            let measured = d.ln() / -200.0;
            assert!(
                ((measured - target) / target).abs() < 0.01,
                "measured={measured}, target={target}"
            );
        }
    }

    #[test]
    fn near_horizon_asymptote_critical() {
        // rho*(r - M) -> -M^2: logarithmic convergence, ~5.5% at -200M and
        // inside 1% only by -2000M.
        let p = critical();
        let d200 = p.delta_of_rho_star(-200.0).unwrap();
        assert!(((-200.0 * d200) + 1.0).abs() < 0.06);
        let d2000 = p.delta_of_rho_star(-2000.0).unwrap();
        assert!(((-2000.0 * d2000) + 1.0).abs() < 0.01);
    }

    #[test]
    fn map_basics() {
        let map = build_coordinate_map(schw(), -50.0, 50.0, 1001).unwrap();
        assert_eq!(map.len(), 1001);
        assert_relative_eq!(map.h(), 0.1, max_relative = 1e-14);
        // r(0) = alpha
        let mid = map.nearest_index(0.0);
        assert_abs_diff_eq!(map.rho_star()[mid], 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(map.r()[mid], 3.0, epsilon = 1e-10);
        for i in 1..map.len() {
            assert!(map.delta()[i] > map.delta()[i - 1]);
            assert!(map.f()[i] > 0.0);
        }
        // round trip against the closed form at every node
        for i in (0..map.len()).step_by(97) {
            let back = map.params().rho_star_of_delta(map.delta()[i]);
            assert_abs_diff_eq!(
                back,
                map.rho_star()[i],
                epsilon = 1e-10 * (1.0 + map.rho_star()[i].abs())
            );
        }
    }

    #[test]
    fn map_rejects_bad_grids() {
        assert!(build_coordinate_map(schw(), 1.0, 50.0, 100).is_err());
        assert!(build_coordinate_map(schw(), -50.0, 50.0, 8).is_err());
    }

    #[test]
    fn critical_map_horizon_offset() {
        let map = build_coordinate_map(critical(), -50.0, 50.0, 1001).unwrap();
        let d = map.delta()[0];
        // closed-form solve gives 0.023516...; the M^2/50 asymptote is only
        // ~20% accurate this close in.
        let oracle = critical().delta_of_rho_star(-50.0).unwrap();
        assert_relative_eq!(d, oracle, max_relative = 1e-10);
        assert!((d / 0.02 - 1.0).abs() < 0.25, "d={d}");
    }

    #[test]
    fn dr_drho_equals_f() {
        // centered differences of r on the map reproduce F at O(h^2)
        let err_at = |n: usize| -> f64 {
            let map = build_coordinate_map(schw(), -20.0, 20.0, n).unwrap();
            let dr = derivative(map.r(), map.h());
            (1..map.len() - 1)
                .map(|i| (dr[i] - map.f()[i]).abs())
                .fold(0.0, f64::max)
        };
        let e1 = err_at(401);
        let e2 = err_at(801);
        let order = (e1 / e2).log2();
        assert!(order > 1.8, "order={order}");
    }

    #[test]
    fn eddington_finkelstein_goldens() {
        let ef = eddington_finkelstein(1.0, 0.0, 1.0);
        assert_relative_eq!(ef.s_minus, 1.0);
        assert_relative_eq!(ef.s_plus, 1.0);
        assert_relative_eq!(ef.big_s_minus, -(-0.25f64).exp());
        assert_relative_eq!(ef.big_s_plus, 0.25f64.exp());
        assert!(!ef.saturated);

        let null = eddington_finkelstein(2.5, 2.5, 1.0);
        assert_relative_eq!(null.s_minus, 0.0);
        assert_relative_eq!(null.big_s_minus, -1.0);

        let origin = eddington_finkelstein(0.0, 0.0, 1.0);
        assert_relative_eq!(origin.big_s_minus * origin.big_s_plus, -1.0);

        assert!(eddington_finkelstein(1e7, 0.0, 1.0).saturated);
    }

    #[test]
    fn generic_scalar_compiles_f32() {
        let p = SpacetimeParams::<f32>::new(1.0, 0.0).unwrap();
        assert!((p.photon_sphere_radius() - 3.0).abs() < 1e-5);
        let rho = p.tortoise_of_r(4.0).unwrap();
        assert!((rho - (1.0 + 2.0 * 2f32.ln())).abs() < 1e-4);
    }

    proptest! {
        #[test]
        fn round_trip_random_radii(
            q in prop::sample::select(vec![0.0, 0.3, 0.6, 0.9, 1.0]),
            x in 0f64..1f64,
        ) {
            let params = SpacetimeParams::<f64>::new(1.0, q).unwrap();
            let r_plus = params.r_plus();
            // log-uniform in (r+ + 1e-6, 1e3)
            let lo = (r_plus + 1e-6).ln();
            let hi = 1e3f64.ln();
            let r = (lo + x * (hi - lo)).exp();
            let rho = params.tortoise_of_r(r).unwrap();
            let back = params.r_of_rho_star(rho).unwrap();
            prop_assert!((back - r).abs() <= 1e-9 * r, "r={r}, back={back}");
        }
    }
}
