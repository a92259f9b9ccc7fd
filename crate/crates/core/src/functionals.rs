//! Densities, charges, weights, and norms evaluated on snapshots.
//!
//! Per-mode reductions use unit-normalized spherical harmonics
//! (`∫|Y|²dω = 1`), so `‖u‖² = Σ_l ∫|u_l|² dρ*` and the angular gradient
//! integrates to `l(l+1)|u_l|²`. Quadratic functionals carry the modes'
//! multiplicity weights (m-degeneracy emulation); the L⁶ reconstruction
//! uses the m = 0 field as configured and ignores multiplicity.
//!
//! All grid integrals use the trapezoid rule with centered derivatives —
//! second order, consistent with the evolution scheme. Test oracles use
//! oversampled Gauss quadrature instead.

use crate::error::{CoreError, Result};
use crate::evolution::ModeState;
use crate::geometry::SpacetimeParams;
use crate::potentials::{effective_potential_peak, PotentialTable};
use crate::quad::{derivative4, gauss_legendre, legendre, trapezoid};
use crate::scalar::Real;

fn lt2<T: Real>(l: u32) -> T {
    T::of(l as f64 * (l as f64 + 1.0))
}

/// Energy `E_l = ½∫(v² + u′² + V u² + l(l+1) V_L u²) dρ*` per mode and the
/// multiplicity-weighted total.
pub fn energy<T: Real>(
    states: &[ModeState<T>],
    table: &PotentialTable<T>,
) -> (T, Vec<(u32, T)>) {
    let h = table.map().h();
    let half = T::of(0.5);
    let mut per_mode = Vec::with_capacity(states.len());
    let mut total = T::zero();
    for s in states {
        let du = derivative4(&s.u, h);
        let lam = lt2::<T>(s.l);
        let e = trapezoid(
            &(0..s.len())
                .map(|i| {
                    half * (s.v[i] * s.v[i]
                        + du[i] * du[i]
                        + table.v()[i] * s.u[i] * s.u[i]
                        + lam * table.v_l()[i] * s.u[i] * s.u[i])
                })
                .collect::<Vec<_>>(),
            h,
        );
        per_mode.push((s.l, e));
        total += s.multiplicity * e;
    }
    (total, per_mode)
}

/// Energy in the normalized-measure form of the Eddington-Finkelstein
/// cross-check: `½∫(|ũ_T|² + |ũ_R|² + l(l+1) r⁻²|ũ|²) F r² dρ*` with
/// `ũ = u/r`. Algebraically equal to [`energy`] for data supported away
/// from the grid edges; the discrete difference is quadrature error.
pub fn energy_normalized_form<T: Real>(
    states: &[ModeState<T>],
    table: &PotentialTable<T>,
) -> T {
    let map = table.map();
    let h = map.h();
    let half = T::of(0.5);
    let mut total = T::zero();
    for s in states {
        let du = derivative4(&s.u, h);
        let lam = lt2::<T>(s.l);
        let vals: Vec<T> = (0..s.len())
            .map(|i| {
                let r = map.r()[i];
                let f = map.f()[i];
                // |ũ_T|² F r² = v², |ũ_R|² F r² = (u′ − uF/r)²
                let radial = du[i] - s.u[i] * f / r;
                half * (s.v[i] * s.v[i]
                    + radial * radial
                    + lam * f / (r * r) * s.u[i] * s.u[i])
            })
            .collect();
        total += s.multiplicity * trapezoid(&vals, h);
    }
    total
}

/// Conformal charge in its definition form:
/// `E_C = ∫ (t²+ρ*²) e + 2tρ* p_ρ* dρ*` summed over modes.
pub fn conformal_charge<T: Real>(
    states: &[ModeState<T>],
    t: T,
    table: &PotentialTable<T>,
) -> T {
    let map = table.map();
    let h = map.h();
    let half = T::of(0.5);
    let two = T::of(2.0);
    let mut total = T::zero();
    for s in states {
        let du = derivative4(&s.u, h);
        let lam = lt2::<T>(s.l);
        let vals: Vec<T> = (0..s.len())
            .map(|i| {
                let rho = map.rho_star()[i];
                let e = half
                    * (s.v[i] * s.v[i]
                        + du[i] * du[i]
                        + (table.v()[i] + lam * table.v_l()[i]) * s.u[i] * s.u[i]);
                let p = s.v[i] * du[i];
                (t * t + rho * rho) * e + two * t * rho * p
            })
            .collect();
        total += s.multiplicity * trapezoid(&vals, h);
    }
    total
}

/// Conformal charge in the manifestly positive form:
/// `¼(t−ρ*)²(w−v′)² + ¼(t+ρ*)²(w+v′)² + ½(t²+ρ*²)(Vv² + V_L|∇v|²)`.
pub fn conformal_charge_positive_form<T: Real>(
    states: &[ModeState<T>],
    t: T,
    table: &PotentialTable<T>,
) -> T {
    let map = table.map();
    let h = map.h();
    let quarter = T::of(0.25);
    let half = T::of(0.5);
    let mut total = T::zero();
    for s in states {
        let du = derivative4(&s.u, h);
        let lam = lt2::<T>(s.l);
        let vals: Vec<T> = (0..s.len())
            .map(|i| {
                let rho = map.rho_star()[i];
                let minus = (t - rho) * (s.v[i] - du[i]);
                let plus = (t + rho) * (s.v[i] + du[i]);
                quarter * (minus * minus + plus * plus)
                    + half
                        * (t * t + rho * rho)
                        * (table.v()[i] + lam * table.v_l()[i])
                        * s.u[i]
                        * s.u[i]
            })
            .collect();
        total += s.multiplicity * trapezoid(&vals, h);
    }
    total
}

/// Right side of the conformal flux identity:
/// `dE_C/dt = ∫ t (2V+ρ*V')u² + t (2V_L+ρ*V_L') |∇u|² dρ*`.
pub fn conformal_flux<T: Real>(
    states: &[ModeState<T>],
    t: T,
    table: &PotentialTable<T>,
) -> T {
    let h = table.map().h();
    let mut total = T::zero();
    for s in states {
        let lam = lt2::<T>(s.l);
        let vals: Vec<T> = (0..s.len())
            .map(|i| t * (table.trap_v(i) + lam * table.trap_vl(i)) * s.u[i] * s.u[i])
            .collect();
        total += s.multiplicity * trapezoid(&vals, h);
    }
    total
}

/// Weighted L² norm squared `Σ_l ∫ (1+ρ*²)^{−β} |u_l|² dρ*`, β > 0.
pub fn weighted_l2<T: Real>(states: &[ModeState<T>], beta: T, rho: &[T], h: T) -> Result<T> {
    if !(beta > T::zero()) {
        return Err(CoreError::InvalidWeight(format!(
            "weighted L2 exponent must be positive, got {beta}"
        )));
    }
    let mut total = T::zero();
    for s in states {
        let vals: Vec<T> = (0..s.len())
            .map(|i| (T::one() + rho[i] * rho[i]).powf(-beta) * s.u[i] * s.u[i])
            .collect();
        total += s.multiplicity * trapezoid(&vals, h);
    }
    Ok(total)
}

/// `⟨u, (t²+ρ*²)/(ρ*²+1) u⟩`: the quantity dominated by the conformal
/// charge in the weighted-L² lemma.
pub fn weighted_conformal_dom<T: Real>(states: &[ModeState<T>], t: T, rho: &[T], h: T) -> T {
    let mut total = T::zero();
    for s in states {
        let vals: Vec<T> = (0..s.len())
            .map(|i| {
                let r2 = rho[i] * rho[i];
                (t * t + r2) / (r2 + T::one()) * s.u[i] * s.u[i]
            })
            .collect();
        total += s.multiplicity * trapezoid(&vals, h);
    }
    total
}

/// Spherical harmonic `Y_l0(θ) = √((2l+1)/4π)·P_l(cos θ)`, unit-normalized.
pub fn y_l0<T: Real>(l: u32, cos_theta: T) -> T {
    let norm = ((T::of(2.0) * T::of(l as f64) + T::one()) / (T::of(4.0) * T::PI())).sqrt();
    norm * legendre(l as usize, cos_theta)
}

/// Weighted L⁶ norm `‖F^½ ũ‖_{L⁶(M̃)} = (∫ F³ r⁻⁴ |u|⁶ dρ* dω)^{1/6}`.
///
/// The field is reconstructed on a Gauss-Legendre grid in cos θ from the
/// m = 0 modes (the φ integral is exactly 2π by axisymmetry). `order = 0`
/// selects the smallest rule exact for the degree-6·l_max integrand; the
/// boolean reports the spec'd undersampling warning (2·l_max > order).
pub fn weighted_l6<T: Real>(
    states: &[ModeState<T>],
    table: &PotentialTable<T>,
    order: usize,
) -> (T, bool) {
    let map = table.map();
    let h = map.h();
    let l_max = states.iter().map(|s| s.l).max().unwrap_or(0) as usize;
    let order = if order == 0 {
        (3 * l_max + 4).max(8)
    } else {
        order
    };
    let undersampled = 2 * l_max > order;
    let rule = gauss_legendre::<T>(order);
    let harmonics: Vec<Vec<T>> = states
        .iter()
        .map(|s| rule.iter().map(|&(x, _)| y_l0(s.l, x)).collect())
        .collect();

    let n = map.len();
    let two_pi = T::of(2.0) * T::PI();
    let mut radial = Vec::with_capacity(n);
    for i in 0..n {
        let mut sphere = T::zero();
        for (j, &(_, w)) in rule.iter().enumerate() {
            let mut field = T::zero();
            for (k, s) in states.iter().enumerate() {
                field += s.u[i] * harmonics[k][j];
            }
            sphere += w * field.powi(6);
        }
        let f = map.f()[i];
        let r = map.r()[i];
        radial.push(f * f * f / (r * r * r * r) * two_pi * sphere);
    }
    (trapezoid(&radial, h).powf(T::of(1.0 / 6.0)), undersampled)
}

/// Bounded monotone multiplier weight `g(ρ*) = ∫_0^{scale·(ρ*−center)}
/// (1+|τ|)^{−σ} dτ` with its derivative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MultiplierWeight<T> {
    pub center: T,
    pub scale: T,
    pub sigma: T,
}

impl<T: Real> MultiplierWeight<T> {
    fn new(center: T, scale: T, sigma: T) -> Result<Self> {
        if !(sigma > T::one()) {
            return Err(CoreError::InvalidWeight(format!(
                "sigma must exceed 1 for a bounded weight, got {sigma}"
            )));
        }
        if !(scale > T::zero()) {
            return Err(CoreError::InvalidWeight(format!("scale must be positive, got {scale}")));
        }
        Ok(Self {
            center,
            scale,
            sigma,
        })
    }

    /// `(g, g')` at `ρ*`; `g` is odd about the centering point and tends to
    /// `±1/(σ−1)` at infinity.
    pub fn eval(&self, rho_star: T) -> (T, T) {
        let y = self.scale * (rho_star - self.center);
        let ay = y.abs();
        let one = T::one();
        let g = y.signum() * (one - (one + ay).powf(one - self.sigma)) / (self.sigma - one);
        let gp = self.scale * (one + ay).powf(-self.sigma);
        (g, gp)
    }
}

/// Morawetz weight centered at the effective-potential peak `(α_l)*`.
pub fn morawetz_weight<T: Real>(
    params: &SpacetimeParams<T>,
    l: u32,
    b: T,
    sigma: T,
) -> Result<MultiplierWeight<T>> {
    let (_, peak_rho) = effective_potential_peak(params, l)?;
    MultiplierWeight::new(peak_rho, b, sigma)
}

/// Angularly modulated weight: argument rescaled by `L^m` with
/// `L = √(1+l(l+1))`, centered at the photon sphere. Requires σ ≥ 2.
pub fn angular_modulated_weight<T: Real>(
    l: u32,
    m: T,
    b: T,
    sigma: T,
) -> Result<MultiplierWeight<T>> {
    if !(sigma >= T::of(2.0)) {
        return Err(CoreError::InvalidWeight(format!(
            "angular modulation requires sigma >= 2, got {sigma}"
        )));
    }
    let big_l = (T::one() + lt2::<T>(l)).sqrt();
    MultiplierWeight::new(T::zero(), b * big_l.powf(m), sigma)
}

/// Smooth cutoff `χ_α`: identically 1 on `[−plateau, plateau]`, supported
/// in `[−support, support]`, C∞ transition built from `exp(−1/x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChiAlpha<T> {
    pub plateau: T,
    pub support: T,
}

impl<T: Real> ChiAlpha<T> {
    pub fn new(plateau: T, support: T) -> Result<Self> {
        if !(T::zero() < plateau && plateau < support) {
            return Err(CoreError::InvalidWeight(format!(
                "need 0 < plateau < support, got plateau={plateau}, support={support}"
            )));
        }
        Ok(Self { plateau, support })
    }

    /// Default used by the diagnostics: plateau [−1,1]M, support [−2,2]M.
    pub fn default_photon_sphere() -> Self {
        Self {
            plateau: T::one(),
            support: T::of(2.0),
        }
    }

    pub fn eval(&self, rho_star: T) -> T {
        let a = rho_star.abs();
        if a <= self.plateau {
            T::one()
        } else if a >= self.support {
            T::zero()
        } else {
            let x = (self.support - a) / (self.support - self.plateau);
            bump(x) / (bump(x) + bump(T::one() - x))
        }
    }
}

fn bump<T: Real>(x: T) -> T {
    if x > T::zero() {
        (-x.recip()).exp()
    } else {
        T::zero()
    }
}

/// Localized angular energy `Σ_l (1+l(l+1))^p ∫ χ_α² |u_l|² dρ*`,
/// p ∈ [0, 2]: the `‖L^p χ_α u‖²` diagnostics of the photon-sphere
/// theorems.
pub fn angular_local_energy<T: Real>(
    states: &[ModeState<T>],
    chi: &ChiAlpha<T>,
    p: T,
    rho: &[T],
    h: T,
) -> Result<T> {
    if !(p >= T::zero() && p <= T::of(2.0)) {
        return Err(CoreError::InvalidWeight(format!(
            "angular exponent must lie in [0, 2], got {p}"
        )));
    }
    let chi_sq: Vec<T> = rho
        .iter()
        .map(|&x| {
            let c = chi.eval(x);
            c * c
        })
        .collect();
    let mut total = T::zero();
    for s in states {
        let factor = (T::one() + lt2::<T>(s.l)).powf(p);
        let vals: Vec<T> = (0..s.len()).map(|i| chi_sq[i] * s.u[i] * s.u[i]).collect();
        total += s.multiplicity * factor * trapezoid(&vals, h);
    }
    Ok(total)
}

/// Diagnostic decomposition of the Sobolev estimate
/// `‖F^½ r^{−2/3} u‖₆ ≤ C(‖F^½u′‖ + ‖(1+ρ*²)^{−½}u‖)^{1/3}
///  (‖F^½r^{−1}(−Δ)^{½}u‖ + ‖F^½r^{−1}u‖)^{2/3}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SobolevDiagnostic<T> {
    /// The weighted L⁶ norm on the left side.
    pub lhs: T,
    /// `(‖F^½u′‖ + ‖(1+ρ*²)^{−½}u‖)^{1/3}`.
    pub radial_factor: T,
    /// `(‖F^½r^{−1}(−Δ_{S²})^{½}u‖ + ‖F^½r^{−1}u‖)^{2/3}`.
    pub angular_factor: T,
    /// lhs / (radial_factor · angular_factor): the fitted constant.
    pub ratio: T,
}

/// Evaluates the Sobolev ratio; errors on an identically zero state.
pub fn sobolev_ratio<T: Real>(
    states: &[ModeState<T>],
    table: &PotentialTable<T>,
    sphere_order: usize,
) -> Result<SobolevDiagnostic<T>> {
    let map = table.map();
    let h = map.h();
    let mut grad = T::zero();
    let mut dec = T::zero();
    let mut ang = T::zero();
    let mut loc = T::zero();
    for s in states {
        let du = derivative4(&s.u, h);
        let lam = lt2::<T>(s.l);
        let g: Vec<T> = (0..s.len()).map(|i| map.f()[i] * du[i] * du[i]).collect();
        let d: Vec<T> = (0..s.len())
            .map(|i| {
                let rho = map.rho_star()[i];
                s.u[i] * s.u[i] / (T::one() + rho * rho)
            })
            .collect();
        let fr2: Vec<T> = (0..s.len())
            .map(|i| map.f()[i] / (map.r()[i] * map.r()[i]) * s.u[i] * s.u[i])
            .collect();
        grad += s.multiplicity * trapezoid(&g, h);
        dec += s.multiplicity * trapezoid(&d, h);
        ang += s.multiplicity * lam * trapezoid(&fr2, h);
        loc += s.multiplicity * trapezoid(&fr2, h);
    }
    let radial_sum = grad.sqrt() + dec.sqrt();
    let angular_sum = ang.sqrt() + loc.sqrt();
    if radial_sum == T::zero() || angular_sum == T::zero() {
        return Err(CoreError::DegenerateInput(
            "sobolev ratio undefined for the zero state".into(),
        ));
    }
    let (lhs, _) = weighted_l6(states, table, sphere_order);
    let radial_factor = radial_sum.powf(T::of(1.0 / 3.0));
    let angular_factor = angular_sum.powf(T::of(2.0 / 3.0));
    Ok(SobolevDiagnostic {
        lhs,
        radial_factor,
        angular_factor,
        ratio: lhs / (radial_factor * angular_factor),
    })
}

/// Per-snapshot values of everything the run monitors.
#[derive(Debug, Clone)]
pub struct FunctionalRecord<T> {
    pub t: T,
    pub e_total: T,
    /// Raw per-mode energies (unweighted), in mode order.
    pub e_per_mode: Vec<(u32, T)>,
    pub e_normalized: T,
    pub e_c: T,
    pub e_c_positive: T,
    pub conformal_flux: T,
    /// (β, value) pairs in configuration order.
    pub weighted_l2: Vec<(T, T)>,
    pub weighted_l6: T,
    /// `⟨u, (t²+ρ*²)/(ρ*²+1) u⟩` for the domination check.
    pub weighted_dom: T,
    /// (p, value) pairs of `‖L^p χ_α u‖²`.
    pub angular_local: Vec<(T, T)>,
    pub sobolev: Option<SobolevDiagnostic<T>>,
}

impl<T: Real> FunctionalRecord<T> {
    pub fn weighted_l2_at(&self, beta: T) -> Option<T> {
        self.weighted_l2
            .iter()
            .find(|(b, _)| (*b - beta).abs() <= T::of(1e-12))
            .map(|&(_, v)| v)
    }

    pub fn angular_local_at(&self, p: T) -> Option<T> {
        self.angular_local
            .iter()
            .find(|(q, _)| (*q - p).abs() <= T::of(1e-12))
            .map(|&(_, v)| v)
    }
}

/// Which functionals a run evaluates at every snapshot.
#[derive(Debug, Clone)]
pub struct FunctionalSet<T> {
    /// Weighted-L² exponents.
    pub betas: Vec<T>,
    /// Angular-energy exponents p in `‖L^p χ_α u‖²`.
    pub ps: Vec<T>,
    pub chi: ChiAlpha<T>,
    /// Sphere quadrature order for the L⁶ norm; 0 = auto (exact).
    pub sphere_order: usize,
    pub with_sobolev: bool,
}

impl<T: Real> FunctionalSet<T> {
    /// Defaults: β ∈ {1, 2}, p ∈ {3/4}, the standard χ_α, exact sphere
    /// quadrature, Sobolev diagnostic on.
    pub fn default_for(_config: &crate::evolution::EvolutionConfig<T>) -> Self {
        Self {
            betas: vec![T::one(), T::of(2.0)],
            ps: vec![T::of(0.75)],
            chi: ChiAlpha::default_photon_sphere(),
            sphere_order: 0,
            with_sobolev: true,
        }
    }

    pub fn record(
        &self,
        t: T,
        states: &[ModeState<T>],
        table: &PotentialTable<T>,
    ) -> FunctionalRecord<T> {
        let map = table.map();
        let rho = map.rho_star();
        let h = map.h();
        let (e_total, e_per_mode) = energy(states, table);
        let e_normalized = energy_normalized_form(states, table);
        let e_c = conformal_charge(states, t, table);
        let e_c_positive = conformal_charge_positive_form(states, t, table);
        let flux = conformal_flux(states, t, table);
        let weighted_l2_vals: Vec<(T, T)> = self
            .betas
            .iter()
            .map(|&b| (b, weighted_l2(states, b, rho, h).expect("validated beta")))
            .collect();
        let (l6, _) = weighted_l6(states, table, self.sphere_order);
        let dom = weighted_conformal_dom(states, t, rho, h);
        let angular: Vec<(T, T)> = self
            .ps
            .iter()
            .map(|&p| {
                (
                    p,
                    angular_local_energy(states, &self.chi, p, rho, h).expect("validated p"),
                )
            })
            .collect();
        let sobolev = if self.with_sobolev {
            sobolev_ratio(states, table, self.sphere_order).ok()
        } else {
            None
        };
        FunctionalRecord {
            t,
            e_total,
            e_per_mode,
            e_normalized,
            e_c,
            e_c_positive,
            conformal_flux: flux,
            weighted_l2: weighted_l2_vals,
            weighted_l6: l6,
            weighted_dom: dom,
            angular_local: angular,
            sobolev,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evolution::ModeState;
    use crate::geometry::{build_coordinate_map, SpacetimeParams};
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn schw_table(lo: f64, hi: f64, n: usize) -> PotentialTable<f64> {
        let params = SpacetimeParams::schwarzschild(1.0).unwrap();
        PotentialTable::new(build_coordinate_map(params, lo, hi, n).unwrap())
    }

    fn gaussian_state(
        table: &PotentialTable<f64>,
        l: u32,
        c: f64,
        w: f64,
        a: f64,
    ) -> ModeState<f64> {
        let rho = table.map().rho_star();
        let u: Vec<f64> = rho.iter().map(|&x| a * (-((x - c) / w).powi(2)).exp()).collect();
        ModeState::new(l, u, vec![0.0; rho.len()], 1.0)
    }

    fn zero_state(table: &PotentialTable<f64>, l: u32) -> ModeState<f64> {
        let n = table.len();
        ModeState::new(l, vec![0.0; n], vec![0.0; n], 1.0)
    }

    /// Composite high-order Gauss-Legendre oracle over [a, b].
    fn gl_oracle(a: f64, b: f64, panels: usize, f: impl Fn(f64) -> f64) -> f64 {
        let rule = gauss_legendre::<f64>(20);
        let width = (b - a) / panels as f64;
        let mut acc = 0.0;
        for p in 0..panels {
            let lo = a + p as f64 * width;
            let mid = lo + 0.5 * width;
            for &(x, w) in &rule {
                acc += 0.5 * width * w * f(mid + 0.5 * width * x);
            }
        }
        acc
    }

    #[test]
    fn energy_zero_state() {
        let table = schw_table(-30.0, 30.0, 601);
        let (e, per) = energy(&[zero_state(&table, 0)], &table);
        assert_eq!(e, 0.0);
        assert_eq!(per, vec![(0, 0.0)]);
    }

    #[test]
    fn energy_matches_independent_quadrature() {
        // Fine evaluation grid so the centered-difference gradient is
        // within 1e-6 of the analytic derivative route.
        let table = schw_table(-20.0, 20.0, 100_001);
        let state = gaussian_state(&table, 0, 0.0, 1.0, 1.0);
        let (e, _) = energy(&[state], &table);

        let params = *table.params();
        let oracle = gl_oracle(-12.0, 12.0, 240, |x| {
            let u = (-x * x).exp();
            let du = -2.0 * x * (-x * x).exp();
            let delta = params.delta_of_rho_star(x).unwrap();
            let v = crate::potentials::potential_v_from_delta(&params, delta);
            0.5 * (du * du + v * u * u)
        });
        assert_relative_eq!(e, oracle, max_relative = 1e-6);
    }

    #[test]
    fn energy_multiplicity_weighting() {
        let table = schw_table(-30.0, 30.0, 1201);
        let mut s = gaussian_state(&table, 2, 0.0, 1.5, 1.0);
        let (e1, per1) = energy(&[s.clone()], &table);
        s.multiplicity = 5.0;
        let (e5, per5) = energy(&[s], &table);
        assert_relative_eq!(e5, 5.0 * e1);
        assert_eq!(per1, per5); // per-mode values stay unweighted
    }

    #[test]
    fn normalized_energy_form_agrees() {
        let table = schw_table(-40.0, 40.0, 3201); // h = 0.025
        for l in [0u32, 2] {
            let state = gaussian_state(&table, l, 0.0, 2.0, 1.0);
            let (e, _) = energy(&[state.clone()], &table);
            let en = energy_normalized_form(&[state], &table);
            assert!(
                (en - e).abs() <= 1e-4 * e,
                "l={l}: E={e}, E_norm={en}, rel={}",
                ((en - e) / e).abs()
            );
        }
    }

    #[test]
    fn l2_norm_equivalence_between_measures() {
        // ‖u‖_{L²(M)} = ‖ũ‖_{L²(M̃)} with ũ = u/r and measure r² dρ*.
        let table = schw_table(-30.0, 30.0, 1201);
        let state = gaussian_state(&table, 1, 0.0, 2.0, 0.7);
        let h = table.map().h();
        let plain: Vec<f64> = state.u.iter().map(|&x| x * x).collect();
        let tilde: Vec<f64> = (0..state.len())
            .map(|i| {
                let r = table.map().r()[i];
                let ut = state.u[i] / r;
                ut * ut * r * r
            })
            .collect();
        assert_relative_eq!(
            trapezoid(&plain, h),
            trapezoid(&tilde, h),
            max_relative = 1e-13
        );
    }

    fn random_smooth_states(
        table: &PotentialTable<f64>,
        rng: &mut ChaCha8Rng,
    ) -> Vec<ModeState<f64>> {
        let rho = table.map().rho_star();
        let mut states = Vec::new();
        for l in [0u32, 1, 3] {
            let mut u = vec![0.0; rho.len()];
            let mut v = vec![0.0; rho.len()];
            for _ in 0..3 {
                let c = rng.gen_range(-8.0..8.0);
                let w = rng.gen_range(0.7..3.0);
                let a = rng.gen_range(-1.0..1.0);
                let cv = rng.gen_range(-8.0..8.0);
                let wv = rng.gen_range(0.7..3.0);
                let av = rng.gen_range(-1.0..1.0);
                for (i, &x) in rho.iter().enumerate() {
                    u[i] += a * (-((x - c) / w).powi(2)).exp();
                    v[i] += av * (-((x - cv) / wv).powi(2)).exp();
                }
            }
            states.push(ModeState::new(l, u, v, 1.0));
        }
        states
    }

    #[test]
    fn conformal_forms_agree_on_random_states() {
        let table = schw_table(-30.0, 30.0, 1501);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for trial in 0..100 {
            let states = random_smooth_states(&table, &mut rng);
            let t = 1.0 + (trial as f64) * 0.13;
            let a = conformal_charge(&states, t, &table);
            let b = conformal_charge_positive_form(&states, t, &table);
            assert!(b >= 0.0, "positive form must be nonnegative");
            assert!(
                (a - b).abs() <= 1e-10 * (1.0 + b.abs()),
                "trial {trial}: {a} vs {b}"
            );
        }
    }

    #[test]
    fn conformal_zero_and_static() {
        let table = schw_table(-30.0, 30.0, 1201);
        assert_eq!(conformal_charge(&[zero_state(&table, 0)], 2.0, &table), 0.0);
        assert_eq!(
            conformal_charge_positive_form(&[zero_state(&table, 0)], 2.0, &table),
            0.0
        );

        // spatially constant data: only the potential terms survive
        let n = table.len();
        let c = 0.37;
        let state = ModeState::new(2, vec![c; n], vec![0.0; n], 1.0);
        let t = 3.0;
        let rho = table.map().rho_star();
        let expect: Vec<f64> = (0..n)
            .map(|i| {
                0.5 * (t * t + rho[i] * rho[i])
                    * (table.v()[i] + 6.0 * table.v_l()[i])
                    * c
                    * c
            })
            .collect();
        let expect = trapezoid(&expect, table.map().h());
        assert_relative_eq!(
            conformal_charge(&[state.clone()], t, &table),
            expect,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            conformal_charge_positive_form(&[state], t, &table),
            expect,
            max_relative = 1e-12
        );
    }

    #[test]
    fn conformal_charge_matches_quadrature_oracle() {
        let table = schw_table(-20.0, 20.0, 100_001);
        let state = gaussian_state(&table, 0, 0.0, 1.0, 1.0);
        let t = 1.0;
        let params = *table.params();
        let oracle = gl_oracle(-12.0, 12.0, 240, |x| {
            let u = (-x * x).exp();
            let du = -2.0 * x * u;
            let delta = params.delta_of_rho_star(x).unwrap();
            let v = crate::potentials::potential_v_from_delta(&params, delta);
            let e = 0.5 * (du * du + v * u * u);
            (t * t + x * x) * e // p term vanishes: v(=u̇) is zero
        });
        assert_relative_eq!(
            conformal_charge(&[state], t, &table),
            oracle,
            max_relative = 1e-6
        );
    }

    #[test]
    fn flux_zero_and_sign() {
        let table = schw_table(-60.0, 60.0, 2401);
        assert_eq!(conformal_flux(&[zero_state(&table, 0)], 1.0, &table), 0.0);
        // l=0 data supported where 2V + ρ*V' < 0 (beyond the trapping window)
        let state = gaussian_state(&table, 0, 25.0, 2.0, 1.0);
        assert!(conformal_flux(&[state], 1.0, &table) < 0.0);
        // data at the photon sphere sees the positive trapping window
        let state = gaussian_state(&table, 0, 0.0, 1.0, 1.0);
        assert!(conformal_flux(&[state], 1.0, &table) > 0.0);
    }

    #[test]
    fn weighted_l2_cancellation_and_monotonicity() {
        let table = schw_table(-30.0, 30.0, 4001);
        let rho = table.map().rho_star();
        let h = table.map().h();
        let beta = 1.5;
        let u: Vec<f64> = rho
            .iter()
            .map(|&x| (1.0 + x * x).powf(beta / 2.0) * (-x * x / 4.0).exp())
            .collect();
        let state = ModeState::new(0, u, vec![0.0; rho.len()], 1.0);
        let value = weighted_l2(&[state.clone()], beta, rho, h).unwrap();
        let oracle = gl_oracle(-15.0, 15.0, 120, |x| (-x * x / 2.0).exp());
        assert_relative_eq!(value, oracle, max_relative = 1e-8);

        let v1 = weighted_l2(&[state.clone()], 1.0, rho, h).unwrap();
        let v2 = weighted_l2(&[state.clone()], 2.0, rho, h).unwrap();
        assert!(v1 >= v2);
        assert!(weighted_l2(&[state], 0.0, rho, h).is_err());
    }

    #[test]
    fn weighted_l6_single_mode_closed_form() {
        let table = schw_table(-30.0, 30.0, 2001);
        let state = gaussian_state(&table, 0, 0.0, 2.0, 1.3);
        let (value, undersampled) = weighted_l6(&[state.clone()], &table, 0);
        assert!(!undersampled);
        let h = table.map().h();
        let radial: Vec<f64> = (0..table.len())
            .map(|i| {
                let f = table.map().f()[i];
                let r = table.map().r()[i];
                f.powi(3) / r.powi(4) * state.u[i].powi(6)
            })
            .collect();
        let four_pi = 4.0 * std::f64::consts::PI;
        let expect = (trapezoid(&radial, h) / (four_pi * four_pi)).powf(1.0 / 6.0);
        assert_relative_eq!(value, expect, max_relative = 1e-12);
    }

    #[test]
    fn weighted_l6_quadrature_refinement() {
        let table = schw_table(-30.0, 30.0, 1201);
        let states = vec![
            gaussian_state(&table, 0, 0.0, 2.0, 1.0),
            gaussian_state(&table, 2, 1.0, 1.5, -0.6),
        ];
        let (auto, _) = weighted_l6(&states, &table, 0);
        let (dense, _) = weighted_l6(&states, &table, 100);
        assert_relative_eq!(auto, dense, max_relative = 1e-8);
        // the spec'd warning threshold
        let (_, warn) = weighted_l6(&states, &table, 3);
        assert!(warn);
    }

    #[test]
    fn multiplier_weight_properties() {
        let params = SpacetimeParams::schwarzschild(1.0).unwrap();
        let w = morawetz_weight(&params, 0, 0.1, 2.0).unwrap();
        let center = w.center;
        assert_relative_eq!(center, -1.0 / 3.0 + 2.0 * (2.0f64 / 3.0).ln(), max_relative = 1e-9);
        let (g0, gp0) = w.eval(center);
        assert_abs_diff_eq!(g0, 0.0);
        assert_relative_eq!(gp0, 0.1);
        // odd about the center
        for d in [0.3, 1.7, 9.0] {
            let (gl, _) = w.eval(center - d);
            let (gr, _) = w.eval(center + d);
            assert_relative_eq!(gl, -gr, max_relative = 1e-13);
        }
        // sigma = 2 saturates at 1
        let (g_inf, _) = w.eval(center + 1e9);
        assert_relative_eq!(g_inf, 1.0, max_relative = 1e-7);

        assert!(morawetz_weight(&params, 0, 0.1, 1.0).is_err());
        assert!(angular_modulated_weight::<f64>(4, 0.5, 0.1, 1.5).is_err());
        let am = angular_modulated_weight::<f64>(4, 0.5, 0.1, 2.0).unwrap();
        // scale = b * (1 + 20)^(1/4)
        assert_relative_eq!(am.scale, 0.1 * 21f64.powf(0.25), max_relative = 1e-14);
        assert_eq!(am.center, 0.0);
    }

    #[test]
    fn chi_alpha_shape() {
        let chi = ChiAlpha::<f64>::new(1.0, 2.0).unwrap();
        assert_eq!(chi.eval(0.0), 1.0);
        assert_eq!(chi.eval(0.99), 1.0);
        assert_eq!(chi.eval(-2.1), 0.0);
        let mid = chi.eval(1.5);
        assert!(mid > 0.0 && mid < 1.0);
        // monotone decline across the transition
        assert!(chi.eval(1.2) > chi.eval(1.8));
        assert!(ChiAlpha::<f64>::new(2.0, 1.0).is_err());
    }

    #[test]
    fn angular_local_energy_basics() {
        let table = schw_table(-30.0, 30.0, 4001);
        let rho = table.map().rho_star();
        let h = table.map().h();
        let chi = ChiAlpha::default_photon_sphere();
        // narrow data inside the plateau: p = 0 recovers ‖u‖²
        let state = gaussian_state(&table, 3, 0.0, 0.12, 1.0);
        let norm2: f64 = trapezoid(
            &state.u.iter().map(|&x| x * x).collect::<Vec<_>>(),
            h,
        );
        let p0 = angular_local_energy(&[state.clone()], &chi, 0.0, rho, h).unwrap();
        assert_relative_eq!(p0, norm2, max_relative = 1e-10);
        // single mode: exact (1 + l(l+1))^p factor
        let p34 = angular_local_energy(&[state.clone()], &chi, 0.75, rho, h).unwrap();
        assert_relative_eq!(p34, 13f64.powf(0.75) * p0, max_relative = 1e-12);
        assert!(angular_local_energy(&[state], &chi, 2.5, rho, h).is_err());
    }

    #[test]
    fn sobolev_ratio_properties() {
        let table = schw_table(-30.0, 30.0, 1201);
        assert!(matches!(
            sobolev_ratio(&[zero_state(&table, 0)], &table, 0),
            Err(CoreError::DegenerateInput(_))
        ));
        // homogeneity: ratio invariant under amplitude rescaling
        let s1 = gaussian_state(&table, 1, 0.0, 1.0, 1.0);
        let s9 = gaussian_state(&table, 1, 0.0, 1.0, 9.0);
        let r1 = sobolev_ratio(&[s1], &table, 0).unwrap().ratio;
        let r9 = sobolev_ratio(&[s9], &table, 0).unwrap().ratio;
        assert_relative_eq!(r1, r9, max_relative = 1e-10);
        // width family bounded by a common constant
        let mut max_ratio = 0.0f64;
        for w in [0.5, 1.0, 2.0, 4.0] {
            let s = gaussian_state(&table, 1, 0.0, w, 1.0);
            max_ratio = max_ratio.max(sobolev_ratio(&[s], &table, 0).unwrap().ratio);
        }
        assert!(max_ratio < 1.0, "max ratio {max_ratio}");
    }

    #[test]
    fn record_assembles_consistently() {
        let table = schw_table(-30.0, 30.0, 1201);
        let cfg_dummy = crate::evolution::EvolutionConfig {
            params: *table.params(),
            grid: crate::evolution::GridSpec {
                rho_min: -30.0,
                rho_max: 30.0,
                n_points: 1201,
            },
            modes: vec![],
            t0: 1.0,
            t_end: 2.0,
            cfl: 0.5,
            snapshot_cadence: 1.0,
            threads: 1,
        };
        let set = FunctionalSet::default_for(&cfg_dummy);
        let mut states = vec![
            gaussian_state(&table, 0, 0.0, 1.0, 1.0),
            gaussian_state(&table, 2, 2.0, 1.5, 0.4),
        ];
        states[1].multiplicity = 3.0;
        let rec = set.record(1.0, &states, &table);
        // invariant: weighted sum of per-mode energies equals the total
        let sum = rec.e_per_mode[0].1 * 1.0 + rec.e_per_mode[1].1 * 3.0;
        assert_relative_eq!(rec.e_total, sum, max_relative = 1e-13);
        assert!(rec.e_c_positive >= 0.0);
        assert!((rec.e_c - rec.e_c_positive).abs() <= 1e-10 * (1.0 + rec.e_c));
        assert!(rec.weighted_l2_at(2.0).is_some());
        assert!(rec.angular_local_at(0.75).is_some());
        assert!(rec.sobolev.is_some());
    }
}
