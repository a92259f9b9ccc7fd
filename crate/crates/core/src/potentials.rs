//! The potential `V = F·(dF/dr)/r`, the angular potential `V_L = F/r²`,
//! their `ρ*`-derivatives, the per-harmonic effective potential
//! `V_l = V + l(l+1)V_L` with its unique exterior peak, and the trapping
//! terms `2V + ρ*V'`, `2V_L + ρ*V_L'` with positive-part envelopes.
//!
//! All evaluations are arranged so the factors that cancel at the horizon
//! (`F`, `2Mr−2Q²`, `r²−3Mr+2Q²`, and `P_Q` in the critical case) are
//! computed from the horizon offset `δ = r − r₊` directly, which keeps the
//! potentials positive and accurate arbitrarily deep in the `ρ* → −∞` tail.

use crate::error::{CoreError, Result};
use crate::geometry::{CoordinateMap, Regime, SpacetimeParams};
use crate::scalar::Real;

fn require_exterior<T: Real>(params: &SpacetimeParams<T>, r: T) -> Result<T> {
    let r_plus = params.r_plus();
    // The closed exterior: the potentials vanish at the horizon itself and
    // the spec's own golden values include that point.
    if !(r >= r_plus) {
        return Err(CoreError::NotExterior {
            r: r.to_f64().unwrap_or(f64::NAN),
            r_plus: r_plus.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(r - r_plus)
}

/// `V(r) = (1/r)·F·dF/dr = F·(2M/r² − 2Q²/r³)/r`.
pub fn potential_v<T: Real>(params: &SpacetimeParams<T>, r: T) -> Result<T> {
    let delta = require_exterior(params, r)?;
    Ok(potential_v_from_delta(params, delta))
}

/// `V` from the horizon offset; cancellation-free form
/// `V = F·(2Mδ + 2Mr₊ − 2Q²)/r⁴` (the constant vanishes exactly in the
/// critical case).
pub fn potential_v_from_delta<T: Real>(params: &SpacetimeParams<T>, delta: T) -> T {
    let m = params.mass();
    let q = params.charge();
    let r_plus = params.r_plus();
    let r = r_plus + delta;
    let f = params.metric_factor_from_delta(delta);
    let two = T::of(2.0);
    let c0 = two * m * r_plus - two * q * q;
    f * (two * m * delta + c0) / (r * r * r * r)
}

/// `V_L(r) = F/r²`.
pub fn potential_vl<T: Real>(params: &SpacetimeParams<T>, r: T) -> Result<T> {
    let delta = require_exterior(params, r)?;
    Ok(potential_vl_from_delta(params, delta))
}

pub fn potential_vl_from_delta<T: Real>(params: &SpacetimeParams<T>, delta: T) -> T {
    let r = params.r_plus() + delta;
    params.metric_factor_from_delta(delta) / (r * r)
}

/// The cubic `P_Q(r) = 3Mr³ − 4(Q²+2M²)r² + 15MQ²r − 6Q⁴` (Horner form).
pub fn cubic_pq<T: Real>(params: &SpacetimeParams<T>, r: T) -> T {
    let m = params.mass();
    let q2 = params.charge() * params.charge();
    let three = T::of(3.0);
    let four = T::of(4.0);
    let fifteen = T::of(15.0);
    let six = T::of(6.0);
    ((three * m * r - four * (q2 + T::of(2.0) * m * m)) * r + fifteen * m * q2) * r
        - six * q2 * q2
}

/// `P_Q` with the critical double root factored out:
/// `P_M(r) = 3M(r−M)²(r−2M)`, evaluated from δ when |Q| = M.
fn cubic_pq_from_delta<T: Real>(params: &SpacetimeParams<T>, delta: T) -> T {
    let m = params.mass();
    let r = params.r_plus() + delta;
    match params.regime() {
        Regime::Critical => T::of(3.0) * m * delta * delta * (r - T::of(2.0) * m),
        Regime::Subcritical => cubic_pq(params, r),
    }
}

/// `dV/dρ* = −2F·r⁻⁷·P_Q(r)`.
pub fn potential_v_prime<T: Real>(params: &SpacetimeParams<T>, r: T) -> Result<T> {
    let delta = require_exterior(params, r)?;
    Ok(potential_v_prime_from_delta(params, delta))
}

pub fn potential_v_prime_from_delta<T: Real>(params: &SpacetimeParams<T>, delta: T) -> T {
    let r = params.r_plus() + delta;
    let f = params.metric_factor_from_delta(delta);
    -T::of(2.0) * f * cubic_pq_from_delta(params, delta) / r.powi(7)
}

/// `dV_L/dρ* = −(2F/r³)(1 − 3M/r + 2Q²/r²)`; vanishes exactly at `r = α`.
pub fn potential_vl_prime<T: Real>(params: &SpacetimeParams<T>, r: T) -> Result<T> {
    let delta = require_exterior(params, r)?;
    Ok(potential_vl_prime_from_delta(params, delta))
}

pub fn potential_vl_prime_from_delta<T: Real>(params: &SpacetimeParams<T>, delta: T) -> T {
    let m = params.mass();
    let q = params.charge();
    let r_plus = params.r_plus();
    let r = r_plus + delta;
    let f = params.metric_factor_from_delta(delta);
    // 1 − 3M/r + 2Q²/r² = (r − α₋)(r − α₊)/r² with α± the critical points
    // of V_L; in the critical case α₋ = r₊ so r − α₋ = δ exactly.
    let disc = (T::of(9.0) * m * m - T::of(8.0) * q * q).sqrt();
    let alpha_plus = (T::of(3.0) * m + disc) / T::of(2.0);
    let alpha_minus = (T::of(3.0) * m - disc) / T::of(2.0);
    let factor = (delta + (r_plus - alpha_minus)) * (r - alpha_plus) / (r * r);
    -T::of(2.0) * f * factor / (r * r * r)
}

/// Trapping term `2V + ρ*V'` at `r(ρ*)`.
pub fn trapping_term_v<T: Real>(params: &SpacetimeParams<T>, rho_star: T) -> Result<T> {
    let delta = params.delta_of_rho_star(rho_star)?;
    Ok(trapping_term_v_from_delta(params, delta, rho_star))
}

pub fn trapping_term_v_from_delta<T: Real>(
    params: &SpacetimeParams<T>,
    delta: T,
    rho_star: T,
) -> T {
    T::of(2.0) * potential_v_from_delta(params, delta)
        + rho_star * potential_v_prime_from_delta(params, delta)
}

/// Angular trapping term `2V_L + ρ*V_L'` at `r(ρ*)`.
pub fn trapping_term_vl<T: Real>(params: &SpacetimeParams<T>, rho_star: T) -> Result<T> {
    let delta = params.delta_of_rho_star(rho_star)?;
    Ok(trapping_term_vl_from_delta(params, delta, rho_star))
}

pub fn trapping_term_vl_from_delta<T: Real>(
    params: &SpacetimeParams<T>,
    delta: T,
    rho_star: T,
) -> T {
    T::of(2.0) * potential_vl_from_delta(params, delta)
        + rho_star * potential_vl_prime_from_delta(params, delta)
}

/// Cached potentials and their `ρ*`-derivatives over a coordinate map.
#[derive(Debug, Clone)]
pub struct PotentialTable<T> {
    map: CoordinateMap<T>,
    v: Vec<T>,
    v_l: Vec<T>,
    v_prime: Vec<T>,
    v_l_prime: Vec<T>,
}

impl<T: Real> PotentialTable<T> {
    pub fn new(map: CoordinateMap<T>) -> Self {
        let params = *map.params();
        let n = map.len();
        let mut v = Vec::with_capacity(n);
        let mut v_l = Vec::with_capacity(n);
        let mut v_prime = Vec::with_capacity(n);
        let mut v_l_prime = Vec::with_capacity(n);
        for i in 0..n {
            let d = map.delta()[i];
            v.push(potential_v_from_delta(&params, d));
            v_l.push(potential_vl_from_delta(&params, d));
            v_prime.push(potential_v_prime_from_delta(&params, d));
            v_l_prime.push(potential_vl_prime_from_delta(&params, d));
        }
        Self {
            map,
            v,
            v_l,
            v_prime,
            v_l_prime,
        }
    }

    pub fn map(&self) -> &CoordinateMap<T> {
        &self.map
    }

    pub fn params(&self) -> &SpacetimeParams<T> {
        self.map.params()
    }

    pub fn len(&self) -> usize {
        self.v.len()
    }

    pub fn is_empty(&self) -> bool {
        self.v.is_empty()
    }

    pub fn v(&self) -> &[T] {
        &self.v
    }

    pub fn v_l(&self) -> &[T] {
        &self.v_l
    }

    pub fn v_prime(&self) -> &[T] {
        &self.v_prime
    }

    pub fn v_l_prime(&self) -> &[T] {
        &self.v_l_prime
    }

    /// Per-harmonic effective potential values `V + l(l+1)V_L` on the grid.
    pub fn effective_values(&self, l: u32) -> Vec<T> {
        let lt2 = T::of(l as f64 * (l as f64 + 1.0));
        self.v
            .iter()
            .zip(&self.v_l)
            .map(|(&a, &b)| a + lt2 * b)
            .collect()
    }

    /// Trapping term `2V + ρ*V'` at grid node `i`.
    pub fn trap_v(&self, i: usize) -> T {
        T::of(2.0) * self.v[i] + self.map.rho_star()[i] * self.v_prime[i]
    }

    /// Angular trapping term `2V_L + ρ*V_L'` at grid node `i`.
    pub fn trap_vl(&self, i: usize) -> T {
        T::of(2.0) * self.v_l[i] + self.map.rho_star()[i] * self.v_l_prime[i]
    }
}

/// One spherical harmonic's effective potential and its unique peak.
#[derive(Debug, Clone)]
pub struct EffectivePotential<T> {
    pub l: u32,
    /// `l(l+1)`.
    pub ltilde_sq: T,
    /// `V + l(l+1)V_L` on the grid of the map it was built from.
    pub values: Vec<T>,
    /// Peak location in areal radius, from the sign change of `I_l`.
    pub peak_r: T,
    /// Peak location `(α_l)*` in the tortoise coordinate.
    pub peak_rho_star: T,
}

/// `I_l(δ) = I + l(l+1)·I_L` with `I = P_Q/r²` and
/// `I_L = r² − 3Mr + 2Q² = (r−α₋)(r−α₊)`, evaluated from the horizon
/// offset so the critical case (where both pieces vanish at r₊) stays
/// cancellation-free.
fn peak_indicator<T: Real>(params: &SpacetimeParams<T>, lt2: T, delta: T) -> T {
    let m = params.mass();
    let q = params.charge();
    let r_plus = params.r_plus();
    let r = r_plus + delta;
    let i_v = cubic_pq_from_delta(params, delta) / (r * r);
    let disc = (T::of(9.0) * m * m - T::of(8.0) * q * q).sqrt();
    let alpha_plus = (T::of(3.0) * m + disc) / T::of(2.0);
    let alpha_minus = (T::of(3.0) * m - disc) / T::of(2.0);
    let i_l = (delta + (r_plus - alpha_minus)) * (r - alpha_plus);
    i_v + lt2 * i_l
}

/// Locates the unique root of `I_l = I + l(l+1)·I_L` on `(r₊, 10³M]` and
/// refines it by bisection; fails if zero or multiple sign changes appear.
pub fn effective_potential_peak<T: Real>(
    params: &SpacetimeParams<T>,
    l: u32,
) -> Result<(T, T)> {
    let lt2 = T::of(l as f64 * (l as f64 + 1.0));
    let m = params.mass();
    let r_plus = params.r_plus();
    // Log-spaced scan in δ from just inside the horizon out to 10³M.
    let lo_ln = (T::of(1e-9) * m).ln();
    let hi_ln = (T::of(1e3) * m - r_plus).ln();
    let n_scan = 4000usize;
    let step = (hi_ln - lo_ln) / T::of_usize(n_scan);
    let eval = |ln_d: T| peak_indicator(params, lt2, ln_d.exp());

    let mut changes: Vec<(T, T)> = Vec::new();
    let mut prev_x = lo_ln;
    let mut prev_f = eval(prev_x);
    for i in 1..=n_scan {
        let x = lo_ln + T::of_usize(i) * step;
        let fx = eval(x);
        if prev_f < T::zero() && fx >= T::zero() || prev_f > T::zero() && fx <= T::zero() {
            changes.push((prev_x, x));
        }
        prev_x = x;
        prev_f = fx;
    }
    if changes.len() != 1 {
        return Err(CoreError::PeakStructure {
            l,
            found: changes.len(),
        });
    }
    let (mut lo, mut hi) = changes[0];
    let increasing = eval(hi) > eval(lo);
    for _ in 0..200 {
        if hi - lo <= T::of(1e-14) {
            break;
        }
        let mid = T::of(0.5) * (lo + hi);
        let fm = eval(mid);
        if (fm < T::zero()) == increasing {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let delta = (T::of(0.5) * (lo + hi)).exp();
    let peak_r = r_plus + delta;
    let peak_rho_star = params.rho_star_of_delta(delta);
    Ok((peak_r, peak_rho_star))
}

/// Effective potential for mode `l` over the map's grid, with the peak
/// located by the `I_l` sign change.
pub fn effective_potential<T: Real>(
    params: &SpacetimeParams<T>,
    l: u32,
    map: &CoordinateMap<T>,
) -> Result<EffectivePotential<T>> {
    let lt2 = T::of(l as f64 * (l as f64 + 1.0));
    let values: Vec<T> = map
        .delta()
        .iter()
        .map(|&d| {
            potential_v_from_delta(params, d) + lt2 * potential_vl_from_delta(params, d)
        })
        .collect();
    let (peak_r, peak_rho_star) = effective_potential_peak(params, l)?;
    Ok(EffectivePotential {
        l,
        ltilde_sq: lt2,
        values,
        peak_r,
        peak_rho_star,
    })
}

/// Support of the positive part of the angular trapping term.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SupportVl<T> {
    /// Positive set contained strictly inside the grid.
    Bounded { lo: T, hi: T },
    /// Positive set still positive at the left grid edge (admissible only
    /// in the critical regime, where the envelope is not required to have
    /// compact support on the horizon side).
    UnboundedLeft { hi: T },
}

/// Positive-part envelopes of the trapping terms over a grid.
#[derive(Debug, Clone)]
pub struct TrappingEnvelopes<T> {
    /// `W = max(0, 2V + ρ*V')` pointwise.
    pub w: Vec<T>,
    /// `W_L = max(0, 2V_L + ρ*V_L')` pointwise.
    pub w_l: Vec<T>,
    /// Outermost sign-change bracket of the potential trapping term.
    pub support_v: (T, T),
    /// Support of the angular trapping term's positive part.
    pub support_vl: SupportVl<T>,
}

/// Computes the envelopes; fails if a positive region that must be compact
/// touches a grid edge (grid too small).
pub fn trapping_envelopes<T: Real>(
    params: &SpacetimeParams<T>,
    map: &CoordinateMap<T>,
) -> Result<TrappingEnvelopes<T>> {
    let n = map.len();
    let rho = map.rho_star();
    let mut trap_v = Vec::with_capacity(n);
    let mut trap_vl = Vec::with_capacity(n);
    for i in 0..n {
        let d = map.delta()[i];
        trap_v.push(trapping_term_v_from_delta(params, d, rho[i]));
        trap_vl.push(trapping_term_vl_from_delta(params, d, rho[i]));
    }

    let positive_range = |vals: &[T]| -> Option<(usize, usize)> {
        let first = vals.iter().position(|&x| x > T::zero())?;
        let last = vals.iter().rposition(|&x| x > T::zero())?;
        Some((first, last))
    };

    let (v_lo, v_hi) = positive_range(&trap_v).ok_or_else(|| {
        CoreError::InvalidGrid("potential trapping term has no positive region on the grid".into())
    })?;
    if v_lo == 0 {
        return Err(CoreError::EnvelopeTouchesEdge { side: "left" });
    }
    if v_hi == n - 1 {
        return Err(CoreError::EnvelopeTouchesEdge { side: "right" });
    }
    let support_v = (rho[v_lo - 1], rho[v_hi + 1]);

    let (l_lo, l_hi) = positive_range(&trap_vl).ok_or_else(|| {
        CoreError::InvalidGrid("angular trapping term has no positive region on the grid".into())
    })?;
    if l_hi == n - 1 {
        return Err(CoreError::EnvelopeTouchesEdge { side: "right" });
    }
    let support_vl = if l_lo == 0 {
        if params.regime() == Regime::Subcritical {
            return Err(CoreError::EnvelopeTouchesEdge { side: "left" });
        }
        SupportVl::UnboundedLeft { hi: rho[l_hi + 1] }
    } else {
        SupportVl::Bounded {
            lo: rho[l_lo - 1],
            hi: rho[l_hi + 1],
        }
    };

    let zero = T::zero();
    Ok(TrappingEnvelopes {
        w: trap_v.iter().map(|&x| x.max(zero)).collect(),
        w_l: trap_vl.iter().map(|&x| x.max(zero)).collect(),
        support_v,
        support_vl,
    })
}
