//! Small quadrature and finite-difference helpers shared by the potential
//! and functional layers.

use crate::scalar::Real;

/// Trapezoid rule on a uniform grid with spacing `h`.
pub fn trapezoid<T: Real>(values: &[T], h: T) -> T {
    if values.len() < 2 {
        return T::zero();
    }
    let half = T::of(0.5);
    let ends = half * (values[0] + values[values.len() - 1]);
    let interior: T = values[1..values.len() - 1].iter().copied().sum();
    h * (ends + interior)
}

/// Trapezoid rule for `f` sampled on a uniform grid.
pub fn trapezoid_fn<T: Real>(n: usize, h: T, mut f: impl FnMut(usize) -> T) -> T {
    if n < 2 {
        return T::zero();
    }
    let half = T::of(0.5);
    let mut acc = half * (f(0) + f(n - 1));
    for i in 1..n - 1 {
        acc += f(i);
    }
    h * acc
}

/// Centered first derivative on a uniform grid, one-sided second-order
/// stencils at the ends.
pub fn derivative<T: Real>(values: &[T], h: T) -> Vec<T> {
    let n = values.len();
    assert!(n >= 3, "derivative needs at least 3 nodes");
    let two_h = T::of(2.0) * h;
    let mut out = vec![T::zero(); n];
    out[0] = (-T::of(3.0) * values[0] + T::of(4.0) * values[1] - values[2]) / two_h;
    for i in 1..n - 1 {
        out[i] = (values[i + 1] - values[i - 1]) / two_h;
    }
    out[n - 1] =
        (T::of(3.0) * values[n - 1] - T::of(4.0) * values[n - 2] + values[n - 3]) / two_h;
    out
}

/// Centered first derivative with a fourth-order five-point interior
/// stencil (second-order fallback on the two nodes nearest each edge).
///
/// Used by the functional layer so the measured energies sit well below
/// the evolution scheme's own conservation error.
pub fn derivative4<T: Real>(values: &[T], h: T) -> Vec<T> {
    let n = values.len();
    if n < 5 {
        return derivative(values, h);
    }
    let mut out = derivative(values, h);
    let twelve_h = T::of(12.0) * h;
    for i in 2..n - 2 {
        out[i] = (values[i - 2] - T::of(8.0) * values[i - 1] + T::of(8.0) * values[i + 1]
            - values[i + 2])
            / twelve_h;
    }
    out
}

/// Gauss-Legendre nodes and weights on [-1, 1].
///
/// Newton iteration on P_n seeded by the Chebyshev-like initial guess;
/// accurate to machine precision for the orders used here (≤ a few hundred).
pub fn gauss_legendre<T: Real>(n: usize) -> Vec<(T, T)> {
    assert!(n >= 1);
    let mut rule = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = T::of(
            (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos(),
        );
        let mut dp = T::one();
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let step = p / d;
            x = x - step;
            if step.abs() <= T::epsilon() * (T::one() + x.abs()) {
                break;
            }
        }
        let w = T::of(2.0) / ((T::one() - x * x) * dp * dp);
        rule.push((x, w));
    }
    rule.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    rule
}

/// Legendre polynomial P_n(x) and its derivative by the three-term
/// recurrence.
pub fn legendre_with_derivative<T: Real>(n: usize, x: T) -> (T, T) {
    let mut p0 = T::one();
    let mut p1 = x;
    if n == 0 {
        return (p0, T::zero());
    }
    for k in 2..=n {
        let kf = T::of_usize(k);
        let p2 = ((T::of(2.0) * kf - T::one()) * x * p1 - (kf - T::one()) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    // P_n' from the standard identity, guarded at the endpoints.
    let denom = T::one() - x * x;
    let d = if denom.abs() > T::epsilon() {
        T::of_usize(n) * (p0 - x * p1) / denom
    } else {
        let sign = if x > T::zero() { T::one() } else { -T::one() };
        let nf = T::of_usize(n);
        sign.powi(n as i32 + 1) * nf * (nf + T::one()) / T::of(2.0)
    };
    (p1, d)
}

/// Legendre polynomial P_n(x).
pub fn legendre<T: Real>(n: usize, x: T) -> T {
    legendre_with_derivative(n, x).0
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn trapezoid_matches_closed_form() {
        // ∫_0^1 x^2 dx = 1/3 with O(h^2) error.
        let n = 2001;
        let h = 1.0 / (n as f64 - 1.0);
        let vals: Vec<f64> = (0..n).map(|i| (i as f64 * h).powi(2)).collect();
        assert_relative_eq!(trapezoid(&vals, h), 1.0 / 3.0, max_relative = 1e-6);
    }

    #[test]
    fn gauss_legendre_integrates_polynomials_exactly() {
        // Order n is exact up to degree 2n-1.
        for n in [2usize, 5, 16, 33] {
            let rule = gauss_legendre::<f64>(n);
            let deg = 2 * n - 1;
            let integral: f64 = rule.iter().map(|&(x, w)| w * x.powi(deg as i32 - 1)).sum();
            // ∫_-1^1 x^(deg-1) dx, deg-1 even
            let exact = 2.0 / deg as f64;
            assert_relative_eq!(integral, exact, max_relative = 1e-12);
            let total: f64 = rule.iter().map(|&(_, w)| w).sum();
            assert_relative_eq!(total, 2.0, max_relative = 1e-13);
        }
    }

    #[test]
    fn legendre_recurrence_known_values() {
        assert_relative_eq!(legendre(2, 0.5f64), 0.5 * (3.0 * 0.25 - 1.0));
        assert_relative_eq!(legendre(3, 1.0f64), 1.0);
        assert_relative_eq!(legendre(4, -1.0f64), 1.0);
    }

    #[test]
    fn derivative4_is_fourth_order() {
        let f = |x: f64| (1.3 * x).sin();
        let err = |n: usize| -> f64 {
            let h = 2.0 / (n as f64 - 1.0);
            let vals: Vec<f64> = (0..n).map(|i| f(-1.0 + i as f64 * h)).collect();
            let d = derivative4(&vals, h);
            // interior nodes only; edges fall back to second order
            (2..n - 2)
                .map(|i| (d[i] - 1.3 * (1.3 * (-1.0 + i as f64 * h)).cos()).abs())
                .fold(0.0, f64::max)
        };
        let order = (err(101) / err(201)).log2();
        assert!(order > 3.8 && order < 4.4, "order={order}");
    }

    #[test]
    fn derivative_is_second_order() {
        let f = |x: f64| (1.3 * x).sin();
        let err = |n: usize| -> f64 {
            let h = 2.0 / (n as f64 - 1.0);
            let vals: Vec<f64> = (0..n).map(|i| f(-1.0 + i as f64 * h)).collect();
            let d = derivative(&vals, h);
            (0..n)
                .map(|i| (d[i] - 1.3 * (1.3 * (-1.0 + i as f64 * h)).cos()).abs())
                .fold(0.0, f64::max)
        };
        let order = (err(101) / err(201)).log2();
        assert!(order > 1.8 && order < 2.4, "order={order}");
    }
}
