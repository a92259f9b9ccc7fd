//! Numerical laboratory for the scalar wave equation on the exterior of
//! Schwarzschild and Reissner-Nordström black holes.
//!
//! The crate is organised around the pipeline
//!
//! 1. [`geometry`] — static background: metric factor, horizons, photon
//!    sphere, tortoise coordinate `ρ*` and its tabulated inverse.
//! 2. [`potentials`] — the potential `V`, angular potential `V_L`, their
//!    `ρ*`-derivatives, per-harmonic effective potentials with their unique
//!    peaks, and the trapping terms `2V+ρ*V'`, `2V_L+ρ*V_L'`.
//! 3. [`evolution`] — leapfrog time evolution of each spherical-harmonic
//!    mode of `ü = u″ − V_l u` on a uniform `ρ*` grid with outgoing
//!    (Sommerfeld) boundaries.
//! 4. [`functionals`] — energy (two forms), conformal charge (definition and
//!    manifestly positive forms), conformal flux, weighted L²/L⁶ norms,
//!    Morawetz and angularly modulated weights, localized angular energies.
//! 5. [`analysis`] — decay-exponent fits, conservation and flux-identity
//!    checks, cumulative space-time integrals, and a consolidated
//!    verification report.
//!
//! All numerics are generic over the scalar type through [`Real`]; the
//! concrete aliases below pin the types used by the command-line tools.

pub mod analysis;
pub mod csv;
pub mod error;
pub mod evolution;
pub mod functionals;
pub mod geometry;
pub mod potentials;
pub mod quad;
pub mod scalar;

pub use error::CoreError;
pub use scalar::Real;

/// Scalar type used by the CLI and the reference tests.
pub type Scalar = f64;
/// Coordinate map at the default precision.
pub type CoordinateMap = geometry::CoordinateMap<Scalar>;
/// Potential table at the default precision.
pub type PotentialTable = potentials::PotentialTable<Scalar>;
/// Run series at the default precision.
pub type RunSeries = evolution::RunSeries<Scalar>;
