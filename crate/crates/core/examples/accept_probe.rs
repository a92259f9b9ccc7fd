//! Scratch probe: calibrate the flux-identity and decay/saturation runs.

use rnwave_core::analysis::*;
use rnwave_core::evolution::*;
use rnwave_core::functionals::FunctionalSet;
use rnwave_core::geometry::SpacetimeParams;

fn flux_cfg(n: usize, cadence: f64) -> EvolutionConfig<f64> {
    EvolutionConfig {
        params: SpacetimeParams::schwarzschild(1.0).unwrap(),
        grid: GridSpec {
            rho_min: -60.0,
            rho_max: 60.0,
            n_points: n,
        },
        modes: vec![
            ModeSpec {
                l: 0,
                kind: InitialDataKind::TimeSymmetricGaussian,
                center: 0.0,
                width: 1.0,
                amplitude: 1.0,
                multiplicity: 1.0,
            },
            ModeSpec {
                l: 2,
                kind: InitialDataKind::TimeSymmetricGaussian,
                center: 0.0,
                width: 1.0,
                amplitude: 0.5,
                multiplicity: 1.0,
            },
        ],
        t0: 1.0,
        t_end: 21.0,
        cfl: 0.5,
        snapshot_cadence: cadence,
        threads: 0,
    }
}

fn mismatch(cfg: &EvolutionConfig<f64>) -> f64 {
    let table = build_table(cfg).unwrap();
    let mut set = FunctionalSet::default_for(cfg);
    set.with_sobolev = false;
    set.betas = vec![2.0];
    set.ps = vec![];
    let series = evolve(cfg, &table, &set).unwrap();
    let t: Vec<f64> = series.records.iter().map(|r| r.t).collect();
    let e_c: Vec<f64> = series.records.iter().map(|r| r.e_c).collect();
    let flux: Vec<f64> = series.records.iter().map(|r| r.conformal_flux).collect();
    let e: Vec<f64> = series.records.iter().map(|r| r.e_total).collect();
    check_conformal_identity(&t, &e_c, &flux, &e).unwrap()
}

fn main() {
    let coarse = mismatch(&flux_cfg(2401, 0.1));
    let fine = mismatch(&flux_cfg(4801, 0.05));
    println!("flux mismatch coarse={coarse:.4e} fine={fine:.4e} ratio={:.2}", coarse / fine);

    // shared decay run
    let cfg: EvolutionConfig<f64> = EvolutionConfig {
        params: SpacetimeParams::schwarzschild(1.0).unwrap(),
        grid: GridSpec {
            rho_min: -150.0,
            rho_max: 250.0,
            n_points: 8001,
        },
        modes: [0u32, 1, 2]
            .iter()
            .map(|&l| ModeSpec {
                l,
                kind: InitialDataKind::TimeSymmetricGaussian,
                center: 0.0,
                width: 1.0,
                amplitude: 1.0,
                multiplicity: 1.0,
            })
            .collect(),
        t0: 1.0,
        t_end: 201.0,
        cfl: 0.5,
        snapshot_cadence: 1.0,
        threads: 0,
    };
    let table = build_table(&cfg).unwrap();
    let set = FunctionalSet::default_for(&cfg);
    let started = std::time::Instant::now();
    let series = evolve(&cfg, &table, &set).unwrap();
    println!("decay run elapsed {:?}", started.elapsed());

    let l2b2 = series.series(|r| r.weighted_l2_at(2.0).unwrap());
    let sat2 = spacetime_integral(&l2b2).saturation;
    let ang = series.series(|r| r.angular_local_at(0.75).unwrap());
    let sat_ang = spacetime_integral(&ang).saturation;
    println!("saturation beta2={sat2:.4e} angular(p=3/4)={sat_ang:.4e}");

    let t_hi = 201.0;
    let l6 = series.series(|r| r.weighted_l6);
    let fit6 = fit_decay_exponent(&l6, (t_hi / 4.0, t_hi)).unwrap();
    let l2b1: Vec<(f64, f64)> = series
        .series(|r| r.weighted_l2_at(1.0).unwrap())
        .into_iter()
        .map(|(t, y)| (t, y.sqrt()))
        .collect();
    let fit1 = fit_decay_exponent(&l2b1, (t_hi / 4.0, t_hi)).unwrap();
    println!(
        "L6 slope={:.4} (resid {:.2e})  wL2(b=1) norm slope={:.4} (resid {:.2e})",
        fit6.slope, fit6.residual, fit1.slope, fit1.residual
    );

    // domination constant over the run
    let fitted_c = series
        .records
        .iter()
        .filter(|r| r.weighted_dom > 0.0)
        .map(|r| r.e_c / r.weighted_dom)
        .fold(f64::INFINITY, f64::min);
    println!("domination: largest admissible C = {fitted_c:.4}");

    // sobolev ratio range over the run
    let ratios: Vec<f64> = series.records.iter().filter_map(|r| r.sobolev.map(|s| s.ratio)).collect();
    let rmin = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
    let rmax = ratios.iter().cloned().fold(0.0f64, f64::max);
    println!("sobolev ratio range [{rmin:.4}, {rmax:.4}]");
}
