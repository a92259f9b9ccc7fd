//! Scratch probe: decompose the criterion-5 energy drift floor.

use rnwave_core::evolution::*;
use rnwave_core::functionals::FunctionalSet;
use rnwave_core::geometry::SpacetimeParams;

fn run(n: usize, cfl: f64, w: f64, kind: InitialDataKind, c: f64, label: &str) {
    let cfg: EvolutionConfig<f64> = EvolutionConfig {
        params: SpacetimeParams::schwarzschild(1.0).unwrap(),
        grid: GridSpec {
            rho_min: -200.0,
            rho_max: 200.0,
            n_points: n,
        },
        modes: vec![ModeSpec {
            l: 0,
            kind,
            center: c,
            width: w,
            amplitude: 1.0,
            multiplicity: 1.0,
        }],
        t0: 1.0,
        t_end: 151.0,
        cfl,
        snapshot_cadence: 1.0,
        threads: 0,
    };
    let table = build_table(&cfg).unwrap();
    let mut set = FunctionalSet::default_for(&cfg);
    set.with_sobolev = false;
    set.betas = vec![2.0];
    set.ps = vec![];
    let series = evolve(&cfg, &table, &set).unwrap();
    let e0 = series.records[0].e_total;
    let contact = cfg.boundary_contact_time().min(151.0);
    let (mut worst, mut at) = (0.0f64, 0.0f64);
    for r in series.records.iter().filter(|r| r.t <= contact) {
        let d = ((r.e_total - e0) / e0).abs();
        if d > worst { worst = d; at = r.t; }
    }
    println!("{label}: contact={contact:.0} max_drift={worst:.3e} at t={at:.0}");
}

fn main() {
    let ing = InitialDataKind::IngoingGaussian;
    run(16001, 0.5, 8.0, ing, 60.0, "ing w=8  c=60");
    run(16001, 0.5, 9.0, ing, 60.0, "ing w=9  c=60");
    run(16001, 0.5, 10.0, ing, 60.0, "ing w=10 c=60");
    run(16001, 0.5, 10.0, ing, 70.0, "ing w=10 c=70");
    run(16001, 0.5, 12.0, ing, 74.0, "ing w=12 c=74");
    run(16001, 0.5, 8.0, InitialDataKind::TimeSymmetricGaussian, 0.0, "sym w=8  c=0 ");
}
