//! `rnwave`: command-line front end for the black-hole wave laboratory.
//!
//! Subcommands: `geometry-table`, `potentials-table`, `evolve`, `verify`.
//! Exit codes: 0 success, 1 validation error, 2 runtime defect.

mod config;
mod report;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rnwave_core::analysis::{build_report, StudyInputs};
use rnwave_core::csv::{fmt_value, parse_series_csv, series_to_csv};
use rnwave_core::functionals::morawetz_weight;
use rnwave_core::evolution::{build_table, evolve};
use rnwave_core::geometry::{build_coordinate_map, SpacetimeParams};
use rnwave_core::potentials::PotentialTable;

#[derive(Parser)]
#[command(
    name = "rnwave",
    about = "Wave equation laboratory on Schwarzschild / Reissner-Nordström exteriors",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Emit the coordinate map as CSV (rho_star, r, F).
    GeometryTable {
        #[arg(long = "M")]
        m: f64,
        #[arg(long = "Q")]
        q: f64,
        #[arg(long, default_value_t = -50.0, allow_negative_numbers = true)]
        rho_min: f64,
        #[arg(long, default_value_t = 50.0, allow_negative_numbers = true)]
        rho_max: f64,
        #[arg(long, default_value_t = 1001)]
        n_points: usize,
        /// Output file (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Emit potentials and trapping terms as CSV
    /// (rho_star, V, V_L, V_l..., trapV, trapVL).
    PotentialsTable {
        #[arg(long = "M")]
        m: f64,
        #[arg(long = "Q")]
        q: f64,
        #[arg(long, default_value_t = -50.0, allow_negative_numbers = true)]
        rho_min: f64,
        #[arg(long, default_value_t = 50.0, allow_negative_numbers = true)]
        rho_max: f64,
        #[arg(long, default_value_t = 1001)]
        n_points: usize,
        /// Harmonic indices, comma separated (e.g. 0,1,2).
        #[arg(long, value_delimiter = ',', default_value = "0")]
        l: Vec<u32>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a configured evolution and write the functional series.
    Evolve {
        /// Flat key-value config file.
        #[arg(long)]
        config: PathBuf,
        /// Output directory (created if absent).
        #[arg(long)]
        out: PathBuf,
    },
    /// Evaluate the verification checks against a run directory.
    Verify {
        /// Run directory holding config.txt and series.csv.
        #[arg(long)]
        run: PathBuf,
        /// Where to write report.json / report.txt (defaults to the run dir).
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Usage and argv problems are exit code 1 by contract.
            eprint!("{e}");
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Validation(msgs)) => {
            for m in msgs {
                eprintln!("error: {m}");
            }
            ExitCode::from(1)
        }
        Err(CliError::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

enum CliError {
    Validation(Vec<String>),
    Runtime(String),
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

fn validation(msg: impl Into<String>) -> CliError {
    CliError::Validation(vec![msg.into()])
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::GeometryTable {
            m,
            q,
            rho_min,
            rho_max,
            n_points,
            out,
        } => {
            let params =
                SpacetimeParams::new(m, q).map_err(|e| validation(e.to_string()))?;
            let map = build_coordinate_map(params, rho_min, rho_max, n_points)
                .map_err(|e| validation(e.to_string()))?;
            let mut text = String::from("rho_star,r,F\n");
            for i in 0..map.len() {
                text.push_str(&format!(
                    "{},{},{}\n",
                    fmt_value(map.rho_star()[i]),
                    fmt_value(map.r()[i]),
                    fmt_value(map.f()[i])
                ));
            }
            emit(out.as_deref(), &text)?;
            Ok(())
        }
        Command::PotentialsTable {
            m,
            q,
            rho_min,
            rho_max,
            n_points,
            l,
            out,
        } => {
            let params =
                SpacetimeParams::new(m, q).map_err(|e| validation(e.to_string()))?;
            let map = build_coordinate_map(params, rho_min, rho_max, n_points)
                .map_err(|e| validation(e.to_string()))?;
            let table = PotentialTable::new(map);
            let mut text = String::from("rho_star,V,V_L");
            for &mode in &l {
                text.push_str(&format!(",V_l{mode}"));
            }
            text.push_str(",trapV,trapVL\n");
            let effective: Vec<Vec<f64>> =
                l.iter().map(|&mode| table.effective_values(mode)).collect();
            for i in 0..table.len() {
                let mut row = format!(
                    "{},{},{}",
                    fmt_value(table.map().rho_star()[i]),
                    fmt_value(table.v()[i]),
                    fmt_value(table.v_l()[i])
                );
                for values in &effective {
                    row.push_str(&format!(",{}", fmt_value(values[i])));
                }
                row.push_str(&format!(
                    ",{},{}\n",
                    fmt_value(table.trap_v(i)),
                    fmt_value(table.trap_vl(i))
                ));
                text.push_str(&row);
            }
            emit(out.as_deref(), &text)?;
            Ok(())
        }
        Command::Evolve { config, out } => run_evolve(&config, &out),
        Command::Verify { run, out } => run_verify(&run, out.as_deref()),
    }
}

fn run_evolve(config_path: &Path, out: &Path) -> Result<(), CliError> {
    let text = fs::read_to_string(config_path)
        .map_err(|e| validation(format!("{}: {e}", config_path.display())))?;
    let cfg = config::parse_config(&text).map_err(CliError::Validation)?;

    fs::create_dir_all(out)?;
    fs::write(out.join("config.txt"), &cfg.echo)?;

    let l_max = cfg.evolution.modes.iter().map(|m| m.l).max().unwrap_or(0) as usize;
    if cfg.functionals.sphere_order != 0 && 2 * l_max > cfg.functionals.sphere_order {
        eprintln!(
            "warning: sphere_quad_order {} is below 2*l_max = {}; the weighted L6 norm \
             will be under-integrated",
            cfg.functionals.sphere_order,
            2 * l_max
        );
    }

    // Resolve the Morawetz weight for every configured mode up front: the
    // toggles must be validated before any compute starts.
    for mode in &cfg.evolution.modes {
        morawetz_weight(
            &cfg.evolution.params,
            mode.l,
            cfg.morawetz_b,
            cfg.morawetz_sigma,
        )
        .map_err(|e| validation(format!("morawetz weight (l={}): {e}", mode.l)))?;
    }

    let outcome = build_table(&cfg.evolution)
        .and_then(|table| evolve(&cfg.evolution, &table, &cfg.functionals));
    match outcome {
        Ok(series) => {
            let tmp = out.join("series.csv.tmp");
            fs::write(&tmp, series_to_csv(&series))?;
            fs::rename(&tmp, out.join("series.csv"))?;
            Ok(())
        }
        Err(e) => {
            let _ = fs::remove_file(out.join("series.csv.tmp"));
            fs::write(out.join("FAILED"), format!("{e}\n"))?;
            Err(CliError::Runtime(e.to_string()))
        }
    }
}

fn run_verify(run_dir: &Path, out: Option<&Path>) -> Result<(), CliError> {
    if !run_dir.is_dir() {
        return Err(validation(format!("{}: not a directory", run_dir.display())));
    }
    let out = out.unwrap_or(run_dir);
    fs::create_dir_all(out)?;

    // Missing or malformed series leaves the run checks inconclusive.
    let data = fs::read_to_string(run_dir.join("series.csv"))
        .ok()
        .and_then(|text| parse_series_csv(&text).ok())
        .map(|mut d| {
            d.boundary_contact = fs::read_to_string(run_dir.join("config.txt"))
                .ok()
                .and_then(|text| config::parse_config(&text).ok())
                .map(|cfg| cfg.evolution.boundary_contact_time());
            d
        });

    let report = build_report(data.as_ref(), &StudyInputs::default());
    fs::write(out.join("report.json"), report::to_json(&report))?;
    fs::write(out.join("report.txt"), report.to_text())?;
    print!("{}", report.to_text());
    Ok(())
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => {
            fs::write(path, text)?;
            Ok(())
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
