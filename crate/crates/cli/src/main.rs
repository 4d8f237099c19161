use std::f64::consts::TAU;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use fwm_core::{
    optimize_delta, run_sweep, to_decibels, write_csv, Error, PhysicalConfig, RunManifest,
    SweepRow, SweepSpec,
};

/// Sweep the four-wave mixing noise model and write spectra as CSV.
///
/// A preset supplies parameters and sweeps. `--config` replaces the
/// preset's parameters and `--sweep` replaces its sweeps.
#[derive(Parser, Debug)]
#[command(name = "simulate", version)]
struct Args {
    /// Parameter file (`key = value`, frequencies in Hz).
    #[arg(long)]
    config: Option<PathBuf>,

    /// One of fig2, fig3a, fig3b, fig4, fig5, fig6.
    #[arg(long)]
    preset: Option<String>,

    /// `axis:start_hz:stop_hz:points:linear|log`, outer axis first. Axes:
    /// delta_small, omega, gamma_small, omega_rabi, delta_big.
    #[arg(long = "sweep", value_name = "SPEC")]
    sweeps: Vec<String>,

    /// Drop the atomic Langevin noise.
    #[arg(long)]
    no_langevin: bool,

    #[arg(long, value_name = "N")]
    quad_order: Option<usize>,

    /// CSV destination; standard output when absent.
    #[arg(long, value_name = "CSV")]
    out: Option<PathBuf>,

    /// Analysis frequency in Hz when ω is not swept.
    #[arg(long, value_name = "HZ")]
    omega_hz: Option<f64>,

    /// Put every atom in |2⟩ instead of solving for the pumped state.
    #[arg(long)]
    pin_ground: bool,

    /// Search the two-photon detuning that minimizes the inseparability at
    /// the analysis frequency instead of sweeping.
    #[arg(long)]
    optimize_delta: bool,
}

fn manifest(args: &Args) -> Result<RunManifest, Error> {
    let mut m = match &args.preset {
        Some(name) => RunManifest::preset(name)?,
        None => RunManifest::default(),
    };
    if let Some(path) = &args.config {
        m.config = PhysicalConfig::from_file(path)?;
    }
    if !args.sweeps.is_empty() {
        m.sweeps = args
            .sweeps
            .iter()
            .map(|s| s.parse::<SweepSpec>())
            .collect::<Result<_, _>>()?;
    }
    if args.no_langevin {
        m.langevin_enabled = false;
    }
    if let Some(n) = args.quad_order {
        m.quad_order = n;
    }
    if let Some(hz) = args.omega_hz {
        m.analysis_omega = TAU * hz;
    }
    m.pinned_ground |= args.pin_ground;
    m.output_path = args.out.clone();
    m.validate()?;
    Ok(m)
}

fn summarize(rows: &[SweepRow]) {
    let failed = rows.iter().filter(|r| r.error.is_some()).count();
    eprintln!("{} points, {failed} failed", rows.len());
    let best = rows
        .iter()
        .filter(|r| r.record.inseparability.is_finite())
        .min_by(|a, b| a.record.inseparability.total_cmp(&b.record.inseparability));
    if let Some(r) = best {
        let r = r.record;
        eprintln!(
            "min inseparability {:.4} at delta = {:.4} MHz, omega = {:.4} MHz",
            r.inseparability,
            r.delta_small / TAU / 1e6,
            r.omega / TAU / 1e6
        );
    }
    let squeezed = rows
        .iter()
        .filter_map(|r| to_decibels(r.record.s_x_minus).ok())
        .fold(f64::INFINITY, f64::min);
    if squeezed.is_finite() {
        eprintln!("min S_x- {squeezed:.3} dB");
    }
    let gain = rows
        .iter()
        .filter(|r| r.record.gain_a.is_finite())
        .max_by(|a, b| a.record.gain_a.total_cmp(&b.record.gain_a));
    if let Some(r) = gain {
        eprintln!(
            "max G_a {:.4} at delta = {:.4} MHz",
            r.record.gain_a,
            r.record.delta_small / TAU / 1e6
        );
    }
}

fn run(args: &Args) -> Result<(), Error> {
    let m = manifest(args)?;
    if args.optimize_delta {
        match optimize_delta(&m.config, m.analysis_omega) {
            Ok((delta, insep)) => println!(
                "delta_opt = {:.4} MHz, inseparability = {insep:.6}",
                delta / TAU / 1e6
            ),
            Err(Error::NoMinimum { best }) => {
                println!("no entangling detuning found (best inseparability {best:.6})")
            }
            Err(e) => return Err(e),
        }
        return Ok(());
    }
    let rows = run_sweep(&m)?;
    let extra = m.extra_axes();
    match &m.output_path {
        Some(path) => {
            let mut out = BufWriter::new(File::create(path)?);
            write_csv(&rows, &extra, &mut out)?;
            out.flush()?;
        }
        None => write_csv(&rows, &extra, io::stdout().lock())?,
    }
    summarize(&rows);
    Ok(())
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
