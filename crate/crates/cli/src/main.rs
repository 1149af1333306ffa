//! `dppln`: design dual-periodic PPLN waveguide sources of polarization
//! entangled photon pairs.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};

use config::DesignConfig;

#[derive(Parser)]
#[command(name = "dppln", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Option<Command>,

    /// JSON configuration; the reference 10 x 10 um design when omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Directory for output files. Without it the main artifact goes to stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Crystal temperature, degrees C.
    #[arg(long, global = true)]
    temperature: Option<f64>,

    /// Interaction length, mm.
    #[arg(long = "length-mm", global = true)]
    length_mm: Option<f64>,

    /// Print the effective configuration as JSON and exit.
    #[arg(long = "dump-config", global = true)]
    dump_config: bool,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Solve one design: modes, grating periods, entanglement, bandwidths.
    Design,
    /// Entanglement and periods over a set of waveguide geometries.
    Sweep,
    /// Emission spectra of both processes around the design signal.
    Spectrum {
        /// Half width of the scan, nm.
        #[arg(long = "half-range-nm")]
        half_range_nm: Option<f64>,
        #[arg(long)]
        samples: Option<usize>,
        /// Linearize the mismatch with group indices instead of re-solving modes.
        #[arg(long)]
        taylor: bool,
    },
    /// Poling pattern over whole modulation periods and its Fourier check.
    Grating,
}

fn effective_config(cli: &Cli) -> Result<DesignConfig> {
    let mut cfg = match &cli.config {
        Some(p) => DesignConfig::load(p)?,
        None => DesignConfig::default(),
    };
    if let Some(t) = cli.temperature {
        cfg.interaction.temperature_c = t;
    }
    if let Some(l) = cli.length_mm {
        cfg.interaction.length_mm = l;
    }
    if let Some(dir) = &cli.out {
        cfg.outputs.directory = Some(dir.clone());
    }
    if let Some(Command::Spectrum {
        half_range_nm,
        samples,
        taylor,
    }) = cli.command
    {
        if let Some(h) = half_range_nm {
            cfg.spectrum.half_range_nm = h;
        }
        if let Some(n) = samples {
            cfg.spectrum.samples = n;
        }
        cfg.spectrum.taylor |= taylor;
    }
    Ok(cfg)
}

fn run(cli: &Cli) -> Result<()> {
    let cfg = effective_config(cli)?;
    if cli.dump_config {
        println!("{}", serde_json::to_string_pretty(&cfg)?);
        return Ok(());
    }
    let Some(command) = cli.command else {
        bail!("no subcommand given (design, sweep, spectrum or grating)");
    };
    cfg.validate()?;
    let artifacts = match command {
        Command::Design => commands::design(&cfg)?,
        Command::Sweep => commands::sweep(&cfg)?,
        Command::Spectrum { .. } => commands::spectrum(&cfg)?,
        Command::Grating => commands::grating(&cfg)?,
    };
    match &cfg.outputs.directory {
        Some(dir) => {
            std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            for a in &artifacts {
                let path = dir.join(&a.name);
                std::fs::write(&path, &a.bytes)
                    .with_context(|| format!("writing {}", path.display()))?;
            }
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            for a in artifacts.iter().filter(|a| a.primary) {
                match stdout.write_all(&a.bytes) {
                    // a closed pipe (`| head`) is not a failure
                    Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => return Ok(()),
                    r => r?,
                }
            }
            for a in artifacts.iter().filter(|a| !a.primary) {
                eprintln!("note: {} not written; pass --out <dir> to keep it", a.name);
            }
        }
    }
    Ok(())
}

/// 2 when the physics has no solution, 1 for anything else.
fn exit_code(e: &anyhow::Error) -> u8 {
    let physics = e
        .chain()
        .filter_map(|c| c.downcast_ref::<dppln_core::Error>())
        .any(dppln_core::Error::is_physics_infeasibility);
    if physics {
        2
    } else {
        1
    }
}

fn main() -> ExitCode {
    // clap's own usage-error code (2) would read as a physics failure
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
