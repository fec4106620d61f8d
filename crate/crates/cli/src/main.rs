use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use mptrap_cli::sweep::SweepSpec;
use mptrap_cli::{config, output_dir, CliError};

/// Multiphoton-modified spontaneous decay: runs, sweeps and oracle checks.
///
/// Outputs go to ./output unless MPTRAP_OUTPUT_DIR is set.
#[derive(Parser)]
#[command(name = "mptrap", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate one configuration and write its trace CSV.
    Run { config: PathBuf },
    /// Sweep one parameter over explicit values or a named preset.
    Sweep {
        config: PathBuf,
        #[arg(long, requires = "values", conflicts_with = "preset")]
        param: Option<String>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, num_args = 0..)]
        values: Option<Vec<String>>,
        /// fig4, fig5, fig6, fig7a, fig7b, fig7c or fig7d.
        #[arg(long)]
        preset: Option<String>,
    },
    /// Compare the reduced model against full integration on a small instance.
    Oracle { config: PathBuf },
    /// Print the coupling coefficients and reduced equation coefficients.
    DumpCouplings { config: PathBuf },
}

fn execute(cli: Cli) -> Result<u8, CliError> {
    let dir = output_dir();
    match cli.command {
        Command::Run { config } => {
            let rc = config::load(&config)?;
            let r = mptrap_cli::run_single(&rc, &dir)?;
            println!("{} trapping_metric={:.6}", r.path.display(), r.trapping_metric);
            Ok(0)
        }
        Command::Sweep {
            config,
            param,
            values,
            preset,
        } => {
            let spec = match (param, values, preset) {
                (_, _, Some(p)) => SweepSpec::preset(&p)?,
                (Some(p), Some(v), None) => SweepSpec::from_values(&p, &v)?,
                _ => return Err(CliError::parse("sweep needs --param with --values, or --preset".into())),
            };
            let rc = config::load(&config)?;
            let report = mptrap_cli::run_sweep(&rc, &spec, &dir)?;
            for e in &report.entries {
                match &e.result {
                    Ok(m) => println!("{} = {}: trapping_metric={m:.6}", spec.parameter.name(), e.label),
                    Err(err) => eprintln!("{} = {}: error: {err}", spec.parameter.name(), e.label),
                }
            }
            println!("{}", report.manifest.display());
            Ok(report.exit_code())
        }
        Command::Oracle { config } => {
            let rc = config::load(&config)?;
            let r = mptrap_cli::run_oracle_check(&rc, &dir)?;
            let c = &r.verification.comparison;
            println!(
                "{}: max relative deviation {:.3}% at t = {:.4e} s (tolerance {:.1}%), norm drift {:.2e}",
                if c.pass { "pass" } else { "FAIL" },
                100.0 * c.max_rel,
                c.max_rel_time,
                100.0 * r.tolerance,
                r.verification.norm_deviation
            );
            if let Some(t) = c.first_violation {
                println!("first violation at t = {t:.4e} s");
            }
            println!("{}", r.path.display());
            Ok(if c.pass { 0 } else { 1 })
        }
        Command::DumpCouplings { config } => {
            let rc = config::load(&config)?;
            mptrap_cli::dump_couplings(&rc, &mut std::io::stdout().lock())?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code)
        }
    }
}
