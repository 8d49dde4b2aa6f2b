use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use erfkit::cli::{
    cmd_apps, cmd_eval, cmd_gen, cmd_sweep, cmd_table, ApproximantDescriptor, AppsCommand, Family, TransitionSpec,
};
use erfkit::Error;

#[derive(Parser)]
#[command(name = "erfkit", version, about = "Closed-form error function approximants with exact coefficients")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct ApproxArgs {
    /// spline | subinterval | grid | sqrt | taylor | series | gauss_g | gauss_h
    #[arg(long, default_value = "spline")]
    family: String,
    #[arg(long, default_value_t = 4)]
    order: usize,
    /// number of equal sub-intervals (subinterval family)
    #[arg(long)]
    subintervals: Option<usize>,
    /// grid resolution p/q (grid family)
    #[arg(long)]
    resolution: Option<String>,
    /// tail terms (series family)
    #[arg(long)]
    terms: Option<usize>,
    /// auto, or a transition point to the constant 1
    #[arg(long)]
    transition: Option<String>,
    #[arg(long, default_value_t = 34)]
    digits: u32,
}

impl ApproxArgs {
    fn descriptor(&self) -> erfkit::Result<ApproximantDescriptor> {
        let d = ApproximantDescriptor {
            family: Family::parse(&self.family)?,
            order: self.order,
            subintervals: self.subintervals,
            resolution: self.resolution.clone(),
            terms: self.terms,
            transition: self.transition.as_deref().map(TransitionSpec::parse).transpose()?,
            digits: self.digits,
        };
        d.validate()?;
        Ok(d)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum App {
    Power,
    Harmonics,
    Filter,
}

#[derive(Subcommand)]
enum Command {
    /// JSON document of a closed form
    Gen {
        #[command(flatten)]
        approx: ApproxArgs,
        #[arg(long)]
        out: Option<String>,
    },
    /// Value at one point
    Eval {
        #[command(flatten)]
        approx: ApproxArgs,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
    },
    /// Relative error on a uniform grid, as CSV
    Sweep {
        #[command(flatten)]
        approx: ApproxArgs,
        /// a:b, sampled at a + i (b - a)/N for i = 1..N
        #[arg(long, default_value = "0:5")]
        interval: String,
        #[arg(long, default_value_t = 1000)]
        points: usize,
        #[arg(long)]
        out: Option<String>,
    },
    /// Recompute a published table (3-10) against the printed values
    Table {
        id: u32,
        #[arg(long)]
        out: Option<String>,
    },
    /// Distortion and filtering applications, as CSV
    Apps {
        #[arg(value_enum)]
        app: App,
        /// largest amplitude (power, harmonics)
        #[arg(long, default_value = "3")]
        a_max: String,
        #[arg(long, default_value = "0.01")]
        step: String,
        /// also integrate erf^2 numerically (power)
        #[arg(long)]
        oracle: bool,
        #[arg(long, default_value = "0.5")]
        gamma: String,
        #[arg(long, default_value = "1")]
        f_p: String,
        #[arg(long, default_value = "3")]
        t_max: String,
        #[arg(long, default_value_t = 600)]
        points: usize,
        /// approximant for the filter output; default spline order 12 with auto transition
        #[command(flatten)]
        approx: ApproxArgs,
        #[arg(long)]
        out: Option<String>,
    },
}

fn sink(out: &Option<String>) -> erfkit::Result<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn run(cli: Cli) -> erfkit::Result<bool> {
    match cli.command {
        Command::Gen { approx, out } => {
            let mut w = sink(&out)?;
            cmd_gen(&approx.descriptor()?, &mut w)?;
            w.flush()?;
        }
        Command::Eval { approx, x } => {
            let mut w = sink(&None)?;
            cmd_eval(&approx.descriptor()?, &x, &mut w)?;
            w.flush()?;
        }
        Command::Sweep { approx, interval, points, out } => {
            let mut w = sink(&out)?;
            let s = cmd_sweep(&approx.descriptor()?, &interval, points, &mut w)?;
            w.flush()?;
            eprintln!(
                "re_B = {} at x = {}{}",
                s.re_b,
                s.argmax,
                s.x_o.map(|x| format!(", x_o = {x}")).unwrap_or_default()
            );
        }
        Command::Table { id, out } => {
            let mut w = sink(&out)?;
            let report = cmd_table(id, &mut w)?;
            w.flush()?;
            let failed = report.rows.iter().filter(|r| !r.passed).count();
            eprintln!("table {}: {} rows, {} outside tolerance", report.id, report.rows.len(), failed);
            return Ok(failed == 0);
        }
        Command::Apps { app, a_max, step, oracle, gamma, f_p, t_max, points, approx, out } => {
            let cmd = match app {
                App::Power => AppsCommand::Power { a_max, step, oracle },
                App::Harmonics => AppsCommand::Harmonics { a_max, step },
                App::Filter => {
                    let mut d = approx.descriptor()?;
                    if approx.family == "spline" && approx.order == 4 && approx.transition.is_none() {
                        d.order = 12;
                        d.transition = Some(TransitionSpec::Auto);
                    }
                    AppsCommand::Filter { gamma, f_p, t_max, points, approx: d }
                }
            };
            let mut w = sink(&out)?;
            cmd_apps(&cmd, approx.digits, &mut w)?;
            w.flush()?;
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e @ Error::Usage(_)) | Err(e @ Error::Domain(_)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
    }
}
