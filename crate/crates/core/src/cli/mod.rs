//! Command-line front end: `dirac-time <command> [--config FILE] [--out FILE] [overrides]`.
//!
//! Exit status: 0 on success, 2 on usage, config or validation errors, 1 on
//! runtime failures (including failed invariants in `check`).

pub mod check;
pub mod commands;
pub mod config;
pub mod csv;

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub use commands::Output;
pub use config::{parse_config, Entry, Origin, RunConfig};
pub use csv::{format_number, Cell, CsvTable};

use crate::error::{Error, Result};

#[derive(Parser, Debug)]
#[command(name = "dirac-time", version, about = "Dynamical time operator of the Dirac particle: analyses and checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Eigen-system of T at r along z
    Eigen(Common),
    /// Free (or uniform-A) evolution time series
    Evolve(Common),
    /// Time-energy uncertainty product and bounds
    Uncertainty(Common),
    /// Group and phase velocity from a trajectory
    Velocities(Common),
    /// Nonrelativistic / ultrarelativistic expansion of <T>(t)
    Limits(Common),
    /// Momentum displacement generated by exp(i eps T)
    Shift(Common),
    /// Zitterbewegung frequency and amplitude
    Zbw(Common),
    /// Instantaneous d<T>/dt with electromagnetic coupling
    Emrate(Common),
    /// Seeded invariant battery
    Check(Common),
}

#[derive(Args, Debug, Default)]
struct Common {
    /// Config file (sectioned key = value)
    #[arg(long)]
    config: Option<PathBuf>,
    /// Write the CSV here instead of standard output
    #[arg(long)]
    out: Option<PathBuf>,
    /// [eigen] r
    #[arg(long, allow_hyphen_values = true)]
    r: Option<String>,
    /// [model] tau0
    #[arg(long, allow_hyphen_values = true)]
    tau0: Option<String>,
    /// [model] m0 (rest energy m0 c^2)
    #[arg(long, allow_hyphen_values = true)]
    m0: Option<String>,
    /// [packet] p_center as x,y,z
    #[arg(long, allow_hyphen_values = true)]
    p: Option<String>,
    /// [packet] sigma_p, scalar or x,y,z
    #[arg(long)]
    sigma: Option<String>,
    /// [packet] branch: plus, minus or mixed
    #[arg(long)]
    branch: Option<String>,
    /// [grid] n, scalar or nx,ny,nz
    #[arg(long)]
    n: Option<String>,
    /// [grid] p_max, scalar or x,y,z
    #[arg(long = "p-max")]
    p_max: Option<String>,
    /// [schedule] t_end
    #[arg(long = "t-end", allow_hyphen_values = true)]
    t_end: Option<String>,
    /// [schedule] samples
    #[arg(long)]
    samples: Option<String>,
    /// [shift] epsilon
    #[arg(long, allow_hyphen_values = true)]
    epsilon: Option<String>,
    /// [limits] regime: nonrel or ultrarel
    #[arg(long)]
    regime: Option<String>,
    /// [check] seed
    #[arg(long)]
    seed: Option<String>,
    /// Any setting as section.key=value (repeatable)
    #[arg(long = "set", value_name = "SECTION.KEY=VALUE")]
    set: Vec<String>,
}

impl Common {
    fn overrides(&self) -> Result<Vec<(String, String, String, String)>> {
        let mut out = Vec::new();
        let flags: [(&str, &str, &str, &Option<String>); 13] = [
            ("--r", "eigen", "r", &self.r),
            ("--tau0", "model", "tau0", &self.tau0),
            ("--m0", "model", "m0", &self.m0),
            ("--p", "packet", "p_center", &self.p),
            ("--sigma", "packet", "sigma_p", &self.sigma),
            ("--branch", "packet", "branch", &self.branch),
            ("--n", "grid", "n", &self.n),
            ("--p-max", "grid", "p_max", &self.p_max),
            ("--t-end", "schedule", "t_end", &self.t_end),
            ("--samples", "schedule", "samples", &self.samples),
            ("--epsilon", "shift", "epsilon", &self.epsilon),
            ("--regime", "limits", "regime", &self.regime),
            ("--seed", "check", "seed", &self.seed),
        ];
        for (flag, sec, key, v) in flags {
            if let Some(v) = v {
                out.push((flag.to_string(), sec.to_string(), key.to_string(), v.clone()));
            }
        }
        for s in &self.set {
            let (path, value) = s
                .split_once('=')
                .ok_or_else(|| Error::validation(format!("--set {s}: expected section.key=value")))?;
            let (sec, key) = path
                .split_once('.')
                .ok_or_else(|| Error::validation(format!("--set {s}: expected section.key=value")))?;
            out.push((format!("--set {s}"), sec.trim().into(), key.trim().into(), value.trim().into()));
        }
        Ok(out)
    }

    fn config(&self) -> Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Error::validation(format!("cannot read config {}: {e}", path.display())))?;
                RunConfig::from_text(&text)?
            }
            None => RunConfig::default(),
        };
        for (flag, sec, key, value) in self.overrides()? {
            cfg.set(&sec, &key, &value, &Origin::Flag(flag))?;
        }
        Ok(cfg)
    }
}

fn execute(command: &Command) -> Result<(Output, &Common, bool)> {
    let (common, f, is_check): (&Common, fn(&RunConfig) -> Result<Output>, bool) = match command {
        Command::Eigen(c) => (c, commands::eigen, false),
        Command::Evolve(c) => (c, commands::evolve, false),
        Command::Uncertainty(c) => (c, commands::uncertainty, false),
        Command::Velocities(c) => (c, commands::velocities, false),
        Command::Limits(c) => (c, commands::limits, false),
        Command::Shift(c) => (c, commands::shift, false),
        Command::Zbw(c) => (c, commands::zbw, false),
        Command::Emrate(c) => (c, commands::emrate, false),
        Command::Check(c) => (c, check::check, true),
    };
    let cfg = common.config()?;
    Ok((f(&cfg)?, common, is_check))
}

fn emit(out: &Output, common: &Common, is_check: bool) -> Result<()> {
    let stdout = std::io::stdout();
    let mut so = stdout.lock();
    let csv = out.table.render();
    match &common.out {
        Some(path) => {
            std::fs::write(path, csv)?;
            for line in &out.report {
                writeln!(so, "{line}")?;
            }
        }
        None if is_check => {
            for line in &out.report {
                writeln!(so, "{line}")?;
            }
        }
        None => {
            so.write_all(csv.as_bytes())?;
            let mut se = std::io::stderr().lock();
            for line in &out.report {
                writeln!(se, "{line}")?;
            }
        }
    }
    Ok(())
}

/// Runs the command line `argv` (including the program name) and returns
/// the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli.command).and_then(|(out, common, is_check)| {
        emit(&out, common, is_check)?;
        Ok(out.failed)
    }) {
        Ok(false) => 0,
        Ok(true) => 1,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
