use std::io;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use tailsum::config::{RawConfig, Settings};
use tailsum::error::{CliError, Result};
use tailsum::experiment::{self, Mode};
use tailsum::output::{self, Plot};

/// Second-order tail asymptotics for sums of dependent Pareto risks,
/// checked against Monte Carlo.
#[derive(Parser)]
#[command(name = "tailsum", version)]
struct Cli {
    /// Flat `key = value` file; command-line flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Default)]
struct ModelArgs {
    /// independence, gumbel, comonotone (gumbel-barnett in `check` only).
    #[arg(long)]
    family: Option<String>,
    #[arg(long)]
    phi: Option<f64>,
    #[arg(long)]
    sigma: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    scale: Option<f64>,
}

#[derive(Args, Default)]
struct McArgs {
    /// Monte Carlo sample size (at least 1000).
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Skip the simulation columns.
    #[arg(long)]
    no_mc: bool,
    /// Fail with exit code 3 when a regime boundary is hit instead of combining terms.
    #[arg(long)]
    strict_boundaries: bool,
}

#[derive(Args, Default)]
struct OutArgs {
    /// CSV output; standard output when absent.
    #[arg(long)]
    csv: Option<PathBuf>,
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Pr(X+Y > t) on a grid of thresholds.
    Tailprob {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        mc: McArgs,
        #[command(flatten)]
        out: OutArgs,
        /// Explicit thresholds, comma separated.
        #[arg(long, value_delimiter = ',')]
        t: Vec<f64>,
        /// Number of log-spaced thresholds when `--t` is absent.
        #[arg(long)]
        count: Option<usize>,
        #[arg(long)]
        tail_min: Option<f64>,
        #[arg(long)]
        tail_max: Option<f64>,
    },
    /// VaR_q(X+Y) on a grid of levels.
    Var {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        mc: McArgs,
        #[command(flatten)]
        out: OutArgs,
        #[arg(long, value_delimiter = ',')]
        q: Vec<f64>,
    },
    /// Numerical checks of the copula assumptions.
    Check {
        #[command(flatten)]
        model: ModelArgs,
        /// CSV of the convergence sequences.
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        tolerance: Option<f64>,
    },
    /// The four panels (alpha 0.8 and 2, tail probability and VaR) for one phi.
    ReproduceFigures {
        #[arg(long)]
        phi: f64,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        out_dir: Option<PathBuf>,
        #[arg(long)]
        strict_boundaries: bool,
    },
}

fn join(v: &[f64]) -> String {
    v.iter().map(f64::to_string).collect::<Vec<_>>().join(",")
}

impl ModelArgs {
    fn apply(&self, raw: &mut RawConfig) {
        if let Some(v) = &self.family {
            raw.set("copula.family", v);
        }
        for (key, v) in [
            ("copula.phi", self.phi),
            ("copula.sigma", self.sigma),
            ("marginal.alpha", self.alpha),
            ("marginal.scale", self.scale),
        ] {
            if let Some(v) = v {
                raw.set(key, v);
            }
        }
    }
}

impl McArgs {
    fn apply(&self, raw: &mut RawConfig) {
        if let Some(n) = self.n {
            raw.set("mc.n", n);
        }
        if let Some(s) = self.seed {
            raw.set("mc.seed", s);
        }
        if self.no_mc {
            raw.set("mc.enabled", "false");
        }
        if self.strict_boundaries {
            raw.set("var.boundary", "reject");
        }
    }
}

impl OutArgs {
    fn apply(&self, raw: &mut RawConfig) {
        if let Some(p) = &self.csv {
            raw.set("out.csv", p.display());
        }
        if let Some(p) = &self.svg {
            raw.set("out.svg", p.display());
        }
    }
}

fn init_threads() -> Result<()> {
    let Ok(v) = std::env::var("TAILSUM_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Config(format!("TAILSUM_THREADS must be a positive integer, got {v:?}")))?;
    #[cfg(feature = "parallel")]
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Config(format!("thread pool: {e}")))?;
    #[cfg(not(feature = "parallel"))]
    let _ = n;
    Ok(())
}

fn emit_rows(s: &Settings, mode: Mode, rows: &[experiment::ResultRow]) -> Result<()> {
    match &s.csv {
        Some(p) => output::write_rows_csv(p, rows)?,
        None => output::rows_to_csv(io::stdout().lock(), rows)
            .map_err(|e| CliError::Io { path: "<stdout>".into(), source: e.into() })?,
    }
    if let Some(p) = &s.svg {
        let title = match s.copula() {
            Ok(c) => format!("{}, alpha = {}", c.name(), s.alpha.unwrap_or(f64::NAN)),
            Err(_) => String::new(),
        };
        output::write_svg(p, &Plot::for_mode(mode, &title), rows)?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    init_threads()?;
    let file = match &cli.config {
        Some(p) => RawConfig::load(p)?,
        None => RawConfig::default(),
    };
    let mut flags = RawConfig::default();
    match &cli.command {
        Command::Tailprob { model, mc, out, t, count, tail_min, tail_max } => {
            model.apply(&mut flags);
            mc.apply(&mut flags);
            out.apply(&mut flags);
            if !t.is_empty() {
                flags.set("grid.t", join(t));
            }
            for (key, v) in [("grid.tail_min", *tail_min), ("grid.tail_max", *tail_max)] {
                if let Some(v) = v {
                    flags.set(key, v);
                }
            }
            if let Some(c) = count {
                flags.set("grid.count", c);
            }
            let s = Settings::resolve(&file.merge(flags))?;
            let rows = experiment::run_tailprob(&s)?;
            emit_rows(&s, Mode::TailProb, &rows)
        }
        Command::Var { model, mc, out, q } => {
            model.apply(&mut flags);
            mc.apply(&mut flags);
            out.apply(&mut flags);
            if !q.is_empty() {
                flags.set("grid.q", join(q));
            }
            let s = Settings::resolve(&file.merge(flags))?;
            let rows = experiment::run_var(&s)?;
            emit_rows(&s, Mode::Var, &rows)
        }
        Command::Check { model, csv, tolerance } => {
            model.apply(&mut flags);
            if let Some(p) = csv {
                flags.set("out.csv", p.display());
            }
            if let Some(t) = tolerance {
                flags.set("check.tolerance", t);
            }
            let s = Settings::resolve(&file.merge(flags))?;
            let report = experiment::run_check(&s)?;
            print!("{}", output::check_to_text(&report));
            if let Some(p) = &s.csv {
                output::write_check_csv(p, &report)?;
            }
            if experiment::report_failed(&report) {
                return Err(CliError::CheckFailed("at least one check failed".into()));
            }
            Ok(())
        }
        Command::ReproduceFigures { phi, seed, n, out_dir, strict_boundaries } => {
            flags.set("copula.family", "gumbel");
            flags.set("copula.phi", phi);
            if let Some(s) = seed {
                flags.set("mc.seed", s);
            }
            if let Some(n) = n {
                flags.set("mc.n", n);
            }
            if let Some(d) = out_dir {
                flags.set("out.dir", d.display());
            }
            if *strict_boundaries {
                flags.set("var.boundary", "reject");
            }
            let s = Settings::resolve(&file.merge(flags))?;
            for p in experiment::reproduce_figures(&s, *phi, &s.out_dir)? {
                println!("{}", p.display());
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("tailsum: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
