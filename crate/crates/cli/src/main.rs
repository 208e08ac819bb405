use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ssfilter_cli::config::{parse_artifacts, parse_betti_inline};
use ssfilter_cli::render::render;
use ssfilter_cli::{
    check, engine_options, explain, run, CheckOptions, CliError, FamilyName, Format, JobReport, PartialConfig,
};

#[derive(Parser)]
#[command(name = "ssfilter", version, about = "Exact spectral-sequence calculator for filtered families of spaces")]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Subcommand)]
enum Verb {
    /// Compute pages, Betti tables and per-instance checks for one family.
    Compute(JobArgs),
    /// Run the structural checks over the builtin instance matrix.
    Check(CheckArgs),
    /// Print a family's differential template and conventions.
    Explain(JobArgs),
}

#[derive(Args)]
struct JobArgs {
    /// Flat key = value configuration file; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_parser = |s: &str| s.parse::<FamilyName>())]
    family: Option<FamilyName>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, short = 'g', alias = "g")]
    genus: Option<usize>,
    #[arg(long)]
    r: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    /// Betti table for uconf-general as degree:rank pairs, e.g. 0:1,2:1.
    #[arg(long, value_parser = parse_betti_inline)]
    betti: Option<ssfilter_core::GradedDims>,
    /// compact-support or ordinary (uconf-general).
    #[arg(long)]
    convention: Option<String>,
    #[arg(long, value_parser = |s: &str| s.parse::<Format>())]
    format: Option<Format>,
    /// Comma-separated subset of e1, e2, betti, checks.
    #[arg(long)]
    artifacts: Option<String>,
    /// Include basis labels in page output.
    #[arg(long)]
    labels: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CheckArgs {
    #[arg(long, default_value_t = 10)]
    pmax: usize,
    /// `all` or a comma-separated list of family names.
    #[arg(long, default_value = "all")]
    families: String,
    /// Largest n in the instance matrix.
    #[arg(long, default_value_t = 10)]
    nmax: usize,
    #[arg(long, value_parser = |s: &str| s.parse::<Format>())]
    format: Option<Format>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Corrupts the differential leaving cell P,Q (self-test of the checks).
    #[arg(long, hide = true, value_parser = parse_cell)]
    inject_fault: Option<(usize, usize)>,
}

fn parse_cell(s: &str) -> Result<(usize, usize), String> {
    let (p, q) = s.split_once(',').ok_or("expected P,Q")?;
    Ok((p.trim().parse().map_err(|_| "bad P")?, q.trim().parse().map_err(|_| "bad Q")?))
}

impl JobArgs {
    fn merged(&self) -> Result<PartialConfig, CliError> {
        let file = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
                PartialConfig::parse(&text)?
            }
            None => PartialConfig::default(),
        };
        let convention = match self.convention.as_deref() {
            None => None,
            Some(c) => Some(PartialConfig::parse(&format!("convention = {c}"))?.convention.expect("parsed")),
        };
        let flags = PartialConfig {
            family: self.family,
            n: self.n,
            g: self.genus,
            r: self.r,
            m: self.m,
            betti: self.betti.clone(),
            convention,
            format: self.format,
            artifacts: self.artifacts.as_deref().map(parse_artifacts).transpose().map_err(CliError::Config)?,
            labels: self.labels.then_some(true),
            out: self.out.as_ref().map(|p| p.display().to_string()),
        };
        Ok(file.overridden_by(flags))
    }
}

fn parse_families(s: &str) -> Result<Vec<FamilyName>, CliError> {
    if s == "all" {
        return Ok(FamilyName::ALL.to_vec());
    }
    let mut out = s
        .split(',')
        .map(|t| t.trim().parse::<FamilyName>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(CliError::Config)?;
    out.sort();
    out.dedup();
    Ok(out)
}

fn emit(report: &JobReport, format: Format, out: Option<&str>) -> Result<(), CliError> {
    let body = render(report, format)?;
    match out {
        Some(path) => std::fs::write(path, body).map_err(|e| CliError::Config(format!("cannot write {path}: {e}"))),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn execute(cli: Cli) -> Result<i32, CliError> {
    let threads = std::env::var("SSFILTER_THREADS").ok();
    let opts = engine_options(threads.as_deref())?;
    match cli.verb {
        Verb::Compute(args) => {
            let cfg = args.merged()?.finish()?;
            let report = run(&cfg, &opts)?;
            emit(&report, cfg.format, cfg.out.as_deref())?;
            Ok(if report.all_checks_pass() { 0 } else { 4 })
        }
        Verb::Explain(args) => {
            let merged = args.merged()?;
            let format = merged.format.unwrap_or_default();
            let out = merged.out.clone();
            let cfg = merged.finish()?;
            emit(&explain(&cfg.params, cfg.n)?, format, out.as_deref())?;
            Ok(0)
        }
        Verb::Check(args) => {
            let o = CheckOptions {
                p_max: args.pmax,
                families: parse_families(&args.families)?,
                n_max: args.nmax,
                fault: args.inject_fault,
            };
            let report = check(&o, &opts);
            let out = args.out.as_ref().map(|p| p.display().to_string());
            emit(&report, args.format.unwrap_or_default(), out.as_deref())?;
            Ok(if report.all_checks_pass() { 0 } else { 4 })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("ssfilter: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
