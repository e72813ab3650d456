use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{error::ErrorKind, Args, Parser, Subcommand};
use holder_gain::report::{run_analysis, ConfigFile, DomainSpec, Stage};
use holder_gain::slice::GeometricSweep;

#[derive(Parser)]
#[command(name = "holder-gain", version, about = "Certify the 1/eta Holder-gain bound for a model domain in C^3")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Full pipeline; writes the JSON report.
    Analyze(Common),
    /// Special coordinates only.
    Normalize(Common),
    /// Special coordinates, Newton diagram and plurisubharmonicity checks.
    Diagram(Common),
    /// Everything up to the slice scaling fits.
    Slice(Common),
    /// Full pipeline; prints one PASS/FAIL line per check.
    Verify(Common),
}

#[derive(Args)]
struct Common {
    /// Defining function file (.poly).
    #[arg(long, value_name = "FILE")]
    domain: Option<PathBuf>,
    /// Curve file (.curve); defaults to the z1 axis.
    #[arg(long, value_name = "FILE")]
    curve: Option<PathBuf>,
    /// Contact order; inferred from the curve when omitted.
    #[arg(long, value_name = "N")]
    eta: Option<u32>,
    /// Delta sweep `start:end:count`.
    #[arg(long, value_name = "GEOMETRIC_SPEC")]
    deltas: Option<GeometricSweep>,
    #[arg(long, value_name = "N")]
    samples: Option<usize>,
    #[arg(long, value_name = "N")]
    seed: Option<u64>,
    /// Report path; stdout when omitted.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    /// `key = value` config file; flags override it.
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
}

fn read(path: &Path) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn build_spec(c: &Common) -> Result<DomainSpec, String> {
    let mut cfg = match &c.config {
        Some(path) => {
            let base = path.parent().unwrap_or(Path::new("."));
            ConfigFile::parse(&read(path)?, base).map_err(|e| format!("{}: {e}", path.display()))?
        }
        None => ConfigFile::default(),
    };
    let domain = c.domain.clone().or(cfg.domain.take()).ok_or("no domain: pass --domain or set `domain` in --config")?;
    let curve = c.curve.clone().or(cfg.curve.take());
    let eta = c.eta.or(cfg.eta);
    let mut options = cfg.options;
    if let Some(d) = c.deltas {
        options.deltas = d;
    }
    if let Some(n) = c.samples {
        options.samples = n;
    }
    if let Some(s) = c.seed {
        options.seed = s;
    }
    let domain_text = read(&domain)?;
    let curve_text = curve.as_deref().map(read).transpose()?;
    DomainSpec::from_sources(&domain_text, curve_text.as_deref(), eta, options)
        .map_err(|e| format!("{}: {e}", domain.display()))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => e.exit(),
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    let (common, stage, verify) = match &cli.command {
        Command::Analyze(c) => (c, Stage::Full, false),
        Command::Normalize(c) => (c, Stage::Normalize, false),
        Command::Diagram(c) => (c, Stage::Diagram, false),
        Command::Slice(c) => (c, Stage::Slice, false),
        Command::Verify(c) => (c, Stage::Full, true),
    };
    let spec = match build_spec(common) {
        Ok(spec) => spec,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let report = run_analysis(&spec, stage);
    let text = report.to_json_string();
    match &common.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                eprintln!("error: {}: {e}", path.display());
                return ExitCode::from(1);
            }
        }
        None if !verify => print!("{text}"),
        None => {}
    }
    if verify {
        for (check, ok) in &report.verdicts {
            println!("{} {check}", if *ok { "PASS" } else { "FAIL" });
        }
        if let Some(bound) = report.bound() {
            println!("bound eps <= {bound}");
        }
    }
    if let Some((stage, message)) = &report.error {
        eprintln!("{stage}: {message}");
    }
    if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    }
}
