//! `giant`: giant-component fractions, extremal bounds, table and figure
//! data, and Monte Carlo checks for configuration-model random graphs.

mod config;

use std::fmt;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use giant_core::report::{self, Figure};
use giant_core::{
    bounds_report, giant_component, lower_bound_thm_a, max_gap_search, monte_carlo,
    upper_bound_thm_b, DegreePmf, GridConfig, Prefix,
};
use serde::Serialize;

use config::{pick, Format, RunConfig};

#[derive(Debug, Parser)]
#[command(
    name = "giant",
    version,
    about = "Giant-component size of configuration-model graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write data here instead of stdout (a directory for `maxgap`).
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Worker threads for parallel commands.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// JSON run configuration; flags override its fields.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Report errors on stderr as a JSON object.
    #[arg(long, global = true)]
    error_json: bool,
}

#[derive(Debug, Args, Default)]
struct PmfArgs {
    /// Inline degree distribution, e.g. "1:0.5,3:0.5".
    #[arg(long, conflicts_with = "pmf_file")]
    pmf: Option<String>,
    /// Text file with one "degree<TAB>probability" pair per line.
    #[arg(long)]
    pmf_file: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Mean, critical parameter, extinction probability and giant fraction.
    Solve(PmfArgs),
    /// Lower and upper bounds for a fixed prefix and mean.
    Bounds {
        /// p_1, ..., p_L, comma separated.
        #[arg(long, value_delimiter = ',')]
        prefix: Option<Vec<f64>>,
        #[arg(long)]
        mu: Option<f64>,
    },
    /// The six reference rows of bounds.
    Table1,
    /// Grid search for the largest gap between the bounds.
    Maxgap {
        #[arg(long, value_delimiter = ',')]
        lengths: Option<Vec<usize>>,
        #[arg(long)]
        mu_lo: Option<f64>,
        #[arg(long)]
        mu_hi: Option<f64>,
        #[arg(long)]
        mu_step: Option<f64>,
        #[arg(long)]
        prefix_step: Option<f64>,
    },
    /// Family sweeps behind a figure: 1a, 1b, 2a or 2b.
    Figures { which: Figure },
    /// Monte Carlo estimate of the largest-component fraction.
    Simulate {
        #[command(flatten)]
        pmf: PmfArgs,
        /// Number of vertices.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        reps: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
    },
}

#[derive(Debug)]
pub enum CliError {
    Core(giant_core::Error),
    Usage(String),
    Io(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Usage(m) | CliError::Io(m) => f.write_str(m),
        }
    }
}

impl From<giant_core::Error> for CliError {
    fn from(e: giant_core::Error) -> Self {
        CliError::Core(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(giant_core::Error::NoConvergence { .. }) => 3,
            CliError::Core(e) if e.is_validation() => 2,
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Core(e) => e.kind(),
            CliError::Usage(_) => "Usage",
            CliError::Io(_) => "Io",
        }
    }
}

#[derive(Serialize)]
struct ErrorReport<'a> {
    error: &'a str,
    message: String,
    exit_code: u8,
}

struct Ctx {
    file: RunConfig,
    output: Option<PathBuf>,
    format: Format,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let error_json = cli.error_json;
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let code = e.exit_code();
            if error_json {
                let report = ErrorReport {
                    error: e.kind(),
                    message: e.to_string(),
                    exit_code: code,
                };
                eprintln!("{}", serde_json::to_string(&report).expect("plain struct"));
            } else {
                eprintln!("error: {e}");
            }
            ExitCode::from(code)
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let file = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    let threads = pick(cli.threads, file.threads);
    let ctx = Ctx {
        output: pick(cli.output, file.output.clone()),
        format: pick(cli.format, file.format).unwrap_or(Format::Csv),
        file,
    };
    match threads {
        Some(0) => Err(CliError::Usage("--threads must be at least 1".into())),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::Io(e.to_string()))?
            .install(|| dispatch(&ctx, cli.command)),
        None => dispatch(&ctx, cli.command),
    }
}

fn dispatch(ctx: &Ctx, command: Command) -> Result<(), CliError> {
    match command {
        Command::Solve(pmf) => cmd_solve(ctx, &pmf),
        Command::Bounds { prefix, mu } => cmd_bounds(ctx, prefix, mu),
        Command::Table1 => cmd_table1(ctx),
        Command::Maxgap {
            lengths,
            mu_lo,
            mu_hi,
            mu_step,
            prefix_step,
        } => {
            let f = &ctx.file;
            let d = GridConfig::default();
            let config = GridConfig {
                lengths: pick(lengths, f.lengths.clone()).unwrap_or(d.lengths),
                mu_lo: pick(mu_lo, f.mu_lo).unwrap_or(d.mu_lo),
                mu_hi: pick(mu_hi, f.mu_hi).unwrap_or(d.mu_hi),
                mu_step: pick(mu_step, f.mu_step).unwrap_or(d.mu_step),
                prefix_step: pick(prefix_step, f.prefix_step).unwrap_or(d.prefix_step),
            };
            cmd_maxgap(ctx, &config)
        }
        Command::Figures { which } => cmd_figures(ctx, which),
        Command::Simulate { pmf, n, reps, seed } => cmd_simulate(ctx, &pmf, n, reps, seed),
    }
}

fn load_pmf(ctx: &Ctx, args: &PmfArgs) -> Result<DegreePmf, CliError> {
    // A source given on the command line replaces both config sources.
    let (inline, path) = if args.pmf.is_some() || args.pmf_file.is_some() {
        (args.pmf.clone(), args.pmf_file.clone())
    } else {
        (ctx.file.pmf.clone(), ctx.file.pmf_file.clone())
    };
    match (inline, path) {
        (Some(spec), None) => Ok(DegreePmf::parse_inline(&spec)?),
        (None, Some(path)) => {
            let text = fs::read_to_string(&path)
                .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            Ok(DegreePmf::parse_text(&text)?)
        }
        (Some(_), Some(_)) => Err(CliError::Usage(
            "give exactly one of pmf and pmf_file".into(),
        )),
        (None, None) => Err(CliError::Usage(
            "a degree distribution is required (--pmf or --pmf-file)".into(),
        )),
    }
}

fn emit(ctx: &Ctx, bytes: &[u8]) -> Result<(), CliError> {
    match &ctx.output {
        Some(path) => write_file(path, bytes),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(bytes)?;
            out.flush()?;
            Ok(())
        }
    }
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    fs::write(path, bytes).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn json_bytes<T: Serialize>(value: &T) -> Result<Vec<u8>, CliError> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| CliError::Io(e.to_string()))?;
    s.push('\n');
    Ok(s.into_bytes())
}

fn csv_bytes(
    write: impl FnOnce(&mut Vec<u8>) -> giant_core::Result<()>,
) -> Result<Vec<u8>, CliError> {
    let mut buf = Vec::new();
    write(&mut buf)?;
    Ok(buf)
}

fn cmd_solve(ctx: &Ctx, args: &PmfArgs) -> Result<(), CliError> {
    let pmf = load_pmf(ctx, args)?;
    let g = giant_component(&pmf)?;
    if g.near_critical {
        eprintln!("warning: critical parameter within 1e-12 of 1; reporting xi = 0");
    }
    let bytes = match ctx.format {
        Format::Json => json_bytes(&g)?,
        Format::Csv => format!(
            "mu,nu,z_tilde,xi\n{:.6},{:.6},{:.6},{:.6}\n",
            g.mu, g.nu, g.z_tilde, g.xi
        )
        .into_bytes(),
    };
    emit(ctx, &bytes)
}

fn cmd_bounds(ctx: &Ctx, prefix: Option<Vec<f64>>, mu: Option<f64>) -> Result<(), CliError> {
    let probs = pick(prefix, ctx.file.prefix.clone())
        .ok_or_else(|| CliError::Usage("--prefix is required".into()))?;
    let mu = pick(mu, ctx.file.mu).ok_or_else(|| CliError::Usage("--mu is required".into()))?;
    let prefix = Prefix::new(probs)?;
    let report = bounds_report(&prefix, mu);
    if report.feasible && !report.conditions_hold() {
        eprintln!("warning: technical conditions fail; bounds are not guaranteed");
    }
    let bytes = match ctx.format {
        Format::Json => json_bytes(&report)?,
        Format::Csv => csv_bytes(|b| report::write_bounds_csv(b, std::slice::from_ref(&report)))?,
    };
    emit(ctx, &bytes)?;
    if report.feasible {
        return Ok(());
    }
    // The report carries the mean-free bound; still fail with the typed cause.
    Err(
        match upper_bound_thm_b(&prefix, mu).and(lower_bound_thm_a(&prefix, mu)) {
            Err(e) => e.into(),
            Ok(_) => CliError::Usage(report.reason.unwrap_or_default()),
        },
    )
}

fn cmd_table1(ctx: &Ctx) -> Result<(), CliError> {
    let rows = report::table1();
    let bytes = match ctx.format {
        Format::Json => json_bytes(&rows)?,
        Format::Csv => csv_bytes(|b| report::write_bounds_csv(b, &rows))?,
    };
    emit(ctx, &bytes)
}

fn cmd_maxgap(ctx: &Ctx, config: &GridConfig) -> Result<(), CliError> {
    let result = max_gap_search(config, true)?;
    match &ctx.output {
        Some(dir) => {
            fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
            write_file(&dir.join("maxgap.json"), &json_bytes(&result)?)?;
            write_file(
                &dir.join("table2.csv"),
                &csv_bytes(|b| report::write_table2_csv(b, &result))?,
            )?;
            write_file(
                &dir.join("figure3.csv"),
                &csv_bytes(|b| report::write_figure3_csv(b, &result))?,
            )
        }
        None => {
            let bytes = match ctx.format {
                Format::Json => json_bytes(&result)?,
                Format::Csv => csv_bytes(|b| report::write_table2_csv(b, &result))?,
            };
            emit(ctx, &bytes)
        }
    }
}

#[derive(Serialize)]
struct SeriesPoint {
    control: f64,
    xi: f64,
    nu: f64,
}

#[derive(Serialize)]
struct Series {
    series: String,
    points: Vec<SeriesPoint>,
}

fn cmd_figures(ctx: &Ctx, which: Figure) -> Result<(), CliError> {
    let data = report::figure_data(which)?;
    for (name, points) in &data {
        if points.is_empty() {
            eprintln!("warning: series {name} has no feasible member; emitted empty");
        }
    }
    let bytes = match ctx.format {
        Format::Csv => csv_bytes(|b| report::write_family_csv(b, &data))?,
        Format::Json => {
            let series: Vec<Series> = data
                .iter()
                .map(|(name, points)| Series {
                    series: name.clone(),
                    points: points
                        .iter()
                        .map(|p| SeriesPoint {
                            control: p.control,
                            xi: p.xi,
                            nu: p.nu,
                        })
                        .collect(),
                })
                .collect();
            json_bytes(&series)?
        }
    };
    emit(ctx, &bytes)
}

fn cmd_simulate(
    ctx: &Ctx,
    args: &PmfArgs,
    n: Option<usize>,
    reps: Option<usize>,
    seed: Option<u64>,
) -> Result<(), CliError> {
    let pmf = load_pmf(ctx, args)?;
    let f = &ctx.file;
    let n = pick(n, f.n).ok_or_else(|| CliError::Usage("--n is required".into()))?;
    let reps = pick(reps, f.reps).unwrap_or(1);
    let seed = pick(seed, f.seed).ok_or_else(|| CliError::Usage("--seed is required".into()))?;
    let result = monte_carlo(&pmf, n, reps, seed)?;
    let bytes = match ctx.format {
        Format::Json => json_bytes(&result)?,
        Format::Csv => csv_bytes(|b| result.write_replicas_csv(b))?,
    };
    emit(ctx, &bytes)
}
