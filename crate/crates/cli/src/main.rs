use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use zetaforge_cli::commands::{self, CurveArgs, EXIT_USAGE};
use zetaforge_cli::config::{ConfigError, Curve, Format, Overrides, RunConfig, PARALLELISM_ENV};
use zetaforge_cli::suites::Suite;

#[derive(Debug, Parser)]
#[command(name = "zetaforge", version, about = "Exact zetas of elliptic curves and their verification suites")]
struct Cli {
    /// TOML file with the same keys as the flags.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Worker threads; overrides the environment and the config file.
    #[arg(long, global = true)]
    parallelism: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct CurveFlags {
    /// Keep q and N as variables.
    #[arg(long)]
    symbolic: bool,
    #[arg(long)]
    q: Option<u64>,
    /// Number of rational points.
    #[arg(long = "N")]
    n: Option<u64>,
    #[arg(long)]
    genus: Option<u32>,
    /// Zeta numerator P(t), e.g. "1+2*t+3*t^2+6*t^3+9*t^4".
    #[arg(long)]
    numerator: Option<String>,
}

impl From<&CurveFlags> for CurveArgs {
    fn from(f: &CurveFlags) -> CurveArgs {
        CurveArgs {
            symbolic: f.symbolic,
            q: f.q,
            n: f.n,
            genus: f.genus,
            numerator: f.numerator.clone(),
        }
    }
}

#[derive(Debug, Args, Default)]
struct Bounds {
    #[arg(long)]
    max_rank: Option<u32>,
    #[arg(long)]
    max_q: Option<u64>,
    /// Bound for the unipotent identities.
    #[arg(long)]
    max_n: Option<u32>,
    /// Group ranks for the period match, e.g. 2,3.
    #[arg(long, value_delimiter = ',')]
    n: Option<Vec<usize>>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args, Default)]
struct ZeroFlags {
    /// Curve y^2 = x^3 + ax + b as a,b.
    #[arg(long, conflicts_with = "ap_table", allow_hyphen_values = true)]
    curve: Option<Curve>,
    /// CSV with header p,ap.
    #[arg(long)]
    ap_table: Option<PathBuf>,
    #[arg(long)]
    primes_up_to: Option<u64>,
    #[arg(long, value_delimiter = ',')]
    ranks: Option<Vec<u32>>,
    #[arg(long)]
    bins: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Mass β_r(d) of semistable bundles.
    Beta {
        #[arg(long)]
        rank: u32,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        degree: i64,
        #[command(flatten)]
        curve: CurveFlags,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Mass α_r of bundles with trivial part.
    Alpha {
        #[arg(long)]
        rank: u32,
        #[command(flatten)]
        curve: CurveFlags,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Runs one verification suite, printing records as JSON lines.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        #[command(flatten)]
        bounds: Bounds,
    },
    /// Zero angles of a curve family or an a_p table.
    Zeros {
        #[command(flatten)]
        zeros: ZeroFlags,
        /// Output directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Runs every suite and prints one replication report.
    Report {
        #[command(flatten)]
        bounds: Bounds,
        #[command(flatten)]
        zeros: ZeroFlags,
    },
}

fn overrides(parallelism: Option<usize>, bounds: Option<&Bounds>, zeros: Option<&ZeroFlags>) -> Overrides {
    let b = bounds.map(|b| (b.max_rank, b.max_q, b.max_n, b.n.clone(), b.format, b.out.clone()));
    let (max_rank, max_q, max_n, n, format, out) = b.unwrap_or_default();
    Overrides {
        max_rank,
        max_q,
        max_n,
        n,
        format,
        out,
        curve: zeros.and_then(|z| z.curve),
        primes_up_to: zeros.and_then(|z| z.primes_up_to),
        ranks: zeros.and_then(|z| z.ranks.clone()),
        bins: zeros.and_then(|z| z.bins),
        parallelism,
    }
}

fn run(cli: Cli) -> Result<i32, ConfigError> {
    let env = std::env::var(PARALLELISM_ENV).ok();
    let flags = match &cli.command {
        Command::Verify { bounds, .. } => overrides(cli.parallelism, Some(bounds), None),
        Command::Report { bounds, zeros } => overrides(cli.parallelism, Some(bounds), Some(zeros)),
        Command::Zeros { zeros, out } => {
            let mut o = overrides(cli.parallelism, None, Some(zeros));
            o.out = out.clone();
            o
        }
        _ => overrides(cli.parallelism, None, None),
    };
    let cfg = RunConfig::resolve(cli.config.as_deref(), env.as_deref(), &flags)?;
    if let Some(n) = cfg.parallelism {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| ConfigError(format!("thread pool: {e}")))?;
    }
    let mut stdout = std::io::stdout().lock();
    match &cli.command {
        Command::Beta { rank, degree, curve, format } => {
            commands::cmd_beta(*rank, *degree, &curve.into(), *format, &mut stdout)
        }
        Command::Alpha { rank, curve, format } => commands::cmd_alpha(*rank, &curve.into(), *format, &mut stdout),
        Command::Verify { suite, .. } => {
            drop(stdout);
            commands::cmd_verify(*suite, &cfg)
        }
        Command::Zeros { zeros, .. } => commands::cmd_zeros(&cfg, zeros.ap_table.as_deref(), &mut stdout),
        Command::Report { .. } => {
            drop(stdout);
            commands::cmd_report(&cfg)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_USAGE as u8)
        }
    }
}
