//! Subcommand bodies. Each returns the process exit code or a usage error.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;
use zetaforge::algebra::{RationalFunction, Var};
use zetaforge::artin::CurveDatum;
use zetaforge::bundle::{beta, MassTable};
use zetaforge::pure_zeta::SymbolicMasses;
use zetaforge::zero_dist::{self, sig17, AngleHistogram, SweepOutput};

use crate::config::{ConfigError, Format, RunConfig, MAX_PRIME_BOUND, MAX_Q, MAX_SYMBOLIC_RANK};
use crate::record::{csv_rows, json_lines, text_table, Param, Report};
use crate::suites::{self, Suite};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MATH: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// A curve as given on the command line for `beta` and `alpha`.
#[derive(Debug, Clone, Default)]
pub struct CurveArgs {
    pub symbolic: bool,
    pub q: Option<u64>,
    pub n: Option<u64>,
    pub genus: Option<u32>,
    pub numerator: Option<String>,
}

fn usage(msg: impl Into<String>) -> ConfigError {
    ConfigError(msg.into())
}

impl CurveArgs {
    pub fn to_curve(&self) -> Result<CurveDatum, ConfigError> {
        if self.symbolic && self.q.is_some() {
            return Err(usage("--symbolic and --q are mutually exclusive"));
        }
        if let Some(q) = self.q {
            if q > MAX_Q {
                return Err(usage(format!("q = {q} exceeds the cap {MAX_Q}")));
            }
        }
        match (&self.numerator, self.genus) {
            (Some(num), Some(g)) => {
                if self.n.is_some() {
                    return Err(usage("--N applies to elliptic curves given without --numerator"));
                }
                let p: RationalFunction = num.parse().map_err(|e| usage(format!("--numerator: {e}")))?;
                let q = match (self.symbolic, self.q) {
                    (true, _) => RationalFunction::var(Var::Q),
                    (false, Some(q)) => RationalFunction::from_int(q as i64),
                    (false, None) => return Err(usage("give --symbolic or --q")),
                };
                CurveDatum::general(q, g, p).map_err(|e| usage(e.to_string()))
            }
            (Some(_), None) => Err(usage("--numerator needs --genus")),
            (None, Some(g)) if g != 1 => Err(usage("--genus other than 1 needs --numerator")),
            (None, _) => match (self.symbolic, self.q, self.n) {
                (true, None, None) => Ok(CurveDatum::symbolic_elliptic()),
                (true, _, Some(_)) => Err(usage("--symbolic and --N are mutually exclusive")),
                (false, Some(q), Some(n)) => CurveDatum::numeric_elliptic(q, n).map_err(|e| usage(e.to_string())),
                (false, Some(_), None) => Err(usage("--q needs --N for an elliptic curve")),
                _ => Err(usage("give --symbolic or --q with --N")),
            },
        }
    }
}

fn check_rank(rank: u32) -> Result<(), ConfigError> {
    if !(1..=MAX_SYMBOLIC_RANK).contains(&rank) {
        return Err(usage(format!("rank must lie in 1..={MAX_SYMBOLIC_RANK}, found {rank}")));
    }
    Ok(())
}

fn emit_value(out: &mut dyn Write, format: Format, fields: &[(&str, String)]) -> std::io::Result<()> {
    let value = &fields.last().expect("value field").1;
    match format {
        Format::Json => {
            let map: BTreeMap<&str, &String> = fields.iter().map(|(k, v)| (*k, v)).collect();
            writeln!(out, "{}", serde_json::to_string(&map).expect("map serializes"))
        }
        Format::Csv => {
            let keys: Vec<&str> = fields.iter().map(|(k, _)| *k).collect();
            let vals: Vec<&str> = fields.iter().map(|(_, v)| v.as_str()).collect();
            writeln!(out, "{}\n{}", keys.join(","), vals.join(","))
        }
        Format::Text => writeln!(out, "{value}"),
    }
}

/// `β_{r}(d)` of the given curve.
pub fn cmd_beta(rank: u32, degree: i64, curve: &CurveArgs, format: Format, out: &mut dyn Write) -> Result<i32, ConfigError> {
    check_rank(rank)?;
    let c = curve.to_curve()?;
    let v = beta(&c, rank, degree).map_err(|e| usage(e.to_string()))?;
    emit_value(out, format, &[("rank", rank.to_string()), ("degree", degree.to_string()), ("beta", v.to_string())])
        .map_err(|e| usage(e.to_string()))?;
    Ok(EXIT_OK)
}

/// `α_r` of the given elliptic curve.
pub fn cmd_alpha(rank: u32, curve: &CurveArgs, format: Format, out: &mut dyn Write) -> Result<i32, ConfigError> {
    check_rank(rank)?;
    let c = curve.to_curve()?;
    let table = MassTable::new(&c, rank).map_err(|e| usage(e.to_string()))?;
    let v = &table.alpha[rank as usize];
    emit_value(out, format, &[("rank", rank.to_string()), ("alpha", v.to_string())]).map_err(|e| usage(e.to_string()))?;
    Ok(EXIT_OK)
}

fn open_output(path: &Option<PathBuf>) -> Result<Box<dyn Write>, ConfigError> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).map_err(|e| usage(format!("cannot create {}: {e}", p.display())))?,
        )),
        None => Box::new(std::io::stdout().lock()),
    })
}

pub fn cmd_verify(suite: Suite, cfg: &RunConfig) -> Result<i32, ConfigError> {
    let result = suite.run(cfg, true);
    let mut out = open_output(&cfg.output)?;
    let text = match cfg.format {
        Format::Json => json_lines(&result),
        Format::Csv => csv_rows(std::slice::from_ref(&result)),
        Format::Text => text_table(std::slice::from_ref(&result)),
    };
    out.write_all(text.as_bytes()).and_then(|_| out.flush()).map_err(|e| usage(e.to_string()))?;
    Ok(if result.failed() { EXIT_MATH } else { EXIT_OK })
}

fn config_echo(cfg: &RunConfig) -> BTreeMap<String, Param> {
    let list = |v: &[String]| v.join(",");
    BTreeMap::from([
        ("max_rank".to_string(), Param::from(cfg.max_rank)),
        ("max_q".to_string(), Param::from(cfg.max_q)),
        ("max_n".to_string(), Param::from(cfg.max_n)),
        ("n".to_string(), Param::from(list(&cfg.group_n.iter().map(|n| n.to_string()).collect::<Vec<_>>()))),
        ("curve".to_string(), Param::from(format!("{},{}", cfg.curve.a, cfg.curve.b))),
        ("primes_up_to".to_string(), Param::from(cfg.prime_bound)),
        ("ranks".to_string(), Param::from(list(&cfg.ranks.iter().map(|n| n.to_string()).collect::<Vec<_>>()))),
        ("bins".to_string(), Param::from(cfg.bins)),
    ])
}

/// Every suite at the configured bounds as one document.
pub fn build_report(cfg: &RunConfig) -> Report {
    Report::new(config_echo(cfg), suites::all(cfg))
}

pub fn cmd_report(cfg: &RunConfig) -> Result<i32, ConfigError> {
    let report = build_report(cfg);
    let text = match cfg.format {
        Format::Json => serde_json::to_string_pretty(&report).expect("report serializes") + "\n",
        Format::Text => report.to_text(),
        Format::Csv => csv_rows(&report.suites),
    };
    let mut out = open_output(&cfg.output)?;
    out.write_all(text.as_bytes()).and_then(|_| out.flush()).map_err(|e| usage(e.to_string()))?;
    Ok(if report.failed() { EXIT_MATH } else { EXIT_OK })
}

#[derive(Debug, Serialize)]
struct RankSummary {
    rank: u32,
    samples: u64,
    mean: String,
    limit: Option<String>,
    p_from: u64,
    scaled_sup: Option<String>,
    histogram: String,
}

#[derive(Debug, Serialize)]
struct ZerosSummary {
    source: String,
    primes: usize,
    samples_file: String,
    sato_tate: RankSummary,
    ranks: Vec<RankSummary>,
    violations: Vec<zero_dist::RhViolation>,
}

fn rank_summary(h: &AngleHistogram, file: &Path) -> RankSummary {
    RankSummary {
        rank: h.rank,
        samples: h.samples,
        mean: sig17(h.mean),
        limit: h.limit.map(sig17),
        p_from: h.p0,
        scaled_sup: h.scaled_sup.map(sig17),
        histogram: file.display().to_string(),
    }
}

fn write_file(path: &Path, f: impl FnOnce(&mut BufWriter<File>) -> Result<(), zero_dist::ZeroDistError>) -> Result<(), ConfigError> {
    let file = File::create(path).map_err(|e| usage(format!("cannot create {}: {e}", path.display())))?;
    let mut w = BufWriter::new(file);
    f(&mut w).map_err(|e| usage(e.to_string()))?;
    w.flush().map_err(|e| usage(e.to_string()))
}

/// Angles of a curve family or an `a_p` table, written as CSV files with a
/// JSON summary on standard output.
pub fn cmd_zeros(cfg: &RunConfig, ap_table: Option<&Path>, out: &mut dyn Write) -> Result<i32, ConfigError> {
    let max_rank = *cfg.ranks.iter().max().expect("validated non-empty");
    let masses = SymbolicMasses::new(max_rank).map_err(|e| usage(e.to_string()))?;
    let (source, sweep, bound): (String, SweepOutput, u64) = match ap_table {
        Some(path) => {
            let file = File::open(path).map_err(|e| usage(format!("cannot open {}: {e}", path.display())))?;
            let counts = zero_dist::ingest_ap_table(file).map_err(|e| usage(format!("{}: {e}", path.display())))?;
            if let Some(&(p, _)) = counts.iter().find(|(p, _)| *p > MAX_PRIME_BOUND) {
                return Err(usage(format!("prime {p} exceeds the cap {MAX_PRIME_BOUND}")));
            }
            let bound = counts.iter().map(|c| c.0).max().unwrap_or(0);
            let s = zero_dist::samples_from_counts(&masses, &counts, &cfg.ranks).map_err(|e| usage(e.to_string()))?;
            (format!("table {}", path.display()), s, bound)
        }
        None => {
            let (a, b) = (cfg.curve.a, cfg.curve.b);
            if zero_dist::globally_singular(a, b) {
                return Err(usage(format!("y^2 = x^3 + {a}x + {b} is singular")));
            }
            let s = zero_dist::sweep(&masses, a, b, cfg.prime_bound, &cfg.ranks).map_err(|e| usage(e.to_string()))?;
            (format!("curve {a},{b}"), s, cfg.prime_bound)
        }
    };
    let dir = cfg.output.clone().unwrap_or_else(|| PathBuf::from("."));
    std::fs::create_dir_all(&dir).map_err(|e| usage(format!("cannot create {}: {e}", dir.display())))?;
    let samples_path = dir.join("samples.csv");
    write_file(&samples_path, |w| zero_dist::write_samples_csv(w, &sweep.samples, &cfg.ranks))?;
    let p0 = (bound / 10).max(5);
    let hist = |rank: u32, name: String| -> Result<RankSummary, ConfigError> {
        let h = zero_dist::histogram(&sweep.samples, rank, cfg.bins, p0);
        let path = dir.join(name);
        write_file(&path, |w| zero_dist::write_histogram_csv(w, &h))?;
        Ok(rank_summary(&h, &path))
    };
    let sato_tate = hist(1, "histogram_theta.csv".into())?;
    let ranks = cfg
        .ranks
        .iter()
        .map(|&r| hist(r, format!("histogram_theta{r}.csv")))
        .collect::<Result<Vec<_>, _>>()?;
    let summary = ZerosSummary {
        source,
        primes: sweep.samples.len() + sweep.violations.len(),
        samples_file: samples_path.display().to_string(),
        sato_tate,
        ranks,
        violations: sweep.violations.clone(),
    };
    let json = serde_json::to_string_pretty(&summary).expect("summary serializes");
    write_file(&dir.join("summary.json"), |w| {
        writeln!(w, "{json}").map_err(|e| zero_dist::ZeroDistError::Io(e.to_string()))
    })?;
    writeln!(out, "{json}").map_err(|e| usage(e.to_string()))?;
    Ok(if sweep.violations.is_empty() { EXIT_OK } else { EXIT_MATH })
}
