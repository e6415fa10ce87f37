//! Run configuration: defaults, then an optional TOML file, then the
//! environment, then command-line flags.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Deserialize;

pub const PARALLELISM_ENV: &str = "ZETAFORGE_PARALLELISM";

pub const MAX_SYMBOLIC_RANK: u32 = 8;
pub const MAX_Q: u64 = 1024;
pub const MAX_GROUP_N: usize = 5;
pub const MAX_PRIME_BOUND: u64 = 1_000_000;
pub const MAX_IR_N: u32 = 12;
pub const MAX_BINS: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// `a,b` of `y² = x³ + ax + b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Curve {
    pub a: i64,
    pub b: i64,
}

impl FromStr for Curve {
    type Err = String;

    fn from_str(s: &str) -> Result<Curve, String> {
        let (a, b) = s.split_once(',').ok_or_else(|| format!("expected a,b, found {s:?}"))?;
        let parse = |x: &str| x.trim().parse::<i64>().map_err(|_| format!("{x:?} is not an integer"));
        Ok(Curve { a: parse(a)?, b: parse(b)? })
    }
}

impl<'de> Deserialize<'de> for Curve {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Curve, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunConfig {
    pub max_rank: u32,
    pub max_q: u64,
    /// Bound for the unipotent identities.
    pub max_n: u32,
    pub group_n: Vec<usize>,
    pub curve: Curve,
    pub prime_bound: u64,
    pub ranks: Vec<u32>,
    pub bins: usize,
    pub format: Format,
    pub output: Option<PathBuf>,
    pub parallelism: Option<usize>,
}

impl Default for RunConfig {
    fn default() -> RunConfig {
        RunConfig {
            max_rank: 6,
            max_q: 64,
            max_n: 8,
            group_n: vec![2, 3],
            curve: Curve { a: 1, b: 1 },
            prime_bound: 100_000,
            ranks: vec![2, 3],
            bins: 36,
            format: Format::Json,
            output: None,
            parallelism: None,
        }
    }
}

/// Every field optional; keys are the flag names.
#[derive(Debug, Clone, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct Overrides {
    pub max_rank: Option<u32>,
    pub max_q: Option<u64>,
    pub max_n: Option<u32>,
    pub n: Option<Vec<usize>>,
    pub curve: Option<Curve>,
    pub primes_up_to: Option<u64>,
    pub ranks: Option<Vec<u32>>,
    pub bins: Option<usize>,
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
    pub parallelism: Option<usize>,
}

impl RunConfig {
    pub fn apply(&mut self, o: &Overrides) {
        macro_rules! set {
            ($src:ident => $dst:ident) => {
                if let Some(v) = &o.$src {
                    self.$dst = v.clone();
                }
            };
        }
        set!(max_rank => max_rank);
        set!(max_q => max_q);
        set!(max_n => max_n);
        set!(n => group_n);
        set!(curve => curve);
        set!(primes_up_to => prime_bound);
        set!(ranks => ranks);
        set!(bins => bins);
        set!(format => format);
        if let Some(p) = &o.out {
            self.output = Some(p.clone());
        }
        if let Some(p) = o.parallelism {
            self.parallelism = Some(p);
        }
    }

    /// Layers defaults, the file at `path`, the environment value of
    /// [`PARALLELISM_ENV`] and the flags.
    pub fn resolve(path: Option<&Path>, env_parallelism: Option<&str>, flags: &Overrides) -> Result<RunConfig, ConfigError> {
        let mut cfg = RunConfig::default();
        if let Some(path) = path {
            let text = std::fs::read_to_string(path)
                .map_err(|e| ConfigError(format!("cannot read config {}: {e}", path.display())))?;
            let file: Overrides =
                toml::from_str(&text).map_err(|e| ConfigError(format!("config {}: {e}", path.display())))?;
            cfg.apply(&file);
        }
        if let Some(v) = env_parallelism {
            let n = v
                .trim()
                .parse::<usize>()
                .map_err(|_| ConfigError(format!("{PARALLELISM_ENV}={v:?} is not a positive integer")))?;
            cfg.parallelism = Some(n);
        }
        cfg.apply(flags);
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let err = |m: String| Err(ConfigError(m));
        if !(2..=MAX_SYMBOLIC_RANK).contains(&self.max_rank) {
            return err(format!("max-rank must lie in 2..={MAX_SYMBOLIC_RANK}, found {}", self.max_rank));
        }
        if !(2..=MAX_Q).contains(&self.max_q) {
            return err(format!("max-q must lie in 2..={MAX_Q}, found {}", self.max_q));
        }
        if !(1..=MAX_IR_N).contains(&self.max_n) {
            return err(format!("max-n must lie in 1..={MAX_IR_N}, found {}", self.max_n));
        }
        if self.group_n.is_empty() || self.group_n.iter().any(|n| !(2..=MAX_GROUP_N).contains(n)) {
            return err(format!("n must be a non-empty list within 2..={MAX_GROUP_N}"));
        }
        if !(5..=MAX_PRIME_BOUND).contains(&self.prime_bound) {
            return err(format!("primes-up-to must lie in 5..={MAX_PRIME_BOUND}, found {}", self.prime_bound));
        }
        if self.ranks.is_empty() || self.ranks.iter().any(|r| !(2..=MAX_SYMBOLIC_RANK).contains(r)) {
            return err(format!("ranks must be a non-empty list within 2..={MAX_SYMBOLIC_RANK}"));
        }
        if !(1..=MAX_BINS).contains(&self.bins) {
            return err(format!("bins must lie in 1..={MAX_BINS}, found {}", self.bins));
        }
        if self.parallelism == Some(0) {
            return err("parallelism must be positive".into());
        }
        Ok(())
    }
}
