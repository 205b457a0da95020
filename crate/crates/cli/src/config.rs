//! Run settings merged from flags, an optional `key=value` file and the environment.

use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use polycomp::closure::Caps;
use polycomp::format::parse_records;
use polycomp::refute::RefuteConfig;

/// Environment variable holding the default seed.
pub const SEED_ENV: &str = "POLYCOMP_SEED";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Machine,
}

/// Flags shared by the analysis commands. Unset flags fall back to the
/// config file, then to the environment (seed only), then to defaults.
#[derive(Debug, Clone, Default, Args)]
pub struct RunArgs {
    /// Coefficient field: GF(p), GF(p^n), GF(p^n; m=<poly in t>) or QQ.
    #[arg(long)]
    pub field: Option<String>,
    #[arg(long)]
    pub f1: Option<String>,
    #[arg(long)]
    pub f2: Option<String>,
    /// Degree bound for searches (default 4*lcm*p^2, or lcm over QQ).
    #[arg(long)]
    pub bound: Option<u64>,
    /// Longest cycle half-length tried by the refutation search.
    #[arg(long)]
    pub max_d: Option<usize>,
    /// Most points a closure may collect.
    #[arg(long)]
    pub max_size: Option<usize>,
    /// Largest ambient degree over the prime field.
    #[arg(long)]
    pub max_ext: Option<u64>,
    /// Seed for generated extension moduli and random choices.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Write the result here (atomically) instead of stdout; machine format unless --format says otherwise.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<OutputFormat>,
    /// Read defaults from a key=value file.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunConfig {
    pub field: Option<String>,
    pub f1: Option<String>,
    pub f2: Option<String>,
    pub bound: Option<u64>,
    pub max_d: usize,
    pub max_size: usize,
    pub max_ext: u64,
    pub seed: u64,
    pub output: Option<PathBuf>,
    pub format: OutputFormat,
}

impl RunConfig {
    pub fn caps(&self) -> Caps {
        Caps {
            max_size: self.max_size,
            max_ext: self.max_ext,
        }
    }

    pub fn refute_config(&self) -> RefuteConfig {
        RefuteConfig {
            max_d: self.max_d,
            max_ext: self.max_ext,
            field_seed: self.seed,
            ..RefuteConfig::default()
        }
    }
}

fn parse_num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T, String> {
    v.parse()
        .map_err(|_| format!("`{key}` must be a nonnegative integer, got `{v}`"))
}

/// Merge flags over the config file over the environment over defaults,
/// and reject zero caps.
pub fn resolve(args: &RunArgs) -> Result<RunConfig, ConfigError> {
    let file = match &args.config {
        Some(path) => read_config(path)?,
        None => Vec::new(),
    };
    let from_file = |key: &str| file.iter().find(|(k, _)| k == key).map(|(_, v)| v.clone());
    let num = |key: &str| -> Result<Option<u64>, ConfigError> {
        from_file(key)
            .map(|v| parse_num(key, &v))
            .transpose()
            .map_err(ConfigError::Invalid)
    };
    let env_seed = match std::env::var(SEED_ENV) {
        Ok(v) => Some(parse_num::<u64>(SEED_ENV, &v).map_err(ConfigError::Invalid)?),
        Err(_) => None,
    };
    let output = args.output.clone().or_else(|| from_file("output").map(PathBuf::from));
    // files default to records so that `verify` can re-read them
    let fallback = if output.is_some() { OutputFormat::Machine } else { OutputFormat::Text };
    let format = match (args.format, from_file("format").as_deref()) {
        (Some(f), _) => f,
        (None, Some("machine")) => OutputFormat::Machine,
        (None, Some("text")) => OutputFormat::Text,
        (None, None) => fallback,
        (None, Some(other)) => {
            return Err(ConfigError::Invalid(format!("unknown format `{other}`")))
        }
    };
    let refute_defaults = RefuteConfig::default();
    let caps = Caps::default();
    let cfg = RunConfig {
        field: args.field.clone().or_else(|| from_file("field")),
        f1: args.f1.clone().or_else(|| from_file("f1")),
        f2: args.f2.clone().or_else(|| from_file("f2")),
        bound: args.bound.or(num("bound")?),
        max_d: args
            .max_d
            .or(num("max_d")?.map(|v| v as usize))
            .unwrap_or(refute_defaults.max_d),
        max_size: args
            .max_size
            .or(num("max_size")?.map(|v| v as usize))
            .unwrap_or(caps.max_size),
        max_ext: args.max_ext.or(num("max_ext")?).unwrap_or(caps.max_ext),
        seed: args.seed.or(num("seed")?).or(env_seed).unwrap_or(0),
        output: args
            .output
            .clone()
            .or_else(|| from_file("output").map(PathBuf::from)),
        format,
    };
    if cfg.bound == Some(0) || cfg.max_d == 0 || cfg.max_size == 0 || cfg.max_ext == 0 {
        return Err(ConfigError::Invalid(
            "bound, max_d, max_size and max_ext must be positive".into(),
        ));
    }
    Ok(cfg)
}

#[derive(Debug)]
pub enum ConfigError {
    Io(String),
    Invalid(String),
}

const KNOWN_KEYS: [&str; 10] = [
    "field", "f1", "f2", "bound", "max_d", "max_size", "max_ext", "seed", "output", "format",
];

fn read_config(path: &Path) -> Result<Vec<(String, String)>, ConfigError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ConfigError::Io(format!("{}: {e}", path.display())))?;
    let records = parse_records(&text)
        .map_err(|e| ConfigError::Invalid(format!("{}: {e}", path.display())))?;
    let entries: Vec<(String, String)> = records.into_iter().flat_map(|r| r.entries).collect();
    if let Some((k, _)) = entries
        .iter()
        .find(|(k, _)| !KNOWN_KEYS.contains(&k.as_str()))
    {
        return Err(ConfigError::Invalid(format!(
            "{}: unknown key `{k}`",
            path.display()
        )));
    }
    Ok(entries)
}
