use std::fmt::Display;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use gtacb_core::{Method, TransmissionMode};
use serde::Serialize;

#[derive(Parser, Debug)]
#[command(
    name = "gtacb",
    version,
    about = "Community-aware TOPSIS seed selection and SIR evaluation"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Parse a graph and write its canonical edge list.
    Ingest(IngestArgs),
    /// Degree, closeness, betweenness and PageRank for every node.
    Centrality(CentralityArgs),
    /// Spectral partition into K communities.
    Communities(CommunitiesArgs),
    /// Select K seeds with one method.
    Seeds(SeedsArgs),
    /// Monte Carlo SIR evaluation of a seed set.
    Simulate(SimulateArgs),
    /// Method x K x kappa comparison grid.
    Compare(CompareArgs),
    /// Random graph with planted modules.
    Generate(GenerateArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Ingest(_) => "ingest",
            Command::Centrality(_) => "centrality",
            Command::Communities(_) => "communities",
            Command::Seeds(_) => "seeds",
            Command::Simulate(_) => "simulate",
            Command::Compare(_) => "compare",
            Command::Generate(_) => "generate",
        }
    }

    pub fn run_opts(&self) -> &RunOpts {
        match self {
            Command::Ingest(a) => &a.run,
            Command::Centrality(a) => &a.run,
            Command::Communities(a) => &a.run,
            Command::Seeds(a) => &a.run,
            Command::Simulate(a) => &a.run,
            Command::Compare(a) => &a.run,
            Command::Generate(a) => &a.run,
        }
    }
}

/// Comma-separated list given as one flag value.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct List<T>(pub Vec<T>);

impl<T: FromStr> FromStr for List<T>
where
    T::Err: Display,
{
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        s.split(',')
            .map(str::trim)
            .filter(|p| !p.is_empty())
            .map(|p| p.parse::<T>().map_err(|e| format!("`{p}`: {e}")))
            .collect::<Result<Vec<T>, String>>()
            .and_then(|v| {
                if v.is_empty() {
                    Err("empty list".into())
                } else {
                    Ok(List(v))
                }
            })
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FormatArg {
    /// `.net`/`.paj` are Pajek, everything else an edge list.
    Auto,
    Edgelist,
    Pajek,
}

/// Flags shared by every command that reads a graph.
#[derive(Args, Debug, Clone, Serialize)]
pub struct GraphArgs {
    /// Graph file (edge list or Pajek).
    #[arg(short = 'g', long = "graph")]
    pub graph: PathBuf,
    #[arg(long, value_enum, default_value = "auto")]
    pub format: FormatArg,
    /// Treat edge-list rows as directed arcs.
    #[arg(long)]
    pub directed: bool,
    /// Keep raw weights instead of dividing by the maximum.
    #[arg(long = "no-normalize")]
    pub no_normalize: bool,
}

/// Output and execution flags; none of them affect output contents.
#[derive(Args, Debug, Clone)]
pub struct RunOpts {
    /// Output directory.
    #[arg(short = 'o', long = "out", default_value = "out")]
    pub out: PathBuf,
    /// Worker threads (default: all cores).
    #[arg(long)]
    pub jobs: Option<usize>,
    /// key = value file; command-line flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

/// Epidemic parameters other than kappa.
#[derive(Args, Debug, Clone, Serialize)]
pub struct SirArgs {
    /// Infectious periods.
    #[arg(long = "L", default_value_t = 2)]
    #[serde(rename = "L")]
    pub l: usize,
    /// Infectiousness per infection age; needs exactly L entries.
    #[arg(long, default_value = "0.3,0.15")]
    pub alpha: List<f64>,
    /// Monte Carlo replications.
    #[arg(long, default_value_t = 300)]
    pub iters: usize,
    /// per_edge or summed_clamped.
    #[arg(long, default_value = "per_edge")]
    pub mode: TransmissionMode,
}

impl SirArgs {
    pub fn check(&self) -> anyhow::Result<()> {
        if self.alpha.0.len() != self.l {
            bail!(
                "--alpha has {} entries but --L is {}; give one alpha per infectious period",
                self.alpha.0.len(),
                self.l
            );
        }
        Ok(())
    }
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct IngestArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub graph: GraphArgs,
    #[command(flatten)]
    #[serde(skip)]
    pub run: RunOpts,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct CentralityArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub graph: GraphArgs,
    /// PageRank damping factor.
    #[arg(long, default_value_t = 0.85)]
    pub damping: f64,
    #[command(flatten)]
    #[serde(skip)]
    pub run: RunOpts,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct CommunitiesArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub graph: GraphArgs,
    /// Number of communities.
    #[arg(short = 'K', long = "K")]
    #[serde(rename = "K")]
    pub k: usize,
    /// k-means restarts.
    #[arg(long, default_value_t = 20)]
    pub restarts: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    #[serde(skip)]
    pub run: RunOpts,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct SeedsArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub graph: GraphArgs,
    /// Number of seeds.
    #[arg(short = 'K', long = "K")]
    #[serde(rename = "K")]
    pub k: usize,
    /// gtacb, dc, cc, bc, pr or topsis.
    #[arg(long, default_value = "gtacb")]
    pub method: Method,
    /// TOPSIS weights for dc,cc,bc,pr (default equal).
    #[arg(long)]
    pub weights: Option<List<f64>>,
    /// Use this node,community CSV instead of detecting communities.
    #[arg(long)]
    pub partition: Option<PathBuf>,
    #[arg(long, default_value_t = 20)]
    pub restarts: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    #[serde(skip)]
    pub run: RunOpts,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct SimulateArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub graph: GraphArgs,
    /// Seed file: JSON from `seeds` or one label per line.
    #[arg(long)]
    pub seeds: PathBuf,
    #[command(flatten)]
    #[serde(flatten)]
    pub sir: SirArgs,
    /// Relative infectiousness.
    #[arg(long, default_value_t = 0.5)]
    pub kappa: f64,
    /// Also write the per-replication trace.
    #[arg(long)]
    pub trace: bool,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    #[serde(skip)]
    pub run: RunOpts,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct CompareArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub graph: GraphArgs,
    #[arg(long, default_value = "gtacb,dc,cc,bc,pr,topsis")]
    pub methods: List<Method>,
    /// Seed-set sizes.
    #[arg(short = 'K', long = "K", default_value = "5,10,20")]
    #[serde(rename = "K")]
    pub k: List<usize>,
    /// Relative infectiousness values.
    #[arg(long, default_value = "0.2,0.5")]
    pub kappa: List<f64>,
    #[command(flatten)]
    #[serde(flatten)]
    pub sir: SirArgs,
    #[arg(long)]
    pub weights: Option<List<f64>>,
    #[arg(long, default_value_t = 20)]
    pub restarts: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    #[serde(skip)]
    pub run: RunOpts,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct GenerateArgs {
    /// Node count.
    #[arg(long)]
    pub n: usize,
    /// Module count.
    #[arg(long, default_value_t = 2)]
    pub c: usize,
    /// Overall edge density.
    #[arg(long)]
    pub p: f64,
    /// Fraction of edges inside modules.
    #[arg(long)]
    pub r: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    #[serde(skip)]
    pub run: RunOpts,
}

/// Finds `--config FILE` among the subcommand arguments.
fn config_path(argv: &[String]) -> Option<PathBuf> {
    let mut it = argv.iter().skip(2);
    while let Some(a) = it.next() {
        if a == "--config" {
            return it.next().map(PathBuf::from);
        }
        if let Some(v) = a.strip_prefix("--config=") {
            return Some(PathBuf::from(v));
        }
    }
    None
}

/// Turns `key = value` lines into `--key=value` flags.
///
/// `[section]` headers, `#`/`;` comments and quotes are ignored; TOML arrays
/// become comma lists; `true` becomes a bare flag and `false` drops it.
pub fn config_flags(text: &str, path: &Path) -> anyhow::Result<Vec<String>> {
    let mut flags = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with(';') || line.starts_with('[') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            bail!("{}:{}: expected `key = value`, got `{line}`", path.display(), i + 1);
        };
        let key = key.trim().replace('_', "-");
        let value = value.trim();
        let value = value
            .strip_prefix('[')
            .and_then(|v| v.strip_suffix(']'))
            .unwrap_or(value);
        let value: String = value
            .split(',')
            .map(|p| p.trim().trim_matches('"').trim_matches('\''))
            .collect::<Vec<_>>()
            .join(",");
        if key.is_empty() || key == "config" {
            bail!("{}:{}: invalid key `{key}`", path.display(), i + 1);
        }
        match value.as_str() {
            "true" => flags.push(format!("--{key}")),
            "false" => {}
            _ => flags.push(format!("--{key}={value}")),
        }
    }
    Ok(flags)
}

/// Inserts config-file flags right after the subcommand so that later
/// command-line flags override them.
pub fn expand_config(argv: Vec<String>) -> anyhow::Result<Vec<String>> {
    let Some(path) = config_path(&argv) else {
        return Ok(argv);
    };
    let text =
        std::fs::read_to_string(&path).with_context(|| format!("cannot read config file `{}`", path.display()))?;
    let flags = config_flags(&text, &path)?;
    let mut out = argv[..2].to_vec();
    out.extend(flags);
    out.extend_from_slice(&argv[2..]);
    Ok(out)
}
