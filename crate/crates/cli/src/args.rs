//! Command-line flags, the optional config file, and the echo of the
//! effective settings.

use clap::{Args, Parser, Subcommand, ValueEnum};
use std::fmt::Write as _;
use std::path::PathBuf;

#[derive(Parser, Debug)]
#[command(name = "stbsim", version, about = "Spectral turning-bands simulation of isotropic Gaussian random fields")]
#[command(args_override_self = true)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Simulate one field and write it to disk.
    Simulate(SimulateArgs),
    /// Run semivariogram validation scenarios.
    Scenario(ScenarioArgs),
    /// Acceptance rates, envelope constants and a radius KS test for one model.
    SamplerCheck(SamplerCheckArgs),
    /// Classify a (ν, μ) grid of GH models by simulation region.
    Regions(RegionsArgs),
    /// Time the simulation engine.
    Bench(BenchArgs),
}

impl Command {
    pub fn config_path(&self) -> Option<&PathBuf> {
        match self {
            Command::Simulate(a) => a.config.as_ref(),
            Command::Scenario(a) => a.config.as_ref(),
            Command::SamplerCheck(a) => a.config.as_ref(),
            Command::Regions(a) => a.config.as_ref(),
            Command::Bench(a) => a.config.as_ref(),
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// Generalized Wendland, GH with l = 1/2.
    Gw,
    /// Hypergeometric, GH with l = d/2 + ν.
    Hyp,
    /// GH with explicit `--l`.
    Gh,
    Kummer,
    Matern,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    Auto,
    Beta,
    Gasper,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Bin,
}

#[derive(Args, Debug, Clone)]
pub struct ModelArgs {
    #[arg(long, value_enum, default_value = "gw")]
    pub model: Family,
    #[arg(long)]
    pub nu: Option<f64>,
    #[arg(long)]
    pub mu: Option<f64>,
    /// GH `l`; a number or `hyp` for `d/2 + ν`.
    #[arg(long, default_value = "0.5")]
    pub l: String,
    /// GH support radius.
    #[arg(long)]
    pub a: Option<f64>,
    /// Kummer-Tricomi scale.
    #[arg(long)]
    pub beta: Option<f64>,
    /// Matérn scale.
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub sill: f64,
    #[arg(long, default_value_t = 2)]
    pub dim: usize,
    /// GH sampler choice.
    #[arg(long, value_enum, default_value = "auto")]
    pub algorithm: Algorithm,
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Number of uniform random locations.
    #[arg(long, default_value_t = 1000)]
    pub n: usize,
    /// Lower corner of the location box.
    #[arg(long, default_value_t = 0.0)]
    pub lo: f64,
    /// Upper corner of the location box.
    #[arg(long, default_value_t = 1.0)]
    pub hi: f64,
    /// CSV of coordinates (one row per point); replaces the random locations.
    #[arg(long)]
    pub locations: Option<PathBuf>,
    /// Number of spectral components.
    #[arg(long = "L", default_value_t = 1000)]
    pub num_components: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Independent fields; replicate `r` uses seed `seed + r`.
    #[arg(long, default_value_t = 1)]
    pub replicates: usize,
    #[arg(long, short, default_value = "field.csv")]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    /// `key = value` file whose settings override the flags.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ScenarioArgs {
    /// `table1`, `table2` or `table3`.
    #[arg(long, conflicts_with = "file")]
    pub preset: Option<String>,
    /// Scenario definition in `key = value` form.
    #[arg(long)]
    pub file: Option<PathBuf>,
    /// Run only the named scenarios (comma separated).
    #[arg(long, value_delimiter = ',')]
    pub only: Vec<String>,
    /// 200 replicates of 2000 points (the default).
    #[arg(long, conflicts_with = "full_scale")]
    pub desk_scale: bool,
    /// 1000 replicates of 5000 points.
    #[arg(long)]
    pub full_scale: bool,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long = "L")]
    pub num_components: Option<usize>,
    #[arg(long)]
    pub replicates: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub bins: Option<usize>,
    /// Replicates of the Cholesky reference; 0 disables it.
    #[arg(long)]
    pub cholesky_replicates: Option<usize>,
    #[arg(long)]
    pub cholesky_n: Option<usize>,
    #[arg(long, value_enum)]
    pub algorithm: Option<Algorithm>,
    #[arg(long, short, default_value = "scenario-out")]
    pub out_dir: PathBuf,
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SamplerCheckArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Radius draws for the KS test and the overall acceptance rate.
    #[arg(long, default_value_t = 100_000)]
    pub draws: usize,
    /// Draws per reported rejection stage.
    #[arg(long, default_value_t = 100_000)]
    pub stage_draws: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, short)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct RegionsArgs {
    /// `lo:hi:count`.
    #[arg(long, default_value = "0:3:31")]
    pub nu: String,
    /// `lo:hi:count`.
    #[arg(long, default_value = "0.1:10:100")]
    pub mu: String,
    /// A number or `hyp` for `d/2 + ν`.
    #[arg(long, default_value = "0.5")]
    pub l: String,
    #[arg(long, default_value_t = 2)]
    pub dim: usize,
    /// Output CSV; standard output if omitted.
    #[arg(long, short)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Point counts (comma separated).
    #[arg(long, value_delimiter = ',', default_value = "10000,100000")]
    pub n: Vec<usize>,
    #[arg(long = "L", default_value_t = 1000)]
    pub num_components: usize,
    /// Timed runs per point count; the fastest is reported.
    #[arg(long, default_value_t = 3)]
    pub repeats: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, short)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub config: Option<PathBuf>,
}

/// Turns `key = value` lines into `--key value` tokens; `# ...` is a comment,
/// `true` gives a bare flag and `false` drops it.
pub fn config_tokens(text: &str) -> Result<Vec<String>, String> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| format!("config line {}: expected `key = value`", i + 1))?;
        let (k, v) = (k.trim(), v.trim());
        if k.is_empty() || k == "config" {
            return Err(format!("config line {}: bad key `{k}`", i + 1));
        }
        match v {
            "false" => {}
            "true" => out.push(format!("--{k}")),
            _ => {
                out.push(format!("--{k}"));
                out.push(v.to_string());
            }
        }
    }
    Ok(out)
}

fn value_name<T: ValueEnum>(v: T) -> String {
    v.to_possible_value().map(|p| p.get_name().to_string()).unwrap_or_default()
}

fn put(s: &mut String, k: &str, v: impl std::fmt::Display) {
    let _ = writeln!(s, "{k} = {v}");
}

fn put_opt<T: std::fmt::Display>(s: &mut String, k: &str, v: &Option<T>) {
    if let Some(v) = v {
        put(s, k, v);
    }
}

impl ModelArgs {
    fn echo(&self, s: &mut String) {
        put(s, "model", value_name(self.model));
        put_opt(s, "nu", &self.nu.map(Float));
        put_opt(s, "mu", &self.mu.map(Float));
        put(s, "l", &self.l);
        put_opt(s, "a", &self.a.map(Float));
        put_opt(s, "beta", &self.beta.map(Float));
        put_opt(s, "alpha", &self.alpha.map(Float));
        put(s, "sill", Float(self.sill));
        put(s, "dim", self.dim);
        put(s, "algorithm", value_name(self.algorithm));
    }
}

/// Shortest round-trip float formatting.
struct Float(f64);

impl std::fmt::Display for Float {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl SimulateArgs {
    /// The effective settings as a config file.
    pub fn echo(&self) -> String {
        let mut s = String::from("# stbsim simulate\n");
        self.model.echo(&mut s);
        match &self.locations {
            Some(p) => put(&mut s, "locations", p.display()),
            None => {
                put(&mut s, "n", self.n);
                put(&mut s, "lo", Float(self.lo));
                put(&mut s, "hi", Float(self.hi));
            }
        }
        put(&mut s, "L", self.num_components);
        put(&mut s, "seed", self.seed);
        put(&mut s, "replicates", self.replicates);
        put(&mut s, "out", self.out.display());
        put(&mut s, "format", value_name(self.format));
        s
    }
}

impl ScenarioArgs {
    pub fn echo(&self) -> String {
        let mut s = String::from("# stbsim scenario\n");
        put_opt(&mut s, "preset", &self.preset);
        put_opt(&mut s, "file", &self.file.as_ref().map(|p| p.display().to_string()));
        if !self.only.is_empty() {
            put(&mut s, "only", self.only.join(","));
        }
        put(&mut s, if self.full_scale { "full-scale" } else { "desk-scale" }, true);
        put_opt(&mut s, "n", &self.n);
        put_opt(&mut s, "L", &self.num_components);
        put_opt(&mut s, "replicates", &self.replicates);
        put_opt(&mut s, "seed", &self.seed);
        put_opt(&mut s, "bins", &self.bins);
        put_opt(&mut s, "cholesky-replicates", &self.cholesky_replicates);
        put_opt(&mut s, "cholesky-n", &self.cholesky_n);
        put_opt(&mut s, "algorithm", &self.algorithm.map(value_name));
        put(&mut s, "out-dir", self.out_dir.display());
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_lines_become_flags() {
        let t = config_tokens("# c\nnu = 1\n\nfull-scale = true\ndesk-scale = false\nL=20 # comps\n").unwrap();
        assert_eq!(t, ["--nu", "1", "--full-scale", "--L", "20"]);
        assert!(config_tokens("nonsense").is_err());
        assert!(config_tokens("config = x").is_err());
    }

    #[test]
    fn echo_reparses_to_the_same_settings() {
        let argv = ["stbsim", "simulate", "--model", "gh", "--nu", "1", "--mu", "3.5", "--l", "0.25", "--a", "0.2", "--n", "10"];
        let Command::Simulate(a) = Cli::parse_from(argv).command else { panic!() };
        let mut again = vec!["stbsim".to_string(), "simulate".to_string()];
        again.extend(config_tokens(&a.echo()).unwrap());
        let Command::Simulate(b) = Cli::parse_from(again).command else { panic!() };
        assert_eq!(a.echo(), b.echo());
    }

    #[test]
    fn later_flags_win() {
        let argv = ["stbsim", "simulate", "--seed", "1", "--seed", "9"];
        let Command::Simulate(a) = Cli::parse_from(argv).command else { panic!() };
        assert_eq!(a.seed, 9);
    }
}
