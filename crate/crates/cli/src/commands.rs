use crate::args::{
    Algorithm, BenchArgs, Family, Format, ModelArgs, RegionsArgs, SamplerCheckArgs, ScenarioArgs, SimulateArgs,
};
use stbsim::engine::{simulate_with, write_binary, write_csv, Locations};
use stbsim::models::{gh_classify_region, CorrelationModel, GHParams, KummerParams, MaternParams, ModelKind};
use stbsim::samplers::GHAlgorithm;
use stbsim::validate::{parse_scenario, preset, run_scenario, sampler_diagnostics, ScenarioConfig};
use stbsim::Error;
use std::fmt;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

pub const EXIT_CONFIG: u8 = 2;
pub const EXIT_MODEL: u8 = 3;
pub const EXIT_NUMERIC: u8 = 4;

impl CliError {
    pub fn config(message: impl Into<String>) -> Self {
        Self { code: EXIT_CONFIG, message: message.into() }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvalidModel(_) | Error::Region(_) => EXIT_MODEL,
            Error::Input(_) | Error::Io(_) | Error::DimensionMismatch { .. } => EXIT_CONFIG,
            Error::SpecialFn(_) | Error::Envelope(_) | Error::Truncation { .. } | Error::Cholesky { .. } => EXIT_NUMERIC,
        };
        Self { code, message: e.to_string() }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e).into()
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn required(v: Option<f64>, flag: &str, family: Family) -> Result<f64> {
    v.ok_or_else(|| CliError::config(format!("--{flag} is required for the {family:?} model").to_lowercase()))
}

fn parse_l(text: &str, nu: f64, dim: usize) -> Result<f64> {
    if text == "hyp" {
        return Ok(dim as f64 / 2.0 + nu);
    }
    text.parse().map_err(|_| CliError::config(format!("--l must be a number or `hyp`, got `{text}`")))
}

pub fn build_model(m: &ModelArgs) -> Result<CorrelationModel> {
    if m.dim == 0 {
        return Err(CliError::config("--dim must be at least 1"));
    }
    let f = m.model;
    let kind = match f {
        Family::Matern => ModelKind::Matern(MaternParams::new(required(m.nu, "nu", f)?, required(m.alpha, "alpha", f)?)?),
        Family::Kummer => ModelKind::Kummer(KummerParams::new(
            required(m.nu, "nu", f)?,
            required(m.mu, "mu", f)?,
            required(m.beta, "beta", f)?,
        )?),
        Family::Gw | Family::Hyp | Family::Gh => {
            let nu = required(m.nu, "nu", f)?;
            let l = match f {
                Family::Gw => 0.5,
                Family::Hyp => m.dim as f64 / 2.0 + nu,
                _ => parse_l(&m.l, nu, m.dim)?,
            };
            ModelKind::GaussHyper(GHParams::new(nu, required(m.mu, "mu", f)?, l, required(m.a, "a", f)?, m.dim)?)
        }
    };
    Ok(CorrelationModel::new(kind, m.sill)?)
}

fn algorithm(a: Algorithm) -> GHAlgorithm {
    match a {
        Algorithm::Auto => GHAlgorithm::Auto,
        Algorithm::Beta => GHAlgorithm::BetaMixture,
        Algorithm::Gasper => GHAlgorithm::Gasper,
    }
}

fn describe(model: &CorrelationModel, dim: usize) {
    println!("model: {model} (d={dim})");
    if let ModelKind::GaussHyper(p) = model.kind {
        println!("region: {}", gh_classify_region(&p));
    }
}

/// Rows of `d` numbers; a non-numeric first row is taken as a header.
fn read_locations(path: &Path, dim: usize) -> Result<Locations> {
    let mut r = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| CliError::config(format!("{}: {e}", path.display())))?;
    let mut coords = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec.map_err(|e| CliError::config(format!("{}: {e}", path.display())))?;
        let parsed: std::result::Result<Vec<f64>, _> = rec.iter().map(str::parse::<f64>).collect();
        match parsed {
            Ok(row) if row.len() == dim => coords.extend(row),
            Ok(row) => {
                return Err(CliError::config(format!(
                    "{} row {}: {} columns, expected {dim}",
                    path.display(),
                    i + 1,
                    row.len()
                )))
            }
            Err(_) if i == 0 => {}
            Err(e) => return Err(CliError::config(format!("{} row {}: {e}", path.display(), i + 1))),
        }
    }
    Ok(Locations::new(dim, coords)?)
}

fn replicate_path(out: &Path, r: usize, replicates: usize) -> PathBuf {
    if replicates == 1 {
        return out.to_path_buf();
    }
    let stem = out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let name = match out.extension() {
        Some(ext) => format!("{stem}-{r}.{}", ext.to_string_lossy()),
        None => format!("{stem}-{r}"),
    };
    out.with_file_name(name)
}

fn config_echo_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".config");
    PathBuf::from(s)
}

pub fn simulate(a: &SimulateArgs) -> Result<()> {
    if a.num_components == 0 || a.replicates == 0 {
        return Err(CliError::config("--L and --replicates must be at least 1"));
    }
    let model = build_model(&a.model)?;
    let dim = a.model.dim;
    let locations = match &a.locations {
        Some(p) => read_locations(p, dim)?,
        None => {
            if !(a.lo < a.hi) {
                return Err(CliError::config("--lo must be below --hi"));
            }
            Locations::uniform(a.n, dim, a.lo, a.hi, a.seed)?
        }
    };
    describe(&model, dim);
    for r in 0..a.replicates {
        let start = Instant::now();
        let seed = a.seed.wrapping_add(r as u64);
        let field = simulate_with(&model, dim, &locations, a.num_components, seed, algorithm(a.model.algorithm))?;
        if r == 0 {
            println!("sampler: {}", field.sampler);
        }
        let path = replicate_path(&a.out, r, a.replicates);
        match a.format {
            Format::Csv => write_csv(&field, &path)?,
            Format::Bin => write_binary(&field, &path)?,
        }
        println!(
            "wrote {} ({} points, L={}, seed={seed}) in {:.3}s",
            path.display(),
            locations.len(),
            a.num_components,
            start.elapsed().as_secs_f64()
        );
    }
    fs::write(config_echo_path(&a.out), a.echo())?;
    Ok(())
}

pub fn scenario(a: &ScenarioArgs) -> Result<()> {
    let mut base = if a.full_scale { ScenarioConfig::full() } else { ScenarioConfig::desk() };
    let mut runs = match (&a.preset, &a.file) {
        (_, Some(file)) => {
            let text = fs::read_to_string(file).map_err(|e| CliError::config(format!("{}: {e}", file.display())))?;
            let (sc, cfg) = parse_scenario(&text, base.clone())?;
            base = cfg;
            vec![sc]
        }
        (Some(name), None) => preset(name)?,
        (None, None) => return Err(CliError::config("give --preset or --file")),
    };
    let mut set = |k: &str, v: Option<String>| -> Result<()> {
        if let Some(v) = v {
            base.set(k, &v)?;
        }
        Ok(())
    };
    set("n", a.n.map(|v| v.to_string()))?;
    set("L", a.num_components.map(|v| v.to_string()))?;
    set("replicates", a.replicates.map(|v| v.to_string()))?;
    set("seed", a.seed.map(|v| v.to_string()))?;
    set("bins", a.bins.map(|v| v.to_string()))?;
    set("cholesky_n", a.cholesky_n.map(|v| v.to_string()))?;
    set("cholesky_replicates", a.cholesky_replicates.map(|v| v.to_string()))?;
    set(
        "algorithm",
        a.algorithm.map(|v| match v {
            Algorithm::Auto => "auto".into(),
            Algorithm::Beta => "beta".into(),
            Algorithm::Gasper => "gasper".into(),
        }),
    )?;
    if !a.only.is_empty() {
        if let Some(bad) = a.only.iter().find(|n| !runs.iter().any(|s| &s.name == *n)) {
            return Err(CliError::config(format!("no scenario named `{bad}`")));
        }
        runs.retain(|s| a.only.contains(&s.name));
    }
    fs::create_dir_all(&a.out_dir)?;
    fs::write(a.out_dir.join("scenario.config"), a.echo())?;
    let mut passed = 0;
    for sc in &runs {
        let report = run_scenario(sc, &base)?;
        print!("{}", report.summary());
        std::io::stdout().flush()?;
        report.write_csv(&a.out_dir.join(format!("{}.csv", sc.name)))?;
        report.write_replicates_csv(&a.out_dir.join(format!("{}-replicates.csv", sc.name)))?;
        passed += usize::from(report.passed());
    }
    println!("{passed}/{} scenarios passed; reports in {}", runs.len(), a.out_dir.display());
    Ok(())
}

pub fn sampler_check(a: &SamplerCheckArgs) -> Result<()> {
    let model = build_model(&a.model)?;
    let d = sampler_diagnostics(&model, a.model.dim, algorithm(a.model.algorithm), a.draws, a.stage_draws, a.seed)?;
    print!("{}", d.summary());
    if let Some(out) = &a.out {
        d.write_csv(out)?;
    }
    Ok(())
}

/// `lo:hi:count`, evenly spaced and inclusive; a count of 1 gives `lo`.
pub fn parse_range(text: &str, flag: &str) -> Result<Vec<f64>> {
    let bad = || CliError::config(format!("--{flag} expects lo:hi:count, got `{text}`"));
    let parts: Vec<&str> = text.split(':').collect();
    let [lo, hi, count] = parts[..] else { return Err(bad()) };
    let (lo, hi): (f64, f64) = (lo.trim().parse().map_err(|_| bad())?, hi.trim().parse().map_err(|_| bad())?);
    let count: usize = count.trim().parse().map_err(|_| bad())?;
    if count == 0 || !lo.is_finite() || !hi.is_finite() || hi < lo {
        return Err(bad());
    }
    if count == 1 {
        return Ok(vec![lo]);
    }
    Ok((0..count).map(|i| lo + (hi - lo) * i as f64 / (count - 1) as f64).collect())
}

pub fn regions(a: &RegionsArgs) -> Result<()> {
    let nus = parse_range(&a.nu, "nu")?;
    let mus = parse_range(&a.mu, "mu")?;
    if a.dim == 0 {
        return Err(CliError::config("--dim must be at least 1"));
    }
    let mut rows = Vec::with_capacity(nus.len() * mus.len());
    let mut counts = std::collections::BTreeMap::new();
    for &nu in &nus {
        let l = parse_l(&a.l, nu, a.dim)?;
        for &mu in &mus {
            let p = GHParams::new(nu, mu, l, 1.0, a.dim).map_err(|e| CliError::config(e.to_string()))?;
            let class = gh_classify_region(&p);
            *counts.entry(class.as_str()).or_insert(0usize) += 1;
            rows.push([format!("{nu:?}"), format!("{mu:?}"), format!("{l:?}"), class.as_str().to_string()]);
        }
    }
    let sink: Box<dyn std::io::Write> = match &a.out {
        Some(p) => Box::new(fs::File::create(p)?),
        None => Box::new(std::io::stdout().lock()),
    };
    let mut w = csv::Writer::from_writer(sink);
    let csv_err = |e: csv::Error| CliError::from(Error::Input(e.to_string()));
    w.write_record(["nu", "mu", "l", "region"]).map_err(csv_err)?;
    for r in &rows {
        w.write_record(r).map_err(csv_err)?;
    }
    w.flush()?;
    for (class, n) in counts {
        eprintln!("{class}: {n}");
    }
    Ok(())
}

pub fn bench(a: &BenchArgs) -> Result<()> {
    if a.num_components == 0 || a.repeats == 0 || a.n.is_empty() {
        return Err(CliError::config("--L, --repeats and --n must be positive"));
    }
    let model = build_model(&a.model)?;
    let dim = a.model.dim;
    describe(&model, dim);
    let mut rows = Vec::new();
    println!("{:>10} {:>6} {:>10} {:>14}", "n", "L", "seconds", "evals/s");
    for &n in &a.n {
        let locations = Locations::uniform(n, dim, 0.0, 1.0, a.seed)?;
        let mut best = f64::INFINITY;
        for _ in 0..a.repeats {
            let t = Instant::now();
            simulate_with(&model, dim, &locations, a.num_components, a.seed, algorithm(a.model.algorithm))?;
            best = best.min(t.elapsed().as_secs_f64());
        }
        let rate = (n * a.num_components) as f64 / best;
        println!("{n:>10} {:>6} {best:>10.4} {rate:>14.4e}", a.num_components);
        rows.push((n, best, rate));
    }
    if let Some(out) = &a.out {
        let mut w = csv::Writer::from_path(out).map_err(|e| CliError::config(e.to_string()))?;
        let csv_err = |e: csv::Error| CliError::from(Error::Input(e.to_string()));
        w.write_record(["n", "L", "seconds", "evals_per_second"]).map_err(csv_err)?;
        for (n, s, r) in rows {
            w.write_record([n.to_string(), a.num_components.to_string(), format!("{s:?}"), format!("{r:?}")])
                .map_err(csv_err)?;
        }
        w.flush()?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("0:1:3", "nu").unwrap(), [0.0, 0.5, 1.0]);
        assert_eq!(parse_range("2:2:1", "nu").unwrap(), [2.0]);
        for bad in ["0:1", "1:0:3", "0:1:0", "a:1:2"] {
            assert_eq!(parse_range(bad, "nu").unwrap_err().code, EXIT_CONFIG);
        }
    }

    #[test]
    fn error_codes() {
        assert_eq!(CliError::from(Error::InvalidModel("x".into())).code, EXIT_MODEL);
        assert_eq!(CliError::from(Error::Input("x".into())).code, EXIT_CONFIG);
        assert_eq!(CliError::from(Error::Envelope("x".into())).code, EXIT_NUMERIC);
    }

    #[test]
    fn replicate_paths() {
        assert_eq!(replicate_path(Path::new("a/f.csv"), 2, 3), Path::new("a/f-2.csv"));
        assert_eq!(replicate_path(Path::new("f.csv"), 0, 1), Path::new("f.csv"));
    }
}
