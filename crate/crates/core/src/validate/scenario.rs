//! Replicated simulation experiments: mean empirical semivariograms against
//! theory and against a dense Cholesky reference.

use super::{CholeskyFactor, PairBinning};
use crate::engine::{build_components_with, synthesize, Locations};
use crate::models::{theoretical_semivariogram, CorrelationModel, GHParams, KummerParams, MaternParams, ModelKind};
use crate::samplers::{FrequencySampler, GHAlgorithm};
use crate::Error;
use rayon::prelude::*;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;
use std::time::{Duration, Instant};

/// A model to simulate, with a name for reports.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub model: CorrelationModel,
    pub dim: usize,
}

impl Scenario {
    pub fn new(name: impl Into<String>, model: CorrelationModel, dim: usize) -> Self {
        Self { name: name.into(), model, dim }
    }
}

fn gw(id: u32, nu: f64, a: f64, mu: f64) -> Scenario {
    let p = GHParams::wendland(nu, mu, a, 2).expect("preset parameters are in range");
    Scenario::new(format!("scenario-{id}"), CorrelationModel::gauss_hyper(p, 1.0).expect("preset is valid"), 2)
}

fn kt(id: u32, nu: f64, beta: f64, mu: f64) -> Scenario {
    let p = KummerParams::new(nu, mu, beta).expect("preset parameters are in range");
    Scenario::new(format!("scenario-{id}"), CorrelationModel::kummer(p, 1.0).expect("preset is valid"), 2)
}

/// Names accepted by [`preset`].
pub const PRESETS: [&str; 3] = ["table1", "table2", "table3"];

/// Built-in scenario sets, all in `d = 2` with unit sill.
///
/// * `table1`: Generalized Wendland rows sampled by the Beta mixture.
/// * `table2`: Generalized Wendland rows that need the Gasper mixture.
/// * `table3`: Kummer-Tricomi rows, including two long-range cases.
pub fn preset(name: &str) -> Result<Vec<Scenario>, Error> {
    Ok(match name {
        "table1" => vec![gw(1, 0.0, 0.1, 6.0), gw(2, 1.0, 0.1, 7.0), gw(3, 0.0, 0.5, 6.0), gw(4, 1.0, 0.5, 7.0)],
        "table2" => vec![gw(5, 0.0, 0.1, 2.0), gw(6, 1.0, 0.1, 3.0), gw(7, 0.0, 0.5, 2.0), gw(8, 1.0, 0.5, 3.0)],
        "table3" => vec![
            kt(9, 0.5, 0.101, 3.5),
            kt(10, 0.5, 0.013, 0.25),
            kt(11, 1.5, 0.059, 3.5),
            kt(12, 1.5, 0.032, 0.25),
            kt(13, 1.5, 0.293, 3.5),
            kt(14, 0.5, 0.064, 0.25),
        ],
        other => {
            return Err(Error::Input(format!("unknown preset `{other}` (expected one of {})", PRESETS.join(", "))))
        }
    })
}

/// Dense reference run on its own, smaller point set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CholeskyConfig {
    pub n: usize,
    pub replicates: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub n: usize,
    pub num_components: usize,
    pub replicates: usize,
    pub seed: u64,
    pub num_bins: usize,
    pub max_dist: f64,
    /// Locations are uniform on `[lo, hi]^d`.
    pub domain: (f64, f64),
    /// Bins with fewer pairs are left out of the deviation and band checks.
    pub min_pairs: u64,
    /// Pass threshold for `max |mean − theory|`, as a multiple of the sill.
    pub tolerance: f64,
    /// Band half-width, in combined standard errors, for the Cholesky comparison.
    pub band_sigmas: f64,
    pub cholesky: Option<CholeskyConfig>,
    pub algorithm: GHAlgorithm,
}

impl ScenarioConfig {
    /// 200 replicates of 2000 points, `L = 1000`, with a 200 × 500 Cholesky reference.
    pub fn desk() -> Self {
        Self {
            n: 2000,
            num_components: 1000,
            replicates: 200,
            seed: 20240101,
            num_bins: 30,
            max_dist: std::f64::consts::SQRT_2 / 2.0,
            domain: (0.0, 1.0),
            min_pairs: 30,
            tolerance: 0.02,
            band_sigmas: 4.0,
            cholesky: Some(CholeskyConfig { n: 500, replicates: 200 }),
            algorithm: GHAlgorithm::Auto,
        }
    }

    /// 1000 replicates of 5000 points.
    pub fn full() -> Self {
        Self { n: 5000, replicates: 1000, ..Self::desk() }
    }

    /// Applies one `key = value` setting.
    ///
    /// Keys: `n`, `L`, `replicates`, `seed`, `bins`, `max_dist`, `lo`, `hi`,
    /// `min_pairs`, `tolerance`, `band_sigmas`, `cholesky_n`,
    /// `cholesky_replicates` (0 disables the reference), `algorithm`.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), Error> {
        fn num<T: std::str::FromStr>(k: &str, v: &str) -> Result<T, Error> {
            v.parse().map_err(|_| Error::Input(format!("bad value for {k}: `{v}`")))
        }
        let chol = self.cholesky.unwrap_or(CholeskyConfig { n: 500, replicates: 200 });
        match key {
            "n" => self.n = num(key, value)?,
            "L" | "num_components" => self.num_components = num(key, value)?,
            "replicates" => self.replicates = num(key, value)?,
            "seed" => self.seed = num(key, value)?,
            "bins" | "num_bins" => self.num_bins = num(key, value)?,
            "max_dist" => self.max_dist = num(key, value)?,
            "lo" => self.domain.0 = num(key, value)?,
            "hi" => self.domain.1 = num(key, value)?,
            "min_pairs" => self.min_pairs = num(key, value)?,
            "tolerance" => self.tolerance = num(key, value)?,
            "band_sigmas" => self.band_sigmas = num(key, value)?,
            "cholesky_n" => self.cholesky = Some(CholeskyConfig { n: num(key, value)?, ..chol }),
            "cholesky_replicates" => {
                let r: usize = num(key, value)?;
                self.cholesky = (r > 0).then_some(CholeskyConfig { replicates: r, ..chol });
            }
            "algorithm" => {
                self.algorithm = match value {
                    "auto" => GHAlgorithm::Auto,
                    "beta" | "beta-mixture" => GHAlgorithm::BetaMixture,
                    "gasper" | "gasper-mixture" => GHAlgorithm::Gasper,
                    _ => return Err(Error::Input(format!("unknown algorithm `{value}`"))),
                }
            }
            _ => return Err(Error::Input(format!("unknown setting `{key}`"))),
        }
        Ok(())
    }

    fn check(&self) -> Result<(), Error> {
        if self.n < 2 || self.num_components == 0 || self.replicates == 0 {
            return Err(Error::Input("a scenario needs n ≥ 2, L ≥ 1 and at least one replicate".into()));
        }
        if let Some(c) = self.cholesky {
            if c.n < 2 || c.replicates < 2 {
                return Err(Error::Input("the Cholesky reference needs n ≥ 2 and at least two replicates".into()));
            }
        }
        Ok(())
    }
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self::desk()
    }
}

/// Parses `key = value` lines (`#` starts a comment) into a scenario and its
/// run settings. Model keys: `family` (`gw`, `gh`, `hyp`, `kummer`,
/// `matern`), `nu`, `mu`, `l`, `a`, `beta`, `alpha`, `sill`, `dim`, `name`.
/// Everything else goes to [`ScenarioConfig::set`] on top of `base`.
pub fn parse_scenario(text: &str, base: ScenarioConfig) -> Result<(Scenario, ScenarioConfig), Error> {
    let mut cfg = base;
    let mut kv = std::collections::BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Input(format!("line {}: expected `key = value`", i + 1)))?;
        let (k, v) = (k.trim(), v.trim());
        match k {
            "family" | "nu" | "mu" | "l" | "a" | "beta" | "alpha" | "sill" | "dim" | "name" => {
                kv.insert(k.to_string(), v.to_string());
            }
            _ => cfg.set(k, v)?,
        }
    }
    let get = |k: &str| -> Result<f64, Error> {
        let v = kv.get(k).ok_or_else(|| Error::Input(format!("missing `{k}`")))?;
        v.parse().map_err(|_| Error::Input(format!("bad value for {k}: `{v}`")))
    };
    let sill = if kv.contains_key("sill") { get("sill")? } else { 1.0 };
    let dim = if kv.contains_key("dim") { get("dim")? as usize } else { 2 };
    let family = kv.get("family").map(String::as_str).unwrap_or("gw");
    let kind = match family {
        "gw" | "wendland" => ModelKind::GaussHyper(GHParams::wendland(get("nu")?, get("mu")?, get("a")?, dim)?),
        "hyp" | "hypergeometric" => {
            ModelKind::GaussHyper(GHParams::hypergeometric(get("nu")?, get("mu")?, get("a")?, dim)?)
        }
        "gh" => ModelKind::GaussHyper(GHParams::new(get("nu")?, get("mu")?, get("l")?, get("a")?, dim)?),
        "kummer" => ModelKind::Kummer(KummerParams::new(get("nu")?, get("mu")?, get("beta")?)?),
        "matern" => ModelKind::Matern(MaternParams::new(get("nu")?, get("alpha")?)?),
        other => return Err(Error::Input(format!("unknown family `{other}`"))),
    };
    let name = kv.get("name").cloned().unwrap_or_else(|| "custom".into());
    Ok((Scenario::new(name, CorrelationModel::new(kind, sill)?, dim), cfg))
}

/// STB against Cholesky on a shared small point set.
#[derive(Debug, Clone)]
pub struct CholeskyComparison {
    pub n: usize,
    pub replicates: usize,
    pub pair_counts: Vec<u64>,
    pub stb_mean: Vec<Option<f64>>,
    pub stb_se: Vec<Option<f64>>,
    pub cholesky_mean: Vec<Option<f64>>,
    pub cholesky_se: Vec<Option<f64>>,
    /// Largest `|Δ| / √(se₁² + se₂²)` over checked bins.
    pub max_z: f64,
    pub jitter: f64,
    pub pass: bool,
}

#[derive(Debug, Clone)]
pub struct ScenarioReport {
    pub scenario: Scenario,
    pub config: ScenarioConfig,
    pub sampler: String,
    pub lag_centers: Vec<f64>,
    pub pair_counts: Vec<u64>,
    /// `values[r][k]`: replicate `r`, bin `k`.
    pub replicates: Vec<Vec<Option<f64>>>,
    pub mean: Vec<Option<f64>>,
    pub sd: Vec<Option<f64>>,
    pub q05: Vec<Option<f64>>,
    pub q50: Vec<Option<f64>>,
    pub q95: Vec<Option<f64>>,
    /// Theoretical semivariogram averaged over the pairs of each bin.
    pub theory: Vec<Option<f64>>,
    pub max_deviation: Option<f64>,
    /// Largest `|mean − theory| / se` over checked bins.
    pub max_theory_z: Option<f64>,
    /// `None` with a single replicate.
    pub band_pass: Option<bool>,
    pub cholesky: Option<CholeskyComparison>,
    pub elapsed: Duration,
}

impl ScenarioReport {
    /// Band test and Cholesky comparison both pass (where run).
    pub fn passed(&self) -> bool {
        self.band_pass.unwrap_or(true) && self.cholesky.as_ref().map_or(true, |c| c.pass)
    }

    /// One row per bin: `bin,lag,pairs,mean,sd,q05,q50,q95,theory[,cholesky_mean,cholesky_se,stb_small_mean,stb_small_se]`.
    pub fn write_csv(&self, path: &Path) -> Result<(), Error> {
        let mut w = csv::Writer::from_path(path).map_err(|e| Error::Input(e.to_string()))?;
        let mut header = vec!["bin", "lag", "pairs", "mean", "sd", "q05", "q50", "q95", "theory"];
        if self.cholesky.is_some() {
            header.extend(["cholesky_mean", "cholesky_se", "stb_small_mean", "stb_small_se"]);
        }
        w.write_record(&header).map_err(|e| Error::Input(e.to_string()))?;
        let f = |v: Option<f64>| v.map(|x| format!("{x:?}")).unwrap_or_default();
        for k in 0..self.lag_centers.len() {
            let mut row = vec![
                k.to_string(),
                format!("{:?}", self.lag_centers[k]),
                self.pair_counts[k].to_string(),
                f(self.mean[k]),
                f(self.sd[k]),
                f(self.q05[k]),
                f(self.q50[k]),
                f(self.q95[k]),
                f(self.theory[k]),
            ];
            if let Some(c) = &self.cholesky {
                row.extend([f(c.cholesky_mean[k]), f(c.cholesky_se[k]), f(c.stb_mean[k]), f(c.stb_se[k])]);
            }
            w.write_record(&row).map_err(|e| Error::Input(e.to_string()))?;
        }
        w.flush()?;
        Ok(())
    }

    /// Per-replicate curves, one row per replicate.
    pub fn write_replicates_csv(&self, path: &Path) -> Result<(), Error> {
        let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
        let header: Vec<String> = (0..self.lag_centers.len()).map(|k| format!("bin{k}")).collect();
        writeln!(out, "replicate,{}", header.join(","))?;
        for (r, vals) in self.replicates.iter().enumerate() {
            let row: Vec<String> = vals.iter().map(|v| v.map(|x| format!("{x:?}")).unwrap_or_default()).collect();
            writeln!(out, "{r},{}", row.join(","))?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn summary(&self) -> String {
        let mut s = String::new();
        let c = &self.config;
        let _ = writeln!(s, "{}: {} (d={})", self.scenario.name, self.scenario.model, self.scenario.dim);
        let _ = writeln!(
            s,
            "  sampler {}, n={}, L={}, replicates={}, seed={}, {:.1}s",
            self.sampler,
            c.n,
            c.num_components,
            c.replicates,
            c.seed,
            self.elapsed.as_secs_f64()
        );
        if let Some(d) = self.max_deviation {
            let verdict = match self.band_pass {
                Some(true) => "PASS",
                Some(false) => "FAIL",
                None => "not tested",
            };
            let _ = writeln!(
                s,
                "  max |mean - theory| = {:.5} (tolerance {:.5}): {verdict}",
                d,
                c.tolerance * self.scenario.model.sill
            );
        }
        if let Some(z) = self.max_theory_z {
            let _ = writeln!(s, "  max |mean - theory| / se = {z:.2}");
        }
        if let Some(ch) = &self.cholesky {
            let _ = writeln!(
                s,
                "  cholesky reference n={} x {}: max z = {:.2} (band {}): {}",
                ch.n,
                ch.replicates,
                ch.max_z,
                c.band_sigmas,
                if ch.pass { "PASS" } else { "FAIL" }
            );
            if ch.jitter > 0.0 {
                let _ = writeln!(s, "  cholesky jitter {:e} x sill", ch.jitter);
            }
        }
        s
    }
}

fn quantile(sorted: &[f64], q: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * q;
    let (lo, hi) = (h.floor() as usize, h.ceil() as usize);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

struct BinStats {
    mean: Vec<Option<f64>>,
    sd: Vec<Option<f64>>,
    se: Vec<Option<f64>>,
    q: [Vec<Option<f64>>; 3],
}

fn bin_stats(curves: &[Vec<Option<f64>>], num_bins: usize) -> BinStats {
    let mut out = BinStats {
        mean: vec![None; num_bins],
        sd: vec![None; num_bins],
        se: vec![None; num_bins],
        q: [vec![None; num_bins], vec![None; num_bins], vec![None; num_bins]],
    };
    for k in 0..num_bins {
        let mut v: Vec<f64> = curves.iter().filter_map(|c| c[k]).collect();
        if v.is_empty() {
            continue;
        }
        let n = v.len() as f64;
        let m = v.iter().sum::<f64>() / n;
        out.mean[k] = Some(m);
        if v.len() > 1 {
            let sd = (v.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (n - 1.0)).sqrt();
            out.sd[k] = Some(sd);
            out.se[k] = Some(sd / n.sqrt());
        }
        v.sort_by(f64::total_cmp);
        for (slot, q) in out.q.iter_mut().zip([0.05, 0.5, 0.95]) {
            slot[k] = Some(quantile(&v, q));
        }
    }
    out
}

fn stb_curves(
    sampler: &FrequencySampler,
    scenario: &Scenario,
    binning: &PairBinning,
    locations: &Locations,
    num_components: usize,
    seeds: impl IndexedParallelIterator<Item = u64>,
) -> Result<Vec<Vec<Option<f64>>>, Error> {
    seeds
        .map(|seed| {
            let comps = build_components_with(sampler, num_components, seed)?;
            let values = synthesize(&comps, locations, scenario.model.sill)?;
            Ok(binning.estimate(&values)?.values)
        })
        .collect()
}

fn cholesky_seed(base: u64, r: usize) -> u64 {
    base.wrapping_add(1 << 40).wrapping_add(r as u64)
}

/// Runs `replicates` STB realizations with seeds `seed + r` on one uniform
/// point set and summarizes their semivariograms.
pub fn run_scenario(scenario: &Scenario, config: &ScenarioConfig) -> Result<ScenarioReport, Error> {
    config.check()?;
    let start = Instant::now();
    let (lo, hi) = config.domain;
    let sampler = FrequencySampler::with_algorithm(&scenario.model, scenario.dim, config.algorithm)?;
    let locations = Locations::uniform(config.n, scenario.dim, lo, hi, config.seed)?;
    let binning = PairBinning::new(&locations, config.num_bins, config.max_dist)?;
    let seeds = (0..config.replicates).into_par_iter().map(|r| config.seed.wrapping_add(r as u64));
    let curves = stb_curves(&sampler, scenario, &binning, &locations, config.num_components, seeds)?;
    let stats = bin_stats(&curves, config.num_bins);
    let theory = binning.pair_average(|h| theoretical_semivariogram(&scenario.model, h))?;

    let checked = |k: usize| binning.pair_counts[k] >= config.min_pairs;
    let max_deviation = (0..config.num_bins)
        .filter(|&k| checked(k))
        .filter_map(|k| Some((stats.mean[k]? - theory[k]?).abs()))
        .reduce(f64::max);
    let max_theory_z = (0..config.num_bins)
        .filter(|&k| checked(k))
        .filter_map(|k| Some((stats.mean[k]? - theory[k]?).abs() / stats.se[k]?))
        .filter(|z| z.is_finite())
        .reduce(f64::max);
    let band_pass = (config.replicates > 1)
        .then(|| max_deviation.map_or(false, |d| d < config.tolerance * scenario.model.sill));

    let cholesky = match config.cholesky {
        Some(cc) if config.replicates > 1 => {
            Some(compare_with_cholesky(scenario, config, cc, &sampler)?)
        }
        _ => None,
    };

    let [q05, q50, q95] = stats.q;
    Ok(ScenarioReport {
        scenario: scenario.clone(),
        config: config.clone(),
        sampler: sampler.name().to_string(),
        lag_centers: binning.lag_centers(),
        pair_counts: binning.pair_counts.clone(),
        replicates: curves,
        mean: stats.mean,
        sd: stats.sd,
        q05,
        q50,
        q95,
        theory,
        max_deviation,
        max_theory_z,
        band_pass,
        cholesky,
        elapsed: start.elapsed(),
    })
}

fn compare_with_cholesky(
    scenario: &Scenario,
    config: &ScenarioConfig,
    cc: CholeskyConfig,
    sampler: &FrequencySampler,
) -> Result<CholeskyComparison, Error> {
    let (lo, hi) = config.domain;
    let locations = Locations::uniform(cc.n, scenario.dim, lo, hi, config.seed.wrapping_add(1))?;
    let binning = PairBinning::new(&locations, config.num_bins, config.max_dist)?;
    let factor = CholeskyFactor::new(&scenario.model, &locations)?;
    let chol: Vec<Vec<Option<f64>>> = (0..cc.replicates)
        .into_par_iter()
        .map(|r| Ok(binning.estimate(&factor.sample(cholesky_seed(config.seed, r)))?.values))
        .collect::<Result<_, Error>>()?;
    let seeds = (0..cc.replicates).into_par_iter().map(|r| config.seed.wrapping_add(r as u64));
    let stb = stb_curves(sampler, scenario, &binning, &locations, config.num_components, seeds)?;
    let a = bin_stats(&stb, config.num_bins);
    let b = bin_stats(&chol, config.num_bins);
    let mut max_z: f64 = 0.0;
    for k in (0..config.num_bins).filter(|&k| binning.pair_counts[k] >= config.min_pairs) {
        if let (Some(m1), Some(m2), Some(s1), Some(s2)) = (a.mean[k], b.mean[k], a.se[k], b.se[k]) {
            let se = (s1 * s1 + s2 * s2).sqrt();
            let z = if se > 0.0 { (m1 - m2).abs() / se } else if m1 == m2 { 0.0 } else { f64::INFINITY };
            max_z = max_z.max(z);
        }
    }
    Ok(CholeskyComparison {
        n: cc.n,
        replicates: cc.replicates,
        pair_counts: binning.pair_counts.clone(),
        stb_mean: a.mean,
        stb_se: a.se,
        cholesky_mean: b.mean,
        cholesky_se: b.se,
        max_z,
        jitter: factor.jitter,
        pass: max_z <= config.band_sigmas,
    })
}
