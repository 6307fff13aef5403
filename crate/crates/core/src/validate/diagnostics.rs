//! Sampler diagnostics: envelope constants, acceptance rates, and a KS check
//! of sampled radii against the reference law.

use super::stats::{ks_one_sample, TestResult};
use super::reference_radius_law;
use crate::models::{gh_classify_region, CorrelationModel, ModelKind};
use crate::samplers::{BesselPowerSampler, FrequencySampler, GHAlgorithm, RngStream};
use crate::Error;
use std::fmt::Write as _;
use std::path::Path;

/// Constants and rates of one rejection stage.
#[derive(Debug, Clone, PartialEq)]
pub struct RejectionStats {
    /// `universal-T`, `gasper-mixture`, or `gasper-component-<n>`.
    pub label: String,
    pub t0: Option<f64>,
    pub m1: Option<f64>,
    pub m2: Option<f64>,
    pub predicted_acceptance: Option<f64>,
    pub measured_acceptance: f64,
    pub draws: usize,
}

impl RejectionStats {
    fn measure(label: String, s: &BesselPowerSampler, draws: usize, stream: RngStream) -> Result<Self, Error> {
        let mut rng = stream.generator();
        let mut proposals = 0u64;
        for _ in 0..draws {
            proposals += s.sample(&mut rng)?.1;
        }
        let e = &s.envelope;
        Ok(Self {
            label,
            t0: Some(e.t0),
            m1: Some(e.m1),
            m2: Some(e.m2),
            predicted_acceptance: Some(e.predicted_acceptance()),
            measured_acceptance: draws as f64 / proposals as f64,
            draws,
        })
    }
}

#[derive(Debug, Clone)]
pub struct SamplerDiagnostics {
    pub model: CorrelationModel,
    pub dim: usize,
    pub sampler: String,
    /// GH region class, if the model is GH.
    pub region: Option<String>,
    /// Empty for samplers without a rejection step.
    pub stages: Vec<RejectionStats>,
    /// KS test of sampled radii; `None` where no reference density exists.
    pub ks: Option<TestResult>,
    pub ks_draws: usize,
    pub notes: Vec<String>,
}

/// Gasper components reported individually.
pub const REPORTED_COMPONENTS: [usize; 7] = [0, 1, 2, 5, 10, 20, 50];

/// Runs `draws` radius draws (for KS and the mixture rate) and `stage_draws`
/// draws per reported rejection stage.
pub fn sampler_diagnostics(
    model: &CorrelationModel,
    dim: usize,
    algorithm: GHAlgorithm,
    draws: usize,
    stage_draws: usize,
    seed: u64,
) -> Result<SamplerDiagnostics, Error> {
    let sampler = FrequencySampler::with_algorithm(model, dim, algorithm)?;
    let mut stages = Vec::new();
    let mut notes = Vec::new();
    let mut rng = RngStream::new(seed, 0).generator();
    let mut radii = Vec::with_capacity(draws);
    match &sampler {
        FrequencySampler::Matern(..) | FrequencySampler::Kummer(..) => {
            notes.push("no rejection stage: exact Gaussian scale mixture".into());
            for _ in 0..draws {
                radii.push(sampler.sample(&mut rng)?.radius());
            }
        }
        FrequencySampler::BetaMixture(s) => {
            let mut proposals = 0;
            for _ in 0..draws {
                let (r, k) = s.sample_radius(&mut rng)?;
                radii.push(r);
                proposals += k;
            }
            let mut st = RejectionStats::measure("universal-T".into(), &s.t_sampler, stage_draws, RngStream::new(seed, 1))?;
            if draws > 0 {
                st.measured_acceptance = draws as f64 / proposals as f64;
                st.draws = draws;
            }
            stages.push(st);
        }
        FrequencySampler::Gasper(s) => {
            let mut proposals = 0;
            for _ in 0..draws {
                let (r, _, k) = s.sample_radius(&mut rng)?;
                radii.push(r);
                proposals += k;
            }
            if draws > 0 {
                stages.push(RejectionStats {
                    label: "gasper-mixture".into(),
                    t0: None,
                    m1: None,
                    m2: None,
                    predicted_acceptance: None,
                    measured_acceptance: draws as f64 / proposals as f64,
                    draws,
                });
            }
            for (i, &n) in REPORTED_COMPONENTS.iter().enumerate().filter(|(_, &n)| n < s.table.len()) {
                let stream = RngStream::new(seed, 2 + i as u64);
                stages.push(RejectionStats::measure(format!("gasper-component-{n}"), s.component(n)?, stage_draws, stream)?);
            }
            notes.push(format!(
                "{} mixture components, truncation mass {:.3e}",
                s.table.len(),
                s.table.truncation_mass
            ));
        }
    }
    let law = match model.kind {
        ModelKind::Kummer(p) if p.mu <= dim as f64 / 2.0 => {
            notes.push("long-range Kummer: no spectral density, KS skipped".into());
            None
        }
        _ => Some(reference_radius_law(model, dim)?),
    };
    let ks = match (&law, radii.is_empty()) {
        (Some(law), false) => Some(ks_one_sample(&radii, |r| law.cdf(r))),
        _ => None,
    };
    let region = match model.kind {
        ModelKind::GaussHyper(p) => Some(gh_classify_region(&p).as_str().to_string()),
        _ => None,
    };
    Ok(SamplerDiagnostics {
        model: *model,
        dim,
        sampler: sampler.name().to_string(),
        region,
        stages,
        ks,
        ks_draws: radii.len(),
        notes,
    })
}

impl SamplerDiagnostics {
    /// Columns `stage,t0,m1,m2,predicted_acceptance,measured_acceptance,draws`,
    /// with a final `radius-ks` row carrying the KS statistic in `m1` and its
    /// p-value in `m2`.
    pub fn write_csv(&self, path: &Path) -> Result<(), Error> {
        let mut w = csv::Writer::from_path(path).map_err(|e| Error::Input(e.to_string()))?;
        let f = |v: Option<f64>| v.map(|x| format!("{x:?}")).unwrap_or_default();
        let err = |e: csv::Error| Error::Input(e.to_string());
        w.write_record(["stage", "t0", "m1", "m2", "predicted_acceptance", "measured_acceptance", "draws", "ks_statistic", "ks_p_value"])
            .map_err(err)?;
        for s in &self.stages {
            w.write_record([
                s.label.clone(),
                f(s.t0),
                f(s.m1),
                f(s.m2),
                f(s.predicted_acceptance),
                format!("{:?}", s.measured_acceptance),
                s.draws.to_string(),
                String::new(),
                String::new(),
            ])
            .map_err(err)?;
        }
        if let Some(ks) = self.ks {
            let row = ["radius-ks".to_string(), String::new(), String::new(), String::new(), String::new(), String::new(),
                self.ks_draws.to_string(), format!("{:?}", ks.statistic), format!("{:?}", ks.p_value)];
            w.write_record(row).map_err(err)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn summary(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "model: {} (d={})", self.model, self.dim);
        if let Some(r) = &self.region {
            let _ = writeln!(s, "region: {r}");
        }
        let _ = writeln!(s, "sampler: {}", self.sampler);
        for st in &self.stages {
            let _ = write!(s, "  {:<22} acceptance {:.3}", st.label, st.measured_acceptance);
            if let (Some(t0), Some(p)) = (st.t0, st.predicted_acceptance) {
                let _ = write!(s, " (predicted {p:.3}, t0 = {t0:.4})");
            }
            let _ = writeln!(s);
        }
        if let Some(ks) = self.ks {
            let _ = writeln!(s, "  radius KS over {} draws: D = {:.5}, p = {:.4}", self.ks_draws, ks.statistic, ks.p_value);
        }
        for n in &self.notes {
            let _ = writeln!(s, "  note: {n}");
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{GHParams, MaternParams};

    #[test]
    fn matern_has_no_rejection_stage() {
        let m = CorrelationModel::matern(MaternParams::new(1.0, 0.3).unwrap(), 1.0).unwrap();
        let d = sampler_diagnostics(&m, 2, GHAlgorithm::Auto, 5000, 0, 1).unwrap();
        assert!(d.stages.is_empty());
        assert!(d.summary().contains("no rejection stage"));
        assert!(d.ks.unwrap().p_value > 0.001);
    }

    #[test]
    fn gasper_reports_components() {
        let m = CorrelationModel::gauss_hyper(GHParams::wendland(1.0, 3.0, 0.5, 2).unwrap(), 1.0).unwrap();
        let d = sampler_diagnostics(&m, 2, GHAlgorithm::Auto, 2000, 2000, 3).unwrap();
        assert_eq!(d.sampler, "gasper-mixture");
        assert_eq!(d.stages[0].label, "gasper-mixture");
        assert!(d.stages.iter().any(|s| s.label == "gasper-component-0"));
        let dir = tempfile::tempdir().unwrap();
        d.write_csv(&dir.path().join("d.csv")).unwrap();
    }
}
