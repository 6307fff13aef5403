//! Field files: CSV with a metadata comment line, or raw little-endian `f64`
//! values next to a `.json` sidecar.

use super::{FieldRealization, Locations};
use crate::models::{CorrelationModel, GHParams, KummerParams, MaternParams, ModelKind};
use crate::Error;
use serde::{Deserialize, Serialize};
use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

/// Plain-data form of a [`CorrelationModel`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum ModelRecord {
    Matern { nu: f64, alpha: f64, sill: f64 },
    Kummer { nu: f64, mu: f64, beta: f64, sill: f64 },
    GaussHyper { nu: f64, mu: f64, l: f64, a: f64, dim: usize, sill: f64 },
}

impl From<&CorrelationModel> for ModelRecord {
    fn from(m: &CorrelationModel) -> Self {
        let sill = m.sill;
        match m.kind {
            ModelKind::Matern(p) => ModelRecord::Matern { nu: p.nu, alpha: p.alpha, sill },
            ModelKind::Kummer(p) => ModelRecord::Kummer { nu: p.nu, mu: p.mu, beta: p.beta, sill },
            ModelKind::GaussHyper(p) => ModelRecord::GaussHyper { nu: p.nu, mu: p.mu, l: p.l, a: p.a, dim: p.dim, sill },
        }
    }
}

impl TryFrom<ModelRecord> for CorrelationModel {
    type Error = Error;

    fn try_from(r: ModelRecord) -> Result<Self, Error> {
        match r {
            ModelRecord::Matern { nu, alpha, sill } => CorrelationModel::matern(MaternParams::new(nu, alpha)?, sill),
            ModelRecord::Kummer { nu, mu, beta, sill } => {
                CorrelationModel::kummer(KummerParams::new(nu, mu, beta)?, sill)
            }
            ModelRecord::GaussHyper { nu, mu, l, a, dim, sill } => {
                CorrelationModel::gauss_hyper(GHParams::new(nu, mu, l, a, dim)?, sill)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldMetadata {
    pub model: ModelRecord,
    pub dim: usize,
    pub n: usize,
    pub num_components: usize,
    pub seed: u64,
    pub sampler: String,
}

impl FieldMetadata {
    pub fn of(field: &FieldRealization) -> Self {
        Self {
            model: ModelRecord::from(&field.model),
            dim: field.locations.dim(),
            n: field.values.len(),
            num_components: field.num_components,
            seed: field.seed,
            sampler: field.sampler.clone(),
        }
    }
}

fn io_err(e: impl std::fmt::Display) -> Error {
    Error::Input(e.to_string())
}

const META_PREFIX: &str = "# metadata: ";

/// Writes `x1,..,xd,value` rows after a `# metadata: {json}` line.
///
/// Floats are printed in shortest round-trip form, so reading back is exact.
pub fn write_csv(field: &FieldRealization, path: &Path) -> Result<(), Error> {
    let mut out = BufWriter::new(fs::File::create(path)?);
    let meta = serde_json::to_string(&FieldMetadata::of(field)).map_err(io_err)?;
    writeln!(out, "{META_PREFIX}{meta}")?;
    let mut w = csv::Writer::from_writer(out);
    let d = field.locations.dim();
    let header: Vec<String> = (1..=d).map(|i| format!("x{i}")).chain(std::iter::once("value".into())).collect();
    w.write_record(&header).map_err(io_err)?;
    for (row, v) in field.locations.rows().zip(&field.values) {
        w.write_record(row.iter().chain(std::iter::once(v)).map(|x| format!("{x:?}"))).map_err(io_err)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv(path: &Path) -> Result<FieldRealization, Error> {
    let mut reader = BufReader::new(fs::File::open(path)?);
    let mut first = String::new();
    reader.read_line(&mut first)?;
    let meta: FieldMetadata = serde_json::from_str(
        first.trim_end().strip_prefix(META_PREFIX).ok_or_else(|| Error::Input("missing metadata line".into()))?,
    )
    .map_err(io_err)?;
    let mut r = csv::Reader::from_reader(reader);
    let d = meta.dim;
    let mut coords = Vec::with_capacity(meta.n * d);
    let mut values = Vec::with_capacity(meta.n);
    for rec in r.records() {
        let rec = rec.map_err(io_err)?;
        if rec.len() != d + 1 {
            return Err(Error::DimensionMismatch { expected: d + 1, got: rec.len() });
        }
        for (k, field) in rec.iter().enumerate() {
            let x: f64 = field.trim().parse().map_err(io_err)?;
            if k < d {
                coords.push(x);
            } else {
                values.push(x);
            }
        }
    }
    assemble(meta, Locations::new(d, coords)?, values)
}

fn assemble(meta: FieldMetadata, locations: Locations, values: Vec<f64>) -> Result<FieldRealization, Error> {
    if values.len() != meta.n || locations.len() != meta.n {
        return Err(Error::Input(format!(
            "metadata says {} values, file has {} values and {} locations",
            meta.n,
            values.len(),
            locations.len()
        )));
    }
    Ok(FieldRealization {
        locations,
        values,
        model: meta.model.try_into()?,
        num_components: meta.num_components,
        seed: meta.seed,
        sampler: meta.sampler,
    })
}

/// `path.json`, the sidecar of a binary values file.
pub fn sidecar_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".json");
    PathBuf::from(s)
}

/// Values as raw little-endian `f64`; locations and metadata go to the sidecar.
pub fn write_binary(field: &FieldRealization, path: &Path) -> Result<(), Error> {
    let mut out = BufWriter::new(fs::File::create(path)?);
    for v in &field.values {
        out.write_all(&v.to_le_bytes())?;
    }
    out.flush()?;
    let side = Sidecar { metadata: FieldMetadata::of(field), locations: field.locations.coords().to_vec() };
    fs::write(sidecar_path(path), serde_json::to_string_pretty(&side).map_err(io_err)?)?;
    Ok(())
}

#[derive(Serialize, Deserialize)]
struct Sidecar {
    metadata: FieldMetadata,
    locations: Vec<f64>,
}

pub fn read_binary(path: &Path) -> Result<FieldRealization, Error> {
    let bytes = fs::read(path)?;
    if bytes.len() % 8 != 0 {
        return Err(Error::Input(format!("{} bytes is not a whole number of f64 values", bytes.len())));
    }
    let values = bytes.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().expect("8-byte chunk"))).collect();
    let side: Sidecar = serde_json::from_str(&fs::read_to_string(sidecar_path(path))?).map_err(io_err)?;
    let locations = Locations::new(side.metadata.dim, side.locations)?;
    assemble(side.metadata, locations, values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::simulate;

    fn field() -> FieldRealization {
        let m = CorrelationModel::kummer(KummerParams::new(0.5, 3.5, 0.1).unwrap(), 1.5).unwrap();
        let locs = Locations::uniform(257, 2, 0.0, 1.0, 4).unwrap();
        simulate(&m, 2, &locs, 64, 8).unwrap()
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let f = field();
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("f.csv");
        write_csv(&f, &p).unwrap();
        let g = read_csv(&p).unwrap();
        assert_eq!(f.values, g.values);
        assert_eq!(f.locations, g.locations);
        assert_eq!(f.model, g.model);
        assert_eq!((f.seed, f.num_components), (g.seed, g.num_components));
    }

    #[test]
    fn binary_round_trip_is_bit_exact() {
        let f = field();
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("f.bin");
        write_binary(&f, &p).unwrap();
        assert_eq!(fs::metadata(&p).unwrap().len(), 8 * 257);
        let g = read_binary(&p).unwrap();
        let bits = |v: &[f64]| v.iter().map(|x| x.to_bits()).collect::<Vec<_>>();
        assert_eq!(bits(&f.values), bits(&g.values));
        assert_eq!(f.locations, g.locations);
        assert_eq!(g.sampler, "beta-prime-mixture");
    }

    #[test]
    fn model_record_round_trip() {
        let m = CorrelationModel::gauss_hyper(GHParams::hypergeometric(0.5, 4.0, 0.3, 3).unwrap(), 2.0).unwrap();
        let r = ModelRecord::from(&m);
        let s = serde_json::to_string(&r).unwrap();
        assert!(s.contains("\"family\":\"gauss-hyper\""));
        let back: ModelRecord = serde_json::from_str(&s).unwrap();
        assert_eq!(CorrelationModel::try_from(back).unwrap(), m);
    }
}
