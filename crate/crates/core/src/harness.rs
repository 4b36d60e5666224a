//! Experiments that turn predictors and datasets into plot-ready CSV tables:
//! test-size convergence, small-sample bias, metric tables, sparsification
//! curves, plus the run manifest written next to every artifact.
//!
//! Seeds: the convergence test set is `derive_seed(base, [CONVERGENCE, 0])`
//! and its sampling order `[CONVERGENCE, 1]`; bias replicate `r` at size index
//! `k` uses `derive_seed(base, [BIAS, k, r])` for the data and that seed with
//! `[TIE]` for AUSE tie-breaking.

use std::io::Write;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::data::{generate, DatasetKind, LabeledSet, Split};
use crate::error::{Error, Result};
use crate::metrics::{
    evaluate, sparsification_curve, EvalConfig, EvaluationRecord, MetricReport, ReportRow,
    SparsificationConfig, SparsificationCurve,
};
use crate::predictors::{evaluation_records, Predictor};
use crate::rng::{derive_seed, CounterRng, Seed};

const CONVERGENCE: u64 = 0x434f_4e56;
const BIAS: u64 = 0x4249_4153;
const TIE: u64 = 0x5449_4553;

/// Test-set sizes 2^3 ..= 2^16.
pub const STABILITY_SIZES: [usize; 14] = {
    let mut s = [0; 14];
    let mut i = 0;
    while i < 14 {
        s[i] = 1 << (i + 3);
        i += 1;
    }
    s
};

pub const BIAS_REPLICATES: usize = 100;

/// Shortest round-trip decimal; NaN as `nan`.
pub fn fmt_float(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else {
        format!("{v}")
    }
}

fn write_file(path: &Path, body: impl FnOnce(&mut dyn Write) -> std::io::Result<()>) -> Result<()> {
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = std::io::BufWriter::new(file);
    body(&mut w)
        .and_then(|_| w.flush())
        .map_err(|e| Error::io(path, e))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct StabilityRow {
    pub test_size: usize,
    pub report: MetricReport,
}

#[derive(Clone, Debug, PartialEq)]
pub struct StabilityResult {
    pub rows: Vec<StabilityRow>,
}

impl StabilityResult {
    pub const CSV_HEADER: &'static str = "test_size,ause,spearman,nll,ece";

    pub fn row(&self, test_size: usize) -> Option<&MetricReport> {
        self.rows
            .iter()
            .find(|r| r.test_size == test_size)
            .map(|r| &r.report)
    }

    pub fn write_csv_to(&self, w: &mut dyn Write) -> std::io::Result<()> {
        writeln!(w, "{}", Self::CSV_HEADER)?;
        for r in &self.rows {
            let m = &r.report;
            writeln!(
                w,
                "{},{},{},{},{}",
                r.test_size,
                fmt_float(m.ause),
                fmt_float(m.spearman),
                fmt_float(m.nll),
                fmt_float(m.ce)
            )?;
        }
        Ok(())
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        write_file(path, |w| self.write_csv_to(w))
    }
}

fn warn_missing(size: usize, report: &MetricReport) {
    if report.spearman.is_nan() {
        log::warn!("spearman undefined at test size {size}; recorded as nan");
    }
}

/// The 2^16-point convergence test set and the seeded order in which its
/// samples are collected; the subset of size `2^k` is the first `2^k` entries.
pub fn convergence_sample(kind: DatasetKind, base_seed: Seed) -> (LabeledSet, Vec<usize>) {
    let full = *STABILITY_SIZES.last().expect("sizes");
    let test = generate(
        kind,
        Split::Test,
        full,
        derive_seed(base_seed, &[CONVERGENCE, 0]),
    );
    let mut order: Vec<usize> = (0..full).collect();
    CounterRng::derived(base_seed, &[CONVERGENCE, 1]).shuffle(&mut order);
    (test, order)
}

/// Metrics on nested random subsets of one 2^16-point test set (see
/// [`convergence_sample`]), so each subset contains all smaller ones.
pub fn convergence_experiment<P: Predictor + ?Sized>(
    predictor: &P,
    kind: DatasetKind,
    base_seed: Seed,
    cfg: &EvalConfig,
) -> Result<StabilityResult> {
    let (test, order) = convergence_sample(kind, base_seed);
    let records = evaluation_records(predictor, &test)?;
    let permuted: Vec<EvaluationRecord> = order.iter().map(|&i| records[i]).collect();

    let rows = STABILITY_SIZES
        .par_iter()
        .map(|&size| {
            let report = evaluate(&permuted[..size], cfg)?;
            warn_missing(size, &report);
            Ok(StabilityRow {
                test_size: size,
                report,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(StabilityResult { rows })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BiasRow {
    pub test_size: usize,
    /// Mean of each metric over the replicates.
    pub mean: MetricReport,
    pub replicates: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BiasResult {
    pub rows: Vec<BiasRow>,
}

impl BiasResult {
    pub const CSV_HEADER: &'static str = "test_size,mean_ause,mean_spearman,mean_nll,mean_ece";

    pub fn row(&self, test_size: usize) -> Option<&BiasRow> {
        self.rows.iter().find(|r| r.test_size == test_size)
    }

    pub fn write_csv_to(&self, w: &mut dyn Write) -> std::io::Result<()> {
        writeln!(w, "{}", Self::CSV_HEADER)?;
        for r in &self.rows {
            let m = &r.mean;
            writeln!(
                w,
                "{},{},{},{},{}",
                r.test_size,
                fmt_float(m.ause),
                fmt_float(m.spearman),
                fmt_float(m.nll),
                fmt_float(m.ce)
            )?;
        }
        Ok(())
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        write_file(path, |w| self.write_csv_to(w))
    }
}

/// One independent test set of `STABILITY_SIZES[size_index]` points, evaluated.
pub fn bias_replicate<P: Predictor + ?Sized>(
    predictor: &P,
    kind: DatasetKind,
    base_seed: Seed,
    size_index: usize,
    replicate: usize,
    cfg: &EvalConfig,
) -> Result<MetricReport> {
    let size = STABILITY_SIZES[size_index];
    let seed = derive_seed(base_seed, &[BIAS, size_index as u64, replicate as u64]);
    let test = generate(kind, Split::Test, size, seed);
    let records = evaluation_records(predictor, &test)?;
    let cfg = EvalConfig {
        sparsification: SparsificationConfig {
            tie_seed: derive_seed(seed, &[TIE]),
            ..cfg.sparsification
        },
        ..cfg.clone()
    };
    evaluate(&records, &cfg)
}

/// Mean of each metric over `replicates` i.i.d. test sets at every size.
/// A NaN replicate (undefined Spearman) makes that mean NaN.
pub fn bias_experiment<P: Predictor + ?Sized>(
    predictor: &P,
    kind: DatasetKind,
    base_seed: Seed,
    replicates: usize,
    cfg: &EvalConfig,
) -> Result<BiasResult> {
    if replicates == 0 {
        return Err(Error::InvalidArgument("need at least one replicate".into()));
    }
    let jobs: Vec<(usize, usize)> = (0..STABILITY_SIZES.len())
        .flat_map(|k| (0..replicates).map(move |r| (k, r)))
        .collect();
    let reports = jobs
        .par_iter()
        .map(|&(k, r)| bias_replicate(predictor, kind, base_seed, k, r, cfg))
        .collect::<Result<Vec<_>>>()?;

    let rows = reports
        .chunks(replicates)
        .zip(STABILITY_SIZES)
        .map(|(chunk, size)| {
            let n = chunk.len() as f64;
            let mean = |f: fn(&MetricReport) -> f64| chunk.iter().map(f).sum::<f64>() / n;
            let mean = MetricReport {
                ause: mean(|m| m.ause),
                ce: mean(|m| m.ce),
                spearman: mean(|m| m.spearman),
                nll: mean(|m| m.nll),
            };
            warn_missing(size, &mean);
            BiasRow {
                test_size: size,
                mean,
                replicates: chunk.len(),
            }
        })
        .collect();
    Ok(BiasResult { rows })
}

/// One metric row per `(dataset, predictor)` cell, each evaluated on
/// `generate(kind, Test, n_test, seed)`.
pub fn table_experiment(
    cells: &[(DatasetKind, &dyn Predictor)],
    n_test: usize,
    seed: Seed,
    cfg: &EvalConfig,
) -> Result<Vec<ReportRow>> {
    cells
        .par_iter()
        .map(|&(kind, predictor)| {
            let test = generate(kind, Split::Test, n_test, seed);
            let records = evaluation_records(predictor, &test)?;
            Ok(ReportRow {
                dataset: kind.to_string(),
                predictor: predictor.name(),
                report: evaluate(&records, cfg)?,
            })
        })
        .collect()
}

pub fn write_table_csv(rows: &[ReportRow], w: &mut dyn Write) -> std::io::Result<()> {
    writeln!(w, "{}", ReportRow::CSV_HEADER)?;
    for r in rows {
        writeln!(w, "{}", r.to_csv_line())?;
    }
    Ok(())
}

pub fn write_sparsification_csv(
    curve: &SparsificationCurve,
    w: &mut dyn Write,
) -> std::io::Result<()> {
    writeln!(w, "fraction,oracle,sparsification")?;
    for ((a, o), u) in curve
        .alphas
        .iter()
        .zip(&curve.by_oracle)
        .zip(&curve.by_uncertainty)
    {
        writeln!(w, "{},{},{}", fmt_float(*a), fmt_float(*o), fmt_float(*u))?;
    }
    Ok(())
}

/// Sparsification curves of `predictor` on `generate(kind, Test, n_test, seed)`,
/// written to `path` as `fraction,oracle,sparsification`.
pub fn sparsification_emit<P: Predictor + ?Sized>(
    predictor: &P,
    kind: DatasetKind,
    seed: Seed,
    n_test: usize,
    cfg: &SparsificationConfig,
    path: &Path,
) -> Result<SparsificationCurve> {
    let test = generate(kind, Split::Test, n_test, seed);
    let records = evaluation_records(predictor, &test)?;
    let curve = sparsification_curve(&records, cfg)?;
    write_file(path, |w| write_sparsification_csv(&curve, w))?;
    Ok(curve)
}

/// What produced an artifact, with enough detail to produce it again.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    /// Arguments after the program name; replaying them regenerates the artifacts.
    pub argv: Vec<String>,
    pub base_seed: u64,
    pub dataset: Option<DatasetKind>,
    pub predictor: Option<String>,
    pub config: serde_json::Value,
    /// SHA-256 of the compact JSON encoding of `config`.
    pub config_hash: String,
    pub artifacts: Vec<String>,
}

impl RunManifest {
    pub fn new(
        command: &str,
        argv: Vec<String>,
        base_seed: Seed,
        dataset: Option<DatasetKind>,
        predictor: Option<String>,
        config: &impl Serialize,
        artifacts: Vec<String>,
    ) -> Self {
        let config = serde_json::to_value(config).unwrap_or(serde_json::Value::Null);
        let config_hash = hex::encode(Sha256::digest(config.to_string().as_bytes()));
        RunManifest {
            tool: env!("CARGO_PKG_NAME").into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            argv,
            base_seed: base_seed.0,
            dataset,
            predictor,
            config,
            config_hash,
            artifacts,
        }
    }

    /// Manifest location for an artifact: `<artifact>.manifest.json`.
    pub fn path_for(artifact: &Path) -> std::path::PathBuf {
        let mut s = artifact.as_os_str().to_owned();
        s.push(".manifest.json");
        s.into()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("manifest serialises")
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json() + "\n").map_err(|e| Error::io(path, e))
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| Error::Parse {
            line: e.line() as u64,
            message: e.to_string(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::predictors::OraclePredictor;

    #[test]
    fn sizes() {
        assert_eq!(STABILITY_SIZES.len(), 14);
        assert_eq!(STABILITY_SIZES[0], 8);
        assert_eq!(STABILITY_SIZES[13], 65536);
        assert!(STABILITY_SIZES.windows(2).all(|w| w[1] == 2 * w[0]));
    }

    #[test]
    fn nan_formatting() {
        assert_eq!(fmt_float(f64::NAN), "nan");
        assert_eq!(fmt_float(0.1), "0.1");
        assert_eq!(fmt_float(0.0), "0");
    }

    #[test]
    fn manifest_json_round_trip() {
        let m = RunManifest::new(
            "eval",
            vec!["eval".into(), "--seed".into(), "7".into()],
            Seed(7),
            Some(DatasetKind::Multimodal),
            Some("oracle".into()),
            &EvalConfig::default(),
            vec!["out.csv".into()],
        );
        let back: RunManifest = serde_json::from_str(&m.to_json()).unwrap();
        assert_eq!(back, m);
        assert_eq!(m.config_hash.len(), 64);
    }

    #[test]
    fn sparsification_csv_starts_at_one() {
        let p = OraclePredictor::new(DatasetKind::Heteroscedastic);
        let test = generate(DatasetKind::Heteroscedastic, Split::Test, 500, Seed(1));
        let records = evaluation_records(&p, &test).unwrap();
        let curve = sparsification_curve(&records, &SparsificationConfig::default()).unwrap();
        let mut buf = Vec::new();
        write_sparsification_csv(&curve, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("fraction,oracle,sparsification"));
        assert_eq!(lines.next(), Some("0,1,1"));
        assert_eq!(text.lines().count(), 501);
    }
}
