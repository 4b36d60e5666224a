//! Uncertainty metrics over per-sample evaluation records: MAE, sparsification
//! curves and AUSE, PIT calibration error, Spearman rank correlation, and NLL.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::dist::Predictive;
use crate::error::{Error, Result};
use crate::rng::{CounterRng, Seed};

/// What a predictor said about one sample, and how that played out.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EvaluationRecord {
    pub prediction: f64,
    pub abs_error: f64,
    pub uncertainty: f64,
    pub log_density: f64,
    /// Predictive CDF at the observed target.
    pub pit: f64,
}

impl EvaluationRecord {
    /// Point prediction is the distribution mean, uncertainty its variance.
    pub fn from_prediction(dist: &Predictive, y: f64) -> Self {
        let prediction = dist.mean();
        EvaluationRecord {
            prediction,
            abs_error: (y - prediction).abs(),
            uncertainty: dist.variance(),
            log_density: dist.log_density(y),
            pit: dist.cdf(y).clamp(0.0, 1.0),
        }
    }
}

fn nonempty<T>(items: &[T], what: &'static str) -> Result<()> {
    if items.is_empty() {
        Err(Error::Empty { what })
    } else {
        Ok(())
    }
}

pub fn mae(records: &[EvaluationRecord]) -> Result<f64> {
    nonempty(records, "mae")?;
    Ok(records.iter().map(|r| r.abs_error).sum::<f64>() / records.len() as f64)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SparsificationConfig {
    /// Number of removal fractions; `None` removes one sample per step (K = N).
    pub grid_size: Option<usize>,
    /// Seeds the shuffle that breaks ties between equal uncertainties.
    pub tie_seed: Seed,
}

impl Default for SparsificationConfig {
    fn default() -> Self {
        SparsificationConfig {
            grid_size: None,
            tie_seed: Seed(0),
        }
    }
}

/// Normalised MAE of the retained set after removing a fraction `alpha` of the
/// samples, largest uncertainty first (`by_uncertainty`) or largest error
/// first (`by_oracle`).
#[derive(Clone, Debug, PartialEq)]
pub struct SparsificationCurve {
    pub alphas: Vec<f64>,
    pub by_uncertainty: Vec<f64>,
    pub by_oracle: Vec<f64>,
}

impl SparsificationCurve {
    /// Left Riemann sum of `by_uncertainty - by_oracle` over the alpha grid.
    pub fn area(&self) -> f64 {
        let k = self.alphas.len() as f64;
        self.by_uncertainty
            .iter()
            .zip(&self.by_oracle)
            .map(|(u, o)| u - o)
            .sum::<f64>()
            / k
    }
}

/// Mean of `errors[r..]` over the mean of all errors, for each requested `r`.
/// A set whose errors are all zero yields ones.
fn normalised_retained_means(errors_in_removal_order: &[f64], removed: &[usize]) -> Vec<f64> {
    let n = errors_in_removal_order.len();
    let mut suffix = vec![0.0; n + 1];
    for i in (0..n).rev() {
        suffix[i] = suffix[i + 1] + errors_in_removal_order[i];
    }
    let total = suffix[0] / n as f64;
    removed
        .iter()
        .map(|&r| {
            if total > 0.0 {
                suffix[r] / (n - r) as f64 / total
            } else {
                1.0
            }
        })
        .collect()
}

pub fn sparsification_curve(
    records: &[EvaluationRecord],
    cfg: &SparsificationConfig,
) -> Result<SparsificationCurve> {
    nonempty(records, "sparsification curve")?;
    let n = records.len();
    let k = cfg.grid_size.unwrap_or(n);
    if k == 0 || k > n {
        return Err(Error::InvalidArgument(format!(
            "sparsification grid size {k} must be in 1..={n}"
        )));
    }
    let removed: Vec<usize> = (0..k).map(|i| i * n / k).collect();
    let alphas: Vec<f64> = (0..k).map(|i| i as f64 / k as f64).collect();

    let mut order: Vec<usize> = (0..n).collect();
    CounterRng::new(cfg.tie_seed).shuffle(&mut order);
    order.sort_by(|&a, &b| records[b].uncertainty.total_cmp(&records[a].uncertainty));
    let by_unc: Vec<f64> = order.iter().map(|&i| records[i].abs_error).collect();

    let mut by_err: Vec<f64> = records.iter().map(|r| r.abs_error).collect();
    by_err.sort_by(|a, b| b.total_cmp(a));

    Ok(SparsificationCurve {
        alphas,
        by_uncertainty: normalised_retained_means(&by_unc, &removed),
        by_oracle: normalised_retained_means(&by_err, &removed),
    })
}

/// Area under the sparsification error curve.
pub fn ause(records: &[EvaluationRecord], cfg: &SparsificationConfig) -> Result<f64> {
    Ok(sparsification_curve(records, cfg)?.area())
}

/// Fraction of PIT values at or below `p`.
pub fn empirical_frequency(pits: &[f64], p: f64) -> Result<f64> {
    nonempty(pits, "empirical frequency")?;
    Ok(pits.iter().filter(|&&v| v <= p).count() as f64 / pits.len() as f64)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WeightMode {
    /// `w_j = p_hat_j / N`.
    Frequency,
    /// `w_j = 1 / M`.
    Uniform,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CalibrationConfig {
    thresholds: Vec<f64>,
    pub weights: WeightMode,
}

impl CalibrationConfig {
    pub const DEFAULT_THRESHOLDS: usize = 100;

    pub fn new(thresholds: Vec<f64>, weights: WeightMode) -> Result<Self> {
        if thresholds.is_empty() {
            return Err(Error::InvalidArgument("need at least one threshold".into()));
        }
        if thresholds.iter().any(|p| !(0.0..=1.0).contains(p)) {
            return Err(Error::InvalidArgument(
                "thresholds must lie in [0, 1]".into(),
            ));
        }
        if thresholds.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidArgument(
                "thresholds must be strictly increasing".into(),
            ));
        }
        Ok(CalibrationConfig {
            thresholds,
            weights,
        })
    }

    /// `m` thresholds `j / (m - 1)` covering [0, 1]; a single threshold sits at 0.5.
    pub fn evenly_spaced(m: usize, weights: WeightMode) -> Result<Self> {
        let thresholds = match m {
            0 => vec![],
            1 => vec![0.5],
            _ => (0..m).map(|j| j as f64 / (m - 1) as f64).collect(),
        };
        CalibrationConfig::new(thresholds, weights)
    }

    pub fn thresholds(&self) -> &[f64] {
        &self.thresholds
    }
}

impl Default for CalibrationConfig {
    fn default() -> Self {
        CalibrationConfig::evenly_spaced(Self::DEFAULT_THRESHOLDS, WeightMode::Frequency)
            .expect("default thresholds are valid")
    }
}

/// `sum_j w_j (p_j - p_hat_j)^2`.
pub fn calibration_error(pits: &[f64], cfg: &CalibrationConfig) -> Result<f64> {
    nonempty(pits, "calibration error")?;
    let mut sorted = pits.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let m = cfg.thresholds.len() as f64;
    Ok(cfg
        .thresholds
        .iter()
        .map(|&p| {
            let p_hat = sorted.partition_point(|&v| v <= p) as f64 / n;
            let w = match cfg.weights {
                WeightMode::Frequency => p_hat / n,
                WeightMode::Uniform => 1.0 / m,
            };
            w * (p - p_hat).powi(2)
        })
        .sum())
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TieMode {
    /// `1 + #{j : x_j < x_i}`; tied values share the lowest rank.
    #[default]
    Min,
    /// Tied values share the mean of the ranks they span.
    Average,
}

pub fn rank(values: &[f64], mode: TieMode) -> Vec<f64> {
    let n = values.len();
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; n];
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && values[idx[end]].total_cmp(&values[idx[start]]) == Ordering::Equal {
            end += 1;
        }
        let r = match mode {
            TieMode::Min => (start + 1) as f64,
            TieMode::Average => (start + 1 + end) as f64 / 2.0,
        };
        for &i in &idx[start..end] {
            ranks[i] = r;
        }
        start = end;
    }
    ranks
}

fn pearson(a: &[f64], b: &[f64]) -> Result<f64> {
    let n = a.len() as f64;
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let (mut cov, mut va, mut vb) = (0.0, 0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        let (dx, dy) = (x - ma, y - mb);
        cov += dx * dy;
        va += dx * dx;
        vb += dy * dy;
    }
    if va == 0.0 || vb == 0.0 {
        return Err(Error::ConstantRanks);
    }
    Ok((cov / (va.sqrt() * vb.sqrt())).clamp(-1.0, 1.0))
}

/// Pearson correlation of the rank sequences of `a` and `b`.
pub fn spearman(a: &[f64], b: &[f64], mode: TieMode) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    if a.len() < 2 {
        return Err(Error::TooFewSamples(a.len()));
    }
    pearson(&rank(a, mode), &rank(b, mode))
}

/// Mean negative log density per sample.
pub fn nll(records: &[EvaluationRecord]) -> Result<f64> {
    nonempty(records, "nll")?;
    Ok(-records.iter().map(|r| r.log_density).sum::<f64>() / records.len() as f64)
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct EvalConfig {
    pub sparsification: SparsificationConfig,
    pub calibration: CalibrationConfig,
    pub tie_mode: TieMode,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    pub ause: f64,
    pub ce: f64,
    /// NaN when every uncertainty (or every error) is identical.
    pub spearman: f64,
    pub nll: f64,
}

/// All four metrics. A constant rank sequence makes Spearman NaN (with a
/// warning) instead of failing the whole report.
pub fn evaluate(records: &[EvaluationRecord], cfg: &EvalConfig) -> Result<MetricReport> {
    nonempty(records, "evaluate")?;
    let uncertainties: Vec<f64> = records.iter().map(|r| r.uncertainty).collect();
    let errors: Vec<f64> = records.iter().map(|r| r.abs_error).collect();
    let spearman = match spearman(&uncertainties, &errors, cfg.tie_mode) {
        Ok(rho) => rho,
        Err(Error::ConstantRanks) => {
            log::warn!(
                "spearman undefined on {} records (constant ranks); reporting nan",
                records.len()
            );
            f64::NAN
        }
        Err(e) => return Err(e),
    };
    let pits: Vec<f64> = records.iter().map(|r| r.pit).collect();
    Ok(MetricReport {
        ause: ause(records, &cfg.sparsification)?,
        ce: calibration_error(&pits, &cfg.calibration)?,
        spearman,
        nll: nll(records)?,
    })
}

/// `%g`-style formatting with `digits` significant digits; NaN prints as `nan`.
pub fn format_significant(v: f64, digits: usize) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return "0".into();
    }
    let digits = digits.max(1);
    // round first so that e.g. 9.999996 moves to the next decade
    let sci = format!("{:.*e}", digits - 1, v);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    let trim = |s: String| -> String {
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    };
    if exp < -5 || exp >= digits as i32 {
        format!("{}e{}", trim(mantissa.to_string()), exp)
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim(format!("{:.*}", decimals, v))
    }
}

/// One line of a metrics table.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReportRow {
    pub dataset: String,
    pub predictor: String,
    pub report: MetricReport,
}

impl ReportRow {
    pub const CSV_HEADER: &'static str = "dataset,predictor,ause,ce,spearman,nll";

    pub fn to_csv_line(&self) -> String {
        let r = &self.report;
        format!(
            "{},{},{},{},{},{}",
            self.dataset,
            self.predictor,
            format_significant(r.ause, 6),
            format_significant(r.ce, 6),
            format_significant(r.spearman, 6),
            format_significant(r.nll, 6),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn recs(errors: &[f64], uncertainties: &[f64]) -> Vec<EvaluationRecord> {
        errors
            .iter()
            .zip(uncertainties)
            .map(|(&e, &u)| EvaluationRecord {
                prediction: 0.0,
                abs_error: e,
                uncertainty: u,
                log_density: 0.0,
                pit: 0.5,
            })
            .collect()
    }

    fn close_all(a: &[f64], b: &[f64], tol: f64) {
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(b) {
            assert!((x - y).abs() <= tol, "{a:?} vs {b:?}");
        }
    }

    #[test]
    fn mae_values() {
        assert_eq!(mae(&recs(&[1.0, 2.0, 3.0], &[0.0; 3])).unwrap(), 2.0);
        assert_eq!(mae(&recs(&[0.0; 4], &[1.0; 4])).unwrap(), 0.0);
        assert!(matches!(mae(&[]), Err(Error::Empty { .. })));
    }

    #[test]
    fn hand_enumerated_curves() {
        let cfg = SparsificationConfig::default();
        let c = sparsification_curve(&recs(&[4.0, 3.0, 2.0, 1.0], &[4.0, 3.0, 2.0, 1.0]), &cfg)
            .unwrap();
        close_all(&c.alphas, &[0.0, 0.25, 0.5, 0.75], 0.0);
        close_all(&c.by_uncertainty, &[1.0, 0.8, 0.6, 0.4], 1e-15);
        close_all(&c.by_oracle, &[1.0, 0.8, 0.6, 0.4], 1e-15);
        assert_eq!(c.area(), 0.0);

        let r = recs(&[4.0, 3.0, 2.0, 1.0], &[1.0, 2.0, 3.0, 4.0]);
        let c = sparsification_curve(&r, &cfg).unwrap();
        close_all(&c.by_uncertainty, &[1.0, 1.2, 1.4, 1.6], 1e-15);
        assert!((ause(&r, &cfg).unwrap() - 0.6).abs() < 1e-15);
    }

    #[test]
    fn coarse_grid() {
        let r = recs(&[4.0, 3.0, 2.0, 1.0], &[1.0, 2.0, 3.0, 4.0]);
        let cfg = SparsificationConfig {
            grid_size: Some(2),
            ..Default::default()
        };
        let c = sparsification_curve(&r, &cfg).unwrap();
        close_all(&c.alphas, &[0.0, 0.5], 0.0);
        close_all(&c.by_uncertainty, &[1.0, 1.4], 1e-15);
        close_all(&c.by_oracle, &[1.0, 0.6], 1e-15);
        assert!(sparsification_curve(
            &r,
            &SparsificationConfig {
                grid_size: Some(5),
                ..cfg
            }
        )
        .is_err());
        assert!(sparsification_curve(
            &r,
            &SparsificationConfig {
                grid_size: Some(0),
                ..cfg
            }
        )
        .is_err());
    }

    #[test]
    fn ause_zero_when_uncertainty_is_error() {
        let e = [0.3, 1.2, 0.05, 0.7, 2.2, 0.01];
        assert!(
            ause(&recs(&e, &e), &SparsificationConfig::default())
                .unwrap()
                .abs()
                < 1e-15
        );
        assert!(ause(&[], &SparsificationConfig::default()).is_err());
    }

    #[test]
    fn tie_shuffle_is_seeded() {
        let e: Vec<f64> = (0..50).map(|i| (i * 7 % 13) as f64).collect();
        let r = recs(&e, &[1.0; 50]);
        let a = |s| {
            ause(
                &r,
                &SparsificationConfig {
                    grid_size: None,
                    tie_seed: Seed(s),
                },
            )
            .unwrap()
        };
        assert_eq!(a(1), a(1));
        assert_ne!(a(1), a(2));
    }

    #[test]
    fn empirical_frequency_values() {
        let pits = [0.1, 0.5, 0.9];
        assert!((empirical_frequency(&pits, 0.5).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(empirical_frequency(&pits, 1.0).unwrap(), 1.0);
        assert_eq!(empirical_frequency(&pits, 0.0).unwrap(), 0.0);
        assert!(empirical_frequency(&[], 0.5).is_err());
    }

    #[test]
    fn calibration_error_values() {
        // p_hat = 0.7 at p = 0.5
        let pits = [0.1, 0.2, 0.3, 0.4, 0.45, 0.46, 0.5, 0.6, 0.8, 0.9];
        let cfg = CalibrationConfig::evenly_spaced(1, WeightMode::Uniform).unwrap();
        assert!((calibration_error(&pits, &cfg).unwrap() - 0.04).abs() < 1e-15);

        // p_hat_j == p_j exactly: thresholds 0, 0.25, .., 1 with pits on the grid midpoints
        let pits = [0.1, 0.4, 0.6, 0.9];
        let cfg =
            CalibrationConfig::new(vec![0.0, 0.25, 0.5, 0.75, 1.0], WeightMode::Frequency).unwrap();
        assert_eq!(calibration_error(&pits, &cfg).unwrap(), 0.0);
        assert!(calibration_error(&[], &cfg).is_err());
    }

    #[test]
    fn frequency_weights_scale_with_frequency_over_n() {
        let pits = [0.9, 0.95];
        let cfg = CalibrationConfig::new(vec![0.5, 1.0], WeightMode::Frequency).unwrap();
        // j=1: p_hat 0 => weight 0; j=2: p_hat 1 => weight 1/2, error 0
        assert_eq!(calibration_error(&pits, &cfg).unwrap(), 0.0);
        let cfg = CalibrationConfig::new(vec![0.92, 1.0], WeightMode::Frequency).unwrap();
        // p_hat = 0.5 at 0.92: (0.5/2) * 0.42^2
        assert!((calibration_error(&pits, &cfg).unwrap() - 0.25 * 0.42f64.powi(2)).abs() < 1e-15);
    }

    #[test]
    fn calibration_config_validation() {
        assert!(CalibrationConfig::new(vec![], WeightMode::Frequency).is_err());
        assert!(CalibrationConfig::new(vec![0.5, 0.5], WeightMode::Frequency).is_err());
        assert!(CalibrationConfig::new(vec![0.2, 1.5], WeightMode::Frequency).is_err());
        let d = CalibrationConfig::default();
        assert_eq!(d.thresholds().len(), 100);
        assert_eq!(d.thresholds()[0], 0.0);
        assert_eq!(d.thresholds()[99], 1.0);
    }

    #[test]
    fn ranks() {
        assert_eq!(rank(&[10.0, 20.0, 30.0], TieMode::Min), vec![1.0, 2.0, 3.0]);
        assert_eq!(rank(&[30.0, 10.0, 20.0], TieMode::Min), vec![3.0, 1.0, 2.0]);
        assert_eq!(rank(&[5.0, 5.0, 7.0], TieMode::Min), vec![1.0, 1.0, 3.0]);
        assert_eq!(
            rank(&[5.0, 5.0, 7.0], TieMode::Average),
            vec![1.5, 1.5, 3.0]
        );
        assert_eq!(
            rank(&[2.0, 1.0, 2.0, 2.0], TieMode::Average),
            vec![3.0, 1.0, 3.0, 3.0]
        );
        assert!(rank(&[], TieMode::Min).is_empty());
    }

    #[test]
    fn spearman_values() {
        let a = [0.3, 1.0, -2.0, 4.0];
        assert!((spearman(&a, &a, TieMode::Min).unwrap() - 1.0).abs() < 1e-15);
        let b = [1.0, 2.0, 3.0, 4.0, 5.0];
        let rev = [5.0, 4.0, 3.0, 2.0, 1.0];
        assert!((spearman(&b, &rev, TieMode::Min).unwrap() + 1.0).abs() < 1e-15);
        let r = spearman(&[1.0, 2.0, 3.0], &[3.0, 1.0, 2.0], TieMode::Min).unwrap();
        assert!((r + 0.5).abs() < 1e-15);
    }

    #[test]
    fn spearman_errors() {
        assert!(matches!(
            spearman(&[1.0], &[1.0], TieMode::Min),
            Err(Error::TooFewSamples(1))
        ));
        assert!(matches!(
            spearman(&[1.0, 1.0, 1.0], &[1.0, 2.0, 3.0], TieMode::Min),
            Err(Error::ConstantRanks)
        ));
        assert!(matches!(
            spearman(&[1.0, 2.0], &[1.0, 2.0, 3.0], TieMode::Min),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn spearman_tie_modes_differ() {
        let a = [5.0, 5.0, 7.0, 1.0];
        let b = [1.0, 2.0, 3.0, 4.0];
        let min = spearman(&a, &b, TieMode::Min).unwrap();
        let avg = spearman(&a, &b, TieMode::Average).unwrap();
        assert!((min - avg).abs() > 1e-6);
    }

    #[test]
    fn nll_values() {
        let rec = EvaluationRecord::from_prediction(&crate::dist::Gaussian::standard().into(), 0.0);
        assert!((nll(&[rec]).unwrap() - 0.918_938_5).abs() < 1e-7);
        assert!(nll(&[]).is_err());
    }

    #[test]
    fn evaluate_perfect_information() {
        let n = 1000;
        let errors: Vec<f64> = (0..n).map(|i| ((i * 37) % n) as f64 / n as f64).collect();
        // PITs sit mid-bin between the 100 thresholds j/99, ten per bin
        let records: Vec<EvaluationRecord> = (0..n)
            .map(|i| EvaluationRecord {
                prediction: 0.0,
                abs_error: errors[i],
                uncertainty: errors[i],
                log_density: -1.0,
                pit: ((i / 10) as f64 + 0.5) / 99.0,
            })
            .collect();
        let cfg = EvalConfig {
            calibration: CalibrationConfig::evenly_spaced(100, WeightMode::Uniform).unwrap(),
            ..Default::default()
        };
        let r = evaluate(&records, &cfg).unwrap();
        assert!(r.ause.abs() < 1e-15);
        assert!(r.ce < 1e-4, "{}", r.ce);
        assert_eq!(r.spearman, 1.0);
        assert_eq!(r.nll, 1.0);
    }

    #[test]
    fn evaluate_single_record_fails() {
        let r = recs(&[1.0], &[1.0]);
        assert!(matches!(
            evaluate(&r, &EvalConfig::default()),
            Err(Error::TooFewSamples(1))
        ));
    }

    #[test]
    fn evaluate_constant_uncertainty_reports_nan_spearman() {
        let r = recs(&[1.0, 2.0, 3.0], &[0.5; 3]);
        let rep = evaluate(&r, &EvalConfig::default()).unwrap();
        assert!(rep.spearman.is_nan());
        assert!(rep.ause.is_finite());
    }

    #[test]
    fn significant_digit_formatting() {
        assert_eq!(format_significant(0.591734567, 6), "0.591735");
        assert_eq!(format_significant(-0.8836, 6), "-0.8836");
        assert_eq!(format_significant(2.0, 6), "2");
        assert_eq!(format_significant(123456789.0, 6), "1.23457e8");
        assert_eq!(format_significant(1.234e-7, 6), "1.234e-7");
        assert_eq!(format_significant(0.000123456789, 6), "0.000123457");
        assert_eq!(format_significant(9.9999996, 6), "10");
        assert_eq!(format_significant(f64::NAN, 6), "nan");
        assert_eq!(format_significant(0.0, 6), "0");
    }

    #[test]
    fn report_row_csv() {
        let row = ReportRow {
            dataset: "homoscedastic".into(),
            predictor: "oracle".into(),
            report: MetricReport {
                ause: 0.5917,
                ce: 0.00031,
                spearman: f64::NAN,
                nll: -0.88364659,
            },
        };
        assert_eq!(
            row.to_csv_line(),
            "homoscedastic,oracle,0.5917,0.00031,nan,-0.883647"
        );
    }
}
