//! The calibration error and Spearman correlation of one predictor under
//! each weighting and tie-handling option.

use uqbench::data::{generate, DatasetKind, Split};
use uqbench::metrics::{calibration_error, spearman, CalibrationConfig, TieMode, WeightMode};
use uqbench::predictors::{evaluation_records, OraclePredictor, Rescaled};
use uqbench::rng::Seed;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let kind = DatasetKind::Heteroscedastic;
    let test = generate(kind, Split::Test, 1 << 14, Seed(0));
    for factor in [0.5, 1.0, 2.0] {
        let records = evaluation_records(
            &Rescaled {
                inner: OraclePredictor::new(kind),
                factor,
            },
            &test,
        )?;
        let pits: Vec<f64> = records.iter().map(|r| r.pit).collect();
        let u: Vec<f64> = records.iter().map(|r| r.uncertainty).collect();
        let e: Vec<f64> = records.iter().map(|r| r.abs_error).collect();
        for weights in [WeightMode::Frequency, WeightMode::Uniform] {
            let cfg = CalibrationConfig::evenly_spaced(100, weights)?;
            println!(
                "sd x{factor}: ce ({weights:?} weights) {:.3e}",
                calibration_error(&pits, &cfg)?
            );
        }
        for tie in [TieMode::Min, TieMode::Average] {
            println!(
                "sd x{factor}: spearman ({tie:?} ranks) {:.4}",
                spearman(&u, &e, tie)?
            );
        }
    }
    Ok(())
}
