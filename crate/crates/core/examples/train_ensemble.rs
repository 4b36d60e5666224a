//! Trains a five-member deep ensemble on one synthetic dataset and compares
//! its test metrics with the data-generating distribution.
//!
//! ```bash
//! cargo run --release --example train_ensemble -- heteroscedastic
//! ```

use std::time::Instant;

use uqbench::data::{generate, DatasetKind, Split, DEFAULT_TEST_SIZE, DEFAULT_TRAIN_SIZE};
use uqbench::metrics::{evaluate, EvalConfig, ReportRow};
use uqbench::predictors::{
    evaluation_records, train_ensemble, OraclePredictor, Predictor, TrainConfig,
};
use uqbench::rng::Seed;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let kind: DatasetKind = std::env::args()
        .nth(1)
        .as_deref()
        .unwrap_or("homoscedastic")
        .parse()?;
    let train = generate(kind, Split::Train, DEFAULT_TRAIN_SIZE, Seed(1));
    let test = generate(kind, Split::Test, DEFAULT_TEST_SIZE, Seed(2));

    let started = Instant::now();
    let ensemble = train_ensemble(&train, &TrainConfig::default())?;
    eprintln!("trained in {:.1?}", started.elapsed());
    for (i, m) in ensemble.members.iter().enumerate() {
        eprintln!(
            "member {i}: loss epoch 1 {:.4} -> epoch {} {:.4}",
            m.epoch_losses[0],
            m.epoch_losses.len(),
            m.epoch_losses.last().unwrap()
        );
    }

    println!("{}", ReportRow::CSV_HEADER);
    let oracle = OraclePredictor::new(kind);
    let predictors: [&dyn Predictor; 2] = [&ensemble, &oracle];
    for p in predictors {
        let records = evaluation_records(p, &test)?;
        let row = ReportRow {
            dataset: kind.to_string(),
            predictor: p.name(),
            report: evaluate(&records, &EvalConfig::default())?,
        };
        println!("{}", row.to_csv_line());
    }
    Ok(())
}
