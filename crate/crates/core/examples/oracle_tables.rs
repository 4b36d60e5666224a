//! Metric table for the data-generating distribution on every dataset, next
//! to deliberately over- and under-dispersed versions of it.

use uqbench::data::{DatasetKind, DEFAULT_TEST_SIZE};
use uqbench::harness::{table_experiment, write_table_csv};
use uqbench::metrics::EvalConfig;
use uqbench::predictors::{OraclePredictor, Predictor, Rescaled};
use uqbench::rng::Seed;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let oracles: Vec<_> = DatasetKind::ALL.map(OraclePredictor::new).to_vec();
    let wide: Vec<_> = oracles
        .iter()
        .map(|&o| Rescaled {
            inner: o,
            factor: 2.0,
        })
        .collect();
    let narrow: Vec<_> = oracles
        .iter()
        .map(|&o| Rescaled {
            inner: o,
            factor: 0.5,
        })
        .collect();

    let mut cells: Vec<(DatasetKind, &dyn Predictor)> = Vec::new();
    for (i, kind) in DatasetKind::ALL.into_iter().enumerate() {
        cells.push((kind, &oracles[i]));
        cells.push((kind, &wide[i]));
        cells.push((kind, &narrow[i]));
    }
    let rows = table_experiment(&cells, DEFAULT_TEST_SIZE, Seed(0), &EvalConfig::default())?;
    write_table_csv(&rows, &mut std::io::stdout().lock())?;
    Ok(())
}
