//! Sparsification and oracle curves of the true distribution on the
//! heteroscedastic set, as CSV plus a coarse text rendering.
//!
//! ```bash
//! cargo run --release --example sparsification_plot -- curve.csv
//! ```

use std::path::PathBuf;

use uqbench::data::{DatasetKind, DEFAULT_TEST_SIZE};
use uqbench::harness::sparsification_emit;
use uqbench::metrics::SparsificationConfig;
use uqbench::predictors::OraclePredictor;
use uqbench::rng::Seed;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = PathBuf::from(
        std::env::args()
            .nth(1)
            .unwrap_or_else(|| "sparsification.csv".into()),
    );
    let kind = DatasetKind::Heteroscedastic;
    let cfg = SparsificationConfig {
        grid_size: Some(100),
        ..SparsificationConfig::default()
    };
    let curve = sparsification_emit(
        &OraclePredictor::new(kind),
        kind,
        Seed(0),
        DEFAULT_TEST_SIZE,
        &cfg,
        &path,
    )?;

    println!("AUSE {:.4}, written to {}", curve.area(), path.display());
    println!("fraction  oracle  uncertainty");
    for i in (0..curve.alphas.len()).step_by(10) {
        let bar = |v: f64| "#".repeat((v * 30.0).round() as usize);
        println!(
            "{:>8.2}  {:<32} {}",
            curve.alphas[i],
            bar(curve.by_oracle[i]),
            bar(curve.by_uncertainty[i])
        );
    }
    Ok(())
}
