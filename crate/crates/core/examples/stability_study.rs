//! How the four metrics move with test-set size: nested subsets of one large
//! set, then means over independent replicates.
//!
//! ```bash
//! cargo run --release --example stability_study -- 20
//! ```

use uqbench::data::DatasetKind;
use uqbench::harness::{bias_experiment, convergence_experiment, BiasResult, StabilityResult};
use uqbench::metrics::EvalConfig;
use uqbench::predictors::OraclePredictor;
use uqbench::rng::Seed;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let replicates: usize = std::env::args()
        .nth(1)
        .map(|s| s.parse())
        .transpose()?
        .unwrap_or(20);
    let kind = DatasetKind::Heteroscedastic;
    let oracle = OraclePredictor::new(kind);
    let cfg = EvalConfig::default();
    let out = &mut std::io::stdout().lock();

    println!("# convergence");
    let conv: StabilityResult = convergence_experiment(&oracle, kind, Seed(0), &cfg)?;
    conv.write_csv_to(out)?;

    println!("# bias, {replicates} replicates");
    let bias: BiasResult = bias_experiment(&oracle, kind, Seed(0), replicates, &cfg)?;
    bias.write_csv_to(out)?;
    Ok(())
}
