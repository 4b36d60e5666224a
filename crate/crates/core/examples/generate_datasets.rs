//! Writes train and test CSVs for all four synthetic datasets.
//!
//! ```bash
//! cargo run --release --example generate_datasets -- out/
//! ```

use std::path::PathBuf;

use uqbench::data::{
    generate, write_csv, DatasetKind, Split, DEFAULT_TEST_SIZE, DEFAULT_TRAIN_SIZE,
};
use uqbench::rng::Seed;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "datasets".into()));
    std::fs::create_dir_all(&dir)?;
    for kind in DatasetKind::ALL {
        for (split, n) in [
            (Split::Train, DEFAULT_TRAIN_SIZE),
            (Split::Test, DEFAULT_TEST_SIZE),
        ] {
            let set = generate(kind, split, n, Seed(0));
            let path = dir.join(format!("{kind}_{split}.csv"));
            write_csv(&set, &path)?;
            let mean = set.ys().iter().sum::<f64>() / n as f64;
            println!("{} ({n} points, mean y {mean:.4})", path.display());
        }
    }
    Ok(())
}
