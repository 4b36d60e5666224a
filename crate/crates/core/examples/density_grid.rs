//! Log-density of the multimodal ground truth on a grid, printed as a
//! shaded text map; pass a path to also write the `x,y,z` CSV.

use uqbench::data::DatasetKind;
use uqbench::predictors::{log_density_grid, OraclePredictor};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let kind = DatasetKind::Multimodal;
    let grid = log_density_grid(
        &OraclePredictor::new(kind),
        kind.domain(),
        (-1.0, 2.0),
        60,
        24,
    )?;
    if let Some(path) = std::env::args().nth(1) {
        grid.write_csv(path.as_ref())?;
    }
    let shades = [' ', '.', ':', '+', '#'];
    for j in (0..grid.ys.len()).rev() {
        let line: String = (0..grid.xs.len())
            .map(|i| {
                let z = grid.at(i, j).max(-8.0);
                shades[(((z + 8.0) / 10.0) * (shades.len() - 1) as f64)
                    .round()
                    .clamp(0.0, 4.0) as usize]
            })
            .collect();
        println!("{:>5.2} |{line}", grid.ys[j]);
    }
    Ok(())
}
