#![allow(dead_code)]

use uqbench::metrics::EvaluationRecord;
use uqbench::predictors::mlp::{param_count, Mlp, LAYERS};
use uqbench::rng::{CounterRng, Seed};

/// Area between the uncertainty and oracle curves computed straight from the
/// partition definition: at step k the retained set is every record with at
/// least k records strictly above it in the ranking quantity. Needs distinct
/// uncertainties and distinct errors.
pub fn brute_force_ause(records: &[EvaluationRecord]) -> f64 {
    let n = records.len();
    let full: f64 = records.iter().map(|r| r.abs_error).sum::<f64>() / n as f64;
    let retained_mae = |k: usize, key: fn(&EvaluationRecord) -> f64| {
        let kept: Vec<f64> = records
            .iter()
            .filter(|r| records.iter().filter(|o| key(o) > key(r)).count() >= k)
            .map(|r| r.abs_error)
            .collect();
        assert_eq!(kept.len(), n - k);
        kept.iter().sum::<f64>() / kept.len() as f64 / full
    };
    (0..n)
        .map(|k| retained_mae(k, |r| r.uncertainty) - retained_mae(k, |r| r.abs_error))
        .sum::<f64>()
        / n as f64
}

/// Largest relative error between backprop and central differences over one
/// coordinate drawn from each layer's block, on a random batch.
pub fn gradient_probe(hidden: usize, seed: u64, h: f64) -> f64 {
    let mut rng = CounterRng::new(Seed(seed));
    let mut mlp = Mlp::init(hidden, &mut rng);
    let xs: Vec<f64> = (0..8).map(|_| rng.uniform_in(-1.0, 1.0)).collect();
    let ys: Vec<f64> = (0..8).map(|_| rng.uniform_in(-1.5, 2.0)).collect();
    let (_, grad) = mlp.loss_and_grad(&xs, &ys);

    let dims = [1, hidden, hidden, hidden, hidden, 2];
    let mut start = 0;
    let mut worst: f64 = 0.0;
    for l in 0..LAYERS {
        let len = dims[l] * dims[l + 1] + dims[l + 1];
        let i = start + rng.below(len);
        start += len;
        let p = mlp.params()[i];
        mlp.params_mut()[i] = p + h;
        let up = mlp.loss(&xs, &ys);
        mlp.params_mut()[i] = p - h;
        let down = mlp.loss(&xs, &ys);
        mlp.params_mut()[i] = p;
        let numeric = (up - down) / (2.0 * h);
        let scale = grad[i].abs().max(numeric.abs()).max(1e-7);
        worst = worst.max((grad[i] - numeric).abs() / scale);
    }
    assert_eq!(start, param_count(hidden));
    worst
}
