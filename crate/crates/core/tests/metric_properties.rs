use itertools::Itertools;
use proptest::prelude::*;
use uqbench::data::{generate, DatasetKind, Split};
use uqbench::metrics::{
    ause, calibration_error, nll, sparsification_curve, spearman, CalibrationConfig,
    EvaluationRecord, SparsificationConfig, TieMode, WeightMode,
};
use uqbench::predictors::{evaluation_records, OraclePredictor, Predictor, Rescaled};
use uqbench::rng::Seed;

fn record(abs_error: f64, uncertainty: f64) -> EvaluationRecord {
    EvaluationRecord {
        prediction: 0.0,
        abs_error,
        uncertainty,
        log_density: 0.0,
        pit: 0.5,
    }
}

/// Normalised MAE of what is left after removing `order[..k]`, for k = 0..n.
fn removal_curve(errors: &[f64], order: &[usize]) -> Vec<f64> {
    let n = errors.len();
    let total: f64 = errors.iter().sum::<f64>() / n as f64;
    (0..n)
        .map(|k| order[k..].iter().map(|&i| errors[i]).sum::<f64>() / (n - k) as f64 / total)
        .collect()
}

#[test]
fn oracle_curve_is_pointwise_minimal_over_all_orders() {
    let mut rng = uqbench::rng::CounterRng::new(Seed(99));
    for n in 2..=7 {
        for _ in 0..5 {
            let errors: Vec<f64> = (0..n).map(|_| rng.uniform() + 0.01).collect();
            let uncertainties: Vec<f64> = (0..n).map(|_| rng.uniform()).collect();
            let records: Vec<_> = errors
                .iter()
                .zip(&uncertainties)
                .map(|(&e, &u)| record(e, u))
                .collect();
            let curve = sparsification_curve(&records, &SparsificationConfig::default()).unwrap();
            assert!(curve.area() >= 0.0);
            for perm in (0..n).permutations(n) {
                let c = removal_curve(&errors, &perm);
                for (o, v) in curve.by_oracle.iter().zip(&c) {
                    assert!(*o <= v + 1e-12);
                }
            }
        }
    }
}

proptest! {
    #[test]
    fn curve_invariants(data in prop::collection::vec((0.0f64..5.0, 0u8..6), 1..60), seed in any::<u64>()) {
        let records: Vec<_> = data.iter().map(|&(e, u)| record(e, u as f64)).collect();
        let cfg = SparsificationConfig { grid_size: None, tie_seed: Seed(seed) };
        let c = sparsification_curve(&records, &cfg).unwrap();
        prop_assert_eq!(c.by_oracle[0], 1.0);
        prop_assert_eq!(c.by_uncertainty[0], 1.0);
        for w in c.by_oracle.windows(2) {
            prop_assert!(w[1] <= w[0] + 1e-12);
        }
        for (o, u) in c.by_oracle.iter().zip(&c.by_uncertainty) {
            prop_assert!(*o <= u + 1e-12);
        }
        prop_assert!(c.area() >= -1e-12);
    }

    #[test]
    fn monotone_transform_invariance(data in prop::collection::vec((0.0f64..3.0, 0u8..20), 2..80), seed in any::<u64>()) {
        let base: Vec<_> = data.iter().map(|&(e, u)| record(e, u as f64)).collect();
        let cfg = SparsificationConfig { grid_size: None, tie_seed: Seed(seed) };
        for f in [|u: f64| u.exp(), |u: f64| u * u * u + u] {
            let mapped: Vec<_> = base.iter().map(|r| record(r.abs_error, f(r.uncertainty))).collect();
            prop_assert_eq!(ause(&base, &cfg).unwrap(), ause(&mapped, &cfg).unwrap());
            let e: Vec<f64> = base.iter().map(|r| r.abs_error).collect();
            let u0: Vec<f64> = base.iter().map(|r| r.uncertainty).collect();
            let u1: Vec<f64> = mapped.iter().map(|r| r.uncertainty).collect();
            let a = spearman(&u0, &e, TieMode::Min);
            let b = spearman(&u1, &e, TieMode::Min);
            match (a, b) {
                (Ok(a), Ok(b)) => prop_assert_eq!(a, b),
                (Err(_), Err(_)) => {}
                other => prop_assert!(false, "{:?}", other),
            }
        }
    }

    #[test]
    fn spearman_symmetry_and_negation(a in prop::collection::hash_set(-1000i32..1000, 3..40), shift in 1usize..7) {
        let a: Vec<f64> = a.into_iter().map(f64::from).collect();
        let b: Vec<f64> = (0..a.len()).map(|i| a[(i + shift) % a.len()] * 0.5 + i as f64).collect();
        for mode in [TieMode::Min, TieMode::Average] {
            let ab = spearman(&a, &b, mode);
            let ba = spearman(&b, &a, mode);
            if let (Ok(ab), Ok(ba)) = (ab, ba) {
                prop_assert_eq!(ab, ba);
                let neg: Vec<f64> = a.iter().map(|v| -v).collect();
                prop_assert!((spearman(&neg, &b, mode).unwrap() + ab).abs() < 1e-12);
                prop_assert!((-1.0..=1.0).contains(&ab));
            }
        }
    }

    #[test]
    fn average_and_min_ranks_agree_without_ties(a in prop::collection::hash_set(-500i32..500, 2..40)) {
        let a: Vec<f64> = a.into_iter().map(f64::from).collect();
        let b: Vec<f64> = a.iter().map(|v| (v * 0.37).sin()).collect();
        let min = spearman(&a, &b, TieMode::Min);
        let avg = spearman(&a, &b, TieMode::Average);
        if let (Ok(x), Ok(y)) = (min, avg) {
            prop_assert!((x - y).abs() < 1e-12);
        }
    }
}

const N: usize = 1 << 16;

fn records_for<P: Predictor>(p: &P, kind: DatasetKind, seed: u64) -> Vec<EvaluationRecord> {
    let test = generate(kind, Split::Test, N, Seed(seed));
    evaluation_records(p, &test).unwrap()
}

#[test]
fn calibrated_predictor_has_small_ce() {
    for kind in DatasetKind::ALL {
        let recs = records_for(&OraclePredictor::new(kind), kind, 31);
        let pits: Vec<f64> = recs.iter().map(|r| r.pit).collect();
        let ce = calibration_error(&pits, &CalibrationConfig::default()).unwrap();
        assert!(ce <= 0.005, "{kind}: {ce}");
        let uniform = calibration_error(
            &pits,
            &CalibrationConfig::evenly_spaced(100, WeightMode::Uniform).unwrap(),
        )
        .unwrap();
        assert!(uniform <= 1e-4, "{kind}: {uniform}");
    }
}

#[test]
fn nll_is_proper_on_homoscedastic_data() {
    let kind = DatasetKind::Homoscedastic;
    let truth = nll(&records_for(&OraclePredictor::new(kind), kind, 32)).unwrap();
    for factor in [0.5, 2.0] {
        let p = Rescaled {
            inner: OraclePredictor::new(kind),
            factor,
        };
        let other = nll(&records_for(&p, kind, 32)).unwrap();
        assert!(truth < other, "factor {factor}: {truth} vs {other}");
    }
}

fn ks_distance(pits: &[f64]) -> f64 {
    let mut s = pits.to_vec();
    s.sort_by(f64::total_cmp);
    let n = s.len() as f64;
    s.iter()
        .enumerate()
        .map(|(i, &p)| (p - i as f64 / n).abs().max(((i + 1) as f64 / n - p).abs()))
        .fold(0.0, f64::max)
}

#[test]
fn oracle_pits_are_uniform() {
    let bound = 1.95 / (N as f64).sqrt();
    for kind in DatasetKind::ALL {
        let pits: Vec<f64> = records_for(&OraclePredictor::new(kind), kind, 33)
            .iter()
            .map(|r| r.pit)
            .collect();
        assert!(ks_distance(&pits) < bound, "{kind}");
        let wide = Rescaled {
            inner: OraclePredictor::new(kind),
            factor: 2.0,
        };
        let pits: Vec<f64> = records_for(&wide, kind, 33).iter().map(|r| r.pit).collect();
        assert!(ks_distance(&pits) > bound, "{kind} miscalibrated");
    }
}
