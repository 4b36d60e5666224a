//! Deep ensemble of Gaussian-output perceptrons.
//!
//! Member `i` is keyed by `derive_seed(cfg.seed, [MEMBER_TAG, i])`; its
//! initialisation stream is that seed with tag `[0]` and its shuffling stream
//! tag `[1]`. Each epoch visits a fresh permutation of the training set in
//! mini-batches of `batch_size`, the last one possibly short.
//!
//! # Model file (`UQBENS01`)
//!
//! All integers and floats little-endian.
//!
//! ```text
//! magic          8 bytes   "UQBENS01"
//! version        u32       1
//! hidden         u32
//! members        u32
//! epochs         u32
//! batch_size     u32
//! learning_rate  f64
//! beta1          f64
//! beta2          f64
//! epsilon        f64
//! seed           u64
//! param_count    u64
//! per member:    seed u64, then param_count f64 in the flat layer layout
//! ```

use std::io::{Read, Write};
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::mlp::{adam_step, AdamConfig, AdamState, Mlp, DEFAULT_HIDDEN};
use super::Predictor;
use crate::data::LabeledSet;
use crate::dist::{GaussianMixture, Predictive};
use crate::error::{Error, Result};
use crate::rng::{derive_seed, CounterRng, Seed};

const MEMBER_TAG: u64 = 0x4d45_4d42;
const MAGIC: &[u8; 8] = b"UQBENS01";
const FORMAT_VERSION: u32 = 1;
/// Inputs per forward pass at prediction time.
const PREDICT_CHUNK: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub epochs: usize,
    pub batch_size: usize,
    pub learning_rate: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
    pub ensemble_size: usize,
    pub hidden: usize,
    pub seed: Seed,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            epochs: 20,
            batch_size: 128,
            learning_rate: 1e-3,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
            ensemble_size: 5,
            hidden: DEFAULT_HIDDEN,
            seed: Seed(0),
        }
    }
}

impl TrainConfig {
    fn validate(&self) -> Result<()> {
        let positive = self.epochs > 0
            && self.batch_size > 0
            && self.ensemble_size > 0
            && self.hidden > 0
            && self.learning_rate > 0.0
            && self.epsilon > 0.0
            && (0.0..1.0).contains(&self.beta1)
            && (0.0..1.0).contains(&self.beta2);
        if positive {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!(
                "invalid training config {self:?}"
            )))
        }
    }

    fn adam(&self) -> AdamConfig {
        AdamConfig {
            learning_rate: self.learning_rate,
            beta1: self.beta1,
            beta2: self.beta2,
            epsilon: self.epsilon,
        }
    }

    pub fn member_seed(&self, index: usize) -> Seed {
        derive_seed(self.seed, &[MEMBER_TAG, index as u64])
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Member {
    pub seed: Seed,
    pub mlp: Mlp,
    /// Mean mini-batch loss of each epoch; empty for members loaded from disk.
    pub epoch_losses: Vec<f64>,
}

/// Trains one ensemble member.
pub fn train_member(train: &LabeledSet, cfg: &TrainConfig, index: usize) -> Result<Member> {
    cfg.validate()?;
    if train.is_empty() {
        return Err(Error::Empty {
            what: "training set",
        });
    }
    let seed = cfg.member_seed(index);
    let mut mlp = Mlp::init(cfg.hidden, &mut CounterRng::derived(seed, &[0]));
    let mut shuffler = CounterRng::derived(seed, &[1]);
    let adam = cfg.adam();
    let mut state = AdamState::new(mlp.params().len());
    let mut grad = vec![0.0; mlp.params().len()];

    let mut order: Vec<usize> = (0..train.len()).collect();
    let mut bx = Vec::with_capacity(cfg.batch_size);
    let mut by = Vec::with_capacity(cfg.batch_size);
    let mut epoch_losses = Vec::with_capacity(cfg.epochs);
    for epoch in 0..cfg.epochs {
        shuffler.shuffle(&mut order);
        let mut sum = 0.0;
        let mut batches = 0;
        for (batch, idx) in order.chunks(cfg.batch_size).enumerate() {
            bx.clear();
            by.clear();
            bx.extend(idx.iter().map(|&i| train.xs()[i]));
            by.extend(idx.iter().map(|&i| train.ys()[i]));
            let loss = mlp.loss_and_grad_into(&bx, &by, &mut grad);
            if !loss.is_finite() {
                return Err(Error::NonFiniteLoss {
                    member: index,
                    epoch,
                    batch,
                });
            }
            adam_step(mlp.params_mut(), &grad, &mut state, &adam)?;
            sum += loss;
            batches += 1;
        }
        let mean = sum / batches as f64;
        log::debug!("member {index} epoch {epoch}: mean loss {mean:.5}");
        epoch_losses.push(mean);
    }
    Ok(Member {
        seed,
        mlp,
        epoch_losses,
    })
}

/// Trains `cfg.ensemble_size` members (in parallel) on `train`.
pub fn train_ensemble(train: &LabeledSet, cfg: &TrainConfig) -> Result<Ensemble> {
    cfg.validate()?;
    if train.is_empty() {
        return Err(Error::Empty {
            what: "training set",
        });
    }
    let members = (0..cfg.ensemble_size)
        .into_par_iter()
        .map(|i| train_member(train, cfg, i))
        .collect::<Result<Vec<_>>>()?;
    Ok(Ensemble {
        config: *cfg,
        members,
    })
}

/// Predicts the moment-matched Gaussian of the members' equal-weight mixture.
#[derive(Clone, Debug, PartialEq)]
pub struct Ensemble {
    pub config: TrainConfig,
    pub members: Vec<Member>,
}

impl Ensemble {
    pub fn mixture(&self, x: f64) -> GaussianMixture {
        GaussianMixture::uniform(self.members.iter().map(|m| m.mlp.forward(x)))
            .expect("ensemble has members")
    }

    pub fn write_to<W: Write>(&self, out: W) -> std::io::Result<()> {
        let mut w = std::io::BufWriter::new(out);
        let c = &self.config;
        w.write_all(MAGIC)?;
        for v in [
            FORMAT_VERSION,
            c.hidden as u32,
            self.members.len() as u32,
            c.epochs as u32,
            c.batch_size as u32,
        ] {
            w.write_all(&v.to_le_bytes())?;
        }
        for v in [c.learning_rate, c.beta1, c.beta2, c.epsilon] {
            w.write_all(&v.to_le_bytes())?;
        }
        w.write_all(&c.seed.0.to_le_bytes())?;
        let count = self.members.first().map_or(0, |m| m.mlp.params().len());
        w.write_all(&(count as u64).to_le_bytes())?;
        for m in &self.members {
            w.write_all(&m.seed.0.to_le_bytes())?;
            for p in m.mlp.params() {
                w.write_all(&p.to_le_bytes())?;
            }
        }
        w.flush()
    }

    pub fn read_from<R: Read>(input: R) -> Result<Self> {
        let mut r = std::io::BufReader::new(input);
        let bad = |what: &str| Error::ModelFormat(what.to_string());
        let mut read = |buf: &mut [u8]| r.read_exact(buf).map_err(|_| bad("truncated file"));

        let mut magic = [0u8; 8];
        read(&mut magic)?;
        if &magic != MAGIC {
            return Err(bad("bad magic, not an ensemble model"));
        }
        let mut u32s = [0u32; 5];
        for v in &mut u32s {
            let mut b = [0u8; 4];
            read(&mut b)?;
            *v = u32::from_le_bytes(b);
        }
        let [version, hidden, members, epochs, batch_size] = u32s;
        if version != FORMAT_VERSION {
            return Err(bad(&format!("unsupported version {version}")));
        }
        let mut f64s = [0f64; 4];
        for v in &mut f64s {
            let mut b = [0u8; 8];
            read(&mut b)?;
            *v = f64::from_le_bytes(b);
        }
        let mut b = [0u8; 8];
        read(&mut b)?;
        let seed = Seed(u64::from_le_bytes(b));
        read(&mut b)?;
        let count = u64::from_le_bytes(b) as usize;
        if count != super::mlp::param_count(hidden as usize) {
            return Err(bad("parameter count does not match hidden width"));
        }

        let config = TrainConfig {
            epochs: epochs as usize,
            batch_size: batch_size as usize,
            learning_rate: f64s[0],
            beta1: f64s[1],
            beta2: f64s[2],
            epsilon: f64s[3],
            ensemble_size: members as usize,
            hidden: hidden as usize,
            seed,
        };
        let mut out = Vec::with_capacity(members as usize);
        for _ in 0..members {
            read(&mut b)?;
            let member_seed = Seed(u64::from_le_bytes(b));
            let mut params = vec![0.0; count];
            for p in &mut params {
                read(&mut b)?;
                *p = f64::from_le_bytes(b);
            }
            out.push(Member {
                seed: member_seed,
                mlp: Mlp::from_params(hidden as usize, params)?,
                epoch_losses: Vec::new(),
            });
        }
        let mut trailing = [0u8; 1];
        if r.read(&mut trailing).map_err(|_| bad("read error"))? != 0 {
            return Err(bad("trailing bytes after last member"));
        }
        if out.is_empty() {
            return Err(bad("no members"));
        }
        Ok(Ensemble {
            config,
            members: out,
        })
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
        self.write_to(file).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
        Ensemble::read_from(file)
    }
}

impl Predictor for Ensemble {
    fn name(&self) -> String {
        "ensemble".into()
    }

    fn predict(&self, x: f64) -> Result<Predictive> {
        Ok(self.mixture(x).moment_match().into())
    }

    fn predict_many(&self, xs: &[f64]) -> Result<Vec<Predictive>> {
        let mut out = Vec::with_capacity(xs.len());
        for chunk in xs.chunks(PREDICT_CHUNK) {
            let per_member: Vec<_> = self
                .members
                .iter()
                .map(|m| m.mlp.forward_batch(chunk))
                .collect();
            for i in 0..chunk.len() {
                let mix = GaussianMixture::uniform(per_member.iter().map(|g| g[i]))?;
                out.push(mix.moment_match().into());
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{generate, DatasetKind, Split};

    fn small_cfg() -> TrainConfig {
        TrainConfig {
            epochs: 3,
            hidden: 16,
            ensemble_size: 2,
            seed: Seed(5),
            ..Default::default()
        }
    }

    #[test]
    fn single_member_prediction_is_the_member() {
        let train = generate(DatasetKind::Homoscedastic, Split::Train, 300, Seed(1));
        let cfg = TrainConfig {
            ensemble_size: 1,
            ..small_cfg()
        };
        let ens = train_ensemble(&train, &cfg).unwrap();
        let g = ens.members[0].mlp.forward(0.2);
        assert_eq!(ens.predict(0.2).unwrap(), Predictive::Gaussian(g));
    }

    #[test]
    fn training_is_deterministic() {
        let train = generate(DatasetKind::Heteroscedastic, Split::Train, 300, Seed(1));
        let a = train_ensemble(&train, &small_cfg()).unwrap();
        let b = train_ensemble(&train, &small_cfg()).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.members[0].mlp, a.members[1].mlp);
    }

    #[test]
    fn batched_prediction_matches_pointwise() {
        let train = generate(DatasetKind::Multimodal, Split::Train, 200, Seed(2));
        let ens = train_ensemble(&train, &small_cfg()).unwrap();
        let xs = [0.0, 0.1, 0.55, 0.9];
        let batch = ens.predict_many(&xs).unwrap();
        for (x, p) in xs.iter().zip(&batch) {
            let q = ens.predict(*x).unwrap();
            assert!((p.mean() - q.mean()).abs() < 1e-12);
            assert!((p.variance() - q.variance()).abs() < 1e-12);
        }
    }

    #[test]
    fn model_file_round_trip() {
        let train = generate(DatasetKind::Epistemic, Split::Train, 200, Seed(3));
        let mut ens = train_ensemble(&train, &small_cfg()).unwrap();
        let mut buf = Vec::new();
        ens.write_to(&mut buf).unwrap();
        let loaded = Ensemble::read_from(&buf[..]).unwrap();
        for m in &mut ens.members {
            m.epoch_losses.clear();
        }
        assert_eq!(loaded, ens);
    }

    #[test]
    fn model_file_rejects_garbage() {
        assert!(matches!(
            Ensemble::read_from(&b"nonsense"[..]),
            Err(Error::ModelFormat(_))
        ));
        let train = generate(DatasetKind::Epistemic, Split::Train, 50, Seed(3));
        let ens = train_ensemble(
            &train,
            &TrainConfig {
                epochs: 1,
                ..small_cfg()
            },
        )
        .unwrap();
        let mut buf = Vec::new();
        ens.write_to(&mut buf).unwrap();
        assert!(Ensemble::read_from(&buf[..buf.len() - 1]).is_err());
        buf.push(0);
        assert!(Ensemble::read_from(&buf[..]).is_err());
    }

    #[test]
    fn empty_training_set() {
        assert!(matches!(
            train_ensemble(&LabeledSet::default(), &small_cfg()),
            Err(Error::Empty { .. })
        ));
    }

    #[test]
    fn non_finite_targets_abort_with_location() {
        // 1e200 squared overflows the loss
        let train = LabeledSet::new(vec![0.0, 0.5], vec![1e200, 0.0]).unwrap();
        let err = train_member(&train, &small_cfg(), 1).unwrap_err();
        assert!(
            matches!(
                err,
                Error::NonFiniteLoss {
                    member: 1,
                    epoch: 0,
                    batch: 0
                }
            ),
            "{err}"
        );
    }
}
