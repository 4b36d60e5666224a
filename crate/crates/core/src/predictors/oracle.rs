use crate::data::{DatasetKind, ModeMeans};
use crate::dist::{Gaussian, GaussianMixture, Predictive};
use crate::error::Result;

use super::Predictor;

/// The data-generating conditional `p(y | x)` of a synthetic dataset.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OraclePredictor {
    kind: DatasetKind,
}

impl OraclePredictor {
    pub fn new(kind: DatasetKind) -> Self {
        OraclePredictor { kind }
    }

    pub fn kind(&self) -> DatasetKind {
        self.kind
    }
}

impl Predictor for OraclePredictor {
    fn name(&self) -> String {
        "oracle".into()
    }

    fn predict(&self, x: f64) -> Result<Predictive> {
        self.kind.check_domain(x)?;
        let variance = self.kind.noise_std(x).powi(2);
        Ok(match self.kind.mode_means(x) {
            ModeMeans::One(m) => Gaussian::new(m, variance).into(),
            ModeMeans::Two(a, b) => {
                GaussianMixture::uniform([Gaussian::new(a, variance), Gaussian::new(b, variance)])?
                    .into()
            }
        })
    }
}
