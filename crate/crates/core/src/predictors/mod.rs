//! Things that map an input to a predictive distribution over the target.

mod ensemble;
pub mod mlp;
mod oracle;

use std::io::Write;
use std::path::Path;

pub use ensemble::{train_ensemble, train_member, Ensemble, Member, TrainConfig};
pub use oracle::OraclePredictor;

use crate::data::LabeledSet;
use crate::dist::Predictive;
use crate::error::{Error, Result};
use crate::metrics::EvaluationRecord;

/// Point prediction `F(x)` is the mean of `predict(x)`, uncertainty `U(x)` its variance.
pub trait Predictor: Sync {
    fn name(&self) -> String;

    fn predict(&self, x: f64) -> Result<Predictive>;

    fn predict_many(&self, xs: &[f64]) -> Result<Vec<Predictive>> {
        xs.iter().map(|&x| self.predict(x)).collect()
    }
}

impl<P: Predictor + ?Sized> Predictor for &P {
    fn name(&self) -> String {
        (**self).name()
    }

    fn predict(&self, x: f64) -> Result<Predictive> {
        (**self).predict(x)
    }

    fn predict_many(&self, xs: &[f64]) -> Result<Vec<Predictive>> {
        (**self).predict_many(xs)
    }
}

impl<P: Predictor + ?Sized> Predictor for Box<P> {
    fn name(&self) -> String {
        (**self).name()
    }

    fn predict(&self, x: f64) -> Result<Predictive> {
        (**self).predict(x)
    }

    fn predict_many(&self, xs: &[f64]) -> Result<Vec<Predictive>> {
        (**self).predict_many(xs)
    }
}

/// Wraps a predictor and multiplies every component's standard deviation by `factor`.
#[derive(Clone, Debug)]
pub struct Rescaled<P> {
    pub inner: P,
    pub factor: f64,
}

impl<P: Predictor> Predictor for Rescaled<P> {
    fn name(&self) -> String {
        format!("{}-sdx{}", self.inner.name(), self.factor)
    }

    fn predict(&self, x: f64) -> Result<Predictive> {
        Ok(self.inner.predict(x)?.rescaled(self.factor))
    }

    fn predict_many(&self, xs: &[f64]) -> Result<Vec<Predictive>> {
        Ok(self
            .inner
            .predict_many(xs)?
            .into_iter()
            .map(|p| p.rescaled(self.factor))
            .collect())
    }
}

pub fn evaluation_records<P: Predictor + ?Sized>(
    predictor: &P,
    set: &LabeledSet,
) -> Result<Vec<EvaluationRecord>> {
    let preds = predictor.predict_many(set.xs())?;
    Ok(preds
        .iter()
        .zip(set.ys())
        .map(|(p, &y)| EvaluationRecord::from_prediction(p, y))
        .collect())
}

/// `log p(y | x)` on an `nx` by `ny` tensor grid, x-major.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityGrid {
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    /// `z[i * ys.len() + j]` is the log density at `(xs[i], ys[j])`.
    pub z: Vec<f64>,
}

fn linspace(range: (f64, f64), n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| range.0 + (range.1 - range.0) * i as f64 / (n - 1) as f64)
        .collect()
}

pub fn log_density_grid<P: Predictor + ?Sized>(
    predictor: &P,
    x_range: (f64, f64),
    y_range: (f64, f64),
    nx: usize,
    ny: usize,
) -> Result<DensityGrid> {
    if nx < 2 || ny < 2 {
        return Err(Error::InvalidArgument(format!(
            "density grid needs at least 2 points per axis, got {nx}x{ny}"
        )));
    }
    let increasing = |r: (f64, f64)| r.0 < r.1;
    if !increasing(x_range) || !increasing(y_range) {
        return Err(Error::InvalidArgument(
            "density grid ranges must be increasing".into(),
        ));
    }
    let xs = linspace(x_range, nx);
    let ys = linspace(y_range, ny);
    let preds = predictor.predict_many(&xs)?;
    let z = preds
        .iter()
        .flat_map(|p| ys.iter().map(move |&y| p.log_density(y)))
        .collect();
    Ok(DensityGrid { xs, ys, z })
}

impl DensityGrid {
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.z[i * self.ys.len() + j]
    }

    pub fn write_csv_to<W: Write>(&self, out: W) -> std::io::Result<()> {
        let mut w = std::io::BufWriter::new(out);
        w.write_all(b"x,y,z\n")?;
        for (i, x) in self.xs.iter().enumerate() {
            for (j, y) in self.ys.iter().enumerate() {
                writeln!(w, "{x},{y},{}", crate::harness::fmt_float(self.at(i, j)))?;
            }
        }
        w.flush()
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
        self.write_csv_to(file).map_err(|e| Error::io(path, e))
    }
}
