//! The four synthetic 1-D regression benchmarks and their CSV form.
//!
//! | kind            | domain  | target                                  | noise std            |
//! |-----------------|---------|-----------------------------------------|----------------------|
//! | homoscedastic   | [-1, 1] | cos(1.5 pi x)                           | 0.1                  |
//! | heteroscedastic | [-1, 1] | cos(1.5 pi x)                           | 0.4 * cos(1.5 pi x)  |
//! | multimodal      | [0, 1]  | 0.5 +/- cos(2 pi x), sign a fair coin   | 0.05                 |
//! | epistemic       | [0, 1]  | 0.5 + cos(4 pi x)                       | 0.05                 |
//!
//! Inputs are uniform over the domain. The epistemic training split redraws any
//! input that falls in [0.35, 0.65]; its test split covers the whole domain.
//!
//! Generation consumes one [`CounterRng`] stream keyed by
//! `derive_seed(seed, [kind, split])`. Per sample it draws, in order: the
//! input (redrawn while rejected), the mode coin (multimodal only), then one
//! standard normal.

use std::fmt;
use std::io::{Read, Write};
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{CounterRng, Seed};

use std::f64::consts::PI;

/// Inputs rejected from the epistemic training split.
pub const EPISTEMIC_GAP: (f64, f64) = (0.35, 0.65);

pub const DEFAULT_TRAIN_SIZE: usize = 10_000;
pub const DEFAULT_TEST_SIZE: usize = 1 << 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DatasetKind {
    Homoscedastic,
    Heteroscedastic,
    Multimodal,
    Epistemic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Split {
    Train,
    Test,
}

impl DatasetKind {
    pub const ALL: [DatasetKind; 4] = [
        DatasetKind::Homoscedastic,
        DatasetKind::Heteroscedastic,
        DatasetKind::Multimodal,
        DatasetKind::Epistemic,
    ];

    pub fn name(self) -> &'static str {
        match self {
            DatasetKind::Homoscedastic => "homoscedastic",
            DatasetKind::Heteroscedastic => "heteroscedastic",
            DatasetKind::Multimodal => "multimodal",
            DatasetKind::Epistemic => "epistemic",
        }
    }

    pub fn domain(self) -> (f64, f64) {
        match self {
            DatasetKind::Homoscedastic | DatasetKind::Heteroscedastic => (-1.0, 1.0),
            DatasetKind::Multimodal | DatasetKind::Epistemic => (0.0, 1.0),
        }
    }

    pub(crate) fn check_domain(self, x: f64) -> Result<()> {
        let (lo, hi) = self.domain();
        if x >= lo && x <= hi {
            Ok(())
        } else {
            Err(Error::Domain {
                dataset: self.name(),
                x,
                lo,
                hi,
            })
        }
    }

    /// Centres of the generating modes at `x` (two for multimodal, one otherwise).
    /// No domain check.
    pub(crate) fn mode_means(self, x: f64) -> ModeMeans {
        match self {
            DatasetKind::Homoscedastic | DatasetKind::Heteroscedastic => {
                ModeMeans::One((1.5 * PI * x).cos())
            }
            DatasetKind::Multimodal => {
                let c = (2.0 * PI * x).cos();
                ModeMeans::Two(0.5 + c, 0.5 - c)
            }
            DatasetKind::Epistemic => ModeMeans::One(0.5 + (4.0 * PI * x).cos()),
        }
    }

    pub(crate) fn noise_std(self, x: f64) -> f64 {
        match self {
            DatasetKind::Homoscedastic => 0.1,
            DatasetKind::Heteroscedastic => 0.4 * (1.5 * PI * x).cos().abs(),
            DatasetKind::Multimodal | DatasetKind::Epistemic => 0.05,
        }
    }

    /// Standard deviation of the generating noise at `x`.
    pub fn residual_std(self, x: f64) -> Result<f64> {
        self.check_domain(x)?;
        Ok(self.noise_std(x))
    }

    fn tag(self) -> u64 {
        match self {
            DatasetKind::Homoscedastic => 0,
            DatasetKind::Heteroscedastic => 1,
            DatasetKind::Multimodal => 2,
            DatasetKind::Epistemic => 3,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) enum ModeMeans {
    One(f64),
    Two(f64, f64),
}

impl fmt::Display for DatasetKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DatasetKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        DatasetKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown dataset '{s}'")))
    }
}

impl Split {
    pub fn name(self) -> &'static str {
        match self {
            Split::Train => "train",
            Split::Test => "test",
        }
    }
}

impl fmt::Display for Split {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Split {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "train" => Ok(Split::Train),
            "test" => Ok(Split::Test),
            _ => Err(Error::InvalidArgument(format!("unknown split '{s}'"))),
        }
    }
}

/// Paired inputs and targets.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct LabeledSet {
    xs: Vec<f64>,
    ys: Vec<f64>,
}

impl LabeledSet {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        if xs.len() != ys.len() {
            return Err(Error::LengthMismatch {
                left: xs.len(),
                right: ys.len(),
            });
        }
        if let Some(v) = xs.iter().chain(&ys).find(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument(format!("non-finite value {v}")));
        }
        Ok(LabeledSet { xs, ys })
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn ys(&self) -> &[f64] {
        &self.ys
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.xs.iter().copied().zip(self.ys.iter().copied())
    }

    /// The samples at `indices`, in that order.
    pub fn select(&self, indices: &[usize]) -> LabeledSet {
        LabeledSet {
            xs: indices.iter().map(|&i| self.xs[i]).collect(),
            ys: indices.iter().map(|&i| self.ys[i]).collect(),
        }
    }
}

/// Draws `n` samples of `kind`/`split`. Pure in its arguments.
pub fn generate(kind: DatasetKind, split: Split, n: usize, seed: Seed) -> LabeledSet {
    let split_tag = match split {
        Split::Train => 0,
        Split::Test => 1,
    };
    let mut rng = CounterRng::derived(seed, &[kind.tag(), split_tag]);
    let (lo, hi) = kind.domain();
    let reject_gap = kind == DatasetKind::Epistemic && split == Split::Train;

    let mut xs = Vec::with_capacity(n);
    let mut ys = Vec::with_capacity(n);
    for _ in 0..n {
        let x = loop {
            let x = rng.uniform_in(lo, hi);
            if !(reject_gap && x >= EPISTEMIC_GAP.0 && x <= EPISTEMIC_GAP.1) {
                break x;
            }
        };
        let centre = match kind.mode_means(x) {
            ModeMeans::One(m) => m,
            ModeMeans::Two(upper, lower) => {
                if rng.uniform() < 0.5 {
                    upper
                } else {
                    lower
                }
            }
        };
        let y = centre + kind.noise_std(x) * rng.standard_normal();
        xs.push(x);
        ys.push(y);
    }
    LabeledSet { xs, ys }
}

/// Writes `x,y` CSV. Values use the shortest representation that parses back
/// to the identical `f64`.
pub fn write_csv_to<W: Write>(set: &LabeledSet, out: W) -> std::io::Result<()> {
    let mut w = std::io::BufWriter::new(out);
    w.write_all(b"x,y\n")?;
    for (x, y) in set.iter() {
        writeln!(w, "{x},{y}")?;
    }
    w.flush()
}

pub fn write_csv(set: &LabeledSet, path: &Path) -> Result<()> {
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    write_csv_to(set, file).map_err(|e| Error::io(path, e))
}

pub fn read_csv_from<R: Read>(input: R) -> Result<LabeledSet> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(input);
    let mut records = reader.records();

    let header_err = |message: String| Error::Parse { line: 1, message };
    match records.next() {
        None => return Err(header_err("missing header `x,y`".into())),
        Some(Err(e)) => return Err(header_err(e.to_string())),
        Some(Ok(h)) => {
            if h.len() != 2 || h[0].trim() != "x" || h[1].trim() != "y" {
                return Err(header_err(format!("expected header `x,y`, found {h:?}")));
            }
        }
    }

    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for rec in records {
        let rec = rec.map_err(|e| Error::Parse {
            line: e.position().map_or(0, |p| p.line()),
            message: e.to_string(),
        })?;
        let line = rec.position().map_or(0, |p| p.line());
        if rec.len() != 2 {
            return Err(Error::Parse {
                line,
                message: format!("expected 2 fields, found {}", rec.len()),
            });
        }
        let parse = |s: &str| -> Result<f64> {
            let v: f64 = s.trim().parse().map_err(|_| Error::Parse {
                line,
                message: format!("non-numeric field '{s}'"),
            })?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(Error::Parse {
                    line,
                    message: format!("non-finite field '{s}'"),
                })
            }
        };
        xs.push(parse(&rec[0])?);
        ys.push(parse(&rec[1])?);
    }
    Ok(LabeledSet { xs, ys })
}

pub fn read_csv(path: &Path) -> Result<LabeledSet> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    read_csv_from(std::io::BufReader::new(file))
}
