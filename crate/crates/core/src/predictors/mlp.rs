//! Five-layer ReLU perceptron with a Gaussian head, its Gaussian NLL loss and
//! gradients, and the Adam optimiser.
//!
//! Parameters live in one flat `Vec<f64>`. Layer `l` maps `d_l -> d_{l+1}` along
//! the chain `1 -> h -> h -> h -> h -> 2`, stored as a row-major `d_l x d_{l+1}`
//! weight block followed by its `d_{l+1}` bias. The two outputs are a raw mean
//! `m` and raw scale `s`; the predicted variance is `softplus(s) + 1e-6`.

use ndarray::linalg::general_mat_mul;
use ndarray::{Array2, ArrayView1, ArrayView2, ArrayViewMut1, ArrayViewMut2, Axis};

use crate::dist::{Gaussian, HALF_LN_TAU};
use crate::error::{Error, Result};
use crate::rng::CounterRng;

pub const DEFAULT_HIDDEN: usize = 256;
pub const LAYERS: usize = 5;
/// Added to `softplus(s)` so the predicted variance never reaches zero.
pub const VARIANCE_OFFSET: f64 = 1e-6;

pub fn softplus(s: f64) -> f64 {
    if s > 0.0 {
        s + (-s).exp().ln_1p()
    } else {
        s.exp().ln_1p()
    }
}

pub fn sigmoid(s: f64) -> f64 {
    if s >= 0.0 {
        1.0 / (1.0 + (-s).exp())
    } else {
        let e = s.exp();
        e / (1.0 + e)
    }
}

/// Loss and its partial derivatives at one sample.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NllTerms {
    pub loss: f64,
    pub d_mean: f64,
    pub d_variance: f64,
}

/// `0.5 ln(2 pi) + 0.5 ln v + (y - mu)^2 / (2 v)`, i.e. `-log N(y; mu, v)`.
pub fn gaussian_nll(mean: f64, variance: f64, y: f64) -> NllTerms {
    let r = y - mean;
    NllTerms {
        loss: HALF_LN_TAU + 0.5 * variance.ln() + r * r / (2.0 * variance),
        d_mean: -r / variance,
        d_variance: 0.5 / variance - r * r / (2.0 * variance * variance),
    }
}

/// [`gaussian_nll`] with the variance given by its raw preimage `s`.
/// Returns `(loss, d/d mean, d/d s)`.
pub fn gaussian_nll_raw(mean: f64, raw_scale: f64, y: f64) -> (f64, f64, f64) {
    let v = softplus(raw_scale) + VARIANCE_OFFSET;
    let t = gaussian_nll(mean, v, y);
    (t.loss, t.d_mean, t.d_variance * sigmoid(raw_scale))
}

#[derive(Clone, Debug, PartialEq)]
pub struct Mlp {
    hidden: usize,
    params: Vec<f64>,
}

fn dims(hidden: usize) -> [usize; LAYERS + 1] {
    [1, hidden, hidden, hidden, hidden, 2]
}

/// Offset of each layer's weight block.
fn offsets(hidden: usize) -> [usize; LAYERS + 1] {
    let d = dims(hidden);
    let mut off = [0; LAYERS + 1];
    for l in 0..LAYERS {
        off[l + 1] = off[l] + d[l] * d[l + 1] + d[l + 1];
    }
    off
}

pub fn param_count(hidden: usize) -> usize {
    offsets(hidden)[LAYERS]
}

impl Mlp {
    pub fn zeros(hidden: usize) -> Self {
        Mlp {
            hidden,
            params: vec![0.0; param_count(hidden)],
        }
    }

    /// Every weight and bias uniform on `[-a, a]`, `a = 1 / sqrt(fan_in)`,
    /// drawn layer by layer, weights before biases.
    pub fn init(hidden: usize, rng: &mut CounterRng) -> Self {
        let d = dims(hidden);
        let mut params = Vec::with_capacity(param_count(hidden));
        for l in 0..LAYERS {
            let a = 1.0 / (d[l] as f64).sqrt();
            for _ in 0..(d[l] * d[l + 1] + d[l + 1]) {
                params.push(rng.uniform_in(-a, a));
            }
        }
        Mlp { hidden, params }
    }

    pub fn from_params(hidden: usize, params: Vec<f64>) -> Result<Self> {
        if params.len() != param_count(hidden) {
            return Err(Error::InvalidArgument(format!(
                "expected {} parameters for hidden width {hidden}, got {}",
                param_count(hidden),
                params.len()
            )));
        }
        Ok(Mlp { hidden, params })
    }

    pub fn hidden(&self) -> usize {
        self.hidden
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn params_mut(&mut self) -> &mut [f64] {
        &mut self.params
    }

    fn layer(&self, l: usize) -> (ArrayView2<'_, f64>, ArrayView1<'_, f64>) {
        layer_views(&self.params, self.hidden, l)
    }

    /// Raw `(m, s)` outputs, one row per input.
    pub fn raw_outputs(&self, xs: &[f64]) -> Array2<f64> {
        self.forward_cached(xs).pop().expect("output layer")
    }

    /// Activations after each layer: `acts[0]` is the input, `acts[LAYERS]` the raw output.
    fn forward_cached(&self, xs: &[f64]) -> Vec<Array2<f64>> {
        let mut acts = Vec::with_capacity(LAYERS + 1);
        acts.push(Array2::from_shape_vec((xs.len(), 1), xs.to_vec()).expect("column"));
        for l in 0..LAYERS {
            let (w, b) = self.layer(l);
            let mut z = Array2::zeros((xs.len(), w.ncols()));
            z.assign(&b);
            general_mat_mul(1.0, &acts[l], &w, 1.0, &mut z);
            if l + 1 < LAYERS {
                z.mapv_inplace(|v| v.max(0.0));
            }
            acts.push(z);
        }
        acts
    }

    pub fn forward(&self, x: f64) -> Gaussian {
        self.forward_batch(&[x])[0]
    }

    pub fn forward_batch(&self, xs: &[f64]) -> Vec<Gaussian> {
        self.raw_outputs(xs)
            .rows()
            .into_iter()
            .map(|r| Gaussian::new(r[0], softplus(r[1]) + VARIANCE_OFFSET))
            .collect()
    }

    /// Mean Gaussian NLL over the batch and its gradient in the flat layout.
    pub fn loss_and_grad(&self, xs: &[f64], ys: &[f64]) -> (f64, Vec<f64>) {
        let mut grad = vec![0.0; self.params.len()];
        let loss = self.loss_and_grad_into(xs, ys, &mut grad);
        (loss, grad)
    }

    pub fn loss(&self, xs: &[f64], ys: &[f64]) -> f64 {
        let out = self.raw_outputs(xs);
        let total: f64 = out
            .rows()
            .into_iter()
            .zip(ys)
            .map(|(r, &y)| gaussian_nll_raw(r[0], r[1], y).0)
            .sum();
        total / xs.len() as f64
    }

    /// Overwrites `grad`.
    pub fn loss_and_grad_into(&self, xs: &[f64], ys: &[f64], grad: &mut [f64]) -> f64 {
        assert_eq!(xs.len(), ys.len());
        assert_eq!(grad.len(), self.params.len());
        let batch = xs.len() as f64;
        let acts = self.forward_cached(xs);

        let out = &acts[LAYERS];
        let mut delta = Array2::zeros(out.raw_dim());
        let mut total = 0.0;
        for ((r, mut d), &y) in out.rows().into_iter().zip(delta.rows_mut()).zip(ys) {
            let (loss, dm, ds) = gaussian_nll_raw(r[0], r[1], y);
            total += loss;
            d[0] = dm / batch;
            d[1] = ds / batch;
        }

        for l in (0..LAYERS).rev() {
            {
                let (mut gw, mut gb) = layer_views_mut(grad, self.hidden, l);
                general_mat_mul(1.0, &acts[l].t(), &delta, 0.0, &mut gw);
                gb.assign(&delta.sum_axis(Axis(0)));
            }
            if l > 0 {
                let (w, _) = self.layer(l);
                let mut back = delta.dot(&w.t());
                ndarray::Zip::from(&mut back)
                    .and(&acts[l])
                    .for_each(|g, &a| {
                        if a <= 0.0 {
                            *g = 0.0
                        }
                    });
                delta = back;
            }
        }
        total / batch
    }
}

fn layer_views(
    params: &[f64],
    hidden: usize,
    l: usize,
) -> (ArrayView2<'_, f64>, ArrayView1<'_, f64>) {
    let d = dims(hidden);
    let off = offsets(hidden)[l];
    let nw = d[l] * d[l + 1];
    let w = ArrayView2::from_shape((d[l], d[l + 1]), &params[off..off + nw]).expect("weight block");
    let b = ArrayView1::from(&params[off + nw..off + nw + d[l + 1]]);
    (w, b)
}

fn layer_views_mut(
    params: &mut [f64],
    hidden: usize,
    l: usize,
) -> (ArrayViewMut2<'_, f64>, ArrayViewMut1<'_, f64>) {
    let d = dims(hidden);
    let off = offsets(hidden)[l];
    let nw = d[l] * d[l + 1];
    let (w, rest) = params[off..off + nw + d[l + 1]].split_at_mut(nw);
    (
        ArrayViewMut2::from_shape((d[l], d[l + 1]), w).expect("weight block"),
        ArrayViewMut1::from(rest),
    )
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AdamConfig {
    pub learning_rate: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
}

impl Default for AdamConfig {
    fn default() -> Self {
        AdamConfig {
            learning_rate: 1e-3,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AdamState {
    m: Vec<f64>,
    v: Vec<f64>,
    step: u64,
}

impl AdamState {
    pub fn new(n: usize) -> Self {
        AdamState {
            m: vec![0.0; n],
            v: vec![0.0; n],
            step: 0,
        }
    }

    pub fn step(&self) -> u64 {
        self.step
    }
}

/// One bias-corrected Adam update of `params` in place.
pub fn adam_step(
    params: &mut [f64],
    grads: &[f64],
    state: &mut AdamState,
    cfg: &AdamConfig,
) -> Result<()> {
    if params.len() != grads.len() || params.len() != state.m.len() {
        return Err(Error::LengthMismatch {
            left: params.len(),
            right: if params.len() != grads.len() {
                grads.len()
            } else {
                state.m.len()
            },
        });
    }
    state.step += 1;
    let t = state.step as i32;
    let c1 = 1.0 - cfg.beta1.powi(t);
    let c2 = 1.0 - cfg.beta2.powi(t);
    for (((p, &g), m), v) in params
        .iter_mut()
        .zip(grads)
        .zip(state.m.iter_mut())
        .zip(state.v.iter_mut())
    {
        *m = cfg.beta1 * *m + (1.0 - cfg.beta1) * g;
        *v = cfg.beta2 * *v + (1.0 - cfg.beta2) * g * g;
        let m_hat = *m / c1;
        let v_hat = *v / c2;
        *p -= cfg.learning_rate * m_hat / (v_hat.sqrt() + cfg.epsilon);
    }
    Ok(())
}
