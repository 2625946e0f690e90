//! Fully connected networks with layer norm, leaky ReLU and dropout, trained
//! by hand-written backpropagation.

use ndarray::{Array1, Array2, ArrayView2, Axis};
use rand::Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};

const LN_EPS: f64 = 1e-5;
const LEAK: f64 = 0.01;

#[derive(Debug, Clone, PartialEq)]
pub struct Layer {
    /// `out × in`.
    pub w: Array2<f64>,
    pub b: Array1<f64>,
    /// Layer-norm gain and shift; empty on the output layer.
    pub gamma: Array1<f64>,
    pub beta: Array1<f64>,
}

impl Layer {
    fn hidden(&self) -> bool {
        !self.gamma.is_empty()
    }

    pub fn inputs(&self) -> usize {
        self.w.ncols()
    }

    pub fn outputs(&self) -> usize {
        self.w.nrows()
    }
}

/// Hidden layers are `Linear → LayerNorm → LeakyReLU → Dropout`; the last layer is linear.
#[derive(Debug, Clone, PartialEq)]
pub struct Mlp {
    pub layers: Vec<Layer>,
    pub dropout: f64,
}

struct LayerCache {
    x: Array2<f64>,
    xhat: Array2<f64>,
    inv_std: Array1<f64>,
    /// Pre-activation after layer norm.
    y: Array2<f64>,
    mask: Option<Array2<f64>>,
}

/// Activations kept from a training forward pass.
pub struct ForwardCache {
    layers: Vec<LayerCache>,
}

impl Mlp {
    /// Xavier-normal weights, zero biases, unit layer-norm gain.
    pub fn new<R: Rng + ?Sized>(widths: &[usize], dropout: f64, rng: &mut R) -> Result<Self> {
        if widths.len() < 2 || widths.contains(&0) {
            return Err(Error::Config(format!("bad layer widths {widths:?}")));
        }
        if !(0.0..1.0).contains(&dropout) {
            return Err(Error::Config("dropout must lie in [0, 1)".into()));
        }
        let last = widths.len() - 2;
        let layers = widths
            .windows(2)
            .enumerate()
            .map(|(k, pair)| {
                let (fan_in, fan_out) = (pair[0], pair[1]);
                let std = (2.0 / (fan_in + fan_out) as f64).sqrt();
                let normal = Normal::new(0.0, std).expect("positive std");
                let w = Array2::from_shape_simple_fn((fan_out, fan_in), || normal.sample(rng));
                let norm = if k == last { 0 } else { fan_out };
                Layer {
                    w,
                    b: Array1::zeros(fan_out),
                    gamma: Array1::ones(norm),
                    beta: Array1::zeros(norm),
                }
            })
            .collect();
        Ok(Self { layers, dropout })
    }

    pub fn input_dim(&self) -> usize {
        self.layers[0].inputs()
    }

    pub fn output_dim(&self) -> usize {
        self.layers.last().expect("non-empty").outputs()
    }

    /// Layer shapes as `(in, out)`.
    pub fn shapes(&self) -> Vec<(usize, usize)> {
        self.layers.iter().map(|l| (l.inputs(), l.outputs())).collect()
    }

    /// Same architecture with every parameter zero.
    pub fn zeros_like(&self) -> Self {
        let layers = self
            .layers
            .iter()
            .map(|l| Layer {
                w: Array2::zeros(l.w.raw_dim()),
                b: Array1::zeros(l.b.len()),
                gamma: Array1::zeros(l.gamma.len()),
                beta: Array1::zeros(l.beta.len()),
            })
            .collect();
        Self { layers, dropout: self.dropout }
    }

    /// Parameter blocks in a fixed order.
    pub fn params(&self) -> Vec<&[f64]> {
        let mut out = Vec::with_capacity(4 * self.layers.len());
        for l in &self.layers {
            out.push(l.w.as_slice().expect("standard layout"));
            out.push(l.b.as_slice().expect("standard layout"));
            out.push(l.gamma.as_slice().expect("standard layout"));
            out.push(l.beta.as_slice().expect("standard layout"));
        }
        out
    }

    pub fn params_mut(&mut self) -> Vec<&mut [f64]> {
        let mut out = Vec::with_capacity(4 * self.layers.len());
        for l in &mut self.layers {
            out.push(l.w.as_slice_mut().expect("standard layout"));
            out.push(l.b.as_slice_mut().expect("standard layout"));
            out.push(l.gamma.as_slice_mut().expect("standard layout"));
            out.push(l.beta.as_slice_mut().expect("standard layout"));
        }
        out
    }

    pub fn num_params(&self) -> usize {
        self.params().iter().map(|p| p.len()).sum()
    }

    pub fn flatten(&self) -> Vec<f64> {
        self.params().concat()
    }

    pub fn load_flat(&mut self, flat: &[f64]) -> Result<()> {
        if flat.len() != self.num_params() {
            return Err(Error::Dimension { expected: self.num_params(), got: flat.len() });
        }
        let mut at = 0;
        for p in self.params_mut() {
            p.copy_from_slice(&flat[at..at + p.len()]);
            at += p.len();
        }
        Ok(())
    }

    fn check_input(&self, x: &ArrayView2<f64>) -> Result<()> {
        if x.ncols() != self.input_dim() {
            return Err(Error::Dimension { expected: self.input_dim(), got: x.ncols() });
        }
        Ok(())
    }

    /// Inference pass, dropout off. Rows of `x` are samples.
    pub fn forward(&self, x: ArrayView2<f64>) -> Result<Array2<f64>> {
        self.check_input(&x)?;
        let mut a = x.to_owned();
        for l in &self.layers {
            let z = a.dot(&l.w.t()) + &l.b;
            a = if l.hidden() {
                let (xhat, _) = layer_norm(&z);
                (xhat * &l.gamma + &l.beta).mapv(leaky)
            } else {
                z
            };
        }
        Ok(a)
    }

    /// Training pass. Dropout applies only when `rng` is given.
    pub fn forward_train<R: Rng + ?Sized>(
        &self,
        x: ArrayView2<f64>,
        mut rng: Option<&mut R>,
    ) -> Result<(Array2<f64>, ForwardCache)> {
        self.check_input(&x)?;
        let mut a = x.to_owned();
        let mut caches = Vec::with_capacity(self.layers.len());
        for l in &self.layers {
            let z = a.dot(&l.w.t()) + &l.b;
            if l.hidden() {
                let (xhat, inv_std) = layer_norm(&z);
                let y = &xhat * &l.gamma + &l.beta;
                let mut out = y.mapv(leaky);
                let mask = match rng.as_deref_mut() {
                    Some(r) if self.dropout > 0.0 => {
                        let keep = 1.0 / (1.0 - self.dropout);
                        let p = self.dropout;
                        let m = Array2::from_shape_simple_fn(out.raw_dim(), || {
                            if r.random::<f64>() < p {
                                0.0
                            } else {
                                keep
                            }
                        });
                        out *= &m;
                        Some(m)
                    }
                    _ => None,
                };
                caches.push(LayerCache { x: a, xhat, inv_std, y, mask });
                a = out;
            } else {
                caches.push(LayerCache {
                    x: a,
                    xhat: Array2::zeros((0, 0)),
                    inv_std: Array1::zeros(0),
                    y: Array2::zeros((0, 0)),
                    mask: None,
                });
                a = z;
            }
        }
        Ok((a, ForwardCache { layers: caches }))
    }

    /// Parameter gradients given `∂loss/∂output`.
    pub fn backward(&self, cache: &ForwardCache, d_out: &Array2<f64>) -> Mlp {
        let mut grads = self.zeros_like();
        let mut d = d_out.clone();
        for (k, (l, c)) in self.layers.iter().zip(&cache.layers).enumerate().rev() {
            let g = &mut grads.layers[k];
            let dz = if l.hidden() {
                if let Some(m) = &c.mask {
                    d *= m;
                }
                let dy = &d * &c.y.mapv(leaky_grad);
                g.gamma = (&dy * &c.xhat).sum_axis(Axis(0));
                g.beta = dy.sum_axis(Axis(0));
                layer_norm_backward(&(dy * &l.gamma), &c.xhat, &c.inv_std)
            } else {
                d
            };
            g.w = dz.t().dot(&c.x);
            g.b = dz.sum_axis(Axis(0));
            d = dz.dot(&l.w);
        }
        grads
    }
}

fn leaky(v: f64) -> f64 {
    if v > 0.0 {
        v
    } else {
        LEAK * v
    }
}

fn leaky_grad(v: f64) -> f64 {
    if v > 0.0 {
        1.0
    } else {
        LEAK
    }
}

/// Row-wise normalization; returns `(x̂, 1/σ)`.
fn layer_norm(z: &Array2<f64>) -> (Array2<f64>, Array1<f64>) {
    let n = z.ncols() as f64;
    let mean = z.sum_axis(Axis(1)) / n;
    let centered = z - &mean.view().insert_axis(Axis(1));
    let var = centered.mapv(|v| v * v).sum_axis(Axis(1)) / n;
    let inv_std = var.mapv(|v| 1.0 / (v + LN_EPS).sqrt());
    let xhat = centered * &inv_std.view().insert_axis(Axis(1));
    (xhat, inv_std)
}

fn layer_norm_backward(dxhat: &Array2<f64>, xhat: &Array2<f64>, inv_std: &Array1<f64>) -> Array2<f64> {
    let n = xhat.ncols() as f64;
    let sum_d = dxhat.sum_axis(Axis(1)).insert_axis(Axis(1));
    let sum_dx = (dxhat * xhat).sum_axis(Axis(1)).insert_axis(Axis(1));
    let inner = dxhat * n - &sum_d - &(xhat * &sum_dx);
    inner * &(inv_std / n).insert_axis(Axis(1))
}

/// Numerically stable row-wise softmax.
pub fn softmax_rows(z: &Array2<f64>) -> Array2<f64> {
    let mut out = z.clone();
    for mut row in out.rows_mut() {
        let m = row.fold(f64::NEG_INFINITY, |a, &b| a.max(b));
        row.mapv_inplace(|v| (v - m).exp());
        let s = row.sum();
        row /= s;
    }
    out
}

/// Global L2 norm of all gradient blocks.
pub fn grad_norm(g: &Mlp) -> f64 {
    g.params().iter().flat_map(|p| p.iter()).map(|v| v * v).sum::<f64>().sqrt()
}

/// Scales gradients down so their global norm is at most `cap`; returns the norm before clipping.
pub fn clip_grad_norm(g: &mut Mlp, cap: f64) -> f64 {
    let norm = grad_norm(g);
    if norm > cap && norm > 0.0 {
        let s = cap / norm;
        for p in g.params_mut() {
            p.iter_mut().for_each(|v| *v *= s);
        }
    }
    norm
}

/// Adam optimizer over an [`Mlp`]'s parameter blocks.
#[derive(Debug, Clone)]
pub struct Adam {
    pub lr: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub eps: f64,
    m: Mlp,
    v: Mlp,
    t: u64,
}

impl Adam {
    pub fn new(net: &Mlp, lr: f64) -> Self {
        Self { lr, beta1: 0.9, beta2: 0.999, eps: 1e-8, m: net.zeros_like(), v: net.zeros_like(), t: 0 }
    }

    pub fn step(&mut self, net: &mut Mlp, grads: &Mlp) {
        self.t += 1;
        let (b1, b2) = (self.beta1, self.beta2);
        let c1 = 1.0 - b1.powi(self.t as i32);
        let c2 = 1.0 - b2.powi(self.t as i32);
        let step = self.lr * c2.sqrt() / c1;
        for (((p, g), m), v) in net
            .params_mut()
            .into_iter()
            .zip(grads.params())
            .zip(self.m.params_mut())
            .zip(self.v.params_mut())
        {
            for k in 0..p.len() {
                m[k] = b1 * m[k] + (1.0 - b1) * g[k];
                v[k] = b2 * v[k] + (1.0 - b2) * g[k] * g[k];
                p[k] -= step * m[k] / (v[k].sqrt() + self.eps);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;
    use rand::SeedableRng;

    type R = crate::SimRng;

    fn rng() -> R {
        R::seed_from_u64(17)
    }

    #[test]
    fn shapes_and_count() {
        let net = Mlp::new(&[26, 128, 128, 64, 32, 10], 0.01, &mut rng()).unwrap();
        assert_eq!(net.shapes(), vec![(26, 128), (128, 128), (128, 64), (64, 32), (32, 10)]);
        let expected = 26 * 128 + 128 + 256 + 128 * 128 + 128 + 256 + 128 * 64 + 64 + 128 + 64 * 32 + 32 + 64 + 330;
        assert_eq!(net.num_params(), expected);
    }

    #[test]
    fn zero_head_gives_uniform_policy() {
        let mut net = Mlp::new(&[4, 8, 10], 0.0, &mut rng()).unwrap();
        let head = net.layers.last_mut().unwrap();
        head.w.fill(0.0);
        let p = softmax_rows(&net.forward(array![[0.3, -1.0, 2.0, 0.5]].view()).unwrap());
        assert!(p.iter().all(|&v| (v - 0.1).abs() < 1e-15));
    }

    #[test]
    fn dimension_mismatch() {
        let net = Mlp::new(&[4, 8, 2], 0.0, &mut rng()).unwrap();
        assert!(matches!(
            net.forward(array![[1.0, 2.0]].view()),
            Err(Error::Dimension { expected: 4, got: 2 })
        ));
    }

    #[test]
    fn flatten_round_trip() {
        let a = Mlp::new(&[3, 5, 2], 0.0, &mut rng()).unwrap();
        let mut b = Mlp::new(&[3, 5, 2], 0.0, &mut R::seed_from_u64(99)).unwrap();
        b.load_flat(&a.flatten()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn inference_matches_training_pass_without_dropout() {
        let net = Mlp::new(&[4, 8, 8, 3], 0.5, &mut rng()).unwrap();
        let x = array![[0.1, 0.2, -0.3, 0.9], [1.0, -2.0, 0.0, 0.5]];
        let (train, _) = net.forward_train::<R>(x.view(), None).unwrap();
        assert_eq!(train, net.forward(x.view()).unwrap());
    }

    #[test]
    fn clipping_caps_norm() {
        let mut g = Mlp::new(&[4, 8, 3], 0.0, &mut rng()).unwrap();
        for p in g.params_mut() {
            p.iter_mut().for_each(|v| *v = 3.0);
        }
        clip_grad_norm(&mut g, 1.0);
        assert!((grad_norm(&g) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn adam_reduces_quadratic_loss() {
        let mut net = Mlp::new(&[2, 4, 1], 0.0, &mut rng()).unwrap();
        let mut opt = Adam::new(&net, 1e-2);
        let x = array![[0.5, -0.5], [1.0, 0.2], [-0.3, 0.8]];
        let y = array![[1.0], [-1.0], [0.5]];
        let loss = |net: &Mlp| (net.forward(x.view()).unwrap() - &y).mapv(|v| v * v).sum();
        let start = loss(&net);
        for _ in 0..300 {
            let (out, cache) = net.forward_train::<R>(x.view(), None).unwrap();
            let g = net.backward(&cache, &((out - &y) * 2.0));
            opt.step(&mut net, &g);
        }
        assert!(loss(&net) < 0.1 * start);
    }
}
