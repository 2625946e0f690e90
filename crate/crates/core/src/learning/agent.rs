//! One-step actor-critic trained from prioritized replay.

use std::path::Path;

use ndarray::{Array1, Array2, ArrayView1};
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::filter::{apply_filter, argmax, sample_index, ApdFilter, FilterMode};
use super::nn::{clip_grad_norm, softmax_rows, Adam, Mlp};
use super::replay::{ReplayMemory, Transition};
use crate::error::{Error, Result};
use crate::signal::{StrategyIndex, NUM_STRATEGIES};
use crate::SimRng;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct A2cConfig {
    pub hidden: Vec<usize>,
    pub dropout: f64,
    pub lr: f64,
    pub lr_decay: f64,
    /// Episodes between learning-rate decays.
    pub lr_decay_every: u32,
    pub gamma: f64,
    /// Global gradient-norm cap, per network.
    pub grad_clip: f64,
    pub memory_capacity: usize,
    pub batch_size: usize,
    /// Priority exponent.
    pub alpha: f64,
    /// Importance-sampling exponent at the first step, annealed to 1.
    pub beta_start: f64,
    pub beta_steps: u64,
    pub priority_eps: f64,
    pub entropy_coef: f64,
    pub filter_floor: f64,
    pub filter_mode: FilterMode,
}

impl Default for A2cConfig {
    fn default() -> Self {
        Self {
            hidden: vec![128, 128, 64, 32],
            dropout: 0.01,
            lr: 5e-4,
            lr_decay: 0.9,
            lr_decay_every: 20,
            gamma: 0.99,
            grad_clip: 1.0,
            memory_capacity: 10_000,
            batch_size: 32,
            alpha: 0.6,
            beta_start: 0.4,
            beta_steps: 5_000,
            priority_eps: 1e-3,
            entropy_coef: 0.0,
            filter_floor: 1e-3,
            filter_mode: FilterMode::Probability,
        }
    }
}

impl A2cConfig {
    pub fn validate(&self) -> Result<()> {
        if self.hidden.is_empty() || self.hidden.contains(&0) {
            return Err(Error::Config("hidden widths must be positive".into()));
        }
        if !(self.lr > 0.0) || !(self.lr_decay > 0.0 && self.lr_decay <= 1.0) {
            return Err(Error::Config("need lr > 0 and 0 < lr_decay <= 1".into()));
        }
        if !(0.0..=1.0).contains(&self.gamma) {
            return Err(Error::Config("gamma must lie in [0, 1]".into()));
        }
        if self.batch_size == 0 || self.memory_capacity < self.batch_size {
            return Err(Error::Config("need 1 <= batch_size <= memory_capacity".into()));
        }
        if !(self.grad_clip > 0.0) || !(self.alpha >= 0.0) || !(0.0..=1.0).contains(&self.beta_start) {
            return Err(Error::Config("bad grad_clip/alpha/beta_start".into()));
        }
        Ok(())
    }

    fn widths(&self, input: usize, output: usize) -> Vec<usize> {
        std::iter::once(input).chain(self.hidden.iter().copied()).chain(std::iter::once(output)).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Losses {
    pub actor: f64,
    pub critic: f64,
}

#[derive(Debug, Clone)]
pub struct Gradients {
    pub losses: Losses,
    pub policy: Mlp,
    pub value: Mlp,
    pub td_errors: Vec<f64>,
}

/// Policy and value networks plus replay memory and an optional APD filter.
#[derive(Debug, Clone)]
pub struct A2cAgent {
    pub policy: Mlp,
    pub value: Mlp,
    policy_opt: Adam,
    value_opt: Adam,
    memory: ReplayMemory,
    filter: Option<ApdFilter>,
    cfg: A2cConfig,
    rng: SimRng,
    /// Greedy actions and no dropout when set.
    pub eval_mode: bool,
    episodes: u32,
    steps: u64,
}

impl A2cAgent {
    pub fn new(input_dim: usize, cfg: A2cConfig, mut rng: SimRng) -> Result<Self> {
        cfg.validate()?;
        let policy = Mlp::new(&cfg.widths(input_dim, NUM_STRATEGIES), cfg.dropout, &mut rng)?;
        let value = Mlp::new(&cfg.widths(input_dim, 1), cfg.dropout, &mut rng)?;
        Ok(Self {
            policy_opt: Adam::new(&policy, cfg.lr),
            value_opt: Adam::new(&value, cfg.lr),
            memory: ReplayMemory::new(cfg.memory_capacity, cfg.alpha, cfg.priority_eps),
            policy,
            value,
            filter: None,
            cfg,
            rng,
            eval_mode: false,
            episodes: 0,
            steps: 0,
        })
    }

    pub fn with_filter(mut self, filter: ApdFilter) -> Self {
        self.filter = Some(filter);
        self
    }

    pub fn filter(&self) -> Option<&ApdFilter> {
        self.filter.as_ref()
    }

    pub fn config(&self) -> &A2cConfig {
        &self.cfg
    }

    pub fn memory(&self) -> &ReplayMemory {
        &self.memory
    }

    pub fn lr(&self) -> f64 {
        self.policy_opt.lr
    }

    pub fn train_steps(&self) -> u64 {
        self.steps
    }

    fn beta(&self) -> f64 {
        let frac = (self.steps as f64 / self.cfg.beta_steps.max(1) as f64).min(1.0);
        self.cfg.beta_start + (1.0 - self.cfg.beta_start) * frac
    }

    /// Filtered policy rows for a batch of logits.
    fn filtered(&self, logits: &Array2<f64>) -> Array2<f64> {
        match (&self.filter, self.cfg.filter_mode) {
            (None, _) => softmax_rows(logits),
            (Some(f), FilterMode::Probability) => {
                let mut p = softmax_rows(logits);
                for mut row in p.rows_mut() {
                    let out = apply_filter(row.as_slice().expect("row-major"), f);
                    row.assign(&Array1::from(out));
                }
                p
            }
            (Some(f), FilterMode::Logit) => {
                let w = Array1::from(f.effective().to_vec());
                softmax_rows(&(logits * &w))
            }
        }
    }

    /// Action probabilities after the filter.
    pub fn probs(&self, state: &[f64]) -> Result<Vec<f64>> {
        let x = Array2::from_shape_vec((1, state.len()), state.to_vec()).expect("one row");
        let logits = self.policy.forward(x.view())?;
        Ok(self.filtered(&logits).row(0).to_vec())
    }

    pub fn state_value(&self, state: &[f64]) -> Result<f64> {
        let x = Array2::from_shape_vec((1, state.len()), state.to_vec()).expect("one row");
        Ok(self.value.forward(x.view())?[[0, 0]])
    }

    /// Samples an action while training, takes the argmax in evaluation mode.
    pub fn act(&mut self, state: &[f64]) -> Result<StrategyIndex> {
        let p = self.probs(state)?;
        let k = if self.eval_mode { argmax(&p) } else { sample_index(&p, self.rng.random()) };
        Ok(StrategyIndex::from_zero_based(k))
    }

    pub fn remember(&mut self, t: Transition) {
        self.memory.push(t);
    }

    /// Counts a finished episode and applies the learning-rate schedule.
    pub fn end_episode(&mut self) {
        self.episodes += 1;
        if self.cfg.lr_decay_every > 0 && self.episodes % self.cfg.lr_decay_every == 0 {
            self.policy_opt.lr *= self.cfg.lr_decay;
            self.value_opt.lr *= self.cfg.lr_decay;
        }
    }

    /// One gradient step on a prioritized batch; `None` until the memory holds a full batch.
    pub fn train_step(&mut self) -> Option<Losses> {
        let sample = self.memory.sample(self.cfg.batch_size, self.beta(), &mut self.rng)?;
        let batch: Vec<&Transition> = sample.indices.iter().map(|&k| self.memory.get(k)).collect();
        let mut rng = self.rng.clone();
        let grads = self
            .gradients(&batch, &sample.weights, Some(&mut rng))
            .expect("stored states match the input size");
        self.rng = rng;
        let Gradients { losses, mut policy, mut value, td_errors } = grads;
        clip_grad_norm(&mut policy, self.cfg.grad_clip);
        clip_grad_norm(&mut value, self.cfg.grad_clip);
        self.policy_opt.step(&mut self.policy, &policy);
        self.value_opt.step(&mut self.value, &value);
        for (&k, d) in sample.indices.iter().zip(td_errors) {
            self.memory.update(k, d);
        }
        self.steps += 1;
        Some(losses)
    }

    /// Losses and unclipped parameter gradients on a weighted batch.
    ///
    /// Critic: `Σ w·(y − V(s))² / B` with `y = r + γ·V(s′)` (`y = r` at the end
    /// of an episode). Actor: `−Σ w·δ·ln π_f(a|s) / B` with `δ = y − V(s)`
    /// held constant. Dropout is active only when `rng` is given.
    pub fn gradients(
        &self,
        batch: &[&Transition],
        weights: &[f64],
        mut rng: Option<&mut SimRng>,
    ) -> Result<Gradients> {
        let n = batch.len();
        let dim = self.policy.input_dim();
        let b = n as f64;
        let mut s = Array2::zeros((n, dim));
        let mut s2 = Array2::zeros((n, dim));
        for (row, t) in batch.iter().enumerate() {
            if t.state.len() != dim || t.next_state.len() != dim {
                return Err(Error::Dimension { expected: dim, got: t.state.len() });
            }
            s.row_mut(row).assign(&ArrayView1::from(&t.state[..]));
            s2.row_mut(row).assign(&ArrayView1::from(&t.next_state[..]));
        }
        let next_v = self.value.forward(s2.view())?;
        let (v, v_cache) = self.value.forward_train(s.view(), rng.as_deref_mut())?;
        let (logits, p_cache) = self.policy.forward_train(s.view(), rng.as_deref_mut())?;
        let pf = self.filtered(&logits);

        let mut dv = Array2::zeros(v.raw_dim());
        let mut dz = Array2::zeros(logits.raw_dim());
        let (mut actor, mut critic) = (0.0, 0.0);
        let w_eff = self.filter.as_ref().map(|f| f.effective());
        let mut td_errors = Vec::with_capacity(n);
        for (row, (t, &w)) in batch.iter().zip(weights).enumerate() {
            let target = if t.done { t.reward } else { t.reward + self.cfg.gamma * next_v[[row, 0]] };
            let delta = target - v[[row, 0]];
            td_errors.push(delta);
            critic += w * delta * delta / b;
            dv[[row, 0]] = -2.0 * w * delta / b;

            let p = pf.row(row);
            actor -= w * delta * p[t.action].max(f64::MIN_POSITIVE).ln() / b;
            let entropy: f64 = -p.iter().filter(|&&q| q > 0.0).map(|q| q * q.ln()).sum::<f64>();
            if self.cfg.entropy_coef > 0.0 {
                actor -= self.cfg.entropy_coef * entropy / b;
            }
            for a in 0..NUM_STRATEGIES {
                let onehot = if a == t.action { 1.0 } else { 0.0 };
                let mut g = -w * delta * (onehot - p[a]) / b;
                if self.cfg.entropy_coef > 0.0 && p[a] > 0.0 {
                    // d(−cH)/dz_a = c·p_a·(ln p_a + H)
                    g += self.cfg.entropy_coef * p[a] * (p[a].ln() + entropy) / b;
                }
                if let (Some(we), FilterMode::Logit) = (&w_eff, self.cfg.filter_mode) {
                    g *= we[a];
                }
                dz[[row, a]] = g;
            }
        }
        Ok(Gradients {
            losses: Losses { actor, critic },
            policy: self.policy.backward(&p_cache, &dz),
            value: self.value.backward(&v_cache, &dv),
            td_errors,
        })
    }

    pub fn snapshot(&self) -> ParamSnapshot {
        ParamSnapshot {
            format: SNAPSHOT_FORMAT.into(),
            version: SNAPSHOT_VERSION,
            policy_shapes: self.policy.shapes(),
            value_shapes: self.value.shapes(),
            filter: self.filter.clone(),
            policy: self.policy.flatten(),
            value: self.value.flatten(),
        }
    }

    /// Loads parameters from a snapshot of the same architecture.
    pub fn restore(&mut self, snap: &ParamSnapshot) -> Result<()> {
        if snap.format != SNAPSHOT_FORMAT || snap.version != SNAPSHOT_VERSION {
            return Err(Error::Snapshot(format!("unsupported {} v{}", snap.format, snap.version)));
        }
        if snap.policy_shapes != self.policy.shapes() || snap.value_shapes != self.value.shapes() {
            return Err(Error::Snapshot("layer shapes differ".into()));
        }
        self.policy.load_flat(&snap.policy)?;
        self.value.load_flat(&snap.value)?;
        self.filter = snap.filter.clone();
        Ok(())
    }
}

const SNAPSHOT_FORMAT: &str = "honeydrone-a2c";
const SNAPSHOT_VERSION: u32 = 1;

/// Flat parameter dump with the layer shapes needed to read it back.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamSnapshot {
    pub format: String,
    pub version: u32,
    pub policy_shapes: Vec<(usize, usize)>,
    pub value_shapes: Vec<(usize, usize)>,
    pub filter: Option<ApdFilter>,
    pub policy: Vec<f64>,
    pub value: Vec<f64>,
}

impl ParamSnapshot {
    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, serde_json::to_vec(self)?)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let snap: Self = serde_json::from_slice(&std::fs::read(path)?)?;
        Ok(snap)
    }
}
