//! Prioritized experience replay over a sum tree.

use rand::Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Transition {
    pub state: Vec<f64>,
    pub action: usize,
    pub reward: f64,
    pub next_state: Vec<f64>,
    pub done: bool,
}

/// Binary tree of partial sums over a power-of-two number of leaves.
#[derive(Debug, Clone)]
pub struct SumTree {
    leaves: usize,
    nodes: Vec<f64>,
}

impl SumTree {
    pub fn new(capacity: usize) -> Self {
        let leaves = capacity.max(1).next_power_of_two();
        Self { leaves, nodes: vec![0.0; 2 * leaves] }
    }

    pub fn total(&self) -> f64 {
        self.nodes[1]
    }

    pub fn get(&self, k: usize) -> f64 {
        self.nodes[self.leaves + k]
    }

    pub fn set(&mut self, k: usize, value: f64) {
        let mut i = self.leaves + k;
        self.nodes[i] = value;
        while i > 1 {
            i /= 2;
            self.nodes[i] = self.nodes[2 * i] + self.nodes[2 * i + 1];
        }
    }

    /// Leaf whose cumulative interval contains `mass`, for `0 <= mass < total`.
    pub fn find(&self, mut mass: f64) -> usize {
        let mut i = 1;
        while i < self.leaves {
            let left = self.nodes[2 * i];
            if mass < left || self.nodes[2 * i + 1] == 0.0 {
                i *= 2;
            } else {
                mass -= left;
                i = 2 * i + 1;
            }
        }
        i - self.leaves
    }
}

#[derive(Debug, Clone)]
pub struct Sample {
    pub indices: Vec<usize>,
    /// Importance-sampling weights, max-normalized.
    pub weights: Vec<f64>,
}

/// Ring buffer whose sampling probability is `priority^α / Σ priority^α`.
#[derive(Debug, Clone)]
pub struct ReplayMemory {
    capacity: usize,
    alpha: f64,
    eps: f64,
    items: Vec<Transition>,
    next: usize,
    tree: SumTree,
    max_priority: f64,
}

impl ReplayMemory {
    pub fn new(capacity: usize, alpha: f64, eps: f64) -> Self {
        Self {
            capacity: capacity.max(1),
            alpha,
            eps,
            items: Vec::new(),
            next: 0,
            tree: SumTree::new(capacity),
            max_priority: 1.0,
        }
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn get(&self, k: usize) -> &Transition {
        &self.items[k]
    }

    /// Stores a transition at the current maximum priority, evicting the oldest when full.
    pub fn push(&mut self, t: Transition) {
        let slot = self.next;
        if self.items.len() < self.capacity {
            self.items.push(t);
        } else {
            self.items[slot] = t;
        }
        self.tree.set(slot, self.max_priority.powf(self.alpha));
        self.next = (self.next + 1) % self.capacity;
    }

    /// Raw priority (before the α exponent) of slot `k`.
    pub fn priority(&self, k: usize) -> f64 {
        self.tree.get(k).powf(1.0 / self.alpha)
    }

    /// Sets the priority of slot `k` from a TD error.
    pub fn update(&mut self, k: usize, td_error: f64) {
        let p = td_error.abs() + self.eps;
        self.set_priority(k, p);
    }

    pub fn set_priority(&mut self, k: usize, p: f64) {
        self.max_priority = self.max_priority.max(p);
        self.tree.set(k, p.powf(self.alpha));
    }

    /// Probability that one draw returns slot `k`.
    pub fn probability(&self, k: usize) -> f64 {
        self.tree.get(k) / self.tree.total()
    }

    /// Draws one slot index.
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let mass = rng.random::<f64>() * self.tree.total();
        self.tree.find(mass).min(self.items.len() - 1)
    }

    /// Draws `batch` slots with replacement. Returns `None` while the memory
    /// holds fewer than `batch` transitions.
    pub fn sample<R: Rng + ?Sized>(&self, batch: usize, beta: f64, rng: &mut R) -> Option<Sample> {
        if self.items.len() < batch || batch == 0 {
            return None;
        }
        let n = self.items.len() as f64;
        let indices: Vec<usize> = (0..batch).map(|_| self.draw(rng)).collect();
        let mut weights: Vec<f64> = indices.iter().map(|&k| (n * self.probability(k)).powf(-beta)).collect();
        let max = weights.iter().copied().fold(0.0, f64::max);
        weights.iter_mut().for_each(|w| *w /= max);
        Some(Sample { indices, weights })
    }
}
