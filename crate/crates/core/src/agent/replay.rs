use rand::seq::index;

use super::Experience;
use crate::rng::Rng;

/// Fixed-capacity ring of experiences; once full, each insertion evicts the
/// oldest entry.
#[derive(Clone, Debug)]
pub struct ReplayBuffer {
    capacity: usize,
    items: Vec<Experience>,
    cursor: usize,
}

impl ReplayBuffer {
    pub fn new(capacity: usize) -> Self {
        assert!(capacity > 0, "replay capacity must be positive");
        Self {
            capacity,
            items: Vec::new(),
            cursor: 0,
        }
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn push(&mut self, exp: Experience) {
        if self.items.len() < self.capacity {
            self.items.push(exp);
        } else {
            self.items[self.cursor] = exp;
        }
        self.cursor = (self.cursor + 1) % self.capacity;
    }

    pub fn extend(&mut self, exps: impl IntoIterator<Item = Experience>) {
        for e in exps {
            self.push(e);
        }
    }

    /// Oldest to newest.
    pub fn iter(&self) -> impl Iterator<Item = &Experience> {
        let split = if self.items.len() < self.capacity {
            0
        } else {
            self.cursor
        };
        self.items[split..].iter().chain(&self.items[..split])
    }

    /// Up to `k` distinct experiences, uniformly at random.
    pub fn sample(&self, k: usize, rng: &mut Rng) -> Vec<&Experience> {
        let k = k.min(self.items.len());
        index::sample(rng, self.items.len(), k)
            .into_iter()
            .map(|i| &self.items[i])
            .collect()
    }
}
