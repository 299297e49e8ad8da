//! Rooted label trees and their `l₁` products.
//!
//! A vertex of the tree built from label sets `Q₁, Q₂, …` is a finite
//! sequence `(q₁,…,q_k)` with `q_κ ∈ Q_κ`; its parent drops the last label.
//! Trees are never materialized, so distances come from common prefixes.

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct TreeVertex<L> {
    labels: Vec<L>,
}

impl<L> Default for TreeVertex<L> {
    fn default() -> Self {
        TreeVertex { labels: Vec::new() }
    }
}

impl<L> TreeVertex<L> {
    pub fn root() -> Self {
        Self::default()
    }

    pub fn new(labels: Vec<L>) -> Self {
        TreeVertex { labels }
    }

    pub fn labels(&self) -> &[L] {
        &self.labels
    }

    pub fn depth(&self) -> usize {
        self.labels.len()
    }

    pub fn is_root(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn push(&mut self, label: L) {
        self.labels.push(label);
    }

    pub fn map<M>(&self, f: impl FnMut(&L) -> M) -> TreeVertex<M> {
        TreeVertex { labels: self.labels.iter().map(f).collect() }
    }
}

impl<L: Clone> TreeVertex<L> {
    pub fn parent(&self) -> Option<Self> {
        if self.labels.is_empty() {
            None
        } else {
            Some(TreeVertex { labels: self.labels[..self.labels.len() - 1].to_vec() })
        }
    }

    /// The ancestor at `depth` (the vertex itself when `depth` is its own depth).
    pub fn truncated(&self, depth: usize) -> Self {
        TreeVertex { labels: self.labels[..depth.min(self.labels.len())].to_vec() }
    }
}

impl<L: PartialEq> TreeVertex<L> {
    pub fn common_prefix_len(&self, other: &Self) -> usize {
        self.labels.iter().zip(&other.labels).take_while(|(a, b)| a == b).count()
    }
}

/// `d(u, v) = |u| + |v| − 2·lcp(u, v)`.
pub fn tree_distance<L: PartialEq>(u: &TreeVertex<L>, v: &TreeVertex<L>) -> usize {
    u.depth() + v.depth() - 2 * u.common_prefix_len(v)
}

/// A point of the product of `n` trees, one coordinate per colour.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct ProductPoint<L> {
    coordinates: Vec<TreeVertex<L>>,
}

impl<L> ProductPoint<L> {
    pub fn new(coordinates: Vec<TreeVertex<L>>) -> Self {
        ProductPoint { coordinates }
    }

    pub fn roots(n: usize) -> Self {
        ProductPoint { coordinates: (0..n).map(|_| TreeVertex::root()).collect() }
    }

    pub fn coordinates(&self) -> &[TreeVertex<L>] {
        &self.coordinates
    }

    /// Coordinate for colour `c` (colours start at 1).
    pub fn coordinate(&self, c: usize) -> &TreeVertex<L> {
        &self.coordinates[c - 1]
    }

    pub fn arity(&self) -> usize {
        self.coordinates.len()
    }

    pub fn map<M>(&self, mut f: impl FnMut(&L) -> M) -> ProductPoint<M> {
        ProductPoint { coordinates: self.coordinates.iter().map(|v| v.map(&mut f)).collect() }
    }
}

/// The `l₁` product metric.
pub fn product_distance<L: PartialEq>(p: &ProductPoint<L>, q: &ProductPoint<L>) -> Result<usize> {
    if p.arity() != q.arity() {
        return Err(Error::ArityMismatch(p.arity(), q.arity()));
    }
    Ok(p.coordinates.iter().zip(&q.coordinates).map(|(u, v)| tree_distance(u, v)).sum())
}
