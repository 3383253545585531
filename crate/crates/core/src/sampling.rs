//! Snowball sampling: grow a subgraph from a seed node until a minimum size
//! is reached, then return the induced subgraph.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{GeoGraph, NodeId};

/// How the seed node is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeedNode {
    Random,
    Explicit(NodeId),
}

/// How the frontier grows per step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Expansion {
    /// Add every neighbor of the current node set at once. The last layer is
    /// added whole, so samples overshoot the minimum size slightly.
    #[default]
    Layer,
    /// Add one frontier node at a time (sensitivity-check mode).
    Node,
}

#[derive(Debug, Clone, Copy)]
pub struct SampleSpec {
    pub seed_node: SeedNode,
    pub min_size: usize,
    pub rng_seed: u64,
    pub expansion: Expansion,
}

impl SampleSpec {
    pub fn new(seed_node: SeedNode, min_size: usize, rng_seed: u64) -> Self {
        Self {
            seed_node,
            min_size,
            rng_seed,
            expansion: Expansion::Layer,
        }
    }
}

/// Grows a snowball sample and returns the induced subgraph (all edges of
/// `g` among sampled nodes, weights preserved). Stops as soon as the sample
/// reaches `min_size` nodes or the seed's component is exhausted.
pub fn snowball_sample(g: &GeoGraph, spec: &SampleSpec) -> Result<GeoGraph> {
    if g.node_count() == 0 {
        return Err(Error::InvalidConfig("cannot sample an empty graph".into()));
    }
    if spec.min_size == 0 {
        return Err(Error::InvalidConfig("min_size must be >= 1".into()));
    }
    let seed_idx = match spec.seed_node {
        SeedNode::Explicit(id) => g.index_of(id).ok_or(Error::NodeNotFound(id))?,
        SeedNode::Random => {
            let mut rng = ChaCha8Rng::seed_from_u64(spec.rng_seed);
            let all: Vec<usize> = (0..g.node_count()).collect();
            *all.choose(&mut rng).expect("non-empty graph")
        }
    };
    let selected = grow(g, seed_idx, spec.min_size, spec.expansion);
    let ids: BTreeSet<NodeId> = selected.iter().map(|i| g.id_at(*i)).collect();
    g.induced(&ids)
}

fn grow(g: &GeoGraph, seed: usize, min_size: usize, expansion: Expansion) -> BTreeSet<usize> {
    let mut selected: BTreeSet<usize> = BTreeSet::new();
    selected.insert(seed);
    match expansion {
        Expansion::Layer => {
            let mut frontier: Vec<usize> = vec![seed];
            while selected.len() < min_size && !frontier.is_empty() {
                let mut next = Vec::new();
                for &u in &frontier {
                    for &(v, _) in g.neighbors_at(u) {
                        if selected.insert(v) {
                            next.push(v);
                        }
                    }
                }
                frontier = next;
            }
        }
        Expansion::Node => {
            let mut queue: std::collections::VecDeque<usize> = [seed].into();
            let mut enqueued: BTreeSet<usize> = selected.clone();
            'outer: while let Some(u) = queue.pop_front() {
                for &(v, _) in g.neighbors_at(u) {
                    if enqueued.insert(v) {
                        queue.push_back(v);
                        selected.insert(v);
                        if selected.len() >= min_size {
                            break 'outer;
                        }
                    }
                }
            }
        }
    }
    selected
}

/// Draws `count` snowball samples from distinct random seed nodes.
///
/// Components smaller than `min_size` yield whole-component samples; the
/// caller can detect them by their node counts.
pub fn batch_samples(
    g: &GeoGraph,
    count: usize,
    min_size: usize,
    rng_seed: u64,
) -> Result<Vec<GeoGraph>> {
    if count == 0 {
        return Err(Error::InvalidConfig("count must be >= 1".into()));
    }
    if count > g.node_count() {
        return Err(Error::InvalidConfig(format!(
            "cannot draw {count} samples from {} distinct seed nodes",
            g.node_count()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let mut order: Vec<usize> = (0..g.node_count()).collect();
    order.shuffle(&mut rng);
    order
        .into_iter()
        .take(count)
        .map(|seed_idx| {
            let spec = SampleSpec::new(SeedNode::Explicit(g.id_at(seed_idx)), min_size, rng_seed);
            snowball_sample(g, &spec)
        })
        .collect()
}
