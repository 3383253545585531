//! Partition scoring: degree-product (NG) modularity, distance modularity
//! under the gravity null model, move gains, and per-community quality.
//!
//! Both scores share one pair-sum convention: the double sum inside each
//! community runs over ordered pairs including `i = j`, with `w_ii` equal to
//! twice the self-loop weight. This is the convention under which phase-2
//! aggregation preserves scores across hierarchy levels.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geodesy::{DecayKernel, DistanceMatrix};
use crate::graph::{GeoGraph, NodeId};

/// Community label. Partitions are canonical: labels run `0..q` ordered by
/// each community's smallest member node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CommunityId(pub u32);

impl fmt::Display for CommunityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// A disjoint cover of a graph's nodes by non-empty communities.
#[derive(Debug, Clone, PartialEq)]
pub struct Partition {
    ids: Vec<NodeId>,
    comm_of: Vec<CommunityId>,
    members: Vec<Vec<usize>>,
}

impl Partition {
    /// Builds a partition from per-index labels (any `usize` labels; they are
    /// canonicalized). `labels[i]` is the community of the node at internal
    /// index `i`.
    pub fn from_index_labels(g: &GeoGraph, labels: &[usize]) -> Result<Self> {
        if labels.len() != g.node_count() {
            return Err(Error::PartitionMismatch(format!(
                "{} labels for {} nodes",
                labels.len(),
                g.node_count()
            )));
        }
        let mut canon: HashMap<usize, u32> = HashMap::new();
        let mut comm_of = Vec::with_capacity(labels.len());
        let mut members: Vec<Vec<usize>> = Vec::new();
        for (idx, label) in labels.iter().enumerate() {
            let next = members.len() as u32;
            let c = *canon.entry(*label).or_insert_with(|| {
                members.push(Vec::new());
                next
            });
            comm_of.push(CommunityId(c));
            members[c as usize].push(idx);
        }
        Ok(Self {
            ids: g.ids().to_vec(),
            comm_of,
            members,
        })
    }

    /// Builds a partition from a node-id assignment covering exactly the
    /// graph's nodes.
    pub fn from_map(g: &GeoGraph, assignment: &BTreeMap<NodeId, CommunityId>) -> Result<Self> {
        if assignment.len() != g.node_count() {
            return Err(Error::PartitionMismatch(format!(
                "assignment covers {} nodes, graph has {}",
                assignment.len(),
                g.node_count()
            )));
        }
        let mut labels = Vec::with_capacity(g.node_count());
        for id in g.ids() {
            let c = assignment
                .get(id)
                .ok_or_else(|| Error::PartitionMismatch(format!("node {id} unassigned")))?;
            labels.push(c.0 as usize);
        }
        Self::from_index_labels(g, &labels)
    }

    /// One community per node.
    pub fn singletons(g: &GeoGraph) -> Self {
        let labels: Vec<usize> = (0..g.node_count()).collect();
        Self::from_index_labels(g, &labels).expect("labels cover graph")
    }

    /// All nodes in a single community.
    pub fn single(g: &GeoGraph) -> Self {
        let labels = vec![0usize; g.node_count()];
        Self::from_index_labels(g, &labels).expect("labels cover graph")
    }

    pub fn node_count(&self) -> usize {
        self.ids.len()
    }

    pub fn community_count(&self) -> usize {
        self.members.len()
    }

    pub fn community_ids(&self) -> impl Iterator<Item = CommunityId> {
        (0..self.members.len() as u32).map(CommunityId)
    }

    pub fn community_of(&self, id: NodeId) -> Option<CommunityId> {
        let idx = self.ids.binary_search(&id).ok()?;
        Some(self.comm_of[idx])
    }

    pub fn community_of_index(&self, idx: usize) -> CommunityId {
        self.comm_of[idx]
    }

    /// Member internal indices of a community, ascending.
    pub fn members_idx(&self, c: CommunityId) -> Option<&[usize]> {
        self.members.get(c.0 as usize).map(|v| v.as_slice())
    }

    pub fn member_ids(&self, c: CommunityId) -> Option<Vec<NodeId>> {
        self.members_idx(c)
            .map(|m| m.iter().map(|i| self.ids[*i]).collect())
    }

    pub fn node_ids(&self) -> &[NodeId] {
        &self.ids
    }

    /// True when this partition was built over the same node set as `g`.
    pub fn matches(&self, g: &GeoGraph) -> bool {
        self.ids == g.ids()
    }

    pub(crate) fn labels(&self) -> Vec<usize> {
        self.comm_of.iter().map(|c| c.0 as usize).collect()
    }
}

fn check_partition(g: &GeoGraph, p: &Partition) -> Result<()> {
    if !p.matches(g) {
        return Err(Error::PartitionMismatch(
            "partition node set differs from graph".into(),
        ));
    }
    Ok(())
}

/// Newman-Girvan modularity: observed intra-community weight minus the
/// degree-product expectation `k_i k_j / 2m`, normalized by `2m`.
pub fn ng_modularity(g: &GeoGraph, p: &Partition) -> Result<f64> {
    check_partition(g, p)?;
    let m = g.total_weight();
    if m <= 0.0 {
        return Err(Error::UndefinedScore);
    }
    let two_m = 2.0 * m;
    let mut total = 0.0;
    for c in p.community_ids() {
        let members = p.members_idx(c).unwrap();
        let w_c = intra_pair_weight(g, p, c, members);
        let k_c: f64 = members.iter().map(|i| g.degree_at(*i)).sum();
        total += w_c - k_c * k_c / two_m;
    }
    Ok(total / two_m)
}

/// Sum over ordered member pairs of `w_ij` (intra edges twice, self-loop
/// pairs once at `w_ii = 2 * loop`).
fn intra_pair_weight(g: &GeoGraph, p: &Partition, c: CommunityId, members: &[usize]) -> f64 {
    let mut w = 0.0;
    for &i in members {
        for &(j, wij) in g.neighbors_at(i) {
            if j > i && p.community_of_index(j) == c {
                w += 2.0 * wij;
            }
        }
        w += 2.0 * g.self_loop_at(i);
    }
    w
}

/// Precomputed distance null model: per-node denominators `D_i` plus the
/// kernel values needed for on-demand `p_hat` / `p_sym`.
#[derive(Debug, Clone)]
pub struct NullModelTable {
    ids: Vec<NodeId>,
    degrees: Vec<f64>,
    two_m: f64,
    denom: Vec<f64>,
    decay: DecayData,
}

#[derive(Debug, Clone)]
enum DecayData {
    /// Constant kernel: every pair decays to 1, denominators are exactly 2m.
    Constant,
    /// Kernel values f(d_ij) for all pairs, row-major n x n.
    Table(Vec<f64>),
}

impl NullModelTable {
    pub fn ids(&self) -> &[NodeId] {
        &self.ids
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn two_m(&self) -> f64 {
        self.two_m
    }

    pub fn degree(&self, idx: usize) -> f64 {
        self.degrees[idx]
    }

    /// Denominator `D_i = sum_q k_q f(d(q, i))`, including the `q = i` term.
    pub fn denominator(&self, idx: usize) -> f64 {
        self.denom[idx]
    }

    pub fn is_constant(&self) -> bool {
        matches!(self.decay, DecayData::Constant)
    }

    /// Kernel value for a pair of internal indices.
    #[inline]
    pub fn decay_at(&self, i: usize, j: usize) -> f64 {
        match &self.decay {
            DecayData::Constant => 1.0,
            DecayData::Table(f) => f[i * self.ids.len() + j],
        }
    }

    fn index_of(&self, id: NodeId) -> Result<usize> {
        self.ids.binary_search(&id).map_err(|_| Error::NodeNotFound(id))
    }

    /// Directed null-model entry `p_hat(i, j) = k_i k_j f(d_ij) / D_i`.
    /// Not symmetric in general.
    pub fn p_hat(&self, i: NodeId, j: NodeId) -> Result<f64> {
        let (ui, uj) = (self.index_of(i)?, self.index_of(j)?);
        Ok(self.p_hat_idx(ui, uj))
    }

    #[inline]
    pub fn p_hat_idx(&self, i: usize, j: usize) -> f64 {
        let ki = self.degrees[i];
        let kj = self.degrees[j];
        if ki == 0.0 || kj == 0.0 {
            return 0.0;
        }
        ki * kj * self.decay_at(i, j) / self.denom[i]
    }

    /// Symmetrized null-model entry `(p_hat(i,j) + p_hat(j,i)) / 2`.
    /// Symmetric bit-for-bit.
    pub fn p_sym(&self, i: NodeId, j: NodeId) -> Result<f64> {
        let (ui, uj) = (self.index_of(i)?, self.index_of(j)?);
        Ok(self.p_sym_idx(ui, uj))
    }

    #[inline]
    pub fn p_sym_idx(&self, i: usize, j: usize) -> f64 {
        let ki = self.degrees[i];
        let kj = self.degrees[j];
        if ki == 0.0 || kj == 0.0 {
            return 0.0;
        }
        let num = ki * kj * self.decay_at(i, j);
        0.5 * (num / self.denom[i] + num / self.denom[j])
    }
}

/// Builds the [`NullModelTable`] for a graph, distance table, and kernel.
///
/// For the constant kernel the denominators equal `2m` identically (that is
/// `sum_q k_q`), which keeps the reduction to NG modularity exact.
pub fn build_null_model(
    g: &GeoGraph,
    dm: &DistanceMatrix,
    kernel: DecayKernel,
) -> Result<NullModelTable> {
    if dm.ids() != g.ids() {
        return Err(Error::PartitionMismatch(
            "distance matrix node set differs from graph".into(),
        ));
    }
    let n = g.node_count();
    let degrees: Vec<f64> = (0..n).map(|i| g.degree_at(i)).collect();
    if degrees.iter().all(|k| *k == 0.0) {
        return Err(Error::UndefinedNullModel);
    }
    let two_m = 2.0 * g.total_weight();
    let (denom, decay) = match kernel {
        DecayKernel::Constant => (vec![two_m; n], DecayData::Constant),
        DecayKernel::Exponential { .. } => {
            let mut f = vec![0.0f64; n * n];
            f.par_chunks_mut(n).enumerate().for_each(|(i, row)| {
                for (j, cell) in row.iter_mut().enumerate() {
                    *cell = kernel.value(dm.get(i, j));
                }
            });
            let denom: Vec<f64> = (0..n)
                .into_par_iter()
                .map(|i| {
                    let row = &f[i * n..(i + 1) * n];
                    row.iter().zip(&degrees).map(|(fij, k)| k * fij).sum()
                })
                .collect();
            (denom, DecayData::Table(f))
        }
    };
    Ok(NullModelTable {
        ids: g.ids().to_vec(),
        degrees,
        two_m,
        denom,
        decay,
    })
}

/// Builds the constant-kernel (sigma to infinity) table directly, without
/// a distance matrix: denominators are `2m` for every node.
pub fn build_constant_null_model(g: &GeoGraph) -> Result<NullModelTable> {
    let n = g.node_count();
    let degrees: Vec<f64> = (0..n).map(|i| g.degree_at(i)).collect();
    if degrees.iter().all(|k| *k == 0.0) {
        return Err(Error::UndefinedNullModel);
    }
    let two_m = 2.0 * g.total_weight();
    Ok(NullModelTable {
        ids: g.ids().to_vec(),
        degrees,
        two_m,
        denom: vec![two_m; n],
        decay: DecayData::Constant,
    })
}

fn check_table(g: &GeoGraph, t: &NullModelTable) -> Result<()> {
    if t.ids() != g.ids() {
        return Err(Error::PartitionMismatch(
            "null model node set differs from graph".into(),
        ));
    }
    Ok(())
}

/// Distance modularity: the NG pair-sum with `P_ij` replaced by the
/// symmetrized gravity null model of `t`.
pub fn distance_modularity(g: &GeoGraph, p: &Partition, t: &NullModelTable) -> Result<f64> {
    check_partition(g, p)?;
    check_table(g, t)?;
    let m = g.total_weight();
    if m <= 0.0 {
        return Err(Error::UndefinedScore);
    }
    let two_m = 2.0 * m;
    let mut total = 0.0;
    for c in p.community_ids() {
        let members = p.members_idx(c).unwrap();
        let w_c = intra_pair_weight(g, p, c, members);
        total += w_c - null_pair_sum(t, members);
    }
    Ok(total / two_m)
}

/// Sum over ordered member pairs (including `i = j`) of `p_sym`.
fn null_pair_sum(t: &NullModelTable, members: &[usize]) -> f64 {
    if t.is_constant() {
        let k_c: f64 = members.iter().map(|i| t.degree(*i)).sum();
        return k_c * k_c / t.two_m();
    }
    let mut sum = 0.0;
    for (a, &i) in members.iter().enumerate() {
        sum += t.p_sym_idx(i, i);
        for &j in &members[a + 1..] {
            sum += 2.0 * t.p_sym_idx(i, j);
        }
    }
    sum
}

/// Modularity gain of inserting node `i` (currently in no community) into
/// community `c`: `k_i_in - sum_{j in c} p_sym(i, j)`. Moving `i` into `c`
/// changes the objective by exactly `2 * gain / 2m`.
pub fn gain(
    t: &NullModelTable,
    g: &GeoGraph,
    i: NodeId,
    c: CommunityId,
    p: &Partition,
) -> Result<f64> {
    check_partition(g, p)?;
    check_table(g, t)?;
    let ui = g.index_of(i).ok_or(Error::NodeNotFound(i))?;
    let members = p
        .members_idx(c)
        .ok_or_else(|| Error::PartitionMismatch(format!("no community {c}")))?;
    if p.community_of_index(ui) == c {
        return Err(Error::PartitionMismatch(format!(
            "node {i} is already a member of community {c}"
        )));
    }
    let k_in: f64 = g
        .neighbors_at(ui)
        .iter()
        .filter(|(j, _)| p.community_of_index(*j) == c)
        .map(|(_, w)| w)
        .sum();
    let null: f64 = if t.is_constant() {
        let k_c: f64 = members.iter().map(|j| t.degree(*j)).sum();
        t.degree(ui) * k_c / t.two_m()
    } else {
        members.iter().map(|j| t.p_sym_idx(ui, *j)).sum()
    };
    Ok(k_in - null)
}

/// Per-community quality and size, for ranking communities.
#[derive(Debug, Clone, PartialEq)]
pub struct CommunityScore {
    pub community: CommunityId,
    pub quality: f64,
    pub size: usize,
}

/// Community quality `M_c`: the community's pair sum normalized by twice its
/// size (not by `m`).
pub fn community_quality(
    g: &GeoGraph,
    p: &Partition,
    t: &NullModelTable,
    c: CommunityId,
) -> Result<CommunityScore> {
    check_partition(g, p)?;
    check_table(g, t)?;
    let members = p
        .members_idx(c)
        .ok_or_else(|| Error::PartitionMismatch(format!("no community {c}")))?;
    let w_c = intra_pair_weight(g, p, c, members);
    let quality = (w_c - null_pair_sum(t, members)) / (2.0 * members.len() as f64);
    Ok(CommunityScore {
        community: c,
        quality,
        size: members.len(),
    })
}

/// Qualities of every community, ranked best-first; ties break toward the
/// smaller community id.
pub fn rank_communities(
    g: &GeoGraph,
    p: &Partition,
    t: &NullModelTable,
) -> Result<Vec<CommunityScore>> {
    let mut scores = Vec::with_capacity(p.community_count());
    for c in p.community_ids() {
        scores.push(community_quality(g, p, t, c)?);
    }
    scores.sort_by(|a, b| {
        b.quality
            .partial_cmp(&a.quality)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.community.cmp(&b.community))
    });
    Ok(scores)
}
