//! The Louvain heuristic and the distance-modularity variant.
//!
//! Both run the same two-phase machinery: phase 1 sweeps nodes in a seeded
//! shuffled order, repeatedly, moving each node into the neighboring
//! community with the largest positive gain; phase 2 collapses communities
//! into meta-nodes (weights summed, intra-community weight becoming a
//! self-loop, coordinates the centroid of the underlying level-0 members)
//! and the cycle repeats on the smaller graph.
//!
//! For the distance objective, the null model at every hierarchy level is
//! rebuilt from meta-node centroids and meta-degrees. The meta-level
//! objective is therefore an approximation of the level-0 objective, so the
//! engine rescores each level's partition on the original graph and reports
//! the best level-0 partition seen. This makes the objective value
//! non-decreasing across outer iterations by construction.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geodesy::{self, DecayKernel};
use crate::graph::{GeoGraph, NodeId};
use crate::modularity::{
    build_constant_null_model, build_null_model, distance_modularity, ng_modularity, CommunityId,
    NullModelTable, Partition,
};

/// Objective to maximize.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Objective {
    Ng,
    Distance(DecayKernel),
}

/// Initial partition for the distance variant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitStrategy {
    Singleton,
    /// Run the NG-objective Louvain to completion first and continue
    /// distance optimization from its partition.
    LouvainWarmStart,
}

#[derive(Debug, Clone)]
pub struct DetectionConfig {
    pub objective: Objective,
    pub init: InitStrategy,
    /// Minimum net gain required to accept a phase-1 move.
    pub move_epsilon: f64,
    /// Minimum level-0 objective improvement required to start another level.
    pub outer_epsilon: f64,
    pub rng_seed: u64,
    pub max_outer_iterations: usize,
    /// Alternate warm-start mode: collapse the warm partition into a
    /// meta-graph before distance optimization. The default re-sweeps
    /// level-0 nodes from the warm assignment, which keeps the engine able
    /// to split warm communities (collapsed meta-nodes can only merge).
    pub warm_start_collapse: bool,
}

impl DetectionConfig {
    pub fn ng(rng_seed: u64) -> Self {
        Self {
            objective: Objective::Ng,
            init: InitStrategy::Singleton,
            move_epsilon: 1e-10,
            outer_epsilon: 1e-9,
            rng_seed,
            max_outer_iterations: 100,
            warm_start_collapse: false,
        }
    }

    pub fn distance(kernel: DecayKernel, init: InitStrategy, rng_seed: u64) -> Self {
        Self {
            objective: Objective::Distance(kernel),
            init,
            ..Self::ng(rng_seed)
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.move_epsilon > 0.0 && self.outer_epsilon > 0.0) {
            return Err(Error::InvalidConfig("epsilons must be positive".into()));
        }
        if self.max_outer_iterations == 0 {
            return Err(Error::InvalidConfig("max_outer_iterations must be >= 1".into()));
        }
        if self.init == InitStrategy::LouvainWarmStart && self.objective == Objective::Ng {
            return Err(Error::InvalidConfig(
                "warm start is only meaningful for the distance objective".into(),
            ));
        }
        if self.warm_start_collapse && self.init != InitStrategy::LouvainWarmStart {
            return Err(Error::InvalidConfig(
                "warm_start_collapse requires the warm-start init".into(),
            ));
        }
        Ok(())
    }
}

/// A graph of meta-nodes. Each meta-node remembers how many level-0 nodes it
/// stands for and the sum of their unit vectors, so its coordinate is the
/// exact centroid of its underlying members at every hierarchy depth.
#[derive(Debug, Clone)]
pub struct MetaGraph {
    pub graph: GeoGraph,
    member_counts: Vec<usize>,
    vec_sums: Vec<[f64; 3]>,
}

impl MetaGraph {
    /// Identity view of a base graph: every node is its own meta-node.
    pub fn base(g: &GeoGraph) -> Self {
        let n = g.node_count();
        let vec_sums = (0..n).map(|i| geodesy::unit_vector(g.coord_at(i))).collect();
        Self {
            graph: g.clone(),
            member_counts: vec![1; n],
            vec_sums,
        }
    }

    /// Level-0 nodes represented by the meta-node at internal index `idx`.
    pub fn member_count(&self, idx: usize) -> usize {
        self.member_counts[idx]
    }

    /// Collapses a partition of this graph into a new meta-graph.
    ///
    /// Inter-community weights are summed into single edges; the total
    /// intra-community weight becomes the meta-node self-loop, so `m` and
    /// community degrees are preserved. Meta node ids are the canonical
    /// community ids.
    pub fn aggregate(&self, p: &Partition) -> Result<(MetaGraph, BTreeMap<CommunityId, NodeId>)> {
        if !p.matches(&self.graph) {
            return Err(Error::PartitionMismatch(
                "partition node set differs from graph".into(),
            ));
        }
        let q = p.community_count();
        let mut counts = vec![0usize; q];
        let mut sums = vec![[0.0f64; 3]; q];
        for idx in 0..self.graph.node_count() {
            let c = p.community_of_index(idx).0 as usize;
            counts[c] += self.member_counts[idx];
            let v = self.vec_sums[idx];
            sums[c][0] += v[0];
            sums[c][1] += v[1];
            sums[c][2] += v[2];
        }
        let mut nodes = Vec::with_capacity(q);
        for c in 0..q {
            nodes.push((NodeId(c as u64), geodesy::vector_to_coord(sums[c])?));
        }

        let mut self_loops = vec![0.0f64; q];
        let mut inter: BTreeMap<(usize, usize), f64> = BTreeMap::new();
        for (u, v, w) in self.graph.edges() {
            let cu = p.community_of(u).unwrap().0 as usize;
            let cv = p.community_of(v).unwrap().0 as usize;
            if cu == cv {
                self_loops[cu] += w;
            } else {
                *inter.entry((cu.min(cv), cu.max(cv))).or_insert(0.0) += w;
            }
        }
        let mut edges = Vec::with_capacity(q + inter.len());
        for (c, w) in self_loops.iter().enumerate() {
            if *w > 0.0 {
                edges.push((NodeId(c as u64), NodeId(c as u64), *w));
            }
        }
        for ((a, b), w) in inter {
            edges.push((NodeId(a as u64), NodeId(b as u64), w));
        }

        let graph = GeoGraph::from_parts(nodes, edges)?;
        let mapping = p
            .community_ids()
            .map(|c| (c, NodeId(c.0 as u64)))
            .collect();
        Ok((
            MetaGraph {
                graph,
                member_counts: counts,
                vec_sums: sums,
            },
            mapping,
        ))
    }
}

/// Collapses a partition of a base graph into a meta-graph.
pub fn aggregate(g: &GeoGraph, p: &Partition) -> Result<(MetaGraph, BTreeMap<CommunityId, NodeId>)> {
    MetaGraph::base(g).aggregate(p)
}

/// Partition scored on one hierarchy level, expressed over level-0 nodes.
#[derive(Debug, Clone)]
pub struct LevelInfo {
    pub partition: Partition,
    /// Level-0 rescore of this partition under the run's objective.
    pub objective_value: f64,
    /// Number of meta-nodes swept at this level.
    pub meta_nodes: usize,
}

#[derive(Debug, Clone)]
pub struct DetectionResult {
    /// Best partition found, over level-0 node ids.
    pub partition: Partition,
    /// Level-0 objective of `partition` (equals rescoring from scratch).
    pub objective_value: f64,
    pub levels: Vec<LevelInfo>,
    pub outer_iterations: usize,
    pub phase1_passes: usize,
    pub moves: usize,
    pub duration: Duration,
}

/// Louvain maximizing NG modularity.
pub fn louvain(g: &GeoGraph, cfg: &DetectionConfig) -> Result<DetectionResult> {
    if cfg.objective != Objective::Ng {
        return Err(Error::InvalidConfig("louvain requires the ng objective".into()));
    }
    detect(g, cfg)
}

/// Louvain-style maximization of distance modularity.
pub fn louvain_d(g: &GeoGraph, cfg: &DetectionConfig) -> Result<DetectionResult> {
    if !matches!(cfg.objective, Objective::Distance(_)) {
        return Err(Error::InvalidConfig(
            "louvain_d requires the distance objective".into(),
        ));
    }
    detect(g, cfg)
}

/// Recomputes an objective for a partition on the original level-0 graph
/// (for the distance objective: original node coordinates, not centroids).
pub fn rescore_base(g: &GeoGraph, p: &Partition, objective: &Objective) -> Result<f64> {
    BaseScorer::build(g, objective)?.score(g, p)
}

/// Level-0 scoring context, built once per detection run.
struct BaseScorer {
    table: Option<NullModelTable>,
}

impl BaseScorer {
    fn build(g: &GeoGraph, objective: &Objective) -> Result<Self> {
        let table = match objective {
            Objective::Ng => None,
            Objective::Distance(DecayKernel::Constant) => Some(build_constant_null_model(g)?),
            Objective::Distance(kernel) => {
                let dm = geodesy::distance_matrix(g);
                Some(build_null_model(g, &dm, *kernel)?)
            }
        };
        Ok(Self { table })
    }

    fn score(&self, g: &GeoGraph, p: &Partition) -> Result<f64> {
        match &self.table {
            None => ng_modularity(g, p),
            Some(t) => distance_modularity(g, p, t),
        }
    }

    fn score_labels(&self, g: &GeoGraph, labels: &[usize]) -> Result<f64> {
        self.score(g, &Partition::from_index_labels(g, labels)?)
    }
}

/// Per-level gain evaluation. The constant kernel shares the degree-product
/// path with NG, which makes the sigma-to-infinity reduction produce the
/// same move sequence exactly.
enum GainCtx {
    DegreeProduct { degrees: Vec<f64>, two_m: f64 },
    Gravity { table: NullModelTable },
}

impl GainCtx {
    fn build(level: &GeoGraph, objective: &Objective) -> Result<Self> {
        match objective {
            Objective::Ng | Objective::Distance(DecayKernel::Constant) => {
                let degrees = (0..level.node_count()).map(|i| level.degree_at(i)).collect();
                Ok(Self::DegreeProduct {
                    degrees,
                    two_m: 2.0 * level.total_weight(),
                })
            }
            Objective::Distance(kernel) => {
                let dm = geodesy::distance_matrix(level);
                Ok(Self::Gravity {
                    table: build_null_model(level, &dm, *kernel)?,
                })
            }
        }
    }

    fn degree(&self, i: usize) -> f64 {
        match self {
            Self::DegreeProduct { degrees, .. } => degrees[i],
            Self::Gravity { table } => table.degree(i),
        }
    }
}

struct Phase1Outcome {
    comm: Vec<usize>,
    passes: usize,
    moves: usize,
}

/// Phase 1: repeated single-node moves until a full pass changes nothing.
///
/// Nodes are visited in one seeded shuffle fixed for the whole invocation.
/// A move must beat staying put by more than `move_eps`; among equal-gain
/// targets the lowest community id wins.
fn phase1(
    level: &GeoGraph,
    ctx: &GainCtx,
    init_comm: Vec<usize>,
    rng: &mut ChaCha8Rng,
    move_eps: f64,
) -> Phase1Outcome {
    let n = level.node_count();
    let mut comm = init_comm;
    debug_assert_eq!(comm.len(), n);

    // community degree totals, used by the degree-product path
    let mut k_sum = vec![0.0f64; n];
    for i in 0..n {
        k_sum[comm[i]] += ctx.degree(i);
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);

    let mut w_to = vec![0.0f64; n];
    let mut null_to = vec![0.0f64; n];
    let mut touched: Vec<usize> = Vec::with_capacity(16);

    let mut passes = 0usize;
    let mut moves = 0usize;
    loop {
        let mut pass_moves = 0usize;
        for &i in &order {
            let ci = comm[i];
            let k_i = ctx.degree(i);

            touched.clear();
            for &(j, w) in level.neighbors_at(i) {
                let cj = comm[j];
                if w_to[cj] == 0.0 && null_to[cj] == 0.0 && !touched.contains(&cj) {
                    touched.push(cj);
                }
                w_to[cj] += w;
            }
            if !touched.contains(&ci) {
                touched.push(ci);
            }

            // remove i from its community before evaluating gains
            k_sum[ci] -= k_i;

            match ctx {
                GainCtx::DegreeProduct { two_m, .. } => {
                    for &c in &touched {
                        null_to[c] = k_i * k_sum[c] / two_m;
                    }
                }
                GainCtx::Gravity { table } => {
                    // one pass over all nodes prices every candidate community
                    for j in 0..n {
                        if j == i {
                            continue;
                        }
                        let cj = comm[j];
                        if w_to[cj] != 0.0 || cj == ci {
                            null_to[cj] += table.p_sym_idx(i, j);
                        }
                    }
                }
            }

            touched.sort_unstable();
            let stay_gain = w_to[ci] - null_to[ci];
            let mut best_c = ci;
            let mut best_gain = stay_gain;
            for &c in &touched {
                if c == ci {
                    continue;
                }
                let g_c = w_to[c] - null_to[c];
                if g_c > best_gain {
                    best_gain = g_c;
                    best_c = c;
                }
            }

            let accepted = best_c != ci && best_gain - stay_gain > move_eps;
            let dest = if accepted { best_c } else { ci };
            k_sum[dest] += k_i;
            if accepted {
                comm[i] = dest;
                pass_moves += 1;
            }

            for &c in &touched {
                w_to[c] = 0.0;
                null_to[c] = 0.0;
            }
        }
        passes += 1;
        moves += pass_moves;
        if pass_moves == 0 {
            break;
        }
    }

    Phase1Outcome { comm, passes, moves }
}

fn detect(g: &GeoGraph, cfg: &DetectionConfig) -> Result<DetectionResult> {
    cfg.validate()?;
    if g.node_count() == 0 || g.total_weight() <= 0.0 {
        return Err(Error::UndefinedScore);
    }
    let started = Instant::now();
    let scorer = BaseScorer::build(g, &cfg.objective)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);
    let mut counters = Counters::default();

    let n = g.node_count();
    let identity: Vec<usize> = (0..n).collect();

    let (level, assign0, init_comm) = match cfg.init {
        InitStrategy::Singleton => (MetaGraph::base(g), identity, None),
        InitStrategy::LouvainWarmStart => {
            let ng_scorer = BaseScorer::build(g, &Objective::Ng)?;
            let warm = run_hierarchy(
                g,
                MetaGraph::base(g),
                identity.clone(),
                &Objective::Ng,
                &ng_scorer,
                cfg,
                &mut rng,
                &mut counters,
                None,
            )?;
            let warm_p = Partition::from_index_labels(g, &warm.labels)?;
            if cfg.warm_start_collapse {
                let (meta, _) = MetaGraph::base(g).aggregate(&warm_p)?;
                (meta, warm_p.labels(), None)
            } else {
                (MetaGraph::base(g), identity, Some(warm_p.labels()))
            }
        }
    };

    let run = run_hierarchy(
        g,
        level,
        assign0,
        &cfg.objective,
        &scorer,
        cfg,
        &mut rng,
        &mut counters,
        init_comm,
    )?;

    let partition = Partition::from_index_labels(g, &run.labels)?;
    Ok(DetectionResult {
        partition,
        objective_value: run.score,
        levels: run.levels,
        outer_iterations: counters.outer,
        phase1_passes: counters.passes,
        moves: counters.moves,
        duration: started.elapsed(),
    })
}

#[derive(Default)]
struct Counters {
    outer: usize,
    passes: usize,
    moves: usize,
}

struct HierarchyRun {
    labels: Vec<usize>,
    score: f64,
    levels: Vec<LevelInfo>,
}

#[allow(clippy::too_many_arguments)]
fn run_hierarchy(
    g0: &GeoGraph,
    mut level: MetaGraph,
    mut assign0: Vec<usize>,
    objective: &Objective,
    scorer: &BaseScorer,
    cfg: &DetectionConfig,
    rng: &mut ChaCha8Rng,
    counters: &mut Counters,
    mut init_comm: Option<Vec<usize>>,
) -> Result<HierarchyRun> {
    let mut best_labels: Vec<usize> = match &init_comm {
        Some(comm) => assign0.iter().map(|&mi| comm[mi]).collect(),
        None => assign0.clone(),
    };
    let mut best_score = scorer.score_labels(g0, &best_labels)?;
    let mut levels = Vec::new();

    // A custom initial assignment gets a pre-pass: phase 1 from those
    // labels, then aggregation, unconditionally. Even a move-free pre-pass
    // must proceed to the meta level, where whole communities can still
    // merge.
    if let Some(start) = init_comm.take() {
        counters.outer += 1;
        let ctx = GainCtx::build(&level.graph, objective)?;
        let outcome = phase1(&level.graph, &ctx, start, rng, cfg.move_epsilon);
        counters.passes += outcome.passes;
        counters.moves += outcome.moves;

        let labels0: Vec<usize> = assign0.iter().map(|&mi| outcome.comm[mi]).collect();
        let score = scorer.score_labels(g0, &labels0)?;
        levels.push(LevelInfo {
            partition: Partition::from_index_labels(g0, &labels0)?,
            objective_value: score,
            meta_nodes: level.graph.node_count(),
        });
        if score > best_score {
            best_score = score;
            best_labels = labels0;
        }

        let level_p = Partition::from_index_labels(&level.graph, &outcome.comm)?;
        for slot in assign0.iter_mut() {
            *slot = level_p.community_of_index(*slot).0 as usize;
        }
        let (next, _) = level.aggregate(&level_p)?;
        level = next;
    }

    for _ in 0..cfg.max_outer_iterations {
        counters.outer += 1;
        let ctx = GainCtx::build(&level.graph, objective)?;
        let start = (0..level.graph.node_count()).collect();
        let outcome = phase1(&level.graph, &ctx, start, rng, cfg.move_epsilon);
        counters.passes += outcome.passes;
        counters.moves += outcome.moves;
        if outcome.moves == 0 {
            break;
        }

        let labels0: Vec<usize> = assign0.iter().map(|&mi| outcome.comm[mi]).collect();
        let score = scorer.score_labels(g0, &labels0)?;
        levels.push(LevelInfo {
            partition: Partition::from_index_labels(g0, &labels0)?,
            objective_value: score,
            meta_nodes: level.graph.node_count(),
        });

        let improved = score - best_score;
        if score > best_score {
            best_score = score;
            best_labels = labels0;
        }

        let level_p = Partition::from_index_labels(&level.graph, &outcome.comm)?;
        for slot in assign0.iter_mut() {
            *slot = level_p.community_of_index(*slot).0 as usize;
        }
        let (next, _) = level.aggregate(&level_p)?;
        level = next;

        if improved < cfg.outer_epsilon {
            break;
        }
    }

    Ok(HierarchyRun {
        labels: best_labels,
        score: best_score,
        levels,
    })
}
