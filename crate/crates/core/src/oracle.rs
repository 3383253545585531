//! Brute-force references for testing: exhaustive set-partition enumeration
//! and a deliberately naive scorer written straight from the definitions.
//!
//! Nothing here shares code with the optimized scoring path. Degrees, total
//! weight, distances, and kernel values are all recomputed from scratch so
//! that agreement between the two routes is meaningful.

use crate::error::{Error, Result};
use crate::graph::GeoGraph;
use crate::louvain::Objective;
use crate::modularity::Partition;

const MAX_ORACLE_NODES: usize = 10;

/// Outcome of an exhaustive search over all partitions.
#[derive(Debug, Clone)]
pub struct OracleResult {
    pub best_partition: Partition,
    pub best_value: f64,
    pub enumerated: usize,
}

/// Enumerates every set partition of `{0..n}` exactly once, as restricted
/// growth strings: `labels[0] = 0` and `labels[i] <= max(labels[..i]) + 1`.
pub fn enumerate_partitions(n: usize) -> Result<PartitionIter> {
    if n > MAX_ORACLE_NODES {
        return Err(Error::SizeLimit {
            n,
            limit: MAX_ORACLE_NODES,
        });
    }
    Ok(PartitionIter {
        labels: vec![0; n],
        maxes: vec![0; n],
        done: n == 0,
        fresh: true,
    })
}

pub struct PartitionIter {
    labels: Vec<usize>,
    /// maxes[i] = max(labels[..=i]); maxes[0] is always 0.
    maxes: Vec<usize>,
    done: bool,
    fresh: bool,
}

impl Iterator for PartitionIter {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        if self.fresh {
            self.fresh = false;
            return Some(self.labels.clone());
        }
        // increment the rightmost position that can still grow
        let n = self.labels.len();
        let mut i = n - 1;
        loop {
            if i == 0 {
                self.done = true;
                return None;
            }
            if self.labels[i] <= self.maxes[i - 1] {
                self.labels[i] += 1;
                self.maxes[i] = self.maxes[i - 1].max(self.labels[i]);
                for j in i + 1..n {
                    self.labels[j] = 0;
                    self.maxes[j] = self.maxes[j - 1];
                }
                return Some(self.labels.clone());
            }
            i -= 1;
        }
    }
}

/// Exact maximization of an objective over all partitions of a small graph,
/// scored by [`oracle_score`].
pub fn brute_force_best(g: &GeoGraph, objective: &Objective) -> Result<OracleResult> {
    let n = g.node_count();
    let mut best_labels: Option<Vec<usize>> = None;
    let mut best_value = f64::NEG_INFINITY;
    let mut enumerated = 0usize;
    for labels in enumerate_partitions(n)? {
        let value = oracle_score(g, &labels, objective)?;
        if value > best_value {
            best_value = value;
            best_labels = Some(labels.clone());
        }
        enumerated += 1;
    }
    let labels = best_labels.ok_or(Error::UndefinedScore)?;
    Ok(OracleResult {
        best_partition: Partition::from_index_labels(g, &labels)?,
        best_value,
        enumerated,
    })
}

/// Straight-from-definition modularity evaluation: a triple loop over
/// communities and ordered member pairs, with everything recomputed on the
/// spot (no caching, no incremental updates).
pub fn oracle_score(g: &GeoGraph, labels: &[usize], objective: &Objective) -> Result<f64> {
    let n = g.node_count();
    if labels.len() != n {
        return Err(Error::PartitionMismatch(format!(
            "{} labels for {} nodes",
            labels.len(),
            n
        )));
    }

    // degrees and total weight from their definitions
    let mut degrees = vec![0.0f64; n];
    let mut m = 0.0f64;
    for (u, v, w) in g.edges() {
        let ui = g.index_of(u).unwrap();
        let vi = g.index_of(v).unwrap();
        if ui == vi {
            degrees[ui] += 2.0 * w;
        } else {
            degrees[ui] += w;
            degrees[vi] += w;
        }
        m += w;
    }
    if m <= 0.0 {
        return Err(Error::UndefinedScore);
    }
    let two_m = 2.0 * m;

    let p = |i: usize, j: usize| -> f64 {
        match objective {
            Objective::Ng => degrees[i] * degrees[j] / two_m,
            Objective::Distance(kernel) => {
                let f = |a: usize, b: usize| match kernel {
                    crate::geodesy::DecayKernel::Constant => 1.0,
                    crate::geodesy::DecayKernel::Exponential { sigma_km } => {
                        let d = great_circle_km(g, a, b);
                        let r = d / sigma_km;
                        (-(r * r)).exp()
                    }
                };
                let hat = |a: usize, b: usize| -> f64 {
                    let mut denom = 0.0;
                    for q in 0..n {
                        denom += degrees[q] * f(q, a);
                    }
                    if denom == 0.0 {
                        return 0.0;
                    }
                    degrees[a] * degrees[b] * f(a, b) / denom
                };
                (hat(i, j) + hat(j, i)) / 2.0
            }
        }
    };

    let communities = labels.iter().copied().max().unwrap_or(0) + 1;
    let mut total = 0.0;
    for c in 0..communities {
        for i in 0..n {
            if labels[i] != c {
                continue;
            }
            for j in 0..n {
                if labels[j] != c {
                    continue;
                }
                let w_ij = g.pair_weight_at(i, j);
                total += w_ij - p(i, j);
            }
        }
    }
    Ok(total / two_m)
}

/// The oracle's own great-circle distance, written independently of the
/// geodesy module.
fn great_circle_km(g: &GeoGraph, a: usize, b: usize) -> f64 {
    let ca = g.coord_at(a);
    let cb = g.coord_at(b);
    let (lat1, lon1) = (ca.lat.to_radians(), ca.lon.to_radians());
    let (lat2, lon2) = (cb.lat.to_radians(), cb.lon.to_radians());
    let sin_dlat = ((lat2 - lat1) / 2.0).sin();
    let sin_dlon = ((lon2 - lon1) / 2.0).sin();
    let h = sin_dlat * sin_dlat + lat1.cos() * lat2.cos() * sin_dlon * sin_dlon;
    2.0 * 6371.0 * h.sqrt().clamp(0.0, 1.0).asin()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geodesy::DecayKernel;
    use crate::graph::{GeoCoord, NodeId};
    use crate::louvain::{louvain, DetectionConfig};
    use crate::modularity::{build_null_model, distance_modularity, ng_modularity};
    use approx::assert_abs_diff_eq;

    fn unit_graph(n: u64, edges: &[(u64, u64)]) -> GeoGraph {
        let nodes: Vec<_> = (0..n)
            .map(|i| {
                (
                    NodeId(i),
                    GeoCoord::new((i as f64 * 3.0) % 60.0, (i as f64 * 7.0) % 120.0).unwrap(),
                )
            })
            .collect();
        let es: Vec<_> = edges
            .iter()
            .map(|(a, b)| (NodeId(*a), NodeId(*b), 1.0))
            .collect();
        GeoGraph::from_parts(nodes, es).unwrap()
    }

    #[test]
    fn bell_numbers() {
        assert_eq!(enumerate_partitions(1).unwrap().count(), 1);
        assert_eq!(enumerate_partitions(4).unwrap().count(), 15);
        assert_eq!(enumerate_partitions(6).unwrap().count(), 203);
    }

    #[test]
    fn partitions_are_distinct() {
        let all: Vec<_> = enumerate_partitions(5).unwrap().collect();
        let set: std::collections::BTreeSet<_> = all.iter().cloned().collect();
        assert_eq!(all.len(), set.len());
        assert_eq!(all.len(), 52); // Bell(5)
    }

    #[test]
    fn size_limit_enforced() {
        assert!(matches!(
            enumerate_partitions(11),
            Err(Error::SizeLimit { n: 11, limit: 10 })
        ));
    }

    #[test]
    fn two_triangles_optimum() {
        let g = unit_graph(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]);
        let res = brute_force_best(&g, &Objective::Ng).unwrap();
        assert_eq!(res.enumerated, 203);
        assert_abs_diff_eq!(res.best_value, 0.5, epsilon = 1e-12);
        let expect = Partition::from_index_labels(&g, &[0, 0, 0, 1, 1, 1]).unwrap();
        assert_eq!(res.best_partition, expect);
    }

    #[test]
    fn single_edge_merging_beats_splitting() {
        let g = unit_graph(2, &[(0, 1)]);
        let res = brute_force_best(&g, &Objective::Ng).unwrap();
        assert_eq!(res.enumerated, 2);
        assert_abs_diff_eq!(res.best_value, 0.0, epsilon = 1e-15);
        assert_eq!(res.best_partition.community_count(), 1);
    }

    #[test]
    fn bridge_of_triangles_optimum_is_5_14() {
        let g = unit_graph(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (2, 3)]);
        let res = brute_force_best(&g, &Objective::Ng).unwrap();
        assert_abs_diff_eq!(res.best_value, 5.0 / 14.0, epsilon = 1e-12);
    }

    #[test]
    fn oracle_agrees_with_module_scorer() {
        let g = unit_graph(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (0, 2)]);
        let dm = crate::geodesy::distance_matrix(&g);
        let kernel = DecayKernel::exponential(150.0).unwrap();
        let t = build_null_model(&g, &dm, kernel).unwrap();
        for labels in enumerate_partitions(5).unwrap() {
            let p = Partition::from_index_labels(&g, &labels).unwrap();
            let ng_a = oracle_score(&g, &labels, &Objective::Ng).unwrap();
            let ng_b = ng_modularity(&g, &p).unwrap();
            assert!((ng_a - ng_b).abs() < 1e-10, "ng mismatch on {labels:?}");
            let d_a = oracle_score(&g, &labels, &Objective::Distance(kernel)).unwrap();
            let d_b = distance_modularity(&g, &p, &t).unwrap();
            assert!((d_a - d_b).abs() < 1e-10, "distance mismatch on {labels:?}");
        }
    }

    #[test]
    fn brute_force_dominates_louvain() {
        let g = unit_graph(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (2, 3), (0, 4)]);
        let res = louvain(&g, &DetectionConfig::ng(1)).unwrap();
        let best = brute_force_best(&g, &Objective::Ng).unwrap();
        assert!(best.best_value >= res.objective_value - 1e-12);
    }
}
