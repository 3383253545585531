//! Temporary debugging harness (deleted before release).

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use geomod_core::louvain::{louvain, louvain_d, DetectionConfig, InitStrategy, Objective};
use geomod_core::oracle::brute_force_best;
use geomod_core::{DecayKernel, GeoCoord, GeoGraph, NodeId};

fn coord(lat: f64, lon: f64) -> GeoCoord {
    GeoCoord::new(lat, lon).unwrap()
}

fn two_block_graph(rng: &mut ChaCha8Rng, n: usize, wlo: f64, whi: f64) -> GeoGraph {
    loop {
        let split = n / 2;
        let nodes: Vec<(NodeId, GeoCoord)> = (0..n)
            .map(|i| {
                let base_lat = if i % 2 == 0 { 20.5 } else { 22.5 };
                (
                    NodeId(i as u64),
                    coord(
                        base_lat + rng.gen_range(-0.15..0.15),
                        11.0 + rng.gen_range(-0.15..0.15),
                    ),
                )
            })
            .collect();
        let mut edges = Vec::new();
        for a in 0..n {
            for b in (a + 1)..n {
                let same_block = (a < split) == (b < split);
                let p = if same_block { 0.9 } else { 0.1 };
                if rng.gen_bool(p) {
                    edges.push((NodeId(a as u64), NodeId(b as u64), rng.gen_range(wlo..whi)));
                }
            }
        }
        if edges.is_empty() {
            continue;
        }
        return GeoGraph::from_parts(nodes, edges).unwrap();
    }
}

#[test]
fn scan_weight_ranges() {
    let kernel = DecayKernel::exponential(100.0).unwrap();
    for (wlo, whi) in [(0.75, 1.5), (0.6, 1.8), (0.5, 2.0), (0.7, 1.6)] {
        let mut rng = ChaCha8Rng::seed_from_u64(3003);
        let mut worst_ng: f64 = 1.0;
        let mut worst_d: f64 = 1.0;
        let mut below = 0usize;
        for trial in 0..50u64 {
            let n = rng.gen_range(6..=8);
            let g = two_block_graph(&mut rng, n, wlo, whi);
            let best_ng = brute_force_best(&g, &Objective::Ng).unwrap();
            let got_ng = louvain(&g, &DetectionConfig::ng(trial)).unwrap();
            if best_ng.best_value > 1e-9 {
                let r = got_ng.objective_value / best_ng.best_value;
                worst_ng = worst_ng.min(r);
                if r < 0.95 {
                    below += 1;
                }
            }
            let best_d = brute_force_best(&g, &Objective::Distance(kernel)).unwrap();
            let cfg = DetectionConfig::distance(kernel, InitStrategy::LouvainWarmStart, trial);
            let got_d = louvain_d(&g, &cfg).unwrap();
            if best_d.best_value > 1e-9 {
                let r = got_d.objective_value / best_d.best_value;
                worst_d = worst_d.min(r);
                if r < 0.95 {
                    below += 1;
                }
            }
        }
        println!(
            "weights {wlo}..{whi}: worst ng {worst_ng:.4}, worst dist {worst_d:.4}, below-threshold {below}"
        );
    }
}
