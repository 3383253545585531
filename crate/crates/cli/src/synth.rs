//! Deterministic synthetic location-based social network, emitted in the
//! same SNAP formats the ingester reads.
//!
//! The generator places cities inside a handful of world regions, settles
//! nodes around cities with a skewed city-size distribution, and wires three
//! kinds of ties: city-local edges, long-range edges within globe-spanning
//! "organizations" (the planted disperse structure), and uniform noise. A
//! chain across cities keeps the graph connected. Check-ins scatter around
//! each node's home point; a few sentinel (0,0) rows are mixed in.

use std::collections::BTreeSet;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

pub struct SynthConfig {
    pub nodes: usize,
    pub cities: usize,
    pub seed: u64,
}

pub struct SynthNetwork {
    /// Undirected edges, each unordered pair once, `u < v`.
    pub edges: Vec<(u64, u64)>,
    /// Check-in rows: (user, timestamp, lat, lon, location id).
    pub checkins: Vec<(u64, String, f64, f64, u64)>,
}

const REGIONS: usize = 6;

pub fn generate(cfg: &SynthConfig) -> SynthNetwork {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let n = cfg.nodes;
    let n_cities = cfg.cities.max(1);

    let region_centers: Vec<(f64, f64)> = (0..REGIONS)
        .map(|_| (rng.gen_range(-50.0..58.0), rng.gen_range(-165.0..165.0)))
        .collect();
    let city_centers: Vec<(f64, f64)> = (0..n_cities)
        .map(|c| {
            let (rlat, rlon) = region_centers[c % REGIONS];
            (
                (rlat + rng.gen_range(-3.0..3.0)).clamp(-88.0, 88.0),
                rlon + rng.gen_range(-3.0..3.0),
            )
        })
        .collect();

    // skewed city sizes
    let weights: Vec<f64> = (0..n_cities).map(|c| 1.0 / (1.0 + c as f64).powf(0.8)).collect();
    let total_w: f64 = weights.iter().sum();
    let city_of: Vec<usize> = (0..n)
        .map(|_| {
            let mut pick = rng.gen_range(0.0..total_w);
            for (c, w) in weights.iter().enumerate() {
                if pick < *w {
                    return c;
                }
                pick -= w;
            }
            n_cities - 1
        })
        .collect();
    let homes: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            let (clat, clon) = city_centers[city_of[i]];
            (
                (clat + rng.gen_range(-0.08..0.08)).clamp(-89.0, 89.0),
                clon + rng.gen_range(-0.08..0.08),
            )
        })
        .collect();

    let n_orgs = (n / 40).max(1);
    let org_of: Vec<usize> = (0..n).map(|_| rng.gen_range(0..n_orgs)).collect();

    let mut city_members: Vec<Vec<usize>> = vec![Vec::new(); n_cities];
    let mut org_members: Vec<Vec<usize>> = vec![Vec::new(); n_orgs];
    for i in 0..n {
        city_members[city_of[i]].push(i);
        org_members[org_of[i]].push(i);
    }

    let mut edges: BTreeSet<(u64, u64)> = BTreeSet::new();
    let add = |edges: &mut BTreeSet<(u64, u64)>, a: usize, b: usize| {
        if a != b {
            let (x, y) = (a.min(b) as u64, a.max(b) as u64);
            edges.insert((x, y));
        }
    };
    for i in 0..n {
        let stubs = 2 + (rng.gen::<f64>().powi(3) * 10.0) as usize;
        for _ in 0..stubs {
            let r: f64 = rng.gen();
            let partner = if r < 0.62 {
                let peers = &city_members[city_of[i]];
                peers[rng.gen_range(0..peers.len())]
            } else if r < 0.90 {
                let peers = &org_members[org_of[i]];
                peers[rng.gen_range(0..peers.len())]
            } else {
                rng.gen_range(0..n)
            };
            add(&mut edges, i, partner);
        }
    }
    // chain the cities so one component spans the globe
    for c in 0..n_cities.saturating_sub(1) {
        if city_members[c].is_empty() || city_members[c + 1].is_empty() {
            continue;
        }
        let a = city_members[c][rng.gen_range(0..city_members[c].len())];
        let b = city_members[c + 1][rng.gen_range(0..city_members[c + 1].len())];
        add(&mut edges, a, b);
    }

    let mut checkins = Vec::new();
    for i in 0..n {
        let (hlat, hlon) = homes[i];
        let count = 1 + rng.gen_range(0..3);
        for _ in 0..count {
            let lat = (hlat + rng.gen_range(-0.01..0.01)).clamp(-89.5, 89.5);
            let lon = hlon + rng.gen_range(-0.01..0.01);
            let ts = format!(
                "2010-{:02}-{:02}T{:02}:{:02}:00Z",
                rng.gen_range(1..=12),
                rng.gen_range(1..=28),
                rng.gen_range(0..24),
                rng.gen_range(0..60)
            );
            let loc = rng.gen_range(0..100_000u64);
            checkins.push((i as u64, ts, lat, lon, loc));
        }
        // sentinel noise, discarded by ingestion
        if i % 97 == 0 {
            checkins.push((i as u64, "2010-01-01T00:00:00Z".to_string(), 0.0, 0.0, 0));
        }
    }

    SynthNetwork {
        edges: edges.into_iter().collect(),
        checkins,
    }
}

/// Writes the network as a SNAP-style edge list (each edge listed in both
/// directions, like the public distributions) and check-in file.
pub fn write_snap_files(
    net: &SynthNetwork,
    edges_path: &Path,
    checkins_path: &Path,
) -> std::io::Result<()> {
    let mut directed: Vec<(u64, u64)> = Vec::with_capacity(net.edges.len() * 2);
    for &(u, v) in &net.edges {
        directed.push((u, v));
        directed.push((v, u));
    }
    directed.sort_unstable();

    let mut ef = BufWriter::new(File::create(edges_path)?);
    writeln!(ef, "# synthetic location-based social network")?;
    writeln!(ef, "# undirected, each edge listed in both directions")?;
    for (u, v) in directed {
        writeln!(ef, "{u}\t{v}")?;
    }
    ef.flush()?;

    let mut cf = BufWriter::new(File::create(checkins_path)?);
    for (user, ts, lat, lon, loc) in &net.checkins {
        writeln!(cf, "{user}\t{ts}\t{lat:.6}\t{lon:.6}\t{loc}")?;
    }
    cf.flush()
}
