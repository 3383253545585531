use std::collections::BTreeMap;
use std::fs::File;
use std::io::BufWriter;

use serde_json::json;

use geomod_core::modularity::{build_null_model, rank_communities, CommunityScore};
use geomod_core::{distance_matrix, CommunityId, DecayKernel, GeoGraph, Partition};

use crate::args::RankArgs;
use crate::io::read_partition;
use crate::{require_file, require_sigma, CmdError};

pub fn run(args: &RankArgs) -> Result<Vec<CommunityScore>, CmdError> {
    require_file(&args.graph, "graph file")?;
    require_file(&args.partition, "partition file")?;
    require_sigma(args.sigma)?;
    if args.top_k == 0 {
        return Err(CmdError::Usage("--top-k must be at least 1".into()));
    }
    let g = GeoGraph::from_json_file(&args.graph)?;
    let p = read_partition(&args.partition, &g)?;
    let dm = distance_matrix(&g);
    let kernel =
        DecayKernel::exponential(args.sigma).map_err(|e| CmdError::Usage(e.to_string()))?;
    let table = build_null_model(&g, &dm, kernel)?;

    let scores = rank_communities(&g, &p, &table)?;
    let top: Vec<CommunityScore> = scores.iter().take(args.top_k).cloned().collect();

    let doc = export(&g, &p, &top);
    let file = File::create(&args.out)
        .map_err(|e| CmdError::Runtime(format!("cannot create {}: {e}", args.out.display())))?;
    serde_json::to_writer_pretty(BufWriter::new(file), &doc)
        .map_err(|e| CmdError::Runtime(format!("write {}: {e}", args.out.display())))?;

    println!("rank,community,size,quality");
    for (i, s) in top.iter().enumerate() {
        println!("{},{},{},{}", i + 1, s.community, s.size, s.quality);
    }
    Ok(top)
}

/// GeoJSON FeatureCollection: one Point per node of the exported
/// communities plus one MultiPoint per community. Coordinates are
/// [longitude, latitude].
fn export(g: &GeoGraph, p: &Partition, top: &[CommunityScore]) -> serde_json::Value {
    let rank_of: BTreeMap<CommunityId, usize> = top
        .iter()
        .enumerate()
        .map(|(i, s)| (s.community, i + 1))
        .collect();

    let mut features = Vec::new();
    for id in g.ids() {
        let community = p.community_of(*id).expect("partition covers graph");
        let Some(rank) = rank_of.get(&community) else {
            continue;
        };
        let c = g.coord(*id).unwrap();
        features.push(json!({
            "type": "Feature",
            "geometry": { "type": "Point", "coordinates": [c.lon, c.lat] },
            "properties": { "node": id.0, "community": community.0, "rank": rank },
        }));
    }
    for s in top {
        let rank = rank_of[&s.community];
        let coords: Vec<serde_json::Value> = p
            .member_ids(s.community)
            .unwrap_or_default()
            .iter()
            .map(|id| {
                let c = g.coord(*id).unwrap();
                json!([c.lon, c.lat])
            })
            .collect();
        features.push(json!({
            "type": "Feature",
            "geometry": { "type": "MultiPoint", "coordinates": coords },
            "properties": {
                "community": s.community.0,
                "rank": rank,
                "quality": s.quality,
                "size": s.size,
            },
        }));
    }
    json!({ "type": "FeatureCollection", "features": features })
}
