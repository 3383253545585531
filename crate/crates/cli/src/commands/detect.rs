use geomod_core::louvain::{louvain, louvain_d, DetectionConfig, InitStrategy, Objective};
use geomod_core::{rescore_base, DecayKernel, GeoGraph};

use crate::args::{DetectArgs, InitArg, ObjectiveArg};
use crate::io::write_partition;
use crate::{require_file, require_sigma, CmdError};

pub struct DetectSummary {
    pub objective: ObjectiveArg,
    pub sigma: Option<f64>,
    pub communities: usize,
    pub objective_value: f64,
    pub ng_modularity: f64,
    pub levels: usize,
    pub runtime_s: f64,
}

pub fn run(args: &DetectArgs) -> Result<DetectSummary, CmdError> {
    require_file(&args.graph, "graph file")?;
    let cfg = build_config(args)?;
    let g = GeoGraph::from_json_file(&args.graph)?;

    let result = match cfg.objective {
        Objective::Ng => louvain(&g, &cfg)?,
        Objective::Distance(_) => louvain_d(&g, &cfg)?,
    };
    write_partition(&args.out, &result.partition)?;

    let ng = rescore_base(&g, &result.partition, &Objective::Ng)?;
    let summary = DetectSummary {
        objective: args.objective,
        sigma: args.sigma,
        communities: result.partition.community_count(),
        objective_value: result.objective_value,
        ng_modularity: ng,
        levels: result.levels.len(),
        runtime_s: result.duration.as_secs_f64(),
    };
    let json = serde_json::json!({
        "objective": match args.objective { ObjectiveArg::Ng => "ng", ObjectiveArg::Distance => "distance" },
        "sigma": args.sigma,
        "init": match args.init { InitArg::Singleton => "singleton", InitArg::Warm => "warm" },
        "seed": args.seed,
        "nodes": g.node_count(),
        "edges": g.edge_count(),
        "communities": summary.communities,
        "objective_value_level0": summary.objective_value,
        "ng_modularity": summary.ng_modularity,
        "levels": summary.levels,
        "outer_iterations": result.outer_iterations,
        "moves": result.moves,
        "runtime_s": summary.runtime_s,
        "partition": args.out.display().to_string(),
    });
    println!("{json}");
    Ok(summary)
}

fn build_config(args: &DetectArgs) -> Result<DetectionConfig, CmdError> {
    match args.objective {
        ObjectiveArg::Ng => {
            if args.sigma.is_some() {
                return Err(CmdError::Usage(
                    "--sigma only applies to --objective distance".into(),
                ));
            }
            if args.init == InitArg::Warm {
                return Err(CmdError::Usage(
                    "--init warm only applies to --objective distance".into(),
                ));
            }
            Ok(DetectionConfig::ng(args.seed))
        }
        ObjectiveArg::Distance => {
            let sigma = args.sigma.ok_or_else(|| {
                CmdError::Usage("--objective distance requires --sigma".into())
            })?;
            require_sigma(sigma)?;
            let kernel = DecayKernel::exponential(sigma)
                .map_err(|e| CmdError::Usage(e.to_string()))?;
            let init = match args.init {
                InitArg::Singleton => InitStrategy::Singleton,
                InitArg::Warm => InitStrategy::LouvainWarmStart,
            };
            Ok(DetectionConfig::distance(kernel, init, args.seed))
        }
    }
}
