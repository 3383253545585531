use geomod_core::louvain::Objective;
use geomod_core::oracle::brute_force_best;
use geomod_core::{DecayKernel, GeoGraph};

use crate::args::{ObjectiveArg, OracleArgs};
use crate::{require_file, require_sigma, CmdError};

pub fn run(args: &OracleArgs) -> Result<(), CmdError> {
    require_file(&args.graph, "graph file")?;
    let objective = match args.objective {
        ObjectiveArg::Ng => {
            if args.sigma.is_some() {
                return Err(CmdError::Usage(
                    "--sigma only applies to --objective distance".into(),
                ));
            }
            Objective::Ng
        }
        ObjectiveArg::Distance => {
            let sigma = args.sigma.ok_or_else(|| {
                CmdError::Usage("--objective distance requires --sigma".into())
            })?;
            require_sigma(sigma)?;
            Objective::Distance(
                DecayKernel::exponential(sigma).map_err(|e| CmdError::Usage(e.to_string()))?,
            )
        }
    };
    let g = GeoGraph::from_json_file(&args.graph)?;
    let result = brute_force_best(&g, &objective)?;
    let communities: Vec<Vec<u64>> = result
        .best_partition
        .community_ids()
        .map(|c| {
            result
                .best_partition
                .member_ids(c)
                .unwrap()
                .iter()
                .map(|id| id.0)
                .collect()
        })
        .collect();
    let json = serde_json::json!({
        "best_value": result.best_value,
        "enumerated": result.enumerated,
        "communities": communities,
    });
    println!("{json}");
    Ok(())
}
