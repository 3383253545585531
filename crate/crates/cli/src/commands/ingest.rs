use geomod_core::{build_graph, load_checkins, load_edge_list, IngestReport};

use crate::args::IngestArgs;
use crate::{require_file, CmdError};

pub fn run(args: &IngestArgs) -> Result<IngestReport, CmdError> {
    require_file(&args.edges, "edge list")?;
    require_file(&args.checkins, "check-in file")?;
    let pairs = load_edge_list(&args.edges)?;
    let locations = load_checkins(&args.checkins)?;
    let (graph, report) = build_graph(&pairs, &locations, None)?;
    graph.to_json_file(&args.out)?;
    println!(
        "ingest: nodes_read={} nodes_dropped_no_location={} edges_read={} \
         edges_dropped_endpoint_missing={} graph_nodes={} graph_edges={} total_weight={}",
        report.nodes_read,
        report.nodes_dropped_no_location,
        report.edges_read,
        report.edges_dropped_endpoint_missing,
        graph.node_count(),
        graph.edge_count(),
        graph.total_weight()
    );
    Ok(report)
}
