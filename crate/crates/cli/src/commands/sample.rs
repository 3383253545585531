use std::fs::{self, File};
use std::io::{BufWriter, Write};

use geomod_core::{batch_samples, GeoGraph};

use crate::args::SampleArgs;
use crate::{require_file, CmdError};

pub struct SampleStat {
    pub name: String,
    pub nodes: usize,
    pub edges: usize,
}

pub fn run(args: &SampleArgs) -> Result<Vec<SampleStat>, CmdError> {
    require_file(&args.graph, "graph file")?;
    if args.count == 0 || args.min_size == 0 {
        return Err(CmdError::Usage(
            "--count and --min-size must be at least 1".into(),
        ));
    }
    fs::create_dir_all(&args.out)
        .map_err(|e| CmdError::Runtime(format!("cannot create {}: {e}", args.out.display())))?;
    let g = GeoGraph::from_json_file(&args.graph)?;
    let samples = batch_samples(&g, args.count, args.min_size, args.seed)?;

    let mut stats = Vec::with_capacity(samples.len());
    for (i, sample) in samples.iter().enumerate() {
        let name = format!("sample_{i:03}");
        if sample.node_count() < args.min_size {
            eprintln!(
                "warning: {name} exhausted its component at {} nodes (min {})",
                sample.node_count(),
                args.min_size
            );
        }
        sample.to_json_file(args.out.join(format!("{name}.json")))?;
        stats.push(SampleStat {
            name,
            nodes: sample.node_count(),
            edges: sample.edge_count(),
        });
    }

    let csv_path = args.out.join("stats.csv");
    let file = File::create(&csv_path)
        .map_err(|e| CmdError::Runtime(format!("cannot create {}: {e}", csv_path.display())))?;
    let mut w = BufWriter::new(file);
    writeln!(w, "sample,nodes,edges").map_err(io_err)?;
    for s in &stats {
        writeln!(w, "{},{},{}", s.name, s.nodes, s.edges).map_err(io_err)?;
    }
    w.flush().map_err(io_err)?;
    println!("sample: wrote {} samples to {}", stats.len(), args.out.display());
    Ok(stats)
}

fn io_err(e: std::io::Error) -> CmdError {
    CmdError::Runtime(format!("write stats.csv: {e}"))
}
