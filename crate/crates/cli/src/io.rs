//! Partition TSV read/write shared by the commands.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use geomod_core::{CommunityId, GeoGraph, NodeId, Partition};

use crate::CmdError;

/// Writes `node_id<TAB>community_id` rows, node ids ascending.
pub fn write_partition(path: &Path, p: &Partition) -> Result<(), CmdError> {
    let file = File::create(path)
        .map_err(|e| CmdError::Runtime(format!("cannot create {}: {e}", path.display())))?;
    let mut w = BufWriter::new(file);
    for id in p.node_ids() {
        let c = p.community_of(*id).expect("partition covers its nodes");
        writeln!(w, "{id}\t{c}")
            .map_err(|e| CmdError::Runtime(format!("write {}: {e}", path.display())))?;
    }
    w.flush()
        .map_err(|e| CmdError::Runtime(format!("write {}: {e}", path.display())))
}

/// Reads a partition TSV back against a graph; the file must cover exactly
/// the graph's nodes.
pub fn read_partition(path: &Path, g: &GeoGraph) -> Result<Partition, CmdError> {
    let file = File::open(path)
        .map_err(|e| CmdError::Runtime(format!("cannot open {}: {e}", path.display())))?;
    let mut assignment: BTreeMap<NodeId, CommunityId> = BTreeMap::new();
    for (lineno, line) in BufReader::new(file).lines().enumerate() {
        let line =
            line.map_err(|e| CmdError::Runtime(format!("read {}: {e}", path.display())))?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let mut parts = trimmed.split('\t');
        let (id, comm) = match (parts.next(), parts.next(), parts.next()) {
            (Some(a), Some(b), None) => (a, b),
            _ => {
                return Err(CmdError::Runtime(format!(
                    "{}:{}: expected `node<TAB>community`",
                    path.display(),
                    lineno + 1
                )))
            }
        };
        let id: u64 = id.parse().map_err(|_| {
            CmdError::Runtime(format!("{}:{}: bad node id", path.display(), lineno + 1))
        })?;
        let comm: u32 = comm.parse().map_err(|_| {
            CmdError::Runtime(format!("{}:{}: bad community id", path.display(), lineno + 1))
        })?;
        assignment.insert(NodeId(id), CommunityId(comm));
    }
    Partition::from_map(g, &assignment)
        .map_err(|e| CmdError::Runtime(format!("{}: {e}", path.display())))
}
