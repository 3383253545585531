//! Geolocated weighted undirected graphs and SNAP-style ingestion.
//!
//! A [`GeoGraph`] is immutable after construction: node identities, one
//! coordinate per node, positive edge weights, weighted degrees and the
//! total weight `m` are all fixed by the constructor and safe to share
//! across threads.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geodesy;

/// Opaque node identifier, stable across all operations on the same graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct NodeId(pub u64);

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Geographic coordinate in degrees. Latitude in [-90, 90], longitude in
/// [-180, 180], both finite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeoCoord {
    pub lat: f64,
    pub lon: f64,
}

impl GeoCoord {
    pub fn new(lat: f64, lon: f64) -> Result<Self> {
        if !lat.is_finite() || !(-90.0..=90.0).contains(&lat) {
            return Err(Error::InvalidGraph(format!("latitude out of range: {lat}")));
        }
        if !lon.is_finite() || !(-180.0..=180.0).contains(&lon) {
            return Err(Error::InvalidGraph(format!("longitude out of range: {lon}")));
        }
        Ok(Self { lat, lon })
    }
}

/// Ingestion bookkeeping: what was read and what was dropped, and why.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct IngestReport {
    pub nodes_read: usize,
    pub nodes_dropped_no_location: usize,
    pub edges_read: usize,
    pub edges_dropped_endpoint_missing: usize,
}

/// Undirected weighted graph whose nodes carry geographic coordinates.
///
/// Nodes are indexed internally by ascending [`NodeId`], which makes every
/// construction order-independent. Self-loops are stored once with weight
/// `w`; they contribute `2w` to the owning node's degree, matching the
/// convention under which `sum(k_i) = 2m`.
#[derive(Debug, Clone)]
pub struct GeoGraph {
    ids: Vec<NodeId>,
    index: HashMap<NodeId, usize>,
    coords: Vec<GeoCoord>,
    adj: Vec<Vec<(usize, f64)>>,
    self_loops: Vec<f64>,
    degrees: Vec<f64>,
    total_weight: f64,
    edge_count: usize,
}

impl GeoGraph {
    /// Builds a graph from explicit node and edge lists.
    ///
    /// Every edge endpoint must be a listed node, weights must be strictly
    /// positive and finite, and no unordered pair may appear twice.
    /// Self-loop pairs `(v, v)` are permitted (they arise from aggregation).
    pub fn from_parts(
        nodes: Vec<(NodeId, GeoCoord)>,
        edges: Vec<(NodeId, NodeId, f64)>,
    ) -> Result<Self> {
        let mut sorted = nodes;
        sorted.sort_by_key(|(id, _)| *id);
        for pair in sorted.windows(2) {
            if pair[0].0 == pair[1].0 {
                return Err(Error::InvalidGraph(format!("duplicate node id {}", pair[0].0)));
            }
        }
        let ids: Vec<NodeId> = sorted.iter().map(|(id, _)| *id).collect();
        let coords: Vec<GeoCoord> = sorted.iter().map(|(_, c)| *c).collect();
        let index: HashMap<NodeId, usize> =
            ids.iter().enumerate().map(|(i, id)| (*id, i)).collect();

        let n = ids.len();
        let mut adj: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
        let mut self_loops = vec![0.0; n];
        let mut degrees = vec![0.0; n];
        let mut total_weight = 0.0;
        let mut edge_count = 0usize;
        let mut seen: BTreeSet<(usize, usize)> = BTreeSet::new();

        for (a, b, w) in edges {
            if !(w.is_finite() && w > 0.0) {
                return Err(Error::InvalidGraph(format!(
                    "edge ({a}, {b}) has non-positive weight {w}"
                )));
            }
            let ia = *index
                .get(&a)
                .ok_or_else(|| Error::InvalidGraph(format!("edge endpoint {a} is not a node")))?;
            let ib = *index
                .get(&b)
                .ok_or_else(|| Error::InvalidGraph(format!("edge endpoint {b} is not a node")))?;
            let key = (ia.min(ib), ia.max(ib));
            if !seen.insert(key) {
                return Err(Error::InvalidGraph(format!("duplicate edge ({a}, {b})")));
            }
            if ia == ib {
                self_loops[ia] += w;
                degrees[ia] += 2.0 * w;
            } else {
                adj[ia].push((ib, w));
                adj[ib].push((ia, w));
                degrees[ia] += w;
                degrees[ib] += w;
            }
            total_weight += w;
            edge_count += 1;
        }
        for list in &mut adj {
            list.sort_by_key(|(j, _)| *j);
        }

        Ok(Self {
            ids,
            index,
            coords,
            adj,
            self_loops,
            degrees,
            total_weight,
            edge_count,
        })
    }

    pub fn node_count(&self) -> usize {
        self.ids.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// Total edge weight `m` (self-loops counted once).
    pub fn total_weight(&self) -> f64 {
        self.total_weight
    }

    pub fn ids(&self) -> &[NodeId] {
        &self.ids
    }

    pub fn index_of(&self, id: NodeId) -> Option<usize> {
        self.index.get(&id).copied()
    }

    pub fn id_at(&self, idx: usize) -> NodeId {
        self.ids[idx]
    }

    pub fn coord_at(&self, idx: usize) -> GeoCoord {
        self.coords[idx]
    }

    pub fn coord(&self, id: NodeId) -> Option<GeoCoord> {
        self.index_of(id).map(|i| self.coords[i])
    }

    /// Weighted degree `k_i` (self-loop counted twice).
    pub fn degree_at(&self, idx: usize) -> f64 {
        self.degrees[idx]
    }

    pub fn degree(&self, id: NodeId) -> Option<f64> {
        self.index_of(id).map(|i| self.degrees[i])
    }

    /// Neighbors of a node, self-loop excluded, sorted by internal index.
    pub fn neighbors_at(&self, idx: usize) -> &[(usize, f64)] {
        &self.adj[idx]
    }

    /// Self-loop weight at a node, stored once (0.0 when absent).
    pub fn self_loop_at(&self, idx: usize) -> f64 {
        self.self_loops[idx]
    }

    /// Iterates every edge once as `(u, v, w)` with `u <= v` by node id.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId, f64)> + '_ {
        let proper = self.adj.iter().enumerate().flat_map(move |(i, list)| {
            list.iter()
                .filter(move |(j, _)| i <= *j)
                .map(move |(j, w)| (self.ids[i], self.ids[*j], *w))
        });
        let loops = self
            .self_loops
            .iter()
            .enumerate()
            .filter(|(_, w)| **w > 0.0)
            .map(move |(i, w)| (self.ids[i], self.ids[i], *w));
        proper.chain(loops)
    }

    /// Weight of the ordered-pair entry `w_ij`: edge weight for `i != j`,
    /// twice the self-loop weight for `i == j`, zero for non-edges.
    pub fn pair_weight_at(&self, i: usize, j: usize) -> f64 {
        if i == j {
            return 2.0 * self.self_loops[i];
        }
        match self.adj[i].binary_search_by_key(&j, |(n, _)| *n) {
            Ok(pos) => self.adj[i][pos].1,
            Err(_) => 0.0,
        }
    }

    /// Induced subgraph on the given node set: kept nodes keep their ids,
    /// coordinates, and every edge of `self` whose endpoints are both kept.
    pub fn induced(&self, keep: &BTreeSet<NodeId>) -> Result<GeoGraph> {
        let mut nodes = Vec::with_capacity(keep.len());
        for id in keep {
            let idx = self.index_of(*id).ok_or(Error::NodeNotFound(*id))?;
            nodes.push((*id, self.coords[idx]));
        }
        let edges = self
            .edges()
            .filter(|(u, v, _)| keep.contains(u) && keep.contains(v))
            .collect();
        GeoGraph::from_parts(nodes, edges)
    }

    pub fn to_json_writer<W: Write>(&self, w: W) -> Result<()> {
        let doc = GraphDoc {
            nodes: self
                .ids
                .iter()
                .zip(&self.coords)
                .map(|(id, c)| NodeDoc {
                    id: id.0,
                    lat: c.lat,
                    lon: c.lon,
                })
                .collect(),
            edges: self
                .edges()
                .map(|(u, v, w)| EdgeDoc { u: u.0, v: v.0, w })
                .collect(),
        };
        serde_json::to_writer_pretty(w, &doc).map_err(|e| Error::InvalidGraph(e.to_string()))
    }

    pub fn from_json_reader<R: Read>(r: R) -> Result<GeoGraph> {
        let doc: GraphDoc =
            serde_json::from_reader(r).map_err(|e| Error::InvalidGraph(e.to_string()))?;
        let mut nodes = Vec::with_capacity(doc.nodes.len());
        for nd in doc.nodes {
            nodes.push((NodeId(nd.id), GeoCoord::new(nd.lat, nd.lon)?));
        }
        let edges = doc
            .edges
            .into_iter()
            .map(|e| (NodeId(e.u), NodeId(e.v), e.w))
            .collect();
        GeoGraph::from_parts(nodes, edges)
    }

    pub fn to_json_file<P: AsRef<Path>>(&self, path: P) -> Result<()> {
        let path = path.as_ref();
        let file = File::create(path).map_err(|e| Error::Io {
            path: path.display().to_string(),
            source: e,
        })?;
        self.to_json_writer(BufWriter::new(file))
    }

    pub fn from_json_file<P: AsRef<Path>>(path: P) -> Result<GeoGraph> {
        let path = path.as_ref();
        let file = File::open(path).map_err(|e| Error::Io {
            path: path.display().to_string(),
            source: e,
        })?;
        GeoGraph::from_json_reader(BufReader::new(file))
    }
}

#[derive(Serialize, Deserialize)]
struct GraphDoc {
    nodes: Vec<NodeDoc>,
    edges: Vec<EdgeDoc>,
}

#[derive(Serialize, Deserialize)]
struct NodeDoc {
    id: u64,
    lat: f64,
    lon: f64,
}

#[derive(Serialize, Deserialize)]
struct EdgeDoc {
    u: u64,
    v: u64,
    w: f64,
}

/// Reads a SNAP-style edge list: two whitespace-separated integer ids per
/// line, `#`-prefixed comment lines and blank lines ignored. Symmetric
/// duplicates `(a,b)`/`(b,a)` collapse to one pair; self-pairs are dropped.
pub fn load_edge_list<P: AsRef<Path>>(path: P) -> Result<BTreeSet<(NodeId, NodeId)>> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        source: e,
    })?;
    let mut pairs = BTreeSet::new();
    for (lineno, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::Io {
            path: path.display().to_string(),
            source: e,
        })?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut tokens = trimmed.split_whitespace();
        let (a, b) = match (tokens.next(), tokens.next(), tokens.next()) {
            (Some(a), Some(b), None) => (a, b),
            _ => {
                return Err(parse_err(path, lineno + 1, "expected two node ids"));
            }
        };
        let a: u64 = a
            .parse()
            .map_err(|_| parse_err(path, lineno + 1, &format!("bad node id {a:?}")))?;
        let b: u64 = b
            .parse()
            .map_err(|_| parse_err(path, lineno + 1, &format!("bad node id {b:?}")))?;
        if a == b {
            continue;
        }
        pairs.insert((NodeId(a.min(b)), NodeId(a.max(b))));
    }
    Ok(pairs)
}

/// Reads a SNAP check-in file (`user \t timestamp \t lat \t lon \t location`)
/// and assigns each user one representative coordinate: the unit-vector mean
/// of its check-in locations. Check-ins at exactly (0, 0) are sentinel noise
/// and are discarded; users left without a valid check-in are absent from
/// the returned map.
pub fn load_checkins<P: AsRef<Path>>(path: P) -> Result<BTreeMap<NodeId, GeoCoord>> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        source: e,
    })?;
    let mut sums: BTreeMap<u64, [f64; 3]> = BTreeMap::new();
    for (lineno, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::Io {
            path: path.display().to_string(),
            source: e,
        })?;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 5 {
            return Err(parse_err(
                path,
                lineno + 1,
                &format!("expected 5 tab-separated fields, got {}", fields.len()),
            ));
        }
        let user: u64 = fields[0]
            .trim()
            .parse()
            .map_err(|_| parse_err(path, lineno + 1, &format!("bad user id {:?}", fields[0])))?;
        let lat: f64 = fields[2]
            .trim()
            .parse()
            .map_err(|_| parse_err(path, lineno + 1, &format!("bad latitude {:?}", fields[2])))?;
        let lon: f64 = fields[3]
            .trim()
            .parse()
            .map_err(|_| parse_err(path, lineno + 1, &format!("bad longitude {:?}", fields[3])))?;
        let coord = GeoCoord::new(lat, lon)
            .map_err(|e| parse_err(path, lineno + 1, &e.to_string()))?;
        if coord.lat == 0.0 && coord.lon == 0.0 {
            continue;
        }
        let v = geodesy::unit_vector(coord);
        let acc = sums.entry(user).or_insert([0.0; 3]);
        acc[0] += v[0];
        acc[1] += v[1];
        acc[2] += v[2];
    }
    let mut out = BTreeMap::new();
    for (user, sum) in sums {
        out.insert(NodeId(user), geodesy::vector_to_coord(sum)?);
    }
    Ok(out)
}

/// Assembles a [`GeoGraph`] from edge pairs and per-node locations.
///
/// Edges with an endpoint lacking a location are dropped and counted; the
/// graph then contains exactly the located nodes that appear in at least
/// one surviving edge. Absent a weight map, every edge weighs 1.0.
pub fn build_graph(
    pairs: &BTreeSet<(NodeId, NodeId)>,
    locations: &BTreeMap<NodeId, GeoCoord>,
    weights: Option<&BTreeMap<(NodeId, NodeId), f64>>,
) -> Result<(GeoGraph, IngestReport)> {
    let mut endpoints: BTreeSet<NodeId> = BTreeSet::new();
    for (a, b) in pairs {
        endpoints.insert(*a);
        endpoints.insert(*b);
    }
    let nodes_read = endpoints.len();
    let edges_read = pairs.len();

    let mut kept_nodes: BTreeSet<NodeId> = BTreeSet::new();
    let mut edges = Vec::new();
    let mut dropped_edges = 0usize;
    for (a, b) in pairs {
        if locations.contains_key(a) && locations.contains_key(b) {
            let key = (*a.min(b), *a.max(b));
            let w = weights.and_then(|m| m.get(&key).copied()).unwrap_or(1.0);
            edges.push((*a, *b, w));
            kept_nodes.insert(*a);
            kept_nodes.insert(*b);
        } else {
            dropped_edges += 1;
        }
    }
    let nodes: Vec<(NodeId, GeoCoord)> = kept_nodes
        .iter()
        .map(|id| (*id, locations[id]))
        .collect();
    let report = IngestReport {
        nodes_read,
        nodes_dropped_no_location: nodes_read - kept_nodes.len(),
        edges_read,
        edges_dropped_endpoint_missing: dropped_edges,
    };
    Ok((GeoGraph::from_parts(nodes, edges)?, report))
}

fn parse_err(path: &Path, line: usize, msg: &str) -> Error {
    Error::Parse {
        path: path.display().to_string(),
        line,
        msg: msg.to_string(),
    }
}
