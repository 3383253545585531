//! Detection of geographically disperse communities in geolocated social
//! networks.
//!
//! The library scores partitions with Newman-Girvan modularity and with
//! distance modularity (a gravity null model in which nearby pairs are
//! expected to connect), and maximizes either with a Louvain-style two-phase
//! heuristic. Ingestion understands SNAP edge-list and check-in files, and a
//! snowball sampler extracts experiment-sized subgraphs from large networks.

pub mod error;
pub mod geodesy;
pub mod graph;
pub mod louvain;
pub mod modularity;
pub mod oracle;
pub mod sampling;

pub use error::{Error, Result};
pub use geodesy::{centroid, distance_matrix, haversine_km, DecayKernel, DistanceMatrix};
pub use graph::{build_graph, load_checkins, load_edge_list, GeoCoord, GeoGraph, IngestReport, NodeId};
pub use louvain::{
    aggregate, louvain, louvain_d, rescore_base, DetectionConfig, DetectionResult, InitStrategy,
    MetaGraph, Objective,
};
pub use modularity::{
    build_constant_null_model, build_null_model, community_quality, distance_modularity, gain,
    ng_modularity, rank_communities, CommunityId, CommunityScore, NullModelTable, Partition,
};
pub use sampling::{batch_samples, snowball_sample, Expansion, SampleSpec, SeedNode};
