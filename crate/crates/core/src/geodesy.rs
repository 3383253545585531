//! Great-circle distances, distance-decay kernels, and spherical centroids.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{GeoCoord, GeoGraph, NodeId};

/// Mean Earth radius in kilometers.
pub const EARTH_RADIUS_KM: f64 = 6371.0;

/// Distance-decay function family.
///
/// The exponential kernel is `f(x) = exp(-(x/sigma)^2)`: sigma is the
/// distance at which a node's influence drops to `1/e`. The constant kernel
/// is the `sigma -> infinity` limit, under which the distance null model
/// reduces exactly to the degree-product null model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum DecayKernel {
    Exponential { sigma_km: f64 },
    Constant,
}

impl DecayKernel {
    pub fn exponential(sigma_km: f64) -> Result<Self> {
        if !(sigma_km.is_finite() && sigma_km > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "sigma must be finite and positive, got {sigma_km}"
            )));
        }
        Ok(Self::Exponential { sigma_km })
    }

    /// Kernel value for a non-negative distance; `x < 0` is a domain error.
    pub fn decay(&self, x_km: f64) -> Result<f64> {
        if x_km < 0.0 {
            return Err(Error::NegativeDistance(x_km));
        }
        Ok(self.value(x_km))
    }

    /// Unchecked kernel evaluation, for hot loops where `x >= 0` holds by
    /// construction.
    #[inline]
    pub fn value(&self, x_km: f64) -> f64 {
        debug_assert!(x_km >= 0.0);
        match self {
            Self::Exponential { sigma_km } => {
                let r = x_km / sigma_km;
                (-(r * r)).exp()
            }
            Self::Constant => 1.0,
        }
    }

    pub fn is_constant(&self) -> bool {
        matches!(self, Self::Constant)
    }
}

/// Great-circle distance between two coordinates (haversine formula,
/// spherical Earth of radius [`EARTH_RADIUS_KM`]).
pub fn haversine_km(a: GeoCoord, b: GeoCoord) -> f64 {
    let lat1 = a.lat.to_radians();
    let lat2 = b.lat.to_radians();
    let dlat = (b.lat - a.lat).to_radians();
    let dlon = (b.lon - a.lon).to_radians();

    let s1 = (dlat / 2.0).sin();
    let s2 = (dlon / 2.0).sin();
    let h = s1 * s1 + lat1.cos() * lat2.cos() * s2 * s2;
    2.0 * EARTH_RADIUS_KM * h.sqrt().min(1.0).asin()
}

/// Unit vector on the sphere for a coordinate.
pub fn unit_vector(c: GeoCoord) -> [f64; 3] {
    let lat = c.lat.to_radians();
    let lon = c.lon.to_radians();
    [lat.cos() * lon.cos(), lat.cos() * lon.sin(), lat.sin()]
}

/// Converts a (not necessarily unit) vector back to a coordinate. Fails when
/// the norm is degenerate, i.e. the points it averages are antipodal.
pub fn vector_to_coord(v: [f64; 3]) -> Result<GeoCoord> {
    let norm = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    if norm < 1e-12 {
        return Err(Error::DegenerateCentroid);
    }
    let lat = (v[2] / norm).clamp(-1.0, 1.0).asin().to_degrees();
    let lon = v[1].atan2(v[0]).to_degrees();
    GeoCoord::new(lat.clamp(-90.0, 90.0), lon.clamp(-180.0, 180.0))
}

/// Multiplicity-weighted spherical centroid: sum the unit vectors of the
/// points (each counted by its multiplicity), normalize, convert back.
/// Deterministic and permutation-invariant.
pub fn centroid(points: &[(GeoCoord, usize)]) -> Result<GeoCoord> {
    if points.is_empty() {
        return Err(Error::InvalidConfig("centroid of zero points".into()));
    }
    let mut sum = [0.0f64; 3];
    for (c, mult) in points {
        if *mult == 0 {
            return Err(Error::InvalidConfig("centroid multiplicity must be >= 1".into()));
        }
        let v = unit_vector(*c);
        let w = *mult as f64;
        sum[0] += w * v[0];
        sum[1] += w * v[1];
        sum[2] += w * v[2];
    }
    vector_to_coord(sum)
}

/// Symmetric all-pairs distance table in kilometers, indexed like its graph.
#[derive(Debug, Clone)]
pub struct DistanceMatrix {
    n: usize,
    ids: Vec<NodeId>,
    d: Vec<f64>,
}

impl DistanceMatrix {
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn ids(&self) -> &[NodeId] {
        &self.ids
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.d[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.d[i * self.n..(i + 1) * self.n]
    }
}

/// Precomputes all-pairs haversine distances for a graph. Rows are filled in
/// parallel; each entry is written identically at `(i,j)` and `(j,i)` so the
/// table is symmetric bit-for-bit.
pub fn distance_matrix(g: &GeoGraph) -> DistanceMatrix {
    let n = g.node_count();
    let coords: Vec<GeoCoord> = (0..n).map(|i| g.coord_at(i)).collect();
    let mut d = vec![0.0f64; n * n];
    d.par_chunks_mut(n).enumerate().for_each(|(i, row)| {
        for (j, cell) in row.iter_mut().enumerate() {
            // compute with (min, max) index order so (i,j) and (j,i) agree exactly
            let (a, b) = if i <= j { (i, j) } else { (j, i) };
            *cell = if a == b {
                0.0
            } else {
                haversine_km(coords[a], coords[b])
            };
        }
    });
    DistanceMatrix {
        n,
        ids: g.ids().to_vec(),
        d,
    }
}
