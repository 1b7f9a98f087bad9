//! Candidate points for the continuous oracle, with their embeddings.

use rayon::prelude::*;

use super::embedding::EmbeddingCache;
use super::halton::halton_box;

pub const DEFAULT_POOL_SIZE: usize = 4096;

#[derive(Debug, Clone)]
pub struct CandidatePool {
    pub points: Vec<Vec<f64>>,
    /// `z(p)` for every point.
    pub z: Vec<f64>,
    /// Typical distance between neighbouring points along one axis.
    pub spacing: f64,
}

impl CandidatePool {
    pub fn halton(cache: &EmbeddingCache, size: usize) -> Self {
        let points = halton_box(size, cache.dim());
        Self::from_points(cache, points)
    }

    pub fn from_points(cache: &EmbeddingCache, points: Vec<Vec<f64>>) -> Self {
        let z = points.par_iter().map(|p| cache.z(p)).collect();
        let per_axis = (points.len().max(1) as f64).powf(1.0 / cache.dim() as f64);
        CandidatePool { points, z, spacing: 2.0 / per_axis }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}
