//! Seeded problem instances behind each [`ProblemSpec`].

use bpcg::herding::{CandidatePool, EmbeddingCache};
use bpcg::lmo::{BirkhoffPolytope, LpBall, ProbabilitySimplex, Spectrahedron};
use bpcg::objectives::QuadraticDistance;
use bpcg::{Atom, LinearMinimizationOracle, Objective};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::data::{ingest_movielens, synthetic_lowrank};
use crate::error::{BenchError, Result};
use crate::spec::{MatrixSource, ProblemSpec};

/// Norm of the ball-instance center, so the optimum is interior.
pub const LP_CENTER_NORM: f64 = 0.5;

/// A smooth objective over a region with a known start vertex.
pub struct VectorInstance {
    pub objective: Box<dyn Objective>,
    pub lmo: Box<dyn LinearMinimizationOracle>,
    pub x0: Atom,
    /// Optimal value when it is known in closed form.
    pub optimum: Option<f64>,
}

pub struct HerdingInstance {
    pub cache: EmbeddingCache,
    pub pool: CandidatePool,
    /// Start node: the center of the box.
    pub x0: Vec<f64>,
}

pub enum Instance {
    Vector(VectorInstance),
    Herding(HerdingInstance),
}

pub fn build(problem: &ProblemSpec, seed: u64) -> Result<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let instance = match problem {
        ProblemSpec::Simplex { n } => {
            check_size(*n, "simplex dimension")?;
            Instance::Vector(VectorInstance {
                objective: Box::new(QuadraticDistance::new(simplex_center(*n, &mut rng))),
                lmo: Box::new(ProbabilitySimplex::new(*n)),
                x0: Atom::basis(*n, 0),
                optimum: Some(0.0),
            })
        }
        ProblemSpec::Birkhoff { n } => {
            check_size(*n, "Birkhoff side")?;
            let scale = 1.0 / *n as f64;
            let center: Vec<f64> = (0..n * n).map(|_| rng.random::<f64>() * scale).collect();
            Instance::Vector(VectorInstance {
                objective: Box::new(QuadraticDistance::new(center)),
                lmo: Box::new(BirkhoffPolytope::new(*n)),
                x0: Atom::permutation((0..*n).collect())?,
                optimum: None,
            })
        }
        ProblemSpec::LpBall { n, p } => {
            check_size(*n, "ball dimension")?;
            if !(*p > 1.0 && p.is_finite()) {
                return Err(BenchError::config(format!("ball exponent must be finite and > 1, got {p}")));
            }
            let center = lp_center(*n, *p, &mut rng);
            let lmo = LpBall::new(*n, *p);
            let x0 = lmo.minimize(&center)?;
            Instance::Vector(VectorInstance {
                objective: Box::new(QuadraticDistance::new(center)),
                lmo: Box::new(lmo),
                x0,
                optimum: Some(0.0),
            })
        }
        ProblemSpec::MatrixCompletion(source) => {
            let loss = match source {
                MatrixSource::Synthetic { n, rank, noise } => synthetic_lowrank(*n, *rank, *noise, seed)?.loss()?,
                MatrixSource::MovieLens { path, top } => ingest_movielens(path, *top)?.loss()?,
            };
            let n = loss.side();
            let mut e0 = vec![0.0; n];
            e0[0] = 1.0;
            Instance::Vector(VectorInstance {
                objective: Box::new(loss),
                lmo: Box::new(Spectrahedron::new(n)),
                x0: Atom::factor(e0)?,
                optimum: None,
            })
        }
        ProblemSpec::Herding { kernel, measure, dim, pool_size } => {
            if *pool_size == 0 {
                return Err(BenchError::config("herding pool size must be at least 1"));
            }
            let cache = EmbeddingCache::new(kernel.kernel(), measure.build(*dim)?)?;
            let pool = CandidatePool::halton(&cache, *pool_size);
            Instance::Herding(HerdingInstance { cache, pool, x0: vec![0.0; *dim] })
        }
    };
    Ok(instance)
}

fn check_size(n: usize, what: &str) -> Result<()> {
    if n < 2 {
        return Err(BenchError::config(format!("{what} must be at least 2, got {n}")));
    }
    Ok(())
}

/// Random point of the relative interior: weights in `[0.5, 1.5)`, normalized.
pub fn simplex_center(n: usize, rng: &mut impl Rng) -> Vec<f64> {
    let raw: Vec<f64> = (0..n).map(|_| rng.random_range(0.5..1.5)).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|v| v / total).collect()
}

/// Random direction rescaled to `p`-norm [`LP_CENTER_NORM`].
pub fn lp_center(n: usize, p: f64, rng: &mut impl Rng) -> Vec<f64> {
    let raw: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
    let norm = raw.iter().map(|v: &f64| v.abs().powf(p)).sum::<f64>().powf(1.0 / p);
    raw.into_iter().map(|v| LP_CENTER_NORM * v / norm).collect()
}
