//! Probability measures on the box `[-1, 1]^d`, `d <= 3`.

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Normal;

use super::quadrature::GaussLegendre;
use crate::error::{Error, Result};

pub const MAX_DIMENSION: usize = 3;

/// Defaults of the mixture measure used by the experiments.
pub const MIXTURE_WEIGHTS: [f64; 3] = [0.5, 0.3, 0.2];
pub const MIXTURE_BANDWIDTH: f64 = 0.3;
pub const MIXTURE_SEED: u64 = 2022;

#[derive(Debug, Clone, PartialEq)]
pub struct MixtureComponent {
    pub weight: f64,
    pub center: Vec<f64>,
    pub bandwidth: f64,
}

#[derive(Debug, Clone, PartialEq)]
enum Shape {
    Uniform,
    /// Density proportional to `exp(-|x|^2)`.
    TruncatedGaussian,
    Mixture(Vec<MixtureComponent>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Measure {
    dim: usize,
    shape: Shape,
    /// Mass of the unnormalized density on the box.
    mass: f64,
}

fn check_dimension(dim: usize) -> Result<()> {
    if dim == 0 || dim > MAX_DIMENSION {
        return Err(Error::UnsupportedDimension(dim));
    }
    Ok(())
}

fn gaussian_bump(t: f64, center: f64, bandwidth: f64) -> f64 {
    let u = (t - center) / bandwidth;
    (-0.5 * u * u).exp() / (bandwidth * (2.0 * std::f64::consts::PI).sqrt())
}

impl Measure {
    pub fn uniform(dim: usize) -> Result<Self> {
        check_dimension(dim)?;
        Ok(Measure { dim, shape: Shape::Uniform, mass: 2f64.powi(dim as i32) })
    }

    pub fn truncated_gaussian(dim: usize) -> Result<Self> {
        check_dimension(dim)?;
        let axis = GaussLegendre::new(64).integrate(-1.0, 1.0, |t| (-t * t).exp());
        Ok(Measure { dim, shape: Shape::TruncatedGaussian, mass: axis.powi(dim as i32) })
    }

    /// Mixture of isotropic Gaussians restricted to the box and renormalized.
    pub fn mixture(components: Vec<MixtureComponent>) -> Result<Self> {
        let first = components.first().ok_or_else(|| Error::config("mixture needs at least one component"))?;
        let dim = first.center.len();
        check_dimension(dim)?;
        for c in &components {
            if c.center.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, actual: c.center.len() });
            }
            if !(c.weight > 0.0 && c.bandwidth > 0.0) || !c.center.iter().all(|v| v.is_finite()) {
                return Err(Error::config("mixture weights and bandwidths must be positive"));
            }
        }
        let rule = GaussLegendre::new(64);
        let mass = components
            .iter()
            .map(|c| {
                c.weight
                    * c.center
                        .iter()
                        .map(|&m| rule.integrate(-1.0, 1.0, |t| gaussian_bump(t, m, c.bandwidth)))
                        .product::<f64>()
            })
            .sum();
        Ok(Measure { dim, shape: Shape::Mixture(components), mass })
    }

    /// Three components with weights 0.5 / 0.3 / 0.2, bandwidth 0.3 and
    /// centers drawn uniformly from `[-0.6, 0.6]^d` with a fixed seed.
    pub fn default_mixture(dim: usize) -> Result<Self> {
        check_dimension(dim)?;
        let mut rng = ChaCha8Rng::seed_from_u64(MIXTURE_SEED);
        let components = MIXTURE_WEIGHTS
            .iter()
            .map(|&weight| MixtureComponent {
                weight,
                center: (0..dim).map(|_| rng.random_range(-0.6..0.6)).collect(),
                bandwidth: MIXTURE_BANDWIDTH,
            })
            .collect();
        Measure::mixture(components)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn name(&self) -> &'static str {
        match self.shape {
            Shape::Uniform => "uniform",
            Shape::TruncatedGaussian => "truncated-gaussian",
            Shape::Mixture(_) => "mixture",
        }
    }

    pub fn components(&self) -> &[MixtureComponent] {
        match &self.shape {
            Shape::Mixture(c) => c,
            _ => &[],
        }
    }

    /// Invariant under `x -> -x`.
    pub fn is_symmetric(&self) -> bool {
        !matches!(self.shape, Shape::Mixture(_))
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dim && x.iter().all(|v| (-1.0..=1.0).contains(v))
    }

    /// Probability density with respect to Lebesgue measure; zero off the box.
    pub fn density(&self, x: &[f64]) -> f64 {
        if !self.contains(x) {
            return 0.0;
        }
        let raw = match &self.shape {
            Shape::Uniform => 1.0,
            Shape::TruncatedGaussian => (-x.iter().map(|v| v * v).sum::<f64>()).exp(),
            Shape::Mixture(cs) => cs
                .iter()
                .map(|c| c.weight * x.iter().zip(&c.center).map(|(&t, &m)| gaussian_bump(t, m, c.bandwidth)).product::<f64>())
                .sum(),
        };
        raw / self.mass
    }

    /// Densities on the tensor grid `axes[0] x axes[1] x ...`, last axis
    /// fastest. All coordinates must lie in the box.
    pub fn tensor_density(&self, axes: &[&[f64]]) -> Vec<f64> {
        debug_assert_eq!(axes.len(), self.dim);
        let product = |factors: &[Vec<f64>]| {
            factors.iter().fold(vec![1.0], |grid, axis| outer(&grid, axis, |g, f| g * f))
        };
        let mut grid = match &self.shape {
            Shape::Uniform => vec![1.0; axes.iter().map(|a| a.len()).product()],
            Shape::TruncatedGaussian => {
                let factors: Vec<Vec<f64>> = axes.iter().map(|a| a.iter().map(|t| (-t * t).exp()).collect()).collect();
                product(&factors)
            }
            Shape::Mixture(cs) => {
                let mut total = vec![0.0; axes.iter().map(|a| a.len()).product()];
                for c in cs {
                    let factors: Vec<Vec<f64>> = axes
                        .iter()
                        .zip(&c.center)
                        .map(|(a, &m)| a.iter().map(|&t| gaussian_bump(t, m, c.bandwidth)).collect())
                        .collect();
                    for (t, v) in total.iter_mut().zip(product(&factors)) {
                        *t += c.weight * v;
                    }
                }
                total
            }
        };
        let scale = 1.0 / self.mass;
        grid.iter_mut().for_each(|v| *v *= scale);
        grid
    }

    /// One draw by rejection from the untruncated distribution.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        match &self.shape {
            Shape::Uniform => (0..self.dim).map(|_| rng.random_range(-1.0..=1.0)).collect(),
            Shape::TruncatedGaussian => {
                let normal = Normal::new(0.0, std::f64::consts::FRAC_1_SQRT_2).expect("valid normal");
                (0..self.dim)
                    .map(|_| loop {
                        let v = normal.sample(rng);
                        if (-1.0..=1.0).contains(&v) {
                            break v;
                        }
                    })
                    .collect()
            }
            Shape::Mixture(cs) => {
                let pick = WeightedIndex::new(cs.iter().map(|c| c.weight)).expect("positive weights");
                loop {
                    let c = &cs[pick.sample(rng)];
                    let x: Vec<f64> = c
                        .center
                        .iter()
                        .map(|&m| Normal::new(m, c.bandwidth).expect("valid normal").sample(rng))
                        .collect();
                    if self.contains(&x) {
                        break x;
                    }
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn total_mass(m: &Measure) -> f64 {
        let rule = GaussLegendre::new(64);
        match m.dim() {
            1 => rule.integrate(-1.0, 1.0, |x| m.density(&[x])),
            2 => rule.integrate(-1.0, 1.0, |x| rule.integrate(-1.0, 1.0, |y| m.density(&[x, y]))),
            _ => unreachable!(),
        }
    }

    #[test]
    fn densities_integrate_to_one() {
        for dim in 1..=2 {
            for m in [
                Measure::uniform(dim).unwrap(),
                Measure::truncated_gaussian(dim).unwrap(),
                Measure::default_mixture(dim).unwrap(),
            ] {
                assert!((total_mass(&m) - 1.0).abs() < 1e-12, "{} d={dim}", m.name());
            }
        }
    }

    #[test]
    fn density_vanishes_off_the_box() {
        let m = Measure::truncated_gaussian(2).unwrap();
        assert_eq!(m.density(&[1.2, 0.0]), 0.0);
        assert!(m.density(&[1.0, 0.0]) > 0.0);
    }

    #[test]
    fn dimension_limits() {
        assert_eq!(Measure::uniform(4).unwrap_err(), Error::UnsupportedDimension(4));
        assert!(Measure::uniform(0).is_err());
        assert!(Measure::uniform(4).unwrap_err().is_configuration());
    }

    #[test]
    fn samples_stay_in_the_box_and_match_the_mean() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for m in [
            Measure::uniform(2).unwrap(),
            Measure::truncated_gaussian(2).unwrap(),
            Measure::default_mixture(2).unwrap(),
        ] {
            let n = 20_000;
            let mut mean = [0.0; 2];
            for _ in 0..n {
                let x = m.sample(&mut rng);
                assert!(m.contains(&x));
                mean[0] += x[0] / n as f64;
                mean[1] += x[1] / n as f64;
            }
            let rule = GaussLegendre::new(64);
            let exact = rule.integrate(-1.0, 1.0, |x| x * rule.integrate(-1.0, 1.0, |y| m.density(&[x, y])));
            assert!((mean[0] - exact).abs() < 4.0 / (n as f64).sqrt(), "{}", m.name());
        }
    }
}

/// `[op(g, a) for g in grid for a in axis]`, the last index fastest.
pub(crate) fn outer(grid: &[f64], axis: &[f64], op: impl Fn(f64, f64) -> f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(grid.len() * axis.len());
    for &g in grid {
        for &a in axis {
            out.push(op(g, a));
        }
    }
    out
}
