//! Independent draws from the target measure with equal weights.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::discrete::DiscreteMeasure;
use super::measure::Measure;

pub fn run_monte_carlo(measure: &Measure, n: usize, seed: u64) -> DiscreteMeasure {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    DiscreteMeasure::uniform((0..n).map(|_| measure.sample(&mut rng)).collect())
}
