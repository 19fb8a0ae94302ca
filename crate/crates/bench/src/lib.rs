//! Fixtures shared by the benchmarks.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use vaismanlab::models::HermitianModel;

/// Deterministic sample points in a model's fundamental domain.
pub fn fixture_points(model: &HermitianModel, count: usize) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    (0..count).map(|_| model.sample_point(&mut rng)).collect()
}
