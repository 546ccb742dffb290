use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Uniform reservoir sample of `min(n, len)` items, in reservoir order.
///
/// Deterministic for a fixed seed and input order.
pub fn sample_representative<T>(collection: impl IntoIterator<Item = T>, n: usize, seed: u64) -> Vec<T> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut reservoir: Vec<T> = Vec::with_capacity(n);
    if n == 0 {
        return reservoir;
    }
    for (i, item) in collection.into_iter().enumerate() {
        if i < n {
            reservoir.push(item);
        } else {
            let j = rng.gen_range(0..=i);
            if j < n {
                reservoir[j] = item;
            }
        }
    }
    reservoir
}
