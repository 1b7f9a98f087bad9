//! Halton low-discrepancy points.

const PRIMES: [u64; 3] = [2, 3, 5];

/// Van der Corput radical inverse of `index` in `base`.
pub fn radical_inverse(mut index: u64, base: u64) -> f64 {
    let inv = 1.0 / base as f64;
    let mut f = inv;
    let mut out = 0.0;
    while index > 0 {
        out += f * (index % base) as f64;
        index /= base;
        f *= inv;
    }
    out
}

/// The first `n` Halton points (indices `1..=n`, bases 2, 3, 5) mapped to `[-1, 1]^dim`.
pub fn halton_box(n: usize, dim: usize) -> Vec<Vec<f64>> {
    assert!(dim <= PRIMES.len(), "Halton points supported up to dimension {}", PRIMES.len());
    (1..=n as u64)
        .map(|i| PRIMES[..dim].iter().map(|&b| 2.0 * radical_inverse(i, b) - 1.0).collect())
        .collect()
}
