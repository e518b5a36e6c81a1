//! Owen-scrambled Sobol points with a recorded scrambling seed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Maximum number of points per scrambled sequence.
pub const MAX_POINTS: u32 = 1 << 16;
/// Maximum dimension of a point.
pub const MAX_DIMS: usize = 256;

/// A randomized Sobol sequence. The underlying generator returns 24-bit
/// values; each coordinate is jittered uniformly inside its 2^{−24} cell so
/// every coordinate is exactly uniform and never 0 or 1.
#[derive(Debug, Clone)]
pub struct ScrambledSobol {
    seed: u32,
    dims: usize,
    jitter: ChaCha8Rng,
    next: u32,
}

impl ScrambledSobol {
    pub fn new(dims: usize, seed: u32) -> Self {
        assert!(dims >= 1 && dims <= MAX_DIMS, "dimension {dims} out of range");
        let mut jitter = ChaCha8Rng::seed_from_u64(u64::from(seed) ^ 0x5851_f42d_4c95_7f2d);
        jitter.set_stream(u64::from(seed));
        Self { seed, dims, jitter, next: 0 }
    }

    pub fn seed(&self) -> u32 {
        self.seed
    }

    pub fn dims(&self) -> usize {
        self.dims
    }

    /// Writes the next point into `out`; `None` once the sequence is exhausted.
    pub fn next_point(&mut self, out: &mut [f64]) -> Option<()> {
        if self.next >= MAX_POINTS {
            return None;
        }
        const CELL: f64 = 1.0 / (1u64 << 24) as f64;
        for (d, o) in out.iter_mut().enumerate().take(self.dims) {
            let base = sobol_burley::sample(self.next, d as u32, self.seed) as f64;
            let j: f64 = self.jitter.random::<f64>();
            *o = base + CELL * j.max(f64::MIN_POSITIVE);
        }
        self.next += 1;
        Some(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn points_in_open_cube_and_reproducible() {
        let mut a = ScrambledSobol::new(5, 9);
        let mut b = ScrambledSobol::new(5, 9);
        let mut p = [0.0; 5];
        let mut q = [0.0; 5];
        for _ in 0..1000 {
            a.next_point(&mut p).unwrap();
            b.next_point(&mut q).unwrap();
            assert_eq!(p, q);
            assert!(p.iter().all(|&x| x > 0.0 && x < 1.0));
        }
    }

    #[test]
    fn integrates_smooth_function() {
        let mut s = ScrambledSobol::new(3, 1);
        let mut p = [0.0; 3];
        let n = 4096;
        let mut acc = 0.0;
        for _ in 0..n {
            s.next_point(&mut p).unwrap();
            acc += p[0] * p[1] * p[2];
        }
        assert!((acc / n as f64 - 0.125).abs() < 1e-4);
    }
}
