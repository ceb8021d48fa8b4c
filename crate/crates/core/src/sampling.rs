//! Seeded phase-space sampling: x uniform in a chart box, ξ uniform on the
//! unit sphere.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::expr::PhasePoint;

#[derive(Clone, Debug)]
pub struct Sampler {
    x_box: Vec<(f64, f64)>,
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(x_box: Vec<(f64, f64)>, seed: u64) -> Self {
        assert!(
            !x_box.is_empty(),
            "chart box must have at least one dimension"
        );
        Sampler {
            x_box,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Unit box `[-1, 1]^d`.
    pub fn unit_box(d: usize, seed: u64) -> Self {
        Sampler::new(vec![(-1.0, 1.0); d], seed)
    }

    pub fn dim(&self) -> usize {
        self.x_box.len()
    }

    pub fn point(&mut self) -> PhasePoint {
        let x = self
            .x_box
            .iter()
            .map(|&(lo, hi)| lo + (hi - lo) * self.rng.random::<f64>())
            .collect();
        let xi = loop {
            let v: Vec<f64> = (0..self.x_box.len())
                .map(|_| self.rng.sample::<f64, _>(StandardNormal))
                .collect();
            let norm = v.iter().map(|c| c * c).sum::<f64>().sqrt();
            if norm > 1e-8 {
                break v.into_iter().map(|c| c / norm).collect();
            }
        };
        PhasePoint { x, xi }
    }

    pub fn points(&mut self, n: usize) -> Vec<PhasePoint> {
        (0..n).map(|_| self.point()).collect()
    }

    /// Uniform draw in `[lo, hi)`, sharing the sampler's stream.
    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.rng.random::<f64>()
    }
}
