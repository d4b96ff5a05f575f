use std::f64::consts::PI;

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::means::Sequence;

/// Seeded random sequences: `n` uniform in `1..=8`, entries log-uniform in
/// `[0.1, 10]`, 10% of instances with a forced duplicate and 5% constant.
#[derive(Debug, Clone)]
pub struct InstanceGenerator {
    rng: ChaCha8Rng,
}

impl InstanceGenerator {
    pub const MAX_LEN: usize = 8;
    pub const LOW: f64 = 0.1;
    pub const HIGH: f64 = 10.0;

    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn log_uniform(&mut self) -> f64 {
        let (lo, hi) = (Self::LOW.ln(), Self::HIGH.ln());
        self.rng
            .gen_range(lo..=hi)
            .exp()
            .clamp(Self::LOW, Self::HIGH)
    }

    pub fn next_sequence(&mut self) -> Sequence {
        let n = self.rng.gen_range(1..=Self::MAX_LEN);
        let kind: f64 = self.rng.gen();
        let mut values: Vec<f64> = (0..n).map(|_| self.log_uniform()).collect();
        if kind < 0.05 {
            let c = values[0];
            values.iter_mut().for_each(|v| *v = c);
        } else if kind < 0.15 && n >= 2 {
            let src = self.rng.gen_range(0..n);
            let mut dst = self.rng.gen_range(0..n - 1);
            if dst >= src {
                dst += 1;
            }
            values[dst] = values[src];
        }
        Sequence::new(values).expect("generated entries are positive")
    }

    /// A random permutation of `values`.
    pub fn shuffled(&mut self, values: &[f64]) -> Vec<f64> {
        let mut v = values.to_vec();
        v.shuffle(&mut self.rng);
        v
    }

    /// A point in the upper half-plane with modulus in `[0.05, 50]`.
    pub fn upper_half_plane_point(&mut self) -> Complex64 {
        let modulus = (self.rng.gen_range(0.05f64.ln()..50f64.ln())).exp();
        let arg = self.rng.gen_range(0.01..PI - 0.01);
        Complex64::from_polar(modulus, arg)
    }
}

/// Forty evaluation points around `-a_1`, each at least `0.05` from the cut
/// `(-inf, -a_1]`: five radii times eight directions.
pub fn z_grid(a1: f64) -> Vec<Complex64> {
    const RADII: [f64; 5] = [0.2, 0.7, 2.0, 6.0, 20.0];
    const ANGLES: [f64; 8] = [0.0, 0.25, 0.5, 0.75, 0.875, -0.25, -0.5, -0.875];
    RADII
        .iter()
        .flat_map(|&rho| {
            ANGLES
                .iter()
                .map(move |&frac| Complex64::new(-a1, 0.0) + Complex64::from_polar(rho, frac * PI))
        })
        .map(|z| {
            // Exactly real on the positive direction.
            if z.im.abs() < 1e-15 {
                Complex64::new(z.re, 0.0)
            } else {
                z
            }
        })
        .collect()
}

/// A contour test point with `|z|` in `[0.5, 10]` and argument in
/// `(-0.9 pi, 0.9 pi)`.
pub fn contour_point(rng: &mut impl Rng) -> Complex64 {
    let modulus = rng.gen_range(0.5f64.ln()..10f64.ln()).exp();
    let arg = rng.gen_range(-0.9 * PI..0.9 * PI);
    Complex64::from_polar(modulus, arg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generator_is_deterministic() {
        let mut a = InstanceGenerator::new(7);
        let mut b = InstanceGenerator::new(7);
        for _ in 0..50 {
            assert_eq!(a.next_sequence(), b.next_sequence());
        }
    }

    #[test]
    fn generator_respects_ranges_and_mixes_kinds() {
        let mut g = InstanceGenerator::new(1);
        let seqs: Vec<Sequence> = (0..2000).map(|_| g.next_sequence()).collect();
        assert!(seqs.iter().all(|s| (1..=8).contains(&s.len())));
        assert!(seqs.iter().all(|s| s.min() >= 0.1 && s.max() <= 10.0));
        let constant = seqs
            .iter()
            .filter(|s| s.len() > 1 && s.is_constant())
            .count();
        let dup = seqs
            .iter()
            .filter(|s| !s.is_constant() && s.values().windows(2).any(|w| w[0] == w[1]))
            .count();
        assert!(constant > 40, "{constant}");
        assert!(dup > 100, "{dup}");
    }

    #[test]
    fn grid_keeps_distance_from_cut() {
        for a1 in [0.1, 1.0, 7.3] {
            let grid = z_grid(a1);
            assert_eq!(grid.len(), 40);
            for z in grid {
                let dist = if z.re >= -a1 {
                    (z - Complex64::new(-a1, 0.0)).norm()
                } else {
                    z.im.abs()
                };
                assert!(dist >= 0.05, "{z}");
            }
        }
    }
}
