//! Seeded test-signal families.
//!
//! Parameters depend only on the window `[t0, t0 + L)`, never on `N`, so the
//! same seed gives samples of the same function at every resolution.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SaftError};
use crate::grid::{gaussian, Grid, Mode, Signal};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyKind {
    /// Sums of 1 to 4 modulated Gaussians with random centers, widths and phases.
    GaussianMixture,
    /// Trigonometric polynomial on the window with `|xi| <= 2`, zero mean.
    BandLimitedNoise,
}

impl std::str::FromStr for FamilyKind {
    type Err = SaftError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mixture" | "gaussian_mixture" => Ok(FamilyKind::GaussianMixture),
            "noise" | "band_limited_noise" => Ok(FamilyKind::BandLimitedNoise),
            _ => Err(SaftError::InvalidArgument(format!(
                "family must be mixture or noise, got '{s}'"
            ))),
        }
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn unit_complex(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::cis(rng.gen_range(0.0..2.0 * PI))
}

/// One Gaussian mixture, concentrated in the middle 40% of the window.
pub fn gaussian_mixture(grid: Grid, mode: Mode, rng: &mut ChaCha8Rng) -> Signal {
    let l = grid.length();
    let mid = grid.start + 0.5 * l;
    let k = rng.gen_range(1..=4);
    let comps: Vec<(f64, f64, f64, Complex64)> = (0..k)
        .map(|_| {
            let c = mid + rng.gen_range(-0.12..0.12) * l;
            let w = rng.gen_range(0.04..0.08) * l;
            let nu = rng.gen_range(-1.5..1.5) * 16.0 / l;
            let amp = unit_complex(rng) * rng.gen_range(0.3..1.0);
            (c, w, nu, amp)
        })
        .collect();
    let samples = grid
        .nodes()
        .iter()
        .map(|&t| {
            comps
                .iter()
                .map(|&(c, w, nu, amp)| amp * Complex64::cis(2.0 * PI * nu * t) * gaussian((t - c) / w))
                .sum()
        })
        .collect();
    Signal { grid, mode, samples }
}

/// Random trigonometric polynomial `sum_j c_j e^{2 pi i j t / L}`, `0 < |j| <= 2L`.
pub fn band_limited_noise(grid: Grid, mode: Mode, rng: &mut ChaCha8Rng) -> Signal {
    let l = grid.length();
    let jmax = (2.0 * l).floor() as i64;
    let coeffs: Vec<(f64, Complex64)> = (-jmax..=jmax)
        .filter(|&j| j != 0)
        .map(|j| {
            let c = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            (j as f64 / l, c)
        })
        .collect();
    let samples = grid
        .nodes()
        .iter()
        .map(|&t| {
            coeffs
                .iter()
                .map(|&(xi, c)| c * Complex64::cis(2.0 * PI * xi * (t - grid.start)))
                .sum()
        })
        .collect();
    Signal { grid, mode, samples }
}

/// `count` signals scaled to unit L2 norm.
pub fn family(kind: FamilyKind, grid: Grid, mode: Mode, count: usize, seed: u64) -> Vec<Signal> {
    let mut r = rng(seed);
    (0..count)
        .map(|_| {
            let s = match kind {
                FamilyKind::GaussianMixture => gaussian_mixture(grid, mode, &mut r),
                FamilyKind::BandLimitedNoise => band_limited_noise(grid, mode, &mut r),
            };
            let n = s.norm(2.0);
            s.map(|_, z| z / n)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::max_abs_diff;

    #[test]
    fn deterministic_and_normalized() {
        let g = Grid::window(-8.0, 8.0, 256).unwrap();
        for kind in [FamilyKind::GaussianMixture, FamilyKind::BandLimitedNoise] {
            let a = family(kind, g, Mode::Cyclic, 5, 42);
            let b = family(kind, g, Mode::Cyclic, 5, 42);
            assert_eq!(a, b);
            for s in &a {
                assert!((s.norm(2.0) - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn resolution_independent() {
        let coarse = Grid::window(-8.0, 8.0, 256).unwrap();
        let fine = Grid::window(-8.0, 8.0, 512).unwrap();
        let a = gaussian_mixture(coarse, Mode::Cyclic, &mut rng(7));
        let b = gaussian_mixture(fine, Mode::Cyclic, &mut rng(7));
        let every_other: Vec<Complex64> = b.samples.iter().step_by(2).copied().collect();
        assert!(max_abs_diff(&a.samples, &every_other) < 1e-12);
    }

    #[test]
    fn mixtures_decay_at_the_edges() {
        let g = Grid::window(-8.0, 8.0, 512).unwrap();
        for s in family(FamilyKind::GaussianMixture, g, Mode::Cyclic, 20, 1) {
            assert!(s.samples[0].norm() < 1e-12 && s.samples[511].norm() < 1e-12);
        }
    }

    #[test]
    fn noise_has_zero_mean() {
        let g = Grid::window(-8.0, 8.0, 256).unwrap();
        let s = band_limited_noise(g, Mode::Cyclic, &mut rng(3));
        let mean: Complex64 = s.samples.iter().sum::<Complex64>() / 256.0;
        assert!(mean.norm() < 1e-10);
    }
}
