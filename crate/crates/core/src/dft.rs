//! Centered DFT on a shifted grid.
//!
//! `X_k = sum_n x_n e^{-2 pi i xi_k t_n}` with `t_n = t0 + n step` and
//! `xi_k = (k - floor(N/2)) / (N step)`, evaluated with one FFT.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::grid::Grid;

#[derive(Clone)]
pub struct CenteredDft {
    grid: Grid,
    /// `e^{2 pi i h n / N}`.
    pre: Vec<Complex64>,
    /// `e^{-2 pi i xi_k t0}`.
    post: Vec<Complex64>,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for CenteredDft {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CenteredDft").field("grid", &self.grid).finish()
    }
}

impl CenteredDft {
    pub fn new(grid: Grid) -> Self {
        let n = grid.count;
        let h = grid.half();
        let pre = (0..n)
            .map(|j| Complex64::cis(2.0 * PI * ((h * j) % n) as f64 / n as f64))
            .collect();
        let post = (0..n)
            .map(|k| Complex64::cis(-2.0 * PI * grid.xi(k) * grid.start))
            .collect();
        let mut planner = FftPlanner::new();
        CenteredDft {
            grid,
            pre,
            post,
            fwd: planner.plan_fft_forward(n),
            inv: planner.plan_fft_inverse(n),
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn len(&self) -> usize {
        self.grid.count
    }

    pub fn is_empty(&self) -> bool {
        self.grid.count == 0
    }

    /// Pre-FFT twiddle `e^{2 pi i h n / N}`.
    pub fn pre_twiddle(&self) -> &[Complex64] {
        &self.pre
    }

    /// Post-FFT twiddle `e^{-2 pi i xi_k t0}`.
    pub fn post_twiddle(&self) -> &[Complex64] {
        &self.post
    }

    /// Bare unnormalized FFT, in place.
    pub fn fft_forward(&self, buf: &mut [Complex64]) {
        self.fwd.process(buf);
    }

    /// Bare unnormalized inverse FFT, in place.
    pub fn fft_inverse(&self, buf: &mut [Complex64]) {
        self.inv.process(buf);
    }

    pub fn forward(&self, x: &[Complex64]) -> Vec<Complex64> {
        let mut buf = x.to_vec();
        self.forward_in_place(&mut buf);
        buf
    }

    /// In-place variant; `buf` holds `x` on entry and `X` on exit.
    pub fn forward_in_place(&self, buf: &mut [Complex64]) {
        assert_eq!(buf.len(), self.len(), "buffer length mismatch");
        for (v, p) in buf.iter_mut().zip(&self.pre) {
            *v *= p;
        }
        self.fwd.process(buf);
        for (v, p) in buf.iter_mut().zip(&self.post) {
            *v *= p;
        }
    }

    /// Exact inverse of [`forward`](Self::forward).
    pub fn inverse(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(x.len(), self.len(), "buffer length mismatch");
        let mut buf: Vec<Complex64> =
            x.iter().zip(&self.post).map(|(a, b)| a * b.conj()).collect();
        self.inv.process(&mut buf);
        let scale = 1.0 / self.len() as f64;
        for (v, p) in buf.iter_mut().zip(&self.pre) {
            *v *= p.conj() * scale;
        }
        buf
    }
}

/// Direct `O(N^2)` evaluation of the same sum, for tests.
pub fn centered_dft_direct(grid: &Grid, x: &[Complex64]) -> Vec<Complex64> {
    (0..grid.count)
        .map(|k| {
            let xi = grid.xi(k);
            x.iter()
                .enumerate()
                .map(|(n, v)| v * Complex64::cis(-2.0 * PI * xi * grid.node(n)))
                .sum()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::max_abs_diff;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random(n: usize, seed: u64) -> Vec<Complex64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect()
    }

    #[test]
    fn matches_direct_sum() {
        for (start, n) in [(-8.0, 64), (0.3, 33), (-1.7, 50)] {
            let g = Grid::new(start, 0.125, n).unwrap();
            let x = random(n, 3);
            let d = max_abs_diff(&CenteredDft::new(g).forward(&x), &centered_dft_direct(&g, &x));
            assert!(d < 1e-11, "n={n}: {d}");
        }
    }

    #[test]
    fn inverse_round_trip() {
        let g = Grid::new(-2.25, 0.07, 45).unwrap();
        let dft = CenteredDft::new(g);
        let x = random(45, 9);
        assert!(max_abs_diff(&dft.inverse(&dft.forward(&x)), &x) < 1e-13);
    }
}
