//! A-convolution `(f *_A g)(x) = |b|^{-1/2} int f(s) T_s^A g(x) ds`.
//!
//! Compact mode: the linear convolution of the chirped factors
//! `C_{a/b} f`, `C_{a/b} g` on the extended grid `2 t0 + k step`,
//! `0 <= k < 2N - 1`, un-chirped and scaled.
//!
//! Cyclic mode is defined by
//! `rho_A (f (*)_A g) = |b|^{-1/2} (rho_A f (*) rho_A g)`, with `(*)` the cyclic
//! convolution `IDFT(step * DFT(u) * DFT(v))` on the centered DFT. This is the
//! chirp identity with `rho_A` in place of `C_{a/b}`; the linear factor
//! `e^{2 pi i p t / b}` distributes over convolution, and unlike the bare chirp
//! it leaves the SAFT convolution theorem exact on the discrete grid.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::Serialize;

use crate::dft::CenteredDft;
use crate::engine::SaftPlan;
use crate::error::{Result, SaftError};
use crate::grid::{lr_norm, sample_real, Grid, Mode, Signal};
use crate::params::SaftParams;

/// Grid of the compact-mode output, `2 t0 + k step` with `2N - 1` nodes.
pub fn extended_grid(g: &Grid) -> Grid {
    Grid {
        start: 2.0 * g.start,
        step: g.step,
        count: 2 * g.count - 1,
    }
}

/// Direct double sum of the defining integral (compact mode).
pub fn aconv_oracle(params: &SaftParams, f: &Signal, g: &Signal) -> Result<Signal> {
    f.ensure_same_grid(g)?;
    let grid = f.grid;
    let ext = extended_grid(&grid);
    let n = grid.count;
    let k = params.chirp_rate();
    let scale = grid.step / params.b().abs().sqrt();
    let out = (0..ext.count)
        .map(|i| {
            let x = ext.node(i);
            let lo = i.saturating_sub(n - 1);
            let hi = i.min(n - 1);
            let s: Complex64 = (lo..=hi)
                .map(|m| {
                    let s = grid.node(m);
                    f.samples[m] * Complex64::cis(-2.0 * PI * k * s * (x - s)) * g.samples[i - m]
                })
                .sum();
            s * scale
        })
        .collect();
    Signal::new(ext, Mode::Compact, out)
}

/// FFT-based A-convolution in either mode.
pub fn aconv_fast(params: &SaftParams, f: &Signal, g: &Signal, mode: Mode) -> Result<Signal> {
    f.ensure_same_grid(g)?;
    let grid = f.grid;
    let inv_sqrt_b = 1.0 / params.b().abs().sqrt();
    match mode {
        Mode::Compact => {
            let k = params.chirp_rate();
            let cf: Vec<Complex64> = chirped(&f.samples, &grid, k);
            let cg: Vec<Complex64> = chirped(&g.samples, &grid, k);
            let lin = linear_conv(&cf, &cg);
            let ext = extended_grid(&grid);
            let out = lin
                .iter()
                .enumerate()
                .map(|(i, v)| {
                    let x = ext.node(i);
                    v * grid.step * inv_sqrt_b * Complex64::cis(-PI * k * x * x)
                })
                .collect();
            Signal::new(ext, Mode::Compact, out)
        }
        Mode::Cyclic => {
            let rho: Vec<Complex64> = grid.nodes().iter().map(|&t| params.rho(t)).collect();
            let u: Vec<Complex64> = f.samples.iter().zip(&rho).map(|(a, r)| a * r).collect();
            let v: Vec<Complex64> = g.samples.iter().zip(&rho).map(|(a, r)| a * r).collect();
            let w = cyclic_conv(&grid, &u, &v);
            let out = w
                .iter()
                .zip(&rho)
                .map(|(a, r)| a * r.conj() * inv_sqrt_b)
                .collect();
            Signal::new(grid, Mode::Cyclic, out)
        }
    }
}

/// A-convolution in the mode of `f`; compact output is cropped back to the
/// input grid.
pub fn aconv_same(params: &SaftParams, f: &Signal, g: &Signal) -> Result<Signal> {
    let out = aconv_fast(params, f, g, f.mode)?;
    match f.mode {
        Mode::Cyclic => Ok(out),
        Mode::Compact => crop(&out, &f.grid),
    }
}

fn chirped(v: &[Complex64], grid: &Grid, k: f64) -> Vec<Complex64> {
    v.iter()
        .enumerate()
        .map(|(n, z)| {
            let t = grid.node(n);
            z * Complex64::cis(PI * k * t * t)
        })
        .collect()
}

/// Zero-padded linear convolution `w_k = sum_m u_m v_{k-m}`, length `2N - 1`.
pub fn linear_conv(u: &[Complex64], v: &[Complex64]) -> Vec<Complex64> {
    let len = u.len() + v.len() - 1;
    let size = len.next_power_of_two();
    let mut planner = FftPlanner::new();
    let fwd = planner.plan_fft_forward(size);
    let inv = planner.plan_fft_inverse(size);
    let mut a = vec![Complex64::new(0.0, 0.0); size];
    let mut b = a.clone();
    a[..u.len()].copy_from_slice(u);
    b[..v.len()].copy_from_slice(v);
    fwd.process(&mut a);
    fwd.process(&mut b);
    for (x, y) in a.iter_mut().zip(&b) {
        *x *= y;
    }
    inv.process(&mut a);
    let scale = 1.0 / size as f64;
    a.truncate(len);
    a.iter_mut().for_each(|x| *x *= scale);
    a
}

/// Cyclic convolution on `grid`: `IDFT(step * DFT(u) DFT(v))`.
pub fn cyclic_conv(grid: &Grid, u: &[Complex64], v: &[Complex64]) -> Vec<Complex64> {
    let dft = CenteredDft::new(*grid);
    let uh = dft.forward(u);
    let vh = dft.forward(v);
    let prod: Vec<Complex64> = uh.iter().zip(&vh).map(|(a, b)| a * b * grid.step).collect();
    dft.inverse(&prod)
}

/// Index form of [`cyclic_conv`]: `step * sum_m u_m v_{(n - m + z) mod N}`,
/// `z = -t0/step`. `O(N^2)`, for cross-checks.
pub fn cyclic_conv_direct(grid: &Grid, u: &[Complex64], v: &[Complex64]) -> Result<Vec<Complex64>> {
    let z = grid.require_zero_index()?;
    let n = grid.count as i64;
    Ok((0..n)
        .map(|i| {
            u.iter()
                .enumerate()
                .map(|(m, a)| a * v[(i - m as i64 + z).rem_euclid(n) as usize])
                .sum::<Complex64>()
                * grid.step
        })
        .collect())
}

/// Restricts an extended-grid signal to the nodes of `grid`.
pub fn crop(ext: &Signal, grid: &Grid) -> Result<Signal> {
    let off = ext
        .grid
        .steps_to(grid.start - ext.grid.start)
        .filter(|&o| o >= 0 && (o as usize + grid.count) <= ext.len())
        .ok_or_else(|| {
            SaftError::LatticeMisaligned(format!(
                "grid starting at {} is not a sub-grid of the extended output",
                grid.start
            ))
        })?;
    let off = off as usize;
    Signal::new(*grid, ext.mode, ext.samples[off..off + grid.count].to_vec())
}

/// `e(eps) = || sqrt|b| (f *_A phi_eps) - f ||_r` for each `eps`.
///
/// The `sqrt|b|` factor makes `f *_A phi_eps -> f` (as `eps -> 0`,
/// `f *_A phi_eps -> |b|^{-1/2} f`).
pub fn approx_identity_run(
    params: &SaftParams,
    f: &Signal,
    phi: &dyn Fn(f64) -> f64,
    eps_list: &[f64],
    r: f64,
) -> Result<Vec<f64>> {
    if eps_list.is_empty() || eps_list.iter().any(|&e| e <= 0.0 || !e.is_finite()) {
        return Err(SaftError::InvalidArgument("eps values must be positive".into()));
    }
    if eps_list.windows(2).any(|w| w[1] >= w[0]) {
        return Err(SaftError::InvalidArgument("eps list must be decreasing".into()));
    }
    let mass = integral(phi, &f.grid);
    if (mass - 1.0).abs() > 1e-6 {
        return Err(SaftError::InvalidArgument(format!(
            "phi integrates to {mass}, expected 1"
        )));
    }
    let sb = params.b().abs().sqrt();
    eps_list
        .iter()
        .map(|&eps| {
            let phi_eps = sample_real(|t| phi(t / eps) / eps, f.grid, f.mode)?;
            let c = aconv_same(params, f, &phi_eps)?;
            let diff: Vec<Complex64> =
                c.samples.iter().zip(&f.samples).map(|(a, b)| a * sb - b).collect();
            lr_norm(&f.with_samples(diff), r)
        })
        .collect()
}

fn integral(phi: &dyn Fn(f64) -> f64, grid: &Grid) -> f64 {
    grid.nodes().iter().map(|&t| phi(t)).sum::<f64>() * grid.step
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct YoungReport {
    pub r: f64,
    pub s: f64,
    pub t: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub pass: bool,
}

/// `||f *_A g||_t <= |b|^{-1/2} ||f||_r ||g||_s`, `1/t = 1/r + 1/s - 1`, on the
/// compact extended grid.
pub fn young_check(params: &SaftParams, f: &Signal, g: &Signal, r: f64, s: f64) -> Result<YoungReport> {
    if r < 1.0 || s < 1.0 || r.is_nan() || s.is_nan() {
        return Err(SaftError::InvalidExponent(format!("r = {r}, s = {s}")));
    }
    let inv_t = 1.0 / r + 1.0 / s - 1.0;
    if inv_t < -1e-15 {
        return Err(SaftError::InvalidExponent(format!(
            "1/r + 1/s = {} < 1",
            1.0 / r + 1.0 / s
        )));
    }
    let t = if inv_t <= 1e-15 { f64::INFINITY } else { 1.0 / inv_t };
    let c = aconv_fast(params, f, g, Mode::Compact)?;
    let lhs = lr_norm(&c, t)?;
    let rhs = lr_norm(f, r)? * lr_norm(g, s)? / params.b().abs().sqrt();
    Ok(YoungReport {
        r,
        s,
        t,
        lhs,
        rhs,
        pass: lhs <= rhs * (1.0 + 1e-12),
    })
}

/// `h(f) = conj(eta_A(omega0)) F_A f(omega0)`; `omega0` must be a node.
pub fn mult_functional(params: &SaftParams, omega0: f64, f: &Signal) -> Result<Complex64> {
    let plan = SaftPlan::new(*params, f.grid);
    let j = node_index(plan.freq_grid(), omega0)?;
    let spec = plan.forward_samples(&f.samples);
    Ok(params.eta(omega0).conj() * spec[j])
}

fn node_index(g: &Grid, w: f64) -> Result<usize> {
    let m = (w - g.start) / g.step;
    let r = m.round();
    if (m - r).abs() <= 1e-9 && r >= 0.0 && (r as usize) < g.count {
        Ok(r as usize)
    } else {
        Err(SaftError::LatticeMisaligned(format!(
            "omega0 = {w} is not a node of the frequency grid (start {}, step {})",
            g.start, g.step
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::saft;
    use crate::grid::{gaussian, max_abs_diff, sample};
    use crate::ops::a_translate;

    fn set3() -> SaftParams {
        "1,2,-2,-3,0.3,-0.2".parse().unwrap()
    }

    fn pair(g: Grid, mode: Mode) -> (Signal, Signal) {
        let f = sample(
            |t| Complex64::new(gaussian(t - 0.5), 0.2 * gaussian(t + 1.0)),
            g,
            mode,
        )
        .unwrap();
        let h = sample(|t| Complex64::cis(0.8 * t) * gaussian((t + 0.3) / 0.7), g, mode).unwrap();
        (f, h)
    }

    #[test]
    fn fast_compact_matches_oracle() {
        let g = Grid::window(-4.0, 4.0, 128).unwrap();
        let (f, h) = pair(g, Mode::Compact);
        for p in [SaftParams::fourier(), set3()] {
            let a = aconv_oracle(&p, &f, &h).unwrap();
            let b = aconv_fast(&p, &f, &h, Mode::Compact).unwrap();
            assert_eq!(a.grid, b.grid);
            assert!(max_abs_diff(&a.samples, &b.samples) < 1e-12 * f.norm(1.0) * h.max_abs());
        }
    }

    #[test]
    fn fourier_oracle_is_linear_convolution() {
        let g = Grid::window(-2.0, 2.0, 16).unwrap();
        let (f, h) = pair(g, Mode::Compact);
        let c = aconv_oracle(&SaftParams::fourier(), &f, &h).unwrap();
        for k in 0..31 {
            let mut s = Complex64::new(0.0, 0.0);
            for m in 0..16 {
                if k >= m && k - m < 16 {
                    s += f.samples[m] * h.samples[k - m];
                }
            }
            assert!((c.samples[k] - s * g.step).norm() < 1e-14);
        }
    }

    #[test]
    fn impulse_sifts() {
        let g = Grid::window(-4.0, 4.0, 64).unwrap();
        let p = set3();
        let (_, h) = pair(g, Mode::Compact);
        let mut f = Signal::zeros(g, Mode::Compact);
        let m0 = 40;
        f.samples[m0] = Complex64::new(1.0 / g.step, 0.0);
        let s0 = g.node(m0);
        let c = crop(&aconv_oracle(&p, &f, &h).unwrap(), &g).unwrap();
        let t = a_translate(&h, &p, s0).unwrap();
        let want: Vec<Complex64> = t.samples.iter().map(|z| z / p.b().abs().sqrt()).collect();
        assert!(max_abs_diff(&c.samples, &want) < 1e-12);
    }

    #[test]
    fn cyclic_conv_index_form() {
        let g = Grid::window(-3.0, 3.0, 48).unwrap();
        let (f, h) = pair(g, Mode::Cyclic);
        let a = cyclic_conv(&g, &f.samples, &h.samples);
        let b = cyclic_conv_direct(&g, &f.samples, &h.samples).unwrap();
        assert!(max_abs_diff(&a, &b) < 1e-13);
    }

    #[test]
    fn cyclic_convolution_theorem() {
        let g = Grid::window(-8.0, 8.0, 256).unwrap();
        let (f, h) = pair(g, Mode::Cyclic);
        for p in [SaftParams::fourier(), set3()] {
            let c = aconv_fast(&p, &f, &h, Mode::Cyclic).unwrap();
            let (sc, sf, sh) = (saft(&p, &c), saft(&p, &f), saft(&p, &h));
            let want: Vec<Complex64> = (0..256)
                .map(|j| p.eta(sc.omega(j)).conj() * sf.samples[j] * sh.samples[j])
                .collect();
            assert!(max_abs_diff(&sc.samples, &want) < 1e-12);
        }
    }

    #[test]
    fn commutative() {
        let g = Grid::window(-4.0, 4.0, 64).unwrap();
        let (f, h) = pair(g, Mode::Compact);
        let p = set3();
        for mode in [Mode::Compact, Mode::Cyclic] {
            let a = aconv_fast(&p, &f, &h, mode).unwrap();
            let b = aconv_fast(&p, &h, &f, mode).unwrap();
            assert!(max_abs_diff(&a.samples, &b.samples) < 1e-12);
        }
    }

    #[test]
    fn young_examples() {
        let g = Grid::window(-4.0, 4.0, 128).unwrap();
        let (f, h) = pair(g, Mode::Compact);
        let p = set3();
        for (r, s) in [(1.0, 1.0), (2.0, 1.0), (1.5, 1.2)] {
            assert!(young_check(&p, &f, &h, r, s).unwrap().pass);
        }
        assert!(young_check(&p, &f, &h, 2.0, 3.0).is_err());
        let mut imp = Signal::zeros(g, Mode::Compact);
        imp.samples[60] = Complex64::new(1.0 / g.step, 0.0);
        let y = young_check(&p, &imp, &h, 1.0, 1.0).unwrap();
        assert!((y.lhs - y.rhs).abs() < 1e-12 * y.rhs);
    }

    #[test]
    fn functional_examples() {
        let g = Grid::window(-8.0, 8.0, 128).unwrap();
        let (f, h) = pair(g, Mode::Cyclic);
        let fo = SaftParams::fourier();
        let integral: Complex64 = f.samples.iter().sum::<Complex64>() * g.step;
        assert!((mult_functional(&fo, 0.0, &f).unwrap() - integral).norm() < 1e-13);
        let p = set3();
        let w0 = 2.0 * 3.0 / 16.0;
        let c = aconv_fast(&p, &f, &h, Mode::Cyclic).unwrap();
        let lhs = mult_functional(&p, w0, &c).unwrap();
        let rhs = mult_functional(&p, w0, &f).unwrap() * mult_functional(&p, w0, &h).unwrap();
        assert!((lhs - rhs).norm() < 1e-12 * rhs.norm());
        assert!(mult_functional(&p, 0.01, &f).is_err());
        let z = Signal::zeros(g, Mode::Cyclic);
        assert_eq!(mult_functional(&p, w0, &z).unwrap().norm(), 0.0);
    }

    #[test]
    fn approx_identity_decreases() {
        let g = Grid::window(-8.0, 8.0, 1024).unwrap();
        let f = sample_real(|t| if t.abs() < 1.5 { 0.5 * (1.0 + (PI * t / 1.5).cos()) } else { 0.0 }, g, Mode::Compact)
            .unwrap();
        let e = approx_identity_run(&set3(), &f, &gaussian, &[1.0, 0.5, 0.25, 0.125, 0.0625], 2.0).unwrap();
        for w in e.windows(2) {
            assert!(w[1] <= w[0] * 1.05, "{e:?}");
        }
        assert!(e[4] < 0.05 * f.norm(2.0));
        assert!(approx_identity_run(&set3(), &f, &|t| 2.0 * gaussian(t), &[1.0], 2.0).is_err());
    }
}
