//! The discrete SAFT.
//!
//! `F_k = (Delta / sqrt|b|) eta_A(omega_k) sum_n rho_A(t_n) f(t_n) e^{-2 pi i xi_k t_n}`
//! with `omega_k = b xi_k`. [`saft_oracle`] evaluates the sum directly,
//! [`saft_fast`] regroups it around one FFT.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dft::CenteredDft;
use crate::error::{Result, SaftError};
use crate::grid::{Grid, Mode, Signal, Spectrum};
use crate::params::SaftParams;

/// Precomputed phase tables for one `(params, grid)` pair.
#[derive(Debug, Clone)]
pub struct SaftPlan {
    params: SaftParams,
    grid: Grid,
    dft: CenteredDft,
    /// `rho_A(t_n)` times the DFT pre-twiddle.
    pre: Vec<Complex64>,
    /// `Delta eta_A(omega_k) / sqrt|b|` times the DFT post-twiddle, in DFT order.
    post: Vec<Complex64>,
    freq_grid: Grid,
    reversed: bool,
}

impl SaftPlan {
    pub fn new(params: SaftParams, grid: Grid) -> Self {
        let dft = CenteredDft::new(grid);
        let pre = grid
            .nodes()
            .iter()
            .zip(dft.pre_twiddle())
            .map(|(&t, w)| params.rho(t) * w)
            .collect();
        let scale = grid.step / params.b().abs().sqrt();
        let post = (0..grid.count)
            .zip(dft.post_twiddle())
            .map(|(k, w)| params.eta(params.b() * grid.xi(k)) * scale * w)
            .collect();
        let (freq_grid, reversed) = Spectrum::layout(&params, &grid);
        SaftPlan {
            params,
            grid,
            dft,
            pre,
            post,
            freq_grid,
            reversed,
        }
    }

    pub fn params(&self) -> &SaftParams {
        &self.params
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn freq_grid(&self) -> &Grid {
        &self.freq_grid
    }

    pub fn len(&self) -> usize {
        self.grid.count
    }

    pub fn is_empty(&self) -> bool {
        self.grid.count == 0
    }

    /// Ascending `omega` nodes.
    pub fn omegas(&self) -> Vec<f64> {
        self.freq_grid.nodes()
    }

    fn sort(&self, mut v: Vec<Complex64>) -> Vec<Complex64> {
        if self.reversed {
            v.reverse();
        }
        v
    }

    /// Raw transform of a sample vector, in sorted order.
    pub fn forward_samples(&self, f: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(f.len(), self.len(), "buffer length mismatch");
        let mut buf: Vec<Complex64> = f.iter().zip(&self.pre).map(|(a, r)| a * r).collect();
        self.dft.fft_forward(&mut buf);
        for (v, p) in buf.iter_mut().zip(&self.post) {
            *v *= p;
        }
        self.sort(buf)
    }

    /// Inverse of [`forward_samples`](Self::forward_samples).
    pub fn inverse_samples(&self, spec: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(spec.len(), self.len(), "buffer length mismatch");
        let mut buf = self.sort(spec.to_vec());
        for (v, p) in buf.iter_mut().zip(&self.post) {
            *v /= p;
        }
        self.dft.fft_inverse(&mut buf);
        let scale = 1.0 / self.len() as f64;
        for (v, r) in buf.iter_mut().zip(&self.pre) {
            *v *= r.conj() * scale;
        }
        buf
    }

    fn check_signal(&self, f: &Signal) -> Result<()> {
        self.grid.ensure_same(&f.grid)
    }

    fn check_spectrum(&self, s: &Spectrum) -> Result<()> {
        self.grid.ensure_same(&s.time_grid)?;
        self.freq_grid.ensure_same(&s.freq_grid)?;
        if s.params != self.params {
            return Err(SaftError::GridMismatch(
                "spectrum was computed with different params".into(),
            ));
        }
        Ok(())
    }

    fn spectrum(&self, mode: Mode, samples: Vec<Complex64>) -> Spectrum {
        Spectrum {
            params: self.params,
            freq_grid: self.freq_grid,
            time_grid: self.grid,
            mode,
            reversed: self.reversed,
            samples,
        }
    }

    /// `isaft(m(omega) * saft(f))`.
    pub fn apply_symbol(&self, f: &Signal, m: impl Fn(f64) -> Complex64) -> Result<Signal> {
        self.check_signal(f)?;
        let mut spec = self.forward_samples(&f.samples);
        for (j, v) in spec.iter_mut().enumerate() {
            let mj = m(self.freq_grid.node(j));
            if !mj.re.is_finite() || !mj.im.is_finite() {
                return Err(SaftError::NonFinite { index: j });
            }
            *v *= mj;
        }
        Ok(f.with_samples(self.inverse_samples(&spec)))
    }
}

/// Fast transform through a plan.
pub fn saft_fast(plan: &SaftPlan, f: &Signal) -> Result<Spectrum> {
    plan.check_signal(f)?;
    Ok(plan.spectrum(f.mode, plan.forward_samples(&f.samples)))
}

/// Exact inverse of [`saft_fast`].
pub fn isaft(plan: &SaftPlan, spec: &Spectrum) -> Result<Signal> {
    plan.check_spectrum(spec)?;
    Signal::new(plan.grid, spec.mode, plan.inverse_samples(&spec.samples))
}

/// Convenience: plan and transform.
pub fn saft(params: &SaftParams, f: &Signal) -> Spectrum {
    let plan = SaftPlan::new(*params, f.grid);
    saft_fast(&plan, f).expect("plan matches the signal grid")
}

/// Direct `O(N^2)` evaluation of the defining Riemann sum.
pub fn saft_oracle(params: &SaftParams, f: &Signal) -> Spectrum {
    let (freq_grid, reversed) = Spectrum::layout(params, &f.grid);
    let samples = saft_oracle_at(params, f, &freq_grid.nodes());
    Spectrum {
        params: *params,
        freq_grid,
        time_grid: f.grid,
        mode: f.mode,
        reversed,
        samples,
    }
}

/// Riemann sum of the transform at arbitrary `omega` values. Serial by design
/// so timings scale as `N * len(omegas)`.
pub fn saft_oracle_at(params: &SaftParams, f: &Signal, omegas: &[f64]) -> Vec<Complex64> {
    let g = f.grid;
    let b = params.b();
    let weighted: Vec<(f64, Complex64)> = f
        .samples
        .iter()
        .enumerate()
        .map(|(n, &z)| {
            let t = g.node(n);
            (t, params.rho(t) * z)
        })
        .collect();
    let scale = g.step / b.abs().sqrt();
    omegas
        .iter()
        .map(|&w| {
            let xi = w / b;
            let s: Complex64 = weighted
                .iter()
                .map(|&(t, z)| z * Complex64::cis(-2.0 * PI * xi * t))
                .sum();
            params.eta(w) * scale * s
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SincShape {
    /// Transform of `C_{-a/b} chi_[0,1]`.
    UnitInterval,
    /// Transform of `C_{-a/b} chi_[-1/2,1/2]`.
    CenteredInterval,
}

/// Closed-form transform of a chirped indicator.
pub fn eval_sinc_reference(params: &SaftParams, omega: f64, shape: SincShape) -> Complex64 {
    let pref = params.eta(omega) / params.b().abs().sqrt();
    let u = (omega - params.p()) / params.b();
    if u == 0.0 {
        return pref;
    }
    let x = PI * u;
    match shape {
        SincShape::UnitInterval => {
            let z = Complex64::new(0.0, 2.0 * x);
            pref * (Complex64::new(1.0, 0.0) - (-z).exp()) / z
        }
        SincShape::CenteredInterval => pref * (x.sin() / x),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BMethod {
    Spectral,
    FiniteDifference,
}

impl std::str::FromStr for BMethod {
    type Err = SaftError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "spectral" => Ok(BMethod::Spectral),
            "fd" | "finite_difference" => Ok(BMethod::FiniteDifference),
            _ => Err(SaftError::InvalidArgument(format!(
                "B method must be spectral or fd, got '{s}'"
            ))),
        }
    }
}

/// Symbol `2 pi i (omega - p) / b` of the operator `B = d/dt + 2 pi i (a/b) t`.
pub fn b_symbol(params: &SaftParams, omega: f64) -> Complex64 {
    Complex64::new(0.0, 2.0 * PI * (omega - params.p()) / params.b())
}

/// Applies `B = d/dt + 2 pi i (a/b) t`.
pub fn apply_b(params: &SaftParams, f: &Signal, method: BMethod) -> Result<Signal> {
    match method {
        BMethod::Spectral => {
            let plan = SaftPlan::new(*params, f.grid);
            plan.apply_symbol(f, |w| b_symbol(params, w))
        }
        BMethod::FiniteDifference => {
            let n = f.len();
            if n < 8 {
                return Err(SaftError::InvalidArgument(format!(
                    "finite differences need N >= 8, got {n}"
                )));
            }
            let h2 = 2.0 * f.grid.step;
            let s = &f.samples;
            let k = 2.0 * PI * params.chirp_rate();
            let deriv = |i: usize| -> Complex64 {
                match f.mode {
                    Mode::Cyclic => (s[(i + 1) % n] - s[(i + n - 1) % n]) / h2,
                    Mode::Compact => {
                        if i == 0 {
                            (-3.0 * s[0] + 4.0 * s[1] - s[2]) / h2
                        } else if i == n - 1 {
                            (3.0 * s[n - 1] - 4.0 * s[n - 2] + s[n - 3]) / h2
                        } else {
                            (s[i + 1] - s[i - 1]) / h2
                        }
                    }
                }
            };
            let out = (0..n)
                .map(|i| deriv(i) + Complex64::new(0.0, k * f.grid.node(i)) * s[i])
                .collect();
            Ok(f.with_samples(out))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HeatMethod {
    Multiplier,
    Kernel,
}

impl std::str::FromStr for HeatMethod {
    type Err = SaftError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "multiplier" => Ok(HeatMethod::Multiplier),
            "kernel" => Ok(HeatMethod::Kernel),
            _ => Err(SaftError::InvalidArgument(format!(
                "heat method must be multiplier or kernel, got '{s}'"
            ))),
        }
    }
}

/// Heat multiplier `e^{-(2 pi (omega - p)/b)^2 t}`.
pub fn heat_symbol(params: &SaftParams, omega: f64, t: f64) -> f64 {
    let u = 2.0 * PI * (omega - params.p()) / params.b();
    (-u * u * t).exp()
}

/// Solves `u_t = B^2 u`, `u(0) = g`, up to time `t`.
pub fn heat_evolve(params: &SaftParams, g: &Signal, t: f64, method: HeatMethod) -> Result<Signal> {
    if t <= 0.0 || !t.is_finite() {
        return Err(SaftError::InvalidArgument(format!(
            "heat time must be positive, got {t}"
        )));
    }
    match method {
        HeatMethod::Multiplier => {
            let plan = SaftPlan::new(*params, g.grid);
            plan.apply_symbol(g, |w| Complex64::new(heat_symbol(params, w, t), 0.0))
        }
        HeatMethod::Kernel => {
            let grid = g.grid;
            let k = PI * params.chirp_rate();
            let nodes = grid.nodes();
            let pre: Vec<Complex64> = nodes
                .iter()
                .zip(&g.samples)
                .map(|(&y, &v)| v * Complex64::cis(k * y * y))
                .collect();
            let scale = grid.step / (4.0 * PI * t).sqrt();
            let out = nodes
                .par_iter()
                .map(|&x| {
                    let s: Complex64 = nodes
                        .iter()
                        .zip(&pre)
                        .map(|(&y, &v)| v * (-(x - y) * (x - y) / (4.0 * t)).exp())
                        .sum();
                    s * Complex64::cis(-k * x * x) * scale
                })
                .collect();
            Ok(g.with_samples(out))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{gaussian, indicator, l2, l2_diff, max_abs_diff, sample, sample_real};
    use crate::params::SpecialKind;

    fn set3() -> SaftParams {
        "1,2,-2,-3,0.3,-0.2".parse().unwrap()
    }

    fn test_signal(g: Grid) -> Signal {
        sample(
            |t| {
                Complex64::new(gaussian(t - 0.7), 0.0) * Complex64::cis(1.3 * t)
                    + gaussian((t + 1.2) / 0.6) * 0.5
            },
            g,
            Mode::Cyclic,
        )
        .unwrap()
    }

    #[test]
    fn fast_matches_oracle_for_all_layouts() {
        let g = Grid::window(-8.0, 8.0, 256).unwrap();
        let f = test_signal(g);
        let negb = SaftParams::new(0.5, -2.0, 0.5, 0.0, 0.1, 0.4).unwrap();
        for p in [SaftParams::fourier(), set3(), negb] {
            let plan = SaftPlan::new(p, g);
            let a = saft_fast(&plan, &f).unwrap();
            let b = saft_oracle(&p, &f);
            assert_eq!(a.freq_grid, b.freq_grid);
            assert!(max_abs_diff(&a.samples, &b.samples) < 1e-11 * f.norm(2.0));
        }
    }

    #[test]
    fn round_trip_and_zero() {
        let g = Grid::window(-8.0, 8.0, 128).unwrap();
        let f = test_signal(g);
        let p = SaftParams::special(SpecialKind::Frft(PI / 3.0)).unwrap();
        let plan = SaftPlan::new(p, g);
        let back = isaft(&plan, &saft_fast(&plan, &f).unwrap()).unwrap();
        assert!(max_abs_diff(&back.samples, &f.samples) < 1e-12);
        let z = Signal::zeros(g, Mode::Cyclic);
        let zs = saft_fast(&plan, &z).unwrap();
        assert!(zs.samples.iter().all(|v| v.norm() == 0.0));
        assert!(isaft(&plan, &zs).unwrap().samples.iter().all(|v| v.norm() == 0.0));
    }

    #[test]
    fn plan_rejects_foreign_grid() {
        let g = Grid::window(-8.0, 8.0, 128).unwrap();
        let plan = SaftPlan::new(SaftParams::fourier(), g);
        let other = Signal::zeros(Grid::window(-4.0, 4.0, 128).unwrap(), Mode::Cyclic);
        assert!(matches!(saft_fast(&plan, &other), Err(SaftError::GridMismatch(_))));
    }

    #[test]
    fn gaussian_is_self_reciprocal_under_fourier() {
        let g = Grid::window(-8.0, 8.0, 1024).unwrap();
        let f = sample_real(gaussian, g, Mode::Cyclic).unwrap();
        let s = saft_oracle(&SaftParams::fourier(), &f);
        let want: Vec<Complex64> = s
            .freq_grid
            .nodes()
            .iter()
            .map(|&w| Complex64::new(gaussian(w), 0.0))
            .collect();
        assert!(l2_diff(&s.samples, &want) / l2(&want) < 1e-10);
    }

    #[test]
    fn sinc_reference_values() {
        let p = set3();
        let at_p = eval_sinc_reference(&p, p.p(), SincShape::UnitInterval);
        assert!((at_p - p.eta(p.p()) / 2f64.sqrt()).norm() < 1e-15);
        assert!(eval_sinc_reference(&p, p.p() + p.b(), SincShape::CenteredInterval).norm() < 1e-15);
        let th = PI / 5.0;
        let fr = SaftParams::special(SpecialKind::Frft(th)).unwrap();
        for w in [-2.0, 0.3, 1.7] {
            let got = eval_sinc_reference(&fr, w, SincShape::CenteredInterval);
            let u = w / th.sin();
            let want = Complex64::cis(PI * w * w / th.tan()) * ((PI * u).sin() / (PI * u))
                / th.sin().abs().sqrt();
            assert!((got - want).norm() < 1e-12);
        }
    }

    #[test]
    fn chirped_indicator_matches_sinc() {
        let p = set3();
        let g = Grid::window(-8.0, 8.0, 2048).unwrap();
        let chi = indicator(-0.5, 0.5);
        let f = sample(
            |t| Complex64::cis(-PI * p.chirp_rate() * t * t) * chi(t),
            g,
            Mode::Compact,
        )
        .unwrap();
        let s = saft(&p, &f);
        let err = s
            .samples
            .iter()
            .enumerate()
            .map(|(j, v)| (v - eval_sinc_reference(&p, s.omega(j), SincShape::CenteredInterval)).norm())
            .fold(0.0, f64::max);
        assert!(err < 1e-2, "{err}");
    }

    #[test]
    fn b_on_grid_harmonic() {
        let g = Grid::window(0.0, 1.0, 64).unwrap();
        let f = sample(|t| Complex64::cis(2.0 * PI * t), g, Mode::Cyclic).unwrap();
        let bf = apply_b(&SaftParams::fourier(), &f, BMethod::Spectral).unwrap();
        let want: Vec<Complex64> = f.samples.iter().map(|z| z * Complex64::new(0.0, 2.0 * PI)).collect();
        assert!(max_abs_diff(&bf.samples, &want) < 1e-10);
        let short = Signal::zeros(Grid::window(0.0, 1.0, 4).unwrap(), Mode::Cyclic);
        assert!(apply_b(&SaftParams::fourier(), &short, BMethod::FiniteDifference).is_err());
    }

    #[test]
    fn b_methods_converge_at_second_order() {
        let p = set3();
        let errs: Vec<f64> = [256, 512, 1024]
            .iter()
            .map(|&n| {
                let g = Grid::window(-8.0, 8.0, n).unwrap();
                let f = test_signal(g);
                let a = apply_b(&p, &f, BMethod::Spectral).unwrap();
                let b = apply_b(&p, &f, BMethod::FiniteDifference).unwrap();
                max_abs_diff(&a.samples, &b.samples)
            })
            .collect();
        for w in errs.windows(2) {
            let ratio = w[0] / w[1];
            assert!(ratio > 3.5 && ratio < 4.5, "{errs:?}");
        }
    }

    #[test]
    fn heat_small_time_is_near_identity() {
        let g = Grid::window(-10.0, 10.0, 1024).unwrap();
        let f = test_signal(g);
        for p in [SaftParams::fourier(), set3()] {
            let u = heat_evolve(&p, &f, 1e-6, HeatMethod::Multiplier).unwrap();
            assert!(l2_diff(&u.samples, &f.samples) / l2(&f.samples) < 1e-3);
        }
        assert!(heat_evolve(&set3(), &f, 0.0, HeatMethod::Kernel).is_err());
    }

    #[test]
    fn heat_methods_agree() {
        let g = Grid::window(-10.0, 10.0, 1024).unwrap();
        let f = test_signal(g);
        let p = set3();
        let a = heat_evolve(&p, &f, 0.1, HeatMethod::Multiplier).unwrap();
        let b = heat_evolve(&p, &f, 0.1, HeatMethod::Kernel).unwrap();
        assert!(l2_diff(&a.samples, &b.samples) / l2(&b.samples) < 1e-3);
    }

    #[test]
    fn fourier_heat_spreads_and_matches_closed_form() {
        let g = Grid::window(-10.0, 10.0, 1024).unwrap();
        let f = sample_real(gaussian, g, Mode::Cyclic).unwrap();
        let p = SaftParams::fourier();
        let moment = |s: &Signal| -> f64 {
            s.samples
                .iter()
                .enumerate()
                .map(|(n, z)| g.node(n).powi(2) * z.norm_sqr())
                .sum::<f64>()
                / s.samples.iter().map(|z| z.norm_sqr()).sum::<f64>()
        };
        let mut last = moment(&f);
        for t in [0.05, 0.1, 0.2] {
            let u = heat_evolve(&p, &f, t, HeatMethod::Multiplier).unwrap();
            // e^{-pi x^2} evolves to (1 + 4 pi t)^{-1/2} e^{-pi x^2 / (1 + 4 pi t)}.
            let s = 1.0 + 4.0 * PI * t;
            let want: Vec<Complex64> = g
                .nodes()
                .iter()
                .map(|&x| Complex64::new((-PI * x * x / s).exp() / s.sqrt(), 0.0))
                .collect();
            assert!(max_abs_diff(&u.samples, &want) < 1e-10);
            let m = moment(&u);
            assert!(m > last);
            last = m;
        }
    }
}
