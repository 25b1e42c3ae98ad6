//! STFT, modulation-space norms and the time-frequency identity checks.
//!
//! `V_g f(x_m, xi_k) = step * sum_n f(t_n) conj(g(t_n - x_m)) e^{-2 pi i xi_k t_n}`
//! with `x_m = t_m` and `xi_k` the DFT frequencies of the signal grid. The node
//! `t_n - x_m` is `t_j`, `j = n - m + z`, `z = -t0/step`, which makes the STFT
//! exact on the full lattice; `z` must therefore be an integer. Cyclic mode
//! wraps `j`, compact mode drops out-of-range terms.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dft::CenteredDft;
use crate::engine::SaftPlan;
use crate::error::{Result, SaftError};
use crate::grid::{Grid, Mode, Signal};
use crate::ops::{chirp, involution};
use crate::params::{SaftParams, WeightSpec};
use crate::Deviation;

/// STFT values on an `x` by `omega` lattice, row-major in `x`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TFMatrix {
    pub x_grid: Grid,
    pub omega_grid: Grid,
    pub window_id: String,
    pub values: Vec<Complex64>,
}

impl TFMatrix {
    pub fn nx(&self) -> usize {
        self.x_grid.count
    }

    pub fn nw(&self) -> usize {
        self.omega_grid.count
    }

    pub fn get(&self, m: usize, k: usize) -> Complex64 {
        self.values[m * self.nw() + k]
    }

    pub fn max_abs(&self) -> f64 {
        crate::grid::max_abs(&self.values)
    }

    /// `dx * domega * sum |V|^2`.
    pub fn energy(&self) -> f64 {
        self.x_grid.step * self.omega_grid.step * self.values.iter().map(|z| z.norm_sqr()).sum::<f64>()
    }
}

/// Analysis windows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WindowKind {
    /// `e^{-pi t^2 / sigma^2}`, `sigma = L/16`.
    Gaussian,
    /// `(1 + cos(pi t / R)) / 2` on `|t| < R`, `R = L/8`.
    RaisedCosine,
}

impl std::str::FromStr for WindowKind {
    type Err = SaftError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gaussian" => Ok(WindowKind::Gaussian),
            "raisedcos" | "raised_cosine" => Ok(WindowKind::RaisedCosine),
            _ => Err(SaftError::InvalidArgument(format!(
                "window must be gaussian or raisedcos, got '{s}'"
            ))),
        }
    }
}

impl WindowKind {
    pub fn id(&self) -> &'static str {
        match self {
            WindowKind::Gaussian => "gaussian",
            WindowKind::RaisedCosine => "raisedcos",
        }
    }
}

/// Unit-L2 window centered at `t = 0` on `grid`.
pub fn window(kind: WindowKind, grid: Grid, mode: Mode) -> Signal {
    let l = grid.length();
    let raw: Vec<Complex64> = grid
        .nodes()
        .iter()
        .map(|&t| {
            let v = match kind {
                WindowKind::Gaussian => {
                    let sigma = l / 16.0;
                    (-PI * t * t / (sigma * sigma)).exp()
                }
                WindowKind::RaisedCosine => {
                    let r = l / 8.0;
                    if t.abs() < r {
                        0.5 * (1.0 + (PI * t / r).cos())
                    } else {
                        0.0
                    }
                }
            };
            Complex64::new(v, 0.0)
        })
        .collect();
    let sig = Signal {
        grid,
        mode,
        samples: raw,
    };
    let nrm = sig.norm(2.0);
    sig.map(|_, z| z / nrm)
}

/// Short-time Fourier transform on the full lattice.
pub fn stft(f: &Signal, g: &Signal) -> Result<TFMatrix> {
    stft_with_id(f, g, "custom")
}

pub fn stft_with_id(f: &Signal, g: &Signal, window_id: &str) -> Result<TFMatrix> {
    f.ensure_same_grid(g)?;
    let grid = f.grid;
    let z = grid.require_zero_index()?;
    let n = grid.count as i64;
    let dft = CenteredDft::new(grid);
    let gc: Vec<Complex64> = g.samples.iter().map(|v| v.conj()).collect();
    let rows: Vec<Vec<Complex64>> = (0..n)
        .into_par_iter()
        .map(|m| {
            let mut buf: Vec<Complex64> = (0..n)
                .map(|i| {
                    let j = i - m + z;
                    let w = match f.mode {
                        Mode::Cyclic => gc[j.rem_euclid(n) as usize],
                        Mode::Compact => {
                            if (0..n).contains(&j) {
                                gc[j as usize]
                            } else {
                                Complex64::new(0.0, 0.0)
                            }
                        }
                    };
                    f.samples[i as usize] * w * grid.step
                })
                .collect();
            dft.forward_in_place(&mut buf);
            buf
        })
        .collect();
    Ok(TFMatrix {
        x_grid: grid,
        omega_grid: grid.xi_grid(),
        window_id: window_id.to_string(),
        values: rows.concat(),
    })
}

fn integer(v: f64, what: &str) -> Result<i64> {
    let r = v.round();
    if (v - r).abs() <= 1e-9 * v.abs().max(1.0) {
        Ok(r as i64)
    } else {
        Err(SaftError::LatticeMisaligned(format!("{what} = {v} must be an integer")))
    }
}

/// `V_{C_s g}(C_s f)(x, w)` against `e^{-pi i s x^2} V_g f(x, w - s x)`.
///
/// Requires `s L step`, `s L t0` integral and `s L^2` even (cyclic mode) so the
/// chirp is compatible with the wrap, where `L` is the window length.
pub fn chirp_covariance_check(f: &Signal, g: &Signal, s: f64) -> Result<Deviation> {
    let grid = f.grid;
    let l = grid.length();
    integer(s * l * grid.step, "s * L * step")?;
    integer(s * l * grid.start, "s * L * t0")?;
    if f.mode == Mode::Cyclic && integer(s * l * l, "s * L^2")? % 2 != 0 {
        return Err(SaftError::LatticeMisaligned("s * L^2 must be even".into()));
    }
    let lhs = stft(&chirp(f, s), &chirp(g, s))?;
    let base = stft(f, g)?;
    let n = grid.count as i64;
    let mut dev: f64 = 0.0;
    for m in 0..grid.count {
        let x = grid.node(m);
        let shift = integer(s * x * l, "s * x * L")?;
        let phase = Complex64::cis(-PI * s * x * x);
        for k in 0..grid.count {
            let kk = (k as i64 - shift).rem_euclid(n) as usize;
            dev = dev.max((lhs.get(m, k) - phase * base.get(m, kk)).norm());
        }
    }
    Ok(Deviation::new(dev, base.max_abs()))
}

/// `V_g(T_xi^A M_eta^A f)(x, w)` against
/// `rho_A(-eta) e^{-2 pi i xi w} V_g f(x - xi, w + (a xi - eta)/b)`.
///
/// The left side applies the pointwise operator formulas to the periodic
/// extension of `f`. Requires `xi` on the grid and `L (a xi - eta)/b` integral.
pub fn a_covariance_check(params: &SaftParams, f: &Signal, g: &Signal, xi: f64, eta: f64) -> Result<Deviation> {
    if f.mode != Mode::Cyclic {
        return Err(SaftError::Unsupported("A-covariance check needs cyclic mode".into()));
    }
    let grid = f.grid;
    let l = grid.length();
    let (a, b, p) = (params.a(), params.b(), params.p());
    let shift = grid.shift_index(xi)?;
    let wshift = integer(l * (a * xi - eta) / b, "L (a xi - eta) / b").map_err(|_| {
        SaftError::LatticeMisaligned(format!(
            "(a xi - eta)/b = {} must be a multiple of 1/L = {}",
            (a * xi - eta) / b,
            1.0 / l
        ))
    })?;
    let n = grid.count as i64;
    let h: Vec<Complex64> = (0..n)
        .map(|i| {
            let t = grid.node(i as usize);
            let src = f.samples[(i - shift).rem_euclid(n) as usize];
            let u = t - xi;
            src * Complex64::cis(-2.0 * PI * a / b * xi * u)
                * Complex64::cis(PI / b * (a * eta * eta - 2.0 * p * eta + 2.0 * eta * u))
        })
        .collect();
    let lhs = stft(&f.with_samples(h), g)?;
    let base = stft(f, g)?;
    let c = params.rho(-eta);
    let xig = grid.xi_grid();
    let mut dev: f64 = 0.0;
    for m in 0..n {
        let ms = (m - shift).rem_euclid(n) as usize;
        for k in 0..n {
            let ks = (k + wshift).rem_euclid(n) as usize;
            let w = xig.node(k as usize);
            let rhs = c * Complex64::cis(-2.0 * PI * xi * w) * base.get(ms, ks);
            dev = dev.max((lhs.get(m as usize, k as usize) - rhs).norm());
        }
    }
    Ok(Deviation::new(dev, base.max_abs()))
}

/// Lattice data for the SAFT-STFT identity on a self-dual grid.
struct SaftLattice {
    v_saft: TFMatrix,
    v_base: TFMatrix,
    /// `(a, b, c, d)` as integers.
    abcd: [i64; 4],
    z: i64,
    h: i64,
}

impl SaftLattice {
    fn new(params: &SaftParams, f: &Signal, g: &Signal) -> Result<Self> {
        if !params.is_integer_lct() {
            return Err(SaftError::LatticeMisaligned(
                "lattice map needs integer a, b, c, d and p = q = 0".into(),
            ));
        }
        f.ensure_same_grid(g)?;
        let grid = f.grid;
        let plan = SaftPlan::new(*params, grid);
        if !plan.freq_grid().approx_eq(&grid) {
            return Err(SaftError::LatticeMisaligned(format!(
                "frequency grid {:?} must equal the time grid {:?} (N step^2 = |b|, b > 0, grid centered)",
                plan.freq_grid(),
                grid
            )));
        }
        let z = grid.require_zero_index()?;
        let ff = f.with_samples(plan.forward_samples(&f.samples));
        let fg = g.with_samples(plan.forward_samples(&g.samples));
        let [a, b, c, d] = [params.a(), params.b(), params.c(), params.d()].map(|v| v.round() as i64);
        Ok(SaftLattice {
            v_saft: stft(&ff, &fg)?,
            v_base: stft(f, g)?,
            abcd: [a, b, c, d],
            z,
            h: grid.half() as i64,
        })
    }

    fn n(&self) -> i64 {
        self.v_base.nx() as i64
    }

    /// Base-lattice indices of `(d x - b w, a w - c x)` for lattice point `(m, k)`.
    fn image(&self, m: usize, k: usize) -> (usize, usize) {
        let [a, b, c, d] = self.abcd;
        let i = m as i64 - self.z;
        let kk = k as i64 - self.h;
        let xi = d * i - b.signum() * kk;
        let wi = a * kk - c * b.abs() * i;
        let n = self.n();
        ((xi + self.z).rem_euclid(n) as usize, (wi + self.h).rem_euclid(n) as usize)
    }

    /// Physical `(x, w)` of lattice point `(m, k)`.
    fn point(&self, m: usize, k: usize) -> (f64, f64) {
        let g = &self.v_base.x_grid;
        let w = &self.v_base.omega_grid;
        ((m as f64 - self.z as f64) * g.step, (k as f64 - self.h as f64) * w.step)
    }
}

/// `max | |V_{F_A g} F_A f(x, w)| - |V_g f(d x - b w, a w - c x)| |`.
pub fn saft_stft_identity_check(params: &SaftParams, f: &Signal, g: &Signal) -> Result<Deviation> {
    let lat = SaftLattice::new(params, f, g)?;
    let n = lat.n() as usize;
    let mut dev: f64 = 0.0;
    for m in 0..n {
        for k in 0..n {
            let (mi, ki) = lat.image(m, k);
            dev = dev.max((lat.v_saft.get(m, k).norm() - lat.v_base.get(mi, ki).norm()).abs());
        }
    }
    Ok(Deviation::new(dev, lat.v_base.max_abs()))
}

/// Weighted lattice norms `(|| |V_{F_A g} F_A f| w_ell ||_r, || |V_g f| v_ell ||_r)`.
pub fn weight_transport(params: &SaftParams, f: &Signal, g: &Signal, ell: f64, r: f64) -> Result<(f64, f64)> {
    if r < 1.0 || !r.is_finite() {
        return Err(SaftError::InvalidExponent(format!("r = {r}")));
    }
    let lat = SaftLattice::new(params, f, g)?;
    let w = WeightSpec::w_ell(ell, *params);
    let v = WeightSpec::v_ell(ell);
    let n = lat.n() as usize;
    let (mut lhs, mut rhs) = (0.0, 0.0);
    for m in 0..n {
        for k in 0..n {
            let (x, om) = lat.point(m, k);
            lhs += (lat.v_saft.get(m, k).norm() * w.eval(x, om)).powf(r);
            rhs += (lat.v_base.get(m, k).norm() * v.eval(x, om)).powf(r);
        }
    }
    let cell = lat.v_base.x_grid.step * lat.v_base.omega_grid.step;
    Ok(((cell * lhs).powf(1.0 / r), (cell * rhs).powf(1.0 / r)))
}

fn check_exponents(r: f64, s: f64) -> Result<()> {
    if r.is_nan() || s.is_nan() || r < 1.0 || s < 1.0 {
        return Err(SaftError::InvalidExponent(format!("r = {r}, s = {s}")));
    }
    Ok(())
}

/// `( sum_k dw ( sum_m dx |V_mk|^r m_mk^r )^{s/r} )^{1/s}`; `inf` exponents take maxima.
#[allow(clippy::too_many_arguments)]
pub fn mixed_norm(
    abs_vals: &dyn Fn(usize, usize) -> f64,
    nx: usize,
    nw: usize,
    dx: f64,
    dw: f64,
    r: f64,
    s: f64,
    weight: &dyn Fn(usize, usize) -> f64,
) -> f64 {
    let inner = |k: usize| -> f64 {
        if r.is_infinite() {
            (0..nx).map(|m| abs_vals(m, k) * weight(m, k)).fold(0.0, f64::max)
        } else {
            let sum: f64 = (0..nx).map(|m| (abs_vals(m, k) * weight(m, k)).powf(r)).sum();
            (dx * sum).powf(1.0 / r)
        }
    };
    if s.is_infinite() {
        (0..nw).map(inner).fold(0.0, f64::max)
    } else {
        let sum: f64 = (0..nw).map(|k| inner(k).powf(s)).sum();
        (dw * sum).powf(1.0 / s)
    }
}

/// `g~(t) = conj(g(-t))`, the window for which `|f * M_w g(x)| = |V_{g~} f(x, w)|`.
pub fn flipped_window(g: &Signal) -> Result<Signal> {
    let r = involution(g)?;
    Ok(r.map(|_, z| z.conj()))
}

fn nonzero_window(g: &Signal) -> Result<()> {
    if g.max_abs() == 0.0 {
        return Err(SaftError::InvalidArgument("window is identically zero".into()));
    }
    Ok(())
}

/// Modulation-space norm `||f||_{M^{r,s}_m}` with window `g`.
pub fn mod_norm(f: &Signal, g: &Signal, r: f64, s: f64, m: &WeightSpec) -> Result<f64> {
    check_exponents(r, s)?;
    nonzero_window(g)?;
    let v = stft_with_id(f, &flipped_window(g)?, "flipped")?;
    let (xg, wg) = (v.x_grid, v.omega_grid);
    let nw = v.nw();
    Ok(mixed_norm(
        &|i, k| v.values[i * nw + k].norm(),
        v.nx(),
        nw,
        xg.step,
        wg.step,
        r,
        s,
        &|i, k| m.eval(xg.node(i), wg.node(k)),
    ))
}

/// A-modulation norm through `|f *_A M_w^A g(x)| = |b|^{-1/2} |C f * M_{w/b} C g(x)|`,
/// `C = C_{a/b}`, on the A-side frequency grid `w = b xi_k`.
pub fn a_mod_norm(params: &SaftParams, f: &Signal, g: &Signal, r: f64, s: f64, m: &WeightSpec) -> Result<f64> {
    check_exponents(r, s)?;
    nonzero_window(g)?;
    let k = params.chirp_rate();
    let b = params.b();
    let v = stft_with_id(&chirp(f, k), &flipped_window(&chirp(g, k))?, "chirped-flipped")?;
    let (xg, wg) = (v.x_grid, v.omega_grid);
    let nw = v.nw();
    let amp = 1.0 / b.abs().sqrt();
    Ok(mixed_norm(
        &|i, kk| v.values[i * nw + kk].norm() * amp,
        v.nx(),
        nw,
        xg.step,
        wg.step * b.abs(),
        r,
        s,
        &|i, kk| m.eval(xg.node(i), b * wg.node(kk)),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{gaussian, sample};

    fn set3() -> SaftParams {
        "1,2,-2,-3,0.3,-0.2".parse().unwrap()
    }

    fn sig(g: Grid) -> Signal {
        sample(
            |t| Complex64::cis(2.0 * t) * gaussian(t - 1.0) + 0.5 * gaussian((t + 1.5) / 0.7),
            g,
            Mode::Cyclic,
        )
        .unwrap()
    }

    #[test]
    fn stft_matches_direct_sum() {
        let g = Grid::window(-4.0, 4.0, 32).unwrap();
        let f = sig(g);
        let w = window(WindowKind::Gaussian, g, Mode::Cyclic);
        let v = stft(&f, &w).unwrap();
        let z = 16i64;
        for m in [0usize, 5, 31] {
            for k in [0usize, 7, 16, 31] {
                let mut s = Complex64::new(0.0, 0.0);
                for n in 0..32 {
                    let j = (n as i64 - m as i64 + z).rem_euclid(32) as usize;
                    s += f.samples[n] * w.samples[j].conj() * Complex64::cis(-2.0 * PI * g.xi(k) * g.node(n));
                }
                assert!((v.get(m, k) - s * g.step).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn moyal_and_peak() {
        let g = Grid::window(-8.0, 8.0, 128).unwrap();
        let w = window(WindowKind::Gaussian, g, Mode::Cyclic);
        let v = stft(&w, &w).unwrap();
        assert!((v.energy() - 1.0).abs() < 1e-12);
        let (imax, _) = v
            .values
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.norm().partial_cmp(&b.1.norm()).unwrap())
            .unwrap();
        assert_eq!((imax / 128, imax % 128), (64, 64));
        let f = sig(g);
        let v = stft(&f, &w).unwrap();
        assert!((v.energy() - f.norm(2.0).powi(2)).abs() < 1e-12 * v.energy());
        let z = stft(&Signal::zeros(g, Mode::Cyclic), &w).unwrap();
        assert_eq!(z.max_abs(), 0.0);
    }

    #[test]
    fn chirp_covariance_on_aligned_lattice() {
        let g = Grid::window(-8.0, 8.0, 256).unwrap();
        let f = sig(g);
        let w = window(WindowKind::Gaussian, g, Mode::Cyclic);
        for s in [2.0, -4.0] {
            assert!(chirp_covariance_check(&f, &w, s).unwrap().relative() < 1e-12);
        }
        assert!(chirp_covariance_check(&f, &w, 0.3).is_err());
    }

    #[test]
    fn a_covariance_on_aligned_offsets() {
        let g = Grid::window(-8.0, 8.0, 256).unwrap();
        let f = sig(g);
        let w = window(WindowKind::Gaussian, g, Mode::Cyclic);
        let p = set3();
        let xi = 5.0 * g.step;
        // (a xi - eta)/b = -3/L.
        let eta = p.a() * xi + 3.0 * p.b() / g.length();
        assert!(a_covariance_check(&p, &f, &w, xi, eta).unwrap().relative() < 1e-12);
        assert_eq!(a_covariance_check(&p, &f, &w, 0.0, 0.0).unwrap().abs, 0.0);
        assert!(a_covariance_check(&p, &f, &w, xi, 0.011).is_err());
    }

    #[test]
    fn saft_stft_identity_small() {
        for p in [SaftParams::fourier(), SaftParams::new(1.0, 1.0, 0.0, 1.0, 0.0, 0.0).unwrap()] {
            let g = Grid::self_dual(64, 1.0).unwrap();
            let f = sample(|t| Complex64::cis(t) * gaussian((t - 0.5) / 1.3), g, Mode::Cyclic).unwrap();
            let w = sample(|t| Complex64::new(gaussian(t / 1.5), 0.0), g, Mode::Cyclic).unwrap();
            assert!(saft_stft_identity_check(&p, &f, &w).unwrap().relative() < 1e-9);
        }
        let g = Grid::window(-8.0, 8.0, 64).unwrap();
        let z = Signal::zeros(g, Mode::Cyclic);
        assert!(saft_stft_identity_check(&set3(), &z, &z).is_err());
    }

    #[test]
    fn mod_norm_examples() {
        let g = Grid::window(-8.0, 8.0, 128).unwrap();
        let w = window(WindowKind::Gaussian, g, Mode::Cyclic);
        let f = sig(g);
        let u = mod_norm(&f, &w, 2.0, 2.0, &WeightSpec::Unit).unwrap();
        assert!((u - f.norm(2.0)).abs() < 1e-10);
        let v0 = mod_norm(&f, &w, 1.0, 1.5, &WeightSpec::v_ell(0.0)).unwrap();
        let u1 = mod_norm(&f, &w, 1.0, 1.5, &WeightSpec::Unit).unwrap();
        assert!((v0 - u1).abs() < 1e-12 * u1);
        assert!(mod_norm(&f, &Signal::zeros(g, Mode::Cyclic), 2.0, 2.0, &WeightSpec::Unit).is_err());
    }

    #[test]
    fn a_mod_norm_reduces_and_scales() {
        let g = Grid::window(-8.0, 8.0, 128).unwrap();
        let w = window(WindowKind::Gaussian, g, Mode::Cyclic);
        let f = sig(g);
        let m = WeightSpec::v_ell(1.0);
        let fo = SaftParams::fourier();
        let a = a_mod_norm(&fo, &f, &w, 1.0, 2.0, &m).unwrap();
        let b = mod_norm(&f, &w, 1.0, 2.0, &m).unwrap();
        assert!((a - b).abs() < 1e-12 * b);
        let p = set3();
        let k = p.chirp_rate();
        for (r, s) in [(1.0, 1.0), (2.0, 1.0), (1.5, 3.0)] {
            let a = a_mod_norm(&p, &f, &w, r, s, &m).unwrap();
            let mb = WeightSpec::m_b(m.clone(), p.b());
            let b = mod_norm(&chirp(&f, k), &chirp(&w, k), r, s, &mb).unwrap();
            let scale = p.b().abs().powf(1.0 / s - 0.5);
            assert!((a - scale * b).abs() < 1e-12 * a);
        }
        let z = Signal::zeros(g, Mode::Cyclic);
        assert_eq!(a_mod_norm(&p, &z, &w, 2.0, 2.0, &m).unwrap(), 0.0);
    }
}
