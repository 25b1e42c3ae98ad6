//! Uniform grids, sampled signals, spectra and quadrature norms.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SaftError};
use crate::params::SaftParams;

/// Relative tolerance used when comparing grid descriptors.
const GRID_EQ_TOL: f64 = 1e-12;

/// A uniform grid `start + n * step`, `0 <= n < count`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub start: f64,
    pub step: f64,
    pub count: usize,
}

impl Grid {
    pub fn new(start: f64, step: f64, count: usize) -> Result<Self> {
        if !start.is_finite() || !step.is_finite() || step <= 0.0 {
            return Err(SaftError::InvalidGrid(format!(
                "step must be positive and finite (start={start}, step={step})"
            )));
        }
        if count < 2 {
            return Err(SaftError::InvalidGrid(format!("count {count} < 2")));
        }
        Ok(Grid { start, step, count })
    }

    /// The grid with `count` nodes covering `[lo, hi)`.
    pub fn window(lo: f64, hi: f64, count: usize) -> Result<Self> {
        if hi <= lo {
            return Err(SaftError::InvalidGrid(format!("empty window [{lo}, {hi})")));
        }
        Self::new(lo, (hi - lo) / count as f64, count)
    }

    /// Square grid with `count * step^2 = scale`, symmetric around 0, whose
    /// induced SAFT frequency step for `|b| = scale` equals the time step.
    pub fn self_dual(count: usize, scale: f64) -> Result<Self> {
        if scale <= 0.0 {
            return Err(SaftError::InvalidGrid("scale must be positive".into()));
        }
        let step = (scale / count as f64).sqrt();
        Self::new(-((count / 2) as f64) * step, step, count)
    }

    pub fn node(&self, n: usize) -> f64 {
        self.start + n as f64 * self.step
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.count).map(|n| self.node(n)).collect()
    }

    /// Window length `N * step`.
    pub fn length(&self) -> f64 {
        self.count as f64 * self.step
    }

    /// `floor(N/2)`, the index of the zero DFT frequency.
    pub fn half(&self) -> usize {
        self.count / 2
    }

    /// DFT frequency `xi_k = (k - floor(N/2)) / (N step)`.
    pub fn xi(&self, k: usize) -> f64 {
        (k as f64 - self.half() as f64) / self.length()
    }

    /// The frequency grid `xi_k`.
    pub fn xi_grid(&self) -> Grid {
        Grid {
            start: -(self.half() as f64) / self.length(),
            step: 1.0 / self.length(),
            count: self.count,
        }
    }

    /// Number of steps from `start` to `x`, if `x` is a node offset.
    pub fn steps_to(&self, x: f64) -> Option<i64> {
        let m = x / self.step;
        let r = m.round();
        if (m - r).abs() <= 1e-9 * m.abs().max(1.0) {
            Some(r as i64)
        } else {
            None
        }
    }

    /// `s / step` as an integer, or a `NotGridAligned` error.
    pub fn shift_index(&self, s: f64) -> Result<i64> {
        self.steps_to(s).ok_or(SaftError::NotGridAligned {
            shift: s,
            step: self.step,
        })
    }

    /// Index of the node at `t = 0`, when `-start/step` is an integer.
    pub fn zero_index(&self) -> Option<i64> {
        self.steps_to(-self.start)
    }

    /// `zero_index`, or a `LatticeMisaligned` error.
    pub fn require_zero_index(&self) -> Result<i64> {
        self.zero_index().ok_or_else(|| {
            SaftError::LatticeMisaligned(format!(
                "-start/step = {} must be an integer",
                -self.start / self.step
            ))
        })
    }

    pub fn approx_eq(&self, other: &Grid) -> bool {
        let scale = self.step.max(other.step);
        self.count == other.count
            && (self.step - other.step).abs() <= GRID_EQ_TOL * scale
            && (self.start - other.start).abs() <= GRID_EQ_TOL * scale.max(self.start.abs())
    }

    pub fn ensure_same(&self, other: &Grid) -> Result<()> {
        if self.approx_eq(other) {
            Ok(())
        } else {
            Err(SaftError::GridMismatch(format!("{self:?} vs {other:?}")))
        }
    }
}

/// Boundary convention of a signal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    #[default]
    Cyclic,
    Compact,
}

impl std::str::FromStr for Mode {
    type Err = SaftError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cyclic" => Ok(Mode::Cyclic),
            "compact" => Ok(Mode::Compact),
            _ => Err(SaftError::InvalidArgument(format!(
                "mode must be cyclic or compact, got '{s}'"
            ))),
        }
    }
}

/// Complex samples on a uniform time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Signal {
    pub grid: Grid,
    pub mode: Mode,
    pub samples: Vec<Complex64>,
}

impl Signal {
    pub fn new(grid: Grid, mode: Mode, samples: Vec<Complex64>) -> Result<Self> {
        if samples.len() != grid.count {
            return Err(SaftError::GridMismatch(format!(
                "{} samples on a grid of {} nodes",
                samples.len(),
                grid.count
            )));
        }
        if let Some(index) = samples.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(SaftError::NonFinite { index });
        }
        Ok(Signal {
            grid,
            mode,
            samples,
        })
    }

    pub fn zeros(grid: Grid, mode: Mode) -> Self {
        Signal {
            grid,
            mode,
            samples: vec![Complex64::new(0.0, 0.0); grid.count],
        }
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Same grid and mode, new samples.
    pub fn with_samples(&self, samples: Vec<Complex64>) -> Signal {
        debug_assert_eq!(samples.len(), self.grid.count);
        Signal {
            grid: self.grid,
            mode: self.mode,
            samples,
        }
    }

    pub fn with_mode(mut self, mode: Mode) -> Signal {
        self.mode = mode;
        self
    }

    /// Pointwise map `f_n -> op(t_n, f_n)`.
    pub fn map(&self, mut op: impl FnMut(f64, Complex64) -> Complex64) -> Signal {
        let samples = self
            .samples
            .iter()
            .enumerate()
            .map(|(n, &z)| op(self.grid.node(n), z))
            .collect();
        self.with_samples(samples)
    }

    pub fn ensure_same_grid(&self, other: &Signal) -> Result<()> {
        self.grid.ensure_same(&other.grid)
    }

    pub fn max_abs(&self) -> f64 {
        max_abs(&self.samples)
    }

    pub fn norm(&self, r: f64) -> f64 {
        lr_norm(self, r).expect("exponent is valid")
    }

    /// Fraction of `||f||_1` carried by the outer 5% of the window on each side.
    pub fn tail_mass(&self) -> f64 {
        let n = self.len();
        let edge = (n as f64 * 0.05).ceil() as usize;
        let total: f64 = self.samples.iter().map(|z| z.norm()).sum();
        if total == 0.0 {
            return 0.0;
        }
        let tail: f64 = self.samples[..edge]
            .iter()
            .chain(&self.samples[n - edge..])
            .map(|z| z.norm())
            .sum();
        tail / total
    }
}

/// SAFT values on the induced frequency grid `omega_k = b xi_k`, sorted ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub params: SaftParams,
    pub freq_grid: Grid,
    /// Grid of the time-domain signal the spectrum belongs to.
    pub time_grid: Grid,
    pub mode: Mode,
    /// True when `b < 0` and the DFT order was reversed to sort `omega` ascending.
    pub reversed: bool,
    pub samples: Vec<Complex64>,
}

impl Spectrum {
    /// Frequency grid induced by `params` on `time_grid`.
    pub fn layout(params: &SaftParams, time_grid: &Grid) -> (Grid, bool) {
        let b = params.b();
        let l = time_grid.length();
        let n = time_grid.count;
        let h = time_grid.half() as f64;
        let step = b.abs() / l;
        if b > 0.0 {
            (
                Grid {
                    start: -h * step,
                    step,
                    count: n,
                },
                false,
            )
        } else {
            (
                Grid {
                    start: (n as f64 - 1.0 - h) * b / l,
                    step,
                    count: n,
                },
                true,
            )
        }
    }

    /// Position in the sorted layout of DFT bin `k`.
    pub fn sorted_index(&self, k: usize) -> usize {
        if self.reversed {
            self.samples.len() - 1 - k
        } else {
            k
        }
    }

    pub fn omega(&self, j: usize) -> f64 {
        self.freq_grid.node(j)
    }

    pub fn with_samples(&self, samples: Vec<Complex64>) -> Spectrum {
        debug_assert_eq!(samples.len(), self.samples.len());
        Spectrum {
            samples,
            ..self.clone()
        }
    }

    /// Index of the node equal to `omega` (within 1e-9 of a step).
    pub fn index_of(&self, omega: f64) -> Option<usize> {
        let g = &self.freq_grid;
        let m = (omega - g.start) / g.step;
        let r = m.round();
        if (m - r).abs() <= 1e-9 && r >= 0.0 && (r as usize) < g.count {
            Some(r as usize)
        } else {
            None
        }
    }

    pub fn ensure_compatible(&self, other: &Spectrum) -> Result<()> {
        self.freq_grid.ensure_same(&other.freq_grid)?;
        if self.params != other.params {
            return Err(SaftError::GridMismatch("spectra use different params".into()));
        }
        Ok(())
    }

    pub fn norm(&self, r: f64) -> f64 {
        spectrum_norm(self, r).expect("exponent is valid")
    }
}

fn check_exponent(r: f64) -> Result<()> {
    if r.is_nan() || r < 1.0 {
        return Err(SaftError::InvalidExponent(format!("r = {r} < 1")));
    }
    Ok(())
}

/// `(weight * sum |v|^r)^(1/r)`; `r = inf` gives `max |v|`.
pub fn weighted_lr(values: &[Complex64], weight: f64, r: f64) -> Result<f64> {
    check_exponent(r)?;
    if r.is_infinite() {
        return Ok(max_abs(values));
    }
    if r == 2.0 {
        let s: f64 = values.iter().map(|z| z.norm_sqr()).sum();
        return Ok((weight * s).sqrt());
    }
    if r == 1.0 {
        return Ok(weight * values.iter().map(|z| z.norm()).sum::<f64>());
    }
    let s: f64 = values.iter().map(|z| z.norm().powf(r)).sum();
    Ok((weight * s).powf(1.0 / r))
}

/// `(Delta sum |f_n|^r)^(1/r)`, or `max |f_n|` for `r = inf`.
pub fn lr_norm(f: &Signal, r: f64) -> Result<f64> {
    weighted_lr(&f.samples, f.grid.step, r)
}

/// `(Delta_omega sum |F_k|^r)^(1/r)`.
pub fn spectrum_norm(f: &Spectrum, r: f64) -> Result<f64> {
    weighted_lr(&f.samples, f.freq_grid.step, r)
}

/// Samples `func` at the grid nodes.
pub fn sample(func: impl Fn(f64) -> Complex64, grid: Grid, mode: Mode) -> Result<Signal> {
    let samples = grid.nodes().into_iter().map(func).collect();
    Signal::new(grid, mode, samples)
}

/// Real-valued convenience wrapper over [`sample`].
pub fn sample_real(func: impl Fn(f64) -> f64, grid: Grid, mode: Mode) -> Result<Signal> {
    sample(|t| Complex64::new(func(t), 0.0), grid, mode)
}

pub fn max_abs(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// `max_n |a_n - b_n|`.
pub fn max_abs_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len(), "length mismatch");
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// `sqrt(sum |a_n - b_n|^2)`.
pub fn l2_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len(), "length mismatch");
    a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt()
}

pub fn l2(a: &[Complex64]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Normalized Gaussian `e^{-pi t^2}` shape used across tests and examples.
pub fn gaussian(t: f64) -> f64 {
    (-std::f64::consts::PI * t * t).exp()
}

/// Indicator of `[lo, hi)`. The half-open convention gives exactly
/// `(hi - lo) / step` ones on grids where both ends are nodes.
pub fn indicator(lo: f64, hi: f64) -> impl Fn(f64) -> f64 {
    move |t| if t >= lo && t < hi { 1.0 } else { 0.0 }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn grid_validation() {
        assert!(Grid::new(0.0, 0.0, 4).is_err());
        assert!(Grid::new(0.0, 1.0, 1).is_err());
        let g = Grid::window(-4.0, 4.0, 512).unwrap();
        assert_eq!(g.step, 1.0 / 64.0);
        assert_eq!(g.node(256), 0.0);
        assert_eq!(g.zero_index(), Some(256));
    }

    #[test]
    fn lr_norm_examples() {
        let g = Grid::new(0.0, 0.01, 100).unwrap();
        let one = Signal::new(g, Mode::Compact, vec![c(1.0); 100]).unwrap();
        assert!((lr_norm(&one, 2.0).unwrap() - 1.0).abs() < 1e-12);
        let zero = Signal::zeros(g, Mode::Compact);
        for r in [1.0, 1.5, 2.0, f64::INFINITY] {
            assert_eq!(lr_norm(&zero, r).unwrap(), 0.0);
        }
        let mut imp = vec![c(0.0); 100];
        imp[17] = c(100.0);
        let imp = Signal::new(g, Mode::Compact, imp).unwrap();
        assert!((lr_norm(&imp, 1.0).unwrap() - 1.0).abs() < 1e-12);
        assert!(lr_norm(&imp, 0.5).is_err());
    }

    #[test]
    fn sample_indicator_has_64_ones() {
        let g = Grid::window(-4.0, 4.0, 512).unwrap();
        let s = sample_real(indicator(-0.5, 0.5), g, Mode::Compact).unwrap();
        let ones = s.samples.iter().filter(|z| z.re == 1.0).count();
        assert_eq!(ones, 64);
        let first = s.samples.iter().position(|z| z.re == 1.0).unwrap();
        assert_eq!(first, 256 - 32);
    }

    #[test]
    fn sample_gaussian_peaks_at_zero() {
        let g = Grid::window(-4.0, 4.0, 512).unwrap();
        let s = sample_real(gaussian, g, Mode::Compact).unwrap();
        let (imax, _) = s
            .samples
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.re.partial_cmp(&b.1.re).unwrap())
            .unwrap();
        assert_eq!(imax, 256);
        assert!(s.samples.iter().all(|z| z.re > 0.0 && z.im == 0.0));
    }

    #[test]
    fn sample_rejects_non_finite() {
        let g = Grid::window(-1.0, 1.0, 8).unwrap();
        let err = sample_real(|t| 1.0 / t, g, Mode::Compact).unwrap_err();
        assert_eq!(err, SaftError::NonFinite { index: 4 });
    }

    #[test]
    fn spectrum_layout_coupling() {
        let g = Grid::window(-8.0, 8.0, 512).unwrap();
        for b in [1.0, 2.0, -0.5, -3.0] {
            let p = SaftParams::new(1.0, b, 0.0, 1.0, 0.0, 0.0).unwrap();
            let (fg, rev) = Spectrum::layout(&p, &g);
            assert!((fg.step * fg.count as f64 * g.step - b.abs()).abs() < 1e-12);
            assert_eq!(rev, b < 0.0);
            // Sorted grid lists b * xi_k in ascending order.
            let mut w: Vec<f64> = (0..512).map(|k| b * g.xi(k)).collect();
            w.sort_by(|a, b| a.partial_cmp(b).unwrap());
            for (j, wj) in w.iter().enumerate() {
                assert!((fg.node(j) - wj).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn tail_mass_of_centered_gaussian_is_tiny() {
        let g = Grid::window(-8.0, 8.0, 512).unwrap();
        let s = sample_real(gaussian, g, Mode::Cyclic).unwrap();
        assert!(s.tail_mass() < 1e-12);
        let flat = Signal::new(g, Mode::Cyclic, vec![c(1.0); 512]).unwrap();
        assert!((flat.tail_mass() - 52.0 / 512.0).abs() < 1e-12);
    }
}
