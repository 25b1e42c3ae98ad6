//! SAFT multipliers `F_A(T_{A,m} f) = m F_A f`, Hormander-type symbol checks and
//! the dyadic Littlewood-Paley bank.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::aconv::aconv_fast;
use crate::engine::SaftPlan;
use crate::error::{Result, SaftError};
use crate::families::{family, FamilyKind};
use crate::grid::{lr_norm, max_abs_diff, Grid, Mode, Signal};
use crate::ops::a_translate;
use crate::params::SaftParams;
use crate::Deviation;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SymbolKind {
    /// `|w|^{i alpha}`, with value 1 at `w = 0`.
    ImaginaryPower { alpha: f64 },
    /// `tanh(w / scale)`.
    SmoothedSign { scale: f64 },
    /// Smooth bump supported on `2^j <= |w| <= 2^{j+1}`.
    DyadicBump { j: i32 },
    /// Indicator of `[lo, hi]`.
    Indicator { lo: f64, hi: f64 },
    IndicatorUnion { intervals: Vec<(f64, f64)> },
}

/// A symbol `m(w) = base(dilation * w)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymbolSpec {
    pub kind: SymbolKind,
    pub dilation: f64,
}

fn bump(u: f64) -> f64 {
    if u <= 1.0 || u >= 2.0 {
        0.0
    } else {
        let q = (u - 1.0) * (2.0 - u);
        (4.0 - 1.0 / q).exp()
    }
}

fn bump_deriv(u: f64) -> f64 {
    if u <= 1.0 || u >= 2.0 {
        0.0
    } else {
        let q = (u - 1.0) * (2.0 - u);
        bump(u) * (3.0 - 2.0 * u) / (q * q)
    }
}

impl SymbolSpec {
    pub fn new(kind: SymbolKind) -> Self {
        SymbolSpec { kind, dilation: 1.0 }
    }

    pub fn imaginary_power(alpha: f64) -> Self {
        Self::new(SymbolKind::ImaginaryPower { alpha })
    }

    pub fn smoothed_sign(scale: f64) -> Result<Self> {
        if scale <= 0.0 || !scale.is_finite() {
            return Err(SaftError::InvalidArgument(format!("scale {scale} must be positive")));
        }
        Ok(Self::new(SymbolKind::SmoothedSign { scale }))
    }

    pub fn indicator(lo: f64, hi: f64) -> Self {
        Self::new(SymbolKind::Indicator { lo, hi })
    }

    /// `w -> m(factor * w)`.
    pub fn dilated(&self, factor: f64) -> Self {
        SymbolSpec {
            kind: self.kind.clone(),
            dilation: self.dilation * factor,
        }
    }

    fn base(&self, w: f64) -> Complex64 {
        match &self.kind {
            SymbolKind::ImaginaryPower { alpha } => {
                if w == 0.0 {
                    Complex64::new(1.0, 0.0)
                } else {
                    Complex64::cis(alpha * w.abs().ln())
                }
            }
            SymbolKind::SmoothedSign { scale } => Complex64::new((w / scale).tanh(), 0.0),
            SymbolKind::DyadicBump { j } => Complex64::new(bump(w.abs() / 2f64.powi(*j)), 0.0),
            SymbolKind::Indicator { lo, hi } => Complex64::new(if w >= *lo && w <= *hi { 1.0 } else { 0.0 }, 0.0),
            SymbolKind::IndicatorUnion { intervals } => {
                let hit = intervals.iter().any(|&(lo, hi)| w >= lo && w <= hi);
                Complex64::new(if hit { 1.0 } else { 0.0 }, 0.0)
            }
        }
    }

    fn base_deriv(&self, w: f64) -> Option<Complex64> {
        match &self.kind {
            SymbolKind::ImaginaryPower { alpha } => {
                if w == 0.0 {
                    Some(Complex64::new(f64::NAN, f64::NAN))
                } else {
                    Some(Complex64::new(0.0, *alpha) * self.base(w) / w)
                }
            }
            SymbolKind::SmoothedSign { scale } => {
                let c = (w / scale).cosh();
                Some(Complex64::new(1.0 / (scale * c * c), 0.0))
            }
            SymbolKind::DyadicBump { j } => {
                let s = 2f64.powi(*j);
                Some(Complex64::new(bump_deriv(w.abs() / s) * w.signum() / s, 0.0))
            }
            SymbolKind::Indicator { .. } | SymbolKind::IndicatorUnion { .. } => None,
        }
    }

    pub fn eval(&self, w: f64) -> Complex64 {
        self.base(self.dilation * w)
    }

    /// Closed-form `m'(w)`, when the symbol is smooth.
    pub fn derivative(&self, w: f64) -> Option<Complex64> {
        self.base_deriv(self.dilation * w).map(|d| d * self.dilation)
    }

    pub fn is_smooth(&self) -> bool {
        self.base_deriv(1.0).is_some()
    }
}

impl std::str::FromStr for SymbolSpec {
    type Err = SaftError;

    /// `imagpow:ALPHA`, `smoothsign:S`, `bump:J`, `indicator:LO,HI`.
    fn from_str(s: &str) -> Result<Self> {
        let num = |t: &str| -> Result<f64> {
            t.trim()
                .parse()
                .map_err(|_| SaftError::InvalidArgument(format!("bad number '{t}'")))
        };
        let (name, arg) = s
            .split_once(':')
            .ok_or_else(|| SaftError::InvalidArgument(format!("symbol '{s}' needs KIND:ARGS")))?;
        match name {
            "imagpow" => Ok(Self::imaginary_power(num(arg)?)),
            "smoothsign" => Self::smoothed_sign(num(arg)?),
            "bump" => Ok(Self::new(SymbolKind::DyadicBump {
                j: arg
                    .trim()
                    .parse()
                    .map_err(|_| SaftError::InvalidArgument(format!("bad j '{arg}'")))?,
            })),
            "indicator" => {
                let (lo, hi) = arg
                    .split_once(',')
                    .ok_or_else(|| SaftError::InvalidArgument("indicator needs LO,HI".into()))?;
                Ok(Self::indicator(num(lo)?, num(hi)?))
            }
            _ => Err(SaftError::InvalidArgument(format!("unknown symbol kind '{name}'"))),
        }
    }
}

fn require_cyclic(f: &Signal) -> Result<()> {
    if f.mode != Mode::Cyclic {
        return Err(SaftError::Unsupported(
            "multipliers act diagonally only in cyclic mode".into(),
        ));
    }
    Ok(())
}

/// `isaft(m(omega_k) saft(f))`.
pub fn apply_multiplier(params: &SaftParams, m: &SymbolSpec, f: &Signal) -> Result<Signal> {
    require_cyclic(f)?;
    SaftPlan::new(*params, f.grid).apply_symbol(f, |w| m.eval(w))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HormanderReport {
    pub c_est: f64,
    pub pass: bool,
}

/// `C_est = max_{w != 0} |m'(w)| |w|` over `omegas`.
pub fn hormander_validate(m: &SymbolSpec, omegas: &[f64]) -> Result<HormanderReport> {
    if !m.is_smooth() {
        return Err(SaftError::Unsupported(
            "symbol has no closed-form derivative".into(),
        ));
    }
    let c_est = omegas
        .iter()
        .filter(|&&w| w != 0.0)
        .map(|&w| m.derivative(w).expect("smooth symbol").norm() * w.abs())
        .fold(0.0, f64::max);
    Ok(HormanderReport {
        c_est,
        pass: c_est.is_finite(),
    })
}

/// `C_est` of `m` on `omegas` and of `m(b .)` on `omegas / b`.
pub fn hormander_scale_check(m: &SymbolSpec, omegas: &[f64], b: f64) -> Result<(f64, f64)> {
    let c1 = hormander_validate(m, omegas)?.c_est;
    let scaled: Vec<f64> = omegas.iter().map(|w| w / b).collect();
    let c2 = hormander_validate(&m.dilated(b), &scaled)?.c_est;
    Ok((c1, c2))
}

/// `max ||T_{A,m} f||_r / ||f||_r` over a seeded family.
pub fn multiplier_norm_probe(
    params: &SaftParams,
    m: &SymbolSpec,
    r: f64,
    kind: FamilyKind,
    grid: Grid,
    count: usize,
    seed: u64,
) -> Result<f64> {
    if r <= 1.0 || !r.is_finite() {
        return Err(SaftError::InvalidExponent(format!("r = {r} must lie in (1, inf)")));
    }
    let plan = SaftPlan::new(*params, grid);
    let ratios = family(kind, grid, Mode::Cyclic, count, seed)
        .par_iter()
        .map(|f| {
            let tf = plan.apply_symbol(f, |w| m.eval(w))?;
            Ok(lr_norm(&tf, r)? / lr_norm(f, r)?)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(ratios.into_iter().fold(0.0, f64::max))
}

/// Dyadic blocks `Delta_j = [-2^{j+1}, -2^j] u [2^j, 2^{j+1}]`, `j_min <= j <= j_max`.
///
/// Endpoints: the first block is closed, later blocks are `(2^j, 2^{j+1}]`, so
/// each shared endpoint goes to the lower block.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LpBank {
    pub j_min: i32,
    pub j_max: i32,
}

impl LpBank {
    pub fn new(j_min: i32, j_max: i32) -> Result<Self> {
        if j_max < j_min {
            return Err(SaftError::InvalidArgument(format!(
                "empty bank: j_min = {j_min} > j_max = {j_max}"
            )));
        }
        Ok(LpBank { j_min, j_max })
    }

    /// Largest bank on a frequency grid: `2^{j_min} >= 2 step`, `2^{j_max+1} <= max |w|`.
    pub fn for_grid(freq: &Grid) -> Result<Self> {
        let max_w = freq.start.abs().max(freq.node(freq.count - 1).abs());
        let j_min = (2.0 * freq.step).log2().ceil() as i32;
        let j_max = max_w.log2().floor() as i32 - 1;
        Self::new(j_min, j_max)
    }

    pub fn len(&self) -> usize {
        (self.j_max - self.j_min + 1) as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn js(&self) -> impl Iterator<Item = i32> {
        self.j_min..=self.j_max
    }

    /// The block containing `w`, if any.
    pub fn block_of(&self, w: f64) -> Option<i32> {
        let a = w.abs();
        let lo = 2f64.powi(self.j_min);
        let hi = 2f64.powi(self.j_max + 1);
        if a < lo || a > hi {
            return None;
        }
        if a <= 2.0 * lo {
            return Some(self.j_min);
        }
        // a in (2^j, 2^{j+1}]: j = ceil(log2 a) - 1, with exact powers of two handled by log2.
        let mut j = a.log2().ceil() as i32 - 1;
        if 2f64.powi(j) >= a {
            j -= 1;
        }
        if 2f64.powi(j + 1) < a {
            j += 1;
        }
        Some(j.clamp(self.j_min, self.j_max))
    }

    pub fn covers(&self, w: f64) -> bool {
        self.block_of(w).is_some()
    }
}

/// The blocks `S_j f`, `F_A(S_j f) = chi_{Delta_j} F_A f`.
pub fn lp_project(params: &SaftParams, bank: &LpBank, f: &Signal) -> Result<Vec<Signal>> {
    require_cyclic(f)?;
    let plan = SaftPlan::new(*params, f.grid);
    let spec = plan.forward_samples(&f.samples);
    let omegas = plan.omegas();
    let member: Vec<Option<i32>> = omegas.iter().map(|&w| bank.block_of(w)).collect();
    let blocks = bank
        .js()
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&j| {
            let masked: Vec<Complex64> = spec
                .iter()
                .zip(&member)
                .map(|(v, b)| if *b == Some(j) { *v } else { Complex64::new(0.0, 0.0) })
                .collect();
            f.with_samples(plan.inverse_samples(&masked))
        })
        .collect();
    Ok(blocks)
}

/// `(sum_j |S_j f|^2)^{1/2}` pointwise.
pub fn square_function(blocks: &[Signal]) -> Result<Signal> {
    let first = blocks
        .first()
        .ok_or_else(|| SaftError::InvalidArgument("no blocks".into()))?;
    for b in blocks {
        first.ensure_same_grid(b)?;
    }
    let samples = (0..first.len())
        .map(|n| Complex64::new(blocks.iter().map(|b| b.samples[n].norm_sqr()).sum::<f64>().sqrt(), 0.0))
        .collect();
    Ok(first.with_samples(samples))
}

/// `sum_j S_j f`.
pub fn lp_reconstruct(blocks: &[Signal]) -> Result<Signal> {
    let first = blocks
        .first()
        .ok_or_else(|| SaftError::InvalidArgument("no blocks".into()))?;
    let mut sum = vec![Complex64::new(0.0, 0.0); first.len()];
    for b in blocks {
        first.ensure_same_grid(b)?;
        for (s, v) in sum.iter_mut().zip(&b.samples) {
            *s += v;
        }
    }
    Ok(first.with_samples(sum))
}

/// Zeroes the spectrum of `f` outside the bank coverage. Returns the filtered
/// signal and the fraction of spectral energy removed.
pub fn cover(params: &SaftParams, bank: &LpBank, f: &Signal) -> Result<(Signal, f64)> {
    let plan = SaftPlan::new(*params, f.grid);
    let mut spec = plan.forward_samples(&f.samples);
    let total: f64 = spec.iter().map(|v| v.norm_sqr()).sum();
    let mut removed = 0.0;
    for (v, w) in spec.iter_mut().zip(plan.omegas()) {
        if !bank.covers(w) {
            removed += v.norm_sqr();
            *v = Complex64::new(0.0, 0.0);
        }
    }
    let leak = if total > 0.0 { removed / total } else { 0.0 };
    Ok((f.with_samples(plan.inverse_samples(&spec)), leak))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RatioRange {
    pub min_ratio: f64,
    pub max_ratio: f64,
}

/// Range of `||S f||_r / ||f||_r` over covered members of a seeded family, with
/// the largest bank the grid supports.
pub fn lp_ratio_probe(
    params: &SaftParams,
    r: f64,
    kind: FamilyKind,
    grid: Grid,
    count: usize,
    seed: u64,
) -> Result<RatioRange> {
    if r <= 1.0 || !r.is_finite() {
        return Err(SaftError::InvalidExponent(format!("r = {r} must lie in (1, inf)")));
    }
    let plan = SaftPlan::new(*params, grid);
    let bank = LpBank::for_grid(plan.freq_grid())?;
    let ratios = family(kind, grid, Mode::Cyclic, count, seed)
        .par_iter()
        .map(|f| {
            let (fc, _) = cover(params, &bank, f)?;
            let sq = square_function(&lp_project(params, &bank, &fc)?)?;
            Ok(lr_norm(&sq, r)? / lr_norm(&fc, r)?)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(RatioRange {
        min_ratio: ratios.iter().copied().fold(f64::INFINITY, f64::min),
        max_ratio: ratios.iter().copied().fold(0.0, f64::max),
    })
}

/// `max |u (*)_A (T_x^A f) - T_x^A (u (*)_A f)|`, measured against `||u||_1 ||f||_inf`.
pub fn wendel_commute_check(params: &SaftParams, u: &Signal, x: f64, f: &Signal) -> Result<Deviation> {
    require_cyclic(f)?;
    let lhs = aconv_fast(params, u, &a_translate(f, params, x)?, Mode::Cyclic)?;
    let rhs = a_translate(&aconv_fast(params, u, f, Mode::Cyclic)?, params, x)?;
    Ok(Deviation::new(
        max_abs_diff(&lhs.samples, &rhs.samples),
        u.norm(1.0) * f.max_abs(),
    ))
}
