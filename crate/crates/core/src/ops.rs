//! Translation, modulation, dilation, chirps and their A-twisted versions.
//!
//! In cyclic mode the A-translation is conjugated by `rho_A`:
//! `T_s^A f = e^{(pi i/b)(a s^2 + 2 p s)} conj(rho_A) S_s(rho_A f)`, where `S_s`
//! is the cyclic shift. Away from the wrap point this is the pointwise formula
//! `e^{-2 pi i (a/b) s (t-s)} f(t-s)`; at wrapped samples it keeps every
//! SAFT-domain identity exact. Compact mode uses the pointwise formula with
//! zero fill.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Result, SaftError};
use crate::grid::{max_abs_diff, Grid, Mode, Signal};
use crate::params::SaftParams;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Source index of output sample `n` after shifting by `m` samples.
fn shifted_index(n: usize, m: i64, len: usize, mode: Mode) -> Option<usize> {
    let j = n as i64 - m;
    match mode {
        Mode::Cyclic => Some(j.rem_euclid(len as i64) as usize),
        Mode::Compact => (0..len as i64).contains(&j).then_some(j as usize),
    }
}

/// Shift by `m` whole samples.
pub fn shift_samples(f: &Signal, m: i64) -> Signal {
    let n = f.len();
    let samples = (0..n)
        .map(|i| shifted_index(i, m, n, f.mode).map_or(ZERO, |j| f.samples[j]))
        .collect();
    f.with_samples(samples)
}

/// `T_s f(t) = f(t - s)`.
pub fn translate(f: &Signal, s: f64) -> Result<Signal> {
    let m = f.grid.shift_index(s)?;
    Ok(shift_samples(f, m))
}

/// `M_s f(t) = e^{2 pi i s t} f(t)`.
pub fn modulate(f: &Signal, s: f64) -> Signal {
    f.map(|t, z| z * Complex64::cis(2.0 * PI * s * t))
}

/// `C_s f(t) = e^{pi i s t^2} f(t)`.
pub fn chirp(f: &Signal, s: f64) -> Signal {
    if s == 0.0 {
        return f.clone();
    }
    f.map(|t, z| z * Complex64::cis(PI * s * t * t))
}

/// `D_s f(t) = |s|^{-1/2} f(t/s)` on the rescaled grid `s * t_n`.
pub fn dilate(f: &Signal, s: f64) -> Result<Signal> {
    if s == 0.0 || !s.is_finite() {
        return Err(SaftError::InvalidArgument(format!("dilation factor {s}")));
    }
    let g = f.grid;
    let amp = 1.0 / s.abs().sqrt();
    let n = g.count;
    let (start, samples) = if s > 0.0 {
        (s * g.start, f.samples.iter().map(|z| z * amp).collect())
    } else {
        (
            s * g.node(n - 1),
            f.samples.iter().rev().map(|z| z * amp).collect(),
        )
    };
    let grid = Grid::new(start, s.abs() * g.step, n)?;
    Signal::new(grid, f.mode, samples)
}

/// `f(-t)`. Cyclic mode needs `2 t0 / step` integral; compact mode zero-fills
/// nodes whose mirror image is off the grid.
pub fn involution(f: &Signal) -> Result<Signal> {
    let g = f.grid;
    let two_z = g.steps_to(-2.0 * g.start).ok_or_else(|| {
        SaftError::LatticeMisaligned(format!(
            "grid starting at {} step {} is not mirror-symmetric on nodes",
            g.start, g.step
        ))
    })?;
    let n = g.count as i64;
    let samples = (0..n)
        .map(|i| {
            let j = two_z - i;
            match f.mode {
                Mode::Cyclic => f.samples[j.rem_euclid(n) as usize],
                Mode::Compact => {
                    if (0..n).contains(&j) {
                        f.samples[j as usize]
                    } else {
                        ZERO
                    }
                }
            }
        })
        .collect();
    Ok(f.with_samples(samples))
}

/// Phase `e^{(pi i/b)(a s^2 + 2 p s)}` of the cyclic A-translation.
fn a_translate_phase(params: &SaftParams, s: f64) -> Complex64 {
    Complex64::cis(PI / params.b() * (params.a() * s * s + 2.0 * params.p() * s))
}

/// `T_s^A f(t) = e^{-2 pi i (a/b) s (t - s)} f(t - s)`.
pub fn a_translate(f: &Signal, params: &SaftParams, s: f64) -> Result<Signal> {
    let m = f.grid.shift_index(s)?;
    let n = f.len();
    let g = f.grid;
    let samples = match f.mode {
        Mode::Compact => {
            let k = params.chirp_rate();
            (0..n)
                .map(|i| match shifted_index(i, m, n, Mode::Compact) {
                    Some(j) => {
                        let t = g.node(i);
                        f.samples[j] * Complex64::cis(-2.0 * PI * k * s * (t - s))
                    }
                    None => ZERO,
                })
                .collect()
        }
        Mode::Cyclic => {
            let c = a_translate_phase(params, s);
            (0..n)
                .map(|i| {
                    let j = shifted_index(i, m, n, Mode::Cyclic).unwrap();
                    c * params.rho(g.node(i)).conj() * params.rho(g.node(j)) * f.samples[j]
                })
                .collect()
        }
    };
    Ok(f.with_samples(samples))
}

/// `M_s^A f(t) = e^{(pi i/b)(a s^2 - 2 p s + 2 s t)} f(t)`.
pub fn a_modulate(f: &Signal, params: &SaftParams, s: f64) -> Signal {
    let (a, b, p) = (params.a(), params.b(), params.p());
    f.map(|t, z| z * Complex64::cis(PI / b * (a * s * s - 2.0 * p * s + 2.0 * s * t)))
}

/// Factor `e^{-2 pi i (a/b) x y}` of the projective composition law.
pub fn compose_phase(params: &SaftParams, x: f64, y: f64) -> Complex64 {
    Complex64::cis(-2.0 * PI * params.chirp_rate() * x * y)
}

/// `max |T_x^A T_y^A f - e^{-2 pi i (a/b) x y} T_{x+y}^A f|`.
pub fn a_translate_compose_check(
    params: &SaftParams,
    x: f64,
    y: f64,
    f: &Signal,
) -> Result<f64> {
    let lhs = a_translate(&a_translate(f, params, y)?, params, x)?;
    let phase = compose_phase(params, x, y);
    let rhs = a_translate(f, params, x + y)?;
    let rhs: Vec<Complex64> = rhs.samples.iter().map(|z| z * phase).collect();
    Ok(max_abs_diff(&lhs.samples, &rhs))
}

/// `max |C_{a/b} T_s^A f - e^{pi i (a/b) s^2} T_s C_{a/b} f|` (chirp conjugation).
pub fn chirp_conjugation_deviation(params: &SaftParams, f: &Signal, s: f64) -> Result<f64> {
    let k = params.chirp_rate();
    let lhs = chirp(&a_translate(f, params, s)?, k);
    let phase = Complex64::cis(PI * k * s * s);
    let rhs = translate(&chirp(f, k), s)?;
    let rhs: Vec<Complex64> = rhs.samples.iter().map(|z| z * phase).collect();
    Ok(max_abs_diff(&lhs.samples, &rhs))
}
