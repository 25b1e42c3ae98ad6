//! JSON and CSV file formats for signals, spectra and TF matrices.
//!
//! Signal JSON: `{"start": t0, "step": dt, "mode": "cyclic", "samples": [[re, im], ...]}`.
//! Signal CSV: rows `t,re,im` on a uniform `t` grid, optional header row.
//! Spectrum JSON embeds the params and the time grid; samples are sorted by `omega`.

use std::f64::consts::PI;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SaftError};
use crate::families::{gaussian_mixture, rng};
use crate::grid::{gaussian, indicator, sample, Grid, Mode, Signal, Spectrum};
use crate::params::SaftParams;
use crate::timefreq::TFMatrix;

/// Window used by `builtin:` inputs.
pub const BUILTIN_WINDOW: (f64, f64) = (-8.0, 8.0);

#[derive(Debug, Serialize, Deserialize)]
struct SignalFile {
    start: f64,
    step: f64,
    #[serde(default)]
    mode: Mode,
    samples: Vec<[f64; 2]>,
}

#[derive(Debug, Serialize, Deserialize)]
struct SpectrumFile {
    params: SaftParams,
    start: f64,
    step: f64,
    #[serde(default)]
    mode: Mode,
    omega_start: f64,
    omega_step: f64,
    samples: Vec<[f64; 2]>,
}

fn pairs(v: &[Complex64]) -> Vec<[f64; 2]> {
    v.iter().map(|z| [z.re, z.im]).collect()
}

fn complexes(v: &[[f64; 2]]) -> Vec<Complex64> {
    v.iter().map(|&[re, im]| Complex64::new(re, im)).collect()
}

pub fn signal_to_json(f: &Signal) -> String {
    let file = SignalFile {
        start: f.grid.start,
        step: f.grid.step,
        mode: f.mode,
        samples: pairs(&f.samples),
    };
    serde_json::to_string(&file).expect("signal serializes")
}

pub fn signal_from_json(text: &str) -> Result<Signal> {
    let file: SignalFile = serde_json::from_str(text)?;
    let grid = Grid::new(file.start, file.step, file.samples.len())?;
    Signal::new(grid, file.mode, complexes(&file.samples))
}

pub fn spectrum_to_json(s: &Spectrum) -> String {
    let file = SpectrumFile {
        params: s.params,
        start: s.time_grid.start,
        step: s.time_grid.step,
        mode: s.mode,
        omega_start: s.freq_grid.start,
        omega_step: s.freq_grid.step,
        samples: pairs(&s.samples),
    };
    serde_json::to_string(&file).expect("spectrum serializes")
}

pub fn spectrum_from_json(text: &str) -> Result<Spectrum> {
    let file: SpectrumFile = serde_json::from_str(text)?;
    let time_grid = Grid::new(file.start, file.step, file.samples.len())?;
    let (freq_grid, reversed) = Spectrum::layout(&file.params, &time_grid);
    let stated = Grid {
        start: file.omega_start,
        step: file.omega_step,
        count: file.samples.len(),
    };
    if !freq_grid.approx_eq(&stated) {
        return Err(SaftError::GridMismatch(format!(
            "stated frequency grid {stated:?} differs from the induced grid {freq_grid:?}"
        )));
    }
    let samples = complexes(&file.samples);
    if let Some(index) = samples.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(SaftError::NonFinite { index });
    }
    Ok(Spectrum {
        params: file.params,
        freq_grid,
        time_grid,
        mode: file.mode,
        reversed,
        samples,
    })
}

pub fn tf_to_json(m: &TFMatrix) -> String {
    serde_json::to_string(m).expect("tf matrix serializes")
}

pub fn tf_from_json(text: &str) -> Result<TFMatrix> {
    let m: TFMatrix = serde_json::from_str(text)?;
    if m.values.len() != m.x_grid.count * m.omega_grid.count {
        return Err(SaftError::Format(format!(
            "{} values for a {} x {} lattice",
            m.values.len(),
            m.x_grid.count,
            m.omega_grid.count
        )));
    }
    Ok(m)
}

pub fn signal_to_csv(f: &Signal) -> String {
    let mut out = String::from("t,re,im\n");
    for (t, z) in f.grid.nodes().iter().zip(&f.samples) {
        out.push_str(&format!("{t},{},{}\n", z.re, z.im));
    }
    out
}

/// Parses `t,re,im` rows; a leading non-numeric row is taken as a header.
pub fn signal_from_csv(text: &str, mode: Mode) -> Result<Signal> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut rows: Vec<[f64; 3]> = Vec::new();
    for (i, rec) in reader.records().enumerate() {
        let rec = rec?;
        if rec.len() != 3 {
            return Err(SaftError::Format(format!("row {i}: expected 3 columns, found {}", rec.len())));
        }
        let parsed: std::result::Result<Vec<f64>, _> = rec.iter().map(str::parse::<f64>).collect();
        match parsed {
            Ok(v) => rows.push([v[0], v[1], v[2]]),
            Err(_) if i == 0 => continue,
            Err(e) => return Err(SaftError::Format(format!("row {i}: {e}"))),
        }
    }
    if rows.len() < 2 {
        return Err(SaftError::Format("need at least two samples".into()));
    }
    let start = rows[0][0];
    let step = rows[1][0] - rows[0][0];
    let grid = Grid::new(start, step, rows.len())?;
    for (n, r) in rows.iter().enumerate() {
        if (r[0] - grid.node(n)).abs() > 1e-9 * step.max(grid.node(n).abs()) {
            return Err(SaftError::InvalidGrid(format!("t is not uniform at row {n}")));
        }
    }
    Signal::new(grid, mode, rows.iter().map(|r| Complex64::new(r[1], r[2])).collect())
}

/// Built-in inputs on `[-8, 8)` with `size` nodes.
///
/// `gaussian` is `e^{-pi t^2}`; `indicator` and `chirped_indicator` are the
/// compact `[-1/2, 1/2)` box, the latter multiplied by `e^{-pi i (a/b) t^2}`;
/// `mixture` is one seeded Gaussian mixture.
pub fn builtin(name: &str, params: &SaftParams, size: usize, seed: u64) -> Result<Signal> {
    let grid = Grid::window(BUILTIN_WINDOW.0, BUILTIN_WINDOW.1, size)?;
    let chi = indicator(-0.5, 0.5);
    match name {
        "gaussian" => sample(|t| gaussian(t).into(), grid, Mode::Cyclic),
        "indicator" => sample(|t| chi(t).into(), grid, Mode::Compact),
        "chirped_indicator" => {
            let k = params.chirp_rate();
            sample(|t| Complex64::cis(-PI * k * t * t) * chi(t), grid, Mode::Compact)
        }
        "mixture" => Ok(gaussian_mixture(grid, Mode::Cyclic, &mut rng(seed))),
        _ => Err(SaftError::InvalidArgument(format!(
            "unknown builtin '{name}' (gaussian, indicator, chirped_indicator, mixture)"
        ))),
    }
}

/// Reads a signal from `builtin:NAME`, a `.csv` file or a JSON file.
pub fn load_signal(src: &str, params: &SaftParams, size: usize, seed: u64) -> Result<Signal> {
    if let Some(name) = src.strip_prefix("builtin:") {
        return builtin(name, params, size, seed);
    }
    let text = std::fs::read_to_string(src)?;
    if Path::new(src).extension().is_some_and(|e| e.eq_ignore_ascii_case("csv")) {
        signal_from_csv(&text, Mode::Cyclic)
    } else {
        signal_from_json(&text)
    }
}

pub fn load_spectrum(src: &str) -> Result<Spectrum> {
    spectrum_from_json(&std::fs::read_to_string(src)?)
}

/// Writes `text` to `out`, or to stdout when `out` is `None` or `-`.
pub fn emit(out: Option<&str>, text: &str) -> Result<()> {
    match out {
        None | Some("-") => {
            use std::io::Write;
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            if !text.ends_with('\n') {
                stdout.write_all(b"\n")?;
            }
            Ok(())
        }
        Some(path) => Ok(std::fs::write(path, text)?),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::saft;

    #[test]
    fn signal_json_round_trip() {
        let f = builtin("mixture", &SaftParams::fourier(), 64, 3).unwrap();
        let back = signal_from_json(&signal_to_json(&f)).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn signal_json_shape() {
        let f = builtin("indicator", &SaftParams::fourier(), 4, 0).unwrap();
        let v: serde_json::Value = serde_json::from_str(&signal_to_json(&f)).unwrap();
        assert_eq!(v["mode"], "compact");
        assert_eq!(v["start"], -8.0);
        assert_eq!(v["samples"].as_array().unwrap().len(), 4);
        assert_eq!(v["samples"][0].as_array().unwrap().len(), 2);
    }

    #[test]
    fn spectrum_round_trip_with_negative_b() {
        let p = SaftParams::new(1.0, -2.0, 0.0, 1.0, 0.2, 0.1).unwrap();
        let f = builtin("gaussian", &p, 32, 0).unwrap();
        let s = saft(&p, &f);
        let back = spectrum_from_json(&spectrum_to_json(&s)).unwrap();
        assert_eq!(back, s);
        assert!(back.reversed);
    }

    #[test]
    fn csv_round_trip_and_header() {
        let f = builtin("gaussian", &SaftParams::fourier(), 16, 0).unwrap();
        let text = signal_to_csv(&f);
        let back = signal_from_csv(&text, Mode::Cyclic).unwrap();
        assert_eq!(back.grid.count, 16);
        assert!(crate::grid::max_abs_diff(&back.samples, &f.samples) < 1e-15);
        let no_header: String = text.lines().skip(1).map(|l| format!("{l}\n")).collect();
        assert_eq!(signal_from_csv(&no_header, Mode::Cyclic).unwrap(), back);
    }

    #[test]
    fn csv_rejects_nonuniform_t() {
        assert!(signal_from_csv("0,1,0\n1,1,0\n3,1,0\n", Mode::Cyclic).is_err());
    }

    #[test]
    fn unknown_builtin() {
        assert!(builtin("square", &SaftParams::fourier(), 16, 0).is_err());
    }
}
