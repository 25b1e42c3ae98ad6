//! Columnar CSV data for plotting.

use serde::{Deserialize, Serialize};

use crate::engine::{heat_evolve, HeatMethod};
use crate::error::{Result, SaftError};
use crate::grid::{Signal, Spectrum};
use crate::multipliers::{lp_project, LpBank};
use crate::params::SaftParams;
use crate::timefreq::TFMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PlotKind {
    SpectrumMagnitude,
    TfMagnitude,
    LpBlocks,
    HeatSnapshots,
}

impl std::str::FromStr for PlotKind {
    type Err = SaftError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "spectrum_magnitude" => Ok(PlotKind::SpectrumMagnitude),
            "tf_magnitude" => Ok(PlotKind::TfMagnitude),
            "lp_blocks" => Ok(PlotKind::LpBlocks),
            "heat_snapshots" => Ok(PlotKind::HeatSnapshots),
            _ => Err(SaftError::InvalidArgument(format!(
                "plot kind must be spectrum_magnitude, tf_magnitude, lp_blocks or heat_snapshots, got '{s}'"
            ))),
        }
    }
}

/// Header row for `kind`; block and snapshot columns are named from `labels`.
pub fn header(kind: PlotKind, labels: &[String]) -> String {
    let mut cols: Vec<String> = match kind {
        PlotKind::SpectrumMagnitude => vec!["omega".into(), "abs".into(), "re".into(), "im".into()],
        PlotKind::TfMagnitude => vec!["x".into(), "omega".into(), "abs".into()],
        PlotKind::LpBlocks | PlotKind::HeatSnapshots => vec!["t".into()],
    };
    cols.extend(labels.iter().cloned());
    cols.join(",") + "\n"
}

pub fn spectrum_magnitude(s: &Spectrum) -> String {
    let mut out = header(PlotKind::SpectrumMagnitude, &[]);
    for (j, z) in s.samples.iter().enumerate() {
        out.push_str(&format!("{},{},{},{}\n", s.omega(j), z.norm(), z.re, z.im));
    }
    out
}

pub fn tf_magnitude(m: &TFMatrix) -> String {
    let mut out = header(PlotKind::TfMagnitude, &[]);
    for i in 0..m.nx() {
        for k in 0..m.nw() {
            out.push_str(&format!("{},{},{}\n", m.x_grid.node(i), m.omega_grid.node(k), m.get(i, k).norm()));
        }
    }
    out
}

fn columns(kind: PlotKind, f: &Signal, labels: &[String], cols: &[Signal]) -> String {
    let mut out = header(kind, labels);
    for (n, t) in f.grid.nodes().iter().enumerate() {
        out.push_str(&t.to_string());
        for c in cols {
            out.push_str(&format!(",{}", c.samples[n].norm()));
        }
        out.push('\n');
    }
    out
}

/// `|S_j f(t)|` per block, columns `j<J>`.
pub fn lp_blocks(params: &SaftParams, bank: &LpBank, f: &Signal) -> Result<String> {
    let blocks = lp_project(params, bank, f)?;
    let labels: Vec<String> = bank.js().map(|j| format!("j{j}")).collect();
    Ok(columns(PlotKind::LpBlocks, f, &labels, &blocks))
}

/// `|u(t, x)|` per time, columns `u<t>`; `t = 0` gives `g` itself.
pub fn heat_snapshots(params: &SaftParams, g: &Signal, times: &[f64], method: HeatMethod) -> Result<String> {
    let snaps = times
        .iter()
        .map(|&t| if t == 0.0 { Ok(g.clone()) } else { heat_evolve(params, g, t, method) })
        .collect::<Result<Vec<_>>>()?;
    let labels: Vec<String> = times.iter().map(|t| format!("u{t}")).collect();
    Ok(columns(PlotKind::HeatSnapshots, g, &labels, &snaps))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::saft;
    use crate::io::builtin;

    #[test]
    fn heat_snapshot_columns() {
        let p = SaftParams::fourier();
        let g = builtin("gaussian", &p, 64, 0).unwrap();
        let csv = heat_snapshots(&p, &g, &[0.0, 0.05, 0.2], HeatMethod::Multiplier).unwrap();
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), "t,u0,u0.05,u0.2");
        assert_eq!(csv.lines().count(), 65);
        assert!(csv.lines().skip(1).all(|l| l.split(',').count() == 4));
    }

    #[test]
    fn sinc_profile() {
        let p = SaftParams::fourier();
        let f = builtin("chirped_indicator", &p, 512, 0).unwrap();
        let csv = spectrum_magnitude(&saft(&p, &f));
        let peak = csv
            .lines()
            .skip(1)
            .map(|l| l.split(',').nth(1).unwrap().parse::<f64>().unwrap())
            .fold(0.0, f64::max);
        assert!((peak - 1.0).abs() < 1e-12);
    }

    #[test]
    fn empty_labels_give_bare_header() {
        assert_eq!(header(PlotKind::HeatSnapshots, &[]), "t\n");
        assert_eq!(header(PlotKind::SpectrumMagnitude, &[]), "omega,abs,re,im\n");
    }
}
