//! Wall-clock timings of the fast transform against the direct oracle.

use std::time::Instant;

use serde::Serialize;

use crate::engine::{saft_fast, saft_oracle, SaftPlan};
use crate::error::{Result, SaftError};
use crate::families::{family, FamilyKind};
use crate::grid::{Grid, Mode};
use crate::params::SaftParams;

/// The oracle is skipped above this size.
pub const ORACLE_MAX: usize = 4096;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Timing {
    pub median_s: f64,
    pub min_s: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub n: usize,
    pub fast: Timing,
    pub oracle: Option<Timing>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchTable {
    pub params: SaftParams,
    pub rows: Vec<BenchRow>,
}

impl BenchTable {
    /// Ratios of consecutive minimum fast timings.
    pub fn fast_growth(&self) -> Vec<f64> {
        self.rows.windows(2).map(|w| w[1].fast.min_s / w[0].fast.min_s).collect()
    }

    pub fn oracle_growth(&self) -> Vec<f64> {
        self.rows
            .windows(2)
            .filter_map(|w| Some(w[1].oracle.as_ref()?.min_s / w[0].oracle.as_ref()?.min_s))
            .collect()
    }

    pub fn render_text(&self) -> String {
        let mut out = String::from("N        fast_median   fast_min      oracle_median oracle_min\n");
        for r in &self.rows {
            let (om, on) = match &r.oracle {
                Some(t) => (format!("{:.3e}", t.median_s), format!("{:.3e}", t.min_s)),
                None => ("-".into(), "-".into()),
            };
            out.push_str(&format!(
                "{:<8} {:<13.3e} {:<13.3e} {:<13} {}\n",
                r.n, r.fast.median_s, r.fast.min_s, om, on
            ));
        }
        out
    }
}

fn timing(mut samples: Vec<f64>) -> Timing {
    samples.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Timing {
        median_s: samples[samples.len() / 2],
        min_s: samples[0],
    }
}

/// Calls per timed sample so one sample lasts at least `budget` seconds.
fn batch_size(budget: f64, op: &mut dyn FnMut()) -> usize {
    op();
    let t = Instant::now();
    op();
    let once = t.elapsed().as_secs_f64().max(1e-9);
    ((budget / once).ceil() as usize).max(1)
}

fn sample_once(batch: usize, op: &mut dyn FnMut()) -> f64 {
    let t = Instant::now();
    for _ in 0..batch {
        op();
    }
    t.elapsed().as_secs_f64() / batch as f64
}

/// Times each op over `rounds` rounds, visiting every op once per round so slow
/// drift in machine speed affects all sizes alike.
fn interleaved(ops: &mut [Box<dyn FnMut() + '_>], rounds: usize, budget: f64) -> Vec<Timing> {
    let batches: Vec<usize> = ops.iter_mut().map(|op| batch_size(budget, op.as_mut())).collect();
    let mut samples = vec![Vec::with_capacity(rounds); ops.len()];
    for _ in 0..rounds {
        for (i, op) in ops.iter_mut().enumerate() {
            samples[i].push(sample_once(batches[i], op.as_mut()));
        }
    }
    samples.into_iter().map(timing).collect()
}

pub fn cmd_bench(params: &SaftParams, sizes: &[usize]) -> Result<BenchTable> {
    if sizes.is_empty() || sizes.windows(2).any(|w| w[1] <= w[0]) {
        return Err(SaftError::InvalidArgument("bench sizes must be increasing".into()));
    }
    let inputs = sizes
        .iter()
        .map(|&n| {
            let grid = Grid::window(-8.0, 8.0, n)?;
            let f = family(FamilyKind::GaussianMixture, grid, Mode::Cyclic, 1, 0).remove(0);
            Ok((SaftPlan::new(*params, grid), f))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut fast_ops: Vec<Box<dyn FnMut() + '_>> = inputs
        .iter()
        .map(|(plan, f)| {
            Box::new(move || {
                std::hint::black_box(saft_fast(plan, f).expect("grid matches"));
            }) as Box<dyn FnMut()>
        })
        .collect();
    let fast = interleaved(&mut fast_ops, 31, 1e-2);

    let oracle_inputs: Vec<_> = inputs.iter().filter(|(p, _)| p.len() <= ORACLE_MAX).collect();
    let mut oracle_ops: Vec<Box<dyn FnMut() + '_>> = oracle_inputs
        .iter()
        .map(|(_, f)| {
            Box::new(move || {
                std::hint::black_box(saft_oracle(params, f));
            }) as Box<dyn FnMut()>
        })
        .collect();
    let mut oracle = interleaved(&mut oracle_ops, 5, 0.0).into_iter();

    let rows = sizes
        .iter()
        .zip(fast)
        .map(|(&n, fast)| BenchRow {
            n,
            fast,
            oracle: if n <= ORACLE_MAX { oracle.next() } else { None },
        })
        .collect();
    Ok(BenchTable { params: *params, rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_shape() {
        let t = cmd_bench(&SaftParams::fourier(), &[64, 128]).unwrap();
        assert_eq!(t.rows.len(), 2);
        assert_eq!(t.fast_growth().len(), 1);
        assert_eq!(t.oracle_growth().len(), 1);
        assert!(t.rows.iter().all(|r| r.fast.min_s <= r.fast.median_s));
    }

    #[test]
    fn rejects_unsorted_sizes() {
        assert!(cmd_bench(&SaftParams::fourier(), &[128, 64]).is_err());
    }
}
