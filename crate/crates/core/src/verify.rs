//! The identity battery behind `saft verify` and the acceptance suite.
//!
//! Every check returns one [`CheckResult`]; ids `C01`..`C25` follow the
//! acceptance list. Tier 1 runs on `[-8, 8)` with `size` nodes in cyclic mode;
//! tier 2 sweeps `N` in {512, 1024, 2048}; tier 3 probes stability.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::aconv::{aconv_fast, approx_identity_run, mult_functional, young_check};
use crate::bench::{cmd_bench, BenchTable};
use crate::engine::{
    apply_b, b_symbol, eval_sinc_reference, heat_evolve, isaft, saft_fast, saft_oracle, saft_oracle_at, BMethod,
    HeatMethod, SaftPlan, SincShape,
};
use crate::error::{Result, SaftError};
use crate::families::{family, FamilyKind};
use crate::grid::{gaussian, indicator, l2, l2_diff, lr_norm, max_abs, max_abs_diff, sample, sample_real, Grid, Mode, Signal};
use crate::multipliers::{
    cover, hormander_scale_check, hormander_validate, lp_project, lp_reconstruct, lp_ratio_probe, multiplier_norm_probe,
    square_function, wendel_commute_check, LpBank, SymbolSpec,
};
use crate::ops::{a_translate, a_translate_compose_check, chirp_conjugation_deviation};
use crate::params::{SaftParams, WeightSpec};
use crate::timefreq::{
    a_covariance_check, a_mod_norm, chirp_covariance_check, mod_norm, saft_stft_identity_check, weight_transport,
    window, WindowKind,
};

pub const SIZES: [usize; 4] = [256, 512, 1024, 2048];
pub const TIER2_SIZES: [usize; 3] = [512, 1024, 2048];
/// Errors below this level count as converged when judging monotone decrease.
pub const ROUNDING_FLOOR: f64 = 1e-11;

/// Ratio band of Gaussian to raised-cosine `M^{1,1}` norms (pinned from the
/// first recorded run, see the acceptance notes in the README).
pub const WINDOW_BAND: (f64, f64) = (0.7, 1.05);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Detail {
    pub key: String,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub check_id: String,
    pub name: String,
    /// The identity or theorem the check exercises.
    pub anchor: String,
    pub tier: u8,
    pub tolerance: f64,
    pub observed: f64,
    pub pass: bool,
    pub status: Status,
    pub details: Vec<Detail>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub params: SaftParams,
    pub size: usize,
    pub seed: u64,
    pub checks: Vec<CheckResult>,
    pub summary: Summary,
}

impl VerifyReport {
    pub fn all_pass(&self) -> bool {
        self.summary.failed == 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn render_text(&self) -> String {
        let mut out = format!("verify params={} size={} seed={}\n", self.params, self.size, self.seed);
        for c in &self.checks {
            let tag = match c.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Skipped => "SKIP",
            };
            out.push_str(&format!(
                "{} {} [{}] observed={:.3e} tol={:.3e}  {}\n",
                tag, c.check_id, c.tier, c.observed, c.tolerance, c.name
            ));
        }
        out.push_str(&format!(
            "{} passed, {} failed, {} skipped\n",
            self.summary.passed, self.summary.failed, self.summary.skipped
        ));
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyOptions {
    pub include_bench: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { include_bench: true }
    }
}

struct Check {
    id: &'static str,
    name: &'static str,
    anchor: &'static str,
    tier: u8,
    tolerance: f64,
    observed: f64,
    pass: bool,
    details: Vec<Detail>,
}

impl Check {
    fn new(id: &'static str, tier: u8, name: &'static str, anchor: &'static str, tolerance: f64) -> Self {
        Check {
            id,
            name,
            anchor,
            tier,
            tolerance,
            observed: 0.0,
            pass: true,
            details: Vec::new(),
        }
    }

    fn detail(&mut self, key: impl Into<String>, value: f64) -> &mut Self {
        self.details.push(Detail { key: key.into(), value });
        self
    }

    /// Records `value` under `key`, raises `observed` to it and fails on `value > tol`.
    fn bound(&mut self, key: impl Into<String>, value: f64, tol: f64) -> &mut Self {
        self.detail(key, value);
        self.observed = self.observed.max(value);
        if value.is_nan() || value > tol {
            self.pass = false;
        }
        self
    }

    /// Like `bound` but leaves `observed` alone (supplementary checks).
    fn gate(&mut self, key: impl Into<String>, value: f64, tol: f64) -> &mut Self {
        self.detail(key, value);
        if value.is_nan() || value > tol {
            self.pass = false;
        }
        self
    }

    fn require(&mut self, key: impl Into<String>, ok: bool) -> &mut Self {
        self.detail(key, if ok { 1.0 } else { 0.0 });
        if !ok {
            self.pass = false;
        }
        self
    }

    fn finish(self) -> CheckResult {
        CheckResult {
            check_id: self.id.to_string(),
            name: self.name.to_string(),
            anchor: self.anchor.to_string(),
            tier: self.tier,
            tolerance: self.tolerance,
            observed: self.observed,
            pass: self.pass,
            status: if self.pass { Status::Pass } else { Status::Fail },
            details: self.details,
        }
    }
}

fn failed(id: &'static str, tier: u8, name: &'static str, anchor: &'static str, tol: f64, e: SaftError) -> CheckResult {
    let mut c = Check::new(id, tier, name, anchor, tol).finish();
    c.pass = false;
    c.status = Status::Fail;
    c.observed = f64::NAN;
    c.name = format!("{name} (error: {e})");
    c
}

fn run(
    id: &'static str,
    tier: u8,
    name: &'static str,
    anchor: &'static str,
    tol: f64,
    body: impl FnOnce(&mut Check) -> Result<()>,
) -> CheckResult {
    let mut c = Check::new(id, tier, name, anchor, tol);
    match body(&mut c) {
        Ok(()) => c.finish(),
        Err(e) => failed(id, tier, name, anchor, tol, e),
    }
}

/// True when each step decreases, treating pairs below the rounding floor as converged.
pub fn decreasing(errs: &[f64], floor: f64) -> bool {
    errs.windows(2).all(|w| w[1] <= w[0] || (w[0] <= floor && w[1] <= floor))
}

/// The standard tier-1 grid `[-8, 8)`.
pub fn standard_grid(size: usize) -> Result<Grid> {
    Grid::window(-8.0, 8.0, size)
}

/// The three parameter sets of the acceptance suite.
pub fn acceptance_params() -> Vec<(&'static str, SaftParams)> {
    vec![
        ("fourier", SaftParams::fourier()),
        ("frft(pi/4)", "frft:pi/4".parse().expect("valid")),
        ("(1,2,-2,-3,0.3,-0.2)", "1,2,-2,-3,0.3,-0.2".parse().expect("valid")),
    ]
}

/// Runs the battery.
pub fn cmd_verify(params: &SaftParams, size: usize, seed: u64, opts: VerifyOptions) -> Result<VerifyReport> {
    if !SIZES.contains(&size) {
        return Err(SaftError::InvalidArgument(format!("size must be one of {SIZES:?}, got {size}")));
    }
    let p = *params;
    let grid = standard_grid(size)?;
    let fam = family(FamilyKind::GaussianMixture, grid, Mode::Cyclic, 3, seed);
    let (f, g, u) = (&fam[0], &fam[1], &fam[2]);
    let plan = SaftPlan::new(p, grid);

    let mut checks = vec![
        c01(&p, &plan, &fam),
        c02(&plan, &fam),
        c03(&plan, &fam),
        c04(&p, f),
        c05(&p, f),
        c06(&p, &plan, f),
        c07(&p, &plan, f, g),
        c08(&p, &plan, f, g),
        c09(&p, f, g),
        c10(&p, u, f),
        c11(&p, &plan, f),
        c12(&p, f, g),
        c13(size, seed),
        c14(&p, &plan, &fam),
        c15(&p, f),
        c16(&p),
        c17(&p),
        c18(&p),
        c19(&p, seed),
        c20(&p),
        c21(seed),
        c22(&p, seed),
        c23(&p, seed),
        c24(&p, seed),
    ];
    checks.push(if opts.include_bench {
        c25(&p)
    } else {
        let mut c = Check::new("C25", 3, "bench: fast vs oracle growth", "complexity signature", 2.5).finish();
        c.status = Status::Skipped;
        c
    });
    let summary = Summary {
        passed: checks.iter().filter(|c| c.status == Status::Pass).count(),
        failed: checks.iter().filter(|c| c.status == Status::Fail).count(),
        skipped: checks.iter().filter(|c| c.status == Status::Skipped).count(),
    };
    Ok(VerifyReport {
        params: p,
        size,
        seed,
        checks,
        summary,
    })
}

fn c01(p: &SaftParams, plan: &SaftPlan, fam: &[Signal]) -> CheckResult {
    run("C01", 1, "saft_fast vs saft_oracle", "defining Riemann sum", 1e-10, |c| {
        for (i, f) in fam.iter().enumerate() {
            let a = saft_fast(plan, f)?;
            let b = saft_oracle(p, f);
            c.bound(format!("signal{i}"), max_abs_diff(&a.samples, &b.samples) / f.norm(2.0), 1e-10);
        }
        Ok(())
    })
}

fn c02(plan: &SaftPlan, fam: &[Signal]) -> CheckResult {
    run("C02", 1, "isaft round trip", "exact discrete inverse", 1e-10, |c| {
        for (i, f) in fam.iter().enumerate() {
            let back = isaft(plan, &saft_fast(plan, f)?)?;
            c.bound(format!("signal{i}"), max_abs_diff(&back.samples, &f.samples) / f.max_abs(), 1e-10);
        }
        Ok(())
    })
}

fn c03(plan: &SaftPlan, fam: &[Signal]) -> CheckResult {
    run("C03", 1, "discrete Plancherel", "L2 unitarity", 1e-10, |c| {
        for (i, f) in fam.iter().enumerate() {
            let s = saft_fast(plan, f)?;
            let n = f.norm(2.0);
            c.bound(format!("signal{i}"), (s.norm(2.0) - n).abs() / n, 1e-10);
        }
        Ok(())
    })
}

fn c04(p: &SaftParams, f: &Signal) -> CheckResult {
    run("C04", 1, "chirp conjugation of A-translation", "C T_s^A = e^{pi i (a/b) s^2} T_s C", 1e-12, |c| {
        let step = f.grid.step;
        let compact = f.clone().with_mode(Mode::Compact);
        let scale = f.max_abs();
        for m in [3i64, -17, 40] {
            let s = m as f64 * step;
            c.bound(format!("compact_s{m}"), chirp_conjugation_deviation(p, &compact, s)? / scale, 1e-12);
            c.bound(format!("cyclic_s{m}"), chirp_conjugation_deviation(p, f, s)? / scale, 1e-12);
        }
        c.detail("tail_mass", f.tail_mass());
        Ok(())
    })
}

fn c05(p: &SaftParams, f: &Signal) -> CheckResult {
    run("C05", 1, "projective composition of A-translations", "T_x^A T_y^A = e^{-2 pi i (a/b) x y} T_{x+y}^A", 1e-12, |c| {
        let step = f.grid.step;
        for (x, y) in [(5i64, -12i64), (33, 47), (-100, 7)] {
            let d = a_translate_compose_check(p, x as f64 * step, y as f64 * step, f)?;
            c.bound(format!("x{x}_y{y}"), d / f.max_abs(), 1e-12);
        }
        Ok(())
    })
}

fn c06(p: &SaftParams, plan: &SaftPlan, f: &Signal) -> CheckResult {
    run("C06", 1, "shift/modulation exchange", "F_A T_s^A = M_{-s}^A F_A", 1e-9, |c| {
        let spec = saft_fast(plan, f)?;
        let (a, b, pp) = (p.a(), p.b(), p.p());
        for m in [7i64, -30] {
            let s = m as f64 * f.grid.step;
            let lhs = saft_fast(plan, &a_translate(f, p, s)?)?;
            let rhs: Vec<Complex64> = spec
                .samples
                .iter()
                .enumerate()
                .map(|(j, v)| {
                    let w = spec.omega(j);
                    v * Complex64::cis(PI / b * (a * s * s + 2.0 * pp * s - 2.0 * s * w))
                })
                .collect();
            c.bound(format!("s{m}"), max_abs_diff(&lhs.samples, &rhs) / max_abs(&rhs), 1e-9);
        }
        Ok(())
    })
}

fn c07(p: &SaftParams, plan: &SaftPlan, f: &Signal, g: &Signal) -> CheckResult {
    run("C07", 1, "cyclic A-convolution theorem", "F_A(f * g) = conj(eta) F_A f F_A g", 1e-9, |c| {
        let h = aconv_fast(p, f, g, Mode::Cyclic)?;
        let (sh, sf, sg) = (saft_fast(plan, &h)?, saft_fast(plan, f)?, saft_fast(plan, g)?);
        let rhs: Vec<Complex64> = (0..sh.samples.len())
            .map(|j| p.eta(sh.omega(j)).conj() * sf.samples[j] * sg.samples[j])
            .collect();
        c.bound("max_rel", max_abs_diff(&sh.samples, &rhs) / max_abs(&rhs), 1e-9);
        Ok(())
    })
}

fn c08(p: &SaftParams, plan: &SaftPlan, f: &Signal, g: &Signal) -> CheckResult {
    run("C08", 1, "multiplicative functional", "h(f * g) = h(f) h(g)", 1e-9, |c| {
        let (sf, sg) = (saft_fast(plan, f)?, saft_fast(plan, g)?);
        let h = aconv_fast(p, f, g, Mode::Cyclic)?;
        let mut order: Vec<usize> = (0..sf.samples.len()).collect();
        order.sort_by(|&i, &j| {
            let a = (sf.samples[i] * sg.samples[i]).norm();
            let b = (sf.samples[j] * sg.samples[j]).norm();
            b.partial_cmp(&a).unwrap().then(i.cmp(&j))
        });
        for (rank, &j) in order.iter().take(3).enumerate() {
            let w0 = sf.omega(j);
            let lhs = mult_functional(p, w0, &h)?;
            let rhs = mult_functional(p, w0, f)? * mult_functional(p, w0, g)?;
            c.detail(format!("omega0_{rank}"), w0);
            c.bound(format!("rel_{rank}"), (lhs - rhs).norm() / rhs.norm(), 1e-9);
        }
        Ok(())
    })
}

fn c09(p: &SaftParams, f: &Signal, g: &Signal) -> CheckResult {
    run("C09", 1, "Young inequality with constant |b|^{-1/2}", "exact discrete Young", 1e-12, |c| {
        let fc = f.clone().with_mode(Mode::Compact);
        let gc = g.clone().with_mode(Mode::Compact);
        let mut worst = f64::INFINITY;
        for (r, s) in [(1.0, 1.0), (2.0, 1.0), (4.0 / 3.0, 4.0 / 3.0), (1.0, 2.0), (1.5, 1.2)] {
            let y = young_check(p, &fc, &gc, r, s)?;
            let margin = (y.rhs - y.lhs) / y.rhs;
            c.detail(format!("margin_r{r:.3}_s{s:.3}"), margin);
            worst = worst.min(margin);
            if !y.pass {
                c.pass = false;
            }
        }
        c.observed = -worst;
        if worst < -1e-12 {
            c.pass = false;
        }
        Ok(())
    })
}

fn c10(p: &SaftParams, u: &Signal, f: &Signal) -> CheckResult {
    run("C10", 1, "Wendel-direction commutation", "u * T_x^A f = T_x^A (u * f)", 1e-9, |c| {
        for m in [3i64, -41] {
            let d = wendel_commute_check(p, u, m as f64 * f.grid.step, f)?;
            c.bound(format!("x{m}"), d.relative(), 1e-9);
        }
        Ok(())
    })
}

fn c11(p: &SaftParams, plan: &SaftPlan, f: &Signal) -> CheckResult {
    run("C11", 1, "operator B: symbol and A-translation commutation", "F_A(Bf) = 2 pi i (w-p)/b F_A f; B T^A = T^A B", 1e-9, |c| {
        let spec = saft_fast(plan, f)?;
        let bf = apply_b(p, f, BMethod::Spectral)?;
        let lhs = saft_fast(plan, &bf)?;
        let rhs: Vec<Complex64> = spec
            .samples
            .iter()
            .enumerate()
            .map(|(j, v)| v * b_symbol(p, spec.omega(j)))
            .collect();
        c.bound("symbol_rel", max_abs_diff(&lhs.samples, &rhs) / max_abs(&rhs), 1e-10);
        let x = 9.0 * f.grid.step;
        let a1 = apply_b(p, &a_translate(f, p, x)?, BMethod::Spectral)?;
        let a2 = a_translate(&bf, p, x)?;
        c.bound("commutation_rel", max_abs_diff(&a1.samples, &a2.samples) / bf.max_abs(), 1e-9);

        // The derivative of F_A f in omega, by central differences of the oracle.
        let idx: Vec<usize> = {
            let mut o: Vec<usize> = (0..spec.samples.len()).collect();
            o.sort_by(|&i, &j| spec.samples[j].norm().partial_cmp(&spec.samples[i].norm()).unwrap().then(i.cmp(&j)));
            o.into_iter().take(6).collect()
        };
        let tf = f.map(|t, z| z * t);
        let (a, b, d, om) = (p.a(), p.b(), p.d(), p.omega());
        let h = 1e-4 * b.abs();
        let mut worst: f64 = 0.0;
        let mut scale: f64 = 0.0;
        for &j in &idx {
            let w = spec.omega(j);
            let v = saft_oracle_at(p, f, &[w - h, w, w + h]);
            let ftf = saft_oracle_at(p, &tf, &[w])[0];
            let lhs = (v[2] - v[0]) / (2.0 * h) + Complex64::new(0.0, 2.0 * PI * a / b * w) * v[1];
            let rhs = Complex64::new(0.0, 2.0 * PI / b) * ((a * w + d * w + om) * v[1] - ftf);
            worst = worst.max((lhs - rhs).norm());
            scale = scale.max(rhs.norm());
        }
        c.gate("omega_derivative_fd_rel", worst / scale, 1e-5);
        Ok(())
    })
}

fn c12(p: &SaftParams, f: &Signal, g: &Signal) -> CheckResult {
    run("C12", 1, "chirp-STFT covariance and A-covariance", "V_{C_s g} C_s f; V_g(T^A M^A f)", 1e-9, |c| {
        let grid = f.grid;
        let w = window(WindowKind::Gaussian, grid, Mode::Cyclic);
        let l = grid.length();
        // Smallest chirp rate with s L step integral on this grid.
        let s = 1.0 / (l * grid.step);
        for (k, ss) in [s, -2.0 * s].into_iter().enumerate() {
            c.detail(format!("s{k}"), ss);
            c.bound(format!("chirp_cov_{k}"), chirp_covariance_check(f, &w, ss)?.relative(), 1e-9);
        }
        c.bound("chirp_cov_gwin", chirp_covariance_check(f, g, 2.0 * s)?.relative(), 1e-9);
        let xi = 5.0 * grid.step;
        let eta = p.a() * xi + 3.0 * p.b() / l;
        c.bound("a_cov", a_covariance_check(p, f, &w, xi, eta)?.relative(), 1e-9);
        let xi = -12.0 * grid.step;
        let eta = p.a() * xi - 7.0 * p.b() / l;
        c.bound("a_cov_2", a_covariance_check(p, f, g, xi, eta)?.relative(), 1e-9);
        Ok(())
    })
}

/// The integer parameter sets whose lattice map is exact on self-dual grids.
pub fn lattice_params() -> [SaftParams; 2] {
    [
        SaftParams::fourier(),
        SaftParams::new(1.0, 1.0, 0.0, 1.0, 0.0, 0.0).expect("valid"),
    ]
}

fn c13(size: usize, seed: u64) -> CheckResult {
    run("C13", 1, "SAFT-STFT magnitude identity", "|V_{F g} F f(x,w)| = |V_g f(dx-bw, aw-cx)|", 1e-6, |c| {
        let grid = Grid::self_dual(size, 1.0)?;
        let fam = family(FamilyKind::GaussianMixture, grid, Mode::Cyclic, 2, seed ^ 0x13);
        let w = window(WindowKind::Gaussian, grid, Mode::Cyclic);
        for (k, q) in lattice_params().iter().enumerate() {
            c.bound(format!("set{k}_window"), saft_stft_identity_check(q, &fam[0], &w)?.relative(), 1e-6);
            c.bound(format!("set{k}_mixture"), saft_stft_identity_check(q, &fam[0], &fam[1])?.relative(), 1e-6);
        }
        Ok(())
    })
}

fn c14(p: &SaftParams, plan: &SaftPlan, fam: &[Signal]) -> CheckResult {
    run("C14", 1, "Littlewood-Paley bank", "orthogonality, reconstruction, r=2 isometry", 1e-9, |c| {
        let bank = LpBank::for_grid(plan.freq_grid())?;
        c.detail("j_min", bank.j_min as f64).detail("j_max", bank.j_max as f64);
        for (i, f) in fam.iter().enumerate() {
            let (fc, leak) = cover(p, &bank, f)?;
            c.detail(format!("leak{i}"), leak);
            let blocks = lp_project(p, &bank, &fc)?;
            let e = fc.norm(2.0).powi(2);
            let mut ortho: f64 = 0.0;
            for a in 0..blocks.len() {
                for b in a + 1..blocks.len() {
                    let ip: Complex64 = blocks[a]
                        .samples
                        .iter()
                        .zip(&blocks[b].samples)
                        .map(|(x, y)| x * y.conj())
                        .sum::<Complex64>()
                        * fc.grid.step;
                    ortho = ortho.max(ip.norm() / e);
                }
            }
            c.bound(format!("ortho{i}"), ortho, 1e-10);
            let sum = lp_reconstruct(&blocks)?;
            c.bound(format!("recon{i}"), max_abs_diff(&sum.samples, &fc.samples) / fc.max_abs(), 1e-9);
            let sq = square_function(&blocks)?;
            c.bound(format!("iso{i}"), (sq.norm(2.0) - fc.norm(2.0)).abs() / fc.norm(2.0), 1e-9);
        }
        Ok(())
    })
}

fn c15(p: &SaftParams, f: &Signal) -> CheckResult {
    run("C15", 1, "A-modulation norm scaling", "||f||_{M_A,m} = |b|^{1/s-1/2} ||C f||_{M,m_b}", 1e-9, |c| {
        let grid = f.grid;
        let w = window(WindowKind::Gaussian, grid, Mode::Cyclic);
        let k = p.chirp_rate();
        let cf = crate::ops::chirp(f, k);
        let cw = crate::ops::chirp(&w, k);
        for ell in [0.0, 1.0] {
            let m = WeightSpec::v_ell(ell);
            let mb = WeightSpec::m_b(m.clone(), p.b());
            for (r, s) in [(1.0, 1.0), (2.0, 2.0), (1.0, 2.0), (2.0, 1.0)] {
                let a = a_mod_norm(p, f, &w, r, s, &m)?;
                let b = mod_norm(&cf, &cw, r, s, &mb)? * p.b().abs().powf(1.0 / s - 0.5);
                c.bound(format!("l{ell}_r{r}_s{s}"), (a - b).abs() / a, 1e-9);
            }
        }
        Ok(())
    })
}

fn chirped_indicator(p: &SaftParams, grid: Grid) -> Result<Signal> {
    let chi = indicator(-0.5, 0.5);
    let k = p.chirp_rate();
    sample(|t| Complex64::cis(-PI * k * t * t) * chi(t), grid, Mode::Compact)
}

fn c16(p: &SaftParams) -> CheckResult {
    run("C16", 2, "chirped-indicator sinc formula", "F_A(C_{-a/b} chi) = eta/sqrt|b| sinc((w-p)/b)", 3e-2, |c| {
        let mut errs = Vec::new();
        for n in TIER2_SIZES {
            let grid = standard_grid(n)?;
            let f = chirped_indicator(p, grid)?;
            let s = saft_fast(&SaftPlan::new(*p, grid), &f)?;
            let err = s
                .samples
                .iter()
                .enumerate()
                .map(|(j, v)| (v - eval_sinc_reference(p, s.omega(j), SincShape::CenteredInterval)).norm())
                .fold(0.0, f64::max);
            c.detail(format!("N{n}"), err);
            errs.push(err);
        }
        c.detail("ratio_512_1024", errs[0] / errs[1]).detail("ratio_1024_2048", errs[1] / errs[2]);
        c.require("decreasing", decreasing(&errs, ROUNDING_FLOOR));
        c.bound("final", errs[2], 3e-2);
        Ok(())
    })
}

fn heat_input(grid: Grid) -> Result<Signal> {
    sample(
        |t| Complex64::new(gaussian(t - 0.7), 0.0) + Complex64::cis(1.1 * t) * 0.6 * gaussian((t + 1.4) / 0.8),
        grid,
        Mode::Cyclic,
    )
}

fn c17(p: &SaftParams) -> CheckResult {
    run("C17", 2, "heat multiplier vs kernel quadrature", "u = g *_A heat kernel", 1e-3, |c| {
        let mut errs = Vec::new();
        for n in TIER2_SIZES {
            let grid = Grid::window(-10.0, 10.0, n)?;
            let g = heat_input(grid)?;
            let a = heat_evolve(p, &g, 0.1, HeatMethod::Multiplier)?;
            let b = heat_evolve(p, &g, 0.1, HeatMethod::Kernel)?;
            let e = l2_diff(&a.samples, &b.samples) / l2(&b.samples);
            c.detail(format!("N{n}"), e);
            errs.push(e);
        }
        c.require("decreasing", decreasing(&errs, ROUNDING_FLOOR));
        c.bound("at_1024", errs[1], 1e-3);
        let grid = Grid::window(-10.0, 10.0, 1024)?;
        let g = heat_input(grid)?;
        let u = heat_evolve(p, &g, 1e-6, HeatMethod::Multiplier)?;
        c.bound("small_t_rel", l2_diff(&u.samples, &g.samples) / l2(&g.samples), 1e-3);
        Ok(())
    })
}

/// `(1 + cos(pi t / R)) / 2` on `|t| < R`.
pub fn raised_cosine(r: f64) -> impl Fn(f64) -> f64 {
    move |t| if t.abs() < r { 0.5 * (1.0 + (PI * t / r).cos()) } else { 0.0 }
}

pub const APPROX_EPS: [f64; 5] = [1.0, 0.5, 0.25, 0.125, 0.0625];

fn c18(p: &SaftParams) -> CheckResult {
    run("C18", 2, "approximate identity", "f *_A phi_eps -> f", 0.05, |c| {
        for n in TIER2_SIZES {
            let grid = standard_grid(n)?;
            let f = sample_real(raised_cosine(1.5), grid, Mode::Compact)?;
            let e = approx_identity_run(p, &f, &gaussian, &APPROX_EPS, 2.0)?;
            let nf = f.norm(2.0);
            for (eps, v) in APPROX_EPS.iter().zip(&e) {
                c.detail(format!("N{n}_eps{eps}"), v / nf);
            }
            let mono = e.windows(2).all(|w| w[1] <= w[0] * 1.05);
            if n == 2048 {
                c.require("monotone_2048", mono);
                c.bound("final_rel_2048", e[e.len() - 1] / nf, 0.05);
            } else {
                c.detail(format!("monotone_{n}"), if mono { 1.0 } else { 0.0 });
            }
        }
        Ok(())
    })
}

fn c19(p: &SaftParams, seed: u64) -> CheckResult {
    run("C19", 2, "Hausdorff-Young with constant |b|^{1/2-1/r}", "||F_A f||_{r'} <= |b|^{1/2-1/r} ||f||_r", 1.05, |c| {
        for n in TIER2_SIZES {
            let grid = standard_grid(n)?;
            let plan = SaftPlan::new(*p, grid);
            for (i, f) in family(FamilyKind::GaussianMixture, grid, Mode::Compact, 3, seed ^ 0x19)
                .iter()
                .enumerate()
            {
                let s = saft_fast(&plan, f)?;
                for r in [1.0, 4.0 / 3.0, 2.0] {
                    let rp = if r == 1.0 { f64::INFINITY } else { r / (r - 1.0) };
                    let lhs = s.norm(rp);
                    let rhs = p.b().abs().powf(0.5 - 1.0 / r) * lr_norm(f, r)?;
                    c.bound(format!("N{n}_f{i}_r{r:.3}"), lhs / rhs, 1.05);
                }
            }
        }
        Ok(())
    })
}

fn c20(p: &SaftParams) -> CheckResult {
    run("C20", 2, "Riemann-Lebesgue decay", "F_A f in C_0", 1.0, |c| {
        let mut tops = Vec::new();
        for n in TIER2_SIZES {
            let grid = standard_grid(n)?;
            let f = sample_real(indicator(-0.5, 0.5), grid, Mode::Compact)?;
            let s = saft_fast(&SaftPlan::new(*p, grid), &f)?;
            let wmax = s.freq_grid.start.abs().max(s.omega(n - 1).abs());
            let top = s
                .samples
                .iter()
                .enumerate()
                .filter(|(j, _)| s.omega(*j).abs() >= 0.9 * wmax)
                .map(|(_, v)| v.norm())
                .fold(0.0, f64::max);
            c.detail(format!("N{n}"), top);
            tops.push(top);
        }
        // Largest ratio of consecutive top-decile maxima; decay means < 1.
        c.observed = tops.windows(2).map(|w| w[1] / w[0]).fold(0.0, f64::max);
        c.require("decreasing", c.observed < 1.0);
        Ok(())
    })
}

fn c21(seed: u64) -> CheckResult {
    run("C21", 2, "weight transport v_ell -> w_ell", "||V_{Fg}Ff w_l|| = ||V_g f v_l||", 1e-2, |c| {
        let grid = Grid::self_dual(512, 1.0)?;
        let f = &family(FamilyKind::GaussianMixture, grid, Mode::Cyclic, 1, seed ^ 0x21)[0];
        let w = window(WindowKind::Gaussian, grid, Mode::Cyclic);
        for (k, q) in lattice_params().iter().enumerate() {
            for ell in [0.0, 1.0, 2.0] {
                let (lhs, rhs) = weight_transport(q, f, &w, ell, 2.0)?;
                c.bound(format!("set{k}_l{ell}"), (lhs - rhs).abs() / rhs, 1e-2);
            }
        }
        Ok(())
    })
}

/// `||f||_{M^{1,1}}` ratios between the Gaussian and raised-cosine windows.
pub fn window_ratios(p: &SaftParams, n: usize, seed: u64) -> Result<Vec<f64>> {
    let grid = standard_grid(n)?;
    let wg = window(WindowKind::Gaussian, grid, Mode::Cyclic);
    let wr = window(WindowKind::RaisedCosine, grid, Mode::Cyclic);
    family(FamilyKind::GaussianMixture, grid, Mode::Cyclic, 20, seed ^ 0x22)
        .iter()
        .map(|f| {
            let a = a_mod_norm(p, f, &wg, 1.0, 1.0, &WeightSpec::Unit)?;
            let b = a_mod_norm(p, f, &wr, 1.0, 1.0, &WeightSpec::Unit)?;
            Ok(a / b)
        })
        .collect()
}

fn c22(p: &SaftParams, seed: u64) -> CheckResult {
    run("C22", 2, "window independence of modulation norms", "different windows give equivalent norms", WINDOW_BAND.1, |c| {
        for n in [512, 1024] {
            let r = window_ratios(p, n, seed)?;
            let lo = r.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = r.iter().copied().fold(0.0, f64::max);
            c.detail(format!("N{n}_min"), lo).detail(format!("N{n}_max"), hi);
            c.observed = c.observed.max(hi);
            c.require(format!("N{n}_in_band"), lo >= WINDOW_BAND.0 && hi <= WINDOW_BAND.1);
        }
        Ok(())
    })
}

fn c23(p: &SaftParams, seed: u64) -> CheckResult {
    run("C23", 3, "Hormander probe", "|m'(w)| <= C/|w| gives L^r bounds", 10.0, |c| {
        let m = SymbolSpec::imaginary_power(1.0);
        for r in [4.0 / 3.0, 2.0, 4.0] {
            let mut rs = Vec::new();
            for n in [512, 1024] {
                let v = multiplier_norm_probe(p, &m, r, FamilyKind::GaussianMixture, standard_grid(n)?, 20, seed ^ 0x23)?;
                c.bound(format!("r{r:.3}_N{n}"), v, 10.0);
                rs.push(v);
            }
            c.require(format!("r{r:.3}_stable"), rs[1] / rs[0] <= 2.0 && rs[0] / rs[1] <= 2.0);
        }
        let omegas = SaftPlan::new(*p, standard_grid(512)?).omegas();
        let est = hormander_validate(&m, &omegas)?;
        c.detail("c_est_imagpow", est.c_est);
        c.require("c_est_is_alpha", (est.c_est - 1.0).abs() < 1e-12);
        for sym in [m.clone(), SymbolSpec::smoothed_sign(1.0)?] {
            let (c1, c2) = hormander_scale_check(&sym, &omegas, p.b())?;
            let key = if sym == m { "scale_imagpow" } else { "scale_smoothsign" };
            let d = (c1 - c2).abs() / c1;
            c.detail(key, d);
            if d > 1e-9 {
                c.pass = false;
            }
        }
        Ok(())
    })
}

fn c24(p: &SaftParams, seed: u64) -> CheckResult {
    run("C24", 3, "Littlewood-Paley ratio probe", "m_r ||f|| <= ||S f|| <= M_r ||f||", 2.0, |c| {
        for r in [4.0 / 3.0, 4.0] {
            let mut rr = Vec::new();
            for n in [512, 1024] {
                let v = lp_ratio_probe(p, r, FamilyKind::GaussianMixture, standard_grid(n)?, 50, seed ^ 0x24)?;
                c.detail(format!("r{r:.3}_N{n}_min"), v.min_ratio);
                c.detail(format!("r{r:.3}_N{n}_max"), v.max_ratio);
                c.require(format!("r{r:.3}_N{n}_positive_finite"), v.min_ratio > 0.0 && v.max_ratio.is_finite());
                rr.push(v);
            }
            let smin = (rr[1].min_ratio / rr[0].min_ratio).max(rr[0].min_ratio / rr[1].min_ratio);
            let smax = (rr[1].max_ratio / rr[0].max_ratio).max(rr[0].max_ratio / rr[1].max_ratio);
            c.bound(format!("r{r:.3}_stability"), smin.max(smax), 2.0);
        }
        Ok(())
    })
}

pub const BENCH_SIZES: [usize; 4] = [512, 1024, 2048, 4096];

/// Growth checks on a bench table: `(fast ok, oracle ok)`.
pub fn bench_growth_ok(t: &BenchTable) -> (bool, bool) {
    let fast = t.fast_growth().iter().all(|&g| g <= 2.5);
    let oracle = t.oracle_growth().iter().all(|&g| g >= 3.5);
    (fast, oracle)
}

fn c25(p: &SaftParams) -> CheckResult {
    run("C25", 3, "bench: fast vs oracle growth", "O(N log N) vs O(N^2)", 2.5, |c| {
        let t = cmd_bench(p, &BENCH_SIZES)?;
        for (i, g) in t.fast_growth().iter().enumerate() {
            c.bound(format!("fast_growth_{i}"), *g, 2.5);
        }
        for (i, g) in t.oracle_growth().iter().enumerate() {
            c.detail(format!("oracle_growth_{i}"), *g);
        }
        let (_, ok) = bench_growth_ok(&t);
        c.require("oracle_growth_ge_3.5", ok);
        Ok(())
    })
}
