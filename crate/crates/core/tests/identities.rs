//! Cross-module identities and convergence properties.

use num_complex::Complex64;

use saft::bench::cmd_bench;
use saft::engine::{saft_fast, saft_oracle, SaftPlan};
use saft::families::{family, FamilyKind};
use saft::grid::{gaussian, lr_norm, max_abs_diff, sample, sample_real, Grid, Mode, Signal};
use saft::ops::a_translate;
use saft::params::{SaftParams, WeightSpec};
use saft::timefreq::{a_mod_norm, window, WindowKind};
use saft::verify::{acceptance_params, cmd_verify, raised_cosine, VerifyOptions};

#[test]
fn strong_continuity_of_a_translation() {
    let f_cont = raised_cosine(1.5);
    for (_, p) in acceptance_params() {
        for r in [1.0, 2.0, 4.0] {
            let errs: Vec<f64> = [256, 512, 1024]
                .iter()
                .map(|&n| {
                    let g = Grid::window(-4.0, 4.0, n).unwrap();
                    let f = sample_real(&f_cont, g, Mode::Compact).unwrap();
                    let h = a_translate(&f, &p, g.step).unwrap();
                    let d = f.with_samples(h.samples.iter().zip(&f.samples).map(|(a, b)| a - b).collect());
                    lr_norm(&d, r).unwrap()
                })
                .collect();
            assert!(errs[1] < errs[0] && errs[2] < errs[1], "{p} r={r}: {errs:?}");
        }
    }
}

#[test]
fn fundamental_relation_on_self_dual_grid() {
    // a = d, p = q = 0: sum F f(w) g(w) dw = sum f(t) F g(t) dt.
    for p in [
        SaftParams::new(1.0, 1.0, 0.0, 1.0, 0.0, 0.0).unwrap(),
        SaftParams::new(0.5, 2.0, -0.375, 0.5, 0.0, 0.0).unwrap(),
        "frft:pi/3".parse().unwrap(),
    ] {
        let grid = Grid::self_dual(256, p.b().abs()).unwrap();
        let f = sample(|t| Complex64::new(gaussian(t - 0.3), 0.2 * t) * gaussian(t / 1.3), grid, Mode::Cyclic).unwrap();
        let g = sample(|t| Complex64::cis(0.7 * t) * gaussian((t + 0.5) / 0.9), grid, Mode::Cyclic).unwrap();
        let plan = SaftPlan::new(p, grid);
        assert!(plan.freq_grid().approx_eq(&grid));
        let (ff, fg) = (saft_fast(&plan, &f).unwrap(), saft_fast(&plan, &g).unwrap());
        let lhs: Complex64 = ff.samples.iter().zip(&g.samples).map(|(a, b)| a * b).sum::<Complex64>() * plan.freq_grid().step;
        let rhs: Complex64 = f.samples.iter().zip(&fg.samples).map(|(a, b)| a * b).sum::<Complex64>() * grid.step;
        assert!((lhs - rhs).norm() < 1e-10 * rhs.norm(), "{p}: {lhs} vs {rhs}");
    }
}

#[test]
fn oracle_agrees_at_2048() {
    let grid = Grid::window(-8.0, 8.0, 2048).unwrap();
    for (_, p) in acceptance_params() {
        let f = &family(FamilyKind::BandLimitedNoise, grid, Mode::Cyclic, 1, 5)[0];
        let d = max_abs_diff(&saft_fast(&SaftPlan::new(p, grid), f).unwrap().samples, &saft_oracle(&p, f).samples);
        assert!(d <= 1e-10 * f.norm(2.0), "{p}: {d}");
    }
}

#[test]
fn hausdorff_young_at_1024() {
    let grid = Grid::window(-8.0, 8.0, 1024).unwrap();
    for (_, p) in acceptance_params() {
        let plan = SaftPlan::new(p, grid);
        for f in family(FamilyKind::GaussianMixture, grid, Mode::Compact, 5, 11) {
            let s = saft_fast(&plan, &f).unwrap();
            for r in [1.0, 4.0 / 3.0, 2.0] {
                let rp = if r == 1.0 { f64::INFINITY } else { r / (r - 1.0) };
                let bound = p.b().abs().powf(0.5 - 1.0 / r) * lr_norm(&f, r).unwrap();
                assert!(s.norm(rp) <= bound * 1.05, "{p} r={r}");
            }
        }
    }
}

#[test]
fn higher_index_a_mod_norms_are_bounded() {
    let grid = Grid::window(-8.0, 8.0, 256).unwrap();
    let w = window(WindowKind::Gaussian, grid, Mode::Cyclic);
    for (_, p) in acceptance_params() {
        let ratios: Vec<f64> = family(FamilyKind::GaussianMixture, grid, Mode::Cyclic, 10, 3)
            .iter()
            .map(|f| {
                let low = a_mod_norm(&p, f, &w, 1.0, 1.0, &WeightSpec::Unit).unwrap();
                let high = a_mod_norm(&p, f, &w, 2.0, 2.0, &WeightSpec::Unit).unwrap();
                high / low
            })
            .collect();
        assert!(ratios.iter().all(|r| r.is_finite() && *r > 0.0 && *r <= 1.0), "{p}: {ratios:?}");
    }
}

#[test]
fn verify_report_is_deterministic() {
    let p: SaftParams = "frft:pi/4".parse().unwrap();
    let opts = VerifyOptions { include_bench: false };
    let a = cmd_verify(&p, 256, 7, opts).unwrap();
    let b = cmd_verify(&p, 256, 7, opts).unwrap();
    assert_eq!(a.to_json(), b.to_json());
    assert_eq!(a.checks.len(), 25);
    let ids: Vec<&str> = a.checks.iter().map(|c| c.check_id.as_str()).collect();
    let want: Vec<String> = (1..=25).map(|k| format!("C{k:02}")).collect();
    assert_eq!(ids, want.iter().map(String::as_str).collect::<Vec<_>>());
}

#[test]
fn bench_policy() {
    let p = SaftParams::fourier();
    assert_eq!(cmd_bench(&p, &[128]).unwrap().rows.len(), 1);
    let t = cmd_bench(&p, &[64, 8192]).unwrap();
    assert!(t.rows[0].oracle.is_some());
    assert!(t.rows[1].oracle.is_none());
}

#[test]
fn a_time_frequency_shifts_are_bounded_by_the_weight() {
    use saft::ops::a_modulate;
    use saft::timefreq::mod_norm;
    // Signals live on [-8, 8) and are zero-padded to [-16, 16) so shifted STFT mass never wraps.
    let inner = Grid::window(-8.0, 8.0, 128).unwrap();
    let grid = Grid::window(-16.0, 16.0, 256).unwrap();
    let l = grid.length();
    let w = window(WindowKind::Gaussian, grid, Mode::Cyclic);
    let fam: Vec<Signal> = family(FamilyKind::GaussianMixture, inner, Mode::Cyclic, 3, 17)
        .iter()
        .map(|f| {
            let mut s = vec![Complex64::new(0.0, 0.0); 64];
            s.extend_from_slice(&f.samples);
            s.resize(256, Complex64::new(0.0, 0.0));
            Signal::new(grid, Mode::Cyclic, s).unwrap()
        })
        .collect();
    for (_, p) in acceptance_params() {
        for (mx, k) in [(3i64, 2i64), (-5, 7), (8, -4)] {
            let x = mx as f64 * grid.step;
            // Pick omega so that (omega - a x) / b = k / L lies on the lattice.
            let omega = p.b() * k as f64 / l + p.a() * x;
            let xi = (omega - p.a() * x) / p.b();
            for ell in [0.0, 1.0, 2.0] {
                let m = WeightSpec::v_ell(ell);
                // v_ell is moderate with respect to itself with constant 2^{ell/2}.
                let bound = 2f64.powf(ell / 2.0) * m.eval(x, xi);
                for f in &fam {
                    let g = a_modulate(&a_translate(f, &p, x).unwrap(), &p, omega);
                    for (r, s) in [(1.0, 1.0), (2.0, 2.0), (1.0, 2.0)] {
                        let lhs = mod_norm(&g, &w, r, s, &m).unwrap();
                        let rhs = bound * mod_norm(f, &w, r, s, &m).unwrap();
                        assert!(lhs <= rhs * (1.0 + 1e-9), "{p} x={x} xi={xi} l={ell}: {lhs} > {rhs}");
                    }
                }
            }
        }
    }
}
