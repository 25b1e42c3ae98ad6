use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use saft::aconv::{aconv_fast, approx_identity_run, young_check};
use saft::bench::cmd_bench;
use saft::engine::{apply_b, heat_evolve, isaft, saft_fast, saft_oracle, BMethod, HeatMethod, SaftPlan};
use saft::families::FamilyKind;
use saft::grid::{gaussian, Mode, Signal};
use saft::io::{emit, load_signal, load_spectrum, signal_to_json, spectrum_to_json, tf_to_json};
use saft::multipliers::{
    apply_multiplier, hormander_validate, lp_project, lp_ratio_probe, lp_reconstruct, multiplier_norm_probe,
    square_function, LpBank, SymbolSpec,
};
use saft::ops::{a_modulate, a_translate, chirp, involution, modulate, translate};
use saft::plotdata::{self, PlotKind};
use saft::timefreq::{a_mod_norm, mod_norm, stft_with_id, window, WindowKind};
use saft::verify::{cmd_verify, raised_cosine, VerifyOptions};
use saft::{Result, SaftError, SaftParams, WeightSpec};

#[derive(Parser)]
#[command(name = "saft", version, about = "Special affine Fourier transform toolkit")]
struct Cli {
    /// fourier | frft:THETA | fresnel:B | lct:a,b,c,d | a,b,c,d,p,q
    #[arg(long, global = true, default_value = "fourier")]
    params: SaftParams,
    /// Input signal: a JSON or .csv file, or builtin:gaussian|indicator|chirped_indicator|mixture
    #[arg(long = "in", global = true, default_value = "builtin:gaussian")]
    input: String,
    /// Output file (stdout when absent)
    #[arg(long, global = true)]
    out: Option<String>,
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    /// Node count for builtin inputs and verify
    #[arg(long, global = true, default_value_t = 512)]
    size: usize,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Forward transform of a signal
    Saft {
        /// Use the direct O(N^2) quadrature
        #[arg(long)]
        oracle: bool,
    },
    /// Inverse transform of a spectrum file given by --in
    Isaft,
    /// A-convolution of two signals
    Aconv {
        #[arg(long, default_value = "cyclic")]
        mode: Mode,
        f: String,
        g: String,
    },
    /// Approximate-identity errors for a shrinking kernel
    Approxid {
        /// gaussian | raisedcos
        #[arg(long, default_value = "gaussian")]
        phi: String,
        #[arg(long, value_delimiter = ',', default_value = "1,0.5,0.25,0.125")]
        eps: Vec<f64>,
        #[arg(short = 'r', default_value_t = 2.0)]
        r: f64,
    },
    /// Young inequality check on two signals
    Young {
        #[arg(short = 'r')]
        r: f64,
        #[arg(short = 's')]
        s: f64,
        f: String,
        g: String,
    },
    /// Apply one time-frequency operator
    Op(OpArgs),
    /// Apply the operator B
    #[command(name = "opB")]
    OpB {
        #[arg(long, default_value = "spectral")]
        method: BMethod,
    },
    /// Heat evolution under B*B
    Heat {
        #[arg(long)]
        t: f64,
        #[arg(long, default_value = "multiplier")]
        method: HeatMethod,
    },
    /// Short-time Fourier transform on the signal lattice
    Stft {
        #[arg(short = 'g', default_value = "gaussian")]
        g: WindowKind,
    },
    /// Modulation-space norm
    Modnorm(NormArgs),
    /// A-modulation-space norm
    Amodnorm(NormArgs),
    /// Littlewood-Paley blocks
    Lp {
        #[arg(long, allow_hyphen_values = true)]
        jmin: Option<i32>,
        #[arg(long, allow_hyphen_values = true)]
        jmax: Option<i32>,
        #[arg(long, conflicts_with = "square")]
        reconstruct: bool,
        #[arg(long)]
        square: bool,
    },
    /// Apply a SAFT multiplier
    Mult {
        /// imagpow:ALPHA | smoothsign:S | bump:J | indicator:LO,HI
        #[arg(long)]
        symbol: SymbolSpec,
    },
    /// Empirical operator-norm probes over a seeded family
    Probe {
        /// lp | hormander
        #[arg(long)]
        kind: String,
        #[arg(short = 'r', default_value_t = 2.0)]
        r: f64,
        #[arg(long, default_value_t = 20)]
        count: usize,
        #[arg(long, default_value = "imagpow:1")]
        symbol: SymbolSpec,
        /// mixture | noise
        #[arg(long, default_value = "mixture")]
        family: FamilyKind,
    },
    /// Run the identity battery; exits nonzero when a check fails
    Verify {
        #[arg(long)]
        json: bool,
        #[arg(long)]
        no_bench: bool,
    },
    /// Time fast and oracle transforms
    Bench {
        #[arg(long, value_delimiter = ',', default_value = "256,512,1024,2048,4096")]
        sizes: Vec<usize>,
        #[arg(long)]
        json: bool,
    },
    /// CSV columns for plotting
    Plotdata {
        /// spectrum_magnitude | tf_magnitude | lp_blocks | heat_snapshots
        kind: PlotKind,
        #[arg(long, value_delimiter = ',', default_value = "0,0.05,0.2")]
        times: Vec<f64>,
        #[arg(short = 'g', default_value = "gaussian")]
        g: WindowKind,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct OpArgs {
    #[arg(long, allow_hyphen_values = true)]
    translate: Option<f64>,
    #[arg(long = "a-translate", allow_hyphen_values = true)]
    a_translate: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    modulate: Option<f64>,
    #[arg(long = "a-modulate", allow_hyphen_values = true)]
    a_modulate: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    chirp: Option<f64>,
    #[arg(long)]
    involute: bool,
}

#[derive(Args)]
struct NormArgs {
    #[arg(short = 'r', default_value_t = 2.0)]
    r: f64,
    #[arg(short = 's', default_value_t = 2.0)]
    s: f64,
    /// unit | v_ell:L
    #[arg(long, default_value = "unit")]
    weight: WeightSpec,
    #[arg(short = 'g', default_value = "gaussian")]
    g: WindowKind,
}

fn is_empty_file(src: &str) -> bool {
    !src.starts_with("builtin:") && std::fs::metadata(src).map(|m| m.len() == 0).unwrap_or(false)
}

fn run(cli: Cli) -> Result<ExitCode> {
    let p = cli.params;
    let out = cli.out.as_deref();
    let load = |src: &str| load_signal(src, &p, cli.size, cli.seed);
    let signal = || load(&cli.input);
    let write_signal = |f: &Signal| emit(out, &signal_to_json(f));
    match cli.cmd {
        Cmd::Saft { oracle } => {
            let f = signal()?;
            let s = if oracle { saft_oracle(&p, &f) } else { saft_fast(&SaftPlan::new(p, f.grid), &f)? };
            emit(out, &spectrum_to_json(&s))?;
        }
        Cmd::Isaft => {
            let s = load_spectrum(&cli.input)?;
            if s.params != p {
                return Err(SaftError::InvalidParams(format!(
                    "spectrum was computed with {} but --params is {p}",
                    s.params
                )));
            }
            write_signal(&isaft(&SaftPlan::new(p, s.time_grid), &s)?)?;
        }
        Cmd::Aconv { mode, f, g } => {
            write_signal(&aconv_fast(&p, &load(&f)?.with_mode(mode), &load(&g)?.with_mode(mode), mode)?)?;
        }
        Cmd::Approxid { phi, eps, r } => {
            let f = signal()?.with_mode(Mode::Compact);
            let errs = match phi.as_str() {
                "gaussian" => approx_identity_run(&p, &f, &gaussian, &eps, r)?,
                "raisedcos" => approx_identity_run(&p, &f, &raised_cosine(1.0), &eps, r)?,
                _ => return Err(SaftError::InvalidArgument(format!("phi must be gaussian or raisedcos, got '{phi}'"))),
            };
            emit(out, &json!({ "eps": eps, "errors": errs, "r": r }).to_string())?;
        }
        Cmd::Young { r, s, f, g } => {
            let rep = young_check(&p, &load(&f)?.with_mode(Mode::Compact), &load(&g)?.with_mode(Mode::Compact), r, s)?;
            emit(out, &serde_json::to_string(&rep)?)?;
        }
        Cmd::Op(a) => {
            let f = signal()?;
            let g = if let Some(s) = a.translate {
                translate(&f, s)?
            } else if let Some(s) = a.a_translate {
                a_translate(&f, &p, s)?
            } else if let Some(s) = a.modulate {
                modulate(&f, s)
            } else if let Some(s) = a.a_modulate {
                a_modulate(&f, &p, s)
            } else if let Some(s) = a.chirp {
                chirp(&f, s)
            } else {
                involution(&f)?
            };
            write_signal(&g)?;
        }
        Cmd::OpB { method } => write_signal(&apply_b(&p, &signal()?, method)?)?,
        Cmd::Heat { t, method } => write_signal(&heat_evolve(&p, &signal()?, t, method)?)?,
        Cmd::Stft { g } => {
            let f = signal()?;
            let w = window(g, f.grid, f.mode);
            emit(out, &tf_to_json(&stft_with_id(&f, &w, g.id())?))?;
        }
        Cmd::Modnorm(a) => {
            let f = signal()?;
            let v = mod_norm(&f, &window(a.g, f.grid, f.mode), a.r, a.s, &a.weight)?;
            emit(out, &json!({ "norm": v, "r": a.r, "s": a.s, "window": a.g.id() }).to_string())?;
        }
        Cmd::Amodnorm(a) => {
            let f = signal()?;
            let v = a_mod_norm(&p, &f, &window(a.g, f.grid, f.mode), a.r, a.s, &a.weight)?;
            emit(out, &json!({ "norm": v, "r": a.r, "s": a.s, "window": a.g.id(), "params": p }).to_string())?;
        }
        Cmd::Lp { jmin, jmax, reconstruct, square } => {
            let f = signal()?;
            let auto = LpBank::for_grid(SaftPlan::new(p, f.grid).freq_grid())?;
            let bank = LpBank::new(jmin.unwrap_or(auto.j_min), jmax.unwrap_or(auto.j_max))?;
            let blocks = lp_project(&p, &bank, &f)?;
            if reconstruct {
                write_signal(&lp_reconstruct(&blocks)?)?;
            } else if square {
                write_signal(&square_function(&blocks)?)?;
            } else {
                let items: Vec<serde_json::Value> = bank
                    .js()
                    .zip(&blocks)
                    .map(|(j, b)| Ok(json!({ "j": j, "signal": serde_json::from_str::<serde_json::Value>(&signal_to_json(b))? })))
                    .collect::<Result<_>>()?;
                emit(out, &serde_json::Value::Array(items).to_string())?;
            }
        }
        Cmd::Mult { symbol } => write_signal(&apply_multiplier(&p, &symbol, &signal()?)?)?,
        Cmd::Probe { kind, r, count, symbol, family } => {
            let grid = signal()?.grid;
            let v = match kind.as_str() {
                "lp" => serde_json::to_value(lp_ratio_probe(&p, r, family, grid, count, cli.seed)?)?,
                "hormander" => {
                    let est = hormander_validate(&symbol, &SaftPlan::new(p, grid).omegas())?;
                    let ratio = multiplier_norm_probe(&p, &symbol, r, family, grid, count, cli.seed)?;
                    json!({ "c_est": est.c_est, "smooth": est.pass, "max_ratio": ratio })
                }
                _ => return Err(SaftError::InvalidArgument(format!("probe kind must be lp or hormander, got '{kind}'"))),
            };
            emit(out, &v.to_string())?;
        }
        Cmd::Verify { json, no_bench } => {
            let rep = cmd_verify(&p, cli.size, cli.seed, VerifyOptions { include_bench: !no_bench })?;
            emit(out, &if json { rep.to_json() } else { rep.render_text() })?;
            if !rep.all_pass() {
                return Ok(ExitCode::from(1));
            }
        }
        Cmd::Bench { sizes, json } => {
            let t = cmd_bench(&p, &sizes)?;
            emit(out, &if json { serde_json::to_string_pretty(&t)? } else { t.render_text() })?;
        }
        Cmd::Plotdata { kind, times, g } => {
            if is_empty_file(&cli.input) {
                let labels: Vec<String> = match kind {
                    PlotKind::HeatSnapshots => times.iter().map(|t| format!("u{t}")).collect(),
                    _ => Vec::new(),
                };
                return emit(out, &plotdata::header(kind, &labels)).map(|_| ExitCode::SUCCESS);
            }
            let f = signal()?;
            let csv = match kind {
                PlotKind::SpectrumMagnitude => plotdata::spectrum_magnitude(&saft_fast(&SaftPlan::new(p, f.grid), &f)?),
                PlotKind::TfMagnitude => plotdata::tf_magnitude(&stft_with_id(&f, &window(g, f.grid, f.mode), g.id())?),
                PlotKind::LpBlocks => {
                    let bank = LpBank::for_grid(SaftPlan::new(p, f.grid).freq_grid())?;
                    plotdata::lp_blocks(&p, &bank, &f)?
                }
                PlotKind::HeatSnapshots => plotdata::heat_snapshots(&p, &f, &times, HeatMethod::Multiplier)?,
            };
            emit(out, &csv)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
