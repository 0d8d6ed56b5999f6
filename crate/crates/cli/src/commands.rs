use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use sbwave::aux_density::AuxKind;
use sbwave::biased_estimator::{
    clip_and_renormalize, estimate_density, resolve_j1, PowerDensityEstimate, ThresholdChoice,
};
use sbwave::experiments::{efficiency_table, linspace, run_monte_carlo, MonteCarloPlan};
use sbwave::wavelet::{load_filter, EvalPrecision, Evaluator};
use sbwave::weight::WeightFunction;
use serde_json::json;

use crate::error::{io_error, CliError};
use crate::input::read_column;
use crate::{AuxArg, EffArgs, EstimateArgs, Format, SimulateArgs, ThresholdArg, WaveletTableArgs};

/// 17 significant digits.
fn real(v: f64) -> String {
    format!("{v:.16e}")
}

fn check_parent(path: &Path) -> Result<(), CliError> {
    match path.parent() {
        Some(dir) if !dir.as_os_str().is_empty() && !dir.is_dir() => {
            Err(CliError::Input(format!("{}: output directory does not exist", path.display())))
        }
        _ => Ok(()),
    }
}

fn write_output(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| io_error(p, e)),
        None => match std::io::stdout().lock().write_all(text.as_bytes()) {
            Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(CliError::Compute(format!("stdout: {e}"))),
            _ => Ok(()),
        },
    }
}

fn to_json(value: &impl serde::Serialize) -> Result<String, CliError> {
    serde_json::to_string_pretty(value).map(|s| s + "\n").map_err(|e| CliError::Compute(e.to_string()))
}

fn sidecar_path(args: &EstimateArgs) -> Option<PathBuf> {
    if let Some(p) = &args.sidecar {
        return Some(p.clone());
    }
    let out = args.output.as_ref()?;
    if out.extension().is_some_and(|e| e == "json") {
        let stem = out.file_stem().unwrap_or_default().to_string_lossy();
        Some(out.with_file_name(format!("{stem}.diagnostics.json")))
    } else {
        Some(out.with_extension("json"))
    }
}

pub fn estimate(args: &EstimateArgs) -> Result<(), CliError> {
    let weight = WeightFunction::parse(&args.weight)?;
    let filter = load_filter(&args.filter)?;
    if args.grid < 2 {
        return Err(CliError::Input("--grid must be at least 2".into()));
    }
    let sidecar = if args.format == Format::Csv { sidecar_path(args) } else { None };
    for p in args.output.iter().chain(sidecar.iter()) {
        check_parent(p)?;
    }
    let sample = read_column(&args.input)?;

    let p = args.p.unwrap_or(args.method.default_p());
    let j1 = match args.j1 {
        Some(j1) => j1,
        None => resolve_j1(p, sample.len())?,
    };
    let mut config = args.method.config(args.j0, j1).with_filter(filter);
    if let Some(a) = args.a {
        config.a = a;
    }
    config.epsilon = args.epsilon;
    config.threshold = match args.threshold {
        ThresholdArg::Hard => ThresholdChoice::HardUniversal,
        ThresholdArg::Soft => ThresholdChoice::SoftUniversal,
        ThresholdArg::None => ThresholdChoice::None,
    };
    config.aux = match args.aux {
        AuxArg::Kde => AuxKind::KdeSj,
        AuxArg::Wavelet => AuxKind::Wavelet { level: None },
        AuxArg::None => AuxKind::None,
    };
    config.validate()?;

    let est = estimate_density(&sample, &weight, &config)?;
    let lo = sample.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = sample.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let xs = linspace(lo, hi, args.grid);
    let mut values = est.eval_grid(&xs);
    if args.clip_negative {
        values.f_hat = clip_and_renormalize(&values.f_hat, xs[1] - xs[0]);
    }
    let diagnostics = diagnostics_json(&est, args, p, values.clamped, (lo, hi))?;

    match args.format {
        Format::Csv => {
            let mut out = String::from("x,f_hat,f_hat_a\n");
            for ((x, f), fa) in xs.iter().zip(&values.f_hat).zip(&values.f_hat_a) {
                writeln!(out, "{},{},{}", real(*x), real(*f), real(*fa)).expect("write to string");
            }
            write_output(args.output.as_deref(), &out)?;
            if let Some(path) = sidecar {
                std::fs::write(&path, to_json(&diagnostics)?).map_err(|e| io_error(&path, e))?;
            }
        }
        Format::Json => {
            let doc = json!({ "x": xs, "f_hat": values.f_hat, "f_hat_a": values.f_hat_a, "diagnostics": diagnostics });
            write_output(args.output.as_deref(), &to_json(&doc)?)?;
        }
    }
    Ok(())
}

fn diagnostics_json(
    est: &PowerDensityEstimate,
    args: &EstimateArgs,
    p: f64,
    clamped: usize,
    (lo, hi): (f64, f64),
) -> Result<serde_json::Value, CliError> {
    let cfg = est.config();
    let coeffs = est.coefficients();
    let t = est.transform();
    let doc: serde_json::Value = serde_json::from_str(&est.to_json()?).map_err(|e| CliError::Compute(e.to_string()))?;
    Ok(json!({
        "n": est.diagnostics().n,
        "method": args.method.to_string(),
        "a": cfg.a,
        "j0": cfg.j0,
        "j1": cfg.j1,
        "p": if args.j1.is_some() { None } else { Some(p) },
        "weight": est.diagnostics().weight,
        "mu_hat": est.mu_hat(),
        "lambda": coeffs.lambda,
        "sigma_hat": coeffs.sigma_hat,
        "g_clamped": est.diagnostics().g_clamped,
        "negative_clamped": clamped,
        "transform": { "q": t.q, "s": t.s, "epsilon": t.epsilon },
        "aux": est.diagnostics().aux,
        "grid": { "lo": lo, "hi": hi, "points": args.grid },
        "estimate": doc,
    }))
}

pub fn simulate(args: &SimulateArgs) -> Result<(), CliError> {
    for p in args.output.iter().chain(args.raw.iter()) {
        check_parent(p)?;
    }
    let plan = MonteCarloPlan {
        example: args.example,
        literal: args.literal,
        sizes: args.sizes.clone(),
        p_values: args.p_values.clone(),
        methods: args.methods.clone(),
        replications: args.reps,
        base_seed: args.seed,
        n_grid: args.grid,
        keep_raw: args.raw.is_some(),
        threads: args.threads,
    };
    plan.validate()?;
    let table = run_monte_carlo(&plan)?;
    let text = match args.format {
        Format::Csv => table.to_csv()?,
        Format::Json => table.to_json()? + "\n",
    };
    write_output(args.output.as_deref(), &text)?;
    if let Some(path) = &args.raw {
        std::fs::write(path, table.raw_csv()?).map_err(|e| io_error(path, e))?;
    }
    let failures = table.failures();
    if failures > 0 {
        let msg = format!("{failures} replication fits failed");
        if args.strict {
            return Err(CliError::Compute(msg));
        }
        eprintln!("sbwave: warning: {msg}");
    }
    Ok(())
}

pub fn eff(args: &EffArgs) -> Result<(), CliError> {
    if let Some(p) = &args.output {
        check_parent(p)?;
    }
    let rows = efficiency_table(args.n, args.k_max, &args.ms, &args.cases)?;
    let text = match args.format {
        Format::Csv => {
            let mut out = String::from("k,m,case,eff\n");
            for r in &rows {
                writeln!(out, "{},{},{},{}", r.k, r.m, r.case, real(r.eff)).expect("write to string");
            }
            out
        }
        Format::Json => to_json(&rows)?,
    };
    write_output(args.output.as_deref(), &text)
}

/// Largest grid level accepted by `wavelet-table`.
const MAX_TABLE_LEVEL: u32 = 16;

pub fn wavelet_table(args: &WaveletTableArgs) -> Result<(), CliError> {
    let filter = load_filter(&args.filter)?;
    if args.level > MAX_TABLE_LEVEL {
        return Err(CliError::Input(format!("--level {} exceeds {MAX_TABLE_LEVEL}", args.level)));
    }
    if let Some(p) = &args.output {
        check_parent(p)?;
    }
    let eval = Evaluator::new(&filter, EvalPrecision::default());
    let per_unit = 1usize << args.level;
    let points = filter.support_length() * per_unit;
    let mut out = String::from("x,phi,psi\n");
    for i in 0..=points {
        let x = i as f64 / per_unit as f64;
        writeln!(out, "{},{},{}", real(x), real(eval.phi(x)), real(eval.psi(x))).expect("write to string");
    }
    write_output(args.output.as_deref(), &out)
}
