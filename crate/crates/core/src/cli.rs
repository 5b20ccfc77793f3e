//! Command-line front end.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{Map, Value};

use crate::correlations::{
    background_correct, coherence_time, default_delays, delays_symmetric, g2_hom_analytic,
    hom_curve_numeric, visibility, visibility_resolvent, QuadratureOptions, DEFAULT_DELAY_SPAN,
};
use crate::dynamics::TimeGrid;
use crate::error::{Error, Result};
use crate::fitting::{
    bootstrap, classify_regime, fit_hom_dip_simple, fit_hom_joint, fit_lifetime_lorentzian,
    fit_michelson, DecayModel, FitResult, JointOptions, LorentzianLifetime, Regime,
};
use crate::io::config::{Config, KEYS};
use crate::io::csv::Table;
use crate::io::dataset::{load_dataset, DatasetKind};
use crate::io::document::{number, numbers, ResultDocument};
use crate::io::write_atomic;
use crate::model::{
    adiabatic_eliminated_params, purcell_factor, purcell_rate, validity_ratio, EmitterModel,
    SystemParams,
};
use crate::phonon::{
    effective_dephasing_equivalent, half_fourier_rate, spectral_density, DephasingOptions,
};
use crate::units::{mev_to_uev, rate_to_energy};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DATA: i32 = 3;
pub const EXIT_NO_CONVERGENCE: i32 = 4;
pub const EXIT_VALIDITY: i32 = 5;

#[derive(Parser, Debug)]
#[command(name = "qd-hom", version, about = "Quantum-dot single-photon source: HOM simulation and fitting")]
struct Cli {
    /// key = value configuration file
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output file; standard output when omitted
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Treat a violated validity condition as an error
    #[arg(long, global = true)]
    strict: bool,
    /// Seed of the bootstrap resampling
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    /// Record wall-clock time in JSON documents
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Derived rates, visibilities and population dynamics as JSON
    Simulate,
    /// HOM dip versus delay as CSV (tau_d_ps, g2hom_analytic, g2hom_numeric)
    HomDip {
        /// Model used for the numerical column
        #[arg(long, value_enum, default_value_t = ModelChoice::Eliminated)]
        model: ModelChoice,
        #[arg(long, default_value_t = 41)]
        points: usize,
        /// Half-width of the delay window in ps
        #[arg(long)]
        span_ps: Option<f64>,
        /// Measured g2(0) folded into both columns
        #[arg(long, default_value_t = 0.0)]
        g2zero: f64,
    },
    /// Observable over a grid of one configuration key, as CSV
    Sweep {
        #[arg(long)]
        param: String,
        #[arg(long, allow_hyphen_values = true)]
        from: f64,
        #[arg(long, allow_hyphen_values = true)]
        to: f64,
        #[arg(long)]
        steps: usize,
        #[arg(long, value_enum, default_value_t = Observable::Visibility)]
        observable: Observable,
    },
    /// Least-squares fits
    Fit {
        #[command(subcommand)]
        kind: FitCommand,
    },
    /// Spectral density and one-sided phonon rates versus Bohr energy, as CSV
    PhononRates {
        #[arg(long, allow_hyphen_values = true, default_value_t = -3.0)]
        from: f64,
        #[arg(long, allow_hyphen_values = true, default_value_t = 3.0)]
        to: f64,
        #[arg(long, default_value_t = 61)]
        steps: usize,
        /// Also print the phonon-equivalent pure dephasing of the configured system
        #[arg(long)]
        effective: bool,
    },
    /// Subtract g2(0)/2 from a homdip CSV
    G2Correct {
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        g2zero: f64,
    },
}

#[derive(Subcommand, Debug)]
enum FitCommand {
    /// Lorentzian Purcell fit of T1 versus detuning
    Lifetime {
        #[arg(long)]
        data: PathBuf,
        /// Cavity linewidth in meV; the configured value when omitted
        #[arg(long)]
        kappa: Option<f64>,
        #[arg(long, default_value_t = 200)]
        bootstrap: usize,
    },
    /// Single-exponential dip with fixed T1
    Dip {
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        t1: f64,
        #[arg(long, default_value_t = 200)]
        bootstrap: usize,
    },
    /// Joint (T_alpha, gamma) fit of dip and visibility-versus-detuning data
    Joint {
        #[arg(long)]
        dip: PathBuf,
        #[arg(long)]
        vis: Option<PathBuf>,
        /// Lifetime fit document; the configured Purcell model when omitted
        #[arg(long)]
        lifetime: Option<PathBuf>,
        /// Hold gamma fixed (ueV)
        #[arg(long)]
        fix_gamma: Option<f64>,
        #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
        dip_detuning: f64,
        #[arg(long, default_value_t = 200)]
        bootstrap: usize,
    },
    /// Gaussian Michelson contrast fit
    Michelson {
        #[arg(long)]
        data: PathBuf,
        #[arg(long, default_value_t = 200)]
        bootstrap: usize,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum, PartialEq, Eq)]
enum ModelChoice {
    Eliminated,
    Full,
}

#[derive(Clone, Copy, Debug, ValueEnum, PartialEq, Eq)]
enum Observable {
    Visibility,
    G2hom0,
    T1,
    ValidityRatio,
    GammaEff,
}

impl Observable {
    fn name(self) -> &'static str {
        match self {
            Observable::Visibility => "visibility",
            Observable::G2hom0 => "g2hom0",
            Observable::T1 => "t1_ps",
            Observable::ValidityRatio => "validity_ratio",
            Observable::GammaEff => "gamma_eff_uev",
        }
    }
}

struct Ctx {
    config: Config,
    out: Option<PathBuf>,
    strict: bool,
    seed: u64,
    timing: bool,
    started: Instant,
}

/// Outcome of a command that may have produced output but still signals
/// a non-zero status.
enum Status {
    Ok,
    NotConverged,
    Validity,
}

/// Runs the CLI on `args` (including the program name) and returns the exit code.
pub fn run_cli<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return code;
        }
    };
    match run(cli) {
        Ok(Status::Ok) => EXIT_OK,
        Ok(Status::NotConverged) => {
            eprintln!("error: fit did not converge");
            EXIT_NO_CONVERGENCE
        }
        Ok(Status::Validity) => EXIT_VALIDITY,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

/// Exit status associated with an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::GridTooCoarse { .. }
        | Error::NoBracket(_)
        | Error::EigenNoConvergence { .. }
        | Error::StepInstability { .. }
        | Error::PositivityViolation { .. }
        | Error::NanObjective { .. } => EXIT_NO_CONVERGENCE,
        Error::Validity { .. } => EXIT_VALIDITY,
        _ => EXIT_DATA,
    }
}

fn run(cli: Cli) -> Result<Status> {
    let config = match &cli.config {
        Some(p) => Config::load(p)?,
        None => Config::default(),
    };
    let ctx = Ctx {
        config,
        out: cli.out,
        strict: cli.strict,
        seed: cli.seed,
        timing: cli.timing,
        started: Instant::now(),
    };
    match cli.command {
        Command::Simulate => simulate(&ctx),
        Command::HomDip {
            model,
            points,
            span_ps,
            g2zero,
        } => hom_dip(&ctx, model, points, span_ps, g2zero),
        Command::Sweep {
            param,
            from,
            to,
            steps,
            observable,
        } => sweep(&ctx, &param, from, to, steps, observable),
        Command::Fit { kind } => fit(&ctx, kind),
        Command::PhononRates {
            from,
            to,
            steps,
            effective,
        } => phonon_rates(&ctx, from, to, steps, effective),
        Command::G2Correct { data, g2zero } => g2_correct(&ctx, &data, g2zero),
    }
}

/// Prints the validity warning when needed; true when `--strict` forbids continuing.
fn check_validity(ctx: &Ctx, p: &SystemParams) -> bool {
    let ratio = validity_ratio(p);
    if ratio < ctx.config.validity_threshold {
        eprintln!(
            "warning: validity ratio {ratio:.4} below threshold {} at delta = {} meV; adiabatic elimination is unreliable",
            ctx.config.validity_threshold, p.delta
        );
        return ctx.strict;
    }
    false
}

fn emit(ctx: &Ctx, text: &str) -> Result<()> {
    match &ctx.out {
        Some(p) => write_atomic(p, text.as_bytes()),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
            Ok(())
        }
    }
}

fn finish_document(ctx: &Ctx, mut doc: ResultDocument) -> Result<()> {
    doc.insert("input", config_echo(&ctx.config));
    if ctx.timing {
        doc.insert("wall_time_s", number(ctx.started.elapsed().as_secs_f64()));
    }
    emit(ctx, &doc.to_text()?)
}

fn config_echo(c: &Config) -> Value {
    let mut m = Map::new();
    for (k, v) in &c.values {
        m.insert(k.clone(), Value::String(v.clone()));
    }
    let mut root = Map::new();
    root.insert("config".into(), Value::Object(m));
    if let Ok(v) = serde_json::to_value(&c.params) {
        root.insert("params".into(), v);
    }
    Value::Object(root)
}

fn model_for(ctx: &Ctx, p: &SystemParams, choice: ModelChoice) -> Result<EmitterModel> {
    let model = match choice {
        ModelChoice::Eliminated => EmitterModel::eliminated(&adiabatic_eliminated_params(p))?,
        ModelChoice::Full => EmitterModel::full(p)?,
    };
    Ok(match ctx.config.grid.dt_ps {
        Some(dt) => model.with_max_step(dt),
        None => model,
    })
}

fn quadrature(ctx: &Ctx) -> QuadratureOptions {
    QuadratureOptions {
        n: ctx.config.grid.quad_points,
        t_extent_factor: ctx.config.grid.t_extent_factor,
        ..QuadratureOptions::default()
    }
}

fn derived_quantities(p: &SystemParams) -> Result<Map<String, Value>> {
    let eff = adiabatic_eliminated_params(p);
    let mut d = Map::new();
    let gamma = purcell_rate(p);
    d.insert("gamma_per_ps".into(), number(gamma));
    d.insert("t1_ps".into(), number(1.0 / gamma));
    d.insert("gamma_tot_per_ps".into(), number(p.gamma_tot()));
    d.insert("validity_ratio".into(), number(validity_ratio(p)));
    d.insert("purcell_factor".into(), number(purcell_factor(p)));
    d.insert("visibility_eliminated".into(), number(visibility(&eff)));
    d.insert(
        "t2_ps".into(),
        number(coherence_time(1.0 / gamma, eff.gamma_pd)),
    );
    let full = EmitterModel::full(p)?;
    d.insert("visibility_full".into(), number(visibility_resolvent(&full)?));
    Ok(d)
}

fn simulate(ctx: &Ctx) -> Result<Status> {
    let p = &ctx.config.params;
    let blocked = check_validity(ctx, p);
    if blocked {
        return Ok(Status::Validity);
    }
    let mut doc = ResultDocument::new("simulate");
    doc.insert("derived", Value::Object(derived_quantities(p)?));

    let model = model_for(ctx, p, ModelChoice::Full)?;
    let grid = TimeGrid::span(ctx.config.grid.t_extent_factor * model.time_scale, 120)?;
    let traj = model.evolve(&grid)?;
    let mut curves = Map::new();
    curves.insert("t_ps".into(), numbers(&grid.times()));
    for (name, idx) in [("pump", 0), ("exciton", 1), ("photon", 2), ("ground", 3)] {
        curves.insert(format!("population_{name}"), numbers(&traj.population(idx)));
    }
    let eff = adiabatic_eliminated_params(p);
    let delays = default_delays(eff.t1(), eff.t_alpha());
    curves.insert("tau_d_ps".into(), numbers(&delays));
    curves.insert(
        "g2hom_analytic".into(),
        numbers(&delays.iter().map(|&t| g2_hom_analytic(t, &eff)).collect::<Vec<_>>()),
    );
    doc.insert("curves", Value::Object(curves));
    finish_document(ctx, doc)?;
    Ok(Status::Ok)
}

fn hom_dip(
    ctx: &Ctx,
    choice: ModelChoice,
    points: usize,
    span_ps: Option<f64>,
    g2zero: f64,
) -> Result<Status> {
    let p = &ctx.config.params;
    if check_validity(ctx, p) {
        return Ok(Status::Validity);
    }
    if !(0.0..=1.0).contains(&g2zero) {
        return Err(Error::InvalidParameter {
            name: "g2zero",
            reason: format!("must lie in [0, 1], got {g2zero}"),
        });
    }
    let eff = adiabatic_eliminated_params(p);
    let half = span_ps.unwrap_or(DEFAULT_DELAY_SPAN * eff.t1().max(eff.t_alpha()));
    let delays = delays_symmetric(half, points);
    let model = model_for(ctx, p, choice)?;
    let (curve, _) = hom_curve_numeric(&model, &delays, &quadrature(ctx), g2zero)?;
    let mut table = Table::new(&["tau_d_ps", "g2hom_analytic", "g2hom_numeric"]);
    for (&t, &g) in delays.iter().zip(&curve.g2hom) {
        table.push(vec![t, g2_hom_analytic(t, &eff) + 0.5 * g2zero, g])?;
    }
    emit(ctx, &table.to_csv()?)?;
    Ok(Status::Ok)
}

fn sweep(
    ctx: &Ctx,
    param: &str,
    from: f64,
    to: f64,
    steps: usize,
    observable: Observable,
) -> Result<Status> {
    let numeric_key = KEYS.iter().any(|(k, _)| *k == param)
        && ctx.config.values[param].parse::<f64>().is_ok();
    if !numeric_key {
        return Err(Error::InvalidParameter {
            name: "param",
            reason: format!("`{param}` is not a numeric configuration key"),
        });
    }
    if steps == 0 || !from.is_finite() || !to.is_finite() {
        return Err(Error::InvalidParameter {
            name: "steps",
            reason: "need at least one step and finite bounds".into(),
        });
    }
    let values: Vec<f64> = (0..steps)
        .map(|i| {
            if steps == 1 {
                from
            } else {
                from + (to - from) * i as f64 / (steps - 1) as f64
            }
        })
        .collect();
    let configs = values
        .iter()
        .map(|v| ctx.config.with_value(param, &format!("{v:?}")))
        .collect::<Result<Vec<_>>>()?;
    let mut blocked = false;
    for c in &configs {
        blocked |= check_validity(ctx, &c.params);
    }
    if blocked {
        return Ok(Status::Validity);
    }
    let rows = configs
        .par_iter()
        .zip(values.par_iter())
        .map(|(c, &v)| sweep_point(&c.params, observable).map(|mut r| {
            r.insert(0, v);
            r
        }))
        .collect::<Result<Vec<_>>>()?;
    let name = observable.name();
    let headers: Vec<String> = match observable {
        Observable::Visibility | Observable::G2hom0 => {
            vec![param.to_string(), format!("{name}_analytic"), format!("{name}_numeric")]
        }
        _ => vec![param.to_string(), name.to_string()],
    };
    let mut table = Table {
        headers,
        rows: Vec::new(),
    };
    for r in rows {
        table.push(r)?;
    }
    emit(ctx, &table.to_csv()?)?;
    Ok(Status::Ok)
}

fn sweep_point(p: &SystemParams, observable: Observable) -> Result<Vec<f64>> {
    let eff = adiabatic_eliminated_params(p);
    Ok(match observable {
        Observable::Visibility => {
            let num = visibility_resolvent(&EmitterModel::full(p)?)?;
            vec![visibility(&eff), num]
        }
        Observable::G2hom0 => {
            let num = visibility_resolvent(&EmitterModel::full(p)?)?;
            vec![0.5 * (1.0 - visibility(&eff)), 0.5 * (1.0 - num)]
        }
        Observable::T1 => vec![eff.t1()],
        Observable::ValidityRatio => vec![validity_ratio(p)],
        Observable::GammaEff => {
            let opts = DephasingOptions {
                min_validity: 0.0,
                ..DephasingOptions::default()
            };
            let r = effective_dephasing_equivalent(p, &opts)?;
            vec![mev_to_uev(rate_to_energy(r.gamma_eff))]
        }
    })
}

fn fit_value(fit: &FitResult) -> Value {
    let mut m = Map::new();
    let params: Map<String, Value> = fit.params.iter().map(|(k, v)| (k.clone(), number(*v))).collect();
    m.insert("params".into(), Value::Object(params));
    m.insert("residual".into(), number(fit.residual));
    m.insert("iterations".into(), Value::from(fit.iterations as u64));
    m.insert("converged".into(), Value::Bool(fit.converged));
    let intervals: Map<String, Value> = fit
        .intervals
        .iter()
        .map(|(k, (lo, hi))| (k.clone(), numbers(&[*lo, *hi])))
        .collect();
    m.insert("intervals".into(), Value::Object(intervals));
    let (xs, ys): (Vec<f64>, Vec<f64>) = fit.model_curve.iter().cloned().unzip();
    let mut curve = Map::new();
    curve.insert("x".into(), numbers(&xs));
    curve.insert("y".into(), numbers(&ys));
    m.insert("model_curve".into(), Value::Object(curve));
    Value::Object(m)
}

/// Reads the fitted parameters of a fit document.
pub fn read_fit_params(path: &Path) -> Result<FitResult> {
    let doc = ResultDocument::read(path)?;
    let params = doc
        .get("fit")
        .and_then(|f| f.get("params"))
        .and_then(Value::as_object)
        .ok_or_else(|| Error::Document(format!("{} has no fit.params", path.display())))?;
    let mut fit = FitResult {
        params: Default::default(),
        residual: 0.0,
        iterations: 0,
        converged: true,
        model_curve: Vec::new(),
        intervals: Default::default(),
    };
    for (k, v) in params {
        let x = v
            .as_f64()
            .ok_or_else(|| Error::Document(format!("parameter `{k}` is not a number")))?;
        fit.params.insert(k.clone(), x);
    }
    Ok(fit)
}

fn fit(ctx: &Ctx, kind: FitCommand) -> Result<Status> {
    let (label, mut result, data, extra, refit): (
        &str,
        FitResult,
        _,
        Map<String, Value>,
        Box<dyn Fn(&crate::fitting::Dataset) -> Result<FitResult> + Sync>,
    );
    let resamples;
    match kind {
        FitCommand::Lifetime {
            data: path,
            kappa,
            bootstrap,
        } => {
            let kappa = kappa.unwrap_or(ctx.config.params.kappa);
            let d = load_dataset(&path, DatasetKind::Lifetime)?;
            result = fit_lifetime_lorentzian(&d, kappa)?;
            let model = LorentzianLifetime::from_fit(&result)?;
            let mut e = Map::new();
            e.insert("t1_at_0_61_mev_ps".into(), number(model.t1(0.61)));
            label = "fit lifetime";
            data = d;
            extra = e;
            refit = Box::new(move |d| fit_lifetime_lorentzian(d, kappa));
            resamples = bootstrap;
        }
        FitCommand::Dip {
            data: path,
            t1,
            bootstrap,
        } => {
            let d = load_dataset(&path, DatasetKind::HomDip)?;
            result = fit_hom_dip_simple(&d, t1)?;
            label = "fit dip";
            data = d;
            extra = Map::new();
            refit = Box::new(move |d| fit_hom_dip_simple(d, t1));
            resamples = bootstrap;
        }
        FitCommand::Joint {
            dip,
            vis,
            lifetime,
            fix_gamma,
            dip_detuning,
            bootstrap,
        } => {
            let d = load_dataset(&dip, DatasetKind::HomDip)?;
            let v = vis.map(|p| load_dataset(&p, DatasetKind::Visibility)).transpose()?;
            let decay = match lifetime {
                Some(p) => DecayModel::Lorentzian(LorentzianLifetime::from_fit(&read_fit_params(&p)?)?),
                None => DecayModel::Purcell(ctx.config.params.clone()),
            };
            let opts = JointOptions {
                fix_gamma_uev: fix_gamma,
                dip_detuning,
                ..JointOptions::default()
            };
            result = fit_hom_joint(&d, v.as_ref(), &decay, &opts)?;
            let rate = decay.rate(dip_detuning);
            let regime = classify_regime(rate, result.param("alpha_per_ps"), result.param("gamma_per_ps"));
            let mut e = Map::new();
            e.insert(
                "regime".into(),
                Value::String(match regime {
                    Regime::PureDephasing => "pure_dephasing".into(),
                    Regime::TimeJitter => "time_jitter".into(),
                }),
            );
            label = "fit joint";
            data = d;
            extra = e;
            let v2 = v.clone();
            refit = Box::new(move |d| fit_hom_joint(d, v2.as_ref(), &decay, &opts));
            resamples = bootstrap;
        }
        FitCommand::Michelson {
            data: path,
            bootstrap,
        } => {
            let d = load_dataset(&path, DatasetKind::Michelson)?;
            result = fit_michelson(&d)?;
            label = "fit michelson";
            data = d;
            extra = Map::new();
            refit = Box::new(fit_michelson);
            resamples = bootstrap;
        }
    }
    if resamples > 0 {
        result.intervals = bootstrap(&data, &result, resamples, ctx.seed, |d| refit(d))?;
    }
    let mut doc = ResultDocument::new(label);
    doc.insert("fit", fit_value(&result));
    for (k, v) in extra {
        doc.insert(&k, v);
    }
    let mut b = Map::new();
    b.insert("resamples".into(), Value::from(resamples as u64));
    b.insert("seed".into(), Value::from(ctx.seed));
    doc.insert("bootstrap", Value::Object(b));
    finish_document(ctx, doc)?;
    Ok(if result.converged {
        Status::Ok
    } else {
        Status::NotConverged
    })
}

fn phonon_rates(ctx: &Ctx, from: f64, to: f64, steps: usize, effective: bool) -> Result<Status> {
    if steps < 2 {
        return Err(Error::InvalidParameter {
            name: "steps",
            reason: "at least 2 steps required".into(),
        });
    }
    let ph = &ctx.config.phonon;
    ph.validate()?;
    let mut table = Table::new(&["omega_mev", "spectral_density_mev", "rate_re_per_ps", "rate_im_per_ps"]);
    for i in 0..steps {
        let w = from + (to - from) * i as f64 / (steps - 1) as f64;
        let r = half_fourier_rate(w, ph);
        table.push(vec![w, spectral_density(w.abs(), ph)?, r.re, r.im])?;
    }
    emit(ctx, &table.to_csv()?)?;
    if effective {
        let p = ctx.config.params.with_phonons(Some(ph.clone()));
        if check_validity(ctx, &p) {
            return Ok(Status::Validity);
        }
        let opts = DephasingOptions {
            min_validity: 0.0,
            ..DephasingOptions::default()
        };
        let r = effective_dephasing_equivalent(&p, &opts)?;
        eprintln!(
            "gamma_eff = {:.6} ueV, phonon share = {:.4}",
            mev_to_uev(rate_to_energy(r.gamma_eff)),
            r.phonon_share
        );
    }
    Ok(Status::Ok)
}

fn g2_correct(ctx: &Ctx, path: &Path, g2zero: f64) -> Result<Status> {
    let d = load_dataset(path, DatasetKind::HomDip)?;
    let corrected = background_correct(&d.y, g2zero)?;
    if corrected.clamped > 0 {
        eprintln!("note: {} values clamped at zero", corrected.clamped);
    }
    let headers: &[&str] = if d.sigma.is_some() {
        &["tau_d_ns", "g2hom", "g2hom_err"]
    } else {
        &["tau_d_ns", "g2hom"]
    };
    let mut table = Table::new(headers);
    for i in 0..d.len() {
        let mut row = vec![crate::units::ps_to_ns(d.x[i]), corrected.values[i]];
        if let Some(s) = &d.sigma {
            row.push(s[i]);
        }
        table.push(row)?;
    }
    emit(ctx, &table.to_csv()?)?;
    Ok(Status::Ok)
}
