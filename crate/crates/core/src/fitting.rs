//! Derivative-free least-squares fits of lifetime, HOM-dip, visibility and
//! Michelson data, with residual-bootstrap uncertainty estimates.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::correlations::{g2_hom_analytic, michelson_contrast, visibility};
use crate::error::{Error, Result};
use crate::model::{purcell_rate, EffectiveParams, SystemParams};
use crate::units::{energy_to_rate, rate_to_energy, uev_to_mev, mev_to_uev};

/// Measured points `(x, y ± σ)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub sigma: Option<Vec<f64>>,
    pub label: String,
}

impl Dataset {
    pub fn new(x: Vec<f64>, y: Vec<f64>, sigma: Option<Vec<f64>>, label: impl Into<String>) -> Result<Self> {
        let d = Dataset {
            x,
            y,
            sigma,
            label: label.into(),
        };
        d.validate()?;
        Ok(d)
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn validate(&self) -> Result<()> {
        if self.x.len() != self.y.len() {
            return Err(Error::Data {
                row: 0,
                message: format!("{} x values but {} y values", self.x.len(), self.y.len()),
            });
        }
        if let Some(s) = &self.sigma {
            if s.len() != self.x.len() {
                return Err(Error::Data {
                    row: 0,
                    message: format!("{} uncertainties for {} points", s.len(), self.x.len()),
                });
            }
            if let Some(i) = s.iter().position(|&v| !(v > 0.0 && v.is_finite())) {
                return Err(Error::Data {
                    row: i + 1,
                    message: format!("uncertainty must be positive, got {}", s[i]),
                });
            }
        }
        for (i, (x, y)) in self.x.iter().zip(&self.y).enumerate() {
            if !x.is_finite() || !y.is_finite() {
                return Err(Error::Data {
                    row: i + 1,
                    message: "non-finite value".into(),
                });
            }
        }
        Ok(())
    }

    fn require_points(&self, free: usize) -> Result<()> {
        if self.len() < free + 1 {
            return Err(Error::Data {
                row: 0,
                message: format!(
                    "dataset `{}` has {} points, fitting {free} parameters needs at least {}",
                    self.label,
                    self.len(),
                    free + 1
                ),
            });
        }
        Ok(())
    }

    /// Rows sorted by (x, y, σ) so that fits do not depend on input order.
    pub fn canonical(&self) -> Dataset {
        let mut idx: Vec<usize> = (0..self.len()).collect();
        let sig = |i: usize| self.sigma.as_ref().map_or(0.0, |s| s[i]);
        idx.sort_by(|&a, &b| {
            self.x[a]
                .total_cmp(&self.x[b])
                .then(self.y[a].total_cmp(&self.y[b]))
                .then(sig(a).total_cmp(&sig(b)))
        });
        Dataset {
            x: idx.iter().map(|&i| self.x[i]).collect(),
            y: idx.iter().map(|&i| self.y[i]).collect(),
            sigma: self.sigma.as_ref().map(|s| idx.iter().map(|&i| s[i]).collect()),
            label: self.label.clone(),
        }
    }

    fn weight(&self, i: usize) -> f64 {
        self.sigma.as_ref().map_or(1.0, |s| 1.0 / (s[i] * s[i]))
    }

    /// Σ wᵢ (yᵢ − model(xᵢ))², inverse-variance weighted when σ is present.
    pub fn chi_square(&self, model: impl Fn(f64) -> f64) -> f64 {
        (0..self.len())
            .map(|i| {
                let r = self.y[i] - model(self.x[i]);
                self.weight(i) * r * r
            })
            .sum()
    }

    fn with_y(&self, y: Vec<f64>) -> Dataset {
        Dataset {
            y,
            ..self.clone()
        }
    }
}

/// Settings of [`nelder_mead`].
#[derive(Debug, Clone, PartialEq)]
pub struct NelderMeadOptions {
    pub max_iter: usize,
    /// Simplex diameter below which the search stops.
    pub tol: f64,
    /// Initial edge length as a fraction of each coordinate.
    pub initial_scale: f64,
    /// Edge length used for coordinates that start at zero.
    pub zero_step: f64,
    /// Box constraints `(lower, upper)` per coordinate.
    pub bounds: Option<Vec<(f64, f64)>>,
}

impl Default for NelderMeadOptions {
    fn default() -> Self {
        NelderMeadOptions {
            max_iter: 5000,
            tol: 1e-9,
            initial_scale: 0.2,
            zero_step: 0.2,
            bounds: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Best objective value after each iteration.
    pub history: Vec<f64>,
}

const PENALTY_SLOPE: f64 = 1e6;

/// Downhill simplex minimisation with reflection 1, expansion 2,
/// contraction ½ and shrink ½. Bounds are enforced by evaluating at the
/// clamped point plus a linear penalty on the violation.
pub fn nelder_mead(
    mut objective: impl FnMut(&[f64]) -> f64,
    x0: &[f64],
    opts: &NelderMeadOptions,
) -> Result<Minimum> {
    let n = x0.len();
    if n == 0 {
        return Err(Error::InvalidParameter {
            name: "x0",
            reason: "at least one parameter is required".into(),
        });
    }
    if let Some(b) = &opts.bounds {
        if b.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: b.len(),
            });
        }
    }
    let mut eval = |x: &[f64]| -> Result<f64> {
        let (clamped, violation) = match &opts.bounds {
            None => (x.to_vec(), 0.0),
            Some(b) => {
                let mut v = 0.0;
                let c = x
                    .iter()
                    .zip(b)
                    .map(|(&xi, &(lo, hi))| {
                        if xi < lo {
                            v += lo - xi;
                            lo
                        } else if xi > hi {
                            v += xi - hi;
                            hi
                        } else {
                            xi
                        }
                    })
                    .collect::<Vec<_>>();
                (c, v)
            }
        };
        let f = objective(&clamped);
        if f.is_nan() {
            return Err(Error::NanObjective { point: x.to_vec() });
        }
        Ok(f + PENALTY_SLOPE * (1.0 + f.abs()) * violation)
    };

    let mut simplex: Vec<Vec<f64>> = vec![x0.to_vec()];
    for i in 0..n {
        let mut v = x0.to_vec();
        let step = if x0[i] != 0.0 {
            opts.initial_scale * x0[i]
        } else {
            opts.zero_step
        };
        v[i] += step;
        simplex.push(v);
    }
    let mut values = simplex.iter().map(|v| eval(v)).collect::<Result<Vec<f64>>>()?;
    let mut history = Vec::new();
    let mut iterations = 0;
    let mut converged = false;

    loop {
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        simplex = order.iter().map(|&i| simplex[i].clone()).collect();
        values = order.iter().map(|&i| values[i]).collect();

        let spread = values[n] - values[0];
        let diameter = simplex[1..]
            .iter()
            .map(|v| {
                v.iter()
                    .zip(&simplex[0])
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max);
        if diameter < opts.tol || spread == 0.0 {
            converged = true;
            break;
        }
        if iterations >= opts.max_iter {
            break;
        }
        iterations += 1;

        let centroid: Vec<f64> = (0..n)
            .map(|j| simplex[..n].iter().map(|v| v[j]).sum::<f64>() / n as f64)
            .collect();
        let along = |t: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&simplex[n])
                .map(|(c, w)| c + t * (c - w))
                .collect()
        };
        let xr = along(1.0);
        let fr = eval(&xr)?;
        if fr < values[0] {
            let xe = along(2.0);
            let fe = eval(&xe)?;
            if fe < fr {
                simplex[n] = xe;
                values[n] = fe;
            } else {
                simplex[n] = xr;
                values[n] = fr;
            }
        } else if fr < values[n - 1] {
            simplex[n] = xr;
            values[n] = fr;
        } else {
            let (xc, fc) = if fr < values[n] {
                let xc = along(0.5);
                let fc = eval(&xc)?;
                (xc, fc)
            } else {
                let xc = along(-0.5);
                let fc = eval(&xc)?;
                (xc, fc)
            };
            if fc < values[n].min(fr) {
                simplex[n] = xc;
                values[n] = fc;
            } else {
                let best = simplex[0].clone();
                for i in 1..=n {
                    simplex[i] = best
                        .iter()
                        .zip(&simplex[i])
                        .map(|(b, v)| b + 0.5 * (v - b))
                        .collect();
                    values[i] = eval(&simplex[i])?;
                }
            }
        }
        let best = values.iter().cloned().fold(f64::INFINITY, f64::min);
        history.push(best);
    }
    let mut x = simplex[0].clone();
    if let Some(b) = &opts.bounds {
        for (xi, &(lo, hi)) in x.iter_mut().zip(b) {
            *xi = xi.clamp(lo, hi);
        }
    }
    Ok(Minimum {
        x,
        value: values[0],
        iterations,
        converged,
        history,
    })
}

/// Fitted parameters with goodness of fit and the model sampled at the data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub params: BTreeMap<String, f64>,
    /// Chi-square (unweighted sum of squares without uncertainties).
    pub residual: f64,
    pub iterations: usize,
    pub converged: bool,
    /// `(x, model(x))` at the sorted data abscissae.
    pub model_curve: Vec<(f64, f64)>,
    /// Central 68 % bootstrap intervals, when computed.
    pub intervals: BTreeMap<String, (f64, f64)>,
}

impl FitResult {
    pub fn param(&self, name: &str) -> f64 {
        self.params.get(name).copied().unwrap_or(f64::NAN)
    }
}

/// Common settings of the model fits.
#[derive(Debug, Clone, Default)]
pub struct FitOptions {
    /// Starting point in the fit's own parameterisation.
    pub x0: Option<Vec<f64>>,
    pub nelder_mead: NelderMeadOptions,
}

/// Γ(Δ) = Γ_B + R₀ w²/(w² + Δ²) with half width w = κ/2.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LorentzianLifetime {
    /// ps⁻¹
    pub gamma_b: f64,
    /// ps⁻¹
    pub r0: f64,
    /// meV
    pub kappa: f64,
}

impl LorentzianLifetime {
    /// Model with background lifetime `t_b` (ps) and Purcell factor `f_p`.
    pub fn from_purcell(t_b: f64, f_p: f64, kappa: f64) -> Self {
        LorentzianLifetime {
            gamma_b: 1.0 / t_b,
            r0: f_p / t_b,
            kappa,
        }
    }

    pub fn rate(&self, delta: f64) -> f64 {
        let w = 0.5 * self.kappa;
        self.gamma_b + self.r0 * w * w / (w * w + delta * delta)
    }

    pub fn t1(&self, delta: f64) -> f64 {
        1.0 / self.rate(delta)
    }

    pub fn purcell_factor(&self) -> f64 {
        self.r0 / self.gamma_b
    }

    pub fn from_fit(fit: &FitResult) -> Result<Self> {
        let get = |k: &str| {
            fit.params.get(k).copied().ok_or_else(|| Error::Document(format!(
                "lifetime fit lacks parameter `{k}`"
            )))
        };
        Ok(LorentzianLifetime {
            gamma_b: get("gamma_b_per_ps")?,
            r0: get("r0_per_ps")?,
            kappa: get("kappa_mev")?,
        })
    }
}

/// Source of the detuning-dependent decay rate Γ(Δ) in ps⁻¹.
#[derive(Debug, Clone, PartialEq)]
pub enum DecayModel {
    Lorentzian(LorentzianLifetime),
    Purcell(SystemParams),
}

impl DecayModel {
    pub fn rate(&self, delta: f64) -> f64 {
        match self {
            DecayModel::Lorentzian(l) => l.rate(delta),
            DecayModel::Purcell(p) => purcell_rate(&p.with_delta(delta)),
        }
    }
}

fn model_curve(data: &Dataset, f: impl Fn(f64) -> f64) -> Vec<(f64, f64)> {
    data.x.iter().map(|&x| (x, f(x))).collect()
}

/// Fits T₁(Δ) = 1/Γ(Δ) with a Lorentzian of fixed width κ/2.
///
/// Parameters are reported as `t_b_ps`, `purcell_factor`, `gamma_b_per_ps`,
/// `r0_per_ps`, `kappa_mev` and `t1_resonance_ps`.
pub fn fit_lifetime_lorentzian(data: &Dataset, kappa: f64) -> Result<FitResult> {
    fit_lifetime_lorentzian_with(data, kappa, &FitOptions::default())
}

pub fn fit_lifetime_lorentzian_with(data: &Dataset, kappa: f64, opts: &FitOptions) -> Result<FitResult> {
    data.validate()?;
    let data = data.canonical();
    let spans_both = data.x.iter().any(|&x| x < 0.0) && data.x.iter().any(|&x| x > 0.0);
    if !(spans_both || data.len() >= 4) {
        return Err(Error::Data {
            row: 0,
            message: "lifetime fit needs both detuning signs or at least 4 points".into(),
        });
    }
    data.require_points(2)?;
    if !(kappa > 0.0) {
        return Err(Error::InvalidParameter {
            name: "kappa",
            reason: format!("must be positive, got {kappa}"),
        });
    }
    let x0 = opts.x0.clone().unwrap_or_else(|| {
        let t_max = data.y.iter().cloned().fold(f64::MIN, f64::max);
        let t_min = data.y.iter().cloned().fold(f64::MAX, f64::min);
        vec![t_max, (t_max / t_min - 1.0).max(0.1)]
    });
    let mut nm = opts.nelder_mead.clone();
    nm.bounds.get_or_insert(vec![(1e-3, 1e9), (0.0, 1e6)]);
    let objective = |p: &[f64]| {
        let m = LorentzianLifetime::from_purcell(p[0], p[1], kappa);
        data.chi_square(|d| m.t1(d))
    };
    let min = nelder_mead(objective, &x0, &nm)?;
    let m = LorentzianLifetime::from_purcell(min.x[0], min.x[1], kappa);
    let mut params = BTreeMap::new();
    params.insert("t_b_ps".into(), min.x[0]);
    params.insert("purcell_factor".into(), min.x[1]);
    params.insert("gamma_b_per_ps".into(), m.gamma_b);
    params.insert("r0_per_ps".into(), m.r0);
    params.insert("kappa_mev".into(), kappa);
    params.insert("t1_resonance_ps".into(), m.t1(0.0));
    Ok(FitResult {
        params,
        residual: min.value,
        iterations: min.iterations,
        converged: min.converged,
        model_curve: model_curve(&data, |d| m.t1(d)),
        intervals: BTreeMap::new(),
    })
}

/// Fits 0.5(1 − ν e^{−|τ|/T₁}) with fixed T₁ (ps); free ν ∈ [0, 1].
pub fn fit_hom_dip_simple(data: &Dataset, t1: f64) -> Result<FitResult> {
    fit_hom_dip_simple_with(data, t1, &FitOptions::default())
}

pub fn fit_hom_dip_simple_with(data: &Dataset, t1: f64, opts: &FitOptions) -> Result<FitResult> {
    data.validate()?;
    data.require_points(1)?;
    if !(t1 > 0.0) {
        return Err(Error::InvalidParameter {
            name: "t1",
            reason: format!("must be positive, got {t1}"),
        });
    }
    let data = data.canonical();
    let model = |nu: f64, tau: f64| 0.5 * (1.0 - nu * (-tau.abs() / t1).exp());
    let mut nm = opts.nelder_mead.clone();
    nm.bounds.get_or_insert(vec![(0.0, 1.0)]);
    let x0 = opts.x0.clone().unwrap_or_else(|| vec![0.5]);
    let min = nelder_mead(|p| data.chi_square(|t| model(p[0], t)), &x0, &nm)?;
    let nu = min.x[0];
    let mut params = BTreeMap::new();
    params.insert("visibility".into(), nu);
    params.insert("t1_ps".into(), t1);
    Ok(FitResult {
        params,
        residual: min.value,
        iterations: min.iterations,
        converged: min.converged,
        model_curve: model_curve(&data, |t| model(nu, t)),
        intervals: BTreeMap::new(),
    })
}

/// Settings of [`fit_hom_joint`].
#[derive(Debug, Clone, Default)]
pub struct JointOptions {
    /// Pure dephasing held fixed (μeV); only T_α is fitted.
    pub fix_gamma_uev: Option<f64>,
    /// Detuning (meV) at which the delay scan was recorded.
    pub dip_detuning: f64,
    /// Starting `(T_α ps, γ μeV)`; defaults to (10 ps, 2 μeV).
    pub x0: Option<(f64, f64)>,
    pub nelder_mead: NelderMeadOptions,
}

/// Joint chi-square of the eliminated-model dip and visibility-versus-detuning data.
pub fn joint_chi_square(
    dip: &Dataset,
    vis: Option<&Dataset>,
    decay: &DecayModel,
    dip_detuning: f64,
    t_alpha: f64,
    gamma_uev: f64,
) -> f64 {
    let gamma = energy_to_rate(uev_to_mev(gamma_uev));
    let alpha = 1.0 / t_alpha;
    let eff_dip = EffectiveParams::new(decay.rate(dip_detuning), gamma, alpha, dip_detuning);
    let mut chi = dip.chi_square(|t| g2_hom_analytic(t, &eff_dip));
    if let Some(v) = vis {
        chi += v.chi_square(|d| visibility(&EffectiveParams::new(decay.rate(d), gamma, alpha, d)));
    }
    chi
}

/// Fits (T_α, γ) of the eliminated model to a HOM dip (delays in ps) and,
/// optionally, dip depth versus detuning (meV), with Γ(Δ) from `decay`.
///
/// Parameters are reported as `t_alpha_ps`, `gamma_uev`, `alpha_per_ps`,
/// `gamma_per_ps` and the dip and visibility chi-squares.
pub fn fit_hom_joint(
    dip: &Dataset,
    vis: Option<&Dataset>,
    decay: &DecayModel,
    opts: &JointOptions,
) -> Result<FitResult> {
    dip.validate()?;
    if dip.is_empty() {
        return Err(Error::Data {
            row: 0,
            message: "dip dataset is empty".into(),
        });
    }
    let dip = dip.canonical();
    let vis = match vis {
        Some(v) => {
            v.validate()?;
            if v.is_empty() {
                return Err(Error::Data {
                    row: 0,
                    message: "visibility dataset is empty".into(),
                });
            }
            Some(v.canonical())
        }
        None => None,
    };
    let free = if opts.fix_gamma_uev.is_some() { 1 } else { 2 };
    let total = dip.len() + vis.as_ref().map_or(0, |v| v.len());
    if total < free + 1 {
        return Err(Error::Data {
            row: 0,
            message: format!("{total} points cannot constrain {free} parameters"),
        });
    }
    let (t0, g0) = opts.x0.unwrap_or((10.0, 2.0));
    let mut nm = opts.nelder_mead.clone();
    let chi = |ta: f64, g: f64| joint_chi_square(&dip, vis.as_ref(), decay, opts.dip_detuning, ta, g);
    let (t_alpha, gamma_uev, min) = match opts.fix_gamma_uev {
        Some(g) => {
            nm.bounds.get_or_insert(vec![(1e-3, 1e4)]);
            let min = nelder_mead(|p| chi(p[0], g), &[t0], &nm)?;
            (min.x[0], g, min)
        }
        None => {
            nm.bounds.get_or_insert(vec![(1e-3, 1e4), (0.0, 1e3)]);
            let min = nelder_mead(|p| chi(p[0], p[1]), &[t0, g0], &nm)?;
            (min.x[0], min.x[1], min)
        }
    };
    let gamma = energy_to_rate(uev_to_mev(gamma_uev));
    let eff_dip = EffectiveParams::new(decay.rate(opts.dip_detuning), gamma, 1.0 / t_alpha, opts.dip_detuning);
    let mut params = BTreeMap::new();
    params.insert("t_alpha_ps".into(), t_alpha);
    params.insert("gamma_uev".into(), gamma_uev);
    params.insert("alpha_per_ps".into(), 1.0 / t_alpha);
    params.insert("gamma_per_ps".into(), gamma);
    params.insert("dip_chi_square".into(), dip.chi_square(|t| g2_hom_analytic(t, &eff_dip)));
    params.insert("visibility_resonance".into(), visibility(&eff_dip));
    if let Some(v) = &vis {
        let vc = v.chi_square(|d| {
            visibility(&EffectiveParams::new(decay.rate(d), gamma, 1.0 / t_alpha, d))
        });
        params.insert("vis_chi_square".into(), vc);
    }
    Ok(FitResult {
        params,
        residual: min.value,
        iterations: min.iterations,
        converged: min.converged,
        model_curve: model_curve(&dip, |t| g2_hom_analytic(t, &eff_dip)),
        intervals: BTreeMap::new(),
    })
}

/// Fits A + B exp[−(π/2)(τ/T₂)²] to contrast versus path delay (ps).
pub fn fit_michelson(data: &Dataset) -> Result<FitResult> {
    fit_michelson_with(data, &FitOptions::default())
}

pub fn fit_michelson_with(data: &Dataset, opts: &FitOptions) -> Result<FitResult> {
    data.validate()?;
    data.require_points(3)?;
    let data = data.canonical();
    let x0 = opts.x0.clone().unwrap_or_else(|| {
        let lo = data.y.iter().cloned().fold(f64::MAX, f64::min);
        let hi = data.y.iter().cloned().fold(f64::MIN, f64::max);
        let target = lo + (hi - lo) * (-std::f64::consts::FRAC_PI_2).exp();
        let t2 = data
            .x
            .iter()
            .zip(&data.y)
            .filter(|(x, _)| x.abs() > 0.0)
            .min_by(|a, b| (a.1 - target).abs().total_cmp(&(b.1 - target).abs()))
            .map(|(x, _)| x.abs())
            .unwrap_or(1.0);
        vec![lo.max(1e-3), (hi - lo).max(1e-3), t2]
    });
    let mut nm = opts.nelder_mead.clone();
    nm.bounds.get_or_insert(vec![(-1e3, 1e3), (-1e3, 1e3), (1e-6, 1e9)]);
    let min = nelder_mead(
        |p| data.chi_square(|t| michelson_contrast(t, p[0], p[1], p[2])),
        &x0,
        &nm,
    )?;
    let (a, b, t2) = (min.x[0], min.x[1], min.x[2]);
    let mut params = BTreeMap::new();
    params.insert("a".into(), a);
    params.insert("b".into(), b);
    params.insert("t2_ps".into(), t2);
    Ok(FitResult {
        params,
        residual: min.value,
        iterations: min.iterations,
        converged: min.converged,
        model_curve: model_curve(&data, |t| michelson_contrast(t, a, b, t2)),
        intervals: BTreeMap::new(),
    })
}

pub const BOOTSTRAP_RESAMPLES: usize = 200;

/// Residual bootstrap of a fit.
///
/// Standardised residuals of `fit` are resampled with replacement onto its
/// model curve and `refit` is rerun on each synthetic dataset. Replicate `i`
/// draws from ChaCha8 stream `i` of `seed`, so results do not depend on
/// thread scheduling. Returns central 68 % intervals per parameter.
pub fn bootstrap<F>(
    data: &Dataset,
    fit: &FitResult,
    resamples: usize,
    seed: u64,
    refit: F,
) -> Result<BTreeMap<String, (f64, f64)>>
where
    F: Fn(&Dataset) -> Result<FitResult> + Sync,
{
    let data = data.canonical();
    if fit.model_curve.len() != data.len() {
        return Err(Error::DimensionMismatch {
            expected: data.len(),
            found: fit.model_curve.len(),
        });
    }
    let scale: Vec<f64> = (0..data.len())
        .map(|i| data.sigma.as_ref().map_or(1.0, |s| s[i]))
        .collect();
    let standardized: Vec<f64> = (0..data.len())
        .map(|i| (data.y[i] - fit.model_curve[i].1) / scale[i])
        .collect();
    let replicates: Vec<Result<FitResult>> = (0..resamples)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            let y = (0..data.len())
                .map(|k| {
                    let j = rng.random_range(0..standardized.len());
                    fit.model_curve[k].1 + scale[k] * standardized[j]
                })
                .collect();
            refit(&data.with_y(y))
        })
        .collect();
    let mut samples: BTreeMap<String, Vec<f64>> = BTreeMap::new();
    for r in replicates {
        let r = r?;
        for (k, v) in r.params {
            samples.entry(k).or_default().push(v);
        }
    }
    Ok(samples
        .into_iter()
        .map(|(k, mut v)| {
            v.sort_by(f64::total_cmp);
            (k, (quantile(&v, 0.16), quantile(&v, 0.84)))
        })
        .collect())
}

fn quantile(sorted: &[f64], q: f64) -> f64 {
    if sorted.is_empty() {
        return f64::NAN;
    }
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    let frac = pos - lo as f64;
    sorted[lo] * (1.0 - frac) + sorted[hi] * frac
}

/// Dominant source of indistinguishability loss.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    PureDephasing,
    TimeJitter,
}

/// Compares the dephasing loss 2γ/(Γ+2γ) with the jitter loss Γ/(Γ+α).
pub fn classify_regime(decay_rate: f64, alpha: f64, gamma: f64) -> Regime {
    let dephasing = 2.0 * gamma / (decay_rate + 2.0 * gamma);
    let jitter = decay_rate / (decay_rate + alpha);
    if dephasing > jitter {
        Regime::PureDephasing
    } else {
        Regime::TimeJitter
    }
}

/// γ in μeV for a rate in ps⁻¹.
pub fn rate_to_uev(rate: f64) -> f64 {
    mev_to_uev(rate_to_energy(rate))
}
