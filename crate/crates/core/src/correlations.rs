//! Photon-correlation observables: closed forms for the eliminated emitter,
//! the numerical HOM pipeline over two-time G¹ grids, an exact
//! resolvent evaluation of the coalescence probability, background
//! correction and coherence-time relations.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::dynamics::{CorrelationGrid, TimeGrid};
use crate::error::{Error, Result};
use crate::linalg::{dot, trace_functional, ComplexMatrix, LuDecomposition, Superoperator, C64};
use crate::model::{EffectiveParams, EmitterModel};
use crate::units::HBAR;

/// Excited-state population of the eliminated emitter after excitation of
/// the pump level at t = 0.
pub fn excited_population_analytic(t: f64, alpha: f64, gamma: f64) -> f64 {
    if t < 0.0 {
        return 0.0;
    }
    let x = (gamma - alpha).abs() * t;
    let ratio = if x == 0.0 { 1.0 } else { -(-x).exp_m1() / x };
    alpha * t * (-alpha.min(gamma) * t).exp() * ratio
}

/// G¹(t, t+τ) of the eliminated emitter. Negative τ uses G¹(t,t+τ) = G¹(t+τ,t)*.
pub fn g1_analytic(t: f64, tau: f64, eff: &EffectiveParams) -> C64 {
    let decay = C64::new(
        eff.gamma_pd + 0.5 * eff.decay_rate,
        eff.delta / HBAR,
    );
    if tau >= 0.0 {
        let pop = excited_population_analytic(t, eff.alpha, eff.decay_rate);
        (-decay * tau).exp() * pop
    } else {
        let pop = excited_population_analytic(t + tau, eff.alpha, eff.decay_rate);
        ((-decay * (-tau)).exp() * pop).conj()
    }
}

/// ν = Γ/(Γ+2γ) · α/(Γ+α).
pub fn visibility(eff: &EffectiveParams) -> f64 {
    let g = eff.decay_rate;
    g / (g + 2.0 * eff.gamma_pd) * eff.alpha / (g + eff.alpha)
}

/// Background-free HOM coincidence probability versus delay.
pub fn g2_hom_analytic(tau_d: f64, eff: &EffectiveParams) -> f64 {
    let nu = visibility(eff);
    let t = tau_d.abs();
    let (g, a) = (eff.decay_rate, eff.alpha);
    let bracket = if (g - a).abs() < 1e-9 * g {
        (1.0 + g * t) * (-g * t).exp()
    } else {
        (g * (-a * t).exp() - a * (-g * t).exp()) / (g - a)
    };
    0.5 * (1.0 - nu * bracket)
}

/// Single-exponential dip 0.5(1 − ν e^{−|τ|/T₁}).
pub fn g2_hom_single_exponential(tau_d: f64, nu: f64, t1: f64) -> f64 {
    0.5 * (1.0 - nu * (-tau_d.abs() / t1).exp())
}

/// ½ g²(0) + ½ (1 − C).
pub fn g2_hom_numeric(c: f64, g2zero: f64) -> f64 {
    0.5 * g2zero + 0.5 * (1.0 - c)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HomMethod {
    Analytic,
    Numeric,
}

/// g²_HOM sampled on a set of delays (ps).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HomCurve {
    pub tau_d: Vec<f64>,
    pub g2hom: Vec<f64>,
    pub visibility: f64,
    pub method: HomMethod,
}

pub fn hom_curve_analytic(eff: &EffectiveParams, delays: &[f64]) -> HomCurve {
    HomCurve {
        tau_d: delays.to_vec(),
        g2hom: delays.iter().map(|&t| g2_hom_analytic(t, eff)).collect(),
        visibility: visibility(eff),
        method: HomMethod::Analytic,
    }
}

/// Number of delays in a default curve.
pub const DEFAULT_DELAY_COUNT: usize = 41;

/// Half-width of the default delay window in units of max(T₁, T_α).
pub const DEFAULT_DELAY_SPAN: f64 = 7.0;

/// 41 delays spanning ±7·max(T₁, T_α).
pub fn default_delays(t1: f64, t_alpha: f64) -> Vec<f64> {
    delays_symmetric(DEFAULT_DELAY_SPAN * t1.max(t_alpha), DEFAULT_DELAY_COUNT)
}

/// `count` evenly spaced delays on [−half_width, half_width].
pub fn delays_symmetric(half_width: f64, count: usize) -> Vec<f64> {
    if count < 2 {
        return vec![0.0];
    }
    let step = 2.0 * half_width / (count - 1) as f64;
    (0..count)
        .map(|i| {
            let x = -half_width + i as f64 * step;
            if (2 * i + 1 == count) || x.abs() < 1e-12 * half_width {
                0.0
            } else {
                x
            }
        })
        .collect()
}

/// Two-time coalescence probability C(τ_D) with its raw integrals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoalescenceResult {
    pub tau_d: Vec<f64>,
    pub c: Vec<f64>,
    pub numerator: Vec<f64>,
    pub denominator: f64,
    /// max |C_{2n} − C_n| of the convergence check, 0 for single-grid results.
    pub grid_difference: f64,
}

impl CoalescenceResult {
    pub fn g2hom(&self, g2zero: f64) -> Vec<f64> {
        self.c.iter().map(|&c| g2_hom_numeric(c, g2zero)).collect()
    }

    pub fn to_curve(&self, g2zero: f64, visibility: f64) -> HomCurve {
        HomCurve {
            tau_d: self.tau_d.clone(),
            g2hom: self.g2hom(g2zero),
            visibility,
            method: HomMethod::Numeric,
        }
    }
}

/// Settings of the two-dimensional trapezoid quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureOptions {
    /// Intervals per axis on the coarse grid; the check grid uses 2n.
    pub n: usize,
    /// Axis extent in units of max(1/Γ, 1/α).
    pub t_extent_factor: f64,
    /// Largest accepted |C_{2n} − C_n|.
    pub tolerance: f64,
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        QuadratureOptions {
            n: 1200,
            t_extent_factor: 12.0,
            tolerance: 1e-3,
        }
    }
}

/// Anything that can tabulate G¹(t, t+τ) on a square uniform grid.
pub trait G1Source {
    /// max(1/Γ, 1/α) in ps.
    fn time_scale(&self) -> f64;
    /// Grid with `intervals + 1` points per axis and spacing `h`.
    fn correlation_grid(&self, h: f64, intervals: usize) -> Result<CorrelationGrid>;
}

impl G1Source for EffectiveParams {
    fn time_scale(&self) -> f64 {
        (1.0 / self.decay_rate).max(1.0 / self.alpha)
    }

    fn correlation_grid(&self, h: f64, intervals: usize) -> Result<CorrelationGrid> {
        let grid = TimeGrid::new(0.0, h, intervals + 1)?;
        Ok(CorrelationGrid::from_analytic(self, &grid, &grid))
    }
}

impl G1Source for EmitterModel {
    fn time_scale(&self) -> f64 {
        self.time_scale
    }

    fn correlation_grid(&self, h: f64, intervals: usize) -> Result<CorrelationGrid> {
        let grid = TimeGrid::new(0.0, h, intervals + 1)?;
        let traj = self.evolve(&grid)?;
        self.g1(&traj, &grid)
    }
}

impl CorrelationGrid {
    /// Tabulates the closed-form G¹ of the eliminated emitter.
    pub fn from_analytic(eff: &EffectiveParams, t_grid: &TimeGrid, tau_grid: &TimeGrid) -> Self {
        let mut values = Vec::with_capacity(t_grid.n * tau_grid.n);
        for i in 0..t_grid.n {
            let t = t_grid.time(i);
            for k in 0..tau_grid.n {
                values.push(g1_analytic(t, tau_grid.time(k), eff));
            }
        }
        CorrelationGrid {
            t_grid: *t_grid,
            tau_grid: *tau_grid,
            values,
        }
    }
}

fn trapezoid_weight(i: usize, n_points: usize) -> f64 {
    if i == 0 || i + 1 == n_points {
        0.5
    } else {
        1.0
    }
}

/// Trapezoid integrals of C(τ_D) on one G¹ grid.
///
/// The grid must start at t = τ = 0 with equal spacing on both axes.
/// Delays that are not multiples of the spacing interpolate linearly
/// between neighbouring shifts.
pub fn coalescence_on_grid(grid: &CorrelationGrid, delays: &[f64]) -> Result<CoalescenceResult> {
    let (tg, sg) = (grid.t_grid, grid.tau_grid);
    if tg.t0 != 0.0 || sg.t0 != 0.0 || (tg.dt - sg.dt).abs() > 1e-12 * tg.dt {
        return Err(Error::InvalidParameter {
            name: "grid",
            reason: "coalescence needs equal-step grids starting at 0".into(),
        });
    }
    let h = tg.dt;
    let nt = tg.n;
    let ntau = sg.n;
    let tau_w: Vec<f64> = (0..ntau).map(|j| trapezoid_weight(j, ntau)).collect();
    let mut cache: BTreeMap<usize, f64> = BTreeMap::new();
    let mut shift_integral = |k: usize| -> f64 {
        if k >= nt {
            return 0.0;
        }
        *cache.entry(k).or_insert_with(|| {
            let mut total = 0.0;
            for i in k..nt {
                let a = grid.row(i - k);
                let b = grid.row(i);
                let mut row = 0.0;
                for j in 0..ntau {
                    row += tau_w[j] * (a[j].re * b[j].re + a[j].im * b[j].im);
                }
                total += trapezoid_weight(i, nt) * row;
            }
            2.0 * total * h * h
        })
    };
    let mut numerator = Vec::with_capacity(delays.len());
    for &d in delays {
        let s = d.abs() / h;
        let k = s.floor();
        let frac = s - k;
        let k = k as usize;
        let value = if frac < 1e-9 {
            shift_integral(k)
        } else if 1.0 - frac < 1e-9 {
            shift_integral(k + 1)
        } else {
            (1.0 - frac) * shift_integral(k) + frac * shift_integral(k + 1)
        };
        numerator.push(value);
    }
    let area: f64 = (0..nt)
        .map(|i| trapezoid_weight(i, nt) * grid.get(i, 0).re)
        .sum::<f64>()
        * h;
    let denominator = area * area;
    let c = numerator.iter().map(|n| n / denominator).collect();
    Ok(CoalescenceResult {
        tau_d: delays.to_vec(),
        c,
        numerator,
        denominator,
        grid_difference: 0.0,
    })
}

/// C(τ_D) by trapezoid quadrature on n and 2n grids, combined by
/// Richardson extrapolation. Fails when the two grids disagree by more
/// than `opts.tolerance`.
pub fn coalescence_numeric<S: G1Source + ?Sized>(
    source: &S,
    delays: &[f64],
    opts: &QuadratureOptions,
) -> Result<CoalescenceResult> {
    if opts.n < 4 {
        return Err(Error::InvalidParameter {
            name: "quad_points",
            reason: format!("at least 4 intervals required, got {}", opts.n),
        });
    }
    let extent = opts.t_extent_factor * source.time_scale();
    let h = extent / opts.n as f64;
    let coarse = coalescence_on_grid(&source.correlation_grid(h, opts.n)?, delays)?;
    let fine = coalescence_on_grid(&source.correlation_grid(0.5 * h, 2 * opts.n)?, delays)?;
    let difference = coarse
        .c
        .iter()
        .zip(&fine.c)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    if difference > opts.tolerance || !difference.is_finite() {
        return Err(Error::GridTooCoarse {
            difference,
            limit: opts.tolerance,
        });
    }
    let extrapolate = |a: f64, b: f64| (4.0 * b - a) / 3.0;
    let numerator: Vec<f64> = coarse
        .numerator
        .iter()
        .zip(&fine.numerator)
        .map(|(&a, &b)| extrapolate(a, b))
        .collect();
    let denominator = extrapolate(coarse.denominator, fine.denominator);
    let c = numerator.iter().map(|n| n / denominator).collect();
    Ok(CoalescenceResult {
        tau_d: delays.to_vec(),
        c,
        numerator,
        denominator,
        grid_difference: difference,
    })
}

/// Numerical HOM curve with its visibility C(0).
pub fn hom_curve_numeric<S: G1Source + ?Sized>(
    source: &S,
    delays: &[f64],
    opts: &QuadratureOptions,
    g2zero: f64,
) -> Result<(HomCurve, CoalescenceResult)> {
    let mut with_zero = delays.to_vec();
    with_zero.push(0.0);
    let mut res = coalescence_numeric(source, &with_zero, opts)?;
    let vis = res.c.pop().expect("zero delay appended");
    res.numerator.pop();
    res.tau_d.pop();
    Ok((res.to_curve(g2zero, vis), res))
}

/// Exact evaluation of C(τ_D) for a model through Lyapunov equations.
///
/// With δ(u) the transient part of vec ρ(u), S: ρ ↦ ρσ† and s the
/// functional X ↦ Tr[σX], the τ-integral of the two-time product collapses
/// to Q = ∫ e^{L†τ} s̄ sᵀ e^{Lτ} dτ and the t-integral to the Gram matrix
/// W = ∫ δ(u) δ(u)† du, so that N(τ_D) = 2 Re Tr[e^{Lτ_D}† S† Q S W].
#[derive(Debug, Clone)]
pub struct ResolventCoalescence {
    generator: Superoperator,
    kernel: ComplexMatrix,
    denominator: f64,
}

impl ResolventCoalescence {
    pub fn new(model: &EmitterModel) -> Result<Self> {
        let l = model.generator.matrix();
        let n = l.dim();
        let d = model.dim();
        let trace_fn = trace_functional(&ComplexMatrix::identity(d));

        let mut system = l.clone();
        for c in 0..n {
            system[(0, c)] = trace_fn[c];
        }
        let mut rhs = vec![C64::new(0.0, 0.0); n];
        rhs[0] = C64::new(1.0, 0.0);
        let ss = system.solve(&rhs)?;

        let sigma_d = model.sigma.adjoint();
        let s_op = Superoperator::right(&sigma_d);
        let s_fn = trace_functional(&model.sigma);
        let pop_fn = trace_functional(&model.population_operator());
        let leak = s_op.matrix().apply(&ss).iter().map(|z| z.norm()).fold(0.0, f64::max);
        let pop_ss = dot(&pop_fn, &ss).norm();
        if leak > 1e-10 || pop_ss > 1e-10 {
            return Err(Error::InvalidState(format!(
                "steady state still emits (|S ss| = {leak:e}, population {pop_ss:e})"
            )));
        }

        let shift = l.max_abs().max(1e-12);
        let deflated = ComplexMatrix::from_fn(n, |r, c| {
            l[(r, c)] - ss[r] * trace_fn[c] * shift
        });
        let r0 = model.rho0.vectorize();
        let delta0: Vec<C64> = r0.iter().zip(&ss).map(|(a, b)| a - b).collect();

        let ident = ComplexMatrix::identity(n);
        let dh = deflated.adjoint();
        // L_d† Q + Q L_d = −s̄ sᵀ
        let q_lu = LuDecomposition::new(&(&ident.kron(&dh) + &deflated.transpose().kron(&ident)))?;
        let q_rhs = ComplexMatrix::from_fn(n, |r, c| -(s_fn[r].conj() * s_fn[c])).vectorize();
        let q = ComplexMatrix::unvectorize(&q_lu.solve(&q_rhs))?;
        // L_d W + W L_d† = −δ0 δ0†
        let w_lu = LuDecomposition::new(&(&ident.kron(&deflated) + &deflated.conj().kron(&ident)))?;
        let w_rhs = ComplexMatrix::from_fn(n, |r, c| -(delta0[r] * delta0[c].conj())).vectorize();
        let w = ComplexMatrix::unvectorize(&w_lu.solve(&w_rhs))?;

        let s = s_op.matrix();
        let kernel = &(&(&s.adjoint() * &q) * s) * &w;

        let integral = deflated.solve(&delta0)?;
        let area = -dot(&pop_fn, &integral).re;
        Ok(ResolventCoalescence {
            generator: model.generator.clone(),
            kernel,
            denominator: area * area,
        })
    }

    /// N(τ_D); even in the delay.
    pub fn numerator(&self, tau_d: f64) -> f64 {
        let k = if tau_d == 0.0 {
            self.kernel.clone()
        } else {
            let e = self.generator.exp(tau_d.abs());
            &e.matrix().adjoint() * &self.kernel
        };
        2.0 * k.trace().re
    }

    pub fn denominator(&self) -> f64 {
        self.denominator
    }

    pub fn coalescence(&self, tau_d: f64) -> f64 {
        self.numerator(tau_d) / self.denominator
    }

    pub fn result(&self, delays: &[f64]) -> CoalescenceResult {
        let numerator: Vec<f64> = delays.iter().map(|&t| self.numerator(t)).collect();
        CoalescenceResult {
            tau_d: delays.to_vec(),
            c: numerator.iter().map(|n| n / self.denominator).collect(),
            numerator,
            denominator: self.denominator,
            grid_difference: 0.0,
        }
    }
}

/// Visibility C(0) of a model without time discretisation.
pub fn visibility_resolvent(model: &EmitterModel) -> Result<f64> {
    Ok(ResolventCoalescence::new(model)?.coalescence(0.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum VisibilityMethod {
    #[default]
    Resolvent,
    Quadrature,
}

/// Visibility of a model by the chosen route.
pub fn visibility_numeric(
    model: &EmitterModel,
    method: VisibilityMethod,
    opts: &QuadratureOptions,
) -> Result<f64> {
    match method {
        VisibilityMethod::Resolvent => visibility_resolvent(model),
        VisibilityMethod::Quadrature => Ok(coalescence_numeric(model, &[0.0], opts)?.c[0]),
    }
}

/// Background-corrected values and the number clamped at zero.
#[derive(Debug, Clone, PartialEq)]
pub struct Corrected {
    pub values: Vec<f64>,
    pub clamped: usize,
}

/// Subtracts g²(0)/2 from every value, flooring at zero.
pub fn background_correct(raw: &[f64], g2zero: f64) -> Result<Corrected> {
    if !(0.0..=1.0).contains(&g2zero) {
        return Err(Error::InvalidParameter {
            name: "g2zero",
            reason: format!("must lie in [0, 1], got {g2zero}"),
        });
    }
    let mut clamped = 0;
    let values = raw
        .iter()
        .map(|&x| {
            let v = x - 0.5 * g2zero;
            if v < 0.0 {
                clamped += 1;
                0.0
            } else {
                v
            }
        })
        .collect();
    Ok(Corrected { values, clamped })
}

/// T₂ = (1/(2T₁) + γ)⁻¹ in ps.
pub fn coherence_time(t1: f64, gamma: f64) -> f64 {
    1.0 / (0.5 / t1 + gamma)
}

/// Gaussian Michelson contrast A + B exp[−(π/2)(τ/T₂)²].
pub fn michelson_contrast(tau: f64, a: f64, b: f64, t2: f64) -> f64 {
    a + b * (-std::f64::consts::FRAC_PI_2 * (tau / t2).powi(2)).exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eff() -> EffectiveParams {
        EffectiveParams::new(1.0 / 60.0, 1.6e-3 / HBAR, 1.0 / 3.2, 0.0)
    }

    #[test]
    fn population_limits() {
        assert_eq!(excited_population_analytic(-1.0, 0.3, 0.02), 0.0);
        assert!(excited_population_analytic(1e5, 0.3, 0.02) < 1e-300);
        let (a, t) = (0.1, 7.0);
        let degenerate = excited_population_analytic(t, a, a);
        assert!((degenerate - a * t * (-a * t).exp()).abs() < 1e-15);
        let b = a * (1.0 + 1e-6);
        let x = (b - a) * t;
        let series = degenerate * (1.0 - x / 2.0 + x * x / 6.0);
        assert!((excited_population_analytic(t, a, b) - series).abs() < 1e-15);
        let (a, b) = (0.3, 0.02);
        let direct = a / (b - a) * ((-a * t).exp() - (-b * t).exp());
        assert!((excited_population_analytic(t, a, b) - direct).abs() < 1e-15);
    }

    #[test]
    fn g1_examples() {
        let e = eff();
        assert_eq!(g1_analytic(20.0, 0.0, &e).re, excited_population_analytic(20.0, e.alpha, e.decay_rate));
        let mut strong = e;
        strong.gamma_pd = 1e6;
        assert!(g1_analytic(20.0, 1.0, &strong).norm() < 1e-300);
        let t2 = coherence_time(1.0 / e.decay_rate, e.gamma_pd);
        let pop = excited_population_analytic(30.0, e.alpha, e.decay_rate);
        assert!((g1_analytic(30.0, t2, &e).norm() - pop / std::f64::consts::E).abs() < 1e-14);
    }

    #[test]
    fn g1_negative_tau_is_conjugate() {
        let mut e = eff();
        e.delta = 0.2;
        let a = g1_analytic(30.0, -5.0, &e);
        let b = g1_analytic(25.0, 5.0, &e).conj();
        assert!((a - b).norm() < 1e-16);
    }

    #[test]
    fn visibility_monotone() {
        for i in 0..10 {
            for j in 0..10 {
                let gamma = 1e-3 * i as f64;
                let alpha = 0.02 + 0.1 * j as f64;
                let v = visibility(&EffectiveParams::new(0.015, gamma, alpha, 0.0));
                let v_g = visibility(&EffectiveParams::new(0.015, gamma + 1e-3, alpha, 0.0));
                let v_a = visibility(&EffectiveParams::new(0.015, gamma, alpha + 0.05, 0.0));
                assert!(v_g < v && v_a > v);
            }
        }
        assert!((visibility(&EffectiveParams::new(0.015, 0.0, 1e12, 0.0)) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn hom_limits() {
        let e = eff();
        let nu = visibility(&e);
        assert!((g2_hom_analytic(0.0, &e) - 0.5 * (1.0 - nu)).abs() < 1e-15);
        assert!((g2_hom_analytic(1e6, &e) - 0.5).abs() < 1e-15);
        assert_eq!(g2_hom_analytic(37.0, &e), g2_hom_analytic(-37.0, &e));
        let mut fast = e;
        fast.alpha = 1e6 * e.decay_rate;
        for t in [0.0, 10.0, 60.0, 200.0] {
            let single = g2_hom_single_exponential(t, visibility(&fast), 1.0 / fast.decay_rate);
            assert!((g2_hom_analytic(t, &fast) - single).abs() < 1e-6);
        }
    }

    #[test]
    fn hom_degenerate_branch() {
        let e = EffectiveParams::new(0.05, 0.0, 0.05, 0.0);
        let mut near = e;
        near.alpha *= 1.0 + 1e-7;
        for t in [0.0, 5.0, 40.0] {
            assert!((g2_hom_analytic(t, &e) - g2_hom_analytic(t, &near)).abs() < 1e-7);
        }
    }

    #[test]
    fn numeric_combination() {
        assert_eq!(g2_hom_numeric(1.0, 0.0), 0.0);
        assert_eq!(g2_hom_numeric(0.0, 0.0), 0.5);
        let nu = visibility(&eff());
        assert!((g2_hom_numeric(nu, 0.0) - 0.5 * (1.0 - nu)).abs() < 1e-16);
    }

    #[test]
    fn background_examples() {
        let c = background_correct(&[0.53], 0.058).unwrap();
        assert!((c.values[0] - 0.501).abs() < 1e-12);
        assert_eq!(c.clamped, 0);
        let same = background_correct(&[0.1, 0.4], 0.0).unwrap();
        assert_eq!(same.values, vec![0.1, 0.4]);
        let floor = background_correct(&[0.02], 0.058).unwrap();
        assert_eq!(floor.values, vec![0.0]);
        assert_eq!(floor.clamped, 1);
        assert!(background_correct(&[0.1], 1.5).is_err());
    }

    #[test]
    fn coherence_time_examples() {
        assert_eq!(coherence_time(67.0, 0.0), 134.0);
        let t2 = coherence_time(67.0, 1.6e-3 / HBAR);
        assert!((t2 - 101.0).abs() < 2.0, "T2 = {t2}");
        assert!(coherence_time(67.0, 1e12) < 1e-11);
    }

    #[test]
    fn michelson_examples() {
        assert_eq!(michelson_contrast(0.0, 0.1, 0.8, 93.0), 0.9);
        let v = michelson_contrast(93.0, 0.1, 0.8, 93.0);
        assert!((v - (0.1 + 0.8 * (-std::f64::consts::FRAC_PI_2).exp())).abs() < 1e-15);
    }

    #[test]
    fn default_delay_grid() {
        let d = default_delays(60.0, 3.2);
        assert_eq!(d.len(), 41);
        assert_eq!(d[20], 0.0);
        assert!((d[40] - 420.0).abs() < 1e-12);
        assert!((d[0] + 420.0).abs() < 1e-12);
    }

    #[test]
    fn resolvent_matches_formula_for_eliminated_model() {
        let e = eff();
        let model = EmitterModel::eliminated(&e).unwrap();
        let r = ResolventCoalescence::new(&model).unwrap();
        assert!((r.denominator() - 1.0 / (e.decay_rate * e.decay_rate)).abs() * e.decay_rate.powi(2) < 1e-9);
        for t in [0.0, 3.0, 30.0, -45.0, 200.0] {
            let g2 = g2_hom_numeric(r.coalescence(t), 0.0);
            assert!((g2 - g2_hom_analytic(t, &e)).abs() < 1e-9, "tau {t}");
        }
    }
}
