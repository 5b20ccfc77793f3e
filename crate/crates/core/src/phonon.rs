//! Exciton–phonon coupling in second-order time-convolutionless form:
//! superohmic spectral density, one-sided Fourier rates of the thermal bath
//! correlation function, and the resulting dissipator on the full model.

use serde::{Deserialize, Serialize};

use crate::correlations::{visibility, visibility_resolvent};
use crate::error::{Error, Result};
use crate::linalg::{eigendecompose_hermitian, ComplexMatrix, Superoperator, C64};
use crate::model::{
    adiabatic_eliminated_params, build_jc_hamiltonian, validity_ratio, EmitterModel, SystemParams,
};
use crate::units::{occupation_unchecked, HBAR, K_B};

/// How the one-sided Fourier rates are evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum RateMethod {
    /// Closed-form real part plus principal-value Lamb shift.
    #[default]
    Frequency,
    /// Direct trapezoid integration of the bath correlation function up to `s_max`.
    TimeDomain,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhononParams {
    /// Coupling strength η in meV⁻².
    pub eta: f64,
    /// Cutoff ω_c in meV.
    pub omega_c: f64,
    pub temperature: f64,
    pub include_lamb_shift: bool,
    /// Correlation-time cutoff in ps for the time-domain route.
    pub s_max: f64,
    /// Frequency nodes for principal-value and bath-correlation quadratures.
    pub quad_points: usize,
    pub method: RateMethod,
}

/// Upper frequency limit of all quadratures, in units of ω_c.
pub const CUTOFF_MULTIPLE: f64 = 8.0;

/// Number of trapezoid nodes of the time-domain route.
pub const TIME_DOMAIN_POINTS: usize = 4000;

impl PhononParams {
    /// η = 0.032 meV⁻², ω_c = 1.3 meV.
    pub fn gaas(temperature: f64) -> Self {
        let omega_c = 1.3;
        PhononParams {
            eta: 0.032,
            omega_c,
            temperature,
            include_lamb_shift: false,
            s_max: 20.0 * HBAR / omega_c,
            quad_points: 4000,
            method: RateMethod::Frequency,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.eta.is_finite() && self.eta >= 0.0) {
            return Err(Error::InvalidParameter {
                name: "eta",
                reason: format!("must be finite and non-negative, got {}", self.eta),
            });
        }
        if !(self.omega_c.is_finite() && self.omega_c > 0.0) {
            return Err(Error::InvalidParameter {
                name: "omega_c",
                reason: format!("must be finite and positive, got {}", self.omega_c),
            });
        }
        if !(self.s_max.is_finite() && self.s_max > 0.0) {
            return Err(Error::InvalidParameter {
                name: "s_max",
                reason: format!("must be finite and positive, got {}", self.s_max),
            });
        }
        if !(self.temperature.is_finite() && self.temperature >= 0.0) {
            return Err(Error::InvalidParameter {
                name: "temperature",
                reason: format!("must be finite and non-negative, got {}", self.temperature),
            });
        }
        if self.quad_points < 16 {
            return Err(Error::InvalidParameter {
                name: "quad_points",
                reason: format!("at least 16 nodes required, got {}", self.quad_points),
            });
        }
        Ok(())
    }

    fn occupation(&self, omega: f64) -> f64 {
        if omega <= 0.0 {
            0.0
        } else {
            occupation_unchecked(omega, self.temperature)
        }
    }

    /// J(ν)·n(ν), continuous at ν = 0.
    fn absorption_weight(&self, nu: f64) -> f64 {
        if nu <= 0.0 {
            return 0.0;
        }
        self.density(nu) * self.occupation(nu)
    }

    fn emission_weight(&self, nu: f64) -> f64 {
        if nu <= 0.0 {
            return 0.0;
        }
        self.density(nu) * (self.occupation(nu) + 1.0)
    }

    fn density(&self, omega: f64) -> f64 {
        self.eta * omega.powi(3) * (-(omega / self.omega_c).powi(2)).exp()
    }
}

/// J(ω) = η ω³ exp[−(ω/ω_c)²] in meV.
pub fn spectral_density(omega: f64, p: &PhononParams) -> Result<f64> {
    if !(omega >= 0.0) {
        return Err(Error::Domain(format!(
            "spectral density requires omega >= 0, got {omega}"
        )));
    }
    Ok(p.density(omega))
}

/// One-sided Fourier transform of the bath correlation function at the
/// signed Bohr energy `omega` (meV), in ps⁻¹. Positive `omega` is phonon
/// emission.
pub fn half_fourier_rate(omega: f64, p: &PhononParams) -> C64 {
    match p.method {
        RateMethod::Frequency => half_fourier_rate_frequency(omega, p),
        RateMethod::TimeDomain => half_fourier_rate_time_domain(omega, p),
    }
}

pub fn half_fourier_rate_frequency(omega: f64, p: &PhononParams) -> C64 {
    let re = if omega > 0.0 {
        std::f64::consts::PI * p.emission_weight(omega) / HBAR
    } else if omega < 0.0 {
        std::f64::consts::PI * p.absorption_weight(-omega) / HBAR
    } else {
        0.0
    };
    let im = if p.include_lamb_shift {
        lamb_shift(omega, p)
    } else {
        0.0
    };
    C64::new(re, im)
}

/// (1/ħ)·PV∫ dν [J n/(ν+ω) − J(n+1)/(ν−ω)].
fn lamb_shift(omega: f64, p: &PhononParams) -> f64 {
    let w = CUTOFF_MULTIPLE * p.omega_c;
    let abs = principal_value(|nu| p.absorption_weight(nu), -omega, w, p.quad_points);
    let emi = principal_value(|nu| p.emission_weight(nu), omega, w, p.quad_points);
    (abs - emi) / HBAR
}

/// PV∫₀^w f(ν)/(ν−a) dν by singularity subtraction and composite Simpson.
fn principal_value(f: impl Fn(f64) -> f64, a: f64, w: f64, points: usize) -> f64 {
    let n = if points % 2 == 0 { points } else { points + 1 };
    let h = w / n as f64;
    let inside = a > 0.0 && a < w;
    let fa = if inside { f(a) } else { 0.0 };
    let integrand = |nu: f64| -> f64 {
        let d = nu - a;
        if inside {
            if d.abs() < 1e-9 * w {
                let e = 1e-6 * w;
                (f(a + e) - f(a - e)) / (2.0 * e)
            } else {
                (f(nu) - fa) / d
            }
        } else if d == 0.0 {
            0.0
        } else {
            f(nu) / d
        }
    };
    let mut sum = integrand(0.0) + integrand(w);
    for i in 1..n {
        let coef = if i % 2 == 1 { 4.0 } else { 2.0 };
        sum += coef * integrand(i as f64 * h);
    }
    let mut total = sum * h / 3.0;
    if inside {
        total += fa * ((w - a) / a).ln();
    }
    total
}

/// Thermal bath correlation C(s) in meV² at correlation time `s` (ps).
pub fn bath_correlation(s: f64, p: &PhononParams) -> C64 {
    let w = CUTOFF_MULTIPLE * p.omega_c;
    let n = p.quad_points;
    let h = w / n as f64;
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..=n {
        let nu = i as f64 * h;
        let weight = if i == 0 || i == n { 0.5 } else { 1.0 };
        let phase = nu * s / HBAR;
        let (sin, cos) = phase.sin_cos();
        let em = p.emission_weight(nu);
        let ab = p.absorption_weight(nu);
        // (n+1)e^{−iνs/ħ} + n e^{iνs/ħ}
        acc += C64::new((em + ab) * cos, (ab - em) * sin) * weight;
    }
    acc * h
}

/// (1/ħ²)∫₀^{s_max} C(s) e^{iωs/ħ} ds by trapezoid on [`TIME_DOMAIN_POINTS`] nodes.
pub fn half_fourier_rate_time_domain(omega: f64, p: &PhononParams) -> C64 {
    let n = TIME_DOMAIN_POINTS;
    let h = p.s_max / n as f64;
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..=n {
        let s = i as f64 * h;
        let weight = if i == 0 || i == n { 0.5 } else { 1.0 };
        acc += bath_correlation(s, p) * C64::from_polar(1.0, omega * s / HBAR) * weight;
    }
    let rate = acc * h / (HBAR * HBAR);
    if p.include_lamb_shift {
        rate
    } else {
        C64::new(rate.re, 0.0)
    }
}

/// Groups eigenvalues closer than `tol` into eigenspaces and returns
/// `(energy, projector)` pairs.
fn eigenprojectors(h: &ComplexMatrix) -> Result<Vec<(f64, ComplexMatrix)>> {
    let (vals, vecs) = eigendecompose_hermitian(h)?;
    let d = h.dim();
    let tol = 1e-12 * h.max_abs().max(1e-3);
    let mut out: Vec<(f64, ComplexMatrix)> = Vec::new();
    let mut start = 0;
    while start < d {
        let mut end = start + 1;
        while end < d && (vals[end] - vals[start]).abs() <= tol {
            end += 1;
        }
        let mut proj = ComplexMatrix::zeros(d);
        for k in start..end {
            for r in 0..d {
                for c in 0..d {
                    proj[(r, c)] += vecs[(r, k)] * vecs[(c, k)].conj();
                }
            }
        }
        let energy = vals[start..end].iter().sum::<f64>() / (end - start) as f64;
        out.push((energy, proj));
        start = end;
    }
    Ok(out)
}

/// Rate operator Λ = Σ_{a,b} Π_a P Π_b Γ(λ_b − λ_a) over the eigenspaces of H_JC.
pub fn rate_operator(p_sys: &SystemParams) -> Result<ComplexMatrix> {
    let ph = phonon_params_for(p_sys)?;
    let proj = eigenprojectors(&build_jc_hamiltonian(p_sys))?;
    let x = SystemParams::exciton_projector();
    let d = x.dim();
    let mut lambda = ComplexMatrix::zeros(d);
    for (la, pa) in &proj {
        let left = pa * &x;
        for (lb, pb) in &proj {
            let block = &left * pb;
            if block.max_abs() < 1e-15 {
                continue;
            }
            let rate = half_fourier_rate(lb - la, &ph);
            lambda = &lambda + &block.scale(rate);
        }
    }
    Ok(lambda)
}

fn phonon_params_for(p_sys: &SystemParams) -> Result<PhononParams> {
    let mut ph = p_sys.phonon.clone().ok_or_else(|| Error::InvalidParameter {
        name: "phonon",
        reason: "phonon parameters are required".into(),
    })?;
    ph.temperature = p_sys.temperature;
    ph.validate()?;
    Ok(ph)
}

/// ρ ↦ −(PΛρ − ΛρP − PρΛ† + ρΛ†P) with P = |e,0⟩⟨e,0|.
///
/// The bath temperature is taken from `p_sys.temperature`.
pub fn build_phonon_dissipator(p_sys: &SystemParams) -> Result<Superoperator> {
    let lambda = rate_operator(p_sys)?;
    let x = SystemParams::exciton_projector();
    let ld = lambda.adjoint();
    let terms = [
        Superoperator::left(&(&x * &lambda)),
        Superoperator::sandwich(&lambda, &x).scale(C64::new(-1.0, 0.0)),
        Superoperator::sandwich(&x, &ld).scale(C64::new(-1.0, 0.0)),
        Superoperator::right(&(&ld * &x)),
    ];
    let mut k = Superoperator::zeros(x.dim());
    for t in &terms {
        k = &k + t;
    }
    Ok(k.scale(C64::new(-1.0, 0.0)))
}

/// Phonon-free visibility curve that γ_eff is read off.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DephasingReference {
    /// Closed-form visibility of the adiabatically eliminated emitter.
    #[default]
    EliminatedFormula,
    /// Numerical visibility of the full model without phonons, which removes
    /// the elimination error from the comparison.
    FullModel,
}

/// Options of [`effective_dephasing_equivalent`].
#[derive(Debug, Clone, Copy)]
pub struct DephasingOptions {
    /// Smallest validity ratio accepted before refusing.
    pub min_validity: f64,
    /// Relative bisection tolerance.
    pub rel_tol: f64,
    pub reference: DephasingReference,
}

impl Default for DephasingOptions {
    fn default() -> Self {
        DephasingOptions {
            min_validity: 3.0,
            rel_tol: 1e-6,
            reference: DephasingReference::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DephasingEquivalent {
    /// γ_eff in ps⁻¹.
    pub gamma_eff: f64,
    /// Constant pure dephasing γ of the input, ps⁻¹.
    pub gamma_constant: f64,
    /// Visibility of the full model with phonons.
    pub visibility: f64,
    /// (γ_eff − γ)/γ_eff.
    pub phonon_share: f64,
}

/// Pure-dephasing rate that, inserted into the phonon-free reference,
/// reproduces the visibility of the phonon-dressed full model.
pub fn effective_dephasing_equivalent(
    p_sys: &SystemParams,
    opts: &DephasingOptions,
) -> Result<DephasingEquivalent> {
    p_sys.validate()?;
    phonon_params_for(p_sys)?;
    let ratio = validity_ratio(p_sys);
    if ratio < opts.min_validity {
        return Err(Error::Validity {
            ratio,
            threshold: opts.min_validity,
        });
    }
    let target = visibility_resolvent(&EmitterModel::full(p_sys)?)?;
    let bare = p_sys.with_phonons(None);
    let vis_at = |gamma_rate: f64| -> Result<f64> {
        let mut q = bare.clone();
        q.gamma_pd = gamma_rate * HBAR;
        match opts.reference {
            DephasingReference::EliminatedFormula => Ok(visibility(&adiabatic_eliminated_params(&q))),
            DephasingReference::FullModel => visibility_resolvent(&EmitterModel::full(&q)?),
        }
    };
    let mut lo = 0.0;
    let mut hi = 10.0 * p_sys.kappa_rate();
    let (v_lo, v_hi) = (vis_at(lo)?, vis_at(hi)?);
    if !(target <= v_lo && target >= v_hi) {
        return Err(Error::NoBracket(format!(
            "visibility {target} outside [{v_hi}, {v_lo}] spanned by gamma in [0, {hi}] ps^-1"
        )));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if vis_at(mid)? > target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= opts.rel_tol * 0.5 * (lo + hi) * 1e-2 || hi - lo < 1e-300 {
            break;
        }
    }
    let gamma_eff = 0.5 * (lo + hi);
    let gamma_constant = p_sys.gamma_pd_rate();
    let phonon_share = if gamma_eff > 0.0 {
        (gamma_eff - gamma_constant) / gamma_eff
    } else {
        0.0
    };
    Ok(DephasingEquivalent {
        gamma_eff,
        gamma_constant,
        visibility: target,
        phonon_share,
    })
}

/// k_B·T in meV.
pub fn thermal_energy(temperature: f64) -> f64 {
    K_B * temperature
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spectral_density_examples() {
        let p = PhononParams::gaas(10.0);
        assert_eq!(spectral_density(0.0, &p).unwrap(), 0.0);
        let j = spectral_density(1.3, &p).unwrap();
        assert!((j - 0.032 * 1.3f64.powi(3) * (-1.0f64).exp()).abs() < 1e-15);
        assert!((j - 0.02586).abs() < 1e-5);
        assert!(spectral_density(-0.1, &p).is_err());
    }

    #[test]
    fn spectral_density_peak() {
        let p = PhononParams::gaas(10.0);
        let peak = p.omega_c * 1.5f64.sqrt();
        let j = |w: f64| spectral_density(w, &p).unwrap();
        assert!(j(peak) > j(peak * 0.999));
        assert!(j(peak) > j(peak * 1.001));
    }

    #[test]
    fn zero_temperature_has_no_absorption() {
        let p = PhononParams::gaas(0.0);
        assert_eq!(half_fourier_rate(-0.3, &p).re, 0.0);
        assert!(half_fourier_rate(0.3, &p).re > 0.0);
    }

    #[test]
    fn detailed_balance() {
        let p = PhononParams::gaas(10.0);
        let ratio = half_fourier_rate(-0.3, &p).re / half_fourier_rate(0.3, &p).re;
        let expected = (-0.3 / (K_B * 10.0)).exp();
        assert!((ratio - expected).abs() < 1e-6);
    }

    #[test]
    fn zero_coupling_gives_zero_rate() {
        let mut p = PhononParams::gaas(10.0);
        p.eta = 0.0;
        p.include_lamb_shift = true;
        let r = half_fourier_rate(0.2, &p);
        assert_eq!(r.re, 0.0);
        assert_eq!(r.im, 0.0);
    }

    #[test]
    fn zero_frequency_rate_vanishes() {
        let p = PhononParams::gaas(30.0);
        assert_eq!(half_fourier_rate(0.0, &p).re, 0.0);
    }

    #[test]
    fn principal_value_of_simple_function() {
        // PV∫₀¹ dν/(ν−a) = ln((1−a)/a)
        let a = 0.3;
        let v = principal_value(|_| 1.0, a, 1.0, 2000);
        assert!((v - ((1.0 - a) / a).ln()).abs() < 1e-10);
        // PV∫₀¹ ν/(ν−a) dν = 1 + a ln((1−a)/a)
        let v = principal_value(|x| x, a, 1.0, 2000);
        assert!((v - (1.0 + a * ((1.0 - a) / a).ln())).abs() < 1e-10);
    }

    #[test]
    fn uncoupled_bath_leaves_dephasing_unchanged() {
        let mut ph = PhononParams::gaas(17.5);
        ph.eta = 0.0;
        let p = SystemParams::micropillar().with_phonons(Some(ph));
        let opts = DephasingOptions {
            reference: DephasingReference::FullModel,
            ..DephasingOptions::default()
        };
        let r = effective_dephasing_equivalent(&p, &opts).unwrap();
        assert!((r.gamma_eff / p.gamma_pd_rate() - 1.0).abs() < 1e-5, "{r:?}");
        assert!(r.phonon_share.abs() < 1e-5);
        let r = effective_dephasing_equivalent(&p, &DephasingOptions::default()).unwrap();
        assert!(r.phonon_share > 0.0 && r.phonon_share < 0.05, "{r:?}");
    }

    #[test]
    fn refuses_outside_validity() {
        let p = SystemParams::micropillar()
            .with_delta(0.6)
            .with_phonons(Some(PhononParams::gaas(17.5)));
        assert!(matches!(
            effective_dephasing_equivalent(&p, &DephasingOptions::default()),
            Err(Error::Validity { .. })
        ));
    }
}
