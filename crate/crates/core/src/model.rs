//! The quantum-dot–cavity system: parameters, Hamiltonian, Lindblad
//! generator, Purcell rate, and the adiabatically eliminated emitter.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, Superoperator, C64};
use crate::phonon::{self, PhononParams};
use crate::units::{energy_to_rate, HBAR};

/// Single-excitation basis of the full model.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisIndex {
    /// |p,0⟩: pump level, empty cavity.
    Pump = 0,
    /// |e,0⟩: exciton, empty cavity.
    Exciton = 1,
    /// |g,1⟩: ground state, one cavity photon.
    Photon = 2,
    /// |g,0⟩: ground state, empty cavity.
    Ground = 3,
}

impl BasisIndex {
    pub const DIM: usize = 4;

    pub fn index(self) -> usize {
        self as usize
    }
}

/// States of the eliminated model: |P⟩, |E⟩, |G⟩.
pub mod eliminated_basis {
    pub const P: usize = 0;
    pub const E: usize = 1;
    pub const G: usize = 2;
    pub const DIM: usize = 3;
}

/// Which operator is treated as the emitted field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum EmissionChannel {
    /// σ = |g,0⟩⟨e,0|
    #[default]
    Qd,
    /// c = |g,0⟩⟨g,1|
    Cavity,
}

impl std::str::FromStr for EmissionChannel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "qd" => Ok(EmissionChannel::Qd),
            "cavity" => Ok(EmissionChannel::Cavity),
            other => Err(Error::InvalidParameter {
                name: "emission_channel",
                reason: format!("expected `qd` or `cavity`, got `{other}`"),
            }),
        }
    }
}

impl std::fmt::Display for EmissionChannel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            EmissionChannel::Qd => "qd",
            EmissionChannel::Cavity => "cavity",
        })
    }
}

/// Physical parameters of the QD–cavity–phonon system.
///
/// Energies (`g`, `kappa`, `gamma_pd`, `delta`) are in meV, rates
/// (`gamma_b`, `alpha`) in ps⁻¹ and the temperature in K.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemParams {
    pub g: f64,
    pub kappa: f64,
    pub gamma_b: f64,
    pub gamma_pd: f64,
    pub alpha: f64,
    pub delta: f64,
    pub temperature: f64,
    pub emission_channel: EmissionChannel,
    pub phonon: Option<PhononParams>,
    /// Use the Purcell rate Γ instead of Γ_B inside γ_tot (solved self-consistently).
    pub gamma_tot_uses_purcell: bool,
}

impl Default for SystemParams {
    fn default() -> Self {
        SystemParams::micropillar()
    }
}

impl SystemParams {
    /// Micropillar parameters: g = 34 μeV, κ = 0.42 meV, 1/Γ_B = 730 ps,
    /// γ = 1.6 μeV, T_α = 3.2 ps, on resonance at 17.5 K, phonons off.
    pub fn micropillar() -> Self {
        SystemParams {
            g: 0.034,
            kappa: 0.42,
            gamma_b: 1.0 / 730.0,
            gamma_pd: 1.6e-3,
            alpha: 1.0 / 3.2,
            delta: 0.0,
            temperature: 17.5,
            emission_channel: EmissionChannel::Qd,
            phonon: None,
            gamma_tot_uses_purcell: false,
        }
    }

    pub fn with_delta(&self, delta: f64) -> Self {
        SystemParams {
            delta,
            ..self.clone()
        }
    }

    /// Sets the temperature of the system and of its phonon bath.
    pub fn with_temperature(&self, temperature: f64) -> Self {
        let mut p = self.clone();
        p.temperature = temperature;
        if let Some(ph) = p.phonon.as_mut() {
            ph.temperature = temperature;
        }
        p
    }

    pub fn with_phonons(&self, phonon: Option<PhononParams>) -> Self {
        let mut p = self.clone();
        p.phonon = phonon.map(|mut ph| {
            ph.temperature = p.temperature;
            ph
        });
        p
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("g", self.g),
            ("kappa", self.kappa),
            ("gamma_b", self.gamma_b),
            ("alpha", self.alpha),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidParameter {
                    name,
                    reason: format!("must be finite and positive, got {v}"),
                });
            }
        }
        if !(self.gamma_pd.is_finite() && self.gamma_pd >= 0.0) {
            return Err(Error::InvalidParameter {
                name: "gamma_pd",
                reason: format!("must be finite and non-negative, got {}", self.gamma_pd),
            });
        }
        if !(self.temperature.is_finite() && self.temperature >= 0.0) {
            return Err(Error::InvalidParameter {
                name: "temperature",
                reason: format!("must be finite and non-negative, got {}", self.temperature),
            });
        }
        if !self.delta.is_finite() {
            return Err(Error::InvalidParameter {
                name: "delta",
                reason: "must be finite".into(),
            });
        }
        if let Some(ph) = &self.phonon {
            ph.validate()?;
        }
        Ok(())
    }

    pub fn g_rate(&self) -> f64 {
        energy_to_rate(self.g)
    }

    pub fn kappa_rate(&self) -> f64 {
        energy_to_rate(self.kappa)
    }

    pub fn gamma_pd_rate(&self) -> f64 {
        energy_to_rate(self.gamma_pd)
    }

    pub fn delta_rate(&self) -> f64 {
        energy_to_rate(self.delta)
    }

    /// γ_tot in ps⁻¹.
    pub fn gamma_tot(&self) -> f64 {
        let base = self.gamma_pd_rate() + 0.5 * self.kappa_rate();
        if !self.gamma_tot_uses_purcell {
            return base + 0.5 * self.gamma_b;
        }
        let mut decay = self.gamma_b;
        let mut gt = base + 0.5 * decay;
        for _ in 0..200 {
            decay = self.purcell_with_width(gt);
            let next = base + 0.5 * decay;
            if (next - gt).abs() <= 1e-15 * next {
                gt = next;
                break;
            }
            gt = next;
        }
        gt
    }

    fn purcell_with_width(&self, gt: f64) -> f64 {
        let g = self.g_rate();
        let d = self.delta_rate();
        self.gamma_b + 2.0 * g * g * gt / (gt * gt + d * d)
    }

    /// Emission operator on the 4-state basis.
    pub fn emission_operator(&self) -> ComplexMatrix {
        use BasisIndex::*;
        let from = match self.emission_channel {
            EmissionChannel::Qd => Exciton,
            EmissionChannel::Cavity => Photon,
        };
        ComplexMatrix::basis_op(BasisIndex::DIM, Ground.index(), from.index())
    }

    /// Exciton projector |e,0⟩⟨e,0|.
    pub fn exciton_projector() -> ComplexMatrix {
        let e = BasisIndex::Exciton.index();
        ComplexMatrix::basis_op(BasisIndex::DIM, e, e)
    }

    pub fn initial_state() -> ComplexMatrix {
        let p = BasisIndex::Pump.index();
        ComplexMatrix::basis_op(BasisIndex::DIM, p, p)
    }
}

/// Rates of the eliminated three-level emitter, all in ps⁻¹ except `delta` (meV).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EffectiveParams {
    /// Purcell-enhanced decay rate Γ.
    pub decay_rate: f64,
    /// Pure-dephasing rate γ.
    pub gamma_pd: f64,
    /// Pump relaxation rate α.
    pub alpha: f64,
    pub delta: f64,
}

impl EffectiveParams {
    pub fn new(decay_rate: f64, gamma_pd: f64, alpha: f64, delta: f64) -> Self {
        EffectiveParams {
            decay_rate,
            gamma_pd,
            alpha,
            delta,
        }
    }

    pub fn t1(&self) -> f64 {
        1.0 / self.decay_rate
    }

    pub fn t_alpha(&self) -> f64 {
        1.0 / self.alpha
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("decay_rate", self.decay_rate), ("alpha", self.alpha)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidParameter {
                    name,
                    reason: format!("must be finite and positive, got {v}"),
                });
            }
        }
        if !(self.gamma_pd.is_finite() && self.gamma_pd >= 0.0) {
            return Err(Error::InvalidParameter {
                name: "gamma_pd",
                reason: format!("must be finite and non-negative, got {}", self.gamma_pd),
            });
        }
        if !self.delta.is_finite() {
            return Err(Error::InvalidParameter {
                name: "delta",
                reason: "must be finite".into(),
            });
        }
        Ok(())
    }
}

pub fn build_jc_hamiltonian(p: &SystemParams) -> ComplexMatrix {
    use BasisIndex::*;
    let mut h = ComplexMatrix::zeros(BasisIndex::DIM);
    let (e, c) = (Exciton.index(), Photon.index());
    h[(e, e)] = C64::new(p.delta, 0.0);
    h[(e, c)] = C64::new(p.g, 0.0);
    h[(c, e)] = C64::new(p.g, 0.0);
    h
}

/// Full generator of the 4-state model plus an optional extra term.
pub fn build_lindblad_generator(
    p: &SystemParams,
    extra: Option<&Superoperator>,
) -> Result<Superoperator> {
    use BasisIndex::*;
    let d = BasisIndex::DIM;
    let op = |a: BasisIndex, b: BasisIndex| ComplexMatrix::basis_op(d, a.index(), b.index());
    let mut l = Superoperator::hamiltonian(&build_jc_hamiltonian(p));
    let terms = [
        (op(Ground, Photon), p.kappa_rate()),
        (op(Ground, Exciton), p.gamma_b),
        (op(Exciton, Exciton), 2.0 * p.gamma_pd_rate()),
        (op(Exciton, Pump), p.alpha),
    ];
    for (a, rate) in terms {
        if rate != 0.0 {
            l = &l + &Superoperator::lindblad(&a, rate);
        }
    }
    match extra {
        Some(x) => l.checked_add(x),
        None => Ok(l),
    }
}

/// Purcell-enhanced decay rate Γ in ps⁻¹.
pub fn purcell_rate(p: &SystemParams) -> f64 {
    p.purcell_with_width(p.gamma_tot())
}

/// Γ(Δ=0)/Γ_B − 1.
pub fn purcell_factor(p: &SystemParams) -> f64 {
    purcell_rate(&p.with_delta(0.0)) / p.gamma_b - 1.0
}

pub fn adiabatic_eliminated_params(p: &SystemParams) -> EffectiveParams {
    EffectiveParams {
        decay_rate: purcell_rate(p),
        gamma_pd: p.gamma_pd_rate(),
        alpha: p.alpha,
        delta: p.delta,
    }
}

/// Returned by [`validity_ratio`] when every competing scale vanishes.
pub const VALIDITY_SENTINEL: f64 = 1e12;

/// γ_tot / max(|Δ|, Γ, g), all as rates.
pub fn validity_ratio(p: &SystemParams) -> f64 {
    let scale = p
        .delta_rate()
        .abs()
        .max(purcell_rate(p))
        .max(p.g_rate().abs());
    let ratio = p.gamma_tot() / scale;
    if ratio.is_finite() {
        ratio.min(VALIDITY_SENTINEL)
    } else {
        VALIDITY_SENTINEL
    }
}

/// Generator of the eliminated three-level model.
pub fn build_eliminated_generator(eff: &EffectiveParams) -> Superoperator {
    use eliminated_basis::*;
    let op = |a, b| ComplexMatrix::basis_op(DIM, a, b);
    let mut h = ComplexMatrix::zeros(DIM);
    h[(E, E)] = C64::new(eff.delta, 0.0);
    let mut l = Superoperator::hamiltonian(&h);
    for (a, rate) in [
        (op(G, E), eff.decay_rate),
        (op(E, E), 2.0 * eff.gamma_pd),
        (op(E, P), eff.alpha),
    ] {
        if rate != 0.0 {
            l = &l + &Superoperator::lindblad(&a, rate);
        }
    }
    l
}

/// min(1/Γ, 1/α, ħ/κ)/50, floored by ħ/|Δ|/50 when the detuning is the fastest scale.
pub fn default_time_step(p: &SystemParams) -> f64 {
    let mut scale = (1.0 / purcell_rate(p))
        .min(1.0 / p.alpha)
        .min(HBAR / p.kappa);
    if p.delta != 0.0 {
        scale = scale.min(HBAR / p.delta.abs());
    }
    scale / 50.0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    Full,
    Eliminated,
}

/// A generator bundled with the emission operator, initial state and
/// integration settings, ready for the dynamics and correlation pipelines.
#[derive(Debug, Clone)]
pub struct EmitterModel {
    pub kind: ModelKind,
    pub generator: Superoperator,
    pub sigma: ComplexMatrix,
    pub rho0: ComplexMatrix,
    /// Largest integrator step in ps.
    pub max_step: f64,
    /// Most negative eigenvalue tolerated along a trajectory.
    pub positivity_tol: f64,
    /// max(1/Γ, 1/α) in ps, the scale of grid extents.
    pub time_scale: f64,
}

impl EmitterModel {
    /// Full 4-state model, including the phonon dissipator when phonon
    /// parameters are present.
    pub fn full(p: &SystemParams) -> Result<Self> {
        p.validate()?;
        let (extra, positivity_tol) = match &p.phonon {
            Some(_) => (Some(phonon::build_phonon_dissipator(p)?), 1e-5),
            None => (None, 1e-6),
        };
        let generator = build_lindblad_generator(p, extra.as_ref())?;
        let gamma = purcell_rate(p);
        Ok(EmitterModel {
            kind: ModelKind::Full,
            generator,
            sigma: p.emission_operator(),
            rho0: SystemParams::initial_state(),
            max_step: default_time_step(p),
            positivity_tol,
            time_scale: (1.0 / gamma).max(1.0 / p.alpha),
        })
    }

    pub fn eliminated(eff: &EffectiveParams) -> Result<Self> {
        eff.validate()?;
        use eliminated_basis::*;
        let mut scale = (1.0 / eff.decay_rate).min(1.0 / eff.alpha);
        if eff.delta != 0.0 {
            scale = scale.min(HBAR / eff.delta.abs());
        }
        if eff.gamma_pd > 0.0 {
            scale = scale.min(1.0 / eff.gamma_pd);
        }
        Ok(EmitterModel {
            kind: ModelKind::Eliminated,
            generator: build_eliminated_generator(eff),
            sigma: ComplexMatrix::basis_op(DIM, G, E),
            rho0: ComplexMatrix::basis_op(DIM, P, P),
            max_step: scale / 50.0,
            positivity_tol: 1e-6,
            time_scale: (1.0 / eff.decay_rate).max(1.0 / eff.alpha),
        })
    }

    pub fn dim(&self) -> usize {
        self.rho0.dim()
    }

    /// σ†σ, whose expectation is the emitted population.
    pub fn population_operator(&self) -> ComplexMatrix {
        &self.sigma.adjoint() * &self.sigma
    }

    pub fn with_max_step(mut self, max_step: f64) -> Self {
        self.max_step = max_step;
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::eigendecompose_hermitian;

    #[test]
    fn hamiltonian_examples() {
        let mut p = SystemParams::micropillar();
        p.g = 0.0;
        assert_eq!(build_jc_hamiltonian(&p).max_abs(), 0.0);
        p.delta = 0.61;
        let h = build_jc_hamiltonian(&p);
        let expected = ComplexMatrix::diagonal(&[0.0, 0.61, 0.0, 0.0].map(|x| C64::new(x, 0.0)));
        assert_eq!(h.max_abs_diff(&expected), 0.0);
        let p = SystemParams::micropillar();
        let (vals, _) = eigendecompose_hermitian(&build_jc_hamiltonian(&p)).unwrap();
        assert!((vals[0] + 0.034).abs() < 1e-14);
        assert!((vals[3] - 0.034).abs() < 1e-14);
    }

    #[test]
    fn zero_rates_give_zero_generator() {
        let p = SystemParams {
            g: 0.0,
            kappa: 0.0,
            gamma_b: 0.0,
            gamma_pd: 0.0,
            alpha: 0.0,
            delta: 0.0,
            ..SystemParams::micropillar()
        };
        let l = build_lindblad_generator(&p, None).unwrap();
        assert_eq!(l.matrix().max_abs(), 0.0);
    }

    #[test]
    fn generator_extra_dimension_checked() {
        let extra = Superoperator::zeros(3);
        assert!(matches!(
            build_lindblad_generator(&SystemParams::micropillar(), Some(&extra)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn purcell_rate_examples() {
        let mut p = SystemParams::micropillar();
        p.gamma_pd = 1e-3;
        let t1 = 1.0 / purcell_rate(&p);
        assert!((50.0..80.0).contains(&t1), "T1 = {t1}");
        let mut zero = p.clone();
        zero.g = 0.0;
        assert_eq!(purcell_rate(&zero), zero.gamma_b);
        let gt = p.gamma_tot();
        let half = p.with_delta(gt * HBAR);
        let cav0 = purcell_rate(&p) - p.gamma_b;
        let cav_half = purcell_rate(&half) - p.gamma_b;
        assert!((cav_half - 0.5 * cav0).abs() < 1e-15);
    }

    #[test]
    fn purcell_rate_is_even() {
        let p = SystemParams::micropillar();
        for d in [0.01, 0.2, 0.61, 1.3] {
            assert_eq!(purcell_rate(&p.with_delta(d)), purcell_rate(&p.with_delta(-d)));
        }
    }

    #[test]
    fn purcell_factor_scaling() {
        let mut p = SystemParams::micropillar();
        let f1 = purcell_factor(&p);
        p.g *= 2.0;
        let f2 = purcell_factor(&p);
        assert!((f2 / f1 - 4.0).abs() < 1e-12);
        p.g = 0.0;
        assert_eq!(purcell_factor(&p), 0.0);
    }

    #[test]
    fn self_consistent_gamma_tot_close_to_main_form() {
        let p = SystemParams::micropillar();
        let mut q = p.clone();
        q.gamma_tot_uses_purcell = true;
        let (g, d) = (p.g_rate(), p.delta_rate());
        let base = p.gamma_pd_rate() + 0.5 * p.kappa_rate() + 0.5 * p.gamma_b;
        let f = |x: f64| x - base - g * g * x / (x * x + d * d);
        let (mut lo, mut hi) = (base, base + 1.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if f(mid) > 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let x = 0.5 * (lo + hi);
        let expected = p.gamma_b + 2.0 * g * g * x / (x * x + d * d);
        assert!((purcell_rate(&q) / expected - 1.0).abs() < 1e-12);
        assert!(purcell_rate(&q) < purcell_rate(&p));
    }

    #[test]
    fn validity_examples() {
        let p = SystemParams::micropillar();
        let r = validity_ratio(&p);
        assert!((r - 0.42 / (2.0 * 0.034)).abs() / r < 0.02, "ratio {r}");
        let r1 = validity_ratio(&p.with_delta(0.2));
        let r2 = validity_ratio(&p.with_delta(0.4));
        assert!(r2 < r1);
    }

    #[test]
    fn eliminated_passthrough() {
        let mut p = SystemParams::micropillar();
        p.g = 1e-300;
        let eff = adiabatic_eliminated_params(&p);
        assert!((eff.decay_rate - p.gamma_b).abs() < 1e-15);
        assert_eq!(eff.alpha, 1.0 / 3.2);
        assert!((eff.gamma_pd - 1.6e-3 / HBAR).abs() < 1e-15);
    }

    #[test]
    fn invalid_params_rejected() {
        let mut p = SystemParams::micropillar();
        p.kappa = -1.0;
        assert!(p.validate().is_err());
        let mut p = SystemParams::micropillar();
        p.gamma_pd = f64::NAN;
        assert!(p.validate().is_err());
    }
}
