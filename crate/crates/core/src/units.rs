//! Physical constants and unit conversions.
//!
//! Energies are in meV, times in ps, rates in ps⁻¹ and temperatures in K.

use crate::error::{Error, Result};

/// Reduced Planck constant in meV·ps.
pub const HBAR: f64 = 0.6582119569;

/// Boltzmann constant in meV/K.
pub const K_B: f64 = 0.0861733;

/// Angular rate (ps⁻¹) associated with an energy (meV).
pub fn energy_to_rate(energy: f64) -> f64 {
    energy / HBAR
}

/// Energy (meV) associated with an angular rate (ps⁻¹).
pub fn rate_to_energy(rate: f64) -> f64 {
    rate * HBAR
}

pub fn uev_to_mev(x: f64) -> f64 {
    x * 1e-3
}

pub fn mev_to_uev(x: f64) -> f64 {
    x * 1e3
}

pub fn ns_to_ps(x: f64) -> f64 {
    x * 1e3
}

pub fn ps_to_ns(x: f64) -> f64 {
    x * 1e-3
}

/// Bose–Einstein occupation of a mode of energy `energy` (meV) at
/// `temperature` (K). Zero at zero temperature.
pub fn thermal_occupation(energy: f64, temperature: f64) -> Result<f64> {
    if !(energy > 0.0) {
        return Err(Error::Domain(format!(
            "thermal occupation needs a positive energy, got {energy}"
        )));
    }
    if temperature < 0.0 || !temperature.is_finite() {
        return Err(Error::Domain(format!("invalid temperature {temperature}")));
    }
    Ok(occupation_unchecked(energy, temperature))
}

/// Occupation without domain checks; callers guarantee `energy > 0`.
pub(crate) fn occupation_unchecked(energy: f64, temperature: f64) -> f64 {
    if temperature == 0.0 {
        return 0.0;
    }
    1.0 / (energy / (K_B * temperature)).exp_m1()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hbar_identity() {
        assert_eq!(energy_to_rate(0.6582119569), 1.0);
        assert_eq!(energy_to_rate(0.0), 0.0);
    }

    #[test]
    fn dephasing_rate_conversion() {
        // 1.6 ueV / hbar
        let r = energy_to_rate(1.6e-3);
        assert!((r - 2.4309e-3).abs() < 1e-7, "{r}");
    }

    #[test]
    fn rate_round_trip() {
        for &x in &[1e-6, 0.3, 1.0, 7.25, 123.456] {
            let y = energy_to_rate(rate_to_energy(x));
            assert!((y - x).abs() <= 2.0 * f64::EPSILON * x);
        }
    }

    #[test]
    fn occupation_limits() {
        assert_eq!(thermal_occupation(1.0, 0.0).unwrap(), 0.0);
        let n = thermal_occupation(0.0861733, 1.0).unwrap();
        assert!((n - 1.0 / (std::f64::consts::E - 1.0)).abs() < 1e-12);
        assert!((n - 0.58198).abs() < 1e-5);
    }

    #[test]
    fn occupation_detailed_balance_identity() {
        let (e, t) = (0.5, 10.0);
        let n = thermal_occupation(e, t).unwrap();
        let rhs = (e / (K_B * t)).exp() * n;
        assert!((n + 1.0 - rhs).abs() < 1e-12);
    }

    #[test]
    fn occupation_rejects_nonpositive_energy() {
        assert!(thermal_occupation(0.0, 4.0).is_err());
        assert!(thermal_occupation(-1.0, 4.0).is_err());
    }
}
