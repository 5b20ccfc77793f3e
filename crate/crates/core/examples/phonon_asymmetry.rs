//! Phonon-assisted asymmetry of the visibility in detuning, and the share of
//! on-resonance dephasing attributable to phonons.

use qd_hom::correlations::visibility_resolvent;
use qd_hom::phonon::{effective_dephasing_equivalent, half_fourier_rate, DephasingOptions};
use qd_hom::units::uev_to_mev;
use qd_hom::{EmitterModel, PhononParams, SystemParams};

fn main() -> qd_hom::Result<()> {
    let ph = PhononParams::gaas(10.0);
    println!("one-sided rates at 10 K (ps^-1):");
    for w in [-1.0, -0.5, 0.5, 1.0] {
        println!("  omega {w:>5.2} meV: {:.4e}", half_fourier_rate(w, &ph).re);
    }

    for t in [5.0, 10.0, 20.0] {
        let p = SystemParams::micropillar()
            .with_temperature(t)
            .with_phonons(Some(PhononParams::gaas(t)));
        let plus = visibility_resolvent(&EmitterModel::full(&p.with_delta(0.5))?)?;
        let minus = visibility_resolvent(&EmitterModel::full(&p.with_delta(-0.5))?)?;
        println!("T = {t:>4} K: nu(+0.5) = {plus:.5}, nu(-0.5) = {minus:.5}, asymmetry {:.2e}", (plus - minus).abs());
    }

    let p = SystemParams {
        gamma_pd: uev_to_mev(1.0),
        ..SystemParams::micropillar()
    }
    .with_phonons(Some(PhononParams::gaas(17.5)));
    let r = effective_dephasing_equivalent(&p, &DephasingOptions::default())?;
    println!(
        "17.5 K, constant gamma 1 ueV: gamma_eff = {:.3} ueV, phonon share {:.1}%",
        qd_hom::units::mev_to_uev(qd_hom::units::rate_to_energy(r.gamma_eff)),
        100.0 * r.phonon_share
    );
    Ok(())
}
