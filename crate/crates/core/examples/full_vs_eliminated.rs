//! Visibility of the full exciton-cavity model against the eliminated
//! formula across detuning, together with the validity ratio.

use qd_hom::correlations::{visibility, visibility_resolvent};
use qd_hom::model::{adiabatic_eliminated_params, validity_ratio};
use qd_hom::{EmissionChannel, EmitterModel, SystemParams};

fn main() -> qd_hom::Result<()> {
    let base = SystemParams::micropillar();
    println!("{:>8} {:>9} {:>9} {:>9} {:>9}", "delta", "formula", "full qd", "full cav", "validity");
    for i in 0..=8 {
        let delta = 0.05 * i as f64;
        let p = base.with_delta(delta);
        let formula = visibility(&adiabatic_eliminated_params(&p));
        let qd = visibility_resolvent(&EmitterModel::full(&p)?)?;
        let cavity = SystemParams {
            emission_channel: EmissionChannel::Cavity,
            ..p.clone()
        };
        let cav = visibility_resolvent(&EmitterModel::full(&cavity)?)?;
        println!("{delta:>8.2} {formula:>9.5} {qd:>9.5} {cav:>9.5} {:>9.2}", validity_ratio(&p));
    }
    Ok(())
}
