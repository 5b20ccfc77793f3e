//! Coherence time from a first-order (Michelson) interference scan.

use qd_hom::correlations::{coherence_time, michelson_contrast};
use qd_hom::fitting::{fit_michelson, Dataset};
use qd_hom::model::adiabatic_eliminated_params;
use qd_hom::SystemParams;

fn main() -> qd_hom::Result<()> {
    let eff = adiabatic_eliminated_params(&SystemParams::micropillar());
    let t2 = coherence_time(eff.t1(), eff.gamma_pd);
    println!("T1 = {:.1} ps, T2 = {t2:.1} ps (Fourier limit {:.1} ps)", eff.t1(), 2.0 * eff.t1());
    let x: Vec<f64> = (0..31).map(|i| -240.0 + 16.0 * i as f64).collect();
    let y = x.iter().map(|&t| michelson_contrast(t, 0.02, 0.95, t2)).collect();
    let fit = fit_michelson(&Dataset::new(x, y, None, "scan")?)?;
    println!(
        "fit: A = {:.3}, B = {:.3}, T2 = {:.1} ps",
        fit.param("a"),
        fit.param("b"),
        fit.param("t2_ps")
    );
    Ok(())
}
