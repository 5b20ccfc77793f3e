//! HOM dip of the eliminated emitter: closed form against the numerical
//! two-time quadrature.

use qd_hom::correlations::{default_delays, g2_hom_analytic, hom_curve_numeric, QuadratureOptions};
use qd_hom::model::adiabatic_eliminated_params;
use qd_hom::{EmitterModel, SystemParams};

fn main() -> qd_hom::Result<()> {
    let eff = adiabatic_eliminated_params(&SystemParams::micropillar());
    let delays = default_delays(eff.t1(), eff.t_alpha());
    let model = EmitterModel::eliminated(&eff)?;
    let (curve, raw) = hom_curve_numeric(&model, &delays, &QuadratureOptions::default(), 0.0)?;
    println!("visibility {:.5}, grid check {:.1e}", curve.visibility, raw.grid_difference);
    println!("{:>10} {:>10} {:>10}", "tau/ps", "analytic", "numeric");
    for (&t, &g) in delays.iter().zip(&curve.g2hom).step_by(4) {
        println!("{t:>10.1} {:>10.5} {g:>10.5}", g2_hom_analytic(t, &eff));
    }
    Ok(())
}
