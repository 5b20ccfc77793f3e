//! Purcell-enhanced lifetime versus QD-cavity detuning, and a Lorentzian fit
//! of the resulting T1 curve.

use qd_hom::fitting::{fit_lifetime_lorentzian, Dataset, LorentzianLifetime};
use qd_hom::model::{purcell_factor, purcell_rate, validity_ratio};
use qd_hom::SystemParams;

fn main() -> qd_hom::Result<()> {
    let p = SystemParams::micropillar();
    println!("Purcell factor F_P = {:.2}", purcell_factor(&p));
    println!("{:>10} {:>10} {:>10}", "delta/meV", "T1/ps", "validity");
    let mut x = Vec::new();
    let mut y = Vec::new();
    for i in 0..=12 {
        let delta = 0.15 * (i - 6) as f64;
        let q = p.with_delta(delta);
        let t1 = 1.0 / purcell_rate(&q);
        println!("{delta:>10.2} {t1:>10.1} {:>10.2}", validity_ratio(&q));
        x.push(delta);
        y.push(t1);
    }

    let sigma = y.iter().map(|t| 0.02 * t).collect();
    let data = Dataset::new(x, y, Some(sigma), "model")?;
    let fit = fit_lifetime_lorentzian(&data, p.kappa)?;
    let model = LorentzianLifetime::from_fit(&fit)?;
    println!(
        "fitted T_B = {:.1} ps, F_P = {:.2}, T1(0.61 meV) = {:.1} ps",
        fit.param("t_b_ps"),
        fit.param("purcell_factor"),
        model.t1(0.61)
    );
    Ok(())
}
