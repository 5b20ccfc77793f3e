//! Pure dephasing against time jitter: a dip-only fit cannot tell them
//! apart, adding visibility-versus-detuning data can.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use qd_hom::correlations::{g2_hom_analytic, visibility};
use qd_hom::fitting::{classify_regime, fit_hom_joint, Dataset, DecayModel, JointOptions};
use qd_hom::model::adiabatic_eliminated_params;
use qd_hom::SystemParams;

fn main() -> qd_hom::Result<()> {
    let p = SystemParams::micropillar();
    let eff = adiabatic_eliminated_params(&p);
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let noise = Normal::new(0.0, 0.02).unwrap();

    let half = 5.0 * eff.t1();
    let tau: Vec<f64> = (0..41).map(|i| -half + 2.0 * half * i as f64 / 40.0).collect();
    let dip_y = tau.iter().map(|&t| g2_hom_analytic(t, &eff) + noise.sample(&mut rng)).collect();
    let dl: Vec<f64> = (0..29).map(|i| -0.7 + 0.05 * i as f64).collect();
    let vis_y = dl
        .iter()
        .map(|&d| visibility(&adiabatic_eliminated_params(&p.with_delta(d))) + noise.sample(&mut rng))
        .collect();
    let dip = Dataset::new(tau, dip_y, Some(vec![0.02; 41]), "dip")?;
    let vis = Dataset::new(dl, vis_y, Some(vec![0.02; 29]), "visibility")?;
    let decay = DecayModel::Purcell(p.clone());

    let report = |name: &str, fit: &qd_hom::fitting::FitResult| {
        let regime = classify_regime(decay.rate(0.0), fit.param("alpha_per_ps"), fit.param("gamma_per_ps"));
        println!(
            "{name:<12} T_alpha {:>6.2} ps  gamma {:>5.2} ueV  dip chi2 {:>6.1}  {regime:?}",
            fit.param("t_alpha_ps"),
            fit.param("gamma_uev"),
            fit.param("dip_chi_square")
        );
    };
    report("joint", &fit_hom_joint(&dip, Some(&vis), &decay, &JointOptions::default())?);
    report("dip only", &fit_hom_joint(&dip, None, &decay, &JointOptions::default())?);
    let jitter = JointOptions {
        fix_gamma_uev: Some(0.0),
        ..JointOptions::default()
    };
    report("jitter only", &fit_hom_joint(&dip, None, &decay, &jitter)?);
    Ok(())
}
