//! Populations and first-order correlations of the full model from the
//! quantum regression theorem.

use qd_hom::dynamics::{g2_hbt_regression, TimeGrid};
use qd_hom::{EmitterModel, SystemParams};

fn main() -> qd_hom::Result<()> {
    let model = EmitterModel::full(&SystemParams::micropillar().with_delta(0.1))?;
    let grid = TimeGrid::new(0.0, 5.0, 61)?;
    let traj = model.evolve(&grid)?;
    println!("{:>6} {:>8} {:>8} {:>8} {:>8}", "t/ps", "pump", "exciton", "photon", "ground");
    for i in (0..grid.n).step_by(6) {
        let r = &traj.states[i];
        println!(
            "{:>6.0} {:>8.4} {:>8.4} {:>8.4} {:>8.4}",
            grid.time(i),
            r[(0, 0)].re,
            r[(1, 1)].re,
            r[(2, 2)].re,
            r[(3, 3)].re
        );
    }

    let g1 = model.g1(&traj, &grid)?;
    println!("|G1(t, t+tau)| at t = 20 ps:");
    for k in (0..grid.n).step_by(10) {
        println!("  tau {:>5.0} ps: {:.5}", grid.time(k), g1.get(4, k).norm());
    }
    let g2 = g2_hbt_regression(&model.generator, &model.sigma, &traj, &grid)?;
    let peak = g2.values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    println!("max |G2_HBT| = {peak:.1e}");
    Ok(())
}
