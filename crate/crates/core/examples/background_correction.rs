//! Removing the multi-photon background from a measured HOM dip.

use qd_hom::correlations::{background_correct, g2_hom_numeric};
use qd_hom::io::{parse_dataset, DatasetKind};

fn main() -> qd_hom::Result<()> {
    let text = "tau_d_ns,g2hom,g2hom_err\n\
                -0.2,0.49,0.02\n-0.1,0.41,0.02\n0.0,0.17,0.02\n0.1,0.42,0.02\n0.2,0.50,0.02\n";
    let data = parse_dataset(text, DatasetKind::HomDip, "measured")?;
    let g2zero = 0.04;
    let corrected = background_correct(&data.y, g2zero)?;
    for (i, v) in corrected.values.iter().enumerate() {
        println!("tau {:>6.0} ps: raw {:.3} -> {:.3}", data.x[i], data.y[i], v);
    }
    println!("clamped: {}", corrected.clamped);
    let predicted = g2_hom_numeric(0.72, g2zero);
    println!("a source with visibility 0.72 and g2(0) = {g2zero} shows g2_HOM(0) = {predicted:.3}");
    Ok(())
}
