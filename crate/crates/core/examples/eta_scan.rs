//! Larger `eta` pulls the trajectory closer to the bottom of the basin.
//!
//! `cargo run --release --example eta_scan`

use ecdsep::benchmarks::QuadraticBasin;
use ecdsep::harness::eta_monotonicity_report;
use ecdsep::theory::{concentration_radius_sq, BasinSpec};
use ecdsep::{EcdHyperParams, ParamVector};

fn main() -> ecdsep::Result<()> {
    let basin = QuadraticBasin::new(4, 1.0, 1.0)?;
    let theta0 = ParamVector::new(vec![2.0; 4])?;
    let hp = EcdHyperParams {
        dt: 0.4,
        nu: 0.05,
        ..EcdHyperParams::new(1.0)
    };
    let etas = [1.0, 1.5, 2.0, 3.0, 5.0];
    let rows = eta_monotonicity_report(&basin, &theta0, &etas, &hp, 20_000, 0.5, 0)?;

    println!("eta   tail mean F   predicted F");
    for r in &rows {
        let spec = BasinSpec {
            n: 4,
            f2: 1.0,
            f_min: 1.0,
            f0: 0.0,
            eta: r.eta,
            energy: 1.0,
            f_init: 17.0,
        };
        let predicted = concentration_radius_sq(&spec)? + 1.0;
        println!("{:<5} {:<13.4} {:.4}", r.eta, r.tail_mean_f, predicted);
    }
    Ok(())
}
