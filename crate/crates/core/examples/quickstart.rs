//! Minimize a user-supplied function with ECDSep.
//!
//! `cargo run --example quickstart`

use ecdsep::driver::RunOptions;
use ecdsep::ecdsep::run;
use ecdsep::{EcdHyperParams, FnObjective, ParamVector, RngStream};

fn main() -> ecdsep::Result<()> {
    // Rosenbrock valley, minimum 0 at (1, 1).
    let rosenbrock = FnObjective::new(2, |t: &[f64]| {
        let (x, y) = (t[0], t[1]);
        let value = (1.0 - x).powi(2) + 100.0 * (y - x * x).powi(2);
        let grad = vec![
            -2.0 * (1.0 - x) - 400.0 * x * (y - x * x),
            200.0 * (y - x * x),
        ];
        (value, grad)
    });

    let hp = EcdHyperParams {
        dt: 0.05,
        nu: 1e-3,
        ..EcdHyperParams::new(2.0)
    };
    let opts = RunOptions::new(20_000).record_every(2_000);
    let theta0 = ParamVector::new(vec![-1.5, 2.0])?;
    let (state, log) = run(&rosenbrock, theta0, &hp, &opts, RngStream::new(0))?;

    for r in log.records() {
        println!(
            "step {:>6}  F = {:.3e}  |pi| = {:.3}",
            r.step, r.f, r.pi_norm
        );
    }
    println!("theta = {:?}", state.theta().as_slice());
    Ok(())
}
