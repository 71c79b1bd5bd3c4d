//! With F0 set above the true minimum the potential hits zero and plain
//! ECDSep stops. The self-tuning variant lowers the offset instead.
//!
//! `cargo run --example self_tuning`

use ecdsep::benchmarks::QuadraticBasin;
use ecdsep::driver::{drive, RunOptions};
use ecdsep::{EcdHyperParams, Ecdsep, ParamVector, RngStream};

fn main() -> ecdsep::Result<()> {
    // Minimum is -1, the offset guess is 0.
    let basin = QuadraticBasin::new(1, 1.0, -1.0)?;
    let theta0 = ParamVector::new(vec![2.0])?;
    let base = EcdHyperParams {
        dt: 1.0,
        nu: 1.0,
        ..EcdHyperParams::new(3.0)
    };
    let opts = RunOptions::new(10_000).without_log();

    for self_tune in [false, true] {
        let hp = EcdHyperParams {
            self_tune_f0: self_tune,
            ..base.clone()
        };
        let mut opt = Ecdsep::new(&basin, theta0.clone(), hp.clone(), RngStream::new(0))?;
        let out = drive(&mut opt, &basin, &opts, |_, _| {})?;
        let st = opt.state();
        println!(
            "self_tune={self_tune:<5} steps {:>5}  terminated {:<5}  F {:.4}  F0 + dF0 = {:.4}",
            out.steps,
            out.terminated,
            out.final_f,
            hp.f0 + st.delta_f0()
        );
    }
    Ok(())
}
