//! Minibatch training of a logistic-regression model. Each step sees a new
//! batch, and ECDSep projects the momentum back onto the energy surface
//! whenever the loss jumps between batches.
//!
//! `cargo run --release --example minibatch_logistic`

use ecdsep::benchmarks::SyntheticClassification;
use ecdsep::driver::{drive, BatchSchedule, RunOptions};
use ecdsep::ecdsep::ProjectionOutcome;
use ecdsep::{EcdHyperParams, Ecdsep, Objective, ParamVector, RngStream};

fn main() -> ecdsep::Result<()> {
    let data = SyntheticClassification::new(8, 1024, 1.0, 64, 7)?;
    let hp = EcdHyperParams {
        dt: 0.1,
        nu: 1e-3,
        ..EcdHyperParams::new(3.0)
    };
    let theta0 = ParamVector::zeros(data.dimension())?;
    let mut opt = Ecdsep::new(&data, theta0, hp, RngStream::new(1))?;

    let mut projected = 0;
    for k in 0..200u64 {
        let batch = BatchSchedule::Cycling.token(k);
        let r = opt.step_report(&data, batch)?;
        if matches!(r.projection, ProjectionOutcome::Rescaled) {
            projected += 1;
        }
    }
    println!(
        "first 200 steps: {projected} projections, full loss {:.4}",
        data.value(opt.state().theta(), None)?
    );

    let opts = RunOptions::new(800)
        .record_every(100)
        .batches(BatchSchedule::Cycling);
    let out = drive(&mut opt, &data, &opts, |_, _| {})?;
    for r in out.log.records() {
        println!("step {:>4}  batch loss {:.4}", r.step, r.f);
    }
    println!("final full-data loss {:.4}", out.final_f);
    Ok(())
}
