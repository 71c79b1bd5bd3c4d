//! Saves the optimizer state to JSON mid-run and resumes from it.
//!
//! `cargo run --example checkpoint_resume`

use ecdsep::benchmarks::Zakharov;
use ecdsep::{EcdHyperParams, EcdState, Ecdsep, ParamVector, RngStream};

fn main() -> ecdsep::Result<()> {
    let obj = Zakharov { n: 5 };
    let hp = EcdHyperParams {
        dt: 0.05,
        ..EcdHyperParams::new(1.0)
    };
    let mut opt = Ecdsep::new(
        &obj,
        ParamVector::new(vec![1.0; 5])?,
        hp.clone(),
        RngStream::new(0),
    )?;
    for _ in 0..100 {
        opt.step_report(&obj, None)?;
    }

    let json = serde_json::to_string(opt.state()).expect("state serializes");
    println!(
        "checkpoint: {} bytes at step {}",
        json.len(),
        opt.state().step()
    );

    // The random stream is not part of the checkpoint; pick a fresh one.
    let restored: EcdState = serde_json::from_str(&json).expect("state deserializes");
    let mut resumed = Ecdsep::from_state(hp, restored, RngStream::new(1))?;
    let mut last = 0.0;
    for _ in 0..400 {
        last = resumed.step_report(&obj, None)?.value;
    }
    println!("step {}  F = {last:.3e}", resumed.state().step());
    Ok(())
}
