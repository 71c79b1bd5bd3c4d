//! ECDSep against tuned-down Adam and GDM on the regularized Ackley surface,
//! starting inside a local basin at (-4, 3).
//!
//! `cargo run --release --example ackley_escape`

use ecdsep::benchmarks::AckleyRegularized;
use ecdsep::driver::{drive, Optimizer, RunOptions};
use ecdsep::{
    Adam, AdamHyperParams, EcdHyperParams, Ecdsep, Gdm, GdmHyperParams, ParamVector, RngStream,
};

fn main() -> ecdsep::Result<()> {
    let obj = AckleyRegularized;
    let start = ParamVector::new(vec![-4.0, 3.0])?;
    let opts = RunOptions::new(5_000).without_log();

    // Settings found by `ecdsep sweep --config configs/ackley_sweep.toml`.
    let hp = EcdHyperParams {
        dt: 0.48,
        nu: 2.3e-4,
        ..EcdHyperParams::new(2.2)
    };
    let mut optimizers: Vec<Box<dyn Optimizer>> = vec![
        Box::new(Ecdsep::new(&obj, start.clone(), hp, RngStream::new(2))?),
        Box::new(Adam::new(start.clone(), AdamHyperParams::new(0.57))?),
        Box::new(Gdm::new(
            start.clone(),
            GdmHyperParams {
                alpha: 6e-4,
                beta: 0.82,
            },
        )?),
    ];

    for opt in &mut optimizers {
        let out = drive(opt.as_mut(), &obj, &opts, |_, _| {})?;
        println!(
            "{:<7} best F {:>10.3e}  final theta {:?}",
            opt.name(),
            out.best_f,
            opt.theta().as_slice()
        );
    }
    Ok(())
}
