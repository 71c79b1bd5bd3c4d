//! Fixed-budget random search on Zakharov for ECDSep, Adam and GDM.
//!
//! `cargo run --release --example zakharov_sweep [trials]`

use ecdsep::harness::{run_sweep, SweepSpec};

const SPEC: &str = r#"
seed = 0
trials = 30
steps = 250
preset = "zakharov"
optimizers = ["ecdsep", "adam", "gdm"]

[problem]
kind = "zakharov"
n = 10
"#;

fn main() -> ecdsep::Result<()> {
    let mut spec = SweepSpec::from_toml_str(SPEC)?;
    if let Some(t) = std::env::args().nth(1).and_then(|a| a.parse().ok()) {
        spec.trials = t;
    }
    let report = run_sweep(&spec)?;
    for &kind in &spec.optimizers {
        let diverged = report.for_optimizer(kind).filter(|t| t.diverged).count();
        if let Some(best) = report.best(kind) {
            println!(
                "{:<7} best final F {:.3e}  ({diverged}/{} diverged)  {}",
                kind.name(),
                best.final_f,
                spec.trials,
                best.params.describe()
            );
        }
    }
    Ok(())
}
