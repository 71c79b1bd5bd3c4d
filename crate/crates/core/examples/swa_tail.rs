//! Averages the tail of a minibatch trajectory and keeps the window start
//! that gives the lowest full-data loss.
//!
//! `cargo run --release --example swa_tail`

use ecdsep::harness::{swa, RunConfig};

const CONFIG: &str = r#"
max_steps = 2000
seed = 2
record_every = 10

[problem]
kind = "logistic"
n_features = 8
batch_size = 32
data_seed = 3
separation = 0.5

[optimizer]
kind = "ecdsep"
dt = 0.1
nu = 0.01
"#;

fn main() -> ecdsep::Result<()> {
    let cfg = RunConfig::from_toml_str(CONFIG)?;
    let (report, summary) = swa(&cfg)?;
    println!("logged iterates   {}", report.log.len());
    println!(
        "average from step {} over {} iterates",
        summary.start_step, summary.averaged
    );
    println!(
        "loss at last iterate  {:.4}",
        summary.f_last.unwrap_or(f64::NAN)
    );
    println!("loss at average       {:.4}", summary.f_average);
    Ok(())
}
