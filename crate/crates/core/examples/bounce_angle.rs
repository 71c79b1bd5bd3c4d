//! Closed-form helpers: the microcanonical density, the mean bounce angle of
//! the momentum rotation, and a suggested chaos strength.
//!
//! `cargo run --release --example bounce_angle`

use ecdsep::theory::{mean_bounce_angle, measure_density, nu_star, BasinSpec};
use ecdsep::RngStream;

fn main() -> ecdsep::Result<()> {
    let mut rng = RngStream::new(0);
    println!("nu*sqrt(n)   mean angle (n = 1000)   small-angle guess");
    for x in [0.01, 0.1, 0.5, 1.0, 3.0, 10.0] {
        let n = 1000;
        let nu = x / (n as f64).sqrt();
        let angle = mean_bounce_angle(nu, n, &mut rng, 20_000)?;
        println!("{x:<12} {angle:<23.4} {x:.4}");
    }

    println!("\nmeasure density at V = 0.5, E = 1:");
    for n in [2, 10, 100] {
        println!("  n = {n:<4} {:.4e}", measure_density(0.5, n, 1.0)?);
    }

    let basin = BasinSpec {
        n: 100,
        f2: 1.0,
        f_min: 0.1,
        f0: 0.0,
        eta: 2.0,
        energy: 1.0,
        f_init: 5.0,
    };
    println!("\nsuggested nu for dt = 0.1: {:.4e}", nu_star(&basin, 0.1)?);
    Ok(())
}
