//! Perturbs the wave at c = 1.2 and follows its distance to the family of
//! translated waves.
//!
//! ```text
//! cargo run --example orbital_stability -- noise 0.01 100
//! ```

use fornberg_whitham::evolve::{run, Shape};
use fornberg_whitham::SimConfig;

fn main() -> fornberg_whitham::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let shape: Shape = args.first().map_or(Ok(Shape::Even), |s| s.parse())?;
    let rho = args.get(1).map_or(0.01, |s| s.parse().expect("rho"));
    let t_end = args.get(2).map_or(100.0, |s| s.parse().expect("T"));

    let cfg = SimConfig {
        rho,
        shape,
        t_end,
        seed: 7,
        ..SimConfig::default()
    };
    let trace = run(&cfg)?;
    for row in trace.rows.iter().step_by(10) {
        println!("t = {:6.1}  dist = {:.6e}  shift = {:9.4}", row.t, row.dist, row.shift);
    }
    let (de, dq) = trace.max_drift();
    println!("dist(0) = {:.6e}, sup dist = {:.6e}, ratio {:.3}", trace.initial_distance(), trace.max_distance(), trace.max_distance() / trace.initial_distance());
    println!("max drift: E {de:.2e}, Q {dq:.2e}");
    if let Some(t) = trace.blowup {
        println!("blow-up at t = {t}");
    }
    Ok(())
}
