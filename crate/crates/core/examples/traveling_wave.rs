//! Evolves the unperturbed wave at c = 1.2 and checks that it simply
//! translates at speed c.

use fornberg_whitham::evolve::{reference_wave, Evolver, OrbitalMeter};
use fornberg_whitham::{functionals, SimConfig, SimState};

fn main() -> fornberg_whitham::Result<()> {
    let cfg = SimConfig::default();
    let wave = reference_wave(&cfg)?;
    let meter = OrbitalMeter::new(&wave);
    let mut evolver = Evolver::new(wave.grid());
    let mut state = SimState::new(wave.clone());

    let steps = (0.5 / cfg.dt).round() as usize;
    println!("{:>6} {:>12} {:>10} {:>11} {:>11}", "t", "dist", "shift", "dE", "dQ");
    for _ in 0..40 {
        evolver.advance(&mut state, cfg.dt, steps)?;
        let (dist, shift) = meter.distance(&state.u)?;
        let e = functionals::energy_e(&state.u);
        let q = functionals::charge_q(&state.u);
        println!(
            "{:6.1} {dist:12.3e} {shift:10.6} {:11.2e} {:11.2e}",
            state.t,
            (e - state.e0) / state.e0.abs(),
            (q - state.q0) / state.q0
        );
    }
    let expected = cfg.c * state.t;
    println!("crest moved {:.9}, c t = {expected:.9}", meter.distance(&state.u)?.1);
    Ok(())
}
