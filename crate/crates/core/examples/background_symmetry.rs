//! A wave on a nonzero background is the zero-background wave lifted by the
//! symmetry `u(x, t) -> u(x - kt, t) + k`. This evolves both sides and
//! compares them.

use fornberg_whitham::evolve::{lift, reference_wave, Evolver};
use fornberg_whitham::nonlocal::Field;
use fornberg_whitham::profile::{background_shift, build_profile, derive_constants, Shift};
use fornberg_whitham::{SimConfig, SimState};

fn main() -> fornberg_whitham::Result<()> {
    let (c_eff, k, t_end) = (7.0 / 6.0, 0.05, 5.0);
    let cfg = SimConfig { c: c_eff, ..SimConfig::default() };
    let wave = reference_wave(&cfg)?;
    let grid = wave.grid();

    // the lifted profile is also a traveling wave in its own right
    let zero = build_profile(&derive_constants(c_eff, 0.0)?, grid.half_width, grid.n)?;
    let lifted = background_shift(&zero, Shift::Lift(k))?;
    let direct = build_profile(&derive_constants(c_eff + k, k)?, grid.half_width, grid.n)?;
    let gap = lifted.phi.iter().zip(&direct.phi).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    println!("lifted profile vs profile built at (c, k) = ({}, {k}): {gap:.2e}", c_eff + k);

    let steps = (t_end / cfg.dt).round() as usize;
    let mut ev = Evolver::new(grid);
    let mut base = SimState::new(wave.clone());
    ev.advance(&mut base, cfg.dt, steps)?;
    let mut lifted = SimState::new(lift(&wave, k, 0.0));
    ev.advance(&mut lifted, cfg.dt, steps)?;

    let image = lift(&base.u, k, k * t_end);
    let diff = lifted.u.with_values(lifted.u.values().iter().zip(image.values()).map(|(a, b)| a - b).collect());
    println!("H1 gap between the lifted run and the image of the base run at T = {t_end}: {:.2e}", diff.h1_norm());
    Ok(())
}
