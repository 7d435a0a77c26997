//! The potential of the first-order energy relation for the wave of speed 2
//! on background 5/6, with its saddle and center.

use fornberg_whitham::profile::{critical_points, derive_constants, potential, sample_potential};

fn main() -> fornberg_whitham::Result<()> {
    let params = derive_constants(2.0, 5.0 / 6.0)?;
    println!("alpha = {:.9}", params.alpha);
    println!("beta  = {:.9}", params.beta);

    let (phi1, phi2) = critical_points(&params)?;
    println!("saddle phi1 = {phi1:.12}  F = {:.9}", potential(phi1, &params)?);
    println!("center phi2 = {phi2:.12}  F = {:.9}", potential(phi2, &params)?);

    println!("\n{:>10} {:>14}", "phi", "F");
    for (phi, f) in sample_potential(&params, 25) {
        println!("{phi:10.5} {f:14.6}");
    }
    Ok(())
}
