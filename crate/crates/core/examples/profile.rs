//! Builds the solitary wave at a given speed and background and reports its
//! shape and how well it satisfies the traveling-wave equations.
//!
//! ```text
//! cargo run --example profile -- 1.2 0.0
//! ```

use fornberg_whitham::profile::{build_default_profile, derive_constants, profile_residuals, turning_points};

fn main() -> fornberg_whitham::Result<()> {
    let mut args = std::env::args().skip(1).map(|a| a.parse::<f64>().expect("numeric argument"));
    let c = args.next().unwrap_or(1.2);
    let k = args.next().unwrap_or(0.0);

    let params = derive_constants(c, k)?;
    let tp = turning_points(&params)?;
    let p = build_default_profile(&params)?;
    let (res2, res1) = profile_residuals(&p);

    println!("c = {c}, k = {k}");
    println!("alpha = {:.12}  beta = {:.12}", params.alpha, params.beta);
    println!("decay rate mu = {:.12}", params.decay_rate());
    println!("saddle phi1 = {:.12}  center phi2 = {:.12}", tp.phi1, tp.phi2);
    println!("crest (closed form) = {:.12}", tp.phi_max);
    println!("crest (grid)        = {:.12}", p.max_value());
    println!("grid: L = {}, {} intervals", p.half_width, p.n);
    println!("residuals: second order {res2:.2e}, first order {res1:.2e}");
    println!("symmetry defect {:.2e}", p.symmetry_defect());

    // a coarse look at the shape
    for x in [0.0, 1.0, 2.0, 5.0, 10.0, 20.0] {
        println!("  phi({x:>4}) = {:.12}", p.interpolate(x));
    }
    Ok(())
}
