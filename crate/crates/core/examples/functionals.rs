//! Energy, charge and the Lyapunov functional of the wave, and the size of
//! its first variation, which vanishes at a critical point.

use fornberg_whitham::functionals::{evaluate, first_variation_residual};
use fornberg_whitham::profile::{build_default_profile, derive_constants};

fn main() -> fornberg_whitham::Result<()> {
    println!("{:>6} {:>16} {:>16} {:>16} {:>10}", "c", "E", "Q", "H", "dH");
    for c in [1.05, 1.1, 1.2, 1.3] {
        let p = build_default_profile(&derive_constants(c, 0.0)?)?;
        let v = evaluate(&p.field(), c);
        let (res, _) = first_variation_residual(&p)?;
        println!("{c:6.2} {:16.12} {:16.12} {:16.12} {res:10.2e}", v.e, v.q, v.h);
    }
    Ok(())
}
