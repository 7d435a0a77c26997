//! The stability index d''(c) in closed form and from finite differences of
//! numerically integrated charges, and the critical speed where it vanishes.

use fornberg_whitham::stability::{
    d2_closed_form, d2_finite_difference, find_c0, q_closed_form, q_numeric, stability_verdict, DEFAULT_FD_STEP,
};

fn main() -> fornberg_whitham::Result<()> {
    let c0 = find_c0();
    println!("c0 = {:.12} (bisection: {} iterations, d'' = {:.1e})", c0.c0, c0.iterations, c0.residual);
    println!("distance to 4/3: {:.6e}\n", 4.0 / 3.0 - c0.c0);

    println!("{:>6} {:>14} {:>9} {:>14} {:>14} {:>9}  verdict", "c", "Q", "rel err", "d''", "d'' (fd)", "rel err");
    for c in [1.05, 1.1, 1.2, 1.3, 1.33] {
        let q = q_closed_form(c)?;
        let qn = q_numeric(c)?;
        let d2 = d2_closed_form(c)?;
        let fd = d2_finite_difference(c, DEFAULT_FD_STEP)?;
        println!(
            "{c:6.2} {q:14.10} {:9.1e} {d2:14.10} {fd:14.10} {:9.1e}  {}",
            ((qn - q) / q).abs(),
            ((fd - d2) / d2).abs(),
            stability_verdict(c)?
        );
    }
    for c in [1.333_328, 1.333_33] {
        println!("c = {c}: {}", stability_verdict(c)?);
    }
    Ok(())
}
