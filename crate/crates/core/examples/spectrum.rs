//! Spectral picture of the linearization at a few speeds: essential
//! spectrum, the negative eigenvalue from Prüfer shooting, and the dense
//! matrix check.
//!
//! ```text
//! cargo run --example spectrum -- 1.05 1.2 1.3
//! ```

use fornberg_whitham::spectral::{spectral_report, MatrixOracle};

fn main() -> fornberg_whitham::Result<()> {
    let speeds: Vec<f64> = std::env::args()
        .skip(1)
        .map(|a| a.parse().expect("speed must be a number"))
        .collect();
    let speeds = if speeds.is_empty() { vec![1.05, 1.2, 1.3] } else { speeds };

    for c in speeds {
        let r = spectral_report(c, None)?;
        println!("c = {c}");
        println!("  essential spectrum  [{:.6}, {:.6})", r.ess_lo, r.ess_hi);
        println!("  lower bound         {:.9}", r.lambda0);
        println!("  lambda*             {:.12}", r.lambda_star);
        println!("  theta(0, 0) + pi/2  {:.3e}", r.theta_at_zero + std::f64::consts::FRAC_PI_2);
        println!("  kernel residual     {:.3e}  p0 sign ok: {}", r.kernel_residual, r.p0_sign_ok);

        let oracle = MatrixOracle::new(c, 2048)?;
        let ev = oracle.eigenvalues();
        let below: Vec<_> = ev.iter().filter(|&&l| l < r.ess_lo).collect();
        println!("  matrix eigenvalues below c - 1: {below:.9?}");
        let s = oracle.summarize(&ev);
        println!(
            "  negatives: {}  closest to zero: {:.2e}  |lambda* - matrix| = {:.2e}",
            s.n_negative,
            s.closest_to_zero,
            (ev[0] - r.lambda_star).abs()
        );
    }
    Ok(())
}
