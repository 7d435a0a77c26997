//! Adaptive Dormand–Prince 5(4) integrator for small autonomous-size systems.
//!
//! The integrator works on fixed-size state arrays and integrates between two
//! abscissae, in either direction. Callers that sample a solution on a grid
//! integrate node to node and carry the step-size suggestion forward.

use crate::error::{Error, Result};

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

// difference between the 5th and embedded 4th order weights
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

#[derive(Debug, Clone, Copy)]
pub struct Dopri5 {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
}

impl Dopri5 {
    pub fn new(rtol: f64, atol: f64) -> Self {
        Self {
            rtol,
            atol,
            max_steps: 5_000_000,
        }
    }

    /// Integrates `y' = f(x, y)` from `x0` to `x1`.
    ///
    /// `step` is the initial step magnitude; on return it holds the last
    /// suggested magnitude so that consecutive calls continue smoothly.
    pub fn integrate<const N: usize, F>(
        &self,
        mut f: F,
        x0: f64,
        y0: [f64; N],
        x1: f64,
        step: &mut f64,
    ) -> Result<[f64; N]>
    where
        F: FnMut(f64, &[f64; N]) -> [f64; N],
    {
        let span = x1 - x0;
        if span == 0.0 {
            return Ok(y0);
        }
        let dir = span.signum();
        let mut h = if *step > 0.0 { *step } else { 1e-3 * span.abs() };
        h = h.min(span.abs());

        let mut x = x0;
        let mut y = y0;
        let mut k1 = f(x, &y);
        let mut steps = 0usize;

        loop {
            let remaining = (x1 - x) * dir;
            if remaining <= 1e-15 * (1.0 + x1.abs()) {
                break;
            }
            let last = h >= remaining;
            let hs = if last { remaining } else { h } * dir;

            let y2 = combine(&y, hs, &[(A21, &k1)]);
            let k2 = f(x + C2 * hs, &y2);
            let y3 = combine(&y, hs, &[(A31, &k1), (A32, &k2)]);
            let k3 = f(x + C3 * hs, &y3);
            let y4 = combine(&y, hs, &[(A41, &k1), (A42, &k2), (A43, &k3)]);
            let k4 = f(x + C4 * hs, &y4);
            let y5 = combine(&y, hs, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]);
            let k5 = f(x + C5 * hs, &y5);
            let y6 = combine(
                &y,
                hs,
                &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)],
            );
            let k6 = f(x + hs, &y6);
            let ynew = combine(
                &y,
                hs,
                &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)],
            );
            let k7 = f(x + hs, &ynew);

            let mut err = 0.0;
            for i in 0..N {
                let e = hs
                    * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
                let sc = self.atol + self.rtol * y[i].abs().max(ynew[i].abs());
                err += (e / sc) * (e / sc);
            }
            let err = (err / N as f64).sqrt();
            if !err.is_finite() || ynew.iter().any(|v| !v.is_finite()) {
                h *= 0.25;
                if h < 1e-14 * (1.0 + x.abs()) {
                    return Err(Error::IntegrationFailure(format!(
                        "non-finite state near x = {x}"
                    )));
                }
                continue;
            }

            let fac = if err == 0.0 {
                5.0
            } else {
                (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
            };
            if err <= 1.0 {
                x = if last { x1 } else { x + hs };
                y = ynew;
                k1 = k7;
                // a clipped final step says nothing about the natural step size
                if !last {
                    *step = h * fac;
                }
                h *= fac;
            } else {
                h *= fac.min(1.0);
            }
            if h < 1e-14 * (1.0 + x.abs()) {
                return Err(Error::IntegrationFailure(format!(
                    "step size underflow near x = {x}"
                )));
            }
            steps += 1;
            if steps > self.max_steps {
                return Err(Error::IntegrationFailure(format!(
                    "exceeded {} steps",
                    self.max_steps
                )));
            }
        }
        Ok(y)
    }
}

#[inline]
fn combine<const N: usize>(y: &[f64; N], h: f64, terms: &[(f64, &[f64; N])]) -> [f64; N] {
    let mut out = *y;
    for (a, k) in terms {
        for i in 0..N {
            out[i] += h * a * k[i];
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_decay() {
        let solver = Dopri5::new(1e-12, 1e-14);
        let mut h = 0.0;
        let y = solver
            .integrate(|_, y: &[f64; 1]| [-y[0]], 0.0, [1.0], 5.0, &mut h)
            .unwrap();
        assert!((y[0] - (-5.0f64).exp()).abs() < 1e-12);
    }

    #[test]
    fn harmonic_oscillator_backwards() {
        let solver = Dopri5::new(1e-12, 1e-14);
        let mut h = 0.0;
        let y = solver
            .integrate(
                |_, y: &[f64; 2]| [y[1], -y[0]],
                0.0,
                [1.0, 0.0],
                -3.0,
                &mut h,
            )
            .unwrap();
        assert!((y[0] - 3.0f64.cos()).abs() < 1e-10);
        assert!((y[1] - 3.0f64.sin()).abs() < 1e-10);
    }

    #[test]
    fn node_to_node_matches_single_sweep() {
        let solver = Dopri5::new(1e-11, 1e-13);
        let f = |x: f64, y: &[f64; 1]| [x.cos() * y[0]];
        let mut h = 0.0;
        let whole = solver.integrate(f, 0.0, [1.0], 2.0, &mut h).unwrap();
        let mut y = [1.0];
        let mut h = 0.0;
        for i in 0..20 {
            let a = i as f64 * 0.1;
            y = solver.integrate(f, a, y, a + 0.1, &mut h).unwrap();
        }
        let exact = 2.0f64.sin().exp();
        assert!((whole[0] - exact).abs() < 1e-9);
        assert!((y[0] - exact).abs() < 1e-9);
    }
}
