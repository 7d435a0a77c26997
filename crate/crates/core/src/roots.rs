//! Bracketed scalar root finding.

/// Result of a bracketed root search.
#[derive(Debug, Clone, Copy)]
pub struct Bracketed {
    pub root: f64,
    pub lo: f64,
    pub hi: f64,
    pub iterations: usize,
}

/// Bisection on `[a, b]` where `f(a)` and `f(b)` have opposite signs,
/// followed by a single secant polish inside the final bracket.
///
/// Returns `None` when the endpoints do not bracket a sign change.
pub fn bisect<F>(mut f: F, a: f64, b: f64, xtol: f64, max_iter: usize) -> Option<Bracketed>
where
    F: FnMut(f64) -> f64,
{
    let (mut lo, mut hi) = (a.min(b), a.max(b));
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Some(Bracketed { root: lo, lo, hi: lo, iterations: 0 });
    }
    if fhi == 0.0 {
        return Some(Bracketed { root: hi, lo: hi, hi, iterations: 0 });
    }
    if flo.signum() == fhi.signum() || !flo.is_finite() || !fhi.is_finite() {
        return None;
    }
    let mut fh = fhi;
    let mut iterations = 0;
    while hi - lo > xtol && iterations < max_iter {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        iterations += 1;
        if fm == 0.0 {
            return Some(Bracketed { root: mid, lo: mid, hi: mid, iterations });
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
            fh = fm;
        }
    }
    // secant step, kept only if it stays inside the bracket
    let secant = lo - flo * (hi - lo) / (fh - flo);
    let root = if secant.is_finite() && secant >= lo && secant <= hi {
        secant
    } else {
        0.5 * (lo + hi)
    };
    Some(Bracketed { root, lo, hi, iterations })
}
