//! Adaptive Simpson quadrature over a partition of breakpoints.

use crate::error::{Error, Result};

/// Value of a definite integral together with its estimated absolute error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub abs_error: f64,
}

struct Panel {
    value: f64,
    error: f64,
    converged: bool,
}

/// Integrates `f` over `[breakpoints[0], breakpoints[last]]`, running an
/// independent adaptive Simpson recursion on every sub-panel.
///
/// The absolute tolerance is split evenly across panels and halved at each
/// bisection. A panel that still misses its tolerance after `max_depth`
/// bisections makes the whole call fail with [`Error::Quadrature`].
pub fn adaptive_simpson<F>(f: F, breakpoints: &[f64], abs_tol: f64, max_depth: u32) -> Result<Integral>
where
    F: Fn(f64) -> f64,
{
    if breakpoints.len() < 2 {
        return Err(Error::Validation("quadrature needs at least two breakpoints".into()));
    }
    if !(abs_tol > 0.0) {
        return Err(Error::Validation(format!("quadrature tolerance must be positive, got {abs_tol}")));
    }
    let panels = breakpoints.len() - 1;
    let eps = abs_tol / panels as f64;

    let mut value = 0.0;
    let mut error = 0.0;
    let mut converged = true;
    for w in breakpoints.windows(2) {
        let (a, b) = (w[0], w[1]);
        if b <= a {
            continue;
        }
        let fa = f(a);
        let fb = f(b);
        let m = 0.5 * (a + b);
        let fm = f(m);
        let whole = simpson(a, b, fa, fm, fb);
        let panel = recurse(&f, a, b, fa, fm, fb, whole, eps, max_depth);
        value += panel.value;
        error += panel.error;
        converged &= panel.converged;
    }

    if !converged && error > abs_tol {
        return Err(Error::Quadrature { value, estimate: error, tolerance: abs_tol });
    }
    Ok(Integral { value, abs_error: error })
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn recurse<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    eps: f64,
    depth: u32,
) -> Panel {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    // interval no longer splittable in floating point
    if !(a < lm && lm < m && m < rm && rm < b) {
        return Panel { value: whole, error: 0.0, converged: true };
    }
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;

    if delta.abs() <= 15.0 * eps || delta.abs() <= 1e-15 * (left + right).abs() {
        return Panel { value: left + right + delta / 15.0, error: delta.abs() / 15.0, converged: true };
    }
    if depth == 0 {
        return Panel { value: left + right + delta / 15.0, error: delta.abs() / 15.0, converged: false };
    }
    let l = recurse(f, a, m, fa, flm, fm, left, 0.5 * eps, depth - 1);
    let r = recurse(f, m, b, fm, frm, fb, right, 0.5 * eps, depth - 1);
    Panel { value: l.value + r.value, error: l.error + r.error, converged: l.converged && r.converged }
}
