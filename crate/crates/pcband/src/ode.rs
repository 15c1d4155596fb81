//! Embedded Runge-Kutta 5(4) integrator (Dormand-Prince pair) with adaptive
//! step control, used for all monodromy and Floquet-solution integrations.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy)]
pub(crate) struct OdeOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_step: f64,
}

impl OdeOptions {
    pub fn with_tol(tol: f64) -> Self {
        Self {
            rel_tol: tol,
            abs_tol: tol,
            max_step: 1e-2,
        }
    }
}

impl Default for OdeOptions {
    fn default() -> Self {
        Self::with_tol(1e-10)
    }
}

const A2: [f64; 1] = [1.0 / 5.0];
const A3: [f64; 2] = [3.0 / 40.0, 9.0 / 40.0];
const A4: [f64; 3] = [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0];
const A5: [f64; 4] = [
    19372.0 / 6561.0,
    -25360.0 / 2187.0,
    64448.0 / 6561.0,
    -212.0 / 729.0,
];
const A6: [f64; 5] = [
    9017.0 / 3168.0,
    -355.0 / 33.0,
    46732.0 / 5247.0,
    49.0 / 176.0,
    -5103.0 / 18656.0,
];
const B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

fn axpy<const N: usize>(y: &[f64; N], h: f64, coeffs: &[f64], k: &[[f64; N]]) -> [f64; N] {
    let mut out = *y;
    for (c, ki) in coeffs.iter().zip(k) {
        for i in 0..N {
            out[i] += h * c * ki[i];
        }
    }
    out
}

/// One Dormand-Prince step from `(x, y)` with step `h`. Returns the 5th-order
/// solution and the scaled error norm of the embedded 4th-order difference.
fn dp_step<const N: usize>(
    f: &dyn Fn(f64, &[f64; N]) -> [f64; N],
    x: f64,
    y: &[f64; N],
    h: f64,
    opts: &OdeOptions,
) -> ([f64; N], f64) {
    let k1 = f(x, y);
    let k2 = f(x + h / 5.0, &axpy(y, h, &A2, &[k1]));
    let k3 = f(x + 3.0 * h / 10.0, &axpy(y, h, &A3, &[k1, k2]));
    let k4 = f(x + 4.0 * h / 5.0, &axpy(y, h, &A4, &[k1, k2, k3]));
    let k5 = f(x + 8.0 * h / 9.0, &axpy(y, h, &A5, &[k1, k2, k3, k4]));
    let k6 = f(x + h, &axpy(y, h, &A6, &[k1, k2, k3, k4, k5]));
    let ks = [k1, k2, k3, k4, k5, k6];
    let y5 = axpy(y, h, &B5[..6], &ks);
    let k7 = f(x + h, &y5);
    let all = [k1, k2, k3, k4, k5, k6, k7];
    let y4 = axpy(y, h, &B4, &all);

    let mut err_sq = 0.0;
    for i in 0..N {
        let scale = opts.abs_tol + opts.rel_tol * y[i].abs().max(y5[i].abs());
        let e = (y5[i] - y4[i]) / scale;
        err_sq += e * e;
    }
    (y5, (err_sq / N as f64).sqrt())
}

/// Integrates `y' = f(x, y)` from `x0` to `x1 >= x0`, returning `y(x1)`.
pub(crate) fn integrate<const N: usize>(
    f: &dyn Fn(f64, &[f64; N]) -> [f64; N],
    x0: f64,
    x1: f64,
    y0: [f64; N],
    opts: &OdeOptions,
) -> Result<[f64; N]> {
    let mut out = integrate_to_targets(f, x0, &[x1], y0, opts)?;
    Ok(out.pop().expect("one target requested"))
}

/// Integrates from `x0` recording the state at each target (ascending,
/// all `>= x0`). The integration is a single adaptive pass; steps are
/// clamped so every target is hit exactly.
pub(crate) fn integrate_to_targets<const N: usize>(
    f: &dyn Fn(f64, &[f64; N]) -> [f64; N],
    x0: f64,
    targets: &[f64],
    y0: [f64; N],
    opts: &OdeOptions,
) -> Result<Vec<[f64; N]>> {
    debug_assert!(targets.windows(2).all(|w| w[0] <= w[1]));
    let mut x = x0;
    let mut y = y0;
    let mut h = opts.max_step.min(1e-3);
    let mut out = Vec::with_capacity(targets.len());

    for &target in targets {
        debug_assert!(target >= x0);
        while x < target {
            let span = target - x;
            let trial = h.min(span).min(opts.max_step);
            if trial < 1e-14 * x.abs().max(1.0) {
                return Err(Error::StepUnderflow { x });
            }
            let (y_new, err) = dp_step(f, x, &y, trial, opts);
            if err <= 1.0 {
                x += trial;
                y = y_new;
                let grow = if err == 0.0 {
                    5.0
                } else {
                    (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
                };
                h = (trial * grow).min(opts.max_step);
            } else {
                h = trial * (0.9 * err.powf(-0.2)).clamp(0.1, 0.9);
            }
        }
        out.push(y);
    }
    Ok(out)
}
