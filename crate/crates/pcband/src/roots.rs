//! Bracketed scalar root finding (Brent's method).

use crate::error::{Error, Result};

/// Finds a root of `f` in `[a, b]` given `f(a)` and `f(b)` with opposite
/// signs, to absolute accuracy `xtol`. Inverse quadratic interpolation and
/// secant steps, falling back to bisection; never leaves the bracket.
pub(crate) fn brent(
    f: &mut dyn FnMut(f64) -> f64,
    a0: f64,
    b0: f64,
    fa0: f64,
    fb0: f64,
    xtol: f64,
) -> Result<f64> {
    if fa0 == 0.0 {
        return Ok(a0);
    }
    if fb0 == 0.0 {
        return Ok(b0);
    }
    if fa0.signum() == fb0.signum() {
        return Err(Error::BracketExhausted { lo: a0, hi: b0 });
    }
    let (mut a, mut b, mut fa, mut fb) = (a0, b0, fa0, fb0);
    let (mut c, mut fc) = (a, fa);
    let (mut d, mut e) = (b - a, b - a);

    for _ in 0..200 {
        if fb.abs() > fc.abs() {
            // b is the best estimate; ensure |f(b)| <= |f(c)|.
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * xtol;
        let xm = 0.5 * (c - b);
        if xm.abs() <= tol1 || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q) = if a == c {
                (2.0 * xm * s, 1.0 - s)
            } else {
                let q = fa / fc;
                let r = fb / fc;
                (
                    s * (2.0 * xm * q * (q - r) - (b - a) * (r - 1.0)),
                    (q - 1.0) * (r - 1.0) * (s - 1.0),
                )
            };
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            let min1 = 3.0 * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if 2.0 * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol1 {
            d
        } else {
            tol1.copysign(xm)
        };
        fb = f(b);
        if (fb > 0.0) == (fc > 0.0) {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
    }
    Ok(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_simple_roots() {
        let mut f = |x: f64| x * x - 2.0;
        let r = brent(&mut f, 0.0, 2.0, -2.0, 2.0, 1e-14).unwrap();
        assert!((r - 2.0f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn rejects_unbracketed() {
        let mut f = |x: f64| x * x + 1.0;
        assert!(brent(&mut f, -1.0, 1.0, 2.0, 2.0, 1e-12).is_err());
    }

    #[test]
    fn handles_steep_and_flat_sides() {
        let mut f = |x: f64| (x - 0.1).powi(3) * 1e6 + (x - 0.1) * 1e-3;
        let fa = f(-1.0);
        let fb = f(1.0);
        let r = brent(&mut f, -1.0, 1.0, fa, fb, 1e-13).unwrap();
        assert!((r - 0.1).abs() < 1e-9);
    }
}
