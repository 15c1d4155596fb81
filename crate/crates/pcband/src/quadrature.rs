//! Adaptive Simpson quadrature with an absolute error budget, plus a
//! cumulative-integral table for monotone antiderivatives.

fn simpson(fa: f64, fm: f64, fb: f64, h: f64) -> f64 {
    h / 6.0 * (fa + 4.0 * fm + fb)
}

// The argument list carries the cached endpoint/midpoint evaluations down
// the recursion; bundling them into a struct would only obscure that.
#[allow(clippy::too_many_arguments)]
fn adaptive_rec(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(fa, flm, fm, m - a);
    let right = simpson(fm, frm, fb, b - m);
    let refined = left + right;
    if depth == 0 || (refined - whole).abs() <= 15.0 * tol {
        // Richardson extrapolation: Simpson halving gains a factor 16.
        return refined + (refined - whole) / 15.0;
    }
    adaptive_rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
        + adaptive_rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
}

/// Integrates `f` over `[a, b]` to absolute accuracy about `abs_tol`.
pub(crate) fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, abs_tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let whole = simpson(fa, fm, fb, b - a);
    adaptive_rec(f, a, b, fa, fm, fb, whole, abs_tol, 40)
}

/// Precomputed cumulative integral of a positive integrand over `[0, len]`,
/// supporting evaluation at arbitrary points and monotone inversion.
pub(crate) struct CumulativeIntegral {
    nodes: Vec<f64>,
    cumsum: Vec<f64>,
    panel_tol: f64,
}

impl CumulativeIntegral {
    pub fn new(f: &dyn Fn(f64) -> f64, len: f64, panels: usize, abs_tol: f64) -> Self {
        let panel_tol = abs_tol / panels as f64;
        let mut nodes = Vec::with_capacity(panels + 1);
        let mut cumsum = Vec::with_capacity(panels + 1);
        let mut acc = 0.0;
        nodes.push(0.0);
        cumsum.push(0.0);
        for i in 1..=panels {
            let a = len * (i - 1) as f64 / panels as f64;
            let b = len * i as f64 / panels as f64;
            acc += adaptive_simpson(f, a, b, panel_tol);
            nodes.push(b);
            cumsum.push(acc);
        }
        Self {
            nodes,
            cumsum,
            panel_tol,
        }
    }

    pub fn total(&self) -> f64 {
        *self.cumsum.last().unwrap()
    }

    /// The cumulative integral from 0 to `x` (for `x` within `[0, len]`).
    pub fn eval(&self, f: &dyn Fn(f64) -> f64, x: f64) -> f64 {
        let i = match self
            .nodes
            .binary_search_by(|n| n.partial_cmp(&x).unwrap())
        {
            Ok(i) => return self.cumsum[i],
            Err(i) => i.saturating_sub(1).min(self.nodes.len() - 2),
        };
        self.cumsum[i] + adaptive_simpson(f, self.nodes[i], x, self.panel_tol)
    }

    /// Inverts the cumulative integral: the `x` with `eval(x) = target`.
    /// Requires a strictly positive integrand.
    pub fn invert(&self, f: &dyn Fn(f64) -> f64, target: f64) -> f64 {
        let total = self.total();
        let t = target.clamp(0.0, total);
        let mut i = match self
            .cumsum
            .binary_search_by(|c| c.partial_cmp(&t).unwrap())
        {
            Ok(i) => return self.nodes[i],
            Err(i) => i.saturating_sub(1),
        };
        i = i.min(self.nodes.len() - 2);
        let (mut lo, mut hi) = (self.nodes[i], self.nodes[i + 1]);
        let (mut flo, mut fhi) = (self.cumsum[i] - t, self.cumsum[i + 1] - t);
        // Bisection with a secant bias; the map is strictly increasing.
        for _ in 0..200 {
            if hi - lo < 1e-14 * (1.0 + hi.abs()) {
                break;
            }
            let mut mid = if fhi > flo {
                lo + (hi - lo) * (-flo) / (fhi - flo)
            } else {
                0.5 * (lo + hi)
            };
            let third = (hi - lo) / 3.0;
            mid = mid.clamp(lo + third * 1e-3, hi - third * 1e-3);
            let fm = self.eval(f, mid) - t;
            if fm >= 0.0 {
                hi = mid;
                fhi = fm;
            } else {
                lo = mid;
                flo = fm;
            }
        }
        0.5 * (lo + hi)
    }
}
