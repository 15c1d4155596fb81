//! The change of variables that maps the weighted problem
//! `E'' + lambda u E = 0` to a constant-weight one.
//!
//! With `xi(x) = int_0^x sqrt(u)`, inverse `z`, and
//! `F(y) = u(z(y))^(1/4) E(z(y))`, the transformed equation is
//! `F'' + lambda F + theta(z(y)) F = 0` on `[0, A]`, where
//! `A = int_0^1 sqrt(u)` and
//!
//! ```text
//! theta = 5 u'^2 / (16 u^3) - u'' / (4 u^2)
//! ```
//!
//! The whole high-frequency analysis rests on two numbers this module
//! certifies: the transformed period `A` and `sup |theta|`. Floquet
//! eigenvalues of the weighted problem differ from the free eigenvalues
//! `((alpha + 2 pi k) / A)^2` by at most `sup |theta|`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hill1d::{self, HillProblem};
use crate::ode::{self, OdeOptions};
use crate::profiles::{shift_profile, TrigPolynomial1D};
use crate::quadrature::CumulativeIntegral;

/// Absolute quadrature budget for `xi` and `A`.
const XI_TOL: f64 = 1e-10;
/// Panels for the cumulative `xi` table.
const XI_PANELS: usize = 256;
/// Sample count for the certified `sup |theta|`. The certification margin
/// is `Lip(theta) / (2 THETA_GRID)`, so this keeps the slack below 1e-2
/// even for weights with derivative sums of several hundred.
const THETA_GRID: usize = 1 << 17;

/// The transformed problem data for a (possibly shifted) weight `u + c`.
pub struct LiouvilleData {
    weight: TrigPolynomial1D,
    table: CumulativeIntegral,
    /// Transformed period `A = int_0^1 sqrt(u + c)`.
    pub a: f64,
    /// Certified bound for `sup |theta|` (sampled sup plus harmonic margin).
    pub theta_sup: f64,
}

impl LiouvilleData {
    /// `xi(x) = int_0^x sqrt(u)`, the new independent variable.
    pub fn xi(&self, x: f64) -> f64 {
        let w = self.weight.clone();
        self.table.eval(&move |t| w.eval(t, 0).sqrt(), x)
    }

    /// The inverse map: `z(y)` with `xi(z(y)) = y`, for `y` in `[0, A]`.
    pub fn z(&self, y: f64) -> f64 {
        let w = self.weight.clone();
        self.table.invert(&move |t| w.eval(t, 0).sqrt(), y)
    }

    /// `theta` as a function of the original variable `x`.
    pub fn theta_at_x(&self, x: f64) -> f64 {
        theta_value(&self.weight, x)
    }

    /// `theta(z(y))`: the potential of the transformed equation.
    pub fn theta_at_y(&self, y: f64) -> f64 {
        self.theta_at_x(self.z(y))
    }

    /// The (shifted) weight the data was built from.
    pub fn weight(&self) -> &TrigPolynomial1D {
        &self.weight
    }

    /// Uniform samples `(x, xi(x), theta(x))` for plotting or CSV dumps.
    pub fn samples(&self, n: usize) -> Vec<(f64, f64, f64)> {
        (0..n)
            .map(|i| {
                let x = i as f64 / (n.max(2) - 1) as f64;
                (x, self.xi(x), self.theta_at_x(x))
            })
            .collect()
    }
}

fn theta_value(w: &TrigPolynomial1D, x: f64) -> f64 {
    let u = w.eval(x, 0);
    let u1 = w.eval(x, 1);
    let u2 = w.eval(x, 2);
    5.0 * u1 * u1 / (16.0 * u * u * u) - u2 / (4.0 * u * u)
}

/// Certified bound for `sup |theta|` of a weight, without building the
/// quadrature table: dense sampling plus a margin from an explicit Lipschitz
/// bound of `theta`.
pub(crate) fn theta_sup_of(w: &TrigPolynomial1D) -> f64 {
    if w.is_constant() {
        return 0.0;
    }
    let m = w.certified_min();
    let s1 = w.coeff_sum_bound(1);
    let s2 = w.coeff_sum_bound(2);
    let s3 = w.coeff_sum_bound(3);
    // |theta'| <= 10 s1 s2 / (16 m^3) + 15 s1^3 / (16 m^4)
    //           + s3 / (4 m^2) + s1 s2 / (2 m^3)
    let lipschitz = 10.0 * s1 * s2 / (16.0 * m.powi(3))
        + 15.0 * s1.powi(3) / (16.0 * m.powi(4))
        + s3 / (4.0 * m * m)
        + s1 * s2 / (2.0 * m.powi(3));
    let h = 1.0 / THETA_GRID as f64;
    let mut sup = 0.0f64;
    for i in 0..THETA_GRID {
        sup = sup.max(theta_value(w, i as f64 * h).abs());
    }
    sup + 0.5 * lipschitz * h
}

/// Builds the transformation data for the shifted weight `u + c`.
/// Errors when the shift destroys strict positivity.
pub fn build_liouville(u: &TrigPolynomial1D, c: f64) -> Result<LiouvilleData> {
    let weight = shift_profile(u, c)?;
    let w = weight.clone();
    let table = CumulativeIntegral::new(&move |t| w.eval(t, 0).sqrt(), 1.0, XI_PANELS, XI_TOL);
    let a = table.total();
    let theta_sup = theta_sup_of(&weight);
    Ok(LiouvilleData {
        weight,
        table,
        a,
        theta_sup,
    })
}

/// Solves `E'' + lambda u E = 0` from a fixed initial condition, pushes the
/// solution through the transformation, and returns the worst residual of
/// the transformed equation `F'' + lambda F + theta F = 0` on a uniform
/// `y`-grid with `grid_points` nodes. The second derivative is taken by
/// five-point finite differences, so the residual is an end-to-end check of
/// the quadrature, the inversion, and the integrator at once.
pub fn transform_residual(
    u: &TrigPolynomial1D,
    lambda: f64,
    grid_points: usize,
) -> Result<f64> {
    if grid_points < 16 {
        return Err(Error::Precondition(
            "transform_residual needs at least 16 grid points".into(),
        ));
    }
    let data = build_liouville(u, 0.0)?;
    let n = grid_points;
    let h = data.a / (n - 1) as f64;
    let ys: Vec<f64> = (0..n).map(|j| j as f64 * h).collect();
    let xs: Vec<f64> = ys.iter().map(|&y| data.z(y)).collect();

    let w = data.weight().clone();
    let rhs = move |x: f64, s: &[f64; 2]| [s[1], -lambda * w.eval(x, 0) * s[0]];
    let states = ode::integrate_to_targets(&rhs, 0.0, &xs, [1.0, 0.7], &OdeOptions::with_tol(1e-12))?;

    let f_vals: Vec<f64> = xs
        .iter()
        .zip(&states)
        .map(|(&x, s)| data.weight().eval(x, 0).powf(0.25) * s[0])
        .collect();

    let mut worst = 0.0f64;
    for j in 2..n - 2 {
        let d2 = (-f_vals[j - 2] + 16.0 * f_vals[j - 1] - 30.0 * f_vals[j]
            + 16.0 * f_vals[j + 1]
            - f_vals[j + 2])
            / (12.0 * h * h);
        let residual = d2 + lambda * f_vals[j] + data.theta_at_x(xs[j]) * f_vals[j];
        worst = worst.max(residual.abs());
    }
    Ok(worst)
}

/// One row of the eigenvalue comparison: the computed Floquet eigenvalue
/// against its free counterpart `((alpha + 2 pi k)/A)^2`.
#[derive(Debug, Clone, Serialize)]
pub struct ComparisonRow {
    pub n: usize,
    pub alpha: f64,
    pub lambda: f64,
    pub lambda_star: f64,
    pub diff: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ComparisonReport {
    pub a: f64,
    pub theta_sup: f64,
    pub rows: Vec<ComparisonRow>,
    /// `max (|lambda_n - lambda_n*| - theta_sup)`; at most zero (up to solver
    /// tolerance) when the comparison bound holds.
    pub max_violation: f64,
}

/// Sorted free eigenvalues `((alpha + 2 pi k)/A)^2`, `k` over the integers.
pub fn free_eigenvalues(a: f64, alpha: f64, n_max: usize) -> Vec<f64> {
    let range = n_max as i64 + 2;
    let mut vals: Vec<f64> = (-range..=range)
        .map(|k| {
            let v = (alpha + 2.0 * std::f64::consts::PI * k as f64) / a;
            v * v
        })
        .collect();
    vals.sort_by(|p, q| p.partial_cmp(q).unwrap());
    vals.truncate(n_max);
    vals
}

/// Compares the first `n_max` Floquet eigenvalues of the weighted problem
/// against the free eigenvalues of the transformed period, for each alpha.
/// The comparison bound says every `diff` is at most `sup |theta|`.
pub fn comparison_check(
    u: &TrigPolynomial1D,
    n_max: usize,
    alpha_set: &[f64],
) -> Result<ComparisonReport> {
    let data = build_liouville(u, 0.0)?;
    let hp = HillProblem::from_weight(u.clone())?;
    // Eigenvalues reach a few thousand by n = 20, so the solver tolerance
    // must sit well below the 1e-6 slack granted to the bound.
    let computed = hill1d::floquet_eigenvalues_upto(&hp, n_max, alpha_set, 1e-10)?;

    let mut rows = Vec::new();
    let mut max_violation = f64::NEG_INFINITY;
    for (ai, &alpha) in alpha_set.iter().enumerate() {
        let folded = hill1d::fold_alpha(alpha);
        let stars = free_eigenvalues(data.a, folded, n_max);
        for n in 1..=n_max {
            let lambda = computed[ai][n - 1];
            let lambda_star = stars[n - 1];
            let diff = (lambda - lambda_star).abs();
            max_violation = max_violation.max(diff - data.theta_sup);
            rows.push(ComparisonRow {
                n,
                alpha: folded,
                lambda,
                lambda_star,
                diff,
            });
        }
    }
    Ok(ComparisonReport {
        a: data.a,
        theta_sup: data.theta_sup,
        rows,
        max_violation,
    })
}
