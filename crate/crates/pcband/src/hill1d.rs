//! Weighted Hill problems on the line:
//!
//! ```text
//! E'' + lambda u(x) E + rho(x) E = 0,    u, rho periodic, u > 0
//! ```
//!
//! A number `lambda` belongs to the spectrum exactly when the equation has a
//! bounded solution, which happens iff the discriminant (the trace of the
//! monodromy matrix over one period) lies in `[-2, 2]`. Floquet eigenvalues
//! `lambda_n(alpha)` solve `Delta(lambda) = 2 cos(alpha)`; sweeping `alpha`
//! over `[0, pi]` traces out the n-th spectral band.
//!
//! The solver works directly on the discriminant. The key structural facts:
//! `Delta` is strictly monotone between consecutive zeros of its derivative,
//! those zeros live one per spectral gap (tangent to `+-2` when neighboring
//! bands touch), and the comparison bound from the transformed period `A`
//! confines gap `k` to a computable window around `(pi k / A)^2`. The scan
//! locates the critical points, validates the alternating band layout, and
//! refines each eigenvalue by bracketed root finding on a single monotone
//! segment. Every query is cross-checkable against the independent
//! finite-difference eigensolver [`fd_floquet_eigs`].

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::liouville::theta_sup_of;
use crate::ode::{self, OdeOptions};
use crate::profiles::TrigPolynomial1D;
use crate::quadrature::adaptive_simpson;
use crate::roots::brent;

/// `|Delta(zeta) -+ 2|` below this is treated as touching bands: the shared
/// critical value is reported for both band indices.
const TANGENCY_TOL: f64 = 1e-7;
/// Initial scan resolution in band-counter units (`s = A sqrt(lambda) / pi`
/// advances by one per band).
const SCAN_STEP: f64 = 1.0 / 16.0;
/// Default tolerance for one-off discriminant evaluations.
const DEFAULT_ODE_TOL: f64 = 1e-10;

// ============================================================================
// Problem definition
// ============================================================================

/// Zeroth-order coefficient `rho` as a sampled-function handle with a known
/// sup bound.
#[derive(Clone)]
pub struct Potential {
    f: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    sup_abs: f64,
}

impl Potential {
    pub fn new(f: impl Fn(f64) -> f64 + Send + Sync + 'static, sup_abs: f64) -> Self {
        Self {
            f: Arc::new(f),
            sup_abs,
        }
    }
}

/// One period of `E'' + lambda u E + rho E = 0`.
///
/// Non-constant weights carry their natural period 1; a constant weight may
/// live on any period (the transformed problems produced by the Liouville
/// map have weight 1 on `[0, A]`).
#[derive(Clone)]
pub struct HillProblem {
    weight: TrigPolynomial1D,
    period: f64,
    potential: Option<Potential>,
}

impl HillProblem {
    /// Weighted problem `E'' + lambda u E = 0` with period 1.
    pub fn from_weight(weight: TrigPolynomial1D) -> Result<Self> {
        Ok(Self {
            weight,
            period: 1.0,
            potential: None,
        })
    }

    /// General problem. `sup_abs` must dominate `sup |rho|`; the weight must
    /// be constant whenever `period != 1`.
    pub fn with_potential(
        weight: TrigPolynomial1D,
        period: f64,
        rho: impl Fn(f64) -> f64 + Send + Sync + 'static,
        sup_abs: f64,
    ) -> Result<Self> {
        if !(period > 0.0) {
            return Err(Error::Precondition("period must be positive".into()));
        }
        if !weight.is_constant() && period != 1.0 {
            return Err(Error::Precondition(
                "non-constant weights have period 1".into(),
            ));
        }
        if !(sup_abs >= 0.0) {
            return Err(Error::Precondition("sup_abs must be nonnegative".into()));
        }
        Ok(Self {
            weight,
            period,
            potential: Some(Potential::new(rho, sup_abs)),
        })
    }

    pub fn weight(&self) -> &TrigPolynomial1D {
        &self.weight
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    pub fn potential_at(&self, x: f64) -> f64 {
        self.potential.as_ref().map_or(0.0, |p| (p.f)(x))
    }

    pub fn potential_sup(&self) -> f64 {
        self.potential.as_ref().map_or(0.0, |p| p.sup_abs)
    }

    /// Transformed period `A = int_0^period sqrt(u)`.
    pub fn transformed_period(&self) -> f64 {
        let w = self.weight.clone();
        adaptive_simpson(&move |x| w.eval(x, 0).sqrt(), 0.0, self.period, 1e-10)
    }

    /// Bound for the sup of the transformed potential
    /// `theta + rho(z)/u(z)`: the comparison distance between this problem's
    /// Floquet eigenvalues and the free ones of period `A`.
    pub fn comparison_bound(&self) -> f64 {
        theta_sup_of(&self.weight) + self.potential_sup() / self.weight.certified_min()
    }

    /// A lower bound for the whole spectrum, from the variational principle.
    fn spectrum_floor(&self) -> f64 {
        -self.potential_sup() / self.weight.certified_min() - 1.0
    }
}

/// Folds any real quasimomentum into `[0, pi]`; the discriminant equation
/// only sees `cos(alpha)`.
pub fn fold_alpha(alpha: f64) -> f64 {
    let a = alpha.rem_euclid(2.0 * PI);
    a.min(2.0 * PI - a)
}

// ============================================================================
// Monodromy and discriminant
// ============================================================================

/// The transfer matrix of the fundamental system over one period.
#[derive(Debug, Clone, Copy)]
pub struct MonodromyMatrix {
    pub entries: [[f64; 2]; 2],
}

impl MonodromyMatrix {
    pub fn det(&self) -> f64 {
        let m = &self.entries;
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    pub fn trace(&self) -> f64 {
        self.entries[0][0] + self.entries[1][1]
    }
}

/// Integrates the two fundamental solutions (`E(0), E'(0)` equal to `(1,0)`
/// and `(0,1)`) across one period. The Wronskian identity `det = 1` is
/// enforced to within `1e3 * tol`.
pub fn monodromy(hp: &HillProblem, lambda: f64, tol: f64) -> Result<MonodromyMatrix> {
    let w = hp.weight.clone();
    let pot = hp.potential.clone();
    let q = move |x: f64| lambda * w.eval(x, 0) + pot.as_ref().map_or(0.0, |p| (p.f)(x));
    let rhs = move |x: f64, y: &[f64; 4]| {
        let qv = q(x);
        [y[1], -qv * y[0], y[3], -qv * y[2]]
    };
    let y = ode::integrate(
        &rhs,
        0.0,
        hp.period,
        [1.0, 0.0, 0.0, 1.0],
        &OdeOptions::with_tol(tol),
    )?;
    let m = MonodromyMatrix {
        entries: [[y[0], y[2]], [y[1], y[3]]],
    };
    if (m.det() - 1.0).abs() > 1e3 * tol {
        return Err(Error::AccuracyLoss(format!(
            "monodromy Wronskian drifted: |det - 1| = {:.3e} at lambda = {lambda}",
            (m.det() - 1.0).abs()
        )));
    }
    Ok(m)
}

/// `(Delta, dDelta/dlambda)` in one pass: the eight-dimensional system
/// augments the fundamental solutions with their lambda-derivatives,
/// `Z'' = -q Z - u E`.
fn discriminant_with_derivative(hp: &HillProblem, lambda: f64, tol: f64) -> Result<(f64, f64)> {
    let w = hp.weight.clone();
    let pot = hp.potential.clone();
    let rhs = move |x: f64, y: &[f64; 8]| {
        let uv = w.eval(x, 0);
        let qv = lambda * uv + pot.as_ref().map_or(0.0, |p| (p.f)(x));
        [
            y[1],
            -qv * y[0],
            y[3],
            -qv * y[2],
            y[5],
            -qv * y[4] - uv * y[0],
            y[7],
            -qv * y[6] - uv * y[2],
        ]
    };
    let y = ode::integrate(
        &rhs,
        0.0,
        hp.period,
        [1.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0],
        &OdeOptions::with_tol(tol),
    )?;
    Ok((y[0] + y[3], y[4] + y[7]))
}

/// The Hill discriminant `Delta(lambda) = tr M(lambda)`.
pub fn discriminant(hp: &HillProblem, lambda: f64) -> Result<f64> {
    Ok(monodromy(hp, lambda, DEFAULT_ODE_TOL)?.trace())
}

// ============================================================================
// Critical-point scan
// ============================================================================

/// Critical points `zeta_1 < zeta_2 < ...` of the discriminant, one per
/// spectral gap. Segment `n = [zeta_{n-1}, zeta_n]` (with `zeta_0` the
/// spectrum floor) carries exactly the n-th band, and the discriminant is
/// strictly monotone on it.
struct SegmentTable {
    floor: f64,
    zetas: Vec<f64>,
    delta_at: Vec<f64>,
    ode_tol: f64,
}

impl SegmentTable {
    fn segment(&self, n: usize) -> (f64, f64) {
        let lo = if n == 1 { self.floor } else { self.zetas[n - 2] };
        (lo, self.zetas[n - 1])
    }

    fn delta_left(&self, n: usize) -> f64 {
        if n == 1 {
            // Validated > 2 during construction; any finite stand-in above 2
            // suffices for sign checks.
            3.0
        } else {
            self.delta_at[n - 2]
        }
    }
}

fn build_segments(hp: &HillProblem, n_needed: usize, ode_tol: f64) -> Result<SegmentTable> {
    let a = hp.transformed_period();
    let k_bound = hp.comparison_bound();

    let mut floor = hp.spectrum_floor();
    let mut delta_floor = discriminant_with_derivative(hp, floor, ode_tol)?.0;
    for _ in 0..16 {
        if delta_floor > 2.1 {
            break;
        }
        floor = 2.0 * floor - 1.0;
        delta_floor = discriminant_with_derivative(hp, floor, ode_tol)?.0;
    }
    if delta_floor <= 2.1 {
        return Err(Error::ScanFailed {
            lo: floor,
            hi: 0.0,
            detail: "could not establish a point below the spectrum".into(),
        });
    }

    let q = (k_bound + 2.0) * a * a / (PI * PI);
    let s_end = ((n_needed as f64).powi(2) + q).sqrt() + 0.25;
    let lambda_of_s = |s: f64| (PI * s / a).powi(2);

    let mut step = SCAN_STEP;
    let mut last_err = String::new();
    for _attempt in 0..3 {
        // Ladder of scan points: a short stretch through the negative range,
        // then uniform in the band counter s.
        let mut ladder = Vec::new();
        for i in 0..8 {
            ladder.push(floor + (0.0 - floor) * i as f64 / 8.0);
        }
        let mut s = step;
        while s <= s_end {
            ladder.push(lambda_of_s(s));
            s += step;
        }

        let evals: Result<Vec<(f64, f64)>> = ladder
            .par_iter()
            .map(|&lam| discriminant_with_derivative(hp, lam, ode_tol))
            .collect();
        let evals = evals?;

        let mut zetas = Vec::new();
        let mut delta_at = Vec::new();
        let mut failure = None;
        for i in 0..ladder.len() - 1 {
            let (_, dp_lo) = evals[i];
            let (_, dp_hi) = evals[i + 1];
            if dp_lo == 0.0 || dp_lo.signum() == dp_hi.signum() {
                continue;
            }
            let mut f = |lam: f64| {
                discriminant_with_derivative(hp, lam, ode_tol)
                    .map(|(_, d)| d)
                    .unwrap_or(f64::NAN)
            };
            let xtol = 1e-10 * (1.0 + ladder[i + 1].abs());
            let zeta = brent(&mut f, ladder[i], ladder[i + 1], dp_lo, dp_hi, xtol)?;
            let (delta, _) = discriminant_with_derivative(hp, zeta, ode_tol)?;
            zetas.push(zeta);
            delta_at.push(delta);
        }

        // Validation: the layout must alternate (gap k sits beyond -2 for
        // odd k, beyond +2 for even k) and the discriminant slope must not
        // flip inside a segment; either symptom means the ladder stepped
        // over a pair of critical points.
        if zetas.len() < n_needed {
            failure = Some(format!(
                "found {} critical points, need {n_needed}",
                zetas.len()
            ));
        }
        if failure.is_none() {
            for (k, &d) in delta_at.iter().enumerate() {
                let ok = if k % 2 == 0 {
                    d <= -2.0 + TANGENCY_TOL
                } else {
                    d >= 2.0 - TANGENCY_TOL
                };
                if !ok {
                    failure = Some(format!(
                        "gap {} has discriminant {d:.6} on the wrong side",
                        k + 1
                    ));
                    break;
                }
            }
        }
        if failure.is_none() {
            'outer: for seg in 0..zetas.len() {
                let lo = if seg == 0 { floor } else { zetas[seg - 1] };
                let hi = zetas[seg];
                let mut sign = 0.0f64;
                for (i, &lam) in ladder.iter().enumerate() {
                    if lam <= lo || lam >= hi {
                        continue;
                    }
                    let dp = evals[i].1;
                    if dp == 0.0 {
                        continue;
                    }
                    if sign == 0.0 {
                        sign = dp.signum();
                    } else if dp.signum() != sign {
                        failure = Some(format!(
                            "slope flips inside segment {}: missed critical points",
                            seg + 1
                        ));
                        break 'outer;
                    }
                }
            }
        }

        match failure {
            None => {
                zetas.truncate(n_needed.max(zetas.len().min(n_needed)));
                delta_at.truncate(zetas.len());
                return Ok(SegmentTable {
                    floor,
                    zetas,
                    delta_at,
                    ode_tol,
                });
            }
            Some(msg) => {
                last_err = msg;
                step /= 4.0;
            }
        }
    }
    Err(Error::ScanFailed {
        lo: floor,
        hi: lambda_of_s(s_end),
        detail: last_err,
    })
}

/// The unique solution of `Delta = t` on the n-th monotone segment.
fn eigenvalue_in_segment(
    hp: &HillProblem,
    table: &SegmentTable,
    n: usize,
    t: f64,
    tol: f64,
) -> Result<f64> {
    let (lo, hi) = table.segment(n);
    let f_lo = table.delta_left(n) - t;
    let f_hi = table.delta_at[n - 1] - t;
    if f_lo.abs() <= TANGENCY_TOL {
        return Ok(lo);
    }
    if f_hi.abs() <= TANGENCY_TOL {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::BracketExhausted { lo, hi });
    }
    let mut f = |lam: f64| {
        monodromy(hp, lam, table.ode_tol)
            .map(|m| m.trace() - t)
            .unwrap_or(f64::NAN)
    };
    let xtol = tol.max(1e-13 * (1.0 + hi.abs()));
    brent(&mut f, lo, hi, f_lo, f_hi, xtol)
}

// ============================================================================
// Floquet eigenvalues, bands, gaps
// ============================================================================

/// The n-th Floquet eigenvalue (1-based, ascending) for quasimomentum
/// `alpha`, with absolute accuracy about `tol`.
pub fn floquet_eigenvalue(hp: &HillProblem, n: usize, alpha: f64, tol: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::Precondition("band index n is 1-based".into()));
    }
    let table = build_segments(hp, n, scan_tol(tol))?;
    eigenvalue_in_segment(hp, &table, n, 2.0 * fold_alpha(alpha).cos(), tol)
}

fn scan_tol(tol: f64) -> f64 {
    (tol * 1e-2).clamp(1e-13, DEFAULT_ODE_TOL)
}

/// All eigenvalues `lambda_n(alpha)` for `n <= n_max` and each alpha in the
/// set, sharing one critical-point scan. Indexed `[alpha][n-1]`.
pub fn floquet_eigenvalues_upto(
    hp: &HillProblem,
    n_max: usize,
    alphas: &[f64],
    tol: f64,
) -> Result<Vec<Vec<f64>>> {
    if n_max == 0 {
        return Err(Error::Precondition("n_max must be at least 1".into()));
    }
    let table = build_segments(hp, n_max, scan_tol(tol))?;
    alphas
        .par_iter()
        .map(|&alpha| {
            let t = 2.0 * fold_alpha(alpha).cos();
            (1..=n_max)
                .map(|n| eigenvalue_in_segment(hp, &table, n, t, tol))
                .collect::<Result<Vec<f64>>>()
        })
        .collect()
}

/// One spectral band: `lambda_n` over `alpha` in `[0, pi]` spans `[lo, hi]`,
/// the edges attained at `alpha_lo`, `alpha_hi` (0 or pi, parity-alternating
/// in n).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct BandInterval {
    pub n: usize,
    pub lo: f64,
    pub hi: f64,
    pub alpha_lo: f64,
    pub alpha_hi: f64,
}

/// An open interval free of spectrum.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct GapInterval {
    pub lo: f64,
    pub hi: f64,
    pub width: f64,
}

/// Computes the n-th band from the periodic and antiperiodic eigenvalues.
pub fn band(hp: &HillProblem, n: usize, tol: f64) -> Result<BandInterval> {
    Ok(bands_upto(hp, n, tol)?.pop().expect("n >= 1 bands computed"))
}

/// Bands 1 through `n_max` from a single scan.
pub fn bands_upto(hp: &HillProblem, n_max: usize, tol: f64) -> Result<Vec<BandInterval>> {
    let eigs = floquet_eigenvalues_upto(hp, n_max, &[0.0, PI], tol)?;
    Ok((1..=n_max)
        .map(|n| {
            let at0 = eigs[0][n - 1];
            let at_pi = eigs[1][n - 1];
            if at0 <= at_pi {
                BandInterval {
                    n,
                    lo: at0,
                    hi: at_pi,
                    alpha_lo: 0.0,
                    alpha_hi: PI,
                }
            } else {
                BandInterval {
                    n,
                    lo: at_pi,
                    hi: at0,
                    alpha_lo: PI,
                    alpha_hi: 0.0,
                }
            }
        })
        .collect())
}

/// Tri-state spectral membership at a fixed `lambda`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum SpectrumMembership {
    /// `|Delta| <= 2 - margin`: inside a band, with the Floquet exponent.
    CertifiedIn { alpha: f64 },
    /// `|Delta| >= 2 + margin`: inside a gap, with the distance of the
    /// discriminant from `[-2, 2]`.
    CertifiedOut { distance: f64 },
    /// Within `margin` of a band edge; no certification either way.
    Indeterminate,
}

/// Certified membership test via the discriminant. `margin > 0` sets the
/// certification deadband around `|Delta| = 2`.
pub fn in_spectrum(hp: &HillProblem, lambda: f64, margin: f64) -> Result<SpectrumMembership> {
    if !(margin > 0.0) {
        return Err(Error::Precondition("margin must be positive".into()));
    }
    let delta = discriminant(hp, lambda)?;
    if delta.abs() <= 2.0 - margin {
        Ok(SpectrumMembership::CertifiedIn {
            alpha: (delta / 2.0).clamp(-1.0, 1.0).acos(),
        })
    } else if delta.abs() >= 2.0 + margin {
        Ok(SpectrumMembership::CertifiedOut {
            distance: delta.abs() - 2.0,
        })
    } else {
        Ok(SpectrumMembership::Indeterminate)
    }
}

/// Bands and gaps of the spectrum restricted to `[0, lambda_max]`.
#[derive(Debug, Clone, Serialize)]
pub struct SpectrumReport1D {
    pub lambda_max: f64,
    pub bands: Vec<BandInterval>,
    pub gaps: Vec<GapInterval>,
}

/// Computes every band intersecting `[0, lambda_max]` and returns the
/// maximal open subintervals missed by all of them. Touching bands share
/// the critical value exactly, so they cannot produce spurious gaps; the
/// reporting threshold for a genuine gap is `max(10 tol, 1e-9)`.
pub fn gaps(hp: &HillProblem, lambda_max: f64, tol: f64) -> Result<SpectrumReport1D> {
    if !(lambda_max > 0.0) {
        return Err(Error::Precondition("lambda_max must be positive".into()));
    }
    let a = hp.transformed_period();
    let k_bound = hp.comparison_bound();
    let n_hi = ((a * (lambda_max + k_bound).sqrt() / PI).ceil() as usize + 2).max(2);
    let all_bands = bands_upto(hp, n_hi, tol)?;

    let gap_tol = (10.0 * tol).max(1e-9);
    let mut gaps = Vec::new();
    let mut covered_to = 0.0f64;
    let mut bands = Vec::new();
    for b in &all_bands {
        if b.lo > lambda_max {
            if covered_to < lambda_max - gap_tol {
                gaps.push(GapInterval {
                    lo: covered_to,
                    hi: lambda_max,
                    width: lambda_max - covered_to,
                });
            }
            break;
        }
        if b.lo > covered_to + gap_tol {
            gaps.push(GapInterval {
                lo: covered_to,
                hi: b.lo,
                width: b.lo - covered_to,
            });
        }
        covered_to = covered_to.max(b.hi);
        if b.hi >= 0.0 {
            bands.push(*b);
        }
        if covered_to >= lambda_max {
            break;
        }
    }
    Ok(SpectrumReport1D {
        lambda_max,
        bands,
        gaps,
    })
}

// ============================================================================
// Finite-difference Floquet oracle
// ============================================================================

/// Independent route to the Floquet eigenvalues: the second-difference
/// matrix on `grid_points` nodes with `exp(i alpha)` coupling across the
/// period, weighted by `u` at the nodes, solved as a generalized Hermitian
/// eigenproblem. Eigenvalues are extracted by spectrum slicing (Sylvester
/// inertia counts of the shifted pencil via a bordered `L D L^H` sweep), so
/// large grids stay cheap.
pub fn fd_floquet_eigs(
    hp: &HillProblem,
    alpha: f64,
    n_max: usize,
    grid_points: usize,
) -> Result<Vec<f64>> {
    if grid_points < 64 {
        return Err(Error::Precondition(
            "fd_floquet_eigs needs at least 64 grid points".into(),
        ));
    }
    if n_max == 0 || n_max >= grid_points / 2 {
        return Err(Error::Precondition(
            "n_max must satisfy 1 <= n_max < grid_points / 2".into(),
        ));
    }
    let n = grid_points;
    let h = hp.period / n as f64;
    let inv_h2 = 1.0 / (h * h);
    let mut diag = Vec::with_capacity(n);
    let mut mass = Vec::with_capacity(n);
    for i in 0..n {
        let x = i as f64 * h;
        diag.push(2.0 * inv_h2 - hp.potential_at(x));
        mass.push(hp.weight.eval(x, 0));
    }
    let b = -inv_h2;
    let corner = -Complex64::new(0.0, -alpha).exp() * inv_h2; // M[0][n-1] = -e^{-i alpha}/h^2

    let count_below = |lambda: f64| -> usize {
        // Bordered LDL^H elimination of T - lambda D; negative pivots count
        // the pencil eigenvalues below lambda.
        let pivmin = 1e-30 * (1.0 + b * b);
        let guard = |d: f64| if d.abs() < pivmin { -pivmin } else { d };
        let mut neg = 0usize;
        let mut d_prev = guard(diag[0] - lambda * mass[0]);
        if d_prev < 0.0 {
            neg += 1;
        }
        let mut w_prev = corner;
        let mut last = diag[n - 1] - lambda * mass[n - 1];
        for j in 1..=n - 2 {
            last -= w_prev.norm_sqr() / d_prev;
            let init = if j == n - 2 { b } else { 0.0 };
            let w_cur = Complex64::new(init, 0.0) - w_prev * (b / d_prev);
            let d_cur = guard(diag[j] - lambda * mass[j] - b * b / d_prev);
            if d_cur < 0.0 {
                neg += 1;
            }
            d_prev = d_cur;
            w_prev = w_cur;
        }
        last -= w_prev.norm_sqr() / d_prev;
        if guard(last) < 0.0 {
            neg += 1;
        }
        neg
    };

    let mut lo = hp.spectrum_floor();
    for _ in 0..64 {
        if count_below(lo) == 0 {
            break;
        }
        lo = 2.0 * lo - 1.0;
    }
    if count_below(lo) != 0 {
        return Err(Error::Eigen("no lower bound for the FD spectrum".into()));
    }
    let mut hi = lo.abs().max(10.0);
    for _ in 0..64 {
        if count_below(hi) >= n_max {
            break;
        }
        hi *= 2.0;
    }
    if count_below(hi) < n_max {
        return Err(Error::Eigen(format!(
            "FD spectrum has fewer than {n_max} eigenvalues below {hi:.3e}"
        )));
    }

    let mut out = Vec::with_capacity(n_max);
    for k in 1..=n_max {
        let (mut a, mut b2) = (lo, hi);
        for _ in 0..80 {
            let mid = 0.5 * (a + b2);
            if count_below(mid) >= k {
                b2 = mid;
            } else {
                a = mid;
            }
            if b2 - a <= 1e-12 * (1.0 + b2.abs()) {
                break;
            }
        }
        out.push(0.5 * (a + b2));
    }
    Ok(out)
}

// ============================================================================
// Tests
// ============================================================================
