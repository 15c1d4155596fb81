//! Permittivity profiles: strictly positive trigonometric polynomials on the
//! unit cell, in 1D and 2D.
//!
//! All certified quantities (positivity, suprema of derivatives) come from
//! dense sampling plus a per-harmonic safety margin: a trig polynomial with
//! derivative bound `L` sampled at spacing `h` can exceed its sampled
//! extremum by at most `L h / 2` between nodes. The returned bounds therefore
//! dominate the true suprema, never undershoot them.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Number of sample points for 1D certification grids.
const CERT_GRID_1D: usize = 1 << 14;
/// Per-axis sample count for 2D positivity grids.
const CERT_GRID_2D: usize = 256;

// ============================================================================
// 1D profiles
// ============================================================================

/// A strictly positive trigonometric polynomial with unit period:
///
/// ```text
/// eps(x) = mean + sum_m cos_m * cos(2 pi m x) + sin_m * sin(2 pi m x)
/// ```
///
/// Positivity is certified at construction; every constructor returns an
/// error for profiles that cannot be certified strictly positive.
#[derive(Debug, Clone, PartialEq)]
pub struct TrigPolynomial1D {
    mean: f64,
    cos_coeffs: Vec<f64>,
    sin_coeffs: Vec<f64>,
    /// Certified lower bound for `min eps` (sampled minimum minus margin).
    certified_min: f64,
}

#[derive(Serialize, Deserialize)]
struct TrigPolynomialRaw {
    period: f64,
    mean: f64,
    cos: Vec<f64>,
    sin: Vec<f64>,
}

impl TrigPolynomial1D {
    /// Builds a profile from its mean and harmonic coefficients. `cos` and
    /// `sin` may have different lengths; the shorter is zero-padded.
    pub fn new(mean: f64, cos_coeffs: Vec<f64>, sin_coeffs: Vec<f64>) -> Result<Self> {
        if !mean.is_finite()
            || cos_coeffs.iter().any(|c| !c.is_finite())
            || sin_coeffs.iter().any(|c| !c.is_finite())
        {
            return Err(Error::InvalidProfile(
                "coefficients must be finite".into(),
            ));
        }
        let len = cos_coeffs.len().max(sin_coeffs.len());
        let mut cos_coeffs = cos_coeffs;
        let mut sin_coeffs = sin_coeffs;
        cos_coeffs.resize(len, 0.0);
        sin_coeffs.resize(len, 0.0);
        let mut p = Self {
            mean,
            cos_coeffs,
            sin_coeffs,
            certified_min: f64::NEG_INFINITY,
        };
        p.certified_min = p.compute_certified_min();
        if p.certified_min <= 0.0 {
            return Err(Error::NonPositiveProfile {
                min: p.certified_min,
            });
        }
        Ok(p)
    }

    /// The constant profile `eps == value`.
    pub fn constant(value: f64) -> Result<Self> {
        Self::new(value, vec![], vec![])
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn cos_coeffs(&self) -> &[f64] {
        &self.cos_coeffs
    }

    pub fn sin_coeffs(&self) -> &[f64] {
        &self.sin_coeffs
    }

    /// The period is fixed to one by construction.
    pub fn period(&self) -> f64 {
        1.0
    }

    pub fn is_constant(&self) -> bool {
        self.cos_coeffs.iter().all(|&c| c == 0.0) && self.sin_coeffs.iter().all(|&c| c == 0.0)
    }

    /// Certified lower bound for `min_x eps(x)` (strictly positive).
    pub fn certified_min(&self) -> f64 {
        self.certified_min
    }

    /// Evaluates the `order`-th derivative at `x` by exact coefficient
    /// transforms (no finite differences). `order = 0` is the profile itself.
    pub fn eval(&self, x: f64, order: u32) -> f64 {
        let mut acc = if order == 0 { self.mean } else { 0.0 };
        for (i, (&a, &b)) in self.cos_coeffs.iter().zip(&self.sin_coeffs).enumerate() {
            let m = (i + 1) as f64;
            let w = 2.0 * PI * m;
            let phase = w * x;
            let scale = w.powi(order as i32);
            // d/dx rotates (cos, sin) -> (-sin, cos) and multiplies by w.
            let (ca, cb) = match order % 4 {
                0 => (a * phase.cos(), b * phase.sin()),
                1 => (-a * phase.sin(), b * phase.cos()),
                2 => (-a * phase.cos(), -b * phase.sin()),
                _ => (a * phase.sin(), -b * phase.cos()),
            };
            acc += scale * (ca + cb);
        }
        acc
    }

    /// `sum_m (2 pi m)^order (|cos_m| + |sin_m|)`: a rigorous bound for
    /// `sup |eps^(order)|` for `order >= 1`, and for the oscillating part
    /// when `order = 0`.
    pub(crate) fn coeff_sum_bound(&self, order: u32) -> f64 {
        self.cos_coeffs
            .iter()
            .zip(&self.sin_coeffs)
            .enumerate()
            .map(|(i, (&a, &b))| {
                let w = 2.0 * PI * (i + 1) as f64;
                w.powi(order as i32) * (a.abs() + b.abs())
            })
            .sum()
    }

    /// Certified bound for `sup_x |eps^(order)(x)|`: sampled supremum plus a
    /// margin from the derivative's coefficient bound.
    pub(crate) fn certified_sup_abs(&self, order: u32) -> f64 {
        let h = 1.0 / CERT_GRID_1D as f64;
        let lipschitz = self.coeff_sum_bound(order + 1);
        let mut sup = 0.0f64;
        for i in 0..CERT_GRID_1D {
            sup = sup.max(self.eval(i as f64 * h, order).abs());
        }
        sup + 0.5 * lipschitz * h
    }

    fn compute_certified_min(&self) -> f64 {
        let h = 1.0 / CERT_GRID_1D as f64;
        let lipschitz = self.coeff_sum_bound(1);
        let mut min = f64::INFINITY;
        for i in 0..CERT_GRID_1D {
            min = min.min(self.eval(i as f64 * h, 0));
        }
        min - 0.5 * lipschitz * h
    }

    /// Reads the JSON profile format
    /// `{"period": 1.0, "mean": 2.0, "cos": [1.0], "sin": []}`.
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: TrigPolynomialRaw = serde_json::from_str(text)
            .map_err(|e| Error::InvalidProfile(format!("1D profile JSON: {e}")))?;
        if raw.period != 1.0 {
            return Err(Error::InvalidProfile(format!(
                "field 'period' must be 1.0, got {}",
                raw.period
            )));
        }
        Self::new(raw.mean, raw.cos, raw.sin)
    }

    pub fn to_json(&self) -> String {
        let raw = TrigPolynomialRaw {
            period: 1.0,
            mean: self.mean,
            cos: self.cos_coeffs.clone(),
            sin: self.sin_coeffs.clone(),
        };
        serde_json::to_string_pretty(&raw).expect("profile serialization cannot fail")
    }
}

/// Evaluates the `order`-th derivative of `p` at `x`.
pub fn eval_profile(p: &TrigPolynomial1D, x: f64, order: u32) -> f64 {
    p.eval(x, order)
}

/// Returns `p + c`, or an error when the shift destroys strict positivity.
pub fn shift_profile(p: &TrigPolynomial1D, c: f64) -> Result<TrigPolynomial1D> {
    TrigPolynomial1D::new(p.mean + c, p.cos_coeffs.clone(), p.sin_coeffs.clone())
}

// ============================================================================
// Regularity bounds
// ============================================================================

/// A single constant `d0 >= 1` dominating `sup |eps|`, `sup |1/eps|`,
/// `sup |eps'|` and `sup |eps''|`, together with the four certified suprema
/// it was built from.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct RegularityBound {
    pub d0: f64,
    pub sup_value: f64,
    pub sup_inverse: f64,
    pub sup_d1: f64,
    pub sup_d2: f64,
}

/// Computes the smallest regularity bound certifiable from dense sampling
/// with a harmonic safety margin. The result dominates all four suprema and
/// is clamped below by 1.
pub fn regularity_bound(p: &TrigPolynomial1D) -> RegularityBound {
    let sup_value = p.certified_sup_abs(0);
    let sup_inverse = 1.0 / p.certified_min();
    let sup_d1 = p.certified_sup_abs(1);
    let sup_d2 = p.certified_sup_abs(2);
    let d0 = sup_value.max(sup_inverse).max(sup_d1).max(sup_d2).max(1.0);
    RegularityBound {
        d0,
        sup_value,
        sup_inverse,
        sup_d1,
        sup_d2,
    }
}

/// The slack variant used when profiles will be shifted: the smallest
/// `D >= 1` with `2/D <= eps <= D/2`, `|eps'| <= D`, `|eps''| <= D`. Any
/// shift `|c| <= 1/D` then keeps `eps + c` within `[1/D, D]`, so the plain
/// regularity bound of the shifted profile never exceeds `D`.
pub fn shift_margin_bound(p: &TrigPolynomial1D) -> f64 {
    let b = regularity_bound(p);
    (2.0 * b.sup_value)
        .max(2.0 * b.sup_inverse)
        .max(b.sup_d1)
        .max(b.sup_d2)
        .max(1.0)
}

// ============================================================================
// 2D profiles
// ============================================================================

/// A real, strictly positive 2D trigonometric polynomial stored by its
/// Fourier coefficients on the integer lattice:
///
/// ```text
/// eps(x) = sum_g c_g exp(2 pi i g . x),   c_{-g} = conj(c_g)
/// ```
///
/// Coefficients absent from the map are exactly zero (the profile is a
/// finite trig polynomial, not a truncation of unknown data).
#[derive(Debug, Clone)]
pub struct Profile2D {
    coeffs: BTreeMap<(i32, i32), Complex64>,
    certified_min: f64,
}

#[derive(Serialize, Deserialize)]
struct Coeff2DRaw {
    g: [i32; 2],
    re: f64,
    im: f64,
}

#[derive(Serialize, Deserialize)]
struct Profile2DRaw {
    coeffs: Vec<Coeff2DRaw>,
}

impl Profile2D {
    /// Builds a profile from `(g, coefficient)` pairs. Hermitian symmetry is
    /// validated: each listed `g` must come with its `-g` partner carrying
    /// the conjugate value, and the `(0,0)` coefficient must be real.
    pub fn new(entries: Vec<((i32, i32), Complex64)>) -> Result<Self> {
        let mut coeffs: BTreeMap<(i32, i32), Complex64> = BTreeMap::new();
        for (g, v) in entries {
            if !v.re.is_finite() || !v.im.is_finite() {
                return Err(Error::InvalidProfile(format!(
                    "coefficient at g = {g:?} must be finite"
                )));
            }
            *coeffs.entry(g).or_insert(Complex64::new(0.0, 0.0)) += v;
        }
        coeffs.retain(|_, v| v.norm() > 0.0);
        for (&(g1, g2), &v) in &coeffs {
            let partner = coeffs
                .get(&(-g1, -g2))
                .copied()
                .unwrap_or(Complex64::new(0.0, 0.0));
            if (partner - v.conj()).norm() > 1e-12 * (1.0 + v.norm()) {
                return Err(Error::InvalidProfile(format!(
                    "Hermitian symmetry violated at g = ({g1}, {g2})"
                )));
            }
        }
        if let Some(c0) = coeffs.get(&(0, 0)) {
            if c0.im.abs() > 1e-12 * (1.0 + c0.re.abs()) {
                return Err(Error::InvalidProfile(
                    "coefficient at g = (0, 0) must be real".into(),
                ));
            }
        }
        let mut p = Self {
            coeffs,
            certified_min: f64::NEG_INFINITY,
        };
        p.certified_min = p.compute_certified_min();
        if p.certified_min <= 0.0 {
            return Err(Error::NonPositiveProfile {
                min: p.certified_min,
            });
        }
        Ok(p)
    }

    /// The constant profile `eps == value`.
    pub fn constant(value: f64) -> Result<Self> {
        Self::new(vec![((0, 0), Complex64::new(value, 0.0))])
    }

    /// The separable profile `eps1(x1) + eps2(x2)`.
    pub fn separable(eps1: &TrigPolynomial1D, eps2: &TrigPolynomial1D) -> Result<Self> {
        let mut entries = vec![(
            (0, 0),
            Complex64::new(eps1.mean() + eps2.mean(), 0.0),
        )];
        let mut push_axis = |axis_first: bool, p: &TrigPolynomial1D| {
            for (i, (&a, &b)) in p.cos_coeffs().iter().zip(p.sin_coeffs()).enumerate() {
                let m = (i + 1) as i32;
                // a cos + b sin = (a - i b)/2 e^{+} + (a + i b)/2 e^{-}
                let c = Complex64::new(a / 2.0, -b / 2.0);
                let g = if axis_first { (m, 0) } else { (0, m) };
                let gneg = if axis_first { (-m, 0) } else { (0, -m) };
                entries.push((g, c));
                entries.push((gneg, c.conj()));
            }
        };
        push_axis(true, eps1);
        push_axis(false, eps2);
        Self::new(entries)
    }

    /// The coefficient at `g` (exactly zero when absent).
    pub fn coeff(&self, g: (i32, i32)) -> Complex64 {
        self.coeffs
            .get(&g)
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    /// Largest `max(|g1|, |g2|)` with a nonzero coefficient.
    pub fn degree(&self) -> i32 {
        self.coeffs
            .keys()
            .map(|&(g1, g2)| g1.abs().max(g2.abs()))
            .max()
            .unwrap_or(0)
    }

    pub fn certified_min(&self) -> f64 {
        self.certified_min
    }

    /// `sum_g |c_g|`: a rigorous bound for `sup |eps|`.
    pub fn sup_bound(&self) -> f64 {
        self.coeffs.values().map(|v| v.norm()).sum()
    }

    pub fn eval(&self, x1: f64, x2: f64) -> f64 {
        let mut acc = 0.0;
        for (&(g1, g2), &v) in &self.coeffs {
            let phase = 2.0 * PI * (g1 as f64 * x1 + g2 as f64 * x2);
            acc += v.re * phase.cos() - v.im * phase.sin();
        }
        acc
    }

    fn compute_certified_min(&self) -> f64 {
        // Gradient bound: |grad eps| <= sum |c_g| 2 pi |g|.
        let lip: f64 = self
            .coeffs
            .iter()
            .map(|(&(g1, g2), v)| {
                v.norm() * 2.0 * PI * ((g1 * g1 + g2 * g2) as f64).sqrt()
            })
            .sum();
        let n = CERT_GRID_2D;
        let h = 1.0 / n as f64;
        let mut min = f64::INFINITY;
        for i in 0..n {
            for j in 0..n {
                min = min.min(self.eval(i as f64 * h, j as f64 * h));
            }
        }
        // A grid cell's farthest interior point is h/sqrt(2) from a node.
        min - lip * h / std::f64::consts::SQRT_2
    }

    /// Reads the JSON format
    /// `{"coeffs": [{"g": [0, 0], "re": 1.0, "im": 0.0}, ...]}`.
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: Profile2DRaw = serde_json::from_str(text)
            .map_err(|e| Error::InvalidProfile(format!("2D profile JSON: {e}")))?;
        let entries = raw
            .coeffs
            .into_iter()
            .map(|c| ((c.g[0], c.g[1]), Complex64::new(c.re, c.im)))
            .collect();
        Self::new(entries)
    }

    pub fn to_json(&self) -> String {
        let raw = Profile2DRaw {
            coeffs: self
                .coeffs
                .iter()
                .map(|(&(g1, g2), v)| Coeff2DRaw {
                    g: [g1, g2],
                    re: v.re,
                    im: v.im,
                })
                .collect(),
        };
        serde_json::to_string_pretty(&raw).expect("profile serialization cannot fail")
    }
}

// ============================================================================
// Tests
// ============================================================================

#[cfg(test)]
mod tests {
    use super::*;

    fn two_plus_cos() -> TrigPolynomial1D {
        TrigPolynomial1D::new(2.0, vec![1.0], vec![]).unwrap()
    }

    #[test]
    fn eval_matches_closed_forms() {
        let p = two_plus_cos();
        assert!((p.eval(0.25, 0) - 2.0).abs() < 1e-14);
        assert!((p.eval(0.25, 1) + 2.0 * PI).abs() < 1e-12);

        let q = TrigPolynomial1D::new(1.0, vec![], vec![0.0, 0.5]).unwrap();
        assert!(q.eval(0.0, 2).abs() < 1e-12, "sin term has no curvature at 0");
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let p = TrigPolynomial1D::new(2.0, vec![0.4, -0.2], vec![0.1, 0.0, 0.3]).unwrap();
        let h = 1e-5;
        for order in 0..3u32 {
            for i in 0..40 {
                let x = i as f64 / 40.0;
                let fd = (p.eval(x + h, order) - p.eval(x - h, order)) / (2.0 * h);
                let exact = p.eval(x, order + 1);
                assert!(
                    (fd - exact).abs() <= 1e-5 * (1.0 + exact.abs()),
                    "order {order} derivative mismatch at x = {x}: fd {fd} vs exact {exact}"
                );
            }
        }
    }

    #[test]
    fn evaluation_is_periodic() {
        let p = TrigPolynomial1D::new(1.5, vec![0.3, 0.1], vec![0.2]).unwrap();
        for i in 0..50 {
            let x = -2.0 + 4.3 * i as f64 / 50.0;
            assert!((p.eval(x + 1.0, 0) - p.eval(x, 0)).abs() <= 1e-12);
        }
    }

    #[test]
    fn regularity_bound_free_profile() {
        let free = TrigPolynomial1D::constant(1.0).unwrap();
        let b = regularity_bound(&free);
        assert!((b.d0 - 1.0).abs() < 1e-12, "d0 of the free profile is 1");
    }

    #[test]
    fn regularity_bound_two_plus_cos() {
        // sup eps = 3, sup 1/eps = 1, sup eps' = 2 pi, sup eps'' = 4 pi^2;
        // the second derivative dominates.
        let b = regularity_bound(&two_plus_cos());
        let expected = 4.0 * PI * PI;
        assert!(b.d0 >= expected, "bound must dominate the true supremum");
        assert!(
            b.d0 - expected < 1e-2,
            "sampling margin too loose: d0 = {}, expected about {expected}",
            b.d0
        );
    }

    #[test]
    fn shift_preserves_or_rejects() {
        let shifted = shift_profile(&two_plus_cos(), -0.5).unwrap();
        assert!((shifted.mean() - 1.5).abs() < 1e-15);

        let tight = TrigPolynomial1D::new(1.0, vec![0.5], vec![]).unwrap();
        assert!(shift_profile(&tight, -0.6).is_err(), "min would become -0.1");
    }

    #[test]
    fn shifted_regularity_stays_under_margin_bound() {
        let profiles = [
            two_plus_cos(),
            TrigPolynomial1D::new(1.5, vec![0.3], vec![0.2]).unwrap(),
            TrigPolynomial1D::new(3.0, vec![-0.8, 0.2], vec![0.0, 0.4]).unwrap(),
        ];
        for p in &profiles {
            let d0 = regularity_bound(p).d0;
            let margin_bound = shift_margin_bound(p);
            for k in [-1.0, -0.4, 0.4, 1.0] {
                let c = k / (2.0 * d0);
                let shifted = shift_profile(p, c).unwrap();
                let shifted_d0 = regularity_bound(&shifted).d0;
                assert!(
                    shifted_d0 <= margin_bound + 1e-9,
                    "shift c = {c}: d0 {shifted_d0} exceeds margin bound {margin_bound}"
                );
            }
        }
    }

    #[test]
    fn json_round_trip_1d() {
        let text = r#"{"period": 1.0, "mean": 2.0, "cos": [1.0], "sin": []}"#;
        let p = TrigPolynomial1D::from_json(text).unwrap();
        assert_eq!(p.cos_coeffs(), &[1.0]);
        assert_eq!(p.sin_coeffs(), &[0.0], "sin side zero-padded");
        let again = TrigPolynomial1D::from_json(&p.to_json()).unwrap();
        assert_eq!(p, again);
    }

    #[test]
    fn json_rejects_bad_period_and_nonpositive() {
        let bad_period = r#"{"period": 2.0, "mean": 2.0, "cos": [], "sin": []}"#;
        let err = TrigPolynomial1D::from_json(bad_period).unwrap_err();
        assert!(err.to_string().contains("period"), "diagnostic names the field");

        let nonpositive = r#"{"period": 1.0, "mean": 0.5, "cos": [1.0], "sin": []}"#;
        assert!(TrigPolynomial1D::from_json(nonpositive).is_err());
    }

    #[test]
    fn profile2d_validates_hermitian_symmetry() {
        let ok = Profile2D::new(vec![
            ((0, 0), Complex64::new(2.0, 0.0)),
            ((1, 1), Complex64::new(0.2, 0.1)),
            ((-1, -1), Complex64::new(0.2, -0.1)),
        ]);
        assert!(ok.is_ok());

        let missing_partner = Profile2D::new(vec![
            ((0, 0), Complex64::new(2.0, 0.0)),
            ((1, 0), Complex64::new(0.3, 0.1)),
        ]);
        assert!(missing_partner.is_err());
    }

    #[test]
    fn profile2d_rejects_nonpositive() {
        let too_strong = Profile2D::new(vec![
            ((0, 0), Complex64::new(1.0, 0.0)),
            ((1, 0), Complex64::new(0.6, 0.0)),
            ((-1, 0), Complex64::new(0.6, 0.0)),
        ]);
        assert!(too_strong.is_err(), "1 + 1.2 cos dips negative");
    }

    #[test]
    fn separable_profile_matches_sum() {
        let e1 = two_plus_cos();
        let e2 = TrigPolynomial1D::new(1.5, vec![], vec![0.25]).unwrap();
        let p = Profile2D::separable(&e1, &e2).unwrap();
        for i in 0..7 {
            for j in 0..7 {
                let (x1, x2) = (i as f64 / 7.0, j as f64 / 7.0);
                let direct = e1.eval(x1, 0) + e2.eval(x2, 0);
                assert!((p.eval(x1, x2) - direct).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn profile2d_json_round_trip() {
        let text = r#"{"coeffs": [
            {"g": [0, 0], "re": 2.0, "im": 0.0},
            {"g": [1, 0], "re": 0.25, "im": 0.0},
            {"g": [-1, 0], "re": 0.25, "im": 0.0}
        ]}"#;
        let p = Profile2D::from_json(text).unwrap();
        let again = Profile2D::from_json(&p.to_json()).unwrap();
        assert!((p.eval(0.3, 0.7) - again.eval(0.3, 0.7)).abs() < 1e-14);
        assert_eq!(p.degree(), 1);
    }
}
