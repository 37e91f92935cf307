//! Linear stability of equilibria: characteristic biquadratic, frequencies, resonances.

use num_complex::Complex64;
use serde::Serialize;

use crate::equilibria::{EquilibriumPoint, Label};
use crate::error::{ErfbpError, Result};
use crate::model::PrimaryConfiguration;

pub const DEFAULT_DEGENERATE_BAND: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Classification {
    LinearlyStable,
    Degenerate,
    Unstable,
}

impl Classification {
    pub fn is_stable(self) -> bool {
        self == Classification::LinearlyStable
    }
}

impl std::fmt::Display for Classification {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Classification::LinearlyStable => "LinearlyStable",
            Classification::Degenerate => "Degenerate",
            Classification::Unstable => "Unstable",
        };
        f.write_str(s)
    }
}

/// (c2, c0) of λ⁴ + c2 λ² + c0 at a planar position.
pub fn coefficients_at(pos: [f64; 2], config: &PrimaryConfiguration) -> Result<(f64, f64)> {
    config.check_position(pos)?;
    let (_, h) = config.gradient_hessian(pos);
    Ok((4.0 - h.xx - h.yy, h.det()))
}

pub fn characteristic_coefficients(
    point: &EquilibriumPoint,
    config: &PrimaryConfiguration,
) -> Result<(f64, f64)> {
    coefficients_at(point.position, config)
}

pub fn discriminant(c2: f64, c0: f64) -> f64 {
    c2 * c2 - 4.0 * c0
}

pub fn classify(c2: f64, c0: f64) -> Classification {
    classify_with_band(c2, c0, DEFAULT_DEGENERATE_BAND)
}

pub fn classify_with_band(c2: f64, c0: f64, band: f64) -> Classification {
    let conds = [c2, c0, discriminant(c2, c0)];
    if conds.iter().any(|v| !v.is_finite()) {
        return Classification::Unstable;
    }
    if conds.iter().all(|&v| v > band) {
        Classification::LinearlyStable
    } else if conds.iter().all(|&v| v >= -band) {
        Classification::Degenerate
    } else {
        Classification::Unstable
    }
}

/// Frequencies (ω1, ω2) with ω1 ≥ ω2 from ω² = (c2 ± √(c2² − 4c0))/2.
pub fn frequencies(c2: f64, c0: f64) -> Result<(f64, f64)> {
    if classify(c2, c0) == Classification::Unstable {
        return Err(ErfbpError::NotStable { c2, c0 });
    }
    let d = discriminant(c2, c0).max(0.0);
    let w1sq = 0.5 * (c2 + d.sqrt());
    if w1sq <= 0.0 {
        return Err(ErfbpError::NotStable { c2, c0 });
    }
    // product form avoids cancellation in the small root
    let w2sq = (c0 / w1sq).max(0.0);
    Ok((w1sq.sqrt(), w2sq.sqrt()))
}

/// Smooth p:q resonance function p²q²c2² − (p²+q²)²c0.
///
/// Zero exactly where ω1/ω2 = p/q on the stable side; positive when ω1/ω2 > p/q.
/// For p = q = 1 it equals the discriminant.
pub fn resonance_function(c2: f64, c0: f64, p: u32, q: u32) -> f64 {
    let (p2, q2) = ((p * p) as f64, (q * q) as f64);
    if p == q {
        return discriminant(c2, c0);
    }
    p2 * q2 * c2 * c2 - (p2 + q2) * (p2 + q2) * c0
}

pub fn resonance_residual(
    point: &EquilibriumPoint,
    config: &PrimaryConfiguration,
    p: u32,
    q: u32,
) -> Result<f64> {
    if p == 0 || q == 0 {
        return Err(ErfbpError::InvalidInput("resonance orders must be positive".into()));
    }
    let (c2, c0) = characteristic_coefficients(point, config)?;
    let (w1, w2) = frequencies(c2, c0)?;
    Ok(q as f64 * w1 - p as f64 * w2)
}

/// The four roots of λ⁴ + c2 λ² + c0, as ± pairs.
pub fn characteristic_roots(c2: f64, c0: f64) -> [Complex64; 4] {
    let d = Complex64::new(discriminant(c2, c0), 0.0).sqrt();
    let s1 = 0.5 * (-c2 + d);
    let s2 = 0.5 * (-c2 - d);
    // recover the smaller-magnitude root from the product to avoid cancellation
    let (big, small) = if s1.norm() >= s2.norm() { (s1, s2) } else { (s2, s1) };
    let small = if big.norm() > 0.0 { Complex64::new(c0, 0.0) / big } else { small };
    let (l1, l2) = (big.sqrt(), small.sqrt());
    [l1, -l1, l2, -l2]
}

#[derive(Debug, Clone, Serialize)]
pub struct StabilityReport {
    pub label: Label,
    pub x: f64,
    pub y: f64,
    #[serde(rename = "A11")]
    pub a11: f64,
    #[serde(rename = "A12")]
    pub a12: f64,
    #[serde(rename = "A22")]
    pub a22: f64,
    pub c2: f64,
    pub c0: f64,
    pub discriminant: f64,
    pub classification: Classification,
    pub omega1: Option<f64>,
    pub omega2: Option<f64>,
    #[serde(serialize_with = "serialize_roots")]
    pub eigenvalues: [Complex64; 4],
}

fn serialize_roots<S: serde::Serializer>(
    roots: &[Complex64; 4],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(4))?;
    for r in roots {
        seq.serialize_element(&[r.re, r.im])?;
    }
    seq.end()
}

pub fn analyze(point: &EquilibriumPoint, config: &PrimaryConfiguration) -> Result<StabilityReport> {
    config.check_position(point.position)?;
    let (_, h) = config.gradient_hessian(point.position);
    let c2 = 4.0 - h.xx - h.yy;
    let c0 = h.det();
    let classification = classify(c2, c0);
    let (omega1, omega2) = match frequencies(c2, c0) {
        Ok((a, b)) => (Some(a), Some(b)),
        Err(_) => (None, None),
    };
    Ok(StabilityReport {
        label: point.label,
        x: point.position[0],
        y: point.position[1],
        a11: h.xx,
        a12: h.xy,
        a22: h.yy,
        c2,
        c0,
        discriminant: discriminant(c2, c0),
        classification,
        omega1,
        omega2,
        eigenvalues: characteristic_roots(c2, c0),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn poly(l: Complex64, c2: f64, c0: f64) -> f64 {
        (l.powi(4) + c2 * l * l + c0).norm()
    }

    #[test]
    fn coefficient_examples() {
        assert_eq!(classify(4.0, 3.0), Classification::LinearlyStable);
        assert_eq!(classify(4.0, -1.0), Classification::Unstable);
        assert_eq!(classify(4.0, 4.0), Classification::Degenerate);
        assert_eq!(classify(4.0, 0.0), Classification::Degenerate);
        assert_eq!(classify(-1.0, 0.1), Classification::Unstable);
    }

    #[test]
    fn frequency_examples() {
        let (a, b) = frequencies(4.0, 3.0).unwrap();
        assert_abs_diff_eq!(a, 3f64.sqrt(), epsilon = 1e-14);
        assert_abs_diff_eq!(b, 1.0, epsilon = 1e-14);
        let (a, b) = frequencies(4.0, 4.0).unwrap();
        assert_abs_diff_eq!(a, 2f64.sqrt(), epsilon = 1e-14);
        assert_abs_diff_eq!(b, 2f64.sqrt(), epsilon = 1e-14);
        assert!(matches!(frequencies(1.0, -1.0), Err(ErfbpError::NotStable { .. })));
    }

    #[test]
    fn resonance_function_vanishes_on_ratio() {
        // ω1 = 2ω2 with ω2² = 5/4: c2 = 5ω2², c0 = 4ω2⁴
        let w2sq = 1.25;
        let (c2, c0) = (5.0 * w2sq, 4.0 * w2sq * w2sq);
        assert_abs_diff_eq!(c2, 25.0 / 4.0, epsilon = 1e-15);
        assert_abs_diff_eq!(c0, 25.0 / 4.0, epsilon = 1e-15);
        assert!(resonance_function(c2, c0, 2, 1).abs() < 1e-12);
        let (w1, w2) = frequencies(c2, c0).unwrap();
        assert!((w1 - 2.0 * w2).abs() < 1e-12);
        assert!(resonance_function(c2, 0.9 * c0, 2, 1) > 0.0);
        assert_abs_diff_eq!(resonance_function(4.0, 3.0, 1, 1), 4.0, epsilon = 1e-15);
    }

    #[test]
    fn roots_solve_biquadratic() {
        for &(c2, c0) in &[(4.0, 3.0), (1.0, -2.0), (-3.0, 1.0), (0.5, 1.0), (2.0, 1.0), (1e-3, 1e-9)] {
            for l in characteristic_roots(c2, c0) {
                assert!(poly(l, c2, c0) < 1e-10, "{c2} {c0} {l}");
            }
        }
        let r = characteristic_roots(4.0, 3.0);
        assert_abs_diff_eq!(r[0].im.abs(), 3f64.sqrt(), epsilon = 1e-14);
        assert_abs_diff_eq!(r[0].re, 0.0, epsilon = 1e-14);
    }
}
