//! Conic and ellipse representations, conversions and the algebraic distance.
//!
//! A general conic is the zero set of `a x² + b xy + c y² + d x + e y + f`,
//! stored as the coefficient vector `[a, b, c, d, e, f]`. The scale ambiguity
//! is removed by the trace gauge `a + c = 1`, which every fitter in this crate
//! uses. Geometric ellipse parameters (center, semi-axes, rotation) convert to
//! and from the conic form; the conversion rejects hyperbolas, parabolas and
//! imaginary/point ellipses with typed errors instead of producing garbage.

use thiserror::Error;

/// Tolerance used by [`ConicParams::is_normalized`].
pub const GAUGE_TOL: f64 = 1e-9;

/// Errors from conic construction and conversion.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConicError {
    #[error("conic coefficients must be finite and not all zero")]
    InvalidCoefficients,
    #[error("conic is not an ellipse (b^2 - 4ac >= 0)")]
    NotAnEllipse,
    #[error("conic has no real solutions (imaginary or point ellipse)")]
    ImaginaryEllipse,
    #[error("a + c is zero; the trace gauge cannot be applied")]
    GaugeFailure,
    #[error("ellipse semi-axes must be strictly positive and finite")]
    InvalidEllipse,
    #[error("affine map scale entries must be nonzero and finite")]
    InvalidMap,
}

// ── Conic parameters ────────────────────────────────────────────────────────

/// Coefficients `[a, b, c, d, e, f]` of a general conic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConicParams(pub [f64; 6]);

/// Lift a point to the monomial vector `[x², xy, y², x, y, 1]`.
pub fn lift_point(p: [f64; 2]) -> [f64; 6] {
    let [x, y] = p;
    [x * x, x * y, y * y, x, y, 1.0]
}

impl ConicParams {
    /// Validating constructor: entries finite, not the all-zero vector.
    pub fn new(theta: [f64; 6]) -> Result<Self, ConicError> {
        if theta.iter().any(|v| !v.is_finite()) || theta.iter().all(|&v| v == 0.0) {
            return Err(ConicError::InvalidCoefficients);
        }
        Ok(Self(theta))
    }

    /// Signed algebraic distance of `p` to the conic: `lift(p) · θ`.
    ///
    /// Zero iff `p` lies on the conic; a cheap proxy for the Euclidean
    /// distance. Negative inside an ellipse in the `a + c = 1` gauge.
    pub fn algebraic_distance(&self, p: [f64; 2]) -> f64 {
        let m = lift_point(p);
        let t = &self.0;
        m.iter().zip(t.iter()).map(|(mi, ti)| mi * ti).sum()
    }

    /// Ellipse test: `b² − 4ac < 0`.
    pub fn is_ellipse(&self) -> bool {
        let [a, b, c, ..] = self.0;
        b * b - 4.0 * a * c < 0.0
    }

    /// Whether the trace gauge `a + c = 1` holds within [`GAUGE_TOL`].
    pub fn is_normalized(&self) -> bool {
        let [a, _, c, ..] = self.0;
        (a + c - 1.0).abs() <= GAUGE_TOL
    }

    /// Rescale so that `a + c = 1`. Fails when `a + c` is (near) zero.
    pub fn normalized(&self) -> Result<Self, ConicError> {
        let [a, _, c, ..] = self.0;
        let trace = a + c;
        if !trace.is_finite() || trace.abs() < 1e-12 {
            return Err(ConicError::GaugeFailure);
        }
        let s = 1.0 / trace;
        Ok(Self(self.0.map(|v| v * s)))
    }
}

// ── Geometric ellipse ───────────────────────────────────────────────────────

/// An ellipse as center, semi-axes and rotation.
///
/// `rotation` is the counter-clockwise angle of the `semi_axes[0]` direction
/// from the +x axis. The canonical form produced by conversions has
/// `semi_axes[0] >= semi_axes[1]` and `rotation` in `[0, π)`; circles get
/// rotation 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeometricEllipse {
    pub center: [f64; 2],
    pub semi_axes: [f64; 2],
    pub rotation: f64,
}

impl GeometricEllipse {
    pub fn new(center: [f64; 2], semi_axes: [f64; 2], rotation: f64) -> Result<Self, ConicError> {
        let ok = center.iter().all(|v| v.is_finite())
            && semi_axes.iter().all(|v| v.is_finite() && *v > 0.0)
            && rotation.is_finite();
        if !ok {
            return Err(ConicError::InvalidEllipse);
        }
        Ok(Self { center, semi_axes, rotation })
    }

    /// Point on the boundary at parametric angle `t`.
    pub fn boundary_point(&self, t: f64) -> [f64; 2] {
        let (s, c) = self.rotation.sin_cos();
        let px = self.semi_axes[0] * t.cos();
        let py = self.semi_axes[1] * t.sin();
        [
            self.center[0] + c * px - s * py,
            self.center[1] + s * px + c * py,
        ]
    }

    /// Canonical form: `semi_axes[0] >= semi_axes[1]`, rotation in `[0, π)`,
    /// rotation 0 for circles.
    pub fn canonical(&self) -> Self {
        let [rx, ry] = self.semi_axes;
        let (axes, rot) = if rx >= ry {
            ([rx, ry], self.rotation)
        } else {
            ([ry, rx], self.rotation + std::f64::consts::FRAC_PI_2)
        };
        let mut rot = rot.rem_euclid(std::f64::consts::PI);
        // A circle has no preferred axis direction.
        if (axes[0] - axes[1]).abs() <= 1e-12 * axes[0] {
            rot = 0.0;
        } else if rot >= std::f64::consts::PI - 1e-12 {
            rot = 0.0;
        }
        Self { center: self.center, semi_axes: axes, rotation: rot }
    }
}

/// Convert geometric parameters to the conic form in the `a + c = 1` gauge.
pub fn geometric_to_conic(e: &GeometricEllipse) -> ConicParams {
    let (sin_r, cos_r) = e.rotation.sin_cos();
    let inv_rx2 = 1.0 / (e.semi_axes[0] * e.semi_axes[0]);
    let inv_ry2 = 1.0 / (e.semi_axes[1] * e.semi_axes[1]);
    let [cx, cy] = e.center;

    let a = cos_r * cos_r * inv_rx2 + sin_r * sin_r * inv_ry2;
    let b = 2.0 * cos_r * sin_r * (inv_rx2 - inv_ry2);
    let c = sin_r * sin_r * inv_rx2 + cos_r * cos_r * inv_ry2;
    let d = -2.0 * a * cx - b * cy;
    let ee = -b * cx - 2.0 * c * cy;
    let f = a * cx * cx + b * cx * cy + c * cy * cy - 1.0;

    // a + c = 1/rx² + 1/ry² > 0, so the gauge always applies here.
    let s = 1.0 / (a + c);
    ConicParams([a * s, b * s, c * s, d * s, ee * s, f * s])
}

/// Recover geometric parameters from conic coefficients.
///
/// Returns the canonical form (`semi_axes[0] >= semi_axes[1]`, rotation in
/// `[0, π)`). Rejects non-ellipses and conics without real solutions.
pub fn conic_to_geometric(theta: &ConicParams) -> Result<GeometricEllipse, ConicError> {
    let [a, b, c, d, e, f] = theta.0;
    if !theta.is_ellipse() {
        return Err(ConicError::NotAnEllipse);
    }

    // Center solves the gradient system 2a·cx + b·cy + d = 0, b·cx + 2c·cy + e = 0.
    let denom = 4.0 * a * c - b * b; // = -discriminant > 0
    let cx = (b * e - 2.0 * c * d) / denom;
    let cy = (b * d - 2.0 * a * e) / denom;

    // Conic value at the center; -f_c/λ are the squared semi-axes.
    let f_c = a * cx * cx + b * cx * cy + c * cy * cy + d * cx + e * cy + f;

    let sum = a + c;
    let diff = ((a - c) * (a - c) + b * b).sqrt();
    let lambda_big = 0.5 * (sum + diff);
    let lambda_small = 0.5 * (sum - diff);

    let major_sq = -f_c / lambda_small;
    let minor_sq = -f_c / lambda_big;
    if !(major_sq > 0.0 && minor_sq > 0.0 && major_sq.is_finite() && minor_sq.is_finite()) {
        return Err(ConicError::ImaginaryEllipse);
    }

    // 0.5·atan2(b, a−c) is the eigendirection of λ_big, i.e. the minor axis.
    let rotation = if diff <= 1e-12 * sum.abs() {
        0.0
    } else {
        0.5 * b.atan2(a - c) + std::f64::consts::FRAC_PI_2
    };

    let e = GeometricEllipse {
        center: [cx, cy],
        semi_axes: [major_sq.sqrt(), minor_sq.sqrt()],
        rotation,
    };
    Ok(e.canonical())
}

// ── Affine coordinate maps ──────────────────────────────────────────────────

/// Axis-aligned invertible affine map `p ↦ scale ⊙ p + offset`.
///
/// Used to move fitting into well-conditioned coordinates and report results
/// back in pixel coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineMap2D {
    pub scale: [f64; 2],
    pub offset: [f64; 2],
}

impl AffineMap2D {
    pub fn new(scale: [f64; 2], offset: [f64; 2]) -> Result<Self, ConicError> {
        let ok = scale.iter().all(|v| v.is_finite() && *v != 0.0)
            && offset.iter().all(|v| v.is_finite());
        if !ok {
            return Err(ConicError::InvalidMap);
        }
        Ok(Self { scale, offset })
    }

    pub fn identity() -> Self {
        Self { scale: [1.0, 1.0], offset: [0.0, 0.0] }
    }

    pub fn apply(&self, p: [f64; 2]) -> [f64; 2] {
        [
            p[0] * self.scale[0] + self.offset[0],
            p[1] * self.scale[1] + self.offset[1],
        ]
    }

    pub fn inverse(&self) -> Self {
        let scale = [1.0 / self.scale[0], 1.0 / self.scale[1]];
        Self {
            scale,
            offset: [-self.offset[0] * scale[0], -self.offset[1] * scale[1]],
        }
    }
}

/// Push a conic through an affine map: the result satisfies
/// `result(map(p)) = k · theta(p)` for a fixed nonzero `k`.
///
/// The result is rescaled to the `a + c = 1` gauge when the trace permits;
/// otherwise the raw substituted coefficients are returned and
/// [`ConicParams::is_normalized`] reports false.
pub fn transform_conic(theta: &ConicParams, map: &AffineMap2D) -> ConicParams {
    // Substitute x = (X - ox)/sx, y = (Y - oy)/sy into theta.
    let [a, b, c, d, e, f] = theta.0;
    let [sx, sy] = map.scale;
    let [ox, oy] = map.offset;
    let isx = 1.0 / sx;
    let isy = 1.0 / sy;

    let a2 = a * isx * isx;
    let b2 = b * isx * isy;
    let c2 = c * isy * isy;
    let d2 = -2.0 * a2 * ox - b2 * oy + d * isx;
    let e2 = -b2 * ox - 2.0 * c2 * oy + e * isy;
    let f2 = a2 * ox * ox + b2 * ox * oy + c2 * oy * oy - d * isx * ox - e * isy * oy + f;

    let out = ConicParams([a2, b2, c2, d2, e2, f2]);
    out.normalized().unwrap_or(out)
}
