//! Direct least-squares ellipse fitting with the ellipse-specific conic
//! constraint (B² − 4AC < 0), using the numerically stabilized
//! scatter-matrix block partitioning.

use nalgebra::{Matrix3, Vector2, Vector3};

use crate::{Error, Result};

/// Best-fit ellipse in a local 2D frame.
#[derive(Debug, Clone, PartialEq)]
pub struct EllipseFit {
    /// Center (x, y), mm.
    pub center: Vector2<f64>,
    /// Semi-major axis length, mm.
    pub a: f64,
    /// Semi-minor axis length, mm.
    pub b: f64,
    /// Rotation of the semi-major axis vs the local x-axis, degrees in [−90, 90).
    pub theta: f64,
    /// RMS orthogonal-distance approximation (Sampson), mm.
    pub residual: f64,
}

impl EllipseFit {
    pub fn eccentricity(&self) -> f64 {
        (1.0 - (self.b / self.a).powi(2)).max(0.0).sqrt()
    }
}

/// Point on the parametric ellipse at angle `t` (radians, measured in the
/// ellipse's own axes before rotation by `theta_deg`).
pub fn ellipse_point(
    center: Vector2<f64>,
    a: f64,
    b: f64,
    theta_deg: f64,
    t: f64,
) -> Vector2<f64> {
    let (sin_r, cos_r) = theta_deg.to_radians().sin_cos();
    let px = a * t.cos();
    let py = b * t.sin();
    Vector2::new(
        center.x + cos_r * px - sin_r * py,
        center.y + sin_r * px + cos_r * py,
    )
}

/// Fit an ellipse to ≥ 6 2D points by the direct constrained least-squares
/// conic fit, then convert to geometric parameters.
pub fn fit_ellipse(points: &[Vector2<f64>]) -> Result<EllipseFit> {
    let n = points.len();
    if n < 6 {
        return Err(Error::input(format!(
            "ellipse fit needs >= 6 points, got {n}"
        )));
    }
    for p in points {
        if !(p.x.is_finite() && p.y.is_finite()) {
            return Err(Error::input("non-finite point in ellipse fit"));
        }
    }

    // Normalize for conditioning: shift to centroid, scale mean radius to √2.
    let nf = n as f64;
    let mx = points.iter().map(|p| p.x).sum::<f64>() / nf;
    let my = points.iter().map(|p| p.y).sum::<f64>() / nf;
    let mean_dist = points
        .iter()
        .map(|p| ((p.x - mx).powi(2) + (p.y - my).powi(2)).sqrt())
        .sum::<f64>()
        / nf;
    if mean_dist < 1e-12 {
        return Err(Error::degenerate("all points coincident"));
    }
    let scale = std::f64::consts::SQRT_2 / mean_dist;

    // Scatter blocks of the design matrix split into quadratic part
    // D1 = [x², xy, y²] and linear part D2 = [x, y, 1].
    let mut s1 = Matrix3::<f64>::zeros();
    let mut s2 = Matrix3::<f64>::zeros();
    let mut s3 = Matrix3::<f64>::zeros();
    for p in points {
        let x = (p.x - mx) * scale;
        let y = (p.y - my) * scale;
        let d1 = Vector3::new(x * x, x * y, y * y);
        let d2 = Vector3::new(x, y, 1.0);
        s1 += d1 * d1.transpose();
        s2 += d1 * d2.transpose();
        s3 += d2 * d2.transpose();
    }

    let s3_inv = s3
        .try_inverse()
        .ok_or_else(|| Error::degenerate("singular scatter block (degenerate point set)"))?;
    let t = -s3_inv * s2.transpose();
    let m = s1 + s2 * t;

    // Reduced system C1⁻¹ M with C1 = [[0,0,2],[0,-1,0],[2,0,0]].
    let reduced = Matrix3::new(
        m[(2, 0)] / 2.0,
        m[(2, 1)] / 2.0,
        m[(2, 2)] / 2.0,
        -m[(1, 0)],
        -m[(1, 1)],
        -m[(1, 2)],
        m[(0, 0)] / 2.0,
        m[(0, 1)] / 2.0,
        m[(0, 2)] / 2.0,
    );

    let quad = eigenvector_with_ellipse_constraint(&reduced)
        .ok_or_else(|| Error::degenerate("no conic satisfying the ellipse constraint"))?;
    let lin = t * quad;

    let coeffs = denormalize_conic(
        [quad[0], quad[1], quad[2], lin[0], lin[1], lin[2]],
        mx,
        my,
        scale,
    );

    let mut fit = conic_to_ellipse(&coeffs)?;
    fit.residual = rms_sampson(&coeffs, points);
    Ok(fit)
}

/// Real eigenvalues of `m` via the characteristic cubic, then the
/// eigenvector whose quadratic part satisfies 4AC − B² > 0.
fn eigenvector_with_ellipse_constraint(m: &Matrix3<f64>) -> Option<Vector3<f64>> {
    let tr = m.trace();
    let minor_sum = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)] + m[(0, 0)] * m[(2, 2)]
        - m[(0, 2)] * m[(2, 0)]
        + m[(1, 1)] * m[(2, 2)]
        - m[(1, 2)] * m[(2, 1)];
    let det = m.determinant();

    let mut best: Option<(f64, Vector3<f64>)> = None;
    for ev in real_cubic_roots(-tr, minor_sum, -det) {
        let shifted = m - Matrix3::identity() * ev;
        let Some(v) = null_vector(&shifted) else {
            continue;
        };
        if 4.0 * v[0] * v[2] - v[1] * v[1] > 0.0 {
            match &best {
                Some((b_ev, _)) if ev.abs() >= b_ev.abs() => {}
                _ => best = Some((ev.abs(), v)),
            }
        }
    }
    best.map(|(_, v)| v)
}

/// Real roots of x³ + px² + qx + r = 0.
fn real_cubic_roots(p: f64, q: f64, r: f64) -> Vec<f64> {
    let shift = -p / 3.0;
    let a = q - p * p / 3.0;
    let b = 2.0 * p * p * p / 27.0 - p * q / 3.0 + r;
    let disc = -4.0 * a * a * a - 27.0 * b * b;
    if disc >= 0.0 {
        let rad = (-a / 3.0).max(0.0).sqrt();
        if rad < 1e-300 {
            return vec![shift];
        }
        let cos_arg = (-b / (2.0 * rad * rad * rad)).clamp(-1.0, 1.0);
        let theta = cos_arg.acos();
        (0..3)
            .map(|k| {
                2.0 * rad * ((theta + 2.0 * std::f64::consts::PI * k as f64) / 3.0).cos() + shift
            })
            .collect()
    } else {
        let sq = (b * b / 4.0 + a * a * a / 27.0).sqrt();
        vec![(-b / 2.0 + sq).cbrt() + (-b / 2.0 - sq).cbrt() + shift]
    }
}

/// Null vector of a near-singular 3×3 matrix: the adjugate row with the
/// largest norm.
fn null_vector(m: &Matrix3<f64>) -> Option<Vector3<f64>> {
    let rows = [
        Vector3::new(
            m[(1, 1)] * m[(2, 2)] - m[(1, 2)] * m[(2, 1)],
            -(m[(1, 0)] * m[(2, 2)] - m[(1, 2)] * m[(2, 0)]),
            m[(1, 0)] * m[(2, 1)] - m[(1, 1)] * m[(2, 0)],
        ),
        Vector3::new(
            -(m[(0, 1)] * m[(2, 2)] - m[(0, 2)] * m[(2, 1)]),
            m[(0, 0)] * m[(2, 2)] - m[(0, 2)] * m[(2, 0)],
            -(m[(0, 0)] * m[(2, 1)] - m[(0, 1)] * m[(2, 0)]),
        ),
        Vector3::new(
            m[(0, 1)] * m[(1, 2)] - m[(0, 2)] * m[(1, 1)],
            -(m[(0, 0)] * m[(1, 2)] - m[(0, 2)] * m[(1, 0)]),
            m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)],
        ),
    ];
    let best = rows
        .iter()
        .max_by(|a, b| a.norm_squared().total_cmp(&b.norm_squared()))?;
    if best.norm_squared() < 1e-60 {
        return None;
    }
    Some(best / best.norm())
}

/// Map conic coefficients fitted in normalized coordinates
/// x' = s(x − mx), y' = s(y − my) back to the original frame.
fn denormalize_conic(c: [f64; 6], mx: f64, my: f64, s: f64) -> [f64; 6] {
    let [a, b, cc, d, e, f] = c;
    let s2 = s * s;
    [
        a * s2,
        b * s2,
        cc * s2,
        -2.0 * a * s2 * mx - b * s2 * my + d * s,
        -b * s2 * mx - 2.0 * cc * s2 * my + e * s,
        a * s2 * mx * mx + b * s2 * mx * my + cc * s2 * my * my - d * s * mx - e * s * my + f,
    ]
}

/// Convert a general conic A x² + B xy + C y² + D x + E y + F = 0 to
/// geometric ellipse parameters, enforcing a ≥ b and θ ∈ [−90, 90).
fn conic_to_ellipse(c: &[f64; 6]) -> Result<EllipseFit> {
    let [a, b, cc, d, e, f] = *c;
    let disc = b * b - 4.0 * a * cc;
    if disc >= 0.0 {
        return Err(Error::degenerate("fitted conic is not an ellipse"));
    }

    let denom = -disc;
    let cx = (b * e - 2.0 * cc * d) / denom;
    let cy = (b * d - 2.0 * a * e) / denom;

    let theta_rad = if (a - cc).abs() < 1e-15 && b.abs() < 1e-15 {
        0.0
    } else {
        0.5 * b.atan2(a - cc)
    };

    let sum = a + cc;
    let diff = ((a - cc).powi(2) + b * b).sqrt();
    let lambda1 = (sum + diff) / 2.0;
    let lambda2 = (sum - diff) / 2.0;

    let f_center = a * cx * cx + b * cx * cy + cc * cy * cy + d * cx + e * cy + f;
    if f_center.abs() < 1e-300 {
        return Err(Error::degenerate("degenerate conic (point ellipse)"));
    }

    let a_sq = -f_center / lambda1;
    let b_sq = -f_center / lambda2;
    if a_sq <= 0.0 || b_sq <= 0.0 || !a_sq.is_finite() || !b_sq.is_finite() {
        return Err(Error::degenerate("conic has non-positive axis lengths"));
    }

    // lambda1 >= lambda2 for sum > 0 means a_sq <= b_sq: the eigenvalue
    // direction of theta_rad carries semi-axis sqrt(a_sq).
    let (mut semi_a, mut semi_b, mut theta) = (a_sq.sqrt(), b_sq.sqrt(), theta_rad.to_degrees());
    if semi_a < semi_b {
        std::mem::swap(&mut semi_a, &mut semi_b);
        theta += 90.0;
    }
    theta = wrap_orientation(theta);

    Ok(EllipseFit {
        center: Vector2::new(cx, cy),
        a: semi_a,
        b: semi_b,
        theta,
        residual: 0.0,
    })
}

/// Wrap an orientation angle (180° ambiguous) into [−90, 90).
pub fn wrap_orientation(mut theta: f64) -> f64 {
    while theta >= 90.0 {
        theta -= 180.0;
    }
    while theta < -90.0 {
        theta += 180.0;
    }
    theta
}

/// RMS first-order geometric distance (algebraic distance over gradient
/// magnitude) of points to the conic.
fn rms_sampson(c: &[f64; 6], points: &[Vector2<f64>]) -> f64 {
    let [a, b, cc, d, e, f] = *c;
    let sum_sq: f64 = points
        .iter()
        .map(|p| {
            let (x, y) = (p.x, p.y);
            let alg = a * x * x + b * x * y + cc * y * y + d * x + e * y + f;
            let gx = 2.0 * a * x + b * y + d;
            let gy = b * x + 2.0 * cc * y + e;
            let grad = (gx * gx + gy * gy).sqrt();
            if grad < 1e-30 {
                alg * alg
            } else {
                (alg / grad).powi(2)
            }
        })
        .sum();
    (sum_sq / points.len() as f64).sqrt()
}
