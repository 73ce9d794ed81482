//! Best-fit 3D plane via SVD, and projection of points onto that plane.

use nalgebra::{DMatrix, Vector2, Vector3};

use crate::{Error, Result};

use super::rotation::rodrigues_rotation;

/// Relative singular-value ratio below which the point set is considered
/// collinear or coincident.
const DEGENERACY_RATIO: f64 = 1e-9;

/// Component magnitude below which the sign convention falls through to the
/// next axis.
const SIGN_TOL: f64 = 1e-12;

/// Best-fit plane through a point set.
///
/// The normal is the singular vector of the centered point matrix with the
/// smallest singular value, oriented so `normal.z >= 0` (tie-break
/// `normal.y >= 0`, then `normal.x >= 0`).
#[derive(Debug, Clone, PartialEq)]
pub struct PlaneFit {
    pub centroid: Vector3<f64>,
    pub normal: Vector3<f64>,
    /// RMS of signed point-plane distances, mm.
    pub rms_residual: f64,
}

impl PlaneFit {
    /// Signed distance of a point to the plane.
    pub fn signed_distance(&self, p: &Vector3<f64>) -> f64 {
        self.normal.dot(&(p - self.centroid))
    }
}

/// Fit the best-fit plane to `points` (≥ 3, non-collinear).
pub fn fit_plane(points: &[Vector3<f64>]) -> Result<PlaneFit> {
    let n = points.len();
    if n < 3 {
        return Err(Error::input(format!("plane fit needs >= 3 points, got {n}")));
    }
    let centroid = points.iter().sum::<Vector3<f64>>() / n as f64;

    let mut centered = DMatrix::<f64>::zeros(n, 3);
    for (i, p) in points.iter().enumerate() {
        let d = p - centroid;
        centered[(i, 0)] = d.x;
        centered[(i, 1)] = d.y;
        centered[(i, 2)] = d.z;
    }

    let svd = centered.svd(false, true);
    let v_t = svd
        .v_t
        .as_ref()
        .ok_or_else(|| Error::numerical("SVD failed to produce right singular vectors"))?;
    // Singular values come back in descending order; the last row of V^T is
    // the direction of least variance.
    let sv = &svd.singular_values;
    let sigma_max = sv[0];
    if sigma_max < SIGN_TOL {
        return Err(Error::degenerate("all points coincident"));
    }
    if sv[1] < DEGENERACY_RATIO * sigma_max && sv[2] < DEGENERACY_RATIO * sigma_max {
        return Err(Error::degenerate("points are collinear"));
    }

    let normal = orient(Vector3::new(v_t[(2, 0)], v_t[(2, 1)], v_t[(2, 2)])).normalize();
    let rms_residual = sv[2] / (n as f64).sqrt();

    Ok(PlaneFit {
        centroid,
        normal,
        rms_residual,
    })
}

/// Apply the sign convention: `z >= 0`, tie-break `y >= 0`, then `x >= 0`.
fn orient(n: Vector3<f64>) -> Vector3<f64> {
    if n.z.abs() > SIGN_TOL {
        return if n.z > 0.0 { n } else { -n };
    }
    if n.y.abs() > SIGN_TOL {
        return if n.y > 0.0 { n } else { -n };
    }
    if n.x >= 0.0 {
        n
    } else {
        -n
    }
}

/// Project points onto the plane: subtract the centroid, rotate the plane
/// normal onto +z via Rodrigues rotation, and return the in-plane `(x, y)`
/// pairs plus the pre-projection signed point-plane distances.
pub fn project_to_plane(
    points: &[Vector3<f64>],
    plane: &PlaneFit,
) -> Result<(Vec<Vector2<f64>>, Vec<f64>)> {
    let z = Vector3::z();
    let axis = plane.normal.cross(&z);
    let sin = axis.norm();
    let distances: Vec<f64> = points.iter().map(|p| plane.signed_distance(p)).collect();

    let projected = if sin < 1e-12 {
        // normal already ±z: rotation is identity
        points
            .iter()
            .map(|p| {
                let d = p - plane.centroid;
                Vector2::new(d.x, d.y)
            })
            .collect()
    } else {
        let axis = axis / sin;
        let angle_deg = sin.atan2(plane.normal.dot(&z)).to_degrees();
        points
            .iter()
            .map(|p| {
                let r = rodrigues_rotation(p - plane.centroid, axis, angle_deg)?;
                Ok(Vector2::new(r.x, r.y))
            })
            .collect::<Result<Vec<_>>>()?
    };

    Ok((projected, distances))
}
