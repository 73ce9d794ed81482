//! Axis-angle (Rodrigues) rotation.

use nalgebra::Vector3;

use crate::{Error, Result};

/// Rotate `v` about the unit `axis` by `angle_deg` degrees:
/// `v cosθ + (axis × v) sinθ + axis (axis · v)(1 − cosθ)`.
pub fn rodrigues_rotation(
    v: Vector3<f64>,
    axis: Vector3<f64>,
    angle_deg: f64,
) -> Result<Vector3<f64>> {
    if (axis.norm() - 1.0).abs() > 1e-9 {
        return Err(Error::input(format!(
            "rotation axis must be unit-norm, |axis| = {}",
            axis.norm()
        )));
    }
    if !angle_deg.is_finite() {
        return Err(Error::input("non-finite rotation angle"));
    }
    let theta = angle_deg.to_radians();
    let (sin, cos) = theta.sin_cos();
    Ok(v * cos + axis.cross(&v) * sin + axis * (axis.dot(&v) * (1.0 - cos)))
}
