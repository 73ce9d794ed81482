//! Co-registration of all six phases of one patient into a canonical frame.
//!
//! One rigid transform is computed from phase 0 (translate the phase-0
//! centroid to the origin, rotate the phase-0 plane normal onto +z, then
//! rotate in-plane so the phase-0 semi-major axis lies on the x-axis) and
//! applied unchanged to every phase, so inter-phase displacements stay
//! physically meaningful.

use nalgebra::{Vector2, Vector3};

use crate::ingest::LandmarkSet;
use crate::{Error, Result, NUM_POINTS, PHASES};

use super::ellipse::{fit_ellipse, EllipseFit};
use super::plane::{fit_plane, project_to_plane, PlaneFit};
use super::rotation::rodrigues_rotation;

/// One cardiac phase of a patient after co-registration.
#[derive(Debug, Clone)]
pub struct RegisteredPhase {
    pub phase: u8,
    /// The six insertion points in the registered frame, ordered P0..P5.
    pub points3d: [Vector3<f64>; NUM_POINTS],
    /// Plane re-fit in the registered frame.
    pub plane: PlaneFit,
    /// Ellipse re-fit on that plane.
    pub ellipse: EllipseFit,
    /// Signed point-to-plane distances, ordered P0..P5.
    pub signed_distances: [f64; NUM_POINTS],
}

/// Register all six phases of a patient.
pub fn register_patient(landmarks: &LandmarkSet) -> Result<[RegisteredPhase; 6]> {
    let phase0: Vec<Vector3<f64>> = landmarks.phase_points(0).to_vec();
    let plane0 = fit_plane(&phase0).map_err(annotate(0))?;
    let c0 = plane0.centroid;

    // Orient the normal by the winding of the labeled points so the
    // registered frame is intrinsic to the anatomy, not the scanner pose.
    let mut n0 = plane0.normal;
    let winding: f64 = (0..NUM_POINTS)
        .map(|i| {
            let a = phase0[i] - c0;
            let b = phase0[(i + 1) % NUM_POINTS] - c0;
            a.cross(&b).dot(&n0)
        })
        .sum();
    if winding < 0.0 {
        n0 = -n0;
    }

    // Rigid transform: p ↦ Rz(−θ0 [+180°]) · Ralign(n0 → z) · (p − c0)
    let z = Vector3::z();
    let axis = n0.cross(&z);
    let sin = axis.norm();
    let align: Box<dyn Fn(Vector3<f64>) -> Result<Vector3<f64>>> = if sin < 1e-12 {
        if n0.z > 0.0 {
            Box::new(Ok)
        } else {
            // normal anti-parallel to z: half turn about x
            Box::new(move |v| rodrigues_rotation(v, Vector3::x(), 180.0))
        }
    } else {
        let axis = axis / sin;
        let angle_deg = sin.atan2(n0.dot(&z)).to_degrees();
        Box::new(move |v| rodrigues_rotation(v, axis, angle_deg))
    };

    let aligned0: Vec<Vector3<f64>> = phase0
        .iter()
        .map(|&p| align(p - c0))
        .collect::<Result<_>>()
        .map_err(annotate(0))?;
    let pts2d0: Vec<Vector2<f64>> = aligned0.iter().map(|v| Vector2::new(v.x, v.y)).collect();
    let ell0 = fit_ellipse(&pts2d0).map_err(annotate(0))?;

    // θ only fixes the major axis up to 180°; put P0 on the y ≥ 0 side so
    // the in-plane orientation is also intrinsic.
    let mut spin = -ell0.theta;
    let q = rodrigues_rotation(aligned0[0], z, spin).map_err(annotate(0))?;
    if q.y < 0.0 || (q.y == 0.0 && q.x < 0.0) {
        spin += 180.0;
    }

    // The in-plane rotation is about the z-axis through the origin, which
    // keeps the phase-0 centroid at (0,0,0).
    let transform = |p: Vector3<f64>| -> Result<Vector3<f64>> {
        rodrigues_rotation(align(p - c0)?, z, spin)
    };

    let phases: Vec<RegisteredPhase> = PHASES
        .iter()
        .enumerate()
        .map(|(fi, &phase)| {
            let moved: Vec<Vector3<f64>> = landmarks
                .phase_points(fi)
                .iter()
                .map(|&p| transform(p))
                .collect::<Result<_>>()
                .map_err(annotate(phase))?;
            let plane = fit_plane(&moved).map_err(annotate(phase))?;
            let (pts2d, dists) = project_to_plane(&moved, &plane).map_err(annotate(phase))?;
            let ellipse = fit_ellipse(&pts2d).map_err(annotate(phase))?;
            Ok(RegisteredPhase {
                phase,
                points3d: to_array(&moved),
                plane,
                ellipse,
                signed_distances: dists.try_into().expect("six distances"),
            })
        })
        .collect::<Result<_>>()?;

    Ok(phases.try_into().expect("six phases"))
}

fn to_array(v: &[Vector3<f64>]) -> [Vector3<f64>; NUM_POINTS] {
    std::array::from_fn(|i| v[i])
}

fn annotate(phase: u8) -> impl Fn(Error) -> Error {
    move |e| match e {
        Error::Degenerate(m) => Error::Degenerate(format!("CP{phase}: {m}")),
        Error::Numerical(m) => Error::Numerical(format!("CP{phase}: {m}")),
        Error::Input(m) => Error::Input(format!("CP{phase}: {m}")),
        other => other,
    }
}

/// In-plane ellipse center is unused here but callers sometimes want the
/// registered phase-0 ellipse; re-fit helpers live on [`RegisteredPhase`].
impl RegisteredPhase {
    /// Ellipse center lifted into the registered 3D frame (on the phase plane).
    pub fn ellipse_center_3d(&self) -> Vector3<f64> {
        // project_to_plane rotates about the centroid; invert that rotation.
        let z = Vector3::z();
        let axis = self.plane.normal.cross(&z);
        let sin = axis.norm();
        let c2 = Vector2::new(self.ellipse.center.x, self.ellipse.center.y);
        if sin < 1e-12 {
            self.plane.centroid + Vector3::new(c2.x, c2.y, 0.0)
        } else {
            let axis = axis / sin;
            let angle_deg = sin.atan2(self.plane.normal.dot(&z)).to_degrees();
            let back = rodrigues_rotation(Vector3::new(c2.x, c2.y, 0.0), axis, -angle_deg)
                .expect("unit axis");
            self.plane.centroid + back
        }
    }
}
