//! Per-phase annulus geometry: SVD plane fitting, Rodrigues rotation,
//! in-plane projection, direct least-squares ellipse fitting, and
//! co-registration of all phases into a canonical frame anchored at
//! cardiac phase 0.

mod ellipse;
mod plane;
mod register;
mod rotation;

pub use ellipse::{ellipse_point, fit_ellipse, wrap_orientation, EllipseFit};
pub use plane::{fit_plane, project_to_plane, PlaneFit};
pub use register::{register_patient, RegisteredPhase};
pub use rotation::rodrigues_rotation;
