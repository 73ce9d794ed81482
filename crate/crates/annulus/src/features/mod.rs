//! The canonical 187-element morphological/dynamic feature vector.
//!
//! Layout (names frozen; see [`feature_names`]):
//!
//! - 6 phases × {area, perimeter, a, b, eccentricity, ba_ratio, height} = 42
//! - 5 phases (CP5..CP25) × plane-normal components {n_x, n_y, n_z} = 15
//!   (CP0 components are fixed to (0,0,1) by co-registration and carry no
//!   information, so they are excluded)
//! - 5 transitions × Δtilt = 5
//! - 5 transitions × Δθ = 5
//! - 6 points × 5 transitions × {u_x, u_y, u_z, u_mag} = 120
//!
//! Name grammar: `<base>_CP<p>` for per-phase features,
//! `<base>.CP<p2>-<p1>` for transition angles, and
//! `<base>.P<k>.CP<p2>-<p1>` for per-point displacement features.

pub mod matrix;

use std::sync::OnceLock;

use crate::geometry::{EllipseFit, PlaneFit, RegisteredPhase};
use crate::{Error, Result, NUM_PHASES, NUM_POINTS, PHASES};

pub use matrix::FeatureMatrix;

/// Total number of features in the canonical enumeration.
pub const NUM_FEATURES: usize = 187;

/// Per-phase scalar shape features.
#[derive(Debug, Clone, Copy)]
pub struct PhaseFeatures {
    pub area: f64,
    pub perimeter: f64,
    pub a: f64,
    pub b: f64,
    pub eccentricity: f64,
    pub ba_ratio: f64,
    pub height: f64,
    pub normal: [f64; 3],
}

/// Named, ordered 187-element feature vector for one patient.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureVector {
    pub patient_id: String,
    pub label: u8,
    pub values: Vec<f64>,
}

/// Ellipse perimeter by Ramanujan's second approximation:
/// with h = ((a−b)/(a+b))², P = π(a+b)(1 + 3h/(10 + √(4−3h))).
pub fn ellipse_perimeter(a: f64, b: f64) -> Result<f64> {
    if !(a > 0.0 && b > 0.0) || a < b {
        return Err(Error::input(format!(
            "perimeter needs a >= b > 0, got a={a}, b={b}"
        )));
    }
    let h = ((a - b) / (a + b)).powi(2);
    Ok(std::f64::consts::PI * (a + b) * (1.0 + 3.0 * h / (10.0 + (4.0 - 3.0 * h).sqrt())))
}

/// Annular height: span of the signed point-to-plane distances,
/// |most superior| + |most inferior|.
pub fn annular_height(signed_distances: &[f64]) -> f64 {
    let max = signed_distances.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let min = signed_distances.iter().cloned().fold(f64::INFINITY, f64::min);
    max - min
}

/// Tilt of the plane vs the horizontal plane of the registered frame,
/// degrees in [0, 90].
pub fn tilt(plane: &PlaneFit) -> f64 {
    plane.normal.z.abs().clamp(0.0, 1.0).acos().to_degrees()
}

/// Signed change in ellipse orientation across a transition, wrapped modulo
/// 180° into [−90, 90) (the major axis is orientation-ambiguous).
pub fn delta_theta(theta_next: f64, theta_prev: f64) -> f64 {
    crate::geometry::wrap_orientation(theta_next - theta_prev)
}

/// Per-point, per-transition displacement components and magnitude.
#[derive(Debug, Clone, Copy)]
pub struct Displacement {
    pub ux: f64,
    pub uy: f64,
    pub uz: f64,
    pub umag: f64,
}

/// Displacements of each point across each consecutive transition
/// (5−0, 10−5, 15−10, 20−15, 25−20), indexed `[point][transition]`.
pub fn displacements(phases: &[RegisteredPhase; NUM_PHASES]) -> [[Displacement; 5]; NUM_POINTS] {
    std::array::from_fn(|pi| {
        std::array::from_fn(|ti| {
            let d = phases[ti + 1].points3d[pi] - phases[ti].points3d[pi];
            Displacement {
                ux: d.x,
                uy: d.y,
                uz: d.z,
                umag: d.norm(),
            }
        })
    })
}

fn phase_features(rp: &RegisteredPhase) -> Result<PhaseFeatures> {
    let EllipseFit { a, b, .. } = rp.ellipse;
    Ok(PhaseFeatures {
        area: std::f64::consts::PI * a * b,
        perimeter: ellipse_perimeter(a, b)?,
        a,
        b,
        eccentricity: rp.ellipse.eccentricity(),
        ba_ratio: b / a,
        height: annular_height(&rp.signed_distances),
        normal: [rp.plane.normal.x, rp.plane.normal.y, rp.plane.normal.z],
    })
}

/// The canonical ordered list of 187 feature names, shared by all patients.
pub fn feature_names() -> &'static [String] {
    static NAMES: OnceLock<Vec<String>> = OnceLock::new();
    NAMES.get_or_init(|| {
        let mut names = Vec::with_capacity(NUM_FEATURES);
        for base in ["area", "perimeter", "a", "b", "eccentricity", "ba_ratio", "height"] {
            for p in PHASES {
                names.push(format!("{base}_CP{p}"));
            }
        }
        for comp in ["n_x", "n_y", "n_z"] {
            for p in &PHASES[1..] {
                names.push(format!("{comp}_CP{p}"));
            }
        }
        for base in ["d_tilt", "d_theta"] {
            for t in 0..5 {
                names.push(format!("{base}.CP{}-{}", PHASES[t + 1], PHASES[t]));
            }
        }
        for comp in ["u_x", "u_y", "u_z", "u_mag"] {
            for point in 0..NUM_POINTS {
                for t in 0..5 {
                    names.push(format!("{comp}.P{point}.CP{}-{}", PHASES[t + 1], PHASES[t]));
                }
            }
        }
        assert_eq!(names.len(), NUM_FEATURES);
        names
    })
}

/// Compute the canonical feature vector from a patient's registered phases.
pub fn extract_features(
    patient_id: &str,
    label: u8,
    phases: &[RegisteredPhase; NUM_PHASES],
) -> Result<FeatureVector> {
    let per_phase: Vec<PhaseFeatures> =
        phases.iter().map(phase_features).collect::<Result<_>>()?;

    let mut values = Vec::with_capacity(NUM_FEATURES);
    for select in [
        |f: &PhaseFeatures| f.area,
        |f: &PhaseFeatures| f.perimeter,
        |f: &PhaseFeatures| f.a,
        |f: &PhaseFeatures| f.b,
        |f: &PhaseFeatures| f.eccentricity,
        |f: &PhaseFeatures| f.ba_ratio,
        |f: &PhaseFeatures| f.height,
    ] {
        values.extend(per_phase.iter().map(select));
    }
    for comp in 0..3 {
        values.extend(per_phase[1..].iter().map(|f| f.normal[comp]));
    }
    for t in 0..5 {
        values.push(tilt(&phases[t + 1].plane) - tilt(&phases[t].plane));
    }
    for t in 0..5 {
        values.push(delta_theta(phases[t + 1].ellipse.theta, phases[t].ellipse.theta));
    }
    let disp = displacements(phases);
    for select in [
        |d: &Displacement| d.ux,
        |d: &Displacement| d.uy,
        |d: &Displacement| d.uz,
        |d: &Displacement| d.umag,
    ] {
        for per_point in &disp {
            values.extend(per_point.iter().map(select));
        }
    }

    debug_assert_eq!(values.len(), NUM_FEATURES);
    if let Some(i) = values.iter().position(|v| !v.is_finite()) {
        return Err(Error::Numerical(format!(
            "patient {patient_id}: non-finite value for feature {}",
            feature_names()[i]
        )));
    }

    Ok(FeatureVector {
        patient_id: patient_id.to_string(),
        label,
        values,
    })
}

#[cfg(test)]
mod tests {
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use nalgebra::Vector3;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::geometry::register_patient;
    use crate::synth::{generate_cohorts, CohortSpec};

    /// Quadrature oracle: P = 4 ∫₀^{π/2} √(a²sin²t + b²cos²t) dt (composite
    /// Simpson, 10k intervals — far below 1e-10 relative error here).
    fn perimeter_quadrature(a: f64, b: f64) -> f64 {
        let n = 10_000;
        let h = std::f64::consts::FRAC_PI_2 / n as f64;
        let f = |t: f64| (a * a * t.sin().powi(2) + b * b * t.cos().powi(2)).sqrt();
        let mut sum = f(0.0) + f(std::f64::consts::FRAC_PI_2);
        for i in 1..n {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            sum += w * f(i as f64 * h);
        }
        4.0 * sum * h / 3.0
    }

    #[test]
    fn perimeter_of_circle_is_2pi() {
        assert_relative_eq!(
            ellipse_perimeter(1.0, 1.0).unwrap(),
            2.0 * std::f64::consts::PI,
            max_relative = 1e-12
        );
    }

    #[test]
    fn perimeter_matches_quadrature_oracle() {
        for (a, b) in [(2.0, 1.0), (24.1, 21.9), (30.0, 10.0), (5.0, 5.0)] {
            let got = ellipse_perimeter(a, b).unwrap();
            let want = perimeter_quadrature(a, b);
            assert_relative_eq!(got, want, max_relative = 1e-5);
        }
        // sweep a/b in [1, 3]
        for i in 0..=20 {
            let ratio = 1.0 + 2.0 * i as f64 / 20.0;
            let (a, b) = (10.0 * ratio, 10.0);
            assert_relative_eq!(
                ellipse_perimeter(a, b).unwrap(),
                perimeter_quadrature(a, b),
                max_relative = 1e-5
            );
        }
    }

    #[test]
    fn perimeter_near_no_mr_cohort_mean() {
        // Means do not commute with the nonlinear perimeter map, so this is
        // a consistency check only: within 2% of 129.4 mm.
        let p = ellipse_perimeter(21.6, 19.5).unwrap();
        assert!((p - 129.4).abs() / 129.4 < 0.02, "perimeter {p}");
    }

    #[test]
    fn perimeter_rejects_bad_axes() {
        assert!(ellipse_perimeter(0.0, 0.0).is_err());
        assert!(ellipse_perimeter(1.0, 2.0).is_err());
        assert!(ellipse_perimeter(-1.0, -2.0).is_err());
    }

    #[test]
    fn annular_height_cases() {
        assert_abs_diff_eq!(annular_height(&[0.0; 6]), 0.0);
        assert_abs_diff_eq!(annular_height(&[2.0, -2.0, 0.0, 0.0, 0.0, 0.0]), 4.0);
        assert_abs_diff_eq!(annular_height(&[1.0, 0.5, 3.0, -0.25, 0.0, 2.0]), 3.25);
    }

    #[test]
    fn tilt_matches_arccos_oracle() {
        let plane = |n: Vector3<f64>| crate::geometry::PlaneFit {
            centroid: Vector3::zeros(),
            normal: n,
            rms_residual: 0.0,
        };
        assert_abs_diff_eq!(tilt(&plane(Vector3::z())), 0.0, epsilon = 1e-12);
        let diag = Vector3::new(1.0, 0.0, 1.0).normalize();
        assert_abs_diff_eq!(tilt(&plane(diag)), 45.0, epsilon = 1e-9);

        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..100 {
            let n = Vector3::new(
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
            )
            .normalize();
            let want = f64::abs(n.z).acos().to_degrees();
            assert_abs_diff_eq!(tilt(&plane(n)), want, epsilon = 1e-9);
        }
    }

    #[test]
    fn delta_theta_wraps_through_line_ambiguity() {
        assert_abs_diff_eq!(delta_theta(10.0, 10.0), 0.0);
        assert_abs_diff_eq!(delta_theta(-85.0, 85.0), 10.0);
        assert_abs_diff_eq!(delta_theta(85.0, -85.0), -10.0);

        // Brute-force oracle: the k ∈ {−1, 0, 1} minimizing |Δ + 180k|.
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..500 {
            let tn: f64 = rng.gen_range(-90.0..90.0);
            let tp: f64 = rng.gen_range(-90.0..90.0);
            let want = [-1.0f64, 0.0, 1.0]
                .iter()
                .map(|k| tn - tp + 180.0 * k)
                .min_by(|a, b| a.abs().total_cmp(&b.abs()))
                .unwrap();
            let got = delta_theta(tn, tp);
            // At exactly ±90 the two wraps are equidistant; accept either.
            assert!(
                (got - want).abs() < 1e-9 || (got.abs() - 90.0).abs() < 1e-9,
                "dt({tn}, {tp}) = {got}, oracle {want}"
            );
        }
    }

    #[test]
    fn census_is_exactly_187_unique_names() {
        let names = feature_names();
        assert_eq!(names.len(), NUM_FEATURES);
        let mut sorted: Vec<&String> = names.iter().collect();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), NUM_FEATURES, "duplicate names");
    }

    #[test]
    fn reported_feature_names_resolve() {
        let names = feature_names();
        for want in [
            "perimeter_CP10",
            "area_CP10",
            "height_CP5",
            "perimeter_CP5",
            "a_CP10",
            "b_CP5",
            "b_CP10",
            "u_mag.P0.CP20-15",
            "u_mag.P1.CP20-15",
            "u_mag.P2.CP20-15",
            "u_mag.P3.CP20-15",
            "u_x.P5.CP15-10",
            "n_z_CP25",
            "d_tilt.CP25-20",
            "d_theta.CP5-0",
        ] {
            assert!(names.iter().any(|n| n == want), "missing {want}");
        }
    }

    #[test]
    fn internal_identities_hold_on_random_patients() {
        let no_mr = CohortSpec::default_no_mr(30, 1.0);
        let mr = CohortSpec::default_mr(30, 1.0);
        let out = generate_cohorts(&no_mr, &mr, 9).unwrap();
        let names = feature_names();
        let idx = |n: &str| names.iter().position(|x| x == n).unwrap();
        for fv in &out.ground_truth {
            for p in PHASES {
                let area = fv.values[idx(&format!("area_CP{p}"))];
                let a = fv.values[idx(&format!("a_CP{p}"))];
                let b = fv.values[idx(&format!("b_CP{p}"))];
                let ecc = fv.values[idx(&format!("eccentricity_CP{p}"))];
                let ba = fv.values[idx(&format!("ba_ratio_CP{p}"))];
                assert_relative_eq!(area, std::f64::consts::PI * a * b, max_relative = 1e-9);
                assert_abs_diff_eq!(ecc * ecc + ba * ba, 1.0, epsilon = 1e-9);
                assert!(fv.values[idx(&format!("height_CP{p}"))] >= 0.0);
            }
            for pi in 0..NUM_POINTS {
                for t in 0..5 {
                    let tag = format!("P{pi}.CP{}-{}", PHASES[t + 1], PHASES[t]);
                    let ux = fv.values[idx(&format!("u_x.{tag}"))];
                    let uy = fv.values[idx(&format!("u_y.{tag}"))];
                    let uz = fv.values[idx(&format!("u_z.{tag}"))];
                    let um = fv.values[idx(&format!("u_mag.{tag}"))];
                    assert_abs_diff_eq!(um * um, ux * ux + uy * uy + uz * uz, epsilon = 1e-9);
                    assert!(um >= ux.abs().max(uy.abs()).max(uz.abs()) - 1e-12);
                }
            }
        }
    }

    #[test]
    fn pure_translation_shows_up_in_displacements() {
        let angles = [90.0f64, 270.0, 200.0, 20.0, 160.0, 340.0];
        let base: Vec<Vector3<f64>> = angles
            .iter()
            .map(|ang| {
                let t = ang.to_radians();
                Vector3::new(24.0 * t.cos(), 20.0 * t.sin(), 2.0 * (2.0 * t).cos())
            })
            .collect();
        let points: [[Vector3<f64>; NUM_PHASES]; NUM_POINTS] = std::array::from_fn(|pi| {
            std::array::from_fn(|fi| base[pi] + Vector3::x() * (2.0 * fi as f64))
        });
        let set = crate::ingest::LandmarkSet::new("t".into(), 0, points).unwrap();
        let reg = register_patient(&set).unwrap();
        let disp = displacements(&reg);
        for per_point in &disp {
            for d in per_point {
                assert_abs_diff_eq!(d.umag, 2.0, epsilon = 1e-9);
                assert_abs_diff_eq!(d.ux.abs(), 2.0, epsilon = 1e-9);
                assert_abs_diff_eq!(d.uy, 0.0, epsilon = 1e-9);
                assert_abs_diff_eq!(d.uz, 0.0, epsilon = 1e-9);
            }
        }
        // Static patient: all displacement features zero.
        let static_points: [[Vector3<f64>; NUM_PHASES]; NUM_POINTS] =
            std::array::from_fn(|pi| [base[pi]; NUM_PHASES]);
        let set = crate::ingest::LandmarkSet::new("s".into(), 0, static_points).unwrap();
        let disp = displacements(&register_patient(&set).unwrap());
        for per_point in &disp {
            for d in per_point {
                assert_abs_diff_eq!(d.umag, 0.0, epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn non_finite_intermediate_names_the_feature() {
        let angles = [90.0f64, 270.0, 200.0, 20.0, 160.0, 340.0];
        let base: Vec<Vector3<f64>> = angles
            .iter()
            .map(|ang| {
                let t = ang.to_radians();
                Vector3::new(24.0 * t.cos(), 20.0 * t.sin(), 0.0)
            })
            .collect();
        let points: [[Vector3<f64>; NUM_PHASES]; NUM_POINTS] =
            std::array::from_fn(|pi| [base[pi]; NUM_PHASES]);
        let set = crate::ingest::LandmarkSet::new("t".into(), 0, points).unwrap();
        let mut reg = register_patient(&set).unwrap();
        reg[2].plane.normal.x = f64::NAN;
        let err = extract_features("t", 0, &reg).unwrap_err();
        assert!(err.to_string().contains("n_x_CP10"), "got: {err}");
    }
}
