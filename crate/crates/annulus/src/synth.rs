//! Deterministic synthetic cohort generation.
//!
//! Each patient is an ellipse trajectory: six points at fixed anatomical
//! angles on a per-phase ellipse with a saddle offset z = s·cos(2θ), a
//! cumulative per-transition rigid translation, one random global pose, and
//! optional isotropic landmark noise. Ground-truth features are the pipeline
//! features of the noiseless points, so the σ = 0 round trip is exact by
//! construction.

use nalgebra::{Vector2, Vector3};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::features::{extract_features, FeatureMatrix, FeatureVector};
use crate::geometry::{ellipse_point, register_patient, rodrigues_rotation};
use crate::ingest::{LandmarkFile, LandmarkSet, PatientRecord, PointRecord, SCHEMA_VERSION};
use crate::{Error, Result, NUM_PHASES, NUM_POINTS, PHASES};

/// A normal distribution given as mean ± std.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dist {
    pub mean: f64,
    pub std: f64,
}

impl Dist {
    pub fn new(mean: f64, std: f64) -> Self {
        Dist { mean, std }
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> f64 {
        Normal::new(self.mean, self.std)
            .expect("validated std >= 0")
            .sample(rng)
    }
}

/// Per-cohort generation parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct CohortSpec {
    /// Patient id prefix ("noMR", "MR").
    pub prefix: String,
    /// Class label: 0 = No MR, 1 = MR.
    pub label: u8,
    pub n_patients: usize,
    /// Baseline semi-major / semi-minor axes, mm (anchored at CP10).
    pub a: Dist,
    pub b: Dist,
    /// Fractional (a, b) modulation per phase; entry for CP10 should be 1.
    pub profile: [f64; NUM_PHASES],
    /// Saddle amplitude s, mm: each point gets a perpendicular offset
    /// s·cos(2θ). With the default angles the cos(2θ) pattern has no tilt
    /// component, spans [−1, 0.766], and yields annular height ≈ 1.766·s.
    pub saddle: Dist,
    /// Rigid translation magnitude per transition (5−0 … 25−20), mm.
    pub displacement: [Dist; 5],
    /// Global pose: rotation angle uniform in [0, this], degrees.
    pub pose_rotation_deg: f64,
    /// Global pose: translation uniform in ±this per axis, mm.
    pub pose_translation_mm: f64,
    /// Isotropic Gaussian landmark noise σ, mm.
    pub noise_mm: f64,
    /// Anatomical angular positions of P0..P5 on the ellipse, degrees.
    pub point_angles_deg: [f64; NUM_POINTS],
}

/// Default anatomical angle assignment of P0..P5.
pub const DEFAULT_POINT_ANGLES: [f64; NUM_POINTS] = [90.0, 270.0, 200.0, 20.0, 160.0, 340.0];

impl CohortSpec {
    /// No-MR cohort anchored to the reported cohort means
    /// (a ≈ 21.6, b ≈ 19.5, height ≈ 5.99, u_mag(CP20−15) ≈ 3.92).
    pub fn default_no_mr(n_patients: usize, noise_mm: f64) -> CohortSpec {
        CohortSpec {
            prefix: "noMR".into(),
            label: 0,
            n_patients,
            a: Dist::new(21.6, 1.8),
            b: Dist::new(19.5, 1.6),
            profile: [1.0; NUM_PHASES],
            saddle: Dist::new(3.39, 1.0),
            displacement: [
                Dist::new(3.0, 1.1),
                Dist::new(4.0, 1.2),
                Dist::new(3.5, 1.1),
                Dist::new(3.92, 1.2),
                Dist::new(2.5, 0.9),
            ],
            pose_rotation_deg: 180.0,
            pose_translation_mm: 40.0,
            noise_mm,
            point_angles_deg: DEFAULT_POINT_ANGLES,
        }
    }

    /// MR cohort anchored to the reported cohort means
    /// (a ≈ 24.1, b ≈ 21.9, height ≈ 9.00, u_mag(CP20−15) ≈ 2.70).
    pub fn default_mr(n_patients: usize, noise_mm: f64) -> CohortSpec {
        CohortSpec {
            prefix: "MR".into(),
            label: 1,
            n_patients,
            a: Dist::new(24.1, 2.4),
            b: Dist::new(21.9, 2.0),
            profile: [1.0; NUM_PHASES],
            saddle: Dist::new(5.10, 1.4),
            displacement: [
                Dist::new(2.2, 0.9),
                Dist::new(3.0, 1.0),
                Dist::new(2.6, 0.9),
                Dist::new(2.70, 0.9),
                Dist::new(2.0, 0.8),
            ],
            pose_rotation_deg: 180.0,
            pose_translation_mm: 40.0,
            noise_mm,
            point_angles_deg: DEFAULT_POINT_ANGLES,
        }
    }

    fn validate(&self) -> Result<()> {
        let dists = [self.a, self.b, self.saddle]
            .into_iter()
            .chain(self.displacement);
        for d in dists {
            if d.std < 0.0 || !d.mean.is_finite() || !d.std.is_finite() {
                return Err(Error::input("cohort spec: invalid distribution"));
            }
        }
        if self.a.mean <= 0.0 || self.b.mean <= 0.0 || self.b.mean > self.a.mean {
            return Err(Error::input(
                "cohort spec: axis means must satisfy a >= b > 0",
            ));
        }
        if self.profile.iter().any(|&p| p <= 0.0) {
            return Err(Error::input("cohort spec: profile entries must be > 0"));
        }
        if self.noise_mm < 0.0 {
            return Err(Error::input("cohort spec: noise must be >= 0"));
        }
        if self.label > 1 {
            return Err(Error::input("cohort spec: label must be 0 or 1"));
        }
        Ok(())
    }
}

/// Generated cohorts: the landmark file (with noise applied) and the exact
/// pre-noise ground-truth feature vectors.
#[derive(Debug, Clone)]
pub struct SynthOutput {
    pub landmarks: LandmarkFile,
    pub ground_truth: Vec<FeatureVector>,
}

impl SynthOutput {
    /// Ground truth as a feature matrix with `gt_`-prefixed headers.
    pub fn ground_truth_matrix(&self) -> FeatureMatrix {
        let mut m = FeatureMatrix::from_vectors(&self.ground_truth);
        for name in &mut m.names {
            *name = format!("gt_{name}");
        }
        m
    }
}

/// Generate both cohorts deterministically. Patient `i` (global index over
/// No-MR then MR) draws from ChaCha stream `i` of `seed`.
pub fn generate_cohorts(no_mr: &CohortSpec, mr: &CohortSpec, seed: u64) -> Result<SynthOutput> {
    no_mr.validate()?;
    mr.validate()?;

    let mut patients = Vec::new();
    let mut ground_truth = Vec::new();
    let mut stream = 0u64;
    for spec in [no_mr, mr] {
        for i in 0..spec.n_patients {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(stream);
            stream += 1;
            let id = format!("{}_{i:03}", spec.prefix);
            let (record, gt) = generate_patient(&id, spec, &mut rng)?;
            patients.push(record);
            ground_truth.push(gt);
        }
    }

    Ok(SynthOutput {
        landmarks: LandmarkFile {
            schema: SCHEMA_VERSION.to_string(),
            meta: None,
            patients,
        },
        ground_truth,
    })
}

fn generate_patient(
    id: &str,
    spec: &CohortSpec,
    rng: &mut ChaCha8Rng,
) -> Result<(PatientRecord, FeatureVector)> {
    // Baseline axes; a >= b enforced by swap, floored away from zero.
    let mut a0 = spec.a.sample(rng).max(5.0);
    let mut b0 = spec.b.sample(rng).max(4.0);
    if b0 > a0 {
        std::mem::swap(&mut a0, &mut b0);
    }
    let saddle = spec.saddle.sample(rng).abs();

    // Cumulative rigid translation per phase.
    let mut offsets = [Vector3::zeros(); NUM_PHASES];
    for t in 0..5 {
        let mag = spec.displacement[t].sample(rng).max(0.0);
        offsets[t + 1] = offsets[t] + random_unit(rng) * mag;
    }

    // One global pose for the whole trajectory.
    let pose_axis = random_unit(rng);
    let pose_angle = rng.gen_range(0.0..=spec.pose_rotation_deg.max(1e-12));
    let pose_shift = Vector3::new(
        rng.gen_range(-spec.pose_translation_mm..=spec.pose_translation_mm.max(1e-12)),
        rng.gen_range(-spec.pose_translation_mm..=spec.pose_translation_mm.max(1e-12)),
        rng.gen_range(-spec.pose_translation_mm..=spec.pose_translation_mm.max(1e-12)),
    );

    let mut clean = [[Vector3::zeros(); NUM_PHASES]; NUM_POINTS];
    for (fi, _) in PHASES.iter().enumerate() {
        let a_p = a0 * spec.profile[fi];
        let b_p = (b0 * spec.profile[fi]).min(a_p);
        for (pi, &angle) in spec.point_angles_deg.iter().enumerate() {
            let in_plane = ellipse_point(
                Vector2::zeros(),
                a_p,
                b_p,
                0.0,
                angle.to_radians(),
            );
            let z = saddle * (2.0 * angle.to_radians()).cos();
            let local = Vector3::new(in_plane.x, in_plane.y, z) + offsets[fi];
            let posed = rodrigues_rotation(local, pose_axis, pose_angle)? + pose_shift;
            clean[pi][fi] = posed;
        }
    }

    // Ground truth = pipeline features of the noiseless points.
    let clean_set = LandmarkSet::new(id.to_string(), spec.label, clean)?;
    let gt = extract_features(id, spec.label, &register_patient(&clean_set)?)?;

    let noise = if spec.noise_mm > 0.0 {
        Some(Normal::new(0.0, spec.noise_mm).expect("validated sigma"))
    } else {
        None
    };
    let mut points = Vec::with_capacity(NUM_POINTS * NUM_PHASES);
    for (pi, per_phase) in clean.iter().enumerate() {
        for (fi, p) in per_phase.iter().enumerate() {
            let noisy = match &noise {
                Some(n) => p + Vector3::new(n.sample(rng), n.sample(rng), n.sample(rng)),
                None => *p,
            };
            points.push(PointRecord {
                name: format!("P{pi}"),
                phase: PHASES[fi],
                pixel: None,
                patient_xyz: Some([noisy.x, noisy.y, noisy.z]),
            });
        }
    }

    let record = PatientRecord {
        id: id.to_string(),
        label: spec.label,
        views: Vec::new(),
        points,
    };
    Ok((record, gt))
}

fn random_unit(rng: &mut ChaCha8Rng) -> Vector3<f64> {
    loop {
        let v = Vector3::new(
            rng.gen_range(-1.0..=1.0),
            rng.gen_range(-1.0..=1.0),
            rng.gen_range(-1.0..=1.0),
        );
        let n = v.norm();
        if n > 1e-3 && n <= 1.0 {
            return v / n;
        }
    }
}
