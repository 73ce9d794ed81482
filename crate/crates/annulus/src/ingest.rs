//! Landmark dataset parsing and pixel → patient coordinate conversion.
//!
//! Landmark files follow the `annulus-landmarks/1` schema: per patient, the
//! six anatomical insertion points (P0..P5) at the six labeled cardiac
//! phases {0, 5, 10, 15, 20, 25}. Points may be given either as real-valued
//! pixel indices plus per-view DICOM geometry, or directly as patient
//! coordinates in mm. Mixing both conventions within one patient is
//! rejected.

use std::collections::HashMap;
use std::path::Path;

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::{Error, Result, NUM_PHASES, NUM_POINTS, PHASES};

pub const SCHEMA_VERSION: &str = "annulus-landmarks/1";

const UNIT_TOL: f64 = 1e-6;

/// DICOM-derived geometry of one long-axis view.
///
/// `row_dir` is the direction of increasing column index (first triplet of
/// ImageOrientationPatient), `col_dir` the direction of increasing row index
/// (second triplet). `origin` is ImagePositionPatient in mm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ViewGeometry {
    pub origin: [f64; 3],
    pub row_dir: [f64; 3],
    pub col_dir: [f64; 3],
    pub row_spacing: f64,
    pub col_spacing: f64,
}

impl ViewGeometry {
    pub fn validate(&self) -> Result<()> {
        let rd = Vector3::from(self.row_dir);
        let cd = Vector3::from(self.col_dir);
        for v in self
            .origin
            .iter()
            .chain(self.row_dir.iter())
            .chain(self.col_dir.iter())
            .chain([&self.row_spacing, &self.col_spacing])
        {
            if !v.is_finite() {
                return Err(Error::input("view geometry contains non-finite values"));
            }
        }
        if (rd.norm() - 1.0).abs() > UNIT_TOL {
            return Err(Error::input(format!(
                "row_dir is not unit-norm (|v| = {})",
                rd.norm()
            )));
        }
        if (cd.norm() - 1.0).abs() > UNIT_TOL {
            return Err(Error::input(format!(
                "col_dir is not unit-norm (|v| = {})",
                cd.norm()
            )));
        }
        if rd.dot(&cd).abs() > UNIT_TOL {
            return Err(Error::input(format!(
                "row_dir and col_dir are not orthogonal (dot = {})",
                rd.dot(&cd)
            )));
        }
        if self.row_spacing <= 0.0 || self.col_spacing <= 0.0 {
            return Err(Error::input("pixel spacings must be > 0"));
        }
        Ok(())
    }
}

/// Map a real-valued (row, col) pixel index to patient coordinates in mm.
///
/// Standard DICOM 2D mapping:
/// `origin + col · col_spacing · row_dir + row · row_spacing · col_dir`.
pub fn pixel_to_patient(row: f64, col: f64, geom: &ViewGeometry) -> Result<Vector3<f64>> {
    if !row.is_finite() || !col.is_finite() {
        return Err(Error::input("non-finite pixel index"));
    }
    geom.validate()?;
    let rd = Vector3::from(geom.row_dir);
    let cd = Vector3::from(geom.col_dir);
    Ok(Vector3::from(geom.origin) + rd * (col * geom.col_spacing) + cd * (row * geom.row_spacing))
}

/// A validated per-patient landmark set: 6 points × 6 phases in patient
/// coordinates (mm).
#[derive(Debug, Clone, PartialEq)]
pub struct LandmarkSet {
    pub patient_id: String,
    /// 0 = No MR, 1 = MR.
    pub label: u8,
    /// Indexed `[point][phase_index]` with phases ordered per [`PHASES`].
    points: [[Vector3<f64>; NUM_PHASES]; NUM_POINTS],
}

impl LandmarkSet {
    pub fn new(
        patient_id: String,
        label: u8,
        points: [[Vector3<f64>; NUM_PHASES]; NUM_POINTS],
    ) -> Result<Self> {
        if label > 1 {
            return Err(Error::schema(format!(
                "patient {patient_id}: label must be 0 or 1, got {label}"
            )));
        }
        for (pi, per_phase) in points.iter().enumerate() {
            for (fi, p) in per_phase.iter().enumerate() {
                if !(p.x.is_finite() && p.y.is_finite() && p.z.is_finite()) {
                    return Err(Error::schema(format!(
                        "patient {patient_id}: non-finite coordinate at P{pi}/CP{}",
                        PHASES[fi]
                    )));
                }
            }
        }
        Ok(Self {
            patient_id,
            label,
            points,
        })
    }

    /// Point `P<point>` at phase index `phase_idx` (0..6 over [`PHASES`]).
    pub fn point(&self, point: usize, phase_idx: usize) -> Vector3<f64> {
        self.points[point][phase_idx]
    }

    /// The 6 points of one phase, ordered P0..P5.
    pub fn phase_points(&self, phase_idx: usize) -> [Vector3<f64>; NUM_POINTS] {
        std::array::from_fn(|pi| self.points[pi][phase_idx])
    }
}

// ── File schema (raw, serde-facing) ────────────────────────────────────────

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LandmarkFile {
    pub schema: String,
    /// Provenance of generated files (tool version, seed, config hash).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub meta: Option<FileMeta>,
    pub patients: Vec<PatientRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FileMeta {
    pub tool_version: String,
    pub seed: u64,
    pub config_hash: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PatientRecord {
    pub id: String,
    pub label: u8,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub views: Vec<ViewRecord>,
    pub points: Vec<PointRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ViewRecord {
    pub view: String,
    pub geometry: ViewGeometry,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointRecord {
    pub name: String,
    pub phase: u8,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pixel: Option<PixelCoord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub patient_xyz: Option<[f64; 3]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PixelCoord {
    pub row: f64,
    pub col: f64,
    pub view: String,
}

// ── Loading ────────────────────────────────────────────────────────────────

/// Load and validate a landmark dataset from a file.
pub fn load_dataset(path: &Path) -> Result<Vec<LandmarkSet>> {
    let text = std::fs::read_to_string(path)?;
    parse_dataset(&text)
}

/// Parse a landmark dataset from its textual form.
pub fn parse_dataset(text: &str) -> Result<Vec<LandmarkSet>> {
    let file: LandmarkFile =
        serde_json::from_str(text).map_err(|e| Error::schema(format!("landmark file: {e}")))?;
    if file.schema != SCHEMA_VERSION {
        return Err(Error::schema(format!(
            "unsupported schema {:?}, expected {SCHEMA_VERSION:?}",
            file.schema
        )));
    }
    file.patients.iter().map(validate_patient).collect()
}

/// Per-patient failures from lenient parsing: (patient id, error).
pub type PatientFailures = Vec<(String, Error)>;

/// Parse a dataset but keep going past invalid patients, returning the
/// valid sets plus per-patient errors.
pub fn parse_dataset_lenient(text: &str) -> Result<(Vec<LandmarkSet>, PatientFailures)> {
    let file: LandmarkFile =
        serde_json::from_str(text).map_err(|e| Error::schema(format!("landmark file: {e}")))?;
    if file.schema != SCHEMA_VERSION {
        return Err(Error::schema(format!(
            "unsupported schema {:?}, expected {SCHEMA_VERSION:?}",
            file.schema
        )));
    }
    let mut ok = Vec::new();
    let mut failed = Vec::new();
    for rec in &file.patients {
        match validate_patient(rec) {
            Ok(set) => ok.push(set),
            Err(e) => failed.push((rec.id.clone(), e)),
        }
    }
    Ok((ok, failed))
}

fn point_index(name: &str) -> Option<usize> {
    match name {
        "P0" => Some(0),
        "P1" => Some(1),
        "P2" => Some(2),
        "P3" => Some(3),
        "P4" => Some(4),
        "P5" => Some(5),
        _ => None,
    }
}

fn phase_index(phase: u8) -> Option<usize> {
    PHASES.iter().position(|&p| p == phase)
}

fn validate_patient(rec: &PatientRecord) -> Result<LandmarkSet> {
    let id = &rec.id;
    let views: HashMap<&str, &ViewGeometry> = rec
        .views
        .iter()
        .map(|v| (v.view.as_str(), &v.geometry))
        .collect();
    for (name, geom) in &views {
        geom.validate()
            .map_err(|e| Error::schema(format!("patient {id}: view {name}: {e}")))?;
    }

    let mut filled = [[false; NUM_PHASES]; NUM_POINTS];
    let mut points = [[Vector3::zeros(); NUM_PHASES]; NUM_POINTS];
    let mut saw_pixel = false;
    let mut saw_xyz = false;

    for pt in &rec.points {
        let pi = point_index(&pt.name).ok_or_else(|| {
            Error::schema(format!("patient {id}: unknown point name {:?}", pt.name))
        })?;
        let fi = phase_index(pt.phase).ok_or_else(|| {
            Error::schema(format!(
                "patient {id}: phase {} is not one of {PHASES:?}",
                pt.phase
            ))
        })?;
        if filled[pi][fi] {
            return Err(Error::schema(format!(
                "patient {id}: duplicate entry for {}/CP{}",
                pt.name, pt.phase
            )));
        }
        let coord = match (&pt.pixel, &pt.patient_xyz) {
            (Some(_), Some(_)) => {
                return Err(Error::schema(format!(
                    "patient {id}: {}/CP{} has both pixel and patient_xyz",
                    pt.name, pt.phase
                )))
            }
            (None, None) => {
                return Err(Error::schema(format!(
                    "patient {id}: {}/CP{} has neither pixel nor patient_xyz",
                    pt.name, pt.phase
                )))
            }
            (Some(px), None) => {
                saw_pixel = true;
                let geom = views.get(px.view.as_str()).ok_or_else(|| {
                    Error::schema(format!(
                        "patient {id}: {}/CP{} references view {:?} with no geometry block",
                        pt.name, pt.phase, px.view
                    ))
                })?;
                pixel_to_patient(px.row, px.col, geom)
                    .map_err(|e| Error::schema(format!("patient {id}: {}/CP{}: {e}", pt.name, pt.phase)))?
            }
            (None, Some(xyz)) => {
                saw_xyz = true;
                Vector3::from(*xyz)
            }
        };
        points[pi][fi] = coord;
        filled[pi][fi] = true;
    }

    if saw_pixel && saw_xyz {
        return Err(Error::input(format!(
            "patient {id}: mixed pixel and patient_xyz conventions in one patient"
        )));
    }

    for (pi, per_phase) in filled.iter().enumerate() {
        for (fi, &ok) in per_phase.iter().enumerate() {
            if !ok {
                return Err(Error::schema(format!(
                    "patient {id}: missing P{pi}/CP{}",
                    PHASES[fi]
                )));
            }
        }
    }

    LandmarkSet::new(id.clone(), rec.label, points)
}

/// Serialize a landmark file to its textual form (pretty JSON).
pub fn write_dataset(file: &LandmarkFile) -> String {
    let mut out = serde_json::to_string_pretty(file).expect("landmark file serializes");
    out.push('\n');
    out
}
