//! Feature matrix CSV interface: header row of canonical feature names
//! prefixed by `patient_id,label`, one row per patient, full-precision
//! decimal values. Leading `#` lines carry run metadata and are ignored on
//! read.

use std::io::Write;
use std::path::Path;

use crate::features::FeatureVector;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMatrix {
    pub ids: Vec<String>,
    pub labels: Vec<u8>,
    pub names: Vec<String>,
    /// Row-major, one row per patient.
    pub rows: Vec<Vec<f64>>,
}

impl FeatureMatrix {
    pub fn from_vectors(vectors: &[FeatureVector]) -> Self {
        FeatureMatrix {
            ids: vectors.iter().map(|v| v.patient_id.clone()).collect(),
            labels: vectors.iter().map(|v| v.label).collect(),
            names: super::feature_names().to_vec(),
            rows: vectors.iter().map(|v| v.values.clone()).collect(),
        }
    }

    pub fn n_samples(&self) -> usize {
        self.rows.len()
    }

    pub fn n_features(&self) -> usize {
        self.names.len()
    }

    /// One feature column over all samples.
    pub fn column(&self, j: usize) -> Vec<f64> {
        self.rows.iter().map(|r| r[j]).collect()
    }

    /// A sub-matrix restricted to the given row indices.
    pub fn take_rows(&self, indices: &[usize]) -> FeatureMatrix {
        FeatureMatrix {
            ids: indices.iter().map(|&i| self.ids[i].clone()).collect(),
            labels: indices.iter().map(|&i| self.labels[i]).collect(),
            names: self.names.clone(),
            rows: indices.iter().map(|&i| self.rows[i].clone()).collect(),
        }
    }

    /// Serialize to CSV text. `comments` become leading `# ` lines.
    pub fn to_csv(&self, comments: &[String]) -> String {
        let mut out = String::new();
        for c in comments {
            out.push_str("# ");
            out.push_str(c);
            out.push('\n');
        }
        out.push_str("patient_id,label");
        for name in &self.names {
            out.push(',');
            out.push_str(name);
        }
        out.push('\n');
        for ((id, label), row) in self.ids.iter().zip(&self.labels).zip(&self.rows) {
            out.push_str(id);
            out.push(',');
            out.push_str(&label.to_string());
            for v in row {
                out.push(',');
                out.push_str(&format_full(*v));
            }
            out.push('\n');
        }
        out
    }

    pub fn write_csv(&self, path: &Path, comments: &[String]) -> Result<()> {
        let mut f = std::fs::File::create(path)?;
        f.write_all(self.to_csv(comments).as_bytes())?;
        Ok(())
    }

    pub fn parse_csv(text: &str) -> Result<FeatureMatrix> {
        let mut lines = text
            .lines()
            .filter(|l| !l.starts_with('#') && !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::schema("feature CSV is empty"))?;
        let mut cols = header.split(',');
        if cols.next() != Some("patient_id") || cols.next() != Some("label") {
            return Err(Error::schema(
                "feature CSV header must start with patient_id,label",
            ));
        }
        let names: Vec<String> = cols.map(str::to_string).collect();
        if names.is_empty() {
            return Err(Error::schema("feature CSV has no feature columns"));
        }

        let mut ids = Vec::new();
        let mut labels = Vec::new();
        let mut rows = Vec::new();
        for (lineno, line) in lines.enumerate() {
            let mut fields = line.split(',');
            let id = fields
                .next()
                .ok_or_else(|| Error::schema(format!("row {lineno}: missing patient_id")))?;
            let label: u8 = fields
                .next()
                .and_then(|s| s.parse().ok())
                .filter(|&l| l <= 1)
                .ok_or_else(|| Error::schema(format!("row {lineno}: bad label")))?;
            let values: Vec<f64> = fields
                .map(|s| {
                    s.parse::<f64>()
                        .map_err(|_| Error::schema(format!("row {lineno}: bad value {s:?}")))
                })
                .collect::<Result<_>>()?;
            if values.len() != names.len() {
                return Err(Error::schema(format!(
                    "row {lineno}: expected {} values, got {}",
                    names.len(),
                    values.len()
                )));
            }
            ids.push(id.to_string());
            labels.push(label);
            rows.push(values);
        }
        Ok(FeatureMatrix {
            ids,
            labels,
            names,
            rows,
        })
    }

    pub fn read_csv(path: &Path) -> Result<FeatureMatrix> {
        let text = std::fs::read_to_string(path)?;
        Self::parse_csv(&text)
    }
}

/// Shortest decimal representation that round-trips the f64 exactly.
fn format_full(v: f64) -> String {
    format!("{v}")
}

#[cfg(test)]
mod tests {
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;

    fn small_matrix() -> FeatureMatrix {
        FeatureMatrix {
            ids: vec!["a".into(), "b".into()],
            labels: vec![0, 1],
            names: vec!["f1".into(), "f2".into()],
            rows: vec![vec![1.5, -2.25], vec![0.1, 1e-17]],
        }
    }

    #[test]
    fn csv_round_trips_bit_exactly() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut m = small_matrix();
        // adversarial values: shortest-repr formatting must round-trip bits
        m.rows[0][0] = rng.gen::<f64>() * 1e-300;
        m.rows[0][1] = -rng.gen::<f64>() * 1e300;
        m.rows[1][0] = 0.1 + 0.2;
        let text = m.to_csv(&["seed 42".into()]);
        let back = FeatureMatrix::parse_csv(&text).unwrap();
        assert_eq!(m, back);
        for (a, b) in m.rows.iter().flatten().zip(back.rows.iter().flatten()) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
        // comments survive as ignorable lines
        assert!(text.starts_with("# seed 42\n"));
    }

    #[test]
    fn header_must_start_with_id_and_label() {
        assert!(FeatureMatrix::parse_csv("id,label,f1\nx,0,1\n").is_err());
        assert!(FeatureMatrix::parse_csv("").is_err());
        assert!(FeatureMatrix::parse_csv("patient_id,label\n").is_err());
    }

    #[test]
    fn malformed_rows_are_rejected() {
        assert!(FeatureMatrix::parse_csv("patient_id,label,f1\nx,2,1\n").is_err());
        assert!(FeatureMatrix::parse_csv("patient_id,label,f1\nx,0,zzz\n").is_err());
        assert!(FeatureMatrix::parse_csv("patient_id,label,f1\nx,0,1,9\n").is_err());
    }

    #[test]
    fn take_rows_and_column_views() {
        let m = small_matrix();
        let sub = m.take_rows(&[1]);
        assert_eq!(sub.ids, vec!["b".to_string()]);
        assert_eq!(sub.rows, vec![vec![0.1, 1e-17]]);
        assert_eq!(m.column(1), vec![-2.25, 1e-17]);
    }
}
