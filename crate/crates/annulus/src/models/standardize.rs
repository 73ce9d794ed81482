//! Per-feature standardization with training-split statistics.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

const CONST_EPS: f64 = 1e-12;

/// Per-feature mean and standard deviation. Constant features are flagged
/// by `std == 0` and transform to 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Standardizer {
    pub means: Vec<f64>,
    pub stds: Vec<f64>,
}

impl Standardizer {
    /// Fit on training rows (population standard deviation).
    pub fn fit(rows: &[Vec<f64>]) -> Result<Standardizer> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::input("standardizer: empty training set"));
        }
        let k = rows[0].len();
        let nf = n as f64;
        let mut means = vec![0.0; k];
        for row in rows {
            for (m, v) in means.iter_mut().zip(row) {
                *m += v;
            }
        }
        for m in &mut means {
            *m /= nf;
        }
        let mut stds = vec![0.0; k];
        for row in rows {
            for ((s, v), m) in stds.iter_mut().zip(row).zip(&means) {
                *s += (v - m).powi(2);
            }
        }
        for s in &mut stds {
            *s = (*s / nf).sqrt();
            if *s < CONST_EPS {
                *s = 0.0;
            }
        }
        Ok(Standardizer { means, stds })
    }

    pub fn transform_row(&self, row: &[f64]) -> Vec<f64> {
        row.iter()
            .zip(&self.means)
            .zip(&self.stds)
            .map(|((v, m), s)| if *s == 0.0 { 0.0 } else { (v - m) / s })
            .collect()
    }

    pub fn transform(&self, rows: &[Vec<f64>]) -> Vec<Vec<f64>> {
        rows.iter().map(|r| self.transform_row(r)).collect()
    }
}
