//! Two-class linear discriminant analysis with a pooled, lightly
//! regularized covariance.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Fitted LDA parameters. The decision rule `sign(w·x + c)` reproduces the
/// Bayes rule under the fitted shared-covariance Gaussians.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LdaModel {
    pub class_means: [Vec<f64>; 2],
    /// Pooled covariance, row-major k×k, after regularization.
    pub pooled_covariance: Vec<Vec<f64>>,
    pub priors: [f64; 2],
    pub weights: Vec<f64>,
    pub intercept: f64,
}

/// Fit LDA on standardized features. Requires ≥ 2 samples per class.
///
/// The pooled covariance is regularized by adding λI with
/// λ = 1e-6 · trace(Σ)/k.
pub fn lda_fit(x: &[Vec<f64>], y: &[u8]) -> Result<LdaModel> {
    if x.len() != y.len() {
        return Err(Error::input("lda_fit: length mismatch"));
    }
    let n = x.len();
    let k = x.first().map(|r| r.len()).unwrap_or(0);
    if k == 0 {
        return Err(Error::input("lda_fit: no features"));
    }
    let n1 = y.iter().filter(|&&l| l == 1).count();
    let n0 = n - n1;
    if n0 < 2 || n1 < 2 {
        return Err(Error::input("lda_fit: need >= 2 samples per class"));
    }

    let mut means = [vec![0.0; k], vec![0.0; k]];
    for (row, &l) in x.iter().zip(y) {
        for (m, v) in means[l as usize].iter_mut().zip(row) {
            *m += v;
        }
    }
    for (mean, count) in means.iter_mut().zip([n0, n1]) {
        for m in mean.iter_mut() {
            *m /= count as f64;
        }
    }

    // Pooled within-class scatter / (n − 2)
    let mut cov = DMatrix::<f64>::zeros(k, k);
    for (row, &l) in x.iter().zip(y) {
        let d = DVector::from_iterator(k, row.iter().zip(&means[l as usize]).map(|(v, m)| v - m));
        cov += &d * d.transpose();
    }
    cov /= (n - 2) as f64;

    let lambda = 1e-6 * cov.trace() / k as f64;
    for i in 0..k {
        cov[(i, i)] += lambda;
    }

    let mu0 = DVector::from_column_slice(&means[0]);
    let mu1 = DVector::from_column_slice(&means[1]);
    let chol = cov.clone().cholesky().ok_or_else(|| {
        Error::numerical("lda_fit: pooled covariance singular after regularization")
    })?;
    let w = chol.solve(&(&mu1 - &mu0));

    let priors = [n0 as f64 / n as f64, n1 as f64 / n as f64];
    let intercept = -0.5 * w.dot(&(&mu0 + &mu1)) + (priors[1] / priors[0]).ln();

    Ok(LdaModel {
        class_means: means,
        pooled_covariance: (0..k)
            .map(|i| (0..k).map(|j| cov[(i, j)]).collect())
            .collect(),
        priors,
        weights: w.iter().copied().collect(),
        intercept,
    })
}

/// Predicted labels and class-1 posterior scores for a batch.
pub fn lda_predict(model: &LdaModel, x: &[Vec<f64>]) -> Result<(Vec<u8>, Vec<f64>)> {
    let k = model.weights.len();
    let mut labels = Vec::with_capacity(x.len());
    let mut scores = Vec::with_capacity(x.len());
    for row in x {
        if row.len() != k {
            return Err(Error::input(format!(
                "lda_predict: expected {k} features, got {}",
                row.len()
            )));
        }
        let discriminant: f64 = row
            .iter()
            .zip(&model.weights)
            .map(|(v, w)| v * w)
            .sum::<f64>()
            + model.intercept;
        let posterior = 1.0 / (1.0 + (-discriminant).exp());
        labels.push(u8::from(posterior > 0.5));
        scores.push(posterior);
    }
    Ok((labels, scores))
}
