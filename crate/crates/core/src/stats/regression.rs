//! Ordinary least squares and grouped standardized-beta regressions.
//!
//! The grouped construction fits one OLS per relatedness level on z-scored
//! variables and reports the per-group betas plus their mean; this is the
//! crate's declared stand-in for a mixed-effects model.

use serde::Serialize;

use super::{t_critical_975, two_sided_t_pvalue, StatsError};
use crate::graph::{AttrId, LanguageGraph, RelatednessLevel};

/// One fitted coefficient.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Coefficient {
    pub name: String,
    pub estimate: f64,
    pub std_err: f64,
    pub ci95: (f64, f64),
    pub t: f64,
    pub p_value: f64,
}

/// A full OLS fit; `coefficients[0]` is the intercept.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OlsFit {
    pub coefficients: Vec<Coefficient>,
    pub n: usize,
    pub df_resid: usize,
    pub r_squared: f64,
}

/// Standardized beta of `predictor` on `target` for one relatedness group
/// (or "all"/"mean").
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BetaResult {
    pub target: String,
    pub predictor: String,
    pub controls: Vec<String>,
    pub group: String,
    pub beta: f64,
    pub ci95: (f64, f64),
    /// `None` on the aggregated mean row.
    pub p_value: Option<f64>,
    pub n: usize,
}

/// Cholesky factorization of a symmetric positive-definite matrix, failing
/// on (numerically) rank-deficient input.
fn cholesky(matrix: &[Vec<f64>]) -> Result<Vec<Vec<f64>>, StatsError> {
    let p = matrix.len();
    let max_diag = matrix
        .iter()
        .enumerate()
        .map(|(i, row)| row[i].abs())
        .fold(0.0f64, f64::max);
    let tol = max_diag * 1e-10;
    let mut l = vec![vec![0.0; p]; p];
    for i in 0..p {
        for j in 0..=i {
            let mut sum = matrix[i][j];
            for k in 0..j {
                sum -= l[i][k] * l[j][k];
            }
            if i == j {
                if sum <= tol {
                    return Err(StatsError::RankDeficient(format!(
                        "pivot {sum:.3e} at column {i}"
                    )));
                }
                l[i][j] = sum.sqrt();
            } else {
                l[i][j] = sum / l[j][j];
            }
        }
    }
    Ok(l)
}

/// Solve L L^T x = b given the Cholesky factor L.
fn cholesky_solve(l: &[Vec<f64>], b: &[f64]) -> Vec<f64> {
    let p = b.len();
    let mut y = vec![0.0; p];
    for i in 0..p {
        let mut sum = b[i];
        for k in 0..i {
            sum -= l[i][k] * y[k];
        }
        y[i] = sum / l[i][i];
    }
    let mut x = vec![0.0; p];
    for i in (0..p).rev() {
        let mut sum = y[i];
        for k in (i + 1)..p {
            sum -= l[k][i] * x[k];
        }
        x[i] = sum / l[i][i];
    }
    x
}

/// Diagonal of (X^T X)^-1 via p solves against unit vectors.
fn inverse_diagonal(l: &[Vec<f64>]) -> Vec<f64> {
    let p = l.len();
    (0..p)
        .map(|i| {
            let mut e = vec![0.0; p];
            e[i] = 1.0;
            cholesky_solve(l, &e)[i]
        })
        .collect()
}

/// Fit `y ~ 1 + predictors` by solving the normal equations.
///
/// Requires every column to match `y` in length, n > p + 1 and a full-rank
/// design. Confidence intervals and p-values come from the t distribution
/// with n - p degrees of freedom.
pub fn ols(predictors: &[(String, Vec<f64>)], y: &[f64]) -> Result<OlsFit, StatsError> {
    let n = y.len();
    for (name, col) in predictors {
        if col.len() != n {
            return Err(StatsError::LengthMismatch { a: col.len(), b: n });
        }
        if n > 0 {
            let first = col[0];
            if col.iter().all(|&v| v == first) {
                return Err(StatsError::DegenerateSeries(name.clone()));
            }
        }
    }
    let p = predictors.len() + 1;
    if n <= p + 1 {
        return Err(StatsError::TooFewSamples { needed: p + 2, found: n });
    }

    // Design column j: intercept for j = 0, predictors after.
    let column = |j: usize, i: usize| -> f64 {
        if j == 0 {
            1.0
        } else {
            predictors[j - 1].1[i]
        }
    };

    let mut xtx = vec![vec![0.0; p]; p];
    let mut xty = vec![0.0; p];
    for i in 0..n {
        for j in 0..p {
            let xj = column(j, i);
            xty[j] += xj * y[i];
            for k in j..p {
                xtx[j][k] += xj * column(k, i);
            }
        }
    }
    for j in 0..p {
        for k in 0..j {
            xtx[j][k] = xtx[k][j];
        }
    }

    let l = cholesky(&xtx)?;
    let beta = cholesky_solve(&l, &xty);

    let mean_y = y.iter().sum::<f64>() / n as f64;
    let mut rss = 0.0;
    let mut tss = 0.0;
    for i in 0..n {
        let fitted: f64 = (0..p).map(|j| beta[j] * column(j, i)).sum();
        rss += (y[i] - fitted).powi(2);
        tss += (y[i] - mean_y).powi(2);
    }
    let df_resid = n - p;
    let sigma2 = rss / df_resid as f64;
    let inv_diag = inverse_diagonal(&l);
    let t_crit = t_critical_975(df_resid as f64);

    let mut coefficients = Vec::with_capacity(p);
    for j in 0..p {
        let name = if j == 0 {
            "intercept".to_string()
        } else {
            predictors[j - 1].0.clone()
        };
        let estimate = beta[j];
        let std_err = (sigma2 * inv_diag[j]).max(0.0).sqrt();
        let t = if std_err > 0.0 {
            estimate / std_err
        } else if estimate.abs() > 0.0 {
            f64::INFINITY * estimate.signum()
        } else {
            0.0
        };
        let p_value = if std_err > 0.0 {
            two_sided_t_pvalue(t, df_resid as f64)
        } else if estimate.abs() > 0.0 {
            0.0
        } else {
            1.0
        };
        coefficients.push(Coefficient {
            name,
            estimate,
            std_err,
            ci95: (estimate - t_crit * std_err, estimate + t_crit * std_err),
            t,
            p_value,
        });
    }
    Ok(OlsFit {
        coefficients,
        n,
        df_resid,
        r_squared: if tss > 0.0 { 1.0 - rss / tss } else { 0.0 },
    })
}

fn zscore(name: &str, values: &[f64]) -> Result<Vec<f64>, StatsError> {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    if var <= 0.0 {
        return Err(StatsError::DegenerateSeries(name.to_string()));
    }
    let sd = var.sqrt();
    Ok(values.iter().map(|v| (v - mean) / sd).collect())
}

/// Z-score `target`, `predictor` and `controls` over the edges carrying all
/// of them, then regress `target ~ predictor + controls`.
///
/// With `by_relatedness`, one OLS is fitted per relatedness level (groups
/// too small to fit are skipped with a warning) and a final `mean` row
/// aggregates the per-group betas. Without it a single `all` row is
/// returned.
pub fn standardized_beta(
    graph: &LanguageGraph,
    target: AttrId,
    predictor: AttrId,
    controls: &[AttrId],
    by_relatedness: bool,
) -> Result<Vec<BetaResult>, StatsError> {
    let mut wanted: Vec<AttrId> = vec![target, predictor];
    wanted.extend_from_slice(controls);

    // Analyzed subset: all attributes present.
    let mut columns: Vec<Vec<f64>> = vec![Vec::new(); wanted.len()];
    let mut levels: Vec<RelatednessLevel> = Vec::new();
    'edges: for (_, _, attrs) in graph.edges() {
        let mut row = Vec::with_capacity(wanted.len());
        for &attr in &wanted {
            match attrs.value(attr) {
                Some(v) => row.push(v),
                None => continue 'edges,
            }
        }
        for (col, v) in columns.iter_mut().zip(row) {
            col.push(v);
        }
        levels.push(attrs.relatedness);
    }
    let attr_list = wanted
        .iter()
        .map(|a| a.as_string())
        .collect::<Vec<_>>()
        .join(", ");
    if columns[0].is_empty() {
        return Err(StatsError::EmptyGroup(attr_list));
    }
    let standardized: Vec<Vec<f64>> = wanted
        .iter()
        .zip(&columns)
        .map(|(attr, col)| zscore(&attr.as_string(), col))
        .collect::<Result<_, _>>()?;

    let control_names: Vec<String> = controls.iter().map(|c| c.as_string()).collect();
    let fit_group = |indices: &[usize], group: &str| -> Result<Option<BetaResult>, StatsError> {
        let needed = wanted.len() + 2; // predictors + intercept + 1 df
        if indices.len() < needed {
            log::warn!(
                "standardized_beta: group `{group}` has {} edges, needs {needed}; skipping",
                indices.len()
            );
            return Ok(None);
        }
        let y: Vec<f64> = indices.iter().map(|&i| standardized[0][i]).collect();
        let mut predictors: Vec<(String, Vec<f64>)> = Vec::with_capacity(wanted.len() - 1);
        for (j, attr) in wanted.iter().enumerate().skip(1) {
            predictors.push((
                attr.as_string(),
                indices.iter().map(|&i| standardized[j][i]).collect(),
            ));
        }
        let fit = ols(&predictors, &y)?;
        let coef = &fit.coefficients[1];
        Ok(Some(BetaResult {
            target: target.as_string(),
            predictor: predictor.as_string(),
            controls: control_names.clone(),
            group: group.to_string(),
            beta: coef.estimate,
            ci95: coef.ci95,
            p_value: Some(coef.p_value),
            n: indices.len(),
        }))
    };

    let mut results = Vec::new();
    if by_relatedness {
        for level in RelatednessLevel::ALL {
            let indices: Vec<usize> = levels
                .iter()
                .enumerate()
                .filter(|(_, &l)| l == level)
                .map(|(i, _)| i)
                .collect();
            if indices.is_empty() {
                continue;
            }
            if let Some(result) = fit_group(&indices, level.as_str())? {
                results.push(result);
            }
        }
        if results.is_empty() {
            return Err(StatsError::EmptyGroup(attr_list));
        }
        let k = results.len() as f64;
        let mean = BetaResult {
            target: target.as_string(),
            predictor: predictor.as_string(),
            controls: control_names,
            group: "mean".to_string(),
            beta: results.iter().map(|r| r.beta).sum::<f64>() / k,
            ci95: (
                results.iter().map(|r| r.ci95.0).sum::<f64>() / k,
                results.iter().map(|r| r.ci95.1).sum::<f64>() / k,
            ),
            p_value: None,
            n: results.iter().map(|r| r.n).sum(),
        };
        results.push(mean);
    } else {
        let indices: Vec<usize> = (0..levels.len()).collect();
        match fit_group(&indices, "all")? {
            Some(result) => results.push(result),
            None => return Err(StatsError::EmptyGroup(attr_list)),
        }
    }
    Ok(results)
}
