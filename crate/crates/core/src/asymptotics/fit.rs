//! Least-squares fits used by the counting experiments.

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    /// Standard error of the slope (zero for two points or an exact fit).
    pub slope_stderr: f64,
}

/// Ordinary least squares `y ≈ slope·x + intercept`.
pub fn linear_fit(x: &[f64], y: &[f64]) -> Result<LinearFit> {
    if x.len() != y.len() {
        return Err(Error::DegenerateFit(format!(
            "{} abscissae but {} ordinates",
            x.len(),
            y.len()
        )));
    }
    let n = x.len();
    if n < 2 {
        return Err(Error::DegenerateFit(format!("need at least 2 points, got {n}")));
    }
    let nf = n as f64;
    let mx = x.iter().sum::<f64>() / nf;
    let my = y.iter().sum::<f64>() / nf;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    let mut syy = 0.0;
    for (&a, &b) in x.iter().zip(y) {
        sxx += (a - mx) * (a - mx);
        sxy += (a - mx) * (b - my);
        syy += (b - my) * (b - my);
    }
    if !(sxx > 1e-300) || !sxx.is_finite() {
        return Err(Error::DegenerateFit("abscissae have no spread".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = x
        .iter()
        .zip(y)
        .map(|(&a, &b)| {
            let r = b - (slope * a + intercept);
            r * r
        })
        .sum();
    let r_squared = if syy == 0.0 { 1.0 } else { 1.0 - ss_res / syy };
    let slope_stderr = if n > 2 { (ss_res / (nf - 2.0) / sxx).sqrt() } else { 0.0 };
    Ok(LinearFit {
        slope,
        intercept,
        r_squared,
        slope_stderr,
    })
}

/// Fit of a counting function `N` against `|ln E|`.
///
/// Requires at least four samples whose depths span two decades.
pub fn fit_log_slope(samples: &[(f64, usize)]) -> Result<LinearFit> {
    if samples.len() < 4 {
        return Err(Error::DegenerateFit(format!(
            "need at least 4 samples, got {}",
            samples.len()
        )));
    }
    if samples.iter().any(|&(e, _)| !(e > 0.0 && e.is_finite())) {
        return Err(Error::DegenerateFit("depths must be positive".into()));
    }
    let lo = samples.iter().map(|s| s.0).fold(f64::INFINITY, f64::min);
    let hi = samples.iter().map(|s| s.0).fold(0.0, f64::max);
    if hi / lo < 100.0 * (1.0 - 1e-12) {
        return Err(Error::DegenerateFit(format!(
            "depths span only {:.2} decades, need 2",
            (hi / lo).log10()
        )));
    }
    let x: Vec<f64> = samples.iter().map(|s| s.0.ln().abs()).collect();
    let y: Vec<f64> = samples.iter().map(|s| s.1 as f64).collect();
    linear_fit(&x, &y)
}

/// `n` depths spaced uniformly in `ln E` from `hi` down to `lo`.
pub fn log_spaced(hi: f64, lo: f64, n: usize) -> Vec<f64> {
    assert!(n >= 2 && hi > 0.0 && lo > 0.0);
    let (a, b) = (hi.ln(), lo.ln());
    (0..n)
        .map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_rounded_synthetic_slope() {
        let samples: Vec<(f64, usize)> = log_spaced(1e-2, 1e-8, 61)
            .into_iter()
            .map(|e| (e, (0.2 * e.ln().abs()).round() as usize))
            .collect();
        let fit = fit_log_slope(&samples).unwrap();
        assert!((fit.slope - 0.2).abs() < 0.01);
    }

    #[test]
    fn constant_counts_have_zero_slope() {
        let samples: Vec<(f64, usize)> = log_spaced(1e-1, 1e-5, 9).into_iter().map(|e| (e, 3)).collect();
        let fit = fit_log_slope(&samples).unwrap();
        assert_eq!(fit.slope, 0.0);
        assert_eq!(fit.intercept, 3.0);
    }

    #[test]
    fn rejects_degenerate_input() {
        assert!(fit_log_slope(&[(1e-1, 1), (1e-2, 2), (1e-3, 3)]).is_err());
        assert!(fit_log_slope(&[(1e-1, 1), (0.09, 2), (0.08, 3), (0.07, 3)]).is_err());
        assert!(linear_fit(&[1.0, 1.0], &[0.0, 1.0]).is_err());
    }

    #[test]
    fn exact_line() {
        let f = linear_fit(&[0.0, 1.0, 2.0, 3.0], &[1.0, 3.0, 5.0, 7.0]).unwrap();
        assert!((f.slope - 2.0).abs() < 1e-15 && (f.intercept - 1.0).abs() < 1e-15);
        assert!((f.r_squared - 1.0).abs() < 1e-15);
    }
}
