//! CSV and JSON renderings of sweep results.

use std::io::Write;

use serde::Serialize;

use super::sweep::CountingCurve;
use crate::error::Result;

pub const CSV_HEADER: &str = "E,ln_inv,N,N_lower,N_upper,extent_s,h,wall_ms";

/// Reals with 17 significant digits.
pub fn real(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_curve_csv<W: Write>(curve: &CountingCurve, out: &mut W) -> Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for s in &curve.samples {
        let upper = s.upper.map(|u| u.to_string()).unwrap_or_default();
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            real(s.e),
            real(s.ln_inv),
            s.count,
            s.lower,
            upper,
            real(s.extent_s),
            real(s.h),
            real(s.wall_ms)
        )?;
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepSummary {
    pub d: u32,
    pub theta: f64,
    pub alpha: f64,
    pub slope: f64,
    pub slope_stderr: f64,
    pub predicted: f64,
    pub relative_deviation: f64,
    pub intercept: f64,
    pub r2: f64,
    pub samples: usize,
    pub lower_bound_ok: bool,
    pub warnings: Vec<String>,
}

impl SweepSummary {
    pub fn new(c: &CountingCurve) -> Self {
        Self {
            d: c.cfg.d,
            theta: c.cfg.theta,
            alpha: c.cfg.alpha,
            slope: c.slope,
            slope_stderr: c.slope_stderr,
            predicted: c.predicted,
            relative_deviation: c.relative_deviation(),
            intercept: c.intercept,
            r2: c.r_squared,
            samples: c.samples.len(),
            lower_bound_ok: c.lower_bound_violations().is_empty(),
            warnings: c.warnings.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::asymptotics::sweep::{finish_curve, CurveSample};
    use crate::eigensolve::PencilMeta;
    use crate::fibers::ConeConfig;

    #[test]
    fn csv_has_one_row_per_sample() {
        let samples = [1e-1, 1e-2, 1e-3, 1e-4]
            .iter()
            .enumerate()
            .map(|(i, &e)| CurveSample {
                e,
                ln_inv: e.ln().abs(),
                count: i,
                lower: 0,
                upper: (i == 2).then_some(7),
                extent_s: 3.0,
                h: 0.1,
                nodes: 10,
                threshold: -1.0,
                wall_ms: 1.5,
                count_refined: None,
                count_doubled: None,
                mesh_meta: PencilMeta::named("t"),
            })
            .collect();
        let c = finish_curve(ConeConfig::new(3, 0.5, 2.0).unwrap(), samples).unwrap();
        let mut buf = Vec::new();
        write_curve_csv(&c, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(lines.len(), 5);
        assert!(lines[3].split(',').nth(4) == Some("7"));
        assert!(lines[1].split(',').nth(4) == Some(""));
        let first: f64 = lines[1].split(',').next().unwrap().parse().unwrap();
        assert_eq!(first, 1e-1);
        let js = serde_json::to_value(SweepSummary::new(&c)).unwrap();
        assert!(js["predicted"].as_f64().is_some());
    }
}
