//! Lower and upper bounds around the counting function at one depth.
//!
//! The lower bound is the tensor-product count on the half-strip of width
//! `R tanθ`. The upper bound cuts the tip-excluded domain `{r > 2K}` into
//! cells and frees every interface, which can only lower the form; its count
//! is the sum of the cell counts.

use serde::Serialize;

use super::sweep::{fiber_count, ThresholdReference};
use crate::discretize::{
    assemble_decoupled_pencil, assemble_tip_excluded_pencil, build_mesh, lambda_partition, mesh_threshold,
    AxisCondition, TruncatedDomain,
};
use crate::eigensolve::InertiaCounter;
use crate::error::{Error, Result};
use crate::fibers::ConeConfig;
use crate::model1d::{tensor_lower_bound_count, TensorBound};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BracketingReport {
    pub e: f64,
    pub k: f64,
    pub r: f64,
    pub h: f64,
    pub lower: TensorBound,
    /// Count of the axisymmetric fiber truncated at length `R`.
    pub count: usize,
    /// Count of the tip-excluded form with all cells coupled.
    pub outer: usize,
    /// Sum of the decoupled cell counts.
    pub upper: usize,
    pub cell_counts: Vec<usize>,
    pub threshold: f64,
}

impl BracketingReport {
    /// Human-readable descriptions of every violated inequality.
    pub fn violations(&self) -> Vec<String> {
        let mut v = Vec::new();
        if self.lower.count > self.count {
            v.push(format!(
                "lower bound {} exceeds the count {}",
                self.lower.count, self.count
            ));
        }
        if self.count > self.upper {
            v.push(format!("count {} exceeds the decoupled sum {}", self.count, self.upper));
        }
        if self.outer > self.upper {
            v.push(format!(
                "tip-excluded count {} exceeds its decoupled sum {}",
                self.outer, self.upper
            ));
        }
        v
    }

    pub fn ordered(&self) -> bool {
        self.violations().is_empty()
    }

    pub fn check(&self) -> Result<()> {
        match self.violations().first() {
            None => Ok(()),
            Some(s) => Err(Error::InvariantViolation(format!("at E = {:e}: {s}", self.e))),
        }
    }
}

/// Evaluates the three counts at depth `e` with cut parameter `k` and
/// length `r`, on meshes of spacing `h`.
pub fn bracketing_check(cfg: &ConeConfig, e: f64, k: f64, r: f64, h: f64) -> Result<BracketingReport> {
    if cfg.d != 3 {
        return Err(Error::Configuration(format!(
            "bracketing concerns the d = 3 cone, got d = {}",
            cfg.d
        )));
    }
    if !(e > 0.0 && e.is_finite()) {
        return Err(Error::param("E", format!("depth must be positive, got {e}")));
    }
    if !(k > 0.0 && k.is_finite()) || 1.0 / (16.0 * k * k) >= 0.25 * cfg.alpha * cfg.alpha {
        return Err(Error::param(
            "K",
            format!("need 1/(16K²) < α²/4, got K = {k}, α = {}", cfg.alpha),
        ));
    }
    let lower = tensor_lower_bound_count(cfg, r, e)?;

    let dom = TruncatedDomain::with_radius(cfg, r)?;
    let full = fiber_count(cfg, 0, &dom, h, e, ThresholdReference::Mesh)?;

    let (sin, tan) = (cfg.theta.sin(), cfg.theta.tan());
    let m = r.sqrt().floor().max(1.0);
    let last = 6.0 * k / sin + r;
    let extent_s = last + r / m;
    let extent_t = 0.5 * extent_s * tan;
    let outer_dom = TruncatedDomain::rotated(cfg.theta, extent_s, extent_t)?
        .with_back((extent_t / tan).min(20.0 / cfg.alpha))?
        .with_cut(2.0 * k)?
        .with_axis(AxisCondition::Natural);
    let mesh = build_mesh(&outer_dom, h)?;
    let threshold = mesh_threshold(cfg.alpha, mesh.h_t);
    let mu = threshold - e;
    let whole = assemble_tip_excluded_pencil(cfg, &mesh)?;
    let outer = InertiaCounter::new(&whole).count(mu)?.count;

    let cells = lambda_partition(&mesh, k, r)?;
    let split = assemble_decoupled_pencil(cfg, &mesh, &cells.labels)?;
    let mut cell_counts = Vec::with_capacity(cells.cell_count());
    for members in cells.members() {
        if members.is_empty() {
            cell_counts.push(0);
            continue;
        }
        let sub = split.restrict(&members)?;
        cell_counts.push(InertiaCounter::new(&sub).count(mu)?.count);
    }
    let upper = cell_counts.iter().sum();
    let total = InertiaCounter::new(&split).count(mu)?.count;
    if total != upper {
        return Err(Error::InvariantViolation(format!(
            "decoupled pencil counts {total} but its cells sum to {upper}"
        )));
    }
    Ok(BracketingReport {
        e,
        k,
        r,
        h,
        lower,
        count: full.count,
        outer,
        upper,
        cell_counts,
        threshold,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_4;

    #[test]
    fn rejects_small_cut_parameter() {
        let cfg = ConeConfig::new(3, FRAC_PI_4, 2.0).unwrap();
        assert!(bracketing_check(&cfg, 1e-3, 0.2, 10.0, 0.2).is_err());
    }

    #[test]
    fn deep_window_is_empty_and_ordered() {
        let cfg = ConeConfig::new(3, FRAC_PI_4, 2.0).unwrap();
        let rep = bracketing_check(&cfg, 0.9, 1.0, 9.0, 0.2).unwrap();
        // m = ⌊√9⌋ = 3 gives four ray cells plus the tip and remainder cells
        assert_eq!(rep.cell_counts.len(), 6);
        rep.check().unwrap();
        assert_eq!((rep.lower.count, rep.count), (0, 0));
    }
}
