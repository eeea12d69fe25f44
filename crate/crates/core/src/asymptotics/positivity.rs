//! No fiber other than the axisymmetric one of `d = 3` goes below `-α²/4`.

use serde::Serialize;

use crate::discretize::{assemble_flat_pencil, StructuredMesh};
use crate::eigensolve::{count_below, lowest_eigenpairs};
use crate::error::{Error, Result};
use crate::fibers::ConeConfig;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FiberPositivity {
    pub l: u32,
    pub gamma: f64,
    /// Lowest eigenvalue of the flat pencil.
    pub lowest: f64,
    /// Eigenvalues strictly below `-α²/4`, by inertia.
    pub below_threshold: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PositivityReport {
    pub cfg: ConeConfig,
    pub threshold: f64,
    pub fibers: Vec<FiberPositivity>,
}

impl PositivityReport {
    pub fn ok(&self) -> bool {
        self.fibers
            .iter()
            .all(|f| f.below_threshold == 0 && f.lowest >= self.threshold)
    }

    pub fn check(&self) -> Result<()> {
        match self
            .fibers
            .iter()
            .find(|f| f.below_threshold > 0 || f.lowest < self.threshold)
        {
            None => Ok(()),
            Some(f) => Err(Error::InvariantViolation(format!(
                "fiber l = {} of d = {} has eigenvalue {} below -α²/4 = {}",
                f.l, self.cfg.d, f.lowest, self.threshold
            ))),
        }
    }
}

/// Lowest eigenvalue of every admissible fiber `l ≤ l_max` on the flat,
/// Dirichlet-at-axis discretization, compared with `-α²/4` without slack.
/// The pair `(3, 0)` is skipped.
pub fn positivity_check(cfg: &ConeConfig, l_max: u32, mesh: &StructuredMesh) -> Result<PositivityReport> {
    let threshold = cfg.threshold();
    let mut fibers = Vec::new();
    for l in 0..=l_max {
        if cfg.d == 3 && l == 0 {
            continue;
        }
        let p = assemble_flat_pencil(cfg, l, mesh)?;
        let below_threshold = count_below(&p, threshold)?.count;
        let lowest = lowest_eigenpairs(&p, 1, threshold - 1.0)?
            .eigenvalues
            .first()
            .copied()
            .ok_or_else(|| Error::NonConvergence(format!("no eigenvalue for fiber l = {l}")))?;
        fibers.push(FiberPositivity {
            l,
            gamma: cfg.fiber(l).gamma,
            lowest,
            below_threshold,
        });
    }
    if fibers.is_empty() {
        return Err(Error::Configuration("no admissible fiber up to l_max".into()));
    }
    Ok(PositivityReport {
        cfg: *cfg,
        threshold,
        fibers,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::discretize::{build_mesh, TruncatedDomain};
    use std::f64::consts::FRAC_PI_4;

    fn mesh(theta: f64) -> StructuredMesh {
        let dom = TruncatedDomain::rotated(theta, 10.0, 5.0)
            .unwrap()
            .with_back(2.0)
            .unwrap();
        build_mesh(&dom, 0.1).unwrap()
    }

    #[test]
    fn higher_fibers_stay_above_threshold() {
        let cfg = ConeConfig::new(3, FRAC_PI_4, 2.0).unwrap();
        let r = positivity_check(&cfg, 3, &mesh(FRAC_PI_4)).unwrap();
        assert_eq!(r.fibers.len(), 3);
        r.check().unwrap();
    }

    #[test]
    fn four_and_five_dimensions() {
        for (d, alpha) in [(4, 2.0), (5, 1.0)] {
            let cfg = ConeConfig::new(d, FRAC_PI_4, alpha).unwrap();
            let r = positivity_check(&cfg, 0, &mesh(FRAC_PI_4)).unwrap();
            assert!(r.ok(), "{r:?}");
            assert!(r.fibers[0].lowest >= -0.25 * alpha * alpha);
        }
    }
}
