//! Counting-function sweeps over the depth below the threshold.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::fit::{fit_log_slope, log_spaced, LinearFit};
use crate::discretize::{assemble_fiber_pencil, build_mesh, mesh_threshold, TruncatedDomain};
use crate::eigensolve::{InertiaCounter, PencilMeta};
use crate::error::{Error, Result};
use crate::fibers::{predicted_slope, ConeConfig};
use crate::model1d::tensor_lower_bound_count;

/// Energy from which depths are measured on a mesh.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ThresholdReference {
    /// `-α²/4`.
    Continuum,
    /// Bottom of the discrete transverse problem, see [`mesh_threshold`].
    #[default]
    Mesh,
}

impl ThresholdReference {
    pub fn energy(self, alpha: f64, h_t: f64) -> f64 {
        match self {
            Self::Continuum => -0.25 * alpha * alpha,
            Self::Mesh => mesh_threshold(alpha, h_t),
        }
    }
}

impl std::str::FromStr for ThresholdReference {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "mesh" => Ok(Self::Mesh),
            "continuum" => Ok(Self::Continuum),
            other => Err(format!("unknown threshold reference `{other}` (mesh or continuum)")),
        }
    }
}

/// Grid spacing as a function of the depth.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum SpacingRule {
    /// `min(0.1/α, 0.02·M_sweep)` at every depth.
    Default,
    Fixed {
        h: f64,
    },
    /// `h0·(E/E0)^{power}` capped by `h0`, so finer meshes for smaller depths.
    Power {
        h0: f64,
        e0: f64,
        power: f64,
    },
}

impl SpacingRule {
    pub fn spacing(&self, alpha: f64, m_sweep: f64, e: f64) -> f64 {
        match *self {
            Self::Default => (0.1 / alpha).min(0.02 * m_sweep),
            Self::Fixed { h } => h,
            Self::Power { h0, e0, power } => h0 * (e / e0).powf(power).min(1.0),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPolicy {
    /// Truncation multiplier in `R(E) = M_sweep·|ln E|`.
    pub m_sweep: f64,
    /// Depths below the threshold, any order.
    pub depths: Vec<f64>,
    pub h_rule: SpacingRule,
    pub l: u32,
    pub reference: ThresholdReference,
    /// Repeat every sample at half the spacing and record the count.
    pub check_refinement: bool,
    /// Repeat every sample with `2·M_sweep` and record the count.
    pub check_truncation: bool,
}

impl SweepPolicy {
    /// `M_sweep = 8/α`, default spacing, and `n` log-spaced depths between
    /// `hi` and `lo`.
    pub fn new(alpha: f64, hi: f64, lo: f64, n: usize) -> Result<Self> {
        if !(hi > lo && lo > 0.0 && n >= 2) {
            return Err(Error::param(
                "E_list",
                format!("need 0 < lo < hi and n >= 2, got {lo}, {hi}, {n}"),
            ));
        }
        Ok(Self {
            m_sweep: 8.0 / alpha,
            depths: log_spaced(hi, lo, n),
            h_rule: SpacingRule::Default,
            l: 0,
            reference: ThresholdReference::Mesh,
            check_refinement: false,
            check_truncation: false,
        })
    }

    pub fn validate(&self, cfg: &ConeConfig) -> Result<()> {
        if cfg.d != 3 || self.l != 0 {
            return Err(Error::Configuration(format!(
                "counting sweeps run on the axisymmetric fiber of d = 3, got d = {}, l = {}",
                cfg.d, self.l
            )));
        }
        if !(self.m_sweep > 0.0 && self.m_sweep.is_finite()) {
            return Err(Error::param(
                "M_sweep",
                format!("must be positive, got {}", self.m_sweep),
            ));
        }
        if self.depths.is_empty() {
            return Err(Error::param("E_list", "no depths given"));
        }
        for &e in &self.depths {
            if !(e > 0.0 && e < 1.0) {
                return Err(Error::param("E_list", format!("depths must lie in (0, 1), got {e}")));
            }
        }
        let mut by_depth: Vec<f64> = self.depths.clone();
        by_depth.sort_by(|a, b| b.total_cmp(a));
        if by_depth.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::param("E_list", "depths must be distinct"));
        }
        if by_depth.len() < 4 || by_depth[0] / by_depth[by_depth.len() - 1] < 100.0 * (1.0 - 1e-12) {
            return Err(Error::param(
                "E_list",
                "the fit needs at least 4 depths spanning two decades",
            ));
        }
        let hs: Vec<f64> = by_depth
            .iter()
            .map(|&e| self.h_rule.spacing(cfg.alpha, self.m_sweep, e))
            .collect();
        if hs.iter().any(|h| !(*h > 0.0 && h.is_finite())) {
            return Err(Error::param("h_rule", "spacing must be positive"));
        }
        if hs.windows(2).any(|w| w[1] > w[0]) {
            return Err(Error::param("h_rule", "spacing must not grow as the depth decreases"));
        }
        Ok(())
    }
}

/// Count of fiber eigenvalues below `reference - e` on one truncation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FiberCount {
    pub count: usize,
    pub threshold: f64,
    pub nodes: usize,
    pub h: f64,
    pub factorization_ok: bool,
    pub meta: PencilMeta,
}

pub fn fiber_count(
    cfg: &ConeConfig,
    l: u32,
    dom: &TruncatedDomain,
    h: f64,
    e: f64,
    reference: ThresholdReference,
) -> Result<FiberCount> {
    let mesh = build_mesh(dom, h)?;
    let p = assemble_fiber_pencil(cfg, l, &mesh)?;
    let threshold = reference.energy(cfg.alpha, mesh.h_t);
    let c = InertiaCounter::new(&p).count(threshold - e)?;
    Ok(FiberCount {
        count: c.count,
        threshold,
        nodes: p.dim(),
        h: mesh.h_s.max(mesh.h_t),
        factorization_ok: c.factorization_ok,
        meta: p.meta,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurveSample {
    pub e: f64,
    pub ln_inv: f64,
    pub count: usize,
    /// Tensor-product lower bound with `R` equal to the truncation length.
    pub lower: usize,
    /// Decoupled upper bound, when it was computed for this depth.
    pub upper: Option<usize>,
    pub extent_s: f64,
    pub h: f64,
    pub nodes: usize,
    pub threshold: f64,
    pub wall_ms: f64,
    pub count_refined: Option<usize>,
    pub count_doubled: Option<usize>,
    pub mesh_meta: PencilMeta,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CountingCurve {
    pub cfg: ConeConfig,
    /// Ordered by decreasing depth.
    pub samples: Vec<CurveSample>,
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub slope_stderr: f64,
    pub predicted: f64,
    pub warnings: Vec<String>,
}

impl CountingCurve {
    pub fn relative_deviation(&self) -> f64 {
        (self.slope - self.predicted) / self.predicted
    }

    /// Samples whose count falls below the certified lower bound.
    pub fn lower_bound_violations(&self) -> Vec<&CurveSample> {
        self.samples.iter().filter(|s| s.count < s.lower).collect()
    }
}

fn sample(cfg: &ConeConfig, pol: &SweepPolicy, e: f64) -> Result<CurveSample> {
    let start = Instant::now();
    let h = pol.h_rule.spacing(cfg.alpha, pol.m_sweep, e);
    let dom = TruncatedDomain::for_depth(cfg, e, pol.m_sweep)?;
    let fc = fiber_count(cfg, pol.l, &dom, h, e, pol.reference)?;
    let lower = tensor_lower_bound_count(cfg, dom.extent_s, e)?.count;
    let count_refined = if pol.check_refinement {
        Some(fiber_count(cfg, pol.l, &dom, 0.5 * h, e, pol.reference)?.count)
    } else {
        None
    };
    let count_doubled = if pol.check_truncation {
        let big = TruncatedDomain::for_depth(cfg, e, 2.0 * pol.m_sweep)?;
        Some(fiber_count(cfg, pol.l, &big, h, e, pol.reference)?.count)
    } else {
        None
    };
    Ok(CurveSample {
        e,
        ln_inv: e.ln().abs(),
        count: fc.count,
        lower,
        upper: None,
        extent_s: dom.extent_s,
        h: fc.h,
        nodes: fc.nodes,
        threshold: fc.threshold,
        wall_ms: start.elapsed().as_secs_f64() * 1e3,
        count_refined,
        count_doubled,
        mesh_meta: fc.meta,
    })
}

/// Runs one truncated problem per depth, on at most `jobs` threads, and
/// fits the counts against `|ln E|`.
pub fn counting_sweep(cfg: &ConeConfig, pol: &SweepPolicy, jobs: usize) -> Result<CountingCurve> {
    pol.validate(cfg)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::Configuration(format!("thread pool: {e}")))?;
    let mut samples = pool.install(|| {
        pol.depths
            .par_iter()
            .map(|&e| sample(cfg, pol, e))
            .collect::<Result<Vec<_>>>()
    })?;
    samples.sort_by(|a, b| b.e.total_cmp(&a.e));
    finish_curve(*cfg, samples)
}

/// Checks monotonicity and fits a curve from precomputed samples.
pub fn finish_curve(cfg: ConeConfig, samples: Vec<CurveSample>) -> Result<CountingCurve> {
    for w in samples.windows(2) {
        if w[1].count < w[0].count {
            return Err(Error::MeshResolution(format!(
                "N({:e}) = {} but N({:e}) = {}",
                w[0].e, w[0].count, w[1].e, w[1].count
            )));
        }
    }
    let mut warnings = Vec::new();
    for s in &samples {
        if let Some(r) = s.count_refined.filter(|&r| r != s.count) {
            warnings.push(format!(
                "E = {:e}: count {} changes to {r} at half the spacing",
                s.e, s.count
            ));
        }
        if let Some(r) = s.count_doubled.filter(|&r| r != s.count) {
            warnings.push(format!(
                "E = {:e}: count {} changes to {r} when M_sweep doubles",
                s.e, s.count
            ));
        }
    }
    let pts: Vec<(f64, usize)> = samples.iter().map(|s| (s.e, s.count)).collect();
    let fit = fit_log_slope(&pts)?;
    let LinearFit {
        slope,
        intercept,
        r_squared,
        slope_stderr,
    } = fit;
    Ok(CountingCurve {
        cfg,
        samples,
        slope,
        intercept,
        r_squared,
        slope_stderr,
        predicted: predicted_slope(cfg.theta)?,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> ConeConfig {
        ConeConfig::new(3, std::f64::consts::FRAC_PI_4, 2.0).unwrap()
    }

    #[test]
    fn policy_validation() {
        let mut p = SweepPolicy::new(2.0, 1e-1, 1e-4, 4).unwrap();
        assert!(p.validate(&cfg()).is_ok());
        p.l = 1;
        assert!(matches!(p.validate(&cfg()), Err(Error::Configuration(_))));
        p.l = 0;
        p.h_rule = SpacingRule::Fixed { h: 0.0 };
        assert!(p.validate(&cfg()).is_err());
        p.h_rule = SpacingRule::Power {
            h0: 0.1,
            e0: 1e-1,
            power: 0.1,
        };
        assert!(p.validate(&cfg()).is_ok());
        assert!(p.validate(&ConeConfig::new(4, 0.5, 2.0).unwrap()).is_err());
    }

    #[test]
    fn default_spacing() {
        let r = SpacingRule::Default;
        assert_eq!(r.spacing(2.0, 4.0, 1e-3), 0.05);
        assert_eq!(r.spacing(1.0, 1.0, 1e-3), 0.02);
    }

    fn synthetic(e: f64, count: usize) -> CurveSample {
        CurveSample {
            e,
            ln_inv: e.ln().abs(),
            count,
            lower: 0,
            upper: None,
            extent_s: 1.0,
            h: 0.1,
            nodes: 1,
            threshold: -1.0,
            wall_ms: 0.0,
            count_refined: None,
            count_doubled: None,
            mesh_meta: PencilMeta::named("synthetic"),
        }
    }

    #[test]
    fn non_monotone_counts_are_a_resolution_error() {
        let s = vec![
            synthetic(1e-1, 0),
            synthetic(1e-2, 2),
            synthetic(1e-3, 1),
            synthetic(1e-4, 3),
        ];
        assert!(matches!(finish_curve(cfg(), s), Err(Error::MeshResolution(_))));
    }

    #[test]
    fn fits_monotone_counts() {
        let s = vec![
            synthetic(1e-1, 0),
            synthetic(1e-2, 0),
            synthetic(1e-3, 1),
            synthetic(1e-4, 1),
        ];
        let c = finish_curve(cfg(), s).unwrap();
        assert!(c.slope > 0.0);
        assert!((c.predicted - 1.0 / (4.0 * std::f64::consts::PI)).abs() < 1e-15);
    }
}
