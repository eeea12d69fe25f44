//! Ray-aligned structured meshes of truncated domains.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fibers::{validate_theta, ConeConfig, CoordKind};

/// Smallest number of grid lines across the transverse width.
pub const MIN_TRANSVERSE_LINES: usize = 16;

/// Condition imposed where the domain meets the axis `r = 0` (or the inner
/// cut `r = cut` of a domain kept away from the tip).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AxisCondition {
    Natural,
    Dirichlet,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OuterCondition {
    #[default]
    Dirichlet,
}

/// Rectangle `(-back, extent_s) × (-extent_t, extent_t)` in a ray-aligned
/// frame, intersected with `{r > cut}`.
///
/// In the rotated frame `r = s sinθ + t cosθ`; in the reference frame the
/// weight is `š + ť` and `theta` is only used for reporting.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TruncatedDomain {
    pub coords: CoordKind,
    pub theta: f64,
    pub extent_s: f64,
    pub extent_t: f64,
    /// Length kept behind the tip, `s ∈ (-back, 0)`.
    pub back: f64,
    /// Nodes with axis distance `≤ cut` are removed.
    pub cut: f64,
    pub bc_outer: OuterCondition,
    pub bc_axis: AxisCondition,
}

fn positive(name: &'static str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::param(name, format!("must be positive and finite, got {v}")))
    }
}

fn non_negative(name: &'static str, v: f64) -> Result<()> {
    if v >= 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::param(name, format!("must be non-negative and finite, got {v}")))
    }
}

impl TruncatedDomain {
    /// `(0, extent_s) × (-extent_t, extent_t) ∩ Ω_θ` in the rotated frame.
    pub fn rotated(theta: f64, extent_s: f64, extent_t: f64) -> Result<Self> {
        validate_theta(theta)?;
        positive("extent_s", extent_s)?;
        positive("extent_t", extent_t)?;
        Ok(Self {
            coords: CoordKind::RotatedSt,
            theta,
            extent_s,
            extent_t,
            back: 0.0,
            cut: 0.0,
            bc_outer: OuterCondition::Dirichlet,
            bc_axis: AxisCondition::Natural,
        })
    }

    /// Truncation of the fixed reference domain `{š + ť > 0}`.
    pub fn reference(extent_s: f64, extent_t: f64) -> Result<Self> {
        let mut d = Self::rotated(std::f64::consts::FRAC_PI_4, extent_s, extent_t)?;
        d.coords = CoordKind::Reference;
        Ok(d)
    }

    /// Default truncation for counting at depth `e` below the threshold:
    /// `extent_s = max(20/α, m_sweep·|ln e|)`, `extent_t = extent_s·tanθ/2`,
    /// and a strip of length `min(extent_t/tanθ, 20/α)` behind the tip.
    pub fn for_depth(cfg: &ConeConfig, e: f64, m_sweep: f64) -> Result<Self> {
        positive("E", e)?;
        positive("M_sweep", m_sweep)?;
        let extent_s = (20.0 / cfg.alpha).max(m_sweep * e.ln().abs());
        Self::with_radius(cfg, extent_s)
    }

    /// Default shape for a given along-ray length.
    pub fn with_radius(cfg: &ConeConfig, extent_s: f64) -> Result<Self> {
        let tan = cfg.theta.tan();
        let extent_t = 0.5 * extent_s * tan;
        Self::rotated(cfg.theta, extent_s, extent_t)?.with_back((extent_t / tan).min(20.0 / cfg.alpha))
    }

    pub fn with_back(mut self, back: f64) -> Result<Self> {
        non_negative("back", back)?;
        self.back = back;
        Ok(self)
    }

    pub fn with_cut(mut self, cut: f64) -> Result<Self> {
        non_negative("cut", cut)?;
        self.cut = cut;
        Ok(self)
    }

    pub fn with_axis(mut self, bc: AxisCondition) -> Self {
        self.bc_axis = bc;
        self
    }

    /// Distance to the axis (rotated frame) or reference weight `š + ť`.
    pub fn axis_distance(&self, s: f64, t: f64) -> f64 {
        match self.coords {
            CoordKind::Reference => s + t,
            _ => {
                let (sn, cs) = self.theta.sin_cos();
                s * sn + t * cs
            }
        }
    }
}

/// Uniform grid on a [`TruncatedDomain`] whose line `t = 0` carries the ray.
///
/// Grid lines are `s_i = (i - back_lines)·h_s`, `i = 0..=s_lines`, and
/// `t_j = (j - half_lines)·h_t`, `j = 0..=2·half_lines`. Lines with `i` or
/// `j` on the rectangle boundary carry Dirichlet values and hold no unknowns,
/// as do interior nodes at axis distance `≤ cut`.
#[derive(Debug, Clone)]
pub struct StructuredMesh {
    pub domain: TruncatedDomain,
    pub h_s: f64,
    pub h_t: f64,
    pub back_lines: usize,
    /// Number of `s`-intervals, so the `s` lines are `0..=s_lines`.
    pub s_lines: usize,
    /// Number of `t`-intervals on each side of the ray.
    pub half_lines: usize,
    index: Vec<usize>,
    nodes: Vec<(u32, u32)>,
}

const MASKED: usize = usize::MAX;

/// Builds the ray-aligned grid with target spacing `h`.
pub fn build_mesh(dom: &TruncatedDomain, h: f64) -> Result<StructuredMesh> {
    positive("h", h)?;
    if dom.coords == CoordKind::MeridianRz {
        return Err(Error::Configuration(
            "meshes are built in the rotated or reference frame, not in (r, z)".into(),
        ));
    }
    let half_lines = (dom.extent_t / h).round().max(1.0) as usize;
    if 2 * half_lines + 1 < MIN_TRANSVERSE_LINES {
        return Err(Error::Refinement(format!(
            "h = {h} leaves {} grid lines across the width 2·{}; at least {MIN_TRANSVERSE_LINES} are needed",
            2 * half_lines + 1,
            dom.extent_t
        )));
    }
    let fwd = (dom.extent_s / h).round().max(1.0) as usize;
    let h_s = dom.extent_s / fwd as f64;
    let h_t = dom.extent_t / half_lines as f64;
    let back_lines = (dom.back / h_s).round() as usize;
    let s_lines = fwd + back_lines;
    let ni = s_lines.saturating_sub(1);
    let nj = 2 * half_lines - 1;
    if ni as u64 * nj as u64 > u32::MAX as u64 {
        return Err(Error::Configuration(format!("mesh of {ni}x{nj} nodes is too large")));
    }

    let mut mesh = StructuredMesh {
        domain: *dom,
        h_s,
        h_t,
        back_lines,
        s_lines,
        half_lines,
        index: vec![MASKED; ni * nj],
        nodes: Vec::new(),
    };
    // nodes within rounding of the cut line count as lying on it
    let slack = 1e-9 * h_s.min(h_t);
    for i in 1..s_lines {
        for j in 1..2 * half_lines {
            if dom.axis_distance(mesh.s(i), mesh.t(j)) > dom.cut + slack {
                mesh.index[(i - 1) * nj + (j - 1)] = mesh.nodes.len();
                mesh.nodes.push((i as u32, j as u32));
            }
        }
    }
    Ok(mesh)
}

impl StructuredMesh {
    pub fn s(&self, i: usize) -> f64 {
        (i as f64 - self.back_lines as f64) * self.h_s
    }

    pub fn t(&self, j: usize) -> f64 {
        (j as f64 - self.half_lines as f64) * self.h_t
    }

    /// `t`-index of the ray line `t = 0`.
    pub fn ray_line(&self) -> usize {
        self.half_lines
    }

    /// `s`-index of the tip `s = 0`.
    pub fn tip_line(&self) -> usize {
        self.back_lines
    }

    /// Grid lines including the boundary ones, `(s, t)`.
    pub fn grid_shape(&self) -> (usize, usize) {
        (self.s_lines + 1, 2 * self.half_lines + 1)
    }

    /// Interior grid nodes, masked or not.
    pub fn interior_count(&self) -> usize {
        self.index.len()
    }

    /// Unknowns of the discrete problem.
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn masked_count(&self) -> usize {
        self.interior_count() - self.node_count()
    }

    /// Unknown at grid position `(i, j)`, if that node is an interior,
    /// unmasked one.
    pub fn node(&self, i: usize, j: usize) -> Option<usize> {
        if i == 0 || j == 0 || i >= self.s_lines || j >= 2 * self.half_lines {
            return None;
        }
        let k = self.index[(i - 1) * (2 * self.half_lines - 1) + (j - 1)];
        (k != MASKED).then_some(k)
    }

    /// Grid position of unknown `k`.
    pub fn position(&self, k: usize) -> (usize, usize) {
        let (i, j) = self.nodes[k];
        (i as usize, j as usize)
    }

    pub fn coordinates(&self, k: usize) -> (f64, f64) {
        let (i, j) = self.position(k);
        (self.s(i), self.t(j))
    }

    /// True when `(i, j)` lies on the outer rectangle boundary.
    pub fn is_outer(&self, i: usize, j: usize) -> bool {
        i == 0 || j == 0 || i >= self.s_lines || j >= 2 * self.half_lines
    }

    /// True for interior grid positions removed by the axis mask.
    pub fn is_masked(&self, i: usize, j: usize) -> bool {
        !self.is_outer(i, j) && self.node(i, j).is_none()
    }

    pub fn axis_distance(&self, s: f64, t: f64) -> f64 {
        self.domain.axis_distance(s, t)
    }

    /// Unknowns on the ray line, ordered by `s`.
    pub fn ray_nodes(&self) -> impl Iterator<Item = usize> + '_ {
        let j = self.ray_line();
        (1..self.s_lines).filter_map(move |i| self.node(i, j))
    }
}
