//! Five-point finite-difference assembly of the fiber forms.
//!
//! Every form is
//! `Σ_edges w_mid |u_a - u_b|² (h_⊥/h_∥) + Σ_nodes V w |u|² h_s h_t - α Σ_ray ρ(s) |u|² h_s`
//! over the lumped mass `Σ_nodes w |u|² h_s h_t`.
//! Edges leaving the rectangle see Dirichlet values; edges into the masked
//! axis region are either dropped (natural) or kept with a zero neighbor
//! (Dirichlet).

use super::mesh::{AxisCondition, StructuredMesh};
use crate::eigensolve::{CsrMatrix, PencilMeta, SymmetricPencil, TripletBuilder};
use crate::error::{Error, Result};
use crate::fibers::{gamma, ConeConfig, CoordKind};

/// Coefficient functions of one form.
pub(crate) struct FormSpec<'a> {
    /// Stiffness and mass weight as a function of the axis distance.
    pub weight: &'a dyn Fn(f64) -> f64,
    /// Potential density multiplying `|u|²` at a node, as a function of the
    /// axis distance (already including the weight).
    pub potential: &'a dyn Fn(f64) -> f64,
    /// Trace weight per unit length at `s` on the ray.
    pub trace: &'a dyn Fn(f64) -> f64,
    pub axis: AxisCondition,
    /// Cell label per unknown; edges joining different cells are dropped.
    pub cells: Option<&'a [usize]>,
}

/// Separately assembled pieces of a form.
pub(crate) struct FormParts {
    pub stiff_s: CsrMatrix,
    pub stiff_t: CsrMatrix,
    pub potential: Vec<f64>,
    pub trace: Vec<f64>,
    pub mass: Vec<f64>,
}

pub(crate) fn assemble_parts(mesh: &StructuredMesh, coeffs: &FormSpec) -> FormParts {
    let n = mesh.node_count();
    let (hs, ht) = (mesh.h_s, mesh.h_t);
    let mut bs = TripletBuilder::with_capacity(n, 3 * n);
    let mut bt = TripletBuilder::with_capacity(n, 3 * n);
    let mut diag_s = vec![0.0; n];
    let mut diag_t = vec![0.0; n];
    let mut potential = vec![0.0; n];
    let mut trace = vec![0.0; n];
    let mut mass = vec![0.0; n];
    let ray = mesh.ray_line();

    for k in 0..n {
        let (i, j) = mesh.position(k);
        let (s, t) = (mesh.s(i), mesh.t(j));
        let r = mesh.axis_distance(s, t);
        let w = (coeffs.weight)(r);
        mass[k] = w * hs * ht;
        potential[k] = (coeffs.potential)(r) * hs * ht;
        if j == ray {
            trace[k] = (coeffs.trace)(s) * hs;
        }
        let dirs: [(isize, isize, bool); 4] = [(1, 0, true), (-1, 0, true), (0, 1, false), (0, -1, false)];
        for (di, dj, along) in dirs {
            let i2 = (i as isize + di) as usize;
            let j2 = (j as isize + dj) as usize;
            let (sm, tm) = (s + 0.5 * di as f64 * hs, t + 0.5 * dj as f64 * ht);
            let geo = if along { ht / hs } else { hs / ht };
            let wm = (coeffs.weight)(mesh.axis_distance(sm, tm).max(0.0)) * geo;
            let (diag, b) = if along {
                (&mut diag_s, &mut bs)
            } else {
                (&mut diag_t, &mut bt)
            };
            if mesh.is_outer(i2, j2) {
                diag[k] += wm;
                continue;
            }
            match mesh.node(i2, j2) {
                None => {
                    if coeffs.axis == AxisCondition::Dirichlet {
                        diag[k] += wm;
                    }
                }
                Some(m) => {
                    if coeffs.cells.is_some_and(|c| c[k] != c[m]) {
                        continue;
                    }
                    diag[k] += wm;
                    if m > k {
                        b.push_sym(k, m, -wm);
                    }
                }
            }
        }
    }
    for k in 0..n {
        bs.push(k, k, diag_s[k]);
        bt.push(k, k, diag_t[k]);
    }
    FormParts {
        stiff_s: bs.build(),
        stiff_t: bt.build(),
        potential,
        trace,
        mass,
    }
}

impl FormParts {
    /// `A_s + A_t + diag(V) - α·diag(trace)` over `M`.
    pub fn combine(&self, alpha: f64, meta: PencilMeta) -> Result<SymmetricPencil> {
        let d: Vec<f64> = self
            .potential
            .iter()
            .zip(&self.trace)
            .map(|(v, c)| v - alpha * c)
            .collect();
        let a = self
            .stiff_s
            .add_scaled(&self.stiff_t, 1.0)
            .add_scaled(&CsrMatrix::diagonal(&d), 1.0);
        SymmetricPencil::new(a, CsrMatrix::diagonal(&self.mass), meta)
    }
}

pub(crate) fn meta(mesh: &StructuredMesh, form: String) -> PencilMeta {
    PencilMeta {
        form,
        h_s: Some(mesh.h_s),
        h_t: Some(mesh.h_t),
        extent_s: Some(mesh.domain.extent_s),
        extent_t: Some(mesh.domain.extent_t),
    }
}

fn require_rotated(cfg: &ConeConfig, mesh: &StructuredMesh) -> Result<()> {
    if mesh.domain.coords != CoordKind::RotatedSt {
        return Err(Error::Configuration("fiber pencils need a rotated-frame mesh".into()));
    }
    if (mesh.domain.theta - cfg.theta).abs() > 1e-15 * cfg.theta {
        return Err(Error::Configuration(format!(
            "mesh was built for θ = {} but the cone has θ = {}",
            mesh.domain.theta, cfg.theta
        )));
    }
    Ok(())
}

/// Weighted meridian form of fiber `l`, with weight `r^{d-2}` and angular
/// potential `l(l+d-3)/r²`.
///
/// Requires a Dirichlet axis for `l ≥ 1`, where functions must vanish on the
/// axis for `u/r` to be square integrable.
pub fn assemble_fiber_pencil(cfg: &ConeConfig, l: u32, mesh: &StructuredMesh) -> Result<SymmetricPencil> {
    require_rotated(cfg, mesh)?;
    if l >= 1 && mesh.domain.bc_axis == AxisCondition::Natural {
        return Err(Error::Configuration(format!(
            "fiber l = {l} needs a Dirichlet condition on the axis"
        )));
    }
    let p = cfg.d as i32 - 2;
    let ang = cfg.fiber(l).angular_ev;
    let sin = cfg.theta.sin();
    let weight = |r: f64| r.powi(p);
    let potential = |r: f64| ang * r.powi(p - 2);
    let trace = |s: f64| (s * sin).powi(p);
    let parts = assemble_parts(
        mesh,
        &FormSpec {
            weight: &weight,
            potential: &potential,
            trace: &trace,
            axis: mesh.domain.bc_axis,
            cells: None,
        },
    );
    parts.combine(
        cfg.alpha,
        meta(mesh, format!("fiber d={} l={l} theta={}", cfg.d, cfg.theta)),
    )
}

/// Flat form of fiber `l` after removing the weight: unit mass, potential
/// `γ(d,l)/r²` and a Dirichlet axis.
pub fn assemble_flat_pencil(cfg: &ConeConfig, l: u32, mesh: &StructuredMesh) -> Result<SymmetricPencil> {
    require_rotated(cfg, mesh)?;
    let g = gamma(cfg.d, l).map_err(|_| Error::ExcludedFiber { d: cfg.d, l })?;
    let weight = |_: f64| 1.0;
    let potential = |r: f64| g / (r * r);
    let trace = |_: f64| 1.0;
    let parts = assemble_parts(
        mesh,
        &FormSpec {
            weight: &weight,
            potential: &potential,
            trace: &trace,
            axis: AxisCondition::Dirichlet,
            cells: None,
        },
    );
    parts.combine(
        cfg.alpha,
        meta(mesh, format!("flat d={} l={l} theta={}", cfg.d, cfg.theta)),
    )
}

fn tip_excluded_parts(cfg: &ConeConfig, mesh: &StructuredMesh, cells: Option<&[usize]>) -> Result<FormParts> {
    require_rotated(cfg, mesh)?;
    if !(mesh.domain.cut > 0.0) {
        return Err(Error::Configuration(
            "the tip-excluded form needs a mesh cut at r = 2K with K > 0".into(),
        ));
    }
    let weight = |_: f64| 1.0;
    let potential = |r: f64| -0.25 / (r * r);
    let trace = |_: f64| 1.0;
    Ok(assemble_parts(
        mesh,
        &FormSpec {
            weight: &weight,
            potential: &potential,
            trace: &trace,
            axis: AxisCondition::Natural,
            cells,
        },
    ))
}

/// Flat axisymmetric form on `{r > 2K}` with potential `-1/(4r²)` and free
/// boundary at `r = 2K`; `K` is half the mesh cut.
pub fn assemble_tip_excluded_pencil(cfg: &ConeConfig, mesh: &StructuredMesh) -> Result<SymmetricPencil> {
    let parts = tip_excluded_parts(cfg, mesh, None)?;
    parts.combine(
        cfg.alpha,
        meta(
            mesh,
            format!("tip-excluded K={} theta={}", 0.5 * mesh.domain.cut, cfg.theta),
        ),
    )
}

/// Same form with every edge between differently labelled unknowns removed,
/// i.e. free conditions on the interfaces. The result is block diagonal.
pub fn assemble_decoupled_pencil(cfg: &ConeConfig, mesh: &StructuredMesh, cells: &[usize]) -> Result<SymmetricPencil> {
    if cells.len() != mesh.node_count() {
        return Err(Error::Configuration(format!(
            "{} cell labels for {} unknowns",
            cells.len(),
            mesh.node_count()
        )));
    }
    let parts = tip_excluded_parts(cfg, mesh, Some(cells))?;
    parts.combine(
        cfg.alpha,
        meta(
            mesh,
            format!("decoupled K={} theta={}", 0.5 * mesh.domain.cut, cfg.theta),
        ),
    )
}

/// θ-independent pieces of the axisymmetric form on the reference domain.
///
/// The form matrix at aperture θ is `tan²θ·a_s + a_t - α·c` with mass `m`.
#[derive(Debug, Clone)]
pub struct ReferencePencil {
    pub a_s: CsrMatrix,
    pub a_t: CsrMatrix,
    pub c: CsrMatrix,
    pub m: CsrMatrix,
    pub meta: PencilMeta,
}

/// Assembles the reference-domain pieces for the `l = 0` fiber in dimension
/// `d`, weight `(š + ť)^{d-2}` and trace weight `š^{d-2}`.
pub fn assemble_reference_pencil(d: u32, mesh: &StructuredMesh) -> Result<ReferencePencil> {
    crate::fibers::validate_dimension(d)?;
    if mesh.domain.coords != CoordKind::Reference {
        return Err(Error::Configuration(
            "the reference pencil needs a reference-frame mesh".into(),
        ));
    }
    let p = d as i32 - 2;
    let weight = |r: f64| r.powi(p);
    let potential = |_: f64| 0.0;
    let trace = |s: f64| s.powi(p);
    let parts = assemble_parts(
        mesh,
        &FormSpec {
            weight: &weight,
            potential: &potential,
            trace: &trace,
            axis: mesh.domain.bc_axis,
            cells: None,
        },
    );
    Ok(ReferencePencil {
        a_s: parts.stiff_s,
        a_t: parts.stiff_t,
        c: ray_diagonal(&parts.trace),
        m: CsrMatrix::diagonal(&parts.mass),
        meta: meta(mesh, format!("reference d={d}")),
    })
}

fn ray_diagonal(trace: &[f64]) -> CsrMatrix {
    let mut b = TripletBuilder::new(trace.len());
    for (k, &v) in trace.iter().enumerate().filter(|(_, v)| **v != 0.0) {
        b.push(k, k, v);
    }
    b.build()
}

impl ReferencePencil {
    /// Pencil at aperture `theta` and coupling `alpha`.
    pub fn at(&self, theta: f64, alpha: f64) -> Result<SymmetricPencil> {
        crate::fibers::validate_theta(theta)?;
        let tan = theta.tan();
        let a = self.a_t.add_scaled(&self.a_s, tan * tan).add_scaled(&self.c, -alpha);
        let mut meta = self.meta.clone();
        meta.form = format!("{} theta={theta}", meta.form);
        SymmetricPencil::new(a, self.m.clone(), meta)
    }
}
