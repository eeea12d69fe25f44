//! Partition of the tip-excluded domain `{r > 2K}` into the cells used for
//! the decoupled upper bound.
//!
//! With `ρ = 2K/sinθ`, `m = ⌊√R⌋` and `r_k = 3ρ + kR/m`, cell `k ≤ m` is the
//! box `s ∈ [r_k, r_{k+1})`, `|t| < r_k tanθ / 2` (the last one unbounded in
//! `s`), cell `m+1` is the piece `s < 3ρ`, `|t| < K/cosθ` next to the ray,
//! and cell `m+2` is everything else.

use serde::Serialize;

use super::mesh::StructuredMesh;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Serialize)]
pub struct CellPartition {
    pub k: f64,
    pub r: f64,
    /// Left ends `r_0 < … < r_m` of the ray cells.
    pub starts: Vec<f64>,
    /// Half-widths `r_k tanθ / 2`.
    pub half_widths: Vec<f64>,
    /// Cell label of every unknown, in `0..=m+2`.
    #[serde(skip)]
    pub labels: Vec<usize>,
}

impl CellPartition {
    pub fn cell_count(&self) -> usize {
        self.starts.len() + 2
    }

    /// Index of the cell next to the tip, `m + 1`.
    pub fn tip_cell(&self) -> usize {
        self.starts.len()
    }

    /// Index of the remainder cell, `m + 2`.
    pub fn rest_cell(&self) -> usize {
        self.starts.len() + 1
    }

    /// Unknowns of each cell.
    pub fn members(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.cell_count()];
        for (node, &c) in self.labels.iter().enumerate() {
            out[c].push(node);
        }
        out
    }
}

/// Labels the unknowns of a mesh cut at `r = 2K`.
pub fn lambda_partition(mesh: &StructuredMesh, k: f64, radius: f64) -> Result<CellPartition> {
    if !(k > 0.0 && k.is_finite()) {
        return Err(Error::param("K", format!("must be positive, got {k}")));
    }
    if !(radius >= 1.0 && radius.is_finite()) {
        return Err(Error::param("R", format!("must be at least 1, got {radius}")));
    }
    if (mesh.domain.cut - 2.0 * k).abs() > 1e-12 * k {
        return Err(Error::Configuration(format!(
            "mesh is cut at r = {} but K = {k} needs r = {}",
            mesh.domain.cut,
            2.0 * k
        )));
    }
    let theta = mesh.domain.theta;
    let (sin, cos) = theta.sin_cos();
    let tan = sin / cos;
    let rho = 2.0 * k / sin;
    let m = radius.sqrt().floor() as usize;
    let starts: Vec<f64> = (0..=m).map(|j| 3.0 * rho + j as f64 * radius / m as f64).collect();
    let half_widths: Vec<f64> = starts.iter().map(|r| 0.5 * r * tan).collect();
    let tip_half = k / cos;

    let labels = (0..mesh.node_count())
        .map(|node| {
            let (s, t) = mesh.coordinates(node);
            if s < starts[0] {
                return if t.abs() < tip_half { m + 1 } else { m + 2 };
            }
            let j = starts.partition_point(|&r| r <= s) - 1;
            if t.abs() < half_widths[j] {
                j
            } else {
                m + 2
            }
        })
        .collect();
    Ok(CellPartition {
        k,
        r: rho,
        starts,
        half_widths,
        labels,
    })
}
