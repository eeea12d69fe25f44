//! Ray-aligned finite-difference discretizations of the fiber forms.
//!
//! Meshes live in the rotated frame `(s, t)` where the ray is the grid line
//! `t = 0`, or in the stretched reference frame where the domain no longer
//! depends on the aperture. Assembly produces symmetric pencils `(A, M)` with
//! a diagonal (lumped) mass matrix.

pub mod assemble;
pub mod cells;
pub mod dump;
pub mod mesh;

pub use crate::eigensolve::SymmetricPencil;
pub use assemble::{
    assemble_decoupled_pencil, assemble_fiber_pencil, assemble_flat_pencil, assemble_reference_pencil,
    assemble_tip_excluded_pencil, ReferencePencil,
};
pub use cells::{lambda_partition, CellPartition};
pub use dump::{dump_pencil, write_triplets};
pub use mesh::{build_mesh, AxisCondition, OuterCondition, StructuredMesh, TruncatedDomain};

/// Bottom of the spectrum of the transverse line-δ problem on the infinite
/// grid with spacing `h_t`, `-(2√(1 + α²h_t²/4) - 2)/h_t²`.
///
/// It lies above `-α²/4` and tends to it as `h_t → 0`; counts on a mesh are
/// taken relative to this value so the discretization shift of the threshold
/// does not masquerade as bound states.
pub fn mesh_threshold(alpha: f64, h_t: f64) -> f64 {
    let x = 0.5 * alpha * h_t;
    // 2√(1+x²) - 2 written without cancellation
    -2.0 * x * x / ((1.0 + (1.0 + x * x).sqrt()) * h_t * h_t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mesh_threshold_limits() {
        let a: f64 = 2.0;
        assert!((mesh_threshold(a, 1e-4) + 1.0).abs() < 1e-8);
        assert!(mesh_threshold(a, 0.1) > -1.0);
        let h = 0.3;
        let exact = -(2.0 * (1.0 + a * a * h * h / 4.0).sqrt() - 2.0) / (h * h);
        assert!((mesh_threshold(a, h) - exact).abs() < 1e-14);
    }
}
