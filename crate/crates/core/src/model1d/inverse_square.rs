//! Eigenvalue counting for `-u'' - c u / x²` on `(1, ∞)` by Prüfer phase.
//!
//! With `x = e^ξ` and `u = e^{ξ/2} v` the equation `-u'' - c u/x² = -E u`
//! becomes `v'' + (ν² - E e^{2ξ}) v = 0`, `ν² = c - 1/4`. In the scaled phase
//! `v = ρ sin φ`, `v' = k ρ cos φ` one gets
//! `φ' = k cos²φ + (Q/k) sin²φ`, and every zero of `v` is an upward crossing of
//! a multiple of `π`. By Sturm oscillation the number of zeros in `(1, ∞)` of
//! the solution obeying the boundary condition at `x = 1` equals the number of
//! eigenvalues below `-E`.

use serde::Serialize;

use super::ode::{integrate, Tolerances};
use super::BoundaryCondition;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InverseSquareProblem {
    pub c: f64,
    pub bc: BoundaryCondition,
    /// Truncation radius. `None` uses `4 sqrt(c/E)`, four times the turning point.
    pub x_max: Option<f64>,
}

impl InverseSquareProblem {
    pub fn new(c: f64, bc: BoundaryCondition) -> Result<Self> {
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::param("c", format!("must be positive, got {c}")));
        }
        Ok(Self { c, bc, x_max: None })
    }

    pub fn with_x_max(mut self, x_max: f64) -> Result<Self> {
        if !(x_max > 1.0) {
            return Err(Error::param("x_max", format!("must exceed 1, got {x_max}")));
        }
        self.x_max = Some(x_max);
        Ok(self)
    }
}

const MAX_DOUBLINGS: usize = 6;

/// Number of eigenvalues below `-e` (with `e > 0` the depth).
///
/// The count is recomputed with the truncation radius doubled until two
/// consecutive radii agree.
pub fn inverse_square_count(p: &InverseSquareProblem, e: f64) -> Result<usize> {
    if !(e > 0.0 && e.is_finite()) {
        return Err(Error::param("E", format!("depth must be positive, got {e}")));
    }
    if e >= p.c {
        return Ok(0);
    }
    let mut x_max = p.x_max.unwrap_or(4.0 * (p.c / e).sqrt()).max(1.0 + 1e-9);
    let mut prev = phase_count(p, e, x_max)?;
    for _ in 0..MAX_DOUBLINGS {
        x_max *= 2.0;
        let next = phase_count(p, e, x_max)?;
        if next == prev {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::Convergence(format!(
        "c = {}, E = {e:e}: count still changing at x_max = {x_max:e}",
        p.c
    )))
}

/// Oscillation count with a fixed truncation radius.
pub fn phase_count(p: &InverseSquareProblem, e: f64, x_max: f64) -> Result<usize> {
    let phase = end_phase(p, e, x_max)?;
    Ok((phase / std::f64::consts::PI).floor().max(0.0) as usize)
}

fn end_phase(p: &InverseSquareProblem, e: f64, x_max: f64) -> Result<f64> {
    let nu2 = p.c - 0.25;
    let k = if nu2 > 0.0 { nu2.sqrt() } else { 1.0 };
    let phi0 = match p.bc {
        BoundaryCondition::Dirichlet => 0.0,
        // v'/v = -1/2 at ξ = 0, i.e. cot φ = -1/(2k)
        BoundaryCondition::Neumann => (2.0 * k).atan2(-1.0),
    };
    let rhs = |xi: f64, phi: f64| {
        let q = nu2 - e * (2.0 * xi).exp();
        let (s, c) = phi.sin_cos();
        k * c * c + q / k * s * s
    };
    integrate(rhs, 0.0, phi0, x_max.ln(), Tolerances::default())
}

/// Counts at each depth of `depths`, in input order.
pub fn inverse_square_counts(p: &InverseSquareProblem, depths: &[f64]) -> Result<Vec<usize>> {
    depths.iter().map(|&e| inverse_square_count(p, e)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigensolve::tridiag::SymTridiagonal;
    use BoundaryCondition::{Dirichlet, Neumann};

    /// Three-point discretization on `(1, b)` with Dirichlet at `b`.
    fn fd_count(c: f64, bc: BoundaryCondition, e: f64, b: f64, n: usize) -> usize {
        let h = (b - 1.0) / n as f64;
        let inv = 1.0 / h;
        let (first, mut diag, mut mass) = match bc {
            Dirichlet => (1, Vec::new(), Vec::new()),
            Neumann => (0, Vec::new(), Vec::new()),
        };
        for j in first..n {
            let x = 1.0 + j as f64 * h;
            let (stiff, m) = if j == 0 { (inv, 0.5 * h) } else { (2.0 * inv, h) };
            diag.push(stiff - c / (x * x) * m);
            mass.push(m);
        }
        let off = vec![-inv; diag.len() - 1];
        SymTridiagonal::from_pencil(&diag, &off, &mass).count_below(-e)
    }

    #[test]
    fn matches_finite_difference_oracle() {
        for (c, bc, e) in [
            (1.0, Dirichlet, 0.5),
            (1.0, Dirichlet, 0.01),
            (2.0, Neumann, 0.01),
            (5.0, Dirichlet, 1e-2),
        ] {
            let p = InverseSquareProblem::new(c, bc).unwrap();
            let fd = fd_count(c, bc, e, 200.0, 200_000);
            assert_eq!(inverse_square_count(&p, e).unwrap(), fd, "c={c} {bc:?} E={e}");
        }
    }

    #[test]
    fn nothing_below_the_potential_minimum() {
        let p = InverseSquareProblem::new(1.0, Dirichlet).unwrap();
        assert_eq!(inverse_square_count(&p, 1.0).unwrap(), 0);
        assert_eq!(inverse_square_count(&p, 3.0).unwrap(), 0);
        assert!(inverse_square_count(&p, 0.0).is_err());
    }

    #[test]
    fn subcritical_count_stays_bounded() {
        let p = InverseSquareProblem::new(0.25, Dirichlet).unwrap();
        let a = inverse_square_count(&p, 1e-4).unwrap();
        let b = inverse_square_count(&p, 1e-12).unwrap();
        assert!(b <= a + 1);
    }

    #[test]
    fn counts_grow_as_depth_shrinks() {
        let p = InverseSquareProblem::new(2.0, Neumann).unwrap();
        let mut prev = 0;
        for j in 1..=12 {
            let n = inverse_square_count(&p, 10f64.powi(-j)).unwrap();
            assert!(n >= prev);
            prev = n;
        }
        assert!(prev >= 5);
    }

    #[test]
    fn truncation_doubling_is_stable() {
        let p = InverseSquareProblem::new(1.0, Dirichlet).unwrap();
        let e = 1e-8;
        let base = 4.0 * (1.0f64 / e).sqrt();
        let a = phase_count(&p, e, base).unwrap();
        let b = phase_count(&p, e, 2.0 * base).unwrap();
        assert_eq!(a, b);
    }
}
