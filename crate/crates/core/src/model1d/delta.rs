//! The interval `(-L, L)` with a point δ-interaction of strength `α` at the
//! origin and Dirichlet or Neumann ends.
//!
//! Even eigenfunctions satisfy the jump condition `[u'](0) = -α u(0)`. For a
//! negative energy `-κ²` this gives the secular equations
//! `2κ coth(κL) = α` (Dirichlet) and `2κ tanh(κL) = α` (Neumann). Both are
//! solved in the offset `δ = κ - α/2`, in which the distance to the threshold
//! `-α²/4` is `-δ(α + δ)` and keeps full relative precision even when it is
//! far below machine epsilon relative to `α²`.

use serde::Serialize;

use super::BoundaryCondition;
use crate::eigensolve::tridiag::SymTridiagonal;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IntervalDeltaProblem {
    pub alpha: f64,
    pub half_length: f64,
    pub bc: BoundaryCondition,
}

impl IntervalDeltaProblem {
    pub fn new(alpha: f64, half_length: f64, bc: BoundaryCondition) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::param("alpha", format!("must be positive, got {alpha}")));
        }
        if !(half_length > 0.0 && half_length.is_finite()) {
            return Err(Error::param(
                "half_length",
                format!("must be positive, got {half_length}"),
            ));
        }
        Ok(Self { alpha, half_length, bc })
    }

    pub fn threshold(&self) -> f64 {
        -0.25 * self.alpha * self.alpha
    }
}

/// A root of the secular equation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SecularSolution {
    /// Decay rate of the bound state.
    pub kappa: f64,
    /// Ground-state energy `-κ²`.
    pub energy: f64,
    /// `energy + α²/4`, accurate to full relative precision.
    pub gap: f64,
    /// Secular function `2κ coth(κL) - α` (resp. `tanh`) at the returned root.
    pub residual: f64,
}

/// Negative ground state of the interval problem.
///
/// Returns `None` for Dirichlet ends with `αL <= 2`: then `2κ coth(κL) > 2/L >= α`
/// for every `κ > 0` and there is no negative eigenvalue.
pub fn delta_interval_ground(p: &IntervalDeltaProblem) -> Option<SecularSolution> {
    let a = p.alpha;
    let l = p.half_length;
    let half = 0.5 * a;

    // secular function divided by two, written in the offset δ
    let g = |d: f64| -> f64 {
        let kappa = half + d;
        let q = (-2.0 * kappa * l).exp();
        let em = -(-2.0 * kappa * l).exp_m1(); // 1 - q
        match p.bc {
            BoundaryCondition::Neumann => d - 2.0 * kappa * q / (1.0 + q),
            BoundaryCondition::Dirichlet => d + 2.0 * kappa * q / em,
        }
    };

    let (mut lo, mut hi) = match p.bc {
        BoundaryCondition::Neumann => {
            let mut hi = 50.0 * half;
            while g(hi) <= 0.0 {
                hi *= 2.0;
            }
            (0.0, hi)
        }
        BoundaryCondition::Dirichlet => {
            if a * l <= 2.0 {
                return None;
            }
            (-half, 0.0)
        }
    };

    for _ in 0..3000 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if g(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    // the endpoint with the smaller secular value
    let d = if g(lo).abs() <= g(hi).abs() { lo } else { hi };
    let kappa = half + d;
    let residual = match p.bc {
        BoundaryCondition::Neumann => 2.0 * kappa * (kappa * l).tanh() - a,
        BoundaryCondition::Dirichlet => 2.0 * kappa / (kappa * l).tanh() - a,
    };
    Some(SecularSolution {
        kappa,
        energy: -kappa * kappa,
        gap: -d * (a + d),
        residual,
    })
}

/// Lowest eigenvalue of the Dirichlet interval problem, whatever its sign.
///
/// Above zero the even ground state is `sin(k(L - |x|))` with `2k cot(kL) = α`,
/// `k ∈ (0, π/(2L))`.
pub fn dirichlet_ground_energy(alpha: f64, half_length: f64) -> Result<f64> {
    let p = IntervalDeltaProblem::new(alpha, half_length, BoundaryCondition::Dirichlet)?;
    if let Some(s) = delta_interval_ground(&p) {
        return Ok(s.energy);
    }
    if alpha * half_length == 2.0 {
        return Ok(0.0);
    }
    let l = half_length;
    let f = |k: f64| 2.0 * k / (k * l).tan() - alpha;
    let mut lo = 0.0;
    let mut hi = 0.5 * std::f64::consts::PI / l;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        // f decreases from 2/L - α > 0 to -α
        if mid == 0.0 || f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let k = 0.5 * (lo + hi);
    Ok(k * k)
}

/// Finite-difference eigenvalues of the interval problem.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntervalSpectrum {
    pub energies: Vec<f64>,
    pub intervals: usize,
    pub spacing: f64,
    pub warning: Option<String>,
}

/// Lowest `k` eigenvalues of the three-point discretization with `n` cells.
///
/// The δ-interaction enters as `-α/h` on the diagonal of the centre node (the
/// discrete form `Σ|u_{j+1} - u_j|²/h - α|u_0|²` over the mass `h Σ|u_j|²`).
/// Neumann end nodes carry half mass. An odd `n` is rounded up so that the
/// origin is a node.
pub fn delta_interval_spectrum(p: &IntervalDeltaProblem, k: usize, n: usize) -> Result<IntervalSpectrum> {
    if k < 1 {
        return Err(Error::param("k", "at least one eigenvalue must be requested"));
    }
    if n < 100 {
        return Err(Error::param("n", format!("grid needs at least 100 cells, got {n}")));
    }
    let n = n + n % 2;
    let t = interval_matrix(p, n);
    let h = 2.0 * p.half_length / n as f64;
    let warning = resolution_warning(p, h);
    Ok(IntervalSpectrum {
        energies: t.lowest(k),
        intervals: n,
        spacing: h,
        warning,
    })
}

/// Richardson extrapolation `(4E(h/2) - E(h))/3` of the lowest `k` eigenvalues.
pub fn delta_interval_spectrum_extrapolated(p: &IntervalDeltaProblem, k: usize, n: usize) -> Result<IntervalSpectrum> {
    let coarse = delta_interval_spectrum(p, k, n)?;
    let fine = delta_interval_spectrum(p, k, 2 * coarse.intervals)?;
    let energies = coarse
        .energies
        .iter()
        .zip(&fine.energies)
        .map(|(c, f)| (4.0 * f - c) / 3.0)
        .collect();
    Ok(IntervalSpectrum {
        energies,
        intervals: fine.intervals,
        spacing: fine.spacing,
        warning: coarse.warning.or(fine.warning),
    })
}

fn resolution_warning(p: &IntervalDeltaProblem, h: f64) -> Option<String> {
    if p.alpha * h > 0.1 {
        Some(format!(
            "spacing {h:.3e} does not resolve the decay length 2/alpha = {:.3e}",
            2.0 / p.alpha
        ))
    } else {
        None
    }
}

fn interval_matrix(p: &IntervalDeltaProblem, n: usize) -> SymTridiagonal {
    let h = 2.0 * p.half_length / n as f64;
    let inv_h = 1.0 / h;
    // nodes x_j = -L + j h, j = 0..=n; centre at j = n/2
    let (first, last) = match p.bc {
        BoundaryCondition::Dirichlet => (1, n - 1),
        BoundaryCondition::Neumann => (0, n),
    };
    let m = last - first + 1;
    let mut diag = vec![2.0 * inv_h; m];
    let mut mass = vec![h; m];
    if p.bc == BoundaryCondition::Neumann {
        diag[0] = inv_h;
        diag[m - 1] = inv_h;
        mass[0] = 0.5 * h;
        mass[m - 1] = 0.5 * h;
    }
    diag[n / 2 - first] -= p.alpha;
    let off = vec![-inv_h; m - 1];
    SymTridiagonal::from_pencil(&diag, &off, &mass)
}

/// Affine fit of `ln|E₁ + α²/4|` against `L`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThresholdDecay {
    pub half_lengths: Vec<f64>,
    pub log_gaps: Vec<f64>,
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

/// Regresses the logarithmic distance of the ground state to the threshold
/// against the half-length. Lengths without a bound state are skipped.
pub fn threshold_decay(alpha: f64, bc: BoundaryCondition, half_lengths: &[f64]) -> Result<ThresholdDecay> {
    let mut ls = Vec::new();
    let mut ys = Vec::new();
    for &l in half_lengths {
        let p = IntervalDeltaProblem::new(alpha, l, bc)?;
        if let Some(s) = delta_interval_ground(&p) {
            if s.gap != 0.0 {
                ls.push(l);
                ys.push(s.gap.abs().ln());
            }
        }
    }
    let fit = crate::asymptotics::fit::linear_fit(&ls, &ys)?;
    Ok(ThresholdDecay {
        half_lengths: ls,
        log_gaps: ys,
        slope: fit.slope,
        intercept: fit.intercept,
        r_squared: fit.r_squared,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use BoundaryCondition::{Dirichlet, Neumann};

    fn prob(a: f64, l: f64, bc: BoundaryCondition) -> IntervalDeltaProblem {
        IntervalDeltaProblem::new(a, l, bc).unwrap()
    }

    #[test]
    fn neumann_long_interval_reaches_threshold() {
        let s = delta_interval_ground(&prob(2.0, 40.0, Neumann)).unwrap();
        assert!((s.energy + 1.0).abs() < 1e-14);
        assert!(s.gap < 0.0);
    }

    #[test]
    fn neumann_weak_coupling() {
        let s = delta_interval_ground(&prob(0.01, 1.0, Neumann)).unwrap();
        assert!((s.energy / -0.005 - 1.0).abs() < 0.05);
        assert!(s.energy < -0.25 * 0.01 * 0.01);
    }

    #[test]
    fn dirichlet_bound_state_window() {
        let s = delta_interval_ground(&prob(2.0, 5.0, Dirichlet)).unwrap();
        assert!(s.energy > -1.0 && s.energy < 0.0);
        // leading asymptotics of the gap: α² e^{-αL}
        let lead = 4.0 * (-10f64).exp();
        assert!((s.gap / lead - 1.0).abs() < 2e-3);
        assert!(s.residual.abs() < 1e-12);
    }

    #[test]
    fn dirichlet_without_bound_state() {
        assert!(delta_interval_ground(&prob(2.0, 1.0, Dirichlet)).is_none());
        assert!(delta_interval_ground(&prob(1.0, 1.5, Dirichlet)).is_none());
        let e = dirichlet_ground_energy(1.0, 1.5).unwrap();
        assert!(e > 0.0);
    }

    #[test]
    fn weak_dirichlet_approaches_laplacian() {
        let l = 2.0;
        let e = dirichlet_ground_energy(1e-9, l).unwrap();
        let exact = (std::f64::consts::PI / (2.0 * l)).powi(2);
        assert!((e / exact - 1.0).abs() < 1e-6);
    }

    #[test]
    fn neumann_below_dirichlet() {
        for &(a, l) in &[(2.0, 3.0), (1.0, 4.0), (3.0, 1.0)] {
            let n = delta_interval_ground(&prob(a, l, Neumann)).unwrap();
            let d = delta_interval_ground(&prob(a, l, Dirichlet)).unwrap();
            assert!(n.energy < d.energy);
        }
    }

    #[test]
    fn gap_keeps_precision_far_out() {
        let s = delta_interval_ground(&prob(2.0, 25.0, Dirichlet)).unwrap();
        let lead = 4.0 * (-50f64).exp();
        assert!((s.gap / lead - 1.0).abs() < 1e-15 * 1e6);
    }

    #[test]
    fn finite_differences_match_secular_roots() {
        for bc in [Dirichlet, Neumann] {
            let p = prob(2.0, 5.0, bc);
            let exact = delta_interval_ground(&p).unwrap().energy;
            let fd = delta_interval_spectrum_extrapolated(&p, 2, 20_000).unwrap();
            assert!((fd.energies[0] / exact - 1.0).abs() < 1e-8, "{bc:?}");
            assert!(fd.energies[1] >= -1e-6);
        }
    }

    #[test]
    fn rejects_small_grids() {
        assert!(delta_interval_spectrum(&prob(1.0, 1.0, Neumann), 1, 50).is_err());
        assert!(delta_interval_spectrum(&prob(1.0, 1.0, Neumann), 0, 500).is_err());
        let coarse = delta_interval_spectrum(&prob(50.0, 10.0, Neumann), 1, 100).unwrap();
        assert!(coarse.warning.is_some());
    }
}
