//! Sparse symmetric generalized eigenproblems `A x = λ M x`: exact eigenvalue
//! counts from the inertia of `A - μM`, and the lowest eigenpairs by
//! shift-invert Lanczos, cross-checked against the inertia.

pub mod dense;
pub mod lanczos;
pub mod ldlt;
pub mod ordering;
pub mod sparse;
pub mod tridiag;

use serde::Serialize;

use crate::error::{Error, Result};
use lanczos::{LanczosOptions, ShiftInvert};
use ldlt::{Factorization, Symbolic};
pub use sparse::{CsrMatrix, PencilMeta, SymmetricPencil, TripletBuilder};

/// Number of pencil eigenvalues strictly below `mu`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InertiaCount {
    pub mu: f64,
    pub count: usize,
    /// False when the factorization at `mu` broke down and the count was
    /// taken at a perturbed shift.
    pub factorization_ok: bool,
    /// Shift actually factorized.
    pub mu_used: f64,
}

/// Counts eigenvalues below many shifts with one symbolic analysis.
#[derive(Debug, Clone)]
pub struct InertiaCounter {
    sym: Symbolic,
}

const PERTURBATION: f64 = 1e-10;

impl InertiaCounter {
    pub fn new(p: &SymmetricPencil) -> Self {
        Self {
            sym: Symbolic::analyse(p),
        }
    }

    pub fn symbolic(&self) -> &Symbolic {
        &self.sym
    }

    pub fn count(&self, mu: f64) -> Result<InertiaCount> {
        if !mu.is_finite() {
            return Err(Error::param("mu", format!("shift must be finite, got {mu}")));
        }
        match self.sym.factor(mu, false) {
            Ok(f) => Ok(InertiaCount {
                mu,
                count: f.negative,
                factorization_ok: true,
                mu_used: mu,
            }),
            Err(first) => {
                let delta = PERTURBATION * if mu == 0.0 { 1.0 } else { mu.abs() };
                for shifted in [mu - delta, mu + delta] {
                    if let Ok(f) = self.sym.factor(shifted, false) {
                        return Ok(InertiaCount {
                            mu,
                            count: f.negative,
                            factorization_ok: false,
                            mu_used: shifted,
                        });
                    }
                }
                Err(Error::Factorization {
                    mu,
                    detail: format!(
                        "zero pivot {:e} at column {} persists under shifts of ±{delta:e}",
                        first.pivot, first.column
                    ),
                })
            }
        }
    }

    fn factor_near(&self, mu: f64) -> Result<Factorization> {
        let delta = PERTURBATION * if mu == 0.0 { 1.0 } else { mu.abs() };
        for shifted in [mu, mu - delta, mu - 2.0 * delta] {
            if let Ok(f) = self.sym.factor(shifted, true) {
                return Ok(f);
            }
        }
        Err(Error::Factorization {
            mu,
            detail: "no usable factorization near the shift".into(),
        })
    }
}

/// Number of eigenvalues of the pencil below `mu`.
pub fn count_below(p: &SymmetricPencil, mu: f64) -> Result<InertiaCount> {
    InertiaCounter::new(p).count(mu)
}

/// Lowest eigenpairs of a pencil.
#[derive(Debug, Clone, Serialize)]
pub struct SpectralResult {
    pub eigenvalues: Vec<f64>,
    /// `‖A x - λ M x‖₂ / ‖x‖_M` per pair.
    pub residual_norms: Vec<f64>,
    pub shift_used: f64,
    pub mesh_meta: PencilMeta,
    /// Whether every requested pair converged.
    pub converged: bool,
    /// Residual bound each pair had to meet.
    pub tolerance: f64,
    #[serde(skip)]
    pub eigenvectors: Vec<Vec<f64>>,
}

/// Relative residual tolerance with respect to [`SymmetricPencil::residual_scale`].
pub const RESIDUAL_TOL: f64 = 1e-8;
/// Relative half-width of the inertia window around computed eigenvalues.
pub const INERTIA_EPS: f64 = 1e-9;

/// The `k` lowest eigenpairs, by shift-invert Lanczos around `sigma`.
///
/// `sigma` is lowered until no eigenvalue lies below it. The result is
/// checked against the inertia: the number of eigenvalues in
/// `[λ₁ - ε, λ_k + ε]` must be exactly `k`, unless the surplus sits within
/// `ε` of `λ_k` (a multiple top eigenvalue).
pub fn lowest_eigenpairs(p: &SymmetricPencil, k: usize, sigma: f64) -> Result<SpectralResult> {
    lowest_eigenpairs_with(p, k, sigma, &LanczosOptions::default())
}

pub fn lowest_eigenpairs_with(
    p: &SymmetricPencil,
    k: usize,
    sigma: f64,
    opts: &LanczosOptions,
) -> Result<SpectralResult> {
    if k < 1 {
        return Err(Error::param("k", "at least one eigenpair must be requested"));
    }
    if k > p.dim() {
        return Err(Error::param(
            "k",
            format!("{k} eigenpairs requested from a pencil of dimension {}", p.dim()),
        ));
    }
    if !sigma.is_finite() {
        return Err(Error::param("sigma", "shift must be finite"));
    }
    let counter = InertiaCounter::new(p);

    // move the shift below the spectrum
    let mut sigma = sigma;
    let mut step = sigma.abs().max(1.0) * 0.05;
    let mut fac = counter.factor_near(sigma)?;
    let mut tries = 0;
    while fac.negative > 0 {
        tries += 1;
        if tries > 80 {
            return Err(Error::NonConvergence(
                "could not place the shift below the spectrum".into(),
            ));
        }
        sigma -= step;
        step *= 2.0;
        fac = counter.factor_near(sigma)?;
    }
    let sigma = fac.mu;

    let op = ShiftInvert {
        pencil: p,
        sym: counter.symbolic(),
        fac: &fac,
        sigma,
    };
    let scale = p.residual_scale();
    let tol = RESIDUAL_TOL * scale;

    let mut want = k;
    let mut pass = 0u64;
    loop {
        let pairs = op.run(want, opts, pass);
        let mut values = Vec::with_capacity(pairs.values.len());
        let mut residuals = Vec::with_capacity(pairs.values.len());
        for x in &pairs.vectors {
            let ax = p.a.apply(x);
            let mx = p.m.apply(x);
            let xmx: f64 = x.iter().zip(&mx).map(|(a, b)| a * b).sum();
            let lam = x.iter().zip(&ax).map(|(a, b)| a * b).sum::<f64>() / xmx;
            let r: f64 = ax
                .iter()
                .zip(&mx)
                .map(|(a, b)| (a - lam * b).powi(2))
                .sum::<f64>()
                .sqrt();
            values.push(lam);
            residuals.push(r / xmx.sqrt());
        }
        let mut order: Vec<usize> = (0..values.len()).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        let values: Vec<f64> = order.iter().map(|&i| values[i]).collect();
        let residuals: Vec<f64> = order.iter().map(|&i| residuals[i]).collect();
        let vectors: Vec<Vec<f64>> = order.iter().map(|&i| pairs.vectors[i].clone()).collect();

        if !pairs.converged || values.len() < k {
            return Ok(SpectralResult {
                eigenvalues: values,
                residual_norms: residuals,
                shift_used: sigma,
                mesh_meta: p.meta.clone(),
                converged: false,
                tolerance: tol,
                eigenvectors: vectors,
            });
        }

        let (lo, hi) = (values[0], values[k - 1]);
        let eps = INERTIA_EPS * lo.abs().max(hi.abs()).max(hi - lo).max(f64::MIN_POSITIVE);
        let below = counter.count(lo - eps)?.count;
        let upto = counter.count(hi + eps)?.count;
        // extra eigenvalues within ε of λ_k are copies of λ_k, not misses
        let tie_at_top = below == 0 && upto > k && {
            let strict = counter.count(hi - eps)?.count;
            strict == values[..k].iter().filter(|&&v| v < hi - eps).count()
        };
        if (below == 0 && upto == k) || tie_at_top {
            return Ok(SpectralResult {
                eigenvalues: values[..k].to_vec(),
                residual_norms: residuals[..k].to_vec(),
                shift_used: sigma,
                mesh_meta: p.meta.clone(),
                converged: residuals[..k].iter().all(|&r| r <= tol),
                tolerance: tol,
                eigenvectors: vectors[..k].to_vec(),
            });
        }
        // a multiple eigenvalue can hide from a single Krylov sequence: ask
        // for more pairs with a fresh start and keep the lowest
        pass += 1;
        if pass > 3 || want >= p.dim() {
            return Err(Error::MissedEigenvalue {
                inertia: upto - below,
                found: k,
            });
        }
        want = (want + (upto - below).max(1)).min(p.dim());
    }
}
