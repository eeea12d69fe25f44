//! Shift-invert Lanczos in the `M` inner product with full
//! reorthogonalization, locking and explicit restarts.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::ldlt::{Factorization, Symbolic};
use super::sparse::SymmetricPencil;

#[derive(Debug, Clone, Copy)]
pub struct LanczosOptions {
    /// Relative accuracy of converged Ritz values of the inverted operator.
    pub ritz_tol: f64,
    pub max_restarts: usize,
    pub seed: u64,
}

impl Default for LanczosOptions {
    fn default() -> Self {
        Self {
            ritz_tol: 1e-11,
            max_restarts: 60,
            seed: 0x5eed_c0de,
        }
    }
}

pub(crate) struct ShiftInvert<'a> {
    pub pencil: &'a SymmetricPencil,
    pub sym: &'a Symbolic,
    pub fac: &'a Factorization,
    pub sigma: f64,
}

pub(crate) struct Eigenpairs {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<f64>>,
    pub converged: bool,
}

fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

impl ShiftInvert<'_> {
    fn op(&self, mv: &[f64]) -> Vec<f64> {
        self.sym.solve(self.fac, mv)
    }

    fn mul_m(&self, x: &[f64]) -> Vec<f64> {
        self.pencil.m.apply(x)
    }

    /// Removes the components along `basis` (given with their `M` images)
    /// twice over, returning the coefficients of the first pass plus the second.
    fn orthogonalize(w: &mut [f64], basis: &[(Vec<f64>, Vec<f64>)]) -> Vec<f64> {
        let mut coef = vec![0.0; basis.len()];
        for _ in 0..2 {
            for (c, (v, mv)) in coef.iter_mut().zip(basis) {
                let h = dot(mv, w);
                *c += h;
                axpy(-h, v, w);
            }
        }
        coef
    }

    /// Lowest `k` eigenpairs, all above the shift.
    pub fn run(&self, k: usize, opts: &LanczosOptions, pass: u64) -> Eigenpairs {
        let n = self.pencil.dim();
        let k = k.min(n);
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ pass.wrapping_mul(0x9e37_79b9));
        let mut locked: Vec<(Vec<f64>, Vec<f64>)> = Vec::new();
        let mut locked_theta: Vec<f64> = Vec::new();
        let mut start: Option<Vec<f64>> = None;
        let mut restarts = 0;

        while locked.len() < k {
            let free = n - locked.len();
            let need = k - locked.len();
            let mdim = free.min((2 * need + 20).max(40));

            let mut v = start
                .take()
                .unwrap_or_else(|| (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect());
            Self::orthogonalize(&mut v, &locked);
            let mut mv = self.mul_m(&v);
            let mut nrm = dot(&v, &mv).sqrt();
            if !(nrm > 0.0) || !nrm.is_finite() {
                v = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
                Self::orthogonalize(&mut v, &locked);
                mv = self.mul_m(&v);
                nrm = dot(&v, &mv).sqrt();
            }
            v.iter_mut().for_each(|x| *x /= nrm);
            mv.iter_mut().for_each(|x| *x /= nrm);

            let mut basis: Vec<(Vec<f64>, Vec<f64>)> = vec![(v, mv)];
            let mut h = DMatrix::<f64>::zeros(mdim, mdim);
            let mut beta_last = 0.0;
            for j in 0..mdim {
                let mut w = self.op(&basis[j].1);
                Self::orthogonalize(&mut w, &locked);
                let coef = Self::orthogonalize(&mut w, &basis);
                for (i, c) in coef.iter().enumerate() {
                    h[(i, j)] = *c;
                    h[(j, i)] = *c;
                }
                let mw = self.mul_m(&w);
                let beta = dot(&w, &mw).max(0.0).sqrt();
                beta_last = beta;
                let scale = h[(j, j)].abs().max(1e-300);
                if j + 1 == mdim || beta <= 1e-13 * scale {
                    break;
                }
                let inv = 1.0 / beta;
                h[(j + 1, j)] = beta;
                h[(j, j + 1)] = beta;
                basis.push((
                    w.iter().map(|x| x * inv).collect(),
                    mw.iter().map(|x| x * inv).collect(),
                ));
            }

            let d = basis.len();
            let hd = h.view((0, 0), (d, d)).into_owned();
            let eig = SymmetricEigen::new(hd);
            let mut idx: Vec<usize> = (0..d).collect();
            idx.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));

            let theta_max = eig.eigenvalues.iter().fold(0.0f64, |s, t| s.max(t.abs()));
            let invariant = beta_last <= 1e-13 * theta_max.max(1e-300);
            let mut newly = 0;
            for &i in idx.iter().take(need) {
                let theta = eig.eigenvalues[i];
                let est = beta_last * eig.eigenvectors[(d - 1, i)].abs();
                let ok = theta > 0.0 && (invariant || est <= opts.ritz_tol * theta.abs());
                if !ok {
                    break;
                }
                let x = self.ritz_vector(&basis, &eig.eigenvectors, i);
                let mut x = x;
                Self::orthogonalize(&mut x, &locked);
                let mut mx = self.mul_m(&x);
                let nx = dot(&x, &mx).sqrt();
                if !(nx > 0.0) {
                    break;
                }
                x.iter_mut().for_each(|t| *t /= nx);
                mx.iter_mut().for_each(|t| *t /= nx);
                locked.push((x, mx));
                locked_theta.push(theta);
                newly += 1;
            }

            if locked.len() >= k {
                break;
            }
            restarts += 1;
            if restarts > opts.max_restarts {
                return self.finish(locked, locked_theta, false);
            }
            // restart from the wanted, not yet converged Ritz directions
            let wanted: Vec<usize> = idx
                .iter()
                .skip(newly)
                .take(k - locked.len())
                .copied()
                .filter(|&i| eig.eigenvalues[i] > 0.0)
                .collect();
            if invariant || wanted.is_empty() {
                start = None;
            } else {
                let mut s = vec![0.0; n];
                for &i in &wanted {
                    let x = self.ritz_vector(&basis, &eig.eigenvectors, i);
                    axpy(1.0, &x, &mut s);
                }
                start = Some(s);
            }
        }
        self.finish(locked, locked_theta, true)
    }

    fn ritz_vector(&self, basis: &[(Vec<f64>, Vec<f64>)], s: &DMatrix<f64>, i: usize) -> Vec<f64> {
        let n = self.pencil.dim();
        let mut x = vec![0.0; n];
        for (r, (v, _)) in basis.iter().enumerate() {
            axpy(s[(r, i)], v, &mut x);
        }
        x
    }

    fn finish(&self, locked: Vec<(Vec<f64>, Vec<f64>)>, theta: Vec<f64>, converged: bool) -> Eigenpairs {
        let mut pairs: Vec<(f64, Vec<f64>)> = locked
            .into_iter()
            .zip(theta)
            .map(|((x, _), t)| (self.sigma + 1.0 / t, x))
            .collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let (values, vectors) = pairs.into_iter().unzip();
        Eigenpairs {
            values,
            vectors,
            converged,
        }
    }
}
