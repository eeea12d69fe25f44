//! Compressed sparse row storage and the symmetric pencil type.

use serde::Serialize;

use crate::error::{Error, Result};

/// Square sparse matrix in CSR form with sorted, duplicate-free columns.
///
/// Symmetric matrices are stored with both triangles.
#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix {
    n: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<f64>,
}

impl CsrMatrix {
    pub fn from_parts(n: usize, row_ptr: Vec<usize>, col_idx: Vec<usize>, values: Vec<f64>) -> Self {
        assert_eq!(row_ptr.len(), n + 1);
        assert_eq!(col_idx.len(), values.len());
        assert_eq!(row_ptr[n], col_idx.len());
        Self {
            n,
            row_ptr,
            col_idx,
            values,
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::diagonal(&vec![1.0; n])
    }

    pub fn diagonal(d: &[f64]) -> Self {
        let n = d.len();
        Self::from_parts(n, (0..=n).collect(), (0..n).collect(), d.to_vec())
    }

    pub fn from_dense(a: &[Vec<f64>]) -> Self {
        let mut t = TripletBuilder::new(a.len());
        for (i, row) in a.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if v != 0.0 {
                    t.push(i, j, v);
                }
            }
        }
        t.build()
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row_ptr(&self) -> &[usize] {
        &self.row_ptr
    }

    pub fn col_idx(&self) -> &[usize] {
        &self.col_idx
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        self.col_idx[r.clone()]
            .iter()
            .copied()
            .zip(self.values[r].iter().copied())
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        match self.col_idx[r.clone()].binary_search(&j) {
            Ok(p) => self.values[r.start + p],
            Err(_) => 0.0,
        }
    }

    pub fn diag(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.get(i, i)).collect()
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.n).all(|i| self.row(i).all(|(j, v)| j == i || v == 0.0))
    }

    /// `y = A x`.
    pub fn mul_vec(&self, x: &[f64], y: &mut [f64]) {
        for (i, yi) in y.iter_mut().enumerate().take(self.n) {
            let mut s = 0.0;
            for p in self.row_ptr[i]..self.row_ptr[i + 1] {
                s += self.values[p] * x[self.col_idx[p]];
            }
            *yi = s;
        }
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.n];
        self.mul_vec(x, &mut y);
        y
    }

    /// Exact entrywise symmetry.
    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| self.row(i).all(|(j, v)| self.get(j, i) == v))
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        (0..self.n)
            .map(|i| self.row(i).map(|(_, v)| v.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Lower Gershgorin bound `min_i (a_ii - Σ_{j≠i} |a_ij|)`.
    pub fn gershgorin_lower(&self) -> f64 {
        (0..self.n)
            .map(|i| self.row(i).map(|(j, v)| if j == i { v } else { -v.abs() }).sum::<f64>())
            .fold(f64::INFINITY, f64::min)
    }

    /// `self + s·other`, on the union pattern.
    pub fn add_scaled(&self, other: &CsrMatrix, s: f64) -> CsrMatrix {
        assert_eq!(self.n, other.n);
        let mut t = TripletBuilder::new(self.n);
        for i in 0..self.n {
            for (j, v) in self.row(i) {
                t.push(i, j, v);
            }
            for (j, v) in other.row(i) {
                t.push(i, j, s * v);
            }
        }
        t.build()
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let mut d = vec![vec![0.0; self.n]; self.n];
        for (i, row) in d.iter_mut().enumerate() {
            for (j, v) in self.row(i) {
                row[j] = v;
            }
        }
        d
    }

    /// Principal submatrix on the sorted index set `keep`.
    pub fn submatrix(&self, keep: &[usize]) -> CsrMatrix {
        let mut local = vec![usize::MAX; self.n];
        for (a, &i) in keep.iter().enumerate() {
            local[i] = a;
        }
        let mut t = TripletBuilder::new(keep.len());
        for (a, &i) in keep.iter().enumerate() {
            for (j, v) in self.row(i) {
                if local[j] != usize::MAX {
                    t.push(a, local[j], v);
                }
            }
        }
        t.build()
    }

    /// Entries `(row, col, value)` in row-major order.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.n).flat_map(move |i| self.row(i).map(move |(j, v)| (i, j, v)))
    }
}

/// Accumulates `(i, j, v)` entries; duplicates are summed.
#[derive(Debug, Clone, Default)]
pub struct TripletBuilder {
    n: usize,
    entries: Vec<(usize, usize, f64)>,
}

impl TripletBuilder {
    pub fn new(n: usize) -> Self {
        Self { n, entries: Vec::new() }
    }

    pub fn with_capacity(n: usize, cap: usize) -> Self {
        Self {
            n,
            entries: Vec::with_capacity(cap),
        }
    }

    pub fn push(&mut self, i: usize, j: usize, v: f64) {
        debug_assert!(i < self.n && j < self.n);
        self.entries.push((i, j, v));
    }

    /// Adds `v` at `(i, j)` and `(j, i)` (once on the diagonal).
    pub fn push_sym(&mut self, i: usize, j: usize, v: f64) {
        self.push(i, j, v);
        if i != j {
            self.push(j, i, v);
        }
    }

    pub fn build(mut self) -> CsrMatrix {
        // stable sort keeps the summation order of duplicates deterministic
        self.entries.sort_by_key(|&(i, j, _)| (i, j));
        let mut row_ptr = vec![0usize; self.n + 1];
        let mut col_idx = Vec::with_capacity(self.entries.len());
        let mut values: Vec<f64> = Vec::with_capacity(self.entries.len());
        let mut last: Option<(usize, usize)> = None;
        for &(i, j, v) in &self.entries {
            if last == Some((i, j)) {
                *values.last_mut().unwrap() += v;
            } else {
                col_idx.push(j);
                values.push(v);
                row_ptr[i + 1] += 1;
                last = Some((i, j));
            }
        }
        for i in 0..self.n {
            row_ptr[i + 1] += row_ptr[i];
        }
        CsrMatrix::from_parts(self.n, row_ptr, col_idx, values)
    }
}

/// Provenance of an assembled pencil.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct PencilMeta {
    pub form: String,
    pub h_s: Option<f64>,
    pub h_t: Option<f64>,
    pub extent_s: Option<f64>,
    pub extent_t: Option<f64>,
}

impl PencilMeta {
    pub fn named(form: impl Into<String>) -> Self {
        Self {
            form: form.into(),
            ..Self::default()
        }
    }
}

/// Discretized quadratic form `A` over the mass form `M`; the generalized
/// eigenproblem is `A x = λ M x`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricPencil {
    pub a: CsrMatrix,
    pub m: CsrMatrix,
    pub meta: PencilMeta,
}

impl SymmetricPencil {
    pub fn new(a: CsrMatrix, m: CsrMatrix, meta: PencilMeta) -> Result<Self> {
        if a.dim() != m.dim() {
            return Err(Error::InvariantViolation(format!(
                "A is {0}x{0} but M is {1}x{1}",
                a.dim(),
                m.dim()
            )));
        }
        if !a.is_symmetric() || !m.is_symmetric() {
            return Err(Error::InvariantViolation("pencil is not symmetric".into()));
        }
        if m.diag().iter().any(|&d| !(d > 0.0)) {
            return Err(Error::InvariantViolation(
                "mass matrix has a non-positive diagonal entry".into(),
            ));
        }
        Ok(Self { a, m, meta })
    }

    pub fn dim(&self) -> usize {
        self.a.dim()
    }

    /// Shifts the pencil to `(A - c M, M)`, moving every eigenvalue by `-c`.
    pub fn shifted(&self, c: f64) -> Self {
        Self {
            a: self.a.add_scaled(&self.m, -c),
            m: self.m.clone(),
            meta: self.meta.clone(),
        }
    }

    /// Restriction to the unknowns `keep` (sorted), i.e. Dirichlet values
    /// on everything else.
    pub fn restrict(&self, keep: &[usize]) -> Result<Self> {
        Self::new(self.a.submatrix(keep), self.m.submatrix(keep), self.meta.clone())
    }

    /// Scale used for residual tolerances: `‖A‖∞ / sqrt(min M_ii)` bounds
    /// `‖A x‖₂ / ‖x‖_M`.
    pub fn residual_scale(&self) -> f64 {
        let mmin = self.m.diag().into_iter().fold(f64::INFINITY, f64::min);
        (self.a.norm_inf() + self.m.norm_inf()) / mmin.sqrt()
    }

    /// Rough bound on the spectral radius of `M⁻¹A` for diagonal-dominant `M`.
    pub fn spectral_scale(&self) -> f64 {
        let md = self.m.diag();
        (0..self.dim())
            .map(|i| self.a.row(i).map(|(_, v)| v.abs()).sum::<f64>() / md[i])
            .fold(0.0, f64::max)
            .max(f64::MIN_POSITIVE)
    }
}
