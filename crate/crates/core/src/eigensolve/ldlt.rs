//! Multifrontal supernodal `L D Lᵀ` factorization of `A - μM` with
//! Bunch–Kaufman 1×1/2×2 pivoting inside each front.
//!
//! The symbolic phase (ordering, elimination tree, supernodes, front row
//! structures) depends only on the union pattern of `A` and `M` and is shared
//! by every shift. Pivots are chosen among the fully summed columns of a front
//! only; there is no delayed pivoting. A pivot that is numerically zero makes
//! the factorization report a breakdown instead of perturbing it, since a
//! perturbed pivot could change the inertia.

use super::ordering::{nested_dissection, Graph};
use super::sparse::{CsrMatrix, SymmetricPencil};

/// Columns processed together before a trailing matrix-matrix update.
const BLOCK: usize = 48;
/// Bunch–Kaufman growth constant `(1 + sqrt 17)/8`.
const BK_ALPHA: f64 = 0.640_388_203_202_208;
/// A pivot below this multiple of the largest entry of `A - μM` is a breakdown.
const PIVOT_TOL: f64 = 1e-14;

#[derive(Debug, Clone)]
struct Supernode {
    first: usize,
    last: usize,
    /// Global (permuted) row indices of the front; the first `last - first`
    /// are the supernode's own columns.
    rows: Vec<usize>,
    children: Vec<usize>,
}

impl Supernode {
    fn ncols(&self) -> usize {
        self.last - self.first
    }
}

/// Pattern-dependent part of the factorization.
#[derive(Debug, Clone)]
pub struct Symbolic {
    n: usize,
    /// `perm[k]`: original index of the `k`-th eliminated unknown.
    perm: Vec<usize>,
    /// Lower-triangular columns of the permuted matrix: rows and values.
    col_ptr: Vec<usize>,
    row_idx: Vec<usize>,
    a_val: Vec<f64>,
    m_val: Vec<f64>,
    a_max: f64,
    m_max: f64,
    snodes: Vec<Supernode>,
}

/// Diagonal block of `D`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Pivot {
    One(f64),
    Two(f64, f64, f64),
}

#[derive(Debug, Clone)]
struct FrontFactor {
    /// `m × k` column-major panel of `L` (unit diagonal implied).
    panel: Vec<f64>,
    /// Front-local row of the `p`-th pivot column.
    lperm: Vec<usize>,
    pivots: Vec<(usize, Pivot)>,
}

/// Inertia of `A - μM` and, optionally, the factors.
#[derive(Debug, Clone)]
pub struct Factorization {
    pub mu: f64,
    pub negative: usize,
    pub positive: usize,
    /// Smallest `|pivot|` relative to the largest matrix entry.
    pub min_pivot_ratio: f64,
    fronts: Option<Vec<FrontFactor>>,
}

/// Why a numeric factorization stopped.
#[derive(Debug, Clone, PartialEq)]
pub struct Breakdown {
    pub mu: f64,
    pub column: usize,
    pub pivot: f64,
}

impl Symbolic {
    /// Analyses the union pattern of `A` and `M`.
    pub fn analyse(p: &SymmetricPencil) -> Self {
        Self::analyse_matrices(&p.a, &p.m)
    }

    pub fn analyse_matrices(a: &CsrMatrix, m: &CsrMatrix) -> Self {
        let n = a.dim();
        let pattern = a.add_scaled(m, 0.0);
        let g = Graph::from_pattern(n, pattern.row_ptr(), pattern.col_idx());
        let nd = nested_dissection(&g);

        // postorder the elimination tree of the dissected matrix
        let (lower, _) = permuted_lower(&pattern, &nd);
        let parent = etree(n, &lower);
        let post = postorder(&parent);
        let perm: Vec<usize> = post.iter().map(|&k| nd[k]).collect();

        let (lower, iperm) = permuted_lower(&pattern, &perm);
        let parent = etree(n, &lower);
        let counts = column_counts(n, &lower, &parent);
        let snodes = supernodes(n, &lower, &parent, &counts);

        // values of A and M on the permuted lower pattern
        let mut col_ptr = vec![0usize; n + 1];
        for (j, rows) in lower.iter().enumerate() {
            col_ptr[j + 1] = col_ptr[j] + rows.len();
        }
        let mut row_idx = Vec::with_capacity(col_ptr[n]);
        let mut a_val = Vec::with_capacity(col_ptr[n]);
        let mut m_val = Vec::with_capacity(col_ptr[n]);
        for (j, rows) in lower.iter().enumerate() {
            let oj = perm[j];
            for &i in rows {
                let oi = perm[i];
                row_idx.push(i);
                a_val.push(a.get(oi, oj));
                m_val.push(m.get(oi, oj));
            }
        }
        debug_assert!(iperm.iter().enumerate().all(|(o, &k)| perm[k] == o));
        let a_max = a_val.iter().fold(0.0f64, |s, v| s.max(v.abs()));
        let m_max = m_val.iter().fold(0.0f64, |s, v| s.max(v.abs()));
        Self {
            n,
            perm,
            col_ptr,
            row_idx,
            a_val,
            m_val,
            a_max,
            m_max,
            snodes,
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Number of stored entries of `L`, explicit zeros of amalgamated
    /// supernodes included.
    pub fn factor_nnz(&self) -> usize {
        self.snodes
            .iter()
            .map(|s| {
                let k = s.ncols();
                let m = s.rows.len();
                k * m - k * (k - 1) / 2
            })
            .sum()
    }

    pub fn supernode_count(&self) -> usize {
        self.snodes.len()
    }

    /// Factorizes `A - μM`. With `keep` the factors are retained for solves;
    /// otherwise only the inertia is kept.
    pub fn factor(&self, mu: f64, keep: bool) -> Result<Factorization, Breakdown> {
        let n = self.n;
        let scale = (self.a_max + mu.abs() * self.m_max).max(f64::MIN_POSITIVE);
        let tol = PIVOT_TOL * scale;
        let mut relpos = vec![usize::MAX; n];
        let mut contrib: Vec<Option<Vec<f64>>> = vec![None; self.snodes.len()];
        let mut fronts = if keep {
            Some(Vec::with_capacity(self.snodes.len()))
        } else {
            None
        };
        let mut negative = 0;
        let mut positive = 0;
        let mut min_ratio = f64::INFINITY;

        for (s, sn) in self.snodes.iter().enumerate() {
            let m = sn.rows.len();
            let k = sn.ncols();
            for (p, &r) in sn.rows.iter().enumerate() {
                relpos[r] = p;
            }
            let mut f = vec![0.0; m * m];

            for j in sn.first..sn.last {
                let c = j - sn.first;
                for q in self.col_ptr[j]..self.col_ptr[j + 1] {
                    let r = relpos[self.row_idx[q]];
                    let v = self.a_val[q] - mu * self.m_val[q];
                    f[r + c * m] += v;
                    if r != c {
                        f[c + r * m] += v;
                    }
                }
            }
            for &ch in &sn.children {
                let cb = contrib[ch].take().expect("child contribution consumed twice");
                let child = &self.snodes[ch];
                let idx: Vec<usize> = child.rows[child.ncols()..].iter().map(|&r| relpos[r]).collect();
                let mc = idx.len();
                for (q, &cq) in idx.iter().enumerate() {
                    let src = &cb[q * mc..(q + 1) * mc];
                    let dst = cq * m;
                    for (p, &cp) in idx.iter().enumerate() {
                        f[dst + cp] += src[p];
                    }
                }
            }

            let mut lperm: Vec<usize> = (0..k).collect();
            let pivots = factor_front(&mut f, m, k, tol, &mut lperm).map_err(|(col, pivot)| Breakdown {
                mu,
                column: sn.first + col,
                pivot,
            })?;
            for &(_, pv) in &pivots {
                match pv {
                    Pivot::One(d) => {
                        if d < 0.0 {
                            negative += 1;
                        } else {
                            positive += 1;
                        }
                        min_ratio = min_ratio.min(d.abs() / scale);
                    }
                    Pivot::Two(a, b, c) => {
                        let det = a * c - b * b;
                        if det < 0.0 {
                            negative += 1;
                            positive += 1;
                        } else if a < 0.0 {
                            negative += 2;
                        } else {
                            positive += 2;
                        }
                        min_ratio = min_ratio.min(det.abs().sqrt() / scale);
                    }
                }
            }

            if m > k {
                let mc = m - k;
                let mut cb = vec![0.0; mc * mc];
                for q in 0..mc {
                    let src = (k + q) * m + k;
                    cb[q * mc..(q + 1) * mc].copy_from_slice(&f[src..src + mc]);
                }
                contrib[s] = Some(cb);
            }
            if let Some(fr) = fronts.as_mut() {
                f.truncate(m * k);
                f.shrink_to_fit();
                fr.push(FrontFactor {
                    panel: f,
                    lperm,
                    pivots,
                });
            }
        }
        Ok(Factorization {
            mu,
            negative,
            positive,
            min_pivot_ratio: min_ratio,
            fronts,
        })
    }

    /// Solves `(A - μM) x = b` with a retained factorization.
    pub fn solve(&self, fac: &Factorization, b: &[f64]) -> Vec<f64> {
        let fronts = fac.fronts.as_ref().expect("factorization was computed without factors");
        let n = self.n;
        let mut y: Vec<f64> = (0..n).map(|k| b[self.perm[k]]).collect();
        let mut z = Vec::new();

        // forward substitution L y = b
        for (sn, fr) in self.snodes.iter().zip(fronts) {
            let m = sn.rows.len();
            let k = sn.ncols();
            z.clear();
            z.extend(fr.lperm.iter().map(|&p| y[sn.rows[p]]));
            for p in 0..k {
                let col = &fr.panel[p * m..(p + 1) * m];
                let zp = z[p];
                if zp == 0.0 {
                    continue;
                }
                let two_lower = matches!(pivot_at(&fr.pivots, p), Some(Pivot::Two(..)));
                let start = if two_lower { p + 2 } else { p + 1 };
                for i in start..k {
                    z[i] -= col[i] * zp;
                }
                for i in k..m {
                    y[sn.rows[i]] -= col[i] * zp;
                }
            }
            // diagonal solve
            for &(p, pv) in &fr.pivots {
                match pv {
                    Pivot::One(d) => z[p] /= d,
                    Pivot::Two(a, bb, c) => {
                        let det = a * c - bb * bb;
                        let (u, v) = (z[p], z[p + 1]);
                        z[p] = (c * u - bb * v) / det;
                        z[p + 1] = (a * v - bb * u) / det;
                    }
                }
            }
            for (p, &lp) in fr.lperm.iter().enumerate() {
                y[sn.rows[lp]] = z[p];
            }
        }

        // back substitution Lᵀ x = y
        for (sn, fr) in self.snodes.iter().zip(fronts).rev() {
            let m = sn.rows.len();
            let k = sn.ncols();
            z.clear();
            z.extend(fr.lperm.iter().map(|&p| y[sn.rows[p]]));
            for p in (0..k).rev() {
                let col = &fr.panel[p * m..(p + 1) * m];
                let two_lower = matches!(pivot_at(&fr.pivots, p), Some(Pivot::Two(..)));
                let start = if two_lower { p + 2 } else { p + 1 };
                let mut s = 0.0;
                for i in start..k {
                    s += col[i] * z[i];
                }
                for i in k..m {
                    s += col[i] * y[sn.rows[i]];
                }
                z[p] -= s;
            }
            for (p, &lp) in fr.lperm.iter().enumerate() {
                y[sn.rows[lp]] = z[p];
            }
        }

        let mut x = vec![0.0; n];
        for k in 0..n {
            x[self.perm[k]] = y[k];
        }
        x
    }
}

fn pivot_at(pivots: &[(usize, Pivot)], p: usize) -> Option<Pivot> {
    pivots.binary_search_by_key(&p, |&(q, _)| q).ok().map(|i| pivots[i].1)
}

/// Partial factorization of a dense `m × m` symmetric front (full storage,
/// column-major) over its first `k` columns. On return the first `k` columns
/// hold `L` below the pivots and the trailing block holds the Schur complement.
fn factor_front(
    f: &mut [f64],
    m: usize,
    k: usize,
    tol: f64,
    lperm: &mut [usize],
) -> Result<Vec<(usize, Pivot)>, (usize, f64)> {
    let mut pivots = Vec::with_capacity(k);
    let mut b0 = 0;
    while b0 < k {
        let b1 = (b0 + BLOCK).min(k);
        let mut j = b0;
        while j < b1 {
            // Bunch–Kaufman choice restricted to the block
            let ajj = f[j + j * m].abs();
            let (mut lambda, mut r) = (0.0, j);
            for i in j + 1..b1 {
                let v = f[i + j * m].abs();
                if v > lambda {
                    lambda = v;
                    r = i;
                }
            }
            let two = if ajj >= BK_ALPHA * lambda || lambda == 0.0 {
                false
            } else {
                let mut sigma = 0.0f64;
                for i in j..b1 {
                    if i != r {
                        let v = if i > r { f[i + r * m] } else { f[r + i * m] };
                        sigma = sigma.max(v.abs());
                    }
                }
                if ajj * sigma >= BK_ALPHA * lambda * lambda {
                    false
                } else if f[r + r * m].abs() >= BK_ALPHA * sigma {
                    swap_sym(f, m, j, r, lperm);
                    false
                } else {
                    if r != j + 1 {
                        swap_sym(f, m, j + 1, r, lperm);
                    }
                    true
                }
            };

            if !two {
                let d = f[j + j * m];
                if d.abs() <= tol {
                    return Err((j, d));
                }
                let (head, tail) = f.split_at_mut((j + 1) * m);
                let colj = &mut head[j * m..];
                for c in j + 1..b1 {
                    let fcj = colj[c] / d;
                    if fcj != 0.0 {
                        let col = &mut tail[(c - j - 1) * m..(c - j) * m];
                        for i in c..m {
                            col[i] -= colj[i] * fcj;
                        }
                    }
                }
                for v in &mut colj[j + 1..m] {
                    *v /= d;
                }
                pivots.push((j, Pivot::One(d)));
                j += 1;
            } else {
                let a = f[j + j * m];
                let b = f[j + 1 + j * m];
                let c = f[j + 1 + (j + 1) * m];
                let det = a * c - b * b;
                if det.abs() <= tol * tol {
                    return Err((j, det));
                }
                let (ia, ib, ic) = (c / det, -b / det, a / det);
                let (head, tail) = f.split_at_mut((j + 2) * m);
                let (c0, c1) = head[j * m..].split_at_mut(m);
                for cc in j + 2..b1 {
                    let (w1, w2) = (c0[cc], c1[cc]);
                    let l1 = w1 * ia + w2 * ib;
                    let l2 = w1 * ib + w2 * ic;
                    let col = &mut tail[(cc - j - 2) * m..(cc - j - 1) * m];
                    for i in cc..m {
                        col[i] -= c0[i] * l1 + c1[i] * l2;
                    }
                }
                for i in j + 2..m {
                    let (w1, w2) = (c0[i], c1[i]);
                    c0[i] = w1 * ia + w2 * ib;
                    c1[i] = w1 * ib + w2 * ic;
                }
                pivots.push((j, Pivot::Two(a, b, c)));
                j += 2;
            }
        }

        // trailing update F[b1.., b1..] -= L_blk D_blk L_blkᵀ
        let mt = m - b1;
        if mt > 0 {
            let nb = b1 - b0;
            let mut w = vec![0.0; mt * nb];
            let mut l = vec![0.0; mt * nb];
            for q in 0..nb {
                l[q * mt..(q + 1) * mt].copy_from_slice(&f[(b0 + q) * m + b1..(b0 + q + 1) * m]);
            }
            for &(p, pv) in pivots.iter().filter(|(p, _)| *p >= b0 && *p < b1) {
                let q = p - b0;
                match pv {
                    Pivot::One(d) => {
                        for i in 0..mt {
                            w[q * mt + i] = l[q * mt + i] * d;
                        }
                    }
                    Pivot::Two(a, b, c) => {
                        for i in 0..mt {
                            let (x, y) = (l[q * mt + i], l[(q + 1) * mt + i]);
                            w[q * mt + i] = x * a + y * b;
                            w[(q + 1) * mt + i] = x * b + y * c;
                        }
                    }
                }
            }
            // SAFETY: all slices are sized for the strides passed.
            unsafe {
                matrixmultiply::dgemm(
                    mt,
                    nb,
                    mt,
                    -1.0,
                    l.as_ptr(),
                    1,
                    mt as isize,
                    w.as_ptr(),
                    mt as isize,
                    1,
                    1.0,
                    f.as_mut_ptr().add(b1 * m + b1),
                    1,
                    m as isize,
                );
            }
        }
        b0 = b1;
    }
    Ok(pivots)
}

/// Symmetric interchange of front rows/columns `a < b`, using only the lower
/// triangle of the active part.
fn swap_sym(f: &mut [f64], m: usize, a: usize, b: usize, lperm: &mut [usize]) {
    if a == b {
        return;
    }
    let (a, b) = if a < b { (a, b) } else { (b, a) };
    for i in b + 1..m {
        f.swap(i + a * m, i + b * m);
    }
    for i in a + 1..b {
        f.swap(i + a * m, b + i * m);
    }
    f.swap(a + a * m, b + b * m);
    for c in 0..a {
        f.swap(a + c * m, b + c * m);
    }
    lperm.swap(a, b);
}

/// Lower-triangular column patterns of `P A Pᵀ` (diagonal included, sorted)
/// and the inverse permutation.
fn permuted_lower(a: &CsrMatrix, perm: &[usize]) -> (Vec<Vec<usize>>, Vec<usize>) {
    let n = a.dim();
    let mut iperm = vec![0; n];
    for (k, &o) in perm.iter().enumerate() {
        iperm[o] = k;
    }
    let mut lower: Vec<Vec<usize>> = vec![Vec::new(); n];
    for oi in 0..n {
        let i = iperm[oi];
        for (oj, _) in a.row(oi) {
            let j = iperm[oj];
            if i >= j {
                lower[j].push(i);
            }
        }
    }
    for (j, col) in lower.iter_mut().enumerate() {
        if !col.contains(&j) {
            col.push(j);
        }
        col.sort_unstable();
    }
    (lower, iperm)
}

/// Elimination tree by Liu's algorithm with path compression.
fn etree(n: usize, lower: &[Vec<usize>]) -> Vec<usize> {
    const NONE: usize = usize::MAX;
    let mut upper: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (j, rows) in lower.iter().enumerate() {
        for &i in rows {
            if i > j {
                upper[i].push(j);
            }
        }
    }
    let mut parent = vec![NONE; n];
    let mut ancestor = vec![NONE; n];
    for (j, cols) in upper.iter().enumerate() {
        for &i in cols {
            let mut r = i;
            while r != NONE && r < j {
                let next = ancestor[r];
                ancestor[r] = j;
                if next == NONE {
                    parent[r] = j;
                }
                r = next;
            }
        }
    }
    parent
}

fn postorder(parent: &[usize]) -> Vec<usize> {
    let n = parent.len();
    let mut head = vec![usize::MAX; n];
    let mut next = vec![usize::MAX; n];
    // reverse insertion keeps children in increasing order
    for v in (0..n).rev() {
        let p = parent[v];
        if p != usize::MAX {
            next[v] = head[p];
            head[p] = v;
        }
    }
    let mut post = Vec::with_capacity(n);
    let mut stack = Vec::new();
    for root in (0..n).filter(|&v| parent[v] == usize::MAX) {
        stack.push((root, head[root]));
        while let Some(&mut (v, ref mut child)) = stack.last_mut() {
            if *child == usize::MAX {
                post.push(v);
                stack.pop();
            } else {
                let c = *child;
                *child = next[c];
                stack.push((c, head[c]));
            }
        }
    }
    post
}

/// Number of nonzeros in each column of `L` (diagonal included), by walking
/// the row subtrees.
fn column_counts(n: usize, lower: &[Vec<usize>], parent: &[usize]) -> Vec<usize> {
    let mut upper: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (j, rows) in lower.iter().enumerate() {
        for &i in rows {
            if i > j {
                upper[i].push(j);
            }
        }
    }
    let mut count = vec![1usize; n];
    let mut mark = vec![usize::MAX; n];
    for (i, cols) in upper.iter().enumerate() {
        mark[i] = i;
        for &k in cols {
            let mut j = k;
            while j != usize::MAX && j < i && mark[j] != i {
                count[j] += 1;
                mark[j] = i;
                j = parent[j];
            }
        }
    }
    count
}

/// Fundamental supernodes, relaxed by merging small chains, with their front
/// row structures and assembly tree.
fn supernodes(n: usize, lower: &[Vec<usize>], parent: &[usize], counts: &[usize]) -> Vec<Supernode> {
    if n == 0 {
        return Vec::new();
    }
    let mut nchild = vec![0usize; n];
    for &p in parent {
        if p != usize::MAX {
            nchild[p] += 1;
        }
    }
    // fundamental partition
    let mut bounds = vec![0usize];
    for j in 1..n {
        let chain = parent[j - 1] == j && nchild[j] == 1 && counts[j - 1] == counts[j] + 1;
        if !chain {
            bounds.push(j);
        }
    }
    bounds.push(n);
    let mut first: Vec<usize> = bounds[..bounds.len() - 1].to_vec();
    let last: Vec<usize> = bounds[1..].to_vec();
    let mut rowcount: Vec<usize> = first.iter().map(|&f| counts[f]).collect();
    let ns = first.len();
    let mut of_col = vec![0usize; n];
    for s in 0..ns {
        for c in first[s]..last[s] {
            of_col[c] = s;
        }
    }

    // relaxed amalgamation of a supernode into its parent when it is the
    // parent's last child and the padding is small
    let mut alive = vec![true; ns];
    for s in 0..ns {
        let p_col = parent[last[s] - 1];
        if p_col == usize::MAX {
            continue;
        }
        let p = of_col[p_col];
        if first[p] != last[s] {
            continue;
        }
        let nc = last[s] - first[s];
        let np = last[p] - first[p];
        let merged_rows = nc + rowcount[p];
        let true_entries = tri(nc, rowcount[s]) + tri(np, rowcount[p]);
        let merged_entries = tri(nc + np, merged_rows);
        let pad = merged_entries - true_entries;
        let small = nc + np <= 16;
        if (small && pad * 2 <= merged_entries) || pad * 20 <= merged_entries {
            first[p] = first[s];
            rowcount[p] = merged_rows;
            alive[s] = false;
        }
    }

    let mut snodes: Vec<Supernode> = Vec::new();
    let mut id_of_col = vec![0usize; n];
    for s in 0..ns {
        if !alive[s] {
            continue;
        }
        for c in first[s]..last[s] {
            id_of_col[c] = snodes.len();
        }
        snodes.push(Supernode {
            first: first[s],
            last: last[s],
            rows: Vec::new(),
            children: Vec::new(),
        });
    }
    let mut mark = vec![usize::MAX; n];
    for t in 0..snodes.len() {
        let (f, l) = (snodes[t].first, snodes[t].last);
        let mut rows: Vec<usize> = (f..l).collect();
        for c in f..l {
            mark[c] = t;
        }
        let mut extra = Vec::new();
        for c in f..l {
            for &i in &lower[c] {
                if i >= l && mark[i] != t {
                    mark[i] = t;
                    extra.push(i);
                }
            }
        }
        let children = std::mem::take(&mut snodes[t].children);
        for &ch in &children {
            let k = snodes[ch].ncols();
            for idx in k..snodes[ch].rows.len() {
                let i = snodes[ch].rows[idx];
                if i >= l && mark[i] != t {
                    mark[i] = t;
                    extra.push(i);
                }
            }
        }
        extra.sort_unstable();
        rows.extend(extra);
        let p_col = parent[l - 1];
        snodes[t].rows = rows;
        snodes[t].children = children;
        if p_col != usize::MAX {
            let p = id_of_col[p_col];
            snodes[p].children.push(t);
        }
    }
    snodes
}

/// Entries of an `nc`-column trapezoid whose first column has `rows` rows.
fn tri(nc: usize, rows: usize) -> usize {
    nc * rows - nc * (nc.saturating_sub(1)) / 2
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigensolve::sparse::{PencilMeta, TripletBuilder};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn grid_laplacian(nx: usize, ny: usize) -> CsrMatrix {
        let id = |i: usize, j: usize| i * ny + j;
        let mut t = TripletBuilder::new(nx * ny);
        for i in 0..nx {
            for j in 0..ny {
                t.push(id(i, j), id(i, j), 4.0);
                if i + 1 < nx {
                    t.push_sym(id(i, j), id(i + 1, j), -1.0);
                }
                if j + 1 < ny {
                    t.push_sym(id(i, j), id(i, j + 1), -1.0);
                }
            }
        }
        t.build()
    }

    fn grid_eigenvalues(nx: usize, ny: usize) -> Vec<f64> {
        let mut ev = Vec::new();
        for p in 1..=nx {
            for q in 1..=ny {
                let a = (p as f64 * std::f64::consts::PI / (nx + 1) as f64).cos();
                let b = (q as f64 * std::f64::consts::PI / (ny + 1) as f64).cos();
                ev.push(4.0 - 2.0 * a - 2.0 * b);
            }
        }
        ev.sort_by(f64::total_cmp);
        ev
    }

    #[test]
    fn inertia_of_grid_laplacian() {
        let (nx, ny) = (37, 23);
        let a = grid_laplacian(nx, ny);
        let p = SymmetricPencil::new(a, CsrMatrix::identity(nx * ny), PencilMeta::default()).unwrap();
        let sym = Symbolic::analyse(&p);
        let ev = grid_eigenvalues(nx, ny);
        for mu in [0.1, 0.7, 1.3, 2.05, 3.3, 4.01, 6.5, 7.99] {
            let exact = ev.iter().filter(|&&e| e < mu).count();
            let f = sym.factor(mu, false).unwrap();
            assert_eq!(f.negative, exact, "mu = {mu}");
            assert_eq!(f.negative + f.positive, nx * ny);
        }
    }

    #[test]
    fn solve_recovers_rhs() {
        let (nx, ny) = (30, 30);
        let a = grid_laplacian(nx, ny);
        let n = nx * ny;
        let p = SymmetricPencil::new(a.clone(), CsrMatrix::identity(n), PencilMeta::default()).unwrap();
        let sym = Symbolic::analyse(&p);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let x: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        for mu in [0.0, 2.5, 5.1] {
            let f = sym.factor(mu, true).unwrap();
            let shifted = a.add_scaled(&CsrMatrix::identity(n), -mu);
            let b = shifted.apply(&x);
            let y = sym.solve(&f, &b);
            let err = x.iter().zip(&y).map(|(u, v)| (u - v).abs()).fold(0.0, f64::max);
            assert!(err < 1e-9, "mu = {mu}, err = {err}");
        }
    }

    #[test]
    fn indefinite_dense_block_uses_two_by_two_pivots() {
        // zero diagonal forces 2x2 pivots
        let a = CsrMatrix::from_dense(&[
            vec![0.0, 1.0, 0.0, 0.0],
            vec![1.0, 0.0, 2.0, 0.0],
            vec![0.0, 2.0, 0.0, 1.0],
            vec![0.0, 0.0, 1.0, 0.0],
        ]);
        let sym = Symbolic::analyse_matrices(&a, &CsrMatrix::identity(4));
        let f = sym.factor(0.0, true).unwrap();
        assert_eq!(f.negative, 2);
        let b = [1.0, 2.0, 3.0, 4.0];
        let x = sym.solve(&f, &b);
        let r = a.apply(&x);
        for i in 0..4 {
            assert!((r[i] - b[i]).abs() < 1e-12);
        }
    }

    #[test]
    fn exact_eigenvalue_is_a_breakdown() {
        let a = CsrMatrix::diagonal(&[1.0, 2.0, 3.0]);
        let sym = Symbolic::analyse_matrices(&a, &CsrMatrix::identity(3));
        assert!(sym.factor(2.0, false).is_err());
        assert_eq!(sym.factor(2.5, false).unwrap().negative, 2);
    }

    #[test]
    fn postorder_visits_children_first() {
        let parent = vec![2, 2, 4, 4, usize::MAX];
        let post = postorder(&parent);
        assert_eq!(post, vec![0, 1, 2, 3, 4]);
    }
}
