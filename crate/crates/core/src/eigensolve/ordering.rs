//! Fill-reducing ordering by nested dissection with level-set separators.

use std::collections::VecDeque;

/// Subgraphs at or below this size are ordered as given.
const LEAF_SIZE: usize = 64;

/// Undirected graph in adjacency-list (CSR) form, without self loops.
#[derive(Debug, Clone)]
pub struct Graph {
    pub ptr: Vec<usize>,
    pub adj: Vec<usize>,
}

impl Graph {
    /// Graph of the off-diagonal pattern of a structurally symmetric matrix.
    pub fn from_pattern(n: usize, row_ptr: &[usize], col_idx: &[usize]) -> Self {
        let mut ptr = Vec::with_capacity(n + 1);
        let mut adj = Vec::with_capacity(col_idx.len());
        ptr.push(0);
        for i in 0..n {
            for &j in &col_idx[row_ptr[i]..row_ptr[i + 1]] {
                if j != i {
                    adj.push(j);
                }
            }
            ptr.push(adj.len());
        }
        Self { ptr, adj }
    }

    pub fn len(&self) -> usize {
        self.ptr.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[self.ptr[v]..self.ptr[v + 1]]
    }
}

/// Elimination order: `perm[k]` is the original index eliminated `k`-th.
pub fn nested_dissection(g: &Graph) -> Vec<usize> {
    let n = g.len();
    let mut nd = Dissector {
        g,
        member: vec![0; n],
        visit: vec![0; n],
        level: vec![0; n],
        generation: 0,
        stamp: 0,
        out: Vec::with_capacity(n),
    };
    nd.dissect((0..n).collect());
    debug_assert_eq!(nd.out.len(), n);
    nd.out
}

struct Dissector<'a> {
    g: &'a Graph,
    member: Vec<u32>,
    visit: Vec<u32>,
    level: Vec<usize>,
    generation: u32,
    stamp: u32,
    out: Vec<usize>,
}

impl Dissector<'_> {
    /// Breadth-first search restricted to nodes of generation `gen`; fills
    /// `level` and returns the visited nodes in visiting order.
    fn bfs(&mut self, root: usize, gen: u32) -> Vec<usize> {
        self.stamp += 1;
        let stamp = self.stamp;
        self.visit[root] = stamp;
        self.level[root] = 0;
        let mut order = vec![root];
        let mut q = VecDeque::from([root]);
        while let Some(v) = q.pop_front() {
            for &w in self.g.neighbors(v) {
                if self.member[w] == gen && self.visit[w] != stamp {
                    self.visit[w] = stamp;
                    self.level[w] = self.level[v] + 1;
                    order.push(w);
                    q.push_back(w);
                }
            }
        }
        order
    }

    fn dissect(&mut self, nodes: Vec<usize>) {
        if nodes.len() <= LEAF_SIZE {
            self.out.extend(nodes);
            return;
        }
        self.generation += 1;
        let gen = self.generation;
        for &v in &nodes {
            self.member[v] = gen;
        }

        let mut order = self.bfs(nodes[0], gen);
        if order.len() < nodes.len() {
            // disconnected: handle each component on its own
            let stamp = self.stamp;
            let rest: Vec<usize> = nodes.iter().copied().filter(|&v| self.visit[v] != stamp).collect();
            order.sort_unstable();
            self.dissect(order);
            self.dissect(rest);
            return;
        }

        // pseudo-peripheral root
        let mut ecc = self.level[*order.last().unwrap()];
        for _ in 0..8 {
            let cand = order
                .iter()
                .rev()
                .take_while(|&&v| self.level[v] == ecc)
                .copied()
                .min_by_key(|&v| (self.g.neighbors(v).len(), v))
                .unwrap();
            order = self.bfs(cand, gen);
            let e = self.level[*order.last().unwrap()];
            if e <= ecc {
                break;
            }
            ecc = e;
        }

        let nlev = self.level[*order.last().unwrap()] + 1;
        if nlev < 3 {
            self.out.extend(nodes);
            return;
        }
        let mut sizes = vec![0usize; nlev];
        for &v in &order {
            sizes[self.level[v]] += 1;
        }
        let total = order.len();
        let mut best: Option<((bool, usize), usize)> = None;
        let mut before = 0;
        for (l, &s) in sizes.iter().enumerate() {
            let after = total - before - s;
            if l > 0 && l + 1 < nlev {
                // balanced cuts first, then small separators, then balance
                let unbalanced = before.min(after) * 10 < total * 3;
                let key = (unbalanced, s * total + before.abs_diff(after));
                if best.is_none_or(|(k, _)| key < k) {
                    best = Some((key, l));
                }
            }
            before += s;
        }
        let sep_level = best.unwrap().1;
        let mut a = Vec::new();
        let mut b = Vec::new();
        let mut sep = Vec::new();
        for &v in &order {
            match self.level[v].cmp(&sep_level) {
                std::cmp::Ordering::Less => a.push(v),
                std::cmp::Ordering::Greater => b.push(v),
                std::cmp::Ordering::Equal => sep.push(v),
            }
        }
        a.sort_unstable();
        b.sort_unstable();
        sep.sort_unstable();
        self.dissect(a);
        self.dissect(b);
        self.out.extend(sep);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(nx: usize, ny: usize) -> Graph {
        let id = |i: usize, j: usize| i * ny + j;
        let mut ptr = vec![0];
        let mut adj = Vec::new();
        for i in 0..nx {
            for j in 0..ny {
                if i > 0 {
                    adj.push(id(i - 1, j));
                }
                if j > 0 {
                    adj.push(id(i, j - 1));
                }
                if j + 1 < ny {
                    adj.push(id(i, j + 1));
                }
                if i + 1 < nx {
                    adj.push(id(i + 1, j));
                }
                ptr.push(adj.len());
            }
        }
        Graph { ptr, adj }
    }

    #[test]
    fn is_a_permutation() {
        for (nx, ny) in [(1, 1), (3, 7), (40, 40), (100, 9)] {
            let p = nested_dissection(&grid(nx, ny));
            let mut s = p.clone();
            s.sort_unstable();
            assert_eq!(s, (0..nx * ny).collect::<Vec<_>>());
        }
    }

    #[test]
    fn handles_disconnected_graphs() {
        // two disjoint paths of 100 nodes
        let mut ptr = vec![0];
        let mut adj = Vec::new();
        for v in 0..200usize {
            if v % 100 != 0 {
                adj.push(v - 1);
            }
            if v % 100 != 99 {
                adj.push(v + 1);
            }
            ptr.push(adj.len());
        }
        let p = nested_dissection(&Graph { ptr, adj });
        let mut s = p.clone();
        s.sort_unstable();
        assert_eq!(s, (0..200).collect::<Vec<_>>());
    }
}
