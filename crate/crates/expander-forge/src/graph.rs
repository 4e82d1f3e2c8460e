//! Plain graph containers shared by the builders and the verification suite.
//! Adjacency is CSR with sorted neighbor slices.

/// Simple undirected graph. Every edge appears in both endpoint lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    pub offsets: Vec<u32>,
    pub nbrs: Vec<u32>,
}

impl Graph {
    pub fn from_edges(n: usize, edges: &[(u32, u32)]) -> Graph {
        let mut deg = vec![0u32; n];
        for &(u, v) in edges {
            deg[u as usize] += 1;
            deg[v as usize] += 1;
        }
        let mut offsets = vec![0u32; n + 1];
        for i in 0..n {
            offsets[i + 1] = offsets[i] + deg[i];
        }
        let mut nbrs = vec![0u32; offsets[n] as usize];
        let mut cursor: Vec<u32> = offsets[..n].to_vec();
        for &(u, v) in edges {
            nbrs[cursor[u as usize] as usize] = v;
            cursor[u as usize] += 1;
            nbrs[cursor[v as usize] as usize] = u;
            cursor[v as usize] += 1;
        }
        let mut g = Graph { offsets, nbrs };
        g.sort_neighbors();
        g
    }

    fn sort_neighbors(&mut self) {
        for v in 0..self.len() {
            let (lo, hi) = (self.offsets[v] as usize, self.offsets[v + 1] as usize);
            self.nbrs[lo..hi].sort_unstable();
        }
    }

    pub fn len(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn degree(&self, v: usize) -> usize {
        (self.offsets[v + 1] - self.offsets[v]) as usize
    }

    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.nbrs[self.offsets[v] as usize..self.offsets[v + 1] as usize]
    }

    pub fn edge_count(&self) -> usize {
        self.nbrs.len() / 2
    }

    pub fn edges(&self) -> Vec<(u32, u32)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for u in 0..self.len() {
            for &v in self.neighbors(u) {
                if (u as u32) < v {
                    out.push((u as u32, v));
                }
            }
        }
        out
    }

    pub fn is_regular(&self) -> Option<usize> {
        if self.is_empty() {
            return Some(0);
        }
        let d = self.degree(0);
        (1..self.len()).all(|v| self.degree(v) == d).then_some(d)
    }

    pub fn is_connected(&self) -> bool {
        if self.is_empty() {
            return true;
        }
        let mut seen = vec![false; self.len()];
        let mut stack = vec![0u32];
        seen[0] = true;
        let mut visited = 1;
        while let Some(v) = stack.pop() {
            for &w in self.neighbors(v as usize) {
                if !seen[w as usize] {
                    seen[w as usize] = true;
                    visited += 1;
                    stack.push(w);
                }
            }
        }
        visited == self.len()
    }

    /// Proper 2-coloring if one exists.
    pub fn bipartition(&self) -> Option<Vec<bool>> {
        let n = self.len();
        let mut color = vec![u8::MAX; n];
        for start in 0..n {
            if color[start] != u8::MAX {
                continue;
            }
            color[start] = 0;
            let mut stack = vec![start as u32];
            while let Some(v) = stack.pop() {
                let c = color[v as usize];
                for &w in self.neighbors(v as usize) {
                    if color[w as usize] == u8::MAX {
                        color[w as usize] = 1 - c;
                        stack.push(w);
                    } else if color[w as usize] == c {
                        return None;
                    }
                }
            }
        }
        Some(color.into_iter().map(|c| c == 1).collect())
    }
}

/// Bipartite graph stored as CSR from the left side; the transpose is built
/// on demand.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartiteGraph {
    pub n_left: usize,
    pub n_right: usize,
    pub offsets: Vec<u32>,
    pub nbrs: Vec<u32>,
}

impl BipartiteGraph {
    pub fn from_edges(n_left: usize, n_right: usize, edges: &[(u32, u32)]) -> BipartiteGraph {
        let mut deg = vec![0u32; n_left];
        for &(u, _) in edges {
            deg[u as usize] += 1;
        }
        let mut offsets = vec![0u32; n_left + 1];
        for i in 0..n_left {
            offsets[i + 1] = offsets[i] + deg[i];
        }
        let mut nbrs = vec![0u32; edges.len()];
        let mut cursor: Vec<u32> = offsets[..n_left].to_vec();
        for &(u, v) in edges {
            nbrs[cursor[u as usize] as usize] = v;
            cursor[u as usize] += 1;
        }
        let mut g = BipartiteGraph { n_left, n_right, offsets, nbrs };
        for v in 0..n_left {
            let (lo, hi) = (g.offsets[v] as usize, g.offsets[v + 1] as usize);
            g.nbrs[lo..hi].sort_unstable();
        }
        g
    }

    pub fn left_degree(&self, v: usize) -> usize {
        (self.offsets[v + 1] - self.offsets[v]) as usize
    }

    pub fn left_neighbors(&self, v: usize) -> &[u32] {
        &self.nbrs[self.offsets[v] as usize..self.offsets[v + 1] as usize]
    }

    pub fn edge_count(&self) -> usize {
        self.nbrs.len()
    }

    pub fn transpose(&self) -> BipartiteGraph {
        let flipped: Vec<(u32, u32)> = (0..self.n_left as u32)
            .flat_map(|u| self.left_neighbors(u as usize).iter().map(move |&v| (v, u)))
            .collect();
        BipartiteGraph::from_edges(self.n_right, self.n_left, &flipped)
    }

    /// Exact (d_L, d_R)-biregularity check.
    pub fn biregular_degrees(&self) -> Option<(usize, usize)> {
        if self.n_left == 0 || self.n_right == 0 {
            return None;
        }
        let dl = self.left_degree(0);
        if !(1..self.n_left).all(|v| self.left_degree(v) == dl) {
            return None;
        }
        let mut rdeg = vec![0usize; self.n_right];
        for &v in &self.nbrs {
            rdeg[v as usize] += 1;
        }
        let dr = rdeg[0];
        rdeg.iter().all(|&d| d == dr).then_some((dl, dr))
    }

    /// View as a plain graph on n_left + n_right vertices (right indices
    /// shifted), used by the spectral routines.
    pub fn to_union_graph(&self) -> Graph {
        let shift = self.n_left as u32;
        let edges: Vec<(u32, u32)> = (0..self.n_left as u32)
            .flat_map(|u| {
                self.left_neighbors(u as usize)
                    .iter()
                    .map(move |&v| (u, v + shift))
            })
            .collect();
        Graph::from_edges(self.n_left + self.n_right, &edges)
    }
}
