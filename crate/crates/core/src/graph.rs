// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

//! Dense simple graphs, their Laplacian and oscillator potential, and exact
//! strongly-regular classification.

use std::collections::VecDeque;
use std::fmt;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Simple undirected loopless graph with dense adjacency.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    adj: Vec<bool>,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n)
            .field("edges", &self.edge_count())
            .finish()
    }
}

impl Graph {
    /// Edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Self {
        Graph {
            n,
            adj: vec![false; n * n],
        }
    }

    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Graph::empty(n);
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidGraph(format!(
                    "edge ({u},{v}) out of range for {n} vertices"
                )));
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("loop at vertex {u}")));
            }
            g.set_edge(u, v);
        }
        Ok(g)
    }

    /// Builds a graph from a square 0/1 matrix, checking symmetry and the
    /// zero diagonal.
    pub fn from_adjacency<R: AsRef<[u8]>>(rows: &[R]) -> Result<Self> {
        let n = rows.len();
        let mut g = Graph::empty(n);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != n {
                return Err(Error::InvalidGraph(format!(
                    "row {i} has length {}, expected {n}",
                    row.len()
                )));
            }
            for (j, &x) in row.iter().enumerate() {
                match x {
                    0 => {}
                    1 if i == j => return Err(Error::InvalidGraph(format!("loop at vertex {i}"))),
                    1 => g.adj[i * n + j] = true,
                    _ => {
                        return Err(Error::InvalidGraph(format!(
                            "entry ({i},{j}) = {x} is not 0/1"
                        )))
                    }
                }
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if g.adj[i * n + j] != g.adj[j * n + i] {
                    return Err(Error::InvalidGraph(format!(
                        "adjacency not symmetric at ({i},{j})"
                    )));
                }
            }
        }
        Ok(g)
    }

    pub(crate) fn set_edge(&mut self, u: usize, v: usize) {
        debug_assert!(u != v);
        self.adj[u * self.n + v] = true;
        self.adj[v * self.n + u] = true;
    }

    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u * self.n + v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.row(v).iter().filter(|&&b| b).count()
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n).map(|v| self.degree(v)).collect()
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.row(v)
            .iter()
            .enumerate()
            .filter_map(|(j, &b)| b.then_some(j))
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().filter(|&&b| b).count() / 2
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |i| {
            ((i + 1)..self.n).filter_map(move |j| self.has_edge(i, j).then_some((i, j)))
        })
    }

    fn row(&self, v: usize) -> &[bool] {
        &self.adj[v * self.n..(v + 1) * self.n]
    }

    pub fn is_complete(&self) -> bool {
        self.edge_count() == self.n * self.n.saturating_sub(1) / 2
    }

    pub fn adjacency_i64(&self) -> DMatrix<i64> {
        DMatrix::from_fn(self.n, self.n, |i, j| self.has_edge(i, j) as i64)
    }

    pub fn adjacency_f64(&self) -> DMatrix<f64> {
        DMatrix::from_fn(
            self.n,
            self.n,
            |i, j| if self.has_edge(i, j) { 1.0 } else { 0.0 },
        )
    }

    /// Relabels vertex `v` as `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Graph> {
        let n = self.n;
        let mut seen = vec![false; n];
        if perm.len() != n {
            return Err(Error::InvalidGraph(format!(
                "permutation has length {}, expected {n}",
                perm.len()
            )));
        }
        for &p in perm {
            if p >= n || std::mem::replace(&mut seen[p], true) {
                return Err(Error::InvalidGraph("not a permutation".into()));
            }
        }
        let mut g = Graph::empty(n);
        for (u, v) in self.edges() {
            g.set_edge(perm[u], perm[v]);
        }
        Ok(g)
    }

    /// Breadth-first distance layers from `root`; vertices unreachable from
    /// `root` are not listed.
    pub(crate) fn bfs_layers(&self, root: usize) -> Vec<Vec<usize>> {
        let mut dist = vec![usize::MAX; self.n];
        let mut layers: Vec<Vec<usize>> = vec![vec![root]];
        dist[root] = 0;
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            for w in self.neighbors(u) {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    if layers.len() <= dist[w] {
                        layers.push(Vec::new());
                    }
                    layers[dist[w]].push(w);
                    queue.push_back(w);
                }
            }
        }
        for layer in &mut layers {
            layer.sort_unstable();
        }
        layers
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        self.bfs_layers(0).iter().map(Vec::len).sum::<usize>() == self.n
    }
}

/// Parameter tuple `(n, kappa, lambda, mu)` of a strongly regular graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SrgParams {
    pub n: usize,
    pub kappa: usize,
    pub lambda: usize,
    pub mu: usize,
}

impl fmt::Display for SrgParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "SRG({},{},{},{})",
            self.n, self.kappa, self.lambda, self.mu
        )
    }
}

impl SrgParams {
    /// Validates the feasibility inequalities and the edge-counting identity
    /// (checked in both of its equivalent forms).
    pub fn new(n: usize, kappa: usize, lambda: usize, mu: usize) -> Result<Self> {
        let fail = |reason| {
            Err(Error::InfeasibleParams {
                n,
                kappa,
                lambda,
                mu,
                reason,
            })
        };
        if !(n >= 2 && n - 1 > kappa && kappa >= mu && mu > 0) {
            return fail("need n-1 > kappa >= mu > 0");
        }
        if !(kappa >= 1 && kappa - 1 > lambda) {
            return fail("need kappa-1 > lambda >= 0");
        }
        let (ni, k, l, m) = (n as i64, kappa as i64, lambda as i64, mu as i64);
        if k * (k - l - 1) != (ni - k - 1) * m {
            return fail("kappa(kappa-lambda-1) != (n-kappa-1)mu");
        }
        if k * k != (k - m) + m * ni + (l - m) * k {
            return fail("kappa^2 != (kappa-mu) + mu n + (lambda-mu) kappa");
        }
        Ok(SrgParams {
            n,
            kappa,
            lambda,
            mu,
        })
    }

    /// Size of the third stratum, `n - kappa - 1`.
    pub fn far_size(&self) -> usize {
        self.n - self.kappa - 1
    }

    /// The two restricted eigenvalues `(r, s)`, `r > s`, roots of
    /// `x^2 - (lambda-mu) x - (kappa-mu) = 0`.
    pub fn restricted_eigenvalues(&self) -> (f64, f64) {
        let b = self.lambda as f64 - self.mu as f64;
        let c = self.kappa as f64 - self.mu as f64;
        let disc = (b * b + 4.0 * c).sqrt();
        ((b + disc) / 2.0, (b - disc) / 2.0)
    }

    /// Multiplicities `(f, g)` of `r` and `s` in the adjacency spectrum.
    pub fn restricted_multiplicities(&self) -> (f64, f64) {
        let (r, s) = self.restricted_eigenvalues();
        let k = self.kappa as f64;
        let n1 = self.n as f64 - 1.0;
        // f + g = n-1 and k + f r + g s = 0
        let f = -(k + n1 * s) / (r - s);
        (f, n1 - f)
    }

    /// Top singular value of the stratum coupling block, `mu sqrt((n-kappa-1)/kappa)`.
    pub fn top_coupling(&self) -> f64 {
        self.mu as f64 * (self.far_size() as f64 / self.kappa as f64).sqrt()
    }
}

/// Graph Laplacian `diag(degree) - A`.
pub fn laplacian(graph: &Graph) -> DMatrix<i64> {
    let n = graph.order();
    let deg = graph.degrees();
    DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            deg[i] as i64
        } else {
            -(graph.has_edge(i, j) as i64)
        }
    })
}

/// Oscillator potential `V = I + 2gL` at coupling `g`.
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialMatrix {
    pub g: f64,
    pub matrix: DMatrix<f64>,
}

pub fn check_coupling(g: f64) -> Result<()> {
    if g.is_finite() && g >= 0.0 {
        Ok(())
    } else {
        Err(Error::NegativeCoupling(g))
    }
}

pub fn potential(graph: &Graph, g: f64) -> Result<PotentialMatrix> {
    check_coupling(g)?;
    let lap = laplacian(graph);
    let n = graph.order();
    let matrix = DMatrix::from_fn(n, n, |i, j| {
        let id = if i == j { 1.0 } else { 0.0 };
        id + 2.0 * g * lap[(i, j)] as f64
    });
    Ok(PotentialMatrix { g, matrix })
}

/// Classifies `graph` as strongly regular.
///
/// Parameters are obtained by counting common neighbours over every vertex
/// pair, then confirmed against `A^2 = (k-mu)I + mu J + (lambda-mu)A` in
/// exact integer arithmetic.
pub fn srg_params(graph: &Graph) -> Result<SrgParams> {
    let n = graph.order();
    if n == 0 || graph.edge_count() == 0 || graph.is_complete() {
        return Err(Error::Degenerate);
    }
    if !graph.is_connected() {
        return Err(Error::Disconnected);
    }
    let kappa = graph.degree(0);
    for v in 1..n {
        let d = graph.degree(v);
        if d != kappa {
            return Err(Error::NotRegular {
                vertex: v,
                degree: d,
                expected: kappa,
            });
        }
    }

    let mut lambda = None;
    let mut mu = None;
    for u in 0..n {
        for v in (u + 1)..n {
            let common = (0..n)
                .filter(|&w| graph.has_edge(u, w) && graph.has_edge(v, w))
                .count();
            let (slot, name) = if graph.has_edge(u, v) {
                (&mut lambda, "lambda")
            } else {
                (&mut mu, "mu")
            };
            match *slot {
                None => *slot = Some(common),
                Some(c) if c != common => {
                    return Err(Error::NotStronglyRegular(format!(
                        "{name} not constant: pair ({u},{v}) has {common} common neighbours, expected {c}"
                    )))
                }
                _ => {}
            }
        }
    }
    // connected and not complete, so both kinds of pair occur
    let lambda = lambda.ok_or(Error::Degenerate)?;
    let mu = mu.ok_or(Error::Degenerate)?;
    let params = SrgParams::new(n, kappa, lambda, mu)?;
    if !satisfies_srg_identity(graph, &params) {
        return Err(Error::NotStronglyRegular(
            "A^2 identity fails entrywise".into(),
        ));
    }
    Ok(params)
}

/// Entrywise integer check of `A^2 = (k-mu)I + mu J + (lambda-mu)A`.
pub fn satisfies_srg_identity(graph: &Graph, params: &SrgParams) -> bool {
    let a = graph.adjacency_i64();
    let a2 = &a * &a;
    let (k, l, m) = (params.kappa as i64, params.lambda as i64, params.mu as i64);
    let n = graph.order();
    (0..n).all(|i| {
        (0..n).all(|j| {
            let id = (i == j) as i64;
            a2[(i, j)] == (k - m) * id + m + (l - m) * a[(i, j)]
        })
    })
}
