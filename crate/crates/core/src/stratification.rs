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

//! Distance partitions from a reference vertex and the block-diagonal form
//! of an SRG adjacency matrix in the stratification basis.
//!
//! Relative to a root `o`, an SRG splits into `{o}`, its `kappa` neighbours
//! and the `n - kappa - 1` remaining vertices. Writing the adjacency in
//! that order gives the blocks `A11` (neighbours), `A12` (neighbours to
//! far vertices) and `A22` (far vertices). The uniform vectors on the
//! strata span a 3-dimensional invariant subspace; on its complement the
//! adjacency decomposes into 2x2 blocks, one per non-zero singular value of
//! `A12`, plus 1x1 blocks ("singlets") for the kernel of `A12` or `A12^T`.

use nalgebra::{DMatrix, DVector, Matrix3};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{srg_params, Graph, SrgParams};
use crate::linalg::{
    group_runs, max_abs_off_diagonal, ones_complement, orthogonal_complement, svd_desc,
    sym_eigen_desc, unit_ones,
};

/// Singular values below this fraction of the largest are treated as zero.
pub const KERNEL_REL_TOL: f64 = 1e-10;
/// Relative gap below which sorted singular values are one multiplet.
pub const GROUPING_REL_TOL: f64 = 1e-8;
/// Off-diagonal residual allowed after joint diagonalization.
pub const JOINT_TOL: f64 = 1e-8;
/// Distance within which a singlet is snapped onto `r` or `s`.
pub const SINGLET_SNAP_TOL: f64 = 1e-6;
/// Tolerance for the analytic first-stratum block.
pub const FIRST_BLOCK_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Stratification {
    pub root: usize,
    /// Distance classes from `root`, each sorted ascending.
    pub strata: Vec<Vec<usize>>,
}

impl Stratification {
    pub fn valencies(&self) -> Vec<usize> {
        self.strata.iter().map(Vec::len).collect()
    }

    pub fn len(&self) -> usize {
        self.strata.len()
    }

    pub fn is_empty(&self) -> bool {
        self.strata.is_empty()
    }
}

/// Breadth-first layers from `root`. Works on any connected graph.
pub fn stratify(graph: &Graph, root: usize) -> Result<Stratification> {
    if root >= graph.order() {
        return Err(Error::RootOutOfRange {
            vertex: root,
            n: graph.order(),
        });
    }
    let strata = graph.bfs_layers(root);
    if strata.iter().map(Vec::len).sum::<usize>() != graph.order() {
        return Err(Error::Disconnected);
    }
    Ok(Stratification { root, strata })
}

#[derive(Debug, Clone, PartialEq)]
pub struct StratifiedBlocks {
    pub params: SrgParams,
    pub root: usize,
    /// Vertex ids of the second stratum, in block row order.
    pub near: Vec<usize>,
    /// Vertex ids of the third stratum, in block column order.
    pub far: Vec<usize>,
    pub a11: DMatrix<i64>,
    pub a12: DMatrix<i64>,
    pub a22: DMatrix<i64>,
}

fn submatrix(graph: &Graph, rows: &[usize], cols: &[usize]) -> DMatrix<i64> {
    DMatrix::from_fn(rows.len(), cols.len(), |i, j| {
        graph.has_edge(rows[i], cols[j]) as i64
    })
}

/// Extracts `A11`, `A12`, `A22` and verifies the block identities implied
/// by strong regularity in exact integer arithmetic.
pub fn extract_blocks(graph: &Graph, strat: &Stratification) -> Result<StratifiedBlocks> {
    if strat.len() != 3 {
        return Err(Error::NotThreeStrata(strat.len()));
    }
    let params = srg_params(graph)?;
    let near = strat.strata[1].clone();
    let far = strat.strata[2].clone();
    let a11 = submatrix(graph, &near, &near);
    let a12 = submatrix(graph, &near, &far);
    let a22 = submatrix(graph, &far, &far);
    let blocks = StratifiedBlocks {
        params,
        root: strat.root,
        near,
        far,
        a11,
        a12,
        a22,
    };
    blocks.verify()?;
    Ok(blocks)
}

impl StratifiedBlocks {
    fn verify(&self) -> Result<()> {
        let (k, l, m) = (
            self.params.kappa as i64,
            self.params.lambda as i64,
            self.params.mu as i64,
        );
        let kp = self.far.len();
        if self.near.len() != self.params.kappa || kp != self.params.far_size() {
            return Err(Error::BlockSumViolation(
                "stratum sizes differ from (1, kappa, n-kappa-1)",
            ));
        }
        let all = |mat: &DMatrix<i64>, rows: bool, want: i64| {
            if rows {
                mat.row_iter().all(|r| r.sum() == want)
            } else {
                mat.column_iter().all(|c| c.sum() == want)
            }
        };
        if !all(&self.a12, false, m) {
            return Err(Error::BlockSumViolation("A12 column sums differ from mu"));
        }
        if !all(&self.a12, true, k - l - 1) {
            return Err(Error::BlockSumViolation(
                "A12 row sums differ from kappa-lambda-1",
            ));
        }
        if !all(&self.a11, true, l) || !all(&self.a11, false, l) {
            return Err(Error::BlockSumViolation(
                "A11 row/column sums differ from lambda",
            ));
        }
        if !all(&self.a22, true, k - m) || !all(&self.a22, false, k - m) {
            return Err(Error::BlockSumViolation(
                "A22 row/column sums differ from kappa-mu",
            ));
        }

        let a12t = self.a12.transpose();
        let lhs = &a12t * &self.a12 + &self.a22 * &self.a22;
        let rhs = DMatrix::from_fn(kp, kp, |i, j| {
            (k - m) * (i == j) as i64 + m + (l - m) * self.a22[(i, j)]
        });
        if lhs != rhs {
            return Err(Error::BlockSumViolation(
                "A12^T A12 + A22^2 != (kappa-mu)I + mu J + (lambda-mu)A22",
            ));
        }
        let kk = self.near.len();
        let lhs = &self.a11 * &self.a11 + &self.a12 * &a12t;
        let rhs = DMatrix::from_fn(kk, kk, |i, j| {
            (k - m) * (i == j) as i64 + (m - 1) + (l - m) * self.a11[(i, j)]
        });
        if lhs != rhs {
            return Err(Error::BlockSumViolation(
                "A11^2 + A12 A12^T != (kappa-mu)I + (mu-1)J + (lambda-mu)A11",
            ));
        }
        let lhs = &self.a11 * &self.a12 + &self.a12 * &self.a22;
        let rhs = DMatrix::from_fn(kk, kp, |i, j| m + (l - m) * self.a12[(i, j)]);
        if lhs != rhs {
            return Err(Error::BlockSumViolation(
                "A11 A12 + A12 A22 != mu J + (lambda-mu)A12",
            ));
        }
        Ok(())
    }
}

/// Adjacency restricted to the span of the three stratum unit vectors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FirstStratumBlock {
    pub m: [[f64; 3]; 3],
}

impl FirstStratumBlock {
    pub fn matrix(&self) -> Matrix3<f64> {
        Matrix3::from_fn(|i, j| self.m[i][j])
    }

    fn from_matrix(m: &Matrix3<f64>) -> Self {
        let mut out = [[0.0; 3]; 3];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                *x = m[(i, j)];
            }
        }
        FirstStratumBlock { m: out }
    }

    pub fn lambda1(&self) -> f64 {
        self.m[1][1]
    }

    pub fn lambda2(&self) -> f64 {
        self.m[2][2]
    }

    pub fn lambda12(&self) -> f64 {
        self.m[1][2] * self.m[1][2]
    }

    pub fn max_abs_diff(&self, other: &FirstStratumBlock) -> f64 {
        (self.matrix() - other.matrix()).amax()
    }
}

/// Closed form of the first-stratum block:
/// `[[0, sqrt k, 0], [sqrt k, lambda, mu sqrt(n-k-1)/sqrt k], [0, ., k-mu]]`.
pub fn first_stratum_block(params: &SrgParams) -> FirstStratumBlock {
    let k = params.kappa as f64;
    let c = params.top_coupling();
    let m = Matrix3::new(
        0.0,
        k.sqrt(),
        0.0,
        k.sqrt(),
        params.lambda as f64,
        c,
        0.0,
        c,
        params.kappa as f64 - params.mu as f64,
    );
    FirstStratumBlock::from_matrix(&m)
}

/// `<phi_i|A|phi_j>` for the three stratum unit vectors, computed on the
/// full adjacency matrix.
pub fn first_stratum_projection(
    graph: &Graph,
    strat: &Stratification,
) -> Result<FirstStratumBlock> {
    if strat.len() != 3 {
        return Err(Error::NotThreeStrata(strat.len()));
    }
    let n = graph.order();
    let phis: Vec<DVector<f64>> = strat
        .strata
        .iter()
        .map(|s| {
            let w = 1.0 / (s.len() as f64).sqrt();
            let mut v = DVector::zeros(n);
            for &i in s {
                v[i] = w;
            }
            v
        })
        .collect();
    let a = graph.adjacency_f64();
    let m = Matrix3::from_fn(|i, j| phis[i].dot(&(&a * &phis[j])));
    Ok(FirstStratumBlock::from_matrix(&m))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TwoByTwoBlock {
    /// Self-adjacency of the second-stratum mode.
    pub lambda1: f64,
    /// Self-adjacency of the third-stratum mode.
    pub lambda2: f64,
    /// Squared cross coupling (a squared singular value of `A12`).
    pub lambda12: f64,
    pub multiplicity: usize,
}

impl TwoByTwoBlock {
    pub fn eigenvalues(&self) -> (f64, f64) {
        let tr = self.lambda1 + self.lambda2;
        let det = self.lambda1 * self.lambda2 - self.lambda12;
        let disc = (tr * tr - 4.0 * det).max(0.0).sqrt();
        ((tr + disc) / 2.0, (tr - disc) / 2.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Singlet {
    pub value: f64,
    pub multiplicity: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlockDiagonalization {
    pub params: SrgParams,
    pub first: FirstStratumBlock,
    pub pairs: Vec<TwoByTwoBlock>,
    pub singlets2: Vec<Singlet>,
    pub singlets3: Vec<Singlet>,
}

impl BlockDiagonalization {
    pub fn pair_count(&self) -> usize {
        self.pairs.iter().map(|p| p.multiplicity).sum()
    }

    /// Union of the spectra of all blocks, descending.
    pub fn spectrum(&self) -> Vec<f64> {
        let mut out: Vec<f64> = self
            .first
            .matrix()
            .symmetric_eigenvalues()
            .iter()
            .cloned()
            .collect();
        for p in &self.pairs {
            let (a, b) = p.eigenvalues();
            for _ in 0..p.multiplicity {
                out.push(a);
                out.push(b);
            }
        }
        for s in self.singlets2.iter().chain(&self.singlets3) {
            out.extend(std::iter::repeat_n(s.value, s.multiplicity));
        }
        out.sort_by(|a, b| b.total_cmp(a));
        out
    }
}

/// Roots of `z^2 - (lambda-mu) z + (lambda12 - kappa + mu) = 0`, larger first.
pub fn pair_from_lambda12(params: &SrgParams, lambda12: f64) -> Result<(f64, f64)> {
    if !(lambda12 > 0.0 && lambda12.is_finite()) {
        return Err(Error::InvalidLambda12(lambda12));
    }
    let b = params.lambda as f64 - params.mu as f64;
    let c = lambda12 - params.kappa as f64 + params.mu as f64;
    let mut disc = b * b - 4.0 * c;
    if disc < 0.0 {
        if disc < -1e-9 {
            return Err(Error::NegativeDiscriminant(disc));
        }
        disc = 0.0;
    }
    let root = disc.sqrt();
    Ok(((b + root) / 2.0, (b - root) / 2.0))
}

fn to_f64(m: &DMatrix<i64>) -> DMatrix<f64> {
    m.map(|x| x as f64)
}

fn snap_singlet(x: f64, params: &SrgParams) -> Result<f64> {
    let (r, s) = params.restricted_eigenvalues();
    if (x - r).abs() <= SINGLET_SNAP_TOL {
        Ok(r)
    } else if (x - s).abs() <= SINGLET_SNAP_TOL {
        Ok(s)
    } else {
        Err(Error::JointDiagonalizationFailure(format!(
            "decoupled mode value {x} is neither restricted eigenvalue ({r}, {s})"
        )))
    }
}

fn collect_singlets(values: &[f64], params: &SrgParams) -> Result<Vec<Singlet>> {
    let mut snapped = values
        .iter()
        .map(|&x| snap_singlet(x, params))
        .collect::<Result<Vec<_>>>()?;
    snapped.sort_by(|a, b| b.total_cmp(a));
    let mut out: Vec<Singlet> = Vec::new();
    for x in snapped {
        match out.last_mut() {
            Some(s) if s.value == x => s.multiplicity += 1,
            _ => out.push(Singlet {
                value: x,
                multiplicity: 1,
            }),
        }
    }
    Ok(out)
}

/// Numerically block-diagonalizes the adjacency in the stratification
/// basis.
///
/// The all-ones directions are deflated with Helmert bases. The SVD of the
/// deflated `A12` fixes the pairing; inside each degenerate singular
/// subspace the left and right bases are rotated jointly by the eigenbasis
/// of the projected `A11`, after which the projected `A22` must already be
/// diagonal. Kernel directions of `A12` / `A12^T` become singlets.
pub fn block_diagonalize(blocks: &StratifiedBlocks) -> Result<BlockDiagonalization> {
    let params = blocks.params;
    let k = blocks.near.len();
    let kp = blocks.far.len();
    let a11 = to_f64(&blocks.a11);
    let a12 = to_f64(&blocks.a12);
    let a22 = to_f64(&blocks.a22);

    let e = unit_ones(k);
    let ep = unit_ones(kp);
    let numeric = Matrix3::new(
        0.0,
        (k as f64).sqrt(),
        0.0,
        (k as f64).sqrt(),
        e.dot(&(&a11 * &e)),
        e.dot(&(&a12 * &ep)),
        0.0,
        e.dot(&(&a12 * &ep)),
        ep.dot(&(&a22 * &ep)),
    );
    let first = first_stratum_block(&params);
    let first_err = (numeric - first.matrix()).amax();
    if first_err > FIRST_BLOCK_TOL {
        return Err(Error::JointDiagonalizationFailure(format!(
            "first-stratum block deviates from its closed form by {first_err:e}"
        )));
    }

    let q = ones_complement(k);
    let qp = ones_complement(kp);
    let b = q.transpose() * &a12 * &qp;
    let b11 = q.transpose() * &a11 * &q;
    let b22 = qp.transpose() * &a22 * &qp;

    let top = params.top_coupling();
    let (u, sigma, v) = svd_desc(&b);
    let rank = sigma
        .iter()
        .take_while(|&&s| s > KERNEL_REL_TOL * top)
        .count();

    let mut raw: Vec<(f64, f64, f64)> = Vec::with_capacity(rank);
    let mut left_cols: Vec<DVector<f64>> = Vec::with_capacity(k);
    let mut right_cols: Vec<DVector<f64>> = Vec::with_capacity(kp);
    for run in group_runs(&sigma[..rank], GROUPING_REL_TOL, top) {
        let len = run.len();
        let s = sigma[run.clone()].iter().sum::<f64>() / len as f64;
        let ug = u.columns(run.start, len).into_owned();
        let vg = v.columns(run.start, len).into_owned();
        let (vals, w) = sym_eigen_desc(&(ug.transpose() * &b11 * &ug));
        let ug = ug * &w;
        let vg = vg * &w;
        let p22 = vg.transpose() * &b22 * &vg;
        let resid = max_abs_off_diagonal(&p22);
        if resid > JOINT_TOL {
            return Err(Error::JointDiagonalizationFailure(format!(
                "projected A22 off-diagonal residual {resid:e} in singular subspace {s}"
            )));
        }
        for i in 0..len {
            raw.push((vals[i], p22[(i, i)], s * s));
            left_cols.push(ug.column(i).into_owned());
            right_cols.push(vg.column(i).into_owned());
        }
    }

    let kernel_values = |basis: &DMatrix<f64>, op: &DMatrix<f64>, cols: &mut Vec<DVector<f64>>| {
        let null = orthogonal_complement(basis);
        let (vals, w) = sym_eigen_desc(&(null.transpose() * op * &null));
        let rotated = null * w;
        cols.extend(rotated.column_iter().map(|c| c.into_owned()));
        vals
    };
    let singles2 = kernel_values(&u.columns(0, rank).into_owned(), &b11, &mut left_cols);
    let singles3 = kernel_values(&v.columns(0, rank).into_owned(), &b22, &mut right_cols);

    // global residual in the assembled bases
    if k > 1 && kp > 1 {
        let o1 = DMatrix::from_columns(&left_cols);
        let o2 = DMatrix::from_columns(&right_cols);
        let d11 = o1.transpose() * &b11 * &o1;
        let d22 = o2.transpose() * &b22 * &o2;
        let mut d12 = o1.transpose() * &b * &o2;
        for i in 0..rank {
            d12[(i, i)] -= raw[i].2.sqrt();
        }
        let resid = max_abs_off_diagonal(&d11)
            .max(max_abs_off_diagonal(&d22))
            .max(d12.amax());
        if resid > JOINT_TOL {
            return Err(Error::JointDiagonalizationFailure(format!(
                "assembled block form has residual {resid:e}"
            )));
        }
    }

    let pairs = group_pairs(raw, &params)?;
    let singlets2 = collect_singlets(&singles2, &params)?;
    let singlets3 = collect_singlets(&singles3, &params)?;

    let paired: usize = pairs.iter().map(|p| p.multiplicity).sum();
    let count2: usize = singlets2.iter().map(|s| s.multiplicity).sum();
    let count3: usize = singlets3.iter().map(|s| s.multiplicity).sum();
    if 1 + paired + count2 != k || 1 + paired + count3 != kp {
        return Err(Error::JointDiagonalizationFailure(format!(
            "mode count mismatch: 1 + {paired} + {count2} vs {k}, 1 + {paired} + {count3} vs {kp}"
        )));
    }

    Ok(BlockDiagonalization {
        params,
        first,
        pairs,
        singlets2,
        singlets3,
    })
}

fn group_pairs(mut raw: Vec<(f64, f64, f64)>, params: &SrgParams) -> Result<Vec<TwoByTwoBlock>> {
    let lm = params.lambda as f64 - params.mu as f64;
    let km = params.kappa as f64 - params.mu as f64;
    for &(l1, l2, l12) in &raw {
        let sum_err = (l1 + l2 - lm).abs();
        let det_err = (l12 - l1 * l2 - km).abs();
        if sum_err > JOINT_TOL || det_err > JOINT_TOL {
            return Err(Error::JointDiagonalizationFailure(format!(
                "paired block ({l1}, {l2}, {l12}) violates trace/determinant constraints"
            )));
        }
    }
    raw.sort_by(|a, b| b.2.total_cmp(&a.2).then(b.0.total_cmp(&a.0)));
    let scale = params.kappa as f64;
    let close = |a: f64, b: f64| (a - b).abs() <= GROUPING_REL_TOL * scale;
    let mut out: Vec<(TwoByTwoBlock, f64, f64, f64)> = Vec::new();
    for (l1, l2, l12) in raw {
        match out.last_mut() {
            Some((blk, s1, s2, s12))
                if close(blk.lambda1, l1) && close(blk.lambda2, l2) && close(blk.lambda12, l12) =>
            {
                blk.multiplicity += 1;
                *s1 += l1;
                *s2 += l2;
                *s12 += l12;
            }
            _ => out.push((
                TwoByTwoBlock {
                    lambda1: l1,
                    lambda2: l2,
                    lambda12: l12,
                    multiplicity: 1,
                },
                l1,
                l2,
                l12,
            )),
        }
    }
    // rounding noise around integer entries is removed so that, e.g., a zero
    // self-adjacency reads as exactly 0
    let snap = |x: f64| {
        let r = x.round();
        if (x - r).abs() <= KERNEL_REL_TOL * scale {
            r
        } else {
            x
        }
    };
    Ok(out
        .into_iter()
        .map(|(mut blk, s1, s2, s12)| {
            let m = blk.multiplicity as f64;
            blk.lambda1 = snap(s1 / m);
            blk.lambda2 = snap(s2 / m);
            blk.lambda12 = snap(s12 / m);
            blk
        })
        .collect())
}

/// Convenience: stratify at `root`, extract and block-diagonalize.
pub fn block_form(graph: &Graph, root: usize) -> Result<BlockDiagonalization> {
    let strat = stratify(graph, root)?;
    let blocks = extract_blocks(graph, &strat)?;
    block_diagonalize(&blocks)
}
