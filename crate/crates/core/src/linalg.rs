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

//! Dense symmetric helpers on top of nalgebra's eigen and SVD routines.

use nalgebra::{DMatrix, DVector};

/// Symmetric eigendecomposition with eigenvalues in descending order and
/// eigenvectors as matching columns.
///
/// nalgebra's implicit QR occasionally returns correct eigenvalues with
/// non-eigenvectors on matrices that are already partly reduced. Every
/// result is checked against `M V = V Lambda`; on failure the solve is
/// repeated on a reflected copy of the matrix and finally by cyclic Jacobi.
pub fn sym_eigen_desc(m: &DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let n = m.nrows();
    if n == 0 {
        return (Vec::new(), DMatrix::zeros(0, 0));
    }
    let sym = (m + m.transpose()) * 0.5;
    let tol = EIGEN_RESIDUAL_TOL * sym.amax().max(1.0);
    let accept = |vals: &DVector<f64>, vecs: &DMatrix<f64>| {
        let resid = &sym * vecs - vecs * DMatrix::from_diagonal(vals);
        resid.amax() <= tol
    };

    let eig = sym.clone().symmetric_eigen();
    if accept(&eig.eigenvalues, &eig.eigenvectors) {
        return sort_desc(eig.eigenvalues, eig.eigenvectors);
    }
    for seed in 1..=3u32 {
        let h = reflector(n, seed);
        let eig = (&h * &sym * &h).symmetric_eigen();
        let vecs = &h * eig.eigenvectors;
        if accept(&eig.eigenvalues, &vecs) {
            return sort_desc(eig.eigenvalues, vecs);
        }
    }
    let (vals, vecs) = jacobi_eigen(&sym);
    sort_desc(vals, vecs)
}

const EIGEN_RESIDUAL_TOL: f64 = 1e-10;

fn sort_desc(values: DVector<f64>, vectors: DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[b].total_cmp(&values[a]));
    let sorted = order.iter().map(|&i| values[i]).collect();
    let vecs = DMatrix::from_fn(vectors.nrows(), n, |r, c| vectors[(r, order[c])]);
    (sorted, vecs)
}

/// Householder reflection `I - 2 w w^T` for a fixed irrational direction.
fn reflector(n: usize, seed: u32) -> DMatrix<f64> {
    let phi = 0.618_033_988_749_894_9 * seed as f64;
    let w = DVector::from_fn(n, |i, _| {
        ((i as f64 + 1.0) * phi + 0.3 * seed as f64).sin() + 1.5
    });
    let w = w.normalize();
    DMatrix::identity(n, n) - (&w * w.transpose()) * 2.0
}

/// Cyclic Jacobi rotations; slow but unconditionally convergent.
fn jacobi_eigen(m: &DMatrix<f64>) -> (DVector<f64>, DMatrix<f64>) {
    let n = m.nrows();
    let mut a = m.clone();
    let mut v = DMatrix::<f64>::identity(n, n);
    let scale = a.amax().max(f64::MIN_POSITIVE);
    for _ in 0..100 {
        if max_abs_off_diagonal(&a) <= 1e-15 * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                if apq.abs() <= f64::MIN_POSITIVE {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }
    (a.diagonal(), v)
}

/// `V f(Lambda) V^T` for a symmetric matrix.
pub fn sym_apply(m: &DMatrix<f64>, f: impl Fn(f64) -> f64) -> DMatrix<f64> {
    let (values, vectors) = sym_eigen_desc(m);
    let scaled = DMatrix::from_fn(vectors.nrows(), vectors.ncols(), |r, c| {
        vectors[(r, c)] * f(values[c])
    });
    let out = &scaled * vectors.transpose();
    (&out + out.transpose()) * 0.5
}

/// Thin SVD with singular values sorted in descending order.
/// Returns `(U, sigma, V)` with `A = U diag(sigma) V^T`.
pub fn svd_desc(m: &DMatrix<f64>) -> (DMatrix<f64>, Vec<f64>, DMatrix<f64>) {
    let (r, c) = m.shape();
    let k = r.min(c);
    if k == 0 {
        return (DMatrix::zeros(r, 0), Vec::new(), DMatrix::zeros(c, 0));
    }
    let svd = m.clone().svd(true, true);
    let u = svd.u.expect("requested U");
    let vt = svd.v_t.expect("requested V^T");
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let sigma = order.iter().map(|&i| svd.singular_values[i]).collect();
    let u_sorted = DMatrix::from_fn(r, k, |i, j| u[(i, order[j])]);
    let v_sorted = DMatrix::from_fn(c, k, |i, j| vt[(order[j], i)]);
    (u_sorted, sigma, v_sorted)
}

/// All `min(rows, cols)` singular values, descending.
pub fn singular_values_desc(m: &DMatrix<f64>) -> Vec<f64> {
    let (r, c) = m.shape();
    if r.min(c) == 0 {
        return Vec::new();
    }
    let mut s: Vec<f64> = m
        .clone()
        .svd(false, false)
        .singular_values
        .iter()
        .cloned()
        .collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Orthonormal basis of the orthogonal complement of the span of the
/// (orthonormal) columns of `basis`.
pub fn orthogonal_complement(basis: &DMatrix<f64>) -> DMatrix<f64> {
    let (p, r) = basis.shape();
    if r >= p {
        return DMatrix::zeros(p, 0);
    }
    let proj = DMatrix::identity(p, p) - basis * basis.transpose();
    let (_, vectors) = sym_eigen_desc(&proj);
    // projector eigenvalues are 1 (complement) then 0 (span)
    vectors.columns(0, p - r).into_owned()
}

/// Orthonormal basis of the complement of the all-ones vector in `R^p`
/// (Helmert contrasts): column `k` is `(1, ..., 1, -(k+1), 0, ...)`
/// normalized, with `k + 1` leading ones.
pub fn ones_complement(p: usize) -> DMatrix<f64> {
    let cols = p.saturating_sub(1);
    DMatrix::from_fn(p, cols, |i, k| {
        let kk = (k + 1) as f64;
        let norm = (kk * (kk + 1.0)).sqrt();
        if i <= k {
            1.0 / norm
        } else if i == k + 1 {
            -kk / norm
        } else {
            0.0
        }
    })
}

pub fn unit_ones(p: usize) -> DVector<f64> {
    DVector::from_element(p, 1.0 / (p as f64).sqrt())
}

/// Splits descending `values` into runs whose consecutive gaps are at most
/// `rel_tol * scale`. Returns half-open index ranges.
pub fn group_runs(values: &[f64], rel_tol: f64, scale: f64) -> Vec<std::ops::Range<usize>> {
    let tol = rel_tol * scale.abs().max(f64::MIN_POSITIVE);
    let mut runs = Vec::new();
    let mut start = 0;
    for i in 1..=values.len() {
        if i == values.len() || (values[i - 1] - values[i]).abs() > tol {
            if i > start {
                runs.push(start..i);
            }
            start = i;
        }
    }
    runs
}

pub fn max_abs_off_diagonal(m: &DMatrix<f64>) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            if i != j {
                worst = worst.max(m[(i, j)].abs());
            }
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn helmert_is_orthonormal_and_orthogonal_to_ones() {
        for p in 1..7 {
            let q = ones_complement(p);
            let gram = q.transpose() * &q;
            assert!((gram - DMatrix::identity(p - 1, p - 1)).norm() < 1e-13);
            let ones = DVector::from_element(p, 1.0);
            assert!((q.transpose() * ones).norm() < 1e-13);
        }
    }

    #[test]
    fn complement_spans_the_rest() {
        let b = DMatrix::from_column_slice(3, 1, &[1.0, 0.0, 0.0]);
        let c = orthogonal_complement(&b);
        assert_eq!(c.shape(), (3, 2));
        assert!((b.transpose() * &c).norm() < 1e-13);
        assert!((c.transpose() * &c - DMatrix::identity(2, 2)).norm() < 1e-13);
    }

    #[test]
    fn svd_sorted_reconstructs() {
        let m = DMatrix::from_row_slice(2, 3, &[1.0, 2.0, 0.0, 0.0, 3.0, 4.0]);
        let (u, s, v) = svd_desc(&m);
        assert!(s[0] >= s[1]);
        let rebuilt = &u * DMatrix::from_diagonal(&DVector::from_vec(s)) * v.transpose();
        assert!((rebuilt - m).norm() < 1e-12);
    }

    #[test]
    fn inverse_square_root() {
        let m = DMatrix::from_row_slice(2, 2, &[2.0, 1.0, 1.0, 2.0]);
        let r = sym_apply(&m, |x| 1.0 / x.sqrt());
        let back = &r * &m * &r;
        assert!((back - DMatrix::identity(2, 2)).norm() < 1e-12);
    }

    fn check_eigen(m: &DMatrix<f64>, vals: &[f64], vecs: &DMatrix<f64>) {
        let lam = DMatrix::from_diagonal(&DVector::from_row_slice(vals));
        assert!((m * vecs - vecs * lam).amax() < 1e-9);
        assert!((vecs.transpose() * vecs - DMatrix::identity(m.nrows(), m.nrows())).amax() < 1e-9);
        assert!(vals.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn eigenvectors_are_verified() {
        // nalgebra's QR returns wrong eigenvectors for this input
        let d = [
            -3.0000000000000013,
            1.4155343563970746e-15,
            -3.0531133177191805e-15,
            2.3314683517128287e-15,
            1.5543122344752192e-15,
            -2.5049611329794397,
            -0.013753197392280786,
            1.493298933503703,
            -3.219646771412954e-15,
            -0.013753197392281008,
            1.9999580128589522,
            0.004558892827689037,
            2.248201624865942e-15,
            1.493298933503703,
            0.004558892827689176,
            1.5050031201204883,
        ];
        let m = DMatrix::from_column_slice(4, 4, &d);
        let m = (&m + m.transpose()) * 0.5;
        let (vals, vecs) = sym_eigen_desc(&m);
        check_eigen(&m, &vals, &vecs);
    }

    #[test]
    fn jacobi_agrees() {
        let m = DMatrix::from_row_slice(3, 3, &[2.0, -1.0, 0.0, -1.0, 2.0, -1.0, 0.0, -1.0, 2.0]);
        let (vals, vecs) = jacobi_eigen(&m);
        let (vals, vecs) = sort_desc(vals, vecs);
        check_eigen(&m, &vals, &vecs);
        let s2 = 2f64.sqrt();
        for (a, b) in vals.iter().zip([2.0 + s2, 2.0, 2.0 - s2]) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn runs() {
        let v = [3.0, 3.0 + 1e-12, 2.0, 1.0, 1.0];
        let r = group_runs(&v, 1e-8, 3.0);
        assert_eq!(r, vec![0..2, 2..3, 3..5]);
        assert!(group_runs(&[], 1e-8, 1.0).is_empty());
    }
}
