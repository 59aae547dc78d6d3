//! Symmetric tridiagonal eigensolver (implicit QL with Wilkinson shifts).

/// Eigen-decomposition of a real symmetric tridiagonal matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagEigen {
    /// Eigenvalues in ascending order.
    pub values: Vec<f64>,
    /// Row-major: `vectors[a * n + i]` is component `i` of eigenvector `a`.
    pub vectors: Vec<f64>,
}

impl TridiagEigen {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn vector(&self, a: usize) -> &[f64] {
        let n = self.dim();
        &self.vectors[a * n..(a + 1) * n]
    }
}

/// Iteration budget per eigenvalue before giving up.
const MAX_SWEEPS: usize = 60;

/// Diagonalizes the tridiagonal matrix with diagonal `diag` and off-diagonal
/// `off` (`off[i]` couples `i` and `i + 1`).
///
/// Eigenvectors are normalized and their phase fixed so that the first
/// component whose magnitude exceeds `1e-10` of the largest one is positive.
/// Returns `None` if the QL iteration does not converge.
pub fn eigh_tridiagonal(diag: &[f64], off: &[f64]) -> Option<TridiagEigen> {
    let n = diag.len();
    assert_eq!(off.len() + 1, n.max(1), "off-diagonal length must be n - 1");
    if n == 0 {
        return Some(TridiagEigen {
            values: vec![],
            vectors: vec![],
        });
    }

    let mut d = diag.to_vec();
    let mut e = vec![0.0; n];
    e[..n - 1].copy_from_slice(off);
    // vt[i * n + k] holds component k of the i-th accumulated column.
    let mut vt = vec![0.0; n * n];
    for i in 0..n {
        vt[i * n + i] = 1.0;
    }

    let eps = f64::EPSILON;
    let mut shift = 0.0;
    let mut tst1: f64 = 0.0;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n - 1 && e[m].abs() > eps * tst1 {
            m += 1;
        }
        if m > l {
            let mut iter = 0;
            loop {
                iter += 1;
                if iter > MAX_SWEEPS {
                    return None;
                }
                let g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in d.iter_mut().skip(l + 2) {
                    *di -= h;
                }
                shift += h;

                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    let g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    let (lo, hi) = vt.split_at_mut((i + 1) * n);
                    let row_i = &mut lo[i * n..];
                    let row_next = &mut hi[..n];
                    for k in 0..n {
                        let hk = row_next[k];
                        row_next[k] = s * row_i[k] + c * hk;
                        row_i[k] = c * row_i[k] - s * hk;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += shift;
        e[l] = 0.0;
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].total_cmp(&d[b]).then(a.cmp(&b)));
    let mut values = Vec::with_capacity(n);
    let mut vectors = Vec::with_capacity(n * n);
    for &a in &order {
        values.push(d[a]);
        let row = &vt[a * n..(a + 1) * n];
        let norm = row.iter().map(|x| x * x).sum::<f64>().sqrt();
        let big = row.iter().fold(0.0f64, |acc, x| acc.max(x.abs()));
        let first = row
            .iter()
            .find(|x| x.abs() > 1e-10 * big)
            .copied()
            .unwrap_or(1.0);
        let sign = if first < 0.0 { -1.0 } else { 1.0 };
        vectors.extend(row.iter().map(|x| sign * x / norm));
    }
    Some(TridiagEigen { values, vectors })
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;

    fn dense(diag: &[f64], off: &[f64]) -> DMatrix<f64> {
        let n = diag.len();
        DMatrix::from_fn(n, n, |i, k| {
            if i == k {
                diag[i]
            } else if i + 1 == k {
                off[i]
            } else if k + 1 == i {
                off[k]
            } else {
                0.0
            }
        })
    }

    #[test]
    fn one_by_one() {
        let e = eigh_tridiagonal(&[3.5], &[]).unwrap();
        assert_eq!(e.values, vec![3.5]);
        assert_eq!(e.vectors, vec![1.0]);
    }

    #[test]
    fn diagonal_input_sorts() {
        let e = eigh_tridiagonal(&[2.0, -1.0, 0.5], &[0.0, 0.0]).unwrap();
        assert_eq!(e.values, vec![-1.0, 0.5, 2.0]);
        assert_eq!(e.vector(0), &[0.0, 1.0, 0.0]);
    }

    #[test]
    fn matches_dense_solver_and_reconstructs() {
        let n = 40;
        let diag: Vec<f64> = (0..n).map(|i| ((i * 7) % 11) as f64 * 0.3 - 1.0).collect();
        let off: Vec<f64> = (0..n - 1).map(|i| 0.5 + ((i * 3) % 5) as f64 * 0.2).collect();
        let e = eigh_tridiagonal(&diag, &off).unwrap();
        let m = dense(&diag, &off);
        let mut reference: Vec<f64> = m.clone().symmetric_eigen().eigenvalues.iter().copied().collect();
        reference.sort_by(f64::total_cmp);
        for (a, b) in e.values.iter().zip(&reference) {
            assert!((a - b).abs() < 1e-12, "{a} vs {b}");
        }
        let v = DMatrix::from_fn(n, n, |i, a| e.vector(a)[i]);
        let recon = &v * DMatrix::from_diagonal(&nalgebra::DVector::from_vec(e.values.clone())) * v.transpose();
        assert!((recon - &m).amax() < 1e-12);
        let gram = v.transpose() * &v;
        assert!((gram - DMatrix::identity(n, n)).amax() < 1e-12);
    }
}
