//! Minimal dense linear algebra: a row-major matrix type and a symmetric
//! eigensolver (Householder tridiagonalization followed by implicit-shift QL,
//! after the EISPACK `tred2`/`tql2` pair).

use crate::math;
use alloc::vec;
use alloc::vec::Vec;

/// Dense row-major `f64` matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DMat {
    pub n_rows: usize,
    pub n_cols: usize,
    data: Vec<f64>,
}

impl DMat {
    pub fn zeros(n_rows: usize, n_cols: usize) -> Self {
        DMat {
            n_rows,
            n_cols,
            data: vec![0.0; n_rows * n_cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = DMat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_fn(n_rows: usize, n_cols: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        let mut m = DMat::zeros(n_rows, n_cols);
        for i in 0..n_rows {
            for j in 0..n_cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    #[inline(always)]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n_cols..(i + 1) * self.n_cols]
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        debug_assert_eq!(x.len(), self.n_cols);
        (0..self.n_rows)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn matmul(&self, other: &DMat) -> DMat {
        debug_assert_eq!(self.n_cols, other.n_rows);
        let mut out = DMat::zeros(self.n_rows, other.n_cols);
        for i in 0..self.n_rows {
            for k in 0..self.n_cols {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                for j in 0..other.n_cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    /// Max row sum of absolute values (the induced infinity norm).
    pub fn norm_inf(&self) -> f64 {
        (0..self.n_rows)
            .map(|i| self.row(i).iter().map(|x| math::abs(*x)).sum())
            .fold(0.0, f64::max)
    }

    pub fn max_symmetry_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.n_rows {
            for j in 0..i {
                worst = worst.max(math::abs(self[(i, j)] - self[(j, i)]));
            }
        }
        worst
    }
}

impl core::ops::Index<(usize, usize)> for DMat {
    type Output = f64;
    #[inline(always)]
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.n_cols + j]
    }
}

impl core::ops::IndexMut<(usize, usize)> for DMat {
    #[inline(always)]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.n_cols + j]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum LinalgError {
    /// The QL iteration exceeded its sweep budget on some eigenvalue.
    NoConvergence { index: usize },
    NotSymmetric { defect: f64 },
}

impl core::fmt::Display for LinalgError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            LinalgError::NoConvergence { index } => {
                write!(f, "QL iteration failed to converge at eigenvalue {index}")
            }
            LinalgError::NotSymmetric { defect } => {
                write!(f, "matrix is not symmetric (defect {defect})")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for LinalgError {}

/// `sqrt(a² + b²)` without intermediate overflow.
fn pythag(a: f64, b: f64) -> f64 {
    let (a, b) = (math::abs(a), math::abs(b));
    let (big, small) = if a > b { (a, b) } else { (b, a) };
    if big == 0.0 {
        return 0.0;
    }
    let r = small / big;
    big * math::sqrt(1.0 + r * r)
}

/// Householder reduction of a real symmetric matrix to tridiagonal form,
/// accumulating the orthogonal transformation in `z`.
fn tred2(z: &mut DMat, d: &mut [f64], e: &mut [f64]) {
    let n = z.n_rows;
    for i in (1..n).rev() {
        let l = i - 1;
        let mut h = 0.0;
        if l > 0 {
            let scale: f64 = (0..=l).map(|k| math::abs(z[(i, k)])).sum();
            if scale == 0.0 {
                e[i] = z[(i, l)];
            } else {
                for k in 0..=l {
                    z[(i, k)] /= scale;
                    h += z[(i, k)] * z[(i, k)];
                }
                let f = z[(i, l)];
                let g = if f >= 0.0 { -math::sqrt(h) } else { math::sqrt(h) };
                e[i] = scale * g;
                h -= f * g;
                z[(i, l)] = f - g;
                let mut f_acc = 0.0;
                for j in 0..=l {
                    z[(j, i)] = z[(i, j)] / h;
                    let mut g = 0.0;
                    for k in 0..=j {
                        g += z[(j, k)] * z[(i, k)];
                    }
                    for k in (j + 1)..=l {
                        g += z[(k, j)] * z[(i, k)];
                    }
                    e[j] = g / h;
                    f_acc += e[j] * z[(i, j)];
                }
                let hh = f_acc / (h + h);
                for j in 0..=l {
                    let f = z[(i, j)];
                    let g = e[j] - hh * f;
                    e[j] = g;
                    for k in 0..=j {
                        z[(j, k)] -= f * e[k] + g * z[(i, k)];
                    }
                }
            }
        } else {
            e[i] = z[(i, l)];
        }
        d[i] = h;
    }
    d[0] = 0.0;
    e[0] = 0.0;
    for i in 0..n {
        if d[i] != 0.0 {
            for j in 0..i {
                let mut g = 0.0;
                for k in 0..i {
                    g += z[(i, k)] * z[(k, j)];
                }
                for k in 0..i {
                    z[(k, j)] -= g * z[(k, i)];
                }
            }
        }
        d[i] = z[(i, i)];
        z[(i, i)] = 1.0;
        for j in 0..i {
            z[(j, i)] = 0.0;
            z[(i, j)] = 0.0;
        }
    }
}

/// Implicit-shift QL iteration on a symmetric tridiagonal matrix, rotating
/// the eigenvector accumulator `z` along.
fn tql2(d: &mut [f64], e: &mut [f64], z: &mut DMat) -> Result<(), LinalgError> {
    let n = d.len();
    if n <= 1 {
        return Ok(());
    }
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m < n - 1 {
                let dd = math::abs(d[m]) + math::abs(d[m + 1]);
                if math::abs(e[m]) <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 50 {
                return Err(LinalgError::NoConvergence { index: l });
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = pythag(g, 1.0);
            g = d[m] - d[l] + e[l] / (g + math::with_sign_of(r, g));
            let mut s = 1.0;
            let mut c = 1.0;
            let mut p = 0.0;
            let mut underflow = false;
            for i in (l..m).rev() {
                let mut f = s * e[i];
                let b = c * e[i];
                r = pythag(f, g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                for k in 0..n {
                    f = z[(k, i + 1)];
                    z[(k, i + 1)] = s * z[(k, i)] + c * f;
                    z[(k, i)] = c * z[(k, i)] - s * f;
                }
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

/// Full eigendecomposition of a real symmetric matrix: eigenvalues in
/// ascending order and the corresponding orthonormal eigenvectors as the
/// columns of the returned matrix.
pub fn symmetric_eigen(a: &DMat) -> Result<(Vec<f64>, DMat), LinalgError> {
    debug_assert_eq!(a.n_rows, a.n_cols);
    let defect = a.max_symmetry_defect();
    if defect > 1e-9 * a.norm_inf().max(1.0) {
        return Err(LinalgError::NotSymmetric { defect });
    }
    let n = a.n_rows;
    let mut z = a.clone();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    tred2(&mut z, &mut d, &mut e);
    tql2(&mut d, &mut e, &mut z)?;

    // Sort ascending, permuting eigenvector columns along.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[i].partial_cmp(&d[j]).unwrap_or(core::cmp::Ordering::Equal));
    let values: Vec<f64> = order.iter().map(|&i| d[i]).collect();
    let mut vectors = DMat::zeros(n, n);
    for (new_col, &old_col) in order.iter().enumerate() {
        for row in 0..n {
            vectors[(row, new_col)] = z[(row, old_col)];
        }
    }
    Ok((values, vectors))
}

/// `max_k ‖A v_k − λ_k v_k‖₂` over all eigenpairs.
pub fn max_residual(a: &DMat, values: &[f64], vectors: &DMat) -> f64 {
    let n = a.n_rows;
    let mut worst = 0.0f64;
    let mut column = vec![0.0; n];
    for (k, &lambda) in values.iter().enumerate() {
        for i in 0..n {
            column[i] = vectors[(i, k)];
        }
        let av = a.matvec(&column);
        let mut norm2 = 0.0;
        for i in 0..n {
            let r = av[i] - lambda * column[i];
            norm2 += r * r;
        }
        worst = worst.max(math::sqrt(norm2));
    }
    worst
}

/// `max_ij |VᵀV − I|_ij`.
pub fn orthonormality_defect(vectors: &DMat) -> f64 {
    let n = vectors.n_rows;
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            let mut dot = 0.0;
            for k in 0..n {
                dot += vectors[(k, i)] * vectors[(k, j)];
            }
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max(math::abs(dot - target));
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;

    #[test]
    fn eigen_of_small_known_matrix() {
        // [[2,1],[1,2]] has eigenvalues 1 and 3.
        let mut a = DMat::zeros(2, 2);
        a[(0, 0)] = 2.0;
        a[(0, 1)] = 1.0;
        a[(1, 0)] = 1.0;
        a[(1, 1)] = 2.0;
        let (vals, vecs) = symmetric_eigen(&a).unwrap();
        assert!((vals[0] - 1.0).abs() < 1e-14);
        assert!((vals[1] - 3.0).abs() < 1e-14);
        assert!(max_residual(&a, &vals, &vecs) < 1e-14);
    }

    #[test]
    fn eigen_of_diagonal_matrix_is_exact() {
        let a = DMat::from_fn(5, 5, |i, j| if i == j { i as f64 - 2.0 } else { 0.0 });
        let (vals, _) = symmetric_eigen(&a).unwrap();
        for (k, v) in vals.iter().enumerate() {
            assert_eq!(*v, k as f64 - 2.0);
        }
    }

    #[test]
    fn eigen_of_random_symmetric_matrices() {
        for trial in 0..5 {
            let n = 40;
            let mut rng = rng::stream(0x11A6, "linalg", trial);
            let mut a = DMat::zeros(n, n);
            for i in 0..n {
                for j in 0..=i {
                    let x = 2.0 * rng::uniform(&mut rng) - 1.0;
                    a[(i, j)] = x;
                    a[(j, i)] = x;
                }
            }
            let (vals, vecs) = symmetric_eigen(&a).unwrap();
            for w in vals.windows(2) {
                assert!(w[0] <= w[1]);
            }
            assert!(max_residual(&a, &vals, &vecs) < 1e-9 * a.norm_inf());
            assert!(orthonormality_defect(&vecs) < 1e-10);
            // Trace is preserved by similarity.
            let trace: f64 = (0..n).map(|i| a[(i, i)]).sum();
            let sum: f64 = vals.iter().sum();
            assert!((trace - sum).abs() < 1e-9);
        }
    }

    #[test]
    fn rejects_asymmetric_input() {
        let mut a = DMat::zeros(3, 3);
        a[(0, 1)] = 1.0;
        assert!(matches!(
            symmetric_eigen(&a),
            Err(LinalgError::NotSymmetric { .. })
        ));
    }

    #[test]
    fn matvec_and_matmul() {
        let a = DMat::from_fn(2, 3, |i, j| (i * 3 + j) as f64);
        let x = [1.0, 0.0, -1.0];
        assert_eq!(a.matvec(&x), vec![-2.0, -2.0]);
        let b = DMat::from_fn(3, 2, |i, j| (i + j) as f64);
        let c = a.matmul(&b);
        assert_eq!(c[(0, 0)], 0.0 * 0.0 + 1.0 * 1.0 + 2.0 * 2.0);
        assert_eq!(c[(1, 1)], 3.0 * 1.0 + 4.0 * 2.0 + 5.0 * 3.0);
    }
}
