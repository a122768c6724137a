//! Small dense matrices and the few factorizations the rest of the crate
//! needs. Sizes stay in the hundreds, so everything is plain row-major
//! storage with O(n^3) algorithms.

use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;
// The test harness links std, whose inherent f64 methods shadow the trait.
#[cfg_attr(test, allow(unused_imports))]
use num_traits::Float;

/// Dense row-major complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix {
    pub nrows: usize,
    pub ncols: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        CMatrix {
            nrows,
            ncols,
            data: vec![Complex64::new(0.0, 0.0); nrows * ncols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = CMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(nrows: usize, ncols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = CMatrix::zeros(nrows, ncols);
        for i in 0..nrows {
            for j in 0..ncols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Row-major 2x2 convenience constructor.
    pub fn from_rows2(r: [[Complex64; 2]; 2]) -> Self {
        CMatrix::from_fn(2, 2, |i, j| r[i][j])
    }

    pub fn mul(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.ncols, other.nrows, "matmul dimension mismatch");
        let mut out = CMatrix::zeros(self.nrows, other.ncols);
        for i in 0..self.nrows {
            for k in 0..self.ncols {
                let a = self[(i, k)];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..other.ncols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.ncols, v.len());
        let mut out = vec![Complex64::new(0.0, 0.0); self.nrows];
        for i in 0..self.nrows {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..self.ncols {
                acc += self[(i, j)] * v[j];
            }
            out[i] = acc;
        }
        out
    }

    pub fn add(&self, other: &CMatrix) -> CMatrix {
        assert_eq!((self.nrows, self.ncols), (other.nrows, other.ncols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(other.data.iter()) {
            *a += *b;
        }
        out
    }

    pub fn sub(&self, other: &CMatrix) -> CMatrix {
        assert_eq!((self.nrows, self.ncols), (other.nrows, other.ncols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(other.data.iter()) {
            *a -= *b;
        }
        out
    }

    pub fn scale(&self, c: Complex64) -> CMatrix {
        let mut out = self.clone();
        for a in out.data.iter_mut() {
            *a *= c;
        }
        out
    }

    pub fn transpose(&self) -> CMatrix {
        CMatrix::from_fn(self.ncols, self.nrows, |i, j| self[(j, i)])
    }

    pub fn dagger(&self) -> CMatrix {
        CMatrix::from_fn(self.ncols, self.nrows, |i, j| self[(j, i)].conj())
    }

    pub fn kron(&self, other: &CMatrix) -> CMatrix {
        let (p, q) = (other.nrows, other.ncols);
        CMatrix::from_fn(self.nrows * p, self.ncols * q, |i, j| {
            self[(i / p, j / q)] * other[(i % p, j % q)]
        })
    }

    pub fn trace(&self) -> Complex64 {
        assert_eq!(self.nrows, self.ncols);
        (0..self.nrows).map(|i| self[(i, i)]).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Max elementwise |a - b|.
    pub fn max_abs_diff(&self, other: &CMatrix) -> f64 {
        assert_eq!((self.nrows, self.ncols), (other.nrows, other.ncols));
        self.data
            .iter()
            .zip(other.data.iter())
            .map(|(a, b)| (*a - *b).norm())
            .fold(0.0, f64::max)
    }

    /// Determinant by LU with partial pivoting.
    pub fn det(&self) -> Complex64 {
        assert_eq!(self.nrows, self.ncols);
        let n = self.nrows;
        let mut a = self.clone();
        let mut det = Complex64::new(1.0, 0.0);
        for col in 0..n {
            let (mut pmax, mut prow) = (0.0, col);
            for r in col..n {
                let v = a[(r, col)].norm();
                if v > pmax {
                    pmax = v;
                    prow = r;
                }
            }
            if pmax == 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            if prow != col {
                for c in 0..n {
                    let tmp = a[(col, c)];
                    a[(col, c)] = a[(prow, c)];
                    a[(prow, c)] = tmp;
                }
                det = -det;
            }
            let piv = a[(col, col)];
            det *= piv;
            for r in (col + 1)..n {
                let factor = a[(r, col)] / piv;
                if factor.norm() == 0.0 {
                    continue;
                }
                for c in col..n {
                    let sub = factor * a[(col, c)];
                    a[(r, c)] -= sub;
                }
            }
        }
        det
    }

    /// Numerical rank via row echelon with partial pivoting. The tolerance
    /// scales with the largest entry so that exact-arithmetic zeros produced
    /// by cancellation are not counted as pivots.
    pub fn rank(&self) -> usize {
        let mut a = self.clone();
        let tol = a.max_abs() * (a.nrows.max(a.ncols) as f64) * f64::EPSILON;
        if tol == 0.0 {
            return 0;
        }
        let mut rank = 0;
        let mut row = 0;
        for col in 0..a.ncols {
            let (mut pmax, mut prow) = (0.0, row);
            for r in row..a.nrows {
                let v = a[(r, col)].norm();
                if v > pmax {
                    pmax = v;
                    prow = r;
                }
            }
            if pmax <= tol {
                continue;
            }
            if prow != row {
                for c in 0..a.ncols {
                    let tmp = a[(row, c)];
                    a[(row, c)] = a[(prow, c)];
                    a[(prow, c)] = tmp;
                }
            }
            let piv = a[(row, col)];
            for r in (row + 1)..a.nrows {
                let factor = a[(r, col)] / piv;
                if factor.norm() == 0.0 {
                    continue;
                }
                for c in col..a.ncols {
                    let sub = factor * a[(row, c)];
                    a[(r, c)] -= sub;
                }
            }
            rank += 1;
            row += 1;
            if row == a.nrows {
                break;
            }
        }
        rank
    }
}

impl core::ops::Index<(usize, usize)> for CMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.ncols + j]
    }
}

impl core::ops::IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.ncols + j]
    }
}

/// Solves A x = b in place by LU with partial pivoting. Returns `None` when a
/// pivot falls below `n * eps * max|A|` (singular to working precision).
pub fn solve_real(a: &mut [f64], b: &mut [f64], n: usize) -> Option<()> {
    assert_eq!(a.len(), n * n);
    assert_eq!(b.len(), n);
    let scale = a.iter().fold(0.0f64, |m, &v| m.max(v.abs()));
    let tol = scale * (n as f64) * f64::EPSILON;
    for col in 0..n {
        let (mut pmax, mut prow) = (0.0, col);
        for r in col..n {
            let v = a[r * n + col].abs();
            if v > pmax {
                pmax = v;
                prow = r;
            }
        }
        if pmax <= tol {
            return None;
        }
        if prow != col {
            for c in 0..n {
                a.swap(col * n + c, prow * n + c);
            }
            b.swap(col, prow);
        }
        let piv = a[col * n + col];
        for r in (col + 1)..n {
            let factor = a[r * n + col] / piv;
            if factor == 0.0 {
                continue;
            }
            for c in col..n {
                a[r * n + c] -= factor * a[col * n + c];
            }
            b[r] -= factor * b[col];
        }
    }
    for row in (0..n).rev() {
        let mut acc = b[row];
        for c in (row + 1)..n {
            acc -= a[row * n + c] * b[c];
        }
        b[row] = acc / a[row * n + row];
    }
    Some(())
}

/// Eigenvalues of a real symmetric matrix by cyclic Jacobi sweeps, ascending.
/// Only used for modest n (cross-checks); input is copied.
pub fn jacobi_eigenvalues(a: &[f64], n: usize) -> Vec<f64> {
    assert_eq!(a.len(), n * n);
    let mut m = a.to_vec();
    let off = |m: &[f64]| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                s += m[i * n + j] * m[i * n + j];
            }
        }
        s
    };
    let scale = m.iter().fold(0.0f64, |acc, &v| acc.max(v.abs())).max(1e-300);
    for _sweep in 0..100 {
        if off(&m).sqrt() <= 1e-15 * scale * (n as f64) {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[p * n + q];
                if apq.abs() <= 1e-300 {
                    continue;
                }
                let theta = (m[q * n + q] - m[p * n + p]) / (2.0 * apq);
                let t = if theta >= 0.0 {
                    1.0 / (theta + (1.0 + theta * theta).sqrt())
                } else {
                    1.0 / (theta - (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = m[k * n + p];
                    let akq = m[k * n + q];
                    m[k * n + p] = c * akp - s * akq;
                    m[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = m[p * n + k];
                    let aqk = m[q * n + k];
                    m[p * n + k] = c * apk - s * aqk;
                    m[q * n + k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut evs: Vec<f64> = (0..n).map(|i| m[i * n + i]).collect();
    evs.sort_by(|x, y| x.partial_cmp(y).unwrap());
    evs
}

/// Unweighted least squares of y = c0 + c1 x. Returns (c0, c1, max residual,
/// covariance of (c0, c1) scaled by the residual variance).
pub fn fit_line(x: &[f64], y: &[f64]) -> (f64, f64, f64, [[f64; 2]; 2]) {
    let n = x.len();
    assert!(n >= 3 && n == y.len());
    let nf = n as f64;
    let xbar = x.iter().sum::<f64>() / nf;
    // Center x first: the raw normal equations are badly conditioned when the
    // window is narrow relative to its offset.
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    let ybar = y.iter().sum::<f64>() / nf;
    for i in 0..n {
        let dx = x[i] - xbar;
        sxx += dx * dx;
        sxy += dx * (y[i] - ybar);
    }
    let c1 = sxy / sxx;
    let c0 = ybar - c1 * xbar;
    let mut max_resid = 0.0f64;
    let mut ssr = 0.0;
    for i in 0..n {
        let r = y[i] - (c0 + c1 * x[i]);
        max_resid = max_resid.max(r.abs());
        ssr += r * r;
    }
    let sigma2 = if n > 2 { ssr / ((n - 2) as f64) } else { 0.0 };
    // cov of (c0, c1) for the centered parametrization mapped back.
    let var_c1 = sigma2 / sxx;
    let var_c0 = sigma2 * (1.0 / nf + xbar * xbar / sxx);
    let cov01 = -sigma2 * xbar / sxx;
    (c0, c1, max_resid, [[var_c0, cov01], [cov01, var_c1]])
}
