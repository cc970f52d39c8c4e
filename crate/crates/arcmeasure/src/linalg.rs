//! Dense complex least squares via Householder QR with column pivoting.
//!
//! The systems here are tiny (a handful of unknowns), so a direct
//! textbook factorization with full diagnostics beats pulling in a
//! linear-algebra dependency.

// indexed loops mirror the textbook factorization
#![allow(clippy::needless_range_loop)]

use num_complex::Complex64;

/// Column-major dense complex matrix.
#[derive(Clone, Debug)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Complex64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    #[inline]
    pub fn at(&self, r: usize, c: usize) -> Complex64 {
        self.data[c * self.rows + r]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Complex64) {
        self.data[c * self.rows + r] = v;
    }

    fn col_mut(&mut self, c: usize) -> &mut [Complex64] {
        &mut self.data[c * self.rows..(c + 1) * self.rows]
    }
}

/// Solution of a least-squares problem together with conditioning data.
#[derive(Clone, Debug)]
pub struct LsSolution {
    pub x: Vec<Complex64>,
    /// |r_00| / |r_nn| from the pivoted R factor; a cheap condition estimate.
    pub cond_estimate: f64,
    /// Euclidean norm of the residual A x - b.
    pub residual_norm: f64,
}

/// Minimize ||A x - b||_2 by Householder QR with column pivoting.
/// Requires rows >= cols. `col_order` optionally forces the pivot order
/// (used to cross-check solver independence); pass `None` for the
/// standard max-norm pivoting.
pub fn solve_least_squares(a: &Matrix, b: &[Complex64], col_order: Option<&[usize]>) -> LsSolution {
    let m = a.rows;
    let n = a.cols;
    assert!(m >= n, "least squares needs rows >= cols");
    assert_eq!(b.len(), m);

    let mut r = a.clone();
    let mut rhs = b.to_vec();
    let mut perm: Vec<usize> = (0..n).collect();

    let mut col_norms: Vec<f64> = (0..n)
        .map(|c| (0..m).map(|i| r.at(i, c).norm_sqr()).sum::<f64>())
        .collect();

    for k in 0..n {
        // pivot selection
        let pivot = match col_order {
            Some(order) => {
                let want = order[k];
                perm.iter().position(|&p| p == want).expect("bad col_order")
            }
            None => {
                let mut best = k;
                for c in k + 1..n {
                    if col_norms[c] > col_norms[best] {
                        best = c;
                    }
                }
                best
            }
        };
        if pivot != k {
            debug_assert!(pivot >= k, "forced pivot already consumed");
            perm.swap(k, pivot);
            col_norms.swap(k, pivot);
            for i in 0..m {
                let t = r.at(i, k);
                r.set(i, k, r.at(i, pivot));
                r.set(i, pivot, t);
            }
        }

        // Householder vector for column k, rows k..m
        let alpha: f64 = (k..m).map(|i| r.at(i, k).norm_sqr()).sum::<f64>().sqrt();
        if alpha < 1e-300 {
            continue;
        }
        let x0 = r.at(k, k);
        let phase = if x0.norm() > 0.0 {
            x0 / x0.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        let v0 = x0 + phase * alpha;
        let mut v: Vec<Complex64> = (k..m).map(|i| r.at(i, k)).collect();
        v[0] = v0;
        let vnorm_sq: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if vnorm_sq < 1e-300 {
            continue;
        }

        // apply H = I - 2 v v* / (v* v) to remaining columns and rhs
        for c in k..n {
            let col = r.col_mut(c);
            let dot: Complex64 = v
                .iter()
                .zip(col[k..].iter())
                .map(|(vi, xi)| vi.conj() * xi)
                .sum();
            let scale = dot * (2.0 / vnorm_sq);
            for (vi, xi) in v.iter().zip(col[k..].iter_mut()) {
                *xi -= scale * vi;
            }
        }
        let dot: Complex64 = v
            .iter()
            .zip(rhs[k..].iter())
            .map(|(vi, xi)| vi.conj() * xi)
            .sum();
        let scale = dot * (2.0 / vnorm_sq);
        for (vi, xi) in v.iter().zip(rhs[k..].iter_mut()) {
            *xi -= scale * vi;
        }

        for c in k + 1..n {
            col_norms[c] = (k + 1..m).map(|i| r.at(i, c).norm_sqr()).sum();
        }
    }

    // back substitution on the n x n upper triangle
    let mut y = vec![Complex64::new(0.0, 0.0); n];
    for k in (0..n).rev() {
        let mut acc = rhs[k];
        for c in k + 1..n {
            acc -= r.at(k, c) * y[c];
        }
        let d = r.at(k, k);
        y[k] = if d.norm() > 1e-300 {
            acc / d
        } else {
            Complex64::new(0.0, 0.0)
        };
    }
    let mut x = vec![Complex64::new(0.0, 0.0); n];
    for k in 0..n {
        x[perm[k]] = y[k];
    }

    let diag: Vec<f64> = (0..n).map(|k| r.at(k, k).norm()).collect();
    let dmax = diag.iter().cloned().fold(0.0_f64, f64::max);
    let dmin = diag.iter().cloned().fold(f64::MAX, f64::min);
    let cond_estimate = if dmin > 0.0 {
        dmax / dmin
    } else {
        f64::INFINITY
    };

    let residual_norm = (n..m).map(|i| rhs[i].norm_sqr()).sum::<f64>().sqrt();

    LsSolution {
        x,
        cond_estimate,
        residual_norm,
    }
}
