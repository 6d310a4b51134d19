//! Cyclic Jacobi eigensolver for dense real symmetric matrices.

use crate::error::{Error, Result};

/// Dense symmetric matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SymMatrix {
    pub fn zeros(n: usize) -> Self {
        SymMatrix { n, data: vec![0.0; n * n] }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
    }

    /// Largest entrywise asymmetry |a_ij - a_ji|.
    pub fn symmetry_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                worst = worst.max((self.get(i, j) - self.get(j, i)).abs());
            }
        }
        worst
    }

    fn frobenius_sq(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum()
    }

    fn off_diagonal_sq(&self) -> f64 {
        let mut s = 0.0;
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                let x = self.get(i, j);
                s += 2.0 * x * x;
            }
        }
        s
    }
}

/// Eigenvalues in ascending order with eigenvectors as rows of `vectors`.
#[derive(Debug, Clone)]
pub struct Eigen {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<f64>>,
}

const MAX_SWEEPS: usize = 60;

/// Diagonalizes `a` by cyclic Jacobi rotations.
///
/// The input must be symmetric; only convergence failure is reported as an
/// error.
pub fn jacobi_eigen(mut a: SymMatrix) -> Result<Eigen> {
    let n = a.n;
    // rows of vt are the (accumulated) eigenvectors
    let mut vt = vec![0.0; n * n];
    for i in 0..n {
        vt[i * n + i] = 1.0;
    }
    let scale = a.frobenius_sq().max(f64::MIN_POSITIVE);
    let tol = 1e-30 * scale;

    let mut converged = n <= 1;
    for sweep in 0..MAX_SWEEPS {
        let off = a.off_diagonal_sq();
        if off <= tol {
            converged = true;
            break;
        }
        // skip tiny entries during the first sweeps
        let skip_below = if sweep < 3 { 0.2 * (off / (n * n) as f64).sqrt() } else { 0.0 };
        for p in 0..n - 1 {
            for q in (p + 1)..n {
                let apq = a.get(p, q);
                if apq.abs() <= skip_below {
                    continue;
                }
                let app = a.get(p, p);
                let aqq = a.get(q, q);
                if sweep > 3 && apq.abs() * 1e18 < app.abs().min(aqq.abs()).max(f64::MIN_POSITIVE)
                {
                    a.set(p, q, 0.0);
                    a.set(q, p, 0.0);
                    continue;
                }
                if apq == 0.0 {
                    continue;
                }
                rotate(&mut a, &mut vt, p, q);
            }
        }
    }
    if !converged && a.off_diagonal_sq() > tol * 1e6 {
        return Err(Error::Internal(format!(
            "Jacobi iteration did not converge in {MAX_SWEEPS} sweeps (n = {n})"
        )));
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a.get(i, i).total_cmp(&a.get(j, j)));
    let values = order.iter().map(|&i| a.get(i, i)).collect();
    let vectors = order.iter().map(|&i| vt[i * n..(i + 1) * n].to_vec()).collect();
    Ok(Eigen { values, vectors })
}

fn rotate(a: &mut SymMatrix, vt: &mut [f64], p: usize, q: usize) {
    let n = a.n;
    let apq = a.get(p, q);
    let app = a.get(p, p);
    let aqq = a.get(q, q);
    let theta = (aqq - app) / (2.0 * apq);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let t = if theta == 0.0 { 1.0 } else { t };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    {
        let (head, tail) = a.data.split_at_mut(q * n);
        let row_p = &mut head[p * n..(p + 1) * n];
        let row_q = &mut tail[..n];
        for k in 0..n {
            let xp = row_p[k];
            let xq = row_q[k];
            row_p[k] = c * xp - s * xq;
            row_q[k] = s * xp + c * xq;
        }
    }
    for k in 0..n {
        if k != p && k != q {
            a.data[k * n + p] = a.data[p * n + k];
            a.data[k * n + q] = a.data[q * n + k];
        }
    }
    a.set(p, p, app - t * apq);
    a.set(q, q, aqq + t * apq);
    a.set(p, q, 0.0);
    a.set(q, p, 0.0);

    let (head, tail) = vt.split_at_mut(q * n);
    let vp = &mut head[p * n..(p + 1) * n];
    let vq = &mut tail[..n];
    for k in 0..n {
        let xp = vp[k];
        let xq = vq[k];
        vp[k] = c * xp - s * xq;
        vq[k] = s * xp + c * xq;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn from_rows(rows: &[&[f64]]) -> SymMatrix {
        let n = rows.len();
        let mut m = SymMatrix::zeros(n);
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    #[test]
    fn two_by_two() {
        let e = jacobi_eigen(from_rows(&[&[2.0, 1.0], &[1.0, 2.0]])).unwrap();
        assert!((e.values[0] - 1.0).abs() < 1e-14);
        assert!((e.values[1] - 3.0).abs() < 1e-14);
        let v = &e.vectors[1];
        assert!((v[0].abs() - v[1].abs()).abs() < 1e-14);
    }

    #[test]
    fn reconstructs_random_matrix() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let n = 30;
        let mut m = SymMatrix::zeros(n);
        for i in 0..n {
            for j in i..n {
                let x: f64 = rng.gen_range(-1.0..1.0);
                m.set(i, j, x);
                m.set(j, i, x);
            }
        }
        let e = jacobi_eigen(m.clone()).unwrap();
        // A v = lambda v for every pair, and eigenvectors orthonormal
        for (lam, v) in e.values.iter().zip(&e.vectors) {
            for i in 0..n {
                let av: f64 = (0..n).map(|j| m.get(i, j) * v[j]).sum();
                assert!((av - lam * v[i]).abs() < 1e-11);
            }
        }
        for a in 0..n {
            for b in 0..n {
                let d: f64 = (0..n).map(|k| e.vectors[a][k] * e.vectors[b][k]).sum();
                let want = if a == b { 1.0 } else { 0.0 };
                assert!((d - want).abs() < 1e-12);
            }
        }
        assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn diagonal_input_is_returned_sorted() {
        let e = jacobi_eigen(from_rows(&[&[3.0, 0.0, 0.0], &[0.0, -1.0, 0.0], &[0.0, 0.0, 2.0]]))
            .unwrap();
        assert_eq!(e.values, vec![-1.0, 2.0, 3.0]);
    }
}
