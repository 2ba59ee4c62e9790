//! Small dense matrices and a one-sided Jacobi SVD.

use serde::{Deserialize, Serialize};

use crate::error::{HoboError, Result};

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn from_row_major(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(HoboError::InvalidArgument(format!(
                "{rows}x{cols} matrix needs {} values, got {}",
                rows * cols,
                data.len()
            )));
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(HoboError::InvalidArgument("ragged rows".into()));
        }
        Self::from_row_major(rows.len(), cols, rows.concat())
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn into_data(self) -> Vec<f64> {
        self.data
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: f64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[f64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<f64> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Frobenius norm of `self - other`.
    pub fn distance(&self, other: &Matrix) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }

    /// Largest deviation of `self^T self` from the identity.
    pub fn orthonormality_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for a in 0..self.cols {
            for b in a..self.cols {
                let dot: f64 = (0..self.rows).map(|r| self.get(r, a) * self.get(r, b)).sum();
                let target = if a == b { 1.0 } else { 0.0 };
                worst = worst.max((dot - target).abs());
            }
        }
        worst
    }
}

/// Thin SVD `m = U diag(sigma) V^T` with `min(rows, cols)` triples.
#[derive(Debug, Clone, PartialEq)]
pub struct Svd {
    pub sigma: Vec<f64>,
    /// `rows x r`
    pub u: Matrix,
    /// `cols x r`
    pub v: Matrix,
}

const MAX_SWEEPS: usize = 100;

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// One-sided (Hestenes) Jacobi SVD.
///
/// Rotates column pairs of the working copy until all are mutually
/// orthogonal to machine precision; the column norms are the singular
/// values and the accumulated rotations form `V`. Wide inputs are handled
/// through the transpose.
pub fn svd(m: &Matrix) -> Result<Svd> {
    if m.data.iter().any(|v| !v.is_finite()) {
        return Err(HoboError::NonFinite);
    }
    if m.rows < m.cols {
        let Svd { sigma, u, v } = svd(&m.transpose())?;
        return Ok(Svd { sigma, u: v, v: u });
    }
    let (rows, cols) = (m.rows, m.cols);
    // column-major working copies
    let mut w: Vec<Vec<f64>> = (0..cols).map(|c| m.column(c)).collect();
    let mut vt: Vec<Vec<f64>> = (0..cols)
        .map(|c| (0..cols).map(|r| if r == c { 1.0 } else { 0.0 }).collect())
        .collect();

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..cols {
            for q in p + 1..cols {
                let alpha = dot(&w[p], &w[p]);
                let beta = dot(&w[q], &w[q]);
                let gamma = dot(&w[p], &w[q]);
                if gamma == 0.0 || gamma.abs() <= f64::EPSILON * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate(&mut w, p, q, c, s);
                rotate(&mut vt, p, q, c, s);
            }
        }
        if !rotated {
            break;
        }
    }

    let norms: Vec<f64> = w.iter().map(|col| dot(col, col).sqrt()).collect();
    let mut order: Vec<usize> = (0..cols).collect();
    order.sort_by(|&a, &b| norms[b].total_cmp(&norms[a]));

    let sigma: Vec<f64> = order.iter().map(|&j| norms[j]).collect();
    let cutoff = sigma.first().copied().unwrap_or(0.0) * rows.max(1) as f64 * f64::EPSILON;
    let mut u_cols: Vec<Vec<f64>> = Vec::with_capacity(cols);
    let mut missing = Vec::new();
    for (slot, &j) in order.iter().enumerate() {
        if norms[j] > cutoff && norms[j] > 0.0 {
            u_cols.push(w[j].iter().map(|x| x / norms[j]).collect());
        } else {
            u_cols.push(vec![0.0; rows]);
            missing.push(slot);
        }
    }
    complete_orthonormal(&mut u_cols, &missing, rows);

    let mut u = Matrix::zeros(rows, cols);
    let mut v = Matrix::zeros(cols, cols);
    for (slot, &j) in order.iter().enumerate() {
        for (r, &x) in u_cols[slot].iter().enumerate() {
            u.set(r, slot, x);
        }
        for (r, &x) in vt[j].iter().enumerate() {
            v.set(r, slot, x);
        }
    }
    Ok(Svd { sigma, u, v })
}

fn rotate(cols: &mut [Vec<f64>], p: usize, q: usize, c: f64, s: f64) {
    let (head, tail) = cols.split_at_mut(q);
    let (a, b) = (&mut head[p], &mut tail[0]);
    for (x, y) in a.iter_mut().zip(b.iter_mut()) {
        let (xp, yq) = (*x, *y);
        *x = c * xp - s * yq;
        *y = s * xp + c * yq;
    }
}

/// Fills the `missing` columns with unit vectors orthogonal to all others,
/// drawn from the standard basis by twice-applied Gram-Schmidt.
fn complete_orthonormal(cols: &mut [Vec<f64>], missing: &[usize], rows: usize) {
    for &slot in missing {
        let mut best: Option<(f64, Vec<f64>)> = None;
        for e in 0..rows {
            let mut cand = vec![0.0; rows];
            cand[e] = 1.0;
            for _ in 0..2 {
                for (k, col) in cols.iter().enumerate() {
                    // unfilled slots are still zero and project to nothing
                    if k == slot {
                        continue;
                    }
                    let proj = dot(&cand, col);
                    cand.iter_mut().zip(col).for_each(|(c, x)| *c -= proj * x);
                }
            }
            let norm = dot(&cand, &cand).sqrt();
            if best.as_ref().is_none_or(|(b, _)| norm > *b) {
                best = Some((norm, cand));
            }
            if norm > 0.7 {
                break;
            }
        }
        let (norm, cand) = best.expect("rows >= cols > 0");
        cols[slot] = cand.into_iter().map(|x| x / norm).collect();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reconstruct(s: &Svd) -> Matrix {
        let mut m = Matrix::zeros(s.u.rows(), s.v.rows());
        for r in 0..m.rows() {
            for c in 0..m.cols() {
                let v = (0..s.sigma.len()).map(|k| s.u.get(r, k) * s.sigma[k] * s.v.get(c, k)).sum();
                m.set(r, c, v);
            }
        }
        m
    }

    #[test]
    fn identity() {
        let s = svd(&Matrix::identity(2)).unwrap();
        assert_eq!(s.sigma, vec![1.0, 1.0]);
    }

    #[test]
    fn rank_one_outer_product() {
        // |u| = 2, |v| = 3
        let u = [2.0, 0.0];
        let v = [1.0, 2.0, 2.0];
        let rows: Vec<Vec<f64>> = u.iter().map(|a| v.iter().map(|b| a * b).collect()).collect();
        let m = Matrix::from_rows(&rows).unwrap();
        let s = svd(&m).unwrap();
        assert!((s.sigma[0] - 6.0).abs() < 1e-12);
        assert!(s.sigma[1].abs() < 1e-12);
        assert!(s.u.orthonormality_defect() < 1e-12);
        assert!(s.v.orthonormality_defect() < 1e-12);
        assert!(reconstruct(&s).distance(&m) < 1e-12);
    }

    #[test]
    fn zero_and_tall_matrices() {
        let z = svd(&Matrix::zeros(3, 2)).unwrap();
        assert_eq!(z.sigma, vec![0.0, 0.0]);
        assert!(z.u.orthonormality_defect() < 1e-12);

        let m = Matrix::from_rows(&[vec![1.0, 2.0], vec![3.0, 4.0], vec![5.0, 6.0]]).unwrap();
        let s = svd(&m).unwrap();
        assert!(reconstruct(&s).distance(&m) < 1e-12);
        assert!(s.sigma[0] >= s.sigma[1]);
    }

    #[test]
    fn non_finite_rejected() {
        let m = Matrix::from_rows(&[vec![1.0, f64::NAN]]).unwrap();
        assert!(matches!(svd(&m), Err(HoboError::NonFinite)));
    }
}
