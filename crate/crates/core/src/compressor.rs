//! Low-rank compression of coefficient tensors.
//!
//! An order-`k` tensor is unfolded along its first index into an
//! `n x n^(k-1)` matrix (row `i1`, column `sum_{m>=2} i_m n^(k-m)`), which for
//! row-major storage is a plain reshape. That matrix is factored by SVD and
//! truncated to a chosen rank; by Eckart-Young the Frobenius error of the
//! rank-`r` truncation is `sqrt(sum_{s>r} sigma_s^2)`.
//!
//! Costs are evaluated directly on the factors:
//! `sum_s sigma_s (u_s . x) (v_s . x^{(k-1)})`, where the second factor only
//! visits columns whose trailing indices all lie in the support of `x`.

use serde::{Deserialize, Serialize};

use crate::error::{HoboError, Result};
use crate::linalg::{svd, Matrix};
use crate::polynomial::Assignment;
use crate::tensor::HoboTensor;

pub fn unfold_mode1(t: &HoboTensor) -> Result<Matrix> {
    if t.order() < 2 {
        return Err(HoboError::InvalidArgument(format!(
            "unfolding needs order >= 2, got {}",
            t.order()
        )));
    }
    let cols = t.entries().len().checked_div(t.n()).unwrap_or(0);
    Matrix::from_row_major(t.n(), cols, t.entries().to_vec())
}

/// Inverse of [`unfold_mode1`].
pub fn refold_mode1(m: &Matrix, order: usize) -> Result<HoboTensor> {
    HoboTensor::from_entries(m.rows(), order, m.data().to_vec())
}

/// Singular triples of an unfolded tensor.
#[derive(Debug, Clone, PartialEq)]
pub struct SvdFactors {
    pub rows: usize,
    pub cols: usize,
    /// Non-increasing, non-negative.
    pub singular_values: Vec<f64>,
    /// `rows x r`, orthonormal columns.
    pub left_vectors: Matrix,
    /// `cols x r`, orthonormal columns.
    pub right_vectors: Matrix,
    pub source_shape: Vec<usize>,
}

impl SvdFactors {
    /// Factors a plain matrix; `source_shape` is just `[rows, cols]`.
    pub fn of_matrix(m: &Matrix) -> Result<Self> {
        let s = svd(m)?;
        Ok(SvdFactors {
            rows: m.rows(),
            cols: m.cols(),
            singular_values: s.sigma,
            left_vectors: s.u,
            right_vectors: s.v,
            source_shape: vec![m.rows(), m.cols()],
        })
    }

    pub fn of_tensor(t: &HoboTensor) -> Result<Self> {
        let mut f = Self::of_matrix(&unfold_mode1(t)?)?;
        f.source_shape = t.shape();
        Ok(f)
    }

    pub fn rank(&self) -> usize {
        self.singular_values.len()
    }

    /// `U diag(sigma) V^T`.
    pub fn reconstruct(&self) -> Matrix {
        let mut m = Matrix::zeros(self.rows, self.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                let v = self
                    .singular_values
                    .iter()
                    .enumerate()
                    .map(|(s, sigma)| self.left_vectors.get(r, s) * sigma * self.right_vectors.get(c, s))
                    .sum();
                m.set(r, c, v);
            }
        }
        m
    }

    /// Predicted Frobenius error of truncating to `rank`.
    pub fn tail_norm(&self, rank: usize) -> f64 {
        self.singular_values
            .iter()
            .skip(rank)
            .map(|s| s * s)
            .sum::<f64>()
            .sqrt()
    }

    /// Number of singular values above `tau * sigma_1`, at least 1.
    pub fn rank_for_threshold(&self, tau: f64) -> usize {
        let top = self.singular_values.first().copied().unwrap_or(0.0);
        self.singular_values
            .iter()
            .filter(|&&s| s > tau * top)
            .count()
            .clamp(1.min(self.rank()), self.rank())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&FactorsJson::from(self)).expect("factors serialize")
    }

    pub fn from_json(source: &str) -> Result<Self> {
        let raw: FactorsJson = serde_json::from_str(source)?;
        raw.try_into()
    }
}

/// Keeps the `rank` leading singular triples.
pub fn truncate(f: &SvdFactors, rank: usize) -> Result<SvdFactors> {
    if rank == 0 || rank > f.rank() {
        return Err(HoboError::InvalidArgument(format!(
            "rank must be in 1..={}, got {rank}",
            f.rank()
        )));
    }
    let keep = |m: &Matrix| {
        let data = (0..m.rows()).flat_map(|r| m.row(r)[..rank].to_vec()).collect();
        Matrix::from_row_major(m.rows(), rank, data).expect("shape is consistent")
    };
    Ok(SvdFactors {
        rows: f.rows,
        cols: f.cols,
        singular_values: f.singular_values[..rank].to_vec(),
        left_vectors: keep(&f.left_vectors),
        right_vectors: keep(&f.right_vectors),
        source_shape: f.source_shape.clone(),
    })
}

/// Contraction of the (possibly truncated) factored tensor with `x` on
/// every arm, without rebuilding the dense tensor.
pub fn compressed_cost(f: &SvdFactors, x: &Assignment) -> Result<f64> {
    let n = f.source_shape.first().copied().unwrap_or(0);
    let order = f.source_shape.len();
    if x.len() != n || f.rows != n || order < 2 {
        return Err(HoboError::LengthMismatch {
            expected: n,
            actual: x.len(),
        });
    }
    let support: Vec<usize> = (0..n).filter(|&i| x.get(i) == 1).collect();
    if support.is_empty() {
        return Ok(0.0);
    }

    // unfolded columns whose trailing indices all lie in the support
    let mut columns = vec![0usize];
    for _ in 1..order {
        columns = columns
            .iter()
            .flat_map(|&c| support.iter().map(move |&i| c * n + i))
            .collect();
    }

    let mut cost = 0.0;
    for (s, sigma) in f.singular_values.iter().enumerate() {
        let left: f64 = support.iter().map(|&i| f.left_vectors.get(i, s)).sum();
        let right: f64 = columns.iter().map(|&c| f.right_vectors.get(c, s)).sum();
        cost += sigma * left * right;
    }
    Ok(cost)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompressionReport {
    pub rank: usize,
    pub stored_values_dense: usize,
    pub stored_values_factored: usize,
    pub frobenius_error: f64,
    pub relative_error: f64,
}

/// Storage and measured reconstruction error for a rank-`rank` truncation.
pub fn compression_report(t: &HoboTensor, rank: usize) -> Result<CompressionReport> {
    let unfolded = unfold_mode1(t)?;
    let f = SvdFactors::of_tensor(t)?;
    let tf = truncate(&f, rank)?;
    let error = tf.reconstruct().distance(&unfolded);
    let norm = unfolded.frobenius_norm();
    Ok(CompressionReport {
        rank,
        stored_values_dense: t.entries().len(),
        stored_values_factored: rank * (f.rows + f.cols + 1),
        frobenius_error: error,
        relative_error: if norm > 0.0 { error / norm } else { 0.0 },
    })
}

/// Serialized form `{"sigma", "u", "v", "source_shape"}`; `u` and `v` are
/// row lists of the `rows x r` and `cols x r` factors.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FactorsJson {
    pub sigma: Vec<f64>,
    pub u: Vec<Vec<f64>>,
    pub v: Vec<Vec<f64>>,
    pub source_shape: Vec<usize>,
}

impl From<&SvdFactors> for FactorsJson {
    fn from(f: &SvdFactors) -> Self {
        FactorsJson {
            sigma: f.singular_values.clone(),
            u: f.left_vectors.to_rows(),
            v: f.right_vectors.to_rows(),
            source_shape: f.source_shape.clone(),
        }
    }
}

impl TryFrom<FactorsJson> for SvdFactors {
    type Error = HoboError;

    fn try_from(raw: FactorsJson) -> Result<Self> {
        let u = Matrix::from_rows(&raw.u)?;
        let v = Matrix::from_rows(&raw.v)?;
        let r = raw.sigma.len();
        if (u.cols() != r && u.rows() > 0) || (v.cols() != r && v.rows() > 0) {
            return Err(HoboError::InvalidArgument(format!(
                "factor widths {} and {} do not match {r} singular values",
                u.cols(),
                v.cols()
            )));
        }
        Ok(SvdFactors {
            rows: u.rows(),
            cols: v.rows(),
            singular_values: raw.sigma,
            left_vectors: u,
            right_vectors: v,
            source_shape: raw.source_shape,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polynomial::Polynomial;
    use crate::tensor::build_hobo_tensor;

    fn small_tensor() -> HoboTensor {
        let p = Polynomial::parse_text("-10 x0\n+7 x1\n+1 x0 x1\n-4 x0 x2\n+8 x1 x2\n-1 x0 x1 x2").unwrap();
        build_hobo_tensor(&p, Some(3)).unwrap()
    }

    #[test]
    fn unfolding_layout() {
        let t = small_tensor();
        let m = unfold_mode1(&t).unwrap();
        assert_eq!((m.rows(), m.cols()), (3, 9));
        assert_eq!(m.get(0, 2), -4.0);
        assert_eq!(m.get(1, 5), 8.0);
        assert_eq!(refold_mode1(&m, 3).unwrap(), t);

        let t2 = HoboTensor::from_entries(2, 2, vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_eq!(unfold_mode1(&t2).unwrap().to_rows(), vec![vec![1.0, 2.0], vec![3.0, 4.0]]);

        let t1 = HoboTensor::from_entries(2, 1, vec![1.0, 2.0]).unwrap();
        assert!(unfold_mode1(&t1).is_err());
    }

    #[test]
    fn truncation_range() {
        let f = SvdFactors::of_tensor(&small_tensor()).unwrap();
        assert!(truncate(&f, 0).is_err());
        assert!(truncate(&f, 4).is_err());
        assert_eq!(truncate(&f, 2).unwrap().rank(), 2);
    }

    #[test]
    fn zero_input_costs_nothing() {
        let f = SvdFactors::of_tensor(&small_tensor()).unwrap();
        assert_eq!(compressed_cost(&f, &Assignment::zeros(3)).unwrap(), 0.0);
        assert!(compressed_cost(&f, &Assignment::zeros(4)).is_err());
    }

    #[test]
    fn threshold_rank() {
        let f = SvdFactors::of_tensor(&small_tensor()).unwrap();
        assert_eq!(f.rank_for_threshold(1e-12), 2);
        assert_eq!(f.rank_for_threshold(0.95), 1);
        assert_eq!(f.rank_for_threshold(2.0), 1);
    }

    #[test]
    fn report_storage_counts() {
        let t = small_tensor();
        let r = compression_report(&t, 3).unwrap();
        assert_eq!((r.stored_values_dense, r.stored_values_factored), (27, 39));
        assert!(r.relative_error < 1e-10);
        assert_eq!(compression_report(&t, 1).unwrap().stored_values_factored, 13);

        let z = compression_report(&HoboTensor::zeros(3, 3).unwrap(), 2).unwrap();
        assert_eq!((z.frobenius_error, z.relative_error), (0.0, 0.0));
    }

    #[test]
    fn factor_json() {
        let f = SvdFactors::of_tensor(&small_tensor()).unwrap();
        let json = f.to_json();
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["source_shape"], serde_json::json!([3, 3, 3]));
        assert_eq!(v["u"].as_array().unwrap().len(), 3);
        assert_eq!(v["v"].as_array().unwrap().len(), 9);
        assert_eq!(SvdFactors::from_json(&json).unwrap(), f);
    }
}
