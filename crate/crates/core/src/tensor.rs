//! Dense coefficient tensors and the QUBO matrix.
//!
//! A degree-`m` term over `i1 < i2 < ... < im` is stored in an order-`k`
//! tensor at `(i1, ..., i1, i2, ..., im)`, the smallest index repeated
//! `k - m + 1` times. Since `x_i^p = x_i` on binary inputs, the contraction
//! `sum T[a1..ak] x_a1 ... x_ak` reproduces the polynomial minus its offset.

use serde::{Deserialize, Serialize};

use crate::error::{HoboError, Result};
use crate::polynomial::{Assignment, Polynomial};

/// Hard cap on dense entries.
pub const MAX_DENSE_ENTRIES: usize = 100_000_000;

fn dense_len(n: usize, order: usize) -> Result<usize> {
    u32::try_from(order)
        .ok()
        .and_then(|k| n.checked_pow(k))
        .filter(|&len| len <= MAX_DENSE_ENTRIES)
        .ok_or(HoboError::TooLarge {
            n,
            order,
            limit: MAX_DENSE_ENTRIES,
        })
}

/// Dense order-`k` tensor of shape `n^k`, row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "TensorJson", into = "TensorJson")]
pub struct HoboTensor {
    n: usize,
    order: usize,
    entries: Vec<f64>,
}

impl HoboTensor {
    pub fn zeros(n: usize, order: usize) -> Result<Self> {
        if order == 0 {
            return Err(HoboError::InvalidArgument("tensor order must be >= 1".into()));
        }
        let len = dense_len(n, order)?;
        Ok(HoboTensor {
            n,
            order,
            entries: vec![0.0; len],
        })
    }

    pub fn from_entries(n: usize, order: usize, entries: Vec<f64>) -> Result<Self> {
        let expected = Self::zeros(n, order)?.entries.len();
        if entries.len() != expected {
            return Err(HoboError::InvalidArgument(format!(
                "{n}^{order} tensor needs {expected} entries, got {}",
                entries.len()
            )));
        }
        Ok(HoboTensor { n, order, entries })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn shape(&self) -> Vec<usize> {
        vec![self.n; self.order]
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn flat_index(&self, index: &[usize]) -> usize {
        debug_assert_eq!(index.len(), self.order);
        index.iter().fold(0, |acc, &i| {
            debug_assert!(i < self.n);
            acc * self.n + i
        })
    }

    pub fn multi_index(&self, mut flat: usize) -> Vec<usize> {
        let mut idx = vec![0; self.order];
        for slot in idx.iter_mut().rev() {
            *slot = flat % self.n;
            flat /= self.n;
        }
        idx
    }

    pub fn get(&self, index: &[usize]) -> f64 {
        self.entries[self.flat_index(index)]
    }

    pub fn set(&mut self, index: &[usize], value: f64) {
        let flat = self.flat_index(index);
        self.entries[flat] = value;
    }

    /// Nonzero entries as `(multi-index, value)`.
    pub fn nonzeros(&self) -> impl Iterator<Item = (Vec<usize>, f64)> + '_ {
        self.entries
            .iter()
            .enumerate()
            .filter(|(_, &v)| v != 0.0)
            .map(|(flat, &v)| (self.multi_index(flat), v))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Whether every nonzero entry has non-decreasing indices.
    pub fn has_canonical_support(&self) -> bool {
        self.nonzeros()
            .all(|(idx, _)| idx.windows(2).all(|w| w[0] <= w[1]))
    }

    /// Contraction with one copy of `x` per arm; see [`crate::evaluator::contract`].
    pub fn contract(&self, x: &Assignment) -> Result<f64> {
        crate::evaluator::contract(self, x)
    }

    pub fn from_json(source: &str) -> Result<Self> {
        Ok(serde_json::from_str(source)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("tensor serializes")
    }
}

/// Serialized form `{"n", "order", "entries": [row-major]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TensorJson {
    pub n: usize,
    pub order: usize,
    pub entries: Vec<f64>,
}

impl From<HoboTensor> for TensorJson {
    fn from(t: HoboTensor) -> Self {
        TensorJson {
            n: t.n,
            order: t.order,
            entries: t.entries,
        }
    }
}

impl TryFrom<TensorJson> for HoboTensor {
    type Error = HoboError;

    fn try_from(raw: TensorJson) -> Result<Self> {
        HoboTensor::from_entries(raw.n, raw.order, raw.entries)
    }
}

/// Builds the coefficient tensor of `p`; `order = None` picks `max(degree, 1)`.
///
/// The offset is not representable and is dropped.
pub fn build_hobo_tensor(p: &Polynomial, order: Option<usize>) -> Result<HoboTensor> {
    let degree = p.degree();
    let order = order.unwrap_or(degree.max(1));
    if order < degree {
        return Err(HoboError::OrderBelowDegree { order, degree });
    }
    let mut t = HoboTensor::zeros(p.num_vars(), order)?;
    let mut index = Vec::with_capacity(order);
    for (mono, coef) in p.terms() {
        let vars = mono.vars();
        index.clear();
        index.extend(std::iter::repeat_n(vars[0], order - vars.len() + 1));
        index.extend_from_slice(&vars[1..]);
        t.set(&index, coef);
    }
    Ok(t)
}

/// Reads any tensor back as a polynomial by collapsing each entry's index
/// multiset to its support and summing entries with equal support.
pub fn tensor_to_polynomial(t: &HoboTensor) -> Polynomial {
    Polynomial::from_terms(Some(t.n), t.nonzeros(), 0.0)
        .expect("tensor indices are below n by construction")
}

/// Upper-triangular `n x n` QUBO matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct QuboMatrix {
    n: usize,
    entries: Vec<f64>,
}

impl QuboMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.entries.chunks(self.n.max(1)).map(<[f64]>::to_vec).collect()
    }

    /// `x^T Q x`.
    pub fn quadratic_form(&self, x: &Assignment) -> Result<f64> {
        if x.len() != self.n {
            return Err(HoboError::LengthMismatch {
                expected: self.n,
                actual: x.len(),
            });
        }
        let bits = x.bits();
        let mut acc = 0.0;
        for i in (0..self.n).filter(|&i| bits[i] == 1) {
            for j in (0..self.n).filter(|&j| bits[j] == 1) {
                acc += self.get(i, j);
            }
        }
        Ok(acc)
    }
}

/// Diagonal holds linear coefficients, `(i, j)` with `i < j` the pair terms.
pub fn build_qubo_matrix(p: &Polynomial) -> Result<QuboMatrix> {
    let degree = p.degree();
    if degree > 2 {
        return Err(HoboError::NotQuadratic(degree));
    }
    let n = p.num_vars();
    let mut entries = vec![0.0; n * n];
    for (mono, coef) in p.terms() {
        let (i, j) = match *mono.vars() {
            [i] => (i, i),
            [i, j] => (i, j),
            _ => unreachable!("degree checked above"),
        };
        entries[i * n + j] = coef;
    }
    Ok(QuboMatrix { n, entries })
}
