//! Cost evaluation: dense tensor contraction and single-flip deltas.

use crate::error::{HoboError, Result};
use crate::polynomial::{Assignment, Polynomial};
use crate::tensor::HoboTensor;

fn check_len(expected: usize, x: &Assignment) -> Result<()> {
    if x.len() != expected {
        return Err(HoboError::LengthMismatch {
            expected,
            actual: x.len(),
        });
    }
    Ok(())
}

/// `sum T[a1..ak] x_a1 ... x_ak`, visiting only index tuples inside the
/// support of `x`; every other tuple has a zero factor.
pub fn contract(t: &HoboTensor, x: &Assignment) -> Result<f64> {
    check_len(t.n(), x)?;
    let support: Vec<usize> = (0..t.n()).filter(|&i| x.get(i) == 1).collect();
    if support.is_empty() {
        return Ok(0.0);
    }
    let n = t.n();
    let k = t.order();
    let entries = t.entries();
    // odometer over support^k
    let mut digits = vec![0usize; k];
    let mut acc = 0.0;
    loop {
        let flat = digits.iter().fold(0, |f, &d| f * n + support[d]);
        acc += entries[flat];
        let mut pos = k;
        loop {
            if pos == 0 {
                return Ok(acc);
            }
            pos -= 1;
            digits[pos] += 1;
            if digits[pos] < support.len() {
                break;
            }
            digits[pos] = 0;
        }
    }
}

/// Reference contraction over all `n^k` index tuples.
pub fn contract_full(t: &HoboTensor, x: &Assignment) -> Result<f64> {
    check_len(t.n(), x)?;
    let bits = x.bits();
    let n = t.n();
    let mut acc = 0.0;
    for (flat, &value) in t.entries().iter().enumerate() {
        let mut rest = flat;
        let mut product = 1.0;
        for _ in 0..t.order() {
            product *= f64::from(bits[rest % n]);
            rest /= n;
        }
        acc += value * product;
    }
    Ok(acc)
}

/// `evaluate(p, x with bit j flipped) - evaluate(p, x)` from the terms
/// containing `j` only.
pub fn delta_flip(p: &Polynomial, x: &Assignment, j: usize) -> Result<f64> {
    check_len(p.num_vars(), x)?;
    if j >= p.num_vars() {
        return Err(HoboError::IndexOutOfRange {
            index: j,
            num_vars: p.num_vars(),
        });
    }
    let bits = x.bits();
    let local: f64 = p
        .terms()
        .filter(|(m, _)| m.contains(j))
        .filter(|(m, _)| m.vars().iter().all(|&i| i == j || bits[i] == 1))
        .map(|(_, c)| c)
        .sum();
    Ok(flip_sign(bits[j]) * local)
}

#[inline]
fn flip_sign(bit: u8) -> f64 {
    if bit == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Per-variable lists of the terms that touch it.
#[derive(Debug, Clone)]
pub struct FlipIndex {
    num_vars: usize,
    terms: Vec<(Box<[usize]>, f64)>,
    by_var: Vec<Vec<u32>>,
}

impl FlipIndex {
    pub fn new(p: &Polynomial) -> Self {
        let mut by_var = vec![Vec::new(); p.num_vars()];
        let terms: Vec<(Box<[usize]>, f64)> = p
            .terms()
            .map(|(m, c)| (m.vars().to_vec().into_boxed_slice(), c))
            .collect();
        for (t, (vars, _)) in terms.iter().enumerate() {
            for &v in vars.iter() {
                by_var[v].push(t as u32);
            }
        }
        FlipIndex {
            num_vars: p.num_vars(),
            terms,
            by_var,
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    /// Terms containing variable `j`, in polynomial order.
    pub fn terms_of(&self, j: usize) -> impl Iterator<Item = (&[usize], f64)> + '_ {
        self.by_var[j].iter().map(|&t| {
            let (vars, coef) = &self.terms[t as usize];
            (&vars[..], *coef)
        })
    }

    pub fn delta(&self, x: &Assignment, j: usize) -> Result<f64> {
        check_len(self.num_vars, x)?;
        if j >= self.num_vars {
            return Err(HoboError::IndexOutOfRange {
                index: j,
                num_vars: self.num_vars,
            });
        }
        Ok(self.delta_bits(x.bits(), j))
    }

    /// Unchecked delta for the annealing and enumeration loops.
    #[inline]
    pub fn delta_bits(&self, bits: &[u8], j: usize) -> f64 {
        let mut local = 0.0;
        for &t in &self.by_var[j] {
            let (vars, coef) = &self.terms[t as usize];
            if vars.iter().all(|&i| i == j || bits[i] == 1) {
                local += coef;
            }
        }
        flip_sign(bits[j]) * local
    }
}

/// Convenience constructor mirroring [`FlipIndex::new`].
pub fn build_flip_index(p: &Polynomial) -> FlipIndex {
    FlipIndex::new(p)
}
