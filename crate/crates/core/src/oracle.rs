//! Exhaustive minimization for small instances.
//!
//! Assignments are ordered lexicographically with `x_0` as the most
//! significant bit, so `(0,1,1)` precedes `(1,0,0)`.

use crate::error::{HoboError, Result};
use crate::evaluator::FlipIndex;
use crate::polynomial::{Assignment, Polynomial};

pub const MAX_ENUMERATE_VARS: usize = 24;
pub const MAX_LANDSCAPE_VARS: usize = 16;

const RESYNC_INTERVAL: u64 = 1 << 10;

/// Walks all `2^n` assignments in reflected Gray-code order, one bit flip
/// per step, updating the cost with flip deltas.
///
/// Yields `(lex_index, cost)`; the cost is recomputed from scratch every
/// 1024 steps.
pub struct GrayWalk<'a> {
    p: &'a Polynomial,
    index: FlipIndex,
    bits: Vec<u8>,
    code: u64,
    step: u64,
    total: u64,
    cost: f64,
}

impl<'a> GrayWalk<'a> {
    pub fn new(p: &'a Polynomial) -> Result<Self> {
        let n = p.num_vars();
        if n > MAX_ENUMERATE_VARS {
            return Err(HoboError::TooManyVariables(n, MAX_ENUMERATE_VARS));
        }
        let bits = vec![0; n];
        Ok(GrayWalk {
            p,
            index: FlipIndex::new(p),
            cost: p.evaluate_bits(&bits),
            bits,
            code: 0,
            step: 0,
            total: 1 << n,
        })
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }
}

impl Iterator for GrayWalk<'_> {
    type Item = (u64, f64);

    fn next(&mut self) -> Option<Self::Item> {
        if self.step >= self.total {
            return None;
        }
        if self.step > 0 {
            let b = self.step.trailing_zeros() as usize;
            let var = self.bits.len() - 1 - b;
            self.cost += self.index.delta_bits(&self.bits, var);
            self.bits[var] ^= 1;
            self.code ^= 1 << b;
            if self.step.is_multiple_of(RESYNC_INTERVAL) {
                self.cost = self.p.evaluate_bits(&self.bits);
            }
        }
        self.step += 1;
        Some((self.code, self.cost))
    }
}

/// Exact minimum over all assignments; ties go to the lexicographically
/// smallest assignment.
pub fn brute_force_min(p: &Polynomial) -> Result<(Assignment, f64)> {
    let n = p.num_vars();
    let scale: f64 = 1.0 + p.terms().map(|(_, c)| c.abs()).sum::<f64>() + p.offset().abs();
    let tol = 1e-9 * scale;

    let mut walk = GrayWalk::new(p)?;
    let (_, first) = walk.next().expect("at least one assignment");
    let mut best_code = 0u64;
    let mut best_cost = first;
    for (code, cost) in walk.by_ref() {
        // incremental costs only shortlist; the decision uses direct evaluation
        if cost < best_cost + tol {
            let exact = p.evaluate_bits(Assignment::from_lex_index(n, code).bits());
            if exact < best_cost || (exact == best_cost && code < best_code) {
                best_cost = exact;
                best_code = code;
            }
        }
    }
    Ok((Assignment::from_lex_index(n, best_code), best_cost))
}

/// Every `(assignment, cost)` pair in lexicographic order.
pub fn full_landscape(p: &Polynomial) -> Result<Vec<(Assignment, f64)>> {
    let n = p.num_vars();
    if n > MAX_LANDSCAPE_VARS {
        return Err(HoboError::TooManyVariables(n, MAX_LANDSCAPE_VARS));
    }
    Ok((0..1u64 << n)
        .map(|i| {
            let x = Assignment::from_lex_index(n, i);
            let cost = p.evaluate_bits(x.bits());
            (x, cost)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> Polynomial {
        Polynomial::parse_text("-10 x0\n+7 x1\n+1 x0 x1\n-4 x0 x2\n+8 x1 x2\n-1 x0 x1 x2").unwrap()
    }

    #[test]
    fn small_minimum() {
        let (x, c) = brute_force_min(&small()).unwrap();
        assert_eq!(x.to_bitstring(), "101");
        assert_eq!(c, -14.0);
    }

    #[test]
    fn ties_pick_lexicographic_smallest() {
        let p = Polynomial::parse_text("vars 4\n5").unwrap();
        let (x, c) = brute_force_min(&p).unwrap();
        assert_eq!((x.to_bitstring().as_str(), c), ("0000", 5.0));

        let p = Polynomial::parse_text("1 x0").unwrap();
        let (x, c) = brute_force_min(&p).unwrap();
        assert_eq!((x.to_bitstring().as_str(), c), ("0", 0.0));

        // minima at 011 and 110; 011 comes first
        let p = Polynomial::parse_text("-1 x0 x1\n-1 x1 x2\n1 x0 x1 x2\n1 x0 x2").unwrap();
        let (x, c) = brute_force_min(&p).unwrap();
        assert_eq!((x.to_bitstring().as_str(), c), ("011", -1.0));
    }

    #[test]
    fn landscape_order() {
        let costs: Vec<f64> = full_landscape(&small()).unwrap().into_iter().map(|(_, c)| c).collect();
        assert_eq!(costs, vec![0.0, 0.0, 7.0, 15.0, -10.0, -14.0, -2.0, 1.0]);

        let l = full_landscape(&Polynomial::parse_text("-1 x0").unwrap()).unwrap();
        assert_eq!(l, vec![(Assignment::zeros(1), 0.0), (Assignment::ones(1), -1.0)]);

        let l = full_landscape(&Polynomial::parse_text("vars 2\n2.5").unwrap()).unwrap();
        assert_eq!(l.len(), 4);
        assert!(l.iter().all(|(_, c)| *c == 2.5));
        assert_eq!(l[1].0.to_bitstring(), "01");
    }

    #[test]
    fn guards() {
        let big = Polynomial::parse_text("vars 25\n1 x0").unwrap();
        assert!(matches!(brute_force_min(&big), Err(HoboError::TooManyVariables(25, 24))));
        let mid = Polynomial::parse_text("vars 17\n1 x0").unwrap();
        assert!(matches!(full_landscape(&mid), Err(HoboError::TooManyVariables(17, 16))));
    }

    #[test]
    fn walk_visits_every_assignment_once() {
        let p = small();
        let mut seen: Vec<u64> = GrayWalk::new(&p).unwrap().map(|(c, _)| c).collect();
        seen.sort_unstable();
        assert_eq!(seen, (0..8).collect::<Vec<_>>());
    }
}
