//! Simulated annealing over single-bit flips.
//!
//! Each restart starts from a uniformly random assignment and performs
//! `sweeps` sweeps of `n` proposals. A proposal flips one uniformly chosen
//! bit and is accepted with probability `min(1, exp(-delta / T))`. The
//! temperature is multiplied by `(t_final / t_initial)^(1 / (sweeps - 1))`
//! after every sweep so the last sweep runs at `t_final`.
//!
//! Restart `r` draws from a ChaCha8 stream seeded with `seed` on stream
//! `r`, so restarts can run on any number of threads and still produce the
//! same result.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{HoboError, Result};
use crate::evaluator::FlipIndex;
use crate::polynomial::{Assignment, Polynomial};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Schedule {
    #[default]
    Geometric,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnnealConfig {
    pub sweeps: usize,
    pub restarts: usize,
    /// `None` derives the start temperature from the instance.
    pub t_initial: Option<f64>,
    pub t_final: f64,
    pub seed: u64,
    pub schedule: Schedule,
}

impl Default for AnnealConfig {
    fn default() -> Self {
        AnnealConfig {
            sweeps: 1000,
            restarts: 8,
            t_initial: None,
            t_final: 1e-3,
            seed: 0,
            schedule: Schedule::Geometric,
        }
    }
}

impl AnnealConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(HoboError::InvalidArgument(msg));
        if self.sweeps == 0 {
            return bad("sweeps must be >= 1".into());
        }
        if self.restarts == 0 {
            return bad("restarts must be >= 1".into());
        }
        if !(self.t_final.is_finite() && self.t_final > 0.0) {
            return bad(format!("t_final must be positive, got {}", self.t_final));
        }
        if let Some(t0) = self.t_initial {
            if !(t0.is_finite() && t0 > 0.0) {
                return bad(format!("t_initial must be positive, got {t0}"));
            }
            if self.t_final > t0 {
                return bad(format!("t_final {} exceeds t_initial {t0}", self.t_final));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnnealResult {
    pub best_assignment: Assignment,
    pub best_cost: f64,
    /// Best cost reached by each restart, in restart order.
    pub restart_costs: Vec<f64>,
    pub accepted_moves: u64,
    pub seed_used: u64,
}

impl AnnealResult {
    pub fn to_json(&self) -> String {
        serde_json::to_string(&AnnealResultJson::from(self)).expect("result serializes")
    }
}

/// Serialized form `{"assignment", "cost", "restart_costs", "seed"}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnnealResultJson {
    pub assignment: Vec<u8>,
    pub cost: f64,
    pub restart_costs: Vec<f64>,
    pub seed: u64,
}

impl From<&AnnealResult> for AnnealResultJson {
    fn from(r: &AnnealResult) -> Self {
        AnnealResultJson {
            assignment: r.best_assignment.bits().to_vec(),
            cost: r.best_cost,
            restart_costs: r.restart_costs.clone(),
            seed: r.seed_used,
        }
    }
}

/// Metropolis acceptance `min(1, exp(-delta / T))`.
pub fn acceptance_probability(delta: f64, temperature: f64) -> Result<f64> {
    if temperature.is_nan() || temperature <= 0.0 {
        return Err(HoboError::InvalidArgument(format!(
            "temperature must be positive, got {temperature}"
        )));
    }
    if delta <= 0.0 {
        return Ok(1.0);
    }
    Ok((-delta / temperature).exp())
}

/// `max |coef| * degree`, large enough that most uphill moves pass early on.
pub fn auto_initial_temperature(p: &Polynomial) -> Result<f64> {
    if p.is_constant() {
        return Err(HoboError::InvalidArgument(
            "constant polynomial has no temperature scale".into(),
        ));
    }
    Ok(p.max_abs_coef() * p.degree() as f64)
}

struct RestartOutcome {
    bits: Vec<u8>,
    cost: f64,
    accepted: u64,
}

struct Chain<'a> {
    p: &'a Polynomial,
    index: &'a FlipIndex,
    sweeps: usize,
    t_initial: f64,
    alpha: f64,
    seed: u64,
}

impl Chain<'_> {
    fn run(&self, restart: usize) -> RestartOutcome {
        let n = self.p.num_vars();
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(restart as u64);

        let mut bits: Vec<u8> = (0..n).map(|_| rng.random_range(0..2u8)).collect();
        let mut cost = self.p.evaluate_bits(&bits);
        let mut best_bits = bits.clone();
        let mut best = cost;
        let mut accepted = 0u64;
        let mut temperature = self.t_initial;

        for _ in 0..self.sweeps {
            for _ in 0..n {
                let j = rng.random_range(0..n);
                let delta = self.index.delta_bits(&bits, j);
                if delta <= 0.0 || rng.random::<f64>() < (-delta / temperature).exp() {
                    bits[j] ^= 1;
                    cost += delta;
                    accepted += 1;
                    if cost < best {
                        best = cost;
                        best_bits.copy_from_slice(&bits);
                    }
                }
            }
            // keeps incremental rounding from accumulating across sweeps
            cost = self.p.evaluate_bits(&bits);
            temperature *= self.alpha;
        }

        RestartOutcome {
            cost: self.p.evaluate_bits(&best_bits),
            bits: best_bits,
            accepted,
        }
    }
}

/// Minimizes `p` with independent annealing restarts run in parallel.
///
/// The result is identical for any thread count: restarts are merged in
/// index order and ties keep the lowest restart.
pub fn anneal(p: &Polynomial, cfg: &AnnealConfig) -> Result<AnnealResult> {
    cfg.validate()?;
    if p.num_vars() == 0 {
        return Err(HoboError::InvalidArgument(
            "cannot anneal over zero variables".into(),
        ));
    }
    let t_initial = match cfg.t_initial {
        Some(t) => t,
        None => auto_initial_temperature(p).unwrap_or(1.0),
    };
    // an auto start below t_final degenerates to a constant temperature
    let t_final = cfg.t_final.min(t_initial);
    let alpha = if cfg.sweeps > 1 {
        (t_final / t_initial).powf(1.0 / (cfg.sweeps - 1) as f64)
    } else {
        1.0
    };

    let index = FlipIndex::new(p);
    let chain = Chain {
        p,
        index: &index,
        sweeps: cfg.sweeps,
        t_initial,
        alpha,
        seed: cfg.seed,
    };
    let outcomes: Vec<RestartOutcome> = (0..cfg.restarts)
        .into_par_iter()
        .map(|r| chain.run(r))
        .collect();

    let mut best = 0;
    for (r, o) in outcomes.iter().enumerate() {
        if o.cost < outcomes[best].cost {
            best = r;
        }
    }
    Ok(AnnealResult {
        best_assignment: Assignment::from_bits(outcomes[best].bits.clone())?,
        best_cost: outcomes[best].cost,
        restart_costs: outcomes.iter().map(|o| o.cost).collect(),
        accepted_moves: outcomes.iter().map(|o| o.accepted).sum(),
        seed_used: cfg.seed,
    })
}
