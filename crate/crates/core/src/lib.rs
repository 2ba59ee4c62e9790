//! Higher-order binary optimization.
//!
//! Pseudo-Boolean objectives are held as canonical [`Polynomial`]s, compiled
//! into dense coefficient tensors whose contraction with the binary vector
//! on every arm gives the cost, minimized by simulated annealing and checked
//! against exhaustive enumeration. Tensors can be compressed through a
//! truncated SVD of their first-mode unfolding.

pub mod annealer;
pub mod compressor;
pub mod error;
pub mod evaluator;
pub mod graph;
pub mod linalg;
pub mod oracle;
pub mod polynomial;
pub mod tensor;

pub use annealer::{anneal, AnnealConfig, AnnealResult};
pub use compressor::{compressed_cost, compression_report, truncate, CompressionReport, SvdFactors};
pub use error::{HoboError, Result};
pub use evaluator::{contract, delta_flip, FlipIndex};
pub use oracle::{brute_force_min, full_landscape};
pub use polynomial::{random_instance, Assignment, Polynomial, RandomInstance};
pub use tensor::{build_hobo_tensor, build_qubo_matrix, tensor_to_polynomial, HoboTensor, QuboMatrix};
