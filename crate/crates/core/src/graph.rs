//! Tensor-network view of an objective as a Graphviz DOT graph.
//!
//! The coefficient tensor is one node; each of its `k` arms ends in a copy
//! of the binary vector `x`. A QUBO instance is drawn as a matrix `Q` with
//! two arms.

use std::fmt::Write;

use crate::polynomial::Polynomial;

/// DOT graph for an order-`order` network over `n` variables.
pub fn network_dot(n: usize, order: usize) -> String {
    let (name, shape) = if order == 2 { ("Q", "matrix") } else { ("T", "tensor") };
    let mut out = String::new();
    writeln!(out, "graph hobo {{").unwrap();
    writeln!(out, "  node [fontname=\"Helvetica\"];").unwrap();
    writeln!(
        out,
        "  {name} [shape=box, label=\"{name}\\n{shape} order {order}, n={n}\"];"
    )
    .unwrap();
    for arm in 1..=order {
        writeln!(out, "  arm{arm} [shape=circle, label=\"x\"];").unwrap();
    }
    for arm in 1..=order {
        writeln!(out, "  {name} -- arm{arm} [label=\"a{arm} ({n})\"];").unwrap();
    }
    writeln!(out, "}}").unwrap();
    out
}

/// Network for the tensor built from `p` at its natural order.
pub fn polynomial_dot(p: &Polynomial) -> String {
    network_dot(p.num_vars(), p.degree().max(1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cubic_has_three_arms() {
        let p = Polynomial::parse_text("1 x0 x1 x2\n2 x0").unwrap();
        let dot = polynomial_dot(&p);
        assert_eq!(dot.matches(" -- ").count(), 3);
        assert_eq!(dot.matches("shape=circle").count(), 3);
        assert_eq!(dot.matches("shape=box").count(), 1);
        assert!(dot.starts_with("graph hobo {") && dot.trim_end().ends_with('}'));
    }

    #[test]
    fn quadratic_is_matrix() {
        let p = Polynomial::parse_text("1 x0 x1\n1 x2").unwrap();
        let dot = polynomial_dot(&p);
        assert!(dot.contains("Q [shape=box"));
        assert_eq!(dot.matches(" -- ").count(), 2);
    }
}
