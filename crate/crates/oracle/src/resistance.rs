//! Effective resistance by a conjugate-gradient Laplacian solve.

use crate::error::{OracleError, Result};
use crate::graph::ExplicitGraph;

const TOLERANCE: f64 = 1e-14;

/// Potential at `x` when a unit current enters at `x` and leaves at the grounded `y`.
pub fn exact_resistance(g: &ExplicitGraph, x: usize, y: usize) -> Result<f64> {
    let n = g.vertex_count();
    if x >= n || y >= n {
        return Err(OracleError::InvalidArgument(format!("vertices {x}, {y} out of range")));
    }
    if x == y {
        return Ok(0.0);
    }
    // Grounding y removes its row and column, leaving a positive definite system.
    let apply = |v: &[f64]| -> Vec<f64> {
        (0..n)
            .map(|i| {
                if i == y {
                    return 0.0;
                }
                let pulled: f64 = g.neighbors(i).iter().filter(|&&j| j != y).map(|&j| v[j]).sum();
                g.degree(i) as f64 * v[i] - pulled
            })
            .collect()
    };
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(p, q)| p * q).sum::<f64>();
    let mut v = vec![0.0; n];
    let mut r = vec![0.0; n];
    r[x] = 1.0;
    let mut p = r.clone();
    let mut rr = dot(&r, &r);
    for _ in 0..10 * n + 100 {
        if rr.sqrt() < TOLERANCE {
            return Ok(v[x]);
        }
        let ap = apply(&p);
        let alpha = rr / dot(&p, &ap);
        for i in 0..n {
            v[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        let next = dot(&r, &r);
        let beta = next / rr;
        rr = next;
        for i in 0..n {
            p[i] = r[i] + beta * p[i];
        }
    }
    Err(OracleError::InvalidArgument(
        "conjugate gradient did not converge".into(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_graph;
    use drg_walk_core::FamilySpec;

    #[test]
    fn petersen_and_cycle() {
        let g = build_graph(&FamilySpec::Petersen).unwrap();
        let v = g.neighbors(0)[0];
        assert!((exact_resistance(&g, 0, v).unwrap() - 0.6).abs() < 1e-12);
        let c = build_graph(&FamilySpec::Cycle { n: 9 }).unwrap();
        assert!((exact_resistance(&c, 0, 3).unwrap() - 3.0 * 6.0 / 9.0).abs() < 1e-12);
        assert_eq!(exact_resistance(&c, 4, 4).unwrap(), 0.0);
    }
}
