//! Exact walk distributions on the full graph, binned by distance from the start.

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;

use drg_walk_core::Q;

use crate::error::{OracleError, Result};
use crate::graph::ExplicitGraph;

fn regular(g: &ExplicitGraph) -> Result<usize> {
    g.regular_degree()
        .ok_or_else(|| OracleError::InvalidGraph("evolution needs a regular graph".into()))
}

/// Distance-binned distribution of the walk `beta I + (1 - beta) P` from `start`,
/// for `t = 0..=t_max`.
pub fn projected_evolution(g: &ExplicitGraph, start: usize, laziness: &Q, t_max: usize) -> Result<Vec<Vec<Q>>> {
    let k = regular(g)?;
    if laziness < &Q::zero() || laziness >= &Q::from_integer(1.into()) {
        return Err(OracleError::InvalidArgument("laziness must lie in [0, 1)".into()));
    }
    let stay = BigUint::try_from(laziness.numer().clone()).expect("nonnegative") * BigUint::from(k);
    let q = BigUint::try_from(laziness.denom().clone()).expect("positive");
    let step_weight = &q - BigUint::try_from(laziness.numer().clone()).expect("nonnegative");
    let scale = &q * BigUint::from(k);

    let dist = g.bfs(start);
    let depth = dist.iter().copied().max().unwrap_or(0);
    let mut w = vec![BigUint::zero(); g.vertex_count()];
    w[start] = BigUint::from(1u8);
    let mut den = BigUint::from(1u8);
    let mut out = Vec::with_capacity(t_max + 1);
    for t in 0..=t_max {
        if t > 0 {
            let mut next = vec![BigUint::zero(); w.len()];
            for (y, slot) in next.iter_mut().enumerate() {
                let pulled = g.neighbors(y).iter().fold(BigUint::zero(), |acc, &x| acc + &w[x]);
                *slot = &stay * &w[y] + &step_weight * pulled;
            }
            w = next;
            den *= &scale;
        }
        let mut bins = vec![BigUint::zero(); depth + 1];
        for (x, wx) in w.iter().enumerate() {
            bins[dist[x]] += wx;
        }
        let den_i = BigInt::from(den.clone());
        out.push(
            bins.into_iter()
                .map(|b| Q::new(BigInt::from(b), den_i.clone()))
                .collect(),
        );
    }
    Ok(out)
}

/// Number of closed walks of each length `0..=len_max` at `start`.
pub fn closed_walks(g: &ExplicitGraph, start: usize, len_max: usize) -> Vec<BigUint> {
    let mut w = vec![BigUint::zero(); g.vertex_count()];
    w[start] = BigUint::from(1u8);
    let mut out = vec![w[start].clone()];
    for _ in 0..len_max {
        w = (0..w.len())
            .map(|y| g.neighbors(y).iter().fold(BigUint::zero(), |acc, &x| acc + &w[x]))
            .collect();
        out.push(w[start].clone());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_graph;
    use drg_walk_core::rational::ratio;
    use drg_walk_core::FamilySpec;

    #[test]
    fn petersen_first_steps() {
        let g = build_graph(&FamilySpec::Petersen).unwrap();
        let dist = projected_evolution(&g, 0, &Q::zero(), 2).unwrap();
        assert_eq!(dist[1], vec![ratio(0, 1), ratio(1, 1), ratio(0, 1)]);
        assert_eq!(dist[2], vec![ratio(1, 3), ratio(0, 1), ratio(2, 3)]);
    }

    #[test]
    fn closed_walk_counts() {
        let g = build_graph(&FamilySpec::Petersen).unwrap();
        let walks = closed_walks(&g, 0, 3);
        let as_u: Vec<u64> = walks.iter().map(|w| w.try_into().unwrap()).collect();
        assert_eq!(as_u, vec![1, 0, 3, 0]);
    }
}
