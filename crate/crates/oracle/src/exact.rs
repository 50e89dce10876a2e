//! Linear-system ground truth on explicit graphs: hitting-time moments,
//! absorption probabilities and expected visit counts.

use num_traits::{Signed, Zero};

use drg_walk_core::rational::{int, Real};
use drg_walk_core::Q;

use crate::error::{OracleError, Result};
use crate::graph::ExplicitGraph;

/// Largest number of unknowns the dense elimination accepts.
pub const EXACT_LIMIT: usize = 2500;

/// Scalars the dense solver can pivot on.
pub trait Field: Real + PartialEq + Zero {
    /// Preference for a pivot; 0 means unusable.
    fn pivot_score(&self) -> f64;
}

impl Field for Q {
    fn pivot_score(&self) -> f64 {
        if self.is_zero() {
            0.0
        } else {
            // Short entries keep the growth of later rows down.
            1.0 / (self.numer().bits() + self.denom().bits()) as f64
        }
    }
}

impl Field for f64 {
    fn pivot_score(&self) -> f64 {
        self.abs()
    }
}

/// Dense Gaussian elimination with pivot choice by `pivot_score`.
pub fn solve<T: Field>(mut a: Vec<Vec<T>>, mut rhs: Vec<T>) -> Result<Vec<T>> {
    let n = rhs.len();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&x, &y| a[x][col].pivot_score().total_cmp(&a[y][col].pivot_score()))
            .filter(|&p| a[p][col].pivot_score() > 0.0)
            .ok_or(OracleError::Singular)?;
        a.swap(col, pivot);
        rhs.swap(col, pivot);
        let (top, bottom) = a.split_at_mut(col + 1);
        let pivot_row = &top[col];
        for (offset, row) in bottom.iter_mut().enumerate() {
            if row[col].pivot_score() == 0.0 {
                continue;
            }
            let factor = row[col].clone() / pivot_row[col].clone();
            for c in col..n {
                if pivot_row[c].pivot_score() != 0.0 {
                    row[c] = row[c].clone() - factor.clone() * pivot_row[c].clone();
                }
            }
            let r = col + 1 + offset;
            rhs[r] = rhs[r].clone() - factor * rhs[col].clone();
        }
    }
    let mut x = vec![T::zero(); n];
    for row in (0..n).rev() {
        let mut acc = rhs[row].clone();
        for c in row + 1..n {
            if a[row][c].pivot_score() != 0.0 {
                acc = acc - a[row][c].clone() * x[c].clone();
            }
        }
        x[row] = acc / a[row][row].clone();
    }
    Ok(x)
}

/// Solves `deg(x) f(x) - sum_{y ~ x, y not absorbing} f(y) = rhs(x) + sum_{y ~ x, y absorbing} boundary(y)`
/// for every non-absorbing `x`; absorbing vertices keep `boundary`.
fn dirichlet<T: Field>(
    g: &ExplicitGraph,
    absorbing: &[bool],
    rhs: impl Fn(usize) -> T,
    boundary: impl Fn(usize) -> T,
) -> Result<Vec<T>> {
    let n = g.vertex_count();
    let free: Vec<usize> = (0..n).filter(|&x| !absorbing[x]).collect();
    if free.len() == n {
        return Err(OracleError::InvalidArgument("absorbing set is empty".into()));
    }
    if free.is_empty() {
        return Err(OracleError::InvalidArgument("absorbing set is the whole graph".into()));
    }
    if free.len() > EXACT_LIMIT {
        return Err(OracleError::TooLarge {
            n: free.len() as u64,
            limit: EXACT_LIMIT as u64,
        });
    }
    let mut index = vec![usize::MAX; n];
    for (i, &x) in free.iter().enumerate() {
        index[x] = i;
    }
    let m = free.len();
    let mut a = vec![vec![T::zero(); m]; m];
    let mut b = Vec::with_capacity(m);
    for (i, &x) in free.iter().enumerate() {
        a[i][i] = T::from_int(g.degree(x) as i64);
        let mut value = rhs(x);
        for &y in g.neighbors(x) {
            if absorbing[y] {
                value = value + boundary(y);
            } else {
                a[i][index[y]] = a[i][index[y]].clone() - T::from_int(1);
            }
        }
        b.push(value);
    }
    let solution = solve(a, b)?;
    Ok((0..n)
        .map(|x| {
            if absorbing[x] {
                boundary(x)
            } else {
                solution[index[x]].clone()
            }
        })
        .collect())
}

fn single(g: &ExplicitGraph, target: usize) -> Result<Vec<bool>> {
    if target >= g.vertex_count() {
        return Err(OracleError::InvalidArgument(format!("no vertex {target}")));
    }
    let mut mask = vec![false; g.vertex_count()];
    mask[target] = true;
    Ok(mask)
}

/// Expected hitting time of `target` from every vertex.
pub fn hitting<T: Field>(g: &ExplicitGraph, target: usize) -> Result<Vec<T>> {
    let mask = single(g, target)?;
    dirichlet(g, &mask, |x| T::from_int(g.degree(x) as i64), |_| T::zero())
}

/// Second moment of the hitting time of `target` from every vertex.
pub fn hitting_m2<T: Field>(g: &ExplicitGraph, target: usize) -> Result<Vec<T>> {
    let h: Vec<T> = hitting(g, target)?;
    let mask = single(g, target)?;
    dirichlet(
        g,
        &mask,
        |x| {
            g.neighbors(x).iter().fold(T::zero(), |acc, &y| {
                acc + T::from_int(1) + T::from_int(2) * h[y].clone()
            })
        },
        |_| T::zero(),
    )
}

pub fn exact_hitting(g: &ExplicitGraph, target: usize) -> Result<Vec<Q>> {
    hitting(g, target)
}

pub fn exact_hitting_m2(g: &ExplicitGraph, target: usize) -> Result<Vec<Q>> {
    hitting_m2(g, target)
}

/// What an absorbing-chain solve returns.
#[derive(Debug, Clone, Copy)]
pub enum Absorbing<'a> {
    /// `sum_b P(absorbed at b) * weight[b]`, weights aligned with the absorbing list.
    Probabilities(&'a [Q]),
    /// Expected visits to `target` (time 0 included) before absorption.
    Visits { target: usize },
}

pub fn exact_absorbing(g: &ExplicitGraph, absorbing: &[usize], mode: Absorbing<'_>) -> Result<Vec<Q>> {
    let n = g.vertex_count();
    let mut mask = vec![false; n];
    let mut weight = vec![Q::zero(); n];
    for (i, &x) in absorbing.iter().enumerate() {
        if x >= n {
            return Err(OracleError::InvalidArgument(format!("no vertex {x}")));
        }
        mask[x] = true;
        if let Absorbing::Probabilities(w) = mode {
            weight[x] = w
                .get(i)
                .cloned()
                .ok_or_else(|| OracleError::InvalidArgument("one weight per absorbing vertex".into()))?;
        }
    }
    match mode {
        Absorbing::Probabilities(_) => dirichlet(g, &mask, |_| Q::zero(), |y| weight[y].clone()),
        Absorbing::Visits { target } => {
            if target >= n || mask[target] {
                return Err(OracleError::InvalidArgument(format!(
                    "visit target {target} must be a non-absorbing vertex"
                )));
            }
            dirichlet(
                g,
                &mask,
                |x| {
                    if x == target {
                        int(g.degree(x) as i64)
                    } else {
                        Q::zero()
                    }
                },
                |_| Q::zero(),
            )
        }
    }
}

/// `sum_{y ~ z} (f(y) - f(z))`.
pub fn net_flow(g: &ExplicitGraph, f: &[Q], z: usize) -> Q {
    g.neighbors(z).iter().fold(Q::zero(), |acc, &y| acc + &f[y] - &f[z])
}

/// First vertex outside `skip` where `net_flow + deg * source = 0` fails.
pub fn first_defect(g: &ExplicitGraph, f: &[Q], skip: &[bool], source: impl Fn(usize) -> Q) -> Option<usize> {
    (0..g.vertex_count())
        .filter(|&z| !skip[z])
        .find(|&z| !(net_flow(g, f, z) + int(g.degree(z) as i64) * source(z)).is_zero())
}

/// Residual check that `h` solves the hitting-time system for `target`.
pub fn check_hitting(g: &ExplicitGraph, target: usize, h: &[Q]) -> Option<usize> {
    if !h[target].is_zero() {
        return Some(target);
    }
    let skip = single(g, target).ok()?;
    first_defect(g, h, &skip, |_| int(1))
}

/// Residual check that `m2` solves the second-moment system given hitting times `h`.
pub fn check_second_moment(g: &ExplicitGraph, target: usize, h: &[Q], m2: &[Q]) -> Option<usize> {
    if !m2[target].is_zero() {
        return Some(target);
    }
    let skip = single(g, target).ok()?;
    // M2(x) = 1 + (2/deg) sum H(y) + (1/deg) sum M2(y).
    first_defect(g, m2, &skip, |x| {
        let deg = int(g.degree(x) as i64);
        let pulled = g.neighbors(x).iter().fold(Q::zero(), |acc, &y| acc + &h[y]);
        int(1) + int(2) * pulled / deg
    })
}

/// True when every value is nonnegative.
pub fn all_nonnegative(values: &[Q]) -> bool {
    values.iter().all(|v| !v.is_negative())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_graph;
    use drg_walk_core::rational::ratio;
    use drg_walk_core::FamilySpec;

    fn petersen() -> ExplicitGraph {
        build_graph(&FamilySpec::Petersen).unwrap()
    }

    #[test]
    fn petersen_hitting() {
        let g = petersen();
        let dist = g.bfs(0);
        let h = exact_hitting(&g, 0).unwrap();
        let m2 = exact_hitting_m2(&g, 0).unwrap();
        for x in 1..10 {
            let (want_h, want_m2) = if dist[x] == 1 { (9, 189) } else { (12, 258) };
            assert_eq!(h[x], int(want_h));
            assert_eq!(m2[x], int(want_m2));
        }
        assert_eq!(check_hitting(&g, 0, &h), None);
        assert_eq!(check_second_moment(&g, 0, &h, &m2), None);
        let mut wrong = h.clone();
        wrong[3] += int(1);
        assert!(check_hitting(&g, 0, &wrong).is_some());
    }

    #[test]
    fn complete_graph_hitting() {
        let g = build_graph(&FamilySpec::Complete { n: 4 }).unwrap();
        assert_eq!(exact_hitting(&g, 2).unwrap()[0], int(3));
        let approx: Vec<f64> = hitting(&g, 2).unwrap();
        assert!((approx[0] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn petersen_absorbing() {
        let g = petersen();
        let u = 0;
        let v = g.neighbors(u)[0];
        let dv = g.bfs(v);
        let z = *g.neighbors(u).iter().find(|&&z| dv[z] == 2).unwrap();
        let p = exact_absorbing(&g, &[u, v], Absorbing::Probabilities(&[int(1), int(0)])).unwrap();
        assert_eq!(p[z], ratio(2, 3));

        let sphere: Vec<usize> = (0..10).filter(|&x| g.bfs(u)[x] == 2).collect();
        let visits = exact_absorbing(&g, &sphere, Absorbing::Visits { target: u }).unwrap();
        assert_eq!(visits[u], ratio(3, 2));
    }

    #[test]
    fn absorbing_guards() {
        let g = petersen();
        let all: Vec<usize> = (0..10).collect();
        assert!(exact_absorbing(&g, &all, Absorbing::Visits { target: 0 }).is_err());
        assert!(exact_absorbing(&g, &[], Absorbing::Probabilities(&[])).is_err());
        assert!(exact_absorbing(&g, &[1], Absorbing::Visits { target: 1 }).is_err());
    }
}
