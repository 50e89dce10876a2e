//! Explicit graphs for the families with a known construction.

use std::collections::{HashMap, VecDeque};
use std::fmt::Write;

use drg_walk_core::array::FamilySpec;
use drg_walk_core::IntersectionArray;

use crate::error::{OracleError, Result};

/// Largest graph `build_graph` will construct.
pub const SIZE_LIMIT: u64 = 20_000;

/// The dodecahedron as the generalized Petersen graph GP(10, 2).
const DODECAHEDRON: [[usize; 3]; 20] = [
    [1, 9, 10],
    [0, 2, 11],
    [1, 3, 12],
    [2, 4, 13],
    [3, 5, 14],
    [4, 6, 15],
    [5, 7, 16],
    [6, 8, 17],
    [7, 9, 18],
    [0, 8, 19],
    [0, 12, 18],
    [1, 13, 19],
    [2, 10, 14],
    [3, 11, 15],
    [4, 12, 16],
    [5, 13, 17],
    [6, 14, 18],
    [7, 15, 19],
    [8, 10, 16],
    [9, 11, 17],
];

/// A simple, undirected, connected graph stored as sorted adjacency lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExplicitGraph {
    adjacency: Vec<Vec<usize>>,
    labels: Option<Vec<String>>,
}

impl ExplicitGraph {
    pub fn new(mut adjacency: Vec<Vec<usize>>) -> Result<Self> {
        let n = adjacency.len();
        if n == 0 {
            return Err(OracleError::InvalidGraph("no vertices".into()));
        }
        for (v, row) in adjacency.iter_mut().enumerate() {
            row.sort_unstable();
            if row.windows(2).any(|w| w[0] == w[1]) {
                return Err(OracleError::InvalidGraph(format!("repeated edge at vertex {v}")));
            }
            if row.iter().any(|&y| y == v || y >= n) {
                return Err(OracleError::InvalidGraph(format!("bad neighbor of vertex {v}")));
            }
        }
        for (v, row) in adjacency.iter().enumerate() {
            for &y in row {
                if adjacency[y].binary_search(&v).is_err() {
                    return Err(OracleError::InvalidGraph(format!("edge {v}-{y} is not symmetric")));
                }
            }
        }
        let g = Self {
            adjacency,
            labels: None,
        };
        if g.bfs(0).contains(&usize::MAX) {
            return Err(OracleError::Disconnected);
        }
        Ok(g)
    }

    fn with_labels(mut self, labels: Vec<String>) -> Self {
        self.labels = Some(labels);
        self
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    /// The common degree, if every vertex has the same one.
    pub fn regular_degree(&self) -> Option<usize> {
        let k = self.degree(0);
        self.adjacency.iter().all(|row| row.len() == k).then_some(k)
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Distances from `source`; unreachable vertices get `usize::MAX`.
    pub fn bfs(&self, source: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.vertex_count()];
        let mut queue = VecDeque::from([source]);
        dist[source] = 0;
        while let Some(x) = queue.pop_front() {
            for &y in &self.adjacency[x] {
                if dist[y] == usize::MAX {
                    dist[y] = dist[x] + 1;
                    queue.push_back(y);
                }
            }
        }
        dist
    }

    pub fn is_bipartite(&self) -> bool {
        let dist = self.bfs(0);
        self.adjacency
            .iter()
            .enumerate()
            .all(|(x, row)| row.iter().all(|&y| dist[x] % 2 != dist[y] % 2))
    }

    /// Length of a shortest cycle, or `None` for a forest.
    pub fn girth(&self) -> Option<usize> {
        let mut best: Option<usize> = None;
        for s in 0..self.vertex_count() {
            let mut dist = vec![usize::MAX; self.vertex_count()];
            let mut parent = vec![usize::MAX; self.vertex_count()];
            let mut queue = VecDeque::from([s]);
            dist[s] = 0;
            while let Some(x) = queue.pop_front() {
                for &y in &self.adjacency[x] {
                    if dist[y] == usize::MAX {
                        dist[y] = dist[x] + 1;
                        parent[y] = x;
                        queue.push_back(y);
                    } else if parent[x] != y {
                        let len = dist[x] + dist[y] + 1;
                        best = Some(best.map_or(len, |b| b.min(len)));
                    }
                }
            }
        }
        best
    }

    /// One `u v` pair per line with `u < v`, 0-indexed.
    pub fn edge_list(&self) -> String {
        let mut out = String::new();
        for (x, row) in self.adjacency.iter().enumerate() {
            for &y in row.iter().filter(|&&y| y > x) {
                let _ = writeln!(out, "{x} {y}");
            }
        }
        out
    }

    /// The first vertex at distance `d` from `source`, if any.
    pub fn vertex_at_distance(&self, source: usize, d: usize) -> Option<usize> {
        self.bfs(source).iter().position(|&x| x == d)
    }
}

fn binomial(n: u64, r: u64) -> u64 {
    if r > n {
        return 0;
    }
    let r = r.min(n - r);
    let mut acc: u128 = 1;
    for i in 0..r {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

/// Vertex count of the explicit graph, computed without building it.
pub fn family_size(spec: &FamilySpec) -> Result<u64> {
    spec.check_range()?;
    Ok(match *spec {
        FamilySpec::Complete { n } | FamilySpec::Cycle { n } => n,
        FamilySpec::Hamming { m, q } => q.checked_pow(m as u32).unwrap_or(u64::MAX),
        FamilySpec::Johnson { m, q } => binomial(m, q),
        FamilySpec::Odd { m } => binomial(2 * m - 1, m - 1),
        FamilySpec::Petersen => 10,
        FamilySpec::Dodecahedron => 20,
        FamilySpec::BiggsSmith => 102,
    })
}

fn subsets(universe: u32, size: u32) -> Vec<u64> {
    let mut out = Vec::new();
    // Gosper's hack over `universe`-bit masks.
    if size == 0 {
        return vec![0];
    }
    let mut x: u64 = (1 << size) - 1;
    while x < (1u64 << universe) {
        out.push(x);
        let c = x & x.wrapping_neg();
        let r = x + c;
        x = (((r ^ x) >> 2) / c) | r;
    }
    out
}

fn subset_label(mask: u64) -> String {
    let items: Vec<String> = (0..64).filter(|i| mask >> i & 1 == 1).map(|i| i.to_string()).collect();
    format!("{{{}}}", items.join(","))
}

/// Graph on `masks` whose neighbor lists come from `candidates`, so the build
/// avoids the quadratic pair scan.
fn subset_graph(masks: Vec<u64>, candidates: impl Fn(u64) -> Vec<u64>) -> Result<ExplicitGraph> {
    let index: HashMap<u64, usize> = masks.iter().enumerate().map(|(i, &m)| (m, i)).collect();
    let adjacency = masks
        .iter()
        .map(|&m| candidates(m).into_iter().map(|c| index[&c]).collect())
        .collect();
    let labels = masks.iter().map(|&m| subset_label(m)).collect();
    Ok(ExplicitGraph::new(adjacency)?.with_labels(labels))
}

pub fn build_graph(spec: &FamilySpec) -> Result<ExplicitGraph> {
    if matches!(spec, FamilySpec::BiggsSmith) {
        return Err(OracleError::Unsupported(
            "biggs-smith has no explicit construction here; its checks are array-side only".into(),
        ));
    }
    let n = family_size(spec)?;
    if n > SIZE_LIMIT {
        return Err(OracleError::TooLarge { n, limit: SIZE_LIMIT });
    }
    let n = n as usize;
    match *spec {
        FamilySpec::Complete { .. } => {
            ExplicitGraph::new((0..n).map(|x| (0..n).filter(|&y| y != x).collect()).collect())
        }
        FamilySpec::Cycle { .. } => ExplicitGraph::new((0..n).map(|x| vec![(x + 1) % n, (x + n - 1) % n]).collect()),
        FamilySpec::Hamming { m, q } => {
            let (m, q) = (m as usize, q as usize);
            let digits = |mut x: usize| -> Vec<usize> {
                (0..m)
                    .map(|_| {
                        let d = x % q;
                        x /= q;
                        d
                    })
                    .collect()
            };
            let mut adjacency = vec![Vec::new(); n];
            for (x, row) in adjacency.iter_mut().enumerate() {
                let mut place = 1;
                for d in digits(x) {
                    for other in 0..q {
                        if other != d {
                            row.push(x - d * place + other * place);
                        }
                    }
                    place *= q;
                }
            }
            let labels = (0..n)
                .map(|x| {
                    digits(x)
                        .iter()
                        .rev()
                        .map(|d| d.to_string())
                        .collect::<Vec<_>>()
                        .join("")
                })
                .collect();
            Ok(ExplicitGraph::new(adjacency)?.with_labels(labels))
        }
        FamilySpec::Johnson { m, q } => {
            let m = m as u32;
            subset_graph(subsets(m, q as u32), |mask| {
                let mut out = Vec::new();
                for i in (0..m).filter(|i| mask >> i & 1 == 1) {
                    for j in (0..m).filter(|j| mask >> j & 1 == 0) {
                        out.push(mask & !(1 << i) | 1 << j);
                    }
                }
                out
            })
        }
        FamilySpec::Odd { m } => odd_graph(m as u32),
        FamilySpec::Petersen => odd_graph(3),
        FamilySpec::Dodecahedron => ExplicitGraph::new(DODECAHEDRON.iter().map(|r| r.to_vec()).collect()),
        FamilySpec::BiggsSmith => unreachable!(),
    }
}

/// Kneser graph on the (m-1)-subsets of a (2m-1)-set, adjacent when disjoint.
fn odd_graph(m: u32) -> Result<ExplicitGraph> {
    let universe = 2 * m - 1;
    let full = (1u64 << universe) - 1;
    subset_graph(subsets(universe, m - 1), move |mask| {
        let rest = full & !mask;
        let members: Vec<u32> = (0..universe).filter(|i| rest >> i & 1 == 1).collect();
        // Drop one element of the m-element complement.
        members.iter().map(|&i| rest & !(1 << i)).collect()
    })
}

/// Recovers the intersection array by checking every ordered pair of vertices.
pub fn verify_drg(g: &ExplicitGraph) -> Result<IntersectionArray> {
    let k = g
        .regular_degree()
        .ok_or_else(|| OracleError::NotDistanceRegular("degree is not constant".into()))?;
    let mut b: Vec<usize> = Vec::new();
    let mut c: Vec<usize> = Vec::new();
    let mut diameter: Option<usize> = None;
    for x in 0..g.vertex_count() {
        let dist = g.bfs(x);
        if dist.contains(&usize::MAX) {
            return Err(OracleError::Disconnected);
        }
        let d = dist.iter().copied().max().unwrap_or(0);
        match diameter {
            None => {
                diameter = Some(d);
                b = vec![usize::MAX; d + 1];
                c = vec![usize::MAX; d + 1];
            }
            Some(prev) if prev != d => {
                return Err(OracleError::NotDistanceRegular(format!(
                    "eccentricity of vertex {x} is {d}, expected {prev}"
                )));
            }
            _ => {}
        }
        for (y, &i) in dist.iter().enumerate() {
            let down = g.neighbors(y).iter().filter(|&&z| dist[z] + 1 == i).count();
            let up = g.neighbors(y).iter().filter(|&&z| dist[z] == i + 1).count();
            for (slot, value, name) in [(&mut c[i], down, "c"), (&mut b[i], up, "b")] {
                if *slot == usize::MAX {
                    *slot = value;
                } else if *slot != value {
                    return Err(OracleError::NotDistanceRegular(format!(
                        "{name}_{i} is {value} for the pair ({x}, {y}) but {slot} elsewhere"
                    )));
                }
            }
        }
    }
    let d = diameter.unwrap_or(0);
    if d == 0 || k == 0 {
        return Err(OracleError::InvalidGraph(
            "a single vertex has no intersection array".into(),
        ));
    }
    let to_u64 = |v: &[usize]| v.iter().map(|&x| x as u64).collect::<Vec<_>>();
    Ok(IntersectionArray::new(to_u64(&b[..d]), to_u64(&c[1..]))?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use drg_walk_core::array::generate_family;

    #[test]
    fn petersen_shape() {
        let g = build_graph(&FamilySpec::Petersen).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (10, 15));
        assert_eq!(g.girth(), Some(5));
        assert_eq!(verify_drg(&g).unwrap().to_string(), "3,2;1,1");
    }

    #[test]
    fn cube_and_dodecahedron() {
        let cube = build_graph(&FamilySpec::Hamming { m: 3, q: 2 }).unwrap();
        assert_eq!((cube.vertex_count(), cube.edge_count()), (8, 12));
        assert!(cube.is_bipartite());
        let dodeca = build_graph(&FamilySpec::Dodecahedron).unwrap();
        assert_eq!((dodeca.vertex_count(), dodeca.edge_count()), (20, 30));
        assert_eq!(dodeca.regular_degree(), Some(3));
        assert_eq!(verify_drg(&dodeca).unwrap().to_string(), "3,2,1,1,1;1,1,1,2,3");
    }

    #[test]
    fn path_is_rejected() {
        let path = ExplicitGraph::new(vec![vec![1], vec![0, 2], vec![1]]).unwrap();
        assert!(matches!(verify_drg(&path), Err(OracleError::NotDistanceRegular(_))));
    }

    #[test]
    fn guards() {
        assert!(matches!(
            build_graph(&FamilySpec::BiggsSmith),
            Err(OracleError::Unsupported(_))
        ));
        assert!(matches!(
            build_graph(&FamilySpec::Hamming { m: 10, q: 3 }),
            Err(OracleError::TooLarge { .. })
        ));
        assert!(matches!(
            ExplicitGraph::new(vec![vec![1], vec![0], vec![]]),
            Err(OracleError::Disconnected)
        ));
    }

    #[test]
    fn round_trip_small_families() {
        let specs = [
            FamilySpec::Complete { n: 5 },
            FamilySpec::Cycle { n: 7 },
            FamilySpec::Cycle { n: 8 },
            FamilySpec::Hamming { m: 3, q: 3 },
            FamilySpec::Johnson { m: 7, q: 3 },
            FamilySpec::Odd { m: 4 },
        ];
        for spec in specs {
            let g = build_graph(&spec).unwrap();
            assert_eq!(verify_drg(&g).unwrap(), generate_family(&spec).unwrap(), "{spec}");
        }
    }

    #[test]
    fn edge_list_format() {
        let g = build_graph(&FamilySpec::Complete { n: 3 }).unwrap();
        assert_eq!(g.edge_list(), "0 1\n0 2\n1 2\n");
    }
}
