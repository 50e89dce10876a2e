//! Harmonic measure for two-point, three-point and clique boundaries, Green's
//! functions for spherical boundaries, and Harnack-type deviation checks.
//!
//! All functions work in distance coordinates. Queries are validated only by
//! triangle inequalities, so a pattern that no actual pair of vertices realizes
//! still produces a well-defined ("formal") value.

use num_traits::{Signed, Zero};

use crate::array::IntersectionArray;
use crate::error::{Error, Result};
use crate::potentials::{constant_c, GammaStatus, PotentialTable};
use crate::rational::{abs, int, ratio, uint, MaybeExact, Q};
use crate::walk::check_triangle;

/// The two-point potential `z -> Phi_{d(v,z)} - Phi_{d(u,z)}` for boundary `{u, v}`.
#[derive(Debug, Clone, Copy)]
pub struct TwoPointSolution<'a> {
    table: &'a PotentialTable,
    h: usize,
}

impl<'a> TwoPointSolution<'a> {
    pub fn new(table: &'a PotentialTable, h: usize) -> Result<Self> {
        let d = table.diameter();
        if h == 0 || h > d {
            return Err(Error::Distances(format!("boundary distance {h} must lie in 1..={d}")));
        }
        Ok(Self { table, h })
    }

    pub fn value(&self, d_uz: usize, d_vz: usize) -> Result<Q> {
        check_triangle(self.h, d_uz, d_vz, self.table.diameter())?;
        Ok(self.table.cumulative(d_vz) - self.table.cumulative(d_uz))
    }

    /// Shell labelling for adjacent boundary points: `0` when `d(u,z) = d(v,z)`,
    /// `phi_i` when `z` is at distance `i` from `u` and `i + 1` from `v`, and
    /// `-phi_i` in the mirrored case.
    pub fn shell_value(&self, d_uz: usize, d_vz: usize) -> Result<Q> {
        if self.h != 1 {
            return Err(Error::Distances("shell labels need adjacent boundary points".into()));
        }
        check_triangle(1, d_uz, d_vz, self.table.diameter())?;
        Ok(if d_uz == d_vz {
            Q::zero()
        } else if d_vz == d_uz + 1 {
            self.table.phi(d_uz).clone()
        } else {
            -self.table.phi(d_vz).clone()
        })
    }
}

/// `m_u(z) = 1/2 + (Phi_{vz} - Phi_{uz}) / (2 Phi_{uv})`: probability that a walk
/// from `z` reaches `u` before `v`.
pub fn two_point_measure(table: &PotentialTable, h: usize, d_uz: usize, d_vz: usize) -> Result<Q> {
    let diff = TwoPointSolution::new(table, h)?.value(d_uz, d_vz)?;
    Ok(ratio(1, 2) + diff / (int(2) * table.cumulative(h)))
}

/// Harmonic measure of `u` for the boundary `{u, v, w}`.
///
/// `pairwise` is `(d(u,v), d(u,w), d(v,w))`, `query` is `(d(u,z), d(v,z), d(w,z))`.
pub fn three_point_measure(
    table: &PotentialTable,
    pairwise: (usize, usize, usize),
    query: (usize, usize, usize),
) -> Result<Q> {
    let dia = table.diameter();
    let (uv, uw, vw) = pairwise;
    let (uz, vz, wz) = query;
    if uv == 0 || uw == 0 || vw == 0 {
        return Err(Error::Distances("boundary points must be distinct".into()));
    }
    check_triangle(uv, uw, vw, dia)?;
    check_triangle(uv, uz, vz, dia)?;
    check_triangle(uw, uz, wz, dia)?;
    check_triangle(vw, vz, wz, dia)?;
    let p = |d: usize| table.cumulative(d).clone();
    let (p_uv, p_uw, p_vw) = (p(uv), p(uw), p(vw));
    let numerator =
        (&p_vw + &p_uv - &p_uw) * p(wz) + (&p_vw - &p_uv + &p_uw) * p(vz) + (-&p_vw + &p_uv + &p_uw) * &p_vw
            - int(2) * &p_vw * p(uz);
    let denominator =
        int(2) * (&p_uw * &p_uv + &p_uv * &p_vw + &p_uw * &p_vw) - (&p_uw * &p_uw + &p_uv * &p_uv + &p_vw * &p_vw);
    if denominator.is_zero() {
        return Err(Error::Inconsistent(format!(
            "three-point denominator vanishes for pairwise distances {pairwise:?}"
        )));
    }
    Ok(numerator / denominator)
}

/// Harmonic measure of `u` for a distance-`d` clique `{u, v_2, ..., v_q}`.
///
/// `others` holds `d(v_j, z)` for the `q - 1` other boundary points.
pub fn clique_measure(table: &PotentialTable, d: usize, d_uz: usize, others: &[usize]) -> Result<Q> {
    let dia = table.diameter();
    let q = others.len() + 1;
    if q < 2 {
        return Err(Error::Distances("a clique boundary needs q >= 2 points".into()));
    }
    if d == 0 || d > dia {
        return Err(Error::Distances(format!("clique distance {d} must lie in 1..={dia}")));
    }
    for (i, &x) in others.iter().enumerate() {
        check_triangle(d, d_uz, x, dia)?;
        for &y in &others[i + 1..] {
            check_triangle(d, x, y, dia)?;
        }
    }
    let spread = others
        .iter()
        .map(|&x| table.cumulative(x).clone())
        .fold(Q::zero(), |a, b| a + b)
        - uint(q as u64 - 1) * table.cumulative(d_uz);
    Ok(ratio(1, q as i64) + spread / (uint(q as u64) * table.cumulative(d)))
}

/// Boundary radius `alpha` and query radius `r` for a spherical-boundary Green's function.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GreensQuery {
    pub alpha: usize,
    pub r: usize,
}

impl GreensQuery {
    pub fn new(alpha: usize, r: usize, diameter: usize) -> Result<Self> {
        if alpha == 0 || alpha > diameter {
            return Err(Error::OutOfRange(format!("alpha = {alpha} must lie in 1..={diameter}")));
        }
        if r >= alpha {
            return Err(Error::OutOfRange(format!("r = {r} must be below alpha = {alpha}")));
        }
        Ok(Self { alpha, r })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GreensValue {
    /// Expected visits to one vertex at distance `r` before the sphere of radius `alpha`.
    pub value: Q,
    /// Expected visits of the projected chain to shell `r`.
    pub shell_visits: Q,
    /// Probability that the projected chain from `r + 1` returns to `r` before `alpha`.
    pub return_probability: Q,
}

/// `rho_l = (c_{r+1} ... c_l) / (b_{r+1} ... b_l)` for `l = r..alpha-1`, with `rho_r = 1`.
fn scale_ratios(arr: &IntersectionArray, q: GreensQuery) -> Vec<Q> {
    let mut out = vec![int(1)];
    for l in q.r + 1..q.alpha {
        let next = out.last().cloned().unwrap_or_else(|| int(1)) * uint(arr.c(l)) / uint(arr.b(l));
        out.push(next);
    }
    out
}

/// Green's function for the sphere `{x : d(u,x) = alpha}`, evaluated at distance `r`:
/// `k (1 + S_r) / (b_r k_r)` with `S_r = sum_{l=r+1}^{alpha-1} prod_{t=r+1}^{l} c_t / b_t`.
pub fn greens_function(arr: &IntersectionArray, q: GreensQuery) -> Result<GreensValue> {
    let q = GreensQuery::new(q.alpha, q.r, arr.diameter())?;
    let k = uint(arr.degree());
    let b_r = uint(arr.b(q.r));
    let rho = scale_ratios(arr, q);
    let total = rho.iter().fold(Q::zero(), |a, b| a + b);
    let tail = &total - int(1);
    let value = &k * (int(1) + &tail) / (&b_r * uint(arr.sphere_size(q.r)));

    // Gambler's ruin on the projected chain, computed separately.
    let return_probability = &tail / &total;
    let shell_visits = &k / (&b_r * (int(1) - &return_probability));
    let from_shell = &shell_visits / uint(arr.sphere_size(q.r));
    if from_shell != value {
        return Err(Error::Inconsistent(format!(
            "Green's function: closed form {value} differs from shell route {from_shell}"
        )));
    }
    Ok(GreensValue {
        value,
        shell_visits,
        return_probability,
    })
}

/// The same closed form with the ratio products oriented as `b/c`. Kept only to
/// document that this orientation disagrees with the expected-visit oracle.
pub fn greens_function_b_over_c(arr: &IntersectionArray, q: GreensQuery) -> Result<Q> {
    let q = GreensQuery::new(q.alpha, q.r, arr.diameter())?;
    let mut term = int(1);
    let mut tail = Q::zero();
    for l in q.r + 1..q.alpha {
        term = term * uint(arr.b(l)) / uint(arr.c(l));
        tail += &term;
    }
    Ok(uint(arr.degree()) * (int(1) + tail) / (uint(arr.b(q.r)) * uint(arr.sphere_size(q.r))))
}

/// Outcome of a Harnack-type deviation check.
#[derive(Debug, Clone, PartialEq)]
pub struct HarnackCheck {
    /// `|h(z) - average of the boundary values|`.
    pub deviation: Q,
    /// Degree form of the bound, e.g. `2 |h(u) - h(v)| / k`.
    pub bound: MaybeExact,
    /// The sharper potential form, e.g. `|h(u) - h(v)| phi_1 / phi_0`.
    pub potential_bound: Q,
    pub pass: bool,
    /// Every query distance is at least 2, so both bounds were halved.
    pub halved: bool,
    /// `false` when `D <= 2` or the graph may lie in Γ; the bound then uses the
    /// matching `b_1` lower bound instead of `b_1 >= k/2`.
    pub standard: bool,
}

/// Upper bound on `phi_1 / phi_0` implied by the `b_1` lower bounds.
fn potential_ratio_bound(arr: &IntersectionArray, gamma: GammaStatus) -> Result<(MaybeExact, bool)> {
    let k = arr.degree();
    let d = arr.diameter();
    match d {
        1 => Ok((MaybeExact::exact(Q::zero()), false)),
        2 => Ok((constant_c(arr, gamma)?.value, false)),
        _ => match gamma {
            GammaStatus::NotInGamma => Ok((MaybeExact::exact(ratio(2, k as i64)), true)),
            _ => Ok((MaybeExact::exact(ratio(3, k as i64)), false)),
        },
    }
}

fn phi_ratio(table: &PotentialTable) -> Q {
    if table.diameter() >= 2 {
        table.phi(1) / table.phi(0)
    } else {
        Q::zero()
    }
}

/// Two-point Harnack check for boundary values `(h(u), h(v))` at a non-boundary
/// point `z` with `d(u,z) = d_uz`, `d(v,z) = d_vz`.
pub fn harnack_two_point(
    arr: &IntersectionArray,
    table: &PotentialTable,
    gamma: GammaStatus,
    h: usize,
    values: (&Q, &Q),
    query: (usize, usize),
) -> Result<HarnackCheck> {
    if arr.degree() < 3 {
        return Err(Error::DegreeTooSmall(arr.degree()));
    }
    let (d_uz, d_vz) = query;
    if d_uz == 0 || d_vz == 0 {
        return Err(Error::Distances("z must not be a boundary point".into()));
    }
    let (hu, hv) = values;
    let m_u = two_point_measure(table, h, d_uz, d_vz)?;
    let m_v = int(1) - &m_u;
    let hz = hu * &m_u + hv * m_v;
    let deviation = abs(&(hz - (hu + hv) / int(2)));
    let spread = abs(&(hu - hv));
    let halved = d_uz >= 2 && d_vz >= 2;
    let factor = if halved { ratio(1, 2) } else { int(1) };
    let (rho, standard) = potential_ratio_bound(arr, gamma)?;
    let scale = &spread * &factor;
    let bound = rho.map(|x| x * &scale, |x| x * crate::rational::to_f64(&scale));
    let potential_bound = &spread * phi_ratio(table) * &factor;
    Ok(HarnackCheck {
        pass: bound.admits_below(&deviation),
        deviation,
        bound,
        potential_bound,
        halved,
        standard,
    })
}

/// Clique Harnack check: `values[j] = h(v_j)` on a distance-`d` clique and
/// `query[j] = d(z, v_j)`.
pub fn harnack_clique(
    arr: &IntersectionArray,
    table: &PotentialTable,
    gamma: GammaStatus,
    d: usize,
    values: &[Q],
    query: &[usize],
) -> Result<HarnackCheck> {
    if arr.degree() < 3 {
        return Err(Error::DegreeTooSmall(arr.degree()));
    }
    let q = values.len();
    if q < 2 || query.len() != q {
        return Err(Error::Distances(format!(
            "need q >= 2 boundary values and matching query distances, got {} and {}",
            q,
            query.len()
        )));
    }
    if query.contains(&0) {
        return Err(Error::Distances("z must not be a boundary point".into()));
    }
    let mut hz = Q::zero();
    for j in 0..q {
        let others: Vec<usize> = (0..q).filter(|&i| i != j).map(|i| query[i]).collect();
        hz += &values[j] * clique_measure(table, d, query[j], &others)?;
    }
    let qq = uint(q as u64);
    let mean = values.iter().fold(Q::zero(), |a, b| a + b) / &qq;
    let deviation = abs(&(hz - mean));
    let mass = values.iter().fold(Q::zero(), |a, b| a + abs(b));
    let halved = query.iter().all(|&x| x >= 2);
    let factor = if halved { ratio(1, 2) } else { int(1) };
    let (rho, standard) = potential_ratio_bound(arr, gamma)?;
    // 2 rho (q-1)/q sum |h(v_j)|; with rho = 2/k this is (4/k)((q-1)/q) sum |h|.
    let scale = int(2) * (&qq - int(1)) / &qq * &mass * &factor;
    let bound = rho.map(|x| x * &scale, |x| x * crate::rational::to_f64(&scale));
    let potential_bound = &scale * phi_ratio(table);
    Ok(HarnackCheck {
        pass: bound.admits_below(&deviation),
        deviation,
        bound,
        potential_bound,
        halved,
        standard,
    })
}

/// Every triangle-consistent `(d(u,z), d(v,z))` with `z` off the boundary.
pub fn two_point_queries(h: usize, diameter: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for x in 1..=diameter {
        for y in 1..=diameter {
            if check_triangle(h, x, y, diameter).is_ok() {
                out.push((x, y));
            }
        }
    }
    out
}

/// Every triangle-consistent query tuple `(d(z, v_1), ..., d(z, v_q))` for a
/// distance-`d` clique, with `z` off the boundary.
pub fn clique_queries(q: usize, d: usize, diameter: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = vec![1usize; q];
    loop {
        let consistent =
            (0..q).all(|i| (i + 1..q).all(|j| check_triangle(d, current[i], current[j], diameter).is_ok()));
        if consistent {
            out.push(current.clone());
        }
        let mut pos = 0;
        loop {
            if pos == q {
                return out;
            }
            current[pos] += 1;
            if current[pos] <= diameter {
                break;
            }
            current[pos] = 1;
            pos += 1;
        }
    }
}

/// Deviations are never negative; used by property tests.
pub fn is_valid_measure(value: &Q) -> bool {
    !value.is_negative() && value <= &int(1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::array::{generate_family, parse_array, FamilySpec, DODECAHEDRON, PETERSEN};
    use crate::potentials::biggs_potentials;

    fn petersen() -> (IntersectionArray, PotentialTable) {
        let arr = parse_array(PETERSEN).unwrap();
        let table = biggs_potentials(&arr).unwrap();
        (arr, table)
    }

    #[test]
    fn two_point_examples() {
        let (_, t) = petersen();
        assert_eq!(two_point_measure(&t, 1, 1, 2).unwrap(), ratio(2, 3));
        assert_eq!(two_point_measure(&t, 2, 0, 2).unwrap(), int(1));
        assert_eq!(two_point_measure(&t, 2, 2, 0).unwrap(), int(0));
        assert_eq!(two_point_measure(&t, 2, 1, 1).unwrap(), ratio(1, 2));
        assert!(two_point_measure(&t, 1, 0, 2).is_err());
        assert!(two_point_measure(&t, 0, 1, 1).is_err());
    }

    #[test]
    fn shell_labels_match_potential_difference() {
        let arr = parse_array(DODECAHEDRON).unwrap();
        let t = biggs_potentials(&arr).unwrap();
        let s = TwoPointSolution::new(&t, 1).unwrap();
        assert_eq!(s.shell_value(0, 1).unwrap(), int(19));
        assert_eq!(s.shell_value(1, 0).unwrap(), int(-19));
        for (x, y) in two_point_queries(1, 5).into_iter().chain([(0, 1), (1, 0)]) {
            assert_eq!(s.shell_value(x, y).unwrap(), s.value(x, y).unwrap());
        }
    }

    #[test]
    fn three_point_examples() {
        let (_, t) = petersen();
        assert_eq!(three_point_measure(&t, (2, 2, 2), (1, 2, 2)).unwrap(), ratio(1, 2));
        assert_eq!(three_point_measure(&t, (2, 2, 2), (0, 2, 2)).unwrap(), int(1));
        assert_eq!(three_point_measure(&t, (2, 2, 2), (2, 0, 2)).unwrap(), int(0));
        assert_eq!(three_point_measure(&t, (2, 2, 2), (2, 2, 0)).unwrap(), int(0));
        assert!(three_point_measure(&t, (1, 2, 1), (2, 2, 2)).is_ok());
        assert_eq!(three_point_measure(&t, (2, 2, 2), (2, 2, 2)).unwrap(), ratio(1, 3));
        assert!(three_point_measure(&t, (1, 1, 0), (1, 1, 1)).is_err());
    }

    #[test]
    fn three_point_measures_sum_to_one() {
        let (_, t) = petersen();
        for pw in [(1, 2, 2), (2, 2, 2), (1, 1, 1)] {
            for z in [(1, 1, 2), (2, 2, 1), (1, 2, 2), (2, 1, 2)] {
                let (uv, uw, vw) = pw;
                let (uz, vz, wz) = z;
                let Ok(mu) = three_point_measure(&t, (uv, uw, vw), (uz, vz, wz)) else {
                    continue;
                };
                let mv = three_point_measure(&t, (uv, vw, uw), (vz, uz, wz)).unwrap();
                let mw = three_point_measure(&t, (uw, vw, uv), (wz, uz, vz)).unwrap();
                assert_eq!(mu + mv + mw, int(1));
            }
        }
    }

    #[test]
    fn clique_examples() {
        let (_, t) = petersen();
        assert_eq!(clique_measure(&t, 2, 1, &[2]).unwrap(), ratio(5, 8));
        assert_eq!(clique_measure(&t, 2, 0, &[2, 2]).unwrap(), int(1));
        assert_eq!(clique_measure(&t, 2, 2, &[0, 2]).unwrap(), int(0));
        for h in 1..=2 {
            for (x, y) in two_point_queries(h, 2) {
                assert_eq!(
                    clique_measure(&t, h, x, &[y]).unwrap(),
                    two_point_measure(&t, h, x, y).unwrap()
                );
            }
        }
        assert!(clique_measure(&t, 2, 1, &[]).is_err());
    }

    #[test]
    fn greens_examples() {
        let (arr, _) = petersen();
        let g0 = greens_function(&arr, GreensQuery { alpha: 2, r: 0 }).unwrap();
        assert_eq!(g0.value, ratio(3, 2));
        assert_eq!(
            greens_function(&arr, GreensQuery { alpha: 2, r: 1 }).unwrap().value,
            ratio(1, 2)
        );
        assert_eq!(
            greens_function_b_over_c(&arr, GreensQuery { alpha: 2, r: 0 }).unwrap(),
            int(3)
        );
        assert!(greens_function(&arr, GreensQuery { alpha: 2, r: 2 }).is_err());
        for text in [PETERSEN, DODECAHEDRON, "7,6,5,4,3,2,1;1,2,3,4,5,6,7"] {
            let a = parse_array(text).unwrap();
            assert_eq!(
                greens_function(&a, GreensQuery { alpha: 1, r: 0 }).unwrap().value,
                int(1)
            );
        }
    }

    #[test]
    fn harnack_on_hamming_7_2() {
        let arr = generate_family(&FamilySpec::Hamming { m: 7, q: 2 }).unwrap();
        let t = biggs_potentials(&arr).unwrap();
        for h in 1..=7 {
            for query in two_point_queries(h, 7) {
                let c = harnack_two_point(&arr, &t, GammaStatus::NotInGamma, h, (&int(1), &int(0)), query).unwrap();
                assert!(c.pass, "h={h} {query:?}");
                assert!(c.deviation <= ratio(2, 7));
                assert!(c.standard);
            }
        }
    }

    #[test]
    fn harnack_equal_boundary_values() {
        let (arr, t) = petersen();
        let c = harnack_two_point(&arr, &t, GammaStatus::Unknown, 1, (&int(5), &int(5)), (1, 2)).unwrap();
        assert_eq!(c.deviation, int(0));
        assert!(c.pass);
    }

    #[test]
    fn harnack_dodecahedron_far_points() {
        let arr = parse_array(DODECAHEDRON).unwrap();
        let t = biggs_potentials(&arr).unwrap();
        for h in 1..=5 {
            for (x, y) in two_point_queries(h, 5) {
                let c = harnack_two_point(&arr, &t, GammaStatus::NotInGamma, h, (&int(1), &int(-1)), (x, y)).unwrap();
                if x >= 2 && y >= 2 {
                    assert!(c.halved);
                    assert!(c.deviation <= ratio(8, 38) * int(2));
                }
                assert!(c.deviation <= c.potential_bound);
                assert!(c.pass);
            }
        }
    }

    #[test]
    fn query_enumeration() {
        assert_eq!(two_point_queries(1, 2), vec![(1, 1), (1, 2), (2, 1), (2, 2)]);
        let qs = clique_queries(3, 2, 2);
        assert!(qs.contains(&vec![1, 1, 1]));
        assert!(qs.iter().all(|q| q.iter().all(|&x| (1..=2).contains(&x))));
    }
}
