//! Hitting-time moments, cover and mixing bounds, and visit statistics.

use num_traits::Zero;

use crate::array::IntersectionArray;
use crate::error::{Error, Result};
use crate::potentials::{biggs_potentials, constant_c, GammaStatus};
use crate::rational::{int, to_f64, uint, MaybeExact, Real, Q};
use crate::spectral::SpectralData;

/// Hitting times and second moments indexed by distance `0..=D`.
#[derive(Debug, Clone, PartialEq)]
pub struct HittingTable {
    pub hitting: Vec<Q>,
    pub second_moment: Vec<Q>,
    pub variance: Vec<Q>,
    vertices: u64,
}

impl HittingTable {
    pub fn diameter(&self) -> usize {
        self.hitting.len() - 1
    }

    pub fn vertices(&self) -> u64 {
        self.vertices
    }

    /// Expected first-return-or-hit time at distance `d`, with `H+ = n` at distance 0.
    pub fn hitting_plus(&self, d: usize) -> Q {
        if d == 0 {
            uint(self.vertices)
        } else {
            self.hitting[d].clone()
        }
    }
}

/// `sum_{r >= j} k_r * weight(r)`.
fn tail_sum(arr: &IntersectionArray, j: usize, weight: impl Fn(usize) -> Q) -> Q {
    (j..=arr.diameter())
        .map(|r| uint(arr.sphere_size(r)) * weight(r))
        .fold(Q::zero(), |a, b| a + b)
}

/// `H_i` from the potentials and from the double sum
/// `k sum_{j<=i} (1/e_j) sum_{r>=j} k_r`; the two must agree exactly.
pub fn hitting_moments(arr: &IntersectionArray) -> Result<HittingTable> {
    let d = arr.diameter();
    let k = uint(arr.degree());
    let table = biggs_potentials(arr)?;
    let e = |j: usize| uint(arr.sphere_size(j) * arr.c(j));

    let mut hitting = vec![Q::zero()];
    for i in 1..=d {
        let step = &k * tail_sum(arr, i, |_| int(1)) / e(i);
        let next = &hitting[i - 1] + step;
        if &next != table.cumulative(i) {
            return Err(Error::Inconsistent(format!(
                "H_{i}: double sum {next} differs from Phi_{i} = {}",
                table.cumulative(i)
            )));
        }
        hitting.push(next);
    }

    let mut inner = Q::zero();
    let mut second_moment = vec![Q::zero()];
    for i in 1..=d {
        inner += tail_sum(arr, i, |r| hitting[r].clone()) / e(i);
        second_moment.push(int(2) * &k * &inner - &hitting[i]);
    }
    let variance = hitting.iter().zip(&second_moment).map(|(h, m2)| m2 - h * h).collect();
    Ok(HittingTable {
        hitting,
        second_moment,
        variance,
        vertices: arr.vertex_count(),
    })
}

fn m2_upper<R: Real>(c: R, n1: R) -> R {
    let one_c = R::from_int(1) + c;
    R::from_int(2) * one_c.clone() * one_c * n1.clone() * n1.clone() - n1
}

fn m2_lower<R: Real>(c: R, n1: R) -> R {
    R::from_int(2) * n1.clone() * n1.clone() - (R::from_int(1) + c) * n1
}

fn var_upper<R: Real>(c: R, n1: R) -> R {
    (R::from_int(1) + R::from_int(4) * c.clone() + R::from_int(2) * c.clone() * c) * n1.clone() * n1.clone() - n1
}

fn var_lower<R: Real>(c: R, n1: R) -> R {
    (R::from_int(1) - R::from_int(2) * c.clone() + c.clone() * c.clone()) * n1.clone() * n1.clone()
        - (R::from_int(1) + c) * n1
}

fn lift(c: &MaybeExact, n1: u64, exact: fn(Q, Q) -> Q, approx: fn(f64, f64) -> f64) -> MaybeExact {
    c.map(|x| exact(x, uint(n1)), |x| approx(x, n1 as f64))
}

/// Hitting and second-moment brackets in terms of `C(G,k)` and `n - 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentBounds {
    pub c: MaybeExact,
    pub hitting_lower: Q,
    pub hitting_upper: MaybeExact,
    pub m2_lower: MaybeExact,
    pub m2_upper: MaybeExact,
    pub var_lower: MaybeExact,
    pub var_upper: MaybeExact,
}

impl MomentBounds {
    /// Indices `i >= 1` at which some bracket fails.
    pub fn violations(&self, table: &HittingTable) -> Vec<(usize, &'static str)> {
        let mut out = Vec::new();
        for i in 1..=table.diameter() {
            if table.hitting[i] < self.hitting_lower || !self.hitting_upper.admits_below(&table.hitting[i]) {
                out.push((i, "hitting"));
            }
            let m2 = &table.second_moment[i];
            if !self.m2_lower.admits_above(m2) || !self.m2_upper.admits_below(m2) {
                out.push((i, "second moment"));
            }
            let var = &table.variance[i];
            if !self.var_lower.admits_above(var) || !self.var_upper.admits_below(var) {
                out.push((i, "variance"));
            }
        }
        out
    }
}

pub fn moment_bounds(arr: &IntersectionArray, gamma: GammaStatus) -> Result<MomentBounds> {
    let c = constant_c(arr, gamma)?.value;
    let n1 = arr.vertex_count() - 1;
    Ok(MomentBounds {
        hitting_lower: uint(n1),
        hitting_upper: c.map(|x| (int(1) + x) * uint(n1), |x| (1.0 + x) * n1 as f64),
        m2_lower: lift(&c, n1, m2_lower, m2_lower),
        m2_upper: lift(&c, n1, m2_upper, m2_upper),
        var_lower: lift(&c, n1, var_lower, var_lower),
        var_upper: lift(&c, n1, var_upper, var_upper),
        c,
    })
}

/// Matthews brackets and, for `k >= 3`, the closed-form cover-time bounds.
#[derive(Debug, Clone, PartialEq)]
pub struct CoverBounds {
    /// `1 + 1/2 + ... + 1/(n-1)`.
    pub harmonic: f64,
    pub matthews_lower: f64,
    pub matthews_upper: f64,
    /// `(n-1) log n`.
    pub lower: f64,
    /// `(n-1)(1+C)(1+log(n-1))`; absent when `k < 3`.
    pub upper: Option<f64>,
}

pub fn cover_bounds(arr: &IntersectionArray, gamma: GammaStatus) -> Result<CoverBounds> {
    let table = biggs_potentials(arr)?;
    let n = arr.vertex_count();
    let d = arr.diameter();
    let harmonic: f64 = (1..n).map(|j| 1.0 / j as f64).sum();
    let h_min = to_f64(table.cumulative(1));
    let h_max = to_f64(table.cumulative(d));
    let n1 = (n - 1) as f64;
    let upper = match constant_c(arr, gamma) {
        Ok(c) => Some(n1 * (1.0 + c.value.to_f64()) * (1.0 + n1.ln())),
        Err(Error::DegreeTooSmall(_)) => None,
        Err(e) => return Err(e),
    };
    Ok(CoverBounds {
        harmonic,
        matthews_lower: h_min * harmonic,
        matthews_upper: h_max * harmonic,
        lower: n1 * (n as f64).ln(),
        upper,
    })
}

/// `F(u) = sum_v H_uv`, `tau_0 = F/n` and the mixing-parameter bounds.
#[derive(Debug, Clone, PartialEq)]
pub struct MixingBounds {
    pub f: Q,
    pub tau0: Q,
    /// `(n-1)^2`.
    pub f_lower: Q,
    /// `(1+C)(n-1)^2`.
    pub f_upper: MaybeExact,
    pub f_in_bracket: bool,
    /// `(1+C)(n-1)^2 / n`, which bounds `tau_0`, `tau_2` and `tau_c`.
    pub tau0_bound: MaybeExact,
    pub tau1_bound: MaybeExact,
    pub tau2_bound: MaybeExact,
    pub tauc_bound: MaybeExact,
}

pub fn f_and_mixing(arr: &IntersectionArray, gamma: GammaStatus) -> Result<MixingBounds> {
    let c = constant_c(arr, gamma)?.value;
    let table = biggs_potentials(arr)?;
    let n = arr.vertex_count();
    let f = (1..=arr.diameter())
        .map(|j| uint(arr.sphere_size(j)) * table.cumulative(j))
        .fold(Q::zero(), |a, b| a + b);
    let sq = uint((n - 1) * (n - 1));
    let sq_f = ((n - 1) * (n - 1)) as f64;
    let f_upper = c.map(|x| (int(1) + x) * &sq, |x| (1.0 + x) * sq_f);
    let tau_bound = c.map(|x| (int(1) + x) * &sq / uint(n), |x| (1.0 + x) * sq_f / n as f64);
    let tau1_bound = tau_bound.map(|x| x * int(66), |x| x * 66.0);
    Ok(MixingBounds {
        f_in_bracket: f >= sq && f_upper.admits_below(&f),
        tau0: &f / uint(n),
        f,
        f_lower: sq.clone(),
        f_upper,
        tau0_bound: tau_bound.clone(),
        tau1_bound,
        tau2_bound: tau_bound.clone(),
        tauc_bound: tau_bound,
    })
}

/// Intersection numbers `p[h][i][j]`: vertices at distance `i` from `u` and `j`
/// from `v` when `d(u, v) = h`.
#[derive(Debug, Clone, PartialEq)]
pub struct IntersectionNumbers {
    p: Vec<Vec<Vec<u64>>>,
    /// Largest rounding residual seen while solving.
    residual: f64,
}

impl IntersectionNumbers {
    pub fn get(&self, h: usize, i: usize, j: usize) -> u64 {
        self.p[h][i][j]
    }

    pub fn diameter(&self) -> usize {
        self.p.len() - 1
    }

    pub fn residual(&self) -> f64 {
        self.residual
    }
}

/// Distance polynomials `v_0..v_D` evaluated at `x`.
pub fn distance_polynomials(arr: &IntersectionArray, x: f64) -> Vec<f64> {
    let d = arr.diameter();
    let mut v = vec![0.0; d + 1];
    v[0] = 1.0;
    if d >= 1 {
        v[1] = x;
    }
    for i in 1..d {
        v[i + 1] = ((x - arr.a(i) as f64) * v[i] - arr.b(i - 1) as f64 * v[i - 1]) / arr.c(i + 1) as f64;
    }
    v
}

fn solve_dense(mut a: Vec<Vec<f64>>, mut rhs: Vec<f64>) -> Result<Vec<f64>> {
    let n = rhs.len();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&x, &y| a[x][col].abs().total_cmp(&a[y][col].abs()))
            .unwrap_or(col);
        if a[pivot][col].abs() < 1e-300 {
            return Err(Error::Numerical("singular distance-polynomial system".into()));
        }
        a.swap(col, pivot);
        rhs.swap(col, pivot);
        for row in col + 1..n {
            let factor = a[row][col] / a[col][col];
            for c in col..n {
                a[row][c] -= factor * a[col][c];
            }
            rhs[row] -= factor * rhs[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let acc: f64 = (row + 1..n).map(|c| a[row][c] * x[c]).sum();
        x[row] = (rhs[row] - acc) / a[row][row];
    }
    Ok(x)
}

/// Solves `v_i(l_r) v_j(l_r) = sum_h p[h][i][j] v_h(l_r)` over the `D + 1`
/// eigenvalues and rounds; residuals above `1e-6` are a numerical failure.
pub fn intersection_numbers(arr: &IntersectionArray, spectral: &SpectralData) -> Result<IntersectionNumbers> {
    let d = arr.diameter();
    let size = d + 1;
    let values: Vec<Vec<f64>> = spectral
        .eigenvalues
        .iter()
        .map(|&x| distance_polynomials(arr, x))
        .collect();
    let mut p = vec![vec![vec![0u64; size]; size]; size];
    let mut worst: f64 = 0.0;
    for i in 0..size {
        for j in 0..size {
            let a: Vec<Vec<f64>> = values.clone();
            let rhs: Vec<f64> = values.iter().map(|v| v[i] * v[j]).collect();
            let solution = solve_dense(a, rhs)?;
            for (h, x) in solution.into_iter().enumerate() {
                let rounded = x.round();
                let err = (x - rounded).abs();
                worst = worst.max(err);
                if err >= 1e-6 || rounded < 0.0 {
                    return Err(Error::Numerical(format!(
                        "p[{h}][{i}][{j}] = {x} does not round to a nonnegative integer"
                    )));
                }
                p[h][i][j] = rounded as u64;
            }
        }
    }
    Ok(IntersectionNumbers { p, residual: worst })
}

/// Three distances `d(v,u)`, `d(w,u)`, `d(v,w)` among a start `v`, a tracked
/// vertex `w` and a target `u`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DistanceTriple {
    pub vu: usize,
    pub wu: usize,
    pub vw: usize,
}

/// Triangle inequalities among three pairwise distances, each within the diameter.
pub fn check_triangle(x: usize, y: usize, z: usize, diameter: usize) -> Result<()> {
    if x > diameter || y > diameter || z > diameter {
        return Err(Error::Distances(format!(
            "distances ({x}, {y}, {z}) exceed the diameter {diameter}"
        )));
    }
    if x > y + z || y > x + z || z > x + y {
        return Err(Error::Distances(format!(
            "distances ({x}, {y}, {z}) violate the triangle inequality"
        )));
    }
    // Two coincident points force the remaining two distances to agree.
    if (x == 0 && y != z) || (y == 0 && x != z) || (z == 0 && x != y) {
        return Err(Error::Distances(format!(
            "distances ({x}, {y}, {z}) are inconsistent with a repeated point"
        )));
    }
    Ok(())
}

impl DistanceTriple {
    pub fn new(vu: usize, wu: usize, vw: usize, diameter: usize) -> Result<Self> {
        if wu == 0 {
            return Err(Error::Distances("w must differ from u (d(w,u) >= 1)".into()));
        }
        check_triangle(vu, wu, vw, diameter)?;
        Ok(Self { vu, wu, vw })
    }

    pub fn distinct(&self) -> bool {
        self.vu >= 1 && self.wu >= 1 && self.vw >= 1
    }
}

/// Bracket verdicts for the approximate visit statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct VisitBrackets {
    pub p_visit: bool,
    pub expected: bool,
    pub variance: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VisitStatistics {
    /// `P(w is visited in (0, tau_u^+])`.
    pub p_visit: Q,
    /// Expected visits to `w` in `(0, tau_u^+]`.
    pub expected_visits: Q,
    pub visit_variance: Q,
    /// Present only for distinct triples on arrays with `k >= 3`.
    pub brackets: Option<VisitBrackets>,
}

pub fn visit_statistics(
    arr: &IntersectionArray,
    table: &HittingTable,
    triple: DistanceTriple,
    gamma: GammaStatus,
) -> Result<VisitStatistics> {
    let n = uint(table.vertices());
    let hp = |d: usize| table.hitting_plus(d);
    let (vu, wu, vw) = (hp(triple.vu), hp(triple.wu), hp(triple.vw));
    let core = &vu + &wu - &vw;
    let p_visit = &core / (int(2) * &wu);
    let expected_visits = &core / &n;
    let visit_variance = &core * (int(3) * &wu - &vu + &vw - &n) / (&n * &n);

    let brackets = if triple.distinct() && arr.degree() >= 3 {
        let c = constant_c(arr, gamma)?.value;
        let half = crate::rational::ratio(1, 2);
        let frac = crate::rational::ratio(arr.vertex_count() as i64 - 1, arr.vertex_count() as i64);
        let ff = frac.clone() * &frac;
        let (fq, ffq) = (frac.clone(), ff.clone());
        let (ff64, f64v) = (to_f64(&ff), to_f64(&frac));
        let p_lo = c.map(|x| &half - x / int(2), |x| 0.5 - x / 2.0);
        let p_hi = c.map(|x| &half + x / int(2), |x| 0.5 + x / 2.0);
        let e_lo = c.map(|x| (int(1) - x) * &fq, |x| (1.0 - x) * f64v);
        let e_hi = c.map(|x| (int(1) + int(2) * x) * &fq, |x| (1.0 + 2.0 * x) * f64v);
        let v_lo = c.map(
            |x| int(2) * (int(1) - &x) * (int(1) - &x) * &ffq,
            |x| 2.0 * (1.0 - x) * (1.0 - x) * ff64,
        );
        let v_hi = c.map(
            |x| int(2) * (int(1) + int(2) * &x) * (int(1) + int(2) * &x) * &ffq,
            |x| 2.0 * (1.0 + 2.0 * x) * (1.0 + 2.0 * x) * ff64,
        );
        Some(VisitBrackets {
            p_visit: p_lo.admits_above(&p_visit) && p_hi.admits_below(&p_visit),
            expected: e_lo.admits_above(&expected_visits) && e_hi.admits_below(&expected_visits),
            variance: v_lo.admits_above(&visit_variance) && v_hi.admits_below(&visit_variance),
        })
    } else {
        None
    };
    Ok(VisitStatistics {
        p_visit,
        expected_visits,
        visit_variance,
        brackets,
    })
}

/// Expected number of distinct vertices other than `u` visited in `(0, tau_u^+]`
/// by a walk from `v` with `d(v, u) = h`.
pub fn expected_distinct_visits(
    arr: &IntersectionArray,
    table: &HittingTable,
    numbers: &IntersectionNumbers,
    h: usize,
) -> Result<Q> {
    let d = arr.diameter();
    if h == 0 || h > d {
        return Err(Error::OutOfRange(format!("h = {h} must lie in 1..={d}")));
    }
    let mut total = Q::zero();
    for i in 1..=d {
        for j in 0..=d {
            let count = numbers.get(h, i, j);
            if count == 0 {
                continue;
            }
            let term = (table.hitting_plus(h) + table.hitting_plus(i) - table.hitting_plus(j))
                / (int(2) * table.hitting_plus(i));
            total += uint(count) * term;
        }
    }
    Ok(total)
}

/// `(n-1)(1/2 -+ C/2)` bracket for the distinct-visit count.
pub fn distinct_visits_bracket(arr: &IntersectionArray, gamma: GammaStatus) -> Result<(MaybeExact, MaybeExact)> {
    let c = constant_c(arr, gamma)?.value;
    let n1 = uint(arr.vertex_count() - 1);
    let n1f = (arr.vertex_count() - 1) as f64;
    let half = crate::rational::ratio(1, 2);
    Ok((
        c.map(|x| &n1 * (&half - x / int(2)), |x| n1f * (0.5 - x / 2.0)),
        c.map(|x| &n1 * (&half + x / int(2)), |x| n1f * (0.5 + x / 2.0)),
    ))
}

/// Positivity is only meaningful for `E_N` in the degenerate `w = v` case when `2 H_d > n`.
pub fn degenerate_expected_visits(table: &HittingTable, d: usize) -> Q {
    let n = uint(table.vertices());
    (int(2) * table.hitting_plus(d) - &n) / n
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::array::{generate_family, parse_array, FamilySpec, DODECAHEDRON, PETERSEN};
    use crate::rational::ratio;
    use crate::spectral::decompose;

    fn ints(values: &[i64]) -> Vec<Q> {
        values.iter().map(|&v| int(v)).collect()
    }

    #[test]
    fn petersen_moments() {
        let t = hitting_moments(&parse_array(PETERSEN).unwrap()).unwrap();
        assert_eq!(t.hitting, ints(&[0, 9, 12]));
        assert_eq!(t.second_moment, ints(&[0, 189, 258]));
        assert_eq!(t.variance, ints(&[0, 108, 114]));
    }

    #[test]
    fn k4_geometric_moments() {
        let t = hitting_moments(&generate_family(&FamilySpec::Complete { n: 4 }).unwrap()).unwrap();
        assert_eq!(t.hitting[1], int(3));
        assert_eq!(t.second_moment[1], int(15));
        assert_eq!(t.variance[1], int(6));
    }

    #[test]
    fn dodecahedron_hitting() {
        let t = hitting_moments(&parse_array(DODECAHEDRON).unwrap()).unwrap();
        assert_eq!(t.hitting, ints(&[0, 19, 27, 32, 34, 35]));
    }

    #[test]
    fn petersen_bounds_contain_moments() {
        let arr = parse_array(PETERSEN).unwrap();
        let t = hitting_moments(&arr).unwrap();
        let b = moment_bounds(&arr, GammaStatus::Unknown).unwrap();
        assert!(b.violations(&t).is_empty());
    }

    #[test]
    fn petersen_cover_bounds() {
        let b = cover_bounds(&parse_array(PETERSEN).unwrap(), GammaStatus::Unknown).unwrap();
        assert!((b.harmonic - 2.828_968_253_968_254).abs() < 1e-12);
        assert!((b.matthews_lower - 25.4607).abs() < 1e-4);
        assert!((b.matthews_upper - 33.9476).abs() < 1e-4);
        assert!(b.upper.is_some());
    }

    #[test]
    fn k2_cover_and_cycles() {
        let b = cover_bounds(
            &generate_family(&FamilySpec::Complete { n: 2 }).unwrap(),
            GammaStatus::Unknown,
        )
        .unwrap();
        assert_eq!(b.matthews_lower, 1.0);
        assert_eq!(b.matthews_upper, 1.0);
        let c = cover_bounds(
            &generate_family(&FamilySpec::Cycle { n: 7 }).unwrap(),
            GammaStatus::Unknown,
        )
        .unwrap();
        assert!(c.upper.is_none());
    }

    #[test]
    fn f_values() {
        let p = f_and_mixing(&parse_array(PETERSEN).unwrap(), GammaStatus::Unknown).unwrap();
        assert_eq!(p.f, int(99));
        assert_eq!(p.tau0, ratio(99, 10));
        assert!(p.f_in_bracket);
        for n in 4..10u64 {
            let k = f_and_mixing(
                &generate_family(&FamilySpec::Complete { n }).unwrap(),
                GammaStatus::Unknown,
            )
            .unwrap();
            assert_eq!(k.f, uint((n - 1) * (n - 1)));
        }
        let d = f_and_mixing(&parse_array(DODECAHEDRON).unwrap(), GammaStatus::Unknown).unwrap();
        assert_eq!(d.f, int(3 * 19 + 6 * 27 + 6 * 32 + 3 * 34 + 35));
        assert!(d.f_in_bracket);
    }

    #[test]
    fn petersen_intersection_numbers() {
        let arr = parse_array(PETERSEN).unwrap();
        let p = intersection_numbers(&arr, &decompose(&arr).unwrap()).unwrap();
        assert_eq!(p.get(1, 1, 1), 0);
        assert_eq!(p.get(2, 1, 1), 1);
        assert_eq!(p.get(0, 1, 1), 3);
        assert_eq!(p.get(1, 2, 2), 4);
        for h in 0..=2 {
            for j in 0..=2 {
                assert_eq!(p.get(h, 0, j), u64::from(j == h));
            }
        }
    }

    #[test]
    fn petersen_visits() {
        let arr = parse_array(PETERSEN).unwrap();
        let t = hitting_moments(&arr).unwrap();
        let s = visit_statistics(&arr, &t, DistanceTriple::new(1, 2, 1, 2).unwrap(), GammaStatus::Unknown).unwrap();
        assert_eq!(s.p_visit, ratio(1, 2));
        assert_eq!(s.expected_visits, ratio(6, 5));
        assert_eq!(s.visit_variance, ratio(78, 25));
        let b = s.brackets.unwrap();
        assert!(b.p_visit && b.expected && b.variance);

        let same = visit_statistics(&arr, &t, DistanceTriple::new(1, 1, 0, 2).unwrap(), GammaStatus::Unknown).unwrap();
        assert_eq!(same.p_visit, ratio(4, 9));
        assert!(same.brackets.is_none());
        assert_eq!(same.expected_visits, degenerate_expected_visits(&t, 1));
    }

    #[test]
    fn triple_errors() {
        assert!(DistanceTriple::new(1, 0, 1, 2).is_err());
        assert!(DistanceTriple::new(1, 3, 1, 2).is_err());
        assert!(DistanceTriple::new(2, 2, 5, 5).is_err());
        assert!(DistanceTriple::new(1, 2, 0, 2).is_err());
    }

    #[test]
    fn petersen_distinct_visits() {
        let arr = parse_array(PETERSEN).unwrap();
        let t = hitting_moments(&arr).unwrap();
        let p = intersection_numbers(&arr, &decompose(&arr).unwrap()).unwrap();
        assert_eq!(expected_distinct_visits(&arr, &t, &p, 1).unwrap(), ratio(65, 18));
        assert!(expected_distinct_visits(&arr, &t, &p, 0).is_err());
        assert!(expected_distinct_visits(&arr, &t, &p, 3).is_err());
    }

    #[test]
    fn complete_distinct_visits() {
        for n in 3..9i64 {
            let arr = generate_family(&FamilySpec::Complete { n: n as u64 }).unwrap();
            let t = hitting_moments(&arr).unwrap();
            let p = intersection_numbers(&arr, &decompose(&arr).unwrap()).unwrap();
            let expected = ratio(n - 2, 2) + ratio(n - 2, 2 * (n - 1));
            assert_eq!(expected_distinct_visits(&arr, &t, &p, 1).unwrap(), expected);
        }
    }
}
