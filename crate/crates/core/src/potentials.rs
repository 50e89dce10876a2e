//! Biggs potentials, effective resistances, the constant `C(G,k)` and the
//! per-instance checks of the resistance regularity inequalities.
//!
//! Everything here is exact: the equality cases (dodecahedron, Biggs-Smith)
//! are detected by rational equality, never by tolerance.

use num_traits::{Signed, Zero};

use crate::array::IntersectionArray;
use crate::error::{Error, Result};
use crate::rational::{int, ratio, sum, uint, MaybeExact, Q};

/// `phi_0..phi_{D-1}`, the partial sums `Phi_0..Phi_D` and the resistances `d_1..d_D`.
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialTable {
    phi: Vec<Q>,
    cumulative: Vec<Q>,
    resistance: Vec<Q>,
}

impl PotentialTable {
    pub fn diameter(&self) -> usize {
        self.phi.len()
    }

    pub fn phi(&self, i: usize) -> &Q {
        &self.phi[i]
    }

    pub fn phis(&self) -> &[Q] {
        &self.phi
    }

    /// `Phi_r = phi_0 + ... + phi_{r-1}`, with `Phi_0 = 0`.
    pub fn cumulative(&self, r: usize) -> &Q {
        &self.cumulative[r]
    }

    pub fn cumulatives(&self) -> &[Q] {
        &self.cumulative
    }

    /// Effective resistance between two vertices at distance `j >= 1`.
    pub fn resistance(&self, j: usize) -> &Q {
        &self.resistance[j - 1]
    }

    pub fn resistances(&self) -> &[Q] {
        &self.resistance
    }
}

/// `phi_i` from the explicit sum
/// `k (1/c_{i+1} + b_{i+1}/(c_{i+1} c_{i+2}) + ... + b_{i+1}..b_{D-1}/(c_{i+1}..c_D))`.
pub fn closed_form_phi(arr: &IntersectionArray, i: usize) -> Q {
    let d = arr.diameter();
    let mut term = ratio(1, arr.c(i + 1) as i64);
    let mut total = term.clone();
    for l in (i + 2)..=d {
        term = term * uint(arr.b(l - 1)) / uint(arr.c(l));
        total += &term;
    }
    total * uint(arr.degree())
}

/// `(k / e_i) * sum_{j >= i} k_j`, which equals `phi_{i-1}`.
pub fn tail_ratio_phi(arr: &IntersectionArray, i: usize) -> Q {
    let e_i = arr.sphere_size(i) * arr.c(i);
    let tail: u64 = (i..=arr.diameter()).map(|j| arr.sphere_size(j)).sum();
    uint(arr.degree()) * uint(tail) / uint(e_i)
}

/// Biggs potentials by the recursion `phi_0 = n - 1`, `b_i phi_i = c_i phi_{i-1} - k`,
/// cross-checked term by term against the closed form.
pub fn biggs_potentials(arr: &IntersectionArray) -> Result<PotentialTable> {
    let d = arr.diameter();
    let n = arr.vertex_count();
    let k = uint(arr.degree());
    let mut phi = Vec::with_capacity(d);
    phi.push(uint(n - 1));
    for i in 1..d {
        let next = (uint(arr.c(i)) * &phi[i - 1] - &k) / uint(arr.b(i));
        phi.push(next);
    }
    for (i, value) in phi.iter().enumerate() {
        let closed = closed_form_phi(arr, i);
        if &closed != value {
            return Err(Error::Inconsistent(format!(
                "phi_{i}: recursion gives {value}, closed form gives {closed}"
            )));
        }
        if arr.degree() >= 2 && !value.is_positive() {
            return Err(Error::Invalid(format!(
                "phi_{i} = {value} is not positive; the array is inconsistent"
            )));
        }
    }
    let mut cumulative = Vec::with_capacity(d + 1);
    cumulative.push(Q::zero());
    for value in &phi {
        let next = cumulative.last().cloned().unwrap_or_default() + value;
        cumulative.push(next);
    }
    let nk = uint(n) * &k;
    let resistance = cumulative[1..].iter().map(|big| int(2) * big / &nk).collect();
    Ok(PotentialTable {
        phi,
        cumulative,
        resistance,
    })
}

/// Membership in the exceptional class of graphs with small `b_1`. The class is
/// defined structurally, so it cannot be read off the array and is supplied by
/// the caller.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GammaStatus {
    InGamma,
    NotInGamma,
    #[default]
    Unknown,
}

impl std::str::FromStr for GammaStatus {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "in" => Ok(Self::InGamma),
            "out" => Ok(Self::NotInGamma),
            "unknown" => Ok(Self::Unknown),
            other => Err(Error::Syntax(format!(
                "gamma status must be in, out or unknown; got {other:?}"
            ))),
        }
    }
}

impl std::fmt::Display for GammaStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::InGamma => "in",
            Self::NotInGamma => "out",
            Self::Unknown => "unknown",
        })
    }
}

/// The constant `C(G,k)` together with whether the caller's Γ status forced
/// the conservative branch.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstantC {
    pub value: MaybeExact,
    /// Set when Γ membership was unknown and the larger in-Γ value was used.
    pub conservative: bool,
}

fn sqrt_branch(k: u64) -> f64 {
    (1.0 + std::f64::consts::SQRT_2) / (2.0 * (k as f64).sqrt())
}

/// Whether `16/(5k) > (1 + sqrt 2)/(2 sqrt k)`, decided without floats.
///
/// Squaring twice: `16/(5k) > (1+√2)/(2√k)` iff `t = 1024/(25k) - 3 > 2√2`,
/// iff `t > 0` and `t² > 8`. Equality is impossible since the right side is irrational.
fn rational_branch_dominates(k: u64) -> bool {
    let t = ratio(1024, 25 * k as i64) - int(3);
    t.is_positive() && &t * &t > int(8)
}

pub fn constant_c(arr: &IntersectionArray, gamma: GammaStatus) -> Result<ConstantC> {
    let k = arr.degree();
    if k <= 2 {
        return Err(Error::DegreeTooSmall(k));
    }
    let d = arr.diameter();
    let cap = ratio(94, 101);
    let (value, conservative) = match d {
        1 => (MaybeExact::exact(Q::zero()), false),
        2 => {
            if rational_branch_dominates(k) {
                (MaybeExact::exact(ratio(16, 5 * k as i64)), false)
            } else {
                (MaybeExact::irrational(sqrt_branch(k)), false)
            }
        }
        _ => {
            let numerator = match gamma {
                GammaStatus::NotInGamma => 4,
                GammaStatus::InGamma | GammaStatus::Unknown => 6,
            };
            let candidate = ratio(numerator, k as i64);
            (MaybeExact::exact(candidate.min(cap)), gamma == GammaStatus::Unknown)
        }
    };
    Ok(ConstantC { value, conservative })
}

/// Per-instance evaluation of the resistance regularity inequalities.
#[derive(Debug, Clone, PartialEq)]
pub struct RegularityReport {
    pub c: ConstantC,
    pub gamma: GammaStatus,
    /// `d_D / d_1 = Phi_D / phi_0`.
    pub ratio: Q,
    /// `ratio <= 1 + 94/101`.
    pub ratio_holds: bool,
    /// `ratio == 1 + 94/101`, the Biggs-Smith case.
    pub ratio_equality: bool,
    /// `ratio <= 1 + C(G,k)`.
    pub within_one_plus_c: bool,
    /// `phi_1 - (phi_2 + ... + phi_{D-1})`; `None` when `D < 2`.
    pub p1_slack: Option<Q>,
    pub p1_holds: bool,
    /// Zero slack, the dodecahedron case.
    pub p1_equality: bool,
    /// `(3m+3) phi_m - sum_{i > m} phi_i` for `0 <= m <= D-1`.
    pub tail_slacks: Vec<Q>,
    pub tail_holds: bool,
    /// `max_m (sum_{i > m} phi_i) / phi_m`, logged as evidence for a universal constant.
    pub tail_ratio_max: Q,
}

pub fn check_regularity(arr: &IntersectionArray, gamma: GammaStatus) -> Result<RegularityReport> {
    let c = constant_c(arr, gamma)?;
    let table = biggs_potentials(arr)?;
    let d = arr.diameter();
    let phi = table.phis();
    let ratio_value = table.cumulative(d) / &phi[0];
    let biggs_smith = int(1) + ratio(94, 101);
    let one_plus_c = c.value.map(|x| int(1) + x, |x| 1.0 + x);

    let p1_slack = (d >= 2).then(|| &phi[1] - sum(&phi[2..]));
    let (p1_holds, p1_equality) = match &p1_slack {
        Some(s) => (!s.is_negative(), s.is_zero()),
        None => (true, false),
    };

    let mut tail_slacks = Vec::with_capacity(d);
    let mut tail_ratio_max = Q::zero();
    for m in 0..d {
        let tail = sum(&phi[m + 1..]);
        tail_slacks.push(uint(3 * m as u64 + 3) * &phi[m] - &tail);
        let r = tail / &phi[m];
        if r > tail_ratio_max {
            tail_ratio_max = r;
        }
    }
    let tail_holds = tail_slacks.iter().all(|s| s.is_positive());

    Ok(RegularityReport {
        ratio_holds: ratio_value <= biggs_smith,
        ratio_equality: ratio_value == biggs_smith,
        within_one_plus_c: one_plus_c.admits_below(&ratio_value),
        ratio: ratio_value,
        c,
        gamma,
        p1_slack,
        p1_holds,
        p1_equality,
        tail_slacks,
        tail_holds,
        tail_ratio_max,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::array::{generate_family, parse_array, FamilySpec, BIGGS_SMITH, DODECAHEDRON, PETERSEN};
    use crate::rational::ratio as r;

    fn ints(values: &[i64]) -> Vec<Q> {
        values.iter().map(|&v| int(v)).collect()
    }

    #[test]
    fn petersen_potentials() {
        let t = biggs_potentials(&parse_array(PETERSEN).unwrap()).unwrap();
        assert_eq!(t.phis(), ints(&[9, 3]).as_slice());
        assert_eq!(t.resistance(1), &r(3, 5));
        assert_eq!(t.resistance(2), &r(4, 5));
    }

    #[test]
    fn dodecahedron_potentials() {
        let t = biggs_potentials(&parse_array(DODECAHEDRON).unwrap()).unwrap();
        assert_eq!(t.phis(), ints(&[19, 8, 5, 2, 1]).as_slice());
    }

    #[test]
    fn biggs_smith_potentials() {
        let t = biggs_potentials(&parse_array(BIGGS_SMITH).unwrap()).unwrap();
        assert_eq!(t.phis(), ints(&[101, 49, 23, 10, 7, 4, 1]).as_slice());
        assert_eq!(t.cumulative(7), &int(195));
        assert_eq!(t.resistance(7) / t.resistance(1), int(1) + r(94, 101));
    }

    #[test]
    fn cycle_resistance_is_series_parallel() {
        for n in 3..=12u64 {
            let arr = generate_family(&FamilySpec::Cycle { n }).unwrap();
            let t = biggs_potentials(&arr).unwrap();
            for j in 1..=arr.diameter() {
                let expected = r((j as i64) * (n as i64 - j as i64), n as i64);
                assert_eq!(t.resistance(j), &expected, "C_{n}, j={j}");
            }
        }
    }

    #[test]
    fn petersen_constant() {
        let c = constant_c(&parse_array(PETERSEN).unwrap(), GammaStatus::Unknown).unwrap();
        assert_eq!(c.value.as_exact(), Some(&r(16, 15)));
        assert!(!c.conservative);
    }

    #[test]
    fn constant_branches() {
        let h = generate_family(&FamilySpec::Hamming { m: 7, q: 2 }).unwrap();
        let out = constant_c(&h, GammaStatus::NotInGamma).unwrap();
        assert_eq!(out.value.as_exact(), Some(&r(4, 7)));
        let unknown = constant_c(&h, GammaStatus::Unknown).unwrap();
        assert_eq!(unknown.value.as_exact(), Some(&r(6, 7)));
        assert!(unknown.conservative);
        // k = 3, D > 2: 4/3 exceeds the 94/101 cap.
        let dodec = constant_c(&parse_array(DODECAHEDRON).unwrap(), GammaStatus::NotInGamma).unwrap();
        assert_eq!(dodec.value.as_exact(), Some(&r(94, 101)));
        let k4 = generate_family(&FamilySpec::Complete { n: 4 }).unwrap();
        assert_eq!(
            constant_c(&k4, GammaStatus::Unknown).unwrap().value.as_exact(),
            Some(&int(0))
        );
        let k3 = generate_family(&FamilySpec::Complete { n: 3 }).unwrap();
        assert_eq!(constant_c(&k3, GammaStatus::Unknown), Err(Error::DegreeTooSmall(2)));
    }

    #[test]
    fn diameter_two_branch_matches_floats() {
        for k in 3..200u64 {
            let exact = rational_branch_dominates(k);
            let floats = 16.0 / (5.0 * k as f64) > sqrt_branch(k);
            assert_eq!(exact, floats, "k = {k}");
        }
        // Crossover sits between k = 7 and k = 8.
        assert!(rational_branch_dominates(7));
        assert!(!rational_branch_dominates(8));
    }

    #[test]
    fn regularity_equality_cases() {
        let bs = check_regularity(&parse_array(BIGGS_SMITH).unwrap(), GammaStatus::Unknown).unwrap();
        assert!(bs.ratio_equality && bs.ratio_holds);
        assert_eq!(bs.p1_slack, Some(int(4)));
        assert!(!bs.p1_equality);

        let dd = check_regularity(&parse_array(DODECAHEDRON).unwrap(), GammaStatus::Unknown).unwrap();
        assert!(dd.p1_equality && dd.p1_holds);
        assert!(!dd.ratio_equality);

        let p = check_regularity(&parse_array(PETERSEN).unwrap(), GammaStatus::Unknown).unwrap();
        assert_eq!(p.ratio, r(4, 3));
        assert!(p.ratio_holds && !p.ratio_equality && p.within_one_plus_c);
        assert!(p.p1_holds && !p.p1_equality && p.tail_holds);
    }

    #[test]
    fn tail_identity_and_closed_form() {
        for text in [PETERSEN, DODECAHEDRON, BIGGS_SMITH, "7,6,5,4,3,2,1;1,2,3,4,5,6,7"] {
            let arr = parse_array(text).unwrap();
            let t = biggs_potentials(&arr).unwrap();
            for i in 1..=arr.diameter() {
                assert_eq!(&tail_ratio_phi(&arr, i), t.phi(i - 1));
            }
        }
    }
}
