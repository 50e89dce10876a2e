//! Agreement checks between array-side formulas and the explicit-graph oracles.

use std::collections::HashMap;

use num_traits::{ToPrimitive, Zero};

use drg_walk_core::array::{generate_family, FamilySpec};
use drg_walk_core::harmonic::{
    clique_measure, clique_queries, greens_function, harnack_clique, harnack_two_point, three_point_measure,
    two_point_measure, two_point_queries, GreensQuery, TwoPointSolution,
};
use drg_walk_core::potentials::{check_regularity, tail_ratio_phi};
use drg_walk_core::rational::{int, ratio, render, to_f64, uint};
use drg_walk_core::spectral::{
    decompose, generating_derivative_at_one, generating_function, generating_series, ProjectedChain, SpectralData,
};
use drg_walk_core::walk::{
    cover_bounds, expected_distinct_visits, f_and_mixing, hitting_moments, intersection_numbers, moment_bounds,
    visit_statistics, DistanceTriple, HittingTable,
};
use drg_walk_core::{biggs_potentials, GammaStatus, IntersectionArray, PotentialTable, Q};

use crate::error::{OracleError, Result};
use crate::evolution::{closed_walks, projected_evolution};
use crate::exact::{
    check_hitting, check_second_moment, exact_absorbing, exact_hitting, exact_hitting_m2, first_defect, Absorbing,
};
use crate::graph::{build_graph, verify_drg, ExplicitGraph};
use crate::resistance::exact_resistance;
use crate::simulate::{simulate, Mode};

/// Tolerance for float oracles against exact array-side values.
pub const FLOAT_TOL: f64 = 1e-10;
/// Finite-difference tolerance for the generating-function derivative.
pub const DERIVATIVE_TOL: f64 = 1e-3;
pub const SERIES_TOL: f64 = 1e-9;
pub const SERIES_TERMS: usize = 15;
/// Steps over which full-graph and projected evolutions must coincide.
pub const HORIZON: usize = 20;
/// Standard errors allowed between a simulated mean and its exact value.
pub const Z_SCORE: f64 = 4.0;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
    /// Reported but not counted, e.g. Harnack constants outside the standing assumptions.
    pub informational: bool,
}

impl Check {
    fn new(name: &str, pass: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            pass,
            detail: detail.into(),
            informational: false,
        }
    }

    fn info(name: &str, pass: bool, detail: impl Into<String>) -> Self {
        Self {
            informational: true,
            ..Self::new(name, pass, detail)
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub array: IntersectionArray,
    pub graph_built: bool,
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass || c.informational)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.pass && !c.informational).collect()
    }
}

#[derive(Debug, Clone, Copy)]
pub struct VerifyOptions {
    pub seed: u64,
    /// Monte Carlo samples per statistic; 0 skips simulation.
    pub samples: u64,
    pub gamma: GammaStatus,
    /// Graphs up to this size also get independent elimination solves.
    pub solve_limit: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            seed: 0,
            samples: 100_000,
            gamma: GammaStatus::Unknown,
            solve_limit: 100,
        }
    }
}

const DESK_SCALE_NOTE: &str = "Gumbel cover-time convergence and cutoff asymptotics are limits in the graph size \
and are not checked; finite mixing curves and cover-time brackets stand in for them";

/// Array-side checks only.
pub fn verify_array(arr: &IntersectionArray, opts: &VerifyOptions) -> Result<VerifyReport> {
    let mut report = VerifyReport {
        array: arr.clone(),
        graph_built: false,
        checks: Vec::new(),
        notes: vec![DESK_SCALE_NOTE.into()],
    };
    report.checks.extend(array_checks(arr, opts.gamma)?);
    Ok(report)
}

/// Array-side checks plus, when the family has a construction, every oracle comparison.
pub fn verify_family(spec: &FamilySpec, opts: &VerifyOptions) -> Result<VerifyReport> {
    let arr = generate_family(spec)?;
    let mut report = verify_array(&arr, opts)?;
    match build_graph(spec) {
        Ok(g) => {
            report.graph_built = true;
            report.checks.extend(graph_checks(&arr, &g, opts)?);
        }
        Err(e @ (OracleError::Unsupported(_) | OracleError::TooLarge { .. })) => {
            report.notes.push(e.to_string());
        }
        Err(e) => return Err(e),
    }
    Ok(report)
}

fn array_checks(arr: &IntersectionArray, gamma: GammaStatus) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let d = arr.diameter();
    let k = arr.degree();
    let table = biggs_potentials(arr)?;
    let tail_identity = (1..=d).all(|i| &tail_ratio_phi(arr, i) == table.phi(i - 1));
    out.push(Check::new(
        "potentials",
        tail_identity,
        format!(
            "phi = [{}], recursion, closed form and tail identity agree",
            join(table.phis())
        ),
    ));

    let hitting = hitting_moments(arr)?;
    if k >= 3 {
        let reg = check_regularity(arr, gamma)?;
        out.push(Check::new(
            "resistance-ratio",
            reg.ratio_holds && reg.within_one_plus_c,
            format!(
                "d_D/d_1 = {}, equality case: {}",
                render(&reg.ratio),
                reg.ratio_equality
            ),
        ));
        out.push(Check::new(
            "phi1-dominates-tail",
            reg.p1_holds,
            match &reg.p1_slack {
                Some(s) => format!("slack {}, equality case: {}", render(s), reg.p1_equality),
                None => "not applicable".into(),
            },
        ));
        out.push(Check::new(
            "tail-sums",
            reg.tail_holds,
            format!("max tail ratio {}", render(&reg.tail_ratio_max)),
        ));
        let bounds = moment_bounds(arr, gamma)?;
        let violations = bounds.violations(&hitting);
        out.push(Check::new(
            "moment-bounds",
            violations.is_empty(),
            format!("violations: {violations:?}"),
        ));
    }

    let spectral = decompose(arr)?;
    out.push(spectral_identities(arr, &spectral));

    if k >= 3 {
        let mixing = f_and_mixing(arr, gamma)?;
        let relax = spectral.relaxation_time().unwrap_or(0.0);
        let laziness = if arr.is_bipartite() { ratio(1, 2) } else { Q::zero() };
        let chain = ProjectedChain::new(arr, laziness)?;
        let t1 = chain.mixing_time(1.0 / (2.0 * std::f64::consts::E))?;
        let t1_ok = mixing.tau1_bound.admits_below(&uint(t1));
        let tau0_ok = mixing.tau0_bound.admits_below(&mixing.tau0);
        let relax_ok = relax <= mixing.tau2_bound.to_f64() * (1.0 + 1e-12);
        out.push(Check::new(
            "mixing-brackets",
            mixing.f_in_bracket && tau0_ok && relax_ok && t1_ok,
            format!(
                "F = {}, tau0 = {}, relaxation {:.6}, t_mix(1/2e) = {t1}",
                render(&mixing.f),
                render(&mixing.tau0),
                relax
            ),
        ));
    }

    out.push(genfun_checks(arr, &spectral, &hitting)?);

    let mut greens_ok = true;
    for alpha in 1..=d {
        for r in 0..alpha {
            greens_ok &= greens_function(arr, GreensQuery { alpha, r }).is_ok();
        }
    }
    out.push(Check::new(
        "greens-consistency",
        greens_ok,
        "closed form equals the shell route",
    ));

    if k >= 3 && d >= 2 {
        out.push(harnack_sweep(arr, &table, gamma)?);
    }
    Ok(out)
}

fn join(values: &[Q]) -> String {
    values.iter().map(render).collect::<Vec<_>>().join(", ")
}

fn spectral_identities(arr: &IntersectionArray, s: &SpectralData) -> Check {
    let n = arr.vertex_count() as f64;
    let k = arr.degree() as f64;
    let m: Vec<f64> = s.multiplicities.iter().map(|&x| x as f64).collect();
    let total: f64 = m.iter().sum();
    let first: f64 = m.iter().zip(&s.eigenvalues).map(|(m, l)| m * l).sum();
    let second: f64 = m.iter().zip(&s.eigenvalues).map(|(m, l)| m * l * l).sum();
    let pass = total == n && first.abs() < 1e-6 && (second - n * k).abs() < 1e-6 && s.multiplicity_residual < 1e-6;
    Check::new(
        "spectrum",
        pass,
        format!(
            "eigenvalues {:?}, multiplicities {:?}, residual {:.2e}, sum m = {total}, sum m l = {first:.2e}, sum m l^2 = {second}",
            s.eigenvalues, s.multiplicities, s.multiplicity_residual
        ),
    )
}

fn genfun_checks(arr: &IntersectionArray, s: &SpectralData, hitting: &HittingTable) -> Result<Check> {
    let chain = ProjectedChain::simple(arr);
    let mut worst_derivative: f64 = 0.0;
    let mut worst_series: f64 = 0.0;
    let mut at_one = true;
    for i in 1..=arr.diameter() {
        at_one &= generating_function(arr, s, i, 1.0)? == 1.0;
        let h = to_f64(&hitting.hitting[i]);
        let fd = generating_derivative_at_one(arr, s, i, 1e-6)?;
        worst_derivative = worst_derivative.max((fd - h).abs());
        let series = generating_series(arr, s, i, SERIES_TERMS - 1)?;
        for (a, b) in series.iter().zip(chain.first_passage(i, SERIES_TERMS - 1)) {
            worst_series = worst_series.max((a - to_f64(&b)).abs());
        }
    }
    Ok(Check::new(
        "generating-function",
        at_one && worst_derivative < DERIVATIVE_TOL && worst_series < SERIES_TOL,
        format!("GF(1) = 1: {at_one}; |GF'(1) - H| <= {worst_derivative:.2e}; series error <= {worst_series:.2e}"),
    ))
}

fn harnack_sweep(arr: &IntersectionArray, table: &PotentialTable, gamma: GammaStatus) -> Result<Check> {
    let d = arr.diameter();
    let mut violations = 0usize;
    let mut cases = 0usize;
    let mut standard = true;
    for h in 1..=d {
        for query in two_point_queries(h, d) {
            let c = harnack_two_point(arr, table, gamma, h, (&int(1), &int(0)), query)?;
            standard &= c.standard;
            cases += 1;
            violations += usize::from(!c.pass);
        }
    }
    for q in 2..=3 {
        for dist in 1..=d {
            for query in clique_queries(q, dist, d) {
                for j in 0..q {
                    let mut values = vec![int(0); q];
                    values[j] = int(1);
                    let c = harnack_clique(arr, table, gamma, dist, &values, &query)?;
                    cases += 1;
                    violations += usize::from(!c.pass);
                }
            }
        }
    }
    let detail = format!("{cases} cases, {violations} violations");
    Ok(if standard {
        Check::new("harnack", violations == 0, detail)
    } else {
        Check::info(
            "harnack",
            violations == 0,
            format!("{detail}; constants adjusted outside D > 2, not in Γ"),
        )
    })
}

/// Everything that needs explicit vertices.
fn graph_checks(arr: &IntersectionArray, g: &ExplicitGraph, opts: &VerifyOptions) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let recovered = verify_drg(g)?;
    out.push(Check::new(
        "round-trip",
        &recovered == arr,
        format!("explicit graph has array {recovered}"),
    ));
    let table = biggs_potentials(arr)?;
    let hitting = hitting_moments(arr)?;
    let dist0 = g.bfs(0);
    let d = arr.diameter();
    let reps: Vec<usize> = (0..=d)
        .map(|j| dist0.iter().position(|&x| x == j).expect("sphere"))
        .collect();

    let mut worst: f64 = 0.0;
    for j in 1..=d {
        let r = exact_resistance(g, 0, reps[j])?;
        worst = worst.max((r - to_f64(table.resistance(j))).abs());
    }
    out.push(Check::new(
        "resistance",
        worst < FLOAT_TOL,
        format!("Laplacian solve vs 2 Phi_j/(nk): max error {worst:.2e}"),
    ));

    out.push(hitting_check(g, &dist0, &hitting, opts.solve_limit)?);
    out.push(intersection_check(arr, g, &dist0, &reps)?);
    out.push(spectrum_check(arr, g)?);
    out.push(projection_check(arr, g)?);
    out.extend(harmonic_checks(arr, g, &table, &dist0, &reps, opts.solve_limit)?);
    if opts.samples > 0 {
        out.extend(simulation_checks(arr, g, &hitting, opts)?);
    }
    Ok(out)
}

fn hitting_check(g: &ExplicitGraph, dist0: &[usize], hitting: &HittingTable, limit: usize) -> Result<Check> {
    let h: Vec<Q> = dist0.iter().map(|&j| hitting.hitting[j].clone()).collect();
    let m2: Vec<Q> = dist0.iter().map(|&j| hitting.second_moment[j].clone()).collect();
    let residual_ok = check_hitting(g, 0, &h).is_none() && check_second_moment(g, 0, &h, &m2).is_none();
    let mut detail = format!("exact residual of H and M2 systems is zero: {residual_ok}");
    let mut pass = residual_ok;
    if g.vertex_count() <= limit {
        let solved = exact_hitting(g, 0)? == h && exact_hitting_m2(g, 0)? == m2;
        detail.push_str(&format!("; elimination solve agrees: {solved}"));
        pass &= solved;
    }
    Ok(Check::new("hitting-moments", pass, detail))
}

fn intersection_check(arr: &IntersectionArray, g: &ExplicitGraph, dist0: &[usize], reps: &[usize]) -> Result<Check> {
    let d = arr.diameter();
    let numbers = intersection_numbers(arr, &decompose(arr)?)?;
    let mut pass = true;
    for h in 1..=d {
        let dv = g.bfs(reps[h]);
        let mut counts = vec![vec![0u64; d + 1]; d + 1];
        for z in 0..g.vertex_count() {
            counts[dist0[z]][dv[z]] += 1;
        }
        for (i, row) in counts.iter().enumerate() {
            for (j, &c) in row.iter().enumerate() {
                pass &= numbers.get(h, i, j) == c;
            }
        }
    }
    Ok(Check::new(
        "intersection-numbers",
        pass,
        format!(
            "distance-polynomial solve vs BFS counts, rounding residual {:.2e}",
            numbers.residual()
        ),
    ))
}

/// `n * (closed walks of length j at a vertex) = sum_r m_r lambda_r^j` for `j <= 2D + 1`.
fn spectrum_check(arr: &IntersectionArray, g: &ExplicitGraph) -> Result<Check> {
    let s = decompose(arr)?;
    let n = g.vertex_count() as f64;
    let walks = closed_walks(g, 0, 2 * arr.diameter() + 1);
    let mut worst: f64 = 0.0;
    for (j, w) in walks.iter().enumerate() {
        let exact = w.to_f64().unwrap_or(f64::INFINITY) * n;
        let terms: Vec<f64> = s
            .multiplicities
            .iter()
            .zip(&s.eigenvalues)
            .map(|(&m, &l)| m as f64 * l.powi(j as i32))
            .collect();
        // Odd moments cancel, so measure the error against the size of the terms.
        let scale: f64 = terms.iter().map(|t| t.abs()).sum();
        worst = worst.max((terms.iter().sum::<f64>() - exact).abs() / scale.max(1.0));
    }
    Ok(Check::new(
        "spectrum-vs-walks",
        worst < 1e-8,
        format!("spectral moments vs closed-walk counts: max scaled error {worst:.2e}"),
    ))
}

fn projection_check(arr: &IntersectionArray, g: &ExplicitGraph) -> Result<Check> {
    let mut pass = true;
    for beta in [Q::zero(), ratio(1, 2)] {
        let full = projected_evolution(g, 0, &beta, HORIZON)?;
        let chain = ProjectedChain::new(arr, beta)?;
        for (t, row) in full.iter().enumerate() {
            pass &= row == &chain.evolve(t as u64);
        }
    }
    Ok(Check::new(
        "projection",
        pass,
        format!("full-graph and projected distributions agree exactly for t <= {HORIZON}, laziness 0 and 1/2"),
    ))
}

fn harmonic_checks(
    arr: &IntersectionArray,
    g: &ExplicitGraph,
    table: &PotentialTable,
    dist0: &[usize],
    reps: &[usize],
    limit: usize,
) -> Result<Vec<Check>> {
    let d = arr.diameter();
    let n = g.vertex_count();
    let small = n <= limit;
    let mut out = Vec::new();

    // Two-point measures and the shell function.
    let mut two_ok = true;
    for h in 1..=d {
        let v = reps[h];
        let dv = g.bfs(v);
        let f: Vec<Q> = (0..n)
            .map(|z| two_point_measure(table, h, dist0[z], dv[z]))
            .collect::<std::result::Result<_, _>>()?;
        two_ok &= boundary_harmonic(g, &f, &[0, v], &[int(1), int(0)], small)?;
    }
    out.push(Check::new(
        "harmonic-two-point",
        two_ok,
        "harmonic off {u, v} with boundary values 1, 0",
    ));

    let v = reps[1];
    let dv = g.bfs(v);
    let shell = TwoPointSolution::new(table, 1)?;
    let f: Vec<Q> = (0..n)
        .map(|z| shell.shell_value(dist0[z], dv[z]))
        .collect::<std::result::Result<_, _>>()?;
    let mut skip = vec![false; n];
    skip[0] = true;
    skip[v] = true;
    let nk = uint(arr.vertex_count() * arr.degree());
    let flow = |z: usize| crate::exact::net_flow(g, &f, z);
    let shell_ok = first_defect(g, &f, &skip, |_| Q::zero()).is_none() && flow(0) == -nk.clone() && flow(v) == nk;
    out.push(Check::new(
        "shell-function",
        shell_ok,
        format!("harmonic off {{u, v}}; net flow at u is {}", render(&flow(0))),
    ));

    // Three-point measures, one boundary per realized distance pattern.
    let mut patterns: HashMap<(usize, usize, usize), (usize, usize)> = HashMap::new();
    for &v in &reps[1..] {
        let dv = g.bfs(v);
        for w in 0..n {
            if w != 0 && w != v {
                patterns.entry((dist0[v], dist0[w], dv[w])).or_insert((v, w));
            }
        }
    }
    let mut keys: Vec<_> = patterns.keys().copied().collect();
    keys.sort_unstable();
    let mut three_ok = true;
    for key in &keys {
        let (v, w) = patterns[key];
        let (dv, dw) = (g.bfs(v), g.bfs(w));
        let mut memo: HashMap<(usize, usize, usize), Q> = HashMap::new();
        let mut f = Vec::with_capacity(n);
        for z in 0..n {
            let q = (dist0[z], dv[z], dw[z]);
            if let std::collections::hash_map::Entry::Vacant(slot) = memo.entry(q) {
                slot.insert(three_point_measure(table, *key, q)?);
            }
            f.push(memo[&q].clone());
        }
        three_ok &= boundary_harmonic(g, &f, &[0, v, w], &[int(1), int(0), int(0)], small)?;
    }
    out.push(Check::new(
        "harmonic-three-point",
        three_ok,
        format!("{} distance patterns", keys.len()),
    ));

    // Clique measures on greedily found distance-d cliques.
    let mut clique_ok = true;
    let mut tried = 0;
    for dist in 1..=d {
        let mut clique = vec![0usize];
        let mut rows = vec![dist0.to_vec()];
        for x in 1..n {
            if clique.len() == 4 {
                break;
            }
            if rows.iter().all(|r| r[x] == dist) {
                clique.push(x);
                rows.push(g.bfs(x));
            }
        }
        for q in 2..=clique.len() {
            tried += 1;
            let f: Vec<Q> = (0..n)
                .map(|z| {
                    let others: Vec<usize> = rows[1..q].iter().map(|r| r[z]).collect();
                    clique_measure(table, dist, rows[0][z], &others)
                })
                .collect::<std::result::Result<_, _>>()?;
            let mut values = vec![int(0); q];
            values[0] = int(1);
            clique_ok &= boundary_harmonic(g, &f, &clique[..q], &values, small)?;
        }
    }
    out.push(Check::new("harmonic-clique", clique_ok, format!("{tried} cliques")));

    // Green's functions for every spherical boundary around vertex 0.
    let mut greens_ok = true;
    for alpha in 1..=d {
        let values: Vec<Q> = (0..alpha)
            .map(|r| greens_function(arr, GreensQuery { alpha, r }).map(|v| v.value))
            .collect::<std::result::Result<_, _>>()?;
        let f: Vec<Q> = dist0
            .iter()
            .map(|&r| values.get(r).cloned().unwrap_or_else(Q::zero))
            .collect();
        let sphere: Vec<bool> = dist0.iter().map(|&r| r == alpha).collect();
        let mut skip = sphere.clone();
        skip[0] = false;
        greens_ok &= sphere.iter().zip(&f).all(|(&b, v)| !b || v.is_zero());
        greens_ok &= first_defect(g, &f, &skip, |z| if z == 0 { int(1) } else { Q::zero() }).is_none();
        if small {
            let absorbing: Vec<usize> = (0..n).filter(|&x| sphere[x]).collect();
            for (r, value) in values.iter().enumerate() {
                let visits = exact_absorbing(g, &absorbing, Absorbing::Visits { target: reps[r] })?;
                greens_ok &= &visits[0] == value;
            }
        }
    }
    out.push(Check::new(
        "greens-function",
        greens_ok,
        if small {
            "unit source at u, harmonic elsewhere, equals expected-visit solve"
        } else {
            "unit source at u, harmonic elsewhere"
        },
    ));
    Ok(out)
}

/// Boundary values match, the function is harmonic elsewhere, and on small
/// graphs it equals the absorbing-chain solve.
fn boundary_harmonic(g: &ExplicitGraph, f: &[Q], boundary: &[usize], values: &[Q], solve: bool) -> Result<bool> {
    let mut skip = vec![false; g.vertex_count()];
    let mut ok = true;
    for (&b, v) in boundary.iter().zip(values) {
        skip[b] = true;
        ok &= &f[b] == v;
    }
    ok &= first_defect(g, f, &skip, |_| Q::zero()).is_none();
    if solve && boundary.len() < g.vertex_count() {
        ok &= exact_absorbing(g, boundary, Absorbing::Probabilities(values))? == f;
    }
    Ok(ok)
}

fn simulation_checks(
    arr: &IntersectionArray,
    g: &ExplicitGraph,
    hitting: &HittingTable,
    opts: &VerifyOptions,
) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let (samples, seed) = (opts.samples, opts.seed);
    let v = g.neighbors(0)[0];

    let s = simulate(g, Mode::Hitting { start: v, target: 0 }, samples, seed)?;
    let want = to_f64(&hitting.hitting[1]);
    out.push(Check::new(
        "simulated-hitting",
        s.summary.within(want, Z_SCORE),
        format!("mean {:.4} ± {:.4} vs H_1 = {want}", s.summary.mean, s.summary.stderr),
    ));

    let cover = cover_bounds(arr, opts.gamma)?;
    let s = simulate(g, Mode::Cover { start: 0 }, samples, seed.wrapping_add(1))?;
    out.push(Check::new(
        "simulated-cover",
        cover.matthews_lower <= s.summary.mean && s.summary.mean <= cover.matthews_upper,
        format!(
            "mean {:.4} ± {:.4} in Matthews bracket [{:.4}, {:.4}]",
            s.summary.mean, s.summary.stderr, cover.matthews_lower, cover.matthews_upper
        ),
    ));

    // Triple (d(v,u), d(w,u), d(v,w)) = (1, 2, 1), or (1, 1, 1) on complete graphs.
    let du = g.bfs(0);
    let target_wu = if arr.diameter() >= 2 { 2 } else { 1 };
    if let Some(&w) = g.neighbors(v).iter().find(|&&w| w != 0 && du[w] == target_wu) {
        let triple = DistanceTriple::new(1, target_wu, 1, arr.diameter())?;
        let exact = visit_statistics(arr, hitting, triple, opts.gamma)?;
        let s = simulate(
            g,
            Mode::Visits {
                start: v,
                tracked: w,
                target: 0,
            },
            samples,
            seed.wrapping_add(2),
        )?;
        let p = s.visited.expect("visits mode reports the indicator");
        let (p_want, e_want) = (to_f64(&exact.p_visit), to_f64(&exact.expected_visits));
        out.push(Check::new(
            "simulated-visits",
            p.within(p_want, Z_SCORE) && s.summary.within(e_want, Z_SCORE),
            format!(
                "P_V {:.4} ± {:.4} vs {}, E_N {:.4} ± {:.4} vs {}",
                p.mean,
                p.stderr,
                render(&exact.p_visit),
                s.summary.mean,
                s.summary.stderr,
                render(&exact.expected_visits)
            ),
        ));
    }

    let numbers = intersection_numbers(arr, &decompose(arr)?)?;
    let m = expected_distinct_visits(arr, hitting, &numbers, 1)?;
    let s = simulate(g, Mode::Distinct { start: v, target: 0 }, samples, seed.wrapping_add(3))?;
    out.push(Check::new(
        "simulated-distinct",
        s.summary.within(to_f64(&m), Z_SCORE),
        format!(
            "mean {:.4} ± {:.4} vs M = {}",
            s.summary.mean,
            s.summary.stderr,
            render(&m)
        ),
    ));
    Ok(out)
}
