//! Acceptance criteria: one PASS/FAIL line each, nonzero exit if any fails.

use rayon::prelude::*;

use drg_walk_core::array::{generate_family, FamilySpec};
use drg_walk_core::harmonic::{
    clique_queries, greens_function, greens_function_b_over_c, harnack_clique, harnack_two_point, two_point_queries,
    GreensQuery,
};
use drg_walk_core::rational::{abs, int, ratio, to_f64, uint};
use drg_walk_core::spectral::{decompose, generating_function, ProjectedChain};
use drg_walk_core::walk::{
    cover_bounds, expected_distinct_visits, hitting_moments, intersection_numbers, visit_statistics, DistanceTriple,
};
use drg_walk_core::{biggs_potentials, Error, GammaStatus, Q};
use drg_walk_oracle::exact::{exact_absorbing, exact_hitting, exact_hitting_m2, Absorbing};
use drg_walk_oracle::graph::build_graph;
use drg_walk_oracle::resistance::exact_resistance;
use drg_walk_oracle::simulate::{simulate, Mode};
use drg_walk_oracle::verify::{verify_family, VerifyOptions, VerifyReport, Z_SCORE};

type Verdict = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn sweep_specs() -> Vec<FamilySpec> {
    let mut specs = Vec::new();
    for n in 2..=12 {
        specs.push(FamilySpec::Complete { n });
    }
    for m in 1..=5 {
        for q in 2..=4 {
            specs.push(FamilySpec::Hamming { m, q });
        }
    }
    for m in 2..=10 {
        for q in 1..=5 {
            if 2 * q <= m {
                specs.push(FamilySpec::Johnson { m, q });
            }
        }
    }
    for m in 2..=6 {
        specs.push(FamilySpec::Odd { m });
    }
    specs.push(FamilySpec::Dodecahedron);
    specs.push(FamilySpec::BiggsSmith);
    specs
}

struct Sweep {
    reports: Vec<(FamilySpec, VerifyReport)>,
}

impl Sweep {
    fn run() -> Self {
        let opts = VerifyOptions {
            samples: 0,
            ..VerifyOptions::default()
        };
        let reports = sweep_specs()
            .into_par_iter()
            .map(|spec| {
                let report = verify_family(&spec, &opts).unwrap_or_else(|e| panic!("{spec}: {e}"));
                (spec, report)
            })
            .collect();
        Self { reports }
    }

    /// Failures among the named checks; a check absent from a report is skipped.
    fn failures(&self, names: &[&str]) -> Vec<String> {
        let mut out = Vec::new();
        for (spec, report) in &self.reports {
            for c in &report.checks {
                if names.contains(&c.name.as_str()) && !c.pass {
                    out.push(format!("{spec}/{}: {}", c.name, c.detail));
                }
            }
        }
        out
    }

    fn count(&self, name: &str) -> usize {
        self.reports
            .iter()
            .filter(|(_, r)| r.checks.iter().any(|c| c.name == name))
            .count()
    }

    fn verdict(&self, names: &[&str]) -> Verdict {
        let failures = self.failures(names);
        if failures.is_empty() {
            let counts: Vec<String> = names.iter().map(|n| format!("{n} x{}", self.count(n))).collect();
            Ok(counts.join(", "))
        } else {
            Err(failures.join("; "))
        }
    }
}

fn criterion_1() -> Verdict {
    let arr = generate_family(&FamilySpec::BiggsSmith).map_err(|e| e.to_string())?;
    let table = biggs_potentials(&arr).map_err(|e| e.to_string())?;
    let want: Vec<Q> = [101, 49, 23, 10, 7, 4, 1].iter().map(|&x| int(x)).collect();
    ensure(table.phis() == want.as_slice(), format!("phi = {:?}", table.phis()))?;
    let r = table.resistance(7) / table.resistance(1);
    ensure(r == int(1) + ratio(94, 101), format!("d_7/d_1 = {r}"))?;
    Ok(format!("phi = (101, 49, 23, 10, 7, 4, 1), d_D/d_1 = {r}"))
}

fn criterion_2() -> Verdict {
    let arr = generate_family(&FamilySpec::Dodecahedron).map_err(|e| e.to_string())?;
    let table = biggs_potentials(&arr).map_err(|e| e.to_string())?;
    let tail = table.phi(2) + table.phi(3) + table.phi(4);
    ensure(
        table.phi(1) == &int(8) && tail == int(8),
        format!("phi_1 = {}, tail = {tail}", table.phi(1)),
    )?;
    Ok("phi_2 + phi_3 + phi_4 = phi_1 = 8".into())
}

fn criterion_3() -> Verdict {
    let spec = FamilySpec::Petersen;
    let arr = generate_family(&spec).map_err(|e| e.to_string())?;
    let table = biggs_potentials(&arr).map_err(|e| e.to_string())?;
    let moments = hitting_moments(&arr).map_err(|e| e.to_string())?;
    ensure(table.resistances() == [ratio(3, 5), ratio(4, 5)], "resistances")?;
    ensure(moments.hitting[1..] == [int(9), int(12)], "H")?;
    ensure(moments.second_moment[1..] == [int(189), int(258)], "M2")?;
    let g = build_graph(&spec).map_err(|e| e.to_string())?;
    let dist = g.bfs(0);
    let h = exact_hitting(&g, 0).map_err(|e| e.to_string())?;
    let m2 = exact_hitting_m2(&g, 0).map_err(|e| e.to_string())?;
    for x in 0..g.vertex_count() {
        ensure(h[x] == moments.hitting[dist[x]], format!("oracle H at {x}"))?;
        ensure(m2[x] == moments.second_moment[dist[x]], format!("oracle M2 at {x}"))?;
    }
    let mut worst: f64 = 0.0;
    for j in 1..=2 {
        let x = g.vertex_at_distance(0, j).expect("sphere");
        let r = exact_resistance(&g, 0, x).map_err(|e| e.to_string())?;
        worst = worst.max((r - to_f64(table.resistance(j))).abs());
    }
    ensure(worst < 1e-10, format!("Laplacian error {worst:e}"))?;
    Ok(format!("exact oracle equal, Laplacian error {worst:.1e}"))
}

fn criterion_4(sweep: &Sweep) -> Verdict {
    sweep.verdict(&[
        "resistance-ratio",
        "phi1-dominates-tail",
        "tail-sums",
        "moment-bounds",
        "mixing-brackets",
    ])
}

fn criterion_5(sweep: &Sweep) -> Verdict {
    let arr = generate_family(&FamilySpec::Petersen).map_err(|e| e.to_string())?;
    let s = decompose(&arr).map_err(|e| e.to_string())?;
    let close = s
        .eigenvalues
        .iter()
        .zip([3.0, 1.0, -2.0])
        .all(|(a, b)| (a - b).abs() < 1e-9);
    ensure(
        close && s.multiplicities == [1, 5, 4],
        format!("{:?} {:?}", s.eigenvalues, s.multiplicities),
    )?;
    ensure(s.multiplicity_residual < 1e-6, "residual")?;
    sweep
        .verdict(&["spectrum"])
        .map(|v| format!("Petersen (3, 1, -2) x (1, 5, 4); {v}"))
}

fn criterion_6(sweep: &Sweep) -> Verdict {
    // The sweep covers GF(1), GF'(1) and the first 15 series coefficients on every array.
    let mut names = Vec::new();
    for spec in [FamilySpec::Petersen, FamilySpec::Hamming { m: 3, q: 2 }] {
        let (_, report) = sweep
            .reports
            .iter()
            .find(|(s, _)| generate_family(s).ok() == generate_family(&spec).ok())
            .ok_or_else(|| format!("{spec} missing from the sweep"))?;
        let c = report
            .checks
            .iter()
            .find(|c| c.name == "generating-function")
            .ok_or("no check")?;
        ensure(c.pass, format!("{spec}: {}", c.detail))?;
        let arr = generate_family(&spec).map_err(|e| e.to_string())?;
        let s = decompose(&arr).map_err(|e| e.to_string())?;
        for i in 1..=arr.diameter() {
            ensure(
                generating_function(&arr, &s, i, 1.0).map_err(|e| e.to_string())? == 1.0,
                "GF(1)",
            )?;
        }
        names.push(spec.to_string());
    }
    sweep
        .verdict(&["generating-function"])
        .map(|v| format!("{v}; series checked on {}", names.join(", ")))
}

fn criterion_7() -> Verdict {
    let petersen = generate_family(&FamilySpec::Petersen).map_err(|e| e.to_string())?;
    let values: Vec<Q> = (0..2)
        .map(|r| greens_function(&petersen, GreensQuery::new(2, r, 2)?).map(|g| g.value))
        .collect::<Result<_, Error>>()
        .map_err(|e| e.to_string())?;
    ensure(
        values == [ratio(3, 2), ratio(1, 2)],
        format!("Petersen alpha = 2: {values:?}"),
    )?;
    let printed = greens_function_b_over_c(&petersen, GreensQuery::new(2, 0, 2).unwrap()).map_err(|e| e.to_string())?;
    ensure(printed == int(3), format!("printed form gives {printed}"))?;

    let specs = [
        FamilySpec::Petersen,
        FamilySpec::Dodecahedron,
        FamilySpec::Hamming { m: 3, q: 2 },
        FamilySpec::Johnson { m: 5, q: 2 },
    ];
    let mut compared = 0;
    for spec in specs {
        let arr = generate_family(&spec).map_err(|e| e.to_string())?;
        let g = build_graph(&spec).map_err(|e| e.to_string())?;
        let dist = g.bfs(0);
        for alpha in 1..=arr.diameter() {
            let sphere: Vec<usize> = (0..g.vertex_count()).filter(|&x| dist[x] == alpha).collect();
            for r in 0..alpha {
                let target = g.vertex_at_distance(0, r).expect("sphere");
                let visits = exact_absorbing(&g, &sphere, Absorbing::Visits { target }).map_err(|e| e.to_string())?;
                let want = greens_function(&arr, GreensQuery::new(alpha, r, arr.diameter()).unwrap())
                    .map_err(|e| e.to_string())?
                    .value;
                ensure(
                    visits[0] == want,
                    format!("{spec} alpha {alpha} r {r}: {} vs {want}", visits[0]),
                )?;
                compared += 1;
            }
        }
    }
    Ok(format!(
        "Petersen 3/2, 1/2; printed form gives 3; {compared} exact oracle comparisons"
    ))
}

fn criterion_8(sweep: &Sweep) -> Verdict {
    sweep.verdict(&[
        "harmonic-two-point",
        "shell-function",
        "harmonic-three-point",
        "harmonic-clique",
        "greens-function",
    ])
}

fn criterion_9(sweep: &Sweep) -> Verdict {
    let petersen = generate_family(&FamilySpec::Petersen).map_err(|e| e.to_string())?;
    let chain = ProjectedChain::simple(&petersen);
    ensure(
        chain.tv_distance(1) == ratio(7, 10),
        format!("d(1) = {}", chain.tv_distance(1)),
    )?;
    ensure(
        chain.tv_distance(2) == ratio(3, 10),
        format!("d(2) = {}", chain.tv_distance(2)),
    )?;
    let cube = generate_family(&FamilySpec::Hamming { m: 3, q: 2 }).map_err(|e| e.to_string())?;
    let guard = ProjectedChain::simple(&cube).mixing_time(0.25);
    ensure(
        matches!(guard, Err(Error::OutOfRange(_))),
        format!("bipartite guard: {guard:?}"),
    )?;
    sweep
        .verdict(&["projection"])
        .map(|v| format!("d(1) = 7/10, d(2) = 3/10, guard on hamming(3,2); {v}"))
}

fn criterion_10() -> Verdict {
    const SAMPLES: u64 = 100_000;
    const SEED: u64 = 42;
    let spec = FamilySpec::Petersen;
    let arr = generate_family(&spec).map_err(|e| e.to_string())?;
    let g = build_graph(&spec).map_err(|e| e.to_string())?;
    let moments = hitting_moments(&arr).map_err(|e| e.to_string())?;
    let oops = |e: drg_walk_oracle::OracleError| e.to_string();

    let cover = cover_bounds(&arr, GammaStatus::Unknown).map_err(|e| e.to_string())?;
    let s = simulate(&g, Mode::Cover { start: 0 }, SAMPLES, SEED).map_err(oops)?;
    ensure(
        (cover.matthews_lower - 25.4607).abs() < 1e-4 && (cover.matthews_upper - 33.9476).abs() < 1e-4,
        "Matthews bracket",
    )?;
    let cover_mean = s.summary.mean;
    ensure(
        cover.matthews_lower <= cover_mean && cover_mean <= cover.matthews_upper,
        format!("cover mean {cover_mean}"),
    )?;

    let v = g.neighbors(0)[0];
    let s = simulate(&g, Mode::Hitting { start: v, target: 0 }, SAMPLES, SEED).map_err(oops)?;
    ensure(
        s.summary.within(to_f64(&moments.hitting[1]), Z_SCORE),
        format!("hitting mean {}", s.summary.mean),
    )?;
    let hit_mean = s.summary.mean;

    // (d(v,u), d(w,u), d(v,w)) = (1, 2, 1).
    let du = g.bfs(0);
    let w = *g
        .neighbors(v)
        .iter()
        .find(|&&w| du[w] == 2)
        .expect("neighbor at distance 2");
    let stats = visit_statistics(
        &arr,
        &moments,
        DistanceTriple::new(1, 2, 1, 2).unwrap(),
        GammaStatus::Unknown,
    )
    .map_err(|e| e.to_string())?;
    ensure(
        stats.p_visit == ratio(1, 2) && stats.expected_visits == ratio(6, 5),
        "exact visit statistics",
    )?;
    let s = simulate(
        &g,
        Mode::Visits {
            start: v,
            tracked: w,
            target: 0,
        },
        SAMPLES,
        SEED,
    )
    .map_err(oops)?;
    let p = s.visited.expect("indicator");
    ensure(p.within(0.5, Z_SCORE), format!("P_V {}", p.mean))?;
    ensure(s.summary.within(1.2, Z_SCORE), format!("E_N {}", s.summary.mean))?;
    let (p_mean, e_mean) = (p.mean, s.summary.mean);

    let numbers =
        intersection_numbers(&arr, &decompose(&arr).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    let m = expected_distinct_visits(&arr, &moments, &numbers, 1).map_err(|e| e.to_string())?;
    ensure(m == ratio(65, 18), format!("M = {m}"))?;
    let s = simulate(&g, Mode::Distinct { start: v, target: 0 }, SAMPLES, SEED).map_err(oops)?;
    ensure(
        s.summary.within(to_f64(&m), Z_SCORE),
        format!("M mean {}", s.summary.mean),
    )?;
    Ok(format!(
        "cover {cover_mean:.3}, H_1 {hit_mean:.3}, P_V {p_mean:.4}, E_N {e_mean:.4}, M {:.4}",
        s.summary.mean
    ))
}

fn criterion_11() -> Verdict {
    let mut cases = 0usize;
    for spec in [FamilySpec::Hamming { m: 7, q: 2 }, FamilySpec::Dodecahedron] {
        let arr = generate_family(&spec).map_err(|e| e.to_string())?;
        let table = biggs_potentials(&arr).map_err(|e| e.to_string())?;
        let d = arr.diameter();
        let k = uint(arr.degree());
        let gamma = GammaStatus::NotInGamma;
        let value_sets = [(int(1), int(0)), (int(-2), int(3)), (ratio(1, 2), ratio(1, 3))];
        for h in 1..=d {
            for (x, y) in two_point_queries(h, d) {
                for (hu, hv) in &value_sets {
                    let c = harnack_two_point(&arr, &table, gamma, h, (hu, hv), (x, y)).map_err(|e| e.to_string())?;
                    let mut printed = int(2) * abs(&(hu - hv)) / &k;
                    if x >= 2 && y >= 2 {
                        printed /= int(2);
                    }
                    ensure(
                        c.deviation <= printed && c.pass,
                        format!("{spec} h {h} z ({x}, {y}): {}", c.deviation),
                    )?;
                    cases += 1;
                }
            }
        }
        for q in 2..=4 {
            let qq = uint(q as u64);
            let mut value_sets: Vec<Vec<Q>> = (0..q)
                .map(|j| (0..q).map(|i| if i == j { int(1) } else { int(0) }).collect())
                .collect();
            value_sets.push((0..q).map(|i| int(i as i64) - int(1)).collect());
            for dist in 1..=d {
                for query in clique_queries(q, dist, d) {
                    for values in &value_sets {
                        let c = harnack_clique(&arr, &table, gamma, dist, values, &query).map_err(|e| e.to_string())?;
                        let mass = values.iter().fold(int(0), |a, b| a + abs(b));
                        let printed = int(4) / &k * (&qq - int(1)) / &qq * mass;
                        ensure(
                            c.deviation <= printed && c.pass,
                            format!("{spec} clique q {q} d {dist} z {query:?}: {}", c.deviation),
                        )?;
                        cases += 1;
                    }
                }
            }
        }
    }
    Ok(format!("{cases} cases, 0 violations"))
}

fn main() {
    let sweep = Sweep::run();
    let results: Vec<(usize, &str, Verdict)> = vec![
        (1, "Biggs-Smith equality", criterion_1()),
        (2, "dodecahedron equality", criterion_2()),
        (3, "Petersen ground truth", criterion_3()),
        (4, "inequality sweep", criterion_4(&sweep)),
        (5, "spectral data", criterion_5(&sweep)),
        (6, "generating function", criterion_6(&sweep)),
        (7, "Green's function", criterion_7()),
        (8, "harmonicity", criterion_8(&sweep)),
        (9, "mixing", criterion_9(&sweep)),
        (10, "Monte Carlo", criterion_10()),
        (11, "Harnack sweeps", criterion_11()),
    ];
    let mut failed = Vec::new();
    for (n, name, verdict) in &results {
        match verdict {
            Ok(detail) => println!("criterion {n:>2} PASS  {name}: {detail}"),
            Err(detail) => {
                println!("criterion {n:>2} FAIL  {name}: {detail}");
                failed.push(*n);
            }
        }
    }
    if failed.is_empty() {
        println!("all {} criteria passed", results.len());
    } else {
        println!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
