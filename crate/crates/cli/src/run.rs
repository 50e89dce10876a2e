use std::fmt::Write;
use std::str::FromStr;

use serde_json::Value;

use drg_walk_core::array::{derive_counts, generate_family, parse_array, FamilySpec};
use drg_walk_core::harmonic::{
    clique_measure, clique_queries, greens_function, greens_function_b_over_c, harnack_clique, harnack_two_point,
    three_point_measure, two_point_measure, two_point_queries, GreensQuery, HarnackCheck,
};
use drg_walk_core::potentials::check_regularity;
use drg_walk_core::rational::{int, render, to_f64, uint};
use drg_walk_core::spectral::{
    decompose, generating_derivative_at_one, generating_function, generating_series, ProjectedChain,
};
use drg_walk_core::walk::{
    cover_bounds, distinct_visits_bracket, expected_distinct_visits, f_and_mixing, hitting_moments,
    intersection_numbers, moment_bounds, visit_statistics, DistanceTriple,
};
use drg_walk_core::{biggs_potentials, Error, GammaStatus, IntersectionArray, Q};
use drg_walk_oracle::graph::{build_graph, family_size, ExplicitGraph, SIZE_LIMIT};
use drg_walk_oracle::resistance::exact_resistance;
use drg_walk_oracle::simulate::{simulate, simulate_chain, Mode, WalkSample};
use drg_walk_oracle::verify::{verify_array, verify_family, VerifyOptions, Z_SCORE};
use drg_walk_oracle::OracleError;

use crate::args::{Command, Common, MeasureKind, SimMode};
use crate::output::{decimal, header, put_maybe, put_q, put_qs, q_object, Object};

/// Largest graph for which `resistance` and `measure` also consult the explicit graph.
const GRAPH_LOOKUP_LIMIT: u64 = 2500;
/// Largest graph searched for a vertex configuration realizing a distance pattern.
const REALIZE_LIMIT: usize = 200;
const DERIVATIVE_STEP: f64 = 1e-6;

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Core(Error),
    Oracle(OracleError),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Core(e) => core_code(e),
            Failure::Oracle(OracleError::Core(e)) => core_code(e),
            Failure::Oracle(OracleError::Singular) => 3,
            Failure::Oracle(_) => 2,
        }
    }
}

fn core_code(e: &Error) -> u8 {
    match e {
        Error::Syntax(_) => 1,
        Error::Numerical(_) | Error::Inconsistent(_) => 3,
        Error::Invalid(_)
        | Error::OutOfRange(_)
        | Error::Unsupported(_)
        | Error::DegreeTooSmall(_)
        | Error::Distances(_) => 2,
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Usage(msg) => write!(f, "usage error: {msg}"),
            Failure::Core(e) => write!(f, "{e}"),
            Failure::Oracle(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl From<OracleError> for Failure {
    fn from(e: OracleError) -> Self {
        Failure::Oracle(e)
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

/// Text to print and the exit code to return with it.
pub struct Output {
    pub body: String,
    pub code: u8,
}

impl Output {
    fn json(map: Object) -> Self {
        Self {
            body: serde_json::to_string_pretty(&Value::Object(map)).expect("serializable") + "\n",
            code: 0,
        }
    }

    fn text(body: String) -> Self {
        Self { body, code: 0 }
    }
}

struct Source {
    arr: IntersectionArray,
    family: Option<FamilySpec>,
    gamma: GammaStatus,
}

impl Source {
    fn resolve(common: &Common) -> Outcome<Self> {
        let gamma = GammaStatus::from_str(&common.gamma)?;
        let (arr, family) = match (&common.array, &common.family) {
            (Some(text), None) => (parse_array(text)?, None),
            (None, Some(text)) => {
                let spec = FamilySpec::parse(text)?;
                (generate_family(&spec)?, Some(spec))
            }
            _ => return Err(Failure::Usage("give exactly one of --array and --family".into())),
        };
        Ok(Self { arr, family, gamma })
    }

    fn header(&self) -> Object {
        let mut map = header(&self.arr);
        if let Some(spec) = &self.family {
            map.insert("family".into(), spec.to_string().into());
        }
        map
    }

    /// The explicit graph, when the family has one of at most `limit` vertices.
    fn graph(&self, limit: u64) -> Outcome<Option<ExplicitGraph>> {
        match &self.family {
            Some(FamilySpec::BiggsSmith) | None => Ok(None),
            Some(spec) if family_size(spec)? <= limit => Ok(Some(build_graph(spec)?)),
            Some(_) => Ok(None),
        }
    }

    fn require_graph(&self) -> Outcome<ExplicitGraph> {
        match &self.family {
            Some(spec) => Ok(build_graph(spec)?),
            None => Err(Failure::Oracle(OracleError::Unsupported(
                "this needs an explicit graph; pass --family".into(),
            ))),
        }
    }
}

pub fn parse_list(text: &str, what: &str) -> Outcome<Vec<usize>> {
    text.split(',')
        .map(|part| {
            part.trim()
                .parse::<usize>()
                .map_err(|_| Failure::Usage(format!("{what}: {part:?} is not a nonnegative integer")))
        })
        .collect()
}

/// Accepts "p/q", integers and plain decimals such as "0.25", all exactly.
pub fn parse_rational(text: &str) -> Outcome<Q> {
    let t = text.trim();
    let bad = || Failure::Usage(format!("{t:?} is not a rational number"));
    if let Some((whole, frac)) = t.split_once('.') {
        if frac.is_empty() || !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = whole.starts_with('-');
        let digits = format!("{}{}", whole.trim_start_matches(['-', '+']), frac);
        let numer: Q = Q::from_str(&digits).map_err(|_| bad())?;
        let scale = (0..frac.len()).fold(int(1), |acc, _| acc * int(10));
        let value = numer / scale;
        return Ok(if negative { -value } else { value });
    }
    Q::from_str(t).map_err(|_| bad())
}

fn parse_values(text: &str) -> Outcome<Vec<Q>> {
    text.split(',').map(parse_rational).collect()
}

fn need<'a>(value: &'a Option<String>, flag: &str) -> Outcome<&'a str> {
    value
        .as_deref()
        .ok_or_else(|| Failure::Usage(format!("--{flag} is required here")))
}

fn arity(values: &[usize], expected: usize, flag: &str) -> Outcome<()> {
    if values.len() == expected {
        Ok(())
    } else {
        Err(Failure::Usage(format!(
            "--{flag} takes {expected} value(s), got {}",
            values.len()
        )))
    }
}

pub fn execute(command: &Command) -> Outcome<Output> {
    let common = command.common();
    if common.csv && !command.supports_csv() {
        return Err(Failure::Usage("--csv applies to potentials and tvcurve only".into()));
    }
    let src = Source::resolve(common)?;
    match command {
        Command::Info { edges, .. } => info(&src, *edges),
        Command::Potentials { common } => potentials(&src, common.csv),
        Command::Resistance { .. } => resistance(&src),
        Command::Hitting { .. } => hitting(&src),
        Command::Moments { .. } => moments(&src),
        Command::Cover { .. } => cover(&src),
        Command::Mixing { eps, laziness, .. } => mixing(&src, *eps, laziness),
        Command::Visits { distances, .. } => visits(&src, distances.as_deref()),
        Command::Genfun { s, terms, .. } => genfun(&src, *s, *terms),
        Command::Spectrum { .. } => spectrum(&src),
        Command::Tvcurve {
            common,
            t_max,
            laziness,
        } => tvcurve(&src, *t_max, laziness, common.csv),
        Command::Greens { alpha, r, .. } => greens(&src, *alpha, *r),
        Command::Measure {
            kind,
            boundary,
            distances,
            ..
        } => measure(&src, *kind, boundary, distances),
        Command::Harnack {
            kind,
            boundary,
            values,
            distances,
            sweep,
            ..
        } => harnack(
            &src,
            *kind,
            boundary.as_deref(),
            values.as_deref(),
            distances.as_deref(),
            *sweep,
        ),
        Command::Verify { seed, samples, .. } => verify(&src, *seed, *samples),
        Command::Simulate {
            mode,
            distances,
            seed,
            samples,
            ..
        } => simulate_cmd(&src, *mode, distances.as_deref(), *seed, *samples),
    }
}

fn info(src: &Source, edges: bool) -> Outcome<Output> {
    if edges {
        return Ok(Output::text(src.require_graph()?.edge_list()));
    }
    let arr = &src.arr;
    let counts = derive_counts(arr);
    let d = arr.diameter();
    let mut map = src.header();
    map.insert("b".into(), arr.b_list().into());
    map.insert("c".into(), arr.c_list().into());
    map.insert("a".into(), (0..=d).map(|i| arr.a(i)).collect::<Vec<_>>().into());
    map.insert("sphere_sizes".into(), counts.sphere_sizes.clone().into());
    map.insert("edges".into(), counts.edges.into());
    map.insert("boundary_edges".into(), counts.boundary_edges.clone().into());
    map.insert("bipartite".into(), arr.is_bipartite().into());
    map.insert("warnings".into(), arr.warnings().into());
    let buildable = match &src.family {
        Some(FamilySpec::BiggsSmith) | None => false,
        Some(spec) => family_size(spec)? <= SIZE_LIMIT,
    };
    map.insert("explicit_graph".into(), buildable.into());
    Ok(Output::json(map))
}

fn potentials(src: &Source, csv: bool) -> Outcome<Output> {
    let arr = &src.arr;
    let table = biggs_potentials(arr)?;
    let d = arr.diameter();
    if csv {
        let mut out = String::from("i,phi,phi_decimal,Phi,Phi_decimal,resistance,resistance_decimal\n");
        for i in 0..=d {
            let (phi, phi_decimal) = if i < d {
                (render(table.phi(i)), to_f64(table.phi(i)).to_string())
            } else {
                (String::new(), String::new())
            };
            let res = if i == 0 { int(0) } else { table.resistance(i).clone() };
            let phi_cum = table.cumulative(i);
            let _ = writeln!(
                out,
                "{i},{phi},{phi_decimal},{},{},{},{}",
                render(phi_cum),
                to_f64(phi_cum),
                render(&res),
                to_f64(&res)
            );
        }
        return Ok(Output::text(out));
    }
    let mut map = src.header();
    put_qs(&mut map, "phi", table.phis());
    put_qs(&mut map, "Phi", table.cumulatives());
    put_qs(&mut map, "resistance", table.resistances());
    match check_regularity(arr, src.gamma) {
        Ok(reg) => {
            let mut c = Object::new();
            put_maybe(&mut c, "value", &reg.c.value);
            c.insert("rational".into(), reg.c.value.is_rational().into());
            c.insert("conservative".into(), reg.c.conservative.into());
            c.insert("gamma".into(), src.gamma.to_string().into());
            map.insert("C".into(), c.into());

            let mut ratio_verdict = q_object("ratio", &reg.ratio);
            ratio_verdict.insert("holds".into(), reg.ratio_holds.into());
            ratio_verdict.insert("equality".into(), reg.ratio_equality.into());
            ratio_verdict.insert("within_1_plus_C".into(), reg.within_one_plus_c.into());
            let mut p1 = Object::new();
            match &reg.p1_slack {
                Some(s) => put_q(&mut p1, "slack", s),
                None => {
                    p1.insert("slack".into(), Value::Null);
                }
            }
            p1.insert("holds".into(), reg.p1_holds.into());
            p1.insert("equality".into(), reg.p1_equality.into());
            let mut iii = Object::new();
            put_qs(&mut iii, "slacks", &reg.tail_slacks);
            iii.insert("holds".into(), reg.tail_holds.into());
            put_q(&mut iii, "max_tail_ratio", &reg.tail_ratio_max);
            let mut verdicts = Object::new();
            verdicts.insert("bigguy".into(), ratio_verdict.into());
            verdicts.insert("p1".into(), p1.into());
            verdicts.insert("iii".into(), iii.into());
            map.insert("verdicts".into(), verdicts.into());
        }
        Err(Error::DegreeTooSmall(k)) => {
            map.insert("C".into(), Value::Null);
            map.insert("verdicts".into(), Value::Null);
            map.insert(
                "note".into(),
                format!("k = {k} < 3: C(G,k)-based verdicts are undefined").into(),
            );
        }
        Err(e) => return Err(e.into()),
    }
    Ok(Output::json(map))
}

fn resistance(src: &Source) -> Outcome<Output> {
    let arr = &src.arr;
    let table = biggs_potentials(arr)?;
    let mut map = src.header();
    put_qs(&mut map, "resistance", table.resistances());
    let nk = uint(arr.vertex_count() * arr.degree());
    let commute: Vec<Q> = table.resistances().iter().map(|r| r * &nk).collect();
    put_qs(&mut map, "commute", &commute);
    if let Some(g) = src.graph(GRAPH_LOOKUP_LIMIT)? {
        let dist = g.bfs(0);
        let oracle: Vec<f64> = (1..=arr.diameter())
            .map(|j| {
                let x = dist.iter().position(|&d| d == j).expect("sphere is nonempty");
                exact_resistance(&g, 0, x)
            })
            .collect::<Result<_, _>>()?;
        map.insert("laplacian".into(), oracle.into());
    }
    Ok(Output::json(map))
}

fn hitting(src: &Source) -> Outcome<Output> {
    let arr = &src.arr;
    let table = hitting_moments(arr)?;
    let mut map = src.header();
    put_qs(&mut map, "H", &table.hitting);
    let plus: Vec<Q> = (0..=arr.diameter()).map(|d| table.hitting_plus(d)).collect();
    put_qs(&mut map, "H_plus", &plus);
    match moment_bounds(arr, src.gamma) {
        Ok(b) => {
            let mut bracket = q_object("lower", &b.hitting_lower);
            put_maybe(&mut bracket, "upper", &b.hitting_upper);
            let holds = table.hitting[1..]
                .iter()
                .all(|h| h >= &b.hitting_lower && b.hitting_upper.admits_below(h));
            bracket.insert("holds".into(), holds.into());
            map.insert("bracket".into(), bracket.into());
        }
        Err(Error::DegreeTooSmall(_)) => {
            map.insert("bracket".into(), Value::Null);
        }
        Err(e) => return Err(e.into()),
    }
    Ok(Output::json(map))
}

fn moments(src: &Source) -> Outcome<Output> {
    let arr = &src.arr;
    let table = hitting_moments(arr)?;
    let mut map = src.header();
    put_qs(&mut map, "H", &table.hitting);
    put_qs(&mut map, "M2", &table.second_moment);
    put_qs(&mut map, "Var", &table.variance);
    match moment_bounds(arr, src.gamma) {
        Ok(b) => {
            let mut bounds = Object::new();
            put_maybe(&mut bounds, "C", &b.c);
            put_q(&mut bounds, "hitting_lower", &b.hitting_lower);
            put_maybe(&mut bounds, "hitting_upper", &b.hitting_upper);
            put_maybe(&mut bounds, "m2_lower", &b.m2_lower);
            put_maybe(&mut bounds, "m2_upper", &b.m2_upper);
            put_maybe(&mut bounds, "var_lower", &b.var_lower);
            put_maybe(&mut bounds, "var_upper", &b.var_upper);
            let violations: Vec<Value> = b
                .violations(&table)
                .into_iter()
                .map(|(i, what)| format!("{what} at distance {i}").into())
                .collect();
            bounds.insert("violations".into(), violations.into());
            map.insert("bounds".into(), bounds.into());
        }
        Err(Error::DegreeTooSmall(_)) => {
            map.insert("bounds".into(), Value::Null);
        }
        Err(e) => return Err(e.into()),
    }
    Ok(Output::json(map))
}

fn cover(src: &Source) -> Outcome<Output> {
    let b = cover_bounds(&src.arr, src.gamma)?;
    let mut map = src.header();
    map.insert("harmonic_number".into(), decimal(b.harmonic));
    map.insert("matthews_lower".into(), decimal(b.matthews_lower));
    map.insert("matthews_upper".into(), decimal(b.matthews_upper));
    map.insert("lower".into(), decimal(b.lower));
    map.insert("upper".into(), b.upper.map_or(Value::Null, decimal));
    Ok(Output::json(map))
}

fn chain_for(src: &Source, laziness: &str) -> Outcome<ProjectedChain> {
    Ok(ProjectedChain::new(&src.arr, parse_rational(laziness)?)?)
}

fn mixing(src: &Source, eps: f64, laziness: &str) -> Outcome<Output> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Failure::Core(Error::OutOfRange(format!(
            "eps = {eps} must lie in (0, 1)"
        ))));
    }
    let chain = chain_for(src, laziness)?;
    let spectral = decompose(&src.arr)?;
    let t_mix = chain.mixing_time(eps)?;
    let mut map = src.header();
    match f_and_mixing(&src.arr, src.gamma) {
        Ok(m) => {
            put_q(&mut map, "F", &m.f);
            put_q(&mut map, "tau0", &m.tau0);
            put_q(&mut map, "F_lower", &m.f_lower);
            put_maybe(&mut map, "F_upper", &m.f_upper);
            map.insert("F_in_bracket".into(), m.f_in_bracket.into());
            put_maybe(&mut map, "tau0_bound", &m.tau0_bound);
            put_maybe(&mut map, "tau1_bound", &m.tau1_bound);
            put_maybe(&mut map, "tau2_bound", &m.tau2_bound);
            put_maybe(&mut map, "tauc_bound", &m.tauc_bound);
        }
        Err(Error::DegreeTooSmall(_)) => {
            map.insert("bounds".into(), Value::Null);
        }
        Err(e) => return Err(e.into()),
    }
    map.insert(
        "relaxation_time".into(),
        spectral.relaxation_time().map_or(Value::Null, decimal),
    );
    put_q(&mut map, "laziness", chain.laziness());
    map.insert("eps".into(), decimal(eps));
    map.insert("t_mix".into(), t_mix.into());
    Ok(Output::json(map))
}

fn visits(src: &Source, distances: Option<&str>) -> Outcome<Output> {
    let arr = &src.arr;
    let table = hitting_moments(arr)?;
    let mut map = src.header();
    if let Some(text) = distances {
        let t = parse_list(text, "--distances")?;
        arity(&t, 3, "distances")?;
        let triple = DistanceTriple::new(t[0], t[1], t[2], arr.diameter())?;
        let stats = visit_statistics(arr, &table, triple, src.gamma)?;
        let mut visit = Object::new();
        visit.insert("triple".into(), t.clone().into());
        put_q(&mut visit, "P_V", &stats.p_visit);
        put_q(&mut visit, "E_N", &stats.expected_visits);
        put_q(&mut visit, "Var_N", &stats.visit_variance);
        visit.insert(
            "brackets".into(),
            match &stats.brackets {
                Some(b) => serde_json::json!({"P_V": b.p_visit, "E_N": b.expected, "Var_N": b.variance}),
                None => Value::Null,
            },
        );
        map.insert("visit".into(), visit.into());
    }
    let numbers = intersection_numbers(arr, &decompose(arr)?)?;
    let m: Vec<Q> = (1..=arr.diameter())
        .map(|h| expected_distinct_visits(arr, &table, &numbers, h))
        .collect::<Result<_, _>>()?;
    put_qs(&mut map, "M", &m);
    match distinct_visits_bracket(arr, src.gamma) {
        Ok((lo, hi)) => {
            let mut bracket = Object::new();
            put_maybe(&mut bracket, "lower", &lo);
            put_maybe(&mut bracket, "upper", &hi);
            map.insert("M_bracket".into(), bracket.into());
        }
        Err(Error::DegreeTooSmall(_)) => {
            map.insert("M_bracket".into(), Value::Null);
        }
        Err(e) => return Err(e.into()),
    }
    Ok(Output::json(map))
}

fn genfun(src: &Source, s: f64, terms: usize) -> Outcome<Output> {
    let arr = &src.arr;
    if terms == 0 {
        return Err(Failure::Usage("--terms must be at least 1".into()));
    }
    let spectral = decompose(arr)?;
    let table = hitting_moments(arr)?;
    let mut rows = Vec::new();
    for i in 1..=arr.diameter() {
        let mut row = Object::new();
        row.insert("i".into(), i.into());
        row.insert("value".into(), decimal(generating_function(arr, &spectral, i, s)?));
        row.insert(
            "derivative_at_1".into(),
            decimal(generating_derivative_at_one(arr, &spectral, i, DERIVATIVE_STEP)?),
        );
        put_q(&mut row, "H", &table.hitting[i]);
        row.insert(
            "series".into(),
            generating_series(arr, &spectral, i, terms - 1)?
                .into_iter()
                .map(decimal)
                .collect(),
        );
        rows.push(Value::Object(row));
    }
    let mut map = src.header();
    map.insert("s".into(), decimal(s));
    map.insert("distances".into(), rows.into());
    Ok(Output::json(map))
}

fn spectrum(src: &Source) -> Outcome<Output> {
    let s = decompose(&src.arr)?;
    let mut map = src.header();
    map.insert(
        "eigenvalues".into(),
        s.eigenvalues.iter().copied().map(decimal).collect(),
    );
    map.insert("multiplicities".into(), s.multiplicities.clone().into());
    map.insert("multiplicity_residual".into(), decimal(s.multiplicity_residual));
    let rows = |m: &Vec<Vec<f64>>| -> Value {
        m.iter()
            .map(|r| r.iter().copied().map(decimal).collect::<Value>())
            .collect()
    };
    map.insert("right".into(), rows(&s.right));
    map.insert("left".into(), rows(&s.left));
    map.insert(
        "relaxation_time".into(),
        s.relaxation_time().map_or(Value::Null, decimal),
    );
    Ok(Output::json(map))
}

fn tvcurve(src: &Source, t_max: u64, laziness: &str, csv: bool) -> Outcome<Output> {
    let chain = chain_for(src, laziness)?;
    let values: Vec<Q> = (0..=t_max).map(|t| chain.tv_distance(t)).collect();
    if csv {
        let mut out = String::from("t,d,d_decimal\n");
        for (t, d) in values.iter().enumerate() {
            let _ = writeln!(out, "{t},{},{}", render(d), to_f64(d));
        }
        return Ok(Output::text(out));
    }
    let mut map = src.header();
    put_q(&mut map, "laziness", chain.laziness());
    map.insert("t".into(), (0..=t_max).collect::<Vec<_>>().into());
    put_qs(&mut map, "d", &values);
    Ok(Output::json(map))
}

fn greens(src: &Source, alpha: usize, r: Option<usize>) -> Outcome<Output> {
    let arr = &src.arr;
    let radii: Vec<usize> = match r {
        Some(r) => vec![r],
        None => (0..alpha).collect(),
    };
    let mut rows = Vec::new();
    for r in radii {
        let q = GreensQuery::new(alpha, r, arr.diameter())?;
        let g = greens_function(arr, q)?;
        let mut row = Object::new();
        row.insert("r".into(), r.into());
        put_q(&mut row, "value", &g.value);
        put_q(&mut row, "shell_visits", &g.shell_visits);
        put_q(&mut row, "return_probability", &g.return_probability);
        put_q(&mut row, "b_over_c_form", &greens_function_b_over_c(arr, q)?);
        rows.push(Value::Object(row));
    }
    let mut map = src.header();
    map.insert("alpha".into(), alpha.into());
    map.insert("greens".into(), rows.into());
    Ok(Output::json(map))
}

/// Searches the explicit graph for boundary points with the given pairwise
/// distances and a point `z` with the given query distances.
fn realized(g: &ExplicitGraph, pairwise: &[Vec<usize>], query: &[usize]) -> bool {
    let n = g.vertex_count();
    let dist: Vec<Vec<usize>> = (0..n).map(|x| g.bfs(x)).collect();
    fn extend(dist: &[Vec<usize>], pairwise: &[Vec<usize>], query: &[usize], chosen: &mut Vec<usize>) -> bool {
        let n = dist.len();
        if chosen.len() == query.len() {
            return (0..n).any(|z| chosen.iter().zip(query).all(|(&b, &q)| dist[b][z] == q));
        }
        let next = chosen.len();
        for x in 0..n {
            if chosen.iter().enumerate().all(|(i, &b)| dist[b][x] == pairwise[i][next]) {
                chosen.push(x);
                if extend(dist, pairwise, query, chosen) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
    extend(&dist, pairwise, query, &mut vec![0])
}

fn measure(src: &Source, kind: MeasureKind, boundary: &str, distances: &str) -> Outcome<Output> {
    let table = biggs_potentials(&src.arr)?;
    let b = parse_list(boundary, "--boundary")?;
    let z = parse_list(distances, "--distances")?;
    let (all, pairwise): (Vec<Q>, Vec<Vec<usize>>) = match kind {
        MeasureKind::TwoPoint => {
            arity(&b, 1, "boundary")?;
            arity(&z, 2, "distances")?;
            let h = b[0];
            (
                vec![
                    two_point_measure(&table, h, z[0], z[1])?,
                    two_point_measure(&table, h, z[1], z[0])?,
                ],
                vec![vec![0, h], vec![h, 0]],
            )
        }
        MeasureKind::ThreePoint => {
            arity(&b, 3, "boundary")?;
            arity(&z, 3, "distances")?;
            let (uv, uw, vw) = (b[0], b[1], b[2]);
            (
                vec![
                    three_point_measure(&table, (uv, uw, vw), (z[0], z[1], z[2]))?,
                    three_point_measure(&table, (uv, vw, uw), (z[1], z[0], z[2]))?,
                    three_point_measure(&table, (uw, vw, uv), (z[2], z[0], z[1]))?,
                ],
                vec![vec![0, uv, uw], vec![uv, 0, vw], vec![uw, vw, 0]],
            )
        }
        MeasureKind::Clique => {
            arity(&b, 1, "boundary")?;
            if z.len() < 2 {
                return Err(Failure::Usage("a clique needs at least two query distances".into()));
            }
            let d = b[0];
            let q = z.len();
            let all = (0..q)
                .map(|j| {
                    let others: Vec<usize> = (0..q).filter(|&i| i != j).map(|i| z[i]).collect();
                    clique_measure(&table, d, z[j], &others)
                })
                .collect::<Result<_, _>>()?;
            let pairwise = (0..q)
                .map(|i| (0..q).map(|j| if i == j { 0 } else { d }).collect())
                .collect();
            (all, pairwise)
        }
    };
    let mut map = src.header();
    put_q(&mut map, "measure", &all[0]);
    put_qs(&mut map, "all", &all);
    let total = all.iter().fold(int(0), |a, b| a + b);
    put_q(&mut map, "total", &total);
    let realized = match src.graph(REALIZE_LIMIT as u64)? {
        Some(g) => Value::from(realized(&g, &pairwise, &z)),
        None => Value::Null,
    };
    // Patterns are only triangle-checked; "formal" unless a realization was found.
    map.insert("formal".into(), (realized != Value::Bool(true)).into());
    map.insert("realized".into(), realized);
    Ok(Output::json(map))
}

fn harnack_object(c: &HarnackCheck) -> Object {
    let mut map = Object::new();
    put_q(&mut map, "deviation", &c.deviation);
    put_maybe(&mut map, "bound", &c.bound);
    put_q(&mut map, "potential_bound", &c.potential_bound);
    map.insert("pass".into(), c.pass.into());
    map.insert("halved".into(), c.halved.into());
    map.insert("standard".into(), c.standard.into());
    map
}

fn harnack(
    src: &Source,
    kind: MeasureKind,
    boundary: Option<&str>,
    values: Option<&str>,
    distances: Option<&str>,
    sweep: bool,
) -> Outcome<Output> {
    let arr = &src.arr;
    let table = biggs_potentials(arr)?;
    let d = arr.diameter();
    let mut map = src.header();
    let boundary = boundary.map(|b| parse_list(b, "--boundary")).transpose()?;
    if let Some(b) = &boundary {
        arity(b, 1, "boundary")?;
    }
    match kind {
        MeasureKind::ThreePoint => {
            return Err(Failure::Usage(
                "harnack supports two-point and clique boundaries".into(),
            ));
        }
        MeasureKind::TwoPoint => {
            let v = parse_values(values.unwrap_or("1,0"))?;
            if v.len() != 2 {
                return Err(Failure::Usage("--values takes h(u),h(v)".into()));
            }
            if sweep {
                let hs: Vec<usize> = match &boundary {
                    Some(b) => vec![b[0]],
                    None => (1..=d).collect(),
                };
                let mut checks = Vec::new();
                for h in hs {
                    for q in two_point_queries(h, d) {
                        checks.push(harnack_two_point(arr, &table, src.gamma, h, (&v[0], &v[1]), q)?);
                    }
                }
                summarize(&mut map, &checks);
            } else {
                let b = boundary.ok_or_else(|| Failure::Usage("--boundary is required without --sweep".into()))?;
                let z = parse_list(need(&distances.map(String::from), "distances")?, "--distances")?;
                arity(&z, 2, "distances")?;
                let c = harnack_two_point(arr, &table, src.gamma, b[0], (&v[0], &v[1]), (z[0], z[1]))?;
                map.insert("harnack".into(), harnack_object(&c).into());
            }
        }
        MeasureKind::Clique => {
            let v = parse_values(values.unwrap_or("1,0,0"))?;
            if sweep {
                let ds: Vec<usize> = match &boundary {
                    Some(b) => vec![b[0]],
                    None => (1..=d).collect(),
                };
                let mut checks = Vec::new();
                for dist in ds {
                    for q in clique_queries(v.len(), dist, d) {
                        checks.push(harnack_clique(arr, &table, src.gamma, dist, &v, &q)?);
                    }
                }
                summarize(&mut map, &checks);
            } else {
                let b = boundary.ok_or_else(|| Failure::Usage("--boundary is required without --sweep".into()))?;
                let z = parse_list(need(&distances.map(String::from), "distances")?, "--distances")?;
                let c = harnack_clique(arr, &table, src.gamma, b[0], &v, &z)?;
                map.insert("harnack".into(), harnack_object(&c).into());
            }
        }
    }
    Ok(Output::json(map))
}

fn summarize(map: &mut Object, checks: &[HarnackCheck]) {
    let violations = checks.iter().filter(|c| !c.pass).count();
    let worst = checks
        .iter()
        .map(|c| c.deviation.clone())
        .max()
        .unwrap_or_else(|| int(0));
    let mut sweep = Object::new();
    sweep.insert("cases".into(), checks.len().into());
    sweep.insert("violations".into(), violations.into());
    put_q(&mut sweep, "max_deviation", &worst);
    sweep.insert("standard".into(), checks.iter().all(|c| c.standard).into());
    sweep.insert("pass".into(), (violations == 0).into());
    map.insert("sweep".into(), sweep.into());
}

fn verify(src: &Source, seed: u64, samples: u64) -> Outcome<Output> {
    let opts = VerifyOptions {
        seed,
        samples,
        gamma: src.gamma,
        ..VerifyOptions::default()
    };
    let report = match &src.family {
        Some(spec) => verify_family(spec, &opts)?,
        None => verify_array(&src.arr, &opts)?,
    };
    let mut map = src.header();
    map.insert("seed".into(), seed.into());
    map.insert("samples".into(), samples.into());
    map.insert("rng".into(), drg_walk_oracle::simulate::RNG_NAME.into());
    map.insert("explicit_graph".into(), report.graph_built.into());
    let checks: Vec<Value> = report
        .checks
        .iter()
        .map(|c| {
            serde_json::json!({
                "name": c.name,
                "pass": c.pass,
                "informational": c.informational,
                "detail": c.detail,
            })
        })
        .collect();
    map.insert("checks".into(), checks.into());
    map.insert("notes".into(), report.notes.clone().into());
    map.insert("passed".into(), report.passed().into());
    let mut out = Output::json(map);
    if !report.passed() {
        out.code = 4;
    }
    Ok(out)
}

fn sample_object(map: &mut Object, s: &WalkSample) {
    map.insert("mode".into(), s.mode.into());
    map.insert("samples".into(), s.samples.into());
    map.insert("seed".into(), s.seed.into());
    map.insert("rng".into(), s.rng.into());
    map.insert("mean".into(), decimal(s.summary.mean));
    map.insert("var".into(), decimal(s.summary.var));
    map.insert("stderr".into(), decimal(s.summary.stderr));
}

fn compare(map: &mut Object, key: &str, value: &Q, estimate: &drg_walk_oracle::simulate::Summary) {
    put_q(map, key, value);
    map.insert(
        format!("{key}_within_{}se", Z_SCORE as u32),
        estimate.within(to_f64(value), Z_SCORE).into(),
    );
}

fn simulate_cmd(src: &Source, mode: SimMode, distances: Option<&str>, seed: u64, samples: u64) -> Outcome<Output> {
    let arr = &src.arr;
    let table = hitting_moments(arr)?;
    let list = distances.map(|t| parse_list(t, "--distances")).transpose()?;
    let mut map = src.header();
    match mode {
        SimMode::Hitting => {
            let h = list.map_or(Ok(1), |l| arity(&l, 1, "distances").map(|_| l[0]))?;
            if h == 0 || h > arr.diameter() {
                return Err(Failure::Core(Error::Distances(format!(
                    "hitting distance {h} must lie in 1..={}",
                    arr.diameter()
                ))));
            }
            let s = match src.graph(SIZE_LIMIT)? {
                Some(g) => {
                    let start = g.vertex_at_distance(0, h).expect("sphere is nonempty");
                    simulate(&g, Mode::Hitting { start, target: 0 }, samples, seed)?
                }
                None => simulate_chain(&ProjectedChain::simple(arr), h, samples, seed)?,
            };
            sample_object(&mut map, &s);
            compare(&mut map, "exact", &table.hitting[h], &s.summary);
        }
        SimMode::Cover => {
            let g = src.require_graph()?;
            let s = simulate(&g, Mode::Cover { start: 0 }, samples, seed)?;
            let b = cover_bounds(arr, src.gamma)?;
            sample_object(&mut map, &s);
            map.insert("matthews_lower".into(), decimal(b.matthews_lower));
            map.insert("matthews_upper".into(), decimal(b.matthews_upper));
            map.insert(
                "in_bracket".into(),
                (b.matthews_lower <= s.summary.mean && s.summary.mean <= b.matthews_upper).into(),
            );
        }
        SimMode::Visits => {
            let t = list.unwrap_or_else(|| vec![1, 2.min(arr.diameter()), 1]);
            arity(&t, 3, "distances")?;
            let triple = DistanceTriple::new(t[0], t[1], t[2], arr.diameter())?;
            let g = src.require_graph()?;
            let (start, tracked) = find_pair(&g, &t)
                .ok_or_else(|| Failure::Core(Error::Distances(format!("no vertices realize the distances {t:?}"))))?;
            let s = simulate(
                &g,
                Mode::Visits {
                    start,
                    tracked,
                    target: 0,
                },
                samples,
                seed,
            )?;
            let exact_stats = visit_statistics(arr, &table, triple, src.gamma)?;
            sample_object(&mut map, &s);
            map.insert("triple".into(), t.into());
            compare(&mut map, "E_N", &exact_stats.expected_visits, &s.summary);
            put_q(&mut map, "Var_N", &exact_stats.visit_variance);
            let p = s.visited.expect("visits mode reports the indicator");
            map.insert("p_visit_mean".into(), decimal(p.mean));
            map.insert("p_visit_stderr".into(), decimal(p.stderr));
            compare(&mut map, "P_V", &exact_stats.p_visit, &p);
        }
        SimMode::Distinct => {
            let h = list.map_or(Ok(1), |l| arity(&l, 1, "distances").map(|_| l[0]))?;
            let numbers = intersection_numbers(arr, &decompose(arr)?)?;
            let m = expected_distinct_visits(arr, &table, &numbers, h)?;
            let g = src.require_graph()?;
            let start = g.vertex_at_distance(0, h).expect("sphere is nonempty");
            let s = simulate(&g, Mode::Distinct { start, target: 0 }, samples, seed)?;
            sample_object(&mut map, &s);
            compare(&mut map, "exact", &m, &s.summary);
        }
    }
    Ok(Output::json(map))
}

/// `(v, w)` with `d(v,0), d(w,0), d(v,w)` equal to the triple.
fn find_pair(g: &ExplicitGraph, t: &[usize]) -> Option<(usize, usize)> {
    let du = g.bfs(0);
    (0..g.vertex_count()).filter(|&v| du[v] == t[0]).find_map(|v| {
        let dv = g.bfs(v);
        (0..g.vertex_count())
            .find(|&w| w != 0 && du[w] == t[1] && dv[w] == t[2])
            .map(|w| (v, w))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use drg_walk_core::rational::ratio;

    #[test]
    fn rationals_parse_exactly() {
        assert_eq!(parse_rational("1/2").unwrap(), ratio(1, 2));
        assert_eq!(parse_rational("0.25").unwrap(), ratio(1, 4));
        assert_eq!(parse_rational("-1.5").unwrap(), ratio(-3, 2));
        assert_eq!(parse_rational("3").unwrap(), int(3));
        assert!(parse_rational("0.").is_err());
        assert!(parse_rational("a/b").is_err());
    }

    #[test]
    fn lists_parse() {
        assert_eq!(parse_list("1, 2,1", "x").unwrap(), vec![1, 2, 1]);
        assert!(parse_list("1,-2", "x").is_err());
    }

    #[test]
    fn exit_codes_follow_error_kind() {
        assert_eq!(Failure::Usage("x".into()).exit_code(), 1);
        assert_eq!(Failure::Core(Error::Invalid("x".into())).exit_code(), 2);
        assert_eq!(Failure::Core(Error::Numerical("x".into())).exit_code(), 3);
        assert_eq!(Failure::Oracle(OracleError::Singular).exit_code(), 3);
    }
}
