//! Command-line front end.

use std::fmt::Write as _;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::acceptance;
use crate::contfrac::hj;
use crate::curve_res::{build_chains, dx_curve, ContactProfile, CurveBranch, NodeId};
use crate::gring::{LaurentPoly, RationalSeries};
use crate::jet_oracle::{curve_dx_oracle, liftable_jet_count, JetCountRequest, OracleDx, PlaneArc, DEFAULT_BUDGET};
use crate::motivic::{
    d_e_closed_d3, d_e_contribution_d3, fixture_a_closed, fixture_b_closed, fixture_blowup_example_a,
    fixture_blowup_example_b, pgeom_toric_closed, pgeom_toric_stratified_t1_with, reconciliation_experiment,
    BlowupClasses, Correction,
};
use crate::toric_res::{resolution_vectors, stage_plan, strata_numerical_data, toric_surface};

#[derive(Parser, Debug)]
#[command(name = "singpoincare", version, about = "Poincare series of toric surface singularities and contact valuations of plane branches")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Geometric Poincare series of the toric surface of type (p, q).
    Toric(ToricArgs),
    /// Resolution chain of a plane branch.
    Curve(BranchArgs),
    /// Contact valuation d_X of an arc from its contact profile.
    Dx(DxArgs),
    /// Hirzebruch-Jung continued fraction of n/k.
    Cf(CfArgs),
    /// Brute-force oracles.
    #[command(subcommand)]
    Oracle(OracleCommand),
    /// Compare the blow-up fixtures and the depth-e identities.
    Fixtures(FixtureArgs),
    /// Run the acceptance suite.
    Check(FormatArg),
}

#[derive(Subcommand, Debug)]
pub enum OracleCommand {
    /// Count liftable n-jets of xz = y^c over F_q.
    Jets(JetArgs),
    /// Distance from an arc to a plane branch over F_p.
    Dx(OracleDxArgs),
}

#[derive(Clone, Copy, Debug, Default, ValueEnum, PartialEq, Eq)]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, Default, ValueEnum, PartialEq, Eq)]
pub enum Pipeline {
    #[default]
    Closed,
    Stratified,
    Both,
}

#[derive(Args, Debug)]
pub struct FormatArg {
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct ToricArgs {
    #[arg(long)]
    pub p: i64,
    #[arg(long)]
    pub q: i64,
    #[arg(long, value_enum, default_value_t)]
    pub pipeline: Pipeline,
    /// Replacement used at non-transversal points by the stratified pipeline.
    #[arg(long, value_enum, default_value_t = CorrectionArg::Geometric)]
    pub correction: CorrectionArg,
    /// Expand through T^N.
    #[arg(long, value_name = "N")]
    pub expand: Option<usize>,
    /// Substitute L = Q in the expansion.
    #[arg(long, value_name = "Q", requires = "expand")]
    pub specialize: Option<i64>,
    /// Also print the fan vectors, stage plan and strata data.
    #[arg(long)]
    pub plan: bool,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

#[derive(Clone, Copy, Debug, ValueEnum, PartialEq, Eq)]
pub enum CorrectionArg {
    Geometric,
    AsDisplayed,
}

#[derive(Args, Debug)]
pub struct BranchArgs {
    #[arg(long)]
    pub mult: i64,
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    pub exponents: Vec<i64>,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct DxArgs {
    #[command(flatten)]
    pub branch: BranchArgs,
    /// off | on-x | smooth | interior:i.j.k | intersection:i.j.k,i.j.k | strict:i.j.k
    #[arg(long)]
    pub at: String,
    /// Contact orders with the listed divisors, in order.
    #[arg(long, value_delimiter = ',')]
    pub gamma: Vec<i64>,
    /// Contact order with the strict transform.
    #[arg(long)]
    pub gamma_x: Option<i64>,
}

#[derive(Args, Debug)]
pub struct CfArgs {
    #[arg(long)]
    pub n: i64,
    #[arg(long)]
    pub k: i64,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct JetArgs {
    #[arg(long)]
    pub c: u32,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub q: u64,
    /// Lifting depth M (default n + 3).
    #[arg(long)]
    pub depth: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    pub budget: u128,
    /// Compare with the closed series at L = q.
    #[arg(long)]
    pub verify: bool,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct OracleDxArgs {
    #[command(flatten)]
    pub branch: BranchArgs,
    /// Terms of x(s) as exp:coef pairs, e.g. "4:1,6:2".
    #[arg(long, default_value = "")]
    pub arc_x: String,
    #[arg(long, default_value = "")]
    pub arc_y: String,
    #[arg(long, default_value_t = 101)]
    pub prime: u64,
    #[arg(long, default_value_t = 40)]
    pub depth: usize,
}

#[derive(Args, Debug)]
pub struct FixtureArgs {
    #[arg(long, default_value_t = 1)]
    pub a1: i64,
    #[arg(long, default_value_t = 1)]
    pub a2: i64,
    #[arg(long, default_value_t = 1)]
    pub c1: i64,
    #[arg(long, default_value_t = 1)]
    pub c2: i64,
    #[arg(long, default_value_t = 3)]
    pub d: i64,
    /// Class of E minus both strict transforms, as exp:coef pairs in L.
    #[arg(long, default_value = "2:1,1:-1")]
    pub rest: String,
    #[arg(long, default_value = "1:1")]
    pub x1: String,
    #[arg(long, default_value = "1:1")]
    pub x2: String,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

/// Text to print and whether the exit status is success.
#[derive(Debug, PartialEq, Eq)]
pub struct Output {
    pub text: String,
    pub success: bool,
}

impl Output {
    fn ok(text: String) -> Self {
        Self { text, success: true }
    }
}

/// Parses `"e:c,e:c"`; an empty string is the zero series.
pub fn parse_terms(flag: &str, s: &str) -> Result<Vec<(i64, i64)>> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            let (e, c) = t
                .split_once(':')
                .ok_or_else(|| anyhow!("{flag}: expected exp:coef, got {t:?}"))?;
            let e = e.trim().parse().with_context(|| format!("{flag}: bad exponent in {t:?}"))?;
            let c = c.trim().parse().with_context(|| format!("{flag}: bad coefficient in {t:?}"))?;
            Ok((e, c))
        })
        .collect()
}

fn parse_arc_terms(flag: &str, s: &str) -> Result<Vec<(usize, i64)>> {
    parse_terms(flag, s)?
        .into_iter()
        .map(|(e, c)| {
            usize::try_from(e)
                .map(|e| (e, c))
                .map_err(|_| anyhow!("{flag}: negative exponent {e}"))
        })
        .collect()
}

fn branch(args: &BranchArgs) -> Result<CurveBranch> {
    CurveBranch::new(args.mult, &args.exponents).map_err(|e| anyhow!("--mult/--exponents: {e}"))
}

fn series_json(s: &RationalSeries, expand: Option<&[LaurentPoly]>, values: Option<&[String]>) -> Value {
    let mut v = json!({ "series": s.to_json(), "text": s.to_string() });
    if let Some(e) = expand {
        v["expansion"] = json!(e.iter().map(|c| c.to_string()).collect::<Vec<_>>());
    }
    if let Some(sp) = values {
        v["specialized"] = json!(sp);
    }
    v
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

fn toric(a: &ToricArgs) -> Result<Output> {
    let s = toric_surface(a.p, a.q).map_err(|e| anyhow!("--p/--q: {e}"))?;
    if a.pipeline != Pipeline::Closed && s.t != 1 {
        bail!("--pipeline: the stratified pipeline needs t = 1, and ({}, {}) has t = {}", a.p, a.q, s.t);
    }
    let mode = match a.correction {
        CorrectionArg::Geometric => Correction::Geometric,
        CorrectionArg::AsDisplayed => Correction::AsDisplayed,
    };
    let mut results: Vec<(&str, RationalSeries)> = vec![];
    if a.pipeline != Pipeline::Stratified {
        results.push(("closed", pgeom_toric_closed(&s)));
    }
    if a.pipeline != Pipeline::Closed {
        results.push(("stratified", pgeom_toric_stratified_t1_with(&s, mode)?));
    }
    let equal = results.windows(2).all(|w| w[0].1 == w[1].1);

    let mut text = String::new();
    let mut jv = json!({ "p": a.p, "q": a.q, "b": s.b, "c": s.c, "t": s.t });
    if a.plan {
        let v = resolution_vectors(&s)?;
        let plan = stage_plan(&s)?;
        let strata = strata_numerical_data(&s, &plan);
        writeln!(text, "b = [{}], c = [{}], t = {}", join(&s.b), join(&s.c), s.t)?;
        let vs: Vec<String> = v.iter().map(|(x, y)| format!("({x}, {y})")).collect();
        writeln!(text, "fan vectors: {}", vs.join(", "))?;
        writeln!(text, "stages: a = {}, b = {}, r = {}", plan.a, plan.b_count, plan.r_count)?;
        for st in &strata {
            writeln!(text, "stratum {}: N = {}, nu = {}, codim = {}", serde_json::to_string(&st.index)?, st.n, st.nu, st.codim)?;
        }
        jv["fan"] = json!(v);
        jv["plan"] = serde_json::to_value(&plan)?;
        jv["strata"] = serde_json::to_value(&strata)?;
    }
    let multi = results.len() > 1;
    let mut jr = serde_json::Map::new();
    for (name, series) in &results {
        let expansion = a.expand.map(|n| series.expand(n)).transpose()?;
        let values: Option<Vec<String>> = match (a.expand, a.specialize) {
            (Some(n), Some(qv)) => Some(series.specialize(qv, n)?.iter().map(|x| x.to_string()).collect()),
            _ => None,
        };
        let prefix = if multi { format!("{name}: ") } else { String::new() };
        writeln!(text, "{prefix}{series}")?;
        if let Some(e) = &expansion {
            for (j, c) in e.iter().enumerate() {
                writeln!(text, "{prefix}T^{j}: {c}")?;
            }
        }
        if let (Some(sp), Some(qv)) = (&values, a.specialize) {
            writeln!(text, "{prefix}L = {qv}: [{}]", sp.join(", "))?;
        }
        jr.insert(name.to_string(), series_json(series, expansion.as_deref(), values.as_deref()));
    }
    jv["results"] = Value::Object(jr);
    if multi {
        writeln!(text, "equal: {equal}")?;
        jv["equal"] = json!(equal);
    }
    Ok(Output {
        text: if a.format == Format::Json { pretty(&jv) } else { text },
        success: equal,
    })
}

fn curve(a: &BranchArgs) -> Result<Output> {
    let b = branch(a)?;
    let res = build_chains(&b)?;
    let nodes: Vec<_> = res.chain_nodes();
    if a.format == Format::Json {
        let v = json!({
            "m": b.m,
            "exponents": b.exponents,
            "euclid": res.table.rows,
            "chain": nodes,
        });
        return Ok(Output::ok(pretty(&v)));
    }
    let mut text = String::new();
    for (i, row) in res.table.rows.iter().enumerate() {
        writeln!(text, "pair {}: kappa = {}, a = [{}], r = [{}]", i + 1, row.kappa, join(&row.a), join(&row.r))?;
    }
    for n in nodes {
        writeln!(
            text,
            "E{}  r = {}  N = {}  nu = {}  M = {}  mu = {}{}  neighbors: {}",
            n.id,
            n.r,
            n.n,
            n.nu,
            n.big_m,
            n.mu,
            if n.is_f { "  F" } else { "" },
            join(&n.neighbors)
        )?;
    }
    Ok(Output::ok(text))
}

fn node(flag: &str, s: &str) -> Result<NodeId> {
    s.parse().map_err(|e| anyhow!("{flag}: {e}"))
}

fn profile(a: &DxArgs) -> Result<ContactProfile> {
    let g = |i: usize| {
        a.gamma
            .get(i)
            .copied()
            .ok_or_else(|| anyhow!("--gamma: expected at least {} value(s)", i + 1))
    };
    let (kind, rest) = a.at.split_once(':').unwrap_or((a.at.as_str(), ""));
    Ok(match kind {
        "off" => ContactProfile::off_x(),
        "on-x" => ContactProfile::on_x(),
        "smooth" => ContactProfile::smooth_point(g(0)?),
        "interior" => ContactProfile::interior(node("--at", rest)?, g(0)?),
        "intersection" => {
            let parts: Vec<&str> = rest.split(|c| c == ',' || c == '/').collect();
            // accept both "1.2.1,1.2.2" and six comma-separated numbers
            let (x, y) = match parts.as_slice() {
                [x, y] => (node("--at", x)?, node("--at", y)?),
                [a1, a2, a3, b1, b2, b3] => (
                    node("--at", &format!("{a1}.{a2}.{a3}"))?,
                    node("--at", &format!("{b1}.{b2}.{b3}"))?,
                ),
                _ => bail!("--at: intersection needs two nodes, got {rest:?}"),
            };
            ContactProfile::intersection((x, g(0)?), (y, g(1)?))
        }
        "strict" => {
            let gx = a.gamma_x.ok_or_else(|| anyhow!("--gamma-x: required with --at strict"))?;
            ContactProfile::strict(node("--at", rest)?, g(0)?, gx)
        }
        other => bail!("--at: unknown location {other:?}"),
    })
}

fn dx(a: &DxArgs) -> Result<Output> {
    let b = branch(&a.branch)?;
    let prof = profile(a)?;
    let res = build_chains(&b)?;
    let out = dx_curve(&res, &prof)?;
    Ok(Output::ok(match a.branch.format {
        Format::Json => pretty(&json!({ "dx": out.value, "case": out.case, "case_number": out.case.number() })),
        Format::Text => match out.case.number() {
            Some(k) => format!("d_X = {} (case {k}, {:?})\n", out.value, out.case),
            None => format!("d_X = {} ({:?})\n", out.value, out.case),
        },
    }))
}

fn cf(a: &CfArgs) -> Result<Output> {
    let h = hj(a.n, a.k).map_err(|e| anyhow!("--n/--k: {e}"))?;
    Ok(Output::ok(match a.format {
        Format::Json => pretty(&serde_json::to_value(&h)?),
        Format::Text => format!("{}/{} = [{}]\n", h.numerator, h.denominator, join(&h.entries)),
    }))
}

fn jets(a: &JetArgs) -> Result<Output> {
    let mut req = JetCountRequest::new(a.c, a.n, a.q);
    req.budget = a.budget;
    if let Some(d) = a.depth {
        req.depth = d;
    }
    let r = liftable_jet_count(&req)?;
    let formula: Option<BigInt> = if a.verify {
        let s = toric_surface(1, a.c as i64)?;
        let coeffs = pgeom_toric_closed(&s).specialize_int(a.q as i64, a.n)?;
        Some(coeffs[a.n].clone())
    } else {
        None
    };
    let matches = formula.as_ref().is_none_or(|f| *f == BigInt::from(r.count));
    let success = r.stabilized && matches;
    let text = match a.format {
        Format::Json => {
            let mut v = json!({
                "count": r.count,
                "depth": r.depth,
                "stabilized": r.stabilized,
                "count_next": r.count_next,
            });
            if let Some(f) = &formula {
                v["formula"] = json!(f.to_string());
                v["matches"] = json!(matches);
            }
            pretty(&v)
        }
        Format::Text => {
            let mut t = format!(
                "count = {} (depth {}, depth {}: {}, stabilized: {})\n",
                r.count,
                r.depth,
                r.depth + 1,
                r.count_next,
                r.stabilized
            );
            if let Some(f) = &formula {
                writeln!(t, "formula = {f} (matches: {matches})")?;
            }
            t
        }
    };
    Ok(Output { text, success })
}

fn oracle_dx(a: &OracleDxArgs) -> Result<Output> {
    let b = branch(&a.branch)?;
    let arc = PlaneArc::new(&parse_arc_terms("--arc-x", &a.arc_x)?, &parse_arc_terms("--arc-y", &a.arc_y)?);
    let o = curve_dx_oracle(&b, &arc, a.prime, a.depth)?;
    let text = match a.branch.format {
        Format::Json => pretty(&serde_json::to_value(o)?),
        Format::Text => match o {
            OracleDx::Exact(v) => format!("d_X = {v}\n"),
            OracleDx::LowerBound(v) => format!("d_X > {v} (search cap reached)\n"),
        },
    };
    Ok(Output::ok(text))
}

fn fixtures(a: &FixtureArgs) -> Result<Output> {
    let lp = |flag: &str, s: &str| -> Result<LaurentPoly> { Ok(LaurentPoly::from_terms(parse_terms(flag, s)?)) };
    let classes = BlowupClasses {
        rest: lp("--rest", &a.rest)?,
        x1: lp("--x1", &a.x1)?,
        x2: lp("--x2", &a.x2)?,
    };
    let ea = fixture_blowup_example_a(a.a1, a.a2, a.c1, a.c2, a.d, &classes)?;
    let ca = fixture_a_closed(a.a1, a.a2, a.c1, a.c2, a.d, &classes);
    let eb = fixture_blowup_example_b(a.c1, a.c2, a.d, &classes)?;
    let cb = fixture_b_closed(a.c1, a.c2, a.d, &classes);
    let mut companion = vec![];
    for e in 1..=5 {
        let lhs = crate::motivic::contribution_of(&d_e_closed_d3(e)?, 3);
        companion.push((e, lhs == d_e_contribution_d3(e)?));
    }
    let rec = reconciliation_experiment(&[1, 2, 3])?;
    let success = ea == ca && eb == cb && companion.iter().all(|c| c.1);
    let text = match a.format {
        Format::Json => pretty(&json!({
            "example_a": { "assembled": ea.to_string(), "closed": ca.to_string(), "equal": ea == ca },
            "example_b": { "assembled": eb.to_string(), "closed": cb.to_string(), "equal": eb == cb },
            "companion": companion.iter().map(|(e, ok)| json!({ "e": e, "equal": ok })).collect::<Vec<_>>(),
            "reconciliation": rec,
        })),
        Format::Text => {
            let mut t = String::new();
            writeln!(t, "example A: {ea}")?;
            writeln!(t, "  closed:  {ca}")?;
            writeln!(t, "  equal: {}", ea == ca)?;
            writeln!(t, "example B: {eb}")?;
            writeln!(t, "  closed:  {cb}")?;
            writeln!(t, "  equal: {}", eb == cb)?;
            for (e, ok) in &companion {
                writeln!(t, "depth {e} companion identity: {ok}")?;
            }
            writeln!(t, "reconciliation: {}", rec.matching_identification)?;
            t
        }
    };
    Ok(Output { text, success })
}

fn check(a: &FormatArg) -> Result<Output> {
    let reports = acceptance::run_all();
    let success = reports.iter().all(|r| r.passed);
    let text = match a.format {
        Format::Json => pretty(&serde_json::to_value(&reports)?),
        Format::Text => reports.iter().map(|r| r.line() + "\n").collect(),
    };
    Ok(Output { text, success })
}

pub fn run(cli: &Cli) -> Result<Output> {
    match &cli.command {
        Command::Toric(a) => toric(a),
        Command::Curve(a) => curve(a),
        Command::Dx(a) => dx(a),
        Command::Cf(a) => cf(a),
        Command::Oracle(OracleCommand::Jets(a)) => jets(a),
        Command::Oracle(OracleCommand::Dx(a)) => oracle_dx(a),
        Command::Fixtures(a) => fixtures(a),
        Command::Check(a) => check(a),
    }
}

/// Parses `args` (without the program name) and runs the command.
pub fn run_args<I, S>(args: I) -> Result<Output>
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let argv = std::iter::once(std::ffi::OsString::from("singpoincare")).chain(args.into_iter().map(Into::into));
    let cli = Cli::try_parse_from(argv)?;
    run(&cli)
}
