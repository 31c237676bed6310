//! Command-line front end for border basis scheme computations.

use std::path::Path;
use std::time::Instant;

use bbs_core::bbscheme::{BBScheme, BBError};
use bbs_core::orderideal::{simplicial_counts, NeighborPair, OrderIdeal, OrderIdealError};
use bbs_core::polyring::{GbOptions, PolyError, Polynomial, Q};
use bbs_core::reembed::{
    best_separating_tuples, check_separating_with, conjecture_survey, eliminate_non_exposed, gb_elimination,
    optimal_planar_search, quadric_rank, same_ideal, simplicial_reembed, verify_lshape_pipeline, weight_assignment,
    zsep_reembed, ReembedError, ReembeddingResult, SearchOptions, Separation, SurveyStatus,
};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};
use thiserror::Error;

pub const SCHEMA: u64 = 1;
pub const EXIT_OK: u8 = 0;
pub const EXIT_REJECTED: u8 = 1;
pub const EXIT_BUDGET: u8 = 2;
pub const EXIT_USAGE: u8 = 3;

#[derive(Parser, Debug, Clone)]
#[command(name = "bbs", version, about = "Border basis schemes and their re-embeddings")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Order ideal: "box 2 3", "simplicial 3 1", "lshape", inline JSON or a JSON file path.
    #[arg(long, global = true)]
    pub ideal: Option<String>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub out: Format,
    /// Worker threads for the parallel searches (default: all cores).
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// Reduction steps allowed per Gröbner basis computation.
    #[arg(long, global = true, default_value_t = 10_000_000)]
    pub gb_budget: u64,
    /// Nodes allowed in tuple searches.
    #[arg(long, global = true, default_value_t = 1_000_000)]
    pub search_budget: u64,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug, Clone, PartialEq, Eq)]
pub enum Command {
    /// Terms, border, rim and interior.
    Border,
    /// Natural generators (next-door and across-the-rim).
    Generators,
    /// Arrow degrees of the indeterminates.
    Grading,
    /// Exposed and non-exposed indeterminates.
    Exposure,
    /// Cotangent dimension and cotangent equivalence classes.
    Cotangent,
    /// Weight assignment for the non-exposed indeterminates (planar).
    Weights,
    /// Eliminates the non-exposed indeterminates (planar).
    Eliminate,
    /// All separating tuples of maximal size (MaxDeg).
    Best,
    /// Optimal separating re-embeddings from cotangent classes (planar).
    Optimal,
    /// Separating re-embedding along the interior indeterminates (simplicial).
    Simplicial,
    /// Verifies the L-shape affine-cell pipeline.
    LshapeVerify,
    /// Segmentation type against optimal re-embeddings for all small planar ideals.
    Survey {
        #[arg(long, default_value_t = 8)]
        mu_max: u32,
    },
    /// Elimination ideal by Gröbner bases, compared with substitution when Z separates.
    GbElim {
        /// Comma-separated indeterminates, e.g. "c11,c12".
        #[arg(long)]
        z: String,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Border => "border",
            Command::Generators => "generators",
            Command::Grading => "grading",
            Command::Exposure => "exposure",
            Command::Cotangent => "cotangent",
            Command::Weights => "weights",
            Command::Eliminate => "eliminate",
            Command::Best => "best",
            Command::Optimal => "optimal",
            Command::Simplicial => "simplicial",
            Command::LshapeVerify => "lshape-verify",
            Command::Survey { .. } => "survey",
            Command::GbElim { .. } => "gb-elim",
        }
    }

    fn needs_ideal(&self) -> bool {
        !matches!(self, Command::LshapeVerify | Command::Survey { .. })
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("malformed ideal: {0}")]
    Malformed(String),
    #[error(transparent)]
    OrderIdeal(#[from] OrderIdealError),
    #[error(transparent)]
    Reembed(#[from] ReembedError),
}

impl From<BBError> for CliError {
    fn from(e: BBError) -> Self {
        CliError::Reembed(e.into())
    }
}

impl From<PolyError> for CliError {
    fn from(e: PolyError) -> Self {
        CliError::Reembed(e.into())
    }
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Reembed(ReembedError::SearchBudget(_))
            | CliError::Reembed(ReembedError::Poly(PolyError::BudgetExhausted { .. })) => EXIT_BUDGET,
            _ => EXIT_REJECTED,
        }
    }

    fn kind(&self) -> &'static str {
        match self.exit_code() {
            EXIT_USAGE => "usage",
            EXIT_BUDGET => "budget",
            _ => "rejected",
        }
    }

    fn witness(&self) -> Value {
        match self {
            CliError::OrderIdeal(OrderIdealError::NotClosed { divisor, .. }) => json!(divisor),
            CliError::OrderIdeal(OrderIdealError::Duplicate(t)) => json!(t),
            _ => Value::Null,
        }
    }
}

/// Constructor shorthand, inline JSON `{"n": 2, "terms": [[0,0], …]}` or a path to such a file.
pub fn parse_ideal(src: &str) -> Result<OrderIdeal, CliError> {
    let trimmed = src.trim();
    if trimmed.starts_with('{') {
        return ideal_from_json(trimmed);
    }
    let words: Vec<&str> = trimmed.split_whitespace().collect();
    let nums = |ws: &[&str]| -> Result<Vec<u32>, CliError> {
        ws.iter().map(|w| w.parse::<u32>().map_err(|_| CliError::Malformed(format!("not a number: {w}")))).collect()
    };
    match words.as_slice() {
        ["lshape"] => Ok(OrderIdeal::lshape()),
        ["box", rest @ ..] if !rest.is_empty() => Ok(OrderIdeal::box_ideal(&nums(rest)?)?),
        ["simplicial", n, d] => {
            let v = nums(&[n, d])?;
            Ok(OrderIdeal::simplicial(v[0] as usize, v[1])?)
        }
        _ if Path::new(trimmed).is_file() => {
            let text = std::fs::read_to_string(trimmed).map_err(|e| CliError::Malformed(e.to_string()))?;
            ideal_from_json(&text)
        }
        _ => Err(CliError::Malformed(format!("unrecognized ideal source {trimmed:?}"))),
    }
}

fn ideal_from_json(text: &str) -> Result<OrderIdeal, CliError> {
    let v: Value = serde_json::from_str(text).map_err(|e| CliError::Malformed(e.to_string()))?;
    let n = v.get("n").and_then(Value::as_u64).ok_or_else(|| CliError::Malformed("missing integer field n".into()))?;
    let terms = v
        .get("terms")
        .and_then(Value::as_array)
        .ok_or_else(|| CliError::Malformed("missing array field terms".into()))?;
    let terms: Vec<Vec<u32>> = terms
        .iter()
        .map(|t| {
            t.as_array()
                .and_then(|a| a.iter().map(|e| e.as_u64().and_then(|x| u32::try_from(x).ok())).collect::<Option<Vec<u32>>>())
                .ok_or_else(|| CliError::Malformed(format!("bad exponent vector {t}")))
        })
        .collect::<Result<_, _>>()?;
    Ok(OrderIdeal::new(n as usize, &terms)?)
}

pub fn ideal_json(o: &OrderIdeal) -> Value {
    json!({ "n": o.n(), "terms": o.terms_as_vectors() })
}

fn rational(q: &Q) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Terms in decreasing degrevlex order; coefficients as `p/q`; exponents by variable name.
pub fn poly_json(s: &BBScheme, f: &Polynomial) -> Value {
    let terms: Vec<Value> = f
        .sorted_terms_degrevlex()
        .into_iter()
        .map(|(t, c)| {
            let mono: Map<String, Value> = t.support().map(|v| (s.var_name(v).to_string(), json!(t.exp(v)))).collect();
            json!([rational(c), mono])
        })
        .collect();
    json!({ "text": s.render(f), "terms": terms })
}

fn names(s: &BBScheme, vs: impl IntoIterator<Item = usize>) -> Vec<String> {
    vs.into_iter().map(|v| s.var_name(v).to_string()).collect()
}

fn reembedding_json(s: &BBScheme, r: &ReembeddingResult) -> Value {
    json!({
        "eliminated": names(s, r.eliminated.iter().copied()),
        "remaining": names(s, r.remaining.iter().copied()),
        "generators": r.generators.iter().map(|g| poly_json(s, g)).collect::<Vec<_>>(),
        "affine_cell": r.is_affine_cell(),
    })
}

/// Neighbor pair with 1-based border, term and variable indices.
fn pair_text(p: &NeighborPair) -> String {
    match *p {
        NeighborPair::NextDoor { k, lower, upper } => format!("next-door b{} = x{} b{}", upper + 1, k + 1, lower + 1),
        NeighborPair::AcrossRim { m, j, k, jp, l } => {
            format!("across-the-rim b{} = x{} t{}, b{} = x{} t{}", j + 1, k + 1, m + 1, jp + 1, l + 1, m + 1)
        }
    }
}

fn scheme_header(s: &BBScheme) -> Value {
    let o = s.order_ideal();
    json!({ "n": o.n(), "terms": o.terms_as_vectors(), "border": o.border_as_vectors() })
}

fn search_options(cli: &Cli) -> SearchOptions {
    SearchOptions { node_budget: cli.search_budget, ..SearchOptions::default() }
}

fn gb_options(cli: &Cli) -> GbOptions {
    GbOptions { step_budget: cli.gb_budget, ..GbOptions::default() }
}

fn payload(cli: &Cli, s: Option<&BBScheme>) -> Result<Value, CliError> {
    let scheme = || s.ok_or_else(|| CliError::Usage("--ideal is required".into()));
    Ok(match &cli.command {
        Command::Border => {
            let s = scheme()?;
            let o = s.order_ideal();
            let (rim, int) = o.rim_interior_split();
            let vecs = |ix: Vec<usize>| ix.into_iter().map(|i| o.terms_as_vectors()[i].clone()).collect::<Vec<_>>();
            json!({
                "mu": o.mu(), "nu": o.nu(),
                "border": o.border_as_vectors(),
                "rim": vecs(rim), "interior": vecs(int),
                "maxdeg": o.is_maxdeg(), "simplicial": o.simplicial_type(),
            })
        }
        Command::Generators => {
            let s = scheme()?;
            let gens: Vec<Value> = s
                .natural_generators()
                .iter()
                .map(|g| json!({ "label": g.label.to_string(), "poly": poly_json(s, &g.poly) }))
                .collect();
            json!({ "count": gens.len(), "commutator_entries": s.commutator_generators().len(), "natural": gens })
        }
        Command::Grading => {
            let s = scheme()?;
            let g = s.arrow_grading();
            let per_var: Map<String, Value> =
                (0..s.arity()).map(|v| (s.var_name(v).to_string(), json!(g.a.iter().map(|r| r[v]).collect::<Vec<_>>()))).collect();
            json!({ "arrow_degrees": per_var, "total": g.w, "c0": names(s, s.c0()) })
        }
        Command::Exposure => {
            let s = scheme()?;
            let e = s.exposure();
            let witness: Map<String, Value> =
                e.exposed.iter().map(|(&v, w)| (s.var_name(v).to_string(), json!({ "ell": w.ell + 1, "pair": pair_text(&w.pair) }))).collect();
            json!({ "exposed": names(s, e.exposed_vars()), "non_exposed": names(s, e.non_exposed.iter().copied()), "witnesses": witness })
        }
        Command::Cotangent => {
            let s = scheme()?;
            let c = s.cotangent_classes();
            json!({
                "cotangent_dim": s.cotangent_dim(),
                "e0": names(s, c.e0.iter().copied()),
                "proper": c.proper.iter().map(|e| names(s, e.iter().copied())).collect::<Vec<_>>(),
                "singletons": names(s, c.singletons.iter().copied()),
                "basic": names(s, c.basic.iter().copied()),
            })
        }
        Command::Weights => {
            let s = scheme()?;
            let w = weight_assignment(s)?;
            let wt: Map<String, Value> = (0..s.arity()).map(|v| (s.var_name(v).to_string(), json!(w.wt[v]))).collect();
            let chosen: Map<String, Value> = w.chosen.iter().map(|(&v, l)| (s.var_name(v).to_string(), json!(l.to_string()))).collect();
            json!({ "method": format!("{:?}", w.method), "weights": wt, "chosen": chosen, "verified": w.verify(s) })
        }
        Command::Eliminate => {
            let s = scheme()?;
            let (_, r) = eliminate_non_exposed(s)?;
            reembedding_json(s, &r)
        }
        Command::Best => {
            let s = scheme()?;
            let best = best_separating_tuples(s, cli.search_budget)?;
            json!({
                "count": best.len(),
                "size": best.first().map(Vec::len),
                "tuples": best.iter().map(|z| names(s, z.iter().copied())).collect::<Vec<_>>(),
            })
        }
        Command::Optimal => {
            let s = scheme()?;
            let r = optimal_planar_search(s, &search_options(cli))?;
            json!({
                "target": r.target,
                "candidates": r.candidates.len(),
                "found": r.found.iter().map(|(z, re)| json!({
                    "z": names(s, z.iter().copied()),
                    "optimal": z.len() == r.target && re.is_affine_cell(),
                    "reembedding": reembedding_json(s, re),
                })).collect::<Vec<_>>(),
                "undecided": r.undecided.iter().map(|z| names(s, z.iter().copied())).collect::<Vec<_>>(),
            })
        }
        Command::Simplicial => {
            let s = scheme()?;
            let (choice, r) = simplicial_reembed(s)?;
            let d = s.order_ideal().simplicial_type().unwrap_or(0);
            let counts = simplicial_counts(s.n() as u64, u64::from(d));
            json!({
                "type": d,
                "counts": { "mu": counts.mu, "nu": counts.nu, "interior": counts.interior, "rim": counts.rim,
                            "c": counts.c, "c_int": counts.c_int, "c_rim": counts.c_rim },
                "interior": names(s, choice.interior.iter().copied()),
                "generators_used": choice.labels.iter().map(ToString::to_string).collect::<Vec<_>>(),
                "cotangent_dim": s.cotangent_dim(),
                "dimension": s.n() * s.mu(),
                "minimal_quadrics": quadric_rank(&r),
                "reembedding": reembedding_json(s, &r),
            })
        }
        Command::LshapeVerify => {
            let r = verify_lshape_pipeline()?;
            let s = BBScheme::new(OrderIdeal::lshape());
            json!({
                "passed": r.passed(),
                "checks": r.checks.iter().map(|c| json!({ "name": c.name, "passed": c.passed, "detail": c.detail })).collect::<Vec<_>>(),
                "support_lengths": r.support_lengths,
                "final_variables": names(&s, r.final_vars.iter().copied()),
                "final_generators": r.final_generators.len(),
                "images": (0..s.arity()).map(|v| json!({ "var": s.var_name(v), "image": s.render(&r.images[v]) })).collect::<Vec<_>>(),
            })
        }
        Command::Survey { mu_max } => {
            let report = conjecture_survey(*mu_max, &search_options(cli), cli.search_budget);
            let rows: Vec<Value> = report
                .rows
                .iter()
                .map(|r| {
                    let s = BBScheme::new(r.ideal.clone());
                    json!({
                        "ideal": ideal_json(&r.ideal), "mu": r.mu, "d": r.d, "s": r.segmentation_type,
                        "target": r.target, "best_size": r.best_size, "best_count": r.best_count,
                        "candidates": r.candidates, "optimal": r.optimal,
                        "witness": r.witness.as_ref().map(|z| names(&s, z.iter().copied())),
                        "status": match &r.status {
                            SurveyStatus::Decided => "decided".to_string(),
                            SurveyStatus::Undecided => "undecided".to_string(),
                            SurveyStatus::Failed(e) => format!("failed: {e}"),
                        },
                        "consistent": r.consistent(),
                    })
                })
                .collect();
            json!({ "mu_max": mu_max, "ideals": rows.len(), "verdict": if report.is_consistent() { "consistent" } else { "inconsistent" }, "rows": rows })
        }
        Command::GbElim { z } => {
            let s = scheme()?;
            let mut zs = z
                .split(',')
                .map(|n| s.var_by_name(n.trim()).ok_or_else(|| CliError::Usage(format!("unknown indeterminate {n}"))))
                .collect::<Result<Vec<_>, _>>()?;
            zs.sort_unstable();
            zs.dedup();
            let elim = gb_elimination(s, &zs, &gb_options(cli))?;
            let substitution = match check_separating_with(s, &zs, &search_options(cli))? {
                Separation::Found(w) => {
                    let r = zsep_reembed(s, &w)?;
                    let agrees = same_ideal(&r.generators, &elim, s.arity(), &gb_options(cli))?;
                    json!({ "separating": true, "agrees": agrees, "reembedding": reembedding_json(s, &r) })
                }
                Separation::Impossible(why) => json!({ "separating": false, "reason": why }),
                Separation::NotFound => json!({ "separating": Value::Null, "reason": "no witness found" }),
            };
            json!({
                "z": names(s, zs.iter().copied()),
                "elimination": elim.iter().map(|g| poly_json(s, g)).collect::<Vec<_>>(),
                "substitution": substitution,
            })
        }
    })
}

/// Runs a command and returns the report with its exit code.
pub fn run(cli: &Cli) -> (Value, u8) {
    let start = Instant::now();
    let mut input = json!({
        "ideal": cli.ideal, "workers": cli.workers, "gb_budget": cli.gb_budget,
        "search_budget": cli.search_budget, "seed": cli.seed,
    });
    if let Command::Survey { mu_max } = cli.command {
        input["mu_max"] = json!(mu_max);
    }
    let mut report = json!({ "schema": SCHEMA, "command": cli.command.name(), "input": input });
    let outcome = (|| -> Result<Value, CliError> {
        let scheme = match (&cli.ideal, cli.command.needs_ideal()) {
            (Some(src), true) => Some(BBScheme::new(parse_ideal(src)?)),
            (None, true) => return Err(CliError::Usage(format!("{} requires --ideal", cli.command.name()))),
            (Some(_), false) => return Err(CliError::Usage(format!("{} takes no --ideal", cli.command.name()))),
            (None, false) => None,
        };
        if let Some(s) = &scheme {
            report["scheme"] = scheme_header(s);
        }
        let body = || payload(cli, scheme.as_ref());
        match cli.workers {
            Some(n) => rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build()
                .map_err(|e| CliError::Usage(e.to_string()))?
                .install(body),
            None => body(),
        }
    })();
    let code = match outcome {
        Ok(v) => {
            let failed = v.get("passed") == Some(&json!(false)) || v.get("verdict") == Some(&json!("inconsistent"));
            report["result"] = v;
            report["budget_exhausted"] = json!(false);
            if failed {
                EXIT_REJECTED
            } else {
                EXIT_OK
            }
        }
        Err(e) => {
            let code = e.exit_code();
            report["error"] = json!({ "kind": e.kind(), "reason": e.to_string(), "witness": e.witness() });
            report["budget_exhausted"] = json!(code == EXIT_BUDGET);
            code
        }
    };
    report["elapsed_ms"] = json!(start.elapsed().as_millis() as u64);
    (report, code)
}

/// Renders a report in the requested format.
pub fn execute(cli: &Cli) -> (String, u8) {
    let (report, code) = run(cli);
    let text = match cli.out {
        Format::Json => serde_json::to_string_pretty(&report).expect("serializable"),
        Format::Text => {
            let mut out = String::new();
            render_text(&report, 0, &mut out);
            out.trim_end().to_string()
        }
    };
    (text, code)
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::String(s) => Some(s.clone()),
        Value::Array(a) if a.iter().all(|x| !x.is_object() && !x.is_array()) => {
            Some(format!("[{}]", a.iter().filter_map(scalar).collect::<Vec<_>>().join(", ")))
        }
        Value::Array(a) if a.iter().all(|x| x.is_array() && scalar(x).is_some()) => {
            Some(format!("[{}]", a.iter().filter_map(scalar).collect::<Vec<_>>().join(", ")))
        }
        Value::Object(m) if m.contains_key("text") && m.contains_key("terms") => m["text"].as_str().map(str::to_string),
        Value::Object(_) | Value::Array(_) => None,
        other => Some(other.to_string()),
    }
}

fn render_text(v: &Value, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                match scalar(x) {
                    Some(s) => out.push_str(&format!("{pad}{k}: {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        render_text(x, depth + 1, out);
                    }
                }
            }
        }
        Value::Array(a) => {
            for x in a {
                match scalar(x) {
                    Some(s) => out.push_str(&format!("{pad}- {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}-\n"));
                        render_text(x, depth + 1, out);
                    }
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", scalar(other).unwrap_or_default())),
    }
}
