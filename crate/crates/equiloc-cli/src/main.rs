//! Command-line front door: model ingestion, computation dispatch,
//! machine-readable output and oracle cross-checks.
//!
//! Exit codes: 0 success, 1 domain errors (a witness that fails to cancel, a
//! failed identity, a check over tolerance) with a structured JSON body on
//! stdout, 2 malformed input.

use clap::{Parser, Subcommand, ValueEnum};
use equiloc::characters::{
    character_oracle, kirillov_identity_check, weyl_character_eval, DominantWeight,
};
use equiloc::dhmeasure::{density_fourier_check, dh_density};
use equiloc::gkm::{graded_dimension, poincare_rank_check, validate_graph, GkmGraph};
use equiloc::localize::{
    bv_localize, dh_localize, localization_sum, polynomiality_check, FixedPointModel,
    IntegrandSpec, Polynomiality,
};
use equiloc::pfaffian::{determinant, pfaffian, pfaffian_berezin, AntisymMatrix};
use equiloc::rootsys::{build_root_system, Family, RootSystem};
use equiloc::scalar::{parse_rational, GaussRat, PiScalar, Rational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(
    name = "equiloc",
    version,
    about = "Exact equivariant localization toolkit"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Seed for randomized checks and the verification suite.
    #[arg(long, global = true, default_value_t = 0xE91B0C)]
    seed: u64,
    /// Numeric tolerance override for --check comparisons.
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Exact Pfaffian of an antisymmetric rational matrix.
    Pfaffian {
        /// JSON file: array of rows of rationals ("p/q" strings or integers).
        #[arg(long)]
        matrix: String,
        /// Cross-check against the exterior-algebra route and the determinant.
        #[arg(long)]
        check: bool,
    },
    /// Fixed-point localization of an integrand over a model.
    Localize {
        #[arg(long)]
        model: String,
        /// "sympower:K" or "expsym".
        #[arg(long)]
        integrand: String,
        /// Optional evaluation point, comma-separated reals.
        #[arg(long)]
        at: Option<String>,
        #[arg(long)]
        check: bool,
    },
    /// Exact pushforward density of a rank-one model.
    Dh {
        #[arg(long)]
        model: String,
        /// Write the density (breakpoints and exact piece coefficients) here.
        #[arg(long)]
        emit: Option<String>,
        /// Frequencies for the transform consistency check.
        #[arg(long, default_value = "0.5,1,2,5")]
        ts: String,
        #[arg(long)]
        check: bool,
    },
    /// Evaluate an irreducible character.
    Character {
        /// Root system family: A, B, C or D.
        #[arg(long = "type")]
        family: String,
        #[arg(long)]
        rank: usize,
        /// Comma-separated coefficients on the fundamental weights.
        #[arg(long)]
        lambda: String,
        /// Ambient evaluation point, comma-separated reals.
        #[arg(long)]
        at: String,
        #[arg(long)]
        check: bool,
    },
    /// Check the orbit-transform character identity.
    Kirillov {
        #[arg(long = "type")]
        family: String,
        #[arg(long)]
        rank: usize,
        #[arg(long)]
        lambda: String,
        #[arg(long)]
        check: bool,
    },
    /// Moment-graph cohomology dimensions.
    Gkm {
        #[arg(long)]
        graph: String,
        /// Degree range "a..b" (inclusive) or a single degree.
        #[arg(long)]
        dims: Option<String>,
        /// Window for the Poincare series rank check.
        #[arg(long = "rank-check")]
        rank_check: Option<u32>,
        #[arg(long)]
        check: bool,
    },
    /// Run the full verification suite.
    Selftest {
        /// Accepted for uniformity; the suite always cross-checks.
        #[arg(long)]
        check: bool,
    },
}

enum CliError {
    /// Malformed input: exit 2, message on stderr.
    Input(String),
    /// Domain failure: exit 1, structured body on stdout.
    Domain(Value),
}

fn input_err<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Input(e.to_string())
}

fn read_file(path: &str) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {}", path, e)))
}

fn parse_f64_list(text: &str) -> Result<Vec<f64>, CliError> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|e| CliError::Input(format!("bad number '{}': {}", s, e)))
        })
        .collect()
}

fn parse_u64_list(text: &str) -> Result<Vec<u64>, CliError> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<u64>()
                .map_err(|e| CliError::Input(format!("bad coefficient '{}': {}", s, e)))
        })
        .collect()
}

fn load_root_system(family: &str, rank: usize) -> Result<RootSystem, CliError> {
    let family = Family::parse(family)
        .ok_or_else(|| CliError::Input(format!("unknown family '{}'", family)))?;
    build_root_system(family, rank).map_err(input_err)
}

fn dominant<'a>(rs: &'a RootSystem, lambda: &str) -> Result<DominantWeight<'a>, CliError> {
    let coeffs = parse_u64_list(lambda)?;
    if coeffs.len() != rs.rank() {
        return Err(CliError::Input(format!(
            "need {} weight coefficients, got {}",
            rs.rank(),
            coeffs.len()
        )));
    }
    DominantWeight::from_coeffs(rs, &coeffs).map_err(input_err)
}

// =============================================================================
// Subcommands
// =============================================================================

fn cmd_pfaffian(path: &str, check: bool, tol: Option<f64>) -> Result<Value, CliError> {
    let _ = tol;
    let text = read_file(path)?;
    let raw: Vec<Vec<Value>> = serde_json::from_str(&text).map_err(input_err)?;
    let rows: Vec<Vec<Rational>> = raw
        .iter()
        .map(|row| {
            row.iter()
                .map(|v| match v {
                    Value::Number(n) => n
                        .as_i64()
                        .map(equiloc::scalar::rat)
                        .ok_or_else(|| CliError::Input(format!("non-integer number {}", n))),
                    Value::String(s) => parse_rational(s)
                        .ok_or_else(|| CliError::Input(format!("bad rational '{}'", s))),
                    other => Err(CliError::Input(format!("bad entry {}", other))),
                })
                .collect()
        })
        .collect::<Result<_, _>>()?;
    let m = AntisymMatrix::from_rational_rows(rows).map_err(input_err)?;
    let pf = pfaffian(&m).map_err(input_err)?;
    let mut out = json!({
        "pfaffian": pf.to_string(),
        "float": pf.to_complex().re,
    });
    if check {
        let det = determinant(&m);
        let det_ok = &pf * &pf == det;
        let berezin_ok = if m.size() <= equiloc::pfaffian::MAX_BEREZIN_SIZE {
            pfaffian_berezin(&m).map_err(input_err)? == pf
        } else {
            true
        };
        out["check"] = json!({"square_is_det": det_ok, "berezin_agrees": berezin_ok});
        if !det_ok || !berezin_ok {
            return Err(CliError::Domain(json!({
                "error": {"kind": "check_failed", "detail": out}
            })));
        }
    }
    Ok(out)
}

fn parse_integrand(text: &str) -> Result<IntegrandSpec, CliError> {
    if text == "expsym" {
        return Ok(IntegrandSpec::ExpSym);
    }
    if let Some(k) = text.strip_prefix("sympower:") {
        let k: u32 = k
            .parse()
            .map_err(|e| CliError::Input(format!("bad power '{}': {}", k, e)))?;
        return Ok(IntegrandSpec::SymPower(k));
    }
    Err(CliError::Input(format!(
        "unknown integrand '{}'; use sympower:K or expsym",
        text
    )))
}

/// Deterministic regular sample points for a model's rank.
fn sample_points(rank: usize, seed: u64, count: usize) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| (0..rank).map(|_| rng.gen_range(0.3..1.1)).collect())
        .collect()
}

fn cmd_localize(
    path: &str,
    integrand: &str,
    at: Option<&str>,
    check: bool,
    seed: u64,
    tol: Option<f64>,
) -> Result<Value, CliError> {
    let tol = tol.unwrap_or(1e-9);
    let model = FixedPointModel::from_json_str(&read_file(path)?).map_err(CliError::Input)?;
    let spec = parse_integrand(integrand)?;
    let full = bv_localize(&model, &spec).map_err(input_err)?;
    let mut out = json!({});
    match spec {
        IntegrandSpec::SymPower(_) => {
            let bare = localization_sum(&model, &spec).map_err(input_err)?;
            let bare_poly = match polynomiality_check(&bare) {
                Polynomiality::Polynomial(p) => p,
                Polynomiality::NotPolynomial { witness } => {
                    return Err(CliError::Domain(json!({
                        "error": {
                            "kind": "not_polynomial",
                            "witness": witness.to_string(),
                        }
                    })));
                }
            };
            let full_poly = match polynomiality_check(&full) {
                Polynomiality::Polynomial(p) => p,
                Polynomiality::NotPolynomial { witness } => {
                    return Err(CliError::Domain(json!({
                        "error": {
                            "kind": "not_polynomial",
                            "witness": witness.to_string(),
                        }
                    })));
                }
            };
            out["result"] = Value::String(full_poly.to_string());
            out["intermediate_sum"] = Value::String(bare_poly.to_string());
            if let Some(c) = full_poly.as_constant() {
                out["float"] = json!(c.to_complex().re);
            }
            if check {
                // the combined polynomial must agree with the raw
                // term-by-term sum at regular sample points
                let mut worst = 0.0f64;
                for x in sample_points(model.rank(), seed, 5) {
                    let xc: Vec<num_complex::Complex64> = x
                        .iter()
                        .map(|&v| num_complex::Complex64::new(v, 0.0))
                        .collect();
                    let direct = full.eval(&x).map_err(input_err)?;
                    let combined = full_poly.eval(&xc);
                    worst = worst.max((direct - combined).norm());
                }
                out["check"] = json!({"max_recombination_error": worst});
                if worst > tol {
                    return Err(CliError::Domain(json!({
                        "error": {"kind": "check_failed", "detail": out}
                    })));
                }
            }
        }
        IntegrandSpec::ExpSym | IntegrandSpec::Custom(_) => {
            out["result"] = Value::String(full.to_string());
            if let Some(at) = at {
                let x = parse_f64_list(at)?;
                if x.len() != model.rank() {
                    return Err(CliError::Input(format!(
                        "evaluation point must have {} coordinates, got {}",
                        model.rank(),
                        x.len()
                    )));
                }
                let v = full.eval(&x).map_err(input_err)?;
                out["float"] = json!({"re": v.re, "im": v.im});
            }
            if check {
                // structural relation against the pushforward transform
                let dh = dh_localize(&model).map_err(input_err)?;
                let i_pow = PiScalar::from_gauss(GaussRat::i().pow((model.dim() / 2) as u32));
                let consistent = full == dh.scalar_mul(&i_pow);
                out["check"] = json!({"transform_relation": consistent});
                if !consistent {
                    return Err(CliError::Domain(json!({
                        "error": {"kind": "check_failed", "detail": out}
                    })));
                }
            }
        }
    }
    Ok(out)
}

fn density_json(d: &equiloc::dhmeasure::PiecewisePoly) -> Value {
    json!({
        "breakpoints": d
            .breakpoints()
            .iter()
            .map(|b| b.to_string())
            .collect::<Vec<_>>(),
        "pieces": d
            .pieces()
            .iter()
            .map(|p| {
                p.coeffs()
                    .iter()
                    .map(|c| c.to_string())
                    .collect::<Vec<_>>()
            })
            .collect::<Vec<_>>(),
        "mass": d.total_mass().to_string(),
    })
}

fn cmd_dh(
    path: &str,
    emit: Option<&str>,
    ts: &str,
    check: bool,
    tol: Option<f64>,
) -> Result<Value, CliError> {
    let tol = tol.unwrap_or(1e-8);
    let model = FixedPointModel::from_json_str(&read_file(path)?).map_err(CliError::Input)?;
    let density = dh_density(&model).map_err(input_err)?;
    let mut out = density_json(&density);
    if let Some(target) = emit {
        let body = serde_json::to_string_pretty(&out).map_err(input_err)?;
        std::fs::write(target, body + "\n")
            .map_err(|e| CliError::Input(format!("{}: {}", target, e)))?;
        out["emitted"] = Value::String(target.to_string());
    }
    if check {
        let ts = parse_f64_list(ts)?;
        let err = density_fourier_check(&density, &model, &ts).map_err(input_err)?;
        out["check"] = json!({"max_fourier_error": err});
        if err > tol {
            return Err(CliError::Domain(json!({
                "error": {"kind": "check_failed", "detail": out}
            })));
        }
    }
    Ok(out)
}

fn cmd_character(
    family: &str,
    rank: usize,
    lambda: &str,
    at: &str,
    check: bool,
    tol: Option<f64>,
) -> Result<Value, CliError> {
    let tol = tol.unwrap_or(1e-9);
    let rs = load_root_system(family, rank)?;
    let d = dominant(&rs, lambda)?;
    let x = parse_f64_list(at)?;
    if x.len() != rs.ambient_dim() {
        return Err(CliError::Input(format!(
            "point must have {} ambient coordinates, got {}",
            rs.ambient_dim(),
            x.len()
        )));
    }
    let v = weyl_character_eval(&d, &x).map_err(input_err)?;
    let mut out = json!({"re": v.re, "im": v.im});
    if check {
        let oracle = character_oracle(&d, &x).map_err(input_err)?;
        let gap = (v - oracle).norm();
        out["check"] = json!({"oracle_gap": gap});
        if gap > tol {
            return Err(CliError::Domain(json!({
                "error": {"kind": "check_failed", "detail": out}
            })));
        }
    }
    Ok(out)
}

fn cmd_kirillov(
    family: &str,
    rank: usize,
    lambda: &str,
    check: bool,
    seed: u64,
    tol: Option<f64>,
) -> Result<Value, CliError> {
    let tol = tol.unwrap_or(1e-9);
    let rs = load_root_system(family, rank)?;
    let d = dominant(&rs, lambda)?;
    let report = kirillov_identity_check(&d).map_err(input_err)?;
    let mut out = json!({
        "equal": report.equal,
        "lhs": report.lhs.to_string(),
        "rhs": report.rhs.to_string(),
        "half_dim": report.half_dim,
    });
    if check {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut worst = 0.0f64;
        let mut tried = 0;
        while tried < 20 {
            let x: Vec<f64> = {
                let mut x: Vec<f64> = (0..rs.ambient_dim())
                    .map(|_| rng.gen_range(-1.0..1.0))
                    .collect();
                if rs.family() == Family::A {
                    let mean = x.iter().sum::<f64>() / x.len() as f64;
                    for v in &mut x {
                        *v -= mean;
                    }
                }
                x
            };
            if rs
                .positive_roots()
                .iter()
                .any(|r| r.pairing_f64(&x).norm() < 0.05)
            {
                continue;
            }
            tried += 1;
            let l = report.lhs.eval(&x).map_err(input_err)?;
            let r = report.rhs.eval(&x).map_err(input_err)?;
            worst = worst.max((l - r).norm());
        }
        out["check"] = json!({"max_numeric_gap": worst});
        if worst > tol {
            return Err(CliError::Domain(json!({
                "error": {"kind": "check_failed", "detail": out}
            })));
        }
    }
    if !report.equal {
        return Err(CliError::Domain(json!({
            "error": {"kind": "identity_failed", "detail": out}
        })));
    }
    Ok(out)
}

fn parse_degree_range(text: &str) -> Result<(u32, u32), CliError> {
    if let Some((a, b)) = text.split_once("..") {
        let lo: u32 = a.trim().parse().map_err(input_err)?;
        let hi: u32 = b.trim().parse().map_err(input_err)?;
        if lo > hi {
            return Err(CliError::Input(format!("empty range '{}'", text)));
        }
        Ok((lo, hi))
    } else {
        let k: u32 = text.trim().parse().map_err(input_err)?;
        Ok((k, k))
    }
}

fn cmd_gkm(
    path: &str,
    dims: Option<&str>,
    rank_check: Option<u32>,
    check: bool,
) -> Result<Value, CliError> {
    let graph = GkmGraph::from_json_str(&read_file(path)?).map_err(CliError::Input)?;
    let violations = validate_graph(&graph);
    if !violations.is_empty() {
        let listed: Vec<Value> = violations
            .iter()
            .map(|v| {
                json!({
                    "vertex": v.vertex,
                    "first": v.first.to_string(),
                    "second": v.second.to_string(),
                })
            })
            .collect();
        return Err(CliError::Domain(json!({
            "error": {"kind": "independence_violation", "violations": listed}
        })));
    }
    let mut out = json!({"vertices": graph.vertices().len(), "edges": graph.edges().len()});
    if let Some(range) = dims {
        let (lo, hi) = parse_degree_range(range)?;
        let values: Vec<usize> = (lo..=hi)
            .map(|k| graded_dimension(&graph, k))
            .collect::<Result<_, _>>()
            .map_err(input_err)?;
        out["dims"] = json!(values);
        if check {
            // dimensions are invariant under flipping edge-weight signs
            let flipped = GkmGraph::new(
                graph.rank(),
                graph.vertices().to_vec(),
                graph
                    .edges()
                    .iter()
                    .map(|e| equiloc::gkm::GkmEdge {
                        u: e.u.clone(),
                        v: e.v.clone(),
                        alpha: e.alpha.neg(),
                    })
                    .collect(),
            )
            .map_err(input_err)?;
            let again: Vec<usize> = (lo..=hi)
                .map(|k| graded_dimension(&flipped, k))
                .collect::<Result<_, _>>()
                .map_err(input_err)?;
            let consistent = again == values;
            out["check"] = json!({"sign_flip_invariant": consistent});
            if !consistent {
                return Err(CliError::Domain(json!({
                    "error": {"kind": "check_failed", "detail": out}
                })));
            }
        }
    }
    if let Some(kmax) = rank_check {
        let report = poincare_rank_check(&graph, kmax).map_err(input_err)?;
        out["rank_check"] = json!({
            "series": report.series,
            "formal": report.formal,
            "rank": report.rank,
            "rank_equals_vertices": report.rank == graph.vertices().len() as i64,
        });
        if !report.formal {
            return Err(CliError::Domain(json!({
                "error": {"kind": "not_formal", "detail": out}
            })));
        }
    }
    Ok(out)
}

fn cmd_selftest(seed: u64) -> Result<Value, CliError> {
    let outcomes = equiloc::selftest::run_all(seed);
    let mut all_ok = true;
    let mut rows = Vec::new();
    for o in &outcomes {
        println!("{}", o);
        all_ok &= o.passed;
        rows.push(json!({
            "name": o.name,
            "passed": o.passed,
            "detail": o.detail,
            "seconds": o.elapsed.as_secs_f64(),
        }));
    }
    if !all_ok {
        return Err(CliError::Domain(json!({
            "error": {"kind": "selftest_failed", "results": rows}
        })));
    }
    Ok(json!({"passed": true, "criteria": rows.len()}))
}

// =============================================================================
// Output shaping
// =============================================================================

fn scalar_string(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn render(format: Format, value: &Value) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(value).expect("serializable"),
        Format::Text => {
            let mut lines = Vec::new();
            if let Value::Object(map) = value {
                for (k, v) in map {
                    lines.push(format!("{}: {}", k, scalar_string(v)));
                }
            } else {
                lines.push(scalar_string(value));
            }
            lines.join("\n")
        }
        Format::Csv => {
            let mut lines = Vec::new();
            if let Value::Object(map) = value {
                for (k, v) in map {
                    match v {
                        Value::Array(items) => {
                            let cells: Vec<String> = items.iter().map(scalar_string).collect();
                            lines.push(format!("{},{}", k, cells.join(",")));
                        }
                        other => lines.push(format!("{},{}", k, scalar_string(other))),
                    }
                }
            } else {
                lines.push(scalar_string(value));
            }
            lines.join("\n")
        }
    }
}

fn main() {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Pfaffian { matrix, check } => cmd_pfaffian(matrix, *check, cli.tol),
        Command::Localize {
            model,
            integrand,
            at,
            check,
        } => cmd_localize(model, integrand, at.as_deref(), *check, cli.seed, cli.tol),
        Command::Dh {
            model,
            emit,
            ts,
            check,
        } => cmd_dh(model, emit.as_deref(), ts, *check, cli.tol),
        Command::Character {
            family,
            rank,
            lambda,
            at,
            check,
        } => cmd_character(family, *rank, lambda, at, *check, cli.tol),
        Command::Kirillov {
            family,
            rank,
            lambda,
            check,
        } => cmd_kirillov(family, *rank, lambda, *check, cli.seed, cli.tol),
        Command::Gkm {
            graph,
            dims,
            rank_check,
            check,
        } => cmd_gkm(graph, dims.as_deref(), *rank_check, *check),
        Command::Selftest { check: _ } => cmd_selftest(cli.seed),
    };
    match result {
        Ok(value) => {
            println!("{}", render(cli.format, &value));
        }
        Err(CliError::Domain(body)) => {
            println!("{}", render(cli.format, &body));
            std::process::exit(1);
        }
        Err(CliError::Input(message)) => {
            eprintln!("error: {}", message);
            std::process::exit(2);
        }
    }
}
