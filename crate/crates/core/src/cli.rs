//! The `ritt` command-line tool.
//!
//! Every command produces a [`CommandResult`]. Without `--json` a readable
//! summary goes to stdout; `--json` prints the result as JSON instead, and
//! `--json FILE` writes it to `FILE` next to the summary. The exit code is 0
//! exactly when the status is `ok`.

use std::io::Write as _;
use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use crate::classify::{count_left_classes, left_right_partition, Shape};
use crate::enumerate::{
    classify_branching_datum, enumerate_nonhyperbolic_galois, enumerate_ritt_prime_solutions,
};
use crate::lattice::{Lattice, SublatticeSpec};
use crate::permgroup::{
    affine_identification, check_local_orders, decompose_covering, galois_closure_genus,
    genus_from_monodromy, is_primitive, MonodromyDatum, PermError,
};
use crate::radical::{
    apply_composition, chebyshev_sample, invert_composition, verify_inverse, ForwardMap,
};
use crate::ritt::{
    best_invariant_sublattice, build_ritt_function, default_parent, verify_identity,
};
use crate::sampling;
use crate::{parse_complex, CaseTag, Complex, Show};

#[derive(Debug, Parser)]
#[command(
    name = "ritt",
    version,
    about = "Prime-degree rational maps invertible in radicals"
)]
pub struct Cli {
    /// Seed for every random draw.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Requested absolute accuracy of elliptic-function evaluation.
    #[arg(long, global = true, default_value_t = 1e-12)]
    pub tol: f64,
    /// Emit JSON: to stdout, or to FILE when given.
    #[arg(long, global = true, value_name = "FILE", num_args = 0..=1)]
    pub json: Option<Option<PathBuf>>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List admissible branching data.
    Enumerate(EnumerateArgs),
    /// Construct R with S_Λ'(z) = R(S_Λ(z)) and verify it.
    Build(BuildArgs),
    /// Analyse a monodromy datum.
    Analyze(AnalyzeArgs),
    /// Count equivalence classes.
    Count(CountArgs),
    /// Invert a map in radicals.
    Invert(InvertArgs),
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("what").required(true).args(["chi", "ritt_prime"])))]
pub struct EnumerateArgs {
    /// Euler characteristic of the covering surface (2 or 0).
    #[arg(long, allow_hyphen_values = true)]
    pub chi: Option<i64>,
    /// Solutions of the order equation for affine monodromy.
    #[arg(long)]
    pub ritt_prime: bool,
}

#[derive(Debug, Args)]
pub struct BuildArgs {
    /// Torus case: 2222, 333, 244 or 236.
    #[arg(long)]
    pub case: CaseTag,
    /// Prime degree.
    #[arg(long)]
    pub p: u64,
    /// Period ratio of the parent lattice, e.g. 0.31+1.27i.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub tau: Option<Complex>,
    /// Sublattice in Hermite normal form, as a,b,d.
    #[arg(long, value_delimiter = ',')]
    pub hnf: Option<Vec<i64>>,
    /// Random points used by the identity check.
    #[arg(long, default_value_t = 100)]
    pub samples: usize,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// Local monodromies in 1-indexed cycle notation, separated by ';'.
    #[arg(long)]
    pub perms: String,
    /// Local multiplicities d_1,…,d_b (0 = unconstrained).
    #[arg(long, value_delimiter = ',')]
    pub exponents: Option<Vec<u32>>,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("what").required(true).args(["case", "partition"])))]
pub struct CountArgs {
    /// Count left classes for this torus case.
    #[arg(long)]
    pub case: Option<CaseTag>,
    /// Left-right partition for harmonic or equianharmonic branch points.
    #[arg(long)]
    pub partition: Option<Shape>,
    /// Prime degree.
    #[arg(long)]
    pub p: u64,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("map").required(true).args(["power", "chebyshev", "quartic"])))]
pub struct InvertArgs {
    /// Invert z ↦ z^d.
    #[arg(long)]
    pub power: Option<u32>,
    /// Invert the Chebyshev polynomial T_n.
    #[arg(long)]
    pub chebyshev: Option<u32>,
    /// Invert z ↦ c4·z⁴ + … + c0, coefficients given highest first.
    #[arg(long, value_delimiter = ',', value_parser = parse_complex, allow_hyphen_values = true)]
    pub quartic: Option<Vec<Complex>>,
    /// Evaluate the inverse at this point.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub at: Option<Complex>,
    /// Random points used by the round-trip check.
    #[arg(long, default_value_t = 100)]
    pub samples: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    Error,
}

/// Uniform envelope for every command's output.
#[derive(Debug, Clone, Serialize)]
pub struct CommandResult {
    pub command: String,
    pub status: Status,
    pub payload: Value,
    pub diagnostics: Vec<String>,
    #[serde(skip)]
    pub summary: String,
}

impl CommandResult {
    fn ok(command: &str, payload: Value, summary: String) -> Self {
        CommandResult {
            command: command.into(),
            status: Status::Ok,
            payload,
            diagnostics: Vec::new(),
            summary,
        }
    }

    fn error(command: &str, message: String) -> Self {
        CommandResult {
            command: command.into(),
            status: Status::Error,
            payload: Value::Null,
            diagnostics: vec![message.clone()],
            summary: format!("error: {message}"),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self.status {
            Status::Ok => 0,
            Status::Error => 1,
        }
    }
}

fn cx(z: Complex) -> Value {
    json!([z.re, z.im])
}

/// Runs one parsed invocation.
pub fn execute(cli: &Cli) -> CommandResult {
    match &cli.command {
        Command::Enumerate(a) => cmd_enumerate(a),
        Command::Build(a) => cmd_build(a, cli.seed, cli.tol),
        Command::Analyze(a) => cmd_analyze(a),
        Command::Count(a) => cmd_count(a),
        Command::Invert(a) => cmd_invert(a, cli.seed),
    }
}

pub fn cmd_enumerate(args: &EnumerateArgs) -> CommandResult {
    if args.ritt_prime {
        let sols = enumerate_ritt_prime_solutions();
        let rows: Vec<String> = sols
            .iter()
            .map(|t| {
                format!(
                    "({})",
                    t.iter()
                        .map(ToString::to_string)
                        .collect::<Vec<_>>()
                        .join(",")
                )
            })
            .collect();
        let summary = format!(
            "{} solutions of Σ 1/ord a_i = b − 2:\n  {}",
            rows.len(),
            rows.join("\n  ")
        );
        return CommandResult::ok("enumerate", json!({ "ritt_prime": sols }), summary);
    }
    let chi = args.chi.expect("clap requires --chi or --ritt-prime");
    match enumerate_nonhyperbolic_galois(chi) {
        Ok(data) => {
            let rows: Vec<String> = data
                .iter()
                .map(|d| {
                    let degree = d.degree.map_or_else(|| "-".to_string(), |n| n.to_string());
                    format!("{:<9} b={}  d={}", d.case.to_string(), d.b, degree)
                })
                .collect();
            let summary = format!(
                "chi = {chi}: {} branching data\n  {}",
                rows.len(),
                rows.join("\n  ")
            );
            CommandResult::ok("enumerate", json!({ "chi": chi, "data": data }), summary)
        }
        Err(e) => CommandResult::error("enumerate", e.to_string()),
    }
}

pub fn cmd_build(args: &BuildArgs, seed: u64, tol: f64) -> CommandResult {
    let run = || -> Result<CommandResult, String> {
        let parent = match args.tau {
            Some(tau) => Lattice::from_tau(tau).map_err(|e| e.to_string())?,
            None => default_parent(args.case).map_err(|e| e.to_string())?,
        };
        let spec = match args.hnf.as_deref() {
            Some(&[a, b, d]) => SublatticeSpec::new(a, b, d).map_err(|e| e.to_string())?,
            Some(_) => return Err("--hnf takes exactly three integers a,b,d".into()),
            None => {
                best_invariant_sublattice(args.case, &parent, args.p).map_err(|e| e.to_string())?
            }
        };
        if spec.index() != args.p {
            return Err(format!(
                "sublattice has index {}, not {}",
                spec.index(),
                args.p
            ));
        }
        let r = build_ritt_function(args.case, &parent, &spec, tol).map_err(|e| e.to_string())?;
        let mut rng = sampling::rng(seed);
        let err = verify_identity(&r, args.case, &parent, &spec, args.samples, &mut rng, tol)
            .map_err(|e| e.to_string())?;
        let t = spec.transform();
        let mut summary = format!(
            "case {} p={} tau={} sublattice [[{},{}],[0,{}]]\ndegree {}  poles {}  max identity error {:.3e} over {} samples",
            args.case,
            args.p,
            Show(parent.tau()),
            t[0][0],
            t[0][1],
            t[1][1],
            r.degree(),
            r.poles.len(),
            err,
            args.samples
        );
        for pole in &r.poles {
            summary.push_str(&format!(
                "\n  pole at {:.6} of order {}",
                Show(pole.location),
                pole.order()
            ));
        }
        let payload = json!({
            "tau": cx(parent.tau()),
            "sublattice": { "a": t[0][0], "b": t[0][1], "d": t[1][1] },
            "rational": r,
            "verify": { "samples": args.samples, "seed": seed, "max_error": err },
        });
        Ok(CommandResult::ok("build", payload, summary))
    };
    run().unwrap_or_else(|e| CommandResult::error("build", e))
}

/// A JSON scalar for the text summary, with `null` shown as "unknown".
fn known(v: &Value) -> String {
    match v {
        Value::Null => "unknown".into(),
        other => other.to_string(),
    }
}

pub fn cmd_analyze(args: &AnalyzeArgs) -> CommandResult {
    let datum = match MonodromyDatum::parse(&args.perms, args.exponents.clone()) {
        Ok(d) => d,
        Err(e) => return CommandResult::error("analyze", e.to_string()),
    };
    let group = datum.group();
    let mut diagnostics = Vec::new();
    let mut note = |r: Result<Value, PermError>| {
        r.unwrap_or_else(|e| {
            diagnostics.push(e.to_string());
            Value::Null
        })
    };

    let transitive = datum.is_transitive();
    let product_identity = datum.product_is_identity();
    let genus = note(genus_from_monodromy(&datum).map(|g| json!(g)));
    let closure =
        note(galois_closure_genus(&datum).map(|(n, g)| json!({ "order": n, "genus": g })));
    let order = note(group.order().map(|n| json!(n)));
    let solvable = note(group.is_solvable().map(|s| json!(s)));
    let primitive = is_primitive(&group);
    let decomposition = if transitive && solvable == json!(true) {
        note(decompose_covering(&group).map(|d| {
            json!({
                "chains": d.chains.iter().map(|c| json!({
                    "piece_degrees": c.piece_degrees,
                    "pieces_primitive": c.pieces_primitive,
                    "block_sizes": c.systems.iter().map(|s| s.block_size()).collect::<Vec<_>>(),
                })).collect::<Vec<_>>(),
                "truncated": d.truncated,
            })
        }))
    } else {
        Value::Null
    };
    let affine = if transitive && primitive && solvable == json!(true) {
        note(affine_identification(&group).map(|a| json!(a)))
    } else {
        Value::Null
    };
    let exponents: Vec<u32> = match datum.exponents() {
        Some(e) => e.to_vec(),
        None => datum.perms().iter().map(|p| p.order() as u32).collect(),
    };
    let classification = classify_branching_datum(exponents.len(), &exponents).ok();
    let radicals = match solvable.as_bool() {
        Some(true) => "invertible in radicals",
        Some(false) => "not invertible in radicals",
        None => "unknown",
    };

    let closure_text = match (closure.get("order"), closure.get("genus")) {
        (Some(n), Some(g)) => format!("order {n}, genus {g}"),
        _ => "unknown".into(),
    };
    let mut summary = format!(
        "degree {}  branch points {}\ntransitive {}  product identity {}\ngenus {}  Galois closure {}\ngroup order {}  solvable {}  primitive {}\nverdict: {}",
        datum.degree(),
        datum.perms().len(),
        transitive,
        product_identity,
        known(&genus),
        closure_text,
        known(&order),
        known(&solvable),
        primitive,
        radicals
    );
    if let Some(chains) = decomposition.get("chains").and_then(Value::as_array) {
        for c in chains {
            summary.push_str(&format!("\nchain piece degrees {}", c["piece_degrees"]));
        }
    }
    if let Some(images) = affine.get("generator_images") {
        summary.push_str(&format!("\naffine images (a, b): {images}"));
    }
    if let Some(c) = &classification {
        summary.push_str(&format!("\nbranching {:?} → {}", exponents, c.verdict));
    }
    let payload = json!({
        "degree": datum.degree(),
        "perms": datum.perms().iter().map(ToString::to_string).collect::<Vec<_>>(),
        "transitive": transitive,
        "product_identity": product_identity,
        "local_orders_ok": check_local_orders(&datum),
        "genus": genus,
        "galois_closure": closure,
        "group_order": order,
        "solvable": solvable,
        "primitive": primitive,
        "decomposition": decomposition,
        "affine": affine,
        "exponents": exponents,
        "classification": classification,
        "radicals": radicals,
    });
    let mut result = CommandResult::ok("analyze", payload, summary);
    diagnostics.dedup();
    result.diagnostics = diagnostics;
    result
}

pub fn cmd_count(args: &CountArgs) -> CommandResult {
    if let Some(case) = args.case {
        return match count_left_classes(case, args.p) {
            Ok(n) => CommandResult::ok(
                "count",
                json!({ "case": case, "p": args.p, "left_classes": n }),
                format!("case {case}, p = {}: {n} left classes", args.p),
            ),
            Err(e) => CommandResult::error("count", e.to_string()),
        };
    }
    let shape = args.partition.expect("clap requires --case or --partition");
    match left_right_partition(args.p, shape) {
        Ok(s) => CommandResult::ok(
            "count",
            json!({ "shape": shape, "p": args.p, "partition": s, "description": s.to_string() }),
            format!("{shape:?} p = {}: {} ({} classes)", args.p, s, s.total),
        ),
        Err(e) => CommandResult::error("count", e.to_string()),
    }
}

pub fn cmd_invert(args: &InvertArgs, seed: u64) -> CommandResult {
    let map = if let Some(d) = args.power {
        ForwardMap::Power { d }
    } else if let Some(n) = args.chebyshev {
        ForwardMap::Chebyshev { n }
    } else {
        let mut coeffs = args.quartic.clone().expect("clap requires a map");
        if coeffs.len() != 5 {
            return CommandResult::error(
                "invert",
                "--quartic takes exactly five coefficients".into(),
            );
        }
        coeffs.reverse();
        ForwardMap::Quartic { coeffs }
    };
    let parts = [map.clone()];
    let expr = match invert_composition(&parts) {
        Ok(e) => e,
        Err(e) => return CommandResult::error("invert", e.to_string()),
    };
    let mut rng = sampling::rng(seed);
    let check = match &map {
        ForwardMap::Chebyshev { .. } => verify_inverse(
            |z| apply_composition(&parts, z),
            &expr,
            args.samples,
            &mut rng,
            chebyshev_sample,
        ),
        _ => verify_inverse(
            |z| apply_composition(&parts, z),
            &expr,
            args.samples,
            &mut rng,
            |r| sampling::disc(r, 2.0),
        ),
    };
    let check = match check {
        Ok(c) => c,
        Err(e) => return CommandResult::error("invert", e.to_string()),
    };
    let mut summary = format!(
        "inverse: {expr}\nround trip over {} samples: max error {:.3e}",
        check.samples, check.max_error
    );
    let mut at = Value::Null;
    if let Some(w) = args.at {
        match expr.eval(w) {
            Ok(ev) => {
                let values: Vec<Value> = ev
                    .values
                    .iter()
                    .map(|&z| json!({ "z": cx(z), "error": (map.apply(z) - w).norm() }))
                    .collect();
                summary.push_str(&format!("\nat w = {}:", Show(w)));
                for &z in &ev.values {
                    summary.push_str(&format!(
                        "\n  z = {:.12}  |f(z) − w| = {:.3e}",
                        Show(z),
                        (map.apply(z) - w).norm()
                    ));
                }
                at = json!({ "w": cx(w), "values": values, "diagnostics": ev.diagnostics });
            }
            Err(e) => return CommandResult::error("invert", e.to_string()),
        }
    }
    let payload = json!({
        "map": map,
        "expression": expr.to_text(),
        "verify": check,
        "seed": seed,
        "at": at,
    });
    CommandResult::ok("invert", payload, summary)
}

/// Parses `std::env::args`, runs the command, prints, and returns the exit code.
pub fn run() -> i32 {
    let cli = Cli::parse();
    let result = execute(&cli);
    emit(&cli, &result)
}

fn emit(cli: &Cli, result: &CommandResult) -> i32 {
    let text = serde_json::to_string_pretty(result).expect("results serialize");
    match &cli.json {
        Some(None) => {
            let _ = writeln!(std::io::stdout(), "{text}");
        }
        Some(Some(path)) => {
            if let Err(e) = std::fs::write(path, text + "\n") {
                eprintln!("error: cannot write {}: {e}", path.display());
                return 1;
            }
            print_summary(result);
        }
        None => print_summary(result),
    }
    result.exit_code()
}

fn print_summary(result: &CommandResult) {
    match result.status {
        Status::Ok => {
            // A closed pipe (e.g. `| head`) is not an error worth reporting.
            let mut out = std::io::stdout().lock();
            let _ = writeln!(out, "{}", result.summary);
            for d in &result.diagnostics {
                let _ = writeln!(out, "note: {d}");
            }
        }
        Status::Error => eprintln!("{}", result.summary),
    }
}
