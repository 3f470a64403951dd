use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::json;

use wildres::classification::{classify_ww, validate_rs};
use wildres::contfrac::ncf_expand;
use wildres::graph::{
    fiber_relation_check, intersection_matrix, is_negative_definite, is_tree, leading_minors,
    MatrixView,
};
use wildres::io::{
    emit_dot, emit_json, parse_graph_json, parse_polynomial, parse_positive, parse_rational,
    parse_valuation, ParsedValuation,
};
use wildres::maclane::{BaseField, Characteristic};
use wildres::npath::{is_npath, is_shortest_npath, shortest_npath};
use wildres::resolution::{minimal_resolution, rs_graph, ResolutionGraph, View};
use wildres::{Error, ErrorKind, Rational};
use wildres_cli::sweep;

#[derive(Parser)]
#[command(
    name = "wildres",
    version,
    about = "Exact resolution graphs from Mac Lane valuations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Dot,
}

#[derive(Clone, Copy, ValueEnum)]
enum ViewArg {
    Full,
    Extended,
    Exceptional,
}

impl From<ViewArg> for View {
    fn from(v: ViewArg) -> View {
        match v {
            ViewArg::Full => View::Full,
            ViewArg::Extended => View::Extended,
            ViewArg::Exceptional => View::Exceptional,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum CharArg {
    #[value(name = "0")]
    Zero,
    #[value(name = "p")]
    P,
}

#[derive(Subcommand)]
enum Command {
    /// Negative continued fraction of a rational.
    Ncf {
        #[arg(allow_hyphen_values = true)]
        q: String,
    },
    /// Shortest N-path from a down to a', or `--check N a1 a2 ...`.
    Npath {
        /// Test whether the given sequence is a (shortest) N-path.
        #[arg(long)]
        check: bool,
        /// N followed by the endpoints (or the whole sequence with --check).
        #[arg(required = true, num_args = 2.., allow_hyphen_values = true)]
        args: Vec<String>,
    },
    /// Value of a polynomial under a valuation.
    Eval {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        val: String,
        #[arg(long, allow_hyphen_values = true)]
        poly: String,
    },
    /// Minimal regular resolution graph of the model given by a valuation.
    Resolve {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        val: String,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long, value_enum, default_value = "full")]
        view: ViewArg,
    },
    /// The (r, s)-graph from its closed form.
    Rsgraph {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        r: u64,
        #[arg(long)]
        s: u64,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Validators and graph checks.
    Check {
        #[command(subcommand)]
        what: CheckCommand,
    },
}

#[derive(Subcommand)]
enum CheckCommand {
    /// Classify a shape as a weak wild quotient singularity.
    Ww {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        s: Option<String>,
        #[arg(long)]
        val: String,
    },
    /// Existence constraints for type (r, s).
    Rs {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        r: u64,
        #[arg(long)]
        s: u64,
        #[arg(long = "char", value_enum, default_value = "0")]
        characteristic: CharArg,
        #[arg(long = "eK")]
        e_k: Option<u64>,
    },
    /// Tree, definiteness and fiber checks on a JSON graph file.
    Graph { file: PathBuf },
    /// Cross-validate the (r, s)-graphs against the general construction.
    Sweep {
        /// One JSON report instead of one line per case.
        #[arg(long)]
        json: bool,
    },
}

/// Failure of a command, already mapped to its exit code.
enum Failure {
    Lib(Error),
    /// Checks ran but did not all hold; the report is already printed.
    ChecksFailed,
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type Outcome = Result<(), Failure>;

fn pretty(value: &serde_json::Value) -> String {
    serde_json::to_string_pretty(value).expect("JSON values serialize")
}

fn render(g: &ResolutionGraph, format: Format) -> String {
    match format {
        Format::Json => emit_json(g),
        Format::Dot => emit_dot(g),
    }
}

fn cmd_ncf(q: &str) -> Outcome {
    let cf = ncf_expand(&parse_rational(q)?);
    println!(
        "{}",
        serde_json::to_string_pretty(&cf).expect("expansions serialize")
    );
    Ok(())
}

fn cmd_npath(check: bool, args: &[String]) -> Outcome {
    let n = parse_positive(&args[0])?;
    let seq = args[1..]
        .iter()
        .map(|a| parse_rational(a))
        .collect::<wildres::Result<Vec<Rational>>>()?;
    if check {
        let report = json!({
            "is_npath": is_npath(&n, &seq)?,
            "is_shortest": is_shortest_npath(&n, &seq)?,
        });
        println!("{}", pretty(&report));
        return Ok(());
    }
    if seq.len() != 2 {
        return Err(Failure::Usage(format!(
            "npath takes N and two endpoints, got {} endpoints",
            seq.len()
        )));
    }
    let path = shortest_npath(&n, &seq[0], &seq[1])?;
    for q in &path.entries {
        println!("{q}");
    }
    println!(
        "{}",
        serde_json::to_string(&path.entries).expect("rationals serialize")
    );
    Ok(())
}

fn note_unverified(parsed: &ParsedValuation) {
    if let ParsedValuation::Valuation(v) = parsed {
        if !v.is_certified() {
            eprintln!("warning: {v} uses keys outside the certified forms; result is unverified");
        }
    }
}

fn cmd_eval(p: u64, val: &str, poly: &str) -> Outcome {
    let base = BaseField::mixed(p)?;
    let parsed = parse_valuation(val, &base)?;
    let ParsedValuation::Valuation(v) = &parsed else {
        return Err(Failure::Usage(
            "eval needs key polynomials, not the bare slope shorthand".to_string(),
        ));
    };
    note_unverified(&parsed);
    println!("{}", v.evaluate(&parse_polynomial(poly)?));
    Ok(())
}

fn cmd_resolve(p: u64, val: &str, format: Format, view: ViewArg) -> Outcome {
    let base = BaseField::mixed(p)?;
    let parsed = parse_valuation(val, &base)?;
    note_unverified(&parsed);
    let g = minimal_resolution(&parsed.shape()?)?.project(view.into())?;
    print!("{}", render(&g, format));
    Ok(())
}

fn cmd_rsgraph(p: u64, r: u64, s: u64, format: Format) -> Outcome {
    print!("{}", render(&rs_graph(p, r, s)?, format));
    Ok(())
}

fn cmd_check_ww(p: u64, s: Option<&str>, val: &str) -> Outcome {
    let base = BaseField::mixed(p)?;
    let shape = parse_valuation(val, &base)?.shape()?;
    let s: Option<BigInt> = s.map(parse_positive).transpose()?;
    let params = classify_ww(&shape, p, s.as_ref())?;
    println!(
        "{}",
        serde_json::to_string_pretty(&params).expect("parameters serialize")
    );
    Ok(())
}

fn cmd_check_rs(p: u64, r: u64, s: u64, characteristic: CharArg, e_k: Option<u64>) -> Outcome {
    let characteristic = match characteristic {
        CharArg::Zero => Characteristic::Zero,
        CharArg::P => Characteristic::P,
    };
    if characteristic == Characteristic::P && e_k.is_some() {
        return Err(Failure::Usage(
            "--eK applies to characteristic 0 only".to_string(),
        ));
    }
    validate_rs(p, r, s, characteristic, e_k)?;
    println!(
        "{}",
        pretty(&json!({ "p": p, "r": r, "s": s, "valid": true }))
    );
    Ok(())
}

fn cmd_check_graph(file: &PathBuf) -> Outcome {
    let text = std::fs::read_to_string(file)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", file.display())))?;
    let g = parse_graph_json(&text)?;
    let matrix = intersection_matrix(&g, MatrixView::Exceptional)?;
    let fiber = fiber_relation_check(&g);
    let tree = is_tree(&g);
    let definite = is_negative_definite(&matrix);
    let report = json!({
        "vertices": g.len(),
        "tree": tree,
        "symmetric": matrix.is_symmetric(),
        "leading_minors": leading_minors(&matrix).iter().map(ToString::to_string).collect::<Vec<_>>(),
        "negative_definite": definite,
        "fiber_relation": fiber,
    });
    println!("{}", pretty(&report));
    if tree && definite && fiber.holds && matrix.is_symmetric() {
        Ok(())
    } else {
        Err(Failure::ChecksFailed)
    }
}

fn cmd_check_sweep(as_json: bool) -> Outcome {
    let bound = sweep::den_bound_from_env().map_err(Failure::Usage)?;
    let reports = sweep::run_sweep(bound);
    let passed = reports.iter().filter(|c| c.passed()).count();
    if as_json {
        let doc = json!({
            "den_bound": bound,
            "cases": reports.len(),
            "passed": passed,
            "reports": reports,
        });
        println!("{}", pretty(&doc));
    } else {
        for c in &reports {
            let status = if c.passed() { "ok" } else { "FAIL" };
            let mut line = format!("p={} r={} s={} {status}", c.p, c.r, c.s);
            if let Some(e) = &c.error {
                line.push_str(&format!(" ({e})"));
            }
            println!("{line}");
        }
        println!(
            "{passed}/{} cases passed (oracle bound {bound})",
            reports.len()
        );
    }
    if passed == reports.len() {
        Ok(())
    } else {
        Err(Failure::ChecksFailed)
    }
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Ncf { q } => cmd_ncf(&q),
        Command::Npath { check, args } => cmd_npath(check, &args),
        Command::Eval { p, val, poly } => cmd_eval(p, &val, &poly),
        Command::Resolve {
            p,
            val,
            format,
            view,
        } => cmd_resolve(p, &val, format, view),
        Command::Rsgraph { p, r, s, format } => cmd_rsgraph(p, r, s, format),
        Command::Check { what } => match what {
            CheckCommand::Ww { p, s, val } => cmd_check_ww(p, s.as_deref(), &val),
            CheckCommand::Rs {
                p,
                r,
                s,
                characteristic,
                e_k,
            } => cmd_check_rs(p, r, s, characteristic, e_k),
            CheckCommand::Graph { file } => cmd_check_graph(&file),
            CheckCommand::Sweep { json } => cmd_check_sweep(json),
        },
    }
}

fn exit_code(kind: ErrorKind) -> u8 {
    match kind {
        ErrorKind::Domain => 2,
        ErrorKind::Parse => 3,
        ErrorKind::Internal => 4,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Lib(e)) => {
            match &e {
                Error::Validation(problems) => {
                    eprintln!("error: validation failed");
                    for p in problems {
                        eprintln!("  - {p}");
                    }
                }
                other => eprintln!("error: {other}"),
            }
            ExitCode::from(exit_code(e.kind()))
        }
        Err(Failure::ChecksFailed) => ExitCode::from(2),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
