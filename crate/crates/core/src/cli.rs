//! The `cobord` command line.
//!
//! Exit codes: 0 success, 1 verification failure, 2 parse or I/O error,
//! 3 precondition or shape error.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use crate::dsl::{self, DslError, Environment, ErrorKind, MorphismValue, Output};
use crate::elements::Element;
use crate::euler::{self, Kind};
use crate::nset::MatchingJson;
use crate::oracle;
use crate::principles::{self, ChainOrigin, GarsiaMilne, GmInstance, Injection};

#[derive(Debug, Parser)]
#[command(name = "cobord", version, about = "Compose, cancel and verify finite matchings and signed-set cobordisms")]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Execute a .cob document.
    Run { file: PathBuf },
    /// Execute a document and verify every morphism and chain it binds.
    Verify { file: PathBuf },
    /// Print the escape orbit of ELEM through chain CHAIN.
    Trace { file: PathBuf, chain: String, elem: String },
    /// Built-in demonstrations.
    Demo {
        #[command(subcommand)]
        demo: Demo,
    },
    /// Koenig's matching from the first two `match` statements, read as
    /// injections f: X -> Y and g: Y -> X.
    Csb { file: PathBuf },
    /// The involution principle on sets X, Y, A, B and morphisms phi, psi.
    Gm { file: PathBuf },
}

#[derive(Debug, Subcommand)]
enum Demo {
    /// Distinct-part to odd-part partitions of N.
    Euler {
        #[arg(long)]
        n: u32,
    },
}

struct Io<'a> {
    json: bool,
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

impl Io<'_> {
    fn fail(&mut self, error: &DslError) -> i32 {
        if self.json {
            let _ = writeln!(self.out, "{}", json!({ "error": error }));
        }
        let _ = writeln!(self.err, "cobord: {error}");
        error.exit_code()
    }

    fn emit(&mut self, value: &impl Serialize, text: &str) {
        if self.json {
            let _ = writeln!(self.out, "{}", serde_json::to_string(value).expect("serializable"));
        } else {
            let _ = write!(self.out, "{text}");
        }
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run(args: impl IntoIterator<Item = impl Into<OsString> + Clone>, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if code == 0 { write!(out, "{rendered}") } else { write!(err, "{rendered}") };
            return code;
        }
    };
    let mut io = Io { json: cli.json, out, err };
    let result = match cli.command {
        Command::Run { file } => run_document(&mut io, &file, false),
        Command::Verify { file } => run_document(&mut io, &file, true),
        Command::Trace { file, chain, elem } => trace(&mut io, &file, &chain, &elem),
        Command::Demo { demo: Demo::Euler { n } } => demo_euler(&mut io, n),
        Command::Csb { file } => csb(&mut io, &file),
        Command::Gm { file } => gm(&mut io, &file),
    };
    match result {
        Ok(code) => code,
        Err(e) => io.fail(&e),
    }
}

fn parse_error(message: impl Into<String>) -> DslError {
    DslError { kind: ErrorKind::Parse, line: 0, message: message.into() }
}

fn shape_error(message: impl Into<String>) -> DslError {
    DslError { kind: ErrorKind::Shape, line: 0, message: message.into() }
}

fn load(file: &Path) -> Result<dsl::Document, DslError> {
    let text = std::fs::read_to_string(file).map_err(|e| parse_error(format!("cannot read {}: {e}", file.display())))?;
    dsl::parse(&text)
}

fn load_and_execute(file: &Path) -> Result<Environment, DslError> {
    let run = dsl::execute(&load(file)?);
    match run.error {
        Some(e) => Err(e),
        None => Ok(run.env),
    }
}

fn implicit_verifications(env: &Environment) -> Vec<Output> {
    let mut bound: Vec<(usize, &String)> = env
        .morphisms
        .iter()
        .map(|(name, m)| (m.line, name))
        .chain(env.chains.iter().map(|(name, c)| (c.line, name)))
        .collect();
    bound.sort();
    bound
        .into_iter()
        .map(|(line, name)| {
            let report = env.verify(name);
            Output {
                line,
                command: "verify",
                name: name.clone(),
                value: serde_json::to_value(&report).expect("serializable"),
                text: dsl::report_text(&report),
                failed: !report.passed,
            }
        })
        .collect()
}

fn run_document(io: &mut Io, file: &Path, verify_all: bool) -> Result<i32, DslError> {
    let doc = load(file)?;
    let mut run = dsl::execute(&doc);
    if verify_all && run.error.is_none() {
        let extra = implicit_verifications(&run.env);
        run.env.outputs.extend(extra);
    }
    let code = run.exit_code();
    if io.json {
        let _ = write!(io.out, "{}", dsl::render_json(&run.env.outputs, run.error.as_ref()));
    } else {
        let _ = write!(io.out, "{}", dsl::render_text(&run.env.outputs));
    }
    if let Some(e) = &run.error {
        let _ = writeln!(io.err, "cobord: {e}");
    }
    Ok(code)
}

fn trace(io: &mut Io, file: &Path, chain: &str, elem: &str) -> Result<i32, DslError> {
    let env = load_and_execute(file)?;
    if !env.chains.contains_key(chain) && !env.morphisms.contains_key(chain) {
        return Err(parse_error(format!("undefined morphism or chain `{chain}`")));
    }
    let element = Element::decode(elem).map_err(|e| parse_error(format!("bad element `{elem}`: {e}")))?;
    let trace = env.trace(0, chain, &element)?;
    let mut text: Vec<String> = vec![trace.start.to_string()];
    text.extend(trace.steps.iter().map(Element::to_string));
    io.emit(&trace.to_json(), &format!("{}\n", text.join(" -> ")));
    Ok(0)
}

#[derive(Serialize)]
struct EulerJson {
    n: u32,
    matching: MatchingJson,
    distinct: u64,
    odd: u64,
    /// `[F, FHK, EK, GHK, G]`.
    carrier_sizes: Vec<usize>,
    cancel_calls: u64,
    verified: bool,
    /// Orbit length (start and end included) to number of orbits.
    trace_lengths: BTreeMap<usize, usize>,
}

fn demo_euler(io: &mut Io, n: u32) -> Result<i32, DslError> {
    let lib = |e: crate::error::Error| shape_error(e.to_string());
    let chain = euler::build_chain(n).map_err(lib)?;
    let report = oracle::verify_matching(&chain.result);
    let stats = EulerJson {
        n,
        matching: chain.result.to_json(),
        distinct: oracle::count_partitions(Kind::Distinct, n),
        odd: oracle::count_partitions(Kind::Odd, n),
        carrier_sizes: chain.nodes.iter().map(|s| s.carrier().len()).collect(),
        cancel_calls: chain.cancel_passes,
        verified: report.passed,
        trace_lengths: chain.trace_length_histogram().map_err(lib)?,
    };
    let mut text = format!("n = {n}\n");
    for (x, y) in chain.result.pairs() {
        text.push_str(&format!("{x} -> {y}\n"));
    }
    let names = ["F", "FHK", "EK", "GHK", "G"];
    let sizes: Vec<String> = names.iter().zip(&stats.carrier_sizes).map(|(n, s)| format!("{n} {s}")).collect();
    text.push_str(&format!("carriers: {}\n", sizes.join(", ")));
    text.push_str(&format!("distinct {} odd {}\n", stats.distinct, stats.odd));
    text.push_str(&format!("cancel calls: {}\n", stats.cancel_calls));
    let lengths: Vec<String> = stats.trace_lengths.iter().map(|(l, c)| format!("{l}:{c}")).collect();
    text.push_str(&format!("trace lengths: {}\n", lengths.join(" ")));
    text.push_str(&format!("verified: {}\n", if report.passed { "ok" } else { "FAILED" }));
    io.emit(&stats, &text);
    Ok(if report.passed { 0 } else { 1 })
}

fn origin_text(origin: &ChainOrigin) -> String {
    match origin {
        ChainOrigin::StartsInX(e) => format!("x:{e}"),
        ChainOrigin::StartsInY(e) => format!("y:{e}"),
        ChainOrigin::Periodic => "periodic".into(),
    }
}

fn csb(io: &mut Io, file: &Path) -> Result<i32, DslError> {
    let doc = load(file)?;
    let run = dsl::execute(&doc);
    if let Some(e) = run.error {
        return Err(e);
    }
    let mut matches = dsl::match_statements(&doc);
    let (Some(first), Some(second)) = (matches.next(), matches.next()) else {
        return Err(shape_error("csb needs two match statements"));
    };
    let injection = |(s, src, dst, pairs): (&dsl::Statement, &str, &str, &[(Element, Element)])| {
        let set = |name: &str| run.env.sets[name].value.pos().clone();
        Injection::new(set(src), set(dst), pairs.to_vec())
            .map_err(|e| DslError { kind: ErrorKind::Shape, line: s.line, message: format!("`{}`: {e}", s.name) })
    };
    let f = injection(first)?;
    let g = injection(second)?;
    let lib = |e: crate::error::Error| shape_error(e.to_string());
    let h = principles::koenig_csb(&f, &g).map_err(lib)?;
    let mut rows = Vec::new();
    let mut text = String::new();
    for (x, y) in h.pairs() {
        let origin = origin_text(&principles::classify_chain(&f, &g, x).map_err(lib)?);
        text.push_str(&format!("{x} -> {y} ({origin})\n"));
        rows.push(json!({ "x": x.encode(), "origin": origin, "image": y.encode() }));
    }
    let report = oracle::verify_matching(&h);
    io.emit(&json!({ "matching": h.to_json(), "chains": rows, "verified": report.passed }), &text);
    Ok(if report.passed { 0 } else { 1 })
}

fn gm(io: &mut Io, file: &Path) -> Result<i32, DslError> {
    let env = load_and_execute(file)?;
    let set = |name: &str| {
        env.sets
            .get(name)
            .map(|s| s.value.clone())
            .ok_or_else(|| shape_error(format!("gm needs a set named `{name}`")))
    };
    let arrow = |name: &str| match env.morphisms.get(name).map(|m| &m.value) {
        Some(MorphismValue::Valid(c)) => Ok(c.clone()),
        Some(MorphismValue::Defective { reason, .. }) => Err(shape_error(format!("`{name}`: {reason}"))),
        None => Err(shape_error(format!("gm needs a morphism named `{name}`"))),
    };
    let lib = |e: crate::error::Error| shape_error(e.to_string());
    let inst = GmInstance::new(set("X")?, set("Y")?, set("A")?, set("B")?, arrow("phi")?, arrow("psi")?).map_err(lib)?;
    let (value, text, passed): (Value, String, bool) = match inst.to_unsigned() {
        Some(unsigned) => {
            let unsigned = GarsiaMilne::new(unsigned.x, unsigned.y, unsigned.a, unsigned.b, unsigned.phi, unsigned.psi)
                .map_err(lib)?;
            let h = principles::garsia_milne(&unsigned).map_err(lib)?;
            let report = oracle::verify_matching(&h);
            (json!({ "matching": h.to_json(), "verified": report.passed }), format!("{h}\n"), report.passed)
        }
        None => {
            let c = principles::involution_principle(&inst).map_err(lib)?;
            let report = oracle::verify_cobordism(&c);
            let text = format!("{} => {} {}\n", c.src(), c.dst(), c.core());
            (json!({ "cobordism": c.to_json(), "verified": report.passed }), text, report.passed)
        }
    };
    io.emit(&value, &text);
    Ok(if passed { 0 } else { 1 })
}
