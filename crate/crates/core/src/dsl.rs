//! The `.cob` chain-description language.
//!
//! One statement per line, tokens separated by whitespace (`{ } | ;` may
//! also touch their neighbours), `#` starts a comment:
//!
//! ```text
//! uset A = { a1 a2 }
//! sset X = { x | y }
//! match f : A => B { a1 -> b1 a2 -> b2 }
//! cob g : X => Y { x -> y' ... }
//! chain h = f ; g
//! print h
//! verify h
//! trace h a1
//! ```
//!
//! Sets, morphisms (`match`, `cob`) and chains live in separate namespaces.
//! A `match` or `cob` whose pairs do not form a bijection is still bound;
//! `verify` reports it and any other use of it is a shape error.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use serde_json::Value;

use crate::elements::{Element, FiniteSet};
use crate::nset::Matching;
use crate::oracle::{self, VerificationReport};
use crate::subtraction::Trace;
use crate::zset::{ChainSum, Cobordism, SignedSet};

/// How a failed document should be reported and which exit class it maps to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ErrorKind {
    /// Lexical, syntax and reference errors, and unreadable input.
    Parse,
    /// Precondition or shape violations found while executing.
    Shape,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DslError {
    pub kind: ErrorKind,
    /// 1-based; 0 when no line applies.
    pub line: usize,
    pub message: String,
}

impl DslError {
    fn parse(line: usize, message: impl Into<String>) -> Self {
        DslError { kind: ErrorKind::Parse, line, message: message.into() }
    }

    fn shape(line: usize, message: impl Into<String>) -> Self {
        DslError { kind: ErrorKind::Shape, line, message: message.into() }
    }

    pub fn exit_code(&self) -> i32 {
        match self.kind {
            ErrorKind::Parse => 2,
            ErrorKind::Shape => 3,
        }
    }
}

impl fmt::Display for DslError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            ErrorKind::Parse => "parse error",
            ErrorKind::Shape => "shape error",
        };
        if self.line == 0 {
            write!(f, "{kind}: {}", self.message)
        } else {
            write!(f, "line {}: {kind}: {}", self.line, self.message)
        }
    }
}

impl std::error::Error for DslError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MorphismKind {
    Match,
    Cob,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StatementKind {
    Uset { elements: Vec<Element> },
    Sset { pos: Vec<Element>, neg: Vec<Element> },
    Morphism { kind: MorphismKind, src: String, dst: String, pairs: Vec<(Element, Element)> },
    Chain { parts: Vec<String> },
    Print,
    Verify,
    Trace { element: Element },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Statement {
    pub line: usize,
    /// The bound name, or the referenced one for commands.
    pub name: String,
    pub kind: StatementKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Namespace {
    Sets,
    Morphisms,
    Chains,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Document {
    pub statements: Vec<Statement>,
}

fn tokenize(line: &str) -> Vec<&str> {
    let mut tokens = Vec::new();
    for chunk in line.split_whitespace() {
        let mut rest = chunk;
        while let Some(at) = rest.find(['{', '}', '|', ';']) {
            if at > 0 {
                tokens.push(&rest[..at]);
            }
            tokens.push(&rest[at..at + 1]);
            rest = &rest[at + 1..];
        }
        if !rest.is_empty() {
            tokens.push(rest);
        }
    }
    tokens
}

struct Tokens<'a> {
    line: usize,
    items: Vec<&'a str>,
    at: usize,
}

impl<'a> Tokens<'a> {
    fn next(&mut self, what: &str) -> Result<&'a str, DslError> {
        let token = self
            .items
            .get(self.at)
            .copied()
            .ok_or_else(|| DslError::parse(self.line, format!("expected {what}, found end of line")))?;
        self.at += 1;
        Ok(token)
    }

    fn expect(&mut self, token: &str) -> Result<(), DslError> {
        let found = self.next(&format!("`{token}`"))?;
        if found == token {
            Ok(())
        } else {
            Err(DslError::parse(self.line, format!("expected `{token}`, found `{found}`")))
        }
    }

    fn name(&mut self) -> Result<String, DslError> {
        let token = self.next("a name")?;
        if crate::elements::is_valid_name(token) {
            Ok(token.to_string())
        } else {
            Err(DslError::parse(self.line, format!("`{token}` is not a valid name")))
        }
    }

    fn element(&mut self) -> Result<Element, DslError> {
        let token = self.next("an element")?;
        self.decode(token)
    }

    fn decode(&self, token: &str) -> Result<Element, DslError> {
        Element::decode(token).map_err(|e| DslError::parse(self.line, format!("bad element `{token}`: {e}")))
    }

    /// Elements up to, not including, one of `stops`; returns the stop seen.
    fn elements_until(&mut self, stops: &[&str]) -> Result<(Vec<Element>, &'a str), DslError> {
        let mut out = Vec::new();
        loop {
            let token = self.next("`}`")?;
            if stops.contains(&token) {
                return Ok((out, token));
            }
            out.push(self.decode(token)?);
        }
    }

    fn finish(&self) -> Result<(), DslError> {
        match self.items.get(self.at) {
            None => Ok(()),
            Some(extra) => Err(DslError::parse(self.line, format!("unexpected `{extra}` after statement"))),
        }
    }
}

fn parse_statement(line: usize, tokens: Vec<&str>) -> Result<Statement, DslError> {
    let mut t = Tokens { line, items: tokens, at: 0 };
    let keyword = t.next("a keyword")?;
    let statement = match keyword {
        "uset" => {
            let name = t.name()?;
            t.expect("=")?;
            t.expect("{")?;
            let (elements, _) = t.elements_until(&["}"])?;
            Statement { line, name, kind: StatementKind::Uset { elements } }
        }
        "sset" => {
            let name = t.name()?;
            t.expect("=")?;
            t.expect("{")?;
            let (pos, stop) = t.elements_until(&["|", "}"])?;
            if stop != "|" {
                return Err(DslError::parse(line, "sset needs `|` between its halves"));
            }
            let (neg, _) = t.elements_until(&["}"])?;
            Statement { line, name, kind: StatementKind::Sset { pos, neg } }
        }
        "match" | "cob" => {
            let kind = if keyword == "match" { MorphismKind::Match } else { MorphismKind::Cob };
            let name = t.name()?;
            t.expect(":")?;
            let src = t.name()?;
            t.expect("=>")?;
            let dst = t.name()?;
            t.expect("{")?;
            let mut pairs = Vec::new();
            loop {
                let token = t.next("`}`")?;
                if token == "}" {
                    break;
                }
                let x = t.decode(token)?;
                t.expect("->")?;
                pairs.push((x, t.element()?));
            }
            Statement { line, name, kind: StatementKind::Morphism { kind, src, dst, pairs } }
        }
        "chain" => {
            let name = t.name()?;
            t.expect("=")?;
            let mut parts = vec![t.name()?];
            while t.at < t.items.len() {
                t.expect(";")?;
                parts.push(t.name()?);
            }
            Statement { line, name, kind: StatementKind::Chain { parts } }
        }
        "print" => Statement { line, name: t.name()?, kind: StatementKind::Print },
        "verify" => Statement { line, name: t.name()?, kind: StatementKind::Verify },
        "trace" => {
            let name = t.name()?;
            let element = t.element()?;
            Statement { line, name, kind: StatementKind::Trace { element } }
        }
        other => return Err(DslError::parse(line, format!("unknown keyword `{other}`"))),
    };
    t.finish()?;
    Ok(statement)
}

/// Parses a document and resolves every reference against earlier
/// statements.
pub fn parse(text: &str) -> Result<Document, DslError> {
    let mut statements = Vec::new();
    for (index, raw) in text.lines().enumerate() {
        let content = raw.split('#').next().unwrap_or("");
        let tokens = tokenize(content);
        if !tokens.is_empty() {
            statements.push(parse_statement(index + 1, tokens)?);
        }
    }
    let doc = Document { statements };
    doc.resolve()?;
    Ok(doc)
}

impl Document {
    fn resolve(&self) -> Result<(), DslError> {
        let mut bound: BTreeMap<(u8, &str), usize> = BTreeMap::new();
        let key = |ns: Namespace| ns as u8;
        let lookup = |bound: &BTreeMap<(u8, &str), usize>, ns: Namespace, name: &str| bound.contains_key(&(key(ns), name));
        for s in &self.statements {
            let line = s.line;
            let missing = |what: &str, name: &str| DslError::parse(line, format!("undefined {what} `{name}`"));
            let binds = match &s.kind {
                StatementKind::Uset { .. } | StatementKind::Sset { .. } => Some(Namespace::Sets),
                StatementKind::Morphism { src, dst, .. } => {
                    for end in [src, dst] {
                        if !lookup(&bound, Namespace::Sets, end) {
                            return Err(missing("set", end));
                        }
                    }
                    Some(Namespace::Morphisms)
                }
                StatementKind::Chain { parts } => {
                    for part in parts {
                        match (lookup(&bound, Namespace::Morphisms, part), lookup(&bound, Namespace::Chains, part)) {
                            (false, false) => return Err(missing("morphism or chain", part)),
                            (true, true) => {
                                return Err(DslError::parse(line, format!("`{part}` names both a morphism and a chain")))
                            }
                            _ => {}
                        }
                    }
                    Some(Namespace::Chains)
                }
                StatementKind::Print | StatementKind::Verify => {
                    let hits = [Namespace::Sets, Namespace::Morphisms, Namespace::Chains]
                        .into_iter()
                        .filter(|&ns| lookup(&bound, ns, &s.name))
                        .count();
                    match hits {
                        0 => return Err(missing("name", &s.name)),
                        1 => None,
                        _ => return Err(DslError::parse(line, format!("`{}` is ambiguous", s.name))),
                    }
                }
                StatementKind::Trace { .. } => {
                    match (lookup(&bound, Namespace::Morphisms, &s.name), lookup(&bound, Namespace::Chains, &s.name)) {
                        (false, false) => return Err(missing("morphism or chain", &s.name)),
                        (true, true) => return Err(DslError::parse(line, format!("`{}` is ambiguous", s.name))),
                        _ => None,
                    }
                }
            };
            if let Some(ns) = binds {
                if let Some(first) = bound.insert((key(ns), s.name.as_str()), line) {
                    return Err(DslError::parse(
                        line,
                        format!("`{}` is already defined on line {first}", s.name),
                    ));
                }
            }
        }
        Ok(())
    }
}

/// A morphism binding; defective ones keep their raw pairs for `verify`.
#[derive(Debug, Clone)]
pub enum MorphismValue {
    Valid(Cobordism),
    Defective { domain: FiniteSet, codomain: FiniteSet, pairs: Vec<(Element, Element)>, reason: String },
}

#[derive(Debug, Clone)]
pub struct MorphismBinding {
    pub line: usize,
    pub kind: MorphismKind,
    pub src: SignedSet,
    pub dst: SignedSet,
    pub pairs: Vec<(Element, Element)>,
    pub value: MorphismValue,
}

#[derive(Debug, Clone)]
pub struct ChainBinding {
    pub line: usize,
    pub arrows: Vec<Cobordism>,
    pub sum: ChainSum,
    pub composite: Cobordism,
}

#[derive(Debug, Clone)]
pub struct SetBinding {
    pub line: usize,
    pub unsigned: bool,
    pub value: SignedSet,
}

/// One line of program output.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Output {
    pub line: usize,
    pub command: &'static str,
    pub name: String,
    pub value: Value,
    #[serde(skip)]
    pub text: String,
    #[serde(skip)]
    pub failed: bool,
}

/// Bindings produced by running a document.
#[derive(Debug, Clone, Default)]
pub struct Environment {
    pub sets: BTreeMap<String, SetBinding>,
    pub morphisms: BTreeMap<String, MorphismBinding>,
    pub chains: BTreeMap<String, ChainBinding>,
    pub outputs: Vec<Output>,
}

/// Result of [`execute`]: the environment so far and the error, if any,
/// that stopped execution.
#[derive(Debug, Clone)]
pub struct Run {
    pub env: Environment,
    pub error: Option<DslError>,
}

impl Run {
    pub fn verification_failed(&self) -> bool {
        self.env.outputs.iter().any(|o| o.failed)
    }

    pub fn exit_code(&self) -> i32 {
        match &self.error {
            Some(e) => e.exit_code(),
            None if self.verification_failed() => 1,
            None => 0,
        }
    }
}

fn to_value(v: impl Serialize) -> Value {
    serde_json::to_value(v).expect("output types serialize")
}

fn set_text(s: &SetBinding) -> String {
    if s.unsigned {
        s.value.pos().to_string()
    } else {
        s.value.to_string()
    }
}

fn set_value(s: &SetBinding) -> Value {
    if s.unsigned {
        to_value(s.value.pos().encode())
    } else {
        to_value(s.value.to_json())
    }
}

fn cobordism_text(c: &Cobordism) -> String {
    format!("{} => {} {}", c.src(), c.dst(), c.core())
}

/// Matchings print as matchings, everything else as a cobordism.
fn morphism_output(c: &Cobordism) -> (String, Value) {
    match c.to_matching() {
        Ok(m) if c.is_matching() => (m.to_string(), to_value(m.to_json())),
        _ => (cobordism_text(c), to_value(c.to_json())),
    }
}

/// `ok`, or `FAILED (check witness; ...)`.
pub fn report_text(report: &VerificationReport) -> String {
    if report.passed {
        "ok".into()
    } else {
        let details: Vec<String> = report.failures.iter().map(|(check, w)| format!("{check} {w}")).collect();
        format!("FAILED ({})", details.join("; "))
    }
}

fn trace_text(trace: &Trace) -> String {
    let mut parts = vec![trace.start.to_string()];
    parts.extend(trace.steps.iter().map(Element::to_string));
    parts.join(" -> ")
}

impl Environment {
    fn set(&self, name: &str) -> &SetBinding {
        &self.sets[name]
    }

    fn valid_morphism(&self, line: usize, name: &str) -> Result<&Cobordism, DslError> {
        match &self.morphisms[name].value {
            MorphismValue::Valid(c) => Ok(c),
            MorphismValue::Defective { reason, .. } => {
                Err(DslError::shape(line, format!("`{name}` is not a valid morphism: {reason}")))
            }
        }
    }

    fn arrows_of(&self, line: usize, name: &str) -> Result<Vec<Cobordism>, DslError> {
        if let Some(chain) = self.chains.get(name) {
            Ok(chain.arrows.clone())
        } else {
            Ok(vec![self.valid_morphism(line, name)?.clone()])
        }
    }

    /// Verification report for any bound name.
    pub fn verify(&self, name: &str) -> VerificationReport {
        if let Some(m) = self.morphisms.get(name) {
            return match &m.value {
                MorphismValue::Valid(c) if m.kind == MorphismKind::Match => {
                    oracle::verify_matching(c.core())
                }
                MorphismValue::Valid(c) => oracle::verify_cobordism(c),
                MorphismValue::Defective { domain, codomain, pairs, .. } => {
                    let subject = if m.kind == MorphismKind::Match { "matching" } else { "cobordism" };
                    oracle::verify_pairs(subject, domain, codomain, pairs)
                }
            };
        }
        if let Some(chain) = self.chains.get(name) {
            let mut report = oracle::verify_cobordism(&chain.composite);
            report.subject = "chain".into();
            return report;
        }
        VerificationReport { subject: "set".into(), passed: true, failures: Vec::new() }
    }

    fn define_morphism(&mut self, s: &Statement, kind: MorphismKind, src: &str, dst: &str, pairs: &[(Element, Element)]) -> Result<(), DslError> {
        let (src_b, dst_b) = (self.set(src), self.set(dst));
        let line = s.line;
        if kind == MorphismKind::Match {
            for (end, b) in [(src, src_b), (dst, dst_b)] {
                if !b.value.is_unsigned() {
                    return Err(DslError::shape(line, format!("match needs unsigned sets, `{end}` is signed")));
                }
            }
        }
        let (a, b) = (src_b.value.clone(), dst_b.value.clone());
        if let Some(w) = a.pos().common_element(b.neg()).or_else(|| a.neg().common_element(b.pos())) {
            return Err(DslError::shape(line, format!("{w} lies on both sides of the core")));
        }
        let domain = a.pos().union(b.neg());
        let codomain = a.neg().union(b.pos());
        let value = match Cobordism::new(a.clone(), b.clone(), pairs.to_vec()) {
            Ok(c) => MorphismValue::Valid(c),
            Err(e) => MorphismValue::Defective { domain, codomain, pairs: pairs.to_vec(), reason: e.to_string() },
        };
        self.morphisms.insert(
            s.name.clone(),
            MorphismBinding { line, kind, src: a, dst: b, pairs: pairs.to_vec(), value },
        );
        Ok(())
    }

    fn step(&mut self, s: &Statement) -> Result<(), DslError> {
        let line = s.line;
        let lib = |e: crate::error::Error| DslError::shape(line, e.to_string());
        match &s.kind {
            StatementKind::Uset { elements } => {
                let value = SignedSet::unsigned(elements.iter().cloned().collect());
                self.sets.insert(s.name.clone(), SetBinding { line, unsigned: true, value });
            }
            StatementKind::Sset { pos, neg } => {
                let value = SignedSet::new(pos.iter().cloned().collect(), neg.iter().cloned().collect()).map_err(lib)?;
                self.sets.insert(s.name.clone(), SetBinding { line, unsigned: false, value });
            }
            StatementKind::Morphism { kind, src, dst, pairs } => self.define_morphism(s, *kind, src, dst, pairs)?,
            StatementKind::Chain { parts } => {
                let mut arrows = Vec::new();
                for part in parts {
                    arrows.extend(self.arrows_of(line, part)?);
                }
                let sum = ChainSum::new(&arrows).map_err(lib)?;
                let composite = sum.compose().map_err(lib)?;
                self.chains.insert(s.name.clone(), ChainBinding { line, arrows, sum, composite });
            }
            StatementKind::Print => {
                let (text, value) = if let Some(set) = self.sets.get(&s.name) {
                    (set_text(set), set_value(set))
                } else if let Some(chain) = self.chains.get(&s.name) {
                    morphism_output(&chain.composite)
                } else {
                    morphism_output(self.valid_morphism(line, &s.name)?)
                };
                self.outputs.push(Output { line, command: "print", name: s.name.clone(), value, text, failed: false });
            }
            StatementKind::Verify => {
                let report = self.verify(&s.name);
                self.outputs.push(Output {
                    line,
                    command: "verify",
                    name: s.name.clone(),
                    text: report_text(&report),
                    failed: !report.passed,
                    value: to_value(&report),
                });
            }
            StatementKind::Trace { element } => {
                let trace = self.trace(line, &s.name, element)?;
                self.outputs.push(Output {
                    line,
                    command: "trace",
                    name: s.name.clone(),
                    text: trace_text(&trace),
                    value: to_value(trace.to_json()),
                    failed: false,
                });
            }
        }
        Ok(())
    }

    /// Escape orbit of `element` through the single cancellation of a chain
    /// (or of a single morphism).
    pub fn trace(&self, line: usize, name: &str, element: &Element) -> Result<Trace, DslError> {
        let lib = |e: crate::error::Error| DslError::shape(line, e.to_string());
        match self.chains.get(name) {
            Some(chain) => chain.sum.trace(element).map_err(lib),
            None => {
                let arrow = self.valid_morphism(line, name)?;
                ChainSum::new(std::slice::from_ref(arrow)).and_then(|sum| sum.trace(element)).map_err(lib)
            }
        }
    }
}

/// Runs the statements in order, stopping at the first shape error.
pub fn execute(doc: &Document) -> Run {
    let mut env = Environment::default();
    for s in &doc.statements {
        if let Err(error) = env.step(s) {
            return Run { env, error: Some(error) };
        }
    }
    Run { env, error: None }
}

/// JSON form of a run: `{"outputs":[...]}` plus `"error"` when one occurred.
#[derive(Debug, Clone, Serialize)]
pub struct RunJson<'a> {
    pub outputs: &'a [Output],
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<&'a DslError>,
}

/// Text form of the outputs, one line each: `command name: text`.
pub fn render_text(outputs: &[Output]) -> String {
    outputs.iter().map(|o| format!("{} {}: {}\n", o.command, o.name, o.text)).collect()
}

pub fn render_json(outputs: &[Output], error: Option<&DslError>) -> String {
    let mut text = serde_json::to_string(&RunJson { outputs, error }).expect("serializable");
    text.push('\n');
    text
}

/// The raw pairs and endpoints of a `match` statement, without requiring a
/// bijection.
pub fn match_statements(doc: &Document) -> impl Iterator<Item = (&Statement, &str, &str, &[(Element, Element)])> {
    doc.statements.iter().filter_map(|s| match &s.kind {
        StatementKind::Morphism { kind: MorphismKind::Match, src, dst, pairs } => {
            Some((s, src.as_str(), dst.as_str(), pairs.as_slice()))
        }
        _ => None,
    })
}

/// Convenience for tests: the composite of chain `name` as a matching.
pub fn chain_matching(env: &Environment, name: &str) -> Option<Matching> {
    env.chains.get(name).and_then(|c| c.composite.to_matching().ok())
}
