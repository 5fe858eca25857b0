//! Simple subtraction: from `f: A + C => B + C` get `cancel(C, f): A => B`.
//!
//! Given `a`, start at `f(a)` and keep applying `f` while the value lies in
//! `C`. Injectivity means no element of `C` is visited twice, so the walk
//! escapes after at most `|C ∩ domain(f)| + 1` applications.

use std::cell::Cell;

use serde::Serialize;

use crate::elements::{Element, FiniteSet};
use crate::error::{Error, Result};
use crate::nset::Matching;

thread_local! {
    static CANCEL_CALLS: Cell<u64> = const { Cell::new(0) };
}

/// Number of [`cancel`] invocations made on the current thread so far.
pub fn cancel_calls() -> u64 {
    CANCEL_CALLS.with(Cell::get)
}

/// The orbit of one start element: `start, f(start), ..., result`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trace {
    pub start: Element,
    /// Every value produced by `f`, the last one being the result.
    pub steps: Vec<Element>,
    /// `in_c[i]` tells whether `steps[i]` lies in the cancelled set.
    pub in_c: Vec<bool>,
}

impl Trace {
    pub fn result(&self) -> &Element {
        self.steps.last().expect("a trace has at least one step")
    }

    /// Number of elements visited, start and result included.
    pub fn len(&self) -> usize {
        self.steps.len() + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn to_json(&self) -> TraceJson {
        TraceJson {
            start: self.start.encode(),
            steps: self.steps.iter().map(Element::encode).collect(),
            result: self.result().encode(),
            in_c: self.in_c.clone(),
        }
    }
}

/// Wire form of a [`Trace`]; fields serialize in declaration order.
#[derive(Debug, Clone, Serialize)]
pub struct TraceJson {
    pub start: String,
    pub steps: Vec<String>,
    pub result: String,
    pub in_c: Vec<bool>,
}

/// Elements of `c` must sit on both sides of `f` or on neither; anything of
/// `c` outside `f` is ignored. Returns `C ∩ domain(f)`.
fn effective_cancel_set(c: &FiniteSet, f: &Matching) -> Result<FiniteSet> {
    let in_domain = c.intersection(f.domain());
    let in_codomain = c.intersection(f.codomain());
    if in_domain != in_codomain {
        let witness = in_domain
            .difference(&in_codomain)
            .union(&in_codomain.difference(&in_domain))
            .first()
            .cloned()
            .expect("sets differ");
        return Err(Error::CancelShape(witness));
    }
    Ok(in_domain)
}

fn escape(c: &FiniteSet, bound: usize, f: &Matching, a: &Element, mut visit: impl FnMut(&Element, bool)) -> Result<Element> {
    let mut x = f.apply(a)?;
    let mut applications = 1;
    loop {
        let inside = c.contains(x);
        visit(x, inside);
        if !inside {
            return Ok(x.clone());
        }
        if applications > bound {
            return Err(Error::Invariant(format!(
                "orbit of {a} did not leave C within {} applications",
                bound + 1
            )));
        }
        x = f.apply(x)?;
        applications += 1;
    }
}

/// `cancel(C, f)`: the matching `domain(f) ∖ C => codomain(f) ∖ C` obtained
/// by escaping from `C`.
pub fn cancel(c: &FiniteSet, f: &Matching) -> Result<Matching> {
    CANCEL_CALLS.with(|n| n.set(n.get() + 1));
    let effective = effective_cancel_set(c, f)?;
    let bound = effective.len();
    let source = f.domain().difference(&effective);
    let target = f.codomain().difference(&effective);
    let pairs = source
        .iter()
        .map(|a| Ok((a.clone(), escape(&effective, bound, f, a, |_, _| {})?)))
        .collect::<Result<Vec<_>>>()?;
    Matching::new(source, target, pairs)
        .map_err(|e| Error::Invariant(format!("cancel produced a non-bijection: {e}")))
}

/// The escape orbit of `a`, which must lie in `domain(f) ∖ C`.
pub fn escape_trace(c: &FiniteSet, f: &Matching, a: &Element) -> Result<Trace> {
    let effective = effective_cancel_set(c, f)?;
    if effective.contains(a) {
        return Err(Error::Shape(format!("trace start {a} lies in the cancelled set")));
    }
    let mut steps = Vec::new();
    let mut in_c = Vec::new();
    escape(&effective, effective.len(), f, a, |x, inside| {
        steps.push(x.clone());
        in_c.push(inside);
    })?;
    Ok(Trace {
        start: a.clone(),
        steps,
        in_c,
    })
}
