//! Points of 0-manifolds and finite sets of them.
//!
//! An [`Element`] is a small structured value: an atom, an integer, a tagged
//! element or a tuple. Tags realize disjoint unions (`X + Y` is modelled as
//! `{L:x} ∪ {R:y}`), tuples encode partitions and other compound points.
//!
//! Canonical text form: atoms print as their name, integers in decimal,
//! tagged elements as `tag:inner` and tuples as `(a,b,...)`. The encoding is
//! injective and [`Element::from_str`](std::str::FromStr) inverts it.

use std::collections::btree_set;
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A structurally compared point.
///
/// The derived order puts integers before atoms before tagged elements before
/// tuples, each compared lexicographically. It is only used to make iteration
/// and output deterministic.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Element {
    Int(i64),
    Atom(String),
    Tagged(String, Box<Element>),
    Tuple(Vec<Element>),
}

/// Atom names and tags: a letter or `_`, then letters, digits, `_` or `'`.
pub fn is_valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(is_name_char)
}

fn is_name_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\''
}

impl Element {
    /// Panics if `name` is not a valid identifier; see [`Element::try_atom`].
    pub fn atom(name: impl Into<String>) -> Self {
        Self::try_atom(name).expect("invalid atom name")
    }

    pub fn try_atom(name: impl Into<String>) -> Result<Self> {
        let name = name.into();
        if is_valid_name(&name) {
            Ok(Element::Atom(name))
        } else {
            Err(Error::InvalidName(name))
        }
    }

    pub fn int(value: i64) -> Self {
        Element::Int(value)
    }

    /// Panics if `tag` is not a valid identifier; see [`Element::try_tagged`].
    pub fn tagged(tag: impl Into<String>, inner: Element) -> Self {
        Self::try_tagged(tag, inner).expect("invalid tag")
    }

    pub fn try_tagged(tag: impl Into<String>, inner: Element) -> Result<Self> {
        let tag = tag.into();
        if is_valid_name(&tag) {
            Ok(Element::Tagged(tag, Box::new(inner)))
        } else {
            Err(Error::InvalidName(tag))
        }
    }

    pub fn tuple(items: impl IntoIterator<Item = Element>) -> Self {
        Element::Tuple(items.into_iter().collect())
    }

    /// The top-level tag, if any.
    pub fn tag(&self) -> Option<&str> {
        match self {
            Element::Tagged(tag, _) => Some(tag),
            _ => None,
        }
    }

    /// Strips one level of tagging when the tag matches.
    pub fn untag(&self, tag: &str) -> Option<&Element> {
        match self {
            Element::Tagged(t, inner) if t == tag => Some(inner),
            _ => None,
        }
    }

    pub fn as_int(&self) -> Option<i64> {
        match self {
            Element::Int(v) => Some(*v),
            _ => None,
        }
    }

    pub fn as_tuple(&self) -> Option<&[Element]> {
        match self {
            Element::Tuple(items) => Some(items),
            _ => None,
        }
    }

    /// Canonical text encoding.
    pub fn encode(&self) -> String {
        self.to_string()
    }

    /// Parses a canonical encoding; the whole input must be consumed.
    pub fn decode(text: &str) -> Result<Self> {
        let mut parser = Parser { text, pos: 0 };
        let element = parser.element()?;
        if parser.pos != text.len() {
            return Err(parser.error("trailing input"));
        }
        Ok(element)
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Int(v) => write!(f, "{v}"),
            Element::Atom(name) => f.write_str(name),
            Element::Tagged(tag, inner) => write!(f, "{tag}:{inner}"),
            Element::Tuple(items) => {
                f.write_str("(")?;
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{item}")?;
                }
                f.write_str(")")
            }
        }
    }
}

impl FromStr for Element {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Element::decode(s)
    }
}

struct Parser<'a> {
    text: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, message: &str) -> Error {
        Error::Parse {
            offset: self.pos,
            message: message.to_string(),
        }
    }

    fn peek(&self) -> Option<char> {
        self.text[self.pos..].chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    fn element(&mut self) -> Result<Element> {
        match self.peek() {
            None => Err(self.error("expected an element, found end of input")),
            Some('(') => self.tuple(),
            Some(c) if c == '-' || c.is_ascii_digit() => self.integer(),
            Some(c) if c.is_alphabetic() || c == '_' => {
                let name = self.name();
                if self.peek() == Some(':') {
                    self.bump();
                    let inner = self.element()?;
                    Ok(Element::Tagged(name, Box::new(inner)))
                } else {
                    Ok(Element::Atom(name))
                }
            }
            Some(_) => Err(self.error("unexpected character")),
        }
    }

    fn name(&mut self) -> String {
        let start = self.pos;
        self.bump();
        while matches!(self.peek(), Some(c) if is_name_char(c)) {
            self.bump();
        }
        self.text[start..self.pos].to_string()
    }

    fn integer(&mut self) -> Result<Element> {
        let start = self.pos;
        if self.peek() == Some('-') {
            self.bump();
        }
        let digits = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.bump();
        }
        if self.pos == digits {
            return Err(self.error("expected digits"));
        }
        let literal = &self.text[start..self.pos];
        let magnitude = &self.text[digits..self.pos];
        // Leading zeros would give a second spelling of the same integer.
        if (magnitude.len() > 1 && magnitude.starts_with('0')) || literal == "-0" {
            return Err(Error::Parse {
                offset: start,
                message: "non-canonical integer".into(),
            });
        }
        literal.parse().map(Element::Int).map_err(|_| Error::Parse {
            offset: start,
            message: "integer out of range".into(),
        })
    }

    fn tuple(&mut self) -> Result<Element> {
        self.bump();
        let mut items = Vec::new();
        if self.peek() == Some(')') {
            self.bump();
            return Ok(Element::Tuple(items));
        }
        loop {
            items.push(self.element()?);
            let before = self.pos;
            match self.bump() {
                Some(',') => continue,
                Some(')') => return Ok(Element::Tuple(items)),
                Some(_) => {
                    self.pos = before;
                    return Err(self.error("expected ',' or ')'"));
                }
                None => return Err(self.error("unterminated tuple")),
            }
        }
    }
}

/// A finite set of elements iterated in canonical order. Inserting a
/// duplicate is a no-op.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FiniteSet {
    members: BTreeSet<Element>,
}

impl FiniteSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns `false` if the element was already present.
    pub fn insert(&mut self, element: Element) -> bool {
        self.members.insert(element)
    }

    pub fn remove(&mut self, element: &Element) -> bool {
        self.members.remove(element)
    }

    pub fn contains(&self, element: &Element) -> bool {
        self.members.contains(element)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn iter(&self) -> btree_set::Iter<'_, Element> {
        self.members.iter()
    }

    pub fn first(&self) -> Option<&Element> {
        self.members.first()
    }

    pub fn union(&self, other: &FiniteSet) -> FiniteSet {
        self.members.union(&other.members).cloned().collect()
    }

    pub fn intersection(&self, other: &FiniteSet) -> FiniteSet {
        self.members.intersection(&other.members).cloned().collect()
    }

    pub fn difference(&self, other: &FiniteSet) -> FiniteSet {
        self.members.difference(&other.members).cloned().collect()
    }

    pub fn is_disjoint(&self, other: &FiniteSet) -> bool {
        self.members.is_disjoint(&other.members)
    }

    pub fn is_subset(&self, other: &FiniteSet) -> bool {
        self.members.is_subset(&other.members)
    }

    /// Smallest common element, used as a witness for overlap errors.
    pub fn common_element<'a>(&'a self, other: &'a FiniteSet) -> Option<&'a Element> {
        self.members.intersection(&other.members).next()
    }

    /// Tags every member, returning the relabeled set and the relabeling
    /// pairs `e -> tag:e`.
    pub fn freshen(&self, tag: &str) -> Result<(FiniteSet, Vec<(Element, Element)>)> {
        if !is_valid_name(tag) {
            return Err(Error::InvalidName(tag.to_string()));
        }
        let pairs: Vec<_> = self
            .iter()
            .map(|e| (e.clone(), Element::Tagged(tag.to_string(), Box::new(e.clone()))))
            .collect();
        let set = pairs.iter().map(|(_, t)| t.clone()).collect();
        Ok((set, pairs))
    }

    /// `base`, `base1`, `base2`, ... whichever first names a tag that no
    /// member of `sets` carries at top level.
    pub fn fresh_tag<'a>(base: &str, sets: impl IntoIterator<Item = &'a FiniteSet>) -> String {
        let used: BTreeSet<&str> = sets
            .into_iter()
            .flat_map(|s| s.iter().filter_map(Element::tag))
            .collect();
        if !used.contains(base) {
            return base.to_string();
        }
        (1..)
            .map(|i| format!("{base}{i}"))
            .find(|t| !used.contains(t.as_str()))
            .expect("unbounded search")
    }

    /// Canonical texts of the members, in order.
    pub fn encode(&self) -> Vec<String> {
        self.iter().map(Element::encode).collect()
    }
}

impl FromIterator<Element> for FiniteSet {
    fn from_iter<I: IntoIterator<Item = Element>>(iter: I) -> Self {
        FiniteSet {
            members: iter.into_iter().collect(),
        }
    }
}

impl IntoIterator for FiniteSet {
    type Item = Element;
    type IntoIter = btree_set::IntoIter<Element>;

    fn into_iter(self) -> Self::IntoIter {
        self.members.into_iter()
    }
}

impl<'a> IntoIterator for &'a FiniteSet {
    type Item = &'a Element;
    type IntoIter = btree_set::Iter<'a, Element>;

    fn into_iter(self) -> Self::IntoIter {
        self.members.iter()
    }
}

impl Extend<Element> for FiniteSet {
    fn extend<I: IntoIterator<Item = Element>>(&mut self, iter: I) {
        self.members.extend(iter)
    }
}

impl fmt::Display for FiniteSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, e) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("}")
    }
}

/// Builds a set of atoms; panics on an invalid name.
pub fn atoms<'a>(names: impl IntoIterator<Item = &'a str>) -> FiniteSet {
    names.into_iter().map(Element::atom).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn a(name: &str) -> Element {
        Element::atom(name)
    }

    #[test]
    fn encodes_each_variant() {
        assert_eq!(a("a1").encode(), "a1");
        assert_eq!(Element::tagged("L", a("x")).encode(), "L:x");
        assert_eq!(Element::tuple([Element::int(3), Element::int(1)]).encode(), "(3,1)");
        assert_eq!(Element::tuple([]).encode(), "()");
        assert_eq!(Element::int(-12).encode(), "-12");
    }

    #[test]
    fn decodes_each_variant() {
        assert_eq!(Element::decode("a1").unwrap(), a("a1"));
        assert_eq!(
            Element::decode("(3,1)").unwrap(),
            Element::tuple([Element::int(3), Element::int(1)])
        );
        assert_eq!(
            Element::decode("L:(1,2)").unwrap(),
            Element::tagged("L", Element::tuple([Element::int(1), Element::int(2)]))
        );
        assert_eq!(
            Element::decode("L1:R:x").unwrap(),
            Element::tagged("L1", Element::tagged("R", a("x")))
        );
    }

    #[test]
    fn decode_reports_offsets() {
        let err = |s: &str| match Element::decode(s) {
            Err(Error::Parse { offset, .. }) => offset,
            other => panic!("expected parse error for {s:?}, got {other:?}"),
        };
        assert_eq!(err(""), 0);
        assert_eq!(err("(1,2"), 4);
        assert_eq!(err("(1;2)"), 2);
        assert_eq!(err("a b"), 1);
        assert_eq!(err("L:"), 2);
        assert_eq!(err("007"), 0);
        assert_eq!(err("-"), 1);
        assert_eq!(err(")"), 0);
    }

    #[test]
    fn order_is_ints_atoms_tagged_tuples() {
        let mut v = [
            Element::tuple([]),
            Element::tagged("A", Element::int(0)),
            a("z"),
            Element::int(99),
        ];
        v.sort();
        assert_eq!(v[0], Element::int(99));
        assert_eq!(v[1], a("z"));
        assert!(matches!(v[2], Element::Tagged(..)));
        assert!(matches!(v[3], Element::Tuple(..)));
    }

    #[test]
    fn rejects_bad_names() {
        assert!(Element::try_atom("").is_err());
        assert!(Element::try_atom("1a").is_err());
        assert!(Element::try_atom("a:b").is_err());
        assert!(Element::try_tagged("x y", a("z")).is_err());
        assert!(Element::try_atom("c'").is_ok());
    }

    #[test]
    fn set_operations() {
        let ab = atoms(["a", "b"]);
        let bc = atoms(["b", "c"]);
        assert_eq!(atoms(["a"]).union(&atoms(["b"])), ab);
        assert_eq!(ab.intersection(&bc), atoms(["b"]));
        assert_eq!(ab.difference(&bc), atoms(["a"]));
        assert!(!atoms(["a"]).is_disjoint(&atoms(["a"])));
        assert!(atoms(["a"]).is_disjoint(&atoms(["b"])));
    }

    #[test]
    fn duplicate_insert_is_idempotent() {
        let mut s = FiniteSet::new();
        assert!(s.insert(a("a")));
        assert!(!s.insert(a("a")));
        assert_eq!(s.len(), 1);
    }

    #[test]
    fn freshen_tags_members() {
        let (set, pairs) = atoms(["x"]).freshen("L").unwrap();
        assert_eq!(set.encode(), vec!["L:x"]);
        assert_eq!(pairs, vec![(a("x"), Element::tagged("L", a("x")))]);

        let (set, pairs) = FiniteSet::new().freshen("L").unwrap();
        assert!(set.is_empty() && pairs.is_empty());

        let s: FiniteSet = [Element::int(1), Element::int(2)].into_iter().collect();
        let (set, pairs) = s.freshen("R").unwrap();
        assert_eq!(set.encode(), vec!["R:1", "R:2"]);
        assert_eq!(pairs.len(), 2);
    }

    #[test]
    fn fresh_tag_skips_used_tags() {
        let s: FiniteSet = [Element::tagged("R", a("x")), Element::tagged("R1", a("y"))]
            .into_iter()
            .collect();
        assert_eq!(FiniteSet::fresh_tag("R", [&s]), "R2");
        assert_eq!(FiniteSet::fresh_tag("R", [&atoms(["R"])]), "R");
    }

    pub(crate) fn arb_element() -> impl Strategy<Value = Element> {
        let name = "[a-zA-Z_][a-zA-Z0-9_']{0,4}";
        let leaf = prop_oneof![
            any::<i64>().prop_map(Element::Int),
            name.prop_map(Element::Atom),
        ];
        leaf.prop_recursive(4, 24, 4, move |inner| {
            prop_oneof![
                (name, inner.clone()).prop_map(|(t, e)| Element::Tagged(t, Box::new(e))),
                prop::collection::vec(inner, 0..4).prop_map(Element::Tuple),
            ]
        })
    }

    proptest! {
        #[test]
        fn encoding_round_trips(e in arb_element()) {
            prop_assert_eq!(Element::decode(&e.encode()).unwrap(), e);
        }

        #[test]
        fn encoding_is_injective(x in arb_element(), y in arb_element()) {
            prop_assert_eq!(x == y, x.encode() == y.encode());
        }

        #[test]
        fn set_ops_match_pairwise_oracle(
            xs in prop::collection::vec(0i64..10, 0..8),
            ys in prop::collection::vec(0i64..10, 0..8),
        ) {
            let s: FiniteSet = xs.iter().copied().map(Element::Int).collect();
            let t: FiniteSet = ys.iter().copied().map(Element::Int).collect();
            let naive_in = |v: &[i64], x: i64| v.contains(&x);
            for x in 0..10 {
                let e = Element::Int(x);
                prop_assert_eq!(s.union(&t).contains(&e), naive_in(&xs, x) || naive_in(&ys, x));
                prop_assert_eq!(s.intersection(&t).contains(&e), naive_in(&xs, x) && naive_in(&ys, x));
                prop_assert_eq!(s.difference(&t).contains(&e), naive_in(&xs, x) && !naive_in(&ys, x));
            }
            let disjoint = xs.iter().all(|x| !naive_in(&ys, *x));
            prop_assert_eq!(s.is_disjoint(&t), disjoint);
        }

        #[test]
        fn freshen_output_is_disjoint(xs in prop::collection::vec(0i64..20, 0..8)) {
            let s: FiniteSet = xs.into_iter().map(Element::Int).collect();
            let (fresh, _) = s.freshen("T").unwrap();
            prop_assert!(fresh.is_disjoint(&s));
            prop_assert_eq!(fresh.len(), s.len());
        }
    }
}
