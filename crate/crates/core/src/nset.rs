//! The category of matchings of finite sets.
//!
//! A [`Matching`] is a bijection stored together with its inverse.
//! Composition is written in "then" order: `f.then(&g)` sends `x` to
//! `g(f(x))`.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::elements::{Element, FiniteSet};
use crate::error::{Error, Result};

/// A verified bijection `domain => codomain`. Domain and codomain may
/// intersect; an involution is a matching from a set to itself.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Matching {
    domain: FiniteSet,
    codomain: FiniteSet,
    forward: BTreeMap<Element, Element>,
    backward: BTreeMap<Element, Element>,
}

impl Matching {
    /// Builds and verifies a matching. Every domain element must occur exactly
    /// once on the left of a pair and every codomain element exactly once on
    /// the right.
    pub fn new(
        domain: FiniteSet,
        codomain: FiniteSet,
        pairs: impl IntoIterator<Item = (Element, Element)>,
    ) -> Result<Self> {
        if domain.len() != codomain.len() {
            return Err(Error::SizeMismatch {
                domain: domain.len(),
                codomain: codomain.len(),
            });
        }
        let mut forward = BTreeMap::new();
        let mut backward = BTreeMap::new();
        for (x, y) in pairs {
            if !domain.contains(&x) {
                return Err(Error::NotInDomain(x));
            }
            if !codomain.contains(&y) {
                return Err(Error::NotInCodomain(y));
            }
            if forward.insert(x.clone(), y.clone()).is_some() {
                return Err(Error::DuplicateSource(x));
            }
            if backward.insert(y.clone(), x).is_some() {
                return Err(Error::DuplicateTarget(y));
            }
        }
        if let Some(x) = domain.iter().find(|x| !forward.contains_key(*x)) {
            return Err(Error::Unmapped(x.clone()));
        }
        Ok(Matching {
            domain,
            codomain,
            forward,
            backward,
        })
    }

    /// Domain and codomain are read off the pairs.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (Element, Element)>) -> Result<Self> {
        let pairs: Vec<_> = pairs.into_iter().collect();
        let domain = pairs.iter().map(|(x, _)| x.clone()).collect::<FiniteSet>();
        let codomain = pairs.iter().map(|(_, y)| y.clone()).collect::<FiniteSet>();
        if domain.len() < pairs.len() {
            let mut seen = FiniteSet::new();
            let dup = pairs.iter().find(|(x, _)| !seen.insert(x.clone())).unwrap();
            return Err(Error::DuplicateSource(dup.0.clone()));
        }
        Self::new(domain, codomain, pairs)
    }

    pub fn identity(set: &FiniteSet) -> Self {
        let forward: BTreeMap<_, _> = set.iter().map(|e| (e.clone(), e.clone())).collect();
        Matching {
            domain: set.clone(),
            codomain: set.clone(),
            backward: forward.clone(),
            forward,
        }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    /// Wraps maps without any checking. Only meant for exercising verifiers
    /// on corrupted data.
    #[doc(hidden)]
    pub fn from_raw_parts(
        domain: FiniteSet,
        codomain: FiniteSet,
        forward: BTreeMap<Element, Element>,
        backward: BTreeMap<Element, Element>,
    ) -> Self {
        Matching {
            domain,
            codomain,
            forward,
            backward,
        }
    }

    pub fn domain(&self) -> &FiniteSet {
        &self.domain
    }

    pub fn codomain(&self) -> &FiniteSet {
        &self.codomain
    }

    pub fn forward_map(&self) -> &BTreeMap<Element, Element> {
        &self.forward
    }

    pub fn backward_map(&self) -> &BTreeMap<Element, Element> {
        &self.backward
    }

    pub fn len(&self) -> usize {
        self.forward.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forward.is_empty()
    }

    pub fn apply(&self, x: &Element) -> Result<&Element> {
        self.forward.get(x).ok_or_else(|| Error::Lookup(x.clone()))
    }

    pub fn get(&self, x: &Element) -> Option<&Element> {
        self.forward.get(x)
    }

    pub fn preimage(&self, y: &Element) -> Option<&Element> {
        self.backward.get(y)
    }

    /// Pairs in canonical domain order.
    pub fn pairs(&self) -> impl Iterator<Item = (&Element, &Element)> {
        self.forward.iter()
    }

    pub fn invert(&self) -> Matching {
        Matching {
            domain: self.codomain.clone(),
            codomain: self.domain.clone(),
            forward: self.backward.clone(),
            backward: self.forward.clone(),
        }
    }

    /// `f + g`: the union of two matchings with disjoint domains and disjoint
    /// codomains.
    pub fn disjoint_sum(&self, other: &Matching) -> Result<Matching> {
        if let Some(w) = self.domain.common_element(&other.domain) {
            return Err(Error::Overlap(w.clone()));
        }
        if let Some(w) = self.codomain.common_element(&other.codomain) {
            return Err(Error::Overlap(w.clone()));
        }
        let mut sum = self.clone();
        sum.domain.extend(other.domain.iter().cloned());
        sum.codomain.extend(other.codomain.iter().cloned());
        sum.forward
            .extend(other.forward.iter().map(|(x, y)| (x.clone(), y.clone())));
        sum.backward
            .extend(other.backward.iter().map(|(x, y)| (x.clone(), y.clone())));
        Ok(sum)
    }

    /// `self ◁ other`, defined when `codomain(self) = domain(other)`.
    pub fn then(&self, other: &Matching) -> Result<Matching> {
        if self.codomain != other.domain {
            return Err(Error::Composition(format!(
                "codomain {} does not equal domain {}",
                self.codomain, other.domain
            )));
        }
        let forward: BTreeMap<_, _> = self
            .forward
            .iter()
            .map(|(x, y)| (x.clone(), other.forward[y].clone()))
            .collect();
        let backward = forward.iter().map(|(x, z)| (z.clone(), x.clone())).collect();
        Ok(Matching {
            domain: self.domain.clone(),
            codomain: other.codomain.clone(),
            forward,
            backward,
        })
    }

    /// Relabels both sides through `rename`, which must be injective on the
    /// domain and on the codomain.
    pub fn map_elements(&self, mut rename: impl FnMut(&Element) -> Element) -> Result<Matching> {
        let domain = self.domain.iter().map(&mut rename).collect();
        let codomain = self.codomain.iter().map(&mut rename).collect();
        let pairs: Vec<_> = self.pairs().map(|(x, y)| (rename(x), rename(y))).collect();
        Matching::new(domain, codomain, pairs)
    }

    pub fn is_involution(&self) -> bool {
        self.domain == self.codomain && self.forward.iter().all(|(x, y)| &self.forward[y] == x)
    }

    /// Wire form; pairs come in canonical domain order.
    pub fn to_json(&self) -> MatchingJson {
        MatchingJson {
            domain: self.domain.encode(),
            codomain: self.codomain.encode(),
            pairs: self.pairs().map(|(x, y)| [x.encode(), y.encode()]).collect(),
        }
    }

    pub fn fixed_points(&self) -> FiniteSet {
        self.forward
            .iter()
            .filter(|(x, y)| x == y)
            .map(|(x, _)| x.clone())
            .collect()
    }
}

impl fmt::Display for Matching {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, (x, y)) in self.pairs().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{x} -> {y}")?;
        }
        f.write_str("]")
    }
}

/// `{"domain": [...], "codomain": [...], "pairs": [[x, y], ...]}` with
/// canonical element texts.
#[derive(Debug, Clone, Serialize)]
pub struct MatchingJson {
    pub domain: Vec<String>,
    pub codomain: Vec<String>,
    pub pairs: Vec<[String; 2]>,
}

/// `m1 ◁ m2`.
pub fn compose_nset(m1: &Matching, m2: &Matching) -> Result<Matching> {
    m1.then(m2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elements::atoms;
    use proptest::prelude::*;

    fn a(name: &str) -> Element {
        Element::atom(name)
    }

    fn pair(x: &str, y: &str) -> (Element, Element) {
        (a(x), a(y))
    }

    #[test]
    fn constructs_valid_matchings() {
        let m = Matching::new(atoms(["a"]), atoms(["b"]), [pair("a", "b")]).unwrap();
        assert_eq!(m.apply(&a("a")).unwrap(), &a("b"));

        let swap = Matching::new(atoms(["a", "b"]), atoms(["a", "b"]), [pair("a", "b"), pair("b", "a")])
            .unwrap();
        assert!(swap.is_involution());
        assert!(swap.fixed_points().is_empty());
    }

    #[test]
    fn construction_errors_name_the_offender() {
        assert!(matches!(
            Matching::new(atoms(["a", "b"]), atoms(["c"]), [pair("a", "c")]),
            Err(Error::SizeMismatch { domain: 2, codomain: 1 })
        ));
        assert_eq!(
            Matching::new(atoms(["a", "b"]), atoms(["c", "d"]), [pair("a", "c")]),
            Err(Error::Unmapped(a("b")))
        );
        assert_eq!(
            Matching::new(atoms(["a", "b"]), atoms(["c", "d"]), [pair("a", "c"), pair("b", "c")]),
            Err(Error::DuplicateTarget(a("c")))
        );
        assert_eq!(
            Matching::new(atoms(["a", "b"]), atoms(["c", "d"]), [pair("a", "c"), pair("a", "d")]),
            Err(Error::DuplicateSource(a("a")))
        );
        assert_eq!(
            Matching::new(atoms(["a"]), atoms(["c"]), [pair("z", "c")]),
            Err(Error::NotInDomain(a("z")))
        );
        assert_eq!(
            Matching::from_pairs([pair("a", "b"), pair("a", "c")]),
            Err(Error::DuplicateSource(a("a")))
        );
    }

    #[test]
    fn apply_outside_domain_fails() {
        let m = Matching::from_pairs([pair("a", "b")]).unwrap();
        assert_eq!(m.apply(&a("b")), Err(Error::Lookup(a("b"))));
        let id = Matching::identity(&atoms(["x", "y"]));
        assert_eq!(id.apply(&a("y")).unwrap(), &a("y"));
    }

    #[test]
    fn invert_swaps_sides() {
        let m = Matching::from_pairs([pair("a", "b")]).unwrap();
        assert_eq!(m.invert(), Matching::from_pairs([pair("b", "a")]).unwrap());
        let id = Matching::identity(&atoms(["x", "y"]));
        assert_eq!(id.invert(), id);
    }

    #[test]
    fn disjoint_sum_cases() {
        let ab = Matching::from_pairs([pair("a", "b")]).unwrap();
        let cd = Matching::from_pairs([pair("c", "d")]).unwrap();
        assert_eq!(
            ab.disjoint_sum(&cd).unwrap(),
            Matching::from_pairs([pair("a", "b"), pair("c", "d")]).unwrap()
        );
        assert_eq!(ab.disjoint_sum(&Matching::empty()).unwrap(), ab);
        let ad = Matching::from_pairs([pair("a", "d")]).unwrap();
        assert_eq!(ab.disjoint_sum(&ad), Err(Error::Overlap(a("a"))));
    }

    #[test]
    fn composition_in_then_order() {
        let ab = Matching::from_pairs([pair("a", "b")]).unwrap();
        let bc = Matching::from_pairs([pair("b", "c")]).unwrap();
        assert_eq!(ab.then(&bc).unwrap(), Matching::from_pairs([pair("a", "c")]).unwrap());
        assert_eq!(ab.then(&Matching::identity(ab.codomain())).unwrap(), ab);
        assert!(matches!(bc.then(&ab), Err(Error::Composition(_))));
    }

    /// A random bijection from `0..n` onto `labels`, given as a permutation.
    fn arb_matching(n: usize, offset: i64) -> impl Strategy<Value = Matching> {
        Just((0..n as i64).collect::<Vec<_>>())
            .prop_shuffle()
            .prop_map(move |perm| {
                Matching::from_pairs(
                    perm.into_iter()
                        .enumerate()
                        .map(|(i, j)| (Element::Int(i as i64 + offset), Element::Int(j + offset))),
                )
                .unwrap()
            })
    }

    fn triple() -> impl Strategy<Value = (Matching, Matching, Matching)> {
        (0usize..=6).prop_flat_map(|n| (arb_matching(n, 0), arb_matching(n, 0), arb_matching(n, 0)))
    }

    proptest! {
        #[test]
        fn forward_and_backward_are_inverse(m in (0usize..=6).prop_flat_map(|n| arb_matching(n, 0))) {
            for (x, y) in m.pairs() {
                prop_assert_eq!(m.preimage(y), Some(x));
            }
            for (y, x) in m.backward_map() {
                prop_assert_eq!(m.get(x), Some(y));
            }
            prop_assert_eq!(m.invert().invert(), m);
        }

        #[test]
        fn composition_matches_pointwise_oracle((f, g, _) in triple()) {
            let fg = f.then(&g).unwrap();
            for x in f.domain() {
                let expected = g.get(f.get(x).unwrap()).unwrap();
                prop_assert_eq!(fg.get(x).unwrap(), expected);
            }
        }

        #[test]
        fn composition_is_associative((f, g, h) in triple()) {
            let left = f.then(&g).unwrap().then(&h).unwrap();
            let right = f.then(&g.then(&h).unwrap()).unwrap();
            prop_assert_eq!(left, right);
        }

        #[test]
        fn disjoint_sum_commutes_and_associates(
            f in (0usize..=4).prop_flat_map(|n| arb_matching(n, 0)),
            g in (0usize..=4).prop_flat_map(|n| arb_matching(n, 10)),
            h in (0usize..=4).prop_flat_map(|n| arb_matching(n, 20)),
        ) {
            prop_assert_eq!(f.disjoint_sum(&g).unwrap(), g.disjoint_sum(&f).unwrap());
            let left = f.disjoint_sum(&g).unwrap().disjoint_sum(&h).unwrap();
            let right = f.disjoint_sum(&g.disjoint_sum(&h).unwrap()).unwrap();
            prop_assert_eq!(left, right);
        }
    }
}
