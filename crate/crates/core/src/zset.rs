//! Signed sets and cobordisms between them.
//!
//! A signed set is a pair `⟨A⁺, A⁻⟩` of disjoint finite sets, read as
//! `A⁺ − A⁻`. A cobordism `f: A => B` is a matching
//! `|f|: A⁺ + B⁻ => A⁻ + B⁺`. A chain `A₀ => A₁ => … => Aₙ` composes with a
//! single cancellation over the interior carriers `|A₁| + … + |Aₙ₋₁|`.
//!
//! Disjoint unions inside one signed set are honest unions of sets: if the
//! halves would collide the operation fails and the caller relabels with
//! [`FiniteSet::freshen`] or [`SignedSet::freshen`]. Across the nodes of a
//! chain no such care is needed, since [`ChainSum`] tags each element with
//! the index of the node it lives in.

use serde::Serialize;

use crate::elements::{Element, FiniteSet};
use crate::error::{Error, Result};
use crate::nset::{Matching, MatchingJson};
use crate::subtraction::{self, Trace};

/// `⟨pos, neg⟩` with `pos ∩ neg = ∅`.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SignedSet {
    pos: FiniteSet,
    neg: FiniteSet,
}

impl SignedSet {
    pub fn new(pos: FiniteSet, neg: FiniteSet) -> Result<Self> {
        if let Some(w) = pos.common_element(&neg) {
            return Err(Error::SignedOverlap(w.clone()));
        }
        Ok(SignedSet { pos, neg })
    }

    pub fn unsigned(set: FiniteSet) -> Self {
        SignedSet {
            pos: set,
            neg: FiniteSet::new(),
        }
    }

    /// The empty signed set `0`.
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn pos(&self) -> &FiniteSet {
        &self.pos
    }

    pub fn neg(&self) -> &FiniteSet {
        &self.neg
    }

    /// `|A| = A⁺ + A⁻`.
    pub fn carrier(&self) -> FiniteSet {
        self.pos.union(&self.neg)
    }

    pub fn is_unsigned(&self) -> bool {
        self.neg.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.pos.is_empty() && self.neg.is_empty()
    }

    /// `|A⁺| − |A⁻|`, the invariant a cobordism preserves.
    pub fn signed_size(&self) -> i64 {
        self.pos.len() as i64 - self.neg.len() as i64
    }

    /// `self ⊂ other`, halfwise.
    pub fn is_subset(&self, other: &SignedSet) -> bool {
        self.pos.is_subset(&other.pos) && self.neg.is_subset(&other.neg)
    }

    /// `self ∖ sub`, defined when `sub ⊂ self`.
    pub fn setminus(&self, sub: &SignedSet) -> Result<SignedSet> {
        if let Some(w) = sub
            .pos
            .difference(&self.pos)
            .first()
            .or(sub.neg.difference(&self.neg).first())
            .cloned()
        {
            return Err(Error::NotSubset(w));
        }
        Ok(SignedSet {
            pos: self.pos.difference(&sub.pos),
            neg: self.neg.difference(&sub.neg),
        })
    }

    /// `A + B = ⟨A⁺ + B⁺, A⁻ + B⁻⟩`. The carriers must be disjoint.
    pub fn sum(&self, other: &SignedSet) -> Result<SignedSet> {
        if let Some(w) = self.carrier().common_element(&other.carrier()) {
            return Err(Error::SignedOverlap(w.clone()));
        }
        Ok(SignedSet {
            pos: self.pos.union(&other.pos),
            neg: self.neg.union(&other.neg),
        })
    }

    /// `−A = ⟨A⁻, A⁺⟩`.
    pub fn negate(&self) -> SignedSet {
        SignedSet {
            pos: self.neg.clone(),
            neg: self.pos.clone(),
        }
    }

    /// `A − B = A + (−B)`.
    pub fn diff(&self, other: &SignedSet) -> Result<SignedSet> {
        self.sum(&other.negate())
    }

    /// Tags every element, keeping signs.
    pub fn freshen(&self, tag: &str) -> Result<SignedSet> {
        let (pos, _) = self.pos.freshen(tag)?;
        let (neg, _) = self.neg.freshen(tag)?;
        Ok(SignedSet { pos, neg })
    }

    pub fn to_json(&self) -> SignedSetJson {
        SignedSetJson {
            pos: self.pos.encode(),
            neg: self.neg.encode(),
        }
    }
}

impl std::fmt::Display for SignedSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "⟨{}, {}⟩", self.pos, self.neg)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SignedSetJson {
    pub pos: Vec<String>,
    pub neg: Vec<String>,
}

/// A cobordism `src => dst` with core matching
/// `src⁺ ∪ dst⁻ => src⁻ ∪ dst⁺`. Equality is structural.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Cobordism {
    src: SignedSet,
    dst: SignedSet,
    core: Matching,
}

impl Cobordism {
    /// Checks the endpoint shapes, then builds the core from `pairs`.
    pub fn new(
        src: SignedSet,
        dst: SignedSet,
        pairs: impl IntoIterator<Item = (Element, Element)>,
    ) -> Result<Self> {
        let (domain, codomain) = core_shape(&src, &dst)?;
        let core = Matching::new(domain, codomain, pairs)?;
        Ok(Cobordism { src, dst, core })
    }

    pub fn from_core(src: SignedSet, dst: SignedSet, core: Matching) -> Result<Self> {
        let (domain, codomain) = core_shape(&src, &dst)?;
        if core.domain() != &domain || core.codomain() != &codomain {
            return Err(Error::Shape(format!(
                "core must match {domain} => {codomain}, got {} => {}",
                core.domain(),
                core.codomain()
            )));
        }
        Ok(Cobordism { src, dst, core })
    }

    pub fn src(&self) -> &SignedSet {
        &self.src
    }

    pub fn dst(&self) -> &SignedSet {
        &self.dst
    }

    /// `|f|`.
    pub fn core(&self) -> &Matching {
        &self.core
    }

    pub fn identity(a: &SignedSet) -> Self {
        Cobordism {
            src: a.clone(),
            dst: a.clone(),
            core: Matching::identity(&a.carrier()),
        }
    }

    /// The empty cobordism `0 => 0`.
    pub fn empty() -> Self {
        Self::identity(&SignedSet::zero())
    }

    /// A matching `A => B` viewed as a cobordism between unsigned sets.
    pub fn from_matching(m: &Matching) -> Self {
        Cobordism {
            src: SignedSet::unsigned(m.domain().clone()),
            dst: SignedSet::unsigned(m.codomain().clone()),
            core: m.clone(),
        }
    }

    /// The core, provided both endpoints are unsigned.
    pub fn to_matching(&self) -> Result<Matching> {
        for end in [&self.src, &self.dst] {
            if let Some(w) = end.neg.first() {
                return Err(Error::UnsignedRequired(w.clone()));
            }
        }
        Ok(self.core.clone())
    }

    pub fn is_matching(&self) -> bool {
        self.src.is_unsigned() && self.dst.is_unsigned()
    }

    /// `−f: −B => −A` with the same core.
    pub fn negate(&self) -> Cobordism {
        Cobordism {
            src: self.dst.negate(),
            dst: self.src.negate(),
            core: self.core.clone(),
        }
    }

    /// `f + g: A + C => B + D`.
    pub fn sum(&self, other: &Cobordism) -> Result<Cobordism> {
        let src = self.src.sum(&other.src)?;
        let dst = self.dst.sum(&other.dst)?;
        let core = self.core.disjoint_sum(&other.core)?;
        Cobordism::from_core(src, dst, core)
    }

    /// `f − g = f + (−g)`.
    pub fn diff(&self, other: &Cobordism) -> Result<Cobordism> {
        self.sum(&other.negate())
    }

    /// The reverse cobordism `B => A`, whose core is the inverse matching.
    pub fn invert(&self) -> Cobordism {
        Cobordism {
            src: self.dst.clone(),
            dst: self.src.clone(),
            core: self.core.invert(),
        }
    }

    /// `f ◁ g`.
    pub fn then(&self, other: &Cobordism) -> Result<Cobordism> {
        compose_chain(&[self.clone(), other.clone()])
    }

    /// Relabels every element through `rename` on both endpoints and the core.
    pub fn map_elements(&self, rename: impl Fn(&Element) -> Element) -> Result<Cobordism> {
        let end = |s: &SignedSet| {
            SignedSet::new(s.pos.iter().map(&rename).collect(), s.neg.iter().map(&rename).collect())
        };
        Cobordism::from_core(end(&self.src)?, end(&self.dst)?, self.core.map_elements(&rename)?)
    }

    pub fn to_json(&self) -> CobordismJson {
        CobordismJson {
            src: self.src.to_json(),
            dst: self.dst.to_json(),
            core: self.core.to_json(),
        }
    }
}

fn core_shape(src: &SignedSet, dst: &SignedSet) -> Result<(FiniteSet, FiniteSet)> {
    if let Some(w) = src.pos.common_element(&dst.neg) {
        return Err(Error::Overlap(w.clone()));
    }
    if let Some(w) = src.neg.common_element(&dst.pos) {
        return Err(Error::Overlap(w.clone()));
    }
    Ok((src.pos.union(&dst.neg), src.neg.union(&dst.pos)))
}

#[derive(Debug, Clone, Serialize)]
pub struct CobordismJson {
    pub src: SignedSetJson,
    pub dst: SignedSetJson,
    pub core: MatchingJson,
}

/// `create(φ): 0 => B − A` with core `|φ|`.
pub fn create_from(phi: &Cobordism) -> Result<Cobordism> {
    let dst = phi.dst.diff(&phi.src)?;
    Cobordism::from_core(SignedSet::zero(), dst, phi.core.clone())
}

/// `destroy(φ) = −create(φ): A − B => 0`.
pub fn destroy_from(phi: &Cobordism) -> Result<Cobordism> {
    Ok(create_from(phi)?.negate())
}

/// The relabeling cobordism `A => A'`, where `A'` tags every element of `A`
/// with `tag`. Returns `A'` as well.
pub fn relabel(a: &SignedSet, tag: &str) -> Result<(SignedSet, Cobordism)> {
    let fresh = a.freshen(tag)?;
    let wrap = |e: &Element| Element::Tagged(tag.to_string(), Box::new(e.clone()));
    let pairs = a
        .pos
        .iter()
        .map(|x| (x.clone(), wrap(x)))
        .chain(a.neg.iter().map(|x| (wrap(x), x.clone())));
    let cob = Cobordism::new(a.clone(), fresh.clone(), pairs.collect::<Vec<_>>())?;
    Ok((fresh, cob))
}

/// `create(A): 0 => A − A'`, where `A'` is a relabeled copy of `A` (tag `R`
/// unless `A` already uses it). The core sends each copy to its original,
/// so it is `id(|A|)` up to the relabeling.
pub fn create_set(a: &SignedSet) -> Result<Cobordism> {
    let tag = FiniteSet::fresh_tag("R", [&a.carrier()]);
    let (_, forward) = relabel(a, &tag)?;
    create_from(&forward.invert())
}

/// `destroy(A) = −create(A): A' − A => 0`.
pub fn destroy_set(a: &SignedSet) -> Result<Cobordism> {
    Ok(create_set(a)?.negate())
}

/// `f₀ ◁ f₁ ◁ … ◁ fₙ₋₁` by one cancellation.
pub fn compose_chain(fs: &[Cobordism]) -> Result<Cobordism> {
    ChainSum::new(fs)?.compose()
}

/// The disjoint sum `|f₀| + … + |fₙ₋₁|` of a chain's cores, with every
/// element tagged `L<i>` by the index `i` of the node it belongs to.
#[derive(Debug, Clone)]
pub struct ChainSum {
    src: SignedSet,
    dst: SignedSet,
    nodes: usize,
    sum: Matching,
    interior: FiniteSet,
}

/// Tag used for elements of node `i` in a [`ChainSum`].
pub fn layer_tag(i: usize) -> String {
    format!("L{i}")
}

fn layered(i: usize, e: &Element) -> Element {
    Element::Tagged(layer_tag(i), Box::new(e.clone()))
}

impl ChainSum {
    pub fn new(fs: &[Cobordism]) -> Result<Self> {
        let (first, last) = match (fs.first(), fs.last()) {
            (Some(first), Some(last)) => (first, last),
            _ => return Err(Error::Composition("empty chain".into())),
        };
        for (i, pair) in fs.windows(2).enumerate() {
            if pair[0].dst != pair[1].src {
                return Err(Error::Composition(format!(
                    "arrow {i} ends at {} but arrow {} starts at {}",
                    pair[0].dst,
                    i + 1,
                    pair[1].src
                )));
            }
        }
        let mut domain = FiniteSet::new();
        let mut codomain = FiniteSet::new();
        let mut pairs = Vec::new();
        let mut interior = FiniteSet::new();
        for (i, f) in fs.iter().enumerate() {
            // Core domain is A⁺ ∪ B⁻ and codomain A⁻ ∪ B⁺, so the half an
            // element came from is known once its side is.
            let layer = |x: &Element, from_src: &FiniteSet| {
                if from_src.contains(x) { layered(i, x) } else { layered(i + 1, x) }
            };
            domain.extend(f.core.domain().iter().map(|x| layer(x, &f.src.pos)));
            codomain.extend(f.core.codomain().iter().map(|y| layer(y, &f.src.neg)));
            pairs.extend(f.core.pairs().map(|(x, y)| (layer(x, &f.src.pos), layer(y, &f.src.neg))));
            if i > 0 {
                interior.extend(f.src.carrier().iter().map(|x| layered(i, x)));
            }
        }
        // Layer tags keep the summands apart, so this only fails on a bug.
        let sum = Matching::new(domain, codomain, pairs)
            .map_err(|e| Error::Invariant(format!("layered chain sum is not a matching: {e}")))?;
        Ok(ChainSum {
            src: first.src.clone(),
            dst: last.dst.clone(),
            nodes: fs.len() + 1,
            sum,
            interior,
        })
    }

    pub fn sum(&self) -> &Matching {
        &self.sum
    }

    /// The cancelled set `|A₁| + … + |Aₙ₋₁|`, layer-tagged.
    pub fn interior(&self) -> &FiniteSet {
        &self.interior
    }

    /// The cancellation-only core, still layer-tagged.
    pub fn cancelled(&self) -> Result<Matching> {
        subtraction::cancel(&self.interior, &self.sum)
    }

    pub fn compose(&self) -> Result<Cobordism> {
        if let Some(w) = self.src.pos.common_element(&self.dst.neg) {
            return Err(Error::Overlap(w.clone()));
        }
        if let Some(w) = self.src.neg.common_element(&self.dst.pos) {
            return Err(Error::Overlap(w.clone()));
        }
        let core = self.cancelled()?;
        let last = layer_tag(self.nodes - 1);
        let first = layer_tag(0);
        let strip = |e: &Element| match e {
            Element::Tagged(t, inner) if *t == first || *t == last => (**inner).clone(),
            other => other.clone(),
        };
        Cobordism::from_core(self.src.clone(), self.dst.clone(), core.map_elements(strip)?)
    }

    /// The layered start point for an endpoint element: `L0:x` for
    /// `x ∈ A₀⁺`, `Ln:x` for `x ∈ Aₙ⁻`.
    pub fn start_point(&self, x: &Element) -> Result<Element> {
        if self.src.pos.contains(x) {
            Ok(layered(0, x))
        } else if self.dst.neg.contains(x) {
            Ok(layered(self.nodes - 1, x))
        } else {
            Err(Error::Lookup(x.clone()))
        }
    }

    /// The escape orbit of an endpoint element through the interior.
    pub fn trace(&self, x: &Element) -> Result<Trace> {
        subtraction::escape_trace(&self.interior, &self.sum, &self.start_point(x)?)
    }

    /// Orbits of every start point, in canonical order of the layered starts.
    pub fn traces(&self) -> Result<Vec<Trace>> {
        self.sum
            .domain()
            .difference(&self.interior)
            .iter()
            .map(|start| subtraction::escape_trace(&self.interior, &self.sum, start))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elements::atoms;

    fn a(name: &str) -> Element {
        Element::atom(name)
    }

    fn ss(pos: &[&str], neg: &[&str]) -> SignedSet {
        SignedSet::new(atoms(pos.iter().copied()), atoms(neg.iter().copied())).unwrap()
    }

    fn pairs(ps: &[(&str, &str)]) -> Vec<(Element, Element)> {
        ps.iter().map(|(x, y)| (a(x), a(y))).collect()
    }

    #[test]
    fn carrier_cases() {
        assert_eq!(ss(&["a"], &["b"]).carrier(), atoms(["a", "b"]));
        assert_eq!(ss(&["a"], &[]).carrier(), atoms(["a"]));
        assert!(SignedSet::zero().carrier().is_empty());
        assert!(ss(&["a"], &[]).is_unsigned());
        assert!(!ss(&["a"], &["b"]).is_unsigned());
    }

    #[test]
    fn halves_must_be_disjoint() {
        assert_eq!(
            SignedSet::new(atoms(["a"]), atoms(["a"])),
            Err(Error::SignedOverlap(a("a")))
        );
    }

    #[test]
    fn subset_and_setminus() {
        let big = ss(&["a", "b"], &["c"]);
        assert!(ss(&["a"], &[]).is_subset(&big));
        assert_eq!(big.setminus(&ss(&["a"], &[])).unwrap(), ss(&["b"], &["c"]));
        assert!(!ss(&["a"], &["c"]).is_subset(&ss(&["a"], &[])));
        assert_eq!(ss(&["a"], &[]).setminus(&ss(&["a"], &["c"])), Err(Error::NotSubset(a("c"))));
    }

    #[test]
    fn sum_negate_diff() {
        assert_eq!(ss(&["a"], &[]).sum(&ss(&[], &["b"])).unwrap(), ss(&["a"], &["b"]));
        assert_eq!(ss(&["a"], &["b"]).negate(), ss(&["b"], &["a"]));
        let one = ss(&["a"], &[]);
        assert_eq!(one.diff(&one), Err(Error::SignedOverlap(a("a"))));
        let fresh = one.freshen("R").unwrap();
        assert_eq!(
            one.diff(&fresh).unwrap(),
            SignedSet::new(atoms(["a"]), [Element::tagged("R", a("a"))].into_iter().collect()).unwrap()
        );
        let x = ss(&["a", "b"], &["c"]);
        assert_eq!(x.negate().negate(), x);
        assert_eq!(x.negate().carrier(), x.carrier());
        let y = ss(&["d"], &["e"]);
        assert_eq!(x.diff(&y).unwrap(), x.sum(&y.negate()).unwrap());
    }

    #[test]
    fn make_cobordism_shapes() {
        let f = Cobordism::new(ss(&["a"], &[]), ss(&["b"], &[]), pairs(&[("a", "b")])).unwrap();
        assert!(f.is_matching());
        let create = Cobordism::new(SignedSet::zero(), ss(&["x"], &["y"]), pairs(&[("y", "x")])).unwrap();
        assert_eq!(create.core().domain(), &atoms(["y"]));
        assert_eq!(
            Cobordism::new(ss(&["a", "c"], &[]), ss(&["b", "d"], &[]), pairs(&[("a", "b")])),
            Err(Error::Unmapped(a("c")))
        );
        // A⁺ and B⁻ share `a`, so the core domain would not be a disjoint union.
        assert_eq!(
            Cobordism::new(ss(&["a"], &[]), ss(&[], &["a"]), Vec::new()),
            Err(Error::Overlap(a("a")))
        );
    }

    #[test]
    fn identity_cases() {
        let id = Cobordism::identity(&ss(&["a"], &["b"]));
        assert_eq!(id.core(), &Matching::identity(&atoms(["a", "b"])));
        assert!(Cobordism::identity(&SignedSet::zero()).core().is_empty());
        assert_eq!(id.then(&id).unwrap(), id);
    }

    #[test]
    fn composition_hand_trace() {
        // A = ⟨{a},∅⟩, B = ⟨{x,z},{y}⟩, C = ⟨{c},∅⟩.
        let aa = ss(&["a"], &[]);
        let bb = ss(&["x", "z"], &["y"]);
        let cc = ss(&["c"], &[]);
        let f = Cobordism::new(aa.clone(), bb.clone(), pairs(&[("a", "x"), ("y", "z")])).unwrap();
        let g = Cobordism::new(bb, cc.clone(), pairs(&[("x", "y"), ("z", "c")])).unwrap();
        // a -f-> x -g-> y -f-> z -g-> c
        let fg = f.then(&g).unwrap();
        assert_eq!(fg, Cobordism::new(aa, cc, pairs(&[("a", "c")])).unwrap());
        let chain = ChainSum::new(&[f, g]).unwrap();
        let trace = chain.trace(&a("a")).unwrap();
        let texts: Vec<_> = trace.steps.iter().map(Element::encode).collect();
        assert_eq!(texts, ["L1:x", "L1:y", "L1:z", "L2:c"]);
        assert_eq!(trace.in_c, [true, true, true, false]);
    }

    #[test]
    fn unsigned_composition_is_nset_composition() {
        let f = Matching::from_pairs(pairs(&[("a", "b"), ("c", "d")])).unwrap();
        let g = Matching::from_pairs(pairs(&[("b", "c"), ("d", "a")])).unwrap();
        let fg = Cobordism::from_matching(&f).then(&Cobordism::from_matching(&g)).unwrap();
        assert_eq!(fg.to_matching().unwrap(), f.then(&g).unwrap());
    }

    #[test]
    fn chain_endpoint_mismatch() {
        let f = Cobordism::identity(&ss(&["a"], &[]));
        let g = Cobordism::identity(&ss(&["b"], &[]));
        assert!(matches!(compose_chain(&[f, g]), Err(Error::Composition(_))));
        assert!(matches!(compose_chain(&[]), Err(Error::Composition(_))));
    }

    #[test]
    fn chain_of_one_and_of_identities() {
        let f = Cobordism::new(ss(&["a"], &["q"]), ss(&["b"], &["p"]), pairs(&[("a", "q"), ("p", "b")]))
            .unwrap();
        assert_eq!(compose_chain(std::slice::from_ref(&f)).unwrap(), f);
        let id = Cobordism::identity(f.src());
        assert_eq!(compose_chain(&[id.clone(), id.clone(), id.clone()]).unwrap(), id);
    }

    #[test]
    fn chain_uses_one_cancel() {
        let id = Cobordism::identity(&ss(&["a"], &["b"]));
        let before = subtraction::cancel_calls();
        compose_chain(&[id.clone(), id.clone(), id.clone(), id]).unwrap();
        assert_eq!(subtraction::cancel_calls() - before, 1);
    }

    #[test]
    fn negation() {
        let f = Cobordism::new(ss(&["a"], &[]), ss(&["b", "d"], &["c"]), pairs(&[("a", "b"), ("c", "d")]))
            .unwrap();
        let nf = f.negate();
        assert_eq!(nf.src(), &f.dst().negate());
        assert_eq!(nf.core().domain(), &atoms(["c", "a"]));
        assert_eq!(nf.negate(), f);
        let id = Cobordism::identity(&ss(&["a"], &["b"]));
        assert_eq!(id.negate(), Cobordism::identity(&ss(&["b"], &["a"])));
    }

    #[test]
    fn sums() {
        let f = Cobordism::new(ss(&["a"], &[]), ss(&["b"], &[]), pairs(&[("a", "b")])).unwrap();
        let g = Cobordism::new(ss(&["c"], &[]), ss(&["d"], &[]), pairs(&[("c", "d")])).unwrap();
        assert_eq!(f.sum(&Cobordism::empty()).unwrap(), f);
        assert_eq!(f.sum(&g).unwrap(), g.sum(&f).unwrap());
        assert!(matches!(f.sum(&f), Err(Error::SignedOverlap(_))));
    }

    #[test]
    fn creation_and_destruction() {
        let one = ss(&["a"], &[]);
        let c = create_set(&one).unwrap();
        let ra = Element::tagged("R", a("a"));
        assert!(c.src().is_empty());
        assert_eq!(c.dst(), &SignedSet::new(atoms(["a"]), [ra.clone()].into_iter().collect()).unwrap());
        assert_eq!(c.core(), &Matching::from_pairs([(ra, a("a"))]).unwrap());
        assert_eq!(destroy_set(&one).unwrap(), c.negate());

        let phi = Cobordism::new(ss(&["a"], &["q"]), ss(&["b"], &["p"]), pairs(&[("a", "q"), ("p", "b")]))
            .unwrap();
        let created = create_from(&phi).unwrap();
        assert_eq!(created.dst(), &ss(&["b", "q"], &["p", "a"]));
        assert_eq!(destroy_from(&phi).unwrap(), created.negate());
        assert_eq!(create_from(&phi.negate()).unwrap(), created);
    }

    #[test]
    fn matching_round_trip() {
        let m = Matching::from_pairs(pairs(&[("a", "b")])).unwrap();
        assert_eq!(Cobordism::from_matching(&m).to_matching().unwrap(), m);
        let id = Cobordism::identity(&ss(&["a", "b"], &[]));
        assert_eq!(id.to_matching().unwrap(), Matching::identity(&atoms(["a", "b"])));
        assert_eq!(
            Cobordism::identity(&ss(&["a"], &["b"])).to_matching(),
            Err(Error::UnsignedRequired(a("b")))
        );
    }

    #[test]
    fn json_layout() {
        let f = Cobordism::new(ss(&["a"], &[]), ss(&["b"], &[]), pairs(&[("a", "b")])).unwrap();
        assert_eq!(
            serde_json::to_string(&f.to_json()).unwrap(),
            r#"{"src":{"pos":["a"],"neg":[]},"dst":{"pos":["b"],"neg":[]},"core":{"domain":["a"],"codomain":["b"],"pairs":[["a","b"]]}}"#
        );
    }
}
