//! Subtraction of cobordisms, the involution principle in its signed and
//! unsigned (Garsia-Milne) forms, involutions built from matchings, and
//! Koenig's construction for Cantor-Schroeder-Bernstein.

use std::collections::BTreeMap;

use crate::elements::{Element, FiniteSet};
use crate::error::{Error, Result};
use crate::nset::Matching;
use crate::zset::{compose_chain, create_from, destroy_from, relabel, Cobordism, SignedSet};

/// From `f: A + C => B + D` and `g: D => C`, the cobordism `A => B` given by
/// the chain
///
/// ```text
/// A  =(id(A) + create(C))=>  A + C − C'  =(f − g')=>  B + D − D'  =(id(B) − create(D))=>  B
/// ```
///
/// where `C'`, `D'` and `g': D' => C'` are relabeled copies so that each
/// node is an honest disjoint union.
pub fn subtract_cobordism(
    f: &Cobordism,
    c: &SignedSet,
    d: &SignedSet,
    g: &Cobordism,
) -> Result<Cobordism> {
    let a = f.src().setminus(c)?;
    let b = f.dst().setminus(d)?;
    if g.src() != d || g.dst() != c {
        return Err(Error::Shape(format!(
            "g must run {d} => {c}, got {} => {}",
            g.src(),
            g.dst()
        )));
    }
    let tag = FiniteSet::fresh_tag("R", [&f.src().carrier(), &f.dst().carrier()]);
    let fresh = |e: &Element| Element::Tagged(tag.clone(), Box::new(e.clone()));

    let (_, c_to_copy) = relabel(c, &tag)?;
    let (_, d_to_copy) = relabel(d, &tag)?;
    let g_copy = g.map_elements(fresh)?;

    // 0 => C − C'
    let create_c = create_from(&c_to_copy.invert())?;
    // D − D' => 0
    let destroy_d = create_from(&d_to_copy)?.negate();

    let first = Cobordism::identity(&a).sum(&create_c)?;
    let middle = f.diff(&g_copy)?;
    let last = Cobordism::identity(&b).sum(&destroy_d)?;
    compose_chain(&[first, middle, last])
}

/// Data for the involution principle: signed sets `X`, `Y` with disjoint
/// carriers, `A, B ⊂ X`, `φ: Y => X ∖ A` and `ψ: X ∖ B => Y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GmInstance {
    x: SignedSet,
    y: SignedSet,
    a: SignedSet,
    b: SignedSet,
    phi: Cobordism,
    psi: Cobordism,
}

impl GmInstance {
    pub fn new(
        x: SignedSet,
        y: SignedSet,
        a: SignedSet,
        b: SignedSet,
        phi: Cobordism,
        psi: Cobordism,
    ) -> Result<Self> {
        if let Some(w) = x.carrier().common_element(&y.carrier()) {
            return Err(Error::Overlap(w.clone()));
        }
        let x_minus_a = x.setminus(&a)?;
        let x_minus_b = x.setminus(&b)?;
        if phi.src() != &y || phi.dst() != &x_minus_a {
            return Err(Error::Shape(format!("phi must run {y} => {x_minus_a}")));
        }
        if psi.src() != &x_minus_b || psi.dst() != &y {
            return Err(Error::Shape(format!("psi must run {x_minus_b} => {y}")));
        }
        Ok(GmInstance { x, y, a, b, phi, psi })
    }

    pub fn from_unsigned(gm: &GarsiaMilne) -> Self {
        GmInstance {
            x: SignedSet::unsigned(gm.x.clone()),
            y: SignedSet::unsigned(gm.y.clone()),
            a: SignedSet::unsigned(gm.a.clone()),
            b: SignedSet::unsigned(gm.b.clone()),
            phi: Cobordism::from_matching(&gm.phi),
            psi: Cobordism::from_matching(&gm.psi),
        }
    }

    /// The unsigned view, when `X` and `Y` are unsigned.
    pub fn to_unsigned(&self) -> Option<GarsiaMilne> {
        if !(self.x.is_unsigned() && self.y.is_unsigned()) {
            return None;
        }
        Some(GarsiaMilne {
            x: self.x.pos().clone(),
            y: self.y.pos().clone(),
            a: self.a.pos().clone(),
            b: self.b.pos().clone(),
            phi: self.phi.core().clone(),
            psi: self.psi.core().clone(),
        })
    }

    pub fn x(&self) -> &SignedSet {
        &self.x
    }

    pub fn y(&self) -> &SignedSet {
        &self.y
    }

    pub fn a(&self) -> &SignedSet {
        &self.a
    }

    pub fn b(&self) -> &SignedSet {
        &self.b
    }

    pub fn phi(&self) -> &Cobordism {
        &self.phi
    }

    pub fn psi(&self) -> &Cobordism {
        &self.psi
    }

    /// The two arrows `A => X − Y => B` whose composite is the principle.
    pub fn arrows(&self) -> Result<[Cobordism; 2]> {
        let first = Cobordism::identity(&self.a).sum(&create_from(&self.phi)?)?;
        let second = Cobordism::identity(&self.b).sum(&destroy_from(&self.psi)?)?;
        Ok([first, second])
    }
}

/// `(id(A) + create(φ)) ◁ (id(B) − create(ψ)): A => B`.
pub fn involution_principle(inst: &GmInstance) -> Result<Cobordism> {
    compose_chain(&inst.arrows()?)
}

/// The unsigned case: finite sets `X ∩ Y = ∅`, `A, B ⊆ X`,
/// `φ: Y => X ∖ A`, `ψ: X ∖ B => Y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GarsiaMilne {
    pub x: FiniteSet,
    pub y: FiniteSet,
    pub a: FiniteSet,
    pub b: FiniteSet,
    pub phi: Matching,
    pub psi: Matching,
}

impl GarsiaMilne {
    pub fn new(
        x: FiniteSet,
        y: FiniteSet,
        a: FiniteSet,
        b: FiniteSet,
        phi: Matching,
        psi: Matching,
    ) -> Result<Self> {
        let gm = GarsiaMilne { x, y, a, b, phi, psi };
        gm.validate()?;
        Ok(gm)
    }

    fn validate(&self) -> Result<()> {
        if let Some(w) = self.x.common_element(&self.y) {
            return Err(Error::Overlap(w.clone()));
        }
        for sub in [&self.a, &self.b] {
            if let Some(w) = sub.difference(&self.x).first() {
                return Err(Error::NotSubset(w.clone()));
            }
        }
        if self.phi.domain() != &self.y || self.phi.codomain() != &self.x.difference(&self.a) {
            return Err(Error::Shape("phi must run Y => X ∖ A".into()));
        }
        if self.psi.domain() != &self.x.difference(&self.b) || self.psi.codomain() != &self.y {
            return Err(Error::Shape("psi must run X ∖ B => Y".into()));
        }
        Ok(())
    }
}

/// `h(a)`: starting from `a`, replace `x` by `φ(ψ(x))` until `x ∈ B`.
/// Points of `A ∩ B` stay put.
pub fn garsia_milne(gm: &GarsiaMilne) -> Result<Matching> {
    gm.validate()?;
    let guard = gm.x.len() + gm.y.len() + 1;
    let mut pairs = Vec::with_capacity(gm.a.len());
    for a in &gm.a {
        let mut x = a;
        let mut steps = 0;
        while !gm.b.contains(x) {
            if steps == guard {
                return Err(Error::Invariant(format!("no exit into B from {a} after {guard} steps")));
            }
            x = gm.phi.apply(gm.psi.apply(x)?)?;
            steps += 1;
        }
        pairs.push((a.clone(), x.clone()));
    }
    Matching::new(gm.a.clone(), gm.b.clone(), pairs)
}

/// `Φ = id(A) + φ + φ⁻¹` on `X ∪ Y`, an involution whose fixed points are
/// exactly `A`.
pub fn manufacture_involution(
    x: &FiniteSet,
    y: &FiniteSet,
    a: &FiniteSet,
    phi: &Matching,
) -> Result<Matching> {
    if let Some(w) = x.common_element(y) {
        return Err(Error::Overlap(w.clone()));
    }
    if let Some(w) = a.difference(x).first() {
        return Err(Error::NotSubset(w.clone()));
    }
    if phi.domain() != y || phi.codomain() != &x.difference(a) {
        return Err(Error::Shape("phi must run Y => X ∖ A".into()));
    }
    Matching::identity(a)
        .disjoint_sum(&phi.disjoint_sum(&phi.invert())?)
        .inspect(|sum| debug_assert!(sum.is_involution()))
}

/// `h: Fix(Φ) => Fix(Ψ)` by iterating `x ↦ Φ(Ψ(x))` until `Ψ(x) = x`.
/// Swapping the arguments yields the inverse matching.
pub fn gm_from_involutions(phi: &Matching, psi: &Matching) -> Result<Matching> {
    check_involution(phi)?;
    check_involution(psi)?;
    if phi.domain() != psi.domain() {
        return Err(Error::Shape("involutions must act on the same set".into()));
    }
    let guard = phi.len() + 1;
    let source = phi.fixed_points();
    let target = psi.fixed_points();
    let mut pairs = Vec::with_capacity(source.len());
    for start in &source {
        let mut x = start;
        let mut steps = 0;
        loop {
            let image = psi.apply(x)?;
            if image == x {
                break;
            }
            if steps == guard {
                return Err(Error::Invariant(format!(
                    "no fixed point of psi reached from {start} after {guard} steps"
                )));
            }
            x = phi.apply(image)?;
            steps += 1;
        }
        pairs.push((start.clone(), x.clone()));
    }
    Matching::new(source, target, pairs)
        .map_err(|e| Error::Invariant(format!("iteration did not give a bijection: {e}")))
}

fn check_involution(m: &Matching) -> Result<()> {
    if m.domain() != m.codomain() {
        return Err(Error::Shape("an involution maps a set to itself".into()));
    }
    match m.pairs().find(|(x, y)| m.get(y) != Some(*x)) {
        Some((x, _)) => Err(Error::NotInvolution(x.clone())),
        None => Ok(()),
    }
}

/// A total injective map `domain -> codomain`; the image may be proper.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Injection {
    domain: FiniteSet,
    codomain: FiniteSet,
    forward: BTreeMap<Element, Element>,
    backward: BTreeMap<Element, Element>,
}

impl Injection {
    pub fn new(
        domain: FiniteSet,
        codomain: FiniteSet,
        pairs: impl IntoIterator<Item = (Element, Element)>,
    ) -> Result<Self> {
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
                return Err(Error::NotInjective(y));
            }
        }
        if let Some(x) = domain.iter().find(|x| !forward.contains_key(*x)) {
            return Err(Error::Unmapped(x.clone()));
        }
        Ok(Injection {
            domain,
            codomain,
            forward,
            backward,
        })
    }

    pub fn domain(&self) -> &FiniteSet {
        &self.domain
    }

    pub fn codomain(&self) -> &FiniteSet {
        &self.codomain
    }

    pub fn apply(&self, x: &Element) -> Result<&Element> {
        self.forward.get(x).ok_or_else(|| Error::Lookup(x.clone()))
    }

    pub fn preimage(&self, y: &Element) -> Option<&Element> {
        self.backward.get(y)
    }

    pub fn pairs(&self) -> impl Iterator<Item = (&Element, &Element)> {
        self.forward.iter()
    }
}

/// Where the two-sided sequence `… x₁ y₁ x₂ y₂ …` through a point begins.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ChainOrigin {
    /// Begins at this element of `X`, which has no preimage under `g`.
    StartsInX(Element),
    /// Begins at this element of `Y`, which has no preimage under `f`.
    StartsInY(Element),
    /// Can be continued to the left forever; in the finite case, a cycle.
    Periodic,
}

/// Traces the sequence through `start` leftward, via `g⁻¹` from `X` and
/// `f⁻¹` from `Y`, until it stops or returns to `start`.
pub fn classify_chain(f: &Injection, g: &Injection, start: &Element) -> Result<ChainOrigin> {
    let mut in_x = if f.domain.contains(start) {
        true
    } else if g.domain.contains(start) {
        false
    } else {
        return Err(Error::Lookup(start.clone()));
    };
    let guard = f.domain.len() + g.domain.len() + 1;
    let mut current = start;
    for _ in 0..guard {
        let previous = if in_x { g.preimage(current) } else { f.preimage(current) };
        match previous {
            None if in_x => return Ok(ChainOrigin::StartsInX(current.clone())),
            None => return Ok(ChainOrigin::StartsInY(current.clone())),
            Some(p) if p == start => return Ok(ChainOrigin::Periodic),
            Some(p) => {
                current = p;
                in_x = !in_x;
            }
        }
    }
    Err(Error::Invariant(format!("backward trace from {start} did not terminate")))
}

/// The matching `X => Y` of Koenig's proof: `f(x)` when the chain through `x`
/// starts in `X` or is periodic, `g⁻¹(x)` when it starts in `Y`.
pub fn koenig_csb(f: &Injection, g: &Injection) -> Result<Matching> {
    if f.domain != g.codomain || g.domain != f.codomain {
        return Err(Error::Shape("need f: X -> Y and g: Y -> X".into()));
    }
    if let Some(w) = f.domain.common_element(&g.domain) {
        return Err(Error::Overlap(w.clone()));
    }
    let pairs = f
        .domain
        .iter()
        .map(|x| {
            let image = match classify_chain(f, g, x)? {
                ChainOrigin::StartsInY(_) => g.preimage(x).expect("x has a g-preimage").clone(),
                _ => f.apply(x)?.clone(),
            };
            Ok((x.clone(), image))
        })
        .collect::<Result<Vec<_>>>()?;
    Matching::new(f.domain.clone(), f.codomain.clone(), pairs)
}
