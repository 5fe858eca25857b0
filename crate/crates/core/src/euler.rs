//! Euler's identity (partitions into distinct parts ↔ partitions into odd
//! parts), derived one degree at a time by multiplying through by a
//! reciprocal instead of dividing.
//!
//! Write `F = ∏(1 + qⁱ)` (distinct parts), `G = ∏ 1/(1 − q²ⁱ⁻¹)` (odd parts),
//! `H = ∏(1 − qⁱ)` (distinct parts, sign `(−1)^#parts`) and `K = 1/H`
//! (all partitions). With `E = ∏(1 − q²ⁱ)` (distinct even parts, signed)
//! the degree-`n` chain is
//!
//! ```text
//! F  ==c1==>  F·H·K  ==c2a==>  E·K  ==c2b==>  G·H·K  ==c3==>  G
//! ```
//!
//! * `c1`, `c3`: `H·K = 1` via [`hk_toggle`] on the `(μ, ν)` factor;
//! * `c2a`: `F·H = E` via [`fh_toggle`], fixed points `λ = μ ↦ ρ = 2λ`;
//! * `c2b`: `G·H = E` via [`odd_toggle`] on `γ` and the odd parts of `μ`,
//!   fixed points `γ = ∅`, `μ` all even.
//!
//! One cancellation over the three interior carriers yields the matching
//! `F_n => G_n`.

use std::collections::BTreeMap;
use std::fmt;

use crate::elements::{Element, FiniteSet};
use crate::error::{Error, Result};
use crate::nset::Matching;
use crate::subtraction;
use crate::zset::{ChainSum, Cobordism, SignedSet};

/// Parts in weakly decreasing order, all positive.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Partition(Vec<u32>);

impl Partition {
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::Shape("partition parts must be positive".into()));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Shape("partition parts must be weakly decreasing".into()));
        }
        Ok(Partition(parts))
    }

    /// Sorts the parts first.
    pub fn from_parts(mut parts: Vec<u32>) -> Result<Self> {
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Self::new(parts)
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn weight(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn smallest(&self) -> Option<u32> {
        self.0.last().copied()
    }

    pub fn is_distinct(&self) -> bool {
        self.0.windows(2).all(|w| w[0] > w[1])
    }

    pub fn is_odd(&self) -> bool {
        self.0.iter().all(|p| p % 2 == 1)
    }

    pub fn is_of_kind(&self, kind: Kind) -> bool {
        match kind {
            Kind::Any => true,
            Kind::Distinct => self.is_distinct(),
            Kind::Odd => self.is_odd(),
            Kind::DistinctEven => self.is_distinct() && self.0.iter().all(|p| p % 2 == 0),
        }
    }

    fn with_part(&self, part: u32) -> Partition {
        let mut parts = self.0.clone();
        let at = parts.partition_point(|&p| p >= part);
        parts.insert(at, part);
        Partition(parts)
    }

    fn without_smallest(&self) -> Partition {
        let mut parts = self.0.clone();
        parts.pop();
        Partition(parts)
    }

    fn without_part(&self, part: u32) -> Partition {
        let mut parts = self.0.clone();
        let at = parts.iter().position(|&p| p == part).expect("part present");
        parts.remove(at);
        Partition(parts)
    }

    fn split_by_parity(&self) -> (Partition, Partition) {
        let (odd, even) = self.0.iter().partition(|&&p| p % 2 == 1);
        (Partition(odd), Partition(even))
    }

    fn merge(&self, other: &Partition) -> Partition {
        let mut parts = [self.0.as_slice(), other.0.as_slice()].concat();
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition(parts)
    }

    fn scaled(&self, factor: u32) -> Partition {
        Partition(self.0.iter().map(|p| p * factor).collect())
    }

    fn halved(&self) -> Partition {
        Partition(self.0.iter().map(|p| p / 2).collect())
    }

    /// The tuple of its parts, e.g. `(3,1)`.
    pub fn to_element(&self) -> Element {
        Element::Tuple(self.0.iter().map(|&p| Element::Int(p.into())).collect())
    }

    pub fn from_element(e: &Element) -> Result<Self> {
        let items = e
            .as_tuple()
            .ok_or_else(|| Error::Shape(format!("{e} is not a partition tuple")))?;
        let parts = items
            .iter()
            .map(|item| {
                item.as_int()
                    .and_then(|v| u32::try_from(v).ok())
                    .ok_or_else(|| Error::Shape(format!("{e} is not a partition tuple")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(parts)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_element())
    }
}

/// Which partitions to enumerate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Kind {
    Distinct,
    Odd,
    Any,
    DistinctEven,
}

/// All partitions of `n` of the given kind, in canonical element order.
pub fn partitions(kind: Kind, n: u32) -> Vec<Partition> {
    fn go(kind: Kind, remaining: u32, max: u32, prefix: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if remaining == 0 {
            out.push(Partition(prefix.clone()));
            return;
        }
        for part in (1..=remaining.min(max)).rev() {
            let allowed = match kind {
                Kind::Any | Kind::Distinct => true,
                Kind::Odd => part % 2 == 1,
                Kind::DistinctEven => part % 2 == 0,
            };
            if !allowed {
                continue;
            }
            let next_max = match kind {
                Kind::Distinct | Kind::DistinctEven => part - 1,
                _ => part,
            };
            prefix.push(part);
            go(kind, remaining - part, next_max, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(kind, n, n, &mut Vec::new(), &mut out);
    out.sort_by_key(Partition::to_element);
    out
}

/// [`partitions`] as a set of tuple elements.
pub fn enumerate(kind: Kind, n: u32) -> FiniteSet {
    partitions(kind, n).iter().map(Partition::to_element).collect()
}

fn require(p: &Partition, kind: Kind, role: &str) -> Result<()> {
    if p.is_of_kind(kind) {
        Ok(())
    } else {
        Err(Error::Shape(format!("{role} = {p} is not a {kind:?} partition")))
    }
}

/// Smallest-part toggle between a distinct partition and an arbitrary one.
/// With `a` the smallest part of `distinct` and `b` that of `free` (∞ when
/// empty): if `b < a` move `b` into `distinct`, otherwise move `a` out.
fn smallest_part_toggle(distinct: &Partition, free: &Partition) -> Result<(Partition, Partition)> {
    match (distinct.smallest(), free.smallest()) {
        (None, None) => Err(Error::ToggleUndefined),
        (a, Some(b)) if a.is_none_or(|a| b < a) => Ok((distinct.with_part(b), free.without_smallest())),
        (Some(a), _) => Ok((distinct.without_smallest(), free.with_part(a))),
        (None, Some(_)) => unreachable!(),
    }
}

/// The involution behind `H·K = 1` on pairs `(μ distinct, ν any)`; its only
/// fixed point `((), ())` is rejected.
pub fn hk_toggle(mu: &Partition, nu: &Partition) -> Result<(Partition, Partition)> {
    require(mu, Kind::Distinct, "mu")?;
    smallest_part_toggle(mu, nu)
}

/// The involution behind `F·H = E` on pairs of distinct partitions
/// `(S, T)` with `S ≠ T`: the smallest part in exactly one of them moves to
/// the other.
pub fn fh_toggle(s: &Partition, t: &Partition) -> Result<(Partition, Partition)> {
    require(s, Kind::Distinct, "S")?;
    require(t, Kind::Distinct, "T")?;
    let in_s = |p: u32| s.0.contains(&p);
    let in_t = |p: u32| t.0.contains(&p);
    let smallest = s
        .0
        .iter()
        .chain(t.0.iter())
        .copied()
        .filter(|&p| in_s(p) != in_t(p))
        .min()
        .ok_or(Error::ToggleUndefined)?;
    if in_s(smallest) {
        Ok((s.without_part(smallest), t.with_part(smallest)))
    } else {
        Ok((s.with_part(smallest), t.without_part(smallest)))
    }
}

/// The involution behind cancelling the odd factors of `H` against `G`, on
/// `(γ odd, T distinct odd)`: the smallest-part rule with `T` as the
/// distinct side.
pub fn odd_toggle(gamma: &Partition, t: &Partition) -> Result<(Partition, Partition)> {
    require(gamma, Kind::Odd, "gamma")?;
    require(t, Kind::Odd, "T")?;
    require(t, Kind::Distinct, "T")?;
    let (t, gamma) = smallest_part_toggle(t, gamma)?;
    Ok((gamma, t))
}

const FHK: &str = "FHK";
const EK: &str = "EK";
const GHK: &str = "GHK";

fn triple(tag: &str, a: &Partition, b: &Partition, c: &Partition) -> Element {
    Element::tagged(tag, Element::tuple([a.to_element(), b.to_element(), c.to_element()]))
}

fn pair(tag: &str, a: &Partition, b: &Partition) -> Element {
    Element::tagged(tag, Element::tuple([a.to_element(), b.to_element()]))
}

/// Partitions of every weight `0..=n`, indexed by weight.
struct Table(Vec<Vec<Partition>>);

impl Table {
    fn new(kind: Kind, n: u32) -> Self {
        Table((0..=n).map(|w| partitions(kind, w)).collect())
    }

    fn of(&self, weight: u32) -> &[Partition] {
        &self.0[weight as usize]
    }
}

/// Signed triples `(first, μ, ν)` of total weight `n`, sign `(−1)^#μ`.
type Triple = (Partition, Partition, Partition);

fn signed_triples(first: &Table, distinct: &Table, any: &Table, n: u32) -> (Vec<Triple>, Vec<Triple>) {
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    for w1 in 0..=n {
        for w2 in 0..=n - w1 {
            let w3 = n - w1 - w2;
            for l in first.of(w1) {
                for mu in distinct.of(w2) {
                    for nu in any.of(w3) {
                        let t = (l.clone(), mu.clone(), nu.clone());
                        if mu.len() % 2 == 0 { pos.push(t) } else { neg.push(t) }
                    }
                }
            }
        }
    }
    (pos, neg)
}

fn signed_set(tag: &str, pos: &[Triple], neg: &[Triple]) -> Result<SignedSet> {
    let enc = |ts: &[Triple]| ts.iter().map(|(a, b, c)| triple(tag, a, b, c)).collect();
    SignedSet::new(enc(pos), enc(neg))
}

/// Everything built for one degree.
#[derive(Debug, Clone)]
pub struct DegreeChain {
    pub n: u32,
    /// `[F_n, FHK_n, EK_n, GHK_n, G_n]`.
    pub nodes: Vec<SignedSet>,
    /// `[c1, c2a, c2b, c3]`.
    pub arrows: Vec<Cobordism>,
    pub result: Matching,
    /// Cancellations performed while composing `arrows`.
    pub cancel_passes: u64,
}

impl DegreeChain {
    pub fn interior_size(&self) -> usize {
        self.nodes[1..4].iter().map(|s| s.carrier().len()).sum()
    }

    pub fn chain_sum(&self) -> Result<ChainSum> {
        ChainSum::new(&self.arrows)
    }

    /// Number of escape orbits of each length (start and end included).
    pub fn trace_length_histogram(&self) -> Result<BTreeMap<usize, usize>> {
        let mut histogram = BTreeMap::new();
        for trace in self.chain_sum()?.traces()? {
            *histogram.entry(trace.len()).or_default() += 1;
        }
        Ok(histogram)
    }
}

/// Builds the five nodes and four arrows for degree `n` and composes them.
pub fn build_chain(n: u32) -> Result<DegreeChain> {
    let distinct = Table::new(Kind::Distinct, n);
    let odd = Table::new(Kind::Odd, n);
    let any = Table::new(Kind::Any, n);
    let distinct_even = Table::new(Kind::DistinctEven, n);
    let empty = Partition::empty();

    let f_n = SignedSet::unsigned(enumerate(Kind::Distinct, n));
    let g_n = SignedSet::unsigned(enumerate(Kind::Odd, n));

    let (fhk_pos, fhk_neg) = signed_triples(&distinct, &distinct, &any, n);
    let (ghk_pos, ghk_neg) = signed_triples(&odd, &distinct, &any, n);
    let fhk = signed_set(FHK, &fhk_pos, &fhk_neg)?;
    let ghk = signed_set(GHK, &ghk_pos, &ghk_neg)?;

    let mut ek_pos = Vec::new();
    let mut ek_neg = Vec::new();
    for w in 0..=n {
        for rho in distinct_even.of(w) {
            for nu in any.of(n - w) {
                let bucket = if rho.len() % 2 == 0 { &mut ek_pos } else { &mut ek_neg };
                bucket.push((rho.clone(), nu.clone()));
            }
        }
    }
    let ek = SignedSet::new(
        ek_pos.iter().map(|(r, v)| pair(EK, r, v)).collect(),
        ek_neg.iter().map(|(r, v)| pair(EK, r, v)).collect(),
    )?;

    // c1: F => FHK. λ ↦ (λ,(),()); negative triples toggle (μ,ν).
    let mut c1 = Vec::new();
    for l in f_n.pos() {
        let l = Partition::from_element(l)?;
        c1.push((l.to_element(), triple(FHK, &l, &empty, &empty)));
    }
    for (l, mu, nu) in &fhk_neg {
        let (mu2, nu2) = hk_toggle(mu, nu)?;
        c1.push((triple(FHK, l, mu, nu), triple(FHK, l, &mu2, &nu2)));
    }
    let c1 = Cobordism::new(f_n.clone(), fhk.clone(), c1)?;

    // c2a: FHK => EK. Positive triples with λ ≠ μ toggle to negative ones,
    // λ = μ goes to (2λ, ν); negative EK pairs return as (ρ/2, ρ/2, ν).
    let mut c2a = Vec::new();
    for (l, mu, nu) in &fhk_pos {
        let target = if l == mu {
            pair(EK, &l.scaled(2), nu)
        } else {
            let (l2, mu2) = fh_toggle(l, mu)?;
            triple(FHK, &l2, &mu2, nu)
        };
        c2a.push((triple(FHK, l, mu, nu), target));
    }
    for (rho, nu) in &ek_neg {
        let half = rho.halved();
        c2a.push((pair(EK, rho, nu), triple(FHK, &half, &half, nu)));
    }
    let c2a = Cobordism::new(fhk.clone(), ek.clone(), c2a)?;

    // c2b: EK => GHK. Positive pairs (ρ, ν) ↦ ((), ρ, ν); negative triples
    // either toggle (γ, odd part of μ) or, when both are empty, return to EK.
    let mut c2b = Vec::new();
    for (rho, nu) in &ek_pos {
        c2b.push((pair(EK, rho, nu), triple(GHK, &empty, rho, nu)));
    }
    for (gamma, mu, nu) in &ghk_neg {
        let (mu_odd, mu_even) = mu.split_by_parity();
        let target = if gamma.is_empty() && mu_odd.is_empty() {
            pair(EK, &mu_even, nu)
        } else {
            let (gamma2, odd2) = odd_toggle(gamma, &mu_odd)?;
            triple(GHK, &gamma2, &odd2.merge(&mu_even), nu)
        };
        c2b.push((triple(GHK, gamma, mu, nu), target));
    }
    let c2b = Cobordism::new(ek.clone(), ghk.clone(), c2b)?;

    // c3: GHK => G. (γ,(),()) ↦ γ; other positive triples toggle (μ,ν).
    let mut c3 = Vec::new();
    for (gamma, mu, nu) in &ghk_pos {
        let target = if mu.is_empty() && nu.is_empty() {
            gamma.to_element()
        } else {
            let (mu2, nu2) = hk_toggle(mu, nu)?;
            triple(GHK, gamma, &mu2, &nu2)
        };
        c3.push((triple(GHK, gamma, mu, nu), target));
    }
    let c3 = Cobordism::new(ghk.clone(), g_n.clone(), c3)?;

    let arrows = vec![c1, c2a, c2b, c3];
    let before = subtraction::cancel_calls();
    let composite = crate::zset::compose_chain(&arrows)?;
    let cancel_passes = subtraction::cancel_calls() - before;
    let result = composite.to_matching()?;
    Ok(DegreeChain {
        n,
        nodes: vec![f_n, fhk, ek, ghk, g_n],
        arrows,
        result,
        cancel_passes,
    })
}

/// The derived matching from distinct-part to odd-part partitions of `n`.
pub fn euler_matching(n: u32) -> Result<Matching> {
    Ok(build_chain(n)?.result)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(parts: &[u32]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn enumeration_examples() {
        assert_eq!(enumerate(Kind::Distinct, 0).encode(), vec!["()"]);
        assert_eq!(enumerate(Kind::Distinct, 6).len(), 4);
        assert_eq!(enumerate(Kind::Odd, 6).len(), 4);
        assert_eq!(enumerate(Kind::Any, 5).len(), 7);
        assert_eq!(enumerate(Kind::DistinctEven, 6).encode(), vec!["(4,2)", "(6)"]);
    }

    #[test]
    fn partition_validation() {
        assert!(Partition::new(vec![1, 2]).is_err());
        assert!(Partition::new(vec![2, 0]).is_err());
        assert_eq!(Partition::from_parts(vec![1, 3, 2]).unwrap(), p(&[3, 2, 1]));
        let e = p(&[3, 1]).to_element();
        assert_eq!(e.encode(), "(3,1)");
        assert_eq!(Partition::from_element(&e).unwrap(), p(&[3, 1]));
    }

    #[test]
    fn hk_toggle_examples() {
        assert_eq!(hk_toggle(&p(&[]), &p(&[1])).unwrap(), (p(&[1]), p(&[])));
        assert_eq!(hk_toggle(&p(&[1]), &p(&[])).unwrap(), (p(&[]), p(&[1])));
        assert_eq!(hk_toggle(&p(&[]), &p(&[])), Err(Error::ToggleUndefined));
        // equal smallest parts: the distinct side gives its part away
        assert_eq!(hk_toggle(&p(&[2]), &p(&[2])).unwrap(), (p(&[]), p(&[2, 2])));
        assert!(hk_toggle(&p(&[1, 1]), &p(&[])).is_err());
    }

    #[test]
    fn fh_toggle_examples() {
        assert_eq!(fh_toggle(&p(&[1]), &p(&[])).unwrap(), (p(&[]), p(&[1])));
        assert_eq!(fh_toggle(&p(&[2, 1]), &p(&[2])).unwrap(), (p(&[2]), p(&[2, 1])));
        assert_eq!(fh_toggle(&p(&[3, 1]), &p(&[3, 1])), Err(Error::ToggleUndefined));
    }

    #[test]
    fn odd_toggle_examples() {
        assert_eq!(odd_toggle(&p(&[1]), &p(&[])).unwrap(), (p(&[]), p(&[1])));
        assert_eq!(odd_toggle(&p(&[3, 1]), &p(&[1])).unwrap(), (p(&[3, 1, 1]), p(&[])));
        assert_eq!(odd_toggle(&p(&[]), &p(&[])), Err(Error::ToggleUndefined));
        assert!(odd_toggle(&p(&[2]), &p(&[])).is_err());
    }

    fn assert_fixed_point_free_involution(
        domain: &[(Partition, Partition)],
        toggle: impl Fn(&Partition, &Partition) -> Result<(Partition, Partition)>,
        signed: impl Fn(&(Partition, Partition)) -> usize,
    ) {
        for x in domain {
            let y = toggle(&x.0, &x.1).unwrap();
            assert_ne!(&y, x, "fixed point at {x:?}");
            assert_eq!(x.0.weight() + x.1.weight(), y.0.weight() + y.1.weight());
            assert_ne!(signed(x) % 2, signed(&y) % 2, "sign kept at {x:?}");
            assert!(domain.contains(&y), "left the domain at {x:?}");
            assert_eq!(&toggle(&y.0, &y.1).unwrap(), x, "not an involution at {x:?}");
        }
    }

    fn pairs_of(k1: Kind, k2: Kind, max: u32, keep: impl Fn(&Partition, &Partition) -> bool) -> Vec<(Partition, Partition)> {
        let mut out = Vec::new();
        for n in 0..=max {
            for w in 0..=n {
                for a in partitions(k1, w) {
                    for b in partitions(k2, n - w) {
                        if keep(&a, &b) {
                            out.push((a.clone(), b));
                        }
                    }
                }
            }
        }
        out
    }

    #[test]
    fn toggles_are_fixed_point_free_involutions_up_to_ten() {
        let hk = pairs_of(Kind::Distinct, Kind::Any, 10, |a, b| !(a.is_empty() && b.is_empty()));
        assert_fixed_point_free_involution(&hk, hk_toggle, |(mu, _)| mu.len());

        let fh = pairs_of(Kind::Distinct, Kind::Distinct, 10, |a, b| a != b);
        assert_fixed_point_free_involution(&fh, fh_toggle, |(_, t)| t.len());

        let odd = pairs_of(Kind::Odd, Kind::Distinct, 10, |a, b| b.is_odd() && !(a.is_empty() && b.is_empty()));
        assert_fixed_point_free_involution(&odd, odd_toggle, |(_, t)| t.len());
    }

    #[test]
    fn degree_zero_and_one() {
        let zero = euler_matching(0).unwrap();
        assert_eq!(zero.to_string(), "[() -> ()]");
        let one = euler_matching(1).unwrap();
        assert_eq!(one.to_string(), "[(1) -> (1)]");
    }

    #[test]
    fn degree_six() {
        let chain = build_chain(6).unwrap();
        assert_eq!(chain.result.len(), 4);
        assert_eq!(chain.result.domain(), &enumerate(Kind::Distinct, 6));
        assert_eq!(chain.result.codomain(), &enumerate(Kind::Odd, 6));
        assert_eq!(chain.cancel_passes, 1);
        assert!(chain.nodes[0].is_unsigned() && chain.nodes[4].is_unsigned());
        let bound = 2 + chain.interior_size();
        let histogram = chain.trace_length_histogram().unwrap();
        assert!(histogram.keys().all(|&len| len <= bound));
        assert_eq!(histogram.values().sum::<usize>(), 4);
    }
}
