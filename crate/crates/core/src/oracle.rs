//! Brute-force checkers and seeded instance generators.
//!
//! Nothing here calls the constructions it checks: verifiers read the raw
//! maps, [`brute_force_gm`] works on an undirected graph, and
//! [`count_partitions`] is a plain recursion.

use std::collections::{BTreeMap, BTreeSet};

use petgraph::unionfind::UnionFind;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::elements::{Element, FiniteSet};
use crate::error::Result;
use crate::euler::Kind;
use crate::nset::Matching;
use crate::principles::{GarsiaMilne, GmInstance, Injection};
use crate::zset::{Cobordism, SignedSet};

/// Outcome of a verifier; `passed` holds exactly when `failures` is empty.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub subject: String,
    pub passed: bool,
    /// `(check, witness)` pairs.
    pub failures: Vec<(String, String)>,
}

impl VerificationReport {
    fn new(subject: impl Into<String>) -> Self {
        VerificationReport {
            subject: subject.into(),
            passed: true,
            failures: Vec::new(),
        }
    }

    fn fail(&mut self, check: &str, witness: impl ToString) {
        self.passed = false;
        self.failures.push((check.to_string(), witness.to_string()));
    }

    fn absorb(&mut self, prefix: &str, other: VerificationReport) {
        for (check, witness) in other.failures {
            self.fail(&format!("{prefix}.{check}"), witness);
        }
    }
}

/// Checks a pair list against intended endpoints: every source used once,
/// every target hit once, nothing outside the endpoints.
pub fn verify_pairs(
    subject: &str,
    domain: &FiniteSet,
    codomain: &FiniteSet,
    pairs: &[(Element, Element)],
) -> VerificationReport {
    let mut report = VerificationReport::new(subject);
    let mut seen_sources = BTreeSet::new();
    let mut seen_targets = BTreeSet::new();
    for (x, y) in pairs {
        if !domain.contains(x) {
            report.fail("source-in-domain", x);
        }
        if !codomain.contains(y) {
            report.fail("target-in-codomain", y);
        }
        if !seen_sources.insert(x) {
            report.fail("function", x);
        }
        if !seen_targets.insert(y) {
            report.fail("injective", y);
        }
    }
    for x in domain {
        if !seen_sources.contains(x) {
            report.fail("total", x);
        }
    }
    for y in codomain {
        if !seen_targets.contains(y) {
            report.fail("surjective", y);
        }
    }
    report
}

/// Totality, injectivity, surjectivity and agreement of the stored inverse.
pub fn verify_matching(m: &Matching) -> VerificationReport {
    let pairs: Vec<_> = m.forward_map().iter().map(|(x, y)| (x.clone(), y.clone())).collect();
    let mut report = verify_pairs("matching", m.domain(), m.codomain(), &pairs);
    for (x, y) in m.forward_map() {
        if m.backward_map().get(y) != Some(x) {
            report.fail("inverse-consistent", x);
        }
    }
    for (y, x) in m.backward_map() {
        if m.forward_map().get(x) != Some(y) {
            report.fail("inverse-consistent", y);
        }
    }
    report
}

fn verify_signed_set(s: &SignedSet) -> Option<Element> {
    s.pos().iter().find(|e| s.neg().contains(e)).cloned()
}

/// Disjoint halves at both ends, core running `A⁺ ∪ B⁻ => A⁻ ∪ B⁺` with no
/// overlap on either side, and the core itself a matching.
pub fn verify_cobordism(c: &Cobordism) -> VerificationReport {
    let mut report = VerificationReport::new("cobordism");
    for (name, end) in [("src", c.src()), ("dst", c.dst())] {
        if let Some(w) = verify_signed_set(end) {
            report.fail(&format!("{name}.halves-disjoint"), w);
        }
    }
    let (src, dst) = (c.src(), c.dst());
    for e in src.pos() {
        if dst.neg().contains(e) {
            report.fail("domain-disjoint", e);
        }
    }
    for e in src.neg() {
        if dst.pos().contains(e) {
            report.fail("codomain-disjoint", e);
        }
    }
    let domain: FiniteSet = src.pos().iter().chain(dst.neg()).cloned().collect();
    let codomain: FiniteSet = src.neg().iter().chain(dst.pos()).cloned().collect();
    if c.core().domain() != &domain {
        report.fail("core-domain", c.core().domain());
    }
    if c.core().codomain() != &codomain {
        report.fail("core-codomain", c.core().codomain());
    }
    report.absorb("core", verify_matching(c.core()));
    report
}

/// The Garsia-Milne bijection read off the graph on `X ∪ Y` with edges
/// `{x, ψ(x)}` and `{y, φ(y)}`. Every vertex has degree at most two and only
/// points of `A △ B` have degree one, so each component containing a point
/// of `A` is a path ending in `B` (or an isolated point of `A ∩ B`).
pub fn brute_force_gm(gm: &GarsiaMilne) -> Result<Matching> {
    Ok(gm_components(gm)?.0)
}

/// Sizes of the components used by [`brute_force_gm`], keyed by the
/// point of `A` they contain.
pub fn gm_path_sizes(gm: &GarsiaMilne) -> Result<BTreeMap<Element, usize>> {
    Ok(gm_components(gm)?.1)
}

fn gm_components(gm: &GarsiaMilne) -> Result<(Matching, BTreeMap<Element, usize>)> {
    let vertices: Vec<&Element> = gm.x.iter().chain(gm.y.iter()).collect();
    let index: BTreeMap<&Element, usize> = vertices.iter().enumerate().map(|(i, v)| (*v, i)).collect();
    let mut uf = UnionFind::<usize>::new(vertices.len());
    for (x, y) in gm.psi.forward_map().iter().chain(gm.phi.forward_map()) {
        uf.union(index[x], index[y]);
    }
    let labels = uf.into_labeling();
    let mut size: BTreeMap<usize, usize> = BTreeMap::new();
    for &label in &labels {
        *size.entry(label).or_default() += 1;
    }
    let b_of: BTreeMap<usize, &Element> = gm.b.iter().map(|b| (labels[index[b]], b)).collect();
    let mut pairs = Vec::new();
    let mut sizes = BTreeMap::new();
    for a in &gm.a {
        let label = labels[index[a]];
        if let Some(b) = b_of.get(&label) {
            pairs.push((a.clone(), (*b).clone()));
        }
        sizes.insert(a.clone(), size[&label]);
    }
    Ok((Matching::new(gm.a.clone(), gm.b.clone(), pairs)?, sizes))
}

/// Number of partitions of `n` of the given kind.
pub fn count_partitions(kind: Kind, n: u32) -> u64 {
    fn count(kind: Kind, n: u32, max: u32) -> u64 {
        if n == 0 {
            return 1;
        }
        (1..=n.min(max))
            .filter(|p| match kind {
                Kind::Any | Kind::Distinct => true,
                Kind::Odd => p % 2 == 1,
                Kind::DistinctEven => p % 2 == 0,
            })
            .map(|p| {
                let next = if matches!(kind, Kind::Distinct | Kind::DistinctEven) { p - 1 } else { p };
                count(kind, n - p, next)
            })
            .sum()
    }
    count(kind, n, n)
}

/// Deterministic generator seeded by a `u64`.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn named(prefix: &str, range: std::ops::Range<usize>) -> Vec<Element> {
    range.map(|i| Element::atom(format!("{prefix}{i}"))).collect()
}

fn subset(rng: &mut impl Rng, pool: &[Element], size: usize) -> FiniteSet {
    pool.choose_multiple(rng, size).cloned().collect()
}

/// A uniformly random bijection between equal-size sets.
pub fn random_bijection(rng: &mut impl Rng, domain: &FiniteSet, codomain: &FiniteSet) -> Matching {
    let mut targets: Vec<Element> = codomain.iter().cloned().collect();
    targets.shuffle(rng);
    Matching::new(domain.clone(), codomain.clone(), domain.iter().cloned().zip(targets))
        .expect("equal sizes")
}

/// `f: A + C => B + C` with `|A|, |C| ≤ max`; `B` reuses the names of `A`
/// half the time.
pub fn random_cancel_instance(seed: u64, max: usize) -> (Matching, FiniteSet) {
    let mut r = rng(seed);
    let k = r.gen_range(0..=max);
    let j = r.gen_range(0..=max);
    let a: FiniteSet = named("a", 0..k).into_iter().collect();
    let b: FiniteSet = if r.gen_bool(0.5) { a.clone() } else { named("b", 0..k).into_iter().collect() };
    let c: FiniteSet = named("c", 0..j).into_iter().collect();
    let f = random_bijection(&mut r, &a.union(&c), &b.union(&c));
    (f, c)
}

/// `f: A + (C ∪ D) => B + (C ∪ D)` with `C`, `D` drawn from one pool so
/// they usually overlap.
pub fn random_double_cancel_instance(seed: u64, max: usize) -> (Matching, FiniteSet, FiniteSet) {
    let mut r = rng(seed);
    let k = r.gen_range(0..=max);
    let pool = named("z", 0..r.gen_range(0..=max));
    let (nc, nd) = (r.gen_range(0..=pool.len()), r.gen_range(0..=pool.len()));
    let c = subset(&mut r, &pool, nc);
    let d = subset(&mut r, &pool, nd);
    let a: FiniteSet = named("a", 0..k).into_iter().collect();
    let b: FiniteSet = named("b", 0..k).into_iter().collect();
    let cd = c.union(&d);
    let f = random_bijection(&mut r, &a.union(&cd), &b.union(&cd));
    (f, c, d)
}

fn random_cobordism(rng: &mut impl Rng, src: &SignedSet, dst: &SignedSet) -> Cobordism {
    let domain = src.pos().union(dst.neg());
    let codomain = src.neg().union(dst.pos());
    let core = random_bijection(rng, &domain, &codomain);
    Cobordism::from_core(src.clone(), dst.clone(), core).expect("generated shapes are valid")
}

/// A composable chain of `1..=max_len` random cobordisms whose nodes have
/// carriers of at most `max_carrier` elements. Positive halves come from
/// the atoms `p*` and negative halves from `n*`, so no node's positive half
/// meets another's negative half. `signed = false` keeps every node
/// unsigned.
pub fn random_chain(seed: u64, max_len: usize, max_carrier: usize, signed: bool) -> Vec<Cobordism> {
    let mut r = rng(seed);
    let len = r.gen_range(1..=max_len);
    chain_of_len(&mut r, len, max_carrier, signed)
}

/// As [`random_chain`] with exactly `len` arrows.
pub fn random_chain_of_len(seed: u64, len: usize, max_carrier: usize, signed: bool) -> Vec<Cobordism> {
    chain_of_len(&mut rng(seed), len, max_carrier, signed)
}

fn chain_of_len(r: &mut ChaCha8Rng, len: usize, max_carrier: usize, signed: bool) -> Vec<Cobordism> {
    let pos_pool = named("p", 0..max_carrier);
    let neg_pool = named("n", 0..max_carrier);
    let net = if signed { r.gen_range(-(max_carrier as i64)..=max_carrier as i64) } else { r.gen_range(0..=max_carrier as i64) };
    let mut nodes = Vec::with_capacity(len + 1);
    for _ in 0..=len {
        // |pos| - |neg| = net and |pos| + |neg| <= max_carrier
        let spare = (max_carrier as i64 - net.abs()) / 2;
        let extra = if signed { r.gen_range(0..=spare) } else { 0 };
        let (p, n) = if net >= 0 { (net + extra, extra) } else { (extra, extra - net) };
        nodes.push(
            SignedSet::new(subset(r, &pos_pool, p as usize), subset(r, &neg_pool, n as usize))
                .expect("pools are disjoint"),
        );
    }
    nodes.windows(2).map(|w| random_cobordism(r, &w[0], &w[1])).collect()
}

/// An unsigned Garsia-Milne instance with `|X| ≤ max_x`.
pub fn random_gm(seed: u64, max_x: usize) -> GarsiaMilne {
    let mut r = rng(seed);
    let n = r.gen_range(0..=max_x);
    let k = r.gen_range(0..=n);
    let pool = named("x", 0..n);
    let x: FiniteSet = pool.iter().cloned().collect();
    let y: FiniteSet = named("y", 0..n - k).into_iter().collect();
    let a = subset(&mut r, &pool, k);
    let b = subset(&mut r, &pool, k);
    let phi = random_bijection(&mut r, &y, &x.difference(&a));
    let psi = random_bijection(&mut r, &x.difference(&b), &y);
    GarsiaMilne::new(x, y, a, b, phi, psi).expect("generated instance is valid")
}

/// A signed instance with `|carrier(X)| ≤ max_x`.
pub fn random_signed_gm(seed: u64, max_x: usize) -> GmInstance {
    let mut r = rng(seed);
    let total = r.gen_range(0..=max_x);
    let np = r.gen_range(0..=total);
    let xp = named("xp", 0..np);
    let xn = named("xn", 0..total - np);
    let ap = r.gen_range(0..=np);
    let an = r.gen_range(0..=total - np);
    // B needs the same signed size as A.
    let net = ap as i64 - an as i64;
    let choices: Vec<(usize, usize)> = (0..=np)
        .flat_map(|p| (0..=total - np).map(move |q| (p, q)))
        .filter(|&(p, q)| p as i64 - q as i64 == net)
        .collect();
    let (bp, bn) = *choices.choose(&mut r).expect("A itself qualifies");
    let x = SignedSet::new(xp.iter().cloned().collect(), xn.iter().cloned().collect()).expect("disjoint");
    let a = SignedSet::new(subset(&mut r, &xp, ap), subset(&mut r, &xn, an)).expect("disjoint");
    let b = SignedSet::new(subset(&mut r, &xp, bp), subset(&mut r, &xn, bn)).expect("disjoint");
    let x_minus_a = x.setminus(&a).expect("subset");
    let x_minus_b = x.setminus(&b).expect("subset");
    let target = x_minus_a.signed_size();
    let extra = r.gen_range(0..=3usize) as i64;
    let (yp, yn) = if target >= 0 { (target + extra, extra) } else { (extra, extra - target) };
    let y = SignedSet::new(
        named("yp", 0..yp as usize).into_iter().collect(),
        named("yn", 0..yn as usize).into_iter().collect(),
    )
    .expect("disjoint");
    let phi = random_cobordism(&mut r, &y, &x_minus_a);
    let psi = random_cobordism(&mut r, &x_minus_b, &y);
    GmInstance::new(x, y, a, b, phi, psi).expect("generated instance is valid")
}

/// Signed sets `A, B, C, D` with `f: A + C => B + D` and `g: D => C`.
#[derive(Debug, Clone)]
pub struct SubtractionInstance {
    pub a: SignedSet,
    pub b: SignedSet,
    pub c: SignedSet,
    pub d: SignedSet,
    pub f: Cobordism,
    pub g: Cobordism,
}

fn signed_with_size(rng: &mut impl Rng, prefix: &str, net: i64, max_extra: usize) -> SignedSet {
    let extra = rng.gen_range(0..=max_extra) as i64;
    let (p, n) = if net >= 0 { (net + extra, extra) } else { (extra, extra - net) };
    SignedSet::new(
        named(&format!("{prefix}p"), 0..p as usize).into_iter().collect(),
        named(&format!("{prefix}n"), 0..n as usize).into_iter().collect(),
    )
    .expect("disjoint")
}

/// A random instance for cobordism subtraction with small carriers.
pub fn random_subtraction_instance(seed: u64, max: usize) -> SubtractionInstance {
    let mut r = rng(seed);
    let half = (max / 2).max(1) as i64;
    let sa = r.gen_range(-half..=half);
    let sc = r.gen_range(-half..=half);
    let a = signed_with_size(&mut r, "a", sa, max / 2);
    let c = signed_with_size(&mut r, "c", sc, max / 2);
    let d = signed_with_size(&mut r, "d", sc, max / 2);
    let b = signed_with_size(&mut r, "b", sa, max / 2);
    let src = a.sum(&c).expect("disjoint names");
    let dst = b.sum(&d).expect("disjoint names");
    let f = random_cobordism(&mut r, &src, &dst);
    let g = random_cobordism(&mut r, &d, &c);
    SubtractionInstance { a, b, c, d, f, g }
}

/// Injections `f: X -> Y`, `g: Y -> X` with `|X| = |Y| ≤ max`.
pub fn random_injection_pair(seed: u64, max: usize) -> (Injection, Injection) {
    let mut r = rng(seed);
    let n = r.gen_range(0..=max);
    let x: FiniteSet = named("x", 0..n).into_iter().collect();
    let y: FiniteSet = named("y", 0..n).into_iter().collect();
    let f = random_bijection(&mut r, &x, &y);
    let g = random_bijection(&mut r, &y, &x);
    let lift = |m: &Matching| {
        Injection::new(m.domain().clone(), m.codomain().clone(), m.forward_map().clone()).expect("bijection")
    };
    (lift(&f), lift(&g))
}

fn sign_reversing_involution(rng: &mut impl Rng, pos: &[Element], neg: &[Element]) -> Matching {
    let mut moved = pos.to_vec();
    moved.shuffle(rng);
    let fixed = moved.split_off(neg.len());
    let mut pairs: Vec<(Element, Element)> = fixed.iter().map(|e| (e.clone(), e.clone())).collect();
    for (p, n) in moved.iter().zip(neg) {
        pairs.push((p.clone(), n.clone()));
        pairs.push((n.clone(), p.clone()));
    }
    let all: FiniteSet = pos.iter().chain(neg).cloned().collect();
    Matching::new(all.clone(), all, pairs).expect("involution")
}

/// Two involutions on `S = P ∪ N` (`|S| ≤ max`) that swap `P` and `N` off
/// their fixed points, which lie in `P`. Without the sign condition the
/// iteration from `Fix(Φ)` may never reach `Fix(Ψ)`.
pub fn random_involution_pair(seed: u64, max: usize) -> (Matching, Matching) {
    let mut r = rng(seed);
    let total = r.gen_range(0..=max);
    let n = r.gen_range(0..=total / 2);
    let pos = named("s", 0..total - n);
    let neg = named("t", 0..n);
    (sign_reversing_involution(&mut r, &pos, &neg), sign_reversing_involution(&mut r, &pos, &neg))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elements::atoms;
    use std::collections::BTreeMap;

    #[test]
    fn valid_matching_passes() {
        let m = Matching::from_pairs([(Element::atom("a"), Element::atom("b"))]).unwrap();
        let report = verify_matching(&m);
        assert!(report.passed);
        assert!(report.failures.is_empty());
    }

    #[test]
    fn corrupted_forward_map_is_reported() {
        let forward: BTreeMap<_, _> = [("a", "b"), ("c", "b")]
            .into_iter()
            .map(|(x, y)| (Element::atom(x), Element::atom(y)))
            .collect();
        let backward = [(Element::atom("b"), Element::atom("a"))].into_iter().collect();
        let bad = Matching::from_raw_parts(atoms(["a", "c"]), atoms(["b", "d"]), forward, backward);
        let report = verify_matching(&bad);
        assert!(!report.passed);
        assert!(report.failures.contains(&("injective".into(), "b".into())));
        assert!(report.failures.contains(&("surjective".into(), "d".into())));
        assert!(report.failures.contains(&("inverse-consistent".into(), "c".into())));
    }

    #[test]
    fn pair_list_checks() {
        let a = atoms(["a", "b"]);
        let pairs = vec![(Element::atom("a"), Element::atom("a")), (Element::atom("a"), Element::atom("z"))];
        let report = verify_pairs("m", &a, &a, &pairs);
        let checks: Vec<_> = report.failures.iter().map(|(c, _)| c.as_str()).collect();
        assert_eq!(checks, ["target-in-codomain", "function", "total", "surjective"]);
    }

    #[test]
    fn partition_counts() {
        assert_eq!(count_partitions(Kind::Any, 5), 7);
        assert_eq!(count_partitions(Kind::Distinct, 6), 4);
        assert_eq!(count_partitions(Kind::Odd, 6), 4);
        assert_eq!(count_partitions(Kind::Distinct, 0), 1);
        assert_eq!(count_partitions(Kind::Any, 14), 135);
    }

    #[test]
    fn identity_gm_instance() {
        let x = atoms(["a", "b"]);
        let gm = GarsiaMilne::new(x.clone(), FiniteSet::new(), x.clone(), x.clone(), Matching::empty(), Matching::empty()).unwrap();
        assert_eq!(brute_force_gm(&gm).unwrap(), Matching::identity(&x));
    }

    #[test]
    fn generators_are_deterministic() {
        assert_eq!(random_gm(1, 4), random_gm(1, 4));
        assert_eq!(random_chain(7, 5, 6, true), random_chain(7, 5, 6, true));
        assert_eq!(random_cancel_instance(3, 6), random_cancel_instance(3, 6));
        assert_eq!(random_signed_gm(9, 8), random_signed_gm(9, 8));
    }

    #[test]
    fn zero_sizes_are_accepted() {
        let gm = random_gm(5, 0);
        assert!(gm.x.is_empty());
        assert!(brute_force_gm(&gm).unwrap().is_empty());
        let (f, c) = random_cancel_instance(5, 0);
        assert!(f.is_empty() && c.is_empty());
    }

    #[test]
    fn generated_instances_are_well_formed() {
        for seed in 0..200 {
            for f in random_chain(seed, 5, 6, true) {
                assert!(verify_cobordism(&f).passed);
            }
            let inst = random_signed_gm(seed, 8);
            assert!(verify_cobordism(inst.phi()).passed);
            let (phi, psi) = random_involution_pair(seed, 8);
            assert_eq!(phi.fixed_points().len(), psi.fixed_points().len());
            assert!(phi.is_involution() && psi.is_involution());
            let s = random_subtraction_instance(seed, 6);
            assert!(verify_cobordism(&s.f).passed && verify_cobordism(&s.g).passed);
        }
    }
}
