//! Twisted conjugacy on `π × {1..n}`: the relation
//! `(α,k) ~ (β,j)` iff some `γ` has `σ_γ(k) = j` and `α = φ_j(γ)⁻¹βγ`,
//! canonical class representatives, formal sums of classes, and the maps
//! between class sets induced by a change of lift or a finite cover.
//!
//! For rank one the relation is decided exactly. Otherwise orbits are
//! explored breadth first up to a word-length bound; classes that could not
//! be settled are flagged inexact and never merged.

mod cyclic;
mod search;

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::group::{FreeGroup, GroupElement, GroupRingElement, SemidirectElement};
use crate::induced::InducedHom;
use cyclic::CyclicOrbits;

pub const DEFAULT_BOUND: usize = 12;

/// A pair `(α, k)`. Ordered by branch, then shortlex on `α`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MarkedPair {
    pub k: usize,
    pub alpha: GroupElement,
}

impl MarkedPair {
    pub fn new(alpha: GroupElement, k: usize) -> Self {
        MarkedPair { k, alpha }
    }

    pub fn render(&self, group: &FreeGroup) -> String {
        format!("({},{})", group.render(&self.alpha), self.k)
    }

    pub fn parse(group: &FreeGroup, input: &str) -> Result<Self> {
        let body = input
            .trim()
            .strip_prefix('(')
            .and_then(|b| b.strip_suffix(')'))
            .ok_or_else(|| Error::parse("marked pair", input, "expected (α,k)"))?;
        let (alpha, k) = body
            .rsplit_once(',')
            .ok_or_else(|| Error::parse("marked pair", input, "missing ','"))?;
        let k = k
            .trim()
            .parse()
            .map_err(|_| Error::parse("marked pair", input, "bad branch index"))?;
        Ok(MarkedPair::new(group.parse(alpha)?, k))
    }
}

/// A class `[(α,k)]` named by its canonical representative.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ReidemeisterClass {
    pub rep: MarkedPair,
    /// False when the representative came from an unfinished search.
    pub exact: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EquivalenceVerdict {
    Equivalent(GroupElement),
    NotEquivalent,
    Unknown { bound: usize },
}

impl EquivalenceVerdict {
    pub fn is_equivalent(&self) -> bool {
        matches!(self, EquivalenceVerdict::Equivalent(_))
    }
}

/// The relation for a fixed induced homomorphism.
#[derive(Clone, Debug)]
pub struct Relation {
    hom: InducedHom,
    bound: usize,
    cyclic: Option<CyclicOrbits>,
}

impl Relation {
    /// Exact for rank one, bounded search with [`DEFAULT_BOUND`] otherwise.
    pub fn new(hom: InducedHom) -> Self {
        let cyclic = CyclicOrbits::new(&hom);
        Relation {
            hom,
            bound: DEFAULT_BOUND,
            cyclic,
        }
    }

    /// Search only, whatever the rank.
    pub fn bounded(hom: InducedHom, bound: usize) -> Self {
        Relation {
            hom,
            bound,
            cyclic: None,
        }
    }

    pub fn with_bound(mut self, bound: usize) -> Self {
        self.bound = bound;
        self
    }

    pub fn hom(&self) -> &InducedHom {
        &self.hom
    }

    pub fn group(&self) -> FreeGroup {
        self.hom.group()
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn is_decided_exactly(&self) -> bool {
        self.cyclic.is_some()
    }

    fn check_pair(&self, p: &MarkedPair) -> Result<()> {
        self.hom.check_branch(p.k)?;
        if !self.group().contains(&p.alpha) {
            return Err(Error::RankMismatch {
                expected: self.hom.rank(),
                found: p.alpha.min_rank(),
            });
        }
        Ok(())
    }

    /// `A_γ(β,j) = (φ_j(γ)⁻¹βγ, σ_γ⁻¹(j))`; the pairs equivalent to `q` are
    /// exactly the `A_γ(q)`.
    pub fn translate(&self, gamma: &GroupElement, q: &MarkedPair) -> Result<MarkedPair> {
        self.check_pair(q)?;
        let img = self.hom.evaluate(gamma)?;
        Ok(MarkedPair::new(
            img.translation(q.k).inv().mul(&q.alpha).mul(gamma),
            img.perm().inverse().apply(q.k),
        ))
    }

    /// Checks `σ_γ(k) = j` and `α = φ_j(γ)⁻¹βγ` for `p = (α,k)`, `q = (β,j)`.
    pub fn verify_witness(&self, p: &MarkedPair, q: &MarkedPair, gamma: &GroupElement) -> Result<bool> {
        let img = self.hom.evaluate(gamma)?;
        Ok(img.perm().apply(p.k) == q.k && p.alpha == img.translation(q.k).inv().mul(&q.alpha).mul(gamma))
    }

    pub fn equivalent(&self, p: &MarkedPair, q: &MarkedPair) -> Result<EquivalenceVerdict> {
        self.check_pair(p)?;
        self.check_pair(q)?;
        if let Some(c) = &self.cyclic {
            return Ok(match c.relate(p, q)? {
                Some(t) => EquivalenceVerdict::Equivalent(GroupElement::cyclic(t)),
                None => EquivalenceVerdict::NotEquivalent,
            });
        }
        let ex = search::explore(&self.hom, q, self.bound, Some(p))?;
        Ok(match ex.visited.get(p) {
            Some(gamma) => EquivalenceVerdict::Equivalent(gamma.clone()),
            None if ex.complete => EquivalenceVerdict::NotEquivalent,
            None => EquivalenceVerdict::Unknown { bound: self.bound },
        })
    }

    pub fn canonicalize(&self, p: &MarkedPair) -> Result<ReidemeisterClass> {
        self.check_pair(p)?;
        if let Some(c) = &self.cyclic {
            return Ok(ReidemeisterClass {
                rep: c.canonical(p)?.0,
                exact: true,
            });
        }
        let ex = search::explore(&self.hom, p, self.bound, None)?;
        let rep = ex.visited.into_keys().min().expect("the start pair is visited");
        Ok(ReidemeisterClass {
            rep,
            exact: ex.complete,
        })
    }

    /// `ρ`: canonicalize every term and collect.
    pub fn rho_project(&self, s: &PairSum) -> Result<ClassSum> {
        let mut out = ClassSum::zero();
        for (p, c) in s.terms() {
            out.add_class(&self.canonicalize(p)?, c.clone());
        }
        Ok(out)
    }
}

/// A formal integer sum of marked pairs, `ℤ(π × {1..n})`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PairSum {
    terms: BTreeMap<MarkedPair, BigInt>,
}

impl PairSum {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn add_pair(&mut self, p: MarkedPair, c: BigInt) {
        add_coefficient(&mut self.terms, p, c);
    }

    /// Adds `sign · (s × {k})`, where `Σ c_i g_i × {k} = Σ c_i (g_i, k)`.
    pub fn add_tagged(&mut self, s: &GroupRingElement, k: usize, sign: &BigInt) {
        for (g, c) in s.terms() {
            self.add_pair(MarkedPair::new(g.clone(), k), c * sign);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MarkedPair, &BigInt)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn render(&self, group: &FreeGroup) -> String {
        render_terms(self.terms.iter().map(|(p, c)| (p.render(group), c)))
    }
}

fn add_coefficient<K: Ord>(map: &mut BTreeMap<K, BigInt>, key: K, c: BigInt) {
    if c.is_zero() {
        return;
    }
    match map.entry(key) {
        Entry::Vacant(v) => {
            v.insert(c);
        }
        Entry::Occupied(mut o) => {
            *o.get_mut() += c;
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

fn render_terms<'a>(terms: impl Iterator<Item = (String, &'a BigInt)>) -> String {
    let parts: Vec<String> = terms.map(|(p, c)| format!("{c}*[{p}]")).collect();
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join(" + ")
    }
}

/// A formal integer sum of Reidemeister classes, `ℤR(f̃_#)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ClassSum {
    terms: BTreeMap<MarkedPair, BigInt>,
    inexact: std::collections::BTreeSet<MarkedPair>,
}

impl ClassSum {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn add_class(&mut self, class: &ReidemeisterClass, c: BigInt) {
        if c.is_zero() {
            return;
        }
        if !class.exact {
            self.inexact.insert(class.rep.clone());
        }
        add_coefficient(&mut self.terms, class.rep.clone(), c);
        if !self.terms.contains_key(&class.rep) {
            self.inexact.remove(&class.rep);
        }
    }

    pub fn add(&self, rhs: &ClassSum) -> ClassSum {
        let mut out = self.clone();
        for class in rhs.classes() {
            let c = rhs.terms[&class.rep].clone();
            out.add_class(&class, c);
        }
        out
    }

    pub fn scale(&self, c: &BigInt) -> ClassSum {
        let mut out = ClassSum::zero();
        for class in self.classes() {
            out.add_class(&class, &self.terms[&class.rep] * c);
        }
        out
    }

    pub fn neg(&self) -> ClassSum {
        self.scale(&-BigInt::one())
    }

    pub fn sub(&self, rhs: &ClassSum) -> ClassSum {
        self.add(&rhs.neg())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn classes(&self) -> impl Iterator<Item = ReidemeisterClass> + '_ {
        self.terms.keys().map(|rep| ReidemeisterClass {
            rep: rep.clone(),
            exact: !self.inexact.contains(rep),
        })
    }

    pub fn terms(&self) -> impl Iterator<Item = (ReidemeisterClass, &BigInt)> + '_ {
        self.classes().zip(self.terms.values())
    }

    pub fn coefficient(&self, rep: &MarkedPair) -> BigInt {
        self.terms.get(rep).cloned().unwrap_or_default()
    }

    /// Sum of all coefficients; for a Reidemeister trace this is the Lefschetz number.
    pub fn coefficient_sum(&self) -> BigInt {
        self.terms.values().sum()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of terms whose class is known exactly.
    pub fn exact_len(&self) -> usize {
        self.terms.len() - self.inexact.len()
    }

    pub fn is_exact(&self) -> bool {
        self.inexact.is_empty()
    }

    /// Text form `-1*[(1,1)] + -1*[(a,1)]`; inexact classes carry a trailing `?`.
    pub fn render(&self, group: &FreeGroup) -> String {
        let parts: Vec<String> = self
            .terms()
            .map(|(class, c)| {
                let flag = if class.exact { "" } else { "?" };
                format!("{c}*[{}]{flag}", class.rep.render(group))
            })
            .collect();
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" + ")
        }
    }

    pub fn display<'a>(&'a self, group: &'a FreeGroup) -> impl fmt::Display + 'a {
        struct D<'a>(&'a ClassSum, &'a FreeGroup);
        impl fmt::Display for D<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0.render(self.1))
            }
        }
        D(self, group)
    }

    pub fn parse(group: &FreeGroup, input: &str) -> Result<ClassSum> {
        let s = input.trim();
        let mut out = ClassSum::zero();
        if s == "0" {
            return Ok(out);
        }
        for term in s.split(" + ") {
            let (c, rest) = term
                .trim()
                .split_once("*[")
                .ok_or_else(|| Error::parse("class sum", input, "expected c*[(α,k)]"))?;
            let (pair, exact) = match rest.strip_suffix("]?") {
                Some(p) => (p, false),
                None => (
                    rest.strip_suffix(']')
                        .ok_or_else(|| Error::parse("class sum", input, "missing ']'"))?,
                    true,
                ),
            };
            let c: BigInt = c
                .parse()
                .map_err(|_| Error::parse("class sum", input, "bad coefficient"))?;
            let rep = MarkedPair::parse(group, pair)?;
            out.add_class(&ReidemeisterClass { rep, exact }, c);
        }
        Ok(out)
    }

    pub fn to_json(&self, group: &FreeGroup) -> Value {
        let terms: Vec<Value> = self
            .terms()
            .map(|(class, c)| {
                json!({
                    "alpha": group.render(&class.rep.alpha),
                    "k": class.rep.k,
                    "coefficient": c.to_i64().map_or_else(|| json!(c.to_string()), |v| json!(v)),
                    "exact": class.exact,
                })
            })
            .collect();
        json!({ "terms": terms, "exact": self.is_exact() })
    }

    pub fn from_json(group: &FreeGroup, v: &Value) -> Result<ClassSum> {
        let bad = |why: &str| Error::Json(format!("class sum: {why}"));
        let terms = v
            .get("terms")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing terms array"))?;
        let mut out = ClassSum::zero();
        for t in terms {
            let alpha = t.get("alpha").and_then(Value::as_str).ok_or_else(|| bad("alpha"))?;
            let k = t.get("k").and_then(Value::as_u64).ok_or_else(|| bad("k"))? as usize;
            let c: BigInt = match t.get("coefficient") {
                Some(Value::Number(n)) => n.as_i64().map(BigInt::from).ok_or_else(|| bad("coefficient"))?,
                Some(Value::String(s)) => s.parse().map_err(|_| bad("coefficient"))?,
                _ => return Err(bad("coefficient")),
            };
            let exact = t.get("exact").and_then(Value::as_bool).unwrap_or(true);
            let rep = MarkedPair::new(group.parse(alpha)?, k);
            out.add_class(&ReidemeisterClass { rep, exact }, c);
        }
        Ok(out)
    }
}

/// `μ_Φ(α,k) = (δ_k⁻¹α, ε⁻¹(k))` for `Φ = (δ_1,…,δ_n; ε)`.
pub fn mu_map(phi: &SemidirectElement, p: &MarkedPair) -> Result<MarkedPair> {
    if !(1..=phi.n()).contains(&p.k) {
        return Err(Error::BranchOutOfRange { k: p.k, n: phi.n() });
    }
    Ok(MarkedPair::new(
        phi.translation(p.k).inv().mul(&p.alpha),
        phi.perm().inverse().apply(p.k),
    ))
}

/// `μ_Φ` on a class taken for the lift `Φf̃`; the result is named in `target`,
/// the relation of the original lift.
pub fn mu_class(target: &Relation, phi: &SemidirectElement, class: &ReidemeisterClass) -> Result<ReidemeisterClass> {
    check_n(target, phi)?;
    let mut out = target.canonicalize(&mu_map(phi, &class.rep)?)?;
    out.exact &= class.exact;
    Ok(out)
}

pub fn mu_sum(target: &Relation, phi: &SemidirectElement, sum: &ClassSum) -> Result<ClassSum> {
    check_n(target, phi)?;
    let mut out = ClassSum::zero();
    for (class, c) in sum.terms() {
        out.add_class(&mu_class(target, phi, &class)?, c.clone());
    }
    Ok(out)
}

fn check_n(target: &Relation, phi: &SemidirectElement) -> Result<()> {
    if phi.n() != target.hom().n() {
        return Err(Error::BranchCount {
            expected: target.hom().n(),
            found: phi.n(),
        });
    }
    Ok(())
}

/// The subgroup `mℤ ⊂ ℤ = ⟨a⟩`, itself infinite cyclic on `b = a^m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CyclicSubgroup {
    index: u64,
}

impl CyclicSubgroup {
    pub fn new(index: u64) -> Result<Self> {
        if index == 0 {
            return Err(Error::SubgroupNotRegistered {
                index,
                reason: "index must be at least 1".into(),
            });
        }
        Ok(CyclicSubgroup { index })
    }

    pub fn index(&self) -> u64 {
        self.index
    }

    fn m(&self) -> i64 {
        self.index as i64
    }

    /// The homomorphism on the subgroup, in terms of its generator `b`.
    /// Requires `φ_k(a^m) ∈ mℤ` for every `k`.
    pub fn restrict(&self, hom: &InducedHom) -> Result<InducedHom> {
        let not = |reason: String| Error::SubgroupNotRegistered {
            index: self.index,
            reason,
        };
        if hom.rank() != 1 {
            return Err(not(format!("rank {} is not cyclic", hom.rank())));
        }
        let img = hom.evaluate(&GroupElement::cyclic(self.m()))?;
        let mut ts = Vec::with_capacity(hom.n());
        for (k, t) in img.translations().iter().enumerate() {
            let e = t.cyclic_exponent().expect("rank one");
            if e % self.m() != 0 {
                return Err(not(format!(
                    "φ_{}(a^{}) = a^{} leaves the subgroup",
                    k + 1,
                    self.m(),
                    e
                )));
            }
            ts.push(GroupElement::cyclic(e / self.m()));
        }
        InducedHom::new(hom.n(), vec![SemidirectElement::new(ts, img.perm().clone())?])
    }

    /// `(b^e, k) ↦ (a^{me}, k)`.
    pub fn embed(&self, p: &MarkedPair) -> MarkedPair {
        let e = p.alpha.cyclic_exponent().expect("subgroup words are cyclic");
        MarkedPair::new(GroupElement::cyclic(e * self.m()), p.k)
    }

    /// The inverse of [`embed`](Self::embed) on pairs whose exponent lies in `mℤ`.
    pub fn pull_back(&self, p: &MarkedPair) -> Option<MarkedPair> {
        let e = p.alpha.cyclic_exponent()?;
        (e % self.m() == 0).then(|| MarkedPair::new(GroupElement::cyclic(e / self.m()), p.k))
    }

    /// `ι`: a class for `sub` (which must be [`restrict`](Self::restrict) of
    /// `target`'s homomorphism) viewed as a class for the whole group.
    pub fn iota(&self, sub: &InducedHom, target: &Relation, class: &ReidemeisterClass) -> Result<ReidemeisterClass> {
        let expected = self.restrict(target.hom())?;
        if &expected != sub {
            return Err(Error::SubgroupNotRegistered {
                index: self.index,
                reason: "homomorphism is not the restriction of the target".into(),
            });
        }
        let mut out = target.canonicalize(&self.embed(&class.rep))?;
        out.exact &= class.exact;
        Ok(out)
    }

    pub fn iota_sum(&self, sub: &InducedHom, target: &Relation, sum: &ClassSum) -> Result<ClassSum> {
        let mut out = ClassSum::zero();
        for (class, c) in sum.terms() {
            out.add_class(&self.iota(sub, target, &class)?, c.clone());
        }
        Ok(out)
    }
}
