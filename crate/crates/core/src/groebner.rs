//! Gröbner bases of submodules of graded free modules.
//!
//! Terms of a free module are ordered position-over-term: a lower component
//! index always wins, ties are broken by the ring's monomial order. All
//! bases returned from this module are reduced and monic.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::budget;
use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::poly::{same_ring, BaseOrder, Monomial, Polynomial, RingRef};

/// Hard cap on `(U : f)` iterations inside [`saturate`].
pub const SATURATION_CAP: usize = 64;

/// Free module `⊕ A(-twist_i)`: generator `i` sits in degree `twist_i`.
#[derive(Clone, Debug)]
pub struct FreeModuleDesc {
    ring: RingRef,
    twists: Vec<i64>,
}

impl PartialEq for FreeModuleDesc {
    fn eq(&self, other: &Self) -> bool {
        same_ring(&self.ring, &other.ring) && self.twists == other.twists
    }
}

impl Eq for FreeModuleDesc {}

impl FreeModuleDesc {
    pub fn new(ring: &RingRef, twists: Vec<i64>) -> Self {
        FreeModuleDesc { ring: ring.clone(), twists }
    }

    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    pub fn twists(&self) -> &[i64] {
        &self.twists
    }

    pub fn rank(&self) -> usize {
        self.twists.len()
    }

    /// Position-over-term comparison of `(component, monomial)` pairs.
    pub fn cmp_terms(&self, a: (usize, &Monomial), b: (usize, &Monomial)) -> Ordering {
        b.0.cmp(&a.0).then_with(|| self.ring.cmp_monomials(a.1, b.1))
    }

    pub fn direct_sum(&self, other: &FreeModuleDesc) -> FreeModuleDesc {
        let mut twists = self.twists.clone();
        twists.extend_from_slice(&other.twists);
        FreeModuleDesc::new(&self.ring, twists)
    }

    pub fn basis(&self, i: usize) -> ModuleElement {
        ModuleElement { terms: vec![VTerm { comp: i, mon: self.ring.one_monomial(), coef: self.ring.field().one() }] }
    }

    pub fn with_ring(&self, ring: &RingRef) -> FreeModuleDesc {
        FreeModuleDesc::new(ring, self.twists.clone())
    }

    pub fn term_degree(&self, t: &VTerm) -> i64 {
        t.mon.degree() + self.twists[t.comp]
    }
}

impl fmt::Display for FreeModuleDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.twists.iter().map(|t| format!("A({})", -t)).collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join("+"))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VTerm {
    pub comp: usize,
    pub mon: Monomial,
    pub coef: Scalar,
}

/// Element of a free module, stored as a sorted list of terms (leading term
/// first). Ordering-sensitive operations take the ambient module.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ModuleElement {
    terms: Vec<VTerm>,
}

impl ModuleElement {
    pub fn zero() -> Self {
        ModuleElement { terms: Vec::new() }
    }

    pub fn terms(&self) -> &[VTerm] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn lead(&self) -> Option<&VTerm> {
        self.terms.first()
    }

    pub fn from_terms(f: &FreeModuleDesc, mut terms: Vec<VTerm>) -> Self {
        let field = f.ring.field();
        terms.sort_by(|a, b| f.cmp_terms((b.comp, &b.mon), (a.comp, &a.mon)));
        let mut out: Vec<VTerm> = Vec::with_capacity(terms.len());
        for t in terms {
            if let Some(last) = out.last_mut() {
                if last.comp == t.comp && last.mon == t.mon {
                    last.coef = field.add(&last.coef, &t.coef);
                    continue;
                }
                if field.is_zero(&last.coef) {
                    out.pop();
                }
            }
            out.push(t);
        }
        if out.last().is_some_and(|t| field.is_zero(&t.coef)) {
            out.pop();
        }
        ModuleElement { terms: out }
    }

    /// Wraps terms already sorted in the ambient order without zero
    /// coefficients or duplicates.
    pub(crate) fn from_sorted_terms(terms: Vec<VTerm>) -> Self {
        ModuleElement { terms }
    }

    pub fn from_components(f: &FreeModuleDesc, comps: &[Polynomial]) -> Result<Self> {
        if comps.len() != f.rank() {
            return Err(Error::AmbientMismatch(format!("{} components for rank {}", comps.len(), f.rank())));
        }
        let mut terms = Vec::new();
        for (i, p) in comps.iter().enumerate() {
            if !same_ring(p.ring(), &f.ring) {
                return Err(Error::RingMismatch(format!("{} vs {}", p.ring(), f.ring)));
            }
            for (m, c) in p.terms() {
                terms.push(VTerm { comp: i, mon: m.clone(), coef: c.clone() });
            }
        }
        Ok(ModuleElement { terms })
    }

    pub fn component(&self, f: &FreeModuleDesc, i: usize) -> Polynomial {
        let terms = self.terms.iter().filter(|t| t.comp == i).map(|t| (t.mon.clone(), t.coef.clone())).collect();
        Polynomial::from_terms(&f.ring, terms)
    }

    pub fn components(&self, f: &FreeModuleDesc) -> Vec<Polynomial> {
        (0..f.rank()).map(|i| self.component(f, i)).collect()
    }

    fn merge(&self, f: &FreeModuleDesc, other: &ModuleElement, coef: &Scalar, mon: Option<&Monomial>) -> ModuleElement {
        // self + coef * mon * other
        let field = f.ring.field();
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let mut i = 0;
        let mut j = 0;
        let scaled = |t: &VTerm| VTerm {
            comp: t.comp,
            mon: match mon {
                Some(m) => t.mon.mul(m),
                None => t.mon.clone(),
            },
            coef: field.mul(&t.coef, coef),
        };
        let mut pending: Option<VTerm> = other.terms.first().map(scaled);
        while i < self.terms.len() || pending.is_some() {
            let ord = match (&pending, self.terms.get(i)) {
                (None, _) => Ordering::Greater,
                (Some(_), None) => Ordering::Less,
                (Some(p), Some(s)) => f.cmp_terms((s.comp, &s.mon), (p.comp, &p.mon)),
            };
            match ord {
                Ordering::Greater => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push(pending.take().unwrap());
                    j += 1;
                    pending = other.terms.get(j).map(scaled);
                }
                Ordering::Equal => {
                    let p = pending.take().unwrap();
                    let c = field.add(&self.terms[i].coef, &p.coef);
                    if !field.is_zero(&c) {
                        out.push(VTerm { comp: p.comp, mon: p.mon, coef: c });
                    }
                    i += 1;
                    j += 1;
                    pending = other.terms.get(j).map(scaled);
                }
            }
        }
        ModuleElement { terms: out }
    }

    pub fn add(&self, f: &FreeModuleDesc, other: &ModuleElement) -> ModuleElement {
        self.merge(f, other, &f.ring.field().one(), None)
    }

    pub fn sub(&self, f: &FreeModuleDesc, other: &ModuleElement) -> ModuleElement {
        self.merge(f, other, &f.ring.field().from_i64(-1), None)
    }

    /// `self + c * m * other`.
    pub fn add_multiple(&self, f: &FreeModuleDesc, other: &ModuleElement, c: &Scalar, m: &Monomial) -> ModuleElement {
        if f.ring.field().is_zero(c) {
            return self.clone();
        }
        self.merge(f, other, c, Some(m))
    }

    pub fn scale(&self, f: &FreeModuleDesc, c: &Scalar) -> ModuleElement {
        let field = f.ring.field();
        if field.is_zero(c) {
            return ModuleElement::zero();
        }
        ModuleElement {
            terms: self
                .terms
                .iter()
                .map(|t| VTerm { comp: t.comp, mon: t.mon.clone(), coef: field.mul(&t.coef, c) })
                .collect(),
        }
    }

    pub fn mul_term(&self, f: &FreeModuleDesc, c: &Scalar, m: &Monomial) -> ModuleElement {
        ModuleElement::zero().add_multiple(f, self, c, m)
    }

    pub fn mul_poly(&self, f: &FreeModuleDesc, p: &Polynomial) -> ModuleElement {
        let mut acc = ModuleElement::zero();
        for (m, c) in p.terms() {
            acc = acc.add_multiple(f, self, c, m);
        }
        acc
    }

    pub fn monic(&self, f: &FreeModuleDesc) -> ModuleElement {
        match self.terms.first() {
            None => self.clone(),
            Some(t) => self.scale(f, &f.ring.field().inv(&t.coef)),
        }
    }

    /// Maximal term degree, `None` for zero.
    pub fn degree(&self, f: &FreeModuleDesc) -> Option<i64> {
        self.terms.iter().map(|t| f.term_degree(t)).max()
    }

    pub fn homogeneous_degree(&self, f: &FreeModuleDesc) -> Option<i64> {
        let d = f.term_degree(self.terms.first()?);
        self.terms.iter().all(|t| f.term_degree(t) == d).then_some(d)
    }

    pub fn is_homogeneous(&self, f: &FreeModuleDesc) -> bool {
        self.is_zero() || self.homogeneous_degree(f).is_some()
    }

    /// Shifts every component index by `offset` (embedding into a direct sum).
    pub fn shift_components(&self, offset: usize) -> ModuleElement {
        ModuleElement { terms: self.terms.iter().map(|t| VTerm { comp: t.comp + offset, ..t.clone() }).collect() }
    }

    /// Keeps components in `lo..hi`, renumbered from zero.
    pub fn project(&self, lo: usize, hi: usize) -> ModuleElement {
        ModuleElement {
            terms: self
                .terms
                .iter()
                .filter(|t| t.comp >= lo && t.comp < hi)
                .map(|t| VTerm { comp: t.comp - lo, ..t.clone() })
                .collect(),
        }
    }

    /// Re-sorts the terms for another ambient with the same variables.
    pub fn reorder(&self, f: &FreeModuleDesc) -> ModuleElement {
        ModuleElement::from_terms(f, self.terms.clone())
    }

    pub fn display(&self, f: &FreeModuleDesc) -> String {
        let comps: Vec<String> = self.components(f).iter().map(|p| p.to_string()).collect();
        format!("({})", comps.join(", "))
    }
}

/// Monomial order on a free module: the ring's base order, extended
/// position-over-term with lower component indices prioritized.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MonomialOrderDesc {
    pub base: BaseOrder,
}

/// Reduced Gröbner basis of a submodule.
#[derive(Clone, Debug)]
pub struct GroebnerBasis {
    ambient: FreeModuleDesc,
    order: MonomialOrderDesc,
    generators: Vec<ModuleElement>,
    certificates: Option<Certificates>,
}

/// Lifting data from a tracked completion run.
#[derive(Clone, Debug)]
pub struct Certificates {
    /// Free module with one generator per input element.
    pub source: FreeModuleDesc,
    /// `lifts[k]` expresses basis element `k` in the input generators.
    pub lifts: Vec<ModuleElement>,
    /// Generators of the module of relations among the inputs.
    pub syzygies: Vec<ModuleElement>,
}

impl GroebnerBasis {
    pub fn ambient(&self) -> &FreeModuleDesc {
        &self.ambient
    }

    pub fn order(&self) -> MonomialOrderDesc {
        self.order
    }

    pub fn generators(&self) -> &[ModuleElement] {
        &self.generators
    }

    pub fn certificates(&self) -> Option<&Certificates> {
        self.certificates.as_ref()
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// Whole free module generated (every component has a unit lead).
    pub fn is_whole_module(&self) -> bool {
        (0..self.ambient.rank())
            .all(|c| self.generators.iter().any(|g| g.lead().is_some_and(|t| t.comp == c && t.mon.is_one())))
    }

    pub fn lead_monomials(&self) -> Vec<(usize, Monomial)> {
        self.generators.iter().filter_map(|g| g.lead()).map(|t| (t.comp, t.mon.clone())).collect()
    }

    fn check_ambient(&self, f: &FreeModuleDesc) -> Result<()> {
        if *f != self.ambient {
            return Err(Error::AmbientMismatch(format!("{f} vs {}", self.ambient)));
        }
        Ok(())
    }

    /// Normal form of `v` modulo the basis.
    pub fn normal_form(&self, f: &FreeModuleDesc, v: &ModuleElement) -> Result<ModuleElement> {
        self.check_ambient(f)?;
        reduce(&self.ambient, v, &self.generators, true)
    }

    pub fn contains(&self, v: &ModuleElement) -> Result<bool> {
        Ok(reduce(&self.ambient, v, &self.generators, false)?.is_zero())
    }

    /// Post-hoc check that every S-pair reduces to zero and the basis is
    /// autoreduced.
    pub fn verify(&self) -> Result<bool> {
        let f = &self.ambient;
        for (i, g) in self.generators.iter().enumerate() {
            for (j, h) in self.generators.iter().enumerate() {
                if i == j {
                    continue;
                }
                let (lg, lh) = (g.lead().unwrap(), h.lead().unwrap());
                if lg.comp == lh.comp && lg.mon.divides(&lh.mon) {
                    return Ok(false);
                }
                if i < j && lg.comp == lh.comp {
                    let s = s_vector(f, g, h);
                    if !reduce(f, &s, &self.generators, false)?.is_zero() {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }
}

/// Full (or top-only) reduction of `v` by `basis`; basis elements are monic.
fn reduce(f: &FreeModuleDesc, v: &ModuleElement, basis: &[ModuleElement], full: bool) -> Result<ModuleElement> {
    let field = f.ring.field();
    let mut rest = v.clone();
    let mut done: Vec<VTerm> = Vec::new();
    while let Some(t) = rest.terms.first() {
        let divisor = basis.iter().find(|g| {
            let l = g.lead().expect("nonzero basis element");
            l.comp == t.comp && l.mon.divides(&t.mon)
        });
        match divisor {
            Some(g) => {
                budget::charge(1 + g.terms.len() as u64 / 8)?;
                let l = g.lead().unwrap();
                let q = t.mon.div(&l.mon);
                let c = field.neg(&field.div(&t.coef, &l.coef));
                rest = rest.add_multiple(f, g, &c, &q);
            }
            None => {
                if !full {
                    break;
                }
                done.push(rest.terms.remove(0));
            }
        }
    }
    if full {
        Ok(ModuleElement { terms: done })
    } else {
        done.extend(rest.terms);
        Ok(ModuleElement { terms: done })
    }
}

fn s_vector(f: &FreeModuleDesc, g: &ModuleElement, h: &ModuleElement) -> ModuleElement {
    let field = f.ring.field();
    let (lg, lh) = (g.lead().unwrap(), h.lead().unwrap());
    let l = f.ring.lcm(&lg.mon, &lh.mon);
    let a = g.mul_term(f, &field.inv(&lg.coef), &l.div(&lg.mon));
    a.add_multiple(f, h, &field.neg(&field.inv(&lh.coef)), &l.div(&lh.mon))
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Pair {
    degree: i64,
    j: usize,
    i: usize,
}

/// Buchberger completion with the normal selection strategy and the chain
/// criterion (plus the coprime-lead criterion for ideals). Returns a reduced,
/// monic basis sorted by increasing leading term.
fn complete(f: &FreeModuleDesc, gens: &[ModuleElement]) -> Result<Vec<ModuleElement>> {
    let mut basis: Vec<ModuleElement> = Vec::new();
    let mut pairs: BTreeSet<Pair> = BTreeSet::new();
    let mut done_pairs: std::collections::HashSet<(usize, usize)> = std::collections::HashSet::new();
    let rank_one = f.rank() == 1;

    let mut sorted: Vec<&ModuleElement> = gens.iter().filter(|g| !g.is_zero()).collect();
    sorted.sort_by(|a, b| {
        let (la, lb) = (a.lead().unwrap(), b.lead().unwrap());
        f.term_degree(la).cmp(&f.term_degree(lb)).then_with(|| f.cmp_terms((la.comp, &la.mon), (lb.comp, &lb.mon)))
    });

    let insert = |h: ModuleElement, basis: &mut Vec<ModuleElement>, pairs: &mut BTreeSet<Pair>| {
        let h = h.monic(f);
        let lh = h.lead().unwrap().clone();
        let j = basis.len();
        for (i, g) in basis.iter().enumerate() {
            let lg = g.lead().unwrap();
            if lg.comp != lh.comp {
                continue;
            }
            let l = f.ring.lcm(&lg.mon, &lh.mon);
            pairs.insert(Pair { degree: l.degree() + f.twists[lh.comp], j, i });
        }
        basis.push(h);
    };

    for g in sorted {
        let r = reduce(f, g, &basis, true)?;
        if !r.is_zero() {
            insert(r, &mut basis, &mut pairs);
        }
    }

    while let Some(p) = pairs.pop_first() {
        budget::charge(1)?;
        let (gi, gj) = (&basis[p.i], &basis[p.j]);
        let (li, lj) = (gi.lead().unwrap(), gj.lead().unwrap());
        done_pairs.insert((p.i, p.j));
        if rank_one && li.mon.coprime(&lj.mon) {
            continue;
        }
        let l = f.ring.lcm(&li.mon, &lj.mon);
        let chain = basis.iter().enumerate().any(|(k, gk)| {
            if k == p.i || k == p.j {
                return false;
            }
            let lk = gk.lead().unwrap();
            if lk.comp != li.comp || !lk.mon.divides(&l) {
                return false;
            }
            let key = |a: usize, b: usize| if a < b { (a, b) } else { (b, a) };
            done_pairs.contains(&key(p.i, k)) && done_pairs.contains(&key(p.j, k))
        });
        if chain {
            continue;
        }
        let s = s_vector(f, gi, gj);
        let r = reduce(f, &s, &basis, true)?;
        if !r.is_zero() {
            insert(r, &mut basis, &mut pairs);
        }
    }

    // minimalize, then interreduce
    let mut keep: Vec<ModuleElement> = Vec::new();
    for (k, g) in basis.iter().enumerate() {
        let lg = g.lead().unwrap();
        let redundant = basis.iter().enumerate().any(|(m, h)| {
            if m == k {
                return false;
            }
            let lh = h.lead().unwrap();
            lh.comp == lg.comp && lh.mon.divides(&lg.mon) && (lh.mon != lg.mon || m < k)
        });
        if !redundant {
            keep.push(g.clone());
        }
    }
    let mut reduced = Vec::with_capacity(keep.len());
    for k in 0..keep.len() {
        let g = &keep[k];
        let lead = ModuleElement { terms: vec![g.terms[0].clone()] };
        let tail = ModuleElement { terms: g.terms[1..].to_vec() };
        let others: Vec<ModuleElement> =
            keep.iter().enumerate().filter(|(m, _)| *m != k).map(|(_, h)| h.clone()).collect();
        let tail = reduce(f, &tail, &others, true)?;
        reduced.push(lead.add(f, &tail).monic(f));
    }
    reduced.sort_by(|a, b| {
        let (la, lb) = (a.lead().unwrap(), b.lead().unwrap());
        f.cmp_terms((la.comp, &la.mon), (lb.comp, &lb.mon))
    });
    Ok(reduced)
}

/// Reduced Gröbner basis of the submodule generated by `gens`.
pub fn buchberger(f: &FreeModuleDesc, gens: &[ModuleElement]) -> Result<GroebnerBasis> {
    let generators = complete(f, gens)?;
    Ok(GroebnerBasis {
        ambient: f.clone(),
        order: MonomialOrderDesc { base: f.ring.order() },
        generators,
        certificates: None,
    })
}

/// Degrees of generators; zero or inhomogeneous generators get their top
/// degree (zero vectors get 0).
pub fn generator_degrees(f: &FreeModuleDesc, gens: &[ModuleElement]) -> Vec<i64> {
    gens.iter().map(|g| g.degree(f).unwrap_or(0)).collect()
}

/// Completion with lifting certificates, computed in the augmented module
/// `F ⊕ A^k` whose elements are `(g_i, e_i)`. Position-over-term puts the `F`
/// part first, so basis elements with leading term in the `A^k` part are
/// exactly the relations among the inputs.
pub fn buchberger_with_certificates(
    f: &FreeModuleDesc,
    gens: &[ModuleElement],
    source_twists: Option<&[i64]>,
) -> Result<GroebnerBasis> {
    let r = f.rank();
    let twists = match source_twists {
        Some(t) => t.to_vec(),
        None => generator_degrees(f, gens),
    };
    let source = FreeModuleDesc::new(&f.ring, twists);
    let aug = f.direct_sum(&source);
    let aug_gens: Vec<ModuleElement> =
        gens.iter().enumerate().map(|(i, g)| g.add(&aug, &source.basis(i).shift_components(r))).collect();
    let full = complete(&aug, &aug_gens)?;
    let mut generators = Vec::new();
    let mut lifts = Vec::new();
    let mut syzygies = Vec::new();
    for g in full {
        if g.lead().unwrap().comp < r {
            generators.push(g.project(0, r));
            lifts.push(g.project(r, r + gens.len()));
        } else {
            syzygies.push(g.project(r, r + gens.len()));
        }
    }
    Ok(GroebnerBasis {
        ambient: f.clone(),
        order: MonomialOrderDesc { base: f.ring.order() },
        generators,
        certificates: Some(Certificates { source, lifts, syzygies }),
    })
}

/// Generators of the kernel of `A^k → F`, `e_i ↦ gens_i`. The returned free
/// module has twists equal to the generator degrees (or `source_twists`).
pub fn syzygies(
    f: &FreeModuleDesc,
    gens: &[ModuleElement],
    source_twists: Option<&[i64]>,
) -> Result<(FreeModuleDesc, Vec<ModuleElement>)> {
    let gb = buchberger_with_certificates(f, gens, source_twists)?;
    let cert = gb.certificates.expect("tracked run");
    Ok((cert.source, cert.syzygies))
}

/// `(U : p) = { v : p·v ∈ U }`.
pub fn module_quotient(u: &GroebnerBasis, p: &Polynomial) -> Result<GroebnerBasis> {
    if p.is_zero() {
        return Err(Error::ZeroInput("module_quotient"));
    }
    let f = &u.ambient;
    if !same_ring(p.ring(), &f.ring) {
        return Err(Error::RingMismatch(format!("{} vs {}", p.ring(), f.ring)));
    }
    let r = f.rank();
    let pdeg = p.weighted_degree().finite().unwrap_or(0);
    let mut gens: Vec<ModuleElement> = (0..r).map(|i| f.basis(i).mul_poly(f, p)).collect();
    gens.extend(u.generators.iter().cloned());
    let mut twists: Vec<i64> = f.twists.iter().map(|t| t + pdeg).collect();
    twists.extend(generator_degrees(f, &u.generators));
    let (_, syz) = syzygies(f, &gens, Some(&twists))?;
    let quotient: Vec<ModuleElement> = syz.iter().map(|s| s.project(0, r)).filter(|v| !v.is_zero()).collect();
    buchberger(f, &quotient)
}

/// `(U : p^∞)`, iterating [`module_quotient`] until it stabilizes.
pub fn saturate(u: &GroebnerBasis, p: &Polynomial) -> Result<GroebnerBasis> {
    let mut cur = u.clone();
    for _ in 0..SATURATION_CAP {
        let next = module_quotient(&cur, p)?;
        if is_zero_quotient(&next.generators, &cur)? {
            return Ok(cur);
        }
        cur = next;
    }
    Err(Error::internal(format!("saturation did not stabilize within {SATURATION_CAP} iterations")))
}

/// Decides `K ⊆ U`.
pub fn is_zero_quotient(k: &[ModuleElement], u: &GroebnerBasis) -> Result<bool> {
    for v in k {
        if !u.contains(v)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Per-degree dimensions of `F/U` for `d` in `lo..=hi`.
pub fn hilbert_profile(f: &FreeModuleDesc, u: &GroebnerBasis, lo: i64, hi: i64) -> Result<Vec<u64>> {
    u.check_ambient(f)?;
    if let Some(g) = u.generators.iter().find(|g| !g.is_homogeneous(f)) {
        return Err(Error::Ungraded(format!("inhomogeneous basis element {}", g.display(f))));
    }
    let ring = &f.ring;
    let leads = u.lead_monomials();
    let mut dims = vec![0i64; (hi - lo + 1).max(0) as usize];
    for c in 0..f.rank() {
        let ideal: Vec<Monomial> = leads.iter().filter(|(k, _)| *k == c).map(|(_, m)| m.clone()).collect();
        let num = hilbert_numerator(ring, ideal);
        let top = hi - f.twists[c];
        if top < 0 {
            continue;
        }
        let series = expand_series(ring, &num, top as usize);
        for d in lo..=hi {
            let e = d - f.twists[c];
            if e >= 0 {
                dims[(d - lo) as usize] += series[e as usize];
            }
        }
    }
    dims.into_iter().map(|v| u64::try_from(v).map_err(|_| Error::internal("negative Hilbert function value"))).collect()
}

/// Vector-space dimension of an arbitrary (possibly ungraded) quotient `F/U`,
/// `None` when infinite. Finite exactly when, in every component, the leading
/// monomials contain a pure power of each variable.
pub fn quotient_dimension(f: &FreeModuleDesc, u: &GroebnerBasis) -> Result<Option<u64>> {
    u.check_ambient(f)?;
    let ring = &f.ring;
    let n = ring.nvars();
    let leads = u.lead_monomials();
    let mut total = 0u64;
    for c in 0..f.rank() {
        let ideal: Vec<Monomial> = leads.iter().filter(|(k, _)| *k == c).map(|(_, m)| m.clone()).collect();
        if ideal.iter().any(|m| m.is_one()) {
            continue;
        }
        let mut bound = 0i64;
        for v in 0..n {
            let pure = ideal
                .iter()
                .filter(|m| m.exponents().iter().enumerate().all(|(i, e)| i == v || *e == 0))
                .map(|m| m.exponents()[v])
                .min();
            match pure {
                Some(e) => bound += (e as i64 - 1) * ring.weight(v) as i64,
                None => return Ok(None),
            }
        }
        let num = hilbert_numerator(ring, ideal);
        let series = expand_series(ring, &num, bound as usize);
        total += series.iter().map(|v| *v as u64).sum::<u64>();
    }
    Ok(Some(total))
}

fn minimalize_monomials(mut gens: Vec<Monomial>) -> Vec<Monomial> {
    gens.sort_by_key(|m| m.degree());
    let mut out: Vec<Monomial> = Vec::new();
    for m in gens {
        if !out.iter().any(|k| k.divides(&m)) {
            out.push(m);
        }
    }
    out
}

/// Numerator `N(t)` of the Hilbert series `N(t) / Π(1 - t^{w_i})` of
/// `k[x]/I` for a monomial ideal `I`, as dense coefficients.
fn hilbert_numerator(ring: &RingRef, gens: Vec<Monomial>) -> Vec<i64> {
    let gens = minimalize_monomials(gens);
    if gens.is_empty() {
        return vec![1];
    }
    // pivot on a variable occurring in a non-pure-power generator
    let mixed = gens.iter().find(|m| m.exponents().iter().filter(|e| **e > 0).count() > 1);
    let Some(m) = mixed else {
        let mut acc = vec![1i64];
        for g in &gens {
            acc = poly_mul_int(&acc, &one_minus_t_pow(g.degree() as usize));
        }
        return acc;
    };
    let v = m.exponents().iter().position(|e| *e > 0).unwrap();
    let pivot = ring.var_monomial(v, 1);
    let mut with_pivot: Vec<Monomial> = gens.iter().filter(|g| g.exponents()[v] == 0).cloned().collect();
    with_pivot.push(pivot.clone());
    let colon: Vec<Monomial> = gens
        .iter()
        .map(|g| {
            let mut e = g.exponents().to_vec();
            e[v] = e[v].saturating_sub(1);
            ring.monomial(&e)
        })
        .collect();
    let a = hilbert_numerator(ring, with_pivot);
    let b = hilbert_numerator(ring, colon);
    let shift = pivot.degree() as usize;
    let mut out = vec![0i64; a.len().max(b.len() + shift)];
    for (i, c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in b.iter().enumerate() {
        out[i + shift] += c;
    }
    out
}

fn one_minus_t_pow(d: usize) -> Vec<i64> {
    let mut v = vec![0i64; d + 1];
    v[0] += 1;
    v[d] -= 1;
    v
}

fn poly_mul_int(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut out = vec![0i64; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if *x == 0 {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Coefficients `0..=top` of `num / Π(1 - t^{w_i})`.
fn expand_series(ring: &RingRef, num: &[i64], top: usize) -> Vec<i64> {
    let mut s = vec![0i64; top + 1];
    for (i, c) in num.iter().enumerate().take(top + 1) {
        s[i] = *c;
    }
    for v in ring.vars() {
        let w = v.weight as usize;
        for k in w..=top {
            s[k] += s[k - w];
        }
    }
    s
}

/// Per-component multiset of leading monomials, used for order-independence
/// checks and reports.
pub fn lead_term_summary(gb: &GroebnerBasis) -> HashMap<usize, usize> {
    let mut out = HashMap::new();
    for (c, _) in gb.lead_monomials() {
        *out.entry(c).or_insert(0) += 1;
    }
    out
}
