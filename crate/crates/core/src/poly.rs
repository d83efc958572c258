//! Weighted polynomial rings, monomials and sparse polynomials.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::field::{FieldDesc, Scalar};

/// Base monomial order. Degrees are always weighted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum BaseOrder {
    #[default]
    DegRevLex,
    Lex,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Variable {
    pub name: String,
    pub weight: u32,
}

/// `k[x_1..x_n]` with positive integer weights, together with the monomial
/// order used for every polynomial living in it.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GradedRingDesc {
    field: FieldDesc,
    vars: Vec<Variable>,
    order: BaseOrder,
}

pub type RingRef = Arc<GradedRingDesc>;

impl GradedRingDesc {
    pub fn new(field: FieldDesc, vars: Vec<(String, u32)>, order: BaseOrder) -> Result<RingRef> {
        let mut seen = std::collections::HashSet::new();
        for (name, w) in &vars {
            if *w == 0 {
                return Err(Error::Usage(format!("variable `{name}` has weight 0")));
            }
            if !seen.insert(name.clone()) {
                return Err(Error::Usage(format!("duplicate variable `{name}`")));
            }
        }
        Ok(Arc::new(GradedRingDesc {
            field,
            vars: vars.into_iter().map(|(name, weight)| Variable { name, weight }).collect(),
            order,
        }))
    }

    /// Standard-graded ring with the given variable names.
    pub fn standard(field: FieldDesc, names: &[&str]) -> RingRef {
        Self::new(field, names.iter().map(|n| (n.to_string(), 1)).collect(), BaseOrder::DegRevLex)
            .expect("valid variable list")
    }

    pub fn field(&self) -> FieldDesc {
        self.field
    }

    pub fn order(&self) -> BaseOrder {
        self.order
    }

    pub fn vars(&self) -> &[Variable] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn weight(&self, i: usize) -> u32 {
        self.vars[i].weight
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v.name == name)
    }

    /// Same variables, different monomial order.
    pub fn with_order(&self, order: BaseOrder) -> RingRef {
        Arc::new(GradedRingDesc { order, ..self.clone() })
    }

    /// Same variables and order over another field.
    pub fn with_field(&self, field: FieldDesc) -> RingRef {
        Arc::new(GradedRingDesc { field, ..self.clone() })
    }

    pub fn monomial(&self, exps: &[u32]) -> Monomial {
        assert_eq!(exps.len(), self.nvars(), "exponent vector length");
        let deg = exps.iter().zip(&self.vars).map(|(e, v)| *e as i64 * v.weight as i64).sum();
        Monomial { exps: exps.iter().copied().collect(), deg }
    }

    pub fn one_monomial(&self) -> Monomial {
        Monomial { exps: SmallVec::from_elem(0, self.nvars()), deg: 0 }
    }

    pub fn var_monomial(&self, i: usize, e: u32) -> Monomial {
        let mut exps: SmallVec<[u32; 4]> = SmallVec::from_elem(0, self.nvars());
        exps[i] = e;
        Monomial { exps, deg: e as i64 * self.vars[i].weight as i64 }
    }

    pub fn lcm(&self, a: &Monomial, b: &Monomial) -> Monomial {
        let exps: SmallVec<[u32; 4]> = a.exps.iter().zip(&b.exps).map(|(x, y)| *x.max(y)).collect();
        let deg = exps.iter().zip(&self.vars).map(|(e, v)| *e as i64 * v.weight as i64).sum();
        Monomial { exps, deg }
    }

    pub fn cmp_monomials(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match self.order {
            BaseOrder::DegRevLex => a.deg.cmp(&b.deg).then_with(|| {
                for i in (0..a.exps.len()).rev() {
                    if a.exps[i] != b.exps[i] {
                        return b.exps[i].cmp(&a.exps[i]);
                    }
                }
                Ordering::Equal
            }),
            BaseOrder::Lex => a.exps.cmp(&b.exps),
        }
    }

    /// Number of monomials of weighted degree exactly `d`.
    pub fn count_monomials(&self, d: i64) -> u64 {
        if d < 0 {
            return 0;
        }
        let mut table = vec![0u64; d as usize + 1];
        table[0] = 1;
        for v in &self.vars {
            let w = v.weight as usize;
            for e in w..=d as usize {
                table[e] += table[e - w];
            }
        }
        table[d as usize]
    }

    /// All monomials of weighted degree exactly `d`, in no particular order.
    pub fn monomials_of_degree(&self, d: i64) -> Vec<Monomial> {
        let mut out = Vec::new();
        if d < 0 {
            return out;
        }
        let mut exps = vec![0u32; self.nvars()];
        self.enumerate(0, d, &mut exps, &mut out);
        out
    }

    fn enumerate(&self, i: usize, rest: i64, exps: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if i == self.nvars() {
            if rest == 0 {
                out.push(self.monomial(exps));
            }
            return;
        }
        let w = self.vars[i].weight as i64;
        let mut e = 0;
        while e * w <= rest {
            exps[i] = e as u32;
            self.enumerate(i + 1, rest - e * w, exps, out);
            e += 1;
        }
        exps[i] = 0;
    }
}

impl fmt::Display for GradedRingDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[", self.field)?;
        for (i, v) in self.vars.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}:{}", v.name, v.weight)?;
        }
        write!(f, "]")
    }
}

/// Exponent vector with its cached weighted degree.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: SmallVec<[u32; 4]>,
    deg: i64,
}

impl Monomial {
    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    pub fn degree(&self) -> i64 {
        self.deg
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|e| *e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial { exps: self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect(), deg: self.deg + other.deg }
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.deg <= other.deg && self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    /// `self / other`, assuming `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Monomial {
        Monomial { exps: self.exps.iter().zip(&other.exps).map(|(a, b)| a - b).collect(), deg: self.deg - other.deg }
    }

    pub fn coprime(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(&other.exps).all(|(a, b)| *a == 0 || *b == 0)
    }

    pub fn total_exponent(&self) -> u64 {
        self.exps.iter().map(|e| *e as u64).sum()
    }
}

/// Weighted degree of a polynomial; the zero polynomial has no finite degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum WeightedDegree {
    MinusInfinity,
    Finite(i64),
}

impl WeightedDegree {
    pub fn finite(self) -> Option<i64> {
        match self {
            WeightedDegree::Finite(d) => Some(d),
            WeightedDegree::MinusInfinity => None,
        }
    }
}

/// Sparse polynomial. Terms are sorted strictly decreasing in the ring's
/// monomial order and never carry a zero coefficient.
#[derive(Clone, Debug)]
pub struct Polynomial {
    ring: RingRef,
    terms: Vec<(Monomial, Scalar)>,
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        same_ring(&self.ring, &other.ring) && self.terms == other.terms
    }
}

impl Eq for Polynomial {}

pub(crate) fn same_ring(a: &RingRef, b: &RingRef) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

fn check_same(a: &RingRef, b: &RingRef) -> Result<()> {
    if same_ring(a, b) {
        Ok(())
    } else {
        Err(Error::RingMismatch(format!("{a} vs {b}")))
    }
}

impl Polynomial {
    pub fn zero(ring: &RingRef) -> Self {
        Polynomial { ring: ring.clone(), terms: Vec::new() }
    }

    pub fn constant(ring: &RingRef, c: Scalar) -> Self {
        Self::term(ring, c, ring.one_monomial())
    }

    pub fn from_int(ring: &RingRef, n: i64) -> Self {
        Self::constant(ring, ring.field().from_i64(n))
    }

    pub fn one(ring: &RingRef) -> Self {
        Self::from_int(ring, 1)
    }

    pub fn var(ring: &RingRef, i: usize) -> Self {
        Self::term(ring, ring.field().one(), ring.var_monomial(i, 1))
    }

    pub fn term(ring: &RingRef, c: Scalar, m: Monomial) -> Self {
        if ring.field().is_zero(&c) {
            Self::zero(ring)
        } else {
            Polynomial { ring: ring.clone(), terms: vec![(m, c)] }
        }
    }

    /// Builds a polynomial from arbitrary terms, merging duplicates.
    pub fn from_terms(ring: &RingRef, mut terms: Vec<(Monomial, Scalar)>) -> Self {
        let field = ring.field();
        terms.sort_by(|a, b| ring.cmp_monomials(&b.0, &a.0));
        let mut out: Vec<(Monomial, Scalar)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            match out.last_mut() {
                Some((lm, lc)) if *lm == m => *lc = field.add(lc, &c),
                _ => {
                    if let Some((_, lc)) = out.last() {
                        if field.is_zero(lc) {
                            out.pop();
                        }
                    }
                    out.push((m, c));
                }
            }
        }
        if let Some((_, lc)) = out.last() {
            if field.is_zero(lc) {
                out.pop();
            }
        }
        Polynomial { ring: ring.clone(), terms: out }
    }

    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    pub fn terms(&self) -> &[(Monomial, Scalar)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    /// Nonzero constant.
    pub fn is_unit(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one()
    }

    pub fn leading(&self) -> Option<&(Monomial, Scalar)> {
        self.terms.first()
    }

    pub fn weighted_degree(&self) -> WeightedDegree {
        self.terms.iter().map(|(m, _)| m.degree()).max().map_or(WeightedDegree::MinusInfinity, WeightedDegree::Finite)
    }

    /// Common weighted degree of all terms, `None` if the polynomial is zero or
    /// inhomogeneous.
    pub fn homogeneous_degree(&self) -> Option<i64> {
        let d = self.terms.first()?.0.degree();
        self.terms.iter().all(|(m, _)| m.degree() == d).then_some(d)
    }

    /// The zero polynomial counts as homogeneous of every degree.
    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.homogeneous_degree().is_some()
    }

    pub fn neg(&self) -> Self {
        let field = self.ring.field();
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), field.neg(c))).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        check_same(&self.ring, &other.ring)?;
        Ok(self.merge(other, false))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        check_same(&self.ring, &other.ring)?;
        Ok(self.merge(other, true))
    }

    fn merge(&self, other: &Self, negate: bool) -> Self {
        let field = self.ring.field();
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() || j < other.terms.len() {
            let ord = if i == self.terms.len() {
                Ordering::Less
            } else if j == other.terms.len() {
                Ordering::Greater
            } else {
                self.ring.cmp_monomials(&self.terms[i].0, &other.terms[j].0)
            };
            match ord {
                Ordering::Greater => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    let (m, c) = &other.terms[j];
                    out.push((m.clone(), if negate { field.neg(c) } else { c.clone() }));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate {
                        field.sub(&self.terms[i].1, &other.terms[j].1)
                    } else {
                        field.add(&self.terms[i].1, &other.terms[j].1)
                    };
                    if !field.is_zero(&c) {
                        out.push((self.terms[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        Polynomial { ring: self.ring.clone(), terms: out }
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        let field = self.ring.field();
        if field.is_zero(c) {
            return Self::zero(&self.ring);
        }
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, a)| (m.clone(), field.mul(a, c))).collect(),
        }
    }

    /// Multiplication by `c * m`; preserves term order.
    pub fn mul_term(&self, c: &Scalar, m: &Monomial) -> Self {
        let field = self.ring.field();
        if field.is_zero(c) {
            return Self::zero(&self.ring);
        }
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(n, a)| (n.mul(m), field.mul(a, c))).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        check_same(&self.ring, &other.ring)?;
        let field = self.ring.field();
        let mut acc: HashMap<Monomial, Scalar> = HashMap::new();
        for (m, a) in &self.terms {
            for (n, b) in &other.terms {
                let c = field.mul(a, b);
                acc.entry(m.mul(n)).and_modify(|x| *x = field.add(x, &c)).or_insert(c);
            }
        }
        let terms = acc.into_iter().filter(|(_, c)| !field.is_zero(c)).collect();
        Ok(Self::from_terms(&self.ring, terms))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(&self.ring);
        for _ in 0..e {
            acc = acc.mul(self).expect("same ring");
        }
        acc
    }

    /// Divide every term by the leading coefficient.
    pub fn monic(&self) -> Self {
        match self.terms.first() {
            None => self.clone(),
            Some((_, c)) => self.scale(&self.ring.field().inv(c)),
        }
    }

    /// Re-express in a ring with the same variables but possibly another order.
    pub fn to_ring(&self, target: &RingRef) -> Result<Self> {
        if target.vars() != self.ring.vars() || target.field() != self.ring.field() {
            return Err(Error::RingMismatch(format!("{} vs {target}", self.ring)));
        }
        Ok(Self::from_terms(target, self.terms.clone()))
    }

    /// Applies the ring homomorphism sending variable `i` to `images[i]`.
    /// All images must live in `target`.
    pub fn substitute(&self, target: &RingRef, images: &[Polynomial]) -> Result<Self> {
        if images.len() != self.ring.nvars() {
            return Err(Error::ArityMismatch { expected: self.ring.nvars(), found: images.len() });
        }
        for img in images {
            check_same(img.ring(), target)?;
        }
        if target.field() != self.ring.field() {
            return Err(Error::RingMismatch("coefficient fields differ".into()));
        }
        let mut powers: Vec<Vec<Polynomial>> =
            images.iter().map(|p| vec![Polynomial::one(target), p.clone()]).collect();
        let mut acc = Polynomial::zero(target);
        for (m, c) in &self.terms {
            let mut t = Polynomial::constant(target, c.clone());
            for (i, e) in m.exponents().iter().enumerate() {
                if *e == 0 {
                    continue;
                }
                while powers[i].len() <= *e as usize {
                    let next = powers[i].last().unwrap().mul(&images[i])?;
                    powers[i].push(next);
                }
                t = t.mul(&powers[i][*e as usize])?;
            }
            acc = acc.add(&t)?;
        }
        Ok(acc)
    }

    /// Homogenizes into `target`, whose first `n` variables mirror this ring's
    /// variables (same weights) and whose variable `rees_var` has weight 1.
    /// Each term of degree `e` picks up `rees_var^(deg p - e)`.
    pub fn homogenize(&self, target: &RingRef, rees_var: usize) -> Result<Self> {
        match self.weighted_degree() {
            WeightedDegree::MinusInfinity => Err(Error::ZeroInput("homogenize")),
            WeightedDegree::Finite(d) => self.homogenize_to(target, rees_var, d),
        }
    }

    /// Like [`Polynomial::homogenize`] but pads to an explicit degree `d`,
    /// which must be at least the weighted degree.
    pub fn homogenize_to(&self, target: &RingRef, rees_var: usize, d: i64) -> Result<Self> {
        let n = self.ring.nvars();
        if target.nvars() != n + 1 || rees_var != n {
            return Err(Error::ArityMismatch { expected: n + 1, found: target.nvars() });
        }
        if target.weight(rees_var) != 1 || (0..n).any(|i| target.weight(i) != self.ring.weight(i)) {
            return Err(Error::RingMismatch("homogenization target weights".into()));
        }
        if let WeightedDegree::Finite(top) = self.weighted_degree() {
            if top > d {
                return Err(Error::Usage(format!("cannot homogenize degree {top} polynomial to degree {d}")));
            }
        }
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut exps: Vec<u32> = m.exponents().to_vec();
                exps.push((d - m.degree()) as u32);
                (target.monomial(&exps), c.clone())
            })
            .collect();
        Ok(Self::from_terms(target, terms))
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let field = self.ring.field();
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let neg = field.is_negative(c);
            let abs = if neg { field.neg(c) } else { c.clone() };
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            let mut factors = Vec::new();
            for (i, e) in m.exponents().iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(self.ring.vars[i].name.clone()),
                    _ => factors.push(format!("{}^{}", self.ring.vars[i].name, e)),
                }
            }
            if factors.is_empty() {
                write!(f, "{abs}")?;
            } else {
                if !field.is_one(&abs) {
                    write!(f, "{abs}*")?;
                }
                write!(f, "{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}
