//! Finitely presented modules, free resolutions, Hom complexes and Ext.
//!
//! Ext is always computed by resolving the first argument with free modules
//! and applying `Hom(-, N)` termwise; cohomology of the resulting complex is
//! returned as an explicit subquotient presentation.

use std::fmt;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::groebner::{self, FreeModuleDesc, GroebnerBasis, ModuleElement, VTerm};
use crate::poly::{Polynomial, RingRef};

/// Default degree window for graded Ext tables.
pub const DEFAULT_WINDOW: (i64, i64) = (-20, 20);

/// Map `source → target` of free modules; column `j` is the image of the
/// `j`-th source generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedMatrix {
    source: FreeModuleDesc,
    target: FreeModuleDesc,
    columns: Vec<ModuleElement>,
}

impl GradedMatrix {
    pub fn new(source: FreeModuleDesc, target: FreeModuleDesc, columns: Vec<ModuleElement>) -> Result<Self> {
        if columns.len() != source.rank() {
            return Err(Error::AmbientMismatch(format!("{} columns for source rank {}", columns.len(), source.rank())));
        }
        if let Some(t) = columns.iter().flat_map(|c| c.terms()).find(|t| t.comp >= target.rank()) {
            return Err(Error::AmbientMismatch(format!("component {} outside target rank {}", t.comp, target.rank())));
        }
        Ok(GradedMatrix { source, target, columns })
    }

    /// Builds a matrix from rows of entries (`entries[i][j]`, target row `i`).
    pub fn from_entries(source: FreeModuleDesc, target: FreeModuleDesc, entries: &[Vec<Polynomial>]) -> Result<Self> {
        if entries.len() != target.rank() || entries.iter().any(|row| row.len() != source.rank()) {
            return Err(Error::AmbientMismatch(format!(
                "entry table does not match {}x{} shape",
                target.rank(),
                source.rank()
            )));
        }
        let mut columns = Vec::with_capacity(source.rank());
        for j in 0..source.rank() {
            let col: Vec<Polynomial> = entries.iter().map(|row| row[j].clone()).collect();
            columns.push(ModuleElement::from_components(&target, &col)?);
        }
        GradedMatrix::new(source, target, columns)
    }

    /// Columns with source twists inferred from their degrees.
    pub fn from_columns(target: FreeModuleDesc, columns: Vec<ModuleElement>) -> Self {
        let twists = groebner::generator_degrees(&target, &columns);
        let source = FreeModuleDesc::new(target.ring(), twists);
        GradedMatrix { source, target, columns }
    }

    pub fn zero_map(source: FreeModuleDesc, target: FreeModuleDesc) -> Self {
        let columns = vec![ModuleElement::zero(); source.rank()];
        GradedMatrix { source, target, columns }
    }

    pub fn source(&self) -> &FreeModuleDesc {
        &self.source
    }

    pub fn target(&self) -> &FreeModuleDesc {
        &self.target
    }

    pub fn ring(&self) -> &RingRef {
        self.target.ring()
    }

    pub fn columns(&self) -> &[ModuleElement] {
        &self.columns
    }

    pub fn nrows(&self) -> usize {
        self.target.rank()
    }

    pub fn ncols(&self) -> usize {
        self.source.rank()
    }

    pub fn entry(&self, i: usize, j: usize) -> Polynomial {
        self.columns[j].component(&self.target, i)
    }

    pub fn entries(&self) -> Vec<Vec<Polynomial>> {
        let cols: Vec<Vec<Polynomial>> = self.columns.iter().map(|c| c.components(&self.target)).collect();
        (0..self.nrows()).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect()
    }

    pub fn apply(&self, v: &ModuleElement) -> ModuleElement {
        let mut acc = ModuleElement::zero();
        for j in 0..self.ncols() {
            let coeff = v.component(&self.source, j);
            if !coeff.is_zero() {
                acc = acc.add(&self.target, &self.columns[j].mul_poly(&self.target, &coeff));
            }
        }
        acc
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &GradedMatrix) -> Result<GradedMatrix> {
        if other.target != self.source {
            return Err(Error::AmbientMismatch(format!("{} vs {}", other.target, self.source)));
        }
        let columns = other.columns.iter().map(|c| self.apply(c)).collect();
        GradedMatrix::new(other.source.clone(), self.target.clone(), columns)
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(|c| c.is_zero())
    }

    /// Applies a ring map entrywise, keeping the twists.
    pub fn substitute(&self, target_ring: &RingRef, images: &[Polynomial]) -> Result<GradedMatrix> {
        let src = self.source.with_ring(target_ring);
        let tgt = self.target.with_ring(target_ring);
        let mut rows = Vec::with_capacity(self.nrows());
        for row in self.entries() {
            rows.push(row.iter().map(|p| p.substitute(target_ring, images)).collect::<Result<Vec<_>>>()?);
        }
        GradedMatrix::from_entries(src, tgt, &rows)
    }

    /// Same matrix in a ring with another monomial order.
    pub fn reorder(&self, ring: &RingRef) -> Result<GradedMatrix> {
        let src = self.source.with_ring(ring);
        let tgt = self.target.with_ring(ring);
        let rows: Vec<Vec<Polynomial>> = self
            .entries()
            .iter()
            .map(|row| row.iter().map(|p| p.to_ring(ring)).collect::<Result<Vec<_>>>())
            .collect::<Result<_>>()?;
        GradedMatrix::from_entries(src, tgt, &rows)
    }
}

impl fmt::Display for GradedMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .entries()
            .iter()
            .map(|row| format!("[{}]", row.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(", ")))
            .collect();
        write!(f, "[{}]", rows.join(", "))
    }
}

/// Checks that entry `(i, j)` is zero or homogeneous of degree `a_j - b_i`.
pub fn validate_graded_matrix(m: &GradedMatrix) -> Result<()> {
    for (j, col) in m.columns.iter().enumerate() {
        for i in 0..m.nrows() {
            let e = col.component(&m.target, i);
            if e.is_zero() {
                continue;
            }
            let expected = m.source.twists()[j] - m.target.twists()[i];
            match e.homogeneous_degree() {
                Some(d) if d == expected => {}
                Some(d) => return Err(Error::Degree { row: i, col: j, expected, found: d.to_string() }),
                None => return Err(Error::Degree { row: i, col: j, expected, found: "inhomogeneous".into() }),
            }
        }
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    Graded,
    Ungraded,
}

/// Module presented as the cokernel of a matrix between free modules.
#[derive(Debug)]
pub struct FPModule {
    presentation: GradedMatrix,
    mode: Mode,
    gb: OnceLock<GroebnerBasis>,
}

impl Clone for FPModule {
    fn clone(&self) -> Self {
        let gb = OnceLock::new();
        if let Some(g) = self.gb.get() {
            let _ = gb.set(g.clone());
        }
        FPModule { presentation: self.presentation.clone(), mode: self.mode, gb }
    }
}

impl PartialEq for FPModule {
    fn eq(&self, other: &Self) -> bool {
        self.presentation == other.presentation && self.mode == other.mode
    }
}

impl FPModule {
    pub fn new(presentation: GradedMatrix, mode: Mode) -> Result<Self> {
        if mode == Mode::Graded {
            validate_graded_matrix(&presentation)?;
        }
        Ok(FPModule { presentation, mode, gb: OnceLock::new() })
    }

    pub fn graded(presentation: GradedMatrix) -> Result<Self> {
        Self::new(presentation, Mode::Graded)
    }

    pub fn ungraded(presentation: GradedMatrix) -> Result<Self> {
        Self::new(presentation, Mode::Ungraded)
    }

    pub fn free(f: FreeModuleDesc, mode: Mode) -> Self {
        let src = FreeModuleDesc::new(f.ring(), vec![]);
        FPModule { presentation: GradedMatrix::zero_map(src, f), mode, gb: OnceLock::new() }
    }

    /// `A/(gens)` for polynomials `gens`.
    pub fn cyclic(ring: &RingRef, gens: &[Polynomial], mode: Mode) -> Result<Self> {
        let target = FreeModuleDesc::new(ring, vec![0]);
        let columns = gens
            .iter()
            .map(|g| ModuleElement::from_components(&target, std::slice::from_ref(g)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(GradedMatrix::from_columns(target, columns), mode)
    }

    pub fn presentation(&self) -> &GradedMatrix {
        &self.presentation
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn ring(&self) -> &RingRef {
        self.presentation.ring()
    }

    pub fn generators(&self) -> &FreeModuleDesc {
        &self.presentation.target
    }

    pub fn with_mode(&self, mode: Mode) -> Result<Self> {
        Self::new(self.presentation.clone(), mode)
    }

    /// Gröbner basis of the relation submodule, computed once.
    pub fn gb(&self) -> Result<&GroebnerBasis> {
        if let Some(g) = self.gb.get() {
            return Ok(g);
        }
        let g = groebner::buchberger(&self.presentation.target, &self.presentation.columns)?;
        Ok(self.gb.get_or_init(|| g))
    }

    pub fn is_zero(&self) -> Result<bool> {
        Ok(self.gb()?.is_whole_module())
    }

    pub fn hilbert_profile(&self, lo: i64, hi: i64) -> Result<Vec<u64>> {
        if self.mode != Mode::Graded {
            return Err(Error::Ungraded("Hilbert profile of an ungraded module".into()));
        }
        groebner::hilbert_profile(&self.presentation.target, self.gb()?, lo, hi)
    }

    /// Total vector-space dimension, `None` when infinite.
    pub fn dimension(&self) -> Result<Option<u64>> {
        groebner::quotient_dimension(&self.presentation.target, self.gb()?)
    }

    /// Serre twist `M(n)`: every generator moves from degree `b` to `b - n`.
    pub fn twist(&self, n: i64) -> Result<Self> {
        let src = FreeModuleDesc::new(self.ring(), self.presentation.source.twists().iter().map(|t| t - n).collect());
        let tgt = FreeModuleDesc::new(self.ring(), self.presentation.target.twists().iter().map(|t| t - n).collect());
        Self::new(GradedMatrix::new(src, tgt, self.presentation.columns.clone())?, self.mode)
    }

    /// Minimal generator degree, `None` for the zero free module.
    pub fn min_generator_degree(&self) -> Option<i64> {
        self.presentation.target.twists().iter().copied().min()
    }

    /// Same module with constant entries eliminated from the presentation.
    pub fn pruned(&self) -> Result<Self> {
        Self::new(prune(&self.presentation), self.mode)
    }

    /// Same module in a ring with another monomial order.
    pub fn reorder(&self, ring: &RingRef) -> Result<Self> {
        Self::new(self.presentation.reorder(ring)?, self.mode)
    }
}

impl fmt::Display for FPModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "coker {} twists {:?}", self.presentation, self.presentation.target.twists())
    }
}

/// Removes zero columns and repeatedly eliminates a generator killed by a
/// relation with a nonzero constant entry.
pub fn prune(m: &GradedMatrix) -> GradedMatrix {
    let mut target = m.target.clone();
    let mut src_twists: Vec<i64> = m.source.twists().to_vec();
    let mut cols: Vec<ModuleElement> = m.columns.clone();
    let field = target.ring().field();
    loop {
        let mut keep_t = Vec::new();
        let mut keep_c = Vec::new();
        for (c, t) in cols.into_iter().zip(src_twists) {
            if !c.is_zero() {
                keep_c.push(c);
                keep_t.push(t);
            }
        }
        cols = keep_c;
        src_twists = keep_t;
        let pivot = cols.iter().enumerate().find_map(|(j, c)| {
            c.terms()
                .iter()
                .find(|t| t.mon.is_one() && c.terms().iter().filter(|s| s.comp == t.comp).count() == 1)
                .map(|t| (j, t.clone()))
        });
        let Some((j, VTerm { comp: row, coef: u, .. })) = pivot else {
            break;
        };
        let pivot_col = cols[j].clone();
        let inv = field.inv(&u);
        let mut next = Vec::with_capacity(cols.len() - 1);
        let mut next_t = Vec::with_capacity(cols.len() - 1);
        for (l, c) in cols.iter().enumerate() {
            if l == j {
                continue;
            }
            let mut entry = c.component(&target, row);
            let reduced = if entry.is_zero() {
                c.clone()
            } else {
                entry = entry.scale(&field.neg(&inv));
                c.add(&target, &pivot_col.mul_poly(&target, &entry))
            };
            next.push(drop_component(&reduced, row));
            next_t.push(src_twists[l]);
        }
        let mut tw = target.twists().to_vec();
        tw.remove(row);
        target = FreeModuleDesc::new(target.ring(), tw);
        cols = next;
        src_twists = next_t;
    }
    let source = FreeModuleDesc::new(target.ring(), src_twists);
    GradedMatrix { source, target, columns: cols }
}

fn drop_component(v: &ModuleElement, row: usize) -> ModuleElement {
    // renumbering preserves the relative order of the remaining terms
    ModuleElement::from_sorted_terms(
        v.terms()
            .iter()
            .filter(|t| t.comp != row)
            .map(|t| VTerm { comp: if t.comp > row { t.comp - 1 } else { t.comp }, ..t.clone() })
            .collect(),
    )
}

/// Reduces `v` against an echelon list (distinct monic leads) using exact
/// leading-term matches only: plain linear algebra on coefficient vectors.
fn echelon_reduce(f: &FreeModuleDesc, v: &ModuleElement, rows: &[ModuleElement]) -> ModuleElement {
    let field = f.ring().field();
    let mut rest = v.clone();
    let mut kept: Vec<VTerm> = Vec::new();
    while let Some(t) = rest.lead().cloned() {
        match rows.iter().find(|r| {
            let l = r.lead().unwrap();
            l.comp == t.comp && l.mon == t.mon
        }) {
            Some(r) => rest = rest.add_multiple(f, r, &field.neg(&t.coef), &f.ring().one_monomial()),
            None => {
                kept.push(t);
                rest = ModuleElement::from_sorted_terms(rest.terms()[1..].to_vec());
            }
        }
    }
    ModuleElement::from_sorted_terms(kept)
}

/// Minimal homogeneous generating set of the submodule spanned by `gens`,
/// selected degree by degree.
pub fn minimal_generators(f: &FreeModuleDesc, gens: &[ModuleElement]) -> Result<Vec<ModuleElement>> {
    let mut by_degree: Vec<(i64, &ModuleElement)> =
        gens.iter().filter(|g| !g.is_zero()).map(|g| (g.degree(f).unwrap(), g)).collect();
    by_degree.sort_by_key(|(d, _)| *d);
    let mut kept: Vec<ModuleElement> = Vec::new();
    let mut i = 0;
    while i < by_degree.len() {
        let d = by_degree[i].0;
        let lower = groebner::buchberger(f, &kept)?;
        let mut echelon: Vec<ModuleElement> = Vec::new();
        while i < by_degree.len() && by_degree[i].0 == d {
            let g = by_degree[i].1;
            let nf = lower.normal_form(f, g)?;
            let r = echelon_reduce(f, &nf, &echelon);
            if !r.is_zero() {
                echelon.push(r.monic(f));
                kept.push(g.clone());
            }
            i += 1;
        }
    }
    Ok(kept)
}

/// Drops generators lying in the span of the remaining ones, highest degree
/// first. Used for ungraded data where degree-wise selection is unavailable.
pub fn irredundant_generators(f: &FreeModuleDesc, gens: &[ModuleElement]) -> Result<Vec<ModuleElement>> {
    let mut cur: Vec<ModuleElement> = gens.iter().filter(|g| !g.is_zero()).cloned().collect();
    let mut order: Vec<usize> = (0..cur.len()).collect();
    order.sort_by_key(|&k| std::cmp::Reverse((cur[k].degree(f).unwrap(), cur[k].terms().len())));
    let mut alive = vec![true; cur.len()];
    for k in order {
        let others: Vec<ModuleElement> =
            cur.iter().enumerate().filter(|(m, _)| *m != k && alive[*m]).map(|(_, g)| g.clone()).collect();
        if groebner::buchberger(f, &others)?.contains(&cur[k])? {
            alive[k] = false;
        }
    }
    let mut out = Vec::new();
    for (k, g) in cur.drain(..).enumerate() {
        if alive[k] {
            out.push(g);
        }
    }
    Ok(out)
}

/// Bounded complex of free modules in cohomological indexing: `terms[k]`
/// sits in degree `lo + k` and `maps[k]: terms[k] → terms[k + 1]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexDesc {
    lo: i64,
    terms: Vec<FreeModuleDesc>,
    maps: Vec<GradedMatrix>,
}

impl ComplexDesc {
    pub fn new(lo: i64, terms: Vec<FreeModuleDesc>, maps: Vec<GradedMatrix>) -> Result<Self> {
        if terms.is_empty() || maps.len() + 1 != terms.len() {
            return Err(Error::internal("complex needs one map between consecutive terms"));
        }
        for (k, m) in maps.iter().enumerate() {
            if *m.source() != terms[k] || *m.target() != terms[k + 1] {
                return Err(Error::AmbientMismatch(format!("differential {} does not match its terms", lo + k as i64)));
            }
        }
        Ok(ComplexDesc { lo, terms, maps })
    }

    /// Single free module in degree 0.
    pub fn single(f: FreeModuleDesc) -> Self {
        ComplexDesc { lo: 0, terms: vec![f], maps: vec![] }
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.terms.len() as i64 - 1
    }

    pub fn term(&self, q: i64) -> Option<&FreeModuleDesc> {
        if q < self.lo || q > self.hi() {
            None
        } else {
            Some(&self.terms[(q - self.lo) as usize])
        }
    }

    /// Differential `d^q: C^q → C^{q+1}` when both ends are present.
    pub fn differential(&self, q: i64) -> Option<&GradedMatrix> {
        if q < self.lo || q >= self.hi() {
            None
        } else {
            Some(&self.maps[(q - self.lo) as usize])
        }
    }

    pub fn terms(&self) -> &[FreeModuleDesc] {
        &self.terms
    }

    pub fn maps(&self) -> &[GradedMatrix] {
        &self.maps
    }

    pub fn ring(&self) -> &RingRef {
        self.terms[0].ring()
    }

    /// Exact check of `d^{q+1} ∘ d^q = 0` everywhere.
    pub fn is_complex(&self) -> Result<bool> {
        for w in self.maps.windows(2) {
            if !w[1].compose(&w[0])?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Length of a resolution (`-lo` when `hi = 0`).
    pub fn length(&self) -> usize {
        self.terms.len() - 1
    }

    /// Applies a ring map to every differential.
    pub fn substitute(&self, ring: &RingRef, images: &[Polynomial]) -> Result<ComplexDesc> {
        let terms = self.terms.iter().map(|t| t.with_ring(ring)).collect();
        let maps = self.maps.iter().map(|m| m.substitute(ring, images)).collect::<Result<Vec<_>>>()?;
        ComplexDesc::new(self.lo, terms, maps)
    }

    /// The complex viewed as a complex of (free) finitely presented modules.
    pub fn as_module_complex(&self) -> ModuleComplex {
        ModuleComplex {
            lo: self.lo,
            terms: self.terms.iter().map(|t| (t.clone(), Vec::new())).collect(),
            maps: self.maps.clone(),
        }
    }
}

/// Free resolution `0 → F_L → … → F_1 → F_0` of `M`, placed in cohomological
/// degrees `-L..=0`. Graded input yields a minimal resolution.
pub fn free_resolution(m: &FPModule, max_len: usize) -> Result<ComplexDesc> {
    let ring = m.ring().clone();
    let pres = prune(m.presentation());
    let f0 = pres.target.clone();
    let first = select_generators(m.mode, &f0, pres.columns())?;
    let mut maps: Vec<GradedMatrix> = Vec::new();
    if !first.is_empty() {
        let src = FreeModuleDesc::new(&ring, groebner::generator_degrees(&f0, &first));
        maps.push(GradedMatrix::new(src, f0.clone(), first)?);
    }
    while let Some(last) = maps.last() {
        let (src, syz) = groebner::syzygies(&last.target, &last.columns, Some(last.source.twists()))?;
        let gens = select_generators(m.mode, &src, &syz)?;
        if gens.is_empty() {
            break;
        }
        if maps.len() >= max_len {
            return Err(Error::internal(format!("free resolution longer than {max_len}")));
        }
        let next_src = FreeModuleDesc::new(&ring, groebner::generator_degrees(&src, &gens));
        maps.push(GradedMatrix::new(next_src, src, gens)?);
    }
    // maps[k]: F_{k+1} → F_k; cohomological order runs F_L → … → F_0
    maps.reverse();
    let mut terms: Vec<FreeModuleDesc> = maps.iter().map(|d| d.source.clone()).collect();
    terms.push(f0);
    let lo = -(maps.len() as i64);
    ComplexDesc::new(lo, terms, maps)
}

fn select_generators(mode: Mode, f: &FreeModuleDesc, gens: &[ModuleElement]) -> Result<Vec<ModuleElement>> {
    match mode {
        Mode::Graded => minimal_generators(f, gens),
        Mode::Ungraded => irredundant_generators(f, gens),
    }
}

/// Default resolution length bound: number of variables plus slack.
pub fn default_max_len(ring: &RingRef) -> usize {
    ring.nvars() + 2
}

/// Complex of finitely presented modules `H_q / R_q` with maps lifted to the
/// ambient free modules.
#[derive(Clone, Debug)]
pub struct ModuleComplex {
    lo: i64,
    terms: Vec<(FreeModuleDesc, Vec<ModuleElement>)>,
    maps: Vec<GradedMatrix>,
}

impl ModuleComplex {
    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.terms.len() as i64 - 1
    }

    pub fn term(&self, q: i64) -> Option<&(FreeModuleDesc, Vec<ModuleElement>)> {
        if q < self.lo || q > self.hi() {
            None
        } else {
            Some(&self.terms[(q - self.lo) as usize])
        }
    }

    pub fn differential(&self, q: i64) -> Option<&GradedMatrix> {
        if q < self.lo || q >= self.hi() {
            None
        } else {
            Some(&self.maps[(q - self.lo) as usize])
        }
    }

    /// Exact check that consecutive lifted maps compose into the relations.
    pub fn is_complex(&self) -> Result<bool> {
        for k in 0..self.maps.len().saturating_sub(1) {
            let comp = self.maps[k + 1].compose(&self.maps[k])?;
            let (amb, rel) = &self.terms[k + 2];
            let gb = groebner::buchberger(amb, rel)?;
            if !groebner::is_zero_quotient(comp.columns(), &gb)? {
                return Ok(false);
            }
        }
        for (k, m) in self.maps.iter().enumerate() {
            // relations must map into relations
            let (amb, rel) = &self.terms[k + 1];
            let gb = groebner::buchberger(amb, rel)?;
            let imgs: Vec<ModuleElement> = self.terms[k].1.iter().map(|r| m.apply(r)).collect();
            if !groebner::is_zero_quotient(&imgs, &gb)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// `Hom(C, N)` for a bounded free complex `C`: the term in degree `q` is
/// `Hom(C^{-q}, N) = ⊕_j N(a_j)` over the twists `a_j` of `C^{-q}`, and the
/// maps are transposed differentials acting blockwise on presentations.
pub fn hom_complex(c: &ComplexDesc, n: &FPModule) -> Result<ModuleComplex> {
    let ring = n.ring().clone();
    if !crate::poly::same_ring(c.ring(), &ring) {
        return Err(Error::RingMismatch(format!("{} vs {ring}", c.ring())));
    }
    let g = n.generators();
    let rel = n.presentation().columns();
    let m = g.rank();
    let hom_term = |f: &FreeModuleDesc| -> (FreeModuleDesc, Vec<ModuleElement>) {
        let mut twists = Vec::with_capacity(f.rank() * m);
        for a in f.twists() {
            twists.extend(g.twists().iter().map(|b| b - a));
        }
        let amb = FreeModuleDesc::new(&ring, twists);
        let mut rels = Vec::new();
        for j in 0..f.rank() {
            for r in rel {
                if !r.is_zero() {
                    rels.push(r.shift_components(j * m));
                }
            }
        }
        (amb, rels)
    };
    // Hom degree q = -p for C^p; list from lowest q = -hi to highest q = -lo.
    let mut terms = Vec::new();
    for p in (c.lo()..=c.hi()).rev() {
        terms.push(hom_term(c.term(p).unwrap()));
    }
    let mut maps = Vec::new();
    for p in (c.lo() + 1..=c.hi()).rev() {
        // δ: Hom(C^p, N) → Hom(C^{p-1}, N), induced by d: C^{p-1} → C^p
        let d = c.differential(p - 1).unwrap();
        let src = &terms[(c.hi() - p) as usize].0;
        let tgt = &terms[(c.hi() - p + 1) as usize].0;
        let entries = d.entries();
        let mut columns = Vec::with_capacity(src.rank());
        for j in 0..d.nrows() {
            for l in 0..m {
                let mut col = ModuleElement::zero();
                for (i, e) in entries[j].iter().enumerate() {
                    if !e.is_zero() {
                        col = col.add(tgt, &tgt.basis(i * m + l).mul_poly(tgt, e));
                    }
                }
                columns.push(col);
            }
        }
        maps.push(GradedMatrix::new(src.clone(), tgt.clone(), columns)?);
    }
    Ok(ModuleComplex { lo: -c.hi(), terms, maps })
}

/// Presentation of the subquotient `K / L` of a free module, where `L ⊆ K`
/// are given by generators.
pub fn subquotient(f: &FreeModuleDesc, k: &[ModuleElement], l: &[ModuleElement], mode: Mode) -> Result<FPModule> {
    let ring = f.ring().clone();
    let lgb = groebner::buchberger(f, l)?;
    let mut kgens = Vec::new();
    for g in k {
        let nf = lgb.normal_form(f, g)?;
        if !nf.is_zero() {
            kgens.push(nf);
        }
    }
    let kgens = match mode {
        Mode::Graded => {
            let mut all: Vec<ModuleElement> = lgb.generators().to_vec();
            let base = all.len();
            all.extend(kgens.iter().cloned());
            // keep only generators that are new modulo L
            let min = minimal_generators(f, &all)?;
            let _ = base;
            let mut chosen = Vec::new();
            for g in min {
                if !lgb.contains(&g)? {
                    chosen.push(lgb.normal_form(f, &g)?);
                }
            }
            chosen
        }
        Mode::Ungraded => kgens,
    };
    let s = kgens.len();
    let gen_twists = groebner::generator_degrees(f, &kgens);
    let gens_free = FreeModuleDesc::new(&ring, gen_twists.clone());
    if s == 0 {
        return FPModule::new(GradedMatrix::zero_map(FreeModuleDesc::new(&ring, vec![]), gens_free), mode);
    }
    let mut all = kgens.clone();
    all.extend(lgb.generators().iter().cloned());
    let mut twists = gen_twists;
    twists.extend(groebner::generator_degrees(f, lgb.generators()));
    let (_, syz) = groebner::syzygies(f, &all, Some(&twists))?;
    let rels: Vec<ModuleElement> = syz.iter().map(|v| v.project(0, s)).filter(|v| !v.is_zero()).collect();
    let rels = match mode {
        Mode::Graded => minimal_generators(&gens_free, &rels)?,
        Mode::Ungraded => rels,
    };
    let pres = GradedMatrix::from_columns(gens_free, rels);
    FPModule::new(prune(&pres), mode)
}

/// Cohomology `ker δ^q / im δ^{q-1}` of a module complex, as a finitely
/// presented module.
pub fn cohomology_at(h: &ModuleComplex, q: i64, mode: Mode) -> Result<FPModule> {
    let ring = h.terms[0].0.ring().clone();
    let Some((amb, rel)) = h.term(q) else {
        return Ok(FPModule::free(FreeModuleDesc::new(&ring, vec![]), mode));
    };
    let kernel: Vec<ModuleElement> = match (h.differential(q), h.term(q + 1)) {
        (Some(d), Some((next_amb, next_rel))) => {
            let r = amb.rank();
            let mut gens: Vec<ModuleElement> = d.columns().to_vec();
            gens.extend(next_rel.iter().cloned());
            let mut twists = amb.twists().to_vec();
            twists.extend(groebner::generator_degrees(next_amb, next_rel));
            let (_, syz) = groebner::syzygies(next_amb, &gens, Some(&twists))?;
            syz.iter().map(|v| v.project(0, r)).filter(|v| !v.is_zero()).collect()
        }
        _ => (0..amb.rank()).map(|i| amb.basis(i)).collect(),
    };
    let mut image: Vec<ModuleElement> = rel.clone();
    if let Some(d) = h.differential(q - 1) {
        image.extend(d.columns().iter().filter(|c| !c.is_zero()).cloned());
    }
    subquotient(amb, &kernel, &image, mode)
}

/// Dimension data of one Ext module.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExtDims {
    /// Dimensions for degrees `lo..=lo + values.len() - 1`.
    Graded { lo: i64, values: Vec<u64> },
    /// Total dimension, `None` when infinite.
    Ungraded(Option<u64>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtProfile {
    pub q: i64,
    pub vanishes: bool,
    pub dims: ExtDims,
}

impl ExtProfile {
    /// Nonzero entries of a graded table as `(degree, dim)` pairs.
    pub fn support(&self) -> Vec<(i64, u64)> {
        match &self.dims {
            ExtDims::Graded { lo, values } => {
                values.iter().enumerate().filter(|(_, v)| **v > 0).map(|(k, v)| (lo + k as i64, *v)).collect()
            }
            ExtDims::Ungraded(_) => Vec::new(),
        }
    }
}

/// Resolution of `M` and `Hom(resolution, N)`, reusable across indices.
pub struct ExtComputation {
    pub resolution: ComplexDesc,
    pub hom: ModuleComplex,
    mode: Mode,
}

impl ExtComputation {
    pub fn new(m: &FPModule, n: &FPModule) -> Result<Self> {
        if !crate::poly::same_ring(m.ring(), n.ring()) {
            return Err(Error::RingMismatch(format!("{} vs {}", m.ring(), n.ring())));
        }
        let mode = if m.mode() == Mode::Graded && n.mode() == Mode::Graded { Mode::Graded } else { Mode::Ungraded };
        let m = m.with_mode(mode)?;
        let resolution = free_resolution(&m, default_max_len(m.ring()))?;
        let hom = hom_complex(&resolution, n)?;
        Ok(ExtComputation { resolution, hom, mode })
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn module(&self, q: i64) -> Result<FPModule> {
        cohomology_at(&self.hom, q, self.mode)
    }

    pub fn profile(&self, q: i64, window: (i64, i64)) -> Result<ExtProfile> {
        let e = self.module(q)?;
        profile_of(&e, q, window)
    }

    /// Largest index worth inspecting: beyond it every Ext vanishes.
    pub fn top_index(&self) -> i64 {
        self.hom.hi()
    }
}

/// Dimension profile of a computed cohomology module.
pub fn profile_of(e: &FPModule, q: i64, window: (i64, i64)) -> Result<ExtProfile> {
    let vanishes = e.is_zero()?;
    let dims = match e.mode() {
        Mode::Graded => ExtDims::Graded { lo: window.0, values: e.hilbert_profile(window.0, window.1)? },
        Mode::Ungraded => ExtDims::Ungraded(e.dimension()?),
    };
    Ok(ExtProfile { q, vanishes, dims })
}

/// `Ext^q(M, N)`: graded table over `window` when both modules are graded,
/// total dimension otherwise.
pub fn ext_profile(m: &FPModule, n: &FPModule, q: i64, window: (i64, i64)) -> Result<ExtProfile> {
    if q < 0 {
        return Err(Error::Usage(format!("Ext index {q} is negative")));
    }
    ExtComputation::new(m, n)?.profile(q, window)
}

/// True iff `Ext^q(M, N) = 0` for every `q > q0`.
pub fn ext_vanishes_above(m: &FPModule, n: &FPModule, q0: i64) -> Result<bool> {
    let ext = ExtComputation::new(m, n)?;
    let top = ext.top_index().max(m.ring().nvars() as i64);
    for q in (q0 + 1).max(0)..=top {
        if !ext.module(q)?.is_zero()? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldDesc;
    use crate::parse::parse_polynomial;
    use crate::poly::GradedRingDesc;

    fn ring(names: &[&str]) -> RingRef {
        GradedRingDesc::standard(FieldDesc::Rationals, names)
    }

    fn cyclic(r: &RingRef, gens: &[&str]) -> FPModule {
        let ps: Vec<Polynomial> = gens.iter().map(|s| parse_polynomial(r, s).unwrap()).collect();
        FPModule::cyclic(r, &ps, Mode::Graded).unwrap()
    }

    fn matrix(r: &RingRef, src: Vec<i64>, tgt: Vec<i64>, rows: &[&[&str]]) -> GradedMatrix {
        let entries: Vec<Vec<Polynomial>> =
            rows.iter().map(|row| row.iter().map(|s| parse_polynomial(r, s).unwrap()).collect()).collect();
        GradedMatrix::from_entries(FreeModuleDesc::new(r, src), FreeModuleDesc::new(r, tgt), &entries).unwrap()
    }

    #[test]
    fn validation() {
        let r = ring(&["x"]);
        assert!(validate_graded_matrix(&matrix(&r, vec![2], vec![0], &[&["x^2"]])).is_ok());
        let err = validate_graded_matrix(&matrix(&r, vec![2], vec![0], &[&["x"]])).unwrap_err();
        assert_eq!(err, Error::Degree { row: 0, col: 0, expected: 2, found: "1".into() });
        assert!(validate_graded_matrix(&matrix(&r, vec![3, 1], vec![0, 5], &[&["0", "0"], &["0", "0"]])).is_ok());
    }

    #[test]
    fn koszul_resolution_of_residue_field() {
        let r = ring(&["x", "y"]);
        let k = cyclic(&r, &["x", "y"]);
        let res = free_resolution(&k, 4).unwrap();
        assert_eq!(res.lo(), -2);
        assert_eq!(res.term(-2).unwrap().twists(), &[2]);
        assert_eq!(res.term(-1).unwrap().twists(), &[1, 1]);
        assert_eq!(res.term(0).unwrap().twists(), &[0]);
        assert!(res.is_complex().unwrap());
    }

    #[test]
    fn resolution_of_free_and_principal() {
        let r = ring(&["t"]);
        let free = FPModule::free(FreeModuleDesc::new(&r, vec![0, 3]), Mode::Graded);
        assert_eq!(free_resolution(&free, 3).unwrap().length(), 0);
        let m = cyclic(&r, &["t^2"]);
        let res = free_resolution(&m, 3).unwrap();
        assert_eq!(res.length(), 1);
        assert_eq!(res.term(-1).unwrap().twists(), &[2]);
    }

    #[test]
    fn unit_relations_are_pruned() {
        let r = ring(&["x", "y"]);
        // generators e0, e1 in degree 0 and 1; relation e0*x - e1 kills e1
        let m = FPModule::graded(matrix(&r, vec![1], vec![0, 1], &[&["x"], &["-1"]])).unwrap();
        let res = free_resolution(&m, 4).unwrap();
        assert_eq!(res.length(), 0);
        assert_eq!(res.term(0).unwrap().twists(), &[0]);
    }

    #[test]
    fn hom_of_rank_one_map() {
        let r = ring(&["t"]);
        let c = ComplexDesc::new(
            -1,
            vec![FreeModuleDesc::new(&r, vec![1]), FreeModuleDesc::new(&r, vec![0])],
            vec![matrix(&r, vec![1], vec![0], &[&["t"]])],
        )
        .unwrap();
        let a = FPModule::free(FreeModuleDesc::new(&r, vec![0]), Mode::Graded);
        let h = hom_complex(&c, &a).unwrap();
        assert_eq!(h.lo(), 0);
        assert_eq!(h.term(0).unwrap().0.twists(), &[0]);
        assert_eq!(h.term(1).unwrap().0.twists(), &[-1]);
        assert_eq!(h.differential(0).unwrap().entry(0, 0).to_string(), "t");
    }

    #[test]
    fn koszul_hom_and_top_cohomology() {
        let r = ring(&["x", "y"]);
        let res = free_resolution(&cyclic(&r, &["x", "y"]), 4).unwrap();
        let a = FPModule::free(FreeModuleDesc::new(&r, vec![0]), Mode::Graded);
        let h = hom_complex(&res, &a).unwrap();
        assert_eq!(h.term(0).unwrap().0.twists(), &[0]);
        assert_eq!(h.term(1).unwrap().0.twists(), &[-1, -1]);
        assert_eq!(h.term(2).unwrap().0.twists(), &[-2]);
        assert!(h.is_complex().unwrap());
        let h2 = cohomology_at(&h, 2, Mode::Graded).unwrap();
        assert_eq!(h2.hilbert_profile(-3, 0).unwrap(), vec![0, 1, 0, 0]);
        assert!(cohomology_at(&h, 1, Mode::Graded).unwrap().is_zero().unwrap());
        assert!(cohomology_at(&h, 0, Mode::Graded).unwrap().is_zero().unwrap());
    }

    #[test]
    fn ext_examples() {
        let r = ring(&["x", "y"]);
        let k = cyclic(&r, &["x", "y"]);
        let a = FPModule::free(FreeModuleDesc::new(&r, vec![0]), Mode::Graded);
        let e2 = ext_profile(&k, &a, 2, (-5, 5)).unwrap();
        assert_eq!(e2.support(), vec![(-2, 1)]);
        assert!(!e2.vanishes);
        assert!(ext_vanishes_above(&k, &a, 2).unwrap());
        assert!(!ext_vanishes_above(&k, &a, 1).unwrap());

        let t = ring(&["t"]);
        let kt = cyclic(&t, &["t"]);
        let at = FPModule::free(FreeModuleDesc::new(&t, vec![0]), Mode::Graded);
        assert_eq!(ext_profile(&kt, &at, 1, (-5, 5)).unwrap().support(), vec![(-1, 1)]);

        assert!(ext_profile(&a, &k, 1, (-5, 5)).unwrap().vanishes);
        assert!(ext_vanishes_above(&a, &k, 0).unwrap());
    }

    #[test]
    fn hom_of_cyclic_modules() {
        let r = ring(&["x", "y"]);
        let m = cyclic(&r, &["x"]);
        let e0 = ext_profile(&m, &m, 0, (0, 4)).unwrap();
        // Hom(A/(x), A/(x)) = A/(x) = k[y]
        assert_eq!(e0.dims, ExtDims::Graded { lo: 0, values: vec![1, 1, 1, 1, 1] });
    }

    #[test]
    fn ungraded_ext_dimensions() {
        let r = ring(&["x"]);
        let p = |s: &str| parse_polynomial(&r, s).unwrap();
        let m = FPModule::cyclic(&r, &[p("x^2 - 1")], Mode::Ungraded).unwrap();
        assert_eq!(ext_profile(&m, &m, 0, DEFAULT_WINDOW).unwrap().dims, ExtDims::Ungraded(Some(2)));
        assert_eq!(ext_profile(&m, &m, 1, DEFAULT_WINDOW).unwrap().dims, ExtDims::Ungraded(Some(2)));
        let a = FPModule::free(FreeModuleDesc::new(&r, vec![0]), Mode::Ungraded);
        assert_eq!(ext_profile(&m, &a, 0, DEFAULT_WINDOW).unwrap().dims, ExtDims::Ungraded(Some(0)));
        assert_eq!(ext_profile(&a, &a, 0, DEFAULT_WINDOW).unwrap().dims, ExtDims::Ungraded(None));
    }
}
