//! Degree-by-degree linear algebra over the coefficient field.
//!
//! A graded submodule `U ⊆ F` is known in degree `d` as the span of all
//! `m·g` with `g` a generator and `m` a monomial of the complementary
//! degree. Every quantity below (Hilbert functions, membership, syzygy
//! counts, exactness, Ext dimensions) reduces to ranks of such spans and
//! never touches a Gröbner basis.

#![allow(dead_code)]

pub mod suite;

use std::collections::HashMap;

use reesjump_core::homalg::{ComplexDesc, FPModule, GradedMatrix};
use reesjump_core::{FieldDesc, FreeModuleDesc, ModuleElement, Polynomial, RingRef, Scalar};

/// Exponent vectors of weighted degree `d`, enumerated independently of the
/// ring's own monomial tables.
pub fn exponents_of_degree(weights: &[u32], d: i64) -> Vec<Vec<u32>> {
    fn go(weights: &[u32], i: usize, rest: i64, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i == weights.len() {
            if rest == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let w = weights[i] as i64;
        let mut e = 0i64;
        while e * w <= rest {
            cur.push(e as u32);
            go(weights, i + 1, rest - e * w, cur, out);
            cur.pop();
            e += 1;
        }
    }
    let mut out = Vec::new();
    if d >= 0 {
        go(weights, 0, d, &mut Vec::new(), &mut out);
    }
    out
}

pub fn weights(ring: &RingRef) -> Vec<u32> {
    ring.vars().iter().map(|v| v.weight).collect()
}

/// Rank by Gaussian elimination.
pub fn rank(field: FieldDesc, mut rows: Vec<Vec<Scalar>>) -> usize {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !field.is_zero(&rows[i][c])) else { continue };
        rows.swap(r, p);
        let inv = field.inv(&rows[r][c]);
        let pivot: Vec<Scalar> = rows[r].iter().map(|x| field.mul(x, &inv)).collect();
        for i in 0..rows.len() {
            if i != r && !field.is_zero(&rows[i][c]) {
                let f = rows[i][c].clone();
                for k in c..ncols {
                    let t = field.mul(&f, &pivot[k]);
                    rows[i][k] = field.sub(&rows[i][k], &t);
                }
            }
        }
        rows[r] = pivot;
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    r
}

/// Basis `(component, exponents)` of the degree-`d` piece of a free module.
pub struct Piece {
    pub basis: Vec<(usize, Vec<u32>)>,
    index: HashMap<(usize, Vec<u32>), usize>,
}

impl Piece {
    pub fn new(f: &FreeModuleDesc, d: i64) -> Self {
        let w = weights(f.ring());
        let mut basis = Vec::new();
        for (i, a) in f.twists().iter().enumerate() {
            for e in exponents_of_degree(&w, d - a) {
                basis.push((i, e));
            }
        }
        let index = basis.iter().cloned().enumerate().map(|(k, b)| (b, k)).collect();
        Piece { basis, index }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Coordinates of `v`; `None` when `v` has a term outside this piece.
    pub fn coords(&self, field: FieldDesc, v: &ModuleElement) -> Option<Vec<Scalar>> {
        let mut out = vec![field.zero(); self.dim()];
        for t in v.terms() {
            let k = *self.index.get(&(t.comp, t.mon.exponents().to_vec()))?;
            out[k] = field.add(&out[k], &t.coef);
        }
        Some(out)
    }

    /// The basis element `k` as a module element.
    pub fn element(&self, f: &FreeModuleDesc, k: usize) -> ModuleElement {
        let (i, e) = &self.basis[k];
        let field = f.ring().field();
        f.basis(*i).mul_term(f, &field.one(), &f.ring().monomial(e))
    }
}

fn homogeneous_degree(f: &FreeModuleDesc, v: &ModuleElement) -> Option<i64> {
    let t = v.terms().first()?;
    Some(t.mon.degree() + f.twists()[t.comp])
}

/// Spanning rows of `U_d` for `U` generated by homogeneous `gens`.
pub fn span_rows(f: &FreeModuleDesc, gens: &[ModuleElement], d: i64) -> Vec<Vec<Scalar>> {
    let ring = f.ring();
    let field = ring.field();
    let piece = Piece::new(f, d);
    let w = weights(ring);
    let mut rows = Vec::new();
    for g in gens {
        let Some(e) = homogeneous_degree(f, g) else { continue };
        for m in exponents_of_degree(&w, d - e) {
            let v = g.mul_term(f, &field.one(), &ring.monomial(&m));
            rows.push(piece.coords(field, &v).expect("homogeneous generator"));
        }
    }
    rows
}

pub fn span_dim(f: &FreeModuleDesc, gens: &[ModuleElement], d: i64) -> usize {
    rank(f.ring().field(), span_rows(f, gens, d))
}

/// `dim (F/U)_d`.
pub fn quotient_dim(f: &FreeModuleDesc, gens: &[ModuleElement], d: i64) -> u64 {
    (Piece::new(f, d).dim() - span_dim(f, gens, d)) as u64
}

pub fn hilbert(m: &FPModule, lo: i64, hi: i64) -> Vec<u64> {
    let p = m.presentation();
    (lo..=hi).map(|d| quotient_dim(p.target(), p.columns(), d)).collect()
}

/// Whether a homogeneous `v` lies in the span of `gens`.
pub fn member(f: &FreeModuleDesc, gens: &[ModuleElement], v: &ModuleElement) -> bool {
    let Some(d) = homogeneous_degree(f, v) else { return true };
    let field = f.ring().field();
    let mut rows = span_rows(f, gens, d);
    let r = rank(field, rows.clone());
    rows.push(Piece::new(f, d).coords(field, v).expect("homogeneous element"));
    rank(field, rows) == r
}

/// Rank in degree `d` of the map `src → tgt` whose columns are `cols`.
pub fn map_rank(m: &GradedMatrix, d: i64) -> usize {
    span_dim(m.target(), m.columns(), d)
}

/// `dim ker(A^k → F)_d` for `e_j ↦ gens_j` with source twists `src`.
pub fn kernel_dim(f: &FreeModuleDesc, gens: &[ModuleElement], src: &[i64], d: i64) -> usize {
    let w = weights(f.ring());
    let dim_src: usize = src.iter().map(|a| exponents_of_degree(&w, d - a).len()).sum();
    dim_src - span_dim(f, gens, d)
}

/// Verifies that a resolution is a complex, exact in negative degrees,
/// resolves `m`, and (for graded input) is minimal. Returns a description of
/// the first defect.
pub fn check_resolution(res: &ComplexDesc, m: &FPModule, lo: i64, hi: i64) -> Result<(), String> {
    let field = m.ring().field();
    for q in res.lo()..res.hi() {
        let dq = res.differential(q).unwrap();
        if let Some(next) = res.differential(q + 1) {
            for c in dq.columns() {
                if !next.apply(c).is_zero() {
                    return Err(format!("d^{} ∘ d^{q} ≠ 0", q + 1));
                }
            }
        }
        for c in dq.columns() {
            if c.terms().iter().any(|t| t.mon.is_one() && !field.is_zero(&t.coef)) {
                return Err(format!("d^{q} has a unit entry"));
            }
        }
    }
    for d in lo..=hi {
        // Coker of the last map is M.
        let f0 = res.term(0).unwrap();
        let im0 = res.differential(-1).map_or(0, |m| map_rank(m, d));
        let h0 = Piece::new(f0, d).dim() - im0;
        let want = hilbert(m, d, d)[0] as usize;
        if h0 != want {
            return Err(format!("H^0 in degree {d}: {h0} vs {want}"));
        }
        for q in res.lo()..0 {
            let dq = res.differential(q).unwrap();
            let ker = Piece::new(dq.source(), d).dim() - map_rank(dq, d);
            let im = res.differential(q - 1).map_or(0, |m| map_rank(m, d));
            if ker != im {
                return Err(format!("H^{q} in degree {d}: ker {ker} vs im {im}"));
            }
        }
    }
    Ok(())
}

/// `Hom(F, N)_d = ⊕_i N_{d + a_i}` as the quotient `V / V0` with `V` a
/// direct sum of pieces of the ambient free module of `N`.
struct HomPiece {
    pieces: Vec<Piece>,
    offsets: Vec<usize>,
    dim: usize,
}

impl HomPiece {
    fn new(f: &FreeModuleDesc, g: &FreeModuleDesc, d: i64) -> Self {
        let pieces: Vec<Piece> = f.twists().iter().map(|a| Piece::new(g, d + a)).collect();
        let mut offsets = Vec::new();
        let mut dim = 0;
        for p in &pieces {
            offsets.push(dim);
            dim += p.dim();
        }
        HomPiece { pieces, offsets, dim }
    }

    /// Rows spanning `⊕_i R_{d + a_i}` for the relations `R` of `N`.
    fn relations(&self, f: &FreeModuleDesc, n: &FPModule, d: i64) -> Vec<Vec<Scalar>> {
        let field = n.ring().field();
        let mut rows = Vec::new();
        for (i, a) in f.twists().iter().enumerate() {
            for r in span_rows(n.presentation().target(), n.presentation().columns(), d + a) {
                let mut row = vec![field.zero(); self.dim];
                row[self.offsets[i]..self.offsets[i] + r.len()].clone_from_slice(&r);
                rows.push(row);
            }
        }
        rows
    }
}

/// Images of a basis of `Hom(C^q, N)_d` under `φ ↦ φ ∘ d^q`.
fn pullback_rows(dq: &GradedMatrix, n: &FPModule, src: &HomPiece, tgt: &HomPiece) -> Vec<Vec<Scalar>> {
    let g = n.presentation().target();
    let field = n.ring().field();
    let mut rows = Vec::new();
    // `src` indexes generators of the target of `dq`, `tgt` those of its source.
    for (i, piece) in src.pieces.iter().enumerate() {
        for k in 0..piece.dim() {
            let v = piece.element(g, k);
            let mut row = vec![field.zero(); tgt.dim];
            for j in 0..dq.ncols() {
                let p: Polynomial = dq.entry(i, j);
                if p.is_zero() {
                    continue;
                }
                let w = v.mul_poly(g, &p);
                let c = tgt.pieces[j].coords(field, &w).expect("degree-compatible entry");
                row[tgt.offsets[j]..tgt.offsets[j] + c.len()].clone_from_slice(&c);
            }
            rows.push(row);
        }
    }
    rows
}

fn stacked(a: &[Vec<Scalar>], b: &[Vec<Scalar>]) -> Vec<Vec<Scalar>> {
    a.iter().chain(b).cloned().collect()
}

/// `dim Ext^q(M, N)_d` from a free resolution of `M`, degree by degree.
pub fn ext_dim(res: &ComplexDesc, n: &FPModule, q: i64, d: i64) -> u64 {
    let field = n.ring().field();
    let g = n.presentation().target();
    let cq = -q;
    let Some(fq) = res.term(cq) else { return 0 };
    let v = HomPiece::new(fq, g, d);
    let v0 = v.relations(fq, n, d);
    let rank_v0 = rank(field, v0.clone());
    // Outgoing map Hom(C^{cq}) → Hom(C^{cq-1}) induced by d^{cq-1}.
    let ker = match res.differential(cq - 1) {
        None => v.dim - rank_v0,
        Some(dm) => {
            let w = HomPiece::new(dm.source(), g, d);
            let w0 = w.relations(dm.source(), n, d);
            let img = pullback_rows(dm, n, &v, &w);
            let r_w0 = rank(field, w0.clone());
            let r_img = rank(field, stacked(&img, &w0)) - r_w0;
            v.dim - rank_v0 - r_img
        }
    };
    // Incoming map Hom(C^{cq+1}) → Hom(C^{cq}) induced by d^{cq}.
    let im = match res.differential(cq) {
        None => 0,
        Some(dm) => {
            let u = HomPiece::new(dm.target(), g, d);
            let img = pullback_rows(dm, n, &u, &v);
            rank(field, stacked(&img, &v0)) - rank_v0
        }
    };
    (ker - im) as u64
}
