//! Linear algebra over the principal ideal domains `k[t]` and `k[t, t⁻¹]`,
//! and Ext into the non-finitely generated modules `J = k[t, t⁻¹]` and
//! `E = k[t, t⁻¹]/k[t]`.
//!
//! The two injectives are described by how `t` acts on a monomial basis, never
//! by presentations: `J` has basis `t^d` for every `d` with `t` invertible,
//! `E` has basis `t^d` for `d < 0` with `t · t^{-1} = 0`.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{FieldDesc, Scalar};
use crate::homalg::{self, FPModule, Mode};
use crate::poly::{GradedRingDesc, Polynomial, RingRef};

/// Dense univariate polynomial, coefficients from low to high degree with no
/// trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UPoly {
    field: FieldDesc,
    coeffs: Vec<Scalar>,
}

impl UPoly {
    pub fn new(field: FieldDesc, mut coeffs: Vec<Scalar>) -> Self {
        while coeffs.last().is_some_and(|c| field.is_zero(c)) {
            coeffs.pop();
        }
        UPoly { field, coeffs }
    }

    pub fn zero(field: FieldDesc) -> Self {
        UPoly { field, coeffs: Vec::new() }
    }

    pub fn constant(field: FieldDesc, c: Scalar) -> Self {
        UPoly::new(field, vec![c])
    }

    pub fn one(field: FieldDesc) -> Self {
        UPoly::constant(field, field.one())
    }

    /// `c · t^k`.
    pub fn monomial(field: FieldDesc, c: Scalar, k: usize) -> Self {
        let mut coeffs = vec![field.zero(); k];
        coeffs.push(c);
        UPoly::new(field, coeffs)
    }

    /// Builds `Σ c_k t^k` from small integers.
    pub fn from_ints(field: FieldDesc, cs: &[i64]) -> Self {
        UPoly::new(field, cs.iter().map(|c| field.from_i64(*c)).collect())
    }

    /// Reads a polynomial of a one-variable ring.
    pub fn from_polynomial(p: &Polynomial) -> Result<Self> {
        let ring = p.ring();
        if ring.nvars() != 1 {
            return Err(Error::RingMismatch(format!("{ring} is not a polynomial ring in one variable")));
        }
        let field = ring.field();
        let mut coeffs = Vec::new();
        for (m, c) in p.terms() {
            let e = m.exponents()[0] as usize;
            if coeffs.len() <= e {
                coeffs.resize(e + 1, field.zero());
            }
            coeffs[e] = c.clone();
        }
        Ok(UPoly::new(field, coeffs))
    }

    pub fn to_polynomial(&self, ring: &RingRef) -> Polynomial {
        let terms =
            self.coeffs.iter().enumerate().map(|(k, c)| (ring.monomial(&[k as u32]), c.clone())).collect::<Vec<_>>();
        Polynomial::from_terms(ring, terms)
    }

    pub fn field(&self) -> FieldDesc {
        self.field
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Option<&Scalar> {
        self.coeffs.last()
    }

    pub fn is_unit(&self) -> bool {
        self.coeffs.len() == 1
    }

    /// Multiplicity of `t` as a factor; zero for the zero polynomial.
    pub fn ord_t(&self) -> usize {
        self.coeffs.iter().take_while(|c| self.field.is_zero(c)).count().min(self.coeffs.len())
    }

    /// Splits `t^k · u` with `u(0) ≠ 0`.
    pub fn strip_t(&self) -> (usize, UPoly) {
        let k = if self.is_zero() { 0 } else { self.ord_t() };
        (k, UPoly { field: self.field, coeffs: self.coeffs[k..].to_vec() })
    }

    pub fn add(&self, other: &UPoly) -> UPoly {
        let f = self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let z = f.zero();
        let cs = (0..n).map(|k| f.add(self.coeffs.get(k).unwrap_or(&z), other.coeffs.get(k).unwrap_or(&z))).collect();
        UPoly::new(f, cs)
    }

    pub fn neg(&self) -> UPoly {
        UPoly { field: self.field, coeffs: self.coeffs.iter().map(|c| self.field.neg(c)).collect() }
    }

    pub fn sub(&self, other: &UPoly) -> UPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &UPoly) -> UPoly {
        let f = self.field;
        if self.is_zero() || other.is_zero() {
            return UPoly::zero(f);
        }
        let mut cs = vec![f.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if f.is_zero(a) {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                cs[i + j] = f.add(&cs[i + j], &f.mul(a, b));
            }
        }
        UPoly::new(f, cs)
    }

    pub fn scale(&self, c: &Scalar) -> UPoly {
        UPoly::new(self.field, self.coeffs.iter().map(|a| self.field.mul(a, c)).collect())
    }

    pub fn shift(&self, k: usize) -> UPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut cs = vec![self.field.zero(); k];
        cs.extend(self.coeffs.iter().cloned());
        UPoly { field: self.field, coeffs: cs }
    }

    pub fn monic(&self) -> UPoly {
        match self.lead() {
            None => self.clone(),
            Some(l) => self.scale(&self.field.inv(l)),
        }
    }

    /// Euclidean division; `divisor` must be nonzero.
    pub fn divrem(&self, divisor: &UPoly) -> (UPoly, UPoly) {
        let f = self.field;
        let dd = divisor.degree().expect("division by zero polynomial");
        let inv = f.inv(divisor.lead().unwrap());
        let mut rem = self.coeffs.clone();
        let mut quot = vec![f.zero(); rem.len().saturating_sub(dd)];
        while rem.len() > dd {
            let k = rem.len() - 1 - dd;
            let c = f.mul(rem.last().unwrap(), &inv);
            for (j, b) in divisor.coeffs.iter().enumerate() {
                rem[k + j] = f.sub(&rem[k + j], &f.mul(&c, b));
            }
            quot[k] = c;
            rem.pop();
            while rem.last().is_some_and(|x| f.is_zero(x)) {
                rem.pop();
            }
        }
        (UPoly::new(f, quot), UPoly::new(f, rem))
    }

    pub fn divides(&self, other: &UPoly) -> bool {
        if self.is_zero() {
            return other.is_zero();
        }
        other.divrem(self).1.is_zero()
    }

    /// Exact quotient; panics if the division leaves a remainder.
    fn exact_div(&self, divisor: &UPoly) -> UPoly {
        let (q, r) = self.divrem(divisor);
        debug_assert!(r.is_zero());
        q
    }
}

impl fmt::Display for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ring = GradedRingDesc::standard(self.field, &["t"]);
        write!(f, "{}", self.to_polynomial(&ring))
    }
}

/// Element `t^shift · core` of `k[t, t⁻¹]` with `core(0) ≠ 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LPoly {
    shift: i64,
    core: UPoly,
}

impl LPoly {
    pub fn new(shift: i64, p: UPoly) -> Self {
        if p.is_zero() {
            return LPoly { shift: 0, core: p };
        }
        let (k, core) = p.strip_t();
        LPoly { shift: shift + k as i64, core }
    }

    pub fn from_upoly(p: UPoly) -> Self {
        LPoly::new(0, p)
    }

    pub fn zero(field: FieldDesc) -> Self {
        LPoly::new(0, UPoly::zero(field))
    }

    pub fn one(field: FieldDesc) -> Self {
        LPoly::new(0, UPoly::one(field))
    }

    pub fn t_pow(field: FieldDesc, k: i64) -> Self {
        LPoly::new(k, UPoly::one(field))
    }

    pub fn shift(&self) -> i64 {
        self.shift
    }

    pub fn core(&self) -> &UPoly {
        &self.core
    }

    pub fn is_zero(&self) -> bool {
        self.core.is_zero()
    }

    /// Units of `k[t, t⁻¹]` are `c · t^k`.
    pub fn is_unit(&self) -> bool {
        self.core.is_unit()
    }

    /// The polynomial `t^shift · core` when `shift ≥ 0`.
    pub fn to_upoly(&self) -> Option<UPoly> {
        (self.shift >= 0).then(|| self.core.shift(self.shift as usize))
    }

    pub fn mul(&self, other: &LPoly) -> LPoly {
        LPoly::new(self.shift + other.shift, self.core.mul(&other.core))
    }

    pub fn add(&self, other: &LPoly) -> LPoly {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let s = self.shift.min(other.shift);
        let a = self.core.shift((self.shift - s) as usize);
        let b = other.core.shift((other.shift - s) as usize);
        LPoly::new(s, a.add(&b))
    }

    pub fn neg(&self) -> LPoly {
        LPoly { shift: self.shift, core: self.core.neg() }
    }

    pub fn sub(&self, other: &LPoly) -> LPoly {
        self.add(&other.neg())
    }
}

impl fmt::Display for LPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.shift {
            0 => write!(f, "{}", self.core),
            s => write!(f, "t^{s}*({})", self.core),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PidRing {
    Polynomial,
    Laurent,
}

/// Matrix over `k[t]` or `k[t, t⁻¹]`, stored row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PIDMatrix {
    ring: PidRing,
    field: FieldDesc,
    ncols: usize,
    rows: Vec<Vec<LPoly>>,
}

impl PIDMatrix {
    pub fn new(ring: PidRing, field: FieldDesc, nrows: usize, ncols: usize, rows: Vec<Vec<LPoly>>) -> Result<Self> {
        if rows.len() != nrows || rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::AmbientMismatch(format!("entry table is not {nrows}x{ncols}")));
        }
        if ring == PidRing::Polynomial && rows.iter().flatten().any(|e| e.shift < 0) {
            return Err(Error::RingMismatch("negative powers of t outside the Laurent ring".into()));
        }
        Ok(PIDMatrix { ring, field, ncols, rows })
    }

    pub fn from_upolys(ring: PidRing, field: FieldDesc, rows: Vec<Vec<UPoly>>) -> Self {
        let ncols = rows.first().map_or(0, |r| r.len());
        let rows = rows.into_iter().map(|r| r.into_iter().map(LPoly::from_upoly).collect()).collect();
        PIDMatrix { ring, field, ncols, rows }
    }

    /// Presentation matrix of a module over a one-variable ring: rows are
    /// generators, columns relations.
    pub fn presentation_of(m: &FPModule) -> Result<Self> {
        let rows: Vec<Vec<UPoly>> = m
            .presentation()
            .entries()
            .iter()
            .map(|row| row.iter().map(UPoly::from_polynomial).collect::<Result<Vec<_>>>())
            .collect::<Result<_>>()?;
        let field = m.ring().field();
        let ncols = m.presentation().ncols();
        let rows = rows.into_iter().map(|r| r.into_iter().map(LPoly::from_upoly).collect()).collect();
        Ok(PIDMatrix { ring: PidRing::Polynomial, field, ncols, rows })
    }

    pub fn ring(&self) -> PidRing {
        self.ring
    }

    pub fn field(&self) -> FieldDesc {
        self.field
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn entry(&self, i: usize, j: usize) -> &LPoly {
        &self.rows[i][j]
    }

    pub fn rows(&self) -> &[Vec<LPoly>] {
        &self.rows
    }

    pub fn transpose(&self) -> PIDMatrix {
        let rows = (0..self.ncols).map(|j| self.rows.iter().map(|r| r[j].clone()).collect()).collect();
        PIDMatrix { ring: self.ring, field: self.field, ncols: self.nrows(), rows }
    }

    pub fn with_ring(&self, ring: PidRing) -> Result<PIDMatrix> {
        PIDMatrix::new(ring, self.field, self.nrows(), self.ncols, self.rows.clone())
    }

    pub fn mul(&self, other: &PIDMatrix) -> Result<PIDMatrix> {
        if self.ncols != other.nrows() {
            return Err(Error::AmbientMismatch(format!(
                "{}x{} times {}x{}",
                self.nrows(),
                self.ncols,
                other.nrows(),
                other.ncols
            )));
        }
        let ring = if self.ring == PidRing::Laurent || other.ring == PidRing::Laurent {
            PidRing::Laurent
        } else {
            PidRing::Polynomial
        };
        let rows = self
            .rows
            .iter()
            .map(|r| {
                (0..other.ncols)
                    .map(|j| {
                        r.iter()
                            .zip(&other.rows)
                            .fold(LPoly::zero(self.field), |acc, (a, row)| acc.add(&a.mul(&row[j])))
                    })
                    .collect()
            })
            .collect();
        Ok(PIDMatrix { ring, field: self.field, ncols: other.ncols, rows })
    }

    /// Keeps the listed columns.
    pub fn select_columns(&self, cols: &[usize]) -> PIDMatrix {
        let rows = self.rows.iter().map(|r| cols.iter().map(|&j| r[j].clone()).collect()).collect();
        PIDMatrix { ring: self.ring, field: self.field, ncols: cols.len(), rows }
    }

    /// Determinant of a square matrix.
    pub fn determinant(&self) -> Result<LPoly> {
        if self.nrows() != self.ncols {
            return Err(Error::AmbientMismatch("determinant of a non-square matrix".into()));
        }
        let mut total_shift = 0;
        let mut rows = Vec::with_capacity(self.nrows());
        for r in &self.rows {
            let s = r.iter().filter(|e| !e.is_zero()).map(|e| e.shift).min().unwrap_or(0);
            total_shift += s;
            rows.push(r.iter().map(|e| LPoly::new(e.shift - s, e.core.clone()).to_upoly().unwrap()).collect());
        }
        Ok(LPoly::new(total_shift, bareiss_det(self.field, rows)))
    }
}

impl fmt::Display for PIDMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .rows
            .iter()
            .map(|r| format!("[{}]", r.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(", ")))
            .collect();
        write!(f, "[{}]", rows.join(", "))
    }
}

fn bareiss_det(field: FieldDesc, mut m: Vec<Vec<UPoly>>) -> UPoly {
    let n = m.len();
    if n == 0 {
        return UPoly::one(field);
    }
    let mut sign = false;
    let mut prev = UPoly::one(field);
    for k in 0..n {
        if m[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                return UPoly::zero(field);
            };
            m.swap(k, p);
            sign = !sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = m[i][j].mul(&m[k][k]).sub(&m[i][k].mul(&m[k][j]));
                m[i][j] = num.exact_div(&prev);
            }
            m[i][k] = UPoly::zero(field);
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if sign {
        d.neg()
    } else {
        d
    }
}

/// Smith normal form `U · A · V = diag(d_1, …, d_r, 0, …)` with
/// `d_i | d_{i+1}`, every `d_i` monic (and free of `t` over the Laurent ring).
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub input: PIDMatrix,
    pub invariant_factors: Vec<LPoly>,
    pub u: PIDMatrix,
    pub v: PIDMatrix,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.invariant_factors.len()
    }

    /// The diagonal matrix `U · A · V` should equal.
    pub fn diagonal(&self) -> PIDMatrix {
        let f = self.input.field;
        let (m, n) = (self.input.nrows(), self.input.ncols);
        let rows = (0..m)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j && i < self.rank() { self.invariant_factors[i].clone() } else { LPoly::zero(f) })
                    .collect()
            })
            .collect();
        PIDMatrix { ring: self.input.ring, field: f, ncols: n, rows }
    }

    /// Recomputes `U · A · V`, the determinants of the transforms and the
    /// divisibility chain.
    pub fn verify(&self) -> Result<bool> {
        let prod = self.u.mul(&self.input)?.mul(&self.v)?;
        if prod != self.diagonal() {
            return Ok(false);
        }
        let unit = |d: LPoly| match self.input.ring {
            PidRing::Polynomial => d.shift == 0 && d.is_unit(),
            PidRing::Laurent => d.is_unit(),
        };
        if !unit(self.u.determinant()?) || !unit(self.v.determinant()?) {
            return Ok(false);
        }
        let chain = self.invariant_factors.windows(2).all(|w| match self.input.ring {
            PidRing::Polynomial => w[0].to_upoly().unwrap().divides(&w[1].to_upoly().unwrap()),
            PidRing::Laurent => w[0].core.divides(&w[1].core),
        });
        let normalized = self.invariant_factors.iter().all(|d| {
            d.core.lead().is_some_and(|l| d.core.field.is_one(l))
                && (self.input.ring == PidRing::Polynomial || d.shift == 0)
        });
        Ok(chain && normalized)
    }
}

/// Smith form over `k[t]` of a polynomial matrix, with transforms.
fn smith_polynomial(
    field: FieldDesc,
    mut a: Vec<Vec<UPoly>>,
    ncols: usize,
) -> (Vec<UPoly>, Vec<Vec<UPoly>>, Vec<Vec<UPoly>>) {
    let m = a.len();
    let n = ncols;
    let ident = |k: usize| -> Vec<Vec<UPoly>> {
        (0..k).map(|i| (0..k).map(|j| if i == j { UPoly::one(field) } else { UPoly::zero(field) }).collect()).collect()
    };
    let mut u = ident(m);
    let mut v = ident(n);
    let row_axpy = |mat: &mut Vec<Vec<UPoly>>, dst: usize, src: usize, q: &UPoly| {
        for j in 0..mat[dst].len() {
            let t = mat[src][j].mul(q);
            mat[dst][j] = mat[dst][j].sub(&t);
        }
    };
    let col_axpy = |mat: &mut Vec<Vec<UPoly>>, dst: usize, src: usize, q: &UPoly| {
        for row in mat.iter_mut() {
            let t = row[src].mul(q);
            row[dst] = row[dst].sub(&t);
        }
    };
    let col_swap = |mat: &mut Vec<Vec<UPoly>>, x: usize, y: usize| {
        for row in mat.iter_mut() {
            row.swap(x, y);
        }
    };
    let mut factors = Vec::new();
    for k in 0..m.min(n) {
        let best = (k..m)
            .flat_map(|i| (k..n).map(move |j| (i, j)))
            .filter(|&(i, j)| !a[i][j].is_zero())
            .min_by_key(|&(i, j)| a[i][j].degree());
        let Some((pi, pj)) = best else { break };
        a.swap(k, pi);
        u.swap(k, pi);
        col_swap(&mut a, k, pj);
        col_swap(&mut v, k, pj);
        loop {
            let mut moved = false;
            for i in k + 1..m {
                if a[i][k].is_zero() {
                    continue;
                }
                let (q, r) = a[i][k].divrem(&a[k][k]);
                row_axpy(&mut a, i, k, &q);
                row_axpy(&mut u, i, k, &q);
                if !r.is_zero() {
                    a.swap(k, i);
                    u.swap(k, i);
                    moved = true;
                    break;
                }
            }
            if moved {
                continue;
            }
            for j in k + 1..n {
                if a[k][j].is_zero() {
                    continue;
                }
                let (q, r) = a[k][j].divrem(&a[k][k]);
                col_axpy(&mut a, j, k, &q);
                col_axpy(&mut v, j, k, &q);
                if !r.is_zero() {
                    col_swap(&mut a, k, j);
                    col_swap(&mut v, k, j);
                    moved = true;
                    break;
                }
            }
            if moved {
                continue;
            }
            // row and column cleared; enforce divisibility of the rest
            let bad = (k + 1..m).find(|&i| (k + 1..n).any(|j| !a[k][k].divides(&a[i][j])));
            match bad {
                Some(i) => {
                    let one = UPoly::one(field).neg();
                    row_axpy(&mut a, k, i, &one);
                    row_axpy(&mut u, k, i, &one);
                }
                None => break,
            }
        }
        let inv = field.inv(a[k][k].lead().unwrap());
        for x in a[k].iter_mut() {
            *x = x.scale(&inv);
        }
        for x in u[k].iter_mut() {
            *x = x.scale(&inv);
        }
        factors.push(a[k][k].clone());
    }
    (factors, u, v)
}

/// Exact Smith normal form with unimodular transforms.
pub fn smith_normal_form(a: &PIDMatrix) -> SmithForm {
    let f = a.field;
    let m = a.nrows();
    // clear negative powers row-uniformly: A' = t^{-s} A with s the least shift
    let s = a.rows.iter().flatten().filter(|e| !e.is_zero()).map(|e| e.shift).min().unwrap_or(0).min(0);
    let rows: Vec<Vec<UPoly>> = a
        .rows
        .iter()
        .map(|r| r.iter().map(|e| LPoly::new(e.shift - s, e.core.clone()).to_upoly().unwrap()).collect())
        .collect();
    let (factors, u, v) = smith_polynomial(f, rows, a.ncols);
    let mut u = PIDMatrix::from_upolys(a.ring, f, u);
    let v = PIDMatrix {
        ring: a.ring,
        field: f,
        ncols: a.ncols,
        rows: v.into_iter().map(|r| r.into_iter().map(LPoly::from_upoly).collect()).collect(),
    };
    let mut invariant_factors = Vec::with_capacity(factors.len());
    for (i, d) in factors.into_iter().enumerate() {
        match a.ring {
            PidRing::Polynomial => invariant_factors.push(LPoly::from_upoly(d)),
            PidRing::Laurent => {
                let (k, core) = d.strip_t();
                let scale = LPoly::t_pow(f, -s - k as i64);
                for x in u.rows[i].iter_mut() {
                    *x = x.mul(&scale);
                }
                invariant_factors.push(LPoly::new(0, core));
            }
        }
    }
    u.ncols = m;
    SmithForm { input: a.clone(), invariant_factors, u, v }
}

/// `dim_k k[t, t⁻¹]/(d) = deg d − ord_t d` for `d ≠ 0`.
pub fn laurent_quotient_dimension(d: &UPoly) -> u64 {
    let (k, _) = d.strip_t();
    (d.degree().unwrap_or(0) - k) as u64
}

/// Intensional models of modules over `k[t]` that are not finitely generated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum InjectiveModel {
    /// `J = k[t, t⁻¹]`, basis `t^d` for all `d`.
    J,
    /// `k[t, t⁻¹]/k[t]`, basis `t^d` for `d < 0`.
    TorsionAtZero,
    /// `k[t]` itself: not injective, used as a negative control.
    PolynomialControl,
}

impl InjectiveModel {
    pub fn name(&self) -> &'static str {
        match self {
            InjectiveModel::J => "J",
            InjectiveModel::TorsionAtZero => "Izero",
            InjectiveModel::PolynomialControl => "k[t]",
        }
    }

    /// Dimension of the degree-`d` piece.
    pub fn piece_dim(&self, d: i64) -> u64 {
        let present = match self {
            InjectiveModel::J => true,
            InjectiveModel::TorsionAtZero => d < 0,
            InjectiveModel::PolynomialControl => d >= 0,
        };
        present as u64
    }

    /// Whether `t^n · t^d` is the nonzero basis element `t^{d+n}` (`n ≥ 0`).
    pub fn acts(&self, n: i64, d: i64) -> bool {
        self.piece_dim(d) == 1 && self.piece_dim(d + n) == 1
    }
}

/// `M ≅ ⊕ k[t]/(d_i) ⊕ k[t]^free`.
#[derive(Clone, Debug)]
pub struct PidDecomposition {
    pub factors: Vec<UPoly>,
    pub free_rank: usize,
    pub smith: SmithForm,
}

pub fn decompose(m: &FPModule) -> Result<PidDecomposition> {
    let p = PIDMatrix::presentation_of(m)?;
    let smith = smith_normal_form(&p);
    let factors: Vec<UPoly> = smith.invariant_factors.iter().map(|d| d.to_upoly().unwrap()).collect();
    let free_rank = p.nrows() - factors.len();
    Ok(PidDecomposition { factors, free_rank, smith })
}

/// `dim_k Ext^q_{k[t]}(M, model)`, `None` when infinite.
///
/// `M` is resolved by `0 → k[t]^r → k[t]^g → M → 0` with the injective
/// columns `P·V` of the Smith transform. Against `J` the dual map is brought
/// to Smith form over the Laurent ring; against the torsion model and the
/// control the invariant factors are inspected directly.
pub fn ext_against_injective_model(m: &FPModule, model: InjectiveModel, q: i64) -> Result<Option<u64>> {
    let dec = decompose(m)?;
    if !(0..=1).contains(&q) {
        return Ok(Some(0));
    }
    let free = dec.free_rank > 0;
    Ok(match (model, q) {
        (InjectiveModel::J, 0) | (InjectiveModel::PolynomialControl, 0) => (!free).then_some(0),
        (InjectiveModel::J, _) => {
            let p = &dec.smith.input;
            let cols: Vec<usize> = (0..dec.factors.len()).collect();
            let minimal = p.mul(&dec.smith.v.select_columns(&cols))?;
            let dual = minimal.transpose().with_ring(PidRing::Laurent)?;
            let sf = smith_normal_form(&dual);
            Some(sf.invariant_factors.iter().map(|d| laurent_quotient_dimension(d.core())).sum())
        }
        (InjectiveModel::TorsionAtZero, 0) => (!free).then(|| dec.factors.iter().map(|d| d.ord_t() as u64).sum()),
        (InjectiveModel::TorsionAtZero, _) => Some(0),
        (InjectiveModel::PolynomialControl, _) => Some(dec.factors.iter().map(|d| d.degree().unwrap() as u64).sum()),
    })
}

/// Ext into `J` computed from the presentation exactly as given: the
/// transposed presentation is put in Smith form over the Laurent ring and
/// the kernel of the next dual map is its saturation.
pub fn ext_j_from_presentation(m: &FPModule, q: i64) -> Result<Option<u64>> {
    let p = PIDMatrix::presentation_of(m)?;
    let dual = p.transpose().with_ring(PidRing::Laurent)?;
    let sf = smith_normal_form(&dual);
    Ok(match q {
        0 => (p.nrows() == sf.rank()).then_some(0),
        1 => Some(sf.invariant_factors.iter().map(|d| laurent_quotient_dimension(d.core())).sum()),
        _ => Some(0),
    })
}

/// Outcome of the graded Baer test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BaerOutcome {
    pub pass: bool,
    /// First `(n, d)` where `t^n` fails to reach the degree-`d` piece.
    pub failure: Option<(i64, i64)>,
}

/// Graded Baer criterion over `k[t]`: every degree-preserving map
/// `(t^n) → model` extends to `k[t]` iff `t^n` maps each graded piece onto the
/// piece `n` degrees higher. Checked for `n ≤ nmax` and target degrees in
/// `window`.
pub fn graded_baer_check(model: InjectiveModel, nmax: i64, window: (i64, i64)) -> Result<BaerOutcome> {
    if nmax < 1 {
        return Err(Error::Usage(format!("nmax must be at least 1, got {nmax}")));
    }
    for n in 1..=nmax {
        for d in window.0..=window.1 {
            if model.piece_dim(d) == 1 && !model.acts(n, d - n) {
                return Ok(BaerOutcome { pass: false, failure: Some((n, d)) });
            }
        }
    }
    Ok(BaerOutcome { pass: true, failure: None })
}

pub fn graded_baer_check_j(nmax: i64) -> Result<BaerOutcome> {
    graded_baer_check(InjectiveModel::J, nmax, homalg::DEFAULT_WINDOW)
}

fn scalar_rank(field: FieldDesc, mut m: Vec<Vec<Scalar>>) -> usize {
    let ncols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..ncols {
        let Some(p) = (rank..m.len()).find(|&i| !field.is_zero(&m[i][c])) else { continue };
        m.swap(rank, p);
        let inv = field.inv(&m[rank][c]);
        for i in rank + 1..m.len() {
            if field.is_zero(&m[i][c]) {
                continue;
            }
            let factor = field.mul(&m[i][c], &inv);
            for j in c..ncols {
                let t = field.mul(&factor, &m[rank][j]);
                m[i][j] = field.sub(&m[i][j], &t);
            }
        }
        rank += 1;
    }
    rank
}

/// Graded `Ext^q(M, model)` per degree over `window`, for graded `M` over
/// `k[t]` with `deg t = 1`, computed degree by degree from a graded free
/// resolution.
pub fn graded_ext_against_model(m: &FPModule, model: InjectiveModel, q: i64, window: (i64, i64)) -> Result<Vec<u64>> {
    let ring = m.ring();
    if ring.nvars() != 1 || ring.weight(0) != 1 {
        return Err(Error::RingMismatch(format!("{ring} is not k[t] with deg t = 1")));
    }
    if m.mode() != Mode::Graded {
        return Err(Error::Ungraded("graded Ext needs a graded module".into()));
    }
    let res = homalg::free_resolution(m, homalg::default_max_len(ring))?;
    let field = ring.field();
    let dim_term =
        |p: i64, e: i64| -> u64 { res.term(p).map_or(0, |f| f.twists().iter().map(|a| model.piece_dim(e + a)).sum()) };
    // rank of δ: Hom(C^p, N)_e → Hom(C^{p-1}, N)_e, induced by d^{p-1}
    let rank_delta = |p: i64, e: i64| -> usize {
        let Some(d) = res.differential(p - 1) else { return 0 };
        let (a, b) = (d.source().twists(), d.target().twists());
        let entries = d.entries();
        let rows: Vec<Vec<Scalar>> = (0..a.len())
            .filter(|&j| model.piece_dim(e + a[j]) == 1)
            .map(|j| {
                (0..b.len())
                    .filter(|&i| model.piece_dim(e + b[i]) == 1)
                    .map(|i| match entries[i][j].terms().first() {
                        Some((_, c)) if model.acts(a[j] - b[i], e + b[i]) => c.clone(),
                        _ => field.zero(),
                    })
                    .collect()
            })
            .collect();
        scalar_rank(field, rows)
    };
    Ok((window.0..=window.1)
        .map(|e| {
            let c = dim_term(-q, e);
            let out = rank_delta(-q, e) as u64;
            let inc = rank_delta(-q + 1, e) as u64;
            c - out - inc
        })
        .collect())
}

/// Ext^0..2 of one probe against a model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProbeRow {
    pub ext: [Option<u64>; 3],
}

pub fn ungraded_injectivity_probe(model: InjectiveModel, probes: &[FPModule]) -> Result<Vec<ProbeRow>> {
    probes
        .iter()
        .map(|m| {
            Ok(ProbeRow {
                ext: [
                    ext_against_injective_model(m, model, 0)?,
                    ext_against_injective_model(m, model, 1)?,
                    ext_against_injective_model(m, model, 2)?,
                ],
            })
        })
        .collect()
}

/// The probes `k[t]/(t − 1)`, `k[t]/(t)`, `k[t]/(t² − 1)` as ungraded modules.
pub fn standard_probes(field: FieldDesc) -> Result<(RingRef, Vec<(String, FPModule)>)> {
    let ring = GradedRingDesc::standard(field, &["t"]);
    let mut out = Vec::new();
    for cs in [&[-1i64, 1][..], &[0, 1], &[-1, 0, 1]] {
        let p = UPoly::from_ints(field, cs).to_polynomial(&ring);
        let name = format!("k[t]/({p})");
        out.push((name, FPModule::cyclic(&ring, &[p], Mode::Ungraded)?));
    }
    Ok((ring, out))
}
