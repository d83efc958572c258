//! Rees rings of degree filtrations and the functors between graded
//! modules over `A` and over `Ã`.
//!
//! `Ã` is realized as the weighted polynomial ring `k[X_1..X_n, T]` with
//! `deg X_i = deg x_i` and `deg T = 1`; inside `A[t]` this is the subring
//! generated by `x_i t^{d_i}` and `t`. Specializing `T ↦ 0` gives the
//! associated graded ring (`A` itself), `T ↦ 1` forgets the grading.

use crate::error::{Error, Result};
use crate::groebner::{self, FreeModuleDesc, ModuleElement};
use crate::homalg::{self, FPModule, GradedMatrix, Mode};
use crate::poly::{GradedRingDesc, Polynomial, RingRef, WeightedDegree};

/// Number of degrees over which [`rees_ring`] verifies the partial-sum law.
const DIMENSION_CHECK_DEGREES: i64 = 12;

#[derive(Clone, Debug)]
pub struct ReesRingDesc {
    base: RingRef,
    total: RingRef,
    rees_var: usize,
}

impl ReesRingDesc {
    /// The base ring `A`.
    pub fn base(&self) -> &RingRef {
        &self.base
    }

    /// The Rees ring `Ã`.
    pub fn total(&self) -> &RingRef {
        &self.total
    }

    /// Index of `T` among the variables of `Ã` (always the last one).
    pub fn rees_var(&self) -> usize {
        self.rees_var
    }

    pub fn t(&self) -> Polynomial {
        Polynomial::var(&self.total, self.rees_var)
    }

    /// Images of `x_i ↦ X_i`.
    pub fn lift_images(&self) -> Vec<Polynomial> {
        (0..self.rees_var).map(|i| Polynomial::var(&self.total, i)).collect()
    }

    /// Images of `X_i ↦ x_i`, `T ↦ c`.
    fn specialize_images(&self, c: i64) -> Vec<Polynomial> {
        let mut v: Vec<Polynomial> = (0..self.rees_var).map(|i| Polynomial::var(&self.base, i)).collect();
        v.push(Polynomial::from_int(&self.base, c));
        v
    }

    pub fn lift(&self, p: &Polynomial) -> Result<Polynomial> {
        p.substitute(&self.total, &self.lift_images())
    }

    fn check_total(&self, m: &FPModule) -> Result<()> {
        if !crate::poly::same_ring(m.ring(), &self.total) {
            return Err(Error::RingMismatch(format!("expected a module over {}, got {}", self.total, m.ring())));
        }
        Ok(())
    }

    fn check_base(&self, m: &FPModule) -> Result<()> {
        if !crate::poly::same_ring(m.ring(), &self.base) {
            return Err(Error::RingMismatch(format!("expected a module over {}, got {}", self.base, m.ring())));
        }
        Ok(())
    }
}

fn fresh_name(wanted: String, taken: &[String]) -> String {
    let mut name = wanted;
    while taken.contains(&name) {
        name.push('_');
    }
    name
}

/// Builds `Ã` for `A`. Variables are the upper-cased names of `A` plus `T`.
pub fn rees_ring(a: &RingRef) -> Result<ReesRingDesc> {
    let mut taken: Vec<String> = a.vars().iter().map(|v| v.name.clone()).collect();
    let mut vars = Vec::with_capacity(a.nvars() + 1);
    for v in a.vars() {
        let name = fresh_name(v.name.to_uppercase(), &taken);
        taken.push(name.clone());
        vars.push((name, v.weight));
    }
    vars.push((fresh_name("T".into(), &taken), 1));
    let total = GradedRingDesc::new(a.field(), vars, a.order())?;
    let desc = ReesRingDesc { base: a.clone(), total, rees_var: a.nvars() };
    let mut partial = 0u64;
    for e in 0..=DIMENSION_CHECK_DEGREES {
        partial += a.count_monomials(e);
        if desc.total.count_monomials(e) != partial {
            return Err(Error::internal(format!("Rees ring dimension mismatch in degree {e}")));
        }
    }
    Ok(desc)
}

/// Filtration on an ungraded module given by a level per generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiltrationDesc {
    pub generator_degrees: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Filtration {
    /// `F_i(M) = ⊕_{j ≤ i} M_j` for a graded module.
    CanonicalGraded,
    Good(FiltrationDesc),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReesKind {
    GradedRs,
    GoodFiltrationRs,
}

#[derive(Clone, Debug)]
pub struct ReesModuleData {
    pub tilde: FPModule,
    pub origin: FPModule,
    pub kind: ReesKind,
}

/// The Rees module of `M` with respect to `filt`, presented over `Ã`.
pub fn rees_module(r: &ReesRingDesc, m: &FPModule, filt: &Filtration) -> Result<ReesModuleData> {
    r.check_base(m)?;
    match filt {
        Filtration::CanonicalGraded => {
            if m.mode() != Mode::Graded {
                return Err(Error::Ungraded(
                    "canonical Rees module needs a graded module; supply generator degrees".into(),
                ));
            }
            homalg::validate_graded_matrix(m.presentation())?;
            let pres = m.presentation().substitute(&r.total, &r.lift_images())?;
            Ok(ReesModuleData { tilde: FPModule::graded(pres)?, origin: m.clone(), kind: ReesKind::GradedRs })
        }
        Filtration::Good(f) => {
            let pres = m.presentation();
            let gens = pres.target();
            if f.generator_degrees.len() != gens.rank() {
                return Err(Error::ArityMismatch { expected: gens.rank(), found: f.generator_degrees.len() });
            }
            let target = FreeModuleDesc::new(&r.total, f.generator_degrees.clone());
            let mut cols = Vec::new();
            for row_entries in transpose(&pres.entries()) {
                let Some(a) = row_entries
                    .iter()
                    .zip(&f.generator_degrees)
                    .filter_map(|(p, b)| match p.weighted_degree() {
                        WeightedDegree::Finite(d) => Some(d + b),
                        WeightedDegree::MinusInfinity => None,
                    })
                    .max()
                else {
                    continue;
                };
                let comps = row_entries
                    .iter()
                    .zip(&f.generator_degrees)
                    .map(|(p, b)| {
                        if p.is_zero() {
                            Ok(Polynomial::zero(&r.total))
                        } else {
                            p.homogenize_to(&r.total, r.rees_var, a - b)
                        }
                    })
                    .collect::<Result<Vec<_>>>()?;
                cols.push(ModuleElement::from_components(&target, &comps)?);
            }
            let gb = groebner::buchberger(&target, &cols)?;
            let sat = groebner::saturate(&gb, &r.t())?;
            let rels = homalg::minimal_generators(&target, sat.generators())?;
            let tilde = FPModule::graded(GradedMatrix::from_columns(target, rels))?;
            Ok(ReesModuleData { tilde, origin: m.clone(), kind: ReesKind::GoodFiltrationRs })
        }
    }
}

fn transpose(rows: &[Vec<Polynomial>]) -> Vec<Vec<Polynomial>> {
    if rows.is_empty() {
        return Vec::new();
    }
    (0..rows[0].len()).map(|j| rows.iter().map(|row| row[j].clone()).collect()).collect()
}

/// True iff `T` is a nonzerodivisor on `M̃`, i.e. `(U : T) = U` for the
/// relation module `U`.
pub fn t_regular(r: &ReesRingDesc, m: &FPModule) -> Result<bool> {
    r.check_total(m)?;
    let gb = m.gb()?;
    let q = groebner::module_quotient(gb, &r.t())?;
    groebner::is_zero_quotient(q.generators(), gb)
}

/// `M̃ / T·M̃` as a graded module over `A`.
pub fn sp0(r: &ReesRingDesc, m: &FPModule) -> Result<FPModule> {
    r.check_total(m)?;
    let pres = m.presentation().substitute(&r.base, &r.specialize_images(0))?;
    FPModule::graded(pres)
}

/// `M̃ / (T − 1)·M̃` as an ungraded module over `A`.
pub fn sp1(r: &ReesRingDesc, m: &FPModule) -> Result<FPModule> {
    r.check_total(m)?;
    let pres = m.presentation().substitute(&r.base, &r.specialize_images(1))?;
    FPModule::ungraded(pres)
}

/// Derived specialization of a single module through the Koszul complex of
/// `T`: returns `(H⁻¹, H⁰)` with `H⁰ = sp0(M̃)` and `H⁻¹ = ann_{M̃}(T)(−1)`
/// viewed over `A`.
pub fn lsp0(r: &ReesRingDesc, m: &FPModule) -> Result<(FPModule, FPModule)> {
    r.check_total(m)?;
    let h0 = sp0(r, m)?;
    let gb = m.gb()?;
    let f = m.generators();
    let q = groebner::module_quotient(gb, &r.t())?;
    let ann = homalg::subquotient(f, q.generators(), gb.generators(), Mode::Graded)?;
    let hm1 = sp0(r, &ann.twist(-1)?)?;
    Ok((hm1, h0))
}

/// Applies `T ↦ 0` to every differential of a free complex over `Ã`.
pub fn sp0_complex(r: &ReesRingDesc, c: &homalg::ComplexDesc) -> Result<homalg::ComplexDesc> {
    if !crate::poly::same_ring(c.ring(), &r.total) {
        return Err(Error::RingMismatch(format!("expected a complex over {}", r.total)));
    }
    c.substitute(&r.base, &r.specialize_images(0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldDesc;
    use crate::parse::parse_polynomial;

    fn base(names: &[(&str, u32)]) -> RingRef {
        GradedRingDesc::new(
            FieldDesc::Rationals,
            names.iter().map(|(n, w)| (n.to_string(), *w)).collect(),
            Default::default(),
        )
        .unwrap()
    }

    fn cyclic(r: &RingRef, gens: &[&str], mode: Mode) -> FPModule {
        let ps: Vec<Polynomial> = gens.iter().map(|s| parse_polynomial(r, s).unwrap()).collect();
        FPModule::cyclic(r, &ps, mode).unwrap()
    }

    #[test]
    fn rees_ring_dimensions() {
        let r = rees_ring(&base(&[("x", 1)])).unwrap();
        assert_eq!(r.total().to_string(), "QQ[X:1, T:1]");
        assert_eq!((0..4).map(|e| r.total().count_monomials(e)).collect::<Vec<_>>(), vec![1, 2, 3, 4]);
        let r = rees_ring(&base(&[])).unwrap();
        assert_eq!(r.total().nvars(), 1);
        let r = rees_ring(&base(&[("x", 1), ("y", 2)])).unwrap();
        assert_eq!(r.total().count_monomials(2), 4);
        let r = rees_ring(&base(&[("t", 1), ("T", 1)])).unwrap();
        assert_eq!(r.total().to_string(), "QQ[T_:1, T__:1, T___:1]");
    }

    #[test]
    fn canonical_rees_module() {
        let a = base(&[("x", 1)]);
        let r = rees_ring(&a).unwrap();
        let m = cyclic(&a, &["x^2"], Mode::Graded);
        let data = rees_module(&r, &m, &Filtration::CanonicalGraded).unwrap();
        assert_eq!(data.tilde.hilbert_profile(0, 3).unwrap(), vec![1, 2, 2, 2]);
        assert!(t_regular(&r, &data.tilde).unwrap());
        let back = sp0(&r, &data.tilde).unwrap();
        assert_eq!(back.hilbert_profile(-10, 15).unwrap(), m.hilbert_profile(-10, 15).unwrap());
    }

    #[test]
    fn canonical_needs_grading() {
        let a = base(&[("x", 1)]);
        let r = rees_ring(&a).unwrap();
        let m = cyclic(&a, &["x^2 - 1"], Mode::Ungraded);
        assert!(matches!(rees_module(&r, &m, &Filtration::CanonicalGraded), Err(Error::Ungraded(_))));
    }

    #[test]
    fn good_filtration() {
        let a = base(&[("x", 1)]);
        let r = rees_ring(&a).unwrap();
        let m = cyclic(&a, &["x^2 - 1"], Mode::Ungraded);
        let data = rees_module(&r, &m, &Filtration::Good(FiltrationDesc { generator_degrees: vec![0] })).unwrap();
        assert_eq!(data.tilde.presentation().entry(0, 0).to_string(), "X^2 - T^2");
        let g = sp0(&r, &data.tilde).unwrap();
        assert_eq!(g.presentation().entry(0, 0).to_string(), "x^2");
        assert_eq!(sp1(&r, &data.tilde).unwrap().dimension().unwrap(), Some(2));
    }

    #[test]
    fn good_filtration_saturates() {
        // (x·y - x, y^2 - y) homogenized column-wise is not T-saturated
        let a = base(&[("x", 1), ("y", 1)]);
        let r = rees_ring(&a).unwrap();
        let m = cyclic(&a, &["x*y - x", "x^2 - x"], Mode::Ungraded);
        let data = rees_module(&r, &m, &Filtration::Good(FiltrationDesc { generator_degrees: vec![0] })).unwrap();
        assert!(t_regular(&r, &data.tilde).unwrap());
        assert_eq!(sp1(&r, &data.tilde).unwrap().dimension().unwrap(), m.dimension().unwrap());
    }

    #[test]
    fn lsp0_examples() {
        let a = base(&[("x", 1)]);
        let r = rees_ring(&a).unwrap();
        let free = FPModule::free(FreeModuleDesc::new(r.total(), vec![0]), Mode::Graded);
        let (hm1, h0) = lsp0(&r, &free).unwrap();
        assert!(hm1.is_zero().unwrap());
        assert_eq!(h0.hilbert_profile(0, 3).unwrap(), vec![1, 1, 1, 1]);

        let mt = cyclic(r.total(), &["T"], Mode::Graded);
        let (hm1, h0) = lsp0(&r, &mt).unwrap();
        assert_eq!(hm1.hilbert_profile(0, 3).unwrap(), vec![0, 1, 1, 1]);
        assert_eq!(h0.hilbert_profile(0, 3).unwrap(), vec![1, 1, 1, 1]);

        let mt = cyclic(r.total(), &["T^2"], Mode::Graded);
        let (hm1, _) = lsp0(&r, &mt).unwrap();
        assert_eq!(hm1.hilbert_profile(0, 4).unwrap(), vec![0, 0, 1, 1, 1]);

        let mt = cyclic(r.total(), &["X^2 - T^2"], Mode::Graded);
        let (hm1, h0) = lsp0(&r, &mt).unwrap();
        assert!(hm1.is_zero().unwrap());
        assert_eq!(h0.hilbert_profile(0, 3).unwrap(), vec![1, 1, 0, 0]);
    }

    #[test]
    fn sp_of_free() {
        let a = base(&[("x", 1), ("y", 2)]);
        let r = rees_ring(&a).unwrap();
        let m = FPModule::free(FreeModuleDesc::new(&a, vec![0, 3]), Mode::Graded);
        let data = rees_module(&r, &m, &Filtration::CanonicalGraded).unwrap();
        assert_eq!(data.tilde.generators().twists(), &[0, 3]);
        assert_eq!(sp1(&r, &data.tilde).unwrap().dimension().unwrap(), None);
    }
}
