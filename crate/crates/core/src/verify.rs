//! Machine-checkable comparisons between graded and ungraded homological
//! data, each producing a [`CheckReport`] with its full numeric evidence.
//!
//! Isomorphisms are compared through dimension data only: per-degree
//! Hilbert functions for graded objects, total vector-space dimensions for
//! ungraded ones.

use std::time::Instant;

use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::field::FieldDesc;
use crate::homalg::{self, ExtComputation, FPModule, Mode};
use crate::pid::{self, InjectiveModel};
use crate::poly::{Polynomial, RingRef};
use crate::rees::{self, Filtration, ReesRingDesc};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub status: Status,
    pub evidence: Value,
    pub millis: u64,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    /// A failing report carrying an error message as its evidence.
    pub fn from_error(name: impl Into<String>, err: &Error) -> Self {
        CheckReport {
            name: name.into(),
            status: Status::Fail,
            evidence: json!({ "error": err.to_string() }),
            millis: 0,
        }
    }
}

/// Window and Ext range shared by all checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CheckConfig {
    pub window: (i64, i64),
    pub qmax: i64,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig { window: homalg::DEFAULT_WINDOW, qmax: 4 }
    }
}

pub(crate) fn timed(name: String, f: impl FnOnce() -> Result<(bool, Value)>) -> Result<CheckReport> {
    let start = Instant::now();
    let (ok, evidence) = f()?;
    Ok(CheckReport {
        name,
        status: if ok { Status::Pass } else { Status::Fail },
        evidence,
        millis: start.elapsed().as_millis() as u64,
    })
}

/// Nonzero entries of a per-degree table as an ordered JSON object.
pub fn table(lo: i64, values: &[u64]) -> Value {
    let mut m = Map::new();
    for (k, v) in values.iter().enumerate() {
        if *v != 0 {
            m.insert((lo + k as i64).to_string(), json!(v));
        }
    }
    Value::Object(m)
}

/// Finite dimension as a number, infinite as the string `"inf"`.
pub fn dim_value(d: Option<u64>) -> Value {
    match d {
        Some(v) => json!(v),
        None => json!("inf"),
    }
}

fn partial_sums(values: &[u64]) -> Vec<u64> {
    values
        .iter()
        .scan(0u64, |acc, v| {
            *acc += v;
            Some(*acc)
        })
        .collect()
}

/// Derived specialization of `M̃` computed twice: through the Koszul complex
/// of `T`, and as the cohomology of `sp0` applied to a free resolution.
pub fn check_lemma3(r: &ReesRingDesc, name: &str, mt: &FPModule, cfg: &CheckConfig) -> Result<CheckReport> {
    timed(format!("lemma3:{name}"), || {
        let (lo, hi) = cfg.window;
        let (hm1, h0) = rees::lsp0(r, mt)?;
        let regular = rees::t_regular(r, mt)?;
        let koszul = [hm1.hilbert_profile(lo, hi)?, h0.hilbert_profile(lo, hi)?];
        let res = homalg::free_resolution(mt, homalg::default_max_len(r.total()))?;
        let sp = rees::sp0_complex(r, &res)?.as_module_complex();
        let mut ok = true;
        let mut via_resolution = Map::new();
        let mut stray = Vec::new();
        for q in sp.lo()..=sp.hi() {
            let h = homalg::cohomology_at(&sp, q, Mode::Graded)?;
            let prof = h.hilbert_profile(lo, hi)?;
            match q {
                -1 | 0 => {
                    if prof != koszul[(q + 1) as usize] {
                        ok = false;
                    }
                }
                _ => {
                    if !h.is_zero()? {
                        ok = false;
                        stray.push(q);
                    }
                }
            }
            via_resolution.insert(q.to_string(), table(lo, &prof));
        }
        if sp.lo() > -1 && !hm1.is_zero()? {
            ok = false;
        }
        if hm1.is_zero()? != regular {
            ok = false;
        }
        let mut ev = json!({
            "module": name,
            "t_regular": regular,
            "koszul": { "-1": table(lo, &koszul[0]), "0": table(lo, &koszul[1]) },
            "via_resolution": via_resolution,
        });
        if !stray.is_empty() {
            ev["counterexample"] = json!({ "module": name, "nonzero_degrees": stray });
        }
        Ok((ok, ev))
    })
}

/// Graded Ext over `Ã` into the Rees module of `N`, against the partial
/// sums of graded Ext over `A` out of the specialized resolution.
pub fn check_lemma1(
    r: &ReesRingDesc,
    name: &str,
    mt: &FPModule,
    n: &FPModule,
    cfg: &CheckConfig,
) -> Result<CheckReport> {
    if n.mode() != Mode::Graded {
        return Err(Error::Ungraded("the second module of a lemma1 check must be graded".into()));
    }
    timed(format!("lemma1:{name}"), || {
        let (lo, hi) = cfg.window;
        let res = homalg::free_resolution(mt, homalg::default_max_len(r.total()))?;
        let rs_n = rees::rees_module(r, n, &Filtration::CanonicalGraded)?.tilde;
        let lhs_h = homalg::hom_complex(&res, &rs_n)?;
        let sp = rees::sp0_complex(r, &res)?;
        let rhs_h = homalg::hom_complex(&sp, n)?;
        let mut ok = true;
        let mut rows = Map::new();
        let mut counterexample = Value::Null;
        for q in 0..=cfg.qmax {
            let lhs = homalg::cohomology_at(&lhs_h, q, Mode::Graded)?.hilbert_profile(lo, hi)?;
            let x = homalg::cohomology_at(&rhs_h, q, Mode::Graded)?;
            if let Some(g) = x.min_generator_degree() {
                if g < lo {
                    return Err(Error::WindowTooSmall(format!(
                        "Ext^{q} has a generator in degree {g}, below the window start {lo}"
                    )));
                }
            }
            let rhs = partial_sums(&x.hilbert_profile(lo, hi)?);
            if lhs != rhs && ok {
                ok = false;
                let e = lhs.iter().zip(&rhs).position(|(a, b)| a != b).unwrap() as i64 + lo;
                counterexample = json!({ "pair": name, "q": q, "degree": e });
            }
            rows.insert(q.to_string(), json!({ "lhs": table(lo, &lhs), "rhs": table(lo, &rhs) }));
        }
        let mut ev = json!({ "pair": name, "window": [lo, hi], "ext": rows });
        if !ok {
            ev["counterexample"] = counterexample;
        }
        Ok((ok, ev))
    })
}

/// Dimension of `sp1` of graded Ext over `Ã` against ungraded Ext over `A`
/// of the specialized modules.
pub fn check_lemma2(
    r: &ReesRingDesc,
    name: &str,
    mt: &FPModule,
    nt: &FPModule,
    cfg: &CheckConfig,
) -> Result<CheckReport> {
    timed(format!("lemma2:{name}"), || {
        let graded = ExtComputation::new(mt, nt)?;
        let ungraded = ExtComputation::new(&rees::sp1(r, mt)?, &rees::sp1(r, nt)?)?;
        let mut ok = true;
        let mut rows = Map::new();
        let mut counterexample = Value::Null;
        for q in 0..=cfg.qmax {
            let lhs = rees::sp1(r, &graded.module(q)?)?.dimension()?;
            let rhs = ungraded.module(q)?.dimension()?;
            if lhs != rhs && ok {
                ok = false;
                counterexample = json!({ "pair": name, "q": q });
            }
            rows.insert(q.to_string(), json!({ "lhs": dim_value(lhs), "rhs": dim_value(rhs) }));
        }
        let mut ev = json!({ "pair": name, "ext": rows });
        if !ok {
            ev["counterexample"] = counterexample;
        }
        Ok((ok, ev))
    })
}

/// Second argument of a dimension-jump check.
#[derive(Clone, Debug)]
pub enum JumpTarget {
    Module(FPModule),
    /// A non-finitely generated module over `k[t]`, given by its model.
    Model(InjectiveModel),
}

/// A probe `A/I` named after its ideal.
#[derive(Clone, Debug)]
pub struct Probe {
    pub name: String,
    pub ideal: Vec<Polynomial>,
}

impl Probe {
    pub fn new(ideal: Vec<Polynomial>) -> Self {
        let name = format!("({})", ideal.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(", "));
        Probe { name, ideal }
    }
}

fn top_index(ext: impl Fn(i64) -> Result<bool>, qtop: i64) -> Result<Option<i64>> {
    let mut top = None;
    for q in 0..=qtop {
        if ext(q)? {
            top = Some(q);
        }
    }
    Ok(top)
}

fn graded_top(ring: &RingRef, probe: &Probe, target: &JumpTarget, cfg: &CheckConfig) -> Result<Option<i64>> {
    let m = FPModule::cyclic(ring, &probe.ideal, Mode::Graded)?;
    match target {
        JumpTarget::Module(n) => {
            let ext = ExtComputation::new(&m, n)?;
            top_index(|q| Ok(!ext.module(q)?.is_zero()?), ext.top_index())
        }
        JumpTarget::Model(model) => {
            top_index(|q| Ok(pid::graded_ext_against_model(&m, *model, q, cfg.window)?.iter().any(|d| *d > 0)), 2)
        }
    }
}

fn ungraded_top(ring: &RingRef, probe: &Probe, target: &JumpTarget) -> Result<Option<i64>> {
    let m = FPModule::cyclic(ring, &probe.ideal, Mode::Ungraded)?;
    match target {
        JumpTarget::Module(n) => {
            let ext = ExtComputation::new(&m, &n.with_mode(Mode::Ungraded)?)?;
            top_index(|q| Ok(!ext.module(q)?.is_zero()?), ext.top_index())
        }
        JumpTarget::Model(model) => top_index(|q| Ok(pid::ext_against_injective_model(&m, *model, q)? != Some(0)), 2),
    }
}

fn top_value(t: Option<i64>) -> Value {
    match t {
        Some(q) => json!(q),
        None => Value::Null,
    }
}

/// Largest nonvanishing Ext index over graded probes versus all probes
/// computed without gradings; passes iff the latter exceeds the former by at
/// most one. A finite probe family only tests a necessary condition.
pub fn check_dimension_jump(
    name: &str,
    ring: &RingRef,
    target: &JumpTarget,
    graded_probes: &[Probe],
    ungraded_probes: &[Probe],
    cfg: &CheckConfig,
) -> Result<CheckReport> {
    if let JumpTarget::Module(n) = target {
        if n.mode() != Mode::Graded {
            return Err(Error::Ungraded("dimension-jump target must be graded".into()));
        }
    }
    timed(format!("jump:{name}"), || {
        let mut graded = vec![Probe { name: "(0)".into(), ideal: vec![] }];
        graded.extend(graded_probes.iter().cloned());
        let mut d_gr = None;
        let mut d_ungr: Option<i64> = None;
        let mut witness = String::new();
        let mut gr_rows = Vec::new();
        let mut ungr_rows = Vec::new();
        for p in &graded {
            let top = graded_top(ring, p, target, cfg)?;
            d_gr = d_gr.max(top);
            gr_rows.push(json!({ "probe": p.name, "top": top_value(top) }));
        }
        for p in graded.iter().chain(ungraded_probes) {
            let top = ungraded_top(ring, p, target)?;
            if top > d_ungr {
                d_ungr = top;
                witness = p.name.clone();
            }
            ungr_rows.push(json!({ "probe": p.name, "top": top_value(top) }));
        }
        let level = |d: Option<i64>| d.unwrap_or(-1);
        let ok = level(d_ungr) <= level(d_gr) + 1;
        let mut ev = json!({
            "target": name,
            "scope": "necessary condition over a finite probe family",
            "graded": gr_rows,
            "ungraded": ungr_rows,
            "d_gr": top_value(d_gr),
            "d_ungr": top_value(d_ungr),
        });
        if !ok {
            ev["counterexample"] = json!({ "target": name, "probe": witness });
        }
        Ok((ok, ev))
    })
}

/// The localization `J = k[t, t⁻¹]`: graded-injective, yet of injective
/// dimension exactly one without gradings, while `k[t, t⁻¹]/k[t]` stays
/// injective. The check also requires the graded Baer test to reject `k[t]`,
/// so that a passing verdict is never vacuous.
pub fn check_example15(field: FieldDesc) -> Result<CheckReport> {
    timed(format!("example15:{field}"), || {
        let baer = pid::graded_baer_check_j(8)?;
        let control = pid::graded_baer_check(InjectiveModel::PolynomialControl, 8, homalg::DEFAULT_WINDOW)?;
        let (_, probes) = pid::standard_probes(field)?;
        let mods: Vec<FPModule> = probes.iter().map(|(_, m)| m.clone()).collect();
        let j_rows = pid::ungraded_injectivity_probe(InjectiveModel::J, &mods)?;
        let e_rows = pid::ungraded_injectivity_probe(InjectiveModel::TorsionAtZero, &mods)?;
        let witness = j_rows[0].ext[1];
        let top = j_rows.iter().filter_map(|r| (0..3).rev().find(|&q| r.ext[q] != Some(0))).max().map(|q| q as i64);
        let ok = baer.pass
            && !control.pass
            && witness == Some(1)
            && j_rows.iter().all(|r| r.ext[2] == Some(0))
            && e_rows.iter().all(|r| r.ext[1] == Some(0))
            && top == Some(1);
        let rows = |rows: &[pid::ProbeRow]| -> Vec<Value> {
            probes
                .iter()
                .zip(rows)
                .map(|((name, _), r)| json!({ "probe": name, "ext": r.ext.iter().map(|d| dim_value(*d)).collect::<Vec<_>>() }))
                .collect()
        };
        let mut ev = json!({
            "field": field.to_string(),
            "baer_J": baer.pass,
            "baer_control": { "pass": control.pass, "failure": control.failure.map(|(n, d)| json!({ "n": n, "degree": d })) },
            "J": rows(&j_rows),
            "Izero": rows(&e_rows),
            "witness_ext1": dim_value(witness),
            "top_index": top,
        });
        if !ok {
            ev["counterexample"] = json!({ "instance": "J probes", "field": field.to_string() });
        }
        Ok((ok, ev))
    })
}

/// The graded Baer test applied to `k[t]` instead of `J`; this check is
/// expected to fail and serves as a negative control.
pub fn check_baer_control() -> Result<CheckReport> {
    timed("baer-control:k[t]".into(), || {
        let out = pid::graded_baer_check(InjectiveModel::PolynomialControl, 8, homalg::DEFAULT_WINDOW)?;
        let mut ev = json!({ "model": "k[t]", "pass": out.pass });
        if let Some((n, d)) = out.failure {
            ev["counterexample"] = json!({ "instance": "k[t]", "n": n, "degree": d });
        }
        Ok((out.pass, ev))
    })
}
