//! The bundled oracle instances: small graded modules (at most three
//! variables, generators of degree at most six) with per-instance checks of
//! the kernel against the linear algebra in the parent module.

use super as oracle;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use reesjump_core::groebner::syzygies;
use reesjump_core::homalg::{ExtComputation, ExtDims, FPModule};
use reesjump_core::task::{parse_task, Overrides};
use reesjump_core::{FreeModuleDesc, ModuleElement, RingRef};

pub const WINDOW: (i64, i64) = (-10, 8);

/// Each instance declares graded modules `M` and `N` over one ring.
pub const INSTANCES: &[(&str, &str)] = &[
    ("x3", "ring QQ[x]\nmodule M = quotient (x^3)\nmodule N = free [0]"),
    ("x2-into-x3", "ring QQ[x]\nmodule M = quotient (x^2)\nmodule N = quotient (x^3)"),
    ("x-twisted", "ring QQ[x]\nmodule M = coker [[x^2]] twists [1]\nmodule N = quotient (x)"),
    ("x-rank2", "ring QQ[x]\nmodule M = coker [[x, 0], [0, x^2]] twists [0, 1]\nmodule N = quotient (x^2)"),
    ("free-kx", "ring QQ[x]\nmodule M = free [0, 2]\nmodule N = quotient (x^4)"),
    ("koszul2", "ring QQ[x, y]\nmodule M = quotient (x, y)\nmodule N = free [0]"),
    ("koszul2-k", "ring QQ[x, y]\nmodule M = quotient (x, y)\nmodule N = quotient (x, y)"),
    ("monomial2", "ring QQ[x, y]\nmodule M = quotient (x^2, x*y)\nmodule N = free [0]"),
    ("ci2", "ring QQ[x, y]\nmodule M = quotient (x^2 - y^2, x*y)\nmodule N = quotient (x)"),
    ("powers2", "ring QQ[x, y]\nmodule M = quotient (x^3, y^2)\nmodule N = quotient (x^2, y)"),
    ("hyper2", "ring QQ[x, y]\nmodule M = quotient (x^2 + x*y + y^2)\nmodule N = quotient (x*y)"),
    ("maxpow2", "ring QQ[x, y]\nmodule M = quotient (x^2, x*y, y^2)\nmodule N = free [0]"),
    ("cokernel2", "ring QQ[x, y]\nmodule M = coker [[x, y], [-y, x]] twists [0, 0]\nmodule N = free [0]"),
    ("syz2", "ring QQ[x, y]\nmodule M = coker [[y], [-x]] twists [0, 0]\nmodule N = quotient (x, y)"),
    ("mixed2", "ring QQ[x, y]\nmodule M = coker [[x^2, x*y, 0], [0, y, x]] twists [0, 1]\nmodule N = quotient (y^2)"),
    ("w12-a", "ring QQ[x:1, y:2]\nmodule M = quotient (x^2 - y)\nmodule N = free [0]"),
    ("w12-b", "ring QQ[x:1, y:2]\nmodule M = quotient (x, y)\nmodule N = free [0]"),
    ("w12-c", "ring QQ[x:1, y:2]\nmodule M = quotient (x^4, y^2, x^2*y)\nmodule N = quotient (y)"),
    ("w12-d", "ring QQ[x:1, y:2]\nmodule M = coker [[x^2, y]] twists [0]\nmodule N = quotient (x^2 - y)"),
    ("w12-e", "ring QQ[x:1, y:2]\nmodule M = quotient (x*y, y^2)\nmodule N = quotient (x)"),
    ("w13", "ring QQ[x:1, y:3]\nmodule M = quotient (x^3 - y, x*y)\nmodule N = free [0]"),
    ("koszul3", "ring QQ[x, y, z]\nmodule M = quotient (x, y, z)\nmodule N = free [0]"),
    ("koszul3-k", "ring QQ[x, y, z]\nmodule M = quotient (x, y, z)\nmodule N = quotient (x, y, z)"),
    ("cubic3", "ring QQ[x, y, z]\nmodule M = quotient (x*y - z^2, y*z - x^2, x*z - y^2)\nmodule N = free [0]"),
    ("monomial3", "ring QQ[x, y, z]\nmodule M = quotient (x*y, y*z, x*z)\nmodule N = free [0]"),
    ("line3", "ring QQ[x, y, z]\nmodule M = quotient (x, y^2)\nmodule N = quotient (z)"),
    ("ci3", "ring QQ[x, y, z]\nmodule M = quotient (x^2, y^2, z^2)\nmodule N = free [0]"),
    ("sym3", "ring QQ[x, y, z]\nmodule M = quotient (x + y + z, x*y + y*z + x*z)\nmodule N = quotient (x*y*z)"),
    ("mod3", "ring QQ[x, y, z]\nmodule M = coker [[x, y, z]] twists [0]\nmodule N = quotient (x^2)"),
    ("w112", "ring QQ[x:1, y:1, z:2]\nmodule M = quotient (x*y - z, x^2)\nmodule N = free [0]"),
    ("w112-b", "ring QQ[x:1, y:1, z:2]\nmodule M = quotient (z^2, x*z, y^3)\nmodule N = quotient (z)"),
    ("lex2", "ring QQ[x, y] order lex\nmodule M = quotient (x^2 - y^2, x*y^2)\nmodule N = free [0]"),
    ("lex3", "ring QQ[x, y, z] order lex\nmodule M = quotient (x*z - y^2, x^3)\nmodule N = quotient (y)"),
    ("f2", "ring GF(2)[x, y]\nmodule M = quotient (x^2 + y^2, x*y)\nmodule N = free [0]"),
    ("f3", "ring GF(3)[x, y, z]\nmodule M = quotient (x^3 + y^3 + z^3, x*y)\nmodule N = quotient (z)"),
    ("f7", "ring GF(7)[x, y]\nmodule M = quotient (x^2 - 3*y^2)\nmodule N = quotient (x, y^2)"),
];

pub const RANDOM_INSTANCES: u64 = 14;

pub struct Instance {
    pub name: String,
    pub m: FPModule,
    pub n: FPModule,
}

fn instance(name: &str, text: &str) -> Instance {
    let task = parse_task(text, &Overrides::default()).unwrap_or_else(|e| panic!("{name}: {e}"));
    let ws = task.instantiate().unwrap();
    Instance { name: name.into(), m: ws.base_module("M").unwrap().clone(), n: ws.base_module("N").unwrap().clone() }
}

fn random_poly_text(rng: &mut ChaCha8Rng, vars: &[&str], deg: u32) -> String {
    let mut terms = Vec::new();
    for _ in 0..rng.gen_range(1..=3) {
        let mut exps = vec![0u32; vars.len()];
        for _ in 0..deg {
            exps[rng.gen_range(0..vars.len())] += 1;
        }
        let mon: Vec<String> =
            vars.iter().zip(&exps).filter(|(_, e)| **e > 0).map(|(v, e)| format!("{v}^{e}")).collect();
        terms.push(format!("{}*{}", rng.gen_range(1..=5), mon.join("*")));
    }
    terms.join(" - ")
}

fn random_instance(seed: u64) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vars: &[&str] = if rng.gen_bool(0.5) { &["x", "y"] } else { &["x", "y", "z"] };
    let field = if rng.gen_bool(0.5) { "QQ" } else { "GF(5)" };
    let gens: Vec<String> = (0..rng.gen_range(2..=3))
        .map(|_| {
            let deg = rng.gen_range(1..=3);
            random_poly_text(&mut rng, vars, deg)
        })
        .collect();
    let ngen = random_poly_text(&mut rng, vars, 2);
    let text = format!(
        "ring {field}[{}]\nmodule M = quotient ({})\nmodule N = quotient ({ngen})",
        vars.join(", "),
        gens.join(", ")
    );
    instance(&format!("random{seed}"), &text)
}

pub fn all_instances() -> Vec<Instance> {
    let mut out: Vec<Instance> = INSTANCES.iter().map(|(n, t)| instance(n, t)).collect();
    out.extend((0..RANDOM_INSTANCES).map(random_instance));
    out
}

fn degree_range(m: &FPModule) -> (i64, i64) {
    let lo = m.generators().twists().iter().copied().min().unwrap_or(0);
    (lo - 1, lo + 7)
}

fn random_element(rng: &mut ChaCha8Rng, f: &FreeModuleDesc, d: i64) -> ModuleElement {
    let piece = oracle::Piece::new(f, d);
    let field = f.ring().field();
    let mut v = ModuleElement::zero();
    for k in 0..piece.dim() {
        if rng.gen_bool(0.4) {
            let c = field.from_i64(rng.gen_range(-3..=3));
            v = v.add(f, &piece.element(f, k).scale(f, &c));
        }
    }
    v
}

fn combination(rng: &mut ChaCha8Rng, f: &FreeModuleDesc, gens: &[ModuleElement], d: i64) -> ModuleElement {
    let ring: &RingRef = f.ring();
    let field = ring.field();
    let w = oracle::weights(ring);
    let mut v = ModuleElement::zero();
    for g in gens {
        let Some(t) = g.terms().first() else { continue };
        let e = t.mon.degree() + f.twists()[t.comp];
        for m in oracle::exponents_of_degree(&w, d - e) {
            if rng.gen_bool(0.5) {
                v = v.add(f, &g.mul_term(f, &field.from_i64(rng.gen_range(1..=4)), &ring.monomial(&m)));
            }
        }
    }
    v
}

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn ok<T, E: std::fmt::Display>(r: Result<T, E>, name: &str) -> Result<T, String> {
    r.map_err(|e| format!("{name}: {e}"))
}

pub fn check_hilbert(inst: &Instance) -> Result<(), String> {
    for m in [&inst.m, &inst.n] {
        let (lo, hi) = degree_range(m);
        let got = ok(m.hilbert_profile(lo, hi), &inst.name)?;
        let want = oracle::hilbert(m, lo, hi);
        ensure!(got == want, "{}: Hilbert function {got:?} vs {want:?}", inst.name);
    }
    Ok(())
}

pub fn check_membership(inst: &Instance, rng: &mut ChaCha8Rng) -> Result<(), String> {
    let p = inst.m.presentation();
    let f = p.target();
    let gb = ok(inst.m.gb(), &inst.name)?;
    ensure!(ok(gb.verify(), &inst.name)?, "{}: basis fails its own verification", inst.name);
    for g in gb.generators() {
        ensure!(oracle::member(f, p.columns(), g), "{}: basis element outside the span", inst.name);
    }
    let (lo, hi) = degree_range(&inst.m);
    for d in lo..=hi {
        for _ in 0..3 {
            let v = combination(rng, f, p.columns(), d);
            ensure!(ok(gb.contains(&v), &inst.name)?, "{}: combination in degree {d} not recognized", inst.name);
            let w = random_element(rng, f, d);
            let want = oracle::member(f, p.columns(), &w);
            ensure!(ok(gb.contains(&w), &inst.name)? == want, "{}: membership in degree {d}", inst.name);
        }
    }
    Ok(())
}

pub fn check_syzygies(inst: &Instance) -> Result<(), String> {
    let p = inst.m.presentation();
    let f = p.target();
    let (src, syz) = ok(syzygies(f, p.columns(), Some(p.source().twists())), &inst.name)?;
    for s in &syz {
        ensure!(p.apply(s).is_zero(), "{}: syzygy does not map to zero", inst.name);
    }
    let (lo, hi) = degree_range(&inst.m);
    for d in lo..=hi + 2 {
        let got = oracle::span_dim(&src, &syz, d);
        let want = oracle::kernel_dim(f, p.columns(), p.source().twists(), d);
        ensure!(got == want, "{}: syzygies span {got} of {want} in degree {d}", inst.name);
    }
    Ok(())
}

pub fn check_resolutions(inst: &Instance) -> Result<(), String> {
    for m in [&inst.m, &inst.n] {
        let ext = ok(ExtComputation::new(m, &inst.n), &inst.name)?;
        let (lo, hi) = degree_range(m);
        oracle::check_resolution(&ext.resolution, m, lo, hi + 4).map_err(|e| format!("{}: {e}", inst.name))?;
    }
    Ok(())
}

pub fn check_ext(inst: &Instance) -> Result<(), String> {
    let ext = ok(ExtComputation::new(&inst.m, &inst.n), &inst.name)?;
    let top = inst.m.ring().nvars() as i64 + 1;
    for q in 0..=top {
        let prof = ok(ext.profile(q, WINDOW), &inst.name)?;
        let ExtDims::Graded { lo, values } = prof.dims else { return Err(format!("{}: ungraded profile", inst.name)) };
        let want: Vec<u64> =
            (lo..lo + values.len() as i64).map(|d| oracle::ext_dim(&ext.resolution, &inst.n, q, d)).collect();
        ensure!(values == want, "{} q={q}: Ext {values:?} vs {want:?}", inst.name);
        ensure!(!(prof.vanishes && want.iter().any(|v| *v > 0)), "{} q={q}: reported zero", inst.name);
    }
    Ok(())
}

/// Every check on every instance; the number of instances on success.
pub fn run_all() -> Result<usize, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let all = all_instances();
    for inst in &all {
        check_hilbert(inst)?;
        check_membership(inst, &mut rng)?;
        check_syzygies(inst)?;
        check_resolutions(inst)?;
        check_ext(inst)?;
    }
    Ok(all.len())
}
