use criterion::{black_box, criterion_group, criterion_main, Criterion};
use reesjump_bench::{cyclic, polys, ring, twisted_cubic};
use reesjump_core::dispatch::{bundled_corpus, run_corpus, CheckFamily, Command, SessionConfig};
use reesjump_core::groebner::buchberger;
use reesjump_core::homalg::{default_max_len, ext_profile, free_resolution, FPModule, Mode};
use reesjump_core::{FreeModuleDesc, ModuleElement};

fn groebner(c: &mut Criterion) {
    let r = ring(&["x", "y", "z"]);
    let g = polys(&r, &["x^2*y - z^3", "x*y^2 - z^3", "x^3 - y*z^2", "y^3 - x*z^2"]);
    let f = FreeModuleDesc::new(&r, vec![0]);
    let gens: Vec<ModuleElement> =
        g.iter().map(|p| ModuleElement::from_components(&f, std::slice::from_ref(p)).unwrap()).collect();
    c.bench_function("gb/four-cubics", |b| b.iter(|| buchberger(&f, black_box(&gens)).unwrap()));
}

fn resolution(c: &mut Criterion) {
    let (r, g) = twisted_cubic();
    let m = cyclic(&r, &g);
    c.bench_function("resolve/twisted-cubic", |b| {
        b.iter(|| {
            let m = m.clone();
            free_resolution(black_box(&m), default_max_len(&r)).unwrap()
        })
    });
}

fn ext(c: &mut Criterion) {
    let r = ring(&["x", "y", "z"]);
    let k = cyclic(&r, &polys(&r, &["x", "y", "z"]));
    let a = FPModule::free(FreeModuleDesc::new(&r, vec![0]), Mode::Graded);
    c.bench_function("ext/koszul-q3", |b| b.iter(|| ext_profile(black_box(&k), &a, 3, (-10, 10)).unwrap()));
}

fn corpus(c: &mut Criterion) {
    let files = bundled_corpus();
    let mut cfg = SessionConfig::new(Command::Check(CheckFamily::All));
    cfg.timing = false;
    let mut g = c.benchmark_group("corpus");
    g.sample_size(10);
    g.bench_function("check-all", |b| b.iter(|| run_corpus(&cfg, black_box(&files)).unwrap()));
    g.finish();
}

criterion_group!(benches, groebner, resolution, ext, corpus);
criterion_main!(benches);
