//! Kernel results against the linear-algebra oracle.

mod oracle;

use oracle::suite::{self, all_instances, INSTANCES, RANDOM_INSTANCES};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn each(check: impl Fn(&suite::Instance) -> Result<(), String>) {
    for inst in all_instances() {
        if let Err(e) = check(&inst) {
            panic!("{e}");
        }
    }
}

#[test]
fn suite_is_large_enough() {
    assert!(INSTANCES.len() as u64 + RANDOM_INSTANCES >= 40);
}

#[test]
fn hilbert_functions() {
    each(suite::check_hilbert);
}

#[test]
fn groebner_membership() {
    let rng = std::cell::RefCell::new(ChaCha8Rng::seed_from_u64(11));
    each(|inst| suite::check_membership(inst, &mut rng.borrow_mut()));
}

#[test]
fn syzygy_modules() {
    each(suite::check_syzygies);
}

#[test]
fn resolutions_are_exact_and_minimal() {
    each(suite::check_resolutions);
}

#[test]
fn ext_profiles() {
    each(suite::check_ext);
}

#[test]
fn koszul_oracle_values() {
    // Ext^q(k, A) over k[x1..xn] is k in degree -n at q = n and zero otherwise.
    let inst = all_instances().into_iter().find(|i| i.name == "koszul3").unwrap();
    let ext = reesjump_core::homalg::ExtComputation::new(&inst.m, &inst.n).unwrap();
    for q in 0..=3 {
        let dims: Vec<u64> = (-6..=3).map(|d| oracle::ext_dim(&ext.resolution, &inst.n, q, d)).collect();
        let want: Vec<u64> = (-6..=3).map(|d| u64::from(q == 3 && d == -3)).collect();
        assert_eq!(dims, want, "q={q}");
    }
}
