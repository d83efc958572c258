//! Benchmark inputs shared by the criterion targets.

use reesjump_core::homalg::{FPModule, Mode};
use reesjump_core::parse::parse_polynomial;
use reesjump_core::{FieldDesc, GradedRingDesc, Polynomial, RingRef};

pub fn ring(vars: &[&str]) -> RingRef {
    GradedRingDesc::standard(FieldDesc::Rationals, vars)
}

pub fn polys(r: &RingRef, texts: &[&str]) -> Vec<Polynomial> {
    texts.iter().map(|t| parse_polynomial(r, t).expect("valid polynomial")).collect()
}

/// The twisted cubic: a codimension-two ideal with a length-two resolution.
pub fn twisted_cubic() -> (RingRef, Vec<Polynomial>) {
    let r = ring(&["x", "y", "z", "w"]);
    let g = polys(&r, &["x*z - y^2", "y*w - z^2", "x*w - y*z"]);
    (r, g)
}

pub fn cyclic(r: &RingRef, g: &[Polynomial]) -> FPModule {
    FPModule::cyclic(r, g, Mode::Graded).expect("homogeneous generators")
}
