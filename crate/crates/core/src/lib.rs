//! Exact computational algebra over weighted polynomial rings.
//!
//! The crate builds Gröbner bases, free resolutions and Ext for finitely
//! presented graded modules, constructs Rees rings and Rees modules together
//! with the specializations `t = 0` and `t = 1`, computes over the principal
//! ideal domains `k[t]` and `k[t, t^-1]`, and packages all of it into
//! machine-checkable reports comparing graded and ungraded homological
//! dimensions.

pub mod budget;
pub mod dispatch;
pub mod error;
pub mod field;
pub mod fuzz;
pub mod groebner;
pub mod homalg;
pub mod parse;
pub mod pid;
pub mod poly;
pub mod rees;
pub mod report;
pub mod task;
pub mod verify;

pub use dispatch::{run, CheckFamily, Command, SessionConfig};
pub use error::{Error, Result};
pub use field::{FieldDesc, Scalar};
pub use groebner::{FreeModuleDesc, GroebnerBasis, ModuleElement, MonomialOrderDesc};
pub use poly::{BaseOrder, GradedRingDesc, Monomial, Polynomial, RingRef, WeightedDegree};
pub use report::Format;
pub use verify::{CheckReport, Status};
