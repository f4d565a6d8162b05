//! Computational toolkit for the Bose representation of PG(2,q³) in PG(8,q)
//! and the GF(q)-substructures it carries.

pub mod bose;
pub mod error;
pub mod fields;
pub mod forms;
pub mod harness;
pub mod projgeom;
pub mod rng;
pub mod substructures;

pub use bose::{BoseFrame, PlanePointPair, SpreadReport};
pub use error::{Error, Result};
pub use fields::{FieldElem, FieldTower, Level, LevelField};
pub use forms::{
    conic_to_quadrics, expand_form, verify_cone, ConeReport, ExpandedForm, HomogeneousForm,
    VarietyHandle,
};
pub use harness::{run_suite, CheckReport, SuiteParams, SuiteReport, SUITES};
pub use projgeom::{span, Matrix, ProjPoint, Subspace, DEFAULT_CAP};
pub use rng::Rng;
