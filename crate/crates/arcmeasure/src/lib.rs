//! Probability measures on unions of circular arcs, through the
//! rational functions on the hyperelliptic double that generate them.
//!
//! The pipeline: validate an arc set E and its gaps ([`arcset`]); build
//! the branch-tracked square root on the double ([`curve`]); construct
//! the Caratheodory-class function with a prescribed pole divisor and
//! recover divisors from samples ([`mfunc`]); extract the measure as
//! arc densities plus gap atoms ([`measure`]); and read the reflection
//! coefficients two independent ways, by the Schur algorithm on the
//! function side ([`schur`], [`moebius`]) and by the monic recursion on
//! the polynomial side ([`opuc`]). The [`hardy0`] module carries the
//! fully explicit one-arc model with closed-form kernels, used to pin
//! every convention numerically.

pub mod arcset;
pub mod curve;
pub mod error;
pub mod hardy0;
pub mod linalg;
pub mod measure;
pub mod mfunc;
pub mod moebius;
pub mod opuc;
pub mod poly;
pub mod schur;

pub use arcset::{Arc, ArcSet, Gap};
pub use curve::{Divisor, DivisorPoint, HyperellipticCurve, SurfacePoint};
pub use error::{Error, Result};
pub use measure::{atom_masses, density, quadrature, QuadratureMeasure};
pub use mfunc::{build_m, fit_m, select_theta, FitOutcome, SurfaceFunction};
pub use moebius::{
    cayley_caratheodory_to_schur, cayley_schur_to_caratheodory, lambda_map, theta_family,
    AnalyticFn, Domain, MoebiusMap,
};
pub use opuc::{cross_validate, verblunsky_from_measure, MonicOpuc};
pub use schur::{compose, schur_sequence, strip, SampledSchurFn, SchurParamSeq};
