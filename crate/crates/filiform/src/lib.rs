//! Multiplication tables and isomorphism classification for filiform Leibniz
//! algebras in low dimension.
//!
//! A Leibniz algebra is a vector space with a bilinear bracket satisfying
//! `[x,[y,z]] = [[x,y],z] - [[x,z],y]`; it is *filiform* when its lower
//! central series descends as slowly as possible (`dim L^i = n - i`).
//! Every complex filiform Leibniz algebra splits into one of three classical
//! parametric families, here called `FLeib`, `SLeib` and `TLeib`.
//!
//! The crate provides:
//!
//! * [`scalar`] — exact Gaussian-rational scalars with an optional
//!   floating-point mode, including exact n-th root detection;
//! * [`algebra`] — dense structure-constant tables, bracket evaluation, the
//!   Leibniz defect, lower central series and the filiform test;
//! * [`families`] — builders for the three families and their JSON schema;
//! * [`transform`] — the adapted base-change group, its action on `TLeib`
//!   parameters (closed form and an independent linear-solve oracle),
//!   composition, inversion and seeded random sampling;
//! * [`classify`] — the complete orbit classification of `TLeib` in
//!   dimensions 5 and 6: subsets `U5_1..U5_9` and `U6_1..U6_19`, orbit
//!   invariants, canonical representatives with explicit witness transforms,
//!   degenerate strata and isomorphism certificates;
//! * [`batch`] — bulk classification, data-parallel when the `parallel`
//!   feature (default) is enabled.

pub mod algebra;
pub mod batch;
pub mod classify;
pub mod families;
pub mod linalg;
pub mod sample;
pub mod scalar;
pub mod transform;

pub use algebra::{AlgebraTable, AlgebraError, Vector};
pub use classify::{Classification, IsoCertificate, OrbitLabel};
pub use families::{FLeibParams, Family, SLeibParams, TLeib5Params, TLeib6Params, TLeibParams};
pub use scalar::{GaussianRational, Scalar, ScalarMode, ZeroTest};
pub use transform::AdaptedTransform;
