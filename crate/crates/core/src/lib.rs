//! Generalized Fisher-KPP equation `u_t = (u^(m-1) u_x)_x + u^p - u^q`:
//! stationary profiles, exact separable solutions, an explicit solver and
//! certification of comparison functions.
//!
//! Everything is generic over [`Scalar`] (`f32` or `f64`); the aliases
//! below fix `f64`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod error;
pub mod exact;
pub mod model;
pub mod numerics;
pub mod pde;
pub mod scalar;
pub mod specfun;
pub mod stationary;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type Params = model::ModelParams<f64>;
pub type Profile = stationary::StationaryProfile<f64>;
pub type Separable = exact::SeparableSolution<f64>;
pub type Field = pde::GridField<f64>;
pub type Config = pde::SimConfig<f64>;
pub type Run = pde::RunResult<f64>;
pub type ScaledSub = analysis::ScaledProfileSub<f64>;
pub type SelfSimilar = analysis::SelfSimilarSub<f64>;

pub type Params32 = model::ModelParams<f32>;
pub type Profile32 = stationary::StationaryProfile<f32>;
pub type Field32 = pde::GridField<f32>;
pub type Config32 = pde::SimConfig<f32>;
