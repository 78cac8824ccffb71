//! Weighted polyanalytic Bergman, Dirichlet and Besov spaces on the unit disk
//! and on the upper half-plane.
//!
//! A q-analytic function is stored through its analytic components,
//! `f(z) = h_0(z) + z̄ h_1(z) + ... + z̄^{q-1} h_{q-1}(z)`, each `h_k` a
//! polynomial. Wirtinger derivatives, dilatations `f_r(z) = f(rz)` and
//! truncations act on coefficients exactly; norms are evaluated by product
//! quadrature against the weighted area measure.
//!
//! The numerical core is generic over the real scalar (`f32`, `f64`); the
//! coefficient algebra in [`polyfun`] also works over exact rationals.
//! Concrete `f64` aliases are exported at the crate root.

// Guards such as `!(x > 0)` are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod csv;
pub mod domain;
pub mod error;
pub mod experiments;
pub mod function_file;
pub mod norms;
pub mod polyfun;
pub mod quadrature;
pub mod scalar;
pub mod weights;

pub use domain::Domain;
pub use error::{Error, Result};
pub use scalar::Scalar;

pub type PowerSeries64 = polyfun::PowerSeries<f64>;
pub type PolyFunction64 = polyfun::PolyFunction<f64>;
pub type DilationFactor64 = polyfun::DilationFactor<f64>;
pub type WeightSpec64 = weights::WeightSpec<f64>;
pub type QuadratureGrid64 = quadrature::QuadratureGrid<f64>;
pub type SpaceSpec64 = norms::SpaceSpec<f64>;
pub type NormResult64 = norms::NormResult<f64>;
pub type QuadOptions64 = norms::QuadOptions<f64>;
pub type ConvergenceReport64 = experiments::ConvergenceReport<f64>;

pub type PolyFunction32 = polyfun::PolyFunction<f32>;
pub type SpaceSpec32 = norms::SpaceSpec<f32>;
