//! Exact extension-operator kernels on the spaces `σ_n(2^X)` of finite subsets.
//!
//! A linear extension operator `C(σ_m) → C(σ_n)` is stored through its
//! generalized retraction: one finitely supported signed measure on `σ_m`
//! per point of `σ_n`. Everything is computed over the rationals.

pub mod ball;
pub mod canonical;
pub mod chain;
pub mod cli;
pub mod combinat;
pub mod error;
pub mod freeset;
pub mod io;
pub mod kernel;
pub mod linalg;
pub mod measure;
pub mod naturality;
pub mod rational;
pub mod report;
pub mod subset;

pub use error::{Error, Result};
pub use kernel::{ExtensionKernel, Injection, PointFunction};
pub use measure::SignedMeasure;
pub use rational::Rational;
pub use subset::{GroundSet, SigmaSpace, Subset};
