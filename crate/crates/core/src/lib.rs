//! Exact exterior calculus for invariant forms on 3-Sasakian 7-manifolds and
//! the two pullback settings (Calabi-Yau circle bundles and hypersymplectic
//! torus bundles), with deformed G2-instanton classification and analysis of
//! the associated Chern-Simons type functional.

pub mod cdga;
pub mod error;
pub mod functional;
pub mod instanton;
pub mod models;
pub mod scalars;
pub mod verify;

pub use error::{Error, Result};
