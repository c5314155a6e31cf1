//! Chain complexes over Q with exact homology, Hochschild chains of
//! finite-dimensional algebras, the HKR comparison map, and the truncated
//! Rees algebra of differential operators.

pub mod algebra;
pub mod bar;
pub mod complex;
pub mod hkr;
pub mod linalg;
pub mod rees;

pub use algebra::FinDimAlgebra;
pub use bar::{bar_complex, hh_dims, normalized_bar_complex, DEFAULT_SIZE_BUDGET};
pub use complex::ChainComplex;
pub use hkr::{h1_window_report, hkr_map, HkrMap, HkrReport};
pub use linalg::SparseMat;
pub use rees::{ReesAlgebra, ReesBounds, ReesElement};
