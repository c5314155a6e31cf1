//! Exact-arithmetic computational algebra:
//!
//! - truncated q-series over the rationals, Bernoulli numbers, and the
//!   rationally normalized Eisenstein series with a floating-point
//!   lattice-sum oracle ([`qseries`], [`eisenstein`]);
//! - finite graded-commutative ring models of even cohomology with Chern
//!   character, Todd, A-hat and Witten classes and genus integration
//!   ([`charring`]);
//! - chain complexes over Q with exact homology, Hochschild (bar) complexes
//!   of finite-dimensional algebras, the HKR comparison map, and the Rees
//!   algebra of differential operators in one variable ([`homalg`]);
//! - combinatorial factorization algebras on the line and on circles:
//!   structure maps, factorizing covers, Cech complexes, extension from a
//!   grid basis, and factorization homology of the circle ([`factalg`]);
//! - a checker for P0 / BD / filtered-BD algebra presentations together with
//!   the odd-cotangent model, bracket-twisted differentials and conjugation
//!   ([`bd`]).
//!
//! Everything outside the lattice-sum oracle is exact: coefficients are
//! arbitrary-precision rationals and all homology ranks come from exact
//! elimination.

pub mod bd;
pub mod charring;
pub mod eisenstein;
pub mod error;
pub mod factalg;
pub mod geom;
pub mod homalg;
pub mod qseries;
pub mod rational;
pub mod scalar;

pub use error::Error;
pub use qseries::QSeries;
pub use rational::Rational;
