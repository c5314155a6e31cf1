//! Coefficient rings for class and presentation arithmetic: exact rationals
//! and truncated q-series. Both are commutative Q-algebras, which is all the
//! class pipeline needs.

use crate::qseries::QSeries;
use crate::rational::Rational;
use num_traits::Zero;

pub trait Coeff: Clone + PartialEq + std::fmt::Debug {
    fn add(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    /// Multiply by an exact rational.
    fn scale(&self, r: &Rational) -> Self;
    fn vanishes(&self) -> bool;
    /// Lift a rational into this ring, shaped like `self` (a q-series picks
    /// up the truncation order of the prototype).
    fn lift(&self, r: &Rational) -> Self;
    fn to_display(&self) -> String;
}

impl Coeff for Rational {
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn scale(&self, r: &Rational) -> Self {
        self * r
    }
    fn vanishes(&self) -> bool {
        Zero::is_zero(self)
    }
    fn lift(&self, r: &Rational) -> Self {
        r.clone()
    }
    fn to_display(&self) -> String {
        crate::rational::format_rational(self)
    }
}

impl Coeff for QSeries {
    fn add(&self, other: &Self) -> Self {
        QSeries::add(self, other)
    }
    fn neg(&self) -> Self {
        QSeries::neg(self)
    }
    fn mul(&self, other: &Self) -> Self {
        QSeries::mul(self, other)
    }
    fn scale(&self, r: &Rational) -> Self {
        QSeries::scale(self, r)
    }
    fn vanishes(&self) -> bool {
        QSeries::is_zero(self)
    }
    fn lift(&self, r: &Rational) -> Self {
        QSeries::constant(r.clone(), self.order())
    }
    fn to_display(&self) -> String {
        format!("{self}")
    }
}
