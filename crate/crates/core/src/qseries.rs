//! Truncated formal power series in q with exact rational coefficients.
//!
//! A `QSeries` of order N stores the coefficients of q^0 .. q^N. Binary
//! operations truncate to the minimum of the two orders, so mixed-order
//! expressions stay composable instead of erroring.

use std::fmt;

use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{format_rational, rat, to_f64, Rational};

#[derive(Clone, PartialEq, Eq)]
pub struct QSeries {
    coeffs: Vec<Rational>, // index n holds the coefficient of q^n
}

impl QSeries {
    pub fn from_coeffs(coeffs: Vec<Rational>) -> Self {
        assert!(!coeffs.is_empty(), "a series carries at least q^0");
        QSeries { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        QSeries { coeffs: vec![Rational::zero(); order + 1] }
    }

    pub fn one(order: usize) -> Self {
        Self::constant(Rational::one(), order)
    }

    pub fn constant(c: Rational, order: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); order + 1];
        coeffs[0] = c;
        QSeries { coeffs }
    }

    /// The monomial c * q^n, truncated at `order` (zero if n > order).
    pub fn monomial(c: Rational, n: usize, order: usize) -> Self {
        let mut s = Self::zero(order);
        if n <= order {
            s.coeffs[n] = c;
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, n: usize) -> Rational {
        self.coeffs.get(n).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Re-truncate (or zero-pad) to the given order.
    pub fn truncated(&self, order: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(order + 1, Rational::zero());
        coeffs.truncate(order + 1);
        QSeries { coeffs }
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        let coeffs = (0..=n).map(|i| &self.coeffs[i] + &other.coeffs[i]).collect();
        QSeries { coeffs }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        QSeries { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn scale(&self, r: &Rational) -> Self {
        QSeries { coeffs: self.coeffs.iter().map(|c| c * r).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        let mut coeffs = vec![Rational::zero(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(n + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(n + 1 - i) {
                if !b.is_zero() {
                    coeffs[i + j] += a * b;
                }
            }
        }
        QSeries { coeffs }
    }

    /// Formal exponential. Requires constant term 0.
    ///
    /// Uses f' = s' f: n f_n = sum_{j=1..n} j s_j f_{n-j}.
    pub fn exp(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::Domain(format!(
                "series_exp requires constant term 0, got {}",
                format_rational(&self.coeffs[0])
            )));
        }
        let n = self.order();
        let mut f = vec![Rational::zero(); n + 1];
        f[0] = Rational::one();
        for m in 1..=n {
            let mut acc = Rational::zero();
            for j in 1..=m {
                if !self.coeffs[j].is_zero() {
                    acc += rat(j as i64) * &self.coeffs[j] * &f[m - j];
                }
            }
            f[m] = acc / rat(m as i64);
        }
        Ok(QSeries { coeffs: f })
    }

    /// Formal logarithm. Requires constant term 1.
    pub fn log(&self) -> Result<Self> {
        if !self.coeffs[0].is_one() {
            return Err(Error::Domain(format!(
                "series_log requires constant term 1, got {}",
                format_rational(&self.coeffs[0])
            )));
        }
        let n = self.order();
        let mut g = vec![Rational::zero(); n + 1];
        for m in 1..=n {
            let mut acc = Rational::zero();
            for j in 1..m {
                if !g[j].is_zero() {
                    acc += rat(j as i64) * &g[j] * &self.coeffs[m - j];
                }
            }
            g[m] = &self.coeffs[m] - acc / rat(m as i64);
        }
        Ok(QSeries { coeffs: g })
    }

    /// Multiplicative inverse. Requires nonzero constant term.
    pub fn inverse(&self) -> Result<Self> {
        if self.coeffs[0].is_zero() {
            return Err(Error::Domain(
                "series inverse requires nonzero constant term".into(),
            ));
        }
        let n = self.order();
        let c0 = self.coeffs[0].clone();
        let mut u = vec![Rational::zero(); n + 1];
        u[0] = Rational::one() / c0.clone();
        for m in 1..=n {
            let mut acc = Rational::zero();
            for j in 1..=m {
                acc += &self.coeffs[j] * &u[m - j];
            }
            u[m] = -acc / c0.clone();
        }
        Ok(QSeries { coeffs: u })
    }

    pub fn pow(&self, k: usize) -> Self {
        let mut acc = QSeries::one(self.order());
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Evaluate at a real q in double precision (Horner).
    pub fn eval_f64(&self, q: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * q + to_f64(c);
        }
        acc
    }

    /// Evaluate at a complex q in double precision (Horner).
    pub fn eval_complex(&self, q: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * q + Complex64::new(to_f64(c), 0.0);
        }
        acc
    }
}

impl fmt::Debug for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        for (n, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if wrote {
                write!(f, " + ")?;
            }
            match n {
                0 => write!(f, "{}", format_rational(c))?,
                1 => write!(f, "{}*q", format_rational(c))?,
                _ => write!(f, "{}*q^{}", format_rational(c), n)?,
            }
            wrote = true;
        }
        if !wrote {
            write!(f, "0")?;
        }
        write!(f, " + O(q^{})", self.order() + 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn q() -> QSeries {
        QSeries::monomial(Rational::one(), 1, 3)
    }

    #[test]
    fn exp_of_zero_is_one() {
        assert_eq!(QSeries::zero(4).exp().unwrap(), QSeries::one(4));
    }

    #[test]
    fn exp_of_q_matches_taylor() {
        // 1 + q + q^2/2 + q^3/6
        let e = q().exp().unwrap();
        assert_eq!(e.coeff(0), rat(1));
        assert_eq!(e.coeff(1), rat(1));
        assert_eq!(e.coeff(2), ratio(1, 2));
        assert_eq!(e.coeff(3), ratio(1, 6));
    }

    #[test]
    fn log_exp_round_trip() {
        // log(exp(2q + q^2)) = 2q + q^2 at order 4
        let s = QSeries::monomial(rat(2), 1, 4).add(&QSeries::monomial(rat(1), 2, 4));
        let rt = s.exp().unwrap().log().unwrap();
        assert_eq!(rt, s);
    }

    #[test]
    fn mul_truncates_to_min_order() {
        let a = QSeries::one(5);
        let b = QSeries::one(2);
        assert_eq!(a.mul(&b).order(), 2);
        assert_eq!(a.add(&b).order(), 2);
    }

    #[test]
    fn inverse_round_trip() {
        let s = QSeries::from_coeffs(vec![rat(1), rat(-1), ratio(1, 2), rat(3), rat(0)]);
        let prod = s.mul(&s.inverse().unwrap());
        assert_eq!(prod, QSeries::one(4));
    }

    #[test]
    fn exp_rejects_nonzero_constant() {
        assert!(QSeries::one(3).exp().is_err());
        assert!(QSeries::zero(3).log().is_err());
    }
}
