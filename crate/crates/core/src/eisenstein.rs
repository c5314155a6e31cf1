//! Bernoulli numbers, divisor power sums, and the rationally normalized
//! Eisenstein series with its floating-point lattice-sum oracle.
//!
//! The canonical exact object is
//!
//! ```text
//! e_{2k}(q) = -B_{2k}/(2k) + 2 * sum_{n>=1} sigma_{2k-1}(n) q^n,
//! ```
//!
//! the rational rescaling (2k-1)!/(2 pi i)^{2k} of the weight-2k lattice sum;
//! the raw complex-valued sum exists only in the oracle below.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::qseries::QSeries;
use crate::rational::{binomial, rat, Rational};

/// Bernoulli number B_n with the convention B_1 = -1/2, via the recurrence
/// sum_{k=0..n} C(n+1,k) B_k = 0.
pub fn bernoulli(n: usize) -> Rational {
    let mut b: Vec<Rational> = Vec::with_capacity(n + 1);
    for m in 0..=n {
        if m == 0 {
            b.push(Rational::one());
            continue;
        }
        let mut acc = Rational::zero();
        for (k, bk) in b.iter().enumerate() {
            if !bk.is_zero() {
                acc += Rational::from_integer(binomial(m as u64 + 1, k as u64)) * bk;
            }
        }
        b.push(-acc / rat(m as i64 + 1));
    }
    b.pop().expect("n >= 0")
}

/// sigma_m(n) = sum of d^m over divisors d of n. Rejects n = 0.
pub fn divisor_power_sum(n: u64, m: u32) -> Result<BigInt> {
    if n == 0 {
        return Err(Error::Domain("divisor_power_sum requires n >= 1".into()));
    }
    let mut acc = BigInt::zero();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            acc += BigInt::from(d).pow(m);
            let e = n / d;
            if e != d {
                acc += BigInt::from(e).pow(m);
            }
        }
        d += 1;
    }
    Ok(acc)
}

/// The series e_{2k}(q) truncated at `order`. Rejects k = 0.
///
/// The constant term -B_{2k}/(2k) is the zeta-identity value
/// 2 zeta(2k) (2k-1)!/(2 pi i)^{2k}; the q-coefficients are 2 sigma_{2k-1}(n).
pub fn eisenstein_q(k: u32, order: usize) -> Result<QSeries> {
    if k == 0 {
        return Err(Error::Domain("eisenstein_q requires k >= 1".into()));
    }
    let mut coeffs = vec![Rational::zero(); order + 1];
    coeffs[0] = -bernoulli(2 * k as usize) / rat(2 * k as i64);
    for n in 1..=order {
        let sigma = divisor_power_sum(n as u64, 2 * k - 1)?;
        coeffs[n] = Rational::from_integer(sigma * BigInt::from(2));
    }
    Ok(QSeries::from_coeffs(coeffs))
}

/// Numerically evaluated truncated lattice sum, the oracle for
/// [`eisenstein_q`].
#[derive(Clone, Copy, Debug)]
pub struct LatticeSumEstimate {
    pub value: Complex64,
    pub cutoff: u32,
    pub tau: Complex64,
}

/// (2k-1)!/(2 pi i)^{2k} * sum over (m,n) in [-cutoff,cutoff]^2 \ {0} of
/// (m + n tau)^{-2k}, accumulated over square shells of increasing
/// max(|m|,|n|), in double precision.
///
/// Requires k >= 2 (absolute convergence; no summation convention is chosen
/// for the conditionally convergent weight-2 sum) and Im(tau) > 0.
pub fn eisenstein_lattice_numeric(
    k: u32,
    tau: Complex64,
    cutoff: u32,
) -> Result<LatticeSumEstimate> {
    if k < 2 {
        return Err(Error::Domain(
            "eisenstein_lattice_numeric requires k >= 2 (absolute convergence)".into(),
        ));
    }
    if !(tau.im > 0.0) {
        return Err(Error::Domain(
            "eisenstein_lattice_numeric requires Im(tau) > 0".into(),
        ));
    }
    if cutoff == 0 {
        return Err(Error::Domain("cutoff must be >= 1".into()));
    }
    let power = -2 * k as i32;
    let mut total = Complex64::new(0.0, 0.0);
    for shell in 1..=cutoff as i64 {
        let mut s = Complex64::new(0.0, 0.0);
        for m in -shell..=shell {
            s += (Complex64::new(m as f64, 0.0) + tau * shell as f64).powi(power);
            s += (Complex64::new(m as f64, 0.0) - tau * shell as f64).powi(power);
        }
        for n in (1 - shell)..shell {
            s += (Complex64::new(shell as f64, 0.0) + tau * n as f64).powi(power);
            s += (Complex64::new(-shell as f64, 0.0) + tau * n as f64).powi(power);
        }
        total += s;
    }
    // (2k-1)!/(2 pi i)^{2k} = (-1)^k (2k-1)!/(2 pi)^{2k}, a real factor.
    let fact = crate::rational::factorial(2 * k as u64 - 1)
        .to_f64()
        .expect("(2k-1)! fits in f64 for sane k");
    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
    let norm = sign * fact / (2.0 * std::f64::consts::PI).powi(2 * k as i32);
    Ok(LatticeSumEstimate { value: total * norm, cutoff, tau })
}

/// q = exp(2 pi i tau) in double precision.
pub fn nome(tau: Complex64) -> Complex64 {
    (Complex64::new(0.0, 2.0 * std::f64::consts::PI) * tau).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    #[test]
    fn bernoulli_base_and_recurrence_values() {
        assert_eq!(bernoulli(0), rat(1));
        assert_eq!(bernoulli(1), ratio(-1, 2));
        assert_eq!(bernoulli(2), ratio(1, 6));
        assert_eq!(bernoulli(3), rat(0));
        assert_eq!(bernoulli(4), ratio(-1, 30));
        assert_eq!(bernoulli(6), ratio(1, 42));
        assert_eq!(bernoulli(12), ratio(-691, 2730));
    }

    #[test]
    fn odd_bernoulli_vanish() {
        for k in 1..=20 {
            assert_eq!(bernoulli(2 * k + 1), rat(0), "B_{}", 2 * k + 1);
        }
    }

    #[test]
    fn divisor_sums() {
        assert_eq!(divisor_power_sum(1, 3).unwrap(), BigInt::from(1));
        assert_eq!(divisor_power_sum(2, 3).unwrap(), BigInt::from(9));
        assert_eq!(divisor_power_sum(3, 3).unwrap(), BigInt::from(28));
        assert_eq!(divisor_power_sum(6, 1).unwrap(), BigInt::from(12));
        assert!(divisor_power_sum(0, 3).is_err());
    }

    #[test]
    fn eisenstein_series_small_orders() {
        let e4 = eisenstein_q(2, 2).unwrap();
        assert_eq!(e4.coeff(0), ratio(1, 120));
        assert_eq!(e4.coeff(1), rat(2));
        assert_eq!(e4.coeff(2), rat(18));

        let e6 = eisenstein_q(3, 1).unwrap();
        assert_eq!(e6.coeff(0), ratio(-1, 252));
        assert_eq!(e6.coeff(1), rat(2));

        let c = eisenstein_q(2, 0).unwrap();
        assert_eq!(c.coeff(0), ratio(1, 120));

        assert!(eisenstein_q(0, 3).is_err());
    }

    #[test]
    fn lattice_oracle_preconditions() {
        let tau = Complex64::new(0.0, 2.0);
        assert!(eisenstein_lattice_numeric(1, tau, 10).is_err());
        assert!(eisenstein_lattice_numeric(2, Complex64::new(1.0, 0.0), 10).is_err());
        assert!(eisenstein_lattice_numeric(2, Complex64::new(0.0, -2.0), 10).is_err());
        assert!(eisenstein_lattice_numeric(2, tau, 0).is_err());
    }

    #[test]
    fn lattice_oracle_q_to_zero_limit() {
        // tau = 10^6 i: q is essentially 0, so the sum approaches -B_4/4 = 1/120.
        let est = eisenstein_lattice_numeric(2, Complex64::new(0.0, 1e6), 100).unwrap();
        let expect = 1.0 / 120.0;
        assert!(
            (est.value.re - expect).abs() / expect < 1e-6,
            "got {}",
            est.value.re
        );
        assert!(est.value.im.abs() < 1e-12);
    }

    #[test]
    fn lattice_oracle_agrees_with_series_weight_6() {
        // k = 3 converges fast: already at cutoff 200 agreement is ~1e-12.
        let tau = Complex64::new(0.0, 2.0);
        let est = eisenstein_lattice_numeric(3, tau, 200).unwrap();
        let series = eisenstein_q(3, 10).unwrap().eval_complex(nome(tau));
        let rel = (est.value - series).norm() / series.norm();
        assert!(rel < 1e-8, "relative error {rel}");
    }
}
