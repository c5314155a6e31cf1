//! The Rees algebra of differential operators in one variable, truncated:
//! monomials x^a p^b h^c (h is the formal parameter, p = h*d/dx) with the
//! normal-ordering relation p x = x p + h. Products that would exceed the
//! bounds are dropped term-by-term and flagged; flagged elements are
//! excluded from exact assertions.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::rational::{binomial, factorial, rat, Rational};
use num_traits::Zero;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ReesBounds {
    pub x: u32,
    pub p: u32,
    pub h: u32,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReesElement {
    /// (x exponent, p exponent, h exponent) -> coefficient
    pub terms: BTreeMap<(u32, u32, u32), Rational>,
    /// true when some product term escaped the bounds and was dropped
    pub truncated: bool,
}

impl ReesElement {
    pub fn zero() -> Self {
        ReesElement { terms: BTreeMap::new(), truncated: false }
    }

    pub fn monomial(x: u32, p: u32, h: u32) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert((x, p, h), rat(1));
        ReesElement { terms, truncated: false }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.values().all(|c| c.is_zero())
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (k, v) in &other.terms {
            let e = terms.entry(*k).or_insert_with(Rational::zero);
            *e += v;
            if e.is_zero() {
                terms.remove(k);
            }
        }
        ReesElement { terms, truncated: self.truncated || other.truncated }
    }

    pub fn neg(&self) -> Self {
        ReesElement {
            terms: self.terms.iter().map(|(k, v)| (*k, -v)).collect(),
            truncated: self.truncated,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }
}

#[derive(Clone, Copy, Debug)]
pub struct ReesAlgebra {
    pub bounds: ReesBounds,
}

impl ReesAlgebra {
    pub fn new(bounds: ReesBounds) -> Result<Self> {
        if bounds.x == 0 || bounds.p == 0 || bounds.h == 0 {
            return Err(Error::Domain("rees bounds must be >= 1".into()));
        }
        Ok(ReesAlgebra { bounds })
    }

    pub fn x(&self) -> ReesElement {
        ReesElement::monomial(1, 0, 0)
    }

    pub fn p(&self) -> ReesElement {
        ReesElement::monomial(0, 1, 0)
    }

    pub fn h(&self) -> ReesElement {
        ReesElement::monomial(0, 0, 1)
    }

    pub fn one(&self) -> ReesElement {
        ReesElement::monomial(0, 0, 0)
    }

    /// Normal-ordered product:
    /// p^b x^a = sum_j C(b,j) C(a,j) j! h^j x^{a-j} p^{b-j}.
    pub fn mul(&self, lhs: &ReesElement, rhs: &ReesElement) -> ReesElement {
        let mut out = ReesElement::zero();
        out.truncated = lhs.truncated || rhs.truncated;
        for ((x1, p1, h1), c1) in &lhs.terms {
            for ((x2, p2, h2), c2) in &rhs.terms {
                let jmax = (*p1).min(*x2);
                for j in 0..=jmax {
                    let coeff = c1
                        * c2
                        * Rational::from_integer(
                            binomial(*p1 as u64, j as u64)
                                * binomial(*x2 as u64, j as u64)
                                * factorial(j as u64),
                        );
                    if coeff.is_zero() {
                        continue;
                    }
                    let key = (x1 + x2 - j, p1 + p2 - j, h1 + h2 + j);
                    if key.0 > self.bounds.x || key.1 > self.bounds.p || key.2 > self.bounds.h {
                        out.truncated = true;
                        continue;
                    }
                    let e = out.terms.entry(key).or_insert_with(Rational::zero);
                    *e += coeff;
                    if e.is_zero() {
                        out.terms.remove(&key);
                    }
                }
            }
        }
        out
    }

    pub fn commutator(&self, a: &ReesElement, b: &ReesElement) -> ReesElement {
        self.mul(a, b).sub(&self.mul(b, a))
    }

    /// h -> 0: keep only h-free terms; the result is a commutative
    /// truncated polynomial ring in x and p.
    pub fn specialize_h0(&self, e: &ReesElement) -> ReesElement {
        ReesElement {
            terms: e.terms.iter().filter(|((_, _, h), _)| *h == 0).map(|(k, v)| (*k, v.clone())).collect(),
            truncated: e.truncated,
        }
    }

    /// h -> 1: fold the h exponent away; on in-bounds monomials the result
    /// satisfies the Weyl relation [p, x] = 1.
    pub fn specialize_h1(&self, e: &ReesElement) -> ReesElement {
        let mut terms: BTreeMap<(u32, u32, u32), Rational> = BTreeMap::new();
        for ((x, p, _), v) in &e.terms {
            let entry = terms.entry((*x, *p, 0)).or_insert_with(Rational::zero);
            *entry += v;
        }
        terms.retain(|_, v| !v.is_zero());
        ReesElement { terms, truncated: e.truncated }
    }

    /// All in-bounds monomials, for exhaustive property checks.
    pub fn monomials(&self) -> Vec<ReesElement> {
        let mut out = Vec::new();
        for x in 0..=self.bounds.x {
            for p in 0..=self.bounds.p {
                for h in 0..=self.bounds.h {
                    out.push(ReesElement::monomial(x, p, h));
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alg() -> ReesAlgebra {
        ReesAlgebra::new(ReesBounds { x: 4, p: 4, h: 4 }).unwrap()
    }

    #[test]
    fn p_x_commutator_is_h() {
        let a = alg();
        let c = a.commutator(&a.p(), &a.x());
        assert_eq!(c, a.h());
        assert!(!c.truncated);
    }

    #[test]
    fn p_squared_x_normal_order() {
        // p^2 x = x p^2 + 2 h p
        let a = alg();
        let lhs = a.mul(&a.mul(&a.p(), &a.p()), &a.x());
        let expected = a
            .mul(&a.x(), &a.mul(&a.p(), &a.p()))
            .add(&ReesElement {
                terms: [((0, 1, 1), rat(2))].into_iter().collect(),
                truncated: false,
            });
        assert_eq!(lhs, expected);
    }

    #[test]
    fn h0_specialization_commutes() {
        let a = alg();
        let px = a.specialize_h0(&a.mul(&a.p(), &a.x()));
        let xp = a.specialize_h0(&a.mul(&a.x(), &a.p()));
        assert_eq!(px, xp);
    }

    #[test]
    fn h1_specialization_weyl_relation() {
        let a = alg();
        let c = a.specialize_h1(&a.commutator(&a.p(), &a.x()));
        assert_eq!(c, a.one());
    }

    #[test]
    fn specializations_are_ring_maps_on_window() {
        // phi(m1 m2) = phi(m1) phi(m2) for both specializations, on all
        // monomial pairs whose product stays in bounds
        let a = alg();
        let monos = a.monomials();
        for m1 in &monos {
            for m2 in &monos {
                let prod = a.mul(m1, m2);
                if prod.truncated {
                    continue;
                }
                let lhs0 = a.specialize_h0(&prod);
                let rhs0 = a.mul(&a.specialize_h0(m1), &a.specialize_h0(m2));
                assert_eq!(lhs0, a.specialize_h0(&rhs0), "h0 on {m1:?} {m2:?}");
                let lhs1 = a.specialize_h1(&prod);
                let rhs1 = a.specialize_h1(&a.mul(&a.specialize_h1(m1), &a.specialize_h1(m2)));
                assert_eq!(lhs1, rhs1, "h1 on {m1:?} {m2:?}");
            }
        }
    }

    #[test]
    fn truncation_is_flagged_not_fatal() {
        let a = ReesAlgebra::new(ReesBounds { x: 1, p: 1, h: 1 }).unwrap();
        let xx = a.mul(&a.x(), &a.x());
        assert!(xx.truncated);
        assert!(xx.is_zero());
        assert!(ReesAlgebra::new(ReesBounds { x: 0, p: 1, h: 1 }).is_err());
    }
}
