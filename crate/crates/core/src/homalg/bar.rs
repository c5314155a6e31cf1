//! Hochschild chains: the unnormalized cyclic bar complex C_n = A^{(n+1)}
//! with the standard boundary (cyclic last face), plus the normalized
//! variant used as a size optimization. Both must produce identical
//! homology dimensions; the tests enforce it.

use crate::error::{Error, Result};
use crate::homalg::algebra::FinDimAlgebra;
use crate::homalg::complex::ChainComplex;
use crate::homalg::linalg::SparseMat;
use crate::rational::{rat, Rational};
use num_traits::Zero;

pub const DEFAULT_SIZE_BUDGET: usize = 20_000;

fn check_plain(algebra: &FinDimAlgebra) -> Result<()> {
    if !algebra.is_trivially_graded() {
        return Err(Error::InvalidSpec(
            "bar complex is implemented for trivially graded algebras only".into(),
        ));
    }
    Ok(())
}

/// The unnormalized Hochschild complex in degrees 0..=max_degree.
pub fn bar_complex(
    algebra: &FinDimAlgebra,
    max_degree: usize,
    budget: usize,
) -> Result<ChainComplex> {
    check_plain(algebra)?;
    let dim = algebra.dim();
    let mut dims = Vec::with_capacity(max_degree + 1);
    let mut total: usize = 0;
    for n in 0..=max_degree {
        let d = dim
            .checked_pow(n as u32 + 1)
            .ok_or(Error::SizeBudget { needed: usize::MAX, budget })?;
        total = total.saturating_add(d);
        if total > budget {
            return Err(Error::SizeBudget { needed: total, budget });
        }
        dims.push(d);
    }
    let mut boundaries = Vec::new();
    for n in 1..=max_degree {
        boundaries.push(bar_boundary(algebra, n));
    }
    ChainComplex::new(0, dims, boundaries)
}

/// b : A^{(n+1)} -> A^{(n)}, tuples indexed mixed-radix with slot 0 most
/// significant.
fn bar_boundary(algebra: &FinDimAlgebra, n: usize) -> SparseMat {
    let dim = algebra.dim();
    let src = dim.pow(n as u32 + 1);
    let dst = dim.pow(n as u32);
    let mut triplets = Vec::new();
    let mut tuple = vec![0usize; n + 1];
    for s in 0..src {
        // decode
        let mut x = s;
        for slot in (0..=n).rev() {
            tuple[slot] = x % dim;
            x /= dim;
        }
        // inner faces: multiply slots i, i+1
        for i in 0..n {
            let sign = if i % 2 == 0 { rat(1) } else { rat(-1) };
            for (k, c) in algebra.basis_product(tuple[i], tuple[i + 1]) {
                let mut t = 0usize;
                for (slot, &b) in tuple.iter().enumerate() {
                    match slot.cmp(&(i + 1)) {
                        std::cmp::Ordering::Less if slot == i => t = t * dim + k,
                        std::cmp::Ordering::Less => t = t * dim + b,
                        std::cmp::Ordering::Equal => {}
                        std::cmp::Ordering::Greater => t = t * dim + b,
                    }
                }
                triplets.push((t, s, c * &sign));
            }
        }
        // cyclic face: (a_n a_0) | a_1 .. a_{n-1}
        let sign = if n % 2 == 0 { rat(1) } else { rat(-1) };
        for (k, c) in algebra.basis_product(tuple[n], tuple[0]) {
            let mut t = *k;
            for &b in tuple.iter().take(n).skip(1) {
                t = t * dim + b;
            }
            triplets.push((t, s, c * &sign));
        }
    }
    SparseMat::from_triplets(dst, src, triplets)
}

/// Hochschild homology dimensions in degrees 0..=max_degree, computed from
/// the bar complex built one degree higher.
pub fn hh_dims(
    algebra: &FinDimAlgebra,
    max_degree: usize,
    budget: usize,
) -> Result<Vec<usize>> {
    let c = bar_complex(algebra, max_degree + 1, budget)?;
    Ok(c.homology_dims(0..=(max_degree as i64)))
}

/// The normalized complex A (x) Abar^{(n)}, Abar = A / Q.1.
pub fn normalized_bar_complex(
    algebra: &FinDimAlgebra,
    max_degree: usize,
    budget: usize,
) -> Result<ChainComplex> {
    check_plain(algebra)?;
    let dim = algebra.dim();
    let unit = algebra.unit();
    let pivot = unit
        .iter()
        .position(|c| !c.is_zero())
        .ok_or_else(|| Error::InvalidSpec("unit is zero".into()))?;
    // quotient basis: all indices except pivot; projection of e_pivot is
    // -(1/unit_pivot) * (unit restricted to the other coordinates)
    let qbasis: Vec<usize> = (0..dim).filter(|&i| i != pivot).collect();
    let qindex: Vec<Option<usize>> = (0..dim)
        .map(|i| qbasis.iter().position(|&b| b == i))
        .collect();
    let qdim = qbasis.len();
    let project = |i: usize| -> Vec<(usize, Rational)> {
        if i != pivot {
            vec![(qindex[i].unwrap(), rat(1))]
        } else {
            qbasis
                .iter()
                .enumerate()
                .filter(|(_, &b)| !unit[b].is_zero())
                .map(|(qi, &b)| (qi, -&unit[b] / &unit[pivot]))
                .collect()
        }
    };

    let mut dims = Vec::with_capacity(max_degree + 1);
    let mut total = 0usize;
    for n in 0..=max_degree {
        let d = dim * qdim.pow(n as u32);
        total = total.saturating_add(d);
        if total > budget {
            return Err(Error::SizeBudget { needed: total, budget });
        }
        dims.push(d);
    }

    let mut boundaries = Vec::new();
    for n in 1..=max_degree {
        let src = dim * qdim.pow(n as u32);
        let dst = dim * qdim.pow(n as u32 - 1);
        let mut triplets = Vec::new();
        let mut tuple = vec![0usize; n + 1];
        for s in 0..src {
            // decode: slot 0 in A, slots 1..n in qbasis (store lifted index)
            let mut x = s;
            for slot in (1..=n).rev() {
                tuple[slot] = qbasis[x % qdim];
                x /= qdim;
            }
            tuple[0] = x % dim;
            // encode a target: slot 0 raw, others projected
            let push = |sign: &Rational,
                            c: &Rational,
                            slots: &[(usize, bool)] /* (basis idx in A, needs projection) */,
                            triplets: &mut Vec<(usize, usize, Rational)>| {
                // expand projections (at most one slot actually needs it)
                fn rec(
                    slots: &[(usize, bool)],
                    pos: usize,
                    acc_idx: usize,
                    acc_coef: Rational,
                    dim: usize,
                    qdim: usize,
                    project: &dyn Fn(usize) -> Vec<(usize, Rational)>,
                    out: &mut Vec<(usize, Rational)>,
                ) {
                    if pos == slots.len() {
                        out.push((acc_idx, acc_coef));
                        return;
                    }
                    let (b, needs) = slots[pos];
                    if pos == 0 {
                        rec(slots, pos + 1, b, acc_coef, dim, qdim, project, out);
                    } else if !needs {
                        // already a quotient basis element
                        let qi = project(b);
                        debug_assert_eq!(qi.len(), 1);
                        rec(
                            slots,
                            pos + 1,
                            acc_idx * qdim + qi[0].0,
                            acc_coef,
                            dim,
                            qdim,
                            project,
                            out,
                        );
                    } else {
                        for (qi, w) in project(b) {
                            rec(
                                slots,
                                pos + 1,
                                acc_idx * qdim + qi,
                                &acc_coef * &w,
                                dim,
                                qdim,
                                project,
                                out,
                            );
                        }
                    }
                }
                let mut out = Vec::new();
                rec(slots, 0, 0, sign * c, dim, qdim, &project, &mut out);
                for (t, v) in out {
                    triplets.push((t, s, v));
                }
            };

            for i in 0..n {
                let sign = if i % 2 == 0 { rat(1) } else { rat(-1) };
                for (k, c) in algebra.basis_product(tuple[i], tuple[i + 1]) {
                    let mut slots: Vec<(usize, bool)> = Vec::with_capacity(n);
                    for (slot, &b) in tuple.iter().enumerate() {
                        if slot == i {
                            slots.push((*k, slot != 0));
                        } else if slot == i + 1 {
                            continue;
                        } else {
                            slots.push((b, false));
                        }
                    }
                    // a slot that is the pivot itself vanishes in the quotient
                    if slots.iter().skip(1).any(|&(b, needs)| !needs && b == pivot) {
                        continue;
                    }
                    push(&sign, c, &slots, &mut triplets);
                }
            }
            let sign = if n % 2 == 0 { rat(1) } else { rat(-1) };
            for (k, c) in algebra.basis_product(tuple[n], tuple[0]) {
                let mut slots: Vec<(usize, bool)> = Vec::with_capacity(n);
                slots.push((*k, false));
                for &b in tuple.iter().take(n).skip(1) {
                    slots.push((b, false));
                }
                push(&sign, c, &slots, &mut triplets);
            }
        }
        boundaries.push(SparseMat::from_triplets(dst, src, triplets));
    }
    ChainComplex::new(0, dims, boundaries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homalg::algebra;

    #[test]
    fn hh_of_ground_field() {
        let a = algebra::ground_field();
        assert_eq!(hh_dims(&a, 3, DEFAULT_SIZE_BUDGET).unwrap(), vec![1, 0, 0, 0]);
    }

    #[test]
    fn hh_of_dual_numbers_matches_periodic_resolution() {
        // Independent oracle: the 2-periodic resolution of Q[eps]/(eps^2)
        // gives the complex A <-0- A <-2eps- A <-0- A <-2eps- ...
        // whose homology dims are (2,1,1,1,...).
        let a = algebra::dual_numbers();
        let dims = hh_dims(&a, 3, DEFAULT_SIZE_BUDGET).unwrap();

        // oracle complex: degrees 0..4, maps alternate 0 and mult-by-2eps
        let zero = SparseMat::zero(2, 2);
        let two_eps = SparseMat::from_triplets(2, 2, vec![(1, 0, rat(2))]);
        let oracle = ChainComplex::new(
            0,
            vec![2; 5],
            vec![zero.clone(), two_eps.clone(), zero.clone(), two_eps.clone()],
        )
        .unwrap();
        let oracle_dims = oracle.homology_dims(0..=3);
        assert_eq!(oracle_dims, vec![2, 1, 1, 1]);
        assert_eq!(dims, oracle_dims);
    }

    #[test]
    fn hh_of_field_product_and_group_algebra() {
        let dims = hh_dims(&algebra::field_product(), 2, DEFAULT_SIZE_BUDGET).unwrap();
        assert_eq!(dims, vec![2, 0, 0]);
        let dims = hh_dims(&algebra::group_algebra_c2(), 2, DEFAULT_SIZE_BUDGET).unwrap();
        assert_eq!(dims, vec![2, 0, 0]);
    }

    #[test]
    fn hh_of_matrices_is_morita_trivial() {
        let a = algebra::matrix_algebra_2();
        let dims = hh_dims(&a, 2, DEFAULT_SIZE_BUDGET).unwrap();
        assert_eq!(dims, vec![1, 0, 0]);
        // independent check of H_0 = A/[A,A]
        assert_eq!(a.dim() - a.commutator_space_dim(), 1);
    }

    #[test]
    fn h0_equals_a_mod_commutators_across_suite() {
        for a in [
            algebra::ground_field(),
            algebra::dual_numbers(),
            algebra::field_product(),
            algebra::group_algebra_c2(),
            algebra::matrix_algebra_2(),
        ] {
            let dims = hh_dims(&a, 0, DEFAULT_SIZE_BUDGET).unwrap();
            assert_eq!(dims[0], a.dim() - a.commutator_space_dim());
        }
    }

    #[test]
    fn normalized_matches_unnormalized() {
        for a in [
            algebra::dual_numbers(),
            algebra::field_product(),
            algebra::matrix_algebra_2(),
            algebra::group_algebra_c2(),
        ] {
            let plain = bar_complex(&a, 3, DEFAULT_SIZE_BUDGET).unwrap();
            let norm = normalized_bar_complex(&a, 3, DEFAULT_SIZE_BUDGET).unwrap();
            assert_eq!(
                plain.homology_dims(0..=2),
                norm.homology_dims(0..=2),
                "normalized disagrees for {:?}",
                a.names()
            );
        }
    }

    #[test]
    fn budget_enforced() {
        let a = algebra::matrix_algebra_2();
        let e = bar_complex(&a, 10, 1000);
        match e {
            Err(Error::SizeBudget { needed, budget }) => {
                assert!(needed > budget);
            }
            other => panic!("expected budget error, got {other:?}"),
        }
    }
}
