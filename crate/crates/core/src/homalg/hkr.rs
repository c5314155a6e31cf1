//! The comparison map from Hochschild chains of a truncated polynomial
//! algebra to differential forms with zero differential:
//!
//! ```text
//! a_0 (x) a_1 (x) ... (x) a_m  |->  (1/m!) a_0 da_1 ^ ... ^ da_m .
//! ```
//!
//! Truncation at the top polynomial degree is not compatible with the chain
//! property, so callers assert only on the window of form coefficients of
//! degree < bound; `h1_window_report` packages the standard degree-0/1
//! checks.

use crate::error::Result;
use crate::homalg::algebra::{monomials_up_to, truncated_polynomial, FinDimAlgebra};
use crate::homalg::bar::{bar_complex, DEFAULT_SIZE_BUDGET};
use crate::homalg::complex::ChainComplex;
use crate::homalg::linalg::SparseMat;
use crate::rational::{factorial, Rational};
use num_traits::Zero;

pub struct HkrMap {
    pub n_vars: usize,
    pub bound: usize,
    /// maps[m] : bar C_m -> forms of form-degree m
    pub maps: Vec<SparseMat>,
    /// target complex: degree m holds m-forms, zero differential
    pub target: ChainComplex,
    pub source: ChainComplex,
    pub algebra: FinDimAlgebra,
}

/// Basis of m-forms: (coefficient monomial, strictly increasing dx index
/// set). Index = mono_idx * C(n,m)-block + subset rank.
fn form_subsets(n_vars: usize, m: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(n: usize, m: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == m {
            out.push(cur.clone());
            return;
        }
        for v in start..n {
            cur.push(v);
            rec(n, m, v + 1, cur, out);
            cur.pop();
        }
    }
    rec(n_vars, m, 0, &mut cur, &mut out);
    out
}

pub fn hkr_map(n_vars: usize, bound: usize, chain_degree: usize) -> Result<HkrMap> {
    let algebra = truncated_polynomial(n_vars, bound);
    let monos = monomials_up_to(n_vars, bound);
    let dim = monos.len();
    let source = bar_complex(&algebra, chain_degree.max(1) + 1, DEFAULT_SIZE_BUDGET)?;

    // target: m-forms for m = 0..chain_degree, zero differential
    let mut tdims = Vec::new();
    for m in 0..=chain_degree {
        tdims.push(dim * form_subsets(n_vars, m).len());
    }
    let tb = (0..chain_degree).map(|i| SparseMat::zero(tdims[i], tdims[i + 1])).collect();
    let target = ChainComplex::new(0, tdims.clone(), tb)?;

    let mut maps = Vec::new();
    for m in 0..=chain_degree {
        let subsets = form_subsets(n_vars, m);
        let subset_rank: std::collections::HashMap<Vec<usize>, usize> =
            subsets.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
        let nsub = subsets.len();
        let src_dim = dim.pow(m as u32 + 1);
        let mut triplets = Vec::new();
        let inv_mfact =
            Rational::new(1.into(), factorial(m as u64));
        let mut tuple = vec![0usize; m + 1];
        for s in 0..src_dim {
            let mut x = s;
            for slot in (0..=m).rev() {
                tuple[slot] = x % dim;
                x /= dim;
            }
            // d(a_i) = sum_v e_i(v) x^{a_i - e_v} dx_v; expand the wedge
            // product over choices of v per slot
            expand_wedge(
                &monos,
                &tuple,
                bound,
                &inv_mfact,
                &subset_rank,
                nsub,
                &mut |form_coeff_mono_idx, subset_idx, coeff| {
                    triplets.push((
                        form_coeff_mono_idx * nsub + subset_idx,
                        s,
                        coeff,
                    ));
                },
            );
        }
        maps.push(SparseMat::from_triplets(dim * nsub, src_dim, triplets));
    }
    Ok(HkrMap { n_vars, bound, maps, target, source, algebra })
}

/// Expand (1/m!) a_0 da_1 ... da_m over the monomial basis; drops terms
/// whose coefficient exceeds the polynomial bound (the same truncation the
/// algebra itself applies).
fn expand_wedge(
    monos: &[Vec<u32>],
    tuple: &[usize],
    bound: usize,
    scale: &Rational,
    subset_rank: &std::collections::HashMap<Vec<usize>, usize>,
    _nsub: usize,
    emit: &mut dyn FnMut(usize, usize, Rational),
) {
    let m = tuple.len() - 1;
    let n_vars = monos[0].len();
    let index: std::collections::HashMap<&[u32], usize> =
        monos.iter().enumerate().map(|(i, mo)| (mo.as_slice(), i)).collect();

    // choice[v_slot] = variable differentiated in slot 1..m
    let mut choice = vec![0usize; m];
    loop {
        // compute the term for this choice
        let mut coeff = scale.clone();
        let mut exps: Vec<u32> = monos[tuple[0]].clone();
        let mut dxs: Vec<usize> = Vec::with_capacity(m);
        let mut ok = true;
        for (slot, &v) in choice.iter().enumerate() {
            let a = &monos[tuple[slot + 1]];
            if a[v] == 0 {
                ok = false;
                break;
            }
            coeff *= Rational::from_integer(a[v].into());
            for (w, e) in a.iter().enumerate() {
                exps[w] += e;
            }
            exps[v] -= 1;
            dxs.push(v);
        }
        if ok {
            // wedge sign: sort dxs tracking parity; repeated dx kills the term
            let mut sign = 1i64;
            let mut sorted = dxs.clone();
            let mut dup = false;
            for i in 0..sorted.len() {
                for j in (i + 1..sorted.len()).rev() {
                    if sorted[j - 1] > sorted[j] {
                        sorted.swap(j - 1, j);
                        sign = -sign;
                    }
                }
                if i + 1 < sorted.len() && sorted[i] == sorted[i + 1] {
                    dup = true;
                }
            }
            if !dup {
                let total: u32 = exps.iter().sum();
                if (total as usize) <= bound {
                    if let Some(&mi) = index.get(exps.as_slice()) {
                        let si = subset_rank[&sorted];
                        let c = coeff * Rational::from_integer(sign.into());
                        if !c.is_zero() {
                            emit(mi, si, c);
                        }
                    }
                }
            }
        }
        // odometer over variable choices
        let mut pos = 0;
        loop {
            if pos == m {
                return;
            }
            choice[pos] += 1;
            if choice[pos] < n_vars {
                break;
            }
            choice[pos] = 0;
            pos += 1;
        }
        let _ = pos;
        if m == 0 {
            return;
        }
    }
}

/// Degree-0/1 window checks.
///
/// Truncation classes live in total polynomial weight > bound, so the
/// honest statement is graded: on the weight-<=bound piece (where no
/// product ever truncates) the chain property holds on the nose and the
/// induced map on H_1 is an isomorphism onto the 1-forms with coefficient
/// degree <= bound-1. H_0 needs no restriction: b_1 = 0 for a commutative
/// algebra and a_0 |-> a_0 is the identity.
pub struct HkrReport {
    pub h0_iso: bool,
    /// dim of the weight-<=bound piece of H_1
    pub h1_dim: usize,
    /// dim of 1-forms with coefficient degree <= bound-1
    pub window_dim: usize,
    /// the map kills boundaries coming from weight-<=bound 2-chains
    pub kills_boundaries: bool,
    /// rank of the induced map on the H_1 window
    pub induced_rank: usize,
}

pub fn h1_window_report(h: &HkrMap) -> HkrReport {
    let monos = monomials_up_to(h.n_vars, h.bound);
    let dim = monos.len();
    let weight: Vec<usize> = monos.iter().map(|m| m.iter().sum::<u32>() as usize).collect();

    let b1 = h.source.boundary_from(1).expect("bar has degree 1");
    let h0_iso = b1.is_zero() && h.maps[0].rank() == dim;

    // weight-<=bound columns of C_1 and C_2
    let sel1: Vec<usize> = (0..dim * dim)
        .filter(|&i| weight[i / dim] + weight[i % dim] <= h.bound)
        .collect();
    let sel2: Vec<usize> = (0..dim * dim * dim)
        .filter(|&i| {
            weight[i / (dim * dim)] + weight[(i / dim) % dim] + weight[i % dim] <= h.bound
        })
        .collect();
    let pos1: std::collections::HashMap<usize, usize> =
        sel1.iter().enumerate().map(|(p, &c)| (c, p)).collect();

    // restricted boundary b_2 : C_2^{<=b} -> C_1^{<=b}
    let b2 = h.source.boundary_from(2).expect("bar has degree 2");
    let pos2: std::collections::HashMap<usize, usize> =
        sel2.iter().enumerate().map(|(p, &c)| (c, p)).collect();
    let mut tr = Vec::new();
    for (r, c, v) in b2.entries() {
        if let Some(&cc) = pos2.get(c) {
            let rr = pos1
                .get(r)
                .expect("weight-preserving boundary left the window");
            tr.push((*rr, cc, v.clone()));
        }
    }
    let b2w = SparseMat::from_triplets(sel1.len(), sel2.len(), tr);
    let h1_dim = sel1.len() - b2w.rank();

    // the window forms: coefficient degree <= bound-1, i.e. total weight
    // <= bound; on weight-<=bound sources the map needs no projection
    let window_dim = weight.iter().filter(|&&w| w < h.bound).count() * h.n_vars;
    let mut tr = Vec::new();
    for (r, c, v) in h.maps[1].entries() {
        if let Some(&cc) = pos1.get(c) {
            tr.push((*r, cc, v.clone()));
        }
    }
    let map_w = SparseMat::from_triplets(h.maps[1].rows, sel1.len(), tr);

    let kills_boundaries = map_w.matmul(&b2w).is_zero();
    let induced_rank = map_w.rank();

    HkrReport { h0_iso, h1_dim, window_dim, kills_boundaries, induced_rank }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, ratio};

    #[test]
    fn degree_zero_is_identity() {
        let h = hkr_map(1, 3, 1).unwrap();
        // a_0 |-> a_0: the degree-0 map is a permutation-free identity
        let m = &h.maps[0];
        assert_eq!(m.rank(), 4);
        for (r, c, v) in m.entries() {
            assert_eq!(r, c);
            assert_eq!(v, &rat(1));
        }
    }

    #[test]
    fn one_tensor_x_maps_to_dx() {
        let h = hkr_map(1, 3, 1).unwrap();
        // basis of A: 1, x, x^2, x^3 (degree order); C_1 index of 1 (x) x is
        // 0*4+1 = 1; target index of 1*dx is mono 0, subset {0} -> 0.
        let m = &h.maps[1];
        let col: Vec<_> = m.entries().iter().filter(|(_, c, _)| *c == 1).collect();
        assert_eq!(col.len(), 1);
        assert_eq!(col[0].0, 0);
        assert_eq!(col[0].2, rat(1));

        // x (x) x -> x dx: source index 1*4+1 = 5, target mono x (index 1)
        let col: Vec<_> = m.entries().iter().filter(|(_, c, _)| *c == 5).collect();
        assert_eq!(col.len(), 1);
        assert_eq!(col[0].0, 1);
        assert_eq!(col[0].2, rat(1));
    }

    #[test]
    fn repeated_dx_dies_in_degree_two() {
        let h = hkr_map(1, 3, 2).unwrap();
        // 1 (x) x (x) x -> (1/2) dx ^ dx = 0: column 0*16 + 1*4 + 1 = 5
        let m = &h.maps[2];
        assert!(m.entries().iter().all(|(_, c, _)| *c != 5));
    }

    #[test]
    fn two_variable_wedge_signs() {
        let h = hkr_map(2, 2, 2).unwrap();
        // A basis (degree order): 1, x1, x2, x1^2, x1x2, x2^2 (dim 6)
        // 1 (x) x1 (x) x2 -> (1/2) dx1^dx2 ; 1 (x) x2 (x) x1 -> -(1/2) dx1^dx2
        let dim = 6;
        let m = &h.maps[2];
        let col_a = 0 * dim * dim + 1 * dim + 2;
        let col_b = 0 * dim * dim + 2 * dim + 1;
        let ea: Vec<_> = m.entries().iter().filter(|(_, c, _)| *c == col_a).collect();
        let eb: Vec<_> = m.entries().iter().filter(|(_, c, _)| *c == col_b).collect();
        assert_eq!(ea.len(), 1);
        assert_eq!(eb.len(), 1);
        assert_eq!(ea[0].0, eb[0].0);
        assert_eq!(ea[0].2, ratio(1, 2));
        assert_eq!(eb[0].2, ratio(-1, 2));
    }

    #[test]
    fn h0_h1_window_iso_one_var() {
        let h = hkr_map(1, 4, 2).unwrap();
        let rep = h1_window_report(&h);
        assert!(rep.h0_iso);
        assert!(rep.kills_boundaries);
        assert_eq!(rep.h1_dim, rep.window_dim);
        assert_eq!(rep.induced_rank, rep.window_dim);
    }

    #[test]
    fn h0_h1_window_iso_two_vars() {
        let h = hkr_map(2, 3, 2).unwrap();
        let rep = h1_window_report(&h);
        assert!(rep.h0_iso);
        assert!(rep.kills_boundaries);
        assert_eq!(rep.h1_dim, rep.window_dim);
        assert_eq!(rep.induced_rank, rep.window_dim);
    }
}
