//! Exact rank computation over Q.
//!
//! The workhorse is a sparse elimination over rationals with a
//! fill-reducing pivot choice; a dense fraction-free (Bareiss) elimination
//! over integers is kept alongside and cross-checked in tests, since
//! homology dimensions must never depend on the elimination route.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::rational::Rational;

/// Sparse matrix in triplet form; rows/cols fixed at construction.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseMat {
    pub rows: usize,
    pub cols: usize,
    entries: Vec<(usize, usize, Rational)>,
}

impl SparseMat {
    pub fn zero(rows: usize, cols: usize) -> Self {
        SparseMat { rows, cols, entries: Vec::new() }
    }

    pub fn from_triplets(
        rows: usize,
        cols: usize,
        triplets: Vec<(usize, usize, Rational)>,
    ) -> Self {
        // merge duplicates, drop zeros
        let mut map: BTreeMap<(usize, usize), Rational> = BTreeMap::new();
        for (r, c, v) in triplets {
            assert!(r < rows && c < cols, "entry ({r},{c}) out of {rows}x{cols}");
            *map.entry((r, c)).or_insert_with(Rational::zero) += v;
        }
        let entries = map
            .into_iter()
            .filter(|(_, v)| !v.is_zero())
            .map(|((r, c), v)| (r, c, v))
            .collect();
        SparseMat { rows, cols, entries }
    }

    pub fn entries(&self) -> &[(usize, usize, Rational)] {
        &self.entries
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn transpose(&self) -> SparseMat {
        SparseMat {
            rows: self.cols,
            cols: self.rows,
            entries: self.entries.iter().map(|(r, c, v)| (*c, *r, v.clone())).collect(),
        }
    }

    /// Matrix product self * other.
    pub fn matmul(&self, other: &SparseMat) -> SparseMat {
        assert_eq!(self.cols, other.rows, "shape mismatch in matmul");
        // index other by row
        let mut by_row: Vec<Vec<(usize, &Rational)>> = vec![Vec::new(); other.rows];
        for (r, c, v) in &other.entries {
            by_row[*r].push((*c, v));
        }
        let mut acc: BTreeMap<(usize, usize), Rational> = BTreeMap::new();
        for (r, k, v) in &self.entries {
            for (c, w) in &by_row[*k] {
                *acc.entry((*r, *c)).or_insert_with(Rational::zero) += v * *w;
            }
        }
        let entries = acc
            .into_iter()
            .filter(|(_, v)| !v.is_zero())
            .map(|((r, c), v)| (r, c, v))
            .collect();
        SparseMat { rows: self.rows, cols: other.cols, entries }
    }

    /// Apply to a dense column vector.
    pub fn apply(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.cols);
        let mut out = vec![Rational::zero(); self.rows];
        for (r, c, w) in &self.entries {
            if !v[*c].is_zero() {
                out[*r] += w * &v[*c];
            }
        }
        out
    }

    /// Exact rank via sparse elimination.
    pub fn rank(&self) -> usize {
        sparse_rank(self)
    }
}

/// Sparse Gaussian elimination over Q with a cheapest-row pivot heuristic.
fn sparse_rank(m: &SparseMat) -> usize {
    // rows as maps col -> value
    let mut rows: Vec<BTreeMap<usize, Rational>> = vec![BTreeMap::new(); m.rows];
    for (r, c, v) in &m.entries {
        rows[*r].insert(*c, v.clone());
    }
    let mut active: Vec<usize> = (0..m.rows).filter(|&r| !rows[r].is_empty()).collect();
    let mut rank = 0;
    while !active.is_empty() {
        // pick the sparsest active row
        let (pos, &prow) = active
            .iter()
            .enumerate()
            .min_by_key(|(_, &r)| rows[r].len())
            .expect("nonempty");
        active.swap_remove(pos);
        let pivot_row = std::mem::take(&mut rows[prow]);
        if pivot_row.is_empty() {
            continue;
        }
        rank += 1;
        // pivot column: the entry whose column appears in fewest active rows
        // (approximated by first column; counting is costlier than it saves
        // at our sizes)
        let (&pcol, pval) = pivot_row.iter().next().expect("nonempty row");
        let pval = pval.clone();
        let mut next_active = Vec::with_capacity(active.len());
        for &r in &active {
            if let Some(x) = rows[r].get(&pcol).cloned() {
                let factor = &x / &pval;
                let row = std::mem::take(&mut rows[r]);
                let mut out = BTreeMap::new();
                // out = row - factor * pivot_row
                let mut it_a = row.into_iter().peekable();
                let mut it_b = pivot_row.iter().peekable();
                loop {
                    match (it_a.peek(), it_b.peek()) {
                        (Some((ca, _)), Some((cb, _))) if ca == *cb => {
                            let (c, va) = it_a.next().unwrap();
                            let (_, vb) = it_b.next().unwrap();
                            let v = va - &factor * vb;
                            if !v.is_zero() {
                                out.insert(c, v);
                            }
                        }
                        (Some((ca, _)), Some((cb, _))) if ca < *cb => {
                            let (c, va) = it_a.next().unwrap();
                            out.insert(c, va);
                        }
                        (Some(_), Some(_)) => {
                            let (c, vb) = it_b.next().unwrap();
                            let v = -(&factor * vb);
                            if !v.is_zero() {
                                out.insert(*c, v);
                            }
                        }
                        (Some(_), None) => {
                            let (c, va) = it_a.next().unwrap();
                            out.insert(c, va);
                        }
                        (None, Some(_)) => {
                            let (c, vb) = it_b.next().unwrap();
                            let v = -(&factor * vb);
                            if !v.is_zero() {
                                out.insert(*c, v);
                            }
                        }
                        (None, None) => break,
                    }
                }
                out.remove(&pcol);
                rows[r] = out;
            }
            if !rows[r].is_empty() {
                next_active.push(r);
            }
        }
        active = next_active;
    }
    rank
}

/// Dense fraction-free (Bareiss) rank over integers, used as a cross-check.
/// Rows are first scaled to integers; scaling does not change rank.
pub fn bareiss_rank(m: &SparseMat) -> usize {
    if m.rows == 0 || m.cols == 0 || m.entries.is_empty() {
        return 0;
    }
    let mut a: Vec<Vec<BigInt>> = vec![vec![BigInt::zero(); m.cols]; m.rows];
    {
        let mut row_lcm: Vec<BigInt> = vec![BigInt::one(); m.rows];
        for (r, _, v) in &m.entries {
            row_lcm[*r] = row_lcm[*r].lcm(v.denom());
        }
        for (r, c, v) in &m.entries {
            a[*r][*c] = v.numer() * (&row_lcm[*r] / v.denom());
        }
    }
    let mut prev = BigInt::one();
    let mut rank = 0;
    let mut row = 0;
    for col in 0..m.cols {
        // find pivot
        let piv = (row..m.rows).find(|&r| !a[r][col].is_zero());
        let Some(piv) = piv else { continue };
        a.swap(row, piv);
        for r in 0..m.rows {
            if r == row {
                continue;
            }
            for c in (col + 1)..m.cols {
                let t = &a[row][col] * &a[r][c] - &a[r][col] * &a[row][c];
                a[r][c] = &t / &prev;
            }
            a[r][col] = BigInt::zero();
        }
        prev = a[row][col].abs();
        rank += 1;
        row += 1;
        if row == m.rows {
            break;
        }
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn mat(rows: usize, cols: usize, vals: &[(usize, usize, i64)]) -> SparseMat {
        SparseMat::from_triplets(
            rows,
            cols,
            vals.iter().map(|&(r, c, v)| (r, c, rat(v))).collect(),
        )
    }

    #[test]
    fn rank_simple() {
        assert_eq!(mat(2, 2, &[(0, 0, 1), (1, 1, 1)]).rank(), 2);
        assert_eq!(mat(2, 2, &[(0, 0, 1), (1, 0, 2)]).rank(), 1);
        assert_eq!(mat(3, 3, &[]).rank(), 0);
        // rank 2: third row is the sum of the first two
        let m = mat(
            3,
            3,
            &[(0, 0, 1), (0, 1, 2), (1, 1, 1), (1, 2, 1), (2, 0, 1), (2, 1, 3), (2, 2, 1)],
        );
        assert_eq!(m.rank(), 2);
    }

    #[test]
    fn sparse_and_bareiss_agree_on_pseudorandom_matrices() {
        // deterministic LCG; entries in {-2..2} with many zeros
        let mut state: u64 = 0x243F6A8885A308D3;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 33) as i64
        };
        for trial in 0..40 {
            let rows = 1 + (next() % 8).unsigned_abs() as usize;
            let cols = 1 + (next() % 8).unsigned_abs() as usize;
            let mut tr = Vec::new();
            for r in 0..rows {
                for c in 0..cols {
                    let roll = next() % 10;
                    if roll.abs() < 4 {
                        tr.push((r, c, rat(roll - 2)));
                    }
                }
            }
            let m = SparseMat::from_triplets(rows, cols, tr);
            assert_eq!(m.rank(), bareiss_rank(&m), "trial {trial}");
        }
    }

    #[test]
    fn matmul_and_apply() {
        let a = mat(2, 3, &[(0, 0, 1), (0, 2, 2), (1, 1, 3)]);
        let b = mat(3, 2, &[(0, 0, 1), (1, 0, 1), (2, 1, 1)]);
        let p = a.matmul(&b);
        assert_eq!(p, mat(2, 2, &[(0, 0, 1), (0, 1, 2), (1, 0, 3)]));
        let v = a.apply(&[rat(1), rat(0), rat(5)]);
        assert_eq!(v, vec![rat(11), rat(0)]);
    }
}
