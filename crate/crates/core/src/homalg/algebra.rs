//! Finite-dimensional associative algebras presented by structure constants.
//!
//! Associativity and the unit laws are checked on every basis triple at
//! construction; malformed manifests die here rather than deep inside a
//! homology computation. An optional grading and differential (for dg
//! algebras) are validated when present, but the bar-complex machinery
//! below only accepts trivially graded algebras.

use crate::error::{Error, Result};
use crate::homalg::linalg::SparseMat;
use crate::rational::{rat, Rational};
use num_traits::Zero;

/// Sparse vector in the algebra basis.
pub type AVec = Vec<(usize, Rational)>;

#[derive(Clone, Debug)]
pub struct FinDimAlgebra {
    names: Vec<String>,
    unit: Vec<Rational>,
    /// table[i][j] = e_i * e_j, sparse.
    table: Vec<Vec<AVec>>,
    grading: Option<Vec<i64>>,
    differential: Option<SparseMat>,
}

impl FinDimAlgebra {
    pub fn new(
        names: Vec<String>,
        unit: Vec<Rational>,
        table: Vec<Vec<AVec>>,
        grading: Option<Vec<i64>>,
        differential: Option<SparseMat>,
    ) -> Result<Self> {
        let n = names.len();
        if n == 0 {
            return Err(Error::InvalidSpec("algebra needs a nonempty basis".into()));
        }
        if unit.len() != n || table.len() != n || table.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidSpec("algebra tables have inconsistent shape".into()));
        }
        if let Some(g) = &grading {
            if g.len() != n {
                return Err(Error::InvalidSpec("grading length != basis length".into()));
            }
        }
        let alg = FinDimAlgebra { names, unit, table, grading, differential };
        alg.validate()?;
        Ok(alg)
    }

    fn validate(&self) -> Result<()> {
        let n = self.dim();
        // unit laws
        for i in 0..n {
            let e = unit_vec(n, i);
            let left = self.mul_vec(&self.unit_dense_sparse(), &e);
            let right = self.mul_vec(&e, &self.unit_dense_sparse());
            if !vec_eq(&left, &e) || !vec_eq(&right, &e) {
                return Err(Error::InvalidSpec(format!(
                    "unit law fails on basis element {}",
                    self.names[i]
                )));
            }
        }
        // associativity on all basis triples
        for i in 0..n {
            for j in 0..n {
                let ij = self.table[i][j].clone();
                for k in 0..n {
                    let jk = self.table[j][k].clone();
                    let lhs = self.mul_sparse(&ij, &unit_sparse(k));
                    let rhs = self.mul_sparse(&unit_sparse(i), &jk);
                    if !sparse_eq(&lhs, &rhs, n) {
                        return Err(Error::InvalidSpec(format!(
                            "associativity fails on ({}, {}, {})",
                            self.names[i], self.names[j], self.names[k]
                        )));
                    }
                }
            }
        }
        // dg checks when a differential is supplied
        if let Some(d) = &self.differential {
            if d.rows != n || d.cols != n {
                return Err(Error::InvalidSpec("differential has wrong shape".into()));
            }
            let g = self
                .grading
                .as_ref()
                .ok_or_else(|| Error::InvalidSpec("differential requires a grading".into()))?;
            if !d.matmul(d).is_zero() {
                return Err(Error::InvalidSpec("algebra differential does not square to zero".into()));
            }
            // graded Leibniz rule d(ab) = (da)b + (-1)^{|a|} a(db)
            for i in 0..n {
                for j in 0..n {
                    let dij = apply_mat(d, &self.table[i][j]);
                    let di = apply_mat(d, &unit_sparse(i));
                    let dj = apply_mat(d, &unit_sparse(j));
                    let mut rhs = self.mul_sparse(&di, &unit_sparse(j));
                    let sign = if g[i].rem_euclid(2) == 0 { rat(1) } else { rat(-1) };
                    for (k, v) in self.mul_sparse(&unit_sparse(i), &dj) {
                        rhs.push((k, v * sign.clone()));
                    }
                    if !sparse_eq(&dij, &rhs, n) {
                        return Err(Error::InvalidSpec(format!(
                            "Leibniz rule fails on ({}, {})",
                            self.names[i], self.names[j]
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn unit(&self) -> &[Rational] {
        &self.unit
    }

    pub fn is_trivially_graded(&self) -> bool {
        match &self.grading {
            None => true,
            Some(g) => {
                g.iter().all(|&d| d == 0)
                    && self.differential.as_ref().map_or(true, |d| d.is_zero())
            }
        }
    }

    fn unit_dense_sparse(&self) -> AVec {
        self.unit
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(i, v)| (i, v.clone()))
            .collect()
    }

    /// Product of sparse vectors.
    pub fn mul_sparse(&self, a: &AVec, b: &AVec) -> AVec {
        let mut acc = vec![Rational::zero(); self.dim()];
        for (i, x) in a {
            for (j, y) in b {
                for (k, c) in &self.table[*i][*j] {
                    acc[*k] += x * y * c;
                }
            }
        }
        dense_to_sparse(&acc)
    }

    /// Product of dense vectors.
    pub fn mul_vec(&self, a: &AVec, b: &AVec) -> AVec {
        self.mul_sparse(a, b)
    }

    pub fn basis_product(&self, i: usize, j: usize) -> &AVec {
        &self.table[i][j]
    }

    /// Multiply a list of elements left to right; empty product = unit.
    pub fn product_chain(&self, elems: &[AVec]) -> AVec {
        let mut acc = self.unit_dense_sparse();
        for e in elems {
            acc = self.mul_sparse(&acc, e);
        }
        acc
    }

    /// Dimension of the commutator subspace span{ab - ba}; an independent
    /// route to dim H_0 of the bar complex (H_0 = A/[A,A]).
    pub fn commutator_space_dim(&self) -> usize {
        let n = self.dim();
        let mut triplets = Vec::new();
        let mut row = 0;
        for i in 0..n {
            for j in 0..n {
                let ij = &self.table[i][j];
                let ji = &self.table[j][i];
                let mut acc = vec![Rational::zero(); n];
                for (k, v) in ij {
                    acc[*k] += v;
                }
                for (k, v) in ji {
                    acc[*k] -= v;
                }
                if acc.iter().any(|v| !v.is_zero()) {
                    for (k, v) in acc.into_iter().enumerate() {
                        if !v.is_zero() {
                            triplets.push((row, k, v));
                        }
                    }
                    row += 1;
                }
            }
        }
        SparseMat::from_triplets(row.max(1), n, triplets).rank()
    }
}

fn unit_vec(n: usize, i: usize) -> AVec {
    let _ = n;
    vec![(i, rat(1))]
}

fn unit_sparse(i: usize) -> AVec {
    vec![(i, rat(1))]
}

fn dense_to_sparse(v: &[Rational]) -> AVec {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(i, x)| (i, x.clone()))
        .collect()
}

fn sparse_to_dense(v: &AVec, n: usize) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); n];
    for (i, x) in v {
        out[*i] += x;
    }
    out
}

fn vec_eq(a: &AVec, b: &AVec) -> bool {
    let n = a.iter().chain(b.iter()).map(|(i, _)| i + 1).max().unwrap_or(0);
    sparse_to_dense(a, n) == sparse_to_dense(b, n)
}

fn sparse_eq(a: &AVec, b: &AVec, n: usize) -> bool {
    sparse_to_dense(a, n) == sparse_to_dense(b, n)
}

fn apply_mat(m: &SparseMat, v: &AVec) -> AVec {
    let dense = sparse_to_dense(v, m.cols);
    dense_to_sparse(&m.apply(&dense))
}

// ---- standard examples -------------------------------------------------

/// The ground field Q as an algebra.
pub fn ground_field() -> FinDimAlgebra {
    FinDimAlgebra::new(
        vec!["1".into()],
        vec![rat(1)],
        vec![vec![vec![(0, rat(1))]]],
        None,
        None,
    )
    .expect("ground field is valid")
}

/// Dual numbers Q[eps]/(eps^2).
pub fn dual_numbers() -> FinDimAlgebra {
    FinDimAlgebra::new(
        vec!["1".into(), "eps".into()],
        vec![rat(1), rat(0)],
        vec![
            vec![vec![(0, rat(1))], vec![(1, rat(1))]],
            vec![vec![(1, rat(1))], vec![]],
        ],
        None,
        None,
    )
    .expect("dual numbers are valid")
}

/// The product algebra Q x Q.
pub fn field_product() -> FinDimAlgebra {
    FinDimAlgebra::new(
        vec!["e1".into(), "e2".into()],
        vec![rat(1), rat(1)],
        vec![
            vec![vec![(0, rat(1))], vec![]],
            vec![vec![], vec![(1, rat(1))]],
        ],
        None,
        None,
    )
    .expect("Q x Q is valid")
}

/// The group algebra Q[Z/2]; isomorphic to Q x Q in characteristic zero.
pub fn group_algebra_c2() -> FinDimAlgebra {
    FinDimAlgebra::new(
        vec!["1".into(), "g".into()],
        vec![rat(1), rat(0)],
        vec![
            vec![vec![(0, rat(1))], vec![(1, rat(1))]],
            vec![vec![(1, rat(1))], vec![(0, rat(1))]],
        ],
        None,
        None,
    )
    .expect("Q[Z/2] is valid")
}

/// 2x2 matrices over Q, basis E11, E12, E21, E22.
pub fn matrix_algebra_2() -> FinDimAlgebra {
    let idx = |r: usize, c: usize| r * 2 + c;
    let mut table = vec![vec![AVec::new(); 4]; 4];
    for r in 0..2 {
        for c in 0..2 {
            for s in 0..2 {
                for t in 0..2 {
                    if c == s {
                        table[idx(r, c)][idx(s, t)] = vec![(idx(r, t), rat(1))];
                    }
                }
            }
        }
    }
    FinDimAlgebra::new(
        vec!["E11".into(), "E12".into(), "E21".into(), "E22".into()],
        vec![rat(1), rat(0), rat(0), rat(1)],
        table,
        None,
        None,
    )
    .expect("M2(Q) is valid")
}

/// Monomials of total degree <= bound in n commuting variables, with
/// products of degree > bound truncated to zero. This is the quotient
/// Q[x_1..x_n] / m^{bound+1}, genuinely an algebra.
pub fn truncated_polynomial(n_vars: usize, bound: usize) -> FinDimAlgebra {
    let monos = monomials_up_to(n_vars, bound);
    let index: std::collections::HashMap<Vec<u32>, usize> =
        monos.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
    let name = |m: &[u32]| {
        if m.iter().all(|&e| e == 0) {
            "1".to_string()
        } else {
            m.iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(v, &e)| {
                    if e == 1 {
                        format!("x{}", v + 1)
                    } else {
                        format!("x{}^{}", v + 1, e)
                    }
                })
                .collect::<Vec<_>>()
                .join("*")
        }
    };
    let dim = monos.len();
    let mut table = vec![vec![AVec::new(); dim]; dim];
    for (i, a) in monos.iter().enumerate() {
        for (j, b) in monos.iter().enumerate() {
            let sum: Vec<u32> = a.iter().zip(b).map(|(x, y)| x + y).collect();
            if sum.iter().sum::<u32>() as usize <= bound {
                table[i][j] = vec![(index[&sum], rat(1))];
            }
        }
    }
    let mut unit = vec![Rational::zero(); dim];
    unit[index[&vec![0u32; n_vars]]] = rat(1);
    FinDimAlgebra::new(monos.iter().map(|m| name(m)).collect(), unit, table, None, None)
        .expect("truncated polynomial algebra is valid")
}

/// All exponent vectors with total degree <= bound, ordered by total degree
/// then lexicographically. Degree-0 comes first so the unit has index 0.
pub fn monomials_up_to(n_vars: usize, bound: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; n_vars];
    fn rec(out: &mut Vec<Vec<u32>>, cur: &mut Vec<u32>, var: usize, left: u32, total: u32) {
        if var == cur.len() {
            if cur.iter().sum::<u32>() == total {
                out.push(cur.clone());
            }
            return;
        }
        for e in (0..=left).rev() {
            cur[var] = e;
            rec(out, cur, var + 1, left - e, total);
        }
        cur[var] = 0;
    }
    for total in 0..=bound as u32 {
        rec(&mut out, &mut cur, 0, total, total);
    }
    out
}
