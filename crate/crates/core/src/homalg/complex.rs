//! Chain complexes of finite-dimensional Q-vector spaces with exact
//! homology. Boundary maps lower degree by one; d . d = 0 is checked at
//! construction so convention bugs in complex builders surface immediately.

use std::io::Write;

use crate::error::{Error, Result};
use crate::homalg::linalg::SparseMat;
use crate::rational::format_rational;

#[derive(Clone, Debug)]
pub struct ChainComplex {
    lo: i64,
    dims: Vec<usize>,
    /// boundaries[i] is d : C_{lo+i+1} -> C_{lo+i}, shape dims[i] x dims[i+1].
    boundaries: Vec<SparseMat>,
}

impl ChainComplex {
    /// A complex supported in degrees lo..lo+dims.len()-1.
    pub fn new(lo: i64, dims: Vec<usize>, boundaries: Vec<SparseMat>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::InvalidSpec("complex needs at least one degree".into()));
        }
        if boundaries.len() + 1 != dims.len() {
            return Err(Error::InvalidSpec(format!(
                "expected {} boundary maps for {} degrees, got {}",
                dims.len() - 1,
                dims.len(),
                boundaries.len()
            )));
        }
        for (i, b) in boundaries.iter().enumerate() {
            if b.rows != dims[i] || b.cols != dims[i + 1] {
                return Err(Error::InvalidSpec(format!(
                    "boundary into degree {} has shape {}x{}, expected {}x{}",
                    lo + i as i64,
                    b.rows,
                    b.cols,
                    dims[i],
                    dims[i + 1]
                )));
            }
        }
        for i in 0..boundaries.len().saturating_sub(1) {
            let prod = boundaries[i].matmul(&boundaries[i + 1]);
            if !prod.is_zero() {
                return Err(Error::InvalidSpec(format!(
                    "d.d != 0 from degree {} (nnz {})",
                    lo + i as i64 + 2,
                    prod.nnz()
                )));
            }
        }
        Ok(ChainComplex { lo, dims, boundaries })
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.dims.len() as i64 - 1
    }

    pub fn dim(&self, degree: i64) -> usize {
        if degree < self.lo || degree > self.hi() {
            0
        } else {
            self.dims[(degree - self.lo) as usize]
        }
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    /// The boundary map leaving `degree` (d : C_degree -> C_{degree-1}).
    pub fn boundary_from(&self, degree: i64) -> Option<&SparseMat> {
        let i = degree - self.lo;
        if i >= 1 && (i as usize) <= self.boundaries.len() {
            Some(&self.boundaries[(i - 1) as usize])
        } else {
            None
        }
    }

    /// dim H_n = dim C_n - rank d_n - rank d_{n+1}.
    pub fn homology_dim(&self, degree: i64) -> usize {
        let dim = self.dim(degree);
        if dim == 0 {
            return 0;
        }
        let r_out = self.boundary_from(degree).map_or(0, |m| m.rank());
        let r_in = self.boundary_from(degree + 1).map_or(0, |m| m.rank());
        dim - r_out - r_in
    }

    pub fn homology_dims(&self, degrees: std::ops::RangeInclusive<i64>) -> Vec<usize> {
        degrees.map(|d| self.homology_dim(d)).collect()
    }

    /// Documented sparse export: one `dim` line per degree, then per boundary
    /// map a `matrix` header followed by `row col value` triples with exact
    /// rational values.
    pub fn write_sparse_text(&self, w: &mut impl Write) -> std::io::Result<()> {
        writeln!(w, "chain-complex v1")?;
        writeln!(w, "degrees {} {}", self.lo, self.hi())?;
        for (i, d) in self.dims.iter().enumerate() {
            writeln!(w, "dim {} {}", self.lo + i as i64, d)?;
        }
        for (i, b) in self.boundaries.iter().enumerate() {
            writeln!(
                w,
                "matrix d{} rows {} cols {} nnz {}",
                self.lo + i as i64 + 1,
                b.rows,
                b.cols,
                b.nnz()
            )?;
            for (r, c, v) in b.entries() {
                writeln!(w, "{} {} {}", r, c, format_rational(v))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn zero_complex() {
        let c = ChainComplex::new(0, vec![0, 0, 0], vec![SparseMat::zero(0, 0); 2]).unwrap();
        assert_eq!(c.homology_dims(0..=2), vec![0, 0, 0]);
    }

    #[test]
    fn acyclic_two_term() {
        // 0 -> Q --id--> Q -> 0
        let d = SparseMat::from_triplets(1, 1, vec![(0, 0, rat(1))]);
        let c = ChainComplex::new(0, vec![1, 1], vec![d]).unwrap();
        assert_eq!(c.homology_dims(0..=1), vec![0, 0]);
    }

    #[test]
    fn zero_differential_two_term() {
        let c = ChainComplex::new(0, vec![1, 1], vec![SparseMat::zero(1, 1)]).unwrap();
        assert_eq!(c.homology_dims(0..=1), vec![1, 1]);
    }

    #[test]
    fn rejects_non_square_zero() {
        let d1 = SparseMat::from_triplets(1, 1, vec![(0, 0, rat(1))]);
        let d2 = SparseMat::from_triplets(1, 1, vec![(0, 0, rat(1))]);
        assert!(ChainComplex::new(0, vec![1, 1, 1], vec![d1, d2]).is_err());
    }

    #[test]
    fn sparse_text_format() {
        let d = SparseMat::from_triplets(1, 2, vec![(0, 1, rat(-3))]);
        let c = ChainComplex::new(0, vec![1, 2], vec![d]).unwrap();
        let mut buf = Vec::new();
        c.write_sparse_text(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.contains("chain-complex v1"));
        assert!(text.contains("matrix d1 rows 1 cols 2 nnz 1"));
        assert!(text.contains("0 1 -3"));
    }
}
