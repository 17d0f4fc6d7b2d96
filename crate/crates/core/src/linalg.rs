//! Exact linear algebra over a finite field: row reduction, rank, nullspace
//! and row-space membership.

use crate::error::{Error, Result};
use crate::ring::{Element, Ring};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    ring: Ring,
    rows: usize,
    cols: usize,
    data: Vec<Element>,
}

impl Matrix {
    pub fn zeros(ring: &Ring, rows: usize, cols: usize) -> Matrix {
        Matrix {
            ring: ring.clone(),
            rows,
            cols,
            data: vec![ring.zero(); rows * cols],
        }
    }

    pub fn from_rows(ring: &Ring, cols: usize, rows: Vec<Vec<Element>>) -> Result<Matrix> {
        if let Some(r) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::Usage(format!(
                "row of length {} in a matrix with {cols} columns",
                r.len()
            )));
        }
        Ok(Matrix {
            ring: ring.clone(),
            rows: rows.len(),
            cols,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn num_rows(&self) -> usize {
        self.rows
    }

    pub fn num_cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Element] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Element]> {
        (0..self.rows).map(move |i| self.row(i))
    }

    pub fn get(&self, i: usize, j: usize) -> Element {
        self.data[i * self.cols + j]
    }

    fn set(&mut self, i: usize, j: usize, v: Element) {
        self.data[i * self.cols + j] = v;
    }

    fn require_field(&self) -> Result<()> {
        if self.ring.is_field() {
            Ok(())
        } else {
            Err(Error::NotApplicable(format!(
                "row reduction needs a field, not {}",
                self.ring.name()
            )))
        }
    }

    /// Reduced row echelon form and pivot columns. The pivot of each step is
    /// the first remaining nonzero entry in the leftmost usable column,
    /// normalised to 1.
    pub fn rref(&self) -> Result<(Matrix, Vec<usize>)> {
        self.require_field()?;
        let ring = &self.ring;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !ring.is_zero(m.get(i, c))) else {
                continue;
            };
            if p != r {
                for j in 0..m.cols {
                    m.data.swap(p * m.cols + j, r * m.cols + j);
                }
            }
            let inv = ring.inverse(m.get(r, c))?;
            for j in c..m.cols {
                m.set(r, j, ring.mul(inv, m.get(r, j)));
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let f = m.get(i, c);
                if ring.is_zero(f) {
                    continue;
                }
                for j in c..m.cols {
                    let v = ring.sub(m.get(i, j), ring.mul(f, m.get(r, j)));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        Ok((m, pivots))
    }

    pub fn rank(&self) -> Result<usize> {
        Ok(self.rref()?.1.len())
    }

    /// The nonzero rows of the rref: a canonical basis of the row space.
    pub fn row_space_basis(&self) -> Result<Matrix> {
        let (m, pivots) = self.rref()?;
        let rows = (0..pivots.len()).map(|i| m.row(i).to_vec()).collect();
        Matrix::from_rows(&self.ring, self.cols, rows)
    }

    /// Basis (as rows) of { v : M v = 0 }.
    pub fn nullspace(&self) -> Result<Matrix> {
        let ring = &self.ring;
        let (m, pivots) = self.rref()?;
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let rows = free
            .iter()
            .map(|&f| {
                let mut v = vec![ring.zero(); self.cols];
                v[f] = ring.one();
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = ring.neg(m.get(r, f));
                }
                v
            })
            .collect();
        Matrix::from_rows(ring, self.cols, rows)
    }

    pub fn row_space_contains(&self, v: &[Element]) -> Result<bool> {
        if v.len() != self.cols {
            return Err(Error::Usage(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        let base = self.rank()?;
        let mut ext = self.clone();
        ext.data.extend_from_slice(v);
        ext.rows += 1;
        Ok(ext.rank()? == base)
    }

    /// Same row space (compared through canonical rref bases).
    pub fn row_space_eq(&self, other: &Matrix) -> Result<bool> {
        Ok(self.cols == other.cols && self.row_space_basis()? == other.row_space_basis()?)
    }

    /// Every vector of the row space, enumerated as Σ c_i · row_i over a
    /// basis; refuses when q^rank exceeds `cap`.
    pub fn enumerate_row_space(&self, cap: u64) -> Result<Vec<Vec<Element>>> {
        let basis = self.row_space_basis()?;
        let ring = &self.ring;
        let q = ring.size();
        let dim = basis.rows as u32;
        let size = q.checked_pow(dim).unwrap_or(u64::MAX);
        if size > cap {
            return Err(Error::EnumerationCap { size, cap });
        }
        let mut out = Vec::with_capacity(size as usize);
        for mut n in 0..size {
            let mut v = vec![ring.zero(); self.cols];
            for r in 0..basis.rows {
                let c = ring.element(n % q)?;
                n /= q;
                if ring.is_zero(c) {
                    continue;
                }
                for (j, slot) in v.iter_mut().enumerate() {
                    *slot = ring.add(*slot, ring.mul(c, basis.get(r, j)));
                }
            }
            out.push(v);
        }
        Ok(out)
    }
}

/// Σ a_i b_i.
pub fn dot(ring: &Ring, a: &[Element], b: &[Element]) -> Element {
    a.iter()
        .zip(b)
        .fold(ring.zero(), |acc, (&x, &y)| ring.add(acc, ring.mul(x, y)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(ring: &Ring, rows: &[&[i64]]) -> Matrix {
        let cols = rows[0].len();
        Matrix::from_rows(
            ring,
            cols,
            rows.iter()
                .map(|r| r.iter().map(|&v| ring.from_int(v)).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn rref_rank_nullspace_over_gf3() {
        let r = Ring::gf(3, 1).unwrap();
        let a = m(&r, &[&[1, 2, 0, 1], &[2, 1, 0, 2], &[0, 0, 1, 1]]);
        let (e, piv) = a.rref().unwrap();
        assert_eq!(piv, vec![0, 2]);
        assert_eq!(e.row(0), m(&r, &[&[1, 2, 0, 1]]).row(0));
        assert_eq!(a.rank().unwrap(), 2);
        let ns = a.nullspace().unwrap();
        assert_eq!(ns.num_rows(), 2);
        for v in ns.rows() {
            for row in a.rows() {
                assert!(r.is_zero(dot(&r, row, v)));
            }
        }
    }

    #[test]
    fn membership_and_span_equality() {
        let r = Ring::gf(3, 2).unwrap();
        let a = m(&r, &[&[1, 0, 2], &[0, 1, 1]]);
        assert!(a.row_space_contains(m(&r, &[&[2, 1, 2]]).row(0)).unwrap());
        assert!(!a.row_space_contains(m(&r, &[&[0, 0, 1]]).row(0)).unwrap());
        let b = m(&r, &[&[1, 1, 0], &[2, 1, 2]]);
        assert!(a.row_space_eq(&b).unwrap());
        assert_eq!(a.enumerate_row_space(100).unwrap().len(), 81);
        assert!(matches!(
            a.enumerate_row_space(80),
            Err(Error::EnumerationCap { .. })
        ));
    }

    #[test]
    fn rejects_non_fields() {
        let z4 = Ring::zn(4).unwrap();
        assert!(matches!(m(&z4, &[&[2, 1]]).rref(), Err(Error::NotApplicable(_))));
    }

    #[test]
    fn empty_matrices() {
        let r = Ring::gf(2, 2).unwrap();
        let e = Matrix::zeros(&r, 0, 4);
        assert_eq!(e.rank().unwrap(), 0);
        assert_eq!(e.nullspace().unwrap().num_rows(), 4);
        assert!(e.row_space_contains(&[r.zero(); 4]).unwrap());
        assert_eq!(e.enumerate_row_space(10).unwrap().len(), 1);
    }
}
