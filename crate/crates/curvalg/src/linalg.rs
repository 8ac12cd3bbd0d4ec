//! Dense exact linear algebra over [`Scalar`] entries.
//!
//! Every linear system in the crate comes from a graded piece of one of the
//! algebras, so matrices are tiny (at most a few dozen rows). Row reduction
//! divides only by pivot entries; pivot selection prefers single-term
//! scalars so that divisions stay inside the Laurent ring.

use crate::Error;
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Scalar::zero(); rows * cols],
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Self {
        let mut m = Matrix::zero(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                *m.get_mut(r, c) = f(r, c);
            }
        }
        m
    }

    pub fn identity(n: usize) -> Self {
        Matrix::from_fn(n, n, |r, c| {
            if r == c {
                Scalar::one()
            } else {
                Scalar::zero()
            }
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.cols + c]
    }

    pub fn get_mut(&mut self, r: usize, c: usize) -> &mut Scalar {
        &mut self.data[r * self.cols + c]
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |r, c| self.get(c, r).clone())
    }

    pub fn mul_vec(&self, x: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|r| {
                let mut acc = Scalar::zero();
                for (c, xc) in x.iter().enumerate() {
                    if !xc.is_zero() {
                        acc += self.get(r, c) * xc;
                    }
                }
                acc
            })
            .collect()
    }

    pub fn mul_mat(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows);
        Matrix::from_fn(self.rows, rhs.cols, |r, c| {
            let mut acc = Scalar::zero();
            for k in 0..self.cols {
                acc += self.get(r, k) * rhs.get(k, c);
            }
            acc
        })
    }

    /// In-place reduced row echelon form; returns the pivot columns.
    pub fn rref(&mut self) -> Result<Vec<usize>, Error> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let mut pick = None;
            for r in row..self.rows {
                if !self.get(r, col).is_zero() {
                    if self.get(r, col).single_term().is_some() {
                        pick = Some(r);
                        break;
                    }
                    if pick.is_none() {
                        pick = Some(r);
                    }
                }
            }
            let Some(p) = pick else { continue };
            for c in 0..self.cols {
                let a = p * self.cols + c;
                let b = row * self.cols + c;
                self.data.swap(a, b);
            }
            let piv = self.get(row, col).clone();
            for c in 0..self.cols {
                let v = self.get(row, c).try_div(&piv)?;
                *self.get_mut(row, c) = v;
            }
            for r in 0..self.rows {
                if r != row && !self.get(r, col).is_zero() {
                    let f = self.get(r, col).clone();
                    for c in 0..self.cols {
                        let delta = &f * self.get(row, c);
                        *self.get_mut(r, c) -= delta;
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        Ok(pivots)
    }

    /// Solves `self * x = b` requiring a unique solution.
    pub fn solve_unique(&self, b: &[Scalar], what: &'static str) -> Result<Vec<Scalar>, Error> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Matrix::zero(self.rows, self.cols + 1);
        for (r, bv) in b.iter().enumerate() {
            for c in 0..self.cols {
                *aug.get_mut(r, c) = self.get(r, c).clone();
            }
            *aug.get_mut(r, self.cols) = bv.clone();
        }
        let pivots = aug.rref()?;
        if pivots.contains(&self.cols) || pivots.len() != self.cols {
            return Err(Error::Singular(what));
        }
        let mut x = vec![Scalar::zero(); self.cols];
        for (row, col) in pivots.iter().enumerate() {
            x[*col] = aug.get(row, self.cols).clone();
        }
        Ok(x)
    }

    pub fn inverse(&self, what: &'static str) -> Result<Matrix, Error> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = Matrix::zero(n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                *aug.get_mut(r, c) = self.get(r, c).clone();
            }
            *aug.get_mut(r, n + r) = Scalar::one();
        }
        let pivots = aug.rref()?;
        if pivots.len() != n || pivots.iter().enumerate().any(|(i, c)| i != *c) {
            return Err(Error::Singular(what));
        }
        Ok(Matrix::from_fn(n, n, |r, c| aug.get(r, n + c).clone()))
    }

    /// A basis of the kernel, one coordinate vector per free column.
    pub fn nullspace(&self) -> Result<Vec<Vec<Scalar>>, Error> {
        let mut m = self.clone();
        let pivots = m.rref()?;
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivots.contains(&free) {
                continue;
            }
            let mut x = vec![Scalar::zero(); self.cols];
            x[free] = Scalar::one();
            for (row, col) in pivots.iter().enumerate() {
                x[*col] = -m.get(row, free);
            }
            basis.push(x);
        }
        Ok(basis)
    }

    pub fn rank(&self) -> Result<usize, Error> {
        let mut m = self.clone();
        Ok(m.rref()?.len())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn s(n: i64, d: i64) -> Scalar {
        Scalar::from_rational(rat(n, d))
    }

    #[test]
    fn solve_and_invert() {
        // [[1, 2], [3, 4]]
        let a = Matrix::from_fn(2, 2, |r, c| s((1 + 2 * r + c) as i64, 1));
        let x = a.solve_unique(&[s(5, 1), s(11, 1)], "test").unwrap();
        assert_eq!(x, vec![s(1, 1), s(2, 1)]);
        let inv = a.inverse("test").unwrap();
        assert_eq!(a.mul_mat(&inv), Matrix::identity(2));
    }

    #[test]
    fn pi_graded_entries() {
        // Columns carry uniform pi powers; pivots stay monomial.
        let a = Matrix::from_fn(2, 2, |r, c| match (r, c) {
            (0, 0) => Scalar::pi_pow(-1),
            (1, 0) => Scalar::rational_times_pi(rat(2, 1), -1),
            (0, 1) => s(3, 1),
            _ => s(4, 1),
        });
        let inv = a.inverse("test").unwrap();
        assert_eq!(a.mul_mat(&inv), Matrix::identity(2));
    }

    #[test]
    fn nullspace_of_rank_one() {
        let a = Matrix::from_fn(2, 3, |r, c| s(((r + 1) * (c + 1)) as i64, 1));
        let ns = a.nullspace().unwrap();
        assert_eq!(ns.len(), 2);
        for v in ns {
            let y = a.mul_vec(&v);
            assert!(y.iter().all(Scalar::is_zero));
        }
    }

    #[test]
    fn singular_system_is_reported() {
        let a = Matrix::from_fn(2, 2, |_, c| s(c as i64 + 1, 1));
        assert!(matches!(
            a.solve_unique(&[s(1, 1), s(2, 1)], "test"),
            Err(Error::Singular(_))
        ));
    }
}
