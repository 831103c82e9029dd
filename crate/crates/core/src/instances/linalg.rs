//! Dense linear algebra over small prime fields.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::groups::Group;

pub type Vector = Vec<u8>;
pub type Matrix = Vec<Vec<u8>>;

/// The prime field `F_q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Field {
    q: u8,
}

impl Field {
    pub fn new(q: u8) -> Result<Field> {
        let prime = q >= 2 && (2..q).all(|d| !q.is_multiple_of(d));
        if !prime || q > 13 {
            return Err(Error::Invalid(format!(
                "F_{q} is not a supported prime field"
            )));
        }
        Ok(Field { q })
    }

    pub fn order(&self) -> u8 {
        self.q
    }

    #[inline]
    pub fn add(&self, a: u8, b: u8) -> u8 {
        ((a as u16 + b as u16) % self.q as u16) as u8
    }

    #[inline]
    pub fn sub(&self, a: u8, b: u8) -> u8 {
        self.add(a, self.q - b % self.q)
    }

    #[inline]
    pub fn mul(&self, a: u8, b: u8) -> u8 {
        ((a as u16 * b as u16) % self.q as u16) as u8
    }

    pub fn inv(&self, a: u8) -> Option<u8> {
        (1..self.q).find(|&b| self.mul(a, b) == 1)
    }

    pub fn identity(&self, n: usize) -> Matrix {
        (0..n)
            .map(|i| (0..n).map(|j| u8::from(i == j)).collect())
            .collect()
    }

    pub fn mat_mul(&self, a: &Matrix, b: &Matrix) -> Matrix {
        let cols = b.first().map_or(0, Vec::len);
        a.iter()
            .map(|row| {
                (0..cols)
                    .map(|j| {
                        row.iter()
                            .zip(b)
                            .fold(0, |acc, (&x, brow)| self.add(acc, self.mul(x, brow[j])))
                    })
                    .collect()
            })
            .collect()
    }

    pub fn mat_vec(&self, a: &Matrix, v: &[u8]) -> Vector {
        a.iter()
            .map(|row| {
                row.iter()
                    .zip(v)
                    .fold(0, |acc, (&x, &y)| self.add(acc, self.mul(x, y)))
            })
            .collect()
    }

    /// Reduced row echelon form; returns the nonzero rows and pivot columns.
    pub fn rref(&self, mut rows: Matrix) -> (Matrix, Vec<usize>) {
        let cols = rows.first().map_or(0, Vec::len);
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            let Some(p) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
                continue;
            };
            rows.swap(r, p);
            let s = self.inv(rows[r][c]).expect("nonzero");
            for x in rows[r].iter_mut() {
                *x = self.mul(*x, s);
            }
            let pivot = rows[r].clone();
            for (i, row) in rows.iter_mut().enumerate() {
                if i != r && row[c] != 0 {
                    let f = row[c];
                    for (x, &p) in row.iter_mut().zip(&pivot) {
                        *x = self.sub(*x, self.mul(f, p));
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        rows.truncate(r);
        (rows, pivots)
    }

    pub fn rank(&self, rows: &Matrix) -> usize {
        self.rref(rows.clone()).1.len()
    }

    /// Basis of `{x : A x = 0}` for an `r × cols` matrix.
    pub fn nullspace(&self, a: &Matrix, cols: usize) -> Vec<Vector> {
        let (rows, pivots) = self.rref(a.clone());
        let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut x = vec![0; cols];
                x[f] = 1;
                for (row, &p) in rows.iter().zip(&pivots) {
                    x[p] = self.sub(0, row[f]);
                }
                x
            })
            .collect()
    }

    pub fn inverse(&self, a: &Matrix) -> Option<Matrix> {
        let n = a.len();
        let aug: Matrix = a
            .iter()
            .zip(self.identity(n))
            .map(|(row, id)| row.iter().copied().chain(id).collect())
            .collect();
        let (rows, pivots) = self.rref(aug);
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        Some(rows.into_iter().map(|r| r[n..].to_vec()).collect())
    }

    /// Every `r × c` matrix.
    pub fn all_matrices(&self, r: usize, c: usize) -> Vec<Matrix> {
        self.all_vectors(r * c)
            .into_iter()
            .map(|v| v.chunks(c.max(1)).take(r).map(<[u8]>::to_vec).collect())
            .map(|m: Matrix| if c == 0 { vec![Vec::new(); r] } else { m })
            .collect()
    }

    pub fn all_vectors(&self, n: usize) -> Vec<Vector> {
        let mut out = vec![Vec::with_capacity(n)];
        for _ in 0..n {
            out = out
                .into_iter()
                .flat_map(|v| {
                    (0..self.q).map(move |a| {
                        let mut w = v.clone();
                        w.push(a);
                        w
                    })
                })
                .collect();
        }
        out
    }

    pub fn general_linear(&self, n: usize) -> Vec<Matrix> {
        self.all_matrices(n, n)
            .into_iter()
            .filter(|m| self.rank(m) == n)
            .collect()
    }

    /// Linear combination `Σ c_i v_i`.
    pub fn combine(&self, coeffs: &[u8], vectors: &[Vector], len: usize) -> Vector {
        let mut out = vec![0; len];
        for (&c, v) in coeffs.iter().zip(vectors) {
            for (o, &x) in out.iter_mut().zip(v) {
                *o = self.add(*o, self.mul(c, x));
            }
        }
        out
    }
}

/// Extends generator matrices to a representation `ρ(g)` for every element,
/// if they satisfy the relations of the group.
pub fn extend_rep(
    field: &Field,
    group: &Group,
    gens: &[usize],
    images: &[Matrix],
    dim: usize,
) -> Option<Vec<Matrix>> {
    let mut rho: Vec<Option<Matrix>> = vec![None; group.order()];
    rho[0] = Some(field.identity(dim));
    let mut queue = VecDeque::from([0usize]);
    while let Some(g) = queue.pop_front() {
        let rg = rho[g].clone().expect("visited");
        for (&s, rs) in gens.iter().zip(images) {
            let h = group.mul(g, s);
            let value = field.mat_mul(&rg, rs);
            match &rho[h] {
                Some(v) if *v != value => return None,
                Some(_) => {}
                None => {
                    rho[h] = Some(value);
                    queue.push_back(h);
                }
            }
        }
    }
    rho.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gl_orders() {
        assert_eq!(Field::new(2).unwrap().general_linear(2).len(), 6);
        assert_eq!(Field::new(3).unwrap().general_linear(2).len(), 48);
        assert_eq!(Field::new(2).unwrap().general_linear(3).len(), 168);
    }

    #[test]
    fn inverse_and_nullspace() {
        let f = Field::new(3).unwrap();
        let a = vec![vec![1, 2], vec![0, 1]];
        let b = f.inverse(&a).unwrap();
        assert_eq!(f.mat_mul(&a, &b), f.identity(2));
        let n = f.nullspace(&vec![vec![1, 1, 0]], 3);
        assert_eq!(n.len(), 2);
        for v in n {
            assert_eq!(f.mat_vec(&vec![vec![1, 1, 0]], &v), vec![0]);
        }
        assert!(f.inverse(&vec![vec![1, 1], vec![2, 2]]).is_none());
    }

    #[test]
    fn rejects_composite_order() {
        assert!(Field::new(4).is_err());
    }
}
