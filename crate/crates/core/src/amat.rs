//! Square matrices with entries in a test ring.

use crate::artin::{self, RVec, TestRing};
use crate::error::{Error, Result};
use crate::linalg::{Matrix, Scalar};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AMat {
    r: usize,
    /// Row-major entries.
    e: Vec<RVec>,
}

impl AMat {
    pub fn zero(ring: &TestRing, r: usize) -> AMat {
        AMat { r, e: vec![ring.zero(); r * r] }
    }

    pub fn identity(ring: &TestRing, r: usize) -> AMat {
        let mut m = AMat::zero(ring, r);
        for i in 0..r {
            m.e[i * r + i] = ring.one();
        }
        m
    }

    /// Constant matrix from a field matrix.
    pub fn constant(ring: &TestRing, m: &Matrix) -> AMat {
        let r = m.rows();
        let mut out = AMat::zero(ring, r);
        for i in 0..r {
            for j in 0..r {
                out.e[i * r + j] = ring.scalar(&m[(i, j)]);
            }
        }
        out
    }

    /// From a column-major coefficient vector (the `End(V)` fibre layout).
    pub fn from_fibre(r: usize, fibre: &[RVec]) -> AMat {
        let mut e = vec![Vec::new(); r * r];
        for j in 0..r {
            for i in 0..r {
                e[i * r + j] = fibre[i + j * r].clone();
            }
        }
        AMat { r, e }
    }

    pub fn to_fibre(&self) -> Vec<RVec> {
        let r = self.r;
        let mut out = vec![Vec::new(); r * r];
        for j in 0..r {
            for i in 0..r {
                out[i + j * r] = self.e[i * r + j].clone();
            }
        }
        out
    }

    pub fn rank(&self) -> usize {
        self.r
    }

    pub fn get(&self, i: usize, j: usize) -> &RVec {
        &self.e[i * self.r + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: RVec) {
        self.e[i * self.r + j] = v;
    }

    pub fn entries(&self) -> &[RVec] {
        &self.e
    }

    pub fn is_zero(&self) -> bool {
        self.e.iter().all(|x| artin::is_zero(x))
    }

    pub fn add(&self, other: &AMat) -> AMat {
        AMat { r: self.r, e: self.e.iter().zip(&other.e).map(|(a, b)| artin::add(a, b)).collect() }
    }

    pub fn sub(&self, other: &AMat) -> AMat {
        AMat { r: self.r, e: self.e.iter().zip(&other.e).map(|(a, b)| artin::sub(a, b)).collect() }
    }

    pub fn neg(&self) -> AMat {
        AMat { r: self.r, e: self.e.iter().map(|a| artin::neg(a)).collect() }
    }

    pub fn scale(&self, c: &Scalar) -> AMat {
        AMat { r: self.r, e: self.e.iter().map(|a| artin::scale(a, c)).collect() }
    }

    pub fn mul(&self, ring: &TestRing, other: &AMat) -> AMat {
        let r = self.r;
        let mut out = AMat::zero(ring, r);
        for i in 0..r {
            for k in 0..r {
                let a = &self.e[i * r + k];
                if artin::is_zero(a) {
                    continue;
                }
                for j in 0..r {
                    let b = &other.e[k * r + j];
                    if !artin::is_zero(b) {
                        ring.mul_add(&mut out.e[i * r + j], a, b);
                    }
                }
            }
        }
        out
    }

    /// `L * self` for a field matrix `L`.
    pub fn left_k(&self, l: &Matrix) -> AMat {
        let r = self.r;
        let field = l.field();
        let mut out = AMat { r, e: vec![vec![field.zero(); self.e[0].len()]; r * r] };
        for i in 0..r {
            for k in 0..r {
                let c = &l[(i, k)];
                if c.is_zero() {
                    continue;
                }
                for j in 0..r {
                    let src = &self.e[k * r + j];
                    let dst = &mut out.e[i * r + j];
                    for (d, s) in dst.iter_mut().zip(src) {
                        crate::linalg::scalar::fma(d, c, s);
                    }
                }
            }
        }
        out
    }

    /// `self * R` for a field matrix `R`.
    pub fn right_k(&self, m: &Matrix) -> AMat {
        let r = self.r;
        let field = m.field();
        let mut out = AMat { r, e: vec![vec![field.zero(); self.e[0].len()]; r * r] };
        for i in 0..r {
            for k in 0..r {
                let src = &self.e[i * r + k];
                if artin::is_zero(src) {
                    continue;
                }
                for j in 0..r {
                    let c = &m[(k, j)];
                    if c.is_zero() {
                        continue;
                    }
                    let dst = &mut out.e[i * r + j];
                    for (d, s) in dst.iter_mut().zip(src) {
                        crate::linalg::scalar::fma(d, c, s);
                    }
                }
            }
        }
        out
    }

    /// `T * self * T^-1`.
    pub fn conj_k(&self, t: &Matrix, t_inv: &Matrix) -> AMat {
        self.left_k(t).right_k(t_inv)
    }

    /// Residue matrix over `k` (coefficient 0 of each entry).
    pub fn residue(&self, field: crate::linalg::Field) -> Matrix {
        let r = self.r;
        let mut m = Matrix::zeros(field, r, r);
        for i in 0..r {
            for j in 0..r {
                m[(i, j)] = self.e[i * r + j][0].clone();
            }
        }
        m
    }

    /// Inverse of a matrix whose residue is invertible.
    pub fn inverse(&self, ring: &TestRing) -> Result<AMat> {
        let field = ring.field();
        let res = self.residue(field);
        let one = AMat::identity(ring, self.r);
        let unipotent = res == Matrix::identity(field, self.r);
        let res_inv = if unipotent {
            None
        } else {
            Some(res.inverse().ok_or_else(|| Error::Singular("residue matrix".into()))?)
        };
        // self = res (1 + n) with n nilpotent.
        let n = match &res_inv {
            None => self.sub(&one),
            Some(ri) => self.left_k(ri).sub(&one),
        };
        let neg_n = n.neg();
        let mut acc = one.clone();
        let mut pow = one;
        for _ in 1..ring.exact_nilpotency() {
            pow = pow.mul(ring, &neg_n);
            if pow.is_zero() {
                break;
            }
            acc = acc.add(&pow);
        }
        Ok(match &res_inv {
            None => acc,
            Some(ri) => acc.right_k(ri),
        })
    }

    /// Re-interprets entries in a ring with `len` coordinates.
    pub fn resize(&self, len: usize, field: crate::linalg::Field) -> AMat {
        AMat { r: self.r, e: self.e.iter().map(|a| artin::resize(a, len, field)).collect() }
    }

    /// Coefficient of basis vector `k` in each entry.
    pub fn coefficient(&self, k: usize, field: crate::linalg::Field) -> Matrix {
        let r = self.r;
        let mut m = Matrix::zeros(field, r, r);
        for i in 0..r {
            for j in 0..r {
                m[(i, j)] = self.e[i * r + j][k].clone();
            }
        }
        m
    }

    pub fn render(&self, ring: &TestRing) -> String {
        let rows: Vec<String> = (0..self.r)
            .map(|i| {
                let cells: Vec<String> = (0..self.r).map(|j| ring.render(self.get(i, j))).collect();
                format!("[{}]", cells.join(", "))
            })
            .collect();
        format!("[{}]", rows.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Field;

    #[test]
    fn inverse_over_truncated_ring() {
        let f5 = Field::Prime(5);
        let ring = TestRing::truncated_polynomial(f5, 3).unwrap();
        let base = Matrix::from_i64(f5, &[&[1, 1], &[0, 2]]);
        let mut m = AMat::constant(&ring, &base);
        m.set(1, 0, ring.basis_vector(1));
        m.set(0, 0, artin::add(&ring.one(), &ring.basis_vector(2)));
        let inv = m.inverse(&ring).unwrap();
        assert_eq!(m.mul(&ring, &inv), AMat::identity(&ring, 2));
    }
}
