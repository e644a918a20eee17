use crate::error::{Error, Result};
use crate::linalg::{Field, Matrix, Scalar};

use super::delta::DeltaComplex;

/// Invertible transport on edges, flat across 2-cells.
///
/// Transport is composed along paths left to right: on a 2-cell with edges
/// `e01, e12, e02` flatness reads `T(e01) * T(e12) = T(e02)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalSystem {
    field: Field,
    rank: usize,
    transport: Vec<Matrix>,
    inverse: Vec<Matrix>,
}

impl LocalSystem {
    pub fn new(x: &DeltaComplex, field: Field, rank: usize, transport: Vec<Matrix>) -> Result<LocalSystem> {
        if transport.len() != x.count(1) {
            return Err(Error::Schema(format!(
                "{} transports given for {} edges",
                transport.len(),
                x.count(1)
            )));
        }
        let mut inverse = Vec::with_capacity(transport.len());
        for (e, t) in transport.iter().enumerate() {
            if t.rows() != rank || t.cols() != rank || t.field() != field {
                return Err(Error::Dimension(format!("transport on edge {e} has the wrong shape")));
            }
            inverse.push(t.inverse().ok_or_else(|| Error::Singular(format!("transport on edge {e}")))?);
        }
        let sys = LocalSystem { field, rank, transport, inverse };
        sys.check_flat(x)?;
        Ok(sys)
    }

    pub fn trivial(x: &DeltaComplex, field: Field, rank: usize) -> LocalSystem {
        LocalSystem::new(x, field, rank, vec![Matrix::identity(field, rank); x.count(1)]).unwrap()
    }

    fn check_flat(&self, x: &DeltaComplex) -> Result<()> {
        for s in 0..x.count(2) {
            let (e01, e12, e02) = (x.face(2, s, 2), x.face(2, s, 0), x.face(2, s, 1));
            if self.transport[e01].mul(&self.transport[e12]) != self.transport[e02] {
                return Err(Error::NotFlat(format!(
                    "2-cell {s}: T(e{e01}) T(e{e12}) != T(e{e02})"
                )));
            }
        }
        Ok(())
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn transport(&self, e: usize) -> &Matrix {
        &self.transport[e]
    }

    pub fn transport_inverse(&self, e: usize) -> &Matrix {
        &self.inverse[e]
    }

    pub fn transports(&self) -> &[Matrix] {
        &self.transport
    }

    /// Re-roots by a vertex gauge: `T(e) -> g(v0) T(e) g(v1)^-1`.
    pub fn regauge(&self, x: &DeltaComplex, g: &[Matrix]) -> Result<LocalSystem> {
        let t = (0..x.count(1))
            .map(|e| {
                let v0 = x.face(1, e, 1);
                let v1 = x.face(1, e, 0);
                let inv = g[v1].inverse().ok_or_else(|| Error::Singular("vertex gauge".into()))?;
                Ok(g[v0].mul(&self.transport[e]).mul(&inv))
            })
            .collect::<Result<Vec<_>>>()?;
        LocalSystem::new(x, self.field, self.rank, t)
    }

    /// Transport of `End(V)` in the matrix-unit basis `E_ij -> index i + j r`.
    pub fn adjoint(&self, x: &DeltaComplex) -> LocalSystem {
        let t: Vec<Matrix> =
            self.transport.iter().zip(&self.inverse).map(|(t, ti)| ti.transpose().kron(t)).collect();
        LocalSystem::new(x, self.field, self.rank * self.rank, t).expect("adjoint of a flat system is flat")
    }
}

/// Flat system from edge transports.
pub fn make_local_system(x: &DeltaComplex, field: Field, rank: usize, transport: Vec<Matrix>) -> Result<LocalSystem> {
    LocalSystem::new(x, field, rank, transport)
}

pub fn adjoint_system(x: &DeltaComplex, l: &LocalSystem) -> LocalSystem {
    l.adjoint(x)
}

/// Column-major index of the matrix unit `E_ij` in rank `r`.
pub fn unit_index(r: usize, i: usize, j: usize) -> usize {
    i + j * r
}

/// Flattens an `r x r` matrix in column-major order.
pub fn vec_of(m: &Matrix) -> Vec<Scalar> {
    let r = m.rows();
    let mut v = vec![m.field().zero(); r * r];
    for j in 0..r {
        for i in 0..r {
            v[unit_index(r, i, j)] = m[(i, j)].clone();
        }
    }
    v
}

pub fn unvec(field: Field, r: usize, v: &[Scalar]) -> Matrix {
    let mut m = Matrix::zeros(field, r, r);
    for j in 0..r {
        for i in 0..r {
            m[(i, j)] = v[unit_index(r, i, j)].clone();
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let q = Field::Rational;
        let t = DeltaComplex::torus(2);
        let two = Matrix::from_i64(q, &[&[2]]);
        let three = Matrix::from_i64(q, &[&[3]]);
        let six = Matrix::from_i64(q, &[&[6]]);
        assert!(LocalSystem::new(&t, q, 1, vec![two.clone(), three.clone(), six]).is_ok());
        let err = LocalSystem::new(&t, q, 1, vec![two, three.clone(), three]).unwrap_err();
        assert!(matches!(err, Error::NotFlat(_)));
    }

    #[test]
    fn adjoint_of_diagonal() {
        let q = Field::Rational;
        let c = DeltaComplex::circle();
        let l = LocalSystem::new(&c, q, 2, vec![Matrix::from_i64(q, &[&[1, 0], &[0, 2]])]).unwrap();
        let ad = l.adjoint(&c);
        let half = q.parse_scalar("1/2").unwrap();
        let expected = Matrix::diagonal(q, &[q.one(), q.from_i64(2), half, q.one()]);
        assert_eq!(ad.transport(0), &expected);
        // Ad_T(M) = T M T^-1
        let m = Matrix::from_i64(q, &[&[1, 2], &[3, 4]]);
        let t = l.transport(0);
        let direct = t.mul(&m).mul(l.transport_inverse(0));
        assert_eq!(unvec(q, 2, &ad.transport(0).mul_vec(&vec_of(&m))), direct);
    }

    #[test]
    fn rank_one_adjoint_is_trivial() {
        let q = Field::Rational;
        let c = DeltaComplex::circle();
        let l = LocalSystem::new(&c, q, 1, vec![Matrix::from_i64(q, &[&[5]])]).unwrap();
        assert_eq!(l.adjoint(&c).transport(0), &Matrix::identity(q, 1));
    }
}
