use crate::error::{Error, Result};
use crate::linalg::subspace::invariant_complement;
use crate::linalg::{kernel_basis, Field, Matrix, Scalar, Subspace};

use super::cochain::differential_matrix;
use super::delta::DeltaComplex;
use super::local_system::LocalSystem;

/// Cohomology in one degree together with a splitting `C^n = H ⊕ B ⊕ C`.
///
/// `H` is spanned by the representative cocycles, `B` is the coboundaries, and `C` is a
/// complement of the cocycles. The contraction `h: C^n -> C^{n-1}` inverts `d` on `B`
/// (landing in a complement of the cocycles one degree down) and vanishes on `H ⊕ C`.
#[derive(Clone, Debug)]
pub struct CohomologyData {
    pub degree: usize,
    pub representatives: Vec<Vec<Scalar>>,
    pub cocycles: Subspace,
    pub coboundaries: Subspace,
    pub complement: Subspace,
    /// Inverse of the basis matrix `[H | B | C]`.
    coords: Matrix,
    contraction: Matrix,
}

impl CohomologyData {
    pub fn dim(&self) -> usize {
        self.representatives.len()
    }

    pub fn ambient(&self) -> usize {
        self.cocycles.ambient()
    }

    pub fn field(&self) -> Field {
        self.cocycles.field()
    }

    /// Coordinates of `v` along `H`, `B`, `C` in that order.
    pub fn decompose(&self, v: &[Scalar]) -> Vec<Scalar> {
        self.coords.mul_vec(v)
    }

    /// Harmonic projection `π_H` in the representative basis (defined on all of `C^n`).
    pub fn project(&self, v: &[Scalar]) -> Vec<Scalar> {
        let mut c = self.decompose(v);
        c.truncate(self.dim());
        c
    }

    /// `π_H` as a `dim H x dim C^n` matrix.
    pub fn projection_matrix(&self) -> Matrix {
        self.coords.submatrix(0..self.dim(), 0..self.ambient())
    }

    pub fn contraction_matrix(&self) -> &Matrix {
        &self.contraction
    }

    pub fn contract(&self, v: &[Scalar]) -> Vec<Scalar> {
        self.contraction.mul_vec(v)
    }

    pub fn is_cocycle(&self, v: &[Scalar]) -> bool {
        self.cocycles.contains(v)
    }

    /// Another valid splitting: representatives moved by coboundaries and the complement
    /// by cocycles, with the contraction rebuilt to vanish on the new `H ⊕ C`.
    pub fn resplit<R: rand::Rng>(&self, rng: &mut R) -> CohomologyData {
        let field = self.field();
        let n = self.ambient();
        let b = self.coboundaries.basis();
        let z = self.cocycles.basis();
        let mut shift = |v: &[Scalar], by: &[Vec<Scalar>]| -> Vec<Scalar> {
            let mut out = v.to_vec();
            for w in by {
                let c = crate::sdc::random_scalar(field, rng.gen());
                for (o, x) in out.iter_mut().zip(w) {
                    crate::linalg::scalar::fma(o, &c, x);
                }
            }
            out
        };
        let representatives: Vec<Vec<Scalar>> = self.representatives.iter().map(|h| shift(h, b)).collect();
        let complement_basis: Vec<Vec<Scalar>> = self.complement.basis().iter().map(|c| shift(c, z)).collect();
        let mut basis = representatives.clone();
        basis.extend(b.iter().cloned());
        basis.extend(complement_basis.iter().cloned());
        let coords = Matrix::from_columns(field, n, &basis).inverse().expect("sheared basis stays invertible");
        let hdim = representatives.len();
        let bmat = Matrix::from_columns(field, n, b);
        let b_rows = coords.submatrix(hdim..hdim + b.len(), 0..n);
        let contraction = self.contraction.mul(&bmat).mul(&b_rows);
        CohomologyData {
            degree: self.degree,
            representatives,
            cocycles: self.cocycles.clone(),
            coboundaries: self.coboundaries.clone(),
            complement: Subspace::from_basis(field, n, complement_basis).expect("independent complement"),
            coords,
            contraction,
        }
    }

    /// The same splitting with representatives `rep'_j = sum_i basis[i][j] rep_i`.
    pub fn rebase(&self, basis: &Matrix) -> Result<CohomologyData> {
        let d = self.dim();
        let inv = basis.inverse().ok_or_else(|| Error::Singular("change of cohomology basis".into()))?;
        let representatives = (0..d).map(|j| self.combine(&basis.column(j))).collect();
        let top = inv.mul(&self.coords.submatrix(0..d, 0..self.ambient()));
        let coords = top.vstack(&self.coords.submatrix(d..self.ambient(), 0..self.ambient()));
        Ok(CohomologyData { representatives, coords, ..self.clone() })
    }

    /// The same splitting with coefficients reduced mod `p`.
    pub fn reduce(&self, field: Field) -> Result<CohomologyData> {
        let vecs = |v: &[Vec<Scalar>]| -> Result<Vec<Vec<Scalar>>> {
            v.iter().map(|x| x.iter().map(|c| c.reduce(field)).collect()).collect()
        };
        let sub = |s: &Subspace| Subspace::from_basis(field, s.ambient(), vecs(s.basis())?);
        let out = CohomologyData {
            degree: self.degree,
            representatives: vecs(&self.representatives)?,
            cocycles: sub(&self.cocycles)?,
            coboundaries: sub(&self.coboundaries)?,
            complement: sub(&self.complement)?,
            coords: self.coords.reduce(field)?,
            contraction: self.contraction.reduce(field)?,
        };
        Ok(out)
    }

    /// `sum_i c_i rep_i`.
    pub fn combine(&self, c: &[Scalar]) -> Vec<Scalar> {
        let mut out = vec![self.field().zero(); self.ambient()];
        for (ci, rep) in c.iter().zip(&self.representatives) {
            if ci.is_zero() {
                continue;
            }
            for (o, x) in out.iter_mut().zip(rep) {
                crate::linalg::scalar::fma(o, ci, x);
            }
        }
        out
    }
}

/// Splits the middle term of `C^{n-1} --d_prev--> C^n --d_next--> C^{n+1}`.
///
/// With `phi = Some((phi_prev, phi_cur))` every chosen complement is stable under the
/// given automorphisms, which must commute with the differentials.
pub fn split(
    degree: usize,
    d_prev: &Matrix,
    d_next: &Matrix,
    phi: Option<(&Matrix, &Matrix)>,
) -> Result<CohomologyData> {
    let field = d_prev.field();
    let n = d_prev.rows();
    if d_next.cols() != n {
        return Err(Error::Dimension("differentials do not compose".into()));
    }
    if !d_next.mul(d_prev).is_zero() {
        return Err(Error::Dimension("d o d != 0".into()));
    }
    let cocycles = kernel_basis(d_next);
    let columns = d_prev.columns();
    let coboundaries = Subspace::span(field, n, &columns);
    let full = Subspace::full(field, n);
    let (phi_prev, phi_cur) = match phi {
        Some((a, b)) => (Some(a), Some(b)),
        None => (None, None),
    };
    let harmonic = invariant_complement(&coboundaries, &cocycles, phi_cur)?;
    let complement = invariant_complement(&cocycles, &full, phi_cur)?;
    let mut basis: Vec<Vec<Scalar>> = harmonic.basis().to_vec();
    basis.extend(coboundaries.basis().iter().cloned());
    basis.extend(complement.basis().iter().cloned());
    let bmat = Matrix::from_columns(field, n, &basis);
    let coords = bmat.inverse().ok_or_else(|| Error::Singular("splitting basis".into()))?;

    // Contraction through a complement of the cocycles one degree down.
    let m = d_prev.cols();
    let low_cocycles = kernel_basis(d_prev);
    let low_full = Subspace::full(field, m);
    let low_complement = invariant_complement(&low_cocycles, &low_full, phi_prev)?;
    let k = low_complement.matrix();
    let dk = d_prev.mul(&k);
    let mut contraction = Matrix::zeros(field, m, n);
    let hdim = harmonic.dim();
    for (i, b) in coboundaries.basis().iter().enumerate() {
        let y = dk.solve(b).ok_or_else(|| Error::Singular("coboundary not in the image".into()))?;
        let c = k.mul_vec(&y);
        // h = c (x) (row hdim + i of coords)
        for r in 0..m {
            if c[r].is_zero() {
                continue;
            }
            for col in 0..n {
                let w = &coords[(hdim + i, col)];
                if !w.is_zero() {
                    let cur = contraction[(r, col)].clone();
                    contraction[(r, col)] = &cur + &(&c[r] * w);
                }
            }
        }
    }
    Ok(CohomologyData {
        degree,
        representatives: harmonic.into_basis(),
        cocycles,
        coboundaries,
        complement,
        coords,
        contraction,
    })
}

/// Twisted cohomology `H^n(X, L)` over the base field.
pub fn cohomology(x: &DeltaComplex, sys: &LocalSystem, n: usize) -> Result<CohomologyData> {
    if n > 3 {
        return Err(Error::Dimension("cohomology degree above 3".into()));
    }
    let f = sys.rank();
    let field = sys.field();
    let d_prev = if n == 0 {
        Matrix::zeros(field, f * x.count(0), 0)
    } else {
        differential_matrix(x, sys, n - 1)
    };
    let d_next = if n == 3 {
        Matrix::zeros(field, 0, f * x.count(3))
    } else {
        differential_matrix(x, sys, n)
    };
    split(n, &d_prev, &d_next, None)
}

pub fn betti(x: &DeltaComplex, sys: &LocalSystem) -> Result<[usize; 3]> {
    Ok([
        cohomology(x, sys, 0)?.dim(),
        cohomology(x, sys, 1)?.dim(),
        cohomology(x, sys, 2)?.dim(),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Field {
        Field::Rational
    }

    #[test]
    fn examples() {
        let w = DeltaComplex::wedge_of_circles(2);
        assert_eq!(betti(&w, &LocalSystem::trivial(&w, q(), 1)).unwrap(), [1, 2, 0]);
        let t = DeltaComplex::torus(2);
        assert_eq!(betti(&t, &LocalSystem::trivial(&t, q(), 1)).unwrap(), [1, 2, 1]);
        let twisted = LocalSystem::new(
            &t,
            q(),
            1,
            vec![Matrix::from_i64(q(), &[&[2]]), Matrix::from_i64(q(), &[&[3]]), Matrix::from_i64(q(), &[&[6]])],
        )
        .unwrap();
        assert_eq!(betti(&t, &twisted).unwrap(), [0, 0, 0]);
    }

    #[test]
    fn splitting_identities() {
        let t = DeltaComplex::torus(2);
        let l = LocalSystem::trivial(&t, q(), 2).adjoint(&t);
        let h1 = cohomology(&t, &l, 1).unwrap();
        let d0 = differential_matrix(&t, &l, 0);
        // d h = id on coboundaries
        let h2 = cohomology(&t, &l, 2).unwrap();
        let d1 = differential_matrix(&t, &l, 1);
        for b in h2.coboundaries.basis() {
            assert_eq!(&d1.mul_vec(&h2.contract(b)), b);
            assert!(h2.project(b).iter().all(Scalar::is_zero));
        }
        for (i, rep) in h1.representatives.iter().enumerate() {
            let p = h1.project(rep);
            assert!(p.iter().enumerate().all(|(j, c)| if i == j { c.is_one() } else { c.is_zero() }));
        }
        assert_eq!(h1.dim(), 8);
        assert!(d0.is_zero());
    }
}
