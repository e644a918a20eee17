use super::matrix::Matrix;
use super::scalar::{Field, Scalar};
use crate::error::{Error, Result};

/// A subspace of `k^n` given by independent column vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    field: Field,
    ambient: usize,
    basis: Vec<Vec<Scalar>>,
}

impl Subspace {
    pub fn zero(field: Field, ambient: usize) -> Subspace {
        Subspace { field, ambient, basis: Vec::new() }
    }

    pub fn full(field: Field, ambient: usize) -> Subspace {
        let basis = (0..ambient).map(|i| unit(field, ambient, i)).collect();
        Subspace { field, ambient, basis }
    }

    /// Span of arbitrary vectors, with the reduced row-echelon basis.
    pub fn span(field: Field, ambient: usize, vectors: &[Vec<Scalar>]) -> Subspace {
        if vectors.is_empty() {
            return Subspace::zero(field, ambient);
        }
        let m = Matrix::from_rows(field, vectors.to_vec()).expect("uniform vectors");
        assert_eq!(m.cols(), ambient, "span: vector length");
        let r = m.rref();
        let basis = (0..r.pivots.len()).map(|i| r.matrix.row(i).to_vec()).collect();
        Subspace { field, ambient, basis }
    }

    /// Keeps the given vectors as basis; they must be independent.
    pub fn from_basis(field: Field, ambient: usize, basis: Vec<Vec<Scalar>>) -> Result<Subspace> {
        if basis.iter().any(|v| v.len() != ambient) {
            return Err(Error::Dimension("basis vector length".into()));
        }
        if !basis.is_empty() {
            let m = Matrix::from_rows(field, basis.clone())?;
            if m.rank() != basis.len() {
                return Err(Error::Dimension("basis vectors are dependent".into()));
            }
        }
        Ok(Subspace { field, ambient, basis })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<Scalar>] {
        &self.basis
    }

    pub fn into_basis(self) -> Vec<Vec<Scalar>> {
        self.basis
    }

    /// `ambient × dim` matrix with the basis as columns.
    pub fn matrix(&self) -> Matrix {
        Matrix::from_columns(self.field, self.ambient, &self.basis)
    }

    fn rows_matrix(&self) -> Option<Matrix> {
        if self.basis.is_empty() {
            None
        } else {
            Matrix::from_rows(self.field, self.basis.clone()).ok()
        }
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        if v.iter().all(Scalar::is_zero) {
            return true;
        }
        self.coordinates(v).is_some()
    }

    /// Coordinates of `v` relative to the basis, if `v` lies in the span.
    pub fn coordinates(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        if self.basis.is_empty() {
            return v.iter().all(Scalar::is_zero).then(Vec::new);
        }
        self.matrix().solve(v)
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut all = self.basis.clone();
        all.extend(other.basis.iter().cloned());
        Subspace::span(self.field, self.ambient, &all)
    }

    pub fn intersection(&self, other: &Subspace) -> Subspace {
        if self.dim() == 0 || other.dim() == 0 {
            return Subspace::zero(self.field, self.ambient);
        }
        // [A | -B] (x; y) = 0  =>  A x lies in both
        let a = self.matrix();
        let b = other.matrix().scale(&-&self.field.one());
        let k = a.hstack(&b).kernel_vectors();
        let vecs: Vec<Vec<Scalar>> = k.iter().map(|xy| a.mul_vec(&xy[..self.dim()])).collect();
        Subspace::span(self.field, self.ambient, &vecs)
    }

    /// Whether `m · self ⊆ self`.
    pub fn is_stable(&self, m: &Matrix) -> bool {
        self.basis.iter().all(|v| self.contains(&m.mul_vec(v)))
    }

    pub fn image_under(&self, m: &Matrix) -> Subspace {
        let vecs: Vec<Vec<Scalar>> = self.basis.iter().map(|v| m.mul_vec(v)).collect();
        Subspace::span(self.field, m.rows(), &vecs)
    }

    pub fn is_independent_of(&self, other: &Subspace) -> bool {
        self.sum(other).dim() == self.dim() + other.dim()
    }

    /// Whether two bases span the same space.
    pub fn same_span(&self, other: &Subspace) -> bool {
        self.dim() == other.dim() && self.contains_subspace(other)
    }

    /// Matrix of `m` restricted to this (stable) subspace, in basis coordinates.
    pub fn restrict(&self, m: &Matrix) -> Result<Matrix> {
        let mut cols = Vec::with_capacity(self.dim());
        for v in &self.basis {
            let w = m.mul_vec(v);
            cols.push(
                self.coordinates(&w)
                    .ok_or_else(|| Error::Precondition("subspace is not stable".into()))?,
            );
        }
        Ok(Matrix::from_columns(self.field, self.dim(), &cols))
    }

    /// Vector in the ambient space from basis coordinates.
    pub fn combine(&self, coords: &[Scalar]) -> Vec<Scalar> {
        let mut out = vec![self.field.zero(); self.ambient];
        for (c, v) in coords.iter().zip(&self.basis) {
            if c.is_zero() {
                continue;
            }
            for (o, x) in out.iter_mut().zip(v) {
                super::scalar::fma(o, c, x);
            }
        }
        out
    }

    fn rref_pivots(&self) -> Vec<usize> {
        self.rows_matrix().map(|m| m.rref().pivots).unwrap_or_default()
    }
}

pub fn unit(field: Field, n: usize, i: usize) -> Vec<Scalar> {
    let mut v = vec![field.zero(); n];
    v[i] = field.one();
    v
}

/// Basis of `{v : M v = 0}`.
pub fn kernel_basis(m: &Matrix) -> Subspace {
    Subspace { field: m.field(), ambient: m.cols(), basis: m.kernel_vectors() }
}

/// Column space of `m`.
pub fn image(m: &Matrix) -> Subspace {
    Subspace::span(m.field(), m.rows(), &m.columns())
}

/// Deterministic complement of `u` inside `inside`: the `inside` basis vectors (in echelon form)
/// at coordinates that are not pivots of `u` expressed in that basis.
pub fn complement(u: &Subspace, inside: &Subspace) -> Result<Subspace> {
    if !inside.contains_subspace(u) {
        return Err(Error::Precondition("subspace is not contained in the ambient piece".into()));
    }
    let field = inside.field();
    let w = Subspace::span(field, inside.ambient(), inside.basis());
    let coords: Vec<Vec<Scalar>> =
        u.basis().iter().map(|v| w.coordinates(v).expect("contained")).collect();
    let u_local = Subspace::span(field, w.dim(), &coords);
    let pivots = u_local.rref_pivots();
    let basis = (0..w.dim())
        .filter(|j| !pivots.contains(j))
        .map(|j| w.basis()[j].clone())
        .collect();
    Ok(Subspace { field, ambient: inside.ambient(), basis })
}

/// Complement `C` with `inside = u ⊕ C`; when `commuting_with` is given, `C` is chosen stable
/// under it, block by block on the primary decomposition.
pub fn invariant_complement(
    u: &Subspace,
    inside: &Subspace,
    commuting_with: Option<&Matrix>,
) -> Result<Subspace> {
    let Some(phi) = commuting_with else {
        return complement(u, inside);
    };
    if !inside.contains_subspace(u) {
        return Err(Error::Precondition("subspace is not contained in the ambient piece".into()));
    }
    if !u.is_stable(phi) {
        return Err(Error::Precondition("subspace is not stable under the operator".into()));
    }
    if !inside.is_stable(phi) {
        return Err(Error::Precondition("ambient piece is not stable under the operator".into()));
    }
    let field = inside.field();
    let w = Subspace::span(field, inside.ambient(), inside.basis());
    let local_phi = w.restrict(phi)?;
    let u_local = Subspace::span(
        field,
        w.dim(),
        &u.basis().iter().map(|v| w.coordinates(v).expect("contained")).collect::<Vec<_>>(),
    );
    let mut chosen: Vec<Vec<Scalar>> = Vec::new();
    for (_, block) in super::decompose::primary_decomposition(&local_phi)? {
        let u_block = u_local.intersection(&block);
        let target = block.dim() - u_block.dim();
        if u_block.dim() == 0 {
            chosen.extend(block.basis().iter().cloned());
            continue;
        }
        let mut acc = u_block.clone();
        let mut c_block: Vec<Vec<Scalar>> = Vec::new();
        for cand in block.basis() {
            if c_block.len() == target {
                break;
            }
            let cyclic = krylov(&local_phi, cand);
            if acc.sum(&cyclic).dim() == acc.dim() + cyclic.dim()
                && c_block.len() + cyclic.dim() <= target
            {
                acc = acc.sum(&cyclic);
                c_block.extend(cyclic.basis().iter().cloned());
            }
        }
        if c_block.len() != target {
            return Err(Error::Precondition(
                "no invariant complement found (non-semisimple block)".into(),
            ));
        }
        chosen.extend(c_block);
    }
    let basis = chosen.iter().map(|c| w.combine(c)).collect();
    Ok(Subspace { field, ambient: inside.ambient(), basis })
}

/// Cyclic subspace spanned by `v, Mv, M²v, ...`.
pub fn krylov(m: &Matrix, v: &[Scalar]) -> Subspace {
    let field = m.field();
    let mut vecs: Vec<Vec<Scalar>> = Vec::new();
    let mut cur = v.to_vec();
    loop {
        let next = Subspace::span(field, m.rows(), &[vecs.clone(), vec![cur.clone()]].concat());
        if next.dim() == vecs.len() {
            break;
        }
        vecs.push(cur.clone());
        cur = m.mul_vec(&cur);
    }
    Subspace::span(field, m.rows(), &vecs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Field {
        Field::Rational
    }

    #[test]
    fn kernel_examples() {
        let z = Matrix::zeros(q(), 2, 2);
        assert_eq!(kernel_basis(&z).dim(), 2);
        assert_eq!(kernel_basis(&Matrix::identity(q(), 3)).dim(), 0);
        let m = Matrix::from_i64(q(), &[&[1, 2], &[2, 4]]);
        let k = kernel_basis(&m);
        let expected = Subspace::span(q(), 2, &[vec![q().from_i64(2), q().from_i64(-1)]]);
        assert!(k.same_span(&expected));
    }

    #[test]
    fn complement_examples() {
        let full = Subspace::full(q(), 2);
        assert_eq!(invariant_complement(&full, &full, None).unwrap().dim(), 0);
        let zero = Subspace::zero(q(), 2);
        assert_eq!(invariant_complement(&zero, &full, None).unwrap().dim(), 2);
        let phi = Matrix::diagonal(q(), &[q().from_i64(2), q().from_i64(3)]);
        let e1 = Subspace::span(q(), 2, &[unit(q(), 2, 0)]);
        let c = invariant_complement(&e1, &full, Some(&phi)).unwrap();
        assert!(c.same_span(&Subspace::span(q(), 2, &[unit(q(), 2, 1)])));
    }

    #[test]
    fn complement_errors() {
        let e1 = Subspace::span(q(), 2, &[unit(q(), 2, 0)]);
        let e2 = Subspace::span(q(), 2, &[unit(q(), 2, 1)]);
        assert!(complement(&e1, &e2).is_err());
        let swap = Matrix::from_i64(q(), &[&[0, 1], &[1, 0]]);
        let full = Subspace::full(q(), 2);
        assert!(invariant_complement(&e1, &full, Some(&swap)).is_err());
    }

    #[test]
    fn invariant_complement_avoids_non_invariant_choice() {
        // U = span(1,1) stable under diag(2,2)+... use phi with eigenvectors (1,1) and (1,0)
        let phi = Matrix::from_i64(q(), &[&[3, -1], &[0, 2]]);
        let u = Subspace::span(q(), 2, &[vec![q().from_i64(1), q().from_i64(1)]]);
        let full = Subspace::full(q(), 2);
        let c = invariant_complement(&u, &full, Some(&phi)).unwrap();
        assert!(c.is_stable(&phi));
        assert!(u.is_independent_of(&c));
    }
}
