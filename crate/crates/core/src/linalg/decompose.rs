use crate::error::{Error, Result};

use super::factor::factor;
use super::matrix::Matrix;
use super::poly::Poly;
use super::scalar::{fma, Scalar};
use super::subspace::{kernel_basis, Subspace};

/// Characteristic polynomial `det(t - M)` via reduction to Hessenberg form.
pub fn charpoly(m: &Matrix) -> Poly {
    assert!(m.is_square(), "charpoly of a non-square matrix");
    let field = m.field();
    let n = m.rows();
    let mut h = m.clone();
    for col in 0..n.saturating_sub(2) {
        let piv = (col + 1..n).find(|&i| !h[(i, col)].is_zero());
        let Some(i) = piv else { continue };
        if i != col + 1 {
            for j in 0..n {
                let tmp = h[(i, j)].clone();
                h[(i, j)] = h[(col + 1, j)].clone();
                h[(col + 1, j)] = tmp;
            }
            for r in 0..n {
                let tmp = h[(r, i)].clone();
                h[(r, i)] = h[(r, col + 1)].clone();
                h[(r, col + 1)] = tmp;
            }
        }
        let inv = h[(col + 1, col)].inv().expect("pivot");
        for r in col + 2..n {
            let u = &h[(r, col)] * &inv;
            if u.is_zero() {
                continue;
            }
            let neg = -&u;
            for j in 0..n {
                let v = h[(col + 1, j)].clone();
                fma(&mut h[(r, j)], &neg, &v);
            }
            for rr in 0..n {
                let v = h[(rr, r)].clone();
                fma(&mut h[(rr, col + 1)], &u, &v);
            }
        }
    }
    // p_k is the charpoly of the leading k x k block.
    let mut ps: Vec<Poly> = vec![Poly::one(field)];
    for k in 1..=n {
        let diag = Poly::linear(field, &h[(k - 1, k - 1)]);
        let mut pk = diag.mul(&ps[k - 1]);
        let mut prod = field.one();
        for i in 1..k {
            prod = &prod * &h[(k - i, k - i - 1)];
            let c = &prod * &h[(k - i - 1, k - 1)];
            if !c.is_zero() {
                pk = pk.sub(&ps[k - i - 1].scale(&c));
            }
        }
        ps.push(pk);
    }
    ps.pop().unwrap()
}

/// Monic irreducible factors of the characteristic polynomial with algebraic multiplicities.
pub fn charpoly_irreducible_factors(m: &Matrix) -> Vec<(Poly, usize)> {
    factor(&charpoly(m))
}

/// Generalised eigenspaces `ker f(M)^m` for each irreducible factor `f^m` of the characteristic
/// polynomial, in the order returned by [`charpoly_irreducible_factors`].
pub fn primary_decomposition(m: &Matrix) -> Result<Vec<(Poly, Subspace)>> {
    if !m.is_square() {
        return Err(Error::Dimension("primary decomposition needs a square matrix".into()));
    }
    let mut out = Vec::new();
    let mut total = 0;
    for (f, mult) in charpoly_irreducible_factors(m) {
        let fm = f.eval_matrix(m).pow(mult as u64);
        let block = kernel_basis(&fm);
        if block.dim() != f.deg() * mult {
            return Err(Error::Singular("generalised eigenspace has unexpected dimension".into()));
        }
        total += block.dim();
        out.push((f, block));
    }
    debug_assert_eq!(total, m.rows());
    Ok(out)
}

/// Whether `M` is diagonalisable over the algebraic closure (minimal polynomial square-free).
pub fn is_semisimple(m: &Matrix) -> bool {
    let field = m.field();
    let radical = charpoly_irreducible_factors(m)
        .into_iter()
        .fold(Poly::one(field), |acc, (f, _)| acc.mul(&f));
    radical.eval_matrix(m).is_zero()
}

/// Eigenvalues lying in the base field, with algebraic multiplicity.
pub fn rational_eigenvalues(m: &Matrix) -> Vec<(Scalar, usize)> {
    charpoly_irreducible_factors(m)
        .into_iter()
        .filter(|(f, _)| f.deg() == 1)
        .map(|(f, k)| (-&f.coeff(0), k))
        .collect()
}
