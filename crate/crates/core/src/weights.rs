//! Frobenius actions on cochains, weights of their cohomology actions, weight-graded hulls and
//! the degree bounds weights impose on relations.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::artin::TestRing;
use crate::complexes::CohomologyData;
use crate::dgla::Dgla;
use crate::error::{Error, Result};
use crate::hull::{build_hull, kuranishi_splittings, HullPresentation};
use crate::linalg::roots::all_roots_in;
use crate::linalg::{charpoly, primary_decomposition, Field, Matrix, Poly, Scalar, Subspace};

/// Cochain automorphisms `Φ⁰..Φ³` commuting with `d` and the bracket, with scale `q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrobeniusAction {
    phi: Vec<Matrix>,
    q: u64,
}

impl FrobeniusAction {
    pub fn new(d: &Dgla, phi: Vec<Matrix>, q: u64) -> Result<FrobeniusAction> {
        if phi.len() != 4 {
            return Err(Error::Schema("Frobenius action needs matrices in degrees 0..3".into()));
        }
        for (n, m) in phi.iter().enumerate() {
            if m.rows() != d.dim(n) || m.cols() != d.dim(n) {
                return Err(Error::Dimension(format!("Frobenius matrix in degree {n} has the wrong size")));
            }
            if m.inverse().is_none() {
                return Err(Error::Singular(format!("Frobenius matrix in degree {n}")));
            }
        }
        for n in 0..3 {
            let dn = d.differential(n);
            if phi[n + 1].mul(&dn) != dn.mul(&phi[n]) {
                return Err(Error::Precondition(format!("Φ does not commute with d in degree {n}")));
            }
        }
        let k = TestRing::residue(d.field());
        let wrap = |v: Vec<Scalar>| -> Vec<Vec<Scalar>> { v.into_iter().map(|c| vec![c]).collect() };
        let unwrap = |v: Vec<Vec<Scalar>>| -> Vec<Scalar> { v.into_iter().map(|c| c[0].clone()).collect() };
        for p in 0..=3 {
            for q in p..=3 - p {
                for a in 0..d.dim(p) {
                    let pa = wrap(phi[p].column(a));
                    for b in 0..d.dim(q) {
                        let lhs = phi[p + q].mul_vec(&d.bracket_basis(p, a, q, b));
                        let rhs = unwrap(d.bracket(&k, p, &pa, q, &wrap(phi[q].column(b))));
                        if lhs != rhs {
                            return Err(Error::Precondition(format!("Φ does not respect the bracket in degrees ({p}, {q})")));
                        }
                    }
                }
            }
        }
        for a in 0..d.dim(1) {
            let lhs = phi[2].mul_vec(&d.square_basis(a));
            let rhs = unwrap(d.half_square(&k, &wrap(phi[1].column(a))));
            if lhs != rhs {
                return Err(Error::Precondition("Φ does not respect the squares".into()));
            }
        }
        if q < 2 {
            return Err(Error::Precondition(format!("scale q = {q} < 2")));
        }
        Ok(FrobeniusAction { phi, q })
    }

    pub fn identity(d: &Dgla, q: u64) -> Result<FrobeniusAction> {
        FrobeniusAction::new(d, (0..4).map(|n| Matrix::identity(d.field(), d.dim(n))).collect(), q)
    }

    pub fn degree(&self, n: usize) -> &Matrix {
        &self.phi[n]
    }

    pub fn matrices(&self) -> &[Matrix] {
        &self.phi
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// `g Φ g⁻¹` for a cochain automorphism `g` of `D`.
    pub fn conjugate(&self, d: &Dgla, g: &[Matrix]) -> Result<FrobeniusAction> {
        let mut phi = Vec::with_capacity(4);
        for (n, gn) in g.iter().enumerate() {
            let inv = gn.inverse().ok_or_else(|| Error::Singular("conjugating automorphism".into()))?;
            phi.push(gn.mul(&self.phi[n]).mul(&inv));
        }
        FrobeniusAction::new(d, phi, self.q)
    }
}

/// The action of `Φ` on `H^i` in the representative basis of `h`.
pub fn induced_action(phi: &FrobeniusAction, h: &CohomologyData) -> Result<Matrix> {
    let m = phi.degree(h.degree);
    let mut cols = Vec::with_capacity(h.dim());
    for rep in &h.representatives {
        let image = m.mul_vec(rep);
        if !h.is_cocycle(&image) {
            return Err(Error::Precondition("Φ does not preserve cocycles".into()));
        }
        cols.push(h.project(&image));
    }
    Ok(Matrix::from_columns(h.field(), h.dim(), &cols))
}

/// `H^i = ⊕_n W_n`, one subspace per weight, in increasing weight.
#[derive(Clone, Debug)]
pub struct WeightDecomposition {
    pub pieces: Vec<(i64, Subspace)>,
    /// Irreducible factors of the characteristic polynomial with their weights.
    pub factors: Vec<(Poly, i64)>,
}

impl WeightDecomposition {
    pub fn weights(&self) -> Vec<i64> {
        self.pieces.iter().map(|(w, _)| *w).collect()
    }

    /// Weight of each vector of [`Self::adapted_basis`].
    pub fn basis_weights(&self) -> Vec<i64> {
        self.pieces.iter().flat_map(|(w, s)| std::iter::repeat_n(*w, s.dim())).collect()
    }

    /// Columns spanning the pieces in order.
    pub fn adapted_basis(&self, field: Field, dim: usize) -> Matrix {
        let cols: Vec<Vec<Scalar>> = self.pieces.iter().flat_map(|(_, s)| s.basis().iter().cloned()).collect();
        Matrix::from_columns(field, dim, &cols)
    }
}

fn rational(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn q_power(q: u64, w: i64) -> BigRational {
    let base = rational(q as i64);
    let p = num_traits::pow(base, w.unsigned_abs() as usize);
    if w >= 0 {
        p
    } else {
        p.recip()
    }
}

fn estimate(det: &BigRational, n: usize, q: u64) -> f64 {
    let v = det.abs().to_f64().unwrap_or(f64::NAN);
    2.0 * v.ln() / (n as f64 * (q as f64).ln())
}

/// Weight `w` of a monic irreducible `f` over ℚ: every complex root has `|λ|² = q^w`.
///
/// The candidate comes from `|det|^{2/deg}`; uniformity is decided exactly: the roots of
/// `charpoly((C + cC⁻¹)²)` are `(λ + c/λ)²`, all in `[0, 4c]` iff every `λ` lies on `|z|² = c`.
pub fn weight_of_factor(f: &Poly, q: u64) -> Result<i64> {
    if f.field() != Field::Rational {
        return Err(Error::Precondition("weights are computed over the rationals".into()));
    }
    let n = f.deg();
    let c0 = f.coeff(0).to_rational();
    if c0.is_zero() {
        return Err(Error::NotMixed("zero eigenvalue has no weight".into()));
    }
    let det_sq = &c0 * &c0;
    let base = q_power(q, n as i64);
    let mut w = 0i64;
    let mut v = det_sq.clone();
    while v > BigRational::one() && w < 4096 {
        v /= &base;
        w += 1;
    }
    while v < BigRational::one() && w > -4096 {
        v *= &base;
        w -= 1;
    }
    if !v.is_one() {
        return Err(Error::NotMixed(format!(
            "factor {f}: 2·log_q|root| ≈ {:.4} is not an integer",
            estimate(&c0, n, q)
        )));
    }
    let c = q_power(q, w);
    let cs = Scalar::Q(Box::new(c.clone()));
    let comp = f.companion();
    let inv = comp.inverse().expect("nonzero constant term");
    let s = comp.add(&inv.scale(&cs));
    let sq = s.mul(&s);
    let four_c = &c * rational(4);
    if !all_roots_in(&charpoly(&sq), &BigRational::zero(), &four_c) {
        return Err(Error::NotMixed(format!("factor {f}: roots do not share one magnitude")));
    }
    Ok(w)
}

/// Groups the primary blocks of `m` by weight.
pub fn weight_decomposition(m: &Matrix, q: u64) -> Result<WeightDecomposition> {
    if q < 2 {
        return Err(Error::Precondition(format!("scale q = {q} < 2")));
    }
    let field = m.field();
    let mut by_weight: BTreeMap<i64, Subspace> = BTreeMap::new();
    let mut factors = Vec::new();
    for (f, block) in primary_decomposition(m)? {
        let w = weight_of_factor(&f, q)?;
        factors.push((f, w));
        let entry = by_weight.entry(w).or_insert_with(|| Subspace::zero(field, m.rows()));
        *entry = entry.sum(&block);
    }
    Ok(WeightDecomposition { pieces: by_weight.into_iter().collect(), factors })
}

/// A hull built from `Φ`-stable splittings, with variables and relations tagged by the dual
/// weights `-n` of their cohomology pieces.
pub fn equivariant_hull(d: &Dgla, phi: &FrobeniusAction, order: u32) -> Result<HullPresentation> {
    let mut s = kuranishi_splittings(d, Some(phi.matrices()))?;
    let field = d.field();
    let w1 = weight_decomposition(&induced_action(phi, &s.h1)?, phi.q())?;
    let w2 = weight_decomposition(&induced_action(phi, &s.h2)?, phi.q())?;
    s.h1 = s.h1.rebase(&w1.adapted_basis(field, s.h1.dim()))?;
    s.h2 = s.h2.rebase(&w2.adapted_basis(field, s.h2.dim()))?;
    let mut hp = build_hull(d, order, Some(&s))?;
    let var_weights: Vec<i64> = w1.basis_weights().iter().map(|w| -w).collect();
    let rel_weights: Vec<i64> = w2.basis_weights().iter().map(|w| -w).collect();
    for (j, f) in hp.relations.iter().enumerate() {
        for (m, _) in f.terms() {
            if m.weight(&var_weights) != rel_weights[j] {
                return Err(Error::Mismatch(format!("relation {j} is not weight-homogeneous")));
            }
        }
    }
    hp.weights = Some(var_weights);
    hp.relation_weights = Some(rel_weights);
    Ok(hp)
}

/// Whether `f(A₁x) = A₂ f(x)` for the actions induced on `H¹` and `H²` by `Φ`.
pub fn f_equivariant(hp: &HullPresentation, phi: &FrobeniusAction) -> Result<bool> {
    let a1 = induced_action(phi, &hp.splittings.h1)?;
    let a2 = induced_action(phi, &hp.splittings.h2)?;
    let n = hp.nvars();
    for (j, f) in hp.relations.iter().enumerate() {
        let lhs = f.linear_substitute(&a1).truncate(hp.truncation);
        let mut rhs = crate::mpoly::MPoly::zero(hp.field, n);
        for (k, g) in hp.relations.iter().enumerate() {
            rhs = rhs.add(&g.scale(&a2[(j, k)]));
        }
        if lhs != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Bound on the degree of relations allowed by the weights.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum DegreeBound {
    Bounded(usize),
    NoBound,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeCertificate {
    pub bound: DegreeBound,
    /// Weights of `H²` that are no sum of two or more `H¹` weights: such relations vanish to
    /// all orders the weights allow, or are zero.
    pub unreachable: Vec<i64>,
}

/// Sizes up to which mixed-sign or zero weight sets are searched.
const SEARCH_CAP: usize = 64;

fn reachable_sizes(h1: &[i64], target: i64, max_size: usize) -> Vec<bool> {
    // sums are bounded by max_size * max|h1| in absolute value
    let span = h1.iter().map(|w| w.abs()).max().unwrap_or(0) * max_size as i64;
    let width = (2 * span + 1) as usize;
    let mut cur = vec![false; width];
    cur[span as usize] = true;
    let mut out = vec![false; max_size + 1];
    for s in 1..=max_size {
        let mut next = vec![false; width];
        for (i, &on) in cur.iter().enumerate() {
            if !on {
                continue;
            }
            for &w in h1 {
                let j = i as i64 + w;
                if j >= 0 && (j as usize) < width {
                    next[j as usize] = true;
                }
            }
        }
        let t = target + span;
        out[s] = t >= 0 && (t as usize) < width && next[t as usize];
        cur = next;
    }
    out
}

/// Largest number of `H¹` weights (at least two) summing to an `H²` weight.
pub fn degree_bound_certificate(weights_h1: &[i64], weights_h2: &[i64]) -> DegreeCertificate {
    let mut h1: Vec<i64> = weights_h1.to_vec();
    h1.sort_unstable();
    h1.dedup();
    let positive = h1.iter().all(|w| *w > 0);
    let negative = h1.iter().all(|w| *w < 0);
    let mut bound = DegreeBound::Bounded(0);
    let mut unreachable = Vec::new();
    for &w in weights_h2 {
        let best = if h1.is_empty() {
            None
        } else if positive || negative {
            let least = h1.iter().map(|x| x.abs()).min().unwrap();
            let max_size = (w.unsigned_abs() / least as u64) as usize;
            let sizes = if (positive && w > 0) || (negative && w < 0) { reachable_sizes(&h1, w, max_size) } else { vec![] };
            sizes.iter().enumerate().skip(2).filter(|(_, r)| **r).map(|(s, _)| s).max().map(DegreeBound::Bounded)
        } else {
            let sizes = reachable_sizes(&h1, w, SEARCH_CAP);
            sizes.iter().skip(2).any(|r| *r).then_some(DegreeBound::NoBound)
        };
        match best {
            Some(b) => bound = bound.max(b),
            None => unreachable.push(w),
        }
    }
    DegreeCertificate { bound, unreachable }
}
