//! Artinian local test rings `k[x_1..x_r]/I` with `m^N ⊆ I ⊆ m^2`.
//!
//! Elements are coefficient vectors in a basis adapted to the `m`-adic filtration:
//! `e_0 = 1`, then a basis of `m/m^2`, then `m^2/m^3`, and so on. Each basis vector is
//! the class of a monomial. Dropping trailing coordinates is a quotient by an ideal,
//! which is how small-extension towers are realised.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::{Field, Matrix, Scalar};
use crate::mpoly::{MPoly, Mono};

pub const MAX_RING_DIM: usize = 4096;

/// Coefficients of a ring element in the adapted basis.
pub type RVec = Vec<Scalar>;

#[derive(Debug)]
struct RingData {
    field: Field,
    names: Vec<String>,
    weights: Option<Vec<i64>>,
    nilpotency: u32,
    labels: Vec<Mono>,
    /// `m`-adic degree of each basis vector.
    degrees: Vec<u32>,
    /// `table[i * dim + j]` lists `(k, c)` with `e_i e_j = sum c e_k`.
    table: Vec<Vec<(usize, Scalar)>>,
    dim: usize,
}

/// A finite-dimensional local algebra with residue field `k`.
#[derive(Clone, Debug)]
pub struct TestRing(Arc<RingData>);

impl PartialEq for TestRing {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.field == other.0.field
                && self.0.dim == other.0.dim
                && self.0.labels == other.0.labels
                && self.0.table == other.0.table)
    }
}

impl Eq for TestRing {}

/// A surjection `source -> target` whose kernel is spanned by basis vector `kernel`.
#[derive(Clone, Debug)]
pub struct SmallExtension {
    pub source: TestRing,
    pub target: TestRing,
    pub kernel: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingElement {
    ring: TestRing,
    coeffs: RVec,
}

fn reduce_row(row: &mut [Scalar], basis: &[(usize, Vec<Scalar>)]) {
    for (piv, r) in basis {
        if row[*piv].is_zero() {
            continue;
        }
        let c = -&row[*piv];
        for (x, y) in row.iter_mut().zip(r) {
            if !y.is_zero() {
                crate::linalg::scalar::fma(x, &c, y);
            }
        }
    }
}

/// Incremental row-echelon basis, reduced, pivots chosen at the first nonzero entry.
struct Echelon {
    rows: Vec<(usize, Vec<Scalar>)>,
}

impl Echelon {
    fn new() -> Echelon {
        Echelon { rows: Vec::new() }
    }

    fn reduce(&self, v: &mut [Scalar]) {
        reduce_row(v, &self.rows);
    }

    /// Inserts `v` if independent; returns whether it was.
    fn insert(&mut self, mut v: Vec<Scalar>) -> bool {
        self.reduce(&mut v);
        let Some(piv) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = v[piv].inv().unwrap();
        for x in v.iter_mut() {
            *x *= &inv;
        }
        for (_, r) in self.rows.iter_mut() {
            if !r[piv].is_zero() {
                let c = -&r[piv];
                for (x, y) in r.iter_mut().zip(&v) {
                    if !y.is_zero() {
                        crate::linalg::scalar::fma(x, &c, y);
                    }
                }
            }
        }
        self.rows.push((piv, v));
        true
    }
}

impl TestRing {
    /// `k[x]/(relations) + m^N`.
    pub fn new(
        field: Field,
        names: &[String],
        relations: &[MPoly],
        truncation: u32,
        weights: Option<Vec<i64>>,
    ) -> Result<TestRing> {
        if truncation < 2 {
            return Err(Error::Ring(format!("truncation order {truncation} < 2")));
        }
        let n = names.len();
        if let Some(w) = &weights {
            if w.len() != n {
                return Err(Error::Schema("one weight per ring variable required".into()));
            }
        }
        for r in relations {
            if r.nvars() != n {
                return Err(Error::Schema("relation has the wrong number of variables".into()));
            }
            if r.min_degree().is_some_and(|d| d < 2) {
                return Err(Error::Ring("relations must lie in m^2".into()));
            }
        }
        let monos = Mono::all_below(n, truncation);
        if monos.len() > 64 * MAX_RING_DIM {
            return Err(Error::Ring("truncated polynomial space too large".into()));
        }
        // Columns ordered descending so that pivots land on the largest monomials.
        let ncols = monos.len();
        let col_of = |m: &Mono| ncols - 1 - monos.binary_search(m).unwrap();
        let mut ideal = Echelon::new();
        for r in relations {
            for m in &monos {
                if m.degree() + 2 >= truncation {
                    continue;
                }
                let mut row = vec![field.zero(); ncols];
                let mut any = false;
                for (t, c) in r.terms() {
                    let prod = t.mul(m);
                    if prod.degree() < truncation {
                        row[col_of(&prod)] = c.clone();
                        any = true;
                    }
                }
                if any {
                    ideal.insert(row);
                }
            }
        }
        let pivots: std::collections::BTreeSet<usize> = ideal.rows.iter().map(|(p, _)| *p).collect();
        let standard: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
        let sdim = standard.len();
        if sdim > MAX_RING_DIM {
            return Err(Error::Ring(format!("ring dimension {sdim} exceeds {MAX_RING_DIM}")));
        }
        let nf = |poly_row: &mut Vec<Scalar>| -> Vec<Scalar> {
            ideal.reduce(poly_row);
            standard.iter().map(|&c| poly_row[c].clone()).collect()
        };
        let mono_nf = |m: &Mono| -> Vec<Scalar> {
            let mut row = vec![field.zero(); ncols];
            row[col_of(m)] = field.one();
            let mut r = row;
            nf(&mut r)
        };
        // Adapted basis: deepest filtration level first, then extend upward.
        let mut chosen: Vec<(u32, Mono, Vec<Scalar>)> = Vec::new();
        let mut span = Echelon::new();
        for d in (0..truncation).rev() {
            let mut level: Vec<(u32, Mono, Vec<Scalar>)> = Vec::new();
            for m in Mono::of_degree(n, d) {
                let v = mono_nf(&m);
                if span.insert(v.clone()) {
                    level.push((d, m, v));
                }
            }
            level.reverse();
            chosen.extend(level);
        }
        chosen.reverse();
        let dim = chosen.len();
        debug_assert_eq!(dim, sdim);
        let p = Matrix::from_columns(field, sdim, &chosen.iter().map(|c| c.2.clone()).collect::<Vec<_>>());
        let pinv = p.inverse().ok_or_else(|| Error::Ring("adapted basis is singular".into()))?;
        let labels: Vec<Mono> = chosen.iter().map(|c| c.1.clone()).collect();
        let degrees: Vec<u32> = chosen.iter().map(|c| c.0).collect();
        let mut table = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                let prod = labels[i].mul(&labels[j]);
                let coords = if prod.degree() >= truncation {
                    vec![field.zero(); dim]
                } else {
                    pinv.mul_vec(&mono_nf(&prod))
                };
                table.push(
                    coords
                        .into_iter()
                        .enumerate()
                        .filter(|(_, c)| !c.is_zero())
                        .collect(),
                );
            }
        }
        let ring = TestRing(Arc::new(RingData {
            field,
            names: names.to_vec(),
            weights,
            nilpotency: truncation,
            labels,
            degrees,
            table,
            dim,
        }));
        Ok(ring)
    }

    /// `k[t]/t^n`.
    pub fn truncated_polynomial(field: Field, n: u32) -> Result<TestRing> {
        TestRing::new(field, &["t".to_string()], &[], n, None)
    }

    /// Dual numbers `k[eps]/eps^2`.
    pub fn dual_numbers(field: Field) -> TestRing {
        TestRing::new(field, &["eps".to_string()], &[], 2, None).expect("dual numbers")
    }

    /// The residue field viewed as a test ring.
    pub fn residue(field: Field) -> TestRing {
        TestRing::dual_numbers(field).truncate(1)
    }

    pub fn field(&self) -> Field {
        self.0.field
    }

    pub fn dim(&self) -> usize {
        self.0.dim
    }

    pub fn names(&self) -> &[String] {
        &self.0.names
    }

    /// A bound `N` with `m^N = 0`.
    pub fn nilpotency(&self) -> u32 {
        self.0.nilpotency
    }

    /// Smallest `N` with `m^N = 0`, read off the adapted basis.
    pub fn exact_nilpotency(&self) -> u32 {
        self.0.degrees.iter().max().copied().unwrap_or(0) + 1
    }

    pub fn label(&self, i: usize) -> &Mono {
        &self.0.labels[i]
    }

    pub fn degree_of(&self, i: usize) -> u32 {
        self.0.degrees[i]
    }

    pub fn weight_of(&self, i: usize) -> Option<i64> {
        self.0.weights.as_ref().map(|w| self.0.labels[i].weight(w))
    }

    pub fn weights(&self) -> Option<&[i64]> {
        self.0.weights.as_deref()
    }

    pub fn order(&self) -> Option<u128> {
        let q = self.field().order()? as u128;
        q.checked_pow(self.dim() as u32)
    }

    /// Quotient keeping the first `len` basis vectors.
    pub fn truncate(&self, len: usize) -> TestRing {
        assert!(len >= 1 && len <= self.dim());
        if len == self.dim() {
            return self.clone();
        }
        let d = self.dim();
        let mut table = Vec::with_capacity(len * len);
        for i in 0..len {
            for j in 0..len {
                table.push(
                    self.0.table[i * d + j].iter().filter(|(k, _)| *k < len).cloned().collect(),
                );
            }
        }
        let max_deg = self.0.degrees[..len].iter().max().copied().unwrap_or(0);
        TestRing(Arc::new(RingData {
            field: self.0.field,
            names: self.0.names.clone(),
            weights: self.0.weights.clone(),
            nilpotency: (max_deg + 1).max(1),
            labels: self.0.labels[..len].to_vec(),
            degrees: self.0.degrees[..len].to_vec(),
            table,
            dim: len,
        }))
    }

    /// Chain `k = A_0 <- A_1 <- ... <- A_M = self` with one-dimensional kernels.
    pub fn small_extension_tower(&self) -> Vec<SmallExtension> {
        let levels = self.levels();
        (1..levels.len())
            .map(|s| SmallExtension { source: levels[s].clone(), target: levels[s - 1].clone(), kernel: s })
            .collect()
    }

    /// `[A_0, ..., A_M]`, where `A_s` keeps coordinates `0..=s`.
    pub fn levels(&self) -> Vec<TestRing> {
        (1..=self.dim()).map(|len| self.truncate(len)).collect()
    }

    pub fn zero(&self) -> RVec {
        vec![self.field().zero(); self.dim()]
    }

    pub fn one(&self) -> RVec {
        let mut v = self.zero();
        v[0] = self.field().one();
        v
    }

    pub fn basis_vector(&self, i: usize) -> RVec {
        let mut v = self.zero();
        v[i] = self.field().one();
        v
    }

    pub fn scalar(&self, c: &Scalar) -> RVec {
        let mut v = self.zero();
        v[0] = c.clone();
        v
    }

    pub fn mul(&self, a: &[Scalar], b: &[Scalar]) -> RVec {
        let d = self.dim();
        let mut out = self.zero();
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                let xy = x * y;
                for (k, c) in &self.0.table[i * d + j] {
                    crate::linalg::scalar::fma(&mut out[*k], &xy, c);
                }
            }
        }
        out
    }

    /// `acc += a * b`.
    pub fn mul_add(&self, acc: &mut [Scalar], a: &[Scalar], b: &[Scalar]) {
        let d = self.dim();
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                let xy = x * y;
                for (k, c) in &self.0.table[i * d + j] {
                    crate::linalg::scalar::fma(&mut acc[*k], &xy, c);
                }
            }
        }
    }

    pub fn is_in_maximal_ideal(&self, a: &[Scalar]) -> bool {
        a[0].is_zero()
    }

    /// Inverse of a unit, by the geometric series in the nilpotent part.
    pub fn inv(&self, a: &[Scalar]) -> Option<RVec> {
        let c = a[0].inv()?;
        let mut n = a.to_vec();
        n[0] = self.field().zero();
        let nn: RVec = n.iter().map(|x| -&(x * &c)).collect();
        // (c0 (1 + c0^-1 n))^-1 = c0^-1 sum (-c0^-1 n)^i
        let mut acc = self.one();
        let mut pow = self.one();
        for _ in 1..self.exact_nilpotency() {
            pow = self.mul(&pow, &nn);
            acc = add(&acc, &pow);
        }
        Some(scale(&acc, &c))
    }

    pub fn element(&self, coeffs: RVec) -> Result<RingElement> {
        if coeffs.len() != self.dim() {
            return Err(Error::Dimension("ring element has wrong length".into()));
        }
        Ok(RingElement { ring: self.clone(), coeffs })
    }

    /// Class of a polynomial in the ring variables.
    pub fn from_poly(&self, p: &MPoly) -> Result<RVec> {
        let vars: Vec<RVec> = (0..self.names().len()).map(|i| self.variable(i)).collect();
        Ok(p.eval_with(&vars, |c| self.scalar(c), |x, y| self.mul(x, y), |x, y| add(x, y), &self.zero()))
    }

    /// Class of the `i`-th ring variable.
    pub fn variable(&self, i: usize) -> RVec {
        let target = Mono::var(self.names().len(), i);
        // Relations lie in m^2, so every variable survives as a basis monomial unless truncated away.
        match self.0.labels.iter().position(|l| *l == target) {
            Some(k) => self.basis_vector(k),
            None => self.zero(),
        }
    }

    /// All elements of `m_A` over a finite field, in lexicographic order of coefficients.
    pub fn maximal_ideal_elements(&self) -> Result<Vec<RVec>> {
        let field = self.field();
        let q = field.order().ok_or_else(|| Error::Precondition("enumeration needs a finite field".into()))?;
        let n = self.dim() - 1;
        let total = (q as u128).checked_pow(n as u32).filter(|t| *t <= 1 << 24).ok_or_else(|| {
            Error::Budget { needed: format!("{q}^{n}"), budget: 1 << 24 }
        })?;
        let mut out = Vec::with_capacity(total as usize);
        for idx in 0..total {
            let mut v = self.zero();
            let mut r = idx;
            for k in (1..=n).rev() {
                v[k] = field.element((r % q as u128) as u64);
                r /= q as u128;
            }
            out.push(v);
        }
        Ok(out)
    }

    pub fn render(&self, a: &[Scalar]) -> String {
        let mut parts = Vec::new();
        for (i, c) in a.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let m = self.0.labels[i].render(&self.0.names);
            parts.push(match (m.as_str(), c.is_one()) {
                ("1", _) => c.to_string(),
                (_, true) => m,
                _ => format!("{c}*{m}"),
            });
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

impl fmt::Display for TestRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}] (dim {})", self.field(), self.names().join(","), self.dim())
    }
}

impl RingElement {
    pub fn ring(&self) -> &TestRing {
        &self.ring
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn multiply(&self, other: &RingElement) -> Result<RingElement> {
        ring_multiply(self, other)
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.ring.render(&self.coeffs))
    }
}

/// Builds `k[x]/(relations) + m^N`.
pub fn make_test_ring(
    field: Field,
    variables: &[String],
    relations: &[MPoly],
    truncation: u32,
    weights: Option<Vec<i64>>,
) -> Result<TestRing> {
    TestRing::new(field, variables, relations, truncation, weights)
}

pub fn small_extension_tower(r: &TestRing) -> Vec<SmallExtension> {
    r.small_extension_tower()
}

pub fn ring_multiply(a: &RingElement, b: &RingElement) -> Result<RingElement> {
    if a.ring != b.ring {
        return Err(Error::Ring("elements belong to different rings".into()));
    }
    Ok(RingElement { ring: a.ring.clone(), coeffs: a.ring.mul(&a.coeffs, &b.coeffs) })
}

pub fn add(a: &[Scalar], b: &[Scalar]) -> RVec {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[Scalar], b: &[Scalar]) -> RVec {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn neg(a: &[Scalar]) -> RVec {
    a.iter().map(|x| -x).collect()
}

pub fn scale(a: &[Scalar], c: &Scalar) -> RVec {
    a.iter().map(|x| x * c).collect()
}

pub fn is_zero(a: &[Scalar]) -> bool {
    a.iter().all(Scalar::is_zero)
}

/// Pads or truncates coefficients to length `len` (a set-theoretic lift or a quotient).
pub fn resize(a: &[Scalar], len: usize, field: Field) -> RVec {
    let mut v: RVec = a.iter().take(len).cloned().collect();
    v.resize(len, field.zero());
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn ring_examples() {
        let q = Field::Rational;
        let dual = TestRing::dual_numbers(q);
        assert_eq!(dual.dim(), 2);
        let t = dual.basis_vector(1);
        assert!(is_zero(&dual.mul(&t, &t)));

        let f3 = Field::Prime(3);
        let r = TestRing::truncated_polynomial(f3, 3).unwrap();
        assert_eq!(r.dim(), 3);
        let t = r.basis_vector(1);
        let a = add(&r.one(), &t);
        let b = sub(&r.one(), &t);
        let expected = sub(&r.one(), &r.basis_vector(2));
        assert_eq!(r.mul(&a, &b), expected);

        let f2 = Field::Prime(2);
        let xy = TestRing::new(f2, &names(&["x", "y"]), &[], 2, None).unwrap();
        assert_eq!(xy.dim(), 3);
        assert!(is_zero(&xy.mul(&xy.variable(0), &xy.variable(1))));
    }

    #[test]
    fn ring_errors() {
        let q = Field::Rational;
        assert!(TestRing::new(q, &names(&["t"]), &[], 1, None).is_err());
        let lin = MPoly::parse(q, &names(&["t"]), "t").unwrap();
        assert!(TestRing::new(q, &names(&["t"]), &[lin], 3, None).is_err());
    }

    #[test]
    fn relations_reduce_dimension() {
        let q = Field::Rational;
        let n = names(&["x", "y"]);
        let rels = vec![
            MPoly::parse(q, &n, "x^2 - y^2").unwrap(),
            MPoly::parse(q, &n, "x*y").unwrap(),
        ];
        let r = TestRing::new(q, &n, &rels, 4, None).unwrap();
        // basis 1, x, y, x^2 (= y^2); cubes vanish
        assert_eq!(r.dim(), 4);
        let x = r.variable(0);
        let y = r.variable(1);
        assert_eq!(r.mul(&x, &x), r.mul(&y, &y));
        assert!(is_zero(&r.mul(&r.mul(&x, &x), &x)));
    }

    #[test]
    fn towers() {
        let f3 = Field::Prime(3);
        let r = TestRing::truncated_polynomial(f3, 3).unwrap();
        let tower = r.small_extension_tower();
        assert_eq!(tower.len(), 2);
        assert_eq!(tower[0].source.dim(), 2);
        assert_eq!(tower[1].kernel, 2);
        let f2 = Field::Prime(2);
        let xy = TestRing::new(f2, &names(&["x", "y"]), &[], 2, None).unwrap();
        assert_eq!(xy.small_extension_tower().len(), 2);
    }

    #[test]
    fn inverse_of_unit() {
        let f5 = Field::Prime(5);
        let r = TestRing::truncated_polynomial(f5, 4).unwrap();
        let a = vec![f5.from_i64(2), f5.from_i64(1), f5.from_i64(3), f5.from_i64(4)];
        let ai = r.inv(&a).unwrap();
        assert_eq!(r.mul(&a, &ai), r.one());
    }
}
