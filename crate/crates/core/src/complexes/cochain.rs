use crate::amat::AMat;
use crate::artin::{self, RVec, TestRing};
use crate::error::{Error, Result};
use crate::linalg::{Matrix, Scalar};

use super::delta::DeltaComplex;
use super::local_system::LocalSystem;

/// A cochain with values in the fibre of a local system, over a test ring.
///
/// `values[s][i]` is the `i`-th fibre coordinate on the `degree`-cell `s`, read at the
/// initial vertex of `s`. For `End(V)`-valued cochains the fibre is `r^2`-dimensional
/// in the column-major matrix-unit layout.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cochain {
    pub degree: usize,
    pub values: Vec<Vec<RVec>>,
}

impl Cochain {
    pub fn zero(x: &DeltaComplex, fibre: usize, ring: &TestRing, degree: usize) -> Cochain {
        Cochain { degree, values: vec![vec![ring.zero(); fibre]; x.count(degree)] }
    }

    /// Cochain over `ring` from a coordinate vector over `k` (`cell * fibre + i`), times `coeff`.
    pub fn from_vector(
        x: &DeltaComplex,
        fibre: usize,
        ring: &TestRing,
        degree: usize,
        v: &[Scalar],
        coeff: &RVec,
    ) -> Cochain {
        let mut c = Cochain::zero(x, fibre, ring, degree);
        for (s, vals) in c.values.iter_mut().enumerate() {
            for (i, slot) in vals.iter_mut().enumerate() {
                let k = &v[s * fibre + i];
                if !k.is_zero() {
                    *slot = artin::scale(coeff, k);
                }
            }
        }
        c
    }

    /// Coordinates over `k` (cochain over the residue field or the coefficient of one basis vector).
    pub fn coefficient_vector(&self, k: usize) -> Vec<Scalar> {
        self.values.iter().flat_map(|vals| vals.iter().map(move |a| a[k].clone())).collect()
    }

    pub fn add(&self, other: &Cochain) -> Cochain {
        Cochain {
            degree: self.degree,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a.iter().zip(b).map(|(x, y)| artin::add(x, y)).collect())
                .collect(),
        }
    }

    pub fn sub(&self, other: &Cochain) -> Cochain {
        Cochain {
            degree: self.degree,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a.iter().zip(b).map(|(x, y)| artin::sub(x, y)).collect())
                .collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> Cochain {
        Cochain {
            degree: self.degree,
            values: self.values.iter().map(|a| a.iter().map(|x| artin::scale(x, c)).collect()).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().flatten().all(|v| artin::is_zero(v))
    }

    pub fn matrix_at(&self, r: usize, s: usize) -> AMat {
        AMat::from_fibre(r, &self.values[s])
    }
}

fn apply_k(t: &Matrix, v: &[RVec]) -> Vec<RVec> {
    let len = v[0].len();
    let mut out = vec![vec![t.field().zero(); len]; t.rows()];
    for i in 0..t.rows() {
        for (j, vj) in v.iter().enumerate() {
            let c = &t[(i, j)];
            if c.is_zero() {
                continue;
            }
            for (o, x) in out[i].iter_mut().zip(vj) {
                crate::linalg::scalar::fma(o, c, x);
            }
        }
    }
    out
}

/// `(dc)(s) = T(s_01) c(d_0 s) + sum_{i>=1} (-1)^i c(d_i s)`.
pub fn differential(x: &DeltaComplex, sys: &LocalSystem, ring: &TestRing, c: &Cochain) -> Result<Cochain> {
    let n = c.degree;
    if n >= 3 {
        return Err(Error::Dimension("differential of a degree-3 cochain leaves the modelled range".into()));
    }
    let f = sys.rank();
    let mut out = Cochain::zero(x, f, ring, n + 1);
    for s in 0..x.count(n + 1) {
        let e01 = x.edge(n + 1, s, 0, 1);
        let mut acc = apply_k(sys.transport(e01), &c.values[x.face(n + 1, s, 0)]);
        for i in 1..=n + 1 {
            let src = &c.values[x.face(n + 1, s, i)];
            for (a, b) in acc.iter_mut().zip(src) {
                *a = if i % 2 == 0 { artin::add(a, b) } else { artin::sub(a, b) };
            }
        }
        out.values[s] = acc;
    }
    Ok(out)
}

/// Matrix of `d: C^n -> C^{n+1}` over `k`, coordinates `cell * fibre + i`.
pub fn differential_matrix(x: &DeltaComplex, sys: &LocalSystem, n: usize) -> Matrix {
    let field = sys.field();
    let f = sys.rank();
    let rows = f * x.count(n + 1);
    let cols = f * x.count(n);
    let mut m = Matrix::zeros(field, rows, cols);
    if n >= 3 {
        return m;
    }
    for s in 0..x.count(n + 1) {
        let t = sys.transport(x.edge(n + 1, s, 0, 1));
        let d0 = x.face(n + 1, s, 0);
        for i in 0..f {
            for j in 0..f {
                let v = t[(i, j)].clone();
                let cur = m[(s * f + i, d0 * f + j)].clone();
                m[(s * f + i, d0 * f + j)] = &cur + &v;
            }
        }
        for k in 1..=n + 1 {
            let dk = x.face(n + 1, s, k);
            for i in 0..f {
                let cur = m[(s * f + i, dk * f + i)].clone();
                let one = field.one();
                m[(s * f + i, dk * f + i)] = if k % 2 == 0 { &cur + &one } else { &cur - &one };
            }
        }
    }
    m
}

/// Alexander-Whitney cup product of `End(V)`-valued cochains:
/// `(a ⌣ b)(s) = a(front_p s) * Ad_{T(s_0p)}(b(back_q s))`.
pub fn cup(x: &DeltaComplex, base: &LocalSystem, ring: &TestRing, a: &Cochain, b: &Cochain) -> Result<Cochain> {
    let (p, q) = (a.degree, b.degree);
    let n = p + q;
    if n > 3 {
        return Err(Error::Dimension(format!("cup product into degree {n} > 3")));
    }
    let r = base.rank();
    let mut out = Cochain::zero(x, r * r, ring, n);
    for s in 0..x.count(n) {
        let fa = a.matrix_at(r, x.front(n, s, p));
        let mut bb = b.matrix_at(r, x.back(n, s, q));
        if p > 0 {
            let e = x.edge(n, s, 0, p);
            bb = bb.conj_k(base.transport(e), base.transport_inverse(e));
        }
        out.values[s] = fa.mul(ring, &bb).to_fibre();
    }
    Ok(out)
}

/// Graded commutator `[a, b] = a ⌣ b - (-1)^{pq} b ⌣ a`.
pub fn bracket(x: &DeltaComplex, base: &LocalSystem, ring: &TestRing, a: &Cochain, b: &Cochain) -> Result<Cochain> {
    let ab = cup(x, base, ring, a, b)?;
    let ba = cup(x, base, ring, b, a)?;
    Ok(if (a.degree * b.degree).is_multiple_of(2) { ab.sub(&ba) } else { ab.add(&ba) })
}

/// Alias matching the operation name used by callers.
pub fn cup_bracket(x: &DeltaComplex, base: &LocalSystem, ring: &TestRing, a: &Cochain, b: &Cochain) -> Result<Cochain> {
    bracket(x, base, ring, a, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::local_system::unit_index;
    use crate::linalg::Field;

    fn q() -> Field {
        Field::Rational
    }

    #[test]
    fn differential_examples() {
        let k = TestRing::residue(q());
        let t = DeltaComplex::torus(2);
        let triv = LocalSystem::trivial(&t, q(), 1);
        let v = Cochain::from_vector(&t, 1, &k, 0, &[q().from_i64(7)], &k.one());
        assert!(differential(&t, &triv, &k, &v).unwrap().is_zero());
        let c = DeltaComplex::circle();
        let two = LocalSystem::new(&c, q(), 1, vec![Matrix::from_i64(q(), &[&[2]])]).unwrap();
        let v = Cochain::from_vector(&c, 1, &k, 0, &[q().from_i64(5)], &k.one());
        let dv = differential(&c, &two, &k, &v).unwrap();
        assert_eq!(dv.values[0][0], vec![q().from_i64(5)]);
        assert!(differential(&t, &triv, &k, &Cochain::zero(&t, 1, &k, 3)).is_err());
    }

    #[test]
    fn rank_two_commutator_bracket_is_a_coboundary_plus_units() {
        let k = TestRing::residue(q());
        let t = DeltaComplex::torus(2);
        let l = LocalSystem::trivial(&t, q(), 2);
        let fibre = 4;
        let mut va = vec![q().zero(); 3 * fibre];
        va[unit_index(2, 0, 1)] = q().one(); // E12 on edge a
        let mut vb = vec![q().zero(); 3 * fibre];
        vb[fibre + unit_index(2, 1, 0)] = q().one(); // E21 on edge b
        let a = Cochain::from_vector(&t, fibre, &k, 1, &va, &k.one());
        let b = Cochain::from_vector(&t, fibre, &k, 1, &vb, &k.one());
        let br = bracket(&t, &l, &k, &a, &b).unwrap();
        // T1 = (a, b): a(E12) b(E21) = E11; T2 = (b, a): minus the reversed product gives E22.
        let t1 = br.matrix_at(2, 0).residue(q());
        let t2 = br.matrix_at(2, 1).residue(q());
        assert_eq!(t1, Matrix::from_i64(q(), &[&[1, 0], &[0, 0]]));
        assert_eq!(t2, Matrix::from_i64(q(), &[&[0, 0], &[0, 1]]));
    }
}
