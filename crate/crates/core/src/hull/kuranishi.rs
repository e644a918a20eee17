use rand::Rng;

use crate::artin::{self, RVec, SmallExtension, TestRing};
use crate::complexes::{split, CohomologyData};
use crate::dgla::{Dgla, McElement};
use crate::error::{Error, Result};
use crate::linalg::{Field, Matrix, Scalar};
use crate::mpoly::MPoly;
use crate::orbits::{self, Coords, DeformationProblem};

/// Splittings of `L¹` and `L²` used by the recursion.
#[derive(Clone, Debug)]
pub struct KuranishiSplittings {
    /// `L¹ = H¹ ⊕ B¹ ⊕ C¹`.
    pub h1: CohomologyData,
    /// `L² = H² ⊕ B² ⊕ C²`, with contraction `h: L² -> L¹`.
    pub h2: CohomologyData,
}

impl KuranishiSplittings {
    pub fn projection(&self) -> Matrix {
        self.h2.projection_matrix()
    }

    pub fn contraction(&self) -> &Matrix {
        self.h2.contraction_matrix()
    }

    /// `d∘h = id` on `B²` and `π_H∘d = 0`.
    pub fn check(&self, d: &Dgla) -> bool {
        let d1 = d.differential(1);
        let h = self.contraction();
        let on_b = self.h2.coboundaries.basis().iter().all(|b| d1.mul_vec(&h.mul_vec(b)) == *b);
        on_b && self.projection().mul(&d1).is_zero()
    }

    pub fn resplit<R: Rng>(&self, rng: &mut R) -> KuranishiSplittings {
        KuranishiSplittings { h1: self.h1.resplit(rng), h2: self.h2.resplit(rng) }
    }
}

/// Splittings of `D`, stable under a cochain automorphism `Φ = (Φ⁰, .., Φ³)` when given.
pub fn kuranishi_splittings(d: &Dgla, phi: Option<&[Matrix]>) -> Result<KuranishiSplittings> {
    if let Some(phi) = phi {
        if phi.len() != 4 {
            return Err(Error::Dimension("one automorphism per degree 0..3 required".into()));
        }
        for n in 0..3 {
            let dn = d.differential(n);
            if phi[n + 1].mul(&dn) != dn.mul(&phi[n]) {
                return Err(Error::Precondition(format!("automorphism does not commute with d in degree {n}")));
            }
        }
    }
    let pair = |n: usize| phi.map(|p| (&p[n - 1], &p[n]));
    let h1 = split(1, &d.differential(0), &d.differential(1), pair(1))?;
    let h2 = split(2, &d.differential(1), &d.differential(2), pair(2))?;
    Ok(KuranishiSplittings { h1, h2 })
}

/// `k[[x_1..x_d]]/(f_1..f_m)` truncated at order `N`, with the Maurer-Cartan series it carries.
#[derive(Clone, Debug)]
pub struct HullPresentation {
    pub field: Field,
    pub variables: Vec<String>,
    pub weights: Option<Vec<i64>>,
    pub relations: Vec<MPoly>,
    /// Weight tag of each relation, for equivariant hulls.
    pub relation_weights: Option<Vec<i64>>,
    pub truncation: u32,
    /// `ω(x) ∈ L¹ ⊗ k[x]`, one polynomial per basis vector of `L¹`.
    pub omega: Vec<MPoly>,
    pub splittings: KuranishiSplittings,
}

fn apply_poly(m: &Matrix, v: &[MPoly], nvars: usize) -> Vec<MPoly> {
    let field = m.field();
    (0..m.rows())
        .map(|r| {
            let mut acc = MPoly::zero(field, nvars);
            for (c, p) in v.iter().enumerate() {
                let s = &m[(r, c)];
                if !s.is_zero() && !p.is_zero() {
                    acc = acc.add(&p.scale(s));
                }
            }
            acc
        })
        .collect()
}

/// Nonzero structure constants on `L¹`: brackets `[e_a, e_b]` for `a < b` and squares.
struct Quadratic {
    pairs: Vec<(usize, usize, Vec<(usize, Scalar)>)>,
    squares: Vec<(usize, Vec<(usize, Scalar)>)>,
}

fn sparse(v: Vec<Scalar>) -> Vec<(usize, Scalar)> {
    v.into_iter().enumerate().filter(|(_, c)| !c.is_zero()).collect()
}

impl Quadratic {
    fn new(d: &Dgla) -> Quadratic {
        let n = d.dim(1);
        let mut pairs = Vec::new();
        let mut squares = Vec::new();
        for a in 0..n {
            let s = sparse(d.square_basis(a));
            if !s.is_empty() {
                squares.push((a, s));
            }
            for b in a + 1..n {
                let v = sparse(d.bracket_basis(1, a, 1, b));
                if !v.is_empty() {
                    pairs.push((a, b, v));
                }
            }
        }
        Quadratic { pairs, squares }
    }

    /// `[u, v]` for `u ≠ v`, or `½[u, u]` when `same`.
    fn eval(&self, field: Field, dim2: usize, nvars: usize, u: &[MPoly], v: &[MPoly], same: bool) -> Vec<MPoly> {
        let mut out = vec![MPoly::zero(field, nvars); dim2];
        let two = field.from_i64(2);
        let mut acc = |coef: MPoly, target: &[(usize, Scalar)], scale: Option<&Scalar>| {
            if coef.is_zero() {
                return;
            }
            let coef = match scale {
                Some(s) => coef.scale(s),
                None => coef,
            };
            for (i, c) in target {
                out[*i] = out[*i].add(&coef.scale(c));
            }
        };
        for (a, b, t) in &self.pairs {
            let coef = if same { u[*a].mul(&u[*b]) } else { u[*a].mul(&v[*b]).add(&u[*b].mul(&v[*a])) };
            acc(coef, t, None);
        }
        for (a, t) in &self.squares {
            let coef = u[*a].mul(&v[*a]);
            acc(coef, t, if same { None } else { Some(&two) });
        }
        out
    }
}

/// Order-by-order solution of the Maurer-Cartan equation: harmonic parts of the defect go
/// into the relations, coboundary parts are cancelled through the contraction.
pub fn build_hull(d: &Dgla, n: u32, s: Option<&KuranishiSplittings>) -> Result<HullPresentation> {
    if n < 2 {
        return Err(Error::Precondition(format!("truncation order {n} < 2")));
    }
    let field = d.field();
    let p = field.characteristic();
    if p != 0 && p <= 3 {
        return Err(Error::Characteristic { p, what: "the hull recursion needs characteristic 0 or > 3".into() });
    }
    let owned;
    let s = match s {
        Some(s) => s,
        None => {
            owned = kuranishi_splittings(d, None)?;
            &owned
        }
    };
    let nvars = s.h1.dim();
    let dim1 = d.dim(1);
    let dim2 = d.dim(2);
    let q = Quadratic::new(d);
    let mut parts: Vec<Vec<MPoly>> = vec![vec![MPoly::zero(field, nvars); dim1]; 2];
    for (i, rep) in s.h1.representatives.iter().enumerate() {
        let x = MPoly::var(field, nvars, i);
        for (a, c) in rep.iter().enumerate() {
            if !c.is_zero() {
                parts[1][a] = parts[1][a].add(&x.scale(c));
            }
        }
    }
    let proj = s.projection();
    let h = s.contraction();
    let mut relations = vec![MPoly::zero(field, nvars); s.h2.dim()];
    for k in 2..=n as usize {
        let mut defect = vec![MPoly::zero(field, nvars); dim2];
        for i in 1..=k / 2 {
            let j = k - i;
            let term = q.eval(field, dim2, nvars, &parts[i], &parts[j], i == j);
            for (o, t) in defect.iter_mut().zip(term) {
                *o = o.add(&t);
            }
        }
        for (r, f) in relations.iter_mut().zip(apply_poly(&proj, &defect, nvars)) {
            *r = r.add(&f);
        }
        let correction = apply_poly(h, &defect, nvars).into_iter().map(|p| p.scale(&field.from_i64(-1))).collect();
        parts.push(correction);
    }
    let mut omega = vec![MPoly::zero(field, nvars); dim1];
    for part in &parts[1..] {
        for (o, p) in omega.iter_mut().zip(part) {
            *o = o.add(p);
        }
    }
    Ok(HullPresentation {
        field,
        variables: (1..=nvars).map(|i| format!("x{i}")).collect(),
        weights: None,
        relations,
        relation_weights: None,
        truncation: n,
        omega,
        splittings: s.clone(),
    })
}

fn eval_in(ring: &TestRing, p: &MPoly, point: &[RVec]) -> RVec {
    p.eval_with(point, |c| ring.scalar(c), |a, b| ring.mul(a, b), |a, b| artin::add(a, b), &ring.zero())
}

impl HullPresentation {
    pub fn nvars(&self) -> usize {
        self.variables.len()
    }

    /// Whether `φ(x_i) = point[i]` kills every relation.
    pub fn is_point(&self, ring: &TestRing, point: &[RVec]) -> bool {
        self.relations.iter().all(|f| artin::is_zero(&eval_in(ring, f, point)))
    }

    /// `ω(φ(x))`.
    pub fn evaluate_omega(&self, ring: &TestRing, point: &[RVec]) -> Coords {
        self.omega.iter().map(|p| eval_in(ring, p, point)).collect()
    }

    /// Degree-2 parts of the relations.
    pub fn quadratic_parts(&self) -> Vec<MPoly> {
        self.relations.iter().map(|f| f.homogeneous_part(2)).collect()
    }

    /// Coefficients reduced mod `p`; splittings are not carried over.
    pub fn reduce(&self, p: u32) -> Result<HullPresentation> {
        let f = Field::Prime(p);
        let red = |v: &[MPoly]| v.iter().map(|x| x.reduce(f)).collect::<Result<Vec<_>>>();
        let cd = |c: &CohomologyData| c.reduce(f);
        Ok(HullPresentation {
            field: f,
            variables: self.variables.clone(),
            weights: self.weights.clone(),
            relation_weights: self.relation_weights.clone(),
            relations: red(&self.relations)?,
            truncation: self.truncation,
            omega: red(&self.omega)?,
            splittings: KuranishiSplittings { h1: cd(&self.splittings.h1)?, h2: cd(&self.splittings.h2)? },
        })
    }

    /// First prime of `candidates` at which the coefficients reduce.
    pub fn reducible_prime(&self, candidates: &[u32]) -> Option<u32> {
        candidates.iter().copied().find(|&p| self.reduce(p).is_ok())
    }

    /// Number of points `φ: presentation -> A` (needs `m_A^{N+1} = 0`).
    pub fn count_points(&self, ring: &TestRing, budget: u64) -> Result<u128> {
        orbits::count_orbits(&PointProblem { hull: self }, ring, budget)
    }

    /// All points, lexicographically ordered.
    pub fn points(&self, ring: &TestRing, budget: u64) -> Result<Vec<Coords>> {
        Ok(orbits::enumerate_orbits(&PointProblem { hull: self }, ring, budget)?.representatives)
    }
}

/// Points of the presentation as a deformation problem with trivial group.
struct PointProblem<'a> {
    hull: &'a HullPresentation,
}

impl DeformationProblem for PointProblem<'_> {
    fn field(&self) -> Field {
        self.hull.field
    }
    fn point_len(&self) -> usize {
        self.hull.nvars()
    }
    fn group_len(&self) -> usize {
        0
    }
    fn check_ring(&self, ring: &TestRing) -> Result<()> {
        if ring.field() != self.hull.field {
            return Err(Error::Dimension("ring and presentation over different fields".into()));
        }
        if ring.exact_nilpotency() > self.hull.truncation + 1 {
            return Err(Error::Precondition(format!(
                "m_A^{} != 0 exceeds the truncation order {}",
                self.hull.truncation + 1,
                self.hull.truncation
            )));
        }
        Ok(())
    }
    fn defect(&self, ring: &TestRing, y: &[RVec]) -> Result<Coords> {
        Ok(self.hull.relations.iter().map(|f| eval_in(ring, f, y)).collect())
    }
    fn mul(&self, _ring: &TestRing, _g: &[RVec], _h: &[RVec]) -> Result<Coords> {
        Ok(Vec::new())
    }
    fn inv(&self, _ring: &TestRing, _g: &[RVec]) -> Result<Coords> {
        Ok(Vec::new())
    }
    fn act(&self, _ring: &TestRing, _g: &[RVec], y: &[RVec]) -> Result<Coords> {
        Ok(y.to_vec())
    }
}

/// Whether the quadratic parts of `f` are dual to `a ↦ ½[a, a]` on `H¹`.
pub fn quadratic_vs_cup(hp: &HullPresentation, d: &Dgla) -> Result<bool> {
    let field = d.field();
    if field.characteristic() == 2 {
        return Err(Error::Characteristic { p: 2, what: "halving the cup product".into() });
    }
    let nvars = hp.nvars();
    let k = TestRing::residue(field);
    let reps: Vec<Vec<Scalar>> = (0..nvars)
        .map(|i| {
            let m = crate::mpoly::Mono::var(nvars, i);
            hp.omega.iter().map(|p| p.coeff(&m)).collect()
        })
        .collect();
    let wrap = |v: &[Scalar]| -> Coords { v.iter().map(|c| vec![c.clone()]).collect() };
    let half = field.from_i64(2).inv().expect("char != 2");
    let proj = hp.splittings.projection();
    let quad = hp.quadratic_parts();
    for i in 0..nvars {
        for j in i..nvars {
            let b = d.bracket(&k, 1, &wrap(&reps[i]), 1, &wrap(&reps[j]));
            let mut v: Vec<Scalar> = b.into_iter().map(|x| x[0].clone()).collect();
            if i == j {
                v = v.iter().map(|x| x * &half).collect();
            }
            let coords = proj.mul_vec(&v);
            let mono = crate::mpoly::Mono::var(nvars, i).mul(&crate::mpoly::Mono::var(nvars, j));
            for (f, c) in quad.iter().zip(&coords) {
                if f.coeff(&mono) != *c {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Harmonic part of the Maurer-Cartan defect of a lift of `ω` along `e`.
pub fn obstruction_class(d: &Dgla, e: &SmallExtension, w: &McElement, s: &KuranishiSplittings) -> Result<Vec<Scalar>> {
    let lift: Coords = w.omega.iter().map(|a| artin::resize(a, e.source.dim(), d.field())).collect();
    obstruction_of_lift(d, e, w, &lift, s)
}

/// As [`obstruction_class`] for a caller-chosen lift.
pub fn obstruction_of_lift(
    d: &Dgla,
    e: &SmallExtension,
    w: &McElement,
    lift: &[RVec],
    s: &KuranishiSplittings,
) -> Result<Vec<Scalar>> {
    if w.ring != e.target {
        return Err(Error::Ring("MC element does not live on the target of the extension".into()));
    }
    if !crate::dgla::is_mc(d, w).0 {
        return Err(Error::Precondition("not a Maurer-Cartan element".into()));
    }
    let field = d.field();
    for (l, a) in lift.iter().zip(&w.omega) {
        if artin::resize(l, e.target.dim(), field) != *a {
            return Err(Error::Precondition("not a lift of the given element".into()));
        }
    }
    let defect = d.mc_defect(&e.source, lift);
    Ok(s.h2.project(&orbits::coefficient(&defect, e.kernel)))
}

/// Random lift of `ω` along `e`.
pub fn random_lift<R: Rng>(d: &Dgla, e: &SmallExtension, w: &McElement, rng: &mut R) -> Coords {
    let field = d.field();
    w.omega
        .iter()
        .map(|a| {
            let mut l = artin::resize(a, e.source.dim(), field);
            l[e.kernel] = crate::sdc::random_scalar(field, rng.gen());
            l
        })
        .collect()
}

/// Whether some lift of `ω` along `e` is Maurer-Cartan, decided by solving `d c = -defect`.
pub fn has_mc_lift(d: &Dgla, e: &SmallExtension, w: &McElement) -> bool {
    let lift: Coords = w.omega.iter().map(|a| artin::resize(a, e.source.dim(), d.field())).collect();
    let defect = orbits::coefficient(&d.mc_defect(&e.source, &lift), e.kernel);
    d.differential(1).solve(&defect).is_some()
}
