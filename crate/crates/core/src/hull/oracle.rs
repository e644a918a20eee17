//! Deformations of a group representation, counted directly on generator matrices.

use std::collections::HashMap;

use crate::amat::AMat;
use crate::artin::{self, RVec, TestRing};
use crate::complexes::{presentation_complex, Presentation};
use crate::dgla::{def_classes, dgla_from_complex};
use crate::error::{Error, Result};
use crate::linalg::{Field, Matrix, Scalar};
use crate::orbits::{self, Coords, DeformationProblem};

use super::kuranishi::HullPresentation;

/// Lifts `ρ(g) = (1 + X_g) ρ₀(g)` with `X_g ∈ gl_r ⊗ m_A`, modulo conjugation by
/// `ker(GL_r(A) -> GL_r(k))`; group elements are `1 + G`.
#[derive(Clone, Debug)]
pub struct RepresentationProblem {
    presentation: Presentation,
    rho0: Vec<Matrix>,
    /// `ρ₀(g)⁻¹`, or `None` where `ρ₀(g) = 1`.
    rho0_inv: Vec<Option<Matrix>>,
    rank: usize,
    field: Field,
}

impl RepresentationProblem {
    pub fn new(presentation: &Presentation, rho0: &[Matrix]) -> Result<Self> {
        if rho0.len() != presentation.generators.len() || rho0.is_empty() {
            return Err(Error::Schema("one matrix per generator required".into()));
        }
        let rank = rho0[0].rows();
        let field = rho0[0].field();
        if rho0.iter().any(|m| m.rows() != rank || m.cols() != rank || m.field() != field) {
            return Err(Error::Dimension("generator matrices must be square of one size".into()));
        }
        for (i, w) in presentation.relators.iter().enumerate() {
            if presentation.evaluate(w, rho0)? != Matrix::identity(field, rank) {
                return Err(Error::Precondition(format!("relator {i} is not satisfied by the base representation")));
            }
        }
        let one = Matrix::identity(field, rank);
        let rho0_inv = rho0
            .iter()
            .map(|m| {
                if *m == one {
                    Ok(None)
                } else {
                    m.inverse().map(Some).ok_or_else(|| Error::Singular("base representation".into()))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(RepresentationProblem { presentation: presentation.clone(), rho0: rho0.to_vec(), rho0_inv, rank, field })
    }

    fn images(&self, ring: &TestRing, y: &[RVec]) -> Vec<AMat> {
        let r2 = self.rank * self.rank;
        let one = AMat::identity(ring, self.rank);
        self.rho0
            .iter()
            .enumerate()
            .map(|(g, m)| {
                let x = one.add(&AMat::from_fibre(self.rank, &y[g * r2..(g + 1) * r2]));
                if self.rho0_inv[g].is_none() {
                    x
                } else {
                    x.right_k(m)
                }
            })
            .collect()
    }

    fn word(&self, ring: &TestRing, images: &[AMat], inverses: &[AMat], w: &[crate::complexes::Letter]) -> AMat {
        let mut acc = AMat::identity(ring, self.rank);
        for l in w {
            let m = if l.inverse { &inverses[l.generator] } else { &images[l.generator] };
            acc = acc.mul(ring, m);
        }
        acc
    }
}

impl DeformationProblem for RepresentationProblem {
    fn field(&self) -> Field {
        self.field
    }
    fn point_len(&self) -> usize {
        self.rho0.len() * self.rank * self.rank
    }
    fn group_len(&self) -> usize {
        self.rank * self.rank
    }
    fn check_ring(&self, ring: &TestRing) -> Result<()> {
        if ring.field() != self.field {
            return Err(Error::Dimension("ring and representation over different fields".into()));
        }
        Ok(())
    }
    fn defect(&self, ring: &TestRing, y: &[RVec]) -> Result<Coords> {
        let images = self.images(ring, y);
        let inverses = images.iter().map(|m| m.inverse(ring)).collect::<Result<Vec<_>>>()?;
        let one = AMat::identity(ring, self.rank);
        let mut out = Vec::new();
        for w in &self.presentation.relators {
            out.extend(self.word(ring, &images, &inverses, w).sub(&one).to_fibre());
        }
        Ok(out)
    }
    fn mul(&self, ring: &TestRing, g: &[RVec], h: &[RVec]) -> Result<Coords> {
        let (a, b) = (AMat::from_fibre(self.rank, g), AMat::from_fibre(self.rank, h));
        Ok(a.add(&b).add(&a.mul(ring, &b)).to_fibre())
    }
    fn inv(&self, ring: &TestRing, g: &[RVec]) -> Result<Coords> {
        let one = AMat::identity(ring, self.rank);
        Ok(one.add(&AMat::from_fibre(self.rank, g)).inverse(ring)?.sub(&one).to_fibre())
    }
    fn act(&self, ring: &TestRing, g: &[RVec], y: &[RVec]) -> Result<Coords> {
        let one = AMat::identity(ring, self.rank);
        let u = one.add(&AMat::from_fibre(self.rank, g));
        let u_inv = u.inverse(ring)?;
        let mut out = Vec::with_capacity(y.len());
        for (i, m) in self.images(ring, y).iter().enumerate() {
            let conj = u.mul(ring, m).mul(ring, &u_inv);
            let x = match &self.rho0_inv[i] {
                None => conj,
                Some(inv) => conj.right_k(inv),
            };
            out.extend(x.sub(&one).to_fibre());
        }
        Ok(out)
    }
    fn affine_action(&self) -> bool {
        true
    }
}

/// Orbit count with lexicographically least representatives.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleClasses {
    pub count: u128,
    /// Each representative lists the lifts `ρ(g_i)` over `A`.
    pub representatives: Vec<Vec<AMat>>,
}

fn scalar_index(s: &Scalar) -> u64 {
    match s {
        Scalar::Fp { v, .. } => *v as u64,
        Scalar::Q(_) => unreachable!("enumeration runs over finite fields"),
    }
}

/// Plain enumeration of every lift, orbits found by closing under elementary conjugations.
pub fn brute_force_def(presentation: &Presentation, rho0: &[Matrix], ring: &TestRing, budget: u64) -> Result<OracleClasses> {
    let p = RepresentationProblem::new(presentation, rho0)?;
    let field = ring.field();
    let q = field.order().ok_or_else(|| Error::Precondition("enumeration needs a finite field".into()))? as u128;
    let m = ring.dim() - 1;
    let n = p.point_len() * m;
    let total = q.checked_pow(n as u32).filter(|t| *t <= budget as u128).ok_or_else(|| Error::Budget {
        needed: format!("{q}^{n}"),
        budget,
    })?;
    let decode = |mut idx: u128| -> Coords {
        let mut flat = vec![field.zero(); n];
        for slot in flat.iter_mut().rev() {
            *slot = field.element((idx % q) as u64);
            idx /= q;
        }
        flat.chunks(m)
            .map(|c| {
                let mut v = ring.zero();
                v[1..].clone_from_slice(c);
                v
            })
            .collect()
    };
    let encode = |y: &[RVec]| -> u128 { y.iter().flat_map(|v| v[1..].iter()).fold(0, |acc, s| acc * q + scalar_index(s) as u128) };
    let mut solutions: Vec<u128> = Vec::new();
    for idx in 0..total {
        let y = decode(idx);
        if p.defect(ring, &y)?.iter().all(|a| artin::is_zero(a)) {
            solutions.push(idx);
        }
    }
    let r = p.rank;
    let mut gens = Vec::new();
    for e in 0..r * r {
        for k in 1..ring.dim() {
            let mut g = orbits::zeros(ring, r * r);
            g[e][k] = field.one();
            gens.push(g);
        }
    }
    let position: HashMap<u128, usize> = solutions.iter().enumerate().map(|(i, s)| (*s, i)).collect();
    let mut seen = vec![false; solutions.len()];
    let mut representatives = Vec::new();
    for start in 0..solutions.len() {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let y0 = decode(solutions[start]);
        representatives.push(p.images(ring, &y0));
        let mut stack = vec![y0];
        while let Some(y) = stack.pop() {
            for g in &gens {
                let z = p.act(ring, g, &y)?;
                let i = *position.get(&encode(&z)).ok_or_else(|| Error::Mismatch("conjugate of a lift is not a lift".into()))?;
                if !seen[i] {
                    seen[i] = true;
                    stack.push(z);
                }
            }
        }
    }
    Ok(OracleClasses { count: representatives.len() as u128, representatives })
}

/// Orbit count of the representation problem through the small-extension tower.
pub fn representation_classes(presentation: &Presentation, rho0: &[Matrix], ring: &TestRing, budget: u64) -> Result<u128> {
    orbits::count_orbits(&RepresentationProblem::new(presentation, rho0)?, ring, budget)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OracleMethod {
    /// Every lift enumerated.
    Exhaustive,
    /// Lifts counted level by level on the representation side.
    Tower,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HullOracleReport {
    /// Classes of the cochain DGLA on the presentation complex.
    pub dgla_classes: u128,
    /// Classes of lifts of the representation.
    pub oracle_classes: u128,
    pub method: OracleMethod,
    pub presentation_points: u128,
    /// Points of the presentation over each class, when small enough to sort.
    pub fibre_sizes: Option<Vec<u128>>,
    pub prime: u32,
}

impl HullOracleReport {
    pub fn agree(&self) -> bool {
        self.dgla_classes == self.oracle_classes
    }
}

/// Largest `points x classes` for which fibres are computed.
const FIBRE_LIMIT: u128 = 20_000;

/// Compares the hull and both class counts over a finite test ring.
pub fn hull_vs_oracle(
    hp: &HullPresentation,
    presentation: &Presentation,
    rho0: &[Matrix],
    ring: &TestRing,
    budget: u64,
) -> Result<HullOracleReport> {
    let field = ring.field();
    let prime = field.characteristic();
    if prime == 0 {
        return Err(Error::Precondition("the oracle runs over a finite field".into()));
    }
    let reduced = if hp.field == field { hp.clone() } else { hp.reduce(prime)? };
    if ring.exact_nilpotency() > hp.truncation + 1 {
        return Err(Error::Precondition("maximal ideal order exceeds the truncation".into()));
    }
    let pc = presentation_complex(presentation)?;
    let sys = pc.local_system(field, rho0)?;
    let d = dgla_from_complex(&pc.complex, &sys)?;
    let dgla_classes = def_classes(&d, ring, budget)?.count;
    let (oracle_classes, method) = match brute_force_def(presentation, rho0, ring, budget) {
        Ok(c) => (c.count, OracleMethod::Exhaustive),
        Err(Error::Budget { .. }) => (representation_classes(presentation, rho0, ring, budget)?, OracleMethod::Tower),
        Err(e) => return Err(e),
    };
    let presentation_points = reduced.count_points(ring, budget)?;
    let fibre_sizes = if presentation_points * dgla_classes <= FIBRE_LIMIT {
        let reps = crate::dgla::def_class_representatives(&d, ring, budget)?.representatives.unwrap_or_default();
        let mut sizes = vec![0u128; reps.len()];
        for pt in reduced.points(ring, budget)? {
            let w = reduced.evaluate_omega(ring, &pt);
            let mut found = false;
            for (i, r) in reps.iter().enumerate() {
                if orbits::equivalence_witness(&d, ring, &w, &r.omega)?.is_some() {
                    sizes[i] += 1;
                    found = true;
                    break;
                }
            }
            if !found {
                return Err(Error::Mismatch("a presentation point maps to no class".into()));
            }
        }
        Some(sizes)
    } else {
        None
    };
    Ok(HullOracleReport { dgla_classes, oracle_classes, method, presentation_points, fibre_sizes, prime })
}
