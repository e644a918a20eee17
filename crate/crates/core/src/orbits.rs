//! Counting orbits of a unipotent group acting on the solutions of a deformation problem,
//! one small extension at a time.
//!
//! A problem supplies, for each test ring `A`, a solution set `X(A)` inside `(m_A)^n` cut out
//! by a defect map, and a group `G(A)` (coordinates in `(m_A)^{n_0}`, identity at `0`) acting
//! on it. Along `A_s -> A_{s-1}` with kernel `k e_s`, lifts of a solution form a torsor under
//! the cocycles `Z^1 = ker δ1`, the kernel group acts through `δ0`, and the stabilizer of the
//! base solution acts through a homomorphism `τ` to `H^1 = Z^1 / im δ0`. Stabilizers are kept
//! as polycyclic sequences so the kernel of `τ` is available without enumerating the group.

use std::collections::HashMap;
use std::rc::Rc;

use crate::artin::{self, RVec, TestRing};
use crate::complexes::cohomology::{split, CohomologyData};
use crate::error::{Error, Result};
use crate::linalg::{kernel_basis, Field, Matrix, Scalar, Subspace};

pub type Coords = Vec<RVec>;

pub const DEFAULT_BUDGET: u64 = 10_000_000;

pub trait DeformationProblem {
    fn field(&self) -> Field;
    fn point_len(&self) -> usize;
    fn group_len(&self) -> usize;
    /// Rejects rings the problem cannot be evaluated over.
    fn check_ring(&self, _ring: &TestRing) -> Result<()> {
        Ok(())
    }
    /// Vanishes exactly on solutions.
    fn defect(&self, ring: &TestRing, y: &[RVec]) -> Result<Coords>;
    fn mul(&self, ring: &TestRing, g: &[RVec], h: &[RVec]) -> Result<Coords>;
    fn inv(&self, ring: &TestRing, g: &[RVec]) -> Result<Coords>;
    fn act(&self, ring: &TestRing, g: &[RVec], y: &[RVec]) -> Result<Coords>;
    /// `g^c`; over prime fields the default uses the integer representative of `c`.
    fn power(&self, ring: &TestRing, g: &[RVec], c: &Scalar) -> Result<Coords> {
        integer_power(self, ring, g, c)
    }
    /// Whether `act(g, -)` is affine with linear part `≡ 1 mod m`. Then the translation of a
    /// stabilizer element is affine in the lift, and sibling nodes share one evaluation.
    fn affine_action(&self) -> bool {
        false
    }
}

/// `g^c` by repeated squaring on the integer representative of `c` (prime fields).
pub fn integer_power<P: DeformationProblem + ?Sized>(p: &P, ring: &TestRing, g: &[RVec], c: &Scalar) -> Result<Coords> {
    if !p.field().is_finite() {
        return Err(Error::Precondition("rational powers of group elements are not available".into()));
    }
    let mut e = c.index();
    let mut base = g.to_vec();
    let mut acc = zeros(ring, g.len());
    while e > 0 {
        if e & 1 == 1 {
            acc = p.mul(ring, &acc, &base)?;
        }
        base = p.mul(ring, &base, &base)?;
        e >>= 1;
    }
    Ok(acc)
}

pub fn zeros(ring: &TestRing, n: usize) -> Coords {
    vec![ring.zero(); n]
}

pub fn pad(v: &[RVec], len: usize, field: Field) -> Coords {
    v.iter().map(|a| artin::resize(a, len, field)).collect()
}

/// Coefficient of the basis vector `k` in every coordinate.
pub fn coefficient(v: &[RVec], k: usize) -> Vec<Scalar> {
    v.iter().map(|a| a[k].clone()).collect()
}

/// `v ⊗ e_k` in a ring with `len` coordinates.
pub fn embed(v: &[Scalar], k: usize, len: usize, field: Field) -> Coords {
    v.iter()
        .map(|c| {
            let mut a = vec![field.zero(); len];
            a[k] = c.clone();
            a
        })
        .collect()
}

pub fn add(a: &[RVec], b: &[RVec]) -> Coords {
    a.iter().zip(b).map(|(x, y)| artin::add(x, y)).collect()
}

pub fn sub(a: &[RVec], b: &[RVec]) -> Coords {
    a.iter().zip(b).map(|(x, y)| artin::sub(x, y)).collect()
}

fn lower_vanishes(v: &[RVec], s: usize) -> bool {
    v.iter().all(|a| a[..s].iter().all(Scalar::is_zero))
}

/// Linearization at the base solution.
#[derive(Clone, Debug)]
pub struct Tangent {
    pub delta0: Matrix,
    pub delta1: Matrix,
    /// `H^1` with its splitting of the point space.
    pub h1: CohomologyData,
    /// Splitting of the defect space against `im δ1`.
    pub obstruction: CohomologyData,
    pub stabilizer_kernel: Subspace,
}

pub fn tangent<P: DeformationProblem + ?Sized>(p: &P) -> Result<Tangent> {
    let field = p.field();
    let eps = TestRing::dual_numbers(field);
    let k = TestRing::residue(field);
    let n = p.point_len();
    let n0 = p.group_len();
    let base = p.defect(&k, &zeros(&k, n))?;
    if !base.iter().all(|a| artin::is_zero(a)) {
        return Err(Error::Precondition("the base point is not a solution".into()));
    }
    let m = base.len();
    let mut d1_cols = Vec::with_capacity(n);
    for i in 0..n {
        let mut y = zeros(&eps, n);
        y[i] = eps.basis_vector(1);
        d1_cols.push(coefficient(&p.defect(&eps, &y)?, 1));
    }
    let mut d0_cols = Vec::with_capacity(n0);
    for i in 0..n0 {
        let mut g = zeros(&eps, n0);
        g[i] = eps.basis_vector(1);
        d0_cols.push(coefficient(&p.act(&eps, &g, &zeros(&eps, n))?, 1));
    }
    let delta1 = Matrix::from_columns(field, m, &d1_cols);
    let delta0 = Matrix::from_columns(field, n, &d0_cols);
    let h1 = split(1, &delta0, &delta1, None)?;
    let obstruction = split(2, &delta1, &Matrix::zeros(field, 0, m), None)?;
    let stabilizer_kernel = kernel_basis(&delta0);
    Ok(Tangent { delta0, delta1, h1, obstruction, stabilizer_kernel })
}

struct Node {
    point: Coords,
    stab: Rc<Vec<Coords>>,
    /// `τ` on `stab` at the next level, when known in advance.
    taus: Option<Vec<Vec<Scalar>>>,
}

/// Lifting data for one solution along one small extension.
struct Step {
    /// A lift of the solution, or `None` when the obstruction does not vanish.
    lift: Option<Coords>,
    taus: Vec<Vec<Scalar>>,
    padded_stab: Vec<Coords>,
}

struct Driver<'a, P: DeformationProblem + ?Sized> {
    p: &'a P,
    t: Tangent,
    field: Field,
    visited: u64,
    budget: u64,
}

impl<'a, P: DeformationProblem + ?Sized> Driver<'a, P> {
    fn new(p: &'a P, ring: &TestRing, budget: u64) -> Result<Self> {
        p.check_ring(ring)?;
        if ring.field() != p.field() {
            return Err(Error::Ring("ring and problem are over different fields".into()));
        }
        Ok(Driver { p, t: tangent(p)?, field: p.field(), visited: 0, budget })
    }

    fn tick(&mut self) -> Result<()> {
        self.visited += 1;
        if self.visited > self.budget {
            return Err(Error::Budget { needed: format!("more than {}", self.budget), budget: self.budget });
        }
        Ok(())
    }

    /// Translation of `g` on the lift `y` at coordinate `s`, as a cocycle.
    fn translation(&self, ring: &TestRing, s: usize, g: &[RVec], y: &[RVec]) -> Result<Vec<Scalar>> {
        let moved = self.p.act(ring, g, y)?;
        let diff = sub(&moved, y);
        if !lower_vanishes(&diff, s) {
            return Err(Error::Precondition("stabilizer element moves the solution below the kernel".into()));
        }
        Ok(coefficient(&diff, s))
    }

    /// Lifts `point` (valid over `A_{s-1}`) to `A_s` and evaluates `τ` on its stabilizer.
    fn step(
        &self,
        ring: &TestRing,
        s: usize,
        point: &[RVec],
        stab: &[Coords],
        fixed: Option<&[RVec]>,
        known: Option<Vec<Vec<Scalar>>>,
    ) -> Result<Step> {
        let len = s + 1;
        let y = match fixed {
            Some(f) => f.to_vec(),
            None => {
                let y = pad(point, len, self.field);
                let obs_full = self.p.defect(ring, &y)?;
                if !lower_vanishes(&obs_full, s) {
                    return Err(Error::Precondition("defect of a lifted solution leaves the kernel".into()));
                }
                let obs = coefficient(&obs_full, s);
                if !self.t.obstruction.project(&obs).iter().all(Scalar::is_zero) {
                    return Ok(Step { lift: None, taus: Vec::new(), padded_stab: Vec::new() });
                }
                let neg: Vec<Scalar> = obs.iter().map(|c| -c).collect();
                let v0 = self.t.obstruction.contract(&neg);
                add(&y, &embed(&v0, s, len, self.field))
            }
        };
        let padded_stab: Vec<Coords> = stab.iter().map(|g| pad(g, len, self.field)).collect();
        let taus = match known {
            Some(t) => t,
            None => self.taus_at(ring, s, &padded_stab, &y)?,
        };
        Ok(Step { lift: Some(y), taus, padded_stab })
    }

    fn taus_at(&self, ring: &TestRing, s: usize, padded_stab: &[Coords], y: &[RVec]) -> Result<Vec<Vec<Scalar>>> {
        padded_stab.iter().map(|g| Ok(self.t.h1.project(&self.translation(ring, s, g, y)?))).collect()
    }

    /// `τ` at level `s + 1` on the children `lift + z e_s`, as a base value and one
    /// difference per free coordinate.
    fn affine_taus(
        &self,
        ring: &TestRing,
        s: usize,
        lift: &[RVec],
        stab: &[Coords],
        free: &[usize],
    ) -> Result<(Vec<Vec<Scalar>>, Vec<Vec<Vec<Scalar>>>)> {
        let len = s + 2;
        let padded: Vec<Coords> = stab.iter().map(|g| pad(g, len, self.field)).collect();
        let base_point = pad(lift, len, self.field);
        let base = self.taus_at(ring, s + 1, &padded, &base_point)?;
        let dim = self.t.h1.dim();
        let mut diffs = Vec::with_capacity(free.len());
        for &idx in free {
            let mut c = vec![self.field.zero(); dim];
            c[idx] = self.field.one();
            let z = self.t.h1.combine(&c);
            let moved = add(&base_point, &embed(&z, s, len, self.field));
            let t = self.taus_at(ring, s + 1, &padded, &moved)?;
            diffs.push(t.iter().zip(&base).map(|(a, b)| a.iter().zip(b).map(|(x, y)| x - y).collect()).collect());
        }
        Ok((base, diffs))
    }

    /// Stabilizer of `lift` in `G(A_s)` as a polycyclic sequence.
    fn next_stabilizer(&self, ring: &TestRing, s: usize, step: &Step) -> Result<Vec<Coords>> {
        let len = s + 1;
        let y = step.lift.as_ref().unwrap();
        let k = step.taus.len();
        let dim = self.t.h1.dim();
        let mut kept: Vec<usize> = Vec::new();
        let mut kernel: Vec<(usize, Coords)> = Vec::new();
        for i in (0..k).rev() {
            let cols: Vec<Vec<Scalar>> = kept.iter().map(|&j| step.taus[j].clone()).collect();
            let a = Matrix::from_columns(self.field, dim, &cols);
            match a.solve(&step.taus[i]) {
                None => kept.push(i),
                Some(c) => {
                    // u = prod over kept j (increasing) of x_j^{c_j}
                    let mut order: Vec<(usize, Scalar)> =
                        kept.iter().cloned().zip(c).filter(|(_, c)| !c.is_zero()).collect();
                    order.sort_by_key(|(j, _)| *j);
                    let mut u = zeros(ring, self.p.group_len());
                    for (j, cj) in order {
                        let pw = self.p.power(ring, &step.padded_stab[j], &cj)?;
                        u = self.p.mul(ring, &u, &pw)?;
                    }
                    let inv_u = self.p.inv(ring, &u)?;
                    let elem = self.p.mul(ring, &step.padded_stab[i], &inv_u)?;
                    kernel.push((i, elem));
                }
            }
        }
        kernel.sort_by_key(|(i, _)| *i);
        let mut out = Vec::with_capacity(kernel.len() + self.t.stabilizer_kernel.dim());
        for (_, elem) in kernel {
            let t = self.translation(ring, s, &elem, y)?;
            let neg: Vec<Scalar> = t.iter().map(|c| -c).collect();
            let h = self.t.h1.contract(&neg);
            let corrected = self.p.mul(ring, &embed(&h, s, len, self.field), &elem)?;
            debug_assert!(self.translation(ring, s, &corrected, y)?.iter().all(Scalar::is_zero));
            out.push(corrected);
        }
        for h in self.t.stabilizer_kernel.basis() {
            out.push(embed(h, s, len, self.field));
        }
        Ok(out)
    }
}

/// Coordinates (in the chosen complement) spanning `H^1 / span τ`.
fn free_coordinates(field: Field, dim: usize, taus: &[Vec<Scalar>]) -> (usize, Vec<usize>) {
    if taus.is_empty() {
        return (0, (0..dim).collect());
    }
    let a = Matrix::from_columns(field, dim, taus).transpose();
    let r = a.rref();
    let free = (0..dim).filter(|c| !r.pivots.contains(c)).collect();
    (r.pivots.len(), free)
}

fn checked_pow(p: u64, e: usize) -> Result<u128> {
    (p as u128)
        .checked_pow(e as u32)
        .ok_or_else(|| Error::Budget { needed: format!("{p}^{e} classes"), budget: u64::MAX })
}

/// Number of `G(A)`-orbits on `X(A)` for a finite test ring `A`.
pub fn count_orbits<P: DeformationProblem + ?Sized>(p: &P, ring: &TestRing, budget: u64) -> Result<u128> {
    let field = p.field();
    let q = field
        .order()
        .ok_or_else(|| Error::Precondition("orbit counting needs a finite coefficient field".into()))?;
    let mut d = Driver::new(p, ring, budget)?;
    let levels = ring.levels();
    let top = levels.len() - 1;
    if top == 0 {
        tangent(p)?;
        return Ok(1);
    }
    let mut nodes = vec![Node { point: zeros(&levels[0], p.point_len()), stab: Rc::new(Vec::new()), taus: None }];
    let dim = d.t.h1.dim();
    for s in 1..=top {
        let rs = &levels[s];
        let last = s == top;
        let mut next = Vec::new();
        let mut count: u128 = 0;
        for node in nodes.iter_mut() {
            d.tick()?;
            let step = d.step(rs, s, &node.point, &node.stab, None, node.taus.take())?;
            let Some(lift) = step.lift.as_ref() else { continue };
            let (rank, free) = free_coordinates(field, dim, &step.taus);
            if last {
                count = count
                    .checked_add(checked_pow(q, dim - rank)?)
                    .ok_or_else(|| Error::Budget { needed: "class count overflow".into(), budget: u64::MAX })?;
                continue;
            }
            let stab = Rc::new(d.next_stabilizer(rs, s, &step)?);
            let total = checked_pow(q, free.len())?;
            if next.len() as u128 + total > d.budget as u128 {
                return Err(Error::Budget { needed: format!("{total} representatives"), budget: d.budget });
            }
            let affine = if p.affine_action() && !stab.is_empty() {
                Some(d.affine_taus(&levels[s + 1], s, lift, &stab, &free)?)
            } else {
                None
            };
            let elements = field.elements();
            let mut digits = vec![0usize; free.len()];
            loop {
                let mut c = vec![field.zero(); dim];
                for (slot, &idx) in digits.iter().zip(&free) {
                    c[idx] = elements[*slot].clone();
                }
                let z = d.t.h1.combine(&c);
                let taus = affine.as_ref().map(|(base, diffs)| {
                    let mut t = base.clone();
                    for (slot, diff) in digits.iter().zip(diffs) {
                        if *slot == 0 {
                            continue;
                        }
                        let k = &elements[*slot];
                        for (ti, di) in t.iter_mut().zip(diff) {
                            for (x, y) in ti.iter_mut().zip(di) {
                                crate::linalg::scalar::fma(x, k, y);
                            }
                        }
                    }
                    t
                });
                next.push(Node { point: add(lift, &embed(&z, s, s + 1, field)), stab: Rc::clone(&stab), taus });
                if !odometer(&mut digits, elements.len()) {
                    break;
                }
            }
        }
        if last {
            return Ok(count);
        }
        nodes = next;
    }
    unreachable!()
}

/// Advances a little-endian-at-the-back counter; false once it wraps.
fn odometer(digits: &mut [usize], base: usize) -> bool {
    for d in digits.iter_mut().rev() {
        *d += 1;
        if *d < base {
            return true;
        }
        *d = 0;
    }
    false
}

/// Decides whether `y2 ∈ G(A) y1`, returning a witness. Works over any base field.
pub fn equivalence_witness<P: DeformationProblem + ?Sized>(
    p: &P,
    ring: &TestRing,
    y1: &[RVec],
    y2: &[RVec],
) -> Result<Option<Coords>> {
    let field = p.field();
    let d = Driver::new(p, ring, u64::MAX)?;
    for y in [y1, y2] {
        if !p.defect(ring, y)?.iter().all(|a| artin::is_zero(a)) {
            return Err(Error::Precondition("equivalence test on a non-solution".into()));
        }
    }
    let levels = ring.levels();
    let mut g = zeros(&levels[0], p.group_len());
    let mut stab: Vec<Coords> = Vec::new();
    for s in 1..levels.len() {
        let rs = &levels[s];
        let len = s + 1;
        let a = pad(y1, len, field);
        let b = pad(y2, len, field);
        let gt = pad(&g, len, field);
        let moved = p.act(rs, &gt, &a)?;
        let diff_full = sub(&b, &moved);
        if !lower_vanishes(&diff_full, s) {
            return Err(Error::Precondition("gauge witness lost at a lower level".into()));
        }
        let diff = coefficient(&diff_full, s);
        let step = d.step(rs, s, &a, &stab, Some(&a), None)?;
        let target = d.t.h1.project(&diff);
        let cols = Matrix::from_columns(field, d.t.h1.dim(), &step.taus);
        let Some(c) = cols.solve(&target) else { return Ok(None) };
        let mut sigma = zeros(rs, p.group_len());
        for (j, cj) in c.iter().enumerate() {
            if !cj.is_zero() {
                let pw = p.power(rs, &step.padded_stab[j], cj)?;
                sigma = p.mul(rs, &sigma, &pw)?;
            }
        }
        let mut gs = p.mul(rs, &gt, &sigma)?;
        let rest_full = sub(&b, &p.act(rs, &gs, &a)?);
        let rest = coefficient(&rest_full, s);
        let h = d.t.h1.contract(&rest);
        gs = p.mul(rs, &embed(&h, s, len, field), &gs)?;
        if p.act(rs, &gs, &a)? != b {
            return Err(Error::Precondition("order-by-order gauge solving did not close".into()));
        }
        stab = d.next_stabilizer(rs, s, &step)?;
        g = gs;
    }
    Ok(Some(g))
}

/// Result of exhaustive enumeration.
#[derive(Clone, Debug)]
pub struct Enumeration {
    pub count: u128,
    pub solutions: u128,
    /// Lexicographically least member of each orbit.
    pub representatives: Vec<Coords>,
}

fn encode(field: Field, y: &[RVec]) -> Vec<u64> {
    let _ = field;
    y.iter().flat_map(|a| a.iter().map(Scalar::index)).collect()
}

/// Enumerates `X(A)` and its orbits under generators `b_i ⊗ e_k`.
pub fn enumerate_orbits<P: DeformationProblem + ?Sized>(p: &P, ring: &TestRing, budget: u64) -> Result<Enumeration> {
    p.check_ring(ring)?;
    let field = p.field();
    let q = field
        .order()
        .ok_or_else(|| Error::Precondition("enumeration needs a finite coefficient field".into()))?;
    let dim = ring.dim();
    let n = p.point_len();
    let slots = n * (dim - 1);
    let total = (q as u128).checked_pow(slots as u32);
    if total.is_none_or(|t| t > budget as u128) {
        return Err(Error::Budget { needed: format!("{q}^{slots} candidates"), budget });
    }
    let elements = field.elements();
    let mut digits = vec![0usize; slots];
    let decode = |digits: &[usize]| -> Coords {
        (0..n)
            .map(|i| {
                let mut a = vec![field.zero(); dim];
                for k in 1..dim {
                    a[k] = elements[digits[i * (dim - 1) + k - 1]].clone();
                }
                a
            })
            .collect()
    };
    let mut solutions: Vec<Coords> = Vec::new();
    loop {
        let y = decode(&digits);
        if p.defect(ring, &y)?.iter().all(|a| artin::is_zero(a)) {
            solutions.push(y);
        }
        if !odometer(&mut digits, elements.len()) {
            break;
        }
    }
    let mut gens = Vec::new();
    for i in 0..p.group_len() {
        for k in 1..dim {
            let mut g = zeros(ring, p.group_len());
            g[i] = ring.basis_vector(k);
            gens.push(g);
        }
    }
    let index: HashMap<Vec<u64>, usize> =
        solutions.iter().enumerate().map(|(i, y)| (encode(field, y), i)).collect();
    let mut seen = vec![false; solutions.len()];
    let mut reps = Vec::new();
    for start in 0..solutions.len() {
        if seen[start] {
            continue;
        }
        reps.push(solutions[start].clone());
        seen[start] = true;
        let mut queue = vec![start];
        while let Some(cur) = queue.pop() {
            for g in &gens {
                let moved = p.act(ring, g, &solutions[cur])?;
                let key = encode(field, &moved);
                let j = *index
                    .get(&key)
                    .ok_or_else(|| Error::Precondition("group action leaves the solution set".into()))?;
                if !seen[j] {
                    seen[j] = true;
                    queue.push(j);
                }
            }
        }
    }
    Ok(Enumeration { count: reps.len() as u128, solutions: solutions.len() as u128, representatives: reps })
}
