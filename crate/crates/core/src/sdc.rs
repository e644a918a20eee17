//! The exponential cochain SDC `E^n(A) = 1 + C^n(X, End L) ⊗ m_A` with the Alexander-Whitney
//! product, its Maurer-Cartan equation and gauge action, and the constant SDC of a Lie algebra.

use crate::amat::AMat;
use crate::artin::{RVec, TestRing};
use crate::complexes::cochain::differential_matrix;
use crate::complexes::delta::DeltaComplex;
use crate::complexes::local_system::LocalSystem;
use crate::dgla::{dgla_from_complex, Dgla};
use crate::error::{Error, Result};
use crate::linalg::{Field, Matrix, Scalar};
use crate::orbits::{self, Coords, DeformationProblem};

/// An element of `E^n(A)`: one matrix `1 + nilpotent` per `n`-cell.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SdcElement {
    pub level: usize,
    pub values: Vec<AMat>,
}

/// Exponential SDC of a complex with local system, over a test ring.
#[derive(Clone, Debug)]
pub struct Sdc {
    x: DeltaComplex,
    sys: LocalSystem,
    ring: TestRing,
}

pub fn sdc_from_complex(x: &DeltaComplex, sys: &LocalSystem, ring: &TestRing) -> Result<Sdc> {
    if ring.field() != sys.field() {
        return Err(Error::Ring("test ring and local system are over different fields".into()));
    }
    Ok(Sdc { x: x.clone(), sys: sys.clone(), ring: ring.clone() })
}

fn factorial_inverse(field: Field, n: u64) -> Result<Scalar> {
    let f: u64 = (2..=n).product();
    field
        .inv_int(f)
        .map_err(|_| Error::Characteristic { p: field.characteristic(), what: format!("{n}! is not invertible") })
}

/// `exp(n)` of a nilpotent matrix over the ring.
pub fn mat_exp(ring: &TestRing, n: &AMat) -> Result<AMat> {
    let r = n.rank();
    let mut out = AMat::identity(ring, r);
    let mut pow = AMat::identity(ring, r);
    let mut k = 0u64;
    loop {
        pow = pow.mul(ring, n);
        k += 1;
        if pow.is_zero() {
            return Ok(out);
        }
        out = out.add(&pow.scale(&factorial_inverse(ring.field(), k)?));
    }
}

/// `log(u)` for `u = 1 + nilpotent`.
pub fn mat_log(ring: &TestRing, u: &AMat) -> Result<AMat> {
    let r = u.rank();
    let n = u.sub(&AMat::identity(ring, r));
    let mut out = AMat::zero(ring, r);
    let mut pow = AMat::identity(ring, r);
    let mut k = 0u64;
    loop {
        pow = pow.mul(ring, &n);
        k += 1;
        if pow.is_zero() {
            return Ok(out);
        }
        let c = ring
            .field()
            .inv_int(k)
            .map_err(|_| Error::Characteristic { p: ring.field().characteristic(), what: format!("log needs 1/{k}") })?;
        let term = pow.scale(&c);
        out = if k % 2 == 1 { out.add(&term) } else { out.sub(&term) };
    }
}

fn unipotent(ring: &TestRing, r: usize, fibre: &[RVec]) -> AMat {
    AMat::from_fibre(r, fibre).add(&AMat::identity(ring, r))
}

fn nilpotent_part(ring: &TestRing, m: &AMat) -> Vec<RVec> {
    m.sub(&AMat::identity(ring, m.rank())).to_fibre()
}

/// Ring-independent core shared by [`Sdc`] and the orbit driver.
#[derive(Clone, Copy)]
struct Core<'a> {
    x: &'a DeltaComplex,
    sys: &'a LocalSystem,
}

impl<'a> Core<'a> {
    fn r(&self) -> usize {
        self.sys.rank()
    }

    fn identity(&self, ring: &TestRing, level: usize) -> SdcElement {
        SdcElement { level, values: vec![AMat::identity(ring, self.r()); self.x.count(level)] }
    }

    fn from_coords(&self, ring: &TestRing, level: usize, y: &[RVec]) -> SdcElement {
        let f = self.r() * self.r();
        let values = (0..self.x.count(level)).map(|s| unipotent(ring, self.r(), &y[s * f..(s + 1) * f])).collect();
        SdcElement { level, values }
    }

    fn to_coords(&self, ring: &TestRing, e: &SdcElement) -> Coords {
        e.values.iter().flat_map(|m| nilpotent_part(ring, m)).collect()
    }

    /// `∂^i: E^n -> E^{n+1}`; `∂^0` transports along the front edge.
    fn coface(&self, i: usize, e: &SdcElement) -> Result<SdcElement> {
        let n = e.level;
        if n >= 3 {
            return Err(Error::Dimension("coface out of level 3".into()));
        }
        if i > n + 1 {
            return Err(Error::Dimension(format!("coface ∂^{i} on level {n}")));
        }
        let values = (0..self.x.count(n + 1))
            .map(|s| {
                let v = &e.values[self.x.face(n + 1, s, i)];
                if i == 0 {
                    let t = self.x.edge(n + 1, s, 0, 1);
                    v.conj_k(self.sys.transport(t), self.sys.transport_inverse(t))
                } else {
                    v.clone()
                }
            })
            .collect();
        Ok(SdcElement { level: n + 1, values })
    }

    fn mul(&self, ring: &TestRing, e: &SdcElement, f: &SdcElement) -> SdcElement {
        SdcElement { level: e.level, values: e.values.iter().zip(&f.values).map(|(a, b)| a.mul(ring, b)).collect() }
    }

    fn inverse(&self, ring: &TestRing, e: &SdcElement) -> Result<SdcElement> {
        Ok(SdcElement { level: e.level, values: e.values.iter().map(|a| a.inverse(ring)).collect::<Result<_>>()? })
    }

    /// `e * f = (∂^{m+n} ... ∂^{m+1} e) · (∂^0)^m f`.
    fn aw(&self, ring: &TestRing, e: &SdcElement, f: &SdcElement) -> Result<SdcElement> {
        let (m, n) = (e.level, f.level);
        if m + n > 3 {
            return Err(Error::Dimension(format!("AW product into level {} > 3", m + n)));
        }
        let mut left = e.clone();
        for i in m + 1..=m + n {
            left = self.coface(i, &left)?;
        }
        let mut right = f.clone();
        for _ in 0..m {
            right = self.coface(0, &right)?;
        }
        Ok(self.mul(ring, &left, &right))
    }

    /// `c = (ω * ω) · (∂^1 ω)^{-1}`.
    fn mc_defect(&self, ring: &TestRing, w: &SdcElement) -> Result<SdcElement> {
        let sq = self.aw(ring, w, w)?;
        let d1 = self.coface(1, w)?;
        Ok(self.mul(ring, &sq, &self.inverse(ring, &d1)?))
    }

    /// `ω ↦ ∂^1(g) · ω · ∂^0(g)^{-1}` for `g` at level 0.
    fn gauge(&self, ring: &TestRing, g: &SdcElement, w: &SdcElement) -> Result<SdcElement> {
        let d1 = self.coface(1, g)?;
        let d0 = self.coface(0, g)?;
        Ok(self.mul(ring, &self.mul(ring, &d1, w), &self.inverse(ring, &d0)?))
    }
}

impl Sdc {
    fn core(&self) -> Core<'_> {
        Core { x: &self.x, sys: &self.sys }
    }

    pub fn ring(&self) -> &TestRing {
        &self.ring
    }

    pub fn complex(&self) -> &DeltaComplex {
        &self.x
    }

    pub fn system(&self) -> &LocalSystem {
        &self.sys
    }

    pub fn rank(&self) -> usize {
        self.sys.rank()
    }

    pub fn identity(&self, level: usize) -> SdcElement {
        self.core().identity(&self.ring, level)
    }

    /// Validates shape and that every value reduces to the identity.
    pub fn element(&self, level: usize, values: Vec<AMat>) -> Result<SdcElement> {
        if level > 3 || values.len() != self.x.count(level) {
            return Err(Error::Dimension("SDC element has the wrong number of cells".into()));
        }
        let id = Matrix::identity(self.ring.field(), self.rank());
        for v in &values {
            if v.rank() != self.rank() || v.residue(self.ring.field()) != id {
                return Err(Error::Ring("SDC values must reduce to the identity".into()));
            }
        }
        Ok(SdcElement { level, values })
    }

    /// `1 + x` for a cochain `x` of `C^n ⊗ m_A` in DGLA coordinates.
    pub fn unit(&self, level: usize, x: &[RVec]) -> SdcElement {
        self.core().from_coords(&self.ring, level, x)
    }

    /// Inverse of [`Sdc::unit`].
    pub fn nilpotent(&self, e: &SdcElement) -> Coords {
        self.core().to_coords(&self.ring, e)
    }

    /// Cell-wise matrix exponential of a cochain.
    pub fn exp(&self, level: usize, x: &[RVec]) -> Result<SdcElement> {
        let r = self.rank();
        let f = r * r;
        let values = (0..self.x.count(level))
            .map(|s| mat_exp(&self.ring, &AMat::from_fibre(r, &x[s * f..(s + 1) * f])))
            .collect::<Result<_>>()?;
        Ok(SdcElement { level, values })
    }

    pub fn log(&self, e: &SdcElement) -> Result<Coords> {
        let mut out = Vec::new();
        for v in &e.values {
            out.extend(mat_log(&self.ring, v)?.to_fibre());
        }
        Ok(out)
    }

    pub fn coface(&self, i: usize, e: &SdcElement) -> Result<SdcElement> {
        self.core().coface(i, e)
    }

    pub fn mul(&self, e: &SdcElement, f: &SdcElement) -> Result<SdcElement> {
        if e.level != f.level {
            return Err(Error::Dimension("group law needs equal levels".into()));
        }
        Ok(self.core().mul(&self.ring, e, f))
    }

    pub fn inverse(&self, e: &SdcElement) -> Result<SdcElement> {
        self.core().inverse(&self.ring, e)
    }

    pub fn aw_product(&self, e: &SdcElement, f: &SdcElement) -> Result<SdcElement> {
        self.core().aw(&self.ring, e, f)
    }

    pub fn gauge(&self, g: &SdcElement, w: &SdcElement) -> Result<SdcElement> {
        if g.level != 0 || w.level != 1 {
            return Err(Error::Dimension("gauge acts by level 0 on level 1".into()));
        }
        self.core().gauge(&self.ring, g, w)
    }

    /// `|E^n(A)|` over a finite field.
    pub fn level_order(&self, n: usize) -> Option<u128> {
        let q = self.ring.field().order()? as u128;
        let e = (self.ring.dim() - 1) * self.rank() * self.rank() * self.x.count(n);
        q.checked_pow(e as u32)
    }

    /// Whether `∂^{n+2}` would be needed: the cocycle check on a defect in the kernel of
    /// `A_s -> A_{s-1}`. Returns `None` on complexes without 3-cells, where it is vacuous.
    pub fn defect_cocycle_check(&self, c: &SdcElement, s: usize) -> Result<Option<bool>> {
        let z = self.nilpotent(c);
        if z.iter().any(|a| a[..s].iter().any(|x| !x.is_zero()) || a[s + 1..].iter().any(|x| !x.is_zero())) {
            return Err(Error::Precondition("defect does not lie in the kernel coordinate".into()));
        }
        if self.x.count(3) == 0 {
            return Ok(None);
        }
        let ad = self.sys.adjoint(&self.x);
        let d2 = differential_matrix(&self.x, &ad, 2);
        Ok(Some(d2.mul_vec(&orbits::coefficient(&z, s)).iter().all(Scalar::is_zero)))
    }
}

/// `(is MC, defect)`; the defect is the identity exactly on MC elements.
pub fn sdc_mc(sdc: &Sdc, w: &SdcElement) -> Result<(bool, SdcElement)> {
    if w.level != 1 {
        return Err(Error::Dimension("MC elements live at level 1".into()));
    }
    let c = sdc.core().mc_defect(&sdc.ring, w)?;
    Ok((c == sdc.identity(2), c))
}

pub fn aw_product(sdc: &Sdc, e: &SdcElement, f: &SdcElement) -> Result<SdcElement> {
    sdc.aw_product(e, f)
}

/// The SDC Maurer-Cartan problem in unit coordinates `ω = 1 + y`.
#[derive(Clone, Debug)]
pub struct SdcProblem {
    x: DeltaComplex,
    sys: LocalSystem,
}

impl SdcProblem {
    pub fn new(x: &DeltaComplex, sys: &LocalSystem) -> SdcProblem {
        SdcProblem { x: x.clone(), sys: sys.clone() }
    }

    fn core(&self) -> Core<'_> {
        Core { x: &self.x, sys: &self.sys }
    }
}

impl DeformationProblem for SdcProblem {
    fn field(&self) -> Field {
        self.sys.field()
    }
    fn point_len(&self) -> usize {
        self.sys.rank() * self.sys.rank() * self.x.count(1)
    }
    fn group_len(&self) -> usize {
        self.sys.rank() * self.sys.rank() * self.x.count(0)
    }
    fn defect(&self, ring: &TestRing, y: &[RVec]) -> Result<Coords> {
        let c = self.core();
        let w = c.from_coords(ring, 1, y);
        Ok(c.to_coords(ring, &c.mc_defect(ring, &w)?))
    }
    fn mul(&self, ring: &TestRing, g: &[RVec], h: &[RVec]) -> Result<Coords> {
        let c = self.core();
        Ok(c.to_coords(ring, &c.mul(ring, &c.from_coords(ring, 0, g), &c.from_coords(ring, 0, h))))
    }
    fn inv(&self, ring: &TestRing, g: &[RVec]) -> Result<Coords> {
        let c = self.core();
        Ok(c.to_coords(ring, &c.inverse(ring, &c.from_coords(ring, 0, g))?))
    }
    fn act(&self, ring: &TestRing, g: &[RVec], y: &[RVec]) -> Result<Coords> {
        let c = self.core();
        Ok(c.to_coords(ring, &c.gauge(ring, &c.from_coords(ring, 0, g), &c.from_coords(ring, 1, y))?))
    }
    fn power(&self, ring: &TestRing, g: &[RVec], e: &Scalar) -> Result<Coords> {
        if ring.field().is_finite() {
            return orbits::integer_power(self, ring, g, e);
        }
        let c = self.core();
        let elem = c.from_coords(ring, 0, g);
        let mut values = Vec::with_capacity(elem.values.len());
        for v in &elem.values {
            values.push(mat_exp(ring, &mat_log(ring, v)?.scale(e))?);
        }
        Ok(c.to_coords(ring, &SdcElement { level: 0, values }))
    }
    fn affine_action(&self) -> bool {
        true
    }
}

/// Number of SDC Maurer-Cartan classes modulo gauge over a finite ring.
pub fn sdc_classes(x: &DeltaComplex, sys: &LocalSystem, ring: &TestRing, budget: u64) -> Result<u128> {
    orbits::count_orbits(&SdcProblem::new(x, sys), ring, budget)
}

/// Comparison of DGLA deformation classes with SDC classes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpLogReport {
    pub dgla_classes: u128,
    pub sdc_classes: u128,
    /// Checks of the structure maps on sampled elements: `ω ↦ 1 + ω` carries MC to MC and
    /// `g ↦ exp(g)` intertwines the two gauge actions.
    pub samples_checked: usize,
    pub samples_agree: bool,
}

impl ExpLogReport {
    pub fn matched(&self) -> bool {
        self.dgla_classes == self.sdc_classes && self.samples_agree
    }
}

/// Compares the two sides by counting classes and checking the comparison maps on samples.
pub fn exp_log_compare(
    x: &DeltaComplex,
    sys: &LocalSystem,
    ring: &TestRing,
    budget: u64,
    samples: usize,
    seed: u64,
) -> Result<ExpLogReport> {
    use rand::{Rng, SeedableRng};
    let d = dgla_from_complex(x, sys)?;
    let dgla_classes = orbits::count_orbits(&d, ring, budget)?;
    let sdc_classes = sdc_classes(x, sys, ring, budget)?;
    let sdc = sdc_from_complex(x, sys, ring)?;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut agree = true;
    let mut checked = 0;
    let field = ring.field();
    let random_m = |rng: &mut rand_chacha::ChaCha8Rng, n: usize| -> Coords {
        (0..n)
            .map(|_| {
                let mut a = ring.zero();
                for c in a.iter_mut().skip(1) {
                    *c = random_scalar(field, rng.gen());
                }
                a
            })
            .collect()
    };
    let mut attempts = 0;
    while checked < samples && attempts < samples * 50 {
        attempts += 1;
        let w = mc_sample(&d, ring, &mut rng)?;
        let g = random_m(&mut rng, d.dim(0));
        let unit = sdc.unit(1, &w);
        let (ok, _) = sdc_mc(&sdc, &unit)?;
        let lie = d.gauge_act(ring, &g, &w)?;
        let grp = sdc.gauge(&sdc.exp(0, &g)?, &unit)?;
        agree &= ok && sdc.nilpotent(&grp) == lie;
        checked += 1;
    }
    Ok(ExpLogReport { dgla_classes, sdc_classes, samples_checked: checked, samples_agree: agree })
}

pub(crate) fn random_scalar(field: Field, raw: u64) -> Scalar {
    match field.order() {
        Some(q) => field.element(raw % q),
        None => field.from_i64((raw % 7) as i64 - 3),
    }
}

/// A Maurer-Cartan element obtained by lifting random cocycles order by order; an obstructed
/// branch is abandoned and retried, falling back to `0`.
pub fn mc_sample<R: rand::Rng>(d: &Dgla, ring: &TestRing, rng: &mut R) -> Result<Coords> {
    let t = orbits::tangent(d)?;
    let field = ring.field();
    let levels = ring.levels();
    let n = d.dim(1);
    'attempt: for _ in 0..20 {
        let mut y = orbits::zeros(&levels[0], n);
        for s in 1..levels.len() {
            let rs = &levels[s];
            let padded = orbits::pad(&y, s + 1, field);
            let obs = orbits::coefficient(&d.mc_defect(rs, &padded), s);
            if !t.obstruction.project(&obs).iter().all(Scalar::is_zero) {
                continue 'attempt;
            }
            let neg: Vec<Scalar> = obs.iter().map(|c| -c).collect();
            let mut z = t.obstruction.contract(&neg);
            for rep in t.h1.cocycles.basis() {
                let c = random_scalar(field, rng.gen());
                for (zi, ri) in z.iter_mut().zip(rep) {
                    crate::linalg::scalar::fma(zi, &c, ri);
                }
            }
            y = orbits::add(&padded, &orbits::embed(&z, s, s + 1, field));
        }
        return Ok(y);
    }
    Ok(orbits::zeros(ring, n))
}

/// The constant SDC `exp(g ⊗ m_A)` of a Lie algebra: every coface is the identity and the
/// AW product is the group law.
#[derive(Clone, Debug)]
pub struct LieSdc {
    lie: Dgla,
    ring: TestRing,
}

/// Level-0 Lie algebra structure of `gl_r` (matrix units column-major).
pub fn gl(field: Field, r: usize) -> Dgla {
    let f = r * r;
    let mut d = Dgla::zero(field, [f, 0, 0, 0]);
    for a in 0..f {
        for b in 0..f {
            let (i, j) = (a % r, a / r);
            let (k, l) = (b % r, b / r);
            let mut v = vec![field.zero(); f];
            if j == k {
                v[i + l * r] = &v[i + l * r] + &field.one();
            }
            if l == i {
                v[k + j * r] = &v[k + j * r] - &field.one();
            }
            d.set_bracket(0, a, 0, b, &v).expect("in range");
        }
    }
    d
}

pub fn functor_e_lie(lie: &Dgla, ring: &TestRing) -> Result<LieSdc> {
    lie.check_ring(ring)?;
    if lie.dims()[1..].iter().any(|&n| n != 0) {
        return Err(Error::Dimension("expected a Lie algebra concentrated in degree 0".into()));
    }
    Ok(LieSdc { lie: lie.clone(), ring: ring.clone() })
}

impl LieSdc {
    pub fn coface(&self, _i: usize, e: &[RVec]) -> Coords {
        e.to_vec()
    }

    /// `e * f = e · f` (BCH in logarithmic coordinates).
    pub fn aw_product(&self, e: &[RVec], f: &[RVec]) -> Result<Coords> {
        self.lie.bch(&self.ring, e, f)
    }

    pub fn is_mc(&self, w: &[RVec]) -> Result<bool> {
        Ok(self.aw_product(w, w)? == w)
    }
}
