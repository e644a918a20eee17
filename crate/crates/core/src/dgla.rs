//! Differential graded Lie algebras in degrees 0..3, Maurer-Cartan elements over test rings,
//! the gauge action and deformation classes.

use crate::amat::AMat;
use crate::artin::{self, RVec, TestRing};
use crate::complexes::cochain::differential_matrix;
use crate::complexes::cohomology::{cohomology, CohomologyData};
use crate::complexes::delta::DeltaComplex;
use crate::complexes::local_system::LocalSystem;
use crate::error::{Error, Result};
use crate::linalg::{Field, Matrix, Scalar};
use crate::orbits::{self, Coords, DeformationProblem};

/// Sparse vector: `(basis index, coefficient)`.
pub type Sparse = Vec<(usize, Scalar)>;

fn sparse_of(v: &[Scalar]) -> Sparse {
    v.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (i, c.clone())).collect()
}

fn sign(p: usize, q: usize) -> bool {
    // true when (-1)^{pq} = -1
    (p * q) % 2 == 1
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dgla {
    field: Field,
    dims: [usize; 4],
    /// `d[n]: L^n -> L^{n+1}` for `n = 0, 1, 2`.
    d: Vec<Matrix>,
    /// `brackets[p][q][a][b] = [e^p_a, e^q_b]` in `L^{p+q}`, for `p + q <= 3`.
    brackets: Vec<Vec<Vec<Vec<Sparse>>>>,
    /// `½[e_a, e_a]` for `a` in `L^1`, stored separately so the Maurer-Cartan map makes
    /// sense in characteristic 2.
    squares: Vec<Sparse>,
}

impl Dgla {
    /// Zero DGLA with the given dimensions; fill with [`Dgla::set_differential`] and
    /// [`Dgla::set_bracket`], then call [`Dgla::validate`].
    pub fn zero(field: Field, dims: [usize; 4]) -> Dgla {
        let d = (0..3).map(|n| Matrix::zeros(field, dims[n + 1], dims[n])).collect();
        let brackets = (0..4)
            .map(|p| {
                (0..4)
                    .map(|q| if p + q <= 3 { vec![vec![Vec::new(); dims[q]]; dims[p]] } else { Vec::new() })
                    .collect()
            })
            .collect();
        Dgla { field, dims, d, brackets, squares: vec![Vec::new(); dims[1]] }
    }

    pub fn set_differential(&mut self, n: usize, m: Matrix) -> Result<()> {
        if n > 2 || m.rows() != self.dims[n + 1] || m.cols() != self.dims[n] {
            return Err(Error::Dimension(format!("differential out of degree {n} has the wrong shape")));
        }
        self.d[n] = m;
        Ok(())
    }

    /// Sets `[e^p_a, e^q_b] = value` together with the graded-antisymmetric partner.
    pub fn set_bracket(&mut self, p: usize, a: usize, q: usize, b: usize, value: &[Scalar]) -> Result<()> {
        if p + q > 3 || a >= self.dims[p] || b >= self.dims[q] || value.len() != self.dims[p + q] {
            return Err(Error::Dimension("bracket entry out of range".into()));
        }
        let v = sparse_of(value);
        let neg: Sparse = v.iter().map(|(i, c)| (*i, -c)).collect();
        let partner = if sign(p, q) { v.clone() } else { neg };
        self.brackets[p][q][a][b] = v;
        self.brackets[q][p][b][a] = partner;
        if p == 1 && q == 1 && a == b {
            if self.field.characteristic() == 2 {
                return Err(Error::Characteristic {
                    p: 2,
                    what: "set the square of a degree-1 element with set_square".into(),
                });
            }
            let half = self.field.inv_int(2)?;
            self.squares[a] = self.brackets[1][1][a][a].iter().map(|(i, c)| (*i, c * &half)).collect();
        }
        Ok(())
    }

    /// Sets `½[e_a, e_a]` for a degree-1 basis element directly.
    pub fn set_square(&mut self, a: usize, value: &[Scalar]) -> Result<()> {
        if a >= self.dims[1] || value.len() != self.dims[2] {
            return Err(Error::Dimension("square entry out of range".into()));
        }
        self.squares[a] = sparse_of(value);
        Ok(())
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dims(&self) -> [usize; 4] {
        self.dims
    }

    pub fn dim(&self, n: usize) -> usize {
        self.dims.get(n).copied().unwrap_or(0)
    }

    pub fn differential(&self, n: usize) -> Matrix {
        if n <= 2 {
            self.d[n].clone()
        } else {
            Matrix::zeros(self.field, 0, self.dims[3])
        }
    }

    /// Matrix of `[ -, e ]` or similar: bracket value of two basis vectors as a dense vector.
    pub fn bracket_basis(&self, p: usize, a: usize, q: usize, b: usize) -> Vec<Scalar> {
        let mut out = vec![self.field.zero(); self.dims[p + q]];
        for (i, c) in &self.brackets[p][q][a][b] {
            out[*i] = c.clone();
        }
        out
    }

    pub fn square_basis(&self, a: usize) -> Vec<Scalar> {
        let mut out = vec![self.field.zero(); self.dims[2]];
        for (i, c) in &self.squares[a] {
            out[*i] = c.clone();
        }
        out
    }

    /// Checks `d² = 0`, the Leibniz rule, Jacobi and consistency of the squares on basis elements.
    pub fn validate(&self) -> Result<()> {
        let f = self.field;
        for n in 0..2 {
            if !self.d[n + 1].mul(&self.d[n]).is_zero() {
                return Err(Error::Dimension(format!("d o d != 0 out of degree {n}")));
            }
        }
        let k = TestRing::residue(f);
        let basis = |n: usize, a: usize| -> Coords {
            let mut v = orbits::zeros(&k, self.dims[n]);
            v[a] = k.one();
            v
        };
        for p in 0..=3 {
            for q in 0..=3 - p {
                for a in 0..self.dims[p] {
                    for b in 0..self.dims[q] {
                        if p + q <= 2 {
                            let (x, y) = (basis(p, a), basis(q, b));
                            let lhs = self.apply_d(p + q, &self.bracket(&k, p, &x, q, &y));
                            let r1 = self.bracket(&k, p + 1, &self.apply_d(p, &x), q, &y);
                            let r2 = self.bracket(&k, p, &x, q + 1, &self.apply_d(q, &y));
                            let rhs = if p % 2 == 0 { orbits::add(&r1, &r2) } else { orbits::sub(&r1, &r2) };
                            if lhs != rhs {
                                return Err(Error::Dimension(format!("Leibniz fails on ({p},{a}), ({q},{b})")));
                            }
                        }
                    }
                }
            }
        }
        // Jacobi: [x,[y,z]] = [[x,y],z] + (-1)^{pq} [y,[x,z]]
        for p in 0..=3 {
            for q in 0..=3 - p {
                for r in 0..=3 - p - q {
                    for a in 0..self.dims[p] {
                        for b in 0..self.dims[q] {
                            for c in 0..self.dims[r] {
                                let (x, y, z) = (basis(p, a), basis(q, b), basis(r, c));
                                let lhs = self.bracket(&k, p, &x, q + r, &self.bracket(&k, q, &y, r, &z));
                                let t1 = self.bracket(&k, p + q, &self.bracket(&k, p, &x, q, &y), r, &z);
                                let t2 = self.bracket(&k, q, &y, p + r, &self.bracket(&k, p, &x, r, &z));
                                let rhs = if sign(p, q) { orbits::sub(&t1, &t2) } else { orbits::add(&t1, &t2) };
                                if lhs != rhs {
                                    return Err(Error::Dimension("Jacobi identity fails on basis elements".into()));
                                }
                            }
                        }
                    }
                }
            }
        }
        if f.characteristic() != 2 {
            let half = f.inv_int(2)?;
            for a in 0..self.dims[1] {
                let expect: Vec<Scalar> = self.bracket_basis(1, a, 1, a).iter().map(|c| c * &half).collect();
                if expect != self.square_basis(a) {
                    return Err(Error::Dimension(format!("stored square of e_{a} is not half its bracket")));
                }
            }
        }
        Ok(())
    }

    /// `d` on `L^n ⊗ A`.
    pub fn apply_d(&self, n: usize, x: &[RVec]) -> Coords {
        if n >= 3 {
            return Vec::new();
        }
        apply_k(&self.d[n], x)
    }

    /// `[x, y]` for `x ∈ L^p ⊗ A`, `y ∈ L^q ⊗ A`.
    pub fn bracket(&self, ring: &TestRing, p: usize, x: &[RVec], q: usize, y: &[RVec]) -> Coords {
        let mut out = orbits::zeros(ring, self.dim(p + q));
        if p + q > 3 {
            return out;
        }
        let ys: Vec<usize> = (0..y.len()).filter(|&b| !artin::is_zero(&y[b])).collect();
        for (a, xa) in x.iter().enumerate() {
            if artin::is_zero(xa) {
                continue;
            }
            for &b in &ys {
                let entry = &self.brackets[p][q][a][b];
                if entry.is_empty() {
                    continue;
                }
                let prod = ring.mul(xa, &y[b]);
                if artin::is_zero(&prod) {
                    continue;
                }
                for (i, c) in entry {
                    for (o, v) in out[*i].iter_mut().zip(&prod) {
                        crate::linalg::scalar::fma(o, c, v);
                    }
                }
            }
        }
        out
    }

    /// `½[ω, ω]` through the stored squares.
    pub fn half_square(&self, ring: &TestRing, w: &[RVec]) -> Coords {
        let mut out = orbits::zeros(ring, self.dims[2]);
        let nz: Vec<usize> = (0..w.len()).filter(|&a| !artin::is_zero(&w[a])).collect();
        for (ia, &a) in nz.iter().enumerate() {
            let sq = ring.mul(&w[a], &w[a]);
            if !artin::is_zero(&sq) {
                for (i, c) in &self.squares[a] {
                    for (o, v) in out[*i].iter_mut().zip(&sq) {
                        crate::linalg::scalar::fma(o, c, v);
                    }
                }
            }
            for &b in &nz[ia + 1..] {
                let entry = &self.brackets[1][1][a][b];
                if entry.is_empty() {
                    continue;
                }
                let prod = ring.mul(&w[a], &w[b]);
                if artin::is_zero(&prod) {
                    continue;
                }
                for (i, c) in entry {
                    for (o, v) in out[*i].iter_mut().zip(&prod) {
                        crate::linalg::scalar::fma(o, c, v);
                    }
                }
            }
        }
        out
    }

    /// `dω + ½[ω, ω]`.
    pub fn mc_defect(&self, ring: &TestRing, w: &[RVec]) -> Coords {
        orbits::add(&self.apply_d(1, w), &self.half_square(ring, w))
    }

    /// Refuses rings whose nilpotency order makes the exponential series undefined.
    pub fn check_ring(&self, ring: &TestRing) -> Result<()> {
        if ring.field() != self.field {
            return Err(Error::Ring("test ring and DGLA are over different fields".into()));
        }
        let n = ring.exact_nilpotency();
        let p = self.field.characteristic();
        if p != 0 && n > p {
            return Err(Error::Characteristic {
                p,
                what: format!("gauge exponentials need ({}-1)! invertible", n),
            });
        }
        Ok(())
    }

    /// `exp(g) · ω = ω + Σ_{n≥0} ad_g^n([g, ω] - dg) / (n+1)!`.
    pub fn gauge_act(&self, ring: &TestRing, g: &[RVec], w: &[RVec]) -> Result<Coords> {
        self.check_ring(ring)?;
        let dg = self.apply_d(0, g);
        let mut term = orbits::sub(&self.bracket(ring, 0, g, 1, w), &dg);
        let mut out = w.to_vec();
        let mut n: u64 = 0;
        while !term.iter().all(|a| artin::is_zero(a)) {
            let fact = factorial(self.field, n + 1)?;
            let scaled: Coords = term.iter().map(|a| artin::scale(a, &fact)).collect();
            out = orbits::add(&out, &scaled);
            term = self.bracket(ring, 0, g, 1, &term);
            n += 1;
        }
        Ok(out)
    }

    /// Baker-Campbell-Hausdorff product on `L^0 ⊗ m_A`, exact when `m^5 = 0`.
    pub fn bch(&self, ring: &TestRing, x: &[RVec], y: &[RVec]) -> Result<Coords> {
        let n = ring.exact_nilpotency();
        if n > 5 {
            return Err(Error::Precondition(format!("BCH is truncated at degree 4 but m^{} != 0", n - 1)));
        }
        let br = |a: &[RVec], b: &[RVec]| self.bracket(ring, 0, a, 0, b);
        let mut out = orbits::add(x, y);
        let xy = br(x, y);
        if xy.iter().all(|a| artin::is_zero(a)) {
            return Ok(out);
        }
        let half = self.field.inv_int(2).map_err(|_| Error::Characteristic { p: 2, what: "BCH needs 1/2".into() })?;
        out = orbits::add(&out, &scale(&xy, &half));
        if n <= 3 {
            return Ok(out);
        }
        let twelfth = self.field.inv_int(12).map_err(|_| Error::Characteristic {
            p: self.field.characteristic(),
            what: "BCH needs 1/12".into(),
        })?;
        let x_xy = br(x, &xy);
        let y_yx = br(y, &scale(&xy, &-self.field.one()));
        out = orbits::add(&out, &scale(&orbits::add(&x_xy, &y_yx), &twelfth));
        if n <= 4 {
            return Ok(out);
        }
        let t24 = self.field.inv_int(24).map_err(|_| Error::Characteristic {
            p: self.field.characteristic(),
            what: "BCH needs 1/24".into(),
        })?;
        let y_x_xy = br(y, &x_xy);
        out = orbits::sub(&out, &scale(&y_x_xy, &t24));
        Ok(out)
    }

    /// Whether `ω1` and `ω2` are gauge equivalent, solving order by order; any base field.
    pub fn is_gauge_equivalent(&self, ring: &TestRing, w1: &[RVec], w2: &[RVec]) -> Result<Option<Coords>> {
        orbits::equivalence_witness(self, ring, w1, w2)
    }
}

fn scale(v: &[RVec], c: &Scalar) -> Coords {
    v.iter().map(|a| artin::scale(a, c)).collect()
}

fn factorial(field: Field, n: u64) -> Result<Scalar> {
    let mut f: u64 = 1;
    for i in 2..=n {
        f = f.checked_mul(i).ok_or_else(|| Error::Precondition("factorial overflow".into()))?;
    }
    field.inv_int(f).map_err(|_| Error::Characteristic { p: field.characteristic(), what: format!("{n}! is not invertible") })
}

pub(crate) fn apply_k(m: &Matrix, x: &[RVec]) -> Coords {
    let len = x.first().map_or(1, Vec::len);
    let f = m.field();
    let mut out = vec![vec![f.zero(); len]; m.rows()];
    for j in 0..m.cols() {
        if artin::is_zero(&x[j]) {
            continue;
        }
        for i in 0..m.rows() {
            let c = &m[(i, j)];
            if c.is_zero() {
                continue;
            }
            for (o, v) in out[i].iter_mut().zip(&x[j]) {
                crate::linalg::scalar::fma(o, c, v);
            }
        }
    }
    out
}

impl DeformationProblem for Dgla {
    fn field(&self) -> Field {
        self.field
    }
    fn point_len(&self) -> usize {
        self.dims[1]
    }
    fn group_len(&self) -> usize {
        self.dims[0]
    }
    fn check_ring(&self, ring: &TestRing) -> Result<()> {
        Dgla::check_ring(self, ring)?;
        if ring.exact_nilpotency() > 5 {
            return Err(Error::Precondition("gauge group products are implemented for m^5 = 0".into()));
        }
        Ok(())
    }
    fn defect(&self, ring: &TestRing, y: &[RVec]) -> Result<Coords> {
        Ok(self.mc_defect(ring, y))
    }
    fn mul(&self, ring: &TestRing, g: &[RVec], h: &[RVec]) -> Result<Coords> {
        self.bch(ring, g, h)
    }
    fn inv(&self, _ring: &TestRing, g: &[RVec]) -> Result<Coords> {
        Ok(g.iter().map(|a| artin::neg(a)).collect())
    }
    fn act(&self, ring: &TestRing, g: &[RVec], y: &[RVec]) -> Result<Coords> {
        self.gauge_act(ring, g, y)
    }
    fn power(&self, _ring: &TestRing, g: &[RVec], c: &Scalar) -> Result<Coords> {
        Ok(scale(g, c))
    }
    fn affine_action(&self) -> bool {
        true
    }
}

/// The cochain DGLA `C^•(X, End L)`.
///
/// Degree-`n` basis: `(cell s, matrix unit u)` at index `s * r² + u`, units column-major.
pub fn dgla_from_complex(x: &DeltaComplex, sys: &LocalSystem) -> Result<Dgla> {
    let field = sys.field();
    let r = sys.rank();
    let f = r * r;
    let ad = sys.adjoint(x);
    let dims = [f * x.count(0), f * x.count(1), f * x.count(2), f * x.count(3)];
    let mut dg = Dgla::zero(field, dims);
    for n in 0..3 {
        dg.d[n] = differential_matrix(x, &ad, n);
    }
    let units: Vec<Matrix> = (0..f)
        .map(|u| {
            let mut m = Matrix::zeros(field, r, r);
            m[(u % r, u / r)] = field.one();
            m
        })
        .collect();
    // cup[p][q][a][b] accumulated per simplex, then antisymmetrized.
    let mut cup: Vec<Vec<Vec<Vec<Vec<Scalar>>>>> = vec![vec![Vec::new(); 4]; 4];
    for p in 0..=3 {
        for q in 0..=3 - p {
            cup[p][q] = vec![vec![Vec::new(); dims[q]]; dims[p]];
        }
    }
    for n in 0..=3 {
        for s in 0..x.count(n) {
            for p in 0..=n {
                let q = n - p;
                let front = x.front(n, s, p);
                let back = x.back(n, s, q);
                let (t, ti) = if p > 0 {
                    let e = x.edge(n, s, 0, p);
                    (sys.transport(e).clone(), sys.transport_inverse(e).clone())
                } else {
                    (Matrix::identity(field, r), Matrix::identity(field, r))
                };
                for (u, eu) in units.iter().enumerate() {
                    for (v, ev) in units.iter().enumerate() {
                        let val = eu.mul(&t.mul(ev).mul(&ti));
                        if val.is_zero() {
                            continue;
                        }
                        let entry = &mut cup[p][q][front * f + u][back * f + v];
                        if entry.is_empty() {
                            *entry = vec![field.zero(); dims[n]];
                        }
                        for j in 0..r {
                            for i in 0..r {
                                let c = &val[(i, j)];
                                if !c.is_zero() {
                                    let k = s * f + i + j * r;
                                    entry[k] = &entry[k] + c;
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    let dense = |v: &Vec<Scalar>, len: usize| if v.is_empty() { vec![field.zero(); len] } else { v.clone() };
    for p in 0..=3 {
        for q in 0..=3 - p {
            for a in 0..dims[p] {
                for b in 0..dims[q] {
                    let ab = dense(&cup[p][q][a][b], dims[p + q]);
                    let ba = dense(&cup[q][p][b][a], dims[p + q]);
                    let val: Vec<Scalar> = if sign(p, q) {
                        ab.iter().zip(&ba).map(|(x, y)| x + y).collect()
                    } else {
                        ab.iter().zip(&ba).map(|(x, y)| x - y).collect()
                    };
                    dg.brackets[p][q][a][b] = sparse_of(&val);
                }
            }
        }
    }
    for a in 0..dims[1] {
        dg.squares[a] = sparse_of(&dense(&cup[1][1][a][a], dims[2]));
    }
    Ok(dg)
}

/// An element of `L^1 ⊗ m_A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct McElement {
    pub ring: TestRing,
    pub omega: Coords,
}

impl McElement {
    pub fn new(d: &Dgla, ring: &TestRing, omega: Coords) -> Result<McElement> {
        if omega.len() != d.dim(1) || omega.iter().any(|a| a.len() != ring.dim()) {
            return Err(Error::Dimension("MC element has the wrong shape".into()));
        }
        if omega.iter().any(|a| !ring.is_in_maximal_ideal(a)) {
            return Err(Error::Ring("MC coefficients must lie in the maximal ideal".into()));
        }
        Ok(McElement { ring: ring.clone(), omega })
    }

    pub fn zero(d: &Dgla, ring: &TestRing) -> McElement {
        McElement { ring: ring.clone(), omega: orbits::zeros(ring, d.dim(1)) }
    }

    /// Entries of the matrix on a given cell (cochain DGLAs only).
    pub fn matrix_at(&self, r: usize, cell: usize) -> AMat {
        AMat::from_fibre(r, &self.omega[cell * r * r..(cell + 1) * r * r])
    }
}

/// `(is MC, defect)`.
pub fn is_mc(d: &Dgla, w: &McElement) -> (bool, Coords) {
    let defect = d.mc_defect(&w.ring, &w.omega);
    (defect.iter().all(|a| artin::is_zero(a)), defect)
}

pub fn gauge_act(d: &Dgla, g: &[RVec], w: &McElement) -> Result<McElement> {
    Ok(McElement { ring: w.ring.clone(), omega: d.gauge_act(&w.ring, g, &w.omega)? })
}

#[derive(Clone, Debug)]
pub struct DefClasses {
    pub count: u128,
    /// Lexicographically least orbit members, when enumerated.
    pub representatives: Option<Vec<McElement>>,
}

/// Number of gauge classes of MC elements over a finite test ring.
pub fn def_classes(d: &Dgla, ring: &TestRing, budget: u64) -> Result<DefClasses> {
    Ok(DefClasses { count: orbits::count_orbits(d, ring, budget)?, representatives: None })
}

/// Exhaustive enumeration of classes, with representatives.
pub fn def_class_representatives(d: &Dgla, ring: &TestRing, budget: u64) -> Result<DefClasses> {
    let e = orbits::enumerate_orbits(d, ring, budget)?;
    let reps = e.representatives.into_iter().map(|omega| McElement { ring: ring.clone(), omega }).collect();
    Ok(DefClasses { count: e.count, representatives: Some(reps) })
}

/// Cohomology with zero differential and the bracket induced on representatives.
#[derive(Clone, Debug)]
pub struct FormalDgla {
    pub dgla: Dgla,
    pub cohomology: Vec<CohomologyData>,
}

/// The formal DGLA of `(H^*(X, End L), 0)` from harmonic representatives.
pub fn formal_dgla(x: &DeltaComplex, sys: &LocalSystem) -> Result<FormalDgla> {
    let full = dgla_from_complex(x, sys)?;
    let ad = sys.adjoint(x);
    let hs = (0..=2).map(|n| cohomology(x, &ad, n)).collect::<Result<Vec<_>>>()?;
    Ok(FormalDgla { dgla: formal_from(&full, &hs)?, cohomology: hs })
}

/// Formal DGLA on given splittings of a DGLA's cohomology in degrees 0..2.
pub fn formal_from(full: &Dgla, hs: &[CohomologyData]) -> Result<Dgla> {
    let field = full.field();
    let dims = [hs[0].dim(), hs[1].dim(), hs[2].dim(), 0];
    let mut out = Dgla::zero(field, dims);
    let k = TestRing::residue(field);
    let lift = |n: usize, a: usize| -> Coords { hs[n].representatives[a].iter().map(|c| k.scalar(c)).collect() };
    for p in 0..=2 {
        for q in 0..=2 - p {
            for a in 0..dims[p] {
                for b in 0..dims[q] {
                    let br = full.bracket(&k, p, &lift(p, a), q, &lift(q, b));
                    let v = orbits::coefficient(&br, 0);
                    out.brackets[p][q][a][b] = sparse_of(&hs[p + q].project(&v));
                }
            }
        }
    }
    for a in 0..dims[1] {
        let sq = full.half_square(&k, &lift(1, a));
        out.squares[a] = sparse_of(&hs[2].project(&orbits::coefficient(&sq, 0)));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::local_system::unit_index;

    fn q() -> Field {
        Field::Rational
    }

    #[test]
    fn dims_of_fixtures() {
        let p = DeltaComplex::point();
        assert_eq!(dgla_from_complex(&p, &LocalSystem::trivial(&p, q(), 1)).unwrap().dims(), [1, 0, 0, 0]);
        let w = DeltaComplex::wedge_of_circles(2);
        assert_eq!(dgla_from_complex(&w, &LocalSystem::trivial(&w, q(), 1)).unwrap().dims(), [1, 2, 0, 0]);
        let t = DeltaComplex::torus(2);
        let d = dgla_from_complex(&t, &LocalSystem::trivial(&t, q(), 2)).unwrap();
        assert_eq!(d.dims(), [4, 12, 8, 0]);
        d.validate().unwrap();
    }

    #[test]
    fn commutator_cochain_is_not_mc() {
        let f3 = Field::Prime(3);
        let ring = TestRing::truncated_polynomial(f3, 3).unwrap();
        let t = DeltaComplex::torus(2);
        let d = dgla_from_complex(&t, &LocalSystem::trivial(&t, f3, 2)).unwrap();
        let mut w = orbits::zeros(&ring, 12);
        w[unit_index(2, 0, 1)] = ring.basis_vector(1);
        w[4 + unit_index(2, 1, 0)] = ring.basis_vector(1);
        let (ok, defect) = is_mc(&d, &McElement::new(&d, &ring, w).unwrap());
        assert!(!ok);
        // t^2 E11 on the first triangle, t^2 E22 on the second
        assert_eq!(defect[unit_index(2, 0, 0)], ring.basis_vector(2));
        assert_eq!(defect[4 + unit_index(2, 1, 1)], ring.basis_vector(2));
    }

    #[test]
    fn dual_number_gauge_is_linear() {
        let f5 = Field::Prime(5);
        let eps = TestRing::dual_numbers(f5);
        let c = DeltaComplex::circle();
        let sys = LocalSystem::new(&c, f5, 2, vec![Matrix::from_i64(f5, &[&[1, 1], &[0, 1]])]).unwrap();
        let d = dgla_from_complex(&c, &sys).unwrap();
        let mut g = orbits::zeros(&eps, 4);
        g[1] = eps.basis_vector(1);
        g[2] = artin::scale(&eps.basis_vector(1), &f5.from_i64(3));
        let mut w = orbits::zeros(&eps, 4);
        w[0] = eps.basis_vector(1);
        let acted = d.gauge_act(&eps, &g, &w).unwrap();
        let expect = orbits::sub(&orbits::add(&w, &d.bracket(&eps, 0, &g, 1, &w)), &d.apply_d(0, &g));
        assert_eq!(acted, expect);
    }

    #[test]
    fn class_counts() {
        let f3 = Field::Prime(3);
        let eps = TestRing::dual_numbers(f3);
        let w = DeltaComplex::wedge_of_circles(2);
        let d = dgla_from_complex(&w, &LocalSystem::trivial(&w, f3, 1)).unwrap();
        assert_eq!(def_classes(&d, &eps, orbits::DEFAULT_BUDGET).unwrap().count, 9);
        assert_eq!(def_class_representatives(&d, &eps, orbits::DEFAULT_BUDGET).unwrap().count, 9);
        let t = DeltaComplex::torus(2);
        let d = dgla_from_complex(&t, &LocalSystem::trivial(&t, f3, 1)).unwrap();
        assert_eq!(def_classes(&d, &eps, orbits::DEFAULT_BUDGET).unwrap().count, 9);
        let p = DeltaComplex::point();
        let d = dgla_from_complex(&p, &LocalSystem::trivial(&p, f3, 2)).unwrap();
        let ring = TestRing::truncated_polynomial(f3, 3).unwrap();
        assert_eq!(def_classes(&d, &ring, orbits::DEFAULT_BUDGET).unwrap().count, 1);
    }

    #[test]
    fn tower_matches_enumeration_on_rank_two() {
        let f2 = Field::Prime(2);
        let eps = TestRing::dual_numbers(f2);
        let t = DeltaComplex::torus(2);
        let d = dgla_from_complex(&t, &LocalSystem::trivial(&t, f2, 2)).unwrap();
        assert_eq!(def_classes(&d, &eps, orbits::DEFAULT_BUDGET).unwrap().count, 256);
        let f3 = Field::Prime(3);
        let c = DeltaComplex::circle();
        let sys = LocalSystem::new(&c, f3, 2, vec![Matrix::from_i64(f3, &[&[1, 1], &[0, 1]])]).unwrap();
        let d = dgla_from_complex(&c, &sys).unwrap();
        let ring = TestRing::truncated_polynomial(f3, 3).unwrap();
        let tower = def_classes(&d, &ring, orbits::DEFAULT_BUDGET).unwrap().count;
        let naive = def_class_representatives(&d, &ring, orbits::DEFAULT_BUDGET).unwrap().count;
        assert_eq!(tower, naive);
    }

    #[test]
    fn formal_torus_rank_two() {
        let t = DeltaComplex::torus(2);
        let f = formal_dgla(&t, &LocalSystem::trivial(&t, q(), 2)).unwrap();
        assert_eq!(f.dgla.dims(), [4, 8, 4, 0]);
        f.dgla.validate().unwrap();
        let t1 = formal_dgla(&t, &LocalSystem::trivial(&t, q(), 1)).unwrap();
        let k = TestRing::residue(q());
        let one = orbits::zeros(&k, 2).into_iter().map(|_| k.one()).collect::<Vec<_>>();
        assert!(t1.dgla.bracket(&k, 1, &one, 1, &one).iter().all(|a| artin::is_zero(a)));
    }
}
