//! Cosimplicial and bicosimplicial vector spaces: normalization, the diagonal, the total
//! complex and the Eilenberg-Zilber comparison.

use crate::complexes::cohomology::split;
use crate::error::{Error, Result};
use crate::linalg::{kernel_basis, Field, Matrix, Scalar, Subspace};

/// Levels `K^0..K^M` with cofaces `∂^i: K^n -> K^{n+1}` and codegeneracies `σ^j: K^{n+1} -> K^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosimplicialComplex {
    field: Field,
    dims: Vec<usize>,
    /// `cofaces[n][i]` for `n < M`, `i = 0..=n+1`.
    cofaces: Vec<Vec<Matrix>>,
    /// `codegeneracies[n][j]: K^{n+1} -> K^n` for `n < M`, `j = 0..=n`.
    codegeneracies: Vec<Vec<Matrix>>,
}

fn alternating(field: Field, maps: &[Matrix]) -> Matrix {
    let mut out = Matrix::zeros(field, maps[0].rows(), maps[0].cols());
    for (i, m) in maps.iter().enumerate() {
        out = if i % 2 == 0 { out.add(m) } else { out.sub(m) };
    }
    out
}

impl CosimplicialComplex {
    pub fn new(field: Field, dims: Vec<usize>, cofaces: Vec<Vec<Matrix>>, codegeneracies: Vec<Vec<Matrix>>) -> Result<Self> {
        let k = CosimplicialComplex { field, dims, cofaces, codegeneracies };
        k.check_identities()?;
        Ok(k)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    /// Top level `M`.
    pub fn top(&self) -> usize {
        self.dims.len() - 1
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn coface(&self, n: usize, i: usize) -> &Matrix {
        &self.cofaces[n][i]
    }

    pub fn codegeneracy(&self, n: usize, j: usize) -> &Matrix {
        &self.codegeneracies[n][j]
    }

    /// `Σ (-1)^i ∂^i: K^n -> K^{n+1}`.
    pub fn differential(&self, n: usize) -> Matrix {
        alternating(self.field, &self.cofaces[n])
    }

    pub fn check_identities(&self) -> Result<()> {
        let m = self.top();
        if self.cofaces.len() != m || self.codegeneracies.len() != m {
            return Err(Error::Dimension("cosimplicial structure maps missing".into()));
        }
        for n in 0..m {
            if self.cofaces[n].len() != n + 2 || self.codegeneracies[n].len() != n + 1 {
                return Err(Error::Dimension(format!("wrong number of structure maps at level {n}")));
            }
            for d in &self.cofaces[n] {
                if d.rows() != self.dims[n + 1] || d.cols() != self.dims[n] {
                    return Err(Error::Dimension(format!("coface out of level {n} has the wrong shape")));
                }
            }
            for s in &self.codegeneracies[n] {
                if s.rows() != self.dims[n] || s.cols() != self.dims[n + 1] {
                    return Err(Error::Dimension(format!("codegeneracy into level {n} has the wrong shape")));
                }
            }
        }
        let fail = |what: &str| Err(Error::Dimension(format!("cosimplicial identity fails: {what}")));
        // ∂^j ∂^i = ∂^i ∂^{j-1}, i < j, on K^n
        for n in 0..m.saturating_sub(1) {
            for j in 0..=n + 2 {
                for i in 0..j {
                    if self.cofaces[n + 1][j].mul(&self.cofaces[n][i]) != self.cofaces[n + 1][i].mul(&self.cofaces[n][j - 1]) {
                        return fail(&format!("∂^{j}∂^{i} on level {n}"));
                    }
                }
            }
        }
        // σ^j σ^i = σ^i σ^{j+1}, i <= j, on K^{n+2}
        for n in 0..m.saturating_sub(1) {
            for j in 0..=n {
                for i in 0..=j {
                    if self.codegeneracies[n][j].mul(&self.codegeneracies[n + 1][i])
                        != self.codegeneracies[n][i].mul(&self.codegeneracies[n + 1][j + 1])
                    {
                        return fail(&format!("σ^{j}σ^{i} on level {}", n + 2));
                    }
                }
            }
        }
        // σ^j ∂^i on K^n (σ^j: K^{n+1} -> K^n, j = 0..=n)
        for n in 0..m {
            for j in 0..=n {
                for i in 0..=n + 1 {
                    let lhs = self.codegeneracies[n][j].mul(&self.cofaces[n][i]);
                    let rhs = if i == j || i == j + 1 {
                        Matrix::identity(self.field, self.dims[n])
                    } else if n == 0 {
                        continue;
                    } else if i < j {
                        self.cofaces[n - 1][i].mul(&self.codegeneracies[n - 1][j - 1])
                    } else {
                        self.cofaces[n - 1][i - 1].mul(&self.codegeneracies[n - 1][j])
                    };
                    if lhs != rhs {
                        return fail(&format!("σ^{j}∂^{i} on level {n}"));
                    }
                }
            }
        }
        Ok(())
    }

    /// Constant cosimplicial space on `k^dim`.
    pub fn constant(field: Field, dim: usize, top: usize) -> Self {
        let id = Matrix::identity(field, dim);
        CosimplicialComplex {
            field,
            dims: vec![dim; top + 1],
            cofaces: (0..top).map(|n| vec![id.clone(); n + 2]).collect(),
            codegeneracies: (0..top).map(|n| vec![id.clone(); n + 1]).collect(),
        }
    }

    /// Cohomology of the unnormalized complex in degrees `0..M`.
    pub fn cohomology_dims(&self) -> Result<Vec<usize>> {
        let m = self.top();
        (0..m)
            .map(|n| {
                let prev = if n == 0 { Matrix::zeros(self.field, self.dims[0], 0) } else { self.differential(n - 1) };
                Ok(split(n, &prev, &self.differential(n), None)?.dim())
            })
            .collect()
    }

    /// Scalars extended along a degree-2 extension, viewed over the prime field.
    pub fn extend_scalars_quadratic(&self) -> Self {
        let i2 = Matrix::identity(self.field, 2);
        let k = |m: &Matrix| m.kron(&i2);
        CosimplicialComplex {
            field: self.field,
            dims: self.dims.iter().map(|d| 2 * d).collect(),
            cofaces: self.cofaces.iter().map(|v| v.iter().map(k).collect()).collect(),
            codegeneracies: self.codegeneracies.iter().map(|v| v.iter().map(k).collect()).collect(),
        }
    }
}

/// Normalized cochain complex `N^n = ∩_j ker σ^j` with the alternating coface differential.
#[derive(Clone, Debug)]
pub struct Normalized {
    pub bases: Vec<Subspace>,
    /// `differentials[n]: N^n -> N^{n+1}` in the chosen bases.
    pub differentials: Vec<Matrix>,
}

impl Normalized {
    pub fn dims(&self) -> Vec<usize> {
        self.bases.iter().map(Subspace::dim).collect()
    }

    pub fn cohomology_dims(&self) -> Result<Vec<usize>> {
        let m = self.differentials.len();
        let field = self.bases[0].field();
        (0..m)
            .map(|n| {
                let prev = if n == 0 { Matrix::zeros(field, self.bases[0].dim(), 0) } else { self.differentials[n - 1].clone() };
                Ok(split(n, &prev, &self.differentials[n], None)?.dim())
            })
            .collect()
    }
}

fn common_kernel(field: Field, dim: usize, maps: &[Matrix]) -> Subspace {
    if maps.is_empty() {
        return Subspace::full(field, dim);
    }
    let mut stacked = maps[0].clone();
    for m in &maps[1..] {
        stacked = stacked.vstack(m);
    }
    kernel_basis(&stacked)
}

pub fn normalize(k: &CosimplicialComplex) -> Result<Normalized> {
    let f = k.field;
    let m = k.top();
    let bases: Vec<Subspace> = (0..=m)
        .map(|n| if n == 0 { Subspace::full(f, k.dims[0]) } else { common_kernel(f, k.dims[n], &k.codegeneracies[n - 1]) })
        .collect();
    let mut differentials = Vec::with_capacity(m);
    for n in 0..m {
        let d = k.differential(n);
        let cols = bases[n]
            .basis()
            .iter()
            .map(|v| {
                bases[n + 1]
                    .coordinates(&d.mul_vec(v))
                    .ok_or_else(|| Error::Dimension("normalized subcomplex is not closed".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        differentials.push(Matrix::from_columns(f, bases[n + 1].dim(), &cols));
    }
    Ok(Normalized { bases, differentials })
}

/// A finite group by its multiplication table; element `0` is the identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    pub table: Vec<Vec<usize>>,
}

impl FiniteGroup {
    pub fn cyclic(n: usize) -> FiniteGroup {
        FiniteGroup { table: (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect() }
    }

    pub fn symmetric3() -> FiniteGroup {
        let perms: Vec<[usize; 3]> = vec![[0, 1, 2], [1, 2, 0], [2, 0, 1], [1, 0, 2], [0, 2, 1], [2, 1, 0]];
        let idx = |p: [usize; 3]| perms.iter().position(|q| *q == p).unwrap();
        let table = perms
            .iter()
            .map(|a| perms.iter().map(|b| idx([a[b[0]], a[b[1]], a[b[2]]])).collect())
            .collect();
        FiniteGroup { table }
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }
}

fn tuple_count(g: usize, n: usize) -> usize {
    g.pow(n as u32)
}

fn decode(g: usize, n: usize, mut idx: usize) -> Vec<usize> {
    let mut t = vec![0; n];
    for slot in t.iter_mut().rev() {
        *slot = idx % g;
        idx /= g;
    }
    t
}

fn encode(g: usize, t: &[usize]) -> usize {
    t.iter().fold(0, |acc, &x| acc * g + x)
}

/// Nerve face on a tuple of length `n + 1`: returns the acting group element for `∂^0`.
fn nerve_face(group: &FiniteGroup, t: &[usize], i: usize) -> (Option<usize>, Vec<usize>) {
    let n1 = t.len();
    if i == 0 {
        (Some(t[0]), t[1..].to_vec())
    } else if i == n1 {
        (None, t[..n1 - 1].to_vec())
    } else {
        let mut f = t[..i - 1].to_vec();
        f.push(group.mul(t[i - 1], t[i]));
        f.extend_from_slice(&t[i + 1..]);
        (None, f)
    }
}

fn insert_identity(t: &[usize], j: usize) -> Vec<usize> {
    let mut out = t[..j].to_vec();
    out.push(0);
    out.extend_from_slice(&t[j..]);
    out
}

/// Group cochains `K^n = Maps(G^n, V)` for a representation `ρ`.
pub fn group_nerve(group: &FiniteGroup, rho: &[Matrix], top: usize) -> Result<CosimplicialComplex> {
    let field = rho[0].field();
    let v = rho[0].rows();
    let g = group.order();
    if rho.len() != g {
        return Err(Error::Dimension("one matrix per group element required".into()));
    }
    let dims: Vec<usize> = (0..=top).map(|n| tuple_count(g, n) * v).collect();
    let mut cofaces = Vec::new();
    let mut codegs = Vec::new();
    for n in 0..top {
        let mut faces = Vec::new();
        for i in 0..=n + 1 {
            let mut m = Matrix::zeros(field, dims[n + 1], dims[n]);
            for ti in 0..tuple_count(g, n + 1) {
                let t = decode(g, n + 1, ti);
                let (act, f) = nerve_face(group, &t, i);
                let fi = encode(g, &f);
                for a in 0..v {
                    for b in 0..v {
                        let c = match act {
                            Some(h) => rho[h][(a, b)].clone(),
                            None => if a == b { field.one() } else { field.zero() },
                        };
                        if !c.is_zero() {
                            m[(ti * v + a, fi * v + b)] = c;
                        }
                    }
                }
            }
            faces.push(m);
        }
        cofaces.push(faces);
        let mut degs = Vec::new();
        for j in 0..=n {
            let mut m = Matrix::zeros(field, dims[n], dims[n + 1]);
            for ti in 0..tuple_count(g, n) {
                let t = decode(g, n, ti);
                let si = encode(g, &insert_identity(&t, j));
                for a in 0..v {
                    m[(ti * v + a, si * v + a)] = field.one();
                }
            }
            degs.push(m);
        }
        codegs.push(degs);
    }
    CosimplicialComplex::new(field, dims, cofaces, codegs)
}

/// Monotone surjections `[n] ->> [k]` as value lists.
fn surjections(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    fn rec(pos: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if pos > n {
            if *cur.last().unwrap() == k {
                out.push(cur.clone());
            }
            return;
        }
        let last = *cur.last().unwrap();
        for step in 0..=1 {
            let v = last + step;
            if v <= k && k - v <= n - pos {
                cur.push(v);
                rec(pos + 1, n, k, cur, out);
                cur.pop();
            }
        }
    }
    if k <= n {
        rec(1, n, k, &mut vec![0], &mut out);
    }
    out
}

/// The cosimplicial space `e(L)` of a cochain complex `L^0 -> ... -> L^t` (Dold-Kan),
/// so that `N(e(L)) = L`.
///
/// Built as the dual of the simplicial space `Γ(L^∨)` with `Γ_n = ⊕_{[n] ->> [k]} L^k∨`.
pub fn dold_kan(field: Field, dims: &[usize], d: &[Matrix], top: usize) -> Result<CosimplicialComplex> {
    for (n, m) in d.iter().enumerate() {
        if m.rows() != dims[n + 1] || m.cols() != dims[n] {
            return Err(Error::Dimension("differential shapes do not match".into()));
        }
    }
    let t = dims.len() - 1;
    let summands: Vec<Vec<(Vec<usize>, usize, usize)>> = (0..=top)
        .map(|n| {
            let mut off = 0;
            let mut v = Vec::new();
            for k in 0..=t.min(n) {
                for eta in surjections(n, k) {
                    v.push((eta, k, off));
                    off += dims[k];
                }
            }
            v
        })
        .collect();
    let level_dim = |n: usize| summands[n].iter().map(|(_, k, _)| dims[*k]).sum::<usize>();
    let kdims: Vec<usize> = (0..=top).map(level_dim).collect();
    // boundary of L^∨ in degree k: (d^{k-1})^T : L^k∨ -> L^{k-1}∨
    let boundary = |k: usize| d[k - 1].transpose();
    // θ*: Γ_n -> Γ_m for θ: [m] -> [n], as a matrix (rows Γ_m).
    let operator = |n: usize, m: usize, theta: &[usize]| -> Matrix {
        let mut out = Matrix::zeros(field, kdims[m], kdims[n]);
        for (eta, k, off) in &summands[n] {
            let comp: Vec<usize> = theta.iter().map(|&x| eta[x]).collect();
            let mut image: Vec<usize> = comp.clone();
            image.dedup();
            let j = image.len() - 1;
            let eps: Vec<usize> = comp.iter().map(|x| image.iter().position(|y| y == x).unwrap()).collect();
            let full = image.len() == k + 1;
            let skips_zero = !full && image.len() == *k && image.iter().enumerate().all(|(a, &b)| b == a + 1);
            if !full && !skips_zero {
                continue;
            }
            let (_, jk, target_off) = summands[m].iter().find(|(e, kk, _)| *e == eps && *kk == j).unwrap();
            debug_assert_eq!(*jk, j);
            if full {
                for a in 0..dims[*k] {
                    out[(target_off + a, off + a)] = field.one();
                }
            } else {
                let b = boundary(*k);
                for r in 0..b.rows() {
                    for c in 0..b.cols() {
                        if !b[(r, c)].is_zero() {
                            out[(target_off + r, off + c)] = b[(r, c)].clone();
                        }
                    }
                }
            }
        }
        out
    };
    let mut cofaces = Vec::new();
    let mut codegs = Vec::new();
    for n in 0..top {
        // face d_i: Γ_{n+1} -> Γ_n from δ^i: [n] -> [n+1]; its transpose is ∂^i: K^n -> K^{n+1}
        let faces = (0..=n + 1)
            .map(|i| {
                let delta: Vec<usize> = (0..=n).map(|x| if x < i { x } else { x + 1 }).collect();
                operator(n + 1, n, &delta).transpose()
            })
            .collect();
        cofaces.push(faces);
        // degeneracy s_j: Γ_n -> Γ_{n+1} from σ^j: [n+1] -> [n]; transpose σ^j: K^{n+1} -> K^n
        let degs = (0..=n)
            .map(|j| {
                let sigma: Vec<usize> = (0..=n + 1).map(|x| if x <= j { x } else { x - 1 }).collect();
                operator(n, n + 1, &sigma).transpose()
            })
            .collect();
        codegs.push(degs);
    }
    CosimplicialComplex::new(field, kdims, cofaces, codegs)
}

/// `K^{pq}` for `p, q <= M` with horizontal and vertical structure maps commuting.
#[derive(Clone, Debug)]
pub struct BiCosimplicial {
    field: Field,
    top: usize,
    dims: Vec<Vec<usize>>,
    /// `h_cofaces[p][q][i]: K^{pq} -> K^{p+1,q}`.
    h_cofaces: Vec<Vec<Vec<Matrix>>>,
    v_cofaces: Vec<Vec<Vec<Matrix>>>,
    /// `h_codeg[p][q][j]: K^{p+1,q} -> K^{pq}`.
    h_codeg: Vec<Vec<Vec<Matrix>>>,
    v_codeg: Vec<Vec<Vec<Matrix>>>,
}

impl BiCosimplicial {
    /// `K^{pq} = A^p ⊗ B^q`.
    pub fn outer(a: &CosimplicialComplex, b: &CosimplicialComplex) -> Result<Self> {
        if a.field != b.field {
            return Err(Error::Dimension("outer product over different fields".into()));
        }
        let field = a.field;
        let top = a.top().min(b.top());
        let dims = (0..=top).map(|p| (0..=top).map(|q| a.dims[p] * b.dims[q]).collect()).collect();
        let idb = |q: usize| Matrix::identity(field, b.dims[q]);
        let ida = |p: usize| Matrix::identity(field, a.dims[p]);
        let grid = |f: &dyn Fn(usize, usize) -> Vec<Matrix>| -> Vec<Vec<Vec<Matrix>>> {
            (0..=top).map(|p| (0..=top).map(|q| f(p, q)).collect()).collect()
        };
        let h_cofaces = grid(&|p, q| if p < top { a.cofaces[p].iter().map(|m| m.kron(&idb(q))).collect() } else { Vec::new() });
        let v_cofaces = grid(&|p, q| if q < top { b.cofaces[q].iter().map(|m| ida(p).kron(m)).collect() } else { Vec::new() });
        let h_codeg = grid(&|p, q| if p < top { a.codegeneracies[p].iter().map(|m| m.kron(&idb(q))).collect() } else { Vec::new() });
        let v_codeg = grid(&|p, q| if q < top { b.codegeneracies[q].iter().map(|m| ida(p).kron(m)).collect() } else { Vec::new() });
        Ok(BiCosimplicial { field, top, dims, h_cofaces, v_cofaces, h_codeg, v_codeg })
    }

    /// `Maps(G^p × H^q, V)` for commuting representations of `G` and `H` on `V`.
    pub fn bi_nerve(g: &FiniteGroup, rho_g: &[Matrix], h: &FiniteGroup, rho_h: &[Matrix], top: usize) -> Result<Self> {
        let field = rho_g[0].field();
        let v = rho_g[0].rows();
        for a in rho_g {
            for b in rho_h {
                if a.mul(b) != b.mul(a) {
                    return Err(Error::Precondition("the two actions must commute".into()));
                }
            }
        }
        let (ng, nh) = (g.order(), h.order());
        let dims: Vec<Vec<usize>> =
            (0..=top).map(|p| (0..=top).map(|q| tuple_count(ng, p) * tuple_count(nh, q) * v).collect()).collect();
        let index = |p: usize, q: usize, tg: usize, th: usize, a: usize| -> usize {
            let _ = p;
            (tg * tuple_count(nh, q) + th) * v + a
        };
        let mut h_cofaces = vec![vec![Vec::new(); top + 1]; top + 1];
        let mut v_cofaces = vec![vec![Vec::new(); top + 1]; top + 1];
        let mut h_codeg = vec![vec![Vec::new(); top + 1]; top + 1];
        let mut v_codeg = vec![vec![Vec::new(); top + 1]; top + 1];
        for p in 0..=top {
            for q in 0..=top {
                if p < top {
                    for i in 0..=p + 1 {
                        let mut m = Matrix::zeros(field, dims[p + 1][q], dims[p][q]);
                        for tg in 0..tuple_count(ng, p + 1) {
                            let (act, f) = nerve_face(g, &decode(ng, p + 1, tg), i);
                            let fg = encode(ng, &f);
                            for th in 0..tuple_count(nh, q) {
                                for a in 0..v {
                                    for b in 0..v {
                                        let c = match act {
                                            Some(x) => rho_g[x][(a, b)].clone(),
                                            None => if a == b { field.one() } else { field.zero() },
                                        };
                                        if !c.is_zero() {
                                            m[(index(p + 1, q, tg, th, a), index(p, q, fg, th, b))] = c;
                                        }
                                    }
                                }
                            }
                        }
                        h_cofaces[p][q].push(m);
                    }
                    for j in 0..=p {
                        let mut m = Matrix::zeros(field, dims[p][q], dims[p + 1][q]);
                        for tg in 0..tuple_count(ng, p) {
                            let s = encode(ng, &insert_identity(&decode(ng, p, tg), j));
                            for th in 0..tuple_count(nh, q) {
                                for a in 0..v {
                                    m[(index(p, q, tg, th, a), index(p + 1, q, s, th, a))] = field.one();
                                }
                            }
                        }
                        h_codeg[p][q].push(m);
                    }
                }
                if q < top {
                    for i in 0..=q + 1 {
                        let mut m = Matrix::zeros(field, dims[p][q + 1], dims[p][q]);
                        for th in 0..tuple_count(nh, q + 1) {
                            let (act, f) = nerve_face(h, &decode(nh, q + 1, th), i);
                            let fh = encode(nh, &f);
                            for tg in 0..tuple_count(ng, p) {
                                for a in 0..v {
                                    for b in 0..v {
                                        let c = match act {
                                            Some(x) => rho_h[x][(a, b)].clone(),
                                            None => if a == b { field.one() } else { field.zero() },
                                        };
                                        if !c.is_zero() {
                                            m[(index(p, q + 1, tg, th, a), index(p, q, tg, fh, b))] = c;
                                        }
                                    }
                                }
                            }
                        }
                        v_cofaces[p][q].push(m);
                    }
                    for j in 0..=q {
                        let mut m = Matrix::zeros(field, dims[p][q], dims[p][q + 1]);
                        for th in 0..tuple_count(nh, q) {
                            let s = encode(nh, &insert_identity(&decode(nh, q, th), j));
                            for tg in 0..tuple_count(ng, p) {
                                for a in 0..v {
                                    m[(index(p, q, tg, th, a), index(p, q + 1, tg, s, a))] = field.one();
                                }
                            }
                        }
                        v_codeg[p][q].push(m);
                    }
                }
            }
        }
        Ok(BiCosimplicial { field, top, dims, h_cofaces, v_cofaces, h_codeg, v_codeg })
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self, p: usize, q: usize) -> usize {
        self.dims[p][q]
    }

    /// `diag K` with `∂^i = ∂_h^i ∂_v^i` and `σ^j = σ_h^j σ_v^j`.
    pub fn diagonal(&self) -> Result<CosimplicialComplex> {
        let m = self.top;
        let dims = (0..=m).map(|n| self.dims[n][n]).collect();
        let cofaces = (0..m)
            .map(|n| (0..=n + 1).map(|i| self.h_cofaces[n][n + 1][i].mul(&self.v_cofaces[n][n][i])).collect())
            .collect();
        let codegs = (0..m)
            .map(|n| (0..=n).map(|j| self.h_codeg[n][n][j].mul(&self.v_codeg[n + 1][n][j])).collect())
            .collect();
        CosimplicialComplex::new(self.field, dims, cofaces, codegs)
    }

    fn tot_offsets(&self, n: usize) -> Vec<(usize, usize, usize)> {
        let mut off = 0;
        let mut out = Vec::new();
        for p in 0..=n {
            let q = n - p;
            if p <= self.top && q <= self.top {
                out.push((p, q, off));
                off += self.dims[p][q];
            }
        }
        out
    }

    pub fn tot_dim(&self, n: usize) -> usize {
        self.tot_offsets(n).iter().map(|(p, q, _)| self.dims[*p][*q]).sum()
    }

    /// `d = d_h + (-1)^p d_v` on `Tot^n = ⊕_{p+q=n} K^{pq}`; needs `n < M`.
    pub fn tot_differential(&self, n: usize) -> Matrix {
        let src = self.tot_offsets(n);
        let dst = self.tot_offsets(n + 1);
        let mut out = Matrix::zeros(self.field, self.tot_dim(n + 1), self.tot_dim(n));
        let place = |out: &mut Matrix, m: &Matrix, r0: usize, c0: usize, neg: bool| {
            for r in 0..m.rows() {
                for c in 0..m.cols() {
                    let v = &m[(r, c)];
                    if !v.is_zero() {
                        let cur = out[(r0 + r, c0 + c)].clone();
                        out[(r0 + r, c0 + c)] = if neg { &cur - v } else { &cur + v };
                    }
                }
            }
        };
        for &(p, q, c0) in &src {
            if let Some(&(_, _, r0)) = dst.iter().find(|(a, b, _)| *a == p + 1 && *b == q) {
                place(&mut out, &alternating(self.field, &self.h_cofaces[p][q]), r0, c0, false);
            }
            if let Some(&(_, _, r0)) = dst.iter().find(|(a, b, _)| *a == p && *b == q + 1) {
                place(&mut out, &alternating(self.field, &self.v_cofaces[p][q]), r0, c0, p % 2 == 1);
            }
        }
        out
    }

    /// The shuffle map `∇: K^{nn} -> ⊕_{p+q=n} K^{pq}`.
    pub fn eilenberg_zilber(&self, n: usize) -> Matrix {
        let comps = self.tot_offsets(n);
        let mut out = Matrix::zeros(self.field, self.tot_dim(n), self.dims[n][n]);
        for &(p, q, off) in &comps {
            let mut block = Matrix::zeros(self.field, self.dims[p][q], self.dims[n][n]);
            for mu in combinations(n, p) {
                let nu: Vec<usize> = (0..n).filter(|x| !mu.contains(x)).collect();
                let perm: Vec<usize> = mu.iter().chain(nu.iter()).cloned().collect();
                let negative = inversions(&perm) % 2 == 1;
                // vertical: apply σ_v^{μ_p} first, down to σ_v^{μ_1}; the horizontal index stays n
                let mut m = Matrix::identity(self.field, self.dims[n][n]);
                let mut qv = n;
                for &j in mu.iter().rev() {
                    m = self.v_codeg[n][qv - 1][j].mul(&m);
                    qv -= 1;
                }
                let mut ph = n;
                for &j in nu.iter().rev() {
                    m = self.h_codeg[ph - 1][q][j].mul(&m);
                    ph -= 1;
                }
                block = if negative { block.sub(&m) } else { block.add(&m) };
            }
            for r in 0..block.rows() {
                for c in 0..block.cols() {
                    out[(off + r, c)] = block[(r, c)].clone();
                }
            }
        }
        out
    }

    /// Whether `∇(α)_{pq}` lies in `N_h^p ∩ N_v^q`.
    pub fn normalization_contained(&self, n: usize, alpha: &[Scalar]) -> bool {
        let image = self.eilenberg_zilber(n).mul_vec(alpha);
        for (p, q, off) in self.tot_offsets(n) {
            let comp = &image[off..off + self.dims[p][q]];
            for j in 0..p {
                if !self.h_codeg[p - 1][q][j].mul_vec(comp).iter().all(Scalar::is_zero) {
                    return false;
                }
            }
            for j in 0..q {
                if !self.v_codeg[p][q - 1][j].mul_vec(comp).iter().all(Scalar::is_zero) {
                    return false;
                }
            }
        }
        true
    }
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for x in start..n {
            cur.push(x);
            rec(x + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

fn inversions(p: &[usize]) -> usize {
    let mut c = 0;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                c += 1;
            }
        }
    }
    c
}

/// Outcome of the Eilenberg-Zilber comparison.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EzReport {
    pub diagonal_dims: Vec<usize>,
    pub total_dims: Vec<usize>,
    pub chain_map: bool,
    /// `∇` induces an isomorphism in every compared degree.
    pub isomorphism: bool,
}

impl EzReport {
    pub fn passed(&self) -> bool {
        self.chain_map && self.isomorphism && self.diagonal_dims == self.total_dims
    }
}

/// Compares `diag K` and `Tot K` through `∇` in degrees `0..M`.
pub fn eilenberg_zilber(k: &BiCosimplicial) -> Result<EzReport> {
    let diag = k.diagonal()?;
    let m = k.top;
    let f = k.field;
    let mut chain_map = true;
    for n in 0..m {
        let lhs = k.eilenberg_zilber(n + 1).mul(&diag.differential(n));
        let rhs = k.tot_differential(n).mul(&k.eilenberg_zilber(n));
        chain_map &= lhs == rhs;
    }
    let mut diagonal_dims = Vec::new();
    let mut total_dims = Vec::new();
    let mut isomorphism = true;
    for n in 0..m {
        let dprev = if n == 0 { Matrix::zeros(f, diag.dims()[0], 0) } else { diag.differential(n - 1) };
        let hd = split(n, &dprev, &diag.differential(n), None)?;
        let tprev = if n == 0 { Matrix::zeros(f, k.tot_dim(0), 0) } else { k.tot_differential(n - 1) };
        let ht = split(n, &tprev, &k.tot_differential(n), None)?;
        diagonal_dims.push(hd.dim());
        total_dims.push(ht.dim());
        let ez = k.eilenberg_zilber(n);
        let cols: Vec<Vec<Scalar>> = hd.representatives.iter().map(|r| ht.project(&ez.mul_vec(r))).collect();
        let induced = Matrix::from_columns(f, ht.dim(), &cols);
        isomorphism &= hd.dim() == ht.dim() && induced.rank() == hd.dim();
    }
    Ok(EzReport { diagonal_dims, total_dims, chain_map, isomorphism })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_normalizes_to_degree_zero() {
        let k = CosimplicialComplex::constant(Field::Rational, 3, 3);
        k.check_identities().unwrap();
        assert_eq!(normalize(&k).unwrap().dims(), vec![3, 0, 0, 0]);
        assert_eq!(k.cohomology_dims().unwrap(), vec![3, 0, 0]);
    }

    #[test]
    fn dold_kan_recovers_the_complex() {
        let q = Field::Rational;
        let d0 = Matrix::from_i64(q, &[&[1], &[2]]);
        let k = dold_kan(q, &[1, 2], std::slice::from_ref(&d0), 3).unwrap();
        let n = normalize(&k).unwrap();
        assert_eq!(n.dims(), vec![1, 2, 0, 0]);
        assert_eq!(n.cohomology_dims().unwrap(), vec![0, 1, 0]);
        assert_eq!(k.cohomology_dims().unwrap(), vec![0, 1, 0]);
    }

    #[test]
    fn group_cohomology_of_cyclic_group() {
        let f5 = Field::Prime(5);
        let g = FiniteGroup::cyclic(5);
        let rho = vec![Matrix::identity(f5, 1); 5];
        let k = group_nerve(&g, &rho, 3).unwrap();
        assert_eq!(k.cohomology_dims().unwrap(), vec![1, 1, 1]);
        assert_eq!(normalize(&k).unwrap().cohomology_dims().unwrap(), vec![1, 1, 1]);
        let ext = k.extend_scalars_quadratic();
        assert_eq!(ext.cohomology_dims().unwrap(), vec![2, 2, 2]);
    }

    #[test]
    fn ez_on_bidegree_zero_is_identity() {
        let q = Field::Rational;
        let a = CosimplicialComplex::constant(q, 1, 2);
        let b = CosimplicialComplex::constant(q, 2, 2);
        let k = BiCosimplicial::outer(&a, &b).unwrap();
        assert_eq!(k.eilenberg_zilber(0), Matrix::identity(q, 2));
        assert!(eilenberg_zilber(&k).unwrap().passed());
    }

    #[test]
    fn ez_on_outer_products_and_nerves() {
        let f5 = Field::Prime(5);
        let g = FiniteGroup::cyclic(5);
        let nerve = group_nerve(&g, &vec![Matrix::identity(f5, 1); 5], 2).unwrap();
        let d0 = Matrix::from_i64(f5, &[&[1], &[0]]);
        let dk = dold_kan(f5, &[1, 2], &[d0], 2).unwrap();
        let k = BiCosimplicial::outer(&nerve, &dk).unwrap();
        let rep = eilenberg_zilber(&k).unwrap();
        assert!(rep.passed(), "{rep:?}");
        let q = Field::Rational;
        let z2 = FiniteGroup::cyclic(2);
        let swap = Matrix::from_i64(q, &[&[0, 1], &[1, 0]]);
        let rho = vec![Matrix::identity(q, 2), swap.clone()];
        let bi = BiCosimplicial::bi_nerve(&z2, &rho, &z2, &rho, 3).unwrap();
        assert!(eilenberg_zilber(&bi).unwrap().passed());
    }
}
