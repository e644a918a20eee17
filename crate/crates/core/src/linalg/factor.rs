//! Factorisation of univariate polynomials over prime fields and the rationals.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::poly::Poly;
use super::scalar::{Field, Scalar};

/// Monic irreducible factors with multiplicities, sorted by degree then coefficients.
/// The zero polynomial and constants factor as the empty product.
pub fn factor(f: &Poly) -> Vec<(Poly, usize)> {
    if f.deg() == 0 {
        return Vec::new();
    }
    let mut out: BTreeMap<Poly, usize> = BTreeMap::new();
    for (g, m) in squarefree(f) {
        let parts = match f.field() {
            Field::Prime(p) => factor_squarefree_fp(&g, p),
            Field::Rational => factor_squarefree_q(&g),
        };
        for h in parts {
            *out.entry(h).or_default() += m;
        }
    }
    let mut v: Vec<(Poly, usize)> = out.into_iter().collect();
    v.sort_by(|a, b| a.0.deg().cmp(&b.0.deg()).then_with(|| a.0.cmp(&b.0)));
    v
}

/// Square-free decomposition: `f = lc * prod g_i^{m_i}` with the `g_i` monic, square-free and coprime.
pub fn squarefree(f: &Poly) -> Vec<(Poly, usize)> {
    let mut acc: BTreeMap<Poly, usize> = BTreeMap::new();
    sqf_rec(&f.monic(), 1, &mut acc);
    acc.into_iter().collect()
}

fn sqf_rec(f: &Poly, scale: usize, acc: &mut BTreeMap<Poly, usize>) {
    if f.deg() == 0 {
        return;
    }
    let field = f.field();
    let one = Poly::one(field);
    let mut c = f.gcd(&f.derivative());
    let mut w = f.div_rem(&c).0;
    let mut i = 1;
    while w != one {
        let y = w.gcd(&c);
        let z = w.div_rem(&y).0.monic();
        if z != one {
            *acc.entry(z).or_default() += i * scale;
        }
        i += 1;
        w = y;
        c = c.div_rem(&w).0;
    }
    if c.deg() > 0 {
        // Only reachable in characteristic p: c is a polynomial in t^p.
        let p = field.characteristic() as usize;
        let root: Vec<Scalar> = c.coeffs().iter().step_by(p).cloned().collect();
        sqf_rec(&Poly::new(field, root).monic(), scale * p, acc);
    }
}

fn factor_squarefree_fp(f: &Poly, p: u32) -> Vec<Poly> {
    let mut out = Vec::new();
    for (g, d) in distinct_degree(f, p) {
        equal_degree(&g, d, p, &mut out);
    }
    out
}

/// Splits a monic square-free polynomial into products of irreducibles of equal degree.
pub fn distinct_degree(f: &Poly, p: u32) -> Vec<(Poly, usize)> {
    let field = f.field();
    let x = Poly::x(field);
    let mut rest = f.monic();
    let mut h = x.clone();
    let mut out = Vec::new();
    let mut d = 1;
    while rest.deg() >= 2 * d {
        h = h.pow_mod(p as u128, &rest);
        let g = h.sub(&x).gcd(&rest);
        if g.deg() > 0 {
            rest = rest.div_rem(&g).0;
            h = h.rem(&rest);
            out.push((g, d));
        }
        d += 1;
    }
    if rest.deg() > 0 {
        let d = rest.deg();
        out.push((rest, d));
    }
    out
}

fn pow_mod_big(a: &Poly, e: &BigUint, m: &Poly) -> Poly {
    let mut acc = Poly::one(a.field()).rem(m);
    let mut base = a.rem(m);
    for i in 0..e.bits() {
        if e.bit(i) {
            acc = acc.mul(&base).rem(m);
        }
        base = base.mul(&base).rem(m);
    }
    acc
}

fn equal_degree(f: &Poly, d: usize, p: u32, out: &mut Vec<Poly>) {
    let n = f.deg();
    if n == d {
        out.push(f.monic());
        return;
    }
    let field = f.field();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0000 + n as u64 * 131 + d as u64);
    let one = Poly::one(field);
    loop {
        let a = Poly::new(
            field,
            (0..n).map(|_| field.element(rng.gen_range(0..p as u64))).collect(),
        );
        if a.deg() == 0 {
            continue;
        }
        let b = if p == 2 {
            let mut t = a.clone();
            let mut cur = a.clone();
            for _ in 1..d {
                cur = cur.mul(&cur).rem(f);
                t = t.add(&cur);
            }
            t
        } else {
            let e = (BigUint::from(p).pow(d as u32) - 1u32) / 2u32;
            pow_mod_big(&a, &e, f).sub(&one)
        };
        let g = b.gcd(f);
        if g.deg() > 0 && g.deg() < n {
            let h = f.div_rem(&g).0;
            equal_degree(&g, d, p, out);
            equal_degree(&h.monic(), d, p, out);
            return;
        }
    }
}

// ---- rationals -------------------------------------------------------------

type ZPoly = Vec<BigInt>;

fn to_primitive_z(f: &Poly) -> ZPoly {
    let rats: Vec<BigRational> = f.coeffs().iter().map(Scalar::to_rational).collect();
    let den = rats.iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
    let mut z: ZPoly = rats.iter().map(|r| (r * BigRational::from(den.clone())).to_integer()).collect();
    let g = z.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if !g.is_zero() {
        for c in z.iter_mut() {
            *c = &*c / &g;
        }
    }
    if z.last().is_some_and(|c| c.is_negative()) {
        for c in z.iter_mut() {
            *c = -&*c;
        }
    }
    z
}

fn z_to_poly(z: &ZPoly) -> Poly {
    Poly::new(
        Field::Rational,
        z.iter().map(|c| Scalar::Q(Box::new(BigRational::from(c.clone())))).collect(),
    )
}

fn z_mod_p(z: &ZPoly, p: u32) -> Poly {
    let field = Field::Prime(p);
    let pb = BigInt::from(p);
    Poly::new(
        field,
        z.iter().map(|c| field.element(c.mod_floor(&pb).to_u64().unwrap())).collect(),
    )
}

fn fp_to_z(f: &Poly) -> ZPoly {
    f.coeffs().iter().map(|c| BigInt::from(c.index())).collect()
}

fn z_trim(mut z: ZPoly) -> ZPoly {
    while z.last().is_some_and(Zero::is_zero) {
        z.pop();
    }
    z
}

fn z_mul(a: &ZPoly, b: &ZPoly) -> ZPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    z_trim(out)
}

fn z_sub(a: &ZPoly, b: &ZPoly) -> ZPoly {
    let n = a.len().max(b.len());
    z_trim(
        (0..n)
            .map(|i| a.get(i).cloned().unwrap_or_default() - b.get(i).cloned().unwrap_or_default())
            .collect(),
    )
}

fn z_symmetric(z: &ZPoly, m: &BigInt) -> ZPoly {
    let half = m / 2;
    z_trim(
        z.iter()
            .map(|c| {
                let r = c.mod_floor(m);
                if r > half {
                    r - m
                } else {
                    r
                }
            })
            .collect(),
    )
}

/// Exact division in Z[t]; `None` when it leaves a remainder or fractions.
fn z_divide(a: &ZPoly, b: &ZPoly) -> Option<ZPoly> {
    if b.is_empty() || a.len() < b.len() {
        return if a.is_empty() { Some(Vec::new()) } else { None };
    }
    let mut r = a.clone();
    let lb = b.last().unwrap().clone();
    let mut q = vec![BigInt::zero(); a.len() - b.len() + 1];
    for k in (0..q.len()).rev() {
        let top = r[k + b.len() - 1].clone();
        if top.is_zero() {
            continue;
        }
        let (c, rem) = top.div_rem(&lb);
        if !rem.is_zero() {
            return None;
        }
        for (j, bj) in b.iter().enumerate() {
            r[k + j] -= &c * bj;
        }
        q[k] = c;
    }
    if r.iter().all(Zero::is_zero) {
        Some(z_trim(q))
    } else {
        None
    }
}

fn choose_prime(f: &ZPoly) -> u32 {
    let lc = f.last().unwrap();
    let mut p = 3u32;
    loop {
        if Field::prime(p).is_ok() && !(lc % BigInt::from(p)).is_zero() {
            let fp = z_mod_p(f, p);
            if fp.deg() + 1 == f.len() && fp.gcd(&fp.derivative()).deg() == 0 {
                return p;
            }
        }
        p += 2;
    }
}

/// Lifts `f = g * h (mod p)` to modulus `p^k`, with `g` monic and `h` carrying the leading coefficient.
fn hensel_pair(f: &ZPoly, g: &Poly, h0: &Poly, p: u32, k: u32) -> (ZPoly, ZPoly) {
    let field = Field::Prime(p);
    let pb = BigInt::from(p);
    let lc = field.from_rational(&BigRational::from(f.last().unwrap().clone())).unwrap();
    let h = h0.monic().scale(&lc);
    let (s, t) = ext_gcd(g, &h);
    let mut gz = fp_to_z(g);
    let mut hz = fp_to_z(&h);
    let mut modulus = pb.clone();
    for _ in 1..k {
        let err = z_sub(f, &z_mul(&gz, &hz));
        let e: ZPoly = err.iter().map(|c| c / &modulus).collect();
        let e = z_mod_p(&e, p);
        let (q, r) = t.mul(&e).div_rem(g);
        let dh = s.mul(&e).add(&q.mul(&h));
        gz = z_trim(add_scaled(&gz, &fp_to_z(&r), &modulus));
        hz = z_trim(add_scaled(&hz, &fp_to_z(&dh), &modulus));
        modulus *= &pb;
        gz = z_symmetric(&gz, &modulus);
        hz = z_symmetric(&hz, &modulus);
    }
    (gz, hz)
}

fn add_scaled(a: &ZPoly, b: &ZPoly, s: &BigInt) -> ZPoly {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| a.get(i).cloned().unwrap_or_default() + s * b.get(i).cloned().unwrap_or_default())
        .collect()
}

/// `(s, t)` with `s a + t b = 1` for coprime `a`, `b`.
fn ext_gcd(a: &Poly, b: &Poly) -> (Poly, Poly) {
    let field = a.field();
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (Poly::one(field), Poly::zero(field));
    let (mut t0, mut t1) = (Poly::zero(field), Poly::one(field));
    while !r1.is_zero() {
        let (q, r) = r0.div_rem(&r1);
        r0 = r1;
        r1 = r;
        let s2 = s0.sub(&q.mul(&s1));
        s0 = s1;
        s1 = s2;
        let t2 = t0.sub(&q.mul(&t1));
        t0 = t1;
        t1 = t2;
    }
    let inv = r0.leading().inv().expect("coprime");
    (s0.scale(&inv), t0.scale(&inv))
}

fn factor_squarefree_q(f: &Poly) -> Vec<Poly> {
    let fz = to_primitive_z(f);
    if fz.len() <= 2 {
        return vec![f.monic()];
    }
    let p = choose_prime(&fz);
    let fp = z_mod_p(&fz, p);
    let mods = factor_squarefree_fp(&fp.monic(), p);
    if mods.len() == 1 {
        return vec![f.monic()];
    }
    let n = fz.len() - 1;
    let maxc = fz.iter().map(|c| c.abs()).max().unwrap();
    let lc = fz.last().unwrap().abs();
    let bound = BigInt::from(2u32).pow(n as u32) * BigInt::from(n + 1) * &maxc * &lc * 2;
    let mut k = 1u32;
    let mut modulus = BigInt::from(p);
    while modulus <= bound {
        modulus *= p;
        k += 1;
    }
    // Lift all modular factors by peeling one at a time.
    let mut lifted: Vec<ZPoly> = Vec::new();
    let mut rest_z = fz.clone();
    let mut rest_mods = mods.clone();
    while rest_mods.len() > 1 {
        let g = rest_mods.remove(0);
        let h = rest_mods.iter().fold(Poly::one(Field::Prime(p)), |acc, x| acc.mul(x));
        let (gz, hz) = hensel_pair(&rest_z, &g, &h, p, k);
        lifted.push(gz);
        rest_z = hz;
    }
    // Remaining factor: make it monic mod p^k.
    let lc_rest = rest_z.last().unwrap().clone();
    let inv = mod_inverse(&lc_rest, &modulus);
    let last: ZPoly = rest_z.iter().map(|c| (c * &inv).mod_floor(&modulus)).collect();
    lifted.push(z_symmetric(&last, &modulus));

    // Recombination over subsets of increasing size.
    let mut remaining: Vec<usize> = (0..lifted.len()).collect();
    let mut cur = fz.clone();
    let mut out = Vec::new();
    let mut size = 1;
    while 2 * size <= remaining.len() {
        let mut found = false;
        for subset in subsets(&remaining, size) {
            let lcc = cur.last().unwrap().clone();
            let mut g: ZPoly = vec![lcc.clone()];
            for &i in &subset {
                g = z_symmetric(&z_mul(&g, &lifted[i]), &modulus);
            }
            let g = primitive(&g);
            if let Some(q) = z_divide(&cur, &g) {
                out.push(z_to_poly(&g).monic());
                cur = primitive(&q);
                remaining.retain(|i| !subset.contains(i));
                found = true;
                break;
            }
        }
        if !found {
            size += 1;
        }
    }
    if cur.len() > 1 {
        out.push(z_to_poly(&cur).monic());
    }
    out
}

fn primitive(z: &ZPoly) -> ZPoly {
    let g = z.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    let mut v: ZPoly = if g.is_zero() { z.clone() } else { z.iter().map(|c| c / &g).collect() };
    if v.last().is_some_and(|c| c.is_negative()) {
        for c in v.iter_mut() {
            *c = -&*c;
        }
    }
    v
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> BigInt {
    let e = a.extended_gcd(m);
    e.x.mod_floor(m)
}

fn subsets(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(items: &[usize], k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            cur.push(items[i]);
            rec(items, k, i + 1, cur, out);
            cur.pop();
        }
    }
    rec(items, k, 0, &mut cur, &mut out);
    out
}
