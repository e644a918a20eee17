//! Sparse multivariate polynomials with graded-lex ordered monomials.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{Field, Matrix, Scalar};

/// Exponent vector, ordered graded-lexicographically (`x1 > x2 > ...`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mono(pub Vec<u32>);

impl Mono {
    pub fn one(n: usize) -> Mono {
        Mono(vec![0; n])
    }

    pub fn var(n: usize, i: usize) -> Mono {
        let mut e = vec![0; n];
        e[i] = 1;
        Mono(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, other: &Mono) -> Mono {
        Mono(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn weight(&self, weights: &[i64]) -> i64 {
        self.0.iter().zip(weights).map(|(&e, &w)| e as i64 * w).sum()
    }

    /// All monomials in `n` variables of total degree `< bound`, ascending.
    pub fn all_below(n: usize, bound: u32) -> Vec<Mono> {
        let mut out = Vec::new();
        for d in 0..bound {
            out.extend(Mono::of_degree(n, d));
        }
        out
    }

    /// Monomials of exact degree `d`, ascending in graded-lex order.
    pub fn of_degree(n: usize, d: u32) -> Vec<Mono> {
        let mut out = Vec::new();
        let mut cur = vec![0u32; n];
        fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Mono>) {
            let n = cur.len();
            if i + 1 == n {
                cur[i] = left;
                out.push(Mono(cur.clone()));
                return;
            }
            for e in 0..=left {
                cur[i] = e;
                rec(i + 1, left - e, cur, out);
            }
        }
        if n == 0 {
            if d == 0 {
                out.push(Mono(Vec::new()));
            }
            return out;
        }
        rec(0, d, &mut cur, &mut out);
        out.sort();
        out
    }

    pub fn render(&self, names: &[String]) -> String {
        let parts: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| if e == 1 { names[i].clone() } else { format!("{}^{}", names[i], e) })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Mono {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MPoly {
    field: Field,
    nvars: usize,
    terms: BTreeMap<Mono, Scalar>,
}

impl MPoly {
    pub fn zero(field: Field, nvars: usize) -> MPoly {
        MPoly { field, nvars, terms: BTreeMap::new() }
    }

    pub fn constant(field: Field, nvars: usize, c: Scalar) -> MPoly {
        MPoly::term(field, Mono::one(nvars), c)
    }

    pub fn term(field: Field, m: Mono, c: Scalar) -> MPoly {
        let nvars = m.0.len();
        let mut p = MPoly::zero(field, nvars);
        p.add_term(m, c);
        p
    }

    pub fn var(field: Field, nvars: usize, i: usize) -> MPoly {
        MPoly::term(field, Mono::var(nvars, i), field.one())
    }

    pub fn from_terms(field: Field, nvars: usize, terms: Vec<(Mono, Scalar)>) -> MPoly {
        let mut p = MPoly::zero(field, nvars);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Mono) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: Mono, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                *v += &c;
                if v.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn add(&self, other: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &MPoly) -> MPoly {
        self.add(&other.scale(&-self.field.one()))
    }

    pub fn scale(&self, s: &Scalar) -> MPoly {
        let mut out = MPoly::zero(self.field, self.nvars);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c * s);
        }
        out
    }

    /// Product with all terms of degree `> max_degree` discarded.
    pub fn mul_truncated(&self, other: &MPoly, max_degree: u32) -> MPoly {
        let mut out = MPoly::zero(self.field, self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                if m1.degree() + m2.degree() <= max_degree {
                    out.add_term(m1.mul(m2), c1 * c2);
                }
            }
        }
        out
    }

    pub fn mul(&self, other: &MPoly) -> MPoly {
        self.mul_truncated(other, u32::MAX)
    }

    pub fn truncate(&self, max_degree: u32) -> MPoly {
        let mut out = MPoly::zero(self.field, self.nvars);
        for (m, c) in &self.terms {
            if m.degree() <= max_degree {
                out.add_term(m.clone(), c.clone());
            }
        }
        out
    }

    pub fn homogeneous_part(&self, d: u32) -> MPoly {
        let mut out = MPoly::zero(self.field, self.nvars);
        for (m, c) in &self.terms {
            if m.degree() == d {
                out.add_term(m.clone(), c.clone());
            }
        }
        out
    }

    pub fn min_degree(&self) -> Option<u32> {
        self.terms.keys().map(Mono::degree).min()
    }

    pub fn max_degree(&self) -> Option<u32> {
        self.terms.keys().map(Mono::degree).max()
    }

    /// Substitutes `x_i -> subst[i]`, truncating at `max_degree`.
    pub fn compose(&self, subst: &[MPoly], max_degree: u32) -> MPoly {
        let n = subst.first().map(|s| s.nvars).unwrap_or(self.nvars);
        let mut out = MPoly::zero(self.field, n);
        for (m, c) in &self.terms {
            let mut t = MPoly::constant(self.field, n, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                for _ in 0..e {
                    t = t.mul_truncated(&subst[i], max_degree);
                }
            }
            out = out.add(&t);
        }
        out
    }

    /// Linear change of variables `x -> M x`, i.e. `x_i -> sum_j M[i][j] x_j`.
    pub fn linear_substitute(&self, m: &Matrix) -> MPoly {
        let n = m.cols();
        let subst: Vec<MPoly> = (0..m.rows())
            .map(|i| {
                MPoly::from_terms(
                    self.field,
                    n,
                    (0..n).map(|j| (Mono::var(n, j), m[(i, j)].clone())).collect(),
                )
            })
            .collect();
        self.compose(&subst, u32::MAX)
    }

    pub fn reduce(&self, field: Field) -> Result<MPoly> {
        let mut out = MPoly::zero(field, self.nvars);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c.reduce(field)?);
        }
        Ok(out)
    }

    /// Evaluates at points of a commutative algebra given by closures.
    pub fn eval_with<T: Clone>(
        &self,
        point: &[T],
        scalar: impl Fn(&Scalar) -> T,
        mul: impl Fn(&T, &T) -> T,
        add: impl Fn(&T, &T) -> T,
        zero: &T,
    ) -> T {
        let mut acc = zero.clone();
        for (m, c) in &self.terms {
            let mut t = scalar(c);
            for (i, &e) in m.0.iter().enumerate() {
                for _ in 0..e {
                    t = mul(&t, &point[i]);
                }
            }
            acc = add(&acc, &t);
        }
        acc
    }

    pub fn render(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let cs = c.to_string();
            let (neg, mag) = match cs.strip_prefix('-') {
                Some(r) => (true, r.to_string()),
                None => (false, cs),
            };
            if i == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let mono = m.render(names);
            if mono == "1" {
                s.push_str(&mag);
            } else if mag == "1" {
                s.push_str(&mono);
            } else {
                s.push_str(&format!("{mag}*{mono}"));
            }
        }
        s
    }

    /// `(exponents, coefficient)` pairs in ascending graded-lex order.
    pub fn to_term_list(&self) -> Vec<(Vec<u32>, String)> {
        self.terms.iter().map(|(m, c)| (m.0.clone(), c.to_string())).collect()
    }

    /// Parses expressions such as `x^2*y - 3/2*y^3 + 1`.
    pub fn parse(field: Field, names: &[String], text: &str) -> Result<MPoly> {
        let n = names.len();
        let mut out = MPoly::zero(field, n);
        let cleaned: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if cleaned.is_empty() {
            return Err(Error::Schema("empty polynomial".into()));
        }
        let mut terms: Vec<(bool, String)> = Vec::new();
        let mut cur = String::new();
        let mut neg = false;
        for (i, ch) in cleaned.chars().enumerate() {
            if (ch == '+' || ch == '-') && i > 0 && !cur.ends_with('^') {
                terms.push((neg, std::mem::take(&mut cur)));
                neg = ch == '-';
            } else if (ch == '+' || ch == '-') && i == 0 {
                neg = ch == '-';
            } else {
                cur.push(ch);
            }
        }
        terms.push((neg, cur));
        for (neg, t) in terms {
            if t.is_empty() {
                return Err(Error::Schema(format!("malformed polynomial '{text}'")));
            }
            let mut coeff = field.one();
            let mut exps = vec![0u32; n];
            for factor in t.split('*') {
                if factor.is_empty() {
                    return Err(Error::Schema(format!("malformed polynomial '{text}'")));
                }
                if factor.chars().next().unwrap().is_ascii_digit() {
                    coeff = &coeff * &field.parse_scalar(factor)?;
                    continue;
                }
                let (name, e) = match factor.split_once('^') {
                    Some((a, b)) => (
                        a,
                        b.parse::<u32>()
                            .map_err(|_| Error::Schema(format!("bad exponent in '{factor}'")))?,
                    ),
                    None => (factor, 1),
                };
                let idx = names
                    .iter()
                    .position(|v| v == name)
                    .ok_or_else(|| Error::Schema(format!("unknown variable '{name}'")))?;
                exps[idx] += e;
            }
            if neg {
                coeff = -coeff;
            }
            out.add_term(Mono(exps), coeff);
        }
        Ok(out)
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (1..=self.nvars).map(|i| format!("x{i}")).collect();
        write!(f, "{}", self.render(&names))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grlex_order() {
        let a = Mono(vec![2, 0]);
        let b = Mono(vec![1, 1]);
        let c = Mono(vec![0, 3]);
        assert!(a > b);
        assert!(c > a);
        assert_eq!(Mono::of_degree(2, 2), vec![Mono(vec![0, 2]), Mono(vec![1, 1]), Mono(vec![2, 0])]);
    }

    #[test]
    fn parse_and_render() {
        let q = Field::Rational;
        let names = vec!["x".to_string(), "y".to_string()];
        let p = MPoly::parse(q, &names, "x^2*y - 3/2*y^3 + 1").unwrap();
        assert_eq!(p.len(), 3);
        assert_eq!(p.render(&names), "x^2*y - 3/2*y^3 + 1");
        assert!(MPoly::parse(q, &names, "z").is_err());
    }

    #[test]
    fn substitution() {
        let q = Field::Rational;
        let x = MPoly::var(q, 2, 0);
        let y = MPoly::var(q, 2, 1);
        let p = x.mul(&y);
        let m = Matrix::from_i64(q, &[&[2, 0], &[0, 3]]);
        assert_eq!(p.linear_substitute(&m), p.scale(&q.from_i64(6)));
    }
}
