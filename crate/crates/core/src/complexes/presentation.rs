use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{Field, Matrix};

use super::delta::DeltaComplex;
use super::local_system::LocalSystem;

/// A letter `g^{±1}` with `g` the generator index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Letter {
    pub generator: usize,
    pub inverse: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Presentation {
    pub generators: Vec<String>,
    pub relators: Vec<Vec<Letter>>,
}

fn superscript_digit(c: char) -> Option<u32> {
    "⁰¹²³⁴⁵⁶⁷⁸⁹".chars().position(|d| d == c).map(|p| p as u32)
}

/// Parses words such as `a b a^-1 b^-1`, `aba^-1b^-1`, `a^3` or `ab⁻¹`.
pub fn parse_word(generators: &[String], word: &str) -> Result<Vec<Letter>> {
    let chars: Vec<char> = word.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() || c == '*' || c == '.' || c == '·' {
            i += 1;
            continue;
        }
        let rest: String = chars[i..].iter().collect();
        let g = generators
            .iter()
            .enumerate()
            .filter(|(_, name)| !name.is_empty() && rest.starts_with(name.as_str()))
            .max_by_key(|(_, name)| name.len())
            .map(|(g, name)| (g, name.chars().count()))
            .ok_or_else(|| Error::Schema(format!("unknown generator at '{rest}' in word '{word}'")))?;
        i += g.1;
        let mut exp: i64 = 1;
        if i < chars.len() && chars[i] == '^' {
            i += 1;
            let start = i;
            if i < chars.len() && (chars[i] == '-' || chars[i] == '+') {
                i += 1;
            }
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            exp = s.parse().map_err(|_| Error::Schema(format!("bad exponent '{s}' in word '{word}'")))?;
        } else if i < chars.len() && (chars[i] == '⁻' || superscript_digit(chars[i]).is_some()) {
            let neg = chars[i] == '⁻';
            if neg {
                i += 1;
            }
            let mut v: i64 = 0;
            let mut any = false;
            while i < chars.len() {
                match superscript_digit(chars[i]) {
                    Some(d) => {
                        v = v * 10 + d as i64;
                        any = true;
                        i += 1;
                    }
                    None => break,
                }
            }
            if !any {
                return Err(Error::Schema(format!("bad exponent in word '{word}'")));
            }
            exp = if neg { -v } else { v };
        }
        if exp == 0 {
            continue;
        }
        if exp.unsigned_abs() > 1000 {
            return Err(Error::Schema(format!("exponent {exp} too large in word '{word}'")));
        }
        for _ in 0..exp.unsigned_abs() {
            out.push(Letter { generator: g.0, inverse: exp < 0 });
        }
    }
    Ok(out)
}

impl Presentation {
    pub fn new(generators: Vec<String>, relators: Vec<Vec<Letter>>) -> Result<Presentation> {
        for (i, name) in generators.iter().enumerate() {
            if name.is_empty() || generators[..i].contains(name) {
                return Err(Error::Schema(format!("bad or repeated generator name '{name}'")));
            }
        }
        for r in &relators {
            if r.is_empty() {
                return Err(Error::Schema("empty relator".into()));
            }
            if r.iter().any(|l| l.generator >= generators.len()) {
                return Err(Error::Schema("relator uses an unknown generator".into()));
            }
        }
        Ok(Presentation { generators, relators })
    }

    pub fn parse(generators: &[&str], relators: &[&str]) -> Result<Presentation> {
        let gens: Vec<String> = generators.iter().map(|s| s.to_string()).collect();
        let rels = relators.iter().map(|w| parse_word(&gens, w)).collect::<Result<Vec<_>>>()?;
        Presentation::new(gens, rels)
    }

    /// Evaluates a word on generator matrices.
    pub fn evaluate(&self, word: &[Letter], images: &[Matrix]) -> Result<Matrix> {
        let field = images[0].field();
        let mut acc = Matrix::identity(field, images[0].rows());
        for l in word {
            let m = if l.inverse {
                images[l.generator].inverse().ok_or_else(|| Error::Singular("generator image".into()))?
            } else {
                images[l.generator].clone()
            };
            acc = acc.mul(&m);
        }
        Ok(acc)
    }
}

/// Presentation 2-complex with the generator loops as edges `0..g`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PresentationComplex {
    pub presentation: Presentation,
    pub complex: DeltaComplex,
    /// `generator_edges[g]` is the edge carrying generator `g`.
    pub generator_edges: Vec<usize>,
    /// Auxiliary edges whose transport is fixed to the identity (cone spokes).
    pub pinned_edges: Vec<usize>,
}

struct Builder {
    vertices: usize,
    edges: Vec<Vec<usize>>,
    triangles: Vec<Vec<usize>>,
}

impl Builder {
    fn edge(&mut self, from: usize, to: usize) -> usize {
        self.edges.push(vec![to, from]);
        self.edges.len() - 1
    }

    /// Triangle on ordered vertices `(u, v, w)` with the edges `uv`, `vw`, `uw`.
    fn triangle(&mut self, uv: usize, vw: usize, uw: usize) {
        self.triangles.push(vec![vw, uw, uv]);
    }
}

/// Builds the presentation complex.
///
/// A relator whose cyclic word can be rotated to start with a positive letter and end with an
/// inverse letter (and has length at least 3) is fanned out from the polygon's first vertex:
/// `L - 2` triangles and `L - 3` chords. Every other relator is coned off from an auxiliary
/// vertex, which keeps every cell non-degenerate.
pub fn presentation_complex(p: &Presentation) -> Result<PresentationComplex> {
    let p = Presentation::new(p.generators.clone(), p.relators.clone())?;
    let mut b = Builder { vertices: 1, edges: Vec::new(), triangles: Vec::new() };
    let generator_edges: Vec<usize> = (0..p.generators.len()).map(|_| b.edge(0, 0)).collect();
    let mut pinned = Vec::new();
    for rel in &p.relators {
        let l = rel.len();
        let rotation = (0..l).find(|&k| !rel[k].inverse && rel[(k + l - 1) % l].inverse);
        match rotation {
            Some(k) if l >= 3 => {
                let w: Vec<Letter> = (0..l).map(|i| rel[(k + i) % l]).collect();
                // Polygon p_0 .. p_{L-1}; side i joins p_{i-1} and p_i and reads w[i-1].
                // `to_p[i]` is the edge from p_0 to p_i.
                let mut to_p = vec![usize::MAX; l];
                to_p[1] = generator_edges[w[0].generator];
                to_p[l - 1] = generator_edges[w[l - 1].generator];
                for t in 1..l - 1 {
                    let next = if t + 1 == l - 1 { to_p[l - 1] } else { b.edge(0, 0) };
                    to_p[t + 1] = next;
                    let side = w[t];
                    let g = generator_edges[side.generator];
                    if side.inverse {
                        b.triangle(to_p[t + 1], g, to_p[t]);
                    } else {
                        b.triangle(to_p[t], g, to_p[t + 1]);
                    }
                }
            }
            _ => {
                let z = b.vertices;
                b.vertices += 1;
                let spokes: Vec<usize> = (0..l).map(|_| b.edge(z, 0)).collect();
                pinned.push(spokes[0]);
                for i in 1..=l {
                    let side = rel[i - 1];
                    let g = generator_edges[side.generator];
                    let (prev, cur) = (spokes[i - 1], spokes[i % l]);
                    if side.inverse {
                        b.triangle(cur, g, prev);
                    } else {
                        b.triangle(prev, g, cur);
                    }
                }
            }
        }
    }
    let complex = DeltaComplex::with_vertices(b.vertices, vec![b.edges, b.triangles])?;
    Ok(PresentationComplex { presentation: p, complex, generator_edges, pinned_edges: pinned })
}

impl PresentationComplex {
    /// Flat system from generator images, with auxiliary transports forced by flatness.
    pub fn local_system(&self, field: Field, images: &[Matrix]) -> Result<LocalSystem> {
        let x = &self.complex;
        if images.len() != self.generator_edges.len() {
            return Err(Error::Schema(format!(
                "{} generator images for {} generators",
                images.len(),
                self.generator_edges.len()
            )));
        }
        if images.is_empty() {
            return Err(Error::Schema("no generators to fix the rank".into()));
        }
        let rank = images[0].rows();
        let mut t: Vec<Option<Matrix>> = vec![None; x.count(1)];
        for (g, &e) in self.generator_edges.iter().enumerate() {
            if images[g].rows() != rank || images[g].cols() != rank {
                return Err(Error::Dimension(format!("image of generator {g} has the wrong shape")));
            }
            if images[g].inverse().is_none() {
                return Err(Error::Singular(format!("image of generator {g}")));
            }
            t[e] = Some(images[g].clone());
        }
        for &e in &self.pinned_edges {
            t[e] = Some(Matrix::identity(field, rank));
        }
        loop {
            let mut changed = false;
            for s in 0..x.count(2) {
                let (e01, e12, e02) = (x.face(2, s, 2), x.face(2, s, 0), x.face(2, s, 1));
                let known = (t[e01].is_some(), t[e12].is_some(), t[e02].is_some());
                let inv = |m: &Matrix| m.inverse().ok_or_else(|| Error::Singular("forced transport".into()));
                match known {
                    (true, true, false) => {
                        t[e02] = Some(t[e01].as_ref().unwrap().mul(t[e12].as_ref().unwrap()));
                        changed = true;
                    }
                    (true, false, true) => {
                        t[e12] = Some(inv(t[e01].as_ref().unwrap())?.mul(t[e02].as_ref().unwrap()));
                        changed = true;
                    }
                    (false, true, true) => {
                        t[e01] = Some(t[e02].as_ref().unwrap().mul(&inv(t[e12].as_ref().unwrap())?));
                        changed = true;
                    }
                    _ => {}
                }
            }
            if !changed {
                break;
            }
        }
        let transport = t
            .into_iter()
            .enumerate()
            .map(|(e, m)| m.ok_or_else(|| Error::Complex(format!("transport on edge {e} is not determined"))))
            .collect::<Result<Vec<_>>>()?;
        LocalSystem::new(x, field, rank, transport)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_group_is_a_wedge() {
        let p = Presentation::parse(&["a", "b"], &[]).unwrap();
        let pc = presentation_complex(&p).unwrap();
        assert_eq!(pc.complex, DeltaComplex::wedge_of_circles(2));
    }

    #[test]
    fn commutator_gives_the_torus() {
        let p = Presentation::parse(&["a", "b"], &["a b a^-1 b^-1"]).unwrap();
        let pc = presentation_complex(&p).unwrap();
        assert_eq!(pc.complex.counts(), [1, 3, 2, 0]);
        assert_eq!(pc.complex.euler_characteristic(), 0);
    }

    #[test]
    fn cube_relator_is_coned() {
        let p = Presentation::parse(&["a"], &["a^3"]).unwrap();
        let pc = presentation_complex(&p).unwrap();
        assert_eq!(pc.complex.counts(), [2, 4, 3, 0]);
        assert_eq!(pc.complex.euler_characteristic(), 1);
        let q = Field::Rational;
        let err = pc.local_system(q, &[Matrix::from_i64(q, &[&[2]])]).unwrap_err();
        assert!(matches!(err, Error::NotFlat(_)));
        let f3 = Field::Prime(3);
        let u = Matrix::from_i64(f3, &[&[1, 1], &[0, 1]]);
        assert!(pc.local_system(f3, &[u]).is_ok());
    }

    #[test]
    fn parses_word_forms() {
        let g: Vec<String> = vec!["a".into(), "b".into()];
        let w1 = parse_word(&g, "aba^-1b^-1").unwrap();
        let w2 = parse_word(&g, "a b a⁻¹ b⁻¹").unwrap();
        let w3 = parse_word(&g, "a*b*a^-1*b^-1").unwrap();
        assert_eq!(w1, w2);
        assert_eq!(w1, w3);
        assert_eq!(parse_word(&g, "a³").unwrap().len(), 3);
        assert!(parse_word(&g, "ac").is_err());
        assert!(Presentation::parse(&["a"], &[""]).is_err());
    }

    #[test]
    fn short_relators() {
        let q = Field::Rational;
        for (rel, img, ok) in [("a", 1, true), ("a", 2, false), ("a^2", -1, true), ("a^2", 2, false), ("a b^-1", 3, true)] {
            let gens: &[&str] = if rel.contains('b') { &["a", "b"] } else { &["a"] };
            let p = Presentation::parse(gens, &[rel]).unwrap();
            let pc = presentation_complex(&p).unwrap();
            let images: Vec<Matrix> = gens.iter().map(|_| Matrix::from_i64(q, &[&[img]])).collect();
            assert_eq!(pc.local_system(q, &images).is_ok(), ok, "{rel} with {img}");
        }
    }
}
