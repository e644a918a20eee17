use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MAX_DIM: usize = 3;

/// Finite semi-simplicial set of dimension at most 3.
///
/// `faces[n][s]` lists the `n + 1` faces `d_0 s, ..., d_n s` of the `n`-cell `s`
/// as indices of `(n-1)`-cells. `faces[0]` holds one empty list per vertex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeltaComplex {
    faces: Vec<Vec<Vec<usize>>>,
}

impl DeltaComplex {
    /// Validates a cell table: `cells[n][s]` are the faces of the `n`-cell `s`
    /// (`cells[0]` may be given as a list of empty lists or omitted via [`DeltaComplex::with_vertices`]).
    pub fn new(cells: Vec<Vec<Vec<usize>>>) -> Result<DeltaComplex> {
        if cells.is_empty() {
            return Err(Error::Complex("a complex needs at least one vertex".into()));
        }
        if cells.len() > MAX_DIM + 1 {
            return Err(Error::Complex(format!("dimension above {MAX_DIM} is not supported")));
        }
        let mut faces = cells;
        while faces.len() < MAX_DIM + 1 {
            faces.push(Vec::new());
        }
        if faces[0].is_empty() {
            return Err(Error::Complex("a complex needs at least one vertex".into()));
        }
        for (n, level) in faces.iter().enumerate() {
            for (s, f) in level.iter().enumerate() {
                let expected = if n == 0 { 0 } else { n + 1 };
                if f.len() != expected {
                    return Err(Error::Complex(format!(
                        "{n}-cell {s} has {} faces, expected {expected}",
                        f.len()
                    )));
                }
                if n > 0 {
                    if let Some(bad) = f.iter().find(|&&i| i >= faces[n - 1].len()) {
                        return Err(Error::Complex(format!("{n}-cell {s} names missing face {bad}")));
                    }
                }
            }
        }
        let x = DeltaComplex { faces };
        x.check_identities()?;
        Ok(x)
    }

    /// Cell table with `v` vertices and cells of dimension `1..`.
    pub fn with_vertices(v: usize, higher: Vec<Vec<Vec<usize>>>) -> Result<DeltaComplex> {
        let mut cells = vec![vec![Vec::new(); v]];
        cells.extend(higher);
        DeltaComplex::new(cells)
    }

    fn check_identities(&self) -> Result<()> {
        for n in 2..=MAX_DIM {
            for s in 0..self.count(n) {
                for j in 0..=n {
                    for i in 0..j {
                        let lhs = self.face(n - 1, self.face(n, s, j), i);
                        let rhs = self.face(n - 1, self.face(n, s, i), j - 1);
                        if lhs != rhs {
                            return Err(Error::Complex(format!(
                                "face identity d_{i} d_{j} = d_{} d_{i} fails on {n}-cell {s}",
                                j - 1
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn point() -> DeltaComplex {
        DeltaComplex::new(vec![vec![Vec::new()]]).unwrap()
    }

    /// One vertex with `k` loops.
    pub fn wedge_of_circles(k: usize) -> DeltaComplex {
        DeltaComplex::with_vertices(1, vec![vec![vec![0, 0]; k]]).unwrap()
    }

    pub fn circle() -> DeltaComplex {
        DeltaComplex::wedge_of_circles(1)
    }

    /// The `d`-torus (`d <= 3`) with its one-vertex Freudenthal triangulation.
    ///
    /// Cells of dimension `n` are ordered sequences of `n` nonempty disjoint subsets of the
    /// coordinate set; `d_0` drops the first, `d_n` the last, and inner faces merge neighbours.
    /// Edges `0..d` are the coordinate loops and for `d = 2` the diagonal is edge `2`.
    pub fn torus(d: usize) -> DeltaComplex {
        assert!((1..=MAX_DIM).contains(&d));
        let mut levels: Vec<Vec<Vec<u32>>> = vec![vec![Vec::new()]];
        for n in 1..=d {
            let mut cells: Vec<Vec<u32>> = Vec::new();
            let full = (1u32 << d) - 1;
            fn rec(n: usize, used: u32, full: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
                if cur.len() == n {
                    out.push(cur.clone());
                    return;
                }
                for m in 1..=full {
                    if m & used == 0 {
                        cur.push(m);
                        rec(n, used | m, full, cur, out);
                        cur.pop();
                    }
                }
            }
            rec(n, 0, full, &mut Vec::new(), &mut cells);
            if n == 1 {
                // coordinate loops first, then the remaining edges by mask
                cells.sort_by_key(|c| (c[0].count_ones() != 1, c[0].count_ones(), c[0]));
            }
            levels.push(cells);
        }
        let index = |n: usize, cell: &[u32], levels: &Vec<Vec<Vec<u32>>>| -> usize {
            levels[n].iter().position(|c| c == cell).unwrap()
        };
        let mut table: Vec<Vec<Vec<usize>>> = vec![vec![Vec::new()]];
        for n in 1..=d {
            let mut lvl = Vec::new();
            for cell in &levels[n] {
                let mut fs = Vec::new();
                for i in 0..=n {
                    let face: Vec<u32> = if n == 1 {
                        Vec::new()
                    } else if i == 0 {
                        cell[1..].to_vec()
                    } else if i == n {
                        cell[..n - 1].to_vec()
                    } else {
                        let mut f = cell[..i - 1].to_vec();
                        f.push(cell[i - 1] | cell[i]);
                        f.extend_from_slice(&cell[i + 1..]);
                        f
                    };
                    fs.push(if n == 1 { 0 } else { index(n - 1, &face, &levels) });
                }
                lvl.push(fs);
            }
            table.push(lvl);
        }
        DeltaComplex::new(table).unwrap()
    }

    pub fn dim(&self) -> usize {
        (0..=MAX_DIM).rev().find(|&n| self.count(n) > 0).unwrap_or(0)
    }

    pub fn count(&self, n: usize) -> usize {
        self.faces.get(n).map_or(0, Vec::len)
    }

    pub fn counts(&self) -> [usize; 4] {
        [self.count(0), self.count(1), self.count(2), self.count(3)]
    }

    pub fn euler_characteristic(&self) -> i64 {
        (0..=MAX_DIM).map(|n| if n % 2 == 0 { 1 } else { -1 } * self.count(n) as i64).sum()
    }

    /// `d_i` of the `n`-cell `s`.
    pub fn face(&self, n: usize, s: usize, i: usize) -> usize {
        self.faces[n][s][i]
    }

    pub fn faces_of(&self, n: usize, s: usize) -> &[usize] {
        &self.faces[n][s]
    }

    pub fn cell_table(&self) -> &[Vec<Vec<usize>>] {
        &self.faces
    }

    /// The face of the `n`-cell `s` spanned by the listed (increasing) vertex positions.
    pub fn subface(&self, n: usize, s: usize, keep: &[usize]) -> usize {
        let mut dim = n;
        let mut cell = s;
        let mut positions: Vec<usize> = (0..=n).collect();
        // Drop vertices from the top so the remaining positions stay valid.
        for pos in (0..=n).rev() {
            if keep.contains(&pos) {
                continue;
            }
            let i = positions.iter().position(|&p| p == pos).unwrap();
            cell = self.face(dim, cell, i);
            positions.remove(i);
            dim -= 1;
        }
        cell
    }

    pub fn vertex(&self, n: usize, s: usize, k: usize) -> usize {
        if n == 0 {
            return s;
        }
        self.subface(n, s, &[k])
    }

    /// Edge between vertex positions `i < j` of the `n`-cell `s`.
    pub fn edge(&self, n: usize, s: usize, i: usize, j: usize) -> usize {
        if n == 1 {
            return s;
        }
        self.subface(n, s, &[i, j])
    }

    /// `front_p`: the face on vertices `0..=p`.
    pub fn front(&self, n: usize, s: usize, p: usize) -> usize {
        if p == n {
            return s;
        }
        self.subface(n, s, &(0..=p).collect::<Vec<_>>())
    }

    /// `back_q`: the face on vertices `n-q..=n`.
    pub fn back(&self, n: usize, s: usize, q: usize) -> usize {
        if q == n {
            return s;
        }
        self.subface(n, s, &(n - q..=n).collect::<Vec<_>>())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert_eq!(DeltaComplex::point().counts(), [1, 0, 0, 0]);
        assert_eq!(DeltaComplex::circle().counts(), [1, 1, 0, 0]);
        let t = DeltaComplex::torus(2);
        assert_eq!(t.counts(), [1, 3, 2, 0]);
        assert_eq!(t.euler_characteristic(), 0);
        // T1 has faces (b, c, a), T2 has faces (a, c, b)
        assert_eq!(t.faces_of(2, 0), &[1, 2, 0]);
        assert_eq!(t.faces_of(2, 1), &[0, 2, 1]);
        let t3 = DeltaComplex::torus(3);
        assert_eq!(t3.counts(), [1, 7, 12, 6]);
        assert_eq!(t3.euler_characteristic(), 0);
    }

    #[test]
    fn torus_by_hand() {
        let t = DeltaComplex::with_vertices(1, vec![vec![vec![0, 0]; 3], vec![vec![1, 2, 0], vec![0, 2, 1]]])
            .unwrap();
        assert_eq!(t, DeltaComplex::torus(2));
    }

    #[test]
    fn rejects_bad_tables() {
        assert!(DeltaComplex::with_vertices(1, vec![vec![vec![0, 3]]]).is_err());
        // a triangle whose edges do not share vertices consistently
        let bad = DeltaComplex::with_vertices(
            3,
            vec![vec![vec![1, 0], vec![2, 1], vec![2, 0]], vec![vec![1, 0, 2]]],
        );
        assert!(bad.is_err());
    }

    #[test]
    fn subfaces_of_a_tetrahedron() {
        let t3 = DeltaComplex::torus(3);
        for s in 0..t3.count(3) {
            // edge (0,1) is the first edge of front_2
            let f2 = t3.front(3, s, 2);
            assert_eq!(t3.edge(3, s, 0, 1), t3.edge(2, f2, 0, 1));
            let b2 = t3.back(3, s, 2);
            assert_eq!(t3.edge(3, s, 2, 3), t3.edge(2, b2, 1, 2));
        }
    }
}
