use defhull::artin::{RVec, TestRing};
use defhull::complexes::{presentation_complex, DeltaComplex, LocalSystem, Presentation};
use defhull::dgla::{def_class_representatives, def_classes, dgla_from_complex};
use defhull::hull::RepresentationProblem;
use defhull::linalg::{Field, Matrix, Scalar};
use defhull::orbits::{count_orbits, Coords, DeformationProblem, DEFAULT_BUDGET};
use defhull::sdc::SdcProblem;

fn rings(p: u32) -> Vec<TestRing> {
    let f = Field::Prime(p);
    let names = vec!["x".to_string(), "y".to_string()];
    let mut out = vec![TestRing::dual_numbers(f), TestRing::truncated_polynomial(f, 3).unwrap()];
    out.push(TestRing::new(f, &names, &[], 2, None).unwrap());
    out
}

fn check(x: &DeltaComplex, sys: &LocalSystem, ring: &TestRing) -> usize {
    let d = dgla_from_complex(x, sys).unwrap();
    if d.check_ring(ring).is_err() {
        return 0;
    }
    let naive = match def_class_representatives(&d, ring, 2_000_000) {
        Ok(n) => n.count,
        Err(_) => return 0,
    };
    let tower = def_classes(&d, ring, DEFAULT_BUDGET).unwrap().count;
    assert_eq!(tower, naive, "ring dim {}", ring.dim());
    1
}

#[test]
fn tower_agrees_with_enumeration() {
    let mut ran = 0;
    for p in [2u32, 3] {
        let f = Field::Prime(p);
        for ring in rings(p) {
            let c = DeltaComplex::circle();
            for m in [&[&[1i64, 1][..], &[0, 1]][..], &[&[1, 0], &[0, 1]], &[&[0, 1], &[1, 1]]] {
                let sys = LocalSystem::new(&c, f, 2, vec![Matrix::from_i64(f, m)]).unwrap();
                ran += check(&c, &sys, &ring);
            }
            let t = DeltaComplex::torus(2);
            ran += check(&t, &LocalSystem::trivial(&t, f, 1), &ring);
            let w = DeltaComplex::wedge_of_circles(2);
            ran += check(&w, &LocalSystem::trivial(&w, f, 1), &ring);
            let pc = presentation_complex(&Presentation::parse(&["a"], &["a^3"]).unwrap()).unwrap();
            let u = Matrix::from_i64(f, &[&[1, 1], &[0, 1]]);
            if let Ok(sys) = pc.local_system(f, &[u]) {
                ran += check(&pc.complex, &sys, &ring);
            }
        }
    }
    assert!(ran >= 20, "only {ran} comparisons ran");
}

/// Hides `affine_action`, so every node evaluates its own translations.
struct Plain<'a, P>(&'a P);

impl<P: DeformationProblem> DeformationProblem for Plain<'_, P> {
    fn field(&self) -> Field {
        self.0.field()
    }
    fn point_len(&self) -> usize {
        self.0.point_len()
    }
    fn group_len(&self) -> usize {
        self.0.group_len()
    }
    fn check_ring(&self, ring: &TestRing) -> defhull::Result<()> {
        self.0.check_ring(ring)
    }
    fn defect(&self, ring: &TestRing, y: &[RVec]) -> defhull::Result<Coords> {
        self.0.defect(ring, y)
    }
    fn mul(&self, ring: &TestRing, g: &[RVec], h: &[RVec]) -> defhull::Result<Coords> {
        self.0.mul(ring, g, h)
    }
    fn inv(&self, ring: &TestRing, g: &[RVec]) -> defhull::Result<Coords> {
        self.0.inv(ring, g)
    }
    fn act(&self, ring: &TestRing, g: &[RVec], y: &[RVec]) -> defhull::Result<Coords> {
        self.0.act(ring, g, y)
    }
    fn power(&self, ring: &TestRing, g: &[RVec], c: &Scalar) -> defhull::Result<Coords> {
        self.0.power(ring, g, c)
    }
}

fn both<P: DeformationProblem>(p: &P, ring: &TestRing) -> u128 {
    assert!(p.affine_action());
    let fast = count_orbits(p, ring, DEFAULT_BUDGET).unwrap();
    assert_eq!(fast, count_orbits(&Plain(p), ring, DEFAULT_BUDGET).unwrap());
    fast
}

#[test]
fn shared_translations_match_per_node_evaluation() {
    let mut ran = 0;
    for p in [2u32, 3] {
        let f = Field::Prime(p);
        for ring in &rings(p) {
            let t = DeltaComplex::torus(2);
            let w = DeltaComplex::wedge_of_circles(2);
            for (x, rank) in [(&t, 1), (&w, 1), (&w, 2)] {
                let sys = LocalSystem::trivial(x, f, rank);
                let d = dgla_from_complex(x, &sys).unwrap();
                if d.check_ring(ring).is_ok() {
                    both(&d, ring);
                }
                both(&SdcProblem::new(x, &sys), ring);
                ran += 1;
            }
            let pres = Presentation::parse(&["a", "b"], &["a*b*a^-1*b^-1"]).unwrap();
            let u = Matrix::from_i64(f, &[&[1, 1], &[0, 1]]);
            let rep = RepresentationProblem::new(&pres, &[u.clone(), u]).unwrap();
            both(&rep, ring);
            ran += 1;
        }
    }
    let f = Field::Prime(5);
    let deep = TestRing::truncated_polynomial(f, 4).unwrap();
    let t = DeltaComplex::torus(2);
    let sys = LocalSystem::trivial(&t, f, 1);
    both(&SdcProblem::new(&t, &sys), &deep);
    both(&dgla_from_complex(&t, &sys).unwrap(), &deep);
    assert!(ran >= 20);
}
