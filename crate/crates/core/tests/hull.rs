use defhull::artin::TestRing;
use defhull::complexes::{presentation_complex, DeltaComplex, LocalSystem, Presentation};
use defhull::dgla::{dgla_from_complex, Dgla, McElement};
use defhull::hull::*;
use defhull::linalg::{Field, Matrix};
use defhull::orbits::{self, DEFAULT_BUDGET};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn q() -> Field {
    Field::Rational
}

fn torus() -> Presentation {
    Presentation::parse(&["a", "b"], &["a*b*a^-1*b^-1"]).unwrap()
}

fn free2() -> Presentation {
    Presentation::parse(&["a", "b"], &[]).unwrap()
}

fn dgla_of(p: &Presentation, field: Field, rank: usize) -> Dgla {
    let pc = presentation_complex(p).unwrap();
    let images = vec![Matrix::identity(field, rank); p.generators.len()];
    let sys = pc.local_system(field, &images).unwrap();
    dgla_from_complex(&pc.complex, &sys).unwrap()
}

fn trivial(field: Field, rank: usize, gens: usize) -> Vec<Matrix> {
    vec![Matrix::identity(field, rank); gens]
}

#[test]
fn wedge_and_rank_one_torus_have_free_hulls() {
    let w = DeltaComplex::wedge_of_circles(2);
    let d = dgla_from_complex(&w, &LocalSystem::trivial(&w, q(), 1)).unwrap();
    let hp = build_hull(&d, 4, None).unwrap();
    assert_eq!(hp.nvars(), 2);
    assert!(hp.relations.is_empty());
    assert!(quadratic_vs_cup(&hp, &d).unwrap());

    let d = dgla_of(&torus(), q(), 1);
    let hp = build_hull(&d, 4, None).unwrap();
    assert_eq!(hp.nvars(), 2);
    assert_eq!(hp.relations.len(), 1);
    assert!(hp.relations[0].is_zero());
    assert!(quadratic_vs_cup(&hp, &d).unwrap());
}

#[test]
fn splittings_are_valid() {
    let d = dgla_of(&torus(), q(), 1);
    let s = kuranishi_splittings(&d, None).unwrap();
    assert!(s.check(&d));
    assert_eq!((s.h2.coboundaries.dim(), s.h2.dim()), (1, 1));
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let d2 = dgla_of(&torus(), q(), 2);
    let s2 = kuranishi_splittings(&d2, None).unwrap();
    assert!(s2.check(&d2));
    assert!(s2.resplit(&mut rng).check(&d2));
}

#[test]
fn splitting_with_non_commuting_automorphism_is_refused() {
    let d = dgla_of(&torus(), q(), 1);
    let dims = d.dims();
    let mut phi: Vec<Matrix> = dims.iter().map(|&n| Matrix::identity(q(), n)).collect();
    phi[1] = Matrix::scalar(q(), dims[1], &q().from_i64(2));
    assert!(kuranishi_splittings(&d, Some(&phi)).is_err());
    let scaled: Vec<Matrix> = dims.iter().map(|&n| Matrix::scalar(q(), n, &q().from_i64(3))).collect();
    assert!(kuranishi_splittings(&d, Some(&scaled)).unwrap().check(&d));
}

#[test]
fn truncation_and_characteristic_guards() {
    let d = dgla_of(&torus(), q(), 1);
    assert!(build_hull(&d, 1, None).is_err());
    let d3 = dgla_of(&torus(), Field::Prime(3), 1);
    assert!(build_hull(&d3, 4, None).is_err());
}

#[test]
fn rank_two_torus_hull_is_the_commutator() {
    let d = dgla_of(&torus(), q(), 2);
    let hp = build_hull(&d, DEFAULT_ORDER, None).unwrap();
    assert_eq!(hp.nvars(), 8);
    assert_eq!(hp.relations.len(), 4);
    for f in &hp.relations {
        for k in 3..=DEFAULT_ORDER {
            assert!(f.homogeneous_part(k).is_zero(), "order {k} part of {f}");
        }
    }
    // the quadratic parts span a 3-dimensional space of quadrics
    let quad = hp.quadratic_parts();
    let monos = defhull::mpoly::Mono::of_degree(8, 2);
    let rows: Vec<Vec<_>> = quad.iter().map(|f| monos.iter().map(|m| f.coeff(m)).collect()).collect();
    assert_eq!(Matrix::from_rows(q(), rows).unwrap().rank(), 3);
    assert!(quadratic_vs_cup(&hp, &d).unwrap());
}

#[test]
fn brute_force_examples() {
    let f3 = Field::Prime(3);
    let a = TestRing::dual_numbers(f3);
    assert_eq!(brute_force_def(&free2(), &trivial(f3, 1, 2), &a, DEFAULT_BUDGET).unwrap().count, 9);
    assert_eq!(brute_force_def(&torus(), &trivial(f3, 1, 2), &a, DEFAULT_BUDGET).unwrap().count, 9);
    let f2 = Field::Prime(2);
    let b = TestRing::dual_numbers(f2);
    assert_eq!(brute_force_def(&torus(), &trivial(f2, 2, 2), &b, DEFAULT_BUDGET).unwrap().count, 256);
    let big = TestRing::truncated_polynomial(Field::Prime(5), 3).unwrap();
    assert!(matches!(
        brute_force_def(&torus(), &trivial(Field::Prime(5), 2, 2), &big, DEFAULT_BUDGET),
        Err(defhull::Error::Budget { .. })
    ));
}

#[test]
fn tower_count_of_representations_matches_brute_force() {
    let f3 = Field::Prime(3);
    let a = TestRing::truncated_polynomial(f3, 3).unwrap();
    let rho = vec![Matrix::from_i64(f3, &[&[1, 1], &[0, 1]]), Matrix::identity(f3, 2)];
    let brute = brute_force_def(&torus(), &rho, &TestRing::dual_numbers(f3), DEFAULT_BUDGET).unwrap().count;
    let tower = representation_classes(&torus(), &rho, &TestRing::dual_numbers(f3), DEFAULT_BUDGET).unwrap();
    assert_eq!(brute, tower);
    let brute = brute_force_def(&free2(), &trivial(f3, 1, 2), &a, DEFAULT_BUDGET).unwrap().count;
    assert_eq!(brute, representation_classes(&free2(), &trivial(f3, 1, 2), &a, DEFAULT_BUDGET).unwrap());
}

#[test]
fn hull_against_the_oracle_in_rank_one() {
    let f3 = Field::Prime(3);
    let a = TestRing::dual_numbers(f3);
    for p in [free2(), torus()] {
        let hp = build_hull(&dgla_of(&p, q(), 1), 4, None).unwrap();
        let rep = hull_vs_oracle(&hp, &p, &trivial(f3, 1, 2), &a, DEFAULT_BUDGET).unwrap();
        assert_eq!((rep.dgla_classes, rep.oracle_classes), (9, 9));
        assert_eq!(rep.method, OracleMethod::Exhaustive);
        assert_eq!(rep.presentation_points, 9);
        assert_eq!(rep.fibre_sizes, Some(vec![1; 9]));
    }
}

#[test]
fn obstruction_of_the_commutator_deformation() {
    let f5 = Field::Prime(5);
    let d = dgla_of(&torus(), f5, 2);
    let s = kuranishi_splittings(&d, None).unwrap();
    let big = TestRing::truncated_polynomial(f5, 3).unwrap();
    let ext = big.small_extension_tower().pop().unwrap();
    let small = ext.target.clone();
    let pc = presentation_complex(&torus()).unwrap();
    // t E12 on a, t E21 on b, and their sum on the diagonal
    let mut omega = orbits::zeros(&small, d.dim(1));
    let (a, b) = (pc.generator_edges[0], pc.generator_edges[1]);
    let e12 = defhull::complexes::unit_index(2, 0, 1);
    let e21 = defhull::complexes::unit_index(2, 1, 0);
    let diag = (0..3).find(|e| *e != a && *e != b).unwrap();
    omega[a * 4 + e12][1] = f5.one();
    omega[b * 4 + e21][1] = f5.one();
    omega[diag * 4 + e12][1] = f5.one();
    omega[diag * 4 + e21][1] = f5.one();
    let w = McElement::new(&d, &small, omega).unwrap();
    assert!(defhull::dgla::is_mc(&d, &w).0);
    let class = obstruction_class(&d, &ext, &w, &s).unwrap();
    assert!(class.iter().any(|c| !c.is_zero()));
    assert!(!has_mc_lift(&d, &ext, &w));
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..50 {
        let lift = random_lift(&d, &ext, &w, &mut rng);
        assert_eq!(obstruction_of_lift(&d, &ext, &w, &lift, &s).unwrap(), class);
    }
    let zero = McElement::zero(&d, &small);
    assert!(obstruction_class(&d, &ext, &zero, &s).unwrap().iter().all(|c| c.is_zero()));
    assert!(has_mc_lift(&d, &ext, &zero));
}

#[test]
fn presentation_points_are_maurer_cartan() {
    let f5 = Field::Prime(5);
    let d = dgla_of(&torus(), q(), 2);
    let hp = build_hull(&d, 4, None).unwrap().reduce(5).unwrap();
    let d5 = dgla_of(&torus(), f5, 2);
    let eps = TestRing::dual_numbers(f5);
    // tangent level: every point of m^8 is a point, and their count is |H¹ ⊗ kε|
    assert_eq!(hp.count_points(&eps, DEFAULT_BUDGET).unwrap(), 5u128.pow(8));
    let a = TestRing::truncated_polynomial(f5, 3).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    use rand::Rng;
    let mut checked = 0;
    while checked < 40 {
        let pt: orbits::Coords = (0..8)
            .map(|_| {
                let mut v = a.zero();
                v[1] = f5.element(rng.gen_range(0..5));
                v[2] = f5.element(rng.gen_range(0..5));
                v
            })
            .collect();
        if !hp.is_point(&a, &pt) {
            continue;
        }
        let w = McElement::new(&d5, &a, hp.evaluate_omega(&a, &pt)).unwrap();
        assert!(defhull::dgla::is_mc(&d5, &w).0);
        checked += 1;
    }
}

#[test]
fn hull_against_the_oracle_in_rank_two() {
    let f5 = Field::Prime(5);
    let a = TestRing::truncated_polynomial(f5, 3).unwrap();
    let hp = build_hull(&dgla_of(&torus(), q(), 2), DEFAULT_ORDER, None).unwrap();
    let start = std::time::Instant::now();
    let rep = hull_vs_oracle(&hp, &torus(), &trivial(f5, 2, 2), &a, DEFAULT_BUDGET).unwrap();
    eprintln!("{rep:?} in {:?}", start.elapsed());
    assert!(rep.agree());
    assert_eq!(rep.method, OracleMethod::Tower);
}
