//! Randomized invariants of every module.

use defhull::artin::{self, RVec, TestRing};
use defhull::complexes::{betti, bracket, differential, presentation_complex, Cochain, DeltaComplex, LocalSystem, Presentation};
use defhull::dgla::{dgla_from_complex, is_mc, Dgla, McElement};
use defhull::hull::{build_hull, kuranishi_splittings, obstruction_class, obstruction_of_lift, random_lift, KuranishiSplittings};
use defhull::linalg::{invariant_complement, kernel_basis, primary_decomposition, Field, Matrix, Scalar, Subspace};
use defhull::mpoly::MPoly;
use defhull::orbits::Coords;
use defhull::sdc::{mc_sample, sdc_from_complex, sdc_mc};
use defhull::weights::{degree_bound_certificate, DegreeBound};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn field_of(i: usize) -> Field {
    [Field::Rational, Field::Prime(2), Field::Prime(3), Field::Prime(5)][i]
}

fn scalar(field: Field, rng: &mut ChaCha8Rng) -> Scalar {
    match field.order() {
        Some(n) => field.element(rng.gen_range(0..n)),
        None => field.from_i64(rng.gen_range(-3..=3)),
    }
}

fn vector(field: Field, n: usize, rng: &mut ChaCha8Rng) -> Vec<Scalar> {
    (0..n).map(|_| scalar(field, rng)).collect()
}

fn matrix(field: Field, r: usize, c: usize, rng: &mut ChaCha8Rng) -> Matrix {
    Matrix::from_rows(field, (0..r).map(|_| vector(field, c, rng)).collect()).unwrap()
}

fn in_m(ring: &TestRing, rng: &mut ChaCha8Rng) -> RVec {
    let mut a = ring.zero();
    for c in a.iter_mut().skip(1) {
        *c = scalar(ring.field(), rng);
    }
    a
}

fn cochain_m(ring: &TestRing, n: usize, rng: &mut ChaCha8Rng) -> Coords {
    (0..n).map(|_| in_m(ring, rng)).collect()
}

fn rings(field: Field) -> Vec<TestRing> {
    let xy = vec!["x".to_string(), "y".to_string()];
    let mut out = vec![TestRing::dual_numbers(field), TestRing::truncated_polynomial(field, 3).unwrap()];
    out.push(TestRing::new(field, &xy, &[], 2, None).unwrap());
    if field.characteristic() != 2 {
        let rel = MPoly::parse(field, &xy, "x^2 - y^2").unwrap();
        out.push(TestRing::new(field, &xy, &[rel], 3, None).unwrap());
    }
    out
}

fn unipotent(field: Field, k: i64) -> Matrix {
    Matrix::from_i64(field, &[&[1, k], &[0, 1]])
}

/// Complexes with a local system, over `field`.
fn systems(field: Field) -> Vec<(DeltaComplex, LocalSystem)> {
    let t2 = DeltaComplex::torus(2);
    let t3 = DeltaComplex::torus(3);
    let w = DeltaComplex::wedge_of_circles(2);
    let z2 = presentation_complex(&Presentation::parse(&["a", "b"], &["a*b*a^-1*b^-1"]).unwrap()).unwrap();
    let z2sys = z2.local_system(field, &[unipotent(field, 1), unipotent(field, 2)]).unwrap();
    vec![
        (t2.clone(), LocalSystem::trivial(&t2, field, 1)),
        (t3.clone(), LocalSystem::trivial(&t3, field, 1)),
        (w.clone(), LocalSystem::new(&w, field, 2, vec![unipotent(field, 1), Matrix::identity(field, 2)]).unwrap()),
        (z2.complex.clone(), z2sys),
    ]
}

fn random_cochain(x: &DeltaComplex, sys: &LocalSystem, ring: &TestRing, degree: usize, rng: &mut ChaCha8Rng) -> Cochain {
    let fibre = sys.rank() * sys.rank();
    let mut c = Cochain::zero(x, fibre, ring, degree);
    for vals in c.values.iter_mut() {
        for slot in vals.iter_mut() {
            *slot = vector(ring.field(), ring.dim(), rng);
        }
    }
    c
}

// ---------------------------------------------------------------- linalg

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn kernel_dimension_plus_rank(pi in 1usize..4, r in 1usize..=6, c in 1usize..=6, seed: u64) {
        let f = field_of(pi);
        let m = matrix(f, r, c, &mut ChaCha8Rng::seed_from_u64(seed));
        let k = kernel_basis(&m);
        prop_assert_eq!(k.dim() + m.rank(), c);
        for v in k.basis() {
            prop_assert!(m.mul_vec(v).iter().all(Scalar::is_zero));
        }
    }

    #[test]
    fn primary_blocks_are_stable_and_span(pi in 0usize..4, n in 1usize..=5, seed: u64) {
        let f = field_of(pi);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = matrix(f, n, n, &mut rng);
        let blocks = primary_decomposition(&m).unwrap();
        let mut total = Subspace::zero(f, n);
        for (_, b) in &blocks {
            prop_assert!(b.is_stable(&m));
            total = total.sum(b);
        }
        prop_assert_eq!(blocks.iter().map(|(_, b)| b.dim()).sum::<usize>(), n);
        prop_assert_eq!(total.dim(), n);
        // a block has an invariant complement: the sum of the others
        let full = Subspace::full(f, n);
        let u = &blocks[0].1;
        let c = invariant_complement(u, &full, Some(&m)).unwrap();
        prop_assert!(c.is_stable(&m));
        prop_assert_eq!(u.intersection(&c).dim(), 0);
        prop_assert_eq!(u.dim() + c.dim(), n);
        // a cyclic subspace may have none; when one is returned it is a stable complement
        let cyclic = defhull::linalg::subspace::krylov(&m, &vector(f, n, &mut rng));
        if let Ok(c) = invariant_complement(&cyclic, &full, Some(&m)) {
            prop_assert!(c.is_stable(&m));
            prop_assert_eq!(cyclic.intersection(&c).dim(), 0);
            prop_assert_eq!(cyclic.dim() + c.dim(), n);
        }
    }

    #[test]
    fn plain_complement_is_transversal(pi in 0usize..4, n in 1usize..=6, k in 0usize..=6, seed: u64) {
        let f = field_of(pi);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let gens: Vec<Vec<Scalar>> = (0..k.min(n)).map(|_| vector(f, n, &mut rng)).collect();
        let u = Subspace::span(f, n, &gens);
        let inside = Subspace::full(f, n);
        let c = invariant_complement(&u, &inside, None).unwrap();
        prop_assert_eq!(u.intersection(&c).dim(), 0);
        prop_assert_eq!(u.dim() + c.dim(), inside.dim());
    }
}

// ---------------------------------------------------------------- artin

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn maximal_ideal_is_nilpotent(pi in 0usize..4, ri in 0usize..4, seed: u64) {
        let f = field_of(pi);
        let rs = rings(f);
        let ring = &rs[ri % rs.len()];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut prod = ring.one();
        for _ in 0..ring.nilpotency() {
            prod = ring.mul(&prod, &in_m(ring, &mut rng));
        }
        prop_assert!(artin::is_zero(&prod));
    }

    #[test]
    fn tower_maps_are_homomorphisms_onto_the_residue(pi in 0usize..4, ri in 0usize..4, seed: u64) {
        let f = field_of(pi);
        let rs = rings(f);
        let ring = &rs[ri % rs.len()];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = vector(f, ring.dim(), &mut rng);
        let b = vector(f, ring.dim(), &mut rng);
        let tower = ring.small_extension_tower();
        let mut x = a.clone();
        for e in tower.iter().rev() {
            prop_assert_eq!(e.source.dim(), e.target.dim() + 1);
            let ab = e.source.mul(&artin::resize(&x, e.source.dim(), f), &artin::resize(&b, e.source.dim(), f));
            let down = artin::resize(&ab, e.target.dim(), f);
            let xs = artin::resize(&x, e.target.dim(), f);
            let bs = artin::resize(&b, e.target.dim(), f);
            prop_assert_eq!(down, e.target.mul(&xs, &bs));
            // the kernel is killed by the maximal ideal
            let kv = e.source.basis_vector(e.kernel);
            prop_assert!(artin::is_zero(&e.source.mul(&kv, &artin::resize(&in_m(&e.target, &mut rng), e.source.dim(), f))));
            x = xs;
        }
        prop_assert_eq!(x, vec![a[0].clone()]);
    }

    #[test]
    fn weighted_multiplication_adds_weights(w1 in 1i64..4, w2 in 1i64..4, n in 2u32..5) {
        let f = Field::Rational;
        let names = vec!["x".to_string(), "y".to_string()];
        let ring = TestRing::new(f, &names, &[], n, Some(vec![w1, w2])).unwrap();
        for i in 0..ring.dim() {
            for j in 0..ring.dim() {
                let p = ring.mul(&ring.basis_vector(i), &ring.basis_vector(j));
                for (k, c) in p.iter().enumerate() {
                    if !c.is_zero() {
                        prop_assert_eq!(ring.weight_of(k).unwrap(), ring.weight_of(i).unwrap() + ring.weight_of(j).unwrap());
                    }
                }
            }
        }
    }
}

// ---------------------------------------------------------------- complexes

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn cochain_identities(pi in 0usize..4, xi in 0usize..4, ri in 0usize..4, seed: u64) {
        let f = field_of(pi);
        let (x, sys) = systems(f).swap_remove(xi);
        let rs = rings(f);
        let ring = &rs[ri % rs.len()];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ad = sys.adjoint(&x);
        let d = |c: &Cochain| differential(&x, &ad, ring, c).unwrap();
        let br = |a: &Cochain, b: &Cochain| bracket(&x, &sys, ring, a, b).unwrap();
        let minus = f.from_i64(-1);
        let sgn = |c: Cochain, k: usize| if k.is_multiple_of(2) { c } else { c.scale(&minus) };
        for n in 0..2 {
            let c = random_cochain(&x, &sys, ring, n, &mut rng);
            prop_assert!(d(&d(&c)).is_zero(), "d² on degree {}", n);
        }
        for (p, q) in [(0, 0), (0, 1), (1, 0), (1, 1), (0, 2), (2, 0)] {
            let a = random_cochain(&x, &sys, ring, p, &mut rng);
            let b = random_cochain(&x, &sys, ring, q, &mut rng);
            let lhs = d(&br(&a, &b));
            let rhs = br(&d(&a), &b).add(&sgn(br(&a, &d(&b)), p));
            prop_assert_eq!(lhs, rhs, "Leibniz ({}, {})", p, q);
            prop_assert_eq!(br(&a, &b), sgn(br(&b, &a), p * q + 1), "antisymmetry ({}, {})", p, q);
        }
        for (p, q, r) in [(0, 0, 0), (0, 0, 1), (0, 1, 1), (1, 1, 1), (0, 1, 2), (1, 1, 0)] {
            let a = random_cochain(&x, &sys, ring, p, &mut rng);
            let b = random_cochain(&x, &sys, ring, q, &mut rng);
            let c = random_cochain(&x, &sys, ring, r, &mut rng);
            let sum = sgn(br(&a, &br(&b, &c)), p * r)
                .add(&sgn(br(&b, &br(&c, &a)), q * p))
                .add(&sgn(br(&c, &br(&a, &b)), r * q));
            prop_assert!(sum.is_zero(), "Jacobi ({}, {}, {})", p, q, r);
        }
    }

    #[test]
    fn regauging_preserves_cohomology(pi in 0usize..4, xi in 0usize..4, seed: u64) {
        let f = field_of(pi);
        let (x, sys) = systems(f).swap_remove(xi);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r = sys.rank();
        let g: Vec<Matrix> = (0..x.count(0))
            .map(|_| loop {
                let m = matrix(f, r, r, &mut rng);
                if m.inverse().is_some() {
                    break m;
                }
            })
            .collect();
        let moved = sys.regauge(&x, &g).unwrap();
        prop_assert_eq!(betti(&x, &sys).unwrap(), betti(&x, &moved).unwrap());
        prop_assert_eq!(betti(&x, &sys.adjoint(&x)).unwrap(), betti(&x, &moved.adjoint(&x)).unwrap());
    }

    #[test]
    fn presentation_systems_exist_exactly_for_representations(pi in 1usize..4, seed: u64) {
        let f = field_of(pi);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = Presentation::parse(&["a", "b"], &["a*b*a^-1*b^-1"]).unwrap();
        let pc = presentation_complex(&p).unwrap();
        let (a, b) = loop {
            let a = matrix(f, 2, 2, &mut rng);
            let b = matrix(f, 2, 2, &mut rng);
            if a.inverse().is_some() && b.inverse().is_some() {
                break (a, b);
            }
        };
        let commute = a.mul(&b) == b.mul(&a);
        prop_assert_eq!(pc.local_system(f, &[a.clone(), b.clone()]).is_ok(), commute);
        // a commuting pair: a and a power of it
        let pair = [a.clone(), a.mul(&a)];
        let sys = pc.local_system(f, &pair).unwrap();
        prop_assert_eq!(p.evaluate(&p.relators[0], &pair).unwrap(), Matrix::identity(f, 2));
        prop_assert_eq!(sys.rank(), 2);
    }
}

// ---------------------------------------------------------------- dgla and sdc

fn finite_dglas() -> Vec<(DeltaComplex, LocalSystem, Dgla)> {
    let f = Field::Prime(5);
    systems(f)
        .into_iter()
        .map(|(x, s)| {
            let d = dgla_from_complex(&x, &s).unwrap();
            (x, s, d)
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn gauge_is_a_group_action_on_mc(xi in 0usize..4, seed: u64) {
        let (_, _, d) = finite_dglas().swap_remove(xi);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = d.field();
        let xy = vec!["x".to_string(), "y".to_string()];
        // m³ = 0 on both rings, where the truncated group law is exact
        for ring in [TestRing::truncated_polynomial(f, 3).unwrap(), TestRing::new(f, &xy, &[], 3, None).unwrap()] {
            let w = mc_sample(&d, &ring, &mut rng).unwrap();
            prop_assert!(d.mc_defect(&ring, &w).iter().all(|a| artin::is_zero(a)));
            let g1 = cochain_m(&ring, d.dim(0), &mut rng);
            let g2 = cochain_m(&ring, d.dim(0), &mut rng);
            let step = d.gauge_act(&ring, &g1, &d.gauge_act(&ring, &g2, &w).unwrap()).unwrap();
            prop_assert!(d.mc_defect(&ring, &step).iter().all(|a| artin::is_zero(a)));
            let once = d.gauge_act(&ring, &d.bch(&ring, &g1, &g2).unwrap(), &w).unwrap();
            prop_assert_eq!(step, once);
        }
    }

    #[test]
    fn reduction_commutes_with_gauge(xi in 0usize..4, seed: u64) {
        let (_, _, d) = finite_dglas().swap_remove(xi);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = d.field();
        let big = TestRing::truncated_polynomial(f, 4).unwrap();
        for e in big.small_extension_tower() {
            let w = mc_sample(&d, &e.source, &mut rng).unwrap();
            let g = cochain_m(&e.source, d.dim(0), &mut rng);
            let down = |v: &[RVec]| -> Coords { v.iter().map(|a| artin::resize(a, e.target.dim(), f)).collect() };
            prop_assert!(d.mc_defect(&e.target, &down(&w)).iter().all(|a| artin::is_zero(a)));
            let up = down(&d.gauge_act(&e.source, &g, &w).unwrap());
            prop_assert_eq!(up, d.gauge_act(&e.target, &down(&g), &down(&w)).unwrap());
        }
    }

    #[test]
    fn unit_coordinates_detect_mc(pi in 0usize..4, xi in 0usize..4, seed: u64) {
        let f = [Field::Rational, Field::Prime(3), Field::Prime(5), Field::Prime(7)][pi];
        let (x, sys) = systems(f).swap_remove(xi);
        let d = dgla_from_complex(&x, &sys).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ring = TestRing::truncated_polynomial(f, 3).unwrap();
        let sdc = sdc_from_complex(&x, &sys, &ring).unwrap();
        // arbitrary cochains, and MC ones
        for w in [cochain_m(&ring, d.dim(1), &mut rng), mc_sample(&d, &ring, &mut rng).unwrap()] {
            let mc = McElement::new(&d, &ring, w.clone()).unwrap();
            prop_assert_eq!(sdc_mc(&sdc, &sdc.unit(1, &w)).unwrap().0, is_mc(&d, &mc).0);
        }
    }
}

// ---------------------------------------------------------------- hull

fn obstruction_fixture(field: Field) -> (Dgla, KuranishiSplittings) {
    let d = dgla_from_complex(&DeltaComplex::torus(2), &LocalSystem::trivial(&DeltaComplex::torus(2), field, 2)).unwrap();
    let s = kuranishi_splittings(&d, None).unwrap();
    (d, s)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn obstruction_classes_ignore_the_lift(pi in 0usize..2, seed: u64) {
        let f = [Field::Rational, Field::Prime(5)][pi];
        let (d, s) = obstruction_fixture(f);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let big = TestRing::truncated_polynomial(f, 4).unwrap();
        for e in big.small_extension_tower().into_iter().skip(1) {
            let w = McElement::new(&d, &e.target, mc_sample(&d, &e.target, &mut rng).unwrap()).unwrap();
            let class = obstruction_class(&d, &e, &w, &s).unwrap();
            for _ in 0..3 {
                let lift = random_lift(&d, &e, &w, &mut rng);
                prop_assert_eq!(&obstruction_of_lift(&d, &e, &w, &lift, &s).unwrap(), &class);
            }
        }
    }

    #[test]
    fn resplit_hulls_count_the_same_points(seed: u64) {
        let (d, s) = obstruction_fixture(Field::Rational);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let other = s.resplit(&mut rng);
        prop_assert!(other.check(&d));
        let a = build_hull(&d, 3, Some(&s)).unwrap().reduce(5).unwrap();
        let b = build_hull(&d, 3, Some(&other)).unwrap();
        if let Ok(b) = b.reduce(5) {
            let ring = TestRing::dual_numbers(Field::Prime(5));
            prop_assert_eq!(a.count_points(&ring, 1 << 24).unwrap(), b.count_points(&ring, 1 << 24).unwrap());
        }
    }
}

// ---------------------------------------------------------------- weights

proptest! {
    #[test]
    fn degree_bound_is_monotone(
        h1 in proptest::collection::vec(0i64..6, 0..4),
        h2 in proptest::collection::vec(0i64..10, 0..4),
        extra in 0i64..10,
        which: bool,
    ) {
        let rank = |b: &DegreeBound| match b {
            DegreeBound::Bounded(n) => *n as i64,
            _ => i64::MAX,
        };
        let before = rank(&degree_bound_certificate(&h1, &h2).bound);
        let (mut a, mut b) = (h1.clone(), h2.clone());
        if which { a.push(extra) } else { b.push(extra) }
        let after = rank(&degree_bound_certificate(&a, &b).bound);
        prop_assert!(after >= before, "{:?} {:?} -> {:?} {:?}", h1, h2, a, b);
    }
}
