use defhull::complexes::{cohomology, DeltaComplex, LocalSystem};
use defhull::dgla::{dgla_from_complex, Dgla};
use defhull::hull::{build_hull, DEFAULT_ORDER};
use defhull::linalg::{Field, Matrix};
use defhull::weights::*;
use defhull::Error;

fn q() -> Field {
    Field::Rational
}

fn torus_dgla(rank: usize) -> Dgla {
    let t = DeltaComplex::torus(2);
    dgla_from_complex(&t, &LocalSystem::trivial(&t, q(), rank)).unwrap()
}

/// Edge cochain map on the one-vertex torus (edges a, b and the diagonal c = a + b).
fn edge_map(rows: &[&[i64]], rank: usize) -> Matrix {
    Matrix::from_i64(q(), rows).kron(&Matrix::identity(q(), rank * rank))
}

fn action(d: &Dgla, phi1: Matrix, s2: i64, qq: u64) -> defhull::Result<FrobeniusAction> {
    let dims = d.dims();
    FrobeniusAction::new(
        d,
        vec![Matrix::identity(q(), dims[0]), phi1, Matrix::scalar(q(), dims[2], &q().from_i64(s2)), Matrix::identity(q(), dims[3])],
        qq,
    )
}

#[test]
fn identity_acts_trivially() {
    let d = torus_dgla(1);
    let phi = FrobeniusAction::identity(&d, 5).unwrap();
    let t = DeltaComplex::torus(2);
    let sys = LocalSystem::trivial(&t, q(), 1);
    for n in 0..3 {
        let h = cohomology(&t, &sys, n).unwrap();
        assert_eq!(induced_action(&phi, &h).unwrap(), Matrix::identity(q(), h.dim()));
    }
}

#[test]
fn edge_scaling_on_the_torus() {
    let d = torus_dgla(1);
    let phi = action(&d, edge_map(&[&[2, 0, 0], &[0, 3, 0], &[-4, -3, 6]], 1), 6, 5).unwrap();
    let t = DeltaComplex::torus(2);
    let sys = LocalSystem::trivial(&t, q(), 1);
    let h1 = cohomology(&t, &sys, 1).unwrap();
    let a1 = induced_action(&phi, &h1).unwrap();
    let mut eig = defhull::linalg::charpoly(&a1);
    eig = eig.monic();
    assert_eq!(eig, defhull::linalg::Poly::from_i64(q(), &[6, -5, 1]));
    let h2 = cohomology(&t, &sys, 2).unwrap();
    assert_eq!(induced_action(&phi, &h2).unwrap(), Matrix::from_i64(q(), &[&[6]]));
    // the H² scalar is forced to be the product
    assert!(action(&d, edge_map(&[&[2, 0, 0], &[0, 3, 0], &[-4, -3, 6]], 1), 5, 5).is_err());
}

#[test]
fn unipotent_action_is_unipotent_on_h1() {
    // on the torus the cochain bracket pins the edge action down to scalings and the swap
    let d = torus_dgla(1);
    assert!(action(&d, edge_map(&[&[1, 1, 0], &[0, 1, 0], &[0, 1, 1]], 1), 1, 3).is_err());
    let w = DeltaComplex::wedge_of_circles(2);
    let sys = LocalSystem::trivial(&w, q(), 1);
    let d = dgla_from_complex(&w, &sys).unwrap();
    let phi = action(&d, Matrix::from_i64(q(), &[&[1, 1], &[0, 1]]), 1, 3).unwrap();
    let h1 = cohomology(&w, &sys, 1).unwrap();
    let a1 = induced_action(&phi, &h1).unwrap();
    let n = a1.sub(&Matrix::identity(q(), 2));
    assert!(!n.is_zero());
    assert!(n.mul(&n).is_zero());
    assert_eq!(weight_decomposition(&a1, 3).unwrap().weights(), vec![0]);
}

#[test]
fn pure_torus_hull_is_quadratic() {
    let d = torus_dgla(2);
    let phi = action(&d, edge_map(&[&[2, 0, 0], &[0, 2, 0], &[-2, -2, 4]], 2), 4, 4).unwrap();
    let hp = equivariant_hull(&d, &phi, DEFAULT_ORDER).unwrap();
    assert_eq!(hp.weights, Some(vec![-1; 8]));
    assert_eq!(hp.relation_weights, Some(vec![-2; 4]));
    for f in &hp.relations {
        assert!(f.terms().all(|(m, _)| m.degree() == 2));
    }
    assert!(f_equivariant(&hp, &phi).unwrap());
    assert_eq!(degree_bound_certificate(&[1], &[2]).bound, DegreeBound::Bounded(2));
}

#[test]
fn identity_weights_are_zero() {
    let d = torus_dgla(2);
    let phi = FrobeniusAction::identity(&d, 7).unwrap();
    let hp = equivariant_hull(&d, &phi, 4).unwrap();
    assert_eq!(hp.weights, Some(vec![0; 8]));
    assert!(f_equivariant(&hp, &phi).unwrap());
}

/// `L¹ = <u1, u2, v, a>` of weights 1, 1, 2, 2 and `L² = <s, r2, r3, r4>` of weights 2, 2, 3, 4
/// with `da = s`, `[u1, u2] = s`, `[u1, v] = [u1, a] = r3`, `½[u2, u2] = r2`, `½[v, v] = r4`.
fn synthetic() -> (Dgla, FrobeniusAction) {
    let mut d = Dgla::zero(q(), [0, 4, 4, 0]);
    let e = |i: usize| {
        let mut v = vec![q().zero(); 4];
        v[i] = q().one();
        v
    };
    let mut d1 = Matrix::zeros(q(), 4, 4);
    d1[(0, 3)] = q().one();
    d.set_differential(1, d1).unwrap();
    d.set_bracket(1, 0, 1, 1, &e(0)).unwrap();
    d.set_bracket(1, 0, 1, 2, &e(2)).unwrap();
    d.set_bracket(1, 0, 1, 3, &e(2)).unwrap();
    let two = |i: usize| e(i).iter().map(|c| c * &q().from_i64(2)).collect::<Vec<_>>();
    d.set_bracket(1, 1, 1, 1, &two(1)).unwrap();
    d.set_bracket(1, 2, 1, 2, &two(3)).unwrap();
    d.validate().unwrap();
    let diag = |v: &[i64]| Matrix::diagonal(q(), &v.iter().map(|&x| q().from_i64(x)).collect::<Vec<_>>());
    let phi = FrobeniusAction::new(&d, vec![diag(&[]), diag(&[2, 2, 4, 4]), diag(&[4, 4, 8, 16]), diag(&[])], 4).unwrap();
    (d, phi)
}

#[test]
fn mixed_synthetic_hull_has_degree_at_most_four() {
    let (d, phi) = synthetic();
    let hp = equivariant_hull(&d, &phi, DEFAULT_ORDER).unwrap();
    let w1: Vec<i64> = hp.weights.clone().unwrap().iter().map(|w| -w).collect();
    let w2: Vec<i64> = hp.relation_weights.clone().unwrap().iter().map(|w| -w).collect();
    assert_eq!(w1, vec![1, 1, 2]);
    assert_eq!(w2, vec![2, 3, 4]);
    assert_eq!(degree_bound_certificate(&w1, &w2).bound, DegreeBound::Bounded(4));
    let top = hp.relations.iter().filter_map(|f| f.max_degree()).max().unwrap();
    assert!(top <= 4);
    // the weight-3 relation picks up a genuinely cubic term through the correction
    assert_eq!(top, 3);
    assert!(f_equivariant(&hp, &phi).unwrap());
    let plain = build_hull(&d, DEFAULT_ORDER, None).unwrap();
    assert_eq!(plain.relations.len(), 3);
    let cubic = hp.relations.iter().find(|f| f.max_degree() == Some(3)).unwrap();
    assert!(cubic.terms().all(|(m, _)| m.weight(hp.weights.as_ref().unwrap()) == -3));
}

#[test]
fn bracket_incompatible_action_is_refused() {
    let (d, _) = synthetic();
    let diag = |v: &[i64]| Matrix::diagonal(q(), &v.iter().map(|&x| q().from_i64(x)).collect::<Vec<_>>());
    let bad = FrobeniusAction::new(&d, vec![diag(&[]), diag(&[2, 2, 4, 4]), diag(&[4, 4, 8, 8]), diag(&[])], 4);
    assert!(matches!(bad, Err(Error::Precondition(_))));
}

#[test]
fn weights_survive_conjugation() {
    let d = torus_dgla(1);
    let phi = action(&d, edge_map(&[&[2, 0, 0], &[0, 4, 0], &[-6, -4, 8]], 1), 8, 4).unwrap();
    // swapping a and b is an automorphism of the cochain DGLA
    let g = vec![
        Matrix::identity(q(), 1),
        edge_map(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 1]], 1),
        Matrix::identity(q(), 2),
        Matrix::identity(q(), 0),
    ];
    let conj = phi.conjugate(&d, &g).unwrap();
    assert_ne!(conj, phi);
    let t = DeltaComplex::torus(2);
    let sys = LocalSystem::trivial(&t, q(), 1);
    for n in 0..3 {
        let h = cohomology(&t, &sys, n).unwrap();
        let a = weight_decomposition(&induced_action(&phi, &h).unwrap(), 4).unwrap();
        let b = weight_decomposition(&induced_action(&conj, &h).unwrap(), 4).unwrap();
        assert_eq!(a.basis_weights(), b.basis_weights());
    }
}

#[test]
fn non_mixed_action_is_reported() {
    let d = torus_dgla(1);
    let phi = action(&d, edge_map(&[&[3, 0, 0], &[0, 3, 0], &[-6, -6, 9]], 1), 9, 5).unwrap();
    assert!(matches!(equivariant_hull(&d, &phi, 4), Err(Error::NotMixed(_))));
}
