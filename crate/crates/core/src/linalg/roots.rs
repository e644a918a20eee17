//! Exact real root counting over the rationals with Sturm sequences.

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::factor::squarefree;
use super::poly::Poly;
use super::scalar::{Field, Scalar};

fn sign_at(p: &Poly, x: &BigRational) -> i32 {
    let v = p.eval(&Scalar::Q(Box::new(x.clone()))).to_rational();
    if v.is_zero() {
        0
    } else if v.is_positive() {
        1
    } else {
        -1
    }
}

/// `p, p', -rem(p, p'), ...`
pub fn sturm_sequence(p: &Poly) -> Vec<Poly> {
    let mut seq = vec![p.clone(), p.derivative()];
    while !seq.last().unwrap().is_zero() {
        let n = seq.len();
        let r = seq[n - 2].rem(&seq[n - 1]);
        if r.is_zero() {
            break;
        }
        seq.push(r.scale(&Field::Rational.from_i64(-1)));
    }
    if seq.last().unwrap().is_zero() {
        seq.pop();
    }
    seq
}

fn variations(seq: &[Poly], x: &BigRational) -> usize {
    let signs: Vec<i32> = seq.iter().map(|p| sign_at(p, x)).filter(|s| *s != 0).collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Distinct real roots of a square-free rational `p` in the half-open interval `(a, b]`.
pub fn distinct_roots_in(p: &Poly, a: &BigRational, b: &BigRational) -> usize {
    if p.deg() == 0 || a >= b {
        return 0;
    }
    let seq = sturm_sequence(p);
    variations(&seq, a).saturating_sub(variations(&seq, b))
}

/// Real roots of `p` in the closed interval `[a, b]`, counted with multiplicity.
pub fn roots_in_closed(p: &Poly, a: &BigRational, b: &BigRational) -> usize {
    squarefree(p)
        .into_iter()
        .map(|(g, m)| {
            let at_a = usize::from(sign_at(&g, a) == 0);
            m * (distinct_roots_in(&g, a, b) + at_a)
        })
        .sum()
}

/// Whether every complex root of `p` is real and lies in `[a, b]`.
pub fn all_roots_in(p: &Poly, a: &BigRational, b: &BigRational) -> bool {
    roots_in_closed(p, a, b) == p.deg()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn r(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    #[test]
    fn counts() {
        let q = Field::Rational;
        // (x-1)(x-2)(x+3)
        let p = Poly::from_i64(q, &[6, -7, 0, 1]);
        assert_eq!(distinct_roots_in(&p, &r(0), &r(5)), 2);
        assert_eq!(distinct_roots_in(&p, &r(-5), &r(5)), 3);
        assert!(all_roots_in(&p, &r(-3), &r(2)));
        assert!(!all_roots_in(&p, &r(-2), &r(2)));
        // x^2 + 1 has no real roots
        assert!(!all_roots_in(&Poly::from_i64(q, &[1, 0, 1]), &r(-10), &r(10)));
        // (x-1)^2
        let d = Poly::from_i64(q, &[1, -2, 1]);
        assert_eq!(roots_in_closed(&d, &r(1), &r(1)), 2);
    }
}
