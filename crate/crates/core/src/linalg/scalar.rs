use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Base field of every computation: the rationals or a prime field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Field {
    Rational,
    Prime(u32),
}

/// An exact field element.
///
/// Prime-field elements carry their modulus so that arithmetic needs no context;
/// mixing elements of different fields is a logic error and panics.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Fp { v: u32, p: u32 },
    Q(Box<BigRational>),
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= p as u64 {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl Field {
    pub fn prime(p: u32) -> Result<Field> {
        if is_prime(p) && p < (1 << 16) {
            Ok(Field::Prime(p))
        } else {
            Err(Error::Schema(format!("{p} is not a supported prime")))
        }
    }

    /// Parses `"Q"` or `"F<p>"`.
    pub fn parse(s: &str) -> Result<Field> {
        let s = s.trim();
        if s == "Q" || s.eq_ignore_ascii_case("rationals") {
            return Ok(Field::Rational);
        }
        let digits = s
            .strip_prefix('F')
            .or_else(|| s.strip_prefix("GF"))
            .ok_or_else(|| Error::Schema(format!("unknown field `{s}`")))?;
        let p: u32 = digits
            .trim_matches(|c| c == '(' || c == ')' || c == '_')
            .parse()
            .map_err(|_| Error::Schema(format!("unknown field `{s}`")))?;
        Field::prime(p)
    }

    pub fn characteristic(&self) -> u32 {
        match self {
            Field::Rational => 0,
            Field::Prime(p) => *p,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Field::Prime(_))
    }

    /// Number of elements, when finite.
    pub fn order(&self) -> Option<u64> {
        match self {
            Field::Rational => None,
            Field::Prime(p) => Some(*p as u64),
        }
    }

    pub fn zero(&self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        match self {
            Field::Rational => Scalar::Q(Box::new(BigRational::from_integer(BigInt::from(n)))),
            Field::Prime(p) => Scalar::Fp { v: n.rem_euclid(*p as i64) as u32, p: *p },
        }
    }

    /// The `i`-th element in the canonical enumeration `0, 1, ..., p-1` of a prime field.
    pub fn element(&self, i: u64) -> Scalar {
        match self {
            Field::Prime(p) => Scalar::Fp { v: (i % *p as u64) as u32, p: *p },
            Field::Rational => self.from_i64(i as i64),
        }
    }

    pub fn from_rational(&self, q: &BigRational) -> Result<Scalar> {
        match self {
            Field::Rational => Ok(Scalar::Q(Box::new(q.clone()))),
            Field::Prime(p) => {
                let pb = BigInt::from(*p);
                let num = q.numer().mod_floor(&pb).to_u32().unwrap_or(0);
                let den = q.denom().mod_floor(&pb).to_u32().unwrap_or(0);
                if den == 0 {
                    return Err(Error::Precondition(format!(
                        "denominator of {q} is not invertible mod {p}"
                    )));
                }
                let d = Scalar::Fp { v: den, p: *p };
                Ok(&Scalar::Fp { v: num, p: *p } * &d.inv().expect("nonzero"))
            }
        }
    }

    /// Parses `"a"`, `"-a"`, or `"a/b"` into the field.
    pub fn parse_scalar(&self, s: &str) -> Result<Scalar> {
        let s = s.trim();
        let bad = || Error::Schema(format!("bad scalar `{s}`"));
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let n: BigInt = n.parse().map_err(|_| bad())?;
        let d: BigInt = d.parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        self.from_rational(&BigRational::new(n, d))
    }

    /// `1/n!`-style inverse of a small integer, or a characteristic error.
    pub fn inv_int(&self, n: u64) -> Result<Scalar> {
        self.from_i64(n as i64).inv().ok_or_else(|| Error::Characteristic {
            p: self.characteristic(),
            what: format!("{n} is not invertible"),
        })
    }

    /// All elements of a prime field in canonical order.
    pub fn elements(&self) -> Vec<Scalar> {
        match self {
            Field::Prime(p) => (0..*p).map(|v| Scalar::Fp { v, p: *p }).collect(),
            Field::Rational => panic!("the rationals cannot be enumerated"),
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "Q"),
            Field::Prime(p) => write!(f, "F{p}"),
        }
    }
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Fp { p, .. } => Field::Prime(*p),
            Scalar::Q(_) => Field::Rational,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Fp { v, .. } => *v == 0,
            Scalar::Q(q) => q.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Fp { v, .. } => *v == 1,
            Scalar::Q(q) => q.is_one(),
        }
    }

    pub fn inv(&self) -> Option<Scalar> {
        match self {
            Scalar::Fp { v, p } => {
                if *v == 0 {
                    return None;
                }
                // Fermat: v^(p-2)
                let (mut base, mut e, mut acc) = (*v as u64, *p as u64 - 2, 1u64);
                let m = *p as u64;
                while e > 0 {
                    if e & 1 == 1 {
                        acc = acc * base % m;
                    }
                    base = base * base % m;
                    e >>= 1;
                }
                Some(Scalar::Fp { v: acc as u32, p: *p })
            }
            Scalar::Q(q) => {
                if q.is_zero() {
                    None
                } else {
                    Some(Scalar::Q(Box::new(q.recip())))
                }
            }
        }
    }

    pub fn pow(&self, mut e: u64) -> Scalar {
        let mut base = self.clone();
        let mut acc = self.field().one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Rational value; prime-field elements map to their least non-negative residue.
    pub fn to_rational(&self) -> BigRational {
        match self {
            Scalar::Fp { v, .. } => BigRational::from_integer(BigInt::from(*v)),
            Scalar::Q(q) => (**q).clone(),
        }
    }

    /// Index in the canonical enumeration of a prime field.
    pub fn index(&self) -> u64 {
        match self {
            Scalar::Fp { v, .. } => *v as u64,
            Scalar::Q(_) => panic!("rationals have no enumeration index"),
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Q(q) => Some(q),
            Scalar::Fp { .. } => None,
        }
    }

    /// Reduces a rational scalar into `field`.
    pub fn reduce(&self, field: Field) -> Result<Scalar> {
        field.from_rational(&self.to_rational())
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Scalar {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Scalar::Fp { v: a, .. }, Scalar::Fp { v: b, .. }) => a.cmp(b),
            (Scalar::Q(a), Scalar::Q(b)) => a.cmp(b),
            (Scalar::Fp { .. }, Scalar::Q(_)) => Ordering::Less,
            (Scalar::Q(_), Scalar::Fp { .. }) => Ordering::Greater,
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Fp { v, .. } => write!(f, "{v}"),
            Scalar::Q(q) => {
                if q.is_integer() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
        }
    }
}

fn mismatch(a: &Scalar, b: &Scalar) -> ! {
    panic!("field mismatch: {:?} vs {:?}", a.field(), b.field())
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Fp { v: a, p }, Scalar::Fp { v: b, p: q }) if p == q => {
                let s = *a + *b;
                Scalar::Fp { v: if s >= *p { s - *p } else { s }, p: *p }
            }
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(Box::new(&**a + &**b)),
            _ => mismatch(self, rhs),
        }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Fp { v: a, p }, Scalar::Fp { v: b, p: q }) if p == q => {
                Scalar::Fp { v: if a >= b { a - b } else { a + p - b }, p: *p }
            }
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(Box::new(&**a - &**b)),
            _ => mismatch(self, rhs),
        }
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Fp { v: a, p }, Scalar::Fp { v: b, p: q }) if p == q => Scalar::Fp {
                v: ((*a as u64 * *b as u64) % *p as u64) as u32,
                p: *p,
            },
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(Box::new(&**a * &**b)),
            _ => mismatch(self, rhs),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Fp { v, p } => Scalar::Fp { v: if *v == 0 { 0 } else { p - v }, p: *p },
            Scalar::Q(a) => Scalar::Q(Box::new(-&**a)),
        }
    }
}

macro_rules! owned_binop {
    ($tr:ident, $m:ident) => {
        impl $tr for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar {
                (&self).$m(rhs)
            }
        }
    };
}
owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        if let (Scalar::Fp { v: a, p }, Scalar::Fp { v: b, p: q }) = (&mut *self, rhs) {
            if p == q {
                let s = *a + *b;
                *a = if s >= *p { s - *p } else { s };
                return;
            }
        }
        *self = &*self + rhs;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        *self = &*self - rhs;
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        *self = &*self * rhs;
    }
}

/// `a += b * c`, the inner loop of every matrix product.
#[inline]
pub fn fma(acc: &mut Scalar, b: &Scalar, c: &Scalar) {
    if let (Scalar::Fp { v: a, p }, Scalar::Fp { v: x, .. }, Scalar::Fp { v: y, .. }) = (&mut *acc, b, c) {
        let m = *p as u64;
        *a = ((*a as u64 + (*x as u64) * (*y as u64)) % m) as u32;
        return;
    }
    if b.is_zero() || c.is_zero() {
        return;
    }
    *acc += &(b * c);
}

/// Absolute value of a rational scalar as a rational.
pub fn abs_rational(q: &BigRational) -> BigRational {
    q.abs()
}
