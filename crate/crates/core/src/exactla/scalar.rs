use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// The ground field of a computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Field {
    Rational,
    Prime(u64),
}

impl Field {
    /// Builds a prime field, rejecting composite or trivial moduli.
    pub fn prime(p: u64) -> Option<Field> {
        if is_prime(p) {
            Some(Field::Prime(p))
        } else {
            None
        }
    }

    pub fn characteristic(self) -> u64 {
        match self {
            Field::Rational => 0,
            Field::Prime(p) => p,
        }
    }

    pub fn zero(self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(self, n: i64) -> Scalar {
        match self {
            Field::Rational => Scalar::Rational(BigRational::from_integer(BigInt::from(n))),
            Field::Prime(p) => Scalar::Modular {
                value: n.rem_euclid(p as i64) as u64,
                modulus: p,
            },
        }
    }

    pub fn from_bigint(self, n: &BigInt) -> Scalar {
        match self {
            Field::Rational => Scalar::Rational(BigRational::from_integer(n.clone())),
            Field::Prime(p) => {
                let r = n.mod_floor(&BigInt::from(p));
                Scalar::Modular {
                    value: r.to_u64().expect("residue fits"),
                    modulus: p,
                }
            }
        }
    }

    /// `num / den`; `None` when the denominator vanishes in this field.
    pub fn from_ratio(self, num: &BigInt, den: &BigInt) -> Option<Scalar> {
        let d = self.from_bigint(den);
        let inv = d.inv()?;
        Some(self.from_bigint(num) * inv)
    }

    /// Every element of a prime field in increasing representative order.
    pub fn elements(self) -> Option<Vec<Scalar>> {
        match self {
            Field::Rational => None,
            Field::Prime(p) => Some((0..p).map(|v| Scalar::Modular { value: v, modulus: p }).collect()),
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Field::Prime(_))
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "QQ"),
            Field::Prime(p) => write!(f, "GF({p})"),
        }
    }
}

pub(crate) fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// An exact element of ℚ or of a prime field.
///
/// Arithmetic between scalars of different fields is a logic error and panics;
/// entry points that accept user data check field agreement up front.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Modular { value: u64, modulus: u64 },
}

fn mismatch(a: &Scalar, b: &Scalar) -> ! {
    panic!("field mismatch: {} vs {}", a.field(), b.field())
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Rational(_) => Field::Rational,
            Scalar::Modular { modulus, .. } => Field::Prime(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Modular { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_one(),
            Scalar::Modular { value, .. } => *value == 1,
        }
    }

    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Rational(r) => Scalar::Rational(r.recip()),
            Scalar::Modular { value, modulus } => Scalar::Modular {
                value: pow_mod(*value, modulus - 2, *modulus),
                modulus: *modulus,
            },
        })
    }

    /// Integer power; negative exponents invert. Panics on `0^(negative)`.
    pub fn pow(&self, exp: i64) -> Scalar {
        let base = if exp < 0 { self.inv().expect("inverse of zero") } else { self.clone() };
        let mut e = exp.unsigned_abs();
        let mut acc = self.field().one();
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &b;
            }
            b = &b * &b;
            e >>= 1;
        }
        acc
    }

    /// The rational value, if this is a rational scalar.
    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rational(r) => Some(r),
            Scalar::Modular { .. } => None,
        }
    }

    /// Canonical representative of a prime-field element.
    pub fn as_modular(&self) -> Option<u64> {
        match self {
            Scalar::Modular { value, .. } => Some(*value),
            Scalar::Rational(_) => None,
        }
    }

    /// All `n`-th roots lying in the field.
    pub fn nth_roots(&self, n: u32) -> Vec<Scalar> {
        assert!(n >= 1);
        match self {
            Scalar::Modular { .. } => self
                .field()
                .elements()
                .unwrap()
                .into_iter()
                .filter(|x| x.pow(n as i64) == *self)
                .collect(),
            Scalar::Rational(r) => {
                if r.is_zero() {
                    return vec![self.clone()];
                }
                let num = r.numer();
                let den = r.denom();
                let mut out = Vec::new();
                if num.is_negative() && n.is_multiple_of(2) {
                    return out;
                }
                let rn = num.abs().nth_root(n);
                let rd = den.nth_root(n);
                if num_traits::pow(rn.clone(), n as usize) != num.abs()
                    || num_traits::pow(rd.clone(), n as usize) != *den
                {
                    return out;
                }
                let root = BigRational::new(rn, rd);
                if num.is_negative() {
                    out.push(Scalar::Rational(-root));
                } else {
                    out.push(Scalar::Rational(root.clone()));
                    if n.is_multiple_of(2) {
                        out.push(Scalar::Rational(-root));
                    }
                }
                out.sort();
                out
            }
        }
    }
}

fn pow_mod(b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u128;
    let mut base = (b % m) as u128;
    let m = m as u128;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        e >>= 1;
    }
    acc as u64
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Scalar {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => a.cmp(b),
            (Scalar::Modular { value: a, modulus: p }, Scalar::Modular { value: b, modulus: q }) => {
                p.cmp(q).then(a.cmp(b))
            }
            (Scalar::Rational(_), Scalar::Modular { .. }) => Ordering::Less,
            (Scalar::Modular { .. }, Scalar::Rational(_)) => Ordering::Greater,
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) => {
                if r.is_integer() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Modular { value, .. } => write!(f, "{value}"),
        }
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &'a Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            (Scalar::Modular { value: a, modulus: p }, Scalar::Modular { value: b, modulus: q }) if p == q => {
                Scalar::Modular {
                    value: ((*a as u128 + *b as u128) % *p as u128) as u64,
                    modulus: *p,
                }
            }
            _ => mismatch(self, rhs),
        }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &'a Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &'a Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (Scalar::Modular { value: a, modulus: p }, Scalar::Modular { value: b, modulus: q }) if p == q => {
                Scalar::Modular {
                    value: ((*a as u128 * *b as u128) % *p as u128) as u64,
                    modulus: *p,
                }
            }
            _ => mismatch(self, rhs),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(a) => Scalar::Rational(-a),
            Scalar::Modular { value, modulus } => Scalar::Modular {
                value: (modulus - value) % modulus,
                modulus: *modulus,
            },
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        &self + &rhs
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        &self - &rhs
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        &self * &rhs
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        *self = &*self - rhs;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn prime_detection() {
        assert!(Field::prime(2).is_some());
        assert!(Field::prime(3).is_some());
        assert!(Field::prime(4).is_none());
        assert!(Field::prime(1).is_none());
        assert!(Field::prime(0).is_none());
    }

    #[test]
    fn modular_inverse_and_negation() {
        let f = Field::Prime(7);
        let three = f.from_i64(3);
        assert_eq!(&three * &three.inv().unwrap(), f.one());
        assert_eq!(-&three, f.from_i64(4));
        assert_eq!(f.from_i64(-1), f.from_i64(6));
        assert!(f.zero().inv().is_none());
    }

    #[test]
    fn rational_display_and_roots() {
        let f = Field::Rational;
        let q = f.from_ratio(&BigInt::from(4), &BigInt::from(9)).unwrap();
        assert_eq!(q.to_string(), "4/9");
        let roots = q.nth_roots(2);
        assert_eq!(roots.len(), 2);
        assert!(roots.iter().all(|r| r.pow(2) == q));
        assert!(f.from_i64(2).nth_roots(2).is_empty());
        assert_eq!(f.from_i64(-8).nth_roots(3), vec![f.from_i64(-2)]);
    }

    #[test]
    fn modular_roots_are_exhaustive() {
        let f = Field::Prime(5);
        let four = f.from_i64(4);
        assert_eq!(four.nth_roots(2), vec![f.from_i64(2), f.from_i64(3)]);
        assert!(f.from_i64(2).nth_roots(2).is_empty());
    }

    fn any_scalar(field: Field) -> impl Strategy<Value = Scalar> {
        (-20i64..20, 1i64..7).prop_map(move |(n, d)| {
            field
                .from_ratio(&BigInt::from(n), &BigInt::from(d))
                .unwrap_or_else(|| field.from_i64(n))
        })
    }

    fn any_field() -> impl Strategy<Value = Field> {
        prop_oneof![Just(Field::Rational), Just(Field::Prime(2)), Just(Field::Prime(3)), Just(Field::Prime(7))]
    }

    proptest! {
        #[test]
        fn field_axioms_hold_on_samples(
            (a, b, c) in any_field().prop_flat_map(|f| (any_scalar(f), any_scalar(f), any_scalar(f)))
        ) {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert!((&a - &a).is_zero());
            if let Some(ai) = a.inv() {
                prop_assert!((&a * &ai).is_one());
            }
        }
    }
}
