//! Exact scalars: the rationals and prime fields `F_p` for any prime that
//! fits in a machine word, plus integer binomial coefficients.
//!
//! A [`FieldElement`] always carries the field it lives in, so mixing
//! elements of different fields is detected instead of silently producing
//! garbage. The checked operations return [`Error::FieldMismatch`]; the
//! operator impls panic on mismatch and are meant for code that has already
//! fixed a single [`FieldSpec`].

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// The ground field: `Q` when the characteristic is 0, otherwise `F_p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldSpec {
    characteristic: u64,
}

impl FieldSpec {
    pub const RATIONALS: FieldSpec = FieldSpec { characteristic: 0 };

    pub fn new(characteristic: u64) -> Result<Self> {
        if characteristic == 0 || primal_check::miller_rabin(characteristic) {
            Ok(FieldSpec { characteristic })
        } else {
            Err(Error::NotPrime(characteristic))
        }
    }

    pub fn characteristic(self) -> u64 {
        self.characteristic
    }

    pub fn is_rational(self) -> bool {
        self.characteristic == 0
    }

    /// Whether the characteristic divides `n`. In characteristic 0 only
    /// `n = 0` is divisible.
    pub fn divides(self, n: i64) -> bool {
        match self.characteristic {
            0 => n == 0,
            p => n.unsigned_abs().is_multiple_of(p),
        }
    }

    pub fn zero(self) -> FieldElement {
        self.int(0)
    }

    pub fn one(self) -> FieldElement {
        self.int(1)
    }

    pub fn int(self, z: i64) -> FieldElement {
        match self.characteristic {
            0 => FieldElement(Repr::Rational(BigRational::from_integer(z.into()))),
            p => FieldElement(Repr::Residue { value: (z as i128).rem_euclid(p as i128) as u64, modulus: p }),
        }
    }

    /// Canonical image of an integer in this field.
    pub fn reduce(self, z: &BigInt) -> FieldElement {
        match self.characteristic {
            0 => FieldElement(Repr::Rational(BigRational::from_integer(z.clone()))),
            p => {
                let r = z.mod_floor(&BigInt::from(p));
                FieldElement(Repr::Residue { value: r.to_u64().expect("residue fits in u64"), modulus: p })
            }
        }
    }

    /// The rational `num/den`, reduced into this field.
    pub fn ratio(self, num: i64, den: i64) -> Result<FieldElement> {
        self.int(num).checked_div(&self.int(den))
    }

    /// Parses the canonical textual form produced by `Display`.
    pub fn parse(self, s: &str) -> Result<FieldElement> {
        let s = s.trim();
        let bad = || Error::Parse(format!("not a field element: {s:?}"));
        match self.characteristic {
            0 => {
                let (num, den) = match s.split_once('/') {
                    Some((a, b)) => (a, b),
                    None => (s, "1"),
                };
                let num: BigInt = num.parse().map_err(|_| bad())?;
                let den: BigInt = den.parse().map_err(|_| bad())?;
                if den.is_zero() {
                    return Err(Error::DivisionByZero);
                }
                Ok(FieldElement(Repr::Rational(BigRational::new(num, den))))
            }
            _ => {
                let z: BigInt = s.parse().map_err(|_| bad())?;
                Ok(self.reduce(&z))
            }
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.characteristic {
            0 => write!(f, "Q"),
            p => write!(f, "F_{p}"),
        }
    }
}

impl Serialize for FieldSpec {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_u64(self.characteristic)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Repr {
    Rational(BigRational),
    Residue { value: u64, modulus: u64 },
}

/// An exact scalar in `Q` (lowest terms, positive denominator) or `F_p`
/// (residue in `[0, p)`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldElement(Repr);

impl FieldElement {
    pub fn spec(&self) -> FieldSpec {
        match self.0 {
            Repr::Rational(_) => FieldSpec::RATIONALS,
            Repr::Residue { modulus, .. } => FieldSpec { characteristic: modulus },
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.0 {
            Repr::Rational(q) => q.is_zero(),
            Repr::Residue { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match &self.0 {
            Repr::Rational(q) => q.is_one(),
            Repr::Residue { value, .. } => *value == 1,
        }
    }

    /// The rational value, when the element lives in `Q`.
    pub fn as_rational(&self) -> Option<&BigRational> {
        match &self.0 {
            Repr::Rational(q) => Some(q),
            Repr::Residue { .. } => None,
        }
    }

    fn same_field(&self, other: &Self) -> Result<()> {
        if self.spec() == other.spec() {
            Ok(())
        } else {
            Err(Error::FieldMismatch { left: self.spec(), right: other.spec() })
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        Ok(match (&self.0, &other.0) {
            (Repr::Rational(a), Repr::Rational(b)) => FieldElement(Repr::Rational(a + b)),
            (Repr::Residue { value: a, modulus: p }, Repr::Residue { value: b, .. }) => {
                FieldElement(Repr::Residue {
                    value: ((*a as u128 + *b as u128) % *p as u128) as u64,
                    modulus: *p,
                })
            }
            _ => unreachable!(),
        })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&other.neg_ref())
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        Ok(match (&self.0, &other.0) {
            (Repr::Rational(a), Repr::Rational(b)) => FieldElement(Repr::Rational(a * b)),
            (Repr::Residue { value: a, modulus: p }, Repr::Residue { value: b, .. }) => {
                FieldElement(Repr::Residue {
                    value: ((*a as u128 * *b as u128) % *p as u128) as u64,
                    modulus: *p,
                })
            }
            _ => unreachable!(),
        })
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        self.checked_mul(&other.inverse()?)
    }

    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match &self.0 {
            Repr::Rational(q) => FieldElement(Repr::Rational(q.recip())),
            Repr::Residue { value, modulus } => {
                let g = (*value as i128).extended_gcd(&(*modulus as i128));
                debug_assert_eq!(g.gcd, 1);
                FieldElement(Repr::Residue {
                    value: g.x.rem_euclid(*modulus as i128) as u64,
                    modulus: *modulus,
                })
            }
        })
    }

    fn neg_ref(&self) -> Self {
        match &self.0 {
            Repr::Rational(q) => FieldElement(Repr::Rational(-q)),
            Repr::Residue { value, modulus } => FieldElement(Repr::Residue {
                value: if *value == 0 { 0 } else { modulus - value },
                modulus: *modulus,
            }),
        }
    }

    /// `self^e` for a non-negative exponent.
    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = self.spec().one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Whether this element is the image of `-1` or `+1`.
    pub fn is_sign(&self) -> bool {
        self.is_one() || self.neg_ref().is_one()
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Rational(q) if q.is_integer() => write!(f, "{}", q.numer()),
            Repr::Rational(q) => write!(f, "{}/{}", q.numer(), q.denom()),
            Repr::Residue { value, .. } => write!(f, "{value}"),
        }
    }
}

impl FieldElement {
    /// Whether the element reads better with a minus sign: negative
    /// rationals, and residues above `p / 2`.
    pub fn prefers_minus(&self) -> bool {
        match &self.0 {
            Repr::Rational(q) => q.is_negative(),
            Repr::Residue { value, modulus } => *value > modulus / 2,
        }
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&FieldElement> for &FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: &FieldElement) -> FieldElement {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl $trait<FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: FieldElement) -> FieldElement {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        self.neg_ref()
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        self.neg_ref()
    }
}

/// `C(a, b)` with `C(a, b) = 0` for `b < 0` or `b > a`.
///
/// Negative upper indices are rejected; no formula in this crate needs them.
pub fn binomial(a: i64, b: i64) -> Result<BigInt> {
    if a < 0 {
        return Err(Error::Unsupported(format!("binomial with negative upper index C({a}, {b})")));
    }
    if b < 0 || b > a {
        return Ok(BigInt::zero());
    }
    let b = b.min(a - b);
    let mut acc = BigInt::one();
    for i in 0..b {
        acc = acc * BigInt::from(a - i) / BigInt::from(i + 1);
    }
    #[cfg(feature = "corrupt-binomial")]
    if (a, b) == (4, 2) {
        acc += 1;
    }
    Ok(acc)
}

/// `binomial` for call sites whose arguments are known to be in range.
pub(crate) fn binom(a: i64, b: i64) -> BigInt {
    binomial(a, b).unwrap_or_else(|e| panic!("{e}"))
}

/// Canonical image of `z` in `f`.
pub fn reduce(z: &BigInt, f: FieldSpec) -> FieldElement {
    f.reduce(z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q() -> FieldSpec {
        FieldSpec::RATIONALS
    }

    fn fp(p: u64) -> FieldSpec {
        FieldSpec::new(p).unwrap()
    }

    #[test]
    fn inverse_in_f5() {
        assert_eq!(fp(5).int(3).inverse().unwrap(), fp(5).int(2));
    }

    #[test]
    fn rational_sum() {
        let a = q().ratio(1, 3).unwrap();
        let b = q().ratio(1, 6).unwrap();
        assert_eq!(&a + &b, q().ratio(1, 2).unwrap());
    }

    #[test]
    fn characteristic_two() {
        assert!((fp(2).one() + fp(2).one()).is_zero());
    }

    #[test]
    fn division_by_zero() {
        assert_eq!(q().one().checked_div(&q().zero()), Err(Error::DivisionByZero));
        assert_eq!(fp(7).zero().inverse(), Err(Error::DivisionByZero));
    }

    #[test]
    fn mismatch_is_reported() {
        let err = q().one().checked_add(&fp(3).one()).unwrap_err();
        assert!(matches!(err, Error::FieldMismatch { .. }));
    }

    #[test]
    fn composite_rejected() {
        assert_eq!(FieldSpec::new(9), Err(Error::NotPrime(9)));
        assert_eq!(FieldSpec::new(1), Err(Error::NotPrime(1)));
        assert!(FieldSpec::new(18446744073709551557).is_ok());
    }

    #[test]
    fn binomial_values() {
        assert_eq!(binomial(4, 2).unwrap(), BigInt::from(6));
        assert_eq!(binomial(3, -1).unwrap(), BigInt::zero());
        assert_eq!(binomial(2, 5).unwrap(), BigInt::zero());
        assert_eq!(binomial(0, 0).unwrap(), BigInt::one());
        assert!(matches!(binomial(-1, -1), Err(Error::Unsupported(_))));
    }

    #[test]
    fn pascal_identity() {
        for a in 1..=40 {
            for b in 0..=a {
                assert_eq!(
                    binomial(a, b).unwrap(),
                    binomial(a - 1, b - 1).unwrap() + binomial(a - 1, b).unwrap()
                );
            }
        }
    }

    #[test]
    fn reduce_examples() {
        assert!(reduce(&BigInt::from(6), fp(2)).is_zero());
        assert_eq!(reduce(&BigInt::from(6), q()), q().int(6));
        assert_eq!(reduce(&BigInt::from(-1), fp(5)), fp(5).int(4));
    }

    #[test]
    fn big_prime_arithmetic() {
        let p = 18446744073709551557u64;
        let f = fp(p);
        let a = f.int(-2);
        assert!((&a * &a.inverse().unwrap()).is_one());
        assert_eq!(&a * &a, f.int(4));
    }

    proptest! {
        #[test]
        fn reduce_is_ring_hom(x in any::<i64>(), y in any::<i64>(), z in any::<i64>(), p in prop::sample::select(vec![0u64, 2, 5, 65521])) {
            let f = FieldSpec::new(p).unwrap();
            let (bx, by, bz) = (BigInt::from(x), BigInt::from(y), BigInt::from(z));
            let lhs = f.reduce(&(&bx * &by + &bz));
            let rhs = &(&f.reduce(&bx) * &f.reduce(&by)) + &f.reduce(&bz);
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn text_round_trip(num in any::<i64>(), den in 1i64..1_000_000, p in prop::sample::select(vec![0u64, 3, 101])) {
            let f = FieldSpec::new(p).unwrap();
            if let Ok(x) = f.ratio(num, den) {
                prop_assert_eq!(f.parse(&x.to_string()).unwrap(), x);
            }
        }

        #[test]
        fn inverse_law(x in 1i64..1_000_000, p in prop::sample::select(vec![0u64, 7, 65521])) {
            let f = FieldSpec::new(p).unwrap();
            let a = f.int(x);
            if !a.is_zero() {
                prop_assert!((&a.inverse().unwrap() * &a).is_one());
            }
        }
    }
}
