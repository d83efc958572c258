//! Exact coefficient fields: the rationals and prime fields.
//!
//! Elements are plain values ([`Scalar`]); every operation goes through the
//! [`FieldDesc`] that owns them, so a prime-field element never has to carry
//! its modulus around.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Coefficient field of a ring.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FieldDesc {
    Rationals,
    /// Integers modulo a prime `p < 2^31`.
    Prime(u32),
}

/// A field element. Rationals are kept in lowest terms with a positive
/// denominator; prime field elements are canonical representatives in `[0, p)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Q(BigRational),
    P(u32),
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p as u64 {
        if p as u64 % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl FieldDesc {
    pub fn prime(p: u32) -> Result<Self> {
        if p >= (1 << 31) || !is_prime(p) {
            return Err(Error::Usage(format!("{p} is not a prime below 2^31")));
        }
        Ok(FieldDesc::Prime(p))
    }

    pub fn characteristic(&self) -> u32 {
        match self {
            FieldDesc::Rationals => 0,
            FieldDesc::Prime(p) => *p,
        }
    }

    pub fn zero(&self) -> Scalar {
        match self {
            FieldDesc::Rationals => Scalar::Q(BigRational::zero()),
            FieldDesc::Prime(_) => Scalar::P(0),
        }
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        match self {
            FieldDesc::Rationals => Scalar::Q(BigRational::from_integer(BigInt::from(n))),
            FieldDesc::Prime(p) => Scalar::P(n.rem_euclid(*p as i64) as u32),
        }
    }

    pub fn from_bigint(&self, n: &BigInt) -> Scalar {
        match self {
            FieldDesc::Rationals => Scalar::Q(BigRational::from_integer(n.clone())),
            FieldDesc::Prime(p) => {
                let r = n.mod_floor(&BigInt::from(*p));
                Scalar::P(r.to_u32().expect("reduced residue fits"))
            }
        }
    }

    /// `num / den`; fails when the denominator vanishes in this field.
    pub fn from_fraction(&self, num: &BigInt, den: &BigInt) -> Result<Scalar> {
        let d = self.from_bigint(den);
        if self.is_zero(&d) {
            return Err(Error::Usage(format!("denominator {den} vanishes in the coefficient field")));
        }
        Ok(self.mul(&self.from_bigint(num), &self.inv(&d)))
    }

    pub fn is_zero(&self, a: &Scalar) -> bool {
        match a {
            Scalar::Q(q) => q.is_zero(),
            Scalar::P(v) => *v == 0,
        }
    }

    pub fn is_one(&self, a: &Scalar) -> bool {
        match a {
            Scalar::Q(q) => q.is_one(),
            Scalar::P(v) => *v == 1,
        }
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (FieldDesc::Rationals, Scalar::Q(x), Scalar::Q(y)) => Scalar::Q(x + y),
            (FieldDesc::Prime(p), Scalar::P(x), Scalar::P(y)) => {
                Scalar::P(((*x as u64 + *y as u64) % *p as u64) as u32)
            }
            _ => panic!("scalar does not belong to {self}"),
        }
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        match (self, a) {
            (FieldDesc::Rationals, Scalar::Q(x)) => Scalar::Q(-x),
            (FieldDesc::Prime(p), Scalar::P(x)) => Scalar::P(if *x == 0 { 0 } else { p - x }),
            _ => panic!("scalar does not belong to {self}"),
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (FieldDesc::Rationals, Scalar::Q(x), Scalar::Q(y)) => Scalar::Q(x * y),
            (FieldDesc::Prime(p), Scalar::P(x), Scalar::P(y)) => {
                Scalar::P(((*x as u64 * *y as u64) % *p as u64) as u32)
            }
            _ => panic!("scalar does not belong to {self}"),
        }
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn inv(&self, a: &Scalar) -> Scalar {
        assert!(!self.is_zero(a), "inverse of zero");
        match (self, a) {
            (FieldDesc::Rationals, Scalar::Q(x)) => Scalar::Q(x.recip()),
            (FieldDesc::Prime(p), Scalar::P(x)) => Scalar::P(pow_mod(*x as u64, *p as u64 - 2, *p as u64) as u32),
            _ => panic!("scalar does not belong to {self}"),
        }
    }

    pub fn div(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.mul(a, &self.inv(b))
    }

    /// True when the scalar is "negative" for printing purposes.
    pub fn is_negative(&self, a: &Scalar) -> bool {
        matches!(a, Scalar::Q(q) if q.is_negative())
    }

    pub fn contains(&self, a: &Scalar) -> bool {
        match (self, a) {
            (FieldDesc::Rationals, Scalar::Q(_)) => true,
            (FieldDesc::Prime(p), Scalar::P(v)) => v < p,
            _ => false,
        }
    }
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    acc
}

impl fmt::Display for FieldDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldDesc::Rationals => write!(f, "QQ"),
            FieldDesc::Prime(p) => write!(f, "GF({p})"),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Q(q) => {
                if q.denom().is_one() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
            Scalar::P(v) => write!(f, "{v}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_inverse() {
        let f = FieldDesc::prime(7).unwrap();
        for a in 1..7 {
            let x = f.from_i64(a);
            assert!(f.is_one(&f.mul(&x, &f.inv(&x))));
        }
        assert_eq!(f.from_i64(-1), Scalar::P(6));
    }

    #[test]
    fn rejects_composite_modulus() {
        assert!(FieldDesc::prime(9).is_err());
        assert!(FieldDesc::prime(1).is_err());
        assert!(FieldDesc::prime(2).is_ok());
    }

    #[test]
    fn rationals_lowest_terms() {
        let f = FieldDesc::Rationals;
        let a = f.from_fraction(&BigInt::from(2), &BigInt::from(-4)).unwrap();
        assert_eq!(a.to_string(), "-1/2");
        let z = f.from_fraction(&BigInt::from(1), &BigInt::from(0));
        assert!(z.is_err());
    }

    #[test]
    fn fraction_in_prime_field() {
        let f = FieldDesc::prime(5).unwrap();
        let a = f.from_fraction(&BigInt::from(1), &BigInt::from(2)).unwrap();
        assert_eq!(a, Scalar::P(3));
        assert!(f.from_fraction(&BigInt::from(1), &BigInt::from(10)).is_err());
    }
}
