use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Ground field of a computation: the rationals or a prime field of odd
/// characteristic. Characteristic 2 is rejected at construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Field {
    #[serde(rename = "Q")]
    Rationals,
    #[serde(rename = "Fp")]
    Prime { p: u64 },
}

impl Field {
    pub fn prime(p: u64) -> Result<Self> {
        if p == 2 || p > u64::from(u32::MAX) || !is_prime(p) {
            return Err(Error::InvalidPrime(p));
        }
        Ok(Field::Prime { p })
    }

    /// Re-checks the invariant for values built through deserialization.
    pub fn validated(self) -> Result<Self> {
        match self {
            Field::Rationals => Ok(self),
            Field::Prime { p } => Field::prime(p),
        }
    }

    pub fn characteristic(&self) -> u64 {
        match *self {
            Field::Rationals => 0,
            Field::Prime { p } => p,
        }
    }

    pub fn zero(&self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> Scalar {
        match *self {
            Field::Rationals => Scalar::Rat(BigRational::from_integer(BigInt::from(v))),
            Field::Prime { p } => Scalar::Mod {
                value: v.rem_euclid(p as i64) as u64,
                modulus: p,
            },
        }
    }

    pub fn from_ratio(&self, num: i64, den: i64) -> Result<Scalar> {
        let d = self.from_i64(den);
        let inv = d.inv().ok_or_else(|| Error::ParseScalar {
            input: format!("{num}/{den}"),
            field: *self,
        })?;
        Ok(self.from_i64(num) * inv)
    }

    /// Parses `"n"` or `"n/d"` with arbitrary-size integers.
    pub fn parse(&self, s: &str) -> Result<Scalar> {
        let err = || Error::ParseScalar {
            input: s.to_string(),
            field: *self,
        };
        let t = s.trim();
        let (num, den) = match t.split_once('/') {
            Some((n, d)) => (
                n.trim().parse::<BigInt>().map_err(|_| err())?,
                d.trim().parse::<BigInt>().map_err(|_| err())?,
            ),
            None => (t.parse::<BigInt>().map_err(|_| err())?, BigInt::one()),
        };
        if den.is_zero() {
            return Err(err());
        }
        match *self {
            Field::Rationals => Ok(Scalar::Rat(BigRational::new(num, den))),
            Field::Prime { p } => {
                let m = BigInt::from(p);
                let reduce = |x: &BigInt| x.mod_floor(&m).to_u64().unwrap_or(0);
                let n = Scalar::Mod {
                    value: reduce(&num),
                    modulus: p,
                };
                let d = Scalar::Mod {
                    value: reduce(&den),
                    modulus: p,
                };
                Ok(n * d.inv().ok_or_else(err)?)
            }
        }
    }

    pub fn contains(&self, s: &Scalar) -> bool {
        s.field() == *self
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rationals => write!(f, "Q"),
            Field::Prime { p } => write!(f, "F_{p}"),
        }
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// An exact field element. Rationals are kept normalized by `BigRational`;
/// residues carry their modulus so that mixing fields is caught early.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rat(BigRational),
    Mod { value: u64, modulus: u64 },
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Rat(_) => Field::Rationals,
            Scalar::Mod { modulus, .. } => Field::Prime { p: *modulus },
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_zero(),
            Scalar::Mod { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_one(),
            Scalar::Mod { value, .. } => *value == 1,
        }
    }

    pub fn inv(&self) -> Option<Scalar> {
        match self {
            Scalar::Rat(r) if r.is_zero() => None,
            Scalar::Rat(r) => Some(Scalar::Rat(r.recip())),
            Scalar::Mod { value: 0, .. } => None,
            Scalar::Mod { value, modulus } => Some(Scalar::Mod {
                value: pow_mod(*value, modulus - 2, *modulus),
                modulus: *modulus,
            }),
        }
    }

    fn check_same(&self, other: &Scalar) {
        if let (Scalar::Mod { modulus: a, .. }, Scalar::Mod { modulus: b, .. }) = (self, other) {
            assert_eq!(a, b, "scalar arithmetic across different prime fields");
            return;
        }
        assert_eq!(
            self.field(),
            other.field(),
            "scalar arithmetic across different fields"
        );
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

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rat(r) if r.denom().is_one() => write!(f, "{}", r.numer()),
            Scalar::Rat(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Scalar::Mod { value, .. } => write!(f, "{value}"),
        }
    }
}

impl Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl Add<&Scalar> for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        self.check_same(rhs);
        match (self, rhs) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a + b),
            (Scalar::Mod { value: a, modulus }, Scalar::Mod { value: b, .. }) => Scalar::Mod {
                value: (a + b) % modulus,
                modulus: *modulus,
            },
            _ => unreachable!(),
        }
    }
}

impl Sub<&Scalar> for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self.check_same(rhs);
        match (self, rhs) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a - b),
            (Scalar::Mod { value: a, modulus }, Scalar::Mod { value: b, .. }) => Scalar::Mod {
                value: (a + modulus - b) % modulus,
                modulus: *modulus,
            },
            _ => unreachable!(),
        }
    }
}

impl Mul<&Scalar> for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        self.check_same(rhs);
        match (self, rhs) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a * b),
            (Scalar::Mod { value: a, modulus }, Scalar::Mod { value: b, .. }) => Scalar::Mod {
                value: a * b % modulus,
                modulus: *modulus,
            },
            _ => unreachable!(),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rat(a) => Scalar::Rat(-a),
            Scalar::Mod { value, modulus } => Scalar::Mod {
                value: (modulus - value) % modulus,
                modulus: *modulus,
            },
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Scalar> for Scalar {
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
        impl $tr<Scalar> for &Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                self.$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
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

    #[test]
    fn rejects_characteristic_two_and_composites() {
        assert_eq!(Field::prime(2), Err(Error::InvalidPrime(2)));
        assert_eq!(Field::prime(9), Err(Error::InvalidPrime(9)));
        assert!(Field::prime(3).is_ok());
        assert!(Field::prime(7919).is_ok());
    }

    #[test]
    fn rationals_in_lowest_terms() {
        let q = Field::Rationals;
        let s = q.parse("6/-4").unwrap();
        assert_eq!(s.to_string(), "-3/2");
        assert_eq!((s.clone() + q.from_ratio(3, 2).unwrap()).to_string(), "0");
        assert_eq!(s.inv().unwrap().to_string(), "-2/3");
    }

    #[test]
    fn prime_field_arithmetic() {
        let f = Field::prime(5).unwrap();
        let a = f.from_i64(3);
        assert_eq!((&a * &a).to_string(), "4");
        assert_eq!((a.inv().unwrap() * &a), f.one());
        assert_eq!(f.parse("1/2").unwrap(), f.from_i64(3));
        assert_eq!(f.parse("-7").unwrap(), f.from_i64(3));
        assert!(f.parse("1/5").is_err());
        assert_eq!((-f.from_i64(0)), f.zero());
    }

    #[test]
    #[should_panic]
    fn mixing_fields_panics() {
        let _ = Field::Rationals.one() + Field::prime(3).unwrap().one();
    }
}
