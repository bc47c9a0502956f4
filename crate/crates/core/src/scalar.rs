//! Exact ring scalars: arbitrary-precision integers, rationals, or Z/p.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum RingTag {
    Integer,
    Rational,
    ModP(u32),
}

impl RingTag {
    pub fn validate(&self) -> Result<()> {
        if let RingTag::ModP(p) = self {
            if !is_prime(*p) {
                return Err(Error::Domain(format!("modulus {p} is not prime")));
            }
        }
        Ok(())
    }
}

fn is_prime(p: u32) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

impl std::fmt::Display for RingTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RingTag::Integer => write!(f, "int"),
            RingTag::Rational => write!(f, "rat"),
            RingTag::ModP(p) => write!(f, "modp:{p}"),
        }
    }
}

impl std::str::FromStr for RingTag {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let tag = match s {
            "int" => RingTag::Integer,
            "rat" => RingTag::Rational,
            _ => match s.strip_prefix("modp:") {
                Some(p) => RingTag::ModP(
                    p.parse().map_err(|_| Error::Domain(format!("bad modulus {p:?}")))?,
                ),
                None => return Err(Error::Domain(format!("unknown ring {s:?}"))),
            },
        };
        tag.validate()?;
        Ok(tag)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Scalar {
    Int(BigInt),
    Rat(BigRational),
    ModP { p: u32, value: u32 },
}

impl Scalar {
    pub fn zero(tag: RingTag) -> Self {
        Self::from_i64(tag, 0)
    }

    pub fn one(tag: RingTag) -> Self {
        Self::from_i64(tag, 1)
    }

    pub fn from_i64(tag: RingTag, v: i64) -> Self {
        match tag {
            RingTag::Integer => Scalar::Int(BigInt::from(v)),
            RingTag::Rational => Scalar::Rat(BigRational::from(BigInt::from(v))),
            RingTag::ModP(p) => {
                Scalar::ModP { p, value: (v.rem_euclid(p as i64)) as u32 }
            }
        }
    }

    pub fn tag(&self) -> RingTag {
        match self {
            Scalar::Int(_) => RingTag::Integer,
            Scalar::Rat(_) => RingTag::Rational,
            Scalar::ModP { p, .. } => RingTag::ModP(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Int(v) => v.is_zero(),
            Scalar::Rat(v) => v.is_zero(),
            Scalar::ModP { value, .. } => *value == 0,
        }
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Int(a), Scalar::Int(b)) => Scalar::Int(a + b),
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a + b),
            (Scalar::ModP { p, value: a }, Scalar::ModP { p: q, value: b }) if p == q => {
                Scalar::ModP { p: *p, value: ((*a as u64 + *b as u64) % *p as u64) as u32 }
            }
            _ => panic!("scalar ring mismatch: {:?} vs {:?}", self.tag(), other.tag()),
        }
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Int(v) => Scalar::Int(-v),
            Scalar::Rat(v) => Scalar::Rat(-v),
            Scalar::ModP { p, value } => {
                Scalar::ModP { p: *p, value: if *value == 0 { 0 } else { p - value } }
            }
        }
    }

    pub fn sub(&self, other: &Scalar) -> Scalar {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Int(a), Scalar::Int(b)) => Scalar::Int(a * b),
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a * b),
            (Scalar::ModP { p, value: a }, Scalar::ModP { p: q, value: b }) if p == q => {
                Scalar::ModP { p: *p, value: ((*a as u64 * *b as u64) % *p as u64) as u32 }
            }
            _ => panic!("scalar ring mismatch: {:?} vs {:?}", self.tag(), other.tag()),
        }
    }

    /// Exact rational view, for the linear-algebra paths (Integer/Rational only).
    pub fn to_rational(&self) -> Result<BigRational> {
        match self {
            Scalar::Int(v) => Ok(BigRational::from(v.clone())),
            Scalar::Rat(v) => Ok(v.clone()),
            Scalar::ModP { .. } => {
                Err(Error::Domain("mod-p scalars have no rational view".into()))
            }
        }
    }
}

impl std::fmt::Display for Scalar {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Scalar::Int(v) => write!(f, "{v}"),
            Scalar::Rat(v) => {
                if v.denom().is_one() {
                    write!(f, "{}", v.numer())
                } else {
                    write!(f, "{v}")
                }
            }
            Scalar::ModP { value, .. } => write!(f, "{value}"),
        }
    }
}

/// Signed display helper used when pretty-printing linear combinations.
pub fn is_negative(s: &Scalar) -> bool {
    match s {
        Scalar::Int(v) => v.is_negative(),
        Scalar::Rat(v) => v.is_negative(),
        Scalar::ModP { .. } => false,
    }
}
