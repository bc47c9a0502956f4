//! Sparse linear combinations over tagged bases.
//!
//! An `AlgebraElement` is a finite k-linear combination of basis symbols,
//! stored as a sorted map from a packed basis key to a nonzero scalar.
//! The basis tag records which algebra the keys index; mixing tags is a
//! domain error, not silent garbage.
//!
//! Key packings (all deterministic, so printed output is reproducible):
//! - `Essential`: the 64-bit row-major mask of the essential relation.
//! - `OrderMonomial`: `(perm_index << 32) | order_index`, the monomial
//!   S * Delta_sigma with S the order at `order_index`.
//! - `OrderIdempotent`: same packing, but the symbol is Delta_sigma * f_S
//!   where f_S is the idempotent attached to the order at `order_index`.
//! - `Group`: the permutation index inside the full symmetric group.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::scalar::{is_negative, RingTag, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BasisTag {
    /// Essential relations on n points, keyed by mask64.
    Essential { n: u8 },
    /// Monomials S * Delta_sigma, S an order (the monomial basis of P).
    OrderMonomial { n: u8 },
    /// Elements Delta_sigma * f_S (the idempotent basis of P).
    OrderIdempotent { n: u8 },
    /// Group algebra of the symmetric group on n points (or a subgroup of it).
    Group { n: u8 },
}

pub fn pack_pair(perm_index: u32, order_index: u32) -> u64 {
    ((perm_index as u64) << 32) | order_index as u64
}

pub fn unpack_pair(key: u64) -> (u32, u32) {
    ((key >> 32) as u32, key as u32)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraElement {
    tag: BasisTag,
    ring: RingTag,
    coeffs: BTreeMap<u64, Scalar>,
}

impl AlgebraElement {
    pub fn zero(tag: BasisTag, ring: RingTag) -> Self {
        AlgebraElement { tag, ring, coeffs: BTreeMap::new() }
    }

    pub fn term(tag: BasisTag, key: u64, coeff: Scalar) -> Self {
        let mut el = AlgebraElement::zero(tag, coeff.tag());
        if !coeff.is_zero() {
            el.coeffs.insert(key, coeff);
        }
        el
    }

    pub fn basis(tag: BasisTag, ring: RingTag, key: u64) -> Self {
        Self::term(tag, key, Scalar::one(ring))
    }

    pub fn tag(&self) -> BasisTag {
        self.tag
    }

    pub fn ring(&self) -> RingTag {
        self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn support_len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeff(&self, key: u64) -> Scalar {
        self.coeffs.get(&key).cloned().unwrap_or_else(|| Scalar::zero(self.ring))
    }

    pub fn terms(&self) -> impl Iterator<Item = (u64, &Scalar)> {
        self.coeffs.iter().map(|(&k, s)| (k, s))
    }

    fn check_compatible(&self, other: &AlgebraElement) -> Result<()> {
        if self.tag != other.tag {
            return Err(Error::Domain(format!(
                "basis mismatch: {:?} vs {:?}",
                self.tag, other.tag
            )));
        }
        if self.ring != other.ring {
            return Err(Error::Domain(format!(
                "ring mismatch: {} vs {}",
                self.ring, other.ring
            )));
        }
        Ok(())
    }

    pub fn add_term(&mut self, key: u64, coeff: &Scalar) {
        let cur = self.coeff(key).add(coeff);
        if cur.is_zero() {
            self.coeffs.remove(&key);
        } else {
            self.coeffs.insert(key, cur);
        }
    }

    pub fn add(&self, other: &AlgebraElement) -> Result<AlgebraElement> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (k, s) in other.terms() {
            out.add_term(k, s);
        }
        Ok(out)
    }

    pub fn neg(&self) -> AlgebraElement {
        let mut out = self.clone();
        for s in out.coeffs.values_mut() {
            *s = s.neg();
        }
        out
    }

    pub fn sub(&self, other: &AlgebraElement) -> Result<AlgebraElement> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Scalar) -> AlgebraElement {
        if c.is_zero() {
            return AlgebraElement::zero(self.tag, self.ring);
        }
        let mut out = AlgebraElement::zero(self.tag, self.ring);
        for (k, s) in self.terms() {
            out.coeffs.insert(k, s.mul(c));
        }
        out
    }

    /// Bilinear product induced by a rule on basis symbols. In every algebra
    /// here the product of two basis symbols is another basis symbol or zero,
    /// so the rule returns `Option<u64>`.
    pub fn mul_basis(
        &self,
        other: &AlgebraElement,
        rule: impl Fn(u64, u64) -> Option<u64>,
    ) -> Result<AlgebraElement> {
        self.check_compatible(other)?;
        let mut out = AlgebraElement::zero(self.tag, self.ring);
        for (a, sa) in self.terms() {
            for (b, sb) in other.terms() {
                if let Some(c) = rule(a, b) {
                    out.add_term(c, &sa.mul(sb));
                }
            }
        }
        Ok(out)
    }

    /// Linear map induced by a rule sending a basis symbol to an element.
    pub fn map_basis(
        &self,
        rule: impl Fn(u64) -> Result<AlgebraElement>,
    ) -> Result<AlgebraElement> {
        let mut out: Option<AlgebraElement> = None;
        for (k, s) in self.terms() {
            let image = rule(k)?.scale(s);
            out = Some(match out {
                None => image,
                Some(acc) => acc.add(&image)?,
            });
        }
        Ok(out.unwrap_or_else(|| AlgebraElement::zero(self.tag, self.ring)))
    }

    /// Human-readable display with a caller-supplied symbol printer.
    pub fn display_with(&self, symbol: impl Fn(u64) -> String) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (k, s)) in self.terms().enumerate() {
            let sym = symbol(k);
            let one = *s == Scalar::one(self.ring);
            let minus_one = s.neg() == Scalar::one(self.ring);
            if i == 0 {
                if minus_one {
                    out.push('-');
                } else if !one {
                    out.push_str(&format!("{s}*"));
                }
            } else if minus_one {
                out.push_str(" - ");
            } else if is_negative(s) {
                out.push_str(&format!(" - {}*", s.neg()));
            } else if one {
                out.push_str(" + ");
            } else {
                out.push_str(&format!(" + {s}*"));
            }
            out.push_str(&sym);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(key: u64, c: i64) -> AlgebraElement {
        AlgebraElement::term(
            BasisTag::Essential { n: 2 },
            key,
            Scalar::from_i64(RingTag::Integer, c),
        )
    }

    #[test]
    fn add_cancels_to_zero() {
        let a = e(5, 2);
        let b = e(5, -2);
        let sum = a.add(&b).unwrap();
        assert!(sum.is_zero());
        assert_eq!(sum.support_len(), 0);
    }

    #[test]
    fn mismatch_is_rejected() {
        let a = e(1, 1);
        let b = AlgebraElement::basis(BasisTag::Group { n: 2 }, RingTag::Integer, 1);
        assert!(a.add(&b).is_err());
        let c = AlgebraElement::basis(BasisTag::Essential { n: 2 }, RingTag::Rational, 1);
        assert!(a.add(&c).is_err());
    }

    #[test]
    fn basis_product_is_bilinear() {
        // toy rule: keys multiply by addition, saturating out above 10
        let rule = |a: u64, b: u64| if a + b <= 10 { Some(a + b) } else { None };
        let x = e(2, 3).add(&e(7, 1)).unwrap();
        let y = e(1, 2).add(&e(5, 1)).unwrap();
        let p = x.mul_basis(&y, rule).unwrap();
        // 2+1 -> 6, 2+5 -> 3, 7+1 -> 2, 7+5 dropped
        assert_eq!(p.coeff(3), Scalar::from_i64(RingTag::Integer, 6));
        assert_eq!(p.coeff(7), Scalar::from_i64(RingTag::Integer, 3));
        assert_eq!(p.coeff(8), Scalar::from_i64(RingTag::Integer, 2));
        assert_eq!(p.coeff(12), Scalar::from_i64(RingTag::Integer, 0));
    }

    #[test]
    fn pack_roundtrip() {
        assert_eq!(unpack_pair(pack_pair(5, 130_000)), (5, 130_000));
    }

    #[test]
    fn display_formats_signs() {
        let x = e(1, 1).add(&e(2, -1)).unwrap().add(&e(3, 4)).unwrap();
        let s = x.display_with(|k| format!("b{k}"));
        assert_eq!(s, "b1 - b2 + 4*b3");
    }
}
