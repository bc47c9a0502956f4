//! The algebra E spanned by the essential relations on n points.
//!
//! Products of basis relations are relation composition, with inessential
//! results collapsing to zero. On top of that: the ideal H spanned by
//! essential relations strictly containing a permutation (E/H is the group
//! algebra of the symmetric group), the nilpotent ideal N generated by
//! closure defects (S - S-closure) * Delta_sigma, its exact nilpotency
//! index, the normal-form projection onto the algebra of permuted orders,
//! and the regular representation on the left ideal spanned by the
//! translates of the usual total order.

use std::collections::{HashMap, HashSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;

use crate::algebra::{pack_pair, AlgebraElement, BasisTag};
use crate::error::{Error, Result};
use crate::essentiality::enumerate_essential;
use crate::linalg::{RowReducer, SparseVec};
use crate::order_lattice::OrderLattice;
use crate::permutation::{all_permutations, Permutation, FACTORIALS};
use crate::relation::{reflexive_part, Relation};
use crate::scalar::{RingTag, Scalar};

pub struct EssentialAlgebra {
    n: u8,
    basis: Vec<Relation>,
    masks: HashSet<u64>,
}

impl EssentialAlgebra {
    /// Full algebra operations are kept to n <= 4, where the basis tops out
    /// at 5256 relations and the essentiality memo table exists.
    pub fn build(n: u8) -> Result<Self> {
        if n > 4 {
            return Err(Error::ResourceGuard(format!(
                "full essential-algebra operations are limited to n <= 4, got {n}"
            )));
        }
        let basis = enumerate_essential(n, false)?;
        let masks = basis.iter().map(Relation::mask64).collect();
        Ok(EssentialAlgebra { n, basis, masks })
    }

    pub fn n(&self) -> u8 {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Relation] {
        &self.basis
    }

    pub fn tag(&self) -> BasisTag {
        BasisTag::Essential { n: self.n }
    }

    pub fn is_basis_mask(&self, mask: u64) -> bool {
        self.masks.contains(&mask)
    }

    /// The class of a relation: a basis element if essential, zero if not.
    pub fn element(&self, r: &Relation, ring: RingTag) -> AlgebraElement {
        if self.masks.contains(&r.mask64()) {
            AlgebraElement::basis(self.tag(), ring, r.mask64())
        } else {
            AlgebraElement::zero(self.tag(), ring)
        }
    }

    /// Bilinear extension of R*S = compose(R,S), or 0 when the composite
    /// is inessential.
    pub fn multiply(&self, a: &AlgebraElement, b: &AlgebraElement) -> Result<AlgebraElement> {
        if a.tag() != self.tag() || b.tag() != self.tag() {
            return Err(Error::Domain(format!(
                "expected {:?} elements, got {:?} and {:?}",
                self.tag(),
                a.tag(),
                b.tag()
            )));
        }
        a.mul_basis(b, |x, y| {
            let r = Relation::from_mask64(self.n, x);
            let s = Relation::from_mask64(self.n, y);
            let prod = r.compose(&s).expect("same n by construction").mask64();
            self.masks.contains(&prod).then_some(prod)
        })
    }

    pub fn unit(&self, ring: RingTag) -> AlgebraElement {
        AlgebraElement::basis(self.tag(), ring, Relation::diagonal(self.n).mask64())
    }

    /// H = span of essential relations strictly containing a permutation.
    /// Returns the H-basis together with the multiplication table of E/H on
    /// the residual basis {Delta_sigma}: entry [s][t] is the index of the
    /// product permutation, so E/H is the symmetric group algebra.
    pub fn quotient_by_h(&self) -> (Vec<Relation>, Vec<usize>) {
        let nf = FACTORIALS[self.n as usize];
        let h_basis: Vec<Relation> = self
            .basis
            .iter()
            .filter(|r| r.pair_count() as usize > self.n as usize)
            .copied()
            .collect();
        debug_assert_eq!(h_basis.len() + nf, self.basis.len());
        let perms = all_permutations(self.n);
        let mut table = vec![0usize; nf * nf];
        for s in &perms {
            for t in &perms {
                table[s.index() * nf + t.index()] = s.compose(t).index();
            }
        }
        (h_basis, table)
    }

    /// Generators of the nilpotent ideal N: for every reflexive essential S
    /// and every sigma, the element S*Delta_sigma - closure(S)*Delta_sigma,
    /// with inessential terms mapped to zero. Zero generators are dropped
    /// and duplicates removed.
    pub fn n_ideal_generators(&self, ring: RingTag) -> Vec<AlgebraElement> {
        let mut seen = HashSet::new();
        let mut gens = Vec::new();
        for s in &self.basis {
            if !s.classify().reflexive {
                continue;
            }
            let closure = s.transitive_closure();
            if closure == *s {
                continue;
            }
            for sigma in all_permutations(self.n) {
                let delta = Relation::delta(&sigma);
                let pos = s.compose(&delta).expect("same n");
                let neg = closure.compose(&delta).expect("same n");
                let pos_key = self.masks.contains(&pos.mask64()).then(|| pos.mask64());
                let neg_key = self.masks.contains(&neg.mask64()).then(|| neg.mask64());
                if pos_key == neg_key {
                    continue;
                }
                if !seen.insert((pos_key, neg_key)) {
                    continue;
                }
                let mut el = AlgebraElement::zero(self.tag(), ring);
                if let Some(k) = pos_key {
                    el.add_term(k, &Scalar::one(ring));
                }
                if let Some(k) = neg_key {
                    el.add_term(k, &Scalar::one(ring).neg());
                }
                gens.push(el);
            }
        }
        gens
    }

    /// Least m with N^m = 0, where N is the two-sided ideal generated by
    /// `gens`. Exact rational span arithmetic; if the powers fail to die
    /// before dim E steps the nilpotency claim itself is falsified.
    pub fn nilpotency_index(&self, gens: &[AlgebraElement]) -> Result<u32> {
        for g in gens {
            if g.ring() != RingTag::Rational {
                return Err(Error::Precondition(
                    "nilpotency iteration requires rational scalars".into(),
                ));
            }
        }
        let ideal = self.two_sided_ideal(gens)?;
        if ideal.is_empty() {
            return Ok(1);
        }
        let mut power = ideal.clone();
        for m in 1..=self.dim() as u32 + 1 {
            if power.is_empty() {
                return Ok(m);
            }
            // next power: products of the current spanning set with N
            let products: Vec<AlgebraElement> = power
                .par_iter()
                .map(|v| {
                    ideal.iter().map(|w| self.multiply(v, w).expect("tags match"))
                })
                .flatten_iter()
                .collect();
            power = reduce_to_basis(products)?;
        }
        Err(Error::InternalInconsistency(format!(
            "ideal powers did not vanish within dim E = {} steps",
            self.dim()
        )))
    }

    /// Spanning set of the two-sided ideal generated by `gens` inside E,
    /// reduced to a linearly independent list.
    pub fn two_sided_ideal(&self, gens: &[AlgebraElement]) -> Result<Vec<AlgebraElement>> {
        // Delta is a basis element, so basis * g * basis covers g itself
        let candidates: Vec<AlgebraElement> = gens
            .par_iter()
            .map(|g| {
                let mut out = Vec::new();
                for a in &self.basis {
                    let left = self
                        .multiply(
                            &AlgebraElement::basis(self.tag(), g.ring(), a.mask64()),
                            g,
                        )
                        .expect("tags match");
                    if left.is_zero() {
                        continue;
                    }
                    for b in &self.basis {
                        let full = self
                            .multiply(
                                &left,
                                &AlgebraElement::basis(self.tag(), g.ring(), b.mask64()),
                            )
                            .expect("tags match");
                        if !full.is_zero() {
                            out.push(full);
                        }
                    }
                }
                out
            })
            .flatten_iter()
            .collect();
        reduce_to_basis(candidates)
    }

    /// Linear extension of the normal-form projection onto the algebra of
    /// permuted orders, in the monomial basis (order, sigma).
    pub fn project_element_to_p(
        &self,
        a: &AlgebraElement,
        lat: &OrderLattice,
    ) -> Result<AlgebraElement> {
        let mut out =
            AlgebraElement::zero(BasisTag::OrderMonomial { n: self.n }, a.ring());
        for (key, coeff) in a.terms() {
            let r = Relation::from_mask64(self.n, key);
            if let Some((order_idx, sigma)) = project_to_p(&r, lat)? {
                out.add_term(pack_pair(sigma.index() as u32, order_idx), coeff);
            }
        }
        Ok(out)
    }

    /// The regular representation on the left ideal spanned by
    /// {Delta_sigma * T} for the usual total order T.
    pub fn regular_representation(&self) -> Result<RegularRepReport> {
        let nf = FACTORIALS[self.n as usize];
        let t = Relation::usual_total_order(self.n);
        let perms = all_permutations(self.n);
        let translates: Vec<Relation> = perms
            .iter()
            .map(|s| Relation::delta(s).compose(&t).expect("same n"))
            .collect();
        let index_of: HashMap<u64, usize> =
            translates.iter().enumerate().map(|(i, r)| (r.mask64(), i)).collect();
        debug_assert_eq!(index_of.len(), nf);

        // every essential relation must act on the translates as zero or as
        // a shift to another translate
        let mut reducer = RowReducer::new();
        let mut image_rank = 0;
        for r in &self.basis {
            let mut vec = SparseVec::new();
            for (col, l) in translates.iter().enumerate() {
                let image = r.compose(l).expect("same n");
                if !self.masks.contains(&image.mask64()) {
                    continue;
                }
                let row = *index_of.get(&image.mask64()).ok_or_else(|| {
                    Error::InternalInconsistency(format!(
                        "action of {r:?} left the translate basis"
                    ))
                })?;
                vec.set((row * nf + col) as u64, BigRational::from(BigInt::from(1)));
            }
            if reducer.insert(vec) {
                image_rank += 1;
            }
        }

        // surjectivity: Delta_tau * T * Delta_rho-inverse acts as the matrix
        // unit at (tau, rho)
        let mut matrix_units_ok = true;
        for tau in &perms {
            for rho in &perms {
                let u = Relation::delta(tau)
                    .compose(&t)
                    .and_then(|x| x.compose(&Relation::delta(&rho.inverse())))
                    .expect("same n");
                for (col, l) in translates.iter().enumerate() {
                    let image = u.compose(l).expect("same n");
                    let expect = if col == rho.index() {
                        Some(translates[tau.index()].mask64())
                    } else {
                        None
                    };
                    let got = self
                        .masks
                        .contains(&image.mask64())
                        .then(|| image.mask64());
                    if got != expect {
                        matrix_units_ok = false;
                    }
                }
            }
        }

        Ok(RegularRepReport { module_dim: nf, matrix_units_ok, image_rank })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegularRepReport {
    pub module_dim: usize,
    pub matrix_units_ok: bool,
    pub image_rank: usize,
}

/// Normal form of an essential relation modulo the nilpotent ideal: the
/// unique decomposition R = (order) * Delta_sigma when one exists, absent
/// when R dies in the quotient. Two distinct witnesses would contradict
/// the uniqueness argument behind the quotient basis, so that case is an
/// internal inconsistency.
pub fn project_to_p(
    r: &Relation,
    lat: &OrderLattice,
) -> Result<Option<(u32, Permutation)>> {
    let mut hit: Option<(u32, Permutation)> = None;
    for sigma in r.contained_permutations() {
        let q = reflexive_part(r, &sigma);
        let closure = q.transitive_closure();
        if !closure.classify().order {
            continue;
        }
        let idx = lat
            .index_of(&closure)
            .ok_or_else(|| Error::InternalInconsistency("order missing from lattice".into()))?;
        if let Some((prev_idx, prev_sigma)) = &hit {
            return Err(Error::InternalInconsistency(format!(
                "two normal forms for {r:?}: ({prev_idx}, {prev_sigma:?}) and ({idx}, {sigma:?})"
            )));
        }
        hit = Some((idx, sigma));
    }
    Ok(hit)
}

/// Reduce a spanning list to a linearly independent sub-list (rationals).
fn reduce_to_basis(elements: Vec<AlgebraElement>) -> Result<Vec<AlgebraElement>> {
    let mut reducer = RowReducer::new();
    let mut basis = Vec::new();
    for el in elements {
        if reducer.insert(SparseVec::from_element(&el)?) {
            basis.push(el);
        }
    }
    Ok(basis)
}
