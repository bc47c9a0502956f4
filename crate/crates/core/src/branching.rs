//! Branching between consecutive sizes: the embedding of the permuted-order
//! algebra on n-1 points into the one on n points (adjoin a new greatest-
//! index point related only to itself), extension sets of orders, and the
//! idempotent branching rule phi(f_R) = sum of f_S over the extensions S.

use crate::algebra::{pack_pair, unpack_pair, AlgebraElement, BasisTag};
use crate::error::{Error, Result};
use crate::lattice_idempotents::{order_idempotents, LatticeRing, OrderSpanRing};
use crate::order_lattice::OrderLattice;
use crate::permutation::{Permutation, FACTORIALS};
use crate::relation::Relation;
use crate::scalar::RingTag;

/// The same relation on one more point, the new point related only to itself.
pub fn embed_order(r: &Relation) -> Relation {
    let n = r.n();
    let mut out = Relation::empty(n + 1).with_pair(n, n);
    for (x, y) in r.pairs() {
        out = out.with_pair(x, y);
    }
    out
}

/// The same permutation on one more point, fixing the new point.
pub fn embed_perm(sigma: &Permutation) -> Permutation {
    let n = sigma.n();
    let mut images: Vec<u8> = sigma.images().to_vec();
    images.push(n);
    Permutation::from_images(&images).expect("still a bijection")
}

/// Restriction of a relation on n points to the first n-1 points.
pub fn restrict_order(r: &Relation) -> Relation {
    let n = r.n();
    let pairs: Vec<(u8, u8)> =
        r.pairs().into_iter().filter(|&(x, y)| x < n - 1 && y < n - 1).collect();
    Relation::from_pairs(n - 1, &pairs)
}

fn check_consecutive(small: &OrderLattice, big: &OrderLattice) -> Result<()> {
    if small.n() + 1 != big.n() {
        return Err(Error::Precondition(format!(
            "lattices must be consecutive sizes, got {} and {}",
            small.n(),
            big.n()
        )));
    }
    Ok(())
}

/// Linear extension of the embedding on the monomial basis:
/// R Delta_sigma at n-1 maps to (R u {(n,n)}) Delta_{sigma'} at n.
pub fn embed_phi(
    a: &AlgebraElement,
    small: &OrderLattice,
    big: &OrderLattice,
) -> Result<AlgebraElement> {
    check_consecutive(small, big)?;
    if a.tag() != (BasisTag::OrderMonomial { n: small.n() }) {
        return Err(Error::Domain(format!(
            "expected monomials at n = {}, got {:?}",
            small.n(),
            a.tag()
        )));
    }
    let mut out = AlgebraElement::zero(BasisTag::OrderMonomial { n: big.n() }, a.ring());
    for (key, coeff) in a.terms() {
        let (sigma_i, r) = unpack_pair(key);
        let sigma = embed_perm(&Permutation::from_index(small.n(), sigma_i as usize));
        let order = big
            .index_of(&embed_order(small.order(r)))
            .ok_or_else(|| Error::InternalInconsistency("embedded order missing".into()))?;
        out.add_term(pack_pair(sigma.index() as u32, order), coeff);
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionSet {
    pub base_order: u32,
    /// order indices at n whose restriction to the first n-1 points is the base
    pub extensions: Vec<u32>,
}

pub fn extension_set(
    base: u32,
    small: &OrderLattice,
    big: &OrderLattice,
) -> Result<ExtensionSet> {
    check_consecutive(small, big)?;
    let base_rel = *small.order(base);
    let extensions = (0..big.len() as u32)
        .filter(|&s| restrict_order(big.order(s)) == base_rel)
        .collect();
    Ok(ExtensionSet { base_order: base, extensions })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplittingReport {
    pub base_order: u32,
    pub extensions: Vec<u32>,
    /// phi(f_R) * f_S = f_S exactly for extensions S, zero otherwise
    pub part_a_ok: bool,
    /// phi(f_R) = sum of f_S over the extensions
    pub part_b_ok: bool,
}

pub fn verify_idempotent_splitting(
    base: u32,
    small: &OrderLattice,
    big: &OrderLattice,
) -> Result<SplittingReport> {
    let ext = extension_set(base, small, big)?;
    let f_small = order_idempotents(small, RingTag::Integer)?;
    let f_big = order_idempotents(big, RingTag::Integer)?;
    let phi_f = embed_phi(&f_small[base as usize], small, big)?;

    let ring = OrderSpanRing { lat: big, ring: RingTag::Integer };
    let mut sum = ring.zero();
    for &s in &ext.extensions {
        sum = ring.add(&sum, &f_big[s as usize]);
    }
    let part_b_ok = phi_f == sum;

    let mut part_a_ok = true;
    for s in 0..big.len() as u32 {
        let prod = ring.mul(&phi_f, &f_big[s as usize]);
        let expect_hit = ext.extensions.contains(&s);
        let ok = if expect_hit { prod == f_big[s as usize] } else { prod.is_zero() };
        if !ok {
            part_a_ok = false;
        }
    }

    Ok(SplittingReport {
        base_order: base,
        extensions: ext.extensions,
        part_a_ok,
        part_b_ok,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BranchRow {
    pub extension: u32,
    /// |Sigma_R (embedded) intersect Sigma_S|
    pub intersection_order: usize,
    /// n! / intersection_order
    pub left_dim: usize,
    /// |Sigma : Sigma_S| * [Sigma_S : Sigma_R intersect Sigma_S], the
    /// latter index counted by explicit coset enumeration
    pub right_dim: usize,
    /// |Sigma_R| / intersection_order: lower bound on the multiplicity
    pub multiplicity_bound: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BranchReport {
    pub base_order: u32,
    pub rows: Vec<BranchRow>,
    pub left_total: usize,
    pub right_total: usize,
    pub ok: bool,
}

/// Dimension bookkeeping for inducing the simple attached to (R, trivial)
/// one size up: both sides of the count computed by different routes.
pub fn branching_dimensions(
    base: u32,
    small: &OrderLattice,
    big: &OrderLattice,
) -> Result<BranchReport> {
    let ext = extension_set(base, small, big)?;
    let nf_big = FACTORIALS[big.n() as usize];
    let stab_r: Vec<Permutation> =
        small.stabilizer(base).iter().map(embed_perm).collect();

    let mut rows = Vec::with_capacity(ext.extensions.len());
    for &s in &ext.extensions {
        let stab_s = big.stabilizer(s);
        let inter: Vec<&Permutation> =
            stab_r.iter().filter(|h| stab_s.contains(h)).collect();
        let intersection_order = inter.len();
        let left_dim = nf_big / intersection_order;
        // [Sigma_S : intersection] by explicit left-coset enumeration
        let mut covered = vec![false; nf_big];
        let mut cosets = 0usize;
        for g in stab_s {
            if covered[g.index()] {
                continue;
            }
            cosets += 1;
            for h in &inter {
                covered[g.compose(h).index()] = true;
            }
        }
        let right_dim = big.orbit_index(s) * cosets;
        rows.push(BranchRow {
            extension: s,
            intersection_order,
            left_dim,
            right_dim,
            multiplicity_bound: stab_r.len() / intersection_order,
        });
    }
    let left_total = rows.iter().map(|r| r.left_dim).sum();
    let right_total = rows.iter().map(|r| r.right_dim).sum();
    let ok = left_total == right_total && rows.iter().all(|r| r.left_dim == r.right_dim);
    Ok(BranchReport { base_order: base, rows, left_total, right_total, ok })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order_lattice::build_order_lattice;

    #[test]
    fn embedding_examples() {
        let lat2 = build_order_lattice(2).unwrap();
        let lat3 = build_order_lattice(3).unwrap();
        // unit to unit
        let unit2 = AlgebraElement::basis(
            BasisTag::OrderMonomial { n: 2 },
            RingTag::Integer,
            pack_pair(0, lat2.diagonal_index()),
        );
        let image = embed_phi(&unit2, &lat2, &lat3).unwrap();
        let unit3 = AlgebraElement::basis(
            BasisTag::OrderMonomial { n: 3 },
            RingTag::Integer,
            pack_pair(0, lat3.diagonal_index()),
        );
        assert_eq!(image, unit3);
        // the chain 1<2 gains an isolated third point
        let chain2 = Relation::usual_total_order(2);
        let embedded = embed_order(&chain2);
        assert_eq!(embedded, Relation::diagonal(3).with_pair(0, 1));
        assert_eq!(restrict_order(&embedded), chain2);
    }

    #[test]
    fn embedding_is_multiplicative_2_to_3() {
        let lat2 = build_order_lattice(2).unwrap();
        let lat3 = build_order_lattice(3).unwrap();
        let ring2 = OrderSpanRing { lat: &lat2, ring: RingTag::Integer };
        let ring3 = OrderSpanRing { lat: &lat3, ring: RingTag::Integer };
        let mut monomials = Vec::new();
        for sigma in 0..2u32 {
            for r in 0..lat2.len() as u32 {
                monomials.push(AlgebraElement::basis(
                    BasisTag::OrderMonomial { n: 2 },
                    RingTag::Integer,
                    pack_pair(sigma, r),
                ));
            }
        }
        for a in &monomials {
            for b in &monomials {
                let lhs = embed_phi(&ring2.mul(a, b), &lat2, &lat3).unwrap();
                let rhs = ring3.mul(
                    &embed_phi(a, &lat2, &lat3).unwrap(),
                    &embed_phi(b, &lat2, &lat3).unwrap(),
                );
                assert_eq!(lhs, rhs);
            }
        }
        // injectivity on monomials: distinct images
        let images: Vec<AlgebraElement> = monomials
            .iter()
            .map(|m| embed_phi(m, &lat2, &lat3).unwrap())
            .collect();
        for (i, x) in images.iter().enumerate() {
            for y in images.iter().skip(i + 1) {
                assert_ne!(x, y);
            }
        }
    }

    #[test]
    fn extension_sets() {
        let lat1 = build_order_lattice(1).unwrap();
        let lat2 = build_order_lattice(2).unwrap();
        let lat3 = build_order_lattice(3).unwrap();
        // everything extends the unique order on one point
        let all = extension_set(0, &lat1, &lat2).unwrap();
        assert_eq!(all.extensions.len(), 3);
        // the diagonal at n=2 extends to the 7 orders keeping 1,2 incomparable
        let d = extension_set(lat2.diagonal_index(), &lat2, &lat3).unwrap();
        assert_eq!(d.extensions.len(), 7);
        // round trip for every base
        for base in 0..lat2.len() as u32 {
            for &s in &extension_set(base, &lat2, &lat3).unwrap().extensions {
                assert_eq!(restrict_order(lat3.order(s)), *lat2.order(base));
            }
        }
        // extension sets partition the big lattice
        let total: usize = (0..lat2.len() as u32)
            .map(|b| extension_set(b, &lat2, &lat3).unwrap().extensions.len())
            .sum();
        assert_eq!(total, lat3.len());
    }

    #[test]
    fn branching_rule_1_to_2() {
        let lat1 = build_order_lattice(1).unwrap();
        let lat2 = build_order_lattice(2).unwrap();
        let report = verify_idempotent_splitting(0, &lat1, &lat2).unwrap();
        assert!(report.part_a_ok && report.part_b_ok);
        assert_eq!(report.extensions.len(), 3);
        // phi(f) is the sum of all idempotents = the diagonal monomial
        let f1 = order_idempotents(&lat1, RingTag::Integer).unwrap();
        let phi = embed_phi(&f1[0], &lat1, &lat2).unwrap();
        let unit = AlgebraElement::basis(
            BasisTag::OrderMonomial { n: 2 },
            RingTag::Integer,
            pack_pair(0, lat2.diagonal_index()),
        );
        assert_eq!(phi, unit);
    }

    #[test]
    fn branching_rule_2_to_3_exhaustive() {
        let lat2 = build_order_lattice(2).unwrap();
        let lat3 = build_order_lattice(3).unwrap();
        for base in 0..lat2.len() as u32 {
            let report = verify_idempotent_splitting(base, &lat2, &lat3).unwrap();
            assert!(report.part_a_ok, "part (a) at base {base}");
            assert!(report.part_b_ok, "part (b) at base {base}");
        }
    }

    #[test]
    fn branching_rule_3_to_4_spot_checks() {
        let lat3 = build_order_lattice(3).unwrap();
        let lat4 = build_order_lattice(4).unwrap();
        for &base in &[
            lat3.diagonal_index(),
            lat3.index_of(&Relation::usual_total_order(3)).unwrap(),
        ] {
            let report = verify_idempotent_splitting(base, &lat3, &lat4).unwrap();
            assert!(report.part_a_ok && report.part_b_ok, "base {base}");
        }
    }

    #[test]
    fn branching_dimension_counts() {
        let lat1 = build_order_lattice(1).unwrap();
        let lat2 = build_order_lattice(2).unwrap();
        let lat3 = build_order_lattice(3).unwrap();
        let r = branching_dimensions(0, &lat1, &lat2).unwrap();
        assert!(r.ok);

        // base diagonal: stabilizer S2
        let rd = branching_dimensions(lat2.diagonal_index(), &lat2, &lat3).unwrap();
        assert!(rd.ok);
        assert_eq!(rd.rows.len(), 7);

        // base chain: trivial stabilizer, so every row is 3!/1 = 6
        let chain = lat2.index_of(&Relation::usual_total_order(2)).unwrap();
        let rc = branching_dimensions(chain, &lat2, &lat3).unwrap();
        assert!(rc.ok);
        for row in &rc.rows {
            assert_eq!(row.intersection_order, 1);
            assert_eq!(row.left_dim, 6);
            assert_eq!(row.right_dim, 6);
            assert_eq!(row.multiplicity_bound, 1);
        }
    }
}
