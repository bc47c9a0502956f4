//! The algebra P spanned by the monomials S * Delta_sigma (S an order),
//! i.e. the quotient of the essential algebra by its nilpotent ideal.
//!
//! Two bases are maintained: the monomials S * Delta_sigma and the
//! idempotent basis Delta_sigma * f_S, with exact unitriangular conversion
//! both ways. Products are single-symbol rules in the f-basis:
//! (Delta_tau f_S)(Delta_sigma f_R) = Delta_{tau sigma} f_R when S is the
//! sigma-conjugate of R, zero otherwise. On top of that: the central
//! idempotents e_R per orbit, the structure map onto matrix algebras over
//! stabilizer group algebras, and the full verification that this map is
//! an isomorphism.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::algebra::{pack_pair, unpack_pair, AlgebraElement, BasisTag};
use crate::error::{Error, Result};
use crate::linalg::{RowReducer, SparseVec};
use crate::order_lattice::OrderLattice;
use crate::permutation::{all_permutations, Permutation, FACTORIALS};
use crate::scalar::{RingTag, Scalar};

/// Per-orbit data fixing the matrix coordinates of one factor.
struct Factor {
    rep: u32,
    subgroup: Vec<Permutation>,
    /// position of a subgroup element by its permutation index
    subgroup_pos: HashMap<usize, usize>,
    coset_reps: Vec<Permutation>,
    /// coset_of[perm_index] = row/column of the coset containing it
    coset_of: Vec<usize>,
    /// column attached to each orbit member order-index
    member_column: HashMap<u32, usize>,
}

pub struct PAlgebra<'a> {
    lat: &'a OrderLattice,
    /// conj[perm_index * |O| + order] = index of the conjugated order
    conj: Vec<u32>,
    factors: Vec<Factor>,
}

impl<'a> PAlgebra<'a> {
    pub fn new(lat: &'a OrderLattice) -> Result<Self> {
        let n = lat.n();
        if n > 5 {
            return Err(Error::ResourceGuard(format!(
                "permuted-orders algebra is limited to n <= 5, got {n}"
            )));
        }
        let nf = FACTORIALS[n as usize];
        let count = lat.len();
        let perms = all_permutations(n);
        let conj: Vec<u32> = perms
            .par_iter()
            .flat_map_iter(|sigma| {
                (0..count as u32).map(move |i| {
                    lat.index_of(&lat.order(i).conjugate(sigma))
                        .expect("conjugate of an order is an order")
                })
            })
            .collect();

        let factors = lat
            .orbit_reps()
            .iter()
            .map(|&rep| {
                let subgroup = lat.stabilizer(rep).to_vec();
                let subgroup_pos =
                    subgroup.iter().enumerate().map(|(i, h)| (h.index(), i)).collect();
                let coset_reps = lat.coset_reps(rep);
                let mut coset_of = vec![usize::MAX; nf];
                let mut member_column = HashMap::new();
                for (j, rho) in coset_reps.iter().enumerate() {
                    for h in &subgroup {
                        coset_of[rho.compose(h).index()] = j;
                    }
                    member_column.insert(conj[rho.index() * count + rep as usize], j);
                }
                Factor { rep, subgroup, subgroup_pos, coset_reps, coset_of, member_column }
            })
            .collect();

        Ok(PAlgebra { lat, conj, factors })
    }

    pub fn lat(&self) -> &OrderLattice {
        self.lat
    }

    pub fn n(&self) -> u8 {
        self.lat.n()
    }

    pub fn dim(&self) -> usize {
        FACTORIALS[self.n() as usize] * self.lat.len()
    }

    pub fn conj_index(&self, perm_index: usize, order: u32) -> u32 {
        self.conj[perm_index * self.lat.len() + order as usize]
    }

    fn monomial_tag(&self) -> BasisTag {
        BasisTag::OrderMonomial { n: self.n() }
    }

    fn f_tag(&self) -> BasisTag {
        BasisTag::OrderIdempotent { n: self.n() }
    }

    /// (Delta_tau f_S)(Delta_sigma f_R): Delta_{tau sigma} f_R when S is
    /// the sigma-conjugate of R, zero otherwise.
    pub fn p_multiply_f_basis(
        &self,
        tau: &Permutation,
        s: u32,
        sigma: &Permutation,
        r: u32,
    ) -> Option<(Permutation, u32)> {
        (self.conj_index(sigma.index(), r) == s).then(|| (tau.compose(sigma), r))
    }

    /// Product of elements in the f-basis.
    pub fn multiply_f(&self, a: &AlgebraElement, b: &AlgebraElement) -> Result<AlgebraElement> {
        if a.tag() != self.f_tag() || b.tag() != self.f_tag() {
            return Err(Error::Domain(format!(
                "expected {:?} elements, got {:?} and {:?}",
                self.f_tag(),
                a.tag(),
                b.tag()
            )));
        }
        let n = self.n();
        a.mul_basis(b, |x, y| {
            let (tau_i, s) = unpack_pair(x);
            let (sigma_i, r) = unpack_pair(y);
            if self.conj_index(sigma_i as usize, r) != s {
                return None;
            }
            let tau = Permutation::from_index(n, tau_i as usize);
            let sigma = Permutation::from_index(n, sigma_i as usize);
            Some(pack_pair(tau.compose(&sigma).index() as u32, r))
        })
    }

    /// Product of elements in the monomial basis:
    /// (S Delta_sigma)(T Delta_tau) = (S v sigma(T)) Delta_{sigma tau} or 0.
    pub fn multiply_monomial(
        &self,
        a: &AlgebraElement,
        b: &AlgebraElement,
    ) -> Result<AlgebraElement> {
        let ring = crate::lattice_idempotents::OrderSpanRing { lat: self.lat, ring: a.ring() };
        a.mul_basis(b, |x, y| ring.monomial_product(x, y))
    }

    /// Delta_sigma f_R = sum over S >= R of mu(R,S) (conj(S,sigma)) Delta_sigma.
    pub fn f_to_monomial(&self, a: &AlgebraElement) -> Result<AlgebraElement> {
        if a.tag() != self.f_tag() {
            return Err(Error::Domain(format!("expected f-basis, got {:?}", a.tag())));
        }
        let mut out = AlgebraElement::zero(self.monomial_tag(), a.ring());
        for (key, coeff) in a.terms() {
            let (sigma_i, r) = unpack_pair(key);
            for &s in self.lat.up_set(r) {
                let mu = self.lat.mobius_value(r, s)?;
                let c = coeff.mul(&Scalar::from_i64(a.ring(), mu));
                out.add_term(pack_pair(sigma_i, self.conj_index(sigma_i as usize, s)), &c);
            }
        }
        Ok(out)
    }

    /// S Delta_sigma = sum over Y >= S of Delta_sigma f_{conj(Y, sigma^-1)}.
    pub fn monomial_to_f(&self, a: &AlgebraElement) -> Result<AlgebraElement> {
        if a.tag() != self.monomial_tag() {
            return Err(Error::Domain(format!(
                "expected monomial basis, got {:?}",
                a.tag()
            )));
        }
        let n = self.n();
        let mut out = AlgebraElement::zero(self.f_tag(), a.ring());
        for (key, coeff) in a.terms() {
            let (sigma_i, s) = unpack_pair(key);
            let inv = Permutation::from_index(n, sigma_i as usize).inverse().index();
            for &y in self.lat.up_set(s) {
                out.add_term(pack_pair(sigma_i, self.conj_index(inv, y)), coeff);
            }
        }
        Ok(out)
    }

    pub fn unit_f(&self, ring: RingTag) -> AlgebraElement {
        // Delta = sum of f_S over all orders
        let mut out = AlgebraElement::zero(self.f_tag(), ring);
        for s in 0..self.lat.len() as u32 {
            out.add_term(pack_pair(0, s), &Scalar::one(ring));
        }
        out
    }

    /// e_R = sum of f_S over the orbit of R: orthogonal central idempotents
    /// indexed by orbit representatives, summing to the unit.
    pub fn central_idempotents(&self, ring: RingTag) -> Vec<(u32, AlgebraElement)> {
        self.lat
            .orbits()
            .iter()
            .zip(self.lat.orbit_reps())
            .map(|(members, &rep)| {
                let mut e = AlgebraElement::zero(self.f_tag(), ring);
                for &s in members {
                    e.add_term(pack_pair(0, s), &Scalar::one(ring));
                }
                (rep, e)
            })
            .collect()
    }

    /// Coordinates of the image of a single f-basis symbol Delta_tau f_S:
    /// a single matrix entry (factor, row, column, subgroup element).
    fn term_coordinates(&self, key: u64) -> (usize, usize, usize, usize) {
        let (tau_i, s) = unpack_pair(key);
        let rep = self.lat.orbit_rep_of(s);
        let factor_pos = self
            .lat
            .orbit_reps()
            .iter()
            .position(|&r| r == rep)
            .expect("rep is listed");
        let factor = &self.factors[factor_pos];
        let col = factor.member_column[&s];
        let rho_j = &factor.coset_reps[col];
        let moved = Permutation::from_index(self.n(), tau_i as usize).compose(rho_j);
        let row = factor.coset_of[moved.index()];
        let h = factor.coset_reps[row].inverse().compose(&moved);
        let h_pos = factor.subgroup_pos[&h.index()];
        (factor_pos, row, col, h_pos)
    }

    /// The structure map: for each orbit factor, the matrix of left
    /// multiplication by `a` on the left ideal P f_R with respect to the
    /// right-module basis {Delta_rho f_R : rho coset rep}.
    pub fn structure_map(&self, a: &AlgebraElement) -> Result<Vec<GroupAlgebraMatrix>> {
        if a.tag() != self.f_tag() {
            return Err(Error::Domain(format!("expected f-basis, got {:?}", a.tag())));
        }
        let mut out: Vec<GroupAlgebraMatrix> = self
            .factors
            .iter()
            .map(|f| GroupAlgebraMatrix::zero(self.n(), f.rep, &f.subgroup, &f.coset_reps, a.ring()))
            .collect();
        for (key, coeff) in a.terms() {
            let (factor_pos, row, col, h_pos) = self.term_coordinates(key);
            let factor = &self.factors[factor_pos];
            let g = factor.subgroup[h_pos].index() as u64;
            let size = factor.coset_reps.len();
            out[factor_pos].entries[row * size + col].add_term(g, coeff);
        }
        Ok(out)
    }

    /// Full verification that the structure map is an algebra isomorphism
    /// onto the product of matrix algebras over the stabilizer group
    /// algebras: exact rank identity, surjectivity onto every matrix unit
    /// with every group-element entry, and injectivity over the rationals.
    pub fn verify_structure_iso(&self) -> Result<StructureReport> {
        let n = self.n();
        let nf = FACTORIALS[n as usize];
        let dim_p = self.dim();

        let factors: Vec<StructureFactor> = self
            .factors
            .iter()
            .map(|f| StructureFactor {
                rep: f.rep,
                matrix_size: f.coset_reps.len(),
                stabilizer_order: f.subgroup.len(),
                rank: f.coset_reps.len() * f.coset_reps.len() * f.subgroup.len(),
            })
            .collect();
        let rank_sum: usize = factors.iter().map(|f| f.rank).sum();
        let rank_identity_ok = rank_sum == dim_p
            && factors.iter().all(|f| f.rank == f.matrix_size * nf);

        // surjectivity: Delta_tau f_R Delta_{g rho^-1} hits the elementary
        // matrix with entry Delta_g at (tau, rho) in its factor and nothing
        // elsewhere
        let surjective = self
            .factors
            .par_iter()
            .enumerate()
            .map(|(fp, factor)| -> Result<bool> {
                for (i, tau) in factor.coset_reps.iter().enumerate() {
                    for (j, rho) in factor.coset_reps.iter().enumerate() {
                        for g in &factor.subgroup {
                            // f_R Delta_s = Delta_s f_{conj(R, s^-1)}
                            let s = g.compose(&rho.inverse());
                            let order = self.conj_index(s.inverse().index(), factor.rep);
                            let el = AlgebraElement::basis(
                                self.f_tag(),
                                RingTag::Rational,
                                pack_pair(tau.compose(&s).index() as u32, order),
                            );
                            let image = self.structure_map(&el)?;
                            for (fp2, mat) in image.iter().enumerate() {
                                let expect_entry = |r: usize, c: usize| {
                                    if fp2 == fp && r == i && c == j {
                                        AlgebraElement::basis(
                                            BasisTag::Group { n },
                                            RingTag::Rational,
                                            g.index() as u64,
                                        )
                                    } else {
                                        AlgebraElement::zero(
                                            BasisTag::Group { n },
                                            RingTag::Rational,
                                        )
                                    }
                                };
                                let size = mat.size();
                                for r in 0..size {
                                    for c in 0..size {
                                        if *mat.entry(r, c) != expect_entry(r, c) {
                                            return Ok(false);
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
                Ok(true)
            })
            .collect::<Result<Vec<bool>>>()?
            .into_iter()
            .all(|ok| ok);

        // injectivity: each f-basis symbol lands on one flat coordinate;
        // rank over the rationals must equal dim P
        let mut offsets = Vec::with_capacity(self.factors.len());
        let mut acc = 0u64;
        for f in &self.factors {
            offsets.push(acc);
            acc += (f.coset_reps.len() * f.coset_reps.len() * f.subgroup.len()) as u64;
        }
        let mut reducer = RowReducer::new();
        let mut injective_rank = 0usize;
        for tau_i in 0..nf as u32 {
            for s in 0..self.lat.len() as u32 {
                let (fp, row, col, h_pos) = self.term_coordinates(pack_pair(tau_i, s));
                let factor = &self.factors[fp];
                let size = factor.coset_reps.len();
                let flat = offsets[fp]
                    + (((row * size + col) * factor.subgroup.len()) + h_pos) as u64;
                let mut v = SparseVec::new();
                v.set(flat, num_rational::BigRational::from(num_bigint::BigInt::from(1)));
                if reducer.insert(v) {
                    injective_rank += 1;
                }
            }
        }
        let injective = injective_rank == dim_p;

        Ok(StructureReport { n, dim_p, factors, rank_identity_ok, surjective, injective })
    }
}

/// A matrix over the group algebra of a stabilizer subgroup, in fixed
/// coset-representative coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupAlgebraMatrix {
    pub rep: u32,
    pub subgroup: Vec<Permutation>,
    pub coset_reps: Vec<Permutation>,
    /// row-major size x size entries on the Group basis (keys are
    /// permutation indices in the full symmetric group)
    pub entries: Vec<AlgebraElement>,
}

impl GroupAlgebraMatrix {
    fn zero(
        n: u8,
        rep: u32,
        subgroup: &[Permutation],
        coset_reps: &[Permutation],
        ring: RingTag,
    ) -> Self {
        let size = coset_reps.len();
        GroupAlgebraMatrix {
            rep,
            subgroup: subgroup.to_vec(),
            coset_reps: coset_reps.to_vec(),
            entries: vec![AlgebraElement::zero(BasisTag::Group { n }, ring); size * size],
        }
    }

    pub fn size(&self) -> usize {
        self.coset_reps.len()
    }

    pub fn entry(&self, row: usize, col: usize) -> &AlgebraElement {
        &self.entries[row * self.size() + col]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(AlgebraElement::is_zero)
    }

    pub fn is_identity(&self, ring: RingTag) -> bool {
        let n = self.subgroup[0].n();
        (0..self.size()).all(|r| {
            (0..self.size()).all(|c| {
                let e = self.entry(r, c);
                if r == c {
                    *e == AlgebraElement::basis(
                        BasisTag::Group { n },
                        ring,
                        Permutation::identity(n).index() as u64,
                    )
                } else {
                    e.is_zero()
                }
            })
        })
    }

    /// Matrix product; entries multiply in the group algebra.
    pub fn multiply(&self, other: &GroupAlgebraMatrix) -> Result<GroupAlgebraMatrix> {
        if self.rep != other.rep || self.size() != other.size() {
            return Err(Error::Domain("matrix factors do not match".into()));
        }
        let n = self.subgroup[0].n();
        let size = self.size();
        let mut out = self.clone();
        for r in 0..size {
            for c in 0..size {
                let mut acc = AlgebraElement::zero(
                    BasisTag::Group { n },
                    self.entries[0].ring(),
                );
                for k in 0..size {
                    let prod = self.entry(r, k).mul_basis(other.entry(k, c), |g, h| {
                        let gp = Permutation::from_index(n, g as usize);
                        let hp = Permutation::from_index(n, h as usize);
                        Some(gp.compose(&hp).index() as u64)
                    })?;
                    acc = acc.add(&prod)?;
                }
                out.entries[r * size + c] = acc;
            }
        }
        Ok(out)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureFactor {
    pub rep: u32,
    pub matrix_size: usize,
    pub stabilizer_order: usize,
    /// k-dimension of this matrix factor: size^2 * |stabilizer|
    pub rank: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureReport {
    pub n: u8,
    pub dim_p: usize,
    pub factors: Vec<StructureFactor>,
    pub rank_identity_ok: bool,
    pub surjective: bool,
    pub injective: bool,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice_idempotents::order_idempotents;
    use crate::order_lattice::build_order_lattice;
    use crate::relation::Relation;

    const RAT: RingTag = RingTag::Rational;

    fn f_term(p: &PAlgebra, sigma: &Permutation, r: u32) -> AlgebraElement {
        AlgebraElement::basis(
            BasisTag::OrderIdempotent { n: p.n() },
            RAT,
            pack_pair(sigma.index() as u32, r),
        )
    }

    #[test]
    fn f_basis_product_rule() {
        let lat = build_order_lattice(2).unwrap();
        let p = PAlgebra::new(&lat).unwrap();
        let id = Permutation::identity(2);
        let swap = Permutation::swap(2, 0, 1);
        let t1 = lat.index_of(&Relation::usual_total_order(2)).unwrap();
        let t2 = lat.index_of(&Relation::usual_total_order(2).transpose()).unwrap();
        // idempotent and orthogonal
        assert_eq!(p.p_multiply_f_basis(&id, t1, &id, t1), Some((id, t1)));
        assert_eq!(p.p_multiply_f_basis(&id, t2, &id, t1), None);
        // conjugation through the permutation: t2 = swap(t1)
        assert_eq!(p.conj_index(swap.index(), t1), t2);
        assert_eq!(
            p.p_multiply_f_basis(&swap, t2, &swap, t1),
            Some((Permutation::identity(2), t1))
        );
    }

    #[test]
    fn f_basis_conjugation_relabels_support() {
        // Delta_sigma f_R Delta_{sigma^-1} = f_{conj(R, sigma)}: relabeling
        // the monomial support of f_R coefficientwise gives f_{conj R}
        for n in 2..=3u8 {
            let lat = build_order_lattice(n).unwrap();
            let p = PAlgebra::new(&lat).unwrap();
            let f = order_idempotents(&lat, RingTag::Integer).unwrap();
            for sigma in all_permutations(n) {
                for r in 0..lat.len() as u32 {
                    let relabeled = f[r as usize]
                        .map_basis(|key| {
                            let (pi, s) = unpack_pair(key);
                            assert_eq!(pi, 0);
                            Ok(AlgebraElement::basis(
                                BasisTag::OrderMonomial { n },
                                RingTag::Integer,
                                pack_pair(0, p.conj_index(sigma.index(), s)),
                            ))
                        })
                        .unwrap();
                    let target = &f[p.conj_index(sigma.index(), r) as usize];
                    assert_eq!(relabeled, *target);
                }
            }
        }
    }

    #[test]
    fn basis_change_roundtrip() {
        let lat = build_order_lattice(3).unwrap();
        let p = PAlgebra::new(&lat).unwrap();
        for sigma in all_permutations(3).iter().step_by(2) {
            for r in (0..lat.len() as u32).step_by(3) {
                let f = f_term(&p, sigma, r);
                let mono = p.f_to_monomial(&f).unwrap();
                assert_eq!(p.monomial_to_f(&mono).unwrap(), f);
                // and the other direction
                let m = AlgebraElement::basis(
                    BasisTag::OrderMonomial { n: 3 },
                    RAT,
                    pack_pair(sigma.index() as u32, r),
                );
                let in_f = p.monomial_to_f(&m).unwrap();
                assert_eq!(p.f_to_monomial(&in_f).unwrap(), m);
            }
        }
    }

    #[test]
    fn f_basis_product_matches_monomial_product() {
        let lat = build_order_lattice(3).unwrap();
        let p = PAlgebra::new(&lat).unwrap();
        let perms = all_permutations(3);
        for (i, sigma) in perms.iter().enumerate().step_by(2) {
            for tau in perms.iter().skip(i % 2).step_by(3) {
                for r in (0..19u32).step_by(4) {
                    for s in (0..19u32).step_by(5) {
                        let a = f_term(&p, sigma, r);
                        let b = f_term(&p, tau, s);
                        let direct = p.multiply_f(&a, &b).unwrap();
                        let via_monomials = p
                            .monomial_to_f(
                                &p.multiply_monomial(
                                    &p.f_to_monomial(&a).unwrap(),
                                    &p.f_to_monomial(&b).unwrap(),
                                )
                                .unwrap(),
                            )
                            .unwrap();
                        assert_eq!(direct, via_monomials);
                    }
                }
            }
        }
    }

    #[test]
    fn central_idempotents_n2() {
        let lat = build_order_lattice(2).unwrap();
        let p = PAlgebra::new(&lat).unwrap();
        let es = p.central_idempotents(RAT);
        assert_eq!(es.len(), 2);
        let d = lat.diagonal_index();
        let t1 = lat.index_of(&Relation::usual_total_order(2)).unwrap();
        let t2 = lat.index_of(&Relation::usual_total_order(2).transpose()).unwrap();
        for (rep, e) in &es {
            if *rep == d {
                assert_eq!(*e, f_term(&p, &Permutation::identity(2), d));
            } else {
                let expect = f_term(&p, &Permutation::identity(2), t1)
                    .add(&f_term(&p, &Permutation::identity(2), t2))
                    .unwrap();
                assert_eq!(*e, expect);
                // f_T = T for total orders, so e_T = T1 + T2 in monomials
                let mono = p.f_to_monomial(e).unwrap();
                assert_eq!(mono.support_len(), 2);
                assert_eq!(mono.coeff(pack_pair(0, t1)), Scalar::one(RAT));
                assert_eq!(mono.coeff(pack_pair(0, t2)), Scalar::one(RAT));
            }
        }
    }

    #[test]
    fn central_idempotents_are_orthogonal_central_and_sum_to_unit() {
        let lat = build_order_lattice(3).unwrap();
        let p = PAlgebra::new(&lat).unwrap();
        let es = p.central_idempotents(RAT);
        let mut total = AlgebraElement::zero(BasisTag::OrderIdempotent { n: 3 }, RAT);
        for (i, (_, a)) in es.iter().enumerate() {
            total = total.add(a).unwrap();
            for (j, (_, b)) in es.iter().enumerate() {
                let prod = p.multiply_f(a, b).unwrap();
                if i == j {
                    assert_eq!(prod, *a);
                } else {
                    assert!(prod.is_zero());
                }
            }
        }
        assert_eq!(total, p.unit_f(RAT));
        // centrality against every f-basis symbol
        for sigma in all_permutations(3) {
            for r in (0..19u32).step_by(2) {
                let x = f_term(&p, &sigma, r);
                for (_, e) in &es {
                    assert_eq!(
                        p.multiply_f(e, &x).unwrap(),
                        p.multiply_f(&x, e).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn structure_map_of_unit_and_central_idempotents() {
        let lat = build_order_lattice(3).unwrap();
        let p = PAlgebra::new(&lat).unwrap();
        let image = p.structure_map(&p.unit_f(RAT)).unwrap();
        for mat in &image {
            assert!(mat.is_identity(RAT));
        }
        for (rep, e) in p.central_idempotents(RAT) {
            let image = p.structure_map(&e).unwrap();
            for mat in image {
                if mat.rep == rep {
                    assert!(mat.is_identity(RAT));
                } else {
                    assert!(mat.is_zero());
                }
            }
        }
    }

    #[test]
    fn structure_map_is_a_homomorphism() {
        let lat = build_order_lattice(3).unwrap();
        let p = PAlgebra::new(&lat).unwrap();
        let perms = all_permutations(3);
        for sigma in perms.iter().step_by(2) {
            for tau in perms.iter().step_by(3) {
                for r in (0..19u32).step_by(5) {
                    for s in (1..19u32).step_by(6) {
                        let a = f_term(&p, sigma, r);
                        let b = f_term(&p, tau, s);
                        let lhs = p
                            .structure_map(&p.multiply_f(&a, &b).unwrap())
                            .unwrap();
                        let fa = p.structure_map(&a).unwrap();
                        let fb = p.structure_map(&b).unwrap();
                        for ((l, ma), mb) in lhs.iter().zip(&fa).zip(&fb) {
                            assert_eq!(*l, ma.multiply(mb).unwrap());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn structure_iso_small_n() {
        // n = 1: single factor M_1(k)
        let lat1 = build_order_lattice(1).unwrap();
        let p1 = PAlgebra::new(&lat1).unwrap();
        let rep1 = p1.verify_structure_iso().unwrap();
        assert_eq!(rep1.dim_p, 1);
        assert!(rep1.rank_identity_ok && rep1.surjective && rep1.injective);

        // n = 2: M_1(kS2) x M_2(k), ranks 2 + 4 = 6
        let lat2 = build_order_lattice(2).unwrap();
        let p2 = PAlgebra::new(&lat2).unwrap();
        let rep2 = p2.verify_structure_iso().unwrap();
        assert_eq!(rep2.dim_p, 6);
        let mut ranks: Vec<usize> = rep2.factors.iter().map(|f| f.rank).collect();
        ranks.sort_unstable();
        assert_eq!(ranks, vec![2, 4]);
        assert!(rep2.rank_identity_ok && rep2.surjective && rep2.injective);

        // n = 3: M_1(kS3) x M_6(k) x M_3(kC2) x M_3(kC2) x M_6(k)
        let lat3 = build_order_lattice(3).unwrap();
        let p3 = PAlgebra::new(&lat3).unwrap();
        let rep3 = p3.verify_structure_iso().unwrap();
        assert_eq!(rep3.dim_p, 114);
        let mut shapes: Vec<(usize, usize)> = rep3
            .factors
            .iter()
            .map(|f| (f.matrix_size, f.stabilizer_order))
            .collect();
        shapes.sort_unstable();
        assert_eq!(shapes, vec![(1, 6), (3, 2), (3, 2), (6, 1), (6, 1)]);
        assert_eq!(rep3.factors.iter().map(|f| f.rank).sum::<usize>(), 114);
        assert!(rep3.rank_identity_ok && rep3.surjective && rep3.injective);
    }

    #[test]
    fn consistency_with_the_essential_algebra() {
        use crate::essential_algebra::{project_to_p, EssentialAlgebra};
        let e = EssentialAlgebra::build(3).unwrap();
        let lat = build_order_lattice(3).unwrap();
        let p = PAlgebra::new(&lat).unwrap();
        for (i, r) in e.basis().iter().enumerate().step_by(5) {
            let ra = e.element(r, RAT);
            let rp = e.project_element_to_p(&ra, &lat).unwrap();
            for s in e.basis().iter().skip(i % 4).step_by(11) {
                let sa = e.element(s, RAT);
                let sp = e.project_element_to_p(&sa, &lat).unwrap();
                let prod_in_p = p.multiply_monomial(&rp, &sp).unwrap();
                let prod_in_e = e.multiply(&ra, &sa).unwrap();
                let projected = e.project_element_to_p(&prod_in_e, &lat).unwrap();
                assert_eq!(prod_in_p, projected, "at {r:?} * {s:?}");
            }
        }
        // spot check the projection itself on a nontrivial pair
        let cyc = Relation::from_pairs(3, &[(0, 0), (1, 1), (2, 2), (0, 1), (1, 2), (2, 0)]);
        assert_eq!(project_to_p(&cyc, &lat).unwrap(), None);
    }
}
