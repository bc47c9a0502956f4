//! Orthogonal idempotents from multiplicative families on a finite lattice.
//!
//! Given a finite lattice L and ring elements g_x with g_bottom = 1 and
//! g_x g_y = g_{x v y}, Mobius inversion f_x = sum_{x <= y} mu(x,y) g_y
//! yields mutually orthogonal idempotents summing to 1, with
//! g_z f_x = f_x g_z = f_x when z <= x and 0 otherwise.
//!
//! The engine is ring-agnostic; the one specialization this crate cares
//! about is the commutative span of the partial orders (with an adjoined
//! top whose g-value is 0), which produces the order idempotents f_R.

use crate::algebra::{pack_pair, AlgebraElement, BasisTag};
use crate::error::{Error, Result};
use crate::order_lattice::{OrderLattice, TOP};
use crate::scalar::{RingTag, Scalar};

/// Any associative unital ring with exact equality.
pub trait LatticeRing {
    type El: Clone + PartialEq + std::fmt::Debug;
    fn zero(&self) -> Self::El;
    fn one(&self) -> Self::El;
    fn add(&self, a: &Self::El, b: &Self::El) -> Self::El;
    fn mul(&self, a: &Self::El, b: &Self::El) -> Self::El;
    fn scale_int(&self, k: i64, a: &Self::El) -> Self::El;
    fn is_zero(&self, a: &Self::El) -> bool {
        *a == self.zero()
    }
}

/// Scalars as a ring, for synthetic test families.
pub struct ScalarRing(pub RingTag);

impl LatticeRing for ScalarRing {
    type El = Scalar;
    fn zero(&self) -> Scalar {
        Scalar::zero(self.0)
    }
    fn one(&self) -> Scalar {
        Scalar::one(self.0)
    }
    fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        a.add(b)
    }
    fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        a.mul(b)
    }
    fn scale_int(&self, k: i64, a: &Scalar) -> Scalar {
        Scalar::from_i64(self.0, k).mul(a)
    }
}

#[derive(Clone, Debug)]
pub struct FiniteLattice {
    size: usize,
    /// row-major: leq[x*size + y] means x <= y
    leq: Vec<bool>,
    join: Vec<usize>,
    bottom: usize,
    top: usize,
    /// mu(x, y), 0 outside containment
    mobius: Vec<i64>,
}

impl FiniteLattice {
    /// Build from a join table, validating the semilattice laws, the
    /// existence of bottom, and the existence of pairwise meets.
    pub fn from_join_table(size: usize, join: Vec<usize>) -> Result<Self> {
        if size == 0 || join.len() != size * size {
            return Err(Error::Precondition(format!(
                "join table must be {size}x{size}"
            )));
        }
        let j = |x: usize, y: usize| join[x * size + y];
        for x in 0..size {
            if j(x, x) != x {
                return Err(Error::Precondition(format!("join not idempotent at {x}")));
            }
            for y in 0..size {
                if j(x, y) >= size {
                    return Err(Error::Precondition(format!(
                        "join({x},{y}) out of range"
                    )));
                }
                if j(x, y) != j(y, x) {
                    return Err(Error::Precondition(format!(
                        "join not commutative at ({x},{y})"
                    )));
                }
                for z in 0..size {
                    if j(j(x, y), z) != j(x, j(y, z)) {
                        return Err(Error::Precondition(format!(
                            "join not associative at ({x},{y},{z})"
                        )));
                    }
                }
            }
        }
        let mut leq = vec![false; size * size];
        for x in 0..size {
            for y in 0..size {
                leq[x * size + y] = j(x, y) == y;
            }
        }
        let bottom = (0..size)
            .find(|&b| (0..size).all(|x| j(b, x) == x))
            .ok_or_else(|| Error::Precondition("lattice has no bottom element".into()))?;
        let top = (0..size).fold(bottom, |acc, x| j(acc, x));
        // pairwise meets must exist: the join of the common lower bounds
        // must itself be a common lower bound
        for x in 0..size {
            for y in 0..size {
                let m = (0..size)
                    .filter(|&z| leq[z * size + x] && leq[z * size + y])
                    .fold(bottom, |acc, z| j(acc, z));
                if !leq[m * size + x] || !leq[m * size + y] {
                    return Err(Error::Precondition(format!(
                        "pair ({x},{y}) has no meet"
                    )));
                }
            }
        }
        let mobius = compute_mobius(size, &leq);
        Ok(FiniteLattice { size, leq, join, bottom, top, mobius })
    }

    /// The order lattice with an adjoined top (index `len`) whose g-value
    /// will be zero in the multiplicative family.
    pub fn from_order_lattice(lat: &OrderLattice) -> Self {
        let m = lat.len();
        let size = m + 1;
        let infty = m;
        let mut join = vec![infty; size * size];
        for i in 0..m {
            for k in 0..m {
                let v = lat.join(i as u32, k as u32);
                join[i * size + k] = if v == TOP { infty } else { v as usize };
            }
        }
        FiniteLattice::from_join_table(size, join)
            .expect("order containment with adjoined top is a lattice")
    }

    /// Chain 0 < 1 < ... < len-1.
    pub fn chain(len: usize) -> Self {
        let join = (0..len)
            .flat_map(|x| (0..len).map(move |y| x.max(y)))
            .collect();
        FiniteLattice::from_join_table(len, join).expect("chain is a lattice")
    }

    /// Boolean lattice of subsets of a k-set; elements are bitmasks.
    pub fn boolean(k: u32) -> Self {
        let size = 1usize << k;
        let join = (0..size)
            .flat_map(|x| (0..size).map(move |y| x | y))
            .collect();
        FiniteLattice::from_join_table(size, join).expect("subsets form a lattice")
    }

    /// The same underlying set with the reversed order; joins become meets.
    pub fn opposite(&self) -> Result<Self> {
        let mut meet = vec![0usize; self.size * self.size];
        for x in 0..self.size {
            for y in 0..self.size {
                let m = (0..self.size)
                    .filter(|&z| self.leq(z, x) && self.leq(z, y))
                    .fold(self.bottom, |acc, z| self.join[acc * self.size + z]);
                meet[x * self.size + y] = m;
            }
        }
        FiniteLattice::from_join_table(self.size, meet)
    }

    pub fn len(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.leq[x * self.size + y]
    }

    pub fn join(&self, x: usize, y: usize) -> usize {
        self.join[x * self.size + y]
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn mobius(&self, x: usize, y: usize) -> i64 {
        self.mobius[x * self.size + y]
    }
}

fn compute_mobius(size: usize, leq: &[bool]) -> Vec<i64> {
    // process y in a linear extension (ascending count of lower bounds)
    let mut order: Vec<usize> = (0..size).collect();
    order.sort_by_key(|&y| (0..size).filter(|&z| leq[z * size + y]).count());
    let mut mu = vec![0i64; size * size];
    for x in 0..size {
        for &y in &order {
            if !leq[x * size + y] {
                continue;
            }
            mu[x * size + y] = if x == y {
                1
            } else {
                -(0..size)
                    .filter(|&z| z != y && leq[x * size + z] && leq[z * size + y])
                    .map(|z| mu[x * size + z])
                    .sum::<i64>()
            };
        }
    }
    mu
}

pub struct MultiplicativeFamily<R: LatticeRing> {
    pub values: Vec<R::El>,
}

impl<R: LatticeRing> MultiplicativeFamily<R> {
    pub fn new(values: Vec<R::El>) -> Self {
        MultiplicativeFamily { values }
    }

    /// Check g_bottom = 1 and g_x g_y = g_{x v y}; reports the first
    /// offending pair.
    pub fn validate(&self, ring: &R, lat: &FiniteLattice) -> Result<()> {
        if self.values.len() != lat.len() {
            return Err(Error::Precondition(format!(
                "family has {} values for a lattice of size {}",
                self.values.len(),
                lat.len()
            )));
        }
        if self.values[lat.bottom()] != ring.one() {
            return Err(Error::Precondition(
                "family value at the bottom element is not 1".into(),
            ));
        }
        for x in 0..lat.len() {
            for y in 0..lat.len() {
                let lhs = ring.mul(&self.values[x], &self.values[y]);
                if lhs != self.values[lat.join(x, y)] {
                    return Err(Error::Precondition(format!(
                        "family is not multiplicative at pair ({x},{y})"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// f_x = sum_{x <= y} mu(x,y) g_y for every x. Validates the family first.
pub fn idempotent_family<R: LatticeRing>(
    ring: &R,
    lat: &FiniteLattice,
    family: &MultiplicativeFamily<R>,
) -> Result<Vec<R::El>> {
    family.validate(ring, lat)?;
    Ok(idempotent_family_unchecked(ring, lat, &family.values))
}

fn idempotent_family_unchecked<R: LatticeRing>(
    ring: &R,
    lat: &FiniteLattice,
    g: &[R::El],
) -> Vec<R::El> {
    (0..lat.len())
        .map(|x| {
            let mut f = ring.zero();
            for y in 0..lat.len() {
                if lat.leq(x, y) {
                    f = ring.add(&f, &ring.scale_int(lat.mobius(x, y), &g[y]));
                }
            }
            f
        })
        .collect()
}

/// The span of the partial orders inside the essential algebra, as a ring:
/// basis symbols are monomials S * Delta_sigma and the product of two
/// monomials is the monomial of the join (conjugating the second order
/// through the first permutation), or zero when the join escapes to the top.
pub struct OrderSpanRing<'a> {
    pub lat: &'a OrderLattice,
    pub ring: RingTag,
}

impl OrderSpanRing<'_> {
    /// (S, sigma) * (T, tau) = (S v sigma(T), sigma tau) or zero.
    pub fn monomial_product(&self, a: u64, b: u64) -> Option<u64> {
        let (pa, ia) = crate::algebra::unpack_pair(a);
        let (pb, ib) = crate::algebra::unpack_pair(b);
        let sigma = crate::permutation::Permutation::from_index(self.lat.n(), pa as usize);
        let conj = self.lat.order(ib).conjugate(&sigma);
        let ib_conj = self.lat.index_of(&conj).expect("conjugate of an order is an order");
        let j = self.lat.join(ia, ib_conj);
        if j == TOP {
            return None;
        }
        let tau = crate::permutation::Permutation::from_index(self.lat.n(), pb as usize);
        Some(pack_pair(sigma.compose(&tau).index() as u32, j))
    }
}

impl LatticeRing for OrderSpanRing<'_> {
    type El = AlgebraElement;
    fn zero(&self) -> AlgebraElement {
        AlgebraElement::zero(BasisTag::OrderMonomial { n: self.lat.n() }, self.ring)
    }
    fn one(&self) -> AlgebraElement {
        AlgebraElement::basis(
            BasisTag::OrderMonomial { n: self.lat.n() },
            self.ring,
            pack_pair(0, self.lat.diagonal_index()),
        )
    }
    fn add(&self, a: &AlgebraElement, b: &AlgebraElement) -> AlgebraElement {
        a.add(b).expect("order-span elements share tag and ring")
    }
    fn mul(&self, a: &AlgebraElement, b: &AlgebraElement) -> AlgebraElement {
        a.mul_basis(b, |x, y| self.monomial_product(x, y))
            .expect("order-span elements share tag and ring")
    }
    fn scale_int(&self, k: i64, a: &AlgebraElement) -> AlgebraElement {
        a.scale(&Scalar::from_i64(self.ring, k))
    }
    fn is_zero(&self, a: &AlgebraElement) -> bool {
        a.is_zero()
    }
}

/// f_R for every order index, as elements in the monomial basis:
/// f_R = sum_{R <= S} mu(R,S) S. The change of basis is unitriangular, so
/// R = sum_{R <= S} f_S recovers the monomials.
pub fn order_idempotents(lat: &OrderLattice, ring: RingTag) -> Result<Vec<AlgebraElement>> {
    ring.validate()?;
    let ring_ops = OrderSpanRing { lat, ring };
    let flat = FiniteLattice::from_order_lattice(lat);
    let mut g: Vec<AlgebraElement> = (0..lat.len() as u32)
        .map(|i| {
            AlgebraElement::basis(
                BasisTag::OrderMonomial { n: lat.n() },
                ring,
                pack_pair(0, i),
            )
        })
        .collect();
    g.push(ring_ops.zero()); // adjoined top carries 0
    let family = MultiplicativeFamily::<OrderSpanRing>::new(g);
    let mut f = idempotent_family(&ring_ops, &flat, &family)?;
    f.truncate(lat.len()); // drop f at the adjoined top
    Ok(f)
}
