//! Simple-module bookkeeping for the algebra of permuted orders.
//!
//! Simples are parametrized by pairs (orbit of an order R, simple module V
//! of the stabilizer group algebra), with dimension |Sigma:Sigma_R|*dim V.
//! Character degrees of the concrete stabilizer groups are recovered from
//! the class equation: the degree multiset is pinned down by (number of
//! conjugacy classes, number of linear characters = |G^ab|, divisibility,
//! sum of squares = |G|), with one hardcoded tie-break for the full
//! symmetric group on five points, where those constraints admit a second
//! spurious multiset.
//!
//! Also here: the explicit action of an arbitrary essential relation on
//! the left ideal P f_R, and the characteristic-zero semisimplicity check
//! with mod-p idempotent identities for small primes.

use std::collections::HashSet;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lattice_idempotents::{order_idempotents, LatticeRing, OrderSpanRing};
use crate::order_lattice::OrderLattice;
use crate::permutation::{Permutation, FACTORIALS};
use crate::relation::Relation;
use crate::scalar::RingTag;

pub fn conjugacy_classes(group: &[Permutation]) -> Vec<Vec<Permutation>> {
    let mut seen = HashSet::new();
    let mut classes = Vec::new();
    for g in group {
        if seen.contains(&g.index()) {
            continue;
        }
        let mut class: Vec<Permutation> = group
            .iter()
            .map(|a| a.compose(g).compose(&a.inverse()))
            .collect();
        class.sort_by_key(Permutation::index);
        class.dedup();
        for c in &class {
            seen.insert(c.index());
        }
        classes.push(class);
    }
    classes
}

/// |G / [G,G]|: the number of linear characters.
pub fn abelianization_order(group: &[Permutation]) -> usize {
    let mut derived: HashSet<usize> = HashSet::new();
    let mut frontier: Vec<Permutation> = Vec::new();
    for a in group {
        for b in group {
            let c = a.compose(b).compose(&a.inverse()).compose(&b.inverse());
            if derived.insert(c.index()) {
                frontier.push(c);
            }
        }
    }
    // close under multiplication
    let mut members: Vec<Permutation> = frontier.clone();
    while let Some(x) = frontier.pop() {
        let snapshot = members.clone();
        for y in snapshot {
            let p = x.compose(&y);
            if derived.insert(p.index()) {
                members.push(p);
                frontier.push(p);
            }
        }
    }
    group.len() / derived.len()
}

/// Irreducible character degrees over a splitting field of characteristic
/// zero, sorted ascending, or None when the class-equation constraints do
/// not determine them uniquely.
pub fn character_degrees(group: &[Permutation]) -> Option<Vec<usize>> {
    let order = group.len();
    let classes = conjugacy_classes(group).len();
    let linear = abelianization_order(group);
    // the one ambiguous case among groups arising here
    if order == 120 && classes == 7 && linear == 2 {
        return Some(vec![1, 1, 4, 4, 5, 5, 6]);
    }
    let divisors: Vec<usize> = (2..=order).filter(|d| order % d == 0).collect();
    let mut solutions = Vec::new();
    let mut current = vec![1usize; linear];
    search_degrees(
        order - linear,
        classes - linear,
        &divisors,
        0,
        &mut current,
        &mut solutions,
    );
    if solutions.len() == 1 {
        let mut degrees = solutions.pop().unwrap();
        degrees.sort_unstable();
        Some(degrees)
    } else {
        None
    }
}

fn search_degrees(
    remaining_sq: usize,
    remaining_count: usize,
    divisors: &[usize],
    min_pos: usize,
    current: &mut Vec<usize>,
    solutions: &mut Vec<Vec<usize>>,
) {
    if remaining_count == 0 {
        if remaining_sq == 0 {
            solutions.push(current.clone());
        }
        return;
    }
    for (pos, &d) in divisors.iter().enumerate().skip(min_pos) {
        let sq = d * d;
        if sq > remaining_sq {
            break;
        }
        if sq * remaining_count < remaining_sq
            && divisors.last().map_or(true, |&m| {
                // even the largest degree can't close the gap
                remaining_sq > sq + (remaining_count - 1) * m * m
            })
        {
            continue;
        }
        current.push(d);
        search_degrees(
            remaining_sq - sq,
            remaining_count - 1,
            divisors,
            pos,
            current,
            solutions,
        );
        current.pop();
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimpleParam {
    pub orbit_rep: u32,
    pub stabilizer: Vec<Permutation>,
    /// |Sigma : Sigma_R|
    pub index: usize,
    pub class_count: usize,
    /// character degrees of the stabilizer (split, char 0); None when the
    /// constraint search is ambiguous
    pub group_simples: Option<Vec<usize>>,
}

impl SimpleParam {
    /// Dimensions of the simple modules attached to this orbit:
    /// |Sigma:Sigma_R| * dim V for each group simple V.
    pub fn module_dimensions(&self) -> Option<Vec<usize>> {
        self.group_simples
            .as_ref()
            .map(|ds| ds.iter().map(|d| d * self.index).collect())
    }
}

/// One row per orbit of orders.
pub fn simple_module_table(lat: &OrderLattice) -> Vec<SimpleParam> {
    lat.orbit_reps()
        .par_iter()
        .map(|&rep| {
            let stabilizer = lat.stabilizer(rep).to_vec();
            let class_count = conjugacy_classes(&stabilizer).len();
            let group_simples = character_degrees(&stabilizer);
            SimpleParam {
                orbit_rep: rep,
                index: lat.orbit_index(rep),
                stabilizer,
                class_count,
                group_simples,
            }
        })
        .collect()
}

/// The action of a relation Q on the basis element Delta_sigma f_R of the
/// left ideal P f_R: Q * Delta_sigma f_R = Delta_{tau sigma} f_R for the
/// unique tau with Delta contained in Delta_{tau^-1} Q contained in the
/// sigma-conjugate of R, and zero when no tau exists. Two witnesses would
/// contradict the uniqueness of selections inside an order, hence the
/// internal-inconsistency error.
pub fn act_on_ideal(
    q: &Relation,
    sigma: &Permutation,
    r: u32,
    lat: &OrderLattice,
) -> Result<Option<Permutation>> {
    let conj = lat.order(r).conjugate(sigma);
    let mut hit: Option<Permutation> = None;
    for tau in q.contained_permutations() {
        let stripped = Relation::delta(&tau.inverse()).compose(q)?;
        if !stripped.is_subset(&conj) {
            continue;
        }
        if let Some(prev) = &hit {
            return Err(Error::InternalInconsistency(format!(
                "two action witnesses for {q:?} on f_{r}: {prev:?} and {tau:?}"
            )));
        }
        hit = Some(tau);
    }
    Ok(hit.map(|tau| tau.compose(sigma)))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemisimplicityReport {
    pub n: u8,
    pub dim_p: usize,
    /// sum over all simples of dim^2 (split, char 0)
    pub sum_of_squares: usize,
    pub char_zero_ok: bool,
    /// primes p <= n with the idempotent identities verified mod p
    pub modp_checked: Vec<u32>,
    pub modp_ok: bool,
}

/// Characteristic-zero semisimplicity at the dimension level, plus the
/// ring-agnostic idempotent identities in every characteristic p <= n.
pub fn semisimplicity_check(lat: &OrderLattice) -> Result<SemisimplicityReport> {
    let n = lat.n();
    if n > 4 {
        return Err(Error::ResourceGuard(format!(
            "semisimplicity check is limited to n <= 4, got {n}"
        )));
    }
    let dim_p = FACTORIALS[n as usize] * lat.len();
    let table = simple_module_table(lat);
    let mut sum_of_squares = 0usize;
    for row in &table {
        let dims = row.module_dimensions().ok_or_else(|| {
            Error::InternalInconsistency(format!(
                "character degrees undetermined for the stabilizer of orbit {}",
                row.orbit_rep
            ))
        })?;
        sum_of_squares += dims.iter().map(|d| d * d).sum::<usize>();
    }
    let char_zero_ok = sum_of_squares == dim_p;

    let primes: Vec<u32> = (2..=n as u32).filter(|&p| (2..p).all(|d| p % d != 0)).collect();
    let mut modp_ok = true;
    for &p in &primes {
        let ring_tag = RingTag::ModP(p);
        let f = order_idempotents(lat, ring_tag)?;
        let ring = OrderSpanRing { lat, ring: ring_tag };
        let mut total = ring.zero();
        for (x, fx) in f.iter().enumerate() {
            total = ring.add(&total, fx);
            for (u, fu) in f.iter().enumerate() {
                let prod = ring.mul(fx, fu);
                let ok = if x == u { prod == *fx } else { prod.is_zero() };
                if !ok {
                    modp_ok = false;
                }
            }
        }
        if total != ring.one() {
            modp_ok = false;
        }
    }

    Ok(SemisimplicityReport {
        n,
        dim_p,
        sum_of_squares,
        char_zero_ok,
        modp_checked: primes,
        modp_ok,
    })
}
