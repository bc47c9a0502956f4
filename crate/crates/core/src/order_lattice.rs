//! Enumeration of all partial orders on X and their containment lattice.
//!
//! Orders are indexed ascending by `mask64`, so indices are deterministic
//! across runs. The lattice join adjoins a top sentinel: R v S is the
//! transitive closure of R u S when that closure is an order, and TOP
//! otherwise. Meet is intersection and is always an order.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::permutation::{all_permutations, Permutation, FACTORIALS};
use crate::relation::{all_relations, Relation};

/// Sentinel index for the adjoined top element; never a real order.
pub const TOP: u32 = u32::MAX;

pub struct OrderLattice {
    n: u8,
    orders: Vec<Relation>,
    index_of: HashMap<u64, u32>,
    /// up_sets[i] = sorted indices j with orders[i] subset of orders[j], i included.
    up_sets: Vec<Vec<u32>>,
    /// Full join table (TOP sentinel), populated for n <= 4; larger n join on demand.
    join_table: Vec<u32>,
    /// mu(i, j) for containment pairs i subset j.
    mobius: HashMap<(u32, u32), i64>,
    stabilizers: Vec<Vec<Permutation>>,
    /// Orbit representatives (lexicographically least mask per orbit), with members.
    orbit_reps: Vec<u32>,
    orbits: Vec<Vec<u32>>,
}

/// All orders on {1,..,n}, ascending by mask. Exhaustive scan at n <= 4,
/// element-by-element extension above (down-set/up-set pairs), which reaches
/// n = 6 quickly.
pub fn enumerate_orders(n: u8) -> Vec<Relation> {
    let mut orders = if n <= 4 {
        all_relations(n).filter(|r| r.classify().order).collect::<Vec<_>>()
    } else {
        extend_orders(n)
    };
    orders.sort_by_key(Relation::mask64);
    orders
}

fn extend_orders(n: u8) -> Vec<Relation> {
    let mut current = vec![Relation::diagonal(1)];
    for m in 1..n {
        // adjoin element m to every order on {0,..,m-1}
        let next: Vec<Relation> = current
            .par_iter()
            .flat_map_iter(|r| {
                let m_usize = m as usize;
                let base = *r;
                (0u16..(1 << m_usize)).flat_map(move |d| {
                    (0u16..(1 << m_usize)).filter_map(move |u| {
                        let (d, u) = (d as u8, u as u8);
                        if d & u != 0 {
                            return None;
                        }
                        // d must be down-closed, u up-closed, d x u in base
                        for x in 0..m {
                            if (d >> x) & 1 == 1 && base.column(x) & !d & !(1 << x) != 0 {
                                return None;
                            }
                            if (u >> x) & 1 == 1 && base.row(x) & !u & !(1 << x) != 0 {
                                return None;
                            }
                            if (d >> x) & 1 == 1 && u & !base.row(x) != 0 {
                                return None;
                            }
                        }
                        let mut ext = Relation::empty(m + 1);
                        for x in 0..m {
                            for y in 0..m {
                                if base.contains(x, y) {
                                    ext = ext.with_pair(x, y);
                                }
                            }
                            if (d >> x) & 1 == 1 {
                                ext = ext.with_pair(x, m);
                            }
                            if (u >> x) & 1 == 1 {
                                ext = ext.with_pair(m, x);
                            }
                        }
                        Some(ext.with_pair(m, m))
                    })
                })
            })
            .collect();
        current = next;
    }
    current
}

pub fn build_order_lattice(n: u8) -> Result<OrderLattice> {
    if n == 0 || n > 6 {
        return Err(Error::ResourceGuard(format!(
            "order lattice is limited to 1 <= n <= 6, got {n}"
        )));
    }
    let orders = enumerate_orders(n);
    let count = orders.len();
    let index_of: HashMap<u64, u32> =
        orders.iter().enumerate().map(|(i, r)| (r.mask64(), i as u32)).collect();

    let up_sets: Vec<Vec<u32>> = orders
        .par_iter()
        .map(|r| {
            (0..count as u32).filter(|&j| r.is_subset(&orders[j as usize])).collect()
        })
        .collect();

    let join_table = if n <= 4 {
        (0..count)
            .into_par_iter()
            .flat_map_iter(|i| {
                let orders = &orders;
                let index_of = &index_of;
                (0..count).map(move |j| {
                    join_of(&orders[i], &orders[j], index_of)
                })
            })
            .collect()
    } else {
        Vec::new()
    };

    // mu(i, .) over the up-set of i, in increasing pair count (a linear
    // extension of containment)
    let mobius_rows: Vec<Vec<((u32, u32), i64)>> = (0..count as u32)
        .into_par_iter()
        .map(|i| {
            let mut ups = up_sets[i as usize].clone();
            ups.sort_by_key(|&j| orders[j as usize].pair_count());
            let mut mu: HashMap<u32, i64> = HashMap::new();
            let mut out = Vec::with_capacity(ups.len());
            for &j in &ups {
                let val = if j == i {
                    1
                } else {
                    let rj = &orders[j as usize];
                    -ups.iter()
                        .filter(|&&y| y != j && orders[y as usize].is_subset(rj))
                        .map(|y| mu.get(y).copied().unwrap_or(0))
                        .sum::<i64>()
                };
                mu.insert(j, val);
                out.push(((i, j), val));
            }
            out
        })
        .collect();
    let mobius: HashMap<(u32, u32), i64> = mobius_rows.into_iter().flatten().collect();

    let perms = all_permutations(n);
    let stabilizers: Vec<Vec<Permutation>> = orders
        .par_iter()
        .map(|r| perms.iter().filter(|s| r.conjugate(s) == *r).copied().collect())
        .collect();

    let mut orbit_reps = Vec::new();
    let mut orbits = Vec::new();
    let mut seen = vec![false; count];
    for i in 0..count {
        if seen[i] {
            continue;
        }
        let mut members: Vec<u32> = perms
            .iter()
            .map(|s| index_of[&orders[i].conjugate(s).mask64()])
            .collect();
        members.sort_unstable();
        members.dedup();
        for &m in &members {
            seen[m as usize] = true;
        }
        orbit_reps.push(members[0]);
        orbits.push(members);
    }

    Ok(OrderLattice {
        n,
        orders,
        index_of,
        up_sets,
        join_table,
        mobius,
        stabilizers,
        orbit_reps,
        orbits,
    })
}

fn join_of(a: &Relation, b: &Relation, index_of: &HashMap<u64, u32>) -> u32 {
    let closure = a.union(b).transitive_closure();
    match index_of.get(&closure.mask64()) {
        Some(&k) => k,
        None => TOP,
    }
}

impl OrderLattice {
    pub fn n(&self) -> u8 {
        self.n
    }

    pub fn len(&self) -> usize {
        self.orders.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn order(&self, i: u32) -> &Relation {
        &self.orders[i as usize]
    }

    pub fn orders(&self) -> &[Relation] {
        &self.orders
    }

    pub fn index_of(&self, r: &Relation) -> Option<u32> {
        self.index_of.get(&r.mask64()).copied()
    }

    pub fn diagonal_index(&self) -> u32 {
        self.index_of(&Relation::diagonal(self.n)).expect("diagonal is an order")
    }

    /// Indices j with orders[i] subset of orders[j], ascending; i included.
    pub fn up_set(&self, i: u32) -> &[u32] {
        &self.up_sets[i as usize]
    }

    pub fn leq(&self, i: u32, j: u32) -> bool {
        self.orders[i as usize].is_subset(&self.orders[j as usize])
    }

    /// Join in O u {TOP}.
    pub fn join(&self, i: u32, j: u32) -> u32 {
        if !self.join_table.is_empty() {
            return self.join_table[i as usize * self.orders.len() + j as usize];
        }
        join_of(&self.orders[i as usize], &self.orders[j as usize], &self.index_of)
    }

    /// Meet is plain intersection, always an order.
    pub fn meet(&self, i: u32, j: u32) -> u32 {
        let m = self.orders[i as usize].intersection(&self.orders[j as usize]);
        self.index_of[&m.mask64()]
    }

    pub fn mobius_value(&self, i: u32, j: u32) -> Result<i64> {
        if !self.leq(i, j) {
            return Err(Error::Domain(format!(
                "mobius_value requires containment, but order {i} is not contained in {j}"
            )));
        }
        Ok(self.mobius[&(i, j)])
    }

    pub fn stabilizer(&self, i: u32) -> &[Permutation] {
        &self.stabilizers[i as usize]
    }

    pub fn orbit_reps(&self) -> &[u32] {
        &self.orbit_reps
    }

    pub fn orbits(&self) -> &[Vec<u32>] {
        &self.orbits
    }

    /// Orbit representative position for an order index.
    pub fn orbit_rep_of(&self, i: u32) -> u32 {
        for (rep_pos, members) in self.orbits.iter().enumerate() {
            if members.binary_search(&i).is_ok() {
                return self.orbit_reps[rep_pos];
            }
        }
        unreachable!("every order lies in an orbit")
    }

    /// |Sigma : Sigma_R| for an order index.
    pub fn orbit_index(&self, i: u32) -> usize {
        FACTORIALS[self.n as usize] / self.stabilizers[i as usize].len()
    }

    /// Fixed left coset representatives of Sigma_R in Sigma: the
    /// lexicographically least permutation (by index) in each left coset.
    pub fn coset_reps(&self, i: u32) -> Vec<Permutation> {
        let stab = &self.stabilizers[i as usize];
        let mut reps = Vec::new();
        let mut covered = vec![false; FACTORIALS[self.n as usize]];
        for sigma in all_permutations(self.n) {
            if covered[sigma.index()] {
                continue;
            }
            reps.push(sigma);
            for h in stab {
                covered[sigma.compose(h).index()] = true;
            }
        }
        reps
    }
}
