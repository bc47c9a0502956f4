//! Deciding essentiality exactly.
//!
//! A relation on n points is inessential iff it is a union of at most n-1
//! blocks U x V, so essentiality is decided by an exact minimum biclique
//! cover. Every block of an optimal cover can be grown to a maximal block,
//! so the search branches over the maximal blocks only. Any relation is the
//! union of its nonempty rows, hence the cover number is always <= n and
//! "essential" means the cover number is exactly n.

use std::io::{Read, Write};
use std::path::Path;
use std::sync::OnceLock;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::permutation::Permutation;
use crate::relation::Relation;

/// A block U x V, both sides as bitmasks over {0,..,n-1}.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Block {
    pub u: u8,
    pub v: u8,
}

impl Block {
    pub fn pairs(&self, n: u8) -> Vec<(u8, u8)> {
        let mut out = Vec::new();
        for x in 0..n {
            if (self.u >> x) & 1 == 1 {
                for y in 0..n {
                    if (self.v >> y) & 1 == 1 {
                        out.push((x, y));
                    }
                }
            }
        }
        out
    }

    fn as_relation(&self, n: u8) -> Relation {
        let mut r = Relation::empty(n);
        for x in 0..n {
            if (self.u >> x) & 1 == 1 {
                for y in 0..n {
                    if (self.v >> y) & 1 == 1 {
                        r = r.with_pair(x, y);
                    }
                }
            }
        }
        r
    }
}

/// A verified cover of `target` by blocks.
#[derive(Clone, Debug)]
pub struct BlockCover {
    pub target: Relation,
    pub blocks: Vec<Block>,
}

impl BlockCover {
    /// Union of the blocks must equal the target exactly.
    pub fn is_valid(&self) -> bool {
        let n = self.target.n();
        let mut union = Relation::empty(n);
        for b in &self.blocks {
            if b.u == 0 || b.v == 0 {
                return false;
            }
            let br = b.as_relation(n);
            if !br.is_subset(&self.target) {
                return false;
            }
            union = union.union(&br);
        }
        union == self.target
    }
}

#[derive(Clone, Debug)]
pub struct EssVerdict {
    pub essential: bool,
    /// A contained permutation; present iff essential.
    pub witness_permutation: Option<Permutation>,
    /// A cover by <= n-1 blocks; present iff inessential and target nonempty.
    pub cover: Option<BlockCover>,
    /// Exact minimum number of blocks covering the relation (0 for empty).
    pub cover_number: u32,
}

/// Maximal blocks (maximal bicliques) of R viewed as a bipartite graph.
/// A maximal block is determined by its column set V: U = {x : V subset
/// row_x}, then V is re-grown to the intersection of those rows.
pub fn maximal_blocks(r: &Relation) -> Vec<Block> {
    let n = r.n();
    let full = ((1u16 << n) - 1) as u8;
    let mut out: Vec<Block> = Vec::new();
    for v in 1..=full {
        let mut u = 0u8;
        for x in 0..n {
            if r.row(x) & v == v {
                u |= 1 << x;
            }
        }
        if u == 0 {
            continue;
        }
        let mut vmax = full;
        for x in 0..n {
            if (u >> x) & 1 == 1 {
                vmax &= r.row(x);
            }
        }
        let b = Block { u, v: vmax };
        if !out.contains(&b) {
            out.push(b);
        }
    }
    out
}

/// Exact set cover with at most `budget` blocks, branching on the pair
/// covered by the fewest maximal blocks.
pub fn min_block_cover(r: &Relation, budget: u32) -> Option<BlockCover> {
    if r.is_empty() {
        return Some(BlockCover { target: *r, blocks: Vec::new() });
    }
    let n = r.n();
    let blocks = maximal_blocks(r);
    let pairs = r.pairs();
    let mut chosen = Vec::new();
    if search(&pairs, &blocks, n, budget, 0u64, &mut chosen) {
        Some(BlockCover { target: *r, blocks: chosen })
    } else {
        None
    }
}

fn pair_bit(n: u8, x: u8, y: u8) -> u64 {
    1u64 << (x as u32 * n as u32 + y as u32)
}

fn block_mask(n: u8, b: &Block) -> u64 {
    let mut m = 0u64;
    for x in 0..n {
        if (b.u >> x) & 1 == 1 {
            m |= (b.v as u64) << (x as u32 * n as u32);
        }
    }
    m
}

fn search(
    pairs: &[(u8, u8)],
    blocks: &[Block],
    n: u8,
    budget: u32,
    covered: u64,
    chosen: &mut Vec<Block>,
) -> bool {
    // least-covered uncovered pair
    let mut best: Option<(usize, Vec<usize>)> = None;
    for (i, &(x, y)) in pairs.iter().enumerate() {
        if covered & pair_bit(n, x, y) != 0 {
            continue;
        }
        let cands: Vec<usize> = blocks
            .iter()
            .enumerate()
            .filter(|(_, b)| (b.u >> x) & 1 == 1 && (b.v >> y) & 1 == 1)
            .map(|(j, _)| j)
            .collect();
        match &best {
            Some((_, c)) if c.len() <= cands.len() => {}
            _ => best = Some((i, cands)),
        }
    }
    let Some((_, cands)) = best else {
        return true; // everything covered
    };
    if budget == 0 {
        return false;
    }
    for j in cands {
        chosen.push(blocks[j]);
        if search(pairs, blocks, n, budget - 1, covered | block_mask(n, &blocks[j]), chosen) {
            return true;
        }
        chosen.pop();
    }
    false
}

/// Exact minimum cover size; always <= n since nonempty rows cover.
pub fn cover_number(r: &Relation) -> u32 {
    let n = r.n();
    if n <= 4 {
        return ess_table(n)[r.mask64() as usize] as u32;
    }
    solve_cover_number(r)
}

fn solve_cover_number(r: &Relation) -> u32 {
    for budget in 0..=r.n() as u32 {
        if min_block_cover(r, budget).is_some() {
            return budget;
        }
    }
    unreachable!("a relation is covered by its nonempty rows")
}

/// Memoized cover-number table over all 2^(n^2) relations, n <= 4.
/// Built once, fully materialized, then read-only.
pub fn ess_table(n: u8) -> &'static [u8] {
    static TABLES: [OnceLock<Vec<u8>>; 5] =
        [OnceLock::new(), OnceLock::new(), OnceLock::new(), OnceLock::new(), OnceLock::new()];
    assert!(n >= 1 && n <= 4, "memo table only exists for n <= 4");
    TABLES[n as usize].get_or_init(|| {
        let total = 1usize << (n as u32 * n as u32);
        (0..total as u64)
            .into_par_iter()
            .map(|m| solve_cover_number(&Relation::from_mask64(n, m)) as u8)
            .collect()
    })
}

pub fn is_essential(r: &Relation) -> EssVerdict {
    let n = r.n();
    let cn = cover_number(r);
    let essential = cn >= n as u32;
    let witness_permutation = if essential {
        let perms = r.contained_permutations();
        // every essential relation contains a permutation
        Some(*perms.first().expect("essential relation must contain a permutation"))
    } else {
        None
    };
    let cover = if !essential && !r.is_empty() { min_block_cover(r, cn) } else { None };
    EssVerdict { essential, witness_permutation, cover, cover_number: cn }
}

/// Fast pre-filters from the structural criteria. Returns a verdict only
/// when one fires; the verdict always agrees with the exact solver.
pub fn quick_filter(r: &Relation) -> Option<EssVerdict> {
    let n = r.n();
    // equal or empty rows
    for a in 0..n {
        let cover = if r.row(a) == 0 {
            Some(rows_cover_without(r, a, a))
        } else {
            (a + 1..n).find(|&b| r.row(a) == r.row(b)).map(|b| rows_cover_without(r, a, b))
        };
        if let Some(cover) = cover {
            return Some(inessential_verdict(r, cover));
        }
    }
    // equal or empty columns: same construction on the transpose
    let t = r.transpose();
    for a in 0..n {
        let hit = if t.row(a) == 0 {
            Some(a)
        } else {
            (a + 1..n).find(|&b| t.row(a) == t.row(b))
        };
        if let Some(b) = hit {
            let tc = rows_cover_without(&t, a, b);
            let blocks = tc.blocks.iter().map(|bl| Block { u: bl.v, v: bl.u }).collect();
            return Some(inessential_verdict(r, BlockCover { target: *r, blocks }));
        }
    }
    let class = r.classify();
    // non-equality equivalence relations and non-order preorders have two
    // equal rows, so they were caught above; keep the explicit checks as a
    // sanity path for clarity of the criteria list.
    debug_assert!(!(class.equivalence && *r != Relation::diagonal(n)));
    debug_assert!(!(class.preorder && !class.order));
    // reflexive with an order closure => essential
    if class.reflexive && r.transitive_closure().classify().order {
        return Some(EssVerdict {
            essential: true,
            witness_permutation: Some(Permutation::identity(n)),
            cover: None,
            cover_number: n as u32,
        });
    }
    // Hall violation => inessential, with the explicit block cover
    if let Some(a_set) = hall_violation(r) {
        return Some(inessential_verdict(r, hall_cover(r, a_set)));
    }
    None
}

fn inessential_verdict(r: &Relation, cover: BlockCover) -> EssVerdict {
    debug_assert!(cover.is_valid());
    debug_assert!(cover.blocks.len() < r.n() as usize);
    EssVerdict {
        essential: false,
        witness_permutation: None,
        cover: if r.is_empty() { None } else { Some(cover) },
        cover_number: cover_number(r),
    }
}

/// Cover of R given row a == row b (or row a empty, with a == b):
/// merge a and b into one block, keep every other row as its own block.
fn rows_cover_without(r: &Relation, a: u8, b: u8) -> BlockCover {
    let n = r.n();
    let mut blocks = Vec::new();
    if r.row(a) != 0 && a != b {
        blocks.push(Block { u: (1 << a) | (1 << b), v: r.row(a) });
    }
    for c in 0..n {
        if c == a || c == b {
            continue;
        }
        if r.row(c) != 0 {
            blocks.push(Block { u: 1 << c, v: r.row(c) });
        }
    }
    BlockCover { target: *r, blocks }
}

/// A subset A (as a column mask) violating Hall's condition
/// |union of columns indexed by A| < |A|, if one exists.
fn hall_violation(r: &Relation) -> Option<u8> {
    let n = r.n();
    for a in 1u16..(1 << n) {
        let a = a as u8;
        let mut reach = 0u8;
        for y in 0..n {
            if (a >> y) & 1 == 1 {
                reach |= r.column(y);
            }
        }
        if (reach.count_ones()) < a.count_ones() {
            return Some(a);
        }
    }
    None
}

/// The block decomposition from the Hall argument: columns outside A plus
/// rows reachable from A, |X - A| + |R_A| < n blocks.
fn hall_cover(r: &Relation, a_set: u8) -> BlockCover {
    let n = r.n();
    let mut reach = 0u8;
    let mut blocks = Vec::new();
    for y in 0..n {
        if (a_set >> y) & 1 == 1 {
            reach |= r.column(y);
        } else if r.column(y) != 0 {
            blocks.push(Block { u: r.column(y), v: 1 << y });
        }
    }
    for x in 0..n {
        if (reach >> x) & 1 == 1 && r.row(x) != 0 {
            blocks.push(Block { u: 1 << x, v: r.row(x) });
        }
    }
    BlockCover { target: *r, blocks }
}

/// All essential relations on {1,..,n}, ascending by mask.
/// n <= 4 is the mandatory path; n = 5 requires `allow_n5`.
pub fn enumerate_essential(n: u8, allow_n5: bool) -> Result<Vec<Relation>> {
    if n >= 6 {
        return Err(Error::ResourceGuard(format!(
            "essential enumeration is limited to n <= 5, got {n}"
        )));
    }
    if n == 5 && !allow_n5 {
        return Err(Error::ResourceGuard(
            "n = 5 enumeration (2^25 relations) needs the explicit opt-in flag".into(),
        ));
    }
    if n <= 4 {
        let table = ess_table(n);
        return Ok(table
            .iter()
            .enumerate()
            .filter(|&(_, &cn)| cn as u32 >= n as u32)
            .map(|(m, _)| Relation::from_mask64(n, m as u64))
            .collect());
    }
    // n = 5: partition the mask range, filter cheaply, solve the rest
    let total: u64 = 1u64 << 25;
    let masks: Vec<u64> = (0..total)
        .into_par_iter()
        .filter(|&m| {
            let r = Relation::from_mask64(5, m);
            (0..5).all(|x| r.row(x) != 0)
                && hall_violation(&r).is_none()
                && min_block_cover(&r, 4).is_none()
        })
        .collect();
    Ok(masks.into_iter().map(|m| Relation::from_mask64(5, m)).collect())
}

/// Proposition: a total order is maximal among essential relations.
/// Checked by adding each absent pair and re-testing.
pub fn maximal_essential_check(r: &Relation) -> Result<bool> {
    if !r.classify().total_order {
        return Err(Error::Domain("maximal_essential_check requires a total order".into()));
    }
    let n = r.n();
    for x in 0..n {
        for y in 0..n {
            if !r.contains(x, y) && is_essential(&r.with_pair(x, y)).essential {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

const CACHE_FORMAT_VERSION: u32 = 1;

/// Cache file: format_version (u32 LE), n (u32 LE), count (u64 LE), then
/// `count` ascending 64-bit masks.
pub fn write_cache(path: &Path, n: u8, masks: &[u64]) -> Result<()> {
    let mut f = std::fs::File::create(path)?;
    f.write_all(&CACHE_FORMAT_VERSION.to_le_bytes())?;
    f.write_all(&(n as u32).to_le_bytes())?;
    f.write_all(&(masks.len() as u64).to_le_bytes())?;
    for &m in masks {
        f.write_all(&m.to_le_bytes())?;
    }
    Ok(())
}

pub fn read_cache(path: &Path) -> Result<(u8, Vec<u64>)> {
    let mut f = std::fs::File::open(path)?;
    let mut head = [0u8; 16];
    f.read_exact(&mut head)?;
    let version = u32::from_le_bytes(head[0..4].try_into().unwrap());
    if version != CACHE_FORMAT_VERSION {
        return Err(Error::Domain(format!("unsupported cache format version {version}")));
    }
    let n = u32::from_le_bytes(head[4..8].try_into().unwrap());
    let count = u64::from_le_bytes(head[8..16].try_into().unwrap());
    let mut masks = Vec::with_capacity(count as usize);
    let mut buf = [0u8; 8];
    for _ in 0..count {
        f.read_exact(&mut buf)?;
        masks.push(u64::from_le_bytes(buf));
    }
    Ok((n as u8, masks))
}

/// Antidiagonal example: (X x X) - Delta.
pub fn antidiagonal_complement(n: u8) -> Relation {
    let mut r = Relation::full(n);
    for x in 0..n {
        let m = r.mask64() & !(1u64 << (x as u32 * n as u32 + x as u32));
        r = Relation::from_mask64(n, m);
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relation::all_relations;

    /// Independent brute-force oracle: minimum cover using ALL blocks
    /// contained in R, not just maximal ones. Usable at n <= 3.
    fn oracle_cover_number(r: &Relation) -> u32 {
        if r.is_empty() {
            return 0;
        }
        let n = r.n();
        let full = ((1u16 << n) - 1) as u8;
        let mut blocks = Vec::new();
        for u in 1..=full {
            for v in 1..=full {
                let b = Block { u, v };
                if b.as_relation(n).is_subset(r) {
                    blocks.push(b);
                }
            }
        }
        for k in 1..=n as usize {
            if combos_cover(r, &blocks, k, 0, &mut Vec::new()) {
                return k as u32;
            }
        }
        unreachable!()
    }

    fn combos_cover(r: &Relation, blocks: &[Block], k: usize, from: usize, cur: &mut Vec<Block>) -> bool {
        if cur.len() == k {
            let mut union = Relation::empty(r.n());
            for b in cur.iter() {
                union = union.union(&b.as_relation(r.n()));
            }
            return union == *r;
        }
        for j in from..blocks.len() {
            cur.push(blocks[j]);
            if combos_cover(r, blocks, k, j + 1, cur) {
                return true;
            }
            cur.pop();
        }
        false
    }

    #[test]
    fn solver_matches_oracle_exhaustively_n2() {
        for r in all_relations(2) {
            assert_eq!(cover_number(&r), oracle_cover_number(&r), "{r:?}");
        }
    }

    #[test]
    fn solver_matches_oracle_sampled_n3() {
        for r in all_relations(3).step_by(7) {
            assert_eq!(cover_number(&r), oracle_cover_number(&r), "{r:?}");
        }
    }

    #[test]
    fn min_cover_examples() {
        let full = Relation::full(3);
        let c = min_block_cover(&full, 1).unwrap();
        assert_eq!(c.blocks.len(), 1);
        assert!(c.is_valid());

        let d2 = Relation::diagonal(2);
        assert!(min_block_cover(&d2, 1).is_none());
        let c = min_block_cover(&d2, 2).unwrap();
        assert_eq!(c.blocks.len(), 2);
        assert!(c.is_valid());
    }

    #[test]
    fn antidiagonal_example() {
        for n in 2..=4 {
            let v = is_essential(&antidiagonal_complement(n));
            assert!(v.essential, "n={n}");
            assert!(v.witness_permutation.is_some());
        }
        let v = is_essential(&antidiagonal_complement(5));
        assert!(!v.essential);
        let cover = v.cover.unwrap();
        assert!(cover.blocks.len() <= 4);
        assert!(cover.is_valid());
    }

    #[test]
    fn three_cycle_with_diagonal_is_essential_with_cover_number_3() {
        let r = Relation::diagonal(3)
            .union(&Relation::from_pairs(3, &[(0, 1), (1, 2), (2, 0)]));
        let v = is_essential(&r);
        assert!(v.essential);
        assert_eq!(v.cover_number, 3);
        assert_eq!(oracle_cover_number(&r), 3);
    }

    #[test]
    fn quick_filter_examples() {
        // two equal rows on n = 3
        let r = Relation::from_pairs(3, &[(0, 1), (0, 2), (1, 1), (1, 2), (2, 0)]);
        let v = quick_filter(&r).unwrap();
        assert!(!v.essential);
        assert!(v.cover.as_ref().unwrap().is_valid());
        assert!(v.cover.unwrap().blocks.len() <= 2);

        // orders are essential
        for n in 1..=4 {
            let v = quick_filter(&Relation::usual_total_order(n)).unwrap();
            assert!(v.essential);
        }

        // a non-equality equivalence
        let e = Relation::diagonal(3).union(&Relation::from_pairs(3, &[(0, 1), (1, 0)]));
        assert!(!quick_filter(&e).unwrap().essential);
    }

    #[test]
    fn quick_filter_agrees_with_solver_exhaustively_n3() {
        for r in all_relations(3) {
            if let Some(v) = quick_filter(&r) {
                assert_eq!(v.essential, is_essential(&r).essential, "{r:?}");
                assert_eq!(v.cover_number, cover_number(&r), "{r:?}");
            }
        }
    }

    #[test]
    fn enumerate_counts() {
        assert_eq!(enumerate_essential(1, false).unwrap().len(), 1);
        let e2 = enumerate_essential(2, false).unwrap();
        assert_eq!(e2.len(), 6);
        assert!(e2.contains(&Relation::diagonal(2)));
        assert!(e2.contains(&antidiagonal_complement(2)));
        // frozen regression constant, first computed by this enumeration
        // (divisible by 6: the symmetric group acts freely)
        assert_eq!(enumerate_essential(3, false).unwrap().len(), 156);
        assert!(enumerate_essential(6, true).is_err());
        assert!(enumerate_essential(5, false).is_err());
    }

    #[test]
    fn free_action_and_transpose_closure() {
        use crate::permutation::all_permutations;
        let ess = enumerate_essential(3, false).unwrap();
        for r in &ess {
            assert!(is_essential(&r.transpose()).essential);
            for sigma in all_permutations(3) {
                let s = Relation::delta(&sigma).compose(r).unwrap();
                assert!(is_essential(&s).essential);
                if !sigma.is_identity() {
                    assert_ne!(s, *r);
                }
            }
        }
    }

    #[test]
    fn maximal_essential_total_orders() {
        for n in 2..=4 {
            assert!(maximal_essential_check(&Relation::usual_total_order(n)).unwrap());
        }
        assert!(maximal_essential_check(&Relation::diagonal(3)).is_err());
    }

    #[test]
    fn cache_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("ess_3.bin");
        let masks: Vec<u64> =
            enumerate_essential(3, false).unwrap().iter().map(Relation::mask64).collect();
        write_cache(&path, 3, &masks).unwrap();
        let (n, back) = read_cache(&path).unwrap();
        assert_eq!(n, 3);
        assert_eq!(back, masks);
    }
}
