//! Binary relations on X = {1,..,n} as row bitmasks, n <= 8.
//!
//! A whole relation fits in 64 bits (`mask64`, bit x*n+y set iff (x,y) in R,
//! 0-based), which makes exhaustive enumeration over all 2^(n^2) relations
//! feasible at small n and composition a handful of word ORs.
//!
//! Elements are 1-based in text formats and debug output, 0-based in the API.

use crate::error::{Error, Result};
use crate::permutation::{Permutation, MAX_N};

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Relation {
    n: u8,
    rows: [u8; MAX_N as usize],
}

/// Classification flags computed by `Relation::classify`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct RelationClass {
    pub reflexive: bool,
    pub transitive: bool,
    pub antisymmetric: bool,
    pub symmetric: bool,
    pub preorder: bool,
    pub order: bool,
    pub equivalence: bool,
    pub total_order: bool,
}

impl Relation {
    pub fn empty(n: u8) -> Self {
        assert!(n >= 1 && n <= MAX_N, "n must be in 1..=8");
        Relation { n, rows: [0; MAX_N as usize] }
    }

    pub fn full(n: u8) -> Self {
        let mut r = Self::empty(n);
        let row = ((1u16 << n) - 1) as u8;
        for x in 0..n as usize {
            r.rows[x] = row;
        }
        r
    }

    /// The diagonal (equality relation).
    pub fn diagonal(n: u8) -> Self {
        let mut r = Self::empty(n);
        for x in 0..n {
            r.rows[x as usize] = 1 << x;
        }
        r
    }

    /// Delta_sigma = {(sigma(x), x)}, so that delta(s).compose(delta(t)) = delta(s*t).
    pub fn delta(sigma: &Permutation) -> Self {
        let mut r = Self::empty(sigma.n());
        for x in 0..sigma.n() {
            r.rows[sigma.apply(x) as usize] |= 1 << x;
        }
        r
    }

    pub fn from_pairs(n: u8, pairs: &[(u8, u8)]) -> Self {
        let mut r = Self::empty(n);
        for &(x, y) in pairs {
            assert!(x < n && y < n);
            r.rows[x as usize] |= 1 << y;
        }
        r
    }

    /// The usual total order x <= y on {0,..,n-1}.
    pub fn usual_total_order(n: u8) -> Self {
        let mut r = Self::empty(n);
        for x in 0..n as usize {
            let row = ((1u16 << n) - 1) as u8;
            r.rows[x] = row & !(((1u16 << x) - 1) as u8);
        }
        r
    }

    pub fn n(&self) -> u8 {
        self.n
    }

    pub fn row(&self, x: u8) -> u8 {
        self.rows[x as usize]
    }

    /// Column y as a bitmask of x with (x,y) in R.
    pub fn column(&self, y: u8) -> u8 {
        let mut c = 0u8;
        for x in 0..self.n {
            c |= ((self.rows[x as usize] >> y) & 1) << x;
        }
        c
    }

    pub fn contains(&self, x: u8, y: u8) -> bool {
        (self.rows[x as usize] >> y) & 1 == 1
    }

    pub fn with_pair(&self, x: u8, y: u8) -> Relation {
        let mut r = *self;
        r.rows[x as usize] |= 1 << y;
        r
    }

    pub fn pair_count(&self) -> u32 {
        self.rows.iter().map(|r| r.count_ones()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.iter().all(|&r| r == 0)
    }

    pub fn is_subset(&self, other: &Relation) -> bool {
        debug_assert_eq!(self.n, other.n);
        self.rows.iter().zip(&other.rows).all(|(a, b)| a & !b == 0)
    }

    pub fn union(&self, other: &Relation) -> Relation {
        debug_assert_eq!(self.n, other.n);
        let mut r = *self;
        for x in 0..self.n as usize {
            r.rows[x] |= other.rows[x];
        }
        r
    }

    pub fn intersection(&self, other: &Relation) -> Relation {
        debug_assert_eq!(self.n, other.n);
        let mut r = *self;
        for x in 0..self.n as usize {
            r.rows[x] &= other.rows[x];
        }
        r
    }

    /// Canonical 64-bit encoding: bit x*n+y set iff (x,y) in R.
    pub fn mask64(&self) -> u64 {
        let n = self.n as u64;
        self.rows[..self.n as usize]
            .iter()
            .enumerate()
            .fold(0u64, |m, (x, &row)| m | ((row as u64) << (x as u64 * n)))
    }

    pub fn from_mask64(n: u8, mask: u64) -> Self {
        let mut r = Self::empty(n);
        for x in 0..n as usize {
            r.rows[x] = ((mask >> (x * n as usize)) & ((1u64 << n) - 1)) as u8;
        }
        r
    }

    /// Boolean matrix product: (x,z) in RS iff exists y with (x,y) in R, (y,z) in S.
    pub fn compose(&self, other: &Relation) -> Result<Relation> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(self.n, other.n));
        }
        let mut r = Relation::empty(self.n);
        for x in 0..self.n as usize {
            let mut row = 0u8;
            let mut mids = self.rows[x];
            while mids != 0 {
                let y = mids.trailing_zeros() as usize;
                mids &= mids - 1;
                row |= other.rows[y];
            }
            r.rows[x] = row;
        }
        Ok(r)
    }

    pub fn transpose(&self) -> Relation {
        let mut r = Relation::empty(self.n);
        for x in 0..self.n {
            for y in 0..self.n {
                if self.contains(x, y) {
                    r.rows[y as usize] |= 1 << x;
                }
            }
        }
        r
    }

    /// Smallest transitive relation containing R (Warshall over bitmask rows).
    /// For reflexive R this is the stabilized power of R.
    pub fn transitive_closure(&self) -> Relation {
        let mut r = *self;
        for k in 0..self.n as usize {
            for x in 0..self.n as usize {
                if (r.rows[x] >> k) & 1 == 1 {
                    r.rows[x] |= r.rows[k];
                }
            }
        }
        r
    }

    /// Conjugation: (x,y) in result iff (sigma^-1 x, sigma^-1 y) in R.
    /// Equals Delta_sigma R Delta_{sigma^-1}, a left group action.
    pub fn conjugate(&self, sigma: &Permutation) -> Relation {
        let mut r = Relation::empty(self.n);
        for x in 0..self.n {
            for y in 0..self.n {
                if self.contains(x, y) {
                    r.rows[sigma.apply(x) as usize] |= 1 << sigma.apply(y);
                }
            }
        }
        r
    }

    /// All sigma with Delta_sigma contained in R, i.e. (sigma(x), x) in R for
    /// every x. Backtracks over systems of distinct representatives of the
    /// columns, sparsest column first.
    pub fn contained_permutations(&self) -> Vec<Permutation> {
        let n = self.n as usize;
        let mut cols: Vec<(u8, u8)> = (0..self.n).map(|y| (y, self.column(y))).collect();
        cols.sort_by_key(|&(_, c)| c.count_ones());
        let mut out = Vec::new();
        let mut images = [0u8; MAX_N as usize];
        fn rec(
            cols: &[(u8, u8)],
            i: usize,
            used: u8,
            images: &mut [u8; MAX_N as usize],
            n: usize,
            out: &mut Vec<Permutation>,
        ) {
            if i == n {
                out.push(Permutation::from_images(&images[..n]).expect("distinct by construction"));
                return;
            }
            let (y, col) = cols[i];
            let mut avail = col & !used;
            while avail != 0 {
                let a = avail.trailing_zeros() as u8;
                avail &= avail - 1;
                // Delta_sigma contains (sigma(y), y) = (a, y)
                images[y as usize] = a;
                rec(cols, i + 1, used | (1 << a), images, n, out);
            }
        }
        rec(&cols, 0, 0, &mut images, n, &mut out);
        out.sort_by_key(Permutation::index);
        out
    }

    pub fn classify(&self) -> RelationClass {
        let n = self.n;
        let reflexive = Relation::diagonal(n).is_subset(self);
        let transitive = {
            let sq = self.compose(self).expect("same n");
            sq.is_subset(self)
        };
        let t = self.transpose();
        let symmetric = t == *self;
        let antisymmetric = self.intersection(&t).is_subset(&Relation::diagonal(n));
        let preorder = reflexive && transitive;
        let order = preorder && antisymmetric;
        let equivalence = preorder && symmetric;
        let total_order = order
            && (0..n).all(|x| (0..n).all(|y| self.contains(x, y) || self.contains(y, x)));
        RelationClass {
            reflexive,
            transitive,
            antisymmetric,
            symmetric,
            preorder,
            order,
            equivalence,
            total_order,
        }
    }

    /// Parses the documented text format: either n lines of n characters
    /// '0'/'1' (row x, column y), or a single hex string of ceil(n^2/4)
    /// digits encoding `mask64` (most significant digit first).
    pub fn parse(text: &str) -> Result<Relation> {
        let lines: Vec<&str> = text.lines().map(str::trim).filter(|l| !l.is_empty()).collect();
        if lines.is_empty() {
            return Err(Error::Parse { line: 1, col: 1, msg: "empty input".into() });
        }
        if lines.len() == 1 && !lines[0].chars().all(|c| c == '0' || c == '1') {
            return Self::parse_hex(lines[0]);
        }
        let n = lines.len();
        if n > MAX_N as usize {
            return Err(Error::Parse {
                line: n,
                col: 1,
                msg: format!("{n} rows, but n <= 8 is required"),
            });
        }
        let mut r = Relation::empty(n as u8);
        for (x, line) in lines.iter().enumerate() {
            if line.chars().count() != n {
                return Err(Error::Parse {
                    line: x + 1,
                    col: line.chars().count() + 1,
                    msg: format!("expected {n} characters in row {}", x + 1),
                });
            }
            for (y, c) in line.chars().enumerate() {
                match c {
                    '0' => {}
                    '1' => r.rows[x] |= 1 << y,
                    _ => {
                        return Err(Error::Parse {
                            line: x + 1,
                            col: y + 1,
                            msg: format!("expected '0' or '1', found {c:?}"),
                        })
                    }
                }
            }
        }
        Ok(r)
    }

    fn parse_hex(s: &str) -> Result<Relation> {
        // digit count determines n: ceil(n^2/4)
        let digits = s.chars().count();
        let n = (1..=MAX_N)
            .find(|&n| (n as usize * n as usize).div_ceil(4) == digits)
            .ok_or_else(|| Error::Parse {
                line: 1,
                col: 1,
                msg: format!("{digits} hex digits match no n <= 8"),
            })?;
        let mut mask: u64 = 0;
        for (i, c) in s.chars().enumerate() {
            let d = c.to_digit(16).ok_or_else(|| Error::Parse {
                line: 1,
                col: i + 1,
                msg: format!("invalid hex digit {c:?}"),
            })? as u64;
            mask = (mask << 4) | d;
        }
        if mask >> (n as u32 * n as u32) != 0 {
            return Err(Error::Parse {
                line: 1,
                col: 1,
                msg: "hex value has bits beyond n^2".into(),
            });
        }
        Ok(Relation::from_mask64(n, mask))
    }

    /// The 0/1 grid form, the writer side of `parse`.
    pub fn to_grid(&self) -> String {
        let mut s = String::new();
        for x in 0..self.n {
            for y in 0..self.n {
                s.push(if self.contains(x, y) { '1' } else { '0' });
            }
            s.push('\n');
        }
        s
    }

    pub fn to_hex(&self) -> String {
        let digits = (self.n as usize * self.n as usize).div_ceil(4);
        format!("{:0width$x}", self.mask64(), width = digits)
    }

    /// Pairs (x,y), 0-based, row-major.
    pub fn pairs(&self) -> Vec<(u8, u8)> {
        let mut out = Vec::new();
        for x in 0..self.n {
            for y in 0..self.n {
                if self.contains(x, y) {
                    out.push((x, y));
                }
            }
        }
        out
    }
}

/// Decomposes essential R as Q * Delta_sigma with Q reflexive, given a
/// contained permutation Delta_sigma of R. Q = R * Delta_{sigma^-1}.
pub fn reflexive_part(r: &Relation, sigma: &Permutation) -> Relation {
    r.compose(&Relation::delta(&sigma.inverse())).expect("same n")
}

/// Enumerates all relations on n points; only sensible for n <= 4.
pub fn all_relations(n: u8) -> impl Iterator<Item = Relation> {
    let total: u64 = 1u64 << (n as u32 * n as u32);
    (0..total).map(move |m| Relation::from_mask64(n, m))
}

impl std::fmt::Debug for Relation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let pairs: Vec<String> =
            self.pairs().iter().map(|&(x, y)| format!("({},{})", x + 1, y + 1)).collect();
        write!(f, "Relation(n={}, {{{}}})", self.n, pairs.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::permutation::all_permutations;
    use proptest::prelude::*;

    fn rel(n: u8, pairs: &[(u8, u8)]) -> Relation {
        Relation::from_pairs(n, pairs)
    }

    #[test]
    fn compose_identity_and_absorbing() {
        let d = Relation::diagonal(3);
        for r in all_relations(3).step_by(7) {
            assert_eq!(d.compose(&r).unwrap(), r);
            assert_eq!(r.compose(&d).unwrap(), r);
        }
        let full = Relation::full(3);
        assert_eq!(full.compose(&full).unwrap(), full);
    }

    #[test]
    fn compose_single_pairs() {
        // {(1,2)} * {(2,1)} = {(1,1)} on n = 2
        let a = rel(2, &[(0, 1)]);
        let b = rel(2, &[(1, 0)]);
        assert_eq!(a.compose(&b).unwrap(), rel(2, &[(0, 0)]));
    }

    #[test]
    fn compose_size_mismatch() {
        assert!(Relation::full(2).compose(&Relation::full(3)).is_err());
    }

    #[test]
    fn delta_multiplication_matches_group_product() {
        // delta(s) * delta(t) = delta(s*t)
        for s in all_permutations(4) {
            for t in all_permutations(4).iter().step_by(5) {
                let lhs = Relation::delta(&s).compose(&Relation::delta(t)).unwrap();
                assert_eq!(lhs, Relation::delta(&s.compose(t)));
            }
        }
    }

    #[test]
    fn transpose_examples() {
        assert_eq!(Relation::diagonal(4).transpose(), Relation::diagonal(4));
        assert_eq!(rel(2, &[(0, 1)]).transpose(), rel(2, &[(1, 0)]));
        let t = Relation::usual_total_order(3);
        let rev = rel(3, &[(0, 0), (1, 1), (2, 2), (1, 0), (2, 0), (2, 1)]);
        assert_eq!(t.transpose(), rev);
    }

    #[test]
    fn closure_examples() {
        let d = Relation::diagonal(3);
        assert_eq!(d.transitive_closure(), d);
        let r = d.union(&rel(3, &[(0, 1), (1, 2)]));
        let expect = r.union(&rel(3, &[(0, 2)]));
        assert_eq!(r.transitive_closure(), expect);
        let c = Relation::diagonal(2).union(&rel(2, &[(0, 1), (1, 0)]));
        assert_eq!(c.transitive_closure(), Relation::full(2));
    }

    #[test]
    fn closure_is_stabilized_power_for_reflexive() {
        // R subset R^2 subset ... stabilizes within n-1 squarings
        for m in (0..512u64).step_by(3) {
            let r = Relation::from_mask64(3, m).union(&Relation::diagonal(3));
            let mut p = r;
            for _ in 0..2 {
                p = p.compose(&p).unwrap();
            }
            assert_eq!(p, r.transitive_closure());
            assert_eq!(p.compose(&p).unwrap(), p);
        }
    }

    #[test]
    fn conjugate_examples() {
        let r = rel(2, &[(0, 0), (0, 1), (1, 1)]);
        let sw = Permutation::swap(2, 0, 1);
        assert_eq!(r.conjugate(&sw), rel(2, &[(0, 0), (1, 0), (1, 1)]));
        for sigma in all_permutations(3) {
            assert_eq!(Relation::diagonal(3).conjugate(&sigma), Relation::diagonal(3));
        }
    }

    #[test]
    fn conjugate_matches_delta_sandwich() {
        for sigma in all_permutations(3) {
            let ds = Relation::delta(&sigma);
            let dsi = Relation::delta(&sigma.inverse());
            for m in (0..512u64).step_by(11) {
                let r = Relation::from_mask64(3, m);
                let sandwich = ds.compose(&r).unwrap().compose(&dsi).unwrap();
                assert_eq!(r.conjugate(&sigma), sandwich);
            }
        }
    }

    #[test]
    fn contained_permutations_examples() {
        assert_eq!(
            Relation::diagonal(3).contained_permutations(),
            vec![Permutation::identity(3)]
        );
        assert_eq!(Relation::full(3).contained_permutations().len(), 6);
        assert!(rel(2, &[(0, 1)]).contained_permutations().is_empty());
    }

    #[test]
    fn classify_examples() {
        let c = Relation::diagonal(3).classify();
        assert!(c.reflexive && c.transitive && c.antisymmetric && c.order && c.equivalence);
        assert!(!c.total_order);
        assert!(Relation::usual_total_order(3).classify().total_order);
        let p = Relation::diagonal(3).union(&rel(3, &[(0, 1), (1, 0)]));
        let cp = p.classify();
        assert!(cp.preorder && cp.equivalence && !cp.order);
    }

    #[test]
    fn conjugation_commutes_with_closure() {
        for sigma in all_permutations(3) {
            for m in (0..512u64).step_by(5) {
                let r = Relation::from_mask64(3, m).union(&Relation::diagonal(3));
                assert_eq!(
                    r.conjugate(&sigma).transitive_closure(),
                    r.transitive_closure().conjugate(&sigma)
                );
            }
        }
    }

    #[test]
    fn parse_grid_and_hex_roundtrip() {
        let r = rel(3, &[(0, 1), (1, 2), (2, 0), (1, 1)]);
        assert_eq!(Relation::parse(&r.to_grid()).unwrap(), r);
        assert_eq!(Relation::parse(&r.to_hex()).unwrap(), r);
        assert!(Relation::parse("010\n001\n").is_err()); // 2x3 grid
        assert!(Relation::parse("01x\n001\n100\n").is_err());
    }

    proptest! {
        #[test]
        fn compose_associative(a in 0u64..65536, b in 0u64..65536, c in 0u64..65536) {
            let (a, b, c) = (
                Relation::from_mask64(4, a),
                Relation::from_mask64(4, b),
                Relation::from_mask64(4, c),
            );
            let lhs = a.compose(&b).unwrap().compose(&c).unwrap();
            let rhs = a.compose(&b.compose(&c).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn transpose_antihomomorphism(a in 0u64..65536, b in 0u64..65536) {
            let (a, b) = (Relation::from_mask64(4, a), Relation::from_mask64(4, b));
            let lhs = a.compose(&b).unwrap().transpose();
            let rhs = b.transpose().compose(&a.transpose()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn conjugation_is_group_action(m in 0u64..65536, i in 0usize..24, j in 0usize..24) {
            let r = Relation::from_mask64(4, m);
            let s = Permutation::from_index(4, i);
            let t = Permutation::from_index(4, j);
            prop_assert_eq!(
                r.conjugate(&t).conjugate(&s),
                r.conjugate(&s.compose(&t))
            );
        }
    }
}
