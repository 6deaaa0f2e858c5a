//! Matchings of `{1..m}`, their partition counts, and even-cycle permutation
//! statistics.
//!
//! An `r`-matching is a set of `r` disjoint unordered pairs. Matchings are the
//! index sets of the matching operators, and every coefficient formula in the
//! engine is ultimately a statement about how many matchings of a given kind
//! exist, so this module doubles as the ground truth that the closed forms are
//! tested against.

use crate::numbers::{binomial, double_factorial, factorial, int, q_from_int, rising, Q};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::collections::BTreeMap;

/// A set of `r` disjoint unordered pairs over the ground set `{1..m}`.
///
/// Pairs are stored canonically (each pair sorted ascending, pairs sorted by
/// first element) so that structural equality coincides with set equality.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Matching {
    m: usize,
    pairs: Vec<(usize, usize)>,
}

impl Matching {
    /// Canonicalizes and validates: endpoints in `{1..m}`, all distinct.
    pub fn new(m: usize, pairs: Vec<(usize, usize)>) -> Result<Self> {
        let mut pairs: Vec<(usize, usize)> = pairs
            .into_iter()
            .map(|(a, b)| if a <= b { (a, b) } else { (b, a) })
            .collect();
        pairs.sort_unstable();
        let mut seen = vec![false; m + 1];
        for &(a, b) in &pairs {
            if a == b || a < 1 || b > m {
                return Err(Error::Domain(format!(
                    "pair ({a},{b}) invalid over ground set of size {m}"
                )));
            }
            for e in [a, b] {
                if seen[e] {
                    return Err(Error::Domain(format!("endpoint {e} repeated")));
                }
                seen[e] = true;
            }
        }
        Ok(Matching { m, pairs })
    }

    pub fn empty(m: usize) -> Self {
        Matching { m, pairs: Vec::new() }
    }

    pub fn ground_set_size(&self) -> usize {
        self.m
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// The set of covered endpoints, ascending.
    pub fn support(&self) -> Vec<usize> {
        let mut s: Vec<usize> = self.pairs.iter().flat_map(|&(a, b)| [a, b]).collect();
        s.sort_unstable();
        s
    }

    /// Partner of `e` in this matching, if covered.
    pub fn partner(&self, e: usize) -> Option<usize> {
        self.pairs.iter().find_map(|&(a, b)| {
            if a == e {
                Some(b)
            } else if b == e {
                Some(a)
            } else {
                None
            }
        })
    }

    pub fn contains_pair(&self, a: usize, b: usize) -> bool {
        let p = if a <= b { (a, b) } else { (b, a) };
        self.pairs.binary_search(&p).is_ok()
    }
}

impl std::fmt::Display for Matching {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{{")?;
        for (i, (a, b)) in self.pairs.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "({a},{b})")?;
        }
        write!(f, "}}")
    }
}

/// How the `r`-matchings split against a fixed pair `(i,j)`: containing the
/// pair itself, exactly one endpoint, both endpoints separately, or neither.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionCounts {
    pub both_as_pair: BigInt,
    pub one_endpoint: BigInt,
    pub both_split: BigInt,
    pub neither: BigInt,
}

impl PartitionCounts {
    pub fn total(&self) -> BigInt {
        &self.both_as_pair + &self.one_endpoint + &self.both_split + &self.neither
    }
}

/// Number of `r`-matchings of `{1..m}`: `m! / (2^r r! (m-2r)!)`.
///
/// Total by convention: returns 0 when `m < 0`, `r < 0`, or `2r > m`.
pub fn count_matchings(m: i64, r: i64) -> BigInt {
    if m < 0 || r < 0 || 2 * r > m {
        return BigInt::zero();
    }
    binomial(m, 2 * r) * double_factorial(2 * r - 1)
}

/// All `r`-matchings of `{1..m}` in canonical (lexicographic) order.
pub fn enumerate_matchings(m: usize, r: usize) -> Result<Vec<Matching>> {
    if 2 * r > m {
        return Err(Error::Domain(format!(
            "no {r}-matchings over a ground set of size {m}"
        )));
    }
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(r);
    let avail: Vec<usize> = (1..=m).collect();
    fn rec(
        avail: &[usize],
        need: usize,
        current: &mut Vec<(usize, usize)>,
        m: usize,
        out: &mut Vec<Matching>,
    ) {
        if need == 0 {
            out.push(Matching {
                m,
                pairs: current.clone(),
            });
            return;
        }
        if avail.len() < 2 * need {
            return;
        }
        let a = avail[0];
        let rest = &avail[1..];
        // smallest available element is either left uncovered ...
        rec(rest, need, current, m, out);
        // ... or paired with some later element
        for (k, &b) in rest.iter().enumerate() {
            let mut remaining = Vec::with_capacity(rest.len() - 1);
            remaining.extend_from_slice(&rest[..k]);
            remaining.extend_from_slice(&rest[k + 1..]);
            current.push((a, b));
            rec(&remaining, need - 1, current, m, out);
            current.pop();
        }
    }
    rec(&avail, r, &mut current, m, &mut out);
    out.sort();
    Ok(out)
}

/// Cardinalities of the partition classes of the `r`-matchings relative to a
/// fixed pair, via the recursive counting identities.
pub fn partition_counts(m: i64, r: i64) -> Result<PartitionCounts> {
    if m <= 2 {
        return Err(Error::Domain(format!(
            "partition counts need a ground set larger than 2, got {m}"
        )));
    }
    if r < 0 || 2 * r > m {
        return Err(Error::Domain(format!(
            "r = {r} out of range for m = {m}"
        )));
    }
    Ok(PartitionCounts {
        both_as_pair: count_matchings(m - 2, r - 1),
        one_endpoint: int(2 * (m - 2)) * count_matchings(m - 3, r - 1),
        both_split: int((m - 2) * (m - 3)) * count_matchings(m - 4, r - 2),
        neither: count_matchings(m - 2, r),
    })
}

/// Classifies enumerated matchings against the pair `(i,j)`; brute-force
/// counterpart of [`partition_counts`].
pub fn classify_against_pair(
    matchings: &[Matching],
    i: usize,
    j: usize,
) -> PartitionCounts {
    let mut counts = PartitionCounts {
        both_as_pair: BigInt::zero(),
        one_endpoint: BigInt::zero(),
        both_split: BigInt::zero(),
        neither: BigInt::zero(),
    };
    for p in matchings {
        let has_i = p.partner(i).is_some();
        let has_j = p.partner(j).is_some();
        let slot = if p.contains_pair(i, j) {
            &mut counts.both_as_pair
        } else if has_i && has_j {
            &mut counts.both_split
        } else if has_i || has_j {
            &mut counts.one_endpoint
        } else {
            &mut counts.neither
        };
        *slot += 1;
    }
    counts
}

/// Caps exhaustive permutation work at `S_12`.
const MAX_EVEN_CYCLE_R: usize = 6;

/// Number of permutations of `2r` elements with only even-length cycles,
/// grouped by cycle count: `k -> h(2r, k)`.
///
/// Counted by cycle type: for every partition of `2r` into even parts, the
/// permutations with that cycle type number `(2r)! / prod(l^{m_l} m_l!)`.
pub fn even_cycle_counts(r: usize) -> Result<BTreeMap<usize, BigInt>> {
    if r < 1 {
        return Err(Error::Domain("need r >= 1".into()));
    }
    if r > MAX_EVEN_CYCLE_R {
        return Err(Error::Resource(format!(
            "even-cycle statistics capped at r = {MAX_EVEN_CYCLE_R}, got {r}"
        )));
    }
    let n = 2 * r;
    let mut out: BTreeMap<usize, BigInt> = BTreeMap::new();
    // partitions of n into even parts, built in nonincreasing order
    let mut parts: Vec<usize> = Vec::new();
    fn rec(remaining: usize, max_part: usize, parts: &mut Vec<usize>, n: usize, out: &mut BTreeMap<usize, BigInt>) {
        if remaining == 0 {
            // count permutations with this cycle type
            let mut denom = BigInt::one();
            let mut mult: BTreeMap<usize, u64> = BTreeMap::new();
            for &l in parts.iter() {
                *mult.entry(l).or_insert(0) += 1;
            }
            for (&l, &m_l) in &mult {
                for _ in 0..m_l {
                    denom *= l;
                }
                denom *= factorial(m_l);
            }
            let count = factorial(n as u64) / denom;
            *out.entry(parts.len()).or_insert_with(BigInt::zero) += count;
            return;
        }
        let mut l = max_part.min(remaining);
        if l % 2 == 1 {
            l -= 1;
        }
        while l >= 2 {
            parts.push(l);
            rec(remaining - l, l, parts, n, out);
            parts.pop();
            l -= 2;
        }
    }
    rec(n, n, &mut parts, n, &mut out);
    Ok(out)
}

/// Generating function of the even-cycle counts evaluated at `y`:
/// `(y/2)^{r rising} 2^r (2r-1)!!`.
pub fn even_cycle_gf(r: u32, y: &Q) -> Q {
    let half_y = y / crate::numbers::q(2);
    rising(&half_y, r)
        * crate::numbers::pow2(i64::from(r))
        * q_from_int(double_factorial(2 * i64::from(r) - 1))
}

/// A permutation of `{1..n}` stored as the image array (1-based values).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n + 1];
        for &v in &images {
            if v < 1 || v > n || seen[v] {
                return Err(Error::Domain("not a permutation".into()));
            }
            seen[v] = true;
        }
        Ok(Permutation { images })
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn apply(&self, x: usize) -> usize {
        self.images[x - 1]
    }

    /// Cycle decomposition, each cycle starting at its smallest element,
    /// cycles ordered by their smallest element.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.images.len();
        let mut seen = vec![false; n + 1];
        let mut cycles = Vec::new();
        for start in 1..=n {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut x = self.apply(start);
            while x != start {
                seen[x] = true;
                cycle.push(x);
                x = self.apply(x);
            }
            cycles.push(cycle);
        }
        cycles
    }
}

/// Interleaves two perfect matchings of `{1..2r}` into the permutation whose
/// cycles alternate `p`-edges and `q`-edges.
///
/// Each cycle is walked from its smallest unused element `a_1`, taking the
/// `p`-partner on odd steps and the `q`-partner on even steps; the resulting
/// permutation has only even cycles. With the same smallest-element
/// convention, splitting the cycles back into alternating edges recovers
/// `(p, q)`, so the construction is a bijection.
pub fn matching_pair_to_permutation(p: &Matching, q: &Matching) -> Result<Permutation> {
    let n = p.ground_set_size();
    if q.ground_set_size() != n || 2 * p.len() != n || 2 * q.len() != n {
        return Err(Error::Domain(
            "need two perfect matchings over the same ground set".into(),
        ));
    }
    let mut images = vec![0usize; n];
    let mut used = vec![false; n + 1];
    for start in 1..=n {
        if used[start] {
            continue;
        }
        let mut walk = vec![start];
        used[start] = true;
        loop {
            let last = *walk.last().unwrap();
            let next = if walk.len() % 2 == 1 {
                p.partner(last).expect("perfect matching covers every element")
            } else {
                q.partner(last).expect("perfect matching covers every element")
            };
            if next == start {
                break;
            }
            used[next] = true;
            walk.push(next);
        }
        for k in 0..walk.len() {
            images[walk[k] - 1] = walk[(k + 1) % walk.len()];
        }
    }
    Permutation::from_images(images)
}

/// Inverse of [`matching_pair_to_permutation`] for even-cycle permutations.
pub fn permutation_to_matching_pair(perm: &Permutation) -> Result<(Matching, Matching)> {
    let n = perm.len();
    let mut p_pairs = Vec::new();
    let mut q_pairs = Vec::new();
    for cycle in perm.cycles() {
        if cycle.len() % 2 != 0 {
            return Err(Error::Domain("permutation has an odd cycle".into()));
        }
        for k in (0..cycle.len()).step_by(2) {
            p_pairs.push((cycle[k], cycle[k + 1]));
            q_pairs.push((cycle[k + 1], cycle[(k + 2) % cycle.len()]));
        }
    }
    Ok((Matching::new(n, p_pairs)?, Matching::new(n, q_pairs)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numbers::{q, q_ratio};

    #[test]
    fn enumerate_m4_r2() {
        let ms = enumerate_matchings(4, 2).unwrap();
        let expect: Vec<Matching> = vec![
            Matching::new(4, vec![(1, 2), (3, 4)]).unwrap(),
            Matching::new(4, vec![(1, 3), (2, 4)]).unwrap(),
            Matching::new(4, vec![(1, 4), (2, 3)]).unwrap(),
        ];
        assert_eq!(ms, expect);
    }

    #[test]
    fn enumerate_r0_is_empty_matching() {
        for m in 0..6 {
            let ms = enumerate_matchings(m, 0).unwrap();
            assert_eq!(ms, vec![Matching::empty(m)]);
        }
    }

    #[test]
    fn enumerate_m6_r3_has_15() {
        assert_eq!(enumerate_matchings(6, 3).unwrap().len(), 15);
    }

    #[test]
    fn enumerate_out_of_range_is_domain_error() {
        assert!(matches!(
            enumerate_matchings(3, 2),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn count_examples() {
        assert_eq!(count_matchings(4, 1), int(6));
        assert_eq!(count_matchings(4, 2), int(3));
        assert_eq!(count_matchings(-1, 0), int(0));
        assert_eq!(count_matchings(3, 2), int(0));
        assert_eq!(count_matchings(0, 0), int(1));
    }

    #[test]
    fn counts_match_enumeration() {
        for m in 0..=10usize {
            for r in 0..=m / 2 {
                assert_eq!(
                    int(enumerate_matchings(m, r).unwrap().len() as i64),
                    count_matchings(m as i64, r as i64),
                    "m={m} r={r}"
                );
            }
        }
    }

    #[test]
    fn matching_canonicalization_and_validation() {
        let a = Matching::new(5, vec![(4, 2), (1, 3)]).unwrap();
        let b = Matching::new(5, vec![(1, 3), (2, 4)]).unwrap();
        assert_eq!(a, b);
        assert!(Matching::new(4, vec![(1, 1)]).is_err());
        assert!(Matching::new(4, vec![(0, 2)]).is_err());
        assert!(Matching::new(4, vec![(1, 2), (2, 3)]).is_err());
        assert!(Matching::new(3, vec![(1, 4)]).is_err());
    }

    #[test]
    fn partition_counts_examples() {
        let c = partition_counts(4, 1).unwrap();
        assert_eq!(
            (c.both_as_pair, c.one_endpoint, c.both_split, c.neither),
            (int(1), int(4), int(0), int(1))
        );
        let c = partition_counts(6, 2).unwrap();
        assert_eq!(
            (c.both_as_pair.clone(), c.one_endpoint.clone(), c.both_split.clone(), c.neither.clone()),
            (int(6), int(24), int(12), int(3))
        );
        assert_eq!(c.total(), count_matchings(6, 2));
    }

    #[test]
    fn partition_counts_r0() {
        let c = partition_counts(5, 0).unwrap();
        assert_eq!(
            (c.both_as_pair, c.one_endpoint, c.both_split, c.neither),
            (int(0), int(0), int(0), int(1))
        );
    }

    #[test]
    fn partition_counts_small_m_rejected() {
        assert!(partition_counts(2, 1).is_err());
    }

    #[test]
    fn partition_counts_match_classification() {
        for m in 3..=10usize {
            for r in 0..=m / 2 {
                let predicted = partition_counts(m as i64, r as i64).unwrap();
                let all = enumerate_matchings(m, r).unwrap();
                // cardinalities are independent of the chosen pair; spot-check two
                for (i, j) in [(1, 2), (2, m)] {
                    let observed = classify_against_pair(&all, i, j);
                    assert_eq!(predicted, observed, "m={m} r={r} pair=({i},{j})");
                }
            }
        }
    }

    #[test]
    fn even_cycle_counts_small() {
        let h2 = even_cycle_counts(1).unwrap();
        assert_eq!(h2, BTreeMap::from([(1, int(1))]));
        let h4 = even_cycle_counts(2).unwrap();
        assert_eq!(h4, BTreeMap::from([(1, int(6)), (2, int(3))]));
    }

    /// Raw permutation enumeration, only viable for small `r`.
    fn even_cycle_counts_raw(r: usize) -> BTreeMap<usize, BigInt> {
        let n = 2 * r;
        let mut out = BTreeMap::new();
        let mut perm: Vec<usize> = (1..=n).collect();
        loop {
            let p = Permutation::from_images(perm.clone()).unwrap();
            let cycles = p.cycles();
            if cycles.iter().all(|c| c.len() % 2 == 0) {
                *out.entry(cycles.len()).or_insert_with(BigInt::zero) += 1;
            }
            // next permutation in lexicographic order
            let mut i = n;
            while i > 1 && perm[i - 2] >= perm[i - 1] {
                i -= 1;
            }
            if i <= 1 {
                break;
            }
            let mut j = n;
            while perm[j - 1] <= perm[i - 2] {
                j -= 1;
            }
            perm.swap(i - 2, j - 1);
            perm[i - 1..].reverse();
        }
        out
    }

    #[test]
    fn cycle_type_counting_matches_raw_enumeration() {
        for r in 1..=4 {
            assert_eq!(even_cycle_counts(r).unwrap(), even_cycle_counts_raw(r), "r={r}");
        }
    }

    #[test]
    fn even_cycle_counts_caps() {
        assert!(matches!(even_cycle_counts(7), Err(Error::Resource(_))));
        assert!(matches!(even_cycle_counts(0), Err(Error::Domain(_))));
    }

    #[test]
    fn gf_matches_counts() {
        for r in 1..=5usize {
            let counts = even_cycle_counts(r).unwrap();
            for y in [q(1), q(2), q(3), q_ratio(1, 2)] {
                let sum: Q = counts
                    .iter()
                    .map(|(&k, h)| q_from_int(h.clone()) * crate::numbers::q_pow(&y, k as i64))
                    .sum();
                assert_eq!(sum, even_cycle_gf(r as u32, &y), "r={r} y={y}");
            }
        }
    }

    #[test]
    fn gf_closed_form_values() {
        assert_eq!(even_cycle_gf(1, &q(3)), q(3));
        assert_eq!(even_cycle_gf(2, &q(3)), q(45));
        assert_eq!(even_cycle_gf(0, &q(7)), q(1));
        // weighted sum at y=3 for r=3 equals 15 * 105
        assert_eq!(even_cycle_gf(3, &q(3)), q(1575));
    }

    #[test]
    fn pair_to_permutation_basics() {
        let p = Matching::new(2, vec![(1, 2)]).unwrap();
        let perm = matching_pair_to_permutation(&p, &p).unwrap();
        assert_eq!(perm.cycles(), vec![vec![1, 2]]);

        let p = Matching::new(4, vec![(1, 2), (3, 4)]).unwrap();
        let q = Matching::new(4, vec![(1, 3), (2, 4)]).unwrap();
        let perm = matching_pair_to_permutation(&p, &q).unwrap();
        assert_eq!(perm.cycles().len(), 1);
        assert_eq!(perm.cycles()[0].len(), 4);
    }

    #[test]
    fn pair_permutation_bijection_r2() {
        let perfect = enumerate_matchings(4, 2).unwrap();
        let mut seen = std::collections::BTreeSet::new();
        for p in &perfect {
            for q in &perfect {
                let perm = matching_pair_to_permutation(p, q).unwrap();
                assert!(perm.cycles().iter().all(|c| c.len() % 2 == 0));
                let (p2, q2) = permutation_to_matching_pair(&perm).unwrap();
                assert_eq!((&p2, &q2), (p, q));
                seen.insert(perm);
            }
        }
        // 3 x 3 pairs biject onto the even-cycle permutations of S_4
        assert_eq!(seen.len(), 9);
    }

    #[test]
    fn pair_permutation_rejects_non_perfect() {
        let p = Matching::new(4, vec![(1, 2)]).unwrap();
        let q = Matching::new(4, vec![(1, 2), (3, 4)]).unwrap();
        assert!(matching_pair_to_permutation(&p, &q).is_err());
    }
}
