//! Brute-force ground truth for T(n, m, t): the least value that is the sum of
//! n positive m-th powers in at least t ways.
//!
//! Representations are canonical nonincreasing base multisets, counted by the
//! recursion `r(v, n, b_max) = sum over b <= b_max of r(v - b^m, n - 1, b)`
//! with a memo table private to each query. Counts saturate at the requested
//! cap during minimality scans; full enumeration is a separate pass at the
//! winning value. Everything runs in checked 64-bit arithmetic and is
//! deliberately independent of the closed forms in [`crate::arith`].

use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};

/// A canonical (nonincreasing) multiset of bases whose m-th powers sum to `value`.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct Representation {
    pub m: u32,
    pub bases: Vec<u64>,
    pub value: u64,
}

/// Result of a minimality scan for T(n, m, t).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TaxicabResult {
    pub n: u64,
    pub m: u32,
    pub t: u64,
    pub value: u64,
    pub representations: Vec<Representation>,
    /// Exclusive upper bound of the value range actually searched.
    pub search_ceiling: u64,
}

/// How many representations to attach to a [`TaxicabResult`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RepsPolicy {
    /// Stop after the first t witnesses (enough to certify the count).
    #[default]
    FirstT,
    /// Enumerate every representation of the winning value.
    All,
}

/// Drop-set analysis of the sequence n -> T(n, m, t).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DropReport {
    pub m: u32,
    pub t: u64,
    /// Smallest n for which T(n, m, t) was found within the configured limits.
    pub n0: u64,
    pub taxicab_sequence: Vec<(u64, u64)>,
    /// All observed n with T(n+1) < T(n) + 1.
    pub drops: BTreeSet<u64>,
    /// max(drops) + 1, or n0 when no drop was observed.
    pub empirical_seed: u64,
    pub seed_value: u64,
    /// Number of consecutive k >= 1 for which T(seed + k) = T(seed) + k was verified.
    pub stabilization_window: u64,
    /// Set when the requested window extends past the scanned range.
    pub window_truncated: bool,
}

/// Largest r >= 0 with r^m <= v.
fn integer_root(v: u64, m: u32) -> u64 {
    if m == 1 {
        return v;
    }
    if v == 0 {
        return 0;
    }
    let mut r = (v as f64).powf(1.0 / m as f64).round() as u64;
    while pow_u64(r, m).is_none_or(|p| p > v) {
        r -= 1;
    }
    while pow_u64(r + 1, m).is_some_and(|p| p <= v) {
        r += 1;
    }
    r
}

fn pow_u64(b: u64, m: u32) -> Option<u64> {
    b.checked_pow(m)
}

/// Per-query search state: exponent, saturation cap and a private memo table.
struct Search {
    m: u32,
    cap: u64,
    memo: HashMap<(u64, u64, u64), u64>,
}

impl Search {
    fn new(m: u32, cap: u64) -> Self {
        Search {
            m,
            cap,
            memo: HashMap::new(),
        }
    }

    fn pow(&self, b: u64) -> u64 {
        // Bases are bounded by integer_root of the query value, so this
        // cannot overflow once the query itself fits in u64.
        pow_u64(b, self.m).expect("base power exceeds u64")
    }

    /// min(cap, number of nonincreasing base sequences of length n, bases in
    /// [1, b_max], with power sum v).
    fn count(&mut self, v: u64, n: u64, b_max: u64) -> u64 {
        if n == 0 {
            return u64::from(v == 0);
        }
        if v < n {
            return 0;
        }
        if n == 1 {
            let r = integer_root(v, self.m);
            return u64::from(r >= 1 && r <= b_max && self.pow(r) == v);
        }
        // Largest usable base: the remaining n-1 terms contribute at least 1 each.
        let hi = b_max.min(integer_root(v - (n - 1), self.m));
        if hi == 0 || self.pow(hi).saturating_mul(n) < v {
            return 0;
        }
        let key = (v, n, hi);
        if let Some(&c) = self.memo.get(&key) {
            return c;
        }
        let mut total = 0u64;
        for b in (1..=hi).rev() {
            let p = self.pow(b);
            total = total.saturating_add(self.count(v - p, n - 1, b)).min(self.cap);
            if total == self.cap {
                break;
            }
        }
        self.memo.insert(key, total);
        total
    }

    /// Depth-first enumeration in lexicographically decreasing base order.
    fn enumerate(&mut self, v: u64, n: u64, max_count: u64) -> Vec<Vec<u64>> {
        let mut out = Vec::new();
        let mut prefix = Vec::new();
        let b_max = integer_root(v, self.m);
        self.enumerate_rec(v, n, b_max, max_count, &mut prefix, &mut out);
        out
    }

    fn enumerate_rec(
        &mut self,
        v: u64,
        n: u64,
        b_max: u64,
        max_count: u64,
        prefix: &mut Vec<u64>,
        out: &mut Vec<Vec<u64>>,
    ) {
        if out.len() as u64 >= max_count {
            return;
        }
        if n == 0 {
            if v == 0 {
                out.push(prefix.clone());
            }
            return;
        }
        if v < n {
            return;
        }
        if n == 1 {
            let r = integer_root(v, self.m);
            if r >= 1 && r <= b_max && self.pow(r) == v {
                prefix.push(r);
                out.push(prefix.clone());
                prefix.pop();
            }
            return;
        }
        let hi = b_max.min(integer_root(v - (n - 1), self.m));
        for b in (1..=hi).rev() {
            let p = self.pow(b);
            prefix.push(b);
            self.enumerate_rec(v - p, n - 1, b, max_count, prefix, out);
            prefix.pop();
            if out.len() as u64 >= max_count {
                return;
            }
        }
    }
}

/// min(cap, number of multisets of n naturals >= 1 whose m-th powers sum to v).
pub fn count_representations(v: u64, n: u64, m: u32, cap: u64) -> Result<u64> {
    check_pre(v >= 1 && n >= 1 && m >= 1 && cap >= 1, "v, n, m, cap must all be >= 1")?;
    Ok(Search::new(m, cap).count(v, n, integer_root(v, m)))
}

/// Up to `max_count` distinct canonical representations of v as a sum of n
/// m-th powers, in lexicographically decreasing base order.
pub fn enumerate_representations(
    v: u64,
    n: u64,
    m: u32,
    max_count: u64,
) -> Result<Vec<Representation>> {
    check_pre(v >= 1 && n >= 1 && m >= 1, "v, n, m must all be >= 1")?;
    let mut search = Search::new(m, u64::MAX);
    Ok(search
        .enumerate(v, n, max_count)
        .into_iter()
        .map(|bases| Representation { m, bases, value: v })
        .collect())
}

/// Scans v = n, n+1, ... and returns the first value that is a sum of n
/// positive m-th powers in at least t ways, or
/// [`Error::NotFoundWithinLimit`] if no value below `limit` qualifies.
pub fn taxicab(n: u64, m: u32, t: u64, limit: u64, policy: RepsPolicy) -> Result<TaxicabResult> {
    check_pre(n >= 1 && m >= 1 && t >= 1, "n, m, t must all be >= 1")?;
    check_pre(limit > n, "limit must exceed n")?;
    for v in n..limit {
        let count = Search::new(m, t).count(v, n, integer_root(v, m));
        if count >= t {
            let max_count = match policy {
                RepsPolicy::FirstT => t,
                RepsPolicy::All => u64::MAX,
            };
            let representations = enumerate_representations(v, n, m, max_count)?;
            return Ok(TaxicabResult {
                n,
                m,
                t,
                value: v,
                representations,
                search_ceiling: v + 1,
            });
        }
    }
    Err(Error::NotFoundWithinLimit { n, limit })
}

/// Least n <= n_limit for which T(n, m, t) exists below v_limit. Smaller n
/// where nothing is found within the limit are skipped, since T(n, m, t)
/// genuinely fails to exist for small n.
pub fn min_terms(m: u32, t: u64, n_limit: u64, v_limit: u64) -> Result<u64> {
    check_pre(n_limit >= 1 && v_limit >= 1, "limits must be positive")?;
    for n in 1..=n_limit {
        match taxicab(n, m, t, v_limit.max(n + 1), RepsPolicy::FirstT) {
            Ok(_) => return Ok(n),
            Err(Error::NotFoundWithinLimit { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::NotFoundWithinLimit {
        n: n_limit,
        limit: v_limit,
    })
}

/// Computes T(n, m, t) for n0 <= n <= n_max + window, derives the drop set
/// D = {n : T(n+1) < T(n) + 1}, and verifies the arithmetic tail
/// T(seed + k) = T(seed) + k over the requested window.
pub fn drops(m: u32, t: u64, n_max: u64, v_limit: u64, window: u64) -> Result<DropReport> {
    check_pre(window >= 1, "window must be >= 1")?;
    let mut n0 = None;
    let mut sequence = Vec::new();
    for n in 1..=n_max {
        match taxicab(n, m, t, v_limit.max(n + 1), RepsPolicy::FirstT) {
            Ok(r) => {
                n0 = Some(n);
                sequence.push((n, r.value));
                break;
            }
            Err(Error::NotFoundWithinLimit { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    let n0 = n0.ok_or(Error::NotFoundWithinLimit {
        n: n_max,
        limit: v_limit,
    })?;

    // Past n0, appending a 1 to every witness shows T(n+1) <= T(n) + 1, so a
    // scan bounded by the previous value + 2 always terminates.
    let mut prev = sequence[0].1;
    for n in n0 + 1..=n_max + window {
        let r = taxicab(n, m, t, prev + 2, RepsPolicy::FirstT)?;
        sequence.push((n, r.value));
        prev = r.value;
    }

    let mut drop_set = BTreeSet::new();
    for pair in sequence.windows(2) {
        let ((n, tn), (_, tn1)) = (pair[0], pair[1]);
        if tn1 < tn + 1 {
            drop_set.insert(n);
        }
    }
    let empirical_seed = drop_set.iter().next_back().map_or(n0, |&n| n + 1);
    let value_at = |n: u64| sequence[(n - n0) as usize].1;
    let seed_value = value_at(empirical_seed);
    let last_n = n_max + window;
    let mut stabilization_window = 0;
    for k in 1..=window {
        if empirical_seed + k > last_n || value_at(empirical_seed + k) != seed_value + k {
            break;
        }
        stabilization_window = k;
    }
    Ok(DropReport {
        m,
        t,
        n0,
        taxicab_sequence: sequence,
        drops: drop_set,
        empirical_seed,
        seed_value,
        stabilization_window,
        window_truncated: n_max < empirical_seed + window,
    })
}

fn check_pre(cond: bool, msg: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Precondition(msg.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counting_examples() {
        assert_eq!(count_representations(1729, 2, 3, u64::MAX).unwrap(), 2);
        assert_eq!(count_representations(5, 5, 2, u64::MAX).unwrap(), 1);
        assert_eq!(count_representations(32, 8, 2, u64::MAX).unwrap(), 4);
    }

    #[test]
    fn counting_saturates_at_cap() {
        assert_eq!(count_representations(32, 8, 2, 2).unwrap(), 2);
    }

    #[test]
    fn enumeration_examples() {
        let reps = enumerate_representations(20, 5, 2, u64::MAX).unwrap();
        let bases: Vec<_> = reps.iter().map(|r| r.bases.clone()).collect();
        assert_eq!(bases, vec![vec![4, 1, 1, 1, 1], vec![2, 2, 2, 2, 2]]);

        let reps = enumerate_representations(72, 9, 3, u64::MAX).unwrap();
        let bases: Vec<_> = reps.iter().map(|r| r.bases.clone()).collect();
        assert_eq!(
            bases,
            vec![vec![4, 1, 1, 1, 1, 1, 1, 1, 1], vec![2, 2, 2, 2, 2, 2, 2, 2, 2]]
        );

        assert!(enumerate_representations(3, 2, 5, u64::MAX).unwrap().is_empty());
    }

    #[test]
    fn taxicab_examples() {
        assert_eq!(taxicab(2, 3, 2, 2000, RepsPolicy::FirstT).unwrap().value, 1729);
        assert_eq!(taxicab(3, 2, 2, 100, RepsPolicy::FirstT).unwrap().value, 27);
        assert_eq!(taxicab(7, 3, 2, 500, RepsPolicy::FirstT).unwrap().value, 131);
        assert!(matches!(
            taxicab(1, 3, 2, 1_000_000, RepsPolicy::FirstT),
            Err(Error::NotFoundWithinLimit { .. })
        ));
    }

    #[test]
    fn taxicab_policy_controls_representation_count() {
        let first = taxicab(8, 2, 3, 100, RepsPolicy::FirstT).unwrap();
        let all = taxicab(8, 2, 3, 100, RepsPolicy::All).unwrap();
        assert_eq!(first.value, 32);
        assert_eq!(first.representations.len(), 3);
        assert_eq!(all.representations.len(), 4);
    }

    #[test]
    fn min_terms_examples() {
        assert_eq!(min_terms(3, 2, 10, 100_000).unwrap(), 2);
        assert_eq!(min_terms(2, 2, 10, 10_000).unwrap(), 2);
    }

    #[test]
    fn drops_for_cubes_two_ways() {
        let r = drops(3, 2, 12, 2000, 3).unwrap();
        assert_eq!(r.n0, 2);
        assert_eq!(r.drops, BTreeSet::from([2, 3, 4, 6, 8]));
        assert_eq!(r.empirical_seed, 9);
        assert_eq!(r.seed_value, 72);
        assert_eq!(r.stabilization_window, 3);
        assert!(!r.window_truncated);
    }

    #[test]
    fn drops_for_squares_two_ways() {
        let r = drops(2, 2, 10, 200, 3).unwrap();
        assert_eq!(r.empirical_seed, 5);
        assert_eq!(r.seed_value, 20);
    }

    #[test]
    fn drops_for_squares_three_ways() {
        // 28 = 5^2 + 1 + 1 + 1 = 4^2 + 2^2 + 2^2 + 2^2 = 3^2 + 3^2 + 3^2 + 1,
        // and T(n, 2, 3) = n + 24 from there on: the observed seed is 4.
        let r = drops(2, 3, 12, 200, 3).unwrap();
        assert_eq!(r.n0, 3);
        assert_eq!(r.empirical_seed, 4);
        assert_eq!(r.seed_value, 28);
    }

    #[test]
    fn roots_are_exact() {
        for (v, m, r) in [(63u64, 3u32, 3u64), (64, 3, 4), (65, 3, 4), (1, 5, 1), (0, 2, 0)] {
            assert_eq!(integer_root(v, m), r);
        }
    }
}
