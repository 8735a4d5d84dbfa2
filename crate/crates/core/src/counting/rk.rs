//! Exact counts of signed zero sums: the number of pairs of an index
//! sequence (i₁, …, i_{2k}) ∈ [n]^{2k} and a sign sequence ε ∈ {±1}^{2k}
//! with ε₁v_{i₁} + … + ε_{2k}v_{i_{2k}} = 0 in F_p + iF_p and at least
//! ⌈(1+α)k⌉ distinct indices.

use super::types::{FpElem, FpVector};
use crate::error::{Error, Result};
use std::collections::HashMap;

/// Distinctness threshold ⌈(1+α)k⌉; counts are integers so the ceiling is
/// the literal reading of "≥ (1+α)k".
fn distinct_threshold(k: usize, alpha: f64) -> usize {
    ((1.0 + alpha) * k as f64).ceil() as usize
}

fn add(p: u64, a: FpElem, b: FpElem) -> FpElem {
    ((a.0 + b.0) % p, (a.1 + b.1) % p)
}

fn neg(p: u64, a: FpElem) -> FpElem {
    ((p - a.0) % p, (p - a.1) % p)
}

/// Half-sequence table: (partial sum) → (index bitmask → multiplicity).
fn half_table(v: &FpVector, k: usize) -> HashMap<FpElem, HashMap<u64, u128>> {
    let p = v.p();
    let n = v.len();
    // Seed with the empty sequence, then extend one slot at a time.
    let mut table: HashMap<(FpElem, u64), u128> = HashMap::new();
    table.insert(((0, 0), 0u64), 1);
    for _ in 0..k {
        let mut next: HashMap<(FpElem, u64), u128> = HashMap::with_capacity(table.len() * n * 2);
        for (&(sum, mask), &count) in &table {
            for (i, &vi) in v.entries().iter().enumerate() {
                let m = mask | (1u64 << i);
                for signed in [vi, neg(p, vi)] {
                    let s = add(p, sum, signed);
                    *next.entry((s, m)).or_insert(0) += count;
                }
            }
        }
        table = next;
    }
    let mut grouped: HashMap<FpElem, HashMap<u64, u128>> = HashMap::new();
    for ((sum, mask), count) in table {
        *grouped.entry(sum).or_default().entry(mask).or_insert(0) += count;
    }
    grouped
}

/// Exact R_k^α(v) by meet-in-the-middle over half-sequences of length k.
///
/// Budget: (2n)^{2k} ≤ 10⁹ and n ≤ 63 (index sets are tracked as bitmasks).
pub fn rk_alpha(v: &FpVector, k: usize, alpha: f64) -> Result<u128> {
    if v.is_empty() {
        return Ok(0);
    }
    if !((-1.0..=1.0).contains(&alpha)) {
        return Err(Error::precondition("alpha must lie in [-1, 1]"));
    }
    if k == 0 {
        return Err(Error::precondition("k must be at least 1"));
    }
    let n = v.len();
    if n > 63 {
        return Err(Error::capability("rk_alpha supports n ≤ 63"));
    }
    let budget = (2.0 * n as f64).powi(2 * k as i32);
    if budget > 1e9 {
        return Err(Error::capability(format!(
            "(2n)^(2k) = {budget:.3e} exceeds the 1e9 enumeration budget"
        )));
    }
    let threshold = distinct_threshold(k, alpha);
    let halves = half_table(v, k);
    let p = v.p();
    let mut total: u128 = 0;
    for (sum, masks1) in &halves {
        let target = neg(p, *sum);
        let Some(masks2) = halves.get(&target) else { continue };
        if threshold <= 1 {
            // Any nonempty sequence qualifies; skip the mask join.
            let c1: u128 = masks1.values().sum();
            let c2: u128 = masks2.values().sum();
            total += c1 * c2;
            continue;
        }
        for (&m1, &c1) in masks1 {
            for (&m2, &c2) in masks2 {
                if ((m1 | m2).count_ones() as usize) >= threshold {
                    total += c1 * c2;
                }
            }
        }
    }
    Ok(total)
}

/// Direct enumeration over all (2n)^{2k} (index, sign) sequences; the
/// independent oracle for `rk_alpha`.
pub fn rk_alpha_naive(v: &FpVector, k: usize, alpha: f64) -> Result<u128> {
    let n = v.len();
    if n == 0 {
        return Ok(0);
    }
    let slots = 2 * k;
    let choices = 2 * n; // index × sign per slot
    if (choices as f64).powi(slots as i32) > 2e8 {
        return Err(Error::capability("naive budget exceeded"));
    }
    let p = v.p();
    let threshold = distinct_threshold(k, alpha);
    let mut total: u128 = 0;
    let mut pick = vec![0usize; slots];
    loop {
        let mut sum: FpElem = (0, 0);
        let mut mask: u64 = 0;
        for &c in &pick {
            let i = c / 2;
            let vi = v.entries()[i];
            let term = if c % 2 == 0 { vi } else { neg(p, vi) };
            sum = add(p, sum, term);
            mask |= 1 << i;
        }
        if sum == (0, 0) && (mask.count_ones() as usize) >= threshold {
            total += 1;
        }
        let mut carry = true;
        for d in pick.iter_mut() {
            if carry {
                *d += 1;
                if *d == choices {
                    *d = 0;
                } else {
                    carry = false;
                }
            }
        }
        if carry {
            break;
        }
    }
    Ok(total)
}

#[derive(Debug, Clone)]
pub struct RkComparisonReport {
    /// R_k^{−1}(v).
    pub lhs: u128,
    /// R_k^α(v).
    pub rk_alpha: u128,
    /// ⌈(40·k^{1−α}·n^{1+α})^k⌉, saturating at u128::MAX.
    pub combinatorial_term: u128,
    pub pass: bool,
}

/// Checks R_k^{−1}(v) ≤ R_k^α(v) + ⌈(40 k^{1−α} n^{1+α})^k⌉.
pub fn rk_comparison_check(v: &FpVector, k: usize, alpha: f64) -> Result<RkComparisonReport> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::precondition("rk_comparison_check requires alpha ∈ [0, 1]"));
    }
    let lhs = rk_alpha(v, k, -1.0)?;
    let ra = rk_alpha(v, k, alpha)?;
    let n = v.len() as f64;
    let kf = k as f64;
    let term_f = (40.0 * kf.powf(1.0 - alpha) * n.powf(1.0 + alpha)).powi(k as i32);
    let term = if term_f >= u128::MAX as f64 { u128::MAX } else { term_f.ceil() as u128 };
    Ok(RkComparisonReport {
        lhs,
        rk_alpha: ra,
        combinatorial_term: term,
        pass: lhs <= ra.saturating_add(term),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn fp(p: u64, entries: &[(u64, u64)]) -> FpVector {
        FpVector::new(p, entries.to_vec()).unwrap()
    }

    #[test]
    fn ones_pair_all_index_sequences() {
        let v = fp(5, &[(1, 0), (1, 0)]);
        assert_eq!(rk_alpha(&v, 1, -1.0).unwrap(), 8);
        assert_eq!(rk_alpha(&v, 1, 1.0).unwrap(), 4);
    }

    #[test]
    fn mixed_entries_only_cancel_on_repeats() {
        let v = fp(5, &[(1, 0), (2, 0)]);
        assert_eq!(rk_alpha(&v, 1, -1.0).unwrap(), 4);
    }

    #[test]
    fn wraparound_sums_count() {
        // 1 + 4 ≡ 0 (mod 5): cross terms cancel with matching signs.
        let v = fp(5, &[(1, 0), (4, 0)]);
        // (i,i) opposite-sign pairs: 4; (1,2)&(2,1) same-sign pairs: +1+4 and −1−4 → 2 each.
        assert_eq!(rk_alpha(&v, 1, -1.0).unwrap(), 8);
    }

    #[test]
    fn zero_vector_counts_everything() {
        let v = fp(3, &[(0, 0), (0, 0)]);
        assert_eq!(rk_alpha(&v, 1, -1.0).unwrap(), 16);
        assert_eq!(rk_alpha(&v, 1, 0.0).unwrap(), 16);
        assert_eq!(rk_alpha(&v, 1, 1.0).unwrap(), 8);
    }

    #[test]
    fn rk_comparison_on_the_ones_pair() {
        let v = fp(5, &[(1, 0), (1, 0)]);
        let rep = rk_comparison_check(&v, 1, 0.5).unwrap();
        assert_eq!(rep.lhs, 8);
        assert_eq!(rep.rk_alpha, 4);
        assert_eq!(rep.combinatorial_term, 114); // ⌈40·2^{3/2}⌉
        assert!(rep.pass);
    }

    #[test]
    fn rk_comparison_zero_vector_equality_margin() {
        let v = fp(3, &[(0, 0), (0, 0)]);
        let rep = rk_comparison_check(&v, 1, 0.0).unwrap();
        assert_eq!(rep.lhs, 16);
        assert_eq!(rep.rk_alpha, 16);
        assert_eq!(rep.combinatorial_term, 80);
        assert!(rep.pass);
    }

    #[test]
    fn exhaustive_f3_squared_comparison() {
        for a in 0..3u64 {
            for b in 0..3u64 {
                for c in 0..3u64 {
                    for d in 0..3u64 {
                        let v = fp(3, &[(a, b), (c, d)]);
                        for alpha in [0.0, 0.5] {
                            assert!(rk_comparison_check(&v, 1, alpha).unwrap().pass);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn budget_gate() {
        let v = fp(5, &[(1, 0); 40]);
        assert!(rk_alpha(&v, 4, 0.0).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn mitm_matches_naive(
            entries in proptest::collection::vec((0u64..5, 0u64..5), 1..5),
            k in 1usize..3,
            alpha_idx in 0usize..5,
        ) {
            let alpha = [-1.0, -0.5, 0.0, 0.5, 1.0][alpha_idx];
            let v = fp(5, &entries);
            let fast = rk_alpha(&v, k, alpha).unwrap();
            let slow = rk_alpha_naive(&v, k, alpha).unwrap();
            prop_assert_eq!(fast, slow);
        }

        #[test]
        fn invariant_under_permutation_and_negation(
            entries in proptest::collection::vec((0u64..7, 0u64..7), 2..6),
            k in 1usize..3,
        ) {
            let p = 7u64;
            let v = fp(p, &entries);
            let mut rev = entries.clone();
            rev.reverse();
            let vr = fp(p, &rev);
            let neg: Vec<(u64, u64)> = entries
                .iter()
                .map(|&(a, b)| (((p - a) % p), ((p - b) % p)))
                .collect();
            let vn = fp(p, &neg);
            let base = rk_alpha(&v, k, -1.0).unwrap();
            prop_assert_eq!(base, rk_alpha(&vr, k, -1.0).unwrap());
            prop_assert_eq!(base, rk_alpha(&vn, k, -1.0).unwrap());
        }

        #[test]
        fn invariant_under_nonzero_scaling(
            entries in proptest::collection::vec((0u64..5, 0u64..5), 1..5),
            c in 1u64..5,
        ) {
            let p = 5u64;
            let v = fp(p, &entries);
            let scaled: Vec<(u64, u64)> = entries
                .iter()
                .map(|&(a, b)| ((a * c) % p, (b * c) % p))
                .collect();
            let vs = fp(p, &scaled);
            prop_assert_eq!(
                rk_alpha(&v, 2, 0.5).unwrap(),
                rk_alpha(&vs, 2, 0.5).unwrap()
            );
        }
    }
}
