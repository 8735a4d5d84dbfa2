//! B-set membership and the exhaustive cardinality bound
//! |B^α_{k,s,≥t}(n)| ≤ (αt)^{s−n} p^{n+s}.

use super::rk::rk_alpha;
use super::types::{CountingReport, FpVector};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use rayon::prelude::*;

/// True iff R_k^α(v_I) ≥ t·2^{2k}·|I|^{2k}/p for every subset I of the
/// coordinates with |I| ≥ s.
///
/// The threshold comparison is exact: R·p ≥ t·2^{2k}·|I|^{2k} in integers.
pub fn b_set_membership(v: &FpVector, k: usize, s: usize, t: u64, alpha: f64) -> Result<bool> {
    let n = v.len();
    if n > 20 {
        return Err(Error::capability("subset enumeration supports n ≤ 20"));
    }
    if s > n {
        return Ok(true); // no qualifying I
    }
    let p = v.p();
    for mask in 1u32..(1u32 << n) {
        let size = mask.count_ones() as usize;
        if size < s {
            continue;
        }
        let idx: Vec<usize> = (0..n).filter(|&i| mask & (1 << i) != 0).collect();
        let restricted = v.restrict(&idx)?;
        let r = rk_alpha(&restricted, k, alpha)?;
        let rhs: u128 = (t as u128)
            .checked_mul(1u128 << (2 * k))
            .and_then(|x| x.checked_mul((size as u128).pow(2 * k as u32)))
            .ok_or_else(|| Error::capability("threshold overflow"))?;
        if r.checked_mul(p as u128).ok_or_else(|| Error::capability("count overflow"))? < rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone)]
pub struct CountingLemmaReport {
    pub n: usize,
    pub p: u64,
    pub k: usize,
    pub s: usize,
    pub t: u64,
    pub alpha: f64,
    /// Exact number of members among all p^{2n} vectors.
    pub cardinality: u64,
    /// (αt)^{s−n} p^{n+s}, exact.
    pub bound: BigRational,
    pub pass: bool,
    /// s = n makes the bound p^{2n}, which always holds.
    pub vacuous: bool,
}

impl CountingLemmaReport {
    /// Uniform summary shape shared by the counting checks.
    pub fn as_counting_report(&self) -> CountingReport {
        CountingReport {
            k: self.k,
            s: self.s,
            t: self.t,
            alpha: self.alpha,
            p: self.p,
            r_values: vec![("census-cardinality".to_string(), self.cardinality as u128)],
            bound: self.bound.to_string(),
            pass: self.pass,
        }
    }
}

/// Exhaustively enumerates (F_p + iF_p)^n, counts B-set members, and compares
/// against the exact rational bound.
pub fn counting_lemma_verify(
    n: usize,
    p: u64,
    k: usize,
    s: usize,
    t: u64,
    alpha: f64,
) -> Result<CountingLemmaReport> {
    let space = (p as f64).powi(2 * n as i32);
    if space > 1e6 {
        return Err(Error::capability("exhaustive regime requires p^(2n) ≤ 1e6"));
    }
    // Gate the per-vector signed-sum budget up front so the parallel sweep
    // cannot hit it mid-flight.
    if (2.0 * n as f64).powi(2 * k as i32) > 1e9 {
        return Err(Error::capability("(2n)^(2k) exceeds the enumeration budget"));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::precondition("counting lemma requires alpha ∈ (0,1)"));
    }
    if s > n || s == 0 {
        return Err(Error::precondition("counting lemma requires 1 ≤ s ≤ n"));
    }
    let total = space as u64;
    let cardinality: u64 = (0..total)
        .into_par_iter()
        .map(|code| {
            let mut c = code;
            let mut entries = Vec::with_capacity(n);
            for _ in 0..n {
                let re = c % p;
                c /= p;
                let im = c % p;
                c /= p;
                entries.push((re, im));
            }
            let v = FpVector::new(p, entries).expect("reduced residues");
            u64::from(b_set_membership(&v, k, s, t, alpha).expect("within budget"))
        })
        .sum();

    let alpha_rat = BigRational::from_float(alpha)
        .ok_or_else(|| Error::precondition("alpha must be finite"))?;
    let at = alpha_rat * BigRational::from_integer(BigInt::from(t));
    // (αt)^{s−n} with s ≤ n: p^{n+s} / (αt)^{n−s}.
    let mut bound = BigRational::from_integer(BigInt::from(p).pow((n + s) as u32));
    let mut denom = BigRational::one();
    for _ in 0..(n - s) {
        denom *= at.clone();
    }
    bound /= denom;
    let pass = BigRational::from_integer(BigInt::from(cardinality)) <= bound;
    Ok(CountingLemmaReport {
        n,
        p,
        k,
        s,
        t,
        alpha,
        cardinality,
        bound,
        pass,
        vacuous: s == n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ones_pair_membership_thresholds() {
        // v = (1,1) over F₅, k=1, s=2, t=1, α=1/2: the only qualifying I is
        // {1,2} with R = 4 and threshold 1·4·4/5 = 16/5, so membership holds.
        let v = FpVector::new(5, vec![(1, 0), (1, 0)]).unwrap();
        assert!(b_set_membership(&v, 1, 2, 1, 0.5).unwrap());
        // Raising t to 4 pushes the threshold to 64/5 > 4: membership fails.
        assert!(!b_set_membership(&v, 1, 2, 4, 0.5).unwrap());
    }

    #[test]
    fn vacuous_when_s_exceeds_n() {
        let v = FpVector::new(5, vec![(1, 0), (1, 0)]).unwrap();
        assert!(b_set_membership(&v, 1, 3, 1, 0.5).unwrap());
    }

    #[test]
    fn zero_vector_membership() {
        // v = 0 over F₃, k=1, s=2, t=1, α=−1: R^{−1} = 16 ≥ 4·4/3.
        let v = FpVector::new(3, vec![(0, 0), (0, 0)]).unwrap();
        assert!(b_set_membership(&v, 1, 2, 1, -1.0).unwrap());
    }

    #[test]
    fn singleton_subsets_force_emptiness_for_positive_alpha() {
        // With s = 1 and α > 0, I = {i} caps the distinct count at 1 < ⌈(1+α)k⌉,
        // so R vanishes and no vector is a member.
        let v = FpVector::new(3, vec![(0, 0), (0, 0)]).unwrap();
        assert!(!b_set_membership(&v, 1, 1, 1, 0.5).unwrap());
    }

    #[test]
    fn counting_lemma_small_case_bound() {
        let rep = counting_lemma_verify(2, 3, 1, 1, 1, 0.5).unwrap();
        // Bound = (1/2)^{-1}·3³ = 54 < 81 = total space: non-vacuous.
        assert_eq!(rep.bound, BigRational::from_integer(54.into()));
        assert!(rep.pass);
        assert!(!rep.vacuous);
        assert!(rep.cardinality <= 54);
    }

    #[test]
    fn counting_lemma_vacuous_at_s_equals_n() {
        let rep = counting_lemma_verify(2, 3, 1, 2, 1, 0.5).unwrap();
        assert!(rep.vacuous);
        assert!(rep.pass);
        assert_eq!(rep.bound, BigRational::from_integer(81.into())); // (αt)⁰·3⁴ = p^{2n}
    }

    #[test]
    fn monotone_in_t_and_alpha() {
        // Decreasing t or alpha never removes membership.
        let p = 5u64;
        for code in 0..(p * p * p * p) {
            let mut c = code;
            let mut entries = Vec::new();
            for _ in 0..2 {
                let re = c % p;
                c /= p;
                let im = c % p;
                c /= p;
                entries.push((re, im));
            }
            let v = FpVector::new(p, entries).unwrap();
            if b_set_membership(&v, 1, 1, 2, 0.5).unwrap() {
                assert!(b_set_membership(&v, 1, 1, 1, 0.5).unwrap());
                assert!(b_set_membership(&v, 1, 1, 2, 0.25).unwrap());
            }
        }
    }

    #[test]
    fn counting_report_summary_round_trips() {
        let rep = counting_lemma_verify(2, 3, 1, 1, 1, 0.5).unwrap();
        let summary = rep.as_counting_report();
        assert_eq!(summary.bound, "54");
        assert_eq!(summary.r_values[0].1, rep.cardinality as u128);
        assert!(summary.pass);
    }

    #[test]
    fn regime_gate() {
        assert!(counting_lemma_verify(4, 11, 1, 1, 1, 0.5).is_err());
        assert!(counting_lemma_verify(2, 3, 16, 1, 1, 0.5).is_err());
    }
}
