//! Census of integer vectors with concentrated signed sums.

use super::types::{phi_p, GaussianIntVector};
use crate::concentration::lcf_exact;
use crate::error::{Error, Result};
use crate::numerics::NoiseDistribution;
use std::collections::HashSet;

/// Enumerates the box {|Re|, |Im| ≤ coord_bound}^n, keeps the vectors with
/// exact unit-radius concentration at least `rho`, and reports the kept set
/// together with the cardinality of its image under reduction mod p.
pub fn enumerate_v_rho(
    n: usize,
    coord_bound: i64,
    dist: &NoiseDistribution,
    rho: f64,
    p: u64,
) -> Result<(Vec<GaussianIntVector>, usize)> {
    if coord_bound < 0 {
        return Err(Error::precondition("coordinate bound must be nonnegative"));
    }
    let side = 2 * coord_bound + 1;
    let total = (side as f64).powi(2 * n as i32);
    if total > 1e6 {
        return Err(Error::capability("box enumeration requires (2b+1)^(2n) ≤ 1e6"));
    }
    if !dist.is_discrete() {
        return Err(Error::capability("enumerate_v_rho needs a discrete law"));
    }
    let mut kept = Vec::new();
    let mut image: HashSet<Vec<(u64, u64)>> = HashSet::new();
    let mut digits = vec![0i64; 2 * n];
    loop {
        let entries: Vec<(i64, i64)> = (0..n)
            .map(|i| (digits[2 * i] - coord_bound, digits[2 * i + 1] - coord_bound))
            .collect();
        let v = GaussianIntVector::new(entries);
        let est = lcf_exact(dist, &v.to_complex(), 1.0)?;
        if est.value >= rho - 1e-12 {
            image.insert(phi_p(&v, p)?.entries().to_vec());
            kept.push(v);
        }
        let mut carry = true;
        for d in digits.iter_mut() {
            if carry {
                *d += 1;
                if *d == side {
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
    Ok((kept, image.len()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::C64;

    #[test]
    fn census_matches_per_vector_rule_at_n_1() {
        let d = NoiseDistribution::rademacher();
        let (kept, image) = enumerate_v_rho(1, 2, &d, 1.0, 5).unwrap();
        // ρ₁((a)) = 1 iff both atoms ±a fit in one closed unit ball iff |a| ≤ 1.
        let expect: Vec<(i64, i64)> = vec![(-1, 0), (0, -1), (0, 0), (0, 1), (1, 0)];
        let mut got: Vec<(i64, i64)> = kept.iter().map(|v| v.entries[0]).collect();
        got.sort();
        assert_eq!(got, expect);
        assert_eq!(image, 5);
        // Independent hand rule over the whole box:
        for a in -2i64..=2 {
            for b in -2i64..=2 {
                let in_set = got.binary_search(&(a, b)).is_ok();
                let modulus_sq = a * a + b * b;
                assert_eq!(in_set, modulus_sq <= 1, "coordinate ({a},{b})");
            }
        }
    }

    #[test]
    fn threshold_above_one_empties_the_census() {
        let d = NoiseDistribution::rademacher();
        let (kept, image) = enumerate_v_rho(1, 2, &d, 1.0 + 1e-6, 5).unwrap();
        assert!(kept.is_empty());
        assert_eq!(image, 0);
    }

    #[test]
    fn ones_pair_survives_three_quarters() {
        let d = NoiseDistribution::rademacher();
        let (kept, _) = enumerate_v_rho(2, 1, &d, 0.75, 5).unwrap();
        assert!(kept
            .iter()
            .any(|v| v.entries == vec![(1, 0), (1, 0)]));
        // Sanity: ρ₁((1,1)) = 3/4 exactly.
        let v = GaussianIntVector::new(vec![(1, 0), (1, 0)]);
        assert_eq!(lcf_exact(&d, &v.to_complex(), 1.0).unwrap().value, 0.75);
        let _ = C64::new(0.0, 0.0);
    }

    #[test]
    fn budget_gate() {
        let d = NoiseDistribution::rademacher();
        assert!(enumerate_v_rho(4, 3, &d, 0.5, 5).is_err());
    }
}
