//! Distance to the Gaussian-integer lattice (Z+iZ)^n.

use crate::counting::GaussianIntVector;
use crate::error::{Error, Result};
use crate::numerics::{C64, ComplexVec};

/// Rounds half away from zero; the documented tie rule on each of Re and Im.
fn round_away(x: f64) -> f64 {
    x.round()
}

/// Nearest Gaussian-integer vector and the Euclidean distance to it.
pub fn lattice_dist(v: &ComplexVec) -> Result<(f64, GaussianIntVector)> {
    let mut entries = Vec::with_capacity(v.len());
    let mut dist_sq = 0.0;
    for &z in v.entries() {
        let re = round_away(z.re);
        let im = round_away(z.im);
        if re.abs() >= 9.2e18 || im.abs() >= 9.2e18 {
            return Err(Error::precondition("coordinate too large for integer rounding"));
        }
        dist_sq += (z - C64::new(re, im)).norm_sqr();
        entries.push((re as i64, im as i64));
    }
    Ok((dist_sq.sqrt(), GaussianIntVector::new(entries)))
}

/// dist²(η·v, (Z+iZ)^n) without materializing the scaled vector.
pub(crate) fn lattice_dist_sq_scaled(entries: &[C64], eta: C64) -> f64 {
    entries
        .iter()
        .map(|&z| {
            let w = z * eta;
            let dr = w.re - w.re.round();
            let di = w.im - w.im.round();
            dr * dr + di * di
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn integer_vectors_are_on_the_lattice() {
        let v = ComplexVec::new(vec![C64::new(3.0, -2.0), C64::new(0.0, 5.0)]).unwrap();
        let (d, m) = lattice_dist(&v).unwrap();
        assert_eq!(d, 0.0);
        assert_eq!(m.entries, vec![(3, -2), (0, 5)]);
    }

    #[test]
    fn half_ties_round_away_from_zero() {
        let v = ComplexVec::new(vec![C64::new(0.5, 0.5)]).unwrap();
        let (d, m) = lattice_dist(&v).unwrap();
        assert_eq!(m.entries, vec![(1, 1)]);
        assert!((d - 0.5f64.sqrt()).abs() < 1e-15);

        let v = ComplexVec::new(vec![C64::new(-0.5, -1.5)]).unwrap();
        let (_, m) = lattice_dist(&v).unwrap();
        assert_eq!(m.entries, vec![(-1, -2)]);
    }

    #[test]
    fn quarter_offsets() {
        let v = ComplexVec::new(vec![C64::new(0.25, 0.0), C64::new(0.0, 0.25)]).unwrap();
        let (d, m) = lattice_dist(&v).unwrap();
        assert_eq!(m.entries, vec![(0, 0), (0, 0)]);
        assert!((d - 0.125f64.sqrt()).abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn invariant_under_gaussian_integer_shifts(
            coords in proptest::collection::vec((-0.49f64..0.49, -0.49f64..0.49), 1..5),
            shifts in proptest::collection::vec((-5i64..=5, -5i64..=5), 1..5),
        ) {
            let n = coords.len().min(shifts.len());
            let v = ComplexVec::new(
                coords[..n].iter().map(|&(a, b)| C64::new(a, b)).collect()
            ).unwrap();
            let shifted = ComplexVec::new(
                coords[..n]
                    .iter()
                    .zip(&shifts[..n])
                    .map(|(&(a, b), &(sa, sb))| C64::new(a + sa as f64, b + sb as f64))
                    .collect()
            ).unwrap();
            let (d0, _) = lattice_dist(&v).unwrap();
            let (d1, _) = lattice_dist(&shifted).unwrap();
            prop_assert!((d0 - d1).abs() < 1e-12);
        }
    }
}
