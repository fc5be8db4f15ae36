//! Seeded random models for property checks.

use num::rational::BigRational;
use num::{BigInt, One, Zero};
use rand::Rng;

use crate::simple_choice::{Outcome, TwoDensityModel};
use crate::stable::{DiscreteFamilyModel, FamilyOutcome};

fn int(k: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(k))
}

/// Random two-density model with `outcomes` support points and rational entries.
///
/// Each density is a vector of integer counts in `lo..=9` normalized to one and
/// divided by a random base weight in `1..=3`. With `lo = 0` the model can have
/// outcomes of ratio `0` or `∞` and outcomes null under both densities.
pub fn random_two_density<R: Rng>(rng: &mut R, outcomes: usize, lo: i64) -> TwoDensityModel<BigRational> {
    loop {
        let c0: Vec<i64> = (0..outcomes).map(|_| rng.random_range(lo..=9)).collect();
        let c1: Vec<i64> = (0..outcomes).map(|_| rng.random_range(lo..=9)).collect();
        let (s0, s1): (i64, i64) = (c0.iter().sum(), c1.iter().sum());
        if s0 == 0 || s1 == 0 {
            continue;
        }
        let rows = (0..outcomes)
            .map(|i| {
                let w = int(rng.random_range(1..=3));
                Outcome {
                    label: format!("w{i}"),
                    p0: BigRational::new(BigInt::from(c0[i]), BigInt::from(s0)) / w.clone(),
                    p1: BigRational::new(BigInt::from(c1[i]), BigInt::from(s1)) / w.clone(),
                    weight: w,
                }
            })
            .collect();
        return TwoDensityModel::new(rows).expect("normalized by construction");
    }
}

/// Random family with a monotone likelihood ratio in `t = 0, 1, ...`.
///
/// Rows are exponential tilts `h(t) r_θ^t` of a random base `h` with integer
/// values in `min_base..=4`, for nondecreasing rational `r_θ`. Some levels are split into
/// two outcomes. With `half_lines`, the `Θ0` rows are zeroed on a prefix and
/// the `Θ1` rows on a suffix of the levels.
pub fn random_mlr_family<R: Rng>(
    rng: &mut R,
    levels: usize,
    thetas: usize,
    half_lines: bool,
    min_base: i64,
) -> DiscreteFamilyModel<BigRational> {
    assert!(levels >= 2 && thetas >= 2);
    loop {
        let h: Vec<i64> = (0..levels).map(|_| rng.random_range(min_base..=4)).collect();
        let mut ratios: Vec<BigRational> = Vec::with_capacity(thetas);
        let mut r = BigRational::new(BigInt::from(rng.random_range(1..=3)), BigInt::from(4));
        for _ in 0..thetas {
            ratios.push(r.clone());
            r += BigRational::new(BigInt::from(rng.random_range(0..=2)), BigInt::from(4));
        }
        let split = rng.random_range(1..thetas);
        let (cut_lo, cut_hi) = if half_lines {
            let a = rng.random_range(0..levels / 2 + 1);
            let b = rng.random_range(0..(levels - a).max(1));
            (a, levels - b)
        } else {
            (0, levels)
        };
        let mut rows: Vec<Vec<BigRational>> = ratios
            .iter()
            .enumerate()
            .map(|(th, r)| {
                (0..levels)
                    .map(|t| {
                        let outside = (th >= split && t < cut_lo) || (th < split && t >= cut_hi);
                        if outside {
                            BigRational::zero()
                        } else {
                            let mut v = int(h[t]);
                            for _ in 0..t {
                                v *= r.clone();
                            }
                            v
                        }
                    })
                    .collect()
            })
            .collect();
        if rows.iter().any(|row| row.iter().all(|v| v.is_zero())) {
            continue;
        }
        for row in rows.iter_mut() {
            let total = row.iter().fold(BigRational::zero(), |acc, v| acc + v.clone());
            for v in row.iter_mut() {
                *v = v.clone() / total.clone();
            }
        }
        // Split some levels into two outcomes carrying one third and two thirds.
        let mut outcomes = Vec::new();
        let mut density: Vec<Vec<BigRational>> = vec![Vec::new(); thetas];
        for t in 0..levels {
            let parts: Vec<BigRational> = if rng.random_bool(0.3) {
                vec![BigRational::new(BigInt::one(), BigInt::from(3)), BigRational::new(BigInt::from(2), BigInt::from(3))]
            } else {
                vec![BigRational::one()]
            };
            for (j, part) in parts.iter().enumerate() {
                let weight = int(rng.random_range(1..=2));
                outcomes.push(FamilyOutcome { label: format!("t{t}_{j}"), t: int(t as i64), weight: weight.clone() });
                for (th, row) in rows.iter().enumerate() {
                    density[th].push(row[t].clone() * part.clone() / weight.clone());
                }
            }
        }
        let labels = (0..thetas).map(|i| format!("θ{i}")).collect();
        return DiscreteFamilyModel::new(outcomes, labels, density, split).expect("monotone by construction");
    }
}
