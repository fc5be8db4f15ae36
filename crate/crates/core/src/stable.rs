//! Stable (monotone likelihood ratio) hypotheses on finite discrete families.
//!
//! A [`DiscreteFamilyModel`] carries a real statistic `T` and finitely many
//! parameter points in increasing order. The first `split` points form the
//! lower hypothesis `Θ1`, the rest the upper hypothesis `Θ0`. For `θ' ≺ θ''`
//! the ratio `p_θ'' / p_θ'` must be a nondecreasing function of `T`, so large
//! values of `T` favor `Θ0`.
//!
//! The essential statistic is encoded as an integer block index: blocks are
//! maximal runs of consecutive `T` values over which every normalized ratio is
//! constant. Votes for `Θ1` are `1 - G_θ(K)`, with `G_θ` the mid-distribution
//! function of the block index, except on the half-lines where one side has
//! no mass.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::scalar::{Real, Scalar};
use crate::simple_choice::{ExtRatio, TwoDensityModel, VoteResult};

/// One of the two composite hypotheses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    /// Upper parameter points (decision 0).
    Theta0,
    /// Lower parameter points (decision 1).
    Theta1,
}

/// Support point of a discrete family.
#[derive(Debug, Clone, PartialEq)]
pub struct FamilyOutcome<S> {
    pub label: String,
    /// Value of the statistic `T`.
    pub t: S,
    /// Base-measure mass.
    pub weight: S,
}

/// Which parameter pairs define the essential partition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PartitionKind {
    /// Pairs `(θ1, θ0) ∈ Θ1 × Θ0` across the split.
    Split,
    /// All ordered pairs `θ' ≺ θ''`.
    Global,
}

/// Extreme half-lines of `T` values.
#[derive(Debug, Clone, PartialEq)]
pub struct HalfLines<S> {
    /// Lowest `T` values, in increasing order, on which every `Θ0` density vanishes.
    pub d_i: Vec<S>,
    /// Highest `T` values, in increasing order, on which every `Θ1` density vanishes.
    pub d_s: Vec<S>,
}

/// Ordered blocks of `T` values with constant normalized ratios.
#[derive(Debug, Clone, PartialEq)]
pub struct EssentialPartition<S> {
    /// `(lowest T, highest T)` of each block, in increasing order.
    pub blocks: Vec<(S, S)>,
    /// Block index `K(T(ω))` of every outcome.
    pub block_index: Vec<usize>,
    /// Outcomes whose `T` lies in `D_i` but not in `D_s`.
    pub in_di_minus_ds: Vec<bool>,
    /// Outcomes whose `T` lies in `D_s`.
    pub in_ds: Vec<bool>,
    /// Outcomes whose `T` value carries no mass under any parameter.
    pub indeterminate: Vec<bool>,
}

/// Value given to a ratio on `T` values where both densities vanish.
///
/// Any constant between the neighboring plateaus is admissible and leaves
/// the votes unchanged outside totally indeterminate outcomes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum GapConvention {
    /// The plateau on the left, or on the right before the first defined value.
    #[default]
    Left,
    /// The plateau on the right, or on the left after the last defined value.
    Right,
}

/// Normalized ratio `p_θ0 / p_θ1` at each distinct `T` value.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalizedRatios<S> {
    /// Distinct `T` values in increasing order.
    pub t_values: Vec<S>,
    pub ratios: Vec<ExtRatio<S>>,
}

/// Finite-support family with a real statistic and an ordered parameter set.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteFamilyModel<S> {
    outcomes: Vec<FamilyOutcome<S>>,
    thetas: Vec<String>,
    /// `density[θ][ω]`.
    density: Vec<Vec<S>>,
    split: usize,
    levels: Vec<S>,
    level_of: Vec<usize>,
    /// `level_mass[θ][ℓ] = P_θ(T = t_ℓ)`.
    level_mass: Vec<Vec<S>>,
    d_i_len: usize,
    d_s_len: usize,
    gap: GapConvention,
    /// Block index per level for the split partition.
    split_blocks: Vec<usize>,
    /// `block_mass[θ][b]` for the split partition.
    block_mass: Vec<Vec<S>>,
}

fn ratio_leq<S: Scalar>(num_a: &S, den_a: &S, num_b: &S, den_b: &S) -> bool {
    // num_a / den_a <= num_b / den_b for nonnegative values, with x/0 = ∞.
    let lhs = num_a.clone() * den_b.clone();
    let rhs = num_b.clone() * den_a.clone();
    if S::EXACT {
        lhs <= rhs
    } else {
        let scale = lhs.to_f64().abs().max(rhs.to_f64().abs());
        lhs.to_f64() <= rhs.to_f64() + S::tolerance() * scale
    }
}

/// Replaces each missing value by the last value seen along the iteration.
fn fill_forward<'a, S: Clone + 'a>(values: impl Iterator<Item = &'a mut Option<S>>) {
    let mut last: Option<S> = None;
    for v in values {
        match v {
            Some(x) => last = Some(x.clone()),
            None => *v = last.clone(),
        }
    }
}

impl<S: Scalar> DiscreteFamilyModel<S> {
    /// Validates the model, including the monotone likelihood ratio condition.
    ///
    /// `density[θ][ω]` lists the densities of each parameter point in
    /// increasing parameter order; `thetas[..split]` is `Θ1`.
    pub fn new(
        outcomes: Vec<FamilyOutcome<S>>,
        thetas: Vec<String>,
        density: Vec<Vec<S>>,
        split: usize,
    ) -> Result<Self> {
        let n = outcomes.len();
        if n == 0 {
            return Err(Error::invalid("the support is empty"));
        }
        if thetas.len() < 2 || density.len() != thetas.len() {
            return Err(Error::invalid("need at least two parameter points, one density row each"));
        }
        if split == 0 || split >= thetas.len() {
            return Err(Error::invalid(format!("split index {split} must leave both hypotheses non-empty")));
        }
        for (i, o) in outcomes.iter().enumerate() {
            if outcomes[..i].iter().any(|p| p.label == o.label) {
                return Err(Error::invalid(format!("duplicate outcome label `{}`", o.label)));
            }
            if !(o.weight > S::zero()) {
                return Err(Error::invalid(format!("outcome `{}` has nonpositive base weight", o.label)));
            }
        }
        for (i, name) in thetas.iter().enumerate() {
            if thetas[..i].contains(name) {
                return Err(Error::invalid(format!("duplicate parameter label `{name}`")));
            }
        }
        for (name, row) in thetas.iter().zip(&density) {
            if row.len() != n {
                return Err(Error::invalid(format!("density row `{name}` has {} entries, expected {n}", row.len())));
            }
            if row.iter().any(|d| d.is_negative()) {
                return Err(Error::invalid(format!("density row `{name}` has a negative entry")));
            }
            let total = row.iter().zip(&outcomes).fold(S::zero(), |acc, (d, o)| acc + d.clone() * o.weight.clone());
            if !total.approx_eq(&S::one()) {
                return Err(Error::invalid(format!("density `{name}` integrates to {total}, expected 1")));
            }
        }

        let mut levels: Vec<S> = Vec::new();
        let mut sorted: Vec<&S> = outcomes.iter().map(|o| &o.t).collect();
        sorted.sort_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal));
        for t in sorted {
            if levels.last() != Some(t) {
                levels.push(t.clone());
            }
        }
        let level_of: Vec<usize> = outcomes
            .iter()
            .map(|o| levels.iter().position(|l| *l == o.t).expect("level present"))
            .collect();
        let mut level_mass = vec![vec![S::zero(); levels.len()]; thetas.len()];
        for (th, row) in density.iter().enumerate() {
            for (w, d) in row.iter().enumerate() {
                let l = level_of[w];
                level_mass[th][l] = level_mass[th][l].clone() + d.clone() * outcomes[w].weight.clone();
            }
        }

        let mut model = DiscreteFamilyModel {
            outcomes,
            thetas,
            density,
            split,
            levels,
            level_of,
            level_mass,
            d_i_len: 0,
            d_s_len: 0,
            gap: GapConvention::Left,
            split_blocks: Vec::new(),
            block_mass: Vec::new(),
        };
        model.check_sufficiency()?;
        model.check_mlr()?;
        model.compute_half_lines();
        model.compute_blocks();
        Ok(model)
    }

    /// The same model with another gap convention for indeterminate ratios.
    pub fn with_gap_convention(mut self, gap: GapConvention) -> Self {
        self.gap = gap;
        self.compute_blocks();
        self
    }

    pub fn gap_convention(&self) -> GapConvention {
        self.gap
    }

    fn compute_blocks(&mut self) {
        self.split_blocks = self.level_partition(PartitionKind::Split);
        let nblocks = self.split_blocks.last().map_or(0, |b| b + 1);
        self.block_mass = (0..self.thetas.len())
            .map(|th| {
                let mut masses = vec![S::zero(); nblocks];
                for (l, &b) in self.split_blocks.iter().enumerate() {
                    masses[b] = masses[b].clone() + self.level_mass[th][l].clone();
                }
                masses
            })
            .collect();
    }

    /// Views a two-density model as a family with `Θ1 = {p1} ≺ Θ0 = {p0}`.
    ///
    /// The statistic is the rank of the outcome's likelihood-ratio class, so the
    /// ratio `p0 / p1` is nondecreasing in it by construction.
    pub fn from_two_density(model: &TwoDensityModel<S>) -> Self {
        let t: Vec<S> = (0..model.outcomes().len())
            .map(|i| S::from_usize(model.class_of(i)).expect("class index fits"))
            .collect();
        Self::from_two_density_with_t(model, &t).expect("class ranks are monotone in the ratio")
    }

    /// Views a two-density model as a family using the given statistic values.
    pub fn from_two_density_with_t(model: &TwoDensityModel<S>, t: &[S]) -> Result<Self> {
        let outcomes: Vec<FamilyOutcome<S>> = model
            .outcomes()
            .iter()
            .zip(t)
            .map(|(o, t)| FamilyOutcome { label: o.label.clone(), t: t.clone(), weight: o.weight.clone() })
            .collect();
        if outcomes.len() != model.outcomes().len() {
            return Err(Error::invalid("one statistic value per outcome is required"));
        }
        let p1 = model.outcomes().iter().map(|o| o.p1.clone()).collect();
        let p0 = model.outcomes().iter().map(|o| o.p0.clone()).collect();
        Self::new(outcomes, vec!["1".to_string(), "0".to_string()], vec![p1, p0], 1)
    }

    fn check_sufficiency(&self) -> Result<()> {
        // Ratios between parameter points must depend on the outcome only through T.
        for a in 0..self.thetas.len() {
            for b in a + 1..self.thetas.len() {
                for w in 0..self.outcomes.len() {
                    for v in w + 1..self.outcomes.len() {
                        if self.level_of[w] != self.level_of[v] {
                            continue;
                        }
                        let (da, db) = (&self.density[a], &self.density[b]);
                        let lhs = db[w].clone() * da[v].clone();
                        let rhs = db[v].clone() * da[w].clone();
                        let both_zero_w = da[w].is_zero() && db[w].is_zero();
                        let both_zero_v = da[v].is_zero() && db[v].is_zero();
                        if both_zero_w || both_zero_v {
                            continue;
                        }
                        if !lhs.approx_eq(&rhs) {
                            return Err(Error::invalid(format!(
                                "ratio {}/{} differs between outcomes `{}` and `{}` sharing T = {}",
                                self.thetas[b], self.thetas[a], self.outcomes[w].label, self.outcomes[v].label,
                                self.outcomes[w].t
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    fn check_mlr(&self) -> Result<()> {
        for a in 0..self.thetas.len() {
            for b in a + 1..self.thetas.len() {
                let (ma, mb) = (&self.level_mass[a], &self.level_mass[b]);
                let mut prev: Option<usize> = None;
                for l in 0..self.levels.len() {
                    if ma[l].is_zero() && mb[l].is_zero() {
                        continue;
                    }
                    if let Some(p) = prev {
                        if !ratio_leq(&mb[p], &ma[p], &mb[l], &ma[l]) {
                            return Err(Error::MlrViolation {
                                lower: self.thetas[a].clone(),
                                upper: self.thetas[b].clone(),
                                t_left: self.levels[p].to_string(),
                                t_right: self.levels[l].to_string(),
                            });
                        }
                    }
                    prev = Some(l);
                }
            }
        }
        Ok(())
    }

    fn side_vanishes(&self, level: usize, side: Side) -> bool {
        let range = match side {
            Side::Theta0 => self.split..self.thetas.len(),
            Side::Theta1 => 0..self.split,
        };
        range.into_iter().all(|th| self.level_mass[th][level].is_zero())
    }

    fn compute_half_lines(&mut self) {
        let n = self.levels.len();
        self.d_i_len = (0..n).take_while(|&l| self.side_vanishes(l, Side::Theta0)).count();
        self.d_s_len = (0..n).rev().take_while(|&l| self.side_vanishes(l, Side::Theta1)).count();
    }

    fn level_in_ds(&self, level: usize) -> bool {
        level + self.d_s_len >= self.levels.len()
    }

    fn level_in_di_minus_ds(&self, level: usize) -> bool {
        level < self.d_i_len && !self.level_in_ds(level)
    }

    fn level_indeterminate(&self, level: usize) -> bool {
        (0..self.thetas.len()).all(|th| self.level_mass[th][level].is_zero())
    }

    fn pairs(&self, kind: PartitionKind) -> Vec<(usize, usize)> {
        let m = self.thetas.len();
        match kind {
            PartitionKind::Split => {
                (0..self.split).flat_map(|a| (self.split..m).map(move |b| (a, b))).collect()
            }
            PartitionKind::Global => (0..m).flat_map(|a| (a + 1..m).map(move |b| (a, b))).collect(),
        }
    }

    /// Normalized ratio `p_b / p_a` per level for parameter indices `a ≺ b`.
    fn normalized_pair(&self, a: usize, b: usize) -> Vec<ExtRatio<S>> {
        let cross = a < self.split && b >= self.split;
        let n = self.levels.len();
        let mut values: Vec<Option<ExtRatio<S>>> = (0..n)
            .map(|l| {
                if cross && self.level_in_ds(l) {
                    return Some(ExtRatio::Infinite);
                }
                if cross && self.level_in_di_minus_ds(l) {
                    return Some(ExtRatio::Finite(S::zero()));
                }
                let (ma, mb) = (&self.level_mass[a][l], &self.level_mass[b][l]);
                if ma.is_zero() && mb.is_zero() {
                    None
                } else {
                    Some(ExtRatio::of(mb, ma))
                }
            })
            .collect();
        match self.gap {
            GapConvention::Left => {
                fill_forward(values.iter_mut());
                fill_forward(values.iter_mut().rev());
            }
            GapConvention::Right => {
                fill_forward(values.iter_mut().rev());
                fill_forward(values.iter_mut());
            }
        }
        values.into_iter().map(|v| v.unwrap_or(ExtRatio::Infinite)).collect()
    }

    /// Block index per level.
    fn level_partition(&self, kind: PartitionKind) -> Vec<usize> {
        let vectors: Vec<Vec<ExtRatio<S>>> = self
            .pairs(kind)
            .into_iter()
            .map(|(a, b)| self.normalized_pair(a, b))
            .collect();
        let mut blocks = Vec::with_capacity(self.levels.len());
        let mut current = 0;
        for l in 0..self.levels.len() {
            if l > 0 && vectors.iter().any(|v| !v[l].approx_eq(&v[l - 1])) {
                current += 1;
            }
            blocks.push(current);
        }
        blocks
    }

    pub fn outcomes(&self) -> &[FamilyOutcome<S>] {
        &self.outcomes
    }

    /// Parameter labels in increasing order.
    pub fn thetas(&self) -> &[String] {
        &self.thetas
    }

    /// Number of parameter points in `Θ1`.
    pub fn split(&self) -> usize {
        self.split
    }

    /// Density row of parameter index `theta`.
    pub fn density(&self, theta: usize) -> &[S] {
        &self.density[theta]
    }

    /// Distinct statistic values in increasing order.
    pub fn t_levels(&self) -> &[S] {
        &self.levels
    }

    /// `P_θ(T = t_ℓ)` for parameter index `theta`.
    pub fn level_masses(&self, theta: usize) -> &[S] {
        &self.level_mass[theta]
    }

    /// Parameter indices of one side.
    pub fn side_indices(&self, side: Side) -> std::ops::Range<usize> {
        match side {
            Side::Theta1 => 0..self.split,
            Side::Theta0 => self.split..self.thetas.len(),
        }
    }

    pub fn outcome_index(&self, label: &str) -> Result<usize> {
        self.outcomes
            .iter()
            .position(|o| o.label == label)
            .ok_or_else(|| Error::UnknownOutcome(label.to_string()))
    }

    /// Parameter index from a label, or from a numeric index when no label matches.
    pub fn theta_index(&self, label: &str) -> Result<usize> {
        if let Some(i) = self.thetas.iter().position(|t| t == label) {
            return Ok(i);
        }
        match label.parse::<usize>() {
            Ok(i) if i < self.thetas.len() => Ok(i),
            _ => Err(Error::UnknownParameter(label.to_string())),
        }
    }

    /// Normalized ratio `p_θ0 / p_θ1` per distinct statistic value.
    pub fn normalize_ratios(&self, theta0: usize, theta1: usize) -> Result<NormalizedRatios<S>> {
        if theta1 >= self.split || theta0 < self.split || theta0 >= self.thetas.len() {
            return Err(Error::domain("normalize_ratios expects θ1 in Θ1 and θ0 in Θ0"));
        }
        Ok(NormalizedRatios { t_values: self.levels.clone(), ratios: self.normalized_pair(theta1, theta0) })
    }

    /// Maximal half-lines on which one side has no mass.
    pub fn half_lines(&self) -> HalfLines<S> {
        let n = self.levels.len();
        HalfLines {
            d_i: self.levels[..self.d_i_len].to_vec(),
            d_s: self.levels[n - self.d_s_len..].to_vec(),
        }
    }

    /// Essential partition of the outcomes for the chosen parameter pairs.
    pub fn essential_partition(&self, kind: PartitionKind) -> EssentialPartition<S> {
        let level_blocks = match kind {
            PartitionKind::Split => self.split_blocks.clone(),
            PartitionKind::Global => self.level_partition(kind),
        };
        let nblocks = level_blocks.last().map_or(0, |b| b + 1);
        let mut blocks: Vec<(S, S)> = Vec::with_capacity(nblocks);
        for (l, &b) in level_blocks.iter().enumerate() {
            if b == blocks.len() {
                blocks.push((self.levels[l].clone(), self.levels[l].clone()));
            } else {
                blocks[b].1 = self.levels[l].clone();
            }
        }
        EssentialPartition {
            blocks,
            block_index: self.level_of.iter().map(|&l| level_blocks[l]).collect(),
            in_di_minus_ds: self.level_of.iter().map(|&l| self.level_in_di_minus_ds(l)).collect(),
            in_ds: self.level_of.iter().map(|&l| self.level_in_ds(l)).collect(),
            indeterminate: self.level_of.iter().map(|&l| self.level_indeterminate(l)).collect(),
        }
    }

    /// Mid-distribution function `G_θ(b) = P_θ(K < b) + P_θ(K = b) / 2` of the block index.
    pub fn block_mid_cdf(&self, theta: usize, block: usize) -> S {
        let masses = &self.block_mass[theta];
        let below = masses[..block].iter().fold(S::zero(), |acc, m| acc + m.clone());
        (below + S::half() * masses[block].clone()).clamp_unit()
    }

    /// `Σ_b P_θ(K = b) G_θ(b)`, equal to one half for every parameter.
    pub fn neutrality_sum(&self, theta: usize) -> S {
        (0..self.block_mass[theta].len()).fold(S::zero(), |acc, b| {
            acc + self.block_mass[theta][b].clone() * self.block_mid_cdf(theta, b)
        })
    }

    /// Vote for `Θ1` under parameter index `theta` at outcome index `index`.
    pub fn vote_stable_at(&self, index: usize, theta: usize) -> VoteResult<S> {
        let l = self.level_of[index];
        if self.level_in_di_minus_ds(l) {
            return VoteResult::new(S::one());
        }
        if self.level_in_ds(l) {
            return VoteResult::new(S::zero());
        }
        VoteResult::new(S::one() - self.block_mid_cdf(theta, self.split_blocks[l]))
    }

    /// Vote for `Θ1` under parameter `theta` (label or index) at an outcome.
    pub fn vote_stable(&self, outcome: &str, theta: &str) -> Result<VoteResult<S>> {
        Ok(self.vote_stable_at(self.outcome_index(outcome)?, self.theta_index(theta)?))
    }

    /// Most favorable vote under one side at outcome index `index`.
    ///
    /// For `Θ0` the probability of decision 0 is maximized over `Θ0`; for `Θ1`
    /// the probability of decision 1 is maximized over `Θ1`.
    pub fn vote_most_favorable_at(&self, index: usize, side: Side) -> VoteResult<S> {
        let votes = self.side_indices(side).map(|th| self.vote_stable_at(index, th).p_decide_1);
        match side {
            Side::Theta0 => {
                let min = votes.reduce(|a, b| if b < a { b } else { a }).expect("non-empty side");
                VoteResult::new(min)
            }
            Side::Theta1 => {
                let max = votes.reduce(|a, b| if b > a { b } else { a }).expect("non-empty side");
                VoteResult::new(max)
            }
        }
    }

    /// Most favorable vote under one side at an outcome.
    pub fn vote_most_favorable(&self, outcome: &str, side: Side) -> Result<VoteResult<S>> {
        Ok(self.vote_most_favorable_at(self.outcome_index(outcome)?, side))
    }

    /// True when the most favorable votes of the two sides coincide at every
    /// outcome carrying mass.
    pub fn is_adjacent(&self) -> bool {
        (0..self.outcomes.len()).filter(|&w| !self.level_indeterminate(self.level_of[w])).all(|w| {
            self.vote_most_favorable_at(w, Side::Theta0)
                .p_decide_1
                .approx_eq(&self.vote_most_favorable_at(w, Side::Theta1).p_decide_1)
        })
    }

    /// Vote averaged over one side with the given weights (in parameter order).
    pub fn vote_weighted_on_theta(&self, outcome: &str, side: Side, weights: &[S]) -> Result<VoteResult<S>> {
        let index = self.outcome_index(outcome)?;
        let range = self.side_indices(side);
        if weights.len() != range.len() {
            return Err(Error::invalid(format!("expected {} weights, got {}", range.len(), weights.len())));
        }
        if weights.iter().any(|w| w.is_negative()) {
            return Err(Error::WeightSum("a negative weight".to_string()));
        }
        let total = weights.iter().fold(S::zero(), |acc, w| acc + w.clone());
        if !total.approx_eq(&S::one()) {
            return Err(Error::WeightSum(total.to_string()));
        }
        let value = range
            .zip(weights)
            .fold(S::zero(), |acc, (th, w)| acc + w.clone() * self.vote_stable_at(index, th).p_decide_1);
        Ok(VoteResult::new(value))
    }

    /// `(Q_θ({0}), Q_θ({1})) = (G_θ(K), 1 - G_θ(K))` at an outcome, without the
    /// half-line overrides.
    pub fn unilateral_pvalue(&self, outcome: &str, theta: &str) -> Result<(S, S)> {
        let index = self.outcome_index(outcome)?;
        let th = self.theta_index(theta)?;
        let g = self.block_mid_cdf(th, self.split_blocks[self.level_of[index]]);
        Ok((g.clone(), S::one() - g))
    }
}

/// Mid-distribution function `G_θ(t) = P_θ(T < t) + P_θ(T = t) / 2` of a
/// parametric family with a real parameter.
pub trait MidCdfFamily<R> {
    /// Evaluates `G_θ(t)`.
    fn mid_cdf(&self, theta: R, t: R) -> Result<R>;
}

/// Minimal rejection levels `(Q_θ0({0}), Q_θ0({1})) = (G_θ0(t), 1 - G_θ0(t))`.
pub fn unilateral_pvalue<R: Real, F: MidCdfFamily<R>>(family: &F, theta0: R, t: R) -> Result<(R, R)> {
    let g = family.mid_cdf(theta0, t)?;
    Ok((g, R::one() - g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simple_choice::Hypothesis;
    use num::rational::BigRational;

    type Q = BigRational;

    fn q(n: i64, d: i64) -> Q {
        Q::ratio(n, d)
    }

    fn outcomes(ts: &[i64]) -> Vec<FamilyOutcome<Q>> {
        ts.iter()
            .map(|&t| FamilyOutcome { label: format!("t{t}"), t: q(t, 1), weight: q(1, 1) })
            .collect()
    }

    fn golden_family() -> DiscreteFamilyModel<Q> {
        let model = TwoDensityModel::from_columns(
            &["A", "B", "C"],
            &[q(1, 1), q(1, 1), q(1, 1)],
            &[q(1, 6), q(1, 3), q(1, 2)],
            &[q(1, 2), q(1, 3), q(1, 6)],
        )
        .unwrap();
        DiscreteFamilyModel::from_two_density_with_t(&model, &[q(0, 1), q(1, 1), q(2, 1)]).unwrap()
    }

    #[test]
    fn golden_ratios_and_votes() {
        let m = golden_family();
        let r = m.normalize_ratios(1, 0).unwrap();
        assert_eq!(r.ratios, vec![ExtRatio::Finite(q(1, 3)), ExtRatio::Finite(q(1, 1)), ExtRatio::Finite(q(3, 1))]);
        let p = m.essential_partition(PartitionKind::Split);
        assert_eq!(p.block_index, vec![0, 1, 2]);
        assert_eq!(m.vote_stable("A", "0").unwrap().p_decide_1, q(11, 12));
        assert_eq!(m.vote_stable("C", "1").unwrap().p_decide_1, q(1, 12));
        assert_eq!(m.neutrality_sum(0), q(1, 2));
        assert_eq!(m.neutrality_sum(1), q(1, 2));
        assert!(!m.is_adjacent());
    }

    #[test]
    fn disjoint_supports_give_zero_then_infinity() {
        let m = DiscreteFamilyModel::new(
            outcomes(&[1, 2, 3, 4]),
            vec!["a".into(), "b".into()],
            vec![vec![q(1, 2), q(1, 2), q(0, 1), q(0, 1)], vec![q(0, 1), q(0, 1), q(1, 2), q(1, 2)]],
            1,
        )
        .unwrap();
        let r = m.normalize_ratios(1, 0).unwrap();
        assert_eq!(
            r.ratios,
            vec![ExtRatio::Finite(q(0, 1)), ExtRatio::Finite(q(0, 1)), ExtRatio::Infinite, ExtRatio::Infinite]
        );
        let h = m.half_lines();
        assert_eq!(h.d_i, vec![q(1, 1), q(2, 1)]);
        assert_eq!(h.d_s, vec![q(3, 1), q(4, 1)]);
        assert_eq!(m.vote_stable("t1", "b").unwrap().p_decide_1, q(1, 1));
        assert_eq!(m.vote_stable("t4", "a").unwrap().p_decide_1, q(0, 1));
    }

    #[test]
    fn half_lines_from_direct_scan() {
        // Θ0 rows uniform on {3, 4, 5}; Θ1 rows vanish from t = 4 on.
        let m = DiscreteFamilyModel::new(
            outcomes(&[1, 2, 3, 4, 5]),
            vec!["lo".into(), "hi".into()],
            vec![
                vec![q(1, 4), q(1, 4), q(1, 2), q(0, 1), q(0, 1)],
                vec![q(0, 1), q(0, 1), q(1, 3), q(1, 3), q(1, 3)],
            ],
            1,
        )
        .unwrap();
        let h = m.half_lines();
        assert_eq!(h.d_i, vec![q(1, 1), q(2, 1)]);
        assert_eq!(h.d_s, vec![q(4, 1), q(5, 1)]);
        let p = m.essential_partition(PartitionKind::Split);
        assert_eq!(p.in_di_minus_ds, vec![true, true, false, false, false]);
        assert_eq!(p.in_ds, vec![false, false, false, true, true]);
    }

    #[test]
    fn indeterminate_gap_inherits_left_plateau() {
        // Ratio hi/lo is 1/2 at t = 1, undefined at t = 2, 2 at t = 3.
        let m = DiscreteFamilyModel::new(
            outcomes(&[1, 2, 3]),
            vec!["lo".into(), "hi".into()],
            vec![vec![q(2, 3), q(0, 1), q(1, 3)], vec![q(1, 3), q(0, 1), q(2, 3)]],
            1,
        )
        .unwrap();
        let r = m.normalize_ratios(1, 0).unwrap();
        assert_eq!(r.ratios[1], ExtRatio::Finite(q(1, 2)));
        let p = m.essential_partition(PartitionKind::Split);
        assert_eq!(p.block_index, vec![0, 0, 1]);
        assert_eq!(p.indeterminate, vec![false, true, false]);
        let right = m.clone().with_gap_convention(GapConvention::Right);
        assert_eq!(right.normalize_ratios(1, 0).unwrap().ratios[1], ExtRatio::Finite(q(2, 1)));
        for o in ["t1", "t3"] {
            assert_eq!(m.vote_stable(o, "lo").unwrap(), right.vote_stable(o, "lo").unwrap());
        }
    }

    #[test]
    fn mlr_violation_is_reported() {
        let err = DiscreteFamilyModel::new(
            outcomes(&[1, 2]),
            vec!["lo".into(), "hi".into()],
            vec![vec![q(1, 4), q(3, 4)], vec![q(3, 4), q(1, 4)]],
            1,
        )
        .unwrap_err();
        assert!(matches!(err, Error::MlrViolation { .. }));
    }

    #[test]
    fn two_point_family_matches_simple_choice() {
        let model = TwoDensityModel::from_columns(
            &["a", "b", "c", "d"],
            &[q(1, 1), q(2, 1), q(1, 1), q(1, 1)],
            &[q(0, 1), q(1, 8), q(1, 4), q(1, 2)],
            &[q(1, 4), q(1, 4), q(1, 4), q(0, 1)],
        )
        .unwrap();
        let fam = DiscreteFamilyModel::from_two_density(&model);
        for (i, o) in model.outcomes().iter().enumerate() {
            for (theta, label) in [(Hypothesis::Theta0, "0"), (Hypothesis::Theta1, "1")] {
                assert_eq!(
                    model.vote_simple_at(i, theta).p_decide_1,
                    fam.vote_stable(&o.label, label).unwrap().p_decide_1,
                    "outcome {}",
                    o.label
                );
            }
        }
    }

    #[test]
    fn most_favorable_uses_split_adjacent_points() {
        // Four binomial(2, p) points, p = 1/5, 2/5, 3/5, 4/5; Θ0 = the last two.
        let ps = [q(1, 5), q(2, 5), q(3, 5), q(4, 5)];
        let rows: Vec<Vec<Q>> = ps
            .iter()
            .map(|p| {
                let r = q(1, 1) - p.clone();
                vec![r.clone() * r.clone(), q(2, 1) * p.clone() * r, p.clone() * p.clone()]
            })
            .collect();
        let m = DiscreteFamilyModel::new(outcomes(&[0, 1, 2]), vec!["p1".into(), "p2".into(), "p3".into(), "p4".into()], rows, 2)
            .unwrap();
        for o in ["t0", "t1", "t2"] {
            let fav0 = m.vote_most_favorable(o, Side::Theta0).unwrap();
            assert_eq!(fav0, m.vote_stable(o, "p3").unwrap());
            let fav1 = m.vote_most_favorable(o, Side::Theta1).unwrap();
            assert_eq!(fav1, m.vote_stable(o, "p2").unwrap());
        }
        assert!(!m.is_adjacent());
        let w = m.vote_weighted_on_theta("t1", Side::Theta0, &[q(1, 2), q(1, 2)]).unwrap();
        let a = m.vote_stable("t1", "p3").unwrap().p_decide_1;
        let b = m.vote_stable("t1", "p4").unwrap().p_decide_1;
        assert_eq!(w.p_decide_1, (a + b) / q(2, 1));
        assert!(matches!(
            m.vote_weighted_on_theta("t1", Side::Theta0, &[q(1, 2), q(1, 3)]),
            Err(Error::WeightSum(_))
        ));
    }
}
