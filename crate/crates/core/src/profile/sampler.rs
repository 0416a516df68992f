//! Per-instance samplers for clause width, clause variables and planted slack.

use std::collections::BTreeMap;

use rand::distr::Distribution;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::weighted::{WeightedAliasIndex, WeightedIndex};

use super::{stretch_profile, BenchmarkProfile, ProfileError};
use crate::cnf::{Label, Var};

/// Clause widths restricted to those that fit the available variables.
#[derive(Debug, Clone)]
pub struct WidthSampler {
    widths: Vec<usize>,
    index: WeightedIndex<f64>,
}

impl WidthSampler {
    pub fn new(profile: &BenchmarkProfile, available: usize) -> Result<Self, ProfileError> {
        if profile.width_dist.is_empty() {
            return Err(ProfileError::EmptyWidths);
        }
        let (widths, weights): (Vec<usize>, Vec<f64>) = profile
            .width_dist
            .iter()
            .filter(|(&k, &p)| k <= available && p > 0.0)
            .map(|(&k, &p)| (k, p))
            .unzip();
        let index = WeightedIndex::new(&weights)
            .map_err(|_| ProfileError::NoFeasibleWidth { available })?;
        Ok(WidthSampler { widths, index })
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        self.widths[self.index.sample(rng)]
    }
}

/// Draws one width from the profile, conditioned on `k ≤ n`.
pub fn sample_width<R: Rng + ?Sized>(
    profile: &BenchmarkProfile,
    n: usize,
    rng: &mut R,
) -> Result<usize, ProfileError> {
    Ok(WidthSampler::new(profile, n)?.sample(rng))
}

/// Slack distribution used for width `k`.
///
/// Falls back to the pooled distribution of the label (weighted by the width
/// distribution) truncated to `{0, …, k−1}`, and to uniform when that has no
/// mass there either.
pub fn resolve_slack_dist(profile: &BenchmarkProfile, label: Label, k: usize) -> Vec<f64> {
    let table = profile.slack_dist(label);
    if let Some(d) = table.get(&k) {
        if d.len() == k && d.iter().any(|&p| p > 0.0) {
            return d.clone();
        }
    }
    let mut pooled = vec![0.0; k];
    let has_weight = table
        .keys()
        .any(|w| profile.width_dist.get(w).is_some_and(|&p| p > 0.0));
    for (w, dist) in table {
        let weight = if has_weight {
            profile.width_dist.get(w).copied().unwrap_or(0.0)
        } else {
            1.0
        };
        for (acc, &p) in pooled.iter_mut().zip(dist) {
            *acc += weight * p;
        }
    }
    let total: f64 = pooled.iter().sum();
    if total > 0.0 {
        pooled.iter().map(|p| p / total).collect()
    } else {
        vec![1.0 / k as f64; k]
    }
}

#[derive(Debug, Clone)]
pub struct SlackSampler {
    label: Label,
    tables: BTreeMap<usize, WeightedIndex<f64>>,
}

impl SlackSampler {
    pub fn new(profile: &BenchmarkProfile, label: Label) -> Self {
        let tables = profile
            .width_dist
            .keys()
            .map(|&k| (k, slack_index(profile, label, k)))
            .collect();
        SlackSampler { label, tables }
    }

    pub fn label(&self) -> Label {
        self.label
    }

    /// Slack for a clause of width `k ≥ 1`; always in `0..k`.
    pub fn sample<R: Rng + ?Sized>(
        &mut self,
        profile: &BenchmarkProfile,
        k: usize,
        rng: &mut R,
    ) -> usize {
        assert!(k >= 1, "clause width must be positive");
        if k == 1 {
            return 0;
        }
        let label = self.label;
        self.tables
            .entry(k)
            .or_insert_with(|| slack_index(profile, label, k))
            .sample(rng)
    }
}

fn slack_index(profile: &BenchmarkProfile, label: Label, k: usize) -> WeightedIndex<f64> {
    WeightedIndex::new(resolve_slack_dist(profile, label, k))
        .expect("resolved slack distributions have mass")
}

pub fn sample_slack<R: Rng + ?Sized>(
    profile: &BenchmarkProfile,
    k: usize,
    label: Label,
    rng: &mut R,
) -> usize {
    assert!(k >= 1, "clause width must be positive");
    slack_index(profile, label, k).sample(rng)
}

/// Skew-weighted sampling of distinct variables for one instance.
///
/// The profile's rank-frequency curve is stretched to `n` ranks and the ranks
/// are dealt to variables through a random permutation drawn once, so every
/// clause of the instance sees the same variable weights.
#[derive(Debug, Clone)]
pub struct VariableSampler {
    weights: Vec<f64>,
    excluded: Vec<bool>,
    available: usize,
    alias: Option<WeightedAliasIndex<f64>>,
    mark: Vec<u32>,
    epoch: u32,
}

impl VariableSampler {
    pub fn new<R: Rng + ?Sized>(
        profile: &BenchmarkProfile,
        n: usize,
        excluded_vars: &[Var],
        rng: &mut R,
    ) -> Self {
        let rank_weights = stretch_profile(&profile.skew_profile, n.max(1));
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(rng);
        let mut weights = vec![0.0; n];
        for (rank, &var) in order.iter().enumerate() {
            weights[var] = rank_weights[rank].max(0.0);
        }
        Self::from_weights(weights, excluded_vars)
    }

    /// Sampler over explicit per-variable weights.
    pub fn from_weights(mut weights: Vec<f64>, excluded_vars: &[Var]) -> Self {
        let n = weights.len();
        let mut excluded = vec![false; n];
        for v in excluded_vars {
            excluded[v.index()] = true;
            weights[v.index()] = 0.0;
        }
        let available = n - excluded.iter().filter(|&&e| e).count();
        let alias = if weights.iter().any(|&w| w > 0.0) {
            WeightedAliasIndex::new(weights.clone()).ok()
        } else {
            None
        };
        VariableSampler {
            weights,
            excluded,
            available,
            alias,
            mark: vec![0; n],
            epoch: 0,
        }
    }

    pub fn num_vars(&self) -> usize {
        self.weights.len()
    }

    /// Variables that may be drawn.
    pub fn available(&self) -> usize {
        self.available
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Appends `k` distinct variables to `out` in uniformly shuffled order.
    pub fn sample<R: Rng + ?Sized>(
        &mut self,
        k: usize,
        rng: &mut R,
        out: &mut Vec<Var>,
    ) -> Result<(), ProfileError> {
        if k > self.available {
            return Err(ProfileError::TooFewVariables {
                k,
                available: self.available,
            });
        }
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.mark.fill(0);
            self.epoch = 1;
        }
        let start = out.len();
        // Drawing from the full distribution and rejecting repeats is the same
        // law as sequential sampling without replacement.
        if let Some(alias) = &self.alias {
            let mut budget = 16 * k + 32;
            while out.len() - start < k && budget > 0 {
                budget -= 1;
                let j = alias.sample(rng);
                if self.mark[j] != self.epoch {
                    self.mark[j] = self.epoch;
                    out.push(Var::new(j as u32));
                }
            }
        }
        while out.len() - start < k {
            let j = self.exact_draw(rng);
            self.mark[j] = self.epoch;
            out.push(Var::new(j as u32));
        }
        out[start..].shuffle(rng);
        Ok(())
    }

    /// One draw from the weights restricted to unmarked variables, uniform if
    /// those carry no weight.
    fn exact_draw<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let open = |j: &usize| self.mark[*j] != self.epoch && !self.excluded[*j];
        let total: f64 = (0..self.weights.len())
            .filter(open)
            .map(|j| self.weights[j])
            .sum();
        if total > 0.0 {
            let mut u = rng.random::<f64>() * total;
            let mut last = None;
            for j in (0..self.weights.len()).filter(open) {
                if self.weights[j] > 0.0 {
                    last = Some(j);
                    if u < self.weights[j] {
                        return j;
                    }
                    u -= self.weights[j];
                }
            }
            return last.expect("positive total weight");
        }
        let count = (0..self.weights.len()).filter(open).count();
        let pick = rng.random_range(0..count);
        (0..self.weights.len())
            .filter(open)
            .nth(pick)
            .expect("pick < count")
    }
}

/// All samplers needed to plant the clauses of one instance.
#[derive(Debug, Clone)]
pub struct InstanceSampler<'p> {
    profile: &'p BenchmarkProfile,
    pub widths: WidthSampler,
    pub variables: VariableSampler,
    pub slacks: SlackSampler,
}

impl<'p> InstanceSampler<'p> {
    pub fn new<R: Rng + ?Sized>(
        profile: &'p BenchmarkProfile,
        n: usize,
        label: Label,
        excluded_vars: &[Var],
        rng: &mut R,
    ) -> Result<Self, ProfileError> {
        let variables = VariableSampler::new(profile, n, excluded_vars, rng);
        let widths = WidthSampler::new(profile, variables.available())?;
        Ok(InstanceSampler {
            profile,
            widths,
            variables,
            slacks: SlackSampler::new(profile, label),
        })
    }

    pub fn profile(&self) -> &'p BenchmarkProfile {
        self.profile
    }

    pub fn width<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        self.widths.sample(rng)
    }

    pub fn slack<R: Rng + ?Sized>(&mut self, k: usize, rng: &mut R) -> usize {
        self.slacks.sample(self.profile, k, rng)
    }
}
