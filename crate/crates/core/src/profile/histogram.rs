use std::collections::BTreeMap;

use crate::cnf::Label;

/// Slack counts per label and clause width. The vector for width `k` has `k` bins.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SlackHistogram {
    sat: BTreeMap<usize, Vec<u64>>,
    unsat: BTreeMap<usize, Vec<u64>>,
}

impl SlackHistogram {
    fn table_mut(&mut self, label: Label) -> &mut BTreeMap<usize, Vec<u64>> {
        match label {
            Label::Sat => &mut self.sat,
            Label::Unsat => &mut self.unsat,
        }
    }

    pub fn counts(&self, label: Label) -> &BTreeMap<usize, Vec<u64>> {
        match label {
            Label::Sat => &self.sat,
            Label::Unsat => &self.unsat,
        }
    }

    /// Records one clause of width `width` with slack `slack < width`.
    pub fn record(&mut self, label: Label, width: usize, slack: usize) {
        assert!(
            slack < width,
            "slack {slack} out of range for width {width}"
        );
        self.table_mut(label)
            .entry(width)
            .or_insert_with(|| vec![0; width])[slack] += 1;
    }

    pub fn merge(&mut self, other: &SlackHistogram) {
        for label in [Label::Sat, Label::Unsat] {
            let table = self.table_mut(label);
            for (&k, counts) in other.counts(label) {
                let dst = table.entry(k).or_insert_with(|| vec![0; k]);
                for (d, s) in dst.iter_mut().zip(counts) {
                    *d += s;
                }
            }
        }
    }

    pub fn total(&self, label: Label) -> u64 {
        self.counts(label).values().flatten().sum()
    }

    /// Empirical distribution for `(label, width)`, if any clause was recorded.
    pub fn distribution(&self, label: Label, width: usize) -> Option<Vec<f64>> {
        let counts = self.counts(label).get(&width)?;
        let total: u64 = counts.iter().sum();
        (total > 0).then(|| counts.iter().map(|&c| c as f64 / total as f64).collect())
    }
}

/// Total variation distance `½ Σ |p_i − q_i|`; missing entries count as zero.
pub fn total_variation(p: &[f64], q: &[f64]) -> f64 {
    let len = p.len().max(q.len());
    let at = |v: &[f64], i: usize| v.get(i).copied().unwrap_or(0.0);
    0.5 * (0..len).map(|i| (at(p, i) - at(q, i)).abs()).sum::<f64>()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn record_and_merge() {
        let mut a = SlackHistogram::default();
        a.record(Label::Sat, 3, 1);
        a.record(Label::Sat, 3, 0);
        let mut b = SlackHistogram::default();
        b.record(Label::Sat, 3, 1);
        b.record(Label::Unsat, 2, 0);
        a.merge(&b);
        assert_eq!(a.counts(Label::Sat)[&3], vec![1, 2, 0]);
        assert_eq!(a.total(Label::Unsat), 1);
        assert_eq!(a.distribution(Label::Sat, 3).unwrap()[1], 2.0 / 3.0);
        assert!(a.distribution(Label::Unsat, 3).is_none());
    }

    #[test]
    #[should_panic]
    fn rejects_slack_beyond_width() {
        SlackHistogram::default().record(Label::Sat, 2, 2);
    }

    #[test]
    fn tv_distance() {
        assert_eq!(total_variation(&[1.0, 0.0], &[0.0, 1.0]), 1.0);
        assert_eq!(total_variation(&[0.5, 0.5], &[0.5, 0.5]), 0.0);
        assert!((total_variation(&[0.25, 0.75], &[0.5, 0.25, 0.25]) - 0.5).abs() < 1e-15);
    }
}
