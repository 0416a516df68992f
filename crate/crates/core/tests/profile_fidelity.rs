mod common;

use std::collections::BTreeMap;

use rand::Rng;
use satforge_core::generate::random::uniform_ksat;
use satforge_core::profile::{find_assignment, SlackHistogram, VariableSampler};
use satforge_core::rng::seeded;
use satforge_core::verify::DEFAULT_CAP;
use satforge_core::{
    brute_force_label, evaluate_formula, generate_sat, generate_unsat, induced_slack,
    profile_corpus, BenchmarkProfile, BruteForceResult, GeneratorConfig, Label, LabeledCorpusEntry,
    ProfileOptions, Var,
};

fn sat_corpus(p: &BenchmarkProfile, instances: u64, n: usize, m: usize) -> Vec<LabeledCorpusEntry> {
    (0..instances)
        .map(|seed| {
            let inst = generate_sat(n, m, p, seed, &GeneratorConfig::default()).unwrap();
            LabeledCorpusEntry {
                formula: inst.formula,
                label: Label::Sat,
                witness: Some(inst.witness),
            }
        })
        .collect()
}

#[test]
fn profiling_generated_corpus_recovers_source() {
    let p = common::mixed_profile();
    // 200 × 500 = 10^5 clauses.
    let corpus = sat_corpus(&p, 200, 60, 500);
    let q = profile_corpus(&corpus, &ProfileOptions::default()).unwrap();
    let widths = |d: &BTreeMap<usize, f64>| {
        (0..=4)
            .map(|k| *d.get(&k).unwrap_or(&0.0))
            .collect::<Vec<_>>()
    };
    assert!(common::tv(&widths(&p.width_dist), &widths(&q.width_dist)) < 0.02);
    for (k, dist) in &p.sat_slack {
        let tv = common::tv(dist, &q.sat_slack[k]);
        assert!(tv < 0.02, "width {k}: tv {tv}");
    }
    assert_eq!(q.dominant_width, 3);
    assert!((q.alpha - 500.0 / 60.0).abs() < 1e-12);
}

#[test]
fn unsat_filler_follows_unsat_slack() {
    let p = common::mixed_profile();
    let mut hist = SlackHistogram::default();
    let mut clauses = 0;
    let mut seed = 0;
    while clauses < 100_000 {
        let inst = generate_unsat(60, 508, &p, seed, &GeneratorConfig::default()).unwrap();
        let s = induced_slack(&inst.formula, &inst.witness).unwrap();
        for i in inst.filler_indices() {
            hist.record(
                Label::Unsat,
                inst.formula.clauses()[i].width(),
                s.0[i] as usize,
            );
            clauses += 1;
        }
        seed += 1;
    }
    for (k, dist) in &p.unsat_slack {
        let observed = hist.distribution(Label::Unsat, *k).unwrap();
        assert!(common::tv(dist, &observed) < 0.02);
    }
}

#[test]
fn profiling_is_deterministic() {
    let p = BenchmarkProfile::random_3sat();
    let corpus: Vec<LabeledCorpusEntry> = sat_corpus(&p, 20, 20, 85)
        .into_iter()
        .map(|mut e| {
            e.witness = None;
            e
        })
        .collect();
    let a = profile_corpus(&corpus, &ProfileOptions::default()).unwrap();
    let b = profile_corpus(&corpus, &ProfileOptions::default()).unwrap();
    assert_eq!(a.to_json(), b.to_json());
    assert_eq!(BenchmarkProfile::from_json(&a.to_json()).unwrap(), a);
}

#[test]
fn local_search_solves_easy_random_3sat() {
    let mut rng = seeded(2024);
    let (mut sat, mut solved) = (0, 0);
    while sat < 300 {
        let f = uniform_ksat(20, 85, 3, &mut rng);
        if let BruteForceResult::Sat(_) = brute_force_label(&f, DEFAULT_CAP).unwrap() {
            sat += 1;
            let x = find_assignment(&f, 10_000, &mut seeded(rng.random()));
            solved += evaluate_formula(&f, &x).unwrap().satisfied as usize;
        }
    }
    let rate = solved as f64 / sat as f64;
    assert!(rate >= 0.9, "solved {solved}/{sat}");
}

/// Upper 1% points of the chi-square distribution.
const CHI2_99_DF19: f64 = 36.191;

#[test]
fn uniform_skew_matches_uniform_sampling() {
    // Ordered pairs from 5 variables: 20 equally likely outcomes.
    let mut sampler = VariableSampler::from_weights(vec![1.0; 5], &[]);
    let mut rng = seeded(5);
    let mut counts = BTreeMap::<(Var, Var), u64>::new();
    let mut out = Vec::new();
    let draws = 100_000;
    for _ in 0..draws {
        out.clear();
        sampler.sample(2, &mut rng, &mut out).unwrap();
        *counts.entry((out[0], out[1])).or_default() += 1;
    }
    assert_eq!(counts.len(), 20);
    let expected = draws as f64 / 20.0;
    let chi2: f64 = counts
        .values()
        .map(|&c| (c as f64 - expected).powi(2) / expected)
        .sum();
    assert!(chi2 < CHI2_99_DF19, "chi2 {chi2}");
}

#[test]
fn full_width_draw_is_a_permutation() {
    let mut sampler = VariableSampler::from_weights(vec![0.5, 0.1, 0.2, 0.15, 0.05], &[]);
    let mut rng = seeded(6);
    let mut out = Vec::new();
    for _ in 0..1000 {
        out.clear();
        sampler.sample(5, &mut rng, &mut out).unwrap();
        let mut sorted = out.clone();
        sorted.sort();
        assert_eq!(sorted, (0..5).map(Var::new).collect::<Vec<_>>());
    }
}
