//! Property-based invariants: estimates depend only on the count multiset,
//! structural outputs are well formed, and the spanning-tree search matches
//! exhaustive enumeration on small graphs.

mod common;

use infomeasures::approx::{remez, ApproxTarget};
use infomeasures::baselines::{
    cae_entropy, dirichlet_bayes_entropy, dirichlet_plugin_entropy, grassberger_entropy,
    jackknife_entropy, miller_madow_entropy, mle_entropy, shrinkage_entropy, SupportHint,
};
use infomeasures::estimators::{estimate_entropy, estimate_falpha};
use infomeasures::graphical::mwst;
use infomeasures::synth::{sample_multinomial, sample_sequence, DiscreteDistribution, SeededRng};
use infomeasures::Histogram;
use proptest::prelude::*;

fn hist_with_labels(counts: &[u64], label: impl Fn(usize) -> u64) -> Histogram {
    Histogram::from_counts(counts.iter().enumerate().map(|(i, &c)| (label(i), c))).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    // Relabeling the symbols must not move any estimate by even one bit.
    #[test]
    fn estimates_are_label_invariant(counts in prop::collection::vec(1u64..40, 1..12)) {
        let a = hist_with_labels(&counts, |i| i as u64);
        let b = hist_with_labels(&counts, |i| 7919 * i as u64 + 13);
        let s = a.distinct() as u64;

        prop_assert_eq!(estimate_entropy(&a).unwrap(), estimate_entropy(&b).unwrap());
        prop_assert_eq!(
            estimate_falpha(&a, 0.7).unwrap(),
            estimate_falpha(&b, 0.7).unwrap()
        );
        prop_assert_eq!(mle_entropy(&a).unwrap(), mle_entropy(&b).unwrap());
        prop_assert_eq!(
            miller_madow_entropy(&a, SupportHint::Observed).unwrap(),
            miller_madow_entropy(&b, SupportHint::Observed).unwrap()
        );
        prop_assert_eq!(jackknife_entropy(&a).unwrap(), jackknife_entropy(&b).unwrap());
        prop_assert_eq!(grassberger_entropy(&a).unwrap(), grassberger_entropy(&b).unwrap());
        prop_assert_eq!(shrinkage_entropy(&a, s).unwrap(), shrinkage_entropy(&b, s).unwrap());
        prop_assert_eq!(
            dirichlet_plugin_entropy(&a, s, 0.5).unwrap(),
            dirichlet_plugin_entropy(&b, s, 0.5).unwrap()
        );
        prop_assert_eq!(
            dirichlet_bayes_entropy(&a, s, 0.5).unwrap(),
            dirichlet_bayes_entropy(&b, s, 0.5).unwrap()
        );
        match (cae_entropy(&a), cae_entropy(&b)) {
            (Ok(x), Ok(y)) => prop_assert_eq!(x, y),
            (Err(_), Err(_)) => {}
            (x, y) => prop_assert!(false, "coverage estimates disagree: {x:?} vs {y:?}"),
        }
    }

    #[test]
    fn histogram_counts_are_conserved(samples in prop::collection::vec(0u64..50, 1..200)) {
        let h = Histogram::from_samples(&samples);
        prop_assert_eq!(h.n(), samples.len() as u64);
        let sorted = h.sorted_counts_desc();
        prop_assert_eq!(sorted.iter().sum::<u64>(), h.n());
        prop_assert!(sorted.windows(2).all(|w| w[0] >= w[1]));
        let mut unique = samples.clone();
        unique.sort_unstable();
        unique.dedup();
        prop_assert_eq!(h.distinct(), unique.len());
    }

    #[test]
    fn synthetic_distributions_normalize(s in 2usize..200, alpha in 0.0f64..3.0) {
        let z = DiscreteDistribution::zipf(s, alpha).unwrap();
        let total: f64 = z.probs().iter().sum();
        prop_assert!((total - 1.0).abs() < 1e-12);
        let u = DiscreteDistribution::uniform(s).unwrap();
        prop_assert!((u.entropy() - (s as f64).ln()).abs() < 1e-12);
        let flat = DiscreteDistribution::zipf(s, 0.0).unwrap();
        for (a, b) in flat.probs().iter().zip(u.probs()) {
            prop_assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn samplers_conserve_totals(s in 2usize..30, n in 1u64..2000, seed in any::<u64>()) {
        let dist = DiscreteDistribution::zipf(s, 1.0).unwrap();
        let mut rng = SeededRng::new(seed).stream(0);
        let h = sample_multinomial(&dist, n, &mut rng);
        prop_assert_eq!(h.n(), n);
        let mut rng = SeededRng::new(seed).stream(1);
        let seq = sample_sequence(&dist, n, &mut rng);
        prop_assert_eq!(seq.len(), n as usize);
        prop_assert!(seq.iter().all(|&x| x < s as u64));
    }

    #[test]
    fn invalid_power_sum_orders_are_rejected(alpha in -5.0f64..=0.0) {
        let h = Histogram::from_samples(&[0, 1, 1, 2]);
        prop_assert!(estimate_falpha(&h, alpha).is_err());
        prop_assert!(estimate_falpha(&h, 1.0).is_err());
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, failure_persistence: None, ..ProptestConfig::default() })]

    // Kruskal on the dense matrix must attain the same total weight as brute
    // force over every labeled tree (Prüfer enumeration).
    #[test]
    fn mwst_attains_the_exhaustive_optimum(
        d in 3usize..=6,
        raw in prop::collection::vec(0.0f64..1.0, 15),
    ) {
        let mut w = vec![vec![0.0; d]; d];
        let mut it = raw.iter();
        for i in 0..d {
            for j in (i + 1)..d {
                let v = *it.next().unwrap();
                w[i][j] = v;
                w[j][i] = v;
            }
        }
        let tree = mwst(&w).unwrap();
        prop_assert_eq!(tree.edges().count(), d - 1);
        let total: f64 = tree.edges().map(|(i, j)| w[i][j]).sum();
        let best = common::all_labeled_trees(d)
            .iter()
            .map(|edges| edges.iter().map(|&(i, j)| w[i][j]).sum::<f64>())
            .fold(f64::NEG_INFINITY, f64::max);
        prop_assert!(
            (total - best).abs() <= 1e-12,
            "greedy total {total} vs exhaustive optimum {best}"
        );
    }

    // The minimax error is non-increasing in the degree.
    #[test]
    fn best_error_is_monotone_in_degree(alpha in 0.2f64..1.4, k in 1usize..6) {
        prop_assume!((alpha - 1.0).abs() > 0.05);
        let lo = remez(ApproxTarget::PowerAlpha(alpha), k).unwrap();
        let hi = remez(ApproxTarget::PowerAlpha(alpha), k + 1).unwrap();
        prop_assert!(
            hi.sup_error <= lo.sup_error * (1.0 + 1e-6) + 1e-12,
            "E_{{K+1}} = {} exceeds E_K = {}",
            hi.sup_error,
            lo.sup_error
        );
    }
}
