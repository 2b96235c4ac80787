//! Fast counters, baseline counters and the brute-force oracle agree.

use proptest::prelude::*;
use tmotif::{count_motifs, gen_random, oracle_count, Algorithm, ClassSet, CountMatrix, Delta};

fn delta_strategy() -> impl Strategy<Value = Delta> {
    prop_oneof![(0u64..40).prop_map(Delta::seconds), Just(Delta::INFINITE)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn fast_baseline_oracle_agree(n in 2usize..=8, m in 0usize..=30, seed: u64, delta in delta_strategy()) {
        let g = gen_random(n, m, 60, seed).unwrap();
        let oracle = oracle_count(&g, delta).unwrap();
        let fast = count_motifs(&g, delta, ClassSet::ALL, Algorithm::Fast).unwrap().matrix;
        let base = count_motifs(&g, delta, ClassSet::ALL, Algorithm::Baseline).unwrap().matrix;
        prop_assert_eq!(fast, oracle);
        prop_assert_eq!(base, oracle);
    }

    #[test]
    fn monotone_in_delta(n in 2usize..=8, m in 0usize..=30, seed: u64, a in 0u64..50, b in 0u64..50) {
        let g = gen_random(n, m, 100, seed).unwrap();
        let (lo, hi) = (a.min(b), a.max(b));
        let small = tmotif::count_all(&g, Delta::seconds(lo)).unwrap().matrix;
        let large = tmotif::count_all(&g, Delta::seconds(hi)).unwrap().matrix;
        let inf = tmotif::count_all(&g, Delta::INFINITE).unwrap().matrix;
        prop_assert!(large.checked_sub(&small).is_ok());
        prop_assert!(inf.checked_sub(&large).is_ok());
    }

    #[test]
    fn classes_partition_the_matrix(n in 2usize..=8, m in 0usize..=30, seed: u64, delta in delta_strategy()) {
        let g = gen_random(n, m, 60, seed).unwrap();
        let mut acc = CountMatrix::zero();
        for c in ["pair", "star", "triangle"] {
            let part = count_motifs(&g, delta, c.parse().unwrap(), Algorithm::Fast).unwrap().matrix;
            acc.merge(&part).unwrap();
        }
        prop_assert_eq!(acc, tmotif::count_all(&g, delta).unwrap().matrix);
    }
}
