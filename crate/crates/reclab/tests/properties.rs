//! Property tests for the exact-arithmetic invariants.

use num_bigint::BigInt;
use proptest::prelude::*;
use reclab::lattice::{Delta, LatticeBasis};
use reclab::precision::HPReal;

fn hpreal_strategy() -> impl Strategy<Value = HPReal> {
    // exact decimals m * 10^e with modest sizes
    (any::<i64>(), -12i64..12)
        .prop_map(|(m, e)| HPReal::from_parts(BigInt::from(m % 1_000_000_000_000), e))
}

proptest! {
    #[test]
    fn display_parse_round_trip(x in hpreal_strategy()) {
        let shown = x.to_string();
        let back: HPReal = shown.parse().unwrap();
        prop_assert_eq!(x, back);
    }

    #[test]
    fn frac_dist_stays_in_half_unit(x in hpreal_strategy()) {
        let d = x.frac_dist().unwrap();
        prop_assert!(!d.is_negative_value());
        let half: HPReal = "0.5".parse().unwrap();
        prop_assert!(d.value_cmp(&half) != std::cmp::Ordering::Greater);
    }

    #[test]
    fn frac_dist_ignores_integer_shifts(x in hpreal_strategy(), n in -1_000_000i64..1_000_000) {
        let shifted = x.add(&HPReal::from_i64(n));
        let a = x.frac_dist().unwrap();
        let b = shifted.frac_dist().unwrap();
        prop_assert_eq!(a.value_cmp(&b), std::cmp::Ordering::Equal);
    }

    #[test]
    fn round_nearest_minimizes_distance(x in hpreal_strategy(), other in -1_000_000i64..1_000_000) {
        let n = x.round_nearest().unwrap();
        let best = x.sub(&HPReal::from_bigint(n)).abs();
        let candidate = x.sub(&HPReal::from_i64(other)).abs();
        prop_assert!(best.value_cmp(&candidate) != std::cmp::Ordering::Greater);
    }

    #[test]
    fn reduction_preserves_determinant_and_passes_checker(
        entries in proptest::collection::vec(-50i64..50, 9),
    ) {
        let rows: Vec<Vec<BigInt>> = entries
            .chunks(3)
            .map(|c| c.iter().map(|&v| BigInt::from(v)).collect())
            .collect();
        let basis = LatticeBasis::new(rows).unwrap();
        prop_assume!(basis.determinant().is_ok());
        let det = basis.determinant().unwrap();
        let out = basis.lll_reduce(Delta::default()).unwrap();
        prop_assert_eq!(out.reduced.determinant().unwrap(), det);
        prop_assert_eq!(out.transform_det_abs(), BigInt::from(1));
        prop_assert!(out.reduced.is_reduced(Delta::default()));
        // Hadamard defect of the reduced basis is a valid ratio in (0, 1]
        let defect = out.reduced.hadamard_defect(20).unwrap();
        prop_assert!(defect.upper_bound_value().value_cmp(&"1.000000001".parse().unwrap())
            != std::cmp::Ordering::Greater);
        prop_assert!(!defect.is_negative_value());
    }

    #[test]
    fn enumeration_is_strictly_increasing(num in 1u64..999, eps_thousandths in 10u64..400) {
        let alpha = HPReal::from_parts(BigInt::from(num as i64), -3)
            .add(&HPReal::from_i64(3).sqrt(40).unwrap());
        let eps = HPReal::from_parts(BigInt::from(eps_thousandths as i64), -3);
        let qs = reclab::diophantine::enumerate_valid_q(&[alpha], &eps, 2000).unwrap();
        prop_assert!(qs.windows(2).all(|w| w[0] < w[1]));
    }
}
