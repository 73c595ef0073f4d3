//! Property tests for the structural invariants of the lattice operations.

use adnrg_core::compression::{compress, downset_transform, is_downset};
use adnrg_core::io;
use adnrg_core::lattice::{doubling, negate, sumset, LatticeSet, Point};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn arb_set(dim: usize, max_coord: i64, max_points: usize) -> impl Strategy<Value = LatticeSet> {
    prop::collection::vec(
        prop::collection::vec(-max_coord..=max_coord, dim),
        1..=max_points,
    )
    .prop_map(move |rows| {
        LatticeSet::new(dim, rows.into_iter().map(Point::new).collect()).unwrap()
    })
}

proptest! {
    #[test]
    fn sumset_is_commutative_with_cardinality_bounds(
        a in arb_set(2, 6, 12),
        b in arb_set(2, 6, 12),
    ) {
        let ab = sumset(&a, &b).unwrap();
        let ba = sumset(&b, &a).unwrap();
        prop_assert_eq!(&ab, &ba);
        prop_assert!(ab.len() >= a.len().max(b.len()));
        prop_assert!(ab.len() <= a.len() * b.len());
    }

    #[test]
    fn doubling_at_least_one_with_equality_only_for_singletons(
        a in arb_set(1, 50, 14),
        b in arb_set(2, 12, 14),
    ) {
        let one = BigRational::from(BigInt::from(1));
        for set in [&a, &b] {
            let sigma = doubling(set).unwrap();
            prop_assert!(sigma >= one);
            prop_assert_eq!(sigma == one, set.len() == 1);
        }
    }

    #[test]
    fn negation_is_an_involution(a in arb_set(3, 9, 15)) {
        prop_assert_eq!(negate(&negate(&a)), a);
    }

    #[test]
    fn compression_is_idempotent_and_size_monotone(
        a in arb_set(2, 5, 18),
        axis in 0usize..2,
    ) {
        let once = compress(&a, axis).unwrap();
        prop_assert_eq!(compress(&once, axis).unwrap(), once.clone());
        // per column, only even lengths gain one point
        prop_assert!(once.len() >= a.len());
        prop_assert!(once.len() <= a.len() + a.len() / 2 + 1);
    }

    #[test]
    fn downset_transform_is_idempotent_and_produces_downsets(
        a in arb_set(2, 4, 16),
    ) {
        let d = downset_transform(&a);
        prop_assert!(is_downset(&d));
        prop_assert_eq!(downset_transform(&d), d);
    }

    #[test]
    fn set_formats_round_trip(a in arb_set(2, 30, 20)) {
        let text = io::to_text(&a);
        prop_assert_eq!(io::from_text(&text, "prop").unwrap(), a.clone());
        let json = io::to_json(&a);
        prop_assert_eq!(io::from_json(&json, "prop").unwrap(), a);
    }

    #[test]
    fn parsers_never_panic_on_junk(input in ".{0,200}") {
        let _ = io::from_str_any(&input, "junk");
    }
}
