mod common;

use std::collections::BTreeSet;

use dream_olsr::mpr::select_mprs;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn greedy_is_admissible_and_within_twice_optimal(seed in any::<u64>()) {
        let inst = common::random_mpr_instance(&mut ChaCha8Rng::seed_from_u64(seed), 8);
        let (neigh, pairs) = &inst;
        let mprs = select_mprs(neigh, pairs).unwrap();
        for (a, w) in neigh {
            if *w == 7 {
                prop_assert!(mprs.contains(a));
            }
            if *w == 0 {
                prop_assert!(!mprs.contains(a));
            }
        }
        let reachable: BTreeSet<_> = pairs.iter().filter(|p| neigh[&p.0] > 0).map(|p| p.1).collect();
        let covered: BTreeSet<_> = pairs.iter().filter(|p| mprs.contains(&p.0)).map(|p| p.1).collect();
        prop_assert_eq!(&covered, &reachable);
        let best = common::brute_force_min_mpr(&inst);
        prop_assert!(mprs.len() <= 2 * best, "greedy {} vs optimum {}", mprs.len(), best);
    }
}

#[test]
fn oracle_agrees_on_hand_instances() {
    use dream_olsr::messages::Address;
    use std::collections::BTreeMap;
    let a = Address;
    // 1 reaches {10, 11}, 2 reaches {11, 12}, 3 reaches {10, 11, 12}.
    let neigh = BTreeMap::from([(a(1), 3), (a(2), 3), (a(3), 3)]);
    let pairs =
        vec![(a(1), a(10)), (a(1), a(11)), (a(2), a(11)), (a(2), a(12)), (a(3), a(10)), (a(3), a(11)), (a(3), a(12))];
    assert_eq!(common::brute_force_min_mpr(&(neigh.clone(), pairs.clone())), 1);
    assert_eq!(select_mprs(&neigh, &pairs).unwrap(), BTreeSet::from([a(3)]));
    let forced = BTreeMap::from([(a(1), 7), (a(2), 3), (a(3), 3)]);
    assert_eq!(common::brute_force_min_mpr(&(forced, pairs)), 2);
}
