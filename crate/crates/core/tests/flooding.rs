mod common;

use dream_olsr::flooding::FloodingMode;
use dream_olsr::simulator::StaticNetwork;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn converged(n: usize, edges: &[(usize, usize)], mode: FloodingMode) -> StaticNetwork {
    let mut net = StaticNetwork::with_flooding(n, edges, mode);
    net.converge(6, 1);
    net
}

#[test]
fn mpr_flooding_reaches_everyone_for_less() {
    for seed in 0..40 {
        let mut rng = ChaCha8Rng::seed_from_u64(1000 + seed);
        let n = rng.gen_range(2..=20);
        let p = rng.gen_range(0.0..0.5);
        let edges = common::random_connected_graph(&mut rng, n, p);
        let mut blind = converged(n, &edges, FloodingMode::Blind);
        let mut mpr = converged(n, &edges, FloodingMode::Mpr);
        for origin in 0..n {
            let b = blind.flood_tc(origin);
            let m = mpr.flood_tc(origin);
            assert_eq!(b.transmissions, n);
            assert_eq!(b.reached.len(), n);
            assert_eq!(m.reached.len(), n, "seed {seed} origin {origin}");
            assert!(m.transmissions <= b.transmissions);
        }
    }
}

#[test]
fn full_mesh_needs_a_single_transmission() {
    let edges: Vec<_> = (0..6).flat_map(|a| (a + 1..6).map(move |b| (a, b))).collect();
    let mut net = converged(6, &edges, FloodingMode::Mpr);
    let r = net.flood_tc(2);
    assert_eq!((r.transmissions, r.reached.len()), (1, 6));
}

#[test]
fn dream_only_originates_with_selectors() {
    // Star: leaves select the hub; only the hub has anything to advertise.
    let edges = [(0, 1), (0, 2), (0, 3)];
    let mut net = converged(4, &edges, FloodingMode::Dream);
    let now = net.now();
    assert!(net.node_mut(0).tc_message(now).is_some());
    for leaf in 1..4 {
        assert!(net.node_mut(leaf).tc_message(now).is_none());
    }
    let mut blind = converged(4, &edges, FloodingMode::Blind);
    assert!(blind.node_mut(1).tc_message(now).is_some());
}
