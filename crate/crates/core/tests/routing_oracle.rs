mod common;

use dream_olsr::flooding::FloodingMode;
use dream_olsr::simulator::{address_of, StaticNetwork};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn check_graph(seed: u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(2..=16);
    let p = rng.gen_range(0.0..0.4);
    let edges = common::random_connected_graph(&mut rng, n, p);
    let mut net = StaticNetwork::with_flooding(n, &edges, FloodingMode::Dream);
    net.converge(6, 2);
    let physical = common::undirected(n, &edges);
    for src in 0..n {
        let expected = common::bfs(&common::advertised_graph(&net, src), src);
        let shortest = common::bfs(&physical, src);
        let table = net.node(src).routes();
        assert_eq!(table.len(), expected.len() - 1, "seed {seed} node {src}: {table:?}");
        for (&dst, &hops) in &expected {
            if dst == src {
                continue;
            }
            let e = &table[&address_of(dst)];
            assert_eq!(e.hops, hops, "seed {seed} {src}->{dst}");
            assert_eq!(hops, shortest[&dst], "MPR topology must preserve shortest paths");
            let nh = e.next_hop.0 as usize - 1;
            assert!(physical[src].contains(&nh));
            assert_eq!(net.node(src).route(e.next_hop).map(|r| r.hops), Some(1));
        }
    }
}

#[test]
fn converged_tables_match_bfs_on_advertised_links() {
    for seed in 0..60 {
        check_graph(seed);
    }
}

#[test]
fn disconnected_components_have_no_routes_across() {
    let mut net = StaticNetwork::with_flooding(4, &[(0, 1), (2, 3)], FloodingMode::Dream);
    net.converge(6, 2);
    assert!(net.node(0).route(address_of(1)).is_some());
    assert!(net.node(0).route(address_of(2)).is_none());
}
