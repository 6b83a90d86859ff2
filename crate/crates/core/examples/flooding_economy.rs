//! Count the transmissions needed to flood one TC under each forwarding
//! mode, on an idealized random graph and in the full simulator.

use dream_olsr::flooding::FloodingMode;
use dream_olsr::simulator::{run, Scenario, StaticNetwork};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() {
    let n = 30;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut edges = Vec::new();
    for i in 1..n {
        edges.push((rng.gen_range(0..i), i));
    }
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(0.15) && !edges.contains(&(a, b)) {
                edges.push((a, b));
            }
        }
    }
    println!("graph: {n} nodes, {} links", edges.len());
    for mode in FloodingMode::ALL {
        let mut net = StaticNetwork::with_flooding(n, &edges, mode);
        net.converge(6, 1);
        let total: usize = (0..n).map(|o| net.flood_tc(o).transmissions).sum();
        println!("  {mode:<6} {:.2} transmissions per flooded TC", total as f64 / n as f64);
    }

    println!("simulated, 30 mobile nodes, 30 s:");
    for mode in FloodingMode::ALL {
        let mut s = Scenario::with_nodes(30);
        s.duration = 30.0;
        s.forwarding = mode;
        let m = run(&s).expect("valid scenario").metrics;
        println!(
            "  {mode:<6} tc_transmissions={:<6} control_bytes={:<8} pdr={:.3}",
            m.tc_transmissions, m.control_overhead_bytes, m.pdr
        );
    }
}
