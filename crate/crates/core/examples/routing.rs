//! Converge a 4x4 grid and print one corner's routing table.

use dream_olsr::flooding::FloodingMode;
use dream_olsr::routing::dump_routes;
use dream_olsr::simulator::StaticNetwork;

fn main() {
    let side = 4;
    let mut edges = Vec::new();
    for r in 0..side {
        for c in 0..side {
            let i = r * side + c;
            if c + 1 < side {
                edges.push((i, i + 1));
            }
            if r + 1 < side {
                edges.push((i, i + side));
            }
        }
    }
    let mut net = StaticNetwork::with_flooding(side * side, &edges, FloodingMode::Dream);
    net.converge(6, 2);
    let corner = net.node(0);
    let mprs: Vec<String> = corner.repositories().mpr_set().iter().map(ToString::to_string).collect();
    println!("node {} MPRs: {}", corner.main_addr(), mprs.join(" "));
    print!("{}", dump_routes(corner.routes()));
}
