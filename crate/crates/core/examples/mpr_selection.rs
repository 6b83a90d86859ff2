//! Choose multipoint relays for a small neighborhood and show why.

use std::collections::BTreeMap;

use dream_olsr::messages::Address;
use dream_olsr::mpr::{relay_reach, select_mprs, WILL_ALWAYS, WILL_DEFAULT, WILL_NEVER};

fn main() {
    let a = Address;
    let neighbors = BTreeMap::from([
        (a(1), WILL_DEFAULT),
        (a(2), WILL_DEFAULT),
        (a(3), WILL_NEVER),
        (a(4), WILL_DEFAULT),
        (a(5), WILL_ALWAYS),
    ]);
    let two_hop = vec![
        (a(1), a(10)),
        (a(1), a(11)),
        (a(1), a(12)),
        (a(2), a(12)),
        (a(2), a(13)),
        (a(3), a(13)),
        (a(3), a(14)),
        (a(4), a(15)),
    ];

    for (n, w) in &neighbors {
        println!("neighbor {n} willingness {w}");
    }
    for (n, r) in relay_reach(&neighbors, &two_hop).unwrap() {
        let list: Vec<String> = r.iter().map(ToString::to_string).collect();
        println!("  {n} reaches {}", list.join(" "));
    }
    let mprs = select_mprs(&neighbors, &two_hop).unwrap();
    let list: Vec<String> = mprs.iter().map(ToString::to_string).collect();
    println!("MPR set: {}", list.join(" "));
    println!("(14 is only reachable through an unwilling neighbor and stays uncovered)");
}
