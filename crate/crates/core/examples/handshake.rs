//! Two nodes exchange HELLOs by hand; print each side's view after every step.

use std::time::Duration;

use dream_olsr::messages::Address;
use dream_olsr::{Node, NodeConfig, Time};

fn show(step: &str, a: &Node, b: &Node, now: Time) {
    let status = |n: &Node, peer: Address| {
        n.repositories().link(n.main_addr(), peer).map_or("none".to_string(), |l| format!("{:?}", l.status(now)))
    };
    println!("{step:<22} A sees B: {:<5} B sees A: {}", status(a, b.main_addr()), status(b, a.main_addr()));
}

fn main() {
    let (ia, ib) = (Address(1), Address(2));
    let mut a = Node::new(ia, NodeConfig::default());
    let mut b = Node::new(ib, NodeConfig::default());
    let mut now = Time::ZERO;
    show("start", &a, &b, now);

    let send = |from: &mut Node, to: &mut Node, now: Time| {
        let iface = from.main_addr();
        let hello = from.hello_message(iface, now);
        let bytes = from.packetize(iface, vec![hello]).unwrap();
        to.receive(&bytes, to.main_addr(), iface, now);
    };

    send(&mut a, &mut b, now);
    show("A -> B (empty HELLO)", &a, &b, now);
    now += Duration::from_millis(100);
    send(&mut b, &mut a, now);
    show("B -> A (lists A)", &a, &b, now);
    now += Duration::from_millis(100);
    send(&mut a, &mut b, now);
    show("A -> B (lists B sym)", &a, &b, now);

    now += Duration::from_secs(3);
    a.tick(now);
    b.tick(now);
    show("3 s of silence", &a, &b, now);
}
