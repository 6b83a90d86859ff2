//! Idealized fixed-topology network for protocol-level experiments.
//!
//! Links are lossless and instantaneous. HELLO rounds deliver every node's
//! HELLO to its neighbors; floods propagate breadth-first, each relay
//! delivering to all of its neighbors before the next one transmits.

use std::collections::{BTreeSet, VecDeque};
use std::time::Duration;

use super::engine::address_of;
use crate::flooding::FloodingMode;
use crate::messages::{Message, MessageBody, TcMessage};
use crate::node::{Node, NodeConfig};
use crate::time::Time;

/// Outcome of flooding one message.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FloodReport {
    /// Frames put on the air, the origination included.
    pub transmissions: usize,
    /// Nodes that received the message, the originator included.
    pub reached: BTreeSet<usize>,
}

#[derive(Debug, Clone)]
pub struct StaticNetwork {
    nodes: Vec<Node>,
    adjacency: Vec<BTreeSet<usize>>,
    now: Time,
    round: Duration,
}

impl StaticNetwork {
    /// Network over undirected `edges` between `n` nodes. Node `i` gets
    /// address `i + 1`.
    pub fn new(n: usize, edges: &[(usize, usize)], config: NodeConfig) -> Self {
        let mut adjacency = vec![BTreeSet::new(); n];
        for &(a, b) in edges {
            assert!(a < n && b < n && a != b, "bad edge ({a}, {b})");
            adjacency[a].insert(b);
            adjacency[b].insert(a);
        }
        let round = config.hello.hello_interval;
        let nodes = (0..n).map(|i| Node::new(address_of(i), config.clone())).collect();
        StaticNetwork { nodes, adjacency, now: Time::ZERO, round }
    }

    pub fn with_flooding(n: usize, edges: &[(usize, usize)], mode: FloodingMode) -> Self {
        let config = NodeConfig { flooding: mode, ..NodeConfig::default() };
        Self::new(n, edges, config)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node(&self, i: usize) -> &Node {
        &self.nodes[i]
    }

    pub fn node_mut(&mut self, i: usize) -> &mut Node {
        &mut self.nodes[i]
    }

    pub fn neighbors(&self, i: usize) -> &BTreeSet<usize> {
        &self.adjacency[i]
    }

    pub fn now(&self) -> Time {
        self.now
    }

    fn advance(&mut self) {
        self.now += self.round;
        let now = self.now;
        self.nodes.iter_mut().for_each(|n| {
            n.tick(now);
        });
    }

    /// Advance one emission interval, then have every node, in index order,
    /// send a HELLO to its neighbors.
    pub fn hello_round(&mut self) {
        self.advance();
        let now = self.now;
        for i in 0..self.nodes.len() {
            let addr = address_of(i);
            let msg = self.nodes[i].hello_message(addr, now);
            let bytes = self.nodes[i].packetize(addr, vec![msg]).expect("hello fits in a packet");
            for &j in &self.adjacency[i] {
                self.nodes[j].receive(&bytes, address_of(j), addr, now);
            }
        }
    }

    /// Every node emits its TC (when its flooding mode produces one) and the
    /// network floods it. Returns per-origin reports.
    pub fn tc_round(&mut self) -> Vec<(usize, FloodReport)> {
        let now = self.now;
        let mut out = Vec::new();
        for i in 0..self.nodes.len() {
            if let Some(msg) = self.nodes[i].tc_message(now) {
                out.push((i, self.flood(i, msg)));
            }
        }
        out
    }

    /// Run `hello_rounds` HELLO rounds followed by `tc_rounds` TC rounds.
    pub fn converge(&mut self, hello_rounds: usize, tc_rounds: usize) {
        for _ in 0..hello_rounds {
            self.hello_round();
        }
        for _ in 0..tc_rounds {
            self.tc_round();
        }
    }

    /// Originate a TC from `origin` advertising its current MPR selectors,
    /// regardless of its flooding mode, and flood it.
    pub fn flood_tc(&mut self, origin: usize) -> FloodReport {
        let n = &mut self.nodes[origin];
        let advertised = n.repositories().mpr_selectors().map(|s| s.main_addr).collect();
        let tc = TcMessage { ansn: n.ansn(), advertised };
        let seq = n.next_msg_seq();
        let msg = Message::new(MessageBody::Tc(tc), crate::messages::Vtime(0x86), n.main_addr(), 255, seq);
        self.flood(origin, msg)
    }

    /// Flood `msg` from `origin`.
    pub fn flood(&mut self, origin: usize, msg: Message) -> FloodReport {
        let now = self.now;
        let key = (msg.header.originator, msg.header.msg_seq_num);
        let first = self.nodes[origin].packetize(address_of(origin), vec![msg]).expect("message fits in a packet");
        let mut queue = VecDeque::from([(origin, first)]);
        let mut transmissions = 0;
        while let Some((sender, bytes)) = queue.pop_front() {
            transmissions += 1;
            let neigh: Vec<usize> = self.adjacency[sender].iter().copied().collect();
            for j in neigh {
                let rx = self.nodes[j].receive(&bytes, address_of(j), address_of(sender), now);
                for raw in rx.forwards {
                    let pkt = self.nodes[j].packetize_raw(address_of(j), &[raw]).expect("forward fits");
                    queue.push_back((j, pkt));
                }
            }
        }
        let reached = (0..self.nodes.len())
            .filter(|&i| i == origin || self.nodes[i].repositories().duplicate(key.0, key.1).is_some())
            .collect();
        FloodReport { transmissions, reached }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::messages::Address;

    #[test]
    fn line_converges_to_full_routes() {
        let mut net = StaticNetwork::with_flooding(4, &[(0, 1), (1, 2), (2, 3)], FloodingMode::Dream);
        net.converge(4, 2);
        let r = net.node(0).route(Address(4)).expect("route 1 -> 4");
        assert_eq!((r.next_hop, r.hops), (Address(2), 3));
        assert!(net.node(1).repositories().mpr_set().contains(&Address(3)));
    }

    #[test]
    fn blind_flood_transmits_once_per_node() {
        let edges = [(0, 1), (0, 2), (1, 2), (2, 3), (3, 4), (1, 4)];
        let mut net = StaticNetwork::with_flooding(5, &edges, FloodingMode::Blind);
        net.converge(4, 0);
        let rep = net.flood_tc(0);
        assert_eq!(rep.transmissions, 5);
        assert_eq!(rep.reached.len(), 5);
    }
}
