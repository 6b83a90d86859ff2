//! Generators and brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use dream_olsr::messages::{
    Address, HelloMessage, LinkCode, LinkGroup, Message, MessageBody, MessageType, MidMessage, Packet, TcMessage, Vtime,
};
use dream_olsr::simulator::StaticNetwork;
use rand::seq::SliceRandom;
use rand::Rng;

fn addrs<R: Rng>(rng: &mut R, max: usize) -> Vec<Address> {
    let n = rng.gen_range(0..=max);
    (0..n).map(|_| Address(rng.gen())).collect()
}

pub fn random_message<R: Rng>(rng: &mut R) -> Message {
    let body = match rng.gen_range(0..4) {
        0 => {
            let mut pool: Vec<Address> = addrs(rng, 24);
            pool.sort();
            pool.dedup();
            pool.shuffle(rng);
            let mut link_groups = Vec::new();
            while !pool.is_empty() {
                let take = rng.gen_range(0..=pool.len());
                let addresses: Vec<Address> = pool.drain(..take).collect();
                link_groups.push(LinkGroup { code: LinkCode(rng.gen_range(0..16)), addresses });
                if rng.gen_bool(0.2) {
                    break;
                }
            }
            MessageBody::Hello(HelloMessage { htime: Vtime(rng.gen()), willingness: rng.gen_range(0..=7), link_groups })
        }
        1 => MessageBody::Tc(TcMessage { ansn: rng.gen(), advertised: addrs(rng, 20) }),
        2 => MessageBody::Mid(MidMessage { interface_addresses: addrs(rng, 6) }),
        _ => {
            let len = 4 * rng.gen_range(0..8);
            MessageBody::Opaque((0..len).map(|_| rng.gen()).collect())
        }
    };
    let msg_type = match body {
        MessageBody::Opaque(_) => MessageType::from_code(rng.gen_range(4..=255)),
        _ => MessageType::Hello,
    };
    let mut m = match body {
        b @ MessageBody::Opaque(_) => {
            Message::with_type(msg_type, b, Vtime(rng.gen()), Address(rng.gen()), rng.gen(), rng.gen())
        }
        b => Message::new(b, Vtime(rng.gen()), Address(rng.gen()), rng.gen(), rng.gen()),
    };
    m.header.hop_count = rng.gen();
    m
}

pub fn random_packet<R: Rng>(rng: &mut R) -> Packet {
    let n = rng.gen_range(0..5);
    Packet::new(rng.gen(), (0..n).map(|_| random_message(rng)).collect())
}

/// Symmetric neighbors with willingness, and (neighbor, 2-hop) pairs.
pub type MprInstance = (BTreeMap<Address, u8>, Vec<(Address, Address)>);

pub fn random_mpr_instance<R: Rng>(rng: &mut R, max_neighbors: usize) -> MprInstance {
    let n = rng.gen_range(1..=max_neighbors);
    let neighbors: BTreeMap<Address, u8> = (1..=n as u32)
        .map(|a| {
            let w = match rng.gen_range(0..10) {
                0 => 0,
                1 => 7,
                2 => rng.gen_range(1..=6),
                _ => 3,
            };
            (Address(a), w)
        })
        .collect();
    let mut pairs = Vec::new();
    for x in 0..rng.gen_range(0..=12u32) {
        let mut any = false;
        for &nb in neighbors.keys() {
            if rng.gen_bool(0.35) {
                pairs.push((nb, Address(100 + x)));
                any = true;
            }
        }
        if !any {
            let nb = *neighbors.keys().nth(rng.gen_range(0..n)).unwrap();
            pairs.push((nb, Address(100 + x)));
        }
    }
    (neighbors, pairs)
}

/// Smallest admissible MPR set by exhaustive search: it must contain every
/// willingness-7 neighbor, exclude willingness-0 neighbors, and cover every
/// 2-hop node that some willing neighbor reaches.
pub fn brute_force_min_mpr(inst: &MprInstance) -> usize {
    let (neigh, pairs) = inst;
    let list: Vec<(Address, u8)> = neigh.iter().map(|(&a, &w)| (a, w)).collect();
    let reach: Vec<BTreeSet<Address>> = list
        .iter()
        .map(|&(a, w)| if w == 0 { BTreeSet::new() } else { pairs.iter().filter(|p| p.0 == a).map(|p| p.1).collect() })
        .collect();
    let targets: BTreeSet<Address> = reach.iter().flatten().copied().collect();
    let forced: u32 = list.iter().enumerate().filter(|(_, e)| e.1 == 7).map(|(i, _)| 1 << i).sum();
    let banned: u32 = list.iter().enumerate().filter(|(_, e)| e.1 == 0).map(|(i, _)| 1 << i).sum();
    let mut best = usize::MAX;
    for mask in 0u32..(1 << list.len()) {
        if mask & forced != forced || mask & banned != 0 {
            continue;
        }
        let covered: BTreeSet<Address> =
            (0..list.len()).filter(|i| mask & (1 << i) != 0).flat_map(|i| reach[i].iter().copied()).collect();
        if covered == targets {
            best = best.min(mask.count_ones() as usize);
        }
    }
    best
}

/// Random connected graph: a random spanning tree plus extra edges with
/// probability `p`.
pub fn random_connected_graph<R: Rng>(rng: &mut R, n: usize, p: f64) -> Vec<(usize, usize)> {
    let mut edges = BTreeSet::new();
    for i in 1..n {
        edges.insert((rng.gen_range(0..i), i));
    }
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(p) {
                edges.insert((a, b));
            }
        }
    }
    edges.into_iter().collect()
}

pub fn mean_degree(n: usize, edges: &[(usize, usize)]) -> f64 {
    2.0 * edges.len() as f64 / n as f64
}

/// Breadth-first hop counts from `src` over directed `adj`.
pub fn bfs(adj: &[BTreeSet<usize>], src: usize) -> BTreeMap<usize, u32> {
    let mut dist = BTreeMap::from([(src, 0)]);
    let mut q = VecDeque::from([src]);
    while let Some(u) = q.pop_front() {
        let du = dist[&u];
        for &v in &adj[u] {
            if let std::collections::btree_map::Entry::Vacant(e) = dist.entry(v) {
                e.insert(du + 1);
                q.push_back(v);
            }
        }
    }
    dist
}

pub fn undirected(n: usize, edges: &[(usize, usize)]) -> Vec<BTreeSet<usize>> {
    let mut adj = vec![BTreeSet::new(); n];
    for &(a, b) in edges {
        adj[a].insert(b);
        adj[b].insert(a);
    }
    adj
}

/// The link graph node `src` can know about: its own links, its neighbors'
/// links, and for every node `v` an edge from each of `v`'s MPRs to `v`.
pub fn advertised_graph(net: &StaticNetwork, src: usize) -> Vec<BTreeSet<usize>> {
    let n = net.len();
    let mut adj = vec![BTreeSet::new(); n];
    for &nb in net.neighbors(src) {
        adj[src].insert(nb);
        adj[nb].extend(net.neighbors(nb).iter().copied());
    }
    for v in 0..n {
        for m in net.node(v).repositories().mpr_set() {
            adj[m.0 as usize - 1].insert(v);
        }
    }
    adj
}
