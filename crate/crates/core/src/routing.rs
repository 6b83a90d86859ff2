//! Routing table calculation by hop-count expansion over the neighbor,
//! 2-hop, topology and MID sets.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::messages::Address;
use crate::mpr::WILL_NEVER;
use crate::repositories::{LinkStatus, Repositories};
use crate::time::Time;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RoutingEntry {
    pub dest: Address,
    pub next_hop: Address,
    pub hops: u32,
    pub local_iface: Address,
}

pub type RoutingTable = BTreeMap<Address, RoutingEntry>;

/// One line per entry: `route dest=<a> next_hop=<a> hops=<n> iface=<a>`.
pub fn dump_routes(table: &RoutingTable) -> String {
    let mut s = String::new();
    for e in table.values() {
        let _ = writeln!(s, "route dest={} next_hop={} hops={} iface={}", e.dest, e.next_hop, e.hops, e.local_iface);
    }
    s
}

/// Build the routing table.
///
/// 1. symmetric neighbors at one hop;
/// 2. 2-hop addresses through a relay-capable symmetric neighbor at two hops;
/// 3. for h = 2, 3, ...: every topology destination whose last hop sits at
///    h hops joins at h + 1 with the same next hop, until a round adds nothing;
/// 4. every MID alias of an entry copies that entry.
///
/// Among equal-length candidates the lowest next hop wins.
pub fn calculate_routes(repos: &Repositories, own: &[Address], now: Time) -> RoutingTable {
    let mut table = RoutingTable::new();
    let excluded = |table: &RoutingTable, d: Address| table.contains_key(&d) || own.contains(&d);

    for n in repos.sym_neighbors() {
        let iface = repos
            .links()
            .find(|l| l.status(now) == LinkStatus::Sym && repos.resolve_main_address(l.neighbor_iface) == n.main_addr)
            .map(|l| l.local_iface);
        let Some(local_iface) = iface else { continue };
        if own.contains(&n.main_addr) {
            continue;
        }
        table.insert(n.main_addr, RoutingEntry { dest: n.main_addr, next_hop: n.main_addr, hops: 1, local_iface });
    }

    let mut two_hop: Vec<RoutingEntry> = Vec::new();
    for t in repos.two_hop() {
        let relay = t.neighbor_main_addr;
        if repos.neighbor(relay).is_none_or(|n| n.willingness == WILL_NEVER) {
            continue;
        }
        let Some(via) = table.get(&relay).copied() else { continue };
        if excluded(&table, t.two_hop_addr) || two_hop.iter().any(|e| e.dest == t.two_hop_addr) {
            continue;
        }
        // two_hop() iterates in (neighbor, address) order, so the first relay is the lowest
        two_hop.push(RoutingEntry {
            dest: t.two_hop_addr,
            next_hop: via.next_hop,
            hops: 2,
            local_iface: via.local_iface,
        });
    }
    for e in two_hop {
        table.insert(e.dest, e);
    }

    let mut h = 2;
    loop {
        let mut round: BTreeMap<Address, RoutingEntry> = BTreeMap::new();
        for t in repos.topology() {
            let Some(last) = table.get(&t.last_addr) else { continue };
            if last.hops != h || excluded(&table, t.dest_addr) {
                continue;
            }
            let cand =
                RoutingEntry { dest: t.dest_addr, next_hop: last.next_hop, hops: h + 1, local_iface: last.local_iface };
            round
                .entry(t.dest_addr)
                .and_modify(|e| {
                    if cand.next_hop < e.next_hop {
                        *e = cand;
                    }
                })
                .or_insert(cand);
        }
        if round.is_empty() {
            break;
        }
        table.extend(round);
        h += 1;
    }

    let entries: Vec<RoutingEntry> = table.values().copied().collect();
    for e in entries {
        for alias in repos.aliases_of(e.dest) {
            if !excluded(&table, alias) {
                table.insert(alias, RoutingEntry { dest: alias, ..e });
            }
        }
    }
    table
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::{BTreeSet, VecDeque};

    fn a(v: u32) -> Address {
        Address(v)
    }

    fn far() -> Time {
        Time::from_micros(u64::MAX / 2)
    }

    fn sym_link(r: &mut Repositories, local: u32, peer: u32, will: u8) {
        let (l, _) = r.link_entry(a(local), a(peer), Time::ZERO);
        l.sym_time = Some(far());
        l.asym_time = far();
        l.expiry_time = far();
        r.upsert_neighbor(a(peer), will);
        r.refresh_neighbors(Time::ZERO);
    }

    /// BFS hop counts from `src` over directed edges.
    fn bfs(edges: &BTreeSet<(u32, u32)>, src: u32) -> BTreeMap<u32, u32> {
        let mut dist = BTreeMap::from([(src, 0)]);
        let mut q = VecDeque::from([src]);
        while let Some(u) = q.pop_front() {
            let du = dist[&u];
            for &(_, v) in edges.range((u, 0)..=(u, u32::MAX)) {
                if let std::collections::btree_map::Entry::Vacant(e) = dist.entry(v) {
                    e.insert(du + 1);
                    q.push_back(v);
                }
            }
        }
        dist
    }

    #[test]
    fn no_neighbors_no_routes() {
        assert!(calculate_routes(&Repositories::new(), &[a(1)], Time::ZERO).is_empty());
    }

    #[test]
    fn line_topology_matches_bfs() {
        // A=1 - B=2 - C=3 - D=4, computed at A. C selected B, D selected C.
        let mut r = Repositories::new();
        sym_link(&mut r, 1, 2, 3);
        r.refresh_two_hop(a(2), a(3), far());
        r.replace_topology(a(2), 1, &[a(1), a(3)], far());
        r.replace_topology(a(3), 1, &[a(2), a(4)], far());
        let t = calculate_routes(&r, &[a(1)], Time::ZERO);
        let got: Vec<(u32, u32, u32)> = t.values().map(|e| (e.dest.0, e.next_hop.0, e.hops)).collect();
        assert_eq!(got, vec![(2, 2, 1), (3, 2, 2), (4, 2, 3)]);

        let edges = BTreeSet::from([(1, 2), (2, 3), (2, 1), (3, 2), (3, 4)]);
        let d = bfs(&edges, 1);
        for e in t.values() {
            assert_eq!(d[&e.dest.0], e.hops);
        }
        assert!(t.values().all(|e| t[&e.next_hop].hops == 1));
    }

    #[test]
    fn lowest_next_hop_wins_ties() {
        let mut r = Repositories::new();
        sym_link(&mut r, 1, 5, 3);
        sym_link(&mut r, 1, 3, 3);
        r.refresh_two_hop(a(5), a(9), far());
        r.refresh_two_hop(a(3), a(9), far());
        r.replace_topology(a(9), 1, &[a(20)], far());
        let t = calculate_routes(&r, &[a(1)], Time::ZERO);
        assert_eq!(t[&a(9)].next_hop, a(3));
        assert_eq!(t[&a(20)], RoutingEntry { dest: a(20), next_hop: a(3), hops: 3, local_iface: a(1) });
    }

    #[test]
    fn will_never_neighbors_do_not_relay() {
        let mut r = Repositories::new();
        sym_link(&mut r, 1, 2, 0);
        r.refresh_two_hop(a(2), a(3), far());
        let t = calculate_routes(&r, &[a(1)], Time::ZERO);
        assert!(t.contains_key(&a(2)));
        assert!(!t.contains_key(&a(3)));
    }

    #[test]
    fn aliases_copy_their_main_entry() {
        let mut r = Repositories::new();
        sym_link(&mut r, 1, 2, 3);
        r.refresh_two_hop(a(2), a(3), far());
        r.refresh_mid(a(33), a(3), far());
        r.refresh_mid(a(11), a(1), far());
        let t = calculate_routes(&r, &[a(1), a(11)], Time::ZERO);
        assert_eq!(t[&a(33)], RoutingEntry { dest: a(33), ..t[&a(3)] });
        assert!(!t.contains_key(&a(11)) && !t.contains_key(&a(1)));
    }

    #[test]
    fn dump_format() {
        let mut r = Repositories::new();
        sym_link(&mut r, 1, 2, 3);
        let t = calculate_routes(&r, &[a(1)], Time::ZERO);
        assert_eq!(dump_routes(&t), "route dest=2 next_hop=2 hops=1 iface=1\n");
    }
}
