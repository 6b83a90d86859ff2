//! Per-node information bases.
//!
//! Every tuple carries its own expiry; expiry is lazy and happens only in
//! [`Repositories::purge_expired`]. Mutating operations report which sets
//! changed as [`Changes`] so the caller can schedule MPR and route
//! recomputation.
//!
//! # Snapshot format
//!
//! [`Repositories::dump`] writes one line per tuple, sets in the order below,
//! tuples in ascending key order. Times are integer microseconds.
//!
//! ```text
//! link local=<addr> neighbor=<addr> sym=<t|-> asym=<t> expiry=<t>
//! neighbor main=<addr> status=<SYM|NOT_SYM> willingness=<0..7>
//! two_hop neighbor=<addr> two_hop=<addr> expiry=<t>
//! mpr addr=<addr>
//! mpr_selector main=<addr> expiry=<t>
//! topology dest=<addr> last=<addr> ansn=<n> expiry=<t>
//! duplicate originator=<addr> seq=<n> retransmitted=<true|false> ifaces=<addr>[,<addr>...] expiry=<t>
//! mid iface=<addr> main=<addr> expiry=<t>
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::time::Duration;

use bitflags::bitflags;

use crate::messages::Address;
use crate::time::Time;

bitflags! {
    /// Which information bases changed during an operation.
    #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
    pub struct Changes: u8 {
        const LINKS = 1 << 0;
        const NEIGHBORS = 1 << 1;
        const TWO_HOP = 1 << 2;
        const MPR_SEL = 1 << 3;
        const TOPOLOGY = 1 << 4;
        const DUPLICATE = 1 << 5;
        const MID = 1 << 6;
    }
}

/// `a` is newer than `b` under 16-bit serial-number arithmetic.
pub fn serial_newer(a: u16, b: u16) -> bool {
    a != b && a.wrapping_sub(b) < 0x8000
}

/// Default hold time for duplicate-set tuples.
pub const DEFAULT_DUP_HOLD: Duration = Duration::from_secs(30);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LinkStatus {
    Sym,
    Asym,
    Lost,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LinkTuple {
    pub local_iface: Address,
    pub neighbor_iface: Address,
    /// `None` until the link has been confirmed bidirectional.
    pub sym_time: Option<Time>,
    pub asym_time: Time,
    pub expiry_time: Time,
}

impl LinkTuple {
    pub fn status(&self, now: Time) -> LinkStatus {
        if self.sym_time.is_some_and(|t| now <= t) {
            LinkStatus::Sym
        } else if now <= self.asym_time {
            LinkStatus::Asym
        } else {
            LinkStatus::Lost
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NeighborStatus {
    Sym,
    NotSym,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NeighborTuple {
    pub main_addr: Address,
    pub status: NeighborStatus,
    pub willingness: u8,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TwoHopTuple {
    pub neighbor_main_addr: Address,
    pub two_hop_addr: Address,
    pub expiry_time: Time,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MprSelectorTuple {
    pub main_addr: Address,
    pub expiry_time: Time,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TopologyTuple {
    pub dest_addr: Address,
    pub last_addr: Address,
    pub ansn: u16,
    pub expiry_time: Time,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DuplicateTuple {
    pub originator: Address,
    pub msg_seq_num: u16,
    pub retransmitted: bool,
    pub received_ifaces: BTreeSet<Address>,
    pub expiry_time: Time,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MidTuple {
    pub iface_addr: Address,
    pub main_addr: Address,
    pub expiry_time: Time,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DuplicateStatus {
    Fresh,
    SeenNewIface,
    Seen,
}

#[derive(Debug, Clone, Default)]
pub struct Repositories {
    links: BTreeMap<(Address, Address), LinkTuple>,
    neighbors: BTreeMap<Address, NeighborTuple>,
    two_hop: BTreeMap<(Address, Address), TwoHopTuple>,
    mpr_set: BTreeSet<Address>,
    mpr_selectors: BTreeMap<Address, MprSelectorTuple>,
    topology: BTreeMap<(Address, Address), TopologyTuple>,
    duplicates: BTreeMap<(Address, u16), DuplicateTuple>,
    mid: BTreeMap<Address, MidTuple>,
}

fn drain_expired<K: Ord + Clone, V>(map: &mut BTreeMap<K, V>, now: Time, expiry: impl Fn(&V) -> Time) -> bool {
    let before = map.len();
    map.retain(|_, v| expiry(v) >= now);
    map.len() != before
}

impl Repositories {
    pub fn new() -> Self {
        Self::default()
    }

    // ---- read access ----

    pub fn links(&self) -> impl Iterator<Item = &LinkTuple> {
        self.links.values()
    }

    pub fn link(&self, local_iface: Address, neighbor_iface: Address) -> Option<&LinkTuple> {
        self.links.get(&(local_iface, neighbor_iface))
    }

    pub fn neighbors(&self) -> impl Iterator<Item = &NeighborTuple> {
        self.neighbors.values()
    }

    pub fn neighbor(&self, main: Address) -> Option<&NeighborTuple> {
        self.neighbors.get(&main)
    }

    pub fn is_sym_neighbor(&self, main: Address) -> bool {
        self.neighbors.get(&main).is_some_and(|n| n.status == NeighborStatus::Sym)
    }

    pub fn sym_neighbors(&self) -> impl Iterator<Item = &NeighborTuple> {
        self.neighbors.values().filter(|n| n.status == NeighborStatus::Sym)
    }

    pub fn two_hop(&self) -> impl Iterator<Item = &TwoHopTuple> {
        self.two_hop.values()
    }

    pub fn mpr_set(&self) -> &BTreeSet<Address> {
        &self.mpr_set
    }

    pub fn mpr_selectors(&self) -> impl Iterator<Item = &MprSelectorTuple> {
        self.mpr_selectors.values()
    }

    pub fn is_mpr_selector(&self, main: Address) -> bool {
        self.mpr_selectors.contains_key(&main)
    }

    pub fn topology(&self) -> impl Iterator<Item = &TopologyTuple> {
        self.topology.values()
    }

    pub fn duplicate(&self, originator: Address, seq: u16) -> Option<&DuplicateTuple> {
        self.duplicates.get(&(originator, seq))
    }

    pub fn duplicates(&self) -> impl Iterator<Item = &DuplicateTuple> {
        self.duplicates.values()
    }

    pub fn mid(&self) -> impl Iterator<Item = &MidTuple> {
        self.mid.values()
    }

    /// Interface addresses registered for `main` in the MID set.
    pub fn aliases_of(&self, main: Address) -> impl Iterator<Item = Address> + '_ {
        self.mid.values().filter(move |t| t.main_addr == main).map(|t| t.iface_addr)
    }

    pub fn resolve_main_address(&self, addr: Address) -> Address {
        self.mid.get(&addr).map_or(addr, |t| t.main_addr)
    }

    // ---- link and neighbor sets ----

    /// Fetch the link tuple for the pair, creating a not-yet-symmetric one if
    /// absent. The flag reports whether it was created.
    pub fn link_entry(&mut self, local_iface: Address, neighbor_iface: Address, now: Time) -> (&mut LinkTuple, bool) {
        let mut created = false;
        let t = self.links.entry((local_iface, neighbor_iface)).or_insert_with(|| {
            created = true;
            LinkTuple { local_iface, neighbor_iface, sym_time: None, asym_time: now, expiry_time: now }
        });
        (t, created)
    }

    /// Create or update the neighbor tuple's willingness. Status is derived
    /// separately by [`Self::refresh_neighbors`].
    pub fn upsert_neighbor(&mut self, main: Address, willingness: u8) -> Changes {
        match self.neighbors.get_mut(&main) {
            Some(n) if n.willingness == willingness => Changes::empty(),
            Some(n) => {
                n.willingness = willingness;
                Changes::NEIGHBORS
            }
            None => {
                self.neighbors
                    .insert(main, NeighborTuple { main_addr: main, status: NeighborStatus::NotSym, willingness });
                Changes::NEIGHBORS
            }
        }
    }

    /// Re-derive neighbor status from the link set.
    ///
    /// Neighbors without links are removed. A neighbor that is no longer
    /// symmetric loses its 2-hop and MPR-selector tuples.
    pub fn refresh_neighbors(&mut self, now: Time) -> Changes {
        let mut changes = Changes::empty();
        let mut linked: BTreeMap<Address, NeighborStatus> = BTreeMap::new();
        for l in self.links.values() {
            let main = self.mid.get(&l.neighbor_iface).map_or(l.neighbor_iface, |t| t.main_addr);
            let e = linked.entry(main).or_insert(NeighborStatus::NotSym);
            if l.status(now) == LinkStatus::Sym {
                *e = NeighborStatus::Sym;
            }
        }
        let before = self.neighbors.len();
        self.neighbors.retain(|main, _| linked.contains_key(main));
        if self.neighbors.len() != before {
            changes |= Changes::NEIGHBORS;
        }
        for (main, n) in self.neighbors.iter_mut() {
            let status = linked[main];
            if n.status != status {
                n.status = status;
                changes |= Changes::NEIGHBORS;
            }
        }
        let neighbors = &self.neighbors;
        let sym = |a: &Address| neighbors.get(a).is_some_and(|n| n.status == NeighborStatus::Sym);
        let before = self.two_hop.len();
        self.two_hop.retain(|(n, _), _| sym(n));
        if self.two_hop.len() != before {
            changes |= Changes::TWO_HOP;
        }
        let before = self.mpr_selectors.len();
        self.mpr_selectors.retain(|a, _| sym(a));
        if self.mpr_selectors.len() != before {
            changes |= Changes::MPR_SEL;
        }
        let before = self.mpr_set.len();
        self.mpr_set.retain(|a| sym(a));
        if self.mpr_set.len() != before {
            changes |= Changes::NEIGHBORS;
        }
        changes
    }

    // ---- 2-hop, MPR and selector sets ----

    pub fn refresh_two_hop(&mut self, neighbor: Address, two_hop: Address, expiry: Time) -> Changes {
        match self.two_hop.get_mut(&(neighbor, two_hop)) {
            Some(t) => {
                t.expiry_time = t.expiry_time.max(expiry);
                Changes::empty()
            }
            None => {
                self.two_hop.insert(
                    (neighbor, two_hop),
                    TwoHopTuple { neighbor_main_addr: neighbor, two_hop_addr: two_hop, expiry_time: expiry },
                );
                Changes::TWO_HOP
            }
        }
    }

    pub fn remove_two_hop(&mut self, neighbor: Address, two_hop: Address) -> Changes {
        if self.two_hop.remove(&(neighbor, two_hop)).is_some() {
            Changes::TWO_HOP
        } else {
            Changes::empty()
        }
    }

    /// Replace the MPR set; returns true if it changed.
    pub fn set_mpr_set(&mut self, mprs: BTreeSet<Address>) -> bool {
        if self.mpr_set == mprs {
            return false;
        }
        self.mpr_set = mprs;
        true
    }

    pub fn refresh_mpr_selector(&mut self, main: Address, expiry: Time) -> Changes {
        match self.mpr_selectors.get_mut(&main) {
            Some(t) => {
                t.expiry_time = t.expiry_time.max(expiry);
                Changes::empty()
            }
            None => {
                self.mpr_selectors.insert(main, MprSelectorTuple { main_addr: main, expiry_time: expiry });
                Changes::MPR_SEL
            }
        }
    }

    // ---- topology set ----

    /// Highest ANSN recorded for topology tuples originated by `last`.
    pub fn topology_ansn(&self, last: Address) -> Option<u16> {
        self.topology.values().filter(|t| t.last_addr == last).map(|t| t.ansn).reduce(|a, b| {
            if serial_newer(b, a) {
                b
            } else {
                a
            }
        })
    }

    /// Make the tuples originated by `last` exactly `dests`, all carrying `ansn`.
    pub fn replace_topology(&mut self, last: Address, ansn: u16, dests: &[Address], expiry: Time) -> Changes {
        let wanted: BTreeSet<Address> = dests.iter().copied().collect();
        let before = self.topology.len();
        self.topology.retain(|(d, l), _| *l != last || wanted.contains(d));
        let mut changed = self.topology.len() != before;
        for &d in &wanted {
            match self.topology.get_mut(&(d, last)) {
                Some(t) => {
                    t.ansn = ansn;
                    t.expiry_time = expiry;
                }
                None => {
                    self.topology
                        .insert((d, last), TopologyTuple { dest_addr: d, last_addr: last, ansn, expiry_time: expiry });
                    changed = true;
                }
            }
        }
        if changed {
            Changes::TOPOLOGY
        } else {
            Changes::empty()
        }
    }

    // ---- duplicate and MID sets ----

    pub fn record_duplicate(
        &mut self,
        originator: Address,
        seq: u16,
        iface: Address,
        will_retransmit: bool,
        now: Time,
        hold: Duration,
    ) -> DuplicateStatus {
        let expiry = now + hold;
        match self.duplicates.get_mut(&(originator, seq)) {
            Some(t) => {
                t.retransmitted |= will_retransmit;
                t.expiry_time = expiry;
                if t.received_ifaces.insert(iface) {
                    DuplicateStatus::SeenNewIface
                } else {
                    DuplicateStatus::Seen
                }
            }
            None => {
                self.duplicates.insert(
                    (originator, seq),
                    DuplicateTuple {
                        originator,
                        msg_seq_num: seq,
                        retransmitted: will_retransmit,
                        received_ifaces: BTreeSet::from([iface]),
                        expiry_time: expiry,
                    },
                );
                DuplicateStatus::Fresh
            }
        }
    }

    pub fn refresh_mid(&mut self, iface: Address, main: Address, expiry: Time) -> Changes {
        match self.mid.get_mut(&iface) {
            Some(t) if t.main_addr == main => {
                t.expiry_time = t.expiry_time.max(expiry);
                Changes::empty()
            }
            _ => {
                self.mid.insert(iface, MidTuple { iface_addr: iface, main_addr: main, expiry_time: expiry });
                Changes::MID
            }
        }
    }

    // ---- expiry ----

    /// Drop every tuple whose expiry is before `now` and re-derive neighbor
    /// status. Idempotent for a fixed `now`.
    pub fn purge_expired(&mut self, now: Time) -> Changes {
        let mut changes = Changes::empty();
        if drain_expired(&mut self.links, now, |t| t.expiry_time) {
            changes |= Changes::LINKS;
        }
        if drain_expired(&mut self.two_hop, now, |t| t.expiry_time) {
            changes |= Changes::TWO_HOP;
        }
        if drain_expired(&mut self.mpr_selectors, now, |t| t.expiry_time) {
            changes |= Changes::MPR_SEL;
        }
        if drain_expired(&mut self.topology, now, |t| t.expiry_time) {
            changes |= Changes::TOPOLOGY;
        }
        if drain_expired(&mut self.duplicates, now, |t| t.expiry_time) {
            changes |= Changes::DUPLICATE;
        }
        if drain_expired(&mut self.mid, now, |t| t.expiry_time) {
            changes |= Changes::MID;
        }
        changes | self.refresh_neighbors(now)
    }

    pub fn dump(&self) -> String {
        let mut s = String::new();
        for l in self.links.values() {
            let sym = l.sym_time.map_or_else(|| "-".to_string(), |t| t.to_string());
            let _ = writeln!(
                s,
                "link local={} neighbor={} sym={} asym={} expiry={}",
                l.local_iface, l.neighbor_iface, sym, l.asym_time, l.expiry_time
            );
        }
        for n in self.neighbors.values() {
            let status = match n.status {
                NeighborStatus::Sym => "SYM",
                NeighborStatus::NotSym => "NOT_SYM",
            };
            let _ = writeln!(s, "neighbor main={} status={} willingness={}", n.main_addr, status, n.willingness);
        }
        for t in self.two_hop.values() {
            let _ = writeln!(
                s,
                "two_hop neighbor={} two_hop={} expiry={}",
                t.neighbor_main_addr, t.two_hop_addr, t.expiry_time
            );
        }
        for a in &self.mpr_set {
            let _ = writeln!(s, "mpr addr={a}");
        }
        for t in self.mpr_selectors.values() {
            let _ = writeln!(s, "mpr_selector main={} expiry={}", t.main_addr, t.expiry_time);
        }
        for t in self.topology.values() {
            let _ = writeln!(
                s,
                "topology dest={} last={} ansn={} expiry={}",
                t.dest_addr, t.last_addr, t.ansn, t.expiry_time
            );
        }
        for t in self.duplicates.values() {
            let ifaces: Vec<String> = t.received_ifaces.iter().map(|a| a.to_string()).collect();
            let _ = writeln!(
                s,
                "duplicate originator={} seq={} retransmitted={} ifaces={} expiry={}",
                t.originator,
                t.msg_seq_num,
                t.retransmitted,
                ifaces.join(","),
                t.expiry_time
            );
        }
        for t in self.mid.values() {
            let _ = writeln!(s, "mid iface={} main={} expiry={}", t.iface_addr, t.main_addr, t.expiry_time);
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn t(s: u64) -> Time {
        Time::from_micros(s * 1_000_000)
    }

    fn a(v: u32) -> Address {
        Address(v)
    }

    #[test]
    fn purge_on_empty_reports_nothing() {
        let mut r = Repositories::new();
        assert_eq!(r.purge_expired(t(100)), Changes::empty());
    }

    #[test]
    fn link_expiry_cascades_to_neighbor() {
        let mut r = Repositories::new();
        let (l, _) = r.link_entry(a(1), a(2), t(0));
        l.sym_time = Some(t(4));
        l.asym_time = t(4);
        l.expiry_time = t(5);
        r.upsert_neighbor(a(2), 3);
        r.refresh_neighbors(t(1));
        assert!(r.is_sym_neighbor(a(2)));
        assert_eq!(r.purge_expired(t(6)), Changes::LINKS | Changes::NEIGHBORS);
        assert!(r.neighbor(a(2)).is_none());
        assert_eq!(r.purge_expired(t(6)), Changes::empty());
    }

    #[test]
    fn sym_decay_downgrades_neighbor_and_drops_dependents() {
        let mut r = Repositories::new();
        let (l, _) = r.link_entry(a(1), a(2), t(0));
        l.sym_time = Some(t(2));
        l.asym_time = t(8);
        l.expiry_time = t(8);
        r.upsert_neighbor(a(2), 3);
        r.refresh_neighbors(t(1));
        r.refresh_two_hop(a(2), a(3), t(9));
        r.refresh_mpr_selector(a(2), t(9));
        r.set_mpr_set(BTreeSet::from([a(2)]));
        let c = r.purge_expired(t(3));
        assert_eq!(c, Changes::NEIGHBORS | Changes::TWO_HOP | Changes::MPR_SEL);
        assert_eq!(r.neighbor(a(2)).unwrap().status, NeighborStatus::NotSym);
        assert_eq!(r.two_hop().count(), 0);
        assert!(r.mpr_set().is_empty());
    }

    #[test]
    fn resolve_uses_mid_with_identity_fallback() {
        let mut r = Repositories::new();
        assert_eq!(r.resolve_main_address(a(7)), a(7));
        r.refresh_mid(a(9), a(4), t(5));
        assert_eq!(r.resolve_main_address(a(9)), a(4));
        assert_eq!(r.purge_expired(t(6)), Changes::MID);
        assert_eq!(r.resolve_main_address(a(9)), a(9));
    }

    #[test]
    fn duplicate_tracking_per_interface() {
        let mut r = Repositories::new();
        let hold = DEFAULT_DUP_HOLD;
        assert_eq!(r.record_duplicate(a(1), 1, a(10), true, t(0), hold), DuplicateStatus::Fresh);
        assert_eq!(r.record_duplicate(a(1), 1, a(10), false, t(1), hold), DuplicateStatus::Seen);
        assert_eq!(r.record_duplicate(a(1), 1, a(11), false, t(2), hold), DuplicateStatus::SeenNewIface);
        let d = r.duplicate(a(1), 1).unwrap();
        assert!(d.retransmitted);
        assert_eq!(d.expiry_time, t(32));
        assert_eq!(d.received_ifaces.len(), 2);
    }

    #[test]
    fn serial_arithmetic_wraps() {
        assert!(serial_newer(5, 4));
        assert!(!serial_newer(4, 5));
        assert!(serial_newer(0, 65535));
        assert!(!serial_newer(65535, 0));
        assert!(!serial_newer(7, 7));
    }

    #[test]
    fn topology_replace_removes_unlisted() {
        let mut r = Repositories::new();
        assert_eq!(r.replace_topology(a(9), 5, &[a(1), a(2)], t(10)), Changes::TOPOLOGY);
        assert_eq!(r.replace_topology(a(9), 5, &[a(1), a(2)], t(11)), Changes::empty());
        assert_eq!(r.replace_topology(a(9), 6, &[a(1)], t(12)), Changes::TOPOLOGY);
        let v: Vec<_> = r.topology().map(|t| (t.dest_addr, t.last_addr, t.ansn)).collect();
        assert_eq!(v, vec![(a(1), a(9), 6)]);
        assert_eq!(r.topology_ansn(a(9)), Some(6));
    }

    #[test]
    fn dump_format() {
        let mut r = Repositories::new();
        r.refresh_mid(a(9), a(4), t(5));
        r.replace_topology(a(3), 2, &[a(1)], t(1));
        r.record_duplicate(a(3), 7, a(1), false, t(0), Duration::from_secs(1));
        assert_eq!(
            r.dump(),
            "topology dest=1 last=3 ansn=2 expiry=1000000\n\
             duplicate originator=3 seq=7 retransmitted=false ifaces=1 expiry=1000000\n\
             mid iface=9 main=4 expiry=5000000\n"
        );
    }

    #[derive(Debug, Clone)]
    enum Op {
        Topology(u32, u32, u64),
        Mid(u32, u32, u64),
        Dup(u32, u16, u64),
        Purge(u64),
    }

    fn op() -> impl Strategy<Value = Op> {
        prop_oneof![
            (1u32..5, 1u32..5, 0u64..20).prop_map(|(d, l, e)| Op::Topology(d, l, e)),
            (1u32..6, 1u32..4, 0u64..20).prop_map(|(i, m, e)| Op::Mid(i, m, e)),
            (1u32..4, 0u16..4, 0u64..20).prop_map(|(o, s, e)| Op::Dup(o, s, e)),
            (0u64..4).prop_map(Op::Purge),
        ]
    }

    proptest! {
        // Oracle: flat (key -> value, expiry) maps, filtered by expiry at each purge.
        #[test]
        fn purge_matches_replay(ops in proptest::collection::vec(op(), 1..60)) {
            let mut r = Repositories::new();
            let mut now = 0u64;
            let mut topo: BTreeMap<(u32, u32), u64> = BTreeMap::new();
            let mut mid: BTreeMap<u32, (u32, u64)> = BTreeMap::new();
            let mut dup: BTreeMap<(u32, u16), u64> = BTreeMap::new();
            for op in ops {
                match op {
                    Op::Topology(d, l, e) => {
                        let exp = now + e;
                        // single-destination replace keyed by originator
                        topo.retain(|(_, ol), _| *ol != l);
                        topo.insert((d, l), exp);
                        r.replace_topology(a(l), 0, &[a(d)], Time::from_micros(exp));
                    }
                    Op::Mid(i, m, e) => {
                        let exp = now + e;
                        let entry = mid.entry(i).or_insert((m, exp));
                        if entry.0 == m { entry.1 = entry.1.max(exp); } else { *entry = (m, exp); }
                        r.refresh_mid(a(i), a(m), Time::from_micros(exp));
                    }
                    Op::Dup(o, s, e) => {
                        dup.insert((o, s), now + e);
                        r.record_duplicate(a(o), s, a(1), false, Time::from_micros(now), Duration::from_micros(e));
                    }
                    Op::Purge(step) => {
                        now += step;
                        r.purge_expired(Time::from_micros(now));
                        topo.retain(|_, e| *e >= now);
                        mid.retain(|_, (_, e)| *e >= now);
                        dup.retain(|_, e| *e >= now);
                    }
                }
                let got_topo: BTreeMap<(u32, u32), u64> =
                    r.topology().map(|t| ((t.dest_addr.0, t.last_addr.0), t.expiry_time.as_micros())).collect();
                let got_mid: BTreeMap<u32, (u32, u64)> =
                    r.mid().map(|t| (t.iface_addr.0, (t.main_addr.0, t.expiry_time.as_micros()))).collect();
                let got_dup: BTreeMap<(u32, u16), u64> =
                    r.duplicates().map(|t| ((t.originator.0, t.msg_seq_num), t.expiry_time.as_micros())).collect();
                prop_assert_eq!(&got_topo, &topo);
                prop_assert_eq!(&got_mid, &mid);
                prop_assert_eq!(&got_dup, &dup);
            }
        }
    }
}
