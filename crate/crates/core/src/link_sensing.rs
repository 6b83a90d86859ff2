//! HELLO generation and processing: link sensing, neighbor detection, 2-hop
//! discovery and MPR-selector signaling.

use std::collections::{BTreeMap, BTreeSet};
use std::time::Duration;

use crate::messages::{Address, HelloMessage, LinkCode, LinkGroup, LinkType, MessageHeader, NeighborType, Vtime};
use crate::node::{ConfigError, Node};
use crate::repositories::{Changes, LinkStatus};
use crate::time::Time;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HelloConfig {
    pub hello_interval: Duration,
    pub willingness: u8,
    pub neighb_hold_time: Duration,
}

impl HelloConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.hello_interval.is_zero() {
            return Err(ConfigError::HelloInterval);
        }
        if self.willingness > 7 {
            return Err(ConfigError::Willingness(self.willingness));
        }
        if self.neighb_hold_time < self.hello_interval {
            return Err(ConfigError::NeighborHold);
        }
        Ok(())
    }
}

fn neighbor_type(node: &Node, main: Address) -> NeighborType {
    let repos = &node.repos;
    if repos.mpr_set().contains(&main) {
        NeighborType::MprNeigh
    } else if repos.is_sym_neighbor(main) {
        NeighborType::SymNeigh
    } else {
        NeighborType::NotNeigh
    }
}

/// HELLO body for `iface`: every link on that interface with its current
/// status, then every other known neighbor with an unspecified link type.
pub fn generate_hello(node: &Node, iface: Address, now: Time) -> HelloMessage {
    let repos = &node.repos;
    let mut groups: BTreeMap<LinkCode, Vec<Address>> = BTreeMap::new();
    let mut listed: BTreeSet<Address> = BTreeSet::new();

    for link in repos.links().filter(|l| l.local_iface == iface) {
        let link_type = match link.status(now) {
            LinkStatus::Sym => LinkType::Sym,
            LinkStatus::Asym => LinkType::Asym,
            LinkStatus::Lost => LinkType::Lost,
        };
        let main = repos.resolve_main_address(link.neighbor_iface);
        let mut code = LinkCode::new(link_type, neighbor_type(node, main));
        if !code.is_valid() {
            // link just turned SYM but neighbor status not yet derived
            code = LinkCode::new(link_type, NeighborType::SymNeigh);
        }
        if listed.insert(link.neighbor_iface) {
            groups.entry(code).or_default().push(link.neighbor_iface);
        }
        listed.insert(main);
    }
    for n in repos.neighbors() {
        if listed.insert(n.main_addr) {
            let code = LinkCode::new(LinkType::Unspec, neighbor_type(node, n.main_addr));
            groups.entry(code).or_default().push(n.main_addr);
        }
    }

    HelloMessage {
        htime: Vtime::from_duration(node.config.hello.hello_interval).unwrap_or(Vtime(0)),
        willingness: node.config.hello.willingness,
        link_groups: groups.into_iter().map(|(code, addresses)| LinkGroup { code, addresses }).collect(),
    }
}

/// Apply a received HELLO.
///
/// `sender_iface` is the transmitting interface, `receiving_iface` ours.
pub fn process_hello(
    node: &mut Node,
    header: &MessageHeader,
    hello: &HelloMessage,
    sender_iface: Address,
    receiving_iface: Address,
    now: Time,
) -> Changes {
    if hello.link_groups.iter().any(|g| !g.code.is_valid()) {
        node.stats.malformed_hello += 1;
        return Changes::empty();
    }
    let originator = header.originator;
    let validity = header.vtime.as_duration();
    let hold = node.config.hello.neighb_hold_time;
    let mut changes = Changes::empty();

    if sender_iface != originator {
        changes |= node.repos.refresh_mid(sender_iface, originator, now + validity);
    }

    let heard_as =
        hello.entries().filter(|(_, a)| *a == receiving_iface).filter_map(|(code, _)| code.link_type()).next();

    let (link, created) = node.repos.link_entry(receiving_iface, sender_iface, now);
    let before = if created { None } else { Some(link.status(now)) };
    link.asym_time = now + validity;
    match heard_as {
        Some(LinkType::Lost) => link.sym_time = None,
        Some(LinkType::Sym | LinkType::Asym) => {
            let sym = now + validity;
            link.sym_time = Some(sym);
            link.expiry_time = sym + hold;
        }
        _ => {}
    }
    link.expiry_time = link.expiry_time.max(link.asym_time);
    if before != Some(link.status(now)) {
        changes |= Changes::LINKS;
    }

    changes |= node.repos.upsert_neighbor(originator, hello.willingness.min(7));
    changes |= node.repos.refresh_neighbors(now);

    if !node.repos.is_sym_neighbor(originator) {
        return changes;
    }
    let expiry = now + validity;
    let own_main = node.main_addr();
    for (code, addr) in hello.entries() {
        let Some(nt) = code.neighbor_type() else { continue };
        if node.is_own_address(addr) {
            if nt == NeighborType::MprNeigh {
                changes |= node.repos.refresh_mpr_selector(originator, expiry);
            }
            continue;
        }
        let two_hop = node.repos.resolve_main_address(addr);
        if two_hop == own_main || two_hop == originator {
            continue;
        }
        match nt {
            NeighborType::SymNeigh | NeighborType::MprNeigh => {
                changes |= node.repos.refresh_two_hop(originator, two_hop, expiry);
            }
            NeighborType::NotNeigh => {
                changes |= node.repos.remove_two_hop(originator, two_hop);
            }
        }
    }
    changes
}
