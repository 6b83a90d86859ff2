//! Per-node protocol state and message dispatch.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;
use std::time::Duration;

use thiserror::Error;

use crate::flooding::{self, FloodingMode, ForwardDecision, TcState};
use crate::link_sensing::{self, HelloConfig};
use crate::messages::{
    self, decode_packet, Address, EncodeError, Message, MessageBody, MessageType, MidMessage, Packet, Vtime,
};
use crate::mpr::{on_repository_change, GreedyCoverage, MprStrategy};
use crate::repositories::{Changes, Repositories, DEFAULT_DUP_HOLD};
use crate::routing::{calculate_routes, RoutingEntry, RoutingTable};
use crate::time::Time;

pub const DEFAULT_TC_TTL: u8 = 255;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConfigError {
    #[error("hello_interval must be positive")]
    HelloInterval,
    #[error("tc_interval must be positive")]
    TcInterval,
    #[error("neighbor hold time must be at least the HELLO interval")]
    NeighborHold,
    #[error("willingness {0} is outside 0..=7")]
    Willingness(u8),
    #[error("hold time {0:?} cannot be encoded as a validity time")]
    Unencodable(Duration),
}

#[derive(Debug, Clone, PartialEq)]
pub struct NodeConfig {
    pub hello: HelloConfig,
    pub tc_interval: Duration,
    pub top_hold_time: Duration,
    pub dup_hold_time: Duration,
    pub flooding: FloodingMode,
    pub tc_ttl: u8,
}

impl NodeConfig {
    /// Hold times at three emission intervals.
    pub fn with_intervals(hello_interval: Duration, tc_interval: Duration) -> Self {
        NodeConfig {
            hello: HelloConfig {
                hello_interval,
                willingness: crate::mpr::WILL_DEFAULT,
                neighb_hold_time: hello_interval * 3,
            },
            tc_interval,
            top_hold_time: tc_interval * 3,
            dup_hold_time: DEFAULT_DUP_HOLD,
            flooding: FloodingMode::Dream,
            tc_ttl: DEFAULT_TC_TTL,
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        self.hello.validate()?;
        if self.tc_interval.is_zero() {
            return Err(ConfigError::TcInterval);
        }
        for d in [self.hello.neighb_hold_time, self.top_hold_time] {
            Vtime::from_duration(d).map_err(|_| ConfigError::Unencodable(d))?;
        }
        Ok(())
    }

    pub(crate) fn neighb_vtime(&self) -> Vtime {
        Vtime::from_duration(self.hello.neighb_hold_time).unwrap_or(Vtime(0xff))
    }

    pub(crate) fn top_vtime(&self) -> Vtime {
        Vtime::from_duration(self.top_hold_time).unwrap_or(Vtime(0xff))
    }
}

impl Default for NodeConfig {
    fn default() -> Self {
        Self::with_intervals(Duration::from_millis(500), Duration::from_millis(500))
    }
}

/// Counters for messages that were dropped rather than processed.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct NodeStats {
    pub malformed_hello: u64,
    pub undecodable_packets: u64,
    pub tc_from_non_sym: u64,
    pub tc_stale: u64,
    pub mid_from_non_sym: u64,
    pub mpr_errors: u64,
}

/// Result of handing a received packet to a node.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Reception {
    pub changes: Changes,
    /// Raw messages to retransmit, already carrying decremented TTL.
    pub forwards: Vec<Vec<u8>>,
    /// Types of the messages that were accepted for processing.
    pub processed: Vec<MessageType>,
}

#[derive(Debug, Clone)]
pub struct Node {
    main_addr: Address,
    interfaces: Vec<Address>,
    pub(crate) config: NodeConfig,
    pub(crate) repos: Repositories,
    strategy: Arc<dyn MprStrategy>,
    routes: RoutingTable,
    msg_seq: u16,
    packet_seq: BTreeMap<Address, u16>,
    pub(crate) tc_state: TcState,
    pub(crate) stats: NodeStats,
}

impl Node {
    /// A node whose main address is its only interface.
    pub fn new(main_addr: Address, config: NodeConfig) -> Self {
        Self::with_interfaces(main_addr, vec![main_addr], config)
    }

    /// `interfaces` must contain `main_addr`; it is moved to the front.
    pub fn with_interfaces(main_addr: Address, mut interfaces: Vec<Address>, config: NodeConfig) -> Self {
        interfaces.retain(|a| *a != main_addr);
        interfaces.insert(0, main_addr);
        let mut seen = BTreeSet::new();
        interfaces.retain(|a| seen.insert(*a));
        Node {
            main_addr,
            interfaces,
            config,
            repos: Repositories::new(),
            strategy: Arc::new(GreedyCoverage),
            routes: RoutingTable::new(),
            msg_seq: 0,
            packet_seq: BTreeMap::new(),
            tc_state: TcState::default(),
            stats: NodeStats::default(),
        }
    }

    pub fn set_mpr_strategy(&mut self, strategy: Arc<dyn MprStrategy>) {
        self.strategy = strategy;
    }

    pub fn main_addr(&self) -> Address {
        self.main_addr
    }

    pub fn interfaces(&self) -> &[Address] {
        &self.interfaces
    }

    pub fn is_own_address(&self, a: Address) -> bool {
        self.interfaces.contains(&a)
    }

    pub fn config(&self) -> &NodeConfig {
        &self.config
    }

    pub fn repositories(&self) -> &Repositories {
        &self.repos
    }

    pub fn routes(&self) -> &RoutingTable {
        &self.routes
    }

    pub fn route(&self, dest: Address) -> Option<&RoutingEntry> {
        self.routes.get(&dest)
    }

    pub fn stats(&self) -> NodeStats {
        self.stats
    }

    pub fn ansn(&self) -> u16 {
        self.tc_state.ansn
    }

    pub fn next_msg_seq(&mut self) -> u16 {
        self.msg_seq = self.msg_seq.wrapping_add(1);
        self.msg_seq
    }

    pub fn next_packet_seq(&mut self, iface: Address) -> u16 {
        let s = self.packet_seq.entry(iface).or_insert(0);
        *s = s.wrapping_add(1);
        *s
    }

    /// Build the HELLO to emit on `iface`.
    pub fn hello_message(&mut self, iface: Address, now: Time) -> Message {
        let hello = link_sensing::generate_hello(self, iface, now);
        let seq = self.next_msg_seq();
        Message::new(MessageBody::Hello(hello), self.config.neighb_vtime(), self.main_addr, 1, seq)
    }

    /// Build this interval's TC, if the flooding mode calls for one.
    pub fn tc_message(&mut self, now: Time) -> Option<Message> {
        let tc = flooding::generate_tc(self, now)?;
        let seq = self.next_msg_seq();
        Some(Message::new(MessageBody::Tc(tc), self.config.top_vtime(), self.main_addr, self.config.tc_ttl, seq))
    }

    /// MID declaring the non-main interfaces; `None` for single-interface nodes.
    pub fn mid_message(&mut self) -> Option<Message> {
        if self.interfaces.len() < 2 {
            return None;
        }
        let mid = MidMessage { interface_addresses: self.interfaces[1..].to_vec() };
        let seq = self.next_msg_seq();
        Some(Message::new(MessageBody::Mid(mid), self.config.top_vtime(), self.main_addr, self.config.tc_ttl, seq))
    }

    /// Wrap messages into a packet for `iface` and encode it.
    pub fn packetize(&mut self, iface: Address, messages: Vec<Message>) -> Result<Vec<u8>, EncodeError> {
        let seq = self.next_packet_seq(iface);
        messages::encode_packet(&Packet::new(seq, messages))
    }

    /// Wrap already-encoded messages into a packet for `iface`.
    pub fn packetize_raw(&mut self, iface: Address, raw: &[Vec<u8>]) -> Result<Vec<u8>, EncodeError> {
        let len = messages::PACKET_HEADER_LEN + raw.iter().map(Vec::len).sum::<usize>();
        if len > messages::MAX_PACKET_LEN {
            return Err(EncodeError::PacketTooLarge(len));
        }
        let seq = self.next_packet_seq(iface);
        let mut out = Vec::with_capacity(len);
        out.extend_from_slice(&(len as u16).to_be_bytes());
        out.extend_from_slice(&seq.to_be_bytes());
        raw.iter().for_each(|m| out.extend_from_slice(m));
        Ok(out)
    }

    /// Expire stale tuples and recompute whatever depends on them.
    pub fn tick(&mut self, now: Time) -> Changes {
        let changes = self.repos.purge_expired(now);
        self.recompute(changes, now);
        changes
    }

    /// Bring the MPR set and routing table in line with `changes`.
    pub fn recompute(&mut self, changes: Changes, now: Time) {
        let plan = on_repository_change(changes);
        if plan.mprs {
            self.recompute_mprs();
        }
        if plan.routes {
            self.routes = calculate_routes(&self.repos, &self.interfaces, now);
        }
    }

    pub fn recompute_mprs(&mut self) {
        let sym: BTreeMap<Address, u8> = self.repos.sym_neighbors().map(|n| (n.main_addr, n.willingness)).collect();
        let two_hop: Vec<(Address, Address)> = self
            .repos
            .two_hop()
            .filter(|t| sym.contains_key(&t.neighbor_main_addr))
            .filter(|t| !sym.contains_key(&t.two_hop_addr) && !self.is_own_address(t.two_hop_addr))
            .map(|t| (t.neighbor_main_addr, t.two_hop_addr))
            .collect();
        match self.strategy.select(&sym, &two_hop) {
            Ok(set) => {
                self.repos.set_mpr_set(set);
            }
            Err(_) => self.stats.mpr_errors += 1,
        }
    }

    /// Process one received packet.
    pub fn receive(&mut self, bytes: &[u8], arrival_iface: Address, sender_iface: Address, now: Time) -> Reception {
        let packet = match decode_packet(bytes) {
            Ok(p) => p,
            Err(_) => {
                self.stats.undecodable_packets += 1;
                return Reception::default();
            }
        };
        let mut out = Reception::default();
        let mut offset = messages::PACKET_HEADER_LEN;
        for msg in &packet.messages {
            let size = msg.header.msg_size as usize;
            let raw = &bytes[offset..offset + size];
            offset += size;
            self.receive_message(msg, raw, arrival_iface, sender_iface, now, &mut out);
        }
        self.recompute(out.changes, now);
        out
    }

    fn receive_message(
        &mut self,
        msg: &Message,
        raw: &[u8],
        arrival_iface: Address,
        sender_iface: Address,
        now: Time,
        out: &mut Reception,
    ) {
        let h = &msg.header;
        if h.ttl == 0 || self.is_own_address(h.originator) {
            return;
        }
        if let MessageBody::Hello(hello) = &msg.body {
            let c = link_sensing::process_hello(self, h, hello, sender_iface, arrival_iface, now);
            out.changes |= c;
            out.processed.push(MessageType::Hello);
            return;
        }
        let fresh = self.repos.duplicate(h.originator, h.msg_seq_num).is_none();
        if fresh {
            let c = match &msg.body {
                MessageBody::Tc(tc) => Some(flooding::process_tc(self, h, tc, sender_iface, now)),
                MessageBody::Mid(mid) => Some(flooding::process_mid(self, h, mid, sender_iface, now)),
                _ => None,
            };
            if let Some(c) = c {
                out.changes |= c;
                out.processed.push(h.msg_type);
            }
        }
        if let ForwardDecision::Forward(bytes) =
            flooding::default_forward(self, h, raw, arrival_iface, sender_iface, now)
        {
            out.forwards.push(bytes);
        }
    }
}
