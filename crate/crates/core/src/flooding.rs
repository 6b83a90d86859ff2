//! TC generation and processing, MID processing, and the MPR forwarding rule.

use std::fmt;
use std::str::FromStr;

use crate::messages::{Address, MessageHeader, MidMessage, TcMessage};
use crate::node::Node;
use crate::repositories::{serial_newer, Changes};
use crate::time::Time;

/// How a node originates and relays TC messages.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub enum FloodingMode {
    /// Every node advertises all symmetric neighbors every interval and
    /// relays every new message once.
    Blind,
    /// MPR relaying and selector-only advertisement, but every node emits a
    /// TC each interval even when it has no selectors.
    Mpr,
    /// MPR relaying, selector-only advertisement, and TCs only from nodes
    /// that are (or just stopped being) an MPR.
    #[default]
    Dream,
}

impl FloodingMode {
    pub const ALL: [FloodingMode; 3] = [FloodingMode::Blind, FloodingMode::Mpr, FloodingMode::Dream];

    pub fn name(self) -> &'static str {
        match self {
            FloodingMode::Blind => "blind",
            FloodingMode::Mpr => "mpr",
            FloodingMode::Dream => "dream",
        }
    }
}

impl fmt::Display for FloodingMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

impl FromStr for FloodingMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "blind" => Ok(FloodingMode::Blind),
            "mpr" => Ok(FloodingMode::Mpr),
            "dream" | "dream_olsr" => Ok(FloodingMode::Dream),
            other => Err(format!("unknown forwarding mode `{other}` (expected blind, mpr or dream)")),
        }
    }
}

/// Origination state for this node's own TCs.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TcState {
    pub ansn: u16,
    pub last_advertised: Vec<Address>,
    /// Last time the node had at least one MPR selector when asked for a TC.
    pub last_nonempty: Option<Time>,
}

/// The TC this node should originate now, if any.
///
/// The ANSN is bumped whenever the advertised set differs from the previous
/// call, so the transition to an empty TC bumps it exactly once.
pub fn generate_tc(node: &mut Node, now: Time) -> Option<TcMessage> {
    let mode = node.config.flooding;
    let advertised: Vec<Address> = match mode {
        FloodingMode::Blind => node.repos.sym_neighbors().map(|n| n.main_addr).collect(),
        FloodingMode::Mpr | FloodingMode::Dream => node.repos.mpr_selectors().map(|s| s.main_addr).collect(),
    };
    let state = &mut node.tc_state;
    if advertised != state.last_advertised {
        state.ansn = state.ansn.wrapping_add(1);
        state.last_advertised = advertised.clone();
    }
    if !advertised.is_empty() {
        state.last_nonempty = Some(now);
    } else if mode == FloodingMode::Dream {
        let within_grace = state.last_nonempty.is_some_and(|t| now.saturating_since(t) <= node.config.top_hold_time);
        if !within_grace {
            return None;
        }
    }
    Some(TcMessage { ansn: state.ansn, advertised })
}

/// Apply a TC that has not been seen before.
pub fn process_tc(
    node: &mut Node,
    header: &MessageHeader,
    tc: &TcMessage,
    sender_iface: Address,
    now: Time,
) -> Changes {
    let sender = node.repos.resolve_main_address(sender_iface);
    if !node.repos.is_sym_neighbor(sender) {
        node.stats.tc_from_non_sym += 1;
        return Changes::empty();
    }
    let originator = header.originator;
    if let Some(recorded) = node.repos.topology_ansn(originator) {
        if serial_newer(recorded, tc.ansn) {
            node.stats.tc_stale += 1;
            return Changes::empty();
        }
    }
    let expiry = now + header.vtime.as_duration();
    let dests: Vec<Address> = tc.advertised.iter().map(|&a| node.repos.resolve_main_address(a)).collect();
    node.repos.replace_topology(originator, tc.ansn, &dests, expiry)
}

/// Apply a MID that has not been seen before.
pub fn process_mid(
    node: &mut Node,
    header: &MessageHeader,
    mid: &MidMessage,
    sender_iface: Address,
    now: Time,
) -> Changes {
    let sender = node.repos.resolve_main_address(sender_iface);
    if !node.repos.is_sym_neighbor(sender) {
        node.stats.mid_from_non_sym += 1;
        return Changes::empty();
    }
    let expiry = now + header.vtime.as_duration();
    let mut changes = Changes::empty();
    for &iface in &mid.interface_addresses {
        if iface != header.originator {
            changes |= node.repos.refresh_mid(iface, header.originator, expiry);
        }
    }
    changes
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SuppressReason {
    SenderNotSymmetric,
    AlreadyHandled,
    NotSelectedAsMpr,
    TtlExhausted,
    OwnMessage,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ForwardDecision {
    /// Message bytes to emit on all interfaces, TTL and hop count updated.
    Forward(Vec<u8>),
    Suppress(SuppressReason),
}

const TTL_OFFSET: usize = 8;
const HOP_COUNT_OFFSET: usize = 9;

/// Decide whether to relay a flooded message and record it in the duplicate set.
///
/// `raw` is the complete encoded message, header included.
pub fn default_forward(
    node: &mut Node,
    header: &MessageHeader,
    raw: &[u8],
    arrival_iface: Address,
    sender_iface: Address,
    now: Time,
) -> ForwardDecision {
    if node.is_own_address(header.originator) {
        return ForwardDecision::Suppress(SuppressReason::OwnMessage);
    }
    let sender = node.repos.resolve_main_address(sender_iface);
    if !node.repos.is_sym_neighbor(sender) {
        return ForwardDecision::Suppress(SuppressReason::SenderNotSymmetric);
    }
    if let Some(d) = node.repos.duplicate(header.originator, header.msg_seq_num) {
        if d.retransmitted || d.received_ifaces.contains(&arrival_iface) {
            node.repos.record_duplicate(
                header.originator,
                header.msg_seq_num,
                arrival_iface,
                false,
                now,
                node.config.dup_hold_time,
            );
            return ForwardDecision::Suppress(SuppressReason::AlreadyHandled);
        }
    }
    let selected = node.config.flooding == FloodingMode::Blind || node.repos.is_mpr_selector(sender);
    let will_forward = selected && header.ttl > 1;
    node.repos.record_duplicate(
        header.originator,
        header.msg_seq_num,
        arrival_iface,
        will_forward,
        now,
        node.config.dup_hold_time,
    );
    if !selected {
        return ForwardDecision::Suppress(SuppressReason::NotSelectedAsMpr);
    }
    if !will_forward {
        return ForwardDecision::Suppress(SuppressReason::TtlExhausted);
    }
    let mut out = raw.to_vec();
    out[TTL_OFFSET] = header.ttl - 1;
    out[HOP_COUNT_OFFSET] = header.hop_count.saturating_add(1);
    ForwardDecision::Forward(out)
}
