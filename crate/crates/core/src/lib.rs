//! MPR-optimized link-state routing for mobile ad-hoc networks.
//!
//! The protocol side is a per-node state machine ([`node::Node`]) built from
//! the information bases in [`repositories`], HELLO handling in
//! [`link_sensing`], relay selection in [`mpr`], TC flooding in [`flooding`]
//! and route calculation in [`routing`]. Messages travel in the binary
//! format of [`messages`].
//!
//! [`simulator`] runs many nodes over a unit-disk radio with Random Waypoint
//! mobility and reports throughput, delivery ratio, delay and control cost.
//! [`cli`] holds the scenario-file, sweep, CSV and chart plumbing behind the
//! `dream-olsr` binary.

pub mod cli;
pub mod flooding;
pub mod link_sensing;
pub mod messages;
pub mod mpr;
pub mod node;
pub mod repositories;
pub mod routing;
pub mod simulator;
pub mod time;

pub use messages::Address;
pub use node::{Node, NodeConfig};
pub use time::Time;
