//! Multipoint relay selection and the recomputation planner.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::messages::Address;
use crate::repositories::Changes;

pub const WILL_NEVER: u8 = 0;
pub const WILL_DEFAULT: u8 = 3;
pub const WILL_ALWAYS: u8 = 7;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MprError {
    #[error("2-hop tuple references {0}, which is not a symmetric neighbor")]
    UnknownNeighbor(Address),
    #[error("2-hop address {0} is itself a symmetric neighbor")]
    TwoHopIsNeighbor(Address),
}

/// A pluggable MPR selection rule.
///
/// `sym_neighbors` maps each symmetric neighbor to its willingness;
/// `two_hop` lists (neighbor, 2-hop address) pairs.
pub trait MprStrategy: fmt::Debug + Send + Sync {
    fn select(
        &self,
        sym_neighbors: &BTreeMap<Address, u8>,
        two_hop: &[(Address, Address)],
    ) -> Result<BTreeSet<Address>, MprError>;
}

/// Greedy max-coverage selection:
///
/// 1. every willingness-7 neighbor;
/// 2. every neighbor that is the only path to some 2-hop node;
/// 3. while anything is uncovered, the neighbor covering the most uncovered
///    2-hop nodes, preferring higher willingness, then higher degree, then
///    lower address.
///
/// Willingness-0 neighbors are never chosen, so 2-hop nodes reachable only
/// through them are left uncovered.
#[derive(Debug, Clone, Copy, Default)]
pub struct GreedyCoverage;

impl MprStrategy for GreedyCoverage {
    fn select(
        &self,
        sym_neighbors: &BTreeMap<Address, u8>,
        two_hop: &[(Address, Address)],
    ) -> Result<BTreeSet<Address>, MprError> {
        select_mprs(sym_neighbors, two_hop)
    }
}

/// Which 2-hop nodes each relay-capable neighbor reaches.
pub fn relay_reach(
    sym_neighbors: &BTreeMap<Address, u8>,
    two_hop: &[(Address, Address)],
) -> Result<BTreeMap<Address, BTreeSet<Address>>, MprError> {
    let mut reach: BTreeMap<Address, BTreeSet<Address>> = BTreeMap::new();
    for &(n, x) in two_hop {
        let will = *sym_neighbors.get(&n).ok_or(MprError::UnknownNeighbor(n))?;
        if sym_neighbors.contains_key(&x) {
            return Err(MprError::TwoHopIsNeighbor(x));
        }
        if will != WILL_NEVER {
            reach.entry(n).or_default().insert(x);
        }
    }
    Ok(reach)
}

pub fn select_mprs(
    sym_neighbors: &BTreeMap<Address, u8>,
    two_hop: &[(Address, Address)],
) -> Result<BTreeSet<Address>, MprError> {
    let reach = relay_reach(sym_neighbors, two_hop)?;
    let targets: BTreeSet<Address> = reach.values().flatten().copied().collect();

    let mut mprs: BTreeSet<Address> =
        sym_neighbors.iter().filter(|(_, &w)| w == WILL_ALWAYS).map(|(&a, _)| a).collect();

    for x in &targets {
        let mut providers = reach.iter().filter(|(_, r)| r.contains(x));
        if let (Some((&only, _)), None) = (providers.next(), providers.next()) {
            mprs.insert(only);
        }
    }

    let mut covered: BTreeSet<Address> = mprs.iter().filter_map(|m| reach.get(m)).flatten().copied().collect();

    while covered.len() < targets.len() {
        let best = reach
            .iter()
            .filter(|(n, _)| !mprs.contains(*n))
            .map(|(&n, r)| {
                let gain = r.difference(&covered).count();
                (gain, sym_neighbors[&n], r.len(), std::cmp::Reverse(n))
            })
            .filter(|k| k.0 > 0)
            .max();
        let Some((_, _, _, std::cmp::Reverse(pick))) = best else { break };
        covered.extend(reach[&pick].iter().copied());
        mprs.insert(pick);
    }
    Ok(mprs)
}

/// What must be recomputed after a set of repository changes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RecomputePlan {
    pub mprs: bool,
    pub routes: bool,
}

pub fn on_repository_change(changes: Changes) -> RecomputePlan {
    RecomputePlan {
        mprs: changes.intersects(Changes::NEIGHBORS | Changes::TWO_HOP),
        routes: changes
            .intersects(Changes::LINKS | Changes::NEIGHBORS | Changes::TWO_HOP | Changes::TOPOLOGY | Changes::MID),
    }
}
