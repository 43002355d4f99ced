//! Synchronous lockstep execution of the optimized protocol.

use std::collections::BTreeMap;

use super::codec::ColorMessage;
use super::node::{absorb, NodeState, Tracking};
use crate::error::{Error, Result};
use crate::graph::{NodeId, Topology};
use crate::validity::{Color, Coloring};

pub const DEFAULT_MAX_ROUNDS: u32 = 10_000;

/// Exchanges run before the first coloring round so that every node has
/// heard its three-hop neighborhood once. They are not counted as rounds.
pub const WARMUP_ROUNDS: u32 = 3;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RoundRecord {
    pub round: u32,
    pub colored: Vec<(NodeId, Color)>,
}

/// Who colored in each round, by ascending round.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Trace {
    pub rounds: Vec<RoundRecord>,
}

impl Trace {
    pub fn round_of(&self) -> BTreeMap<NodeId, u32> {
        self.rounds.iter().flat_map(|r| r.colored.iter().map(move |&(id, _)| (id, r.round))).collect()
    }

    pub fn coloring(&self) -> Coloring {
        self.rounds.iter().flat_map(|r| r.colored.iter().copied()).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SerenaRun {
    pub coloring: Coloring,
    /// Round in which the last node colored; 0 for an empty topology.
    pub rounds: u32,
    pub trace: Trace,
    pub messages_sent: u64,
    pub octets_sent: u64,
}

pub(crate) fn priorities_in_order(t: &Topology, prio: &BTreeMap<NodeId, u32>) -> Result<Vec<u32>> {
    t.ids().map(|id| prio.get(&id).copied().ok_or(Error::MissingPriority(id))).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SerenaConfig {
    pub max_rounds: u32,
    pub tracking: Tracking,
}

impl Default for SerenaConfig {
    fn default() -> Self {
        SerenaConfig { max_rounds: DEFAULT_MAX_ROUNDS, tracking: Tracking::default() }
    }
}

/// Runs the protocol with default tracking until every node is colored.
pub fn run_serena(t: &Topology, prio: &BTreeMap<NodeId, u32>, max_rounds: u32) -> Result<SerenaRun> {
    run_serena_with(t, prio, SerenaConfig { max_rounds, ..SerenaConfig::default() })
}

/// Runs the protocol until every node is colored.
///
/// Every round each non-terminated node broadcasts its encoded message, all
/// nodes decode what their neighbors sent and update, then every node whose
/// R1 holds colors itself. A color chosen in round `r` is first announced
/// in round `r + 1`.
pub fn run_serena_with(t: &Topology, prio: &BTreeMap<NodeId, u32>, cfg: SerenaConfig) -> Result<SerenaRun> {
    let max_rounds = cfg.max_rounds;
    if max_rounds == 0 {
        return Err(Error::InvalidArgument("max_rounds must be positive".into()));
    }
    let prios = priorities_in_order(t, prio)?;
    let mut states: Vec<NodeState> = (0..t.len())
        .map(|i| NodeState {
            tracking: cfg.tracking,
            ..NodeState::new(t.id_at(i), prios[i], t.adjacency(i).iter().map(|&j| t.id_at(j)))
        })
        .collect();
    let mut sent = (0u64, 0u64);
    for _ in 0..WARMUP_ROUNDS {
        exchange(t, &mut states, &mut sent)?;
    }

    let mut trace = Trace::default();
    let mut remaining = t.len();
    let mut round = 0;
    while remaining > 0 {
        if round == max_rounds {
            return Err(Error::NonTermination { rounds: round, trace: Box::new(trace) });
        }
        round += 1;
        exchange(t, &mut states, &mut sent)?;
        let mut record = RoundRecord { round, colored: Vec::new() };
        for s in &mut states {
            if let Some(c) = s.try_color() {
                record.colored.push((s.me, c));
            }
        }
        for s in &mut states {
            s.update_termination();
        }
        remaining -= record.colored.len();
        if !record.colored.is_empty() {
            trace.rounds.push(record);
        }
    }
    Ok(SerenaRun { coloring: trace.coloring(), rounds: round, trace, messages_sent: sent.0, octets_sent: sent.1 })
}

fn exchange(t: &Topology, states: &mut [NodeState], sent: &mut (u64, u64)) -> Result<()> {
    let mut delivered: Vec<Option<ColorMessage>> = Vec::with_capacity(states.len());
    for s in states.iter_mut() {
        delivered.push(match s.outgoing() {
            Some(m) => {
                let bytes = m.encode()?;
                sent.0 += 1;
                sent.1 += bytes.len() as u64;
                Some(ColorMessage::decode(&bytes)?)
            }
            None => None,
        });
    }
    for (i, s) in states.iter_mut().enumerate() {
        absorb(s, t.adjacency(i).iter().filter_map(|&j| delivered[j].as_ref()))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_grid, GridSpec};
    use crate::validity::check_h_hop;

    fn uniform(t: &Topology, p: u32) -> BTreeMap<NodeId, u32> {
        t.ids().map(|id| (id, p)).collect()
    }

    #[test]
    fn singleton_takes_one_round() {
        let t = Topology::from_plain_edges(1, &[]).unwrap();
        let run = run_serena(&t, &uniform(&t, 0), 10).unwrap();
        assert_eq!(run.rounds, 1);
        assert_eq!(run.coloring.get(NodeId(0)), Some(0));
    }

    #[test]
    fn two_nodes_one_hop_apart() {
        let t = Topology::from_plain_edges(2, &[(0, 1)]).unwrap();
        let prio = [(NodeId(0), 1), (NodeId(1), 9)].into_iter().collect();
        let run = run_serena(&t, &prio, 10).unwrap();
        assert_eq!(run.trace.round_of(), [(NodeId(1), 1), (NodeId(0), 2)].into_iter().collect());
        assert_eq!(run.coloring.get(NodeId(1)), Some(0));
        assert_eq!(run.coloring.get(NodeId(0)), Some(1));
    }

    #[test]
    fn star_center_with_unique_max_colors_first() {
        let t = Topology::from_plain_edges(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]).unwrap();
        let prio: BTreeMap<_, _> = t.ids().map(|id| (id, if id.0 == 0 { 50 } else { id.0 })).collect();
        let run = run_serena(&t, &prio, 20).unwrap();
        assert_eq!(run.trace.rounds[0].colored, vec![(NodeId(0), 0)]);
        assert_eq!(run.coloring.color_count(), 5);
    }

    #[test]
    fn empty_topology() {
        let t = Topology::from_plain_edges(0, &[]).unwrap();
        let run = run_serena(&t, &BTreeMap::new(), 1).unwrap();
        assert_eq!(run.rounds, 0);
        assert!(run.coloring.is_empty());
    }

    #[test]
    fn guard_trips_with_partial_trace() {
        let t = Topology::from_plain_edges(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let err = run_serena(&t, &uniform(&t, 1), 2).unwrap_err();
        let Error::NonTermination { rounds, trace } = err else { panic!("unexpected {err:?}") };
        assert_eq!(rounds, 2);
        assert_eq!(trace.rounds[0].colored, vec![(NodeId(0), 0)]);
    }

    #[test]
    fn missing_priority_is_reported() {
        let t = Topology::from_plain_edges(2, &[(0, 1)]).unwrap();
        let prio = [(NodeId(0), 1)].into_iter().collect();
        assert_eq!(run_serena(&t, &prio, 5), Err(Error::MissingPriority(NodeId(1))));
    }

    #[test]
    fn grid_run_is_valid_and_deterministic() {
        let t = build_grid(&GridSpec::new(8, 6, "1.5".parse().unwrap()).unwrap());
        let prio: BTreeMap<_, _> = t.ids().map(|id| (id, (id.0 * 7919) % 101)).collect();
        let a = run_serena(&t, &prio, DEFAULT_MAX_ROUNDS).unwrap();
        let b = run_serena(&t, &prio, DEFAULT_MAX_ROUNDS).unwrap();
        assert_eq!(a, b);
        assert!(check_h_hop(&t, &a.coloring, 3).unwrap().valid);
    }
}
