//! Round-spacing check on protocol traces.
//!
//! A node `v` colors exactly `d` rounds after the last node within three
//! hops that colored before it, where `d` is the hop distance between the
//! two; a node with no such predecessor colors in round 1. Two nodes within
//! three hops never color in the same round.

use super::sim::Trace;
use crate::error::{Error, Result};
use crate::graph::{NodeId, Topology};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TimingViolation {
    pub node: NodeId,
    pub colored_at: u32,
    pub expected: u32,
}

/// Round at which `node` must color given the rounds of the nodes around it.
pub fn expected_round(t: &Topology, rounds: &[Option<u32>], node: usize) -> Option<u32> {
    let mine = rounds[node]?;
    let mut expected = 1;
    for (j, d) in t.bfs(node, Some(3)).into_iter().enumerate() {
        let (Some(d), Some(r)) = (d, rounds[j]) else { continue };
        if d >= 1 && r <= mine {
            expected = expected.max(r + d);
        }
    }
    Some(expected)
}

/// All nodes whose coloring round breaks the spacing rule. An uncolored
/// node in the trace is an error.
pub fn check_property1(t: &Topology, trace: &Trace) -> Result<Vec<TimingViolation>> {
    let by_id = trace.round_of();
    let rounds: Vec<Option<u32>> = t.ids().map(|id| by_id.get(&id).copied()).collect();
    if let Some(i) = rounds.iter().position(Option::is_none) {
        return Err(Error::PartialColoring(t.id_at(i)));
    }
    let mut violations = Vec::new();
    for i in 0..t.len() {
        let colored_at = rounds[i].unwrap_or_default();
        let expected = expected_round(t, &rounds, i).unwrap_or_default();
        if colored_at != expected {
            violations.push(TimingViolation { node: t.id_at(i), colored_at, expected });
        }
    }
    Ok(violations)
}
