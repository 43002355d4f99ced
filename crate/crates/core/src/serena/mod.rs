//! Simulation of the SERENA three-hop coloring protocol.

pub mod bitmap;
pub mod codec;
pub mod naive;
pub mod node;
pub mod sim;
pub mod timing;

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::error::{Error as CrateError, Result};
use crate::graph::{NodeId, Topology};

pub use bitmap::ColorSet;
pub use codec::ColorMessage;
pub use naive::run_naive;
pub use node::{absorb, local_update, rule_r1, rule_r2, NodeState, Tracking};
pub use sim::{run_serena, run_serena_with, RoundRecord, SerenaConfig, SerenaRun, Trace, DEFAULT_MAX_ROUNDS};
pub use timing::{check_property1, TimingViolation};

/// `prio` plus address; a higher `Priority` wins. Equal `prio` is broken in
/// favour of the smaller address.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Priority {
    pub prio: u32,
    pub address: NodeId,
}

impl Priority {
    pub fn new(prio: u32, address: NodeId) -> Self {
        Priority { prio, address }
    }
}

impl Ord for Priority {
    fn cmp(&self, other: &Self) -> Ordering {
        self.prio.cmp(&other.prio).then_with(|| other.address.cmp(&self.address))
    }
}

impl PartialOrd for Priority {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ProtocolError {
    #[error("node {to} received a message from non-neighbor {from}")]
    NotANeighbor { to: NodeId, from: NodeId },

    #[error("node {0} already holds a color and cannot recolor")]
    Recolor(NodeId),
}

/// Which definition of the native `prio` value to use.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum PrioVariant {
    /// Sum of the degrees of the 1-hop neighbors.
    #[default]
    SumDegrees,
    /// Number of distinct nodes at 1 or 2 hops.
    TwoHopCount,
}

impl FromStr for PrioVariant {
    type Err = CrateError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sumdeg" => Ok(PrioVariant::SumDegrees),
            "card2hop" => Ok(PrioVariant::TwoHopCount),
            _ => Err(CrateError::Parse { line: 0, msg: format!("unknown prio variant `{s}`") }),
        }
    }
}

impl fmt::Display for PrioVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PrioVariant::SumDegrees => "sumdeg",
            PrioVariant::TwoHopCount => "card2hop",
        })
    }
}

pub fn compute_prio(t: &Topology, u: NodeId, variant: PrioVariant) -> Result<u32> {
    match variant {
        PrioVariant::SumDegrees => {
            let mut sum = 0;
            for v in t.neighbors(u)? {
                sum += t.degree(v)? as u32;
            }
            Ok(sum)
        }
        PrioVariant::TwoHopCount => Ok(t.neighborhood_up_to(u, 2)?.len() as u32),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_grid, GridSpec};

    fn grid(w: u32, h: u32, r: &str) -> Topology {
        build_grid(&GridSpec::new(w, h, r.parse().unwrap()).unwrap())
    }

    #[test]
    fn priority_order() {
        let a = Priority::new(5, NodeId(3));
        let b = Priority::new(5, NodeId(4));
        let c = Priority::new(6, NodeId(9));
        assert!(a > b);
        assert!(c > a);
        assert_eq!([b, c, a].iter().max(), Some(&c));
    }

    #[test]
    fn native_prio_values() {
        let t = grid(10, 10, "1");
        assert_eq!(compute_prio(&t, NodeId(55), PrioVariant::SumDegrees).unwrap(), 16);
        assert_eq!(compute_prio(&t, NodeId(0), PrioVariant::SumDegrees).unwrap(), 6);
        assert_eq!(compute_prio(&t, NodeId(55), PrioVariant::TwoHopCount).unwrap(), 12);
        assert_eq!(compute_prio(&t, NodeId(100), PrioVariant::SumDegrees), Err(CrateError::UnknownNode(NodeId(100))));
    }

    #[test]
    fn variant_parsing() {
        assert_eq!("card2hop".parse::<PrioVariant>().unwrap(), PrioVariant::TwoHopCount);
        assert_eq!(PrioVariant::SumDegrees.to_string(), "sumdeg");
        assert!("x".parse::<PrioVariant>().is_err());
    }
}
