//! Priority assignments compared in the grid experiments.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{GridSpec, NodeId, Topology};
use crate::serena::{compute_prio, PrioVariant};
use crate::vector::{couple_of, solve_vectors};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Strategy {
    /// Native prio with shuffled addresses.
    Random,
    Line,
    Column,
    Diagonal,
    /// Rank by squared distance to `(0, 0)`.
    Origin,
    /// Rank by squared distance to the middle of the grid.
    Center,
    /// Rank of the node's couple under the optimal 3-hop vector pair.
    Vector,
}

impl Strategy {
    pub const ALL: [Strategy; 7] = [
        Strategy::Random,
        Strategy::Line,
        Strategy::Column,
        Strategy::Diagonal,
        Strategy::Origin,
        Strategy::Center,
        Strategy::Vector,
    ];
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Strategy::ALL
            .into_iter()
            .find(|st| st.to_string() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown priority strategy `{s}`")))
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strategy::Random => "random",
            Strategy::Line => "line",
            Strategy::Column => "column",
            Strategy::Diagonal => "diagonal",
            Strategy::Origin => "origin",
            Strategy::Center => "center",
            Strategy::Vector => "vector",
        })
    }
}

/// How couples are turned into priorities.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum CoupleOrder {
    /// The lexicographically largest couple gets the highest priority.
    #[default]
    Ascending,
    Descending,
}

impl FromStr for CoupleOrder {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "asc" => Ok(CoupleOrder::Ascending),
            "desc" => Ok(CoupleOrder::Descending),
            _ => Err(Error::InvalidArgument(format!("unknown couple order `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct AssignOptions {
    pub seed: Option<u64>,
    pub variant: PrioVariant,
    pub couple_order: CoupleOrder,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PriorityAssignment {
    pub strategy: Strategy,
    /// `prio` per original address.
    pub values: BTreeMap<NodeId, u32>,
    /// Address each node uses on the air, when it differs from the
    /// topology's. Only the random strategy reassigns addresses.
    pub addresses: Option<BTreeMap<NodeId, NodeId>>,
}

impl PriorityAssignment {
    /// `id prio` lines, by original address.
    pub fn to_text(&self) -> String {
        self.values.iter().map(|(id, p)| format!("{id} {p}\n")).collect()
    }

    /// The topology and priorities as the protocol sees them, with
    /// addresses reassigned if needed.
    pub fn apply(&self, t: &Topology) -> Result<(Topology, BTreeMap<NodeId, u32>)> {
        match &self.addresses {
            None => Ok((t.clone(), self.values.clone())),
            Some(map) => {
                let hm: HashMap<NodeId, NodeId> = map.iter().map(|(&a, &b)| (a, b)).collect();
                let prio = self.values.iter().map(|(id, &p)| (map[id], p)).collect();
                Ok((t.relabel(&hm)?, prio))
            }
        }
    }

    /// Maps an address used on the air back to the topology's address.
    pub fn original_of(&self) -> BTreeMap<NodeId, NodeId> {
        match &self.addresses {
            None => self.values.keys().map(|&id| (id, id)).collect(),
            Some(map) => map.iter().map(|(&a, &b)| (b, a)).collect(),
        }
    }
}

/// Position of each key in ascending order, ties impossible once the
/// address is part of the key.
fn rank_by<K: Ord>(t: &Topology, key: impl Fn(NodeId, (i64, i64)) -> K) -> Result<BTreeMap<NodeId, u32>> {
    let mut keyed = Vec::with_capacity(t.len());
    for id in t.ids() {
        let pos = t.position(id)?.ok_or(Error::MissingCoordinates(id))?;
        keyed.push((key(id, pos), id));
    }
    keyed.sort();
    Ok(keyed.into_iter().enumerate().map(|(r, (_, id))| (id, r as u32)).collect())
}

pub fn assign(strategy: Strategy, t: &Topology, spec: &GridSpec, opts: AssignOptions) -> Result<PriorityAssignment> {
    let (w, h) = (i64::from(spec.width), i64::from(spec.height));
    let mut addresses = None;
    let values = match strategy {
        Strategy::Random => {
            let seed = opts.seed.ok_or(Error::MissingSeed)?;
            let mut shuffled: Vec<NodeId> = t.ids().collect();
            shuffled.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
            addresses = Some(t.ids().zip(shuffled).collect());
            t.ids().map(|id| Ok((id, compute_prio(t, id, opts.variant)?))).collect::<Result<_>>()?
        }
        Strategy::Line => rank_by(t, |_, (x, y)| y * w + x)?,
        Strategy::Column => rank_by(t, |_, (x, y)| x * h + y)?,
        Strategy::Diagonal => rank_by(t, |_, (x, y)| (x + y, x))?,
        Strategy::Origin => rank_by(t, |id, (x, y)| (x * x + y * y, id))?,
        Strategy::Center => rank_by(t, |id, (x, y)| {
            let (dx, dy) = (2 * x - (w - 1), 2 * y - (h - 1));
            (dx * dx + dy * dy, id)
        })?,
        Strategy::Vector => {
            let pair = solve_vectors(spec.range, 3)?;
            let mut couples = BTreeMap::new();
            for id in t.ids() {
                let pos = t.position(id)?.ok_or(Error::MissingCoordinates(id))?;
                couples.insert(id, couple_of(pos, &pair));
            }
            let distinct: BTreeSet<_> = couples.values().copied().collect();
            let rank: BTreeMap<_, u32> = distinct.into_iter().zip(0..).collect();
            let top = rank.len() as u32 - 1;
            couples
                .into_iter()
                .map(|(id, c)| {
                    let r = rank[&c];
                    (id, if opts.couple_order == CoupleOrder::Ascending { r } else { top - r })
                })
                .collect()
        }
    };
    Ok(PriorityAssignment { strategy, values, addresses })
}
