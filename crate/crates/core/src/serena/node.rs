//! Per-node state of the optimized protocol and the two coloring rules.

use std::collections::{BTreeMap, BTreeSet};

use super::bitmap::ColorSet;
use super::codec::ColorMessage;
use super::{Priority, ProtocolError};
use crate::graph::NodeId;
use crate::validity::Color;

/// How a node reads the priority lists its neighbors send.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Tracking {
    /// Entries the node knows to be itself or nearer than the list's level
    /// are discarded, but a full list that had entries discarded still
    /// bounds what it may have cut off. Never colors before a higher node
    /// within three hops.
    #[default]
    Guarded,
    /// Discarded entries leave no trace. Faster, but a competitor hidden
    /// behind discarded entries can go unnoticed, which yields invalid
    /// colorings on some inputs.
    Literal,
}

impl std::str::FromStr for Tracking {
    type Err = crate::error::Error;

    fn from_str(s: &str) -> crate::error::Result<Self> {
        match s {
            "guarded" => Ok(Tracking::Guarded),
            "literal" => Ok(Tracking::Literal),
            _ => Err(crate::error::Error::InvalidArgument(format!("unknown tracking `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeState {
    pub me: NodeId,
    pub priority: Priority,
    pub neighbors: BTreeSet<NodeId>,
    pub color: Option<Color>,
    /// Last message received from each 1-hop neighbor. A neighbor that stays
    /// silent in a round is represented by its previous message.
    pub neighbor_cache: BTreeMap<NodeId, ColorMessage>,
    /// Two highest uncolored 1-hop priorities.
    pub max2_prio1: Vec<Priority>,
    /// Two highest entries over the neighbors' `max2_prio1` lists.
    pub max2_prio2: Vec<Priority>,
    /// Highest entry over the neighbors' `max2_prio2` lists.
    pub max_prio3: Option<Priority>,
    /// Strongest priority that still forbids coloring once entries this node
    /// knows better are discarded. A full list whose entries were all
    /// discarded may hide lower entries; its lowest entry is kept as a bound.
    pub rival: Option<Priority>,
    pub bitmap1: ColorSet,
    pub bitmap2: ColorSet,
    pub bitmap3: ColorSet,
    /// Colors used by nodes heard outside the 1-hop neighborhood. Always
    /// empty with symmetric links.
    pub heard_colors: ColorSet,
    /// Addresses known to lie within two hops: neighbors and every entry
    /// ever seen in a neighbor's `max2_prio1`.
    pub near: BTreeSet<NodeId>,
    pub round: u32,
    pub terminated: bool,
    pub last_sent: Option<ColorMessage>,
    pub tracking: Tracking,
}

impl NodeState {
    pub fn new(me: NodeId, prio: u32, neighbors: impl IntoIterator<Item = NodeId>) -> Self {
        let neighbors: BTreeSet<NodeId> = neighbors.into_iter().collect();
        NodeState {
            me,
            priority: Priority::new(prio, me),
            near: neighbors.clone(),
            neighbors,
            color: None,
            neighbor_cache: BTreeMap::new(),
            max2_prio1: Vec::new(),
            max2_prio2: Vec::new(),
            max_prio3: None,
            rival: None,
            bitmap1: ColorSet::new(),
            bitmap2: ColorSet::new(),
            bitmap3: ColorSet::new(),
            heard_colors: ColorSet::new(),
            round: 0,
            terminated: false,
            last_sent: None,
            tracking: Tracking::default(),
        }
    }

    /// The message this node would broadcast now.
    pub fn message(&self) -> ColorMessage {
        ColorMessage {
            originator: self.me,
            color: self.color,
            prio: self.priority.prio,
            max2_prio1: self.max2_prio1.clone(),
            max2_prio2: self.max2_prio2.clone(),
            bitmap1: self.bitmap1.clone(),
            bitmap2: self.bitmap2.clone(),
        }
    }

    /// Message to broadcast this round, or `None` once terminated.
    pub fn outgoing(&mut self) -> Option<&ColorMessage> {
        if self.terminated {
            return None;
        }
        if !self.sent_current() {
            self.last_sent = Some(self.message());
        }
        self.last_sent.as_ref()
    }

    /// Whether `last_sent` equals what [`NodeState::message`] would build.
    fn sent_current(&self) -> bool {
        self.last_sent.as_ref().is_some_and(|m| {
            m.color == self.color
                && m.max2_prio1 == self.max2_prio1
                && m.max2_prio2 == self.max2_prio2
                && m.bitmap1 == self.bitmap1
                && m.bitmap2 == self.bitmap2
        })
    }

    /// Applies R1 and, if it holds, R2. Returns the newly chosen color.
    pub fn try_color(&mut self) -> Option<Color> {
        if self.color.is_some() || !rule_r1(self) {
            return None;
        }
        let c = rule_r2(self);
        self.color = Some(c);
        Some(c)
    }

    /// A colored node that tracks no uncolored priority at any level, and
    /// whose neighbors already hold its final message, stops sending.
    pub fn update_termination(&mut self) {
        self.terminated = self.terminated
            || (self.color.is_some()
                && self.max2_prio1.is_empty()
                && self.max2_prio2.is_empty()
                && self.max_prio3.is_none()
                && self.sent_current());
    }
}

fn top2(mut v: Vec<Priority>) -> Vec<Priority> {
    v.sort_unstable_by(|a, b| b.cmp(a));
    v.dedup_by_key(|p| p.address);
    v.truncate(2);
    v
}

/// Strongest competitor found in one received list once the entries for
/// which `known` holds are discarded.
fn list_rival(list: &[Priority], tracking: Tracking, known: impl Fn(NodeId) -> bool) -> Option<Priority> {
    let kept = list.iter().filter(|p| !known(p.address)).max().copied();
    if tracking == Tracking::Guarded && list.len() == 2 && list.iter().any(|p| known(p.address)) {
        // Entries below the lowest one listed were cut off by the sender.
        kept.max(list.iter().min().copied())
    } else {
        kept
    }
}

/// Absorbs one round of messages and recomputes the trackers and bitmaps.
pub fn local_update(mut s: NodeState, inbox: &[ColorMessage]) -> Result<NodeState, ProtocolError> {
    absorb(&mut s, inbox.iter())?;
    Ok(s)
}

/// In-place form of [`local_update`]. The trackers and bitmaps depend on
/// the cache alone, so they are only recomputed when a message differs
/// from the cached one.
pub fn absorb<'a>(
    s: &mut NodeState,
    inbox: impl Iterator<Item = &'a ColorMessage> + Clone,
) -> Result<(), ProtocolError> {
    for m in inbox.clone() {
        if !s.neighbors.contains(&m.originator) {
            return Err(ProtocolError::NotANeighbor { to: s.me, from: m.originator });
        }
    }
    let mut changed = false;
    for m in inbox {
        if s.neighbor_cache.get(&m.originator) != Some(m) {
            let me = s.me;
            s.near.extend(m.max2_prio1.iter().map(|p| p.address).filter(|&a| a != me));
            s.neighbor_cache.insert(m.originator, m.clone());
            changed = true;
        }
    }
    s.round += 1;
    if changed {
        recompute(s);
    }
    Ok(())
}

fn recompute(s: &mut NodeState) {
    let cache: Vec<&ColorMessage> = s.neighbor_cache.values().collect();
    s.max2_prio1 = top2(cache.iter().filter(|m| m.color.is_none()).map(|m| m.priority()).collect());
    s.max2_prio2 = top2(cache.iter().flat_map(|m| m.max2_prio1.iter().copied()).collect());
    s.max_prio3 = cache.iter().flat_map(|m| m.max2_prio2.iter().copied()).max();

    let me = s.me;
    let mut rival = s.max2_prio1.first().copied();
    for m in &cache {
        rival = rival.max(list_rival(&m.max2_prio1, s.tracking, |a| a == me || s.neighbors.contains(&a)));
        rival = rival.max(list_rival(&m.max2_prio2, s.tracking, |a| a == me || s.near.contains(&a)));
    }
    s.rival = rival;

    s.bitmap1 = cache.iter().filter_map(|m| m.color).collect();
    let (mut b2, mut b3) = (ColorSet::new(), ColorSet::new());
    for m in &cache {
        b2.union_with(&m.bitmap1);
        b3.union_with(&m.bitmap2);
    }
    s.bitmap2 = b2;
    s.bitmap3 = b3;
}

/// R1: no tracked uncolored priority outranks this node.
pub fn rule_r1(s: &NodeState) -> bool {
    s.rival.is_none_or(|p| p <= s.priority)
}

/// R2: smallest color not in use within three hops.
pub fn rule_r2(s: &NodeState) -> Color {
    ColorSet::smallest_free(&[&s.bitmap1, &s.bitmap2, &s.bitmap3, &s.heard_colors])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn msg(id: u32, prio: u32, color: Option<Color>) -> ColorMessage {
        ColorMessage {
            originator: NodeId(id),
            color,
            prio,
            max2_prio1: vec![],
            max2_prio2: vec![],
            bitmap1: ColorSet::new(),
            bitmap2: ColorSet::new(),
        }
    }

    fn p(prio: u32, id: u32) -> Priority {
        Priority::new(prio, NodeId(id))
    }

    #[test]
    fn isolated_node_only_counts_rounds() {
        let s = NodeState::new(NodeId(0), 0, []);
        let next = local_update(s.clone(), &[]).unwrap();
        assert_eq!(NodeState { round: 1, ..s }, next);
        assert!(rule_r1(&next));
        assert_eq!(rule_r2(&next), 0);
    }

    #[test]
    fn path_center_sorts_ends_descending() {
        let s = NodeState::new(NodeId(1), 2, [NodeId(0), NodeId(2)]);
        let s = local_update(s, &[msg(0, 1, None), msg(2, 1, None)]).unwrap();
        assert_eq!(s.max2_prio1, vec![p(1, 0), p(1, 2)]);
        assert!(rule_r1(&s));
    }

    #[test]
    fn colored_neighbors_leave_the_tracker() {
        let s = NodeState::new(NodeId(1), 2, [NodeId(0), NodeId(2)]);
        let s = local_update(s, &[msg(0, 5, Some(0)), msg(2, 4, Some(1))]).unwrap();
        assert!(s.max2_prio1.is_empty());
        assert_eq!(s.bitmap1.iter().collect::<Vec<_>>(), vec![0, 1]);
        assert_eq!(rule_r2(&s), 2);
    }

    #[test]
    fn equal_prio_smaller_address_wins() {
        let s = NodeState::new(NodeId(5), 3, [NodeId(4)]);
        let s = local_update(s, &[msg(4, 3, None)]).unwrap();
        assert!(!rule_r1(&s));
    }

    #[test]
    fn silent_neighbor_uses_cache() {
        let s = NodeState::new(NodeId(1), 0, [NodeId(0), NodeId(2)]);
        let s = local_update(s, &[msg(0, 5, None), msg(2, 4, None)]).unwrap();
        let s = local_update(s, &[msg(2, 4, Some(0))]).unwrap();
        assert_eq!(s.max2_prio1, vec![p(5, 0)]);
        assert_eq!(s.bitmap1.iter().collect::<Vec<_>>(), vec![0]);
    }

    #[test]
    fn non_neighbor_is_rejected() {
        let s = NodeState::new(NodeId(1), 0, [NodeId(0)]);
        assert_eq!(
            local_update(s, &[msg(7, 1, None)]),
            Err(ProtocolError::NotANeighbor { to: NodeId(1), from: NodeId(7) })
        );
    }

    #[test]
    fn second_and_third_levels() {
        // 1 - 0 - 2 with 0's list naming 3 (two hops from 1) and 0's
        // second-level list naming 4 (three hops from 1).
        let mut m0 = msg(0, 1, Some(0));
        m0.max2_prio1 = vec![p(9, 3), p(1, 1)];
        m0.max2_prio2 = vec![p(8, 4), p(7, 1)];
        m0.bitmap1 = [1].into_iter().collect();
        m0.bitmap2 = [2].into_iter().collect();
        let s = NodeState::new(NodeId(1), 5, [NodeId(0)]);
        let s = local_update(s, &[m0]).unwrap();
        assert_eq!(s.max2_prio2, vec![p(9, 3), p(1, 1)]);
        assert_eq!(s.max_prio3, Some(p(8, 4)));
        assert_eq!(s.rival, Some(p(9, 3)));
        assert!(!rule_r1(&s));
        assert_eq!(rule_r2(&s), 3);
    }

    #[test]
    fn r2_smallest_gap() {
        let mut s = NodeState::new(NodeId(0), 0, []);
        s.bitmap1 = [0, 1].into_iter().collect();
        s.bitmap3 = [3].into_iter().collect();
        assert_eq!(rule_r2(&s), 2);
        s.bitmap2 = (0..8).collect();
        assert_eq!(rule_r2(&s), 8);
    }
}
