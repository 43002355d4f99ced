//! Unoptimized reference protocol: every node floods its full tables of
//! 1-hop and 2-hop neighbors with their priorities and colors, and derives
//! its 3-hop table from what neighbors flood.

use std::collections::BTreeMap;
use std::rc::Rc;

use super::sim::{priorities_in_order, RoundRecord, SerenaRun, Trace, WARMUP_ROUNDS};
use super::Priority;
use crate::error::{Error, Result};
use crate::graph::{NodeId, Topology};
use crate::validity::Color;

/// Entries keyed by topology index.
type Table = Vec<(usize, Priority, Option<Color>)>;

#[derive(Debug, PartialEq, Eq)]
struct Flood {
    priority: Priority,
    color: Option<Color>,
    t1: Table,
    t2: Table,
}

#[derive(Debug)]
struct NaiveNode {
    me: usize,
    priority: Priority,
    color: Option<Color>,
    /// Latest flood per neighbor, aligned with the adjacency list.
    cache: Vec<Option<Rc<Flood>>>,
    t1: Table,
    t2: Table,
    t3: Table,
    /// What this node floods; shared until its content changes.
    out: Rc<Flood>,
}

/// Per-run scratch: `seen[i]` is the stamp of the last update that listed
/// node `i`, and `level[i]`/`slot[i]` locate its entry in that update.
struct Scratch {
    stamp: u64,
    seen: Vec<u64>,
    level: Vec<u8>,
    slot: Vec<usize>,
}

impl Scratch {
    fn new(n: usize) -> Self {
        Scratch { stamp: 0, seen: vec![0; n], level: vec![0; n], slot: vec![0; n] }
    }
}

fn merge(table: &mut Table, level: u8, s: &mut Scratch, (id, p, c): (usize, Priority, Option<Color>)) {
    if s.seen[id] != s.stamp {
        s.seen[id] = s.stamp;
        s.level[id] = level;
        s.slot[id] = table.len();
        table.push((id, p, c));
    } else if s.level[id] == level {
        let e = &mut table[s.slot[id]];
        if e.2.is_none() {
            e.2 = c;
        }
    }
}

impl NaiveNode {
    fn new(me: usize, priority: Priority, degree: usize) -> Self {
        let out = Rc::new(Flood { priority, color: None, t1: Table::new(), t2: Table::new() });
        NaiveNode {
            me,
            priority,
            color: None,
            cache: vec![None; degree],
            t1: Table::new(),
            t2: Table::new(),
            t3: Table::new(),
            out,
        }
    }

    /// Refreshes the shared flood if its content changed.
    fn publish(&mut self) -> Rc<Flood> {
        let o = &self.out;
        if o.color != self.color || o.t1 != self.t1 || o.t2 != self.t2 {
            self.out =
                Rc::new(Flood { priority: self.priority, color: self.color, t1: self.t1.clone(), t2: self.t2.clone() });
        }
        Rc::clone(&self.out)
    }

    /// Tables are a function of the cached floods alone, so an inbox of
    /// unchanged floods leaves them as they are.
    fn update(&mut self, adjacency: &[usize], floods: &[Rc<Flood>], s: &mut Scratch) {
        let mut changed = false;
        for (slot, &j) in self.cache.iter_mut().zip(adjacency) {
            if !slot.as_ref().is_some_and(|f| Rc::ptr_eq(f, &floods[j])) {
                *slot = Some(Rc::clone(&floods[j]));
                changed = true;
            }
        }
        if !changed {
            return;
        }
        s.stamp += 1;
        s.seen[self.me] = s.stamp;
        s.level[self.me] = 0;
        let mut t1 = Table::with_capacity(adjacency.len());
        for (f, &j) in self.cache.iter().zip(adjacency) {
            if let Some(f) = f {
                merge(&mut t1, 1, s, (j, f.priority, f.color));
            }
        }
        let mut t2 = Table::with_capacity(self.t2.len());
        for f in self.cache.iter().flatten() {
            for &e in &f.t1 {
                merge(&mut t2, 2, s, e);
            }
        }
        let mut t3 = Table::with_capacity(self.t3.len());
        for f in self.cache.iter().flatten() {
            for &e in &f.t2 {
                merge(&mut t3, 3, s, e);
            }
        }
        self.t1 = t1;
        self.t2 = t2;
        self.t3 = t3;
    }

    fn try_color(&mut self) -> Option<Color> {
        if self.color.is_some() {
            return None;
        }
        let entries = || self.t1.iter().chain(&self.t2).chain(&self.t3);
        if entries().any(|&(_, p, c)| c.is_none() && p > self.priority) {
            return None;
        }
        let mut used: Vec<Color> = entries().filter_map(|&(_, _, c)| c).collect();
        used.sort_unstable();
        used.dedup();
        let c = used.iter().zip(0..).find(|&(&u, i)| u != i).map_or(used.len() as Color, |(_, i)| i);
        self.color = Some(c);
        Some(c)
    }
}

/// Same contract as [`super::run_serena`], with full-table flooding.
pub fn run_naive(t: &Topology, prio: &BTreeMap<NodeId, u32>, max_rounds: u32) -> Result<SerenaRun> {
    if max_rounds == 0 {
        return Err(Error::InvalidArgument("max_rounds must be positive".into()));
    }
    let prios = priorities_in_order(t, prio)?;
    let mut nodes: Vec<NaiveNode> =
        (0..t.len()).map(|i| NaiveNode::new(i, Priority::new(prios[i], t.id_at(i)), t.adjacency(i).len())).collect();
    let mut scratch = Scratch::new(t.len());
    let mut messages = 0u64;
    let mut exchange = |nodes: &mut Vec<NaiveNode>| {
        let floods: Vec<Rc<Flood>> = nodes.iter_mut().map(NaiveNode::publish).collect();
        messages += floods.len() as u64;
        for (i, n) in nodes.iter_mut().enumerate() {
            n.update(t.adjacency(i), &floods, &mut scratch);
        }
    };
    for _ in 0..WARMUP_ROUNDS {
        exchange(&mut nodes);
    }

    let mut trace = Trace::default();
    let mut remaining = t.len();
    let mut round = 0;
    while remaining > 0 {
        if round == max_rounds {
            return Err(Error::NonTermination { rounds: round, trace: Box::new(trace) });
        }
        round += 1;
        exchange(&mut nodes);
        let colored: Vec<(NodeId, Color)> =
            nodes.iter_mut().filter_map(|n| n.try_color().map(|c| (n.priority.address, c))).collect();
        remaining -= colored.len();
        if !colored.is_empty() {
            trace.rounds.push(RoundRecord { round, colored });
        }
    }
    Ok(SerenaRun { coloring: trace.coloring(), rounds: round, trace, messages_sent: messages, octets_sent: 0 })
}
