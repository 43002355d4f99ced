//! Network topologies: unit-disk grids, arbitrary graphs, hop distances.
//!
//! A [`Topology`] is immutable once built. Grid generation compares squared
//! distances in exact integer arithmetic: the range is stored in tenths, so
//! `d <= R` becomes `100 * d^2 <= tenths^2` and boundary cases such as
//! `R = 1.5`, `d = 1.5` can't be misclassified.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Unique node address. Lower addresses win priority ties.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub u32);

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Transmission range in grid-step units, held exactly in tenths.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Range {
    tenths: u32,
}

impl Range {
    pub fn from_tenths(tenths: u32) -> Result<Self> {
        if tenths < 10 {
            return Err(Error::InvalidRange(format!("{}.{}", tenths / 10, tenths % 10)));
        }
        Ok(Range { tenths })
    }

    pub fn new(r: f64) -> Result<Self> {
        let scaled = r * 10.0;
        let rounded = scaled.round();
        if !r.is_finite() || (scaled - rounded).abs() > 1e-6 || rounded < 10.0 {
            return Err(Error::InvalidRange(r.to_string()));
        }
        Range::from_tenths(rounded as u32)
    }

    pub fn tenths(self) -> u32 {
        self.tenths
    }

    pub fn as_f64(self) -> f64 {
        f64::from(self.tenths) / 10.0
    }

    /// Largest integer coordinate offset that can still be in range.
    pub fn reach(self) -> i64 {
        i64::from(self.tenths / 10)
    }

    /// `true` iff a grid offset `(dx, dy)` is within range (and non-zero).
    pub fn covers(self, dx: i64, dy: i64) -> bool {
        let d2 = dx * dx + dy * dy;
        let t = i64::from(self.tenths);
        d2 > 0 && 100 * d2 <= t * t
    }

    /// All non-zero integer offsets within range, sorted.
    pub fn offsets(self) -> Vec<(i64, i64)> {
        let r = self.reach();
        let mut out = Vec::new();
        for dy in -r..=r {
            for dx in -r..=r {
                if self.covers(dx, dy) {
                    out.push((dx, dy));
                }
            }
        }
        out
    }
}

impl fmt::Display for Range {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.tenths.is_multiple_of(10) {
            write!(f, "{}", self.tenths / 10)
        } else {
            write!(f, "{}.{}", self.tenths / 10, self.tenths % 10)
        }
    }
}

impl FromStr for Range {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidRange(s.to_string());
        let (int, frac) = match s.split_once('.') {
            Some((i, f)) => (i, f),
            None => (s, "0"),
        };
        let int: u32 = int.parse().map_err(|_| bad())?;
        let frac = frac.trim_end_matches('0');
        let frac: u32 = match frac.len() {
            0 => 0,
            1 => frac.parse().map_err(|_| bad())?,
            _ => return Err(bad()),
        };
        Range::from_tenths(int * 10 + frac).map_err(|_| bad())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridSpec {
    pub width: u32,
    pub height: u32,
    pub range: Range,
}

impl GridSpec {
    pub fn new(width: u32, height: u32, range: Range) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidGrid(format!("{width}x{height}")));
        }
        Ok(GridSpec { width, height, range })
    }

    pub fn node_count(&self) -> usize {
        self.width as usize * self.height as usize
    }

    /// Row-major address of `(x, y)`.
    pub fn id_of(&self, x: i64, y: i64) -> NodeId {
        NodeId((y * i64::from(self.width) + x) as u32)
    }
}

/// Parses `WxH`.
pub fn parse_dims(s: &str) -> Result<(u32, u32)> {
    let bad = || Error::InvalidGrid(s.to_string());
    let (w, h) = s.split_once(['x', 'X']).ok_or_else(bad)?;
    let w = w.trim().parse().map_err(|_| bad())?;
    let h = h.trim().parse().map_err(|_| bad())?;
    Ok((w, h))
}

/// Number of hops between two nodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum HopDistance {
    Hops(u32),
    Unreachable,
}

impl HopDistance {
    pub fn hops(self) -> Option<u32> {
        match self {
            HopDistance::Hops(h) => Some(h),
            HopDistance::Unreachable => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Node {
    pub id: NodeId,
    pub pos: Option<(i64, i64)>,
}

/// Undirected graph with symmetric adjacency and no self-loops.
///
/// Nodes are stored in ascending address order; internal indices follow
/// that order, so iterating by index is iterating by address.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Topology {
    nodes: Vec<Node>,
    index: HashMap<NodeId, usize>,
    adj: Vec<Vec<usize>>,
}

impl Topology {
    pub fn from_edges(mut nodes: Vec<Node>, edges: &[(NodeId, NodeId)]) -> Result<Self> {
        nodes.sort_by_key(|n| n.id);
        let mut index = HashMap::with_capacity(nodes.len());
        for (i, n) in nodes.iter().enumerate() {
            if index.insert(n.id, i).is_some() {
                return Err(Error::InvalidGrid(format!("duplicate node id {}", n.id)));
            }
        }
        let mut adj = vec![Vec::new(); nodes.len()];
        for &(a, b) in edges {
            let ia = *index.get(&a).ok_or(Error::UnknownNode(a))?;
            let ib = *index.get(&b).ok_or(Error::UnknownNode(b))?;
            if ia == ib {
                return Err(Error::InvalidGrid(format!("self-loop on {a}")));
            }
            adj[ia].push(ib);
            adj[ib].push(ia);
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        Ok(Topology { nodes, index, adj })
    }

    /// Nodes `0..n` without coordinates.
    pub fn from_plain_edges(n: u32, edges: &[(u32, u32)]) -> Result<Self> {
        let nodes = (0..n).map(|i| Node { id: NodeId(i), pos: None }).collect();
        let edges: Vec<_> = edges.iter().map(|&(a, b)| (NodeId(a), NodeId(b))).collect();
        Topology::from_edges(nodes, &edges)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn ids(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.nodes.iter().map(|n| n.id)
    }

    pub fn contains(&self, id: NodeId) -> bool {
        self.index.contains_key(&id)
    }

    pub fn index_of(&self, id: NodeId) -> Result<usize> {
        self.index.get(&id).copied().ok_or(Error::UnknownNode(id))
    }

    pub fn id_at(&self, idx: usize) -> NodeId {
        self.nodes[idx].id
    }

    pub fn position(&self, id: NodeId) -> Result<Option<(i64, i64)>> {
        Ok(self.nodes[self.index_of(id)?].pos)
    }

    pub fn max_id(&self) -> Option<NodeId> {
        self.nodes.last().map(|n| n.id)
    }

    pub fn adjacency(&self, idx: usize) -> &[usize] {
        &self.adj[idx]
    }

    pub fn neighbors(&self, id: NodeId) -> Result<Vec<NodeId>> {
        let i = self.index_of(id)?;
        Ok(self.adj[i].iter().map(|&j| self.nodes[j].id).collect())
    }

    pub fn degree(&self, id: NodeId) -> Result<usize> {
        Ok(self.adj[self.index_of(id)?].len())
    }

    pub fn has_edge(&self, a: NodeId, b: NodeId) -> bool {
        match (self.index.get(&a), self.index.get(&b)) {
            (Some(&ia), Some(&ib)) => self.adj[ia].binary_search(&ib).is_ok(),
            _ => false,
        }
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Edges `(a, b)` with `a < b`, in ascending order.
    pub fn edges(&self) -> Vec<(NodeId, NodeId)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for (i, list) in self.adj.iter().enumerate() {
            for &j in list.iter().filter(|&&j| j > i) {
                out.push((self.nodes[i].id, self.nodes[j].id));
            }
        }
        out
    }

    /// Breadth-first hop counts from `src` (by index), optionally stopping
    /// at `max_depth`. Unreached nodes are `None`.
    pub fn bfs(&self, src: usize, max_depth: Option<u32>) -> Vec<Option<u32>> {
        let mut dist = vec![None; self.nodes.len()];
        dist[src] = Some(0);
        let mut queue = VecDeque::from([src]);
        while let Some(v) = queue.pop_front() {
            let d = dist[v].unwrap_or(0);
            if max_depth.is_some_and(|m| d >= m) {
                continue;
            }
            for &w in &self.adj[v] {
                if dist[w].is_none() {
                    dist[w] = Some(d + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    pub fn hop_distance(&self, u: NodeId, v: NodeId) -> Result<HopDistance> {
        let iu = self.index_of(u)?;
        let iv = self.index_of(v)?;
        Ok(match self.bfs(iu, None)[iv] {
            Some(d) => HopDistance::Hops(d),
            None => HopDistance::Unreachable,
        })
    }

    /// Nodes at minimum hop distance exactly `k` from `u`.
    pub fn k_hop_neighbors(&self, u: NodeId, k: u32) -> Result<BTreeSet<NodeId>> {
        if k == 0 {
            return Err(Error::InvalidHops { min: 1, got: 0 });
        }
        let iu = self.index_of(u)?;
        Ok(self
            .bfs(iu, Some(k))
            .into_iter()
            .enumerate()
            .filter(|&(_, d)| d == Some(k))
            .map(|(i, _)| self.nodes[i].id)
            .collect())
    }

    /// Union of the `k`-hop neighbor sets for `k` in `1..=h`.
    pub fn neighborhood_up_to(&self, u: NodeId, h: u32) -> Result<BTreeSet<NodeId>> {
        if h == 0 {
            return Err(Error::InvalidHops { min: 1, got: 0 });
        }
        let iu = self.index_of(u)?;
        Ok(self
            .bfs(iu, Some(h))
            .into_iter()
            .enumerate()
            .filter(|&(_, d)| matches!(d, Some(d) if d >= 1))
            .map(|(i, _)| self.nodes[i].id)
            .collect())
    }

    /// Same graph with every address mapped through `map`.
    pub fn relabel(&self, map: &HashMap<NodeId, NodeId>) -> Result<Self> {
        let nodes = self
            .nodes
            .iter()
            .map(|n| {
                let id = *map.get(&n.id).ok_or(Error::UnknownNode(n.id))?;
                Ok(Node { id, pos: n.pos })
            })
            .collect::<Result<Vec<_>>>()?;
        let edges: Vec<_> = self.edges().into_iter().map(|(a, b)| (map[&a], map[&b])).collect();
        Topology::from_edges(nodes, &edges)
    }

    /// Serializes to the interchange text format: `nodes N edges M`, one
    /// `id x y` (or bare `id`) line per node, then one `a b` line per edge.
    pub fn to_text(&self) -> String {
        let mut out = format!("nodes {} edges {}\n", self.len(), self.edge_count());
        for n in &self.nodes {
            match n.pos {
                Some((x, y)) => out.push_str(&format!("{} {} {}\n", n.id, x, y)),
                None => out.push_str(&format!("{}\n", n.id)),
            }
        }
        for (a, b) in self.edges() {
            out.push_str(&format!("{a} {b}\n"));
        }
        out
    }

    pub fn parse_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hline, header) = lines.next().ok_or(Error::Parse { line: 1, msg: "empty input".into() })?;
        let perr = |line: usize, msg: &str| Error::Parse { line, msg: msg.to_string() };
        let tok: Vec<&str> = header.split_whitespace().collect();
        let (n, m) = match tok.as_slice() {
            ["nodes", n, "edges", m] => (
                n.parse::<usize>().map_err(|_| perr(hline, "bad node count"))?,
                m.parse::<usize>().map_err(|_| perr(hline, "bad edge count"))?,
            ),
            _ => return Err(perr(hline, "expected `nodes N edges M`")),
        };
        let num = |line: usize, s: &str| s.parse::<i64>().map_err(|_| perr(line, &format!("bad number `{s}`")));
        let mut nodes = Vec::with_capacity(n);
        for _ in 0..n {
            let (ln, l) = lines.next().ok_or_else(|| perr(usize::MAX, "missing node lines"))?;
            let t: Vec<&str> = l.split_whitespace().collect();
            let id = NodeId(num(ln, t[0])?.try_into().map_err(|_| perr(ln, "node id out of range"))?);
            let pos = match t.len() {
                1 => None,
                3 => Some((num(ln, t[1])?, num(ln, t[2])?)),
                _ => return Err(perr(ln, "expected `id` or `id x y`")),
            };
            nodes.push(Node { id, pos });
        }
        let mut edges = Vec::with_capacity(m);
        for _ in 0..m {
            let (ln, l) = lines.next().ok_or_else(|| perr(usize::MAX, "missing edge lines"))?;
            let t: Vec<&str> = l.split_whitespace().collect();
            if t.len() != 2 {
                return Err(perr(ln, "expected `a b`"));
            }
            let a = num(ln, t[0])?;
            let b = num(ln, t[1])?;
            if a < 0 || b < 0 || a > i64::from(u32::MAX) || b > i64::from(u32::MAX) {
                return Err(perr(ln, "node id out of range"));
            }
            edges.push((NodeId(a as u32), NodeId(b as u32)));
        }
        if let Some((ln, _)) = lines.next() {
            return Err(perr(ln, "trailing content"));
        }
        Topology::from_edges(nodes, &edges)
    }
}

/// Unit-disk grid: `width * height` nodes at integer coordinates, addressed
/// row-major from 0, with an edge iff `0 < d(u, v) <= range`.
pub fn build_grid(spec: &GridSpec) -> Topology {
    let w = i64::from(spec.width);
    let h = i64::from(spec.height);
    let nodes: Vec<Node> = (0..h)
        .flat_map(|y| (0..w).map(move |x| (x, y)))
        .map(|(x, y)| Node { id: spec.id_of(x, y), pos: Some((x, y)) })
        .collect();
    let offsets = spec.range.offsets();
    let mut adj = vec![Vec::new(); nodes.len()];
    for y in 0..h {
        for x in 0..w {
            let i = (y * w + x) as usize;
            for &(dx, dy) in &offsets {
                let (nx, ny) = (x + dx, y + dy);
                if (0..w).contains(&nx) && (0..h).contains(&ny) {
                    adj[i].push((ny * w + nx) as usize);
                }
            }
            adj[i].sort_unstable();
        }
    }
    let index = nodes.iter().enumerate().map(|(i, n)| (n.id, i)).collect();
    Topology { nodes, index, adj }
}
