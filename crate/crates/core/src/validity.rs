//! h-hop coloring validity and an exact chromatic-number oracle.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::graph::{NodeId, Topology};

pub type Color = u32;

/// Total assignment of 0-based colors to node addresses.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Coloring {
    colors: BTreeMap<NodeId, Color>,
}

impl Coloring {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, id: NodeId, color: Color) {
        self.colors.insert(id, color);
    }

    pub fn get(&self, id: NodeId) -> Option<Color> {
        self.colors.get(&id).copied()
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (NodeId, Color)> + '_ {
        self.colors.iter().map(|(&id, &c)| (id, c))
    }

    /// Number of distinct colors actually used.
    pub fn color_count(&self) -> usize {
        self.colors.values().collect::<BTreeSet<_>>().len()
    }

    /// Interchange format: `colors K` followed by one `id color` line per node.
    pub fn to_text(&self) -> String {
        let mut out = format!("colors {}\n", self.color_count());
        for (id, c) in self.iter() {
            out.push_str(&format!("{id} {c}\n"));
        }
        out
    }

    pub fn parse_text(text: &str) -> Result<Self> {
        let perr = |line: usize, msg: &str| Error::Parse { line, msg: msg.to_string() };
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hl, header) = lines.next().ok_or_else(|| perr(1, "empty input"))?;
        let declared: usize = match header.split_whitespace().collect::<Vec<_>>().as_slice() {
            ["colors", k] => k.parse().map_err(|_| perr(hl, "bad color count"))?,
            _ => return Err(perr(hl, "expected `colors K`")),
        };
        let mut coloring = Coloring::new();
        for (ln, l) in lines {
            let t: Vec<&str> = l.split_whitespace().collect();
            let [id, c] = t.as_slice() else {
                return Err(perr(ln, "expected `id color`"));
            };
            let id = NodeId(id.parse().map_err(|_| perr(ln, "bad node id"))?);
            let c = c.parse().map_err(|_| perr(ln, "bad color"))?;
            if coloring.colors.insert(id, c).is_some() {
                return Err(perr(ln, "duplicate node"));
            }
        }
        if coloring.color_count() != declared {
            return Err(perr(hl, &format!("header declares {declared} colors, found {}", coloring.color_count())));
        }
        Ok(coloring)
    }
}

impl FromIterator<(NodeId, Color)> for Coloring {
    fn from_iter<I: IntoIterator<Item = (NodeId, Color)>>(iter: I) -> Self {
        Coloring { colors: iter.into_iter().collect() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Violation {
    pub u: NodeId,
    pub v: NodeId,
    pub hops: u32,
    pub color: Color,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidityReport {
    pub valid: bool,
    pub violations: Vec<Violation>,
}

fn require_total(t: &Topology, c: &Coloring) -> Result<()> {
    match t.ids().find(|&id| c.get(id).is_none()) {
        Some(id) => Err(Error::PartialColoring(id)),
        None => Ok(()),
    }
}

/// Reports every pair `(u, v)`, `u < v`, at hop distance in `1..=h` that
/// shares a color. Violations are ordered by address pair.
pub fn check_h_hop(t: &Topology, c: &Coloring, h: u32) -> Result<ValidityReport> {
    if h == 0 {
        return Err(Error::InvalidHops { min: 1, got: 0 });
    }
    require_total(t, c)?;
    let colors: Vec<Color> = t.ids().map(|id| c.get(id).unwrap_or_default()).collect();
    let mut violations = Vec::new();
    for i in 0..t.len() {
        for (j, d) in t.bfs(i, Some(h)).into_iter().enumerate().skip(i + 1) {
            if let Some(d) = d {
                if d >= 1 && colors[i] == colors[j] {
                    violations.push(Violation { u: t.id_at(i), v: t.id_at(j), hops: d, color: colors[i] });
                }
            }
        }
    }
    Ok(ValidityReport { valid: violations.is_empty(), violations })
}

/// `G^h`: same nodes, edge iff hop distance in `1..=h`.
pub fn power_graph(t: &Topology, h: u32) -> Result<Topology> {
    if h == 0 {
        return Err(Error::InvalidHops { min: 1, got: 0 });
    }
    let mut edges = Vec::new();
    for i in 0..t.len() {
        for (j, d) in t.bfs(i, Some(h)).into_iter().enumerate().skip(i + 1) {
            if d.is_some() {
                edges.push((t.id_at(i), t.id_at(j)));
            }
        }
    }
    Topology::from_edges(t.nodes().to_vec(), &edges)
}

pub const DEFAULT_ORACLE_LIMIT: usize = 16;

/// Exact minimum number of colors of a valid h-hop coloring.
///
/// Backtracking on `G^h`: nodes in ascending address order, colors tried
/// ascending, a node may open at most one new color (so the first node is
/// fixed to 0), branches pruned once they reach the best count found.
pub fn chromatic_number_bruteforce(t: &Topology, h: u32, limit: usize) -> Result<u32> {
    if t.len() > limit {
        return Err(Error::TooLarge { nodes: t.len(), limit });
    }
    if t.is_empty() {
        return Ok(0);
    }
    let p = power_graph(t, h)?;
    // Only earlier neighbors constrain a node in this ordering.
    let earlier: Vec<Vec<usize>> =
        (0..p.len()).map(|i| p.adjacency(i).iter().copied().filter(|&j| j < i).collect()).collect();
    let mut colors = vec![u32::MAX; p.len()];
    let mut best = p.len() as u32;
    search(&earlier, &mut colors, 0, 0, &mut best);
    Ok(best)
}

fn search(earlier: &[Vec<usize>], colors: &mut [u32], i: usize, used: u32, best: &mut u32) {
    if used >= *best {
        return;
    }
    if i == colors.len() {
        *best = used;
        return;
    }
    let top = (used + 1).min(*best - 1);
    for c in 0..top {
        if earlier[i].iter().all(|&j| colors[j] != c) {
            colors[i] = c;
            search(earlier, colors, i + 1, used.max(c + 1), best);
            colors[i] = u32::MAX;
        }
    }
}
