//! Polynomial transformation from 1-hop coloring of `G` to h-hop coloring
//! of `G'`, plus exhaustive checks of the properties it relies on.
//!
//! Odd `h`, with `h' = (h - 1) / 2`: every node `v` gets a chain
//! `v - u_1(v) - ... - u_h'(v)`, the last layer copies the edges of `G`, and
//! a conjunction node `u0` is adjacent to the whole last layer.
//!
//! Even `h`, with `h' = h / 2`: chains `v - u_1(v) - ... - u_{h'-1}(v)`, one
//! node per edge `(a, b)` of `G` adjacent to the chain ends of `a` and `b`
//! (to `a` and `b` themselves when `h = 2`), and the edge nodes form a clique.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::graph::{Node, NodeId, Topology};
use crate::validity::{check_h_hop, chromatic_number_bruteforce, Color, Coloring};

pub const DEFAULT_EQUIVALENCE_LIMIT: usize = 8;

/// What an added node stands for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Source {
    Node(NodeId),
    Edge(NodeId, NodeId),
    Conjunction,
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Source::Node(v) => write!(f, "{v}"),
            Source::Edge(a, b) => write!(f, "{a}-{b}"),
            Source::Conjunction => f.write_str("u0"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AddedNode {
    pub id: NodeId,
    /// Index `i` of the set `U_i`; the conjunction node uses 0.
    pub set_index: u32,
    pub source: Source,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducedGraph {
    pub gprime: Topology,
    pub original: Vec<NodeId>,
    pub added: Vec<AddedNode>,
    pub h: u32,
}

impl ReducedGraph {
    /// Provenance sidecar: one `added_id set_index source` line per added node.
    pub fn sidecar_text(&self) -> String {
        self.added.iter().map(|a| format!("{} {} {}\n", a.id, a.set_index, a.source)).collect()
    }

    /// Number of added nodes predicted by the closed form: `h' n + 1` for
    /// odd `h`, `h' n - 1` for even `h`.
    pub fn closed_form_m(&self) -> i64 {
        let n = self.original.len() as i64;
        let hp = i64::from(self.h / 2);
        if self.h % 2 == 1 {
            hp * n + 1
        } else {
            hp * n - 1
        }
    }
}

pub fn transform(g: &Topology, h: u32) -> Result<ReducedGraph> {
    if h < 2 {
        return Err(Error::InvalidHops { min: 2, got: h });
    }
    if g.len() < 2 {
        return Err(Error::ReductionInput(format!("need at least 2 nodes, got {}", g.len())));
    }
    let original: Vec<NodeId> = g.ids().collect();
    let edges = g.edges();
    if h.is_multiple_of(2) {
        if edges.is_empty() {
            return Err(Error::ReductionInput("even h needs at least one edge".into()));
        }
        if let Some(v) = original.iter().find(|&&v| g.degree(v).unwrap_or(0) == 0) {
            return Err(Error::ReductionInput(format!("even h cannot place isolated node {v}")));
        }
    }

    let mut next = g.max_id().map_or(0, |m| m.0 + 1);
    let mut added = Vec::new();
    let mut fresh = |set_index: u32, source: Source| {
        let a = AddedNode { id: NodeId(next), set_index, source };
        next += 1;
        added.push(a);
        a.id
    };
    let mut new_edges: Vec<(NodeId, NodeId)> = Vec::new();
    let chain_len = if h % 2 == 1 { (h - 1) / 2 } else { h / 2 - 1 };

    // layer[i][v] is u_{i+1}(v).
    let mut layers: Vec<BTreeMap<NodeId, NodeId>> = Vec::new();
    for i in 1..=chain_len {
        layers.push(original.iter().map(|&v| (v, fresh(i, Source::Node(v)))).collect());
    }
    for &v in &original {
        let mut prev = v;
        for layer in &layers {
            new_edges.push((prev, layer[&v]));
            prev = layer[&v];
        }
    }
    let chain_end = |v: NodeId| layers.last().map_or(v, |l| l[&v]);

    if h % 2 == 1 {
        let last = layers.last().expect("odd h >= 3 has a chain");
        for &(a, b) in &edges {
            new_edges.push((last[&a], last[&b]));
        }
        let u0 = fresh(0, Source::Conjunction);
        new_edges.extend(original.iter().map(|v| (last[v], u0)));
    } else {
        let edge_nodes: Vec<NodeId> = edges.iter().map(|&(a, b)| fresh(h / 2, Source::Edge(a, b))).collect();
        for (&(a, b), &e) in edges.iter().zip(&edge_nodes) {
            new_edges.push((chain_end(a), e));
            new_edges.push((chain_end(b), e));
        }
        for (i, &e) in edge_nodes.iter().enumerate() {
            new_edges.extend(edge_nodes[i + 1..].iter().map(|&f| (e, f)));
        }
    }

    let mut nodes: Vec<Node> = g.nodes().to_vec();
    nodes.extend(added.iter().map(|a| Node { id: a.id, pos: None }));
    let gprime = Topology::from_edges(nodes, &new_edges)?;
    Ok(ReducedGraph { gprime, original, added, h })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LemmaReport {
    pub m: usize,
    pub closed_form_m: i64,
    /// Added nodes pairwise within `h - 1` hops.
    pub added_close: bool,
    /// Every (original, added) pair within `h` hops.
    pub mixed_close: bool,
    pub c1: bool,
    pub c2: bool,
    pub c3: bool,
    pub failures: Vec<String>,
}

impl LemmaReport {
    pub fn all_ok(&self) -> bool {
        self.added_close && self.mixed_close && self.c1 && self.c2 && self.c3
    }

    pub fn closed_form_matches(&self) -> bool {
        self.m as i64 == self.closed_form_m
    }
}

impl fmt::Display for LemmaReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ok = |b: bool| if b { "ok" } else { "FAIL" };
        write!(
            f,
            "m={} closed_form={} C1={} C2={} C3={} added<=h-1={}",
            self.m,
            self.closed_form_m,
            ok(self.c1),
            ok(self.c2),
            ok(self.c3),
            ok(self.added_close)
        )
    }
}

/// Hop distance between two nodes of `G'`, `None` if disconnected.
fn distances(t: &Topology) -> Vec<Vec<Option<u32>>> {
    (0..t.len()).map(|i| t.bfs(i, None)).collect()
}

/// Exhaustive pairwise check of the constraints on `r`, given the graph
/// it was built from.
pub fn verify_lemmas(g: &Topology, r: &ReducedGraph) -> Result<LemmaReport> {
    let h = r.h;
    let gp = &r.gprime;
    let dp = distances(gp);
    let dg = distances(g);
    let within = |a: NodeId, b: NodeId, k: u32| -> Result<bool> {
        Ok(dp[gp.index_of(a)?][gp.index_of(b)?].is_some_and(|d| d <= k))
    };
    let mut rep = LemmaReport {
        m: r.added.len(),
        closed_form_m: r.closed_form_m(),
        added_close: true,
        mixed_close: true,
        c1: true,
        c2: true,
        c3: true,
        failures: Vec::new(),
    };

    for (i, &a) in r.original.iter().enumerate() {
        for &b in &r.original[i + 1..] {
            match dg[g.index_of(a)?][g.index_of(b)?] {
                Some(1) if !within(a, b, h)? => {
                    rep.c1 = false;
                    rep.failures.push(format!("C1: {a},{b} adjacent in G but more than {h} hops apart in G'"));
                }
                Some(2) if within(a, b, h)? => {
                    rep.c2 = false;
                    rep.failures.push(format!("C2: {a},{b} two hops apart in G but within {h} hops in G'"));
                }
                _ => {}
            }
        }
    }
    for (i, x) in r.added.iter().enumerate() {
        for y in &r.added[i + 1..] {
            if !within(x.id, y.id, h - 1)? {
                rep.added_close = false;
                rep.failures.push(format!("added {} and {} are more than {} hops apart", x.id, y.id, h - 1));
            }
            if !within(x.id, y.id, h)? {
                rep.c3 = false;
            }
        }
        for &v in &r.original {
            if !within(v, x.id, h)? {
                rep.mixed_close = false;
                rep.c3 = false;
                rep.failures.push(format!("C3: original {v} and added {} are more than {h} hops apart", x.id));
            }
        }
    }
    Ok(rep)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivalenceReport {
    /// Chromatic number of `G`.
    pub k: u32,
    pub m: usize,
    /// h-hop chromatic number of `G'`.
    pub k_prime: u32,
    /// Colors used by the lifted coloring of `G'`.
    pub lifted_colors: usize,
    pub lifted_valid: bool,
}

impl EquivalenceReport {
    pub fn holds(&self) -> bool {
        self.k_prime as usize == self.k as usize + self.m
            && self.lifted_valid
            && self.lifted_colors == self.k_prime as usize
    }
}

/// Keeps `c` on the original nodes and gives every added node its own
/// fresh color.
pub fn lift_coloring(r: &ReducedGraph, c: &Coloring) -> Coloring {
    let k = c.iter().map(|(_, col)| col + 1).max().unwrap_or(0);
    let mut out = c.clone();
    for (i, a) in r.added.iter().enumerate() {
        out.insert(a.id, k + i as Color);
    }
    out
}

/// Optimal 1-hop coloring found by trying every color count upwards.
fn optimal_coloring(g: &Topology, k: u32) -> Coloring {
    fn go(g: &Topology, k: u32, i: usize, colors: &mut Vec<Color>) -> bool {
        if i == g.len() {
            return true;
        }
        for c in 0..k {
            if g.adjacency(i).iter().all(|&j| j >= i || colors[j] != c) {
                colors.push(c);
                if go(g, k, i + 1, colors) {
                    return true;
                }
                colors.pop();
            }
        }
        false
    }
    let mut colors = Vec::with_capacity(g.len());
    assert!(go(g, k, 0, &mut colors), "oracle promised a {k}-coloring");
    colors.into_iter().enumerate().map(|(i, c)| (g.id_at(i), c)).collect()
}

/// Compares `chi_1(G) + m` with `chi_h(G')` by exhaustive search, and
/// validates the lifted coloring.
pub fn equivalence_check(g: &Topology, h: u32, limit: usize) -> Result<EquivalenceReport> {
    if g.len() > limit {
        return Err(Error::TooLarge { nodes: g.len(), limit });
    }
    let r = transform(g, h)?;
    let k = chromatic_number_bruteforce(g, 1, limit)?;
    let k_prime = chromatic_number_bruteforce(&r.gprime, h, r.gprime.len())?;
    let lifted = lift_coloring(&r, &optimal_coloring(g, k));
    Ok(EquivalenceReport {
        k,
        m: r.added.len(),
        k_prime,
        lifted_colors: lifted.color_count(),
        lifted_valid: check_h_hop(&r.gprime, &lifted, h)?.valid,
    })
}
