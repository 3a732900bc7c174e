//! Undirected graphs and propagation under Φ.
//!
//! `Φ S` adds to `S` every vertex with at least two distinct neighbours in
//! `S`. A graph is propagative when iterating Φ from any 2-element set
//! reaches the whole vertex set.

use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest vertex count a [`UGraph`] supports (adjacency rows are `u64` masks).
pub const MAX_VERTICES: usize = 64;

/// A set of vertices stored as a bit mask.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexSet(pub u64);

impl VertexSet {
    pub fn empty() -> Self {
        VertexSet(0)
    }

    pub fn full(n: usize) -> Self {
        if n >= 64 {
            VertexSet(u64::MAX)
        } else {
            VertexSet((1u64 << n) - 1)
        }
    }

    pub fn contains(self, v: usize) -> bool {
        self.0 >> v & 1 == 1
    }

    pub fn insert(&mut self, v: usize) {
        self.0 |= 1 << v;
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset(self, other: VertexSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                return None;
            }
            let v = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            Some(v)
        })
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = VertexSet::empty();
        for v in iter {
            s.insert(v);
        }
        s
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// A simple undirected graph on `{0..n}`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UGraph {
    n: usize,
    adj: Vec<u64>,
}

impl fmt::Debug for UGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UGraph(n={}, edges={:?})", self.n, self.edges())
    }
}

impl UGraph {
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<UGraph> {
        let mut g = UGraph::edgeless(n)?;
        for &(u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(Error::OutOfRange { element: w, size: n });
                }
            }
            if u == v {
                return Err(Error::InvalidArgument(format!("loop at vertex {u}")));
            }
            g.add_edge(u, v);
        }
        Ok(g)
    }

    pub fn edgeless(n: usize) -> Result<UGraph> {
        if n == 0 {
            return Err(Error::EmptyCarrier);
        }
        if n > MAX_VERTICES {
            return Err(Error::InvalidArgument(format!("at most {MAX_VERTICES} vertices supported, got {n}")));
        }
        Ok(UGraph { n, adj: vec![0; n] })
    }

    pub fn complete(n: usize) -> Result<UGraph> {
        let mut g = UGraph::edgeless(n)?;
        for u in 0..n {
            g.adj[u] = VertexSet::full(n).0 & !(1 << u);
        }
        Ok(g)
    }

    /// `K_{a,b}` with parts `{0..a}` and `{a..a+b}`.
    pub fn complete_bipartite(a: usize, b: usize) -> Result<UGraph> {
        let mut g = UGraph::edgeless(a + b)?;
        for u in 0..a {
            for v in a..a + b {
                g.add_edge(u, v);
            }
        }
        Ok(g)
    }

    /// Graph whose edge set is the bit pattern `mask` over pairs in lexicographic order.
    pub fn from_pair_mask(n: usize, mask: u64) -> UGraph {
        let mut adj = vec![0u64; n];
        let mut bit = 0;
        for u in 0..n {
            for v in u + 1..n {
                if mask >> bit & 1 == 1 {
                    adj[u] |= 1 << v;
                    adj[v] |= 1 << u;
                }
                bit += 1;
            }
        }
        UGraph { n, adj }
    }

    pub(crate) fn add_edge(&mut self, u: usize, v: usize) {
        self.adj[u] |= 1 << v;
        self.adj[v] |= 1 << u;
    }

    pub fn num_vertices(&self) -> usize {
        self.n
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u] >> v & 1 == 1
    }

    pub fn neighbours(&self, v: usize) -> VertexSet {
        VertexSet(self.adj[v])
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }

    /// Sorted edge list `(u, v)` with `u < v`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.n {
            for v in VertexSet(self.adj[u] >> (u + 1) << (u + 1)).iter() {
                out.push((u, v));
            }
        }
        out
    }

    pub fn num_edges(&self) -> usize {
        self.adj.iter().map(|r| r.count_ones() as usize).sum::<usize>() / 2
    }

    pub fn vertices(&self) -> VertexSet {
        VertexSet::full(self.n)
    }

    /// Induced subgraph on `keep`, relabelled in increasing order.
    pub fn induced(&self, keep: &[usize]) -> Result<UGraph> {
        let mut g = UGraph::edgeless(keep.len())?;
        for (i, &u) in keep.iter().enumerate() {
            for (j, &v) in keep.iter().enumerate().skip(i + 1) {
                if self.has_edge(u, v) {
                    g.add_edge(i, j);
                }
            }
        }
        Ok(g)
    }

    /// Graphviz rendering; vertices in `highlight` are filled.
    pub fn to_dot(&self, name: &str, highlight: VertexSet) -> String {
        let mut out = format!("graph {} {{\n", dot_id(name));
        write_vertices(&mut out, self.n, highlight, "  ");
        for (u, v) in self.edges() {
            let _ = writeln!(out, "  {u} -- {v};");
        }
        out.push_str("}\n");
        out
    }
}

fn dot_id(name: &str) -> String {
    format!("\"{}\"", name.replace('"', "\\\""))
}

fn write_vertices(out: &mut String, n: usize, highlight: VertexSet, indent: &str) {
    for v in 0..n {
        let fill = if highlight.contains(v) { "lightblue" } else { "white" };
        let _ = writeln!(out, "{indent}{v} [shape=circle, style=filled, fillcolor={fill}];");
    }
}

#[derive(Serialize, Deserialize)]
struct UGraphRepr {
    n: usize,
    edges: Vec<[usize; 2]>,
}

impl Serialize for UGraph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        UGraphRepr { n: self.n, edges: self.edges().into_iter().map(|(u, v)| [u, v]).collect() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for UGraph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = UGraphRepr::deserialize(d)?;
        let edges: Vec<(usize, usize)> = r.edges.into_iter().map(|[u, v]| (u, v)).collect();
        UGraph::new(r.n, &edges).map_err(serde::de::Error::custom)
    }
}

/// One application of Φ.
pub fn phi(g: &UGraph, s: VertexSet) -> VertexSet {
    let mut out = s;
    for v in 0..g.n {
        if (g.adj[v] & s.0).count_ones() >= 2 {
            out.insert(v);
        }
    }
    out
}

/// Iterates Φ from `s` until it stabilizes; the first entry is `s` itself.
///
/// Φ is extensive, so the sequence strictly grows until the fixpoint and
/// has at most `n + 1` entries.
pub fn phi_trace(g: &UGraph, s: VertexSet) -> Vec<VertexSet> {
    let mut trace = vec![s];
    for _ in 0..=g.n {
        let last = *trace.last().expect("trace is non-empty");
        let next = phi(g, last);
        if next == last {
            break;
        }
        trace.push(next);
    }
    trace
}

/// Least fixpoint of Φ above `s`.
pub fn phi_closure(g: &UGraph, s: VertexSet) -> VertexSet {
    *phi_trace(g, s).last().expect("trace is non-empty")
}

/// First 2-subset (lexicographic) whose Φ-closure is not everything.
pub fn non_propagating_pair(g: &UGraph) -> Result<Option<(usize, usize)>> {
    if g.n < 2 {
        return Err(Error::CarrierTooSmall("propagativity needs at least two vertices".into()));
    }
    let all = g.vertices();
    for u in 0..g.n {
        for v in u + 1..g.n {
            if phi_closure(g, [u, v].into_iter().collect()) != all {
                return Ok(Some((u, v)));
            }
        }
    }
    Ok(None)
}

pub fn is_propagative(g: &UGraph) -> Result<bool> {
    Ok(non_propagating_pair(g)?.is_none())
}

pub fn min_degree(g: &UGraph) -> usize {
    (0..g.n).map(|v| g.degree(v)).min().unwrap_or(0)
}

/// `K_{⌈n/2⌉,⌊n/2⌋}`: non-propagative with minimum degree `⌊n/2⌋`.
pub fn bipartite_counterexample(n: usize) -> Result<UGraph> {
    if n <= 2 {
        return Err(Error::InvalidArgument(format!("need more than 2 vertices, got {n}")));
    }
    UGraph::complete_bipartite(n.div_ceil(2), n / 2)
}

/// Outcome of the exhaustive degree-threshold search on `n` vertices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PuzzleReport {
    pub n: usize,
    /// Least `m` such that minimum degree `≥ m` forces propagativity.
    pub threshold: usize,
    pub graphs_examined: u64,
    pub propagativity_checks: u64,
    /// Non-propagative graphs with minimum degree above `n/2`.
    pub min_degree_violations: u64,
    /// A non-propagative graph of minimum degree `threshold - 1`.
    pub extremal_witness: Option<UGraph>,
}

/// Configuration for [`PuzzleSearch::run`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PuzzleSearch {
    /// Largest `n` accepted; labelled search visits `2^(n(n-1)/2)` graphs.
    pub max_n: usize,
    /// Only visit labellings whose degree sequence is non-increasing.
    ///
    /// Every isomorphism class has such a labelling, so the answer is unchanged.
    pub up_to_iso: bool,
}

impl Default for PuzzleSearch {
    fn default() -> Self {
        PuzzleSearch { max_n: 7, up_to_iso: false }
    }
}

impl PuzzleSearch {
    pub fn run(&self, n: usize) -> Result<PuzzleReport> {
        if n < 3 || n > self.max_n {
            return Err(Error::GuardExceeded(format!("puzzle search supports 3 <= n <= {}, got {n}", self.max_n)));
        }
        let pairs = n * (n - 1) / 2;
        let half = n / 2; // min degree > n/2  ⟺  min degree > ⌊n/2⌋
        // best = largest min degree seen on a non-propagative graph
        let mut best: Option<usize> = None;
        let mut witness = None;
        let mut report = PuzzleReport {
            n,
            threshold: 0,
            graphs_examined: 0,
            propagativity_checks: 0,
            min_degree_violations: 0,
            extremal_witness: None,
        };
        for mask in 0..(1u64 << pairs) {
            let g = UGraph::from_pair_mask(n, mask);
            if self.up_to_iso && (1..n).any(|v| g.degree(v) > g.degree(v - 1)) {
                continue;
            }
            report.graphs_examined += 1;
            let m = min_degree(&g);
            let matters = m > half || best.is_none_or(|b| m > b);
            if !matters {
                continue;
            }
            report.propagativity_checks += 1;
            if non_propagating_pair(&g)?.is_some() {
                if m > half {
                    report.min_degree_violations += 1;
                }
                if best.is_none_or(|b| m > b) {
                    best = Some(m);
                    witness = Some(g);
                }
            }
        }
        report.threshold = best.map_or(0, |b| b + 1);
        report.extremal_witness = witness;
        Ok(report)
    }
}

/// Least `m` such that every `n`-vertex graph of minimum degree `≥ m` is propagative.
pub fn puzzle_threshold(n: usize, up_to_iso: bool) -> Result<usize> {
    Ok(PuzzleSearch { up_to_iso, ..PuzzleSearch::default() }.run(n)?.threshold)
}

/// Graphviz rendering of the Φ-iteration from `s`, one cluster per step.
pub fn phi_trace_dot(g: &UGraph, s: VertexSet) -> String {
    let mut out = String::from("graph phi_trace {\n");
    for (step, set) in phi_trace(g, s).into_iter().enumerate() {
        let _ = writeln!(out, "  subgraph cluster_{step} {{");
        let _ = writeln!(out, "    label=\"step {step}\";");
        for v in 0..g.n {
            let fill = if set.contains(v) { "lightblue" } else { "white" };
            let _ = writeln!(out, "    s{step}_{v} [label=\"{v}\", shape=circle, style=filled, fillcolor={fill}];");
        }
        for (u, v) in g.edges() {
            let _ = writeln!(out, "    s{step}_{u} -- s{step}_{v};");
        }
        out.push_str("  }\n");
    }
    out.push_str("}\n");
    out
}
