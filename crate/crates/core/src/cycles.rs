//! Cycles, fillers and the constructive filling algorithm.
//!
//! A `k`-cycle on a `(k+1)`-set `P` is a family of structures `c_p` on the
//! faces `P∖{p}` that agree on every codimension-two face. A filler is a
//! structure `f` on `P` with `f·δ^p = c_p` for all `p`.
//!
//! [`construct_degenerate_filler`] builds the unique degenerate filler when
//! the cycle is degenerate enough: it seeds a candidate from one edge of the
//! reduction graph and propagates the face equations along it. Every step
//! the argument relies on is re-checked at runtime and reported as
//! [`Error::Internal`] if it fails.

use std::collections::HashMap;
use std::fmt::Write as _;

use log::{debug, trace};
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::error::{ensure_internal, Error, Result};
use crate::ez::{decomposition_lifting, ez_congruence, ez_decompose, face, mass};
use crate::finset::{face_index, EquivRel, FinFn, FinSet};
use crate::propagraph::{UGraph, VertexSet};
use crate::symset::{InstanceSpec, StructureCodec, SymSet};

/// A validated cycle. Face `p` lives on `P∖{p}`, relabelled in increasing order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cycle<X> {
    carrier: FinSet,
    faces: Vec<X>,
}

impl<X> Cycle<X> {
    pub(crate) fn from_parts(carrier: FinSet, faces: Vec<X>) -> Self {
        Cycle { carrier, faces }
    }

    pub fn carrier(&self) -> &FinSet {
        &self.carrier
    }

    /// `|P| = k + 1`.
    pub fn size(&self) -> usize {
        self.faces.len()
    }

    pub fn k(&self) -> usize {
        self.faces.len() - 1
    }

    pub fn face(&self, p: usize) -> &X {
        &self.faces[p]
    }

    pub fn faces(&self) -> &[X] {
        &self.faces
    }

    pub fn into_faces(self) -> Vec<X> {
        self.faces
    }
}

/// Checks face carriers and all cycle equations (none when `k = 1`).
pub fn validate_cycle<M: SymSet>(m: &M, carrier: FinSet, faces: Vec<M::Structure>) -> Result<Cycle<M::Structure>> {
    let size = carrier.size();
    if size < 2 {
        return Err(Error::CarrierTooSmall("a cycle needs at least two points".into()));
    }
    if faces.len() != size {
        return Err(Error::DomainMismatch { expected: size, found: faces.len() });
    }
    for c in &faces {
        if m.carrier(c) != size - 1 {
            return Err(Error::DomainMismatch { expected: size - 1, found: m.carrier(c) });
        }
        if !m.admits(c) {
            return Err(Error::InvalidArgument(format!("{c:?} is not a structure of {}", m.name())));
        }
    }
    if size > 2 {
        for p in 0..size {
            for q in p + 1..size {
                let lhs = face(m, &faces[p], face_index(p, q))?;
                let rhs = face(m, &faces[q], face_index(q, p))?;
                if lhs != rhs {
                    return Err(Error::CycleEquation { p, q });
                }
            }
        }
    }
    Ok(Cycle { carrier, faces })
}

/// The cycle of faces of `f`.
pub fn restrict_to_cycle<M: SymSet>(m: &M, f: &M::Structure) -> Result<Cycle<M::Structure>> {
    let size = m.carrier(f);
    if size < 2 {
        return Err(Error::CarrierTooSmall("a cycle needs at least two points".into()));
    }
    let faces = (0..size).map(|p| face(m, f, p)).collect::<Result<Vec<_>>>()?;
    Ok(Cycle { carrier: FinSet::new(size)?, faces })
}

/// Whether `f` fills the cycle.
pub fn is_filler<M: SymSet>(m: &M, cycle: &Cycle<M::Structure>, f: &M::Structure) -> Result<bool> {
    if m.carrier(f) != cycle.size() {
        return Err(Error::DomainMismatch { expected: cycle.size(), found: m.carrier(f) });
    }
    for p in 0..cycle.size() {
        if face(m, f, p)? != cycle.faces[p] {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Size limits for exhaustive filler search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FillerSearch {
    pub max_carrier: usize,
    /// Maximum number of candidate structures visited.
    pub max_candidates: u64,
}

impl Default for FillerSearch {
    fn default() -> Self {
        FillerSearch { max_carrier: 8, max_candidates: 1 << 22 }
    }
}

/// Every filler of `cycle`, in enumeration order.
pub fn brute_force_fillers<M: SymSet>(
    m: &M,
    cycle: &Cycle<M::Structure>,
    guard: &FillerSearch,
) -> Result<Vec<M::Structure>> {
    Ok(brute_force_fillers_counted(m, cycle, guard)?.0)
}

/// Like [`brute_force_fillers`], also returning how many candidates were visited.
pub fn brute_force_fillers_counted<M: SymSet>(
    m: &M,
    cycle: &Cycle<M::Structure>,
    guard: &FillerSearch,
) -> Result<(Vec<M::Structure>, u64)> {
    let size = cycle.size();
    if size > guard.max_carrier {
        return Err(Error::GuardExceeded(format!(
            "filler search on {size} points exceeds the limit of {}",
            guard.max_carrier
        )));
    }
    let deltas = (0..size).map(|p| FinFn::delta(size, p)).collect::<Result<Vec<_>>>()?;
    let mut found = Vec::new();
    let mut visited = 0u64;
    for f in m.candidates(size) {
        visited += 1;
        if visited > guard.max_candidates {
            return Err(Error::GuardExceeded(format!(
                "filler search visited more than {} candidates",
                guard.max_candidates
            )));
        }
        if deltas.iter().zip(&cycle.faces).all(|(d, c)| m.pullback(&f, d) == *c) && m.admits(&f) {
            found.push(f);
        }
    }
    Ok((found, visited))
}

/// Mass data of a cycle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CycleStats {
    /// Largest face mass minus one.
    pub n: usize,
    pub k: usize,
    /// `k - n`.
    pub d: usize,
    /// Points whose face has maximal mass.
    pub upper: Vec<usize>,
    pub lower: Vec<usize>,
    pub masses: Vec<usize>,
}

impl CycleStats {
    /// `d ≥ 3` and `k > 2n − 1`.
    pub fn satisfies_filling_inequalities(&self) -> bool {
        self.d >= 3 && self.k + 1 > 2 * self.n
    }

    pub fn is_exceptional_case(&self) -> bool {
        self.n == 1 && self.k == 3
    }

    /// Whether [`construct_degenerate_filler`] accepts cycles with these stats.
    pub fn constructible(&self) -> bool {
        self.satisfies_filling_inequalities() || self.is_exceptional_case()
    }
}

fn stats_from_masses(masses: Vec<usize>) -> CycleStats {
    let k = masses.len() - 1;
    let top = *masses.iter().max().expect("cycles are non-empty");
    let n = top - 1;
    let (upper, lower) = (0..masses.len()).partition(|&p| masses[p] == top);
    CycleStats { n, k, d: k - n, upper, lower, masses }
}

pub fn cycle_stats<M: SymSet>(m: &M, cycle: &Cycle<M::Structure>) -> Result<CycleStats> {
    let masses = cycle.faces.iter().map(|c| mass(m, c)).collect::<Result<Vec<_>>>()?;
    Ok(stats_from_masses(masses))
}

/// Directed graph on `P` with an edge `p → q` iff `p` reduces `c_q`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReductionGraph {
    pub size: usize,
    /// Sorted directed edges.
    pub edges: Vec<(usize, usize)>,
    pub upper: Vec<usize>,
    pub lower: Vec<usize>,
}

impl ReductionGraph {
    pub fn has_edge(&self, p: usize, q: usize) -> bool {
        self.edges.binary_search(&(p, q)).is_ok()
    }

    pub fn indegree(&self, q: usize) -> usize {
        self.edges.iter().filter(|&&(_, t)| t == q).count()
    }

    /// In-neighbours of `q`.
    pub fn reducers(&self, q: usize) -> VertexSet {
        self.edges.iter().filter(|&&(_, t)| t == q).map(|&(s, _)| s).collect()
    }

    pub fn upper_set(&self) -> VertexSet {
        self.upper.iter().copied().collect()
    }

    /// Undirected edges `p < q` of the upper subgraph.
    pub fn upper_edges(&self) -> Vec<(usize, usize)> {
        let upper = self.upper_set();
        self.edges
            .iter()
            .copied()
            .filter(|&(p, q)| p < q && upper.contains(p) && upper.contains(q))
            .collect()
    }

    /// The upper subgraph as an undirected graph on `0..|P̄|`, indexed like `self.upper`.
    pub fn upper_graph(&self) -> Result<UGraph> {
        let idx: HashMap<usize, usize> = self.upper.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        let edges: Vec<(usize, usize)> = self.upper_edges().into_iter().map(|(p, q)| (idx[&p], idx[&q])).collect();
        UGraph::new(self.upper.len(), &edges)
    }

    /// Graphviz rendering: upper points filled black, lower points white.
    pub fn to_dot(&self, carrier: &FinSet) -> String {
        let upper = self.upper_set();
        let mut out = String::from("digraph reduction {\n");
        for p in 0..self.size {
            let (fill, font) = if upper.contains(p) { ("black", "white") } else { ("white", "black") };
            let _ = writeln!(
                out,
                "  {p} [label=\"{}\", shape=circle, style=filled, fillcolor={fill}, fontcolor={font}];",
                carrier.label(p).replace('"', "\\\"")
            );
        }
        for &(p, q) in &self.edges {
            let back = self.has_edge(q, p);
            if back && p < q {
                let _ = writeln!(out, "  {p} -> {q} [dir=both];");
            } else if !back {
                let _ = writeln!(out, "  {p} -> {q};");
            }
        }
        out.push_str("}\n");
        out
    }
}

/// Per-cycle data shared by the filling steps.
struct Analysis {
    stats: CycleStats,
    congruences: Vec<EquivRel>,
    graph: ReductionGraph,
}

fn analyze<M: SymSet>(m: &M, cycle: &Cycle<M::Structure>) -> Result<Analysis> {
    let congruences = cycle.faces.iter().map(|c| ez_congruence(m, c)).collect::<Result<Vec<_>>>()?;
    let stats = stats_from_masses(congruences.iter().map(EquivRel::num_classes).collect());
    let size = cycle.size();
    let mut edges = Vec::new();
    for p in 0..size {
        for q in 0..size {
            if p != q && congruences[q].class_size(face_index(q, p)) >= 2 {
                edges.push((p, q));
            }
        }
    }
    let graph = ReductionGraph { size, edges, upper: stats.upper.clone(), lower: stats.lower.clone() };

    let upper = graph.upper_set();
    for &(p, q) in &graph.edges {
        ensure_internal!(
            !(upper.contains(q) && !upper.contains(p)),
            "reduction graph has an edge {p} -> {q} from a lower to an upper point"
        );
        if upper.contains(p) && upper.contains(q) {
            ensure_internal!(graph.has_edge(q, p), "upper edge {p} -> {q} has no reverse edge");
        }
    }
    if stats.d >= 2 {
        for p in 0..size {
            ensure_internal!(
                graph.indegree(p) >= stats.d,
                "point {p} has indegree {} < d = {}",
                graph.indegree(p),
                stats.d
            );
        }
        ensure_internal!(
            stats.upper.len() > stats.d,
            "only {} upper points with d = {}",
            stats.upper.len(),
            stats.d
        );
    }
    Ok(Analysis { stats, congruences, graph })
}

/// Reduction graph of a valid cycle, with its structural laws checked.
pub fn reduction_graph<M: SymSet>(m: &M, cycle: &Cycle<M::Structure>) -> Result<ReductionGraph> {
    Ok(analyze(m, cycle)?.graph)
}

fn seed_with<M: SymSet>(
    m: &M,
    cycle: &Cycle<M::Structure>,
    an: &Analysis,
    p: usize,
    q: usize,
) -> Result<M::Structure> {
    let upper = an.graph.upper_set();
    if p == q || p >= cycle.size() || q >= cycle.size() {
        return Err(Error::Precondition(format!("({p}, {q}) are not two distinct points of the cycle")));
    }
    if !(upper.contains(p) && upper.contains(q) && an.graph.has_edge(p, q) && an.graph.has_edge(q, p)) {
        return Err(Error::Precondition(format!("{p} <-> {q} is not an edge of the upper reduction graph")));
    }
    let size = cycle.size();
    let (qi, pi) = (face_index(p, q), face_index(q, p));
    let cp = &cycle.faces[p];
    let cq = &cycle.faces[q];
    // common face c_p·δ^q = c_q·δ^p and its decomposition x·α
    let common = ez_decompose(m, &face(m, cp, qi)?)?;
    let beta_p = decomposition_lifting(m, cp, qi, &common)?;
    let beta_q = decomposition_lifting(m, cq, pi, &common)?;
    let mut images = vec![0; size];
    for (r, slot) in images.iter_mut().enumerate() {
        *slot = if r == p { beta_q.apply(pi) } else { beta_p.apply(face_index(p, r)) };
        if r != p && r != q {
            ensure_internal!(
                beta_q.apply(face_index(q, r)) == *slot,
                "lifted maps disagree at {r} for seed edge {p} <-> {q}"
            );
        }
    }
    let beta = FinFn::new(common.mass(), images)?;
    let f = m.pullback(&common.quotient_structure, &beta);
    ensure_internal!(face(m, &f, p)? == *cp, "seed does not restrict to c_{p}");
    ensure_internal!(face(m, &f, q)? == *cq, "seed does not restrict to c_{q}");
    let fm = mass(m, &f)?;
    ensure_internal!(fm == an.stats.n + 1, "seed has mass {fm}, expected {}", an.stats.n + 1);
    debug!("seed on edge {p} <-> {q}: f restricts to c_{p} and c_{q}, mass {fm}");
    Ok(f)
}

/// The unique `f` with `f·δ^p = c_p`, `f·δ^q = c_q` and mass `n + 1`, for an upper edge `p ↔ q`.
pub fn seed_filler<M: SymSet>(m: &M, cycle: &Cycle<M::Structure>, p: usize, q: usize) -> Result<M::Structure> {
    let an = analyze(m, cycle)?;
    seed_with(m, cycle, &an, p, q)
}

fn propagate_with<M: SymSet>(
    m: &M,
    cycle: &Cycle<M::Structure>,
    an: &Analysis,
    f: &M::Structure,
    start: VertexSet,
    order: &[usize],
) -> Result<VertexSet> {
    let size = cycle.size();
    if m.carrier(f) != size {
        return Err(Error::DomainMismatch { expected: size, found: m.carrier(f) });
    }
    if !start.is_subset(VertexSet::full(size)) {
        return Err(Error::Precondition("start set is not a subset of P".into()));
    }
    let fm = mass(m, f)?;
    if fm != an.stats.n + 1 {
        return Err(Error::Precondition(format!("f has mass {fm}, expected {}", an.stats.n + 1)));
    }
    for s in start.iter() {
        if face(m, f, s)? != cycle.faces[s] {
            return Err(Error::Precondition(format!("f does not restrict to c_{s}")));
        }
    }
    let upper = an.graph.upper_set();
    let mut known = start;
    loop {
        let mut grew = false;
        for &r in order {
            if known.contains(r) {
                continue;
            }
            let witnesses = VertexSet(an.graph.reducers(r).0 & known.0 & upper.0);
            if witnesses.len() < 2 {
                continue;
            }
            ensure_internal!(
                face(m, f, r)? == cycle.faces[r],
                "propagation to {r} from {:?} failed: f·δ^{r} differs from c_{r}",
                witnesses
            );
            trace!("propagated to {r} via {:?}", witnesses);
            known.insert(r);
            grew = true;
        }
        if !grew {
            return Ok(known);
        }
    }
}

/// Closure of `start` under the propagation step, checking `f·δ^r = c_r` at each addition.
///
/// A point `r` joins once two distinct upper points of the current set reduce `c_r`.
pub fn propagate_filler<M: SymSet>(
    m: &M,
    cycle: &Cycle<M::Structure>,
    f: &M::Structure,
    start: VertexSet,
) -> Result<VertexSet> {
    let an = analyze(m, cycle)?;
    let order: Vec<usize> = (0..cycle.size()).collect();
    propagate_with(m, cycle, &an, f, start, &order)
}

#[doc(hidden)]
pub fn propagate_filler_in_order<M: SymSet>(
    m: &M,
    cycle: &Cycle<M::Structure>,
    f: &M::Structure,
    start: VertexSet,
    order: &[usize],
) -> Result<VertexSet> {
    let an = analyze(m, cycle)?;
    propagate_with(m, cycle, &an, f, start, order)
}

/// Builds the unique degenerate filler of a sufficiently degenerate cycle.
///
/// Accepts cycles with `d ≥ 3` and `k > 2n − 1`, and the case `(n, k) = (1, 3)`;
/// anything else is rejected with [`Error::Precondition`].
pub fn construct_degenerate_filler<M: SymSet>(m: &M, cycle: &Cycle<M::Structure>) -> Result<M::Structure> {
    let an = analyze(m, cycle)?;
    let st = &an.stats;
    if !st.constructible() {
        return Err(Error::Precondition(format!(
            "no construction for n = {}, k = {}, d = {}: needs d >= 3 and k > 2n - 1, or (n, k) = (1, 3)",
            st.n, st.k, st.d
        )));
    }
    let (p, q) = *an
        .graph
        .upper_edges()
        .first()
        .ok_or_else(|| Error::Internal("upper reduction graph has no edge".into()))?;
    let f = seed_with(m, cycle, &an, p, q)?;
    let all = VertexSet::full(cycle.size());
    if st.satisfies_filling_inequalities() {
        let upper_graph = an.graph.upper_graph()?;
        ensure_internal!(
            crate::propagraph::is_propagative(&upper_graph)?,
            "upper reduction graph is not propagative although d >= 3 and k > 2n - 1"
        );
        let order: Vec<usize> = st.upper.iter().chain(&st.lower).copied().collect();
        let reached = propagate_with(m, cycle, &an, &f, [p, q].into_iter().collect(), &order)?;
        ensure_internal!(reached == all, "propagation stalled at {:?}", reached);
        debug!("propagated from {p} <-> {q} to all of P");
    } else {
        for r in 0..cycle.size() {
            ensure_internal!(face(m, &f, r)? == cycle.faces[r], "exceptional case: f·δ^{r} differs from c_{r}");
        }
        debug!("exceptional case (n, k) = (1, 3): all faces verified directly");
    }
    for r in 0..cycle.size() {
        ensure_internal!(face(m, &f, r)? == cycle.faces[r], "final check: f·δ^{r} differs from c_{r}");
    }
    let cong = ez_congruence(m, &f)?;
    ensure_internal!(
        cong.num_classes() == st.n + 1 && cong.num_classes() < cycle.size(),
        "filler has mass {}, expected a degenerate filler of mass {}",
        cong.num_classes(),
        st.n + 1
    );
    let _ = &an.congruences;
    Ok(f)
}

/// Cycle JSON: `{"symset", "P", "labels"?, "faces": {"0": .., ..}}`.
pub fn cycle_to_json<M: StructureCodec>(m: &M, cycle: &Cycle<M::Structure>) -> Value {
    let mut faces = Map::new();
    for (p, c) in cycle.faces.iter().enumerate() {
        faces.insert(p.to_string(), m.encode(c));
    }
    let mut out = Map::new();
    out.insert("symset".into(), serde_json::to_value(m.spec()).expect("specs serialize"));
    out.insert("P".into(), json!(cycle.size()));
    if let Some(labels) = cycle.carrier.labels() {
        out.insert("labels".into(), json!(labels));
    }
    out.insert("faces".into(), Value::Object(faces));
    Value::Object(out)
}

/// The instance a cycle JSON refers to.
pub fn cycle_json_spec(v: &Value) -> Result<InstanceSpec> {
    let spec = v.get("symset").ok_or_else(|| Error::json("cycle JSON has no \"symset\" field"))?;
    Ok(serde_json::from_value(spec.clone())?)
}

/// Parses and validates a cycle.
pub fn cycle_from_json<M: StructureCodec>(m: &M, v: &Value) -> Result<Cycle<M::Structure>> {
    let size = v
        .get("P")
        .and_then(Value::as_u64)
        .ok_or_else(|| Error::json("cycle JSON needs a positive integer \"P\""))? as usize;
    let carrier = match v.get("labels") {
        Some(labels) => {
            let labels: Vec<String> = serde_json::from_value(labels.clone())?;
            if labels.len() != size {
                return Err(Error::DomainMismatch { expected: size, found: labels.len() });
            }
            FinSet::labeled(labels)?
        }
        None => FinSet::new(size)?,
    };
    let faces = v
        .get("faces")
        .and_then(Value::as_object)
        .ok_or_else(|| Error::json("cycle JSON needs a \"faces\" object"))?;
    if faces.len() != size {
        return Err(Error::DomainMismatch { expected: size, found: faces.len() });
    }
    let mut decoded = Vec::with_capacity(size);
    for p in 0..size {
        let raw = faces.get(&p.to_string()).ok_or_else(|| Error::json(format!("missing face {p}")))?;
        decoded.push(m.decode(raw, Some(size.saturating_sub(1)))?);
    }
    validate_cycle(m, carrier, decoded)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symset::{eq_exact_symset, eq_symset, graph_symset, representable_symset};

    fn twin_graph() -> UGraph {
        UGraph::new(
            7,
            &[(0, 1), (0, 2), (0, 3), (0, 4), (0, 6), (1, 5), (2, 5), (3, 4), (3, 5), (4, 5), (4, 6), (5, 6)],
        )
        .unwrap()
    }

    #[test]
    fn restriction_validates() {
        let m = graph_symset();
        let c = restrict_to_cycle(&m, &twin_graph()).unwrap();
        assert_eq!(c.size(), 7);
        assert!(validate_cycle(&m, c.carrier().clone(), c.faces().to_vec()).is_ok());
        let two = UGraph::new(2, &[(0, 1)]).unwrap();
        assert_eq!(restrict_to_cycle(&m, &two).unwrap().k(), 1);
    }

    #[test]
    fn constant_colouring_has_constant_faces() {
        let m = representable_symset(FinSet::new(3).unwrap());
        let f = FinFn::constant(4, 3, 1).unwrap();
        let c = restrict_to_cycle(&m, &f).unwrap();
        assert!(c.faces().iter().all(|x| *x == FinFn::constant(3, 3, 1).unwrap()));
    }

    #[test]
    fn perturbed_face_breaks_equations() {
        let m = eq_symset();
        let f = EquivRel::from_labels(&[0, 0, 1, 1]);
        let c = restrict_to_cycle(&m, &f).unwrap();
        let mut faces = c.faces().to_vec();
        faces[0] = EquivRel::discrete(3).unwrap();
        assert!(matches!(
            validate_cycle(&m, FinSet::new(4).unwrap(), faces),
            Err(Error::CycleEquation { p: 0, .. })
        ));
    }

    #[test]
    fn twin_cycle_stats_and_graph() {
        let m = graph_symset();
        let c = restrict_to_cycle(&m, &twin_graph()).unwrap();
        let st = cycle_stats(&m, &c).unwrap();
        assert_eq!((st.n, st.k, st.d), (3, 6, 3));
        assert_eq!(st.lower, vec![4]);
        let g = reduction_graph(&m, &c).unwrap();
        let expected_upper = vec![(0, 1), (0, 2), (0, 3), (0, 6), (1, 3), (1, 5), (1, 6), (2, 3), (2, 5), (2, 6), (3, 5), (5, 6)];
        assert_eq!(g.upper_edges(), expected_upper);
        assert_eq!(g.reducers(4), [0, 1, 2, 3, 5, 6].into_iter().collect());
        assert!((0..7).all(|p| !g.has_edge(4, p)));
    }

    #[test]
    fn twin_cycle_is_rebuilt() {
        let m = graph_symset();
        let c = restrict_to_cycle(&m, &twin_graph()).unwrap();
        assert_eq!(construct_degenerate_filler(&m, &c).unwrap(), twin_graph());
        let g = reduction_graph(&m, &c).unwrap();
        for (p, q) in g.upper_edges() {
            assert_eq!(seed_filler(&m, &c, p, q).unwrap(), twin_graph());
        }
        assert!(matches!(seed_filler(&m, &c, 0, 5), Err(Error::Precondition(_))));
        assert!(matches!(seed_filler(&m, &c, 0, 4), Err(Error::Precondition(_))));
    }

    #[test]
    fn propagation_from_full_set() {
        let m = graph_symset();
        let c = restrict_to_cycle(&m, &twin_graph()).unwrap();
        let all = VertexSet::full(7);
        assert_eq!(propagate_filler(&m, &c, &twin_graph(), all).unwrap(), all);
        assert_eq!(propagate_filler(&m, &c, &twin_graph(), [0, 1].into_iter().collect()).unwrap(), all);
    }

    #[test]
    fn tiny_cycle_has_no_reductions() {
        let m = eq_symset();
        let f = EquivRel::discrete(2).unwrap();
        let c = restrict_to_cycle(&m, &f).unwrap();
        assert!(reduction_graph(&m, &c).unwrap().edges.is_empty());
    }

    #[test]
    fn exceptional_case_in_eq() {
        let m = eq_symset();
        for labels in [[0, 0, 1, 1], [0, 0, 0, 1], [0, 1, 1, 0]] {
            let f = EquivRel::from_labels(&labels);
            let c = restrict_to_cycle(&m, &f).unwrap();
            let st = cycle_stats(&m, &c).unwrap();
            assert_eq!((st.n, st.k), (1, 3));
            assert_eq!(construct_degenerate_filler(&m, &c).unwrap(), f);
        }
    }

    #[test]
    fn out_of_range_rejected() {
        let m = eq_symset();
        let f = EquivRel::discrete(4).unwrap();
        let c = restrict_to_cycle(&m, &f).unwrap();
        assert!(matches!(construct_degenerate_filler(&m, &c), Err(Error::Precondition(_))));
    }

    #[test]
    fn json_round_trip() {
        let m = eq_exact_symset(1).unwrap();
        let faces = vec![m.structure(EquivRel::discrete(2).unwrap()); 3];
        let c = validate_cycle(&m, FinSet::labeled(["x", "y", "z"]).unwrap(), faces).unwrap();
        let v = cycle_to_json(&m, &c);
        assert_eq!(v["P"], 3);
        assert_eq!(v["faces"]["1"], json!({"size": 2, "classes": [[0], [1]]}));
        assert_eq!(cycle_json_spec(&v).unwrap(), InstanceSpec::EqExact { l: 1 });
        assert_eq!(cycle_from_json(&m, &v).unwrap(), c);
    }

    #[test]
    fn dot_uses_black_and_white() {
        let m = graph_symset();
        let c = restrict_to_cycle(&m, &twin_graph()).unwrap();
        let dot = reduction_graph(&m, &c).unwrap().to_dot(c.carrier());
        assert!(dot.contains("4 [label=\"4\", shape=circle, style=filled, fillcolor=white"));
        assert!(dot.contains("0 [label=\"0\", shape=circle, style=filled, fillcolor=black"));
        assert!(dot.contains("0 -> 4;"));
        assert!(dot.contains("0 -> 1 [dir=both];"));
    }
}
