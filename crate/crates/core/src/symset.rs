//! Symmetric sets presented extensionally.
//!
//! A symmetric set assigns to every non-empty finite set `A` a finite set of
//! structures and lets a structure on `B` be pulled back along any function
//! `A -> B`. The [`SymSet`] trait asks for exactly that: enumeration,
//! pullback and (through `Eq`) equality.

use std::fmt::Debug;
use std::hash::Hash;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::finset::{enumerate_functions, enumerate_partitions, EquivRel, FinFn, FinSet};
use crate::propagraph::UGraph;

/// A presheaf on non-empty finite sets, given by enumeration and pullback.
///
/// Implementations must satisfy `pullback(x, id) == x` and
/// `pullback(pullback(x, α), β) == pullback(x, α ∘ β)`.
pub trait SymSet {
    type Structure: Clone + Eq + Hash + Debug;

    fn name(&self) -> String;

    /// Size of the carrier a structure lives on.
    fn carrier(&self, x: &Self::Structure) -> usize;

    /// Every structure on `{0..size}`, duplicate-free and in a fixed order.
    fn structures(&self, size: usize) -> Box<dyn Iterator<Item = Self::Structure> + '_>;

    /// `x·α`. Panics if `alpha.cod()` is not the carrier of `x`.
    fn pullback(&self, x: &Self::Structure, alpha: &FinFn) -> Self::Structure;

    /// A cheap superset of [`SymSet::structures`]; see [`SymSet::admits`].
    fn candidates(&self, size: usize) -> Box<dyn Iterator<Item = Self::Structure> + '_> {
        self.structures(size)
    }

    /// Whether a candidate is actually a structure of this set.
    fn admits(&self, _x: &Self::Structure) -> bool {
        true
    }
}

/// JSON encoding of an instance and its structures.
pub trait StructureCodec: SymSet {
    fn spec(&self) -> InstanceSpec;

    fn encode(&self, x: &Self::Structure) -> Value;

    /// Decodes a structure; `carrier` is required when the JSON does not carry it.
    fn decode(&self, v: &Value, carrier: Option<usize>) -> Result<Self::Structure>;
}

/// Names a bundled instance together with its parameters.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InstanceSpec {
    Graph,
    Eq,
    EqLeq { l: usize },
    EqExact { l: usize },
    Representable { size: usize },
    Discrete { labels: Vec<String> },
    /// Graphs of mass at most `l + 1`.
    GraphSkeleton { l: usize },
}

fn carrier_mismatch(expected: usize, found: usize) -> Error {
    Error::DomainMismatch { expected, found }
}

fn check_carrier(carrier: Option<usize>, found: usize) -> Result<()> {
    match carrier {
        Some(c) if c != found => Err(carrier_mismatch(c, found)),
        _ => Ok(()),
    }
}

/// Undirected graphs; an edge survives pullback iff its image is an edge.
#[derive(Debug, Clone, Copy, Default)]
pub struct GraphSymSet;

pub fn graph_symset() -> GraphSymSet {
    GraphSymSet
}

impl SymSet for GraphSymSet {
    type Structure = UGraph;

    fn name(&self) -> String {
        "Graph".into()
    }

    fn carrier(&self, x: &UGraph) -> usize {
        x.num_vertices()
    }

    fn structures(&self, size: usize) -> Box<dyn Iterator<Item = UGraph> + '_> {
        if size == 0 {
            return Box::new(std::iter::empty());
        }
        let pairs = size * (size - 1) / 2;
        assert!(pairs < 64, "graph enumeration on {size} points is out of reach");
        Box::new((0..1u64 << pairs).map(move |m| UGraph::from_pair_mask(size, m)))
    }

    fn pullback(&self, x: &UGraph, alpha: &FinFn) -> UGraph {
        assert_eq!(alpha.cod(), x.num_vertices(), "pullback along a map with the wrong codomain");
        let img = alpha.images();
        let mut out = UGraph::edgeless(alpha.dom()).expect("domain is non-empty");
        for u in 0..img.len() {
            for v in u + 1..img.len() {
                if img[u] != img[v] && x.has_edge(img[u], img[v]) {
                    out.add_edge(u, v);
                }
            }
        }
        out
    }
}

impl StructureCodec for GraphSymSet {
    fn spec(&self) -> InstanceSpec {
        InstanceSpec::Graph
    }

    fn encode(&self, x: &UGraph) -> Value {
        serde_json::to_value(x).expect("graphs serialize")
    }

    fn decode(&self, v: &Value, carrier: Option<usize>) -> Result<UGraph> {
        let g: UGraph = serde_json::from_value(v.clone())?;
        check_carrier(carrier, g.num_vertices())?;
        Ok(g)
    }
}

fn decode_partition(v: &Value, carrier: Option<usize>) -> Result<EquivRel> {
    let r: EquivRel = serde_json::from_value(v.clone())?;
    check_carrier(carrier, r.size())?;
    Ok(r)
}

/// Equivalence relations; `a ≈ b ⟺ α(a) ~ α(b)`.
#[derive(Debug, Clone, Copy, Default)]
pub struct EqSymSet;

pub fn eq_symset() -> EqSymSet {
    EqSymSet
}

impl SymSet for EqSymSet {
    type Structure = EquivRel;

    fn name(&self) -> String {
        "Eq".into()
    }

    fn carrier(&self, x: &EquivRel) -> usize {
        x.size()
    }

    fn structures(&self, size: usize) -> Box<dyn Iterator<Item = EquivRel> + '_> {
        Box::new(enumerate_partitions(size))
    }

    fn pullback(&self, x: &EquivRel, alpha: &FinFn) -> EquivRel {
        x.pullback(alpha).expect("pullback along a map with the wrong codomain")
    }
}

impl StructureCodec for EqSymSet {
    fn spec(&self) -> InstanceSpec {
        InstanceSpec::Eq
    }

    fn encode(&self, x: &EquivRel) -> Value {
        serde_json::to_value(x).expect("partitions serialize")
    }

    fn decode(&self, v: &Value, carrier: Option<usize>) -> Result<EquivRel> {
        decode_partition(v, carrier)
    }
}

/// Partitions into at most `l` blocks.
#[derive(Debug, Clone, Copy)]
pub struct EqLeqSymSet {
    l: usize,
}

pub fn eq_leq_symset(l: usize) -> Result<EqLeqSymSet> {
    if l == 0 {
        return Err(Error::InvalidArgument("Eq_{<=l} needs l >= 1".into()));
    }
    Ok(EqLeqSymSet { l })
}

impl EqLeqSymSet {
    pub fn level(&self) -> usize {
        self.l
    }
}

impl SymSet for EqLeqSymSet {
    type Structure = EquivRel;

    fn name(&self) -> String {
        format!("Eq_{{<={}}}", self.l)
    }

    fn carrier(&self, x: &EquivRel) -> usize {
        x.size()
    }

    fn structures(&self, size: usize) -> Box<dyn Iterator<Item = EquivRel> + '_> {
        let l = self.l;
        Box::new(enumerate_partitions(size).filter(move |r| r.num_classes() <= l))
    }

    fn pullback(&self, x: &EquivRel, alpha: &FinFn) -> EquivRel {
        x.pullback(alpha).expect("pullback along a map with the wrong codomain")
    }
}

impl StructureCodec for EqLeqSymSet {
    fn spec(&self) -> InstanceSpec {
        InstanceSpec::EqLeq { l: self.l }
    }

    fn encode(&self, x: &EquivRel) -> Value {
        serde_json::to_value(x).expect("partitions serialize")
    }

    fn decode(&self, v: &Value, carrier: Option<usize>) -> Result<EquivRel> {
        let r = decode_partition(v, carrier)?;
        if r.num_classes() > self.l {
            return Err(Error::InvalidArgument(format!(
                "partition has {} blocks, {} allows at most {}",
                r.num_classes(),
                self.name(),
                self.l
            )));
        }
        Ok(r)
    }
}

/// A structure of `Eq_{=l+1}`: a partition into exactly `l + 1` blocks, or the sentinel `*`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExactPartition {
    Blocks(EquivRel),
    Sentinel { size: usize },
}

impl Debug for ExactPartition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ExactPartition::Blocks(r) => r.fmt(f),
            ExactPartition::Sentinel { size } => write!(f, "*[{size}]"),
        }
    }
}

impl ExactPartition {
    pub fn size(&self) -> usize {
        match self {
            ExactPartition::Blocks(r) => r.size(),
            ExactPartition::Sentinel { size } => *size,
        }
    }

    pub fn is_sentinel(&self) -> bool {
        matches!(self, ExactPartition::Sentinel { .. })
    }
}

/// Partitions into exactly `l + 1` blocks plus an absorbing error sentinel.
#[derive(Debug, Clone, Copy)]
pub struct EqExactSymSet {
    l: usize,
}

pub fn eq_exact_symset(l: usize) -> Result<EqExactSymSet> {
    if l == 0 {
        return Err(Error::InvalidArgument("Eq_{=l+1} needs l >= 1".into()));
    }
    Ok(EqExactSymSet { l })
}

impl EqExactSymSet {
    pub fn level(&self) -> usize {
        self.l
    }

    /// Wraps a partition, mapping anything without exactly `l + 1` blocks to `*`.
    pub fn structure(&self, r: EquivRel) -> ExactPartition {
        if r.num_classes() == self.l + 1 {
            ExactPartition::Blocks(r)
        } else {
            ExactPartition::Sentinel { size: r.size() }
        }
    }
}

impl SymSet for EqExactSymSet {
    type Structure = ExactPartition;

    fn name(&self) -> String {
        format!("Eq_{{={}}}", self.l + 1)
    }

    fn carrier(&self, x: &ExactPartition) -> usize {
        x.size()
    }

    fn structures(&self, size: usize) -> Box<dyn Iterator<Item = ExactPartition> + '_> {
        if size == 0 {
            return Box::new(std::iter::empty());
        }
        let blocks = self.l + 1;
        Box::new(
            enumerate_partitions(size)
                .filter(move |r| r.num_classes() == blocks)
                .map(ExactPartition::Blocks)
                .chain(std::iter::once(ExactPartition::Sentinel { size })),
        )
    }

    fn pullback(&self, x: &ExactPartition, alpha: &FinFn) -> ExactPartition {
        assert_eq!(alpha.cod(), x.size(), "pullback along a map with the wrong codomain");
        match x {
            ExactPartition::Sentinel { .. } => ExactPartition::Sentinel { size: alpha.dom() },
            ExactPartition::Blocks(r) => self.structure(r.pullback(alpha).expect("codomain checked")),
        }
    }
}

impl StructureCodec for EqExactSymSet {
    fn spec(&self) -> InstanceSpec {
        InstanceSpec::EqExact { l: self.l }
    }

    fn encode(&self, x: &ExactPartition) -> Value {
        match x {
            ExactPartition::Blocks(r) => serde_json::to_value(r).expect("partitions serialize"),
            ExactPartition::Sentinel { .. } => json!("*"),
        }
    }

    fn decode(&self, v: &Value, carrier: Option<usize>) -> Result<ExactPartition> {
        if v.as_str() == Some("*") {
            let size = carrier.ok_or_else(|| Error::json("the sentinel \"*\" needs an explicit carrier size"))?;
            if size == 0 {
                return Err(Error::EmptyCarrier);
            }
            return Ok(ExactPartition::Sentinel { size });
        }
        let r = decode_partition(v, carrier)?;
        if r.num_classes() != self.l + 1 {
            return Err(Error::InvalidArgument(format!(
                "partition has {} blocks, {} needs exactly {}",
                r.num_classes(),
                self.name(),
                self.l + 1
            )));
        }
        Ok(ExactPartition::Blocks(r))
    }
}

/// Colourings `A -> S` of a fixed target `S`; pullback is precomposition.
#[derive(Debug, Clone)]
pub struct RepresentableSymSet {
    target: FinSet,
}

pub fn representable_symset(target: FinSet) -> RepresentableSymSet {
    RepresentableSymSet { target }
}

impl RepresentableSymSet {
    pub fn target(&self) -> &FinSet {
        &self.target
    }
}

impl SymSet for RepresentableSymSet {
    type Structure = FinFn;

    fn name(&self) -> String {
        format!("Delta^{}", self.target.size() - 1)
    }

    fn carrier(&self, x: &FinFn) -> usize {
        x.dom()
    }

    fn structures(&self, size: usize) -> Box<dyn Iterator<Item = FinFn> + '_> {
        Box::new(enumerate_functions(size, self.target.size()))
    }

    fn pullback(&self, x: &FinFn, alpha: &FinFn) -> FinFn {
        x.after(alpha).expect("pullback along a map with the wrong codomain")
    }
}

impl StructureCodec for RepresentableSymSet {
    fn spec(&self) -> InstanceSpec {
        InstanceSpec::Representable { size: self.target.size() }
    }

    fn encode(&self, x: &FinFn) -> Value {
        json!(x.images())
    }

    fn decode(&self, v: &Value, carrier: Option<usize>) -> Result<FinFn> {
        let images: Vec<usize> = serde_json::from_value(v.clone())?;
        check_carrier(carrier, images.len())?;
        FinFn::new(self.target.size(), images)
    }
}

/// A structure of a discrete symmetric set: one label, on a carrier of some size.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Labelled {
    pub size: usize,
    pub label: usize,
}

/// The constant presheaf on a label set; every pullback keeps the label.
#[derive(Debug, Clone)]
pub struct DiscreteSymSet {
    labels: Vec<String>,
}

pub fn discrete_symset<S: Into<String>>(labels: impl IntoIterator<Item = S>) -> Result<DiscreteSymSet> {
    let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
    if labels.is_empty() {
        return Err(Error::InvalidArgument("a discrete symmetric set needs at least one label".into()));
    }
    Ok(DiscreteSymSet { labels })
}

impl DiscreteSymSet {
    pub fn labels(&self) -> &[String] {
        &self.labels
    }
}

impl SymSet for DiscreteSymSet {
    type Structure = Labelled;

    fn name(&self) -> String {
        format!("Discrete{:?}", self.labels)
    }

    fn carrier(&self, x: &Labelled) -> usize {
        x.size
    }

    fn structures(&self, size: usize) -> Box<dyn Iterator<Item = Labelled> + '_> {
        if size == 0 {
            return Box::new(std::iter::empty());
        }
        Box::new((0..self.labels.len()).map(move |label| Labelled { size, label }))
    }

    fn pullback(&self, x: &Labelled, alpha: &FinFn) -> Labelled {
        assert_eq!(alpha.cod(), x.size, "pullback along a map with the wrong codomain");
        Labelled { size: alpha.dom(), label: x.label }
    }
}

impl StructureCodec for DiscreteSymSet {
    fn spec(&self) -> InstanceSpec {
        InstanceSpec::Discrete { labels: self.labels.clone() }
    }

    fn encode(&self, x: &Labelled) -> Value {
        json!(self.labels[x.label])
    }

    fn decode(&self, v: &Value, carrier: Option<usize>) -> Result<Labelled> {
        let size = carrier.ok_or_else(|| Error::json("discrete structures need an explicit carrier size"))?;
        if size == 0 {
            return Err(Error::EmptyCarrier);
        }
        let label = match v {
            Value::String(s) => self.labels.iter().position(|l| l == s),
            Value::Number(n) => n.as_u64().map(|i| i as usize).filter(|&i| i < self.labels.len()),
            _ => None,
        }
        .ok_or_else(|| Error::json(format!("unknown label {v}")))?;
        Ok(Labelled { size, label })
    }
}
