//! Skeleta, coskeletality and the Aufhebung experiments.
//!
//! Everything here is desk-scale: checks enumerate or sample structures on
//! small carriers and never claim more than what was examined.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::hash::Hash;

use log::{debug, info};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::Value;

use crate::cycles::{
    brute_force_fillers, brute_force_fillers_counted, construct_degenerate_filler, cycle_to_json, is_filler,
    reduction_graph, restrict_to_cycle, validate_cycle, Cycle, FillerSearch,
};
use crate::error::{ensure_internal, Error, Result};
use crate::ez::{face, mass};
use crate::finset::{face_point, EquivRel, FinFn, FinSet};
use crate::propagraph::non_propagating_pair;
use crate::symset::{
    eq_exact_symset, eq_leq_symset, graph_symset, ExactPartition, GraphSymSet, InstanceSpec, StructureCodec,
    SymSet,
};

/// The sub-symmetric set of structures with mass at most `l + 1`.
#[derive(Debug, Clone, Copy)]
pub struct Skeleton<M> {
    inner: M,
    l: usize,
}

impl<M: SymSet> Skeleton<M> {
    pub fn new(inner: M, l: usize) -> Self {
        Skeleton { inner, l }
    }

    pub fn inner(&self) -> &M {
        &self.inner
    }

    pub fn level(&self) -> usize {
        self.l
    }

    fn within(&self, x: &M::Structure) -> bool {
        mass(&self.inner, x).is_ok_and(|v| v <= self.l + 1)
    }
}

/// `sk_l Graph`.
pub fn graph_skeleton(l: usize) -> Skeleton<GraphSymSet> {
    Skeleton::new(graph_symset(), l)
}

impl<M: SymSet> SymSet for Skeleton<M> {
    type Structure = M::Structure;

    fn name(&self) -> String {
        format!("sk_{} {}", self.l, self.inner.name())
    }

    fn carrier(&self, x: &M::Structure) -> usize {
        self.inner.carrier(x)
    }

    fn structures(&self, size: usize) -> Box<dyn Iterator<Item = M::Structure> + '_> {
        Box::new(self.inner.structures(size).filter(move |x| self.within(x)))
    }

    fn pullback(&self, x: &M::Structure, alpha: &FinFn) -> M::Structure {
        self.inner.pullback(x, alpha)
    }

    fn candidates(&self, size: usize) -> Box<dyn Iterator<Item = M::Structure> + '_> {
        self.inner.candidates(size)
    }

    fn admits(&self, x: &M::Structure) -> bool {
        self.inner.admits(x) && self.within(x)
    }
}

impl StructureCodec for Skeleton<GraphSymSet> {
    fn spec(&self) -> InstanceSpec {
        InstanceSpec::GraphSkeleton { l: self.l }
    }

    fn encode(&self, x: &Self::Structure) -> Value {
        self.inner.encode(x)
    }

    fn decode(&self, v: &Value, carrier: Option<usize>) -> Result<Self::Structure> {
        let g = self.inner.decode(v, carrier)?;
        let found = mass(&self.inner, &g)?;
        if found > self.l + 1 {
            return Err(Error::InvalidArgument(format!(
                "graph has mass {found}, {} allows at most {}",
                self.name(),
                self.l + 1
            )));
        }
        Ok(g)
    }
}

/// `mass(x) ≤ l + 1`.
pub fn skeleton_membership<M: SymSet>(m: &M, l: usize, x: &M::Structure) -> Result<bool> {
    Ok(mass(m, x)? <= l + 1)
}

/// A structure on at most `size_bound` points with mass above `l + 1`, if any.
pub fn skeletality_witness<M: SymSet>(m: &M, l: usize, size_bound: usize) -> Result<Option<M::Structure>> {
    if size_bound == 0 {
        return Err(Error::InvalidArgument("size bound must be at least 1".into()));
    }
    for size in 1..=size_bound {
        for x in m.structures(size) {
            if !skeleton_membership(m, l, &x)? {
                return Ok(Some(x));
            }
        }
    }
    Ok(None)
}

/// Whether every structure on at most `size_bound` points has mass at most `l + 1`.
pub fn is_l_skeletal<M: SymSet>(m: &M, l: usize, size_bound: usize) -> Result<bool> {
    Ok(skeletality_witness(m, l, size_bound)?.is_none())
}

/// One cycle of a [`CycleCensus`], given by indices into the census pools.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CensusEntry {
    pub faces: Vec<usize>,
    pub fillers: Vec<usize>,
}

/// All `k`-cycles of an instance together with all their fillers.
#[derive(Debug, Clone)]
pub struct CycleCensus<X> {
    pub k: usize,
    /// Structures on `k` points.
    pub face_pool: Vec<X>,
    /// Structures on `k + 1` points.
    pub filler_pool: Vec<X>,
    pub cycles: Vec<CensusEntry>,
}

impl<X: Clone> CycleCensus<X> {
    pub fn cycle(&self, i: usize) -> Cycle<X>
    where
        X: Eq + Hash + std::fmt::Debug,
    {
        self.build(&self.cycles[i])
    }

    fn build(&self, e: &CensusEntry) -> Cycle<X>
    where
        X: Eq + Hash + std::fmt::Debug,
    {
        Cycle::from_parts(
            FinSet::new(self.k + 1).expect("k + 1 > 0"),
            e.faces.iter().map(|&i| self.face_pool[i].clone()).collect(),
        )
    }
}

fn collect_bounded<M: SymSet>(m: &M, size: usize, limit: u64) -> Result<Vec<M::Structure>> {
    let mut out = Vec::new();
    for (seen, x) in m.structures(size).enumerate() {
        if seen as u64 >= limit {
            return Err(Error::GuardExceeded(format!(
                "{} has more than {limit} structures on {size} points",
                m.name()
            )));
        }
        out.push(x);
    }
    Ok(out)
}

fn intern<X: Clone + Eq + Hash>(pool: &[X]) -> HashMap<X, usize> {
    pool.iter().cloned().enumerate().map(|(i, x)| (x, i)).collect()
}

/// Face ids of every pool element relative to `lower`.
fn face_ids<M: SymSet>(m: &M, pool: &[M::Structure], lower: &HashMap<M::Structure, usize>) -> Result<Vec<Vec<usize>>> {
    let mut out = Vec::with_capacity(pool.len());
    for x in pool {
        let size = m.carrier(x);
        let mut ids = Vec::with_capacity(size);
        for p in 0..size {
            let c = face(m, x, p)?;
            let id = lower.get(&c).copied();
            ensure_internal!(id.is_some(), "face {p} of {x:?} is not a structure of {}", m.name());
            ids.push(id.unwrap_or_default());
        }
        out.push(ids);
    }
    Ok(out)
}

/// Exhaustive census of the `k`-cycles of `m` and their fillers.
///
/// Fails with [`Error::GuardExceeded`] when `k + 1 > max_carrier` or when any
/// pool or the cycle list grows beyond `limit`.
pub fn cycle_census<M: SymSet>(m: &M, k: usize, max_carrier: usize, limit: u64) -> Result<CycleCensus<M::Structure>> {
    if k == 0 {
        return Err(Error::InvalidArgument("cycles need k >= 1".into()));
    }
    if k + 1 > max_carrier {
        return Err(Error::GuardExceeded(format!("{k}-cycles live on {} points, limit is {max_carrier}", k + 1)));
    }
    let face_pool = collect_bounded(m, k, limit)?;
    let filler_pool = collect_bounded(m, k + 1, limit)?;
    let face_index_of = intern(&face_pool);
    let filler_faces = face_ids(m, &filler_pool, &face_index_of)?;
    let mut fillers_of: HashMap<Vec<usize>, Vec<usize>> = HashMap::new();
    for (i, ids) in filler_faces.into_iter().enumerate() {
        fillers_of.entry(ids).or_default().push(i);
    }

    // face_faces[s][i] = id of (face_pool[s])·δ^i among structures on k − 1 points
    let face_faces = if k >= 2 {
        let lower = collect_bounded(m, k - 1, limit)?;
        face_ids(m, &face_pool, &intern(&lower))?
    } else {
        vec![Vec::new(); face_pool.len()]
    };
    // candidates for c_p (p ≥ 1) keyed by c_p·δ^0, which must equal c_0·δ^{p−1}
    let mut by_first: HashMap<usize, Vec<usize>> = HashMap::new();
    if k >= 2 {
        for (s, ids) in face_faces.iter().enumerate() {
            by_first.entry(ids[0]).or_default().push(s);
        }
    }
    let all: Vec<usize> = (0..face_pool.len()).collect();
    let empty = Vec::new();

    let size = k + 1;
    let mut cycles = Vec::new();
    let mut chosen = vec![0usize; size];
    // explicit stack of candidate positions per depth
    let mut pos = vec![0usize; size];
    let mut depth = 0usize;
    loop {
        let cands: &Vec<usize> = if depth == 0 || k == 1 {
            &all
        } else {
            by_first.get(&face_faces[chosen[0]][depth - 1]).unwrap_or(&empty)
        };
        let mut advanced = false;
        while pos[depth] < cands.len() {
            let s = cands[pos[depth]];
            pos[depth] += 1;
            // c_s·δ^q = c_q·δ^{s−1} for 0 < q < depth
            let ok = k == 1 || (1..depth).all(|q| face_faces[s][q] == face_faces[chosen[q]][depth - 1]);
            if ok {
                chosen[depth] = s;
                advanced = true;
                break;
            }
        }
        if !advanced {
            if depth == 0 {
                break;
            }
            pos[depth] = 0;
            depth -= 1;
            continue;
        }
        if depth + 1 == size {
            if cycles.len() as u64 >= limit {
                return Err(Error::GuardExceeded(format!("{} has more than {limit} {k}-cycles", m.name())));
            }
            let fillers = fillers_of.get(&chosen).cloned().unwrap_or_default();
            cycles.push(CensusEntry { faces: chosen.clone(), fillers });
        } else {
            depth += 1;
        }
    }
    debug!(
        "{}: {} structures on {k} points, {} on {size}, {} {k}-cycles",
        m.name(),
        face_pool.len(),
        filler_pool.len(),
        cycles.len()
    );
    Ok(CycleCensus { k, face_pool, filler_pool, cycles })
}

/// Outcome of a coskeletality check.
#[derive(Debug, Clone)]
pub struct CoskeletalityReport<X> {
    pub l: usize,
    pub k_bound: usize,
    /// `(k, number of k-cycles)` for every `k` examined.
    pub cycles_checked: Vec<(usize, usize)>,
    /// First cycle without exactly one filler, with its filler count.
    pub failure: Option<(Cycle<X>, usize)>,
}

impl<X> CoskeletalityReport<X> {
    pub fn holds(&self) -> bool {
        self.failure.is_none()
    }
}

/// Checks that every `k`-cycle with `l < k ≤ k_bound` has exactly one filler.
pub fn coskeletality_check<M: SymSet>(
    m: &M,
    l: usize,
    k_bound: usize,
    carrier_guard: usize,
) -> Result<CoskeletalityReport<M::Structure>> {
    let mut report = CoskeletalityReport { l, k_bound, cycles_checked: Vec::new(), failure: None };
    for k in (l + 1).max(1)..=k_bound {
        let census = cycle_census(m, k, carrier_guard, u64::MAX)?;
        report.cycles_checked.push((k, census.cycles.len()));
        if let Some(bad) = census.cycles.iter().find(|e| e.fillers.len() != 1) {
            report.failure = Some((census.build(bad), bad.fillers.len()));
            break;
        }
    }
    Ok(report)
}

pub fn is_l_coskeletal<M: SymSet>(m: &M, l: usize, k_bound: usize, carrier_guard: usize) -> Result<bool> {
    Ok(coskeletality_check(m, l, k_bound, carrier_guard)?.holds())
}

/// Labels of the lower-bound carrier for level `l`.
fn lower_bound_carrier(l: usize) -> Result<FinSet> {
    match l {
        1 => FinSet::new(3),
        2 => FinSet::new(5),
        _ => FinSet::labeled((1..=l).map(|i| format!("a{i}")).chain((1..=l).map(|i| format!("b{i}")))),
    }
}

/// The unfillable cycle of `Eq_{=l+1}` showing `a_l` is at least the claimed value.
pub fn lower_bound_cycle(l: usize) -> Result<Cycle<ExactPartition>> {
    let m = eq_exact_symset(l)?;
    let carrier = lower_bound_carrier(l)?;
    let size = carrier.size();
    let faces = (0..size)
        .map(|p| {
            let labels: Vec<usize> = (0..size - 1)
                .map(|i| {
                    let r = face_point(p, i);
                    let merged = match l {
                        1 => false,
                        2 => r == (p + 1) % 5 || r == (p + 4) % 5,
                        _ => (r < l) == (p < l),
                    };
                    if merged {
                        size
                    } else {
                        r
                    }
                })
                .collect();
            m.structure(EquivRel::from_labels(&labels))
        })
        .collect::<Vec<_>>();
    for c in &faces {
        ensure_internal!(!c.is_sentinel(), "lower-bound face {c:?} does not have {} blocks", l + 1);
    }
    validate_cycle(&m, carrier, faces)
}

/// Evidence that [`lower_bound_cycle`] has no filler.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LowerBoundCertificate {
    pub level: usize,
    pub k: usize,
    pub points: Vec<String>,
    pub structures_searched: u64,
    pub fillers: usize,
    pub reduction_edges: Vec<(usize, usize)>,
    pub upper_graph_propagative: bool,
    /// Two points of `P` whose closure in the upper graph is not everything.
    pub non_propagating_pair: Option<(usize, usize)>,
    pub cycle: Value,
}

impl LowerBoundCertificate {
    pub fn holds(&self) -> bool {
        self.fillers == 0 && !self.upper_graph_propagative
    }
}

pub const DEFAULT_MAX_LOWER_BOUND_LEVEL: usize = 3;

pub fn verify_lower_bound(l: usize) -> Result<LowerBoundCertificate> {
    verify_lower_bound_with(l, DEFAULT_MAX_LOWER_BOUND_LEVEL)
}

/// Brute-force search over all structures on the lower-bound carrier.
pub fn verify_lower_bound_with(l: usize, max_level: usize) -> Result<LowerBoundCertificate> {
    if l > max_level {
        return Err(Error::GuardExceeded(format!("lower bound for level {l} exceeds the limit {max_level}")));
    }
    let m = eq_exact_symset(l)?;
    let cycle = lower_bound_cycle(l)?;
    let guard = FillerSearch { max_carrier: 2 * max_level.max(3), max_candidates: u64::MAX };
    let (fillers, searched) = brute_force_fillers_counted(&m, &cycle, &guard)?;
    let rg = reduction_graph(&m, &cycle)?;
    let upper = rg.upper_graph()?;
    let pair = non_propagating_pair(&upper)?.map(|(u, v)| (rg.upper[u], rg.upper[v]));
    let points = (0..cycle.size()).map(|p| cycle.carrier().label(p)).collect();
    info!("lower bound l = {l}: {searched} structures searched, {} fillers", fillers.len());
    Ok(LowerBoundCertificate {
        level: l,
        k: cycle.k(),
        points,
        structures_searched: searched,
        fillers: fillers.len(),
        reduction_edges: rg.edges.clone(),
        upper_graph_propagative: pair.is_none(),
        non_propagating_pair: pair,
        cycle: cycle_to_json(&m, &cycle),
    })
}

/// The claimed Aufhebung: 1, 2, 4 for `l = 0, 1, 2` and `2l − 1` beyond.
pub fn claimed_aufhebung(l: usize) -> usize {
    match l {
        0 => 1,
        1 => 2,
        2 => 4,
        _ => 2 * l - 1,
    }
}

/// Samples degenerate structures `f = y·α` with `α` a random surjection onto a smaller set.
pub struct DegenerateSampler<'m, M: SymSet> {
    m: &'m M,
    max_mass: usize,
    pools: HashMap<usize, Vec<M::Structure>>,
}

impl<'m, M: SymSet> DegenerateSampler<'m, M> {
    /// `y` is drawn from carriers of size at most `max_mass`.
    pub fn new(m: &'m M, max_mass: usize) -> Self {
        DegenerateSampler { m, max_mass, pools: HashMap::new() }
    }

    fn pool(&mut self, b: usize) -> &[M::Structure] {
        let m = self.m;
        self.pools.entry(b).or_insert_with(|| m.structures(b).collect())
    }

    pub fn sample<R: Rng>(&mut self, size: usize, rng: &mut R) -> Result<M::Structure> {
        if size < 2 {
            return Err(Error::CarrierTooSmall("degenerate structures need at least two points".into()));
        }
        let top = self.max_mass.min(size - 1);
        if top == 0 {
            return Err(Error::InvalidArgument("max mass must be at least 1".into()));
        }
        let mut sizes: Vec<usize> = (1..=top).collect();
        sizes.shuffle(rng);
        // favour the largest target half the time
        if rng.gen_bool(0.5) {
            sizes.retain(|&b| b != top);
            sizes.insert(0, top);
        }
        for b in sizes {
            let pool = self.pool(b);
            let Some(y) = pool.choose(rng).cloned() else { continue };
            let mut images: Vec<usize> = (0..size).map(|i| if i < b { i } else { rng.gen_range(0..b) }).collect();
            images.shuffle(rng);
            let alpha = FinFn::new(b, images)?;
            return Ok(self.m.pullback(&y, &alpha));
        }
        Err(Error::InvalidArgument(format!("{} has no structures of mass at most {top}", self.m.name())))
    }
}

/// Limits for [`verify_aufhebung`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Guards {
    pub graph_carrier: usize,
    pub eq_carrier: usize,
    /// Largest pool or cycle count handled exhaustively; larger cases are sampled.
    pub exhaustive_limit: u64,
    pub samples: usize,
    /// Sampled cycles also checked by brute-force filler search.
    pub oracle_samples: usize,
    pub seed: u64,
    pub max_lower_bound_level: usize,
}

impl Default for Guards {
    fn default() -> Self {
        Guards {
            graph_carrier: 7,
            eq_carrier: 8,
            exhaustive_limit: 1 << 16,
            samples: 48,
            oracle_samples: 6,
            seed: 0x5eed,
            max_lower_bound_level: DEFAULT_MAX_LOWER_BOUND_LEVEL,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckMode {
    Exhaustive,
    Sampled,
    Skipped,
}

/// One upper-bound check: all tested `k`-cycles of one instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UpperBoundCheck {
    pub k: usize,
    pub instance: String,
    pub mode: CheckMode,
    pub cycles_tested: usize,
    pub uniquely_filled: usize,
    pub constructive_matches: usize,
    /// Cycles whose filler set was established by exhaustive search.
    pub oracle_checked: usize,
    pub all_uniquely_filled: bool,
    pub note: Option<String>,
}

impl UpperBoundCheck {
    fn new(k: usize, instance: String, mode: CheckMode) -> Self {
        UpperBoundCheck {
            k,
            instance,
            mode,
            cycles_tested: 0,
            uniquely_filled: 0,
            constructive_matches: 0,
            oracle_checked: 0,
            all_uniquely_filled: true,
            note: None,
        }
    }

    fn fail(&mut self, why: String) {
        if self.all_uniquely_filled {
            self.note = Some(why);
        }
        self.all_uniquely_filled = false;
    }

    pub fn passed(&self) -> bool {
        self.mode == CheckMode::Skipped || self.all_uniquely_filled
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AufhebungParameters {
    pub max_k: usize,
    pub guards: Guards,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AufhebungReport {
    pub level: usize,
    pub claimed_value: usize,
    pub lower_bound: LowerBoundCertificate,
    pub upper_bound_checks: Vec<UpperBoundCheck>,
    pub parameters: AufhebungParameters,
}

impl AufhebungReport {
    pub fn passed(&self) -> bool {
        self.lower_bound.holds() && self.upper_bound_checks.iter().all(UpperBoundCheck::passed)
    }

    /// Plain-text summary.
    pub fn table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "level l = {}, claimed a_l = {}", self.level, self.claimed_value);
        let lb = &self.lower_bound;
        let _ = writeln!(
            out,
            "lower bound: {}-cycle on {} points, {} structures searched, fillers: {}, upper graph propagative: {}",
            lb.k,
            lb.points.len(),
            lb.structures_searched,
            lb.fillers,
            lb.upper_graph_propagative
        );
        let _ = writeln!(
            out,
            "{:>3}  {:<16} {:<10} {:>8} {:>8} {:>8} {:>8}  result",
            "k", "instance", "mode", "cycles", "unique", "built", "oracle"
        );
        for c in &self.upper_bound_checks {
            let mode = match c.mode {
                CheckMode::Exhaustive => "exhaustive",
                CheckMode::Sampled => "sampled",
                CheckMode::Skipped => "skipped",
            };
            let result = match (c.mode, c.all_uniquely_filled) {
                (CheckMode::Skipped, _) => "-".to_string(),
                (_, true) => "ok".to_string(),
                (_, false) => format!("FAIL: {}", c.note.as_deref().unwrap_or("")),
            };
            let _ = writeln!(
                out,
                "{:>3}  {:<16} {:<10} {:>8} {:>8} {:>8} {:>8}  {}",
                c.k, c.instance, mode, c.cycles_tested, c.uniquely_filled, c.constructive_matches, c.oracle_checked, result
            );
        }
        let _ = writeln!(out, "overall: {}", if self.passed() { "pass" } else { "FAIL" });
        out
    }
}

/// Checks one cycle against the constructive filler and, when known, its full filler set.
fn check_cycle<M: SymSet>(
    m: &M,
    l: usize,
    cycle: &Cycle<M::Structure>,
    fillers: Option<&[M::Structure]>,
    check: &mut UpperBoundCheck,
) -> Result<()> {
    check.cycles_tested += 1;
    let built = match construct_degenerate_filler(m, cycle) {
        Ok(f) => f,
        Err(e) if e.is_internal() => return Err(e),
        Err(e) => {
            check.fail(format!("construction rejected a {}-cycle: {e}", cycle.k()));
            return Ok(());
        }
    };
    if !is_filler(m, cycle, &built)? || !m.admits(&built) || mass(m, &built)? > l + 1 {
        check.fail(format!("constructed {built:?} is not an admissible filler"));
        return Ok(());
    }
    match fillers {
        Some(all) => {
            check.oracle_checked += 1;
            if all.len() == 1 {
                check.uniquely_filled += 1;
            } else {
                check.fail(format!("a {}-cycle has {} fillers", cycle.k(), all.len()));
            }
            if all.contains(&built) {
                check.constructive_matches += 1;
            } else {
                check.fail(format!("constructed filler {built:?} is not among the fillers found by search"));
            }
        }
        None => {
            check.constructive_matches += 1;
        }
    }
    Ok(())
}

fn exhaustive_check<M: SymSet>(m: &M, l: usize, census: &CycleCensus<M::Structure>, check: &mut UpperBoundCheck) -> Result<()> {
    for e in &census.cycles {
        let cycle = census.build(e);
        let fillers: Vec<M::Structure> = e.fillers.iter().map(|&i| census.filler_pool[i].clone()).collect();
        check_cycle(m, l, &cycle, Some(&fillers), check)?;
    }
    Ok(())
}

fn sampled_check<M: SymSet>(
    m: &M,
    l: usize,
    k: usize,
    guards: &Guards,
    max_carrier: usize,
    check: &mut UpperBoundCheck,
) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(guards.seed ^ ((l as u64) << 32) ^ k as u64);
    let mut sampler = DegenerateSampler::new(m, l + 1);
    let search = FillerSearch { max_carrier, max_candidates: u64::MAX };
    for i in 0..guards.samples {
        let f = sampler.sample(k + 1, &mut rng)?;
        let cycle = restrict_to_cycle(m, &f)?;
        if i < guards.oracle_samples {
            let fillers = brute_force_fillers(m, &cycle, &search)?;
            check_cycle(m, l, &cycle, Some(&fillers), check)?;
        } else {
            check_cycle(m, l, &cycle, None, check)?;
            let built = construct_degenerate_filler(m, &cycle).ok();
            if built.as_ref() != Some(&f) {
                check.fail(format!("constructed filler differs from the generating structure {f:?}"));
            }
        }
    }
    Ok(())
}

fn upper_bound_check<M: SymSet>(m: &M, l: usize, k: usize, max_carrier: usize, guards: &Guards) -> Result<UpperBoundCheck> {
    let name = m.name();
    if k + 1 > max_carrier {
        let mut c = UpperBoundCheck::new(k, name, CheckMode::Skipped);
        c.note = Some(format!("{} points exceeds the carrier limit {max_carrier}", k + 1));
        return Ok(c);
    }
    match cycle_census(m, k, max_carrier, guards.exhaustive_limit) {
        Ok(census) => {
            let mut c = UpperBoundCheck::new(k, name, CheckMode::Exhaustive);
            exhaustive_check(m, l, &census, &mut c)?;
            Ok(c)
        }
        Err(Error::GuardExceeded(why)) => {
            debug!("{name}, k = {k}: {why}; sampling instead");
            let mut c = UpperBoundCheck::new(k, name, CheckMode::Sampled);
            sampled_check(m, l, k, guards, max_carrier, &mut c)?;
            Ok(c)
        }
        Err(e) => Err(e),
    }
}

/// Desk-scale check of the claimed Aufhebung of level `l`.
///
/// Combines the lower-bound certificate with upper-bound checks for every
/// `k` from `a_l + 1` to `max_k` on the l-skeletal instances `Eq_{=l+1}`,
/// `Eq_{≤l+1}` and `sk_l Graph`.
pub fn verify_aufhebung(l: usize, max_k: usize, guards: &Guards) -> Result<AufhebungReport> {
    if l == 0 {
        return Err(Error::InvalidArgument("verify_aufhebung needs l >= 1".into()));
    }
    let claimed = claimed_aufhebung(l);
    if max_k <= claimed {
        return Err(Error::InvalidArgument(format!("max k must exceed the claimed value {claimed}")));
    }
    let lower_bound = verify_lower_bound_with(l, guards.max_lower_bound_level)?;
    ensure_internal!(lower_bound.k == claimed, "lower-bound cycle has k = {}, expected {claimed}", lower_bound.k);
    let exact = eq_exact_symset(l)?;
    let leq = eq_leq_symset(l + 1)?;
    let graphs = graph_skeleton(l);
    let mut checks = Vec::new();
    for k in claimed + 1..=max_k {
        checks.push(upper_bound_check(&exact, l, k, guards.eq_carrier, guards)?);
        checks.push(upper_bound_check(&leq, l, k, guards.eq_carrier, guards)?);
        checks.push(upper_bound_check(&graphs, l, k, guards.graph_carrier, guards)?);
    }
    Ok(AufhebungReport {
        level: l,
        claimed_value: claimed,
        lower_bound,
        upper_bound_checks: checks,
        parameters: AufhebungParameters { max_k, guards: *guards },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cycles::cycle_stats;
    use crate::propagraph::UGraph;
    use crate::symset::{discrete_symset, eq_symset};

    fn twin_graph() -> UGraph {
        UGraph::new(
            7,
            &[(0, 1), (0, 2), (0, 3), (0, 4), (0, 6), (1, 5), (2, 5), (3, 4), (3, 5), (4, 5), (4, 6), (5, 6)],
        )
        .unwrap()
    }

    #[test]
    fn skeleton_membership_of_twin_graph() {
        let m = graph_symset();
        assert!(skeleton_membership(&m, 3, &twin_graph()).unwrap());
        assert!(!skeleton_membership(&m, 2, &twin_graph()).unwrap());
        assert!(skeleton_membership(&m, 6, &twin_graph()).unwrap());
    }

    #[test]
    fn skeletality() {
        for l in 1..=3 {
            assert!(is_l_skeletal(&eq_exact_symset(l).unwrap(), l, 6).unwrap());
            assert!(is_l_skeletal(&eq_leq_symset(l + 1).unwrap(), l, 6).unwrap());
            assert!(!is_l_skeletal(&eq_leq_symset(l + 2).unwrap(), l, 6).unwrap());
        }
        assert!(is_l_skeletal(&discrete_symset(["0", "1"]).unwrap(), 0, 5).unwrap());
        for l in 0..3 {
            let w = skeletality_witness(&graph_symset(), l, 5).unwrap().unwrap();
            assert!(mass(&graph_symset(), &w).unwrap() > l + 1);
            assert!(!skeleton_membership(&graph_symset(), l, &UGraph::complete(l + 2).unwrap()).unwrap());
        }
        assert!(is_l_skeletal(&graph_skeleton(2), 2, 5).unwrap());
    }

    #[test]
    fn census_of_eq_counts_relations() {
        let m = eq_symset();
        // Eq is 2-coskeletal, so 3-cycles correspond to relations on 4 points
        let c = cycle_census(&m, 3, 8, u64::MAX).unwrap();
        assert_eq!(c.cycles.len(), 15);
        assert!(c.cycles.iter().all(|e| e.fillers.len() == 1));
        let one = cycle_census(&m, 1, 8, u64::MAX).unwrap();
        assert_eq!(one.cycles.len(), 1);
    }

    #[test]
    fn coskeletality_examples() {
        let d = discrete_symset(["0", "1"]).unwrap();
        let r = coskeletality_check(&d, 0, 3, 8).unwrap();
        let (cycle, n) = r.failure.unwrap();
        assert_eq!((cycle.k(), n), (1, 0));
        assert!(is_l_coskeletal(&d, 1, 3, 8).unwrap());
        let eq = eq_symset();
        assert!(is_l_coskeletal(&eq, 2, 4, 8).unwrap());
        assert!(!is_l_coskeletal(&eq, 1, 4, 8).unwrap());
        assert!(matches!(is_l_coskeletal(&eq, 2, 9, 8), Err(Error::GuardExceeded(_))));
    }

    #[test]
    fn lower_bound_shapes() {
        let c1 = lower_bound_cycle(1).unwrap();
        assert_eq!(c1.k(), 2);
        assert!(c1.faces().iter().all(|c| *c == ExactPartition::Blocks(EquivRel::discrete(2).unwrap())));
        let c2 = lower_bound_cycle(2).unwrap();
        assert_eq!(c2.k(), 4);
        // c_0 lives on {1,2,3,4} and pairs 4 with 1
        assert_eq!(c2.face(0), &ExactPartition::Blocks(EquivRel::from_labels(&[0, 1, 2, 0])));
        let c3 = lower_bound_cycle(3).unwrap();
        assert_eq!(c3.k(), 5);
        assert_eq!(c3.carrier().label(3), "b1");
        assert!(lower_bound_cycle(0).is_err());
    }

    #[test]
    fn lower_bound_reduction_graphs() {
        let m1 = eq_exact_symset(1).unwrap();
        assert!(reduction_graph(&m1, &lower_bound_cycle(1).unwrap()).unwrap().edges.is_empty());
        let m2 = eq_exact_symset(2).unwrap();
        let g2 = reduction_graph(&m2, &lower_bound_cycle(2).unwrap()).unwrap();
        assert_eq!(g2.upper_edges(), vec![(0, 1), (0, 4), (1, 2), (2, 3), (3, 4)]);
        let m3 = eq_exact_symset(3).unwrap();
        let g3 = reduction_graph(&m3, &lower_bound_cycle(3).unwrap()).unwrap();
        assert_eq!(g3.upper_edges(), vec![(0, 1), (0, 2), (1, 2), (3, 4), (3, 5), (4, 5)]);
    }

    #[test]
    fn lower_bound_certificates() {
        for (l, searched) in [(1, 4), (2, 26), (3, 66)] {
            let cert = verify_lower_bound(l).unwrap();
            assert_eq!(cert.structures_searched, searched);
            assert_eq!(cert.fillers, 0);
            assert!(cert.holds());
        }
        assert!(matches!(verify_lower_bound(4), Err(Error::GuardExceeded(_))));
    }

    #[test]
    fn claimed_values_cover_all_stats() {
        assert_eq!((0..5).map(claimed_aufhebung).collect::<Vec<_>>(), vec![1, 2, 4, 5, 7]);
        for l in 1..12 {
            for k in claimed_aufhebung(l) + 1..30 {
                for n in 0..=l {
                    let star = k >= n + 3 && k + 1 > 2 * n;
                    assert!(star || (n, k) == (1, 3), "l = {l}, n = {n}, k = {k}");
                }
            }
        }
    }

    #[test]
    fn sampler_is_degenerate() {
        let m = graph_skeleton(2);
        let mut s = DegenerateSampler::new(&m, 3);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..40 {
            let f = s.sample(6, &mut rng).unwrap();
            assert!(mass(&m, &f).unwrap() <= 3);
            let c = restrict_to_cycle(&m, &f).unwrap();
            assert!(cycle_stats(&m, &c).unwrap().n <= 2);
        }
    }

    #[test]
    fn aufhebung_level_one() {
        let report = verify_aufhebung(1, 4, &Guards::default()).unwrap();
        assert_eq!(report.claimed_value, 2);
        assert!(report.passed(), "{}", report.table());
        let exact3 = &report.upper_bound_checks[0];
        assert_eq!((exact3.k, exact3.mode), (3, CheckMode::Exhaustive));
        assert!(exact3.cycles_tested > 0);
        assert!(verify_aufhebung(1, 2, &Guards::default()).is_err());
    }

    #[test]
    fn sampled_mode_kicks_in() {
        let guards = Guards { exhaustive_limit: 4, samples: 6, oracle_samples: 2, ..Guards::default() };
        let report = verify_aufhebung(1, 3, &guards).unwrap();
        assert!(report.upper_bound_checks.iter().all(|c| c.mode == CheckMode::Sampled), "{}", report.table());
        assert!(report.passed(), "{}", report.table());
    }

    #[test]
    fn graph_skeleton_codec() {
        let m = graph_skeleton(1);
        let v = m.encode(&UGraph::complete(3).unwrap());
        assert!(m.decode(&v, None).is_err());
        let ok = m.encode(&UGraph::complete_bipartite(1, 2).unwrap());
        assert!(m.decode(&ok, None).is_ok());
    }
}
