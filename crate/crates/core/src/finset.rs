//! Canonical finite sets and the functions between them.
//!
//! Every finite set is `{0, .., size-1}`. Removing a point relabels the
//! remaining elements in increasing order, so faces, images and quotients
//! are all order-canonical and "equal up to bijection" becomes plain `==`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A non-empty finite set with optional display labels.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "FinSetRepr", into = "FinSetRepr")]
pub struct FinSet {
    size: usize,
    labels: Option<Vec<String>>,
}

#[derive(Serialize, Deserialize)]
struct FinSetRepr {
    size: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
}

impl TryFrom<FinSetRepr> for FinSet {
    type Error = Error;

    fn try_from(r: FinSetRepr) -> Result<Self> {
        match r.labels {
            Some(labels) => FinSet::labeled(labels).and_then(|s| {
                if s.size == r.size {
                    Ok(s)
                } else {
                    Err(Error::DomainMismatch { expected: r.size, found: s.size })
                }
            }),
            None => FinSet::new(r.size),
        }
    }
}

impl From<FinSet> for FinSetRepr {
    fn from(s: FinSet) -> Self {
        FinSetRepr { size: s.size, labels: s.labels }
    }
}

impl FinSet {
    pub fn new(size: usize) -> Result<Self> {
        if size == 0 {
            return Err(Error::EmptyCarrier);
        }
        Ok(FinSet { size, labels: None })
    }

    pub fn labeled<S: Into<String>>(labels: impl IntoIterator<Item = S>) -> Result<Self> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(Error::EmptyCarrier);
        }
        Ok(FinSet { size: labels.len(), labels: Some(labels) })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Display name of an element; falls back to its index.
    pub fn label(&self, element: usize) -> String {
        match &self.labels {
            Some(labels) => labels[element].clone(),
            None => element.to_string(),
        }
    }

    /// The set with `element` removed, labels carried along.
    pub fn without(&self, element: usize) -> Result<FinSet> {
        check_element(self.size, element)?;
        if self.size == 1 {
            return Err(Error::CarrierTooSmall("a point has no faces".into()));
        }
        let labels = self.labels.as_ref().map(|ls| {
            ls.iter()
                .enumerate()
                .filter(|&(i, _)| i != element)
                .map(|(_, l)| l.clone())
                .collect()
        });
        Ok(FinSet { size: self.size - 1, labels })
    }
}

fn check_element(size: usize, element: usize) -> Result<()> {
    if element >= size {
        Err(Error::OutOfRange { element, size })
    } else {
        Ok(())
    }
}

/// Index of `point` inside the face that omits `removed`.
///
/// Panics if `point == removed`.
pub fn face_index(removed: usize, point: usize) -> usize {
    assert_ne!(point, removed, "a point is not an element of its own face");
    if point > removed {
        point - 1
    } else {
        point
    }
}

/// Inverse of [`face_index`]: the original point of index `i` in the face omitting `removed`.
pub fn face_point(removed: usize, i: usize) -> usize {
    if i >= removed {
        i + 1
    } else {
        i
    }
}

/// A total function between canonical finite sets.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "FinFnRepr", into = "FinFnRepr")]
pub struct FinFn {
    dom: usize,
    cod: usize,
    images: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct FinFnRepr {
    dom: usize,
    cod: usize,
    images: Vec<usize>,
}

impl TryFrom<FinFnRepr> for FinFn {
    type Error = Error;

    fn try_from(r: FinFnRepr) -> Result<Self> {
        if r.images.len() != r.dom {
            return Err(Error::DomainMismatch { expected: r.dom, found: r.images.len() });
        }
        FinFn::new(r.cod, r.images)
    }
}

impl From<FinFn> for FinFnRepr {
    fn from(f: FinFn) -> Self {
        FinFnRepr { dom: f.dom, cod: f.cod, images: f.images }
    }
}

impl fmt::Debug for FinFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FinFn[{}->{}]{:?}", self.dom, self.cod, self.images)
    }
}

impl FinFn {
    /// Builds a function `{0..images.len()} -> {0..cod}`.
    pub fn new(cod: usize, images: Vec<usize>) -> Result<Self> {
        if images.is_empty() || cod == 0 {
            return Err(Error::EmptyCarrier);
        }
        if let Some(&bad) = images.iter().find(|&&i| i >= cod) {
            return Err(Error::OutOfRange { element: bad, size: cod });
        }
        Ok(FinFn { dom: images.len(), cod, images })
    }

    pub(crate) fn from_parts_unchecked(cod: usize, images: Vec<usize>) -> Self {
        debug_assert!(images.iter().all(|&i| i < cod));
        FinFn { dom: images.len(), cod, images }
    }

    pub fn identity(size: usize) -> Result<Self> {
        FinFn::new(size, (0..size).collect())
    }

    pub fn constant(dom: usize, cod: usize, value: usize) -> Result<Self> {
        FinFn::new(cod, vec![value; dom])
    }

    pub fn dom(&self) -> usize {
        self.dom
    }

    pub fn cod(&self) -> usize {
        self.cod
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn apply(&self, a: usize) -> usize {
        self.images[a]
    }

    /// The composite `self ∘ g` (first `g`, then `self`).
    pub fn after(&self, g: &FinFn) -> Result<FinFn> {
        if g.cod != self.dom {
            return Err(Error::DomainMismatch { expected: self.dom, found: g.cod });
        }
        Ok(FinFn {
            dom: g.dom,
            cod: self.cod,
            images: g.images.iter().map(|&i| self.images[i]).collect(),
        })
    }

    pub fn is_surjective(&self) -> bool {
        let mut hit = vec![false; self.cod];
        for &i in &self.images {
            hit[i] = true;
        }
        hit.into_iter().all(|h| h)
    }

    pub fn is_injective(&self) -> bool {
        let mut hit = vec![false; self.cod];
        for &i in &self.images {
            if std::mem::replace(&mut hit[i], true) {
                return false;
            }
        }
        true
    }

    pub fn is_bijective(&self) -> bool {
        self.dom == self.cod && self.is_injective()
    }

    /// Number of distinct values.
    pub fn image_size(&self) -> usize {
        let mut hit = vec![false; self.cod];
        self.images.iter().filter(|&&i| !std::mem::replace(&mut hit[i], true)).count()
    }

    /// Splits `self` as `mono ∘ epi`, with the image numbered by first preimage.
    pub fn epi_mono_factorize(&self) -> (FinFn, FinFn) {
        let mut slot = vec![usize::MAX; self.cod];
        let mut image = Vec::new();
        let epi: Vec<usize> = self
            .images
            .iter()
            .map(|&i| {
                if slot[i] == usize::MAX {
                    slot[i] = image.len();
                    image.push(i);
                }
                slot[i]
            })
            .collect();
        let m = image.len();
        (FinFn::from_parts_unchecked(m, epi), FinFn::from_parts_unchecked(self.cod, image))
    }

    /// The kernel relation `a ~ b ⟺ f(a) = f(b)`.
    pub fn kernel(&self) -> EquivRel {
        EquivRel::from_labels(&self.images)
    }

    /// The face inclusion `A∖{a} ↪ A`.
    pub fn delta(size: usize, a: usize) -> Result<FinFn> {
        check_element(size, a)?;
        if size < 2 {
            return Err(Error::CarrierTooSmall("the face of a point does not exist".into()));
        }
        Ok(FinFn::from_parts_unchecked(size, (0..size - 1).map(|i| face_point(a, i)).collect()))
    }

    /// The retraction `A ↠ A∖{a}` of `delta(size, a)` sending `a` to `b`.
    pub fn collapse(size: usize, a: usize, b: usize) -> Result<FinFn> {
        check_element(size, a)?;
        check_element(size, b)?;
        if a == b {
            return Err(Error::InvalidArgument(format!("collapse needs distinct points, got {a} twice")));
        }
        let images = (0..size)
            .map(|i| if i == a { face_index(a, b) } else { face_index(a, i) })
            .collect();
        Ok(FinFn::from_parts_unchecked(size - 1, images))
    }

    /// The endofunction of `A` sending `a` to `b` and fixing every other point.
    ///
    /// Equal to `delta(size, a) ∘ collapse(size, a, b)`.
    pub fn merge_endo(size: usize, a: usize, b: usize) -> Result<FinFn> {
        check_element(size, a)?;
        check_element(size, b)?;
        if a == b {
            return Err(Error::InvalidArgument(format!("merge needs distinct points, got {a} twice")));
        }
        let mut images: Vec<usize> = (0..size).collect();
        images[a] = b;
        Ok(FinFn::from_parts_unchecked(size, images))
    }
}

/// An equivalence relation in canonical form: classes numbered by their least element.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EquivRel {
    class_of: Vec<usize>,
    classes: usize,
}

impl fmt::Debug for EquivRel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "EquivRel{:?}", self.classes())
    }
}

impl EquivRel {
    /// Canonicalizes an arbitrary labelling; equal labels mean related elements.
    pub fn from_labels<T: Eq + std::hash::Hash + Copy>(labels: &[T]) -> EquivRel {
        let mut seen = std::collections::HashMap::new();
        let class_of: Vec<usize> = labels
            .iter()
            .map(|l| {
                let next = seen.len();
                *seen.entry(*l).or_insert(next)
            })
            .collect();
        EquivRel { classes: seen.len(), class_of }
    }

    /// Builds the relation from explicit classes, which must partition `0..size`.
    pub fn from_classes(size: usize, classes: &[Vec<usize>]) -> Result<EquivRel> {
        if size == 0 {
            return Err(Error::EmptyCarrier);
        }
        let mut label = vec![usize::MAX; size];
        for (c, class) in classes.iter().enumerate() {
            if class.is_empty() {
                return Err(Error::InvalidArgument("empty equivalence class".into()));
            }
            for &e in class {
                check_element(size, e)?;
                if label[e] != usize::MAX {
                    return Err(Error::InvalidArgument(format!("element {e} appears in two classes")));
                }
                label[e] = c;
            }
        }
        if let Some(missing) = label.iter().position(|&l| l == usize::MAX) {
            return Err(Error::InvalidArgument(format!("element {missing} belongs to no class")));
        }
        Ok(EquivRel::from_labels(&label))
    }

    pub fn discrete(size: usize) -> Result<EquivRel> {
        if size == 0 {
            return Err(Error::EmptyCarrier);
        }
        Ok(EquivRel { class_of: (0..size).collect(), classes: size })
    }

    pub fn indiscrete(size: usize) -> Result<EquivRel> {
        if size == 0 {
            return Err(Error::EmptyCarrier);
        }
        Ok(EquivRel { class_of: vec![0; size], classes: 1 })
    }

    pub fn size(&self) -> usize {
        self.class_of.len()
    }

    pub fn num_classes(&self) -> usize {
        self.classes
    }

    pub fn class_of(&self, a: usize) -> usize {
        self.class_of[a]
    }

    pub fn class_indices(&self) -> &[usize] {
        &self.class_of
    }

    pub fn related(&self, a: usize, b: usize) -> bool {
        self.class_of[a] == self.class_of[b]
    }

    /// Size of the class containing `a`.
    pub fn class_size(&self, a: usize) -> usize {
        let c = self.class_of[a];
        self.class_of.iter().filter(|&&x| x == c).count()
    }

    /// Classes as sorted element lists, ordered by least element.
    pub fn classes(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.classes];
        for (e, &c) in self.class_of.iter().enumerate() {
            out[c].push(e);
        }
        out
    }

    /// The canonical quotient map `A ↠ A/~`.
    pub fn quotient_map(&self) -> FinFn {
        FinFn::from_parts_unchecked(self.classes, self.class_of.clone())
    }

    /// The section `A/~ → A` picking the least element of each class.
    pub fn min_section(&self) -> FinFn {
        let mut mins = vec![usize::MAX; self.classes];
        for (e, &c) in self.class_of.iter().enumerate() {
            if mins[c] == usize::MAX {
                mins[c] = e;
            }
        }
        FinFn::from_parts_unchecked(self.size(), mins)
    }

    /// Pullback along `alpha`: `a ≈ b ⟺ alpha(a) ~ alpha(b)`.
    pub fn pullback(&self, alpha: &FinFn) -> Result<EquivRel> {
        if alpha.cod() != self.size() {
            return Err(Error::DomainMismatch { expected: self.size(), found: alpha.cod() });
        }
        let labels: Vec<usize> = alpha.images().iter().map(|&i| self.class_of[i]).collect();
        Ok(EquivRel::from_labels(&labels))
    }
}

#[derive(Serialize, Deserialize)]
struct EquivRelRepr {
    size: usize,
    classes: Vec<Vec<usize>>,
}

impl Serialize for EquivRel {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        EquivRelRepr { size: self.size(), classes: self.classes() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for EquivRel {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = EquivRelRepr::deserialize(d)?;
        EquivRel::from_classes(r.size, &r.classes).map_err(serde::de::Error::custom)
    }
}

/// All functions `{0..dom} -> {0..cod}` in lexicographic order of image lists.
pub fn enumerate_functions(dom: usize, cod: usize) -> impl Iterator<Item = FinFn> {
    let mut next = if dom == 0 || cod == 0 { None } else { Some(vec![0; dom]) };
    std::iter::from_fn(move || {
        let current = next.take()?;
        let mut succ = current.clone();
        let mut i = dom;
        while i > 0 {
            i -= 1;
            succ[i] += 1;
            if succ[i] < cod {
                next = Some(succ);
                break;
            }
            succ[i] = 0;
        }
        Some(FinFn::from_parts_unchecked(cod, current))
    })
}

/// All surjections `{0..dom} ↠ {0..cod}`, lexicographic.
pub fn enumerate_surjections(dom: usize, cod: usize) -> impl Iterator<Item = FinFn> {
    enumerate_functions(dom, cod).filter(|f| f.is_surjective())
}

/// All equivalence relations on `{0..size}` as restricted growth strings, lexicographic.
pub fn enumerate_partitions(size: usize) -> impl Iterator<Item = EquivRel> {
    let mut next = if size == 0 { None } else { Some(vec![0usize; size]) };
    std::iter::from_fn(move || {
        let current = next.take()?;
        // prefix maxima decide how far each position may grow
        let mut prefix_max = vec![0usize; size];
        for i in 1..size {
            prefix_max[i] = prefix_max[i - 1].max(current[i - 1]);
        }
        let mut i = size;
        while i > 1 {
            i -= 1;
            if current[i] <= prefix_max[i] {
                let mut succ = current.clone();
                succ[i] += 1;
                for s in succ.iter_mut().skip(i + 1) {
                    *s = 0;
                }
                next = Some(succ);
                break;
            }
        }
        let classes = current.iter().copied().max().map_or(0, |m| m + 1);
        Some(EquivRel { class_of: current, classes })
    })
}
