//! EZ-decompositions.
//!
//! Every structure `x` on `A` factors as `x = y·π` with `π: A ↠ B` surjective
//! and `y` non-degenerate; `π` is unique up to a bijection of `B`. Its kernel
//! is the EZ-congruence `~x` and `|B|` is the mass of `x`.
//!
//! The congruence is computed pointwise: `a ~x b` iff pulling `x` back along
//! the endofunction that sends `a` to `b` (and fixes everything else) gives
//! `x` again. If `a ~x b` the endofunction does not change `π`, so `x` is
//! fixed; conversely a fixed `x` factors through `A∖{a}` along a map that
//! identifies `a` and `b`.

use serde_json::{json, Value};

use crate::error::{ensure_internal, Error, Result};
use crate::finset::{face_point, EquivRel, FinFn};
use crate::symset::{StructureCodec, SymSet};

/// `x = quotient_structure · quotient_map` with a non-degenerate quotient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EzDecomposition<X> {
    pub congruence: EquivRel,
    pub quotient_map: FinFn,
    pub quotient_structure: X,
}

impl<X> EzDecomposition<X> {
    pub fn mass(&self) -> usize {
        self.congruence.num_classes()
    }

    pub fn to_json<M>(&self, m: &M) -> Value
    where
        M: StructureCodec<Structure = X>,
    {
        json!({
            "classes": self.congruence.classes(),
            "mass": self.mass(),
            "quotient": m.encode(&self.quotient_structure),
        })
    }
}

/// The face `x·δ^p` on the carrier with `p` removed.
pub fn face<M: SymSet>(m: &M, x: &M::Structure, p: usize) -> Result<M::Structure> {
    let delta = FinFn::delta(m.carrier(x), p)?;
    Ok(m.pullback(x, &delta))
}

/// The EZ-congruence of `x`, with its equivalence-relation axioms checked.
pub fn ez_congruence<M: SymSet>(m: &M, x: &M::Structure) -> Result<EquivRel> {
    let n = m.carrier(x);
    let mut rel = vec![vec![false; n]; n];
    for a in 0..n {
        rel[a][a] = true;
        for b in 0..n {
            if a != b {
                let endo = FinFn::merge_endo(n, a, b)?;
                rel[a][b] = m.pullback(x, &endo) == *x;
            }
        }
    }
    for a in 0..n {
        for b in 0..a {
            ensure_internal!(
                rel[a][b] == rel[b][a],
                "merge test is not symmetric on ({a}, {b}) for {:?} in {}",
                x,
                m.name()
            );
        }
    }
    for a in 0..n {
        for b in 0..n {
            if !rel[a][b] {
                continue;
            }
            for c in 0..n {
                ensure_internal!(
                    !rel[b][c] || rel[a][c],
                    "merge test is not transitive on ({a}, {b}, {c}) for {:?} in {}",
                    x,
                    m.name()
                );
            }
        }
    }
    let labels: Vec<usize> = (0..n).map(|a| (0..n).find(|&b| rel[a][b]).expect("reflexive")).collect();
    Ok(EquivRel::from_labels(&labels))
}

pub fn mass<M: SymSet>(m: &M, x: &M::Structure) -> Result<usize> {
    Ok(ez_congruence(m, x)?.num_classes())
}

/// The canonical EZ-decomposition; the quotient is read off at class minima.
pub fn ez_decompose<M: SymSet>(m: &M, x: &M::Structure) -> Result<EzDecomposition<M::Structure>> {
    let congruence = ez_congruence(m, x)?;
    let quotient_map = congruence.quotient_map();
    let quotient_structure = m.pullback(x, &congruence.min_section());
    ensure_internal!(
        m.pullback(&quotient_structure, &quotient_map) == *x,
        "quotient {:?} does not pull back to {:?} in {}",
        quotient_structure,
        x,
        m.name()
    );
    Ok(EzDecomposition { congruence, quotient_map, quotient_structure })
}

pub fn is_degenerate<M: SymSet>(m: &M, x: &M::Structure) -> Result<bool> {
    Ok(mass(m, x)? < m.carrier(x))
}

fn check_point(size: usize, a: usize) -> Result<()> {
    if size < 2 {
        return Err(Error::CarrierTooSmall("reduction needs at least two points".into()));
    }
    if a >= size {
        return Err(Error::OutOfRange { element: a, size });
    }
    Ok(())
}

/// Whether removing `a` keeps the mass, i.e. `a` shares its class with another point.
pub fn reduces<M: SymSet>(m: &M, x: &M::Structure, a: usize) -> Result<bool> {
    check_point(m.carrier(x), a)?;
    Ok(ez_congruence(m, x)?.class_size(a) >= 2)
}

/// Extends the EZ-decomposition of the face `x·δ^a` to one of `x`.
///
/// Returns the unique surjection `β: A ↠ B` with `β∘δ^a = α` and
/// `y·β = x`, where `(α, y)` is `face_decomposition`.
pub fn decomposition_lifting<M: SymSet>(
    m: &M,
    x: &M::Structure,
    a: usize,
    face_decomposition: &EzDecomposition<M::Structure>,
) -> Result<FinFn> {
    let n = m.carrier(x);
    check_point(n, a)?;
    let alpha = &face_decomposition.quotient_map;
    if alpha.dom() != n - 1 {
        return Err(Error::DomainMismatch { expected: n - 1, found: alpha.dom() });
    }
    let whole = ez_decompose(m, x)?;
    if whole.congruence.class_size(a) < 2 {
        return Err(Error::Precondition(format!("point {a} does not reduce {x:?}")));
    }
    let gamma = &whole.quotient_map;
    let target = alpha.cod();
    ensure_internal!(
        whole.mass() == target,
        "face of mass {target} after removing reducing point {a} from a structure of mass {}",
        whole.mass()
    );
    // σ with σ∘γ∘δ^a = α, read off one preimage at a time
    let mut sigma = vec![usize::MAX; whole.mass()];
    for i in 0..n - 1 {
        let c = gamma.apply(face_point(a, i));
        let target_class = alpha.apply(i);
        ensure_internal!(
            sigma[c] == usize::MAX || sigma[c] == target_class,
            "face decomposition does not factor through the EZ-congruence"
        );
        sigma[c] = target_class;
    }
    ensure_internal!(sigma.iter().all(|&s| s != usize::MAX), "γ∘δ^{a} is not surjective");
    let sigma = FinFn::new(target, sigma)?;
    ensure_internal!(sigma.is_bijective(), "comparison map between EZ-decompositions is not a bijection");
    let beta = sigma.after(gamma)?;
    ensure_internal!(beta.after(&FinFn::delta(n, a)?)? == *alpha, "lifted map does not extend α");
    ensure_internal!(
        m.pullback(&face_decomposition.quotient_structure, &beta) == *x,
        "lifted map does not decompose {:?}",
        x
    );
    Ok(beta)
}

/// Whether the hypotheses of two-point equality lifting hold for `x`, `y` at `a`, `b`.
///
/// When this returns true the theory forces `x == y`; callers use it as an oracle.
pub fn equality_lifting_two_points_check<M: SymSet>(
    m: &M,
    x: &M::Structure,
    y: &M::Structure,
    a: usize,
    b: usize,
) -> Result<bool> {
    if a == b {
        return Err(Error::InvalidArgument(format!("two distinct points required, got {a} twice")));
    }
    let n = m.carrier(x);
    if m.carrier(y) != n {
        return Err(Error::DomainMismatch { expected: n, found: m.carrier(y) });
    }
    let cx = ez_congruence(m, x)?;
    let cy = ez_congruence(m, y)?;
    check_point(n, a)?;
    check_point(n, b)?;
    let all_reduce = [a, b].iter().all(|&p| cx.class_size(p) >= 2 && cy.class_size(p) >= 2);
    Ok(all_reduce && face(m, x, a)? == face(m, y, a)? && face(m, x, b)? == face(m, y, b)?)
}
