//! Consistency-witness constructions on metric graphs.
//!
//! [`triangle_step`] realizes a dimension witness `zeta(a,b,c;x,y,z)` by
//! blowing up the points where the barycentric map `kappa` of `(a,b,c)`
//! meets the barycenter of the triangle into circles; [`crooked_step`]
//! realizes `theta(a,b,c,d;x,y,z)` by pulling back the crooked zigzag `P`
//! along a Urysohn function and keeping the unique component that maps
//! onto the input. Both return the new graph, the bonding map onto the
//! input, and witnesses satisfying their postconditions exactly.

mod crooked;
mod fragment;
mod triangle;

pub use crooked::{crooked_step, CrookedStep};
pub use fragment::{verify_sentence, witness_fragment, FragmentWitness, StepKind, TraceRecord};
pub use triangle::{triangle_step, CircleFiber, TriangleStep};

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;
use num_traits::One;

use crate::error::{Error, Result};
use crate::folang::ConstId;
use crate::graph::{components, distance_to_set, Arrangement, ClosedSet, MetricGraph, PLMap};
use crate::rational::Q;
use crate::sigma::{Sentence, StageKind};

/// Closed-set interpretation of constants; missing constants mean `∅`.
pub type GeoInterpretation = BTreeMap<ConstId, ClosedSet>;

/// Largest `j` tried in a nudge factor `(2^j + 1) / 2^j`.
pub const MAX_NUDGE_EXPONENT: u32 = 8;

/// One attempted edge-length change.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Nudge {
    pub edge: u32,
    pub factor: Q,
    pub accepted: bool,
}

/// The common interface of the two steps.
pub trait SurgeryStep {
    fn input(&self) -> &MetricGraph;
    fn output(&self) -> &MetricGraph;
    /// Bonding map `output → input`.
    fn bonding(&self) -> &PLMap;
    fn witnesses(&self) -> &[ClosedSet; 3];
    /// Whether the bonding map is monotone.
    fn is_monotone(&self) -> bool;
}

/// Runs `build` on `g`; when it reports a degenerate configuration, retries
/// on copies of `g` with one edge stretched by `(2^j+1)/2^j`, for
/// `j = 1..=MAX_NUDGE_EXPONENT` and edges in order, until one succeeds.
/// Returns the result, the graph it was built on with its homeomorphism
/// onto `g`, and the attempts made.
pub(crate) fn with_nudges<T>(
    g: &MetricGraph,
    sets: &[&ClosedSet],
    mut build: impl FnMut(&MetricGraph, &[ClosedSet]) -> Result<T>,
) -> Result<(T, MetricGraph, PLMap, Vec<Nudge>)> {
    let owned: Vec<ClosedSet> = sets.iter().map(|s| (*s).clone()).collect();
    let first = match build(g, &owned) {
        Ok(t) => return Ok((t, g.clone(), PLMap::identity(g), Vec::new())),
        Err(Error::Degenerate(msg)) => msg,
        Err(e) => return Err(e),
    };
    let mut attempts = Vec::new();
    for j in 1..=MAX_NUDGE_EXPONENT {
        let den = Q::from_integer((1i64 << j).into());
        let factor = (&den + Q::one()) / &den;
        for e in 0..g.edge_count() {
            let (gw, h) = g.rescaled(e, &factor)?;
            let moved: Vec<ClosedSet> = owned.iter().map(|s| h.preimage(&gw, g, s)).collect();
            match build(&gw, &moved) {
                Ok(t) => {
                    attempts.push(Nudge { edge: e, factor: factor.clone(), accepted: true });
                    return Ok((t, gw, h, attempts));
                }
                Err(Error::Degenerate(_)) => {
                    attempts.push(Nudge { edge: e, factor: factor.clone(), accepted: false })
                }
                Err(err) => return Err(err),
            }
        }
    }
    Err(Error::Degenerate(format!("{first}; no single-edge nudge removes it")))
}

/// A connected closed subset of the step's output whose bonding image is
/// exactly `a`: a single point of the fiber for a point, the full preimage
/// for a monotone step, and otherwise the first component of the preimage
/// (in piece order) that maps onto `a`.
pub fn lift_connected<S: SurgeryStep + ?Sized>(step: &S, a: &ClosedSet) -> Result<ClosedSet> {
    lift_connected_along(step.output(), step.input(), step.bonding(), step.is_monotone(), a)
}

/// [`lift_connected`] for a bare map `f: x → y`.
pub fn lift_connected_along(
    x: &MetricGraph,
    y: &MetricGraph,
    f: &PLMap,
    monotone: bool,
    a: &ClosedSet,
) -> Result<ClosedSet> {
    if a.is_empty() {
        return Ok(ClosedSet::empty());
    }
    if components(y, a).len() != 1 {
        return Err(Error::Precondition("lift_connected needs a connected set".into()));
    }
    let pre = f.preimage(x, y, a);
    if a.is_single_point() {
        let p = pre
            .first_point(x)
            .ok_or_else(|| Error::Invariant("empty fiber over a point".into()))?;
        return ClosedSet::point(x, &p);
    }
    if monotone {
        return Ok(pre);
    }
    components(x, &pre)
        .into_iter()
        .find(|c| f.image(x, y, c) == *a)
        .ok_or_else(|| Error::Invariant("no component of the preimage maps onto the set".into()))
}

/// Replaces every set by its bonding preimage.
pub fn lift_all<K: Ord + Clone, S: SurgeryStep + ?Sized>(
    step: &S,
    sets: &BTreeMap<K, ClosedSet>,
) -> BTreeMap<K, ClosedSet> {
    sets.iter()
        .map(|(k, s)| (k.clone(), step.bonding().preimage(step.output(), step.input(), s)))
        .collect()
}

/// `(x, y)` with `a ∩ x = ∅`, `b ∩ y = ∅`, `x ∪ y = X`: the bisector sets
/// `x = {ρ(·,a) >= ρ(·,b)}` and `y = {ρ(·,a) <= ρ(·,b)}`.
pub fn normal_witness(g: &MetricGraph, a: &ClosedSet, b: &ClosedSet) -> Result<(ClosedSet, ClosedSet)> {
    if !a.is_disjoint(g, b) {
        return Err(Error::Precondition("normality witness needs disjoint sets".into()));
    }
    if a.is_empty() {
        return Ok((ClosedSet::full(g), ClosedSet::empty()));
    }
    if b.is_empty() {
        return Ok((ClosedSet::empty(), ClosedSet::full(g)));
    }
    let diff = distance_to_set(g, a)?.sub(&distance_to_set(g, b)?)?;
    let zero = Q::from_integer(0.into());
    Ok((diff.level_set(g, Some(&zero), None), diff.level_set(g, None, Some(&zero))))
}

/// A single point of `a ∖ b`: the representative of the first cell of the
/// arrangement of `{a, b}` that lies in `a` but not in `b`.
pub fn disjunctive_witness(g: &MetricGraph, a: &ClosedSet, b: &ClosedSet) -> Result<ClosedSet> {
    let arr = Arrangement::new(g, &[a, b]);
    let fa = arr.footprint(g, a);
    let fb = arr.footprint(g, b);
    let cell = fa
        .iter()
        .find(|c| fb.binary_search(c).is_err())
        .ok_or_else(|| Error::Precondition("disjunctivity witness needs a not below b".into()))?;
    ClosedSet::point(g, &arr.representative(*cell as usize))
}

/// Interprets the fresh constants of a lattice (meet/join), normality or
/// disjunctivity sentence without changing the space. A false hypothesis
/// makes the sentence vacuous and its constants get `∅`.
pub fn reinterpret_simple(g: &MetricGraph, interp: &mut GeoInterpretation, s: &Sentence) -> Result<()> {
    let get = |c: &ConstId| interp.get(c).cloned().unwrap_or_default();
    let t: Vec<ClosedSet> = s.tuple.iter().map(get).collect();
    let mut set = |i: usize, v: ClosedSet| {
        interp.insert(s.fresh[i].clone(), v);
    };
    match (s.kind(), s.part) {
        (StageKind::Lattice, 0) => set(0, t[0].intersect(g, &t[1])),
        (StageKind::Lattice, 1) => set(0, t[0].union(g, &t[1])),
        (StageKind::Lattice, _) => {}
        (StageKind::Normal, _) => {
            let (x, y) = if t[0].is_disjoint(g, &t[1]) {
                normal_witness(g, &t[0], &t[1])?
            } else {
                (ClosedSet::empty(), ClosedSet::empty())
            };
            set(0, x);
            set(1, y);
        }
        (StageKind::Disjunctive, _) => {
            let w = if t[0].is_subset(g, &t[1]) {
                ClosedSet::empty()
            } else {
                disjunctive_witness(g, &t[0], &t[1])?
            };
            set(0, w);
        }
        (kind, _) => {
            return Err(Error::Usage(format!("{kind:?} sentences need a surgery step")));
        }
    }
    Ok(())
}
