//! Witnessing a finite fragment of the theory by a sequence of surgeries.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use super::{
    crooked_step, lift_all, lift_connected, reinterpret_simple, triangle_step, GeoInterpretation,
    Nudge, SurgeryStep,
};
use crate::error::{Error, Result};
use crate::folang::{eval, ConstId};
use crate::graph::{components, extract_sublattice, ClosedSet, MetricGraph};
use crate::sigma::{Sentence, StageKind};

/// How a dimension or crooked sentence was witnessed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum StepKind {
    Triangle,
    Crooked,
    /// An empty hypothesis set allowed constant witnesses.
    Shortcut,
    /// The hypothesis is false; the witnesses are `∅`.
    Vacuous,
}

impl StepKind {
    pub fn name(self) -> &'static str {
        match self {
            StepKind::Triangle => "triangle",
            StepKind::Crooked => "crooked",
            StepKind::Shortcut => "shortcut",
            StepKind::Vacuous => "vacuous",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceRecord {
    pub label: String,
    pub l: usize,
    pub kind: StepKind,
    pub inputs: Vec<ConstId>,
    pub outputs: Vec<ConstId>,
    pub nudges: Vec<Nudge>,
    /// Size of the space after the step.
    pub vertices: u32,
    pub edges: u32,
}

#[derive(Debug, Clone)]
pub struct FragmentWitness {
    pub graph: MetricGraph,
    pub interp: GeoInterpretation,
    pub trace: Vec<TraceRecord>,
    /// Constants that must stay connected (weak-confluence witnesses).
    pub hats: BTreeSet<ConstId>,
}

impl FragmentWitness {
    /// Verdict of every sentence, in the given order.
    pub fn verify(&self, sentences: &[Sentence], cap: usize) -> Result<Vec<bool>> {
        sentences.iter().map(|s| verify_sentence(&self.graph, &self.interp, s, cap)).collect()
    }
}

/// Evaluates a ground sentence on the lattice of closed sets generated by
/// its constants; missing constants are `∅`. Weak-confluence sentences also
/// require their first constant to be connected in the space itself.
pub fn verify_sentence(g: &MetricGraph, interp: &GeoInterpretation, s: &Sentence, cap: usize) -> Result<bool> {
    let named: Vec<(ConstId, ClosedSet)> = s
        .formula
        .constants()
        .into_iter()
        .map(|c| {
            let set = interp.get(&c).cloned().unwrap_or_default();
            (c, set)
        })
        .collect();
    let ex = extract_sublattice(g, &named, cap)?;
    let holds = eval(&s.formula, &ex.lattice, &ex.names)?.holds;
    if s.kind() == StageKind::WeakConfluence && s.part <= 1 {
        let a = interp.get(&s.tuple[0]).cloned().unwrap_or_default();
        let connected = components(g, &a).len() <= 1;
        return Ok(holds && (s.part == 1 || connected));
    }
    Ok(holds)
}

/// Processes the sentences in `⊑` order, extending the interpretation and
/// replacing the space by surgery where a dimension or crooked witness is
/// needed. Earlier constants are lifted along each bonding map.
pub fn witness_fragment(
    sentences: &[Sentence],
    base: &MetricGraph,
    interp: &GeoInterpretation,
) -> Result<FragmentWitness> {
    if !base.is_connected() {
        return Err(Error::Precondition("the base space must be connected".into()));
    }
    let mut order: Vec<&Sentence> = sentences.iter().collect();
    order.sort_by_key(|s| s.order_key());
    let mut g = base.clone();
    let mut interp = interp.clone();
    let mut hats: BTreeSet<ConstId> = BTreeSet::new();
    let mut trace = Vec::new();
    for s in order {
        let get = |i: &GeoInterpretation, c: &ConstId| i.get(c).cloned().unwrap_or_default();
        let t: Vec<ClosedSet> = s.tuple.iter().map(|c| get(&interp, c)).collect();
        match s.kind() {
            StageKind::Diagram => {}
            StageKind::WeakConfluence => match s.part {
                0 => {
                    if components(&g, &t[1]).len() > 1 {
                        return Err(Error::Precondition(alloc::format!(
                            "catalog constant {} is not connected",
                            s.tuple[1]
                        )));
                    }
                    interp.insert(s.tuple[0].clone(), t[1].clone());
                    hats.insert(s.tuple[0].clone());
                }
                2 => {
                    interp.insert(s.tuple[0].clone(), ClosedSet::empty());
                }
                _ => {}
            },
            StageKind::Lattice | StageKind::Normal | StageKind::Disjunctive => {
                reinterpret_simple(&g, &mut interp, s)?;
            }
            StageKind::Dim => {
                let full = ClosedSet::full(&g);
                let empty = ClosedSet::empty();
                let (kind, nudges, wit) = if !t[0].intersect(&g, &t[1]).intersect(&g, &t[2]).is_empty() {
                    (StepKind::Vacuous, Vec::new(), [empty.clone(), empty.clone(), empty])
                } else if t[0].is_empty() {
                    (StepKind::Shortcut, Vec::new(), [empty, full.clone(), full])
                } else if t[1].is_empty() {
                    (StepKind::Shortcut, Vec::new(), [full.clone(), empty, full])
                } else if t[2].is_empty() {
                    (StepKind::Shortcut, Vec::new(), [full.clone(), full, empty])
                } else {
                    let step = triangle_step(&g, &t[0], &t[1], &t[2])?;
                    interp = lift_all(&step, &interp);
                    g = step.output.clone();
                    (StepKind::Triangle, step.nudges.clone(), step.witnesses.clone())
                };
                for (c, w) in s.fresh.iter().zip(wit) {
                    interp.insert(c.clone(), w);
                }
                trace.push(record(s, kind, nudges, &g));
            }
            StageKind::Crooked => {
                let full = ClosedSet::full(&g);
                let empty = ClosedSet::empty();
                let phi = t[0].is_disjoint(&g, &t[1]) && t[0].is_disjoint(&g, &t[3]) && t[1].is_disjoint(&g, &t[2]);
                let (kind, nudges, wit) = if !phi {
                    (StepKind::Vacuous, Vec::new(), [empty.clone(), empty.clone(), empty])
                } else if t[0].is_empty() {
                    (StepKind::Shortcut, Vec::new(), [empty.clone(), empty, full])
                } else if t[1].is_empty() {
                    (StepKind::Shortcut, Vec::new(), [full, empty.clone(), empty])
                } else {
                    let step = crooked_step(&g, &t[0], &t[1], &t[2], &t[3])?;
                    let mut lifted = BTreeMap::new();
                    for (c, set) in &interp {
                        let new = if hats.contains(c) {
                            lift_connected(&step, set)?
                        } else {
                            step.bonding().preimage(step.output(), step.input(), set)
                        };
                        lifted.insert(c.clone(), new);
                    }
                    interp = lifted;
                    g = step.output.clone();
                    (StepKind::Crooked, step.nudges.clone(), step.witnesses.clone())
                };
                for (c, w) in s.fresh.iter().zip(wit) {
                    interp.insert(c.clone(), w);
                }
                trace.push(record(s, kind, nudges, &g));
            }
        }
    }
    Ok(FragmentWitness { graph: g, interp, trace, hats })
}

fn record(s: &Sentence, kind: StepKind, nudges: Vec<Nudge>, g: &MetricGraph) -> TraceRecord {
    TraceRecord {
        label: s.label(),
        l: s.l,
        kind,
        inputs: s.tuple.clone(),
        outputs: s.fresh.clone(),
        nudges,
        vertices: g.vertex_count(),
        edges: g.edge_count(),
    }
}
