//! Depth-`N` inverse sequences of metric graphs.
//!
//! Stage `n >= 1` takes the pair `(k, m) = r(n)`: even stages witness the
//! `m`-th empty-intersection triple of the base `B_k` by a dimension cover
//! (an existing cover keeps the space, otherwise a triangle step), odd
//! stages witness the `m`-th quadruple of `B_k` satisfying `phi` by a
//! crooked step. Every base `B_n` holds the preimages of all of `B_{n-1}`
//! under their original names plus the new witnesses `n{n}.x`, `n{n}.y`,
//! `n{n}.z`, so a tuple scheduled from `B_k` is read off `B_{n-1}` by name.

mod cover;
mod schedule;

pub use cover::{search_dim_cover, search_her_indec_cover, SearchLimits};
pub use schedule::{cantor_pair, cantor_unpair, stage_task, triple, Schedule, Task};

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::folang::library::{conn, theta_instance, zeta_instance};
use crate::folang::{eval, ConstId, Formula, Term};
use crate::graph::{components, extract_sublattice, ClosedSet, MetricGraph, PLMap};
use crate::surgery::{crooked_step, lift_connected_along, triangle_step, Nudge};

/// Named closed sets of one stage, in name order.
pub type Base = BTreeMap<String, ClosedSet>;

/// How dimension stages look for witnesses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DimPolicy {
    /// Keep the space when a cover exists at cell granularity.
    #[default]
    SearchFirst,
    /// Always run the triangle step.
    AlwaysSurgery,
}

/// What a stage did.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Action {
    /// The schedule names no existing tuple.
    Skipped,
    /// A hypothesis is false; no witnesses are needed.
    Vacuous,
    /// Constant witnesses for an empty hypothesis set.
    Shortcut,
    /// A cover found by search on the unchanged space.
    Covered,
    Triangle,
    Crooked,
}

impl Action {
    pub fn name(self) -> &'static str {
        match self {
            Action::Skipped => "skipped",
            Action::Vacuous => "vacuous",
            Action::Shortcut => "shortcut",
            Action::Covered => "covered",
            Action::Triangle => "triangle",
            Action::Crooked => "crooked",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        [Action::Skipped, Action::Vacuous, Action::Shortcut, Action::Covered, Action::Triangle, Action::Crooked]
            .into_iter()
            .find(|a| a.name() == name)
    }

    /// Whether the bonding map is the identity.
    pub fn keeps_space(self) -> bool {
        !matches!(self, Action::Triangle | Action::Crooked)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StageRecord {
    pub task: Task,
    pub pair: (u64, u64),
    pub action: Action,
    /// Names of the scheduled tuple, if any.
    pub tuple: Vec<String>,
    /// Names of the adjoined witnesses.
    pub witnesses: Vec<String>,
    pub nudges: Vec<Nudge>,
    /// Vertices of each circle fiber inserted by a triangle step.
    pub circles: Vec<Vec<u32>>,
}

#[derive(Debug, Clone)]
pub struct Stage {
    pub graph: MetricGraph,
    /// `f_n: X_n → X_{n-1}`; absent at stage 0.
    pub bonding: Option<PLMap>,
    pub monotone: bool,
    pub base: Base,
    pub record: Option<StageRecord>,
}

#[derive(Debug, Clone)]
pub struct Tower {
    pub stages: Vec<Stage>,
    /// Connected members of `B_0` followed as threads.
    pub catalog: Vec<String>,
    pub policy: DimPolicy,
}

/// Options for [`build_tower`].
#[derive(Debug, Clone, Copy, Default)]
pub struct TowerConfig {
    pub depth: usize,
    pub policy: DimPolicy,
    pub limits: SearchLimits,
}

/// Triples of distinct names of `base`, lexicographic by name, whose sets
/// have empty intersection.
pub fn empty_triples<'a>(g: &MetricGraph, base: &'a Base) -> impl Iterator<Item = [String; 3]> + 'a {
    let names: Vec<&String> = base.keys().collect();
    let n = names.len();
    let g = g.clone();
    (0..n).flat_map(move |i| (i + 1..n).flat_map(move |j| (j + 1..n).map(move |k| [i, j, k]))).filter_map(
        move |[i, j, k]| {
            let s = |x: usize| &base[names[x]];
            s(i).intersect(&g, s(j)).intersect(&g, s(k)).is_empty().then(|| {
                [names[i].clone(), names[j].clone(), names[k].clone()]
            })
        },
    )
}

/// Quadruples of distinct names of `base`, lexicographic by name, that
/// satisfy `phi`: `a ∩ b = a ∩ d = b ∩ c = ∅`.
pub fn phi_quadruples<'a>(g: &MetricGraph, base: &'a Base) -> impl Iterator<Item = [String; 4]> + 'a {
    let names: Vec<&String> = base.keys().collect();
    let n = names.len();
    let g = g.clone();
    let tuples = (0..n).flat_map(move |i| {
        (0..n).flat_map(move |j| (0..n).flat_map(move |k| (0..n).map(move |l| [i, j, k, l])))
    });
    tuples.filter_map(move |t| {
        let distinct = (0..4).all(|x| (x + 1..4).all(|y| t[x] != t[y]));
        let s = |x: usize| &base[names[t[x]]];
        (distinct && s(0).is_disjoint(&g, s(1)) && s(0).is_disjoint(&g, s(3)) && s(1).is_disjoint(&g, s(2)))
            .then(|| t.map(|x| names[x].clone()))
    })
}

impl Tower {
    /// The depth-0 tower on `x0` with base `base`; `catalog` names members
    /// of `base` that must be nonempty and connected.
    pub fn new(x0: MetricGraph, base: Base, catalog: Vec<String>, policy: DimPolicy) -> Result<Self> {
        if !x0.is_connected() {
            return Err(Error::Precondition("the base space must be connected".into()));
        }
        for name in &catalog {
            let set = base
                .get(name)
                .ok_or_else(|| Error::Input(format!("catalog member {name} is not in the base")))?;
            if set.is_empty() || components(&x0, set).len() != 1 {
                return Err(Error::Precondition(format!("catalog member {name} is not a continuum")));
            }
        }
        let stage = Stage { graph: x0, bonding: None, monotone: true, base, record: None };
        Ok(Tower { stages: alloc::vec![stage], catalog, policy })
    }

    pub fn depth(&self) -> usize {
        self.stages.len() - 1
    }

    pub fn graph(&self, n: usize) -> &MetricGraph {
        &self.stages[n].graph
    }

    /// Appends stage `depth + 1`.
    pub fn extend(&mut self, limits: SearchLimits) -> Result<()> {
        let n = self.stages.len();
        let (task, pair) = stage_task(n as u64);
        let (k, m) = (pair.0 as usize, pair.1 as usize);
        let prev = &self.stages[n - 1];
        let g = &prev.graph;
        let source = self.stages.get(k).filter(|_| k < n);
        let tuple: Option<Vec<String>> = source.and_then(|st| match task {
            Task::Dim => empty_triples(&st.graph, &st.base).nth(m).map(|t| t.to_vec()),
            Task::Crooked => phi_quadruples(&st.graph, &st.base).nth(m).map(|t| t.to_vec()),
        });
        let mut record = StageRecord {
            task,
            pair,
            action: Action::Skipped,
            tuple: tuple.clone().unwrap_or_default(),
            witnesses: Vec::new(),
            nudges: Vec::new(),
            circles: Vec::new(),
        };
        let Some(tuple) = tuple else {
            let stage = identity_stage(prev);
            self.stages.push(Stage { record: Some(record), ..stage });
            return Ok(());
        };
        let sets: Vec<ClosedSet> = tuple.iter().map(|name| prev.base[name].clone()).collect();
        let full = ClosedSet::full(g);
        let empty = ClosedSet::empty();
        let names: Vec<String> = ["x", "y", "z"].iter().map(|w| format!("n{n}.{w}")).collect();
        let mut built: Option<(MetricGraph, PLMap, bool)> = None;
        let witnesses: [ClosedSet; 3] = match task {
            Task::Dim => {
                let [a, b, c] = [&sets[0], &sets[1], &sets[2]];
                if a.is_empty() {
                    record.action = Action::Shortcut;
                    [empty, full.clone(), full]
                } else if b.is_empty() {
                    record.action = Action::Shortcut;
                    [full.clone(), empty, full]
                } else if c.is_empty() {
                    record.action = Action::Shortcut;
                    [full.clone(), full, empty]
                } else {
                    let found = match self.policy {
                        DimPolicy::SearchFirst => match search_dim_cover(g, a, b, c, limits) {
                            Ok(found) => found,
                            Err(Error::Resource(_)) => None,
                            Err(e) => return Err(e),
                        },
                        DimPolicy::AlwaysSurgery => None,
                    };
                    match found {
                        Some(cover) => {
                            record.action = Action::Covered;
                            cover
                        }
                        None => {
                            let step = triangle_step(g, a, b, c)?;
                            record.action = Action::Triangle;
                            record.nudges = step.nudges.clone();
                            record.circles = step.fibers.iter().map(|f| f.vertices.clone()).collect();
                            built = Some((step.output.clone(), step.bonding.clone(), true));
                            step.witnesses
                        }
                    }
                }
            }
            Task::Crooked => {
                let [a, b, c, d] = [&sets[0], &sets[1], &sets[2], &sets[3]];
                if !(a.is_disjoint(g, b) && a.is_disjoint(g, d) && b.is_disjoint(g, c)) {
                    record.action = Action::Vacuous;
                    [empty.clone(), empty.clone(), empty]
                } else if a.is_empty() {
                    record.action = Action::Shortcut;
                    [empty.clone(), empty, full]
                } else if b.is_empty() {
                    record.action = Action::Shortcut;
                    [full, empty.clone(), empty]
                } else {
                    let step = crooked_step(g, a, b, c, d)?;
                    record.action = Action::Crooked;
                    record.nudges = step.nudges.clone();
                    built = Some((step.output.clone(), step.bonding.clone(), false));
                    step.witnesses
                }
            }
        };
        let mut stage = match built {
            None => identity_stage(prev),
            Some((graph, bonding, monotone)) => {
                let base = prev
                    .base
                    .iter()
                    .map(|(name, set)| (name.clone(), bonding.preimage(&graph, g, set)))
                    .collect();
                Stage { graph, bonding: Some(bonding), monotone, base, record: None }
            }
        };
        if record.action != Action::Vacuous {
            for (name, w) in names.iter().zip(witnesses) {
                stage.base.insert(name.clone(), w);
            }
            record.witnesses = names;
        }
        stage.record = Some(record);
        self.stages.push(stage);
        Ok(())
    }

    /// `f^n_m: X_n → X_m` for `m <= n`.
    pub fn composed(&self, n: usize, m: usize) -> PLMap {
        let mut map = PLMap::identity(self.graph(n));
        for j in (m + 1..=n).rev() {
            let f = self.stages[j].bonding.as_ref().expect("stages above 0 have bondings");
            map = map.then(self.graph(j), self.graph(j - 1), f);
        }
        map
    }

    /// `(f^to_from)⁻¹[set]` for a set of stage `from <= to`.
    pub fn pull(&self, from: usize, to: usize, set: &ClosedSet) -> ClosedSet {
        let mut s = set.clone();
        for j in from + 1..=to {
            let f = self.stages[j].bonding.as_ref().expect("stages above 0 have bondings");
            s = f.preimage(self.graph(j), self.graph(j - 1), &s);
        }
        s
    }

    /// `pi_n⁻¹(F)` as a symbolic element.
    pub fn limit_base(&self, n: usize, set: ClosedSet) -> Result<LimitElement> {
        if n > self.depth() {
            return Err(Error::Usage(format!("stage {n} is beyond depth {}", self.depth())));
        }
        Ok(LimitElement { stage: n, set })
    }

    /// The same element written at stage `m >= e.stage`.
    pub fn normalize(&self, e: &LimitElement, m: usize) -> LimitElement {
        LimitElement { stage: m, set: self.pull(e.stage, m, &e.set) }
    }

    pub fn limit_meet(&self, a: &LimitElement, b: &LimitElement) -> LimitElement {
        let m = a.stage.max(b.stage);
        let (x, y) = (self.normalize(a, m), self.normalize(b, m));
        LimitElement { stage: m, set: x.set.intersect(self.graph(m), &y.set) }
    }

    pub fn limit_join(&self, a: &LimitElement, b: &LimitElement) -> LimitElement {
        let m = a.stage.max(b.stage);
        let (x, y) = (self.normalize(a, m), self.normalize(b, m));
        LimitElement { stage: m, set: x.set.union(self.graph(m), &y.set) }
    }

    pub fn limit_is_top(&self, e: &LimitElement) -> bool {
        e.set == ClosedSet::full(self.graph(e.stage))
    }

    /// Equality of limit-base elements, compared at the deeper stage.
    pub fn limit_eq(&self, a: &LimitElement, b: &LimitElement) -> bool {
        let m = a.stage.max(b.stage);
        self.normalize(a, m).set == self.normalize(b, m).set
    }
}

fn identity_stage(prev: &Stage) -> Stage {
    Stage {
        graph: prev.graph.clone(),
        bonding: Some(PLMap::identity(&prev.graph)),
        monotone: true,
        base: prev.base.clone(),
        record: None,
    }
}

/// `pi_stage⁻¹(set)` in the limit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LimitElement {
    pub stage: usize,
    pub set: ClosedSet,
}

/// Builds a tower of the given depth.
pub fn build_tower(x0: MetricGraph, base: Base, catalog: Vec<String>, config: TowerConfig) -> Result<Tower> {
    let mut tower = Tower::new(x0, base, catalog, config.policy)?;
    for _ in 0..config.depth {
        tower.extend(config.limits)?;
    }
    Ok(tower)
}

/// A compatible sequence of continua `Y_0, ..., Y_N` with `f_n[Y_n] = Y_{n-1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Thread {
    pub sets: Vec<ClosedSet>,
}

/// Lifts a continuum of `X_0` through every stage: by full preimage at
/// monotone stages and by an onto component at crooked stages.
pub fn weak_confluence_witness(tower: &Tower, c: &ClosedSet) -> Result<Thread> {
    if c.is_empty() {
        return Err(Error::Precondition("a thread needs a nonempty set".into()));
    }
    let mut sets = alloc::vec![c.clone()];
    for n in 1..tower.stages.len() {
        let st = &tower.stages[n];
        let f = st.bonding.as_ref().expect("stages above 0 have bondings");
        let prev = tower.graph(n - 1);
        let y = lift_connected_along(&st.graph, prev, f, st.monotone, &sets[n - 1])?;
        if f.image(&st.graph, prev, &y) != sets[n - 1] || components(&st.graph, &y).len() != 1 {
            return Err(Error::Invariant(format!("thread breaks at stage {n}")));
        }
        sets.push(y);
    }
    Ok(Thread { sets })
}

/// Verdict for one scheduled instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstanceVerdict {
    pub stage: usize,
    pub task: Task,
    pub action: Action,
    pub tuple: Vec<String>,
    pub witnesses: Vec<String>,
    /// The instance on the sublattice of stage `stage`.
    pub at_stage: bool,
    /// The lifted instance on the sublattice of the last stage.
    pub at_top: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TowerReport {
    pub instances: Vec<InstanceVerdict>,
    /// The last space is connected and `conn(1)` holds on every instance
    /// sublattice there.
    pub conn_top: bool,
    pub bondings_onto: bool,
    /// `f^n_m ∘ f^k_n = f^k_m` on all vertices.
    pub functorial: bool,
}

impl TowerReport {
    pub fn all_true(&self) -> bool {
        self.conn_top
            && self.bondings_onto
            && self.functorial
            && self.instances.iter().all(|v| v.at_stage && v.at_top)
    }
}

fn instance_formula(task: Task, names: &[String]) -> Formula {
    let t = |s: &String| Term::Const(ConstId::Named(s.clone()));
    match task {
        Task::Dim => zeta_instance([t(&names[0]), t(&names[1]), t(&names[2])], [t(&names[3]), t(&names[4]), t(&names[5])]),
        Task::Crooked => theta_instance(
            [t(&names[0]), t(&names[1]), t(&names[2]), t(&names[3])],
            [t(&names[4]), t(&names[5]), t(&names[6])],
        ),
    }
}

fn eval_on(g: &MetricGraph, base: &Base, over: &Formula, f: &Formula, cap: usize) -> Result<bool> {
    let named: Vec<(ConstId, ClosedSet)> = over
        .constants()
        .into_iter()
        .map(|c| {
            let set = match &c {
                ConstId::Named(n) => base.get(n).cloned().unwrap_or_default(),
                ConstId::K { .. } => ClosedSet::empty(),
            };
            (c, set)
        })
        .collect();
    let ex = extract_sublattice(g, &named, cap)?;
    Ok(eval(f, &ex.lattice, &ex.names)?.holds)
}

/// Re-evaluates every scheduled instance on extracted sublattices, and
/// checks surjectivity and functoriality of the bonding maps.
pub fn verify_tower(tower: &Tower, cap: usize) -> Result<TowerReport> {
    let top = tower.depth();
    let gt = tower.graph(top);
    let bt = &tower.stages[top].base;
    let one = conn(Term::One);
    let mut conn_top = gt.is_connected();
    let mut instances = Vec::new();
    for (n, st) in tower.stages.iter().enumerate().skip(1) {
        let rec = st.record.as_ref().expect("stages above 0 have records");
        if matches!(rec.action, Action::Skipped | Action::Vacuous) {
            continue;
        }
        let names: Vec<String> = rec.tuple.iter().chain(&rec.witnesses).cloned().collect();
        let f = instance_formula(rec.task, &names);
        let at_stage = eval_on(&st.graph, &st.base, &f, &f, cap)?;
        let at_top = eval_on(gt, bt, &f, &f, cap)?;
        conn_top &= eval_on(gt, bt, &f, &one, cap)?;
        instances.push(InstanceVerdict {
            stage: n,
            task: rec.task,
            action: rec.action,
            tuple: rec.tuple.clone(),
            witnesses: rec.witnesses.clone(),
            at_stage,
            at_top,
        });
    }
    let bondings_onto = tower.stages.iter().enumerate().skip(1).all(|(n, st)| {
        st.bonding.as_ref().is_some_and(|f| f.is_surjective(&st.graph, tower.graph(n - 1)))
    });
    let mut functorial = true;
    for k in 0..=top {
        for n in 0..=k {
            for m in 0..=n {
                let direct = tower.composed(k, m);
                let stepwise = tower.composed(k, n).then(tower.graph(n), tower.graph(m), &tower.composed(n, m));
                let gk = tower.graph(k);
                functorial &= (0..gk.vertex_count()).all(|v| {
                    let p = crate::graph::Point::Vertex(v);
                    direct.image_point(gk, tower.graph(m), &p) == stepwise.image_point(gk, tower.graph(m), &p)
                });
            }
        }
    }
    Ok(TowerReport { instances, conn_top, bondings_onto, functorial })
}
