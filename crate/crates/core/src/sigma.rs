//! Budgeted generation of the theory over the constant registry.
//!
//! Constants `k(n,m)` live on levels `-2, -1, 0, 1, ...`; level `-1` names the
//! elements of the base lattice, level `-2` the connected witnesses of the
//! weak-confluence block. Stages `5n+1 .. 5(n+1)` enumerate pairs, triples
//! and 4-tuples over the constants of levels `<= 5n` that contain a constant
//! above level `5(n-1)`, and introduce fresh constants on the stage's own
//! level. Every enumeration is truncated at `Budget::per_stage_tuples`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt::Write as _;

use crate::error::{Error, Result};
use crate::folang::library::{conn, theta_instance, zeta_instance};
use crate::folang::{parse, ConstId, Formula, Term};
use crate::lattice::FiniteLattice;

pub const DEFAULT_PER_LEVEL: u32 = 16;
pub const DEFAULT_PER_STAGE_TUPLES: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    /// Maximum number of constants on any generated level.
    pub per_level: u32,
    /// Maximum number of enumerated tuples used by one stage schema.
    pub per_stage_tuples: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { per_level: DEFAULT_PER_LEVEL, per_stage_tuples: DEFAULT_PER_STAGE_TUPLES }
    }
}

/// Constants per level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Registry {
    levels: BTreeMap<i32, u32>,
    pub budget: Budget,
}

impl Registry {
    /// Level `-1` holds `base_size` constants, level `0` holds `level0`.
    pub fn new(base_size: u32, level0: u32, budget: Budget) -> Self {
        let mut levels = BTreeMap::new();
        levels.insert(-1, base_size);
        levels.insert(0, level0);
        Registry { levels, budget }
    }

    pub fn count(&self, level: i32) -> u32 {
        self.levels.get(&level).copied().unwrap_or(0)
    }

    pub fn contains(&self, c: &ConstId) -> bool {
        match c {
            ConstId::K { level, ord } => *ord < self.count(*level),
            ConstId::Named(_) => false,
        }
    }

    /// All constants (in `⊲` order) of levels `-1 ..= max_level`.
    pub fn constants_upto(&self, max_level: i32) -> Vec<ConstId> {
        self.levels
            .range(-1..=max_level)
            .flat_map(|(&level, &n)| (0..n).map(move |m| ConstId::k(level, m)))
            .collect()
    }

    /// All constants of every level, `⊲` order.
    pub fn all_constants(&self) -> Vec<ConstId> {
        self.levels
            .iter()
            .flat_map(|(&level, &n)| (0..n).map(move |m| ConstId::k(level, m)))
            .collect()
    }

    fn ensure(&mut self, stage: i64, l: usize, level: i32, needed: u32) -> Result<()> {
        if level >= 1 && needed > self.budget.per_level {
            return Err(Error::Resource(format!(
                "stage {stage}, l = {l}: level {level} needs {needed} constants, budget is {}",
                self.budget.per_level
            )));
        }
        let slot = self.levels.entry(level).or_insert(0);
        *slot = (*slot).max(needed);
        Ok(())
    }
}

/// The strict total order `⊲` on registry constants.
pub fn triangle_cmp(a: &ConstId, b: &ConstId) -> Ordering {
    a.cmp(b)
}

fn level_of(c: &ConstId) -> i32 {
    match c {
        ConstId::K { level, .. } => *level,
        ConstId::Named(_) => i32::MIN,
    }
}

/// Tuples of size `k` over constants of levels `<= 5n` containing a constant
/// above level `5(n-1)`: sorted subsets for `k = 2, 3`, functions with
/// repetition for `k = 4`; lexicographic in `⊲`, at most `limit` of them.
pub fn enumerate_new_tuples(
    registry: &Registry,
    n: u32,
    k: usize,
    limit: Option<usize>,
) -> Vec<Vec<ConstId>> {
    let consts = registry.constants_upto(5 * n as i32);
    let old_level = 5 * (n as i32 - 1);
    let is_new: Vec<bool> = consts.iter().map(|c| level_of(c) > old_level).collect();
    let limit = limit.unwrap_or(usize::MAX);
    let mut out = Vec::new();
    let mut idx = vec![0usize; k];
    let with_repetition = k == 4;
    if consts.is_empty() || limit == 0 || (!with_repetition && consts.len() < k) {
        return out;
    }
    if !with_repetition {
        for (i, slot) in idx.iter_mut().enumerate() {
            *slot = i;
        }
    }
    loop {
        if idx.iter().any(|&i| is_new[i]) {
            out.push(idx.iter().map(|&i| consts[i].clone()).collect());
            if out.len() == limit {
                return out;
            }
        }
        // Advance to the next tuple in lexicographic order.
        let m = consts.len();
        let mut pos = k;
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            let max_here = if with_repetition { m - 1 } else { m - k + pos };
            if idx[pos] < max_here {
                idx[pos] += 1;
                for q in pos + 1..k {
                    idx[q] = if with_repetition { 0 } else { idx[q - 1] + 1 };
                }
                break;
            }
        }
    }
}

/// What a stage guarantees.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum StageKind {
    /// Weak-confluence block over levels `-2` and `-1` (stage `-1`).
    WeakConfluence,
    /// The diagram of the base lattice (stage `0`).
    Diagram,
    /// Meets, joins and lattice-law instances (stage `5n+1`).
    Lattice,
    /// Normality witnesses (stage `5n+2`).
    Normal,
    /// Disjunctivity witnesses (stage `5n+3`).
    Disjunctive,
    /// Dimension witnesses via `zeta` (stage `5n+4`).
    Dim,
    /// Hereditary-indecomposability witnesses via `theta` (stage `5(n+1)`).
    Crooked,
}

pub fn stage_kind(stage: i64) -> StageKind {
    match stage {
        s if s < 0 => StageKind::WeakConfluence,
        0 => StageKind::Diagram,
        s => match s % 5 {
            1 => StageKind::Lattice,
            2 => StageKind::Normal,
            3 => StageKind::Disjunctive,
            4 => StageKind::Dim,
            _ => StageKind::Crooked,
        },
    }
}

/// A generated ground sentence with its provenance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sentence {
    pub stage: i64,
    pub part: u8,
    pub l: usize,
    pub formula: Formula,
    /// The enumerated tuple (hypothesis constants), in schema order.
    pub tuple: Vec<ConstId>,
    /// Fresh constants introduced as witnesses.
    pub fresh: Vec<ConstId>,
}

impl Sentence {
    pub fn kind(&self) -> StageKind {
        stage_kind(self.stage)
    }

    /// Position in the well order `⊑`: stage first, then enumeration index,
    /// then schema part.
    pub fn order_key(&self) -> (i64, usize, u8) {
        (self.stage, self.l, self.part)
    }

    /// Lattice-law instances that hold in every lattice of sets.
    pub fn is_ignorable(&self) -> bool {
        self.kind() == StageKind::Lattice && self.part >= 3
    }

    pub fn label(&self) -> String {
        stage_label(self.stage, self.part)
    }

    pub fn dump_line(&self) -> String {
        format!("{} {}: {}", self.label(), self.l, self.formula)
    }
}

fn multipart(kind: StageKind) -> bool {
    matches!(kind, StageKind::WeakConfluence | StageKind::Lattice | StageKind::Disjunctive)
}

pub fn stage_label(stage: i64, part: u8) -> String {
    let kind = stage_kind(stage);
    let head = if kind == StageKind::WeakConfluence {
        "H-1".to_string()
    } else {
        format!("S{stage}")
    };
    if multipart(kind) {
        format!("{head}.{part}")
    } else {
        head
    }
}

fn parse_label(label: &str) -> Option<(i64, u8)> {
    let (head, part) = match label.split_once('.') {
        Some((h, p)) => (h, Some(p.parse::<u8>().ok()?)),
        None => (label, None),
    };
    let stage = if head == "H-1" { -1 } else { head.strip_prefix('S')?.parse::<i64>().ok()? };
    let kind = stage_kind(stage);
    match (multipart(kind), part) {
        (true, Some(p)) => Some((stage, p)),
        (false, None) => Some((stage, 0)),
        _ => None,
    }
}

fn kterm(c: &ConstId) -> Term {
    Term::Const(c.clone())
}

fn k(level: i64, ord: usize) -> ConstId {
    ConstId::k(level as i32, ord as u32)
}

fn eq(a: Term, b: Term) -> Formula {
    a.equals(b)
}

/// Builds the sentence of `stage`/`part` for the `l`-th tuple.
fn build(stage: i64, part: u8, l: usize, tuple: &[ConstId]) -> Result<(Formula, Vec<ConstId>)> {
    let t = |i: usize| kterm(&tuple[i]);
    let arity_err = || Error::Input(format!("{}: wrong tuple arity {}", stage_label(stage, part), tuple.len()));
    let need = |n: usize| if tuple.len() == n { Ok(()) } else { Err(arity_err()) };
    Ok(match (stage_kind(stage), part) {
        (StageKind::Lattice, 0) => {
            need(2)?;
            let c = k(stage, 2 * l);
            (eq(t(0).meet(t(1)), kterm(&c)), vec![c])
        }
        (StageKind::Lattice, 1) => {
            need(2)?;
            let c = k(stage, 2 * l + 1);
            (eq(t(0).join(t(1)), kterm(&c)), vec![c])
        }
        (StageKind::Lattice, 2) => {
            need(1)?;
            (eq(t(0).join(t(0)), t(0)).and(eq(t(0).meet(t(0)), t(0))), vec![])
        }
        (StageKind::Lattice, 3) => {
            need(3)?;
            (
                eq(t(0).join(t(1).join(t(2))), t(0).join(t(1)).join(t(2)))
                    .and(eq(t(0).meet(t(1).meet(t(2))), t(0).meet(t(1)).meet(t(2)))),
                vec![],
            )
        }
        (StageKind::Lattice, 4) => {
            need(3)?;
            (eq(t(0).join(t(1).meet(t(2))), t(0).join(t(1)).meet(t(0).join(t(2)))), vec![])
        }
        (StageKind::Lattice, 5) => {
            need(2)?;
            (
                eq(t(0).join(t(0).meet(t(1))), t(0)).and(eq(t(0).meet(t(0).join(t(1))), t(0))),
                vec![],
            )
        }
        (StageKind::Lattice, 6) => {
            need(2)?;
            (
                eq(t(0).join(t(1)), Term::One)
                    .and(eq(t(0).meet(t(1)), Term::Zero))
                    .implies(eq(t(0), Term::Zero).or(eq(t(0), Term::One))),
                vec![],
            )
        }
        (StageKind::Normal, 0) => {
            need(2)?;
            let (c0, c1) = (k(stage, 2 * l), k(stage, 2 * l + 1));
            (
                eq(t(0).meet(t(1)), Term::Zero).implies(Formula::all(vec![
                    eq(t(0).meet(kterm(&c0)), Term::Zero),
                    eq(t(1).meet(kterm(&c1)), Term::Zero),
                    eq(kterm(&c0).join(kterm(&c1)), Term::One),
                ])),
                vec![c0, c1],
            )
        }
        (StageKind::Disjunctive, p @ (0 | 1)) => {
            need(2)?;
            let c = k(stage, 2 * l + p as usize);
            let w = || kterm(&c);
            (
                t(0).meet(t(1)).differs(t(0)).implies(Formula::all(vec![
                    eq(w().meet(t(0)), w()),
                    w().differs(Term::Zero),
                    eq(w().meet(t(1)), Term::Zero),
                ])),
                vec![c],
            )
        }
        (StageKind::Dim, 0) => {
            need(3)?;
            let fresh: Vec<ConstId> = (0..3).map(|i| k(stage, 3 * l + i)).collect();
            let f = zeta_instance([t(0), t(1), t(2)], [kterm(&fresh[0]), kterm(&fresh[1]), kterm(&fresh[2])]);
            (f, fresh)
        }
        (StageKind::Crooked, 0) => {
            need(4)?;
            let fresh: Vec<ConstId> = (0..3).map(|i| k(stage, 3 * l + i)).collect();
            let f = theta_instance(
                [t(0), t(1), t(2), t(3)],
                [kterm(&fresh[0]), kterm(&fresh[1]), kterm(&fresh[2])],
            );
            (f, fresh)
        }
        (StageKind::WeakConfluence, 0) => {
            need(2)?;
            (conn(t(0)).and(eq(t(0).meet(t(1)), t(0))), vec![])
        }
        (StageKind::WeakConfluence, 1) => {
            need(3)?;
            (
                conn(t(0))
                    .and(eq(t(0).meet(t(1)), t(0)))
                    .implies(eq(t(2).meet(t(1)), t(2))),
                vec![],
            )
        }
        (StageKind::WeakConfluence, 2) => {
            need(1)?;
            (eq(t(0), Term::Zero), vec![])
        }
        _ => {
            return Err(Error::Input(format!("no schema for {}", stage_label(stage, part))))
        }
    })
}

fn sentence(stage: i64, part: u8, l: usize, tuple: Vec<ConstId>) -> Result<Sentence> {
    let (formula, fresh) = build(stage, part, l, &tuple)?;
    Ok(Sentence { stage, part, l, formula, tuple, fresh })
}

/// Sentences of one stage, in `⊑` order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SentenceSet {
    pub stage: i64,
    pub sentences: Vec<Sentence>,
}

/// The diagram of `b`: bound identifications, then for every pair `i < j` of
/// element indices the meet, the join and the inequality.
pub fn diagram(b: &FiniteLattice) -> SentenceSet {
    let c = |i: usize| Term::k(-1, i as u32);
    let mut formulas = Vec::new();
    if b.is_trivial() {
        formulas.push(eq(c(0), Term::Zero).and(eq(c(0), Term::One)));
    } else {
        formulas.push(eq(c(b.bottom()), Term::Zero));
        formulas.push(eq(c(b.top()), Term::One));
    }
    for i in 0..b.len() {
        for j in i + 1..b.len() {
            formulas.push(eq(c(i).meet(c(j)), c(b.meet_idx(i, j))));
            formulas.push(eq(c(i).join(c(j)), c(b.join_idx(i, j))));
            formulas.push(c(i).differs(c(j)));
        }
    }
    let sentences = formulas
        .into_iter()
        .enumerate()
        .map(|(l, formula)| {
            let tuple = formula.constants().into_iter().collect();
            Sentence { stage: 0, part: 0, l, formula, tuple, fresh: Vec::new() }
        })
        .collect();
    SentenceSet { stage: 0, sentences }
}

/// Generates stage `stage >= 1`, allocating its fresh constants.
pub fn gen_stage(registry: &mut Registry, stage: i64) -> Result<SentenceSet> {
    if stage < 1 {
        return Err(Error::Usage(format!("gen_stage needs a stage >= 1, got {stage}")));
    }
    let n = ((stage - 1) / 5) as u32;
    let cap = Some(registry.budget.per_stage_tuples);
    let mut out = Vec::new();
    let alloc = |registry: &mut Registry, l: usize, width: usize| {
        registry.ensure(stage, l, stage as i32, (width * (l + 1)) as u32)
    };
    match stage_kind(stage) {
        StageKind::Lattice => {
            let pairs = enumerate_new_tuples(registry, n, 2, cap);
            for (l, p) in pairs.iter().enumerate() {
                alloc(registry, l, 2)?;
                out.push(sentence(stage, 0, l, p.clone())?);
                out.push(sentence(stage, 1, l, p.clone())?);
            }
            let old_level = 5 * (n as i32 - 1);
            let singles: Vec<ConstId> = registry
                .constants_upto(5 * n as i32)
                .into_iter()
                .filter(|c| level_of(c) > old_level)
                .take(registry.budget.per_stage_tuples)
                .collect();
            for (l, a) in singles.into_iter().enumerate() {
                out.push(sentence(stage, 2, l, vec![a])?);
            }
            let triples = enumerate_new_tuples(registry, n, 3, cap);
            for (l, q) in triples.iter().enumerate() {
                out.push(sentence(stage, 3, l, q.clone())?);
                out.push(sentence(stage, 4, l, q.clone())?);
            }
            for (l, p) in pairs.iter().enumerate() {
                out.push(sentence(stage, 5, l, p.clone())?);
                out.push(sentence(stage, 6, l, p.clone())?);
            }
        }
        StageKind::Normal => {
            for (l, p) in enumerate_new_tuples(registry, n, 2, cap).into_iter().enumerate() {
                alloc(registry, l, 2)?;
                out.push(sentence(stage, 0, l, vec![p[1].clone(), p[0].clone()])?);
            }
        }
        StageKind::Disjunctive => {
            for (l, p) in enumerate_new_tuples(registry, n, 2, cap).into_iter().enumerate() {
                alloc(registry, l, 2)?;
                out.push(sentence(stage, 0, l, vec![p[1].clone(), p[0].clone()])?);
                out.push(sentence(stage, 1, l, vec![p[0].clone(), p[1].clone()])?);
            }
        }
        StageKind::Dim => {
            for (l, q) in enumerate_new_tuples(registry, n, 3, cap).into_iter().enumerate() {
                alloc(registry, l, 3)?;
                out.push(sentence(stage, 0, l, q)?);
            }
        }
        StageKind::Crooked => {
            for (l, r) in enumerate_new_tuples(registry, n, 4, cap).into_iter().enumerate() {
                alloc(registry, l, 3)?;
                out.push(sentence(stage, 0, l, r)?);
            }
        }
        StageKind::Diagram | StageKind::WeakConfluence => unreachable!("stage >= 1"),
    }
    out.sort_by_key(Sentence::order_key);
    Ok(SentenceSet { stage, sentences: out })
}

/// The weak-confluence block: level `-1` constants `k(-1,α)` with `α < beta`
/// name connected sets; level `-2` gets one constant per level `-1` constant.
pub fn gen_sigma_hat_minus1(registry: &mut Registry, beta: u32) -> Result<SentenceSet> {
    let base = registry.count(-1);
    if beta > base {
        return Err(Error::Input(format!(
            "catalog size {beta} exceeds the {base} level -1 constants"
        )));
    }
    registry.levels.insert(-2, base);
    let mut out = Vec::new();
    for a in 0..beta {
        out.push(sentence(-1, 0, a as usize, vec![ConstId::k(-2, a), ConstId::k(-1, a)])?);
        for g in 0..base {
            let l = (a * base + g) as usize;
            out.push(sentence(
                -1,
                1,
                l,
                vec![ConstId::k(-2, a), ConstId::k(-1, g), ConstId::k(-1, a)],
            )?);
        }
    }
    for g in beta..base {
        out.push(sentence(-1, 2, g as usize, vec![ConstId::k(-2, g)])?);
    }
    out.sort_by_key(Sentence::order_key);
    Ok(SentenceSet { stage: -1, sentences: out })
}

/// Options for [`generate`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SigmaConfig {
    pub budget: Budget,
    /// Number of level-0 constants.
    pub level0: u32,
    /// Last stage index to generate.
    pub max_stage: i64,
    /// Number of catalog (connected) base constants; `None` omits the
    /// weak-confluence block.
    pub catalog: Option<u32>,
}

impl Default for SigmaConfig {
    fn default() -> Self {
        SigmaConfig { budget: Budget::default(), level0: 0, max_stage: 10, catalog: None }
    }
}

/// A generated theory: registry plus sentences in `⊑` order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Theory {
    pub registry: Registry,
    pub sentences: Vec<Sentence>,
}

pub fn generate(base: &FiniteLattice, config: &SigmaConfig) -> Result<Theory> {
    let mut registry = Registry::new(base.len() as u32, config.level0, config.budget);
    let mut sentences = Vec::new();
    if let Some(beta) = config.catalog {
        sentences.extend(gen_sigma_hat_minus1(&mut registry, beta)?.sentences);
    }
    sentences.extend(diagram(base).sentences);
    for stage in 1..=config.max_stage {
        sentences.extend(gen_stage(&mut registry, stage)?.sentences);
    }
    Ok(Theory { registry, sentences })
}

/// One line per sentence: `label l: formula`.
pub fn dump(sentences: &[Sentence]) -> String {
    let mut out = String::new();
    for s in sentences {
        let _ = writeln!(out, "{}", s.dump_line());
    }
    out
}

fn cst(t: &Term) -> Option<ConstId> {
    match t {
        Term::Const(c) => Some(c.clone()),
        _ => None,
    }
}

fn meet_args(t: &Term) -> Option<(&Term, &Term)> {
    match t {
        Term::Meet(a, b) => Some((a, b)),
        _ => None,
    }
}

fn join_args(t: &Term) -> Option<(&Term, &Term)> {
    match t {
        Term::Join(a, b) => Some((a, b)),
        _ => None,
    }
}

fn hypothesis(f: &Formula) -> Option<&Formula> {
    match f {
        Formula::Implies(h, _) => Some(h),
        _ => None,
    }
}

fn eq_sides(f: &Formula) -> Option<(&Term, &Term)> {
    match f {
        Formula::Eq(a, b) | Formula::Neq(a, b) => Some((a, b)),
        _ => None,
    }
}

fn conj(f: &Formula) -> Vec<&Formula> {
    match f {
        Formula::And(a, b) => {
            let mut v = conj(a);
            v.push(b);
            v
        }
        other => vec![other],
    }
}

fn first_eq(f: &Formula) -> Option<(&Term, &Term)> {
    conj(f).first().and_then(|g| eq_sides(g))
}

/// Reads back the tuple of a generated sentence from its formula.
fn extract_tuple(stage: i64, part: u8, f: &Formula) -> Option<Vec<ConstId>> {
    match (stage_kind(stage), part) {
        (StageKind::Diagram, _) => Some(f.constants().into_iter().collect()),
        (StageKind::Lattice, 0) => {
            let (a, b) = meet_args(eq_sides(f)?.0)?;
            Some(vec![cst(a)?, cst(b)?])
        }
        (StageKind::Lattice, 1) => {
            let (a, b) = join_args(eq_sides(f)?.0)?;
            Some(vec![cst(a)?, cst(b)?])
        }
        (StageKind::Lattice, 2) => Some(vec![cst(first_eq(f)?.1)?]),
        (StageKind::Lattice, 3) => {
            let (a, bc) = join_args(first_eq(f)?.0)?;
            let (b, c) = join_args(bc)?;
            Some(vec![cst(a)?, cst(b)?, cst(c)?])
        }
        (StageKind::Lattice, 4) => {
            let (a, bc) = join_args(eq_sides(f)?.0)?;
            let (b, c) = meet_args(bc)?;
            Some(vec![cst(a)?, cst(b)?, cst(c)?])
        }
        (StageKind::Lattice, 5) => {
            let (a, ab) = join_args(first_eq(f)?.0)?;
            let (_, b) = meet_args(ab)?;
            Some(vec![cst(a)?, cst(b)?])
        }
        (StageKind::Lattice, 6) => {
            let (a, b) = join_args(first_eq(hypothesis(f)?)?.0)?;
            Some(vec![cst(a)?, cst(b)?])
        }
        (StageKind::Normal | StageKind::Disjunctive, _) => {
            let (a, b) = meet_args(eq_sides(hypothesis(f)?)?.0)?;
            Some(vec![cst(a)?, cst(b)?])
        }
        (StageKind::Dim, _) => {
            let (ab, c) = meet_args(eq_sides(hypothesis(f)?)?.0)?;
            let (a, b) = meet_args(ab)?;
            Some(vec![cst(a)?, cst(b)?, cst(c)?])
        }
        (StageKind::Crooked, _) => {
            let hyps = conj(hypothesis(f)?);
            let (a, b) = meet_args(eq_sides(hyps.first()?)?.0)?;
            let (_, d) = meet_args(eq_sides(hyps.get(1)?)?.0)?;
            let (_, c) = meet_args(eq_sides(hyps.get(2)?)?.0)?;
            Some(vec![cst(a)?, cst(b)?, cst(c)?, cst(d)?])
        }
        (StageKind::WeakConfluence, 0) => {
            let parts = conj(f);
            let (h, e) = meet_args(eq_sides(parts.get(1)?)?.0)?;
            Some(vec![cst(h)?, cst(e)?])
        }
        (StageKind::WeakConfluence, 1) => {
            let parts = conj(hypothesis(f)?);
            let (h, g) = meet_args(eq_sides(parts.get(1)?)?.0)?;
            let Formula::Implies(_, concl) = f else { return None };
            let (e, _) = meet_args(eq_sides(concl)?.0)?;
            Some(vec![cst(h)?, cst(g)?, cst(e)?])
        }
        (StageKind::WeakConfluence, 2) => Some(vec![cst(eq_sides(f)?.0)?]),
        _ => None,
    }
}

/// Parses one dump line back into a sentence, checking that it is exactly
/// the sentence the generator produces for its label, index and tuple.
pub fn parse_dump_line(line: &str) -> Result<Sentence> {
    let bad = |why: &str| Error::Input(format!("bad sentence line {line:?}: {why}"));
    let (head, text) = line.split_once(':').ok_or_else(|| bad("missing `:`"))?;
    let (label, l) = head.trim().split_once(' ').ok_or_else(|| bad("missing index"))?;
    let (stage, part) = parse_label(label).ok_or_else(|| bad("unknown stage label"))?;
    let l: usize = l.trim().parse().map_err(|_| bad("index is not a number"))?;
    let formula = parse(text.trim())?;
    let tuple = extract_tuple(stage, part, &formula)
        .ok_or_else(|| bad("formula does not match the stage schema"))?;
    if stage_kind(stage) == StageKind::Diagram {
        return Ok(Sentence { stage, part, l, formula, tuple, fresh: Vec::new() });
    }
    let expected = sentence(stage, part, l, tuple)?;
    if expected.formula != formula {
        return Err(bad("formula differs from the generated schema instance"));
    }
    Ok(expected)
}

/// Parses a whole dump; blank lines and lines starting with `#` are skipped.
pub fn parse_dump(text: &str) -> Result<Vec<Sentence>> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(parse_dump_line)
        .collect()
}

/// An ordered finite fragment of the theory.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Fragment {
    pub sentences: Vec<Sentence>,
}

impl Fragment {
    /// The `⊑`-maximal sentence.
    pub fn maximal(&self) -> Option<&Sentence> {
        self.sentences.last()
    }
}

/// The later of two sentences in `⊑`.
pub fn max_in_order<'a>(a: &'a Sentence, b: &'a Sentence) -> &'a Sentence {
    if b.order_key() > a.order_key() {
        b
    } else {
        a
    }
}

/// The first `size` non-ignorable sentences in `⊑` order.
pub fn fragment(sentences: &[Sentence], size: usize) -> Fragment {
    fragment_with(sentences, size, &[])
}

/// The first `size` non-ignorable sentences plus the sentences named by
/// `(label, l)` picks, in `⊑` order.
pub fn fragment_with(sentences: &[Sentence], size: usize, picks: &[(String, usize)]) -> Fragment {
    let mut ordered: Vec<&Sentence> = sentences.iter().filter(|s| !s.is_ignorable()).collect();
    ordered.sort_by_key(|s| s.order_key());
    let mut chosen: Vec<Sentence> = ordered.iter().take(size).map(|s| (*s).clone()).collect();
    for s in &ordered[size.min(ordered.len())..] {
        if picks.iter().any(|(label, l)| *label == s.label() && *l == s.l) {
            chosen.push((*s).clone());
        }
    }
    Fragment { sentences: chosen }
}
