//! Command-line interface.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use crooked_core::folang::{eval, library, parse_with_constants, ConstId, Interpretation};
use crooked_core::graph::{components, ClosedSet, MetricGraph};
use crooked_core::lattice::{FiniteLattice, DEFAULT_ELEMENT_CAP};
use crooked_core::sigma::{
    dump, fragment_with, generate, parse_dump, Budget, SigmaConfig, StageKind, DEFAULT_PER_LEVEL,
    DEFAULT_PER_STAGE_TUPLES,
};
use crooked_core::surgery::{witness_fragment, GeoInterpretation, TraceRecord};
use crooked_core::tower::{build_tower, verify_tower, weak_confluence_witness, Tower, TowerConfig};
use crooked_core::wallman::wallman_space;
use crooked_core::Error;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{exit, CliError, Result};
use crate::formats::{
    base_lattice, create_dir, read_graph, read_json, read_text, set_to_json, to_json, write_graph, write_json,
    write_text, GraphData, GraphFile, LatticeFile, NudgeRecord,
};
use crate::report::{point_set, Report};
use crate::svg::{render, Overlays};
use crate::tower_dir::{self, parse_policy, policy_name};

/// The bundled unit segment with base `a = {0}`, `b = {1}`, `c = [0, 1/2]`,
/// `d = [1/2, 1]`, `k = [0, 1]`.
pub const UNIT_SEGMENT: &str = include_str!("../data/unit-segment.json");
/// Catalog used with the bundled input.
pub const UNIT_SEGMENT_CATALOG: [&str; 1] = ["k"];

#[derive(Debug, Parser)]
#[command(name = "crooked", version, about = "Lattice model checking, Wallman spaces, sentence generation and PL continuum surgery")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Global {
    /// Largest lattice generated or extracted.
    #[arg(long, global = true, default_value_t = DEFAULT_ELEMENT_CAP, value_parser = positive)]
    pub cap: usize,
    /// Recorded in every report.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

fn positive(s: &str) -> std::result::Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be positive".into()),
        Ok(n) => Ok(n),
        Err(e) => Err(e.to_string()),
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a library sentence (by name) or a formula on a lattice file.
    LatticeCheck {
        file: PathBuf,
        /// DISJ, DISJ_LITERAL, NORM, CONN1, DIM, HI, HI_LITERAL, or formula text
        /// over the generator names.
        sentence: String,
    },
    /// Wallman space of a lattice file and the correspondence report.
    Wallman {
        file: PathBuf,
        /// Also write the report here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate the sentence dump for a lattice file or a graph file.
    SigmaGen {
        input: PathBuf,
        /// Last stage to generate.
        #[arg(long, default_value_t = 10)]
        depth: i64,
        /// Constants per level.
        #[arg(long, default_value_t = DEFAULT_PER_LEVEL)]
        budget: u32,
        /// Enumerated tuples per stage schema.
        #[arg(long, default_value_t = DEFAULT_PER_STAGE_TUPLES)]
        tuples: usize,
        /// Level-0 constants.
        #[arg(long, default_value_t = 1)]
        level0: u32,
        /// Number of catalog (connected) base constants.
        #[arg(long)]
        catalog: Option<u32>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Take the first non-trivial sentences of a dump, plus picked ones.
    SigmaFragment {
        dump: PathBuf,
        #[arg(long)]
        size: usize,
        /// `label:l`, e.g. `S5:0`; repeatable.
        #[arg(long = "pick")]
        picks: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Witness a fragment on a graph by surgery and re-verify every sentence.
    SigmaWitness {
        /// Graph file whose closed sets generate the base lattice.
        #[arg(long)]
        graph: PathBuf,
        /// Sentence dump (usually a fragment).
        #[arg(long)]
        sentences: PathBuf,
        /// Model directory.
        #[arg(long)]
        out: PathBuf,
    },
    /// Build and verify a tower.
    TowerBuild {
        /// Graph file for `X_0` and `B_0`; the bundled unit segment by default.
        #[arg(long)]
        input: Option<PathBuf>,
        /// Comma-separated catalog members.
        #[arg(long, value_delimiter = ',')]
        catalog: Option<Vec<String>>,
        #[arg(long, default_value_t = 2)]
        depth: usize,
        /// search-first or always-surgery.
        #[arg(long, default_value = "search-first")]
        policy: String,
        /// Tower directory.
        #[arg(long)]
        out: PathBuf,
    },
    /// Re-verify a tower directory.
    TowerVerify {
        dir: PathBuf,
        /// Also write the report here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Follow a member of `B_0` through a tower.
    TowerThread {
        dir: PathBuf,
        #[arg(long)]
        member: String,
        /// Thread file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Render a graph file or a tower stage as SVG.
    Render {
        /// Graph file or tower directory.
        input: PathBuf,
        /// Tower stage; the last by default.
        #[arg(long)]
        stage: Option<usize>,
        /// Comma-separated overlay sets; all named sets by default, none for `""`.
        #[arg(long, value_delimiter = ',')]
        sets: Option<Vec<String>>,
        #[arg(long)]
        out: PathBuf,
    },
}

/// The exit code and the text for standard output.
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
}

impl Outcome {
    fn verdict(ok: bool, stdout: String) -> Self {
        Outcome { code: if ok { exit::OK } else { exit::FALSE }, stdout }
    }
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    let g = &cli.global;
    match &cli.command {
        Command::LatticeCheck { file, sentence } => lattice_check(g, file, sentence),
        Command::Wallman { file, out } => wallman(g, file, out.as_deref()),
        Command::SigmaGen { input, depth, budget, tuples, level0, catalog, out } => {
            let config = SigmaConfig {
                budget: Budget { per_level: *budget, per_stage_tuples: *tuples },
                level0: *level0,
                max_stage: *depth,
                catalog: *catalog,
            };
            sigma_gen(g, input, &config, out.as_deref())
        }
        Command::SigmaFragment { dump, size, picks, out } => sigma_fragment(dump, *size, picks, out.as_deref()),
        Command::SigmaWitness { graph, sentences, out } => sigma_witness(g, graph, sentences, out),
        Command::TowerBuild { input, catalog, depth, policy, out } => {
            tower_build(g, input.as_deref(), catalog.as_deref(), *depth, policy, out)
        }
        Command::TowerVerify { dir, out } => {
            let tower = tower_dir::load(dir)?;
            let (report, ok) = tower_report(g, "tower-verify", &tower)?;
            if let Some(out) = out {
                write_text(out, &report.to_string())?;
            }
            Ok(Outcome::verdict(ok, report.to_string()))
        }
        Command::TowerThread { dir, member, out } => tower_thread(g, dir, member, out.as_deref()),
        Command::Render { input, stage, sets, out } => render_cmd(input, *stage, sets.as_deref(), out),
    }
}

fn lattice_check(g: &Global, file: &Path, sentence: &str) -> Result<Outcome> {
    let lf: LatticeFile = read_json(file)?;
    let nl = lf.build(g.cap)?;
    let names: Vec<&String> = nl.names.keys().collect();
    let formula = match library::by_name(sentence) {
        Some(f) => f,
        None => parse_with_constants(sentence, &names)?,
    };
    let interp: Interpretation = nl.names.iter().map(|(n, &i)| (ConstId::Named(n.clone()), i)).collect();
    let verdict = eval(&formula, &nl.lattice, &interp)?;
    let mut r = Report::new("lattice-check", g.seed, g.cap);
    r.section("lattice");
    r.kv("file", file.display());
    r.kv("ground", nl.lattice.ground_size());
    r.kv("elements", nl.lattice.len());
    for (n, &i) in &nl.names {
        r.kv(&format!("generator.{n}"), point_set(&nl.lattice.elements()[i]));
    }
    r.section("verdict");
    r.kv("sentence", sentence);
    r.kv("formula", &formula);
    r.kv("holds", verdict.holds);
    let kind = if verdict.holds { "witness" } else { "counterexample" };
    for (v, i) in &verdict.assignment {
        r.kv(&format!("{kind}.{v}"), point_set(&nl.lattice.elements()[*i]));
    }
    Ok(Outcome::verdict(verdict.holds, r.to_string()))
}

fn holds(name: &str, l: &FiniteLattice) -> Result<bool> {
    let f = library::by_name(name).expect("library sentence");
    Ok(eval(&f, l, &Interpretation::new())?.holds)
}

fn wallman(g: &Global, file: &Path, out: Option<&Path>) -> Result<Outcome> {
    let lf: LatticeFile = read_json(file)?;
    let nl = lf.build(g.cap)?;
    let l = &nl.lattice;
    let w = wallman_space(l);
    let mut r = Report::new("wallman", g.seed, g.cap);
    r.section("space");
    r.kv("points", w.space.points);
    for (p, &atom) in w.atoms.iter().enumerate() {
        r.kv(&format!("point.{p}"), format!("atom {}", point_set(&l.elements()[atom])));
    }
    for (n, &i) in &nl.names {
        r.kv(&format!("base.{n}"), point_set(&w.hom[i]));
    }
    for (i, s) in l.elements().iter().enumerate() {
        r.kv(&format!("hom.{}", point_set(s)), point_set(&w.hom[i]));
    }
    r.kv("closed_sets", w.space.closed.len());
    r.section("correspondence");
    let disj = holds("DISJ", l)?;
    let norm = holds("NORM", l)?;
    r.kv("homomorphism", w.is_homomorphism());
    r.kv("injective", w.is_isomorphic());
    r.kv("disjunctive", disj);
    r.kv("normal", norm);
    r.kv("hausdorff_like", w.is_hausdorff_like());
    r.kv("discrete", w.space.is_discrete());
    let relation = if w.is_isomorphic() { "isomorphic" } else { "homomorphic (not disjunctive)" };
    r.kv("relation", relation);
    if let Some(out) = out {
        write_text(out, &r.to_string())?;
    }
    Ok(Outcome { code: exit::OK, stdout: r.to_string() })
}

/// A lattice file or a graph file, told apart by the `edges` key.
fn base_from_input(input: &Path, cap: usize) -> Result<FiniteLattice> {
    let value: Value = read_json(input)?;
    let json_err = |source| CliError::Json { path: input.into(), source };
    if value.get("edges").is_some() {
        let data = serde_json::from_value::<GraphFile>(value).map_err(json_err)?.build()?;
        Ok(base_lattice(&data, cap)?.0)
    } else {
        Ok(serde_json::from_value::<LatticeFile>(value).map_err(json_err)?.build(cap)?.lattice)
    }
}

fn sigma_gen(g: &Global, input: &Path, config: &SigmaConfig, out: Option<&Path>) -> Result<Outcome> {
    let base = base_from_input(input, g.cap)?;
    let theory = generate(&base, config)?;
    let text = dump(&theory.sentences);
    let Some(out) = out else {
        return Ok(Outcome { code: exit::OK, stdout: text });
    };
    write_text(out, &text)?;
    let mut r = Report::new("sigma-gen", g.seed, g.cap);
    r.section("sigma");
    r.kv("base_elements", base.len());
    r.kv("max_stage", config.max_stage);
    r.kv("per_level", config.budget.per_level);
    r.kv("per_stage_tuples", config.budget.per_stage_tuples);
    r.kv("sentences", theory.sentences.len());
    r.kv("out", out.display());
    Ok(Outcome { code: exit::OK, stdout: r.to_string() })
}

fn parse_pick(p: &str) -> Result<(String, usize)> {
    let bad = || CliError::Usage(format!("pick {p:?} is not label:l"));
    let (label, l) = p.rsplit_once(':').ok_or_else(bad)?;
    Ok((label.to_string(), l.parse().map_err(|_| bad())?))
}

fn sigma_fragment(path: &Path, size: usize, picks: &[String], out: Option<&Path>) -> Result<Outcome> {
    let sentences = parse_dump(&read_text(path)?)?;
    let picks = picks.iter().map(|p| parse_pick(p)).collect::<Result<Vec<_>>>()?;
    let frag = fragment_with(&sentences, size, &picks);
    let text = dump(&frag.sentences);
    match out {
        Some(out) => {
            write_text(out, &text)?;
            Ok(Outcome { code: exit::OK, stdout: String::new() })
        }
        None => Ok(Outcome { code: exit::OK, stdout: text }),
    }
}

/// One surgery-trace record of a witnessed fragment.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessTraceEntry {
    pub label: String,
    pub l: usize,
    pub kind: String,
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
    pub nudges: Vec<NudgeRecord>,
    pub vertices: u32,
    pub edges: u32,
}

impl From<&TraceRecord> for WitnessTraceEntry {
    fn from(t: &TraceRecord) -> Self {
        WitnessTraceEntry {
            label: t.label.clone(),
            l: t.l,
            kind: t.kind.name().into(),
            inputs: t.inputs.iter().map(ToString::to_string).collect(),
            outputs: t.outputs.iter().map(ToString::to_string).collect(),
            nudges: t.nudges.iter().map(NudgeRecord::from).collect(),
            vertices: t.vertices,
            edges: t.edges,
        }
    }
}

fn kind_name(k: StageKind) -> &'static str {
    match k {
        StageKind::WeakConfluence => "weak_confluence",
        StageKind::Diagram => "diagram",
        StageKind::Lattice => "lattice",
        StageKind::Normal => "normal",
        StageKind::Disjunctive => "disjunctive",
        StageKind::Dim => "dim",
        StageKind::Crooked => "crooked",
    }
}

fn sigma_witness(g: &Global, graph: &Path, sentences_path: &Path, out: &Path) -> Result<Outcome> {
    let data = read_graph(graph)?;
    let sentences = parse_dump(&read_text(sentences_path)?)?;
    let (lattice, sets) = base_lattice(&data, g.cap)?;
    let interp: GeoInterpretation =
        sets.into_iter().enumerate().map(|(i, s)| (ConstId::k(-1, i as u32), s)).collect();
    let w = witness_fragment(&sentences, &data.graph, &interp)?;
    let verdicts = w.verify(&sentences, g.cap)?;
    create_dir(out)?;
    let named: BTreeMap<String, ClosedSet> = w.interp.iter().map(|(c, s)| (c.to_string(), s.clone())).collect();
    write_graph(&out.join("graph.json"), &w.graph, &named)?;
    let trace: Vec<WitnessTraceEntry> = w.trace.iter().map(WitnessTraceEntry::from).collect();
    write_json(&out.join("trace.json"), &trace)?;

    let mut r = Report::new("sigma-witness", g.seed, g.cap);
    r.section("model");
    r.kv("base_elements", lattice.len());
    r.kv("sentences", sentences.len());
    r.kv("vertices", w.graph.vertex_count());
    r.kv("edges", w.graph.edge_count());
    r.kv("constants", w.interp.len());
    r.section("steps");
    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    for t in &w.trace {
        *counts.entry(t.kind.name()).or_default() += 1;
    }
    for (k, n) in &counts {
        r.kv(k, n);
    }
    r.section("verdicts");
    for (s, ok) in sentences.iter().zip(&verdicts) {
        r.kv(&format!("{}:{} {}", s.label(), s.l, kind_name(s.kind())), ok);
    }
    let all = verdicts.iter().all(|&v| v);
    r.section("summary");
    r.kv("all_true", all);
    write_text(&out.join("report.txt"), &r.to_string())?;
    Ok(Outcome::verdict(all, r.to_string()))
}

fn tower_build(
    g: &Global,
    input: Option<&Path>,
    catalog: Option<&[String]>,
    depth: usize,
    policy: &str,
    out: &Path,
) -> Result<Outcome> {
    let (data, default_catalog): (GraphData, Vec<String>) = match input {
        Some(p) => (read_graph(p)?, Vec::new()),
        None => {
            let file: GraphFile = serde_json::from_str(UNIT_SEGMENT).expect("bundled input parses");
            (file.build()?, UNIT_SEGMENT_CATALOG.iter().map(|s| s.to_string()).collect())
        }
    };
    let catalog = catalog.map(<[String]>::to_vec).unwrap_or(default_catalog);
    let config = TowerConfig { depth, policy: parse_policy(policy)?, ..TowerConfig::default() };
    let tower = build_tower(data.graph, data.sets, catalog, config)?;
    tower_dir::save(out, &tower)?;
    let (report, ok) = tower_report(g, "tower-build", &tower)?;
    write_text(&out.join("report.txt"), &report.to_string())?;
    Ok(Outcome::verdict(ok, report.to_string()))
}

/// `B_n` holds the preimage of every member of `B_{n-1}`.
fn bases_pulled_back(tower: &Tower) -> bool {
    tower.stages.windows(2).all(|w| {
        let f = w[1].bonding.as_ref().expect("stages above 0 have bondings");
        w[0].base.iter().all(|(name, set)| {
            w[1].base.get(name) == Some(&f.preimage(&w[1].graph, &w[0].graph, set))
        })
    })
}

/// Verification report of a tower, and whether everything holds.
pub fn tower_report(g: &Global, command: &str, tower: &Tower) -> Result<(Report, bool)> {
    let v = verify_tower(tower, g.cap)?;
    let mut r = Report::new(command, g.seed, g.cap);
    r.section("tower");
    r.kv("depth", tower.depth());
    r.kv("policy", policy_name(tower.policy));
    r.kv("catalog", tower.catalog.join(","));
    for (n, st) in tower.stages.iter().enumerate() {
        let size = format!("vertices={} edges={}", st.graph.vertex_count(), st.graph.edge_count());
        let line = match &st.record {
            None => size,
            Some(rec) => format!(
                "task={} pair=({},{}) action={} monotone={} {size}",
                rec.task.name(),
                rec.pair.0,
                rec.pair.1,
                rec.action.name(),
                st.monotone
            ),
        };
        r.kv(&format!("stage.{n}"), line);
    }
    r.section("instances");
    for i in &v.instances {
        r.kv(
            &format!("stage.{}", i.stage),
            format!(
                "{} {} -> {} at_stage={} at_top={}",
                i.task.name(),
                i.tuple.join(","),
                i.witnesses.join(","),
                i.at_stage,
                i.at_top
            ),
        );
    }
    r.section("threads");
    let mut threads_ok = true;
    for name in &tower.catalog {
        let ok = match tower.stages[0].base.get(name) {
            Some(c) => match weak_confluence_witness(tower, c) {
                Ok(_) => true,
                Err(Error::Invariant(_)) => false,
                Err(e) => return Err(e.into()),
            },
            None => false,
        };
        threads_ok &= ok;
        r.kv(name, ok);
    }
    let pulled = bases_pulled_back(tower);
    r.section("checks");
    r.kv("instances", v.instances.len());
    r.kv("instances_true", v.instances.iter().filter(|i| i.at_stage && i.at_top).count());
    r.kv("conn_top", v.conn_top);
    r.kv("bondings_onto", v.bondings_onto);
    r.kv("functorial", v.functorial);
    r.kv("bases_pulled_back", pulled);
    r.kv("threads", threads_ok);
    let ok = v.all_true() && pulled && threads_ok;
    r.section("summary");
    r.kv("all_true", ok);
    Ok((r, ok))
}

/// `{ "member": name, "stages": [closed set per stage] }`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThreadFile {
    pub member: String,
    pub stages: Vec<Value>,
}

fn tower_thread(g: &Global, dir: &Path, member: &str, out: Option<&Path>) -> Result<Outcome> {
    let tower = tower_dir::load(dir)?;
    let c = tower.stages[0]
        .base
        .get(member)
        .ok_or_else(|| CliError::Usage(format!("{member} is not a member of the base")))?
        .clone();
    let mut r = Report::new("tower-thread", g.seed, g.cap);
    r.section("thread");
    r.kv("member", member);
    let thread = match weak_confluence_witness(&tower, &c) {
        Ok(t) => t,
        Err(Error::Invariant(msg)) => {
            r.kv("exists", false);
            r.kv("reason", msg);
            return Ok(Outcome::verdict(false, r.to_string()));
        }
        Err(e) => return Err(e.into()),
    };
    r.kv("exists", true);
    let trivial = thread.sets.iter().enumerate().all(|(n, s)| *s == ClosedSet::full(tower.graph(n)));
    r.kv("trivial", trivial);
    let mut ok = true;
    for (n, y) in thread.sets.iter().enumerate() {
        let gn: &MetricGraph = tower.graph(n);
        let connected = components(gn, y).len() == 1;
        let onto = match n {
            0 => true,
            _ => {
                let f = tower.stages[n].bonding.as_ref().expect("stages above 0 have bondings");
                f.image(gn, tower.graph(n - 1), y) == thread.sets[n - 1]
            }
        };
        ok &= connected && onto;
        r.kv(&format!("stage.{n}"), format!("connected={connected} onto={onto}"));
    }
    r.section("summary");
    r.kv("all_true", ok);
    if let Some(out) = out {
        let file = ThreadFile { member: member.into(), stages: thread.sets.iter().map(set_to_json).collect() };
        write_text(out, &to_json(&file))?;
    }
    Ok(Outcome::verdict(ok, r.to_string()))
}

fn render_cmd(input: &Path, stage: Option<usize>, sets: Option<&[String]>, out: &Path) -> Result<Outcome> {
    let (graph, base, circles) = if input.is_dir() {
        let tower = tower_dir::load(input)?;
        let n = stage.unwrap_or(tower.depth());
        if n > tower.depth() {
            return Err(CliError::Usage(format!("stage {n} is beyond depth {}", tower.depth())));
        }
        let st = &tower.stages[n];
        let circles = st.record.as_ref().map(|r| r.circles.clone()).unwrap_or_default();
        (st.graph.clone(), st.base.clone(), circles)
    } else {
        let data = read_graph(input)?;
        (data.graph, data.sets, Vec::new())
    };
    let chosen: Vec<(&str, &ClosedSet)> = match sets {
        None => base.iter().map(|(n, s)| (n.as_str(), s)).collect(),
        Some(names) => names
            .iter()
            .filter(|n| !n.is_empty())
            .map(|n| {
                base.get(n)
                    .map(|s| (n.as_str(), s))
                    .ok_or_else(|| CliError::Usage(format!("no closed set named {n}")))
            })
            .collect::<Result<_>>()?,
    };
    let svg = render(&graph, &Overlays { sets: chosen, circles })?;
    write_text(out, &svg)?;
    Ok(Outcome { code: exit::OK, stdout: String::new() })
}

