//! Acceptance criteria 1 to 8, one pass/fail line each.
//!
//! Lines go straight to the process's stderr so they appear even when the
//! harness captures test output.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Instant;

use crooked::formats::{base_lattice, read_graph};
use crooked::report::parse;
use crooked::svg::edge_paths;
use crooked::tower_dir;
use crooked_core::folang::library::{psi_instance, zeta_instance, DISJ, NORM};
use crooked_core::folang::{eval, eval_bruteforce, parse as parse_formula, ConstId, Formula, Interpretation, Term};
use crooked_core::graph::{extract_sublattice, ClosedSet, Edge, MetricGraph, Point};
use crooked_core::lattice::{generate_sublattice, FiniteLattice, PointSet, DEFAULT_ELEMENT_CAP};
use crooked_core::rational::{parse_q, q, qi, Q};
use crooked_core::sigma::{parse_dump, Sentence, StageKind};
use crooked_core::surgery::{crooked_step, triangle_step, SurgeryStep};
use crooked_core::tower::{search_dim_cover, search_her_indec_cover, Action, SearchLimits, Task};
use crooked_core::wallman::wallman_space;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;
use tempfile::TempDir;

const BIN: &str = env!("CARGO_BIN_EXE_crooked");
const SEED: u64 = 0x5eed_2026;

fn rng(tag: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(SEED ^ tag)
}

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn crooked(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(BIN).args(args).output().expect("binary runs");
    (
        out.status.code().expect("exit code"),
        String::from_utf8(out.stdout).expect("utf-8"),
        String::from_utf8(out.stderr).expect("utf-8"),
    )
}

fn run_ok(args: &[&str]) -> Result<String, String> {
    let (code, stdout, stderr) = crooked(args);
    ensure(code == 0, format!("`crooked {}` exited {code}: {stderr}{stdout}", args.join(" ")))?;
    Ok(stdout)
}

fn value(report: &str, section: &str, key: &str) -> Option<String> {
    parse(report).into_iter().find(|(s, k, _)| s == section && k == key).map(|(_, _, v)| v)
}

fn p(path: &Path) -> &str {
    path.to_str().expect("utf-8 path")
}

fn named(n: &str) -> ConstId {
    ConstId::Named(n.into())
}

fn t(n: &str) -> Term {
    Term::Const(named(n))
}

fn random_lattice(r: &mut ChaCha8Rng, ground: u32, max_gens: usize) -> FiniteLattice {
    let count = r.gen_range(0..=max_gens);
    let gens: Vec<PointSet> =
        (0..count).map(|_| (0..ground).filter(|_| r.gen_bool(0.5)).collect()).collect();
    generate_sublattice(ground, &gens).expect("small lattices fit the cap")
}

fn random_term(r: &mut ChaCha8Rng, depth: u32, consts: &[ConstId], scope: &[String]) -> Term {
    if depth == 0 || r.gen_bool(0.5) {
        let pick = r.gen_range(0..4);
        return match pick {
            0 => Term::Zero,
            1 => Term::One,
            2 if !scope.is_empty() => Term::var(&scope[r.gen_range(0..scope.len())]),
            _ if !consts.is_empty() => Term::Const(consts[r.gen_range(0..consts.len())].clone()),
            _ => Term::One,
        };
    }
    let (a, b) = (random_term(r, depth - 1, consts, scope), random_term(r, depth - 1, consts, scope));
    if r.gen_bool(0.5) {
        a.meet(b)
    } else {
        a.join(b)
    }
}

fn random_body(r: &mut ChaCha8Rng, depth: u32, consts: &[ConstId], scope: &mut Vec<String>, quants: &mut u32) -> Formula {
    let choice = if depth == 0 { 0 } else { r.gen_range(0..8) };
    match choice {
        0..=2 => {
            let (a, b) = (random_term(r, 2, consts, scope), random_term(r, 2, consts, scope));
            if r.gen_bool(0.5) {
                a.equals(b)
            } else {
                a.differs(b)
            }
        }
        3 => random_body(r, depth - 1, consts, scope, quants).negate(),
        4 => random_body(r, depth - 1, consts, scope, quants).and(random_body(r, depth - 1, consts, scope, quants)),
        5 => random_body(r, depth - 1, consts, scope, quants).or(random_body(r, depth - 1, consts, scope, quants)),
        6 => random_body(r, depth - 1, consts, scope, quants)
            .implies(random_body(r, depth - 1, consts, scope, quants)),
        _ if *quants == 0 => random_body(r, depth - 1, consts, scope, quants),
        _ => {
            *quants -= 1;
            let v = ["x", "y", "z"][r.gen_range(0..3)].to_string();
            scope.push(v.clone());
            let body = random_body(r, depth - 1, consts, scope, quants);
            scope.pop();
            if r.gen_bool(0.5) {
                Formula::Forall(vec![v], Box::new(body))
            } else {
                Formula::Exists(vec![v], Box::new(body))
            }
        }
    }
}

/// A closed sentence over `c0`, `c1` with at most three quantifiers.
fn random_sentence(r: &mut ChaCha8Rng) -> Formula {
    let consts = [named("c0"), named("c1")];
    let prefix = r.gen_range(1..=3u32);
    let mut quants = 3 - prefix;
    let vars: Vec<String> = ["x", "y", "z"].iter().take(prefix as usize).map(|s| s.to_string()).collect();
    let mut scope = vars.clone();
    let mut f = random_body(r, 3, &consts, &mut scope, &mut quants);
    for v in vars.into_iter().rev() {
        f = if r.gen_bool(0.5) { Formula::Forall(vec![v], Box::new(f)) } else { Formula::Exists(vec![v], Box::new(f)) };
    }
    f
}

/// A connected graph on 2..=5 vertices with lengths in `{1/2, 1, 3/2, 2}`.
fn random_graph(r: &mut ChaCha8Rng) -> MetricGraph {
    let n = r.gen_range(2..=5u32);
    let mut edges = Vec::new();
    for v in 1..n {
        edges.push(Edge { u: r.gen_range(0..v), v, len: q(r.gen_range(1..=4), 2) });
    }
    for _ in 0..r.gen_range(0..=2) {
        let (u, v) = (r.gen_range(0..n), r.gen_range(0..n));
        if u != v {
            edges.push(Edge { u, v, len: q(r.gen_range(1..=4), 2) });
        }
    }
    MetricGraph::new(n, edges).expect("valid graph")
}

/// A vertex, a quarter point, or an interval between quarter points.
fn random_set(r: &mut ChaCha8Rng, g: &MetricGraph, nonempty: bool) -> ClosedSet {
    if !nonempty && r.gen_bool(0.2) {
        return ClosedSet::empty();
    }
    if r.gen_bool(0.3) {
        return ClosedSet::point(g, &Point::Vertex(r.gen_range(0..g.vertex_count()))).expect("vertex");
    }
    let e = r.gen_range(0..g.edge_count());
    let (a, b) = (r.gen_range(0..=4i64), r.gen_range(0..=4i64));
    let len = g.len(e).clone();
    ClosedSet::from_parts(g, vec![], vec![(e, &len * q(a.min(b), 4), &len * q(a.max(b), 4))]).expect("valid set")
}

fn holds(g: &MetricGraph, f: &Formula, sets: &[(ConstId, ClosedSet)]) -> bool {
    let ex = extract_sublattice(g, sets, DEFAULT_ELEMENT_CAP).expect("small arrangement");
    eval(f, &ex.lattice, &ex.names).expect("closed formula").holds
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut r = rng(1);
    let (mut cases, mut disagreements) = (0, 0);
    while cases < 500 {
        let ground = r.gen_range(1..=5);
        let l = random_lattice(&mut r, ground, 4);
        let f = random_sentence(&mut r);
        let interp: Interpretation =
            [("c0", r.gen_range(0..l.len())), ("c1", r.gen_range(0..l.len()))].into_iter().map(|(c, i)| (named(c), i)).collect();
        let fast = eval(&f, &l, &interp).map_err(|e| e.to_string())?.holds;
        let slow = eval_bruteforce(&f, &l, &interp).map_err(|e| e.to_string())?;
        if fast != slow {
            disagreements += 1;
        }
        cases += 1;
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(disagreements == 0, format!("{disagreements} disagreements in {cases} cases"))?;
    ensure(secs < 60.0, format!("took {secs:.1}s"))?;
    Ok(format!("{cases} cases, 0 disagreements, {secs:.1}s"))
}

fn criterion_2() -> Outcome {
    let mut r = rng(2);
    let (disj, norm) = (parse_formula(DISJ).unwrap(), parse_formula(NORM).unwrap());
    let empty = Interpretation::new();
    let mut exceptions = Vec::new();
    let mut seen = BTreeMap::new();
    for i in 0..20 {
        let l = random_lattice(&mut r, 6, 5);
        let w = wallman_space(&l);
        let d = eval(&disj, &l, &empty).unwrap().holds;
        let n = eval(&norm, &l, &empty).unwrap().holds;
        *seen.entry((d, n)).or_insert(0) += 1;
        if w.is_isomorphic() != d || w.is_hausdorff_like() != n || !w.is_homomorphism() {
            exceptions.push(i);
        }
    }
    ensure(exceptions.is_empty(), format!("exceptions at lattices {exceptions:?}"))?;
    Ok(format!("20 lattices on 6 points, 0 exceptions, (DISJ, NORM) counts {seen:?}"))
}

fn ground_formulas(r: &mut ChaCha8Rng, names: &[&str], count: usize) -> Vec<Formula> {
    let consts: Vec<ConstId> = names.iter().map(|n| named(n)).collect();
    (0..count)
        .map(|_| {
            let mut scope = Vec::new();
            random_body(r, 2, &consts, &mut scope, &mut 0)
        })
        .collect()
}

/// `(instances, true-before sentences kept, fibers)`.
fn criterion_3() -> Outcome {
    let mut r = rng(3);
    let names = ["a", "b", "c", "e"];
    let (mut instances, mut kept, mut fibers, mut attempts) = (0, 0, 0, 0);
    let tripod = MetricGraph::new(4, (1..4).map(|v| Edge { u: 0, v, len: qi(1) }).collect()).unwrap();
    while instances < 12 {
        attempts += 1;
        ensure(attempts < 5000, "too few admissible instances")?;
        let (g, mut s) = if instances == 0 {
            let leaf = |v| ClosedSet::point(&tripod, &Point::Vertex(v)).unwrap();
            (tripod.clone(), vec![leaf(1), leaf(2), leaf(3)])
        } else {
            let g = random_graph(&mut r);
            let s: Vec<ClosedSet> = (0..3).map(|_| random_set(&mut r, &g, true)).collect();
            (g, s)
        };
        if !s[0].intersect(&g, &s[1]).intersect(&g, &s[2]).is_empty() {
            continue;
        }
        s.push(random_set(&mut r, &g, false));
        let step = triangle_step(&g, &s[0], &s[1], &s[2]).map_err(|e| e.to_string())?;
        let (x, f) = (&step.output, &step.bonding);
        ensure(f.monotonicity_defect(x, &g).is_none(), format!("instance {instances}: not monotone"))?;
        ensure(f.is_surjective(x, &g), format!("instance {instances}: not onto"))?;
        let lift: Vec<ClosedSet> = s.iter().map(|a| f.preimage(x, &g, a)).collect();
        let mut sets: Vec<(ConstId, ClosedSet)> =
            names.iter().zip(&lift).map(|(n, s)| (named(n), s.clone())).collect();
        for (n, w) in ["x", "y", "z"].iter().zip(&step.witnesses) {
            sets.push((named(n), w.clone()));
        }
        let zeta = zeta_instance([t("a"), t("b"), t("c")], [t("x"), t("y"), t("z")]);
        ensure(holds(x, &zeta, &sets), format!("instance {instances}: zeta false"))?;
        let before: Vec<(ConstId, ClosedSet)> = names.iter().zip(&s).map(|(n, s)| (named(n), s.clone())).collect();
        let after: Vec<(ConstId, ClosedSet)> = names.iter().zip(&lift).map(|(n, s)| (named(n), s.clone())).collect();
        for f in ground_formulas(&mut r, &names, 6) {
            if holds(&g, &f, &before) {
                ensure(holds(x, &f, &after), format!("instance {instances}: `{f}` lost"))?;
                kept += 1;
            }
        }
        fibers += step.fibers.len();
        instances += 1;
    }
    ensure(fibers > 0, "no instance inserted a circle")?;
    Ok(format!("{instances} instances monotone, onto, zeta true; {kept} true ground sentences kept; {fibers} circle fibers"))
}

/// The crooked outputs with their lifted quadruples, for criterion 7.
type CrookedOutputs = Vec<(MetricGraph, [ClosedSet; 4])>;

fn criterion_4(outputs: &mut CrookedOutputs) -> Outcome {
    let mut r = rng(4);
    let names = ["a", "b", "c", "d"];
    let (mut instances, mut attempts) = (0, 0);
    let seg = MetricGraph::unit_segment();
    while instances < 13 {
        attempts += 1;
        ensure(attempts < 5000, "too few admissible instances")?;
        let (g, s) = if instances == 0 {
            let iv = |lo: Q, hi: Q| ClosedSet::from_parts(&seg, vec![], vec![(0, lo, hi)]).unwrap();
            let pt = |v| ClosedSet::point(&seg, &Point::Vertex(v)).unwrap();
            (seg.clone(), vec![pt(0), pt(1), iv(qi(0), q(1, 2)), iv(q(1, 2), qi(1))])
        } else {
            let g = random_graph(&mut r);
            let s: Vec<ClosedSet> = (0..4).map(|i| random_set(&mut r, &g, i < 2)).collect();
            (g, s)
        };
        if !(s[0].is_disjoint(&g, &s[1]) && s[0].is_disjoint(&g, &s[3]) && s[1].is_disjoint(&g, &s[2])) {
            continue;
        }
        let step = crooked_step(&g, &s[0], &s[1], &s[2], &s[3]).map_err(|e| e.to_string())?;
        ensure(step.onto_components == 1, format!("instance {instances}: {} onto components", step.onto_components))?;
        let (x, f) = (&step.output, &step.bonding);
        ensure(f.is_surjective(x, &g), format!("instance {instances}: not onto"))?;
        let lift: Vec<ClosedSet> = s.iter().map(|a| f.preimage(x, &g, a)).collect();
        let mut sets: Vec<(ConstId, ClosedSet)> =
            names.iter().zip(&lift).map(|(n, s)| (named(n), s.clone())).collect();
        for (n, w) in ["x", "y", "z"].iter().zip(step.witnesses()) {
            sets.push((named(n), w.clone()));
        }
        let psi = psi_instance([t("a"), t("b"), t("c"), t("d")], [t("x"), t("y"), t("z")]);
        ensure(holds(x, &psi, &sets), format!("instance {instances}: psi false"))?;
        if instances == 0 {
            ensure(
                x.maximal_segments() == 5 && step.components == 1,
                format!("identity instance: {} segments, {} components", x.maximal_segments(), step.components),
            )?;
        }
        outputs.push((x.clone(), [lift[0].clone(), lift[1].clone(), lift[2].clone(), lift[3].clone()]));
        instances += 1;
    }
    Ok(format!(
        "{} instances with one onto component and psi true; identity instance has 5 segments, 1 component",
        instances
    ))
}

const SEGMENT_AB: &str = r#"{
  "vertices": [0, 1],
  "edges": [{"id": 0, "u": 0, "v": 1, "len": "1"}],
  "layout": [["0", "0"], ["1", "0"]],
  "closed_sets": {"a": {"vertices": [0]}, "b": {"vertices": [1]}}
}"#;

const TRIPOD: &str = r#"{
  "vertices": [0, 1, 2, 3],
  "edges": [
    {"id": 0, "u": 0, "v": 1, "len": "1"},
    {"id": 1, "u": 0, "v": 2, "len": "1"},
    {"id": 2, "u": 0, "v": 3, "len": "1"}
  ],
  "closed_sets": {"a": {"vertices": [1]}, "b": {"vertices": [2]}, "c": {"vertices": [3]}}
}"#;

const TUPLES: usize = 400;
const FRAGMENT_SIZE: usize = 38;

fn interpreted(sets: &[ClosedSet], c: &ConstId) -> ClosedSet {
    match c {
        ConstId::K { level: -1, ord } => sets.get(*ord as usize).cloned().unwrap_or_default(),
        _ => ClosedSet::empty(),
    }
}

/// The first dimension sentence with nonempty sets of empty intersection,
/// and the first crooked sentence whose quadruple satisfies `phi` with `a`,
/// `b` nonempty, under the base interpretation.
fn picks(g: &MetricGraph, sets: &[ClosedSet], sentences: &[Sentence]) -> Option<[String; 2]> {
    let dim = sentences.iter().find(|s| {
        let v: Vec<ClosedSet> = s.tuple.iter().map(|c| interpreted(sets, c)).collect();
        s.kind() == StageKind::Dim
            && v.iter().all(|x| !x.is_empty())
            && v[0].intersect(g, &v[1]).intersect(g, &v[2]).is_empty()
    })?;
    let hi = sentences.iter().find(|s| {
        let v: Vec<ClosedSet> = s.tuple.iter().map(|c| interpreted(sets, c)).collect();
        s.kind() == StageKind::Crooked
            && !v[0].is_empty()
            && !v[1].is_empty()
            && v[0].is_disjoint(g, &v[1])
            && v[0].is_disjoint(g, &v[3])
            && v[1].is_disjoint(g, &v[2])
    })?;
    Some([format!("{}:{}", dim.label(), dim.l), format!("{}:{}", hi.label(), hi.l)])
}

/// Runs generation, fragment extraction and witnessing for one base graph
/// into `dir`; returns the witness report.
fn sigma_pipeline(dir: &Path, graph_text: &str) -> Result<String, String> {
    fs::create_dir_all(dir).map_err(|e| e.to_string())?;
    let graph = dir.join("base.json");
    fs::write(&graph, graph_text).map_err(|e| e.to_string())?;
    let dump = dir.join("sigma.txt");
    let (tuples, budget) = (TUPLES.to_string(), (3 * TUPLES).to_string());
    run_ok(&["sigma-gen", p(&graph), "--depth", "5", "--budget", &budget, "--tuples", &tuples, "--out", p(&dump)])?;
    let sentences = parse_dump(&fs::read_to_string(&dump).unwrap()).map_err(|e| e.to_string())?;
    let data = read_graph(&graph).map_err(|e| e.to_string())?;
    let (_, sets) = base_lattice(&data, DEFAULT_ELEMENT_CAP).map_err(|e| e.to_string())?;
    let [dim, hi] = picks(&data.graph, &sets, &sentences).ok_or("no admissible dim and crooked sentences")?;
    let frag = dir.join("fragment.txt");
    let size = FRAGMENT_SIZE.to_string();
    run_ok(&["sigma-fragment", p(&dump), "--size", &size, "--pick", &dim, "--pick", &hi, "--out", p(&frag)])?;
    let n = fs::read_to_string(&frag).unwrap().lines().count();
    ensure(n <= 40, format!("fragment has {n} sentences"))?;
    run_ok(&["sigma-witness", "--graph", p(&graph), "--sentences", p(&frag), "--out", p(&dir.join("model"))])
}

fn files_under(dir: &Path) -> Vec<PathBuf> {
    let mut out = Vec::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for e in fs::read_dir(&d).unwrap() {
            let path = e.unwrap().path();
            if path.is_dir() {
                stack.push(path);
            } else {
                out.push(path);
            }
        }
    }
    out.sort();
    out
}

fn same_tree(a: &Path, b: &Path) -> Result<usize, String> {
    let (fa, fb) = (files_under(a), files_under(b));
    let rel = |root: &Path, v: &[PathBuf]| -> Vec<PathBuf> {
        v.iter().map(|p| p.strip_prefix(root).unwrap().to_path_buf()).collect()
    };
    ensure(rel(a, &fa) == rel(b, &fb), "different file sets")?;
    for (x, y) in fa.iter().zip(&fb) {
        ensure(fs::read(x).unwrap() == fs::read(y).unwrap(), format!("{} differs", x.display()))?;
    }
    Ok(fa.len())
}

fn criterion_5(root: &Path) -> Outcome {
    let mut details = Vec::new();
    for (name, text) in [("segment", SEGMENT_AB), ("tripod", TRIPOD)] {
        let (a, b) = (root.join(format!("{name}-1")), root.join(format!("{name}-2")));
        let report = sigma_pipeline(&a, text)?;
        ensure(value(&report, "summary", "all_true").as_deref() == Some("true"), format!("{name}: a sentence is false"))?;
        let trace: Value = serde_json::from_str(&fs::read_to_string(a.join("model/trace.json")).unwrap()).unwrap();
        let kinds: Vec<&str> = trace.as_array().unwrap().iter().filter_map(|t| t["kind"].as_str()).collect();
        ensure(
            kinds.contains(&"triangle") && kinds.contains(&"crooked"),
            format!("{name}: trace kinds {kinds:?} lack a real triangle or crooked step"),
        )?;
        sigma_pipeline(&b, text)?;
        let files = same_tree(&a, &b).map_err(|e| format!("{name}: rerun differs: {e}"))?;
        let count = parse(&report).iter().filter(|(s, _, _)| s == "verdicts").count();
        details.push(format!("{name}: {count} sentences true, steps {kinds:?}, {files} files identical on rerun"));
    }
    Ok(details.join("; "))
}

const CATALOG_SEGMENT: &str = r#"{
  "vertices": [0, 1],
  "edges": [{"id": 0, "u": 0, "v": 1, "len": "1"}],
  "layout": [["0", "0"], ["1", "0"]],
  "closed_sets": {
    "a": {"vertices": [0]},
    "b": {"vertices": [1]},
    "c": {"0": [["0", "1/2"]]},
    "d": {"0": [["1/2", "1"]]},
    "k": {"0": [["0", "1"]]},
    "m": {"0": [["1/4", "3/4"]]},
    "p": {"0": [["1/3", "1/3"]]}
  }
}"#;

const CATALOG: [&str; 5] = ["k", "c", "d", "m", "p"];

fn build_catalog_tower(dir: &Path) -> Result<String, String> {
    fs::create_dir_all(dir).map_err(|e| e.to_string())?;
    let input = dir.join("x0.json");
    fs::write(&input, CATALOG_SEGMENT).map_err(|e| e.to_string())?;
    let tower = dir.join("tower");
    let catalog = CATALOG.join(",");
    let report = run_ok(&["tower-build", "--input", p(&input), "--catalog", &catalog, "--depth", "6", "--out", p(&tower)])?;
    for m in CATALOG {
        let out = dir.join(format!("thread-{m}.json"));
        let r = run_ok(&["tower-thread", p(&tower), "--member", m, "--out", p(&out)])?;
        ensure(value(&r, "summary", "all_true").as_deref() == Some("true"), format!("thread for {m} fails"))?;
    }
    for n in 0..=6 {
        let out = dir.join(format!("stage-{n}.svg"));
        run_ok(&["render", p(&tower), "--stage", &n.to_string(), "--sets", "", "--out", p(&out)])?;
    }
    Ok(report)
}

fn criterion_6(root: &Path) -> Outcome {
    let start = Instant::now();
    let report = build_catalog_tower(&root.join("catalog-1"))?;
    let secs = start.elapsed().as_secs_f64();
    ensure(value(&report, "summary", "all_true").as_deref() == Some("true"), format!("verification failed:\n{report}"))?;
    let instances = value(&report, "checks", "instances").unwrap_or_default();
    ensure(secs < 300.0, format!("took {secs:.1}s"))?;
    let actions: Vec<String> = (1..=6)
        .filter_map(|n| value(&report, "tower", &format!("stage.{n}")))
        .map(|l| l.split_whitespace().find_map(|w| w.strip_prefix("action=")).unwrap_or("?").to_string())
        .collect();
    Ok(format!(
        "N=6, {instances} scheduled instances true at their stage and at the top, actions {actions:?}, \
         5 threads onto stage by stage, {secs:.1}s"
    ))
}

fn criterion_7(outputs: &CrookedOutputs, root: &Path) -> Outcome {
    let limits = SearchLimits::default();
    let mut crooked = 0;
    for (i, (g, [a, b, c, d])) in outputs.iter().enumerate() {
        let cover = search_her_indec_cover(g, a, b, c, d, limits).map_err(|e| format!("output {i}: {e}"))?;
        ensure(cover.is_some(), format!("no HI cover for crooked output {i}"))?;
        crooked += 1;
    }
    let tower = tower_dir::load(&root.join("catalog-1/tower")).map_err(|e| e.to_string())?;
    for (n, st) in tower.stages.iter().enumerate() {
        let Some(rec) = &st.record else { continue };
        if rec.task != Task::Crooked || rec.action != Action::Crooked {
            continue;
        }
        let s: Vec<&ClosedSet> = rec.tuple.iter().map(|m| &st.base[m]).collect();
        let cover = search_her_indec_cover(&st.graph, s[0], s[1], s[2], s[3], limits).map_err(|e| format!("stage {n}: {e}"))?;
        ensure(cover.is_some(), format!("no HI cover at tower stage {n}"))?;
        crooked += 1;
    }
    let mut r = rng(7);
    let (mut dims, mut attempts) = (0, 0);
    while dims < 24 {
        attempts += 1;
        ensure(attempts < 5000, "too few admissible dim instances")?;
        let g = random_graph(&mut r);
        let s: Vec<ClosedSet> = (0..3).map(|_| random_set(&mut r, &g, false)).collect();
        if !s[0].intersect(&g, &s[1]).intersect(&g, &s[2]).is_empty() {
            continue;
        }
        let cover = search_dim_cover(&g, &s[0], &s[1], &s[2], limits).map_err(|e| e.to_string())?;
        let [x, y, z] = cover.ok_or(format!("no dim cover for random instance {dims}"))?;
        let full = ClosedSet::full(&g);
        ensure(
            s[0].is_subset(&g, &x)
                && s[1].is_subset(&g, &y)
                && s[2].is_subset(&g, &z)
                && x.intersect(&g, &y).intersect(&g, &z).is_empty()
                && x.union(&g, &y).union(&g, &z) == full,
            format!("dim cover {dims} is not a cover"),
        )?;
        dims += 1;
    }
    Ok(format!("HI covers for {crooked} crooked outputs; checked dim covers for {dims} random instances"))
}

fn is_numeric_like(s: &str) -> bool {
    let body = s.strip_prefix('-').unwrap_or(s);
    body.starts_with(|c: char| c.is_ascii_digit())
}

/// Every JSON number is an integer and every numeric string an exact rational.
fn exact_json(v: &Value, path: &str, bad: &mut Vec<String>) {
    match v {
        Value::Number(n) if !(n.is_i64() || n.is_u64()) => bad.push(format!("{path}: {n}")),
        Value::String(s) if is_numeric_like(s) => {
            if s.contains(['.', 'e', 'E']) || parse_q(s).is_err() {
                bad.push(format!("{path}: {s:?}"));
            }
        }
        Value::Array(xs) => xs.iter().enumerate().for_each(|(i, x)| exact_json(x, &format!("{path}[{i}]"), bad)),
        Value::Object(m) => m.iter().for_each(|(k, x)| exact_json(x, &format!("{path}.{k}"), bad)),
        _ => {}
    }
}

/// Whether `v` holds a decimal literal such as `0.5`.
fn has_decimal(v: &str) -> bool {
    let b = v.as_bytes();
    (1..b.len().saturating_sub(1)).any(|i| b[i] == b'.' && b[i - 1].is_ascii_digit() && b[i + 1].is_ascii_digit())
}

fn criterion_8(root: &Path) -> Outcome {
    let mut bad = Vec::new();
    let mut checked = 0;
    for f in files_under(root) {
        let text = fs::read_to_string(&f).unwrap();
        let name = f.display().to_string();
        match f.extension().and_then(|e| e.to_str()) {
            Some("json") => {
                let v: Value = serde_json::from_str(&text).map_err(|e| format!("{name}: {e}"))?;
                exact_json(&v, &name, &mut bad);
            }
            Some("svg") => {
                for d in edge_paths(&text) {
                    if !d.chars().all(|c| c.is_ascii_digit() || " -ML".contains(c)) {
                        bad.push(format!("{name}: path {d}"));
                    }
                }
            }
            _ => {
                for (s, k, v) in parse(&text) {
                    if k != "version" && has_decimal(&v) {
                        bad.push(format!("{name}: [{s}] {k} = {v}"));
                    }
                }
            }
        }
        checked += 1;
    }
    ensure(bad.is_empty(), format!("inexact values: {:?}", &bad[..bad.len().min(5)]))?;
    let rerun = root.join("tower/catalog-2");
    build_catalog_tower(&rerun)?;
    let files = same_tree(&root.join("tower/catalog-1"), &rerun)?;
    Ok(format!("{checked} artifacts exact; full tower pipeline rerun bit-identical over {files} files (sigma reruns checked in criterion 5)"))
}

fn record(results: &mut Vec<(u32, &'static str, Outcome)>, id: u32, name: &'static str, f: impl FnOnce() -> Outcome) {
    let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
        let msg = e
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_default();
        Err(format!("panicked: {msg}"))
    });
    let (tag, detail) = match &outcome {
        Ok(d) => ("PASS", d),
        Err(d) => ("FAIL", d),
    };
    let line = format!("criterion {id} ({name}): {tag}: {detail}\n");
    let _ = std::io::stderr().lock().write_all(line.as_bytes());
    results.push((id, name, outcome));
}

#[test]
fn acceptance_criteria() {
    let tmp = TempDir::new().unwrap();
    let root = tmp.path();
    let mut outputs = CrookedOutputs::new();
    let mut results = Vec::new();
    record(&mut results, 1, "evaluator soundness", criterion_1);
    record(&mut results, 2, "Wallman correspondences", criterion_2);
    record(&mut results, 3, "triangle step", criterion_3);
    record(&mut results, 4, "crooked step", || criterion_4(&mut outputs));
    record(&mut results, 5, "fragment witnessing", || criterion_5(&root.join("sigma")));
    record(&mut results, 6, "tower at depth 6", || criterion_6(&root.join("tower")));
    record(&mut results, 7, "cover-search agreement", || criterion_7(&outputs, &root.join("tower")));
    record(&mut results, 8, "exactness and reruns", || criterion_8(root));
    let failed: Vec<u32> = results.iter().filter(|(_, _, o)| o.is_err()).map(|(id, _, _)| *id).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
