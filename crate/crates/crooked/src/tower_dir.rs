//! Tower directories: `manifest.json` (depth, policy, catalog and the file
//! of every stage), `stage-k.json` (graph file whose closed sets are the
//! base `B_k`), `bond-k.json` (map file for `f_k: X_k → X_{k-1}`),
//! `trace.json` (one record per stage above 0) and `report.txt`.

use std::path::Path;

use crooked_core::tower::{Action, DimPolicy, Stage, StageRecord, Task, Tower};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};
use crate::formats::{read_graph, read_json, write_graph, write_json, MapFile, NudgeRecord};

pub const FORMAT: &str = "crooked-tower";

pub fn policy_name(p: DimPolicy) -> &'static str {
    match p {
        DimPolicy::SearchFirst => "search-first",
        DimPolicy::AlwaysSurgery => "always-surgery",
    }
}

pub fn parse_policy(name: &str) -> Result<DimPolicy> {
    match name {
        "search-first" => Ok(DimPolicy::SearchFirst),
        "always-surgery" => Ok(DimPolicy::AlwaysSurgery),
        _ => Err(CliError::Format(format!("unknown policy {name:?}"))),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StageEntry {
    pub index: usize,
    pub graph: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bonding: Option<String>,
    pub monotone: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub format: String,
    pub depth: usize,
    pub policy: String,
    pub catalog: Vec<String>,
    pub stages: Vec<StageEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TraceEntry {
    pub stage: usize,
    pub task: String,
    pub pair: [u64; 2],
    pub action: String,
    pub tuple: Vec<String>,
    pub witnesses: Vec<String>,
    pub nudges: Vec<NudgeRecord>,
    pub circles: Vec<Vec<u32>>,
}

impl TraceEntry {
    pub fn new(stage: usize, r: &StageRecord) -> Self {
        TraceEntry {
            stage,
            task: r.task.name().into(),
            pair: [r.pair.0, r.pair.1],
            action: r.action.name().into(),
            tuple: r.tuple.clone(),
            witnesses: r.witnesses.clone(),
            nudges: r.nudges.iter().map(NudgeRecord::from).collect(),
            circles: r.circles.clone(),
        }
    }

    pub fn record(&self) -> Result<StageRecord> {
        let bad = |what: &str| CliError::Format(format!("trace entry for stage {}: {what}", self.stage));
        Ok(StageRecord {
            task: Task::from_name(&self.task).ok_or_else(|| bad("unknown task"))?,
            pair: (self.pair[0], self.pair[1]),
            action: Action::from_name(&self.action).ok_or_else(|| bad("unknown action"))?,
            tuple: self.tuple.clone(),
            witnesses: self.witnesses.clone(),
            nudges: self.nudges.iter().map(NudgeRecord::nudge).collect(),
            circles: self.circles.clone(),
        })
    }
}

pub fn stage_file(n: usize) -> String {
    format!("stage-{n}.json")
}

pub fn bond_file(n: usize) -> String {
    format!("bond-{n}.json")
}

pub fn trace(tower: &Tower) -> Vec<TraceEntry> {
    tower
        .stages
        .iter()
        .enumerate()
        .filter_map(|(n, st)| st.record.as_ref().map(|r| TraceEntry::new(n, r)))
        .collect()
}

/// Writes every file of the directory except `report.txt`.
pub fn save(dir: &Path, tower: &Tower) -> Result<()> {
    crate::formats::create_dir(dir)?;
    let mut entries = Vec::new();
    for (n, st) in tower.stages.iter().enumerate() {
        write_graph(&dir.join(stage_file(n)), &st.graph, &st.base)?;
        let bonding = match &st.bonding {
            Some(f) => {
                write_json(&dir.join(bond_file(n)), &MapFile::from(f))?;
                Some(bond_file(n))
            }
            None => None,
        };
        entries.push(StageEntry { index: n, graph: stage_file(n), bonding, monotone: st.monotone });
    }
    let manifest = Manifest {
        format: FORMAT.into(),
        depth: tower.depth(),
        policy: policy_name(tower.policy).into(),
        catalog: tower.catalog.clone(),
        stages: entries,
    };
    write_json(&dir.join("manifest.json"), &manifest)?;
    write_json(&dir.join("trace.json"), &trace(tower))
}

/// Reads a directory written by [`save`], validating every bonding map.
pub fn load(dir: &Path) -> Result<Tower> {
    let manifest: Manifest = read_json(&dir.join("manifest.json"))?;
    if manifest.format != FORMAT {
        return Err(CliError::Format(format!("not a tower directory: format {:?}", manifest.format)));
    }
    if manifest.stages.len() != manifest.depth + 1 {
        return Err(CliError::Format("manifest lists the wrong number of stages".into()));
    }
    let trace: Vec<TraceEntry> = read_json(&dir.join("trace.json"))?;
    let mut stages: Vec<Stage> = Vec::new();
    for (n, entry) in manifest.stages.iter().enumerate() {
        if entry.index != n {
            return Err(CliError::Format(format!("manifest stage {n} has index {}", entry.index)));
        }
        let data = read_graph(&dir.join(&entry.graph))?;
        let bonding = match (&entry.bonding, n) {
            (None, 0) => None,
            (Some(file), n) if n > 0 => {
                let f = read_json::<MapFile>(&dir.join(file))?.build();
                f.validate(&data.graph, &stages[n - 1].graph)?;
                Some(f)
            }
            _ => return Err(CliError::Format(format!("stage {n} has a misplaced bonding map"))),
        };
        let record = match n {
            0 => None,
            _ => {
                let t = trace
                    .iter()
                    .find(|t| t.stage == n)
                    .ok_or_else(|| CliError::Format(format!("no trace entry for stage {n}")))?;
                Some(t.record()?)
            }
        };
        stages.push(Stage { graph: data.graph, bonding, monotone: entry.monotone, base: data.sets, record });
    }
    Ok(Tower { stages, catalog: manifest.catalog, policy: parse_policy(&manifest.policy)? })
}
