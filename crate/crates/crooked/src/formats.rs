//! JSON file formats. Rationals are written as strings `"p/q"` (integers as
//! `"n"`); integer literals are also accepted on input.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use crooked_core::graph::{extract_sublattice, ClosedSet, Edge, EdgeImage, MetricGraph, PLMap, Point};
use crooked_core::lattice::{generate_sublattice_capped, FiniteLattice, PointSet};
use crooked_core::rational::{fmt_q, parse_q, Q};
use crooked_core::surgery::Nudge;
use serde::de::{DeserializeOwned, Error as _};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{Map, Value};

use crate::error::{CliError, Result};

pub fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| CliError::Io { path: path.into(), source })
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|source| CliError::Io { path: path.into(), source })
}

pub fn create_dir(path: &Path) -> Result<()> {
    fs::create_dir_all(path).map_err(|source| CliError::Io { path: path.into(), source })
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = read_text(path)?;
    serde_json::from_str(&text).map_err(|source| CliError::Json { path: path.into(), source })
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("in-memory values serialize");
    s.push('\n');
    s
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    write_text(path, &to_json(value))
}

/// An exact rational in a JSON file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QText(pub Q);

impl Serialize for QText {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_q(&self.0))
    }
}

impl<'de> Deserialize<'de> for QText {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Value::deserialize(d)?;
        let text = match &v {
            Value::String(s) => s.clone(),
            Value::Number(n) if n.is_i64() || n.is_u64() => n.to_string(),
            _ => return Err(D::Error::custom(format!("expected a rational like \"1/2\", got {v}"))),
        };
        parse_q(&text).map(QText).map_err(D::Error::custom)
    }
}

/// `{ "ground": n, "generators": { name: [point ids] } }`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeFile {
    pub ground: u32,
    pub generators: BTreeMap<String, Vec<u32>>,
}

/// A lattice with the element index of each named generator.
#[derive(Debug, Clone)]
pub struct NamedLattice {
    pub lattice: FiniteLattice,
    pub names: BTreeMap<String, usize>,
}

impl LatticeFile {
    /// The sublattice of the powerset generated by the generators, in name
    /// order.
    pub fn build(&self, cap: usize) -> Result<NamedLattice> {
        let gens: Vec<PointSet> = self
            .generators
            .values()
            .map(|g| {
                let mut g = g.clone();
                g.sort_unstable();
                g.dedup();
                g
            })
            .collect();
        let lattice = generate_sublattice_capped(self.ground, &gens, cap)?;
        let names = self
            .generators
            .keys()
            .zip(&gens)
            .map(|(n, g)| (n.clone(), lattice.index_of(g).expect("generators are elements")))
            .collect();
        Ok(NamedLattice { lattice, names })
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeRecord {
    pub id: u32,
    pub u: u32,
    pub v: u32,
    pub len: QText,
}

/// `{ "vertices": [ids], "edges": [{id, u, v, len}], "layout"?: [[x, y]],
/// "closed_sets": { name: { "vertices": [ids], edge-id: [[lo, hi], ...] } } }`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphFile {
    pub vertices: Vec<u32>,
    pub edges: Vec<EdgeRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub layout: Option<Vec<[QText; 2]>>,
    #[serde(default)]
    pub closed_sets: Map<String, Value>,
}

/// A graph with named closed sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphData {
    pub graph: MetricGraph,
    pub sets: BTreeMap<String, ClosedSet>,
}

pub fn set_to_json(s: &ClosedSet) -> Value {
    let mut m = Map::new();
    let vertices: Vec<Value> = s.vertices().map(Value::from).collect();
    m.insert("vertices".into(), Value::Array(vertices));
    for e in s.edges() {
        let pieces: Vec<Value> =
            s.intervals(e).iter().map(|(lo, hi)| Value::from(vec![fmt_q(lo), fmt_q(hi)])).collect();
        m.insert(e.to_string(), Value::Array(pieces));
    }
    Value::Object(m)
}

pub fn set_from_json(
    g: &MetricGraph,
    vertex_ids: &BTreeMap<u32, u32>,
    edge_ids: &BTreeMap<u32, u32>,
    name: &str,
    v: &Value,
) -> Result<ClosedSet> {
    let bad = |what: &str| CliError::Format(format!("closed set {name}: {what}"));
    let obj = v.as_object().ok_or_else(|| bad("expected an object"))?;
    let mut vertices = Vec::new();
    let mut intervals = Vec::new();
    for (key, val) in obj {
        if key == "vertices" {
            for x in val.as_array().ok_or_else(|| bad("vertices must be a list"))? {
                let id = x.as_u64().ok_or_else(|| bad("vertex ids are integers"))? as u32;
                vertices.push(*vertex_ids.get(&id).ok_or_else(|| bad(&format!("unknown vertex {id}")))?);
            }
            continue;
        }
        let id: u32 = key.parse().map_err(|_| bad(&format!("unknown key {key:?}")))?;
        let e = *edge_ids.get(&id).ok_or_else(|| bad(&format!("unknown edge {id}")))?;
        for piece in val.as_array().ok_or_else(|| bad("intervals must be a list"))? {
            let pair: [QText; 2] = serde_json::from_value(piece.clone())
                .map_err(|err| bad(&format!("interval on edge {id}: {err}")))?;
            let [QText(lo), QText(hi)] = pair;
            intervals.push((e, lo, hi));
        }
    }
    Ok(ClosedSet::from_parts(g, vertices, intervals)?)
}

impl GraphFile {
    pub fn from_graph(g: &MetricGraph, sets: &BTreeMap<String, ClosedSet>) -> Self {
        GraphFile {
            vertices: (0..g.vertex_count()).collect(),
            edges: g
                .edges()
                .iter()
                .enumerate()
                .map(|(i, e)| EdgeRecord { id: i as u32, u: e.u, v: e.v, len: QText(e.len.clone()) })
                .collect(),
            layout: g
                .layout
                .as_ref()
                .map(|l| l.iter().map(|(x, y)| [QText(x.clone()), QText(y.clone())]).collect()),
            closed_sets: sets.iter().map(|(n, s)| (n.clone(), set_to_json(s))).collect(),
        }
    }

    pub fn build(&self) -> Result<GraphData> {
        let mut vertex_ids = BTreeMap::new();
        for (i, &id) in self.vertices.iter().enumerate() {
            if vertex_ids.insert(id, i as u32).is_some() {
                return Err(CliError::Format(format!("duplicate vertex id {id}")));
            }
        }
        let mut edge_ids = BTreeMap::new();
        let mut edges = Vec::new();
        for (i, e) in self.edges.iter().enumerate() {
            if edge_ids.insert(e.id, i as u32).is_some() {
                return Err(CliError::Format(format!("duplicate edge id {}", e.id)));
            }
            let end = |v: u32| {
                vertex_ids.get(&v).copied().ok_or_else(|| CliError::Format(format!("edge {}: unknown vertex {v}", e.id)))
            };
            edges.push(Edge { u: end(e.u)?, v: end(e.v)?, len: e.len.0.clone() });
        }
        let mut graph = MetricGraph::new(self.vertices.len() as u32, edges)?;
        if let Some(layout) = &self.layout {
            let l = layout.iter().map(|[x, y]| (x.0.clone(), y.0.clone())).collect();
            graph = graph.with_layout(l)?;
        }
        let mut sets = BTreeMap::new();
        for (name, v) in &self.closed_sets {
            sets.insert(name.clone(), set_from_json(&graph, &vertex_ids, &edge_ids, name, v)?);
        }
        Ok(GraphData { graph, sets })
    }
}

pub fn read_graph(path: &Path) -> Result<GraphData> {
    read_json::<GraphFile>(path)?.build()
}

pub fn write_graph(path: &Path, g: &MetricGraph, sets: &BTreeMap<String, ClosedSet>) -> Result<()> {
    write_json(path, &GraphFile::from_graph(g, sets))
}

/// The lattice generated by a graph's named closed sets (in name order)
/// and the whole space, with the closed set behind every element.
pub fn base_lattice(data: &GraphData, cap: usize) -> Result<(FiniteLattice, Vec<ClosedSet>)> {
    let named: Vec<(String, ClosedSet)> = data.sets.iter().map(|(n, s)| (n.clone(), s.clone())).collect();
    let ex = extract_sublattice(&data.graph, &named, cap)?;
    let sets = (0..ex.lattice.len()).map(|i| ex.element_set(&data.graph, i)).collect();
    Ok((ex.lattice, sets))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum PointRecord {
    Vertex(u32),
    Edge(u32, QText),
}

impl From<&Point> for PointRecord {
    fn from(p: &Point) -> Self {
        match p {
            Point::Vertex(v) => PointRecord::Vertex(*v),
            Point::Edge(e, t) => PointRecord::Edge(*e, QText(t.clone())),
        }
    }
}

impl PointRecord {
    pub fn point(&self) -> Point {
        match self {
            PointRecord::Vertex(v) => Point::Vertex(*v),
            PointRecord::Edge(e, t) => Point::Edge(*e, t.0.clone()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum EdgeImageRecord {
    Const(PointRecord),
    /// Parameter `0 ↦ from`, `len ↦ to` on `edge`, linear in between.
    Along { edge: u32, from: QText, to: QText },
}

/// `{ "vertex_images": [point], "edge_images": [image] }`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapFile {
    pub vertex_images: Vec<PointRecord>,
    pub edge_images: Vec<EdgeImageRecord>,
}

impl From<&PLMap> for MapFile {
    fn from(m: &PLMap) -> Self {
        MapFile {
            vertex_images: m.vertex_images.iter().map(PointRecord::from).collect(),
            edge_images: m
                .edge_images
                .iter()
                .map(|img| match img {
                    EdgeImage::Const(p) => EdgeImageRecord::Const(p.into()),
                    EdgeImage::Along { edge, from, to } => {
                        EdgeImageRecord::Along { edge: *edge, from: QText(from.clone()), to: QText(to.clone()) }
                    }
                })
                .collect(),
        }
    }
}

impl MapFile {
    pub fn build(&self) -> PLMap {
        PLMap::new(
            self.vertex_images.iter().map(PointRecord::point).collect(),
            self.edge_images
                .iter()
                .map(|img| match img {
                    EdgeImageRecord::Const(p) => EdgeImage::Const(p.point()),
                    EdgeImageRecord::Along { edge, from, to } => {
                        EdgeImage::Along { edge: *edge, from: from.0.clone(), to: to.0.clone() }
                    }
                })
                .collect(),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NudgeRecord {
    pub edge: u32,
    pub factor: QText,
    pub accepted: bool,
}

impl From<&Nudge> for NudgeRecord {
    fn from(n: &Nudge) -> Self {
        NudgeRecord { edge: n.edge, factor: QText(n.factor.clone()), accepted: n.accepted }
    }
}

impl NudgeRecord {
    pub fn nudge(&self) -> Nudge {
        Nudge { edge: self.edge, factor: self.factor.0.clone(), accepted: self.accepted }
    }
}
