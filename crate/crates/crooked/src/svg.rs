//! SVG rendering of 1-complexes.
//!
//! Edges are drawn as straight segments between laid-out vertices, one
//! `<path>` per maximal straight segment. Graphs without a layout get
//! vertices on rational points of the unit circle. All coordinates are
//! exact rationals scaled by the common denominator, so the output holds
//! integers only.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crooked_core::graph::{ClosedSet, MetricGraph, Point};
use crooked_core::rational::{one, q, Q};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crooked_core::error::Result;

const PALETTE: [&str; 8] = ["#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#e377c2"];

/// Vertex `i` of `n` at the rational circle point with parameter
/// `t = (2i - n) / n`.
pub fn default_layout(n: u32) -> Vec<(Q, Q)> {
    (0..n as i64)
        .map(|i| {
            let t = q(2 * i - n as i64, n.max(1) as i64);
            let d = one() + &t * &t;
            ((one() - &t * &t) / &d, (&t + &t) / &d)
        })
        .collect()
}

/// What to draw on top of the complex.
#[derive(Debug, Clone, Default)]
pub struct Overlays<'a> {
    pub sets: Vec<(&'a str, &'a ClosedSet)>,
    /// Vertex cycles drawn as circles around their centroid.
    pub circles: Vec<Vec<u32>>,
}

enum Shape {
    Path { class: String, stroke: String, points: Vec<(Q, Q)> },
    Dot { class: String, fill: String, at: (Q, Q) },
    Ring { center: (Q, Q), radius: Q },
}

fn chain(g: &MetricGraph, class: &[u32]) -> Vec<u32> {
    let mut degree: BTreeMap<u32, usize> = BTreeMap::new();
    for &e in class {
        let edge = g.edge(e);
        *degree.entry(edge.u).or_default() += 1;
        *degree.entry(edge.v).or_default() += 1;
    }
    let start = degree.iter().find(|(_, &d)| d % 2 == 1).map(|(&v, _)| v).unwrap_or(g.edge(class[0]).u);
    let mut used = vec![false; class.len()];
    let mut at = start;
    let mut walk = vec![at];
    while let Some(i) = (0..class.len()).find(|&i| {
        let edge = g.edge(class[i]);
        !used[i] && (edge.u == at || edge.v == at)
    }) {
        used[i] = true;
        let edge = g.edge(class[i]);
        at = if edge.u == at { edge.v } else { edge.u };
        walk.push(at);
    }
    walk
}

fn lcm_denominators<'a>(values: impl Iterator<Item = &'a Q>) -> num_bigint::BigInt {
    values.fold(num_bigint::BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

fn coord(v: &Q, scale: &num_bigint::BigInt) -> num_bigint::BigInt {
    (v * Q::from(scale.clone())).to_integer()
}

/// Renders `g` with the given overlays.
pub fn render(g: &MetricGraph, overlays: &Overlays<'_>) -> Result<String> {
    let g = match &g.layout {
        Some(_) => g.clone(),
        None => g.clone().with_layout(default_layout(g.vertex_count()))?,
    };
    let pos = |p: &Point| g.position(p).expect("layout is present");
    let mut shapes = Vec::new();
    for class in g.segment_classes() {
        let points = chain(&g, &class).into_iter().map(|v| pos(&Point::Vertex(v))).collect();
        shapes.push(Shape::Path { class: "edge".into(), stroke: "#000000".into(), points });
    }
    for (i, (name, set)) in overlays.sets.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()].to_string();
        let class = format!("set set-{}", sanitize(name));
        for v in set.vertices() {
            shapes.push(Shape::Dot { class: class.clone(), fill: color.clone(), at: pos(&Point::Vertex(v)) });
        }
        for e in set.edges() {
            for (lo, hi) in set.intervals(e) {
                let (a, b) = (pos(&Point::Edge(e, lo.clone())), pos(&Point::Edge(e, hi.clone())));
                if lo == hi {
                    shapes.push(Shape::Dot { class: class.clone(), fill: color.clone(), at: a });
                } else {
                    shapes.push(Shape::Path { class: class.clone(), stroke: color.clone(), points: vec![a, b] });
                }
            }
        }
    }
    for cycle in &overlays.circles {
        if cycle.is_empty() {
            continue;
        }
        let pts: Vec<(Q, Q)> = cycle.iter().map(|&v| pos(&Point::Vertex(v))).collect();
        let n = Q::from_integer((pts.len() as i64).into());
        let cx = pts.iter().fold(Q::zero(), |s, p| s + &p.0) / &n;
        let cy = pts.iter().fold(Q::zero(), |s, p| s + &p.1) / &n;
        let radius = pts
            .iter()
            .map(|p| std::cmp::max((&p.0 - &cx).abs(), (&p.1 - &cy).abs()))
            .max()
            .unwrap_or_else(Q::zero);
        shapes.push(Shape::Ring { center: (cx, cy), radius });
    }

    let mut all: Vec<&Q> = Vec::new();
    for s in &shapes {
        match s {
            Shape::Path { points, .. } => all.extend(points.iter().flat_map(|p| [&p.0, &p.1])),
            Shape::Dot { at, .. } => all.extend([&at.0, &at.1]),
            Shape::Ring { center, radius } => all.extend([&center.0, &center.1, radius]),
        }
    }
    let scale = lcm_denominators(all.iter().copied());
    let xy = |p: &(Q, Q)| (coord(&p.0, &scale), -coord(&p.1, &scale));
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for s in &shapes {
        match s {
            Shape::Path { points, .. } => points.iter().map(xy).for_each(|(x, y)| {
                xs.push(x);
                ys.push(y);
            }),
            Shape::Dot { at, .. } => {
                let (x, y) = xy(at);
                xs.push(x);
                ys.push(y);
            }
            Shape::Ring { center, radius } => {
                let (x, y) = xy(center);
                let r = coord(radius, &scale);
                xs.extend([&x - &r, &x + &r]);
                ys.extend([&y - &r, &y + &r]);
            }
        }
    }
    let zero = num_bigint::BigInt::zero();
    let (min_x, max_x) = (xs.iter().min().unwrap_or(&zero).clone(), xs.iter().max().unwrap_or(&zero).clone());
    let (min_y, max_y) = (ys.iter().min().unwrap_or(&zero).clone(), ys.iter().max().unwrap_or(&zero).clone());
    let span = std::cmp::max(&max_x - &min_x, &max_y - &min_y);
    let margin = std::cmp::max(&span / 20, num_bigint::BigInt::one());
    let dot = std::cmp::max(&span / 80, num_bigint::BigInt::one());

    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"480\" height=\"480\" viewBox=\"{} {} {} {}\">",
        &min_x - &margin,
        &min_y - &margin,
        &max_x - &min_x + &margin * 2,
        &max_y - &min_y + &margin * 2
    );
    for (group, pick) in [("complex", 0), ("sets", 1), ("circles", 2)] {
        let _ = writeln!(out, "<g id=\"{group}\">");
        for s in &shapes {
            match (s, pick) {
                (Shape::Path { class, stroke, points }, 0 | 1) if (class == "edge") == (pick == 0) => {
                    let mut d = String::new();
                    for (i, p) in points.iter().enumerate() {
                        let (x, y) = xy(p);
                        let _ = write!(d, "{}{} {}", if i == 0 { "M " } else { " L " }, x, y);
                    }
                    let width = if pick == 0 { 2 } else { 4 };
                    let _ = writeln!(
                        out,
                        "<path class=\"{class}\" d=\"{d}\" fill=\"none\" stroke=\"{stroke}\" stroke-width=\"{width}\" vector-effect=\"non-scaling-stroke\"/>"
                    );
                }
                (Shape::Dot { class, fill, at }, 1) => {
                    let (x, y) = xy(at);
                    let _ = writeln!(out, "<circle class=\"{class}\" cx=\"{x}\" cy=\"{y}\" r=\"{dot}\" fill=\"{fill}\"/>");
                }
                (Shape::Ring { center, radius }, 2) => {
                    let (x, y) = xy(center);
                    let r = coord(radius, &scale);
                    let _ = writeln!(
                        out,
                        "<circle class=\"fiber\" cx=\"{x}\" cy=\"{y}\" r=\"{r}\" fill=\"none\" stroke=\"#888888\" stroke-dasharray=\"4 2\" vector-effect=\"non-scaling-stroke\"/>"
                    );
                }
                _ => {}
            }
        }
        let _ = writeln!(out, "</g>");
    }
    out.push_str("</svg>\n");
    Ok(out)
}

fn sanitize(name: &str) -> String {
    name.chars().map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' }).collect()
}

/// The `d` attributes of the edge paths of an SVG produced by [`render`].
pub fn edge_paths(svg: &str) -> Vec<String> {
    svg.lines()
        .filter(|l| l.starts_with("<path class=\"edge\""))
        .filter_map(|l| l.split("d=\"").nth(1).and_then(|r| r.split('"').next()).map(str::to_string))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_segment_is_one_integer_segment() {
        let svg = render(&MetricGraph::unit_segment(), &Overlays::default()).unwrap();
        assert_eq!(edge_paths(&svg), vec!["M 0 0 L 1 0".to_string()]);
    }

    #[test]
    fn default_layout_is_on_the_circle() {
        for (x, y) in default_layout(5) {
            assert_eq!(&x * &x + &y * &y, one());
        }
    }
}
