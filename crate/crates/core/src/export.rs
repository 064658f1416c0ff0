//! DOT and JSON renderings of balls and skeletal windows.
//!
//! Chamber nodes are named by [`Chamber::id`], so the same chamber gets the
//! same id in every export.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::building::{BallView, BuildingModel};
use crate::cityproduct::{CityProduct, SkeletalView};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Dot,
    Json,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dot" => Ok(Format::Dot),
            "json" => Ok(Format::Json),
            other => Err(Error::UnsupportedFormat(other.to_string())),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NodeKind {
    Chamber,
    Panel,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Node {
    pub id: String,
    pub kind: NodeKind,
    pub label: String,
    /// Gallery distance from the centre, for chambers.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dist: Option<usize>,
    /// Whether every member of a panel lies in the window.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub complete: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub from: String,
    pub to: String,
    /// Index into [`Graph::types`].
    #[serde(rename = "type")]
    pub ty: usize,
}

/// A typed graph. For a ball, edges are adjacencies; for a skeletal window,
/// edges join chambers to the panels containing them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Graph {
    pub types: Vec<String>,
    pub nodes: Vec<Node>,
    pub edges: Vec<Edge>,
}

const COLORS: [&str; 8] = ["red", "blue", "darkgreen", "orange", "purple", "brown", "magenta", "cyan"];
const STYLES: [&str; 3] = ["solid", "dashed", "dotted"];

impl Graph {
    /// The subgraph on the chambers and panels whose ids are in `keep`.
    pub fn induced(&self, keep: &BTreeSet<String>) -> Graph {
        Graph {
            types: self.types.clone(),
            nodes: self.nodes.iter().filter(|n| keep.contains(&n.id)).cloned().collect(),
            edges: self
                .edges
                .iter()
                .filter(|e| keep.contains(&e.from) && keep.contains(&e.to))
                .cloned()
                .collect(),
        }
    }

    pub fn degree(&self, id: &str) -> usize {
        self.edges.iter().filter(|e| e.from == id || e.to == id).count()
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph G {\n  node [shape=circle, fontsize=8];\n");
        for n in &self.nodes {
            let shape = match n.kind {
                NodeKind::Chamber => "circle",
                NodeKind::Panel => "box",
            };
            let _ = writeln!(s, "  {} [label={}, shape={shape}];", quote(&n.id), quote(&n.label));
        }
        for e in &self.edges {
            let _ = writeln!(
                s,
                "  {} -- {} [color={}, style={}, label={}];",
                quote(&e.from),
                quote(&e.to),
                COLORS[e.ty % COLORS.len()],
                STYLES[(e.ty / COLORS.len()) % STYLES.len()],
                quote(&self.types[e.ty]),
            );
        }
        s.push_str("}\n");
        s
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("graph serializes")
    }

    pub fn from_json(text: &str) -> Result<Graph> {
        serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Dot => self.to_dot(),
            Format::Json => self.to_json(),
        }
    }
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// The ball with one edge per adjacency, typed by index.
pub fn ball_graph(model: &BuildingModel, ball: &BallView) -> Graph {
    let d = model.diagram();
    let nodes = ball
        .chambers()
        .iter()
        .enumerate()
        .map(|(k, c)| Node {
            id: c.id(),
            kind: NodeKind::Chamber,
            label: c.display(d),
            dist: Some(ball.dist(k)),
            complete: None,
        })
        .collect();
    let edges = ball
        .edges()
        .into_iter()
        .map(|(u, v, ty)| Edge {
            from: ball.chamber(u).id(),
            to: ball.chamber(v).id(),
            ty,
        })
        .collect();
    Graph {
        types: d.names().to_vec(),
        nodes,
        edges,
    }
}

/// Chambers of the window and its skeletal panels, each chamber joined to
/// the panel of each type containing it.
pub fn skeletal_graph(cp: &CityProduct, sv: &SkeletalView) -> Graph {
    let ball = &sv.ball;
    let d = cp.product.diagram();
    let mut nodes: Vec<Node> = ball
        .chambers()
        .iter()
        .enumerate()
        .map(|(k, c)| Node {
            id: c.id(),
            kind: NodeKind::Chamber,
            label: c.display(d),
            dist: Some(ball.dist(k)),
            complete: None,
        })
        .collect();
    let mut edges = Vec::new();
    for p in &sv.panels {
        let id = format!("P{}:{}", cp.m.name(p.part), p.key.id());
        let complete = cp.factors[p.part].size().map(|n| n == p.members.len());
        nodes.push(Node {
            id: id.clone(),
            kind: NodeKind::Panel,
            label: format!("{} {}", cp.m.name(p.part), p.key.display(d)),
            dist: None,
            complete: Some(complete.unwrap_or(false)),
        });
        for &k in &p.members {
            edges.push(Edge {
                from: ball.chamber(k).id(),
                to: id.clone(),
                ty: p.part,
            });
        }
    }
    Graph {
        types: cp.m.names().to_vec(),
        nodes,
        edges,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::building::Chamber;
    use crate::diagram::Diagram;

    #[test]
    fn radius_zero_is_one_node() {
        let b = BuildingModel::new(Diagram::free(2).unwrap(), vec![3, 2]).unwrap();
        let g = ball_graph(&b, &b.ball(&Chamber::base(), 0).unwrap());
        let dot = g.to_dot();
        assert_eq!(g.nodes.len(), 1);
        assert!(g.edges.is_empty());
        assert_eq!(dot.matches(" -- ").count(), 0);
        assert_eq!(dot.matches("shape=circle];").count(), 1);
        assert!(dot.contains("\"[]\""));
    }

    #[test]
    fn json_round_trip() {
        let b = BuildingModel::new(Diagram::right_angled(3, &[(0, 1)]).unwrap(), vec![2, 3, 2]).unwrap();
        let g = ball_graph(&b, &b.ball(&Chamber::base(), 2).unwrap());
        assert_eq!(Graph::from_json(&g.to_json()).unwrap(), g);
        let cp = crate::verify::NamedProduct::thin_square_edge().spec.build().unwrap();
        let s = skeletal_graph(&cp, &cp.skeletal(2).unwrap());
        assert_eq!(Graph::from_json(&s.to_json()).unwrap(), s);
    }

    #[test]
    fn ids_are_stable_across_exports() {
        let b = BuildingModel::new(Diagram::free(2).unwrap(), vec![3, 2]).unwrap();
        let small = ball_graph(&b, &b.ball(&Chamber::base(), 1).unwrap());
        let large = ball_graph(&b, &b.ball(&Chamber::base(), 3).unwrap());
        for n in &small.nodes {
            assert!(large.nodes.iter().any(|m| m.id == n.id));
        }
    }

    #[test]
    fn unsupported_format() {
        assert_eq!("svg".parse::<Format>(), Err(Error::UnsupportedFormat("svg".into())));
    }

    /// Thin rank 3 with `1 ∞ 2 ∞ 3` and `1, 3` commuting: the `{1,3}`-residue
    /// of the base and those of its `2`-neighbours give 5 squares, reaching
    /// gallery distance 5.
    #[test]
    fn coxeter_complex_blocks() {
        let d = Diagram::right_angled(3, &[(0, 1), (1, 2)]).unwrap();
        let b = BuildingModel::thin(d).unwrap();
        let ball = b.ball(&Chamber::base(), 5).unwrap();
        let g = ball_graph(&b, &ball);
        let square = |c: &Chamber| crate::building::residue(&b, c, 0b101, 4);
        let base_block = square(&Chamber::base());
        let mut keep: BTreeSet<String> = base_block.iter().map(Chamber::id).collect();
        for c in &base_block {
            for x in square(&b.step(c, 1, 1)) {
                keep.insert(x.id());
            }
        }
        let sub = g.induced(&keep);
        assert_eq!(sub.nodes.len(), 20);
        let square_edges = sub.edges.iter().filter(|e| e.ty != 1).count();
        assert_eq!(square_edges, 5 * 4);
        assert_eq!(sub.edges.iter().filter(|e| e.ty == 1).count(), 4);
        for n in &sub.nodes {
            assert_eq!(sub.edges.iter().filter(|e| e.ty != 1 && (e.from == n.id || e.to == n.id)).count(), 2);
        }
    }

    #[test]
    fn skeletal_panels_of_the_thin_square_edge() {
        let cp = crate::verify::NamedProduct::thin_square_edge().spec.build().unwrap();
        let g = skeletal_graph(&cp, &cp.skeletal(4).unwrap());
        let mut seen = [false; 2];
        for n in g.nodes.iter().filter(|n| n.kind == NodeKind::Panel && n.complete == Some(true)) {
            let ty = g.edges.iter().find(|e| e.to == n.id).unwrap().ty;
            assert_eq!(g.degree(&n.id), [4, 2][ty]);
            seen[ty] = true;
        }
        assert_eq!(seen, [true, true]);
    }
}
