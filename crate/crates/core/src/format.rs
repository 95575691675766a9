//! JSON documents for graphs, connections, gauge transformations,
//! automorphisms, refinements and smooth connection specs.
//!
//! Parse failures carry the line and column reported by the JSON reader.
//! Writers emit pretty-printed JSON with entries in graph order, so equal
//! values serialize to equal bytes.

use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::connection::{
    GeneralizedConnection, Monomial, OneForm, Polynomial, SmoothConnectionSpec,
};
use crate::error::{Error, Result};
use crate::group::{GroupDescriptor, GroupElement};
use crate::groupoid::{EmbeddedGraph, OrientedEdge, SignedEdge, Vertex};
use crate::projective::Refinement;
use crate::symmetry::{GaugeTransformation, GroupoidAutomorphism};

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphDoc {
    id: String,
    vertices: Vec<VertexDoc>,
    edges: Vec<EdgeDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct VertexDoc {
    id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    position: Option<Vec<f64>>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeDoc {
    id: String,
    source: String,
    target: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    polyline: Option<Vec<Vec<f64>>>,
}

/// Group elements may be written as strings, or as bare integers for cyclic
/// groups.
#[derive(Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum ElementText {
    Integer(u64),
    Text(String),
}

impl ElementText {
    fn parse(&self, descriptor: &GroupDescriptor) -> Result<GroupElement> {
        match self {
            ElementText::Integer(k) => descriptor.parse_element(&k.to_string()),
            ElementText::Text(s) => descriptor.parse_element(s),
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AssignmentDoc {
    graph: String,
    descriptor: String,
    #[serde(alias = "values")]
    assignment: Vec<(String, ElementText)>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AutomorphismDoc {
    graph: String,
    vertices: Vec<(String, String)>,
    edges: Vec<(String, String)>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RefinementDoc {
    coarse: String,
    fine: String,
    expansion: Vec<(String, String)>,
    vertex_inclusion: Vec<(String, String)>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MonomialDoc {
    coefficient: f64,
    exponents: Vec<u32>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "kind", deny_unknown_fields)]
enum SmoothDoc {
    #[serde(rename = "u1")]
    U1 {
        quadrature_points: usize,
        components: Vec<Vec<MonomialDoc>>,
    },
    #[serde(rename = "su2")]
    Su2 {
        quadrature_points: usize,
        components: Vec<[Vec<MonomialDoc>; 3]>,
    },
}

fn read<'a, T: Deserialize<'a>>(what: &str, text: &'a str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Format(format!("{what}: {e}")))
}

fn write<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents serialize");
    s.push('\n');
    s
}

fn check_graph_id(graph: &EmbeddedGraph, named: &str) -> Result<()> {
    if graph.id() == named {
        Ok(())
    } else {
        Err(Error::GraphMismatch {
            left: graph.id().to_string(),
            right: named.to_string(),
        })
    }
}

/// Graph document: `{"id", "vertices": [{"id", "position"?}], "edges":
/// [{"id", "source", "target", "polyline"?}]}`.
pub fn parse_graph(text: &str) -> Result<Arc<EmbeddedGraph>> {
    let doc: GraphDoc = read("graph", text)?;
    let vertices = doc
        .vertices
        .into_iter()
        .map(|v| Vertex {
            id: v.id,
            position: v.position,
        })
        .collect();
    let edges = doc
        .edges
        .into_iter()
        .map(|e| OrientedEdge {
            id: e.id,
            source: e.source,
            target: e.target,
            geometry: e.polyline,
        })
        .collect();
    Ok(Arc::new(EmbeddedGraph::new(doc.id, vertices, edges)?))
}

pub fn graph_to_string(graph: &EmbeddedGraph) -> String {
    write(&GraphDoc {
        id: graph.id().to_string(),
        vertices: graph
            .vertices()
            .iter()
            .map(|v| VertexDoc {
                id: v.id.clone(),
                position: v.position.clone(),
            })
            .collect(),
        edges: graph
            .edges()
            .iter()
            .map(|e| EdgeDoc {
                id: e.id.clone(),
                source: e.source.clone(),
                target: e.target.clone(),
                polyline: e.geometry.clone(),
            })
            .collect(),
    })
}

fn parse_assignment(
    what: &str,
    text: &str,
    graph: &EmbeddedGraph,
) -> Result<(GroupDescriptor, HashMap<String, GroupElement>)> {
    let doc: AssignmentDoc = read(what, text)?;
    check_graph_id(graph, &doc.graph)?;
    let descriptor: GroupDescriptor = doc.descriptor.parse()?;
    let mut map = HashMap::new();
    for (id, value) in &doc.assignment {
        if map.insert(id.clone(), value.parse(&descriptor)?).is_some() {
            return Err(Error::Format(format!("{what}: `{id}` assigned twice")));
        }
    }
    Ok((descriptor, map))
}

/// Connection document: `{"graph", "descriptor", "assignment": [[edge,
/// element], ...]}`.
pub fn parse_connection(text: &str, graph: &Arc<EmbeddedGraph>) -> Result<GeneralizedConnection> {
    let (descriptor, map) = parse_assignment("connection", text, graph)?;
    GeneralizedConnection::from_map(graph, descriptor, &map)
}

pub fn connection_to_string(conn: &GeneralizedConnection) -> String {
    let graph = conn.graph();
    write(&AssignmentDoc {
        graph: graph.id().to_string(),
        descriptor: conn.descriptor().to_string(),
        assignment: graph
            .edges()
            .iter()
            .zip(conn.assignment())
            .map(|(e, g)| (e.id.clone(), ElementText::Text(g.to_string())))
            .collect(),
    })
}

/// Gauge document: `{"graph", "descriptor", "values": [[vertex, element],
/// ...]}`.
pub fn parse_gauge(text: &str, graph: &Arc<EmbeddedGraph>) -> Result<GaugeTransformation> {
    let (descriptor, map) = parse_assignment("gauge transformation", text, graph)?;
    GaugeTransformation::from_map(graph, descriptor, &map)
}

pub fn gauge_to_string(g: &GaugeTransformation) -> String {
    let graph = g.graph();
    write(&AssignmentDoc {
        graph: graph.id().to_string(),
        descriptor: g.descriptor().to_string(),
        assignment: graph
            .vertices()
            .iter()
            .zip(g.values())
            .map(|(v, x)| (v.id.clone(), ElementText::Text(x.to_string())))
            .collect(),
    })
}

/// Automorphism document: `{"graph", "vertices": [[from, to], ...],
/// "edges": [[from, "to" | "to^-1"], ...]}`.
pub fn parse_automorphism(text: &str, graph: &Arc<EmbeddedGraph>) -> Result<GroupoidAutomorphism> {
    let doc: AutomorphismDoc = read("automorphism", text)?;
    check_graph_id(graph, &doc.graph)?;
    GroupoidAutomorphism::from_ids(graph, &doc.vertices, &doc.edges)
}

fn letter_literal(graph: &EmbeddedGraph, l: SignedEdge) -> String {
    let id = &graph.edge(l.edge).id;
    if l == SignedEdge::forward(l.edge) {
        id.clone()
    } else {
        format!("{id}^-1")
    }
}

pub fn automorphism_to_string(f: &GroupoidAutomorphism) -> String {
    let graph = f.graph();
    write(&AutomorphismDoc {
        graph: graph.id().to_string(),
        vertices: graph
            .vertex_indices()
            .map(|v| {
                (
                    graph.vertex(v).id.clone(),
                    graph.vertex(f.vertex_image(v)).id.clone(),
                )
            })
            .collect(),
        edges: graph
            .edge_indices()
            .map(|e| {
                (
                    graph.edge(e).id.clone(),
                    letter_literal(graph, f.edge_map()[e.0]),
                )
            })
            .collect(),
    })
}

/// Refinement document: `{"coarse", "fine", "expansion": [[edge, path
/// literal], ...], "vertex_inclusion": [[coarse vertex, fine vertex], ...]}`.
pub fn parse_refinement(
    text: &str,
    coarse: &Arc<EmbeddedGraph>,
    fine: &Arc<EmbeddedGraph>,
) -> Result<Refinement> {
    let doc: RefinementDoc = read("refinement", text)?;
    check_graph_id(coarse, &doc.coarse)?;
    check_graph_id(fine, &doc.fine)?;
    let mut expansion = HashMap::new();
    for (edge, literal) in doc.expansion {
        if expansion.insert(edge.clone(), literal).is_some() {
            return Err(Error::InvalidRefinement(format!(
                "edge `{edge}` expanded twice"
            )));
        }
    }
    Refinement::from_ids(coarse, fine, &expansion, &doc.vertex_inclusion)
}

pub fn refinement_to_string(r: &Refinement) -> String {
    let (coarse, fine) = (r.coarse(), r.fine());
    write(&RefinementDoc {
        coarse: coarse.id().to_string(),
        fine: fine.id().to_string(),
        expansion: coarse
            .edge_indices()
            .map(|e| (coarse.edge(e).id.clone(), r.expansion(e).to_string()))
            .collect(),
        vertex_inclusion: coarse
            .vertex_indices()
            .map(|v| {
                (
                    coarse.vertex(v).id.clone(),
                    fine.vertex(r.vertex_inclusion(v)).id.clone(),
                )
            })
            .collect(),
    })
}

fn polynomial(terms: Vec<MonomialDoc>) -> Polynomial {
    Polynomial {
        terms: terms
            .into_iter()
            .map(|m| Monomial {
                coefficient: m.coefficient,
                exponents: m.exponents,
            })
            .collect(),
    }
}

fn monomials(p: &Polynomial) -> Vec<MonomialDoc> {
    p.terms
        .iter()
        .map(|m| MonomialDoc {
            coefficient: m.coefficient,
            exponents: m.exponents.clone(),
        })
        .collect()
}

/// Smooth spec document: `{"kind": "u1", "quadrature_points", "components":
/// [[{"coefficient", "exponents"}, ...], ...]}`; `su2` components hold three
/// monomial lists per coordinate direction.
pub fn parse_smooth_spec(text: &str) -> Result<SmoothConnectionSpec> {
    match read("smooth connection spec", text)? {
        SmoothDoc::U1 {
            quadrature_points,
            components,
        } => SmoothConnectionSpec::new(
            OneForm::U1(components.into_iter().map(polynomial).collect()),
            quadrature_points,
        ),
        SmoothDoc::Su2 {
            quadrature_points,
            components,
        } => SmoothConnectionSpec::new(
            OneForm::Su2(components.into_iter().map(|c| c.map(polynomial)).collect()),
            quadrature_points,
        ),
    }
}

pub fn smooth_spec_to_string(spec: &SmoothConnectionSpec) -> String {
    let quadrature_points = spec.quadrature_points();
    write(&match spec.form() {
        OneForm::U1(components) => SmoothDoc::U1 {
            quadrature_points,
            components: components.iter().map(monomials).collect(),
        },
        OneForm::Su2(components) => SmoothDoc::Su2 {
            quadrature_points,
            components: components
                .iter()
                .map(|c| [monomials(&c[0]), monomials(&c[1]), monomials(&c[2])])
                .collect(),
        },
    })
}
