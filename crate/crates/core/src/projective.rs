//! Graph refinements and the restriction maps they induce between spaces of
//! connections. Evaluation commuting with restriction is the computable face
//! of the projective structure on generalized connections.

use std::collections::HashMap;
use std::sync::Arc;

use rand::Rng;

use crate::connection::GeneralizedConnection;
use crate::error::{Error, Result};
use crate::groupoid::{
    check_same_graph, reduce, EdgeIndex, EmbeddedGraph, Orientation, OrientedEdge, PathWord,
    SignedEdge, Vertex, VertexIndex,
};

/// Tolerance for a requested subdivision point to count as lying on a polyline.
pub const ON_POLYLINE: f64 = 1e-9;

/// A coarse graph presented inside a finer one: every coarse edge expands to
/// a non-trivial reduced path of the fine graph.
#[derive(Debug, Clone)]
pub struct Refinement {
    coarse: Arc<EmbeddedGraph>,
    fine: Arc<EmbeddedGraph>,
    expansion: Vec<PathWord>,
    vertex_inclusion: Vec<VertexIndex>,
}

impl Refinement {
    pub fn new(
        coarse: &Arc<EmbeddedGraph>,
        fine: &Arc<EmbeddedGraph>,
        expansion: Vec<PathWord>,
        vertex_inclusion: Vec<VertexIndex>,
    ) -> Result<Self> {
        let bad = |why: String| Error::InvalidRefinement(why);
        if vertex_inclusion.len() != coarse.vertex_count() {
            return Err(bad("vertex inclusion must cover every coarse vertex".into()));
        }
        let mut hit = vec![false; fine.vertex_count()];
        for v in &vertex_inclusion {
            if v.0 >= hit.len() || std::mem::replace(&mut hit[v.0], true) {
                return Err(bad("vertex inclusion is not injective".into()));
            }
        }
        if expansion.len() != coarse.edge_count() {
            return Err(bad("expansion must cover every coarse edge".into()));
        }
        for (e, word) in coarse.edge_indices().zip(&expansion) {
            let id = &coarse.edge(e).id;
            check_same_graph(word.graph(), fine)?;
            if word.is_identity() {
                return Err(bad(format!("expansion of `{id}` is an identity")));
            }
            if word.source() != vertex_inclusion[coarse.source_of(e).0]
                || word.target() != vertex_inclusion[coarse.target_of(e).0]
            {
                return Err(bad(format!("expansion of `{id}` has the wrong endpoints")));
            }
        }
        Ok(Self {
            coarse: Arc::clone(coarse),
            fine: Arc::clone(fine),
            expansion,
            vertex_inclusion,
        })
    }

    /// Builds from ids: expansion literals per coarse edge and vertex pairs.
    pub fn from_ids(
        coarse: &Arc<EmbeddedGraph>,
        fine: &Arc<EmbeddedGraph>,
        expansion: &HashMap<String, String>,
        vertex_pairs: &[(String, String)],
    ) -> Result<Self> {
        let mut inclusion = vec![None; coarse.vertex_count()];
        for (c, f) in vertex_pairs {
            if inclusion[coarse.vertex_index(c)?.0]
                .replace(fine.vertex_index(f)?)
                .is_some()
            {
                return Err(Error::InvalidRefinement(format!(
                    "vertex `{c}` included twice"
                )));
            }
        }
        let inclusion = inclusion
            .into_iter()
            .enumerate()
            .map(|(i, v)| {
                v.ok_or_else(|| {
                    Error::InvalidRefinement(format!(
                        "vertex `{}` not included",
                        coarse.vertices()[i].id
                    ))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        for id in expansion.keys() {
            coarse.edge_index(id)?;
        }
        let words = coarse
            .edges()
            .iter()
            .map(|e| {
                let literal = expansion.get(&e.id).ok_or_else(|| {
                    Error::InvalidRefinement(format!("edge `{}` has no expansion", e.id))
                })?;
                PathWord::parse(fine, literal)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(coarse, fine, words, inclusion)
    }

    pub fn identity(graph: &Arc<EmbeddedGraph>) -> Self {
        Self {
            coarse: Arc::clone(graph),
            fine: Arc::clone(graph),
            expansion: graph
                .edge_indices()
                .map(|e| PathWord::edge(graph, SignedEdge::forward(e)).expect("edge exists"))
                .collect(),
            vertex_inclusion: graph.vertex_indices().collect(),
        }
    }

    pub fn coarse(&self) -> &Arc<EmbeddedGraph> {
        &self.coarse
    }

    pub fn fine(&self) -> &Arc<EmbeddedGraph> {
        &self.fine
    }

    pub fn expansion(&self, e: EdgeIndex) -> &PathWord {
        &self.expansion[e.0]
    }

    pub fn vertex_inclusion(&self, v: VertexIndex) -> VertexIndex {
        self.vertex_inclusion[v.0]
    }

    /// Image of a coarse path in the fine groupoid.
    pub fn expand_path(&self, p: &PathWord) -> Result<PathWord> {
        check_same_graph(&self.coarse, p.graph())?;
        let mut letters = Vec::new();
        for &l in p.letters() {
            let word = &self.expansion[l.edge.0];
            match l.orientation {
                Orientation::Forward => letters.extend_from_slice(word.letters()),
                Orientation::Reverse => {
                    letters.extend(word.letters().iter().rev().map(|x| x.inverse()))
                }
            }
        }
        reduce(&self.fine, &letters, self.vertex_inclusion[p.source().0])
    }

    /// Refines further: `self` goes coarse → mid, `next` mid → fine.
    pub fn then(&self, next: &Refinement) -> Result<Refinement> {
        check_same_graph(&self.fine, &next.coarse)?;
        let expansion = self
            .expansion
            .iter()
            .map(|w| next.expand_path(w))
            .collect::<Result<Vec<_>>>()?;
        let inclusion = self
            .vertex_inclusion
            .iter()
            .map(|v| next.vertex_inclusion[v.0])
            .collect();
        Refinement::new(&self.coarse, &next.fine, expansion, inclusion)
    }

    /// Coarse connection whose value on `e` is the fine holonomy of its
    /// expansion.
    pub fn restrict(&self, fine_conn: &GeneralizedConnection) -> Result<GeneralizedConnection> {
        check_same_graph(&self.fine, fine_conn.graph())?;
        let assignment = self
            .expansion
            .iter()
            .map(|w| fine_conn.holonomy(w))
            .collect::<Result<Vec<_>>>()?;
        GeneralizedConnection::new(&self.coarse, *fine_conn.descriptor(), assignment)
    }

    /// A fine connection restricting to `coarse_conn`: every fine edge is Haar
    /// sampled, then one private letter per expansion is solved for.
    ///
    /// Needs, for each coarse edge, a fine edge used exactly once across all
    /// expansions. Subdivisions, edge additions and their composites have one.
    pub fn section<R: Rng + ?Sized>(
        &self,
        coarse_conn: &GeneralizedConnection,
        rng: &mut R,
    ) -> Result<GeneralizedConnection> {
        check_same_graph(&self.coarse, coarse_conn.graph())?;
        let descriptor = *coarse_conn.descriptor();
        let mut uses = vec![0usize; self.fine.edge_count()];
        for w in &self.expansion {
            for l in w.letters() {
                uses[l.edge.0] += 1;
            }
        }
        let mut values: Vec<_> = (0..self.fine.edge_count())
            .map(|_| descriptor.haar_sample(rng))
            .collect();
        for (e, word) in self.expansion.iter().enumerate() {
            let letters = word.letters();
            let pivot = letters
                .iter()
                .position(|l| uses[l.edge.0] == 1)
                .ok_or_else(|| {
                    Error::InvalidRefinement(format!(
                        "expansion of `{}` has no private edge to solve for",
                        self.coarse.edges()[e].id
                    ))
                })?;
            let value_of = |l: &SignedEdge, values: &[crate::GroupElement]| match l.orientation {
                Orientation::Forward => values[l.edge.0],
                Orientation::Reverse => values[l.edge.0].inverse(),
            };
            // holonomy = after · x · before
            let before = letters[..pivot]
                .iter()
                .try_fold(descriptor.identity(), |acc, l| {
                    value_of(l, &values).multiply(&acc)
                })?;
            let after = letters[pivot + 1..]
                .iter()
                .try_fold(descriptor.identity(), |acc, l| {
                    value_of(l, &values).multiply(&acc)
                })?;
            let x = after
                .inverse()
                .multiply(coarse_conn.value(EdgeIndex(e)))?
                .multiply(&before.inverse())?;
            let l = letters[pivot];
            values[l.edge.0] = match l.orientation {
                Orientation::Forward => x,
                Orientation::Reverse => x.inverse(),
            };
        }
        GeneralizedConnection::new(&self.fine, descriptor, values)
    }

    /// Compares evaluation on the restricted connection with evaluation of
    /// the expanded path on the fine connection.
    pub fn check_consistency(
        &self,
        fine_conn: &GeneralizedConnection,
        sample_paths: &[PathWord],
    ) -> ConsistencyReport {
        let mut report = ConsistencyReport::default();
        let coarse_conn = match self.restrict(fine_conn) {
            Ok(c) => c,
            Err(err) => {
                report
                    .failures
                    .push(("<restriction>".into(), err.to_string()));
                return report;
            }
        };
        for p in sample_paths {
            let outcome = (|| {
                let lhs = coarse_conn.holonomy(p)?;
                let rhs = fine_conn.holonomy(&self.expand_path(p)?)?;
                lhs.distance(&rhs)
            })();
            match outcome {
                Ok(deviation) => {
                    report.max_deviation = report.max_deviation.max(deviation);
                    report.entries.push((p.to_string(), deviation));
                }
                Err(err) => report.failures.push((p.to_string(), err.to_string())),
            }
        }
        report
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConsistencyReport {
    /// `(coarse path literal, deviation)` per checked path.
    pub entries: Vec<(String, f64)>,
    /// Paths that could not be evaluated, with the reason.
    pub failures: Vec<(String, String)>,
    pub max_deviation: f64,
}

impl ConsistencyReport {
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty() && self.failures.is_empty()
    }

    pub fn passed(&self, tolerance: f64) -> bool {
        self.failures.is_empty() && self.max_deviation <= tolerance
    }
}

pub fn restrict(
    refinement: &Refinement,
    fine_conn: &GeneralizedConnection,
) -> Result<GeneralizedConnection> {
    refinement.restrict(fine_conn)
}

pub fn check_consistency(
    refinement: &Refinement,
    fine_conn: &GeneralizedConnection,
    sample_paths: &[PathWord],
) -> ConsistencyReport {
    refinement.check_consistency(fine_conn, sample_paths)
}

/// The vertex inserted by a subdivision. Without a position, an edge with
/// geometry is split at its arc-length midpoint.
#[derive(Debug, Clone, PartialEq)]
pub struct NewVertex {
    pub id: String,
    pub position: Option<Vec<f64>>,
}

impl NewVertex {
    pub fn named(id: impl Into<String>) -> Self {
        Self {
            id: id.into(),
            position: None,
        }
    }
}

/// Replaces `e: x → y` by `e_a: x → m` and `e_b: m → y`.
pub fn subdivide_edge(
    graph: &Arc<EmbeddedGraph>,
    edge_id: &str,
    new_vertex: NewVertex,
) -> Result<(Arc<EmbeddedGraph>, Refinement)> {
    let e = graph.edge_index(edge_id)?;
    let old = graph.edge(e);
    let (first_line, second_line, position) = match &old.geometry {
        Some(line) => {
            let point = match &new_vertex.position {
                Some(p) => p.clone(),
                None => arc_length_point(line, 0.5),
            };
            let (a, b) = split_polyline(line, &point).ok_or_else(|| {
                Error::InvalidRefinement(format!(
                    "new vertex `{}` does not lie on edge `{edge_id}`",
                    new_vertex.id
                ))
            })?;
            (Some(a), Some(b), Some(point))
        }
        None => (None, None, new_vertex.position.clone()),
    };

    let mut vertices: Vec<Vertex> = graph.vertices().to_vec();
    vertices.push(Vertex {
        id: new_vertex.id.clone(),
        position,
    });
    let first_id = format!("{edge_id}_a");
    let second_id = format!("{edge_id}_b");
    let mut edges = Vec::with_capacity(graph.edge_count() + 1);
    for (i, edge) in graph.edges().iter().enumerate() {
        if i == e.0 {
            edges.push(OrientedEdge {
                id: first_id.clone(),
                source: edge.source.clone(),
                target: new_vertex.id.clone(),
                geometry: first_line.clone(),
            });
            edges.push(OrientedEdge {
                id: second_id.clone(),
                source: new_vertex.id.clone(),
                target: edge.target.clone(),
                geometry: second_line.clone(),
            });
        } else {
            edges.push(edge.clone());
        }
    }
    let fine = Arc::new(EmbeddedGraph::new(
        format!("{}/{}", graph.id(), new_vertex.id),
        vertices,
        edges,
    )?);
    let mut expansion = HashMap::new();
    for edge in graph.edges() {
        let literal = if edge.id == edge_id {
            format!("{first_id},{second_id}")
        } else {
            edge.id.clone()
        };
        expansion.insert(edge.id.clone(), literal);
    }
    let pairs: Vec<(String, String)> = graph
        .vertices()
        .iter()
        .map(|v| (v.id.clone(), v.id.clone()))
        .collect();
    let refinement = Refinement::from_ids(graph, &fine, &expansion, &pairs)?;
    Ok((fine, refinement))
}

/// Adds one edge (and any vertices it needs); old edges expand to themselves.
pub fn add_edge(
    graph: &Arc<EmbeddedGraph>,
    new_vertices: Vec<Vertex>,
    edge: OrientedEdge,
) -> Result<(Arc<EmbeddedGraph>, Refinement)> {
    let mut vertices = graph.vertices().to_vec();
    vertices.extend(new_vertices);
    let mut edges = graph.edges().to_vec();
    let id = edge.id.clone();
    edges.push(edge);
    let fine = Arc::new(EmbeddedGraph::new(
        format!("{}+{}", graph.id(), id),
        vertices,
        edges,
    )?);
    let expansion = graph
        .edges()
        .iter()
        .map(|e| (e.id.clone(), e.id.clone()))
        .collect();
    let pairs: Vec<(String, String)> = graph
        .vertices()
        .iter()
        .map(|v| (v.id.clone(), v.id.clone()))
        .collect();
    let refinement = Refinement::from_ids(graph, &fine, &expansion, &pairs)?;
    Ok((fine, refinement))
}

pub fn polyline_length(line: &[Vec<f64>]) -> f64 {
    line.windows(2).map(|w| distance(&w[0], &w[1])).sum()
}

fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Point at fraction `s` of the arc length.
fn arc_length_point(line: &[Vec<f64>], s: f64) -> Vec<f64> {
    let goal = s * polyline_length(line);
    let mut walked = 0.0;
    for w in line.windows(2) {
        let len = distance(&w[0], &w[1]);
        if walked + len >= goal && len > 0.0 {
            let t = (goal - walked) / len;
            return w[0]
                .iter()
                .zip(&w[1])
                .map(|(a, b)| a + (b - a) * t)
                .collect();
        }
        walked += len;
    }
    line[line.len() - 1].clone()
}

type Polyline = Vec<Vec<f64>>;

/// Splits a polyline at a point lying on it (within `ON_POLYLINE`).
fn split_polyline(line: &[Vec<f64>], point: &[f64]) -> Option<(Polyline, Polyline)> {
    if point.len() != line[0].len() {
        return None;
    }
    for (i, w) in line.windows(2).enumerate() {
        let (a, b) = (&w[0], &w[1]);
        let ab: Vec<f64> = a.iter().zip(b).map(|(x, y)| y - x).collect();
        let len2: f64 = ab.iter().map(|x| x * x).sum();
        let t = if len2 == 0.0 {
            0.0
        } else {
            (point
                .iter()
                .zip(a)
                .zip(&ab)
                .map(|((p, x), d)| (p - x) * d)
                .sum::<f64>()
                / len2)
                .clamp(0.0, 1.0)
        };
        let nearest: Vec<f64> = a.iter().zip(&ab).map(|(x, d)| x + d * t).collect();
        if distance(&nearest, point) <= ON_POLYLINE {
            let mut first: Vec<Vec<f64>> = line[..=i].to_vec();
            first.push(point.to_vec());
            let mut second = vec![point.to_vec()];
            second.extend_from_slice(&line[i + 1..]);
            return Some((first, second));
        }
    }
    None
}
