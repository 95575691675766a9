//! The path groupoid generated by a finite embedded graph.
//!
//! Vertices are the objects. Arrows are reduced words of signed edges:
//! curves that agree up to retracings `c⁻¹c` and reparametrization collapse
//! to the same word, so a word carries no parametrization at all.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::sync::Arc;

use rand::Rng;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexIndex(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeIndex(pub usize);

#[derive(Debug, Clone, PartialEq)]
pub struct Vertex {
    pub id: String,
    pub position: Option<Vec<f64>>,
}

impl Vertex {
    pub fn new(id: impl Into<String>) -> Self {
        Self {
            id: id.into(),
            position: None,
        }
    }

    pub fn at(id: impl Into<String>, position: Vec<f64>) -> Self {
        Self {
            id: id.into(),
            position: Some(position),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OrientedEdge {
    pub id: String,
    pub source: String,
    pub target: String,
    /// Polyline from the source position to the target position.
    pub geometry: Option<Vec<Vec<f64>>>,
}

impl OrientedEdge {
    pub fn new(
        id: impl Into<String>,
        source: impl Into<String>,
        target: impl Into<String>,
    ) -> Self {
        Self {
            id: id.into(),
            source: source.into(),
            target: target.into(),
            geometry: None,
        }
    }

    pub fn with_geometry(mut self, polyline: Vec<Vec<f64>>) -> Self {
        self.geometry = Some(polyline);
        self
    }
}

/// A finite graph whose edges generate a subgroupoid of the path groupoid.
#[derive(Debug, Clone)]
pub struct EmbeddedGraph {
    id: String,
    vertices: Vec<Vertex>,
    edges: Vec<OrientedEdge>,
    vertex_lookup: HashMap<String, VertexIndex>,
    edge_lookup: HashMap<String, EdgeIndex>,
    ends: Vec<(VertexIndex, VertexIndex)>,
}

const GEOMETRY_MATCH: f64 = 1e-9;

impl EmbeddedGraph {
    pub fn new(
        id: impl Into<String>,
        vertices: Vec<Vertex>,
        edges: Vec<OrientedEdge>,
    ) -> Result<Self> {
        let id = id.into();
        let mut vertex_lookup = HashMap::with_capacity(vertices.len());
        for (i, v) in vertices.iter().enumerate() {
            if vertex_lookup.insert(v.id.clone(), VertexIndex(i)).is_some() {
                return Err(Error::InvalidGraph(format!(
                    "duplicate vertex id `{}`",
                    v.id
                )));
            }
        }
        let dims: HashSet<usize> = vertices
            .iter()
            .filter_map(|v| v.position.as_ref().map(Vec::len))
            .collect();
        if dims.len() > 1 {
            return Err(Error::InvalidGraph(
                "vertex positions have mixed dimensions".into(),
            ));
        }
        let mut edge_lookup = HashMap::with_capacity(edges.len());
        let mut ends = Vec::with_capacity(edges.len());
        for (i, e) in edges.iter().enumerate() {
            if edge_lookup.insert(e.id.clone(), EdgeIndex(i)).is_some() {
                return Err(Error::InvalidGraph(format!("duplicate edge id `{}`", e.id)));
            }
            let s = *vertex_lookup.get(&e.source).ok_or_else(|| {
                Error::InvalidGraph(format!("edge `{}` has unknown source `{}`", e.id, e.source))
            })?;
            let t = *vertex_lookup.get(&e.target).ok_or_else(|| {
                Error::InvalidGraph(format!("edge `{}` has unknown target `{}`", e.id, e.target))
            })?;
            if let Some(line) = &e.geometry {
                check_polyline(e, line, &vertices[s.0], &vertices[t.0])?;
            }
            ends.push((s, t));
        }
        Ok(Self {
            id,
            vertices,
            edges,
            vertex_lookup,
            edge_lookup,
            ends,
        })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[OrientedEdge] {
        &self.edges
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex(&self, v: VertexIndex) -> &Vertex {
        &self.vertices[v.0]
    }

    pub fn edge(&self, e: EdgeIndex) -> &OrientedEdge {
        &self.edges[e.0]
    }

    pub fn vertex_index(&self, id: &str) -> Result<VertexIndex> {
        self.vertex_lookup
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownVertex(id.to_string()))
    }

    pub fn edge_index(&self, id: &str) -> Result<EdgeIndex> {
        self.edge_lookup
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownGenerator(id.to_string()))
    }

    pub fn source_of(&self, e: EdgeIndex) -> VertexIndex {
        self.ends[e.0].0
    }

    pub fn target_of(&self, e: EdgeIndex) -> VertexIndex {
        self.ends[e.0].1
    }

    pub fn vertex_indices(&self) -> impl Iterator<Item = VertexIndex> {
        (0..self.vertices.len()).map(VertexIndex)
    }

    pub fn edge_indices(&self) -> impl Iterator<Item = EdgeIndex> {
        (0..self.edges.len()).map(EdgeIndex)
    }

    /// Letters that can be traversed starting at `v`: outgoing edges forward,
    /// incoming edges reversed. A self-loop contributes both.
    pub fn letters_from(&self, v: VertexIndex) -> Vec<SignedEdge> {
        let mut out = Vec::new();
        for e in self.edge_indices() {
            let (s, t) = self.ends[e.0];
            if s == v {
                out.push(SignedEdge::forward(e));
            }
            if t == v {
                out.push(SignedEdge::reverse(e));
            }
        }
        out
    }

    /// Shortest undirected route between two vertices, as chained letters.
    pub fn route(&self, from: VertexIndex, to: VertexIndex) -> Option<Vec<SignedEdge>> {
        let mut previous: Vec<Option<(VertexIndex, SignedEdge)>> = vec![None; self.vertex_count()];
        let mut seen = vec![false; self.vertex_count()];
        let mut queue = VecDeque::from([from]);
        seen[from.0] = true;
        while let Some(v) = queue.pop_front() {
            if v == to {
                let mut letters = Vec::new();
                let mut cur = to;
                while let Some((prev, letter)) = previous[cur.0] {
                    letters.push(letter);
                    cur = prev;
                }
                letters.reverse();
                return Some(letters);
            }
            for letter in self.letters_from(v) {
                let next = letter.end(self);
                if !seen[next.0] {
                    seen[next.0] = true;
                    previous[next.0] = Some((v, letter));
                    queue.push_back(next);
                }
            }
        }
        None
    }

    pub fn has_geometry(&self) -> bool {
        self.edges.iter().all(|e| e.geometry.is_some())
    }
}

impl PartialEq for EmbeddedGraph {
    fn eq(&self, other: &Self) -> bool {
        self.id == other.id && self.vertices == other.vertices && self.edges == other.edges
    }
}

fn check_polyline(e: &OrientedEdge, line: &[Vec<f64>], s: &Vertex, t: &Vertex) -> Result<()> {
    let bad = |why: &str| Error::InvalidGraph(format!("edge `{}`: {why}", e.id));
    if line.len() < 2 {
        return Err(bad("polyline needs at least two points"));
    }
    let (Some(ps), Some(pt)) = (&s.position, &t.position) else {
        return Err(bad("geometry requires positioned endpoints"));
    };
    if line.iter().any(|p| p.len() != ps.len()) {
        return Err(bad("polyline dimension differs from vertex positions"));
    }
    let close = |a: &[f64], b: &[f64]| {
        a.iter()
            .zip(b)
            .all(|(x, y)| (x - y).abs() <= GEOMETRY_MATCH)
    };
    if !close(&line[0], ps) || !close(&line[line.len() - 1], pt) {
        return Err(bad("polyline endpoints do not match vertex positions"));
    }
    Ok(())
}

pub(crate) fn same_graph(a: &Arc<EmbeddedGraph>, b: &Arc<EmbeddedGraph>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

pub(crate) fn check_same_graph(a: &Arc<EmbeddedGraph>, b: &Arc<EmbeddedGraph>) -> Result<()> {
    if same_graph(a, b) {
        Ok(())
    } else {
        Err(Error::GraphMismatch {
            left: a.id().to_string(),
            right: b.id().to_string(),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Orientation {
    Forward,
    Reverse,
}

impl Orientation {
    pub fn flip(self) -> Self {
        match self {
            Orientation::Forward => Orientation::Reverse,
            Orientation::Reverse => Orientation::Forward,
        }
    }

    /// Sign product: reversing twice is forward.
    pub fn then(self, other: Orientation) -> Self {
        if self == other {
            Orientation::Forward
        } else {
            Orientation::Reverse
        }
    }
}

/// A generator `e` or its formal inverse `e⁻¹`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignedEdge {
    pub edge: EdgeIndex,
    pub orientation: Orientation,
}

impl SignedEdge {
    pub fn forward(edge: EdgeIndex) -> Self {
        Self {
            edge,
            orientation: Orientation::Forward,
        }
    }

    pub fn reverse(edge: EdgeIndex) -> Self {
        Self {
            edge,
            orientation: Orientation::Reverse,
        }
    }

    pub fn inverse(self) -> Self {
        Self {
            edge: self.edge,
            orientation: self.orientation.flip(),
        }
    }

    pub fn is_inverse_of(self, other: SignedEdge) -> bool {
        self.edge == other.edge && self.orientation != other.orientation
    }

    pub fn start(self, graph: &EmbeddedGraph) -> VertexIndex {
        match self.orientation {
            Orientation::Forward => graph.source_of(self.edge),
            Orientation::Reverse => graph.target_of(self.edge),
        }
    }

    pub fn end(self, graph: &EmbeddedGraph) -> VertexIndex {
        match self.orientation {
            Orientation::Forward => graph.target_of(self.edge),
            Orientation::Reverse => graph.source_of(self.edge),
        }
    }

    fn literal(self, graph: &EmbeddedGraph) -> String {
        let id = &graph.edge(self.edge).id;
        match self.orientation {
            Orientation::Forward => id.clone(),
            Orientation::Reverse => format!("{id}^-1"),
        }
    }
}

/// A path: a reduced, chained word of signed edges. The empty word is the
/// identity `1_base`.
#[derive(Debug, Clone)]
pub struct PathWord {
    graph: Arc<EmbeddedGraph>,
    letters: Vec<SignedEdge>,
    base: VertexIndex,
}

impl PartialEq for PathWord {
    fn eq(&self, other: &Self) -> bool {
        self.base == other.base
            && self.letters == other.letters
            && same_graph(&self.graph, &other.graph)
    }
}

/// Reduces a chained raw word by cancelling adjacent inverse pairs.
///
/// `base` must be the start of the first letter (any vertex for the empty
/// word). One left-to-right pass with a stack; free reduction is confluent so
/// the result does not depend on the cancellation order.
pub fn reduce(
    graph: &Arc<EmbeddedGraph>,
    letters: &[SignedEdge],
    base: VertexIndex,
) -> Result<PathWord> {
    if base.0 >= graph.vertex_count() {
        return Err(Error::UnknownVertex(format!("#{}", base.0)));
    }
    let mut at = base;
    let mut stack: Vec<SignedEdge> = Vec::with_capacity(letters.len());
    for (position, &letter) in letters.iter().enumerate() {
        if letter.edge.0 >= graph.edge_count() {
            return Err(Error::UnknownGenerator(format!("#{}", letter.edge.0)));
        }
        let start = letter.start(graph);
        if start != at {
            return Err(Error::BrokenPath {
                position,
                expected: graph.vertex(at).id.clone(),
                found: graph.vertex(start).id.clone(),
            });
        }
        at = letter.end(graph);
        match stack.last() {
            Some(&top) if top.is_inverse_of(letter) => {
                stack.pop();
            }
            _ => stack.push(letter),
        }
    }
    Ok(PathWord {
        graph: Arc::clone(graph),
        letters: stack,
        base,
    })
}

impl PathWord {
    pub fn identity(graph: &Arc<EmbeddedGraph>, vertex: VertexIndex) -> Self {
        Self {
            graph: Arc::clone(graph),
            letters: Vec::new(),
            base: vertex,
        }
    }

    /// Path traversing a single generator.
    pub fn edge(graph: &Arc<EmbeddedGraph>, letter: SignedEdge) -> Result<Self> {
        if letter.edge.0 >= graph.edge_count() {
            return Err(Error::UnknownGenerator(format!("#{}", letter.edge.0)));
        }
        Ok(Self {
            graph: Arc::clone(graph),
            letters: vec![letter],
            base: letter.start(graph),
        })
    }

    /// Reduces an arbitrary chained raw word; `base` is inferred from the
    /// first letter unless the word is empty.
    pub fn from_letters(
        graph: &Arc<EmbeddedGraph>,
        letters: &[SignedEdge],
        base: Option<VertexIndex>,
    ) -> Result<Self> {
        let base = match (letters.first(), base) {
            (Some(first), _) if first.edge.0 < graph.edge_count() => first.start(graph),
            (Some(first), _) => return Err(Error::UnknownGenerator(format!("#{}", first.edge.0))),
            (None, Some(b)) => b,
            (None, None) => {
                return Err(Error::PathLiteral {
                    column: 1,
                    reason: "the empty word needs a base vertex".into(),
                })
            }
        };
        reduce(graph, letters, base)
    }

    pub fn graph(&self) -> &Arc<EmbeddedGraph> {
        &self.graph
    }

    pub fn letters(&self) -> &[SignedEdge] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn source(&self) -> VertexIndex {
        self.base
    }

    pub fn target(&self) -> VertexIndex {
        self.letters
            .last()
            .map_or(self.base, |l| l.end(&self.graph))
    }

    pub fn is_closed(&self) -> bool {
        self.source() == self.target()
    }

    /// `self ∘ first`: traverses `first`, then `self`.
    pub fn compose(&self, first: &PathWord) -> Result<PathWord> {
        check_same_graph(&self.graph, &first.graph)?;
        if first.target() != self.source() {
            return Err(Error::NonComposable {
                target: self.graph.vertex(first.target()).id.clone(),
                source_vertex: self.graph.vertex(self.source()).id.clone(),
            });
        }
        let mut letters = Vec::with_capacity(first.len() + self.len());
        letters.extend_from_slice(&first.letters);
        letters.extend_from_slice(&self.letters);
        reduce(&self.graph, &letters, first.base)
    }

    /// Letters reversed with orientations flipped.
    pub fn inverse(&self) -> PathWord {
        PathWord {
            graph: Arc::clone(&self.graph),
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
            base: self.target(),
        }
    }

    /// Parses `e1,e2^-1,e3` or `@x` (identity at `x`). Raw words are reduced.
    pub fn parse(graph: &Arc<EmbeddedGraph>, literal: &str) -> Result<PathWord> {
        let trimmed = literal.trim();
        let offset = literal.len() - literal.trim_start().len();
        if let Some(vertex) = trimmed.strip_prefix('@') {
            let v = graph
                .vertex_index(vertex.trim())
                .map_err(|_| Error::PathLiteral {
                    column: offset + 2,
                    reason: format!("unknown vertex `{}`", vertex.trim()),
                })?;
            return Ok(PathWord::identity(graph, v));
        }
        if trimmed.is_empty() {
            return Err(Error::PathLiteral {
                column: 1,
                reason: "empty literal; write `@vertex` for an identity".into(),
            });
        }
        let mut letters = Vec::new();
        let mut column = offset + 1;
        for token in trimmed.split(',') {
            let lead = token.len() - token.trim_start().len();
            let name = token.trim();
            let (id, orientation) = match name.strip_suffix("^-1") {
                Some(id) => (id.trim(), Orientation::Reverse),
                None => (name, Orientation::Forward),
            };
            if id.is_empty() {
                return Err(Error::PathLiteral {
                    column: column + lead,
                    reason: "missing edge id".into(),
                });
            }
            let edge = graph.edge_index(id).map_err(|_| Error::PathLiteral {
                column: column + lead,
                reason: format!("unknown generator `{id}`"),
            })?;
            letters.push(SignedEdge { edge, orientation });
            column += token.len() + 1;
        }
        PathWord::from_letters(graph, &letters, None)
    }
}

/// Identity words print as `@x`, others as comma-separated signed ids.
impl fmt::Display for PathWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "@{}", self.graph.vertex(self.base).id);
        }
        let parts: Vec<String> = self
            .letters
            .iter()
            .map(|l| l.literal(&self.graph))
            .collect();
        f.write_str(&parts.join(","))
    }
}

/// Composes `p2 ∘ p1` (traverse `p1` first).
pub fn compose(p2: &PathWord, p1: &PathWord) -> Result<PathWord> {
    p2.compose(p1)
}

pub fn inverse_path(p: &PathWord) -> PathWord {
    p.inverse()
}

/// Random graphs and words for property checks and suites.
pub mod random {
    use super::*;

    /// Random graph on `vertices` vertices; connected whenever
    /// `edges + 1 >= vertices`. Self-loops and parallel edges occur.
    pub fn random_graph<R: Rng + ?Sized>(
        rng: &mut R,
        id: &str,
        vertices: usize,
        edges: usize,
    ) -> Arc<EmbeddedGraph> {
        assert!(vertices > 0, "a graph needs at least one vertex");
        let vs: Vec<Vertex> = (0..vertices)
            .map(|i| Vertex::new(format!("v{i}")))
            .collect();
        let mut es = Vec::with_capacity(edges);
        for i in 0..edges {
            let (a, b) = if i + 1 < vertices {
                (rng.random_range(0..=i), i + 1)
            } else {
                (rng.random_range(0..vertices), rng.random_range(0..vertices))
            };
            let (s, t) = if rng.random_bool(0.5) { (a, b) } else { (b, a) };
            es.push(OrientedEdge::new(
                format!("e{i}"),
                format!("v{s}"),
                format!("v{t}"),
            ));
        }
        Arc::new(EmbeddedGraph::new(id, vs, es).expect("generated graph is valid"))
    }

    /// Random walk of length at most `max_len` from a random vertex; the walk
    /// may retrace itself. Returns the raw letters and the start vertex.
    pub fn random_raw_word<R: Rng + ?Sized>(
        rng: &mut R,
        graph: &EmbeddedGraph,
        max_len: usize,
    ) -> (Vec<SignedEdge>, VertexIndex) {
        let start = VertexIndex(rng.random_range(0..graph.vertex_count()));
        let len = rng.random_range(0..=max_len);
        (walk(rng, graph, start, len), start)
    }

    pub fn walk<R: Rng + ?Sized>(
        rng: &mut R,
        graph: &EmbeddedGraph,
        start: VertexIndex,
        len: usize,
    ) -> Vec<SignedEdge> {
        let mut at = start;
        let mut letters = Vec::with_capacity(len);
        for _ in 0..len {
            let options = graph.letters_from(at);
            if options.is_empty() {
                break;
            }
            let letter = options[rng.random_range(0..options.len())];
            at = letter.end(graph);
            letters.push(letter);
        }
        letters
    }

    /// Inserts `count` retracing pairs `x x⁻¹` at random chain-compatible
    /// positions. Leaves the word unchanged on an edgeless graph.
    pub fn insert_retracings<R: Rng + ?Sized>(
        rng: &mut R,
        graph: &EmbeddedGraph,
        letters: &[SignedEdge],
        base: VertexIndex,
        count: usize,
    ) -> Vec<SignedEdge> {
        let mut word = letters.to_vec();
        for _ in 0..count {
            let position = rng.random_range(0..=word.len());
            let at = if position == 0 {
                base
            } else {
                word[position - 1].end(graph)
            };
            let options = graph.letters_from(at);
            if options.is_empty() {
                continue;
            }
            let x = options[rng.random_range(0..options.len())];
            word.splice(position..position, [x, x.inverse()]);
        }
        word
    }

    pub fn random_path<R: Rng + ?Sized>(
        rng: &mut R,
        graph: &Arc<EmbeddedGraph>,
        max_len: usize,
    ) -> PathWord {
        let (letters, base) = random_raw_word(rng, graph, max_len);
        reduce(graph, &letters, base).expect("walks are chained")
    }

    /// Random path starting at `start`.
    pub fn random_path_from<R: Rng + ?Sized>(
        rng: &mut R,
        graph: &Arc<EmbeddedGraph>,
        start: VertexIndex,
        max_len: usize,
    ) -> PathWord {
        let len = rng.random_range(0..=max_len);
        let letters = walk(rng, graph, start, len);
        reduce(graph, &letters, start).expect("walks are chained")
    }

    /// Random closed path at a random vertex: a walk followed by the shortest
    /// route home. Falls back to an identity on disconnected graphs.
    pub fn random_loop<R: Rng + ?Sized>(
        rng: &mut R,
        graph: &Arc<EmbeddedGraph>,
        max_len: usize,
    ) -> PathWord {
        let start = VertexIndex(rng.random_range(0..graph.vertex_count()));
        let len = rng.random_range(0..=max_len);
        let mut letters = walk(rng, graph, start, len);
        let end = letters.last().map_or(start, |l| l.end(graph));
        match graph.route(end, start) {
            Some(back) => letters.extend(back),
            None => letters.clear(),
        }
        reduce(graph, &letters, start).expect("walks are chained")
    }

    /// A composable pair `(p2, p1)` with `source(p2) = target(p1)`.
    pub fn random_composable_pair<R: Rng + ?Sized>(
        rng: &mut R,
        graph: &Arc<EmbeddedGraph>,
        max_len: usize,
    ) -> (PathWord, PathWord) {
        let p1 = random_path(rng, graph, max_len);
        let p2 = random_path_from(rng, graph, p1.target(), max_len);
        (p2, p1)
    }
}

/// Standard graphs used by tests, suites and examples.
pub mod builders {
    use super::*;

    /// Planar `nx × ny` grid of vertices at integer coordinates with straight
    /// edges pointing in the +x and +y directions.
    pub fn grid(nx: usize, ny: usize) -> Arc<EmbeddedGraph> {
        let name = |i: usize, j: usize| format!("v{i}_{j}");
        let mut vs = Vec::new();
        for j in 0..ny {
            for i in 0..nx {
                vs.push(Vertex::at(name(i, j), vec![i as f64, j as f64]));
            }
        }
        let mut es = Vec::new();
        for j in 0..ny {
            for i in 0..nx {
                let here = vec![i as f64, j as f64];
                if i + 1 < nx {
                    es.push(
                        OrientedEdge::new(format!("x{i}_{j}"), name(i, j), name(i + 1, j))
                            .with_geometry(vec![here.clone(), vec![i as f64 + 1.0, j as f64]]),
                    );
                }
                if j + 1 < ny {
                    es.push(
                        OrientedEdge::new(format!("y{i}_{j}"), name(i, j), name(i, j + 1))
                            .with_geometry(vec![here.clone(), vec![i as f64, j as f64 + 1.0]]),
                    );
                }
            }
        }
        Arc::new(EmbeddedGraph::new(format!("grid{nx}x{ny}"), vs, es).expect("grid is valid"))
    }

    /// One vertex `x` with `loops` self-loops `l0, l1, ...`.
    pub fn bouquet(loops: usize) -> Arc<EmbeddedGraph> {
        let es = (0..loops)
            .map(|i| OrientedEdge::new(format!("l{i}"), "x", "x"))
            .collect();
        Arc::new(
            EmbeddedGraph::new(format!("bouquet{loops}"), vec![Vertex::new("x")], es)
                .expect("valid"),
        )
    }

    /// Directed cycle `v0 → v1 → … → v0` with edges `c0, c1, …`.
    pub fn cycle(n: usize) -> Arc<EmbeddedGraph> {
        let vs = (0..n).map(|i| Vertex::new(format!("v{i}"))).collect();
        let es = (0..n)
            .map(|i| {
                OrientedEdge::new(
                    format!("c{i}"),
                    format!("v{i}"),
                    format!("v{}", (i + 1) % n),
                )
            })
            .collect();
        Arc::new(EmbeddedGraph::new(format!("cycle{n}"), vs, es).expect("valid"))
    }

    /// Two vertices `x`, `y` joined by `k` parallel edges `t0, t1, …` from x to y.
    pub fn theta(k: usize) -> Arc<EmbeddedGraph> {
        let vs = vec![Vertex::new("x"), Vertex::new("y")];
        let es = (0..k)
            .map(|i| OrientedEdge::new(format!("t{i}"), "x", "y"))
            .collect();
        Arc::new(EmbeddedGraph::new(format!("theta{k}"), vs, es).expect("valid"))
    }
}
