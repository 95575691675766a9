//! The two symmetry actions on generalized connections: vertex-wise gauge
//! transformations and automorphisms of the path groupoid realized as
//! (possibly orientation-reversing) graph symmetries.

use std::collections::HashMap;
use std::sync::Arc;

use rand::Rng;

use crate::connection::GeneralizedConnection;
use crate::error::{Error, Result};
use crate::group::{GroupDescriptor, GroupElement};
use crate::groupoid::{
    check_same_graph, EmbeddedGraph, Orientation, PathWord, SignedEdge, VertexIndex,
};

/// A map from graph vertices into the structure group.
#[derive(Debug, Clone)]
pub struct GaugeTransformation {
    graph: Arc<EmbeddedGraph>,
    descriptor: GroupDescriptor,
    values: Vec<GroupElement>,
}

impl GaugeTransformation {
    /// `values[i]` sits at vertex `i`.
    pub fn new(
        graph: &Arc<EmbeddedGraph>,
        descriptor: GroupDescriptor,
        values: Vec<GroupElement>,
    ) -> Result<Self> {
        if values.len() != graph.vertex_count() {
            let missing = graph
                .vertices()
                .get(values.len())
                .map_or_else(|| "<extra value>".to_string(), |v| v.id.clone());
            return Err(Error::MissingGaugeValue(missing));
        }
        for g in &values {
            descriptor.check_same(g.descriptor())?;
        }
        Ok(Self {
            graph: Arc::clone(graph),
            descriptor,
            values,
        })
    }

    pub fn from_map(
        graph: &Arc<EmbeddedGraph>,
        descriptor: GroupDescriptor,
        values: &HashMap<String, GroupElement>,
    ) -> Result<Self> {
        for id in values.keys() {
            graph.vertex_index(id)?;
        }
        let ordered = graph
            .vertices()
            .iter()
            .map(|v| {
                values
                    .get(&v.id)
                    .copied()
                    .ok_or_else(|| Error::MissingGaugeValue(v.id.clone()))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(graph, descriptor, ordered)
    }

    pub fn identity(graph: &Arc<EmbeddedGraph>, descriptor: GroupDescriptor) -> Self {
        Self {
            graph: Arc::clone(graph),
            descriptor,
            values: vec![descriptor.identity(); graph.vertex_count()],
        }
    }

    pub fn random<R: Rng + ?Sized>(
        graph: &Arc<EmbeddedGraph>,
        descriptor: GroupDescriptor,
        rng: &mut R,
    ) -> Self {
        Self {
            graph: Arc::clone(graph),
            descriptor,
            values: (0..graph.vertex_count())
                .map(|_| descriptor.haar_sample(rng))
                .collect(),
        }
    }

    pub fn graph(&self) -> &Arc<EmbeddedGraph> {
        &self.graph
    }

    pub fn descriptor(&self) -> &GroupDescriptor {
        &self.descriptor
    }

    pub fn values(&self) -> &[GroupElement] {
        &self.values
    }

    pub fn value(&self, v: VertexIndex) -> &GroupElement {
        &self.values[v.0]
    }

    /// Pointwise product `self · first`.
    pub fn compose(&self, first: &GaugeTransformation) -> Result<GaugeTransformation> {
        check_same_graph(&self.graph, &first.graph)?;
        self.descriptor.check_same(&first.descriptor)?;
        let values = self
            .values
            .iter()
            .zip(&first.values)
            .map(|(a, b)| a.multiply(b))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            graph: Arc::clone(&self.graph),
            descriptor: self.descriptor,
            values,
        })
    }

    pub fn inverse(&self) -> GaugeTransformation {
        Self {
            graph: Arc::clone(&self.graph),
            descriptor: self.descriptor,
            values: self.values.iter().map(GroupElement::inverse).collect(),
        }
    }

    /// `Ā_g(p) = g(r(p)) Ā(p) g(s(p))⁻¹`, applied to the generators.
    pub fn act(&self, conn: &GeneralizedConnection) -> Result<GeneralizedConnection> {
        check_same_graph(&self.graph, conn.graph())?;
        self.descriptor.check_same(conn.descriptor())?;
        let graph = &self.graph;
        let assignment = graph
            .edge_indices()
            .map(|e| {
                let at_target = self.values[graph.target_of(e).0];
                let at_source = self.values[graph.source_of(e).0];
                at_target
                    .multiply(conn.value(e))?
                    .multiply(&at_source.inverse())
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(conn.with_assignment(assignment))
    }
}

pub fn gauge_act(
    g: &GaugeTransformation,
    conn: &GeneralizedConnection,
) -> Result<GeneralizedConnection> {
    g.act(conn)
}

pub fn compose_gauge(
    g2: &GaugeTransformation,
    g1: &GaugeTransformation,
) -> Result<GaugeTransformation> {
    g2.compose(g1)
}

/// Trace of the holonomy around a closed path.
pub fn wilson_loop(conn: &GeneralizedConnection, p: &PathWord) -> Result<f64> {
    if !p.is_closed() {
        let g = p.graph();
        return Err(Error::NotClosed {
            source_vertex: g.vertex(p.source()).id.clone(),
            target: g.vertex(p.target()).id.clone(),
        });
    }
    Ok(conn.holonomy(p)?.trace())
}

/// A groupoid automorphism induced by a graph symmetry: a vertex bijection
/// together with a bijection from edges to signed edges that respects
/// endpoints.
#[derive(Debug, Clone)]
pub struct GroupoidAutomorphism {
    graph: Arc<EmbeddedGraph>,
    vertex_map: Vec<VertexIndex>,
    edge_map: Vec<SignedEdge>,
}

impl PartialEq for GroupoidAutomorphism {
    fn eq(&self, other: &Self) -> bool {
        self.vertex_map == other.vertex_map
            && self.edge_map == other.edge_map
            && crate::groupoid::same_graph(&self.graph, &other.graph)
    }
}

impl GroupoidAutomorphism {
    pub fn new(
        graph: &Arc<EmbeddedGraph>,
        vertex_map: Vec<VertexIndex>,
        edge_map: Vec<SignedEdge>,
    ) -> Result<Self> {
        let bad = |why: String| Error::InvalidAutomorphism(why);
        if vertex_map.len() != graph.vertex_count() || edge_map.len() != graph.edge_count() {
            return Err(bad("maps must cover every vertex and edge".into()));
        }
        let mut hit = vec![false; graph.vertex_count()];
        for v in &vertex_map {
            if v.0 >= hit.len() || std::mem::replace(&mut hit[v.0], true) {
                return Err(bad("vertex map is not a bijection".into()));
            }
        }
        let mut hit = vec![false; graph.edge_count()];
        for l in &edge_map {
            if l.edge.0 >= hit.len() || std::mem::replace(&mut hit[l.edge.0], true) {
                return Err(bad("edge map is not a bijection".into()));
            }
        }
        for e in graph.edge_indices() {
            let image = edge_map[e.0];
            let (s, t) = (graph.source_of(e), graph.target_of(e));
            if image.start(graph) != vertex_map[s.0] || image.end(graph) != vertex_map[t.0] {
                return Err(bad(format!(
                    "edge `{}` is not mapped compatibly with its endpoints",
                    graph.edge(e).id
                )));
            }
        }
        Ok(Self {
            graph: Arc::clone(graph),
            vertex_map,
            edge_map,
        })
    }

    /// Builds from id pairs: vertices `(x, F(x))`, edges `(e, "f")` or `(e, "f^-1")`.
    pub fn from_ids(
        graph: &Arc<EmbeddedGraph>,
        vertices: &[(String, String)],
        edges: &[(String, String)],
    ) -> Result<Self> {
        let mut vertex_map = vec![None; graph.vertex_count()];
        for (from, to) in vertices {
            let slot = &mut vertex_map[graph.vertex_index(from)?.0];
            if slot.replace(graph.vertex_index(to)?).is_some() {
                return Err(Error::InvalidAutomorphism(format!(
                    "vertex `{from}` mapped twice"
                )));
            }
        }
        let mut edge_map = vec![None; graph.edge_count()];
        for (from, to) in edges {
            let (id, orientation) = match to.trim().strip_suffix("^-1") {
                Some(id) => (id.trim(), Orientation::Reverse),
                None => (to.trim(), Orientation::Forward),
            };
            let image = SignedEdge {
                edge: graph.edge_index(id)?,
                orientation,
            };
            let slot = &mut edge_map[graph.edge_index(from)?.0];
            if slot.replace(image).is_some() {
                return Err(Error::InvalidAutomorphism(format!(
                    "edge `{from}` mapped twice"
                )));
            }
        }
        let vertex_map = vertex_map
            .into_iter()
            .enumerate()
            .map(|(i, v)| {
                v.ok_or_else(|| {
                    Error::InvalidAutomorphism(format!(
                        "vertex `{}` unmapped",
                        graph.vertex(VertexIndex(i)).id
                    ))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let edge_map = edge_map
            .into_iter()
            .enumerate()
            .map(|(i, e)| {
                e.ok_or_else(|| {
                    Error::InvalidAutomorphism(format!("edge `{}` unmapped", graph.edges()[i].id))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(graph, vertex_map, edge_map)
    }

    pub fn identity(graph: &Arc<EmbeddedGraph>) -> Self {
        Self {
            graph: Arc::clone(graph),
            vertex_map: graph.vertex_indices().collect(),
            edge_map: graph.edge_indices().map(SignedEdge::forward).collect(),
        }
    }

    pub fn graph(&self) -> &Arc<EmbeddedGraph> {
        &self.graph
    }

    pub fn vertex_image(&self, v: VertexIndex) -> VertexIndex {
        self.vertex_map[v.0]
    }

    pub fn letter_image(&self, l: SignedEdge) -> SignedEdge {
        let image = self.edge_map[l.edge.0];
        SignedEdge {
            edge: image.edge,
            orientation: image.orientation.then(l.orientation),
        }
    }

    pub fn vertex_map(&self) -> &[VertexIndex] {
        &self.vertex_map
    }

    pub fn edge_map(&self) -> &[SignedEdge] {
        &self.edge_map
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(&self.graph)
    }

    pub fn inverse(&self) -> GroupoidAutomorphism {
        let mut vertex_map = self.vertex_map.clone();
        for (i, v) in self.vertex_map.iter().enumerate() {
            vertex_map[v.0] = VertexIndex(i);
        }
        let mut edge_map = self.edge_map.clone();
        for (i, image) in self.edge_map.iter().enumerate() {
            edge_map[image.edge.0] = SignedEdge {
                edge: crate::groupoid::EdgeIndex(i),
                orientation: image.orientation,
            };
        }
        Self {
            graph: Arc::clone(&self.graph),
            vertex_map,
            edge_map,
        }
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &GroupoidAutomorphism) -> Result<GroupoidAutomorphism> {
        check_same_graph(&self.graph, &first.graph)?;
        Ok(Self {
            graph: Arc::clone(&self.graph),
            vertex_map: first
                .vertex_map
                .iter()
                .map(|v| self.vertex_map[v.0])
                .collect(),
            edge_map: first
                .edge_map
                .iter()
                .map(|&l| self.letter_image(l))
                .collect(),
        })
    }

    /// Letter-wise image of a path, reduced. Identities go to identities.
    pub fn apply_to_path(&self, p: &PathWord) -> Result<PathWord> {
        check_same_graph(&self.graph, p.graph())?;
        let letters: Vec<SignedEdge> = p.letters().iter().map(|&l| self.letter_image(l)).collect();
        crate::groupoid::reduce(&self.graph, &letters, self.vertex_map[p.source().0])
    }

    /// `FĀ(p) = Ā(F⁻¹p)`.
    pub fn act(&self, conn: &GeneralizedConnection) -> Result<GeneralizedConnection> {
        check_same_graph(&self.graph, conn.graph())?;
        let inverse = self.inverse();
        let assignment = inverse
            .edge_map
            .iter()
            .map(|&l| conn.letter_value(l))
            .collect();
        Ok(conn.with_assignment(assignment))
    }
}

pub fn automorphism_act(
    f: &GroupoidAutomorphism,
    conn: &GeneralizedConnection,
) -> Result<GeneralizedConnection> {
    f.act(conn)
}

pub fn apply_to_path(f: &GroupoidAutomorphism, p: &PathWord) -> Result<PathWord> {
    f.apply_to_path(p)
}

pub fn compose_auto(
    f2: &GroupoidAutomorphism,
    f1: &GroupoidAutomorphism,
) -> Result<GroupoidAutomorphism> {
    f2.compose(f1)
}

/// Enumerates graph automorphisms by backtracking over edge images, stopping
/// after `limit`. Vertices touched by no edge are completed in index order,
/// so their permutations are not enumerated.
pub fn automorphisms(graph: &Arc<EmbeddedGraph>, limit: usize) -> Vec<GroupoidAutomorphism> {
    struct Search<'a> {
        graph: &'a EmbeddedGraph,
        vertex_map: Vec<Option<VertexIndex>>,
        vertex_used: Vec<bool>,
        edge_map: Vec<SignedEdge>,
        edge_used: Vec<bool>,
        found: Vec<(Vec<VertexIndex>, Vec<SignedEdge>)>,
        limit: usize,
    }

    impl Search<'_> {
        fn bind(
            &mut self,
            from: VertexIndex,
            to: VertexIndex,
            undo: &mut Vec<VertexIndex>,
        ) -> bool {
            match self.vertex_map[from.0] {
                Some(existing) => existing == to,
                None if self.vertex_used[to.0] => false,
                None => {
                    self.vertex_map[from.0] = Some(to);
                    self.vertex_used[to.0] = true;
                    undo.push(from);
                    true
                }
            }
        }

        fn run(&mut self, e: usize) {
            if self.found.len() >= self.limit {
                return;
            }
            let g = self.graph;
            if e == g.edge_count() {
                let mut vertex_map = self.vertex_map.clone();
                let mut free = (0..g.vertex_count()).filter(|&i| !self.vertex_used[i]);
                for slot in vertex_map.iter_mut().filter(|s| s.is_none()) {
                    *slot = free.next().map(VertexIndex);
                }
                let vertex_map = vertex_map
                    .into_iter()
                    .map(|v| v.expect("bijection"))
                    .collect();
                self.found.push((vertex_map, self.edge_map.clone()));
                return;
            }
            let edge = crate::groupoid::EdgeIndex(e);
            let (s, t) = (g.source_of(edge), g.target_of(edge));
            for f in g.edge_indices() {
                if self.edge_used[f.0] {
                    continue;
                }
                for image in [SignedEdge::forward(f), SignedEdge::reverse(f)] {
                    let mut undo = Vec::new();
                    if self.bind(s, image.start(g), &mut undo)
                        && self.bind(t, image.end(g), &mut undo)
                    {
                        self.edge_used[f.0] = true;
                        self.edge_map.push(image);
                        self.run(e + 1);
                        self.edge_map.pop();
                        self.edge_used[f.0] = false;
                    }
                    for v in undo {
                        let to = self.vertex_map[v.0].take().expect("bound");
                        self.vertex_used[to.0] = false;
                    }
                }
            }
        }
    }

    let mut search = Search {
        graph,
        vertex_map: vec![None; graph.vertex_count()],
        vertex_used: vec![false; graph.vertex_count()],
        edge_map: Vec::new(),
        edge_used: vec![false; graph.edge_count()],
        found: Vec::new(),
        limit,
    };
    search.run(0);
    search
        .found
        .into_iter()
        .map(|(vertex_map, edge_map)| GroupoidAutomorphism {
            graph: Arc::clone(graph),
            vertex_map,
            edge_map,
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::connection::random_connection;
    use crate::groupoid::{builders, random, OrientedEdge, Vertex};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn single_edge() -> Arc<EmbeddedGraph> {
        Arc::new(
            EmbeddedGraph::new(
                "one",
                vec![Vertex::new("s"), Vertex::new("r")],
                vec![OrientedEdge::new("e", "s", "r")],
            )
            .unwrap(),
        )
    }

    #[test]
    fn gauge_edge_substitution() {
        let g = single_edge();
        let d = GroupDescriptor::cyclic(3).unwrap();
        let conn = GeneralizedConnection::trivial(&g, d);
        let values = vec![d.from_residue(2).unwrap(), d.from_residue(1).unwrap()];
        let gauge = GaugeTransformation::new(&g, d, values).unwrap();
        // 1 + 0 - 2 mod 3
        assert_eq!(gauge.act(&conn).unwrap().assignment()[0].residue(), Some(2));
    }

    #[test]
    fn gauge_identity_and_inverse() {
        let g = builders::grid(2, 3);
        let d = GroupDescriptor::symmetric(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let conn = random_connection(&g, d, &mut rng);
        let id = GaugeTransformation::identity(&g, d);
        assert_eq!(id.act(&conn).unwrap().max_distance(&conn).unwrap(), 0.0);
        let gauge = GaugeTransformation::random(&g, d, &mut rng);
        let both = gauge.compose(&gauge.inverse()).unwrap();
        assert!(both.values().iter().all(GroupElement::is_identity));
    }

    #[test]
    fn closed_loop_conjugation() {
        let g = builders::cycle(3);
        let d = GroupDescriptor::symmetric(4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let conn = random_connection(&g, d, &mut rng);
        let gauge = GaugeTransformation::random(&g, d, &mut rng);
        let p = PathWord::parse(&g, "c0,c1,c2").unwrap();
        let x = gauge.value(p.source());
        let h = conn.holonomy(&p).unwrap();
        let expected = x.multiply(&h).unwrap().multiply(&x.inverse()).unwrap();
        let after = gauge.act(&conn).unwrap().holonomy(&p).unwrap();
        assert!(after.equal(&expected).unwrap());
    }

    #[test]
    fn wilson_loop_values() {
        let g = builders::bouquet(1);
        let d = GroupDescriptor::su2();
        let conn = GeneralizedConnection::new(
            &g,
            d,
            vec![d.from_quaternion([0.0, 1.0, 0.0, 0.0]).unwrap()],
        )
        .unwrap();
        let one = PathWord::parse(&g, "@x").unwrap();
        assert_eq!(wilson_loop(&conn, &one).unwrap(), 2.0);
        assert_eq!(
            wilson_loop(&conn, &PathWord::parse(&g, "l0").unwrap()).unwrap(),
            0.0
        );
        let e = single_edge();
        let c = GeneralizedConnection::trivial(&e, d);
        assert!(matches!(
            wilson_loop(&c, &PathWord::parse(&e, "e").unwrap()),
            Err(Error::NotClosed { .. })
        ));
    }

    #[test]
    fn edge_swap_action() {
        let g = builders::theta(2);
        let d = GroupDescriptor::cyclic(5).unwrap();
        let (a, b) = (d.from_residue(1).unwrap(), d.from_residue(3).unwrap());
        let conn = GeneralizedConnection::new(&g, d, vec![a, b]).unwrap();
        let swap = GroupoidAutomorphism::from_ids(
            &g,
            &[("x".into(), "x".into()), ("y".into(), "y".into())],
            &[("t0".into(), "t1".into()), ("t1".into(), "t0".into())],
        )
        .unwrap();
        let moved = swap.act(&conn).unwrap();
        assert_eq!(moved.assignment()[0].residue(), Some(3));
        assert_eq!(moved.assignment()[1].residue(), Some(1));
        let id = GroupoidAutomorphism::identity(&g);
        assert_eq!(id.act(&conn).unwrap().max_distance(&conn).unwrap(), 0.0);
    }

    #[test]
    fn reversing_swap_on_paths() {
        let g = builders::cycle(2);
        // c0: v0→v1, c1: v1→v0; F fixes vertices and maps c0 ↦ c1⁻¹, c1 ↦ c0⁻¹
        let f = GroupoidAutomorphism::from_ids(
            &g,
            &[("v0".into(), "v0".into()), ("v1".into(), "v1".into())],
            &[("c0".into(), "c1^-1".into()), ("c1".into(), "c0^-1".into())],
        )
        .unwrap();
        let p = PathWord::parse(&g, "c0").unwrap();
        assert_eq!(f.apply_to_path(&p).unwrap().to_string(), "c1^-1");
        let one = PathWord::parse(&g, "@v1").unwrap();
        assert_eq!(f.apply_to_path(&one).unwrap(), one);
        assert_eq!(
            GroupoidAutomorphism::identity(&g)
                .apply_to_path(&p)
                .unwrap(),
            p
        );
    }

    #[test]
    fn identity_paths_follow_vertex_map() {
        let g = builders::cycle(4);
        let autos = automorphisms(&g, 100);
        assert_eq!(autos.len(), 8, "dihedral group of the square");
        for f in &autos {
            for v in g.vertex_indices() {
                let image = f.apply_to_path(&PathWord::identity(&g, v)).unwrap();
                assert_eq!(image, PathWord::identity(&g, f.vertex_image(v)));
            }
        }
    }

    #[test]
    fn automorphism_counts() {
        // signed permutations of 3 loops
        assert_eq!(automorphisms(&builders::bouquet(3), 1000).len(), 48);
        // permutations of parallel edges, with or without swapping x and y
        assert_eq!(automorphisms(&builders::theta(3), 1000).len(), 12);
        assert_eq!(automorphisms(&builders::theta(3), 5).len(), 5);
    }

    #[test]
    fn invalid_automorphisms() {
        let g = single_edge();
        let bad = GroupoidAutomorphism::from_ids(
            &g,
            &[("s".into(), "r".into()), ("r".into(), "s".into())],
            &[("e".into(), "e".into())],
        );
        assert!(matches!(bad, Err(Error::InvalidAutomorphism(_))));
        let ok = GroupoidAutomorphism::from_ids(
            &g,
            &[("s".into(), "r".into()), ("r".into(), "s".into())],
            &[("e".into(), "e^-1".into())],
        );
        assert!(ok.is_ok());
    }

    #[test]
    fn automorphism_composition_and_inverse() {
        let g = builders::bouquet(3);
        let autos = automorphisms(&g, 1000);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let f1 = &autos[rng.random_range(0..autos.len())];
            let f2 = &autos[rng.random_range(0..autos.len())];
            assert!(f1.compose(&f1.inverse()).unwrap().is_identity());
            let p = random::random_path(&mut rng, &g, 12);
            let lhs = f2.compose(f1).unwrap().apply_to_path(&p).unwrap();
            let rhs = f2.apply_to_path(&f1.apply_to_path(&p).unwrap()).unwrap();
            assert_eq!(lhs, rhs);
        }
    }
}
