//! Worked examples for each public operation.

use std::collections::HashMap;
use std::sync::Arc;

use genconn::connection::{OneForm, Polynomial};
use genconn::groupoid::{builders, EdgeIndex, SignedEdge};
use genconn::measure::{
    integrate, verify_automorphism_invariance, verify_gauge_invariance,
    verify_refinement_consistency, Budget, CylindricalFunction,
};
use genconn::projective::{subdivide_edge, NewVertex};
use genconn::symmetry::wilson_loop;
use genconn::{
    discretize_smooth, random_connection, EmbeddedGraph, Error, GaugeTransformation,
    GeneralizedConnection, GroupDescriptor, GroupElement, GroupoidAutomorphism, OrientedEdge,
    PathWord, SmoothConnectionSpec, Vertex,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn c3() -> GroupDescriptor {
    GroupDescriptor::cyclic(3).unwrap()
}

/// `e1: x → y`, `e2: y → z`.
fn chain() -> Arc<EmbeddedGraph> {
    Arc::new(
        EmbeddedGraph::new(
            "chain",
            vec![Vertex::new("x"), Vertex::new("y"), Vertex::new("z")],
            vec![
                OrientedEdge::new("e1", "x", "y"),
                OrientedEdge::new("e2", "y", "z"),
            ],
        )
        .unwrap(),
    )
}

fn conn_from(
    graph: &Arc<EmbeddedGraph>,
    d: GroupDescriptor,
    values: &[(&str, &str)],
) -> GeneralizedConnection {
    let map: HashMap<String, GroupElement> = values
        .iter()
        .map(|(e, v)| (e.to_string(), d.parse_element(v).unwrap()))
        .collect();
    GeneralizedConnection::from_map(graph, d, &map).unwrap()
}

#[test]
fn group_tables() {
    let d = c3();
    let (one, two) = (d.from_residue(1).unwrap(), d.from_residue(2).unwrap());
    assert_eq!(one.multiply(&two).unwrap().residue(), Some(0));
    assert_eq!(one.inverse().residue(), Some(2));
    assert!(two.equal(&two).unwrap());
    assert!(!one.equal(&two).unwrap());
    assert_eq!(
        GroupDescriptor::cyclic(5).unwrap().identity().residue(),
        Some(0)
    );
    assert_eq!(
        GroupDescriptor::su2().identity().quaternion(),
        Some([1.0, 0.0, 0.0, 0.0])
    );
    assert_eq!(
        GroupDescriptor::symmetric(4)
            .unwrap()
            .identity()
            .permutation(),
        Some(&[0u8, 1, 2, 3][..])
    );

    let s3 = GroupDescriptor::symmetric(3).unwrap();
    let cycle = s3.from_permutation(&[1, 2, 0]).unwrap();
    assert_eq!(cycle.inverse().permutation(), Some(&[2u8, 0, 1][..]));

    let su2 = GroupDescriptor::su2();
    let q = su2.from_quaternion([0.5, 0.5, -0.5, 0.5]).unwrap();
    assert_eq!(q.inverse().quaternion(), Some([0.5, -0.5, 0.5, -0.5]));
    assert!(q
        .multiply(&q.inverse())
        .unwrap()
        .equal(&su2.identity())
        .unwrap());
    for d in [c3(), s3, su2] {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let g = d.haar_sample(&mut rng);
        assert!(d.identity().multiply(&g).unwrap().equal(&g).unwrap());
    }
}

#[test]
fn su2_equality_tolerance() {
    let su2 = GroupDescriptor::su2();
    let q = su2.from_quaternion([0.5, 0.5, 0.5, 0.5]).unwrap();
    let nudged = su2
        .from_quaternion([0.5 + 1e-9, 0.5 + 1e-9, 0.5 + 1e-9, 0.5 + 1e-9])
        .unwrap();
    assert!(q.equal(&nudged).unwrap());
    let far = su2.from_quaternion([0.5, 0.5, 0.5, -0.5]).unwrap();
    assert!(!q.equal(&far).unwrap());
}

#[test]
fn haar_sampling_is_deterministic() {
    for d in [c3(), GroupDescriptor::su2()] {
        let draw = |seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..50)
                .map(|_| d.haar_sample(&mut rng).to_string())
                .collect::<Vec<_>>()
        };
        assert_eq!(draw(11), draw(11));
        assert_ne!(draw(11), draw(12));
    }
}

#[test]
fn reduction_examples() {
    let g = chain();
    let e1 = SignedEdge::forward(EdgeIndex(0));
    let e2 = SignedEdge::forward(EdgeIndex(1));
    let x = g.vertex_index("x").unwrap();
    let y = g.vertex_index("y").unwrap();

    assert_eq!(
        genconn::groupoid::reduce(&g, &[e1, e1.inverse()], x).unwrap(),
        PathWord::identity(&g, x)
    );
    // e2 e2⁻¹ is a retracing at y, followed by e1⁻¹ back to x
    let p = genconn::groupoid::reduce(&g, &[e2, e2.inverse(), e1.inverse()], y).unwrap();
    assert_eq!(p.letters(), &[e1.inverse()]);
    let q = genconn::groupoid::reduce(&g, &[e1, e2], x).unwrap();
    assert_eq!(q.letters(), &[e1, e2]);
    assert!(matches!(
        genconn::groupoid::reduce(&g, &[e2], x),
        Err(Error::BrokenPath { position: 0, .. })
    ));
}

#[test]
fn composition_and_inverse_examples() {
    let g = chain();
    let p = PathWord::parse(&g, "e1,e2").unwrap();
    assert_eq!(p.inverse().to_string(), "e2^-1,e1^-1");
    let one_x = PathWord::parse(&g, "@x").unwrap();
    assert_eq!(one_x.inverse(), one_x);
    assert_eq!(p.compose(&one_x).unwrap(), p);
    assert_eq!(p.inverse().compose(&p).unwrap(), one_x);
    assert_eq!(p.inverse().inverse(), p);
    let e1 = PathWord::parse(&g, "e1").unwrap();
    let e2 = PathWord::parse(&g, "e2").unwrap();
    assert_eq!(e2.compose(&e1).unwrap(), p);
    assert!(matches!(e1.compose(&e1), Err(Error::NonComposable { .. })));

    let id = |name: &str| g.vertex_index(name).unwrap();
    assert_eq!((e1.source(), e1.target()), (id("x"), id("y")));
    assert_eq!((one_x.source(), one_x.target()), (id("x"), id("x")));
    assert_eq!((p.source(), p.target()), (id("x"), id("z")));
}

#[test]
fn path_literal_errors_point_at_columns() {
    let g = chain();
    match PathWord::parse(&g, "e1,,e2") {
        Err(Error::PathLiteral { column, .. }) => assert_eq!(column, 4),
        other => panic!("{other:?}"),
    }
    match PathWord::parse(&g, "e1,e9") {
        Err(Error::PathLiteral { column, reason }) => {
            assert_eq!((column, reason.contains("e9")), (4, true))
        }
        other => panic!("{other:?}"),
    }
    assert!(matches!(
        PathWord::parse(&g, "@w"),
        Err(Error::PathLiteral { column: 2, .. })
    ));
    assert!(matches!(
        PathWord::parse(&g, "e2,e1"),
        Err(Error::BrokenPath { .. })
    ));
}

#[test]
fn holonomy_examples() {
    let g = chain();
    let d = GroupDescriptor::cyclic(2).unwrap();
    let conn = conn_from(&g, d, &[("e1", "1"), ("e2", "1")]);
    let p = PathWord::parse(&g, "e1,e2").unwrap();
    assert_eq!(conn.holonomy(&p).unwrap().residue(), Some(0));
    assert!(conn
        .holonomy(&PathWord::parse(&g, "@y").unwrap())
        .unwrap()
        .is_identity());

    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let s4 = GroupDescriptor::symmetric(4).unwrap();
    let conn = random_connection(&g, s4, &mut rng);
    let h = conn.holonomy(&p).unwrap();
    assert!(conn
        .holonomy(&p.inverse())
        .unwrap()
        .equal(&h.inverse())
        .unwrap());
}

#[test]
fn edgeless_graph_connection() {
    let g = Arc::new(EmbeddedGraph::new("dot", vec![Vertex::new("x")], vec![]).unwrap());
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let conn = random_connection(&g, GroupDescriptor::su2(), &mut rng);
    assert!(conn.assignment().is_empty());
    assert!(conn
        .holonomy(&PathWord::parse(&g, "@x").unwrap())
        .unwrap()
        .is_identity());
}

fn unit_segment() -> Arc<EmbeddedGraph> {
    Arc::new(
        EmbeddedGraph::new(
            "segment",
            vec![
                Vertex::at("p", vec![0.0, 0.0]),
                Vertex::at("q", vec![1.0, 0.0]),
            ],
            vec![OrientedEdge::new("e", "p", "q")
                .with_geometry(vec![vec![0.0, 0.0], vec![1.0, 0.0]])],
        )
        .unwrap(),
    )
}

fn constant_dx(a: f64) -> SmoothConnectionSpec {
    SmoothConnectionSpec::new(
        OneForm::U1(vec![Polynomial::constant(a, 2), Polynomial::zero()]),
        16,
    )
    .unwrap()
}

#[test]
fn smooth_discretization_examples() {
    let g = unit_segment();
    let su2 = GroupDescriptor::su2();
    let zero = SmoothConnectionSpec::new(
        OneForm::U1(vec![Polynomial::zero(), Polynomial::zero()]),
        16,
    )
    .unwrap();
    assert!(discretize_smooth(&zero, &g, su2).unwrap().assignment()[0].is_identity());

    let a = discretize_smooth(&constant_dx(1.0), &g, su2).unwrap();
    let b = discretize_smooth(&constant_dx(1.0 + 1e-3), &g, su2).unwrap();
    let candidates = vec![PathWord::parse(&g, "e").unwrap()];
    assert_eq!(a.separates(&a, &candidates).unwrap(), None);
    assert_eq!(
        a.separates(&b, &candidates).unwrap(),
        Some(candidates[0].clone())
    );

    assert!(matches!(
        discretize_smooth(&constant_dx(1.0), &g, c3()),
        Err(Error::UnsupportedGroup { .. })
    ));
    let bare = builders::theta(1);
    assert!(matches!(
        discretize_smooth(&constant_dx(1.0), &bare, su2),
        Err(Error::NoGeometry(_))
    ));
}

#[test]
fn separating_on_a_differing_edge() {
    let g = chain();
    let a = conn_from(&g, c3(), &[("e1", "0"), ("e2", "1")]);
    let b = conn_from(&g, c3(), &[("e1", "0"), ("e2", "2")]);
    let e2 = PathWord::parse(&g, "e2").unwrap();
    assert_eq!(
        a.separates(&b, std::slice::from_ref(&e2)).unwrap(),
        Some(e2)
    );
}

#[test]
fn gauge_examples() {
    // e: s → r
    let g = Arc::new(
        EmbeddedGraph::new(
            "arrow",
            vec![Vertex::new("s"), Vertex::new("r")],
            vec![OrientedEdge::new("e", "s", "r")],
        )
        .unwrap(),
    );
    let d = c3();
    let conn = conn_from(&g, d, &[("e", "0")]);
    let values = HashMap::from([
        ("r".to_string(), d.from_residue(1).unwrap()),
        ("s".to_string(), d.from_residue(2).unwrap()),
    ]);
    let h = GaugeTransformation::from_map(&g, d, &values).unwrap();
    assert_eq!(h.act(&conn).unwrap().assignment()[0].residue(), Some(2));
    let same = GaugeTransformation::identity(&g, d).act(&conn).unwrap();
    assert_eq!(same.max_distance(&conn).unwrap(), 0.0);
    assert!(h
        .compose(&h.inverse())
        .unwrap()
        .values()
        .iter()
        .all(GroupElement::is_identity));
}

#[test]
fn gauge_conjugates_loops() {
    let g = builders::bouquet(2);
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let s3 = GroupDescriptor::symmetric(3).unwrap();
    let conn = random_connection(&g, s3, &mut rng);
    let h = GaugeTransformation::random(&g, s3, &mut rng);
    let p = PathWord::parse(&g, "l0,l1^-1,l0").unwrap();
    let x = h.value(p.source());
    let expected = x
        .multiply(&conn.holonomy(&p).unwrap())
        .unwrap()
        .multiply(&x.inverse())
        .unwrap();
    assert!(h
        .act(&conn)
        .unwrap()
        .holonomy(&p)
        .unwrap()
        .equal(&expected)
        .unwrap());
}

#[test]
fn wilson_loop_examples() {
    let g = builders::bouquet(1);
    let su2 = GroupDescriptor::su2();
    let conn = GeneralizedConnection::new(
        &g,
        su2,
        vec![su2.from_quaternion([0.0, 1.0, 0.0, 0.0]).unwrap()],
    )
    .unwrap();
    assert_eq!(
        wilson_loop(&conn, &PathWord::parse(&g, "@x").unwrap()).unwrap(),
        2.0
    );
    assert_eq!(
        wilson_loop(&conn, &PathWord::parse(&g, "l0").unwrap()).unwrap(),
        0.0
    );
    let open = chain();
    let c = GeneralizedConnection::trivial(&open, su2);
    assert!(matches!(
        wilson_loop(&c, &PathWord::parse(&open, "e1").unwrap()),
        Err(Error::NotClosed { .. })
    ));
}

#[test]
fn automorphism_examples() {
    let g = builders::theta(2);
    let d = c3();
    let conn = conn_from(&g, d, &[("t0", "1"), ("t1", "2")]);
    let pairs = |v: &[(&str, &str)]| {
        v.iter()
            .map(|(a, b)| (a.to_string(), b.to_string()))
            .collect::<Vec<_>>()
    };
    let swap = GroupoidAutomorphism::from_ids(
        &g,
        &pairs(&[("x", "x"), ("y", "y")]),
        &pairs(&[("t0", "t1"), ("t1", "t0")]),
    )
    .unwrap();
    let moved = swap.act(&conn).unwrap();
    assert_eq!(moved.assignment()[0].residue(), Some(2));
    assert_eq!(moved.assignment()[1].residue(), Some(1));
    let fixed = GroupoidAutomorphism::identity(&g);
    assert_eq!(fixed.act(&conn).unwrap().max_distance(&conn).unwrap(), 0.0);
    let p = PathWord::parse(&g, "t0,t1^-1").unwrap();
    assert_eq!(fixed.apply_to_path(&p).unwrap(), p);
    let one = PathWord::parse(&g, "@x").unwrap();
    assert_eq!(swap.apply_to_path(&one).unwrap(), one);

    // bouquet: l0 ↦ l1⁻¹ and back
    let b = builders::bouquet(2);
    let flip = GroupoidAutomorphism::from_ids(
        &b,
        &pairs(&[("x", "x")]),
        &pairs(&[("l0", "l1^-1"), ("l1", "l0^-1")]),
    )
    .unwrap();
    let l0 = PathWord::parse(&b, "l0").unwrap();
    assert_eq!(flip.apply_to_path(&l0).unwrap().to_string(), "l1^-1");
}

#[test]
fn automorphism_counts() {
    use genconn::symmetry::automorphisms;
    assert_eq!(automorphisms(&builders::bouquet(3), 1000).len(), 48);
    assert_eq!(automorphisms(&builders::theta(3), 1000).len(), 12);
    assert_eq!(automorphisms(&builders::cycle(4), 1000).len(), 8);
}

#[test]
fn subdivision_examples() {
    let g = Arc::new(
        EmbeddedGraph::new(
            "bent",
            vec![
                Vertex::at("p", vec![0.0, 0.0]),
                Vertex::at("q", vec![3.0, 4.0]),
            ],
            vec![OrientedEdge::new("e", "p", "q").with_geometry(vec![
                vec![0.0, 0.0],
                vec![3.0, 0.0],
                vec![3.0, 4.0],
            ])],
        )
        .unwrap(),
    );
    let (fine, r) = subdivide_edge(&g, "e", NewVertex::named("m")).unwrap();
    assert_eq!(fine.edge_count(), 2);
    assert_eq!(r.expansion(EdgeIndex(0)).to_string(), "e_a,e_b");
    let len =
        |e: usize| genconn::projective::polyline_length(fine.edges()[e].geometry.as_ref().unwrap());
    assert!((len(0) + len(1) - 7.0).abs() < 1e-12);
    assert!((len(0) - 3.5).abs() < 1e-12);

    let (_, r2) = subdivide_edge(&fine, "e_a", NewVertex::named("m2")).unwrap();
    let composite = r.then(&r2).unwrap();
    assert_eq!(composite.expansion(EdgeIndex(0)).len(), 3);
}

#[test]
fn restriction_examples() {
    let g = builders::bouquet(1);
    let d = c3();
    let (fine, r) = subdivide_edge(&g, "l0", NewVertex::named("m")).unwrap();
    let fine_conn = conn_from(&fine, d, &[("l0_a", "1"), ("l0_b", "1")]);
    assert_eq!(
        r.restrict(&fine_conn).unwrap().assignment()[0].residue(),
        Some(2)
    );
    let trivial = GeneralizedConnection::trivial(&fine, d);
    assert!(r.restrict(&trivial).unwrap().assignment()[0].is_identity());

    let su2 = GroupDescriptor::su2();
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let fine_conn = random_connection(&fine, su2, &mut rng);
    let coarse = r.restrict(&fine_conn).unwrap();
    let l = PathWord::parse(&g, "l0,l0").unwrap();
    let lhs = wilson_loop(&coarse, &l).unwrap();
    let rhs = wilson_loop(&fine_conn, &r.expand_path(&l).unwrap()).unwrap();
    assert!((lhs - rhs).abs() < 1e-9);
}

#[test]
fn consistency_reports() {
    let g = builders::theta(2);
    let (fine, r) = subdivide_edge(&g, "t0", NewVertex::named("m")).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let paths: Vec<PathWord> = (0..100)
        .map(|_| genconn::groupoid::random::random_path(&mut rng, &g, 12))
        .collect();
    let finite = random_connection(&fine, GroupDescriptor::symmetric(3).unwrap(), &mut rng);
    let report = r.check_consistency(&finite, &paths);
    assert_eq!(report.max_deviation, 0.0);
    let su2 = GroupDescriptor::su2();
    let continuous = random_connection(&fine, su2, &mut rng);
    let report = r.check_consistency(&continuous, &paths);
    assert!(report.max_deviation <= 10.0 * su2.tolerance());
    assert!(r.check_consistency(&continuous, &[]).is_empty());
}

#[test]
fn integration_examples() {
    let g = builders::bouquet(1);
    let d = c3();
    let l = PathWord::parse(&g, "l0").unwrap();
    let indicator = CylindricalFunction::indicator_identity(&g, d, l.clone()).unwrap();
    let r = integrate(&indicator, Budget::Exact, 0).unwrap();
    assert_eq!(r.value, 1.0 / 3.0);
    assert_eq!(r.fraction.unwrap().to_string(), "1/3");
    for budget in [Budget::Exact, Budget::monte_carlo(1000)] {
        assert_eq!(
            integrate(&CylindricalFunction::constant(&g, d, 0.25), budget, 3)
                .unwrap()
                .value,
            0.25
        );
    }
    let su2 = GroupDescriptor::su2();
    assert!(matches!(
        integrate(
            &CylindricalFunction::constant(&g, su2, 1.0),
            Budget::Exact,
            0
        ),
        Err(Error::UnsupportedExact(_))
    ));
}

#[test]
fn pushforward_examples() {
    let g = builders::theta(2);
    let loop_path = PathWord::parse(&g, "t0,t1^-1").unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let pairs = |v: &[(&str, &str)]| {
        v.iter()
            .map(|(a, b)| (a.to_string(), b.to_string()))
            .collect::<Vec<_>>()
    };
    let swap = GroupoidAutomorphism::from_ids(
        &g,
        &pairs(&[("x", "x"), ("y", "y")]),
        &pairs(&[("t0", "t1"), ("t1", "t0")]),
    )
    .unwrap();
    let reversal = GroupoidAutomorphism::from_ids(
        &g,
        &pairs(&[("x", "y"), ("y", "x")]),
        &pairs(&[("t0", "t0^-1"), ("t1", "t1^-1")]),
    )
    .unwrap();

    for d in [c3(), GroupDescriptor::symmetric(3).unwrap()] {
        let f = CylindricalFunction::wilson(&g, d, loop_path.clone()).unwrap();
        let h = GaugeTransformation::random(&g, d, &mut rng);
        let gauge = verify_gauge_invariance(&f, &h, Budget::Exact, 0).unwrap();
        assert!(gauge.passed && gauge.delta == 0.0);
        let auto = verify_automorphism_invariance(&f, &swap, Budget::Exact, 0).unwrap();
        assert!(auto.passed && auto.delta == 0.0);
    }

    let su2 = GroupDescriptor::su2();
    let f = CylindricalFunction::wilson(&g, su2, loop_path.clone()).unwrap();
    let budget = Budget::MonteCarlo {
        samples: 20_000,
        workers: 2,
    };
    let h = GaugeTransformation::random(&g, su2, &mut rng);
    assert!(verify_gauge_invariance(&f, &h, budget, 5).unwrap().passed);
    assert!(
        verify_automorphism_invariance(&f, &reversal, budget, 5)
            .unwrap()
            .passed
    );
    let identity =
        verify_gauge_invariance(&f, &GaugeTransformation::identity(&g, su2), budget, 5).unwrap();
    assert!(identity.delta < 1e-15);

    let (_, r) = subdivide_edge(&g, "t0", NewVertex::named("m")).unwrap();
    assert!(
        verify_refinement_consistency(&f, &r, budget, 5)
            .unwrap()
            .passed
    );
    let constant = CylindricalFunction::constant(&g, su2, 4.0);
    let report = verify_refinement_consistency(&constant, &r, budget, 5).unwrap();
    assert_eq!((report.left, report.right, report.delta), (4.0, 4.0, 0.0));
}

#[test]
fn refinement_indicator_both_sides_are_one_over_n() {
    for n in 2..=6 {
        let g = builders::bouquet(1);
        let d = GroupDescriptor::cyclic(n).unwrap();
        let (_, r) = subdivide_edge(&g, "l0", NewVertex::named("m")).unwrap();
        let f = CylindricalFunction::indicator_identity(&g, d, PathWord::parse(&g, "l0").unwrap())
            .unwrap();
        let report = verify_refinement_consistency(&f, &r, Budget::Exact, 0).unwrap();
        assert_eq!(
            (report.left, report.right),
            (1.0 / n as f64, 1.0 / n as f64)
        );
    }
}
