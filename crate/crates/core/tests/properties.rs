use genconn::format;
use genconn::groupoid::random::{
    insert_retracings, random_composable_pair, random_graph, random_path, random_raw_word,
};
use genconn::groupoid::reduce;
use genconn::projective::{subdivide_edge, NewVertex};
use genconn::symmetry::automorphisms;
use genconn::{random_connection, GaugeTransformation, GroupDescriptor, PathWord};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn descriptor() -> impl Strategy<Value = GroupDescriptor> {
    prop_oneof![
        (1u32..=7).prop_map(|n| GroupDescriptor::cyclic(n).unwrap()),
        (1u8..=4).prop_map(|n| GroupDescriptor::symmetric(n).unwrap()),
        Just(GroupDescriptor::su2()),
    ]
}

fn tolerance(d: &GroupDescriptor) -> f64 {
    if d.is_finite() {
        0.0
    } else {
        1e-10
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn retracings_do_not_change_reduced_words(seed: u64, edges in 1usize..12, len in 0usize..40, extra in 0usize..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_graph(&mut rng, "g", (edges / 2).max(1), edges);
        let (raw, base) = random_raw_word(&mut rng, &g, len);
        let noisy = insert_retracings(&mut rng, &g, &raw, base, extra);
        let a = reduce(&g, &raw, base).unwrap();
        let b = reduce(&g, &noisy, base).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(reduce(&g, a.letters(), base).unwrap(), a);
    }

    #[test]
    fn literals_round_trip(seed: u64, len in 0usize..30) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_graph(&mut rng, "g", 4, 7);
        let p = random_path(&mut rng, &g, len);
        prop_assert_eq!(PathWord::parse(&g, &p.to_string()).unwrap(), p);
    }

    #[test]
    fn group_axioms(d in descriptor(), seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, b, c) = (d.haar_sample(&mut rng), d.haar_sample(&mut rng), d.haar_sample(&mut rng));
        let left = a.multiply(&b).unwrap().multiply(&c).unwrap();
        let right = a.multiply(&b.multiply(&c).unwrap()).unwrap();
        prop_assert!(left.distance(&right).unwrap() <= tolerance(&d));
        prop_assert!(a.multiply(&a.inverse()).unwrap().distance(&d.identity()).unwrap() <= tolerance(&d));
        prop_assert!(d.parse_element(&a.to_string()).unwrap().distance(&a).unwrap() == 0.0);
    }

    #[test]
    fn holonomy_is_a_functor(d in descriptor(), seed: u64, len in 0usize..20) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_graph(&mut rng, "g", 4, 7);
        let conn = random_connection(&g, d, &mut rng);
        let (p2, p1) = random_composable_pair(&mut rng, &g, len);
        let whole = conn.holonomy(&p2.compose(&p1).unwrap()).unwrap();
        let split = conn.holonomy(&p2).unwrap().multiply(&conn.holonomy(&p1).unwrap()).unwrap();
        prop_assert!(whole.distance(&split).unwrap() <= tolerance(&d));
        let inv = conn.holonomy(&p1.inverse()).unwrap();
        prop_assert!(inv.distance(&conn.holonomy(&p1).unwrap().inverse()).unwrap() <= tolerance(&d));
    }

    #[test]
    fn gauge_action_is_covariant(d in descriptor(), seed: u64, len in 0usize..20) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_graph(&mut rng, "g", 4, 6);
        let conn = random_connection(&g, d, &mut rng);
        let h = GaugeTransformation::random(&g, d, &mut rng);
        let p = random_path(&mut rng, &g, len);
        let lhs = h.act(&conn).unwrap().holonomy(&p).unwrap();
        let rhs = h.value(p.target())
            .multiply(&conn.holonomy(&p).unwrap()).unwrap()
            .multiply(&h.value(p.source()).inverse()).unwrap();
        prop_assert!(lhs.distance(&rhs).unwrap() <= 1e-9f64.max(tolerance(&d)));
        let back = h.inverse().act(&h.act(&conn).unwrap()).unwrap();
        prop_assert!(back.max_distance(&conn).unwrap() <= 1e-9f64.max(tolerance(&d)));
    }

    #[test]
    fn automorphisms_pull_back_paths(d in descriptor(), seed: u64, which in 0usize..48, len in 0usize..20) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = genconn::groupoid::builders::bouquet(3);
        let all = automorphisms(&g, 100);
        let f = &all[which % all.len()];
        let conn = random_connection(&g, d, &mut rng);
        let p = random_path(&mut rng, &g, len);
        let lhs = f.act(&conn).unwrap().holonomy(&p).unwrap();
        let rhs = conn.holonomy(&f.inverse().apply_to_path(&p).unwrap()).unwrap();
        prop_assert!(lhs.distance(&rhs).unwrap() <= tolerance(&d));
        prop_assert!(f.compose(&f.inverse()).unwrap().is_identity());
    }

    #[test]
    fn restriction_commutes_with_evaluation(d in descriptor(), seed: u64, edge in 0usize..7, len in 0usize..20) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_graph(&mut rng, "g", 4, 7);
        let id = g.edges()[edge].id.clone();
        let (fine, r) = subdivide_edge(&g, &id, NewVertex::named("mid")).unwrap();
        let fine_conn = random_connection(&fine, d, &mut rng);
        let coarse = r.restrict(&fine_conn).unwrap();
        let p = random_path(&mut rng, &g, len);
        let lhs = coarse.holonomy(&p).unwrap();
        let rhs = fine_conn.holonomy(&r.expand_path(&p).unwrap()).unwrap();
        prop_assert!(lhs.distance(&rhs).unwrap() <= tolerance(&d));
        let lifted = r.section(&coarse, &mut rng).unwrap();
        prop_assert!(r.restrict(&lifted).unwrap().max_distance(&coarse).unwrap() <= tolerance(&d));
    }

    #[test]
    fn connection_documents_round_trip(d in descriptor(), seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_graph(&mut rng, "g", 3, 5);
        let conn = random_connection(&g, d, &mut rng);
        let text = format::connection_to_string(&conn);
        let back = format::parse_connection(&text, &g).unwrap();
        prop_assert_eq!(back.max_distance(&conn).unwrap(), 0.0);
        prop_assert_eq!(format::connection_to_string(&back), text);
    }
}
