//! Property suites run by `genconn suite`.
//!
//! Each suite draws everything from one ChaCha stream keyed by the run seed
//! and reports, per property and group, the number of cases checked and the
//! largest deviation seen.

use std::collections::HashMap;
use std::sync::Arc;

use clap::ValueEnum;
use genconn::groupoid::random::{
    insert_retracings, random_composable_pair, random_loop, random_path, random_path_from,
    random_raw_word,
};
use genconn::groupoid::{reduce, SignedEdge, VertexIndex};
use genconn::measure::{self, EXACT_LIMIT};
use genconn::projective::{subdivide_edge, NewVertex};
use genconn::symmetry::automorphisms;
use genconn::{
    random_connection, Budget, CylindricalFunction, EmbeddedGraph, GaugeTransformation,
    GeneralizedConnection, GroupDescriptor, GroupElement, GroupKind, GroupoidAutomorphism,
    InvarianceReport, PathWord, Refinement,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::config::LoadedConfig;
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    GroupoidAxioms,
    Functoriality,
    Gauge,
    Automorphism,
    Projective,
    Measure,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::GroupoidAxioms => "groupoid-axioms",
            Suite::Functoriality => "functoriality",
            Suite::Gauge => "gauge",
            Suite::Automorphism => "automorphism",
            Suite::Projective => "projective",
            Suite::Measure => "measure",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Property {
    pub name: String,
    pub descriptor: Option<String>,
    pub samples: u64,
    pub max_deviation: f64,
    pub tolerance: f64,
    pub passed: bool,
}

/// Cases exhaustive mode may enumerate per property.
const EXHAUSTIVE_LIMIT: u64 = 1_000_000;
const AUTOMORPHISM_LIMIT: usize = 10_000;

type Outcome<T> = Result<T, CliError>;

pub fn run(suite: Suite, cfg: &LoadedConfig, seed: u64, workers: usize) -> Outcome<Vec<Property>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rng = &mut rng;
    if suite == Suite::GroupoidAxioms {
        return groupoid_axioms(cfg, rng);
    }
    let mut out = Vec::new();
    for &d in cfg.require_descriptors()? {
        out.extend(match suite {
            Suite::GroupoidAxioms => unreachable!(),
            Suite::Functoriality => functoriality(cfg, d, rng)?,
            Suite::Gauge => gauge(cfg, d, rng)?,
            Suite::Automorphism => automorphism(cfg, d, rng)?,
            Suite::Projective => projective(cfg, d, rng)?,
            Suite::Measure => measure_suite(cfg, d, rng, workers)?,
        });
    }
    Ok(out)
}

struct Tally {
    name: &'static str,
    descriptor: Option<String>,
    samples: u64,
    max_deviation: f64,
    tolerance: f64,
    failed: bool,
}

impl Tally {
    fn new(name: &'static str, descriptor: Option<&GroupDescriptor>, tolerance: f64) -> Self {
        Self {
            name,
            descriptor: descriptor.map(ToString::to_string),
            samples: 0,
            max_deviation: 0.0,
            tolerance,
            failed: false,
        }
    }

    fn deviation(&mut self, d: f64) {
        self.samples += 1;
        if d.is_nan() || d > self.max_deviation {
            self.max_deviation = d;
        }
        if d.is_nan() || d > self.tolerance {
            self.failed = true;
        }
    }

    fn holds(&mut self, ok: bool) {
        self.deviation(if ok { 0.0 } else { 1.0 });
    }

    fn finish(self) -> Property {
        Property {
            name: self.name.to_string(),
            descriptor: self.descriptor,
            samples: self.samples,
            max_deviation: self.max_deviation,
            tolerance: self.tolerance,
            passed: !self.failed && self.samples > 0,
        }
    }
}

fn exact_tolerance(d: &GroupDescriptor, continuous: f64) -> f64 {
    if d.is_finite() {
        0.0
    } else {
        continuous
    }
}

/// Reduction that cancels a randomly chosen adjacent pair at every step.
fn random_order_reduce<R: Rng + ?Sized>(rng: &mut R, letters: &[SignedEdge]) -> Vec<SignedEdge> {
    let mut w = letters.to_vec();
    loop {
        let spots: Vec<usize> = (0..w.len().saturating_sub(1))
            .filter(|&i| w[i].is_inverse_of(w[i + 1]))
            .collect();
        if spots.is_empty() {
            return w;
        }
        let i = spots[rng.random_range(0..spots.len())];
        w.drain(i..i + 2);
    }
}

/// Product of letter values along a raw (unreduced) word.
fn raw_holonomy(conn: &GeneralizedConnection, letters: &[SignedEdge]) -> Outcome<GroupElement> {
    let mut acc = conn.descriptor().identity();
    for &l in letters {
        acc = conn.letter_value(l).multiply(&acc)?;
    }
    Ok(acc)
}

fn groupoid_axioms(cfg: &LoadedConfig, rng: &mut ChaCha8Rng) -> Outcome<Vec<Property>> {
    let len = cfg.config.max_word_length;
    let mut oracle = Tally::new("reduction-matches-random-order-oracle", None, 0.0);
    let mut idempotent = Tally::new("reduction-idempotent", None, 0.0);
    let mut normal = Tally::new("reduced-words-have-no-cancelling-pair", None, 0.0);
    let mut identity = Tally::new("identity-laws", None, 0.0);
    let mut inverse = Tally::new("inverse-laws", None, 0.0);
    let mut assoc = Tally::new("composition-associative", None, 0.0);
    let mut anti = Tally::new("inverse-reverses-composition", None, 0.0);
    for _ in 0..cfg.config.samples {
        let g = cfg.graph(rng);
        let (raw, base) = random_raw_word(rng, &g, len);
        let extra = rng.random_range(0..=4);
        let noisy = insert_retracings(rng, &g, &raw, base, extra);
        let p = reduce(&g, &noisy, base)?;
        oracle.holds(p.letters() == random_order_reduce(rng, &noisy).as_slice());
        idempotent.holds(reduce(&g, p.letters(), base)? == p);
        normal.holds(p.letters().windows(2).all(|w| !w[0].is_inverse_of(w[1])));

        let one_s = PathWord::identity(&g, p.source());
        let one_t = PathWord::identity(&g, p.target());
        identity.holds(p.compose(&one_s)? == p && one_t.compose(&p)? == p);
        inverse.holds(
            p.inverse().compose(&p)? == one_s
                && p.compose(&p.inverse())? == one_t
                && p.inverse().inverse() == p,
        );

        let p2 = random_path_from(rng, &g, p.target(), len);
        let p3 = random_path_from(rng, &g, p2.target(), len);
        assoc.holds(p3.compose(&p2)?.compose(&p)? == p3.compose(&p2.compose(&p)?)?);
        anti.holds(p2.compose(&p)?.inverse() == p.inverse().compose(&p2.inverse())?);
    }
    Ok([oracle, idempotent, normal, identity, inverse, assoc, anti]
        .into_iter()
        .map(Tally::finish)
        .collect())
}

fn functoriality(
    cfg: &LoadedConfig,
    d: GroupDescriptor,
    rng: &mut ChaCha8Rng,
) -> Outcome<Vec<Property>> {
    let tol = exact_tolerance(&d, cfg.tolerance(1e-10));
    let len = cfg.config.max_word_length;
    let mut mult = Tally::new("holonomy-multiplicative", Some(&d), tol);
    let mut inv = Tally::new("holonomy-of-inverse", Some(&d), tol);
    let mut unit = Tally::new("holonomy-of-identity", Some(&d), 0.0);
    let mut retrace = Tally::new("retracings-invisible", Some(&d), tol);
    for _ in 0..cfg.config.samples {
        let g = cfg.graph(rng);
        let conn = random_connection(&g, d, rng);
        let (p2, p1) = random_composable_pair(rng, &g, len);
        let whole = conn.holonomy(&p2.compose(&p1)?)?;
        let split = conn.holonomy(&p2)?.multiply(&conn.holonomy(&p1)?)?;
        mult.deviation(whole.distance(&split)?);
        let h1 = conn.holonomy(&p1)?;
        inv.deviation(conn.holonomy(&p1.inverse())?.distance(&h1.inverse())?);
        unit.deviation(
            conn.holonomy(&PathWord::identity(&g, p1.source()))?
                .distance(&d.identity())?,
        );
        let extra = rng.random_range(1..=4);
        let noisy = insert_retracings(rng, &g, p1.letters(), p1.source(), extra);
        retrace.deviation(raw_holonomy(&conn, &noisy)?.distance(&h1)?);
    }
    Ok([mult, inv, unit, retrace]
        .into_iter()
        .map(Tally::finish)
        .collect())
}

/// Every assignment of group elements to `slots` positions, when the count
/// is within `limit`.
fn enumerate(d: &GroupDescriptor, slots: usize, limit: u64) -> Option<Vec<Vec<GroupElement>>> {
    let elements = d.elements()?;
    let count = (elements.len() as u64).checked_pow(u32::try_from(slots).ok()?)?;
    if count > limit {
        return None;
    }
    let mut out = Vec::with_capacity(count as usize);
    let mut digits = vec![0usize; slots];
    for _ in 0..count {
        out.push(digits.iter().map(|&i| elements[i]).collect());
        for digit in digits.iter_mut() {
            *digit += 1;
            if *digit < elements.len() {
                break;
            }
            *digit = 0;
        }
    }
    Some(out)
}

fn all_connections(
    graph: &Arc<EmbeddedGraph>,
    d: GroupDescriptor,
    limit: u64,
) -> Outcome<Option<Vec<GeneralizedConnection>>> {
    enumerate(&d, graph.edge_count(), limit)
        .map(|all| {
            all.into_iter()
                .map(|a| GeneralizedConnection::new(graph, d, a))
                .collect::<Result<Vec<_>, _>>()
        })
        .transpose()
        .map_err(Into::into)
}

/// Fixed probes for exhaustive runs: every edge, plus a few random paths
/// and loops.
fn probe_set(
    graph: &Arc<EmbeddedGraph>,
    rng: &mut ChaCha8Rng,
    len: usize,
) -> Outcome<Vec<PathWord>> {
    let mut probes = graph
        .edge_indices()
        .map(|e| PathWord::edge(graph, SignedEdge::forward(e)))
        .collect::<Result<Vec<_>, _>>()?;
    for _ in 0..4 {
        probes.push(random_path(rng, graph, len));
    }
    for _ in 0..2 {
        probes.push(random_loop(rng, graph, len));
    }
    Ok(probes)
}

fn random_probes(graph: &Arc<EmbeddedGraph>, rng: &mut ChaCha8Rng, len: usize) -> Vec<PathWord> {
    vec![random_path(rng, graph, len), random_loop(rng, graph, len)]
}

fn gauge(cfg: &LoadedConfig, d: GroupDescriptor, rng: &mut ChaCha8Rng) -> Outcome<Vec<Property>> {
    let tol = exact_tolerance(&d, cfg.tolerance(1e-9));
    let len = cfg.config.max_word_length;
    let g = cfg.graph(rng);
    let mut covariance = Tally::new("holonomy-covariance", Some(&d), tol);
    let mut wilson = Tally::new("wilson-loop-invariance", Some(&d), tol);
    let mut composition = Tally::new("action-composition", Some(&d), tol);

    let exhaustive = if cfg.config.exhaustive {
        let conns = all_connections(&g, d, EXHAUSTIVE_LIMIT)?;
        let gauges = enumerate(&d, g.vertex_count(), EXHAUSTIVE_LIMIT);
        match (conns, gauges) {
            (Some(c), Some(v))
                if (c.len() as u64).saturating_mul(v.len() as u64) <= EXHAUSTIVE_LIMIT =>
            {
                let gauges = v
                    .into_iter()
                    .map(|values| GaugeTransformation::new(&g, d, values))
                    .collect::<Result<Vec<_>, _>>()?;
                Some((c, gauges, probe_set(&g, rng, len)?))
            }
            _ => None,
        }
    } else {
        None
    };

    let mut check = |conn: &GeneralizedConnection,
                     h: &GaugeTransformation,
                     probes: &[PathWord],
                     rng: &mut ChaCha8Rng|
     -> Outcome<()> {
        let moved = h.act(conn)?;
        for p in probes {
            let before = conn.holonomy(p)?;
            let after = moved.holonomy(p)?;
            let expected = h
                .value(p.target())
                .multiply(&before)?
                .multiply(&h.value(p.source()).inverse())?;
            covariance.deviation(after.distance(&expected)?);
            if p.is_closed() {
                wilson.deviation((after.trace() - before.trace()).abs());
            }
        }
        let second = GaugeTransformation::random(&g, d, rng);
        composition.deviation(
            second
                .compose(h)?
                .act(conn)?
                .max_distance(&second.act(&moved)?)?,
        );
        Ok(())
    };

    match exhaustive {
        Some((conns, gauges, probes)) => {
            for conn in &conns {
                for h in &gauges {
                    check(conn, h, &probes, rng)?;
                }
            }
        }
        None => {
            for _ in 0..cfg.config.samples {
                let conn = random_connection(&g, d, rng);
                let h = GaugeTransformation::random(&g, d, rng);
                let probes = random_probes(&g, rng, len);
                check(&conn, &h, &probes, rng)?;
            }
        }
    }
    Ok([covariance, wilson, composition]
        .into_iter()
        .map(Tally::finish)
        .collect())
}

fn automorphism(
    cfg: &LoadedConfig,
    d: GroupDescriptor,
    rng: &mut ChaCha8Rng,
) -> Outcome<Vec<Property>> {
    let tol = exact_tolerance(&d, cfg.tolerance(1e-10));
    let len = cfg.config.max_word_length;
    let g = cfg.graph(rng);
    let autos = automorphisms(&g, AUTOMORPHISM_LIMIT);
    let mut pullback = Tally::new("holonomy-of-pushforward", Some(&d), tol);
    let mut composition = Tally::new("action-composition", Some(&d), tol);
    let mut functorial = Tally::new("path-image-functorial", Some(&d), 0.0);

    let mut check = |conn: &GeneralizedConnection,
                     f: &GroupoidAutomorphism,
                     probes: &[PathWord],
                     rng: &mut ChaCha8Rng|
     -> Outcome<()> {
        let moved = f.act(conn)?;
        let back = f.inverse();
        for p in probes {
            pullback.deviation(
                moved
                    .holonomy(p)?
                    .distance(&conn.holonomy(&back.apply_to_path(p)?)?)?,
            );
        }
        let second = &autos[rng.random_range(0..autos.len())];
        composition.deviation(
            second
                .compose(f)?
                .act(conn)?
                .max_distance(&second.act(&moved)?)?,
        );
        let (p2, p1) = random_composable_pair(rng, &g, len);
        functorial.holds(
            f.apply_to_path(&p2.compose(&p1)?)?
                == f.apply_to_path(&p2)?.compose(&f.apply_to_path(&p1)?)?,
        );
        Ok(())
    };

    let enumerated = if cfg.config.exhaustive {
        all_connections(&g, d, EXHAUSTIVE_LIMIT / autos.len() as u64)?
    } else {
        None
    };
    match enumerated {
        Some(conns) => {
            let probes = probe_set(&g, rng, len)?;
            for conn in &conns {
                for f in &autos {
                    check(conn, f, &probes, rng)?;
                }
            }
        }
        None => {
            for _ in 0..cfg.config.samples {
                let f = autos[rng.random_range(0..autos.len())].clone();
                let conn = random_connection(&g, d, rng);
                let probes = random_probes(&g, rng, len);
                check(&conn, &f, &probes, rng)?;
            }
        }
    }
    Ok([pullback, composition, functorial]
        .into_iter()
        .map(Tally::finish)
        .collect())
}

fn fresh_vertex_id(graph: &EmbeddedGraph, stem: &str) -> String {
    let mut id = stem.to_string();
    while graph.vertex_index(&id).is_ok() {
        id.push('\'');
    }
    id
}

/// Subdivides the configured edge, then the first half of it again.
fn refinements(
    cfg: &LoadedConfig,
    coarse: &Arc<EmbeddedGraph>,
) -> Outcome<(Refinement, Refinement)> {
    let edge = match &cfg.config.subdivide {
        Some(e) => e.clone(),
        None => coarse
            .edges()
            .first()
            .map(|e| e.id.clone())
            .ok_or_else(|| {
                CliError::Config("refinement needs a graph with at least one edge".into())
            })?,
    };
    let (mid, first) = subdivide_edge(
        coarse,
        &edge,
        NewVertex::named(fresh_vertex_id(coarse, &format!("{edge}_mid"))),
    )?;
    let half = format!("{edge}_a");
    let (_, second) = subdivide_edge(
        &mid,
        &half,
        NewVertex::named(fresh_vertex_id(&mid, &format!("{half}_mid"))),
    )?;
    Ok((first, second))
}

fn assignment_key(conn: &GeneralizedConnection) -> String {
    conn.assignment()
        .iter()
        .map(|g| g.to_string())
        .collect::<Vec<_>>()
        .join(";")
}

fn projective(
    cfg: &LoadedConfig,
    d: GroupDescriptor,
    rng: &mut ChaCha8Rng,
) -> Outcome<Vec<Property>> {
    let tol = exact_tolerance(&d, cfg.tolerance(1e-10));
    let len = cfg.config.max_word_length;
    let coarse = cfg.graph(rng);
    let (first, second) = refinements(cfg, &coarse)?;
    let composite = first.then(&second)?;
    let mut commutes = Tally::new("restriction-commutes-with-evaluation", Some(&d), tol);
    let mut composes = Tally::new("composite-restriction", Some(&d), tol);
    let mut lifts = Tally::new("section-restricts-back", Some(&d), tol);

    let mut restrict_check =
        |fine: &GeneralizedConnection, probes: &[PathWord]| -> Outcome<GeneralizedConnection> {
            let c = first.restrict(fine)?;
            for p in probes {
                commutes.deviation(
                    c.holonomy(p)?
                        .distance(&fine.holonomy(&first.expand_path(p)?)?)?,
                );
            }
            Ok(c)
        };

    let mut out = Vec::new();
    let enumerated = if cfg.config.exhaustive {
        all_connections(first.fine(), d, EXHAUSTIVE_LIMIT)?
    } else {
        None
    };
    match enumerated {
        Some(fine_conns) => {
            let probes = probe_set(&coarse, rng, len)?;
            let mut fibers: HashMap<String, u64> = HashMap::new();
            for fine in &fine_conns {
                let c = restrict_check(fine, &probes)?;
                *fibers.entry(assignment_key(&c)).or_default() += 1;
            }
            let coarse_total =
                all_connections(&coarse, d, EXHAUSTIVE_LIMIT)?.map_or(0, |c| c.len() as u64);
            let expected = fine_conns.len() as u64 / coarse_total.max(1);
            let mut fiber = Tally::new("fiber-size", Some(&d), 0.0);
            for count in fibers.values() {
                fiber.deviation(count.abs_diff(expected) as f64);
            }
            for _ in fibers.len() as u64..coarse_total {
                fiber.deviation(expected as f64);
            }
            out.push(fiber);
        }
        None => {
            for _ in 0..cfg.config.samples {
                let fine = random_connection(first.fine(), d, rng);
                let probes = random_probes(&coarse, rng, len);
                restrict_check(&fine, &probes)?;
            }
        }
    }
    for _ in 0..cfg.config.samples {
        let finest = random_connection(composite.fine(), d, rng);
        composes.deviation(
            composite
                .restrict(&finest)?
                .max_distance(&first.restrict(&second.restrict(&finest)?)?)?,
        );
        let c = random_connection(&coarse, d, rng);
        lifts.deviation(first.restrict(&first.section(&c, rng)?)?.max_distance(&c)?);
    }
    out.insert(0, commutes);
    out.push(composes);
    out.push(lifts);
    Ok(out.into_iter().map(Tally::finish).collect())
}

/// A loop in which some edge occurs exactly once, so its holonomy is
/// Haar-distributed.
pub fn haar_loop(graph: &Arc<EmbeddedGraph>) -> Option<PathWord> {
    for e in graph.edge_indices() {
        let (s, t) = (graph.source_of(e), graph.target_of(e));
        let mut previous: Vec<Option<(VertexIndex, SignedEdge)>> = vec![None; graph.vertex_count()];
        let mut seen = vec![false; graph.vertex_count()];
        let mut queue = std::collections::VecDeque::from([t]);
        seen[t.0] = true;
        while let Some(v) = queue.pop_front() {
            for l in graph.letters_from(v) {
                let next = l.end(graph);
                if l.edge != e && !seen[next.0] {
                    seen[next.0] = true;
                    previous[next.0] = Some((v, l));
                    queue.push_back(next);
                }
            }
        }
        if !seen[s.0] {
            continue;
        }
        let mut back = Vec::new();
        let mut cur = s;
        while let Some((prev, l)) = previous[cur.0] {
            back.push(l);
            cur = prev;
        }
        back.reverse();
        let mut letters = vec![SignedEdge::forward(e)];
        letters.extend(back);
        return reduce(graph, &letters, s).ok();
    }
    None
}

/// `(E[tr h], E[tr² h])` for Haar-distributed `h`.
pub fn trace_moments(d: &GroupDescriptor) -> (f64, f64) {
    match d.kind() {
        GroupKind::Cyclic(1) | GroupKind::Symmetric(1) => (1.0, 1.0),
        GroupKind::Cyclic(2) => (0.0, 1.0),
        GroupKind::Cyclic(_) => (0.0, 0.5),
        GroupKind::Symmetric(_) => (1.0, 2.0),
        GroupKind::Su2 => (0.0, 1.0),
    }
}

fn invariance(
    name: &'static str,
    d: &GroupDescriptor,
    r: &InvarianceReport,
    cases: u64,
) -> Property {
    Property {
        name: name.to_string(),
        descriptor: Some(d.to_string()),
        samples: if r.samples == 0 { cases } else { r.samples },
        max_deviation: r.delta,
        tolerance: r.bound,
        passed: r.passed,
    }
}

fn measure_suite(
    cfg: &LoadedConfig,
    d: GroupDescriptor,
    rng: &mut ChaCha8Rng,
    workers: usize,
) -> Outcome<Vec<Property>> {
    let g = cfg.graph(rng);
    let lp = haar_loop(&g)
        .ok_or_else(|| CliError::Config("the measure suite needs a graph with a cycle".into()))?;
    let (first, _) = refinements(cfg, &g)?;
    let cases = |edges: usize| {
        d.order()
            .and_then(|n| n.checked_pow(edges as u32))
            .filter(|&c| c <= EXACT_LIMIT)
    };
    let budget = match cases(first.fine().edge_count()) {
        Some(_) => Budget::Exact,
        None => Budget::MonteCarlo {
            samples: cfg.config.samples,
            workers,
        },
    };
    let coarse_cases = cases(g.edge_count()).unwrap_or(0);
    let fine_cases = cases(first.fine().edge_count()).unwrap_or(0);
    let seed = rng.random::<u64>();
    let mut out = Vec::new();

    let one = measure::integrate(&CylindricalFunction::constant(&g, d, 1.0), budget, seed)?;
    let mut t = Tally::new("integral-of-one", Some(&d), 0.0);
    t.deviation((one.value - 1.0).abs());
    t.samples = one.samples.max(coarse_cases);
    out.push(t.finish());

    if d.is_finite() && budget == Budget::Exact {
        let edge = PathWord::edge(&g, SignedEdge::forward(genconn::groupoid::EdgeIndex(0)))?;
        let r = measure::integrate(
            &CylindricalFunction::indicator_identity(&g, d, edge)?,
            budget,
            seed,
        )?;
        let order = d.order().unwrap_or(1);
        let expected = if order == 1 {
            "1".to_string()
        } else {
            format!("1/{order}")
        };
        let mut t = Tally::new("indicator-identity", Some(&d), 0.0);
        match r.fraction {
            Some(f) if f.to_string() == expected => t.deviation(0.0),
            _ => t.deviation((r.value - 1.0 / order as f64).abs().max(f64::MIN_POSITIVE)),
        }
        t.samples = coarse_cases;
        out.push(t.finish());
    }

    let (mean_tr, mean_tr2) = trace_moments(&d);
    for (name, f, expected) in [
        (
            "wilson-mean",
            CylindricalFunction::wilson(&g, d, lp.clone())?,
            mean_tr,
        ),
        (
            "wilson-squared-mean",
            CylindricalFunction::wilson_squared(&g, d, lp.clone())?,
            mean_tr2,
        ),
    ] {
        let r = measure::integrate(&f, budget, seed)?;
        let tol = match r.mode {
            genconn::Mode::Exact => 1e-12,
            genconn::Mode::MonteCarlo => 3.0 * r.std_error,
        };
        let mut t = Tally::new(name, Some(&d), tol);
        t.deviation((r.value - expected).abs());
        t.samples = r.samples.max(coarse_cases);
        out.push(t.finish());
    }

    let f = CylindricalFunction::wilson(&g, d, lp)?;
    let h = GaugeTransformation::random(&g, d, rng);
    out.push(invariance(
        "gauge-pushforward",
        &d,
        &measure::verify_gauge_invariance(&f, &h, budget, seed)?,
        coarse_cases,
    ));
    let autos = automorphisms(&g, AUTOMORPHISM_LIMIT);
    let a = &autos[rng.random_range(0..autos.len())];
    out.push(invariance(
        "automorphism-pushforward",
        &d,
        &measure::verify_automorphism_invariance(&f, a, budget, seed)?,
        coarse_cases,
    ));
    out.push(invariance(
        "refinement-pushforward",
        &d,
        &measure::verify_refinement_consistency(&f, &first, budget, seed)?,
        fine_cases,
    ));
    Ok(out)
}
