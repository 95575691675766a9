//! Product Haar measure over the generator edges of a graph, and integration
//! of cylindrical functions against it.
//!
//! Finite groups are integrated exactly by enumerating every edge assignment.
//! The mean is formed over exact dyadic rationals, so any two integrands whose
//! value multisets agree (for instance because a symmetry permutes the
//! enumeration) produce bit-identical results. `su2` uses Monte Carlo over
//! per-worker ChaCha streams derived from one master seed; all comparisons
//! pair both sides on the same draws.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::connection::{random_connection, GeneralizedConnection};
use crate::error::{Error, Result};
use crate::group::{GroupDescriptor, GroupElement};
use crate::groupoid::{check_same_graph, EmbeddedGraph, PathWord};
use crate::projective::Refinement;
use crate::symmetry::{GaugeTransformation, GroupoidAutomorphism};

/// Largest number of edge assignments exact mode will enumerate.
pub const EXACT_LIMIT: u64 = 10_000_000;

/// Relative floating-point floor added to Monte Carlo comparison bounds:
/// paired differences of pointwise-invariant integrands are pure rounding
/// noise, which need not be centred.
pub const MC_NOISE_FLOOR: f64 = 1e-12;

pub type Evaluator = Arc<dyn Fn(&[GroupElement]) -> f64 + Send + Sync>;

/// A function of the holonomies along finitely many probe paths.
#[derive(Clone)]
pub struct CylindricalFunction {
    graph: Arc<EmbeddedGraph>,
    descriptor: GroupDescriptor,
    probe_paths: Vec<PathWord>,
    evaluator: Evaluator,
    bound: f64,
}

impl fmt::Debug for CylindricalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CylindricalFunction")
            .field("graph", &self.graph.id())
            .field("descriptor", &self.descriptor)
            .field(
                "probe_paths",
                &self
                    .probe_paths
                    .iter()
                    .map(|p| p.to_string())
                    .collect::<Vec<_>>(),
            )
            .field("bound", &self.bound)
            .finish()
    }
}

impl CylindricalFunction {
    /// `bound` declares `sup |f|`; it is trusted, not checked.
    pub fn new(
        graph: &Arc<EmbeddedGraph>,
        descriptor: GroupDescriptor,
        probe_paths: Vec<PathWord>,
        bound: f64,
        evaluator: impl Fn(&[GroupElement]) -> f64 + Send + Sync + 'static,
    ) -> Result<Self> {
        for p in &probe_paths {
            check_same_graph(graph, p.graph())?;
        }
        Ok(Self {
            graph: Arc::clone(graph),
            descriptor,
            probe_paths,
            evaluator: Arc::new(evaluator),
            bound,
        })
    }

    pub fn constant(graph: &Arc<EmbeddedGraph>, descriptor: GroupDescriptor, c: f64) -> Self {
        Self::new(graph, descriptor, Vec::new(), c.abs(), move |_| c).expect("no probes")
    }

    /// Trace of the holonomy around a closed path.
    pub fn wilson(
        graph: &Arc<EmbeddedGraph>,
        descriptor: GroupDescriptor,
        loop_path: PathWord,
    ) -> Result<Self> {
        require_closed(&loop_path)?;
        let b = GroupElement::trace_bound(&descriptor);
        Self::new(graph, descriptor, vec![loop_path], b, |h| h[0].trace())
    }

    pub fn wilson_squared(
        graph: &Arc<EmbeddedGraph>,
        descriptor: GroupDescriptor,
        loop_path: PathWord,
    ) -> Result<Self> {
        require_closed(&loop_path)?;
        let b = GroupElement::trace_bound(&descriptor);
        Self::new(graph, descriptor, vec![loop_path], b * b, |h| {
            h[0].trace().powi(2)
        })
    }

    /// `1` when the holonomy along `path` is the identity, else `0`.
    pub fn indicator_identity(
        graph: &Arc<EmbeddedGraph>,
        descriptor: GroupDescriptor,
        path: PathWord,
    ) -> Result<Self> {
        Self::new(graph, descriptor, vec![path], 1.0, |h| {
            h[0].is_identity() as u8 as f64
        })
    }

    /// Product of holonomy traces over the given paths.
    pub fn character_product(
        graph: &Arc<EmbeddedGraph>,
        descriptor: GroupDescriptor,
        paths: Vec<PathWord>,
    ) -> Result<Self> {
        let b = GroupElement::trace_bound(&descriptor).powi(paths.len() as i32);
        Self::new(graph, descriptor, paths, b, |h| {
            h.iter().map(GroupElement::trace).product()
        })
    }

    /// Registry used by the command line: `wilson`, `wilson2`,
    /// `indicator-identity`, `character-product`, `constant` (the function 1)
    /// and `constant:<c>`.
    pub fn builtin(
        name: &str,
        graph: &Arc<EmbeddedGraph>,
        descriptor: GroupDescriptor,
        paths: Vec<PathWord>,
    ) -> Result<Self> {
        let one_path = |mut paths: Vec<PathWord>| {
            if paths.len() == 1 {
                Ok(paths.remove(0))
            } else {
                Err(Error::Format(format!(
                    "integrand `{name}` takes exactly one path"
                )))
            }
        };
        match name {
            "wilson" => Self::wilson(graph, descriptor, one_path(paths)?),
            "wilson2" => Self::wilson_squared(graph, descriptor, one_path(paths)?),
            "indicator-identity" => Self::indicator_identity(graph, descriptor, one_path(paths)?),
            "character-product" if !paths.is_empty() => {
                Self::character_product(graph, descriptor, paths)
            }
            "character-product" => Err(Error::Format(
                "integrand `character-product` needs at least one path".into(),
            )),
            "constant" => Ok(Self::constant(graph, descriptor, 1.0)),
            _ => match name.strip_prefix("constant:").map(str::parse::<f64>) {
                Some(Ok(c)) if c.is_finite() => Ok(Self::constant(graph, descriptor, c)),
                _ => Err(Error::Format(format!("unknown integrand `{name}`"))),
            },
        }
    }

    pub fn graph(&self) -> &Arc<EmbeddedGraph> {
        &self.graph
    }

    pub fn descriptor(&self) -> &GroupDescriptor {
        &self.descriptor
    }

    pub fn probe_paths(&self) -> &[PathWord] {
        &self.probe_paths
    }

    pub fn bound(&self) -> f64 {
        self.bound
    }

    pub fn evaluate(&self, conn: &GeneralizedConnection) -> Result<f64> {
        let holonomies = self
            .probe_paths
            .iter()
            .map(|p| conn.holonomy(p))
            .collect::<Result<Vec<_>>>()?;
        Ok((self.evaluator)(&holonomies))
    }
}

fn require_closed(p: &PathWord) -> Result<()> {
    if p.is_closed() {
        Ok(())
    } else {
        let g = p.graph();
        Err(Error::NotClosed {
            source_vertex: g.vertex(p.source()).id.clone(),
            target: g.vertex(p.target()).id.clone(),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Budget {
    Exact,
    MonteCarlo { samples: u64, workers: usize },
}

impl Budget {
    pub fn monte_carlo(samples: u64) -> Self {
        Budget::MonteCarlo {
            samples,
            workers: 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Exact,
    MonteCarlo,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Exact => "exact",
            Mode::MonteCarlo => "monte_carlo",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IntegralResult {
    pub value: f64,
    pub mode: Mode,
    /// Monte Carlo sample count; `0` in exact mode.
    pub samples: u64,
    /// `sd / √samples`; `0` in exact mode.
    pub std_error: f64,
    /// Exact mean as a fraction, when every integrand value is an integer.
    pub fraction: Option<BigRational>,
}

/// Outcome of comparing an integral with the integral of a transformed
/// integrand.
#[derive(Debug, Clone, PartialEq)]
pub struct InvarianceReport {
    pub mode: Mode,
    pub left: f64,
    pub right: f64,
    /// `|left - right|`; exact mode computes it over rationals.
    pub delta: f64,
    /// `0` in exact mode; `3σ` of the paired differences plus the noise floor
    /// in Monte Carlo mode.
    pub bound: f64,
    pub samples: u64,
    pub passed: bool,
}

pub fn integrate(f: &CylindricalFunction, budget: Budget, seed: u64) -> Result<IntegralResult> {
    match budget {
        Budget::Exact => {
            let mean = exact_mean(&f.graph, &f.descriptor, |c| f.evaluate(c))?;
            Ok(IntegralResult {
                value: mean.value,
                mode: Mode::Exact,
                samples: 0,
                std_error: 0.0,
                fraction: mean.integral.then(|| mean.exact.clone()),
            })
        }
        Budget::MonteCarlo { samples, workers } => {
            let stats = paired_monte_carlo(samples, workers, seed, |rng| {
                let c = random_connection(&f.graph, f.descriptor, rng);
                Ok((f.evaluate(&c)?, 0.0))
            })?;
            Ok(IntegralResult {
                value: stats.left.mean,
                mode: Mode::MonteCarlo,
                samples,
                std_error: stats.left.std_error(),
                fraction: None,
            })
        }
    }
}

/// Compares `∫ f` with `∫ f ∘ gauge_act(g, ·)`.
pub fn verify_gauge_invariance(
    f: &CylindricalFunction,
    g: &GaugeTransformation,
    budget: Budget,
    seed: u64,
) -> Result<InvarianceReport> {
    check_same_graph(&f.graph, g.graph())?;
    f.descriptor.check_same(g.descriptor())?;
    compare_on_graph(f, budget, seed, |c| g.act(c))
}

/// Compares `∫ f` with `∫ f ∘ automorphism_act(F, ·)`.
pub fn verify_automorphism_invariance(
    f: &CylindricalFunction,
    automorphism: &GroupoidAutomorphism,
    budget: Budget,
    seed: u64,
) -> Result<InvarianceReport> {
    check_same_graph(&f.graph, automorphism.graph())?;
    compare_on_graph(f, budget, seed, |c| automorphism.act(c))
}

/// Compares `∫ f` on the coarse graph with `∫ f ∘ restrict` on the fine one.
pub fn verify_refinement_consistency(
    f_coarse: &CylindricalFunction,
    refinement: &Refinement,
    budget: Budget,
    seed: u64,
) -> Result<InvarianceReport> {
    check_same_graph(&f_coarse.graph, refinement.coarse())?;
    let d = f_coarse.descriptor;
    let fine = refinement.fine();
    match budget {
        Budget::Exact => {
            let left = exact_mean(&f_coarse.graph, &d, |c| f_coarse.evaluate(c))?;
            let right = exact_mean(fine, &d, |c| f_coarse.evaluate(&refinement.restrict(c)?))?;
            Ok(exact_report(&left, &right))
        }
        Budget::MonteCarlo { samples, workers } => {
            let stats = paired_monte_carlo(samples, workers, seed, |rng| {
                // both sides start from the same stream state
                let mut shared = rng.clone();
                let coarse = random_connection(&f_coarse.graph, d, &mut shared);
                let fine_conn = random_connection(fine, d, rng);
                Ok((
                    f_coarse.evaluate(&coarse)?,
                    f_coarse.evaluate(&refinement.restrict(&fine_conn)?)?,
                ))
            })?;
            Ok(mc_report(&stats, samples, f_coarse.bound))
        }
    }
}

fn compare_on_graph(
    f: &CylindricalFunction,
    budget: Budget,
    seed: u64,
    transform: impl Fn(&GeneralizedConnection) -> Result<GeneralizedConnection> + Sync,
) -> Result<InvarianceReport> {
    match budget {
        Budget::Exact => {
            let left = exact_mean(&f.graph, &f.descriptor, |c| f.evaluate(c))?;
            let right = exact_mean(&f.graph, &f.descriptor, |c| f.evaluate(&transform(c)?))?;
            Ok(exact_report(&left, &right))
        }
        Budget::MonteCarlo { samples, workers } => {
            let stats = paired_monte_carlo(samples, workers, seed, |rng| {
                let c = random_connection(&f.graph, f.descriptor, rng);
                Ok((f.evaluate(&c)?, f.evaluate(&transform(&c)?)?))
            })?;
            Ok(mc_report(&stats, samples, f.bound))
        }
    }
}

fn exact_report(left: &ExactMean, right: &ExactMean) -> InvarianceReport {
    let delta = (&left.exact - &right.exact)
        .to_f64()
        .unwrap_or(f64::INFINITY)
        .abs();
    InvarianceReport {
        mode: Mode::Exact,
        left: left.value,
        right: right.value,
        delta,
        bound: 0.0,
        samples: 0,
        passed: left.exact == right.exact,
    }
}

fn mc_report(stats: &PairedStats, samples: u64, scale: f64) -> InvarianceReport {
    let delta = stats.diff.mean.abs();
    let bound = 3.0 * stats.diff.std_error() + MC_NOISE_FLOOR * scale.max(1.0);
    InvarianceReport {
        mode: Mode::MonteCarlo,
        left: stats.left.mean,
        right: stats.right.mean,
        delta,
        bound,
        samples,
        passed: delta <= bound,
    }
}

#[derive(Debug, Clone)]
struct ExactMean {
    value: f64,
    exact: BigRational,
    /// every evaluated value was an integer
    integral: bool,
}

/// Mean over every edge assignment, computed as an exact rational.
fn exact_mean(
    graph: &Arc<EmbeddedGraph>,
    descriptor: &GroupDescriptor,
    integrand: impl Fn(&GeneralizedConnection) -> Result<f64> + Sync,
) -> Result<ExactMean> {
    let elements = descriptor
        .elements()
        .ok_or_else(|| Error::UnsupportedExact(descriptor.to_string()))?;
    let radix = elements.len() as u64;
    let edges = graph.edge_count();
    let total = u32::try_from(edges)
        .ok()
        .and_then(|e| radix.checked_pow(e))
        .filter(|&n| n <= EXACT_LIMIT)
        .ok_or_else(|| Error::BudgetExceeded {
            count: format!("{radix}^{edges}"),
            limit: EXACT_LIMIT,
        })?;

    let chunks = rayon::current_num_threads().max(1) as u64 * 4;
    let chunk_len = total.div_ceil(chunks).max(1);
    let partials = (0..total.div_ceil(chunk_len))
        .into_par_iter()
        .map(|chunk| {
            let start = chunk * chunk_len;
            let end = (start + chunk_len).min(total);
            let mut counts: HashMap<u64, u64> = HashMap::new();
            // digits[i] indexes the value on edge i; edge 0 varies fastest
            let mut digits: Vec<usize> = (0..edges)
                .scan(start, |rest, _| {
                    let d = (*rest % radix) as usize;
                    *rest /= radix;
                    Some(d)
                })
                .collect();
            let mut assignment: Vec<GroupElement> = digits.iter().map(|&d| elements[d]).collect();
            for _ in start..end {
                let conn = GeneralizedConnection::new(graph, *descriptor, assignment.clone())?;
                let v = integrand(&conn)?;
                if !v.is_finite() {
                    return Err(Error::Format(format!("integrand returned {v}")));
                }
                // fold -0.0 into 0.0
                *counts.entry((v + 0.0).to_bits()).or_default() += 1;
                for (i, d) in digits.iter_mut().enumerate() {
                    *d += 1;
                    if *d < elements.len() {
                        assignment[i] = elements[*d];
                        break;
                    }
                    *d = 0;
                    assignment[i] = elements[0];
                }
            }
            Ok(counts)
        })
        .collect::<Result<Vec<_>>>()?;

    let mut counts: HashMap<u64, u64> = HashMap::new();
    for part in partials {
        for (bits, n) in part {
            *counts.entry(bits).or_default() += n;
        }
    }
    let mut sum = BigRational::zero();
    let mut integral = true;
    for (bits, n) in counts {
        let v = f64::from_bits(bits);
        integral &= v.fract() == 0.0;
        let r = BigRational::from_float(v).expect("finite");
        sum += r * BigRational::from_integer(BigInt::from(n));
    }
    let exact = sum / BigRational::from_integer(BigInt::from(total));
    let value = exact.to_f64().unwrap_or(f64::NAN);
    Ok(ExactMean {
        value,
        exact,
        integral,
    })
}

/// Running mean and sum of squared deviations.
#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    n: u64,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.n += 1;
        let delta = x - self.mean;
        self.mean += delta / self.n as f64;
        self.m2 += delta * (x - self.mean);
    }

    fn merge(&self, other: &Moments) -> Moments {
        if self.n == 0 {
            return *other;
        }
        if other.n == 0 {
            return *self;
        }
        let n = self.n + other.n;
        let delta = other.mean - self.mean;
        let mean = self.mean + delta * other.n as f64 / n as f64;
        let m2 = self.m2 + other.m2 + delta * delta * (self.n as f64 * other.n as f64) / n as f64;
        Moments { n, mean, m2 }
    }

    fn std_error(&self) -> f64 {
        if self.n < 2 {
            return 0.0;
        }
        (self.m2.max(0.0) / (self.n - 1) as f64).sqrt() / (self.n as f64).sqrt()
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct PairedStats {
    left: Moments,
    right: Moments,
    diff: Moments,
}

/// Runs `kernel` `samples` times, split over `workers` streams. Worker `w`
/// owns stream `w` of the ChaCha generator keyed by `seed`; partial results
/// merge in worker order, so output is reproducible for a fixed worker count.
fn paired_monte_carlo(
    samples: u64,
    workers: usize,
    seed: u64,
    kernel: impl Fn(&mut ChaCha8Rng) -> Result<(f64, f64)> + Sync,
) -> Result<PairedStats> {
    if samples == 0 {
        return Err(Error::Format(
            "Monte Carlo needs at least one sample".into(),
        ));
    }
    let workers = workers.max(1) as u64;
    let partials = (0..workers)
        .into_par_iter()
        .map(|w| {
            let share = samples / workers + u64::from(w < samples % workers);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(w);
            let mut stats = PairedStats::default();
            for _ in 0..share {
                let (a, b) = kernel(&mut rng)?;
                stats.left.push(a);
                stats.right.push(b);
                stats.diff.push(a - b);
            }
            Ok(stats)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(partials
        .iter()
        .fold(PairedStats::default(), |acc, p| PairedStats {
            left: acc.left.merge(&p.left),
            right: acc.right.merge(&p.right),
            diff: acc.diff.merge(&p.diff),
        }))
}
