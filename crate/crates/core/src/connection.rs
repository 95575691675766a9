//! Generalized connections: functors from the path groupoid of a graph into a
//! structure group, stored by their values on generator edges.

use std::collections::HashMap;
use std::sync::Arc;

use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::group::{GroupDescriptor, GroupElement, GroupKind};
use crate::groupoid::{
    check_same_graph, EdgeIndex, EmbeddedGraph, Orientation, PathWord, SignedEdge,
};

/// A functor `P → G` on the subgroupoid generated by a graph. Only generator
/// values are stored; every path value is derived from them.
#[derive(Debug, Clone)]
pub struct GeneralizedConnection {
    graph: Arc<EmbeddedGraph>,
    descriptor: GroupDescriptor,
    assignment: Vec<GroupElement>,
}

impl GeneralizedConnection {
    /// `assignment[i]` is the value on edge `i`.
    pub fn new(
        graph: &Arc<EmbeddedGraph>,
        descriptor: GroupDescriptor,
        assignment: Vec<GroupElement>,
    ) -> Result<Self> {
        if assignment.len() != graph.edge_count() {
            let missing = graph
                .edges()
                .get(assignment.len())
                .map_or_else(|| "<extra value>".to_string(), |e| e.id.clone());
            return Err(Error::MissingAssignment(missing));
        }
        for g in &assignment {
            descriptor.check_same(g.descriptor())?;
        }
        Ok(Self {
            graph: Arc::clone(graph),
            descriptor,
            assignment,
        })
    }

    /// Builds a connection from values keyed by edge id.
    pub fn from_map(
        graph: &Arc<EmbeddedGraph>,
        descriptor: GroupDescriptor,
        values: &HashMap<String, GroupElement>,
    ) -> Result<Self> {
        for id in values.keys() {
            graph.edge_index(id)?;
        }
        let assignment = graph
            .edges()
            .iter()
            .map(|e| {
                values
                    .get(&e.id)
                    .copied()
                    .ok_or_else(|| Error::MissingAssignment(e.id.clone()))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(graph, descriptor, assignment)
    }

    pub fn trivial(graph: &Arc<EmbeddedGraph>, descriptor: GroupDescriptor) -> Self {
        Self {
            graph: Arc::clone(graph),
            descriptor,
            assignment: vec![descriptor.identity(); graph.edge_count()],
        }
    }

    pub fn graph(&self) -> &Arc<EmbeddedGraph> {
        &self.graph
    }

    pub fn descriptor(&self) -> &GroupDescriptor {
        &self.descriptor
    }

    pub fn assignment(&self) -> &[GroupElement] {
        &self.assignment
    }

    pub fn value(&self, e: EdgeIndex) -> &GroupElement {
        &self.assignment[e.0]
    }

    pub fn letter_value(&self, letter: SignedEdge) -> GroupElement {
        let g = self.assignment[letter.edge.0];
        match letter.orientation {
            Orientation::Forward => g,
            Orientation::Reverse => g.inverse(),
        }
    }

    /// Evaluation `π_p` at this connection. Later letters multiply on the
    /// left, so `holonomy(p2 ∘ p1) = holonomy(p2) · holonomy(p1)`.
    pub fn holonomy(&self, p: &PathWord) -> Result<GroupElement> {
        check_same_graph(&self.graph, p.graph())?;
        p.letters()
            .iter()
            .try_fold(self.descriptor.identity(), |acc, &l| {
                self.letter_value(l).multiply(&acc)
            })
    }

    /// First candidate path on which the two connections differ.
    pub fn separates(
        &self,
        other: &GeneralizedConnection,
        candidates: &[PathWord],
    ) -> Result<Option<PathWord>> {
        check_same_graph(&self.graph, &other.graph)?;
        self.descriptor.check_same(&other.descriptor)?;
        for p in candidates {
            if !self.holonomy(p)?.equal(&other.holonomy(p)?)? {
                return Ok(Some(p.clone()));
            }
        }
        Ok(None)
    }

    /// Largest element distance over all generator edges.
    pub fn max_distance(&self, other: &GeneralizedConnection) -> Result<f64> {
        check_same_graph(&self.graph, &other.graph)?;
        self.assignment
            .iter()
            .zip(&other.assignment)
            .try_fold(0.0f64, |m, (a, b)| Ok(m.max(a.distance(b)?)))
    }

    pub(crate) fn with_assignment(&self, assignment: Vec<GroupElement>) -> Self {
        Self {
            graph: Arc::clone(&self.graph),
            descriptor: self.descriptor,
            assignment,
        }
    }
}

/// Independent Haar draws on every edge, in edge order.
pub fn random_connection<R: Rng + ?Sized>(
    graph: &Arc<EmbeddedGraph>,
    descriptor: GroupDescriptor,
    rng: &mut R,
) -> GeneralizedConnection {
    let assignment = (0..graph.edge_count())
        .map(|_| descriptor.haar_sample(rng))
        .collect();
    GeneralizedConnection {
        graph: Arc::clone(graph),
        descriptor,
        assignment,
    }
}

pub fn holonomy(conn: &GeneralizedConnection, p: &PathWord) -> Result<GroupElement> {
    conn.holonomy(p)
}

pub fn separates(
    a: &GeneralizedConnection,
    b: &GeneralizedConnection,
    candidates: &[PathWord],
) -> Result<Option<PathWord>> {
    a.separates(b, candidates)
}

pub const MAX_POLYNOMIAL_DEGREE: u32 = 6;
pub const MIN_QUADRATURE_POINTS: usize = 16;

#[derive(Debug, Clone, PartialEq)]
pub struct Monomial {
    pub coefficient: f64,
    pub exponents: Vec<u32>,
}

/// Real polynomial in the ambient coordinates.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Polynomial {
    pub terms: Vec<Monomial>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: f64, dim: usize) -> Self {
        Self {
            terms: vec![Monomial {
                coefficient: c,
                exponents: vec![0; dim],
            }],
        }
    }

    pub fn degree(&self) -> u32 {
        self.terms
            .iter()
            .map(|m| m.exponents.iter().sum())
            .max()
            .unwrap_or(0)
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|m| {
                m.exponents
                    .iter()
                    .zip(x)
                    .fold(m.coefficient, |acc, (&k, &xi)| acc * xi.powi(k as i32))
            })
            .sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SmoothKind {
    U1OneForm,
    Su2OneForm,
}

/// Components `A_μ` of a one-form in a fixed trivialization: one polynomial
/// per coordinate direction (`u1`), or one `su(2)` triple per direction.
#[derive(Debug, Clone, PartialEq)]
pub enum OneForm {
    U1(Vec<Polynomial>),
    Su2(Vec<[Polynomial; 3]>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SmoothConnectionSpec {
    form: OneForm,
    quadrature_points: usize,
}

impl SmoothConnectionSpec {
    pub fn new(form: OneForm, quadrature_points: usize) -> Result<Self> {
        if quadrature_points < MIN_QUADRATURE_POINTS {
            return Err(Error::InvalidSmoothSpec(format!(
                "quadrature_points must be at least {MIN_QUADRATURE_POINTS}, got {quadrature_points}"
            )));
        }
        let dim = match &form {
            OneForm::U1(c) => c.len(),
            OneForm::Su2(c) => c.len(),
        };
        if dim == 0 {
            return Err(Error::InvalidSmoothSpec("no components".into()));
        }
        let polys: Vec<&Polynomial> = match &form {
            OneForm::U1(c) => c.iter().collect(),
            OneForm::Su2(c) => c.iter().flatten().collect(),
        };
        for p in polys {
            if p.degree() > MAX_POLYNOMIAL_DEGREE {
                return Err(Error::InvalidSmoothSpec(format!(
                    "polynomial degree {} exceeds {MAX_POLYNOMIAL_DEGREE}",
                    p.degree()
                )));
            }
            if p.terms.iter().any(|m| m.exponents.len() != dim) {
                return Err(Error::InvalidSmoothSpec(format!(
                    "exponent tuples must have length {dim}"
                )));
            }
        }
        Ok(Self {
            form,
            quadrature_points,
        })
    }

    pub fn kind(&self) -> SmoothKind {
        match self.form {
            OneForm::U1(_) => SmoothKind::U1OneForm,
            OneForm::Su2(_) => SmoothKind::Su2OneForm,
        }
    }

    pub fn form(&self) -> &OneForm {
        &self.form
    }

    pub fn dimension(&self) -> usize {
        match &self.form {
            OneForm::U1(c) => c.len(),
            OneForm::Su2(c) => c.len(),
        }
    }

    pub fn quadrature_points(&self) -> usize {
        self.quadrature_points
    }

    pub fn with_quadrature_points(&self, quadrature_points: usize) -> Result<Self> {
        Self::new(self.form.clone(), quadrature_points)
    }

    /// `∫ A` along one polyline (`u1` only), by Gauss–Legendre on each segment.
    pub fn line_integral(&self, polyline: &[Vec<f64>]) -> Result<f64> {
        let OneForm::U1(components) = &self.form else {
            return Err(Error::InvalidSmoothSpec(
                "line integral needs a u1 one-form".into(),
            ));
        };
        let rule = gauss_legendre(self.quadrature_points);
        let mut total = 0.0;
        let mut x = vec![0.0; components.len()];
        for seg in polyline.windows(2) {
            let (a, b) = (&seg[0], &seg[1]);
            let mut seg_sum = 0.0;
            for &(node, weight) in &rule {
                let t = 0.5 * (node + 1.0);
                for (xi, (ai, bi)) in x.iter_mut().zip(a.iter().zip(b)) {
                    *xi = ai + (bi - ai) * t;
                }
                let pullback: f64 = components
                    .iter()
                    .zip(a.iter().zip(b))
                    .map(|(c, (ai, bi))| c.eval(&x) * (bi - ai))
                    .sum();
                seg_sum += weight * pullback;
            }
            total += 0.5 * seg_sum;
        }
        Ok(total)
    }

    fn edge_holonomy(
        &self,
        polyline: &[Vec<f64>],
        descriptor: &GroupDescriptor,
    ) -> Result<GroupElement> {
        match &self.form {
            OneForm::U1(_) => {
                let theta = self.line_integral(polyline)?;
                descriptor.su2_exp([theta, 0.0, 0.0])
            }
            OneForm::Su2(components) => {
                let n = self.quadrature_points;
                let mut acc = descriptor.identity();
                let mut mid = vec![0.0; components.len()];
                for seg in polyline.windows(2) {
                    let (a, b) = (&seg[0], &seg[1]);
                    for j in 0..n {
                        let t = (j as f64 + 0.5) / n as f64;
                        for (m, (ai, bi)) in mid.iter_mut().zip(a.iter().zip(b)) {
                            *m = ai + (bi - ai) * t;
                        }
                        let mut v = [0.0; 3];
                        for (triple, (ai, bi)) in components.iter().zip(a.iter().zip(b)) {
                            let dx = (bi - ai) / n as f64;
                            for (vk, pk) in v.iter_mut().zip(triple) {
                                *vk += pk.eval(&mid) * dx;
                            }
                        }
                        acc = descriptor.su2_exp(v)?.multiply(&acc)?;
                    }
                }
                Ok(acc)
            }
        }
    }
}

/// Holonomies of a smooth one-form on every graph edge.
///
/// `u1` values are `exp(i∫A)` embedded as `(cos θ, sin θ, 0, 0)`; `su2` values
/// are path-ordered products of per-subdivision exponentials, later
/// subdivisions on the left.
pub fn discretize_smooth(
    spec: &SmoothConnectionSpec,
    graph: &Arc<EmbeddedGraph>,
    descriptor: GroupDescriptor,
) -> Result<GeneralizedConnection> {
    if descriptor.kind() != GroupKind::Su2 {
        return Err(Error::UnsupportedGroup {
            descriptor: descriptor.to_string(),
            operation: "smooth discretization".into(),
        });
    }
    let polylines = graph
        .edges()
        .iter()
        .map(|e| {
            e.geometry
                .as_ref()
                .ok_or_else(|| Error::NoGeometry(e.id.clone()))
        })
        .collect::<Result<Vec<_>>>()?;
    for (e, line) in graph.edges().iter().zip(&polylines) {
        if line[0].len() != spec.dimension() {
            return Err(Error::InvalidSmoothSpec(format!(
                "edge `{}` lives in dimension {}, one-form has {} components",
                e.id,
                line[0].len(),
                spec.dimension()
            )));
        }
    }
    let assignment = polylines
        .par_iter()
        .map(|line| spec.edge_holonomy(line, &descriptor))
        .collect::<Result<Vec<_>>>()?;
    GeneralizedConnection::new(graph, descriptor, assignment)
}

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut rule = vec![(0.0, 0.0); n];
    let half = n.div_ceil(2);
    for i in 0..half {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut derivative = 1.0;
        for _ in 0..100 {
            let (mut p1, mut p2) = (1.0, 0.0);
            for j in 1..=n {
                let p3 = p2;
                p2 = p1;
                p1 = ((2 * j - 1) as f64 * x * p2 - (j - 1) as f64 * p3) / j as f64;
            }
            derivative = n as f64 * (x * p1 - p2) / (x * x - 1.0);
            let step = p1 / derivative;
            x -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * derivative * derivative);
        rule[i] = (-x, w);
        rule[n - 1 - i] = (x, w);
    }
    rule
}
