//! Suite configuration files.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use genconn::groupoid::{builders, random::random_graph};
use genconn::{EmbeddedGraph, GroupDescriptor};
use rand::Rng;
use serde::Deserialize;

use crate::CliError;

/// Where a suite gets its graph from.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum GraphSource {
    /// A fresh random graph for every draw.
    Random { random: RandomGraph },
    /// `grid:NxM`, `bouquet:K`, `cycle:N` or `theta:K`.
    Builder { builder: String },
    /// A graph document, relative to the config file.
    File { file: PathBuf },
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RandomGraph {
    pub vertices: usize,
    pub edges: usize,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteConfig {
    pub graph: GraphSource,
    #[serde(default)]
    pub descriptors: Vec<String>,
    #[serde(default = "default_samples")]
    pub samples: u64,
    /// Enumerate every connection (and transformation) for finite groups
    /// when the count allows it.
    #[serde(default)]
    pub exhaustive: bool,
    #[serde(default = "default_word_length")]
    pub max_word_length: usize,
    /// Tolerance for continuous groups; each suite has its own default.
    #[serde(default)]
    pub tolerance: Option<f64>,
    /// Edge subdivided by the projective and measure suites; defaults to the
    /// first edge.
    #[serde(default)]
    pub subdivide: Option<String>,
}

fn default_samples() -> u64 {
    1000
}

fn default_word_length() -> usize {
    40
}

/// A parsed config plus everything resolved from disk.
#[derive(Debug, Clone)]
pub struct LoadedConfig {
    pub config: SuiteConfig,
    pub descriptors: Vec<GroupDescriptor>,
    fixed_graph: Option<Arc<EmbeddedGraph>>,
    /// Files read, in order, for the manifest.
    pub inputs: Vec<PathBuf>,
}

impl LoadedConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = crate::read_input(path)?;
        let config: SuiteConfig = serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        let mut inputs = vec![path.to_path_buf()];
        let descriptors = config
            .descriptors
            .iter()
            .map(|d| d.parse::<GroupDescriptor>())
            .collect::<Result<Vec<_>, _>>()?;
        if config.samples == 0 {
            return Err(CliError::Config("`samples` must be positive".into()));
        }
        let fixed_graph = match &config.graph {
            GraphSource::Random { random } => {
                if random.vertices == 0 || random.edges + 1 < random.vertices {
                    return Err(CliError::Config(format!(
                        "random graph with {} vertices and {} edges is not connected",
                        random.vertices, random.edges
                    )));
                }
                None
            }
            GraphSource::Builder { builder } => Some(build(builder)?),
            GraphSource::File { file } => {
                let resolved = path.parent().unwrap_or(Path::new("")).join(file);
                let graph = genconn::format::parse_graph(&crate::read_input(&resolved)?)?;
                inputs.push(resolved);
                Some(graph)
            }
        };
        Ok(Self {
            config,
            descriptors,
            fixed_graph,
            inputs,
        })
    }

    pub fn require_descriptors(&self) -> Result<&[GroupDescriptor], CliError> {
        if self.descriptors.is_empty() {
            Err(CliError::Config(
                "`descriptors` must name at least one group".into(),
            ))
        } else {
            Ok(&self.descriptors)
        }
    }

    /// The configured graph; random sources draw a new one on every call.
    pub fn graph<R: Rng + ?Sized>(&self, rng: &mut R) -> Arc<EmbeddedGraph> {
        match (&self.fixed_graph, &self.config.graph) {
            (Some(g), _) => Arc::clone(g),
            (None, GraphSource::Random { random }) => {
                random_graph(rng, "random", random.vertices, random.edges)
            }
            (None, _) => unreachable!("non-random sources are resolved at load time"),
        }
    }

    pub fn tolerance(&self, default: f64) -> f64 {
        self.config.tolerance.unwrap_or(default)
    }
}

fn build(spec: &str) -> Result<Arc<EmbeddedGraph>, CliError> {
    let bad = || CliError::Config(format!("unknown graph builder `{spec}`"));
    let (kind, arg) = spec.split_once(':').ok_or_else(bad)?;
    let number = |s: &str| s.parse::<usize>().ok().filter(|&n| n > 0).ok_or_else(bad);
    Ok(match kind {
        "grid" => {
            let (nx, ny) = arg.split_once('x').ok_or_else(bad)?;
            builders::grid(number(nx)?, number(ny)?)
        }
        "bouquet" => builders::bouquet(number(arg)?),
        "cycle" => builders::cycle(number(arg)?),
        "theta" => builders::theta(number(arg)?),
        _ => return Err(bad()),
    })
}
