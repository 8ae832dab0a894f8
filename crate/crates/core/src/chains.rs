//! Swendsen-Wang style Markov chains assembled from the reductions.
//!
//! Every kernel passes through a random-cluster index and back:
//! spins -> rc -> spins (classic), subs -> rc -> subs, and rc -> spins -> rc.

use std::fmt;
use std::str::FromStr;

use crate::config::{
    clusters_unchecked, Configuration, RcConfig, SpinConfig, SubgraphConfig, World,
};
use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::par::{self, Backend};
use crate::reduce::{rc_to_spins, rc_to_subs, spins_to_rc, subs_to_rc};
use crate::rng::{BernoulliSource, RngStream};

pub fn sw_classic_step<R>(g: &WeightedGraph, x: &SpinConfig, rng: &mut R) -> Result<SpinConfig>
where
    R: BernoulliSource + ?Sized,
{
    let z = spins_to_rc(g, x, rng)?;
    rc_to_spins(g, &z, rng)
}

pub fn sw_subgraphs_step<R>(
    g: &WeightedGraph,
    y: &SubgraphConfig,
    rng: &mut R,
) -> Result<SubgraphConfig>
where
    R: BernoulliSource + ?Sized,
{
    let z = subs_to_rc(g, y, rng)?;
    rc_to_subs(g, &z, rng)
}

/// Random-cluster side of the classic chain.
pub fn sw_rc_step<R>(g: &WeightedGraph, z: &RcConfig, rng: &mut R) -> Result<RcConfig>
where
    R: BernoulliSource + ?Sized,
{
    let x = rc_to_spins(g, z, rng)?;
    spins_to_rc(g, &x, rng)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Kernel {
    /// spins -> rc -> spins
    SwClassic,
    /// subs -> rc -> subs
    SwSubgraphs,
    /// rc -> spins -> rc
    SwRc,
}

impl Kernel {
    pub fn for_world(world: World) -> Kernel {
        match world {
            World::Spins => Kernel::SwClassic,
            World::Subs => Kernel::SwSubgraphs,
            World::Rc => Kernel::SwRc,
        }
    }

    pub fn world(self) -> World {
        match self {
            Kernel::SwClassic => World::Spins,
            Kernel::SwSubgraphs => World::Subs,
            Kernel::SwRc => World::Rc,
        }
    }
}

impl FromStr for Kernel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sw" => Ok(Kernel::SwClassic),
            "subs-sw" => Ok(Kernel::SwSubgraphs),
            "rc-sw" => Ok(Kernel::SwRc),
            other => Err(Error::InvalidParameter(format!(
                "unknown kernel `{other}` (expected sw, subs-sw or rc-sw)"
            ))),
        }
    }
}

/// Current configuration of a chain and the number of steps taken.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainState {
    pub config: Configuration,
    pub step: u64,
}

impl ChainState {
    /// Fails unless `config` has positive weight.
    pub fn new(g: &WeightedGraph, config: Configuration) -> Result<Self> {
        if config.weight(g)? <= 0.0 && config.log_weight(g)? == f64::NEG_INFINITY {
            return Err(Error::InvalidInput(format!(
                "initial {} configuration has zero weight",
                config.world()
            )));
        }
        Ok(ChainState { config, step: 0 })
    }

    /// All-up spins, empty subgraph, or all-open random cluster. Each has
    /// positive weight for every coupling choice.
    pub fn default_for(g: &WeightedGraph, world: World) -> Self {
        let config = match world {
            World::Spins => Configuration::Spins(SpinConfig::all_up(g.num_nodes())),
            World::Subs => Configuration::Subs(SubgraphConfig::zeros(g.num_edges())),
            World::Rc => Configuration::Rc(RcConfig::new(
                g.edges().iter().map(|e| e.coupling.p() > 0.0).collect(),
            )),
        };
        ChainState { config, step: 0 }
    }

    pub fn kernel(&self) -> Kernel {
        Kernel::for_world(self.config.world())
    }
}

/// What one step produced: the new state plus the paired configuration it
/// went through (the random-cluster index, or the spins for `SwRc`).
struct StepOutput {
    state: Configuration,
    partner: Configuration,
}

fn advance<R>(g: &WeightedGraph, config: &Configuration, rng: &mut R) -> Result<StepOutput>
where
    R: BernoulliSource + ?Sized,
{
    Ok(match config {
        Configuration::Spins(x) => {
            let z = spins_to_rc(g, x, rng)?;
            let x = rc_to_spins(g, &z, rng)?;
            StepOutput {
                state: Configuration::Spins(x),
                partner: Configuration::Rc(z),
            }
        }
        Configuration::Subs(y) => {
            let z = subs_to_rc(g, y, rng)?;
            let y = rc_to_subs(g, &z, rng)?;
            StepOutput {
                state: Configuration::Subs(y),
                partner: Configuration::Rc(z),
            }
        }
        Configuration::Rc(z) => {
            let x = rc_to_spins(g, z, rng)?;
            let z = spins_to_rc(g, &x, rng)?;
            StepOutput {
                state: Configuration::Rc(z),
                partner: Configuration::Spins(x),
            }
        }
    })
}

/// Applies one step of the kernel matching the state's world.
pub fn step<R>(g: &WeightedGraph, state: &mut ChainState, rng: &mut R) -> Result<()>
where
    R: BernoulliSource + ?Sized,
{
    let out = advance(g, &state.config, rng)?;
    state.config = out.state;
    state.step += 1;
    Ok(())
}

/// Per-step observables.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Statistic {
    /// Mean spin.
    Magnetization,
    /// `-sum beta(e) x(i) x(j)` over finite couplings.
    Energy,
    /// Open edges of the random-cluster configuration.
    OpenEdges,
    /// Clusters of the random-cluster configuration.
    Clusters,
    /// Edges in the subgraph.
    Size,
}

impl Statistic {
    pub fn name(self) -> &'static str {
        match self {
            Statistic::Magnetization => "m",
            Statistic::Energy => "energy",
            Statistic::OpenEdges => "open",
            Statistic::Clusters => "clusters",
            Statistic::Size => "size",
        }
    }

    /// Parses a comma separated list such as `m,energy,clusters`.
    pub fn parse_list(s: &str) -> Result<Vec<Statistic>> {
        s.split(',')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(str::parse)
            .collect()
    }

    fn available(self, kernel: Kernel) -> bool {
        match self {
            Statistic::Magnetization | Statistic::Energy => kernel != Kernel::SwSubgraphs,
            Statistic::OpenEdges | Statistic::Clusters => true,
            Statistic::Size => kernel == Kernel::SwSubgraphs,
        }
    }

    fn evaluate(self, g: &WeightedGraph, out: &StepOutput) -> f64 {
        let spins = [&out.state, &out.partner]
            .into_iter()
            .find_map(|c| match c {
                Configuration::Spins(x) => Some(x),
                _ => None,
            });
        let rc = [&out.state, &out.partner]
            .into_iter()
            .find_map(|c| match c {
                Configuration::Rc(z) => Some(z),
                _ => None,
            });
        match self {
            Statistic::Magnetization => spins.map_or(f64::NAN, SpinConfig::magnetization),
            Statistic::Energy => spins.map_or(f64::NAN, |x| energy(g, x)),
            Statistic::OpenEdges => rc.map_or(f64::NAN, |z| z.count_ones() as f64),
            Statistic::Clusters => {
                rc.map_or(f64::NAN, |z| clusters_unchecked(g, z.bits()).count as f64)
            }
            Statistic::Size => match &out.state {
                Configuration::Subs(y) => y.count_ones() as f64,
                _ => f64::NAN,
            },
        }
    }
}

impl FromStr for Statistic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "m" | "magnetization" => Ok(Statistic::Magnetization),
            "energy" => Ok(Statistic::Energy),
            "open" => Ok(Statistic::OpenEdges),
            "clusters" => Ok(Statistic::Clusters),
            "size" => Ok(Statistic::Size),
            other => Err(Error::UnknownStatistic(other.to_string())),
        }
    }
}

impl fmt::Display for Statistic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Ising energy `-sum beta x(i) x(j)`; infinite couplings are constraints and
/// contribute nothing.
pub fn energy(g: &WeightedGraph, x: &SpinConfig) -> f64 {
    -g.edges()
        .iter()
        .filter(|e| !e.coupling.is_infinite())
        .map(|e| e.coupling.beta() * f64::from(x.spin(e.u) * x.spin(e.v)))
        .sum::<f64>()
}

#[derive(Clone, Debug, PartialEq)]
pub struct TraceRow {
    pub step: u64,
    pub values: Vec<f64>,
}

/// Raw per-step statistics of one chain run.
#[derive(Clone, Debug, PartialEq)]
pub struct Trace {
    pub stats: Vec<Statistic>,
    pub rows: Vec<TraceRow>,
}

impl Trace {
    /// CSV with a `step` column followed by one column per statistic.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("step");
        for s in &self.stats {
            out.push(',');
            out.push_str(s.name());
        }
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.step.to_string());
            for v in &row.values {
                out.push(',');
                out.push_str(&v.to_string());
            }
            out.push('\n');
        }
        out
    }

    pub fn column(&self, stat: Statistic) -> Option<Vec<f64>> {
        let k = self.stats.iter().position(|&s| s == stat)?;
        Some(self.rows.iter().map(|r| r.values[k]).collect())
    }
}

/// Runs `steps` kernel steps from `state`, recording `stats` after every
/// `thin`-th step.
pub fn run_chain<R>(
    g: &WeightedGraph,
    state: &mut ChainState,
    steps: u64,
    rng: &mut R,
    stats: &[Statistic],
    thin: u64,
) -> Result<Trace>
where
    R: BernoulliSource + ?Sized,
{
    if thin == 0 {
        return Err(Error::InvalidParameter(
            "thinning interval must be at least 1".into(),
        ));
    }
    let kernel = state.kernel();
    if let Some(s) = stats.iter().find(|s| !s.available(kernel)) {
        return Err(Error::StatisticUnavailable {
            stat: s.name().to_string(),
            world: kernel.world().to_string(),
        });
    }
    let mut rows = Vec::new();
    for _ in 0..steps {
        let out = advance(g, &state.config, rng)?;
        state.step += 1;
        if state.step.is_multiple_of(thin) {
            rows.push(TraceRow {
                step: state.step,
                values: stats.iter().map(|s| s.evaluate(g, &out)).collect(),
            });
        }
        state.config = out.state;
    }
    Ok(Trace {
        stats: stats.to_vec(),
        rows,
    })
}

/// Independent replicate chains, replicate `r` driven by substream `r` of
/// `base`. Results are ordered by replicate.
#[allow(clippy::too_many_arguments)]
pub fn run_replicates(
    g: &WeightedGraph,
    init: &ChainState,
    steps: u64,
    base: &RngStream,
    replicates: usize,
    stats: &[Statistic],
    thin: u64,
    backend: Backend,
) -> Result<Vec<(ChainState, Trace)>> {
    par::try_map_range(replicates, backend, |r| {
        let mut rng = base.substream(r as u64);
        let mut state = init.clone();
        let trace = run_chain(g, &mut state, steps, &mut rng, stats, thin)?;
        Ok((state, trace))
    })
}
