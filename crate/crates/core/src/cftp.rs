//! Perfect sampling of the random-cluster world by monotone coupling from
//! the past, and of the subgraphs world by pushing that sample through
//! [`rc_to_subs`].
//!
//! The chain is single-bond heat bath. Updating edge `e` opens it with
//! probability `p(e)` when its endpoints are already joined by other open
//! edges and `p(e) / (2 - p(e))` otherwise. Since the first value is the
//! larger one, the update preserves the pointwise order on states, so the
//! chains started from the top (all open) and bottom (all closed) states
//! sandwich every other chain.

use crate::config::{Configuration, RcConfig, SubgraphConfig, World};
use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::par::{self, Backend};
use crate::reduce::{rc_to_spins, rc_to_subs};
use crate::rng::RngStream;

/// Reusable search state for "are `a` and `b` joined without edge `e`".
#[derive(Clone, Debug, Default)]
pub struct ConnectivityScratch {
    mark: Vec<u32>,
    stamp: u32,
    stack: Vec<usize>,
}

impl ConnectivityScratch {
    pub fn new(n: usize) -> Self {
        ConnectivityScratch {
            mark: vec![0; n],
            stamp: 0,
            stack: Vec::new(),
        }
    }

    fn joined_without(&mut self, g: &WeightedGraph, open: &[bool], skip: usize) -> bool {
        let edge = g.edge(skip);
        if self.mark.len() < g.num_nodes() {
            self.mark = vec![0; g.num_nodes()];
            self.stamp = 0;
        }
        self.stamp = self.stamp.wrapping_add(1);
        if self.stamp == 0 {
            self.mark.fill(0);
            self.stamp = 1;
        }
        self.stack.clear();
        self.stack.push(edge.u);
        self.mark[edge.u] = self.stamp;
        while let Some(v) = self.stack.pop() {
            for &(w, e) in g.neighbors(v) {
                if e == skip || !open[e] || self.mark[w] == self.stamp {
                    continue;
                }
                if w == edge.v {
                    return true;
                }
                self.mark[w] = self.stamp;
                self.stack.push(w);
            }
        }
        false
    }
}

/// Conditional probability that edge `e` is open given the rest of `open`.
pub fn open_probability(
    g: &WeightedGraph,
    open: &[bool],
    e: usize,
    scratch: &mut ConnectivityScratch,
) -> f64 {
    let p = g.edge(e).coupling.p();
    if p <= 0.0 || p >= 1.0 {
        return p;
    }
    let q = if scratch.joined_without(g, open, e) {
        p
    } else {
        p / (2.0 - p)
    };
    debug_assert!(q == p || q == p / (2.0 - p));
    debug_assert!(q <= p);
    q
}

/// Single-bond heat-bath update: sets edge `e` open iff `u < q_e(z)`.
pub fn heat_bath_rc_step(g: &WeightedGraph, z: &mut RcConfig, e: usize, u: f64) {
    let mut scratch = ConnectivityScratch::new(g.num_nodes());
    heat_bath_in_place(g, z, e, u, &mut scratch);
}

fn heat_bath_in_place(
    g: &WeightedGraph,
    z: &mut RcConfig,
    e: usize,
    u: f64,
    scratch: &mut ConnectivityScratch,
) {
    let q = open_probability(g, z.bits(), e, scratch);
    z.set(e, u < q);
}

/// Randomness for one update of the past: which edge, and the heat-bath
/// uniform.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UpdateRecord {
    pub edge: usize,
    pub edge_uniform: f64,
    pub u: f64,
}

/// Randomness for the updates at times -1, -2, ... Generated once and
/// replayed by every restart from further in the past.
#[derive(Clone, Debug, Default)]
pub struct CftpSchedule {
    records: Vec<UpdateRecord>,
}

impl CftpSchedule {
    pub fn new() -> Self {
        Self::default()
    }

    /// Makes sure records exist for times -1 through -`steps`.
    pub fn extend_to(&mut self, steps: u64, num_edges: usize, rng: &mut RngStream) {
        while (self.records.len() as u64) < steps {
            let edge_uniform = rng.uniform();
            let u = rng.uniform();
            let edge = ((edge_uniform * num_edges as f64) as usize).min(num_edges - 1);
            self.records.push(UpdateRecord {
                edge,
                edge_uniform,
                u,
            });
        }
    }

    /// Record for time `-t`, `t >= 1`.
    pub fn at(&self, t: u64) -> &UpdateRecord {
        &self.records[(t - 1) as usize]
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CftpOutcome<C> {
    pub config: C,
    /// Doubling epoch that coalesced; the run started `2^epoch` sweeps back.
    pub epoch: u32,
    /// Steps into the past of the successful run.
    pub steps: u64,
}

impl<C> CftpOutcome<C> {
    pub fn map<D>(self, f: impl FnOnce(C) -> D) -> CftpOutcome<D> {
        CftpOutcome {
            config: f(self.config),
            epoch: self.epoch,
            steps: self.steps,
        }
    }
}

/// Runs the top and bottom chains from time `-steps` to 0 with the shared
/// schedule. Returns the common final state if they met.
fn run_from(
    g: &WeightedGraph,
    schedule: &CftpSchedule,
    steps: u64,
    scratch: &mut ConnectivityScratch,
) -> Option<RcConfig> {
    let m = g.num_edges() as u64;
    let mut top = RcConfig::new(g.edges().iter().map(|e| e.coupling.p() > 0.0).collect());
    let mut bottom = RcConfig::new(g.edges().iter().map(|e| e.coupling.p() >= 1.0).collect());
    let mut coalesced = top == bottom;
    for (done, t) in (1..=steps).rev().enumerate() {
        let rec = schedule.at(t);
        heat_bath_in_place(g, &mut top, rec.edge, rec.u, scratch);
        if !coalesced {
            heat_bath_in_place(g, &mut bottom, rec.edge, rec.u, scratch);
            debug_assert!(bottom.le(top.bits()));
            if (done as u64 + 1).is_multiple_of(m) && top == bottom {
                coalesced = true;
            }
        }
    }
    (coalesced || top == bottom).then_some(top)
}

/// Exact draw from the random-cluster distribution. Epoch `k` restarts the
/// coupled chains `2^k` sweeps (of `#E` single-edge steps) in the past, for
/// `k = 0..=max_epoch`.
pub fn cftp_rc_sample(
    g: &WeightedGraph,
    rng: &mut RngStream,
    max_epoch: u32,
) -> Result<CftpOutcome<RcConfig>> {
    let m = g.num_edges();
    if m == 0 {
        return Ok(CftpOutcome {
            config: RcConfig::zeros(0),
            epoch: 0,
            steps: 0,
        });
    }
    let mut schedule = CftpSchedule::new();
    let mut scratch = ConnectivityScratch::new(g.num_nodes());
    let mut steps = 0;
    for epoch in 0..=max_epoch {
        steps = (m as u64) << epoch;
        schedule.extend_to(steps, m, rng);
        if let Some(config) = run_from(g, &schedule, steps, &mut scratch) {
            return Ok(CftpOutcome {
                config,
                epoch,
                steps,
            });
        }
    }
    Err(Error::NoCoalescence {
        epochs: max_epoch + 1,
        steps,
    })
}

/// Exact draw from the subgraphs distribution.
pub fn perfect_subs_sample(
    g: &WeightedGraph,
    rng: &mut RngStream,
    max_epoch: u32,
) -> Result<CftpOutcome<SubgraphConfig>> {
    let out = cftp_rc_sample(g, rng, max_epoch)?;
    let y = rc_to_subs(g, &out.config, rng)?;
    Ok(out.map(|_| y))
}

/// Exact draw in any world; spins come from the random-cluster sample.
pub fn perfect_sample(
    g: &WeightedGraph,
    world: World,
    rng: &mut RngStream,
    max_epoch: u32,
) -> Result<CftpOutcome<Configuration>> {
    match world {
        World::Rc => Ok(cftp_rc_sample(g, rng, max_epoch)?.map(Configuration::Rc)),
        World::Subs => Ok(perfect_subs_sample(g, rng, max_epoch)?.map(Configuration::Subs)),
        World::Spins => {
            let out = cftp_rc_sample(g, rng, max_epoch)?;
            let x = rc_to_spins(g, &out.config, rng)?;
            Ok(out.map(|_| Configuration::Spins(x)))
        }
    }
}

/// `n` independent perfect samples, sample `i` drawn from substream `i` of
/// `base`.
pub fn perfect_batch(
    g: &WeightedGraph,
    world: World,
    base: &RngStream,
    n: usize,
    max_epoch: u32,
    backend: Backend,
) -> Result<Vec<CftpOutcome<Configuration>>> {
    par::try_map_range(n, backend, |i| {
        let mut rng = base.substream(i as u64);
        perfect_sample(g, world, &mut rng, max_epoch)
    })
}
