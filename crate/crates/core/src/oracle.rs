//! Brute-force exact computation on small graphs.
//!
//! Everything here enumerates configurations outright: partition functions,
//! probability tables, exact transition matrices of the reductions (by
//! walking every Bernoulli outcome branch), and the partition-function
//! identities linking the three worlds.

use serde::Serialize;

use crate::chains::{sw_classic_step, sw_rc_step, sw_subgraphs_step};
use crate::config::{
    all_even, clusters_unchecked, log_weight_spins, weight_spins_field, Configuration, RcConfig,
    SpinConfig, World,
};
use crate::error::{Error, Result};
use crate::graph::{reduce_unidirectional_field, WeightedGraph};
use crate::par::{self, Backend};
use crate::reduce::{rc_to_spins, rc_to_subs, reduce, spins_to_rc, subs_to_rc};
use crate::rng::{BernoulliSource, RngStream};

/// Largest node count enumerated in the spins world.
pub const MAX_SPIN_NODES: usize = 16;
/// Largest edge count enumerated in the subgraphs and random-cluster worlds.
pub const MAX_EDGE_WORLD_EDGES: usize = 20;
/// Largest edge count for exact transition matrices.
pub const MAX_KERNEL_EDGES: usize = 10;

fn check_caps(g: &WeightedGraph, world: World) -> Result<()> {
    match world {
        World::Spins if g.num_nodes() > MAX_SPIN_NODES => Err(Error::TooLarge(format!(
            "{} nodes exceeds the spins cap of {MAX_SPIN_NODES}",
            g.num_nodes()
        ))),
        World::Subs | World::Rc if g.num_edges() > MAX_EDGE_WORLD_EDGES => {
            Err(Error::TooLarge(format!(
                "{} edges exceeds the {world} cap of {MAX_EDGE_WORLD_EDGES}",
                g.num_edges()
            )))
        }
        _ => Ok(()),
    }
}

pub fn log_sum_exp(xs: &[f64]) -> f64 {
    let max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY || max.is_infinite() {
        return max;
    }
    max + xs.iter().map(|&x| (x - max).exp()).sum::<f64>().ln()
}

/// Exact weights and probabilities of every configuration of one world,
/// indexed by configuration index.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WorldTable {
    pub world: World,
    pub weights: Vec<f64>,
    pub log_weights: Vec<f64>,
    pub z: f64,
    pub log_z: f64,
    pub probs: Vec<f64>,
}

impl WorldTable {
    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn config(&self, g: &WeightedGraph, index: usize) -> Configuration {
        Configuration::from_index(self.world, index as u64, g)
    }

    /// Inverse-CDF sampler over this table.
    pub fn sampler(&self) -> ExactSampler {
        let mut acc = 0.0;
        let cdf = self
            .probs
            .iter()
            .map(|&p| {
                acc += p;
                acc
            })
            .collect();
        ExactSampler { cdf }
    }
}

#[derive(Clone, Debug)]
pub struct ExactSampler {
    cdf: Vec<f64>,
}

impl ExactSampler {
    pub fn sample(&self, rng: &mut RngStream) -> usize {
        let u = rng.uniform() * self.cdf.last().copied().unwrap_or(1.0);
        let k = self.cdf.partition_point(|&c| c <= u);
        // guard against rounding past the last positive entry
        k.min(self.cdf.len() - 1)
    }
}

pub fn enumerate_world(g: &WeightedGraph, world: World) -> Result<WorldTable> {
    enumerate_world_with(g, world, Backend::default())
}

pub fn enumerate_world_with(
    g: &WeightedGraph,
    world: World,
    backend: Backend,
) -> Result<WorldTable> {
    check_caps(g, world)?;
    let count = 1usize << world.size(g);
    let pairs = par::try_map_range(count, backend, |k| {
        let c = Configuration::from_index(world, k as u64, g);
        Ok((c.weight(g)?, c.log_weight(g)?))
    })?;
    let (weights, log_weights): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
    let z: f64 = weights.iter().sum();
    let log_z = log_sum_exp(&log_weights);
    let probs = log_weights.iter().map(|&lw| (lw - log_z).exp()).collect();
    Ok(WorldTable {
        world,
        weights,
        log_weights,
        z,
        log_z,
        probs,
    })
}

/// Tables for all three worlds.
#[derive(Clone, Debug, Serialize)]
pub struct ExactTables {
    pub spins: WorldTable,
    pub subs: WorldTable,
    pub rc: WorldTable,
}

impl ExactTables {
    pub fn build(g: &WeightedGraph) -> Result<Self> {
        Ok(ExactTables {
            spins: enumerate_world(g, World::Spins)?,
            subs: enumerate_world(g, World::Subs)?,
            rc: enumerate_world(g, World::Rc)?,
        })
    }

    pub fn world(&self, world: World) -> &WorldTable {
        match world {
            World::Spins => &self.spins,
            World::Subs => &self.subs,
            World::Rc => &self.rc,
        }
    }
}

/// One checked identity between two computed quantities.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentityCheck {
    pub name: String,
    /// `linear` or `rescaled-log` (used when some coupling is infinite).
    pub domain: &'static str,
    pub lhs: f64,
    pub rhs: f64,
    pub rel_error: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl IdentityCheck {
    fn linear(name: &str, lhs: f64, rhs: f64, tolerance: f64) -> Self {
        let rel_error = if lhs == rhs {
            0.0
        } else {
            (lhs - rhs).abs() / lhs.abs()
        };
        IdentityCheck {
            name: name.to_string(),
            domain: "linear",
            lhs,
            rhs,
            rel_error,
            tolerance,
            pass: rel_error < tolerance,
        }
    }

    /// Both sides given as logs; the relative error is `|exp(lhs - rhs) - 1|`.
    fn log(name: &str, log_lhs: f64, log_rhs: f64, tolerance: f64) -> Self {
        let rel_error = if log_lhs == log_rhs {
            0.0
        } else {
            (log_lhs - log_rhs).exp_m1().abs()
        };
        IdentityCheck {
            name: name.to_string(),
            domain: "rescaled-log",
            lhs: log_lhs,
            rhs: log_rhs,
            rel_error,
            tolerance,
            pass: rel_error < tolerance,
        }
    }
}

pub const IDENTITY_TOLERANCE: f64 = 1e-10;

/// Checks `Z_spins = Z_rc prod e^beta` and `Z_spins = Z_subs 2^#V prod cosh beta`.
///
/// With infinite couplings both identities are checked after dividing
/// through by `prod e^beta`, which turns every factor finite:
/// `Z_spins prod e^-beta = Z_rc = Z_subs 2^#V prod (1 + e^{-2 beta}) / 2`.
pub fn check_relate_identity(g: &WeightedGraph) -> Result<Vec<IdentityCheck>> {
    let spins = enumerate_world(g, World::Spins)?;
    let subs = enumerate_world(g, World::Subs)?;
    let rc = enumerate_world(g, World::Rc)?;
    let n = g.num_nodes() as i32;
    let finite = g.edges().iter().all(|e| !e.coupling.is_infinite());
    if finite {
        let exp_beta: f64 = g.edges().iter().map(|e| e.coupling.beta().exp()).product();
        let cosh: f64 = g.edges().iter().map(|e| e.coupling.beta().cosh()).product();
        Ok(vec![
            IdentityCheck::linear("spins_rc", spins.z, rc.z * exp_beta, IDENTITY_TOLERANCE),
            IdentityCheck::linear(
                "spins_subs",
                spins.z,
                subs.z * 2f64.powi(n) * cosh,
                IDENTITY_TOLERANCE,
            ),
        ])
    } else {
        let log_rescaled_spins = rescaled_log_z_spins(g);
        let log_half_sum: f64 = g
            .edges()
            .iter()
            .map(|e| ((1.0 + e.coupling.one_minus_p()) / 2.0).ln())
            .sum();
        Ok(vec![
            IdentityCheck::log("spins_rc", log_rescaled_spins, rc.log_z, IDENTITY_TOLERANCE),
            IdentityCheck::log(
                "spins_subs",
                log_rescaled_spins,
                subs.log_z + f64::from(n) * std::f64::consts::LN_2 + log_half_sum,
                IDENTITY_TOLERANCE,
            ),
        ])
    }
}

// log sum_x prod_e f(x_i, x_j) e^{-beta(e)}, with the infinite-coupling
// factor read as the agreement indicator
fn rescaled_log_z_spins(g: &WeightedGraph) -> f64 {
    let n = g.num_nodes();
    let terms: Vec<f64> = (0..1u64 << n)
        .map(|k| {
            let x = SpinConfig::from_index(k, n);
            let mut lw = 0.0;
            for e in g.edges() {
                if x.spin(e.u) != x.spin(e.v) {
                    if e.coupling.is_infinite() {
                        return f64::NEG_INFINITY;
                    }
                    lw -= 2.0 * e.coupling.beta();
                }
            }
            lw
        })
        .collect();
    log_sum_exp(&terms)
}

/// Checks `Z_rc = Z_subs 2^{#V - #E} prod (1 + e^{-2 beta})`.
pub fn check_rc_normalizer(g: &WeightedGraph) -> Result<IdentityCheck> {
    let subs = enumerate_world(g, World::Subs)?;
    let rc = enumerate_world(g, World::Rc)?;
    let shift = g.num_nodes() as i32 - g.num_edges() as i32;
    let prod: f64 = g
        .edges()
        .iter()
        .map(|e| 1.0 + e.coupling.one_minus_p())
        .product();
    Ok(IdentityCheck::linear(
        "rc_normalizer",
        rc.z,
        subs.z * 2f64.powi(shift) * prod,
        IDENTITY_TOLERANCE,
    ))
}

/// Follows one branch of a tree of Bernoulli outcomes. Draws beyond the
/// scripted prefix come out `false`; the probability of the branch taken is
/// accumulated in `prob`.
#[derive(Clone, Debug)]
pub struct ScriptedSource {
    script: Vec<bool>,
    pos: usize,
    prob: f64,
}

impl ScriptedSource {
    fn new(script: Vec<bool>) -> Self {
        ScriptedSource {
            script,
            pos: 0,
            prob: 1.0,
        }
    }
}

impl BernoulliSource for ScriptedSource {
    fn bernoulli(&mut self, q: f64) -> bool {
        if q <= 0.0 {
            return false;
        }
        if q >= 1.0 {
            return true;
        }
        if self.pos == self.script.len() {
            self.script.push(false);
        }
        let b = self.script[self.pos];
        self.pos += 1;
        self.prob *= if b { q } else { 1.0 - q };
        b
    }

    fn draws(&self) -> u64 {
        self.pos as u64
    }
}

/// Runs `f` once per leaf of its Bernoulli outcome tree and returns every
/// result with its exact probability.
pub fn explore_outcomes<T>(
    mut f: impl FnMut(&mut ScriptedSource) -> Result<T>,
) -> Result<Vec<(T, f64)>> {
    let mut out = Vec::new();
    let mut script = Vec::new();
    loop {
        let mut src = ScriptedSource::new(script);
        let value = f(&mut src)?;
        debug_assert_eq!(src.pos, src.script.len());
        out.push((value, src.prob));
        script = src.script;
        // next branch: flip the deepest `false` to `true`
        loop {
            match script.pop() {
                Some(false) => {
                    script.push(true);
                    break;
                }
                Some(true) => continue,
                None => return Ok(out),
            }
        }
    }
}

/// Transition kernels that can be tabulated exactly.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum KernelTag {
    SubsToRc,
    RcToSubs,
    RcToSpins,
    SpinsToRc,
    SubsToSpins,
    SpinsToSubs,
    SwClassic,
    SwSubgraphs,
    SwRc,
}

impl KernelTag {
    pub const ALL: [KernelTag; 9] = [
        KernelTag::SubsToRc,
        KernelTag::RcToSubs,
        KernelTag::RcToSpins,
        KernelTag::SpinsToRc,
        KernelTag::SubsToSpins,
        KernelTag::SpinsToSubs,
        KernelTag::SwClassic,
        KernelTag::SwSubgraphs,
        KernelTag::SwRc,
    ];

    pub fn worlds(self) -> (World, World) {
        match self {
            KernelTag::SubsToRc => (World::Subs, World::Rc),
            KernelTag::RcToSubs => (World::Rc, World::Subs),
            KernelTag::RcToSpins => (World::Rc, World::Spins),
            KernelTag::SpinsToRc => (World::Spins, World::Rc),
            KernelTag::SubsToSpins => (World::Subs, World::Spins),
            KernelTag::SpinsToSubs => (World::Spins, World::Subs),
            KernelTag::SwClassic => (World::Spins, World::Spins),
            KernelTag::SwSubgraphs => (World::Subs, World::Subs),
            KernelTag::SwRc => (World::Rc, World::Rc),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            KernelTag::SubsToRc => "subs-to-rc",
            KernelTag::RcToSubs => "rc-to-subs",
            KernelTag::RcToSpins => "rc-to-spins",
            KernelTag::SpinsToRc => "spins-to-rc",
            KernelTag::SubsToSpins => "subs-to-spins",
            KernelTag::SpinsToSubs => "spins-to-subs",
            KernelTag::SwClassic => "sw",
            KernelTag::SwSubgraphs => "subs-sw",
            KernelTag::SwRc => "rc-sw",
        }
    }

    fn apply<R: BernoulliSource + ?Sized>(
        self,
        g: &WeightedGraph,
        from: &Configuration,
        rng: &mut R,
    ) -> Result<Configuration> {
        let (_, to) = self.worlds();
        match (self, from) {
            (KernelTag::SwClassic, Configuration::Spins(x)) => {
                Ok(Configuration::Spins(sw_classic_step(g, x, rng)?))
            }
            (KernelTag::SwSubgraphs, Configuration::Subs(y)) => {
                Ok(Configuration::Subs(sw_subgraphs_step(g, y, rng)?))
            }
            (KernelTag::SwRc, Configuration::Rc(z)) => {
                Ok(Configuration::Rc(sw_rc_step(g, z, rng)?))
            }
            (KernelTag::SubsToRc, Configuration::Subs(y)) => {
                Ok(Configuration::Rc(subs_to_rc(g, y, rng)?))
            }
            (KernelTag::RcToSubs, Configuration::Rc(z)) => {
                Ok(Configuration::Subs(rc_to_subs(g, z, rng)?))
            }
            (KernelTag::RcToSpins, Configuration::Rc(z)) => {
                Ok(Configuration::Spins(rc_to_spins(g, z, rng)?))
            }
            (KernelTag::SpinsToRc, Configuration::Spins(x)) => {
                Ok(Configuration::Rc(spins_to_rc(g, x, rng)?))
            }
            _ => reduce(g, from, to, rng),
        }
    }
}

/// Exact transition probabilities. Rows exist only for source
/// configurations of positive weight.
#[derive(Clone, Debug, PartialEq)]
pub struct KernelMatrix {
    pub tag: KernelTag,
    pub rows: Vec<Option<Vec<f64>>>,
}

impl KernelMatrix {
    pub fn row(&self, from: usize) -> Option<&[f64]> {
        self.rows[from].as_deref()
    }

    /// Largest `|sum(row) - 1|` over defined rows.
    pub fn max_row_defect(&self) -> f64 {
        self.rows
            .iter()
            .flatten()
            .map(|r| (r.iter().sum::<f64>() - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// `pi K`. Mass on sources without a row is an error.
    pub fn apply(&self, pi: &[f64]) -> Result<Vec<f64>> {
        if pi.len() != self.rows.len() {
            return Err(Error::MismatchedSupport(pi.len(), self.rows.len()));
        }
        let width = self.rows.iter().flatten().next().map_or(0, Vec::len);
        let mut out = vec![0.0; width];
        for (k, &mass) in pi.iter().enumerate() {
            if mass == 0.0 {
                continue;
            }
            let row = self.rows[k].as_ref().ok_or_else(|| {
                Error::InvalidInput(format!("source state {k} has mass but zero weight"))
            })?;
            for (o, &t) in out.iter_mut().zip(row) {
                *o += mass * t;
            }
        }
        Ok(out)
    }
}

pub fn exact_kernel_matrix(g: &WeightedGraph, tag: KernelTag) -> Result<KernelMatrix> {
    exact_kernel_matrix_with(g, tag, Backend::default())
}

pub fn exact_kernel_matrix_with(
    g: &WeightedGraph,
    tag: KernelTag,
    backend: Backend,
) -> Result<KernelMatrix> {
    if g.num_edges() > MAX_KERNEL_EDGES {
        return Err(Error::TooLarge(format!(
            "{} edges exceeds the kernel cap of {MAX_KERNEL_EDGES}",
            g.num_edges()
        )));
    }
    let (from, to) = tag.worlds();
    check_caps(g, from)?;
    check_caps(g, to)?;
    let rows = 1usize << from.size(g);
    let width = 1usize << to.size(g);
    let rows = par::try_map_range(rows, backend, |k| {
        let source = Configuration::from_index(from, k as u64, g);
        if source.log_weight(g)? == f64::NEG_INFINITY {
            return Ok(None);
        }
        let mut row = vec![0.0; width];
        for (target, prob) in explore_outcomes(|src| tag.apply(g, &source, src))? {
            row[target.index() as usize] += prob;
        }
        Ok(Some(row))
    })?;
    Ok(KernelMatrix { tag, rows })
}

/// Largest pointwise difference between two distributions.
pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// Half the L1 distance.
pub fn tv_distance(empirical: &[f64], exact: &[f64]) -> Result<f64> {
    if empirical.len() != exact.len() {
        return Err(Error::MismatchedSupport(empirical.len(), exact.len()));
    }
    Ok(0.5
        * empirical
            .iter()
            .zip(exact)
            .map(|(a, b)| (a - b).abs())
            .sum::<f64>())
}

/// Normalized histogram of configuration indices over `0..len`.
pub fn histogram(indices: impl IntoIterator<Item = u64>, len: usize) -> Vec<f64> {
    let mut counts = vec![0u64; len];
    let mut total = 0u64;
    for i in indices {
        counts[i as usize] += 1;
        total += 1;
    }
    counts
        .into_iter()
        .map(|c| {
            if total == 0 {
                0.0
            } else {
                c as f64 / total as f64
            }
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EvenCountReport {
    pub enumerated: u64,
    pub closed_form: u64,
    pub pass: bool,
}

/// Counts even subgraphs `y <= z` by enumeration and compares with
/// `2^{#open - #V + #clusters}`.
pub fn check_evensubgraph_count(g: &WeightedGraph, z: &RcConfig) -> Result<EvenCountReport> {
    z.check(g)?;
    let open: Vec<usize> = (0..g.num_edges()).filter(|&e| z.get(e)).collect();
    if open.len() > MAX_EDGE_WORLD_EDGES {
        return Err(Error::TooLarge(format!(
            "{} open edges exceeds the cap of {MAX_EDGE_WORLD_EDGES}",
            open.len()
        )));
    }
    let mut bits = vec![false; g.num_edges()];
    let mut enumerated = 0u64;
    for mask in 0u64..(1 << open.len()) {
        for (k, &e) in open.iter().enumerate() {
            bits[e] = (mask >> k) & 1 == 1;
        }
        if all_even(g, &bits) {
            enumerated += 1;
        }
    }
    let k = clusters_unchecked(g, z.bits()).count;
    let exponent = open.len() + k - g.num_nodes();
    let closed_form = 1u64 << exponent;
    Ok(EvenCountReport {
        enumerated,
        closed_form,
        pass: enumerated == closed_form,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FieldReport {
    pub max_abs_diff: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Exact distribution over spins of a graph with field, indexed like
/// [`SpinConfig::index`].
pub fn field_distribution(g: &WeightedGraph) -> Result<Vec<f64>> {
    check_caps(g, World::Spins)?;
    let n = g.num_nodes();
    let w = (0..1u64 << n)
        .map(|k| weight_spins_field(g, &SpinConfig::from_index(k, n)))
        .collect::<Result<Vec<_>>>()?;
    let z: f64 = w.iter().sum();
    Ok(w.into_iter().map(|x| x / z).collect())
}

/// Compares the field model with the field-free transformed model
/// conditioned on the anchor spin, projected back to the original nodes.
pub fn check_field_reduction(g: &WeightedGraph) -> Result<FieldReport> {
    let direct = field_distribution(g)?;
    let (h, map) = reduce_unidirectional_field(g)?;
    check_caps(&h, World::Spins)?;
    let n = g.num_nodes();
    let mut lifted = vec![0.0; direct.len()];
    for k in 0..1u64 << h.num_nodes() {
        let x = SpinConfig::from_index(k, h.num_nodes());
        if map.anchor.is_some_and(|a| x.spin(a) != map.sign) {
            continue;
        }
        let lw = log_weight_spins(&h, &x)?;
        if lw == f64::NEG_INFINITY {
            continue;
        }
        let orig = SpinConfig::new((0..n).map(|i| x.spin(map.node_of[i])).collect())?;
        lifted[orig.index() as usize] += lw.exp();
    }
    let z: f64 = lifted.iter().sum();
    lifted.iter_mut().for_each(|p| *p /= z);
    let diff = max_abs_diff(&direct, &lifted);
    Ok(FieldReport {
        max_abs_diff: diff,
        tolerance: 1e-9,
        pass: diff < 1e-9,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StationarityCheck {
    pub kernel: KernelTag,
    pub max_abs_diff: f64,
    pub max_row_defect: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// `pi_from K = pi_to` for the kernel, pointwise.
pub fn check_kernel(
    g: &WeightedGraph,
    tables: &ExactTables,
    tag: KernelTag,
) -> Result<StationarityCheck> {
    let (from, to) = tag.worlds();
    let k = exact_kernel_matrix(g, tag)?;
    let pushed = k.apply(&tables.world(from).probs)?;
    let diff = max_abs_diff(&pushed, &tables.world(to).probs);
    let defect = k.max_row_defect();
    Ok(StationarityCheck {
        kernel: tag,
        max_abs_diff: diff,
        max_row_defect: defect,
        tolerance: 1e-9,
        pass: diff < 1e-9 && defect < 1e-12,
    })
}

/// Everything `verify` reports for one graph.
#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub nodes: usize,
    pub edges: usize,
    pub z_spins: f64,
    pub z_subs: f64,
    pub z_rc: f64,
    pub identities: Vec<IdentityCheck>,
    pub kernels: Vec<StationarityCheck>,
    pub even_subgraph_count: Option<EvenCountReport>,
    pub field: Option<FieldReport>,
    pub pass: bool,
}

/// Partition-function identities, plus (with `all`) kernel stationarity on
/// graphs within the kernel cap and the even-subgraph count of the all-open
/// state.
pub fn verify(g: &WeightedGraph, all: bool) -> Result<VerifyReport> {
    let field = if g.is_field_free() {
        None
    } else {
        Some(check_field_reduction(g)?)
    };
    let (g, _) = reduce_unidirectional_field(g)?;
    let g = &g;
    let tables = ExactTables::build(g)?;
    let mut identities = check_relate_identity(g)?;
    identities.push(check_rc_normalizer(g)?);
    let mut kernels = Vec::new();
    let mut even = None;
    if all {
        if g.num_edges() <= MAX_KERNEL_EDGES {
            for tag in KernelTag::ALL {
                kernels.push(check_kernel(g, &tables, tag)?);
            }
        }
        even = Some(check_evensubgraph_count(g, &RcConfig::ones(g.num_edges()))?);
    }
    let pass = identities.iter().all(|c| c.pass)
        && kernels.iter().all(|c| c.pass)
        && even.as_ref().is_none_or(|c| c.pass)
        && field.as_ref().is_none_or(|c| c.pass);
    Ok(VerifyReport {
        nodes: g.num_nodes(),
        edges: g.num_edges(),
        z_spins: tables.spins.z,
        z_subs: tables.subs.z,
        z_rc: tables.rc.z,
        identities,
        kernels,
        even_subgraph_count: even,
        field,
        pass,
    })
}
