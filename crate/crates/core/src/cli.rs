//! Command-line front end.
//!
//! Exit codes: 0 success, 1 verification failed, 2 input or parse error,
//! 3 enumeration cap exceeded, 4 no coalescence.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;
use sha2::{Digest, Sha256};

use crate::cftp::perfect_batch;
use crate::chains::{energy, run_chain, run_replicates, ChainState, Kernel, Statistic};
use crate::config::{clusters_unchecked, Configuration, World};
use crate::error::{Error, Result};
use crate::graph::{reduce_unidirectional_field, Param, WeightedGraph};
use crate::io::{parse_config, parse_graph, write_graph_json, write_graph_text};
use crate::oracle::{
    self, enumerate_world, MAX_EDGE_WORLD_EDGES, MAX_KERNEL_EDGES, MAX_SPIN_NODES,
};
use crate::par::{self, Backend};
use crate::reduce::reduce;
use crate::rng::{BernoulliSource, RngStream};

#[derive(Debug, Parser)]
#[command(
    name = "ising-reduce",
    version,
    about = "Exact sampling reductions for the Ising model"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum WorldArg {
    Spins,
    Subs,
    Rc,
}

impl From<WorldArg> for World {
    fn from(w: WorldArg) -> World {
        match w {
            WorldArg::Spins => World::Spins,
            WorldArg::Subs => World::Subs,
            WorldArg::Rc => World::Rc,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PerfectWorld {
    Rc,
    Subs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ParamArg {
    Beta,
    Lambda,
    P,
}

impl From<ParamArg> for Param {
    fn from(p: ParamArg) -> Param {
        match p {
            ParamArg::Beta => Param::Beta,
            ParamArg::Lambda => Param::Lambda,
            ParamArg::P => Param::P,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Enum,
    Cftp,
    Chain,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum KernelArg {
    Sw,
    SubsSw,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Rewrite a graph file with couplings in another parameterization.
    Convert {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long = "to", value_enum)]
        to: ParamArg,
        /// Write the JSON form instead of the text form.
        #[arg(long)]
        json: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Draw independent samples from one world.
    Sample {
        #[arg(long, value_enum)]
        world: WorldArg,
        #[arg(long, value_enum)]
        method: Method,
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        samples: usize,
        #[arg(long)]
        seed: u64,
        /// Chain steps per sample for `--method chain`.
        #[arg(long, default_value_t = 100)]
        steps: u64,
        #[arg(long, default_value_t = 30)]
        max_epoch: u32,
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Push one configuration through a reduction.
    Reduce {
        #[arg(long, value_enum)]
        from: WorldArg,
        #[arg(long = "to", value_enum)]
        to: WorldArg,
        #[arg(long)]
        graph: PathBuf,
        /// File holding the configuration (JSON array or `+-`/`01` string).
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        seed: u64,
    },
    /// Run a Swendsen-Wang style chain and write a CSV trace.
    Chain {
        #[arg(long, value_enum)]
        kernel: KernelArg,
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        steps: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value = "")]
        stats: String,
        #[arg(long, default_value_t = 1)]
        thin: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check partition-function identities (and more) by enumeration.
    Verify {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        all_identities: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Perfect samples by coupling from the past.
    Perfect {
        #[arg(long, value_enum)]
        world: PerfectWorld,
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        samples: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 30)]
        max_epoch: u32,
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Accompanies every output file as `<out>.manifest.json`.
#[derive(Clone, Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub graph_sha256: String,
    pub seed: Option<u64>,
    pub tool_version: &'static str,
    pub caps: Caps,
    pub elapsed_ms: u128,
}

#[derive(Clone, Debug, Serialize)]
pub struct Caps {
    pub max_spin_nodes: usize,
    pub max_edge_world_edges: usize,
    pub max_kernel_edges: usize,
    pub max_epoch: Option<u32>,
}

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::TooLarge(_) => 3,
        Error::NoCoalescence { .. } => 4,
        _ => 2,
    }
}

/// Parses `args` (program name first) and runs the command, writing the
/// summary to `stdout`. Returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli.command, stdout) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

struct LoadedGraph {
    graph: WeightedGraph,
    sha256: String,
}

fn load_graph(path: &Path) -> Result<LoadedGraph> {
    let bytes = std::fs::read(path)?;
    let text = String::from_utf8(bytes.clone()).map_err(|_| Error::Parse {
        line: 0,
        msg: "graph file is not UTF-8".into(),
    })?;
    let graph = parse_graph(&text)?;
    let sha256 = Sha256::digest(&bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect();
    Ok(LoadedGraph { graph, sha256 })
}

fn require_field_free(g: &WeightedGraph) -> Result<()> {
    if g.is_field_free() {
        Ok(())
    } else {
        Err(Error::UnsupportedField(
            "this command needs a field-free graph; sample the spins world to use a field".into(),
        ))
    }
}

fn write_output(out: Option<&Path>, body: &str, stdout: &mut dyn Write) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, body)?,
        None => stdout.write_all(body.as_bytes())?,
    }
    Ok(())
}

fn write_manifest(out: Option<&Path>, manifest: &RunManifest) -> Result<()> {
    if let Some(path) = out {
        let mut name = path.as_os_str().to_owned();
        name.push(".manifest.json");
        std::fs::write(
            PathBuf::from(name),
            serde_json::to_string_pretty(manifest)? + "\n",
        )?;
    }
    Ok(())
}

fn manifest(
    command: &str,
    graph: &LoadedGraph,
    seed: Option<u64>,
    max_epoch: Option<u32>,
    started: Instant,
) -> RunManifest {
    RunManifest {
        command: command.to_string(),
        graph_sha256: graph.sha256.clone(),
        seed,
        tool_version: env!("CARGO_PKG_VERSION"),
        caps: Caps {
            max_spin_nodes: MAX_SPIN_NODES,
            max_edge_world_edges: MAX_EDGE_WORLD_EDGES,
            max_kernel_edges: MAX_KERNEL_EDGES,
            max_epoch,
        },
        elapsed_ms: started.elapsed().as_millis(),
    }
}

#[derive(Default)]
struct Moments {
    n: f64,
    sum: f64,
    sum_sq: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.n += 1.0;
        self.sum += x;
        self.sum_sq += x * x;
    }

    fn summary(&self) -> serde_json::Value {
        if self.n == 0.0 {
            return json!({"mean": null, "stderr": null});
        }
        let mean = self.sum / self.n;
        let var = if self.n > 1.0 {
            ((self.sum_sq - self.n * mean * mean) / (self.n - 1.0)).max(0.0)
        } else {
            0.0
        };
        json!({"mean": mean, "stderr": (var / self.n).sqrt()})
    }
}

fn sample_summary(g: &WeightedGraph, samples: &[Configuration]) -> serde_json::Value {
    let mut cols: Vec<(&str, Moments)> = Vec::new();
    let mut push = |name: &'static str, v: f64| match cols.iter_mut().find(|(n, _)| *n == name) {
        Some((_, m)) => m.push(v),
        None => {
            let mut m = Moments::default();
            m.push(v);
            cols.push((name, m));
        }
    };
    for c in samples {
        match c {
            Configuration::Spins(x) => {
                push("m", x.magnetization());
                if x.len() == g.num_nodes() {
                    push("energy", energy(g, x));
                }
            }
            Configuration::Subs(y) => push("size", y.count_ones() as f64),
            Configuration::Rc(z) => {
                push("open", z.count_ones() as f64);
                push("clusters", clusters_unchecked(g, z.bits()).count as f64);
            }
        }
    }
    serde_json::Value::Object(
        cols.into_iter()
            .map(|(n, m)| (n.to_string(), m.summary()))
            .collect(),
    )
}

fn jsonl(lines: impl Iterator<Item = serde_json::Value>) -> String {
    let mut out = String::new();
    for line in lines {
        out.push_str(&line.to_string());
        out.push('\n');
    }
    out
}

fn execute(command: Command, stdout: &mut dyn Write) -> Result<i32> {
    let started = Instant::now();
    match command {
        Command::Convert {
            graph,
            to,
            json,
            out,
        } => {
            let loaded = load_graph(&graph)?;
            let body = if json {
                write_graph_json(&loaded.graph, to.into())
            } else {
                write_graph_text(&loaded.graph, to.into())
            };
            write_output(out.as_deref(), &body, stdout)?;
            Ok(0)
        }

        Command::Sample {
            world,
            method,
            graph,
            samples,
            seed,
            steps,
            max_epoch,
            jobs,
            out,
        } => {
            let loaded = load_graph(&graph)?;
            let world = World::from(world);
            let (g, lift) = if loaded.graph.is_field_free() {
                (loaded.graph.clone(), None)
            } else if world == World::Spins {
                let (h, map) = reduce_unidirectional_field(&loaded.graph)?;
                (h, Some(map))
            } else {
                return Err(Error::UnsupportedField(
                    "only the spins world can be sampled with a field".into(),
                ));
            };
            let base = RngStream::new(seed, 0);
            let (configs, epochs): (Vec<Configuration>, Vec<Option<u32>>) =
                par::with_jobs(jobs, || -> Result<_> {
                    Ok(match method {
                        Method::Enum => {
                            let table = enumerate_world(&g, world)?;
                            let sampler = table.sampler();
                            par::map_range(samples, Backend::Parallel, |i| {
                                let mut rng = base.substream(i as u64);
                                (table.config(&g, sampler.sample(&mut rng)), None)
                            })
                            .into_iter()
                            .unzip()
                        }
                        Method::Cftp => {
                            perfect_batch(&g, world, &base, samples, max_epoch, Backend::Parallel)?
                                .into_iter()
                                .map(|o| (o.config, Some(o.epoch)))
                                .unzip()
                        }
                        Method::Chain => {
                            let init = ChainState::default_for(&g, world);
                            run_replicates(
                                &g,
                                &init,
                                steps,
                                &base,
                                samples,
                                &[],
                                1,
                                Backend::Parallel,
                            )?
                            .into_iter()
                            .map(|(s, _)| (s.config, None))
                            .unzip()
                        }
                    })
                })?;
            let configs: Vec<Configuration> = match &lift {
                Some(map) => configs
                    .into_iter()
                    .map(|c| match c {
                        Configuration::Spins(x) => Configuration::Spins(map.lift(&x)),
                        other => other,
                    })
                    .collect(),
                None => configs,
            };
            let body = jsonl(
                configs
                    .iter()
                    .zip(&epochs)
                    .enumerate()
                    .map(|(i, (c, e))| match e {
                        Some(epoch) => json!({"index": i, "config": c, "epoch": epoch}),
                        None => json!({"index": i, "config": c}),
                    }),
            );
            let summary_graph = if lift.is_some() { &loaded.graph } else { &g };
            let summary = sample_summary(summary_graph, &configs);
            let m = manifest("sample", &loaded, Some(seed), Some(max_epoch), started);
            match out.as_deref() {
                Some(path) => {
                    std::fs::write(path, body)?;
                    write_manifest(Some(path), &m)?;
                }
                None => stdout.write_all(body.as_bytes())?,
            }
            let report = json!({
                "world": world,
                "samples": samples,
                "summary": summary,
                "manifest": m,
            });
            if out.is_some() {
                writeln!(stdout, "{}", serde_json::to_string_pretty(&report)?)?;
            }
            Ok(0)
        }

        Command::Reduce {
            from,
            to,
            graph,
            config,
            seed,
        } => {
            let loaded = load_graph(&graph)?;
            require_field_free(&loaded.graph)?;
            let from_config = parse_config(from.into(), &std::fs::read_to_string(&config)?)?;
            let mut rng = RngStream::new(seed, 0);
            let result = reduce(&loaded.graph, &from_config, to.into(), &mut rng)?;
            let report = json!({
                "from": World::from(from),
                "to": World::from(to),
                "config": result,
                "bits": rng.draws(),
            });
            writeln!(stdout, "{report}")?;
            Ok(0)
        }

        Command::Chain {
            kernel,
            graph,
            steps,
            seed,
            stats,
            thin,
            out,
        } => {
            let loaded = load_graph(&graph)?;
            require_field_free(&loaded.graph)?;
            let stats = Statistic::parse_list(&stats)?;
            let kernel = match kernel {
                KernelArg::Sw => Kernel::SwClassic,
                KernelArg::SubsSw => Kernel::SwSubgraphs,
            };
            let mut state = ChainState::default_for(&loaded.graph, kernel.world());
            let mut rng = RngStream::new(seed, 0);
            let trace = run_chain(&loaded.graph, &mut state, steps, &mut rng, &stats, thin)?;
            write_output(out.as_deref(), &trace.to_csv(), stdout)?;
            write_manifest(
                out.as_deref(),
                &manifest("chain", &loaded, Some(seed), None, started),
            )?;
            Ok(0)
        }

        Command::Verify {
            graph,
            all_identities,
            out,
        } => {
            let loaded = load_graph(&graph)?;
            let report = oracle::verify(&loaded.graph, all_identities)?;
            let body = serde_json::to_string_pretty(&report)? + "\n";
            write_output(out.as_deref(), &body, stdout)?;
            write_manifest(
                out.as_deref(),
                &manifest("verify", &loaded, None, None, started),
            )?;
            Ok(if report.pass { 0 } else { 1 })
        }

        Command::Perfect {
            world,
            graph,
            samples,
            seed,
            max_epoch,
            jobs,
            out,
        } => {
            let loaded = load_graph(&graph)?;
            require_field_free(&loaded.graph)?;
            let world = match world {
                PerfectWorld::Rc => World::Rc,
                PerfectWorld::Subs => World::Subs,
            };
            let base = RngStream::new(seed, 0);
            let outcomes = par::with_jobs(jobs, || {
                perfect_batch(
                    &loaded.graph,
                    world,
                    &base,
                    samples,
                    max_epoch,
                    Backend::Parallel,
                )
            })?;
            let body = jsonl(outcomes.iter().enumerate().map(|(i, o)| {
                json!({"index": i, "config": o.config, "epoch": o.epoch, "steps": o.steps})
            }));
            write_output(out.as_deref(), &body, stdout)?;
            write_manifest(
                out.as_deref(),
                &manifest("perfect", &loaded, Some(seed), Some(max_epoch), started),
            )?;
            Ok(0)
        }
    }
}
