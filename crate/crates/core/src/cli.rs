//! Command-line front end. Each subcommand produces a [`RunReport`]; exit
//! status is 0 on PASS, 1 on FAIL and 2 on bad input.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use crate::bounds::{brute_force_min_max_load, local_dim_lower_bound, symmetric_assignment_check};
use crate::dynamic::{
    check_last_round_bound, fuzz_last_round, run_protocol_with, two_party_example, verify_prop3, BranchPolicy,
    ProtocolScript,
};
use crate::feasibility::{
    enumerate_admissible_distributions, float_rank_mismatches, ghz_w_warmup, verify_prop2, Configuration,
    CutRankTable,
};
use crate::mbqc::verify_prop1;
use crate::report::{Check, ReportBody, RunReport};
use crate::statevector::Backend;
use crate::target::{build_target_state, search_default_layout, AlphaTuple, GateLayout};
use crate::{Error, Party, Result};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "entaudit", version, about = "Schmidt-rank and resource-feasibility audits")]
pub struct Cli {
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Prepare target states by measuring the graph-state resource.
    VerifyProp1 {
        #[arg(long)]
        layout: Option<PathBuf>,
        /// Random angle tuples besides the two exact ones.
        #[arg(long, default_value_t = 20)]
        samples: usize,
        /// Branch patterns per tuple.
        #[arg(long, default_value_t = 16)]
        patterns: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Check every line tree against the quarter-pi target.
    VerifyProp2 {
        #[arg(long)]
        layout: Option<PathBuf>,
    },
    /// Derive and replay the sending schedule for the resource, then measure.
    VerifyProp3 {
        #[arg(long)]
        layout: Option<PathBuf>,
        #[arg(long, default_value_t = 4)]
        samples: usize,
        #[arg(long, default_value_t = 16)]
        patterns: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Last-round rank bound on random scripts.
    CheckDynamic {
        #[arg(long, default_value = "d1")]
        config: String,
        #[arg(long, default_value_t = 500)]
        fuzz: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Party whose last action is a send.
        #[arg(long, default_value = "v1")]
        party: Party,
    },
    /// Cut-product bound on complete-graph distributions.
    Bound {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        d: u64,
        #[arg(long)]
        brute_force: bool,
        /// Largest capacity tried per edge (default d + 1).
        #[arg(long, requires = "brute_force")]
        cap: Option<u64>,
    },
    /// GHZ and W from two Bell pairs; nothing fits three qubits.
    Warmup,
    /// Re-run the layout search and compare with the shipped default.
    SearchLayout,
    /// Simulate a protocol script.
    RunProtocol {
        script: PathBuf,
        #[arg(long, default_value = "d0")]
        config: String,
        /// Outcomes to prefer at successive measurements, e.g. `0110`.
        #[arg(long)]
        branches: Option<String>,
    },
    /// List bipartite distributions admissible under a configuration.
    Feasibility {
        #[arg(long, default_value = "d0")]
        config: String,
        /// Expected number of distributions; a mismatch fails the run.
        #[arg(long)]
        expect: Option<usize>,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::VerifyProp1 { .. } => "verify-prop1",
            Command::VerifyProp2 { .. } => "verify-prop2",
            Command::VerifyProp3 { .. } => "verify-prop3",
            Command::CheckDynamic { .. } => "check-dynamic",
            Command::Bound { .. } => "bound",
            Command::Warmup => "warmup",
            Command::SearchLayout => "search-layout",
            Command::RunProtocol { .. } => "run-protocol",
            Command::Feasibility { .. } => "feasibility",
        }
    }
}

type Inputs = BTreeMap<String, Value>;

fn inputs<const N: usize>(pairs: [(&str, Value); N]) -> Inputs {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

fn load_layout(path: &Option<PathBuf>) -> Result<(GateLayout, Value)> {
    match path {
        None => Ok((GateLayout::default_layout(), json!("default"))),
        Some(p) => Ok((GateLayout::load(p)?, json!(p.display().to_string()))),
    }
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report data serializes")
}

/// Errors that mean the input was unusable rather than that a check failed.
pub fn is_usage_error(e: &Error) -> bool {
    matches!(
        e,
        Error::Parse { .. }
            | Error::Io(_)
            | Error::InvalidInput(_)
            | Error::InvalidLayout(_)
            | Error::NotATree
            | Error::Guard(_)
    )
}

/// Runs one subcommand and returns its report body.
pub fn execute(cmd: &Command) -> Result<ReportBody> {
    let name = cmd.name();
    match cmd {
        Command::VerifyProp1 { layout, samples, patterns, seed } => {
            let (l, src) = load_layout(layout)?;
            let r = verify_prop1(&l, *samples, *patterns, *seed)?;
            let exact_ok = r.records.iter().filter(|x| x.exact_equal.is_some()).all(|x| x.pass);
            let float_ok = r.records.iter().filter(|x| x.exact_equal.is_none()).all(|x| x.pass);
            let min = r.records.iter().map(|x| x.min_overlap).fold(f64::INFINITY, f64::min);
            let checks = vec![
                Check::new("exact-tuples", exact_ok, "alpha = 0 and pi/4 reproduced exactly on every pattern"),
                Check::new("float-tuples", float_ok, format!("{samples} random tuples, min overlap {min:.12}")),
                Check::new("patterns", *patterns >= 1, format!("{patterns} branch patterns per tuple")),
            ];
            let ins = inputs([("layout", src), ("samples", json!(samples)), ("patterns", json!(patterns)), ("seed", json!(seed))]);
            Ok(ReportBody::new(name, ins, checks, to_value(&r)))
        }
        Command::VerifyProp2 { layout } => {
            let (l, src) = load_layout(layout)?;
            let r = verify_prop2(&l)?;
            let psi = build_target_state(&l, &AlphaTuple::quarter_pi(), Backend::Exact)?;
            let mismatches = float_rank_mismatches(&psi, &CutRankTable::compute(&psi)?)?;
            let checks = vec![
                Check::new("tree-count", r.trees == 5040, format!("{} line trees", r.trees)),
                Check::new(
                    "every-tree-blocked",
                    r.pass,
                    format!("{} of {} trees have a cut of rank at least 3", r.violated_trees, r.trees),
                ),
                Check::new(
                    "integer-amplitudes",
                    r.half_power == 15 && r.amplitudes == 256,
                    format!("{} Gaussian-integer amplitudes over 2^({}/2)", r.amplitudes, r.half_power),
                ),
                Check::new(
                    "float-rank-agreement",
                    mismatches.is_empty(),
                    format!("{} of 127 cuts disagree with SVD at 1e-9 relative", mismatches.len()),
                ),
            ];
            Ok(ReportBody::new(name, inputs([("layout", src)]), checks, to_value(&r)))
        }
        Command::VerifyProp3 { layout, samples, patterns, seed } => {
            let (l, src) = load_layout(layout)?;
            let r = verify_prop3(&l, *samples, *patterns, *seed)?;
            let d = &r.derived;
            let checks = vec![
                Check::new(
                    "schedule",
                    true,
                    format!("{} steps, {} sends, {} CZs, {} swaps ({})", d.steps, d.sends, d.czs, d.swaps, d.method),
                ),
                Check::new(
                    "capacity",
                    d.peak_occupancy.iter().all(|(p, &n)| n as u32 <= r.slots[p]),
                    "peak occupancy within every party's slots",
                ),
                Check::new("graph-state", r.equals_graph_state, "final state equals the resource exactly"),
                Check::new("chained-preparation", r.chain.pass, "measuring the simulated resource gives the targets"),
            ];
            let ins = inputs([("layout", src), ("config", json!("d0")), ("samples", json!(samples)), ("patterns", json!(patterns)), ("seed", json!(seed))]);
            Ok(ReportBody::new(name, ins, checks, to_value(&r)))
        }
        Command::CheckDynamic { config, fuzz, seed, party } => {
            let cfg = Configuration::load(config)?;
            let pair = Configuration::from_dims(&[4, 4])?;
            let example = check_last_round_bound(&two_party_example(), &pair, Party::v(1))?;
            let r = fuzz_last_round(&cfg, *party, *fuzz, *seed)?;
            let checks = vec![
                Check::new(
                    "two-party-example",
                    example.holds,
                    format!("rank {} against bound {} under (4, 4)", example.rank, example.bound),
                ),
                Check::new(
                    "fuzz",
                    r.pass,
                    format!("{} scripts, max rank {}, bound {}, {} violations", r.runs, r.max_rank, r.bound, r.violations),
                ),
            ];
            let ins = inputs([("config", json!(config)), ("fuzz", json!(fuzz)), ("seed", json!(seed)), ("party", json!(party.to_string()))]);
            Ok(ReportBody::new(name, ins, checks, json!({"two_party": example, "fuzz": r})))
        }
        Command::Bound { m, d, brute_force, cap } => {
            let sym = symmetric_assignment_check(*m, *d)?;
            let mut checks = vec![Check::new(
                "symmetric",
                sym.holds,
                format!(
                    "M_e = {}, load {}, bound {:.6}, cut product {} against {}",
                    sym.capacity, sym.load, sym.bound, sym.cut_product, sym.required
                ),
            )];
            let mut data = json!({"bound": local_dim_lower_bound(*m, *d), "symmetric": sym});
            let mut ins = inputs([("m", json!(m)), ("d", json!(d))]);
            if *brute_force {
                let cap = cap.unwrap_or(d + 1);
                let b = brute_force_min_max_load(*m, *d, cap)?;
                checks.push(Check::new(
                    "brute-force",
                    b.bound_violations == 0,
                    format!(
                        "{} assignments, {} pass the cut condition, min max load {}, {} below bound",
                        b.assignments,
                        b.passing,
                        b.min_max_load.as_deref().unwrap_or("none"),
                        b.bound_violations
                    ),
                ));
                data["brute_force"] = to_value(&b);
                ins.insert("cap".into(), json!(cap));
            }
            Ok(ReportBody::new(name, ins, checks, data))
        }
        Command::Warmup => {
            let r = ghz_w_warmup()?;
            let checks = vec![
                Check::new("ghz", r.ghz.feasible, "GHZ from two Bell pairs on a line"),
                Check::new("w", r.w.feasible, "W from two Bell pairs on a line"),
                Check::new(
                    "qubit-only",
                    r.qubit_only_distributions == 0,
                    format!("{} connected distributions fit (2, 2, 2)", r.qubit_only_distributions),
                ),
            ];
            Ok(ReportBody::new(name, Inputs::new(), checks, to_value(&r)))
        }
        Command::SearchLayout => {
            let found = search_default_layout()?;
            let same = found == GateLayout::default_layout();
            let checks = vec![Check::new("matches-default", same, "search result equals the shipped layout")];
            Ok(ReportBody::new(name, Inputs::new(), checks, json!({"layout": found.pairs(), "text": found.to_text()})))
        }
        Command::RunProtocol { script, config, branches } => {
            let s = ProtocolScript::load(script)?;
            let cfg = Configuration::load(config)?;
            let policy = match branches {
                None => BranchPolicy::default(),
                Some(b) => BranchPolicy::Pattern(
                    b.chars()
                        .map(|c| match c {
                            '0' => Ok(false),
                            '1' => Ok(true),
                            _ => Err(Error::InvalidInput(format!("branch pattern `{b}` must be 0s and 1s"))),
                        })
                        .collect::<Result<_>>()?,
                ),
            };
            let ins = inputs([
                ("script", json!(script.display().to_string())),
                ("config", json!(config)),
                ("branches", json!(branches)),
            ]);
            match run_protocol_with(&s, &cfg, &policy) {
                Ok(run) => {
                    let ranks: BTreeMap<String, usize> = cfg
                        .parties()
                        .into_iter()
                        .map(|p| Ok((p.to_string(), run.state.party_cut_rank(p)?)))
                        .collect::<Result<_>>()?;
                    let labels: Vec<String> = run.state.labels().iter().map(|l| l.to_string()).collect();
                    let checks = vec![Check::new(
                        "run",
                        true,
                        format!("{} steps, {} sends, {} live qubits", s.len(), s.sends(), labels.len()),
                    )];
                    let data = json!({
                        "trace": run.trace,
                        "peak_occupancy": run.peak_occupancy,
                        "final_labels": labels,
                        "final_party_ranks": ranks,
                        "exact": run.state.exact().is_some(),
                    });
                    Ok(ReportBody::new(name, ins, checks, data))
                }
                Err(e @ (Error::Capacity { .. } | Error::Protocol { .. })) => Ok(ReportBody::new(
                    name,
                    ins,
                    vec![Check::new("run", false, e.to_string())],
                    json!({"error": e.to_string()}),
                )),
                Err(e) => Err(e),
            }
        }
        Command::Feasibility { config, expect } => {
            let cfg = Configuration::load(config)?;
            let graphs = enumerate_admissible_distributions(&cfg)?;
            let paths = graphs.iter().filter(|g| g.is_path()).count();
            let mut checks = vec![Check::new(
                "enumeration",
                true,
                format!("{} connected distributions, {} of them paths", graphs.len(), paths),
            )];
            if let Some(n) = expect {
                checks.push(Check::new("expected-count", graphs.len() == *n, format!("expected {n}")));
            }
            let ins = inputs([("config", json!(config)), ("expect", json!(expect))]);
            let data = json!({"dims": cfg.dims(), "count": graphs.len(), "paths": paths, "graphs": graphs});
            Ok(ReportBody::new(name, ins, checks, data))
        }
    }
}

fn configure_threads() {
    if let Some(n) = std::env::var("ENTAUDIT_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        // fails only if a pool already exists, which keeps its size
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

/// Parses `args` (program name first), runs, writes the report, and returns
/// the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
        }
    };
    configure_threads();
    let start = Instant::now();
    let body = match execute(&cli.command) {
        Ok(b) => b,
        Err(e) if is_usage_error(&e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
        Err(e) => ReportBody::new(
            cli.command.name(),
            Inputs::new(),
            vec![Check::new("run", false, e.to_string())],
            json!({"error": e.to_string()}),
        ),
    };
    let report = RunReport::new(body, start.elapsed().as_secs_f64() * 1e3);
    let text = report.to_text();
    match &cli.out {
        Some(p) => {
            if let Err(e) = std::fs::write(p, &text) {
                eprintln!("error: cannot write {}: {e}", p.display());
                return EXIT_USAGE;
            }
        }
        None => print!("{text}"),
    }
    eprint!("{}", report.summary());
    if report.body.verdict.is_pass() {
        EXIT_PASS
    } else {
        EXIT_FAIL
    }
}
