//! The nine acceptance criteria, one line each. Runs without the libtest
//! harness so the lines always reach the output.

mod common;

use std::f64::consts::FRAC_PI_4;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use entaudit::bounds::{brute_force_min_max_load, symmetric_assignment_check};
use entaudit::cli::{execute, Command};
use entaudit::dynamic::{check_last_round_bound, fuzz_last_round, two_party_example, verify_prop3};
use entaudit::feasibility::{
    enumerate_admissible_distributions, float_rank_mismatches, ghz_w_warmup, verify_prop2, Configuration,
    CutRankTable,
};
use entaudit::mbqc::{
    build_graph_state, check_stabilizer, layout_to_resource_graph, mbqc_prepare, verify_prop1, BranchChoice,
    MeasurementPlan, StateGraph,
};
use entaudit::statevector::{Backend, PureState};
use entaudit::target::{build_target_state, spanning_tree_candidates, AlphaTuple, GateLayout};
use entaudit::Party;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, &'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(t: Instant, limit: Duration) -> Result<(), String> {
    ensure(t.elapsed() <= limit, format!("took {:.1?}, limit {limit:?}", t.elapsed()))
}

fn e<E: std::fmt::Display>(x: E) -> String {
    x.to_string()
}

fn zero_based(layout: &GateLayout) -> Vec<(usize, usize)> {
    layout.pairs().iter().map(|&(a, b)| (a.index() as usize - 1, b.index() as usize - 1)).collect()
}

/// Every line tree has a prefix cut of exact rank at least 3.
fn line_trees_blocked() -> Outcome {
    let t = Instant::now();
    let r = verify_prop2(&GateLayout::default_layout()).map_err(e)?;
    ensure(r.trees == 5040 && r.records.len() == 5040, format!("{} trees", r.trees))?;
    for rec in &r.records {
        ensure(rec.ranks.len() == 7, "seven prefix cuts per tree")?;
        ensure(rec.ranks.iter().any(|&k| k >= 3), format!("tree {} has no cut of rank ≥ 3", rec.index))?;
    }
    within(t, Duration::from_secs(120))?;
    Ok(format!("5040/5040 trees blocked in {:.2?}", t.elapsed()))
}

/// Gaussian-integer amplitudes at scale 2^(-15/2); exact ranks equal SVD ranks.
fn integer_amplitudes_and_float_ranks() -> Outcome {
    let layout = GateLayout::default_layout();
    let psi = build_target_state(&layout, &AlphaTuple::quarter_pi(), Backend::Exact).map_err(e)?;
    let v = psi.exact().ok_or("exact build fell back to float")?;
    ensure(v.half_power() == 15, format!("half_power {}", v.half_power()))?;
    ensure(v.len() == 256, format!("{} amplitudes", v.len()))?;
    let closed = common::target_oracle(8, &zero_based(&layout), &[FRAC_PI_4; 7]);
    let err = psi.float_amplitudes().iter().zip(&closed).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    ensure(err < 1e-12, format!("closed form differs by {err:e}"))?;
    let table = CutRankTable::compute(&psi).map_err(e)?;
    let lib_mismatch = float_rank_mismatches(&psi, &table).map_err(e)?;
    ensure(lib_mismatch.is_empty(), format!("{} cuts disagree", lib_mismatch.len()))?;
    // every rank reported for every tree, against an SVD of an independent reshape
    let mut svd = vec![0usize; 128];
    for (mask, slot) in svd.iter_mut().enumerate().skip(1) {
        let left: Vec<usize> = (0..7).filter(|b| mask >> b & 1 == 1).collect();
        *slot = common::stable_svd_rank(&common::reshape_complex(&closed, 8, &left)).ok_or("unstable SVD rank")?;
    }
    let r = verify_prop2(&layout).map_err(e)?;
    let mut compared = 0;
    for rec in &r.records {
        let mut mask = 0usize;
        for (j, &k) in rec.ranks.iter().enumerate() {
            mask |= 1 << (rec.permutation[j].index() - 1);
            ensure(svd[mask] == k, format!("tree {} cut {}: exact {k}, SVD {}", rec.index, j + 1, svd[mask]))?;
            compared += 1;
        }
    }
    Ok(format!("half_power 15, 256 integer amplitudes, {compared} ranks match SVD"))
}

/// Measuring the resource yields ψ(α) for exact and random tuples.
fn measurement_preparation() -> Outcome {
    let t = Instant::now();
    let layout = GateLayout::default_layout();
    let r = verify_prop1(&layout, 20, 16, 1).map_err(e)?;
    ensure(r.records.len() == 22, format!("{} tuples", r.records.len()))?;
    let exact: Vec<_> = r.records.iter().filter(|x| x.exact_equal.is_some()).collect();
    ensure(exact.len() == 2 && exact.iter().all(|x| x.exact_equal == Some(true)), "exact tuples not reproduced exactly")?;
    for x in &r.records {
        ensure(x.patterns >= 16, format!("{} patterns", x.patterns))?;
        ensure(x.min_overlap >= 1.0 - 1e-9, format!("overlap {}", x.min_overlap))?;
    }
    // against the closed form rather than the library's own target builder
    let g = layout_to_resource_graph(&layout);
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..3 {
        let a: [f64; 7] = std::array::from_fn(|_| rng.random_range(0.0..std::f64::consts::TAU));
        let bits: Vec<bool> = (0..7).map(|_| rng.random_bool(0.5)).collect();
        let plan = MeasurementPlan::for_alpha(&AlphaTuple::new(a).map_err(e)?);
        let got = mbqc_prepare(&g, &plan, &BranchChoice::Fixed(bits), Backend::Float).map_err(e)?;
        let want = common::target_oracle(8, &zero_based(&layout), &a);
        let ov = common::overlap(&got.float_amplitudes(), &want);
        ensure(ov >= 1.0 - 1e-9, format!("closed-form overlap {ov}"))?;
    }
    within(t, Duration::from_secs(60))?;
    let min = r.records.iter().map(|x| x.min_overlap).fold(f64::INFINITY, f64::min);
    Ok(format!("2 exact + 20 float tuples × 16 patterns, min overlap {min:.15}, {:.2?}", t.elapsed()))
}

/// Sending schedule under d0 builds the resource; measuring it gives ψ(α).
fn sending_schedule() -> Outcome {
    let r = verify_prop3(&GateLayout::default_layout(), 20, 16, 1).map_err(e)?;
    for (p, &peak) in &r.derived.peak_occupancy {
        ensure(peak as u32 <= r.slots[p], format!("{p} holds {peak} qubits"))?;
    }
    ensure(r.equals_graph_state, "final state differs from the graph state")?;
    ensure(r.chain.pass, "chained preparation failed")?;
    ensure(r.chain.records.iter().filter(|x| x.exact_equal == Some(true)).count() == 2, "exact chain")?;
    let d = &r.derived;
    Ok(format!("{} sends, {} CZs, 0 capacity violations, exact graph state, 22 tuples chained", d.sends, d.czs))
}

/// Last-round sends leave rank at most d/2 = 2 across v1.
fn last_round_bound() -> Outcome {
    let cfg = Configuration::d1();
    let a = fuzz_last_round(&cfg, Party::v(1), 500, 7).map_err(e)?;
    let b = fuzz_last_round(&cfg, Party::v(1), 500, 7).map_err(e)?;
    ensure(a == b, "fuzz is not deterministic")?;
    ensure(a.runs == 500 && a.violations == 0 && a.max_rank <= 2, format!("{} violations, max rank {}", a.violations, a.max_rank))?;
    let pair = check_last_round_bound(&two_party_example(), &Configuration::from_dims(&[4, 4]).map_err(e)?, Party::v(1))
        .map_err(e)?;
    ensure(pair.holds && pair.rank <= 2, format!("two-party rank {}", pair.rank))?;
    Ok(format!("500 scripts, max rank {} ≤ 2; (4,4) example rank {}", a.max_rank, pair.rank))
}

/// Admissible distributions under d0 are exactly the 5040 qubit-pair lines.
fn line_distributions() -> Outcome {
    let gs = enumerate_admissible_distributions(&Configuration::d0()).map_err(e)?;
    ensure(gs.len() == 5040, format!("{} graphs", gs.len()))?;
    for g in &gs {
        ensure(g.is_path(), "non-path distribution")?;
        ensure(g.degree(Party::v(8)) == 1, "v8 is not an endpoint")?;
        ensure(g.edges().values().all(|&m| m == 2), "capacity other than 2")?;
    }
    Ok("5040 paths, v8 an endpoint, every M_e = 2".into())
}

/// Cut-product bound by exhaustion, and the symmetric assignment.
fn cut_product_bound() -> Outcome {
    let t = Instant::now();
    let mut parts = Vec::new();
    for (m, d, cap) in [(1usize, 2u64, 4u64), (1, 3, 9), (2, 2, 4)] {
        let r = brute_force_min_max_load(m, d, cap).map_err(e)?;
        ensure(r.passing > 0 && r.bound_violations == 0, format!("({m},{d}): {} violations", r.bound_violations))?;
        parts.push(format!("({m},{d}) min {}", r.min_max_load.unwrap_or_default()));
    }
    let s = symmetric_assignment_check(2, 4).map_err(e)?;
    ensure(s.capacity == 2 && s.load == "8" && s.holds, format!("M_e {} load {}", s.capacity, s.load))?;
    ensure(s.cut_product == "16" && s.required == "16", format!("{} vs {}", s.cut_product, s.required))?;
    within(t, Duration::from_secs(60))?;
    Ok(format!("{}; 0 violations; symmetric (2,4): M_e 2, load 8, 16 ≥ 16", parts.join(", ")))
}

/// GHZ and W from a two-pair line; nothing fits (2,2,2).
fn warmup() -> Outcome {
    let r = ghz_w_warmup().map_err(e)?;
    ensure(r.ghz.feasible && r.w.feasible, "GHZ or W infeasible")?;
    ensure(r.qubit_only_distributions == 0, format!("{} distributions fit (2,2,2)", r.qubit_only_distributions))?;
    Ok("GHZ and W feasible, 0 distributions under (2,2,2)".into())
}

fn stabilizers_hold(g: &StateGraph) -> Result<usize, String> {
    for v in g.labels() {
        ensure(check_stabilizer(g, v).map_err(e)?, format!("stabilizer fails at {v}"))?;
    }
    Ok(g.labels().len())
}

/// Stabilizers, measurement monotonicity, rank symmetry, report determinism.
fn invariants() -> Outcome {
    let mut graphs = vec![StateGraph::three_vertex_example(), layout_to_resource_graph(&GateLayout::default_layout())];
    let trees = spanning_tree_candidates();
    for k in 0..8 {
        let layout = GateLayout::new(trees[k * 32_749].clone()).map_err(e)?;
        graphs.push(layout_to_resource_graph(&layout));
    }
    graphs.extend((0..40).map(common::random_graph));
    let mut vertices = 0;
    for g in &graphs {
        vertices += stabilizers_hold(g)?;
    }

    let mut comparisons = 0;
    for i in 0..100u64 {
        let s = common::random_state(1000 + i, i % 2 == 0);
        comparisons += common::check_measurement_monotone(&s, i)?;
    }

    let mut symmetric = 0;
    for i in 0..40u64 {
        let s: PureState = common::random_state(5000 + i, i % 2 == 0);
        let labels = s.labels().to_vec();
        for mask in 1u32..(1 << labels.len()) - 1 {
            let side = |want: bool| -> Vec<_> {
                labels.iter().enumerate().filter(|(j, _)| (mask >> j & 1 == 1) == want).map(|x| *x.1).collect()
            };
            let (a, b) = (s.schmidt_rank(&side(true)).map_err(e)?, s.schmidt_rank(&side(false)).map_err(e)?);
            ensure(a == b, format!("rank {a} vs complement {b}"))?;
            symmetric += 1;
        }
    }
    let exact = build_graph_state(&graphs[1], Backend::Exact).map_err(e)?;
    ensure(exact.exact().is_some(), "resource not exact")?;

    let cmds = [
        Command::CheckDynamic { config: "d1".into(), fuzz: 200, seed: 7, party: Party::v(1) },
        Command::VerifyProp1 { layout: None, samples: 2, patterns: 16, seed: 3 },
        Command::VerifyProp2 { layout: None },
    ];
    for cmd in &cmds {
        let mut bodies = Vec::new();
        for threads in [1, 4, 4] {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().map_err(e)?;
            bodies.push(pool.install(|| execute(cmd)).map_err(e)?.to_text());
        }
        ensure(bodies.windows(2).all(|w| w[0] == w[1]), format!("{} body differs between runs", cmd.name()))?;
    }
    Ok(format!(
        "{vertices} stabilizers on {} graphs; {comparisons} monotonicity comparisons on 100 states; \
         {symmetric} symmetric cuts; 3 reports byte-identical at 1 and 4 threads",
        graphs.len()
    ))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("line trees blocked", "exact, zero tolerance", line_trees_blocked),
        ("integer amplitudes, SVD ranks", "exact; SVD at 1e-9 relative", integer_amplitudes_and_float_ranks),
        ("measurement preparation", "overlap ≥ 1 - 1e-9; exact equality", measurement_preparation),
        ("sending schedule", "exact equality", sending_schedule),
        ("last-round rank bound", "exact ranks ≤ 2", last_round_bound),
        ("line distributions", "exact count", line_distributions),
        ("cut-product bound", "exact integers", cut_product_bound),
        ("GHZ/W warm-up", "exact ranks", warmup),
        ("invariant suites", "exact; float at 1e-9", invariants),
    ];
    let mut failed = 0;
    for (i, (name, tol, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        let (tag, detail) = match outcome {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("criterion {} {tag} {name} [tol: {tol}] {detail} ({:.2?})", i + 1, t.elapsed());
    }
    println!("acceptance: {} of 9 criteria pass", 9 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
