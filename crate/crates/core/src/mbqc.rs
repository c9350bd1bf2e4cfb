//! Graph states and measurement-based preparation of the target family.
//!
//! Each auxiliary vertex of degree 2 implements one `exp(iα Z⊗Z)` gate
//! between its two target neighbours: rotate it by `exp(iαX)`, measure in
//! the Z basis, and on outcome 1 apply Z to both neighbours.

use std::collections::BTreeSet;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::statevector::{Backend, Pauli, PureState};
use crate::target::{build_target_state, target_labels, AlphaTuple, GateLayout, NUM_GATES};
use crate::{Error, Party, QubitLabel, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    Target,
    Auxiliary,
}

/// A simple graph on qubit labels with target/auxiliary colouring.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StateGraph {
    vertices: Vec<(QubitLabel, Color)>,
    edges: BTreeSet<(QubitLabel, QubitLabel)>,
}

impl StateGraph {
    pub fn new(
        targets: &[QubitLabel],
        auxiliaries: &[QubitLabel],
        edges: impl IntoIterator<Item = (QubitLabel, QubitLabel)>,
    ) -> Result<Self> {
        let vertices: Vec<(QubitLabel, Color)> = targets
            .iter()
            .map(|&l| (l, Color::Target))
            .chain(auxiliaries.iter().map(|&l| (l, Color::Auxiliary)))
            .collect();
        let mut seen = BTreeSet::new();
        for &(l, _) in &vertices {
            if !seen.insert(l) {
                return Err(Error::DuplicateLabel(l));
            }
        }
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            if a == b {
                return Err(Error::InvalidInput(format!("self-loop at {a}")));
            }
            for l in [a, b] {
                if !seen.contains(&l) {
                    return Err(Error::MissingLabel(l));
                }
            }
            if !set.insert((a.min(b), a.max(b))) {
                return Err(Error::InvalidInput(format!("duplicate edge {a} {b}")));
            }
        }
        Ok(Self { vertices, edges: set })
    }

    /// Auxiliary `v1:0` joined to targets `v2:0` and `v3:0`.
    pub fn three_vertex_example() -> Self {
        let q = |k| QubitLabel::new(Party::v(k), 0);
        Self::new(&[q(2), q(3)], &[q(1)], [(q(1), q(2)), (q(1), q(3))]).unwrap()
    }

    pub fn labels(&self) -> Vec<QubitLabel> {
        self.vertices.iter().map(|&(l, _)| l).collect()
    }

    pub fn targets(&self) -> Vec<QubitLabel> {
        self.of_color(Color::Target)
    }

    pub fn auxiliaries(&self) -> Vec<QubitLabel> {
        self.of_color(Color::Auxiliary)
    }

    fn of_color(&self, c: Color) -> Vec<QubitLabel> {
        self.vertices.iter().filter(|v| v.1 == c).map(|v| v.0).collect()
    }

    pub fn color(&self, v: QubitLabel) -> Option<Color> {
        self.vertices.iter().find(|x| x.0 == v).map(|x| x.1)
    }

    pub fn edges(&self) -> &BTreeSet<(QubitLabel, QubitLabel)> {
        &self.edges
    }

    pub fn neighbors(&self, v: QubitLabel) -> Vec<QubitLabel> {
        self.edges
            .iter()
            .filter_map(|&(a, b)| if a == v { Some(b) } else if b == v { Some(a) } else { None })
            .collect()
    }

    pub fn is_tree(&self) -> bool {
        let labels = self.labels();
        if labels.is_empty() || self.edges.len() + 1 != labels.len() {
            return false;
        }
        let mut seen = BTreeSet::from([labels[0]]);
        let mut stack = vec![labels[0]];
        while let Some(u) = stack.pop() {
            for w in self.neighbors(u) {
                if seen.insert(w) {
                    stack.push(w);
                }
            }
        }
        seen.len() == labels.len()
    }

    /// Every auxiliary has exactly two neighbours, both targets.
    pub fn auxiliaries_are_gates(&self) -> bool {
        self.auxiliaries().into_iter().all(|a| {
            let n = self.neighbors(a);
            n.len() == 2 && n.iter().all(|&u| self.color(u) == Some(Color::Target))
        })
    }

    /// `targets: …` line, `aux: …` line, then one edge `a b` per line.
    /// Blank lines and `#` comments are ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let mut header = |key: &str| -> Result<Vec<QubitLabel>> {
            let (no, line) = lines
                .next()
                .ok_or_else(|| Error::Parse { line: 1, msg: format!("missing `{key}:` line") })?;
            let rest = line
                .strip_prefix(key)
                .and_then(|r| r.strip_prefix(':'))
                .ok_or_else(|| Error::Parse { line: no, msg: format!("expected `{key}: …`") })?;
            rest.split_whitespace()
                .map(|t| t.parse().map_err(|e: Error| Error::Parse { line: no, msg: e.to_string() }))
                .collect()
        };
        let targets = header("targets")?;
        let aux = header("aux")?;
        let mut edges = Vec::new();
        for (no, line) in lines {
            let toks: Vec<&str> = line.split_whitespace().collect();
            let [a, b] = toks[..] else {
                return Err(Error::Parse { line: no, msg: format!("expected `a b`, found `{line}`") });
            };
            let p = |t: &str| t.parse::<QubitLabel>().map_err(|e| Error::Parse { line: no, msg: e.to_string() });
            edges.push((p(a)?, p(b)?, no));
        }
        let mut seen = BTreeSet::new();
        for &(a, b, no) in &edges {
            if !seen.insert((a.min(b), a.max(b))) || a == b {
                return Err(Error::Parse { line: no, msg: format!("bad or repeated edge {a} {b}") });
            }
        }
        Self::new(&targets, &aux, edges.into_iter().map(|(a, b, _)| (a, b))).map_err(|e| Error::Parse {
            line: 1,
            msg: e.to_string(),
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn to_text(&self) -> String {
        let join = |ls: Vec<QubitLabel>| ls.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(" ");
        let mut s = format!("targets: {}\naux: {}\n", join(self.targets()), join(self.auxiliaries()));
        for (a, b) in &self.edges {
            s.push_str(&format!("{a} {b}\n"));
        }
        s
    }
}

/// `|+⟩` on every vertex, then CZ along every edge.
pub fn build_graph_state(g: &StateGraph, backend: Backend) -> Result<PureState> {
    let mut s = PureState::init_plus(&g.labels(), backend)?;
    for &(a, b) in g.edges() {
        s = s.apply_cz(a, b)?;
    }
    Ok(s)
}

/// `X_v ∏_{u∈N(v)} Z_u |G⟩ = |G⟩`, decided exactly.
pub fn check_stabilizer(g: &StateGraph, v: QubitLabel) -> Result<bool> {
    check_signed_stabilizer(g, v, false)
}

/// As [`check_stabilizer`], with the operator optionally negated.
pub fn check_signed_stabilizer(g: &StateGraph, v: QubitLabel, negate: bool) -> Result<bool> {
    if g.color(v).is_none() {
        return Err(Error::MissingLabel(v));
    }
    let s = build_graph_state(g, Backend::Exact)?;
    let ops: Vec<(QubitLabel, Pauli)> = std::iter::once((v, Pauli::X))
        .chain(g.neighbors(v).into_iter().map(|u| (u, Pauli::Z)))
        .collect();
    s.apply_pauli_string(&ops, negate)?.exactly_equal(&s)
}

/// Auxiliaries to measure, in order, with their rotation angles.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MeasurementPlan {
    entries: Vec<(QubitLabel, f64)>,
}

impl MeasurementPlan {
    pub fn new(entries: Vec<(QubitLabel, f64)>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for &(l, a) in &entries {
            if !seen.insert(l) {
                return Err(Error::DuplicateLabel(l));
            }
            if !(0.0..std::f64::consts::TAU).contains(&a) {
                return Err(Error::InvalidInput(format!("angle {a} for {l} is outside [0, 2π)")));
            }
        }
        Ok(Self { entries })
    }

    /// Auxiliary `i` of [`layout_to_resource_graph`] with angle `α_i`.
    pub fn for_alpha(alpha: &AlphaTuple) -> Self {
        Self {
            entries: (0..NUM_GATES).map(|i| (aux_label(i), alpha.values()[i])).collect(),
        }
    }

    pub fn entries(&self) -> &[(QubitLabel, f64)] {
        &self.entries
    }
}

/// Which measurement outcomes to follow.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BranchChoice {
    /// One bit per plan entry.
    Fixed(Vec<bool>),
    /// Every branch; all must give the same final state.
    Both,
}

/// Builds the graph state and runs the plan on it.
pub fn mbqc_prepare(
    g: &StateGraph,
    plan: &MeasurementPlan,
    choice: &BranchChoice,
    backend: Backend,
) -> Result<PureState> {
    let start = build_graph_state(g, backend)?;
    mbqc_prepare_from_state(start, g, plan, choice)
}

/// Runs the plan on an already prepared copy of the graph state.
pub fn mbqc_prepare_from_state(
    state: PureState,
    g: &StateGraph,
    plan: &MeasurementPlan,
    choice: &BranchChoice,
) -> Result<PureState> {
    if !g.auxiliaries_are_gates() {
        return Err(Error::InvalidInput("every auxiliary needs two target neighbours".into()));
    }
    let planned: BTreeSet<QubitLabel> = plan.entries.iter().map(|e| e.0).collect();
    for a in g.auxiliaries() {
        if !planned.contains(&a) {
            return Err(Error::InvalidInput(format!("plan omits auxiliary {a}")));
        }
    }
    if let Some(&(l, _)) = plan.entries.iter().find(|e| g.color(e.0) != Some(Color::Auxiliary)) {
        return Err(Error::InvalidInput(format!("{l} is not an auxiliary vertex")));
    }
    match choice {
        BranchChoice::Fixed(bits) => {
            if bits.len() != plan.entries.len() {
                return Err(Error::InvalidInput(format!(
                    "{} branch bits for {} measurements",
                    bits.len(),
                    plan.entries.len()
                )));
            }
            let mut s = state;
            for (&(aux, alpha), &bit) in plan.entries.iter().zip(bits) {
                s = measure_step(&s, g, aux, alpha, bit)?
                    .ok_or_else(|| Error::InvalidInput(format!("outcome {} at {aux} has probability 0", bit as u8)))?;
            }
            Ok(s)
        }
        BranchChoice::Both => {
            let mut finals = Vec::new();
            explore(state, g, &plan.entries, &mut finals)?;
            let first = finals.swap_remove(0);
            for other in &finals {
                if !first.same_state(other)? {
                    return Err(Error::Nondeterministic("measurement branches give different states".into()));
                }
            }
            Ok(first)
        }
    }
}

fn explore(s: PureState, g: &StateGraph, rest: &[(QubitLabel, f64)], out: &mut Vec<PureState>) -> Result<()> {
    let Some((&(aux, alpha), tail)) = rest.split_first() else {
        out.push(s);
        return Ok(());
    };
    for bit in [false, true] {
        if let Some(next) = measure_step(&s, g, aux, alpha, bit)? {
            explore(next, g, tail, out)?;
        }
    }
    Ok(())
}

/// Rotation, measurement, and correction for one auxiliary; `None` when the
/// chosen outcome cannot occur.
fn measure_step(s: &PureState, g: &StateGraph, aux: QubitLabel, alpha: f64, bit: bool) -> Result<Option<PureState>> {
    let m = s.apply_x_rotation(aux, alpha)?.measure_z(aux)?;
    let Some(mut post) = m.branch(bit).state.clone() else {
        return Ok(None);
    };
    if bit {
        for u in g.neighbors(aux) {
            post = post.apply_pauli(u, Pauli::Z)?;
        }
    }
    Ok(Some(post))
}

fn aux_label(i: usize) -> QubitLabel {
    QubitLabel::new(Party::v(i as u16 + 1), 1)
}

/// Fifteen-vertex resource: target `v_k:0` for every party and auxiliary
/// `v_i:1` subdividing gate pair `i`.
pub fn layout_to_resource_graph(layout: &GateLayout) -> StateGraph {
    let targets = target_labels();
    let aux: Vec<QubitLabel> = (0..NUM_GATES).map(aux_label).collect();
    let edges = layout.pairs().iter().enumerate().flat_map(|(i, &(a, b))| {
        [(aux_label(i), QubitLabel::new(a, 0)), (aux_label(i), QubitLabel::new(b, 0))]
    });
    StateGraph::new(&targets, &aux, edges).expect("layout pairs give a simple graph")
}

/// Result of preparing one angle tuple over several branch patterns.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PrepareRecord {
    pub backend: Backend,
    pub alphas: Vec<f64>,
    pub patterns: usize,
    pub min_overlap: f64,
    /// Exact tuples only: every pattern gave exactly the target amplitudes.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact_equal: Option<bool>,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Prop1Report {
    pub layout: Vec<(Party, Party)>,
    pub seed: u64,
    pub tolerance: f64,
    pub records: Vec<PrepareRecord>,
    pub pass: bool,
}

/// Overlap tolerance for float preparations.
pub const PREPARE_TOLERANCE: f64 = 1e-9;

/// Distinct branch patterns over the seven measurements, drawn from `rng`.
fn branch_patterns(rng: &mut ChaCha8Rng, count: usize) -> Vec<Vec<bool>> {
    let count = count.min(1 << NUM_GATES);
    let mut seen = BTreeSet::new();
    while seen.len() < count {
        seen.insert(rng.random_range(0u32..1 << NUM_GATES));
    }
    seen.into_iter().map(|b| (0..NUM_GATES).map(|i| b >> i & 1 == 1).collect()).collect()
}

/// Checks `start` against the target for one tuple and each pattern.
pub fn check_preparation(
    start: &PureState,
    layout: &GateLayout,
    alpha: &AlphaTuple,
    patterns: &[Vec<bool>],
) -> Result<PrepareRecord> {
    let g = layout_to_resource_graph(layout);
    let plan = MeasurementPlan::for_alpha(alpha);
    let exact = start.exact().is_some();
    let backend = if exact { Backend::Exact } else { Backend::Float };
    let want = build_target_state(layout, alpha, backend)?;
    let mut min_overlap = f64::INFINITY;
    let mut all_equal = true;
    for bits in patterns {
        let got = mbqc_prepare_from_state(start.clone(), &g, &plan, &BranchChoice::Fixed(bits.clone()))?;
        min_overlap = min_overlap.min(got.overlap(&want)?);
        if exact {
            all_equal &= got.exactly_equal(&want)?;
        }
    }
    let exact_equal = exact.then_some(all_equal);
    Ok(PrepareRecord {
        backend,
        alphas: alpha.values().to_vec(),
        patterns: patterns.len(),
        min_overlap,
        pass: exact_equal.unwrap_or(true) && min_overlap >= 1.0 - PREPARE_TOLERANCE,
        exact_equal,
    })
}

/// Prepares `α = 0`, `α = π/4` (exactly) and `samples` random tuples (in
/// floating point) from `start`, each over `patterns` branch patterns. With
/// `start = None` the resource is built directly.
pub fn verify_prop1_from(
    start: Option<&PureState>,
    layout: &GateLayout,
    samples: usize,
    patterns: usize,
    seed: u64,
) -> Result<Prop1Report> {
    let g = layout_to_resource_graph(layout);
    let exact_start = match start {
        Some(s) => s.clone(),
        None => build_graph_state(&g, Backend::Exact)?,
    };
    let float_start = exact_start.to_float();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut jobs = vec![(AlphaTuple::zeros(), true), (AlphaTuple::quarter_pi(), true)];
    for _ in 0..samples {
        let a: [f64; NUM_GATES] = std::array::from_fn(|_| rng.random_range(0.0..std::f64::consts::TAU));
        jobs.push((AlphaTuple::new(a)?, false));
    }
    let jobs: Vec<_> = jobs.into_iter().map(|(a, e)| (a, e, branch_patterns(&mut rng, patterns))).collect();
    let records = jobs
        .par_iter()
        .map(|(a, exact, pats)| check_preparation(if *exact { &exact_start } else { &float_start }, layout, a, pats))
        .collect::<Result<Vec<_>>>()?;
    Ok(Prop1Report {
        layout: layout.pairs().to_vec(),
        seed,
        tolerance: PREPARE_TOLERANCE,
        pass: records.iter().all(|r| r.pass),
        records,
    })
}

pub fn verify_prop1(layout: &GateLayout, samples: usize, patterns: usize, seed: u64) -> Result<Prop1Report> {
    verify_prop1_from(None, layout, samples, patterns, seed)
}
