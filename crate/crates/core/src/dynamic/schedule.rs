//! Search for a sending schedule that prepares a graph state within
//! per-party qubit budgets.
//!
//! The search works on an abstract model: where each qubit currently sits,
//! and which edges already carry their CZ. A CZ is applied as soon as its two
//! qubits share a party (CZs commute, so doing them early never hurts). Moves
//! are allocations and sends; iterative deepening on the number of sends
//! returns a schedule with the fewest sends. The concrete script is then
//! replayed by the simulator before it is returned.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use super::script::{LocalGate, ProtocolScript, ProtocolStep};
use super::sim::run_protocol;
use crate::feasibility::Configuration;
use crate::mbqc::{build_graph_state, layout_to_resource_graph, verify_prop1_from, Color, Prop1Report, StateGraph};
use crate::statevector::Backend;
use crate::target::GateLayout;
use crate::{Error, Party, QubitLabel, Result};

const MAX_QUBITS: usize = 16;
const MAX_PARTIES: usize = 15;
const NODE_LIMIT: u64 = 20_000_000;

#[derive(Clone, Debug, Serialize)]
pub struct DerivedScript {
    #[serde(skip)]
    pub script: ProtocolScript,
    /// `gate-tree` for the direct construction, `search` otherwise.
    pub method: &'static str,
    pub steps: usize,
    pub sends: usize,
    pub czs: usize,
    pub swaps: usize,
    pub peak_occupancy: BTreeMap<Party, usize>,
    pub search_nodes: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Move {
    Alloc(usize, usize),
    Send(usize, usize),
    Cz(usize),
}

/// Packed positions (4 bits per qubit, 0 = not yet created) and done edges.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
struct Node {
    loc: u64,
    done: u32,
}

impl Node {
    fn at(&self, q: usize) -> usize {
        ((self.loc >> (4 * q)) & 0xf) as usize
    }

    fn set(&mut self, q: usize, p1: usize) {
        self.loc = (self.loc & !(0xf << (4 * q))) | ((p1 as u64) << (4 * q));
    }
}

struct Model {
    n: usize,
    home: Vec<usize>,
    cap: Vec<usize>,
    edges: Vec<(usize, usize)>,
    /// `(neighbour, edge index)` per qubit.
    adj: Vec<Vec<(usize, usize)>>,
}

struct Search<'a> {
    m: &'a Model,
    seen: HashMap<Node, u32>,
    path: Vec<Move>,
    nodes: u64,
}

impl Model {
    fn count(&self, s: &Node, p: usize) -> usize {
        (0..self.n).filter(|&q| s.at(q) == p + 1).count()
    }

    fn all_done(&self) -> u32 {
        if self.edges.len() == 32 { u32::MAX } else { (1u32 << self.edges.len()) - 1 }
    }

    fn finished(&self, s: &Node, q: usize) -> bool {
        s.at(q) == self.home[q] + 1 && self.adj[q].iter().all(|&(_, e)| s.done & (1 << e) != 0)
    }

    /// A party where placing `q` is useful: its home, or where a neighbour
    /// it still owes a CZ sits or lives.
    fn useful(&self, s: &Node, q: usize, p: usize) -> bool {
        p == self.home[q]
            || self.adj[q]
                .iter()
                .any(|&(u, e)| s.done & (1 << e) == 0 && (s.at(u) == p + 1 || self.home[u] == p))
    }

    fn heuristic(&self, s: &Node) -> u32 {
        (0..self.n)
            .filter(|&q| s.at(q) != 0 && s.at(q) != self.home[q] + 1)
            .count() as u32
    }

    fn eager_cz(&self, s: &mut Node, q: usize, log: &mut Vec<Move>) {
        for &(u, e) in &self.adj[q] {
            if s.done & (1 << e) == 0 && s.at(u) != 0 && s.at(u) == s.at(q) {
                s.done |= 1 << e;
                log.push(Move::Cz(e));
            }
        }
    }
}

impl Search<'_> {
    fn dfs(&mut self, s: Node, budget: u32) -> bool {
        let m = self.m;
        if s.done == m.all_done() && (0..m.n).all(|q| s.at(q) == m.home[q] + 1) {
            return true;
        }
        self.nodes += 1;
        if self.nodes > NODE_LIMIT || m.heuristic(&s) > budget {
            return false;
        }
        match self.seen.get(&s) {
            Some(&b) if b >= budget => return false,
            _ => {}
        }
        self.seen.insert(s, budget);
        let mut moves: Vec<(Move, u32)> = Vec::new();
        for q in 0..m.n {
            if s.at(q) == 0 {
                let mut ps: Vec<usize> = (0..m.cap.len()).filter(|&p| m.useful(&s, q, p)).collect();
                ps.sort_by_key(|&p| p != m.home[q]);
                for p in ps {
                    if m.count(&s, p) < m.cap[p] {
                        moves.push((Move::Alloc(q, p), 0));
                    }
                }
            }
        }
        if budget > 0 {
            for q in 0..m.n {
                if s.at(q) == 0 || m.finished(&s, q) {
                    continue;
                }
                let mut ps: Vec<usize> = (0..m.cap.len())
                    .filter(|&p| p + 1 != s.at(q) && m.useful(&s, q, p))
                    .collect();
                ps.sort_by_key(|&p| p != m.home[q]);
                for p in ps {
                    if m.count(&s, p) < m.cap[p] {
                        moves.push((Move::Send(q, p), 1));
                    }
                }
            }
        }
        for (mv, cost) in moves {
            let mut next = s;
            let mark = self.path.len();
            self.path.push(mv);
            let q = match mv {
                Move::Alloc(q, p) | Move::Send(q, p) => {
                    next.set(q, p + 1);
                    q
                }
                Move::Cz(_) => unreachable!(),
            };
            m.eager_cz(&mut next, q, &mut self.path);
            if self.dfs(next, budget - cost) {
                return true;
            }
            self.path.truncate(mark);
            if self.nodes > NODE_LIMIT {
                return false;
            }
        }
        false
    }
}

/// Finds a script preparing the graph state of `g` in which every qubit
/// ends in its own label's party and slot, with every intermediate state
/// inside the budgets of `config`. The script is certified by simulation.
pub fn derive_graph_script(g: &StateGraph, config: &Configuration, max_sends: usize) -> Result<DerivedScript> {
    let labels = g.labels();
    let parties = config.parties();
    if labels.len() > MAX_QUBITS || parties.len() > MAX_PARTIES || g.edges().len() > 32 {
        return Err(Error::Guard(format!(
            "schedule search handles at most {MAX_QUBITS} qubits, {MAX_PARTIES} parties and 32 edges"
        )));
    }
    let pidx = |p: Party| {
        parties
            .iter()
            .position(|&x| x == p)
            .ok_or_else(|| Error::InvalidInput(format!("{p} is not in the configuration")))
    };
    let mut cap = Vec::new();
    for &p in &parties {
        let d = config.dim(p).unwrap();
        if !d.is_power_of_two() {
            return Err(Error::InvalidInput(format!("dimension {d} of {p} is not a power of two")));
        }
        cap.push(d.trailing_zeros() as usize);
    }
    let home = labels.iter().map(|l| pidx(l.party)).collect::<Result<Vec<_>>>()?;
    for l in &labels {
        if l.slot as usize >= cap[pidx(l.party)?] {
            return Err(Error::Capacity { step: 0, party: l.party, msg: format!("home slot of {l} does not exist") });
        }
    }
    let index = |l: &QubitLabel| labels.iter().position(|x| x == l).unwrap();
    let edges: Vec<(usize, usize)> = g.edges().iter().map(|(a, b)| (index(a), index(b))).collect();
    let mut adj = vec![Vec::new(); labels.len()];
    for (e, &(a, b)) in edges.iter().enumerate() {
        adj[a].push((b, e));
        adj[b].push((a, e));
    }
    let model = Model { n: labels.len(), home, cap, edges, adj };
    let is_target: Vec<bool> = labels.iter().map(|&l| g.color(l) == Some(Color::Target)).collect();
    if let Some(moves) = gate_tree_plan(&model, &is_target) {
        if let Ok(d) = certify(g, config, &model, &labels, &parties, &moves, "gate-tree", 0) {
            if d.sends <= max_sends {
                return Ok(d);
            }
        }
    }
    let mut search = Search { m: &model, seen: HashMap::new(), path: Vec::new(), nodes: 0 };
    let start = Node { loc: 0, done: 0 };
    let mut found = false;
    for budget in 0..=max_sends as u32 {
        search.path.clear();
        if search.dfs(start, budget) {
            found = true;
            break;
        }
        if search.nodes > NODE_LIMIT {
            return Err(Error::Guard(format!("schedule search exceeded {NODE_LIMIT} nodes")));
        }
    }
    if !found {
        return Err(Error::ScheduleNotFound(format!(
            "no schedule with at most {max_sends} sends fits the configuration"
        )));
    }
    certify(g, config, &model, &labels, &parties, &search.path, "search", search.nodes)
}

#[allow(clippy::too_many_arguments)]
fn certify(
    g: &StateGraph,
    config: &Configuration,
    model: &Model,
    labels: &[QubitLabel],
    parties: &[Party],
    moves: &[Move],
    method: &'static str,
    search_nodes: u64,
) -> Result<DerivedScript> {
    let script = emit(model, labels, parties, moves);
    let run = run_protocol(&script, config)?;
    let want = build_graph_state(g, Backend::Exact)?;
    if !run.state.exactly_equal(&want)? {
        return Err(Error::ScheduleNotFound("derived script does not reproduce the graph state".into()));
    }
    Ok(DerivedScript {
        method,
        steps: script.len(),
        sends: script.sends(),
        czs: script.count_gates(|g| matches!(g, LocalGate::Cz(..))),
        swaps: script.count_gates(|g| matches!(g, LocalGate::Swap(..))),
        peak_occupancy: run.peak_occupancy,
        search_nodes,
        script,
    })
}

/// Direct schedule for a tree of targets joined through degree-2
/// auxiliaries, where each auxiliary lives with its child-side target and
/// the root target's party holds nothing else.
///
/// A subtree is built bottom-up. The auxiliary towards a child is created
/// next to the parent's target, entangled, and sent to the child's party.
/// When a target cannot stay at home while its children are processed
/// (home full, or the root), it is hosted at one child's empty party and
/// sent home once the last auxiliary has been created there.
fn gate_tree_plan(m: &Model, is_target: &[bool]) -> Option<Vec<Move>> {
    let targets: Vec<usize> = (0..m.n).filter(|&q| is_target[q]).collect();
    let nparties = m.cap.len();
    let mut target_at = vec![None; nparties];
    for &t in &targets {
        if target_at[m.home[t]].replace(t).is_some() {
            return None;
        }
    }
    // aux_up[t]: auxiliary towards t's parent; parent[t]: that parent target
    let mut aux_up = vec![None; m.n];
    let mut parent = vec![None; m.n];
    for a in (0..m.n).filter(|&q| !is_target[q]) {
        let nb: Vec<usize> = m.adj[a].iter().map(|x| x.0).collect();
        if nb.len() != 2 || !nb.iter().all(|&u| is_target[u]) {
            return None;
        }
        let child = *nb.iter().find(|&&u| m.home[u] == m.home[a])?;
        let par = if nb[0] == child { nb[1] } else { nb[0] };
        if aux_up[child].replace(a).is_some() {
            return None;
        }
        parent[child] = Some(par);
    }
    let roots: Vec<usize> = targets.iter().copied().filter(|&t| aux_up[t].is_none()).collect();
    let [root] = roots[..] else { return None };
    if m.cap[m.home[root]] < 1 || (0..m.n).any(|q| q != root && m.home[q] == m.home[root]) {
        return None;
    }
    for &t in &targets {
        if t != root && m.cap[m.home[t]] < 2 {
            return None;
        }
    }
    let mut children = vec![Vec::new(); m.n];
    for &t in &targets {
        if let Some(p) = parent[t] {
            children[p].push(t);
        }
    }
    let edge = |u: usize, w: usize| m.adj[u].iter().find(|x| x.0 == w).map(|x| x.1).unwrap();
    let mut moves = Vec::new();
    let mut visited = 0;
    fn at_home(x: usize, m: &Model, ch: &[Vec<usize>], up: &[Option<usize>], edge: &dyn Fn(usize, usize) -> usize, out: &mut Vec<Move>, seen: &mut usize) {
        *seen += 1;
        out.push(Move::Alloc(x, m.home[x]));
        for &c in &ch[x] {
            at_home(c, m, ch, up, edge, out, seen);
            attach(c, x, m.home[x], m, up, edge, out);
        }
    }
    fn attach(c: usize, x: usize, host: usize, m: &Model, up: &[Option<usize>], edge: &dyn Fn(usize, usize) -> usize, out: &mut Vec<Move>) {
        let a = up[c].unwrap();
        out.push(Move::Alloc(a, host));
        out.push(Move::Cz(edge(a, x)));
        out.push(Move::Send(a, m.home[c]));
        out.push(Move::Cz(edge(a, c)));
    }
    fn away(x: usize, m: &Model, ch: &[Vec<usize>], up: &[Option<usize>], edge: &dyn Fn(usize, usize) -> usize, out: &mut Vec<Move>, seen: &mut usize) {
        *seen += 1;
        let Some((&g, rest)) = ch[x].split_last() else {
            out.push(Move::Alloc(x, m.home[x]));
            if let Some(a) = up[x] {
                out.push(Move::Cz(edge(a, x)));
            }
            return;
        };
        let host = m.home[g];
        out.push(Move::Alloc(x, host));
        for &c in rest {
            at_home(c, m, ch, up, edge, out, seen);
            attach(c, x, host, m, up, edge, out);
        }
        let ag = up[g].unwrap();
        out.push(Move::Alloc(ag, host));
        out.push(Move::Cz(edge(ag, x)));
        out.push(Move::Send(x, m.home[x]));
        if let Some(a) = up[x] {
            out.push(Move::Cz(edge(a, x)));
        }
        away(g, m, ch, up, edge, out, seen);
    }
    away(root, m, &children, &aux_up, &edge, &mut moves, &mut visited);
    (visited == targets.len()).then_some(moves)
}

fn party_index(parties: &[Party], p: Party) -> usize {
    parties.iter().position(|&x| x == p).unwrap()
}

/// Turns abstract moves into concrete steps, then moves every qubit into
/// its home slot with local swaps.
fn emit(m: &Model, labels: &[QubitLabel], parties: &[Party], path: &[Move]) -> ProtocolScript {
    let mut at: Vec<Option<QubitLabel>> = vec![None; m.n];
    let mut used: Vec<Vec<bool>> = m.cap.iter().map(|&c| vec![false; c]).collect();
    let mut steps = Vec::new();
    let place = |q: usize, p: usize, used: &mut Vec<Vec<bool>>| -> QubitLabel {
        let want = labels[q].slot as usize;
        let slot = if p == m.home[q] && !used[p][want] {
            want
        } else {
            used[p].iter().position(|&u| !u).expect("search respects capacity")
        };
        used[p][slot] = true;
        QubitLabel::new(parties[p], slot as u8)
    };
    for &mv in path {
        match mv {
            Move::Alloc(q, p) => {
                let l = place(q, p, &mut used);
                at[q] = Some(l);
                steps.push(ProtocolStep::Alloc(l));
            }
            Move::Send(q, p) => {
                let from = at[q].unwrap();
                used[party_index(parties, from.party)][from.slot as usize] = false;
                let to = place(q, p, &mut used);
                at[q] = Some(to);
                steps.push(ProtocolStep::Send { from, to });
            }
            Move::Cz(e) => {
                let (a, b) = (at[m.edges[e].0].unwrap(), at[m.edges[e].1].unwrap());
                steps.push(ProtocolStep::Gate(a.party, LocalGate::Cz(a.slot, b.slot)));
            }
        }
    }
    // resolve slot permutations inside each party
    while let Some(q) = (0..m.n).find(|&q| at[q] != Some(labels[q])) {
        let (cur, want) = (at[q].unwrap(), labels[q]);
        steps.push(ProtocolStep::Gate(cur.party, LocalGate::Swap(cur.slot, want.slot)));
        if let Some(r) = (0..m.n).find(|&r| at[r] == Some(want)) {
            at[r] = Some(cur);
        }
        at[q] = Some(want);
    }
    ProtocolScript::new(steps)
}

/// Script preparing the fifteen-qubit resource of `layout` under the
/// `(4, …, 4, 2)` configuration.
pub fn derive_phires_script(layout: &GateLayout) -> Result<DerivedScript> {
    if !layout.is_spanning_tree() {
        return Err(Error::NotATree);
    }
    let g = layout_to_resource_graph(layout);
    derive_graph_script(&g, &Configuration::d0(), g.edges().len())
}

#[derive(Clone, Debug, Serialize)]
pub struct Prop3Report {
    pub layout: Vec<(Party, Party)>,
    pub derived: DerivedScript,
    pub script: Vec<String>,
    /// Per-party budgets in qubits.
    pub slots: BTreeMap<Party, u32>,
    pub equals_graph_state: bool,
    /// Measurement stage run on the simulator's output state.
    pub chain: Prop1Report,
    pub pass: bool,
}

/// Derives the resource script, replays it under `(4, …, 4, 2)`, and feeds
/// the simulated state to the measurement stage.
pub fn verify_prop3(layout: &GateLayout, samples: usize, patterns: usize, seed: u64) -> Result<Prop3Report> {
    let derived = derive_phires_script(layout)?;
    let config = Configuration::d0();
    let run = run_protocol(&derived.script, &config)?;
    let g = layout_to_resource_graph(layout);
    let equals_graph_state = run.state.exactly_equal(&build_graph_state(&g, Backend::Exact)?)?;
    let chain = verify_prop1_from(Some(&run.state), layout, samples, patterns, seed)?;
    Ok(Prop3Report {
        layout: layout.pairs().to_vec(),
        script: derived.script.steps.iter().map(|s| s.to_string()).collect(),
        slots: config.dims().iter().map(|(&p, &d)| (p, d.trailing_zeros())).collect(),
        pass: equals_graph_state && chain.pass,
        equals_graph_state,
        chain,
        derived,
    })
}
