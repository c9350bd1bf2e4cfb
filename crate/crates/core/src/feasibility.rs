//! Bipartite resource distributions and the tree rank condition.
//!
//! A distribution of maximally entangled pairs is a [`ResourceGraph`] whose
//! edges carry Schmidt-rank capacities `M_e`. On a tree, the resource can be
//! converted into a target iff `M_e ≥ R_e` for every edge, where `R_e` is the
//! target's Schmidt rank across the cut obtained by deleting `e`.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use itertools::Itertools;
use rayon::prelude::*;
use serde::Serialize;

use crate::exact::ScaledVector;
use crate::party::parties;
use crate::statevector::{float_schmidt_rank, Backend, PureState};
use crate::target::{build_target_state, target_labels, AlphaTuple, GateLayout, NUM_PARTIES};
use crate::{Error, Party, QubitLabel, Result};

/// Largest party count accepted by the exhaustive enumeration.
pub const MAX_ENUM_PARTIES: usize = 10;

/// Per-party local dimension budget `d^{(v)}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Configuration {
    dims: BTreeMap<Party, u64>,
}

impl Configuration {
    pub fn new(dims: BTreeMap<Party, u64>) -> Result<Self> {
        if let Some((p, _)) = dims.iter().find(|(_, &d)| d < 1) {
            return Err(Error::InvalidInput(format!("dimension of {p} must be at least 1")));
        }
        Ok(Self { dims })
    }

    /// Dimensions for `v1, v2, …` in order.
    pub fn from_dims(dims: &[u64]) -> Result<Self> {
        Self::new(parties(dims.len() as u16).into_iter().zip(dims.iter().copied()).collect())
    }

    /// `(4, 4, 4, 4, 4, 4, 4, 2)`: two qubits for `v1 … v7`, one for `v8`.
    pub fn d0() -> Self {
        Self::from_dims(&[4, 4, 4, 4, 4, 4, 4, 2]).unwrap()
    }

    /// `(4, 2, 2, 2)`.
    pub fn d1() -> Self {
        Self::from_dims(&[4, 2, 2, 2]).unwrap()
    }

    /// Lines of `vk dim`; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut dims = BTreeMap::new();
        for (no, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: String| Error::Parse { line: no + 1, msg };
            let toks: Vec<&str> = line.split_whitespace().collect();
            let [p, d] = toks[..] else {
                return Err(err(format!("expected `vk dim`, found `{line}`")));
            };
            let party: Party = p.parse().map_err(|e: Error| err(e.to_string()))?;
            let dim: u64 = d.parse().map_err(|_| err(format!("bad dimension `{d}`")))?;
            if dim < 1 {
                return Err(err("dimension must be at least 1".into()));
            }
            if dims.insert(party, dim).is_some() {
                return Err(err(format!("party {party} listed twice")));
            }
        }
        if dims.is_empty() {
            return Err(Error::Parse { line: 1, msg: "configuration lists no parties".into() });
        }
        Self::new(dims)
    }

    /// `d0`, `d1`, or a path to a configuration file.
    pub fn load(name_or_path: &str) -> Result<Self> {
        match name_or_path {
            "d0" => Ok(Self::d0()),
            "d1" => Ok(Self::d1()),
            path => Self::parse(&std::fs::read_to_string(Path::new(path))?),
        }
    }

    pub fn dim(&self, p: Party) -> Option<u64> {
        self.dims.get(&p).copied()
    }

    pub fn parties(&self) -> Vec<Party> {
        self.dims.keys().copied().collect()
    }

    pub fn dims(&self) -> &BTreeMap<Party, u64> {
        &self.dims
    }
}

/// Parties joined by maximally entangled pairs of Schmidt rank `M_e ≥ 2`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct ResourceGraph {
    parties: Vec<Party>,
    #[serde(serialize_with = "edge_list")]
    edges: BTreeMap<(Party, Party), u64>,
}

fn edge_list<S: serde::Serializer>(edges: &BTreeMap<(Party, Party), u64>, s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(edges.iter().map(|(&(a, b), &m)| (a, b, m)))
}

impl ResourceGraph {
    pub fn new(parties: Vec<Party>, edges: impl IntoIterator<Item = ((Party, Party), u64)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for ((a, b), m) in edges {
            if a == b {
                return Err(Error::InvalidInput(format!("self-loop at {a}")));
            }
            if !parties.contains(&a) || !parties.contains(&b) {
                return Err(Error::InvalidInput(format!("edge ({a}, {b}) leaves the party set")));
            }
            if m < 2 {
                return Err(Error::InvalidInput(format!("capacity {m} on ({a}, {b}) is below 2")));
            }
            if map.insert((a.min(b), a.max(b)), m).is_some() {
                return Err(Error::InvalidInput(format!("duplicate edge ({a}, {b})")));
            }
        }
        let mut parties = parties;
        parties.sort();
        parties.dedup();
        Ok(Self { parties, edges: map })
    }

    /// Path `order[0] – order[1] – …` with every capacity `m`.
    pub fn path(order: &[Party], m: u64) -> Result<Self> {
        Self::new(order.to_vec(), order.iter().tuple_windows().map(|(&a, &b)| ((a, b), m)))
    }

    pub fn parties(&self) -> &[Party] {
        &self.parties
    }

    pub fn edges(&self) -> &BTreeMap<(Party, Party), u64> {
        &self.edges
    }

    pub fn degree(&self, p: Party) -> usize {
        self.edges.keys().filter(|(a, b)| *a == p || *b == p).count()
    }

    /// `∏_{e ∋ p} M_e`.
    pub fn load(&self, p: Party) -> u64 {
        self.edges
            .iter()
            .filter(|((a, b), _)| *a == p || *b == p)
            .map(|(_, &m)| m)
            .product()
    }

    pub fn fits(&self, config: &Configuration) -> bool {
        self.parties
            .iter()
            .all(|&p| config.dim(p).is_some_and(|d| self.load(p) <= d))
    }

    /// Parties reachable from `start`, optionally ignoring one edge.
    fn component(&self, start: Party, skip: Option<(Party, Party)>) -> BTreeSet<Party> {
        let mut seen = BTreeSet::from([start]);
        let mut stack = vec![start];
        while let Some(u) = stack.pop() {
            for &(a, b) in self.edges.keys() {
                if Some((a, b)) == skip {
                    continue;
                }
                let w = if a == u { b } else if b == u { a } else { continue };
                if seen.insert(w) {
                    stack.push(w);
                }
            }
        }
        seen
    }

    pub fn is_connected(&self) -> bool {
        match self.parties.first() {
            None => true,
            Some(&p) => self.component(p, None).len() == self.parties.len(),
        }
    }

    pub fn is_tree(&self) -> bool {
        self.is_connected() && self.edges.len() + 1 == self.parties.len()
    }

    pub fn is_path(&self) -> bool {
        self.is_tree() && self.parties.iter().all(|&p| self.degree(p) <= 2)
    }
}

/// The line `u1 – … – u7 – v8` where `(u1, …, u7)` permutes `v1 … v7`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LineTree {
    order: Vec<Party>,
}

impl LineTree {
    pub fn new(order: Vec<Party>) -> Result<Self> {
        let sorted: Vec<Party> = order.iter().copied().sorted().collect();
        if sorted != parties(NUM_PARTIES - 1) {
            return Err(Error::InvalidInput("line tree order must permute v1..v7".into()));
        }
        Ok(Self { order })
    }

    /// All 5040 line trees in lexicographic permutation order.
    pub fn all() -> Vec<LineTree> {
        parties(NUM_PARTIES - 1)
            .into_iter()
            .permutations(NUM_PARTIES as usize - 1)
            .map(|order| LineTree { order })
            .collect()
    }

    /// `u1 … u7, v8`.
    pub fn vertices(&self) -> Vec<Party> {
        let mut v = self.order.clone();
        v.push(Party::v(NUM_PARTIES));
        v
    }

    /// `{u1, …, uj}`, the side cut off by deleting edge `j` (1-based).
    pub fn prefix(&self, j: usize) -> &[Party] {
        &self.order[..j]
    }

    pub fn resource_graph(&self, m: u64) -> ResourceGraph {
        ResourceGraph::path(&self.vertices(), m).expect("line tree is a valid path")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EdgeCheck {
    pub edge: (Party, Party),
    pub capacity: u64,
    pub rank: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FeasibilityReport {
    pub feasible: bool,
    pub edges: Vec<EdgeCheck>,
}

/// Tests `M_e ≥ R_e(target)` on every edge of a tree. The target must hold
/// exactly one qubit per tree vertex.
pub fn tree_feasible(tree: &ResourceGraph, target: &PureState) -> Result<FeasibilityReport> {
    if !tree.is_tree() {
        return Err(Error::NotATree);
    }
    let target_parties: BTreeSet<Party> = target.labels().iter().map(|l| l.party).collect();
    if target_parties.len() != target.num_qubits()
        || target_parties.iter().copied().collect::<Vec<_>>() != tree.parties()
    {
        return Err(Error::InvalidInput(
            "target must hold exactly one qubit per tree vertex".into(),
        ));
    }
    let mut edges = Vec::new();
    for (&(a, b), &capacity) in tree.edges() {
        let side = tree.component(a, Some((a, b)));
        let left: Vec<QubitLabel> = target
            .labels()
            .iter()
            .copied()
            .filter(|l| side.contains(&l.party))
            .collect();
        let rank = target.schmidt_rank(&left)?;
        edges.push(EdgeCheck { edge: (a, b), capacity, rank });
    }
    Ok(FeasibilityReport {
        feasible: edges.iter().all(|e| e.capacity as usize >= e.rank),
        edges,
    })
}

/// Every connected distribution with capacities `≥ 2` whose per-party load
/// `∏_{e∋v} M_e` fits the configuration, sorted by edge list.
pub fn enumerate_admissible_distributions(config: &Configuration) -> Result<Vec<ResourceGraph>> {
    let ps = config.parties();
    if ps.len() > MAX_ENUM_PARTIES {
        return Err(Error::Guard(format!(
            "{} parties exceeds the enumeration limit of {MAX_ENUM_PARTIES}",
            ps.len()
        )));
    }
    let dims: Vec<u64> = ps.iter().map(|&p| config.dim(p).unwrap()).collect();
    let pairs: Vec<(usize, usize)> = (0..ps.len()).tuple_combinations().collect();
    let mut out = Vec::new();
    let mut loads = vec![1u64; ps.len()];
    let mut chosen = vec![0u64; pairs.len()];
    enumerate_rec(0, &pairs, &dims, &mut loads, &mut chosen, &mut |caps| {
        let edges = pairs
            .iter()
            .zip(caps)
            .filter(|(_, &m)| m > 0)
            .map(|(&(i, j), &m)| ((ps[i], ps[j]), m));
        let g = ResourceGraph::new(ps.clone(), edges).expect("enumerated edges are valid");
        if g.is_connected() {
            out.push(g);
        }
    });
    out.sort_by(|a, b| a.edges.iter().cmp(b.edges.iter()));
    Ok(out)
}

fn enumerate_rec(
    idx: usize,
    pairs: &[(usize, usize)],
    dims: &[u64],
    loads: &mut [u64],
    chosen: &mut [u64],
    emit: &mut dyn FnMut(&[u64]),
) {
    if idx == pairs.len() {
        emit(chosen);
        return;
    }
    let (i, j) = pairs[idx];
    chosen[idx] = 0;
    enumerate_rec(idx + 1, pairs, dims, loads, chosen, emit);
    let mut m = 2;
    while loads[i] * m <= dims[i] && loads[j] * m <= dims[j] {
        loads[i] *= m;
        loads[j] *= m;
        chosen[idx] = m;
        enumerate_rec(idx + 1, pairs, dims, loads, chosen, emit);
        loads[i] /= m;
        loads[j] /= m;
        m += 1;
    }
    chosen[idx] = 0;
}

/// Exact Schmidt ranks of an eight-party state for every cut
/// `S ⊆ {v1 … v7}`, indexed by bitmask (bit `k−1` for `v_k`).
pub struct CutRankTable {
    ranks: Vec<usize>,
}

impl CutRankTable {
    pub fn compute(psi: &PureState) -> Result<Self> {
        let positions = seven_positions(psi)?;
        let v = psi
            .exact()
            .ok_or_else(|| Error::InvalidInput("cut rank table needs an exact state".into()))?;
        let ranks = (0u32..128)
            .into_par_iter()
            .map(|mask| {
                if mask == 0 {
                    return Ok(1);
                }
                crate::exact::schmidt_rank_exact(v, &mask_positions(mask, &positions))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { ranks })
    }

    pub fn rank(&self, set: &[Party]) -> usize {
        self.ranks[party_mask(set) as usize]
    }

    pub fn by_mask(&self, mask: u32) -> usize {
        self.ranks[mask as usize]
    }
}

/// Cuts (as masks) where the floating SVD rank of `psi` disagrees with
/// `table`.
pub fn float_rank_mismatches(psi: &PureState, table: &CutRankTable) -> Result<Vec<u32>> {
    let positions = seven_positions(psi)?;
    let amps = psi.float_amplitudes();
    let n = psi.num_qubits();
    let bad = (1u32..128)
        .into_par_iter()
        .map(|mask| Ok((mask, float_schmidt_rank(&amps, n, &mask_positions(mask, &positions))?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(bad.into_iter().filter(|&(m, r)| table.by_mask(m) != r).map(|(m, _)| m).collect())
}

fn seven_positions(psi: &PureState) -> Result<Vec<usize>> {
    if psi.num_qubits() != NUM_PARTIES as usize {
        return Err(Error::InvalidInput("expected an eight-qubit target".into()));
    }
    target_labels()
        .into_iter()
        .take(NUM_PARTIES as usize - 1)
        .map(|l| psi.position(l))
        .collect()
}

fn mask_positions(mask: u32, positions: &[usize]) -> Vec<usize> {
    (0..positions.len())
        .filter(|b| mask & (1 << b) != 0)
        .map(|b| positions[b])
        .collect()
}

fn party_mask(set: &[Party]) -> u32 {
    set.iter().fold(0, |m, p| m | 1 << (p.index() - 1))
}

/// Whether every line tree has some cut of rank above 2 on `psi`, decided by
/// a subset recursion: a chain `∅ ⊂ S1 ⊂ … ⊂ S7` of rank-≤2 cuts exists iff
/// some line tree survives. Ranks are computed only for reachable subsets.
pub fn every_line_tree_blocked_lazy(psi: &PureState) -> bool {
    let Ok(positions) = seven_positions(psi) else { return false };
    let Some(v) = psi.exact() else { return false };
    let mut reachable = [false; 128];
    reachable[0] = true;
    let mut masks: Vec<u32> = (1u32..128).collect();
    masks.sort_by_key(|m| m.count_ones());
    for mask in masks {
        let from_reachable = (0..7).any(|b| mask & (1 << b) != 0 && reachable[(mask & !(1 << b)) as usize]);
        if !from_reachable {
            continue;
        }
        let rank = crate::exact::schmidt_rank_exact(v, &mask_positions(mask, &positions)).unwrap_or(usize::MAX);
        reachable[mask as usize] = rank <= 2;
    }
    !reachable[127]
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TreeRecord {
    pub index: usize,
    pub permutation: Vec<Party>,
    /// `R_e` for the prefix cuts `{u1}`, `{u1,u2}`, …, `{u1,…,u7}`.
    pub ranks: Vec<usize>,
    pub max_rank: usize,
    /// Prefix length of the first cut with rank above 2.
    pub witness_cut: Option<usize>,
    pub witness_edge: Option<(Party, Party)>,
    pub violated: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Prop2Report {
    pub layout: Vec<(Party, Party)>,
    pub alphas: Vec<f64>,
    pub half_power: i64,
    pub amplitudes: usize,
    pub trees: usize,
    pub violated_trees: usize,
    pub records: Vec<TreeRecord>,
    pub pass: bool,
}

/// Checks every line tree against `ψ(α_{π/4})`.
pub fn verify_prop2(layout: &GateLayout) -> Result<Prop2Report> {
    verify_prop2_for(layout, &AlphaTuple::quarter_pi())
}

/// Same check for any exact-capable angle tuple.
pub fn verify_prop2_for(layout: &GateLayout, alpha: &AlphaTuple) -> Result<Prop2Report> {
    let psi = build_target_state(layout, alpha, Backend::Exact)?;
    let exact: &ScaledVector = psi.exact().expect("exact build");
    let table = CutRankTable::compute(&psi)?;
    let records: Vec<TreeRecord> = LineTree::all()
        .into_iter()
        .enumerate()
        .map(|(index, tree)| {
            let ranks: Vec<usize> = (1..NUM_PARTIES as usize).map(|j| table.rank(tree.prefix(j))).collect();
            let witness_cut = ranks.iter().position(|&r| r > 2).map(|i| i + 1);
            let verts = tree.vertices();
            TreeRecord {
                index,
                permutation: verts.clone(),
                max_rank: *ranks.iter().max().unwrap(),
                witness_edge: witness_cut.map(|j| (verts[j - 1], verts[j])),
                violated: witness_cut.is_some(),
                witness_cut,
                ranks,
            }
        })
        .collect();
    let violated_trees = records.iter().filter(|r| r.violated).count();
    Ok(Prop2Report {
        layout: layout.pairs().to_vec(),
        alphas: alpha.values().to_vec(),
        half_power: exact.half_power(),
        amplitudes: exact.len(),
        trees: records.len(),
        violated_trees,
        pass: violated_trees == records.len(),
        records,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WarmupReport {
    pub ghz: FeasibilityReport,
    pub w: FeasibilityReport,
    /// Connected distributions fitting one qubit per party `(2, 2, 2)`.
    pub qubit_only_distributions: usize,
    pub pass: bool,
}

/// Three parties: GHZ and W both follow from two Bell pairs on a line, yet
/// no bipartite distribution fits three single-qubit parties.
pub fn ghz_w_warmup() -> Result<WarmupReport> {
    let ps = parties(3);
    let labels: Vec<QubitLabel> = ps.iter().map(|&p| QubitLabel::new(p, 0)).collect();
    let ghz = PureState::from_exact(labels.clone(), ScaledVector::from_ints(&[1, 0, 0, 0, 0, 0, 0, 1], 1))?;
    let w_amps = [0.0, 1.0, 1.0, 0.0, 1.0, 0.0, 0.0, 0.0]
        .iter()
        .map(|&x| num_complex::Complex64::new(x, 0.0))
        .collect();
    let w = PureState::from_float(labels, w_amps)?;
    let line = ResourceGraph::path(&ps, 2)?;
    let ghz = tree_feasible(&line, &ghz)?;
    let w = tree_feasible(&line, &w)?;
    let qubit_only = enumerate_admissible_distributions(&Configuration::from_dims(&[2, 2, 2])?)?.len();
    Ok(WarmupReport {
        pass: ghz.feasible && w.feasible && qubit_only == 0,
        ghz,
        w,
        qubit_only_distributions: qubit_only,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(k: u16) -> Party {
        Party::v(k)
    }

    fn ghz8() -> PureState {
        let mut e = vec![0i64; 256];
        e[0] = 1;
        e[255] = 1;
        PureState::from_exact(target_labels(), ScaledVector::from_ints(&e, 1)).unwrap()
    }

    /// Connected capacity assignments on three parties, by direct listing.
    fn brute_three(dims: [u64; 3]) -> usize {
        let maxd = *dims.iter().max().unwrap();
        let caps: Vec<u64> = std::iter::once(0).chain(2..=maxd).collect();
        let mut count = 0;
        for &m01 in &caps {
            for &m02 in &caps {
                for &m12 in &caps {
                    let f = |m: u64| if m == 0 { 1 } else { m };
                    let loads = [f(m01) * f(m02), f(m01) * f(m12), f(m02) * f(m12)];
                    let edges = [m01, m02, m12].iter().filter(|&&m| m > 0).count();
                    if loads.iter().zip(&dims).all(|(l, d)| l <= d) && edges >= 2 {
                        count += 1;
                    }
                }
            }
        }
        count
    }

    #[test]
    fn configuration_presets_and_parsing() {
        assert_eq!(Configuration::d0().dim(v(8)), Some(2));
        assert_eq!(Configuration::d0().dim(v(3)), Some(4));
        assert_eq!(Configuration::d1().parties().len(), 4);
        let c = Configuration::parse("# dims\nv1 4\nv2 2\n").unwrap();
        assert_eq!(c, Configuration::from_dims(&[4, 2]).unwrap());
        assert!(matches!(Configuration::parse("v1 4\nv2\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(Configuration::parse("v1 0\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(Configuration::parse("v1 2\nv1 2"), Err(Error::Parse { line: 2, .. })));
    }

    #[test]
    fn ghz_on_capacity_two_line_is_feasible() {
        let tree = ResourceGraph::path(&parties(8), 2).unwrap();
        let r = tree_feasible(&tree, &ghz8()).unwrap();
        assert!(r.feasible);
        assert!(r.edges.iter().all(|e| e.rank == 2));
    }

    #[test]
    fn product_target_is_always_feasible() {
        let plus = PureState::init_plus(&target_labels(), Backend::Exact).unwrap();
        let star = ResourceGraph::new(parties(8), (2..=8).map(|k| ((v(1), v(k)), 2))).unwrap();
        let r = tree_feasible(&star, &plus).unwrap();
        assert!(r.feasible);
        assert!(r.edges.iter().all(|e| e.rank == 1));
    }

    #[test]
    fn cyclic_graph_is_rejected() {
        let ps = parties(3);
        let tri = ResourceGraph::new(ps.clone(), [((v(1), v(2)), 2), ((v(2), v(3)), 2), ((v(1), v(3)), 2)]).unwrap();
        let t = PureState::init_plus(&ps.iter().map(|&p| QubitLabel::new(p, 0)).collect::<Vec<_>>(), Backend::Exact).unwrap();
        assert!(matches!(tree_feasible(&tri, &t), Err(Error::NotATree)));
    }

    #[test]
    fn raising_capacity_keeps_feasibility() {
        let ghz = ghz8();
        for m in 1..=4u64 {
            let tree = ResourceGraph::path(&parties(8), m.max(2)).unwrap();
            let before = tree_feasible(&tree, &ghz).unwrap().feasible;
            let raised = ResourceGraph::path(&parties(8), m.max(2) + 1).unwrap();
            assert!(!before || tree_feasible(&raised, &ghz).unwrap().feasible);
        }
    }

    #[test]
    fn two_parties_four_four() {
        let gs = enumerate_admissible_distributions(&Configuration::from_dims(&[4, 4]).unwrap()).unwrap();
        let caps: Vec<u64> = gs.iter().map(|g| *g.edges().values().next().unwrap()).collect();
        assert_eq!(caps, vec![2, 3, 4]);
    }

    #[test]
    fn three_party_enumeration_matches_brute_force() {
        for dims in [[2, 2, 2], [2, 4, 2], [4, 4, 4], [3, 9, 2], [4, 2, 8], [6, 6, 6]] {
            let got = enumerate_admissible_distributions(&Configuration::from_dims(&dims).unwrap()).unwrap();
            assert_eq!(got.len(), brute_three(dims), "dims {dims:?}");
            for g in &got {
                assert!(g.fits(&Configuration::from_dims(&dims).unwrap()));
                assert!(g.is_connected());
            }
        }
        // frozen counts from the brute-force listing
        assert_eq!(brute_three([2, 2, 2]), 0);
        assert_eq!(brute_three([4, 4, 4]), 4);
    }

    #[test]
    fn enumeration_guard() {
        let cfg = Configuration::from_dims(&[2; 11]).unwrap();
        assert!(matches!(enumerate_admissible_distributions(&cfg), Err(Error::Guard(_))));
    }

    #[test]
    fn line_tree_prefixes() {
        let t = LineTree::new(vec![v(3), v(1), v(2), v(7), v(6), v(5), v(4)]).unwrap();
        assert_eq!(t.prefix(2), &[v(3), v(1)]);
        assert_eq!(t.vertices().last(), Some(&v(8)));
        assert!(t.resource_graph(2).is_path());
        assert!(LineTree::new(vec![v(1); 7]).is_err());
        assert_eq!(LineTree::all().len(), 5040);
    }

    #[test]
    fn lazy_recursion_agrees_with_enumeration() {
        let chain = GateLayout::new((1..8).map(|k| (v(k), v(k + 1))).collect()).unwrap();
        let psi = build_target_state(&chain, &AlphaTuple::quarter_pi(), Backend::Exact).unwrap();
        // the chain's own order survives, so not every tree is blocked
        assert!(!every_line_tree_blocked_lazy(&psi));
        assert!(!verify_prop2(&chain).unwrap().pass);
    }

    #[test]
    fn warmup() {
        let r = ghz_w_warmup().unwrap();
        assert!(r.ghz.feasible && r.w.feasible);
        assert_eq!(r.qubit_only_distributions, 0);
        assert!(r.pass);
    }
}
