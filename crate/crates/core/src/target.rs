//! The eight-qubit target family `ψ(α) = ∏ exp(iα_i Z⊗Z) |+⟩^{⊗8}`.
//!
//! Seven two-qubit phase gates act on pairs of parties `v1 … v8`, one qubit
//! per party. The wiring is a [`GateLayout`]; the repository ships a default
//! found by [`search_default_layout`] and frozen in `data/default_layout.txt`.

use std::collections::BTreeSet;
use std::f64::consts::{FRAC_PI_4, TAU};
use std::path::Path;

use itertools::Itertools;
use rayon::prelude::*;

use crate::feasibility::{every_line_tree_blocked_lazy, verify_prop2};
use crate::party::parties;
use crate::statevector::{Backend, PureState};
use crate::{Error, Party, QubitLabel, Result};

pub const NUM_PARTIES: u16 = 8;
pub const NUM_GATES: usize = 7;

const DEFAULT_LAYOUT_TEXT: &str = include_str!("../data/default_layout.txt");

/// Seven unordered pairs over `v1 … v8`; gate `i` acts on `pairs[i]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GateLayout {
    pairs: Vec<(Party, Party)>,
}

impl GateLayout {
    /// Validates the pair count, the endpoints and connectivity.
    pub fn new(pairs: Vec<(Party, Party)>) -> Result<Self> {
        if pairs.len() != NUM_GATES {
            return Err(Error::InvalidLayout(format!(
                "expected {NUM_GATES} pairs, got {}",
                pairs.len()
            )));
        }
        for &(a, b) in &pairs {
            for p in [a, b] {
                if !(1..=NUM_PARTIES).contains(&p.index()) {
                    return Err(Error::InvalidLayout(format!("party {p} outside v1..v8")));
                }
            }
            if a == b {
                return Err(Error::InvalidLayout(format!("gate on ({a}, {b}) has equal endpoints")));
            }
        }
        let layout = Self { pairs };
        if !layout.is_connected() {
            return Err(Error::InvalidLayout(
                "the gate pairs do not connect all eight parties".into(),
            ));
        }
        Ok(layout)
    }

    pub fn pairs(&self) -> &[(Party, Party)] {
        &self.pairs
    }

    /// The frozen default wiring.
    pub fn default_layout() -> Self {
        Self::parse(DEFAULT_LAYOUT_TEXT).expect("shipped default layout is valid")
    }

    /// Seven lines `vi vj`. Blank lines and `#` comments are ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut pairs = Vec::new();
        for (no, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let parse_err = |msg: String| Error::Parse { line: no + 1, msg };
            let toks: Vec<&str> = line.split_whitespace().collect();
            if toks.len() != 2 {
                return Err(parse_err(format!("expected `vi vj`, found `{line}`")));
            }
            let a: Party = toks[0].parse().map_err(|e: Error| parse_err(e.to_string()))?;
            let b: Party = toks[1].parse().map_err(|e: Error| parse_err(e.to_string()))?;
            pairs.push((a, b));
        }
        Self::new(pairs)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn to_text(&self) -> String {
        self.pairs.iter().map(|(a, b)| format!("{a} {b}\n")).collect()
    }

    fn is_connected(&self) -> bool {
        let mut seen = BTreeSet::from([Party::v(1)]);
        let mut changed = true;
        while changed {
            changed = false;
            for &(a, b) in &self.pairs {
                if seen.contains(&a) != seen.contains(&b) {
                    seen.insert(a);
                    seen.insert(b);
                    changed = true;
                }
            }
        }
        seen.len() == NUM_PARTIES as usize
    }

    /// Seven distinct pairs connecting eight parties form a spanning tree.
    pub fn is_spanning_tree(&self) -> bool {
        let distinct: BTreeSet<_> = self.pairs.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
        distinct.len() == NUM_GATES
    }

    /// Reorders a spanning tree so that gate `i` is the edge joining
    /// `v_{i+1}` to its parent when the tree hangs from `v8`.
    pub fn rooted_at_v8(&self) -> Result<Self> {
        if !self.is_spanning_tree() {
            return Err(Error::InvalidLayout("rooting needs a spanning tree".into()));
        }
        let root = Party::v(NUM_PARTIES);
        let mut parent: Vec<Option<Party>> = vec![None; NUM_PARTIES as usize + 1];
        let mut frontier = vec![root];
        let mut seen = BTreeSet::from([root]);
        while let Some(u) = frontier.pop() {
            for &(a, b) in &self.pairs {
                let other = if a == u { b } else if b == u { a } else { continue };
                if seen.insert(other) {
                    parent[other.index() as usize] = Some(u);
                    frontier.push(other);
                }
            }
        }
        let pairs = (1..NUM_PARTIES)
            .map(|k| {
                let p = parent[k as usize].expect("spanning tree reaches every party");
                let v = Party::v(k);
                (v.min(p), v.max(p))
            })
            .collect();
        Self::new(pairs)
    }
}

/// Seven angles in `[0, 2π)`.
#[derive(Clone, Debug, PartialEq)]
pub struct AlphaTuple([f64; NUM_GATES]);

impl AlphaTuple {
    pub fn new(alphas: [f64; NUM_GATES]) -> Result<Self> {
        if let Some(a) = alphas.iter().find(|a| !(0.0..TAU).contains(*a)) {
            return Err(Error::InvalidInput(format!("angle {a} outside [0, 2π)")));
        }
        Ok(Self(alphas))
    }

    /// `α₀ = (0, …, 0)`.
    pub fn zeros() -> Self {
        Self([0.0; NUM_GATES])
    }

    /// `α_{π/4} = (π/4, …, π/4)`.
    pub fn quarter_pi() -> Self {
        Self([FRAC_PI_4; NUM_GATES])
    }

    /// `π/4` on gate `i`, zero elsewhere.
    pub fn single(i: usize) -> Self {
        let mut a = [0.0; NUM_GATES];
        a[i] = FRAC_PI_4;
        Self(a)
    }

    pub fn values(&self) -> &[f64; NUM_GATES] {
        &self.0
    }
}

/// Qubit `(v_k, 0)` for `k = 1 … 8`.
pub fn target_labels() -> Vec<QubitLabel> {
    parties(NUM_PARTIES).into_iter().map(|p| QubitLabel::new(p, 0)).collect()
}

/// `ψ(α)`. In exact mode every angle must be 0 or π/4; with all seven at
/// π/4 the result carries `half_power = 15`.
pub fn build_target_state(layout: &GateLayout, alpha: &AlphaTuple, backend: Backend) -> Result<PureState> {
    let mut s = PureState::init_plus(&target_labels(), backend)?;
    for (&(a, b), &angle) in layout.pairs.iter().zip(alpha.values()) {
        s = s.apply_zz_phase(QubitLabel::new(a, 0), QubitLabel::new(b, 0), angle)?;
    }
    Ok(s)
}

/// Every spanning tree of `K8`, as sorted edge lists in lexicographic order.
pub fn spanning_tree_candidates() -> Vec<Vec<(Party, Party)>> {
    let edges: Vec<(Party, Party)> = parties(NUM_PARTIES).into_iter().tuple_combinations().collect();
    edges
        .into_iter()
        .combinations(NUM_GATES)
        .filter(|c| GateLayout { pairs: c.clone() }.is_connected())
        .collect()
}

/// First spanning-tree layout, in canonical order, for which every line
/// tree has a cut of exact Schmidt rank above 2 on `ψ(α_{π/4})`.
///
/// The check per candidate uses a lazy subset recursion over exact ranks;
/// the winner is re-verified by the full per-permutation enumeration. The
/// returned pairs are ordered by [`GateLayout::rooted_at_v8`].
pub fn search_default_layout() -> Result<GateLayout> {
    let candidates = spanning_tree_candidates();
    let found = candidates.par_iter().find_first(|pairs| {
        let layout = GateLayout { pairs: (*pairs).clone() };
        candidate_passes(&layout).unwrap_or(false)
    });
    let Some(pairs) = found else {
        return Err(Error::InvalidLayout(
            "no spanning-tree layout separates every line tree".into(),
        ));
    };
    let layout = GateLayout::new(pairs.clone())?.rooted_at_v8()?;
    let report = verify_prop2(&layout)?;
    if !report.pass {
        return Err(Error::InvalidLayout(
            "search winner failed the full enumeration".into(),
        ));
    }
    Ok(layout)
}

fn candidate_passes(layout: &GateLayout) -> Result<bool> {
    let psi = build_target_state(layout, &AlphaTuple::quarter_pi(), Backend::Exact)?;
    Ok(every_line_tree_blocked_lazy(&psi))
}
